mod common;

use std::time::Instant;

use common::oracle::{self, Fixture, Mover};
use criticality::models::markov::MarkovChainModel;
use criticality::models::{MotionModel, Trajectory};
use criticality::probabilistic::{p_mc, p_smh, p_srs, ControlSequence, DiscreteControls, Hypotheses, PmcConfig, SrsInput, SrsInterval};
use criticality::rng::{stream, unit, Rng};
use criticality::scene::MetricContext;
use criticality::types::{ActorId, ActorState, Scene};
use criticality::{Predictor, Vec2};
use proptest::prelude::*;

fn normalized(r: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| 0.05 + unit(r)).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|x| x / s).collect()
}

fn vary(m: &Mover, r: &mut impl Rng) -> Mover {
    Mover { v: m.v * (0.5 + unit(r)), ..*m }
}

#[test]
fn p_smh_equals_enumeration() {
    let mut nonzero = 0;
    for i in 0..60u64 {
        let base = Fixture { constant_acceleration: false, ..Fixture::random(31, i) };
        let r = &mut stream(32, i);
        let n = 1 + (unit(r) * 8.0) as usize;
        let m = 1 + (unit(r) * (64 / n) as f64) as usize;
        assert!(n * m <= 64);
        let ego: Vec<Mover> = (0..n).map(|_| vary(&base.a1, r)).collect();
        let other: Vec<Mover> = (0..m).map(|_| vary(&base.a2, r)).collect();
        let (p, q) = (normalized(r, n), normalized(r, m));

        let ctx = base.ctx();
        let predict = |mv: &Mover, id| ctx.predict(&mv.state(id)).unwrap();
        let ego_h = Hypotheses::new(ego.iter().map(|mv| predict(mv, 1)).zip(p.iter().copied()).collect()).unwrap();
        let other_h: Hypotheses<Vec<Trajectory>> =
            Hypotheses::new(other.iter().map(|mv| vec![predict(mv, 2)]).zip(q.iter().copied()).collect()).unwrap();
        let got = p_smh(&ctx, &base.a1.state(1), &ego_h, &[base.a2.state(2)], &other_h).unwrap();

        let mut want = 0.0;
        for (a1, pi) in ego.iter().zip(&p) {
            for (a2, qj) in other.iter().zip(&q) {
                let f = Fixture { a1: *a1, a2: *a2, ..base };
                if oracle::ttc(&f).is_finite() {
                    want += pi * qj;
                }
            }
        }
        nonzero += usize::from(want > 0.0 && want < 1.0);
        assert!((got - want).abs() <= 1e-12, "{i}: {got} vs {want}");
    }
    assert!(nonzero > 5, "{nonzero}");
}

fn stochastic(r: &mut impl Rng, n: usize) -> Vec<f64> {
    let cols: Vec<Vec<f64>> = (0..n).map(|_| normalized(r, n)).collect();
    let mut m = vec![0.0; n * n];
    for (i, c) in cols.iter().enumerate() {
        for (j, v) in c.iter().enumerate() {
            m[j * n + i] = *v;
        }
    }
    m
}

/// Dense reference: `x_{k+1} = D_k Φ x_k` and `Σ_k c_kᵀ Φ̂ x_k`, where `c_k`
/// is the colliding share of each cell and `D_k = diag(1 − c_k)`.
fn srs_reference(phi: &[f64], phi_hat: &[f64], x0: &[f64], dev: &[f64], intervals: &[SrsInterval]) -> f64 {
    let n = x0.len();
    let mul = |a: &[f64], x: &[f64]| -> Vec<f64> { (0..n).map(|j| (0..n).map(|i| a[j * n + i] * x[i]).sum()).collect() };
    let mut x = x0.to_vec();
    let mut total = 0.0;
    for iv in intervals {
        let mut c = vec![0.0; n];
        for &(g, e, f) in &iv.omega {
            c[e] += iv.ego[g] * dev[f];
        }
        let occ = mul(phi_hat, &x);
        total += (0..n).map(|e| c[e] * occ[e]).sum::<f64>();
        let mut d = vec![0.0; n * n];
        for e in 0..n {
            d[e * n + e] = 1.0 - c[e];
        }
        x = mul(&d, &mul(phi, &x));
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn p_srs_equals_dense_product(seed in any::<u64>(), steps in 1usize..8) {
        let r = &mut stream(seed, 0);
        let phi = stochastic(r, 3);
        let phi_hat = stochastic(r, 3);
        let chain = MarkovChainModel::from_matrices(3, 1, phi.clone(), phi_hat.clone()).unwrap();
        let initial = normalized(r, 3);
        let deviation = normalized(r, 2);
        let intervals: Vec<SrsInterval> = (0..steps)
            .map(|_| {
                let ego = normalized(r, 2);
                let mut omega = Vec::new();
                // each path cell meets at most one (ego, deviation) pair so shares stay ≤ 1
                for e in 0..3 {
                    if unit(r) < 0.5 {
                        omega.push(((unit(r) * 2.0) as usize, e, (unit(r) * 2.0) as usize));
                    }
                }
                SrsInterval { ego, omega }
            })
            .collect();
        let want = srs_reference(&phi, &phi_hat, &initial, &deviation, &intervals);
        let got = p_srs(&SrsInput { chain: &chain, initial, deviation, intervals }).unwrap();
        prop_assert!((got - want).abs() <= 1e-9, "{got} vs {want}");
    }
}

/// A1 at 10 m/s with a parked car 20 m ahead; keeping speed collides, full braking does not.
fn two_choice() -> (MetricContext, Scene, DiscreteControls) {
    let ctx = MetricContext::new(Predictor::new(MotionModel::ConstantVelocity, 3.0, 0.05).unwrap(), Default::default());
    let scene = Scene::new(
        0.0,
        vec![
            ActorState::new(1, 0.0, Vec2::ZERO, Vec2::new(10.0, 0.0)),
            ActorState::new(2, 0.0, Vec2::new(20.0, 0.0), Vec2::ZERO),
        ],
    )
    .unwrap();
    let choices = DiscreteControls {
        choices: vec![ControlSequence { controls: vec![(0.0, 0.0)] }, ControlSequence { controls: vec![(-8.0, 0.0)] }],
    };
    (ctx, scene, choices)
}

#[test]
fn p_mc_two_choice_truth_and_reproducibility() {
    let (ctx, scene, choices) = two_choice();
    let cfg = PmcConfig { samples: 10_000, seed: 42, goals: vec![] };
    let start = Instant::now();
    let a = p_mc(&ctx, &scene, ActorId(1), &choices, &cfg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let b = p_mc(&ctx, &scene, ActorId(1), &choices, &cfg).unwrap();
    assert_eq!(a.probability.to_bits(), b.probability.to_bits());
    assert_eq!(a.standard_error.to_bits(), b.standard_error.to_bits());
    assert!((a.probability - 0.5).abs() <= 3.0 * a.standard_error, "{a:?}");
    assert!(elapsed < 5.0, "{elapsed} s");
    let c = p_mc(&ctx, &scene, ActorId(1), &choices, &PmcConfig { seed: 43, ..cfg }).unwrap();
    assert_ne!(a.probability.to_bits(), c.probability.to_bits());
}
