#![allow(dead_code)]

use std::fmt::Write;

pub const HEADER: &str = "recording_id,t_s,actor_id,x_m,y_m,vx_mps,vy_mps,ax_mps2,ay_mps2,heading_rad,width_m,length_m,class";

/// One trajectory row: recording, t, actor, x, y, vx, vy.
#[derive(Clone, Debug)]
pub struct Row(pub String, pub f64, pub u64, pub f64, pub f64, pub f64, pub f64);

pub fn csv(rows: &[Row]) -> String {
    let mut s = String::from(HEADER);
    for Row(rec, t, id, x, y, vx, vy) in rows {
        let heading = if *vx == 0.0 && *vy == 0.0 { 0.0 } else { vy.atan2(*vx) };
        write!(s, "\n{rec},{t},{id},{x},{y},{vx},{vy},0,0,{heading},2,4,car").unwrap();
    }
    s.push('\n');
    s
}

/// A1 at 20 m/s follows A2 at 10 m/s; bumper gap 50 m at t = 0, sampled every 0.1 s for 2 s.
pub fn car_following(rec: &str) -> Vec<Row> {
    let mut rows = Vec::new();
    for k in 0..=20 {
        let t = k as f64 * 0.1;
        rows.push(Row(rec.into(), t, 1, 20.0 * t, 0.0, 20.0, 0.0));
        rows.push(Row(rec.into(), t, 2, 54.0 + 10.0 * t, 0.0, 10.0, 0.0));
    }
    rows
}

/// A1 closes on a stationary A2 at 1 m/s so that TTC(t) = 10 − t in center mode.
pub fn linear_ttc(rec: &str) -> Vec<Row> {
    (0..=100)
        .flat_map(|k| {
            let t = k as f64 * 0.1;
            [Row(rec.into(), t, 1, t, 0.0, 1.0, 0.0), Row(rec.into(), t, 2, 10.0, 0.0, 0.0, 0.0)]
        })
        .collect()
}

/// Small deterministic multi-actor recordings with varied speeds and layouts.
pub fn synthetic(recordings: usize) -> Vec<Row> {
    let mut rows = Vec::new();
    for r in 0..recordings {
        let rec = format!("rec{r:03}");
        let f = r as f64;
        let v1 = 8.0 + (f * 1.7) % 15.0;
        let v2 = 4.0 + (f * 2.3) % 10.0;
        let gap = 15.0 + (f * 5.9) % 40.0;
        for k in 0..=30 {
            let t = k as f64 * 0.1;
            rows.push(Row(rec.clone(), t, 1, v1 * t, 0.0, v1, 0.0));
            rows.push(Row(rec.clone(), t, 2, gap + v2 * t, 0.0, v2, 0.0));
            // a crossing actor on every other recording
            if r % 2 == 0 {
                rows.push(Row(rec.clone(), t, 3, gap * 0.5, -30.0 + 9.0 * t, 0.0, 9.0));
            }
        }
    }
    rows
}

pub fn write(dir: &std::path::Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}
