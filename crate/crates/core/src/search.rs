//! Bisection searches shared by the "latest/least such that" metrics.

/// Bounds and resolution of scalar searches.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SearchConfig {
    /// Resolution of the search variable.
    pub resolution: f64,
    /// Most negative longitudinal acceleration tried by `a_long_req`.
    pub accel_floor: f64,
    /// Largest lateral acceleration tried by `a_lat_req`.
    pub lateral_ceiling: f64,
    /// Largest gap considered by `ags`.
    pub gap_max: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { resolution: 1e-3, accel_floor: -50.0, lateral_ceiling: 50.0, gap_max: 1000.0 }
    }
}

/// Narrows `[good, bad]` where `pred(good)` holds and `pred(bad)` does not.
///
/// The endpoints may be in either order. Returns `(last_good, first_bad)`
/// with `|first_bad - last_good| <= resolution / 2`.
pub fn bisect(mut good: f64, mut bad: f64, resolution: f64, mut pred: impl FnMut(f64) -> bool) -> (f64, f64) {
    let tol = resolution / 2.0;
    while (bad - good).abs() > tol {
        let mid = 0.5 * (good + bad);
        if mid == good || mid == bad {
            break;
        }
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    (good, bad)
}
