//! Conventional estimator: count upward threshold crossings, multiply by a
//! fixed step length.
//!
//! There is deliberately no per-window maximum here, so a fake peak that
//! dips below the threshold and crosses it again counts as another step.

use crate::trace::{sample_time, MagnitudeSeries};

/// Default fixed step length in meters.
pub const DEFAULT_FIXED_STEP_LENGTH_M: f64 = 0.7;

/// Number of upward crossings `v[i-1] <= threshold < v[i]` that are at
/// least `min_interval_s` after the previously counted one.
pub fn conventional_count(series: &MagnitudeSeries, threshold: f64, min_interval_s: f64) -> usize {
    let values = series.values();
    let mut last: Option<f64> = None;
    let mut count = 0;
    for i in 1..values.len() {
        if values[i - 1] <= threshold && values[i] > threshold {
            let t = sample_time(series.t0(), series.sample_rate_hz(), i);
            if last.is_none_or(|prev| t - prev >= min_interval_s) {
                count += 1;
                last = Some(t);
            }
        }
    }
    count
}

pub fn conventional_distance(count: usize, fixed_step_length_m: f64) -> f64 {
    count as f64 * fixed_step_length_m
}
