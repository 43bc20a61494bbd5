//! Non-incremental re-derivation of [`detect_steps`](crate::detect_steps),
//! used as a test oracle.
//!
//! Instead of a state machine this works on whole index ranges: find every
//! maximal above-threshold run, walk left from its first sample to the
//! beginning of the strictly increasing run that reaches it, walk right
//! from the descent to the first closing run, then apply the interval and
//! duration rules. A run that begins before the previous candidate was
//! closed is part of that candidate and is skipped.

use alloc::vec::Vec;

use crate::detector::{DetectorConfig, DetectorError, StepEvent};
use crate::trace::{sample_time, MagnitudeSeries};

/// Maximal runs `[first, end)` of values strictly above `threshold`.
fn above_runs(values: &[f64], threshold: f64) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < values.len() {
        if values[i] > threshold {
            let first = i;
            while i < values.len() && values[i] > threshold {
                i += 1;
            }
            runs.push((first, i));
        } else {
            i += 1;
        }
    }
    runs
}

fn increasing(window: &[f64]) -> bool {
    window.windows(2).all(|w| w[1] > w[0])
}

pub fn reference_detect(series: &MagnitudeSeries, config: &DetectorConfig) -> Result<Vec<StepEvent>, DetectorError> {
    config.validate()?;
    let v = series.values();
    let n = v.len();
    let time = |i: usize| sample_time(series.t0(), series.sample_rate_hz(), i);

    let mut events: Vec<StepEvent> = Vec::new();
    let mut resume_at = 0;
    for (crossing, descent) in above_runs(v, config.step_threshold) {
        if crossing < resume_at {
            continue;
        }
        let mut start = crossing;
        while start > 0 && v[start - 1] < v[start] {
            start -= 1;
        }
        if crossing - start + 1 < config.rise_count {
            continue;
        }
        if descent == n {
            break;
        }
        let mut peak = crossing;
        for i in crossing..descent {
            if v[i] > v[peak] {
                peak = i;
            }
        }
        let k = config.fall_count;
        let Some(end) = (descent..n.saturating_sub(k - 1)).find(|&i| increasing(&v[i..i + k])) else {
            break;
        };
        resume_at = end + k - 1;

        let (start_t, peak_t, end_t) = (time(start), time(peak), time(end));
        let duration_s = end_t - start_t;
        let too_close = events.last().is_some_and(|prev| peak_t - prev.peak_t < config.min_step_interval_s);
        if duration_s > config.max_step_duration_s || too_close {
            continue;
        }
        events.push(StepEvent { start_t, peak_t, end_t, peak_value: v[peak], duration_s });
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect_steps;

    #[test]
    fn agrees_on_worked_examples() {
        let cases: [&[f64]; 3] = [
            &[0.0, 0.2, 0.5, 1.4, 1.8, 1.5, 0.9, 0.3, 0.1, 0.4, 0.6],
            &[0.0; 40],
            &[0.0, 0.2, 0.5, 1.2, 1.1, 1.8, 1.5, 0.9, 0.3, 0.1, 0.4, 0.6],
        ];
        for values in cases {
            let s = MagnitudeSeries::filtered(values.to_vec(), 50.0).unwrap();
            let config = DetectorConfig::default();
            assert_eq!(reference_detect(&s, &config).unwrap(), detect_steps(&s, &config).unwrap());
        }
    }

    #[test]
    fn runs_are_maximal() {
        assert_eq!(above_runs(&[0.0, 2.0, 2.0, 0.0, 3.0], 1.0), [(1, 3), (4, 5)]);
        assert!(above_runs(&[], 1.0).is_empty());
    }
}
