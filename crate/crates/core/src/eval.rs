//! Scoring against ground truth.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::detector::StepEvent;
use crate::synth::GroundTruth;

/// Default half-width of the peak matching window, seconds.
pub const DEFAULT_MATCH_WINDOW_S: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalError {
    InvalidWindow,
    /// Fewer than two entries, or all true distances equal.
    DegenerateInput,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidWindow => f.write_str("match window must be positive"),
            Self::DegenerateInput => f.write_str("need at least two entries with distinct true distances"),
        }
    }
}

impl core::error::Error for EvalError {}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetectionScore {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub precision: f64,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub recall: f64,
}

/// Greedy one-to-one matching: detections are taken in `peak_t` order and
/// each claims the earliest unmatched true peak within `match_window_s`.
///
/// With no detections precision is 1; with no true steps recall is 1.
pub fn score_detection(
    events: &[StepEvent],
    truth: &GroundTruth,
    match_window_s: f64,
) -> Result<DetectionScore, EvalError> {
    if !(match_window_s > 0.0 && match_window_s.is_finite()) {
        return Err(EvalError::InvalidWindow);
    }
    let mut detected: Vec<f64> = events.iter().map(|e| e.peak_t).collect();
    detected.sort_by(f64::total_cmp);
    let mut matched = alloc::vec![false; truth.true_steps.len()];
    let mut tp = 0;
    for peak in detected.iter() {
        let hit = truth
            .true_steps
            .iter()
            .enumerate()
            .position(|(i, s)| !matched[i] && (s.peak_t - peak).abs() <= match_window_s);
        if let Some(i) = hit {
            matched[i] = true;
            tp += 1;
        }
    }
    let fp = detected.len() - tp;
    let fn_ = truth.true_steps.len() - tp;
    let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    Ok(DetectionScore {
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_,
        precision: ratio(tp, tp + fp),
        recall: ratio(tp, tp + fn_),
    })
}

/// Aggregate accuracy of both estimators. The slopes are least-squares
/// fits of |error| against true distance: how fast error accumulates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ErrorReport {
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub proposed_mae_m: f64,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub baseline_mae_m: f64,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub proposed_slope: f64,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub baseline_slope: f64,
}

/// `estimates` holds `(true_distance_m, proposed_m, baseline_m)` tuples.
/// Input order does not affect the result.
pub fn error_report(estimates: &[(f64, f64, f64)]) -> Result<ErrorReport, EvalError> {
    let mut rows = estimates.to_vec();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    if rows.len() < 2 || rows.iter().all(|r| r.0 == rows[0].0) {
        return Err(EvalError::DegenerateInput);
    }
    let truth: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let proposed: Vec<f64> = rows.iter().map(|r| (r.1 - r.0).abs()).collect();
    let baseline: Vec<f64> = rows.iter().map(|r| (r.2 - r.0).abs()).collect();
    Ok(ErrorReport {
        proposed_mae_m: mean(&proposed),
        baseline_mae_m: mean(&baseline),
        proposed_slope: slope(&truth, &proposed),
        baseline_slope: slope(&truth, &baseline),
    })
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// One line of the per-trace results table.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TableRow {
    pub trace_id: String,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub true_distance_m: f64,
    pub true_steps: usize,
    pub est_steps: usize,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub est_distance_m: f64,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub baseline_distance_m: f64,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub abs_error_m: f64,
}

impl TableRow {
    pub fn new(
        trace_id: impl Into<String>,
        true_distance_m: f64,
        true_steps: usize,
        est_steps: usize,
        est_distance_m: f64,
        baseline_distance_m: f64,
    ) -> Self {
        Self {
            trace_id: trace_id.into(),
            true_distance_m,
            true_steps,
            est_steps,
            est_distance_m,
            baseline_distance_m,
            abs_error_m: (est_distance_m - true_distance_m).abs(),
        }
    }
}

const COLUMNS: [&str; 7] =
    ["trace_id", "true_distance_m", "true_steps", "est_steps", "est_distance_m", "baseline_distance_m", "abs_error_m"];

/// Right-aligned plain-text table, numbers at 6 decimals.
pub fn render_table(rows: &[TableRow]) -> String {
    let cells: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            [
                r.trace_id.clone(),
                alloc::format!("{:.6}", r.true_distance_m),
                alloc::format!("{}", r.true_steps),
                alloc::format!("{}", r.est_steps),
                alloc::format!("{:.6}", r.est_distance_m),
                alloc::format!("{:.6}", r.baseline_distance_m),
                alloc::format!("{:.6}", r.abs_error_m),
            ]
        })
        .collect();
    let mut widths = COLUMNS.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let mut line = |fields: &[&str]| {
        let mut first = true;
        for (f, w) in fields.iter().zip(widths) {
            if !first {
                out.push_str("  ");
            }
            first = false;
            let _ = write!(out, "{f:>w$}");
        }
        out.push('\n');
    };
    line(&COLUMNS);
    for row in &cells {
        let fields: Vec<&str> = row.iter().map(String::as_str).collect();
        line(&fields);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::TrueStep;
    use alloc::vec;

    fn truth(peaks: &[f64]) -> GroundTruth {
        GroundTruth {
            true_steps: peaks
                .iter()
                .map(|&p| TrueStep { start_t: p - 0.25, peak_t: p, end_t: p + 0.25, stride_length_m: 1.0 })
                .collect(),
            true_distance_m: peaks.len() as f64,
            fake_peak_times: vec![],
        }
    }

    fn event(peak_t: f64) -> StepEvent {
        StepEvent { start_t: peak_t - 0.2, peak_t, end_t: peak_t + 0.3, peak_value: 2.0, duration_s: 0.5 }
    }

    #[test]
    fn perfect_detection() {
        let peaks: Vec<f64> = (0..10).map(|i| 1.0 + 0.5 * i as f64).collect();
        let events: Vec<_> = peaks.iter().map(|&p| event(p + 0.05)).collect();
        let s = score_detection(&events, &truth(&peaks), 0.3).unwrap();
        assert_eq!((s.true_positives, s.false_positives, s.false_negatives), (10, 0, 0));
        assert_eq!((s.precision, s.recall), (1.0, 1.0));
    }

    #[test]
    fn one_missed_step() {
        let peaks: Vec<f64> = (0..10).map(|i| 1.0 + 0.5 * i as f64).collect();
        let events: Vec<_> = peaks[..9].iter().map(|&p| event(p)).collect();
        let s = score_detection(&events, &truth(&peaks), 0.3).unwrap();
        assert_eq!(s.recall, 0.9);
        assert_eq!(s.precision, 1.0);
    }

    #[test]
    fn one_spurious_event() {
        let peaks = [1.0, 1.5, 2.0];
        let mut events: Vec<_> = peaks.iter().map(|&p| event(p)).collect();
        events.push(event(5.0));
        let s = score_detection(&events, &truth(&peaks), 0.3).unwrap();
        assert_eq!(s.precision, 3.0 / 4.0);
        assert_eq!(s.false_positives, 1);
    }

    #[test]
    fn matching_is_one_to_one() {
        // two detections near one true peak: only one may match
        let events = [event(1.0), event(1.1)];
        let s = score_detection(&events, &truth(&[1.05]), 0.3).unwrap();
        assert_eq!((s.true_positives, s.false_positives), (1, 1));
        assert!(score_detection(&events, &truth(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn error_report_examples() {
        let same = [(10.0, 10.0, 10.0), (50.0, 50.0, 50.0), (100.0, 100.0, 100.0)];
        let r = error_report(&same).unwrap();
        assert_eq!((r.proposed_mae_m, r.baseline_mae_m, r.proposed_slope, r.baseline_slope), (0.0, 0.0, 0.0, 0.0));

        let proportional: Vec<_> = [10.0, 20.0, 35.0, 100.0].iter().map(|&d| (d, d + 1.0, d * 0.95)).collect();
        let r = error_report(&proportional).unwrap();
        assert!((r.baseline_slope - 0.05).abs() < 1e-12);
        assert!(r.proposed_slope.abs() < 1e-12);
        assert!((r.proposed_mae_m - 1.0).abs() < 1e-12);

        assert_eq!(error_report(&[(10.0, 9.0, 8.0)]), Err(EvalError::DegenerateInput));
        assert_eq!(error_report(&[(10.0, 9.0, 8.0), (10.0, 9.5, 8.0)]), Err(EvalError::DegenerateInput));
    }

    #[test]
    fn table_row_and_render() {
        let row = TableRow::new("walk10", 10.0, 10, 9, 9.6, 7.0);
        assert!((row.abs_error_m - 0.4).abs() < 1e-12);
        let text = render_table(&[row]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].contains("0.400000"));
        assert!(lines[1].contains("9.600000"));
        assert_eq!(lines[0].len(), lines[1].len());
    }

    #[test]
    fn empty_table_is_header_only() {
        let text = render_table(&[]);
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("trace_id"));
    }
}
