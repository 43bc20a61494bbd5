//! Running both estimators over a trace or a whole corpus.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use stride_core::{
    conventional_count, conventional_distance, detect_steps, error_report, estimate_distance, preprocess_pipeline,
    render_table, round_decimals, score_detection, DetectionScore, DistanceEstimate, ErrorReport, StepEvent, TableRow,
    Trace,
};

use crate::config::Settings;
use crate::corpus::{load_entry, Manifest};
use crate::error::Result;

/// Conventional estimate for one trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineEstimate {
    pub step_count: usize,
    #[serde(serialize_with = "serialize_6dp")]
    pub fixed_step_length_m: f64,
    #[serde(serialize_with = "serialize_6dp")]
    pub distance_m: f64,
}

/// Both estimates for one trace, plus the detected steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub events: Vec<StepEvent>,
    pub proposed: DistanceEstimate,
    pub baseline: BaselineEstimate,
}

pub fn analyze(trace: &Trace, settings: &Settings) -> Result<Analysis> {
    let series = preprocess_pipeline(trace, &settings.filter)?;
    let events = detect_steps(&series, &settings.detector)?;
    let proposed = estimate_distance(&events, &settings.weighting)?;
    let step_count =
        conventional_count(&series, settings.detector.step_threshold, settings.detector.min_step_interval_s);
    let baseline = BaselineEstimate {
        step_count,
        fixed_step_length_m: settings.fixed_step_length_m,
        distance_m: conventional_distance(step_count, settings.fixed_step_length_m),
    };
    Ok(Analysis { events, proposed, baseline })
}

/// Per-trace results and aggregate accuracy over a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<TableRow>,
    pub detection: Vec<DetectionScore>,
    /// `None` when the corpus cannot support a fit; see `error_report_note`.
    pub error_report: Option<ErrorReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error_report_note: Option<String>,
}

/// Analyzes every manifest entry, in manifest order.
pub fn compare(manifest_path: &Path, manifest: &Manifest, settings: &Settings) -> Result<Comparison> {
    let mut rows = Vec::with_capacity(manifest.entries.len());
    let mut detection = Vec::with_capacity(manifest.entries.len());
    for entry in &manifest.entries {
        let (trace, truth) = load_entry(manifest_path, entry)?;
        let analysis = analyze(&trace, settings)?;
        let score = score_detection(&analysis.events, &truth, settings.match_window_s)
            .expect("match window validated with the settings");
        let trace_id = Path::new(&entry.trace_path)
            .file_stem()
            .map_or_else(|| entry.trace_path.clone(), |s| s.to_string_lossy().into_owned());
        rows.push(TableRow::new(
            trace_id,
            truth.true_distance_m,
            truth.true_steps.len(),
            analysis.events.len(),
            analysis.proposed.distance_m,
            analysis.baseline.distance_m,
        ));
        detection.push(score);
    }
    let estimates: Vec<_> = rows.iter().map(|r| (r.true_distance_m, r.est_distance_m, r.baseline_distance_m)).collect();
    let (error_report, error_report_note) = match error_report(&estimates) {
        Ok(report) => (Some(report), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(Comparison { rows, detection, error_report, error_report_note })
}

impl Comparison {
    /// The results table followed by the aggregate accuracy lines.
    pub fn to_text(&self) -> String {
        let mut out = render_table(&self.rows);
        out.push('\n');
        match &self.error_report {
            Some(r) => {
                let _ = writeln!(out, "proposed_mae_m  {:.6}", r.proposed_mae_m);
                let _ = writeln!(out, "baseline_mae_m  {:.6}", r.baseline_mae_m);
                let _ = writeln!(out, "proposed_slope  {:.6}", r.proposed_slope);
                let _ = writeln!(out, "baseline_slope  {:.6}", r.baseline_slope);
            }
            None => {
                let note = self.error_report_note.as_deref().unwrap_or("no error report");
                let _ = writeln!(out, "error report unavailable: {note}");
            }
        }
        out
    }

    /// `true_distance,proposed_error,baseline_error`, absolute errors in
    /// meters, one line per trace.
    pub fn plot_csv(&self) -> String {
        let mut out = String::from("true_distance,proposed_error,baseline_error\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:.6},{:.6},{:.6}",
                r.true_distance_m,
                (r.est_distance_m - r.true_distance_m).abs(),
                (r.baseline_distance_m - r.true_distance_m).abs()
            );
        }
        out
    }
}

/// Text rendering of a list of steps.
pub fn events_text(events: &[StepEvent]) -> String {
    let mut out =
        format!("{:>12}  {:>12}  {:>12}  {:>12}  {:>12}\n", "start_t", "peak_t", "end_t", "peak_value", "duration_s");
    for e in events {
        let _ = writeln!(
            out,
            "{:>12.6}  {:>12.6}  {:>12.6}  {:>12.6}  {:>12.6}",
            e.start_t, e.peak_t, e.end_t, e.peak_value, e.duration_s
        );
    }
    let _ = writeln!(out, "{} steps", events.len());
    out
}

impl Analysis {
    pub fn to_text(&self) -> String {
        format!(
            "proposed_steps      {}\nproposed_distance_m {:.6}\nbaseline_steps      {}\nbaseline_distance_m {:.6}\n",
            self.proposed.step_count, self.proposed.distance_m, self.baseline.step_count, self.baseline.distance_m
        )
    }
}

fn serialize_6dp<S: serde::Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_f64(round_decimals(*value, 6))
}
