//! Step detection and travelled-distance estimation for hand-held
//! tri-axial accelerometer traces.
//!
//! The processing chain is:
//!
//! 1. [`preprocess`]: per-sample magnitude, mean removal, Kalman smoothing
//!    and a first-order high-pass with optional outlier clamping.
//! 2. [`detector`]: a single-pass state machine that tracks a rising
//!    start run, collects every above-threshold value of a window and keeps
//!    only its maximum, then closes the step on the first rise after the
//!    descent.
//! 3. [`distance`]: steps are graded short / medium / long against the
//!    mean step duration and weighted 0.5 / 1.0 / 1.5.
//!
//! [`baseline`] is the conventional threshold-crossing counter with a
//! fixed step length, [`synth`] generates traces with known ground truth
//! and [`eval`] scores both estimators against it.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the CLI
//! live in the `stride` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baseline;
pub mod detector;
pub mod distance;
pub mod eval;
pub mod oracle;
pub mod preprocess;
pub mod synth;
pub mod trace;

mod round;

pub use round::round_decimals;

pub use baseline::{conventional_count, conventional_distance, DEFAULT_FIXED_STEP_LENGTH_M};
pub use detector::{
    detect_steps, detect_steps_streaming, DetectorConfig, DetectorError, Phase, StepDetector, StepEvent, StreamingSteps,
};
pub use distance::{
    categorize, estimate_distance, mean_step_size, Category, DistanceError, DistanceEstimate, RunningDistance,
    StepWeighting, WeightedStep,
};
pub use eval::{
    error_report, render_table, score_detection, DetectionScore, ErrorReport, EvalError, TableRow,
    DEFAULT_MATCH_WINDOW_S,
};
pub use preprocess::{
    highpass, kalman_smooth, magnitude, magnitude_series, net_magnitude, preprocess_pipeline, FilterParams,
    PreprocessError, StreamingPreprocessor,
};
pub use synth::{generate_trace, GaitProfile, GroundTruth, SynthError, TrueStep};
pub use trace::{validate_trace, AccelSample, Invariant, MagnitudeSeries, SeriesKind, Trace, TraceError, Violation};
