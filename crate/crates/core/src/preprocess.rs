//! Trace → gravity-free, smoothed net-magnitude series.
//!
//! The batch chain is magnitude → mean removal → Kalman smoothing →
//! high-pass (+ optional outlier clamp). [`StreamingPreprocessor`] runs the
//! same filters sample by sample with an exponential moving average in
//! place of the batch mean; it is not bit-compatible with the batch path.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::trace::{AccelSample, MagnitudeSeries, SeriesKind, Trace, TraceError};

/// Smoothing constant of the moving average used by [`StreamingPreprocessor`].
pub const STREAMING_MEAN_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub enum PreprocessError {
    EmptySeries,
    WrongKind { expected: SeriesKind, found: SeriesKind },
    InvalidParams(&'static str),
    Trace(TraceError),
}

impl fmt::Display for PreprocessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptySeries => f.write_str("series is empty"),
            Self::WrongKind { expected, found } => {
                write!(f, "expected a {expected:?} series, got {found:?}")
            }
            Self::InvalidParams(why) => write!(f, "invalid filter parameters: {why}"),
            Self::Trace(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PreprocessError {}

impl From<TraceError> for PreprocessError {
    fn from(e: TraceError) -> Self {
        Self::Trace(e)
    }
}

/// Filter settings. `outlier_clamp_sigma = None` disables clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct FilterParams {
    /// Process noise variance q, (m/s²)² per sample.
    pub kalman_process_var: f64,
    /// Measurement noise variance r, (m/s²)².
    pub kalman_measurement_var: f64,
    pub highpass_cutoff_hz: f64,
    pub outlier_clamp_sigma: Option<f64>,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            kalman_process_var: 1e-3,
            kalman_measurement_var: 1e-2,
            highpass_cutoff_hz: 0.3,
            outlier_clamp_sigma: Some(3.0),
        }
    }
}

impl FilterParams {
    pub fn validate(&self, sample_rate_hz: f64) -> Result<(), PreprocessError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.kalman_process_var) || !positive(self.kalman_measurement_var) {
            return Err(PreprocessError::InvalidParams("Kalman variances must be positive"));
        }
        if !positive(self.highpass_cutoff_hz) || self.highpass_cutoff_hz >= sample_rate_hz / 2.0 {
            return Err(PreprocessError::InvalidParams("high-pass cutoff must lie in (0, sample_rate / 2)"));
        }
        if let Some(k) = self.outlier_clamp_sigma {
            if !positive(k) {
                return Err(PreprocessError::InvalidParams("outlier clamp must be positive"));
            }
        }
        Ok(())
    }
}

/// Euclidean norm of one reading.
pub fn magnitude(sample: &AccelSample) -> f64 {
    libm::sqrt(sample.x * sample.x + sample.y * sample.y + sample.z * sample.z)
}

/// Per-sample magnitude of a whole trace.
pub fn magnitude_series(trace: &Trace) -> Result<MagnitudeSeries, PreprocessError> {
    let t0 = trace.samples().first().map_or(0.0, |s| s.t);
    let values = trace.samples().iter().map(magnitude).collect();
    Ok(MagnitudeSeries::new(values, t0, trace.sample_rate_hz(), SeriesKind::RawMagnitude)?)
}

/// Subtracts the batch mean; the removed mean is kept as
/// [`MagnitudeSeries::avg_magnitude`].
pub fn net_magnitude(series: &MagnitudeSeries) -> Result<MagnitudeSeries, PreprocessError> {
    if series.kind() != SeriesKind::RawMagnitude {
        return Err(PreprocessError::WrongKind { expected: SeriesKind::RawMagnitude, found: series.kind() });
    }
    if series.is_empty() {
        return Err(PreprocessError::EmptySeries);
    }
    let values = series.values();
    let avg = values.iter().sum::<f64>() / values.len() as f64;
    let net = values.iter().map(|v| v - avg).collect();
    Ok(series.derive(net, SeriesKind::NetMagnitude).with_avg_magnitude(avg))
}

/// Scalar constant-level Kalman filter.
#[derive(Debug, Clone, Copy)]
pub struct KalmanLevel {
    q: f64,
    r: f64,
    level: f64,
    variance: f64,
}

impl KalmanLevel {
    /// Starts at `first` with variance `r`.
    pub fn new(q: f64, r: f64, first: f64) -> Self {
        Self { q, r, level: first, variance: r }
    }

    pub fn update(&mut self, measurement: f64) -> f64 {
        let predicted = self.variance + self.q;
        let gain = predicted / (predicted + self.r);
        self.level += gain * (measurement - self.level);
        self.variance = (1.0 - gain) * predicted;
        self.level
    }

    pub fn level(&self) -> f64 {
        self.level
    }
}

/// Smooths a series with [`KalmanLevel`]. The first output equals the
/// first input.
pub fn kalman_smooth(series: &MagnitudeSeries, params: &FilterParams) -> Result<MagnitudeSeries, PreprocessError> {
    params.validate(series.sample_rate_hz())?;
    let values = series.values();
    let mut out = Vec::with_capacity(values.len());
    if let Some((&first, rest)) = values.split_first() {
        let mut filter = KalmanLevel::new(params.kalman_process_var, params.kalman_measurement_var, first);
        out.push(first);
        out.extend(rest.iter().map(|&v| filter.update(v)));
    }
    Ok(series.derive(out, SeriesKind::Filtered))
}

/// First-order RC high-pass, `y[i] = a (y[i-1] + x[i] - x[i-1])`, `y[0] = 0`.
#[derive(Debug, Clone, Copy)]
pub struct HighPass {
    a: f64,
    prev_in: Option<f64>,
    prev_out: f64,
}

impl HighPass {
    pub fn new(cutoff_hz: f64, sample_rate_hz: f64) -> Self {
        let rc = 1.0 / (2.0 * PI * cutoff_hz);
        let dt = 1.0 / sample_rate_hz;
        Self { a: rc / (rc + dt), prev_in: None, prev_out: 0.0 }
    }

    pub fn update(&mut self, x: f64) -> f64 {
        let y = match self.prev_in {
            None => 0.0,
            Some(prev) => self.a * (self.prev_out + x - prev),
        };
        self.prev_in = Some(x);
        self.prev_out = y;
        y
    }
}

/// High-pass filter followed, when enabled, by clamping every output to
/// `mean ± k·σ` of the unclamped output.
pub fn highpass(series: &MagnitudeSeries, params: &FilterParams) -> Result<MagnitudeSeries, PreprocessError> {
    params.validate(series.sample_rate_hz())?;
    let mut filter = HighPass::new(params.highpass_cutoff_hz, series.sample_rate_hz());
    let mut out: Vec<f64> = series.values().iter().map(|&v| filter.update(v)).collect();
    if let Some(k) = params.outlier_clamp_sigma {
        clamp_outliers(&mut out, k);
    }
    Ok(series.derive(out, SeriesKind::Filtered))
}

fn clamp_outliers(values: &mut [f64], k: f64) {
    if values.is_empty() {
        return;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let bound = k * libm::sqrt(var);
    if bound == 0.0 {
        return;
    }
    for v in values.iter_mut() {
        *v = v.clamp(mean - bound, mean + bound);
    }
}

/// Magnitude → net magnitude → Kalman → high-pass.
pub fn preprocess_pipeline(trace: &Trace, params: &FilterParams) -> Result<MagnitudeSeries, PreprocessError> {
    params.validate(trace.sample_rate_hz())?;
    let raw = magnitude_series(trace)?;
    let net = net_magnitude(&raw)?;
    let smooth = kalman_smooth(&net, params)?;
    highpass(&smooth, params)
}

/// Sample-at-a-time counterpart of [`preprocess_pipeline`].
///
/// The gravity estimate is an exponential moving average seeded with the
/// first magnitude, and no outlier clamp is applied since it needs the
/// whole output. Use the batch pipeline as the reference.
#[derive(Debug, Clone)]
pub struct StreamingPreprocessor {
    params: FilterParams,
    sample_rate_hz: f64,
    avg: Option<f64>,
    kalman: Option<KalmanLevel>,
    highpass: HighPass,
}

impl StreamingPreprocessor {
    pub fn new(params: FilterParams, sample_rate_hz: f64) -> Result<Self, PreprocessError> {
        params.validate(sample_rate_hz)?;
        Ok(Self {
            params,
            sample_rate_hz,
            avg: None,
            kalman: None,
            highpass: HighPass::new(params.highpass_cutoff_hz, sample_rate_hz),
        })
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn push(&mut self, sample: &AccelSample) -> f64 {
        let mag = magnitude(sample);
        let avg = match self.avg {
            None => mag,
            Some(a) => a + STREAMING_MEAN_ALPHA * (mag - a),
        };
        self.avg = Some(avg);
        let net = mag - avg;
        let smooth = match &mut self.kalman {
            None => {
                let k = KalmanLevel::new(self.params.kalman_process_var, self.params.kalman_measurement_var, net);
                self.kalman = Some(k);
                net
            }
            Some(k) => k.update(net),
        };
        self.highpass.update(smooth)
    }
}
