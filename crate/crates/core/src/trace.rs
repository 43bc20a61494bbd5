//! Accelerometer traces and derived scalar series.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Allowed relative deviation of any sample spacing from `1 / sample_rate_hz`.
pub const SPACING_TOLERANCE: f64 = 0.10;

/// One timestamped tri-axial accelerometer reading.
///
/// `t` is trace-relative seconds, `x`, `y`, `z` are m/s² along the device
/// axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl AccelSample {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceError {
    TooShort { len: usize },
    NonFinite { index: usize },
    NegativeTime { index: usize },
    NonMonotonicTime { index: usize },
    NonUniformSampling { index: usize },
    InvalidSampleRate,
    NegativeMagnitude { index: usize },
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooShort { len } => write!(f, "trace has {len} samples, at least 2 required"),
            Self::NonFinite { index } => write!(f, "non-finite value at sample {index}"),
            Self::NegativeTime { index } => write!(f, "negative timestamp at sample {index}"),
            Self::NonMonotonicTime { index } => {
                write!(f, "timestamp at sample {index} does not increase")
            }
            Self::NonUniformSampling { index } => {
                write!(f, "spacing before sample {index} deviates more than 10% from the sample period")
            }
            Self::InvalidSampleRate => f.write_str("sample rate must be positive and finite"),
            Self::NegativeMagnitude { index } => {
                write!(f, "raw magnitude is negative at index {index}")
            }
        }
    }
}

impl core::error::Error for TraceError {}

/// An ordered, near-uniformly sampled accelerometer recording.
///
/// Immutable once built. [`Trace::new`] enforces every invariant that
/// [`validate_trace`] checks; [`Trace::new_unchecked`] exists so malformed
/// traces can still be represented and reported on.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    samples: Vec<AccelSample>,
    sample_rate_hz: f64,
    meta: BTreeMap<String, String>,
}

impl Trace {
    /// Builds a trace, inferring the sample rate as `(n - 1) / (t_last - t_first)`.
    pub fn new(samples: Vec<AccelSample>, meta: BTreeMap<String, String>) -> Result<Self, TraceError> {
        if samples.len() < 2 {
            return Err(TraceError::TooShort { len: samples.len() });
        }
        let first = samples[0].t;
        let last = samples[samples.len() - 1].t;
        let rate = (samples.len() - 1) as f64 / (last - first);
        let trace =
            Self { samples, sample_rate_hz: if rate.is_finite() && rate > 0.0 { rate } else { f64::NAN }, meta };
        match validate_trace(&trace).first() {
            None => Ok(trace),
            Some(v) => Err(v.to_error(trace.samples.len())),
        }
    }

    pub fn new_unchecked(samples: Vec<AccelSample>, sample_rate_hz: f64, meta: BTreeMap<String, String>) -> Self {
        Self { samples, sample_rate_hz, meta }
    }

    pub fn samples(&self) -> &[AccelSample] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn meta(&self) -> &BTreeMap<String, String> {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.t - a.t,
            _ => 0.0,
        }
    }
}

/// Which [`Trace`] invariant a [`Violation`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Invariant {
    MinimumLength,
    PositiveSampleRate,
    FiniteValues,
    NonNegativeTime,
    StrictlyIncreasingTime,
    UniformSampling,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Self::MinimumLength => "minimum_length",
            Self::PositiveSampleRate => "positive_sample_rate",
            Self::FiniteValues => "finite_values",
            Self::NonNegativeTime => "non_negative_time",
            Self::StrictlyIncreasingTime => "strictly_increasing_time",
            Self::UniformSampling => "uniform_sampling",
        }
    }
}

/// First offending sample index for one broken invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub invariant: Invariant,
    pub index: usize,
}

impl Violation {
    fn to_error(self, len: usize) -> TraceError {
        let index = self.index;
        match self.invariant {
            Invariant::MinimumLength => TraceError::TooShort { len },
            Invariant::PositiveSampleRate => TraceError::InvalidSampleRate,
            Invariant::FiniteValues => TraceError::NonFinite { index },
            Invariant::NonNegativeTime => TraceError::NegativeTime { index },
            Invariant::StrictlyIncreasingTime => TraceError::NonMonotonicTime { index },
            Invariant::UniformSampling => TraceError::NonUniformSampling { index },
        }
    }
}

/// Lists every broken [`Trace`] invariant together with its first offending
/// index. An empty report means the trace is well formed.
///
/// Spacing is only checked when timestamps are finite and increasing, since
/// a non-monotonic pair already explains the deviation.
// Negated comparisons so that NaN counts as a violation.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn validate_trace(trace: &Trace) -> Vec<Violation> {
    let samples = &trace.samples;
    let mut report = Vec::new();
    let mut push = |invariant, index| report.push(Violation { invariant, index });

    if samples.len() < 2 {
        push(Invariant::MinimumLength, samples.len());
    }
    if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
        push(Invariant::FiniteValues, i);
    }
    if let Some(i) = samples.iter().position(|s| s.t < 0.0) {
        push(Invariant::NonNegativeTime, i);
    }
    let non_increasing = (1..samples.len()).find(|&i| !(samples[i].t > samples[i - 1].t));
    if let Some(i) = non_increasing {
        push(Invariant::StrictlyIncreasingTime, i);
    }
    let rate = trace.sample_rate_hz;
    let rate_ok = rate.is_finite() && rate > 0.0;
    if !rate_ok {
        push(Invariant::PositiveSampleRate, 0);
    }
    if rate_ok && non_increasing.is_none() {
        let period = 1.0 / rate;
        let uneven = (1..samples.len()).find(|&i| {
            let dt = samples[i].t - samples[i - 1].t;
            !((dt - period).abs() <= SPACING_TOLERANCE * period)
        });
        if let Some(i) = uneven {
            push(Invariant::UniformSampling, i);
        }
    }
    report
}

/// Timestamp of sample `index` of a uniform series. Every event time in the
/// crate goes through this so independent code paths agree bit for bit.
pub(crate) fn sample_time(t0: f64, sample_rate_hz: f64, index: usize) -> f64 {
    t0 + index as f64 / sample_rate_hz
}

/// What a [`MagnitudeSeries`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// Euclidean norm of each sample, gravity included.
    RawMagnitude,
    /// Raw magnitude minus its mean.
    NetMagnitude,
    /// Output of the smoothing / high-pass stages.
    Filtered,
}

/// A uniformly sampled scalar series in m/s².
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeSeries {
    values: Vec<f64>,
    t0: f64,
    sample_rate_hz: f64,
    kind: SeriesKind,
    avg_magnitude: Option<f64>,
}

impl MagnitudeSeries {
    pub fn new(values: Vec<f64>, t0: f64, sample_rate_hz: f64, kind: SeriesKind) -> Result<Self, TraceError> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) || !t0.is_finite() {
            return Err(TraceError::InvalidSampleRate);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(TraceError::NonFinite { index });
        }
        if kind == SeriesKind::RawMagnitude {
            if let Some(index) = values.iter().position(|&v| v < 0.0) {
                return Err(TraceError::NegativeMagnitude { index });
            }
        }
        Ok(Self { values, t0, sample_rate_hz, kind, avg_magnitude: None })
    }

    /// Shorthand for a filtered series starting at t = 0, mostly for tests
    /// and hand-built fixtures.
    pub fn filtered(values: Vec<f64>, sample_rate_hz: f64) -> Result<Self, TraceError> {
        Self::new(values, 0.0, sample_rate_hz, SeriesKind::Filtered)
    }

    pub(crate) fn derive(&self, values: Vec<f64>, kind: SeriesKind) -> Self {
        Self { values, t0: self.t0, sample_rate_hz: self.sample_rate_hz, kind, avg_magnitude: self.avg_magnitude }
    }

    pub(crate) fn with_avg_magnitude(mut self, avg: f64) -> Self {
        self.avg_magnitude = Some(avg);
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    /// The mean raw magnitude removed when this series was made gravity-free.
    pub fn avg_magnitude(&self) -> Option<f64> {
        self.avg_magnitude
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Timestamp of sample `index`.
    pub fn time_at(&self, index: usize) -> f64 {
        sample_time(self.t0, self.sample_rate_hz, index)
    }

    /// Multiplies every value by `factor`, keeping timing and kind.
    pub fn scaled(&self, factor: f64) -> Self {
        self.derive(self.values.iter().map(|v| v * factor).collect(), self.kind)
    }
}
