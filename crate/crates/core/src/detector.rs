//! Single-pass step detector.
//!
//! Each step is one pass through four phases:
//!
//! * **idle / rising**: a strictly increasing run of at least
//!   `rise_count` values marks a possible step; its first value is the
//!   step start (the start vector).
//! * **above threshold**: once a value of that run exceeds
//!   `step_threshold`, every value until the signal drops back to or below
//!   the threshold is collected (the peak vector). The step's peak is the
//!   maximum of that collection, earliest sample on ties, so shoulders and
//!   secondary maxima inside the window never become steps of their own.
//! * **falling**: after the descent, the first `fall_count` strictly
//!   increasing values (the end vector) close the step; the end is the
//!   first of them.
//!
//! Candidates whose peak lies closer than `min_step_interval_s` to the
//! previously emitted peak, or that last longer than
//! `max_step_duration_s`, are dropped. A trace that ends mid-step drops the
//! partial step.
//!
//! The strictly increasing run is tracked across phases, so the trough that
//! ends one step can also start the next one.

use alloc::vec::Vec;
use core::fmt;

use crate::trace::{sample_time, MagnitudeSeries};

#[derive(Debug, Clone, PartialEq)]
pub enum DetectorError {
    InvalidConfig(&'static str),
}

impl fmt::Display for DetectorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidConfig(why) => write!(f, "invalid detector config: {why}"),
        }
    }
}

impl core::error::Error for DetectorError {}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct DetectorConfig {
    /// m/s² on the filtered net-magnitude scale.
    pub step_threshold: f64,
    /// Length of the increasing run that opens a step.
    pub rise_count: usize,
    /// Length of the increasing run that closes a step.
    pub fall_count: usize,
    pub min_step_interval_s: f64,
    pub max_step_duration_s: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self { step_threshold: 1.0, rise_count: 3, fall_count: 2, min_step_interval_s: 0.25, max_step_duration_s: 2.0 }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<(), DetectorError> {
        if !(self.step_threshold.is_finite() && self.step_threshold > 0.0) {
            return Err(DetectorError::InvalidConfig("step_threshold must be positive"));
        }
        if self.rise_count < 2 {
            return Err(DetectorError::InvalidConfig("rise_count must be at least 2"));
        }
        if self.fall_count < 2 {
            return Err(DetectorError::InvalidConfig("fall_count must be at least 2"));
        }
        if !(self.min_step_interval_s > 0.0
            && self.min_step_interval_s < self.max_step_duration_s
            && self.max_step_duration_s.is_finite())
        {
            return Err(DetectorError::InvalidConfig("need 0 < min_step_interval_s < max_step_duration_s"));
        }
        Ok(())
    }
}

/// One detected step. `duration_s = end_t - start_t` is the step size used
/// for short / medium / long grading.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepEvent {
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub start_t: f64,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub peak_t: f64,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub end_t: f64,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub peak_value: f64,
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub duration_s: f64,
}

impl StepEvent {
    /// Same step with every timestamp moved by `dt`.
    pub fn shifted(&self, dt: f64) -> Self {
        Self { start_t: self.start_t + dt, peak_t: self.peak_t + dt, end_t: self.end_t + dt, ..*self }
    }
}

/// Sample-index view of a finished candidate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub start: usize,
    pub peak: usize,
    pub peak_value: f64,
    pub end: usize,
}

/// Interval and duration guard applied to every finished candidate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Acceptor {
    t0: f64,
    rate: f64,
    min_interval: f64,
    max_duration: f64,
    last_peak_t: Option<f64>,
}

impl Acceptor {
    pub fn new(config: &DetectorConfig, t0: f64, rate: f64) -> Self {
        Self {
            t0,
            rate,
            min_interval: config.min_step_interval_s,
            max_duration: config.max_step_duration_s,
            last_peak_t: None,
        }
    }

    pub fn duration(&self, start: usize, end: usize) -> f64 {
        sample_time(self.t0, self.rate, end) - sample_time(self.t0, self.rate, start)
    }

    pub fn too_long(&self, start: usize, end: usize) -> bool {
        self.duration(start, end) > self.max_duration
    }

    pub fn accept(&mut self, c: Candidate) -> Option<StepEvent> {
        let start_t = sample_time(self.t0, self.rate, c.start);
        let peak_t = sample_time(self.t0, self.rate, c.peak);
        let end_t = sample_time(self.t0, self.rate, c.end);
        let duration_s = end_t - start_t;
        if duration_s > self.max_duration {
            return None;
        }
        if let Some(last) = self.last_peak_t {
            if peak_t - last < self.min_interval {
                return None;
            }
        }
        self.last_peak_t = Some(peak_t);
        Some(StepEvent { start_t, peak_t, end_t, peak_value: c.peak_value, duration_s })
    }
}

/// Coarse phase of a [`StepDetector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Idle,
    Rising,
    AboveThreshold,
    Falling,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum State {
    /// Below threshold, waiting for a crossing.
    Idle,
    /// Above threshold without a valid start run; wait for the descent.
    Skipping,
    Above {
        start: usize,
    },
    Falling {
        start: usize,
        peak: usize,
        peak_value: f64,
        descent: usize,
    },
    /// Candidate already too long to be accepted; only track where it ends
    /// so the next step starts at the same place it otherwise would.
    Draining {
        start: usize,
        descent: Option<usize>,
    },
}

/// Incremental detector fed one filtered value at a time.
///
/// Emits exactly the events [`detect_steps`] returns for the same series,
/// in the same order. Memory is bounded: the peak vector holds at most
/// `max_step_duration_s × sample_rate + 2` entries.
#[derive(Debug, Clone)]
pub struct StepDetector {
    config: DetectorConfig,
    acceptor: Acceptor,
    state: State,
    index: usize,
    prev: Option<f64>,
    run_start: usize,
    run_len: usize,
    peak_buffer: Vec<(usize, f64)>,
    peak_capacity: usize,
}

impl StepDetector {
    pub fn new(config: DetectorConfig, t0: f64, sample_rate_hz: f64) -> Result<Self, DetectorError> {
        config.validate()?;
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) || !t0.is_finite() {
            return Err(DetectorError::InvalidConfig("sample rate must be positive"));
        }
        let peak_capacity = (config.max_step_duration_s * sample_rate_hz) as usize + 2;
        Ok(Self {
            config,
            acceptor: Acceptor::new(&config, t0, sample_rate_hz),
            state: State::Idle,
            index: 0,
            prev: None,
            run_start: 0,
            run_len: 0,
            peak_buffer: Vec::with_capacity(peak_capacity),
            peak_capacity,
        })
    }

    /// Detector timed like `series`.
    pub fn for_series(series: &MagnitudeSeries, config: DetectorConfig) -> Result<Self, DetectorError> {
        Self::new(config, series.t0(), series.sample_rate_hz())
    }

    pub fn config(&self) -> &DetectorConfig {
        &self.config
    }

    pub fn samples_seen(&self) -> usize {
        self.index
    }

    pub fn phase(&self) -> Phase {
        match self.state {
            State::Idle if self.run_len >= self.config.rise_count => Phase::Rising,
            State::Idle | State::Skipping => Phase::Idle,
            State::Above { .. } => Phase::AboveThreshold,
            State::Falling { .. } | State::Draining { .. } => Phase::Falling,
        }
    }

    pub fn peak_buffer_len(&self) -> usize {
        self.peak_buffer.len()
    }

    pub fn peak_buffer_capacity(&self) -> usize {
        self.peak_capacity
    }

    /// Feeds the next value; returns the step it completes, if any.
    pub fn push(&mut self, value: f64) -> Option<StepEvent> {
        let j = self.index;
        self.index += 1;
        let threshold = self.config.step_threshold;
        let crossing = value > threshold && self.prev.is_some_and(|p| p <= threshold);
        match self.prev {
            Some(p) if value > p => self.run_len += 1,
            _ => {
                self.run_start = j;
                self.run_len = 1;
            }
        }
        self.prev = Some(value);

        match self.state {
            State::Idle => {
                self.enter_from_idle(j, value, crossing);
                None
            }
            State::Skipping => {
                if value <= threshold {
                    self.state = State::Idle;
                }
                None
            }
            State::Above { start } => {
                if value > threshold {
                    self.peak_buffer.push((j, value));
                    if self.acceptor.too_long(start, j + 1) {
                        self.drain(start, None);
                    }
                    return None;
                }
                let (peak, peak_value) = self.take_peak();
                self.state = State::Falling { start, peak, peak_value, descent: j };
                self.after_descent(j, value, crossing)
            }
            State::Falling { .. } => self.after_descent(j, value, crossing),
            State::Draining { start, descent } => {
                let descent = match descent {
                    Some(d) => d,
                    None if value <= threshold => j,
                    None => return None,
                };
                self.state = State::Draining { start, descent: Some(descent) };
                if self.end_confirmed(j, descent).is_some() {
                    self.state = State::Idle;
                    self.enter_from_idle(j, value, crossing);
                }
                None
            }
        }
    }

    /// Drops any in-progress step and restarts at sample index 0.
    pub fn reset(&mut self) {
        self.state = State::Idle;
        self.index = 0;
        self.prev = None;
        self.run_start = 0;
        self.run_len = 0;
        self.peak_buffer.clear();
        self.acceptor.last_peak_t = None;
    }

    fn enter_from_idle(&mut self, j: usize, value: f64, crossing: bool) {
        if value <= self.config.step_threshold {
            return;
        }
        if !(crossing && self.run_len >= self.config.rise_count) {
            self.state = State::Skipping;
            return;
        }
        let start = self.run_start;
        self.peak_buffer.clear();
        self.peak_buffer.push((j, value));
        self.state = State::Above { start };
        if self.acceptor.too_long(start, j + 1) {
            self.drain(start, None);
        }
    }

    fn after_descent(&mut self, j: usize, value: f64, crossing: bool) -> Option<StepEvent> {
        let State::Falling { start, peak, peak_value, descent } = self.state else {
            return None;
        };
        if let Some(end) = self.end_confirmed(j, descent) {
            self.state = State::Idle;
            let event = self.acceptor.accept(Candidate { start, peak, peak_value, end });
            self.enter_from_idle(j, value, crossing);
            return event;
        }
        // the end is at least here, since no closing run has completed yet
        let earliest_end = descent.max((j + 2).saturating_sub(self.config.fall_count));
        if self.acceptor.too_long(start, earliest_end) {
            self.drain(start, Some(descent));
        }
        None
    }

    /// Index of the step end if the closing run completes at `j`.
    fn end_confirmed(&self, j: usize, descent: usize) -> Option<usize> {
        let k = self.config.fall_count;
        (self.run_len >= k && j + 1 >= descent + k).then(|| j + 1 - k)
    }

    fn drain(&mut self, start: usize, descent: Option<usize>) {
        self.peak_buffer.clear();
        self.state = State::Draining { start, descent };
    }

    fn take_peak(&mut self) -> (usize, f64) {
        let mut best = self.peak_buffer[0];
        for &(i, v) in &self.peak_buffer[1..] {
            if v > best.1 {
                best = (i, v);
            }
        }
        self.peak_buffer.clear();
        best
    }
}

/// Runs a [`StepDetector`] over a whole series.
pub fn detect_steps(series: &MagnitudeSeries, config: &DetectorConfig) -> Result<Vec<StepEvent>, DetectorError> {
    let mut detector = StepDetector::for_series(series, *config)?;
    Ok(series.values().iter().filter_map(|&v| detector.push(v)).collect())
}

/// Events from a value-at-a-time feed, yielded as soon as each is confirmed.
/// Pulls from `feeder` lazily; nothing is buffered beyond the detector state.
pub fn detect_steps_streaming<I>(
    feeder: I,
    config: &DetectorConfig,
    t0: f64,
    sample_rate_hz: f64,
) -> Result<StreamingSteps<I::IntoIter>, DetectorError>
where
    I: IntoIterator<Item = f64>,
{
    let detector = StepDetector::new(*config, t0, sample_rate_hz)?;
    Ok(StreamingSteps { feeder: feeder.into_iter(), detector })
}

/// Iterator returned by [`detect_steps_streaming`].
#[derive(Debug, Clone)]
pub struct StreamingSteps<I> {
    feeder: I,
    detector: StepDetector,
}

impl<I> StreamingSteps<I> {
    pub fn detector(&self) -> &StepDetector {
        &self.detector
    }
}

impl<I: Iterator<Item = f64>> Iterator for StreamingSteps<I> {
    type Item = StepEvent;

    fn next(&mut self) -> Option<StepEvent> {
        for value in self.feeder.by_ref() {
            if let Some(event) = self.detector.push(value) {
                return Some(event);
            }
        }
        None
    }
}
