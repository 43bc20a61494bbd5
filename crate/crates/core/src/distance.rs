//! Dynamic step length: grade each step against the mean step duration and
//! add up weighted nominal step lengths.

use alloc::vec::Vec;
use core::fmt;

use crate::detector::StepEvent;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceError {
    EmptySteps,
    NonPositiveAverage,
    InvalidWeighting(&'static str),
}

impl fmt::Display for DistanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptySteps => f.write_str("no steps to average"),
            Self::NonPositiveAverage => f.write_str("average step size must be positive"),
            Self::InvalidWeighting(why) => write!(f, "invalid step weighting: {why}"),
        }
    }
}

impl core::error::Error for DistanceError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Category {
    Short,
    Medium,
    Long,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Short => "short",
            Self::Medium => "medium",
            Self::Long => "long",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct StepWeighting {
    pub short_weight: f64,
    pub medium_weight: f64,
    pub long_weight: f64,
    /// Half-width of the medium band, relative to the average.
    pub medium_band_fraction: f64,
    /// Nominal length of one medium step, in meters.
    pub base_step_length_m: f64,
}

impl Default for StepWeighting {
    fn default() -> Self {
        Self {
            short_weight: 0.5,
            medium_weight: 1.0,
            long_weight: 1.5,
            medium_band_fraction: 0.1,
            base_step_length_m: 1.0,
        }
    }
}

impl StepWeighting {
    pub fn validate(&self) -> Result<(), DistanceError> {
        if !(0.0 < self.short_weight
            && self.short_weight < self.medium_weight
            && self.medium_weight < self.long_weight
            && self.long_weight.is_finite())
        {
            return Err(DistanceError::InvalidWeighting("need 0 < short < medium < long"));
        }
        if !(0.0..1.0).contains(&self.medium_band_fraction) {
            return Err(DistanceError::InvalidWeighting("medium band must be in [0, 1)"));
        }
        if !(self.base_step_length_m.is_finite() && self.base_step_length_m > 0.0) {
            return Err(DistanceError::InvalidWeighting("base step length must be positive"));
        }
        Ok(())
    }

    pub fn weight(&self, category: Category) -> f64 {
        match category {
            Category::Short => self.short_weight,
            Category::Medium => self.medium_weight,
            Category::Long => self.long_weight,
        }
    }
}

/// Arithmetic mean of `duration_s`.
pub fn mean_step_size(steps: &[StepEvent]) -> Result<f64, DistanceError> {
    if steps.is_empty() {
        return Err(DistanceError::EmptySteps);
    }
    Ok(steps.iter().map(|s| s.duration_s).sum::<f64>() / steps.len() as f64)
}

/// Grades one step against `avg`. The medium band is closed:
/// `avg - band·avg <= duration <= avg + band·avg`.
pub fn categorize(step: &StepEvent, avg: f64, weighting: &StepWeighting) -> Result<(Category, f64), DistanceError> {
    if !(avg > 0.0 && avg.is_finite()) {
        return Err(DistanceError::NonPositiveAverage);
    }
    let half_band = weighting.medium_band_fraction * avg;
    let (lo, hi) = (avg - half_band, avg + half_band);
    let category = if step.duration_s < lo {
        Category::Short
    } else if step.duration_s > hi {
        Category::Long
    } else {
        Category::Medium
    };
    Ok((category, weighting.weight(category)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightedStep {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub step: StepEvent,
    pub category: Category,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistanceEstimate {
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::round::serialize_6dp"))]
    pub distance_m: f64,
    pub step_count: usize,
    pub per_step: Vec<WeightedStep>,
}

impl DistanceEstimate {
    pub fn alpha_sum(&self) -> f64 {
        self.per_step.iter().map(|s| s.alpha).sum()
    }
}

/// Distance as the sum of `base_step_length_m × α` over all steps, with α
/// graded against the batch mean duration.
pub fn estimate_distance(steps: &[StepEvent], weighting: &StepWeighting) -> Result<DistanceEstimate, DistanceError> {
    weighting.validate()?;
    if steps.is_empty() {
        return Ok(DistanceEstimate { distance_m: 0.0, step_count: 0, per_step: Vec::new() });
    }
    let avg = mean_step_size(steps)?;
    let per_step = steps
        .iter()
        .map(|step| {
            let (category, alpha) = categorize(step, avg, weighting)?;
            Ok(WeightedStep { step: *step, category, alpha })
        })
        .collect::<Result<Vec<_>, DistanceError>>()?;
    let distance_m = per_step.iter().map(|s| weighting.base_step_length_m * s.alpha).sum();
    Ok(DistanceEstimate { distance_m, step_count: per_step.len(), per_step })
}

/// Online variant of [`estimate_distance`]: each step is graded against the
/// mean of all durations seen so far, itself included, so the first step is
/// always medium.
#[derive(Debug, Clone)]
pub struct RunningDistance {
    weighting: StepWeighting,
    duration_sum: f64,
    count: usize,
    distance_m: f64,
}

impl RunningDistance {
    pub fn new(weighting: StepWeighting) -> Result<Self, DistanceError> {
        weighting.validate()?;
        Ok(Self { weighting, duration_sum: 0.0, count: 0, distance_m: 0.0 })
    }

    pub fn push(&mut self, step: &StepEvent) -> Result<WeightedStep, DistanceError> {
        self.duration_sum += step.duration_s;
        self.count += 1;
        let avg = self.duration_sum / self.count as f64;
        let (category, alpha) = categorize(step, avg, &self.weighting)?;
        self.distance_m += self.weighting.base_step_length_m * alpha;
        Ok(WeightedStep { step: *step, category, alpha })
    }

    pub fn distance_m(&self) -> f64 {
        self.distance_m
    }

    pub fn step_count(&self) -> usize {
        self.count
    }
}
