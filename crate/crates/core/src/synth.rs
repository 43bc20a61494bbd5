//! Synthetic hand-held walking traces with known ground truth.
//!
//! A trace is `LEAD_IN_S` of stillness, `step_count` back-to-back
//! raised-cosine bumps on z, then `TAIL_S` of stillness, with gravity on z
//! throughout. Each step's duration is `stride / mean_stride / cadence`, so
//! longer strides give longer bumps. Fake peaks are half-duration bumps
//! placed between a randomly chosen true step's peak and the next peak.
//!
//! Timestamps are rounded to 6 decimals and axes to 4, matching the CSV
//! writer, so a written and re-read trace is bit-identical.
//!
//! Randomness comes from [`RNG_ALGORITHM`] seeded with `seed`; the same
//! profile always yields the same trace.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::round::round_decimals;
use crate::trace::{AccelSample, Trace, TraceError};

pub const GRAVITY: f64 = 9.81;
pub const LEAD_IN_S: f64 = 1.0;
pub const TAIL_S: f64 = 1.0;
/// Identifier of the generator behind [`generate_trace`], recorded in
/// corpus manifests.
pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.9), seed_from_u64";
/// Stride multipliers are clamped to this range before use.
pub const STRIDE_FACTOR_RANGE: (f64, f64) = (0.5, 1.5);
/// Fake peak centre, as a fraction of the host step's duration after its
/// peak: somewhere between the host peak and the next one.
pub const FAKE_LAG_RANGE: (f64, f64) = (0.25, 0.75);

#[derive(Debug, Clone, PartialEq)]
pub enum SynthError {
    InvalidProfile(&'static str),
    Trace(TraceError),
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidProfile(why) => write!(f, "invalid gait profile: {why}"),
            Self::Trace(e) => write!(f, "generated trace is invalid: {e}"),
        }
    }
}

impl core::error::Error for SynthError {}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct GaitProfile {
    pub step_count: usize,
    /// Steps per second at the mean stride.
    pub cadence_hz: f64,
    pub stride_length_mean_m: f64,
    /// Coefficient of variation of stride length.
    pub stride_length_cv: f64,
    pub peak_amplitude_m_s2: f64,
    pub fake_peak_count: usize,
    pub fake_peak_amplitude_fraction: f64,
    pub noise_sigma_m_s2: f64,
    pub sample_rate_hz: f64,
    pub seed: u64,
}

impl Default for GaitProfile {
    fn default() -> Self {
        Self {
            step_count: 20,
            cadence_hz: 2.0,
            stride_length_mean_m: 1.0,
            stride_length_cv: 0.0,
            peak_amplitude_m_s2: 8.0,
            fake_peak_count: 0,
            fake_peak_amplitude_fraction: 0.6,
            noise_sigma_m_s2: 0.0,
            sample_rate_hz: 50.0,
            seed: 42,
        }
    }
}

impl GaitProfile {
    pub fn validate(&self) -> Result<(), SynthError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.cadence_hz) {
            return Err(SynthError::InvalidProfile("cadence_hz must be positive"));
        }
        if !positive(self.sample_rate_hz) || self.sample_rate_hz < 4.0 * self.cadence_hz {
            return Err(SynthError::InvalidProfile("sample_rate_hz must be at least 4 × cadence_hz"));
        }
        if !positive(self.stride_length_mean_m) {
            return Err(SynthError::InvalidProfile("stride_length_mean_m must be positive"));
        }
        if !(0.0..1.0).contains(&self.stride_length_cv) {
            return Err(SynthError::InvalidProfile("stride_length_cv must be in [0, 1)"));
        }
        if !positive(self.peak_amplitude_m_s2) {
            return Err(SynthError::InvalidProfile("peak_amplitude_m_s2 must be positive"));
        }
        if !(self.fake_peak_amplitude_fraction > 0.0 && self.fake_peak_amplitude_fraction < 1.0) {
            return Err(SynthError::InvalidProfile("fake_peak_amplitude_fraction must be in (0, 1)"));
        }
        if !(self.noise_sigma_m_s2.is_finite() && self.noise_sigma_m_s2 >= 0.0) {
            return Err(SynthError::InvalidProfile("noise_sigma_m_s2 must be non-negative"));
        }
        Ok(())
    }
}

/// Exact placement and length of one generated step.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrueStep {
    pub start_t: f64,
    pub peak_t: f64,
    pub end_t: f64,
    pub stride_length_m: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroundTruth {
    pub true_steps: Vec<TrueStep>,
    pub true_distance_m: f64,
    pub fake_peak_times: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Bump {
    start_t: f64,
    duration_s: f64,
    amplitude: f64,
}

impl Bump {
    fn add_to(&self, z: &mut [f64], rate: f64) {
        let first = libm::ceil(self.start_t * rate).max(0.0) as usize;
        let last = libm::floor((self.start_t + self.duration_s) * rate) as usize;
        for (i, zi) in z.iter_mut().enumerate().take(last + 1).skip(first) {
            let phase = (i as f64 / rate - self.start_t) / self.duration_s;
            if (0.0..=1.0).contains(&phase) {
                *zi += self.amplitude * 0.5 * (1.0 - libm::cos(2.0 * PI * phase));
            }
        }
    }
}

pub fn generate_trace(profile: &GaitProfile) -> Result<(Trace, GroundTruth), SynthError> {
    profile.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    let rate = profile.sample_rate_hz;
    let nominal = 1.0 / profile.cadence_hz;

    let mut true_steps = Vec::with_capacity(profile.step_count);
    let mut bumps = Vec::with_capacity(profile.step_count + profile.fake_peak_count);
    let mut t = LEAD_IN_S;
    for _ in 0..profile.step_count {
        let z: f64 = StandardNormal.sample(&mut rng);
        let factor = (1.0 + profile.stride_length_cv * z).clamp(STRIDE_FACTOR_RANGE.0, STRIDE_FACTOR_RANGE.1);
        let duration = nominal * factor;
        true_steps.push(TrueStep {
            start_t: t,
            peak_t: t + duration / 2.0,
            end_t: t + duration,
            stride_length_m: profile.stride_length_mean_m * factor,
        });
        bumps.push(Bump { start_t: t, duration_s: duration, amplitude: profile.peak_amplitude_m_s2 });
        t += duration;
    }
    let body_end = t;
    let total = body_end + TAIL_S;

    let fake_amplitude = profile.peak_amplitude_m_s2 * profile.fake_peak_amplitude_fraction;
    let mut fake_peak_times = Vec::with_capacity(profile.fake_peak_count);
    let hosts: Vec<usize> = match profile.step_count {
        0 => Vec::new(),
        n if profile.fake_peak_count <= n => {
            let mut h = sample_indices(&mut rng, n, profile.fake_peak_count).into_vec();
            h.sort_unstable();
            h
        }
        n => (0..profile.fake_peak_count).map(|i| i % n).collect(),
    };
    for i in 0..profile.fake_peak_count {
        let (centre, duration) = match hosts.get(i) {
            Some(&h) => {
                let host = &true_steps[h];
                let d = host.end_t - host.start_t;
                let lag = rng.random_range(FAKE_LAG_RANGE.0..=FAKE_LAG_RANGE.1);
                (host.peak_t + lag * d, d / 2.0)
            }
            None => (rng.random_range(0.5..=total - 0.5), nominal / 2.0),
        };
        fake_peak_times.push(centre);
        bumps.push(Bump { start_t: centre - duration / 2.0, duration_s: duration, amplitude: fake_amplitude });
    }
    fake_peak_times.sort_by(f64::total_cmp);

    let n = libm::floor(total * rate) as usize + 1;
    let mut z = alloc::vec![GRAVITY; n];
    for bump in &bumps {
        bump.add_to(&mut z, rate);
    }

    let noise = if profile.noise_sigma_m_s2 > 0.0 {
        Some(
            Normal::new(0.0, profile.noise_sigma_m_s2)
                .map_err(|_| SynthError::InvalidProfile("noise_sigma_m_s2 must be non-negative"))?,
        )
    } else {
        None
    };
    let mut jitter = || noise.map_or(0.0, |d| d.sample(&mut rng));
    let samples = z
        .iter()
        .enumerate()
        .map(|(i, &zi)| {
            let (nx, ny, nz) = (jitter(), jitter(), jitter());
            AccelSample::new(
                round_decimals(i as f64 / rate, 6),
                round_decimals(nx, 4),
                round_decimals(ny, 4),
                round_decimals(zi + nz, 4),
            )
        })
        .collect();

    let mut meta = BTreeMap::new();
    meta.insert("seed".to_string(), profile.seed.to_string());
    meta.insert("step_count".to_string(), profile.step_count.to_string());
    let trace = Trace::new(samples, meta).map_err(SynthError::Trace)?;

    let true_distance_m = true_steps.iter().map(|s| s.stride_length_m).sum();
    Ok((trace, GroundTruth { true_steps, true_distance_m, fake_peak_times }))
}
