//! Phase-spectrum augmentation operations.
//!
//! Three dynamic operations act on the phase matrix while the amplitude
//! matrix is never touched: per-frame randomization (every angle in a time
//! frame is scaled by one Gaussian factor), frequency masking and temporal
//! masking (contiguous bands zeroed). A static whole-spectrum rotation is
//! included as the baseline these are measured against.
//!
//! Draw order is fixed for reproducibility: randomization consumes one
//! Gaussian per time frame in frame order, then each mask consumes a
//! (width, start) pair of uniform draws in listed order.

use crate::dsp::{self, AudioBuffer, PhaseSpectrum, StftConfig};
use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Strength of the per-frame phase multiplier; factors are drawn from
/// N(1, sigma^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRandomizationPolicy {
    pub sigma: f64,
}

impl PhaseRandomizationPolicy {
    pub fn new(sigma: f64) -> Result<Self> {
        let policy = Self { sigma };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.sigma.is_finite() || self.sigma < 0.0 {
            return Err(Error::InvalidPolicy(format!(
                "sigma must be finite and >= 0, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

impl Default for PhaseRandomizationPolicy {
    fn default() -> Self {
        Self { sigma: 0.1 }
    }
}

/// Mask widths and counts for frequency and temporal masking.
///
/// `time_mask_ratio_cap` bounds a temporal mask to that fraction of the
/// frame count, on top of `time_mask_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskPolicy {
    /// Maximum frequency mask width in bins.
    pub freq_mask_max: usize,
    /// Number of frequency masks.
    pub freq_mask_count: usize,
    /// Maximum temporal mask width in frames.
    pub time_mask_max: usize,
    /// Number of temporal masks.
    pub time_mask_count: usize,
    /// Upper bound on temporal mask width as a fraction of the frame count.
    pub time_mask_ratio_cap: f64,
}

impl Default for MaskPolicy {
    fn default() -> Self {
        Self {
            freq_mask_max: 10,
            freq_mask_count: 2,
            time_mask_max: 45,
            time_mask_count: 2,
            time_mask_ratio_cap: 0.1,
        }
    }
}

impl MaskPolicy {
    pub fn validate(&self) -> Result<()> {
        if !self.time_mask_ratio_cap.is_finite() || !(0.0..=1.0).contains(&self.time_mask_ratio_cap)
        {
            return Err(Error::InvalidPolicy(format!(
                "time_mask_ratio_cap must lie in [0, 1], got {}",
                self.time_mask_ratio_cap
            )));
        }
        Ok(())
    }
}

/// Axis a sampled mask spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskAxis {
    Frequency,
    Time,
}

/// One contiguous masked band: `width` indices starting at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampledMask {
    pub axis: MaskAxis,
    pub start: usize,
    pub width: usize,
}

/// Scales every angle in time frame `i` by one factor drawn from
/// N(1, sigma^2); exactly one Gaussian draw per frame, frames in order.
pub fn randomize_phase(
    phase: &PhaseSpectrum,
    policy: &PhaseRandomizationPolicy,
    rng: &mut RandomSource,
) -> PhaseSpectrum {
    let mut matrix = phase.matrix().clone();
    for m in 0..matrix.frames() {
        let factor = rng.next_gaussian(1.0, policy.sigma);
        for v in matrix.frame_mut(m) {
            *v *= factor;
        }
    }
    PhaseSpectrum::from_matrix_unchecked(matrix)
}

/// Draws `freq_mask_count` frequency masks: width uniform over
/// `{0..=freq_mask_max}`, start uniform over `{0..=bins-width}`. Masks are
/// independent and may overlap.
pub fn sample_freq_masks(
    bins: usize,
    policy: &MaskPolicy,
    rng: &mut RandomSource,
) -> Result<Vec<SampledMask>> {
    if policy.freq_mask_max > bins {
        return Err(Error::InvalidPolicy(format!(
            "freq_mask_max {} exceeds bin count {bins}",
            policy.freq_mask_max
        )));
    }
    Ok((0..policy.freq_mask_count)
        .map(|_| {
            let width = rng.next_inclusive(policy.freq_mask_max);
            let start = rng.next_inclusive(bins - width);
            SampledMask {
                axis: MaskAxis::Frequency,
                start,
                width,
            }
        })
        .collect())
}

/// Draws `time_mask_count` temporal masks. The effective maximum width is
/// `min(time_mask_max, floor(time_mask_ratio_cap * frames))`.
pub fn sample_time_masks(
    frames: usize,
    policy: &MaskPolicy,
    rng: &mut RandomSource,
) -> Vec<SampledMask> {
    let cap = (policy.time_mask_ratio_cap * frames as f64).floor() as usize;
    let max_width = policy.time_mask_max.min(cap).min(frames);
    (0..policy.time_mask_count)
        .map(|_| {
            let width = rng.next_inclusive(max_width);
            let start = rng.next_inclusive(frames - width);
            SampledMask {
                axis: MaskAxis::Time,
                start,
                width,
            }
        })
        .collect()
}

/// Zeroes the band each mask spans: all frames of the masked bins for a
/// frequency mask, all bins of the masked frames for a temporal mask.
/// Overlapping masks are idempotent.
pub fn apply_masks(phase: &PhaseSpectrum, masks: &[SampledMask]) -> Result<PhaseSpectrum> {
    let mut matrix = phase.matrix().clone();
    for mask in masks {
        let limit = match mask.axis {
            MaskAxis::Frequency => matrix.bins(),
            MaskAxis::Time => matrix.frames(),
        };
        if mask.start + mask.width > limit {
            return Err(Error::InvalidInput(format!(
                "mask [{}, {}) exceeds axis length {limit}",
                mask.start,
                mask.start + mask.width
            )));
        }
        match mask.axis {
            MaskAxis::Frequency => {
                for m in 0..matrix.frames() {
                    for k in mask.start..mask.start + mask.width {
                        matrix.set(k, m, 0.0);
                    }
                }
            }
            MaskAxis::Time => {
                for m in mask.start..mask.start + mask.width {
                    matrix.frame_mut(m).fill(0.0);
                }
            }
        }
    }
    Ok(PhaseSpectrum::from_matrix_unchecked(matrix))
}

/// Adds a constant angle to every entry; the static baseline rotation.
pub fn rotate_phase_static(phase: &PhaseSpectrum, angle: f64) -> PhaseSpectrum {
    let mut matrix = phase.matrix().clone();
    for m in 0..matrix.frames() {
        for v in matrix.frame_mut(m) {
            *v += angle;
        }
    }
    PhaseSpectrum::from_matrix_unchecked(matrix)
}

/// Runs the three phase operations in order: randomization, frequency
/// masks, temporal masks.
pub fn perturb_phase_spectrum(
    phase: &PhaseSpectrum,
    mask_policy: &MaskPolicy,
    rand_policy: &PhaseRandomizationPolicy,
    rng: &mut RandomSource,
) -> Result<PhaseSpectrum> {
    rand_policy.validate()?;
    mask_policy.validate()?;
    let randomized = randomize_phase(phase, rand_policy, rng);
    let freq_masks = sample_freq_masks(randomized.bins(), mask_policy, rng)?;
    let masked = apply_masks(&randomized, &freq_masks)?;
    let time_masks = sample_time_masks(masked.frames(), mask_policy, rng);
    apply_masks(&masked, &time_masks)
}

/// Full waveform-to-waveform phase perturbation.
///
/// Analyzes the input, perturbs only the phase matrix, recombines it with
/// the untouched amplitude matrix and resynthesizes. Output length equals
/// input length.
pub fn phase_perturb(
    audio: &AudioBuffer,
    config: &StftConfig,
    mask_policy: &MaskPolicy,
    rand_policy: &PhaseRandomizationPolicy,
    rng: &mut RandomSource,
) -> Result<AudioBuffer> {
    let spec = dsp::stft(audio, config)?;
    let (amplitude, phase) = dsp::decompose(&spec);
    let perturbed = perturb_phase_spectrum(&phase, mask_policy, rand_policy, rng)?;
    let recombined = dsp::recompose(
        &amplitude,
        &perturbed,
        spec.config(),
        spec.original_length(),
        spec.sample_rate(),
    )?;
    dsp::istft(&recombined)
}
