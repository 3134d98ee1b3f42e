//! Amplitude-spectrum augmentations: magnitude masking and vocal tract
//! length perturbation (VTLP).
//!
//! These are the amplitude-domain counterparts the phase operations compose
//! with. They reuse the mask samplers from [`crate::phase`] and never touch
//! the phase matrix.

use crate::dsp::{self, AmplitudeSpectrum, AudioBuffer, Matrix, StftConfig};
use crate::error::{Error, Result};
use crate::phase::{sample_freq_masks, sample_time_masks, MaskAxis, MaskPolicy};
use crate::rng::RandomSource;

/// Warp-factor range and pivot frequency for VTLP.
///
/// The frequency axis is stretched by slope `alpha` below `boundary_freq`
/// and relinearized above it so Nyquist maps to Nyquist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VtlpPolicy {
    pub warp_min: f64,
    pub warp_max: f64,
    /// Pivot of the piecewise-linear warp, in Hz.
    pub boundary_freq: f64,
}

impl Default for VtlpPolicy {
    fn default() -> Self {
        Self {
            warp_min: 0.9,
            warp_max: 1.1,
            boundary_freq: 4800.0,
        }
    }
}

impl VtlpPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.warp_min.is_finite() && self.warp_max.is_finite())
            || self.warp_min <= 0.0
            || self.warp_min > self.warp_max
        {
            return Err(Error::InvalidPolicy(format!(
                "warp range must satisfy 0 < warp_min <= warp_max, got [{}, {}]",
                self.warp_min, self.warp_max
            )));
        }
        if !self.boundary_freq.is_finite() || self.boundary_freq <= 0.0 {
            return Err(Error::InvalidPolicy(format!(
                "boundary_freq must be positive, got {}",
                self.boundary_freq
            )));
        }
        Ok(())
    }
}

/// Amplitude-domain operation selector for [`amplitude_augment`].
#[derive(Debug, Clone, PartialEq)]
pub enum AmplitudeOp {
    /// Frequency and temporal magnitude masking.
    SpecAug(MaskPolicy),
    /// Frequency warping with the factor drawn uniformly from the policy range.
    Vtlp(VtlpPolicy),
}

/// Zeroes sampled frequency and time bands of the magnitude matrix.
///
/// Mask draws follow the shared samplers: frequency masks first, then
/// temporal masks.
pub fn spec_mask_amplitude(
    amplitude: &AmplitudeSpectrum,
    policy: &MaskPolicy,
    rng: &mut RandomSource,
) -> Result<AmplitudeSpectrum> {
    policy.validate()?;
    let mut matrix = amplitude.matrix().clone();
    let freq_masks = sample_freq_masks(matrix.bins(), policy, rng)?;
    let time_masks = sample_time_masks(matrix.frames(), policy, rng);
    for mask in freq_masks.iter().chain(&time_masks) {
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
    Ok(AmplitudeSpectrum::from_matrix_unchecked(matrix))
}

/// Fractional source bin feeding warped bin `k` under the inverse of the
/// piecewise-linear frequency map.
fn vtlp_source_bin(k: f64, alpha: f64, boundary_bin: f64, nyquist_bin: f64) -> f64 {
    let pivot = alpha * boundary_bin;
    if k <= pivot {
        k / alpha
    } else {
        boundary_bin + (k - pivot) * (nyquist_bin - boundary_bin) / (nyquist_bin - pivot)
    }
}

/// Remaps bin magnitudes along the VTLP frequency warp.
///
/// Each output bin gathers from the inverse-mapped fractional source
/// position with linear interpolation, so dimensions are preserved and the
/// map is monotone. `alpha` must lie within the policy range.
pub fn vtlp_warp(
    amplitude: &AmplitudeSpectrum,
    alpha: f64,
    policy: &VtlpPolicy,
    sample_rate: u32,
) -> Result<AmplitudeSpectrum> {
    policy.validate()?;
    if !alpha.is_finite() || alpha < policy.warp_min || alpha > policy.warp_max {
        return Err(Error::InvalidInput(format!(
            "alpha {alpha} outside policy range [{}, {}]",
            policy.warp_min, policy.warp_max
        )));
    }
    let bins = amplitude.bins();
    if bins < 2 {
        return Err(Error::InvalidInput(
            "need at least two frequency bins".into(),
        ));
    }
    let nyquist_hz = sample_rate as f64 / 2.0;
    if policy.boundary_freq >= nyquist_hz {
        return Err(Error::InvalidPolicy(format!(
            "boundary_freq {} must be below Nyquist {nyquist_hz}",
            policy.boundary_freq
        )));
    }
    let nyquist_bin = (bins - 1) as f64;
    let boundary_bin = policy.boundary_freq / nyquist_hz * nyquist_bin;
    if alpha * boundary_bin >= nyquist_bin {
        return Err(Error::InvalidInput(format!(
            "warp pivot {alpha} * {boundary_bin:.1} reaches Nyquist; lower boundary_freq \
             or warp_max"
        )));
    }

    let src = amplitude.matrix();
    let mut out = Matrix::zero(bins, src.frames());
    for m in 0..src.frames() {
        let column = src.frame(m);
        let target = out.frame_mut(m);
        for (k, value) in target.iter_mut().enumerate() {
            let pos =
                vtlp_source_bin(k as f64, alpha, boundary_bin, nyquist_bin).clamp(0.0, nyquist_bin);
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(bins - 1);
            let frac = pos - lo as f64;
            *value = column[lo] * (1.0 - frac) + column[hi] * frac;
        }
    }
    Ok(AmplitudeSpectrum::from_matrix_unchecked(out))
}

/// Waveform-to-waveform amplitude augmentation: the selected operation runs
/// on the magnitude matrix, the original phase matrix is kept, and the
/// result is resynthesized. Output length equals input length.
pub fn amplitude_augment(
    audio: &AudioBuffer,
    config: &StftConfig,
    op: &AmplitudeOp,
    rng: &mut RandomSource,
) -> Result<AudioBuffer> {
    let spec = dsp::stft(audio, config)?;
    let (amplitude, phase) = dsp::decompose(&spec);
    let modified = apply_amplitude_op(&amplitude, op, spec.sample_rate(), rng)?;
    let recombined = dsp::recompose(
        &modified,
        &phase,
        spec.config(),
        spec.original_length(),
        spec.sample_rate(),
    )?;
    dsp::istft(&recombined)
}

/// Applies one amplitude operation to a magnitude matrix. VTLP draws its
/// warp factor from `rng` first; masking consumes the shared mask draws.
pub fn apply_amplitude_op(
    amplitude: &AmplitudeSpectrum,
    op: &AmplitudeOp,
    sample_rate: u32,
    rng: &mut RandomSource,
) -> Result<AmplitudeSpectrum> {
    match op {
        AmplitudeOp::SpecAug(policy) => spec_mask_amplitude(amplitude, policy, rng),
        AmplitudeOp::Vtlp(policy) => {
            policy.validate()?;
            let alpha = rng.next_f64_range(policy.warp_min, policy.warp_max);
            vtlp_warp(amplitude, alpha, policy, sample_rate)
        }
    }
}
