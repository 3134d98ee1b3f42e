//! Batch augmentation: named policies, config files, per-file seeding and
//! the manifest-producing runner.
//!
//! A policy names one of seven arms. Every arm, including `none`, runs the
//! same analysis/resynthesis pass (STFT, polar split, recompose, iSTFT) so
//! all arms share an identical reconstruction floor and differ only in the
//! spectrum edits between split and recompose. Combined arms edit the
//! amplitude matrix first, then the phase matrix, inside that single pass.
//!
//! Draw order per arm: VTLP consumes one uniform warp factor; magnitude
//! masking consumes its (width, start) pairs; phase perturbation then
//! consumes one Gaussian per frame followed by its own mask pairs.

mod batch;
mod config;
mod verify;

pub use batch::{run_batch, Manifest, ManifestEntry, MANIFEST_FILE};
pub use config::{load_config, parse_config};
pub use verify::{run_verify, CheckResult, VerifyReport};

use crate::amplitude::{self, AmplitudeOp, VtlpPolicy};
use crate::dsp::{
    self, AmplitudeSpectrum, AudioBuffer, ComplexSpectrogram, PhaseSpectrum, StftConfig,
};
use crate::error::{Error, Result};
use crate::phase::{self, MaskPolicy, PhaseRandomizationPolicy};
use crate::rng::RandomSource;
use std::fmt;
use std::str::FromStr;

/// The seven augmentation arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyName {
    /// Plain resynthesis, no spectrum edit.
    None,
    /// Static whole-spectrum phase rotation baseline.
    PhaseaugStatic,
    /// Frequency warping of the amplitude spectrum.
    Vtlp,
    /// Phase randomization plus frequency and temporal phase masking.
    PhasePerturbation,
    PhasePerturbationVtlp,
    /// Frequency and temporal masking of the amplitude spectrum.
    SpecAug,
    PhasePerturbationSpecAug,
}

impl PolicyName {
    pub const ALL: [PolicyName; 7] = [
        PolicyName::None,
        PolicyName::PhaseaugStatic,
        PolicyName::Vtlp,
        PolicyName::PhasePerturbation,
        PolicyName::PhasePerturbationVtlp,
        PolicyName::SpecAug,
        PolicyName::PhasePerturbationSpecAug,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PolicyName::None => "none",
            PolicyName::PhaseaugStatic => "phaseaug_static",
            PolicyName::Vtlp => "vtlp",
            PolicyName::PhasePerturbation => "phase_perturbation",
            PolicyName::PhasePerturbationVtlp => "phase_perturbation+vtlp",
            PolicyName::SpecAug => "specaug",
            PolicyName::PhasePerturbationSpecAug => "phase_perturbation+specaug",
        }
    }
}

impl fmt::Display for PolicyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidPolicy(format!(
                    "unknown policy `{s}`; expected one of: {}",
                    PolicyName::ALL.map(|p| p.as_str()).join(", ")
                ))
            })
    }
}

/// A named, fully parameterized augmentation arm.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentPolicy {
    pub name: PolicyName,
    pub stft: StftConfig,
    /// Mask widths/counts, shared by phase and amplitude masking.
    pub mask: MaskPolicy,
    pub rand: PhaseRandomizationPolicy,
    pub vtlp: VtlpPolicy,
    /// Rotation angle in radians for the `phaseaug_static` arm.
    pub static_angle: f64,
    pub copies_per_input: u32,
}

impl Default for AugmentPolicy {
    fn default() -> Self {
        Self {
            name: PolicyName::None,
            stft: StftConfig::default(),
            mask: MaskPolicy::default(),
            rand: PhaseRandomizationPolicy::default(),
            vtlp: VtlpPolicy::default(),
            static_angle: std::f64::consts::FRAC_PI_2,
            copies_per_input: 1,
        }
    }
}

impl AugmentPolicy {
    pub fn named(name: PolicyName) -> Self {
        Self {
            name,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.stft.validate()?;
        self.mask.validate()?;
        self.rand.validate()?;
        self.vtlp.validate()?;
        if !self.static_angle.is_finite() {
            return Err(Error::InvalidPolicy("static_angle must be finite".into()));
        }
        if self.copies_per_input == 0 {
            return Err(Error::InvalidPolicy("copies_per_input must be >= 1".into()));
        }
        Ok(())
    }

    /// Canonical config-file rendering; parsing it back reproduces the
    /// policy exactly.
    pub fn to_config_string(&self) -> String {
        format!(
            "policy.name = {}\n\
             policy.copies_per_input = {}\n\
             stft.n_fft = {}\n\
             stft.hop = {}\n\
             stft.window = {}\n\
             stft.one_sided = {}\n\
             phase.sigma = {}\n\
             phase.freq_mask_max = {}\n\
             phase.freq_mask_count = {}\n\
             phase.time_mask_max = {}\n\
             phase.time_mask_count = {}\n\
             phase.time_mask_ratio_cap = {}\n\
             vtlp.warp_min = {}\n\
             vtlp.warp_max = {}\n\
             vtlp.boundary_freq = {}\n\
             static.angle = {}\n",
            self.name,
            self.copies_per_input,
            self.stft.n_fft,
            self.stft.hop,
            self.stft.window.as_str(),
            self.stft.one_sided,
            self.rand.sigma,
            self.mask.freq_mask_max,
            self.mask.freq_mask_count,
            self.mask.time_mask_max,
            self.mask.time_mask_count,
            self.mask.time_mask_ratio_cap,
            self.vtlp.warp_min,
            self.vtlp.warp_max,
            self.vtlp.boundary_freq,
            self.static_angle,
        )
    }
}

/// Pre-synthesis state of one augmented utterance: both spectra after the
/// arm's edits, plus the context needed to recompose.
#[derive(Debug, Clone)]
pub struct AugmentedSpectra {
    pub amplitude: AmplitudeSpectrum,
    pub phase: PhaseSpectrum,
    pub config: StftConfig,
    pub sample_rate: u32,
    pub original_length: usize,
}

impl AugmentedSpectra {
    pub fn recompose(&self) -> Result<ComplexSpectrogram> {
        dsp::recompose(
            &self.amplitude,
            &self.phase,
            &self.config,
            self.original_length,
            self.sample_rate,
        )
    }
}

/// Runs one arm up to (but not including) resynthesis.
pub fn augment_spectra(
    audio: &AudioBuffer,
    policy: &AugmentPolicy,
    rng: &mut RandomSource,
) -> Result<AugmentedSpectra> {
    policy.validate()?;
    let spec = dsp::stft(audio, &policy.stft)?;
    let (mut amplitude, mut phase) = dsp::decompose(&spec);

    match policy.name {
        PolicyName::None => {}
        PolicyName::PhaseaugStatic => {
            phase = phase::rotate_phase_static(&phase, policy.static_angle);
        }
        PolicyName::Vtlp => {
            let op = AmplitudeOp::Vtlp(policy.vtlp);
            amplitude = amplitude::apply_amplitude_op(&amplitude, &op, spec.sample_rate(), rng)?;
        }
        PolicyName::SpecAug => {
            let op = AmplitudeOp::SpecAug(policy.mask);
            amplitude = amplitude::apply_amplitude_op(&amplitude, &op, spec.sample_rate(), rng)?;
        }
        PolicyName::PhasePerturbation => {
            phase = phase::perturb_phase_spectrum(&phase, &policy.mask, &policy.rand, rng)?;
        }
        PolicyName::PhasePerturbationVtlp => {
            let op = AmplitudeOp::Vtlp(policy.vtlp);
            amplitude = amplitude::apply_amplitude_op(&amplitude, &op, spec.sample_rate(), rng)?;
            phase = phase::perturb_phase_spectrum(&phase, &policy.mask, &policy.rand, rng)?;
        }
        PolicyName::PhasePerturbationSpecAug => {
            let op = AmplitudeOp::SpecAug(policy.mask);
            amplitude = amplitude::apply_amplitude_op(&amplitude, &op, spec.sample_rate(), rng)?;
            phase = phase::perturb_phase_spectrum(&phase, &policy.mask, &policy.rand, rng)?;
        }
    }

    Ok(AugmentedSpectra {
        amplitude,
        phase,
        config: spec.config().clone(),
        sample_rate: spec.sample_rate(),
        original_length: spec.original_length(),
    })
}

/// Runs one arm end to end; the output has the input's length.
pub fn augment_buffer(
    audio: &AudioBuffer,
    policy: &AugmentPolicy,
    rng: &mut RandomSource,
) -> Result<AudioBuffer> {
    let spectra = augment_spectra(audio, policy, rng)?;
    dsp::istft(&spectra.recompose()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noise(len: usize, seed: u64) -> AudioBuffer {
        let mut rng = RandomSource::new(seed);
        let samples = (0..len).map(|_| rng.next_f64_range(-0.5, 0.5)).collect();
        AudioBuffer::new(samples, 16_000).unwrap()
    }

    #[test]
    fn policy_names_round_trip() {
        for name in PolicyName::ALL {
            assert_eq!(name.as_str().parse::<PolicyName>().unwrap(), name);
        }
        assert!("phaseperturb".parse::<PolicyName>().is_err());
    }

    #[test]
    fn none_arm_is_resynthesis() {
        let audio = noise(8000, 3);
        let policy = AugmentPolicy::named(PolicyName::None);
        let out = augment_buffer(&audio, &policy, &mut RandomSource::new(0)).unwrap();
        assert_eq!(out.len(), audio.len());
        let max_err = audio
            .samples()
            .iter()
            .zip(out.samples())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_err <= 1e-6);
    }

    #[test]
    fn every_arm_preserves_length_and_is_deterministic() {
        let audio = noise(7777, 5);
        for name in PolicyName::ALL {
            let policy = AugmentPolicy::named(name);
            let a = augment_buffer(&audio, &policy, &mut RandomSource::new(11)).unwrap();
            let b = augment_buffer(&audio, &policy, &mut RandomSource::new(11)).unwrap();
            assert_eq!(a.len(), audio.len(), "{name}");
            for (x, y) in a.samples().iter().zip(b.samples()) {
                assert_eq!(x.to_bits(), y.to_bits(), "{name}");
            }
        }
    }

    #[test]
    fn combined_arm_edits_both_spectra() {
        let audio = noise(9000, 8);
        let policy = AugmentPolicy::named(PolicyName::PhasePerturbationSpecAug);
        let spectra = augment_spectra(&audio, &policy, &mut RandomSource::new(13)).unwrap();
        let baseline = dsp::stft(&audio, &policy.stft).unwrap();
        let (amp0, phase0) = dsp::decompose(&baseline);
        let amp_changed = spectra
            .amplitude
            .matrix()
            .data()
            .iter()
            .zip(amp0.matrix().data())
            .any(|(a, b)| a != b);
        let phase_changed = spectra
            .phase
            .matrix()
            .data()
            .iter()
            .zip(phase0.matrix().data())
            .any(|(a, b)| a != b);
        assert!(amp_changed, "amplitude masking left no trace");
        assert!(phase_changed, "phase perturbation left no trace");
    }

    #[test]
    fn phase_arms_keep_amplitude_bits() {
        let audio = noise(6500, 9);
        for name in [PolicyName::PhasePerturbation, PolicyName::PhaseaugStatic] {
            let policy = AugmentPolicy::named(name);
            let spectra = augment_spectra(&audio, &policy, &mut RandomSource::new(17)).unwrap();
            let baseline = dsp::stft(&audio, &policy.stft).unwrap();
            let (amp0, _) = dsp::decompose(&baseline);
            for (a, b) in spectra
                .amplitude
                .matrix()
                .data()
                .iter()
                .zip(amp0.matrix().data())
            {
                assert_eq!(a.to_bits(), b.to_bits(), "{name}");
            }
        }
    }

    #[test]
    fn amplitude_arms_keep_phase_bits() {
        let audio = noise(6500, 10);
        for name in [PolicyName::Vtlp, PolicyName::SpecAug] {
            let policy = AugmentPolicy::named(name);
            let spectra = augment_spectra(&audio, &policy, &mut RandomSource::new(19)).unwrap();
            let baseline = dsp::stft(&audio, &policy.stft).unwrap();
            let (_, phase0) = dsp::decompose(&baseline);
            for (a, b) in spectra
                .phase
                .matrix()
                .data()
                .iter()
                .zip(phase0.matrix().data())
            {
                assert_eq!(a.to_bits(), b.to_bits(), "{name}");
            }
        }
    }

    #[test]
    fn degenerate_perturbation_matches_none_bit_exactly() {
        let audio = noise(12_345, 21);
        let mut degenerate = AugmentPolicy::named(PolicyName::PhasePerturbation);
        degenerate.rand.sigma = 0.0;
        degenerate.mask.freq_mask_max = 0;
        degenerate.mask.time_mask_max = 0;
        let none = AugmentPolicy::named(PolicyName::None);
        let a = augment_buffer(&audio, &degenerate, &mut RandomSource::new(2)).unwrap();
        let b = augment_buffer(&audio, &none, &mut RandomSource::new(999)).unwrap();
        for (x, y) in a.samples().iter().zip(b.samples()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}
