//! Built-in numerical self-checks behind the `verify` subcommand.
//!
//! Runs the reconstruction, oracle-DFT and invariance checks against either
//! a provided buffer or a synthesized noise signal, and reports the worst
//! observed error per check. The `corrupt_window` flag is a negative
//! control: it biases the synthesis normalizer so the round-trip check must
//! fail.

use super::{augment_spectra, AugmentPolicy, PolicyName};
use crate::dsp::{self, hann_window, AudioBuffer, StftConfig};
use crate::error::Result;
use crate::rng::RandomSource;
use std::fmt;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// All check outcomes of one `verify` run.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:24} {} (max error {:.3e}, tolerance {:.1e})",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.max_error,
                c.tolerance
            )?;
        }
        Ok(())
    }
}

fn check(name: &'static str, max_error: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        name,
        max_error,
        tolerance,
        pass: max_error <= tolerance,
    }
}

fn synthesized_signal() -> AudioBuffer {
    let mut rng = RandomSource::new(0x5eed);
    let samples = (0..16_000).map(|_| rng.next_f64_range(-0.5, 0.5)).collect();
    AudioBuffer::new(samples, 16_000).expect("synthesized signal is valid")
}

/// Runs all checks; `input` defaults to a synthesized test signal.
pub fn run_verify(input: Option<&AudioBuffer>, corrupt_window: bool) -> Result<VerifyReport> {
    let signal = match input {
        Some(buffer) => buffer.clone(),
        None => synthesized_signal(),
    };
    let config = StftConfig::default();
    let spec = dsp::stft(&signal, &config)?;
    let mut checks = Vec::new();

    // Round trip through analysis and overlap-add synthesis.
    let mut window = hann_window(config.n_fft);
    if corrupt_window {
        for w in window
            .iter_mut()
            .skip(config.n_fft / 3)
            .take(config.n_fft / 3)
        {
            *w *= 1.003;
        }
    }
    let back = dsp::istft_with_window(&spec, &window)?;
    let round_trip = signal
        .samples()
        .iter()
        .zip(back.samples())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    checks.push(check("round_trip", round_trip, 1e-6));

    // Fast transform against the direct-summation reference.
    let probes = [0, spec.frames() / 2, spec.frames() - 1];
    let mut oracle = 0.0f64;
    for m in probes {
        let frame = dsp::analysis_frame(&signal, &config, m)?;
        for (k, want) in dsp::naive_dft_frame(&frame).iter().enumerate() {
            oracle = oracle.max((spec.at(k, m) - want).norm());
        }
    }
    checks.push(check("oracle_dft", oracle, 1e-9));

    // Phase perturbation must leave the amplitude matrix bit-identical.
    let policy = AugmentPolicy::named(PolicyName::PhasePerturbation);
    let spectra = augment_spectra(&signal, &policy, &mut RandomSource::new(1))?;
    let (amplitude, _) = dsp::decompose(&spec);
    let invariance = spectra
        .amplitude
        .matrix()
        .data()
        .iter()
        .zip(amplitude.matrix().data())
        .map(|(a, b)| {
            if a.to_bits() == b.to_bits() {
                0.0
            } else {
                (a - b).abs().max(f64::MIN_POSITIVE)
            }
        })
        .fold(0.0, f64::max);
    checks.push(check("phase_only_invariance", invariance, 0.0));

    // Polar split and recombination.
    let (amp, phase) = dsp::decompose(&spec);
    let recombined = dsp::recompose(&amp, &phase, &config, signal.len(), signal.sample_rate())?;
    let polar = spec
        .data()
        .iter()
        .zip(recombined.data())
        .map(|(a, b)| (a - b).norm() / a.norm().max(1.0))
        .fold(0.0, f64::max);
    checks.push(check("polar_round_trip", polar, 1e-12));

    // Per-frame energy bookkeeping between time and frequency domains.
    let mut parseval = 0.0f64;
    for m in 0..spec.frames() {
        let frame = dsp::analysis_frame(&signal, &config, m)?;
        let time_energy: f64 = frame.iter().map(|x| x * x).sum();
        let mut freq_energy = spec.at(0, m).norm_sqr() + spec.at(spec.bins() - 1, m).norm_sqr();
        for k in 1..spec.bins() - 1 {
            freq_energy += 2.0 * spec.at(k, m).norm_sqr();
        }
        freq_energy /= config.n_fft as f64;
        parseval = parseval.max((time_energy - freq_energy).abs() / time_energy.max(1e-30));
    }
    checks.push(check("parseval", parseval, 1e-6));

    Ok(VerifyReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes_every_check() {
        let report = run_verify(None, false).unwrap();
        assert_eq!(report.checks.len(), 5);
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn corrupted_window_fails_round_trip() {
        let report = run_verify(None, true).unwrap();
        assert!(!report.all_pass());
        let rt = report
            .checks
            .iter()
            .find(|c| c.name == "round_trip")
            .unwrap();
        assert!(!rt.pass);
        assert!(rt.max_error > 1e-6);
    }

    #[test]
    fn runs_against_a_provided_buffer() {
        let mut rng = RandomSource::new(4);
        let samples = (0..5000).map(|_| rng.next_f64_range(-0.3, 0.3)).collect();
        let audio = AudioBuffer::new(samples, 16_000).unwrap();
        let report = run_verify(Some(&audio), false).unwrap();
        assert!(report.all_pass(), "{report}");
    }
}
