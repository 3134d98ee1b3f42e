//! Short-time Fourier analysis and synthesis.
//!
//! The analysis path windows centered, reflection-padded frames with a
//! periodic Hann window and keeps the one-sided spectrum. The synthesis path
//! overlap-adds the inverse transforms and normalizes each sample by the sum
//! of shifted window values, so an unmodified spectrogram reconstructs the
//! input exactly over the original sample range.
//!
//! Everything here is deterministic and free of shared mutable state.

mod fft;

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

use fft::FftPlan;

/// Floor for the overlap-add normalizer; positions where the window sum is
/// smaller than this (outside any frame's support) synthesize to silence.
const WINDOW_SUM_GUARD: f64 = 1e-8;

/// Mono audio samples at a fixed sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl AudioBuffer {
    /// Wraps samples, rejecting non-finite values and a zero sample rate.
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidInput("sample rate must be positive".into()));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite sample at index {i}"
            )));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// Analysis window shapes. Only the periodic Hann window is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowKind {
    #[default]
    Hann,
}

impl WindowKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WindowKind::Hann => "hann",
        }
    }
}

/// Frame length, hop and window for the short-time transform.
#[derive(Debug, Clone, PartialEq)]
pub struct StftConfig {
    /// Frame length in samples; must be a power of two.
    pub n_fft: usize,
    /// Advance between frames in samples; `0 < hop <= n_fft`.
    pub hop: usize,
    pub window: WindowKind,
    /// Only one-sided spectra are supported; the flag is kept so configs
    /// round-trip through files unchanged.
    pub one_sided: bool,
}

impl Default for StftConfig {
    fn default() -> Self {
        Self {
            n_fft: 1024,
            hop: 256,
            window: WindowKind::Hann,
            one_sided: true,
        }
    }
}

impl StftConfig {
    pub fn new(n_fft: usize, hop: usize) -> Result<Self> {
        let config = Self {
            n_fft,
            hop,
            ..Self::default()
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks the frame/hop invariants, including that the shifted window
    /// sum stays usable in steady state.
    pub fn validate(&self) -> Result<()> {
        if !self.n_fft.is_power_of_two() || self.n_fft < 2 {
            return Err(Error::UnsupportedConfig(format!(
                "n_fft must be a power of two >= 2, got {}",
                self.n_fft
            )));
        }
        if self.hop == 0 || self.hop > self.n_fft {
            return Err(Error::UnsupportedConfig(format!(
                "hop must satisfy 0 < hop <= n_fft, got hop={} n_fft={}",
                self.hop, self.n_fft
            )));
        }
        if !self.one_sided {
            return Err(Error::UnsupportedConfig(
                "only one-sided spectra are supported".into(),
            ));
        }
        let window = hann_window(self.n_fft);
        let min_sum = (0..self.hop)
            .map(|r| {
                (0..)
                    .map(|j| r + j * self.hop)
                    .take_while(|&i| i < self.n_fft)
                    .map(|i| window[i])
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        if min_sum <= WINDOW_SUM_GUARD {
            return Err(Error::UnsupportedConfig(format!(
                "window sum collapses to {min_sum:.3e} for hop={}; overlap-add synthesis \
                 would be unstable",
                self.hop
            )));
        }
        Ok(())
    }

    /// Number of frequency bins of the one-sided spectrum.
    pub fn bin_count(&self) -> usize {
        self.n_fft / 2 + 1
    }

    /// Number of analysis frames for a signal of `signal_len` samples under
    /// centered framing.
    pub fn frame_count(&self, signal_len: usize) -> usize {
        let pad = self.n_fft / 2;
        1 + (signal_len + 2 * pad - self.n_fft) / self.hop
    }
}

/// Periodic Hann window `0.5 * (1 - cos(2*pi*i/size))`.
pub fn hann_window(size: usize) -> Vec<f64> {
    (0..size)
        .map(|i| 0.5 * (1.0 - (TAU * i as f64 / size as f64).cos()))
        .collect()
}

/// Dense bins-by-frames matrix of reals, stored frame-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    data: Vec<f64>,
    bins: usize,
    frames: usize,
}

impl Matrix {
    pub fn zero(bins: usize, frames: usize) -> Self {
        Self {
            data: vec![0.0; bins * frames],
            bins,
            frames,
        }
    }

    pub fn filled(bins: usize, frames: usize, value: f64) -> Self {
        Self {
            data: vec![value; bins * frames],
            bins,
            frames,
        }
    }

    pub fn from_vec(data: Vec<f64>, bins: usize, frames: usize) -> Result<Self> {
        if data.len() != bins * frames {
            return Err(Error::InvalidInput(format!(
                "matrix data length {} does not match {bins}x{frames}",
                data.len()
            )));
        }
        Ok(Self { data, bins, frames })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn at(&self, bin: usize, frame: usize) -> f64 {
        self.data[frame * self.bins + bin]
    }

    pub fn set(&mut self, bin: usize, frame: usize, value: f64) {
        self.data[frame * self.bins + bin] = value;
    }

    /// All values of one time frame (one spectrum column).
    pub fn frame(&self, frame: usize) -> &[f64] {
        &self.data[frame * self.bins..(frame + 1) * self.bins]
    }

    pub fn frame_mut(&mut self, frame: usize) -> &mut [f64] {
        &mut self.data[frame * self.bins..(frame + 1) * self.bins]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// One-sided complex time-frequency matrix with its analysis provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrogram {
    data: Vec<Complex64>,
    bins: usize,
    frames: usize,
    config: StftConfig,
    original_length: usize,
    sample_rate: u32,
}

impl ComplexSpectrogram {
    /// Assembles a spectrogram from raw parts, enforcing the one-sided
    /// dimension rule `bins == n_fft/2 + 1`.
    pub fn from_parts(
        data: Vec<Complex64>,
        bins: usize,
        frames: usize,
        config: StftConfig,
        original_length: usize,
        sample_rate: u32,
    ) -> Result<Self> {
        config.validate()?;
        if bins != config.bin_count() {
            return Err(Error::InvalidInput(format!(
                "one-sided spectrogram needs {} bins for n_fft {}, got {bins}",
                config.bin_count(),
                config.n_fft
            )));
        }
        if data.len() != bins * frames {
            return Err(Error::InvalidInput(format!(
                "spectrogram data length {} does not match {bins}x{frames}",
                data.len()
            )));
        }
        if sample_rate == 0 {
            return Err(Error::InvalidInput("sample rate must be positive".into()));
        }
        Ok(Self {
            data,
            bins,
            frames,
            config,
            original_length,
            sample_rate,
        })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn at(&self, bin: usize, frame: usize) -> Complex64 {
        self.data[frame * self.bins + bin]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn config(&self) -> &StftConfig {
        &self.config
    }

    pub fn original_length(&self) -> usize {
        self.original_length
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }
}

/// Per-bin magnitudes of a spectrogram; entries are nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSpectrum {
    matrix: Matrix,
}

impl AmplitudeSpectrum {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if let Some(bad) = matrix.data().iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidInput(format!(
                "amplitude entries must be finite and nonnegative, got {bad}"
            )));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn bins(&self) -> usize {
        self.matrix.bins()
    }

    pub fn frames(&self) -> usize {
        self.matrix.frames()
    }
}

/// Per-bin phase angles in radians. Freshly decomposed spectra lie in
/// `[-pi, pi]`; perturbed spectra may leave that range and wrap implicitly
/// through the complex exponential on recomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpectrum {
    matrix: Matrix,
}

impl PhaseSpectrum {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if let Some(bad) = matrix.data().iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "phase entries must be finite, got {bad}"
            )));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn bins(&self) -> usize {
        self.matrix.bins()
    }

    pub fn frames(&self) -> usize {
        self.matrix.frames()
    }
}

/// Maps a padded-signal position onto a source index by mirroring around the
/// signal edges (no edge duplication), matching reflective padding.
fn reflect_index(pos: isize, len: usize) -> usize {
    debug_assert!(len > 0);
    if len == 1 {
        return 0;
    }
    let period = 2 * (len as isize - 1);
    let mut r = pos.rem_euclid(period);
    if r >= len as isize {
        r = period - r;
    }
    r as usize
}

/// The windowed analysis frame `index` exactly as `stft` transforms it.
pub fn analysis_frame(audio: &AudioBuffer, config: &StftConfig, index: usize) -> Result<Vec<f64>> {
    config.validate()?;
    if audio.is_empty() {
        return Err(Error::InvalidInput("cannot frame an empty signal".into()));
    }
    let frames = config.frame_count(audio.len());
    if index >= frames {
        return Err(Error::InvalidInput(format!(
            "frame index {index} out of range for {frames} frames"
        )));
    }
    let window = hann_window(config.n_fft);
    let pad = config.n_fft / 2;
    let samples = audio.samples();
    Ok((0..config.n_fft)
        .map(|i| {
            let pos = (index * config.hop + i) as isize - pad as isize;
            samples[reflect_index(pos, audio.len())] * window[i]
        })
        .collect())
}

/// Short-time Fourier transform with centered, reflection-padded framing.
///
/// Each frame is multiplied by the periodic Hann window and transformed;
/// only the `n_fft/2 + 1` nonredundant bins are kept. The source length is
/// recorded so [`istft`] can trim its output exactly.
pub fn stft(audio: &AudioBuffer, config: &StftConfig) -> Result<ComplexSpectrogram> {
    config.validate()?;
    if audio.is_empty() {
        return Err(Error::InvalidInput(
            "cannot transform an empty signal".into(),
        ));
    }
    let n = config.n_fft;
    let pad = n / 2;
    let bins = config.bin_count();
    let frames = config.frame_count(audio.len());
    let window = hann_window(n);
    let plan = FftPlan::new(n);
    let samples = audio.samples();
    let len = audio.len();

    let mut data = vec![Complex64::new(0.0, 0.0); bins * frames];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for m in 0..frames {
        for i in 0..n {
            let pos = (m * config.hop + i) as isize - pad as isize;
            buf[i] = Complex64::new(samples[reflect_index(pos, len)] * window[i], 0.0);
        }
        plan.forward(&mut buf);
        data[m * bins..(m + 1) * bins].copy_from_slice(&buf[..bins]);
    }

    Ok(ComplexSpectrogram {
        data,
        bins,
        frames,
        config: config.clone(),
        original_length: len,
        sample_rate: audio.sample_rate(),
    })
}

/// Inverse short-time Fourier transform via overlap-add.
///
/// Frames are extended to full spectra by conjugate symmetry, inverse
/// transformed, overlap-added, and each sample is divided by the sum of
/// shifted window values at that position. The result is trimmed to the
/// recorded source length.
pub fn istft(spec: &ComplexSpectrogram) -> Result<AudioBuffer> {
    istft_with_window(spec, &hann_window(spec.config.n_fft))
}

/// [`istft`] with an explicit synthesis normalizer window.
///
/// `window` is taken to be the window that was applied at analysis time and
/// only enters the overlap-add denominator. Passing anything other than the
/// analysis window biases the reconstruction; the `verify` negative control
/// relies on that.
pub fn istft_with_window(spec: &ComplexSpectrogram, window: &[f64]) -> Result<AudioBuffer> {
    let config = &spec.config;
    config.validate()?;
    let n = config.n_fft;
    if window.len() != n {
        return Err(Error::InvalidInput(format!(
            "window length {} does not match n_fft {n}",
            window.len()
        )));
    }
    if spec.bins != config.bin_count() || spec.data.len() != spec.bins * spec.frames {
        return Err(Error::InvalidInput(
            "spectrogram dimensions are inconsistent with its config".into(),
        ));
    }
    if spec.frames == 0 {
        return AudioBuffer::new(vec![0.0; spec.original_length], spec.sample_rate);
    }

    let pad = n / 2;
    let plan = FftPlan::new(n);
    let total = (spec.frames - 1) * config.hop + n;
    let mut acc = vec![0.0; total];
    let mut window_sum = vec![0.0; total];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];

    for m in 0..spec.frames {
        let column = &spec.data[m * spec.bins..(m + 1) * spec.bins];
        buf[..spec.bins].copy_from_slice(column);
        for k in 1..n / 2 {
            buf[n - k] = column[k].conj();
        }
        plan.inverse(&mut buf);
        let start = m * config.hop;
        for i in 0..n {
            acc[start + i] += buf[i].re;
            window_sum[start + i] += window[i];
        }
    }

    let mut out = vec![0.0; spec.original_length];
    for (q, sample) in out.iter_mut().enumerate() {
        let p = pad + q;
        if p < total {
            *sample = acc[p] / window_sum[p].max(WINDOW_SUM_GUARD);
        }
    }
    AudioBuffer::new(out, spec.sample_rate)
}

/// Splits a spectrogram into magnitudes and four-quadrant phase angles.
///
/// A zero complex value maps to amplitude 0 and phase 0.
pub fn decompose(spec: &ComplexSpectrogram) -> (AmplitudeSpectrum, PhaseSpectrum) {
    let mut amplitude = Matrix::zero(spec.bins, spec.frames);
    let mut phase = Matrix::zero(spec.bins, spec.frames);
    for m in 0..spec.frames {
        for k in 0..spec.bins {
            let v = spec.data[m * spec.bins + k];
            let a = v.norm();
            let p = if a == 0.0 {
                0.0
            } else {
                let p = v.im.atan2(v.re);
                if p == 0.0 {
                    0.0
                } else {
                    p
                }
            };
            amplitude.set(k, m, a);
            phase.set(k, m, p);
        }
    }
    (
        AmplitudeSpectrum::from_matrix_unchecked(amplitude),
        PhaseSpectrum::from_matrix_unchecked(phase),
    )
}

/// Rebuilds a complex spectrogram as `amplitude * exp(i * phase)`.
///
/// Phase values outside `[-pi, pi]` wrap implicitly through the complex
/// exponential.
pub fn recompose(
    amplitude: &AmplitudeSpectrum,
    phase: &PhaseSpectrum,
    config: &StftConfig,
    original_length: usize,
    sample_rate: u32,
) -> Result<ComplexSpectrogram> {
    let (am, pm) = (amplitude.matrix(), phase.matrix());
    if am.bins() != pm.bins() || am.frames() != pm.frames() {
        return Err(Error::InvalidInput(format!(
            "amplitude is {}x{} but phase is {}x{}",
            am.bins(),
            am.frames(),
            pm.bins(),
            pm.frames()
        )));
    }
    if let Some(bad) = am.data().iter().find(|v| **v < 0.0) {
        return Err(Error::InvalidInput(format!(
            "amplitude entries must be nonnegative, got {bad}"
        )));
    }
    let data = am
        .data()
        .iter()
        .zip(pm.data())
        .map(|(&a, &p)| Complex64::from_polar(a, p))
        .collect();
    ComplexSpectrogram::from_parts(
        data,
        am.bins(),
        am.frames(),
        config.clone(),
        original_length,
        sample_rate,
    )
}

/// Direct-summation one-sided DFT of a single frame.
///
/// Quadratic-time reference path, independent of the fast transform; used by
/// tests and the `verify` command to cross-check the FFT.
pub fn naive_dft_frame(frame: &[f64]) -> Vec<Complex64> {
    let n = frame.len();
    let bins = n / 2 + 1;
    (0..bins)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &x) in frame.iter().enumerate() {
                let angle = -TAU * ((k * i) % n) as f64 / n as f64;
                let (sin, cos) = angle.sin_cos();
                acc += Complex64::new(x * cos, x * sin);
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;
    use proptest::prelude::*;

    fn noise(len: usize, seed: u64) -> AudioBuffer {
        let mut rng = RandomSource::new(seed);
        let samples = (0..len).map(|_| rng.next_f64_range(-0.5, 0.5)).collect();
        AudioBuffer::new(samples, 16_000).unwrap()
    }

    #[test]
    fn rejects_empty_audio() {
        let audio = AudioBuffer::new(vec![], 16_000).unwrap();
        assert!(matches!(
            stft(&audio, &StftConfig::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn rejects_non_power_of_two_frame() {
        let audio = noise(4096, 1);
        let config = StftConfig {
            n_fft: 1000,
            hop: 250,
            ..StftConfig::default()
        };
        assert!(matches!(
            stft(&audio, &config),
            Err(Error::UnsupportedConfig(_))
        ));
    }

    #[test]
    fn rejects_non_finite_samples() {
        assert!(AudioBuffer::new(vec![0.0, f64::NAN], 16_000).is_err());
        assert!(AudioBuffer::new(vec![f64::INFINITY], 16_000).is_err());
    }

    #[test]
    fn rejects_hann_without_overlap() {
        // hop == n_fft leaves zeros in the window sum.
        let config = StftConfig {
            n_fft: 1024,
            hop: 1024,
            ..StftConfig::default()
        };
        assert!(matches!(
            config.validate(),
            Err(Error::UnsupportedConfig(_))
        ));
    }

    #[test]
    fn rejects_two_sided_config() {
        let config = StftConfig {
            one_sided: false,
            ..StftConfig::default()
        };
        assert!(matches!(
            config.validate(),
            Err(Error::UnsupportedConfig(_))
        ));
    }

    #[test]
    fn zero_signal_gives_zero_spectrogram() {
        let audio = AudioBuffer::new(vec![0.0; 4096], 16_000).unwrap();
        let spec = stft(&audio, &StftConfig::default()).unwrap();
        assert_eq!(spec.bins(), 513);
        assert_eq!(spec.frames(), 17);
        assert!(spec.data().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn zero_spectrogram_synthesizes_silence() {
        let config = StftConfig::default();
        let spec = ComplexSpectrogram::from_parts(
            vec![Complex64::new(0.0, 0.0); 513 * 9],
            513,
            9,
            config,
            2048,
            16_000,
        )
        .unwrap();
        let audio = istft(&spec).unwrap();
        assert_eq!(audio.len(), 2048);
        assert!(audio.samples().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn sinusoid_concentrates_on_bin_28() {
        // 437.5 Hz at 16 kHz with n_fft 1024 sits exactly on bin 28. The Hann
        // main lobe puts half the peak magnitude on bins 27 and 29; all other
        // bins carry only rounding noise, far more than 20 dB down.
        let sr = 16_000u32;
        let samples: Vec<f64> = (0..sr as usize)
            .map(|i| 0.5 * (TAU * 437.5 * i as f64 / sr as f64).sin())
            .collect();
        let audio = AudioBuffer::new(samples, sr).unwrap();
        let config = StftConfig::default();
        let spec = stft(&audio, &config).unwrap();

        // Frames whose window never touches the reflected padding.
        let interior = 2..=(spec.frames() - 3);
        for m in interior {
            let peak = spec.at(28, m).norm();
            let expected_peak = 0.5 * 0.5 * config.n_fft as f64 / 2.0;
            assert!((peak - expected_peak).abs() < 1e-6 * expected_peak);
            for k in 0..spec.bins() {
                if (27..=29).contains(&k) {
                    continue;
                }
                let other = spec.at(k, m).norm();
                assert!(
                    peak > 10.0 * other,
                    "bin {k} in frame {m} is within 20 dB of the peak"
                );
            }
            // Main-lobe neighbors at exactly half the peak.
            for k in [27, 29] {
                let lobe = spec.at(k, m).norm();
                assert!((lobe - peak / 2.0).abs() < 1e-6 * peak);
            }
        }
    }

    #[test]
    fn stft_frames_match_naive_dft() {
        let audio = noise(8192, 7);
        let config = StftConfig::default();
        let spec = stft(&audio, &config).unwrap();
        for m in [0, 1, spec.frames() / 2, spec.frames() - 1] {
            let frame = analysis_frame(&audio, &config, m).unwrap();
            let reference = naive_dft_frame(&frame);
            for (k, want) in reference.iter().enumerate() {
                let got = spec.at(k, m);
                assert!(
                    (got - want).norm() < 1e-9,
                    "frame {m} bin {k}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn round_trip_white_noise() {
        let audio = noise(16_000, 11);
        let spec = stft(&audio, &StftConfig::default()).unwrap();
        let back = istft(&spec).unwrap();
        assert_eq!(back.len(), audio.len());
        let max_err = audio
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_err <= 1e-6, "round-trip error {max_err}");
    }

    #[test]
    fn round_trip_shorter_than_one_frame() {
        let audio = noise(500, 13);
        let spec = stft(&audio, &StftConfig::default()).unwrap();
        assert_eq!(spec.frames(), 2);
        let back = istft(&spec).unwrap();
        assert_eq!(back.len(), 500);
        let max_err = audio
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_err <= 1e-6, "short-input round-trip error {max_err}");
    }

    #[test]
    fn parseval_holds_per_frame() {
        let audio = noise(6000, 17);
        let config = StftConfig::default();
        let spec = stft(&audio, &config).unwrap();
        for m in 0..spec.frames() {
            let frame = analysis_frame(&audio, &config, m).unwrap();
            let time_energy: f64 = frame.iter().map(|x| x * x).sum();
            let mut freq_energy = spec.at(0, m).norm_sqr() + spec.at(spec.bins() - 1, m).norm_sqr();
            for k in 1..spec.bins() - 1 {
                freq_energy += 2.0 * spec.at(k, m).norm_sqr();
            }
            freq_energy /= config.n_fft as f64;
            let rel = (time_energy - freq_energy).abs() / time_energy.max(1e-30);
            assert!(rel <= 1e-6, "frame {m}: parseval mismatch {rel}");
        }
    }

    #[test]
    fn decompose_conventions() {
        let config = StftConfig {
            n_fft: 4,
            hop: 2,
            ..StftConfig::default()
        };
        let data = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 2.0),
        ];
        let spec = ComplexSpectrogram::from_parts(data, 3, 1, config, 4, 16_000).unwrap();
        let (amp, phase) = decompose(&spec);
        assert_eq!(amp.matrix().at(0, 0), 0.0);
        assert_eq!(phase.matrix().at(0, 0), 0.0);
        assert_eq!(amp.matrix().at(1, 0), 1.0);
        assert_eq!(phase.matrix().at(1, 0), std::f64::consts::PI);
        assert_eq!(phase.matrix().at(2, 0), std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn recompose_basics() {
        let config = StftConfig {
            n_fft: 4,
            hop: 2,
            ..StftConfig::default()
        };
        let amp = AmplitudeSpectrum::new(Matrix::filled(3, 2, 1.0)).unwrap();
        let phase = PhaseSpectrum::new(Matrix::zero(3, 2)).unwrap();
        let spec = recompose(&amp, &phase, &config, 8, 16_000).unwrap();
        assert!(spec
            .data()
            .iter()
            .all(|v| (v - Complex64::new(1.0, 0.0)).norm() == 0.0));

        // Phase is 2*pi-periodic through the exponential.
        let shifted = PhaseSpectrum::new(Matrix::filled(3, 2, TAU + 0.3)).unwrap();
        let base = PhaseSpectrum::new(Matrix::filled(3, 2, 0.3)).unwrap();
        let a = recompose(&amp, &shifted, &config, 8, 16_000).unwrap();
        let b = recompose(&amp, &base, &config, 8, 16_000).unwrap();
        for (x, y) in a.data().iter().zip(b.data()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn recompose_rejects_bad_inputs() {
        let config = StftConfig {
            n_fft: 4,
            hop: 2,
            ..StftConfig::default()
        };
        let amp = AmplitudeSpectrum::new(Matrix::filled(3, 2, 1.0)).unwrap();
        let phase = PhaseSpectrum::new(Matrix::zero(3, 3)).unwrap();
        assert!(matches!(
            recompose(&amp, &phase, &config, 8, 16_000),
            Err(Error::InvalidInput(_))
        ));
        assert!(AmplitudeSpectrum::new(Matrix::filled(3, 2, -0.5)).is_err());
    }

    #[test]
    fn naive_dft_dc_and_impulse() {
        let constant = vec![0.25; 8];
        let bins = naive_dft_frame(&constant);
        assert!((bins[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        for bin in &bins[1..] {
            assert!(bin.norm() < 1e-12);
        }

        let mut impulse = vec![0.0; 8];
        impulse[0] = 1.0;
        for bin in naive_dft_frame(&impulse) {
            assert!((bin - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn prop_round_trip_any_length(len in 1usize..6000, seed in 0u64..1000) {
            let audio = noise(len, seed);
            let spec = stft(&audio, &StftConfig::default()).unwrap();
            let back = istft(&spec).unwrap();
            prop_assert_eq!(back.len(), len);
            for (a, b) in audio.samples().iter().zip(back.samples()) {
                prop_assert!((a - b).abs() <= 1e-6);
            }
        }

        #[test]
        fn prop_polar_round_trip(seed in 0u64..1000) {
            let audio = noise(3000, seed);
            let spec = stft(&audio, &StftConfig::default()).unwrap();
            let (amp, phase) = decompose(&spec);
            let back = recompose(&amp, &phase, spec.config(), spec.original_length(), spec.sample_rate()).unwrap();
            for (x, y) in spec.data().iter().zip(back.data()) {
                prop_assert!((x - y).norm() <= 1e-12 * x.norm().max(1.0));
            }
        }
    }
}
