//! Speech data augmentation on the phase spectrum.
//!
//! The library splits audio into amplitude and phase matrices with an
//! invertible short-time Fourier transform, perturbs the phase spectrum
//! (per-frame randomization, frequency masking, temporal masking) or the
//! amplitude spectrum (magnitude masking, VTLP frequency warping), and
//! resynthesizes waveforms of unchanged length. A batch runner applies a
//! named policy to a directory tree of WAV files with reproducible
//! per-file seeding.
//!
//! ```
//! use phaseperturb::dsp::{AudioBuffer, StftConfig};
//! use phaseperturb::pipeline::{augment_buffer, AugmentPolicy, PolicyName};
//! use phaseperturb::rng::RandomSource;
//!
//! let samples: Vec<f64> = (0..16000)
//!     .map(|i| 0.3 * (std::f64::consts::TAU * 440.0 * i as f64 / 16000.0).sin())
//!     .collect();
//! let audio = AudioBuffer::new(samples, 16000).unwrap();
//! let policy = AugmentPolicy::named(PolicyName::PhasePerturbation);
//! let mut rng = RandomSource::new(42);
//! let augmented = augment_buffer(&audio, &policy, &mut rng).unwrap();
//! assert_eq!(augmented.len(), audio.len());
//! ```

pub mod amplitude;
pub mod dsp;
mod error;
pub mod io;
pub mod phase;
pub mod pipeline;
pub mod rng;

pub use error::{Error, Result};
