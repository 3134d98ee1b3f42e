//! Command-line front end: batch augmentation, spectrum inspection and
//! numerical self-checks. Set `PHASEPERTURB_LOG` (e.g. `info`, `debug`) to
//! control log verbosity.

use clap::{Parser, Subcommand, ValueEnum};
use phaseperturb::io::{dump_matrix, read_wav, MatrixKind};
use phaseperturb::pipeline::{
    self, augment_spectra, load_config, run_batch, run_verify, AugmentPolicy, PolicyName,
};
use phaseperturb::rng::RandomSource;
use phaseperturb::Result;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "phaseperturb",
    version,
    about = "Phase-spectrum speech data augmentation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Augment every WAV under a directory tree.
    Augment {
        /// Input directory (searched recursively for .wav files).
        #[arg(long = "in")]
        in_dir: PathBuf,
        /// Output directory; mirrors the input layout.
        #[arg(long = "out")]
        out_dir: PathBuf,
        /// Augmentation arm, e.g. `none`, `phase_perturbation`,
        /// `phase_perturbation+specaug`.
        #[arg(long)]
        policy: String,
        /// Master seed; per-file seeds are derived from it.
        #[arg(long)]
        seed: u64,
        /// Optional config file overriding the default parameters.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Augmented copies per input (overrides the config value).
        #[arg(long)]
        copies: Option<u32>,
        /// Worker threads; 0 means one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Dump the amplitude or phase spectrum of one file as text.
    Inspect {
        /// Input WAV file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Which spectrum to dump.
        #[arg(long)]
        what: SpectrumKind,
        /// Apply this policy before dumping instead of the plain spectrum.
        #[arg(long)]
        policy: Option<String>,
        /// Seed for the policy's random draws.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optional config file overriding the default parameters.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Destination text file.
        #[arg(long = "out")]
        out: PathBuf,
    },
    /// Run the numerical self-checks and exit nonzero on any failure.
    Verify {
        /// Check against this WAV instead of a synthesized signal.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Negative control: bias the synthesis window so the round-trip
        /// check must fail.
        #[arg(long)]
        corrupt_window: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumKind {
    Amplitude,
    Phase,
}

impl From<SpectrumKind> for MatrixKind {
    fn from(kind: SpectrumKind) -> Self {
        match kind {
            SpectrumKind::Amplitude => MatrixKind::Amplitude,
            SpectrumKind::Phase => MatrixKind::Phase,
        }
    }
}

fn load_policy(config: Option<&PathBuf>) -> Result<AugmentPolicy> {
    match config {
        Some(path) => load_config(path),
        None => Ok(AugmentPolicy::default()),
    }
}

fn warn_if_unusual_rate(path: &Path, rate: u32) {
    if rate != 16_000 {
        log::warn!(
            "{}: sample rate is {rate} Hz; mask widths and defaults assume 16 kHz",
            path.display()
        );
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Augment {
            in_dir,
            out_dir,
            policy,
            seed,
            config,
            copies,
            jobs,
        } => {
            let mut augment_policy = load_policy(config.as_ref())?;
            augment_policy.name = policy.parse::<PolicyName>()?;
            if let Some(copies) = copies {
                augment_policy.copies_per_input = copies;
            }
            let manifest = run_batch(&in_dir, &out_dir, &augment_policy, seed, jobs)?;
            println!(
                "wrote {} files ({} skipped) under {}; manifest: {}",
                manifest.entries.len(),
                manifest.skipped,
                out_dir.display(),
                out_dir.join(pipeline::MANIFEST_FILE).display()
            );
            Ok(true)
        }
        Command::Inspect {
            input,
            what,
            policy,
            seed,
            config,
            out,
        } => {
            let (audio, _) = read_wav(&input)?;
            warn_if_unusual_rate(&input, audio.sample_rate());
            let mut augment_policy = load_policy(config.as_ref())?;
            augment_policy.name = match &policy {
                Some(name) => name.parse::<PolicyName>()?,
                None => PolicyName::None,
            };
            let mut rng = RandomSource::new(seed);
            let spectra = augment_spectra(&audio, &augment_policy, &mut rng)?;
            let kind: MatrixKind = what.into();
            let matrix = match kind {
                MatrixKind::Amplitude => spectra.amplitude.matrix(),
                MatrixKind::Phase => spectra.phase.matrix(),
            };
            dump_matrix(&out, matrix, kind, &spectra.config, spectra.sample_rate)?;
            println!(
                "dumped {} spectrum ({} bins x {} frames) to {}",
                kind.as_str(),
                matrix.bins(),
                matrix.frames(),
                out.display()
            );
            Ok(true)
        }
        Command::Verify {
            input,
            corrupt_window,
        } => {
            let buffer = match input {
                Some(path) => {
                    let (audio, _) = read_wav(&path)?;
                    warn_if_unusual_rate(&path, audio.sample_rate());
                    Some(audio)
                }
                None => None,
            };
            let report = run_verify(buffer.as_ref(), corrupt_window)?;
            print!("{report}");
            if report.all_pass() {
                println!("all checks passed");
            } else {
                let failing: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| c.name)
                    .collect();
                eprintln!("failed checks: {}", failing.join(", "));
            }
            Ok(report.all_pass())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PHASEPERTURB_LOG", "warn"))
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
