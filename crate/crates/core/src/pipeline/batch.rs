//! Recursive batch runner.
//!
//! Every WAV under the input directory produces `copies_per_input` outputs
//! named `<stem>.<policy>.<copy>.wav` in a mirrored directory layout. Each
//! output is a pure function of (file bytes, relative path, policy, master
//! seed), so worker count and processing order never change a byte.
//! Unreadable or unprocessable files are logged, skipped and counted.

use super::{augment_buffer, AugmentPolicy};
use crate::error::{Error, Result};
use crate::io;
use crate::rng::{derive_file_seed, RandomSource};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Name of the manifest written into the output directory.
pub const MANIFEST_FILE: &str = "manifest.tsv";

/// One augmented output and how it was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    /// Input path relative to the input directory, `/`-separated.
    pub input: String,
    /// Output path relative to the output directory, `/`-separated.
    pub output: String,
    pub policy: String,
    pub master_seed: u64,
    /// Seed derived from (master seed, relative path, copy index).
    pub file_seed: u64,
    /// Samples clipped into [-1, 1] while encoding.
    pub clipped: u64,
    pub input_samples: usize,
    pub output_samples: usize,
}

/// Batch result: entries in deterministic (path, copy) order plus the
/// number of inputs that had to be skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
    pub skipped: usize,
}

impl Manifest {
    /// Tab-separated rendering: one header line, one line per entry, one
    /// `#`-prefixed footer with processed/skipped counts.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "input\toutput\tpolicy\tmaster_seed\tfile_seed\tclipped\tinput_samples\toutput_samples\n",
        );
        for e in &self.entries {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                e.input,
                e.output,
                e.policy,
                e.master_seed,
                e.file_seed,
                e.clipped,
                e.input_samples,
                e.output_samples
            )
            .expect("write to string");
        }
        writeln!(
            out,
            "#processed={} skipped={}",
            self.entries.len(),
            self.skipped
        )
        .expect("write to string");
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_tsv())?;
        Ok(())
    }
}

fn is_wav(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("wav"))
}

/// Relative path with `/` separators, for seeds and manifest rows.
fn portable_rel(path: &Path) -> String {
    path.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

fn collect_inputs(in_dir: &Path) -> Result<Vec<PathBuf>> {
    let mut rels = Vec::new();
    for entry in walkdir::WalkDir::new(in_dir).sort_by_file_name() {
        let entry = entry
            .map_err(|e| Error::InvalidInput(format!("cannot walk {}: {e}", in_dir.display())))?;
        if entry.file_type().is_file() && is_wav(entry.path()) {
            let rel = entry
                .path()
                .strip_prefix(in_dir)
                .expect("walkdir yields paths under its root")
                .to_path_buf();
            rels.push(rel);
        }
    }
    rels.sort();
    Ok(rels)
}

/// All outputs of one input file, or how many copies were skipped.
fn process_file(
    in_dir: &Path,
    out_dir: &Path,
    rel: &Path,
    policy: &AugmentPolicy,
    master_seed: u64,
) -> std::result::Result<Vec<ManifestEntry>, usize> {
    let copies = policy.copies_per_input;
    let input_path = in_dir.join(rel);
    let rel_str = portable_rel(rel);

    let (audio, meta) = match io::read_wav(&input_path) {
        Ok(v) => v,
        Err(e) => {
            log::warn!("skipping {}: {e}", input_path.display());
            return Err(copies as usize);
        }
    };
    if audio.sample_rate() != 16_000 {
        log::warn!(
            "{}: sample rate is {} Hz; mask widths and defaults assume 16 kHz",
            input_path.display(),
            audio.sample_rate()
        );
    }

    let stem = rel
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let parent = rel.parent().unwrap_or_else(|| Path::new(""));

    let mut entries = Vec::with_capacity(copies as usize);
    for copy in 0..copies {
        let file_seed = derive_file_seed(master_seed, &rel_str, copy);
        let mut rng = RandomSource::new(file_seed);
        let augmented = match augment_buffer(&audio, policy, &mut rng) {
            Ok(a) => a,
            Err(e) => {
                log::warn!("skipping {} (copy {copy}): {e}", input_path.display());
                return Err(copies as usize);
            }
        };
        let out_rel = parent.join(format!("{stem}.{}.{copy}.wav", policy.name));
        let out_path = out_dir.join(&out_rel);
        if let Some(dir) = out_path.parent() {
            if let Err(e) = fs::create_dir_all(dir) {
                log::warn!(
                    "skipping {}: cannot create {}: {e}",
                    input_path.display(),
                    dir.display()
                );
                return Err(copies as usize);
            }
        }
        let clipped = match io::write_wav(&out_path, &augmented, meta.bit_depth) {
            Ok(c) => c,
            Err(e) => {
                log::warn!("skipping {}: write failed: {e}", out_path.display());
                return Err(copies as usize);
            }
        };
        entries.push(ManifestEntry {
            input: rel_str.clone(),
            output: portable_rel(&out_rel),
            policy: policy.name.to_string(),
            master_seed,
            file_seed,
            clipped,
            input_samples: audio.len(),
            output_samples: augmented.len(),
        });
    }
    Ok(entries)
}

/// Augments every WAV under `in_dir` into `out_dir` and writes the
/// manifest. `jobs == 0` uses one worker per core.
pub fn run_batch(
    in_dir: &Path,
    out_dir: &Path,
    policy: &AugmentPolicy,
    master_seed: u64,
    jobs: usize,
) -> Result<Manifest> {
    policy.validate()?;
    let rels = collect_inputs(in_dir)?;
    if rels.is_empty() {
        return Err(Error::EmptyInput(in_dir.to_path_buf()));
    }
    fs::create_dir_all(out_dir)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))?;
    let results: Vec<std::result::Result<Vec<ManifestEntry>, usize>> = pool.install(|| {
        rels.par_iter()
            .map(|rel| process_file(in_dir, out_dir, rel, policy, master_seed))
            .collect()
    });

    let mut manifest = Manifest {
        entries: Vec::new(),
        skipped: 0,
    };
    for result in results {
        match result {
            Ok(entries) => manifest.entries.extend(entries),
            Err(skipped) => manifest.skipped += skipped,
        }
    }
    manifest.write(&out_dir.join(MANIFEST_FILE))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::AudioBuffer;
    use crate::io::BitDepth;
    use crate::pipeline::PolicyName;
    use tempfile::tempdir;

    fn write_noise_wav(path: &Path, len: usize, seed: u64) {
        let mut rng = RandomSource::new(seed);
        let samples = (0..len).map(|_| rng.next_f64_range(-0.5, 0.5)).collect();
        let audio = AudioBuffer::new(samples, 16_000).unwrap();
        io::write_wav(path, &audio, BitDepth::Pcm16).unwrap();
    }

    #[test]
    fn batch_produces_manifest_rows_per_copy() {
        let dir = tempdir().unwrap();
        let in_dir = dir.path().join("in");
        let out_dir = dir.path().join("out");
        fs::create_dir_all(in_dir.join("nested")).unwrap();
        write_noise_wav(&in_dir.join("a.wav"), 4000, 1);
        write_noise_wav(&in_dir.join("nested/b.wav"), 5000, 2);

        let mut policy = AugmentPolicy::named(PolicyName::PhasePerturbation);
        policy.copies_per_input = 2;
        let manifest = run_batch(&in_dir, &out_dir, &policy, 7, 1).unwrap();
        assert_eq!(manifest.entries.len(), 4);
        assert_eq!(manifest.skipped, 0);
        assert!(out_dir.join("a.phase_perturbation.0.wav").is_file());
        assert!(out_dir.join("a.phase_perturbation.1.wav").is_file());
        assert!(out_dir.join("nested/b.phase_perturbation.0.wav").is_file());
        assert!(out_dir.join(MANIFEST_FILE).is_file());

        for e in &manifest.entries {
            assert_eq!(e.input_samples, e.output_samples);
            assert_eq!(e.master_seed, 7);
        }
        // Distinct copies get distinct seeds.
        assert_ne!(manifest.entries[0].file_seed, manifest.entries[1].file_seed);
    }

    #[test]
    fn unreadable_files_are_skipped_and_counted() {
        let dir = tempdir().unwrap();
        let in_dir = dir.path().join("in");
        let out_dir = dir.path().join("out");
        fs::create_dir_all(&in_dir).unwrap();
        write_noise_wav(&in_dir.join("good.wav"), 3000, 3);
        fs::write(in_dir.join("broken.wav"), b"not a riff file").unwrap();

        let policy = AugmentPolicy::named(PolicyName::None);
        let manifest = run_batch(&in_dir, &out_dir, &policy, 1, 1).unwrap();
        assert_eq!(manifest.entries.len(), 1);
        assert_eq!(manifest.skipped, 1);
        let tsv = manifest.to_tsv();
        assert!(tsv.ends_with("#processed=1 skipped=1\n"));
    }

    #[test]
    fn empty_input_dir_is_an_error() {
        let dir = tempdir().unwrap();
        let in_dir = dir.path().join("in");
        fs::create_dir_all(&in_dir).unwrap();
        let policy = AugmentPolicy::named(PolicyName::None);
        assert!(matches!(
            run_batch(&in_dir, &dir.path().join("out"), &policy, 1, 1),
            Err(Error::EmptyInput(_))
        ));
    }
}
