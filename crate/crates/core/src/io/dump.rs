//! Plain-text spectrum dumps.
//!
//! Format: one header line `#<kind> <bins> <frames> <n_fft> <hop>
//! <sample_rate>`, then one line per frequency bin with `frames`
//! space-separated values at 9 significant digits. Row k is bin k, read
//! left to right in frame order.

use crate::dsp::{Matrix, StftConfig};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

/// Which spectrum a dump holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Amplitude,
    Phase,
}

impl MatrixKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MatrixKind::Amplitude => "amplitude",
            MatrixKind::Phase => "phase",
        }
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" => Ok(MatrixKind::Amplitude),
            "phase" => Ok(MatrixKind::Phase),
            other => Err(Error::InvalidInput(format!(
                "unknown matrix kind `{other}`"
            ))),
        }
    }
}

/// Header of a parsed dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DumpHeader {
    pub kind: MatrixKind,
    pub bins: usize,
    pub frames: usize,
    pub n_fft: usize,
    pub hop: usize,
    pub sample_rate: u32,
}

/// Renders a matrix to the dump text format.
pub fn matrix_to_string(
    matrix: &Matrix,
    kind: MatrixKind,
    config: &StftConfig,
    sample_rate: u32,
) -> Result<String> {
    if let Some(bad) = matrix.data().iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "non-finite matrix entry {bad}"
        )));
    }
    let mut out = String::new();
    writeln!(
        out,
        "#{} {} {} {} {} {}",
        kind.as_str(),
        matrix.bins(),
        matrix.frames(),
        config.n_fft,
        config.hop,
        sample_rate
    )
    .expect("write to string");
    for k in 0..matrix.bins() {
        for m in 0..matrix.frames() {
            if m > 0 {
                out.push(' ');
            }
            write!(out, "{:.8e}", matrix.at(k, m)).expect("write to string");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes a matrix dump to `path`.
pub fn dump_matrix(
    path: &Path,
    matrix: &Matrix,
    kind: MatrixKind,
    config: &StftConfig,
    sample_rate: u32,
) -> Result<()> {
    let text = matrix_to_string(matrix, kind, config, sample_rate)?;
    fs::write(path, text)?;
    Ok(())
}

/// Parses a dump file written by [`dump_matrix`].
pub fn parse_matrix(path: &Path) -> Result<(DumpHeader, Matrix)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty dump file".into()))?;
    let header_line = header_line
        .strip_prefix('#')
        .ok_or_else(|| Error::InvalidInput("dump header must start with '#'".into()))?;
    let fields: Vec<&str> = header_line.split_whitespace().collect();
    if fields.len() != 6 {
        return Err(Error::InvalidInput(format!(
            "dump header has {} fields, expected 6",
            fields.len()
        )));
    }
    let kind: MatrixKind = fields[0].parse()?;
    let parse_usize = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("bad {what} `{s}` in dump header")))
    };
    let bins = parse_usize(fields[1], "bin count")?;
    let frames = parse_usize(fields[2], "frame count")?;
    let n_fft = parse_usize(fields[3], "n_fft")?;
    let hop = parse_usize(fields[4], "hop")?;
    let sample_rate = fields[5]
        .parse::<u32>()
        .map_err(|_| Error::InvalidInput(format!("bad sample rate `{}`", fields[5])))?;

    let mut data = vec![0.0; bins * frames];
    let mut rows = 0;
    for (k, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        if k >= bins {
            return Err(Error::InvalidInput(format!("more rows than {bins} bins")));
        }
        let mut cols = 0;
        for (m, field) in line.split_whitespace().enumerate() {
            if m >= frames {
                return Err(Error::InvalidInput(format!(
                    "row {k} has more than {frames} values"
                )));
            }
            data[m * bins + k] = field
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad value `{field}` in row {k}")))?;
            cols += 1;
        }
        if cols != frames {
            return Err(Error::InvalidInput(format!(
                "row {k} has {cols} values, expected {frames}"
            )));
        }
        rows += 1;
    }
    if rows != bins {
        return Err(Error::InvalidInput(format!(
            "dump has {rows} rows, expected {bins}"
        )));
    }
    let header = DumpHeader {
        kind,
        bins,
        frames,
        n_fft,
        hop,
        sample_rate,
    };
    Ok((header, Matrix::from_vec(data, bins, frames)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn zero_matrix_renders_exactly() {
        let matrix = Matrix::zero(2, 3);
        let config = StftConfig::default();
        let text = matrix_to_string(&matrix, MatrixKind::Amplitude, &config, 16_000).unwrap();
        assert_eq!(
            text,
            "#amplitude 2 3 1024 256 16000\n\
             0.00000000e0 0.00000000e0 0.00000000e0\n\
             0.00000000e0 0.00000000e0 0.00000000e0\n"
        );
    }

    #[test]
    fn dump_parse_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.txt");
        let mut matrix = Matrix::zero(5, 4);
        for k in 0..5 {
            for m in 0..4 {
                matrix.set(k, m, (k as f64 + 1.0) * 0.317 - (m as f64) * 1.78e-3);
            }
        }
        let config = StftConfig::default();
        dump_matrix(&path, &matrix, MatrixKind::Phase, &config, 22_050).unwrap();
        let (header, back) = parse_matrix(&path).unwrap();
        assert_eq!(header.kind, MatrixKind::Phase);
        assert_eq!(header.bins, 5);
        assert_eq!(header.frames, 4);
        assert_eq!(header.sample_rate, 22_050);
        for (a, b) in matrix.data().iter().zip(back.data()) {
            let rel = (a - b).abs() / a.abs().max(1e-30);
            assert!(rel <= 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn phase_of_positive_constant_signal_has_zero_dc_row() {
        let audio = crate::dsp::AudioBuffer::new(vec![0.25; 4096], 16_000).unwrap();
        let config = StftConfig::default();
        let spec = crate::dsp::stft(&audio, &config).unwrap();
        let (_, phase) = crate::dsp::decompose(&spec);
        for m in 0..phase.frames() {
            assert_eq!(phase.matrix().at(0, m), 0.0);
        }
        let text = matrix_to_string(phase.matrix(), MatrixKind::Phase, &config, 16_000).unwrap();
        let dc_row = text.lines().nth(1).unwrap();
        assert!(dc_row
            .split_whitespace()
            .all(|v| v.parse::<f64>().unwrap() == 0.0));
    }

    #[test]
    fn parse_rejects_ragged_rows() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "#phase 2 2 1024 256 16000\n0.0 0.0\n0.0\n").unwrap();
        assert!(parse_matrix(&path).is_err());
    }
}
