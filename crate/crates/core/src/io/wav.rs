//! RIFF/WAVE reading and writing.
//!
//! Reads PCM16, PCM24 and IEEE float32 data chunks; multi-channel content is
//! downmixed to mono by averaging. Malformed files are rejected with the
//! byte offset of the defect.

use crate::dsp::AudioBuffer;
use crate::error::{Error, Result};
use std::fs;
use std::path::Path;

/// Sample encodings supported by the codec.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Pcm16,
    Pcm24,
    Float32,
}

impl BitDepth {
    pub fn bits(&self) -> u16 {
        match self {
            BitDepth::Pcm16 => 16,
            BitDepth::Pcm24 => 24,
            BitDepth::Float32 => 32,
        }
    }

    fn bytes(&self) -> usize {
        self.bits() as usize / 8
    }

    fn format_tag(&self) -> u16 {
        match self {
            BitDepth::Pcm16 | BitDepth::Pcm24 => 1,
            BitDepth::Float32 => 3,
        }
    }
}

/// Header facts of a decoded file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WavMeta {
    pub sample_rate: u32,
    pub channels: u16,
    pub bit_depth: BitDepth,
    /// Number of sample frames (per-channel samples).
    pub frame_count: u64,
}

fn format_err(offset: usize, message: impl Into<String>) -> Error {
    Error::FormatError {
        offset: offset as u64,
        message: message.into(),
    }
}

fn read_u16(bytes: &[u8], offset: usize) -> Result<u16> {
    let span = bytes
        .get(offset..offset + 2)
        .ok_or_else(|| format_err(offset, "file ends inside a 16-bit field"))?;
    Ok(u16::from_le_bytes([span[0], span[1]]))
}

fn read_u32(bytes: &[u8], offset: usize) -> Result<u32> {
    let span = bytes
        .get(offset..offset + 4)
        .ok_or_else(|| format_err(offset, "file ends inside a 32-bit field"))?;
    Ok(u32::from_le_bytes([span[0], span[1], span[2], span[3]]))
}

struct FmtChunk {
    format_tag: u16,
    channels: u16,
    sample_rate: u32,
    bits_per_sample: u16,
}

/// Decodes a WAV file to a mono buffer plus its header facts.
pub fn read_wav(path: &Path) -> Result<(AudioBuffer, WavMeta)> {
    let bytes = fs::read(path)?;
    if bytes.len() < 12 {
        return Err(format_err(0, "file too short for a RIFF header"));
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(format_err(0, "missing RIFF tag"));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(format_err(8, "missing WAVE tag"));
    }

    let mut fmt: Option<FmtChunk> = None;
    let mut data: Option<(usize, usize)> = None;
    let mut offset = 12;
    while offset + 8 <= bytes.len() {
        let id = &bytes[offset..offset + 4];
        let size = read_u32(&bytes, offset + 4)? as usize;
        let body = offset + 8;
        if body + size > bytes.len() {
            return Err(format_err(
                offset,
                format!(
                    "chunk '{}' claims {size} bytes past end of file",
                    String::from_utf8_lossy(id)
                ),
            ));
        }
        match id {
            b"fmt " => {
                if size < 16 {
                    return Err(format_err(offset, "fmt chunk shorter than 16 bytes"));
                }
                fmt = Some(FmtChunk {
                    format_tag: read_u16(&bytes, body)?,
                    channels: read_u16(&bytes, body + 2)?,
                    sample_rate: read_u32(&bytes, body + 4)?,
                    bits_per_sample: read_u16(&bytes, body + 14)?,
                });
            }
            b"data" => {
                data = Some((body, size));
            }
            _ => {}
        }
        // Chunks are word-aligned; odd sizes carry a pad byte.
        offset = body + size + (size & 1);
    }

    let fmt = fmt.ok_or_else(|| format_err(12, "no fmt chunk"))?;
    let (data_start, data_size) = data.ok_or_else(|| format_err(12, "no data chunk"))?;
    if fmt.channels == 0 {
        return Err(format_err(12, "channel count is zero"));
    }
    if fmt.sample_rate == 0 {
        return Err(format_err(12, "sample rate is zero"));
    }
    let bit_depth = match (fmt.format_tag, fmt.bits_per_sample) {
        (1, 16) => BitDepth::Pcm16,
        (1, 24) => BitDepth::Pcm24,
        (3, 32) => BitDepth::Float32,
        (tag, bits) => {
            return Err(Error::UnsupportedFormat(format!(
                "format tag {tag} with {bits} bits per sample (supported: PCM16, PCM24, float32)"
            )))
        }
    };

    let frame_bytes = bit_depth.bytes() * fmt.channels as usize;
    if data_size % frame_bytes != 0 {
        return Err(format_err(
            data_start,
            format!("data chunk of {data_size} bytes is not a whole number of {frame_bytes}-byte frames"),
        ));
    }
    let frame_count = data_size / frame_bytes;
    let inv_channels = 1.0 / fmt.channels as f64;
    let mut samples = Vec::with_capacity(frame_count);
    for frame in 0..frame_count {
        let mut acc = 0.0;
        for ch in 0..fmt.channels as usize {
            let at = data_start + frame * frame_bytes + ch * bit_depth.bytes();
            let v = match bit_depth {
                BitDepth::Pcm16 => i16::from_le_bytes([bytes[at], bytes[at + 1]]) as f64 / 32768.0,
                BitDepth::Pcm24 => {
                    let raw = (bytes[at] as i32)
                        | ((bytes[at + 1] as i32) << 8)
                        | ((bytes[at + 2] as i8 as i32) << 16);
                    raw as f64 / 8_388_608.0
                }
                BitDepth::Float32 => {
                    let v = f32::from_le_bytes([
                        bytes[at],
                        bytes[at + 1],
                        bytes[at + 2],
                        bytes[at + 3],
                    ]);
                    if !v.is_finite() {
                        return Err(format_err(at, "non-finite float sample"));
                    }
                    v as f64
                }
            };
            acc += v;
        }
        samples.push(acc * inv_channels);
    }

    let meta = WavMeta {
        sample_rate: fmt.sample_rate,
        channels: fmt.channels,
        bit_depth,
        frame_count: frame_count as u64,
    };
    Ok((AudioBuffer::new(samples, fmt.sample_rate)?, meta))
}

/// Encodes a mono buffer, returning how many samples were clipped into
/// `[-1, 1]`. Integer conversion rounds to nearest.
pub fn write_wav(path: &Path, audio: &AudioBuffer, bit_depth: BitDepth) -> Result<u64> {
    if let Some(i) = audio.samples().iter().position(|s| !s.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "non-finite sample at index {i}"
        )));
    }

    let mut clipped = 0u64;
    let mut data: Vec<u8> = Vec::with_capacity(audio.len() * bit_depth.bytes());
    for &raw in audio.samples() {
        let v = if !(-1.0..=1.0).contains(&raw) {
            clipped += 1;
            raw.clamp(-1.0, 1.0)
        } else {
            raw
        };
        match bit_depth {
            BitDepth::Pcm16 => {
                let q = (v * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
                data.extend_from_slice(&q.to_le_bytes());
            }
            BitDepth::Pcm24 => {
                let q = (v * 8_388_608.0).round().clamp(-8_388_608.0, 8_388_607.0) as i32;
                data.extend_from_slice(&q.to_le_bytes()[..3]);
            }
            BitDepth::Float32 => {
                data.extend_from_slice(&(v as f32).to_le_bytes());
            }
        }
    }

    let pad = data.len() & 1;
    let mut out = Vec::with_capacity(44 + data.len() + pad);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data.len() as u32 + pad as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&bit_depth.format_tag().to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&audio.sample_rate().to_le_bytes());
    let byte_rate = audio.sample_rate() * bit_depth.bytes() as u32;
    out.extend_from_slice(&byte_rate.to_le_bytes());
    out.extend_from_slice(&(bit_depth.bytes() as u16).to_le_bytes());
    out.extend_from_slice(&bit_depth.bits().to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data.len() as u32).to_le_bytes());
    out.extend_from_slice(&data);
    if pad == 1 {
        out.push(0);
    }
    fs::write(path, out)?;
    Ok(clipped)
}
