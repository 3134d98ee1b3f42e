//! File formats: WAV codec and plain-text spectrum dumps.

mod dump;
mod wav;

pub use dump::{dump_matrix, matrix_to_string, parse_matrix, DumpHeader, MatrixKind};
pub use wav::{read_wav, write_wav, BitDepth, WavMeta};
