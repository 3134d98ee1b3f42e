//! Iterative radix-2 FFT used by the analysis/synthesis fast path.
//!
//! The slow reference transform lives in [`super::naive_dft_frame`] and shares
//! no code with this module.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Precomputed transform plan for one power-of-two size.
pub(crate) struct FftPlan {
    size: usize,
    /// Forward twiddles exp(-i*2*pi*k/size) for k < size/2.
    twiddles: Vec<Complex64>,
}

impl FftPlan {
    /// Builds a plan; `size` must be a power of two >= 2.
    pub(crate) fn new(size: usize) -> Self {
        assert!(
            size.is_power_of_two() && size >= 2,
            "fft size must be a power of two >= 2"
        );
        let twiddles = (0..size / 2)
            .map(|k| {
                let angle = -TAU * k as f64 / size as f64;
                let (sin, cos) = angle.sin_cos();
                Complex64::new(cos, sin)
            })
            .collect();
        Self { size, twiddles }
    }

    /// In-place forward DFT, unnormalized.
    pub(crate) fn forward(&self, buf: &mut [Complex64]) {
        self.transform(buf, false);
    }

    /// In-place inverse DFT including the 1/N factor.
    pub(crate) fn inverse(&self, buf: &mut [Complex64]) {
        self.transform(buf, true);
        let scale = 1.0 / self.size as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        let n = self.size;
        assert_eq!(buf.len(), n, "buffer length does not match plan size");

        // Bit-reversal permutation.
        let shift = usize::BITS - n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> shift;
            if j > i {
                buf.swap(i, j);
            }
        }

        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for base in (0..n).step_by(len) {
                for k in 0..half {
                    let mut tw = self.twiddles[k * stride];
                    if inverse {
                        tw = tw.conj();
                    }
                    let lo = buf[base + k];
                    let hi = buf[base + k + half] * tw;
                    buf[base + k] = lo + hi;
                    buf[base + k + half] = lo - hi;
                }
            }
            len <<= 1;
        }
    }
}
