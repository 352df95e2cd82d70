//! Radix-2 FFT with precomputed twiddles and unitary (1/√N) scaling.

use alloc::vec::Vec;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct Fft {
    size: usize,
    /// e^{-j2πk/N} for k in 0..N/2.
    twiddles: Vec<Complex64>,
    bitrev: Vec<usize>,
    scale: f64,
}

impl Fft {
    /// `size` must be a power of two.
    pub fn new(size: usize) -> Self {
        assert!(size.is_power_of_two(), "FFT size must be a power of two");
        let bits = size.trailing_zeros();
        let twiddles = (0..size / 2)
            .map(|k| {
                let angle = -core::f64::consts::TAU * k as f64 / size as f64;
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
        let bitrev = (0..size)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (usize::BITS - bits)
                }
            })
            .collect();
        Fft {
            size,
            twiddles,
            bitrev,
            scale: 1.0 / libm::sqrt(size as f64),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, true);
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.size;
        assert_eq!(data.len(), n);
        for i in 0..n {
            let j = self.bitrev[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
        for x in data.iter_mut() {
            *x *= self.scale;
        }
    }
}
