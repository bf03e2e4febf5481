//! Unnormalized inverse DFT, `out_k = Σ_n x_n e^{+2πi nk/d}`.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std inherent methods when std is linked
use num_traits::Float;

/// Precomputed twiddles for one transform length.
#[derive(Debug, Clone)]
pub(crate) struct InverseDft {
    len: usize,
    /// `e^{+2πi j/len}` for `j < len`.
    roots: Vec<Complex64>,
    bitrev: Vec<usize>,
}

impl InverseDft {
    pub(crate) fn new(len: usize) -> Self {
        let roots = (0..len)
            .map(|j| {
                let (s, c) = (TAU * j as f64 / len as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        let bitrev = if len.is_power_of_two() {
            let bits = len.trailing_zeros();
            (0..len).map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) }).collect()
        } else {
            Vec::new()
        };
        Self { len, roots, bitrev }
    }

    /// Transforms `data` in place; `scratch` must have the same length.
    pub(crate) fn process(&self, data: &mut [Complex64], scratch: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.len);
        if self.len.is_power_of_two() {
            self.radix2(data);
        } else {
            for (k, out) in scratch.iter_mut().enumerate() {
                *out = data.iter().enumerate().map(|(n, x)| x * self.roots[(n * k) % self.len]).sum();
            }
            data.copy_from_slice(scratch);
        }
    }

    fn radix2(&self, data: &mut [Complex64]) {
        let n = self.len;
        for i in 0..n {
            let j = self.bitrev[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for start in (0..n).step_by(size) {
                for j in 0..half {
                    let w = self.roots[j * stride];
                    let u = data[start + j];
                    let v = data[start + j + half] * w;
                    data[start + j] = u + v;
                    data[start + j + half] = u - v;
                }
            }
            size *= 2;
        }
    }
}
