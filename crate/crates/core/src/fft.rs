//! Iterative radix-2 complex FFT (power-of-two sizes).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float; // f64 math methods in no_std builds

use crate::error::{Error, Result};

/// Precomputed plan for one transform size. Forward and inverse share the
/// twiddle table; the inverse applies 1/n scaling.
pub struct Fft {
    n: usize,
    rev: Vec<u32>,
    // twiddles[k] = exp(-2*pi*i*k/n), k < n/2
    twiddles: Vec<Complex64>,
}

impl Fft {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let bits = n.trailing_zeros();
        let rev = (0..n as u32)
            .map(|i| i.reverse_bits() >> (32 - bits.max(1)))
            .collect::<Vec<_>>();
        let twiddles = (0..n / 2)
            .map(|k| {
                let ang = -2.0 * PI * k as f64 / n as f64;
                Complex64::new(ang.cos(), ang.sin())
            })
            .collect();
        Ok(Fft {
            n,
            rev: if n == 1 { vec![0] } else { rev },
            twiddles,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.n, "fft: buffer length mismatch");
        if self.n == 1 {
            return;
        }
        for i in 0..self.n {
            let r = self.rev[i] as usize;
            if i < r {
                buf.swap(i, r);
            }
        }
        let mut half = 1;
        while half < self.n {
            let step = self.n / (2 * half);
            let mut start = 0;
            while start < self.n {
                for k in 0..half {
                    let w = self.twiddles[k * step];
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
                start += 2 * half;
            }
            half *= 2;
        }
    }

    pub fn inverse(&self, buf: &mut [Complex64]) {
        for v in buf.iter_mut() {
            *v = v.conj();
        }
        self.forward(buf);
        let inv = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v = v.conj() * inv;
        }
    }

    /// Forward transform of a real signal zero-padded to the plan size.
    pub fn forward_real(&self, x: &[f64]) -> Vec<Complex64> {
        assert!(x.len() <= self.n);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n];
        for (b, &v) in buf.iter_mut().zip(x) {
            b.re = v;
        }
        self.forward(&mut buf);
        buf
    }
}

pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Largest power of two not exceeding `n` (n >= 1).
pub fn prev_pow2(n: usize) -> usize {
    debug_assert!(n >= 1);
    let ceil = n.next_power_of_two();
    if ceil == n {
        n
    } else {
        ceil / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (t, &v) in x.iter().enumerate() {
                    let ang = -2.0 * PI * (k * t) as f64 / n as f64;
                    acc += v * Complex64::new(ang.cos(), ang.sin());
                }
                acc
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let mut rng = SeededRng::new(11);
        for &n in &[1usize, 2, 4, 8, 64, 256] {
            let x: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.uniform_signed(), rng.uniform_signed()))
                .collect();
            let expect = naive_dft(&x);
            let mut buf = x.clone();
            let plan = Fft::new(n).unwrap();
            plan.forward(&mut buf);
            for (a, b) in buf.iter().zip(&expect) {
                assert!((a - b).norm() < 1e-9 * (n as f64), "n={n}");
            }
        }
    }

    #[test]
    fn round_trip() {
        let mut rng = SeededRng::new(5);
        let n = 1024;
        let x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.uniform_signed(), rng.uniform_signed()))
            .collect();
        let plan = Fft::new(n).unwrap();
        let mut buf = x.clone();
        plan.forward(&mut buf);
        plan.inverse(&mut buf);
        for (a, b) in buf.iter().zip(&x) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_pow2() {
        assert!(Fft::new(0).is_err());
        assert!(Fft::new(12).is_err());
    }

    #[test]
    fn pow2_helpers() {
        assert_eq!(next_pow2(1000), 1024);
        assert_eq!(next_pow2(1024), 1024);
        assert_eq!(prev_pow2(1000), 512);
        assert_eq!(prev_pow2(1024), 1024);
        assert_eq!(prev_pow2(1), 1);
    }
}
