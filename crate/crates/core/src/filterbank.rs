//! Constant-Q analytic Morlet filter bank design and FFT-domain filtering.
//!
//! Band-pass filters are Gaussians in frequency with a zero-mean correction,
//! placed geometrically at `f_max * 2^(-j/Q)` and sized so adjacent filters
//! cross at -3 dB. A Gaussian low-pass covers the residual band down to DC.
//! After design, every filter is rescaled so the Littlewood-Paley energy sum
//!
//! ```text
//! S(w) = |phi(w)|^2 + 1/2 * sum_j |psi_j(w)|^2
//! ```
//!
//! has maximum exactly 1. That makes the (real-input) analysis operator
//! non-expansive, which the deeper scattering layers rely on.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float; // f64 math methods in no_std builds

use crate::error::{Error, Result};
use crate::fft::{next_pow2, prev_pow2, Fft};

/// Top filter center as a fraction of the sample rate; keeps the widest
/// Morlet's upper tail below Nyquist.
pub const F_MAX_FACTOR: f64 = 0.4;

/// Littlewood-Paley acceptance bounds for a valid bank.
pub const LP_LOWER: f64 = 0.5;
pub const LP_UPPER: f64 = 1.05;

/// Grid resolution for design-time frame-bound evaluation.
const LP_GRID: usize = 1 << 16;

const SQRT_LN2: f64 = 0.832_554_611_157_697_8;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    /// One-sided Gaussian at `center` with DC-cancelling correction term.
    BandPass { correction: f64 },
    /// Symmetric Gaussian around DC.
    LowPass,
}

/// Closed-form frequency response of one filter; evaluated on whatever DFT
/// grid an application needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterShape {
    /// Center frequency in radians per sample (0 for the low-pass).
    center: f64,
    /// Frequency-domain Gaussian width in radians per sample.
    sigma: f64,
    gain: f64,
    kind: Kind,
}

impl FilterShape {
    /// Frequency response at `omega` radians/sample. Band-pass filters are
    /// analytic: identically zero for negative frequencies.
    pub fn eval(&self, omega: f64) -> f64 {
        match self.kind {
            Kind::BandPass { correction } => {
                if omega < 0.0 {
                    return 0.0;
                }
                let d = (omega - self.center) / self.sigma;
                let g = (-0.5 * d * d).exp();
                let w = omega / self.sigma;
                self.gain * (g - correction * (-0.5 * w * w).exp())
            }
            Kind::LowPass => {
                let w = omega / self.sigma;
                self.gain * (-0.5 * w * w).exp()
            }
        }
    }

    pub fn center_rad(&self) -> f64 {
        self.center
    }

    pub fn sigma_rad(&self) -> f64 {
        self.sigma
    }
}

/// Analytic constant-Q wavelet bank: `q * octaves` band-pass filters in
/// descending center frequency plus one low-pass, and the critical
/// subsampling stride for the layer.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilterBank {
    sample_rate: f64,
    q: u32,
    octaves: u32,
    band_pass: Vec<FilterShape>,
    low_pass: FilterShape,
    stride: usize,
}

impl WaveletFilterBank {
    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn octaves(&self) -> u32 {
        self.octaves
    }

    pub fn num_bands(&self) -> usize {
        self.band_pass.len()
    }

    /// Rows produced by one analysis pass: bands plus the low-pass branch.
    pub fn num_rows(&self) -> usize {
        self.band_pass.len() + 1
    }

    /// Critical subsampling stride in samples.
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn band(&self, idx: usize) -> &FilterShape {
        &self.band_pass[idx]
    }

    pub fn low_pass(&self) -> &FilterShape {
        &self.low_pass
    }

    pub fn center_hz(&self, idx: usize) -> f64 {
        self.band_pass[idx].center * self.sample_rate / (2.0 * PI)
    }

    /// Band-pass coverage in Hz: lowest to highest filter center.
    pub fn covered_band_hz(&self) -> (f64, f64) {
        (self.center_hz(self.num_bands() - 1), self.center_hz(0))
    }

    /// Littlewood-Paley energy sum at `omega >= 0` (radians/sample). The
    /// half weight on the band-pass terms accounts for analytic filters
    /// acting on real signals.
    pub fn lp_sum(&self, omega: f64) -> f64 {
        let low = self.low_pass.eval(omega);
        let mut s = low * low;
        for f in &self.band_pass {
            let v = f.eval(omega);
            s += 0.5 * v * v;
        }
        s
    }

    /// Evaluates the frame bounds: global max of the LP sum over `[0, pi]`
    /// and its min over the covered band.
    pub fn frame_bounds(&self, grid: usize) -> (f64, f64) {
        let (f_lo, f_hi) = self.covered_band_hz();
        let w_lo = 2.0 * PI * f_lo / self.sample_rate;
        let w_hi = 2.0 * PI * f_hi / self.sample_rate;
        let mut max_all = 0.0f64;
        let mut min_band = f64::INFINITY;
        for i in 0..=grid {
            let w = PI * i as f64 / grid as f64;
            let s = self.lp_sum(w);
            max_all = max_all.max(s);
            if w >= w_lo && w <= w_hi {
                min_band = min_band.min(s);
            }
        }
        (min_band, max_all)
    }

    /// Evaluates all filters on the DFT grid of `fft_size` points.
    pub fn sample(&self, fft_size: usize) -> Result<SampledBank> {
        SampledBank::new(self, fft_size)
    }
}

/// Designs an analytic Morlet bank for audio-rate signals.
pub fn design_filterbank(q: u32, j1: u32, sample_rate: f64) -> Result<WaveletFilterBank> {
    if q < 1 || j1 < 1 {
        return Err(Error::BadFilterBank("need Q >= 1 and J1 >= 1"));
    }
    if (2.0f64).powi(j1 as i32) > sample_rate {
        return Err(Error::BadFilterBank("2^J1 exceeds the sample rate"));
    }
    design(q, j1, sample_rate)
}

/// Bank for envelope (frame-rate) signals, e.g. deeper scattering layers,
/// where sub-hertz modulation bands are legitimate and the audio-rate
/// `2^J1 <= sample_rate` guard does not apply.
pub fn design_envelope_filterbank(q: u32, j1: u32, frame_rate: f64) -> Result<WaveletFilterBank> {
    if q < 1 || j1 < 1 {
        return Err(Error::BadFilterBank("need Q >= 1 and J1 >= 1"));
    }
    if j1 > 24 {
        return Err(Error::BadFilterBank("more than 24 octaves requested"));
    }
    design(q, j1, frame_rate)
}

fn design(q: u32, j1: u32, sample_rate: f64) -> Result<WaveletFilterBank> {
    if !(sample_rate > 0.0) || !sample_rate.is_finite() {
        return Err(Error::BadFilterBank("sample rate must be positive"));
    }
    let f_max = F_MAX_FACTOR * sample_rate;
    let n_bands = (q * j1) as usize;

    // -3 dB crossing between adjacent bands: relative width s solves
    // (1 - k) / (s (1 + k)) = sqrt(ln 2) with k = 2^(-1/Q).
    let kq = (2.0f64).powf(-1.0 / q as f64);
    let s = (1.0 - kq) / ((1.0 + kq) * SQRT_LN2);
    let correction = (-0.5 / (s * s)).exp();

    let mut band_pass = Vec::with_capacity(n_bands);
    for j in 0..n_bands {
        let center_hz = f_max * (2.0f64).powf(-(j as f64) / q as f64);
        let center = 2.0 * PI * center_hz / sample_rate;
        band_pass.push(FilterShape {
            center,
            sigma: s * center,
            // sqrt(2) lifts the half-weighted band-pass plateau to the
            // low-pass level so the LP sum is flat across the junction.
            gain: core::f64::consts::SQRT_2,
            kind: Kind::BandPass { correction },
        });
    }

    // Low-pass sized so its energy at the lowest band center is a fixed
    // small ripple; a wider Gaussian would spike the LP sum at the
    // junction, a narrower one would leave the sub-band floor uncovered.
    const EDGE_ENERGY: f64 = 0.08;
    let w_min = band_pass[n_bands - 1].center;
    let sigma_phi = w_min / (1.0 / EDGE_ENERGY).ln().sqrt();
    let low_pass = FilterShape {
        center: 0.0,
        sigma: sigma_phi,
        gain: 1.0,
        kind: Kind::LowPass,
    };

    // Critical stride from the widest filter present (-3 dB full width).
    let widest_sigma = band_pass[0].sigma.max(sigma_phi);
    let width_rad = 2.0 * SQRT_LN2 * widest_sigma;
    let stride_f = 2.0 * PI / width_rad;
    let stride = if stride_f < 2.0 {
        1
    } else {
        prev_pow2(stride_f as usize)
    };

    let mut bank = WaveletFilterBank {
        sample_rate,
        q,
        octaves: j1,
        band_pass,
        low_pass,
        stride,
    };

    // Normalize so max S(w) = 1 (up to a safety epsilon), then check the
    // lower frame bound over the covered band.
    let (_, max_all) = bank.frame_bounds(LP_GRID);
    if !(max_all > 0.0) {
        return Err(Error::BadFilterBank("degenerate frame"));
    }
    let g = 1.0 / (max_all * (1.0 + 1e-9)).sqrt();
    for f in &mut bank.band_pass {
        f.gain *= g;
    }
    bank.low_pass.gain *= g;

    let (min_band, max_norm) = bank.frame_bounds(LP_GRID);
    if min_band < LP_LOWER || max_norm > LP_UPPER {
        return Err(Error::BadFilterBank("frame bounds outside [0.5, 1.05]"));
    } // DBG
    Ok(bank)
}

/// A bank evaluated on a concrete DFT grid, with FFT plan and synthesis
/// normalizer. Band responses are one-sided (analytic); the low-pass is
/// symmetric.
pub struct SampledBank {
    fft_size: usize,
    plan: Fft,
    /// Per band: response at bins `0..=fft_size/2`.
    band: Vec<Vec<f64>>,
    /// Low-pass response at all bins (conjugate-symmetric layout).
    low: Vec<f64>,
    /// Synthesis denominator `R[k] = L[k]^2 + sum_b B_b[k]^2`, one-sided.
    resynth: Vec<f64>,
    stride: usize,
}

impl SampledBank {
    fn new(fb: &WaveletFilterBank, fft_size: usize) -> Result<Self> {
        if !fft_size.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(fft_size));
        }
        let half = fft_size / 2;
        let step = 2.0 * PI / fft_size as f64;
        let mut band = Vec::with_capacity(fb.num_bands());
        let mut resynth = vec![0.0; half + 1];
        for f in &fb.band_pass {
            let mut b = Vec::with_capacity(half + 1);
            for k in 0..=half {
                let v = f.eval(step * k as f64);
                b.push(v);
                resynth[k] += v * v;
            }
            band.push(b);
        }
        let mut low = vec![0.0; fft_size];
        for (k, l) in low.iter_mut().enumerate() {
            let omega = if k <= half {
                step * k as f64
            } else {
                step * (fft_size - k) as f64
            };
            *l = fb.low_pass.eval(omega);
        }
        for k in 0..=half {
            resynth[k] += low[k] * low[k];
        }
        Ok(SampledBank {
            fft_size,
            plan: Fft::new(fft_size)?,
            band,
            low,
            resynth,
            stride: fb.stride,
        })
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    pub fn num_bands(&self) -> usize {
        self.band.len()
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    /// DFT of `x` zero-padded to the plan size.
    pub fn spectrum(&self, x: &[f64]) -> Vec<Complex64> {
        debug_assert!(x.len() <= self.fft_size);
        self.plan.forward_real(x)
    }

    /// Full-rate complex (analytic) subband of band `b`, in time domain.
    pub fn band_signal(&self, spectrum: &[Complex64], b: usize) -> Vec<Complex64> {
        let half = self.fft_size / 2;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.fft_size];
        for k in 0..=half {
            buf[k] = spectrum[k] * self.band[b][k];
        }
        self.plan.inverse(&mut buf);
        buf
    }

    /// Full-rate real low-pass branch, in time domain.
    pub fn low_signal(&self, spectrum: &[Complex64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = spectrum
            .iter()
            .zip(&self.low)
            .map(|(&s, &l)| s * l)
            .collect();
        self.plan.inverse(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }

    pub fn new_accumulator(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); self.fft_size / 2 + 1]
    }

    /// Adds band `b`'s (possibly masked) time-domain subband to the
    /// synthesis accumulator.
    pub fn accumulate_band(&self, acc: &mut [Complex64], band_time: &[Complex64], b: usize) {
        debug_assert_eq!(band_time.len(), self.fft_size);
        let mut buf = band_time.to_vec();
        self.plan.forward(&mut buf);
        for (k, a) in acc.iter_mut().enumerate() {
            *a += buf[k] * self.band[b][k];
        }
    }

    /// Adds the (possibly masked) real low-pass branch to the accumulator.
    pub fn accumulate_low(&self, acc: &mut [Complex64], low_time: &[f64]) {
        debug_assert_eq!(low_time.len(), self.fft_size);
        let buf = self.plan.forward_real(low_time);
        for (k, a) in acc.iter_mut().enumerate() {
            *a += buf[k] * self.low[k];
        }
    }

    /// Canonical-dual synthesis: divides the accumulator by the frame sum,
    /// rebuilds a conjugate-symmetric spectrum, and returns the first
    /// `out_len` samples.
    pub fn synthesize(&self, acc: &[Complex64], out_len: usize) -> Vec<f64> {
        let half = self.fft_size / 2;
        debug_assert_eq!(acc.len(), half + 1);
        const FLOOR: f64 = 1e-9;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.fft_size];
        for k in 0..=half {
            let r = self.resynth[k];
            if r < FLOOR {
                continue;
            }
            let v = acc[k] / r;
            if k == 0 || k == half {
                buf[k] = Complex64::new(v.re, 0.0);
            } else {
                buf[k] = v;
                buf[self.fft_size - k] = v.conj();
            }
        }
        self.plan.inverse(&mut buf);
        buf.into_iter().take(out_len).map(|c| c.re).collect()
    }

    /// Analysis round trip without any masking; used to audit the dual
    /// frame's reconstruction error.
    pub fn reconstruct(&self, x: &[f64]) -> Vec<f64> {
        let spec = self.spectrum(x);
        let mut acc = self.new_accumulator();
        for b in 0..self.num_bands() {
            let sub = self.band_signal(&spec, b);
            self.accumulate_band(&mut acc, &sub, b);
        }
        let low = self.low_signal(&spec);
        self.accumulate_low(&mut acc, &low);
        self.synthesize(&acc, x.len())
    }
}

/// Pads to at least twice the signal length; keeps circular wrap-around of
/// long filter tails away from the analysis region.
pub fn analysis_fft_size(signal_len: usize) -> usize {
    next_pow2(2 * signal_len.max(1))
}
