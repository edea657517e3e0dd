//! STFT / ISTFT with square-root Hann windows at 50% overlap.
//!
//! Analysis and synthesis share the same window, so the overlap-add
//! weights sum to exactly one on the interior and masked spectrograms
//! invert consistently: `istft(M1*S) + istft(M2*S) = istft((M1+M2)*S)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float; // f64 math methods in no_std builds

use crate::audio::AudioClip;
use crate::error::{Error, Result};
use crate::features::{level, BinLabel, FeatureMap};
use crate::fft::Fft;
use crate::mat::Mat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StftConfig {
    pub window_length: usize,
    pub hop: usize,
    pub fft_size: usize,
}

impl StftConfig {
    /// Hop is fixed at half the window: the sqrt-Hann pair satisfies the
    /// constant-overlap-add condition exactly at that hop.
    pub fn new(window_length: usize, fft_size: usize) -> Result<Self> {
        if window_length < 4 || window_length % 2 != 0 {
            return Err(Error::BadStftConfig("window length must be even and >= 4"));
        }
        if fft_size < window_length {
            return Err(Error::BadStftConfig("fft size smaller than window"));
        }
        if !fft_size.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(fft_size));
        }
        Ok(StftConfig {
            window_length,
            hop: window_length / 2,
            fft_size,
        })
    }

    pub fn bins(&self) -> usize {
        self.fft_size / 2 + 1
    }
}

impl Default for StftConfig {
    fn default() -> Self {
        StftConfig::new(1024, 1024).unwrap()
    }
}

#[derive(Debug, Clone)]
pub struct ComplexSpectrogram {
    /// Row-major (bins x frames).
    values: Vec<Complex64>,
    bins: usize,
    frames: usize,
    pub config: StftConfig,
    pub sample_rate: u32,
    /// Original signal length, needed to crop the inverse transform.
    pub signal_len: usize,
}

impl ComplexSpectrogram {
    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    #[inline]
    pub fn get(&self, bin: usize, frame: usize) -> Complex64 {
        self.values[bin * self.frames + frame]
    }

    #[inline]
    pub fn set(&mut self, bin: usize, frame: usize, v: Complex64) {
        self.values[bin * self.frames + frame] = v;
    }

    /// Magnitude feature map, level 0, stride = hop.
    pub fn magnitude(&self) -> FeatureMap {
        let mut m = Mat::zeros(self.bins, self.frames);
        for b in 0..self.bins {
            for t in 0..self.frames {
                m.set(b, t, self.get(b, t).norm());
            }
        }
        let hz_per_bin = self.sample_rate as f64 / self.config.fft_size as f64;
        FeatureMap {
            values: m,
            level: level::STFT,
            stride: self.config.hop,
            sample_rate: self.sample_rate,
            bin_labels: (0..self.bins)
                .map(|b| BinLabel::Freq(b as f64 * hz_per_bin))
                .collect(),
        }
    }

    /// Elementwise product with a real mask of matching shape.
    pub fn masked(&self, mask: &Mat) -> Result<ComplexSpectrogram> {
        if mask.shape() != (self.bins, self.frames) {
            return Err(Error::ShapeMismatch {
                expected: (self.bins, self.frames),
                got: mask.shape(),
            });
        }
        let mut out = self.clone();
        for b in 0..self.bins {
            for t in 0..self.frames {
                out.set(b, t, self.get(b, t) * mask.get(b, t));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ComplexSpectrogram) -> Result<ComplexSpectrogram> {
        if other.bins != self.bins || other.frames != self.frames {
            return Err(Error::ShapeMismatch {
                expected: (self.bins, self.frames),
                got: (other.bins, other.frames),
            });
        }
        let mut out = self.clone();
        for (v, w) in out.values.iter_mut().zip(&other.values) {
            *v += w;
        }
        Ok(out)
    }
}

fn sqrt_hann(len: usize) -> Vec<f64> {
    // Periodic Hann to the power 1/2: w[t] = sin(pi * t / len).
    (0..len).map(|t| (PI * t as f64 / len as f64).sin()).collect()
}

fn reflect_pad(x: &[f64], left: usize, right: usize) -> Vec<f64> {
    let n = x.len();
    debug_assert!(left < n && right < n);
    let mut out = Vec::with_capacity(n + left + right);
    for i in (1..=left).rev() {
        out.push(x[i]);
    }
    out.extend_from_slice(x);
    for i in 0..right {
        out.push(x[n - 2 - i]);
    }
    out
}

pub fn stft(clip: &AudioClip, cfg: StftConfig) -> Result<ComplexSpectrogram> {
    let wl = cfg.window_length;
    let pad = wl / 2;
    if clip.len() < wl {
        return Err(Error::ClipTooShort {
            len: clip.len(),
            need: wl,
        });
    }
    // Right padding extends to the next hop boundary so every retained
    // sample is covered by two overlapping frames (exact overlap-add).
    let extra = (cfg.hop - clip.len() % cfg.hop) % cfg.hop;
    let padded = reflect_pad(clip.samples(), pad, pad + extra);
    let frames = (padded.len() - wl) / cfg.hop + 1;
    let bins = cfg.bins();
    let window = sqrt_hann(wl);
    let plan = Fft::new(cfg.fft_size)?;

    let mut values = vec![Complex64::new(0.0, 0.0); bins * frames];
    let mut buf = vec![Complex64::new(0.0, 0.0); cfg.fft_size];
    for f in 0..frames {
        let start = f * cfg.hop;
        for v in buf.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for t in 0..wl {
            buf[t].re = padded[start + t] * window[t];
        }
        plan.forward(&mut buf);
        for b in 0..bins {
            values[b * frames + f] = buf[b];
        }
    }
    Ok(ComplexSpectrogram {
        values,
        bins,
        frames,
        config: cfg,
        sample_rate: clip.sample_rate(),
        signal_len: clip.len(),
    })
}

pub fn istft(spec: &ComplexSpectrogram) -> Result<AudioClip> {
    let cfg = spec.config;
    let wl = cfg.window_length;
    if cfg.hop * 2 != wl {
        return Err(Error::BadStftConfig("overlap-add requires hop = window/2"));
    }
    let pad = wl / 2;
    let window = sqrt_hann(wl);
    let plan = Fft::new(cfg.fft_size)?;
    let padded_len = (spec.frames - 1) * cfg.hop + wl;
    let mut acc = vec![0.0; padded_len];

    let mut buf = vec![Complex64::new(0.0, 0.0); cfg.fft_size];
    for f in 0..spec.frames {
        // Rebuild the full conjugate-symmetric spectrum of the frame.
        buf[0] = Complex64::new(spec.get(0, f).re, 0.0);
        for b in 1..spec.bins() - 1 {
            let v = spec.get(b, f);
            buf[b] = v;
            buf[cfg.fft_size - b] = v.conj();
        }
        let nyq = spec.bins() - 1;
        buf[nyq] = Complex64::new(spec.get(nyq, f).re, 0.0);
        plan.inverse(&mut buf);
        let start = f * cfg.hop;
        for t in 0..wl {
            acc[start + t] += buf[t].re * window[t];
        }
    }

    let n = spec.signal_len.min(padded_len.saturating_sub(pad));
    let samples: Vec<f64> = acc[pad..pad + n].to_vec();
    AudioClip::new(samples, spec.sample_rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn noise(n: usize, rate: u32, seed: u64) -> AudioClip {
        let mut rng = SeededRng::new(seed);
        AudioClip::new((0..n).map(|_| 0.5 * rng.uniform_signed()).collect(), rate).unwrap()
    }

    fn tone(freq: f64, rate: u32, n: usize) -> AudioClip {
        let w = 2.0 * PI * freq / rate as f64;
        AudioClip::new((0..n).map(|t| 0.7 * (w * t as f64).sin()).collect(), rate).unwrap()
    }

    #[test]
    fn default_config_has_513_bins() {
        let cfg = StftConfig::default();
        assert_eq!(cfg.bins(), 513);
        assert_eq!(cfg.hop, 512);
    }

    #[test]
    fn zero_signal_zero_spectrogram() {
        let clip = AudioClip::new(vec![0.0; 4096], 16_000).unwrap();
        let spec = stft(&clip, StftConfig::default()).unwrap();
        for b in 0..spec.bins() {
            for f in 0..spec.frames() {
                assert_eq!(spec.get(b, f), Complex64::new(0.0, 0.0));
            }
        }
        let back = istft(&spec).unwrap();
        assert!(back.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tone_peaks_at_expected_bin() {
        // 1 kHz at 16 kHz with a 1024-point FFT lands on bin 64.
        let clip = tone(1_000.0, 16_000, 16_000);
        let spec = stft(&clip, StftConfig::default()).unwrap();
        let mag = spec.magnitude();
        // Frames that only see real (unpadded) samples.
        let interior = (clip.len() + spec.config.hop - spec.config.window_length)
            / spec.config.hop;
        for f in 1..=interior {
            let mut best = 0;
            for b in 0..spec.bins() {
                if mag.values.get(b, f) > mag.values.get(best, f) {
                    best = b;
                }
            }
            assert_eq!(best, 64, "frame {f}");
        }
    }

    #[test]
    fn windowed_frame_matches_direct_dft() {
        // Cross-check one interior STFT column against a naive DFT of the
        // same windowed slice.
        let clip = noise(4096, 16_000, 9);
        let cfg = StftConfig::default();
        let spec = stft(&clip, cfg).unwrap();
        let padded = reflect_pad(clip.samples(), cfg.hop, cfg.hop);
        let window = sqrt_hann(cfg.window_length);
        let f = 3;
        let start = f * cfg.hop;
        for &bin in &[0usize, 1, 17, 256, 512] {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..cfg.window_length {
                let ang = -2.0 * PI * (bin * t) as f64 / cfg.fft_size as f64;
                acc += padded[start + t] * window[t] * Complex64::new(ang.cos(), ang.sin());
            }
            assert!((acc - spec.get(bin, f)).norm() < 1e-9, "bin {bin}");
        }
    }

    #[test]
    fn round_trip_noise() {
        let clip = noise(16_000, 16_000, 4);
        let spec = stft(&clip, StftConfig::default()).unwrap();
        let back = istft(&spec).unwrap();
        assert_eq!(back.len(), clip.len());
        let mut err = 0.0;
        let mut energy = 0.0;
        for (a, b) in back.samples().iter().zip(clip.samples()) {
            err += (a - b) * (a - b);
            energy += b * b;
        }
        let rel = (err / energy).sqrt();
        assert!(rel < 1e-6, "relative error {rel}");
    }

    #[test]
    fn istft_is_linear() {
        let a = stft(&noise(8_000, 16_000, 1), StftConfig::default()).unwrap();
        let b = stft(&noise(8_000, 16_000, 2), StftConfig::default()).unwrap();
        let sum = a.add(&b).unwrap();
        let xa = istft(&a).unwrap();
        let xb = istft(&b).unwrap();
        let xs = istft(&sum).unwrap();
        for t in 0..xs.len() {
            assert!((xs.samples()[t] - xa.samples()[t] - xb.samples()[t]).abs() < 1e-9);
        }
    }

    #[test]
    fn too_short_clip_rejected() {
        let clip = AudioClip::new(vec![0.1; 100], 16_000).unwrap();
        assert!(matches!(
            stft(&clip, StftConfig::default()),
            Err(Error::ClipTooShort { .. })
        ));
    }
}
