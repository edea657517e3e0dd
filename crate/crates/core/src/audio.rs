//! Mono audio clips and 0 dB mixture synthesis.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float; // f64 math methods in no_std builds

use crate::error::{Error, Result};

/// Mono PCM samples with a sample rate. Samples are finite and nominally in
/// [-1, 1] (not enforced: intermediate estimates may overshoot).
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl AudioClip {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidSampleRate);
        }
        if samples.is_empty() {
            return Err(Error::EmptyAudio);
        }
        if !samples.iter().all(|s| s.is_finite()) {
            return Err(Error::NonFiniteSample);
        }
        Ok(AudioClip {
            samples,
            sample_rate,
        })
    }

    #[inline]
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    #[inline]
    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    pub fn rms(&self) -> f64 {
        rms(&self.samples)
    }
}

pub fn rms(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

/// Truncates both clips to the shorter length, rescales `x2` so the two
/// components have equal RMS (a 0 dB mix), and returns
/// `(y, x1s, x2s)` with `y = x1s + x2s` exactly.
pub fn mix_at_0db(x1: &AudioClip, x2: &AudioClip) -> Result<(AudioClip, AudioClip, AudioClip)> {
    if x1.sample_rate() != x2.sample_rate() {
        return Err(Error::SampleRateMismatch(x1.sample_rate(), x2.sample_rate()));
    }
    let n = x1.len().min(x2.len());
    if n == 0 {
        return Err(Error::EmptyAudio);
    }
    let a = &x1.samples()[..n];
    let b = &x2.samples()[..n];
    let r1 = rms(a);
    let r2 = rms(b);
    if r1 == 0.0 {
        return Err(Error::ZeroEnergy("first source"));
    }
    if r2 == 0.0 {
        return Err(Error::ZeroEnergy("second source"));
    }
    let gain = r1 / r2;
    let x1s: Vec<f64> = a.to_vec();
    let x2s: Vec<f64> = b.iter().map(|&v| v * gain).collect();
    let y: Vec<f64> = x1s.iter().zip(&x2s).map(|(&p, &q)| p + q).collect();
    let rate = x1.sample_rate();
    Ok((
        AudioClip::new(y, rate)?,
        AudioClip::new(x1s, rate)?,
        AudioClip::new(x2s, rate)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;
    use alloc::vec;
    use core::f64::consts::PI;

    pub(crate) fn sine(freq: f64, amp: f64, rate: u32, n: usize) -> AudioClip {
        let w = 2.0 * PI * freq / rate as f64;
        AudioClip::new((0..n).map(|t| amp * (w * t as f64).sin()).collect(), rate).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(AudioClip::new(vec![], 16_000).unwrap_err(), Error::EmptyAudio);
        assert_eq!(
            AudioClip::new(vec![0.0], 0).unwrap_err(),
            Error::InvalidSampleRate
        );
        assert_eq!(
            AudioClip::new(vec![f64::NAN], 8_000).unwrap_err(),
            Error::NonFiniteSample
        );
    }

    #[test]
    fn mix_scales_second_source() {
        // Amplitude ratio 0.5 : 0.1 forces a gain of exactly 5 on x2.
        let x1 = sine(440.0, 0.5, 16_000, 16_000);
        let x2 = sine(700.0, 0.1, 16_000, 16_000);
        let (_, x1s, x2s) = mix_at_0db(&x1, &x2).unwrap();
        let ratio = x2s.samples()[100] / x2.samples()[100];
        assert!((ratio - 5.0).abs() < 1e-6, "gain {ratio}");
        assert!((x1s.rms() / x2s.rms() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mix_is_exactly_additive() {
        let x1 = sine(300.0, 0.3, 8_000, 4_000);
        let x2 = sine(900.0, 0.7, 8_000, 5_000);
        let (y, x1s, x2s) = mix_at_0db(&x1, &x2).unwrap();
        assert_eq!(y.len(), 4_000);
        for t in 0..y.len() {
            assert_eq!(y.samples()[t], x1s.samples()[t] + x2s.samples()[t]);
        }
    }

    #[test]
    fn mix_noise_vs_sine_is_0db() {
        let mut rng = SeededRng::new(2);
        let noise =
            AudioClip::new((0..8_000).map(|_| 0.2 * rng.uniform_signed()).collect(), 16_000)
                .unwrap();
        let tone = sine(1_000.0, 0.9, 16_000, 8_000);
        let (_, x1s, x2s) = mix_at_0db(&noise, &tone).unwrap();
        let db = 20.0 * (x1s.rms() / x2s.rms()).log10();
        assert!(db.abs() < 1e-6, "level difference {db} dB");
    }

    #[test]
    fn mix_rejects_silence() {
        let z = AudioClip::new(vec![0.0; 100], 16_000).unwrap();
        let t = sine(500.0, 0.5, 16_000, 100);
        assert!(matches!(mix_at_0db(&z, &t), Err(Error::ZeroEnergy(_))));
        assert!(matches!(mix_at_0db(&t, &z), Err(Error::ZeroEnergy(_))));
    }

    #[test]
    fn mix_rejects_rate_mismatch() {
        let a = sine(500.0, 0.5, 16_000, 100);
        let b = sine(500.0, 0.5, 8_000, 100);
        assert!(matches!(
            mix_at_0db(&a, &b),
            Err(Error::SampleRateMismatch(16_000, 8_000))
        ));
    }
}
