//! Wavelet scattering pyramid: modulus subbands at critical sampling rates.
//!
//! Layer 1 filters the signal through a constant-Q bank, takes the complex
//! modulus per band and subsamples at the bank's critical stride. Deeper
//! layers re-filter each node's envelope with a dyadic bank, doubling the
//! stride; nodes that would exceed `M_MAX` modulus operations are dropped.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float; // f64 math methods in no_std builds

use crate::audio::AudioClip;
use crate::error::{Error, Result};
use crate::features::{BinLabel, FeatureMap};
use crate::filterbank::{analysis_fft_size, design_envelope_filterbank, WaveletFilterBank};
use crate::mat::Mat;

/// Maximum number of modulus nonlinearities along any retained path.
pub const M_MAX: u8 = 2;

/// One node of the scattering tree: a real envelope (or low-pass residue)
/// at some temporal resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterNode {
    pub signal: Vec<f64>,
    /// Samples per frame at the original audio rate.
    pub stride: usize,
    /// Frames per second of `signal`.
    pub frame_rate: f64,
    /// Filter index chosen at each layer; a bank's `num_bands()` marks the
    /// low-pass branch.
    pub path: Vec<u32>,
    /// Modulus count along the path.
    pub moduli: u8,
    /// True when the last step was the low-pass branch (signed output).
    pub lowpass: bool,
    /// Center frequency in Hz of the last band-pass applied (0 for
    /// low-pass nodes).
    pub center_hz: f64,
}

impl ScatterNode {
    pub fn frames(&self) -> usize {
        self.signal.len()
    }
}

#[derive(Debug, Clone)]
pub struct ScatteringPyramid {
    /// `layers[k]` holds the layer-(k+1) node set; all resolutions are kept.
    pub layers: Vec<Vec<ScatterNode>>,
    pub base_stride: usize,
    pub sample_rate: u32,
}

fn subsample_abs(x: &[num_complex::Complex64], len: usize, stride: usize) -> Vec<f64> {
    (0..len).step_by(stride).map(|t| x[t].norm()).collect()
}

fn subsample(x: &[f64], len: usize, stride: usize) -> Vec<f64> {
    (0..len).step_by(stride).map(|t| x[t]).collect()
}

/// First scattering layer: `{ |x * psi_b|(n D) }` for every band plus the
/// signed low-pass branch `x * phi (n D)`.
pub fn scatter_layer1(clip: &AudioClip, fb: &WaveletFilterBank) -> Result<Vec<ScatterNode>> {
    if (fb.sample_rate() - clip.sample_rate() as f64).abs() > 0.5 {
        return Err(Error::DescriptorMismatch(
            "clip rate differs from the bank's design rate",
        ));
    }
    let n = clip.len();
    let stride = fb.stride();
    let sb = fb.sample(analysis_fft_size(n))?;
    let spec = sb.spectrum(clip.samples());
    let frame_rate = fb.sample_rate() / stride as f64;

    let mut nodes = Vec::with_capacity(fb.num_rows());
    for b in 0..fb.num_bands() {
        let sub = sb.band_signal(&spec, b);
        nodes.push(ScatterNode {
            signal: subsample_abs(&sub, n, stride),
            stride,
            frame_rate,
            path: alloc::vec![b as u32],
            moduli: 1,
            lowpass: false,
            center_hz: fb.center_hz(b),
        });
    }
    let low = sb.low_signal(&spec);
    nodes.push(ScatterNode {
        signal: subsample(&low, n, stride),
        stride,
        frame_rate,
        path: alloc::vec![fb.num_bands() as u32],
        moduli: 0,
        lowpass: true,
        center_hz: 0.0,
    });
    Ok(nodes)
}

/// Refines every node with a dyadic-family bank at the node frame rate.
/// Band-pass children take a modulus (and are dropped past `M_MAX`); the
/// low-pass child stays signed. Children appear parent-major, band-pass
/// branches first.
pub fn scatter_layer2(
    nodes: &[ScatterNode],
    fb2: &WaveletFilterBank,
) -> Result<Vec<ScatterNode>> {
    let first = nodes.first().ok_or(Error::EmptyInput)?;
    if (fb2.sample_rate() - first.frame_rate).abs() > 1e-6 * first.frame_rate {
        return Err(Error::DescriptorMismatch(
            "layer-2 bank not designed at the node frame rate",
        ));
    }
    let frames = first.frames();
    if frames < 2 {
        return Err(Error::BadParameter(
            "nodes too short to refine: temporal frames vanish",
        ));
    }
    let sb = fb2.sample(analysis_fft_size(frames))?;
    let stride2 = fb2.stride();

    let mut out = Vec::new();
    for node in nodes {
        debug_assert_eq!(node.frames(), frames);
        let spec = sb.spectrum(&node.signal);
        let stride = node.stride * stride2;
        let frame_rate = node.frame_rate / stride2 as f64;
        if node.moduli < M_MAX {
            for b in 0..fb2.num_bands() {
                let sub = sb.band_signal(&spec, b);
                let mut path = node.path.clone();
                path.push(b as u32);
                out.push(ScatterNode {
                    signal: subsample_abs(&sub, frames, stride2),
                    stride,
                    frame_rate,
                    path,
                    moduli: node.moduli + 1,
                    lowpass: false,
                    center_hz: fb2.center_hz(b),
                });
            }
        }
        let low = sb.low_signal(&spec);
        let mut path = node.path.clone();
        path.push(fb2.num_bands() as u32);
        out.push(ScatterNode {
            signal: subsample(&low, frames, stride2),
            stride,
            frame_rate,
            path,
            moduli: node.moduli,
            lowpass: true,
            center_hz: 0.0,
        });
    }
    Ok(out)
}

/// Dyadic bank used for the second layer, designed at the first layer's
/// frame rate.
pub fn default_layer2_bank(fb: &WaveletFilterBank, j2: u32) -> Result<WaveletFilterBank> {
    design_envelope_filterbank(1, j2, fb.sample_rate() / fb.stride() as f64)
}

/// Iterates dyadic pair refinements on top of layer 1 until `depth` layers
/// exist; every layer's node set is retained.
pub fn scatter_pyramid(
    clip: &AudioClip,
    fb: &WaveletFilterBank,
    depth: usize,
) -> Result<ScatteringPyramid> {
    if depth < 1 {
        return Err(Error::BadParameter("pyramid depth must be at least 1"));
    }
    let mut layers = Vec::with_capacity(depth);
    layers.push(scatter_layer1(clip, fb)?);
    let mut rate = fb.sample_rate() / fb.stride() as f64;
    for _ in 1..depth {
        let pair = design_envelope_filterbank(1, 1, rate)?;
        let next = scatter_layer2(layers.last().unwrap(), &pair)?;
        rate /= pair.stride() as f64;
        layers.push(next);
    }
    Ok(ScatteringPyramid {
        layers,
        base_stride: fb.stride(),
        sample_rate: clip.sample_rate(),
    })
}

/// Stacks a node set into a (rows x frames) feature map. `clamp_nonneg`
/// zeroes negative entries (signed low-pass rows) for consumers that
/// require non-negative features.
pub fn nodes_to_feature_map(
    nodes: &[ScatterNode],
    level_tag: u32,
    sample_rate: u32,
    clamp_nonneg: bool,
) -> Result<FeatureMap> {
    let first = nodes.first().ok_or(Error::EmptyInput)?;
    let frames = first.frames();
    let mut values = Mat::zeros(nodes.len(), frames);
    let mut labels = Vec::with_capacity(nodes.len());
    for (i, node) in nodes.iter().enumerate() {
        if node.frames() != frames {
            return Err(Error::ShapeMismatch {
                expected: (nodes.len(), frames),
                got: (i, node.frames()),
            });
        }
        for (t, &v) in node.signal.iter().enumerate() {
            values.set(i, t, if clamp_nonneg { v.max(0.0) } else { v });
        }
        labels.push(BinLabel::Path(node.path.clone()));
    }
    Ok(FeatureMap {
        values,
        level: level_tag,
        stride: first.stride,
        sample_rate,
        bin_labels: labels,
    })
}

/// Squared L2 distance between two node sets of identical structure.
pub fn node_set_distance_sq(a: &[ScatterNode], b: &[ScatterNode]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (na, nb) in a.iter().zip(b) {
        for (x, y) in na.signal.iter().zip(&nb.signal) {
            acc += (x - y) * (x - y);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filterbank::design_filterbank;
    use crate::rng::SeededRng;
    use alloc::vec;
    use core::f64::consts::PI;

    fn bank() -> WaveletFilterBank {
        design_filterbank(8, 4, 16_000.0).unwrap()
    }

    fn noise(n: usize, seed: u64) -> AudioClip {
        let mut rng = SeededRng::new(seed);
        AudioClip::new((0..n).map(|_| 0.4 * rng.uniform_signed()).collect(), 16_000).unwrap()
    }

    #[test]
    fn zero_signal_zero_nodes() {
        let clip = AudioClip::new(vec![0.0; 2048], 16_000).unwrap();
        let nodes = scatter_layer1(&clip, &bank()).unwrap();
        assert_eq!(nodes.len(), bank().num_rows());
        for node in &nodes {
            assert!(node.signal.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn tone_excites_matching_band() {
        let fb = bank();
        // Pick band 10's center and check it wins the energy race.
        let f0 = fb.center_hz(10);
        let clip = AudioClip::new(
            (0..4096)
                .map(|t| (2.0 * PI * f0 * t as f64 / 16_000.0).sin())
                .collect(),
            16_000,
        )
        .unwrap();
        let nodes = scatter_layer1(&clip, &fb).unwrap();
        let mut best = 0;
        let mut best_mean = 0.0;
        for (i, node) in nodes.iter().enumerate() {
            if node.lowpass {
                continue;
            }
            let mean = node.signal.iter().sum::<f64>() / node.frames() as f64;
            if mean > best_mean {
                best_mean = mean;
                best = i;
            }
        }
        assert_eq!(best, 10);
    }

    #[test]
    fn layer1_energy_bounded() {
        let fb = bank();
        for seed in 0..5 {
            let clip = noise(2048, seed);
            let nodes = scatter_layer1(&clip, &fb).unwrap();
            let feat: f64 = nodes
                .iter()
                .map(|n| n.signal.iter().map(|v| v * v).sum::<f64>())
                .sum();
            let sig: f64 = clip.samples().iter().map(|v| v * v).sum();
            assert!(feat <= sig * (1.0 + 1e-9), "seed {seed}: {feat} vs {sig}");
        }
    }

    #[test]
    fn modulus_outputs_nonnegative() {
        let nodes = scatter_layer1(&noise(2048, 3), &bank()).unwrap();
        for node in &nodes {
            if !node.lowpass {
                assert!(node.signal.iter().all(|&v| v >= 0.0));
            }
        }
    }

    #[test]
    fn time_shift_covariance_at_stride() {
        let fb = bank();
        let stride = fb.stride();
        let n = 4096;
        let base = noise(n, 7);
        // Shift right by one stride, keeping length.
        let mut shifted = vec![0.0; n];
        shifted[stride..].copy_from_slice(&base.samples()[..n - stride]);
        let shifted = AudioClip::new(shifted, 16_000).unwrap();

        let a = scatter_layer1(&base, &fb).unwrap();
        let b = scatter_layer1(&shifted, &fb).unwrap();
        let frames = a[0].frames();
        // Interior frames away from both boundaries.
        let guard = frames / 4;
        for (na, nb) in a.iter().zip(&b) {
            for t in guard..frames - guard {
                let d = (nb.signal[t] - na.signal[t - 1]).abs();
                let scale = na.signal[t - 1].abs().max(1e-3);
                assert!(d / scale < 1e-6, "row {:?} frame {t}: {d}", na.path);
            }
        }
    }

    #[test]
    fn constant_node_dyadic_refinement() {
        // DC passes the low-pass branch and is annihilated by the wavelet.
        let c = 0.8;
        let node = ScatterNode {
            signal: vec![c; 256],
            stride: 64,
            frame_rate: 250.0,
            path: vec![0],
            moduli: 1,
            lowpass: false,
            center_hz: 1000.0,
        };
        let pair = design_envelope_filterbank(1, 1, 250.0).unwrap();
        let children = scatter_layer2(&[node], &pair).unwrap();
        assert_eq!(children.len(), 2);
        let psi = &children[0];
        let phi = &children[1];
        assert!(!psi.lowpass && phi.lowpass);
        let interior = psi.frames() / 4..3 * psi.frames() / 4;
        for t in interior.clone() {
            assert!(psi.signal[t].abs() < 1e-8 * c, "wavelet leaks DC");
        }
        for t in interior {
            assert!((phi.signal[t] - c).abs() < 0.1 * c, "low-pass drifts from DC");
        }
    }

    #[test]
    fn modulation_rates_land_in_matching_bands() {
        // AM tones at 6 Hz vs 24 Hz produce distinct layer-2 energy
        // profiles peaking at the matching modulation band.
        let fb = bank();
        let fb2 = default_layer2_bank(&fb, 6).unwrap();
        let carrier = fb.center_hz(5);
        let mut peaks = Vec::new();
        for &rate in &[6.0f64, 24.0] {
            let clip = AudioClip::new(
                (0..16_384)
                    .map(|t| {
                        let s = t as f64 / 16_000.0;
                        (1.0 + 0.95 * (2.0 * PI * rate * s).cos())
                            * (2.0 * PI * carrier * s).sin()
                    })
                    .collect(),
                16_000,
            )
            .unwrap();
            let l1 = scatter_layer1(&clip, &fb).unwrap();
            let l2 = scatter_layer2(&l1, &fb2).unwrap();
            // Energy per modulation band for the carrier's parent node.
            let mut best_band = 0;
            let mut best_energy = 0.0;
            for node in l2.iter().filter(|n| n.path[0] == 5 && !n.lowpass) {
                let e: f64 = node.signal.iter().map(|v| v * v).sum();
                if e > best_energy {
                    best_energy = e;
                    best_band = node.path[1];
                }
            }
            peaks.push(best_band);
        }
        assert_ne!(peaks[0], peaks[1], "modulation rates indistinguishable");
        // Faster modulation sits in a higher-frequency (lower-index) band.
        assert!(peaks[1] < peaks[0]);
    }

    #[test]
    fn pyramid_depth_one_is_layer_one() {
        let clip = noise(2048, 1);
        let fb = bank();
        let p = scatter_pyramid(&clip, &fb, 1).unwrap();
        assert_eq!(p.layers.len(), 1);
        assert_eq!(p.layers[0], scatter_layer1(&clip, &fb).unwrap());
    }

    #[test]
    fn pyramid_strides_double_and_mmax_holds() {
        let clip = noise(8192, 2);
        let fb = bank();
        let p = scatter_pyramid(&clip, &fb, 4).unwrap();
        for (k, layer) in p.layers.iter().enumerate() {
            let want = p.base_stride << k;
            for node in layer {
                assert_eq!(node.stride, want);
                assert!(node.moduli <= M_MAX);
            }
        }
        // Dropped high-order paths: layer k+1 stops doubling once m_max
        // saturates.
        let l1 = p.layers[0].len();
        assert_eq!(p.layers[1].len(), 2 * l1);
        assert!(p.layers[2].len() < 2 * p.layers[1].len());
    }

    #[test]
    fn layer_distances_contract() {
        let fb = bank();
        for seed in 0..3 {
            let a = noise(4096, 100 + seed);
            let b = noise(4096, 200 + seed);
            let pa = scatter_pyramid(&a, &fb, 2).unwrap();
            let pb = scatter_pyramid(&b, &fb, 2).unwrap();
            let d0: f64 = a
                .samples()
                .iter()
                .zip(b.samples())
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            let d1 = node_set_distance_sq(&pa.layers[0], &pb.layers[0]);
            let d2 = node_set_distance_sq(&pa.layers[1], &pb.layers[1]);
            let tol = 1.0 + 1e-6;
            assert!(
                d1.sqrt() <= d0.sqrt() * tol,
                "layer1: {} vs {}",
                d1.sqrt(),
                d0.sqrt()
            );
            assert!(
                d2.sqrt() <= d1.sqrt() * tol,
                "layer2: {} vs {}",
                d2.sqrt(),
                d1.sqrt()
            );
        }
    }

    #[test]
    fn feature_map_clamps_lowpass_rows() {
        let nodes = scatter_layer1(&noise(2048, 5), &bank()).unwrap();
        let fm = nodes_to_feature_map(&nodes, 1, 16_000, true).unwrap();
        assert_eq!(fm.rows(), bank().num_rows());
        for i in 0..fm.rows() {
            for t in 0..fm.frames() {
                assert!(fm.values.get(i, t) >= 0.0);
            }
        }
    }

    #[test]
    fn rejects_wrong_rate_clip() {
        let clip = AudioClip::new(vec![0.1; 2048], 8_000).unwrap();
        assert!(scatter_layer1(&clip, &bank()).is_err());
    }
}
