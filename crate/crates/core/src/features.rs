//! Time-frequency feature containers shared by the front-ends and models.

use alloc::vec::Vec;

use crate::mat::Mat;

/// Pyramid level tags used across feature maps and model files.
pub mod level {
    pub const STFT: u32 = 0;
    pub const SCATTER_1: u32 = 1;
    pub const SCATTER_2: u32 = 2;
    pub const HAAR: u32 = 3;
}

/// What one feature row means.
#[derive(Debug, Clone, PartialEq)]
pub enum BinLabel {
    /// Center frequency in Hz.
    Freq(f64),
    /// Scattering path: the sequence of filter indices traversed.
    Path(Vec<u32>),
}

/// Shape/grid summary used for compatibility checks and serialization
/// headers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureDescriptor {
    pub level: u32,
    pub rows: usize,
    /// Samples advanced per frame, at the original audio rate.
    pub stride: usize,
    pub sample_rate: u32,
}

/// A (bins x frames) feature matrix at a declared temporal resolution.
///
/// Values are non-negative for modulus-type features (STFT magnitude,
/// scattering bands); low-pass and Haar rows may be signed.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    pub values: Mat,
    pub level: u32,
    pub stride: usize,
    pub sample_rate: u32,
    pub bin_labels: Vec<BinLabel>,
}

impl FeatureMap {
    pub fn rows(&self) -> usize {
        self.values.rows()
    }

    pub fn frames(&self) -> usize {
        self.values.cols()
    }

    pub fn descriptor(&self) -> FeatureDescriptor {
        FeatureDescriptor {
            level: self.level,
            rows: self.rows(),
            stride: self.stride,
            sample_rate: self.sample_rate,
        }
    }
}
