//! Monaural source-separation core: multi-resolution wavelet scattering
//! front-ends, sparse NMF and neural mask regression, mask-based phase
//! recovery, and separation metrics.
//!
//! Everything in this crate is pure computation on in-memory buffers; file
//! formats, WAV handling and the CLI live in the `scatsep` companion crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod audio;
pub mod bss;
pub mod error;
pub mod fft;
pub mod features;
pub mod filterbank;
pub mod haar;
pub mod mask;
pub mod mat;
pub mod neural;
pub mod nmf;
pub mod phase;
pub mod resample;
pub mod rng;
pub mod scattering;
pub mod stft;

pub use error::{Error, Result};
