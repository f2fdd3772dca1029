//! Spectral decimation: the spectrum of `P_n` from `P_1` alone.

pub mod classify;
pub mod schur;
pub mod spectrum;

pub use classify::{classify_exceptional, ExceptionalClass, Item};
pub use schur::{schur_extract, DecimationData};
pub use spectrum::{
    charpoly_check, charpoly_check_with, spectrum, Origin, SpectralClass, SpectralMultiset, SpectrumEngine,
    SpectrumJson, TrackedClass,
};
