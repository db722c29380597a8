//! Dense symmetric linear algebra, entropies, and the Toeplitz/Szegő
//! machinery of the one-photon sector. Everything is real: with a real
//! pulse amplitude no complex number ever appears in these matrices.

pub mod eigen;
mod entropy;
mod matrix;
pub mod quadrature;
mod toeplitz;

pub use eigen::{eigenvalues_symmetric, Spectrum};
pub use entropy::{
    binary_entropy, entropy_bits, xlog2x, DensityMatrix, EntropyResult, PSD_TOLERANCE,
    SUM_TOLERANCE, TRACE_TOLERANCE,
};
pub use matrix::SymmetricMatrix;
pub use toeplitz::{
    szego_closed_form, szego_entropy_integral, szego_symbol, toeplitz, SzegoIntegral,
};
