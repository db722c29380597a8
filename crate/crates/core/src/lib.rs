//! Holevo information of pulse-position-modulated coherent light whose
//! optical phase diffuses between consecutive time bins.
//!
//! A block of `L` time bins carries one coherent pulse per bin, prepared in
//! one of `M` orthogonal modes. Phase diffusion of strength `κ` damps every
//! Fock-basis coherence by `exp(-κ λ)`, where `λ` depends only on the two
//! photon occupation patterns. Because the random overall phase separates
//! photon-number sectors, the Holevo quantity is a Poisson mixture of
//! per-sector contributions `X^(N)(L, κ)`, each computed here from dense
//! eigenvalue problems.
//!
//! Modules, bottom-up:
//!
//! - [`enumeration`]: compositions, sector bases and their dimensions.
//! - [`channel`]: the diffusion kernel and the dephasing exponent.
//! - [`spectral`]: symmetric eigenvalues, entropies, Toeplitz matrices and
//!   the Szegő limit.
//! - [`sectors`]: per-sector density matrices and `X^(N)`.
//! - [`analysis`]: Poisson totals, the linear bound, baselines, the
//!   multiphoton inequality check and the photon-splitting comparison.

pub mod analysis;
pub mod channel;
pub mod enumeration;
mod error;
pub mod sectors;
pub mod spectral;

pub use channel::DiffusionStrength;
pub use error::{Error, ErrorKind, Result};

/// Default upper bound on the number of rows of any dense matrix we build.
pub const DEFAULT_DIM_CAP: u64 = 5000;

/// Default upper bound on the photon-number truncation of a Poisson sum.
pub const DEFAULT_MAX_PHOTONS: u32 = 64;

/// Resource limits shared by all matrix-building entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub dim_cap: u64,
    pub max_photons: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            dim_cap: DEFAULT_DIM_CAP,
            max_photons: DEFAULT_MAX_PHOTONS,
        }
    }
}
