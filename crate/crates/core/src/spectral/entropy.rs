use super::eigen::{eigenvalues_symmetric, Spectrum};
use super::matrix::SymmetricMatrix;
use crate::{Error, Result};

/// Eigenvalues in `[-PSD_TOLERANCE, 0)` are roundoff and count as zero.
pub const PSD_TOLERANCE: f64 = 1e-10;
/// Allowed deviation of a distribution's sum from one.
pub const SUM_TOLERANCE: f64 = 1e-8;
/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOLERANCE: f64 = 1e-10;

/// `h(x) = x log₂ x` with `h(0) = 0`.
pub fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Binary entropy `H(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    -xlog2x(p) - xlog2x(1.0 - p)
}

/// Shannon entropy in bits of a probability vector (or of a density
/// matrix spectrum), with small negative roundoff clamped to zero.
pub fn entropy_bits(p: &[f64]) -> Result<f64> {
    let sum: f64 = p.iter().sum();
    if !sum.is_finite() || (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidDistribution { sum });
    }
    let mut h = 0.0;
    for &x in p {
        if x < -PSD_TOLERANCE {
            return Err(Error::PsdViolation { eigenvalue: x });
        }
        if x > 0.0 {
            h -= x * x.log2();
        }
    }
    Ok(h.max(0.0))
}

/// Unit-trace real symmetric matrix, checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: SymmetricMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: SymmetricMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if !tr.is_finite() || (tr - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidDistribution { sum: tr });
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn matrix(&self) -> &SymmetricMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> SymmetricMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        eigenvalues_symmetric(&self.matrix)
    }

    /// Von Neumann entropy and the spectrum it was computed from.
    pub fn entropy(&self) -> Result<EntropyResult> {
        let spectrum = self.spectrum()?;
        let bits = entropy_bits(spectrum.eigenvalues())?;
        Ok(EntropyResult {
            bits,
            min_eigenvalue: spectrum.min(),
            trace: self.trace(),
        })
    }
}

/// Entropy together with the diagnostics of the spectrum behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyResult {
    pub bits: f64,
    pub min_eigenvalue: f64,
    pub trace: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn named_entropies() {
        assert_eq!(entropy_bits(&[0.5, 0.5]).unwrap(), 1.0);
        assert_eq!(entropy_bits(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        let h = entropy_bits(&[0.75, 0.25]).unwrap();
        assert!((h - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert!((binary_entropy(0.25) - h).abs() < 1e-15);
    }

    #[test]
    fn clamping_and_errors() {
        assert!(entropy_bits(&[1.0 + 5e-11, -5e-11]).is_ok());
        assert!(matches!(
            entropy_bits(&[1.0 + 1e-9, -1e-9]),
            Err(Error::PsdViolation { .. })
        ));
        assert!(matches!(
            entropy_bits(&[0.5, 0.4]),
            Err(Error::InvalidDistribution { .. })
        ));
        assert!(DensityMatrix::new(SymmetricMatrix::identity(2)).is_err());
        let rho = DensityMatrix::new(SymmetricMatrix::identity(4).scaled(0.25)).unwrap();
        assert!((rho.entropy().unwrap().bits - 2.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn permutation_invariant_and_bounded(raw in prop::collection::vec(0.0f64..1.0, 1..12), seed in 0usize..100) {
            let total: f64 = raw.iter().sum();
            prop_assume!(total > 1e-6);
            let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let mut q = p.clone();
            q.rotate_left(seed % p.len());
            q.reverse();
            let hp = entropy_bits(&p).unwrap();
            let hq = entropy_bits(&q).unwrap();
            prop_assert!((hp - hq).abs() < 1e-12);
            prop_assert!(hp <= (p.len() as f64).log2() + 1e-12);
            let uniform = vec![1.0 / p.len() as f64; p.len()];
            prop_assert!((entropy_bits(&uniform).unwrap() - (p.len() as f64).log2()).abs() < 1e-12);
        }
    }
}
