//! Phase diffusion between consecutive time bins.
//!
//! The relative phase of neighbouring bins is drawn from a wrapped Gaussian
//! whose `m`-th Fourier coefficient is `exp(-κ m²)`. In the Fock basis the
//! resulting map multiplies `|n⟩⟨n'|` by `exp(-κ λ(n, n'))`, so nothing in
//! this crate ever integrates over phases: [`kernel_density`] exists only to
//! validate the Fourier identity.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::enumeration::OccupationPattern;
use crate::{Error, Result};

/// Default truncation tolerance for the kernel's cosine series.
pub const KERNEL_TOLERANCE: f64 = 1e-16;

/// Diffusion strength `κ`, with complete dephasing as an explicit value
/// rather than a large float.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DiffusionStrength(Repr);

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
enum Repr {
    Finite(f64),
    Infinite,
}

impl DiffusionStrength {
    /// Perfect phase coherence, `κ = 0`.
    pub const ZERO: DiffusionStrength = DiffusionStrength(Repr::Finite(0.0));
    /// Complete dephasing, `κ → ∞`.
    pub const INFINITE: DiffusionStrength = DiffusionStrength(Repr::Infinite);

    /// `f64::INFINITY` maps to [`Self::INFINITE`]; negative or NaN values are rejected.
    pub fn new(kappa: f64) -> Result<Self> {
        if kappa.is_nan() || kappa < 0.0 {
            return Err(Error::invalid(format!("kappa must be >= 0, got {kappa}")));
        }
        if kappa.is_infinite() {
            Ok(Self::INFINITE)
        } else {
            Ok(DiffusionStrength(Repr::Finite(kappa)))
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Finite(k) if k == 0.0)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.0, Repr::Infinite)
    }

    /// The finite value, or `None` for complete dephasing.
    pub fn finite(&self) -> Option<f64> {
        match self.0 {
            Repr::Finite(k) => Some(k),
            Repr::Infinite => None,
        }
    }

    /// `κ` as a float, `f64::INFINITY` for complete dephasing.
    pub fn value(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// Coherence time `1/κ` in time bins (infinite at `κ = 0`, zero at `κ = ∞`).
    pub fn coherence_time(&self) -> f64 {
        match self.0 {
            Repr::Finite(k) if k == 0.0 => f64::INFINITY,
            Repr::Finite(k) => 1.0 / k,
            Repr::Infinite => 0.0,
        }
    }

    /// `exp(-κ)`, exactly 0 at `κ = ∞`.
    pub fn decay(&self) -> f64 {
        match self.0 {
            Repr::Finite(k) => (-k).exp(),
            Repr::Infinite => 0.0,
        }
    }
}

impl fmt::Display for DiffusionStrength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Repr::Finite(k) => write!(f, "{k}"),
            Repr::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for DiffusionStrength {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Self::INFINITE),
            _ => {
                let v: f64 = t
                    .parse()
                    .map_err(|_| Error::invalid(format!("cannot parse kappa {s:?}")))?;
                if v.is_infinite() {
                    return Err(Error::invalid("write complete dephasing as \"inf\""));
                }
                Self::new(v)
            }
        }
    }
}

/// Serialized as a number, or the string `"inf"` for complete dephasing.
impl Serialize for DiffusionStrength {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Repr::Finite(k) => serializer.serialize_f64(k),
            Repr::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Integer exponent `λ(n, n')` of the dephasing factor `exp(-κ λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DephasingExponent(pub u64);

/// Wrapped-Gaussian phase kernel
/// `p(φ) = (1/2π)(1 + 2 Σ_{n≥1} cos(nφ) exp(-κ n²))`.
///
/// The series stops once `exp(-κ n²)` drops below `tolerance`. At `κ = 0`
/// the kernel is a Dirac delta and is rejected.
pub fn kernel_density(phi: f64, kappa: DiffusionStrength, tolerance: f64) -> Result<f64> {
    let k = match kappa.finite() {
        None => return Ok(1.0 / (2.0 * PI)),
        Some(k) if k == 0.0 => {
            return Err(Error::invalid(
                "the diffusion kernel at kappa = 0 is a Dirac delta",
            ))
        }
        Some(k) => k,
    };
    if !(tolerance > 0.0) {
        return Err(Error::invalid("kernel tolerance must be positive"));
    }
    let mut sum = 1.0;
    let mut n = 1.0_f64;
    loop {
        let w = (-k * n * n).exp();
        if w < tolerance {
            break;
        }
        sum += 2.0 * (n * phi).cos() * w;
        n += 1.0;
    }
    Ok(sum / (2.0 * PI))
}

fn check_pair(n: &OccupationPattern, n_prime: &OccupationPattern) -> Result<()> {
    if n.bins() != n_prime.bins() {
        return Err(Error::invalid(format!(
            "patterns {n} and {n_prime} have different lengths"
        )));
    }
    if n.total() != n_prime.total() {
        return Err(Error::invalid(format!(
            "patterns {n} and {n_prime} hold different photon numbers"
        )));
    }
    Ok(())
}

/// `λ(n, n') = Σ_{l=2}^{L} (Σ_{j≥l} (n_j - n'_j))²` for equal-total patterns.
pub fn dephasing_exponent(
    n: &OccupationPattern,
    n_prime: &OccupationPattern,
) -> Result<DephasingExponent> {
    check_pair(n, n_prime)?;
    Ok(DephasingExponent(suffix_square_sum(
        n.counts(),
        n_prime.counts(),
    )))
}

/// Unchecked core of [`dephasing_exponent`], used in matrix assembly loops.
pub(crate) fn suffix_square_sum(n: &[u32], n_prime: &[u32]) -> u64 {
    let mut suffix: i64 = 0;
    let mut acc: u64 = 0;
    for l in (1..n.len()).rev() {
        suffix += i64::from(n[l]) - i64::from(n_prime[l]);
        acc += (suffix * suffix) as u64;
    }
    acc
}

/// `exp(-κ λ)`: 1 whenever `λ = 0` or `κ = 0`, exactly 0 at `κ = ∞` with `λ > 0`.
pub fn dephasing_factor(lambda: DephasingExponent, kappa: DiffusionStrength) -> f64 {
    if lambda.0 == 0 {
        return 1.0;
    }
    match kappa.finite() {
        None => 0.0,
        Some(k) if k == 0.0 => 1.0,
        Some(k) => (-k * lambda.0 as f64).exp(),
    }
}

#[cfg(test)]
pub(crate) mod oracle {
    /// `λ = -Σ_{i<j} (j - i)(n_i - n'_i)(n_j - n'_j)`.
    pub fn double_sum(n: &[u32], n_prime: &[u32]) -> i64 {
        let d: Vec<i64> = n
            .iter()
            .zip(n_prime)
            .map(|(&a, &b)| i64::from(a) - i64::from(b))
            .collect();
        let mut acc = 0;
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                acc -= (j - i) as i64 * d[i] * d[j];
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::compositions;
    use crate::spectral::quadrature::integrate_periodic;

    fn pat(c: &[u32]) -> OccupationPattern {
        OccupationPattern::new(c.to_vec()).unwrap()
    }

    #[test]
    fn named_exponents() {
        assert_eq!(
            dephasing_exponent(&pat(&[1, 0]), &pat(&[0, 1])).unwrap().0,
            1
        );
        assert_eq!(
            dephasing_exponent(&pat(&[2, 0]), &pat(&[0, 2])).unwrap().0,
            4
        );
        assert_eq!(
            dephasing_exponent(&pat(&[1, 2, 0]), &pat(&[1, 2, 0]))
                .unwrap()
                .0,
            0
        );
    }

    #[test]
    fn unequal_totals_rejected() {
        let err = dephasing_exponent(&pat(&[1, 0]), &pat(&[1, 1])).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
        assert!(dephasing_exponent(&pat(&[1, 0]), &pat(&[0, 0, 1])).is_err());
    }

    #[test]
    fn exhaustive_symmetry_and_two_forms_agree() {
        for l in 1..=6 {
            for n in 0..=5 {
                let pats = compositions(n, l).unwrap();
                for a in &pats {
                    for b in &pats {
                        let ab = dephasing_exponent(a, b).unwrap().0;
                        let ba = dephasing_exponent(b, a).unwrap().0;
                        assert_eq!(ab, ba);
                        assert_eq!(ab as i64, oracle::double_sum(a.counts(), b.counts()));
                        assert_eq!(ab == 0, a == b, "{a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn one_photon_exponent_is_bin_distance() {
        for l in 1..=10 {
            for i in 0..l {
                for j in 0..l {
                    let mut a = vec![0; l];
                    let mut b = vec![0; l];
                    a[i] = 1;
                    b[j] = 1;
                    let lambda = dephasing_exponent(&pat(&a), &pat(&b)).unwrap().0;
                    assert_eq!(lambda, i.abs_diff(j) as u64);
                }
            }
        }
    }

    #[test]
    fn factors() {
        let k = DiffusionStrength::new(3.7).unwrap();
        assert_eq!(dephasing_factor(DephasingExponent(0), k), 1.0);
        assert_eq!(
            dephasing_factor(DephasingExponent(4), DiffusionStrength::INFINITE),
            0.0
        );
        assert_eq!(
            dephasing_factor(DephasingExponent(0), DiffusionStrength::INFINITE),
            1.0
        );
        assert_eq!(
            dephasing_factor(DephasingExponent(9), DiffusionStrength::ZERO),
            1.0
        );
        let one = DiffusionStrength::new(1.0).unwrap();
        assert!((dephasing_factor(DephasingExponent(1), one) - 0.367879441171).abs() < 1e-12);
    }

    #[test]
    fn strength_parsing_and_limits() {
        assert!("inf".parse::<DiffusionStrength>().unwrap().is_infinite());
        assert!("0".parse::<DiffusionStrength>().unwrap().is_zero());
        assert_eq!("0.5".parse::<DiffusionStrength>().unwrap().value(), 0.5);
        assert!("-1".parse::<DiffusionStrength>().is_err());
        assert!("1e999".parse::<DiffusionStrength>().is_err());
        assert!(DiffusionStrength::new(f64::NAN).is_err());
        assert_eq!(DiffusionStrength::new(4.0).unwrap().coherence_time(), 0.25);
        assert_eq!(DiffusionStrength::ZERO.coherence_time(), f64::INFINITY);
        assert_eq!(DiffusionStrength::INFINITE.decay(), 0.0);
    }

    #[test]
    fn kernel_limits() {
        let flat = kernel_density(1.3, DiffusionStrength::INFINITE, KERNEL_TOLERANCE).unwrap();
        assert_eq!(flat, 1.0 / (2.0 * PI));
        assert!(kernel_density(0.0, DiffusionStrength::ZERO, KERNEL_TOLERANCE).is_err());
        for &k in &[0.1, 1.0, 5.0] {
            let kappa = DiffusionStrength::new(k).unwrap();
            for i in 0..50 {
                let phi = -PI + 2.0 * PI * i as f64 / 50.0;
                assert!(kernel_density(phi, kappa, KERNEL_TOLERANCE).unwrap() >= -1e-14);
            }
        }
    }

    #[test]
    fn kernel_fourier_coefficients() {
        let tol = 1e-12;
        for &k in &[0.5, 1.0, 2.0] {
            let kappa = DiffusionStrength::new(k).unwrap();
            for m in 0..=3 {
                let mf = m as f64;
                // The kernel is even, so the sine part of the transform vanishes.
                let re = integrate_periodic(
                    |phi| kernel_density(phi, kappa, KERNEL_TOLERANCE).unwrap() * (mf * phi).cos(),
                    tol,
                )
                .unwrap();
                let im = integrate_periodic(
                    |phi| kernel_density(phi, kappa, KERNEL_TOLERANCE).unwrap() * (mf * phi).sin(),
                    tol,
                )
                .unwrap();
                let expected = (-k * mf * mf).exp();
                assert!(
                    (re - expected).abs() <= 10.0 * tol,
                    "k={k} m={m}: {re} vs {expected}"
                );
                assert!(im.abs() <= 10.0 * tol);
            }
        }
        let kappa = DiffusionStrength::new(1.0).unwrap();
        let c2 = integrate_periodic(
            |phi| kernel_density(phi, kappa, KERNEL_TOLERANCE).unwrap() * (2.0 * phi).cos(),
            tol,
        )
        .unwrap();
        assert!((c2 - (-4.0f64).exp()).abs() < 1e-10);
    }
}
