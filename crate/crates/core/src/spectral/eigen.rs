//! Eigenvalues of dense real symmetric matrices.
//!
//! Two solvers: cyclic Jacobi rotations, which carry a direct residual
//! certificate (the off-diagonal Frobenius norm), and Householder
//! tridiagonalisation followed by implicit QL, which is roughly an order
//! of magnitude faster at the dimensions of the larger photon sectors.

use super::matrix::SymmetricMatrix;
use crate::{Error, Result};

/// Jacobi stops once `‖offdiag(A)‖_F <= JACOBI_TOLERANCE · ‖A‖_F`.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;
const QL_MAX_ITERATIONS: usize = 60;

/// Matrices up to this size go through Jacobi in [`eigenvalues_symmetric`].
pub const JACOBI_MAX_DIM: usize = 160;

/// Eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    fn from_unsorted(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Spectrum { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Jacobi,
    TridiagonalQl,
}

fn validate(a: &SymmetricMatrix) -> Result<()> {
    if a.dim() == 0 {
        return Err(Error::invalid("eigenvalues of an empty matrix"));
    }
    if (0..a.dim()).any(|i| a.row(i).iter().any(|x| !x.is_finite())) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    Ok(())
}

/// Eigenvalues of `a`, descending. Small matrices use Jacobi, larger ones
/// the tridiagonal QL solver; diagonal matrices are read off directly.
pub fn eigenvalues_symmetric(a: &SymmetricMatrix) -> Result<Spectrum> {
    validate(a)?;
    if a.is_diagonal() {
        return Ok(Spectrum::from_unsorted(a.diagonal()));
    }
    let solver = if a.dim() <= JACOBI_MAX_DIM {
        Solver::Jacobi
    } else {
        Solver::TridiagonalQl
    };
    eigenvalues_with(a, solver)
}

pub fn eigenvalues_with(a: &SymmetricMatrix, solver: Solver) -> Result<Spectrum> {
    validate(a)?;
    match solver {
        Solver::Jacobi => jacobi(a).map(|(s, _)| s),
        Solver::TridiagonalQl => tridiagonal_ql(a),
    }
}

/// Cyclic Jacobi; also returns the final off-diagonal Frobenius norm.
pub fn jacobi(a: &SymmetricMatrix) -> Result<(Spectrum, f64)> {
    validate(a)?;
    let n = a.dim();
    let norm = a.frobenius_norm();
    let mut m = a.clone().into_data();
    let threshold = JACOBI_TOLERANCE * norm;

    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += m[i * n + j] * m[i * n + j];
            }
        }
        (2.0 * s).sqrt()
    };

    let mut off = off_norm(&m);
    let mut sweeps = 0;
    while off > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NumericalFailure {
                what: "Jacobi eigenvalue iteration",
                residual: off / norm,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // Rotate rows p and q, then mirror into the columns.
                let (head, tail) = m.split_at_mut(q * n);
                let row_p = &mut head[p * n..(p + 1) * n];
                let row_q = &mut tail[..n];
                for k in 0..n {
                    let xp = row_p[k];
                    let xq = row_q[k];
                    row_p[k] = c * xp - s * xq;
                    row_q[k] = s * xp + c * xq;
                }
                for k in 0..n {
                    if k != p && k != q {
                        m[k * n + p] = m[p * n + k];
                        m[k * n + q] = m[q * n + k];
                    }
                }
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
            }
        }
        off = off_norm(&m);
    }
    let diag = (0..n).map(|i| m[i * n + i]).collect();
    Ok((Spectrum::from_unsorted(diag), off))
}

/// Householder reduction to tridiagonal form followed by implicit QL with
/// Wilkinson-type shifts.
pub fn tridiagonal_ql(a: &SymmetricMatrix) -> Result<Spectrum> {
    validate(a)?;
    let n = a.dim();
    let (mut d, mut e) = tridiagonalize(a.clone().into_data(), n);
    ql_implicit(&mut d, &mut e)?;
    Ok(Spectrum::from_unsorted(d))
}

/// Returns the diagonal `d` and subdiagonal `e` (with `e[i]` coupling
/// `i - 1` and `i`, `e[0] = 0`). Works on the lower triangle in place.
fn tridiagonalize(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut p = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = a[i * n..i * n + l + 1].iter().map(|x| x.abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;

                // p = A[0..=l, 0..=l] u / h using only the lower triangle, row-wise.
                u[..=l].copy_from_slice(&a[i * n..i * n + l + 1]);
                p[..=l].iter_mut().for_each(|x| *x = 0.0);
                for j in 0..=l {
                    let row = &a[j * n..j * n + j + 1];
                    let uj = u[j];
                    let mut s = 0.0;
                    for k in 0..j {
                        s += row[k] * u[k];
                        p[k] += row[k] * uj;
                    }
                    p[j] += s + row[j] * uj;
                }
                let mut f = 0.0;
                for j in 0..=l {
                    p[j] /= h;
                    f += p[j] * u[j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    p[j] -= hh * u[j];
                }
                for j in 0..=l {
                    let fj = u[j];
                    let gj = p[j];
                    let row = &mut a[j * n..j * n + j + 1];
                    for k in 0..=j {
                        row[k] -= fj * p[k] + gj * u[k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    e[0] = 0.0;
    (d, e)
}

fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    // Couplings below eps * ||T|| deflate even inside blocks of near-zero
    // eigenvalues, where the relative test alone can stall.
    let floor = d
        .iter()
        .zip(e.iter())
        .map(|(x, y)| x.abs() + y.abs())
        .fold(0.0, f64::max);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs() + floor;
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == QL_MAX_ITERATIONS {
                return Err(Error::NumericalFailure {
                    what: "tridiagonal QL iteration",
                    residual: e[l].abs(),
                });
            }
            iter += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
