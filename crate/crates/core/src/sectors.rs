//! Per-sector density matrices and the Holevo contribution `X^(N)(L, κ)`.
//!
//! The `N`-photon component of a coded word expands over occupation
//! patterns `n` with amplitudes `sqrt(N! / (L^N Π n_l!))`. After dephasing,
//! an individual state has entries `q(n, n') = a_n a_n' exp(-κ λ(n, n'))`
//! and its spectrum does not depend on the word. The average state lives
//! on labels `(n; μ)`: an entry is `q(n, n') M^{-k(n+n')}` when the two
//! symbol assignments agree on every bin occupied in both patterns, and
//! zero otherwise.
//!
//! The one-photon sector also has a closed route through the eigenvalues
//! of the Toeplitz matrix `T_{ll'} = exp(-κ|l - l'|)`; [`chi1_exact`] takes
//! that route and is cross-checked against [`sector_chi`] with `N = 1`.

use serde::Serialize;

use crate::channel::{dephasing_factor, suffix_square_sum, DephasingExponent, DiffusionStrength};
use crate::enumeration::{
    average_dim, build_average_basis, check_cap, compositions, individual_dim, OccupationPattern,
    SectorBasis,
};
use crate::spectral::{
    eigenvalues_symmetric, szego_closed_form, toeplitz, xlog2x, DensityMatrix, SymmetricMatrix,
    PSD_TOLERANCE,
};
use crate::{Error, Limits, Result};

/// Slack allowed on `0 <= X^(N) <= L log₂ M`.
pub const CHI_TOLERANCE: f64 = 1e-9;

fn check_shape(photons: u32, bins: usize, symbols: u32) -> Result<()> {
    if bins == 0 {
        return Err(Error::invalid("need at least one time bin"));
    }
    if symbols < 2 {
        return Err(Error::invalid("need at least two symbols"));
    }
    if photons > 170 {
        return Err(Error::invalid("photon numbers above 170 overflow N!"));
    }
    Ok(())
}

fn ln_factorials(n: u32) -> Vec<f64> {
    let mut table = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for k in 1..=n {
        acc += f64::from(k).ln();
        table.push(acc);
    }
    table
}

/// Amplitude of each pattern in the `N`-photon component of a word.
pub fn pattern_amplitudes(patterns: &[OccupationPattern], photons: u32, bins: usize) -> Vec<f64> {
    let lf = ln_factorials(photons);
    let base = lf[photons as usize] - f64::from(photons) * (bins as f64).ln();
    patterns
        .iter()
        .map(|p| {
            let denom: f64 = p.counts().iter().map(|&c| lf[c as usize]).sum();
            (0.5 * (base - denom)).exp()
        })
        .collect()
}

/// Dephased individual `N`-photon state over `compositions(N, L)`.
pub fn individual_matrix(
    photons: u32,
    bins: usize,
    kappa: DiffusionStrength,
    limits: &Limits,
) -> Result<DensityMatrix> {
    if photons == 0 || bins == 0 {
        return Err(Error::invalid("individual_matrix needs N >= 1 and L >= 1"));
    }
    let dim = individual_dim(photons, bins)?;
    check_cap(
        format!("individual state (N={photons}, L={bins})"),
        dim,
        limits,
    )?;
    let patterns = compositions(photons, bins)?;
    let amp = pattern_amplitudes(&patterns, photons, bins);
    let m = SymmetricMatrix::from_upper_fn(patterns.len(), |i, j| {
        let lambda = suffix_square_sum(patterns[i].counts(), patterns[j].counts());
        amp[i] * amp[j] * dephasing_factor(DephasingExponent(lambda), kappa)
    });
    DensityMatrix::new(m)
}

/// Dephased average `N`-photon state over `basis`.
pub fn average_matrix_in(basis: &SectorBasis, kappa: DiffusionStrength) -> Result<DensityMatrix> {
    let photons = basis.photons();
    let bins = basis.bins();
    let symbols = f64::from(basis.symbols());
    let patterns = basis.patterns();
    let amp = pattern_amplitudes(patterns, photons, bins);

    // Pattern-pair coefficient q(n, n') M^{-k(n + n')}.
    let np = patterns.len();
    let mut pair = vec![0.0; np * np];
    for a in 0..np {
        for b in a..np {
            let (na, nb) = (patterns[a].counts(), patterns[b].counts());
            let lambda = suffix_square_sum(na, nb);
            let union = na.iter().zip(nb).filter(|(&x, &y)| x + y > 0).count();
            let v = amp[a]
                * amp[b]
                * dephasing_factor(DephasingExponent(lambda), kappa)
                * symbols.powi(-(union as i32));
            pair[a * np + b] = v;
            pair[b * np + a] = v;
        }
    }

    let entries = basis.entries();
    let m = SymmetricMatrix::from_upper_fn(entries.len(), |i, j| {
        let (ei, ej) = (&entries[i], &entries[j]);
        let v = pair[ei.pattern * np + ej.pattern];
        if v == 0.0 {
            return 0.0;
        }
        let agree = ei
            .bin_symbols
            .iter()
            .zip(&ej.bin_symbols)
            .all(|(&s, &t)| s == 0 || t == 0 || s == t);
        if agree {
            v
        } else {
            0.0
        }
    });
    DensityMatrix::new(m)
}

/// Dephased average `N`-photon state over `build_average_basis(N, L, M)`.
pub fn average_matrix(
    photons: u32,
    bins: usize,
    symbols: u32,
    kappa: DiffusionStrength,
    limits: &Limits,
) -> Result<DensityMatrix> {
    check_shape(photons, bins, symbols)?;
    let basis = build_average_basis(photons, bins, symbols, limits)?;
    average_matrix_in(&basis, kappa)
}

/// Dephased state of one specific word, embedded in the average basis.
/// Its spectrum matches [`individual_matrix`] for every word.
pub fn word_matrix_in(
    basis: &SectorBasis,
    word: &[u32],
    kappa: DiffusionStrength,
) -> Result<DensityMatrix> {
    let bins = basis.bins();
    if word.len() != bins || word.iter().any(|&s| s == 0 || s > basis.symbols()) {
        return Err(Error::invalid("word must carry one valid symbol per bin"));
    }
    let photons = basis.photons();
    let amp = pattern_amplitudes(basis.patterns(), photons, bins);
    let on_word: Vec<bool> = basis
        .entries()
        .iter()
        .map(|e| {
            e.bin_symbols
                .iter()
                .zip(word)
                .all(|(&s, &w)| s == 0 || s == w)
        })
        .collect();
    let entries = basis.entries();
    let patterns = basis.patterns();
    let m = SymmetricMatrix::from_upper_fn(entries.len(), |i, j| {
        if !(on_word[i] && on_word[j]) {
            return 0.0;
        }
        let (pi, pj) = (entries[i].pattern, entries[j].pattern);
        let lambda = suffix_square_sum(patterns[pi].counts(), patterns[pj].counts());
        amp[pi] * amp[pj] * dephasing_factor(DephasingExponent(lambda), kappa)
    });
    DensityMatrix::new(m)
}

/// Both dephased states of a sector.
#[derive(Debug, Clone)]
pub struct SectorMatrices {
    pub photons: u32,
    pub bins: usize,
    pub symbols: u32,
    pub kappa: DiffusionStrength,
    pub individual: DensityMatrix,
    pub average: DensityMatrix,
}

pub fn sector_matrices(
    photons: u32,
    bins: usize,
    symbols: u32,
    kappa: DiffusionStrength,
    limits: &Limits,
) -> Result<SectorMatrices> {
    check_shape(photons, bins, symbols)?;
    Ok(SectorMatrices {
        photons,
        bins,
        symbols,
        kappa,
        individual: individual_matrix(photons, bins, kappa, limits)?,
        average: average_matrix(photons, bins, symbols, kappa, limits)?,
    })
}

/// `X^(N)(L, κ)` with the two entropies behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorContribution {
    #[serde(rename = "N")]
    pub photons: u32,
    #[serde(rename = "L")]
    pub bins: usize,
    #[serde(rename = "M")]
    pub symbols: u32,
    pub kappa: DiffusionStrength,
    pub dim_individual: u64,
    pub dim_average: u64,
    #[serde(rename = "S_individual")]
    pub entropy_individual: f64,
    #[serde(rename = "S_average")]
    pub entropy_average: f64,
    pub chi: f64,
    #[serde(skip)]
    pub diagnostics: SectorDiagnostics,
}

/// Trace and smallest eigenvalue of both matrices, before clamping.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SectorDiagnostics {
    pub trace_individual: f64,
    pub trace_average: f64,
    pub min_eigenvalue_individual: f64,
    pub min_eigenvalue_average: f64,
}

impl SectorContribution {
    fn vacuum(bins: usize, symbols: u32, kappa: DiffusionStrength) -> Self {
        SectorContribution {
            photons: 0,
            bins,
            symbols,
            kappa,
            dim_individual: 1,
            dim_average: 1,
            entropy_individual: 0.0,
            entropy_average: 0.0,
            chi: 0.0,
            diagnostics: SectorDiagnostics {
                trace_individual: 1.0,
                trace_average: 1.0,
                min_eigenvalue_individual: 1.0,
                min_eigenvalue_average: 1.0,
            },
        }
    }
}

/// `X^(N) = S(average) - S(individual)`; exactly zero for the vacuum.
pub fn sector_chi(
    photons: u32,
    bins: usize,
    symbols: u32,
    kappa: DiffusionStrength,
    limits: &Limits,
) -> Result<SectorContribution> {
    check_shape(photons, bins, symbols)?;
    if photons == 0 {
        return Ok(SectorContribution::vacuum(bins, symbols, kappa));
    }
    let m = sector_matrices(photons, bins, symbols, kappa, limits)?;
    let ind = m.individual.entropy()?;
    let avg = m.average.entropy()?;
    let chi = avg.bits - ind.bits;
    let ceiling = bins as f64 * f64::from(symbols).log2();
    if chi < -CHI_TOLERANCE || chi > ceiling + CHI_TOLERANCE {
        return Err(Error::NumericalFailure {
            what: "sector Holevo quantity outside [0, L log2 M]",
            residual: chi,
        });
    }
    Ok(SectorContribution {
        photons,
        bins,
        symbols,
        kappa,
        dim_individual: individual_dim(photons, bins)?,
        dim_average: average_dim(photons, bins, symbols)?,
        entropy_individual: ind.bits,
        entropy_average: avg.bits,
        chi,
        diagnostics: SectorDiagnostics {
            trace_individual: ind.trace,
            trace_average: avg.trace,
            min_eigenvalue_individual: ind.min_eigenvalue,
            min_eigenvalue_average: avg.min_eigenvalue,
        },
    })
}

/// `X^(1)(L, κ) = log₂ M + (M - 1)/(L M) Σ_i h(t_i)` over the eigenvalues
/// `t_i` of the Toeplitz matrix. At `κ = 0` the matrix is all ones with the
/// single nonzero eigenvalue `L`, which is used directly.
pub fn chi1_exact(bins: usize, symbols: u32, kappa: DiffusionStrength) -> Result<f64> {
    check_shape(1, bins, symbols)?;
    let m = f64::from(symbols);
    let l = bins as f64;
    let weight = (m - 1.0) / m;
    if kappa.is_zero() {
        return Ok(m.log2() + weight * l.log2());
    }
    if kappa.is_infinite() {
        return Ok(m.log2());
    }
    let spectrum = eigenvalues_symmetric(&toeplitz(bins, kappa))?;
    let mut sum = 0.0;
    for &t in spectrum.eigenvalues() {
        if t < -PSD_TOLERANCE * l {
            return Err(Error::PsdViolation { eigenvalue: t });
        }
        sum += xlog2x(t.max(0.0));
    }
    Ok(m.log2() + weight * sum / l)
}

/// Large-`L` limit `log₂ M - (M - 1)/M · log₂(1 - e^{-2κ})`; diverges at `κ = 0`.
pub fn chi1_asymptotic(symbols: u32, kappa: DiffusionStrength) -> Result<f64> {
    check_shape(1, 1, symbols)?;
    if kappa.is_zero() {
        return Err(Error::invalid(
            "the one-photon asymptote diverges at kappa = 0",
        ));
    }
    let m = f64::from(symbols);
    if kappa.is_infinite() {
        return Ok(m.log2());
    }
    Ok(m.log2() + (m - 1.0) / m * szego_closed_form(kappa)?)
}
