//! Poisson-weighted totals, the linear bound, the weak-signal baselines, the
//! multiphoton inequality check and the two-photon splitting comparison.
//!
//! `X(L, κ) = Σ_N P_N(L n̄) X^(N)(L, κ)` is truncated at the smallest `N_max`
//! whose sectors carry at least 95% of the mean photon number `L n̄`.

use rayon::prelude::*;
use serde::Serialize;

use crate::enumeration::compositions;
use crate::sectors::{chi1_asymptotic, individual_matrix, sector_chi, SectorContribution};
use crate::spectral::{binary_entropy, toeplitz, DensityMatrix, EntropyResult, SymmetricMatrix};
use crate::{DiffusionStrength, Error, Limits, Result};

/// Share of `L n̄` the retained sectors must carry.
pub const TRUNCATION_MEAN_FRACTION: f64 = 0.95;

/// Margin above which `X^(N) - N X^(1)` counts as a violation.
pub const CONJECTURE_TOLERANCE: f64 = 1e-9;

/// Relative step of the central differences used for baseline slopes.
pub const SLOPE_STEP: f64 = 1e-3;

/// `(L, M, κ, n̄)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    #[serde(rename = "L")]
    pub bins: usize,
    #[serde(rename = "M")]
    pub symbols: u32,
    pub kappa: DiffusionStrength,
    pub n_bar: f64,
}

impl ChannelParams {
    pub fn new(bins: usize, symbols: u32, kappa: DiffusionStrength, n_bar: f64) -> Result<Self> {
        if bins == 0 {
            return Err(Error::invalid("need at least one time bin"));
        }
        if symbols < 2 {
            return Err(Error::invalid("need at least two symbols"));
        }
        check_n_bar(n_bar)?;
        Ok(ChannelParams {
            bins,
            symbols,
            kappa,
            n_bar,
        })
    }

    /// Mean photon number per word, `L n̄`.
    pub fn mean_photons(&self) -> f64 {
        self.bins as f64 * self.n_bar
    }
}

fn check_n_bar(n_bar: f64) -> Result<()> {
    if !(n_bar.is_finite() && n_bar >= 0.0) {
        return Err(Error::invalid(format!(
            "mean photon number must be finite and >= 0, got {n_bar}"
        )));
    }
    Ok(())
}

/// `P_0 .. P_{N_max}` of a Poisson law with mean `mu`.
pub fn poisson_weights(mu: f64, n_max: u32) -> Vec<f64> {
    let mut w = Vec::with_capacity(n_max as usize + 1);
    let mut p = (-mu).exp();
    w.push(p);
    for n in 1..=n_max {
        p *= mu / f64::from(n);
        w.push(p);
    }
    w
}

/// Smallest `N_max` with `Σ_{N <= N_max} N P_N(L n̄) >= 0.95 L n̄`.
pub fn choose_truncation(bins: usize, n_bar: f64, limits: &Limits) -> Result<u32> {
    check_n_bar(n_bar)?;
    let mu = bins as f64 * n_bar;
    if mu == 0.0 {
        return Ok(0);
    }
    let target = TRUNCATION_MEAN_FRACTION * mu;
    let mut p = (-mu).exp();
    let mut acc = 0.0;
    for n in 1..=limits.max_photons {
        p *= mu / f64::from(n);
        acc += f64::from(n) * p;
        if acc >= target {
            return Ok(n);
        }
    }
    Err(Error::ResourceLimit {
        what: format!("photon-number truncation for L*n_bar = {mu}"),
        dim: u64::from(limits.max_photons) + 1,
        cap: u64::from(limits.max_photons),
        hint: "; use a smaller mean photon number",
    })
}

/// Fraction of the mean `mu` carried by sectors `N <= n_max`.
pub fn retained_mean_fraction(mu: f64, n_max: u32) -> f64 {
    if mu == 0.0 {
        return 1.0;
    }
    let w = poisson_weights(mu, n_max);
    w.iter().enumerate().map(|(n, p)| n as f64 * p).sum::<f64>() / mu
}

/// `X^(N)` for `N = 0 ..= n_max`, built once and reused across `n̄`.
#[derive(Debug, Clone)]
pub struct SectorTable {
    pub bins: usize,
    pub symbols: u32,
    pub kappa: DiffusionStrength,
    pub sectors: Vec<SectorContribution>,
}

impl SectorTable {
    pub fn build(
        bins: usize,
        symbols: u32,
        kappa: DiffusionStrength,
        n_max: u32,
        limits: &Limits,
    ) -> Result<Self> {
        if n_max > limits.max_photons {
            return Err(Error::ResourceLimit {
                what: "photon-number truncation".to_string(),
                dim: u64::from(n_max),
                cap: u64::from(limits.max_photons),
                hint: "; use a smaller mean photon number",
            });
        }
        let sectors = (0..=n_max)
            .into_par_iter()
            .map(|n| sector_chi(n, bins, symbols, kappa, limits))
            .collect::<Result<Vec<_>>>()?;
        Ok(SectorTable {
            bins,
            symbols,
            kappa,
            sectors,
        })
    }

    pub fn n_max(&self) -> u32 {
        self.sectors.len() as u32 - 1
    }

    /// Report for `n̄` using every sector in the table.
    pub fn report(&self, n_bar: f64) -> Result<HolevoReport> {
        let params = ChannelParams::new(self.bins, self.symbols, self.kappa, n_bar)?;
        let needed = choose_truncation(
            self.bins,
            n_bar,
            &Limits {
                max_photons: self.n_max().max(1),
                ..Limits::default()
            },
        )
        .map_err(|_| too_large(params, self.n_max()))?;
        if needed > self.n_max() {
            return Err(too_large(params, self.n_max()));
        }
        let mu = params.mean_photons();
        let n_max = self.n_max();
        let weights = poisson_weights(mu, n_max);
        let total_chi: f64 = weights
            .iter()
            .zip(&self.sectors)
            .map(|(w, s)| w * s.chi)
            .sum();
        let linear_bound = if self.kappa.is_zero() {
            None
        } else {
            Some(n_bar * chi1_asymptotic(self.symbols, self.kappa)?)
        };
        Ok(HolevoReport {
            params,
            n_max,
            weights,
            per_sector: self.sectors.clone(),
            total_chi,
            per_use: total_chi / self.bins as f64,
            linear_bound,
            truncated_mass_fraction: retained_mean_fraction(mu, n_max),
        })
    }
}

fn too_large(params: ChannelParams, n_max: u32) -> Error {
    Error::invalid(format!(
        "n_bar = {} needs more than N_max = {n_max} photons to keep 95% of the mean; \
         lower n_bar or raise N_max",
        params.n_bar
    ))
}

/// Truncated Poisson sum of sector contributions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolevoReport {
    pub params: ChannelParams,
    #[serde(rename = "N_max")]
    pub n_max: u32,
    pub weights: Vec<f64>,
    pub per_sector: Vec<SectorContribution>,
    pub total_chi: f64,
    pub per_use: f64,
    /// `n̄ X^(1)_{L→∞}`; absent at `κ = 0`, where it diverges.
    pub linear_bound: Option<f64>,
    /// Fraction of `L n̄` carried by the retained sectors.
    pub truncated_mass_fraction: f64,
}

/// Full report; `n_max` overrides the 95% rule but may not undercut it.
pub fn total_holevo(
    params: ChannelParams,
    n_max: Option<u32>,
    limits: &Limits,
) -> Result<HolevoReport> {
    let params = ChannelParams::new(params.bins, params.symbols, params.kappa, params.n_bar)?;
    let n_max = match n_max {
        Some(n) => n,
        None => choose_truncation(params.bins, params.n_bar, limits)?,
    };
    SectorTable::build(params.bins, params.symbols, params.kappa, n_max, limits)?
        .report(params.n_bar)
}

/// One `(κ, N)` point of the multiphoton inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjecturePoint {
    pub kappa: DiffusionStrength,
    #[serde(rename = "N")]
    pub photons: u32,
    pub chi_n: f64,
    pub n_chi1: f64,
    /// `chi_n - n_chi1`; negative when the inequality holds.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureCheck {
    #[serde(rename = "L")]
    pub bins: usize,
    #[serde(rename = "M")]
    pub symbols: u32,
    pub points: Vec<ConjecturePoint>,
    pub violations: Vec<ConjecturePoint>,
    /// Every sector built, one-photon sectors included.
    #[serde(skip)]
    pub sectors: Vec<SectorContribution>,
}

/// Checks `X^(N) <= N X^(1)` for `2 <= N <= n_max` at each `κ`.
pub fn conjecture_check(
    bins: usize,
    symbols: u32,
    kappas: &[DiffusionStrength],
    n_max: u32,
    limits: &Limits,
) -> Result<ConjectureCheck> {
    let jobs: Vec<(usize, u32)> = (0..kappas.len())
        .flat_map(|k| (1..=n_max.max(1)).map(move |n| (k, n)))
        .collect();
    let sectors = jobs
        .par_iter()
        .map(|&(k, n)| sector_chi(n, bins, symbols, kappas[k], limits))
        .collect::<Result<Vec<_>>>()?;

    let per_kappa = n_max.max(1) as usize;
    let mut points = Vec::new();
    for (k, &kappa) in kappas.iter().enumerate() {
        let row = &sectors[k * per_kappa..(k + 1) * per_kappa];
        let chi1 = row[0].chi;
        for s in &row[1..] {
            let n_chi1 = f64::from(s.photons) * chi1;
            points.push(ConjecturePoint {
                kappa,
                photons: s.photons,
                chi_n: s.chi,
                n_chi1,
                margin: s.chi - n_chi1,
            });
        }
    }
    let violations = points
        .iter()
        .filter(|p| p.margin > CONJECTURE_TOLERANCE)
        .copied()
        .collect();
    Ok(ConjectureCheck {
        bins,
        symbols,
        points,
        violations,
        sectors,
    })
}

/// Single-bin binary baselines at mean photon number `n̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Baselines {
    pub n_bar: f64,
    /// Direct detection: `1 - e^{-n̄}`.
    pub erasure: f64,
    /// `H(½(1 - e^{-n̄}))`.
    pub holevo_binary: f64,
    /// `(n̄/2) log₂(1/n̄)`.
    pub leading_order: f64,
}

pub fn baselines(n_bar: f64) -> Result<Baselines> {
    check_n_bar(n_bar)?;
    let erasure = -(-n_bar).exp_m1();
    let leading_order = if n_bar == 0.0 {
        0.0
    } else {
        -0.5 * n_bar * n_bar.log2()
    };
    Ok(Baselines {
        n_bar,
        erasure,
        holevo_binary: binary_entropy(0.5 * erasure),
        leading_order,
    })
}

/// `d/dn̄` of the erasure and binary-Holevo curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineSlopes {
    pub erasure: f64,
    pub holevo_binary: f64,
}

/// Central differences with step `10⁻³ n̄`. At `n̄ = 0` the exact one-sided
/// values are returned: 1 for erasure and `+∞` for the binary Holevo curve.
pub fn baseline_slopes(n_bar: f64) -> Result<BaselineSlopes> {
    check_n_bar(n_bar)?;
    if n_bar == 0.0 {
        return Ok(BaselineSlopes {
            erasure: 1.0,
            holevo_binary: f64::INFINITY,
        });
    }
    let h = SLOPE_STEP * n_bar;
    let hi = baselines(n_bar + h)?;
    let lo = baselines(n_bar - h)?;
    Ok(BaselineSlopes {
        erasure: (hi.erasure - lo.erasure) / (2.0 * h),
        holevo_binary: (hi.holevo_binary - lo.holevo_binary) / (2.0 * h),
    })
}

/// Entropies of one two-photon model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitModel {
    #[serde(rename = "S_individual")]
    pub entropy_individual: f64,
    #[serde(rename = "S_average")]
    pub entropy_average: f64,
    pub chi2: f64,
}

/// Two photons split into separate paths, dephased independently or
/// collectively.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplittingComparison {
    #[serde(rename = "L")]
    pub bins: usize,
    #[serde(rename = "M")]
    pub symbols: u32,
    pub kappa: DiffusionStrength,
    pub independent: SplitModel,
    pub collective: SplitModel,
    /// One-photon sector value, for the `chi2 <= 2 chi1` comparison.
    pub chi1: f64,
    /// Observed ordering; reported, never enforced.
    pub collective_not_above_independent: bool,
}

/// Dephased one-photon state `T / L` in bin order.
pub fn one_photon_state(bins: usize, kappa: DiffusionStrength) -> Result<DensityMatrix> {
    if bins == 0 {
        return Err(Error::invalid("need at least one time bin"));
    }
    DensityMatrix::new(toeplitz(bins, kappa).scaled(1.0 / bins as f64))
}

/// `Λ(ρ⁽¹⁾) ⊗ Λ(ρ⁽¹⁾)` on product index `l₁ L + l₂`.
pub fn split_independent(bins: usize, kappa: DiffusionStrength) -> Result<DensityMatrix> {
    let one = one_photon_state(bins, kappa)?;
    DensityMatrix::new(one.matrix().kron(one.matrix()))
}

/// The dephased two-photon state mapped onto two single-photon paths:
/// two photons in bin `l` go to `|l⟩|l⟩`, one in each of `l ≠ l'` to the
/// symmetric combination `(|l⟩|l'⟩ + |l'⟩|l⟩)/√2`.
pub fn split_collective(
    bins: usize,
    kappa: DiffusionStrength,
    limits: &Limits,
) -> Result<DensityMatrix> {
    if bins == 0 {
        return Err(Error::invalid("need at least one time bin"));
    }
    let rho = individual_matrix(2, bins, kappa, limits)?;
    let patterns = compositions(2, bins)?;
    let images: Vec<Vec<(usize, f64)>> = patterns
        .iter()
        .map(|p| {
            let occ: Vec<usize> = p.occupied_bins().collect();
            match occ.as_slice() {
                [l] => vec![(l * bins + l, 1.0)],
                [a, b] => {
                    let s = std::f64::consts::FRAC_1_SQRT_2;
                    vec![(a * bins + b, s), (b * bins + a, s)]
                }
                _ => unreachable!("two photons occupy one or two bins"),
            }
        })
        .collect();
    let dim = bins * bins;
    let mut dense = vec![0.0; dim * dim];
    for (p, ip) in images.iter().enumerate() {
        for (q, iq) in images.iter().enumerate() {
            let v = rho.get(p, q);
            for &(x, a) in ip {
                for &(y, b) in iq {
                    dense[x * dim + y] += a * b * v;
                }
            }
        }
    }
    DensityMatrix::new(SymmetricMatrix::from_upper_fn(dim, |i, j| {
        dense[i * dim + j]
    }))
}

/// Traces out the second path of a state on `bins²` product indices.
pub fn trace_second_path(state: &DensityMatrix, bins: usize) -> Result<DensityMatrix> {
    if state.dim() != bins * bins {
        return Err(Error::invalid(format!(
            "state of dimension {} is not on {bins} x {bins} paths",
            state.dim()
        )));
    }
    DensityMatrix::new(SymmetricMatrix::from_upper_fn(bins, |a, b| {
        (0..bins)
            .map(|k| state.get(a * bins + k, b * bins + k))
            .sum()
    }))
}

/// Word average of a split state. Path index `(l, s)` is `l M + s` with
/// symbol `s` zero-based; a product entry survives with weight
/// `M^{-#bins}` when the bins it touches carry consistent symbols.
pub fn split_average(
    word_state: &DensityMatrix,
    bins: usize,
    symbols: u32,
    limits: &Limits,
) -> Result<DensityMatrix> {
    let m = symbols as usize;
    let modes = bins * m;
    let dim = modes * modes;
    crate::enumeration::check_cap(
        format!("split average state (L={bins}, M={symbols})"),
        dim as u64,
        limits,
    )?;
    let mf = f64::from(symbols);
    let decode = |u: usize| {
        let (x, y) = (u / modes, u % modes);
        [(x / m, x % m), (y / m, y % m)]
    };
    DensityMatrix::new(SymmetricMatrix::from_upper_fn(dim, |u, v| {
        let (pu, pv) = (decode(u), decode(v));
        let w = word_state.get(pu[0].0 * bins + pu[1].0, pv[0].0 * bins + pv[1].0);
        if w == 0.0 {
            return 0.0;
        }
        let mut seen: [(usize, usize); 4] = [(usize::MAX, 0); 4];
        let mut distinct = 0;
        for &(l, s) in pu.iter().chain(pv.iter()) {
            match seen[..distinct].iter().find(|e| e.0 == l) {
                Some(e) if e.1 != s => return 0.0,
                Some(_) => {}
                None => {
                    seen[distinct] = (l, s);
                    distinct += 1;
                }
            }
        }
        w * mf.powi(-(distinct as i32))
    }))
}

fn split_model(ind: &EntropyResult, avg: &EntropyResult) -> SplitModel {
    SplitModel {
        entropy_individual: ind.bits,
        entropy_average: avg.bits,
        chi2: avg.bits - ind.bits,
    }
}

pub fn splitting_comparison(
    bins: usize,
    symbols: u32,
    kappa: DiffusionStrength,
    limits: &Limits,
) -> Result<SplittingComparison> {
    if bins < 2 {
        return Err(Error::invalid("the splitting comparison needs L >= 2"));
    }
    if symbols < 2 {
        return Err(Error::invalid("need at least two symbols"));
    }
    let ind_i = split_independent(bins, kappa)?;
    let ind_c = split_collective(bins, kappa, limits)?;
    let avg_i = split_average(&ind_i, bins, symbols, limits)?;
    let avg_c = split_average(&ind_c, bins, symbols, limits)?;
    let independent = split_model(&ind_i.entropy()?, &avg_i.entropy()?);
    let collective = split_model(&ind_c.entropy()?, &avg_c.entropy()?);
    let chi1 = sector_chi(1, bins, symbols, kappa, limits)?.chi;
    Ok(SplittingComparison {
        bins,
        symbols,
        kappa,
        independent,
        collective,
        chi1,
        collective_not_above_independent: collective.chi2 <= independent.chi2,
    })
}
