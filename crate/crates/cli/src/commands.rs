//! One function per subcommand, each returning a [`Document`].

use rayon::prelude::*;
use serde_json::{json, Value};

use ppm_holevo::analysis::{
    baseline_slopes, baselines, choose_truncation, conjecture_check, splitting_comparison,
    SectorTable, CONJECTURE_TOLERANCE,
};
use ppm_holevo::enumeration::{average_dim, individual_dim};
use ppm_holevo::sectors::{chi1_asymptotic, chi1_exact, sector_chi};
use ppm_holevo::spectral::szego_entropy_integral;
use ppm_holevo::{DiffusionStrength, Limits};

use crate::grid::{default_kappas, default_kappas_nonzero, parse_ints, parse_kappas, parse_reals};
use crate::output::{kappa as kappa_json, real, Cell, Document};
use crate::{CliError, Command};

type Result<T> = std::result::Result<T, CliError>;

fn arg<T>(r: std::result::Result<T, String>) -> Result<T> {
    r.map_err(CliError::Argument)
}

fn kappas_or(
    text: Option<&str>,
    default: fn() -> Vec<DiffusionStrength>,
) -> Result<Vec<DiffusionStrength>> {
    match text {
        Some(s) => arg(parse_kappas(s)),
        None => Ok(default()),
    }
}

fn to_u32(v: u64, name: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| CliError::Argument(format!("{name} = {v} is too large")))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

pub fn dispatch(command: Command, limits: &Limits) -> Result<Document> {
    match command {
        Command::Dims {
            photons,
            bins,
            symbols,
        } => dims(&photons, &bins, &symbols),
        Command::Chi1 {
            bins,
            symbols,
            kappa,
        } => chi1(&bins, &symbols, kappa.as_deref()),
        Command::Sector {
            photons,
            bins,
            symbols,
            kappa,
        } => sector(photons, bins, symbols, &kappa, limits),
        Command::SectorsSweep {
            bins,
            symbols,
            n_max,
            kappa,
        } => sectors_sweep(bins, symbols, n_max, kappa.as_deref(), limits),
        Command::Holevo {
            bins,
            symbols,
            kappa,
            n_bar,
            n_max,
        } => holevo(bins, symbols, &kappa, &n_bar, n_max, limits),
        Command::Baselines { n_bar } => baseline_table(&n_bar),
        Command::Splitting {
            bins,
            symbols,
            kappa,
        } => splitting(bins, symbols, kappa.as_deref(), limits),
        Command::Szego { kappa, tol } => szego(kappa.as_deref(), tol),
        Command::Conjecture {
            bins,
            symbols,
            n_max,
            kappa,
        } => conjecture(bins, symbols, n_max, kappa.as_deref(), limits),
    }
}

fn dims(photons: &str, bins: &str, symbols: &str) -> Result<Document> {
    let mut doc = Document::new("dims", vec!["N", "L", "M", "individual_dim", "average_dim"]);
    for n in arg(parse_ints(photons))? {
        for l in arg(parse_ints(bins))? {
            for m in arg(parse_ints(symbols))? {
                let (n32, m32) = (to_u32(n, "N")?, to_u32(m, "M")?);
                let lu = usize::try_from(l)
                    .map_err(|_| CliError::Argument(format!("L = {l} is too large")))?;
                doc.push(vec![
                    Cell::Int(n),
                    Cell::Int(l),
                    Cell::Int(m),
                    Cell::Int(individual_dim(n32, lu)?),
                    Cell::Int(average_dim(n32, lu, m32)?),
                ]);
            }
        }
    }
    Ok(doc)
}

fn chi1(bins: &str, symbols: &str, kappa: Option<&str>) -> Result<Document> {
    let kappas = kappas_or(kappa, default_kappas)?;
    let mut points = Vec::new();
    for l in arg(parse_ints(bins))? {
        for m in arg(parse_ints(symbols))? {
            for &k in &kappas {
                points.push((l as usize, to_u32(m, "M")?, k));
            }
        }
    }
    let rows = points
        .par_iter()
        .map(|&(l, m, k)| -> Result<Vec<Cell>> {
            let exact = chi1_exact(l, m, k)?;
            let asym = if k.is_zero() {
                f64::INFINITY
            } else {
                chi1_asymptotic(m, k)?
            };
            Ok(vec![
                Cell::Int(l as u64),
                Cell::Int(u64::from(m)),
                Cell::Kappa(k),
                Cell::Real(exact),
                Cell::Real(asym),
                Cell::Real(asym - exact),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut doc = Document::new(
        "chi1",
        vec!["L", "M", "kappa", "chi1_exact", "chi1_asymptotic", "gap"],
    );
    rows.into_iter().for_each(|r| doc.push(r));
    Ok(doc)
}

fn single_kappa(text: &str) -> Result<DiffusionStrength> {
    match arg(parse_kappas(text))?.as_slice() {
        [k] => Ok(*k),
        _ => Err(CliError::Argument(format!(
            "expected one kappa value, got {text:?}"
        ))),
    }
}

fn sector(
    photons: u32,
    bins: usize,
    symbols: u32,
    kappa: &str,
    limits: &Limits,
) -> Result<Document> {
    let k = single_kappa(kappa)?;
    let s = sector_chi(photons, bins, symbols, k, limits)?;
    let mut doc = Document::new(
        "sector",
        vec![
            "N",
            "L",
            "M",
            "kappa",
            "dim_individual",
            "dim_average",
            "S_individual",
            "S_average",
            "chi",
        ],
    );
    doc.push(vec![
        Cell::Int(u64::from(s.photons)),
        Cell::Int(s.bins as u64),
        Cell::Int(u64::from(s.symbols)),
        Cell::Kappa(s.kappa),
        Cell::Int(s.dim_individual),
        Cell::Int(s.dim_average),
        Cell::Real(s.entropy_individual),
        Cell::Real(s.entropy_average),
        Cell::Real(s.chi),
    ]);
    doc.insert("sector", to_json(&s));
    Ok(doc)
}

fn sectors_sweep(
    bins: usize,
    symbols: u32,
    n_max: u32,
    kappa: Option<&str>,
    limits: &Limits,
) -> Result<Document> {
    let kappas = kappas_or(kappa, default_kappas)?;
    if n_max == 0 {
        return Err(CliError::Argument("--n-max must be at least 1".into()));
    }
    let check = conjecture_check(bins, symbols, &kappas, n_max, limits)?;
    let mut doc = Document::new("sectors-sweep", vec!["N", "kappa", "chi_N", "N_chi1"]);
    // N = 1 rows come from the sectors themselves; N >= 2 from the check points.
    let per_kappa = n_max as usize;
    for (i, &k) in kappas.iter().enumerate() {
        let one = &check.sectors[i * per_kappa];
        doc.push(vec![
            Cell::Int(1),
            Cell::Kappa(k),
            Cell::Real(one.chi),
            Cell::Real(one.chi),
        ]);
        let start = i * (per_kappa - 1);
        for p in &check.points[start..start + per_kappa - 1] {
            doc.push(vec![
                Cell::Int(u64::from(p.photons)),
                Cell::Kappa(k),
                Cell::Real(p.chi_n),
                Cell::Real(p.n_chi1),
            ]);
        }
    }
    Ok(doc)
}

fn holevo(
    bins: usize,
    symbols: u32,
    kappa: &str,
    n_bar: &str,
    n_max: Option<u32>,
    limits: &Limits,
) -> Result<Document> {
    let kappas = arg(parse_kappas(kappa))?;
    let n_bars = arg(parse_reals(n_bar))?;
    let largest = n_bars.iter().copied().fold(0.0, f64::max);
    let n_max = match n_max {
        Some(n) => n,
        None => choose_truncation(bins, largest, limits)?,
    };
    let mut doc = Document::new(
        "holevo",
        vec![
            "kappa",
            "n_bar",
            "N_max",
            "total_chi",
            "per_use",
            "linear_bound",
            "truncated_mass_fraction",
        ],
    );
    let mut reports = Vec::new();
    for &k in &kappas {
        let table = SectorTable::build(bins, symbols, k, n_max, limits)?;
        for &nb in &n_bars {
            let r = table.report(nb)?;
            doc.push(vec![
                Cell::Kappa(k),
                Cell::Real(nb),
                Cell::Int(u64::from(r.n_max)),
                Cell::Real(r.total_chi),
                Cell::Real(r.per_use),
                Cell::Real(r.linear_bound.unwrap_or(f64::INFINITY)),
                Cell::Real(r.truncated_mass_fraction),
            ]);
            reports.push(to_json(&r));
        }
    }
    doc.insert("reports", Value::Array(reports));
    Ok(doc)
}

fn baseline_table(n_bar: &str) -> Result<Document> {
    let mut doc = Document::new(
        "baselines",
        vec![
            "n_bar",
            "erasure",
            "holevo_binary",
            "leading_order",
            "d_erasure",
            "d_holevo_binary",
        ],
    );
    for nb in arg(parse_reals(n_bar))? {
        let b = baselines(nb)?;
        let s = baseline_slopes(nb)?;
        doc.push(vec![
            Cell::Real(nb),
            Cell::Real(b.erasure),
            Cell::Real(b.holevo_binary),
            Cell::Real(b.leading_order),
            Cell::Real(s.erasure),
            Cell::Real(s.holevo_binary),
        ]);
    }
    Ok(doc)
}

fn splitting(bins: usize, symbols: u32, kappa: Option<&str>, limits: &Limits) -> Result<Document> {
    let kappas = kappas_or(kappa, default_kappas)?;
    let results = kappas
        .par_iter()
        .map(|&k| splitting_comparison(bins, symbols, k, limits))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut doc = Document::new(
        "splitting",
        vec!["kappa", "model", "S_ind", "S_avg", "chi2"],
    );
    for c in &results {
        for (name, m) in [("independent", c.independent), ("collective", c.collective)] {
            doc.push(vec![
                Cell::Kappa(c.kappa),
                Cell::Text(name.to_string()),
                Cell::Real(m.entropy_individual),
                Cell::Real(m.entropy_average),
                Cell::Real(m.chi2),
            ]);
        }
    }
    doc.insert(
        "comparisons",
        Value::Array(results.iter().map(to_json).collect()),
    );
    Ok(doc)
}

fn szego(kappa: Option<&str>, tol: f64) -> Result<Document> {
    let kappas = kappas_or(kappa, default_kappas_nonzero)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Argument(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    let rows = kappas
        .par_iter()
        .map(|&k| -> Result<Vec<Cell>> {
            let s = szego_entropy_integral(k, tol)?;
            Ok(vec![
                Cell::Kappa(k),
                Cell::Real(s.quadrature),
                Cell::Real(s.closed_form),
                Cell::Real(s.difference()),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut doc = Document::new(
        "szego",
        vec!["kappa", "quadrature", "closed_form", "difference"],
    );
    rows.into_iter().for_each(|r| doc.push(r));
    Ok(doc)
}

fn conjecture(
    bins: usize,
    symbols: u32,
    n_max: u32,
    kappa: Option<&str>,
    limits: &Limits,
) -> Result<Document> {
    let kappas = kappas_or(kappa, default_kappas)?;
    let check = conjecture_check(bins, symbols, &kappas, n_max, limits)?;
    let mut doc = Document::new(
        "conjecture",
        vec!["kappa", "N", "chi_N", "N_chi1", "margin"],
    );
    for v in &check.violations {
        doc.push(vec![
            Cell::Kappa(v.kappa),
            Cell::Int(u64::from(v.photons)),
            Cell::Real(v.chi_n),
            Cell::Real(v.n_chi1),
            Cell::Real(v.margin),
        ]);
    }
    let max_margin = check
        .points
        .iter()
        .map(|p| p.margin)
        .fold(f64::NEG_INFINITY, f64::max);
    doc.insert(
        "summary",
        json!({
            "L": bins,
            "M": symbols,
            "N_max": n_max,
            "kappas": kappas.iter().map(|&k| kappa_json(k)).collect::<Vec<_>>(),
            "points": check.points.len(),
            "violations": check.violations.len(),
            "max_margin": real(max_margin),
            "tolerance": CONJECTURE_TOLERANCE,
            "holds": check.violations.is_empty(),
        }),
    );
    doc.insert("points", to_json(&check.points));
    Ok(doc)
}
