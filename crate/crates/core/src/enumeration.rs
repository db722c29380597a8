//! Multimode Fock bases of a fixed photon-number sector.
//!
//! An [`OccupationPattern`] records how many photons sit in each time bin.
//! For the average state the same pattern is further split by the symbol
//! (mode) carried by every occupied bin, giving the labels of a
//! [`SectorBasis`]. Orderings are fixed so that every matrix index is
//! reproducible.

use std::collections::HashMap;
use std::fmt;

use crate::{Error, Limits, Result};

/// Photon counts per time bin; a composition of `N` into `L` nonnegative parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationPattern {
    counts: Vec<u32>,
}

impl OccupationPattern {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::invalid(
                "an occupation pattern needs at least one bin",
            ));
        }
        Ok(OccupationPattern { counts })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Number of time bins `L`.
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Total photon number `N`.
    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// `k(n)`, the number of bins holding at least one photon.
    pub fn occupied_count(&self) -> usize {
        occupied_count(self)
    }

    /// Indices of occupied bins in ascending order.
    pub fn occupied_bins(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i)
    }
}

impl fmt::Display for OccupationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Symbols (1-based) carried by the occupied bins of a companion pattern,
/// listed in ascending bin order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolAssignment {
    symbols: Vec<u32>,
}

impl SymbolAssignment {
    pub fn new(symbols: Vec<u32>, alphabet: u32) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s == 0 || s > alphabet) {
            return Err(Error::invalid(format!("symbol {s} outside 1..={alphabet}")));
        }
        Ok(SymbolAssignment { symbols })
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// `k(n)`: count of strictly positive entries.
pub fn occupied_count(n: &OccupationPattern) -> usize {
    n.counts.iter().filter(|&&c| c > 0).count()
}

/// Iterator over compositions of `total` into `parts` nonnegative parts in
/// colexicographic order, starting from `(total, 0, ..., 0)`.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Compositions {
    pub fn new(total: u32, parts: usize) -> Result<Self> {
        if parts == 0 {
            return Err(Error::invalid("compositions need at least one part"));
        }
        let mut first = vec![0; parts];
        first[0] = total;
        Ok(Compositions {
            current: Some(first),
        })
    }
}

impl Iterator for Compositions {
    type Item = OccupationPattern;

    fn next(&mut self) -> Option<OccupationPattern> {
        let current = self.current.take()?;
        let out = OccupationPattern {
            counts: current.clone(),
        };
        // Successor: empty the first nonzero part (minus one, which returns
        // to the front) and carry one unit into the following part.
        let mut next = current;
        if let Some(i) = next.iter().position(|&c| c > 0) {
            if i + 1 < next.len() {
                let v = next[i];
                next[i] = 0;
                next[i + 1] += 1;
                next[0] = v - 1;
                self.current = Some(next);
            }
        }
        Some(out)
    }
}

/// All compositions of `total` into `parts` nonnegative parts.
pub fn compositions(total: u32, parts: usize) -> Result<Vec<OccupationPattern>> {
    Ok(Compositions::new(total, parts)?.collect())
}

/// Exact binomial coefficient with overflow detection.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return Err(Error::Overflow("binomial coefficient"));
        }
    }
    Ok(acc as u64)
}

fn checked_pow(base: u64, exp: u64) -> Result<u64> {
    let exp = u32::try_from(exp).map_err(|_| Error::Overflow("symbol power"))?;
    base.checked_pow(exp).ok_or(Error::Overflow("symbol power"))
}

fn weighted_dim(photons: u32, bins: usize, symbols: u64) -> Result<u64> {
    let n = u64::from(photons);
    let l = bins as u64;
    let mut sum: u64 = 0;
    for k in 1..=n.min(l) {
        let term = binomial(n - 1, k - 1)?
            .checked_mul(binomial(l, k)?)
            .and_then(|t| t.checked_mul(checked_pow(symbols, k).ok()?))
            .ok_or(Error::Overflow("sector dimension"))?;
        sum = sum
            .checked_add(term)
            .ok_or(Error::Overflow("sector dimension"))?;
    }
    Ok(sum)
}

/// Number of Fock states spanning an individual `N`-photon output state:
/// `Σ_k C(N-1, k-1) C(L, k)`.
pub fn individual_dim(photons: u32, bins: usize) -> Result<u64> {
    if photons == 0 || bins == 0 {
        return Err(Error::invalid("individual_dim needs N >= 1 and L >= 1"));
    }
    weighted_dim(photons, bins, 1)
}

/// Number of labels `(n; μ)` spanning the average `N`-photon output state:
/// `Σ_k C(N-1, k-1) C(L, k) M^k`.
pub fn average_dim(photons: u32, bins: usize, symbols: u32) -> Result<u64> {
    if photons == 0 || bins == 0 || symbols == 0 {
        return Err(Error::invalid(
            "average_dim needs N >= 1, L >= 1 and M >= 1",
        ));
    }
    weighted_dim(photons, bins, u64::from(symbols))
}

/// Fail with a resource-limit error when `dim` exceeds the configured cap.
pub(crate) fn check_cap(what: impl Into<String>, dim: u64, limits: &Limits) -> Result<()> {
    if dim > limits.dim_cap {
        return Err(Error::ResourceLimit {
            what: what.into(),
            dim,
            cap: limits.dim_cap,
            hint: "; lower N, L or M, or raise the dimension cap",
        });
    }
    Ok(())
}

/// Ordered labels `(n; μ)` of an `N`-photon sector with `M` symbols.
///
/// Patterns appear in composition order; within a pattern the assignments
/// run lexicographically over the symbols of the occupied bins. Each entry
/// also stores its symbols expanded to full length (0 on empty bins) and
/// the index of its pattern, which is what the matrix builders consume.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    photons: u32,
    symbols: u32,
    patterns: Vec<OccupationPattern>,
    entries: Vec<BasisEntry>,
    index: HashMap<(OccupationPattern, SymbolAssignment), usize>,
}

#[derive(Debug, Clone)]
pub struct BasisEntry {
    pub pattern: usize,
    pub assignment: SymbolAssignment,
    /// Symbol per bin, 0 where the bin is empty.
    pub bin_symbols: Vec<u32>,
}

impl SectorBasis {
    pub fn photons(&self) -> u32 {
        self.photons
    }

    pub fn bins(&self) -> usize {
        self.patterns[0].bins()
    }

    pub fn symbols(&self) -> u32 {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct occupation patterns in basis order.
    pub fn patterns(&self) -> &[OccupationPattern] {
        &self.patterns
    }

    pub fn entries(&self) -> &[BasisEntry] {
        &self.entries
    }

    pub fn pattern_of(&self, i: usize) -> &OccupationPattern {
        &self.patterns[self.entries[i].pattern]
    }

    pub fn label(&self, i: usize) -> (&OccupationPattern, &SymbolAssignment) {
        let e = &self.entries[i];
        (&self.patterns[e.pattern], &e.assignment)
    }

    pub fn position(
        &self,
        pattern: &OccupationPattern,
        assignment: &SymbolAssignment,
    ) -> Option<usize> {
        self.index
            .get(&(pattern.clone(), assignment.clone()))
            .copied()
    }
}

/// Enumerate the sector basis, refusing dimensions above `limits.dim_cap`.
pub fn build_average_basis(
    photons: u32,
    bins: usize,
    symbols: u32,
    limits: &Limits,
) -> Result<SectorBasis> {
    let dim = average_dim(photons, bins, symbols)?;
    check_cap(
        format!("average basis (N={photons}, L={bins}, M={symbols})"),
        dim,
        limits,
    )?;

    let patterns = compositions(photons, bins)?;
    let mut entries = Vec::with_capacity(dim as usize);
    let mut index = HashMap::with_capacity(dim as usize);
    for (p, pattern) in patterns.iter().enumerate() {
        let occupied: Vec<usize> = pattern.occupied_bins().collect();
        let mut word = vec![1u32; occupied.len()];
        loop {
            let mut bin_symbols = vec![0; bins];
            for (&b, &s) in occupied.iter().zip(&word) {
                bin_symbols[b] = s;
            }
            let assignment = SymbolAssignment {
                symbols: word.clone(),
            };
            index.insert((pattern.clone(), assignment.clone()), entries.len());
            entries.push(BasisEntry {
                pattern: p,
                assignment,
                bin_symbols,
            });
            if !increment_word(&mut word, symbols) {
                break;
            }
        }
    }
    debug_assert_eq!(entries.len() as u64, dim);
    Ok(SectorBasis {
        photons,
        symbols,
        patterns,
        entries,
        index,
    })
}

/// Lexicographic successor of a word over `1..=alphabet`, last position
/// fastest. Returns false after the final word.
fn increment_word(word: &mut [u32], alphabet: u32) -> bool {
    for s in word.iter_mut().rev() {
        if *s < alphabet {
            *s += 1;
            return true;
        }
        *s = 1;
    }
    false
}
