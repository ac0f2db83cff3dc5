//! Spectral sequence of the filtration by level.
//!
//! With `Sub_s` the subcomplex of levels `≥ s`, page `r` in degree `j` and
//! level `s` is
//!
//! ```text
//! Z^r(j,s) = { x ∈ Sub_s(j) : dx ∈ Sub_{s+r} }
//! B^r(j,s) = Z^{r-1}(j, s+1) + d Z^{r-1}(j+1, s-r+1)
//! E^r(j,s) = Z^r(j,s) / B^r(j,s)
//! ```
//!
//! and `d^r: E^r(j,s) → E^r(j-1, s+r)`. In terms of the decreasing index
//! `p = max_level − s` this is the usual homology spectral sequence of an
//! increasing filtration. `E¹(j,s)` is the homology of the level-`s` slice.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::Serialize;

use super::{ComplexError, GradedFilteredComplex};
use crate::linalg::{kernel_basis, quotient_dimension, rank, Quotient, SparseMatrix, SparseVector};

#[derive(Debug, Clone)]
pub struct Term {
    pub degree: i64,
    pub level: u32,
    pub dimension: usize,
    pub representatives: Vec<SparseVector>,
    quotient: Quotient,
}

impl Term {
    /// Coordinates of the class of `z ∈ Z^r` in this term.
    pub fn class_of(&self, z: &SparseVector) -> Result<Vec<crate::Rational>, crate::linalg::LinalgError> {
        self.quotient.coordinates(z)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PageDifferential {
    pub source: (i64, u32),
    pub target: (i64, u32),
    #[serde(skip)]
    pub matrix: SparseMatrix,
    pub rank: usize,
}

#[derive(Debug, Clone)]
pub struct Page {
    pub r: u32,
    /// Nonzero terms keyed by `(degree, level)`.
    pub terms: BTreeMap<(i64, u32), Term>,
    /// Differentials between nonzero terms.
    pub differentials: Vec<PageDifferential>,
}

impl Page {
    pub fn dimension(&self, degree: i64, level: u32) -> usize {
        self.terms.get(&(degree, level)).map_or(0, |t| t.dimension)
    }

    pub fn total(&self, degree: i64) -> usize {
        self.terms.range((degree, 0)..=(degree, u32::MAX)).map(|(_, t)| t.dimension).sum()
    }

    pub fn differential_from(&self, degree: i64, level: u32) -> Option<&PageDifferential> {
        self.differentials.iter().find(|d| d.source == (degree, level))
    }

    pub fn is_stationary(&self) -> bool {
        self.differentials.iter().all(|d| d.rank == 0)
    }
}

#[derive(Debug, Clone)]
pub struct SpectralSequence {
    pub min_level: u32,
    pub max_level: u32,
    /// Pages `E^1, E^2, …`; the last one equals `E^∞`.
    pub pages: Vec<Page>,
    /// Smallest `r` with `d^{r'} = 0` for every `r' ≥ r`.
    pub degeneration_page: u32,
    /// `dim E^{r+1} = dim E^r − rank(d^r in) − rank(d^r out)` on every term.
    pub rank_consistent: bool,
}

impl SpectralSequence {
    pub fn page(&self, r: u32) -> Option<&Page> {
        self.pages.get(r.checked_sub(1)? as usize)
    }

    pub fn limit(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    pub fn limit_totals(&self) -> BTreeMap<i64, usize> {
        let mut totals = BTreeMap::new();
        for (&(j, _), t) in &self.limit().terms {
            *totals.entry(j).or_insert(0) += t.dimension;
        }
        totals
    }
}

struct Engine<'a> {
    complex: &'a GradedFilteredComplex,
    min_level: i64,
    cache: BTreeMap<(u32, i64, i64), Vec<SparseVector>>,
}

impl Engine<'_> {
    /// Basis of `Z^r(j, s)`; `s` may lie below the lowest level.
    fn z(&mut self, r: u32, j: i64, s: i64) -> Vec<SparseVector> {
        if let Some(hit) = self.cache.get(&(r, j, s)) {
            return hit.clone();
        }
        let c = self.complex;
        let floor = s.max(self.min_level);
        let domain: Vec<usize> = c.indices_in_degree(j).iter().copied().filter(|&i| c.basis()[i].filtration as i64 >= floor).collect();
        let out: Vec<SparseVector> = if r == 0 {
            domain.iter().map(|&i| SparseVector::unit(i)).collect()
        } else {
            let ceiling = s + r as i64;
            let rows: BTreeMap<usize, usize> = c
                .indices_in_degree(j - 1)
                .iter()
                .copied()
                .filter(|&i| (c.basis()[i].filtration as i64) < ceiling)
                .enumerate()
                .map(|(k, g)| (g, k))
                .collect();
            let cols = domain.iter().map(|&g| c.differential(g).reindex(|t| rows.get(&t).copied())).collect();
            let m = SparseMatrix::from_columns(rows.len(), cols).expect("local rows in range");
            kernel_basis(&m).iter().map(|v| v.reindex(|k| Some(domain[k]))).collect()
        };
        self.cache.insert((r, j, s), out.clone());
        out
    }

    fn term(&mut self, r: u32, j: i64, s: u32) -> Result<Option<Term>, ComplexError> {
        let s64 = s as i64;
        let cycles = self.z(r, j, s64);
        if cycles.is_empty() {
            return Ok(None);
        }
        let mut boundaries = self.z(r - 1, j, s64 + 1);
        for x in self.z(r - 1, j + 1, s64 - r as i64 + 1) {
            let dx = self.complex.apply(&x);
            if !dx.is_zero() {
                boundaries.push(dx);
            }
        }
        let quotient = quotient_dimension(&boundaries, &cycles)?;
        if quotient.dimension == 0 {
            return Ok(None);
        }
        Ok(Some(Term { degree: j, level: s, dimension: quotient.dimension, representatives: quotient.representatives.clone(), quotient }))
    }
}

pub(super) fn compute(complex: &GradedFilteredComplex, max_page: u32) -> Result<SpectralSequence, ComplexError> {
    let Some((lo, hi)) = complex.levels() else {
        return Ok(SpectralSequence { min_level: 0, max_level: 0, pages: alloc::vec![empty_page(1)], degeneration_page: 1, rank_consistent: true });
    };
    // d^r vanishes for r > hi - lo; one extra page shows E^∞.
    let last = max_page.max(hi - lo + 2).max(1);
    let mut engine = Engine { complex, min_level: lo as i64, cache: BTreeMap::new() };
    let degrees: Vec<i64> = complex.degrees().collect();

    let mut pages = Vec::with_capacity(last as usize);
    for r in 1..=last {
        let mut terms = BTreeMap::new();
        for &j in &degrees {
            for s in lo..=hi {
                if let Some(t) = engine.term(r, j, s)? {
                    terms.insert((j, s), t);
                }
            }
        }
        let mut differentials = Vec::new();
        for (&(j, s), t) in &terms {
            let Some(target) = terms.get(&(j - 1, s + r)) else { continue };
            let mut columns = Vec::with_capacity(t.dimension);
            for rep in &t.representatives {
                let image = complex.apply(rep);
                columns.push(SparseVector::from_dense(&target.class_of(&image)?));
            }
            let matrix = SparseMatrix::from_columns(target.dimension, columns)?;
            let rank = rank(&matrix);
            differentials.push(PageDifferential { source: (j, s), target: (j - 1, s + r), matrix, rank });
        }
        pages.push(Page { r, terms, differentials });
    }

    let degeneration_page = pages.iter().filter(|p| !p.is_stationary()).map(|p| p.r + 1).max().unwrap_or(1);
    let rank_consistent = pages.windows(2).all(|w| consistent(&w[0], &w[1]));
    Ok(SpectralSequence { min_level: lo, max_level: hi, pages, degeneration_page, rank_consistent })
}

fn empty_page(r: u32) -> Page {
    Page { r, terms: BTreeMap::new(), differentials: Vec::new() }
}

fn consistent(page: &Page, next: &Page) -> bool {
    let mut lost: BTreeMap<(i64, u32), usize> = BTreeMap::new();
    for d in &page.differentials {
        *lost.entry(d.source).or_insert(0) += d.rank;
        *lost.entry(d.target).or_insert(0) += d.rank;
    }
    let keys = page.terms.keys().chain(next.terms.keys());
    keys.into_iter().all(|&(j, s)| {
        let before = page.dimension(j, s);
        let drop = lost.get(&(j, s)).copied().unwrap_or(0);
        before >= drop && next.dimension(j, s) == before - drop
    })
}
