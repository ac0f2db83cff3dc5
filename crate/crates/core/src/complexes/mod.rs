//! Finite graded, filtered chain complexes over ℚ.
//!
//! A basis element carries a homological degree, a filtration level `s ≥ 0`
//! (the power of `t^{-1}`), and an action. The differential lowers degree by
//! one, never lowers the level, and strictly lowers the action. For each `s`
//! the span of elements with level `≥ s` is a subcomplex; those subcomplexes
//! define the spectral sequence in [`spectral`].

mod chain_map;
mod spectral;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, kernel_basis, quotient_dimension, LinalgError, Quotient, Rational, SparseMatrix, SparseVector};

pub use chain_map::ChainMap;
pub use spectral::{Page, PageDifferential, SpectralSequence, Term};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: i64,
    pub filtration: u32,
    #[serde(with = "crate::linalg::serde_rational")]
    pub action: Rational,
    /// Position of the critical point inside its Morse–Bott family. Only
    /// compared when two actions are equal: the Morse perturbation shifts
    /// the action by an infinitesimal multiple of this value.
    #[serde(default)]
    pub perturbation: i64,
}

impl BasisElement {
    pub fn new(label: impl Into<String>, degree: i64, filtration: u32, action: Rational) -> Self {
        Self { label: label.into(), degree, filtration, action, perturbation: 0 }
    }

    pub fn with_perturbation(mut self, perturbation: i64) -> Self {
        self.perturbation = perturbation;
        self
    }

    /// Perturbed action order: action first, then perturbation.
    pub fn action_cmp(&self, other: &Self) -> Ordering {
        self.action.cmp(&other.action).then(self.perturbation.cmp(&other.perturbation))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("differential entry {from} -> {to} outside a basis of size {len}")]
    IndexOutOfRange { from: usize, to: usize, len: usize },
    #[error("d∘d is nonzero on degree {degree}")]
    SquareNonzero { degree: i64 },
    #[error("complex failed validation with {count} violation(s)")]
    Invalid { count: usize },
    #[error("map is not a chain map at source element {element}")]
    NotChainMap { element: usize },
    #[error("chain map has {images} images for a source basis of size {len}")]
    MapShape { images: usize, len: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DegreeNotLowered { from: String, to: String, from_degree: i64, to_degree: i64 },
    FiltrationDecreased { from: String, to: String, from_level: u32, to_level: u32 },
    ActionNotDecreased { from: String, to: String },
    SquareNonzero {
        from: String,
        to: String,
        #[serde(with = "crate::linalg::serde_rational")]
        coefficient: Rational,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub entries_checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedFilteredComplex {
    basis: Vec<BasisElement>,
    columns: Vec<SparseVector>,
    by_degree: BTreeMap<i64, Vec<usize>>,
}

/// Homology in one degree, with representatives in the global basis.
#[derive(Debug, Clone)]
pub struct Homology {
    pub degree: i64,
    pub dimension: usize,
    pub representatives: Vec<SparseVector>,
    quotient: Quotient,
    cycles: linalg::EchelonBasis,
}

impl Homology {
    /// Coordinates of the class of `cycle` in the representative basis.
    pub fn class_of(&self, cycle: &SparseVector) -> Result<Vec<Rational>, LinalgError> {
        if !self.cycles.contains(cycle) {
            return Err(LinalgError::NotInSpan);
        }
        self.quotient.coordinates(cycle)
    }

    /// `cycle` is a cycle whose class is a nonzero multiple of the single
    /// generator (dimension 1 only).
    pub fn generated_by(&self, cycle: &SparseVector) -> bool {
        self.dimension == 1 && self.class_of(cycle).is_ok_and(|c| !c[0].is_zero())
    }
}

impl GradedFilteredComplex {
    pub fn new<I>(basis: Vec<BasisElement>, entries: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let len = basis.len();
        let mut columns = alloc::vec![SparseVector::new(); len];
        for (from, to, q) in entries {
            if from >= len || to >= len {
                return Err(ComplexError::IndexOutOfRange { from, to, len });
            }
            columns[from].add_at(to, q);
        }
        Ok(Self::from_columns(basis, columns))
    }

    fn from_columns(basis: Vec<BasisElement>, columns: Vec<SparseVector>) -> Self {
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, e) in basis.iter().enumerate() {
            by_degree.entry(e.degree).or_default().push(i);
        }
        Self { basis, columns, by_degree }
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|e| e.label == label)
    }

    /// `d(e_i)` in the global basis.
    pub fn differential(&self, i: usize) -> &SparseVector {
        &self.columns[i]
    }

    pub fn apply(&self, chain: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (i, q) in chain.iter() {
            out.add_scaled(&self.columns[i], q);
        }
        out
    }

    /// Nonzero differential entries `(from, to, coefficient)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.columns.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |(j, q)| (i, j, q)))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn indices_in_degree(&self, degree: i64) -> &[usize] {
        self.by_degree.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn levels(&self) -> Option<(u32, u32)> {
        let min = self.basis.iter().map(|e| e.filtration).min()?;
        let max = self.basis.iter().map(|e| e.filtration).max()?;
        Some((min, max))
    }

    /// Matrix of `d: C_degree → C_{degree-1}` in local coordinates.
    pub fn boundary_matrix(&self, degree: i64) -> SparseMatrix {
        let domain = self.indices_in_degree(degree);
        let codomain = self.indices_in_degree(degree - 1);
        let local: BTreeMap<usize, usize> = codomain.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let cols = domain.iter().map(|&g| self.columns[g].reindex(|t| local.get(&t).copied())).collect();
        SparseMatrix::from_columns(codomain.len(), cols).expect("local indices are in range")
    }

    /// Every boundary matrix of the complex, keyed by source degree.
    pub fn boundary_matrices(&self) -> BTreeMap<i64, SparseMatrix> {
        self.degrees().map(|j| (j, self.boundary_matrix(j))).collect()
    }

    /// Checks degree −1, filtration monotonicity, `d∘d = 0` and strict
    /// action decrease, listing every offending entry.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (i, j, _) in self.entries() {
            report.entries_checked += 1;
            let (a, b) = (&self.basis[i], &self.basis[j]);
            if b.degree != a.degree - 1 {
                report.violations.push(Violation::DegreeNotLowered {
                    from: a.label.clone(),
                    to: b.label.clone(),
                    from_degree: a.degree,
                    to_degree: b.degree,
                });
            }
            if b.filtration < a.filtration {
                report.violations.push(Violation::FiltrationDecreased {
                    from: a.label.clone(),
                    to: b.label.clone(),
                    from_level: a.filtration,
                    to_level: b.filtration,
                });
            }
            if b.action_cmp(a) != Ordering::Less {
                report.violations.push(Violation::ActionNotDecreased { from: a.label.clone(), to: b.label.clone() });
            }
        }
        for i in 0..self.len() {
            for (j, q) in self.apply(&self.columns[i]).iter() {
                report.violations.push(Violation::SquareNonzero {
                    from: self.basis[i].label.clone(),
                    to: self.basis[j].label.clone(),
                    coefficient: q.clone(),
                });
            }
        }
        report
    }

    /// Cycles of degree `degree` as global vectors.
    fn cycles(&self, degree: i64) -> Vec<SparseVector> {
        let domain = self.indices_in_degree(degree);
        kernel_basis(&self.boundary_matrix(degree)).iter().map(|v| v.reindex(|k| Some(domain[k]))).collect()
    }

    /// `ker d_degree / im d_{degree+1}` with explicit representatives.
    pub fn homology(&self, degree: i64) -> Result<Homology, ComplexError> {
        let boundaries: Vec<SparseVector> =
            self.indices_in_degree(degree + 1).iter().map(|&i| self.columns[i].clone()).filter(|v| !v.is_zero()).collect();
        if boundaries.iter().any(|b| !self.apply(b).is_zero()) {
            return Err(ComplexError::SquareNonzero { degree: degree + 1 });
        }
        let cycles = self.cycles(degree);
        let quotient = quotient_dimension(&boundaries, &cycles)?;
        let mut span = linalg::EchelonBasis::new();
        for c in &cycles {
            span.insert(c, None);
        }
        Ok(Homology {
            degree,
            dimension: quotient.dimension,
            representatives: quotient.representatives.clone(),
            quotient,
            cycles: span,
        })
    }

    /// Betti numbers in every degree present.
    pub fn betti_numbers(&self) -> Result<BTreeMap<i64, usize>, ComplexError> {
        self.degrees().map(|j| Ok((j, self.homology(j)?.dimension))).collect()
    }

    /// Keeps the basis elements selected by `keep`, dropping differential
    /// terms that land on removed elements. This is a valid complex when the
    /// removed elements split into a subcomplex and the complement of a
    /// subcomplex; each public caller guarantees that.
    fn subquotient(&self, keep: impl Fn(&BasisElement) -> bool) -> Self {
        let mut new_index = alloc::vec![None; self.len()];
        let mut basis = Vec::new();
        for (i, e) in self.basis.iter().enumerate() {
            if keep(e) {
                new_index[i] = Some(basis.len());
                basis.push(e.clone());
            }
        }
        let columns = (0..self.len())
            .filter(|&i| new_index[i].is_some())
            .map(|i| self.columns[i].reindex(|t| new_index[t]))
            .collect();
        Self::from_columns(basis, columns)
    }

    /// `C / D` where `D` is spanned by elements of action below `threshold`
    /// (`None` means −∞). `D` is a subcomplex because `d` lowers action.
    pub fn quotient_above_action(&self, threshold: Option<&Rational>) -> Self {
        match threshold {
            None => self.clone(),
            Some(t) => self.subquotient(|e| &e.action >= t),
        }
    }

    /// Quotient by the subcomplex of levels `≥ mu + 1`.
    pub fn truncate_filtration(&self, mu: u32) -> Self {
        self.subquotient(|e| e.filtration <= mu)
    }

    /// The associated graded piece at level `s` (as a complex with the
    /// level-preserving part of `d`).
    pub fn slice(&self, s: u32) -> Self {
        self.subquotient(|e| e.filtration == s)
    }

    /// Degrees `lo..=hi`: the quotient by degrees `< lo` intersected with the
    /// subcomplex of degrees `≤ hi`. Homology is unchanged strictly inside.
    pub fn degree_window(&self, lo: i64, hi: i64) -> Self {
        self.subquotient(|e| (lo..=hi).contains(&e.degree))
    }

    pub fn spectral_sequence(&self, max_page: u32) -> Result<SpectralSequence, ComplexError> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(ComplexError::Invalid { count: report.violations.len() });
        }
        spectral::compute(self, max_page)
    }

    /// Matrix of the map induced on homology in `degree` (rows: target
    /// representatives in degree `degree + shift`, columns: source ones).
    pub fn induced_map_on_homology(
        map: &ChainMap,
        source: &Self,
        target: &Self,
        degree: i64,
    ) -> Result<SparseMatrix, ComplexError> {
        map.check(source, target)?;
        let hs = source.homology(degree)?;
        let ht = target.homology(degree + map.degree_shift)?;
        let mut columns = Vec::with_capacity(hs.dimension);
        for rep in &hs.representatives {
            let image = map.apply(rep);
            columns.push(SparseVector::from_dense(&ht.class_of(&image)?));
        }
        Ok(SparseMatrix::from_columns(ht.dimension, columns)?)
    }

    /// Human readable chain, e.g. `Mchk1 - mchk2`.
    pub fn format_chain(&self, chain: &SparseVector) -> String {
        format_combination(chain.iter().map(|(i, q)| (self.basis[i].label.as_str(), q)))
    }
}

pub(crate) fn format_combination<'a>(terms: impl Iterator<Item = (&'a str, &'a Rational)>) -> String {
    let mut out = String::new();
    for (label, q) in terms {
        let neg = q.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = q.abs();
        if !mag.is_one() {
            out.push_str(&alloc::format!("{mag}·"));
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    /// `a → b` at one level: acyclic.
    fn interval() -> GradedFilteredComplex {
        GradedFilteredComplex::new(
            alloc::vec![BasisElement::new("a", 1, 0, int(2)), BasisElement::new("b", 0, 0, int(1))],
            [(0, 1, int(1))],
        )
        .unwrap()
    }

    #[test]
    fn zero_differential_is_valid() {
        let c = GradedFilteredComplex::new(alloc::vec![BasisElement::new("p", 0, 0, int(0))], []).unwrap();
        assert!(c.validate().is_valid());
        assert_eq!(c.homology(0).unwrap().dimension, 1);
    }

    #[test]
    fn filtration_decrease_is_cited() {
        let c = GradedFilteredComplex::new(
            alloc::vec![BasisElement::new("hi", 1, 2, int(5)), BasisElement::new("lo", 0, 1, int(0))],
            [(0, 1, int(1))],
        )
        .unwrap();
        let report = c.validate();
        assert_eq!(
            report.violations,
            alloc::vec![Violation::FiltrationDecreased { from: "hi".into(), to: "lo".into(), from_level: 2, to_level: 1 }]
        );
    }

    #[test]
    fn degree_action_and_square_violations() {
        let c = GradedFilteredComplex::new(
            alloc::vec![
                BasisElement::new("a", 2, 0, int(3)),
                BasisElement::new("b", 1, 0, int(3)),
                BasisElement::new("c", 0, 0, int(1)),
                BasisElement::new("z", 5, 0, int(9)),
            ],
            [(0, 1, int(1)), (1, 2, int(1)), (3, 2, int(1))],
        )
        .unwrap();
        let v = c.validate().violations;
        assert!(v.contains(&Violation::ActionNotDecreased { from: "a".into(), to: "b".into() }));
        assert!(v.contains(&Violation::DegreeNotLowered { from: "z".into(), to: "c".into(), from_degree: 5, to_degree: 0 }));
        assert!(v.contains(&Violation::SquareNonzero { from: "a".into(), to: "c".into(), coefficient: int(1) }));
        assert!(c.homology(1).is_err());
    }

    #[test]
    fn perturbation_breaks_action_ties() {
        let c = GradedFilteredComplex::new(
            alloc::vec![
                BasisElement::new("M", 1, 0, int(3)).with_perturbation(2),
                BasisElement::new("m", 0, 0, int(3)).with_perturbation(1),
            ],
            [(0, 1, int(2))],
        )
        .unwrap();
        assert!(c.validate().is_valid());
    }

    #[test]
    fn action_quotients() {
        let c = interval();
        assert_eq!(c.quotient_above_action(None), c);
        assert!(c.quotient_above_action(Some(&int(10))).is_empty());
        let q = c.quotient_above_action(Some(&int(2)));
        assert_eq!(q.len(), 1);
        assert_eq!(q.homology(1).unwrap().dimension, 1);
        assert_eq!(c.homology(1).unwrap().dimension, 0);
    }

    #[test]
    fn truncation_beyond_top_level_is_identity() {
        let c = interval();
        assert_eq!(c.truncate_filtration(7), c);
    }

    #[test]
    fn chain_formatting() {
        let c = interval();
        let v = SparseVector::from_entries([(0, int(1)), (1, int(-2))]);
        assert_eq!(c.format_chain(&v), "a - 2·b");
        assert_eq!(c.format_chain(&SparseVector::new()), "0");
    }
}
