//! The complex `(B, d₀)` and its deformation `QB = B ⊗ Λ` with
//! `d = d₀ + t^{−1}d₁`.
//!
//! ```text
//! d₀ m̌_k = 2m̂_{k−1} + 2M̂_{k−2}   (k ≥ 3)     d₁ m̌_k = m̂_{k+1}
//! d₀ m̌₂  = 2m̂₁ + 2x₂                          d₁ M̌_k = M̂_{k+1}
//! d₀ m̌₁  = 0                                   d₁ m̂_k = d₁ M̂_k = 0
//! d₀ M̌_k = 2m̂_k + 2M̂_{k−1}       (k ≥ 2)     d₁ x₀ = d₁ x₂ = 0
//! d₀ M̌₁  = 2m̂₁ + 2x₂
//! d₀ m̂_k = d₀ M̂_k = d₀ x₀ = d₀ x₂ = 0
//! ```
//!
//! `d_l = 0` for `l ≥ 2`. Two table entries are zero for a reason rather
//! than by default: `(d₀m̌₁, x₀)` and `(d₁m̂_k, M̌_{k+1})`. Both are stored
//! explicitly so they can be perturbed.

mod assemble;
mod counterfactual;
mod verify;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::complexes::ComplexError;
use crate::floer::{CritPoint, HamiltonianParams};
use crate::linalg::{int, Rational};

pub use assemble::{
    assemble_qb, assemble_qb_with, assemble_window, laurent_differential, laurent_view, qb_label, structural_report, QbComplex,
    StructuralReport,
};
pub use counterfactual::{counterfactual_suite, sign_patterns, CounterfactualReport, Mutation, MutationOutcome, SignPatternOutcome};
pub use verify::{
    b_complex, d1_on_b_homology, expected_b_representative, homology_of_b, homology_of_b_with, verify_main_lemma,
    verify_main_lemma_with, BHomologyRow, BHomologyTable, Check, MainLemmaOptions, MainLemmaReport, SliceExactness,
    SqueezeReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoError {
    #[error("mu = {0} but the pipeline needs mu >= 1")]
    MuTooSmall(u32),
    #[error("k_max = {k_max} is too small: degree {degree} needs k_max >= {needed}")]
    Padding { k_max: u64, degree: i64, needed: u64 },
    #[error("assembled complex is invalid: {count} violation(s), first: {first}")]
    Invalid { count: usize, first: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Generator of `B`, the upper generators with `t`-degree 0 plus `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BGenerator {
    X0,
    X2,
    Orbit { point: CritPoint, k: u64 },
}

pub type Combination = BTreeMap<BGenerator, Rational>;

impl BGenerator {
    pub fn orbit(point: CritPoint, k: u64) -> Self {
        BGenerator::Orbit { point, k }
    }

    pub fn m_check(k: u64) -> Self {
        Self::orbit(CritPoint::MinCheck, k)
    }

    pub fn m_hat(k: u64) -> Self {
        Self::orbit(CritPoint::MinHat, k)
    }

    pub fn big_m_check(k: u64) -> Self {
        Self::orbit(CritPoint::MaxCheck, k)
    }

    pub fn big_m_hat(k: u64) -> Self {
        Self::orbit(CritPoint::MaxHat, k)
    }

    pub fn degree(self) -> i64 {
        match self {
            BGenerator::X0 => 0,
            BGenerator::X2 => 2,
            BGenerator::Orbit { point, k } => 2 * k as i64 + point.offset(),
        }
    }

    pub fn k(self) -> Option<u64> {
        match self {
            BGenerator::Orbit { k, .. } => Some(k),
            _ => None,
        }
    }

    /// Action of `γ` before the `t`-shift: `E` on `U`, `E + k(r−ε)` on orbits.
    pub fn action(self, p: &HamiltonianParams) -> Rational {
        match self {
            BGenerator::X0 | BGenerator::X2 => p.energy.clone(),
            BGenerator::Orbit { k, .. } => &p.energy + int(k as i64) * (&p.r - &p.eps),
        }
    }

    /// Tie-break inside one Morse–Bott family: the Morse function value.
    pub fn perturbation(self) -> i64 {
        match self {
            BGenerator::X0 => 2,
            BGenerator::X2 => 4,
            BGenerator::Orbit { point, .. } => point.morse_index(),
        }
    }

    /// Every generator of `B` in the given degree (negative degrees are empty).
    pub fn in_degree(d: i64) -> Vec<BGenerator> {
        let mut out = Vec::new();
        match d {
            0 => out.push(BGenerator::X0),
            2 => out.push(BGenerator::X2),
            _ => {}
        }
        for point in CritPoint::ALL {
            let twice_k = d - point.offset();
            if twice_k >= 2 && twice_k % 2 == 0 {
                out.push(Self::orbit(point, (twice_k / 2) as u64));
            }
        }
        out.sort();
        out
    }

    /// Parses the labels produced by `Display`.
    pub fn parse(label: &str) -> Option<Self> {
        match label {
            "x0" => return Some(BGenerator::X0),
            "x2" => return Some(BGenerator::X2),
            _ => {}
        }
        let point = CritPoint::ALL.into_iter().find(|p| label.starts_with(p.stem()))?;
        let k: u64 = label[point.stem().len()..].parse().ok()?;
        (k >= 1).then_some(Self::orbit(point, k))
    }
}

impl fmt::Display for BGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BGenerator::X0 => f.write_str("x0"),
            BGenerator::X2 => f.write_str("x2"),
            BGenerator::Orbit { point, k } => write!(f, "{}{k}", point.stem()),
        }
    }
}

/// Which of the two differentials a table entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Table {
    D0,
    D1,
}

/// One coefficient `(d γ, γ')` of the printed tables, zero entries included
/// when the zero is a statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub table: Table,
    pub from: BGenerator,
    pub to: BGenerator,
    #[serde(with = "crate::linalg::serde_rational")]
    pub coefficient: Rational,
}

/// The two differentials, with optional overrides for counterfactual runs.
///
/// `d1_m_sign` and `d1_big_m_sign` are the coefficients of `d₁m̌_k → m̂_{k+1}`
/// and `d₁M̌_k → M̂_{k+1}`; overrides replace single entries afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BTables {
    pub d1_m_sign: Rational,
    pub d1_big_m_sign: Rational,
    overrides: BTreeMap<(Table, BGenerator, BGenerator), Rational>,
}

impl Default for BTables {
    fn default() -> Self {
        Self { d1_m_sign: Rational::one(), d1_big_m_sign: Rational::one(), overrides: BTreeMap::new() }
    }
}

fn put(out: &mut Combination, g: BGenerator, q: Rational) {
    if !q.is_zero() {
        *out.entry(g).or_insert_with(Rational::zero) += q;
    }
}

impl BTables {
    pub fn with_signs(m: Rational, big_m: Rational) -> Self {
        Self { d1_m_sign: m, d1_big_m_sign: big_m, ..Self::default() }
    }

    /// Sets a single coefficient, whatever the printed table says.
    pub fn with_override(mut self, table: Table, from: BGenerator, to: BGenerator, q: Rational) -> Self {
        self.overrides.insert((table, from, to), q);
        self
    }

    pub fn is_standard(&self) -> bool {
        *self == Self::default()
    }

    fn apply_overrides(&self, table: Table, from: BGenerator, mut out: Combination) -> Combination {
        for ((t, f, to), q) in self.overrides.range((table, from, BGenerator::X0)..) {
            if *t != table || *f != from {
                break;
            }
            out.insert(*to, q.clone());
        }
        out.retain(|_, q| !q.is_zero());
        out
    }

    pub fn d0(&self, g: BGenerator) -> Combination {
        let mut out = Combination::new();
        if let BGenerator::Orbit { point, k } = g {
            match (point, k) {
                (CritPoint::MinCheck, 1) => {}
                (CritPoint::MinCheck, 2) | (CritPoint::MaxCheck, 1) => {
                    put(&mut out, BGenerator::m_hat(1), int(2));
                    put(&mut out, BGenerator::X2, int(2));
                }
                (CritPoint::MinCheck, k) => {
                    put(&mut out, BGenerator::m_hat(k - 1), int(2));
                    put(&mut out, BGenerator::big_m_hat(k - 2), int(2));
                }
                (CritPoint::MaxCheck, k) => {
                    put(&mut out, BGenerator::m_hat(k), int(2));
                    put(&mut out, BGenerator::big_m_hat(k - 1), int(2));
                }
                (CritPoint::MinHat | CritPoint::MaxHat, _) => {}
            }
        }
        self.apply_overrides(Table::D0, g, out)
    }

    pub fn d1(&self, g: BGenerator) -> Combination {
        let mut out = Combination::new();
        match g {
            BGenerator::Orbit { point: CritPoint::MinCheck, k } => put(&mut out, BGenerator::m_hat(k + 1), self.d1_m_sign.clone()),
            BGenerator::Orbit { point: CritPoint::MaxCheck, k } => {
                put(&mut out, BGenerator::big_m_hat(k + 1), self.d1_big_m_sign.clone())
            }
            _ => {}
        }
        self.apply_overrides(Table::D1, g, out)
    }

    /// `d_l` for `l ≥ 2` vanishes identically.
    pub fn d(&self, l: u32, g: BGenerator) -> Combination {
        match l {
            0 => self.d0(g),
            1 => self.d1(g),
            _ => Combination::new(),
        }
    }

    /// Extends `d_l` linearly.
    pub fn apply(&self, l: u32, c: &Combination) -> Combination {
        let mut out = Combination::new();
        for (g, q) in c {
            for (h, r) in self.d(l, *g) {
                put(&mut out, h, q * r);
            }
        }
        out.retain(|_, q| !q.is_zero());
        out
    }
}

/// The standard `d₀`.
pub fn d0(g: BGenerator) -> Combination {
    BTables::default().d0(g)
}

/// The standard `d₁`.
pub fn d1(g: BGenerator) -> Combination {
    BTables::default().d1(g)
}

/// Generators of `B` with multiplicity at most `k_max`, plus `x₀, x₂`.
pub fn generators_up_to(k_max: u64) -> Vec<BGenerator> {
    let mut out = alloc::vec![BGenerator::X0, BGenerator::X2];
    for k in 1..=k_max {
        out.extend(CritPoint::ALL.into_iter().map(|p| BGenerator::orbit(p, k)));
    }
    out
}

/// Every printed coefficient for generators with `k ≤ k_max`, including the
/// two meaningful zeros.
pub fn table_entries(k_max: u64) -> Vec<TableEntry> {
    let tables = BTables::default();
    let mut out = Vec::new();
    for g in generators_up_to(k_max) {
        for (to, q) in tables.d0(g) {
            out.push(TableEntry { table: Table::D0, from: g, to, coefficient: q });
        }
        for (to, q) in tables.d1(g) {
            out.push(TableEntry { table: Table::D1, from: g, to, coefficient: q });
        }
        match g {
            BGenerator::Orbit { point: CritPoint::MinCheck, k: 1 } => {
                out.push(TableEntry { table: Table::D0, from: g, to: BGenerator::X0, coefficient: Rational::zero() });
            }
            BGenerator::Orbit { point: CritPoint::MinHat, k } => {
                out.push(TableEntry {
                    table: Table::D1,
                    from: g,
                    to: BGenerator::big_m_check(k + 1),
                    coefficient: Rational::zero(),
                });
            }
            _ => {}
        }
    }
    out
}

pub(crate) fn format_b_combination(c: &Combination) -> String {
    let labels: Vec<(String, &Rational)> = c.iter().map(|(g, q)| (alloc::format!("{g}"), q)).collect();
    crate::complexes::format_combination(labels.iter().map(|(l, q)| (l.as_str(), *q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comb(terms: &[(BGenerator, i64)]) -> Combination {
        terms.iter().map(|(g, q)| (*g, int(*q))).collect()
    }

    #[test]
    fn printed_d0_values() {
        assert!(d0(BGenerator::m_check(1)).is_empty());
        assert_eq!(d0(BGenerator::big_m_check(1)), comb(&[(BGenerator::m_hat(1), 2), (BGenerator::X2, 2)]));
        assert_eq!(d0(BGenerator::m_check(4)), comb(&[(BGenerator::m_hat(3), 2), (BGenerator::big_m_hat(2), 2)]));
        assert!(d0(BGenerator::X2).is_empty());
    }

    #[test]
    fn printed_d1_values() {
        assert_eq!(d1(BGenerator::m_check(2)), comb(&[(BGenerator::m_hat(3), 1)]));
        assert!(d1(BGenerator::big_m_hat(5)).is_empty());
        assert!(d1(BGenerator::X2).is_empty());
        assert!(BTables::default().d(2, BGenerator::m_check(3)).is_empty());
    }

    #[test]
    fn degrees_follow_the_table() {
        assert_eq!(BGenerator::m_check(3).degree(), 5);
        assert_eq!(BGenerator::m_hat(3).degree(), 6);
        assert_eq!(BGenerator::big_m_check(3).degree(), 7);
        assert_eq!(BGenerator::big_m_hat(3).degree(), 8);
        assert_eq!(BGenerator::in_degree(3), alloc::vec![BGenerator::m_check(2), BGenerator::big_m_check(1)]);
        assert_eq!(BGenerator::in_degree(2), alloc::vec![BGenerator::X2, BGenerator::m_hat(1)]);
        assert!(BGenerator::in_degree(-1).is_empty());
    }

    #[test]
    fn labels_round_trip() {
        for g in generators_up_to(12) {
            assert_eq!(BGenerator::parse(&alloc::format!("{g}")), Some(g));
        }
        assert_eq!(BGenerator::parse("mchk0"), None);
    }

    #[test]
    fn overrides_replace_entries() {
        let t = BTables::default().with_override(Table::D0, BGenerator::m_check(1), BGenerator::X0, int(1));
        assert_eq!(t.d0(BGenerator::m_check(1)), comb(&[(BGenerator::X0, 1)]));
        let t = BTables::default().with_override(Table::D1, BGenerator::m_check(2), BGenerator::m_hat(3), int(0));
        assert!(t.d1(BGenerator::m_check(2)).is_empty());
    }

    #[test]
    fn table_lists_the_meaningful_zeros() {
        let entries = table_entries(3);
        assert!(entries.iter().any(|e| e.from == BGenerator::m_check(1) && e.to == BGenerator::X0 && e.coefficient.is_zero()));
        assert!(entries.iter().any(|e| e.table == Table::D1 && e.from == BGenerator::m_hat(2) && e.coefficient.is_zero()));
    }
}
