//! Perturbations of the printed tables.
//!
//! Each coefficient is moved by `±1` and the structural checks are rerun,
//! together with `H₁(B, d₀)`. A mutation counts as detected when one of
//! those fails. The report also says whether some other `H_j(B, d₀)`
//! changed, which is informational only.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::One;
use serde::Serialize;

use super::assemble::{assemble_qb_with, structural_report};
use super::{table_entries, BGenerator, BTables, BoError, Table};
use crate::floer::HamiltonianParams;
use crate::linalg::{int, Rational};

#[derive(Debug, Clone, Serialize)]
pub struct Mutation {
    pub table: Table,
    pub from: BGenerator,
    pub to: BGenerator,
    #[serde(with = "crate::linalg::serde_rational")]
    pub original: Rational,
    #[serde(with = "crate::linalg::serde_rational")]
    pub mutated: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct MutationOutcome {
    pub mutation: Mutation,
    pub d0_squared_ok: bool,
    pub anticommutator_ok: bool,
    pub d1_squared_ok: bool,
    /// Degree, filtration, action and `d² = 0` on the assembled window.
    pub complex_valid: bool,
    /// `None` when `d² ≠ 0` makes homology undefined.
    pub h1_dimension: Option<usize>,
    pub detected: bool,
    pub b_homology_changed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterfactualReport {
    pub k_entries: u64,
    pub k_max: u64,
    pub mu: u32,
    pub outcomes: Vec<MutationOutcome>,
    pub undetected: usize,
}

impl CounterfactualReport {
    pub fn passed(&self) -> bool {
        self.undetected == 0
    }
}

/// Runs every `±1` mutation of the entries with `k ≤ k_entries` (and the
/// `x` rows), checking identities up to `k_max` on `QB/QB^{(μ)}`.
pub fn counterfactual_suite(k_entries: u64, k_max: u64, mu: u32, p: &HamiltonianParams) -> Result<CounterfactualReport, BoError> {
    let b_top = 2 * k_max as i64;
    let mut outcomes = Vec::new();
    for entry in table_entries(k_entries) {
        for delta in [1, -1] {
            let mutated = &entry.coefficient + int(delta);
            let tables = BTables::default().with_override(entry.table, entry.from, entry.to, mutated.clone());
            let structural = structural_report(&tables, k_max, mu, p)?;
            let b = super::assemble::assemble_window(&tables, p, (0, 0), (0, b_top))?;
            let betti: Option<BTreeMap<i64, usize>> = b.complex.betti_numbers().ok();
            let h1_dimension = betti.as_ref().and_then(|m| m.get(&1).copied());
            let b_homology_changed = match &betti {
                Some(m) => m.iter().any(|(j, d)| *j < b_top && *d != 1),
                None => true,
            };
            let d0_squared_ok = structural.d0_squared.is_empty();
            let anticommutator_ok = structural.anticommutator.is_empty();
            let d1_squared_ok = structural.d1_squared.is_empty();
            let complex_valid = structural.validation.is_valid();
            let detected =
                !(d0_squared_ok && anticommutator_ok && d1_squared_ok && complex_valid) || h1_dimension != Some(1);
            outcomes.push(MutationOutcome {
                mutation: Mutation {
                    table: entry.table,
                    from: entry.from,
                    to: entry.to,
                    original: entry.coefficient.clone(),
                    mutated,
                },
                d0_squared_ok,
                anticommutator_ok,
                d1_squared_ok,
                complex_valid,
                h1_dimension,
                detected,
                b_homology_changed,
            });
        }
    }
    let undetected = outcomes.iter().filter(|o| !o.detected).count();
    Ok(CounterfactualReport { k_entries, k_max, mu, outcomes, undetected })
}

#[derive(Debug, Clone, Serialize)]
pub struct SignPatternOutcome {
    #[serde(with = "crate::linalg::serde_rational")]
    pub m_sign: Rational,
    #[serde(with = "crate::linalg::serde_rational")]
    pub big_m_sign: Rational,
    pub structural_ok: bool,
    pub h2_dimension: usize,
    /// `dim H_j` of `QB/QB^{(μ)}` for `j` in `0..=3`.
    pub low_betti: Vec<usize>,
}

/// The four sign choices for `d₁m̌_k → m̂_{k+1}` and `d₁M̌_k → M̂_{k+1}`.
pub fn sign_patterns(k_max: u64, mu: u32, p: &HamiltonianParams) -> Result<Vec<SignPatternOutcome>, BoError> {
    let one = Rational::one();
    let mut out = Vec::new();
    for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let tables = BTables::with_signs(int(a) * &one, int(b) * &one);
        let structural_ok = structural_report(&tables, k_max, mu, p)?.passed();
        let qb = assemble_qb_with(&tables, k_max, mu, p)?;
        let low_betti = (0..=3).map(|j| qb.complex.homology(j).map(|h| h.dimension)).collect::<Result<Vec<_>, _>>()?;
        out.push(SignPatternOutcome {
            m_sign: int(a),
            big_m_sign: int(b),
            structural_ok,
            h2_dimension: low_betti[2],
            low_betti,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn sign_patterns_all_square_to_zero() {
        let p = HamiltonianParams::reference();
        let out = sign_patterns(8, 2, &p).unwrap();
        assert!(out.iter().all(|o| o.structural_ok));
        assert_eq!(out[0].h2_dimension, 1);
        assert_eq!(out[3].h2_dimension, 1);
    }

    #[test]
    fn only_the_zero_entries_are_detected() {
        let p = HamiltonianParams::reference();
        let report = counterfactual_suite(3, 8, 2, &p).unwrap();
        assert_eq!(report.outcomes.len(), 40);
        for o in &report.outcomes {
            assert_eq!(o.detected, o.mutation.original.is_zero(), "{:?}", o.mutation);
            if o.mutation.table == Table::D0 && !o.mutation.original.is_zero() {
                assert!(o.b_homology_changed);
            }
        }
        assert_eq!(report.undetected, 32);
    }
}
