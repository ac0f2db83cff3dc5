use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{format_b_combination, generators_up_to, BGenerator, BTables, BoError, Combination};
use crate::complexes::{BasisElement, GradedFilteredComplex, ValidationReport};
use crate::floer::HamiltonianParams;
use crate::linalg::{int, Rational, SparseVector};
use crate::novikov::LaurentElement;

/// A window of `QB`: levels `s ∈ levels` and total degrees in `degrees`.
///
/// The element `(γ, s)` stands for `γt^{−s}`, with total degree
/// `deg γ − 4s` and action `A(γ) − s`. Levels above the window are divided
/// out, levels below it are a subcomplex that is kept out; likewise for
/// degrees. With `levels.0 = 0` and the lower degree bound at `−4·levels.1`
/// nothing is cut from below, and the window is the subcomplex of
/// `QB/QB^{(μ)}` in total degrees `≤ degrees.1`.
#[derive(Debug, Clone)]
pub struct QbComplex {
    pub complex: GradedFilteredComplex,
    pub elements: Vec<(BGenerator, u32)>,
    pub levels: (u32, u32),
    pub degrees: (i64, i64),
    index: BTreeMap<(BGenerator, u32), usize>,
}

pub fn qb_label(g: BGenerator, s: u32) -> String {
    if s == 0 {
        alloc::format!("{g}")
    } else {
        alloc::format!("{g}·t^-{s}")
    }
}

impl QbComplex {
    pub fn index_of(&self, g: BGenerator, s: u32) -> Option<usize> {
        self.index.get(&(g, s)).copied()
    }

    /// `Σ q·γt^{−s}` as a vector; terms outside the window are dropped.
    pub fn chain(&self, terms: &[(BGenerator, u32, Rational)]) -> SparseVector {
        let mut v = SparseVector::new();
        for (g, s, q) in terms {
            if let Some(i) = self.index_of(*g, *s) {
                v.add_at(i, q.clone());
            }
        }
        v
    }

    /// Largest multiplicity present.
    pub fn k_max(&self) -> u64 {
        self.elements.iter().filter_map(|(g, _)| g.k()).max().unwrap_or(0)
    }

    /// Coefficients of `chain` as elements of `Λ`, one per generator of `B`.
    pub fn laurent_view(&self, chain: &SparseVector) -> BTreeMap<BGenerator, LaurentElement> {
        laurent_view(self, chain)
    }
}

/// Builds a window of `QB` without validating it.
pub fn assemble_window(
    tables: &BTables,
    p: &HamiltonianParams,
    levels: (u32, u32),
    degrees: (i64, i64),
) -> Result<QbComplex, BoError> {
    let mut elements = Vec::new();
    for s in levels.0..=levels.1 {
        let shift = 4 * s as i64;
        for d in (degrees.0 + shift).max(0)..=degrees.1 + shift {
            elements.extend(BGenerator::in_degree(d).into_iter().map(|g| (g, s)));
        }
    }
    let index: BTreeMap<(BGenerator, u32), usize> = elements.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let basis = elements
        .iter()
        .map(|&(g, s)| {
            BasisElement::new(qb_label(g, s), g.degree() - 4 * s as i64, s, g.action(p) - int(s as i64))
                .with_perturbation(g.perturbation())
        })
        .collect();
    let mut entries = Vec::new();
    for (i, &(g, s)) in elements.iter().enumerate() {
        for (l, target_level) in [(0, s), (1, s + 1)] {
            for (h, q) in tables.d(l, g) {
                if let Some(&j) = index.get(&(h, target_level)) {
                    entries.push((i, j, q));
                }
            }
        }
    }
    let complex = GradedFilteredComplex::new(basis, entries)?;
    Ok(QbComplex { complex, elements, levels, degrees, index })
}

/// `QB/QB^{(μ)}` in total degrees `≤ 2k_max − 4μ`, validated.
///
/// At level `μ` this uses generators of `B` up to degree `2k_max`, so
/// `k_max` is the largest multiplicity of `m̌, m̂` that appears.
pub fn assemble_qb(k_max: u64, mu: u32, p: &HamiltonianParams) -> Result<QbComplex, BoError> {
    assemble_qb_with(&BTables::default(), k_max, mu, p)
}

pub fn assemble_qb_with(tables: &BTables, k_max: u64, mu: u32, p: &HamiltonianParams) -> Result<QbComplex, BoError> {
    let top = 2 * k_max as i64 - 4 * mu as i64;
    let qb = assemble_window(tables, p, (0, mu), (-4 * mu as i64, top))?;
    let report = qb.complex.validate();
    if let Some(first) = report.violations.first() {
        return Err(BoError::Invalid {
            count: report.violations.len(),
            first: alloc::format!("{first:?}"),
        });
    }
    Ok(qb)
}

/// The identities `d₀² = 0`, `d₁d₀ + d₀d₁ = 0` and `d₁² = 0` checked on the
/// tables, plus the four complex invariants on the assembled window.
#[derive(Debug, Clone, Serialize)]
pub struct StructuralReport {
    pub k_max: u64,
    pub mu: u32,
    pub generators: usize,
    pub elements: usize,
    /// Generators `γ` with `d₀d₀γ ≠ 0`, with the offending combination.
    pub d0_squared: Vec<(String, String)>,
    pub anticommutator: Vec<(String, String)>,
    pub d1_squared: Vec<(String, String)>,
    pub validation: ValidationReport,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.d0_squared.is_empty() && self.anticommutator.is_empty() && self.d1_squared.is_empty() && self.validation.is_valid()
    }
}

fn add(a: &Combination, b: &Combination) -> Combination {
    let mut out = a.clone();
    for (g, q) in b {
        *out.entry(*g).or_insert_with(Rational::zero) += q;
    }
    out.retain(|_, q| !q.is_zero());
    out
}

pub fn structural_report(tables: &BTables, k_max: u64, mu: u32, p: &HamiltonianParams) -> Result<StructuralReport, BoError> {
    let gens = generators_up_to(k_max);
    let mut d0_squared = Vec::new();
    let mut anticommutator = Vec::new();
    let mut d1_squared = Vec::new();
    for &g in &gens {
        let unit: Combination = [(g, Rational::one())].into_iter().collect();
        let a = tables.apply(0, &tables.apply(0, &unit));
        if !a.is_empty() {
            d0_squared.push((alloc::format!("{g}"), format_b_combination(&a)));
        }
        let b = add(&tables.apply(1, &tables.apply(0, &unit)), &tables.apply(0, &tables.apply(1, &unit)));
        if !b.is_empty() {
            anticommutator.push((alloc::format!("{g}"), format_b_combination(&b)));
        }
        let c = tables.apply(1, &tables.apply(1, &unit));
        if !c.is_empty() {
            d1_squared.push((alloc::format!("{g}"), format_b_combination(&c)));
        }
    }
    let top = 2 * k_max as i64 - 4 * mu as i64;
    let qb = assemble_window(tables, p, (0, mu), (-4 * mu as i64, top))?;
    Ok(StructuralReport {
        k_max,
        mu,
        generators: gens.len(),
        elements: qb.complex.len(),
        d0_squared,
        anticommutator,
        d1_squared,
        validation: qb.complex.validate(),
    })
}

/// Coefficients of a chain as elements of `Λ`: `γt^{−s}` contributes `t^{−s}`
/// to the coefficient of `γ`.
pub fn laurent_view(qb: &QbComplex, chain: &SparseVector) -> BTreeMap<BGenerator, LaurentElement> {
    let window = (-(qb.levels.1 as i64), -(qb.levels.0 as i64));
    let mut out: BTreeMap<BGenerator, LaurentElement> = BTreeMap::new();
    for (i, q) in chain.iter() {
        let (g, s) = qb.elements[i];
        out.entry(g)
            .or_insert_with(|| LaurentElement::zero(window.0, window.1).expect("levels are ordered"))
            .add_term(-(s as i64), q.clone());
    }
    out.retain(|_, e| !e.is_zero());
    out
}

/// `d = d₀ + t^{−1}d₁` on `Λ`-coefficients. The flag reports whether
/// multiplying by `t^{−1}` pushed anything past the window.
pub fn laurent_differential(
    tables: &BTables,
    coefficients: &BTreeMap<BGenerator, LaurentElement>,
) -> (BTreeMap<BGenerator, LaurentElement>, bool) {
    let mut out: BTreeMap<BGenerator, LaurentElement> = BTreeMap::new();
    let mut truncated = false;
    for (g, lambda) in coefficients {
        let window = lambda.window();
        let t_inv = LaurentElement::monomial(-1, Rational::one(), window).expect("window is non-empty");
        let shifted = t_inv.mul(lambda).expect("same window");
        if !tables.d1(*g).is_empty() {
            truncated |= shifted.truncated();
        }
        for (l, coeff) in [(0, lambda), (1, &shifted)] {
            for (h, q) in tables.d(l, *g) {
                let term = coeff.scale(&q);
                let slot = out.entry(h).or_insert_with(|| LaurentElement::zero(window.0, window.1).expect("non-empty"));
                *slot = slot.add(&term).expect("same window");
            }
        }
    }
    out.retain(|_, e| !e.is_zero());
    (out, truncated)
}
