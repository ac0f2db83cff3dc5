use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use serde::Serialize;

use super::assemble::{assemble_qb_with, assemble_window, QbComplex};
use super::{format_b_combination, BGenerator, BTables, BoError, Combination};
use crate::complexes::{ChainMap, GradedFilteredComplex};
use crate::floer::{HamiltonianParams, Resonance};
use crate::linalg::{rank, Rational, SparseMatrix, SparseVector};

/// `(B, d₀)` in degrees `0..=top`, validated against `p`'s action order.
pub fn b_complex(tables: &BTables, top: i64, p: &HamiltonianParams) -> Result<QbComplex, BoError> {
    let b = assemble_window(tables, p, (0, 0), (0, top))?;
    let report = b.complex.validate();
    if let Some(first) = report.violations.first() {
        return Err(BoError::Invalid { count: report.violations.len(), first: alloc::format!("{first:?}") });
    }
    Ok(b)
}

/// The listed generator of `H_j(B, d₀)`: `x₀`, `m̌₁`, `x₂`, `M̌_k − m̌_{k+1}`
/// in degree `2k+1` and `M̂_k` in degree `2k+2`.
pub fn expected_b_representative(j: i64) -> Combination {
    let one = Rational::one();
    match j {
        0 => [(BGenerator::X0, one)].into_iter().collect(),
        1 => [(BGenerator::m_check(1), one)].into_iter().collect(),
        2 => [(BGenerator::X2, one)].into_iter().collect(),
        j if j >= 3 && j % 2 == 1 => {
            let k = ((j - 1) / 2) as u64;
            [(BGenerator::big_m_check(k), one.clone()), (BGenerator::m_check(k + 1), -one)].into_iter().collect()
        }
        j if j >= 4 => [(BGenerator::big_m_hat(((j - 2) / 2) as u64), one)].into_iter().collect(),
        _ => Combination::new(),
    }
}

fn to_vector(qb: &QbComplex, c: &Combination, level: u32) -> SparseVector {
    let terms: Vec<_> = c.iter().map(|(g, q)| (*g, level, q.clone())).collect();
    qb.chain(&terms)
}

#[derive(Debug, Clone, Serialize)]
pub struct BHomologyRow {
    pub degree: i64,
    pub dimension: usize,
    pub representative: String,
    pub expected: String,
    /// The expected chain is a cycle generating the homology.
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BHomologyTable {
    pub j_max: i64,
    pub k_max: u64,
    /// Generators of `B` up to this degree were used.
    pub degree_ceiling: i64,
    pub rows: Vec<BHomologyRow>,
}

impl BHomologyTable {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.dimension == 1 && r.matches)
    }
}

/// Smallest `k_max` with generators up to degree `j_max + 1`.
fn b_padding(j_max: i64) -> u64 {
    ((j_max + 2) / 2).max(1) as u64
}

pub fn homology_of_b(j_max: i64) -> Result<BHomologyTable, BoError> {
    homology_of_b_with(j_max, b_padding(j_max))
}

/// `H_j(B, d₀)` for `0 ≤ j ≤ j_max`, using generators with `k ≤ k_max`.
pub fn homology_of_b_with(j_max: i64, k_max: u64) -> Result<BHomologyTable, BoError> {
    let needed = b_padding(j_max);
    if k_max < needed {
        return Err(BoError::Padding { k_max, degree: j_max, needed });
    }
    let top = 2 * k_max as i64;
    let b = b_complex(&BTables::default(), top, &HamiltonianParams::reference())?;
    let mut rows = Vec::new();
    for j in 0..=j_max {
        let h = b.complex.homology(j)?;
        let expected = expected_b_representative(j);
        let matches = h.generated_by(&to_vector(&b, &expected, 0));
        let representative = h.representatives.first().map_or_else(|| String::from("0"), |v| b.complex.format_chain(v));
        rows.push(BHomologyRow { degree: j, dimension: h.dimension, representative, expected: format_b_combination(&expected), matches });
    }
    Ok(BHomologyTable { j_max, k_max, degree_ceiling: top, rows })
}

/// Matrix of `[d₁]: H_j(B, d₀) → H_{j+3}(B, d₀)` in the homology bases.
pub fn d1_on_b_homology(j: i64) -> Result<SparseMatrix, BoError> {
    let tables = BTables::default();
    let b = b_complex(&tables, j + 5, &HamiltonianParams::reference())?;
    let images = b
        .elements
        .iter()
        .map(|&(g, _)| to_vector(&b, &tables.d1(g), 0))
        .collect();
    let map = ChainMap::new(3, images);
    Ok(GradedFilteredComplex::induced_map_on_homology(&map, &b.complex, &b.complex, j)?)
}

#[derive(Debug, Clone)]
pub struct MainLemmaOptions {
    /// Defaults to `2μ + 2`, the least value covering total degree 3.
    pub k_max: Option<u64>,
    pub max_page: u32,
    /// Run the action-window check (d) when `μ₋ < μ₊`.
    pub squeeze: bool,
    pub tables: BTables,
}

impl Default for MainLemmaOptions {
    fn default() -> Self {
        Self { k_max: None, max_page: 3, squeeze: true, tables: BTables::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.into(), passed, detail }
}

/// `H₃(C_{*,s−1}) → H₂(C_{*,s}) → H₁(C_{*,s+1})` on the first page.
#[derive(Debug, Clone, Serialize)]
pub struct SliceExactness {
    pub level: u32,
    pub e1_dimension: usize,
    pub incoming_rank: usize,
    pub outgoing_rank: usize,
    pub homology: usize,
    pub e2_dimension: usize,
    pub expected: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SqueezeReport {
    pub mu_minus: i64,
    pub mu_plus: i64,
    pub top_level: u32,
    pub elements: usize,
    /// `dim H₂` of the quotient by action `< 1`, degrees 1..3.
    pub h2_dimension: usize,
    pub generated_by_x2: bool,
    /// Elements breaking `QB^{(μ₊)} ⊂ QD ⊂ QB^{(μ₋)}` in degrees 1..3.
    pub inclusion_violations: usize,
    /// `H₂(QB/QB^{(μ₊)}) → H₂(QB/QB^{(μ₋)})` is invertible.
    pub isomorphism: bool,
    /// Cutting by action and truncating at `μ₊` commute.
    pub commutes: bool,
}

impl SqueezeReport {
    pub fn passed(&self) -> bool {
        self.h2_dimension == 1 && self.generated_by_x2 && self.inclusion_violations == 0 && self.isomorphism && self.commutes
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MainLemmaReport {
    pub mu: u32,
    pub k_max: u64,
    pub degree_ceiling: i64,
    pub params: HamiltonianParams,
    pub resonances: Vec<Resonance>,
    pub elements: usize,
    pub h2_dimension: usize,
    pub h2_representative: String,
    pub generated_by_x2: bool,
    pub degeneration_page: u32,
    pub e2_degree2_total: usize,
    pub e2_degree2_levels: Vec<u32>,
    pub slices: Vec<SliceExactness>,
    pub squeeze: Option<SqueezeReport>,
    pub checks: Vec<Check>,
}

impl MainLemmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn verify_main_lemma(mu: u32, p: &HamiltonianParams) -> Result<MainLemmaReport, BoError> {
    verify_main_lemma_with(mu, p, &MainLemmaOptions::default())
}

pub fn verify_main_lemma_with(mu: u32, p: &HamiltonianParams, opts: &MainLemmaOptions) -> Result<MainLemmaReport, BoError> {
    if mu < 1 {
        return Err(BoError::MuTooSmall(mu));
    }
    let needed = 2 * mu as u64 + 2;
    let k_max = opts.k_max.unwrap_or(needed);
    if k_max < needed {
        return Err(BoError::Padding { k_max, degree: 3, needed });
    }
    let qb = assemble_qb_with(&opts.tables, k_max, mu, p)?;
    let c = &qb.complex;
    let ceiling = qb.degrees.1;
    let mut checks = Vec::new();

    // (a) direct homology
    let h2 = c.homology(2)?;
    let x2 = to_vector(&qb, &[(BGenerator::X2, Rational::one())].into_iter().collect(), 0);
    let generated_by_x2 = h2.generated_by(&x2);
    let h2_representative = h2.representatives.first().map_or_else(|| String::from("0"), |v| c.format_chain(v));
    checks.push(check(
        "a.direct-h2",
        h2.dimension == 1 && generated_by_x2,
        alloc::format!("dim H2 = {}, generated by x2: {generated_by_x2}", h2.dimension),
    ));

    // (b) spectral sequence
    let ss = c.spectral_sequence(opts.max_page)?;
    let e1 = ss.page(1).expect("first page");
    let e2 = ss.page(2).expect("pages run past the filtration length");
    let e2_degree2_levels: Vec<u32> = e2.terms.keys().filter(|(j, _)| *j == 2).map(|(_, s)| *s).collect();
    let e2_degree2_total = e2.total(2);
    checks.push(check(
        "b.degeneration",
        ss.degeneration_page == 2,
        alloc::format!("degeneration page {}", ss.degeneration_page),
    ));
    checks.push(check(
        "b.e2-degree-2",
        e2_degree2_total == 1 && e2_degree2_levels == [0],
        alloc::format!("E2 total {e2_degree2_total} at levels {e2_degree2_levels:?}"),
    ));
    let mut e1_mismatch = Vec::new();
    for j in 1..=3 {
        for s in 0..=mu {
            if e1.dimension(j, s) != 1 {
                e1_mismatch.push((j, s, e1.dimension(j, s)));
            }
        }
    }
    checks.push(check(
        "b.e1-is-b-homology",
        e1_mismatch.is_empty(),
        alloc::format!("E1(j,s) = H_(j+4s)(B) = 1 for j in 1..3, mismatches {e1_mismatch:?}"),
    ));
    let direct = c.betti_numbers()?;
    let limit = ss.limit_totals();
    let limit_ok = direct.iter().all(|(j, d)| limit.get(j).copied().unwrap_or(0) == *d);
    checks.push(check("b.limit-equals-homology", limit_ok && ss.rank_consistent, alloc::format!("rank bookkeeping {}", ss.rank_consistent)));

    // (c) exactness of the E1 rows, with end cases s = 0 and s = μ
    let mut slices = Vec::new();
    for s in 0..=mu {
        let e1_dimension = e1.dimension(2, s);
        let incoming_rank = if s == 0 {
            0
        } else {
            e1.differential_from(3, s - 1).filter(|d| d.target == (2, s)).map_or(0, |d| d.rank)
        };
        let outgoing_rank = e1.differential_from(2, s).map_or(0, |d| d.rank);
        let homology = e1_dimension - incoming_rank - outgoing_rank;
        let expected = usize::from(s == 0);
        let shape = outgoing_rank == 0 && (s == 0 || incoming_rank == e1_dimension);
        let e2_dimension = e2.dimension(2, s);
        slices.push(SliceExactness {
            level: s,
            e1_dimension,
            incoming_rank,
            outgoing_rank,
            homology,
            e2_dimension,
            expected,
            passed: shape && homology == expected && e2_dimension == homology,
        });
    }
    let x2_survives = e1.terms.get(&(2, 0)).is_some_and(|t| t.class_of(&x2).is_ok_and(|v| v.iter().any(|q| !q.is_zero())));
    let bad: Vec<u32> = slices.iter().filter(|s| !s.passed).map(|s| s.level).collect();
    checks.push(check(
        "c.exactness",
        bad.is_empty() && x2_survives,
        alloc::format!("failing levels {bad:?}, [x2] spans E1(2,0): {x2_survives}"),
    ));

    // (d) the action window
    let squeeze = if opts.squeeze { squeeze_check(&opts.tables, p)? } else { None };
    if let Some(sq) = &squeeze {
        checks.push(check(
            "d.squeeze",
            sq.passed(),
            alloc::format!(
                "mu- = {}, mu+ = {}, dim H2 = {}, iso {}, inclusion violations {}",
                sq.mu_minus, sq.mu_plus, sq.h2_dimension, sq.isomorphism, sq.inclusion_violations
            ),
        ));
    }

    Ok(MainLemmaReport {
        mu,
        k_max,
        degree_ceiling: ceiling,
        params: p.clone(),
        resonances: p.resonances(),
        elements: c.len(),
        h2_dimension: h2.dimension,
        h2_representative,
        generated_by_x2,
        degeneration_page: ss.degeneration_page,
        e2_degree2_total,
        e2_degree2_levels,
        slices,
        squeeze,
        checks,
    })
}

/// Degrees 1..3 of `QB` over levels `0..=μ₊+2`, cut at action 1.
fn squeeze_check(tables: &BTables, p: &HamiltonianParams) -> Result<Option<SqueezeReport>, BoError> {
    let w = p.mu_window();
    if w.mu_minus >= w.mu_plus || w.mu_minus < 0 {
        return Ok(None);
    }
    let (mu_minus, mu_plus) = (w.mu_minus as u32, w.mu_plus as u32);
    let top_level = mu_plus + 2;
    let qb = assemble_window(tables, p, (0, top_level), (1, 3))?;
    let c = &qb.complex;
    let one = Rational::one();

    let quotient = c.quotient_above_action(Some(&one));
    let h2 = quotient.homology(2)?;
    let generated_by_x2 = quotient.index_of("x2").is_some_and(|i| h2.generated_by(&SparseVector::unit(i)));

    let inclusion_violations = c
        .basis()
        .iter()
        .filter(|e| (e.filtration > mu_plus && e.action >= one) || (e.action < one && e.filtration <= mu_minus))
        .count();

    let plus = c.truncate_filtration(mu_plus);
    let minus = c.truncate_filtration(mu_minus);
    let map = ChainMap::by_label(&plus, &minus);
    let m = GradedFilteredComplex::induced_map_on_homology(&map, &plus, &minus, 2)?;
    let isomorphism = m.rows() == m.cols() && rank(&m) == m.rows();
    let commutes = plus.quotient_above_action(Some(&one)) == quotient;

    Ok(Some(SqueezeReport {
        mu_minus: w.mu_minus,
        mu_plus: w.mu_plus,
        top_level,
        elements: c.len(),
        h2_dimension: h2.dimension,
        generated_by_x2,
        inclusion_violations,
        isomorphism,
        commutes,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn b_homology_is_one_dimensional_with_listed_generators() {
        let table = homology_of_b(12).unwrap();
        assert!(table.passed(), "{table:?}");
        assert!(homology_of_b_with(12, 3).is_err());
    }

    #[test]
    fn d1_is_zero_on_even_and_onto_on_odd_degrees() {
        for k in 1..=3 {
            assert_eq!(rank(&d1_on_b_homology(2 * k).unwrap()), 0);
            assert_eq!(rank(&d1_on_b_homology(2 * k + 1).unwrap()), 1);
        }
    }

    #[test]
    fn d1_of_the_odd_class_is_twice_the_next_hat() {
        let tables = BTables::default();
        for k in 1..=5 {
            let c = expected_b_representative(2 * k as i64 + 1);
            let mut image = tables.apply(1, &c);
            // m̂_{k+2} + M̂_{k+1} is a boundary
            for (g, q) in tables.d0(BGenerator::big_m_check(k + 2)) {
                *image.entry(g).or_insert_with(Rational::zero) += q / int(2);
            }
            image.retain(|_, q| !q.is_zero());
            let want: Combination = [(BGenerator::big_m_hat(k + 1), int(2))].into_iter().collect();
            assert_eq!(image, want, "k = {k}");
        }
    }

    #[test]
    fn main_lemma_small_mu() {
        let p = HamiltonianParams::reference();
        for mu in [1, 2, 3, 5] {
            let report = verify_main_lemma_with(mu, &p, &MainLemmaOptions { squeeze: false, ..Default::default() }).unwrap();
            assert!(report.passed(), "mu = {mu}: {:?}", report.checks);
            assert_eq!(report.degeneration_page, 2);
        }
        assert!(matches!(verify_main_lemma(0, &p), Err(BoError::MuTooSmall(0))));
    }

    #[test]
    fn squeeze_at_reference_parameters() {
        let p = HamiltonianParams::reference();
        let sq = squeeze_check(&BTables::default(), &p).unwrap().expect("window is non-empty");
        assert!(sq.passed(), "{sq:?}");
    }
}
