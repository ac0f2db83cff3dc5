//! Floer generators of the Hamiltonian `H_E`: families, Conley–Zehnder
//! indices, actions, the action window lemma and the index/Chern case
//! analysis for the differentials `d_l`.
//!
//! Indices of the non-constant orbits are taken as axioms:
//!
//! ```text
//!          m̌_k    m̂_k   M̌_k    M̂_k
//! upper   2k−1    2k    2k+1   2k+2
//! lower   2k−2   2k−1    2k    2k+1
//! ```
//!
//! and `CZ(γt^{−N}) = CZ(γ) − 4N`, `A(γt^{−N}) = A(γ) − N`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::linalg::{format_rational, int, Rational};

/// Critical point of the Morse function on an orbit family `Z_k ≅ ℝP³`,
/// in order of Morse index `0..=3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CritPoint {
    /// `m̌`, Morse index 0.
    MinCheck,
    /// `m̂`, Morse index 1.
    MinHat,
    /// `M̌`, Morse index 2.
    MaxCheck,
    /// `M̂`, Morse index 3.
    MaxHat,
}

impl CritPoint {
    pub const ALL: [CritPoint; 4] = [CritPoint::MinCheck, CritPoint::MinHat, CritPoint::MaxCheck, CritPoint::MaxHat];

    pub fn morse_index(self) -> i64 {
        self as i64
    }

    /// `j` in `CZ = 2k + j` for upper generators.
    pub fn offset(self) -> i64 {
        self.morse_index() - 1
    }

    /// ASCII stem used in labels: `mchk`, `mhat`, `Mchk`, `Mhat`.
    pub fn stem(self) -> &'static str {
        match self {
            CritPoint::MinCheck => "mchk",
            CritPoint::MinHat => "mhat",
            CritPoint::MaxCheck => "Mchk",
            CritPoint::MaxHat => "Mhat",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CritPoint::MinCheck => "m̌",
            CritPoint::MinHat => "m̂",
            CritPoint::MaxCheck => "M̌",
            CritPoint::MaxHat => "M̂",
        }
    }

    fn from_offset(j: i64) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.offset() == j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorFamily {
    /// Saddle `x₀` of the maximum set `U`.
    X0,
    /// Maximum `x₂` of `U`.
    X2,
    /// Saddle `y₀` of the minimum set `V`.
    Y0,
    /// Minimum `y₋₂` of `V`.
    YMinus2,
    Upper { point: CritPoint, k: u64 },
    Lower { point: CritPoint, k: u64 },
}

impl GeneratorFamily {
    pub fn cz_index(self) -> i64 {
        match self {
            GeneratorFamily::X0 | GeneratorFamily::Y0 => 0,
            GeneratorFamily::X2 => 2,
            GeneratorFamily::YMinus2 => -2,
            GeneratorFamily::Upper { point, k } => 2 * k as i64 + point.offset(),
            GeneratorFamily::Lower { point, k } => 2 * k as i64 + point.offset() - 1,
        }
    }

    pub fn action(self, p: &HamiltonianParams) -> Rational {
        match self {
            GeneratorFamily::X0 | GeneratorFamily::X2 => p.energy.clone(),
            GeneratorFamily::Y0 | GeneratorFamily::YMinus2 => -p.eps.clone(),
            GeneratorFamily::Upper { k, .. } => &p.energy + int(k as i64) * (&p.r - &p.eps),
            GeneratorFamily::Lower { k, .. } => int(k as i64) * &p.r - &p.eps,
        }
    }

    /// Upper generators and `U` sit near the maximum of `H_E`.
    pub fn is_high(self) -> bool {
        matches!(self, GeneratorFamily::X0 | GeneratorFamily::X2 | GeneratorFamily::Upper { .. })
    }

    pub fn multiplicity(self) -> Option<u64> {
        match self {
            GeneratorFamily::Upper { k, .. } | GeneratorFamily::Lower { k, .. } => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for GeneratorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorFamily::X0 => f.write_str("x0"),
            GeneratorFamily::X2 => f.write_str("x2"),
            GeneratorFamily::Y0 => f.write_str("y0"),
            GeneratorFamily::YMinus2 => f.write_str("y-2"),
            GeneratorFamily::Upper { point, k } => write!(f, "{}{k}+", point.stem()),
            GeneratorFamily::Lower { point, k } => write!(f, "{}{k}-", point.stem()),
        }
    }
}

/// `γ t^{−N}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Generator {
    pub family: GeneratorFamily,
    pub t_degree: i64,
}

impl Generator {
    pub fn new(family: GeneratorFamily, t_degree: i64) -> Self {
        Self { family, t_degree }
    }

    pub fn cz_index(&self) -> i64 {
        self.family.cz_index() - 4 * self.t_degree
    }

    pub fn action(&self, p: &HamiltonianParams) -> Rational {
        self.family.action(p) - int(self.t_degree)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·t^{}", self.family, -self.t_degree)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("r = {0} must satisfy 0 < r < 1/2")]
    Radius(String),
    #[error("eps = {0} must satisfy 0 < eps < r")]
    Epsilon(String),
    #[error("E = {0} must be positive")]
    Energy(String),
}

/// Integrality conditions the data should avoid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Resonance {
    /// `1/r ∈ ℤ`.
    InverseRadius { value: i64 },
    /// `(E+ε)/ε ∈ ℤ`.
    MultiplicityBound { value: i64 },
}

impl fmt::Display for Resonance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resonance::InverseRadius { value } => write!(f, "1/r = {value} is an integer"),
            Resonance::MultiplicityBound { value } => write!(f, "(E+eps)/eps = {value} is an integer"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HamiltonianParams {
    #[serde(with = "crate::linalg::serde_rational")]
    pub r: Rational,
    #[serde(with = "crate::linalg::serde_rational")]
    pub eps: Rational,
    #[serde(rename = "E", with = "crate::linalg::serde_rational")]
    pub energy: Rational,
}

/// `μ₋ < (E−1)/κ` and `μ₊ > (E−κ)/κ`, both chosen tight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuWindow {
    #[serde(with = "crate::linalg::serde_rational")]
    pub kappa: Rational,
    pub mu_minus: i64,
    pub mu_plus: i64,
}

impl HamiltonianParams {
    /// Checks `0 < r < 1/2`, `0 < ε < r` and `E > 0`. Resonance is reported
    /// separately by [`resonances`](Self::resonances).
    pub fn new(r: Rational, eps: Rational, energy: Rational) -> Result<Self, ParamError> {
        if !r.is_positive() || r >= crate::linalg::rat(1, 2) {
            return Err(ParamError::Radius(format_rational(&r)));
        }
        if !eps.is_positive() || eps >= r {
            return Err(ParamError::Epsilon(format_rational(&eps)));
        }
        if !energy.is_positive() {
            return Err(ParamError::Energy(format_rational(&energy)));
        }
        Ok(Self { r, eps, energy })
    }

    /// `(r, ε, E) = (2/5, 1/100, 100)`, used wherever only the action order
    /// matters.
    pub fn reference() -> Self {
        Self::new(crate::linalg::rat(2, 5), crate::linalg::rat(1, 100), int(100)).expect("reference data is valid")
    }

    pub fn resonances(&self) -> Vec<Resonance> {
        let mut out = Vec::new();
        let inv = self.r.recip();
        if inv.is_integer() {
            out.push(Resonance::InverseRadius { value: inv.to_integer().to_i64().unwrap_or(i64::MAX) });
        }
        let bound = self.multiplicity_bound();
        if bound.is_integer() {
            out.push(Resonance::MultiplicityBound { value: bound.to_integer().to_i64().unwrap_or(i64::MAX) });
        }
        out
    }

    pub fn is_non_resonant(&self) -> bool {
        self.resonances().is_empty()
    }

    /// `(E+ε)/ε`.
    pub fn multiplicity_bound(&self) -> Rational {
        (&self.energy + &self.eps) / &self.eps
    }

    pub fn multiplicity_admissible(&self, k: u64) -> bool {
        k >= 1 && int(k as i64) <= self.multiplicity_bound()
    }

    /// `κ = 1 − 2r + 2ε`.
    pub fn kappa(&self) -> Rational {
        Rational::one() - int(2) * &self.r + int(2) * &self.eps
    }

    pub fn mu_window(&self) -> MuWindow {
        let kappa = self.kappa();
        let lower = (&self.energy - Rational::one()) / &kappa;
        let upper = (&self.energy - &kappa) / &kappa;
        let mu_minus: num_bigint::BigInt = lower.ceil().to_integer() - 1;
        let mu_plus: num_bigint::BigInt = upper.floor().to_integer() + 1;
        MuWindow {
            kappa,
            mu_minus: mu_minus.to_i64().expect("window fits in i64"),
            mu_plus: mu_plus.to_i64().expect("window fits in i64"),
        }
    }
}

pub fn cz_index(g: &Generator) -> i64 {
    g.cz_index()
}

pub fn action(g: &Generator, p: &HamiltonianParams) -> Rational {
    g.action(p)
}

pub fn multiplicity_admissible(k: u64, p: &HamiltonianParams) -> bool {
    p.multiplicity_admissible(k)
}

pub fn mu_window(p: &HamiltonianParams) -> MuWindow {
    p.mu_window()
}

/// Every generator of the given families with `CZ ∈ {lo..=hi}`, for
/// multiplicities `1..=k_max`.
pub fn generators_in_cz_range(k_max: u64, lo: i64, hi: i64) -> Vec<Generator> {
    let mut families = alloc::vec![GeneratorFamily::X0, GeneratorFamily::X2, GeneratorFamily::Y0, GeneratorFamily::YMinus2];
    for k in 1..=k_max {
        for point in CritPoint::ALL {
            families.push(GeneratorFamily::Upper { point, k });
            families.push(GeneratorFamily::Lower { point, k });
        }
    }
    let mut out = Vec::new();
    for family in families {
        let cz = family.cz_index();
        // cz − 4N ∈ [lo, hi]
        let n_min = Integer::div_ceil(&(cz - hi), &4);
        let n_max = Integer::div_floor(&(cz - lo), &4);
        out.extend((n_min..=n_max).map(|n| Generator::new(family, n)));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub generator: String,
    pub cz: i64,
    pub t_degree: i64,
    pub action: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub statement: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// First few violations.
    pub counterexamples: Vec<Counterexample>,
}

impl Clause {
    fn new(name: &'static str, statement: &'static str) -> Self {
        Self { name, statement, checked: 0, violations: 0, counterexamples: Vec::new() }
    }

    fn record(&mut self, ok: bool, g: &Generator, a: &Rational) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.counterexamples.len() < 16 {
                self.counterexamples.push(Counterexample {
                    generator: alloc::format!("{g}"),
                    cz: g.cz_index(),
                    t_degree: g.t_degree,
                    action: format_rational(a),
                });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma0Report {
    pub params: HamiltonianParams,
    pub resonances: Vec<Resonance>,
    pub k_limit: u64,
    pub generators: usize,
    pub mu_window: MuWindow,
    pub clauses: Vec<Clause>,
}

impl Lemma0Report {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(Clause::passed)
    }
}

/// Multiplicity cut-off for the exhaustive enumeration: twice the larger of
/// the multiplicity bound and `2E/κ`, and past `2(μ₊ + 2)` so clause (iv)
/// sees generators on both sides of the window.
pub fn enumeration_limit(p: &HamiltonianParams) -> u64 {
    let w = p.mu_window();
    let by_bound = p.multiplicity_bound().ceil().to_integer();
    let by_action = (int(2) * &p.energy / &w.kappa).ceil().to_integer();
    let base = by_bound.max(by_action).to_u64().expect("bound fits in u64");
    (2 * base).max(2 * (w.mu_plus.max(0) as u64 + 2)) + 2
}

/// Exhaustive check of the action window lemma over all generators with
/// `CZ ∈ {1,2,3}` and multiplicity up to [`enumeration_limit`].
pub fn verify_lemma0(p: &HamiltonianParams) -> Lemma0Report {
    let k_limit = enumeration_limit(p);
    verify_lemma0_to(p, k_limit)
}

pub fn verify_lemma0_to(p: &HamiltonianParams, k_limit: u64) -> Lemma0Report {
    let w = p.mu_window();
    let one = Rational::one();
    let top = &p.energy + &one;
    let bound = p.multiplicity_bound();

    let mut window = Clause::new("cz-window", "non-constant orbits with CZ in 1..3 satisfy 0 <= 2k - 4N <= 4");
    let mut low = Clause::new("i", "lower and V generators of CZ 1..3 have action < 1");
    let mut high = Clause::new("ii", "upper and U generators of CZ 1..3 have action < E+1 and N >= 0");
    let mut mult = Clause::new("iii", "upper generators of CZ 1..3 with action > 1 have k < (E+eps)/eps");
    let mut squeeze = Clause::new("iv", "upper and U generators of CZ 1..3: action > 1 for N <= mu-, action < 1 for N > mu+");
    let mut ordered = Clause::new("iv-order", "mu- < mu+");
    ordered.checked = 1;
    if w.mu_minus >= w.mu_plus {
        ordered.violations = 1;
    }

    let gens = generators_in_cz_range(k_limit, 1, 3);
    for g in &gens {
        let a = g.action(p);
        if let Some(k) = g.family.multiplicity() {
            let s = 2 * k as i64 - 4 * g.t_degree;
            window.record((0..=4).contains(&s), g, &a);
        }
        if g.family.is_high() {
            high.record(a < top && g.t_degree >= 0, g, &a);
            if let GeneratorFamily::Upper { k, .. } = g.family {
                if a > one {
                    mult.record(int(k as i64) < bound, g, &a);
                }
            }
            if g.t_degree <= w.mu_minus {
                squeeze.record(a > one, g, &a);
            } else if g.t_degree > w.mu_plus {
                squeeze.record(a < one, g, &a);
            }
        } else {
            low.record(a < one, g, &a);
        }
    }

    Lemma0Report {
        params: p.clone(),
        resonances: p.resonances(),
        k_limit,
        generators: gens.len(),
        mu_window: w,
        clauses: alloc::vec![window, low, high, mult, squeeze, ordered],
    }
}

/// Constraint on the number `l₊` of positive interior punctures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LPlus {
    Zero,
    AtLeast(u32),
}

impl LPlus {
    fn admits(self, l: u32) -> bool {
        match self {
            LPlus::Zero => l == 0,
            LPlus::AtLeast(n) => l >= n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexFlag {
    /// `h = −3`, `Δ = 0`: the curve stays in one fiber, so the asymptotic
    /// circle generically misses `M̂_{k₋}`.
    ExcludedByDimensionCount,
    /// `h = 1`, `k₊ = k₋`, no punctures: an ordinary gradient trajectory
    /// inside one orbit family.
    SameLevelMorse,
}

/// One solution of `2(k₊−k₋) + h + 4l₊ = 1` together with
/// `(k₊+l₊) − (k₋+l₋) = 2Δ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSolution {
    pub h: i64,
    pub delta: u32,
    pub l_plus: u32,
    pub l_minus: u32,
    /// `2^{l₋}`.
    pub weight: u64,
    /// `k₊ − k₋`.
    pub k_drop: i64,
    pub flags: Vec<IndexFlag>,
}

impl IndexSolution {
    pub fn is_excluded(&self) -> bool {
        self.flags.contains(&IndexFlag::ExcludedByDimensionCount)
    }

    /// Pairs `(γ₊, γ₋)` of critical points with `j₊ − j₋ = h`.
    pub fn candidate_pairs(&self) -> Vec<(CritPoint, CritPoint)> {
        CritPoint::ALL
            .into_iter()
            .filter_map(|plus| CritPoint::from_offset(plus.offset() - self.h).map(|minus| (plus, minus)))
            .collect()
    }
}

/// All `(h, Δ, l₊, l₋)` with `h ∈ [−3, 3]` and nonnegative `Δ, l₊, l₋`
/// satisfying `l₊ + l₋ = (1−h)/2 − 2Δ` and the constraint on `l₊`.
pub fn index_case_analysis(constraint: LPlus) -> Vec<IndexSolution> {
    let mut out = Vec::new();
    for h in -3i64..=3 {
        if (1 - h).rem_euclid(2) != 0 {
            continue;
        }
        let half = (1 - h) / 2;
        let mut delta = 0u32;
        while half - 2 * delta as i64 >= 0 {
            let total = (half - 2 * delta as i64) as u32;
            for l_plus in 0..=total {
                if !constraint.admits(l_plus) {
                    continue;
                }
                let l_minus = total - l_plus;
                let mut flags = Vec::new();
                if h == -3 && delta == 0 {
                    flags.push(IndexFlag::ExcludedByDimensionCount);
                }
                if h == 1 && total == 0 {
                    flags.push(IndexFlag::SameLevelMorse);
                }
                out.push(IndexSolution {
                    h,
                    delta,
                    l_plus,
                    l_minus,
                    weight: 1u64 << l_minus,
                    k_drop: (1 - h - 4 * l_plus as i64) / 2,
                    flags,
                });
            }
            delta += 1;
        }
    }
    out
}

pub fn surviving(solutions: &[IndexSolution]) -> Vec<IndexSolution> {
    solutions.iter().filter(|s| !s.is_excluded()).cloned().collect()
}
