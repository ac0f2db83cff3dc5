//! Acceptance suite. One line per criterion; exits non-zero if any fails.
//!
//! Run with `cargo test -p quadric --test acceptance`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_traits::Zero;
use quadric_core::bo::{
    self, counterfactual_suite, homology_of_b_with, structural_report, verify_main_lemma, BGenerator, BTables, Table,
};
use quadric_core::complexes::GradedFilteredComplex;
use quadric_core::floer::{self, HamiltonianParams, LPlus};
use quadric_core::linalg::{int, rank, rat, SparseMatrix};
use quadric_core::quantum::{self, qh4_mul, QuantumClass};
use quadric_core::semitoric::{self, Displaceability, FiberKind, ProductSpherePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn reference() -> HamiltonianParams {
    HamiltonianParams::new(rat(2, 5), rat(1, 100), int(100)).unwrap()
}

/// Dense Gaussian elimination, kept apart from the library's rank code.
fn oracle_rank(m: &SparseMatrix) -> usize {
    let mut a = m.to_dense();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for k in c..cols {
                    let t = &a[r][k] * &f;
                    a[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Every boundary matrix of `c`, for criterion 8.
fn boundary_matrices(c: &GradedFilteredComplex, into: &mut Vec<SparseMatrix>) {
    into.extend(c.boundary_matrices().into_values());
}

// 1. H(B, d₀) in degrees 0..40 at k_max = 24.
fn criterion_1(matrices: &mut Vec<SparseMatrix>) -> Outcome {
    let start = Instant::now();
    let table = homology_of_b_with(40, 24).unwrap();
    let elapsed = start.elapsed();
    let b = bo::b_complex(&BTables::default(), 48, &reference()).unwrap();
    boundary_matrices(&b.complex, matrices);
    let bad: Vec<i64> = table.rows.iter().filter(|r| r.dimension != 1 || !r.matches).map(|r| r.degree).collect();
    // listed generators, written out independently of the library
    let listed = |j: i64| -> Vec<(BGenerator, i64)> {
        match j {
            0 => vec![(BGenerator::X0, 1)],
            1 => vec![(BGenerator::m_check(1), 1)],
            2 => vec![(BGenerator::X2, 1)],
            j if j % 2 == 1 => vec![(BGenerator::big_m_check((j as u64 - 1) / 2), 1), (BGenerator::m_check((j as u64 + 1) / 2), -1)],
            j => vec![(BGenerator::big_m_hat((j as u64 - 2) / 2), 1)],
        }
    };
    let mut listed_ok = true;
    for j in 0..=40 {
        let h = b.complex.homology(j).unwrap();
        let terms: Vec<_> = listed(j).into_iter().map(|(g, q)| (g, 0, int(q))).collect();
        listed_ok &= h.generated_by(&b.chain(&terms));
    }
    let passed = bad.is_empty() && listed_ok && table.rows.len() == 41 && elapsed < Duration::from_secs(10);
    Outcome { passed, detail: format!("41 degrees, failing {bad:?}, listed generators ok {listed_ok}, {:.2?}", elapsed) }
}

// 2. Main lemma for μ ∈ {1,2,3,5,10}.
fn criterion_2(matrices: &mut Vec<SparseMatrix>) -> Outcome {
    let p = reference();
    let mut failures = Vec::new();
    let mut at_ten = Duration::ZERO;
    for mu in [1, 2, 3, 5, 10] {
        let start = Instant::now();
        let r = verify_main_lemma(mu, &p).unwrap();
        if mu == 10 {
            at_ten = start.elapsed();
        }
        let exact = r.slices.iter().all(|s| s.passed) && r.slices.len() == mu as usize + 1;
        if !(r.h2_dimension == 1 && r.generated_by_x2 && r.degeneration_page == 2 && exact && r.passed()) {
            failures.push((mu, r.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect::<Vec<_>>()));
        }
        let qb = bo::assemble_qb(r.k_max, mu, &p).unwrap();
        boundary_matrices(&qb.complex, matrices);
    }
    let passed = failures.is_empty() && at_ten < Duration::from_secs(60);
    Outcome { passed, detail: format!("failures {failures:?}, mu = 10 in {at_ten:.2?}") }
}

// 3. Structural identities at k_max = 24, plus single-coefficient mutations.
fn criterion_3(matrices: &mut Vec<SparseMatrix>) -> Outcome {
    let p = reference();
    let s = structural_report(&BTables::default(), 24, 10, &p).unwrap();
    let qb = bo::assemble_qb(24, 10, &p).unwrap();
    boundary_matrices(&qb.complex, matrices);
    let report = counterfactual_suite(24, 24, 10, &p).unwrap();
    let contradiction = report.outcomes.iter().any(|o| {
        o.mutation.table == Table::D0 && o.mutation.from == BGenerator::m_check(1) && o.mutation.to == BGenerator::X0 && o.h1_dimension == Some(0)
    });
    let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
    for o in report.outcomes.iter().filter(|o| !o.detected) {
        let m = &o.mutation;
        let kind = format!(
            "{:?} {}->{} {}",
            m.table,
            m.from.to_string().trim_end_matches(char::is_numeric),
            m.to.to_string().trim_end_matches(char::is_numeric),
            if o.b_homology_changed { "(other H_j changes)" } else { "(no homology change)" }
        );
        *kinds.entry(kind).or_insert(0) += 1;
    }
    let passed = s.passed() && report.passed() && contradiction;
    Outcome {
        passed,
        detail: format!(
            "identities {} on {} elements; {} mutations, {} undetected; m1->x0 forces H1 = 0: {contradiction}; undetected by kind {kinds:?}",
            if s.passed() { "hold" } else { "FAIL" },
            s.elements,
            report.outcomes.len(),
            report.undetected
        ),
    }
}

// 4. Action window lemma at three parameter triples, and r = 1/2 rejected.
fn criterion_4() -> Outcome {
    let triples = [(rat(2, 5), rat(1, 100), int(100)), (rat(1, 3), rat(1, 50), int(50)), (rat(2, 7), rat(1, 30), rat(401, 4))];
    let mut lines = Vec::new();
    let mut passed = true;
    for (r, e, en) in triples {
        let p = HamiltonianParams::new(r, e, en).unwrap();
        let rep = floer::verify_lemma0(&p);
        let window_ok = rep.clauses.iter().all(|c| c.passed()) && rep.clauses.iter().any(|c| c.name == "iv" && c.checked > 0);
        passed &= window_ok;
        lines.push(format!("{} gens, mu = ({}, {}) {}", rep.generators, rep.mu_window.mu_minus, rep.mu_window.mu_plus, window_ok));
    }
    let rejected = HamiltonianParams::new(rat(1, 2), rat(1, 100), int(100)).is_err();
    passed &= rejected;
    Outcome { passed, detail: format!("{}; r = 1/2 rejected {rejected}", lines.join("; ")) }
}

// 5. Index case analysis.
fn criterion_5() -> Outcome {
    let key = |s: &floer::IndexSolution| (s.h, s.l_plus, s.l_minus, s.delta);
    let one: Vec<_> = floer::surviving(&floer::index_case_analysis(LPlus::AtLeast(1))).iter().map(key).collect();
    let zero = floer::index_case_analysis(LPlus::Zero);
    let zero_keys: Vec<_> = zero.iter().map(key).collect();
    // (i) h=-3 Δ=0 l-=2, (ii) h=-3 Δ=1 l-=0, (iii) h=-1 Δ=0 l-=1, plus the Morse case
    let printed = [(-3, 0, 2, 0), (-3, 0, 0, 1), (-1, 0, 1, 0), (1, 0, 0, 0)];
    let morse = zero.last().is_some_and(|s| s.flags == [floer::IndexFlag::SameLevelMorse]);
    let case_i_excluded = zero[0].is_excluded();
    let beyond: Vec<_> = (2..=6).flat_map(|l| floer::surviving(&floer::index_case_analysis(LPlus::AtLeast(l)))).collect();
    let passed = one == [(-1, 1, 0, 0)] && zero_keys == printed && morse && case_i_excluded && beyond.is_empty();
    Outcome { passed, detail: format!("l+>=1 survivors {one:?}; l+=0 {zero_keys:?}; l+>=2 survivors {}", beyond.len()) }
}

// 6. QH₄.
fn criterion_6() -> Outcome {
    let start = Instant::now();
    let (ep, em) = quantum::idempotents();
    let one = QuantumClass::one();
    let pt = QuantumClass::pt();
    let mut ok = qh4_mul(&ep, &ep) == ep && qh4_mul(&em, &em) == em && qh4_mul(&ep, &em).is_zero();
    ok &= ep.clone() + em.clone() == one && qh4_mul(&pt, &pt) == one;
    ok &= quantum::derive_pt_square() == Some(one.clone());
    let basis = [one, pt];
    for x in &basis {
        for y in &basis {
            ok &= qh4_mul(x, y) == qh4_mul(y, x);
            for z in &basis {
                ok &= qh4_mul(&qh4_mul(x, y), z) == qh4_mul(x, &qh4_mul(y, z));
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome { passed: ok && elapsed < Duration::from_millis(1), detail: format!("{elapsed:.2?}") }
}

/// Fraction of `[−π, π] × [−1, 1]` under `α_b`; `C` has `σ`-area 1.
fn monte_carlo_area(b: f64, n: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..n {
        let theta: f64 = rng.random_range(-PI..PI);
        let z: f64 = rng.random_range(-1.0..1.0);
        let c = theta.cos();
        if c >= b && z * z * (c + 1.0) <= c - b {
            hits += 1;
        }
    }
    let p = hits as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

fn uniform_sphere(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

// 7. Semitoric geometry.
fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let half = semitoric::alpha_area(-0.5).unwrap();
    let mut passed = (half - 0.5).abs() < 1e-9;
    notes.push(format!("area(-1/2) = {half:.12}"));
    for (b, seed) in [(-0.5, 1), (0.0, 2)] {
        let (p, sd) = monte_carlo_area(b, 10_000_000, seed);
        let q = semitoric::alpha_area(b).unwrap();
        let ok = (p - q).abs() <= 3.0 * sd;
        passed &= ok;
        notes.push(format!("MC b={b}: {p:.5} vs {q:.5} ({:.1} sd)", (p - q).abs() / sd));
    }
    let grid: Vec<f64> = (1..=50).map(|i| -1.0 + 2.0 * i as f64 / 51.0).collect();
    let areas: Vec<f64> = grid.iter().map(|&b| semitoric::alpha_area(b).unwrap()).collect();
    let decreasing = areas.windows(2).all(|w| w[1] < w[0]);
    passed &= decreasing;
    notes.push(format!("decreasing on 50 points {decreasing}"));

    let symbolic = semitoric::involution_identity_symbolic();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let p = ProductSpherePoint::new(uniform_sphere(&mut rng), uniform_sphere(&mut rng)).unwrap();
        let (f, g) = semitoric::moment_map(&p);
        let (fi, gi) = semitoric::moment_map(&p.involution());
        worst = worst.max((fi + f).abs()).max((gi - g).abs());
    }
    passed &= symbolic && worst <= 1e-12;
    notes.push(format!("involution symbolic {symbolic}, 1e4 samples max error {worst:.1e}"));

    // G ranges over [a²/2 − 1, 1] on {F = a}: G = cos(θ₁ ∓ θ₂)-type bounds
    let mut mismatches = Vec::new();
    for a in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        for b in [-0.75, -0.5, 0.0, 0.5] {
            let floor = a * a / 2.0 - 1.0;
            let f = semitoric::classify_fiber(a, b);
            let expect_kind = if b < floor - 1e-12 {
                FiberKind::Empty
            } else if a == 0.0 && b == -0.5 {
                FiberKind::MonotoneTorus
            } else if (b - floor).abs() < 1e-12 {
                FiberKind::LowerBoundary
            } else {
                FiberKind::LagrangianTorus
            };
            let disp_ok = match (expect_kind, f.displaceability) {
                (FiberKind::Empty, None) => true,
                (_, Some(Displaceability::Involution)) => a != 0.0,
                (_, Some(Displaceability::InsidePi { area })) => a == 0.0 && b > -0.5 && area < 0.5 - 1e-6,
                (_, Some(Displaceability::NotKnown)) => a == 0.0 && b <= -0.5,
                _ => false,
            };
            if f.kind != expect_kind || !disp_ok {
                mismatches.push((a, b, f.kind, f.displaceability));
            }
        }
    }
    passed &= mismatches.is_empty();
    notes.push(format!("taxonomy mismatches {mismatches:?}"));
    let elapsed = start.elapsed();
    passed &= elapsed < Duration::from_secs(30);
    notes.push(format!("{elapsed:.2?}"));
    Outcome { passed, detail: notes.join("; ") }
}

// 8. Sparse rank against the dense oracle; E^∞ against direct homology at μ = 3.
fn criterion_8(matrices: &[SparseMatrix]) -> Outcome {
    let disagreements = matrices.iter().filter(|m| rank(m) != oracle_rank(m)).count();
    let qb = bo::assemble_qb(8, 3, &reference()).unwrap();
    let betti = qb.complex.betti_numbers().unwrap();
    let ss = qb.complex.spectral_sequence(3).unwrap();
    let limit = ss.limit_totals();
    let same = betti.iter().all(|(j, d)| limit.get(j).copied().unwrap_or(0) == *d) && limit.values().sum::<usize>() == betti.values().sum::<usize>();
    Outcome {
        passed: disagreements == 0 && same && ss.rank_consistent,
        detail: format!("{} matrices, {disagreements} rank disagreements; E-infinity equals homology {same}", matrices.len()),
    }
}

fn main() {
    let mut matrices = Vec::new();
    let mut all = true;
    let mut report = |n: u32, name: &str, o: Outcome| {
        all &= o.passed;
        println!("criterion {n} [PRIMARY] {name}: {} ({})", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    };
    report(1, "loop-space homology", criterion_1(&mut matrices));
    report(2, "main lemma pipeline", criterion_2(&mut matrices));
    report(3, "structural identities and counterfactuals", criterion_3(&mut matrices));
    report(4, "action window lemma", criterion_4());
    report(5, "index case analysis", criterion_5());
    report(6, "quantum algebra", criterion_6());
    report(7, "semitoric geometry", criterion_7());
    report(8, "oracle equivalence", criterion_8(&matrices));
    if !all {
        std::process::exit(1);
    }
}
