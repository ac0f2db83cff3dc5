use num_traits::{One, Zero};
use proptest::prelude::*;

use quadric_core::complexes::{BasisElement, GradedFilteredComplex};
use quadric_core::linalg::{int, kernel_basis, rank, rat, Rational, SparseMatrix};
use quadric_core::novikov::LaurentElement;
use quadric_core::quantum::{qh4_mul, QuantumClass};

/// Plain Gaussian elimination on a dense copy.
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
                for k in 0..cols {
                    let t = &a[r][k] * &f;
                    a[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn sparse_matrix() -> impl Strategy<Value = SparseMatrix> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        proptest::collection::vec(prop_oneof![3 => Just(Rational::zero()), 2 => small_rational()], r * c).prop_map(move |v| {
            let dense: Vec<Vec<Rational>> = v.chunks(c).map(|row| row.to_vec()).collect();
            SparseMatrix::from_dense(&dense)
        })
    })
}

fn laurent(mu: i64) -> impl Strategy<Value = LaurentElement> {
    proptest::collection::vec((-mu..=0, small_rational()), 0..5)
        .prop_map(move |terms| LaurentElement::from_terms(terms, (-mu, 0)).unwrap())
}

fn terms(e: &LaurentElement) -> Vec<(i64, Rational)> {
    e.terms().map(|(p, q)| (p, q.clone())).collect()
}

fn quantum() -> impl Strategy<Value = QuantumClass> {
    (small_rational(), small_rational()).prop_map(|(a, b)| QuantumClass::new(a, b))
}

/// A filtered complex with known homology: elementary pairs `x → y` and
/// lone generators, conjugated by filtration-preserving row operations.
#[derive(Debug, Clone)]
struct Scrambled {
    complex: GradedFilteredComplex,
    lone: std::collections::BTreeMap<i64, usize>,
}

fn scrambled() -> impl Strategy<Value = Scrambled> {
    let piece = prop_oneof![
        (0i64..4, 0u32..4).prop_map(|(d, s)| (d, s, None)),
        (1i64..4, 0u32..4, 0u32..3).prop_map(|(d, s, gap)| (d, s, Some(gap))),
    ];
    let ops = proptest::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>(), small_rational()), 0..25);
    (proptest::collection::vec(piece, 1..10), ops).prop_map(|(pieces, ops)| {
        let mut basis: Vec<(i64, u32)> = Vec::new();
        let mut d: Vec<(usize, usize)> = Vec::new();
        let mut lone = std::collections::BTreeMap::new();
        for (deg, s, pair) in pieces {
            match pair {
                None => {
                    basis.push((deg, s));
                    *lone.entry(deg).or_insert(0) += 1;
                }
                Some(gap) => {
                    basis.push((deg, s));
                    basis.push((deg - 1, s + gap));
                    d.push((basis.len() - 2, basis.len() - 1));
                }
            }
        }
        let n = basis.len();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (x, y) in d {
            m[x][y] = Rational::one();
        }
        // e_i ↦ e_i + c·e_j with e_j in the same degree and at least as deep
        for (i, j, c) in ops {
            let (i, j) = (i.index(n), j.index(n));
            if i == j || basis[i].0 != basis[j].0 || basis[j].1 < basis[i].1 {
                continue;
            }
            // d' = E d E⁻¹ with m[from][to] storing d(e_from) on e_to
            for from in 0..n {
                let t = &m[from][i] * &c;
                m[from][j] += t;
            }
            for to in 0..n {
                let t = &m[j][to] * &c;
                m[i][to] -= t;
            }
        }
        let elements = basis
            .iter()
            .enumerate()
            .map(|(k, &(deg, s))| BasisElement::new(format!("e{k}"), deg, s, int(deg) - int(10 * s as i64)))
            .collect();
        let mut entries = Vec::new();
        for (from, row) in m.iter().enumerate() {
            for (to, q) in row.iter().enumerate() {
                if !q.is_zero() {
                    entries.push((from, to, q.clone()));
                }
            }
        }
        Scrambled { complex: GradedFilteredComplex::new(elements, entries).unwrap(), lone }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sparse_rank_matches_dense_oracle(m in sparse_matrix()) {
        prop_assert_eq!(rank(&m), oracle_rank(&m));
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn rank_nullity(m in sparse_matrix()) {
        let kernel = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn laurent_ring_laws(a in laurent(4), b in laurent(4), c in laurent(4)) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(terms(&ab_c), terms(&a_bc));
        prop_assert_eq!(terms(&a.mul(&b).unwrap()), terms(&b.mul(&a).unwrap()));
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(terms(&lhs), terms(&rhs));
    }

    #[test]
    fn quantum_ring_laws(u in quantum(), v in quantum(), w in quantum()) {
        prop_assert_eq!(qh4_mul(&qh4_mul(&u, &v), &w), qh4_mul(&u, &qh4_mul(&v, &w)));
        prop_assert_eq!(qh4_mul(&u, &v), qh4_mul(&v, &u));
        prop_assert_eq!(qh4_mul(&QuantumClass::one(), &u), u.clone());
        let (p, m) = u.eigen_coordinates();
        let (pv, mv) = v.eigen_coordinates();
        let (pp, mm) = qh4_mul(&u, &v).eigen_coordinates();
        prop_assert_eq!((pp, mm), (p * pv, m * mv));
    }

    #[test]
    fn spectral_limit_equals_homology(x in scrambled()) {
        let c = &x.complex;
        prop_assert!(c.validate().is_valid());
        let betti = c.betti_numbers().unwrap();
        for (j, d) in &betti {
            prop_assert_eq!(*d, x.lone.get(j).copied().unwrap_or(0), "degree {}", j);
        }
        prop_assert_eq!(betti.values().sum::<usize>(), x.lone.values().sum::<usize>());
        let ss = c.spectral_sequence(2).unwrap();
        prop_assert!(ss.rank_consistent);
        let limit = ss.limit_totals();
        for (j, d) in &betti {
            prop_assert_eq!(limit.get(j).copied().unwrap_or(0), *d);
        }
    }
}
