use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::SparseMatrix;

type IntRow = BTreeMap<usize, BigInt>;

/// Rank over ℚ by sparse fraction-free elimination.
///
/// Each row is scaled to a primitive integer vector. A step eliminates the
/// pivot column with `row ← p·row − a·pivot_row` and divides the result by its
/// content, so entries stay integral without Bareiss bookkeeping. Pivots
/// minimise the Markowitz count `(r − 1)(c − 1)`; ties go to the lowest
/// `(row, col)`.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut rows: Vec<IntRow> = m.row_vectors().iter().map(|v| primitive_row(v.iter())).collect();
    let mut col_rows: Vec<BTreeSet<usize>> = alloc::vec![BTreeSet::new(); m.cols()];
    let mut active: BTreeSet<usize> = BTreeSet::new();
    for (i, row) in rows.iter().enumerate() {
        if !row.is_empty() {
            active.insert(i);
        }
        for &j in row.keys() {
            col_rows[j].insert(i);
        }
    }

    let mut rank = 0;
    while let Some((pr, pc)) = markowitz_pivot(&rows, &col_rows, &active) {
        rank += 1;
        active.remove(&pr);
        let pivot_row = core::mem::take(&mut rows[pr]);
        for &j in pivot_row.keys() {
            col_rows[j].remove(&pr);
        }
        let p = pivot_row[&pc].clone();
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for i in targets {
            let old = core::mem::take(&mut rows[i]);
            let a = old[&pc].clone();
            for &j in old.keys() {
                col_rows[j].remove(&i);
            }
            let mut combined: IntRow = old.into_iter().map(|(j, v)| (j, v * &p)).collect();
            for (&j, v) in &pivot_row {
                let entry = combined.entry(j).or_insert_with(BigInt::zero);
                *entry -= &a * v;
                if entry.is_zero() {
                    combined.remove(&j);
                }
            }
            debug_assert!(!combined.contains_key(&pc));
            let reduced = divide_content(combined);
            for &j in reduced.keys() {
                col_rows[j].insert(i);
            }
            if reduced.is_empty() {
                active.remove(&i);
            }
            rows[i] = reduced;
        }
    }
    rank
}

fn markowitz_pivot(rows: &[IntRow], col_rows: &[BTreeSet<usize>], active: &BTreeSet<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for &i in active {
        let rc = rows[i].len() - 1;
        for &j in rows[i].keys() {
            let cost = rc * (col_rows[j].len() - 1);
            if best.is_none_or(|(c, _, _)| cost < c) {
                best = Some((cost, i, j));
                if cost == 0 {
                    return Some((i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn primitive_row<'a>(entries: impl Iterator<Item = (usize, &'a super::Rational)> + Clone) -> IntRow {
    let lcm = entries.clone().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
    let row: IntRow = entries.map(|(j, q)| (j, q.numer() * (&lcm / q.denom()))).collect();
    divide_content(row)
}

fn divide_content(mut row: IntRow) -> IntRow {
    let g = row.values().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
    if let Some(lead) = row.values().next() {
        if lead.is_negative() {
            for v in row.values_mut() {
                *v = -core::mem::take(v);
            }
        }
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    #[test]
    fn zero_and_identity() {
        assert_eq!(rank(&SparseMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&SparseMatrix::identity(3)), 3);
    }

    #[test]
    fn fractional_rows_and_dependencies() {
        let m = SparseMatrix::from_dense(&[
            alloc::vec![rat(1, 2), rat(1, 3), int(0)],
            alloc::vec![int(3), int(2), int(0)],
            alloc::vec![int(0), int(0), rat(-7, 5)],
        ]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn wide_and_tall() {
        let wide = SparseMatrix::from_triplets(2, 5, [(0, 4, int(2)), (1, 4, int(4)), (1, 0, int(1))]).unwrap();
        assert_eq!(rank(&wide), 2);
        assert_eq!(rank(&wide.transpose()), 2);
    }
}
