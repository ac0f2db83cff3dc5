//! Dense rational elimination, kept deliberately naive. Used as the
//! independent oracle for [`super::rank`].

use alloc::vec::Vec;

use num_traits::Zero;

use super::{Rational, SparseMatrix};

/// Rank by textbook row reduction on a dense copy: the pivot is the first
/// nonzero entry of the current column at or below the current row.
pub fn dense_rank(m: &SparseMatrix) -> usize {
    let mut a: Vec<Vec<Rational>> = m.to_dense();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    #[test]
    fn agrees_on_hand_examples() {
        assert_eq!(dense_rank(&SparseMatrix::zeros(3, 3)), 0);
        assert_eq!(dense_rank(&SparseMatrix::identity(3)), 3);
        let m = SparseMatrix::from_dense(&[alloc::vec![rat(1, 2), int(1)], alloc::vec![int(1), int(2)]]);
        assert_eq!(dense_rank(&m), 1);
    }
}
