use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{LinalgError, Rational};

/// Finitely supported rational vector. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseVector {
    entries: BTreeMap<usize, Rational>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(index: usize) -> Self {
        let mut v = Self::new();
        v.add_at(index, Rational::one());
        v
    }

    /// Sums repeated indices and drops zeros.
    pub fn from_entries<I: IntoIterator<Item = (usize, Rational)>>(entries: I) -> Self {
        let mut v = Self::new();
        for (i, q) in entries {
            v.add_at(i, q);
        }
        v
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        Self::from_entries(values.iter().cloned().enumerate())
    }

    pub fn get(&self, index: usize) -> Option<&Rational> {
        self.entries.get(&index)
    }

    pub fn coefficient(&self, index: usize) -> Rational {
        self.entries.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_at(&mut self, index: usize, q: Rational) {
        if q.is_zero() {
            return;
        }
        match self.entries.get_mut(&index) {
            Some(c) => {
                *c += q;
                if c.is_zero() {
                    self.entries.remove(&index);
                }
            }
            None => {
                self.entries.insert(index, q);
            }
        }
    }

    pub fn set(&mut self, index: usize, q: Rational) {
        if q.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, q);
        }
    }

    /// `self += factor * other`
    pub fn add_scaled(&mut self, other: &SparseVector, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (&i, q) in &other.entries {
            self.add_at(i, q * factor);
        }
    }

    pub fn scale(&mut self, factor: &Rational) {
        if factor.is_zero() {
            self.entries.clear();
            return;
        }
        for q in self.entries.values_mut() {
            *q *= factor;
        }
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        let mut v = self.clone();
        v.scale(factor);
        v
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (usize, &Rational)> + Clone + '_ {
        self.entries.iter().map(|(&i, q)| (i, q))
    }

    pub fn indices(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    /// Rescales so that the coefficient at the smallest index is 1.
    pub fn normalize_leading(&mut self) {
        if let Some(lead) = self.entries.values().next().cloned() {
            self.scale(&lead.recip());
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = alloc::vec![Rational::zero(); len];
        for (&i, q) in &self.entries {
            out[i] = q.clone();
        }
        out
    }

    /// Applies `f` to every index, summing collisions and dropping indices
    /// mapped to `None`.
    pub fn reindex(&self, mut f: impl FnMut(usize) -> Option<usize>) -> Self {
        Self::from_entries(self.iter().filter_map(|(i, q)| f(i).map(|j| (j, q.clone()))))
    }
}

impl core::ops::Add<&SparseVector> for &SparseVector {
    type Output = SparseVector;
    fn add(self, rhs: &SparseVector) -> SparseVector {
        let mut v = self.clone();
        v.add_scaled(rhs, &Rational::one());
        v
    }
}

impl core::ops::Sub<&SparseVector> for &SparseVector {
    type Output = SparseVector;
    fn sub(self, rhs: &SparseVector) -> SparseVector {
        let mut v = self.clone();
        v.add_scaled(rhs, &-Rational::one());
        v
    }
}

/// Column-major sparse rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<SparseVector>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, columns: alloc::vec![SparseVector::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: n, columns: (0..n).map(SparseVector::unit).collect() }
    }

    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut m = Self::zeros(rows, cols);
        for (row, col, q) in triplets {
            if row >= rows || col >= cols {
                return Err(LinalgError::IndexOutOfRange { row, col, rows, cols });
            }
            m.columns[col].add_at(row, q);
        }
        Ok(m)
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVector>) -> Result<Self, LinalgError> {
        let cols = columns.len();
        for (col, c) in columns.iter().enumerate() {
            if let Some(row) = c.max_index().filter(|&r| r >= rows) {
                return Err(LinalgError::IndexOutOfRange { row, col, rows, cols });
            }
        }
        Ok(Self { rows, columns })
    }

    pub fn from_dense(values: &[Vec<Rational>]) -> Self {
        let rows = values.len();
        let cols = values.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols);
        for (i, row) in values.iter().enumerate() {
            for (j, q) in row.iter().enumerate() {
                m.columns[j].add_at(i, q.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.columns[col].coefficient(row)
    }

    pub fn set(&mut self, row: usize, col: usize, q: Rational) {
        assert!(row < self.rows, "row {row} out of range");
        self.columns[col].set(row, q);
    }

    pub fn column(&self, col: usize) -> &SparseVector {
        &self.columns[col]
    }

    pub fn columns(&self) -> &[SparseVector] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVector::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVector::is_zero)
    }

    /// Entries as `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.columns.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(i, q)| (i, j, q)))
    }

    pub fn row_vectors(&self) -> Vec<SparseVector> {
        let mut rows = alloc::vec![SparseVector::new(); self.rows];
        for (i, j, q) in self.triplets() {
            rows[i].add_at(j, q.clone());
        }
        rows
    }

    pub fn transpose(&self) -> Self {
        Self { rows: self.cols(), columns: self.row_vectors() }
    }

    pub fn mul_vec(&self, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (j, q) in v.iter() {
            out.add_scaled(&self.columns[j], q);
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), rhs.rows, "dimension mismatch in product");
        Self { rows: self.rows, columns: rhs.columns.iter().map(|c| self.mul_vec(c)).collect() }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = alloc::vec![alloc::vec![Rational::zero(); self.cols()]; self.rows];
        for (i, j, q) in self.triplets() {
            out[i][j] = q.clone();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    #[test]
    fn vector_cancellation_removes_entries() {
        let mut v = SparseVector::from_entries([(0, int(2)), (3, rat(1, 2))]);
        v.add_at(3, rat(-1, 2));
        assert_eq!(v.nnz(), 1);
        v.add_scaled(&SparseVector::unit(0), &int(-2));
        assert!(v.is_zero());
    }

    #[test]
    fn normalize_leading_uses_smallest_index() {
        let mut v = SparseVector::from_entries([(4, int(2)), (7, int(-2))]);
        v.normalize_leading();
        assert_eq!(v, SparseVector::from_entries([(4, int(1)), (7, int(-1))]));
    }

    #[test]
    fn out_of_range_triplet_is_rejected() {
        let err = SparseMatrix::from_triplets(2, 2, [(2, 0, int(1))]).unwrap_err();
        assert_eq!(err, LinalgError::IndexOutOfRange { row: 2, col: 0, rows: 2, cols: 2 });
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_triplets(2, 3, [(0, 0, int(1)), (1, 2, int(3))]).unwrap();
        let at = a.transpose();
        assert_eq!(at.rows(), 3);
        assert_eq!(at.get(2, 1), int(3));
        let p = a.mul(&at);
        assert_eq!(p.to_dense(), alloc::vec![alloc::vec![int(1), int(0)], alloc::vec![int(0), int(9)]]);
        let zeros = SparseMatrix::from_triplets(2, 2, [(0, 0, int(0))]).unwrap();
        assert!(zeros.is_zero());
    }
}
