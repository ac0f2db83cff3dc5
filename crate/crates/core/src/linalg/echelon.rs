use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{LinalgError, Rational, SparseMatrix, SparseVector};

#[derive(Debug, Clone)]
struct Stored {
    vector: SparseVector,
    tags: SparseVector,
}

/// Incrementally built echelon basis of a subspace.
///
/// Every stored vector has coefficient 1 at its largest index (its pivot) and
/// no two share a pivot. Inserted vectors may carry a tag; reductions report
/// the combination of tagged inputs they used, which gives coordinates
/// modulo the untagged part of the span.
#[derive(Debug, Clone, Default)]
pub struct EchelonBasis {
    pivots: BTreeMap<usize, Stored>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Returns `(residual, combo)` with `v = residual + Σ stored`, where the
    /// stored part equals `Σ combo[t]·input_t` modulo untagged inputs. The
    /// residual has no entry at any pivot.
    pub fn reduce(&self, v: &SparseVector) -> (SparseVector, SparseVector) {
        let mut residual = v.clone();
        let mut combo = SparseVector::new();
        loop {
            let hit = residual.iter().rev().find(|(i, _)| self.pivots.contains_key(i)).map(|(i, c)| (i, c.clone()));
            let Some((i, c)) = hit else { break };
            let stored = &self.pivots[&i];
            residual.add_scaled(&stored.vector, &-c.clone());
            combo.add_scaled(&stored.tags, &c);
        }
        (residual, combo)
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Adds `v` to the span; returns `false` when it was already contained.
    pub fn insert(&mut self, v: &SparseVector, tag: Option<usize>) -> bool {
        let (mut residual, combo) = self.reduce(v);
        let Some(pivot) = residual.max_index() else { return false };
        let mut tags = match tag {
            Some(t) => SparseVector::unit(t),
            None => SparseVector::new(),
        };
        tags.add_scaled(&combo, &-Rational::one());
        let scale = residual.coefficient(pivot).recip();
        residual.scale(&scale);
        tags.scale(&scale);
        self.pivots.insert(pivot, Stored { vector: residual, tags });
        true
    }
}

/// Null-space basis read off the reduced row echelon form.
///
/// Pivots are chosen column by column from the left, so the result does not
/// depend on row order. One vector per free column, scaled so that its entry
/// at the smallest index is 1.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVector> {
    // pivot column -> reduced row with coefficient 1 at the pivot
    let mut reduced: BTreeMap<usize, SparseVector> = BTreeMap::new();
    for row in m.row_vectors() {
        let mut r = row;
        loop {
            let hit = r.iter().find(|(j, _)| reduced.contains_key(j)).map(|(j, c)| (j, c.clone()));
            let Some((j, c)) = hit else { break };
            r.add_scaled(&reduced[&j], &-c);
        }
        let Some(p) = r.min_index() else { continue };
        r.normalize_leading();
        for other in reduced.values_mut() {
            let c = other.coefficient(p);
            if !c.is_zero() {
                other.add_scaled(&r, &-c);
            }
        }
        reduced.insert(p, r);
    }

    let mut kernel = Vec::new();
    for free in (0..m.cols()).filter(|j| !reduced.contains_key(j)) {
        let mut v = SparseVector::unit(free);
        for (&p, row) in &reduced {
            let c = row.coefficient(free);
            if !c.is_zero() {
                v.set(p, -c);
            }
        }
        v.normalize_leading();
        kernel.push(v);
    }
    kernel
}

/// Basis of `span(kernel_gens) / span(image_gens)`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub dimension: usize,
    pub representatives: Vec<SparseVector>,
    basis: EchelonBasis,
}

impl Quotient {
    /// Coordinates of `v` in the representative basis, modulo the image.
    pub fn coordinates(&self, v: &SparseVector) -> Result<Vec<Rational>, LinalgError> {
        let (residual, combo) = self.basis.reduce(v);
        if !residual.is_zero() {
            return Err(LinalgError::NotInSpan);
        }
        Ok(combo.to_dense(self.dimension))
    }

    /// True when `v` lies in the image span.
    pub fn is_trivial(&self, v: &SparseVector) -> Result<bool, LinalgError> {
        Ok(self.coordinates(v)?.iter().all(Zero::is_zero))
    }
}

/// Dimension and representatives of `kernel / image`.
///
/// Representatives are kernel generators reduced against the image, so they
/// avoid the largest-index coordinates of the image; each is scaled to have
/// leading coefficient 1.
pub fn quotient_dimension(image_gens: &[SparseVector], kernel_gens: &[SparseVector]) -> Result<Quotient, LinalgError> {
    let mut kernel_span = EchelonBasis::new();
    for g in kernel_gens {
        kernel_span.insert(g, None);
    }
    if let Some(index) = image_gens.iter().position(|g| !kernel_span.contains(g)) {
        return Err(LinalgError::NotInKernelSpan { index });
    }

    let mut basis = EchelonBasis::new();
    for g in image_gens {
        basis.insert(g, None);
    }
    let mut representatives = Vec::new();
    for g in kernel_gens {
        let (mut residual, _) = basis.reduce(g);
        if residual.is_zero() {
            continue;
        }
        residual.normalize_leading();
        basis.insert(&residual, Some(representatives.len()));
        representatives.push(residual);
    }
    Ok(Quotient { dimension: representatives.len(), representatives, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rank};

    #[test]
    fn kernel_of_identity_and_zero() {
        assert!(kernel_basis(&SparseMatrix::identity(3)).is_empty());
        let k = kernel_basis(&SparseMatrix::zeros(1, 2));
        assert_eq!(k, alloc::vec![SparseVector::unit(0), SparseVector::unit(1)]);
    }

    #[test]
    fn kernel_of_equal_columns_is_their_difference() {
        let m = SparseMatrix::from_triplets(2, 2, [(0, 0, int(2)), (1, 0, int(2)), (0, 1, int(2)), (1, 1, int(2))]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k, alloc::vec![SparseVector::from_entries([(0, int(1)), (1, int(-1))])]);
    }

    #[test]
    fn rank_nullity_on_a_small_matrix() {
        let m = SparseMatrix::from_triplets(3, 4, [(0, 0, int(1)), (0, 1, int(1)), (1, 1, int(1)), (1, 2, int(1)), (2, 0, int(1)), (2, 2, int(-1))]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(rank(&m) + k.len(), 4);
        for v in &k {
            assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn quotient_edge_cases() {
        let e0 = SparseVector::unit(0);
        let e1 = SparseVector::unit(1);
        let q = quotient_dimension(&[], &[e0.clone(), e1.clone()]).unwrap();
        assert_eq!(q.dimension, 2);
        let q = quotient_dimension(&[e0.clone(), e1.clone()], &[e1.clone(), e0.clone()]).unwrap();
        assert_eq!(q.dimension, 0);
        let err = quotient_dimension(&[SparseVector::unit(2)], &[e0, e1]).unwrap_err();
        assert_eq!(err, LinalgError::NotInKernelSpan { index: 0 });
    }

    #[test]
    fn representatives_avoid_image_pivots() {
        // kernel = span(e0, e1), image = span(2e0 + 2e1): the class survives as e0.
        let image = [SparseVector::from_entries([(0, int(2)), (1, int(2))])];
        let q = quotient_dimension(&image, &[SparseVector::unit(0), SparseVector::unit(1)]).unwrap();
        assert_eq!(q.representatives, alloc::vec![SparseVector::unit(0)]);
        assert_eq!(q.coordinates(&SparseVector::unit(1)).unwrap(), alloc::vec![int(-1)]);
        assert!(q.is_trivial(&image[0]).unwrap());
    }
}
