use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::One;

use super::{ComplexError, GradedFilteredComplex};
use crate::linalg::{Rational, SparseVector};

/// Linear map between two complexes given on basis elements.
///
/// A map of degree `k` must satisfy `d∘f = (−1)^k f∘d`, so odd maps
/// anticommute with the differentials (as `t^{-1}d₁` does with `d₀`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    pub degree_shift: i64,
    images: Vec<SparseVector>,
}

impl ChainMap {
    pub fn new(degree_shift: i64, images: Vec<SparseVector>) -> Self {
        Self { degree_shift, images }
    }

    pub fn zero(source_len: usize, degree_shift: i64) -> Self {
        Self::new(degree_shift, alloc::vec![SparseVector::new(); source_len])
    }

    pub fn identity(len: usize) -> Self {
        Self::new(0, (0..len).map(SparseVector::unit).collect())
    }

    /// Sends each source element to the target element with the same label,
    /// or to zero. Between truncations of one complex this is the quotient
    /// projection.
    pub fn by_label(source: &GradedFilteredComplex, target: &GradedFilteredComplex) -> Self {
        let lookup: BTreeMap<&str, usize> = target.basis().iter().enumerate().map(|(i, e)| (e.label.as_str(), i)).collect();
        let images = source
            .basis()
            .iter()
            .map(|e| lookup.get(e.label.as_str()).map_or_else(SparseVector::new, |&i| SparseVector::unit(i)))
            .collect();
        Self::new(0, images)
    }

    pub fn image(&self, i: usize) -> &SparseVector {
        &self.images[i]
    }

    pub fn apply(&self, chain: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (i, q) in chain.iter() {
            out.add_scaled(&self.images[i], q);
        }
        out
    }

    /// Verifies shape, degree and the (anti)commutation rule.
    pub fn check(&self, source: &GradedFilteredComplex, target: &GradedFilteredComplex) -> Result<(), ComplexError> {
        if self.images.len() != source.len() {
            return Err(ComplexError::MapShape { images: self.images.len(), len: source.len() });
        }
        let sign = if self.degree_shift.rem_euclid(2) == 0 { Rational::one() } else { -Rational::one() };
        for (i, image) in self.images.iter().enumerate() {
            let want = source.basis()[i].degree + self.degree_shift;
            let in_range = image.indices().all(|t| t < target.len() && target.basis()[t].degree == want);
            if !in_range {
                return Err(ComplexError::NotChainMap { element: i });
            }
            let lhs = target.apply(image);
            let rhs = self.apply(source.differential(i)).scaled(&sign);
            if lhs != rhs {
                return Err(ComplexError::NotChainMap { element: i });
            }
        }
        Ok(())
    }
}
