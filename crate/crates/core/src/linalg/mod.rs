//! Exact sparse linear algebra over ℚ.
//!
//! Two independent rank algorithms are provided: [`rank`] (sparse,
//! fraction-free, Markowitz pivoting) and [`dense::dense_rank`] (dense
//! rational Gaussian elimination). The second one exists only to cross-check
//! the first.

pub mod dense;
mod echelon;
mod rank;
mod rational;
mod sparse;

pub use echelon::{kernel_basis, quotient_dimension, EchelonBasis, Quotient};
pub use rank::rank;
pub use rational::{format_rational, int, parse_rational, rat, serde_rational, ParseRationalError, Rational};
pub use sparse::{SparseMatrix, SparseVector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("image generator #{index} is not in the span of the kernel generators")]
    NotInKernelSpan { index: usize },
    #[error("vector is not in the span of the quotient representatives")]
    NotInSpan,
}
