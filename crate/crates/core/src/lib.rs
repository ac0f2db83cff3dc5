//! Exact and numerical models for Floer-theoretic computations on the monotone
//! quadric `S² × S²`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything that touches files,
//! clocks or the terminal lives in the companion `quadric` crate.
//!
//! Module map:
//!
//! * [`linalg`]: sparse rational matrices, ranks, kernels and quotients.
//! * [`novikov`]: truncated Laurent coefficients and the `t`-grading rule.
//! * [`complexes`]: graded filtered chain complexes, homology, spectral sequences.
//! * [`floer`]: generator families, Conley–Zehnder indices, actions and the
//!   index/Chern case analysis.
//! * [`bo`]: the differentials `d₀`, `d₁` on the deformed complex `QB` and the
//!   full verification pipeline for `H₂ = ℚ`.
//! * [`quantum`]: the degree-4 quantum homology algebra and its idempotents.
//! * [`semitoric`]: the moment map `Φ = (F, G)`, fiber taxonomy and the
//!   area of the curves `α_b`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bo;
pub mod complexes;
pub mod floer;
pub mod linalg;
pub mod novikov;
pub mod quantum;
pub mod semitoric;

pub use linalg::{Rational, SparseMatrix, SparseVector};
