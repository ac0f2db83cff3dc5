//! JSON form of a graded filtered complex.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "basis": [{"label": "x2", "degree": 2, "filtration": 0, "action": "-2/5", "perturbation": 0}],
//!   "differential": [{"from": 3, "to": 0, "coefficient": "2"}]
//! }
//! ```
//!
//! Rationals are written as `"p/q"` strings, so a round trip is exact.

use quadric_core::complexes::{BasisElement, ComplexError, GradedFilteredComplex};
use quadric_core::linalg::Rational;
use serde::{Deserialize, Serialize};

pub const DOCUMENT_SCHEMA: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed complex document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported complex schema version {0}")]
    Schema(u32),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub from: usize,
    pub to: usize,
    #[serde(with = "quadric_core::linalg::serde_rational")]
    pub coefficient: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub schema_version: u32,
    pub basis: Vec<BasisElement>,
    pub differential: Vec<Entry>,
}

impl ComplexDocument {
    pub fn from_complex(c: &GradedFilteredComplex) -> Self {
        let differential = c.entries().map(|(from, to, q)| Entry { from, to, coefficient: q.clone() }).collect();
        Self { schema_version: DOCUMENT_SCHEMA, basis: c.basis().to_vec(), differential }
    }

    pub fn to_complex(&self) -> Result<GradedFilteredComplex, DocumentError> {
        if self.schema_version != DOCUMENT_SCHEMA {
            return Err(DocumentError::Schema(self.schema_version));
        }
        let entries = self.differential.iter().map(|e| (e.from, e.to, e.coefficient.clone()));
        Ok(GradedFilteredComplex::new(self.basis.clone(), entries)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn complex_to_json(c: &GradedFilteredComplex) -> String {
    ComplexDocument::from_complex(c).to_json()
}

pub fn complex_from_json(text: &str) -> Result<GradedFilteredComplex, DocumentError> {
    ComplexDocument::from_json(text)?.to_complex()
}
