//! Truncated Laurent coefficients `Σ λ_s t^{-s}` and the `t`-grading rule.
//!
//! Elements are finitely supported and live inside a window of allowed
//! powers `[min_power, max_power]`. The coefficient ring of the deformed
//! complex only uses non-positive powers, truncated at `t^{-μ}`, i.e. the
//! window `[-μ, 0]` (see [`LaurentElement::lambda_window`]).

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{int, Rational};

/// How multiplication by `t` shifts degree and action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingRule {
    pub degree_per_t: i64,
    #[serde(with = "crate::linalg::serde_rational")]
    pub action_per_t: Rational,
}

impl GradingRule {
    /// `deg(a·t^N) = deg(a) + 4N`, `A(γ·t^{-N}) = A(γ) − N`.
    pub fn quadric() -> Self {
        Self { degree_per_t: 4, action_per_t: Rational::one() }
    }

    pub fn degree(&self, base_degree: i64, t_power: i64) -> i64 {
        base_degree + self.degree_per_t * t_power
    }

    pub fn action(&self, base_action: &Rational, t_power: i64) -> Rational {
        base_action + &self.action_per_t * int(t_power)
    }
}

/// Degree of `a·t^N` under the quadric grading.
pub fn graded_degree(base_degree: i64, t_power: i64) -> i64 {
    GradingRule::quadric().degree(base_degree, t_power)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("empty Laurent window [{min}, {max}]")]
pub struct EmptyWindow {
    pub min: i64,
    pub max: i64,
}

/// A finite Laurent polynomial in `t` with rational coefficients, known
/// exactly on its window.
///
/// Operations drop powers that leave the window and set
/// [`truncated`](Self::truncated) on the result, so callers can tell when an
/// identity holds only modulo high powers of `t^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentElement {
    coeffs: BTreeMap<i64, Rational>,
    min_power: i64,
    max_power: i64,
    truncated: bool,
}

impl LaurentElement {
    pub fn zero(min_power: i64, max_power: i64) -> Result<Self, EmptyWindow> {
        if min_power > max_power {
            return Err(EmptyWindow { min: min_power, max: max_power });
        }
        Ok(Self { coeffs: BTreeMap::new(), min_power, max_power, truncated: false })
    }

    /// Window `[-μ, 0]` for `Λ` truncated modulo `t^{-(μ+1)}`.
    pub fn lambda_window(mu: u32) -> (i64, i64) {
        (-(mu as i64), 0)
    }

    pub fn monomial(power: i64, coeff: Rational, window: (i64, i64)) -> Result<Self, EmptyWindow> {
        let mut e = Self::zero(window.0, window.1)?;
        e.add_term(power, coeff);
        Ok(e)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I, window: (i64, i64)) -> Result<Self, EmptyWindow> {
        let mut e = Self::zero(window.0, window.1)?;
        for (p, q) in terms {
            e.add_term(p, q);
        }
        Ok(e)
    }

    /// Adds `coeff·t^power`; out-of-window terms are dropped and flagged.
    pub fn add_term(&mut self, power: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        if power < self.min_power || power > self.max_power {
            self.truncated = true;
            return;
        }
        let entry = self.coeffs.entry(power).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&power);
        }
    }

    pub fn coefficient(&self, power: i64) -> Rational {
        self.coeffs.get(&power).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs.iter().map(|(&p, q)| (p, q))
    }

    pub fn window(&self) -> (i64, i64) {
        (self.min_power, self.max_power)
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn combined_window(&self, other: &Self) -> (i64, i64) {
        (self.min_power.max(other.min_power), self.max_power.min(other.max_power))
    }

    /// Sum on the common window.
    pub fn add(&self, other: &Self) -> Result<Self, EmptyWindow> {
        let (lo, hi) = self.combined_window(other);
        let mut out = Self::zero(lo, hi)?;
        out.truncated = self.truncated || other.truncated;
        for (p, q) in self.terms().chain(other.terms()) {
            out.add_term(p, q.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut out = self.clone();
        if factor.is_zero() {
            out.coeffs.clear();
        } else {
            for q in out.coeffs.values_mut() {
                *q *= factor;
            }
        }
        out
    }

    /// Convolution product restricted to the intersection of the two
    /// windows. Each input is only known on its own window, so nothing
    /// outside the intersection is reliable.
    pub fn mul(&self, other: &Self) -> Result<Self, EmptyWindow> {
        let (lo, hi) = self.combined_window(other);
        let mut out = Self::zero(lo, hi)?;
        out.truncated = self.truncated || other.truncated;
        for (p, a) in self.terms() {
            for (q, b) in other.terms() {
                out.add_term(p + q, a * b);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&p, q) in self.coeffs.iter().rev() {
            let mag = q.abs();
            let sign = if q.is_negative() { "-" } else { "+" };
            if first {
                if q.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let body: String = match (p, mag.is_one()) {
                (0, _) => alloc::format!("{mag}"),
                (_, true) => alloc::format!("t^{p}"),
                (_, false) => alloc::format!("{mag}·t^{p}"),
            };
            f.write_str(&body)?;
        }
        Ok(())
    }
}
