//! The degree-4 component `QH₄` of the quantum homology of the quadric.
//!
//! It is spanned by `1 = [W]` and `Pt = [pt]·t`, and the product is fixed
//! by `(Pt)² = 1`. That relation is not put in by hand: [`derive_pt_square`]
//! recovers it from the idempotents `e± = (1 ± Pt)/2`.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{format_rational, int, rat, Rational};
use crate::novikov::graded_degree;

/// `a·1 + b·Pt`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumClass {
    #[serde(with = "crate::linalg::serde_rational")]
    pub a: Rational,
    #[serde(with = "crate::linalg::serde_rational")]
    pub b: Rational,
}

impl QuantumClass {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }

    pub fn pt() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.a * q, &self.b * q)
    }

    /// The product with `(Pt)²` left as a parameter.
    pub fn mul_with(&self, other: &Self, pt_square: &Self) -> Self {
        let plain = Self::new(&self.a * &other.a, &self.a * &other.b + &self.b * &other.a);
        plain + pt_square.scale(&(&self.b * &other.b))
    }

    /// Coordinates in the basis `e₊, e₋`.
    pub fn eigen_coordinates(&self) -> (Rational, Rational) {
        (&self.a + &self.b, &self.a - &self.b)
    }
}

impl fmt::Display for QuantumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}·Pt", format_rational(&self.a), format_rational(&-&self.b))
        } else {
            write!(f, "{} + {}·Pt", format_rational(&self.a), format_rational(&self.b))
        }
    }
}

impl Add for QuantumClass {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for QuantumClass {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for QuantumClass {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Mul for &QuantumClass {
    type Output = QuantumClass;
    fn mul(self, o: &QuantumClass) -> QuantumClass {
        qh4_mul(self, o)
    }
}

/// `1·1 = 1`, `1·Pt = Pt`, `Pt·Pt = 1`.
pub fn qh4_mul(u: &QuantumClass, v: &QuantumClass) -> QuantumClass {
    u.mul_with(v, &QuantumClass::one())
}

/// `e± = (1 ± Pt)/2`.
pub fn idempotents() -> (QuantumClass, QuantumClass) {
    let half = rat(1, 2);
    (QuantumClass::new(half.clone(), half.clone()), QuantumClass::new(half.clone(), -half))
}

/// Solves `e² = e` for `(Pt)²`, given `e = (1 + σPt)/2` with `σ = ±1`.
///
/// Writing `(Pt)² = c`, `(1 + σPt)²/4 = (1 + 2σPt + c)/4`, so `e² = e` holds
/// exactly when `c = 2 + 2σPt − 1 − 2σPt = 1`.
pub fn derive_pt_square_from(sign: i64) -> QuantumClass {
    let sigma = int(sign);
    let e = QuantumClass::new(rat(1, 2), &sigma / int(2));
    // 4e − (1 + 2σPt)
    e.scale(&int(4)) - QuantumClass::new(Rational::one(), int(2) * sigma)
}

/// `(Pt)²` as forced by both idempotents; `None` if they disagree.
pub fn derive_pt_square() -> Option<QuantumClass> {
    let plus = derive_pt_square_from(1);
    let minus = derive_pt_square_from(-1);
    (plus == minus).then_some(plus)
}

/// `deg(a·t^N) = deg a + 4N`.
pub fn grading_check(class_degree: i64, t_power: i64) -> i64 {
    graded_degree(class_degree, t_power)
}

/// `1 = [W]` and `Pt = [pt]·t` both have degree 4.
pub fn basis_degrees() -> (i64, i64) {
    (grading_check(4, 0), grading_check(0, 1))
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraCheck {
    pub name: &'static str,
    pub passed: bool,
}

/// The ring axioms on the basis `{1, Pt}` together with the idempotent
/// relations and the eigenvectors of multiplication by `Pt`.
pub fn algebra_checks() -> alloc::vec::Vec<AlgebraCheck> {
    let basis = [QuantumClass::one(), QuantumClass::pt()];
    let (ep, em) = idempotents();
    let pt = QuantumClass::pt();
    let mut unital = true;
    let mut commutative = true;
    let mut associative = true;
    for x in &basis {
        unital &= qh4_mul(&QuantumClass::one(), x) == *x && qh4_mul(x, &QuantumClass::one()) == *x;
        for y in &basis {
            commutative &= qh4_mul(x, y) == qh4_mul(y, x);
            for z in &basis {
                associative &= qh4_mul(&qh4_mul(x, y), z) == qh4_mul(x, &qh4_mul(y, z));
            }
        }
    }
    let (d1, d2) = basis_degrees();
    alloc::vec![
        AlgebraCheck { name: "unital", passed: unital },
        AlgebraCheck { name: "commutative", passed: commutative },
        AlgebraCheck { name: "associative", passed: associative },
        AlgebraCheck { name: "e+^2 = e+", passed: qh4_mul(&ep, &ep) == ep },
        AlgebraCheck { name: "e-^2 = e-", passed: qh4_mul(&em, &em) == em },
        AlgebraCheck { name: "e+ e- = 0", passed: qh4_mul(&ep, &em).is_zero() },
        AlgebraCheck { name: "e+ + e- = 1", passed: ep.clone() + em.clone() == QuantumClass::one() },
        AlgebraCheck { name: "e+ - e- = Pt", passed: ep.clone() - em.clone() == pt },
        AlgebraCheck { name: "Pt^2 = 1 (derived)", passed: derive_pt_square() == Some(QuantumClass::one()) },
        AlgebraCheck { name: "Pt e+ = e+", passed: qh4_mul(&pt, &ep) == ep },
        AlgebraCheck { name: "Pt e- = -e-", passed: qh4_mul(&pt, &em) == -em },
        AlgebraCheck { name: "degrees", passed: d1 == 4 && d2 == 4 },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idempotent_values() {
        let (ep, em) = idempotents();
        assert_eq!(ep, QuantumClass::new(rat(1, 2), rat(1, 2)));
        assert_eq!(em, QuantumClass::new(rat(1, 2), rat(-1, 2)));
        assert_eq!(ep.to_string(), "1/2 + 1/2·Pt");
        assert_eq!(em.to_string(), "1/2 - 1/2·Pt");
    }

    #[test]
    fn every_check_passes() {
        for c in algebra_checks() {
            assert!(c.passed, "{}", c.name);
        }
    }

    #[test]
    fn other_squares_break_idempotency() {
        let (ep, _) = idempotents();
        for c in [QuantumClass::zero(), -QuantumClass::one(), QuantumClass::pt()] {
            assert_ne!(ep.mul_with(&ep, &c), ep);
        }
    }

    #[test]
    fn grading() {
        assert_eq!(grading_check(0, 1), 4);
        assert_eq!(grading_check(4, 0), 4);
        assert_eq!(grading_check(0, 2), 8);
    }

    #[test]
    fn eigen_coordinates_reconstruct() {
        let v = QuantumClass::new(rat(3, 7), rat(-2, 5));
        let (p, m) = v.eigen_coordinates();
        let (ep, em) = idempotents();
        assert_eq!(ep.scale(&p) + em.scale(&m), v);
    }
}
