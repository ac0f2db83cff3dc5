//! The semitoric picture of `S² × S²`: `Φ = (F, G)` with `F = z₁ + z₂` and
//! `G = ⟨u₁, u₂⟩`, its fibers `N_{a,b}`, and the curves
//! `α_b = {z² = (cos θ − b)/(cos θ + 1)}` in the cylinder `C = (−1,1) × S¹`.
//!
//! Floating point throughout. Points on the manifold are accepted within
//! [`MANIFOLD_TOL`]; areas are integrated to [`QUADRATURE_TOL`].

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{acos, cos, fabs, sin, sqrt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::Rational;
use num_traits::{One, Zero};

pub const MANIFOLD_TOL: f64 = 1e-12;
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Two moment values closer than this are treated as equal when
/// classifying fibers.
pub const VALUE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SemitoricError {
    #[error("point is off S2 x S2: |u1|^2 - 1 = {first:e}, |u2|^2 - 1 = {second:e}")]
    OffManifold { first: f64, second: f64 },
    #[error("rational point is off S2 x S2")]
    OffManifoldExact,
    #[error("{name} = {value} is outside {domain}")]
    Domain { name: &'static str, value: f64, domain: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductSpherePoint {
    pub first: [f64; 3],
    pub second: [f64; 3],
}

fn norm2(u: &[f64; 3]) -> f64 {
    u[0] * u[0] + u[1] * u[1] + u[2] * u[2]
}

impl ProductSpherePoint {
    pub fn new(first: [f64; 3], second: [f64; 3]) -> Result<Self, SemitoricError> {
        let (e1, e2) = (norm2(&first) - 1.0, norm2(&second) - 1.0);
        if fabs(e1) > MANIFOLD_TOL || fabs(e2) > MANIFOLD_TOL {
            return Err(SemitoricError::OffManifold { first: e1, second: e2 });
        }
        Ok(Self { first, second })
    }

    /// `(x₁,y₁,z₁,x₂,y₂,z₂) ↦ (−x₁,y₁,−z₁,−x₂,y₂,−z₂)`.
    pub fn involution(&self) -> Self {
        let flip = |u: &[f64; 3]| [-u[0], u[1], -u[2]];
        Self { first: flip(&self.first), second: flip(&self.second) }
    }
}

pub fn moment_map(pt: &ProductSpherePoint) -> (f64, f64) {
    let (u, v) = (&pt.first, &pt.second);
    (u[2] + v[2], u[0] * v[0] + u[1] * v[1] + u[2] * v[2])
}

/// `Φ` on a rational point, checking `|u₁|² = |u₂|² = 1` exactly.
pub fn moment_map_exact(first: &[Rational; 3], second: &[Rational; 3]) -> Result<(Rational, Rational), SemitoricError> {
    let n = |u: &[Rational; 3]| u.iter().map(|x| x * x).fold(Rational::zero(), |a, b| a + b);
    if !n(first).is_one() || !n(second).is_one() {
        return Err(SemitoricError::OffManifoldExact);
    }
    let f = &first[2] + &second[2];
    let g = &first[0] * &second[0] + &first[1] * &second[1] + &first[2] * &second[2];
    Ok((f, g))
}

/// `|p| = √((1 + G)/2)` in the cotangent model.
pub fn p_norm(g: f64) -> Result<f64, SemitoricError> {
    if !(-1.0..=1.0).contains(&g) {
        return Err(SemitoricError::Domain { name: "G", value: g, domain: "[-1, 1]" });
    }
    Ok(sqrt((1.0 + g) / 2.0))
}

/// Polynomials in `x₁,y₁,z₁,x₂,y₂,z₂` with integer coefficients.
type Poly = alloc::collections::BTreeMap<[u8; 6], i64>;

fn poly(terms: &[([u8; 6], i64)]) -> Poly {
    terms.iter().copied().collect()
}

fn substitute_signs(p: &Poly, signs: [i64; 6]) -> Poly {
    p.iter()
        .map(|(m, c)| {
            let s: i64 = m.iter().zip(signs).map(|(&e, s)| s.pow(e as u32)).product();
            (*m, c * s)
        })
        .collect()
}

/// `F∘ι = −F` and `G∘ι = G` as polynomial identities.
pub fn involution_identity_symbolic() -> bool {
    let f = poly(&[([0, 0, 1, 0, 0, 0], 1), ([0, 0, 0, 0, 0, 1], 1)]);
    let g = poly(&[([1, 0, 0, 1, 0, 0], 1), ([0, 1, 0, 0, 1, 0], 1), ([0, 0, 1, 0, 0, 1], 1)]);
    let signs = [-1, 1, -1, -1, 1, -1];
    let minus_f: Poly = f.iter().map(|(m, c)| (*m, -c)).collect();
    substitute_signs(&f, signs) == minus_f && substitute_signs(&g, signs) == g
}

/// Range of `G` over `{F = a}`, found by sampling `z₁` and refining.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberRange {
    pub g_min: f64,
    pub g_max: f64,
    pub z_at_min: f64,
    pub z_at_max: f64,
}

fn z_interval(a: f64) -> (f64, f64) {
    ((a - 1.0).max(-1.0), (a + 1.0).min(1.0))
}

fn rho(z1: f64, z2: f64) -> f64 {
    sqrt(((1.0 - z1 * z1) * (1.0 - z2 * z2)).max(0.0))
}

/// Minimises `h` on `[lo, hi]`: a grid pass then golden sections.
fn minimise(h: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const GRID: usize = 256;
    let step = (hi - lo) / GRID as f64;
    let mut best = 0;
    for i in 1..=GRID {
        if h(lo + step * i as f64) < h(lo + step * best as f64) {
            best = i;
        }
    }
    let (mut l, mut r) = ((lo + step * (best as f64 - 1.0)).max(lo), (lo + step * (best as f64 + 1.0)).min(hi));
    let phi = (sqrt(5.0) - 1.0) / 2.0;
    for _ in 0..200 {
        if r - l < 1e-15 {
            break;
        }
        let (m1, m2) = (r - phi * (r - l), l + phi * (r - l));
        if h(m1) < h(m2) {
            r = m2;
        } else {
            l = m1;
        }
    }
    let z = (l + r) / 2.0;
    (z, h(z))
}

pub fn fiber_range(a: f64) -> Option<FiberRange> {
    if !(-2.0..=2.0).contains(&a) {
        return None;
    }
    let (lo, hi) = z_interval(a);
    let (z_at_min, g_min) = minimise(|z| z * (a - z) - rho(z, a - z), lo, hi);
    let (z_at_max, neg_max) = minimise(|z| -(z * (a - z) + rho(z, a - z)), lo, hi);
    Some(FiberRange { g_min, g_max: -neg_max, z_at_min, z_at_max })
}

fn point_on_fiber(a: f64, b: f64, z1: f64, psi: f64) -> Option<ProductSpherePoint> {
    let z2 = a - z1;
    let r = rho(z1, z2);
    let c = if r == 0.0 { 1.0 } else { (b - z1 * z2) / r };
    if fabs(c) > 1.0 + 1e-9 {
        return None;
    }
    let phi = acos(c.clamp(-1.0, 1.0));
    let (r1, r2) = (sqrt((1.0 - z1 * z1).max(0.0)), sqrt((1.0 - z2 * z2).max(0.0)));
    let first = [r1 * cos(psi), r1 * sin(psi), z1];
    let second = [r2 * cos(psi + phi), r2 * sin(psi + phi), z2];
    ProductSpherePoint::new(first, second).ok()
}

/// A point of `N_{a,b}`, or `None` when the fiber looks empty.
pub fn sample_fiber<R: Rng>(a: f64, b: f64, rng: &mut R) -> Option<ProductSpherePoint> {
    let range = fiber_range(a)?;
    if b < range.g_min - VALUE_TOL || b > range.g_max + VALUE_TOL {
        return None;
    }
    let (lo, hi) = z_interval(a);
    let psi = rng.random_range(0.0..2.0 * PI);
    for _ in 0..256 {
        let z1 = rng.random_range(lo..=hi);
        let z2 = a - z1;
        if fabs(b - z1 * z2) <= rho(z1, z2) {
            return point_on_fiber(a, b, z1, psi);
        }
    }
    // thin fibers: use the extremal z₁
    let z1 = if fabs(b - range.g_min) < fabs(b - range.g_max) { range.z_at_min } else { range.z_at_max };
    point_on_fiber(a, b, z1, psi)
}

#[derive(Debug, Clone, Serialize)]
pub struct InvolutionCertificate {
    pub a: f64,
    pub b: f64,
    pub displaced: bool,
    pub symbolic: bool,
    pub samples: usize,
    /// Largest `|Φ(ι p) − (−a, b)|_∞` over the samples.
    pub max_error: f64,
}

/// `ι` maps `N_{a,b}` onto `N_{−a,b}`, so it displaces the fiber when `a ≠ 0`.
pub fn involution_displaces(a: f64, b: f64, samples: usize, seed: u64) -> InvolutionCertificate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error: f64 = 0.0;
    let mut taken = 0;
    for _ in 0..samples {
        let Some(p) = sample_fiber(a, b, &mut rng) else { break };
        let (f, g) = moment_map(&p.involution());
        max_error = max_error.max(fabs(f + a)).max(fabs(g - b));
        taken += 1;
    }
    InvolutionCertificate { a, b, displaced: fabs(a) > VALUE_TOL, symbolic: involution_identity_symbolic(), samples: taken, max_error }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = (a + b) / 2.0;
    let h = (b - a) / 2.0;
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let s = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kronrod * h, fabs((kronrod - gauss) * h))
}

/// Adaptive 7/15-point Gauss–Kronrod on `[a, b]` to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Quadrature {
    let mut stack = alloc::vec![(a, b, 0u32)];
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    while let Some((l, r, depth)) = stack.pop() {
        let (v, e) = gk15(&f, l, r);
        evaluations += 15;
        let budget = tol * (r - l) / (b - a);
        if e <= budget || depth >= 40 {
            value += v;
            error += e;
        } else {
            let m = (l + r) / 2.0;
            stack.push((l, m, depth + 1));
            stack.push((m, r, depth + 1));
        }
    }
    Quadrature { value, error, evaluations }
}

/// The curve `α_b`, for `b ∈ (−1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaCurve {
    pub b: f64,
}

impl AlphaCurve {
    pub fn new(b: f64) -> Result<Self, SemitoricError> {
        if !(b > -1.0 && b < 1.0) {
            return Err(SemitoricError::Domain { name: "b", value: b, domain: "(-1, 1)" });
        }
        Ok(Self { b })
    }

    /// The curve meets `θ = ±θ_max` at `z = 0`.
    pub fn theta_max(&self) -> f64 {
        acos(self.b)
    }

    /// Upper branch `z(θ) ≥ 0`, defined for `cos θ ≥ b`.
    pub fn z(&self, theta: f64) -> Option<f64> {
        let c = cos(theta);
        (c >= self.b).then(|| sqrt((c - self.b) / (c + 1.0)))
    }

    /// Closed polyline through `4n` points, counter-clockwise in `(θ, z)`.
    pub fn polyline(&self, n: usize) -> Vec<(f64, f64)> {
        let t = self.theta_max();
        let n = n.max(1);
        let mut out = Vec::with_capacity(4 * n + 1);
        for i in 0..=2 * n {
            let th = -t + 2.0 * t * i as f64 / (2 * n) as f64;
            out.push((th, -self.z(th).unwrap_or(0.0)));
        }
        for i in 1..2 * n {
            let th = t - 2.0 * t * i as f64 / (2 * n) as f64;
            out.push((th, self.z(th).unwrap_or(0.0)));
        }
        out
    }

    /// `σ`-area enclosed, `σ = (4π)⁻¹ dz ∧ dθ`.
    ///
    /// `(1/4π)·2·∫ z dθ` over `|θ| ≤ θ_max`; with `θ = θ_max(1 − u²)` the
    /// square-root zero at `θ_max` becomes a smooth zero at `u = 0`.
    pub fn area(&self) -> Quadrature {
        let t = self.theta_max();
        let b = self.b;
        let integrand = |u: f64| {
            let th = t * (1.0 - u * u);
            let c = cos(th);
            sqrt(((c - b) / (c + 1.0)).max(0.0)) * 2.0 * t * u
        };
        // both halves θ ≷ 0 and both branches ±z: factor 4/(4π)
        let q = integrate(integrand, 0.0, 1.0, QUADRATURE_TOL * PI);
        Quadrature { value: q.value / PI, error: q.error / PI, evaluations: q.evaluations }
    }
}

pub fn alpha_area(b: f64) -> Result<f64, SemitoricError> {
    Ok(AlphaCurve::new(b)?.area().value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberKind {
    Empty,
    LagrangianTorus,
    /// `L = N_{0,−1}`.
    AntiDiagonal,
    /// `K = N_{0,−1/2}`.
    MonotoneTorus,
    /// `G = 1`, the diagonal `Σ`.
    DiagonalBoundary,
    /// `G` at its minimum on `{F = a}`, `a ≠ 0`.
    LowerBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Displaceability {
    Involution,
    /// `α_b` fits in the disc bounded by `α_{−1/2}`.
    InsidePi { area: f64 },
    NotKnown,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentFiber {
    pub a: f64,
    pub b: f64,
    pub kind: FiberKind,
    /// `None` for empty fibers.
    pub displaceability: Option<Displaceability>,
}

fn near(x: f64, y: f64) -> bool {
    fabs(x - y) <= VALUE_TOL
}

pub fn classify_fiber(a: f64, b: f64) -> MomentFiber {
    let empty = MomentFiber { a, b, kind: FiberKind::Empty, displaceability: None };
    let Some(range) = fiber_range(a) else { return empty };
    if b < range.g_min - VALUE_TOL || b > range.g_max + VALUE_TOL {
        return empty;
    }
    let on_axis = near(a, 0.0);
    let kind = if on_axis && near(b, -1.0) {
        FiberKind::AntiDiagonal
    } else if on_axis && near(b, -0.5) {
        FiberKind::MonotoneTorus
    } else if near(b, range.g_max) {
        FiberKind::DiagonalBoundary
    } else if near(b, range.g_min) {
        FiberKind::LowerBoundary
    } else {
        FiberKind::LagrangianTorus
    };
    let displaceability = if !on_axis {
        Displaceability::Involution
    } else if b > -0.5 + VALUE_TOL && b < 1.0 - VALUE_TOL {
        match alpha_area(b) {
            Ok(area) if area < 0.5 => Displaceability::InsidePi { area },
            _ => Displaceability::NotKnown,
        }
    } else {
        Displaceability::NotKnown
    };
    MomentFiber { a, b, kind, displaceability: Some(displaceability) }
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentCloud {
    pub seed: u64,
    pub points: Vec<(f64, f64)>,
    /// Per `F`-bin, the least and greatest sampled `G`: `(F_mid, G_min, G_max)`.
    pub sketch: Vec<(f64, f64, f64)>,
}

fn sphere_point<R: Rng>(rng: &mut R) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let r = sqrt((1.0 - z * z).max(0.0));
    [r * cos(phi), r * sin(phi), z]
}

/// `n` uniform points of `S² × S²` pushed through `Φ`, from stream 0.
pub fn moment_image_sample(n: usize, seed: u64) -> MomentCloud {
    moment_image_sample_stream(n, seed, 0, 40)
}

/// As [`moment_image_sample`], from an independent ChaCha stream.
pub fn moment_image_sample_stream(n: usize, seed: u64, stream: u64, bins: usize) -> MomentCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut points = Vec::with_capacity(n);
    let bins = bins.max(1);
    let mut lo = alloc::vec![f64::INFINITY; bins];
    let mut hi = alloc::vec![f64::NEG_INFINITY; bins];
    for _ in 0..n {
        let first = sphere_point(&mut rng);
        let second = sphere_point(&mut rng);
        let (f, g) = moment_map(&ProductSpherePoint { first, second });
        let i = (((f + 2.0) / 4.0 * bins as f64) as usize).min(bins - 1);
        lo[i] = lo[i].min(g);
        hi[i] = hi[i].max(g);
        points.push((f, g));
    }
    let width = 4.0 / bins as f64;
    let sketch = (0..bins)
        .filter(|&i| lo[i].is_finite())
        .map(|i| (-2.0 + width * (i as f64 + 0.5), lo[i], hi[i]))
        .collect();
    MomentCloud { seed, points, sketch }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    #[test]
    fn moment_map_examples() {
        let l = ProductSpherePoint::new([0.0, 0.0, 1.0], [0.0, 0.0, -1.0]).unwrap();
        assert_eq!(moment_map(&l), (0.0, -1.0));
        let d = ProductSpherePoint::new([0.0, 0.0, 1.0], [0.0, 0.0, 1.0]).unwrap();
        assert_eq!(moment_map(&d), (2.0, 1.0));
        let k = ProductSpherePoint::new([1.0, 0.0, 0.0], [-0.5, sqrt(3.0) / 2.0, 0.0]).unwrap();
        let (f, g) = moment_map(&k);
        assert!(fabs(f) < 1e-15 && fabs(g + 0.5) < 1e-15);
        assert!(ProductSpherePoint::new([1.0, 1e-5, 0.0], [1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn exact_moment_map() {
        let u = [rat(3, 5), rat(4, 5), int(0)];
        let v = [int(0), rat(-4, 5), rat(3, 5)];
        assert_eq!(moment_map_exact(&u, &v).unwrap(), (rat(3, 5), rat(-16, 25)));
        assert!(moment_map_exact(&[int(1), int(1), int(0)], &v).is_err());
    }

    #[test]
    fn p_norm_values() {
        assert_eq!(p_norm(-1.0).unwrap(), 0.0);
        assert!(fabs(p_norm(-0.5).unwrap() - 0.5) < 1e-15);
        assert_eq!(p_norm(1.0).unwrap(), 1.0);
        assert!(p_norm(1.5).is_err());
    }

    #[test]
    fn symbolic_involution() {
        assert!(involution_identity_symbolic());
    }

    #[test]
    fn involution_certificates() {
        let c = involution_displaces(1.0 / 3.0, 0.25, 100, 7);
        assert!(c.displaced && c.samples == 100 && c.max_error < 1e-12, "{c:?}");
        assert!(!involution_displaces(0.0, -0.5, 10, 7).displaced);
    }

    #[test]
    fn fiber_range_is_parabola_floor() {
        for a in [-1.5, -1.0, 0.0, 0.5, 1.0, 2.0] {
            let r = fiber_range(a).unwrap();
            assert!(fabs(r.g_max - 1.0) < 1e-12);
            assert!(fabs(r.g_min - (a * a / 2.0 - 1.0)) < 1e-10, "a = {a}: {r:?}");
        }
        assert!(fiber_range(2.5).is_none());
    }

    #[test]
    fn area_at_minus_half() {
        let q = AlphaCurve::new(-0.5).unwrap().area();
        assert!(fabs(q.value - 0.5) < 1e-9, "{q:?}");
        assert!(alpha_area(0.999).unwrap() < 0.02);
        assert!(alpha_area(1.0).is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(classify_fiber(0.0, -0.5).kind, FiberKind::MonotoneTorus);
        assert_eq!(classify_fiber(0.0, -1.0).kind, FiberKind::AntiDiagonal);
        let f = classify_fiber(0.0, 0.0);
        assert_eq!(f.kind, FiberKind::LagrangianTorus);
        assert!(matches!(f.displaceability, Some(Displaceability::InsidePi { area }) if area < 0.5));
        assert_eq!(classify_fiber(1.0, 0.25).displaceability, Some(Displaceability::Involution));
        assert_eq!(classify_fiber(1.0, -0.75).kind, FiberKind::Empty);
        assert_eq!(classify_fiber(1.0, -0.5).kind, FiberKind::LowerBoundary);
    }

    #[test]
    fn cloud_is_deterministic_and_bounded() {
        let a = moment_image_sample(2000, 3);
        let b = moment_image_sample(2000, 3);
        assert_eq!(a.points, b.points);
        assert!(a.points.iter().all(|(f, g)| fabs(*f) <= 2.0 && fabs(*g) <= 1.0 + 1e-15));
    }
}
