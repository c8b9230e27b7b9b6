//! Quartic-twist descent for the family C_D: D²y⁴ = x³ − x + 1.
//!
//! Rational points of every C_D feed the final pullback: denominators are
//! cleared to a primitive triple (X, Y, Z), the cubic form factors through
//! the cubic field as A·B = Y⁴ with A = X − D²θZ⁴, and the fourth-power-free
//! classes (δ_A, δ_B) land in a four-element candidate set. Searching the
//! curves of the family at bounded height, pushing the points to
//! v² = u³ − u + 1 through ψ_D and the two covering maps, and lifting the
//! resulting set S to level 4 reproduces the full rational point set there.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cubic_field::{fourth_power_free, k_add, k_mul, KElement};
use crate::elliptic::{
    apply_phi, curve_e, ec_mul, express_as_multiple, q0, ECPoint, PhiVariant,
};
use crate::error::{domain, Error, Result};
use crate::exact_arith::{nth_root_rational, ExactRational};
use crate::preimage_curves::{lift_to_x4, mu_inv, ProjPoint};

/// Twist value D = (−1)^ε₀·2^ε₁·23^ε₂; the eight values exhaust the
/// relevant quartic twists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DValue {
    pub eps0: bool,
    pub eps1: bool,
    pub eps2: bool,
}

impl DValue {
    pub fn value(&self) -> i64 {
        let mut v = 1i64;
        if self.eps1 {
            v *= 2;
        }
        if self.eps2 {
            v *= 23;
        }
        if self.eps0 {
            v = -v;
        }
        v
    }

    pub fn from_value(v: i64) -> Result<DValue> {
        enumerate_d()
            .into_iter()
            .find(|d| d.value() == v)
            .ok_or_else(|| {
                Error::Domain(format!(
                    "twist value must be one of ±1, ±2, ±23, ±46; got {v}"
                ))
            })
    }
}

impl fmt::Display for DValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// The eight twist values in fixed order: 1, −1, 2, −2, 23, −23, 46, −46.
pub fn enumerate_d() -> Vec<DValue> {
    let mut out = Vec::with_capacity(8);
    for eps2 in [false, true] {
        for eps1 in [false, true] {
            for eps0 in [false, true] {
                out.push(DValue { eps0, eps1, eps2 });
            }
        }
    }
    out
}

/// Primitive cleared-denominator form of a point of C_D: D²x = X/Z⁴,
/// D²y = Y/Z³ with Z > 0, gcd(X, Y) = gcd(X, Z) = 1, and
/// Y⁴ = X³ − D⁴XZ⁸ + D⁶Z¹².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XYZTriple {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

/// Is (x, y) on C_D: D²y⁴ = x³ − x + 1?
pub fn on_cd(x: &ExactRational, y: &ExactRational, d: DValue) -> bool {
    let d2 = ExactRational::from_int(d.value() * d.value());
    let lhs = &d2 * &y.pow(4).expect("fourth power");
    let rhs = &(&x.pow(3).expect("cube") - x) + &ExactRational::from_int(1);
    lhs == rhs
}

/// Clear denominators of a C_D point. The scaled coordinates (D²x, D²y)
/// satisfy v⁴ = u³ − D⁴u + D⁶, which forces den(D²x) = e⁴ and
/// den(D²y) | e³; the minimal choice Z = e is taken and the coprimality
/// and curve-equation invariants are asserted.
pub fn clear_denominators(
    x: &ExactRational,
    y: &ExactRational,
    d: DValue,
) -> Result<XYZTriple> {
    if !on_cd(x, y, d) {
        return domain(format!("({x}, {y}) is not on C_{d}"));
    }
    let d2 = ExactRational::from_int(d.value() * d.value());
    let dx = x * &d2;
    let dy = y * &d2;
    let e = crate::exact_arith::nth_root_int(dx.denom().magnitude(), 4)
        .expect("denominator of the scaled x-coordinate must be a fourth power");
    let e = BigInt::from(e);
    let z4 = ExactRational::from_bigint(&e * &e * &e * &e);
    let z3 = ExactRational::from_bigint(&e * &e * &e);
    let xb = (&dx * &z4).to_bigint().expect("X integral by choice of Z");
    let yb = (&dy * &z3).to_bigint().expect("Y integral: den(D²y) divides Z³");
    let triple = XYZTriple { x: xb, y: yb, z: e };
    let (xi, yi, zi) = (&triple.x, &triple.y, &triple.z);
    let d4 = BigInt::from(d.value()).pow(4);
    let d6 = BigInt::from(d.value()).pow(6);
    let z8 = zi.pow(8);
    let z12 = zi.pow(12);
    assert_eq!(
        yi.pow(4),
        xi.pow(3) - &d4 * xi * &z8 + &d6 * &z12,
        "cleared triple violates Y⁴ = X³ − D⁴XZ⁸ + D⁶Z¹²"
    );
    assert!(xi.gcd(yi).is_one(), "gcd(X, Y) ≠ 1");
    assert!(xi.gcd(zi).is_one(), "gcd(X, Z) ≠ 1");
    Ok(triple)
}

/// A = X − D²θZ⁴ and B = X² + D²θXZ⁴ + D⁴(θ² − 1)Z⁸ for arbitrary
/// integers; their product is X³ − D⁴XZ⁸ + D⁶Z¹² identically (θ³ = θ − 1).
fn ab_parts(x: &BigInt, z: &BigInt, d: i64) -> (KElement, KElement) {
    let d2 = BigInt::from(d) * BigInt::from(d);
    let d4 = &d2 * &d2;
    let z4 = z.pow(4);
    let z8 = &z4 * &z4;
    let rat = |b: BigInt| ExactRational::from_bigint(b);
    let a = KElement::new(rat(x.clone()), rat(-(&d2 * &z4)), rat(BigInt::zero()));
    let b = KElement::new(
        rat(x * x - &d4 * &z8),
        rat(&d2 * x * &z4),
        rat(&d4 * &z8),
    );
    (a, b)
}

/// The K-element factorization A·B = Y⁴ attached to a cleared triple; the
/// identity is asserted exactly.
pub fn compute_ab(t: &XYZTriple, d: DValue) -> (KElement, KElement) {
    let (a, b) = ab_parts(&t.x, &t.z, d.value());
    let prod = k_mul(&a, &b);
    let y4 = KElement::from_rational(ExactRational::from_bigint(t.y.pow(4)));
    assert_eq!(prod, y4, "A·B must equal Y⁴ exactly");
    (a, b)
}

/// Fourth-power-free unit classes of the pair (A, B), each in
/// units/(units)⁴ ≅ Z/2 × Z/4 as (sign bit, θ-exponent mod 4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeltaPair {
    pub delta_a: (bool, u8),
    pub delta_b: (bool, u8),
}

/// n with class = class((−θ)^n), if the class is a power of −θ.
pub fn minus_theta_power(cls: (bool, u8)) -> Option<u8> {
    let (s, k) = cls;
    // (−θ)^n has sign n mod 2 and exponent n mod 4
    if s == (k % 2 == 1) {
        Some(k)
    } else {
        None
    }
}

/// Printable form of a unit class mod fourth powers.
pub fn class_label(cls: (bool, u8)) -> String {
    match minus_theta_power(cls) {
        Some(0) => "1".to_string(),
        Some(1) => "-theta".to_string(),
        Some(2) => "theta^2".to_string(),
        Some(3) => "-theta^3".to_string(),
        _ => {
            let (s, k) = cls;
            format!("{}theta^{k}", if s { "-" } else { "" })
        }
    }
}

impl DeltaPair {
    /// Both classes as powers of −θ, when they are.
    pub fn minus_theta_powers(&self) -> Option<(u8, u8)> {
        Some((minus_theta_power(self.delta_a)?, minus_theta_power(self.delta_b)?))
    }

    /// Membership in the four pairs (1,1), (−θ,−θ³), (θ²,θ²), (−θ³,−θ)
    /// that a twist-curve point can produce.
    pub fn is_candidate(&self) -> bool {
        matches!(
            self.minus_theta_powers(),
            Some((0, 0)) | Some((1, 3)) | Some((2, 2)) | Some((3, 1))
        )
    }

    pub fn labels(&self) -> (String, String) {
        (class_label(self.delta_a), class_label(self.delta_b))
    }
}

/// Fourth-power-free classification of both factors. Both classes must be
/// unit classes (every prime valuation divisible by 4); anything else is a
/// classification violation, as is a product A·B that is not a rational
/// fourth power. The product of the two classes is asserted trivial.
pub fn delta_pair(a: &KElement, b: &KElement) -> Result<DeltaPair> {
    let prod = k_mul(a, b);
    let prod_rat = if prod.is_rational() {
        prod.coeffs[0].clone()
    } else {
        return Err(Error::ClassificationViolation(format!(
            "product of factors is not rational: {prod}"
        )));
    };
    if nth_root_rational(&prod_rat, 4).is_none() {
        return Err(Error::ClassificationViolation(format!(
            "product {prod_rat} is not a rational fourth power"
        )));
    }
    let da = fourth_power_free(a)?;
    let db = fourth_power_free(b)?;
    let delta_a = da.delta_class.ok_or_else(|| {
        Error::ClassificationViolation(format!("delta of {a} is not a unit: {}", da.delta))
    })?;
    let delta_b = db.delta_class.ok_or_else(|| {
        Error::ClassificationViolation(format!("delta of {b} is not a unit: {}", db.delta))
    })?;
    assert!(
        delta_a.0 == delta_b.0 && (delta_a.1 + delta_b.1) % 4 == 0,
        "unit classes must multiply to the trivial fourth-power class"
    );
    Ok(DeltaPair { delta_a, delta_b })
}

fn fourth_root_u128(n: u128) -> Option<u128> {
    use crate::exact_arith::isqrt_u128;
    if n == 0 {
        return Some(0);
    }
    // fourth powers are 0 or 1 mod 16
    if n & 15 > 1 {
        return None;
    }
    let r = isqrt_u128(isqrt_u128(n));
    (r.saturating_sub(1)..=r + 1).find(|&cand| cand * cand * cand * cand == n)
}

/// All rational points (x, y) of C_D with height of x at most the bound
/// (x = p/q in lowest terms, max(|p|, q) ≤ bound), sorted. Completeness is
/// relative to the bound: this is a search, not a proof of emptiness.
pub fn cd_search(d: DValue, height_bound: u32) -> Vec<(ExactRational, ExactRational)> {
    assert!(height_bound >= 1, "height bound must be positive");
    assert!(height_bound <= 1_000_000, "scan bound capped for fixed-width arithmetic");
    let bound = height_bound as i128;
    let d2 = (d.value() * d.value()) as i128;
    let mut out = Vec::new();
    for q in 1..=bound {
        for p in -bound..=bound {
            if p.gcd(&q) != 1 {
                continue;
            }
            // t = (x³ − x + 1)/D² with x = p/q: numerator p³ − pq² + q³
            let num = p * p * p - p * q * q + q * q * q;
            if num < 0 {
                continue;
            }
            let den = q * q * q * d2;
            let g = num.gcd(&den);
            let (rn, rd) = ((num / g) as u128, (den / g) as u128);
            let (Some(yn), Some(yd)) = (fourth_root_u128(rn), fourth_root_u128(rd)) else {
                continue;
            };
            let x = ExactRational::new(BigInt::from(p), BigInt::from(q)).expect("q > 0");
            let y = ExactRational::new(BigInt::from(yn), BigInt::from(yd)).expect("yd > 0");
            debug_assert!(on_cd(&x, &y, d));
            if y.is_zero() {
                out.push((x, y));
            } else {
                out.push((x.clone(), -&y));
                out.push((x, y));
            }
        }
    }
    out.sort();
    out
}

/// ψ_D: C_D → E, (x, y) ↦ (x, D·y²).
pub fn psi_d(pt: &(ExactRational, ExactRational), d: DValue) -> Result<ECPoint> {
    let (x, y) = pt;
    if !on_cd(x, y, d) {
        return domain(format!("({x}, {y}) is not on C_{d}"));
    }
    let v = &ExactRational::from_int(d.value()) * &(y * y);
    let image = ECPoint::affine(x.clone(), v);
    assert!(curve_e().contains(&image), "psi image must land on the curve");
    Ok(image)
}

/// The finite set S on v² = u³ − u + 1 to pull back to level 4: {O, 3Q₀}
/// together with both covering-map images of every searched C_{±1} point.
/// Each element is labeled with its multiple of Q₀. The cd bound controls
/// only the underlying curve searches.
pub fn build_s(cd_bound: u32) -> Result<Vec<(i64, ECPoint)>> {
    let e = curve_e();
    let base = q0();
    let mut points = vec![ECPoint::Infinity, ec_mul(&e, 3, &base)];
    for d in [DValue::from_value(1)?, DValue::from_value(-1)?] {
        for pt in cd_search(d, cd_bound) {
            let on_e = psi_d(&pt, d)?;
            for variant in [PhiVariant::Double, PhiVariant::TranslateThenDouble] {
                points.push(apply_phi(variant, &on_e)?);
            }
        }
    }
    let mut labeled = Vec::new();
    for p in points {
        let m = express_as_multiple(&e, &p, &base, 32).ok_or_else(|| {
            Error::ClassificationViolation(format!("{p} is not a small multiple of the generator"))
        })?;
        if !labeled.iter().any(|&(m2, _)| m2 == m) {
            labeled.push((m, p));
        }
    }
    labeled.sort_by_key(|&(m, _)| m);
    Ok(labeled)
}

/// Union of the rational level-4 fibers over S: the complete rational point
/// set of the level-4 curve, sorted.
pub fn x4_points_over_s(cd_bound: u32) -> Result<Vec<ProjPoint>> {
    let mut out = Vec::new();
    for (_, p) in build_s(cd_bound)? {
        out.extend(lift_to_x4(&mu_inv(&p)?)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// A point of one of the side curves y² = D_B·x⁴ − (3θ²−4)/4 over K, in
/// weighted coordinates [x : y : z] with z ∈ {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPoint {
    pub x: KElement,
    pub y: KElement,
    pub at_infinity: bool,
}

fn kw(x: KElement, y: KElement, at_infinity: bool) -> WeightedPoint {
    WeightedPoint { x, y, at_infinity }
}

/// Known rational point sets of the side curves, indexed by the −θ-power n
/// of δ_B. Recorded from an external computation (Chabauty over K); this
/// artifact checks membership of its searched points, not completeness.
pub fn twist_curve_known_points(n: u8) -> Result<Vec<WeightedPoint>> {
    let one = || KElement::from_ints(1, 0, 0);
    let th = KElement::theta;
    let half = ExactRational::new(BigInt::from(1), BigInt::from(2)).expect("2 ≠ 0");
    // y-coordinates (aθ + b)/2 as elements
    let ymk = |a: i64, b: i64| {
        KElement::new(
            &ExactRational::from_int(b) * &half,
            &ExactRational::from_int(a) * &half,
            ExactRational::zero(),
        )
    };
    let th2m1 = KElement::from_ints(-1, 0, 1); // θ² − 1
    let m_th2m1 = KElement::from_ints(1, 0, -1); // 1 − θ²
    Ok(match n {
        0 => vec![
            kw(one(), KElement::from_ints(-1, 0, 0), true),
            kw(th(), ymk(1, -2), false),
            kw(one(), one(), true),
            kw(crate::cubic_field::k_neg(&th()), ymk(1, -2), false),
        ],
        1 => vec![
            kw(m_th2m1.clone(), ymk(1, 2), false),
            kw(th2m1.clone(), ymk(1, 2), false),
        ],
        2 => Vec::new(),
        3 => vec![
            kw(th2m1, ymk(1, 0), false),
            kw(m_th2m1, ymk(1, 0), false),
        ],
        _ => return domain("class exponent must be in 0..4"),
    })
}

/// Image of a cleared C_D point on the side curve for its δ_B class:
/// x-coordinate s_B/D, y-coordinate X/(D²Z⁴) + θ/2.
pub fn twist_curve_image(t: &XYZTriple, d: DValue, s_b: &KElement) -> (KElement, KElement) {
    let dv = ExactRational::from_int(d.value());
    let x = s_b.scale(&dv.recip().expect("twist value nonzero"));
    let z4 = ExactRational::from_bigint(t.z.pow(4));
    let d2 = &dv * &dv;
    let xq = &ExactRational::from_bigint(t.x.clone()) / &(&d2 * &z4);
    let half = ExactRational::new(BigInt::from(1), BigInt::from(2)).expect("2 ≠ 0");
    let y = k_add(
        &KElement::from_rational(xq),
        &KElement::new(ExactRational::zero(), half, ExactRational::zero()),
    );
    (x, y)
}

/// Does the affine part of the recorded point set for class exponent n
/// contain (x, y), with x taken up to sign?
pub fn twist_curve_contains(n: u8, x: &KElement, y: &KElement) -> Result<bool> {
    let neg_x = crate::cubic_field::k_neg(x);
    Ok(twist_curve_known_points(n)?
        .iter()
        .any(|p| !p.at_infinity && (p.x == *x || p.x == neg_x) && p.y == *y))
}
