//! Exact arithmetic in the cubic field K = Q(θ) with θ³ = θ − 1.
//!
//! The minimal polynomial t³ − t + 1 has squarefree discriminant −23, so
//! Z[θ] is the full ring of integers; "integral" below always means integer
//! coordinates in the power basis 1, θ, θ². The field has one real
//! embedding, class number one, and unit group {±1} × θ^Z, which is what
//! makes the explicit square/fourth-power classification below complete.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use once_cell::sync::OnceCell;
use serde::{Deserialize, Serialize};

use crate::error::{domain, unsupported, Error, Result};
use crate::exact_arith::{factor_small, padic_valuation, ExactRational, FACTOR_BOUND};
use crate::modp;

/// Element a + b·θ + c·θ² with exact rational coordinates.
///
/// Serializes as the bare three-entry array `["c0", "c1", "c2"]`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KElement {
    /// Coordinates `[a, b, c]` on the power basis 1, θ, θ².
    pub coeffs: [ExactRational; 3],
}

impl KElement {
    pub fn new(c0: ExactRational, c1: ExactRational, c2: ExactRational) -> Self {
        KElement { coeffs: [c0, c1, c2] }
    }

    pub fn from_ints(c0: i64, c1: i64, c2: i64) -> Self {
        KElement::new(
            ExactRational::from_int(c0),
            ExactRational::from_int(c1),
            ExactRational::from_int(c2),
        )
    }

    pub fn from_rational(r: ExactRational) -> Self {
        KElement::new(r, ExactRational::zero(), ExactRational::zero())
    }

    pub fn zero() -> Self {
        KElement::from_ints(0, 0, 0)
    }

    pub fn one() -> Self {
        KElement::from_ints(1, 0, 0)
    }

    pub fn theta() -> Self {
        KElement::from_ints(0, 1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1].is_zero() && self.coeffs[2].is_zero()
    }

    /// Least positive integer `n` with `n·self` integral.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        l
    }

    pub fn scale(&self, r: &ExactRational) -> Self {
        KElement::new(
            &self.coeffs[0] * r,
            &self.coeffs[1] * r,
            &self.coeffs[2] * r,
        )
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "theta", "theta^2"];
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let lead = if wrote {
                if c.is_negative() { " - " } else { " + " }
            } else if c.is_negative() {
                "-"
            } else {
                ""
            };
            let mag = c.abs();
            if i == 0 {
                write!(f, "{lead}{mag}")?;
            } else if mag.is_one() {
                write!(f, "{lead}{}", names[i])?;
            } else {
                write!(f, "{lead}{mag}*{}", names[i])?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for KElement {
    type Err = Error;

    /// Parses `"a,b,c"` as coordinates on 1, θ, θ².
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return domain(format!("expected three comma-separated coordinates, got {s:?}"));
        }
        Ok(KElement::new(
            parts[0].parse()?,
            parts[1].parse()?,
            parts[2].parse()?,
        ))
    }
}

pub fn k_add(x: &KElement, y: &KElement) -> KElement {
    KElement::new(
        &x.coeffs[0] + &y.coeffs[0],
        &x.coeffs[1] + &y.coeffs[1],
        &x.coeffs[2] + &y.coeffs[2],
    )
}

pub fn k_sub(x: &KElement, y: &KElement) -> KElement {
    KElement::new(
        &x.coeffs[0] - &y.coeffs[0],
        &x.coeffs[1] - &y.coeffs[1],
        &x.coeffs[2] - &y.coeffs[2],
    )
}

pub fn k_neg(x: &KElement) -> KElement {
    KElement::new(-&x.coeffs[0], -&x.coeffs[1], -&x.coeffs[2])
}

/// Product, reduced by θ³ = θ − 1 and θ⁴ = θ² − θ.
pub fn k_mul(x: &KElement, y: &KElement) -> KElement {
    let [a1, b1, c1] = &x.coeffs;
    let [a2, b2, c2] = &y.coeffs;
    let bc = &(b1 * c2) + &(c1 * b2);
    let cc = c1 * c2;
    let t0 = &(a1 * a2) - &bc;
    let t1 = &(&(&(a1 * b2) + &(b1 * a2)) + &bc) - &cc;
    let t2 = &(&(&(a1 * c2) + &(b1 * b2)) + &(c1 * a2)) + &cc;
    KElement::new(t0, t1, t2)
}

/// Multiplication-by-x matrix on the power basis (columns are x·1, x·θ, x·θ²).
fn mul_matrix(x: &KElement) -> [[ExactRational; 3]; 3] {
    let [a, b, c] = &x.coeffs;
    [
        [a.clone(), -c, -b],
        [b.clone(), a + c, b - c],
        [c.clone(), b.clone(), a + c],
    ]
}

fn det3(m: &[[ExactRational; 3]; 3]) -> ExactRational {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        &(&m[r1][c1] * &m[r2][c2]) - &(&m[r1][c2] * &m[r2][c1])
    };
    &(&(&m[0][0] * &minor(1, 2, 1, 2)) - &(&m[0][1] * &minor(1, 2, 0, 2)))
        + &(&m[0][2] * &minor(1, 2, 0, 1))
}

/// Field norm N(x) = det of multiplication by x; N(a − bθ) = a³ − ab² + b³.
pub fn norm(x: &KElement) -> ExactRational {
    det3(&mul_matrix(x))
}

/// Multiplicative inverse via Cramer's rule on the multiplication matrix.
pub fn k_inv(x: &KElement) -> Result<KElement> {
    if x.is_zero() {
        return domain("inverse of zero field element");
    }
    let m = mul_matrix(x);
    let d = det3(&m);
    let mut cols = [ExactRational::zero(), ExactRational::zero(), ExactRational::zero()];
    for (j, col) in cols.iter_mut().enumerate() {
        let mut mj = m.clone();
        for (i, row) in mj.iter_mut().enumerate() {
            row[j] = if i == 0 {
                ExactRational::one()
            } else {
                ExactRational::zero()
            };
        }
        *col = det3(&mj) / d.clone();
    }
    let [c0, c1, c2] = cols;
    Ok(KElement::new(c0, c1, c2))
}

/// Integer power of a nonzero element.
pub fn k_pow(x: &KElement, e: i64) -> Result<KElement> {
    let (base, mut n) = if e < 0 {
        (k_inv(x)?, (-e) as u64)
    } else {
        (x.clone(), e as u64)
    };
    let mut acc = KElement::one();
    let mut sq = base;
    while n > 0 {
        if n & 1 == 1 {
            acc = k_mul(&acc, &sq);
        }
        sq = k_mul(&sq, &sq);
        n >>= 1;
    }
    Ok(acc)
}

/// A unit written as (−1)^sign_bit · θ^theta_exp.
///
/// The unit group is {±1} × θ^Z, so this pair identifies a unit uniquely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitClass {
    pub sign_bit: bool,
    pub theta_exp: i64,
}

impl UnitClass {
    pub fn to_element(self) -> KElement {
        let mut u = k_pow(&KElement::theta(), self.theta_exp).expect("theta is invertible");
        if self.sign_bit {
            u = k_neg(&u);
        }
        u
    }

    /// Image in units modulo fourth powers, as (sign in Z/2, exponent in Z/4).
    pub fn mod_fourth_powers(self) -> (bool, u8) {
        (self.sign_bit, self.theta_exp.rem_euclid(4) as u8)
    }

    /// Image in units modulo squares.
    pub fn mod_squares(self) -> (bool, bool) {
        (self.sign_bit, self.theta_exp.rem_euclid(2) == 1)
    }
}

/// Real root of t³ − t + 1 (≈ −1.3247), used only to seed the exponent
/// estimate in `unit_decompose`; every result is verified exactly.
fn theta_real() -> f64 {
    static CELL: OnceCell<f64> = OnceCell::new();
    *CELL.get_or_init(|| {
        let (mut lo, mut hi) = (-2.0f64, -1.0f64);
        for _ in 0..200 {
            let mid = (lo + hi) / 2.0;
            if mid * mid * mid - mid + 1.0 > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo + hi) / 2.0
    })
}

fn real_embedding_log_abs(x: &KElement) -> f64 {
    let t = theta_real();
    let approx: f64 = x
        .coeffs
        .iter()
        .zip([1.0, t, t * t])
        .map(|(c, tw)| {
            let n = c.numer().to_f64().unwrap_or(f64::MAX * c.numer().signum().to_f64().unwrap_or(1.0));
            let d = c.denom().to_f64().unwrap_or(f64::MAX);
            n / d * tw
        })
        .sum();
    if approx.is_finite() && approx != 0.0 {
        approx.abs().ln()
    } else {
        // fallback: coordinate magnitude dominates up to a bounded factor
        let bits = x
            .coeffs
            .iter()
            .map(|c| c.numer().bits() as i64 - c.denom().bits() as i64)
            .max()
            .unwrap_or(0);
        bits as f64 * std::f64::consts::LN_2
    }
}

/// Writes a unit as (−1)^s · θ^k, verified exactly.
///
/// Preconditions: `u` integral with norm ±1. The real embedding pins the
/// exponent to within rounding; nearby exponents are checked exactly and a
/// full scan backs up the estimate, so a wrong answer is impossible and a
/// miss on a genuine unit is loud.
pub fn unit_decompose(u: &KElement) -> Result<UnitClass> {
    if !u.is_integral() {
        return domain(format!("unit_decompose needs an integral element, got {u}"));
    }
    let n = norm(u);
    if !n.abs().is_one() {
        return domain(format!("unit_decompose needs norm ±1, got norm {n}"));
    }
    let est = real_embedding_log_abs(u) / theta_real().abs().ln();
    let k0 = est.round() as i64;
    let verify = |k: i64| -> Option<UnitClass> {
        let w = k_mul(u, &k_pow(&KElement::theta(), -k).expect("theta invertible"));
        if w == KElement::one() {
            Some(UnitClass { sign_bit: false, theta_exp: k })
        } else if w == k_neg(&KElement::one()) {
            Some(UnitClass { sign_bit: true, theta_exp: k })
        } else {
            None
        }
    };
    for dk in 0..=8i64 {
        for k in [k0 + dk, k0 - dk] {
            if let Some(c) = verify(k) {
                return Ok(c);
            }
        }
    }
    for k in -512..=512i64 {
        if let Some(c) = verify(k) {
            return Ok(c);
        }
    }
    Err(Error::ClassificationViolation(format!(
        "norm-±1 element {u} is not ±θ^k with |k| ≤ 512; unit group must be {{±1}}×θ^Z"
    )))
}

/// A prime ideal of Z[θ] above a rational prime, identified by the
/// irreducible factor of t³ − t + 1 it corresponds to modulo that prime.
///
/// A principal generator is expensive to find, so it is materialized lazily:
/// residue-level membership tests never need it, and valuations request it
/// only once division is known to happen at least once.
#[derive(Debug, Clone)]
pub struct PrimeIdealRef {
    pub residue_char: u64,
    pub residue_degree: u8,
    pub ramification_index: u8,
    /// Monic irreducible factor of t³ − t + 1 mod residue_char,
    /// coefficients low degree first.
    pub gpoly: Vec<u64>,
    generator: OnceCell<KElement>,
}

impl PartialEq for PrimeIdealRef {
    fn eq(&self, other: &Self) -> bool {
        self.residue_char == other.residue_char && self.gpoly == other.gpoly
    }
}
impl Eq for PrimeIdealRef {}

impl fmt::Display for PrimeIdealRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            self.residue_char,
            modp::poly_to_string(&self.gpoly, "t")
        )
    }
}

impl PrimeIdealRef {
    /// Residue norm of the ideal: ℓ^f.
    pub fn ideal_norm(&self) -> BigInt {
        BigInt::from(self.residue_char).pow(self.residue_degree as u32)
    }

    /// Does the integral element lie in this prime ideal?
    pub fn contains(&self, x: &KElement) -> Result<bool> {
        if !x.is_integral() {
            return domain("membership test requires an integral element");
        }
        let ell = self.residue_char;
        let red = |c: &ExactRational| -> u64 {
            let m = c.numer().mod_floor_u64(ell);
            m
        };
        let (a, b, c) = (red(&x.coeffs[0]), red(&x.coeffs[1]), red(&x.coeffs[2]));
        Ok(match self.residue_degree {
            3 => a == 0 && b == 0 && c == 0,
            1 => {
                // gpoly = t - r: evaluate a + b r + c r² mod ℓ
                let r = (ell - self.gpoly[0] % ell) % ell;
                let r2 = ((r as u128 * r as u128) % ell as u128) as u64;
                let val = (a as u128 + b as u128 * r as u128 + c as u128 * r2 as u128) % ell as u128;
                val == 0
            }
            2 => {
                // reduce a + b t + c t² modulo (ℓ, t² + g1 t + g0)
                let g0 = self.gpoly[0];
                let g1 = self.gpoly[1];
                let c_g0 = ((c as u128 * g0 as u128) % ell as u128) as u64;
                let c_g1 = ((c as u128 * g1 as u128) % ell as u128) as u64;
                (a + ell - c_g0).is_multiple_of(ell) && (b + ell - c_g1).is_multiple_of(ell)
            }
            _ => unreachable!("residue degree is 1, 2, or 3"),
        })
    }

    /// A principal generator: an integral element of norm ±ℓ^f lying in the
    /// ideal. Cached after the first search.
    ///
    /// The search scans a coordinate box of radius ~2·ℓ^(f/3) (the expected
    /// size of a shortest generator in a norm-ℓ^f ideal lattice), doubling a
    /// few times before giving up loudly. Degree-2 searches above a large
    /// residue characteristic are refused rather than left to run forever.
    pub fn generator(&self) -> Result<&KElement> {
        if let Some(g) = self.generator.get() {
            return Ok(g);
        }
        let g = self.search_generator()?;
        debug_assert!(self.contains(&g).unwrap());
        Ok(self.generator.get_or_init(|| g))
    }

    fn search_generator(&self) -> Result<KElement> {
        let ell = self.residue_char;
        let f = self.residue_degree as u32;
        if f == 3 {
            return Ok(KElement::from_ints(ell as i64, 0, 0));
        }
        if f == 2 && ell > 50_000 {
            return unsupported(format!(
                "generator search for a degree-2 prime above {ell} exceeds the supported range"
            ));
        }
        let target = (ell as i128).pow(f);
        let base = (ell as f64).powf(f as f64 / 3.0).ceil() as i64;
        let mut radius = 2 * base + 2;
        for _ in 0..6 {
            if let Some(g) = self.scan_box(radius, target) {
                return Ok(g);
            }
            radius *= 2;
        }
        unsupported(format!("no generator of norm ±{target} found above {ell}"))
    }

    fn scan_box(&self, radius: i64, target: i128) -> Option<KElement> {
        let ell = self.residue_char as i64;
        let x = radius;
        match self.residue_degree {
            1 => {
                let r = ((ell - (self.gpoly[0] as i64) % ell) % ell) as i128;
                let ell_i = ell as i128;
                for b in -x..=x {
                    for c in -x..=x {
                        // a ≡ −(b r + c r²) mod ℓ
                        let a0 = (-(b as i128 * r + c as i128 * r * r)).rem_euclid(ell_i);
                        let mut a = a0 - ((a0 + x as i128).div_euclid(ell_i)) * ell_i;
                        while a <= x as i128 {
                            if a >= -(x as i128)
                                && (a, b, c) != (0, 0, 0)
                                && norm_i128(a, b as i128, c as i128).abs() == target
                            {
                                return Some(KElement::from_ints(a as i64, b, c));
                            }
                            a += ell_i;
                        }
                    }
                }
                None
            }
            2 => {
                let g0 = self.gpoly[0] as i128;
                let g1 = self.gpoly[1] as i128;
                let ell_i = ell as i128;
                for c in -x..=x {
                    // a ≡ c·g0, b ≡ c·g1 mod ℓ
                    let a0 = (c as i128 * g0).rem_euclid(ell_i);
                    let b0 = (c as i128 * g1).rem_euclid(ell_i);
                    let mut b = b0 - ((b0 + x as i128).div_euclid(ell_i)) * ell_i;
                    while b <= x as i128 {
                        if b >= -(x as i128) {
                            let mut a = a0 - ((a0 + x as i128).div_euclid(ell_i)) * ell_i;
                            while a <= x as i128 {
                                if a >= -(x as i128)
                                    && (a, b, c as i128) != (0, 0, 0)
                                    && norm_i128(a, b, c as i128).abs() == target
                                {
                                    return Some(KElement::from_ints(a as i64, b as i64, c));
                                }
                                a += ell_i;
                            }
                        }
                        b += ell_i;
                    }
                }
                None
            }
            _ => unreachable!(),
        }
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, m: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, m: u64) -> u64 {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(m)).to_u64().expect("reduced residue fits u64")
    }
}

/// Norm of an integral element with i128 coordinates (generator search).
fn norm_i128(a: i128, b: i128, c: i128) -> i128 {
    let ac = a + c;
    a * (ac * ac - b * (b - c)) + c * (b * ac - c * (b - c)) - b * (b * b - c * ac)
}

/// The prime ideals of Z[θ] above a rational prime ℓ, from the factorization
/// of t³ − t + 1 mod ℓ; sorted by (residue degree, factor coefficients).
pub fn primes_above(ell: u64) -> Result<Vec<PrimeIdealRef>> {
    if ell < 2 {
        return domain("primes_above requires a prime");
    }
    let mut d = 2u64;
    while d * d <= ell {
        if ell.is_multiple_of(d) {
            return domain(format!("{ell} is not prime"));
        }
        d += 1;
    }
    let minpoly = vec![1 % ell, (ell - 1) % ell, 0, 1]; // t³ − t + 1
    let (_, factors) = modp::factor_poly_mod_p(&minpoly, ell)?;
    let mut out = Vec::new();
    for (g, mult) in factors {
        let deg = modp::degree(&g).unwrap() as u8;
        out.push(PrimeIdealRef {
            residue_char: ell,
            residue_degree: deg,
            ramification_index: mult as u8,
            gpoly: g,
            generator: OnceCell::new(),
        });
    }
    Ok(out)
}

/// Valuation of a nonzero element at a prime ideal.
///
/// The element is split into an integral numerator and a rational-integer
/// denominator. Integral valuations are computed by repeated exact division
/// by a principal generator (class number one makes every ideal principal);
/// a cheap residue membership test avoids materializing the generator when
/// the valuation is zero.
pub fn valuation_at(x: &KElement, prime: &PrimeIdealRef) -> Result<i64> {
    if x.is_zero() {
        return domain("valuation of zero");
    }
    let den = x.denominator_lcm();
    let num = x.scale(&ExactRational::from_bigint(den.clone()));
    debug_assert!(num.is_integral());
    let vden = padic_valuation(
        &ExactRational::from_bigint(den),
        prime.residue_char,
    )? * prime.ramification_index as i64;
    Ok(integral_valuation(&num, prime)? - vden)
}

fn integral_valuation(x: &KElement, prime: &PrimeIdealRef) -> Result<i64> {
    debug_assert!(x.is_integral() && !x.is_zero());
    if !prime.contains(x)? {
        return Ok(0);
    }
    let ginv = k_inv(prime.generator()?)?;
    let mut v = 0i64;
    let mut cur = x.clone();
    loop {
        let next = k_mul(&cur, &ginv);
        if !next.is_integral() {
            return Ok(v);
        }
        v += 1;
        cur = next;
    }
}

/// Fourth-power-free decomposition α = δ·s⁴ of a nonzero integral element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourthPowerFreeDecomp {
    /// Fourth-power-free part: all prime valuations in {0,1,2,3}, unit part
    /// normalized to (−1)^s·θ^k with k ∈ {0,1,2,3}.
    pub delta: KElement,
    /// Fourth root of α/δ.
    pub s: KElement,
    /// Image of δ in units/(units)⁴ ≅ Z/2 × Z/4 — present exactly when δ is
    /// a unit (all prime valuations of α divisible by 4).
    pub delta_class: Option<(bool, u8)>,
}

struct PrimePartSplit {
    /// Unit left over after dividing out generator^valuation at every prime.
    unit: KElement,
    /// (prime, valuation) for each prime with nonzero valuation.
    valuations: Vec<(PrimeIdealRef, i64)>,
}

/// Divides out all prime parts of a nonzero integral element, returning the
/// residual unit. Requires the norm to factor completely.
fn split_prime_parts(x: &KElement, bound: u64) -> Result<PrimePartSplit> {
    let n = norm(x);
    debug_assert!(n.is_integer());
    let nint = n.to_bigint().expect("norm of integral element is an integer");
    let fac = factor_small(&nint, bound)?;
    let complete = fac.certified_complete(bound)?;
    let mut unit = x.clone();
    let mut valuations = Vec::new();
    for p in complete.keys() {
        let ell = p.to_u64().ok_or_else(|| {
            Error::UnsupportedInput(format!("prime {p} exceeds the supported residue range"))
        })?;
        for prime in primes_above(ell)? {
            let v = integral_valuation(x, &prime)?;
            if v > 0 {
                let g = prime.generator()?.clone();
                unit = k_mul(&unit, &k_pow(&k_inv(&g)?, v)?);
                valuations.push((prime, v));
            }
        }
    }
    let resid_norm = norm(&unit);
    if !resid_norm.abs().is_one() {
        return Err(Error::ClassificationViolation(format!(
            "prime-part split of {x} left non-unit residual of norm {resid_norm}"
        )));
    }
    Ok(PrimePartSplit { unit, valuations })
}

/// Square-class data of α: whether all prime valuations are even, and the
/// residual unit class after dividing out all prime parts. Denominators are
/// cleared by a rational square first, which keeps the class.
pub(crate) fn square_residual(x: &KElement) -> Result<(bool, UnitClass)> {
    if x.is_zero() {
        return domain("square test on zero");
    }
    let den = x.denominator_lcm();
    let den2 = ExactRational::from_bigint(&den * &den);
    let integral = x.scale(&den2);
    let split = split_prime_parts(&integral, FACTOR_BOUND)?;
    let all_even = split.valuations.iter().all(|(_, v)| v % 2 == 0);
    let cls = unit_decompose(&split.unit)?;
    Ok((all_even, cls))
}

/// Is α a square in K^×?
///
/// Algorithm: all prime-ideal valuations must be even (primes taken over the
/// factored norm of an integral rescaling) and the residual unit must be
/// +θ^even. Errors if the norm cannot be completely factored.
pub fn is_square(x: &KElement) -> Result<bool> {
    let (all_even, cls) = square_residual(x)?;
    Ok(all_even && !cls.sign_bit && cls.theta_exp % 2 == 0)
}

/// Fourth-power-free decomposition of a nonzero integral α.
pub fn fourth_power_free(x: &KElement) -> Result<FourthPowerFreeDecomp> {
    if x.is_zero() {
        return domain("fourth-power decomposition of zero");
    }
    if !x.is_integral() {
        return domain(format!("fourth_power_free requires an integral element, got {x}"));
    }
    let split = split_prime_parts(x, FACTOR_BOUND)?;
    let mut delta = KElement::one();
    let mut s = KElement::one();
    let mut all_multiples_of_4 = true;
    for (prime, v) in &split.valuations {
        let g = prime.generator()?;
        delta = k_mul(&delta, &k_pow(g, v % 4)?);
        s = k_mul(&s, &k_pow(g, v / 4)?);
        if v % 4 != 0 {
            all_multiples_of_4 = false;
        }
    }
    let cls = unit_decompose(&split.unit)?;
    let k_mod = cls.theta_exp.rem_euclid(4);
    let mut unit_delta = k_pow(&KElement::theta(), k_mod)?;
    if cls.sign_bit {
        unit_delta = k_neg(&unit_delta);
    }
    delta = k_mul(&delta, &unit_delta);
    s = k_mul(&s, &k_pow(&KElement::theta(), (cls.theta_exp - k_mod) / 4)?);
    debug_assert_eq!(k_mul(&delta, &k_pow(&s, 4).unwrap()), *x);
    let delta_class = all_multiples_of_4.then_some((cls.sign_bit, k_mod as u8));
    Ok(FourthPowerFreeDecomp { delta, s, delta_class })
}

/// Generator β₁ = 3θ² − 4 of the unramified prime above 23.
pub fn beta1() -> KElement {
    KElement::from_ints(-4, 0, 3)
}

/// Generator β₂ = 3θ² − 1 of the ramified prime above 23.
pub fn beta2() -> KElement {
    KElement::from_ints(-1, 0, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kr(a: i64, b: i64, c: i64) -> KElement {
        KElement::from_ints(a, b, c)
    }

    #[test]
    fn basic_relations() {
        let th = KElement::theta();
        assert_eq!(k_pow(&th, 3).unwrap(), kr(-1, 1, 0)); // θ³ = θ − 1
        assert_eq!(norm(&th), ExactRational::from_int(-1));
        assert_eq!(k_inv(&th).unwrap(), kr(1, 0, -1)); // θ⁻¹ = 1 − θ²
        assert_eq!(k_mul(&th, &k_inv(&th).unwrap()), KElement::one());
        // unit identities
        assert_eq!(kr(1, -1, 0), k_neg(&k_pow(&th, 3).unwrap())); // 1−θ = −θ³
        assert_eq!(kr(-1, -1, 0), k_pow(&th, -4).unwrap()); // −1−θ = θ⁻⁴
        assert_eq!(kr(0, -1, 1), k_pow(&th, 4).unwrap()); // θ²−θ = θ⁴
        assert_eq!(kr(0, 1, 1), k_neg(&k_pow(&th, -3).unwrap())); // θ²+θ = −θ⁻³
    }

    #[test]
    fn norm_of_linear_elements() {
        // N(x − yθ) = x³ − xy² + y³
        for (x, y) in [(1i64, 1i64), (2, 3), (-5, 7), (26239, 2601)] {
            let n = norm(&kr(x, -y, 0));
            let direct = x.pow(3) as i128 - (x as i128) * (y as i128).pow(2) + (y as i128).pow(3);
            assert_eq!(n.to_string(), direct.to_string());
        }
    }

    #[test]
    fn twenty_three_factors_exactly() {
        // 23 = β₁ · β₂² on the nose (no unit correction needed)
        let prod = k_mul(&beta1(), &k_mul(&beta2(), &beta2()));
        assert_eq!(prod, kr(23, 0, 0));
        assert_eq!(norm(&beta1()), ExactRational::from_int(23));
        assert_eq!(norm(&beta2()), ExactRational::from_int(23));
    }

    #[test]
    fn splitting_at_23() {
        let primes = primes_above(23).unwrap();
        assert_eq!(primes.len(), 2);
        assert_eq!(primes[0].gpoly, vec![3, 1]); // t + 3
        assert_eq!(primes[1].gpoly, vec![10, 1]); // t + 10, the ramified one
        assert_eq!(primes[0].ramification_index, 1);
        assert_eq!(primes[1].ramification_index, 2);
        let twenty_three = kr(23, 0, 0);
        assert_eq!(valuation_at(&twenty_three, &primes[0]).unwrap(), 1);
        assert_eq!(valuation_at(&twenty_three, &primes[1]).unwrap(), 2);
        assert_eq!(valuation_at(&beta1(), &primes[0]).unwrap(), 1);
        assert_eq!(valuation_at(&beta1(), &primes[1]).unwrap(), 0);
        assert_eq!(valuation_at(&beta2(), &primes[1]).unwrap(), 1);
        assert_eq!(valuation_at(&KElement::theta(), &primes[0]).unwrap(), 0);
    }

    #[test]
    fn splitting_shapes() {
        // inert at 2, 3, 5 is impossible for all three; check observed shapes
        for (ell, degrees) in [
            (2u64, vec![3]),
            (3, vec![3]),
            (5, vec![1, 2]),
            (59, vec![1, 1, 1]),
        ] {
            let primes = primes_above(ell).unwrap();
            let got: Vec<u8> = primes.iter().map(|p| p.residue_degree).collect();
            assert_eq!(got, degrees, "splitting at {ell}");
        }
        assert!(primes_above(6).is_err());
    }

    #[test]
    fn generators_have_prime_norm() {
        for ell in [5u64, 7, 11, 23, 347, 4931, 4_231_459] {
            for prime in primes_above(ell).unwrap() {
                if prime.residue_degree == 2 && ell > 50_000 {
                    continue;
                }
                let g = prime.generator().unwrap();
                assert_eq!(
                    norm(g).abs(),
                    ExactRational::from_bigint(prime.ideal_norm()),
                    "generator norm above {ell}"
                );
                assert!(prime.contains(g).unwrap());
            }
        }
    }

    #[test]
    fn valuations_of_rational_primes() {
        // v_P(ℓ) = ramification index, summed over f: Σ e·f = 3
        for ell in [5u64, 7, 23, 59] {
            let primes = primes_above(ell).unwrap();
            let ell_elt = KElement::from_rational(ExactRational::from_int(ell as i64));
            let mut total = 0i64;
            for p in &primes {
                let v = valuation_at(&ell_elt, p).unwrap();
                assert_eq!(v, p.ramification_index as i64);
                total += v * p.residue_degree as i64;
            }
            assert_eq!(total, 3);
        }
    }

    #[test]
    fn square_tests() {
        assert!(is_square(&kr(0, 0, 1)).unwrap()); // θ²
        assert!(is_square(&kr(-1, -1, 0)).unwrap()); // −1−θ = θ⁻⁴
        assert!(!is_square(&k_neg(&KElement::theta())).unwrap()); // −θ
        assert!(!is_square(&k_neg(&KElement::one())).unwrap()); // −1
        assert!(is_square(&kr(4, 0, 0)).unwrap());
        assert!(!is_square(&kr(2, 0, 0)).unwrap());
        // rational coordinates: (θ/2)² = θ²/4
        let half_sq = kr(0, 0, 1).scale(&ExactRational::ratio(1, 4));
        assert!(is_square(&half_sq).unwrap());
    }

    #[test]
    fn unit_decompositions() {
        assert_eq!(
            unit_decompose(&kr(0, 0, 1)).unwrap(),
            UnitClass { sign_bit: false, theta_exp: 2 }
        );
        assert_eq!(
            unit_decompose(&kr(-1, -1, 0)).unwrap(),
            UnitClass { sign_bit: false, theta_exp: -4 }
        );
        assert_eq!(
            unit_decompose(&k_neg(&KElement::one())).unwrap(),
            UnitClass { sign_bit: true, theta_exp: 0 }
        );
        assert!(unit_decompose(&kr(2, 0, 0)).is_err());
    }

    #[test]
    fn fourth_power_free_decompositions() {
        // 1 − θ is a unit: class (−1)·θ³
        let d = fourth_power_free(&kr(1, -1, 0)).unwrap();
        assert_eq!(d.delta_class, Some((true, 3)));
        // θ² − θ = θ⁴: delta 1, s = θ
        let d = fourth_power_free(&kr(0, -1, 1)).unwrap();
        assert_eq!(d.delta, KElement::one());
        assert_eq!(d.s, KElement::theta());
        assert_eq!(d.delta_class, Some((false, 0)));
        // 16 = 2⁴
        let d = fourth_power_free(&kr(16, 0, 0)).unwrap();
        assert_eq!(d.delta, KElement::one());
        assert_eq!(d.s, kr(2, 0, 0));
        // 23 has odd valuations (1 and 2 at the two primes above 23), so
        // delta is a non-unit; the exact split depends on which generators
        // the search finds, but the invariants do not
        let d = fourth_power_free(&kr(23, 0, 0)).unwrap();
        assert_eq!(d.delta_class, None);
        assert_eq!(
            k_mul(&d.delta, &k_pow(&d.s, 4).unwrap()),
            kr(23, 0, 0)
        );
        let primes = primes_above(23).unwrap();
        assert_eq!(valuation_at(&d.delta, &primes[0]).unwrap(), 1);
        assert_eq!(valuation_at(&d.delta, &primes[1]).unwrap(), 2);
    }

    #[test]
    fn large_prime_square_norm() {
        // numerator of u(14·Q₀) − θ: norm is the square of a prime beyond the
        // trial-division bound; certification must still succeed
        let alpha = kr(26239, -2601, 0);
        let n = norm(&alpha).to_bigint().unwrap();
        assert_eq!(n, BigInt::from(4_231_459i64) * BigInt::from(4_231_459i64));
        assert!(is_square(&alpha).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn prop_norm_multiplicative(a1 in -9i64..10, b1 in -9i64..10, c1 in -9i64..10,
                                     a2 in -9i64..10, b2 in -9i64..10, c2 in -9i64..10) {
            let x = kr(a1, b1, c1);
            let y = kr(a2, b2, c2);
            prop_assert_eq!(norm(&k_mul(&x, &y)), norm(&x) * norm(&y));
        }

        #[test]
        fn prop_mul_matches_matrix(a1 in -9i64..10, b1 in -9i64..10, c1 in -9i64..10,
                                    a2 in -9i64..10, b2 in -9i64..10, c2 in -9i64..10) {
            // multiplying via the structure constants agrees with the matrix action
            let x = kr(a1, b1, c1);
            let y = kr(a2, b2, c2);
            let m = super::mul_matrix(&x);
            let mut by_matrix = [ExactRational::zero(), ExactRational::zero(), ExactRational::zero()];
            for (row, slot) in m.iter().zip(by_matrix.iter_mut()) {
                for (entry, coeff) in row.iter().zip(&y.coeffs) {
                    *slot += &(entry * coeff);
                }
            }
            let [m0, m1, m2] = by_matrix;
            prop_assert_eq!(k_mul(&x, &y), KElement::new(m0, m1, m2));
        }

        #[test]
        fn prop_inverse(a in -9i64..10, b in -9i64..10, c in -9i64..10) {
            let x = kr(a, b, c);
            prop_assume!(!x.is_zero());
            prop_assert_eq!(k_mul(&x, &k_inv(&x).unwrap()), KElement::one());
        }

        #[test]
        fn prop_unit_roundtrip(s in proptest::bool::ANY, k in -12i64..13) {
            let u = UnitClass { sign_bit: s, theta_exp: k };
            prop_assert_eq!(unit_decompose(&u.to_element()).unwrap(), u);
        }

        #[test]
        fn prop_square_of_anything_is_square(a in -6i64..7, b in -6i64..7, c in -6i64..7) {
            let x = kr(a, b, c);
            prop_assume!(!x.is_zero());
            prop_assert!(is_square(&k_mul(&x, &x)).unwrap());
        }

        #[test]
        fn prop_valuation_additive(a1 in -5i64..6, b1 in -5i64..6, c1 in -5i64..6,
                                    a2 in -5i64..6, b2 in -5i64..6, c2 in -5i64..6) {
            let x = kr(a1, b1, c1);
            let y = kr(a2, b2, c2);
            prop_assume!(!x.is_zero() && !y.is_zero());
            for prime in primes_above(5).unwrap() {
                let vx = valuation_at(&x, &prime).unwrap();
                let vy = valuation_at(&y, &prime).unwrap();
                prop_assert_eq!(valuation_at(&k_mul(&x, &y), &prime).unwrap(), vx + vy);
            }
        }

        #[test]
        fn prop_fourth_power_free_reconstructs(a in -6i64..7, b in -6i64..7, c in -6i64..7) {
            let x = kr(a, b, c);
            prop_assume!(!x.is_zero());
            let d = fourth_power_free(&x).unwrap();
            prop_assert_eq!(k_mul(&d.delta, &k_pow(&d.s, 4).unwrap()), x.clone());
            // delta itself is fourth-power-free: dividing by any nontrivial
            // fourth power of a non-unit would need a valuation ≥ 4
            let n = norm(&d.delta).to_bigint().unwrap();
            let fac = factor_small(&n, 10_000).unwrap();
            for &ell in fac.factors.keys() {
                for prime in primes_above(ell).unwrap() {
                    let v = valuation_at(&d.delta, &prime).unwrap();
                    prop_assert!((0..4).contains(&v));
                }
            }
        }
    }
}
