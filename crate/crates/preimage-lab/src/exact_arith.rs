//! Arbitrary-precision rational arithmetic and small-prime factoring.
//!
//! Everything downstream (number fields, curves, searches) is built on
//! [`ExactRational`]; no floating point enters any verified computation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, unsupported, Error, Result};

/// Default trial-division bound used by consumers that need complete
/// factorizations of norms.
pub const FACTOR_BOUND: u64 = 1_000_000;

/// An exact rational number, always kept in lowest terms with positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        ExactRational(BigRational::from_integer(n))
    }

    /// `num/den`, reduced. Fails on a zero denominator.
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return domain("rational with zero denominator");
        }
        Ok(ExactRational(BigRational::new(num, den)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(BigInt::from(num), BigInt::from(den)).expect("nonzero denominator")
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_bigint(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return domain("reciprocal of zero");
        }
        Ok(ExactRational(self.0.recip()))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return domain("negative power of zero");
        }
        Ok(ExactRational(self.0.pow(e)))
    }

    /// Naive multiplicative height: max(|numerator|, denominator).
    pub fn height(&self) -> BigUint {
        let n = self.0.numer().magnitude();
        let d = self.0.denom().magnitude();
        if n >= d {
            n.clone()
        } else {
            d.clone()
        }
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `"p"` or `"p/q"` with optional leading sign.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            BigInt::from_str(t.trim())
                .map_err(|_| Error::Domain(format!("invalid integer literal {t:?}")))
        };
        match s.split_once('/') {
            None => Ok(ExactRational(BigRational::from_integer(parse_int(s)?))),
            Some((n, d)) => {
                let num = parse_int(n)?;
                let den = parse_int(d)?;
                ExactRational::new(num, den)
            }
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((self.0).$method(rhs.0))
            }
        }
        impl $trait for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "division by zero rational");
        ExactRational(self.0 / rhs.0)
    }
}

impl Div for &ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: &ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "division by zero rational");
        ExactRational(&self.0 / &rhs.0)
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl AddAssign<&ExactRational> for ExactRational {
    fn add_assign(&mut self, rhs: &ExactRational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&ExactRational> for ExactRational {
    fn sub_assign(&mut self, rhs: &ExactRational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&ExactRational> for ExactRational {
    fn mul_assign(&mut self, rhs: &ExactRational) {
        self.0 *= &rhs.0;
    }
}

/// p-adic valuation of a nonzero rational at a prime `p`.
pub fn padic_valuation(x: &ExactRational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return domain("p-adic valuation of zero");
    }
    if p < 2 {
        return domain("p-adic valuation requires p >= 2");
    }
    let p = BigInt::from(p);
    let count = |mut n: BigInt| -> i64 {
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return v;
            }
            v += 1;
            n = q;
        }
    };
    Ok(count(x.numer().clone()) - count(x.denom().clone()))
}

/// Exact integer n-th root, or `None` when `x` is not a perfect n-th power.
pub fn nth_root_int(x: &BigUint, n: u32) -> Option<BigUint> {
    assert!(n >= 1);
    let r = x.nth_root(n);
    (r.pow(n) == *x).then_some(r)
}

/// Floor square root of a fixed-width unsigned integer.
pub(crate) fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u128;
    while r > 0 && r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Exact rational n-th root: `Some(y)` with `y^n = x`, or `None`.
///
/// For even `n`, negative inputs have no root and positive inputs return the
/// positive root; for odd `n` the sign is carried through.
pub fn nth_root_rational(x: &ExactRational, n: u32) -> Option<ExactRational> {
    assert!(n >= 1, "root index must be at least 1");
    if x.is_zero() {
        return Some(ExactRational::zero());
    }
    let neg = x.is_negative();
    if neg && n.is_multiple_of(2) {
        return None;
    }
    let num = nth_root_int(x.numer().magnitude(), n)?;
    let den = nth_root_int(x.denom().magnitude(), n)?;
    let mut root = ExactRational::new(BigInt::from(num), BigInt::from(den)).expect("nonzero root denominator");
    if neg {
        root = -root;
    }
    Some(root)
}

/// Sign and partial prime factorization of a nonzero integer.
///
/// `factors` holds the primes found by trial division up to the bound;
/// `cofactor` is the remaining unfactored part (1 when the factorization is
/// complete). `sign * prod(factors) * cofactor` reconstructs the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallFactorization {
    pub sign: i8,
    pub factors: BTreeMap<u64, u32>,
    pub cofactor: BigUint,
}

impl SmallFactorization {
    pub fn reconstruct(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (&p, &e) in &self.factors {
            acc *= BigUint::from(p).pow(e);
        }
        acc *= &self.cofactor;
        let acc = BigInt::from(acc);
        if self.sign < 0 {
            -acc
        } else {
            acc
        }
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    /// Complete prime factorization, certifying the cofactor as a prime
    /// power when possible.
    ///
    /// After trial division up to `bound`, the cofactor has no prime factor
    /// at most `bound`; if it equals `r^k` with `r < bound^2` then `r` must
    /// be prime (a composite with no factor <= bound exceeds `bound^2`).
    /// Anything else is reported as unsupported rather than guessed at.
    pub fn certified_complete(&self, bound: u64) -> Result<BTreeMap<BigUint, u32>> {
        let mut out: BTreeMap<BigUint, u32> = self
            .factors
            .iter()
            .map(|(&p, &e)| (BigUint::from(p), e))
            .collect();
        if self.cofactor.is_one() {
            return Ok(out);
        }
        let bound_sq = BigUint::from(bound) * BigUint::from(bound);
        for k in (1..=6u32).rev() {
            if let Some(r) = nth_root_int(&self.cofactor, k) {
                if r > BigUint::one() {
                    if r < bound_sq {
                        *out.entry(r).or_insert(0) += k;
                        return Ok(out);
                    }
                    break;
                }
            }
        }
        unsupported(format!(
            "cofactor {} cannot be certified prime under bound {}",
            self.cofactor, bound
        ))
    }
}

/// Trial division of a nonzero integer by all primes up to `bound`.
///
/// Stops early once the remaining part drops below the square of the current
/// trial divisor (it is then prime). Primes above the bound always land in
/// `cofactor`, never in `factors`.
pub fn factor_small(n: &BigInt, bound: u64) -> Result<SmallFactorization> {
    if n.is_zero() {
        return domain("factoring zero");
    }
    let sign: i8 = if n.is_negative() { -1 } else { 1 };
    let mut rest = n.magnitude().clone();
    let mut factors = BTreeMap::new();
    let mut divide_out = |rest: &mut BigUint, d: u64| {
        let big = BigUint::from(d);
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&big);
            if !r.is_zero() {
                break;
            }
            *rest = q;
            e += 1;
        }
        if e > 0 {
            factors.insert(d, e);
        }
    };
    divide_out(&mut rest, 2);
    let mut d = 3u64;
    while d <= bound && !rest.is_one() {
        if BigUint::from(d) * BigUint::from(d) > rest {
            // remaining part is prime
            if let Some(small) = rest.to_u64() {
                if small <= bound {
                    *factors.entry(small).or_insert(0) += 1;
                    rest = BigUint::one();
                }
            }
            break;
        }
        divide_out(&mut rest, d);
        d += 2;
    }
    Ok(SmallFactorization {
        sign,
        factors,
        cofactor: rest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_display_roundtrip() {
        for s in ["0", "5", "-7", "3/4", "-11/9", "22/7"] {
            assert_eq!(rat(s).to_string(), s);
        }
        assert_eq!(rat("4/6").to_string(), "2/3");
        assert_eq!(rat("-4/-6").to_string(), "2/3");
        assert_eq!(rat("4/-6").to_string(), "-2/3");
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("a/3".parse::<ExactRational>().is_err());
    }

    #[test]
    fn field_ops() {
        let a = rat("3/4");
        let b = rat("-2/3");
        assert_eq!(&a + &b, rat("1/12"));
        assert_eq!(&a * &b, rat("-1/2"));
        assert_eq!(&a - &b, rat("17/12"));
        assert_eq!(a.clone() / b.clone(), rat("-9/8"));
        assert_eq!(b.pow(-2).unwrap(), rat("9/4"));
        assert_eq!(a.height(), BigUint::from(4u32));
        assert_eq!(rat("-22/7").height(), BigUint::from(22u32));
    }

    #[test]
    fn padic_valuations() {
        assert_eq!(padic_valuation(&rat("12"), 2).unwrap(), 2);
        assert_eq!(padic_valuation(&rat("12"), 3).unwrap(), 1);
        assert_eq!(padic_valuation(&rat("5/8"), 2).unwrap(), -3);
        assert_eq!(padic_valuation(&rat("7"), 5).unwrap(), 0);
        assert!(padic_valuation(&rat("0"), 2).is_err());
    }

    #[test]
    fn rational_roots() {
        assert_eq!(nth_root_rational(&rat("16/81"), 4), Some(rat("2/3")));
        assert_eq!(nth_root_rational(&rat("-27/8"), 3), Some(rat("-3/2")));
        assert_eq!(nth_root_rational(&rat("-16"), 4), None);
        assert_eq!(nth_root_rational(&rat("2"), 2), None);
        assert_eq!(nth_root_rational(&rat("0"), 5), Some(rat("0")));
        assert_eq!(nth_root_rational(&rat("1"), 1), Some(rat("1")));
    }

    #[test]
    fn factor_small_basic() {
        let f = factor_small(&BigInt::from(-600), 100).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.factors, BTreeMap::from([(2, 3), (3, 1), (5, 2)]));
        assert!(f.is_complete());
        assert_eq!(f.reconstruct(), BigInt::from(-600));
    }

    #[test]
    fn factor_small_early_exit_prime() {
        // 2 * 4231459 with bound 2100: the large prime must stay in the cofactor
        let n = BigInt::from(2u64 * 4_231_459);
        let f = factor_small(&n, 2100).unwrap();
        assert_eq!(f.factors, BTreeMap::from([(2, 1)]));
        assert_eq!(f.cofactor, BigUint::from(4_231_459u64));
        // 4231459 < 2100², so it is certified prime; 1000² is too small
        let complete = f.certified_complete(2100).unwrap();
        assert_eq!(complete.get(&BigUint::from(4_231_459u64)), Some(&1));
        let g = factor_small(&n, 1000).unwrap();
        assert!(g.certified_complete(1000).is_err());
    }

    #[test]
    fn certify_prime_square_cofactor() {
        // 4231459^2 survives trial division; certified via the exact square root
        let p = BigUint::from(4_231_459u64);
        let n = BigInt::from(&p * &p);
        let f = factor_small(&n, FACTOR_BOUND).unwrap();
        assert_eq!(f.cofactor, &p * &p);
        let complete = f.certified_complete(FACTOR_BOUND).unwrap();
        assert_eq!(complete.get(&p), Some(&2));
    }

    #[test]
    fn certify_rejects_composite_cofactor() {
        // product of two distinct primes above the bound cannot be certified
        let n = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        let f = factor_small(&n, 1000).unwrap();
        assert!(f.certified_complete(1000).is_err());
    }

    proptest! {
        #[test]
        fn prop_factor_reconstructs(n in -2_000_000i64..2_000_000i64, bound in 2u64..5000) {
            prop_assume!(n != 0);
            let f = factor_small(&BigInt::from(n), bound).unwrap();
            prop_assert_eq!(f.reconstruct(), BigInt::from(n));
            for &p in f.factors.keys() {
                prop_assert!(p <= bound || f.factors.len() == 1);
                // every recorded prime actually is prime
                prop_assert!((2..p).take_while(|d| d * d <= p).all(|d| p % d != 0));
            }
        }

        #[test]
        fn prop_nth_root_inverts_pow(num in -200i64..200, den in 1i64..40, n in 1u32..5) {
            prop_assume!(num != 0);
            let x = ExactRational::ratio(num, den);
            let xn = x.pow(n as i32).unwrap();
            let r = nth_root_rational(&xn, n).unwrap();
            if n % 2 == 0 {
                prop_assert_eq!(r, x.abs());
            } else {
                prop_assert_eq!(r, x);
            }
        }

        #[test]
        fn prop_padic_additive(a in 1i64..10_000, b in 1i64..10_000) {
            let x = ExactRational::from_int(a);
            let y = ExactRational::from_int(b);
            let v = padic_valuation(&(&x * &y), 3).unwrap();
            prop_assert_eq!(
                v,
                padic_valuation(&x, 3).unwrap() + padic_valuation(&y, 3).unwrap()
            );
        }

        #[test]
        fn prop_serde_roundtrip(num in -10_000i64..10_000, den in 1i64..10_000) {
            let x = ExactRational::ratio(num, den);
            let json = serde_json::to_string(&x).unwrap();
            let back: ExactRational = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
