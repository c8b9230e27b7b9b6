//! Projective preimage curves of the origin under x ↦ x² + c.
//!
//! The curve of level N lives in P^N with coordinates [W, Z₁, …, Z_N] and is
//! cut out by the N−1 quadrics Z₁² + Z_i·W − Z_{i+1}² − a·W². This module
//! provides exact multivariate polynomials for those ideals, a remainder-chain
//! membership test, the boundary points at W = 0, the isomorphism of the
//! level-3 curve with v² = u³ − u + 1, rational fiber computation for the
//! level-4 projection, and the ramification/singularity bookkeeping of the
//! level-4 curve over the c-line.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::elliptic::{curve_e, ECPoint};
use crate::error::{domain, Result};
use crate::exact_arith::{nth_root_int, ExactRational};
use crate::modp::{self, PolyP};

/// Exact multivariate polynomial with a fixed, ordered variable list.
///
/// Terms map exponent vectors to nonzero rational coefficients. Printing uses
/// graded order, ties broken lexicographically with the first variable (W for
/// curve ideals) least significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, ExactRational>,
}

impl MPoly {
    pub fn zero(vars: Vec<String>) -> Self {
        MPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vec<String>, c: ExactRational) -> Self {
        let n = vars.len();
        let mut p = MPoly::zero(vars);
        p.insert_term(vec![0; n], c);
        p
    }

    pub fn monomial(vars: Vec<String>, exps: Vec<u32>, c: ExactRational) -> Self {
        assert_eq!(vars.len(), exps.len(), "exponent vector arity mismatch");
        let mut p = MPoly::zero(vars);
        p.insert_term(exps, c);
        p
    }

    /// The single variable `vars[idx]` as a polynomial.
    pub fn var(vars: Vec<String>, idx: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        MPoly::monomial(vars, exps, ExactRational::one())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &ExactRational)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, exps: Vec<u32>, c: ExactRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Coefficient of `vars[var]^k`, as a polynomial with that variable
    /// zeroed out.
    pub fn coeff_of(&self, var: usize, k: u32) -> MPoly {
        let mut out = MPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut e2 = e.clone();
                e2[var] = 0;
                out.insert_term(e2, c.clone());
            }
        }
        out
    }

    /// The constant value if the polynomial has no variables left; None
    /// otherwise.
    pub fn as_constant(&self) -> Option<ExactRational> {
        if self.terms.is_empty() {
            return Some(ExactRational::zero());
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn scale(&self, c: &ExactRational) -> MPoly {
        let mut out = MPoly::zero(self.vars.clone());
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        self.scale(&-&ExactRational::one())
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.vars, other.vars, "variable lists differ");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.vars, other.vars, "variable lists differ");
        let mut out = MPoly::zero(self.vars.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> MPoly {
        let mut acc = MPoly::constant(self.vars.clone(), ExactRational::one());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.insert_term(e2, c * &ExactRational::from_int(e[var] as i64));
        }
        out
    }

    pub fn eval(&self, values: &[ExactRational]) -> ExactRational {
        assert_eq!(values.len(), self.vars.len(), "value vector arity mismatch");
        let mut acc = ExactRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(e) {
                if k > 0 {
                    t = &t * &v.pow(k as i32).expect("nonnegative exponent");
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Univariate coefficient list, lowest degree first. Errors if more than
    /// one variable actually occurs.
    pub fn univariate_coeffs(&self) -> Result<(usize, Vec<ExactRational>)> {
        let used: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.degree_in(i) > 0)
            .collect();
        if used.len() > 1 {
            return domain(format!("expected a univariate polynomial, got {self}"));
        }
        let var = used.first().copied().unwrap_or(0);
        let deg = self.degree_in(var);
        let mut coeffs = vec![ExactRational::zero(); deg as usize + 1];
        for (e, c) in &self.terms {
            coeffs[e[var] as usize] = c.clone();
        }
        Ok((var, coeffs))
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // graded order; ties by exponents with the first variable rotated to
        // least significance, descending
        let key = |e: &Vec<u32>| -> (u32, Vec<u32>) {
            let total = e.iter().sum();
            let mut rot: Vec<u32> = e[1..].to_vec();
            rot.push(e[0]);
            (total, rot)
        };
        let mut ordered: Vec<(&Vec<u32>, &ExactRational)> = self.terms.iter().collect();
        ordered.sort_by_key(|t| std::cmp::Reverse(key(t.0)));
        for (i, (e, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || e.iter().all(|&k| k == 0) {
                if mag.is_integer() {
                    factors.push(format!("{mag}"));
                } else {
                    factors.push(format!("({mag})"));
                }
            }
            // same rotated precedence as term order: W (index 0) last
            for idx in (1..e.len()).chain(std::iter::once(0)) {
                match e[idx] {
                    0 => {}
                    1 => factors.push(self.vars[idx].clone()),
                    k => factors.push(format!("{}^{}", self.vars[idx], k)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Ordered generator list; each generator is quadratic and monic up to a
/// rational unit in its tagged variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealGens {
    pub gens: Vec<MPoly>,
    /// Index (into the shared variable list) of the variable each generator
    /// is monic in.
    pub tags: Vec<usize>,
    pub vars: Vec<String>,
}

impl IdealGens {
    pub fn new(gens: Vec<MPoly>, tags: Vec<usize>) -> Result<Self> {
        if gens.is_empty() {
            return domain("empty generator list");
        }
        let vars = gens[0].vars.clone();
        if gens.iter().any(|g| g.vars != vars) {
            return domain("generators use different variable lists");
        }
        if tags.len() != gens.len() {
            return domain("one tag per generator required");
        }
        let mut sorted = tags.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != tags.len() {
            return domain("generator tags must be distinct");
        }
        for (g, &t) in gens.iter().zip(&tags) {
            let d = g.degree_in(t);
            if d == 0 {
                return domain(format!("generator {g} does not involve its tag {}", vars[t]));
            }
            match g.coeff_of(t, d).as_constant() {
                Some(c) if !c.is_zero() => {}
                _ => {
                    return domain(format!(
                        "generator {g} is not monic up to a unit in {}",
                        vars[t]
                    ))
                }
            }
        }
        Ok(IdealGens { gens, tags, vars })
    }

    /// Does `point` satisfy every generator exactly?
    pub fn vanishes_at(&self, point: &ProjPoint) -> bool {
        let vals = point.to_rationals();
        vals.len() == self.vars.len()
            && self.gens.iter().all(|g| g.eval(&vals).is_zero())
    }
}

/// Primitive integer homogeneous coordinates, first nonzero coordinate
/// positive; this normalization makes the representation unique.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        if coords.iter().all(|c| c.is_zero()) {
            return domain("projective point needs a nonzero coordinate");
        }
        let mut g = BigInt::zero();
        for c in &coords {
            g = g.gcd(c);
        }
        let first = coords.iter().find(|c| !c.is_zero()).unwrap();
        if first.is_negative() {
            g = -g;
        }
        let coords = coords.into_iter().map(|c| c / &g).collect();
        Ok(ProjPoint { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        ProjPoint::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn to_rationals(&self) -> Vec<ExactRational> {
        self.coords.iter().map(|c| ExactRational::from_bigint(c.clone())).collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        strs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let strs: Vec<String> = Vec::deserialize(deserializer)?;
        let mut coords = Vec::with_capacity(strs.len());
        for s in &strs {
            coords.push(s.parse::<BigInt>().map_err(D::Error::custom)?);
        }
        ProjPoint::new(coords).map_err(D::Error::custom)
    }
}

fn curve_vars(n: usize) -> Vec<String> {
    let mut vars = vec!["W".to_string()];
    for i in 1..=n {
        vars.push(format!("Z{i}"));
    }
    vars
}

/// Ideal of the level-N preimage curve of a: the quadrics
/// Z₁² + Z_i·W − Z_{i+1}² − a·W² for 1 ≤ i ≤ N−1, each tagged with Z_{i+1}.
pub fn preimage_ideal(n: usize, a: &ExactRational) -> Result<IdealGens> {
    if n < 2 {
        return domain("preimage curves start at level 2");
    }
    let vars = curve_vars(n);
    let m = vars.len();
    let mut gens = Vec::new();
    let mut tags = Vec::new();
    for i in 1..n {
        let mut g = MPoly::zero(vars.clone());
        let mut e = vec![0u32; m];
        e[1] = 2; // Z₁²
        g.insert_term(e, ExactRational::one());
        let mut e = vec![0u32; m];
        e[i] = 1;
        e[0] = 1; // Z_i·W
        g.insert_term(e, ExactRational::one());
        let mut e = vec![0u32; m];
        e[i + 1] = 2; // −Z_{i+1}²
        g.insert_term(e, -&ExactRational::one());
        let mut e = vec![0u32; m];
        e[0] = 2; // −a·W²
        g.insert_term(e, -a);
        gens.push(g);
        tags.push(i + 1);
    }
    IdealGens::new(gens, tags)
}

/// The 2^{N−1} points of the level-N curve with W = 0: [0, ε₁, …, ε_N] with
/// ε_i = ±1, normalized to ε₁ = +1.
pub fn boundary_points(n: usize) -> Result<Vec<ProjPoint>> {
    if n < 2 {
        return domain("preimage curves start at level 2");
    }
    let mut out = Vec::with_capacity(1 << (n - 1));
    for mask in 0..(1u32 << (n - 1)) {
        let mut coords = vec![0i64; n + 1];
        coords[1] = 1;
        for (bit, slot) in coords[2..=n].iter_mut().enumerate() {
            // bit i−2 of mask set ⇒ ε_i = −1; mask 0 gives the all-plus point
            *slot = if mask >> bit & 1 == 1 { -1 } else { 1 };
        }
        out.push(ProjPoint::from_ints(&coords)?);
    }
    Ok(out)
}

/// Outcome of the remainder-chain division of `g` by an ideal's generators.
#[derive(Debug, Clone)]
pub struct Membership {
    pub member: bool,
    pub remainder: MPoly,
    /// Quotients aligned with the generator order: g = Σ qᵢ·Fᵢ + r.
    pub quotients: Vec<MPoly>,
}

/// Single-pass division of `num` by `den` regarded as a polynomial in
/// `vars[var]`; the leading coefficient of `den` in that variable must be a
/// nonzero constant. Returns (quotient, remainder) with
/// deg_var(remainder) < deg_var(den).
fn div_rem_wrt(num: &MPoly, den: &MPoly, var: usize) -> Result<(MPoly, MPoly)> {
    let d = den.degree_in(var);
    if d == 0 {
        return domain(format!("divisor {den} does not involve {}", den.vars[var]));
    }
    let lead = den.coeff_of(var, d).as_constant().filter(|c| !c.is_zero());
    let Some(lead) = lead else {
        return domain(format!(
            "divisor {den} is not monic up to a unit in {}",
            den.vars[var]
        ));
    };
    let lead_inv = lead.recip().expect("nonzero constant");
    let mut q = MPoly::zero(num.vars.clone());
    let mut r = num.clone();
    loop {
        let rd = r.degree_in(var);
        if r.is_zero() || rd < d {
            return Ok((q, r));
        }
        let lc = r.coeff_of(var, rd);
        let mut shift = vec![0u32; num.vars.len()];
        shift[var] = rd - d;
        let q_term = lc
            .scale(&lead_inv)
            .mul(&MPoly::monomial(num.vars.clone(), shift, ExactRational::one()));
        r = r.sub(&q_term.mul(den));
        q = q.add(&q_term);
        debug_assert!(r.degree_in(var) < rd || r.is_zero());
    }
}

/// Remainder-chain membership test for ideals whose generators are monic (up
/// to a unit) in distinct tagged variables.
///
/// Generators are processed so that a generator is divided out only once its
/// tag variable no longer occurs in any unprocessed generator; for the
/// preimage ideals this means highest index first, and a single pass then
/// computes the true normal form (each division eliminates powers ≥ 2 of one
/// tag and only ever reintroduces lower-index variables in degree 1). The
/// identity g = Σ qᵢ·Fᵢ + r is asserted after the chain.
pub fn ideal_membership(g: &MPoly, gens: &IdealGens) -> Result<Membership> {
    if g.vars != gens.vars {
        return domain("polynomial and ideal use different variable lists");
    }
    let n = gens.gens.len();
    let mut processed = vec![false; n];
    let mut quotients = vec![MPoly::zero(g.vars.clone()); n];
    let mut r = g.clone();
    for _ in 0..n {
        let next = (0..n).find(|&i| {
            !processed[i]
                && (0..n).all(|j| {
                    j == i || processed[j] || gens.gens[j].degree_in(gens.tags[i]) == 0
                })
        });
        let Some(i) = next else {
            return domain("generator tags form a cycle; no safe division order exists");
        };
        let (q, rem) = div_rem_wrt(&r, &gens.gens[i], gens.tags[i])?;
        quotients[i] = q;
        r = rem;
        processed[i] = true;
    }
    let mut recombined = r.clone();
    for (q, f) in quotients.iter().zip(&gens.gens) {
        recombined = recombined.add(&q.mul(f));
    }
    assert_eq!(recombined, *g, "division identity g = Σ q·F + r failed");
    Ok(Membership { member: r.is_zero(), remainder: r, quotients })
}

/// Proportionality of two integer vectors (projective equality including
/// opposite signs).
fn proportional(a: &[BigInt], b: &[BigInt]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

fn triple_to_ecpoint(t: &[BigInt; 3]) -> Result<ECPoint> {
    let [u, v, s] = t;
    if s.is_zero() {
        if !u.is_zero() || v.is_zero() {
            return domain("projective triple is not on the curve closure");
        }
        return Ok(ECPoint::Infinity);
    }
    let pu = ExactRational::new(u.clone(), s.clone())?;
    let pv = ExactRational::new(v.clone(), s.clone())?;
    Ok(ECPoint::affine(pu, pv))
}

/// Isomorphism from the level-3 preimage curve of 0 to v² = u³ − u + 1.
///
/// Two charts cover the curve: [W,Z₁,Z₂,Z₃] ↦ [Z₂, Z₃, Z₁] and
/// [W,Z₁,Z₂,Z₃] ↦ [(W+Z₁)Z₃, Z₁Z₂+Z₁W+W², Z₂Z₃]; every applicable chart is
/// evaluated and the results are asserted projectively equal.
pub fn mu(p: &ProjPoint) -> Result<ECPoint> {
    let ideal = preimage_ideal(3, &ExactRational::zero())?;
    if p.len() != 4 || !ideal.vanishes_at(p) {
        return domain(format!("{p} is not on the level-3 preimage curve of 0"));
    }
    let (w, z1, z2, z3) = (&p.coords[0], &p.coords[1], &p.coords[2], &p.coords[3]);
    let chart1 = [z2.clone(), z3.clone(), z1.clone()];
    let chart2 = [
        (w + z1) * z3,
        z1 * z2 + z1 * w + w * w,
        z2 * z3,
    ];
    let mut charts: Vec<[BigInt; 3]> = Vec::new();
    for c in [chart1, chart2] {
        if c.iter().any(|x| !x.is_zero()) {
            charts.push(c);
        }
    }
    let Some(first) = charts.first() else {
        return domain(format!("{p} lies outside both chart domains"));
    };
    for other in &charts[1..] {
        assert!(
            proportional(first, other),
            "charts disagree at {p}: {first:?} vs {other:?}"
        );
    }
    let pt = triple_to_ecpoint(first)?;
    debug_assert!(curve_e().contains(&pt));
    Ok(pt)
}

/// Inverse isomorphism: a point of v² = u³ − u + 1 as a level-3 curve point.
///
/// Charts [U,V,S] ↦ [U²−S², S², US, VS] and [U,V,S] ↦ [V²−S², US, U², UV];
/// all applicable charts are evaluated and asserted projectively equal.
pub fn mu_inv(p: &ECPoint) -> Result<ProjPoint> {
    let e = curve_e();
    if !e.contains(p) {
        return domain(format!("mu_inv: {p} is not on {e}"));
    }
    let (u, v, s) = match p {
        ECPoint::Infinity => (BigInt::zero(), BigInt::one(), BigInt::zero()),
        ECPoint::Affine { u, v } => {
            let d = u.denom().lcm(v.denom());
            (
                u.numer() * (&d / u.denom()),
                v.numer() * (&d / v.denom()),
                d,
            )
        }
    };
    let chart1 = [&u * &u - &s * &s, &s * &s, &u * &s, &v * &s];
    let chart2 = [&v * &v - &s * &s, &u * &s, &u * &u, &u * &v];
    let mut charts: Vec<[BigInt; 4]> = Vec::new();
    for c in [chart1, chart2] {
        if c.iter().any(|x| !x.is_zero()) {
            charts.push(c);
        }
    }
    let first = charts.first().expect("curve points hit at least one chart");
    for other in &charts[1..] {
        assert!(
            proportional(first, other),
            "charts disagree at {p}: {first:?} vs {other:?}"
        );
    }
    let out = ProjPoint::new(first.to_vec())?;
    debug_assert!(preimage_ideal(3, &ExactRational::zero())?.vanishes_at(&out));
    Ok(out)
}

/// Projection of the level-4 curve to v² = u³ − u + 1: drop Z₄, apply `mu`.
pub fn pi(p: &ProjPoint) -> Result<ECPoint> {
    let ideal = preimage_ideal(4, &ExactRational::zero())?;
    if p.len() != 5 || !ideal.vanishes_at(p) {
        return domain(format!("{p} is not on the level-4 preimage curve of 0"));
    }
    let pr = ProjPoint::new(p.coords[..4].to_vec())?;
    mu(&pr)
}

/// Rational points of the level-4 curve above a level-3 point: solutions of
/// Z₄² = Z₁² + Z₃·W. Returns 0, 1 (square root zero), or 2 points.
pub fn lift_to_x4(p: &ProjPoint) -> Result<Vec<ProjPoint>> {
    let ideal = preimage_ideal(3, &ExactRational::zero())?;
    if p.len() != 4 || !ideal.vanishes_at(p) {
        return domain(format!("{p} is not on the level-3 preimage curve of 0"));
    }
    let (w, z1, z3) = (&p.coords[0], &p.coords[1], &p.coords[3]);
    let t = z1 * z1 + z3 * w;
    if t.is_zero() {
        let mut coords = p.coords.clone();
        coords.push(BigInt::zero());
        return Ok(vec![ProjPoint::new(coords)?]);
    }
    if t.is_negative() {
        return Ok(Vec::new());
    }
    match nth_root_int(t.magnitude(), 2) {
        None => Ok(Vec::new()),
        Some(r) => {
            let r = BigInt::from(r);
            let mut out = Vec::new();
            for z4 in [-&r, r.clone()] {
                let mut coords = p.coords.clone();
                coords.push(z4);
                out.push(ProjPoint::new(coords)?);
            }
            out.sort();
            Ok(out)
        }
    }
}

/// The ten rational points of the level-4 preimage curve of 0, paired with
/// the multiple of Q₀ = (1, −1) they project to.
pub fn rational_points_x4() -> Vec<(ProjPoint, i64)> {
    let rows: [(&[i64; 5], i64); 10] = [
        (&[0, 1, 1, 1, 1], -1),
        (&[0, -1, 1, 1, 1], 2),
        (&[0, 1, -1, 1, 1], -2),
        (&[0, -1, -1, 1, 1], 1),
        (&[0, 1, 1, -1, 1], 1),
        (&[0, -1, 1, -1, 1], -2),
        (&[0, 1, -1, -1, 1], 2),
        (&[0, -1, -1, -1, 1], -1),
        (&[1, 0, 0, 0, 0], 0),
        (&[1, -1, 0, -1, 0], 3),
    ];
    rows.iter()
        .map(|(coords, m)| (ProjPoint::from_ints(*coords).unwrap(), *m))
        .collect()
}

/// Critical-value polynomial as a univariate in c: the fourth iterate of
/// x ↦ x² + c at 0 splits as (c² + c)·F(c) with
/// F(c) = c⁶ + 3c⁵ + 3c⁴ + 3c³ + 2c² + 1; F is returned after the identity
/// is verified exactly.
pub fn ramification_poly() -> MPoly {
    let vars = vec!["c".to_string()];
    let c = MPoly::var(vars.clone(), 0);
    let mut orbit = MPoly::zero(vars.clone());
    for _ in 0..4 {
        orbit = orbit.mul(&orbit).add(&c);
    }
    let mut f = MPoly::zero(vars.clone());
    for (deg, coeff) in [(6, 1), (5, 3), (4, 3), (3, 3), (2, 2), (0, 1)] {
        f = f.add(&MPoly::monomial(
            vars.clone(),
            vec![deg],
            ExactRational::from_int(coeff),
        ));
    }
    let quad = c.mul(&c).add(&c); // c² + c
    assert_eq!(orbit, quad.mul(&f), "orbit polynomial must split as (c²+c)·F");
    f
}

/// The fourth iterate of x ↦ x² + c at x = 0, as a univariate in c.
pub(crate) fn orbit_poly_level4() -> MPoly {
    let vars = vec!["c".to_string()];
    let c = MPoly::var(vars.clone(), 0);
    let mut orbit = MPoly::zero(vars);
    for _ in 0..4 {
        orbit = orbit.mul(&orbit).add(&c);
    }
    orbit
}

/// Discriminant of a nonconstant univariate polynomial, via the Sylvester
/// resultant with its derivative: disc = (−1)^{n(n−1)/2}·Res(F, F′)/lc(F).
pub fn poly_disc(f: &MPoly) -> Result<ExactRational> {
    let (var, coeffs) = f.univariate_coeffs()?;
    let n = coeffs.len() - 1;
    if n == 0 {
        return domain("discriminant of a constant polynomial");
    }
    if n == 1 {
        return Ok(ExactRational::one());
    }
    let deriv = f.partial(var);
    let (_, dcoeffs) = deriv.univariate_coeffs()?;
    let res = resultant(&coeffs, &dcoeffs);
    let lc = coeffs.last().unwrap();
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    Ok(&(&res / lc) * &ExactRational::from_int(sign))
}

/// Sylvester resultant of two univariate polynomials given low-first.
fn resultant(f: &[ExactRational], g: &[ExactRational]) -> ExactRational {
    let m = f.len() - 1;
    let k = g.len() - 1;
    let size = m + k;
    // rows 0..k hold shifted copies of f (high-first), rows k..k+m hold g
    let mut mat = vec![vec![ExactRational::zero(); size]; size];
    for row in 0..k {
        for (j, c) in f.iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            mat[k + row][row + j] = c.clone();
        }
    }
    // Gaussian elimination with exact rationals
    let mut det = ExactRational::one();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !mat[r][col].is_zero());
        let Some(pivot) = pivot else {
            return ExactRational::zero();
        };
        if pivot != col {
            mat.swap(pivot, col);
            det = -&det;
        }
        let pv = mat[col][col].clone();
        det = &det * &pv;
        let pv_inv = pv.recip().expect("nonzero pivot");
        for r in col + 1..size {
            if mat[r][col].is_zero() {
                continue;
            }
            let factor = &mat[r][col] * &pv_inv;
            // pivot row read while row r is written, so both stay indexed
            #[allow(clippy::needless_range_loop)]
            for c2 in col..size {
                let delta = &factor * &mat[col][c2];
                mat[r][c2] = &mat[r][c2] - &delta;
            }
        }
    }
    det
}

/// Full factorization of a univariate rational polynomial reduced mod p.
/// Returns (leading unit, sorted (factor, multiplicity) list); coefficient
/// vectors are lowest-first canonical residues.
pub fn factor_mod_p(f: &MPoly, p: u64) -> Result<(u64, Vec<(PolyP, u32)>)> {
    let (_, coeffs) = f.univariate_coeffs()?;
    let reduced = reduce_coeffs_mod_p(&coeffs, p)?;
    if reduced.last().map(|&c| c == 0).unwrap_or(true) {
        return domain(format!("leading coefficient of {f} vanishes mod {p}"));
    }
    modp::factor_poly_mod_p(&reduced, p)
}

fn reduce_coeffs_mod_p(coeffs: &[ExactRational], p: u64) -> Result<PolyP> {
    let pb = BigInt::from(p);
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let den_red = c.denom().mod_floor(&pb);
        if den_red.is_zero() {
            return domain(format!("denominator of {c} vanishes mod {p}"));
        }
        let den_u = den_red.to_string().parse::<u64>().expect("reduced residue fits");
        let den_inv = modp::invmod(den_u, p);
        let num_red = c.numer().mod_floor(&pb);
        let num_u = num_red.to_string().parse::<u64>().expect("reduced residue fits");
        out.push((num_u as u128 * den_inv as u128 % p as u128) as u64);
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    Ok(out)
}

/// One double root of the level-4 orbit polynomial mod p, with the local
/// second-order data of g(x, c) = fourth iterate of x ↦ x² + c at x = 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleRootFinding {
    /// Root as the minimal-absolute-value residue.
    pub c0: i64,
    /// Hessian of g at (x, c) = (0, c0), canonical residues.
    pub hessian: [[u64; 2]; 2],
    pub hessian_det: u64,
    /// Determinant nonzero: the double point is ordinary.
    pub ordinary: bool,
    /// Coordinates [W, Z₁, Z₂, Z₃, Z₄] of the corresponding chain point mod
    /// p, minimal-absolute-value residues.
    pub chain_point: [i64; 5],
}

/// Mod-p singularity report for the level-4 curve over the c-line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularReport {
    pub p: u64,
    /// Whether Spec of the working base ring Z[1/2, 1/23] contains p.
    pub prime_in_base: bool,
    /// A genuine singular fiber point exists: requires a double root and the
    /// prime to lie in the base.
    pub singular_on_curve: bool,
    pub findings: Vec<DoubleRootFinding>,
    pub verdict: String,
}

fn min_abs_residue(r: u64, p: u64) -> i64 {
    if r > p / 2 {
        r as i64 - p as i64
    } else {
        r as i64
    }
}

/// Locate multiple roots of the level-4 orbit polynomial mod p and classify
/// the corresponding curve points. Supported primes: 23 and 2551 (the two
/// factors of the ramification discriminant).
pub fn singular_check_mod_p(p: u64) -> Result<SingularReport> {
    if p != 23 && p != 2551 {
        return domain(format!("singularity check supports p in {{23, 2551}}, got {p}"));
    }
    let orbit = orbit_poly_level4();
    let (_, coeffs) = orbit.univariate_coeffs()?;
    let g = reduce_coeffs_mod_p(&coeffs, p)?;
    let dg = modp::deriv(&g, p);
    let gcd = modp::gcd(&g, &dg, p);
    let (_, gcd_factors) = modp::factor_poly_mod_p(&gcd, p)?;
    let mut double_roots = Vec::new();
    for (fac, _) in &gcd_factors {
        if fac.len() == 2 {
            // monic linear factor c + a: root is −a
            double_roots.push((p - fac[0] % p) % p);
        }
    }
    double_roots.sort_unstable();

    // bivariate g(x, c): fourth iterate of x ↦ x² + c
    let vars = vec!["x".to_string(), "c".to_string()];
    let x = MPoly::var(vars.clone(), 0);
    let c = MPoly::var(vars.clone(), 1);
    let mut h = x.clone();
    for _ in 0..4 {
        h = h.mul(&h).add(&c);
    }
    let h_xx = h.partial(0).partial(0);
    let h_xc = h.partial(0).partial(1);
    let h_cc = h.partial(1).partial(1);

    let canon = |v: &ExactRational| -> u64 {
        let b = v.to_bigint().expect("integer Hessian entry");
        let r = b.mod_floor(&BigInt::from(p));
        r.to_string().parse::<u64>().expect("residue fits")
    };
    let mut findings = Vec::new();
    for &r in &double_roots {
        let c0 = min_abs_residue(r, p);
        let at = [ExactRational::zero(), ExactRational::from_int(c0)];
        let m = [
            [canon(&h_xx.eval(&at)), canon(&h_xc.eval(&at))],
            [canon(&h_xc.eval(&at)), canon(&h_cc.eval(&at))],
        ];
        let det = ((m[0][0] as u128 * m[1][1] as u128 + p as u128 * p as u128
            - m[0][1] as u128 * m[1][0] as u128)
            % p as u128) as u64;
        // chain coordinates: z₃ = c₀, z₂ = c₀² + c₀, z₁ = z₂² + c₀, z₄ = 0
        let pi128 = p as i128;
        let z3 = c0 as i128;
        let z2 = (z3 * z3 + z3).rem_euclid(pi128);
        let z1 = (z2 * z2 + z3).rem_euclid(pi128);
        let mini = |v: i128| min_abs_residue(v.rem_euclid(pi128) as u64, p);
        findings.push(DoubleRootFinding {
            c0,
            hessian: m,
            hessian_det: det,
            ordinary: det != 0,
            chain_point: [1, mini(z1), mini(z2), mini(z3), 0],
        });
    }
    let prime_in_base = p != 2 && p != 23;
    let singular_on_curve = prime_in_base && !findings.is_empty();
    let verdict = if !prime_in_base {
        format!("regular over the base: {p} is inverted in Z[1/2, 1/23], so the fiber at {p} is absent")
    } else if findings.is_empty() {
        format!("smooth fiber at {p}")
    } else if findings.iter().all(|f| f.ordinary) {
        format!(
            "ordinary double point(s) at {}",
            findings
                .iter()
                .map(|f| format!(
                    "[{}]",
                    f.chain_point.map(|v| v.to_string()).join(", ")
                ))
                .collect::<Vec<_>>()
                .join("; ")
        )
    } else {
        format!("degenerate singular point at {p}")
    };
    Ok(SingularReport { p, prime_in_base, singular_on_curve, findings, verdict })
}

/// Genus of a degree-2 cover with only simple ramification:
/// 2g − 2 = 2·(2·g_base − 2) + ram_count.
pub fn riemann_hurwitz(genus_base: i64, degree: i64, simple_ram_count: i64) -> Result<i64> {
    if degree != 2 {
        return domain("only degree-2 covers are supported");
    }
    if simple_ram_count < 0 || simple_ram_count % 2 != 0 {
        return domain("simple ramification count must be even and nonnegative (the genus must be an integer)");
    }
    let g = 2 * genus_base - 1 + simple_ram_count / 2;
    if g < 0 {
        return domain("formula inputs give a negative genus");
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{ec_mul, q0};
    use proptest::prelude::*;

    fn rat(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn x4_ideal() -> IdealGens {
        preimage_ideal(4, &ExactRational::zero()).unwrap()
    }

    #[test]
    fn ideal_shapes_and_printing() {
        let j = x4_ideal();
        assert_eq!(j.gens.len(), 3);
        assert_eq!(j.gens[0].to_string(), "Z1^2 + Z1*W - Z2^2");
        assert_eq!(j.gens[1].to_string(), "Z1^2 + Z2*W - Z3^2");
        assert_eq!(j.gens[2].to_string(), "Z1^2 + Z3*W - Z4^2");
        let j2 = preimage_ideal(2, &rat("-1/4")).unwrap();
        assert_eq!(j2.gens.len(), 1);
        assert_eq!(j2.gens[0].to_string(), "Z1^2 + Z1*W - Z2^2 + (1/4)*W^2");
        assert!(preimage_ideal(1, &ExactRational::zero()).is_err());
    }

    #[test]
    fn level3_ideal_vanishes_at_projected_point() {
        let j = preimage_ideal(3, &ExactRational::zero()).unwrap();
        let p = ProjPoint::from_ints(&[1, -1, 0, -1]).unwrap();
        assert!(j.vanishes_at(&p));
    }

    #[test]
    fn boundary_point_counts_and_vanishing() {
        assert_eq!(
            boundary_points(2).unwrap(),
            vec![
                ProjPoint::from_ints(&[0, 1, 1]).unwrap(),
                ProjPoint::from_ints(&[0, 1, -1]).unwrap(),
            ]
        );
        for n in 2..=6 {
            let pts = boundary_points(n).unwrap();
            assert_eq!(pts.len(), 1 << (n - 1));
            let j = preimage_ideal(n, &ExactRational::zero()).unwrap();
            for p in &pts {
                assert!(j.vanishes_at(p), "boundary point {p} off level-{n} curve");
            }
            let dedup: std::collections::BTreeSet<_> = pts.iter().cloned().collect();
            assert_eq!(dedup.len(), pts.len());
        }
    }

    #[test]
    fn table_points_satisfy_ideal() {
        let j = x4_ideal();
        for (p, _) in rational_points_x4() {
            assert!(j.vanishes_at(&p), "table point {p} off curve");
        }
    }

    #[test]
    fn membership_examples() {
        let j = x4_ideal();
        let g1 = j.gens[0].clone();
        let m = ideal_membership(&g1, &j).unwrap();
        assert!(m.member);
        assert!(m.remainder.is_zero());

        let wz1 = MPoly::monomial(
            j.vars.clone(),
            vec![1, 1, 0, 0, 0],
            ExactRational::one(),
        );
        let m = ideal_membership(&wz1, &j).unwrap();
        assert!(!m.member);
        assert_eq!(m.remainder, wz1);

        // explicit combination Z₃·F₁ + Z₁·F₂
        let z1 = MPoly::var(j.vars.clone(), 1);
        let z3 = MPoly::var(j.vars.clone(), 3);
        let combo = z3.mul(&j.gens[0]).add(&z1.mul(&j.gens[1]));
        let m = ideal_membership(&combo, &j).unwrap();
        assert!(m.member, "remainder {}", m.remainder);
    }

    #[test]
    fn membership_requires_descending_division() {
        // Z₂·F₂ is a member, but reducing by F₁ (tag Z₂) before F₂ (tag Z₃)
        // leaves W·F₁ behind; the tag-aware order handles it.
        let j = preimage_ideal(3, &ExactRational::zero()).unwrap();
        let z2 = MPoly::var(j.vars.clone(), 2);
        let g = z2.mul(&j.gens[1]);
        let m = ideal_membership(&g, &j).unwrap();
        assert!(m.member, "remainder {}", m.remainder);
    }

    #[test]
    fn membership_rejects_nonmonic_generators() {
        let vars = curve_vars(2);
        // Z₁·Z₂² has leading Z₂-coefficient Z₁, not a constant
        let bad = MPoly::monomial(vars.clone(), vec![0, 1, 2], ExactRational::one());
        assert!(IdealGens::new(vec![bad], vec![2]).is_err());
    }

    #[test]
    fn chart_map_examples() {
        let p10 = ProjPoint::from_ints(&[1, -1, 0, -1]).unwrap();
        assert_eq!(mu(&p10).unwrap(), ECPoint::affine_ints(0, 1));
        let p9 = ProjPoint::from_ints(&[1, 0, 0, 0]).unwrap();
        assert_eq!(mu(&p9).unwrap(), ECPoint::Infinity);
        let b = ProjPoint::from_ints(&[0, 1, 1, 1]).unwrap();
        assert_eq!(mu(&b).unwrap(), ECPoint::affine_ints(1, 1));
        // off-curve input rejected
        assert!(mu(&ProjPoint::from_ints(&[1, 1, 1, 1]).unwrap()).is_err());
    }

    #[test]
    fn chart_inverse_examples() {
        assert_eq!(
            mu_inv(&ECPoint::affine_ints(1, 1)).unwrap(),
            ProjPoint::from_ints(&[0, 1, 1, 1]).unwrap()
        );
        assert_eq!(
            mu_inv(&ECPoint::Infinity).unwrap(),
            ProjPoint::from_ints(&[1, 0, 0, 0]).unwrap()
        );
        assert!(mu_inv(&ECPoint::affine_ints(7, 7)).is_err());
    }

    #[test]
    fn charts_roundtrip_over_many_points() {
        let e = curve_e();
        let mut roundtrips = 0;
        for m in -16i64..=16 {
            let p = ec_mul(&e, m, &q0());
            let lifted = mu_inv(&p).unwrap();
            assert_eq!(mu(&lifted).unwrap(), p, "multiple {m}");
            roundtrips += 2;
        }
        for p in boundary_points(3).unwrap() {
            assert_eq!(mu_inv(&mu(&p).unwrap()).unwrap(), p);
            roundtrips += 2;
        }
        for coords in [[1i64, 0, 0, 0], [1, -1, 0, -1]] {
            let p = ProjPoint::from_ints(&coords).unwrap();
            assert_eq!(mu_inv(&mu(&p).unwrap()).unwrap(), p);
            roundtrips += 2;
        }
        assert!(roundtrips >= 50);
    }

    #[test]
    fn projection_matches_multiple_table() {
        let e = curve_e();
        for (p, m) in rational_points_x4() {
            assert_eq!(pi(&p).unwrap(), ec_mul(&e, m, &q0()), "point {p}");
        }
    }

    #[test]
    fn lifting_examples() {
        let p10_base = ProjPoint::from_ints(&[1, -1, 0, -1]).unwrap();
        assert_eq!(
            lift_to_x4(&p10_base).unwrap(),
            vec![ProjPoint::from_ints(&[1, -1, 0, -1, 0]).unwrap()]
        );
        let five = mu_inv(&ec_mul(&curve_e(), 5, &q0())).unwrap();
        assert!(lift_to_x4(&five).unwrap().is_empty());
        let b = ProjPoint::from_ints(&[0, 1, 1, 1]).unwrap();
        let lifts = lift_to_x4(&b).unwrap();
        assert_eq!(
            lifts,
            vec![
                ProjPoint::from_ints(&[0, 1, 1, 1, -1]).unwrap(),
                ProjPoint::from_ints(&[0, 1, 1, 1, 1]).unwrap(),
            ]
        );
    }

    #[test]
    fn fiber_sizes_over_small_multiples() {
        let e = curve_e();
        let expected: Vec<(i64, usize)> = vec![
            (-6, 0), (-4, 0), (-3, 0), (-2, 2), (-1, 2), (0, 1), (1, 2),
            (2, 2), (3, 1), (4, 0), (5, 0), (6, 0), (7, 0), (9, 0),
        ];
        let mut union = Vec::new();
        for (m, size) in expected {
            let base = mu_inv(&ec_mul(&e, m, &q0())).unwrap();
            let lifts = lift_to_x4(&base).unwrap();
            assert_eq!(lifts.len(), size, "multiple {m}");
            union.extend(lifts);
        }
        union.sort();
        let mut table: Vec<ProjPoint> =
            rational_points_x4().into_iter().map(|(p, _)| p).collect();
        table.sort();
        assert_eq!(union, table);
    }

    #[test]
    fn ramification_polynomial() {
        let f = ramification_poly();
        let (_, coeffs) = f.univariate_coeffs().unwrap();
        let high_to_low: Vec<String> =
            coeffs.iter().rev().map(|c| c.to_string()).collect();
        assert_eq!(high_to_low, ["1", "3", "3", "3", "2", "0", "1"]);
        assert_eq!(f.eval(&[rat("-1")]), rat("1"));
        assert_eq!(f.eval(&[rat("0")]), rat("1"));
    }

    #[test]
    fn discriminants() {
        assert_eq!(poly_disc(&ramification_poly()).unwrap(), rat("58673"));
        let tvars = vec!["t".to_string()];
        let t = MPoly::var(tvars.clone(), 0);
        let one = MPoly::constant(tvars.clone(), ExactRational::one());
        let t2m1 = t.mul(&t).sub(&one);
        assert_eq!(poly_disc(&t2m1).unwrap(), rat("4"));
        let t3 = t.pow(3).sub(&t).add(&one);
        assert_eq!(poly_disc(&t3).unwrap(), rat("-23"));
        assert!(poly_disc(&one).is_err());
    }

    #[test]
    fn factorizations_mod_p() {
        let f = ramification_poly();
        let (unit, fac) = factor_mod_p(&f, 23).unwrap();
        assert_eq!(unit, 1);
        assert_eq!(
            fac,
            vec![
                (vec![4, 1], 2),
                (vec![18, 1], 1),
                (vec![2, 4, 0, 1], 1),
            ]
        );
        let (_, fac) = factor_mod_p(&f, 2551).unwrap();
        assert_eq!(
            fac,
            vec![
                (vec![477, 1], 2),
                (vec![1869, 297, 1162, 1600, 1], 1),
            ]
        );
        let tvars = vec!["t".to_string()];
        let t = MPoly::var(tvars.clone(), 0);
        let t2m1 = t.mul(&t).sub(&MPoly::constant(tvars, ExactRational::one()));
        let (_, fac) = factor_mod_p(&t2m1, 23).unwrap();
        assert_eq!(fac, vec![(vec![1, 1], 1), (vec![22, 1], 1)]);
    }

    #[test]
    fn singular_fiber_reports() {
        let r23 = singular_check_mod_p(23).unwrap();
        assert!(!r23.prime_in_base);
        assert!(!r23.singular_on_curve);
        assert_eq!(r23.findings.len(), 1);
        let f = &r23.findings[0];
        assert_eq!(f.c0, -4);
        assert_eq!(f.hessian, [[5, 0], [0, 12]]);
        assert_eq!(f.hessian_det, 14);
        assert!(f.ordinary);
        assert_eq!(f.chain_point, [1, 2, -11, -4, 0]);

        let r = singular_check_mod_p(2551).unwrap();
        assert!(r.prime_in_base);
        assert!(r.singular_on_curve);
        assert_eq!(r.findings.len(), 1);
        let f = &r.findings[0];
        assert_eq!(f.c0, -477);
        assert_eq!(f.hessian, [[99, 0], [0, 217]]);
        assert_eq!(f.hessian_det, 1075);
        assert!(f.ordinary);
        assert_eq!(f.chain_point, [1, -308, 13, -477, 0]);

        assert!(singular_check_mod_p(7).is_err());
    }

    #[test]
    fn genus_arithmetic() {
        assert_eq!(riemann_hurwitz(1, 2, 8).unwrap(), 5);
        assert_eq!(riemann_hurwitz(1, 2, 6).unwrap(), 4);
        assert_eq!(riemann_hurwitz(0, 2, 2).unwrap(), 0);
        assert!(riemann_hurwitz(1, 2, 7).is_err());
        assert!(riemann_hurwitz(1, 3, 8).is_err());
    }

    #[test]
    fn projective_normalization() {
        let p = ProjPoint::from_ints(&[0, -2, 2, 2, 2]).unwrap();
        assert_eq!(p, ProjPoint::from_ints(&[0, 1, -1, -1, -1]).unwrap());
        assert_eq!(p.to_string(), "[0, 1, -1, -1, -1]");
        assert!(ProjPoint::from_ints(&[0, 0, 0]).is_err());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["0","1","-1","-1","-1"]"#);
        assert_eq!(serde_json::from_str::<ProjPoint>(&json).unwrap(), p);
    }

    prop_compose! {
        fn small_poly(vars: Vec<String>)(
            terms in proptest::collection::vec(
                (
                    proptest::collection::vec(0u32..2, 5),
                    -4i64..5,
                ),
                0..4,
            )
        ) -> MPoly {
            let mut p = MPoly::zero(vars.clone());
            for (exps, c) in terms {
                p.insert_term(exps, ExactRational::from_int(c));
            }
            p
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn prop_combinations_are_members(
            q1 in small_poly(curve_vars(4)),
            q2 in small_poly(curve_vars(4)),
            q3 in small_poly(curve_vars(4)),
        ) {
            let j = x4_ideal();
            let combo = q1.mul(&j.gens[0])
                .add(&q2.mul(&j.gens[1]))
                .add(&q3.mul(&j.gens[2]));
            let m = ideal_membership(&combo, &j).unwrap();
            prop_assert!(m.member, "remainder {}", m.remainder);
        }

        #[test]
        fn prop_reduced_residuals_survive(
            q1 in small_poly(curve_vars(4)),
            w_exp in 0u32..3,
            zmask in 0u32..16,
        ) {
            // a monomial with every Z-exponent ≤ 1 is already in normal form
            let j = x4_ideal();
            let mut exps = vec![w_exp, 0, 0, 0, 0];
            for i in 0..4 {
                exps[i + 1] = (zmask >> i) & 1;
            }
            let residual = MPoly::monomial(curve_vars(4), exps, ExactRational::one());
            let g = q1.mul(&j.gens[0]).add(&residual);
            let m = ideal_membership(&g, &j).unwrap();
            prop_assert!(!m.member);
            prop_assert_eq!(m.remainder, residual);
        }
    }
}
