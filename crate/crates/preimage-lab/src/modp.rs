//! Dense univariate polynomial arithmetic and factorization over prime fields.
//!
//! Coefficients are stored low degree first, reduced to `[0, p)`, with no
//! trailing zero; the zero polynomial is the empty vector. Primes up to
//! 2^32 are supported (products are taken in u128).

use crate::error::{domain, Result};

pub type PolyP = Vec<u64>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, p: u64) -> u64 {
    // p prime, a ≢ 0
    powmod(a, p - 2, p)
}

pub fn trim(mut f: PolyP) -> PolyP {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn degree(f: &[u64]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn add(f: &[u64], g: &[u64], p: u64) -> PolyP {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *slot = (a + b) % p;
    }
    trim(out)
}

pub fn sub(f: &[u64], g: &[u64], p: u64) -> PolyP {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *slot = (a + p - b) % p;
    }
    trim(out)
}

pub fn mul(f: &[u64], g: &[u64], p: u64) -> PolyP {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(a, b, p)) % p;
        }
    }
    trim(out)
}

pub fn scale(f: &[u64], c: u64, p: u64) -> PolyP {
    trim(f.iter().map(|&a| mulmod(a, c, p)).collect())
}

pub fn monic(f: &[u64], p: u64) -> PolyP {
    match f.last() {
        None => vec![],
        Some(&lc) => scale(f, invmod(lc, p), p),
    }
}

/// Quotient and remainder of `f` by nonzero `g`.
pub fn divmod(f: &[u64], g: &[u64], p: u64) -> (PolyP, PolyP) {
    assert!(!g.is_empty(), "division by zero polynomial");
    let mut rem: PolyP = f.to_vec();
    let dg = g.len() - 1;
    if f.len() <= dg {
        return (vec![], trim(rem));
    }
    let mut quot = vec![0u64; f.len() - dg];
    let lg_inv = invmod(*g.last().unwrap(), p);
    for k in (dg..f.len()).rev() {
        let c = mulmod(rem[k], lg_inv, p);
        if c == 0 {
            continue;
        }
        quot[k - dg] = c;
        for (j, &gj) in g.iter().enumerate() {
            let idx = k - dg + j;
            rem[idx] = (rem[idx] + p - mulmod(c, gj, p)) % p;
        }
    }
    (trim(quot), trim(rem))
}

pub fn rem(f: &[u64], g: &[u64], p: u64) -> PolyP {
    divmod(f, g, p).1
}

pub fn gcd(f: &[u64], g: &[u64], p: u64) -> PolyP {
    let mut a: PolyP = f.to_vec();
    let mut b: PolyP = g.to_vec();
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        monic(&a, p)
    }
}

pub fn deriv(f: &[u64], p: u64) -> PolyP {
    if f.len() <= 1 {
        return vec![];
    }
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mulmod(a, (i as u64) % p, p))
            .collect(),
    )
}

pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in f.iter().rev() {
        acc = (mulmod(acc, x, p) + c) % p;
    }
    acc
}

/// `base^e mod (f, p)` with a u128 exponent (enough for p^3 at p < 2^32).
fn pow_poly_mod(base: &[u64], mut e: u128, modulus: &[u64], p: u64) -> PolyP {
    let mut acc: PolyP = vec![1];
    let mut b = rem(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), modulus, p);
        }
        b = rem(&mul(&b, &b, p), modulus, p);
        e >>= 1;
    }
    acc
}

/// Splits a squarefree product of irreducibles all of degree `d`.
///
/// For odd p this is the classical equal-degree splitting driven by the
/// deterministic sweep a = x, x+1, x+2, ...: gcd(a^((p^d-1)/2) - 1, f) is a
/// proper factor for some small shift. For p = 2 the degrees in play are
/// tiny, so a direct scan over monic divisor candidates is used instead.
fn equal_degree_split(f: &[u64], d: usize, p: u64, out: &mut Vec<PolyP>) {
    let df = degree(f).expect("nonzero");
    if df == d {
        out.push(monic(f, p));
        return;
    }
    if p == 2 {
        // enumerate monic polynomials of degree d: 2^d candidates
        for mask in 0..(1u64 << d) {
            let mut cand: PolyP = (0..d as u32).map(|i| (mask >> i) & 1).collect();
            cand.push(1);
            let cand = trim(cand);
            if degree(&cand) == Some(d) && rem(f, &cand, p).is_empty() {
                let (q, _) = divmod(f, &cand, p);
                out.push(cand);
                equal_degree_split(&q, d, p, out);
                return;
            }
        }
        unreachable!("equal-degree factor must exist");
    }
    let exponent = ((p as u128).pow(d as u32) - 1) / 2;
    for shift in 0..p {
        let base: PolyP = trim(vec![shift, 1]);
        let w = pow_poly_mod(&base, exponent, f, p);
        let w1 = sub(&w, &[1], p);
        let g = gcd(&w1, f, p);
        if let Some(dg) = degree(&g) {
            if dg > 0 && dg < df {
                let (q, r) = divmod(f, &g, p);
                debug_assert!(r.is_empty());
                equal_degree_split(&g, d, p, out);
                equal_degree_split(&q, d, p, out);
                return;
            }
        }
    }
    unreachable!("splitting shift must exist for odd p");
}

/// Distinct-degree then equal-degree factorization of a squarefree monic `f`.
fn factor_squarefree(f: &[u64], p: u64) -> Vec<PolyP> {
    let mut out = Vec::new();
    let mut rest: PolyP = f.to_vec();
    let mut h: PolyP = vec![0, 1]; // x^(p^d) mod rest, maintained incrementally
    let mut d = 0usize;
    while let Some(dr) = degree(&rest) {
        if dr == 0 {
            break;
        }
        d += 1;
        if 2 * d > dr {
            out.push(monic(&rest, p));
            break;
        }
        h = pow_poly_mod(&h, p as u128, &rest, p);
        let hx = sub(&h, &[0, 1], p);
        let g = gcd(&hx, &rest, p);
        if degree(&g).unwrap_or(0) > 0 {
            equal_degree_split(&g, d, p, &mut out);
            let (q, r) = divmod(&rest, &g, p);
            debug_assert!(r.is_empty());
            rest = q;
            h = rem(&h, &rest, p);
        }
    }
    out
}

/// Full factorization of a nonzero polynomial over F_p, p prime.
///
/// Returns the leading coefficient and monic irreducible factors with
/// multiplicities, sorted by (degree, coefficient vector).
pub fn factor_poly_mod_p(f: &[u64], p: u64) -> Result<(u64, Vec<(PolyP, u32)>)> {
    if p < 2 {
        return domain("modulus must be a prime >= 2");
    }
    let f = trim(f.to_vec());
    if f.is_empty() {
        return domain("factoring the zero polynomial");
    }
    let lead = *f.last().unwrap();
    let mut work = monic(&f, p);
    let mut factors: Vec<(PolyP, u32)> = Vec::new();

    // Peel off irreducibles of the squarefree part, then recover
    // multiplicities by repeated division. Inseparable parts (derivative
    // zero) are p-th powers g(x^p) = g(x)^p; recurse on the p-th root.
    fn collect(work: &PolyP, p: u64, irreducibles: &mut Vec<PolyP>) {
        if degree(work).unwrap_or(0) == 0 {
            return;
        }
        let der = deriv(work, p);
        if der.is_empty() {
            // every exponent divisible by p: take the p-th root coefficientwise
            let mut root: PolyP = Vec::new();
            for (i, &c) in work.iter().enumerate() {
                if i % (p as usize) == 0 {
                    root.push(c);
                } else {
                    assert_eq!(c, 0);
                }
            }
            collect(&trim(root), p, irreducibles);
            return;
        }
        let g = gcd(work, &der, p);
        let (sqfree, _) = divmod(work, &g, p);
        for fac in factor_squarefree(&monic(&sqfree, p), p) {
            if !irreducibles.contains(&fac) {
                irreducibles.push(fac);
            }
        }
        if degree(&g).unwrap_or(0) > 0 {
            collect(&g, p, irreducibles);
        }
    }

    let mut irreducibles = Vec::new();
    collect(&work, p, &mut irreducibles);
    for fac in irreducibles {
        let mut mult = 0u32;
        loop {
            let (q, r) = divmod(&work, &fac, p);
            if !r.is_empty() {
                break;
            }
            work = q;
            mult += 1;
        }
        debug_assert!(mult > 0);
        factors.push((fac, mult));
    }
    debug_assert_eq!(degree(&work), Some(0));
    factors.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    Ok((lead, factors))
}

/// Renders a factor as a human-readable polynomial in the given variable.
pub fn poly_to_string(f: &[u64], var: &str) -> String {
    if f.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (i, c) {
            (0, _) => format!("{c}"),
            (1, 1) => var.to_string(),
            (1, _) => format!("{c}*{var}"),
            (_, 1) => format!("{var}^{i}"),
            _ => format!("{c}*{var}^{i}"),
        };
        parts.push(term);
    }
    parts.join(" + ")
}
