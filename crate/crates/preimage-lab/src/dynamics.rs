//! Iterated rational preimages under the maps x ↦ x^d + c.
//!
//! The enumeration side expands f^{−N}(a) breadth-first with exact rational
//! root extraction; the closed-form side gives the predicted cardinality of
//! the full preimage set of the origin for d ≥ 3 and the sharp bound κ(d).
//! For d ≥ 5 a claimed rational second preimage of 0 reduces to a primitive
//! triple A^d = C^{d−1} + B^{d(d−1)}, a shape with no nontrivial solutions;
//! for d ∈ {3, 4} the same question routes through the torsion points of
//! v² = u³ ∓ 1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

use crate::elliptic::{ec_torsion, ECPoint, ECurve};
use crate::error::{domain, Result};
use crate::exact_arith::{isqrt_u128, nth_root_rational, ExactRational};

/// Breadth-first expansion of the rational preimages of `root` under
/// x ↦ x^d + c.
///
/// `levels[N−1]` holds every rational solution of f^{∘N}(x) = root that the
/// expansion reaches at depth N; a value already seen at a smaller depth is
/// listed again where it reappears but is not re-expanded, so cyclic orbits
/// terminate the walk. `union` is the deduplicated value set and
/// `cycle_values` its members that are periodic under forward iteration.
/// `truncated` records that the walk was cut by the depth limit while
/// unexpanded values remained, making completeness of `union` auditable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreimageTree {
    #[serde(serialize_with = "crate::serialize_display")]
    pub d: u32,
    pub c: ExactRational,
    pub root: ExactRational,
    #[serde(serialize_with = "crate::serialize_display")]
    pub depth_limit: u32,
    pub truncated: bool,
    pub levels: Vec<Vec<ExactRational>>,
    pub union: Vec<ExactRational>,
    pub cycle_values: Vec<ExactRational>,
}

fn apply_f(d: u32, c: &ExactRational, x: &ExactRational) -> ExactRational {
    &x.pow(d as i32).expect("nonnegative exponent") + c
}

/// All rational x with x^d + c = y, i.e. x^d = y − c. At most two values
/// (even d), at most one (odd d).
pub fn preimage_step(d: u32, c: &ExactRational, y: &ExactRational) -> Vec<ExactRational> {
    assert!(d >= 2, "map degree must be at least 2");
    let t = y - c;
    match nth_root_rational(&t, d) {
        None => Vec::new(),
        Some(r) if r.is_zero() => vec![r],
        Some(r) if d.is_multiple_of(2) => vec![-&r, r],
        Some(r) => vec![r],
    }
}

/// Is x periodic under x ↦ x^d + c? Exact: the forward orbit is iterated
/// until it revisits a value (periodic iff that value is x itself) or until
/// one of two divergence certificates fires — |v| > |c| + 2 forces |v| to
/// grow strictly forever, and den(v)^{d−1} > den(c)² forces den(v) to grow
/// strictly forever. The remaining state space is finite, so this loop
/// terminates on every input.
fn is_periodic(d: u32, c: &ExactRational, x: &ExactRational) -> bool {
    let escape = &c.abs() + &ExactRational::from_int(2);
    let w2 = c.denom() * c.denom();
    let mut seen: BTreeSet<ExactRational> = BTreeSet::new();
    let mut v = x.clone();
    let mut steps = 0u32;
    loop {
        if v.abs() > escape || v.denom().pow(d - 1) > w2 {
            return false;
        }
        if !seen.insert(v.clone()) {
            return v == *x;
        }
        v = apply_f(d, c, &v);
        steps += 1;
        assert!(steps < 1_000_000, "forward orbit exceeded its finite state space");
    }
}

/// Breadth-first preimage expansion below `root`, memoized on visited
/// values, stopping at natural exhaustion (an empty or fully-revisited
/// level) or at `depth_limit`.
pub fn iterated_preimages(
    d: u32,
    c: &ExactRational,
    root: &ExactRational,
    depth_limit: u32,
) -> PreimageTree {
    assert!(d >= 2, "map degree must be at least 2");
    assert!(depth_limit >= 1, "depth limit must be at least 1");
    let mut visited: BTreeSet<ExactRational> = BTreeSet::new();
    visited.insert(root.clone());
    let mut frontier: Vec<ExactRational> = vec![root.clone()];
    let mut levels: Vec<Vec<ExactRational>> = Vec::new();
    let mut truncated = true;
    for _ in 1..=depth_limit {
        let level: BTreeSet<ExactRational> = frontier
            .iter()
            .flat_map(|y| preimage_step(d, c, y))
            .collect();
        if level.is_empty() {
            truncated = false;
            break;
        }
        debug_assert!(level.iter().all(|x| frontier.contains(&apply_f(d, c, x))));
        let fresh: Vec<ExactRational> =
            level.iter().filter(|x| !visited.contains(x)).cloned().collect();
        levels.push(level.into_iter().collect());
        if fresh.is_empty() {
            // every branch closed into an already-expanded value
            truncated = false;
            break;
        }
        visited.extend(fresh.iter().cloned());
        frontier = fresh;
    }
    let union: BTreeSet<ExactRational> = levels.iter().flatten().cloned().collect();
    let cycle_values = union
        .iter()
        .filter(|x| is_periodic(d, c, x))
        .cloned()
        .collect();
    PreimageTree {
        d,
        c: c.clone(),
        root: root.clone(),
        depth_limit,
        truncated,
        levels,
        union: union.into_iter().collect(),
        cycle_values,
    }
}

/// Predicted size of the full rational iterated-preimage set of 0 under
/// x ↦ x^d + c for d ≥ 3, by the parity of d:
/// even — 3 at c = −1, 1 at c = 0, 2 at c = −r^d for rational r ∉ {0, ±1},
/// 0 otherwise; odd — 1 exactly when −c is a d-th power (including c = 0),
/// 0 otherwise.
pub fn corollary_count(d: u32, c: &ExactRational) -> Result<u32> {
    if d < 3 {
        return domain("closed-form count applies to degree at least 3");
    }
    let root_of_minus_c = nth_root_rational(&-c, d);
    if d.is_multiple_of(2) {
        Ok(match root_of_minus_c {
            Some(r) if r.is_zero() => 1,
            Some(r) if r == ExactRational::one() => 3,
            Some(_) => 2,
            None => 0,
        })
    } else {
        Ok(if root_of_minus_c.is_some() { 1 } else { 0 })
    }
}

/// Sharp upper bound κ for the count over all c: 6 at d = 2, 3 for even
/// d ≥ 3, 1 for odd d ≥ 3.
pub fn kappa(d: u32) -> Result<u32> {
    if d < 2 {
        return domain("kappa is defined for degree at least 2");
    }
    Ok(match d {
        2 => 6,
        _ if d.is_multiple_of(2) => 3,
        _ => 1,
    })
}

/// Primitive integer triple certifying a rational second preimage of 0 for
/// degree d: A^d = C^{d−1} + B^{d(d−1)} with gcd(A,B) = gcd(B,C) = 1 and
/// all three nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DMTriple {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Serialize for DMTriple {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("DMTriple", 3)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("c", &self.c.to_string())?;
        st.end()
    }
}

/// Certifying transform for a claimed second preimage: given z₁ ≠ 0 (so
/// c = −z₁^d) and a witness z₂ with f(f(z₂)) = 0, produce the primitive
/// triple with z₂/z₁ = A/B^{d−1} and 1/z₁ = C/B^d. Inputs that are not
/// witnesses are rejected with a domain error; a successful return would
/// exhibit a nontrivial solution of a shape proved impossible, so at desk
/// scale every call is expected to reject.
pub fn dm_reduction(d: u32, z1: &ExactRational, z2: &ExactRational) -> Result<DMTriple> {
    if d < 5 {
        return domain("triple reduction applies to degree at least 5");
    }
    if z1.is_zero() {
        return domain("z1 must be nonzero (c = -z1^d would vanish)");
    }
    if z2.is_zero() {
        return domain("degenerate witness z2 = 0");
    }
    let c = -&z1.pow(d as i32).expect("positive exponent");
    let w = &z2.pow(d as i32).expect("positive exponent") + &c;
    if !(&w.pow(d as i32).expect("positive exponent") + &c).is_zero() {
        return domain(format!(
            "z2 = {z2} is not a second-preimage witness for c = {c}"
        ));
    }
    // w^d = z1^d, so w = ±z1; normalize the sign of z1 so that w = z1.
    let s1 = if w == *z1 {
        z1.clone()
    } else {
        assert!(w == -z1 && d.is_multiple_of(2), "w must be ±z1 with the sign flip only for even d");
        w
    };
    // (z2/s1)^d = (1/s1)^{d−1} + 1 in lowest terms forces den(z2/s1) = B^{d−1}
    // and den(1/s1) = B^d for a single positive integer B.
    let t = z2 / &s1;
    let s = s1.recip().expect("s1 nonzero");
    let e = s.denom();
    let b = crate::exact_arith::nth_root_int(e.magnitude(), d)
        .expect("den(1/z1) must be a perfect d-th power");
    let b = BigInt::from(b);
    assert_eq!(t.denom(), &b.pow(d - 1), "den(z2/z1) must equal B^{{d-1}}");
    let triple = DMTriple {
        a: t.numer().clone(),
        b,
        c: s.numer().clone(),
    };
    assert_eq!(
        triple.a.pow(d),
        triple.c.pow(d - 1) + triple.b.pow(d * (d - 1)),
        "exponent identity must hold for a validated witness"
    );
    assert!(triple.a.gcd(&triple.b).is_one(), "gcd(A, B) ≠ 1");
    assert!(triple.b.gcd(&triple.c).is_one(), "gcd(B, C) ≠ 1");
    assert!(!triple.a.is_zero() && !triple.b.is_zero() && !triple.c.is_zero());
    Ok(triple)
}

/// One primitive solution of x^n + y^n = z², labeled trivial when
/// xyz ∈ {0, ±1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DMSolution {
    #[serde(serialize_with = "crate::serialize_display")]
    pub x: i64,
    #[serde(serialize_with = "crate::serialize_display")]
    pub y: i64,
    #[serde(serialize_with = "crate::serialize_display")]
    pub z: i64,
    pub trivial: bool,
}

/// Exhaustive scan for primitive solutions of x^n + y^n = z² with
/// |x|, |y| ≤ bound, z recovered by an exact square test. Both signs of z
/// are listed. Completeness holds within the scanned rectangle only.
pub fn dm_search(n: u32, bound: u32) -> Vec<DMSolution> {
    assert!(n >= 4, "exponent must be at least 4");
    // 2·bound^n must fit in i128 or the term sums below would wrap.
    let fits = (bound.max(1) as u128)
        .checked_pow(n)
        .and_then(|v| v.checked_mul(2))
        .is_some_and(|v| v <= i128::MAX as u128);
    assert!(fits, "bound^n exceeds fixed-width arithmetic");
    let b = bound as i128;
    let mut out = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            let s = x.pow(n) + y.pow(n);
            if s < 0 {
                continue;
            }
            let r = isqrt_u128(s as u128);
            if r * r != s as u128 {
                continue;
            }
            let z = r as i128;
            for zz in if z == 0 { vec![0] } else { vec![-z, z] } {
                if x.gcd(&y).gcd(&zz) != 1 {
                    continue;
                }
                let trivial = x * y * zz == 0 || (x * y * zz).abs() == 1;
                out.push(DMSolution {
                    x: x as i64,
                    y: y as i64,
                    z: zz as i64,
                    trivial,
                });
            }
        }
    }
    out.sort();
    out
}

/// A rational point candidate ruled out on the second-preimage route, with
/// the exact reason.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcludedPoint {
    pub point: ECPoint,
    #[serde(serialize_with = "crate::serialize_display")]
    pub order: u32,
    pub reason: String,
}

/// Outcome of the degree-3/4 second-preimage route: the finite point list
/// of the auxiliary curve together with the audit trail excluding each
/// candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteVerdict {
    #[serde(serialize_with = "crate::serialize_display")]
    pub d: u32,
    pub c: ExactRational,
    pub curve: String,
    pub torsion_group: String,
    pub excluded: Vec<ExcludedPoint>,
    pub survivors: Vec<ECPoint>,
    pub second_preimage_exists: bool,
    pub first_preimage_exists: bool,
}

/// Decide rational second preimages of 0 under x ↦ x^d + c for d ∈ {3, 4}.
///
/// A witness would give a rational point of v² = u³ − 1 (d = 3, with
/// (u, v) = (z₂/z₁, 1/z₁)) or of v² = u³ + 1 (d = 4, with
/// (u, v) = (1/z₁, (z₂/z₁)²)). Both curves have rank zero, so their torsion
/// points are their full rational point sets; each is checked against the
/// witness constraints — coordinates must be finite and nonzero, and for
/// d = 4 the v-coordinate must be a rational square.
pub fn second_preimage_route_d34(d: u32, c: &ExactRational) -> Result<RouteVerdict> {
    if d != 3 && d != 4 {
        return domain("route applies to degree 3 or 4 only");
    }
    if c.is_zero() {
        return domain("c must be nonzero");
    }
    if d == 4 && *c == -ExactRational::one() {
        return domain("degree 4 requires c ≠ -1 (0 is then itself a second preimage)");
    }
    let (curve, label) = if d == 3 {
        (ECurve::from_ints(0, -1), "v^2 = u^3 - 1")
    } else {
        (ECurve::from_ints(0, 1), "v^2 = u^3 + 1")
    };
    let torsion = ec_torsion(&curve)?;
    let mut excluded = Vec::new();
    let mut survivors = Vec::new();
    for (point, order) in &torsion.points {
        let reason = match point {
            ECPoint::Infinity => {
                Some("a witness has finite coordinates, so the point at infinity is excluded".to_string())
            }
            ECPoint::Affine { u, v } => {
                if d == 3 {
                    if v.is_zero() {
                        Some("v = 1/z1 cannot vanish for finite z1".to_string())
                    } else if u.is_zero() {
                        Some("u = z2/z1 = 0 would force c = 0".to_string())
                    } else {
                        None
                    }
                } else if u.is_zero() {
                    Some("u = 1/z1 cannot vanish for finite z1".to_string())
                } else if v.is_zero() {
                    Some("v = (z2/z1)^2 = 0 would force c ∈ {0, -1}".to_string())
                } else if nth_root_rational(v, 2).is_none() {
                    Some(format!("v = {v} is not the square of a rational"))
                } else {
                    None
                }
            }
        };
        match reason {
            Some(reason) => excluded.push(ExcludedPoint {
                point: point.clone(),
                order: *order,
                reason,
            }),
            None => survivors.push(point.clone()),
        }
    }
    let first_preimage_exists = nth_root_rational(&-c, d).is_some();
    Ok(RouteVerdict {
        d,
        c: c.clone(),
        curve: label.to_string(),
        torsion_group: torsion.group,
        second_preimage_exists: !survivors.is_empty(),
        excluded,
        survivors,
        first_preimage_exists,
    })
}

/// The acceptance c-grid: reduced p/q with |p| ≤ max_num and 1 ≤ q ≤ max_den.
pub fn rational_grid(max_num: i64, max_den: i64) -> Vec<ExactRational> {
    let mut out = BTreeSet::new();
    for q in 1..=max_den {
        for p in -max_num..=max_num {
            out.insert(
                ExactRational::new(BigInt::from(p), BigInt::from(q)).expect("q positive"),
            );
        }
    }
    out.into_iter().collect()
}

/// Enumerated preimage count of 0 versus the closed form, over a whole
/// degree range and c-grid; returns the per-degree maxima observed. Panics
/// on any mismatch (test harness entry point).
pub fn verify_counts_on_grid(degrees: &[u32], grid: &[ExactRational], depth: u32) -> BTreeMap<u32, u32> {
    let zero = ExactRational::zero();
    let mut maxima = BTreeMap::new();
    for &d in degrees {
        let counts = crate::parallel_map(grid.to_vec(), |c| {
            let tree = iterated_preimages(d, c, &zero, depth);
            assert!(!tree.truncated, "expansion must terminate naturally on the grid");
            let enumerated = tree.union.len() as u32;
            let predicted = corollary_count(d, c).expect("d >= 3");
            assert_eq!(
                enumerated, predicted,
                "count mismatch at d = {d}, c = {c}"
            );
            enumerated
        });
        maxima.insert(d, counts.into_iter().max().unwrap_or(0));
    }
    maxima
}
