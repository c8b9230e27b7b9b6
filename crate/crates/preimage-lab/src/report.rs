//! Machine-readable verification report over the full computational chain.
//!
//! Each check freezes one headline claim — the level-4 point table, the
//! discriminant chain, the singular fibers, the twist-curve point sets, the
//! unit-class classification, the final pullback, the square-class
//! homomorphism, the preimage-count closed form, the torsion groups, the
//! square-sum scan, and a sweep of the structural invariants — and records
//! expected versus actual as deterministic strings. Reports with identical
//! configuration are byte-identical apart from the elapsed-time fields.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use serde::Serialize;

use crate::cubic_field::{fourth_power_free, k_mul, k_pow, norm, KElement};
use crate::descent::{build_s, cd_search, clear_denominators, compute_ab, delta_pair, enumerate_d, x4_points_over_s, DValue};
use crate::dynamics::{dm_search, kappa, rational_grid, verify_counts_on_grid};
use crate::elliptic::{
    curve_e, ec_add, ec_mul, ec_torsion, q0, x_minus_t, CanonicalTag, ECurve,
};
use crate::exact_arith::ExactRational;
use crate::preimage_curves::{
    boundary_points, factor_mod_p, ideal_membership, mu, mu_inv, pi, poly_disc, preimage_ideal,
    ramification_poly, rational_points_x4, singular_check_mod_p, MPoly,
};

/// Search bounds a report was produced under.
#[derive(Debug, Clone, Serialize)]
pub struct ReportConfig {
    /// Height bound for the twist-curve point searches.
    #[serde(serialize_with = "crate::serialize_display")]
    pub cd_height_bound: u32,
    /// Coordinate bound for the x^n + y^n = z² scan.
    #[serde(serialize_with = "crate::serialize_display")]
    pub dm_bound: u32,
    /// Numerator bound of the c-grid.
    #[serde(serialize_with = "crate::serialize_display")]
    pub grid_numerator_bound: i64,
    /// Denominator bound of the c-grid.
    #[serde(serialize_with = "crate::serialize_display")]
    pub grid_denominator_bound: i64,
    /// Depth limit for preimage expansion.
    #[serde(serialize_with = "crate::serialize_display")]
    pub preimage_depth: u32,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            cd_height_bound: 1000,
            dm_bound: 200,
            grid_numerator_bound: 40,
            grid_denominator_bound: 6,
            preimage_depth: 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One verified claim: `status` is pass exactly when `expected == actual`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub claim: String,
    pub status: CheckStatus,
    pub expected: String,
    pub actual: String,
    pub elapsed_ms: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportSummary {
    #[serde(serialize_with = "crate::serialize_display")]
    pub pass: usize,
    #[serde(serialize_with = "crate::serialize_display")]
    pub fail: usize,
    #[serde(serialize_with = "crate::serialize_display")]
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema: String,
    pub config: ReportConfig,
    pub records: Vec<CheckRecord>,
    pub summary: ReportSummary,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0 && self.summary.skipped == 0
    }
}

struct CheckDef {
    id: &'static str,
    claim: &'static str,
    run: fn(&ReportConfig) -> (String, String),
}

fn check_point_table(_cfg: &ReportConfig) -> (String, String) {
    let gens = preimage_ideal(4, &ExactRational::zero()).expect("level-4 ideal");
    let e = curve_e();
    let base = q0();
    let table = rational_points_x4();
    let on_ideal = table.iter().filter(|(p, _)| gens.vanishes_at(p)).count();
    let projected = table
        .iter()
        .filter(|(p, m)| pi(p).ok() == Some(ec_mul(&e, *m, &base)))
        .count();
    let multiples: Vec<i64> = table.iter().map(|&(_, m)| m).collect();
    (
        "10 on ideal; 10 project to [-1, 2, -2, 1, 1, -2, 2, -1, 0, 3]".to_string(),
        format!("{on_ideal} on ideal; {projected} project to {multiples:?}"),
    )
}

fn check_discriminant(_cfg: &ReportConfig) -> (String, String) {
    let tvars = vec!["t".to_string()];
    let t = MPoly::var(tvars.clone(), 0);
    let cubic = t.pow(3).sub(&t).add(&MPoly::constant(tvars, ExactRational::one()));
    let d_cubic = poly_disc(&cubic).expect("cubic discriminant");
    let f = ramification_poly();
    let d_f = poly_disc(&f).expect("orbit-polynomial discriminant");
    let (lc23, f23) = factor_mod_p(&f, 23).expect("factorization mod 23");
    let (lc2551, f2551) = factor_mod_p(&f, 2551).expect("factorization mod 2551");
    (
        concat!(
            "disc(t^3 - t + 1) = -23; disc = 58673 = 23 * 2551; ",
            "mod 23: 1 * [([4, 1], 2), ([18, 1], 1), ([2, 4, 0, 1], 1)]; ",
            "mod 2551: 1 * [([477, 1], 2), ([1869, 297, 1162, 1600, 1], 1)]"
        )
        .to_string(),
        format!(
            "disc(t^3 - t + 1) = {d_cubic}; disc = {d_f} = {}; mod 23: {lc23} * {f23:?}; mod 2551: {lc2551} * {f2551:?}",
            if d_f == ExactRational::from_int(23 * 2551) { "23 * 2551" } else { "not 23 * 2551" },
        ),
    )
}

fn check_singularity(_cfg: &ReportConfig) -> (String, String) {
    let fmt = |p: u64| -> String {
        let r = singular_check_mod_p(p).expect("supported prime");
        let f = &r.findings[0];
        format!(
            "p={p}: c0={}, det={}, ordinary={}, chain={:?}, on_curve={}",
            f.c0, f.hessian_det, f.ordinary, f.chain_point, r.singular_on_curve
        )
    };
    (
        concat!(
            "p=23: c0=-4, det=14, ordinary=true, chain=[1, 2, -11, -4, 0], on_curve=false; ",
            "p=2551: c0=-477, det=1075, ordinary=true, chain=[1, -308, 13, -477, 0], on_curve=true"
        )
        .to_string(),
        format!("{}; {}", fmt(23), fmt(2551)),
    )
}

fn check_cd_points(cfg: &ReportConfig) -> (String, String) {
    let counts: Vec<(i64, usize)> = enumerate_d()
        .into_iter()
        .map(|d| (d.value(), cd_search(d, cfg.cd_height_bound).len()))
        .collect();
    let xs: BTreeSet<String> = cd_search(DValue::from_value(1).expect("unit twist"), cfg.cd_height_bound)
        .into_iter()
        .map(|(x, _)| x.to_string())
        .collect();
    (
        "[(1, 6), (-1, 6), (2, 0), (-2, 0), (23, 0), (-23, 0), (46, 0), (-46, 0)]; x in {\"-1\", \"0\", \"1\"}".to_string(),
        format!("{counts:?}; x in {xs:?}"),
    )
}

fn check_delta_classification(cfg: &ReportConfig) -> (String, String) {
    let bound = cfg.cd_height_bound.min(100);
    let mut lines = BTreeSet::new();
    for d in [DValue::from_value(1), DValue::from_value(-1)] {
        let d = d.expect("unit twist");
        for (x, y) in cd_search(d, bound) {
            let t = clear_denominators(&x, &y, d).expect("point on curve");
            let (a, b) = compute_ab(&t, d);
            let pair = delta_pair(&a, &b).expect("unit classes");
            if !pair.is_candidate() {
                lines.insert(format!("x={x}: non-candidate"));
                continue;
            }
            let (la, lb) = pair.labels();
            lines.insert(format!("x={x}: ({la}, {lb})"));
        }
    }
    let actual: Vec<String> = lines.into_iter().collect();
    (
        "[\"x=-1: (1, 1)\", \"x=0: (-theta, -theta^3)\", \"x=1: (-theta^3, -theta)\"]".to_string(),
        format!("{actual:?}"),
    )
}

fn check_pullback(cfg: &ReportConfig) -> (String, String) {
    let bound = cfg.cd_height_bound.min(300);
    let s = build_s(bound).expect("pullback set");
    let multiples: Vec<i64> = s.iter().map(|&(m, _)| m).collect();
    let got = x4_points_over_s(bound).expect("lifted points");
    let mut expected_points: Vec<_> = rational_points_x4().into_iter().map(|(p, _)| p).collect();
    expected_points.sort();
    (
        "multiples [-6, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 7, 9]; 10 points; exact match true".to_string(),
        format!(
            "multiples {multiples:?}; {} points; exact match {}",
            got.len(),
            got == expected_points
        ),
    )
}

fn check_xt_structure(_cfg: &ReportConfig) -> (String, String) {
    let e = curve_e();
    let base = q0();
    let mut kernel_ok = true;
    let mut image_ok = true;
    for m in -10i64..=10 {
        let p = ec_mul(&e, m, &base);
        let cls = x_minus_t(&p).expect("square class");
        match cls.canonical_tag {
            CanonicalTag::Trivial => kernel_ok &= m % 2 == 0,
            CanonicalTag::MinusTheta => kernel_ok &= m % 2 != 0,
            CanonicalTag::Other(_) => image_ok = false,
        }
    }
    let flag = |m: i64| -> bool {
        matches!(
            x_minus_t(&ec_mul(&e, m, &base)).expect("square class").canonical_tag,
            CanonicalTag::MinusTheta
        )
    };
    let mut hom_pairs = 0usize;
    let mut hom_ok = true;
    for m in -5i64..=5 {
        for n in -5i64..=5 {
            hom_ok &= (flag(m) ^ flag(n)) == flag(m + n);
            hom_pairs += 1;
        }
    }
    (
        "kernel = even multiples true; image within {trivial, minus_theta} true; homomorphism on 121 pairs true".to_string(),
        format!(
            "kernel = even multiples {kernel_ok}; image within {{trivial, minus_theta}} {image_ok}; homomorphism on {hom_pairs} pairs {hom_ok}"
        ),
    )
}

fn check_corollary_grid(cfg: &ReportConfig) -> (String, String) {
    let grid = rational_grid(cfg.grid_numerator_bound, cfg.grid_denominator_bound);
    // panics on any closed-form mismatch; caught by the harness as a failure
    let maxima = verify_counts_on_grid(&[3, 4, 5, 6, 7, 8], &grid, cfg.preimage_depth);
    let consistent = maxima
        .iter()
        .all(|(&d, &m)| m == kappa(d).expect("d >= 3"));
    (
        "maxima {3: 1, 4: 3, 5: 1, 6: 3, 7: 1, 8: 3}; maxima = kappa true; kappa(2) = 6".to_string(),
        format!(
            "maxima {maxima:?}; maxima = kappa {consistent}; kappa(2) = {}",
            kappa(2).expect("kappa(2)")
        ),
    )
}

fn check_torsion(_cfg: &ReportConfig) -> (String, String) {
    let fmt = |b: i64| -> String {
        let info = ec_torsion(&ECurve::from_ints(0, b)).expect("integral model");
        let pts: Vec<String> = info
            .points
            .iter()
            .map(|(p, o)| format!("{p}/{o}"))
            .collect();
        format!("{}: {}", info.group, pts.join(", "))
    };
    (
        concat!(
            "Z/2: infinity/1, (1, 0)/2; ",
            "Z/6: infinity/1, (-1, 0)/2, (0, -1)/3, (0, 1)/3, (2, -3)/6, (2, 3)/6"
        )
        .to_string(),
        format!("{}; {}", fmt(-1), fmt(1)),
    )
}

fn check_dm_oracle(cfg: &ReportConfig) -> (String, String) {
    let counts: Vec<(u32, usize)> = (4..=9)
        .map(|n| {
            let nontrivial = dm_search(n, cfg.dm_bound)
                .into_iter()
                .filter(|s| !s.trivial)
                .count();
            (n, nontrivial)
        })
        .collect();
    (
        "nontrivial [(4, 0), (5, 0), (6, 0), (7, 0), (8, 0), (9, 0)]".to_string(),
        format!("nontrivial {counts:?}"),
    )
}

fn check_invariant_sweep(_cfg: &ReportConfig) -> (String, String) {
    let mut held = 0usize;

    // ideal membership: reconstruction accepts a combination and rejects a unit monomial
    let gens = preimage_ideal(3, &ExactRational::zero()).expect("level-3 ideal");
    let g1 = gens.gens[0].clone();
    let g2 = gens.gens[1].clone();
    let z1 = MPoly::var(g1.vars().to_vec(), 1);
    let z3 = MPoly::var(g1.vars().to_vec(), 3);
    let member = ideal_membership(&z3.mul(&g1).add(&z1.mul(&g2)), &gens).expect("division chain");
    let non_member = ideal_membership(&z1, &gens).expect("division chain");
    if member.member && !non_member.member {
        held += 1;
    }

    // chart maps: round-trip through the projection for |m| ≤ 8 and boundary points
    let e = curve_e();
    let base = q0();
    let mut charts_ok = true;
    for m in -8i64..=8 {
        let p = ec_mul(&e, m, &base);
        charts_ok &= mu(&mu_inv(&p).expect("fiber representative")).expect("chart value") == p;
    }
    for b in boundary_points(3).expect("boundary points") {
        charts_ok &= mu_inv(&mu(&b).expect("chart value")).is_ok();
    }
    if charts_ok {
        held += 1;
    }

    // group law: commutativity and associativity on sample multiples
    let (p1, p2, p3) = (ec_mul(&e, 1, &base), ec_mul(&e, 2, &base), ec_mul(&e, -3, &base));
    if ec_add(&e, &p1, &p2) == ec_add(&e, &p2, &p1)
        && ec_add(&e, &ec_add(&e, &p1, &p2), &p3) == ec_add(&e, &p1, &ec_add(&e, &p2, &p3))
    {
        held += 1;
    }

    // norm multiplicativity on fixed elements
    let a = KElement::from_ints(1, -1, 0);
    let b = KElement::from_ints(0, 1, 1);
    let c = KElement::from_ints(3, 0, -4);
    let mut norm_ok = norm(&k_mul(&a, &b)) == &norm(&a) * &norm(&b);
    norm_ok &= norm(&k_mul(&a, &c)) == &norm(&a) * &norm(&c);
    if norm_ok {
        held += 1;
    }

    // fourth-power-free reconstruction: delta * s^4 = x
    let mut recon_ok = true;
    for x in [
        KElement::from_ints(-1, 0, 1),
        k_pow(&KElement::theta(), 4).expect("unit power").scale(&ExactRational::from_int(16)),
        KElement::from_ints(2, -2, 0),
    ] {
        let d = fourth_power_free(&x).expect("factorable at desk scale");
        recon_ok &= k_mul(&d.delta, &k_pow(&d.s, 4).expect("fourth power")) == x;
    }
    if recon_ok {
        held += 1;
    }

    (
        "5/5 invariant families hold".to_string(),
        format!("{held}/5 invariant families hold"),
    )
}

const CHECKS: &[CheckDef] = &[
    CheckDef {
        id: "cd-points",
        claim: "bounded-height search of the eight twist curves D^2 y^4 = x^3 - x + 1 finds exactly six points for D = 1 and D = -1 (x in {0, +-1}) and none elsewhere; completeness is relative to the recorded bound",
        run: check_cd_points,
    },
    CheckDef {
        id: "corollary-grid",
        claim: "enumerated rational preimage counts of 0 under x -> x^d + c equal the closed form for d in 3..=8 over the c-grid, with per-parity maxima matching kappa; kappa(2) = 6 is recorded as a tabulated constant without a witnessing c",
        run: check_corollary_grid,
    },
    CheckDef {
        id: "delta-classification",
        claim: "for every searched point of the unit twist curves, the fourth-power-free unit-class pair of the cubic-field factors lands on the documented candidate list",
        run: check_delta_classification,
    },
    CheckDef {
        id: "discriminant",
        claim: "the orbit polynomial factor F has discriminant 58673 = 23 * 2551, matching the defining cubic's discriminant -23 at the shared prime, with the recorded factorizations mod 23 and mod 2551",
        run: check_discriminant,
    },
    CheckDef {
        id: "dm-oracle",
        claim: "the exhaustive scan of x^n + y^n = z^2 finds no nontrivial primitive solution for n in 4..=9 within the coordinate bound",
        run: check_dm_oracle,
    },
    CheckDef {
        id: "point-table",
        claim: "the ten stored rational points of the level-4 curve satisfy its ideal and project to the recorded multiples of the generator (1, -1)",
        run: check_point_table,
    },
    CheckDef {
        id: "property-suites",
        claim: "deterministic representatives of the structural invariant families hold: membership reconstruction, chart round-trips, group-law axioms, norm multiplicativity, fourth-power-free reconstruction; the randomized suites live in the test corpus",
        run: check_invariant_sweep,
    },
    CheckDef {
        id: "pullback",
        claim: "the computed 14-element pullback set on v^2 = u^3 - u + 1 lifts to exactly the ten stored level-4 points; the fibers over 5, 7, 9, +-4, +-6 times the generator contribute nothing new",
        run: check_pullback,
    },
    CheckDef {
        id: "singularity",
        claim: "reduction mod 23 and mod 2551 each exhibit one ordinary double root of the orbit polynomial, with the recorded Hessians and chain points; only the mod-2551 one lies on the curve over the base ring",
        run: check_singularity,
    },
    CheckDef {
        id: "torsion",
        claim: "the torsion groups of v^2 = u^3 - 1 and v^2 = u^3 + 1 are Z/2 and Z/6 with the listed points",
        run: check_torsion,
    },
    CheckDef {
        id: "xt-structure",
        claim: "the square-class map (u, v) -> u - theta is a homomorphism on multiples of the generator with kernel the even multiples and image within {trivial, -theta}",
        run: check_xt_structure,
    },
];

/// The known check identifiers, in report order.
pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

/// Run the verification checks (all of them, or the one selected by
/// `only`) and assemble the report. Unknown `only` values produce an empty
/// record list, which the caller should treat as a usage error via
/// [`check_ids`].
pub fn run_checks(cfg: &ReportConfig, only: Option<&str>) -> VerificationReport {
    let selected: Vec<&CheckDef> = CHECKS
        .iter()
        .filter(|c| only.is_none_or(|id| id == c.id))
        .collect();
    let records: Vec<CheckRecord> = crate::parallel_map(selected, |def| {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| (def.run)(cfg)));
        let elapsed_ms = start.elapsed().as_millis().to_string();
        let (expected, actual) = match outcome {
            Ok(pair) => pair,
            Err(panic) => {
                let msg = panic
                    .downcast_ref::<String>()
                    .map(|s| s.as_str())
                    .or_else(|| panic.downcast_ref::<&str>().copied())
                    .unwrap_or("opaque panic payload");
                ("completes without internal errors".to_string(), format!("panic: {msg}"))
            }
        };
        let status = if expected == actual { CheckStatus::Pass } else { CheckStatus::Fail };
        CheckRecord {
            id: def.id.to_string(),
            claim: def.claim.to_string(),
            status,
            expected,
            actual,
            elapsed_ms,
        }
    });
    let summary = ReportSummary {
        pass: records.iter().filter(|r| r.status == CheckStatus::Pass).count(),
        fail: records.iter().filter(|r| r.status == CheckStatus::Fail).count(),
        skipped: records.iter().filter(|r| r.status == CheckStatus::Skipped).count(),
    };
    VerificationReport {
        schema: "1".to_string(),
        config: cfg.clone(),
        records,
        summary,
    }
}
