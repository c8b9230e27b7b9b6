//! Command-line front end for the preimage laboratory.
//!
//! Every subcommand prints UTF-8 JSON on stdout with rationals and integers
//! as decimal strings, except `curve-ideal`, which prints its generators as
//! graded-lex text. Diagnostics go to stderr. Exit status is 0 on success,
//! 1 when `verify-paper` records a failing check, and 2 on usage errors.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use preimage_lab::descent::{cd_search, clear_denominators, compute_ab, delta_pair, DValue};
use preimage_lab::dynamics::{dm_search, iterated_preimages};
use preimage_lab::elliptic::{curve_e, ec_mul, q0, x_minus_t};
use preimage_lab::exact_arith::ExactRational;
use preimage_lab::preimage_curves::preimage_ideal;
use preimage_lab::report::{check_ids, run_checks, ReportConfig};
use serde::Serialize;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "preimage-lab", version)]
#[command(about = "Exact computations on rational iterated preimages of 0 under x ↦ x^d + c")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand the rational iterated preimages of 0 under x ↦ x^d + c
    Preimages {
        /// Degree d ≥ 2 of the map
        #[arg(short)]
        d: u32,
        /// Parameter c, written "p/q" or "p"
        #[arg(short, allow_hyphen_values = true)]
        c: String,
        /// Depth limit for the expansion
        #[arg(long, default_value_t = 12)]
        max_depth: u32,
    },
    /// Search D²y⁴ = x³ − x + 1 for rational points and classify each one
    CdPoints {
        /// Twist value D ∈ {±1, ±2, ±23, ±46}
        #[arg(short = 'D', allow_hyphen_values = true, value_name = "D")]
        twist: i64,
        /// Naive height bound for the point search
        #[arg(long, default_value_t = 1000)]
        height_bound: u32,
    },
    /// Print the generators of the level-N preimage ideal in graded-lex text
    CurveIdeal {
        /// Level N ≥ 2 of the tower
        #[arg(short = 'N')]
        n: usize,
        /// Base point a, written "p/q" or "p"
        #[arg(short, allow_hyphen_values = true)]
        a: String,
    },
    /// Square class of u − t at the n-th multiple of the curve generator
    XtClass {
        /// Multiple n of the generator (0 names the point at infinity)
        #[arg(short, allow_hyphen_values = true)]
        n: i64,
    },
    /// Scan x^n + y^n = z² for primitive solutions within a coordinate bound
    DmSearch {
        /// Exponent n ≥ 4
        #[arg(short)]
        n: u32,
        /// Coordinate bound for |x| and |y|
        #[arg(long, default_value_t = 200)]
        bound: u32,
    },
    /// Run the full verification suite and print the JSON report
    VerifyPaper {
        /// Height bound for the twist-curve searches
        #[arg(long)]
        height_bound: Option<u32>,
        /// Run only the check with this id
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Serialize)]
struct CdPointRecord {
    x: ExactRational,
    y: ExactRational,
}

#[derive(Serialize)]
struct CdDeltaRecord {
    x: ExactRational,
    delta_a: String,
    delta_b: String,
}

#[derive(Serialize)]
struct CdReport {
    #[serde(rename = "D")]
    twist: String,
    bound: String,
    points: Vec<CdPointRecord>,
    delta_pairs: Vec<CdDeltaRecord>,
}

fn parse_rational(s: &str, what: &str) -> Result<ExactRational> {
    s.parse::<ExactRational>()
        .with_context(|| format!("{what} must be a rational \"p/q\" or \"p\", got {s:?}"))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn cmd_preimages(d: u32, c: &str, max_depth: u32) -> Result<()> {
    if d < 2 {
        bail!("degree must be at least 2, got {d}");
    }
    if d > 64 {
        bail!("degree {d} is past the supported desk scale (max 64)");
    }
    if !(1..=64).contains(&max_depth) {
        bail!("depth limit must lie in 1..=64, got {max_depth}");
    }
    let c = parse_rational(c, "parameter c")?;
    let tree = iterated_preimages(d, &c, &ExactRational::zero(), max_depth);
    if tree.truncated {
        eprintln!("note: expansion cut at depth {max_depth} with values still unexpanded");
    }
    print_json(&tree)
}

fn cmd_cd_points(twist: i64, height_bound: u32) -> Result<()> {
    let d = DValue::from_value(twist)?;
    if !(1..=1_000_000).contains(&height_bound) {
        bail!("height bound must lie in 1..=1000000, got {height_bound}");
    }
    let points = cd_search(d, height_bound);
    let mut delta_pairs = Vec::new();
    for (x, y) in &points {
        let triple = clear_denominators(x, y, d)?;
        let (a, b) = compute_ab(&triple, d);
        let pair = delta_pair(&a, &b)?;
        let (delta_a, delta_b) = pair.labels();
        delta_pairs.push(CdDeltaRecord { x: x.clone(), delta_a, delta_b });
    }
    let report = CdReport {
        twist: twist.to_string(),
        bound: height_bound.to_string(),
        points: points
            .into_iter()
            .map(|(x, y)| CdPointRecord { x, y })
            .collect(),
        delta_pairs,
    };
    print_json(&report)
}

fn cmd_curve_ideal(n: usize, a: &str) -> Result<()> {
    if !(2..=64).contains(&n) {
        bail!("level must lie in 2..=64, got {n}");
    }
    let a = parse_rational(a, "base point a")?;
    let gens = preimage_ideal(n, &a)?;
    for g in &gens.gens {
        println!("{g}");
    }
    Ok(())
}

fn cmd_xt_class(n: i64) -> Result<()> {
    if n.abs() > 128 {
        bail!("multiple must lie in -128..=128, got {n}");
    }
    let curve = curve_e();
    let point = ec_mul(&curve, n, &q0());
    let class = x_minus_t(&point)?;
    print_json(&serde_json::json!({ "class": class.canonical_tag.as_str() }))
}

fn cmd_dm_search(n: u32, bound: u32) -> Result<()> {
    if n < 4 {
        bail!("exponent must be at least 4, got {n}");
    }
    let fits = (bound.max(1) as u128)
        .checked_pow(n)
        .and_then(|v| v.checked_mul(2))
        .is_some_and(|v| v <= i128::MAX as u128);
    if !fits {
        bail!("bound {bound} is too large for exponent {n}: the scan needs 2·bound^n to fit in 127 bits");
    }
    let solutions = dm_search(n, bound);
    let nontrivial = solutions.iter().filter(|s| !s.trivial).count();
    eprintln!(
        "{} primitive solutions, {} nontrivial",
        solutions.len(),
        nontrivial
    );
    print_json(&serde_json::json!({
        "n": n.to_string(),
        "bound": bound.to_string(),
        "solutions": solutions,
    }))
}

fn cmd_verify_paper(height_bound: Option<u32>, only: Option<&str>) -> Result<ExitCode> {
    let mut cfg = ReportConfig::default();
    if let Some(b) = height_bound {
        if !(1..=1_000_000).contains(&b) {
            bail!("height bound must lie in 1..=1000000, got {b}");
        }
        cfg.cd_height_bound = b;
    }
    if let Some(id) = only {
        if !check_ids().contains(&id) {
            bail!(
                "unknown check id {id:?}; valid ids: {}",
                check_ids().join(", ")
            );
        }
    }
    let report = run_checks(&cfg, only);
    for r in &report.records {
        eprintln!("{}: {:?} ({} ms)", r.id, r.status, r.elapsed_ms);
    }
    print_json(&report)?;
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Preimages { d, c, max_depth } => {
            cmd_preimages(d, &c, max_depth)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CdPoints { twist, height_bound } => {
            cmd_cd_points(twist, height_bound)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CurveIdeal { n, a } => {
            cmd_curve_ideal(n, &a)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::XtClass { n } => {
            cmd_xt_class(n)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DmSearch { n, bound } => {
            cmd_dm_search(n, bound)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyPaper { height_bound, only } => {
            cmd_verify_paper(height_bound, only.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
