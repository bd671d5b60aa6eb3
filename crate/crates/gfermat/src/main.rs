//! Command-line front end.
//!
//! One subcommand per library capability. Input is a curve specification in
//! JSON; output is a single JSON report on standard output (or `--out`).
//! Identical invocations produce byte-identical reports: sampling seeds are
//! derived from the curve hash unless `--seed` overrides them.
//!
//! Exit codes: 0 success, 2 validation error, 3 property violation
//! (a structural identity the library asserts failed on this instance),
//! 4 work budget exceeded. Errors are reported as
//! `{"error": {"code", "message", "context"}}`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use gfermat::curve::{CurveSpec, ProjectivePoint};
use gfermat::field::{roots, Field};
use gfermat::points::{enumerate_points, orbit_decomposition, DEFAULT_CENSUS_BUDGET};
use gfermat::verify::{verify_curve, verify_json, VerifyOptions};
use gfermat::{aut, osc, report, Error, Result};

#[derive(Parser)]
#[command(
    name = "gfermat",
    version,
    about = "Exact computer algebra for generalized Fermat curves"
)]
struct Cli {
    /// Path to the curve specification JSON.
    #[arg(short = 'c', long = "curve", global = true)]
    curve: Option<PathBuf>,
    /// Power series truncation order (osculation commands).
    #[arg(long, global = true)]
    truncation: Option<usize>,
    /// Number of random generic sample points.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Sampling seed; defaults to a value derived from the curve hash.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Work ceiling for censuses and exhaustive searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Genus, canonical degree, covering degree.
    Genus,
    /// Defining forms, branch values, genus.
    Describe,
    /// Jacobian ranks at every coordinate-hyperplane point.
    Smooth,
    /// Full linear automorphism group with lift certificates.
    Aut,
    /// Matrix-form automorphism test, for k - 1 a power of the characteristic.
    Qform {
        /// Path to a JSON matrix, one array of coefficients per entry.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Hermite invariants: full survey, one point, or all hyperplane points.
    Osculate {
        /// Index into the hyperplane-point list (0-based).
        #[arg(long, conflicts_with = "all_fixed")]
        point: Option<usize>,
        /// Every hyperplane point, no random samples.
        #[arg(long)]
        all_fixed: bool,
    },
    /// Ramification totals and the osculating-degree recurrence.
    Pluecker,
    /// Rational point census with the deck-group orbit decomposition.
    Points {
        /// Field sizes p^m to count over; defaults to the curve's own field.
        #[arg(long = "q", value_delimiter = ',', num_args = 1..)]
        q: Vec<u64>,
    },
    /// Run the whole check battery on the curve.
    Verify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Genus => "genus",
            Command::Describe => "describe",
            Command::Smooth => "smooth",
            Command::Aut => "aut",
            Command::Qform { .. } => "qform",
            Command::Osculate { .. } => "osculate",
            Command::Pluecker => "pluecker",
            Command::Points { .. } => "points",
            Command::Verify => "verify",
        }
    }
}

fn load_curve(cli: &Cli) -> Result<CurveSpec> {
    let path = cli
        .curve
        .as_ref()
        .ok_or_else(|| Error::Invalid("a curve file is required: -c/--curve <path>".into()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    report::parse_curve_str(&text)
}

fn load_json(path: &PathBuf) -> Result<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Invalid(format!("{} is not valid JSON: {e}", path.display())))
}

/// Decomposes `q = p^m` for the curve's characteristic `p`.
fn prime_power_degree(q: u64, p: u64) -> Result<usize> {
    if p == 0 {
        return Err(Error::Invalid(
            "point censuses need a curve over a finite field".into(),
        ));
    }
    let mut t = q;
    let mut m = 0usize;
    while t > 1 && t % p == 0 {
        t /= p;
        m += 1;
    }
    if t != 1 || m == 0 {
        return Err(Error::Invalid(format!(
            "q = {q} is not a power of the curve characteristic {p}"
        )));
    }
    Ok(m)
}

/// Extends the curve to `GF(q)` and runs the census plus orbits there.
fn census_over(c: &CurveSpec, q: u64, budget: u64) -> Result<(Value, bool)> {
    let p = c.field().characteristic();
    let m = prime_power_degree(q, p)?;
    let target = if m == 1 { Field::prime(p)? } else { Field::extension(p, m)? };
    let emb = roots::Embedding::new(c.field(), &target)?;
    let cq = c.embed(&emb)?;
    let census = enumerate_points(&cq, budget)?;
    let orbits = orbit_decomposition(&cq, &census)?;
    let ok = census.weil_ok
        && orbits.sizes_divide_group
        && orbits.orbit_stabilizer_consistent
        && orbits.stabilizers_single_fiber
        && orbits.fixed_points_in_small_orbits
        && orbits.fibers_single_orbits
        && orbits.base_constant_on_orbits;
    Ok((report::census_json(c, &census, Some(&orbits)), ok))
}

/// Hyperplane points of the extended curve, in coordinate order.
fn hyperplane_points(c: &CurveSpec) -> Result<(CurveSpec, Vec<ProjectivePoint>)> {
    let mut requirements = c.all_fixed_root_requirements()?;
    requirements.push((c.field().one(), c.k()));
    let (_, emb) = roots::extend_for_roots(c.field(), &requirements)?;
    let cw = c.embed(&emb)?;
    let mut fixed = Vec::new();
    for j in 1..=cw.n() + 1 {
        fixed.extend(cw.fixed_points(j)?);
    }
    Ok((cw, fixed))
}

/// Runs one subcommand; returns the report and the process exit code.
fn run(cli: &Cli) -> Result<(Value, u8)> {
    let c = load_curve(cli)?;
    let hash = report::curve_hash(&c);
    match &cli.command {
        Command::Genus => Ok((report::genus_json(&c)?, 0)),
        Command::Describe => Ok((report::describe_json(&c)?, 0)),
        Command::Smooth => {
            let v = report::smooth_json(&c)?;
            let code = if v["smooth"] == json!(true) { 0 } else { 3 };
            Ok((v, code))
        }
        Command::Aut => {
            let rep = aut::full_linear_group(&c)?;
            Ok((report::aut_report_json(&rep), 0))
        }
        Command::Qform { matrix } => {
            let m = report::parse_matrix(c.field(), &load_json(matrix)?)?;
            if m.len() != c.n() + 1 {
                return Err(Error::Invalid(format!(
                    "matrix is {}x{} but the ambient space needs {}",
                    m.len(),
                    m.len(),
                    c.n() + 1
                )));
            }
            let cert = aut::qform_check(&c, &m)?;
            Ok((report::qform_json(&c, &cert), 0))
        }
        Command::Osculate { point, all_fixed } => {
            if point.is_some() || *all_fixed {
                let (cw, fixed) = hyperplane_points(&c)?;
                let trunc = match cli.truncation {
                    Some(n) => n,
                    None => osc::default_truncation(&cw)?,
                };
                let selected: Vec<ProjectivePoint> = match point {
                    Some(idx) => {
                        let p = fixed.get(*idx).ok_or_else(|| {
                            Error::Invalid(format!(
                                "point index {idx} out of range: the curve has {} hyperplane points",
                                fixed.len()
                            ))
                        })?;
                        vec![p.clone()]
                    }
                    None => fixed,
                };
                let mut records = Vec::with_capacity(selected.len());
                for p in &selected {
                    let (_, data) = osc::osculate_point(&cw, p, trunc)?;
                    records.push(osc::OscPoint { point: p.clone(), data });
                }
                let v = json!({
                    "schema": report::SCHEMA,
                    "curve": hash,
                    "working_field": report::field_json(cw.field()),
                    "truncation": trunc,
                    "points": records.iter().map(report::osc_point_json).collect::<Vec<_>>(),
                });
                Ok((v, 0))
            } else {
                let seed = cli.seed.unwrap_or_else(|| report::derive_seed(&hash, "survey"));
                let rep = osc::hyperosc_survey_at(
                    &c,
                    cli.samples.unwrap_or(5),
                    seed,
                    cli.truncation,
                )?;
                let code = if rep.counterexamples.is_empty() { 0 } else { 3 };
                Ok((report::survey_json(&c, &rep), code))
            }
        }
        Command::Pluecker => {
            let rep = osc::pluecker_solve(&c)?;
            let ok = rep.closure && rep.targets_match && rep.totals_match;
            Ok((report::pluecker_json(&c, &rep), if ok { 0 } else { 3 }))
        }
        Command::Points { q } => {
            let budget = cli.budget.unwrap_or(DEFAULT_CENSUS_BUDGET);
            if q.is_empty() {
                let card = c.field().cardinality().ok_or_else(|| {
                    Error::Invalid("point censuses need a curve over a finite field".into())
                })?;
                let (v, ok) = census_over(&c, card, budget)?;
                return Ok((v, if ok { 0 } else { 3 }));
            }
            let mut censuses = Vec::with_capacity(q.len());
            let mut all_ok = true;
            for &qi in q {
                let (v, ok) = census_over(&c, qi, budget)?;
                censuses.push(v);
                all_ok &= ok;
            }
            let code = if all_ok { 0 } else { 3 };
            if censuses.len() == 1 {
                Ok((censuses.pop().expect("one census"), code))
            } else {
                let v = json!({
                    "schema": report::SCHEMA,
                    "curve": hash,
                    "censuses": censuses,
                });
                Ok((v, code))
            }
        }
        Command::Verify => {
            let opts = VerifyOptions {
                samples: cli.samples.unwrap_or(5),
                seed: cli.seed,
                budget: cli.budget.unwrap_or(DEFAULT_CENSUS_BUDGET),
            };
            let rep = verify_curve(&c, &opts)?;
            let code = if rep.all_passed { 0 } else { 3 };
            Ok((verify_json(&c, &rep), code))
        }
    }
}

fn emit(cli: &Cli, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string(value).expect("reports serialize");
    text.push('\n');
    match &cli.out {
        Some(path) => fs::write(path, &text)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("GFERMAT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    let context = cli.command.name();
    match run(&cli) {
        Ok((value, code)) => {
            if let Err(e) = emit(&cli, &value) {
                println!("{}", report::error_json(&e, context));
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            println!("{}", report::error_json(&e, context));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
