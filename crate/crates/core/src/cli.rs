//! Command-line verification harness. Each check emits one report; exit code
//! 0 means every requested check passed, 1 that some check failed or was
//! inconclusive, 2 a usage error and 3 an internal inconsistency.

use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cherednik::{
    euler_check, faithfulness_check, pbw_dimension, satake_check_t0, CherednikAlgebra,
};
use crate::dunkl::quasi::{obstruction_coefficient, quasi_hilbert_series, quasi_invariance_check, RadialOperator, LaurentPoly};
use crate::dunkl::commute_check;
use crate::error::Error;
use crate::exactalg::{ParamScalar, Scalar};
use crate::hecke::{
    hecke_dimension, orbifold_presentation, signature_verdict, specialize_tau_zero, sphere_obstruction, todd_coxeter,
    Geometry, HeckeAlgebraPresentation, OrbifoldSignature, Status as HeckeStatus, Verdict, DEFAULT_MAX_COSETS,
};
use crate::kz::{hecke_root_check, monodromy_numeric, LocalModel, KzReport};
use crate::reflgroup::{GroupKind, ReflectionGroup};

pub const DEFAULT_STEPS: usize = 4096;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One JSON line per check.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub inputs: Value,
    pub status: Status,
    pub witness: Value,
    pub wall_time_ms: f64,
}

#[derive(Parser, Debug)]
#[command(name = "cherednik", version, about = "Exact checks for rational Cherednik algebras, KZ monodromy and orbifold Hecke algebras")]
pub struct Cli {
    /// Emit JSON lines instead of a text summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Algebraic checks on Dunkl operators and Cherednik algebras.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Rank-one KZ monodromy.
    Kz {
        #[command(subcommand)]
        check: KzCommand,
    },
    /// Orbifold groups and their Hecke algebras.
    Hecke {
        #[command(subcommand)]
        check: HeckeCommand,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GroupArgs {
    /// Group key such as Z4, S3, I2(5), B2; defaults to the standard set.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub deg: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// [D_y, D_y'] = 0 with t and c formal.
    Dunkl(GroupArgs),
    /// PBW dimension count of the degree filtration.
    Pbw(GroupArgs),
    /// Euler element relations, with t formal and at t = 1.
    Euler(GroupArgs),
    /// Satake map from the t = 0 center to the spherical subalgebra.
    Satake(GroupArgs),
    /// The polynomial representation is a homomorphism on random words.
    Faithful {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 500)]
        pairs: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Invariance of quasi-invariants under the radial operator.
    Quasi {
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 12)]
        deg: u32,
        /// Coupling; defaults to m.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// Every check at acceptance sizes (smaller with --quick).
    All {
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct KzArgs {
    #[arg(long)]
    pub n: u32,
    /// Comma-separated c_1..c_{n-1}, as decimals or fractions.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum KzCommand {
    /// Numeric monodromy against the exact characters.
    Monodromy {
        #[command(flatten)]
        model: KzArgs,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// τ(c, η), its inverse, and the Hecke root correspondence.
    Tau(KzArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SignatureArgs {
    /// Orbifold signature such as "g=0;2,3,5".
    #[arg(long)]
    pub signature: String,
    #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
    pub max_cosets: usize,
}

#[derive(Subcommand, Debug)]
pub enum HeckeCommand {
    /// Rank over the truncated τ ring and comparison with the group algebra.
    Dim {
        /// Cyclic presentation with this many local roots.
        #[arg(long)]
        n: Option<u32>,
        /// Catalog presentation; only A2 is available.
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        signature: Option<String>,
        /// Word-length cap.
        #[arg(long)]
        deg: Option<usize>,
        /// Truncation order K of ℂ[τ]/(τ)^K.
        #[arg(long, default_value_t = 2)]
        trunc: u32,
    },
    /// Determinant obstruction for spherical signatures.
    Obstruction(SignatureArgs),
    /// Coset enumeration of the orbifold group.
    Group(SignatureArgs),
    /// Expected flatness from the geometry of the signature.
    Verdict(SignatureArgs),
}

/// A failure to run a check, mapped to exit code 2 or 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Internal(e.to_string())
        }
    }
}

type CheckResult = std::result::Result<VerificationReport, CliError>;

/// Parses `0.1`, `-3/4` or `2`.
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, CliError> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("malformed number {s:?}"));
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(num, den);
        return Ok(if negative { -q } else { q });
    }
    BigRational::from_str(s).map_err(|_| bad())
}

fn parse_list(s: &str) -> std::result::Result<Vec<BigRational>, CliError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_rational).collect()
}

fn build_group(key: &str) -> std::result::Result<Arc<ReflectionGroup>, CliError> {
    let kind: GroupKind = key.parse()?;
    Ok(Arc::new(ReflectionGroup::build(kind)?))
}

fn parse_signature(s: &str) -> std::result::Result<OrbifoldSignature, CliError> {
    Ok(s.parse()?)
}

fn timed(check: String, inputs: Value, f: impl FnOnce() -> std::result::Result<(Status, Value), CliError>) -> CheckResult {
    let start = Instant::now();
    let (status, witness) = f()?;
    Ok(VerificationReport { check, inputs, status, witness, wall_time_ms: start.elapsed().as_secs_f64() * 1e3 })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// A check that has not run yet, so `verify all` can dispatch to threads.
type Job = Box<dyn FnOnce() -> CheckResult + Send>;

fn groups_or(default: &[&str], group: &Option<String>) -> Vec<String> {
    match group {
        Some(g) => vec![g.clone()],
        None => default.iter().map(|s| s.to_string()).collect(),
    }
}

fn dunkl_job(key: String, deg: u32) -> Job {
    Box::new(move || {
        let g = build_group(&key)?;
        timed(format!("dunkl/{key}"), json!({"group": key, "deg": deg}), || {
            let r = commute_check(&g, deg)?;
            Ok((Status::from_bool(r.passed()), to_value(&r)))
        })
    })
}

fn pbw_job(key: String, deg: u32) -> Job {
    Box::new(move || {
        let g = build_group(&key)?;
        timed(format!("pbw/{key}"), json!({"group": key, "deg": deg}), || {
            let r = pbw_dimension(&CherednikAlgebra::formal(g), deg);
            Ok((Status::from_bool(r.passed()), to_value(&r)))
        })
    })
}

fn euler_job(key: String) -> Job {
    Box::new(move || {
        let g = build_group(&key)?;
        timed(format!("euler/{key}"), json!({"group": key}), || {
            let formal = euler_check(&CherednikAlgebra::formal(g.clone()));
            let unit = euler_check(&CherednikAlgebra::with_t(g, ParamScalar::one()));
            let ok = formal.passed() && unit.passed();
            Ok((Status::from_bool(ok), json!({"formal_t": formal, "t_equals_1": unit})))
        })
    })
}

fn satake_job(key: String, deg: u32) -> Job {
    Box::new(move || {
        let g = build_group(&key)?;
        timed(format!("satake/{key}"), json!({"group": key, "deg": deg}), || {
            let r = satake_check_t0(&CherednikAlgebra::with_t(g, ParamScalar::zero()), deg)?;
            Ok((Status::from_bool(r.passed()), to_value(&r)))
        })
    })
}

fn faithful_job(key: String, pairs: usize, seed: u64) -> Job {
    Box::new(move || {
        let g = build_group(&key)?;
        timed(format!("faithful/{key}"), json!({"group": key, "pairs": pairs, "seed": seed}), || {
            let r = faithfulness_check(&CherednikAlgebra::formal(g), pairs, 4, 5, seed)?;
            Ok((Status::from_bool(r.passed()), to_value(&r)))
        })
    })
}

/// With c = m the quasi-invariants must be stable, otherwise a witness must
/// appear; the Hilbert series must be (1 + q^{2m+1})/(1 − q²) either way.
fn quasi_job(m: u32, deg: u32, c: Option<BigRational>) -> Job {
    Box::new(move || {
        let c = c.unwrap_or_else(|| BigRational::from_integer(m.into()));
        timed(format!("quasi/m={m}/c={c}"), json!({"m": m, "deg": deg, "c": c.to_string()}), || {
            let expect_stable = c == BigRational::from_integer(m.into());
            let r = quasi_invariance_check(m, deg, &c);
            let h = quasi_hilbert_series(m);
            let l1_x3 = RadialOperator::new(BigRational::from_integer(1.into())).apply(&LaurentPoly::x_pow(3));
            let ok = r.stable == expect_stable
                && (expect_stable || r.witness.is_some())
                && h.palindromic
                && h.matches_closed_form(m)
                && l1_x3.is_zero();
            Ok((
                Status::from_bool(ok),
                json!({
                    "invariance": r,
                    "obstruction_coefficient": obstruction_coefficient(m, &c).to_string(),
                    "hilbert_series": h,
                    "L1_x3": l1_x3.to_string(),
                }),
            ))
        })
    })
}

fn model_from(n: u32, c: &[BigRational], eta: &BigRational) -> std::result::Result<LocalModel, CliError> {
    let c: Vec<ParamScalar> = c.iter().cloned().map(ParamScalar::from_rational).collect();
    Ok(LocalModel::new(n, c, ParamScalar::from_rational(eta.clone()))?)
}

fn kz_inputs(n: u32, c: &[BigRational], eta: &BigRational) -> Value {
    json!({"n": n, "c": c.iter().map(ToString::to_string).collect::<Vec<_>>(), "eta": eta.to_string()})
}

fn kz_monodromy_job(n: u32, c: Vec<BigRational>, eta: BigRational, steps: usize, tol: f64, tag: String) -> Job {
    Box::new(move || {
        let model = model_from(n, &c, &eta)?;
        let mut inputs = kz_inputs(n, &c, &eta);
        inputs["steps"] = json!(steps);
        inputs["tol"] = json!(tol);
        timed(format!("kz/monodromy/n={n}{tag}"), inputs, || {
            let r = monodromy_numeric(&model, steps)?;
            let roots = hecke_root_check(&model);
            let dev = r.max_deviation.unwrap_or(f64::INFINITY);
            let status = if r.resonant {
                Status::Inconclusive
            } else {
                Status::from_bool(dev <= tol && roots.passed)
            };
            Ok((status, json!({"monodromy": KzReport::new(&model, &r), "hecke_residual": r.hecke_residual, "roots": roots})))
        })
    })
}

/// τ(c, η) formally and, when values are given, numerically; the round trip
/// through the inverse map and the root correspondence must be exact.
fn kz_tau_job(n: u32, values: Option<(Vec<BigRational>, BigRational)>) -> Job {
    Box::new(move || {
        let (model, inputs) = match &values {
            Some((c, eta)) => (model_from(n, c, eta)?, kz_inputs(n, c, eta)),
            None => (LocalModel::formal(n)?, json!({"n": n})),
        };
        timed(format!("kz/tau/n={n}"), inputs, || {
            let tau = model.tau();
            let via_matrix = model.tau_via_matrix();
            let (c, eta) = LocalModel::c_eta_from_tau(n, &tau)?;
            let round_trip = c == model.c && eta == model.eta;
            let roots = hecke_root_check(&model);
            let ok = round_trip && via_matrix.coeffs == tau.coeffs && roots.passed;
            Ok((
                Status::from_bool(ok),
                json!({
                    "tau": tau.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "round_trip": round_trip,
                    "roots": roots,
                }),
            ))
        })
    })
}

fn hecke_group_job(sig: OrbifoldSignature, max_cosets: usize) -> Job {
    Box::new(move || {
        timed(format!("hecke/group/{sig}"), json!({"signature": sig.to_string(), "max_cosets": max_cosets}), || {
            let pres = orbifold_presentation(&sig);
            let geometry = sig.geometry();
            Ok(match todd_coxeter(&pres, max_cosets) {
                Ok(rep) => {
                    let trivial = rep.relators_trivial(&pres);
                    (
                        Status::from_bool(trivial),
                        json!({"presentation": pres.to_string(), "geometry": geometry, "group_order": rep.degree, "relators_trivial": trivial}),
                    )
                }
                Err(o) => {
                    // infinite groups are expected off the spherical case
                    let status = if geometry == Geometry::Spherical { Status::Inconclusive } else { Status::Pass };
                    (status, json!({"presentation": pres.to_string(), "geometry": geometry, "group_order": "infinite", "overflow": o}))
                }
            })
        })
    })
}

fn hecke_obstruction_job(sig: OrbifoldSignature, max_cosets: usize) -> Job {
    Box::new(move || {
        timed(format!("hecke/obstruction/{sig}"), json!({"signature": sig.to_string()}), || {
            let r = sphere_obstruction(&sig, max_cosets)?;
            Ok((Status::from_bool(r.passed()), to_value(&r)))
        })
    })
}

fn hecke_verdict_job(sig: OrbifoldSignature, max_cosets: usize) -> Job {
    Box::new(move || {
        timed(format!("hecke/verdict/{sig}"), json!({"signature": sig.to_string()}), || {
            let r = signature_verdict(&sig, max_cosets);
            let mut w = to_value(&r);
            if r.group_order.is_none() {
                w["group_order"] = json!("infinite");
            }
            // bad orbifolds are predicted non-flat but admit no determinant check
            let status = if r.consistent {
                Status::Pass
            } else if r.verdict == Verdict::ExpectedNotFlat && r.obstruction_form.is_none() {
                Status::Inconclusive
            } else {
                Status::Fail
            };
            Ok((status, w))
        })
    })
}

fn hecke_dim_job(h: HeckeAlgebraPresentation, cap: usize) -> Job {
    Box::new(move || {
        let inputs = json!({"presentation": h.name, "cap": cap, "trunc": h.truncation});
        timed(format!("hecke/dim/{}", h.name), inputs, || {
            let r = hecke_dimension(&h, cap, DEFAULT_MAX_COSETS)?;
            let at_zero = specialize_tau_zero(&h, DEFAULT_MAX_COSETS);
            let at_zero_ok = at_zero.local_relations_unipotent && at_zero.matches_orbifold != Some(false);
            let status = match r.status {
                HeckeStatus::Pass if at_zero_ok => Status::Pass,
                HeckeStatus::Inconclusive => Status::Inconclusive,
                _ => Status::Fail,
            };
            Ok((status, json!({"rank": r, "tau_zero": at_zero})))
        })
    })
}

/// Word-length cap past the longest normal word of the catalog entry.
fn default_cap(h: &HeckeAlgebraPresentation) -> usize {
    let local = h.local.iter().map(|l| l.order as usize).max().unwrap_or(1);
    let positive = h.positive_relations.iter().flatten().map(|(u, v)| u.len().max(v.len())).max().unwrap_or(0);
    local.max(positive) + 1
}

/// Deterministic sample of (c, η) with |·| < 1/2, denominators ≤ 97.
pub fn sample_parameters(n: u32, count: usize, seed: u64) -> Vec<(Vec<BigRational>, BigRational)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
        let den: i64 = rng.gen_range(2..=97);
        let num: i64 = rng.gen_range(-(den - 1) / 2..=(den - 1) / 2);
        BigRational::new(num.into(), den.into())
    };
    (0..count)
        .map(|_| {
            let c = (1..n).map(|_| draw(&mut rng)).collect();
            (c, draw(&mut rng))
        })
        .collect()
}

fn all_jobs(quick: bool, steps: usize, seed: u64) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    let (dunkl_deg, pbw_deg, satake_deg, pairs, samples) = if quick { (4, 2, 3, 100, 5) } else { (6, 3, 4, 500, 20) };
    for key in ["S3", "Z4", "I2(4)", "B2"] {
        jobs.push(dunkl_job(key.into(), dunkl_deg));
    }
    for key in ["Z2", "Z3", "S3", "B2"] {
        jobs.push(pbw_job(key.into(), pbw_deg));
        jobs.push(euler_job(key.into()));
    }
    for key in ["S3", "B2"] {
        jobs.push(faithful_job(key.into(), pairs, seed));
    }
    for key in ["Z2", "Z3"] {
        jobs.push(satake_job(key.into(), satake_deg));
    }
    for n in [2, 3, 4, 6] {
        for (k, (c, eta)) in sample_parameters(n, samples, seed ^ n as u64).into_iter().enumerate() {
            jobs.push(kz_monodromy_job(n, c, eta, steps, DEFAULT_TOLERANCE, format!("/sample={k}")));
        }
    }
    for n in 2..=8 {
        jobs.push(kz_tau_job(n, None));
    }
    let sig = |s: &str| s.parse::<OrbifoldSignature>().expect("catalog signature");
    for s in ["g=0;2,3,3", "g=0;2,3,4", "g=0;2,3,5", "g=0;2,2,3", "g=0;2,2,5", "g=0;2,3,7"] {
        jobs.push(hecke_group_job(sig(s), DEFAULT_MAX_COSETS));
    }
    for s in ["g=0;2,3,3", "g=0;2,3,5", "g=0;2,2,2"] {
        jobs.push(hecke_obstruction_job(sig(s), DEFAULT_MAX_COSETS));
    }
    for s in ["g=0;2,3,5", "g=0;2,3,7", "g=0;2,2,2,2", "g=1"] {
        jobs.push(hecke_verdict_job(sig(s), DEFAULT_MAX_COSETS));
    }
    for n in 2..=6 {
        let h = HeckeAlgebraPresentation::cyclic(n, 2);
        let cap = default_cap(&h);
        jobs.push(hecke_dim_job(h, cap));
    }
    let a2 = HeckeAlgebraPresentation::type_a2(2);
    let cap = default_cap(&a2);
    jobs.push(hecke_dim_job(a2, cap));
    for m in 0..=3 {
        jobs.push(quasi_job(m, 12, None));
        jobs.push(quasi_job(m, 12, Some(BigRational::new((2 * m as i64 + 1).into(), 2.into()))));
    }
    jobs
}

/// Runs jobs on a small worker pool; results keep the submission order so
/// output is reproducible.
fn run_jobs(jobs: Vec<Job>) -> Vec<CheckResult> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1));
    let total = jobs.len();
    let queue = std::sync::Mutex::new(jobs.into_iter().enumerate().collect::<Vec<_>>().into_iter());
    let results = std::sync::Mutex::new((0..total).map(|_| None).collect::<Vec<Option<CheckResult>>>());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let next = queue.lock().expect("queue lock").next();
                let Some((i, job)) = next else { break };
                let r = job();
                results.lock().expect("results lock")[i] = Some(r);
            });
        }
    });
    results.into_inner().expect("results lock").into_iter().map(|r| r.expect("every job ran")).collect()
}

fn jobs_for(command: Command) -> std::result::Result<Vec<Job>, CliError> {
    let jobs = match command {
        Command::Verify { check } => match check {
            VerifyCommand::Dunkl(a) => groups_or(&["S3", "Z4", "I2(4)", "B2"], &a.group)
                .into_iter()
                .map(|g| dunkl_job(g, a.deg.unwrap_or(6)))
                .collect(),
            VerifyCommand::Pbw(a) => groups_or(&["Z2", "Z3", "S3", "B2"], &a.group)
                .into_iter()
                .map(|g| pbw_job(g, a.deg.unwrap_or(3)))
                .collect(),
            VerifyCommand::Euler(a) => groups_or(&["Z2", "Z3", "S3", "B2"], &a.group).into_iter().map(euler_job).collect(),
            VerifyCommand::Satake(a) => groups_or(&["Z2", "Z3"], &a.group)
                .into_iter()
                .map(|g| satake_job(g, a.deg.unwrap_or(4)))
                .collect(),
            VerifyCommand::Faithful { group, pairs, seed } => {
                groups_or(&["S3"], &group.group).into_iter().map(|g| faithful_job(g, pairs, seed)).collect()
            }
            VerifyCommand::Quasi { m, deg, c } => {
                let c = c.as_deref().map(parse_rational).transpose()?;
                match m {
                    Some(m) => vec![quasi_job(m, deg, c)],
                    None => (0..=3).map(|m| quasi_job(m, deg, c.clone())).collect(),
                }
            }
            VerifyCommand::All { quick, steps, seed } => all_jobs(quick, steps, seed),
        },
        Command::Kz { check } => match check {
            KzCommand::Monodromy { model, steps, tol } => {
                let c = match &model.c {
                    Some(s) => parse_list(s)?,
                    None => vec![BigRational::from_integer(0.into()); model.n.saturating_sub(1) as usize],
                };
                let eta = model.eta.as_deref().map(parse_rational).transpose()?.unwrap_or_else(|| BigRational::from_integer(0.into()));
                vec![kz_monodromy_job(model.n, c, eta, steps, tol, String::new())]
            }
            KzCommand::Tau(model) => {
                let values = match (&model.c, &model.eta) {
                    (None, None) => None,
                    (c, eta) => {
                        let c = match c {
                            Some(s) => parse_list(s)?,
                            None => vec![BigRational::from_integer(0.into()); model.n.saturating_sub(1) as usize],
                        };
                        let eta = eta.as_deref().map(parse_rational).transpose()?.unwrap_or_else(|| BigRational::from_integer(0.into()));
                        Some((c, eta))
                    }
                };
                vec![kz_tau_job(model.n, values)]
            }
        },
        Command::Hecke { check } => match check {
            HeckeCommand::Dim { n, group, signature, deg, trunc } => {
                if trunc == 0 {
                    return Err(CliError::Usage("--trunc must be at least 1".into()));
                }
                let mut hs = Vec::new();
                if let Some(n) = n {
                    if n < 1 {
                        return Err(CliError::Usage("--n must be at least 1".into()));
                    }
                    hs.push(HeckeAlgebraPresentation::cyclic(n, trunc));
                }
                if let Some(g) = group {
                    if !g.eq_ignore_ascii_case("A2") {
                        return Err(CliError::Usage(format!("no Hecke catalog entry {g:?} (available: A2)")));
                    }
                    hs.push(HeckeAlgebraPresentation::type_a2(trunc));
                }
                if let Some(s) = signature {
                    hs.push(HeckeAlgebraPresentation::from_signature(&parse_signature(&s)?, trunc));
                }
                if hs.is_empty() {
                    hs = (2..=6).map(|n| HeckeAlgebraPresentation::cyclic(n, trunc)).collect();
                    hs.push(HeckeAlgebraPresentation::type_a2(trunc));
                }
                hs.into_iter()
                    .map(|h| {
                        let cap = deg.unwrap_or_else(|| default_cap(&h));
                        hecke_dim_job(h, cap)
                    })
                    .collect()
            }
            HeckeCommand::Obstruction(a) => vec![hecke_obstruction_job(parse_signature(&a.signature)?, a.max_cosets)],
            HeckeCommand::Group(a) => vec![hecke_group_job(parse_signature(&a.signature)?, a.max_cosets)],
            HeckeCommand::Verdict(a) => vec![hecke_verdict_job(parse_signature(&a.signature)?, a.max_cosets)],
        },
    };
    Ok(jobs)
}

fn status_label(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Inconclusive => "INCONCLUSIVE",
    }
}

/// Runs a parsed command, writing reports to `out` and diagnostics to `err`.
/// Returns the exit code.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let json = cli.json;
    let jobs = match jobs_for(cli.command) {
        Ok(j) => j,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            return 2;
        }
        Err(CliError::Internal(m)) => {
            let _ = writeln!(err, "internal error: {m}");
            return 3;
        }
    };
    let mut code = 0;
    for r in run_jobs(jobs) {
        match r {
            Ok(report) => {
                if report.status != Status::Pass {
                    code = code.max(1);
                }
                let line = if json {
                    serde_json::to_string(&report).expect("reports serialize")
                } else {
                    format!("{} {} ({:.1} ms) {}", status_label(report.status), report.check, report.wall_time_ms, report.witness)
                };
                let _ = writeln!(out, "{line}");
            }
            Err(CliError::Usage(m)) => {
                let _ = writeln!(err, "usage error: {m}");
                code = code.max(2);
            }
            Err(CliError::Internal(m)) => {
                let _ = writeln!(err, "internal error: {m}");
                code = 3;
            }
        }
    }
    code
}

/// Parses arguments and runs; clap's own errors map to exit code 2.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli, out, err),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("0.1").ok(), Some(BigRational::new(1.into(), 10.into())));
        assert_eq!(parse_rational("-0.25").ok(), Some(BigRational::new((-1).into(), 4.into())));
        assert_eq!(parse_rational("1/10").ok(), Some(BigRational::new(1.into(), 10.into())));
        assert_eq!(parse_rational("3").ok(), Some(BigRational::from_integer(3.into())));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn samples_in_window() {
        let half = BigRational::new(1.into(), 2.into());
        for (c, eta) in sample_parameters(4, 20, 1) {
            assert_eq!(c.len(), 3);
            for v in c.iter().chain([&eta]) {
                assert!(v.clone() < half.clone() && v.clone() > -half.clone());
            }
        }
        assert_eq!(sample_parameters(3, 5, 9), sample_parameters(3, 5, 9));
    }
}
