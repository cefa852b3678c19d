use quadforge::arith::{ClassQuotient, FpElement, Rational};
use quadforge::certify::{certify, rank_growth_report, CertifyBudget};
use quadforge::curve::{to_quartic, Point, QuarticCurve, SplitCurve};
use quadforge::density::{
    avoidance_search, prime_sweep, random_forms, reduce_model, verify_witness, AvoidanceBudget, AvoidanceOutcome,
    LinearForm,
};
use quadforge::forge::{forge, scan_linear_family, ColorField, ForgeBudget};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{parse_point, parse_rationals, Command, RunConfig};
use crate::CliError;

/// Per-purpose seed derived from the run seed.
fn stream(seed: u64, tag: u64) -> u64 {
    seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Internal(e.to_string()))
}

fn reduce_pair(
    curve: &SplitCurve<Rational>,
    base: &Point<Rational>,
    p: u64,
) -> Result<(SplitCurve<FpElement>, Point<FpElement>), CliError> {
    let cp = curve.reduce_mod(p)?;
    let bp = quadforge::certify::reduce_point(curve, base, p)?;
    Ok((cp, bp))
}

fn forge_budget(cfg: &RunConfig) -> ForgeBudget {
    ForgeBudget {
        restarts: cfg.forge.restarts,
        max_n: cfg.forge.max_n,
        b_max: cfg.forge.b_max,
        l_window: cfg.forge.l_window,
        absorbed: cfg.forge.absorbed.clone(),
        seed: cfg.seed,
    }
}

pub fn run_command(command: Command, cfg: &RunConfig) -> Result<Value, CliError> {
    match command {
        Command::Forge => cmd_forge(cfg),
        Command::Scan => cmd_scan(cfg),
        Command::Avoid => cmd_avoid(cfg),
        Command::Certify => cmd_certify(cfg),
        Command::Growth => cmd_growth(cfg),
        Command::Convert => cmd_convert(cfg),
        Command::Density => Err(CliError::Internal("density writes JSON lines".into())),
    }
}

pub fn cmd_forge(cfg: &RunConfig) -> Result<Value, CliError> {
    let curve = cfg.curve()?;
    let base = cfg.point()?;
    let budget = forge_budget(cfg);
    let (field, report) = match cfg.forge.prime {
        None => ("Q".to_string(), to_value(&forge(&curve, &base, &budget)?)?),
        Some(p) => {
            let (cp, bp) = reduce_pair(&curve, &base, p)?;
            (format!("F_{p}"), to_value(&forge(&cp, &bp, &budget)?)?)
        }
    };
    let mut v = report;
    v["field"] = json!(field);
    v["absorbed"] = json!(if cfg.forge.prime.is_some() { vec![] } else { cfg.forge.absorbed.clone() });
    Ok(v)
}

fn parse_form<F: Clone>(s: &str, conv: impl Fn(&Rational) -> Option<F>) -> Result<(F, F), CliError> {
    let v = parse_rationals(s, 2)?;
    let a = conv(&v[0]).ok_or_else(|| CliError::Config(format!("form {s:?} does not reduce")))?;
    let b = conv(&v[1]).ok_or_else(|| CliError::Config(format!("form {s:?} does not reduce")))?;
    Ok((a, b))
}

fn scan_rows<F: ColorField>(
    quartic: &QuarticCurve<F>,
    sigma: &[(F, F)],
    ts: &[F],
    quotient: &ClassQuotient,
) -> Result<Value, CliError> {
    to_value(&scan_linear_family(quartic, sigma, ts, quotient)?)
}

pub fn cmd_scan(cfg: &RunConfig) -> Result<Value, CliError> {
    let curve = cfg.curve()?;
    let base = cfg.point()?;
    let s = &cfg.scan;
    let ts: Vec<i64> = if s.t_min <= s.t_max { (s.t_min..=s.t_max).collect() } else { Vec::new() };
    let absorbed: Vec<_> = s.absorbed.iter().map(|&g| g.into()).collect();
    let (field, rows) = match s.prime {
        None => {
            let q = to_quartic(&curve, &base)?;
            let sigma = s.forms.iter().map(|f| parse_form(f, |r| Some(r.clone()))).collect::<Result<Vec<_>, _>>()?;
            let ts: Vec<Rational> = ts.iter().map(|&t| Rational::from(t)).collect();
            ("Q".to_string(), scan_rows(&q, &sigma, &ts, &ClassQuotient::new(&absorbed)?)?)
        }
        Some(p) => {
            let q = reduce_model(&curve, &base, p)?;
            let sigma = s
                .forms
                .iter()
                .map(|f| parse_form(f, |r| FpElement::from_rational(r, p)))
                .collect::<Result<Vec<_>, _>>()?;
            let ts: Vec<FpElement> = ts.iter().map(|&t| FpElement::new(t, p)).collect();
            (format!("F_{p}"), scan_rows(&q, &sigma, &ts, &ClassQuotient::trivial())?)
        }
    };
    Ok(json!({ "field": field, "forms": s.forms, "rows": rows }))
}

fn form_strings(sigmas: &[Vec<LinearForm>]) -> Vec<Vec<String>> {
    sigmas.iter().map(|s| s.iter().map(|(a, b)| format!("{a},{b}")).collect()).collect()
}

pub fn cmd_avoid(cfg: &RunConfig) -> Result<Value, CliError> {
    use rand::SeedableRng;
    let curve = cfg.curve()?;
    let base = cfg.point()?;
    let a = &cfg.avoid;
    let quartic = reduce_model(&curve, &base, a.prime)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(stream(cfg.seed, 1));
    let sigmas: Vec<Vec<LinearForm>> = (0..a.k).map(|_| random_forms(&mut rng, a.prime, a.n)).collect();
    let outcome = avoidance_search(&quartic, &sigmas, a.m, &AvoidanceBudget { max_candidates: a.budget, seed: cfg.seed })?;
    let verified = match &outcome {
        AvoidanceOutcome::Found { witness, .. } => Some(verify_witness(&quartic, &sigmas, witness)?),
        AvoidanceOutcome::NotFound { .. } => None,
    };
    Ok(json!({
        "p": a.prime,
        "k": a.k,
        "n": a.n,
        "m": a.m,
        "sigmas": form_strings(&sigmas),
        "outcome": to_value(&outcome)?,
        "verified": verified,
    }))
}

fn cert_budget(cfg: &RunConfig) -> CertifyBudget {
    CertifyBudget {
        min_primes: cfg.certify.min_primes,
        max_primes: cfg.certify.max_primes,
        p_min: cfg.certify.p_min,
        ..CertifyBudget::default()
    }
}

pub fn cmd_certify(cfg: &RunConfig) -> Result<Value, CliError> {
    let curve = cfg.curve()?;
    let points = if cfg.certify.points.is_empty() {
        vec![cfg.point()?]
    } else {
        cfg.certify.points.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>, _>>()?
    };
    to_value(&certify(&curve, &points, cfg.certify.bound, &cert_budget(cfg))?)
}

pub fn cmd_growth(cfg: &RunConfig) -> Result<Value, CliError> {
    let curve = cfg.curve()?;
    let base = cfg.point()?;
    let schedule: Vec<ForgeBudget> = cfg
        .growth
        .schedule
        .iter()
        .enumerate()
        .map(|(i, &restarts)| ForgeBudget {
            restarts,
            max_n: cfg.growth.max_n,
            seed: cfg.seed.wrapping_add(i as u64),
            ..forge_budget(cfg)
        })
        .collect();
    to_value(&rank_growth_report(&curve, &base, &schedule, cfg.growth.bound, &cert_budget(cfg))?)
}

pub fn cmd_convert(cfg: &RunConfig) -> Result<Value, CliError> {
    let curve = cfg.curve()?;
    let base = cfg.point()?;
    let q = to_quartic(&curve, &base)?;
    let link = q.provenance().expect("built from a curve");
    let e = curve.roots();
    let shifted: Vec<Rational> = e.iter().map(|ei| ei - &link.x0).collect();
    let y0_identity = &link.y0 * &link.y0 == -(&shifted[0] * &shifted[1] * &shifted[2]);
    let mut points = Vec::new();
    for s in &cfg.convert.points {
        let p = parse_point(s)?;
        let entry = match q.from_weierstrass(&p) {
            Ok(qp) => {
                let back = q.to_weierstrass(&qp)?;
                json!({ "input": s, "quartic": to_value(&qp)?, "round_trip": back == p })
            }
            Err(err) => json!({ "input": s, "quartic": Value::Null, "error": err.kind() }),
        };
        points.push(entry);
    }
    Ok(json!({
        "curve": e.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "base": to_value(&base)?,
        "c": q.constants().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "y0_identity": y0_identity,
        "points": points,
    }))
}

/// Sweep records in prime order: one per prime, then a summary.
pub fn density_lines(cfg: &RunConfig) -> Result<(Vec<Value>, Value), CliError> {
    let curve = cfg.curve()?;
    let base = cfg.point()?;
    let mut sweep = cfg.density.clone();
    sweep.seed = cfg.seed;
    let report = prime_sweep(&curve, &base, &sweep)?;
    let mut lines = Vec::with_capacity(report.records.len());
    for r in &report.records {
        let mut v = to_value(r)?;
        v["record"] = json!("prime");
        lines.push(v);
    }
    Ok((lines, to_value(&report.aggregate)?))
}
