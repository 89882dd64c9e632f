//! Subcommand dispatch: every command yields a report and a pass flag.

use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeSet;

use gammalab::fundamental_sets::{
    self as fsets, affine_closure, closure_growth_bound, complex_reduce_trace, in_complex_strip, in_leaf_union,
    in_quarter_set, landau_construct, landau_exact_measure, parse_rational, quarter_set_trace, stern_relation_matrix,
    trace_evaluate, DerivationTrace, FundamentalSet, Rational, TraceArg, DEFAULT_CLOSURE_BUDGET,
};
use gammalab::identities::{verify_grid, IdentityId, Region, SampleSpec};
use gammalab::json::rational_to_string;
use gammalab::mellin::{rmt_report, PhiSpec};
use gammalab::numerics::{c64, gamma, Complex64, QuadratureSpec};
use gammalab::schlomilch::{
    binomial_identity_check, generalized_lhs, generalized_series, schlomilch_finite_lhs, schlomilch_finite_rhs,
};
use gammalab::{identities, Error};

use crate::output::render;
use crate::{Cli, Command, LandauCmd, RunConfig, SchlomilchCmd};

const IDENTITY_TOL: f64 = 1e-10;
const SERIES_TOL: f64 = 1e-8;
const REAL_TRACE_TOL: f64 = 1e-9;
const COMPLEX_TRACE_TOL: f64 = 1e-8;

pub enum Failure {
    /// Malformed argument: message names the flag.
    Usage(String),
    Numeric(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn usage(flag: &str, value: &str, why: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("invalid value '{value}' for '--{flag}': {why}"))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON values")
}

fn complex_pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// RE or RE,IM
pub fn parse_complex(flag: &str, s: &str) -> Result<Complex64, Failure> {
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| usage(flag, s, e));
    match s.split_once(',') {
        Some((re, im)) => Ok(c64(num(re)?, num(im)?)),
        None => Ok(c64(num(s)?, 0.0)),
    }
}

fn parse_q(flag: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| usage(flag, s, e))
}

/// RE0:RE1,IM0:IM1
fn parse_region(s: &str) -> Result<Region, Failure> {
    let bad = |why: &str| usage("grid", s, why);
    let (re, im) = s.split_once(',').ok_or_else(|| bad("expected RE0:RE1,IM0:IM1"))?;
    let range = |p: &str| -> Result<(f64, f64), Failure> {
        let (a, b) = p.split_once(':').ok_or_else(|| bad("expected LO:HI"))?;
        let a: f64 = a.trim().parse().map_err(|_| bad("bounds must be numbers"))?;
        let b: f64 = b.trim().parse().map_err(|_| bad("bounds must be numbers"))?;
        if !(a <= b) {
            return Err(bad("LO must not exceed HI"));
        }
        Ok((a, b))
    };
    Ok(Region {
        re: range(re)?,
        im: range(im)?,
    })
}

fn tol(cfg: &RunConfig, default: f64) -> f64 {
    cfg.tolerance.unwrap_or(default)
}

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn trace_fields(
    report: &mut serde_json::Map<String, Value>,
    trace: &DerivationTrace,
    allowed: &dyn Fn(&TraceArg) -> bool,
    emit: bool,
) -> bool {
    let replay = trace.replay().ok();
    let valid = trace.validate(allowed);
    let replay_gap = replay.map(|r| rel_err(r, trace.value)).unwrap_or(f64::NAN);
    report.insert("nodes".into(), json!(trace.node_count()));
    report.insert("depth".into(), json!(trace.depth()));
    report.insert("direct_leaves".into(), json!(trace.direct_leaves().len()));
    report.insert("replay_gap".into(), json!(replay_gap));
    report.insert("valid".into(), json!(valid.is_ok()));
    if let Err(why) = &valid {
        report.insert("invalid_reason".into(), json!(why));
    }
    if emit {
        report.insert("trace".into(), to_value(trace));
    }
    valid.is_ok() && replay_gap <= fsets::REPLAY_TOL
}

fn build_set(delta: &Rational, cfg: &RunConfig) -> Result<FundamentalSet, Failure> {
    Ok(landau_construct(delta, cfg.node_budget)?)
}

fn eval(z: Complex64) -> Outcome {
    let g = gamma(z)?;
    Ok((json!({"z": complex_pair(z), "gamma": complex_pair(g)}), true))
}

fn verify(cfg: &RunConfig, identity: &str, grid: Option<&str>, samples: usize, pole_exclusion: f64) -> Outcome {
    let id: IdentityId = identity.parse().map_err(|e| usage("identity", identity, e))?;
    let region = match grid {
        Some(g) => parse_region(g)?,
        None => id.default_region(),
    };
    let mut spec = SampleSpec::random(samples, region, cfg.seed);
    spec.pole_exclusion = pole_exclusion;
    let r = verify_grid(id, &spec, tol(cfg, IDENTITY_TOL))?;
    Ok((to_value(&r), r.pass))
}

fn schlomilch(cfg: &RunConfig, cmd: &SchlomilchCmd) -> Outcome {
    match cmd {
        SchlomilchCmd::Finite { m, z } => {
            let z = parse_complex("z", z)?;
            let l = schlomilch_finite_lhs(*m, z)?;
            let r = schlomilch_finite_rhs(*m, z)?;
            let res = identities::relative_residual(l, r);
            let t = tol(cfg, SERIES_TOL);
            let pass = res <= t;
            Ok((
                json!({"m": m, "z": complex_pair(z), "lhs": complex_pair(l), "rhs": complex_pair(r),
                       "residual": res, "tolerance": t, "pass": pass}),
                pass,
            ))
        }
        SchlomilchCmd::General { w, z } => {
            let w = parse_complex("w", w)?;
            let z = parse_complex("z", z)?;
            let t = tol(cfg, SERIES_TOL);
            let closed = generalized_lhs(w, z)?;
            // the series is summed well below the pass threshold
            let series = generalized_series(w, z, (t * 1e-4).max(1e-17), cfg.max_terms)?;
            let res = identities::relative_residual(series.value, closed);
            let pass = series.converged && res <= t;
            Ok((
                json!({"w": complex_pair(w), "z": complex_pair(z), "closed_form": complex_pair(closed),
                       "series": to_value(&series), "residual": res, "tolerance": t, "pass": pass}),
                pass,
            ))
        }
        SchlomilchCmd::Binom { m, l } => {
            let (lhs, rhs, eq) = binomial_identity_check(*m, *l);
            Ok((
                json!({"m": m, "l": l, "lhs": rational_to_string(&lhs), "rhs": rational_to_string(&rhs), "equal": eq}),
                eq,
            ))
        }
    }
}

fn landau(cfg: &RunConfig, cmd: &LandauCmd) -> Outcome {
    match cmd {
        LandauCmd::Construct { delta } => {
            let d = parse_q("delta", delta)?;
            match landau_construct(&d, cfg.node_budget) {
                Ok(fs) => {
                    let pass = fs.measure < d;
                    Ok((to_value(&fs.report()), pass))
                }
                Err(Error::Resource { limit, .. }) => {
                    let m = landau_exact_measure(&d)?;
                    let pass = m.measure < d;
                    let mut v = to_value(&m);
                    if let Value::Object(map) = &mut v {
                        map.insert(
                            "leaves_omitted".into(),
                            json!(format!("explicit forest exceeds the node budget of {limit}")),
                        );
                    }
                    Ok((v, pass))
                }
                Err(e) => Err(e.into()),
            }
        }
        LandauCmd::Trace { x, delta, emit_trace } => {
            let xq = parse_q("x", x)?;
            let d = parse_q("delta", delta)?;
            let fs = build_set(&d, cfg)?;
            let (v, trace) = trace_evaluate(&xq, &fs)?;
            let xf = trace.arg.to_complex();
            let g = gamma(xf)?.re;
            let err = ((v - g) / g).abs();
            let t = tol(cfg, REAL_TRACE_TOL);
            let mut map = serde_json::Map::new();
            map.insert("x".into(), json!(rational_to_string(&xq)));
            map.insert("delta".into(), json!(rational_to_string(&d)));
            map.insert("value".into(), json!(v));
            map.insert("gamma".into(), json!(g));
            map.insert("rel_error".into(), json!(err));
            map.insert("tolerance".into(), json!(t));
            let ok = trace_fields(&mut map, &trace, &in_leaf_union(&fs), *emit_trace);
            let pass = ok && err <= t;
            map.insert("pass".into(), json!(pass));
            Ok((Value::Object(map), pass))
        }
        LandauCmd::Quarter { x, emit_trace } => {
            let (v, trace) = quarter_set_trace(*x, cfg.depth_cap)?;
            let g = gamma(c64(*x, 0.0))?.re;
            let err = ((v - g) / g).abs();
            let t = tol(cfg, REAL_TRACE_TOL);
            let mut map = serde_json::Map::new();
            map.insert("x".into(), json!(x));
            map.insert("value".into(), json!(v));
            map.insert("gamma".into(), json!(g));
            map.insert("rel_error".into(), json!(err));
            map.insert("tolerance".into(), json!(t));
            let ok = trace_fields(&mut map, &trace, &in_quarter_set, *emit_trace);
            let pass = ok && err <= t;
            map.insert("pass".into(), json!(pass));
            Ok((Value::Object(map), pass))
        }
    }
}

fn stern(m: u32) -> Outcome {
    if m < 3 {
        return Err(Error::Domain(format!("m = {m}: the count is asserted only for m >= 3")).into());
    }
    let p = stern_relation_matrix(m)?;
    let pass = p.independent_count as u64 == p.expected;
    Ok((json!({"m": m, "independent": p.independent_count, "expected": p.expected}), pass))
}

fn closure(points: &[String], depth: u32, max_n: u32) -> Outcome {
    let pts: BTreeSet<Rational> = points
        .iter()
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_q("points", p))
        .collect::<Result<_, _>>()?;
    let out = affine_closure(&pts, depth, max_n, DEFAULT_CLOSURE_BUDGET)?;
    let k = closure_growth_bound(max_n) as f64;
    let bound = pts.len() as f64 * k.powi(depth as i32);
    let within = out.len() as f64 <= bound;
    let idempotent = depth != 0 || out == pts;
    let pass = within && idempotent;
    Ok((
        json!({
            "input_size": pts.len(), "depth": depth, "max_n": max_n, "growth_factor": k as u64,
            "size": out.len(), "bound": bound, "within_bound": within, "pass": pass,
            "points": out.iter().map(rational_to_string).collect::<Vec<_>>(),
        }),
        pass,
    ))
}

fn mellin(cfg: &RunConfig, phi: &str, s: f64) -> Outcome {
    let spec: PhiSpec = phi.parse().map_err(|e| usage("phi", phi, e))?;
    let t = tol(cfg, SERIES_TOL);
    let q = QuadratureSpec::half_line((t * 1e-2).max(1e-14));
    let r = rmt_report(&spec, s, &q)?;
    let pass = r.residual <= t;
    let mut v = to_value(&r);
    if let Value::Object(map) = &mut v {
        map.insert("tolerance".into(), json!(t));
        map.insert("pass".into(), json!(pass));
    }
    Ok((v, pass))
}

fn complex_trace(cfg: &RunConfig, z: &str, delta: &str, emit: bool) -> Outcome {
    let zc = parse_complex("z", z)?;
    let d = parse_q("delta", delta)?;
    let fs = build_set(&d, cfg)?;
    let (v, trace) = complex_reduce_trace(zc, &fs, cfg.node_budget)?;
    let g = gamma(zc)?;
    let err = rel_err(v, g);
    let t = tol(cfg, COMPLEX_TRACE_TOL);
    let mut map = serde_json::Map::new();
    map.insert("z".into(), complex_pair(zc));
    map.insert("delta".into(), json!(rational_to_string(&d)));
    map.insert("value".into(), complex_pair(v));
    map.insert("gamma".into(), complex_pair(g));
    map.insert("rel_error".into(), json!(err));
    map.insert("tolerance".into(), json!(t));
    let ok = trace_fields(&mut map, &trace, &in_complex_strip(&fs), emit);
    let pass = ok && err <= t;
    map.insert("pass".into(), json!(pass));
    Ok((Value::Object(map), pass))
}

fn dispatch(cli: &Cli) -> Outcome {
    let cfg = &cli.config;
    if let Some(t) = cfg.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(usage("tolerance", &t.to_string(), "must be a positive number"));
        }
    }
    match &cli.command {
        Command::Eval { z, z_flag } => {
            let s = z.as_deref().or(z_flag.as_deref()).unwrap_or_default();
            eval(parse_complex("z", s)?)
        }
        Command::Verify {
            identity,
            grid,
            samples,
            pole_exclusion,
        } => verify(cfg, identity, grid.as_deref(), *samples, *pole_exclusion),
        Command::Schlomilch(c) => schlomilch(cfg, c),
        Command::Landau(c) => landau(cfg, c),
        Command::Stern { m } => stern(*m),
        Command::Closure { points, depth, max_n } => closure(points, *depth, *max_n),
        Command::Mellin { phi, s } => mellin(cfg, phi, *s),
        Command::ComplexTrace { z, delta, emit_trace } => complex_trace(cfg, z, delta, *emit_trace),
    }
}

/// Output text and exit status for one invocation.
pub fn run(cli: &Cli) -> (String, u8) {
    match dispatch(cli) {
        Ok((report, pass)) => (render(&report, cli.config.format), if pass { 0 } else { 1 }),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            (String::new(), 2)
        }
        Err(Failure::Numeric(e)) => {
            let v = json!({"error": e.kind(), "detail": e.to_string()});
            (render(&v, cli.config.format), 1)
        }
    }
}
