//! Cartesian parameter sweeps over a registered command.

use crate::commands::Command;
use crate::params::{Params, KEYS};
use crate::CliError;
use k3sv::rational::{parse_rational, to_string};
use k3sv::Engine;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<String>,
}

/// Parse `name=a..b`, `name=a..b:step` (inclusive integer ranges) or
/// `name=v1,v2,...` (explicit values, rationals allowed).
pub fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let (name, body) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--grid {spec:?}: expected NAME=VALUES")))?;
    if !KEYS.contains(&name) {
        return Err(CliError::Usage(format!("--grid: unknown parameter {name:?}")));
    }
    let values = if let Some((lo, rest)) = body.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (hi, step),
            None => (rest, "1"),
        };
        let int = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Usage(format!("--grid {spec:?}: {s:?} is not an integer")))
        };
        let (lo, hi, step) = (int(lo)?, int(hi)?, int(step)?);
        if step <= 0 {
            return Err(CliError::Usage(format!("--grid {spec:?}: step must be positive")));
        }
        (lo..=hi).step_by(step as usize).map(|k| k.to_string()).collect()
    } else if body.is_empty() {
        Vec::new()
    } else {
        body.split(',')
            .map(|v| {
                parse_rational(v.trim())
                    .map(|q| to_string(&q))
                    .map_err(|e| CliError::Usage(format!("--grid {spec:?}: {e}")))
            })
            .collect::<Result<_, _>>()?
    };
    Ok(Axis { name: name.to_string(), values })
}

/// Grid points in row-major order (last axis varies fastest). No axes, or
/// any empty axis, gives no points.
pub fn points(axes: &[Axis]) -> Vec<Vec<(String, String)>> {
    if axes.is_empty() {
        return Vec::new();
    }
    let mut pts: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for axis in axes {
        pts = pts
            .into_iter()
            .flat_map(|pt| {
                axis.values.iter().map(move |v| {
                    let mut next = pt.clone();
                    next.push((axis.name.clone(), v.clone()));
                    next
                })
            })
            .collect();
    }
    pts
}

/// Evaluate `cmd` at every grid point on top of `base`, using at most `jobs`
/// threads. The first input error (in grid order) aborts the sweep; failed
/// verifications are collected in the report.
pub fn sweep(
    cmd: &dyn Command,
    engine: &Engine,
    base: &Params,
    axes: &[Axis],
    jobs: usize,
) -> Result<(Value, bool), CliError> {
    let pts = points(axes);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
    let results: Vec<_> = pool.install(|| {
        pts.par_iter()
            .map(|pt| {
                let mut p = base.clone();
                for (k, v) in pt {
                    p.set(k, v.clone())?;
                }
                cmd.run(engine, &p)
            })
            .collect()
    });

    let mut entries = Vec::with_capacity(pts.len());
    let mut failures = Vec::new();
    for (i, (pt, res)) in pts.iter().zip(results).enumerate() {
        let out = res?;
        let params: Map<String, Value> = pt
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        if !out.verified {
            failures.push(json!(i));
        }
        entries.push(json!({ "params": params, "ok": out.verified, "result": out.value }));
    }
    let all_ok = failures.is_empty();
    let report = json!({
        "command": cmd.name(),
        "total": entries.len(),
        "passed": entries.len() - failures.len(),
        "failures": failures,
        "points": entries,
    });
    Ok((report, all_ok))
}
