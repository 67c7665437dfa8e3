use std::fs;
use std::path::Path;
use std::sync::Arc;

use quiver_stability::algebra::{parse_algebra, AlgebraSpec};
use quiver_stability::catalog::{builtin, kronecker_slope, shipped_path, ProjectivePoint, StarPlacement, StarredSlope};
use quiver_stability::phase::PhaseValue;
use quiver_stability::rational::{parse_q_list, Q};
use quiver_stability::stability::StabilityFunction;
use quiver_stability::universe::ModuleUniverse;
use quiver_stability::wallchamber::{induced_stability, RedPath};
use quiver_stability::Error;

use crate::CliError;

pub fn load_algebra(source: &str, prime: Option<u32>) -> Result<Arc<AlgebraSpec>, CliError> {
    if source.starts_with("builtin:") {
        return Ok(Arc::new(builtin(source, prime)?));
    }
    let text = read_input(source)?;
    let alg = parse_algebra(&text)?;
    if let Some(p) = prime {
        if p != alg.field.p() {
            return Err(CliError::Usage(format!(
                "--prime {p} conflicts with `field p={}` in {source}",
                alg.field.p()
            )));
        }
    }
    Ok(Arc::new(alg))
}

fn read_input(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
}

/// Componentwise bound; every vertex defaults to 1.
pub fn parse_bound(text: Option<&str>, alg: &AlgebraSpec) -> Result<Vec<usize>, CliError> {
    let n = alg.vertex_count();
    let Some(text) = text else { return Ok(vec![1; n]) };
    let bound: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().ok().filter(|&d| d > 0))
        .collect::<Option<_>>()
        .ok_or_else(|| CliError::Usage(format!("--bound expects positive integers `d1,d2,...`, got `{text}`")))?;
    if bound.len() != n {
        return Err(CliError::Usage(format!("--bound has {} entries but the algebra has {n} vertices", bound.len())));
    }
    Ok(bound)
}

pub fn parse_vector(flag: &str, text: &str, n: usize) -> Result<Vec<Q>, CliError> {
    let v = parse_q_list(text)
        .ok_or_else(|| CliError::Usage(format!("{flag} expects rationals `a,b,...`, got `{text}`")))?;
    if v.len() != n {
        return Err(CliError::Usage(format!("{flag} has {} entries but the algebra has {n} vertices", v.len())));
    }
    Ok(v)
}

pub fn parse_phase(text: &str) -> Result<PhaseValue, CliError> {
    text.parse().map_err(|_| CliError::Usage(format!("`{text}` is not a phase value")))
}

/// A path file if it exists, otherwise a shipped path of that name.
pub fn load_path(source: &str) -> Result<RedPath, CliError> {
    if Path::new(source).is_file() {
        return Ok(RedPath::parse(&read_input(source)?)?);
    }
    match shipped_path(source) {
        Some(path) => Ok(path?),
        None => Err(CliError::Io(format!("{source}: no such file or shipped path"))),
    }
}

/// Parse a `--stability` source:
///
/// - `kronecker-slope`
/// - `slope:NUM:DEN` and `charge:A:B` with comma-separated rational vectors
/// - `starred:POINTS[:higher][:below]` (validated) or `starred-unchecked:...`
/// - `path:SOURCE`
/// - `table:FILE` with one `CLASS PHASE` pair per line
pub fn parse_stability(spec: &str, u: &Arc<ModuleUniverse>) -> Result<StabilityFunction, CliError> {
    let n = u.algebra().vertex_count();
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let two_vectors = |flag: &str| -> Result<(Vec<Q>, Vec<Q>), CliError> {
        let (a, b) = rest
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("`{flag}` expects `{flag}:A:B`, got `{spec}`")))?;
        Ok((parse_vector(flag, a, n)?, parse_vector(flag, b, n)?))
    };
    let sf = match kind {
        "kronecker-slope" => kronecker_slope(),
        "slope" => {
            let (num, den) = two_vectors("slope")?;
            StabilityFunction::slope(num, den)?
        }
        "charge" => {
            let (a, b) = two_vectors("charge")?;
            StabilityFunction::linear_charge(a, b)?
        }
        "starred" | "starred-unchecked" => {
            let starred = parse_starred(rest, spec)?;
            if kind == "starred" {
                starred.build(u.clone())?
            } else {
                starred.build_unchecked(u.clone())?
            }
        }
        "path" => induced_stability(&load_path(rest)?, u)?,
        "table" => StabilityFunction::table(u.clone(), &parse_table(&read_input(rest)?, u)?)?,
        _ => return Err(CliError::Usage(format!("unknown stability source `{spec}`"))),
    };
    if sf.rank() != n {
        return Err(CliError::Usage(format!("stability `{spec}` has rank {} but the algebra has {n} vertices", sf.rank())));
    }
    Ok(sf)
}

fn parse_starred(rest: &str, spec: &str) -> Result<StarredSlope, CliError> {
    let mut parts = rest.split(':');
    let points = parts
        .next()
        .filter(|s| !s.is_empty())
        .map(|s| s.split(',').map(|p| ProjectivePoint::parse(p.trim())).collect::<Option<Vec<_>>>())
        .unwrap_or(Some(vec![]))
        .ok_or_else(|| CliError::Usage(format!("bad point list in `{spec}`")))?;
    let mut starred = StarredSlope::new(points);
    for flag in parts {
        match flag {
            "higher" => starred.higher_degree_in_s = true,
            "below" => starred.placement = StarPlacement::Below,
            _ => return Err(CliError::Usage(format!("unknown starred option `{flag}` in `{spec}`"))),
        }
    }
    Ok(starred)
}

fn parse_table(text: &str, u: &ModuleUniverse) -> Result<Vec<(usize, PhaseValue)>, CliError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut tokens = line.split_whitespace();
        let Some(name) = tokens.next() else { continue };
        let column = |tok: &str| tok.as_ptr() as usize - raw.as_ptr() as usize + 1;
        let parse_err = |tok: &str, message: String| Error::Parse { line: idx + 1, column: column(tok), message };
        let class = u.class_by_name(name).ok_or_else(|| parse_err(name, format!("unknown class `{name}`")))?;
        let phase_tok = tokens.next().ok_or_else(|| parse_err(name, "missing phase".into()))?;
        let phase = phase_tok.parse().map_err(|_| parse_err(phase_tok, format!("bad phase `{phase_tok}`")))?;
        if let Some(extra) = tokens.next() {
            return Err(parse_err(extra, format!("unexpected `{extra}`")).into());
        }
        out.push((class, phase));
    }
    Ok(out)
}
