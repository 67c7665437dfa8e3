use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use quiver_stability::phase::PhaseValue;
use quiver_stability::rational::{pair, q, Q};
use quiver_stability::stability::{hn_filtration, is_semistable, king_semistable, StabilityFunction};
use quiver_stability::torsion::{
    chain_of_torsion_classes, is_discrete, is_torsion_class, torsion_characterizations, torsion_free_at,
    verify_mgs, verify_torsion_pair, ModuleSet, StepCertificate, TorsionChain,
};
use quiver_stability::universe::ModuleUniverse;
use quiver_stability::wallchamber::{bridgeland_torsion, Chamber, PathReport, ViolationKind, Wall};
use quiver_stability::indec::NamedModule;
use quiver_stability::Result;

pub fn rational(x: &Q) -> Value {
    Value::String(x.to_string())
}

fn rationals(v: &[Q]) -> Value {
    v.iter().map(rational).collect()
}

fn phase(p: &PhaseValue) -> Value {
    Value::String(p.to_string())
}

fn names(set: &ModuleSet, u: &ModuleUniverse) -> Value {
    json!(set.names(u))
}

pub fn indecomposables(modules: &[NamedModule], bound: &[usize]) -> Value {
    let list: Vec<Value> = modules.iter().map(|m| json!({"name": m.name, "dims": m.rep.dims()})).collect();
    json!({"bound": bound, "count": modules.len(), "modules": list})
}

/// King's test for the chosen classes (all indecomposables by default).
pub fn king(theta: &[Q], classes: &[usize], u: &ModuleUniverse) -> Result<Value> {
    let mut list = Vec::new();
    for &c in classes {
        let class = u.class(c);
        let status = king_semistable(theta, &class.rep)?;
        list.push(json!({
            "name": class.name,
            "dims": class.dims(),
            "pairing": rational(&pair(theta, class.dims())),
            "status": status.label(),
        }));
    }
    Ok(json!({"theta": rationals(theta), "modules": list}))
}

pub fn hn(sf: &StabilityFunction, classes: &[usize], u: &ModuleUniverse) -> Result<Value> {
    let mut list = Vec::new();
    for &c in classes {
        let class = u.class(c);
        let filtration = hn_filtration(sf, &class.rep)?;
        let mut factors = Vec::new();
        for (f, p) in filtration.factors.iter().zip(&filtration.phases) {
            factors.push(json!({"class": u.class(u.classify(f)?).name, "dims": f.dims(), "phase": phase(p)}));
        }
        list.push(json!({
            "name": class.name,
            "phase": phase(&sf.phase(&class.rep)?),
            "semistable": is_semistable(sf, &class.rep)?,
            "factors": factors,
        }));
    }
    Ok(json!({"modules": list}))
}

pub fn torsion(sf: &StabilityFunction, p: PhaseValue, u: &ModuleUniverse) -> Result<Value> {
    let chars = torsion_characterizations(sf, p, u)?;
    let t = &chars.by_quotient_phases;
    let f = torsion_free_at(sf, p, u)?;
    Ok(json!({
        "phase": phase(&p),
        "torsion": names(t, u),
        "torsion_free": names(&f, u),
        "is_torsion_class": is_torsion_class(t, u)?,
        "is_torsion_pair": verify_torsion_pair(t, &f, u)?.is_none(),
        "characterizations_agree": chars.agree(),
    }))
}

fn chain_fields(chain: &TorsionChain, u: &ModuleUniverse) -> (Value, Value) {
    let phases = chain.entries.iter().map(|(p, _)| phase(p)).collect();
    let classes = chain.entries.iter().map(|(_, s)| names(s, u)).collect();
    (phases, classes)
}

pub fn chain(sf: &StabilityFunction, u: &ModuleUniverse) -> Result<Value> {
    let chain = chain_of_torsion_classes(sf, u)?;
    let (phases, classes) = chain_fields(&chain, u);
    Ok(json!({"phases": phases, "classes": classes, "steps": chain.steps(), "discrete": is_discrete(sf, u)?}))
}

fn certificate(c: &StepCertificate, u: &ModuleUniverse) -> Value {
    let name = |i: usize| u.indecomposables()[i].name.clone();
    match c {
        StepCertificate::Maximal { phase: p, stable } => {
            json!({"kind": "maximal", "phase": phase(p), "stables": [name(*stable)]})
        }
        StepCertificate::TwoStables { phase: p, first, second } => {
            json!({"kind": "two_stables", "phase": phase(p), "stables": [name(*first), name(*second)]})
        }
        StepCertificate::Intermediate { phase: p, members } => json!({
            "kind": "intermediate",
            "phase": p.as_ref().map(phase),
            "members": names(members, u),
        }),
        StepCertificate::NoStable { phase: p } => json!({"kind": "no_stable", "phase": phase(p)}),
    }
}

pub fn mgs(sf: &StabilityFunction, u: &ModuleUniverse) -> Result<Value> {
    let chain = chain_of_torsion_classes(sf, u)?;
    let report = verify_mgs(&chain, sf, u)?;
    let (phases, classes) = chain_fields(&report.chain, u);
    Ok(json!({
        "phases": phases,
        "classes": classes,
        "steps": report.chain.steps(),
        "mgs": report.verdict,
        "criterion": report.criterion_verdict,
        "oracle": report.oracle_verdict,
        "oracle_agrees": report.oracle_agrees,
        "endpoints": report.endpoints_ok,
        "discrete": report.discrete,
        "exact": u.is_exact(),
        "certificates": report.certificates.iter().map(|c| certificate(c, u)).collect::<Vec<_>>(),
    }))
}

pub fn walls(walls: &[Wall], rank: usize, bound: &[usize]) -> Result<Value> {
    let mut list = Vec::new();
    for w in walls {
        let full_line = if rank == 2 { Value::Bool(w.is_full_line()?) } else { Value::Null };
        list.push(json!({
            "modules": w.modules.iter().map(|m| m.name.clone()).collect::<Vec<_>>(),
            "dims": w.modules.iter().map(|m| m.rep.dims().clone()).collect::<Vec<_>>(),
            "multiplicity": w.multiplicity(),
            "generators": w.cone.generators()?,
            "dimension": w.cone.dimension()?,
            "full_line": full_line,
        }));
    }
    Ok(json!({"rank": rank, "bound": bound, "walls": list}))
}

pub fn chambers_exact(chambers: &[Chamber]) -> Value {
    let list: Vec<Value> = chambers
        .iter()
        .map(|c| {
            let (from, to) = match &c.bounds {
                Some((a, b)) => (json!(a), json!(b)),
                None => (Value::Null, Value::Null),
            };
            json!({"from": from, "to": to, "interior": c.interior_direction()})
        })
        .collect();
    json!({"exact": true, "count": list.len(), "chambers": list})
}

/// Sample points on the affine slices `θ_3 = ±1` of a rank-three structure and group those off
/// every wall by their torsion class. Chambers that no sample hits are missed.
pub fn chambers_sampled(u: &ModuleUniverse, seed: u64, samples: usize) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: BTreeMap<ModuleSet, (Vec<Q>, usize)> = BTreeMap::new();
    let mut on_walls = 0;
    for k in 0..samples {
        let last = if k % 2 == 0 { q(1, 1) } else { q(-1, 1) };
        let theta = vec![q(rng.gen_range(-200..=200), 100), q(rng.gen_range(-200..=200), 100), last];
        let mut on_wall = false;
        for m in u.indecomposables() {
            if pair(&theta, m.rep.dims()) == q(0, 1) && king_semistable(&theta, &m.rep)?.is_semistable() {
                on_wall = true;
                break;
            }
        }
        if on_wall {
            on_walls += 1;
            continue;
        }
        let t = bridgeland_torsion(&theta, u)?;
        found.entry(t).or_insert_with(|| (theta, 0)).1 += 1;
    }
    let list: Vec<Value> = found
        .iter()
        .map(|(t, (theta, hits))| json!({"torsion": names(t, u), "sample": rationals(theta), "hits": hits}))
        .collect();
    Ok(json!({
        "exact": false,
        "method": "sampled slices theta_3 = 1 and theta_3 = -1 over [-2,2]^2",
        "seed": seed,
        "samples": samples,
        "samples_on_walls": on_walls,
        "count": list.len(),
        "chambers": list,
    }))
}

pub fn path(report: &PathReport, u: &ModuleUniverse) -> Value {
    let ind_names = |v: &[usize]| -> Vec<String> { v.iter().map(|&i| u.indecomposables()[i].name.clone()).collect() };
    let phases: BTreeMap<String, Value> =
        report.phases.iter().map(|(c, t)| (u.class(*c).name.clone(), rational(t))).collect();
    let crossings: Vec<Value> = report
        .crossings
        .iter()
        .map(|c| {
            json!({
                "t": rational(&c.t),
                "modules": ind_names(&c.modules),
                "walls": ind_names(&c.walls),
                "genuine": c.genuine,
                "proportional": c.proportional,
                "transversal": c.transversal,
            })
        })
        .collect();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| match &v.kind {
            ViolationKind::Interval(a, b) => {
                json!({"class": u.class(v.class).name, "interval": [rational(a), rational(b)], "zeros": []})
            }
            ViolationKind::Zeros(z) => json!({"class": u.class(v.class).name, "interval": null, "zeros": rationals(z)}),
        })
        .collect();
    json!({
        "valid": report.valid,
        "phases": phases,
        "crossings": crossings,
        "violations": violations,
        "dgeneric": {
            "endpoints_in_chambers": report.dgeneric.endpoints_in_chambers,
            "proportional_at_multi_wall_points": report.dgeneric.proportional_at_multi_wall_points,
            "transversal": report.dgeneric.transversal,
        },
    })
}
