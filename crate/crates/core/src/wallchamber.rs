//! King stability spaces, walls, rank-two chambers and piecewise-linear red paths.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::indec::{enumerate_indecomposables, NamedModule};
use crate::phase::{seesaw_holds, PhaseValue};
use crate::rational::{dot, pair, parse_q, primitive, qi, Q};
use crate::rep::{enumerate_submodules, DimensionVector, Representation};
use crate::stability::{king_semistable, StabilityFunction};
use crate::torsion::{torsion_class_at, ModuleSet};
use crate::universe::ModuleUniverse;

/// Largest ambient rank for which wall geometry is computed exactly.
pub const MAX_WALL_RANK: usize = 3;

/// `D(M) = {θ : <θ,[M]> = 0, <θ,[L]> <= 0 for every submodule L}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub normal: DimensionVector,
    pub halfspaces: Vec<DimensionVector>,
    pub ambient_rank: usize,
}

fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| qi(x)).collect()
}

fn pair_i(theta: &[i64], dims: &[usize]) -> i64 {
    theta.iter().zip(dims).map(|(t, &d)| t * d as i64).sum()
}

fn rank_of(vectors: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<Q>> = vectors.iter().map(|v| to_q(v)).collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c] / pivot[c];
                for k in 0..cols {
                    let sub = f * pivot[k];
                    rows[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl Cone {
    pub fn contains(&self, theta: &[Q]) -> bool {
        pair(theta, &self.normal).is_zero() && self.halfspaces.iter().all(|h| !pair(theta, h).is_positive())
    }

    fn contains_int(&self, theta: &[i64]) -> bool {
        pair_i(theta, &self.normal) == 0 && self.halfspaces.iter().all(|h| pair_i(theta, h) <= 0)
    }

    fn check_rank(&self) -> Result<()> {
        if self.ambient_rank > MAX_WALL_RANK {
            return Err(Error::RankUnsupported { rank: self.ambient_rank, max: MAX_WALL_RANK });
        }
        Ok(())
    }

    /// Integer basis of the hyperplane `<θ, normal> = 0`.
    fn hyperplane_basis(&self) -> Vec<Vec<i64>> {
        let m: Vec<i64> = self.normal.iter().map(|&x| x as i64).collect();
        match m.len() {
            1 => vec![],
            2 => vec![vec![m[1], -m[0]]],
            _ => {
                let cands = [vec![m[1], -m[0], 0], vec![m[2], 0, -m[0]], vec![0, m[2], -m[1]]];
                let nonzero: Vec<_> = cands.into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
                let mut basis = vec![nonzero[0].clone()];
                for v in &nonzero[1..] {
                    if rank_of(&[basis[0].clone(), v.clone()]) == 2 {
                        basis.push(v.clone());
                        break;
                    }
                }
                basis
            }
        }
    }

    /// Primitive integer generators whose conic hull is the cone (rank at most 3).
    pub fn generators(&self) -> Result<Vec<Vec<i64>>> {
        self.check_rank()?;
        let basis = self.hyperplane_basis();
        let embed = |c: &[i64]| -> Vec<i64> {
            let mut v = vec![0i64; self.ambient_rank];
            for (coef, b) in c.iter().zip(&basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += coef * y;
                }
            }
            v
        };
        let functionals: Vec<Vec<i64>> = self
            .halfspaces
            .iter()
            .map(|h| basis.iter().map(|b| pair_i(b, h)).collect::<Vec<i64>>())
            .filter(|l| l.iter().any(|&x| x != 0))
            .collect();
        let mut candidates: Vec<Vec<i64>> = Vec::new();
        match basis.len() {
            0 => {}
            1 => candidates.extend([vec![1], vec![-1]]),
            _ => {
                if functionals.is_empty() {
                    candidates.extend([vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]);
                }
                for l in &functionals {
                    candidates.extend([vec![-l[1], l[0]], vec![l[1], -l[0]], vec![l[0], l[1]], vec![-l[0], -l[1]]]);
                }
            }
        }
        let mut out: Vec<Vec<i64>> = Vec::new();
        for c in candidates {
            let v = embed(&c);
            if v.iter().all(|&x| x == 0) || !self.contains_int(&v) {
                continue;
            }
            let p = primitive(&to_q(&v));
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Dimension of the cone as a subset of `R^n`.
    pub fn dimension(&self) -> Result<usize> {
        Ok(rank_of(&self.generators()?))
    }

    pub fn has_codimension_one(&self) -> Result<bool> {
        Ok(self.dimension()? + 1 == self.ambient_rank)
    }

    pub fn is_subset_of(&self, other: &Cone) -> Result<bool> {
        Ok(self.generators()?.iter().all(|g| other.contains_int(g)))
    }

    pub fn same_set(&self, other: &Cone) -> Result<bool> {
        Ok(self.ambient_rank == other.ambient_rank && self.is_subset_of(other)? && other.is_subset_of(self)?)
    }
}

/// The stability space of `m`: normal `[M]` and one half-space per proper nonzero submodule class.
pub fn stability_space(m: &Representation) -> Result<Cone> {
    if m.is_zero() {
        return Err(Error::ZeroObject);
    }
    let mut halfspaces: Vec<DimensionVector> = Vec::new();
    for sub in enumerate_submodules(m)? {
        if sub.is_zero() || sub.is_whole() {
            continue;
        }
        let d = sub.dims();
        if !halfspaces.contains(&d) {
            halfspaces.push(d);
        }
    }
    halfspaces.sort();
    Ok(Cone { normal: m.dims().clone(), halfspaces, ambient_rank: m.dims().len() })
}

pub fn is_wall(m: &Representation) -> Result<bool> {
    stability_space(m)?.has_codimension_one()
}

/// A codimension-one stability space, shared by every listed module.
#[derive(Clone, Debug)]
pub struct Wall {
    pub cone: Cone,
    pub modules: Vec<NamedModule>,
    pub codimension_one: bool,
}

impl Wall {
    pub fn multiplicity(&self) -> usize {
        self.modules.len()
    }

    /// True for a whole hyperplane in rank two (as opposed to a half-line).
    pub fn is_full_line(&self) -> Result<bool> {
        let g = self.cone.generators()?;
        Ok(g.len() == 2 && g[0].iter().zip(&g[1]).all(|(a, b)| *a == -*b))
    }
}

/// Walls of the indecomposables up to `bound`, merged when their cones coincide.
pub fn enumerate_walls(algebra: &std::sync::Arc<AlgebraSpec>, bound: &[usize]) -> Result<Vec<Wall>> {
    let n = algebra.vertex_count();
    if n > MAX_WALL_RANK {
        return Err(Error::RankUnsupported { rank: n, max: MAX_WALL_RANK });
    }
    let mut walls: Vec<Wall> = Vec::new();
    for m in enumerate_indecomposables(algebra, bound)? {
        let cone = stability_space(&m.rep)?;
        if !cone.has_codimension_one()? {
            continue;
        }
        let mut merged = false;
        for w in walls.iter_mut() {
            if w.cone.same_set(&cone)? {
                w.modules.push(m.clone());
                merged = true;
                break;
            }
        }
        if !merged {
            walls.push(Wall { cone, modules: vec![m], codimension_one: true });
        }
    }
    Ok(walls)
}

/// An open sector of the plane between two consecutive wall rays, counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    /// `None` when there are no walls and the chamber is the whole plane.
    pub bounds: Option<(Vec<i64>, Vec<i64>)>,
}

fn half(v: &[i64]) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

fn cross(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Exact counterclockwise order of directions starting from the positive x-axis.
pub fn angle_cmp(a: &[i64], b: &[i64]) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross(a, b)))
}

impl Chamber {
    /// A direction strictly inside the sector.
    pub fn interior_direction(&self) -> Vec<i64> {
        let Some((a, b)) = &self.bounds else { return vec![1, 0] };
        let c = cross(a, b);
        if c > 0 {
            vec![a[0] + b[0], a[1] + b[1]]
        } else if c < 0 {
            vec![-(a[0] + b[0]), -(a[1] + b[1])]
        } else if a == b {
            vec![-a[0], -a[1]]
        } else {
            vec![-a[1], a[0]]
        }
    }
}

/// Wall rays of a rank-two structure, sorted by angle.
pub fn wall_rays(walls: &[Wall]) -> Result<Vec<Vec<i64>>> {
    let mut rays: Vec<Vec<i64>> = Vec::new();
    for w in walls {
        if w.cone.ambient_rank != 2 {
            return Err(Error::RankUnsupported { rank: w.cone.ambient_rank, max: 2 });
        }
        for g in w.cone.generators()? {
            if !rays.contains(&g) {
                rays.push(g);
            }
        }
    }
    rays.sort_by(|a, b| angle_cmp(a, b));
    Ok(rays)
}

pub fn chambers_rank2(walls: &[Wall]) -> Result<Vec<Chamber>> {
    let rays = wall_rays(walls)?;
    if rays.is_empty() {
        return Ok(vec![Chamber { bounds: None }]);
    }
    Ok((0..rays.len())
        .map(|i| Chamber { bounds: Some((rays[i].clone(), rays[(i + 1) % rays.len()].clone())) })
        .collect())
}

/// A piecewise-linear path from `(1,...,1)` to `(-1,...,-1)` with rational breakpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedPath {
    points: Vec<(Q, Vec<Q>)>,
}

/// Zeros of `t -> <γ(t),[M]>` on `[0,1]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZeroSet {
    pub points: Vec<Q>,
    pub intervals: Vec<(Q, Q)>,
}

impl RedPath {
    pub fn new(points: Vec<(Q, Vec<Q>)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two breakpoints".into()));
        }
        let n = points[0].1.len();
        if n == 0 || points.iter().any(|(_, v)| v.len() != n) {
            return Err(Error::InvalidPath("breakpoints must share one positive dimension".into()));
        }
        if !points[0].0.is_zero() || points.last().unwrap().0 != qi(1) {
            return Err(Error::InvalidPath("parameters must run from 0 to 1".into()));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidPath("parameters must be strictly increasing".into()));
        }
        if points[0].1.iter().any(|x| *x != qi(1)) || points.last().unwrap().1.iter().any(|x| *x != qi(-1)) {
            return Err(Error::InvalidPath("path must start at (1,...,1) and end at (-1,...,-1)".into()));
        }
        Ok(RedPath { points })
    }

    /// Breakpoints at equally spaced parameters.
    pub fn through(vertices: Vec<Vec<Q>>) -> Result<Self> {
        let k = vertices.len() as i64 - 1;
        if k < 1 {
            return Err(Error::InvalidPath("a path needs at least two breakpoints".into()));
        }
        RedPath::new(vertices.into_iter().enumerate().map(|(i, v)| (Q::new(i as i64, k), v)).collect())
    }

    /// The straight path `γ(t) = (1-2t)(1,...,1)`.
    pub fn diagonal(n: usize) -> Self {
        RedPath { points: vec![(qi(0), vec![qi(1); n]), (qi(1), vec![qi(-1); n])] }
    }

    /// Parse lines `t x_1 ... x_n`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut row = Vec::new();
            let mut col = 1;
            for s in line.split_whitespace() {
                col = s.as_ptr() as usize - line.as_ptr() as usize + 1;
                row.push(parse_q(s).ok_or_else(|| Error::parse(i + 1, col, format!("`{s}` is not a rational number")))?);
            }
            if row.is_empty() {
                continue;
            }
            if row.len() < 2 {
                return Err(Error::parse(i + 1, col, "expected a parameter followed by coordinates"));
            }
            let t = row.remove(0);
            points.push((t, row));
        }
        RedPath::new(points)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (t, v) in &self.points {
            let coords: Vec<String> = v.iter().map(crate::rational::fmt_q).collect();
            out.push_str(&format!("{} {}\n", crate::rational::fmt_q(t), coords.join(" ")));
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.points[0].1.len()
    }

    pub fn breakpoints(&self) -> &[(Q, Vec<Q>)] {
        &self.points
    }

    pub fn gamma(&self, t: Q) -> Vec<Q> {
        let t = t.max(qi(0)).min(qi(1));
        for w in self.points.windows(2) {
            let ((t0, a), (t1, b)) = (&w[0], &w[1]);
            if t <= *t1 {
                let s = (t - t0) / (t1 - t0);
                return a.iter().zip(b).map(|(x, y)| *x + s * (*y - *x)).collect();
            }
        }
        self.points.last().unwrap().1.clone()
    }

    /// Direction vectors of the segments whose closure contains `t`.
    pub fn directions_at(&self, t: Q) -> Vec<Vec<Q>> {
        self.points
            .windows(2)
            .filter(|w| w[0].0 <= t && t <= w[1].0)
            .map(|w| w[1].1.iter().zip(&w[0].1).map(|(b, a)| *b - *a).collect())
            .collect()
    }

    pub fn zeros(&self, dims: &[usize]) -> ZeroSet {
        let mut z = ZeroSet::default();
        for w in self.points.windows(2) {
            let ((t0, a), (t1, b)) = (&w[0], &w[1]);
            let (va, vb) = (pair(a, dims), pair(b, dims));
            if va.is_zero() && vb.is_zero() {
                z.intervals.push((*t0, *t1));
                continue;
            }
            let root = if va.is_zero() {
                Some(*t0)
            } else if vb.is_zero() {
                Some(*t1)
            } else if va.signum() != vb.signum() {
                Some(*t0 + (*t1 - *t0) * va / (va - vb))
            } else {
                None
            };
            if let Some(r) = root {
                if !z.points.contains(&r) {
                    z.points.push(r);
                }
            }
        }
        z.points.retain(|p| !z.intervals.iter().any(|(a, b)| a <= p && p <= b));
        z.points.sort();
        z
    }

    /// The unique `t_M` with `<γ(t_M),[M]> = 0`.
    pub fn crossing_time(&self, dims: &[usize]) -> Result<Q> {
        let z = self.zeros(dims);
        if z.intervals.is_empty() && z.points.len() == 1 {
            Ok(z.points[0])
        } else {
            Err(Error::InvalidPath(format!(
                "pairing with {dims:?} vanishes at {} points and on {} intervals",
                z.points.len(),
                z.intervals.len()
            )))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Interval(Q, Q),
    Zeros(Vec<Q>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub class: usize,
    pub kind: ViolationKind,
}

/// Modules whose hyperplanes the path meets at one parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub t: Q,
    /// Indecomposables with `t_M = t`.
    pub modules: Vec<usize>,
    /// Those among them that are `γ(t)`-semistable, i.e. whose wall is actually crossed.
    pub walls: Vec<usize>,
    pub genuine: bool,
    /// The dimension vectors of all crossed walls are proportional.
    pub proportional: bool,
    /// Every adjacent segment direction pairs nonzero with each crossed class.
    pub transversal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGenericStatus {
    /// Both endpoints pair strictly positively / negatively with every class.
    pub endpoints_in_chambers: bool,
    pub proportional_at_multi_wall_points: bool,
    pub transversal: bool,
}

#[derive(Clone, Debug)]
pub struct PathReport {
    pub valid: bool,
    /// `t_M` for every class of the universe with a unique crossing.
    pub phases: Vec<(usize, Q)>,
    pub violations: Vec<Violation>,
    pub crossings: Vec<Crossing>,
    pub dgeneric: DGenericStatus,
}

impl PathReport {
    pub fn phase_of(&self, class: usize) -> Option<Q> {
        self.phases.iter().find(|(c, _)| *c == class).map(|(_, t)| *t)
    }
}

fn proportional(a: &[usize], b: &[usize]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| a[i] * b[j] == a[j] * b[i]))
}

pub fn validate_red_path(path: &RedPath, u: &ModuleUniverse) -> Result<PathReport> {
    let n = u.algebra().vertex_count();
    if path.rank() != n {
        return Err(Error::InvalidPath(format!("path lives in R^{} but the quiver has {n} vertices", path.rank())));
    }
    let mut phases = Vec::new();
    let mut violations = Vec::new();
    let mut endpoints = true;
    let start = &path.points[0].1;
    let end = &path.points.last().unwrap().1;
    for (c, class) in u.classes().iter().enumerate() {
        if !pair(start, class.dims()).is_positive() || !pair(end, class.dims()).is_negative() {
            endpoints = false;
        }
        let z = path.zeros(class.dims());
        if let Some(&(a, b)) = z.intervals.first() {
            violations.push(Violation { class: c, kind: ViolationKind::Interval(a, b) });
        } else if z.points.len() != 1 {
            violations.push(Violation { class: c, kind: ViolationKind::Zeros(z.points) });
        } else {
            phases.push((c, z.points[0]));
        }
    }
    let mut by_t: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    for i in 0..u.indecomposables().len() {
        let c = u.indecomposable_class(i);
        if let Some(&(_, t)) = phases.iter().find(|(cc, _)| *cc == c) {
            by_t.entry(t).or_default().push(i);
        }
    }
    let mut crossings = Vec::new();
    for (t, modules) in by_t {
        let theta = path.gamma(t);
        let mut walls = Vec::new();
        for &i in &modules {
            if king_semistable(&theta, &u.indecomposables()[i].rep)?.is_semistable() {
                walls.push(i);
            }
        }
        let dims = |i: usize| u.indecomposables()[i].rep.dims().clone();
        let proportional_ok = walls.iter().all(|&a| walls.iter().all(|&b| proportional(&dims(a), &dims(b))));
        let directions = path.directions_at(t);
        let transversal =
            walls.iter().all(|&i| directions.iter().all(|d| !pair(d, &dims(i)).is_zero()));
        crossings.push(Crossing {
            t,
            genuine: !walls.is_empty(),
            modules,
            walls,
            proportional: proportional_ok,
            transversal,
        });
    }
    let dgeneric = DGenericStatus {
        endpoints_in_chambers: endpoints,
        proportional_at_multi_wall_points: crossings.iter().all(|c| c.proportional),
        transversal: crossings.iter().all(|c| c.transversal),
    };
    Ok(PathReport { valid: violations.is_empty(), phases, violations, crossings, dgeneric })
}

/// The stability function `M -> t_M`, after validating the path and the see-saw property on `u`.
pub fn induced_stability(path: &RedPath, u: &ModuleUniverse) -> Result<StabilityFunction> {
    let report = validate_red_path(path, u)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidPath(format!(
            "pairing with {} does not vanish exactly once ({:?})",
            u.class(v.class).name,
            v.kind
        )));
    }
    let sf = StabilityFunction::PathInduced(path.clone());
    let phases = sf.class_phases(u)?;
    for (m, seq) in u.sequences()?.iter().enumerate() {
        for &(l, n) in &seq.pairs {
            if !seesaw_holds(phases[l], phases[m], phases[n]) {
                return Err(Error::InternalAssertion(format!(
                    "path-induced phases violate the see-saw property on {}",
                    u.class(m).name
                )));
            }
        }
    }
    Ok(sf)
}

/// `T_θ`: indecomposables all of whose nonzero quotients pair nonnegatively with `θ`.
pub fn bridgeland_torsion(theta: &[Q], u: &ModuleUniverse) -> Result<ModuleSet> {
    let mut members = Vec::new();
    for i in 0..u.indecomposables().len() {
        let c = u.indecomposable_class(i);
        if u.quotient_classes(c)?.iter().all(|&q| !pair(theta, u.class(q).dims()).is_negative()) {
            members.push(i);
        }
    }
    Ok(ModuleSet::from_indices(members))
}

#[derive(Clone, Debug)]
pub struct RedTorsionCheck {
    pub t: Q,
    pub from_phase: ModuleSet,
    pub from_theta: ModuleSet,
    pub equal: bool,
    /// First indecomposable in exactly one of the two classes.
    pub first_difference: Option<usize>,
}

/// Compare the torsion class of the induced phase at `t` with that of the vector `γ(t)`.
pub fn verify_redtorsion(path: &RedPath, t: Q, u: &ModuleUniverse) -> Result<RedTorsionCheck> {
    let sf = induced_stability(path, u)?;
    let from_phase = torsion_class_at(&sf, PhaseValue::finite(t), u)?;
    let from_theta = bridgeland_torsion(&path.gamma(t), u)?;
    let first_difference =
        (0..u.indecomposables().len()).find(|&i| from_phase.contains(i) != from_theta.contains(i));
    Ok(RedTorsionCheck { t, equal: first_difference.is_none(), from_phase, from_theta, first_difference })
}

/// Pairing of an integer direction with a rational vector, used by renderers.
pub fn direction_pairing(direction: &[i64], v: &[Q]) -> Q {
    dot(&to_q(direction), v)
}
