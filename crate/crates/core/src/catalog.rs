//! Built-in algebras and closed-form lists of indecomposables.

use std::sync::Arc;

use crate::algebra::{AlgebraSpec, Arrow, QuiverSpec, Shape};
use crate::error::{Error, Result};
use crate::field::{Matrix, PrimeField};
use crate::indec::{fits, NamedModule};
use crate::phase::PhaseValue;
use crate::rational::{qi, Q};
use crate::rep::Representation;
use crate::stability::StabilityFunction;
use crate::universe::ModuleUniverse;
use crate::wallchamber::RedPath;

/// Largest `n` accepted for linear `A_n` catalogs.
pub const MAX_TYPE_A_RANK: usize = 8;

/// Look up a built-in algebra: `A2`, `A3`, `A<n>`, `A<n>:<orientation>` or `kronecker`,
/// optionally prefixed with `builtin:`. The field defaults to `F_2`.
pub fn builtin(id: &str, p: Option<u32>) -> Result<AlgebraSpec> {
    let field = PrimeField::new(p.unwrap_or(2))?;
    let key = id.strip_prefix("builtin:").unwrap_or(id);
    if key.eq_ignore_ascii_case("kronecker") {
        let arrows = vec![
            Arrow { name: "a".into(), source: 0, target: 1 },
            Arrow { name: "b".into(), source: 0, target: 1 },
        ];
        return AlgebraSpec::new(QuiverSpec { vertex_count: 2, arrows }, vec![], field);
    }
    let unknown = || Error::UnknownBuiltin(id.to_string());
    let rest = key.strip_prefix('A').or_else(|| key.strip_prefix('a')).ok_or_else(unknown)?;
    let (n, orientation) = match rest.split_once(':') {
        Some((n, o)) => (n, Some(o)),
        None => (rest, None),
    };
    let n: usize = n.parse().map_err(|_| unknown())?;
    if n == 0 || n > MAX_TYPE_A_RANK {
        return Err(unknown());
    }
    let orientation = orientation.map(str::to_string).unwrap_or_else(|| "r".repeat(n - 1));
    linear_quiver(n, &orientation, field).ok_or_else(unknown)
}

fn linear_quiver(n: usize, orientation: &str, field: PrimeField) -> Option<AlgebraSpec> {
    if orientation.len() != n - 1 {
        return None;
    }
    let mut arrows = Vec::new();
    for (i, ch) in orientation.chars().enumerate() {
        let name = ((b'a' + i as u8) as char).to_string();
        let (source, target) = match ch {
            'r' => (i, i + 1),
            'l' => (i + 1, i),
            _ => return None,
        };
        arrows.push(Arrow { name, source, target });
    }
    AlgebraSpec::new(QuiverSpec { vertex_count: n, arrows }, vec![], field).ok()
}

/// Interval modules of linear `A_n`, one per `1 <= i <= j <= n`.
pub fn interval_modules(algebra: &Arc<AlgebraSpec>, orientation: &str) -> Vec<NamedModule> {
    let n = algebra.vertex_count();
    debug_assert_eq!(orientation.len() + 1, n);
    let mut out = Vec::new();
    for lo in 0..n {
        for hi in lo..n {
            let dims: Vec<usize> = (0..n).map(|v| usize::from(lo <= v && v <= hi)).collect();
            let matrices = algebra
                .arrows()
                .iter()
                .map(|a| {
                    let (r, c) = (dims[a.target], dims[a.source]);
                    if r == 1 && c == 1 {
                        Matrix::identity(1)
                    } else {
                        Matrix::zeros(r, c)
                    }
                })
                .collect();
            let rep = Representation::new(algebra.clone(), dims.clone(), matrices)
                .expect("interval modules satisfy the empty relation set");
            let support: Vec<bool> = dims.iter().map(|&d| d == 1).collect();
            let name = if lo == hi {
                format!("S{}", lo + 1)
            } else if let Some(v) = (0..n).find(|&v| algebra.quiver.reachable_from(v) == support) {
                format!("P{}", v + 1)
            } else if let Some(v) = (0..n).find(|&v| algebra.quiver.reaching(v) == support) {
                format!("I{}", v + 1)
            } else {
                format!("M[{},{}]", lo + 1, hi + 1)
            };
            out.push(NamedModule { name, rep });
        }
    }
    out
}

/// Interval modules for a linear orientation word, as in the built-in `A_n`.
pub fn an_intervals(n: usize, orientation: &str, p: Option<u32>) -> Result<Vec<Representation>> {
    if n == 0 || n > MAX_TYPE_A_RANK {
        return Err(Error::Validation(format!("linear A_n catalog supports 1 <= n <= {MAX_TYPE_A_RANK}")));
    }
    let field = PrimeField::new(p.unwrap_or(2))?;
    let alg = linear_quiver(n, orientation, field)
        .ok_or_else(|| Error::Validation(format!("`{orientation}` is not an orientation word for A_{n}")))?;
    Ok(interval_modules(&Arc::new(alg), orientation).into_iter().map(|m| m.rep).collect())
}

/// Monic polynomial over `F_p`, coefficients from the constant term upwards.
type Poly = Vec<u32>;

fn poly_mul(f: PrimeField, a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(*x, *y));
        }
    }
    out
}

fn poly_rem(f: PrimeField, a: &Poly, m: &Poly) -> Poly {
    let mut r = a.clone();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, c) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(lead, *c));
        }
        r.pop();
    }
    r
}

fn monic_polys(f: PrimeField, degree: usize) -> Vec<Poly> {
    let p = f.p() as u64;
    (0..p.pow(degree as u32))
        .map(|mut code| {
            let mut poly: Poly = (0..degree)
                .map(|_| {
                    let c = (code % p) as u32;
                    code /= p;
                    c
                })
                .collect();
            poly.push(1);
            poly
        })
        .collect()
}

/// Monic irreducible polynomials of the given degree.
pub fn irreducible_polys(f: PrimeField, degree: usize) -> Vec<Poly> {
    monic_polys(f, degree)
        .into_iter()
        .filter(|g| {
            (1..=degree / 2).all(|d| monic_polys(f, d).iter().all(|h| poly_rem(f, g, h).iter().any(|&c| c != 0)))
        })
        .collect()
}

fn format_poly(g: &Poly) -> String {
    let mut terms = Vec::new();
    for (i, &c) in g.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
        terms.push(match i {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{i}"),
        });
    }
    terms.join("+")
}

fn companion(f: PrimeField, g: &Poly) -> Matrix {
    let n = g.len() - 1;
    let mut m = Matrix::zeros(n, n);
    for i in 1..n {
        m.set(i, i - 1, 1);
    }
    for i in 0..n {
        m.set(i, n - 1, f.neg(g[i]));
    }
    m
}

fn jordan(f: PrimeField, lambda: u32, n: usize) -> Matrix {
    let mut m = Matrix::identity(n).scale(f, lambda);
    for i in 1..n {
        m.set(i, i - 1, 1);
    }
    m
}

fn kronecker_rep(algebra: &Arc<AlgebraSpec>, dims: [usize; 2], a: Matrix, b: Matrix) -> Representation {
    Representation::new(algebra.clone(), dims.to_vec(), vec![a, b]).expect("Kronecker models are well formed")
}

/// Preprojective `P_n` of dimension vector `(n, n+1)`.
pub fn kronecker_preprojective(algebra: &Arc<AlgebraSpec>, n: usize) -> NamedModule {
    let mut a = Matrix::zeros(n + 1, n);
    let mut b = Matrix::zeros(n + 1, n);
    for i in 0..n {
        a.set(i, i, 1);
        b.set(i + 1, i, 1);
    }
    let name = if n == 0 { "S2".to_string() } else { format!("P{n}") };
    NamedModule { name, rep: kronecker_rep(algebra, [n, n + 1], a, b) }
}

/// Preinjective `I_n` of dimension vector `(n+1, n)`.
pub fn kronecker_preinjective(algebra: &Arc<AlgebraSpec>, n: usize) -> NamedModule {
    let mut a = Matrix::zeros(n, n + 1);
    let mut b = Matrix::zeros(n, n + 1);
    for i in 0..n {
        a.set(i, i, 1);
        b.set(i, i + 1, 1);
    }
    let name = if n == 0 { "S1".to_string() } else { format!("I{n}") };
    NamedModule { name, rep: kronecker_rep(algebra, [n + 1, n], a, b) }
}

/// A point of the projective line over `F_p`: a field element or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjectivePoint {
    Finite(u32),
    Infinity,
}

impl ProjectivePoint {
    pub fn all(f: PrimeField) -> Vec<ProjectivePoint> {
        f.elements().map(ProjectivePoint::Finite).chain([ProjectivePoint::Infinity]).collect()
    }

    pub fn label(&self) -> String {
        match self {
            ProjectivePoint::Finite(x) => x.to_string(),
            ProjectivePoint::Infinity => "inf".into(),
        }
    }

    pub fn parse(s: &str) -> Option<ProjectivePoint> {
        if s == "inf" || s == "∞" {
            Some(ProjectivePoint::Infinity)
        } else {
            s.parse().ok().map(ProjectivePoint::Finite)
        }
    }
}

/// Regular module `R_{λ,n}`: `a = I`, `b = λI + J`, with the roles swapped at infinity.
pub fn kronecker_regular(algebra: &Arc<AlgebraSpec>, point: ProjectivePoint, n: usize) -> NamedModule {
    let f = algebra.field;
    let (a, b) = match point {
        ProjectivePoint::Finite(l) => (Matrix::identity(n), jordan(f, l, n)),
        ProjectivePoint::Infinity => (jordan(f, 0, n), Matrix::identity(n)),
    };
    NamedModule { name: format!("R[{}]{n}", point.label()), rep: kronecker_rep(algebra, [n, n], a, b) }
}

/// Regular module attached to a power `g^e` of an irreducible polynomial of degree at least 2.
pub fn kronecker_regular_poly(algebra: &Arc<AlgebraSpec>, g: &Poly, e: usize) -> NamedModule {
    let f = algebra.field;
    let mut power = vec![1];
    for _ in 0..e {
        power = poly_mul(f, &power, g);
    }
    let n = power.len() - 1;
    NamedModule {
        name: format!("R[{}]{e}", format_poly(g)),
        rep: kronecker_rep(algebra, [n, n], Matrix::identity(n), companion(f, &power)),
    }
}

/// Every indecomposable Kronecker module with dimension vector `<= bound`.
pub fn kronecker_classification(algebra: &Arc<AlgebraSpec>, bound: &[usize]) -> Vec<NamedModule> {
    let mut out = Vec::new();
    for n in 0.. {
        if !fits(&[n, n + 1], bound) && !fits(&[n + 1, n], bound) {
            break;
        }
        if fits(&[n, n + 1], bound) {
            out.push(kronecker_preprojective(algebra, n));
        }
        if fits(&[n + 1, n], bound) {
            out.push(kronecker_preinjective(algebra, n));
        }
    }
    let max_regular = bound[0].min(bound[1]);
    for n in 1..=max_regular {
        for point in ProjectivePoint::all(algebra.field) {
            out.push(kronecker_regular(algebra, point, n));
        }
        for degree in 2..=n {
            if n % degree != 0 {
                continue;
            }
            for g in irreducible_polys(algebra.field, degree) {
                out.push(kronecker_regular_poly(algebra, &g, n / degree));
            }
        }
    }
    out
}

/// `P_n`, `I_n` for `n <= max_n` and `R_{λ,1}` for every `λ` in the projective line over `F_p`.
///
/// Over a finite field there are further regular modules coming from irreducible polynomials of
/// higher degree (the first is in dimension `(2,2)` over `F_2`); they are not in this family but
/// appear in [`kronecker_classification`].
pub fn kronecker_family(max_n: usize, p: u32) -> Result<Vec<Representation>> {
    if max_n > 3 {
        return Err(Error::BoundExceeded(format!("Kronecker family supports max_n <= 3, got {max_n}")));
    }
    let algebra = Arc::new(builtin("kronecker", Some(p))?);
    let mut out = Vec::new();
    for n in 0..=max_n {
        out.push(kronecker_preprojective(&algebra, n).rep);
        out.push(kronecker_preinjective(&algebra, n).rep);
    }
    if max_n >= 1 {
        for point in ProjectivePoint::all(algebra.field) {
            out.push(kronecker_regular(&algebra, point, 1).rep);
        }
    }
    Ok(out)
}

/// The Kronecker slope `n1/n2`, with `+inf` when `n2 = 0`.
pub fn kronecker_slope() -> StabilityFunction {
    StabilityFunction::slope(vec![qi(1), qi(0)], vec![qi(0), qi(1)]).expect("the Kronecker slope is well formed")
}

/// Where the doubled phase `1*` of the regulars outside `S` sits relative to `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarPlacement {
    Above,
    Below,
}

/// Choice of `S` for the starred Kronecker slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarredSlope {
    pub points: Vec<ProjectivePoint>,
    /// Side of regulars attached to irreducible polynomials of degree at least 2.
    pub higher_degree_in_s: bool,
    pub placement: StarPlacement,
}

impl StarredSlope {
    pub fn new(points: Vec<ProjectivePoint>) -> Self {
        StarredSlope { points, higher_degree_in_s: false, placement: StarPlacement::Above }
    }

    /// Whether the regular indecomposable called `name` lies over a point of `S`.
    pub fn regular_in_s(&self, name: &str) -> Option<bool> {
        let label = name.strip_prefix("R[")?.split(']').next()?;
        Some(match ProjectivePoint::parse(label) {
            Some(pt) => self.points.contains(&pt),
            None => self.higher_degree_in_s,
        })
    }

    /// Phases on a Kronecker universe: `n1/n2` off the diagonal, `1` on regulars over `S`, `1*` on
    /// the other regulars, and on the remaining classes with `n1 = n2` the share of starred summands.
    pub fn assignment(&self, universe: &ModuleUniverse) -> Result<Vec<(usize, PhaseValue)>> {
        if universe.algebra().shape() != Shape::Kronecker {
            return Err(Error::InvalidStabilityFunction("the starred slope needs a Kronecker universe".into()));
        }
        let sign = match self.placement {
            StarPlacement::Above => 1,
            StarPlacement::Below => -1,
        };
        let slope = kronecker_slope();
        let mut assignment = Vec::new();
        for (c, class) in universe.classes().iter().enumerate() {
            let d = class.dims();
            if d[0] != d[1] {
                assignment.push((c, slope.phase(&class.rep)?));
                continue;
            }
            let mut tag = 0i64;
            for (i, &k) in class.multiplicities.iter().enumerate() {
                let m = &universe.indecomposables()[i];
                let md = m.rep.dims();
                if md[0] == md[1] && self.regular_in_s(&m.name) == Some(false) {
                    tag += sign * (md[0] * k) as i64;
                }
            }
            assignment.push((c, PhaseValue::tagged(qi(1), Q::new(tag, d[0] as i64))));
        }
        Ok(assignment)
    }

    /// The starred slope as a table, rejected when the see-saw property fails on the universe.
    ///
    /// Once `S1+S2+R` fits in the universe for a regular `R` of dimension `(1,1)`, the sequences
    /// `S1+S2 -> S1+S2+R -> S1+S2` and `R -> S1+S2+R -> S1+S2` force every such `R` to share the
    /// phase of `S1+S2`, so any choice separating `1` from `1*` is rejected there.
    pub fn build(&self, universe: Arc<ModuleUniverse>) -> Result<StabilityFunction> {
        let assignment = self.assignment(&universe)?;
        StabilityFunction::table(universe, &assignment)
    }

    pub fn build_unchecked(&self, universe: Arc<ModuleUniverse>) -> Result<StabilityFunction> {
        let assignment = self.assignment(&universe)?;
        StabilityFunction::table_unchecked(universe, &assignment)
    }
}

/// Red paths shipped with the library, by file name.
pub const SHIPPED_PATHS: &[(&str, &str)] = &[
    ("a2-mgs3.path", include_str!("../paths/a2-mgs3.path")),
    ("a2-mgs2.path", include_str!("../paths/a2-mgs2.path")),
    ("diagonal2.path", include_str!("../paths/diagonal2.path")),
    ("diagonal3.path", include_str!("../paths/diagonal3.path")),
    ("a3-staircase.path", include_str!("../paths/a3-staircase.path")),
    ("a3-reverse.path", include_str!("../paths/a3-reverse.path")),
];

/// A shipped red path, looked up with or without the `.path` suffix.
pub fn shipped_path(name: &str) -> Option<Result<RedPath>> {
    let base = name.rsplit('/').next().unwrap_or(name);
    SHIPPED_PATHS
        .iter()
        .find(|(n, _)| *n == base || n.strip_suffix(".path") == Some(base))
        .map(|(_, text)| RedPath::parse(text))
}
