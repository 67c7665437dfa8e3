//! Stability functions, semistability, destabilizing objects and Harder-Narasimhan filtrations.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::phase::{seesaw_holds, PhaseValue};
use crate::rational::{pair, Q};
use crate::rep::{enumerate_submodules, is_isomorphic, quotient_by, Morphism, Representation, SubmoduleEmbedding};
use crate::universe::ModuleUniverse;
use crate::wallchamber::RedPath;

/// Phases assigned class by class on a universe.
#[derive(Clone, Debug)]
pub struct TableFunction {
    universe: Arc<ModuleUniverse>,
    phases: Vec<Option<PhaseValue>>,
}

impl TableFunction {
    pub fn universe(&self) -> &Arc<ModuleUniverse> {
        &self.universe
    }

    pub fn phase_of_class(&self, c: usize) -> Option<PhaseValue> {
        self.phases[c]
    }
}

#[derive(Clone, Debug)]
pub enum StabilityFunction {
    /// Central charge `Z(M) = -<a,[M]> + i<b,[M]>`, compared through `<a,[M]>/<b,[M]>`.
    LinearCharge { a: Vec<Q>, b: Vec<Q> },
    /// `<num,[M]>/<den,[M]>`, with `+inf` when the denominator vanishes.
    Slope { num: Vec<Q>, den: Vec<Q> },
    Table(TableFunction),
    /// The phase of `M` is the parameter where the path crosses the hyperplane of `[M]`.
    PathInduced(RedPath),
}

impl StabilityFunction {
    pub fn linear_charge(a: Vec<Q>, b: Vec<Q>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::InvalidStabilityFunction("charge vectors must have equal positive length".into()));
        }
        if !b.iter().all(|x| x.is_positive()) {
            return Err(Error::InvalidStabilityFunction("imaginary part `b` must be strictly positive".into()));
        }
        Ok(StabilityFunction::LinearCharge { a, b })
    }

    pub fn slope(num: Vec<Q>, den: Vec<Q>) -> Result<Self> {
        if num.len() != den.len() || num.is_empty() {
            return Err(Error::InvalidStabilityFunction("slope vectors must have equal positive length".into()));
        }
        for (i, (n, d)) in num.iter().zip(&den).enumerate() {
            if d.is_negative() {
                return Err(Error::InvalidStabilityFunction(format!("denominator is negative at vertex {}", i + 1)));
            }
            if d.is_zero() && !n.is_positive() {
                return Err(Error::InvalidStabilityFunction(format!(
                    "vertex {} has zero denominator and non-positive numerator",
                    i + 1
                )));
            }
        }
        Ok(StabilityFunction::Slope { num, den })
    }

    /// Build a table, checking the see-saw property on every sequence whose terms all have phases.
    pub fn table(universe: Arc<ModuleUniverse>, assignment: &[(usize, PhaseValue)]) -> Result<Self> {
        let sf = StabilityFunction::table_unchecked(universe.clone(), assignment)?;
        if let Some(&(l, m, n)) = seesaw_violations(&sf, &universe)?.first() {
            let StabilityFunction::Table(t) = &sf else { unreachable!() };
            let show = |c: usize| format!("{} ({})", universe.class(c).name, t.phases[c].unwrap());
            return Err(Error::InvalidStabilityFunction(format!(
                "see-saw fails for 0 -> {} -> {} -> {} -> 0",
                show(l),
                show(m),
                show(n)
            )));
        }
        Ok(sf)
    }

    /// Build a table without the see-saw check; see [`seesaw_violations`].
    pub fn table_unchecked(universe: Arc<ModuleUniverse>, assignment: &[(usize, PhaseValue)]) -> Result<Self> {
        let mut phases = vec![None; universe.classes().len()];
        for &(c, p) in assignment {
            if c >= phases.len() {
                return Err(Error::OutOfUniverse(format!("class index {c} is not in the universe")));
            }
            phases[c] = Some(p);
        }
        Ok(StabilityFunction::Table(TableFunction { universe, phases }))
    }

    /// Number of vertices the function is defined for, when it is fixed by the data.
    pub fn rank(&self) -> usize {
        match self {
            StabilityFunction::LinearCharge { a, .. } => a.len(),
            StabilityFunction::Slope { num, .. } => num.len(),
            StabilityFunction::Table(t) => t.universe.algebra().vertex_count(),
            StabilityFunction::PathInduced(p) => p.rank(),
        }
    }

    /// Phase determined by the dimension vector alone; `None` for tables.
    pub fn phase_of_dims(&self, dims: &[usize]) -> Option<Result<PhaseValue>> {
        if dims.iter().all(|&d| d == 0) {
            return Some(Err(Error::ZeroObject));
        }
        if dims.len() != self.rank() {
            return Some(Err(Error::Validation(format!(
                "stability function is defined on {} vertices, module has {}",
                self.rank(),
                dims.len()
            ))));
        }
        Some(match self {
            StabilityFunction::LinearCharge { a, b } => Ok(PhaseValue::finite(pair(a, dims) / pair(b, dims))),
            StabilityFunction::Slope { num, den } => {
                let d = pair(den, dims);
                if d.is_zero() {
                    Ok(PhaseValue::infinity())
                } else {
                    Ok(PhaseValue::finite(pair(num, dims) / d))
                }
            }
            StabilityFunction::PathInduced(path) => path.crossing_time(dims).map(PhaseValue::finite),
            StabilityFunction::Table(_) => return None,
        })
    }

    pub fn phase(&self, m: &Representation) -> Result<PhaseValue> {
        if m.is_zero() {
            return Err(Error::ZeroObject);
        }
        if let Some(p) = self.phase_of_dims(m.dims()) {
            return p;
        }
        let StabilityFunction::Table(t) = self else { unreachable!() };
        if t.universe.algebra() != m.algebra() && **t.universe.algebra() != **m.algebra() {
            return Err(Error::OutOfUniverse("module belongs to a different algebra".into()));
        }
        let c = t.universe.classify(m)?;
        t.phases[c].ok_or_else(|| Error::OutOfUniverse(format!("class {} has no assigned phase", t.universe.class(c).name)))
    }

    /// Phase of every class of `u`, in class order.
    pub fn class_phases(&self, u: &ModuleUniverse) -> Result<Vec<PhaseValue>> {
        if let StabilityFunction::Table(t) = self {
            if std::ptr::eq(Arc::as_ptr(&t.universe), u) {
                return (0..u.classes().len())
                    .map(|c| {
                        t.phases[c].ok_or_else(|| {
                            Error::OutOfUniverse(format!("class {} has no assigned phase", u.class(c).name))
                        })
                    })
                    .collect();
            }
        }
        u.classes().iter().map(|c| self.phase(&c.rep)).collect()
    }
}

/// Sequences `0 -> L -> M -> N -> 0` of classes of `u` (as class indices) where the see-saw
/// trichotomy fails. Classes without a phase are skipped.
pub fn seesaw_violations(sf: &StabilityFunction, u: &ModuleUniverse) -> Result<Vec<(usize, usize, usize)>> {
    let phases: Vec<Option<PhaseValue>> = match sf {
        StabilityFunction::Table(t) if std::ptr::eq(Arc::as_ptr(&t.universe), u) => t.phases.clone(),
        _ => sf.class_phases(u)?.into_iter().map(Some).collect(),
    };
    let mut out = Vec::new();
    for (m, seq) in u.sequences()?.iter().enumerate() {
        let Some(pm) = phases[m] else { continue };
        for &(l, n) in &seq.pairs {
            if let (Some(pl), Some(pn)) = (phases[l], phases[n]) {
                if !seesaw_holds(pl, pm, pn) {
                    out.push((l, m, n));
                }
            }
        }
    }
    Ok(out)
}

/// Phases of the proper nonzero submodules of `m`.
pub fn submodule_phases(sf: &StabilityFunction, m: &Representation) -> Result<Vec<(SubmoduleEmbedding, PhaseValue)>> {
    let mut out = Vec::new();
    for sub in enumerate_submodules(m)? {
        if sub.is_zero() || sub.is_whole() {
            continue;
        }
        let p = match sf.phase_of_dims(&sub.dims()) {
            Some(p) => p?,
            None => sf.phase(&sub.representation())?,
        };
        out.push((sub, p));
    }
    Ok(out)
}

pub fn is_semistable(sf: &StabilityFunction, m: &Representation) -> Result<bool> {
    let pm = sf.phase(m)?;
    Ok(submodule_phases(sf, m)?.iter().all(|(_, p)| *p <= pm))
}

pub fn is_stable(sf: &StabilityFunction, m: &Representation) -> Result<bool> {
    let pm = sf.phase(m)?;
    Ok(submodule_phases(sf, m)?.iter().all(|(_, p)| *p < pm))
}

/// Outcome of King's semistability test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KingStatus {
    Not,
    Semistable,
    Stable,
}

impl KingStatus {
    pub fn is_semistable(self) -> bool {
        self != KingStatus::Not
    }

    pub fn label(self) -> &'static str {
        match self {
            KingStatus::Not => "not",
            KingStatus::Semistable => "semistable",
            KingStatus::Stable => "stable",
        }
    }
}

/// `<θ,[M]> = 0` and `<θ,[L]> <= 0` (resp. `< 0`) on proper nonzero submodules.
pub fn king_semistable(theta: &[Q], m: &Representation) -> Result<KingStatus> {
    if m.is_zero() {
        return Err(Error::ZeroObject);
    }
    if theta.len() != m.dims().len() {
        return Err(Error::Validation("θ has the wrong number of entries".into()));
    }
    if !pair(theta, m.dims()).is_zero() {
        return Ok(KingStatus::Not);
    }
    let mut stable = true;
    for sub in enumerate_submodules(m)? {
        if sub.is_zero() || sub.is_whole() {
            continue;
        }
        let v = pair(theta, &sub.dims());
        if v.is_positive() {
            return Ok(KingStatus::Not);
        }
        if v.is_zero() {
            stable = false;
        }
    }
    Ok(if stable { KingStatus::Stable } else { KingStatus::Semistable })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Quotient,
    Subobject,
}

/// A maximally destabilizing quotient or subobject.
#[derive(Clone, Debug)]
pub struct Destabilizer {
    pub object: Representation,
    /// Epimorphism `M -> object` for quotients, monomorphism `object -> M` for subobjects.
    pub map: Morphism,
    pub direction: Direction,
    /// The submodule itself, or the kernel of the quotient map.
    pub embedding: SubmoduleEmbedding,
    pub phase: PhaseValue,
}

/// Does the monomorphism with image `small` factor through the one with image `big`?
fn mono_factors(m: &Representation, small: &SubmoduleEmbedding, big: &SubmoduleEmbedding) -> bool {
    let f = m.field();
    small.subspaces.iter().zip(&big.subspaces).all(|(s, b)| b.contains_subspace(f, s))
}

pub fn extremal_destabilizer(sf: &StabilityFunction, m: &Representation, direction: Direction) -> Result<Destabilizer> {
    let pm = sf.phase(m)?;
    let mut candidates: Vec<(SubmoduleEmbedding, PhaseValue)> = Vec::new();
    let subs = submodule_phases(sf, m)?;
    match direction {
        Direction::Subobject => {
            candidates.push((SubmoduleEmbedding::whole(m), pm));
            candidates.extend(subs);
            let best = candidates.iter().map(|(_, p)| *p).max().unwrap();
            let tied: Vec<_> = candidates.into_iter().filter(|(_, p)| *p == best).collect();
            let winner = tied
                .iter()
                .find(|(big, _)| tied.iter().all(|(small, _)| mono_factors(m, small, big)))
                .ok_or_else(|| Error::InternalAssertion("no maximal subobject among those of maximal phase".into()))?;
            let object = winner.0.representation();
            if !is_semistable(sf, &object)? {
                return Err(Error::InternalAssertion("maximally destabilizing subobject is not semistable".into()));
            }
            Ok(Destabilizer {
                map: winner.0.inclusion(),
                object,
                direction,
                embedding: winner.0.clone(),
                phase: best,
            })
        }
        Direction::Quotient => {
            candidates.push((SubmoduleEmbedding::zero(m), pm));
            for (sub, _) in subs {
                let (q, _) = quotient_by(m, &sub)?;
                let p = match sf.phase_of_dims(q.dims()) {
                    Some(p) => p?,
                    None => sf.phase(&q)?,
                };
                candidates.push((sub, p));
            }
            let best = candidates.iter().map(|(_, p)| *p).min().unwrap();
            let tied: Vec<_> = candidates.into_iter().filter(|(_, p)| *p == best).collect();
            // p' factors through p exactly when ker p is contained in ker p'
            let winner = tied
                .iter()
                .find(|(small, _)| tied.iter().all(|(big, _)| mono_factors(m, small, big)))
                .ok_or_else(|| Error::InternalAssertion("no minimal kernel among quotients of minimal phase".into()))?;
            let (object, map) = quotient_by(m, &winner.0)?;
            if !is_semistable(sf, &object)? {
                return Err(Error::InternalAssertion("maximally destabilizing quotient is not semistable".into()));
            }
            Ok(Destabilizer { object, map, direction, embedding: winner.0.clone(), phase: best })
        }
    }
}

/// `0 = M_0 ⊊ M_1 ⊊ ... ⊊ M_n = M` with semistable factors of strictly decreasing phase.
#[derive(Clone, Debug)]
pub struct HNFiltration {
    pub chain: Vec<SubmoduleEmbedding>,
    pub factors: Vec<Representation>,
    pub phases: Vec<PhaseValue>,
}

fn hn_sub_first(sf: &StabilityFunction, m: &Representation) -> Result<HNFiltration> {
    let mut current = SubmoduleEmbedding::zero(m);
    let mut chain = vec![current.clone()];
    let mut factors = Vec::new();
    let mut phases = Vec::new();
    loop {
        let (q, proj) = quotient_by(m, &current)?;
        if q.is_zero() {
            break;
        }
        let d = extremal_destabilizer(sf, &q, Direction::Subobject)?;
        let (_, proj2) = quotient_by(&q, &d.embedding)?;
        current = proj.then(&proj2).kernel();
        chain.push(current.clone());
        factors.push(d.object);
        phases.push(d.phase);
    }
    Ok(HNFiltration { chain, factors, phases })
}

fn hn_quotient_first(sf: &StabilityFunction, m: &Representation) -> Result<(Vec<Representation>, Vec<PhaseValue>)> {
    if m.is_zero() {
        return Ok((vec![], vec![]));
    }
    let d = extremal_destabilizer(sf, m, Direction::Quotient)?;
    let kernel = d.embedding.representation();
    let (mut factors, mut phases) = hn_quotient_first(sf, &kernel)?;
    factors.push(d.object);
    phases.push(d.phase);
    Ok((factors, phases))
}

/// Harder-Narasimhan filtration, cross-checked against the construction from the top quotient down.
pub fn hn_filtration(sf: &StabilityFunction, m: &Representation) -> Result<HNFiltration> {
    if m.is_zero() {
        return Err(Error::ZeroObject);
    }
    let hn = hn_sub_first(sf, m)?;
    if hn.phases.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InternalAssertion("HN phases are not strictly decreasing".into()));
    }
    let (factors, phases) = hn_quotient_first(sf, m)?;
    if phases != hn.phases || factors.len() != hn.factors.len() {
        return Err(Error::InternalAssertion("HN filtration differs between the two constructions".into()));
    }
    for (a, b) in factors.iter().zip(&hn.factors) {
        if !is_isomorphic(a, b)? {
            return Err(Error::InternalAssertion("HN factors differ between the two constructions".into()));
        }
    }
    Ok(hn)
}

fn stable_factors_with(sf: &StabilityFunction, m: &Representation, last: bool) -> Result<Vec<Representation>> {
    let pm = sf.phase(m)?;
    let subs = submodule_phases(sf, m)?;
    let equal: Vec<_> = subs.into_iter().filter(|(_, p)| *p == pm).collect();
    let Some(min_dim) = equal.iter().map(|(s, _)| s.dims().iter().sum::<usize>()).min() else {
        return Ok(vec![m.clone()]);
    };
    let smallest: Vec<_> = equal.into_iter().filter(|(s, _)| s.dims().iter().sum::<usize>() == min_dim).collect();
    let (sub, _) = if last { smallest.last().unwrap() } else { smallest.first().unwrap() };
    let (q, _) = quotient_by(m, sub)?;
    let mut out = vec![sub.representation()];
    out.extend(stable_factors_with(sf, &q, last)?);
    Ok(out)
}

fn same_multiset(a: &[Representation], b: &[Representation]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let mut hit = false;
        for (j, y) in b.iter().enumerate() {
            if !used[j] && is_isomorphic(x, y)? {
                used[j] = true;
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Stable composition factors of a semistable module, checked against a second selection order.
pub fn stable_factors(sf: &StabilityFunction, m: &Representation) -> Result<Vec<Representation>> {
    if !is_semistable(sf, m)? {
        return Err(Error::NotSemistable);
    }
    let first = stable_factors_with(sf, m, false)?;
    let second = stable_factors_with(sf, m, true)?;
    for x in &first {
        if !is_stable(sf, x)? {
            return Err(Error::InternalAssertion("stable factor is not stable".into()));
        }
    }
    if !same_multiset(&first, &second)? {
        return Err(Error::InternalAssertion("stable factors depend on the filtration".into()));
    }
    Ok(first)
}

/// Members of `modules` that are semistable of phase exactly `p`.
pub fn wide_slice(sf: &StabilityFunction, p: PhaseValue, modules: &[Representation]) -> Result<Vec<Representation>> {
    let mut out = Vec::new();
    for m in modules {
        if m.is_zero() {
            continue;
        }
        if sf.phase(m)? == p && is_semistable(sf, m)? {
            out.push(m.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin, kronecker_preinjective, kronecker_preprojective, kronecker_regular, ProjectivePoint};
    use crate::rational::{q, qi};

    fn a2() -> Arc<crate::algebra::AlgebraSpec> {
        Arc::new(builtin("A2", None).unwrap())
    }

    fn a2_slope() -> StabilityFunction {
        StabilityFunction::slope(vec![qi(1), qi(0)], vec![qi(1), qi(1)]).unwrap()
    }

    fn kronecker_slope() -> StabilityFunction {
        StabilityFunction::slope(vec![qi(1), qi(0)], vec![qi(0), qi(1)]).unwrap()
    }

    #[test]
    fn slope_phases() {
        let k = Arc::new(builtin("kronecker", None).unwrap());
        let sf = kronecker_slope();
        assert_eq!(sf.phase(&kronecker_preprojective(&k, 1).rep).unwrap(), PhaseValue::finite(q(1, 2)));
        assert_eq!(sf.phase(&kronecker_preinjective(&k, 0).rep).unwrap(), PhaseValue::infinity());
        assert_eq!(sf.phase(&Representation::zero(k)), Err(Error::ZeroObject));
    }

    #[test]
    fn invalid_functions_rejected() {
        assert!(StabilityFunction::slope(vec![qi(0), qi(1)], vec![qi(0), qi(1)]).is_err());
        assert!(StabilityFunction::linear_charge(vec![qi(0)], vec![qi(0)]).is_err());
    }

    #[test]
    fn semistability_examples() {
        let alg = a2();
        let s1 = Representation::simple(alg.clone(), 0);
        let s2 = Representation::simple(alg.clone(), 1);
        let sf = a2_slope();
        assert!(is_stable(&sf, &s1).unwrap());
        assert!(!is_semistable(&sf, &s1.direct_sum(&s2)).unwrap());
        let k = Arc::new(builtin("kronecker", None).unwrap());
        assert!(is_stable(&kronecker_slope(), &kronecker_preprojective(&k, 1).rep).unwrap());
    }

    #[test]
    fn king_examples() {
        let alg = a2();
        let p1 = crate::rep::tests::a2_p1(&alg);
        assert_eq!(king_semistable(&[qi(1), qi(1)], &p1).unwrap(), KingStatus::Not);
        assert_eq!(king_semistable(&[qi(1), qi(-1)], &p1).unwrap(), KingStatus::Stable);
        assert_eq!(king_semistable(&[qi(0), qi(0)], &p1).unwrap(), KingStatus::Semistable);
    }

    #[test]
    fn destabilizers_of_split_sum() {
        let alg = a2();
        let s1 = Representation::simple(alg.clone(), 0);
        let s2 = Representation::simple(alg.clone(), 1);
        let m = s1.direct_sum(&s2);
        let sf = a2_slope();
        let sub = extremal_destabilizer(&sf, &m, Direction::Subobject).unwrap();
        assert_eq!(sub.object.dims(), &vec![1, 0]);
        assert_eq!(sub.phase, PhaseValue::finite(qi(1)));
        let quo = extremal_destabilizer(&sf, &m, Direction::Quotient).unwrap();
        assert_eq!(quo.object.dims(), &vec![0, 1]);
        assert!(quo.map.is_epimorphism());
        let hn = hn_filtration(&sf, &m).unwrap();
        assert_eq!(hn.phases, vec![PhaseValue::finite(qi(1)), PhaseValue::finite(qi(0))]);
        assert_eq!(hn.chain.len(), 3);
    }

    #[test]
    fn semistable_destabilizer_is_identity() {
        let alg = a2();
        let p1 = crate::rep::tests::a2_p1(&alg);
        let sf = a2_slope();
        let d = extremal_destabilizer(&sf, &p1, Direction::Quotient).unwrap();
        assert_eq!(d.object, p1);
        assert_eq!(hn_filtration(&sf, &p1).unwrap().factors.len(), 1);
    }

    #[test]
    fn kronecker_hn_and_jordan_holder() {
        let k = Arc::new(builtin("kronecker", None).unwrap());
        let sf = kronecker_slope();
        let s1 = kronecker_preinjective(&k, 0).rep;
        let p1 = kronecker_preprojective(&k, 1).rep;
        let hn = hn_filtration(&sf, &s1.direct_sum(&p1)).unwrap();
        assert_eq!(hn.phases, vec![PhaseValue::infinity(), PhaseValue::finite(q(1, 2))]);
        let r0 = kronecker_regular(&k, ProjectivePoint::Finite(0), 1).rep;
        let r1 = kronecker_regular(&k, ProjectivePoint::Finite(1), 1).rep;
        assert_eq!(stable_factors(&sf, &r0.direct_sum(&r0)).unwrap().len(), 2);
        let mixed = stable_factors(&sf, &r0.direct_sum(&r1)).unwrap();
        assert!(same_multiset(&mixed, &[r0.clone(), r1.clone()]).unwrap());
        assert_eq!(stable_factors(&sf, &s1.direct_sum(&p1)), Err(Error::NotSemistable));
    }

    #[test]
    fn wide_slice_a2() {
        let alg = a2();
        let s1 = Representation::simple(alg.clone(), 0);
        let s2 = Representation::simple(alg.clone(), 1);
        let p1 = crate::rep::tests::a2_p1(&alg);
        let all = vec![s2.clone(), s1.clone(), p1.clone(), s1.direct_sum(&s2)];
        assert_eq!(wide_slice(&a2_slope(), PhaseValue::finite(q(1, 2)), &all).unwrap(), vec![p1]);
        assert!(wide_slice(&a2_slope(), PhaseValue::finite(q(1, 3)), &all).unwrap().is_empty());
    }
}
