//! Torsion and torsion-free classes of a stability function, chains of torsion classes and
//! maximal green sequence verification on a finite universe.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::phase::PhaseValue;
use crate::rep::HomSpace;
use crate::field::Matrix;
use crate::stability::{extremal_destabilizer, Direction, StabilityFunction};
use crate::universe::ModuleUniverse;

/// A set of indecomposables of a universe, standing for its additive closure.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleSet {
    members: BTreeSet<usize>,
}

impl ModuleSet {
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        ModuleSet { members: indices.into_iter().collect() }
    }

    pub fn everything(u: &ModuleUniverse) -> Self {
        ModuleSet::from_indices(0..u.indecomposables().len())
    }

    /// Parse comma-separated indecomposable names.
    pub fn from_names(u: &ModuleUniverse, names: &[&str]) -> Result<Self> {
        names
            .iter()
            .map(|n| {
                u.indecomposable_by_name(n.trim())
                    .ok_or_else(|| Error::OutOfUniverse(format!("`{n}` is not an indecomposable of the universe")))
            })
            .collect::<Result<BTreeSet<_>>>()
            .map(|members| ModuleSet { members })
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn is_subset(&self, other: &ModuleSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_proper_subset(&self, other: &ModuleSet) -> bool {
        self.is_subset(other) && self.len() < other.len()
    }

    /// Names of the members in universe order.
    pub fn names(&self, u: &ModuleUniverse) -> Vec<String> {
        self.iter().map(|i| u.indecomposables()[i].name.clone()).collect()
    }

    /// Whether every indecomposable summand of class `c` is a member.
    pub fn contains_class(&self, u: &ModuleUniverse, c: usize) -> bool {
        u.summands(c).iter().all(|&i| self.contains(i))
    }
}

/// `T_p`: indecomposables all of whose nonzero quotients have phase at least `p`.
pub fn torsion_class_at(sf: &StabilityFunction, p: PhaseValue, u: &ModuleUniverse) -> Result<ModuleSet> {
    let phases = sf.class_phases(u)?;
    let mut members = Vec::new();
    for i in 0..u.indecomposables().len() {
        if u.quotient_classes(u.indecomposable_class(i))?.iter().all(|&q| phases[q] >= p) {
            members.push(i);
        }
    }
    Ok(ModuleSet::from_indices(members))
}

/// `F_p`: indecomposables all of whose nonzero submodules have phase less than `p`.
pub fn torsion_free_at(sf: &StabilityFunction, p: PhaseValue, u: &ModuleUniverse) -> Result<ModuleSet> {
    let phases = sf.class_phases(u)?;
    let mut members = Vec::new();
    for i in 0..u.indecomposables().len() {
        if u.submodule_classes(u.indecomposable_class(i))?.iter().all(|&l| phases[l] < p) {
            members.push(i);
        }
    }
    Ok(ModuleSet::from_indices(members))
}

/// Semistability and stability of every indecomposable, read off the universe.
#[derive(Clone, Debug)]
pub struct StabilityProfile {
    pub class_phases: Vec<PhaseValue>,
    pub semistable: Vec<bool>,
    pub stable: Vec<bool>,
}

impl StabilityProfile {
    pub fn compute(sf: &StabilityFunction, u: &ModuleUniverse) -> Result<Self> {
        let class_phases = sf.class_phases(u)?;
        let seqs = u.sequences()?;
        let mut semistable = Vec::new();
        let mut stable = Vec::new();
        for i in 0..u.indecomposables().len() {
            let c = u.indecomposable_class(i);
            let pm = class_phases[c];
            semistable.push(seqs[c].pairs.iter().all(|&(l, _)| class_phases[l] <= pm));
            stable.push(seqs[c].pairs.iter().all(|&(l, _)| class_phases[l] < pm));
        }
        Ok(StabilityProfile { class_phases, semistable, stable })
    }

    pub fn phase_of_indecomposable(&self, u: &ModuleUniverse, i: usize) -> PhaseValue {
        self.class_phases[u.indecomposable_class(i)]
    }

    /// Distinct phases of all classes, increasing.
    pub fn attained(&self) -> Vec<PhaseValue> {
        let set: BTreeSet<PhaseValue> = self.class_phases.iter().copied().collect();
        set.into_iter().collect()
    }

    /// Stable indecomposables of phase exactly `p`.
    pub fn stables_at(&self, u: &ModuleUniverse, p: PhaseValue) -> Vec<usize> {
        (0..self.stable.len()).filter(|&i| self.stable[i] && self.phase_of_indecomposable(u, i) == p).collect()
    }
}

/// Semistable indecomposables of phase at least `p`.
pub fn semistables_at_least(sf: &StabilityFunction, p: PhaseValue, u: &ModuleUniverse) -> Result<ModuleSet> {
    let prof = StabilityProfile::compute(sf, u)?;
    Ok(ModuleSet::from_indices(
        (0..prof.semistable.len()).filter(|&i| prof.semistable[i] && prof.phase_of_indecomposable(u, i) >= p),
    ))
}

/// Smallest extension-closed subcategory of the universe containing `gens`.
///
/// A class belongs when it is a generator or has a submodule in the closure with quotient a generator.
pub fn filt_closure(gens: &ModuleSet, u: &ModuleUniverse) -> Result<ModuleSet> {
    let seqs = u.sequences()?;
    let gen_class: BTreeSet<usize> = gens.iter().map(|i| u.indecomposable_class(i)).collect();
    let mut order: Vec<usize> = (0..u.classes().len()).collect();
    order.sort_by_key(|&c| u.class(c).rep.total_dim());
    let mut inside = vec![false; u.classes().len()];
    for c in order {
        inside[c] = gen_class.contains(&c) || seqs[c].pairs.iter().any(|&(l, n)| gen_class.contains(&n) && inside[l]);
    }
    Ok(ModuleSet::from_indices((0..u.indecomposables().len()).filter(|&i| inside[u.indecomposable_class(i)])))
}

/// Indecomposables generated by `gens`: the images of all maps from generators cover them.
pub fn fac_closure(gens: &ModuleSet, u: &ModuleUniverse) -> Result<ModuleSet> {
    let mut members = Vec::new();
    for (i, target) in u.indecomposables().iter().enumerate() {
        let m = &target.rep;
        let field = m.field();
        let mut columns: Vec<Vec<Vec<u32>>> = vec![Vec::new(); m.dims().len()];
        for g in gens.iter() {
            let hom = HomSpace::compute(&u.indecomposables()[g].rep, m);
            for blocks in hom.basis_blocks() {
                for (v, b) in blocks.iter().enumerate() {
                    for c in 0..b.cols() {
                        columns[v].push(b.column(c));
                    }
                }
            }
        }
        let covered = m.dims().iter().enumerate().all(|(v, &d)| {
            d == 0 || (!columns[v].is_empty() && Matrix::from_columns(&columns[v], d).rank(field) == d)
        });
        if covered {
            members.push(i);
        }
    }
    Ok(ModuleSet::from_indices(members))
}

/// Whether the additive closure of `set` is closed under quotients and extensions within `u`.
pub fn is_torsion_class(set: &ModuleSet, u: &ModuleUniverse) -> Result<bool> {
    let seqs = u.sequences()?;
    let inside: Vec<bool> = (0..u.classes().len()).map(|c| set.contains_class(u, c)).collect();
    for (m, seq) in seqs.iter().enumerate() {
        for &(l, n) in &seq.pairs {
            if inside[m] && !inside[n] {
                return Ok(false);
            }
            if inside[l] && inside[n] && !inside[m] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Dual of [`is_torsion_class`]: closed under submodules and extensions.
pub fn is_torsion_free_class(set: &ModuleSet, u: &ModuleUniverse) -> Result<bool> {
    let seqs = u.sequences()?;
    let inside: Vec<bool> = (0..u.classes().len()).map(|c| set.contains_class(u, c)).collect();
    for (m, seq) in seqs.iter().enumerate() {
        for &(l, n) in &seq.pairs {
            if (inside[m] && !inside[l]) || (inside[l] && inside[n] && !inside[m]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairViolation {
    NonzeroHom { torsion: usize, free: usize },
    /// `Hom(T, x) = 0` but `x` is not in `F`.
    MissingFromFree(usize),
    /// `Hom(x, F) = 0` but `x` is not in `T`.
    MissingFromTorsion(usize),
}

/// Check `Hom(T,F) = 0` and mutual maximality on the indecomposables of `u`.
pub fn verify_torsion_pair(t: &ModuleSet, f: &ModuleSet, u: &ModuleUniverse) -> Result<Option<PairViolation>> {
    let hom = u.hom_dims();
    for a in t.iter() {
        for b in f.iter() {
            if hom[a][b] != 0 {
                return Ok(Some(PairViolation::NonzeroHom { torsion: a, free: b }));
            }
        }
    }
    for x in 0..u.indecomposables().len() {
        if !f.contains(x) && t.iter().all(|a| hom[a][x] == 0) {
            return Ok(Some(PairViolation::MissingFromFree(x)));
        }
        if !t.contains(x) && f.iter().all(|b| hom[x][b] == 0) {
            return Ok(Some(PairViolation::MissingFromTorsion(x)));
        }
    }
    Ok(None)
}

/// Decreasing representative phases with strictly increasing torsion classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionChain {
    pub entries: Vec<(PhaseValue, ModuleSet)>,
}

impl TorsionChain {
    /// Number of proper inclusions.
    pub fn steps(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    pub fn classes(&self) -> Vec<&ModuleSet> {
        self.entries.iter().map(|(_, s)| s).collect()
    }
}

/// Phases at which torsion classes are evaluated: every attained phase and one on either side.
pub fn candidate_phases(sf: &StabilityFunction, u: &ModuleUniverse) -> Result<Vec<PhaseValue>> {
    let attained = StabilityProfile::compute(sf, u)?.attained();
    let (Some(&lo), Some(&hi)) = (attained.first(), attained.last()) else {
        return Ok(vec![]);
    };
    let (below, above) = match sf {
        StabilityFunction::PathInduced(_) => (PhaseValue::finite(0.into()), PhaseValue::finite(1.into())),
        _ => (lo.below(), hi.above()),
    };
    let mut out = vec![below];
    out.extend(attained);
    out.push(above);
    out.dedup();
    Ok(out)
}

pub fn chain_of_torsion_classes(sf: &StabilityFunction, u: &ModuleUniverse) -> Result<TorsionChain> {
    let mut entries: Vec<(PhaseValue, ModuleSet)> = Vec::new();
    for p in candidate_phases(sf, u)?.into_iter().rev() {
        let t = torsion_class_at(sf, p, u)?;
        match entries.last_mut() {
            Some((_, prev)) if *prev == t => {}
            Some((_, prev)) if !prev.is_proper_subset(&t) => {
                return Err(Error::InternalAssertion("torsion classes are not monotone in the phase".into()));
            }
            _ => entries.push((p, t)),
        }
    }
    // each class keeps the largest phase of its group, which is the first one met going down
    Ok(TorsionChain { entries })
}

pub fn is_discrete_at(sf: &StabilityFunction, p: PhaseValue, u: &ModuleUniverse) -> Result<bool> {
    Ok(StabilityProfile::compute(sf, u)?.stables_at(u, p).len() <= 1)
}

pub fn is_discrete(sf: &StabilityFunction, u: &ModuleUniverse) -> Result<bool> {
    let prof = StabilityProfile::compute(sf, u)?;
    Ok(prof.attained().into_iter().all(|p| prof.stables_at(u, p).len() <= 1))
}

/// Evidence attached to one step `T_i ⊊ T_{i+1}` of a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepCertificate {
    /// A single stable module appears at the lower phase.
    Maximal { phase: PhaseValue, stable: usize },
    TwoStables { phase: PhaseValue, first: usize, second: usize },
    /// A torsion class strictly between the two; `phase` is set when it is some `T_r`.
    Intermediate { phase: Option<PhaseValue>, members: ModuleSet },
    /// No stable module has the lower phase (only possible on truncated universes).
    NoStable { phase: PhaseValue },
}

#[derive(Clone, Debug)]
pub struct MgsReport {
    pub chain: TorsionChain,
    pub verdict: bool,
    pub criterion_verdict: bool,
    pub oracle_verdict: bool,
    pub endpoints_ok: bool,
    pub discrete: bool,
    /// False only when the oracle disagrees on a universe that is not exact.
    pub oracle_agrees: bool,
    pub certificates: Vec<StepCertificate>,
}

/// Every torsion class of the universe, found by testing all subsets of indecomposables.
pub fn enumerate_torsion_classes(u: &ModuleUniverse) -> Result<Vec<ModuleSet>> {
    let n = u.indecomposables().len();
    let cap = u.algebra().limits.max_oracle_indecomposables;
    if n > cap {
        return Err(Error::SearchSpaceExceeded(format!(
            "{n} indecomposables exceed the torsion-class oracle cap of {cap}"
        )));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let set = ModuleSet::from_indices((0..n).filter(|&i| mask >> i & 1 == 1));
        if is_torsion_class(&set, u)? {
            out.push(set);
        }
    }
    Ok(out)
}

pub fn verify_mgs(chain: &TorsionChain, sf: &StabilityFunction, u: &ModuleUniverse) -> Result<MgsReport> {
    let prof = StabilityProfile::compute(sf, u)?;
    let all = ModuleSet::everything(u);
    let endpoints_ok = chain.entries.first().is_some_and(|(_, t)| t.is_empty())
        && chain.entries.last().is_some_and(|(_, t)| *t == all)
        && chain.entries.windows(2).all(|w| w[0].1.is_proper_subset(&w[1].1) && w[0].0 > w[1].0);
    let discrete = prof.attained().into_iter().all(|p| prof.stables_at(u, p).len() <= 1);
    let candidates = candidate_phases(sf, u)?;
    let mut at = Vec::with_capacity(candidates.len());
    for &r in &candidates {
        at.push((r, torsion_class_at(sf, r, u)?));
    }
    let torsion_classes = enumerate_torsion_classes(u)?;

    let mut certificates = Vec::new();
    let mut criterion_steps = true;
    let mut oracle_steps = true;
    for w in chain.entries.windows(2) {
        let (upper, lower) = (&w[0].1, &w[1].1);
        let between = |t: &ModuleSet| upper.is_proper_subset(t) && t.is_proper_subset(lower);
        let oracle_hit = torsion_classes.iter().find(|t| between(t));
        if oracle_hit.is_some() {
            oracle_steps = false;
        }
        let cert = if let Some((r, t)) = at.iter().find(|(_, t)| between(t)) {
            criterion_steps = false;
            StepCertificate::Intermediate { phase: Some(*r), members: t.clone() }
        } else {
            let phase = w[1].0;
            match prof.stables_at(u, phase).as_slice() {
                [s] => StepCertificate::Maximal { phase, stable: *s },
                [a, b, ..] => StepCertificate::TwoStables { phase, first: *a, second: *b },
                [] => match oracle_hit {
                    Some(t) => StepCertificate::Intermediate { phase: None, members: t.clone() },
                    None => StepCertificate::NoStable { phase },
                },
            }
        };
        certificates.push(cert);
    }
    let criterion_verdict = endpoints_ok && discrete && criterion_steps;
    let oracle_verdict = endpoints_ok && oracle_steps;
    let oracle_agrees = criterion_verdict == oracle_verdict;
    if !oracle_agrees && u.is_exact() {
        return Err(Error::OracleDisagreement(format!(
            "discreteness criterion says {criterion_verdict}, exhaustive search says {oracle_verdict}"
        )));
    }
    Ok(MgsReport {
        chain: chain.clone(),
        verdict: criterion_verdict,
        criterion_verdict,
        oracle_verdict,
        endpoints_ok,
        discrete,
        oracle_agrees,
        certificates,
    })
}

/// `T_p` through the maximally destabilizing quotient of each indecomposable.
pub fn torsion_class_by_destabilizers(sf: &StabilityFunction, p: PhaseValue, u: &ModuleUniverse) -> Result<ModuleSet> {
    let mut members = Vec::new();
    for (i, m) in u.indecomposables().iter().enumerate() {
        if extremal_destabilizer(sf, &m.rep, Direction::Quotient)?.phase >= p {
            members.push(i);
        }
    }
    Ok(ModuleSet::from_indices(members))
}

/// The four descriptions of `T_p`, each computed on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionCharacterizations {
    pub by_destabilizers: ModuleSet,
    pub filt_of_semistables: ModuleSet,
    pub filt_of_generated: ModuleSet,
    pub by_quotient_phases: ModuleSet,
}

impl TorsionCharacterizations {
    pub fn agree(&self) -> bool {
        self.by_destabilizers == self.by_quotient_phases
            && self.filt_of_semistables == self.by_quotient_phases
            && self.filt_of_generated == self.by_quotient_phases
    }
}

pub fn torsion_characterizations(
    sf: &StabilityFunction,
    p: PhaseValue,
    u: &ModuleUniverse,
) -> Result<TorsionCharacterizations> {
    let gens = semistables_at_least(sf, p, u)?;
    Ok(TorsionCharacterizations {
        by_destabilizers: torsion_class_by_destabilizers(sf, p, u)?,
        filt_of_semistables: filt_closure(&gens, u)?,
        filt_of_generated: filt_closure(&fac_closure(&gens, u)?, u)?,
        by_quotient_phases: torsion_class_at(sf, p, u)?,
    })
}
