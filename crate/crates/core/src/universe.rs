//! A finite window onto the module category: every isomorphism class up to a dimension bound.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::algebra::{AlgebraSpec, Shape};
use crate::error::{Error, Result};
use crate::indec::{decompose, enumerate_indecomposables, fits, NamedModule, SummandProbe};
use crate::rep::{enumerate_submodules, quotient_by, DimensionVector, HomSpace, Representation};

/// One isomorphism class of the universe, stored as multiplicities of indecomposables.
#[derive(Clone, Debug)]
pub struct ModuleClass {
    pub multiplicities: Vec<usize>,
    pub name: String,
    pub rep: Representation,
}

impl ModuleClass {
    pub fn dims(&self) -> &DimensionVector {
        self.rep.dims()
    }

    pub fn is_indecomposable(&self) -> bool {
        self.multiplicities.iter().sum::<usize>() == 1
    }
}

/// Short exact sequences with a fixed middle term, up to isomorphism of the outer terms.
#[derive(Clone, Debug, Default)]
pub struct ClassSequences {
    /// Distinct `(submodule class, quotient class)` pairs over proper nonzero submodules.
    pub pairs: Vec<(usize, usize)>,
    /// Number of proper nonzero submodules (as subspace tuples) of the representative.
    pub submodule_count: usize,
}

/// All modules with dimension vector at most `bound`, up to isomorphism.
pub struct ModuleUniverse {
    algebra: Arc<AlgebraSpec>,
    bound: DimensionVector,
    indecomposables: Vec<NamedModule>,
    probes: Vec<SummandProbe>,
    classes: Vec<ModuleClass>,
    index: HashMap<Vec<usize>, usize>,
    indecomposable_class: Vec<usize>,
    exact: bool,
    memo: Mutex<HashMap<Representation, usize>>,
    sequences: Mutex<Option<Arc<Vec<ClassSequences>>>>,
    hom_dims: Mutex<Option<Arc<Vec<Vec<usize>>>>>,
}

impl std::fmt::Debug for ModuleUniverse {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModuleUniverse")
            .field("bound", &self.bound)
            .field("indecomposables", &self.indecomposables.iter().map(|m| &m.name).collect::<Vec<_>>())
            .field("classes", &self.classes.len())
            .field("exact", &self.exact)
            .finish()
    }
}

impl ModuleUniverse {
    pub fn new(algebra: Arc<AlgebraSpec>, bound: &[usize]) -> Result<Arc<Self>> {
        let indecomposables = enumerate_indecomposables(&algebra, bound)?;
        let probes = indecomposables.iter().map(|m| SummandProbe::new(&m.rep)).collect::<Result<Vec<_>>>()?;
        let exact = match algebra.shape() {
            Shape::TypeA { .. } => bound.iter().all(|&b| b >= 1),
            _ => false,
        };

        let mut multisets = Vec::new();
        let mut current = vec![0usize; indecomposables.len()];
        collect_multisets(&indecomposables, bound, 0, &mut vec![0; bound.len()], &mut current, &mut multisets);

        let mut classes: Vec<ModuleClass> = multisets
            .into_iter()
            .map(|mult| {
                let mut rep = Representation::zero(algebra.clone());
                let mut names = Vec::new();
                for (i, &k) in mult.iter().enumerate() {
                    for _ in 0..k {
                        rep = rep.direct_sum(&indecomposables[i].rep);
                        names.push(indecomposables[i].name.clone());
                    }
                }
                ModuleClass { multiplicities: mult, name: names.join("+"), rep }
            })
            .collect();
        classes.sort_by_cached_key(|c| c.rep.canonical_key());
        let index: HashMap<_, _> = classes.iter().enumerate().map(|(i, c)| (c.multiplicities.clone(), i)).collect();
        let indecomposable_class = (0..indecomposables.len())
            .map(|i| {
                let mut unit = vec![0; indecomposables.len()];
                unit[i] = 1;
                index[&unit]
            })
            .collect();
        Ok(Arc::new(ModuleUniverse {
            algebra,
            bound: bound.to_vec(),
            indecomposables,
            probes,
            classes,
            index,
            indecomposable_class,
            exact,
            memo: Mutex::new(HashMap::new()),
            sequences: Mutex::new(None),
            hom_dims: Mutex::new(None),
        }))
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn bound(&self) -> &DimensionVector {
        &self.bound
    }

    /// True when the window contains every indecomposable of the algebra.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn indecomposables(&self) -> &[NamedModule] {
        &self.indecomposables
    }

    pub fn classes(&self) -> &[ModuleClass] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &ModuleClass {
        &self.classes[i]
    }

    /// Class index of the `i`-th indecomposable.
    pub fn indecomposable_class(&self, i: usize) -> usize {
        self.indecomposable_class[i]
    }

    pub fn class_of_multiplicities(&self, mult: &[usize]) -> Option<usize> {
        self.index.get(mult).copied()
    }

    /// Index of an indecomposable by name.
    pub fn indecomposable_by_name(&self, name: &str) -> Option<usize> {
        self.indecomposables.iter().position(|m| m.name == name)
    }

    /// Look up a class by its name: indecomposable names joined by `+`.
    pub fn class_by_name(&self, name: &str) -> Option<usize> {
        let mut mult = vec![0; self.indecomposables.len()];
        for part in split_sum(name) {
            mult[self.indecomposable_by_name(part.trim())?] += 1;
        }
        self.class_of_multiplicities(&mult)
    }

    /// Class of an arbitrary representation of the algebra.
    pub fn classify(&self, rep: &Representation) -> Result<usize> {
        if rep.is_zero() {
            return Err(Error::ZeroObject);
        }
        if !fits(rep.dims(), &self.bound) {
            return Err(Error::OutOfUniverse(format!(
                "dimension vector {:?} exceeds the universe bound {:?}",
                rep.dims(),
                self.bound
            )));
        }
        if let Some(&c) = self.memo.lock().unwrap().get(rep) {
            return Ok(c);
        }
        let mult = decompose(rep, &self.probes)?;
        let c = self
            .class_of_multiplicities(&mult)
            .ok_or_else(|| Error::InternalAssertion("decomposition is not a class of the universe".into()))?;
        self.memo.lock().unwrap().insert(rep.clone(), c);
        Ok(c)
    }

    /// Short exact sequences with middle term in each class, computed once.
    pub fn sequences(&self) -> Result<Arc<Vec<ClassSequences>>> {
        if let Some(s) = self.sequences.lock().unwrap().as_ref() {
            return Ok(s.clone());
        }
        let mut all = Vec::with_capacity(self.classes.len());
        for class in &self.classes {
            let mut pairs = BTreeSet::new();
            let mut count = 0;
            for sub in enumerate_submodules(&class.rep)? {
                if sub.is_zero() || sub.is_whole() {
                    continue;
                }
                count += 1;
                let l = self.classify(&sub.representation())?;
                let (q, _) = quotient_by(&class.rep, &sub)?;
                let n = self.classify(&q)?;
                pairs.insert((l, n));
            }
            all.push(ClassSequences { pairs: pairs.into_iter().collect(), submodule_count: count });
        }
        let all = Arc::new(all);
        *self.sequences.lock().unwrap() = Some(all.clone());
        Ok(all)
    }

    /// Classes of nonzero quotients of class `c`, including `c` itself.
    pub fn quotient_classes(&self, c: usize) -> Result<Vec<usize>> {
        let seq = self.sequences()?;
        let mut out: BTreeSet<usize> = seq[c].pairs.iter().map(|&(_, n)| n).collect();
        out.insert(c);
        Ok(out.into_iter().collect())
    }

    /// Classes of nonzero submodules of class `c`, including `c` itself.
    pub fn submodule_classes(&self, c: usize) -> Result<Vec<usize>> {
        let seq = self.sequences()?;
        let mut out: BTreeSet<usize> = seq[c].pairs.iter().map(|&(l, _)| l).collect();
        out.insert(c);
        Ok(out.into_iter().collect())
    }

    /// `dim Hom(X_i, X_j)` for indecomposables `X_i`, `X_j`.
    pub fn hom_dims(&self) -> Arc<Vec<Vec<usize>>> {
        if let Some(h) = self.hom_dims.lock().unwrap().as_ref() {
            return h.clone();
        }
        let h: Vec<Vec<usize>> = self
            .indecomposables
            .iter()
            .map(|x| self.indecomposables.iter().map(|y| HomSpace::compute(&x.rep, &y.rep).dim()).collect())
            .collect();
        let h = Arc::new(h);
        *self.hom_dims.lock().unwrap() = Some(h.clone());
        h
    }

    /// Indecomposable summands (with repetition removed) of class `c`.
    pub fn summands(&self, c: usize) -> Vec<usize> {
        self.classes[c].multiplicities.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, _)| i).collect()
    }
}

/// Split `a+b+c` at `+` signs outside brackets.
pub fn split_sum(name: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in name.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            '+' if depth == 0 => {
                parts.push(&name[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&name[start..]);
    parts
}

fn collect_multisets(
    indecs: &[NamedModule],
    bound: &[usize],
    from: usize,
    used: &mut Vec<usize>,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    for i in from..indecs.len() {
        let dims = indecs[i].rep.dims();
        if used.iter().zip(dims).zip(bound).any(|((u, d), b)| u + d > *b) {
            continue;
        }
        for (u, d) in used.iter_mut().zip(dims) {
            *u += d;
        }
        current[i] += 1;
        out.push(current.clone());
        collect_multisets(indecs, bound, i, used, current, out);
        current[i] -= 1;
        for (u, d) in used.iter_mut().zip(dims) {
            *u -= d;
        }
    }
}
