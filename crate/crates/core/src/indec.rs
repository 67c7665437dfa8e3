//! Indecomposable modules: enumeration, local endomorphism rings and Krull-Schmidt multiplicities.

use std::sync::Arc;

use crate::algebra::{AlgebraSpec, Shape};
use crate::catalog;
use crate::error::{Error, Result};
use crate::field::{Matrix, Subspace};
use crate::rep::{DimensionVector, HomSpace, Representation};

/// An indecomposable module together with its display name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedModule {
    pub name: String,
    pub rep: Representation,
}

/// Precomputed data for counting how often an indecomposable occurs as a direct summand.
#[derive(Clone, Debug)]
pub struct SummandProbe {
    rep: Representation,
    end: HomSpace,
    radical: Subspace,
}

impl SummandProbe {
    /// Fails with `InternalAssertion` when the endomorphism ring is not local.
    pub fn new(rep: &Representation) -> Result<Self> {
        let end = HomSpace::compute(rep, rep);
        let radical = local_radical(rep, &end)?
            .ok_or_else(|| Error::InternalAssertion("module expected to be indecomposable has a non-local endomorphism ring".into()))?;
        Ok(SummandProbe { rep: rep.clone(), end, radical })
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    /// Dimension of `End(X)/rad End(X)` over the prime field.
    pub fn head_dim(&self) -> usize {
        self.end.dim() - self.radical.dim()
    }

    /// Multiplicity of this module as a direct summand of `n`.
    pub fn multiplicity(&self, n: &Representation) -> Result<usize> {
        if self.rep.dims().iter().zip(n.dims()).any(|(a, b)| a > b) {
            return Ok(0);
        }
        let f = n.field();
        let into = HomSpace::compute(&self.rep, n);
        if into.dim() == 0 {
            return Ok(0);
        }
        let back = HomSpace::compute(n, &self.rep);
        if back.dim() == 0 {
            return Ok(0);
        }
        let gs = back.basis_blocks();
        let rows: Vec<Vec<u32>> = into
            .basis_blocks()
            .iter()
            .map(|fb| {
                let mut row = Vec::new();
                for g in &gs {
                    let comp: Vec<Matrix> = g.iter().zip(fb).map(|(gv, fv)| gv.mul(f, fv)).collect();
                    let coords = self.end.space().coordinates(&HomSpace::flatten(&comp));
                    row.extend(self.radical.quotient_coordinates(f, &coords));
                }
                row
            })
            .collect();
        let width = rows[0].len();
        let rank = Matrix::from_rows(&rows, width).rank(f);
        let d = self.head_dim();
        if rank % d != 0 {
            return Err(Error::InternalAssertion(format!("summand pairing has rank {rank}, not a multiple of {d}")));
        }
        Ok(rank / d)
    }
}

/// The radical of `End(m)` in echelon coordinates when the ring is local, `None` otherwise.
fn local_radical(m: &Representation, end: &HomSpace) -> Result<Option<Subspace>> {
    if m.is_zero() {
        return Ok(None);
    }
    let f = m.field();
    let mut non_units: Vec<Vec<u32>> = Vec::new();
    end.any_element(f, m.algebra().limits.max_hom_elements, |v| {
        let blocks = end.unflatten(v);
        if !blocks.iter().all(|b| b.is_invertible(f)) {
            non_units.push(end.space().coordinates(v));
        }
        false
    })?;
    let radical = Subspace::span(f, end.dim(), &non_units);
    let expected = (f.p() as u64).pow(radical.dim() as u32);
    Ok((expected == non_units.len() as u64).then_some(radical))
}

/// Multiplicities of `probes` in `n`; fails when they do not account for every dimension.
pub fn decompose(n: &Representation, probes: &[SummandProbe]) -> Result<Vec<usize>> {
    let mut mult = Vec::with_capacity(probes.len());
    let mut dims = vec![0usize; n.dims().len()];
    for probe in probes {
        let k = probe.multiplicity(n)?;
        for (d, x) in dims.iter_mut().zip(probe.rep.dims()) {
            *d += k * x;
        }
        mult.push(k);
    }
    if &dims != n.dims() {
        return Err(Error::OutOfUniverse(format!(
            "module with dimension vector {:?} is not a sum of the known indecomposables",
            n.dims()
        )));
    }
    Ok(mult)
}

/// Every dimension vector `<= bound` componentwise, nonzero, in canonical order.
pub fn dimension_vectors_below(bound: &[usize]) -> Vec<DimensionVector> {
    let mut out = vec![vec![]];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..=b).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&x| x > 0));
    out.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    out
}

fn sort_canonical(list: &mut [NamedModule]) {
    list.sort_by_key(|m| m.rep.canonical_key());
}

/// One representative per isomorphism class of indecomposables with dimension vector `<= bound`.
pub fn enumerate_indecomposables(algebra: &Arc<AlgebraSpec>, bound: &[usize]) -> Result<Vec<NamedModule>> {
    check_bound_shape(algebra, bound)?;
    let mut list = match algebra.shape() {
        Shape::TypeA { orientation } => catalog::interval_modules(algebra, &orientation)
            .into_iter()
            .filter(|m| fits(m.rep.dims(), bound))
            .collect(),
        Shape::Kronecker => catalog::kronecker_classification(algebra, bound),
        Shape::Other => return brute_force_indecomposables(algebra, bound),
    };
    sort_canonical(&mut list);
    Ok(list)
}

fn check_bound_shape(algebra: &AlgebraSpec, bound: &[usize]) -> Result<()> {
    if bound.len() != algebra.vertex_count() {
        return Err(Error::Validation(format!(
            "bound has {} entries but the quiver has {} vertices",
            bound.len(),
            algebra.vertex_count()
        )));
    }
    Ok(())
}

pub(crate) fn fits(dims: &[usize], bound: &[usize]) -> bool {
    dims.iter().zip(bound).all(|(d, b)| d <= b)
}

/// Exhaustive search over all matrix tuples, bucketing by isomorphism.
pub fn brute_force_indecomposables(algebra: &Arc<AlgebraSpec>, bound: &[usize]) -> Result<Vec<NamedModule>> {
    check_bound_shape(algebra, bound)?;
    let f = algebra.field;
    let limits = algebra.limits;
    let mut found: Vec<(Representation, SummandProbe)> = Vec::new();
    for dims in dimension_vectors_below(bound) {
        let total: usize = dims.iter().sum();
        if total > limits.max_total_dim {
            return Err(Error::BoundExceeded(format!(
                "dimension vector {dims:?} exceeds the brute-force total dimension {}",
                limits.max_total_dim
            )));
        }
        let shapes: Vec<(usize, usize)> =
            algebra.arrows().iter().map(|a| (dims[a.target], dims[a.source])).collect();
        let entries: usize = shapes.iter().map(|(r, c)| r * c).sum();
        let mut count: u64 = 1;
        for _ in 0..entries {
            count = count.saturating_mul(f.p() as u64);
        }
        if count > limits.max_matrix_tuples {
            return Err(Error::BoundExceeded(format!(
                "{count} matrix tuples for dimension vector {dims:?} exceed the limit {}",
                limits.max_matrix_tuples
            )));
        }
        let mut data = vec![0u32; entries];
        for _ in 0..count {
            let mut matrices = Vec::with_capacity(shapes.len());
            let mut pos = 0;
            for &(r, c) in &shapes {
                matrices.push(Matrix::from_vec(r, c, data[pos..pos + r * c].to_vec()));
                pos += r * c;
            }
            // advance with the last entry varying fastest so candidates come in lex order
            for x in data.iter_mut().rev() {
                *x += 1;
                if *x < f.p() {
                    break;
                }
                *x = 0;
            }
            let Ok(cand) = Representation::new(algebra.clone(), dims.clone(), matrices) else {
                continue;
            };
            let mut known = false;
            for (_, probe) in &found {
                if probe.multiplicity(&cand)? > 0 {
                    known = true;
                    break;
                }
            }
            if known {
                continue;
            }
            let probe = SummandProbe::new(&cand).map_err(|_| {
                Error::InternalAssertion(format!(
                    "module with dimension vector {dims:?} has no known summand and is not indecomposable"
                ))
            })?;
            found.push((cand, probe));
        }
    }
    let mut per_dims: std::collections::HashMap<DimensionVector, usize> = Default::default();
    let list = found
        .into_iter()
        .map(|(rep, _)| {
            let dims = rep.dims().clone();
            let k = per_dims.entry(dims.clone()).or_insert(0);
            *k += 1;
            let name = if rep.total_dim() == 1 {
                format!("S{}", dims.iter().position(|&d| d == 1).unwrap() + 1)
            } else {
                let d: Vec<String> = dims.iter().map(|x| x.to_string()).collect();
                format!("X[{}]#{}", d.join(","), k)
            };
            NamedModule { name, rep }
        })
        .collect();
    Ok(list)
}
