//! Representations of bound quivers, their morphisms and submodules.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::field::{Matrix, PrimeField, Subspace};

/// Dimension vector of a representation; its class in the Grothendieck group.
pub type DimensionVector = Vec<usize>;

/// A representation: one matrix per arrow, of shape `dims[target] x dims[source]`.
#[derive(Clone)]
pub struct Representation {
    algebra: Arc<AlgebraSpec>,
    dims: DimensionVector,
    matrices: Vec<Matrix>,
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.matrices == other.matrices && self.algebra == other.algebra
    }
}

impl Eq for Representation {}

impl Hash for Representation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dims.hash(state);
        self.matrices.hash(state);
    }
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation").field("dims", &self.dims).field("matrices", &self.matrices).finish()
    }
}

impl Representation {
    pub fn new(algebra: Arc<AlgebraSpec>, dims: DimensionVector, matrices: Vec<Matrix>) -> Result<Self> {
        if dims.len() != algebra.vertex_count() {
            return Err(Error::Validation(format!(
                "dimension vector has {} entries but the quiver has {} vertices",
                dims.len(),
                algebra.vertex_count()
            )));
        }
        if matrices.len() != algebra.arrows().len() {
            return Err(Error::Validation(format!(
                "expected {} arrow matrices, got {}",
                algebra.arrows().len(),
                matrices.len()
            )));
        }
        let p = algebra.field.p();
        for (arrow, m) in algebra.arrows().iter().zip(&matrices) {
            if m.rows() != dims[arrow.target] || m.cols() != dims[arrow.source] {
                return Err(Error::Validation(format!(
                    "matrix of arrow `{}` is {}x{}, expected {}x{}",
                    arrow.name,
                    m.rows(),
                    m.cols(),
                    dims[arrow.target],
                    dims[arrow.source]
                )));
            }
            if m.data().iter().any(|&x| x >= p) {
                return Err(Error::Validation(format!("matrix of arrow `{}` has entries outside F_{p}", arrow.name)));
            }
        }
        let rep = Representation { algebra, dims, matrices };
        for (i, rel) in rep.algebra.relations.iter().enumerate() {
            let f = rep.field();
            let t = rep.algebra.arrows()[*rel.terms[0].path.last().unwrap()].target;
            let s = rep.algebra.arrows()[rel.terms[0].path[0]].source;
            let mut total = Matrix::zeros(rep.dims[t], rep.dims[s]);
            for term in &rel.terms {
                total = total.add(f, &rep.evaluate_path(&term.path).scale(f, term.coefficient));
            }
            if !total.is_zero() {
                return Err(Error::Validation(format!("relation {} does not vanish on the representation", i + 1)));
            }
        }
        Ok(rep)
    }

    pub fn zero(algebra: Arc<AlgebraSpec>) -> Self {
        let n = algebra.vertex_count();
        let matrices = algebra.arrows().iter().map(|_| Matrix::zeros(0, 0)).collect();
        Representation { algebra, dims: vec![0; n], matrices }
    }

    /// The simple module at vertex `v` (0-based).
    pub fn simple(algebra: Arc<AlgebraSpec>, v: usize) -> Self {
        let mut dims = vec![0; algebra.vertex_count()];
        dims[v] = 1;
        let matrices =
            algebra.arrows().iter().map(|a| Matrix::zeros(dims[a.target], dims[a.source])).collect();
        Representation { algebra, dims, matrices }
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Concatenated arrow matrix entries; the tie-breaker of the canonical module order.
    pub fn encoding(&self) -> Vec<u32> {
        self.matrices.iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    /// Canonical ordering key: total dimension, dimension vector, matrix encoding.
    pub fn canonical_key(&self) -> (usize, DimensionVector, Vec<u32>) {
        (self.total_dim(), self.dims.clone(), self.encoding())
    }

    /// Matrix of a path given as arrow indices applied left to right.
    pub fn evaluate_path(&self, path: &[usize]) -> Matrix {
        let f = self.field();
        let first = &self.algebra.arrows()[path[0]];
        let mut acc = Matrix::identity(self.dims[first.source]);
        for &a in path {
            acc = self.matrices[a].mul(f, &acc);
        }
        acc
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| a.block_diag(b)).collect();
        Representation { algebra: self.algebra.clone(), dims, matrices }
    }

    /// Transport along invertible vertex matrices `g`: arrow `a` becomes `g_t M_a g_s^-1`.
    pub fn base_change(&self, g: &[Matrix]) -> Result<Representation> {
        let f = self.field();
        let mut inverses = Vec::with_capacity(g.len());
        for (v, m) in g.iter().enumerate() {
            if m.rows() != self.dims[v] {
                return Err(Error::Validation(format!("base change at vertex {} has wrong size", v + 1)));
            }
            inverses.push(m.inverse(f).ok_or_else(|| Error::Validation("base change is not invertible".into()))?);
        }
        let matrices = self
            .algebra
            .arrows()
            .iter()
            .zip(&self.matrices)
            .map(|(a, m)| g[a.target].mul(f, &m.mul(f, &inverses[a.source])))
            .collect();
        Ok(Representation { algebra: self.algebra.clone(), dims: self.dims.clone(), matrices })
    }

    fn check_bound(&self) -> Result<()> {
        let max = self.algebra.limits.max_total_dim;
        if self.total_dim() > max {
            return Err(Error::BoundExceeded(format!(
                "module of total dimension {} exceeds the brute-force bound {max}",
                self.total_dim()
            )));
        }
        Ok(())
    }
}

/// A morphism given by one block per vertex, `blocks[v]` of shape `target.dims[v] x source.dims[v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: Representation,
    pub target: Representation,
    pub blocks: Vec<Matrix>,
}

impl Morphism {
    pub fn new(source: Representation, target: Representation, blocks: Vec<Matrix>) -> Result<Self> {
        let f = source.field();
        if blocks.len() != source.dims.len() {
            return Err(Error::Validation("morphism needs one block per vertex".into()));
        }
        for (v, b) in blocks.iter().enumerate() {
            if b.rows() != target.dims[v] || b.cols() != source.dims[v] {
                return Err(Error::Validation(format!("morphism block at vertex {} has wrong shape", v + 1)));
            }
        }
        for (i, a) in source.algebra.arrows().iter().enumerate() {
            let lhs = blocks[a.target].mul(f, &source.matrices[i]);
            let rhs = target.matrices[i].mul(f, &blocks[a.source]);
            if lhs != rhs {
                return Err(Error::Validation(format!("blocks do not intertwine along arrow `{}`", a.name)));
            }
        }
        Ok(Morphism { source, target, blocks })
    }

    pub fn identity(m: &Representation) -> Self {
        let blocks = m.dims.iter().map(|&d| Matrix::identity(d)).collect();
        Morphism { source: m.clone(), target: m.clone(), blocks }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    pub fn is_isomorphism(&self) -> bool {
        let f = self.source.field();
        self.blocks.iter().all(|b| b.is_invertible(f))
    }

    pub fn is_monomorphism(&self) -> bool {
        let f = self.source.field();
        self.blocks.iter().all(|b| b.rank(f) == b.cols())
    }

    pub fn is_epimorphism(&self) -> bool {
        let f = self.source.field();
        self.blocks.iter().all(|b| b.rank(f) == b.rows())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Morphism {
        let f = self.source.field();
        let blocks = other.blocks.iter().zip(&self.blocks).map(|(g, h)| g.mul(f, h)).collect();
        Morphism { source: self.source.clone(), target: other.target.clone(), blocks }
    }

    pub fn kernel(&self) -> SubmoduleEmbedding {
        let f = self.source.field();
        let subspaces = self
            .blocks
            .iter()
            .enumerate()
            .map(|(v, b)| Subspace::span(f, self.source.dims[v], &b.kernel(f)))
            .collect();
        SubmoduleEmbedding { ambient: self.source.clone(), subspaces }
    }

    pub fn image(&self) -> SubmoduleEmbedding {
        let f = self.source.field();
        let subspaces = self
            .blocks
            .iter()
            .enumerate()
            .map(|(v, b)| {
                let cols: Vec<Vec<u32>> = (0..b.cols()).map(|c| b.column(c)).collect();
                Subspace::span(f, self.target.dims[v], &cols)
            })
            .collect();
        SubmoduleEmbedding { ambient: self.target.clone(), subspaces }
    }

    pub fn cokernel(&self) -> Representation {
        quotient_unchecked(&self.target, &self.image().subspaces).0
    }
}

/// A submodule, given by an arrow-stable subspace at every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubmoduleEmbedding {
    pub ambient: Representation,
    pub subspaces: Vec<Subspace>,
}

impl SubmoduleEmbedding {
    pub fn new(ambient: Representation, subspaces: Vec<Subspace>) -> Result<Self> {
        if subspaces.len() != ambient.dims.len()
            || subspaces.iter().zip(&ambient.dims).any(|(s, &d)| s.ambient() != d)
        {
            return Err(Error::InvalidEmbedding("subspaces do not match the vertex dimensions".into()));
        }
        if !is_arrow_stable(&ambient, &subspaces) {
            return Err(Error::InvalidEmbedding("subspace tuple is not stable under the arrows".into()));
        }
        Ok(SubmoduleEmbedding { ambient, subspaces })
    }

    pub fn zero(ambient: &Representation) -> Self {
        let subspaces = ambient.dims.iter().map(|&d| Subspace::zero(d)).collect();
        SubmoduleEmbedding { ambient: ambient.clone(), subspaces }
    }

    pub fn whole(ambient: &Representation) -> Self {
        let subspaces = ambient.dims.iter().map(|&d| Subspace::full(d)).collect();
        SubmoduleEmbedding { ambient: ambient.clone(), subspaces }
    }

    pub fn dims(&self) -> DimensionVector {
        self.subspaces.iter().map(|s| s.dim()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.subspaces.iter().all(|s| s.dim() == 0)
    }

    pub fn is_whole(&self) -> bool {
        self.subspaces.iter().zip(&self.ambient.dims).all(|(s, &d)| s.dim() == d)
    }

    pub fn contains(&self, other: &SubmoduleEmbedding) -> bool {
        let f = self.ambient.field();
        self.subspaces.iter().zip(&other.subspaces).all(|(a, b)| a.contains_subspace(f, b))
    }

    /// The submodule as a representation in the echelon bases of its subspaces.
    pub fn representation(&self) -> Representation {
        let m = &self.ambient;
        let f = m.field();
        let matrices = m
            .algebra
            .arrows()
            .iter()
            .zip(&m.matrices)
            .map(|(a, mat)| {
                let src = &self.subspaces[a.source];
                let tgt = &self.subspaces[a.target];
                let cols: Vec<Vec<u32>> =
                    src.basis_vectors().iter().map(|b| tgt.coordinates(&mat.mul_vec(f, b))).collect();
                Matrix::from_columns(&cols, tgt.dim())
            })
            .collect();
        Representation { algebra: m.algebra.clone(), dims: self.dims(), matrices }
    }

    pub fn inclusion(&self) -> Morphism {
        let blocks = self.subspaces.iter().map(|s| s.basis().transpose()).collect();
        Morphism { source: self.representation(), target: self.ambient.clone(), blocks }
    }

    /// Encoding used to order submodules with equal dimension vectors.
    fn encoding(&self) -> Vec<u32> {
        self.subspaces.iter().flat_map(|s| s.basis().data().iter().copied()).collect()
    }
}

fn is_arrow_stable(m: &Representation, subspaces: &[Subspace]) -> bool {
    let f = m.field();
    m.algebra.arrows().iter().zip(&m.matrices).all(|(a, mat)| {
        subspaces[a.source].basis_vectors().iter().all(|b| subspaces[a.target].contains(f, &mat.mul_vec(f, b)))
    })
}

/// Every submodule of `m`, including `0` and `m`, ordered by dimension vector then basis encoding.
pub fn enumerate_submodules(m: &Representation) -> Result<Vec<SubmoduleEmbedding>> {
    m.check_bound()?;
    let f = m.field();
    let n = m.dims.len();
    let per_vertex: Vec<Vec<Subspace>> = m.dims.iter().map(|&d| Subspace::enumerate_all(f, d)).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<Subspace> = Vec::with_capacity(n);

    fn rec(
        m: &Representation,
        per_vertex: &[Vec<Subspace>],
        chosen: &mut Vec<Subspace>,
        out: &mut Vec<SubmoduleEmbedding>,
    ) {
        let v = chosen.len();
        if v == per_vertex.len() {
            out.push(SubmoduleEmbedding { ambient: m.clone(), subspaces: chosen.clone() });
            return;
        }
        let f = m.field();
        for cand in &per_vertex[v] {
            chosen.push(cand.clone());
            let ok = m.algebra.arrows().iter().zip(&m.matrices).all(|(a, mat)| {
                if a.source.max(a.target) != v {
                    return true;
                }
                chosen[a.source].basis_vectors().iter().all(|b| chosen[a.target].contains(f, &mat.mul_vec(f, b)))
            });
            if ok {
                rec(m, per_vertex, chosen, out);
            }
            chosen.pop();
        }
    }

    rec(m, &per_vertex, &mut chosen, &mut out);
    out.sort_by_cached_key(|s| (s.dims(), s.encoding()));
    Ok(out)
}

fn quotient_unchecked(m: &Representation, subspaces: &[Subspace]) -> (Representation, Morphism) {
    let f = m.field();
    let dims: Vec<usize> = subspaces.iter().map(|s| s.ambient() - s.dim()).collect();
    let matrices = m
        .algebra
        .arrows()
        .iter()
        .zip(&m.matrices)
        .map(|(a, mat)| {
            let cols: Vec<Vec<u32>> = subspaces[a.source]
                .free_columns()
                .into_iter()
                .map(|c| subspaces[a.target].quotient_coordinates(f, &mat.column(c)))
                .collect();
            Matrix::from_columns(&cols, dims[a.target])
        })
        .collect();
    let q = Representation { algebra: m.algebra.clone(), dims: dims.clone(), matrices };
    let blocks = subspaces
        .iter()
        .enumerate()
        .map(|(v, s)| {
            let cols: Vec<Vec<u32>> = (0..s.ambient())
                .map(|c| {
                    let mut e = vec![0; s.ambient()];
                    e[c] = 1;
                    s.quotient_coordinates(f, &e)
                })
                .collect();
            Matrix::from_columns(&cols, dims[v])
        })
        .collect();
    let proj = Morphism { source: m.clone(), target: q.clone(), blocks };
    (q, proj)
}

/// The quotient `m / l` together with the canonical projection.
pub fn quotient_by(m: &Representation, l: &SubmoduleEmbedding) -> Result<(Representation, Morphism)> {
    if l.ambient != *m {
        return Err(Error::InvalidEmbedding("submodule belongs to a different module".into()));
    }
    if !is_arrow_stable(m, &l.subspaces) {
        return Err(Error::InvalidEmbedding("subspace tuple is not stable under the arrows".into()));
    }
    Ok(quotient_unchecked(m, &l.subspaces))
}

/// The space `Hom(m, n)`, stored as an echelon basis of flattened block tuples.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source_dims: DimensionVector,
    target_dims: DimensionVector,
    space: Subspace,
}

impl HomSpace {
    pub fn compute(m: &Representation, n: &Representation) -> Self {
        let f = m.field();
        let nv = m.dims.len();
        let mut offsets = Vec::with_capacity(nv);
        let mut total = 0;
        for v in 0..nv {
            offsets.push(total);
            total += m.dims[v] * n.dims[v];
        }
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (idx, a) in m.algebra.arrows().iter().enumerate() {
            let (s, t) = (a.source, a.target);
            let ma = &m.matrices[idx];
            let na = &n.matrices[idx];
            // X_t M_a - N_a X_s = 0, entry (i, j) with i < dN[t], j < dM[s]
            for i in 0..n.dims[t] {
                for j in 0..m.dims[s] {
                    let mut row = vec![0u32; total];
                    for k in 0..m.dims[t] {
                        let idx_x = offsets[t] + i * m.dims[t] + k;
                        row[idx_x] = f.add(row[idx_x], ma.get(k, j));
                    }
                    for k in 0..n.dims[s] {
                        let idx_x = offsets[s] + k * m.dims[s] + j;
                        row[idx_x] = f.sub(row[idx_x], na.get(i, k));
                    }
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
        }
        let kernel = if rows.is_empty() {
            (0..total)
                .map(|i| {
                    let mut e = vec![0; total];
                    e[i] = 1;
                    e
                })
                .collect()
        } else {
            Matrix::from_rows(&rows, total).kernel(f)
        };
        HomSpace {
            source_dims: m.dims.clone(),
            target_dims: n.dims.clone(),
            space: Subspace::span(f, total, &kernel),
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    /// Block tuple of a flattened element.
    pub fn unflatten(&self, v: &[u32]) -> Vec<Matrix> {
        let mut out = Vec::with_capacity(self.source_dims.len());
        let mut pos = 0;
        for (&r, &c) in self.target_dims.iter().zip(&self.source_dims) {
            out.push(Matrix::from_vec(r, c, v[pos..pos + r * c].to_vec()));
            pos += r * c;
        }
        out
    }

    pub fn flatten(blocks: &[Matrix]) -> Vec<u32> {
        blocks.iter().flat_map(|b| b.data().iter().copied()).collect()
    }

    pub fn basis_blocks(&self) -> Vec<Vec<Matrix>> {
        self.space.basis_vectors().iter().map(|v| self.unflatten(v)).collect()
    }

    /// Number of elements, failing when it exceeds `limit`.
    pub fn checked_size(&self, p: u32, limit: u64) -> Result<u64> {
        let mut size: u64 = 1;
        for _ in 0..self.dim() {
            size = size.saturating_mul(p as u64);
            if size > limit {
                return Err(Error::SearchSpaceExceeded(format!(
                    "Hom space of dimension {} over F_{p} has more than {limit} elements",
                    self.dim()
                )));
            }
        }
        Ok(size)
    }

    /// Visit every element as a flattened vector; stops early when `visit` returns true.
    pub fn any_element(&self, field: PrimeField, limit: u64, mut visit: impl FnMut(&[u32]) -> bool) -> Result<bool> {
        let size = self.checked_size(field.p(), limit)?;
        let basis = self.space.basis_vectors();
        let len = self.space.ambient();
        let mut coeffs = vec![0u32; basis.len()];
        for _ in 0..size {
            let mut v = vec![0u32; len];
            for (c, b) in coeffs.iter().zip(&basis) {
                if *c != 0 {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = field.add(*x, field.mul(*c, *y));
                    }
                }
            }
            if visit(&v) {
                return Ok(true);
            }
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < field.p() {
                    break;
                }
                *c = 0;
            }
        }
        Ok(false)
    }
}

/// An `F_p`-basis of `Hom(m, n)`; empty exactly when the Hom space vanishes.
pub fn hom_basis(m: &Representation, n: &Representation) -> Vec<Morphism> {
    HomSpace::compute(m, n)
        .basis_blocks()
        .into_iter()
        .map(|blocks| Morphism { source: m.clone(), target: n.clone(), blocks })
        .collect()
}

fn blocks_invertible(field: PrimeField, blocks: &[Matrix]) -> bool {
    blocks.iter().all(|b| b.is_invertible(field))
}

/// Decide `m ≅ n` by searching `Hom(m, n)` for an invertible element.
pub fn is_isomorphic(m: &Representation, n: &Representation) -> Result<bool> {
    if m.dims != n.dims {
        return Ok(false);
    }
    if m == n {
        return Ok(true);
    }
    let hom = HomSpace::compute(m, n);
    if hom.dim() != HomSpace::compute(m, m).dim() || hom.dim() != HomSpace::compute(n, n).dim() {
        return Ok(false);
    }
    let f = m.field();
    hom.any_element(f, m.algebra.limits.max_hom_elements, |v| blocks_invertible(f, &hom.unflatten(v)))
}

/// True when the endomorphism ring has no idempotents besides 0 and 1.
pub fn is_indecomposable(m: &Representation) -> Result<bool> {
    if m.is_zero() {
        return Ok(false);
    }
    let f = m.field();
    let end = HomSpace::compute(m, m);
    if end.dim() == 1 {
        return Ok(true);
    }
    let found = end.any_element(f, m.algebra.limits.max_hom_elements, |v| {
        let blocks = end.unflatten(v);
        let zero = blocks.iter().all(|b| b.is_zero());
        let identity = blocks.iter().all(|b| *b == Matrix::identity(b.rows()));
        !zero && !identity && blocks.iter().all(|b| b.mul(f, b) == *b)
    })?;
    Ok(!found)
}
