//! Bound quiver algebras `kQ/I` over a prime field and their text format.
//!
//! ```text
//! field p=2
//! vertices 2
//! arrow a 1 2
//! arrow b 1 2
//! relation 1*a.b + 1*c.d
//! ```
//!
//! Vertices are 1-based in documents and 0-based in memory. A path `a.b`
//! means "first `a`, then `b`".

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Brute-force limits attached to an algebra; every enumeration fails loudly past them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Limits {
    /// Largest total dimension for submodule and matrix-tuple enumeration.
    pub max_total_dim: usize,
    /// Largest Hom space (in elements) that may be enumerated.
    pub max_hom_elements: u64,
    /// Largest number of indecomposables for the subset-enumeration oracle.
    pub max_oracle_indecomposables: usize,
    /// Largest number of matrix tuples tried per dimension vector.
    pub max_matrix_tuples: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_total_dim: 6,
            max_hom_elements: 1 << 20,
            max_oracle_indecomposables: 15,
            max_matrix_tuples: 1 << 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuiverSpec {
    pub vertex_count: usize,
    pub arrows: Vec<Arrow>,
}

impl QuiverSpec {
    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    fn has_oriented_cycle(&self) -> bool {
        let n = self.vertex_count;
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        seen < n
    }

    /// Vertices reachable from `v` by a (possibly empty) path.
    pub fn reachable_from(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(u) = stack.pop() {
            for a in self.arrows.iter().filter(|a| a.source == u) {
                if !seen[a.target] {
                    seen[a.target] = true;
                    stack.push(a.target);
                }
            }
        }
        seen
    }

    /// Vertices from which `v` is reachable.
    pub fn reaching(&self, v: usize) -> Vec<bool> {
        (0..self.vertex_count).map(|u| self.reachable_from(u)[v]).collect()
    }
}

/// One summand `coefficient * path` of a relation; the path lists arrow indices in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationTerm {
    pub coefficient: u32,
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub terms: Vec<RelationTerm>,
}

/// Recognized algebra shapes with closed-form indecomposable catalogs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Linear `A_n`; the orientation word has one letter per arrow, `r` for `i -> i+1`.
    TypeA { orientation: String },
    /// Two vertices and two parallel arrows `1 -> 2`.
    Kronecker,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraSpec {
    pub quiver: QuiverSpec,
    pub relations: Vec<Relation>,
    pub field: PrimeField,
    pub limits: Limits,
}

impl AlgebraSpec {
    /// Validate and build an algebra with default limits.
    pub fn new(quiver: QuiverSpec, relations: Vec<Relation>, field: PrimeField) -> Result<Self> {
        let spec = AlgebraSpec { quiver, relations, field, limits: Limits::default() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.quiver.arrows
    }

    fn validate(&self) -> Result<()> {
        let q = &self.quiver;
        if q.vertex_count == 0 {
            return Err(Error::Validation("quiver needs at least one vertex".into()));
        }
        let mut names = HashSet::new();
        for a in &q.arrows {
            if a.source >= q.vertex_count || a.target >= q.vertex_count {
                return Err(Error::Validation(format!("arrow `{}` uses a vertex outside 1..{}", a.name, q.vertex_count)));
            }
            if !names.insert(a.name.as_str()) {
                return Err(Error::Validation(format!("arrow name `{}` is not unique", a.name)));
            }
        }
        if q.has_oriented_cycle() {
            return Err(Error::Validation("quiver has an oriented cycle; only acyclic quivers are supported".into()));
        }
        for (ri, rel) in self.relations.iter().enumerate() {
            if rel.terms.is_empty() {
                return Err(Error::Validation(format!("relation {} is empty", ri + 1)));
            }
            let mut ends = None;
            for term in &rel.terms {
                if term.path.len() < 2 {
                    return Err(Error::Validation(format!(
                        "relation {} has a path of length {}; admissible relations use paths of length at least 2",
                        ri + 1,
                        term.path.len()
                    )));
                }
                for w in term.path.windows(2) {
                    let (a, b) = (&q.arrows[w[0]], &q.arrows[w[1]]);
                    if a.target != b.source {
                        return Err(Error::Validation(format!(
                            "relation {}: arrows `{}` and `{}` are not composable",
                            ri + 1,
                            a.name,
                            b.name
                        )));
                    }
                }
                let s = q.arrows[term.path[0]].source;
                let t = q.arrows[*term.path.last().unwrap()].target;
                match ends {
                    None => ends = Some((s, t)),
                    Some(e) if e != (s, t) => {
                        return Err(Error::Validation(format!(
                            "relation {} mixes paths with different endpoints",
                            ri + 1
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> Shape {
        let q = &self.quiver;
        if !self.relations.is_empty() {
            return Shape::Other;
        }
        let n = q.vertex_count;
        if n == 2 && q.arrows.len() == 2 && q.arrows.iter().all(|a| a.source == 0 && a.target == 1) {
            return Shape::Kronecker;
        }
        if q.arrows.len() + 1 != n {
            return Shape::Other;
        }
        let mut word = vec![' '; n - 1];
        for a in &q.arrows {
            let (lo, hi) = (a.source.min(a.target), a.source.max(a.target));
            if hi != lo + 1 || word[lo] != ' ' {
                return Shape::Other;
            }
            word[lo] = if a.source < a.target { 'r' } else { 'l' };
        }
        Shape::TypeA { orientation: word.into_iter().collect() }
    }

    /// Render as a canonical document accepted by [`parse_algebra`].
    pub fn to_document(&self) -> String {
        let mut out = format!("field p={}\nvertices {}\n", self.field.p(), self.quiver.vertex_count);
        for a in &self.quiver.arrows {
            out.push_str(&format!("arrow {} {} {}\n", a.name, a.source + 1, a.target + 1));
        }
        for rel in &self.relations {
            let terms: Vec<String> = rel
                .terms
                .iter()
                .map(|t| {
                    let path: Vec<&str> = t.path.iter().map(|&i| self.quiver.arrows[i].name.as_str()).collect();
                    format!("{}*{}", t.coefficient, path.join("."))
                })
                .collect();
            out.push_str(&format!("relation {}\n", terms.join(" + ")));
        }
        out
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Tokens of a line together with their 1-based starting column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_usize(tok: (usize, &str), line: usize, what: &str) -> Result<usize> {
    tok.1.parse().map_err(|_| Error::parse(line, tok.0, format!("expected {what}, found `{}`", tok.1)))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parse an algebra document (see the module docs for the grammar).
pub fn parse_algebra(text: &str) -> Result<AlgebraSpec> {
    let mut p: Option<u32> = None;
    let mut vertices: Option<usize> = None;
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut raw_relations: Vec<(usize, usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        let toks = tokens(line);
        let Some(&(col, keyword)) = toks.first() else { continue };
        match keyword {
            "field" => {
                let tok = *toks.get(1).ok_or_else(|| Error::parse(lineno, col, "`field` needs a value"))?;
                let v = tok.1.strip_prefix("p=").unwrap_or(tok.1);
                let parsed: u32 =
                    v.parse().map_err(|_| Error::parse(lineno, tok.0, format!("bad field characteristic `{}`", tok.1)))?;
                p = Some(parsed);
            }
            "vertices" => {
                let tok = *toks.get(1).ok_or_else(|| Error::parse(lineno, col, "`vertices` needs a count"))?;
                vertices = Some(parse_usize(tok, lineno, "a vertex count")?);
            }
            "arrow" => {
                if toks.len() != 4 {
                    return Err(Error::parse(lineno, col, "expected `arrow <name> <source> <target>`"));
                }
                let name = toks[1].1;
                if !is_identifier(name) {
                    return Err(Error::parse(lineno, toks[1].0, format!("`{name}` is not a valid arrow name")));
                }
                let s = parse_usize(toks[2], lineno, "a source vertex")?;
                let t = parse_usize(toks[3], lineno, "a target vertex")?;
                if s == 0 || t == 0 {
                    return Err(Error::Validation(format!("arrow `{name}` uses vertex 0; vertices are numbered from 1")));
                }
                arrows.push(Arrow { name: name.to_string(), source: s - 1, target: t - 1 });
            }
            "relation" => {
                let rest_start = col - 1 + keyword.len();
                let expr: String = line[rest_start..].chars().filter(|c| !c.is_whitespace()).collect();
                if expr.is_empty() {
                    return Err(Error::parse(lineno, col, "`relation` needs an expression"));
                }
                raw_relations.push((lineno, col, expr));
            }
            other => return Err(Error::parse(lineno, col, format!("unknown keyword `{other}`"))),
        }
    }

    let field = PrimeField::new(p.unwrap_or(2))?;
    let vertex_count = vertices.ok_or_else(|| Error::parse(1, 1, "missing `vertices` line"))?;
    let quiver = QuiverSpec { vertex_count, arrows };

    let mut relations = Vec::new();
    for (lineno, col, expr) in raw_relations {
        relations.push(parse_relation(&expr, &quiver, field, lineno, col)?);
    }
    AlgebraSpec::new(quiver, relations, field)
}

fn parse_relation(expr: &str, quiver: &QuiverSpec, field: PrimeField, line: usize, col: usize) -> Result<Relation> {
    // split into signed terms
    let mut terms_raw: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    for ch in expr.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('*') {
            terms_raw.push((negative, std::mem::take(&mut cur)));
            negative = ch == '-';
        } else if (ch == '+' || ch == '-') && cur.is_empty() {
            negative ^= ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        terms_raw.push((negative, cur));
    }
    let mut terms = Vec::new();
    for (neg, t) in terms_raw {
        let (coef, path) = match t.split_once('*') {
            Some((c, p)) => {
                let c: i64 = c.parse().map_err(|_| Error::parse(line, col, format!("bad coefficient in `{t}`")))?;
                (c, p)
            }
            None => (1, t.as_str()),
        };
        let coef = if neg { -coef } else { coef };
        let mut arrows = Vec::new();
        for name in path.split('.') {
            let idx = quiver
                .arrow_index(name)
                .ok_or_else(|| Error::Validation(format!("relation on line {line} uses unknown arrow `{name}`")))?;
            arrows.push(idx);
        }
        let c = field.reduce(coef);
        if c != 0 {
            terms.push(RelationTerm { coefficient: c, path: arrows });
        }
    }
    Ok(Relation { terms })
}
