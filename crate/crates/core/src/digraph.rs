//! Finite digraphs, digraph maps, digraph pairs, and the three product
//! constructions.
//!
//! A digraph is a finite ordered vertex set with irreflexive arrows and an
//! optional basepoint. Values are immutable after construction and cheap to
//! clone (the payload is shared), so they can be passed around freely by the
//! search engine and across threads.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A vertex identifier: either an atom or a canonical pair built by a
/// product construction. The derived order is total and stable, which makes
/// product vertices canonical tuples and digraph equality structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VertexName {
    Atom(Box<str>),
    Pair(Box<VertexName>, Box<VertexName>),
}

impl VertexName {
    pub fn atom(s: &str) -> Self {
        VertexName::Atom(s.into())
    }

    pub fn pair(a: VertexName, b: VertexName) -> Self {
        VertexName::Pair(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexName::Atom(s) => write!(f, "{s}"),
            VertexName::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl From<&str> for VertexName {
    fn from(s: &str) -> Self {
        VertexName::atom(s)
    }
}

#[derive(PartialEq, Eq, Hash, Debug)]
struct DigraphInner {
    name: String,
    /// Sorted ascending; a vertex id is its position here.
    names: Vec<VertexName>,
    arrows: BTreeSet<(u32, u32)>,
    out: Vec<Vec<u32>>,
    inn: Vec<Vec<u32>>,
    basepoint: Option<u32>,
}

/// An immutable finite digraph. Cloning shares the payload.
#[derive(Clone)]
pub struct Digraph(Arc<DigraphInner>);

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.names == other.0.names
                && self.0.arrows == other.0.arrows
                && self.0.basepoint == other.0.basepoint)
    }
}
impl Eq for Digraph {}

impl std::hash::Hash for Digraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.names.hash(state);
        self.0.arrows.hash(state);
        self.0.basepoint.hash(state);
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Digraph({}, {} vertices, {} arrows",
            self.0.name,
            self.vertex_count(),
            self.arrow_count()
        )?;
        if let Some(b) = self.0.basepoint {
            write!(f, ", base {}", self.0.names[b as usize])?;
        }
        write!(f, ")")
    }
}

impl Digraph {
    /// Builds a digraph from vertex names, arrows given by name, and an
    /// optional basepoint. Rejects self-loops, duplicate vertex names and
    /// undeclared arrow endpoints. Duplicate arrows collapse silently.
    pub fn new<S: AsRef<str>>(
        name: &str,
        vertices: &[S],
        arrows: &[(S, S)],
        basepoint: Option<S>,
    ) -> Result<Digraph> {
        let names: Vec<VertexName> = vertices.iter().map(|s| VertexName::atom(s.as_ref())).collect();
        let arrow_names: Vec<(VertexName, VertexName)> = arrows
            .iter()
            .map(|(a, b)| (VertexName::atom(a.as_ref()), VertexName::atom(b.as_ref())))
            .collect();
        Digraph::from_names(
            name,
            names,
            arrow_names,
            basepoint.map(|s| VertexName::atom(s.as_ref())),
        )
    }

    pub fn from_names(
        name: &str,
        mut names: Vec<VertexName>,
        arrows: Vec<(VertexName, VertexName)>,
        basepoint: Option<VertexName>,
    ) -> Result<Digraph> {
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0].to_string()));
            }
        }
        let idx = |n: &VertexName| -> Result<u32> {
            names
                .binary_search(n)
                .map(|i| i as u32)
                .map_err(|_| Error::UnknownVertex(n.to_string()))
        };
        let mut set = BTreeSet::new();
        for (a, b) in &arrows {
            if a == b {
                return Err(Error::SelfLoop(a.to_string()));
            }
            set.insert((idx(a)?, idx(b)?));
        }
        let base = match basepoint {
            Some(b) => Some(idx(&b)?),
            None => None,
        };
        let n = names.len();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(a, b) in &set {
            out[a as usize].push(b);
            inn[b as usize].push(a);
        }
        Ok(Digraph(Arc::new(DigraphInner {
            name: name.to_string(),
            names,
            arrows: set,
            out,
            inn,
            basepoint: base,
        })))
    }

    /// The digraph with a single vertex and no arrows, based there.
    pub fn one_point(v: &str) -> Digraph {
        Digraph::new("point", &[v], &[], Some(v)).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn vertex_count(&self) -> usize {
        self.0.names.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.0.arrows.len()
    }

    pub fn vertex_name(&self, v: u32) -> &VertexName {
        &self.0.names[v as usize]
    }

    pub fn vertex_names(&self) -> &[VertexName] {
        &self.0.names
    }

    pub fn vertex_id(&self, n: &VertexName) -> Option<u32> {
        self.0.names.binary_search(n).ok().map(|i| i as u32)
    }

    pub fn vertex_id_by_str(&self, s: &str) -> Option<u32> {
        self.vertex_id(&VertexName::atom(s))
    }

    pub fn basepoint(&self) -> Option<u32> {
        self.0.basepoint
    }

    pub fn require_basepoint(&self) -> Result<u32> {
        self.0.basepoint.ok_or(Error::NotBased)
    }

    pub fn has_arrow(&self, a: u32, b: u32) -> bool {
        self.0.arrows.contains(&(a, b))
    }

    /// Arrow or equal: the digraph-map condition on a single pair.
    pub fn step_ok(&self, a: u32, b: u32) -> bool {
        a == b || self.has_arrow(a, b)
    }

    pub fn arrows(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.arrows.iter().copied()
    }

    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        &self.0.out[v as usize]
    }

    pub fn in_neighbors(&self, v: u32) -> &[u32] {
        &self.0.inn[v as usize]
    }

    /// Adjacent in either direction.
    pub fn is_adjacent(&self, a: u32, b: u32) -> bool {
        self.has_arrow(a, b) || self.has_arrow(b, a)
    }

    pub fn with_name(&self, name: &str) -> Digraph {
        let mut inner = DigraphInner {
            name: name.to_string(),
            names: self.0.names.clone(),
            arrows: self.0.arrows.clone(),
            out: self.0.out.clone(),
            inn: self.0.inn.clone(),
            basepoint: self.0.basepoint,
        };
        inner.name = name.to_string();
        Digraph(Arc::new(inner))
    }

    /// The same digraph without a basepoint.
    pub fn unbased(&self) -> Digraph {
        Digraph(Arc::new(DigraphInner {
            name: self.0.name.clone(),
            names: self.0.names.clone(),
            arrows: self.0.arrows.clone(),
            out: self.0.out.clone(),
            inn: self.0.inn.clone(),
            basepoint: None,
        }))
    }

    /// Rebases the digraph at the given vertex.
    pub fn based_at(&self, v: &VertexName) -> Result<Digraph> {
        let id = self
            .vertex_id(v)
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
        Ok(Digraph(Arc::new(DigraphInner {
            name: self.0.name.clone(),
            names: self.0.names.clone(),
            arrows: self.0.arrows.clone(),
            out: self.0.out.clone(),
            inn: self.0.inn.clone(),
            basepoint: Some(id),
        })))
    }

    /// The sub-digraph on the vertices satisfying `keep`, with every arrow of
    /// `self` between kept vertices. Fails with `BasepointDropped` when the
    /// digraph is based and the basepoint is filtered out.
    pub fn induced_subdigraph<F: Fn(u32) -> bool>(&self, name: &str, keep: F) -> Result<Digraph> {
        if let Some(b) = self.0.basepoint {
            if !keep(b) {
                return Err(Error::BasepointDropped);
            }
        }
        let names: Vec<VertexName> = (0..self.vertex_count() as u32)
            .filter(|&v| keep(v))
            .map(|v| self.vertex_name(v).clone())
            .collect();
        let arrows: Vec<(VertexName, VertexName)> = self
            .arrows()
            .filter(|&(a, b)| keep(a) && keep(b))
            .map(|(a, b)| (self.vertex_name(a).clone(), self.vertex_name(b).clone()))
            .collect();
        let base = self.0.basepoint.map(|b| self.vertex_name(b).clone());
        Digraph::from_names(name, names, arrows, base)
    }
}

/// Computes the box product: vertices are pairs, arrows move in exactly one
/// coordinate. The basepoint is the pair of basepoints when both factors are
/// based.
pub fn box_product(g: &Digraph, h: &Digraph) -> Digraph {
    product_with(g, h, false)
}

/// Computes the Cartesian product: the box product plus the simultaneous-move
/// diagonal arrows.
pub fn cartesian_product(g: &Digraph, h: &Digraph) -> Digraph {
    product_with(g, h, true)
}

fn product_with(g: &Digraph, h: &Digraph, diagonal: bool) -> Digraph {
    let mut names = Vec::with_capacity(g.vertex_count() * h.vertex_count());
    for gn in g.vertex_names() {
        for hn in h.vertex_names() {
            names.push(VertexName::pair(gn.clone(), hn.clone()));
        }
    }
    let pair = |a: u32, b: u32| {
        VertexName::pair(g.vertex_name(a).clone(), h.vertex_name(b).clone())
    };
    let mut arrows = Vec::new();
    for (a, b) in g.arrows() {
        for w in 0..h.vertex_count() as u32 {
            arrows.push((pair(a, w), pair(b, w)));
        }
    }
    for v in 0..g.vertex_count() as u32 {
        for (a, b) in h.arrows() {
            arrows.push((pair(v, a), pair(v, b)));
        }
    }
    if diagonal {
        for (a, b) in g.arrows() {
            for (c, d) in h.arrows() {
                arrows.push((pair(a, c), pair(b, d)));
            }
        }
    }
    let base = match (g.basepoint(), h.basepoint()) {
        (Some(a), Some(b)) => Some(pair(a, b)),
        _ => None,
    };
    let name = format!("({}x{})", g.name(), h.name());
    Digraph::from_names(&name, names, arrows, base).expect("product of valid digraphs is valid")
}

/// A digraph together with a sub-digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigraphPair {
    ambient: Digraph,
    sub: Digraph,
}

impl DigraphPair {
    pub fn new(ambient: Digraph, sub: Digraph) -> Result<DigraphPair> {
        for n in sub.vertex_names() {
            if ambient.vertex_id(n).is_none() {
                return Err(Error::PairNotSub(n.to_string()));
            }
        }
        for (a, b) in sub.arrows() {
            let aa = ambient.vertex_id(sub.vertex_name(a)).unwrap();
            let ab = ambient.vertex_id(sub.vertex_name(b)).unwrap();
            if !ambient.has_arrow(aa, ab) {
                return Err(Error::PairNotSub(format!(
                    "{} -> {}",
                    sub.vertex_name(a),
                    sub.vertex_name(b)
                )));
            }
        }
        Ok(DigraphPair { ambient, sub })
    }

    pub fn ambient(&self) -> &Digraph {
        &self.ambient
    }

    pub fn sub(&self) -> &Digraph {
        &self.sub
    }

    /// Pair with an empty sub-digraph.
    pub fn with_empty_sub(ambient: Digraph) -> DigraphPair {
        let sub = Digraph::from_names("empty", vec![], vec![], None).unwrap();
        DigraphPair { ambient, sub }
    }
}

/// The relative box product `(G, A) box (H, B) = (G box H, A box H v G box B)`.
pub fn relative_box_product(p: &DigraphPair, q: &DigraphPair) -> DigraphPair {
    let ambient = box_product(p.ambient(), q.ambient());
    let left = box_product(p.sub(), q.ambient());
    let right = box_product(p.ambient(), q.sub());
    let mut names: BTreeSet<VertexName> = left.vertex_names().iter().cloned().collect();
    names.extend(right.vertex_names().iter().cloned());
    let mut arrows: BTreeSet<(VertexName, VertexName)> = BTreeSet::new();
    for (a, b) in left.arrows() {
        arrows.insert((left.vertex_name(a).clone(), left.vertex_name(b).clone()));
    }
    for (a, b) in right.arrows() {
        arrows.insert((right.vertex_name(a).clone(), right.vertex_name(b).clone()));
    }
    let sub = Digraph::from_names(
        &format!("boundary({})", ambient.name()),
        names.into_iter().collect(),
        arrows.into_iter().collect(),
        None,
    )
    .expect("boundary of a product is valid");
    DigraphPair::new(ambient, sub).expect("boundary is a sub-digraph by construction")
}

/// A validated vertex map between digraphs: every arrow goes to an arrow or
/// collapses to a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigraphMap {
    source: Digraph,
    target: Digraph,
    assign: Vec<u32>,
    based: bool,
}

impl DigraphMap {
    /// Checks the arrow-or-equal rule for a total assignment, reporting the
    /// first offending arrow. `based` is inferred: true when both digraphs are
    /// based and the basepoint maps to the basepoint.
    pub fn validate(source: &Digraph, target: &Digraph, assign: Vec<u32>) -> Result<DigraphMap> {
        if assign.len() != source.vertex_count() {
            let missing = source.vertex_name(assign.len() as u32);
            return Err(Error::MissingVertex(missing.to_string()));
        }
        for &v in &assign {
            if v as usize >= target.vertex_count() {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
        }
        for (a, b) in source.arrows() {
            let (fa, fb) = (assign[a as usize], assign[b as usize]);
            if !target.step_ok(fa, fb) {
                return Err(Error::MapViolation {
                    from: source.vertex_name(a).to_string(),
                    to: source.vertex_name(b).to_string(),
                });
            }
        }
        let based = match (source.basepoint(), target.basepoint()) {
            (Some(s), Some(t)) => assign[s as usize] == t,
            _ => false,
        };
        Ok(DigraphMap {
            source: source.clone(),
            target: target.clone(),
            assign,
            based,
        })
    }

    /// Validation from an assignment given by vertex names.
    pub fn validate_named(
        source: &Digraph,
        target: &Digraph,
        pairs: &[(VertexName, VertexName)],
    ) -> Result<DigraphMap> {
        let mut assign: Vec<Option<u32>> = vec![None; source.vertex_count()];
        for (from, to) in pairs {
            let s = source
                .vertex_id(from)
                .ok_or_else(|| Error::UnknownVertex(from.to_string()))?;
            let t = target
                .vertex_id(to)
                .ok_or_else(|| Error::UnknownVertex(to.to_string()))?;
            assign[s as usize] = Some(t);
        }
        let assign: Vec<u32> = assign
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::MissingVertex(source.vertex_name(i as u32).to_string())))
            .collect::<Result<_>>()?;
        DigraphMap::validate(source, target, assign)
    }

    pub fn identity(g: &Digraph) -> DigraphMap {
        DigraphMap {
            source: g.clone(),
            target: g.clone(),
            assign: (0..g.vertex_count() as u32).collect(),
            based: g.basepoint().is_some(),
        }
    }

    /// The constant map to the target basepoint.
    pub fn constant_to_base(source: &Digraph, target: &Digraph) -> Result<DigraphMap> {
        let b = target.require_basepoint()?;
        DigraphMap::validate(source, target, vec![b; source.vertex_count()])
    }

    pub fn source(&self) -> &Digraph {
        &self.source
    }

    pub fn target(&self) -> &Digraph {
        &self.target
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.assign[v as usize]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assign
    }

    pub fn is_based(&self) -> bool {
        self.based
    }

    pub fn require_based(&self) -> Result<()> {
        if self.based {
            Ok(())
        } else {
            Err(Error::BasepointMismatch)
        }
    }

    /// Composition `other . self` (self first).
    pub fn then(&self, other: &DigraphMap) -> Result<DigraphMap> {
        if self.target != other.source {
            return Err(Error::TargetMismatch);
        }
        let assign = self.assign.iter().map(|&v| other.apply(v)).collect();
        DigraphMap::validate(&self.source, &other.target, assign)
    }
}
