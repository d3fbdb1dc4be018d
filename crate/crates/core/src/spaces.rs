//! Derived digraphs and the mapping-path machinery: truncated reduced
//! path/loop digraphs, the unreduced loop digraph, evaluation, pullbacks,
//! mapping path digraphs, the compact model of the double construction, and
//! the connecting maps with their exactness checks.
//!
//! Truncation semantics: a truncated structure is exact on its included
//! vertex set. Arrows between included classes are decided by the exact
//! one-step decider, never approximated; operations that could leave the
//! window report a truncation error instead of clamping.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::digraph::{cartesian_product, Digraph, DigraphMap, VertexName};
use crate::error::{Error, Result};
use crate::grids::GridMap;
use crate::homotopy::{
    f_homotopic, one_step_path_homotopy, pi0, SearchBudget, SearchOutcome, SearchStats,
};
use crate::lines::{
    concatenate, enumerate_shrinking_maps, invert, minimal_reduction, HomotopyDir, PathMap,
};

/// Default cap on derived vertex counts; exceeding it is `SizeOverflow`.
pub const DEFAULT_SIZE_CAP: usize = 50_000;

// ---------------------------------------------------------------------------
// reduced path and loop digraphs
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct ReducedCore {
    base: Digraph,
    max_len: usize,
    digraph: Digraph,
    /// Minimal representative per derived vertex, aligned with vertex ids.
    paths: Vec<PathMap>,
}

fn enumerate_minimal_paths(g: &Digraph, max_len: usize, cap: usize) -> Result<Vec<PathMap>> {
    let base = g.require_basepoint()?;
    let n = g.vertex_count() as u32;
    let mut found: Vec<(Vec<u32>, Vec<crate::lines::Dir>)> = Vec::new();
    let mut stack = vec![(vec![base], Vec::new())];
    while let Some((vals, dirs)) = stack.pop() {
        if found.len() > cap {
            return Err(Error::SizeOverflow { count: found.len(), cap });
        }
        found.push((vals.clone(), dirs.clone()));
        if dirs.len() == max_len {
            continue;
        }
        let last = *vals.last().unwrap();
        for w in 0..n {
            if w == last {
                continue;
            }
            if g.has_arrow(last, w) {
                let mut v2 = vals.clone();
                v2.push(w);
                let mut d2 = dirs.clone();
                d2.push(crate::lines::Dir::Fwd);
                stack.push((v2, d2));
            }
            if g.has_arrow(w, last) {
                let mut v2 = vals.clone();
                v2.push(w);
                let mut d2 = dirs.clone();
                d2.push(crate::lines::Dir::Bwd);
                stack.push((v2, d2));
            }
        }
    }
    found
        .into_iter()
        .map(|(vals, dirs)| PathMap::new(crate::lines::LineDigraph::new(dirs), g, vals))
        .collect()
}

/// Counts the minimal paths within the window, stopping at `bound`: a cheap
/// feasibility probe before building a full reduced structure.
pub fn count_minimal_paths(g: &Digraph, max_len: usize, bound: usize) -> usize {
    match enumerate_minimal_paths(g, max_len, bound) {
        Ok(paths) => paths.len(),
        Err(_) => bound + 1,
    }
}

fn build_core(g: &Digraph, max_len: usize, loops_only: bool, cap: usize) -> Result<ReducedCore> {
    let base = g.require_basepoint()?;
    let mut paths = enumerate_minimal_paths(g, max_len, cap)?;
    if loops_only {
        paths.retain(|p| p.end() == base);
    }
    let mut named: Vec<(String, PathMap)> =
        paths.into_iter().map(|p| (p.describe(), p)).collect();
    named.sort_by(|a, b| a.0.cmp(&b.0));
    let names: Vec<VertexName> = named.iter().map(|(s, _)| VertexName::atom(s)).collect();
    let paths: Vec<PathMap> = named.into_iter().map(|(_, p)| p).collect();

    // arrows are exact: decided pairwise by the one-step DP on minimal
    // representatives; the endpoint condition is a cheap necessary filter
    let mut arrows = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        for (j, q) in paths.iter().enumerate() {
            if i == j || !g.step_ok(p.end(), q.end()) {
                continue;
            }
            if one_step_path_homotopy(p, q, HomotopyDir::Direct)?.is_some() {
                arrows.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let base_name = paths
        .iter()
        .position(|p| p.len() == 0)
        .map(|i| names[i].clone())
        .expect("trivial path is always included");
    let digraph = Digraph::from_names(
        &format!("{}({})", if loops_only { "loops" } else { "paths" }, g.name()),
        names,
        arrows,
        Some(base_name),
    )?;
    // re-align paths with the sorted vertex order (names were pre-sorted, so
    // this is already the case; keep the invariant explicit)
    debug_assert!(digraph
        .vertex_names()
        .iter()
        .zip(&paths)
        .all(|(n, p)| n.to_string() == p.describe()));
    Ok(ReducedCore { base: g.clone(), max_len, digraph, paths })
}

macro_rules! reduced_wrapper {
    ($name:ident) => {
        impl $name {
            /// The derived digraph; vertex names encode the minimal
            /// representatives.
            pub fn digraph(&self) -> &Digraph {
                &self.core.digraph
            }

            /// The digraph this structure was built over.
            pub fn base_digraph(&self) -> &Digraph {
                &self.core.base
            }

            pub fn max_len(&self) -> usize {
                self.core.max_len
            }

            pub fn vertex_count(&self) -> usize {
                self.core.paths.len()
            }

            /// Minimal representative of a derived vertex.
            pub fn path_of(&self, v: u32) -> &PathMap {
                &self.core.paths[v as usize]
            }

            /// The class of a path: its minimal reduction looked up in the
            /// window; `None` when the window is too small.
            pub fn class_of(&self, p: &PathMap) -> Option<u32> {
                let key = minimal_reduction(p).describe();
                self.core.digraph.vertex_id(&VertexName::atom(&key))
            }

            /// The class of the trivial path at the basepoint.
            pub fn base_class(&self) -> u32 {
                self.core.digraph.basepoint().expect("derived digraph is based")
            }

            /// Endpoint of the minimal representative; independent of the
            /// representative choice.
            pub fn evaluation(&self, v: u32) -> u32 {
                self.path_of(v).end()
            }
        }
    };
}

/// All subdivision classes of based paths with minimal length within the
/// window, with arrows decided exactly.
#[derive(Debug)]
pub struct ReducedPathDigraph {
    core: ReducedCore,
}
reduced_wrapper!(ReducedPathDigraph);

/// The loops-only restriction of the reduced path digraph.
#[derive(Debug)]
pub struct ReducedLoopDigraph {
    core: ReducedCore,
}
reduced_wrapper!(ReducedLoopDigraph);

impl ReducedPathDigraph {
    pub fn build(g: &Digraph, max_len: usize) -> Result<Arc<ReducedPathDigraph>> {
        Self::build_capped(g, max_len, DEFAULT_SIZE_CAP)
    }

    pub fn build_capped(g: &Digraph, max_len: usize, cap: usize) -> Result<Arc<ReducedPathDigraph>> {
        Ok(Arc::new(ReducedPathDigraph { core: build_core(g, max_len, false, cap)? }))
    }

    /// Minimal representative per vertex of a loops-only view, sharing the
    /// same window.
    pub fn loops_view(&self) -> Result<Arc<ReducedLoopDigraph>> {
        ReducedLoopDigraph::build_capped(&self.core.base, self.core.max_len, DEFAULT_SIZE_CAP)
    }

    /// The evaluation map to the base digraph: a class goes to the endpoint
    /// of its minimal representative.
    pub fn evaluation_map(&self) -> DigraphMap {
        let assign: Vec<u32> = self.core.paths.iter().map(|p| p.end()).collect();
        DigraphMap::validate(&self.core.digraph, &self.core.base, assign)
            .expect("evaluation is a digraph map")
    }
}

impl ReducedLoopDigraph {
    pub fn build(g: &Digraph, max_len: usize) -> Result<Arc<ReducedLoopDigraph>> {
        Self::build_capped(g, max_len, DEFAULT_SIZE_CAP)
    }

    pub fn build_capped(g: &Digraph, max_len: usize, cap: usize) -> Result<Arc<ReducedLoopDigraph>> {
        Ok(Arc::new(ReducedLoopDigraph { core: build_core(g, max_len, true, cap)? }))
    }

    /// Minimal loop of a derived vertex.
    pub fn minimal_loop(&self, v: u32) -> &PathMap {
        self.path_of(v)
    }
}

// ---------------------------------------------------------------------------
// the unreduced loop digraph
// ---------------------------------------------------------------------------

/// The loop digraph on actual loops (not classes) up to a length cap, with
/// arrows given by one-step cylinder homotopies between the two specific
/// domains.
#[derive(Debug)]
pub struct LoopDigraph {
    base: Digraph,
    max_len: usize,
    digraph: Digraph,
    loops: Vec<PathMap>,
}

fn enumerate_all_loops(g: &Digraph, max_len: usize, cap: usize) -> Result<Vec<PathMap>> {
    let base = g.require_basepoint()?;
    let n = g.vertex_count() as u32;
    let mut found = Vec::new();
    let mut stack = vec![(vec![base], Vec::new())];
    while let Some((vals, dirs)) = stack.pop() {
        if *vals.last().unwrap() == base {
            found.push((vals.clone(), dirs.clone()));
            if found.len() > cap {
                return Err(Error::SizeOverflow { count: found.len(), cap });
            }
        }
        if dirs.len() == max_len {
            continue;
        }
        let last = *vals.last().unwrap();
        for w in 0..n {
            let fwd_ok = w == last || g.has_arrow(last, w);
            let bwd_ok = w == last || g.has_arrow(w, last);
            if fwd_ok {
                let mut v2 = vals.clone();
                v2.push(w);
                let mut d2 = dirs.clone();
                d2.push(crate::lines::Dir::Fwd);
                stack.push((v2, d2));
            }
            if bwd_ok {
                let mut v2 = vals.clone();
                v2.push(w);
                let mut d2 = dirs.clone();
                d2.push(crate::lines::Dir::Bwd);
                stack.push((v2, d2));
            }
        }
    }
    found
        .into_iter()
        .map(|(vals, dirs)| PathMap::new(crate::lines::LineDigraph::new(dirs), g, vals))
        .collect()
}

/// One-step direct cylinder homotopy between two concrete loops, by
/// enumerating the shrinking maps between their domains.
fn cylinder_one_step(f: &PathMap, s: &PathMap) -> bool {
    enumerate_shrinking_maps(f.domain(), s.domain()).iter().any(|h| {
        (0..=f.len()).all(|x| f.target().step_ok(f.value(x), s.value(h.apply(x) as usize)))
    })
}

impl LoopDigraph {
    pub fn build(g: &Digraph, max_len: usize) -> Result<LoopDigraph> {
        Self::build_capped(g, max_len, DEFAULT_SIZE_CAP)
    }

    pub fn build_capped(g: &Digraph, max_len: usize, cap: usize) -> Result<LoopDigraph> {
        let loops = enumerate_all_loops(g, max_len, cap)?;
        let mut named: Vec<(String, PathMap)> =
            loops.into_iter().map(|p| (p.describe(), p)).collect();
        named.sort_by(|a, b| a.0.cmp(&b.0));
        let names: Vec<VertexName> = named.iter().map(|(s, _)| VertexName::atom(s)).collect();
        let loops: Vec<PathMap> = named.into_iter().map(|(_, p)| p).collect();
        let mut arrows = Vec::new();
        for (i, f) in loops.iter().enumerate() {
            for (j, s) in loops.iter().enumerate() {
                if i == j {
                    continue;
                }
                // f -> s when f is one-step direct homotopic to s, or s is
                // one-step inverse homotopic to f (both cross arrows run
                // from the f side to the s side)
                if cylinder_one_step(f, s)
                    || enumerate_shrinking_maps(s.domain(), f.domain()).iter().any(|h| {
                        (0..=s.len())
                            .all(|x| f.target().step_ok(f.value(h.apply(x) as usize), s.value(x)))
                    })
                {
                    arrows.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        let base_name = loops
            .iter()
            .position(|p| p.len() == 0)
            .map(|i| names[i].clone())
            .expect("trivial loop is always included");
        let digraph = Digraph::from_names(
            &format!("loopspace({})", g.name()),
            names,
            arrows,
            Some(base_name),
        )?;
        Ok(LoopDigraph { base: g.clone(), max_len, digraph, loops })
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn base_digraph(&self) -> &Digraph {
        &self.base
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn loop_of(&self, v: u32) -> &PathMap {
        &self.loops[v as usize]
    }

    /// The class projection onto a reduced loop digraph at matching
    /// truncation: a loop goes to its subdivision class.
    pub fn projection(&self, to: &ReducedLoopDigraph) -> Result<DigraphMap> {
        if to.base_digraph() != &self.base {
            return Err(Error::TargetMismatch);
        }
        if to.max_len() < self.max_len {
            return Err(Error::TruncationMismatch(format!(
                "projection window {} is smaller than the loop window {}",
                to.max_len(),
                self.max_len
            )));
        }
        let assign: Vec<u32> = self
            .loops
            .iter()
            .map(|p| {
                to.class_of(p)
                    .expect("minimal reduction fits in a window at least as large")
            })
            .collect();
        DigraphMap::validate(&self.digraph, to.digraph(), assign)
    }
}

// ---------------------------------------------------------------------------
// pullbacks
// ---------------------------------------------------------------------------

/// A pullback of two digraph maps with a common codomain: the induced
/// sub-digraph of the Cartesian product on the matching vertices, with its
/// two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub digraph: Digraph,
    pub to_first: DigraphMap,
    pub to_second: DigraphMap,
}

pub fn pullback(f: &DigraphMap, g: &DigraphMap) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::TargetMismatch);
    }
    let cart = cartesian_product(f.source(), g.source());
    // the pullback is based exactly when both maps are based; otherwise the
    // product basepoint may fall outside the matching set
    let cart = if f.is_based() && g.is_based() { cart } else { cart.unbased() };
    let matching = |v: u32| -> bool {
        match cart.vertex_name(v) {
            VertexName::Pair(a, b) => {
                let x = f.source().vertex_id(a).expect("left name");
                let y = g.source().vertex_id(b).expect("right name");
                f.apply(x) == g.apply(y)
            }
            VertexName::Atom(_) => unreachable!("product vertices are pairs"),
        }
    };
    let digraph = cart.induced_subdigraph(&format!("pullback({})", cart.name()), matching)?;
    let mut first = Vec::with_capacity(digraph.vertex_count());
    let mut second = Vec::with_capacity(digraph.vertex_count());
    for v in 0..digraph.vertex_count() as u32 {
        match digraph.vertex_name(v) {
            VertexName::Pair(a, b) => {
                first.push(f.source().vertex_id(a).unwrap());
                second.push(g.source().vertex_id(b).unwrap());
            }
            VertexName::Atom(_) => unreachable!(),
        }
    }
    let to_first = DigraphMap::validate(&digraph, f.source(), first)?;
    let to_second = DigraphMap::validate(&digraph, g.source(), second)?;
    Ok(Pullback { digraph, to_first, to_second })
}

// ---------------------------------------------------------------------------
// mapping path digraphs
// ---------------------------------------------------------------------------

/// The mapping path digraph of a based map `f : X -> G`: the pullback of `f`
/// against the evaluation map of the truncated reduced path digraph over
/// `G`. Vertices are pairs `(x, class)` with the class evaluating to `f(x)`.
#[derive(Debug)]
pub struct MappingPath {
    pub map: DigraphMap,
    pub paths: Arc<ReducedPathDigraph>,
    pub digraph: Digraph,
    /// The fibration-like projection to the source of `f`.
    pub to_source: DigraphMap,
    /// The projection to the reduced path digraph.
    pub to_paths: DigraphMap,
}

impl MappingPath {
    pub fn build(f: &DigraphMap, max_len: usize) -> Result<MappingPath> {
        Self::build_capped(f, max_len, DEFAULT_SIZE_CAP)
    }

    pub fn build_capped(f: &DigraphMap, max_len: usize, cap: usize) -> Result<MappingPath> {
        f.require_based()?;
        let paths = ReducedPathDigraph::build_capped(f.target(), max_len, cap)?;
        let e = paths.evaluation_map();
        let pb = pullback(f, &e)?;
        if pb.digraph.vertex_count() > cap {
            return Err(Error::SizeOverflow { count: pb.digraph.vertex_count(), cap });
        }
        Ok(MappingPath {
            map: f.clone(),
            paths,
            digraph: pb.digraph,
            to_source: pb.to_first,
            to_paths: pb.to_second,
        })
    }
}

// ---------------------------------------------------------------------------
// the compact model of the double mapping path digraph
// ---------------------------------------------------------------------------

/// The compact model of the double mapping path digraph, on pairs of
/// classes, together with the verified isomorphism from the iterated
/// construction.
#[derive(Debug)]
pub struct HfModel {
    pub digraph: Digraph,
    /// The iterated construction it models.
    pub iterated: MappingPath,
    /// The underlying single mapping path digraph.
    pub first: MappingPath,
    /// The isomorphism from the iterated construction onto the model.
    pub iso: DigraphMap,
}

pub fn build_hf(f: &DigraphMap, max_len: usize, cap: usize) -> Result<HfModel> {
    f.require_based()?;
    let rp_g = ReducedPathDigraph::build_capped(f.target(), max_len, cap)?;
    let rp_x = ReducedPathDigraph::build_capped(f.source(), max_len, cap)?;
    let cart = cartesian_product(rp_g.digraph(), rp_x.digraph());
    let keep = |v: u32| -> bool {
        match cart.vertex_name(v) {
            VertexName::Pair(gname, xname) => {
                let gv = rp_g.digraph().vertex_id(gname).unwrap();
                let xv = rp_x.digraph().vertex_id(xname).unwrap();
                f.apply(rp_x.evaluation(xv)) == rp_g.evaluation(gv)
            }
            VertexName::Atom(_) => unreachable!(),
        }
    };
    let digraph = cart.induced_subdigraph(&format!("hf({})", f.source().name()), keep)?;

    let first = MappingPath::build_capped(f, max_len, cap)?;
    let iterated = MappingPath::build_capped(&first.to_source, max_len, cap)?;

    // iota drops the source coordinate, which is recoverable as the
    // endpoint of the source-path class
    if iterated.digraph.vertex_count() != digraph.vertex_count() {
        return Err(Error::TruncationMismatch(format!(
            "iterated construction has {} vertices, the model has {}",
            iterated.digraph.vertex_count(),
            digraph.vertex_count()
        )));
    }
    let mut assign = Vec::with_capacity(digraph.vertex_count());
    for v in 0..iterated.digraph.vertex_count() as u32 {
        let name = iterated.digraph.vertex_name(v);
        let image = match name {
            VertexName::Pair(xg, eta) => match xg.as_ref() {
                VertexName::Pair(_x, gamma) => {
                    VertexName::pair(gamma.as_ref().clone(), eta.as_ref().clone())
                }
                VertexName::Atom(_) => unreachable!(),
            },
            VertexName::Atom(_) => unreachable!(),
        };
        let id = digraph
            .vertex_id(&image)
            .ok_or_else(|| Error::TruncationMismatch(format!("missing model vertex {image}")))?;
        assign.push(id);
    }
    let iso = DigraphMap::validate(&iterated.digraph, &digraph, assign)?;
    // bijective with a digraph-map inverse: that is an isomorphism
    let mut seen = vec![false; digraph.vertex_count()];
    let mut inverse = vec![0u32; digraph.vertex_count()];
    for v in 0..iterated.digraph.vertex_count() as u32 {
        let w = iso.apply(v);
        if seen[w as usize] {
            return Err(Error::TruncationMismatch("model map is not injective".into()));
        }
        seen[w as usize] = true;
        inverse[w as usize] = v;
    }
    DigraphMap::validate(&digraph, &iterated.digraph, inverse)?;
    if iterated.digraph.arrow_count() != digraph.arrow_count() {
        return Err(Error::TruncationMismatch(format!(
            "arrow counts differ: {} vs {}",
            iterated.digraph.arrow_count(),
            digraph.arrow_count()
        )));
    }
    Ok(HfModel { digraph, iterated, first, iso })
}

// ---------------------------------------------------------------------------
// connecting maps
// ---------------------------------------------------------------------------

/// The connecting maps of the mapping-path tower for a based map: the
/// section `j` of the loop classes into the double mapping path digraph,
/// the retraction `q` by concatenating with the reversed source path, and
/// the boundary on representatives.
#[derive(Debug)]
pub struct PuppeMaps {
    pub loops: Arc<ReducedLoopDigraph>,
    pub pf: MappingPath,
    pub pf2: MappingPath,
    /// loops -> pf2
    pub j: DigraphMap,
    /// The loop window that receives `q` (twice as wide, since the
    /// concatenation can double the minimal length).
    pub loops_wide: Arc<ReducedLoopDigraph>,
    /// pf2 -> loops_wide
    pub q: DigraphMap,
}

pub fn puppe_maps(f: &DigraphMap, max_len: usize, cap: usize) -> Result<PuppeMaps> {
    f.require_based()?;
    let x0 = f.source().require_basepoint()?;
    let loops = ReducedLoopDigraph::build_capped(f.target(), max_len, cap)?;
    let pf = MappingPath::build_capped(f, max_len, cap)?;
    let pf2 = MappingPath::build_capped(&pf.to_source, max_len, cap)?;

    // j: a loop class goes to (x0, class, trivial source path)
    let x0_name = f.source().vertex_name(x0).clone();
    let trivial_x = VertexName::atom(&PathMap::new(
        crate::lines::LineDigraph::new(Vec::new()),
        f.source(),
        vec![x0],
    )?
    .describe());
    let mut j_assign = Vec::with_capacity(loops.vertex_count());
    for v in 0..loops.vertex_count() as u32 {
        let gamma_name = loops.digraph().vertex_name(v).clone();
        let name = VertexName::pair(
            VertexName::pair(x0_name.clone(), gamma_name),
            trivial_x.clone(),
        );
        let id = pf2
            .digraph
            .vertex_id(&name)
            .ok_or_else(|| Error::TruncationMismatch(format!("missing section image {name}")))?;
        j_assign.push(id);
    }
    let j = DigraphMap::validate(loops.digraph(), &pf2.digraph, j_assign)?;

    // q: (x, gamma, eta) goes to the class of gamma followed by the image of
    // the reversed eta
    let loops_wide = ReducedLoopDigraph::build_capped(f.target(), 2 * max_len, cap)?;
    let mut q_assign = Vec::with_capacity(pf2.digraph.vertex_count());
    for v in 0..pf2.digraph.vertex_count() as u32 {
        let pf_vertex = pf2.to_source.apply(v);
        let gamma_class = pf.to_paths.apply(pf_vertex);
        let eta_class = pf2.to_paths.apply(v);
        let gamma = pf.paths.path_of(gamma_class);
        let eta = pf2.paths.path_of(eta_class);
        let glued = concatenate(gamma, &invert(eta).map_into(f)?)?;
        let id = loops_wide
            .class_of(&glued)
            .ok_or_else(|| Error::TruncationTooSmall(minimal_reduction(&glued).describe()))?;
        q_assign.push(id);
    }
    let q = DigraphMap::validate(&pf2.digraph, loops_wide.digraph(), q_assign)?;
    Ok(PuppeMaps { loops, pf, pf2, j, loops_wide, q })
}

impl PuppeMaps {
    /// Checks `q . j = id` on every vertex of the truncated loop digraph,
    /// comparing by class key across the two windows.
    pub fn retraction_is_identity(&self) -> bool {
        (0..self.loops.vertex_count() as u32).all(|v| {
            let image = self.q.apply(self.j.apply(v));
            self.loops_wide.digraph().vertex_name(image) == self.loops.digraph().vertex_name(v)
        })
    }

    /// The boundary on representatives at the bottom of the tower: a loop
    /// class in the target goes to a vertex (component representative) of
    /// the mapping path digraph.
    pub fn boundary_on_class(&self, v: u32) -> u32 {
        self.pf2.to_source.apply(self.j.apply(v))
    }
}

// ---------------------------------------------------------------------------
// exactness at the level of components
// ---------------------------------------------------------------------------

/// The exactness check at the component level for one window: the image of
/// the mapping-path components in the source against the kernel of the
/// induced map (components landing in the basepoint component).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessWindow {
    pub image: BTreeSet<u32>,
    pub kernel: BTreeSet<u32>,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct ExactnessReport {
    pub at: ExactnessWindow,
    pub at_wider: ExactnessWindow,
    pub stable: bool,
    pub counterexample: Option<u32>,
}

fn exactness_window(f: &DigraphMap, max_len: usize, cap: usize) -> Result<ExactnessWindow> {
    let px = pi0(f.source());
    let pg = pi0(f.target());
    let base_comp = pg.class_of(f.target().require_basepoint()?);
    let kernel: BTreeSet<u32> = (0..f.source().vertex_count() as u32)
        .filter(|&v| pg.class_of(f.apply(v)) == base_comp)
        .map(|v| px.representative(v))
        .collect();
    let pf = MappingPath::build_capped(f, max_len, cap)?;
    let image: BTreeSet<u32> = (0..pf.digraph.vertex_count() as u32)
        .map(|v| px.representative(pf.to_source.apply(v)))
        .collect();
    let exact = image == kernel;
    Ok(ExactnessWindow { image, kernel, exact })
}

/// Computes the exact component-level sequence check at the given window
/// and re-checks two steps wider to report stabilization.
pub fn check_pi0_exactness(f: &DigraphMap, max_len: usize, cap: usize) -> Result<ExactnessReport> {
    let at = exactness_window(f, max_len, cap)?;
    let at_wider = exactness_window(f, max_len + 2, cap)?;
    let stable = at == at_wider;
    let counterexample = at
        .image
        .symmetric_difference(&at.kernel)
        .next()
        .copied();
    Ok(ExactnessReport { at, at_wider, stable, counterexample })
}

// ---------------------------------------------------------------------------
// the 3x3-plus-basepoint example
// ---------------------------------------------------------------------------

/// The 10-vertex digraph whose grid of pairs carries a non-null-homotopic
/// 2-dimensional map: a 3x3 block with a center connected only to the four
/// mid-side vertices, and a basepoint connected to everything but the
/// center.
pub fn spherelike_digraph() -> Digraph {
    let mut arrows: Vec<(String, String)> = Vec::new();
    let v = |i: usize, j: usize| format!("v{i}{j}");
    // center to the four mid-side vertices
    for (i, j) in [(1, 2), (2, 1), (2, 3), (3, 2)] {
        arrows.push((v(2, 2), v(i, j)));
    }
    // mid-side vertices to their two corners
    arrows.push((v(1, 2), v(1, 1)));
    arrows.push((v(1, 2), v(1, 3)));
    arrows.push((v(2, 1), v(1, 1)));
    arrows.push((v(2, 1), v(3, 1)));
    arrows.push((v(2, 3), v(1, 3)));
    arrows.push((v(2, 3), v(3, 3)));
    arrows.push((v(3, 2), v(3, 1)));
    arrows.push((v(3, 2), v(3, 3)));
    // basepoint to every vertex except the center
    for i in 1..=3 {
        for j in 1..=3 {
            if (i, j) != (2, 2) {
                arrows.push(("*".to_string(), v(i, j)));
            }
        }
    }
    let mut vertices: Vec<String> = vec!["*".to_string()];
    for i in 1..=3 {
        for j in 1..=3 {
            vertices.push(v(i, j));
        }
    }
    Digraph::new("spherelike", &vertices, &arrows, Some("*".to_string()))
        .expect("example digraph is valid")
}

/// The 2-dimensional grid map sending interior index `(i, j)` to the pair
/// vertex `v_ij` and the boundary to the basepoint.
pub fn spherelike_grid() -> GridMap {
    let g = spherelike_digraph();
    let base = g.basepoint().unwrap();
    let mut values = vec![base; 25];
    for i in 1..=3u32 {
        for j in 1..=3u32 {
            values[(i * 5 + j) as usize] = g.vertex_id_by_str(&format!("v{i}{j}")).unwrap();
        }
    }
    GridMap::new(&g, vec![4, 4], values).expect("example grid map is valid")
}

#[derive(Clone, Debug)]
pub struct SpherelikeReport {
    pub grid_valid: bool,
    pub center_adjacent_only_to_mid_sides: bool,
    pub mid_sides_pairwise_nonadjacent: bool,
    pub base_not_adjacent_to_center: bool,
    pub reached_constant: bool,
    pub stats: SearchStats,
}

impl SpherelikeReport {
    pub fn all_structural_facts_hold(&self) -> bool {
        self.grid_valid
            && self.center_adjacent_only_to_mid_sides
            && self.mid_sides_pairwise_nonadjacent
            && self.base_not_adjacent_to_center
    }
}

/// Checks the structural adjacency facts of the example and runs the
/// bounded search from the grid map toward the constant map; within any
/// budget the constant map should never be reached.
pub fn verify_spherelike(budget: &SearchBudget) -> SpherelikeReport {
    let g = spherelike_digraph();
    let id = |s: &str| g.vertex_id_by_str(s).unwrap();
    let center = id("v22");
    let mids = [id("v12"), id("v21"), id("v23"), id("v32")];
    let adjacent_to_center: Vec<u32> = (0..g.vertex_count() as u32)
        .filter(|&u| u != center && g.is_adjacent(center, u))
        .collect();
    let center_adjacent_only_to_mid_sides = {
        let mut m = mids.to_vec();
        m.sort_unstable();
        adjacent_to_center == m
    };
    let mid_sides_pairwise_nonadjacent = mids
        .iter()
        .all(|&a| mids.iter().all(|&b| a == b || !g.is_adjacent(a, b)));
    let base_not_adjacent_to_center = !g.is_adjacent(g.basepoint().unwrap(), center);

    let f = spherelike_grid();
    let unit = GridMap::unit(&g, 2).unwrap();
    let (reached_constant, stats) = match f_homotopic(&f, &unit, budget) {
        Ok(SearchOutcome::Certificate(_)) => (true, SearchStats::default()),
        Ok(SearchOutcome::Exhausted(s)) => (false, s),
        Err(_) => (false, SearchStats { reason: "search error".into(), ..Default::default() }),
    };
    SpherelikeReport {
        grid_valid: true,
        center_adjacent_only_to_mid_sides,
        mid_sides_pairwise_nonadjacent,
        base_not_adjacent_to_center,
        reached_constant,
        stats,
    }
}
