//! Decision procedures and certificate search.
//!
//! One-step homotopy of paths is decided exactly by a reachability DP over
//! alignment states; one-step homotopy of grids is a budget-bounded search
//! over subdivision pairs; multi-step homotopy is a bidirectional BFS over
//! one-step moves whose states are grid maps hashed by their per-axis
//! minimal reduction. Every positive answer is returned as a certificate
//! that re-verifies from scratch; a negative answer from a bounded search is
//! always `Exhausted`, never a claim of non-homotopy.

use std::collections::{HashMap, VecDeque};

use crate::digraph::{Digraph, DigraphMap};
use crate::error::{Error, Result};
use crate::grids::{
    cell_count, decode_index, equal_up_to_subdivision, strides, subdivide_grid,
    triple_fiber_map, GridMap, GridShrinkingMap,
};
use crate::lines::{
    enumerate_shrinking_maps, padding_map, standard_dir, Dir, HomotopyDir, LineDigraph, PathMap,
    ShrinkingMap,
};

/// Caps for the bounded searches. `max_states` bounds the number of distinct
/// canonical states the BFS may store; `max_axis_length` bounds how far any
/// axis may be subdivided; `max_subdivision_factor` bounds the one-step grid
/// search relative to the input lengths; `max_depth` bounds the certificate
/// length. `threads > 1` expands BFS frontiers in parallel (verdicts stay
/// reproducible, the particular certificate may differ).
#[derive(Clone, Debug)]
pub struct SearchBudget {
    pub max_states: usize,
    pub max_axis_length: usize,
    pub max_subdivision_factor: usize,
    pub max_depth: usize,
    pub threads: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_states: 2_000_000,
            max_axis_length: 12,
            max_subdivision_factor: 3,
            max_depth: 64,
            threads: 1,
        }
    }
}

impl SearchBudget {
    pub fn small() -> Self {
        SearchBudget {
            max_states: 50_000,
            max_axis_length: 8,
            max_subdivision_factor: 2,
            max_depth: 32,
            threads: 1,
        }
    }
}

/// Statistics reported by the bounded searches.
#[derive(Clone, Debug, Default)]
pub struct SearchStats {
    pub states: usize,
    pub expanded: usize,
    pub depth: usize,
    pub reason: String,
}

// ---------------------------------------------------------------------------
// pointwise (direct) homotopy
// ---------------------------------------------------------------------------

/// Whether the cylinder over the single arrow validates: pointwise
/// arrow-or-equal between two grid maps on the same domain.
pub fn direct_homotopy(f: &GridMap, g: &GridMap, direction: HomotopyDir) -> Result<bool> {
    if f.target() != g.target() {
        return Err(Error::TargetMismatch);
    }
    if f.axis_lengths() != g.axis_lengths() {
        return Err(Error::DomainMismatch(format!(
            "{:?} vs {:?}",
            f.axis_lengths(),
            g.axis_lengths()
        )));
    }
    let t = f.target();
    Ok(f.values().iter().zip(g.values()).all(|(&a, &b)| match direction {
        HomotopyDir::Direct => t.step_ok(a, b),
        HomotopyDir::Inverse => t.step_ok(b, a),
    }))
}

// ---------------------------------------------------------------------------
// one-step homotopy of paths: the exact alignment DP
// ---------------------------------------------------------------------------

/// Decides one-step F-homotopy between two paths exactly, over all common
/// subdivision lengths at once.
///
/// A witness is a pair of shrinking maps `q1, q2` from one standard line
/// with `f.q1` pointwise related to `g.q2`. The DP walks states
/// `(a, b, parity)` where `a`, `b` are the current positions in the two
/// domains and `parity` is the position in the common standard source mod 2;
/// an advance is allowed only when the source arrow direction (fixed by the
/// parity) matches the domain arrow being crossed, and a state is passable
/// only when the pointwise condition holds at `(a, b)`. Reachability of
/// `(m, n)` is decided on the finite state graph, so no length bound is
/// needed: a shortest witness never exceeds `2 (m+1) (n+1)` steps, the
/// number of states.
///
/// Backtracking prefers advancing both positions, then the left, then the
/// right, which keeps reported witnesses short and reproducible.
pub fn one_step_path_homotopy(
    f: &PathMap,
    g: &PathMap,
    direction: HomotopyDir,
) -> Result<Option<(ShrinkingMap, ShrinkingMap)>> {
    if f.target() != g.target() {
        return Err(Error::TargetMismatch);
    }
    let t = f.target();
    let m = f.len();
    let n = g.len();
    let cond = |a: usize, b: usize| match direction {
        HomotopyDir::Direct => t.step_ok(f.value(a), g.value(b)),
        HomotopyDir::Inverse => t.step_ok(g.value(b), f.value(a)),
    };
    if !cond(0, 0) {
        return Ok(None);
    }
    let idx = |a: usize, b: usize, p: usize| (a * (n + 1) + b) * 2 + p;
    // predecessor: packed state + 1, move code; 0 means unvisited
    let mut pred: Vec<(u32, u8)> = vec![(0, 0); (m + 1) * (n + 1) * 2];
    let mut queue = VecDeque::new();
    pred[idx(0, 0, 0)] = (u32::MAX, 0);
    queue.push_back((0usize, 0usize, 0usize));
    let mut goal = None;
    if m == 0 && n == 0 {
        goal = Some((0, 0, 0));
    }
    while let Some((a, b, p)) = queue.pop_front() {
        if goal.is_some() {
            break;
        }
        let can_a = a < m && f.domain().dir(a) == standard_dir(p);
        let can_b = b < n && g.domain().dir(b) == standard_dir(p);
        // move order: both, left, right, wait
        let moves: [(usize, usize, bool); 4] = [
            (1, 1, can_a && can_b),
            (1, 0, can_a),
            (0, 1, can_b),
            (0, 0, true),
        ];
        for (code, &(da, db, ok)) in moves.iter().enumerate() {
            if !ok {
                continue;
            }
            let (na, nb, np) = (a + da, b + db, p ^ 1);
            if !cond(na, nb) {
                continue;
            }
            let i = idx(na, nb, np);
            if pred[i].0 == 0 {
                pred[i] = (idx(a, b, p) as u32 + 1, code as u8);
                if na == m && nb == n {
                    goal = Some((na, nb, np));
                    break;
                }
                queue.push_back((na, nb, np));
            }
        }
    }
    let Some(goal) = goal else { return Ok(None) };
    // backtrack
    let mut q1 = Vec::new();
    let mut q2 = Vec::new();
    let (mut a, mut b, mut p) = goal;
    loop {
        q1.push(a as u32);
        q2.push(b as u32);
        let (pk, code) = pred[idx(a, b, p)];
        if pk == u32::MAX || (a, b, p) == (0, 0, 0) {
            break;
        }
        let _ = pk;
        let (da, db) = match code {
            0 => (1, 1),
            1 => (1, 0),
            2 => (0, 1),
            _ => (0, 0),
        };
        a -= da;
        b -= db;
        p ^= 1;
    }
    q1.reverse();
    q2.reverse();
    let source = LineDigraph::standard(q1.len() - 1);
    let q1 = ShrinkingMap::new(source.clone(), f.domain().clone(), q1)?;
    let q2 = ShrinkingMap::new(source, g.domain().clone(), q2)?;
    Ok(Some((q1, q2)))
}

/// One-step in either direction; used when chaining moves.
pub fn one_step_path_any(f: &PathMap, g: &PathMap) -> Result<Option<(ShrinkingMap, ShrinkingMap, HomotopyDir)>> {
    if let Some((a, b)) = one_step_path_homotopy(f, g, HomotopyDir::Direct)? {
        return Ok(Some((a, b, HomotopyDir::Direct)));
    }
    if let Some((a, b)) = one_step_path_homotopy(f, g, HomotopyDir::Inverse)? {
        return Ok(Some((a, b, HomotopyDir::Inverse)));
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// one-step witnesses for grids
// ---------------------------------------------------------------------------

/// A witness for one-step F-homotopy between two grid maps: subdivide the
/// left by `left` and the right by `right`, then the results share a domain
/// and are pointwise related in `direction`.
#[derive(Clone, Debug)]
pub struct OneStepWitness {
    pub left: GridShrinkingMap,
    pub right: GridShrinkingMap,
    pub direction: HomotopyDir,
}

impl OneStepWitness {
    pub fn flip(&self) -> OneStepWitness {
        OneStepWitness {
            left: self.right.clone(),
            right: self.left.clone(),
            direction: self.direction.flip(),
        }
    }

    pub fn common_lengths(&self) -> Vec<u32> {
        self.left.source_lengths()
    }
}

/// Re-verifies a one-step witness from scratch.
pub fn verify_one_step(f: &GridMap, g: &GridMap, w: &OneStepWitness) -> Result<()> {
    let fs = subdivide_grid(f, &w.left)
        .map_err(|e| Error::CertificateInvalid(format!("left subdivision: {e}")))?;
    let gs = subdivide_grid(g, &w.right)
        .map_err(|e| Error::CertificateInvalid(format!("right subdivision: {e}")))?;
    if fs.axis_lengths() != gs.axis_lengths() {
        return Err(Error::CertificateInvalid(
            "subdivided maps do not share a domain".into(),
        ));
    }
    if !direct_homotopy(&fs, &gs, w.direction)? {
        return Err(Error::CertificateInvalid(
            "pointwise condition fails on the common domain".into(),
        ));
    }
    Ok(())
}

/// Outcome of a bounded one-step search.
#[derive(Clone, Debug)]
pub enum OneStepOutcome {
    Witness(OneStepWitness),
    Exhausted(SearchStats),
}

/// Searches for a one-step witness between grid maps. Dimension 1 uses the
/// exact path DP; higher dimensions enumerate subdivision pairs with
/// per-axis source length at most `max_subdivision_factor` times the input
/// (and at most `max_axis_length`). Sound but complete only within budget:
/// an `Exhausted` answer never claims non-homotopy.
pub fn one_step_grid_homotopy(
    f: &GridMap,
    g: &GridMap,
    budget: &SearchBudget,
    direction: HomotopyDir,
) -> Result<OneStepOutcome> {
    if f.dimension() != g.dimension() {
        return Err(Error::DimensionMismatch(f.dimension(), g.dimension()));
    }
    if f.target() != g.target() {
        return Err(Error::TargetMismatch);
    }
    if f.dimension() == 1 {
        let lf = f.to_loop()?;
        let lg = g.to_loop()?;
        return Ok(match one_step_path_homotopy(&lf, &lg, direction)? {
            Some((q1, q2)) => OneStepOutcome::Witness(OneStepWitness {
                left: GridShrinkingMap::new(vec![q1])?,
                right: GridShrinkingMap::new(vec![q2])?,
                direction,
            }),
            None => OneStepOutcome::Exhausted(SearchStats {
                reason: "exact one-step decision found no witness".into(),
                ..Default::default()
            }),
        });
    }
    let n = f.dimension();
    // per-axis candidate (q1, q2) pairs over each admissible common length
    let mut per_axis: Vec<Vec<(ShrinkingMap, ShrinkingMap)>> = Vec::with_capacity(n);
    for j in 0..n {
        let mj = f.axis_lengths()[j] as usize;
        let nj = g.axis_lengths()[j] as usize;
        let lo = mj.max(nj);
        let hi = (lo * budget.max_subdivision_factor).min(budget.max_axis_length).max(lo);
        let mut cands = Vec::new();
        for len in lo..=hi {
            let src = LineDigraph::standard(len);
            let q1s = enumerate_shrinking_maps(&src, &LineDigraph::standard(mj));
            let q2s = enumerate_shrinking_maps(&src, &LineDigraph::standard(nj));
            for q1 in &q1s {
                for q2 in &q2s {
                    cands.push((q1.clone(), q2.clone()));
                }
            }
        }
        if cands.is_empty() {
            return Ok(OneStepOutcome::Exhausted(SearchStats {
                reason: format!("no admissible subdivision on axis {j}"),
                ..Default::default()
            }));
        }
        per_axis.push(cands);
    }
    let mut stats = SearchStats::default();
    let mut choice = vec![0usize; n];
    loop {
        stats.states += 1;
        if stats.states > budget.max_states {
            stats.reason = "state budget".into();
            return Ok(OneStepOutcome::Exhausted(stats));
        }
        let lefts: Vec<ShrinkingMap> = (0..n).map(|j| per_axis[j][choice[j]].0.clone()).collect();
        let rights: Vec<ShrinkingMap> = (0..n).map(|j| per_axis[j][choice[j]].1.clone()).collect();
        let w = OneStepWitness {
            left: GridShrinkingMap::new(lefts)?,
            right: GridShrinkingMap::new(rights)?,
            direction,
        };
        if verify_one_step(f, g, &w).is_ok() {
            return Ok(OneStepOutcome::Witness(w));
        }
        // odometer
        let mut j = 0;
        loop {
            if j == n {
                stats.reason = "all subdivision pairs within budget tried".into();
                return Ok(OneStepOutcome::Exhausted(stats));
            }
            choice[j] += 1;
            if choice[j] < per_axis[j].len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// multi-step search with certificates
// ---------------------------------------------------------------------------

/// A verified chain of one-step moves connecting two grid maps.
#[derive(Clone, Debug)]
pub struct HomotopyCertificate {
    pub start: GridMap,
    pub steps: Vec<(OneStepWitness, GridMap)>,
}

impl HomotopyCertificate {
    pub fn end(&self) -> &GridMap {
        self.steps.last().map(|(_, g)| g).unwrap_or(&self.start)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Replays the whole chain, re-verifying every one-step witness.
    pub fn verify(&self) -> Result<()> {
        let mut cur = &self.start;
        for (w, next) in &self.steps {
            verify_one_step(cur, next, w)?;
            cur = next;
        }
        Ok(())
    }

    /// The reversed chain, with every witness flipped.
    pub fn reversed(&self) -> HomotopyCertificate {
        let mut maps = vec![self.start.clone()];
        for (_, g) in &self.steps {
            maps.push(g.clone());
        }
        let mut steps = Vec::with_capacity(self.steps.len());
        for (i, (w, _)) in self.steps.iter().enumerate().rev() {
            steps.push((w.flip(), maps[i].clone()));
        }
        HomotopyCertificate { start: maps.last().unwrap().clone(), steps }
    }

    /// Appends another certificate whose start is this one's end.
    pub fn extend(&mut self, other: HomotopyCertificate) -> Result<()> {
        if self.end() != &other.start {
            return Err(Error::CertificateInvalid(
                "certificates do not share an endpoint".into(),
            ));
        }
        self.steps.extend(other.steps);
        Ok(())
    }
}

/// Outcome of the multi-step search.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Certificate(HomotopyCertificate),
    Exhausted(SearchStats),
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&HomotopyCertificate> {
        match self {
            SearchOutcome::Certificate(c) => Some(c),
            SearchOutcome::Exhausted(_) => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Certificate(_))
    }
}

fn fingerprint(bytes: &[u8]) -> u128 {
    let mut h1: u64 = 0xcbf29ce484222325;
    let mut h2: u64 = 0x2545f4914f6cdd1d;
    for (i, &b) in bytes.iter().enumerate() {
        h1 = (h1 ^ b as u64).wrapping_mul(0x100000001b3);
        h2 = (h2 ^ ((b as u64) << (i % 8))).wrapping_mul(0x9e3779b97f4a7c15);
    }
    ((h1 as u128) << 64) | h2 as u128
}

/// The search-state fingerprint of a grid map: the key of its per-axis
/// minimal reduction. Exposed so tests can pin its agreement with the
/// canonical form.
#[doc(hidden)]
pub fn reduced_fingerprint(g: &GridMap) -> u128 {
    reduced_key(g.axis_lengths(), g.values())
}

/// Streaming key of the per-axis minimal reduction: reduced axis lengths,
/// inherited orientations and the reduced value array. Two grids get the
/// same key exactly when they collapse to the same core.
fn reduced_key(lengths: &[u32], values: &[u32]) -> u128 {
    let n = lengths.len();
    let st = strides(lengths);
    let total = values.len();
    let mut kept: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut bytes = Vec::with_capacity(total * 2 + 16);
    bytes.push(n as u8);
    for j in 0..n {
        let m = lengths[j] as usize;
        let inner = st[j];
        let block = inner * (m + 1);
        let outer = total / block;
        let mut keep = vec![0u32];
        let mut prev = 0usize;
        for p in 1..=m {
            let mut equal = true;
            'cmp: for o in 0..outer {
                let base = o * block;
                for i in 0..inner {
                    if values[base + p * inner + i] != values[base + prev * inner + i] {
                        equal = false;
                        break 'cmp;
                    }
                }
            }
            if !equal {
                keep.push(p as u32);
                prev = p;
            }
        }
        bytes.extend_from_slice(&((keep.len() - 1) as u16).to_le_bytes());
        for w in keep.windows(2) {
            // inherited arc: the arrow crossing into the next run
            bytes.push(match standard_dir(w[1] as usize - 1) {
                Dir::Fwd => b'>',
                Dir::Bwd => b'<',
            });
        }
        kept.push(keep);
    }
    // reduced values in lexicographic order via an odometer over kept coords
    let mut pos = vec![0usize; n];
    loop {
        let flat: usize = (0..n).map(|j| kept[j][pos[j]] as usize * st[j]).sum();
        let v = values[flat];
        bytes.extend_from_slice(&(v as u16).to_le_bytes());
        let mut j = n;
        loop {
            if j == 0 {
                return fingerprint(&bytes);
            }
            j -= 1;
            pos[j] += 1;
            if pos[j] < kept[j].len() {
                break;
            }
            pos[j] = 0;
        }
    }
}

/// A generated successor: the move taken, the new lengths and values, and
/// the reduced-form key.
type Candidate = (Move, Vec<u32>, Vec<u32>, u128);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Variant {
    Plain,
    Triple { axis: u8, pos: u16 },
    Pad { axis: u8 },
}

#[derive(Clone, Copy, Debug)]
struct Move {
    variant: Variant,
    cell: u32,
    value: u32,
    dir: HomotopyDir,
}

#[derive(Clone, Copy)]
struct Node {
    parent: u128,
    mv: Option<Move>,
    forward: bool,
}

struct RawGrid {
    lengths: Vec<u32>,
    values: Vec<u32>,
}

fn apply_variant(g: &RawGrid, v: Variant) -> RawGrid {
    match v {
        Variant::Plain => RawGrid { lengths: g.lengths.clone(), values: g.values.clone() },
        Variant::Triple { axis, pos } => {
            let axis = axis as usize;
            let mut lengths = g.lengths.clone();
            lengths[axis] += 2;
            let map = |c: u32| -> u32 {
                let p = pos as u32;
                if c <= p {
                    c
                } else if c <= p + 2 {
                    p
                } else {
                    c - 2
                }
            };
            let values = remap_axis(g, axis, &lengths, map);
            RawGrid { lengths, values }
        }
        Variant::Pad { axis } => {
            let axis = axis as usize;
            let m = g.lengths[axis];
            let mut lengths = g.lengths.clone();
            lengths[axis] += 1;
            let values = remap_axis(g, axis, &lengths, |c| c.min(m));
            RawGrid { lengths, values }
        }
    }
}

fn remap_axis<F: Fn(u32) -> u32>(g: &RawGrid, axis: usize, new_lengths: &[u32], f: F) -> Vec<u32> {
    let st_old = strides(&g.lengths);
    let total = cell_count(new_lengths);
    let mut out = Vec::with_capacity(total);
    for flat in 0..total {
        let mut idx = decode_index(flat, new_lengths);
        idx[axis] = f(idx[axis]);
        let old: usize = idx.iter().zip(&st_old).map(|(&c, &s)| c as usize * s).sum();
        out.push(g.values[old]);
    }
    out
}

fn variant_bundle(parent_lengths: &[u32], v: Variant) -> GridShrinkingMap {
    let per_axis: Vec<ShrinkingMap> = parent_lengths
        .iter()
        .enumerate()
        .map(|(j, &m)| match v {
            Variant::Triple { axis, pos } if j == axis as usize => {
                triple_fiber_map(m as usize, pos as usize)
            }
            Variant::Pad { axis } if j == axis as usize => padding_map(m as usize, m as usize + 1),
            _ => ShrinkingMap::identity(&LineDigraph::standard(m as usize)),
        })
        .collect();
    GridShrinkingMap::new(per_axis).expect("variant bundle is standard")
}

/// Generates the one-step successors of a raw state. Each candidate is a
/// variant subdivision followed by a single interior cell move; cells away
/// from the inserted slabs are skipped for non-trivial variants because the
/// resulting class is already produced by the plain variant.
fn expand(target: &Digraph, g: &RawGrid, budget: &SearchBudget) -> Vec<Candidate> {
    let n = g.lengths.len();
    let mut out = Vec::new();
    let mut variants = vec![Variant::Plain];
    for j in 0..n {
        let m = g.lengths[j] as usize;
        if m + 2 <= budget.max_axis_length {
            for pos in 0..=m {
                variants.push(Variant::Triple { axis: j as u8, pos: pos as u16 });
            }
        }
        if m < budget.max_axis_length {
            variants.push(Variant::Pad { axis: j as u8 });
        }
    }
    for v in variants {
        let varied = apply_variant(g, v);
        let st = strides(&varied.lengths);
        let total = varied.values.len();
        for flat in 0..total {
            let idx = decode_index(flat, &varied.lengths);
            let interior = idx
                .iter()
                .zip(&varied.lengths)
                .all(|(&c, &m)| c > 0 && c < m);
            if !interior {
                continue;
            }
            let in_scope = match v {
                Variant::Plain => true,
                Variant::Triple { axis, pos } => {
                    let c = idx[axis as usize];
                    c >= pos as u32 && c <= pos as u32 + 2
                }
                Variant::Pad { axis } => idx[axis as usize] == varied.lengths[axis as usize] - 1,
            };
            if !in_scope {
                continue;
            }
            let old = varied.values[flat];
            for dir in [HomotopyDir::Direct, HomotopyDir::Inverse] {
                let neighbors = match dir {
                    HomotopyDir::Direct => target.out_neighbors(old),
                    HomotopyDir::Inverse => target.in_neighbors(old),
                };
                for &w in neighbors {
                    if !cell_move_ok(target, &varied, &st, &idx, flat, w) {
                        continue;
                    }
                    let mut values = varied.values.clone();
                    values[flat] = w;
                    let key = reduced_key(&varied.lengths, &values);
                    out.push((
                        Move { variant: v, cell: flat as u32, value: w, dir },
                        varied.lengths.clone(),
                        values,
                        key,
                    ));
                }
            }
        }
    }
    out
}

fn cell_move_ok(
    target: &Digraph,
    varied: &RawGrid,
    st: &[usize],
    idx: &[u32],
    flat: usize,
    w: u32,
) -> bool {
    for j in 0..varied.lengths.len() {
        let c = idx[j] as usize;
        let down = varied.values[flat - st[j]];
        let ok_down = match standard_dir(c - 1) {
            Dir::Fwd => target.step_ok(down, w),
            Dir::Bwd => target.step_ok(w, down),
        };
        if !ok_down {
            return false;
        }
        let up = varied.values[flat + st[j]];
        let ok_up = match standard_dir(c) {
            Dir::Fwd => target.step_ok(w, up),
            Dir::Bwd => target.step_ok(up, w),
        };
        if !ok_up {
            return false;
        }
    }
    true
}

/// Searches for an F-homotopy between two grid maps by bidirectional BFS
/// over one-step moves, returning a verified certificate or `Exhausted`
/// with statistics. The search never claims non-homotopy.
pub fn f_homotopic(f: &GridMap, g: &GridMap, budget: &SearchBudget) -> Result<SearchOutcome> {
    if f.dimension() != g.dimension() {
        return Err(Error::DimensionMismatch(f.dimension(), g.dimension()));
    }
    if f.target() != g.target() {
        return Err(Error::TargetMismatch);
    }
    let target = f.target().clone();
    if f == g {
        return Ok(SearchOutcome::Certificate(HomotopyCertificate {
            start: f.clone(),
            steps: Vec::new(),
        }));
    }
    if let Some(cert) = subdivision_equal_certificate(f, g)? {
        return Ok(SearchOutcome::Certificate(cert));
    }
    // dimension 1 has an exact one-step decider; use it as the first move
    // oracle before falling back to the breadth-first search
    if f.dimension() == 1 {
        let (lf, lg) = (f.to_loop()?, g.to_loop()?);
        if let Some((q1, q2, dir)) = one_step_path_any(&lf, &lg)? {
            let w = OneStepWitness {
                left: GridShrinkingMap::new(vec![q1])?,
                right: GridShrinkingMap::new(vec![q2])?,
                direction: dir,
            };
            let cert = HomotopyCertificate { start: f.clone(), steps: vec![(w, g.clone())] };
            cert.verify()?;
            return Ok(SearchOutcome::Certificate(cert));
        }
    }

    if target.vertex_count() > u16::MAX as usize {
        return Err(Error::SizeOverflow { count: target.vertex_count(), cap: u16::MAX as usize });
    }

    let key_f = reduced_key(f.axis_lengths(), f.values());
    let key_g = reduced_key(g.axis_lengths(), g.values());
    let mut visited: HashMap<u128, Node> = HashMap::new();
    visited.insert(key_f, Node { parent: key_f, mv: None, forward: true });
    visited.insert(key_g, Node { parent: key_g, mv: None, forward: false });
    let compact = |gm: &GridMap| Compact {
        lengths: gm.axis_lengths().to_vec(),
        values: gm.values().iter().map(|&v| v as u16).collect(),
    };
    let mut frontier_f = vec![(key_f, compact(f))];
    let mut frontier_g = vec![(key_g, compact(g))];
    let mut stats = SearchStats { states: 2, ..Default::default() };
    let mut depth_f = 0usize;
    let mut depth_g = 0usize;

    loop {
        let forward = if frontier_f.is_empty() {
            false
        } else if frontier_g.is_empty() {
            true
        } else {
            frontier_f.len() <= frontier_g.len()
        };
        let cur = if forward {
            if frontier_f.is_empty() {
                stats.reason = "both frontiers exhausted within the subdivision caps".into();
                return Ok(SearchOutcome::Exhausted(stats));
            }
            if depth_f >= budget.max_depth {
                stats.reason = "depth budget".into();
                return Ok(SearchOutcome::Exhausted(stats));
            }
            depth_f += 1;
            std::mem::take(&mut frontier_f)
        } else {
            if frontier_g.is_empty() {
                stats.reason = "both frontiers exhausted within the subdivision caps".into();
                return Ok(SearchOutcome::Exhausted(stats));
            }
            if depth_g >= budget.max_depth {
                stats.reason = "depth budget".into();
                return Ok(SearchOutcome::Exhausted(stats));
            }
            depth_g += 1;
            std::mem::take(&mut frontier_g)
        };
        stats.expanded += cur.len();
        stats.depth = depth_f + depth_g;

        // expand in bounded batches so candidate buffers never hold more
        // than a slice of the level at once
        let batch = if budget.threads > 1 { budget.threads * 1024 } else { 512 };
        let mut next: Vec<(u128, Compact)> = Vec::new();
        for sub in cur.chunks(batch) {
            let produced: Vec<(u128, Vec<Candidate>)> = if budget.threads > 1 {
                let chunk = sub.len().div_ceil(budget.threads);
                std::thread::scope(|s| {
                    let mut handles = Vec::new();
                    for part in sub.chunks(chunk) {
                        let target = &target;
                        handles.push(s.spawn(move || {
                            part.iter()
                                .map(|(k, c)| (*k, expand(target, &c.to_raw(), budget)))
                                .collect::<Vec<_>>()
                        }));
                    }
                    handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
                })
            } else {
                sub.iter().map(|(k, c)| (*k, expand(&target, &c.to_raw(), budget))).collect()
            };

            for (parent_key, cands) in produced {
                for (mv, lengths, values, key) in cands {
                    if let Some(existing) = visited.get(&key) {
                        if existing.forward != forward {
                            // met in the middle: assemble the full chain
                            let touch = Node { parent: parent_key, mv: Some(mv), forward };
                            let cert =
                                assemble(f, g, &visited, touch, RawGrid { lengths, values }, key)?;
                            cert.verify()?;
                            return Ok(SearchOutcome::Certificate(cert));
                        }
                        continue;
                    }
                    if visited.len() >= budget.max_states {
                        stats.states = visited.len();
                        stats.reason = "state budget".into();
                        return Ok(SearchOutcome::Exhausted(stats));
                    }
                    visited.insert(key, Node { parent: parent_key, mv: Some(mv), forward });
                    next.push((
                        key,
                        Compact {
                            lengths,
                            values: values.into_iter().map(|v| v as u16).collect(),
                        },
                    ));
                }
            }
        }
        stats.states = visited.len();
        *(if forward { &mut frontier_f } else { &mut frontier_g }) = next;
    }
}

/// Frontier entry with halved value storage.
struct Compact {
    lengths: Vec<u32>,
    values: Vec<u16>,
}

impl Compact {
    fn to_raw(&self) -> RawGrid {
        RawGrid {
            lengths: self.lengths.clone(),
            values: self.values.iter().map(|&v| v as u32).collect(),
        }
    }
}

/// Rebuilds the move chain from a root to `key` and replays it as grids.
fn replay(root: &GridMap, visited: &HashMap<u128, Node>, key: u128) -> (Vec<GridMap>, Vec<Move>) {
    let mut moves = Vec::new();
    let mut k = key;
    loop {
        let node = visited[&k];
        match node.mv {
            Some(m) => {
                moves.push(m);
                k = node.parent;
            }
            None => break,
        }
    }
    moves.reverse();
    let mut grids = vec![root.clone()];
    let mut raw = RawGrid { lengths: root.axis_lengths().to_vec(), values: root.values().to_vec() };
    for mv in &moves {
        let mut varied = apply_variant(&raw, mv.variant);
        varied.values[mv.cell as usize] = mv.value;
        grids.push(
            GridMap::new(root.target(), varied.lengths.clone(), varied.values.clone())
                .expect("replayed move yields a valid grid"),
        );
        raw = varied;
    }
    (grids, moves)
}

fn edge_witness(parent_lengths: &[u32], mv: &Move, child_lengths: &[u32]) -> OneStepWitness {
    OneStepWitness {
        left: variant_bundle(parent_lengths, mv.variant),
        right: GridShrinkingMap::identity(child_lengths),
        direction: mv.dir,
    }
}

fn chain_certificate(root: &GridMap, grids: &[GridMap], moves: &[Move]) -> HomotopyCertificate {
    let mut steps = Vec::with_capacity(moves.len());
    for (i, mv) in moves.iter().enumerate() {
        let w = edge_witness(grids[i].axis_lengths(), mv, grids[i + 1].axis_lengths());
        steps.push((w, grids[i + 1].clone()));
    }
    HomotopyCertificate { start: root.clone(), steps }
}

/// A single pointwise-equal step between two grids with the same reduced
/// core, via common subdivisions of the two collapse maps.
fn subdivision_equal_certificate(a: &GridMap, b: &GridMap) -> Result<Option<HomotopyCertificate>> {
    if a == b {
        return Ok(Some(HomotopyCertificate { start: a.clone(), steps: Vec::new() }));
    }
    match equal_up_to_subdivision(a, b)? {
        Some((left, right)) => {
            let w = OneStepWitness { left, right, direction: HomotopyDir::Direct };
            Ok(Some(HomotopyCertificate { start: a.clone(), steps: vec![(w, b.clone())] }))
        }
        None => Ok(None),
    }
}

fn assemble(
    f: &GridMap,
    g: &GridMap,
    visited: &HashMap<u128, Node>,
    touch: Node,
    touch_grid: RawGrid,
    met_key: u128,
) -> Result<HomotopyCertificate> {
    // the chain on the side that generated the meet candidate
    let (gen_root, other_root) = if touch.forward { (f, g) } else { (g, f) };
    let (mut gen_grids, mut gen_moves) = replay(gen_root, visited, touch.parent);
    let touch_grid = GridMap::new(gen_root.target(), touch_grid.lengths, touch_grid.values)?;
    gen_moves.push(touch.mv.unwrap());
    gen_grids.push(touch_grid.clone());
    let gen_cert = chain_certificate(gen_root, &gen_grids, &gen_moves);

    // the stored chain on the other side, ending at the met state
    let (other_grids, other_moves) = replay(other_root, visited, met_key);
    let other_cert = chain_certificate(other_root, &other_grids, &other_moves);
    let other_end = other_grids.last().unwrap().clone();

    // orient: start -> ... -> touch_grid ~ other_end -> ... -> other_root
    let mut cert = if touch.forward { gen_cert.clone() } else { other_cert.clone() };
    let (mid_left, mid_right, tail) = if touch.forward {
        (touch_grid, other_end, other_cert.reversed())
    } else {
        (other_end, touch_grid, gen_cert.reversed())
    };
    if mid_left != mid_right {
        let join = subdivision_equal_certificate(&mid_left, &mid_right)?
            .ok_or_else(|| Error::CertificateInvalid("meet states disagree".into()))?;
        cert.extend(join)?;
    }
    cert.extend(tail)?;
    Ok(cert)
}

// ---------------------------------------------------------------------------
// path components
// ---------------------------------------------------------------------------

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, v: u32) -> u32 {
        let mut v = v;
        while self.parent[v as usize] != v {
            self.parent[v as usize] = self.parent[self.parent[v as usize] as usize];
            v = self.parent[v as usize];
        }
        v
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            std::cmp::Ordering::Less => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Greater => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
    }
}

/// The partition of the vertex set into path components: connectivity by
/// arrows traversed in either direction. Basepoints are ignored. Classes
/// are ordered by their least vertex, which is also the representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi0 {
    class_of: Vec<u32>,
    classes: Vec<Vec<u32>>,
}

pub fn pi0(g: &Digraph) -> Pi0 {
    let n = g.vertex_count();
    let mut uf = UnionFind::new(n);
    for (a, b) in g.arrows() {
        uf.union(a, b);
    }
    let mut groups: HashMap<u32, Vec<u32>> = HashMap::new();
    for v in 0..n as u32 {
        groups.entry(uf.find(v)).or_default().push(v);
    }
    let mut classes: Vec<Vec<u32>> = groups.into_values().collect();
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    let mut class_of = vec![0u32; n];
    for (i, c) in classes.iter().enumerate() {
        for &v in c {
            class_of[v as usize] = i as u32;
        }
    }
    Pi0 { class_of, classes }
}

impl Pi0 {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, v: u32) -> u32 {
        self.class_of[v as usize]
    }

    /// Least vertex of the class containing `v`.
    pub fn representative(&self, v: u32) -> u32 {
        self.classes[self.class_of[v as usize] as usize][0]
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn same_class(&self, a: u32, b: u32) -> bool {
        self.class_of[a as usize] == self.class_of[b as usize]
    }
}

// ---------------------------------------------------------------------------
// induced maps on class inventories
// ---------------------------------------------------------------------------

/// A sample basis of homotopy classes: a list of representative grid maps.
#[derive(Clone, Debug)]
pub struct ClassInventory {
    pub reps: Vec<GridMap>,
}

/// Where a composed representative landed: a member of the target inventory,
/// or unresolved within budget (reported, never silently merged).
#[derive(Clone, Debug)]
pub enum ClassImage {
    Class(usize),
    Exhausted(SearchStats),
}

/// Pushes every representative of `source` through the based digraph map and
/// re-identifies it against `target` by certificate search.
pub fn induced_on_classes(
    map: &DigraphMap,
    source: &ClassInventory,
    target: &ClassInventory,
    budget: &SearchBudget,
) -> Result<Vec<ClassImage>> {
    map.require_based()?;
    let mut out = Vec::with_capacity(source.reps.len());
    for rep in &source.reps {
        let composed = rep.map_into(map)?;
        let mut found = None;
        let mut last_stats = SearchStats::default();
        for (i, cand) in target.reps.iter().enumerate() {
            match f_homotopic(&composed, cand, budget)? {
                SearchOutcome::Certificate(_) => {
                    found = Some(i);
                    break;
                }
                SearchOutcome::Exhausted(s) => last_stats = s,
            }
        }
        out.push(match found {
            Some(i) => ClassImage::Class(i),
            None => ClassImage::Exhausted(last_stats),
        });
    }
    Ok(out)
}
