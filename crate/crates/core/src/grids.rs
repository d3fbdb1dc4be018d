//! Grid maps: relative digraph maps from an n-fold relative box product of
//! standard lines into a based digraph, the representatives of
//! homotopy-group elements.
//!
//! The domain is never materialized; a grid map stores its axis lengths and
//! the row-major value array, and the validator checks the boundary
//! condition and the arrow-or-equal rule along every unit step against the
//! standard alternating orientation.

use std::sync::Arc;

use crate::digraph::{Digraph, DigraphMap};
use crate::error::{Error, Result};
use crate::lines::{
    common_subdivision, invert, minimal_reduction, pad_to_length, padding_map,
    standard_dir, standardize, subdivide, Dir, LineDigraph, PathKind, PathMap, ShrinkingMap,
};
use crate::spaces::ReducedLoopDigraph;

pub(crate) fn cell_count(lengths: &[u32]) -> usize {
    lengths.iter().map(|&m| m as usize + 1).product()
}

pub(crate) fn strides(lengths: &[u32]) -> Vec<usize> {
    let n = lengths.len();
    let mut s = vec![1usize; n];
    for j in (0..n.saturating_sub(1)).rev() {
        s[j] = s[j + 1] * (lengths[j + 1] as usize + 1);
    }
    s
}

pub(crate) fn decode_index(mut flat: usize, lengths: &[u32]) -> Vec<u32> {
    let s = strides(lengths);
    let mut idx = Vec::with_capacity(lengths.len());
    for st in s {
        idx.push((flat / st) as u32);
        flat %= st;
    }
    idx
}

/// An n-dimensional grid map with standard axes, boundary at the basepoint.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GridMap {
    target: Digraph,
    axis_lengths: Vec<u32>,
    values: Vec<u32>,
}

impl GridMap {
    /// Validates the boundary condition and every axis step. Axes of length
    /// zero are widened to length one first (the whole grid is boundary in
    /// that case, so nothing else changes).
    pub fn new(target: &Digraph, axis_lengths: Vec<u32>, values: Vec<u32>) -> Result<GridMap> {
        let base = target.require_basepoint()?;
        if axis_lengths.is_empty() {
            return Err(Error::DimensionMismatch(0, 1));
        }
        let (axis_lengths, values) = if axis_lengths.contains(&0) {
            widen_zero_axes(&axis_lengths, &values, base)?
        } else {
            (axis_lengths, values)
        };
        if values.len() != cell_count(&axis_lengths) {
            return Err(Error::DomainMismatch(format!(
                "grid with axis lengths {axis_lengths:?} needs {} values, got {}",
                cell_count(&axis_lengths),
                values.len()
            )));
        }
        for &v in &values {
            if v as usize >= target.vertex_count() {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
        }
        let g = GridMap { target: target.clone(), axis_lengths, values };
        g.check(base)?;
        Ok(g)
    }

    fn check(&self, base: u32) -> Result<()> {
        let n = self.dimension();
        let st = strides(&self.axis_lengths);
        for flat in 0..self.values.len() {
            let idx = decode_index(flat, &self.axis_lengths);
            let on_boundary = idx
                .iter()
                .zip(&self.axis_lengths)
                .any(|(&c, &m)| c == 0 || c == m);
            if on_boundary && self.values[flat] != base {
                return Err(Error::BoundaryViolation(idx));
            }
            for j in 0..n {
                if idx[j] < self.axis_lengths[j] {
                    let a = self.values[flat];
                    let b = self.values[flat + st[j]];
                    let ok = match standard_dir(idx[j] as usize) {
                        Dir::Fwd => self.target.step_ok(a, b),
                        Dir::Bwd => self.target.step_ok(b, a),
                    };
                    if !ok {
                        return Err(Error::GridMapViolation { index: idx, axis: j });
                    }
                }
            }
        }
        Ok(())
    }

    /// The constant unit grid of the given dimension: axis lengths all 2,
    /// every value the basepoint.
    pub fn unit(target: &Digraph, dimension: usize) -> Result<GridMap> {
        let base = target.require_basepoint()?;
        let lengths = vec![2u32; dimension.max(1)];
        let values = vec![base; cell_count(&lengths)];
        GridMap::new(target, lengths, values)
    }

    /// A standard loop viewed as a 1-dimensional grid map.
    pub fn from_loop(p: &PathMap) -> Result<GridMap> {
        if !p.domain().is_standard() {
            return Err(Error::NotStandard);
        }
        if p.kind() != PathKind::Loop {
            return Err(Error::NotBasedPath);
        }
        GridMap::new(p.target(), vec![p.len() as u32], p.values().to_vec())
    }

    /// The 1-dimensional case back as a loop.
    pub fn to_loop(&self) -> Result<PathMap> {
        if self.dimension() != 1 {
            return Err(Error::DimensionMismatch(self.dimension(), 1));
        }
        PathMap::new(
            LineDigraph::standard(self.axis_lengths[0] as usize),
            &self.target,
            self.values.clone(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.axis_lengths.len()
    }

    pub fn axis_lengths(&self) -> &[u32] {
        &self.axis_lengths
    }

    pub fn target(&self) -> &Digraph {
        &self.target
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value_at(&self, idx: &[u32]) -> u32 {
        let st = strides(&self.axis_lengths);
        let flat: usize = idx.iter().zip(&st).map(|(&c, &s)| c as usize * s).sum();
        self.values[flat]
    }

    /// The loop obtained by fixing the first n-1 coordinates and walking the
    /// last axis.
    pub fn slice_last_axis(&self, prefix: &[u32]) -> PathMap {
        let n = self.dimension();
        assert_eq!(prefix.len(), n - 1);
        let st = strides(&self.axis_lengths);
        let base_flat: usize = prefix
            .iter()
            .zip(&st[..n - 1])
            .map(|(&c, &s)| c as usize * s)
            .sum();
        let m = self.axis_lengths[n - 1] as usize;
        let values = (0..=m).map(|b| self.values[base_flat + b]).collect();
        PathMap::new(LineDigraph::standard(m), &self.target, values)
            .expect("slice of a valid grid is a valid loop")
    }

    /// Post-composition with a based digraph map out of this grid's target.
    pub fn map_into(&self, f: &DigraphMap) -> Result<GridMap> {
        if f.source() != &self.target {
            return Err(Error::TargetMismatch);
        }
        f.require_based()?;
        let values = self.values.iter().map(|&v| f.apply(v)).collect();
        GridMap::new(f.target(), self.axis_lengths.clone(), values)
    }
}

fn widen_zero_axes(lengths: &[u32], values: &[u32], base: u32) -> Result<(Vec<u32>, Vec<u32>)> {
    // a zero-length axis makes the whole grid boundary, so the values must
    // all be the basepoint already; widening just repeats the constant
    for &v in values {
        if v != base {
            return Err(Error::BoundaryViolation(vec![0]));
        }
    }
    let new_lengths: Vec<u32> = lengths.iter().map(|&m| m.max(1)).collect();
    let values = vec![base; cell_count(&new_lengths)];
    Ok((new_lengths, values))
}

/// A per-axis bundle of shrinking maps between standard lines: the box
/// product of the factors.
#[derive(Clone, Debug)]
pub struct GridShrinkingMap {
    per_axis: Vec<ShrinkingMap>,
}

impl GridShrinkingMap {
    pub fn new(per_axis: Vec<ShrinkingMap>) -> Result<GridShrinkingMap> {
        for h in &per_axis {
            if !h.source().is_standard() || !h.target().is_standard() {
                return Err(Error::NotStandard);
            }
        }
        Ok(GridShrinkingMap { per_axis })
    }

    pub fn identity(lengths: &[u32]) -> GridShrinkingMap {
        GridShrinkingMap {
            per_axis: lengths
                .iter()
                .map(|&m| ShrinkingMap::identity(&LineDigraph::standard(m as usize)))
                .collect(),
        }
    }

    pub fn factors(&self) -> &[ShrinkingMap] {
        &self.per_axis
    }

    pub fn source_lengths(&self) -> Vec<u32> {
        self.per_axis.iter().map(|h| h.source().len() as u32).collect()
    }

    pub fn target_lengths(&self) -> Vec<u32> {
        self.per_axis.iter().map(|h| h.target().len() as u32).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.per_axis.iter().all(|h| h.is_identity())
    }
}

/// Precomposition of a grid map with a per-axis shrinking bundle.
pub fn subdivide_grid(f: &GridMap, h: &GridShrinkingMap) -> Result<GridMap> {
    if h.factors().len() != f.dimension() {
        return Err(Error::DimensionMismatch(h.factors().len(), f.dimension()));
    }
    if h.target_lengths() != f.axis_lengths() {
        return Err(Error::DomainMismatch(
            "shrinking bundle targets do not match the grid axes".into(),
        ));
    }
    let new_lengths = h.source_lengths();
    let total = cell_count(&new_lengths);
    let mut values = Vec::with_capacity(total);
    for flat in 0..total {
        let idx = decode_index(flat, &new_lengths);
        let pre: Vec<u32> = idx
            .iter()
            .zip(h.factors())
            .map(|(&c, hj)| hj.apply(c as usize))
            .collect();
        values.push(f.value_at(&pre));
    }
    GridMap::new(&f.target, new_lengths, values)
}

/// Widens one axis by repeating the far boundary (constant basepoint).
pub fn pad_axis(f: &GridMap, axis: usize, new_len: u32) -> Result<GridMap> {
    let m = f.axis_lengths()[axis];
    if new_len < m {
        return Err(Error::LengthTooShort { requested: new_len as usize, current: m as usize });
    }
    if new_len == m {
        return Ok(f.clone());
    }
    let per_axis = f
        .axis_lengths()
        .iter()
        .enumerate()
        .map(|(j, &mj)| {
            if j == axis {
                padding_map(m as usize, new_len as usize)
            } else {
                ShrinkingMap::identity(&LineDigraph::standard(mj as usize))
            }
        })
        .collect();
    subdivide_grid(f, &GridShrinkingMap::new(per_axis)?)
}

/// Concatenation of two grid maps along `axis`, after widening the other
/// axes to a common length. Requires even axis lengths so the glued domain
/// is standard again.
pub fn multiply(f: &GridMap, g: &GridMap, axis: usize) -> Result<GridMap> {
    if f.dimension() != g.dimension() {
        return Err(Error::DimensionMismatch(f.dimension(), g.dimension()));
    }
    if f.target() != g.target() {
        return Err(Error::TargetMismatch);
    }
    let n = f.dimension();
    if axis >= n {
        return Err(Error::DimensionMismatch(axis, n));
    }
    for &m in f.axis_lengths().iter().chain(g.axis_lengths()) {
        if m % 2 != 0 {
            return Err(Error::ParityViolation(
                "grid multiplication needs even axis lengths".into(),
            ));
        }
    }
    let mut ft = f.clone();
    let mut gt = g.clone();
    for j in 0..n {
        if j != axis {
            let mj = f.axis_lengths()[j].max(g.axis_lengths()[j]);
            ft = pad_axis(&ft, j, mj)?;
            gt = pad_axis(&gt, j, mj)?;
        }
    }
    let mf = ft.axis_lengths()[axis];
    let mut lengths = ft.axis_lengths().to_vec();
    lengths[axis] = mf + gt.axis_lengths()[axis];
    let total = cell_count(&lengths);
    let mut values = Vec::with_capacity(total);
    for flat in 0..total {
        let mut idx = decode_index(flat, &lengths);
        if idx[axis] <= mf {
            values.push(ft.value_at(&idx));
        } else {
            idx[axis] -= mf;
            values.push(gt.value_at(&idx));
        }
    }
    GridMap::new(f.target(), lengths, values)
}

/// As `multiply`, but odd axis lengths are first padded up by one; returns
/// whether any padding happened.
pub fn multiply_padded(f: &GridMap, g: &GridMap, axis: usize) -> Result<(GridMap, bool)> {
    let mut padded = false;
    let mut fix = |x: &GridMap| -> Result<GridMap> {
        let mut out = x.clone();
        for j in 0..x.dimension() {
            let m = out.axis_lengths()[j];
            if m % 2 != 0 {
                out = pad_axis(&out, j, m + 1)?;
                padded = true;
            }
        }
        Ok(out)
    };
    let ff = fix(f)?;
    let gg = fix(g)?;
    Ok((multiply(&ff, &gg, axis)?, padded))
}

/// Reflection of the values along one axis; requires an even length so the
/// reflected domain is standard. An involution.
pub fn invert_axis(f: &GridMap, axis: usize) -> Result<GridMap> {
    let m = f.axis_lengths()[axis];
    if m % 2 != 0 {
        return Err(Error::ParityViolation(
            "axis inversion needs an even axis length".into(),
        ));
    }
    let lengths = f.axis_lengths().to_vec();
    let total = cell_count(&lengths);
    let mut values = Vec::with_capacity(total);
    for flat in 0..total {
        let mut idx = decode_index(flat, &lengths);
        idx[axis] = m - idx[axis];
        values.push(f.value_at(&idx));
    }
    GridMap::new(f.target(), lengths, values)
}

/// The shrinking map that triples the fiber over position `k` of a standard
/// line (inserts two repeats, preserving parity everywhere after).
pub fn triple_fiber_map(m: usize, k: usize) -> ShrinkingMap {
    assert!(k <= m);
    let mut values = Vec::with_capacity(m + 3);
    for i in 0..=m + 2 {
        values.push(if i <= k {
            i as u32
        } else if i <= k + 2 {
            k as u32
        } else {
            (i - 2) as u32
        });
    }
    ShrinkingMap::new(LineDigraph::standard(m + 2), LineDigraph::standard(m), values)
        .expect("tripled fiber is a shrinking map")
}

// ---------------------------------------------------------------------------
// canonical form
// ---------------------------------------------------------------------------

/// A grid map after per-axis minimal reduction: duplicate adjacent slabs are
/// collapsed and the surviving axis orientations are inherited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGrid {
    pub axis_lines: Vec<LineDigraph>,
    pub values: Vec<u32>,
}

/// The canonical form of a grid map: the reduced array as a hash key, the
/// standardized reduced representative, and the shrinking data relating the
/// original grid and the representative to the reduced core.
#[derive(Clone, Debug)]
pub struct CanonicalGrid {
    pub reduced: ReducedGrid,
    pub rep: GridMap,
    /// per axis: original axis line -> reduced axis line (run collapse)
    pub collapse: Vec<ShrinkingMap>,
    /// per axis: rep axis (standard) -> reduced axis line
    pub std_maps: Vec<ShrinkingMap>,
    pub key: Vec<u8>,
}

fn slab_equal(values: &[u32], lengths: &[u32], axis: usize, p: u32, q: u32) -> bool {
    let st = strides(lengths);
    let total = cell_count(lengths);
    for flat in 0..total {
        let idx = decode_index(flat, lengths);
        if idx[axis] != p {
            continue;
        }
        let other = flat + (q as usize - p as usize) * st[axis];
        if values[flat] != values[other] {
            return false;
        }
    }
    true
}

fn delete_slabs(values: &[u32], lengths: &[u32], axis: usize, keep: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut new_lengths = lengths.to_vec();
    new_lengths[axis] = keep.len() as u32 - 1;
    let total = cell_count(&new_lengths);
    let mut out = Vec::with_capacity(total);
    let st_old = strides(lengths);
    for flat in 0..total {
        let mut idx = decode_index(flat, &new_lengths);
        idx[axis] = keep[idx[axis] as usize];
        let old_flat: usize = idx.iter().zip(&st_old).map(|(&c, &s)| c as usize * s).sum();
        out.push(values[old_flat]);
    }
    (out, new_lengths)
}

/// The standardizing shrinking map of a line: the arrow-comparison scan of
/// `standardize`, without the values.
pub fn standardizing_map(line: &LineDigraph) -> ShrinkingMap {
    let mut h = vec![0u32];
    let mut j = 0usize;
    for i in 1..=line.len() {
        if line.dir(i - 1) == standard_dir(j) {
            h.push(i as u32);
            j += 1;
        } else {
            h.push(i as u32 - 1);
            h.push(i as u32);
            j += 2;
        }
    }
    ShrinkingMap::new(LineDigraph::standard(j), line.clone(), h)
        .expect("standardizing scan yields a shrinking map")
}

/// Canonicalizes a grid map: collapse duplicate adjacent slabs on every
/// axis, then standardize each surviving axis line. Two grid maps get equal
/// keys exactly when they are subdivisions of a common reduced core.
pub fn canonicalize(g: &GridMap) -> CanonicalGrid {
    let n = g.dimension();
    let mut values = g.values().to_vec();
    let mut lengths = g.axis_lengths().to_vec();
    let mut lines: Vec<LineDigraph> = lengths
        .iter()
        .map(|&m| LineDigraph::standard(m as usize))
        .collect();
    let mut collapse = Vec::with_capacity(n);
    for axis in 0..n {
        let m = lengths[axis];
        let mut keep = vec![0u32];
        let mut run = vec![0u32];
        let mut dirs = Vec::new();
        for p in 1..=m {
            if slab_equal(&values, &lengths, axis, *keep.last().unwrap(), p) {
                run.push(*run.last().unwrap());
            } else {
                dirs.push(lines[axis].dir(p as usize - 1));
                run.push(run.last().unwrap() + 1);
                keep.push(p);
            }
        }
        let reduced_line = LineDigraph::new(dirs);
        collapse.push(
            ShrinkingMap::new(lines[axis].clone(), reduced_line.clone(), run)
                .expect("run collapse is a shrinking map"),
        );
        let (new_values, new_lengths) = delete_slabs(&values, &lengths, axis, &keep);
        values = new_values;
        lengths = new_lengths;
        lines[axis] = reduced_line;
    }
    let reduced = ReducedGrid { axis_lines: lines.clone(), values: values.clone() };

    let std_maps: Vec<ShrinkingMap> = lines.iter().map(standardizing_map).collect();
    let rep_lengths: Vec<u32> = std_maps.iter().map(|h| h.source().len() as u32).collect();
    let total = cell_count(&rep_lengths);
    let mut rep_values = Vec::with_capacity(total);
    let st_red = strides(&lengths);
    for flat in 0..total {
        let idx = decode_index(flat, &rep_lengths);
        let pre_flat: usize = idx
            .iter()
            .zip(&std_maps)
            .zip(&st_red)
            .map(|((&c, h), &s)| h.apply(c as usize) as usize * s)
            .sum();
        rep_values.push(values[pre_flat]);
    }
    let rep = GridMap::new(g.target(), rep_lengths, rep_values)
        .expect("standardized reduced representative is valid");

    let mut key = Vec::new();
    key.push(n as u8);
    for line in &reduced.axis_lines {
        key.extend_from_slice(&(line.len() as u16).to_le_bytes());
        for d in line.dirs() {
            key.push(match d {
                Dir::Fwd => b'>',
                Dir::Bwd => b'<',
            });
        }
    }
    for &v in &reduced.values {
        key.extend_from_slice(&(v as u16).to_le_bytes());
    }

    CanonicalGrid { reduced, rep, collapse, std_maps, key }
}

// ---------------------------------------------------------------------------
// duality with the reduced loop digraph
// ---------------------------------------------------------------------------

/// An n-dimensional array of subdivision classes in a truncated reduced loop
/// digraph: the curried form of an (n+1)-dimensional grid map. Dimension 0
/// (one class) is allowed.
#[derive(Clone, Debug)]
pub struct LoopClassGridMap {
    loops: Arc<ReducedLoopDigraph>,
    axis_lengths: Vec<u32>,
    classes: Vec<u32>,
}

impl LoopClassGridMap {
    pub fn new(
        loops: Arc<ReducedLoopDigraph>,
        axis_lengths: Vec<u32>,
        classes: Vec<u32>,
    ) -> Result<LoopClassGridMap> {
        if classes.len() != cell_count(&axis_lengths) {
            return Err(Error::DomainMismatch(format!(
                "class grid with axes {axis_lengths:?} needs {} entries, got {}",
                cell_count(&axis_lengths),
                classes.len()
            )));
        }
        let w = LoopClassGridMap { loops, axis_lengths, classes };
        w.check()?;
        Ok(w)
    }

    fn check(&self) -> Result<()> {
        let d = self.loops.digraph();
        let base = self.loops.base_class();
        let n = self.dimension();
        if n == 0 {
            return Ok(());
        }
        let st = strides(&self.axis_lengths);
        for flat in 0..self.classes.len() {
            let idx = decode_index(flat, &self.axis_lengths);
            let on_boundary = idx
                .iter()
                .zip(&self.axis_lengths)
                .any(|(&c, &m)| c == 0 || c == m);
            if on_boundary && self.classes[flat] != base {
                return Err(Error::BoundaryViolation(idx));
            }
            for j in 0..n {
                if idx[j] < self.axis_lengths[j] {
                    let a = self.classes[flat];
                    let b = self.classes[flat + st[j]];
                    let ok = match standard_dir(idx[j] as usize) {
                        Dir::Fwd => d.step_ok(a, b),
                        Dir::Bwd => d.step_ok(b, a),
                    };
                    if !ok {
                        return Err(Error::GridMapViolation { index: idx, axis: j });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.axis_lengths.len()
    }

    pub fn axis_lengths(&self) -> &[u32] {
        &self.axis_lengths
    }

    pub fn classes(&self) -> &[u32] {
        &self.classes
    }

    pub fn loop_digraph(&self) -> &Arc<ReducedLoopDigraph> {
        &self.loops
    }
}

impl PartialEq for LoopClassGridMap {
    fn eq(&self, other: &Self) -> bool {
        self.axis_lengths == other.axis_lengths
            && self.classes == other.classes
            && self.loops.digraph() == other.loops.digraph()
    }
}
impl Eq for LoopClassGridMap {}

/// Curries the last axis of a grid map: each last-axis slice becomes its
/// subdivision class in the truncated reduced loop digraph. Fails with
/// `TruncationTooSmall` when a slice's class is outside the window.
pub fn curry(f: &GridMap, loops: &Arc<ReducedLoopDigraph>) -> Result<LoopClassGridMap> {
    if loops.base_digraph() != f.target() {
        return Err(Error::TargetMismatch);
    }
    let n = f.dimension() - 1;
    let prefix_lengths: Vec<u32> = f.axis_lengths()[..n].to_vec();
    let total = cell_count(&prefix_lengths);
    let mut classes = Vec::with_capacity(total.max(1));
    if n == 0 {
        let lp = f.to_loop()?;
        let c = loops
            .class_of(&lp)
            .ok_or_else(|| Error::TruncationTooSmall(minimal_reduction(&lp).describe()))?;
        classes.push(c);
    } else {
        for flat in 0..total {
            let idx = decode_index(flat, &prefix_lengths);
            let slice = f.slice_last_axis(&idx);
            let c = loops
                .class_of(&slice)
                .ok_or_else(|| Error::TruncationTooSmall(minimal_reduction(&slice).describe()))?;
            classes.push(c);
        }
    }
    LoopClassGridMap::new(loops.clone(), prefix_lengths, classes)
}

/// Rebuilds an (n+1)-dimensional grid map from an n-dimensional grid of loop
/// classes, choosing pointwise-compatible standard representatives of a
/// common even length.
///
/// Cells are committed along a spanning tree of the grid in index order;
/// each new edge is realized by the exact one-step decider and the whole
/// committed block is refined uniformly, which preserves the edges already
/// placed. For one-dimensional inputs this always succeeds; with cycles
/// (dimension >= 2) the remaining edges are re-checked and repaired by
/// further uniform refinement, giving up with
/// `IrreconcilableRepresentatives` after a bounded number of rounds.
pub fn uncurry(w: &LoopClassGridMap) -> Result<GridMap> {
    let loops = w.loop_digraph().clone();
    let target = loops.base_digraph().clone();
    let n = w.dimension();
    let cells = w.classes().len();

    // standardized minimal representative per cell
    let fresh: Vec<PathMap> = w
        .classes()
        .iter()
        .map(|&c| standardize(loops.minimal_loop(c)).path)
        .collect();

    let mut rows: Vec<Option<PathMap>> = vec![None; cells];
    let mut order: Vec<usize> = (0..cells).collect();
    order.sort(); // index order; cell 0 (a boundary corner) is the root

    let st = strides(w.axis_lengths());
    let mut common_len = fresh[0].len();
    rows[0] = Some(fresh[0].clone());

    let refine_all = |rows: &mut Vec<Option<PathMap>>, q: &ShrinkingMap| {
        for r in rows.iter_mut().flatten() {
            *r = subdivide(r, q).expect("uniform refinement of committed rows");
        }
    };

    for &flat in order.iter().skip(1) {
        let idx = decode_index(flat, w.axis_lengths());
        let (axis, _) = idx
            .iter()
            .enumerate()
            .find(|(_, &c)| c > 0)
            .expect("non-root cell has a positive coordinate");
        let parent = flat - st[axis];
        let parent_row = rows[parent].clone().expect("parent committed first");
        if w.classes()[parent] == w.classes()[flat] {
            rows[flat] = Some(parent_row);
            continue;
        }
        let dir = standard_dir(idx[axis] as usize - 1);
        let fresh_row = &fresh[flat];
        let (q_parent, q_fresh) = match dir {
            Dir::Fwd => crate::homotopy::one_step_path_homotopy(
                &parent_row,
                fresh_row,
                crate::lines::HomotopyDir::Direct,
            )?,
            Dir::Bwd => {
                let (qf, qp) = crate::homotopy::one_step_path_homotopy(
                    fresh_row,
                    &parent_row,
                    crate::lines::HomotopyDir::Direct,
                )?
                .ok_or(Error::IrreconcilableRepresentatives(common_len))?;
                refine_all(&mut rows, &qp);
                rows[flat] = Some(subdivide(fresh_row, &qf)?);
                common_len = qf.source().len();
                continue;
            }
        }
        .ok_or(Error::IrreconcilableRepresentatives(common_len))?;
        refine_all(&mut rows, &q_parent);
        rows[flat] = Some(subdivide(fresh_row, &q_fresh)?);
        common_len = q_parent.source().len();
    }

    // with cycles present, re-check the remaining edges and repair by
    // further uniform refinement
    if n >= 2 {
        for _round in 0..8 {
            let bad = first_bad_edge(w, &rows);
            let Some((a, b, dir)) = bad else { break };
            let ra = rows[a].clone().unwrap();
            let rb = rows[b].clone().unwrap();
            let w2 = match dir {
                Dir::Fwd => crate::homotopy::one_step_path_homotopy(
                    &ra,
                    &rb,
                    crate::lines::HomotopyDir::Direct,
                )?,
                Dir::Bwd => crate::homotopy::one_step_path_homotopy(
                    &rb,
                    &ra,
                    crate::lines::HomotopyDir::Direct,
                )?,
            };
            let Some((qa, _)) = w2 else {
                return Err(Error::IrreconcilableRepresentatives(common_len));
            };
            refine_all(&mut rows, &qa);
            common_len = qa.source().len();
        }
        if first_bad_edge(w, &rows).is_some() {
            return Err(Error::IrreconcilableRepresentatives(common_len));
        }
    }

    // even-length representative convention
    if common_len % 2 != 0 {
        let pad = padding_map(common_len, common_len + 1);
        refine_all(&mut rows, &pad);
        common_len += 1;
    }

    let mut lengths = w.axis_lengths().to_vec();
    lengths.push(common_len as u32);
    let total = cell_count(&lengths);
    let mut values = Vec::with_capacity(total);
    let last = common_len + 1;
    for flat in 0..total {
        let cell = flat / last;
        let b = flat % last;
        values.push(rows[cell].as_ref().unwrap().value(b));
    }
    GridMap::new(&target, lengths, values)
}

fn first_bad_edge(w: &LoopClassGridMap, rows: &[Option<PathMap>]) -> Option<(usize, usize, Dir)> {
    let st = strides(w.axis_lengths());
    for flat in 0..w.classes().len() {
        let idx = decode_index(flat, w.axis_lengths());
        for j in 0..w.dimension() {
            if idx[j] < w.axis_lengths()[j] {
                let other = flat + st[j];
                let d = standard_dir(idx[j] as usize);
                let (a, b) = (rows[flat].as_ref().unwrap(), rows[other].as_ref().unwrap());
                let ok = match d {
                    Dir::Fwd => pointwise_ok(a, b),
                    Dir::Bwd => pointwise_ok(b, a),
                };
                if !ok {
                    return Some((flat, other, d));
                }
            }
        }
    }
    None
}

fn pointwise_ok(a: &PathMap, b: &PathMap) -> bool {
    a.len() == b.len()
        && a.values()
            .iter()
            .zip(b.values())
            .all(|(&x, &y)| a.target().step_ok(x, y))
}

/// The 1-dimensional `invert_axis` agrees with loop inversion up to the
/// orientation bookkeeping; exposed for tests.
pub fn invert_loop_grid(f: &GridMap) -> Result<GridMap> {
    let lp = f.to_loop()?;
    let inv = invert(&lp);
    GridMap::from_loop(&inv)
}

/// Degenerate-axis widening and collapse used by tests.
pub fn grid_minimal_loop(f: &GridMap) -> Result<PathMap> {
    let lp = f.to_loop()?;
    Ok(minimal_reduction(&lp))
}

/// Pads a 1-dimensional grid to a longer even length.
pub fn pad_loop_grid(f: &GridMap, n: usize) -> Result<GridMap> {
    let lp = f.to_loop()?;
    GridMap::from_loop(&pad_to_length(&lp, n)?)
}

/// Exhibits one grid as a subdivision of another when both collapse to the
/// same reduced core: per-axis common subdivisions of the two collapse maps
/// give a pair of bundles along which the two grids become equal.
pub fn equal_up_to_subdivision(
    f: &GridMap,
    g: &GridMap,
) -> Result<Option<(GridShrinkingMap, GridShrinkingMap)>> {
    let cf = canonicalize(f);
    let cg = canonicalize(g);
    if cf.key != cg.key {
        return Ok(None);
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (a, b) in cf.collapse.iter().zip(cg.collapse.iter()) {
        let (u, v) = common_subdivision(a, b)?;
        left.push(u);
        right.push(v);
    }
    Ok(Some((GridShrinkingMap::new(left)?, GridShrinkingMap::new(right)?)))
}

/// The witness pair relating a grid map to its canonical representative:
/// subdivide both and they agree cellwise.
pub fn subdivision_onto_canonical(
    g: &GridMap,
    canon: &CanonicalGrid,
) -> Result<(GridShrinkingMap, GridShrinkingMap)> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (c, s) in canon.collapse.iter().zip(canon.std_maps.iter()) {
        let (u, v) = common_subdivision(c, s)?;
        left.push(u);
        right.push(v);
    }
    let left = GridShrinkingMap::new(left)?;
    let right = GridShrinkingMap::new(right)?;
    debug_assert_eq!(
        subdivide_grid(g, &left)?.values(),
        subdivide_grid(&canon.rep, &right)?.values()
    );
    Ok((left, right))
}

/// Applies the collapse-onto-core subdivision relation between two grids
/// with equal canonical keys, reusing each side's collapse data.
pub use self::canonicalize as canonical_form;
