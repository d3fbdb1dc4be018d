//! Seeded samplers for digraphs, paths, loops and grid maps.
//!
//! The crate carries its own tiny splitmix generator so that every sampled
//! structure is reproducible from a single `u64` seed, with no dependency on
//! a platform RNG.

use crate::digraph::Digraph;
use crate::grids::{cell_count, decode_index, strides, GridMap};
use crate::lines::{standard_dir, Dir, LineDigraph, PathMap};

/// Splitmix64: tiny, fast, good enough for test-case generation.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` (bound > 0).
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        self.next_u64() % den as u64 <= (num as u64).saturating_sub(1)
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len())]
    }
}

/// A random based digraph with `1..=max_vertices` vertices; each ordered
/// pair carries an arrow with probability `num/den`.
pub fn digraph(rng: &mut Rng, max_vertices: usize, num: u32, den: u32) -> Digraph {
    let n = 1 + rng.below(max_vertices);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut arrows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.chance(num, den) {
                arrows.push((names[a].clone(), names[b].clone()));
            }
        }
    }
    Digraph::new("sampled", &names, &arrows, Some(names[0].clone())).unwrap()
}

/// A random based digraph in which every vertex is linked to the basepoint
/// in at least one direction, so that small grid bumps stay contractible.
pub fn digraph_with_base_links(rng: &mut Rng, max_vertices: usize, num: u32, den: u32) -> Digraph {
    let n = 1 + rng.below(max_vertices);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut arrows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.chance(num, den) {
                arrows.push((names[a].clone(), names[b].clone()));
            }
        }
    }
    for v in 1..n {
        if rng.chance(1, 2) {
            arrows.push((names[0].clone(), names[v].clone()));
        } else {
            arrows.push((names[v].clone(), names[0].clone()));
        }
    }
    Digraph::new("sampled", &names, &arrows, Some(names[0].clone())).unwrap()
}

/// A random path of the exact given length over a random line digraph,
/// starting at the basepoint; `None` when the walk gets stuck.
pub fn path(rng: &mut Rng, target: &Digraph, len: usize) -> Option<PathMap> {
    let base = target.basepoint()?;
    let mut values = vec![base];
    let mut dirs = Vec::new();
    for _ in 0..len {
        let cur = *values.last().unwrap();
        let mut options: Vec<(u32, Dir)> = Vec::new();
        for &w in target.out_neighbors(cur) {
            options.push((w, Dir::Fwd));
        }
        for &w in target.in_neighbors(cur) {
            options.push((w, Dir::Bwd));
        }
        // staying put is always possible, in either orientation
        options.push((cur, Dir::Fwd));
        options.push((cur, Dir::Bwd));
        let &(w, d) = rng.pick(&options);
        values.push(w);
        dirs.push(d);
    }
    PathMap::new(LineDigraph::new(dirs), target, values).ok()
}

/// A random standard loop of the exact given even length: a random valid
/// fill found by backtracking; `None` when the digraph admits none beyond
/// the constant loop and the constant is excluded.
pub fn standard_loop(rng: &mut Rng, target: &Digraph, len: usize) -> Option<PathMap> {
    let base = target.basepoint()?;
    let mut values = vec![u32::MAX; len + 1];
    values[0] = base;
    values[len] = base;
    fill_loop(rng, target, &mut values, 1, len)
        .then(|| PathMap::new(LineDigraph::standard(len), target, values).unwrap())
}

fn fill_loop(rng: &mut Rng, target: &Digraph, values: &mut [u32], i: usize, len: usize) -> bool {
    if i == len {
        // final arrow already constrained by the chosen values
        let d = standard_dir(len - 1);
        let (a, b) = (values[len - 1], values[len]);
        return match d {
            Dir::Fwd => target.step_ok(a, b),
            Dir::Bwd => target.step_ok(b, a),
        };
    }
    let prev = values[i - 1];
    let mut candidates: Vec<u32> = match standard_dir(i - 1) {
        Dir::Fwd => target.out_neighbors(prev).to_vec(),
        Dir::Bwd => target.in_neighbors(prev).to_vec(),
    };
    candidates.push(prev);
    // random order, then backtrack
    for k in (1..candidates.len()).rev() {
        candidates.swap(k, rng.below(k + 1));
    }
    for w in candidates {
        values[i] = w;
        if fill_loop(rng, target, values, i + 1, len) {
            return true;
        }
    }
    values[i] = u32::MAX;
    false
}

/// A random valid grid map with the given even axis lengths, filled cell by
/// cell with backtracking; `None` if the digraph admits none.
pub fn grid(rng: &mut Rng, target: &Digraph, lengths: &[u32]) -> Option<GridMap> {
    let base = target.basepoint()?;
    let total = cell_count(lengths);
    let mut values = vec![u32::MAX; total];
    let st = strides(lengths);
    // boundary first
    for flat in 0..total {
        let idx = decode_index(flat, lengths);
        if idx.iter().zip(lengths).any(|(&c, &m)| c == 0 || c == m) {
            values[flat] = base;
        }
    }
    fill_grid(rng, target, lengths, &st, &mut values, 0)
        .then(|| GridMap::new(target, lengths.to_vec(), values).unwrap())
}

fn fill_grid(
    rng: &mut Rng,
    target: &Digraph,
    lengths: &[u32],
    st: &[usize],
    values: &mut [u32],
    flat: usize,
) -> bool {
    let total = values.len();
    let mut flat = flat;
    while flat < total && values[flat] != u32::MAX {
        flat += 1;
    }
    if flat == total {
        return true;
    }
    let idx = decode_index(flat, lengths);
    // candidates constrained by the already-filled smaller neighbors
    let mut candidates: Vec<u32> = (0..target.vertex_count() as u32).collect();
    for k in (1..candidates.len()).rev() {
        candidates.swap(k, rng.below(k + 1));
    }
    'cand: for w in candidates {
        for j in 0..lengths.len() {
            if idx[j] > 0 {
                let down = values[flat - st[j]];
                if down != u32::MAX {
                    let ok = match standard_dir(idx[j] as usize - 1) {
                        Dir::Fwd => target.step_ok(down, w),
                        Dir::Bwd => target.step_ok(w, down),
                    };
                    if !ok {
                        continue 'cand;
                    }
                }
            }
            if idx[j] < lengths[j] {
                let up = values[flat + st[j]];
                if up != u32::MAX {
                    let ok = match standard_dir(idx[j] as usize) {
                        Dir::Fwd => target.step_ok(w, up),
                        Dir::Bwd => target.step_ok(up, w),
                    };
                    if !ok {
                        continue 'cand;
                    }
                }
            }
        }
        values[flat] = w;
        if fill_grid(rng, target, lengths, st, values, flat + 1) {
            return true;
        }
        values[flat] = u32::MAX;
    }
    false
}
