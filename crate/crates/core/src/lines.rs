//! Path calculus on line digraphs: shrinking maps, subdivisions,
//! standardization, minimal reduction, common subdivision, concatenation,
//! inversion and padding.
//!
//! A line digraph of length `m` has vertices `0..=m` and exactly one arrow
//! between consecutive vertices; the standard line alternates, pointing
//! forward at even positions. Shrinking maps are the monotone surjections
//! between lines that drive the whole subdivision calculus.

use std::fmt;

use crate::digraph::{Digraph, DigraphMap, VertexName};
use crate::error::{Error, Result};

/// Direction of one arrow of a line digraph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Dir {
    Fwd,
    Bwd,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Fwd => Dir::Bwd,
            Dir::Bwd => Dir::Fwd,
        }
    }
}

/// Direction of the standard alternating line at arrow position `i`.
pub fn standard_dir(i: usize) -> Dir {
    if i % 2 == 0 {
        Dir::Fwd
    } else {
        Dir::Bwd
    }
}

/// A line digraph, given by the directions of its consecutive arrows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LineDigraph {
    dirs: Vec<Dir>,
}

impl fmt::Debug for LineDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Line[")?;
        for d in &self.dirs {
            write!(f, "{}", if *d == Dir::Fwd { '>' } else { '<' })?;
        }
        write!(f, "]")
    }
}

impl LineDigraph {
    pub fn new(dirs: Vec<Dir>) -> LineDigraph {
        LineDigraph { dirs }
    }

    /// The standard line of length `m`: forward exactly at even positions.
    pub fn standard(m: usize) -> LineDigraph {
        LineDigraph {
            dirs: (0..m).map(standard_dir).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn dir(&self, i: usize) -> Dir {
        self.dirs[i]
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.dirs
    }

    pub fn is_standard(&self) -> bool {
        self.dirs.iter().enumerate().all(|(i, &d)| d == standard_dir(i))
    }

    /// The reversed line: arrow `i -> j` exactly when `l-i -> l-j` here.
    pub fn reversed(&self) -> LineDigraph {
        LineDigraph {
            dirs: self.dirs.iter().rev().map(|d| d.flip()).collect(),
        }
    }

    /// Materializes the line as a digraph with zero-padded numeric labels
    /// (so the sorted vertex order is the numeric order), based at 0.
    pub fn to_digraph(&self, name: &str) -> Digraph {
        let m = self.len();
        let label = |i: usize| line_vertex_label(i, m);
        let vertices: Vec<String> = (0..=m).map(label).collect();
        let mut arrows = Vec::new();
        for (i, d) in self.dirs.iter().enumerate() {
            match d {
                Dir::Fwd => arrows.push((label(i), label(i + 1))),
                Dir::Bwd => arrows.push((label(i + 1), label(i))),
            }
        }
        let base = label(0);
        Digraph::new(name, &vertices, &arrows, Some(base)).expect("line digraph is valid")
    }
}

/// Zero-padded label for vertex `i` of a line of length `m`.
pub fn line_vertex_label(i: usize, m: usize) -> String {
    let width = m.max(1).to_string().len();
    format!("{i:0width$}")
}

/// Whether a path/loop is based at its start, both ends, or free.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PathKind {
    /// Starts at the basepoint.
    Path,
    /// Starts and ends at the basepoint.
    Loop,
    /// Not anchored; used for intermediate values such as inverted paths.
    Free,
}

/// A digraph map from a line digraph, stored as its value sequence.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PathMap {
    domain: LineDigraph,
    target: Digraph,
    values: Vec<u32>,
    kind: PathKind,
}

fn classify(target: &Digraph, values: &[u32]) -> PathKind {
    match target.basepoint() {
        Some(b) if values[0] == b && *values.last().unwrap() == b => PathKind::Loop,
        Some(b) if values[0] == b => PathKind::Path,
        _ => PathKind::Free,
    }
}

impl PathMap {
    /// Validates the value sequence along the line: one value per vertex and
    /// arrow-or-equal across every arrow. The kind is derived from the
    /// endpoints.
    pub fn new(domain: LineDigraph, target: &Digraph, values: Vec<u32>) -> Result<PathMap> {
        if values.len() != domain.len() + 1 {
            return Err(Error::DomainMismatch(format!(
                "need {} values for a line of length {}, got {}",
                domain.len() + 1,
                domain.len(),
                values.len()
            )));
        }
        for &v in &values {
            if v as usize >= target.vertex_count() {
                return Err(Error::UnknownVertex(format!("#{v}")));
            }
        }
        for i in 0..domain.len() {
            let ok = match domain.dir(i) {
                Dir::Fwd => target.step_ok(values[i], values[i + 1]),
                Dir::Bwd => target.step_ok(values[i + 1], values[i]),
            };
            if !ok {
                return Err(Error::MapViolation {
                    from: target.vertex_name(values[i]).to_string(),
                    to: target.vertex_name(values[i + 1]).to_string(),
                });
            }
        }
        let kind = classify(target, &values);
        Ok(PathMap { domain, target: target.clone(), values, kind })
    }

    /// As `new`, but requires the result to start at the basepoint.
    pub fn based(domain: LineDigraph, target: &Digraph, values: Vec<u32>) -> Result<PathMap> {
        let p = PathMap::new(domain, target, values)?;
        match p.kind {
            PathKind::Free => Err(Error::NotBasedPath),
            _ => Ok(p),
        }
    }

    /// The constant loop of the given length at the basepoint.
    pub fn constant_loop(target: &Digraph, len: usize) -> Result<PathMap> {
        let b = target.require_basepoint()?;
        PathMap::new(LineDigraph::standard(len), target, vec![b; len + 1])
    }

    pub fn domain(&self) -> &LineDigraph {
        &self.domain
    }

    pub fn target(&self) -> &Digraph {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value(&self, i: usize) -> u32 {
        self.values[i]
    }

    pub fn start(&self) -> u32 {
        self.values[0]
    }

    pub fn end(&self) -> u32 {
        *self.values.last().unwrap()
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }

    pub fn is_loop(&self) -> bool {
        self.kind == PathKind::Loop
    }

    /// Restriction to the first `k` arrows.
    pub fn prefix(&self, k: usize) -> PathMap {
        PathMap::new(
            LineDigraph::new(self.domain.dirs()[..k].to_vec()),
            &self.target,
            self.values[..=k].to_vec(),
        )
        .expect("prefix of a valid path is valid")
    }

    /// Post-composition with a digraph map out of this path's target.
    pub fn map_into(&self, f: &DigraphMap) -> Result<PathMap> {
        if f.source() != &self.target {
            return Err(Error::TargetMismatch);
        }
        let values = self.values.iter().map(|&v| f.apply(v)).collect();
        PathMap::new(self.domain.clone(), f.target(), values)
    }

    /// Compact text form: values joined by direction glyphs.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for (i, &v) in self.values.iter().enumerate() {
            if i > 0 {
                s.push(match self.domain.dir(i - 1) {
                    Dir::Fwd => '>',
                    Dir::Bwd => '<',
                });
            }
            s.push_str(&self.target.vertex_name(v).to_string());
        }
        s
    }
}

/// A monotone surjection between line digraphs fixing the endpoints,
/// validated as a digraph map.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ShrinkingMap {
    source: LineDigraph,
    target: LineDigraph,
    values: Vec<u32>,
}

impl ShrinkingMap {
    pub fn new(source: LineDigraph, target: LineDigraph, values: Vec<u32>) -> Result<ShrinkingMap> {
        if values.len() != source.len() + 1 {
            return Err(Error::DomainMismatch(format!(
                "need {} values, got {}",
                source.len() + 1,
                values.len()
            )));
        }
        if values[0] != 0 || *values.last().unwrap() != target.len() as u32 {
            return Err(Error::DomainMismatch(
                "shrinking map must fix the endpoints".into(),
            ));
        }
        for i in 0..source.len() {
            match values[i + 1].wrapping_sub(values[i]) {
                0 => {}
                1 => {
                    // advancing over an arrow: directions must agree
                    if source.dir(i) != target.dir(values[i] as usize) {
                        return Err(Error::MapViolation {
                            from: i.to_string(),
                            to: (i + 1).to_string(),
                        });
                    }
                }
                _ => {
                    return Err(Error::DomainMismatch(
                        "shrinking map must be monotone with unit steps".into(),
                    ))
                }
            }
        }
        Ok(ShrinkingMap { source, target, values })
    }

    pub fn identity(line: &LineDigraph) -> ShrinkingMap {
        ShrinkingMap {
            source: line.clone(),
            target: line.clone(),
            values: (0..=line.len() as u32).collect(),
        }
    }

    pub fn source(&self) -> &LineDigraph {
        &self.source
    }

    pub fn target(&self) -> &LineDigraph {
        &self.target
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> u32 {
        self.values[i]
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.values.iter().enumerate().all(|(i, &v)| v == i as u32)
    }

    /// Composition `self . inner`, another shrinking map.
    pub fn compose(&self, inner: &ShrinkingMap) -> Result<ShrinkingMap> {
        if inner.target != self.source {
            return Err(Error::DomainMismatch(
                "composition domains do not line up".into(),
            ));
        }
        let values = inner.values.iter().map(|&v| self.values[v as usize]).collect();
        ShrinkingMap::new(inner.source.clone(), self.target.clone(), values)
    }

    /// Sizes of the preimages of each target vertex.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.target.len() + 1];
        for &v in &self.values {
            sizes[v as usize] += 1;
        }
        sizes
    }
}

/// Precomposition `f . h`: the subdivision of a path by a shrinking map.
pub fn subdivide(f: &PathMap, h: &ShrinkingMap) -> Result<PathMap> {
    if h.target() != f.domain() {
        return Err(Error::DomainMismatch(
            "shrinking map target does not match the path domain".into(),
        ));
    }
    let values = h.values().iter().map(|&i| f.value(i as usize)).collect();
    PathMap::new(h.source().clone(), f.target(), values)
}

/// Direction of a one-step homotopy: `Direct` relates the pair over the
/// cylinder with crossing arrows from the longer side to the shorter one
/// (pointwise `long -> short` or equal); `Inverse` uses the reversed
/// cylinder.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum HomotopyDir {
    Direct,
    Inverse,
}

impl HomotopyDir {
    pub fn flip(self) -> HomotopyDir {
        match self {
            HomotopyDir::Direct => HomotopyDir::Inverse,
            HomotopyDir::Inverse => HomotopyDir::Direct,
        }
    }
}

/// A checked witness that two paths are one-step C-homotopic over the
/// cylinder of a shrinking map. `long` lives on the source of the shrinking
/// map, `short` on its target.
#[derive(Clone, Debug)]
pub struct CylinderCertificate {
    pub shrink: ShrinkingMap,
    pub long: PathMap,
    pub short: PathMap,
    pub direction: HomotopyDir,
}

impl CylinderCertificate {
    /// Re-verifies the certificate from scratch: materializes the cylinder
    /// digraph and validates the combined assignment as a digraph map.
    pub fn verify(&self) -> Result<()> {
        if self.long.domain() != self.shrink.source() || self.short.domain() != self.shrink.target()
        {
            return Err(Error::CertificateInvalid(
                "cylinder paths do not live on the shrinking map's lines".into(),
            ));
        }
        if self.long.target() != self.short.target() {
            return Err(Error::CertificateInvalid("paths target different digraphs".into()));
        }
        let target = self.long.target();
        let cyl = cylinder_digraph(&self.shrink, self.direction);
        let nl = self.long.len();
        let ns = self.short.len();
        let mut pairs = Vec::new();
        for i in 0..=nl {
            pairs.push((
                VertexName::atom(&format!("s{}", line_vertex_label(i, nl))),
                target.vertex_name(self.long.value(i)).clone(),
            ));
        }
        for i in 0..=ns {
            pairs.push((
                VertexName::atom(&format!("t{}", line_vertex_label(i, ns))),
                target.vertex_name(self.short.value(i)).clone(),
            ));
        }
        DigraphMap::validate_named(&cyl, target, &pairs)
            .map_err(|e| Error::CertificateInvalid(format!("cylinder assignment: {e}")))?;
        Ok(())
    }
}

/// The cylinder of a shrinking map as a digraph: both lines plus one crossing
/// arrow per source vertex.
pub fn cylinder_digraph(h: &ShrinkingMap, direction: HomotopyDir) -> Digraph {
    let nl = h.source().len();
    let ns = h.target().len();
    let s = |i: usize| format!("s{}", line_vertex_label(i, nl));
    let t = |i: usize| format!("t{}", line_vertex_label(i, ns));
    let mut vertices: Vec<String> = (0..=nl).map(s).collect();
    vertices.extend((0..=ns).map(t));
    let mut arrows = Vec::new();
    for i in 0..nl {
        match h.source().dir(i) {
            Dir::Fwd => arrows.push((s(i), s(i + 1))),
            Dir::Bwd => arrows.push((s(i + 1), s(i))),
        }
    }
    for i in 0..ns {
        match h.target().dir(i) {
            Dir::Fwd => arrows.push((t(i), t(i + 1))),
            Dir::Bwd => arrows.push((t(i + 1), t(i))),
        }
    }
    for i in 0..=nl {
        let img = t(h.apply(i) as usize);
        match direction {
            HomotopyDir::Direct => arrows.push((s(i), img)),
            HomotopyDir::Inverse => arrows.push((img, s(i))),
        }
    }
    Digraph::new("cylinder", &vertices, &arrows, None).expect("cylinder digraph is valid")
}

/// Every complete shrinking map from the given source line onto the target,
/// in a deterministic (advance-first) order. Empty when none exists.
pub fn enumerate_shrinking_maps(source: &LineDigraph, target: &LineDigraph) -> Vec<ShrinkingMap> {
    let big = source.len();
    let small = target.len();
    let mut out = Vec::new();
    if big < small {
        return out;
    }
    let mut stack = vec![0u32];
    fn rec(
        source: &LineDigraph,
        target: &LineDigraph,
        stack: &mut Vec<u32>,
        out: &mut Vec<ShrinkingMap>,
    ) {
        let i = stack.len() - 1;
        let cur = *stack.last().unwrap();
        if i == source.len() {
            if cur as usize == target.len() {
                out.push(
                    ShrinkingMap::new(source.clone(), target.clone(), stack.clone())
                        .expect("enumerated map is valid"),
                );
            }
            return;
        }
        let remaining = source.len() - i;
        // advance if the directions agree and the rest still fits
        if (cur as usize) < target.len() && source.dir(i) == target.dir(cur as usize) {
            stack.push(cur + 1);
            rec(source, target, stack, out);
            stack.pop();
        }
        if target.len() - (cur as usize) < remaining {
            stack.push(cur);
            rec(source, target, stack, out);
            stack.pop();
        }
    }
    rec(source, target, &mut stack, &mut out);
    out
}

/// Search variant of [`enumerate_shrinking_maps`]: all shrinking maps from
/// standard sources of any length up to the cap onto the target. The set of
/// shrinking maps over all lengths is infinite, so a cap is mandatory; the
/// default is twice the target length plus four.
pub fn enumerate_shrinking_maps_up_to(
    target: &LineDigraph,
    max_source_len: Option<usize>,
) -> Vec<ShrinkingMap> {
    let cap = max_source_len.unwrap_or(2 * target.len() + 4);
    let mut out = Vec::new();
    for len in target.len()..=cap {
        out.extend(enumerate_shrinking_maps(&LineDigraph::standard(len), target));
    }
    out
}

/// Shows that a subdivision is one-step direct C-homotopic to the original
/// path, with the explicit cylinder witness.
pub fn subdivision_is_one_step(f: &PathMap, h: &ShrinkingMap) -> Result<CylinderCertificate> {
    let long = subdivide(f, h)?;
    let cert = CylinderCertificate {
        shrink: h.clone(),
        long,
        short: f.clone(),
        direction: HomotopyDir::Direct,
    };
    cert.verify()?;
    Ok(cert)
}

/// Result of standardizing a path: an equal-up-to-subdivision path on a
/// standard line, the shrinking map realizing it, and the cylinder witness.
#[derive(Clone, Debug)]
pub struct Standardized {
    pub path: PathMap,
    pub shrink: ShrinkingMap,
    pub certificate: CylinderCertificate,
}

/// Rewrites a path over an arbitrary line as a subdivision-equivalent path
/// over a standard line, by the arrow-comparison scan: agreeing arrows copy
/// one value, disagreeing arrows insert a single repeat to let the standard
/// orientation catch up.
pub fn standardize(f: &PathMap) -> Standardized {
    let m = f.len();
    let mut values = vec![f.value(0)];
    let mut h = vec![0u32];
    let mut j = 0usize;
    for i in 1..=m {
        if f.domain().dir(i - 1) == standard_dir(j) {
            values.push(f.value(i));
            h.push(i as u32);
            j += 1;
        } else {
            values.push(f.value(i - 1));
            h.push(i as u32 - 1);
            values.push(f.value(i));
            h.push(i as u32);
            j += 2;
        }
    }
    let source = LineDigraph::standard(j);
    let shrink = ShrinkingMap::new(source.clone(), f.domain().clone(), h)
        .expect("standardization scan yields a shrinking map");
    let path = PathMap::new(source, f.target(), values).expect("standardized path is valid");
    let certificate = CylinderCertificate {
        shrink: shrink.clone(),
        long: path.clone(),
        short: f.clone(),
        direction: HomotopyDir::Direct,
    };
    certificate
        .verify()
        .expect("standardization certificate always validates");
    Standardized { path, shrink, certificate }
}

/// Collapses repeated consecutive values. The result keeps the boundary
/// arrow of each run, so it is the canonical representative of the
/// subdivision class.
pub fn minimal_reduction(f: &PathMap) -> PathMap {
    collapse(f).0
}

/// Minimal reduction together with the run-collapse shrinking map
/// `f.domain -> reduced.domain`, which exhibits `f` as a subdivision of its
/// reduction.
pub fn collapse(f: &PathMap) -> (PathMap, ShrinkingMap) {
    let m = f.len();
    let mut values = vec![f.value(0)];
    let mut dirs = Vec::new();
    let mut run = vec![0u32];
    for i in 1..=m {
        if f.value(i) != *values.last().unwrap() {
            dirs.push(f.domain().dir(i - 1));
            values.push(f.value(i));
            run.push(run.last().unwrap() + 1);
        } else {
            run.push(*run.last().unwrap());
        }
    }
    let domain = LineDigraph::new(dirs);
    let reduced = PathMap::new(domain.clone(), f.target(), values).expect("reduction is valid");
    let shrink = ShrinkingMap::new(f.domain().clone(), domain, run)
        .expect("run collapse is a shrinking map");
    (reduced, shrink)
}

/// A common refinement of two subdivisions of the same line: shrinking maps
/// `q1`, `q2` from one standard line with `h1 . q1 = h2 . q2`. Both inputs
/// must have standard sources and share the target.
pub fn common_subdivision(h1: &ShrinkingMap, h2: &ShrinkingMap) -> Result<(ShrinkingMap, ShrinkingMap)> {
    if h1.target() != h2.target() {
        return Err(Error::DomainMismatch(
            "common subdivision needs a shared target line".into(),
        ));
    }
    if !h1.source().is_standard() || !h2.source().is_standard() {
        return Err(Error::NotStandard);
    }
    let m = h1.target().len();
    let a = h1.fiber_sizes();
    let b = h2.fiber_sizes();
    let mut q1 = vec![0u32];
    let mut q2 = vec![0u32];
    let mut pos1 = 0u32;
    let mut pos2 = 0u32;
    for i in 0..=m {
        // level 0 starts on its fiber; later levels must first cross the
        // boundary arrow, hence one extra advancing step
        let s1 = if i == 0 { a[0] - 1 } else { a[i] };
        let s2 = if i == 0 { b[0] - 1 } else { b[i] };
        for l in 1..=s1.max(s2) {
            if l <= s1 {
                pos1 += 1;
            }
            if l <= s2 {
                pos2 += 1;
            }
            q1.push(pos1);
            q2.push(pos2);
        }
    }
    let source = LineDigraph::standard(q1.len() - 1);
    let q1 = ShrinkingMap::new(source.clone(), h1.source().clone(), q1)?;
    let q2 = ShrinkingMap::new(source, h2.source().clone(), q2)?;
    debug_assert_eq!(
        h1.compose(&q1).unwrap().values(),
        h2.compose(&q2).unwrap().values()
    );
    Ok((q1, q2))
}

/// Concatenation of two paths; the second must start where the first ends.
pub fn concatenate(f: &PathMap, g: &PathMap) -> Result<PathMap> {
    if f.target() != g.target() {
        return Err(Error::TargetMismatch);
    }
    if f.end() != g.start() {
        return Err(Error::EndpointMismatch(
            f.target().vertex_name(f.end()).to_string(),
            g.target().vertex_name(g.start()).to_string(),
        ));
    }
    let mut dirs = f.domain().dirs().to_vec();
    dirs.extend_from_slice(g.domain().dirs());
    let mut values = f.values().to_vec();
    values.extend_from_slice(&g.values()[1..]);
    PathMap::new(LineDigraph::new(dirs), f.target(), values)
}

/// Concatenation in the group-representative regime: both standard loops of
/// even length, so the result is a standard loop again.
pub fn concatenate_standard_loops(f: &PathMap, g: &PathMap) -> Result<PathMap> {
    if !f.domain().is_standard() || !g.domain().is_standard() {
        return Err(Error::NotStandard);
    }
    if f.len() % 2 != 0 || g.len() % 2 != 0 {
        return Err(Error::ParityViolation(
            "standard-loop concatenation needs even lengths".into(),
        ));
    }
    let out = concatenate(f, g)?;
    debug_assert!(out.domain().is_standard());
    Ok(out)
}

/// Reversal: values in the opposite order over the reversed line. An
/// involution; keeps standard loops of even length standard.
pub fn invert(f: &PathMap) -> PathMap {
    let values = f.values().iter().rev().copied().collect();
    PathMap::new(f.domain().reversed(), f.target(), values).expect("reversal of a valid path is valid")
}

/// Extends a standard path to a longer standard line by repeating its final
/// value: the canonical representative map of the direct system. Loops must
/// be padded by an even amount.
pub fn pad_to_length(f: &PathMap, n: usize) -> Result<PathMap> {
    if !f.domain().is_standard() {
        return Err(Error::NotStandard);
    }
    let m = f.len();
    if n < m {
        return Err(Error::LengthTooShort { requested: n, current: m });
    }
    if f.is_loop() && (n - m) % 2 != 0 {
        return Err(Error::ParityViolation(format!(
            "loop of length {m} may only be padded to the same parity, not {n}"
        )));
    }
    let mut values = f.values().to_vec();
    values.resize(n + 1, f.end());
    PathMap::new(LineDigraph::standard(n), f.target(), values)
}

/// The padding shrinking map `J_n -> J_m` behind `pad_to_length`.
pub fn padding_map(m: usize, n: usize) -> ShrinkingMap {
    assert!(n >= m);
    let values = (0..=n).map(|i| i.min(m) as u32).collect();
    ShrinkingMap::new(LineDigraph::standard(n), LineDigraph::standard(m), values)
        .expect("padding is a shrinking map")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star_digraph() -> Digraph {
        // * -> a, a -> b, * -> b
        Digraph::new(
            "g",
            &["*", "a", "b"],
            &[("*", "a"), ("a", "b"), ("*", "b")],
            Some("*"),
        )
        .unwrap()
    }

    #[test]
    fn standard_line_alternates() {
        let l = LineDigraph::standard(3);
        assert_eq!(l.dirs(), &[Dir::Fwd, Dir::Bwd, Dir::Fwd]);
        assert!(l.is_standard());
        assert!(!LineDigraph::new(vec![Dir::Bwd]).is_standard());
    }

    #[test]
    fn shrinking_example_i3_to_i2() {
        // 0>1<2>3 onto 0>1<2 contains h with h(2) = h(3) = 2
        let i3 = LineDigraph::new(vec![Dir::Fwd, Dir::Bwd, Dir::Fwd]);
        let i2 = LineDigraph::new(vec![Dir::Fwd, Dir::Bwd]);
        let maps = enumerate_shrinking_maps(&i3, &i2);
        assert!(maps.iter().any(|h| h.values() == [0, 1, 2, 2]));
    }

    #[test]
    fn no_shrinking_map_onto_reversed_line() {
        let j2 = LineDigraph::standard(2);
        let rev = LineDigraph::new(vec![Dir::Bwd, Dir::Fwd]);
        assert!(enumerate_shrinking_maps(&j2, &rev).is_empty());
    }

    #[test]
    fn identity_among_equal_length_maps() {
        let j3 = LineDigraph::standard(3);
        let maps = enumerate_shrinking_maps(&j3, &j3);
        assert_eq!(maps.len(), 1);
        assert!(maps[0].is_identity());
    }

    #[test]
    fn subdivide_repeats_fiber_values() {
        let g = star_digraph();
        // f on 0>1<2>3 with values *,a,*,b ... need arrow-or-equal: *->a, *->a (bwd), *->b
        let i3 = LineDigraph::new(vec![Dir::Fwd, Dir::Bwd, Dir::Fwd]);
        let f = PathMap::new(
            i3.clone(),
            &g,
            vec![0, 1, 0, 2],
        )
        .unwrap();
        // h : I5 -> I3 that repeats vertices 1 and 3
        let i5 = LineDigraph::new(vec![Dir::Fwd, Dir::Bwd, Dir::Bwd, Dir::Fwd, Dir::Fwd]);
        let h = ShrinkingMap::new(i5, i3, vec![0, 1, 1, 2, 3, 3]).unwrap();
        let sub = subdivide(&f, &h).unwrap();
        assert_eq!(sub.values(), &[0, 1, 1, 0, 2, 2]);
        let cert = subdivision_is_one_step(&f, &h).unwrap();
        cert.verify().unwrap();
    }

    #[test]
    fn standardize_inserts_one_repeat() {
        let g = Digraph::new("g", &["*", "x", "y"], &[("*", "x"), ("x", "y")], Some("*")).unwrap();
        // ascending path on 0->1->2
        let f = PathMap::new(LineDigraph::new(vec![Dir::Fwd, Dir::Fwd]), &g, vec![0, 1, 2]).unwrap();
        let s = standardize(&f);
        assert!(s.path.domain().is_standard());
        assert_eq!(s.path.len(), 3);
        assert_eq!(s.path.values(), &[0, 1, 1, 2]);
        assert_eq!(s.shrink.values(), &[0, 1, 1, 2]);
        s.certificate.verify().unwrap();
    }

    #[test]
    fn standardize_fixed_point_on_standard_input() {
        let g = star_digraph();
        let f = PathMap::new(LineDigraph::standard(2), &g, vec![0, 1, 0]).unwrap();
        let s = standardize(&f);
        assert_eq!(s.path, f);
        assert!(s.shrink.is_identity());
    }

    #[test]
    fn standardize_keeps_alternating_general_line() {
        let g = star_digraph();
        let alt = LineDigraph::new(vec![Dir::Fwd, Dir::Bwd, Dir::Fwd]);
        let f = PathMap::new(alt, &g, vec![0, 1, 0, 2]).unwrap();
        let s = standardize(&f);
        assert_eq!(s.path.values(), f.values());
        assert_eq!(s.path.len(), 3);
    }

    #[test]
    fn minimal_reduction_collapses_and_is_idempotent() {
        let g = star_digraph();
        let f = PathMap::new(
            LineDigraph::standard(3),
            &g,
            vec![0, 1, 1, 2],
        )
        .unwrap();
        let r = minimal_reduction(&f);
        assert_eq!(r.values(), &[0, 1, 2]);
        assert_eq!(minimal_reduction(&r), r);
        let constant = PathMap::constant_loop(&g, 4).unwrap();
        assert_eq!(minimal_reduction(&constant).len(), 0);
    }

    #[test]
    fn collapse_exhibits_subdivision() {
        let g = star_digraph();
        let f = PathMap::new(LineDigraph::standard(3), &g, vec![0, 1, 1, 2]).unwrap();
        let (red, c) = collapse(&f);
        assert_eq!(subdivide(&red, &c).unwrap(), f);
    }

    #[test]
    fn common_subdivision_identity_case() {
        let j2 = LineDigraph::standard(2);
        let id = ShrinkingMap::identity(&j2);
        let (q1, q2) = common_subdivision(&id, &id).unwrap();
        assert!(q1.is_identity() && q2.is_identity());
    }

    #[test]
    fn common_subdivision_commutes() {
        let j2 = LineDigraph::standard(2);
        for h1 in enumerate_shrinking_maps(&LineDigraph::standard(4), &j2) {
            for h2 in enumerate_shrinking_maps(&LineDigraph::standard(6), &j2) {
                let (q1, q2) = common_subdivision(&h1, &h2).unwrap();
                assert_eq!(
                    h1.compose(&q1).unwrap().values(),
                    h2.compose(&q2).unwrap().values()
                );
            }
        }
    }

    #[test]
    fn concatenate_and_invert() {
        let g = star_digraph();
        let f = PathMap::new(LineDigraph::standard(2), &g, vec![0, 1, 0]).unwrap();
        let c = PathMap::constant_loop(&g, 2).unwrap();
        let fc = concatenate_standard_loops(&f, &c).unwrap();
        assert_eq!(fc.len(), 4);
        assert_eq!(fc.values(), &[0, 1, 0, 0, 0]);
        assert!(fc.is_loop());

        let inv = invert(&f);
        assert_eq!(invert(&inv), f);
        assert!(inv.domain().is_standard());

        let odd = PathMap::constant_loop(&g, 1).unwrap();
        assert!(matches!(
            concatenate_standard_loops(&odd, &c),
            Err(Error::ParityViolation(_))
        ));
    }

    #[test]
    fn concatenate_endpoint_mismatch() {
        let g = star_digraph();
        let f = PathMap::new(LineDigraph::standard(1), &g, vec![0, 1]).unwrap();
        let x = PathMap::new(LineDigraph::standard(1), &g, vec![0, 2]).unwrap();
        assert!(matches!(concatenate(&f, &x), Err(Error::EndpointMismatch(_, _))));
    }

    #[test]
    fn padding_behaves_like_direct_system_map() {
        let g = star_digraph();
        let f = PathMap::new(LineDigraph::standard(2), &g, vec![0, 1, 0]).unwrap();
        assert_eq!(pad_to_length(&f, 2).unwrap(), f);
        let padded = pad_to_length(&f, 4).unwrap();
        assert_eq!(padded.values(), &[0, 1, 0, 0, 0]);
        assert!(matches!(pad_to_length(&f, 3), Err(Error::ParityViolation(_))));
        assert_eq!(minimal_reduction(&padded), minimal_reduction(&f));
        // padding is itself a subdivision
        let pm = padding_map(2, 4);
        assert_eq!(subdivide(&f, &pm).unwrap(), padded);
    }
}
