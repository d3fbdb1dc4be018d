//! Line-oriented text formats: digraph documents (`.dg`), digraph pairs
//! (`.dgp`), digraph maps (`.dgm`), loop/path and grid map documents
//! (`.loop`, `.grid`), homotopy certificates (`.cert`) and DOT export.
//!
//! Documents are diff-friendly: `#` starts a comment, tokens are whitespace
//! separated, and emission is canonical (sorted vertices and arrows), so
//! `parse . emit` is the identity on canonical documents and `emit . parse`
//! canonicalizes.

use digraph_homotopy::digraph::{Digraph, DigraphMap, DigraphPair, VertexName};
use digraph_homotopy::grids::{GridMap, GridShrinkingMap};
use digraph_homotopy::homotopy::{HomotopyCertificate, OneStepWitness};
use digraph_homotopy::lines::{Dir, HomotopyDir, LineDigraph, PathMap, ShrinkingMap};
use digraph_homotopy::{Error, Result};

fn err(line: usize, reason: impl Into<String>) -> Error {
    Error::ParseError { line, reason: reason.into() }
}

/// Numbered, comment-stripped, non-blank lines.
fn lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let stripped = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let t = stripped.trim();
            if t.is_empty() {
                None
            } else {
                Some((i + 1, t.to_string()))
            }
        })
        .collect()
}

fn check_token(line: usize, tok: &str) -> Result<String> {
    if tok == "->" {
        return Err(err(line, "`->` is not a vertex identifier"));
    }
    Ok(tok.to_string())
}

/// Derived constructions name their vertices with `<`/`>` glyphs; base
/// digraphs fed into them must keep those glyphs out of their identifiers.
pub fn ensure_plain_names(g: &Digraph) -> Result<()> {
    for n in g.vertex_names() {
        let s = n.to_string();
        if s.contains('<') || s.contains('>') {
            return Err(Error::ParseError {
                line: 0,
                reason: format!(
                    "vertex identifier `{s}` contains '<' or '>', which derived digraphs reserve"
                ),
            });
        }
    }
    Ok(())
}

fn parse_arrow(line: usize, text: &str) -> Result<(String, String)> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != 3 || parts[1] != "->" {
        return Err(err(line, format!("expected `u -> v`, got `{text}`")));
    }
    Ok((check_token(line, parts[0])?, check_token(line, parts[2])?))
}

struct DigraphDoc {
    name: String,
    vertices: Vec<String>,
    base: Option<String>,
    arrows: Vec<(String, String)>,
}

/// Parses one digraph block starting at `pos`; stops at any line starting a
/// known sibling section.
fn parse_digraph_block(
    ls: &[(usize, String)],
    pos: &mut usize,
    stop: &[&str],
) -> Result<DigraphDoc> {
    let (ln, first) = ls
        .get(*pos)
        .ok_or_else(|| err(0, "expected a `digraph <name>` line"))?;
    let mut words = first.split_whitespace();
    if words.next() != Some("digraph") {
        return Err(err(*ln, format!("expected `digraph <name>`, got `{first}`")));
    }
    let name = words.next().unwrap_or("unnamed").to_string();
    *pos += 1;
    let mut vertices = Vec::new();
    let mut base = None;
    let mut arrows = Vec::new();
    let mut in_arrows = false;
    while let Some((ln, line)) = ls.get(*pos) {
        let head = line.split_whitespace().next().unwrap();
        if stop.contains(&head) {
            break;
        }
        if let Some(rest) = line.strip_prefix("vertices:") {
            for tok in rest.split_whitespace() {
                vertices.push(check_token(*ln, tok)?);
            }
            in_arrows = false;
        } else if let Some(rest) = line.strip_prefix("base:") {
            base = Some(check_token(*ln, rest.trim())?);
            in_arrows = false;
        } else if line == "arrows:" {
            in_arrows = true;
        } else if in_arrows && line.contains("->") {
            let (a, b) = parse_arrow(*ln, line)?;
            if a == b {
                return Err(Error::SelfLoop(format!("{a} (line {ln})")));
            }
            arrows.push((a, b));
        } else {
            return Err(err(*ln, format!("unexpected line `{line}`")));
        }
        *pos += 1;
    }
    Ok(DigraphDoc { name, vertices, base, arrows })
}

fn realize(doc: &DigraphDoc) -> Result<Digraph> {
    Digraph::new(&doc.name, &doc.vertices, &doc.arrows, doc.base.clone())
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let ls = lines(text);
    let mut pos = 0;
    let doc = parse_digraph_block(&ls, &mut pos, &[])?;
    realize(&doc)
}

pub fn emit_digraph(g: &Digraph) -> String {
    let mut out = format!("digraph {}\n", g.name());
    out.push_str("vertices:");
    for n in g.vertex_names() {
        out.push_str(&format!(" {n}"));
    }
    out.push('\n');
    if let Some(b) = g.basepoint() {
        out.push_str(&format!("base: {}\n", g.vertex_name(b)));
    }
    out.push_str("arrows:\n");
    for (a, b) in g.arrows() {
        out.push_str(&format!("{} -> {}\n", g.vertex_name(a), g.vertex_name(b)));
    }
    out
}

// ---------------------------------------------------------------------------
// digraph pairs
// ---------------------------------------------------------------------------

pub fn parse_pair(text: &str) -> Result<DigraphPair> {
    let ls = lines(text);
    let mut pos = 0;
    let ambient_doc = parse_digraph_block(&ls, &mut pos, &["sub-vertices:", "sub-arrows:"])?;
    let ambient = realize(&ambient_doc)?;
    let mut sub_vertices = Vec::new();
    let mut sub_arrows = Vec::new();
    let mut in_arrows = false;
    while let Some((ln, line)) = ls.get(pos) {
        if let Some(rest) = line.strip_prefix("sub-vertices:") {
            for tok in rest.split_whitespace() {
                sub_vertices.push(check_token(*ln, tok)?);
            }
        } else if line == "sub-arrows:" {
            in_arrows = true;
        } else if in_arrows && line.contains("->") {
            sub_arrows.push(parse_arrow(*ln, line)?);
        } else {
            return Err(err(*ln, format!("unexpected line `{line}`")));
        }
        pos += 1;
    }
    let sub = Digraph::new(&format!("{}-sub", ambient.name()), &sub_vertices, &sub_arrows, None)?;
    DigraphPair::new(ambient, sub)
}

pub fn emit_pair(p: &DigraphPair) -> String {
    let mut out = emit_digraph(p.ambient());
    out.push_str("sub-vertices:");
    for n in p.sub().vertex_names() {
        out.push_str(&format!(" {n}"));
    }
    out.push('\n');
    out.push_str("sub-arrows:\n");
    for (a, b) in p.sub().arrows() {
        out.push_str(&format!(
            "{} -> {}\n",
            p.sub().vertex_name(a),
            p.sub().vertex_name(b)
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// digraph maps
// ---------------------------------------------------------------------------

pub fn parse_map(text: &str) -> Result<DigraphMap> {
    let ls = lines(text);
    let mut pos = 0;
    let (ln0, first) = &ls.first().ok_or_else(|| err(0, "empty map document"))?;
    if !first.starts_with("map") {
        return Err(err(*ln0, "expected `map <name>`"));
    }
    pos += 1;
    let expect = |pos: &mut usize, word: &str| -> Result<()> {
        match ls.get(*pos) {
            Some((_, l)) if l == word => {
                *pos += 1;
                Ok(())
            }
            Some((ln, l)) => Err(err(*ln, format!("expected `{word}`, got `{l}`"))),
            None => Err(err(0, format!("expected `{word}`"))),
        }
    };
    expect(&mut pos, "source:")?;
    let source = realize(&parse_digraph_block(&ls, &mut pos, &["target:"])?)?;
    expect(&mut pos, "target:")?;
    let target = realize(&parse_digraph_block(&ls, &mut pos, &["assign:"])?)?;
    expect(&mut pos, "assign:")?;
    let mut pairs = Vec::new();
    while let Some((ln, line)) = ls.get(pos) {
        let (a, b) = parse_arrow(*ln, line)?;
        pairs.push((VertexName::atom(&a), VertexName::atom(&b)));
        pos += 1;
    }
    DigraphMap::validate_named(&source, &target, &pairs)
}

pub fn emit_map(name: &str, m: &DigraphMap) -> String {
    let mut out = format!("map {name}\nsource:\n");
    out.push_str(&emit_digraph(m.source()));
    out.push_str("target:\n");
    out.push_str(&emit_digraph(m.target()));
    out.push_str("assign:\n");
    for v in 0..m.source().vertex_count() as u32 {
        out.push_str(&format!(
            "{} -> {}\n",
            m.source().vertex_name(v),
            m.target().vertex_name(m.apply(v))
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// loop and grid map documents
// ---------------------------------------------------------------------------

pub enum MapDocument {
    Path(PathMap),
    Grid(GridMap),
}

impl MapDocument {
    pub fn target(&self) -> &Digraph {
        match self {
            MapDocument::Path(p) => p.target(),
            MapDocument::Grid(g) => g.target(),
        }
    }
}

fn parse_orientation(ln: usize, text: &str, len: usize) -> Result<LineDigraph> {
    let dirs: Vec<Dir> = text
        .trim()
        .chars()
        .map(|c| match c {
            '+' | '>' => Ok(Dir::Fwd),
            '-' | '<' => Ok(Dir::Bwd),
            other => Err(err(ln, format!("unexpected orientation glyph `{other}`"))),
        })
        .collect::<Result<_>>()?;
    if dirs.len() != len {
        return Err(err(ln, format!("orientation needs {len} glyphs, got {}", dirs.len())));
    }
    Ok(LineDigraph::new(dirs))
}

pub fn parse_map_document(text: &str) -> Result<MapDocument> {
    let ls = lines(text);
    let mut pos = 0;
    let doc = parse_digraph_block(&ls, &mut pos, &["loop", "path", "grid"])?;
    let target = realize(&doc)?;
    let (ln, kind) = ls
        .get(pos)
        .ok_or_else(|| err(0, "expected a `loop`, `path` or `grid` section"))?;
    let kind = kind.clone();
    pos += 1;
    let mut fields: Vec<(usize, String, String)> = Vec::new();
    let mut value_tokens: Vec<(usize, String)> = Vec::new();
    let mut in_values = false;
    while let Some((ln, line)) = ls.get(pos) {
        if in_values {
            for tok in line.split_whitespace() {
                value_tokens.push((*ln, tok.to_string()));
            }
        } else if let Some((k, v)) = line.split_once(':') {
            if k == "values" {
                in_values = true;
                for tok in v.split_whitespace() {
                    value_tokens.push((*ln, tok.to_string()));
                }
            } else {
                fields.push((*ln, k.to_string(), v.trim().to_string()));
            }
        } else {
            return Err(err(*ln, format!("unexpected line `{line}`")));
        }
        pos += 1;
    }
    let field = |name: &str| fields.iter().find(|(_, k, _)| k == name);
    let values: Vec<u32> = value_tokens
        .iter()
        .map(|(ln, tok)| {
            target
                .vertex_id_by_str(tok)
                .ok_or_else(|| err(*ln, format!("unknown vertex `{tok}` in values")))
        })
        .collect::<Result<_>>()?;
    match kind.as_str() {
        "loop" | "path" => {
            let (fln, _, len_text) = field("length")
                .ok_or_else(|| err(*ln, "loop/path documents need a `length:` line"))?;
            let len: usize = len_text
                .parse()
                .map_err(|_| err(*fln, format!("bad length `{len_text}`")))?;
            let domain = match field("orientation") {
                Some((oln, _, o)) => parse_orientation(*oln, o, len)?,
                None => LineDigraph::standard(len),
            };
            let p = PathMap::new(domain, &target, values)?;
            if kind == "loop" && !p.is_loop() {
                return Err(err(*ln, "values do not describe a based loop"));
            }
            Ok(MapDocument::Path(p))
        }
        "grid" => {
            let (aln, _, axes_text) =
                field("axes").ok_or_else(|| err(*ln, "grid documents need an `axes:` line"))?;
            let axes: Vec<u32> = axes_text
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| err(*aln, format!("bad axis length `{t}`"))))
                .collect::<Result<_>>()?;
            Ok(MapDocument::Grid(GridMap::new(&target, axes, values)?))
        }
        other => Err(err(*ln, format!("unknown map kind `{other}`"))),
    }
}

pub fn emit_path_document(p: &PathMap) -> String {
    let mut out = emit_digraph(p.target());
    out.push_str(if p.is_loop() { "loop\n" } else { "path\n" });
    out.push_str(&format!("length: {}\n", p.len()));
    if !p.domain().is_standard() {
        out.push_str("orientation: ");
        for d in p.domain().dirs() {
            out.push(match d {
                Dir::Fwd => '+',
                Dir::Bwd => '-',
            });
        }
        out.push('\n');
    }
    out.push_str("values:");
    for &v in p.values() {
        out.push_str(&format!(" {}", p.target().vertex_name(v)));
    }
    out.push('\n');
    out
}

pub fn emit_grid_document(g: &GridMap) -> String {
    let mut out = emit_digraph(g.target());
    out.push_str("grid\naxes:");
    for m in g.axis_lengths() {
        out.push_str(&format!(" {m}"));
    }
    out.push_str("\nvalues:\n");
    let row = *g.axis_lengths().last().unwrap() as usize + 1;
    for chunk in g.values().chunks(row) {
        let names: Vec<String> = chunk
            .iter()
            .map(|&v| g.target().vertex_name(v).to_string())
            .collect();
        out.push_str(&names.join(" "));
        out.push('\n');
    }
    out
}

pub fn emit_map_document(doc: &MapDocument) -> String {
    match doc {
        MapDocument::Path(p) => emit_path_document(p),
        MapDocument::Grid(g) => emit_grid_document(g),
    }
}

// ---------------------------------------------------------------------------
// certificates
// ---------------------------------------------------------------------------

pub fn emit_certificate(c: &HomotopyCertificate) -> String {
    let mut out = String::from("certificate\n");
    out.push_str(&format!("dim: {}\n", c.start.dimension()));
    out.push_str(&emit_digraph(c.start.target()));
    out.push_str("endpoint left\n");
    emit_grid_body(&mut out, &c.start);
    out.push_str("endpoint right\n");
    emit_grid_body(&mut out, c.end());
    out.push_str(&format!("steps: {}\n", c.steps.len()));
    for (w, next) in &c.steps {
        out.push_str("step\n");
        out.push_str(&format!(
            "direction: {}\n",
            match w.direction {
                HomotopyDir::Direct => "direct",
                HomotopyDir::Inverse => "inverse",
            }
        ));
        for (i, h) in w.left.factors().iter().enumerate() {
            out.push_str(&format!("left-sub {}:", i + 1));
            for &v in h.values() {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        for (i, h) in w.right.factors().iter().enumerate() {
            out.push_str(&format!("right-sub {}:", i + 1));
            for &v in h.values() {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        out.push_str("next\n");
        emit_grid_body(&mut out, next);
    }
    out
}

fn emit_grid_body(out: &mut String, g: &GridMap) {
    out.push_str("axes:");
    for m in g.axis_lengths() {
        out.push_str(&format!(" {m}"));
    }
    out.push_str("\nvalues:");
    for &v in g.values() {
        out.push_str(&format!(" {}", g.target().vertex_name(v)));
    }
    out.push('\n');
}

pub fn parse_certificate(text: &str) -> Result<HomotopyCertificate> {
    let ls = lines(text);
    let mut pos = 0;
    match ls.first() {
        Some((_, l)) if l == "certificate" => pos += 1,
        _ => return Err(err(1, "expected `certificate`")),
    }
    let (_, dim_line) = ls.get(pos).ok_or_else(|| err(0, "missing dim"))?;
    let dim: usize = dim_line
        .strip_prefix("dim:")
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| err(0, "bad `dim:` line"))?;
    pos += 1;
    let target = realize(&parse_digraph_block(&ls, &mut pos, &["endpoint"])?)?;

    let parse_grid_body = |pos: &mut usize| -> Result<GridMap> {
        let (aln, axes_line) = ls.get(*pos).ok_or_else(|| err(0, "missing axes"))?;
        let axes: Vec<u32> = axes_line
            .strip_prefix("axes:")
            .ok_or_else(|| err(*aln, "expected `axes:`"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(*aln, "bad axis length")))
            .collect::<Result<_>>()?;
        *pos += 1;
        let (vln, vals_line) = ls.get(*pos).ok_or_else(|| err(0, "missing values"))?;
        let values: Vec<u32> = vals_line
            .strip_prefix("values:")
            .ok_or_else(|| err(*vln, "expected `values:`"))?
            .split_whitespace()
            .map(|t| {
                target
                    .vertex_id_by_str(t)
                    .ok_or_else(|| err(*vln, format!("unknown vertex `{t}`")))
            })
            .collect::<Result<_>>()?;
        *pos += 1;
        GridMap::new(&target, axes, values)
    };

    let expect = |pos: &mut usize, word: &str| -> Result<()> {
        match ls.get(*pos) {
            Some((_, l)) if l == word => {
                *pos += 1;
                Ok(())
            }
            Some((ln, l)) => Err(err(*ln, format!("expected `{word}`, got `{l}`"))),
            None => Err(err(0, format!("expected `{word}`"))),
        }
    };

    expect(&mut pos, "endpoint left")?;
    let start = parse_grid_body(&mut pos)?;
    expect(&mut pos, "endpoint right")?;
    let end = parse_grid_body(&mut pos)?;
    let (_, steps_line) = ls.get(pos).ok_or_else(|| err(0, "missing steps"))?;
    let n_steps: usize = steps_line
        .strip_prefix("steps:")
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| err(0, "bad `steps:` line"))?;
    pos += 1;

    let mut cur_lengths: Vec<u32> = start.axis_lengths().to_vec();
    let mut steps = Vec::with_capacity(n_steps);
    for _ in 0..n_steps {
        expect(&mut pos, "step")?;
        let (dln, dline) = ls.get(pos).ok_or_else(|| err(0, "missing direction"))?;
        let direction = match dline.strip_prefix("direction:").map(str::trim) {
            Some("direct") => HomotopyDir::Direct,
            Some("inverse") => HomotopyDir::Inverse,
            _ => return Err(err(*dln, "expected `direction: direct|inverse`")),
        };
        pos += 1;
        let mut parse_subs = |label: &str, targets: &[u32]| -> Result<Vec<ShrinkingMap>> {
            let mut subs = Vec::with_capacity(dim);
            for i in 0..dim {
                let (sln, sline) = ls.get(pos).ok_or_else(|| err(0, "missing subdivision"))?;
                let prefix = format!("{label} {}:", i + 1);
                let body = sline
                    .strip_prefix(&prefix)
                    .ok_or_else(|| err(*sln, format!("expected `{prefix}`")))?;
                let vals: Vec<u32> = body
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| err(*sln, "bad subdivision value")))
                    .collect::<Result<_>>()?;
                let source = LineDigraph::standard(vals.len().saturating_sub(1));
                let tline = LineDigraph::standard(targets[i] as usize);
                subs.push(ShrinkingMap::new(source, tline, vals)?);
                pos += 1;
            }
            Ok(subs)
        };
        let left = parse_subs("left-sub", &cur_lengths)?;
        // the right-hand targets are the next map's axes; peek them after
        // parsing the next grid, so collect raw rows first
        let mut right_rows: Vec<Vec<u32>> = Vec::with_capacity(dim);
        for i in 0..dim {
            let (sln, sline) = ls.get(pos).ok_or_else(|| err(0, "missing subdivision"))?;
            let prefix = format!("right-sub {}:", i + 1);
            let body = sline
                .strip_prefix(&prefix)
                .ok_or_else(|| err(*sln, format!("expected `{prefix}`")))?;
            right_rows.push(
                body.split_whitespace()
                    .map(|t| t.parse().map_err(|_| err(*sln, "bad subdivision value")))
                    .collect::<Result<_>>()?,
            );
            pos += 1;
        }
        expect(&mut pos, "next")?;
        let next = parse_grid_body(&mut pos)?;
        let right: Vec<ShrinkingMap> = right_rows
            .into_iter()
            .zip(next.axis_lengths())
            .map(|(vals, &m)| {
                ShrinkingMap::new(
                    LineDigraph::standard(vals.len().saturating_sub(1)),
                    LineDigraph::standard(m as usize),
                    vals,
                )
            })
            .collect::<Result<_>>()?;
        cur_lengths = next.axis_lengths().to_vec();
        steps.push((
            OneStepWitness {
                left: GridShrinkingMap::new(left)?,
                right: GridShrinkingMap::new(right)?,
                direction,
            },
            next,
        ));
    }
    let cert = HomotopyCertificate { start, steps };
    if cert.end() != &end {
        return Err(Error::CertificateInvalid(
            "stored right endpoint does not match the final step".into(),
        ));
    }
    cert.verify()?;
    Ok(cert)
}

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

pub fn export_dot(g: &Digraph) -> String {
    let mut out = format!("digraph \"{}\" {{\n", g.name());
    for v in 0..g.vertex_count() as u32 {
        out.push_str(&format!("  \"{}\";\n", g.vertex_name(v)));
    }
    for (a, b) in g.arrows() {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\";\n",
            g.vertex_name(a),
            g.vertex_name(b)
        ));
    }
    out.push_str("}\n");
    out
}
