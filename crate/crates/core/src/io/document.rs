use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::ribbon_graph::{HalfEdgeId, Mode, RibbonGraph};

use super::{tokens, IoError, Position};

pub const FORMAT_VERSION: u32 = 1;

/// Reads a graph document:
///
/// ```text
/// version 1
/// mode nc
/// v 0: 0 1 2 3
/// e 0 5
/// x 2: 1
/// ```
///
/// Vertices are ordered by id and half-edge ids are renumbered densely in
/// increasing order, so a document written by [`serialize`] reads back to
/// the same graph.
pub fn parse(text: &str) -> Result<RibbonGraph, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty());
    let last_line = text.lines().count().max(1);

    let (line, toks) = lines
        .next()
        .ok_or_else(|| IoError::syntax(last_line, 1, "empty document, expected 'version 1'"))?;
    match toks.as_slice() {
        [(_, "version"), (col, v)] => {
            if v.parse::<u32>().ok() != Some(FORMAT_VERSION) {
                return Err(IoError::syntax(
                    line,
                    *col,
                    format!("unsupported version {v}"),
                ));
            }
        }
        _ => return Err(IoError::syntax(line, toks[0].0, "expected 'version 1'")),
    }
    let (line, toks) = lines
        .next()
        .ok_or_else(|| IoError::syntax(last_line, 1, "missing 'mode' line"))?;
    let mode = match toks.as_slice() {
        [(_, "mode"), (col, m)] => Mode::from_keyword(m).ok_or_else(|| {
            IoError::syntax(
                line,
                *col,
                format!("unknown mode {m:?}, expected nc or comm"),
            )
        })?,
        _ => {
            return Err(IoError::syntax(
                line,
                toks[0].0,
                "expected 'mode nc' or 'mode comm'",
            ))
        }
    };

    let mut vertices: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut declared: BTreeMap<u32, Position> = BTreeMap::new();
    let mut edges: Vec<(Position, u32, Position, u32)> = Vec::new();
    let mut externals: Vec<(Position, u32, u32)> = Vec::new();
    for (line, toks) in lines {
        let at = |col: usize| Position { line, col };
        match toks[0].1 {
            "v" => {
                let (id_col, id, rest) = labelled_head(line, &toks)?;
                if vertices.contains_key(&id) {
                    return Err(IoError::syntax(
                        line,
                        id_col,
                        format!("vertex {id} declared twice"),
                    ));
                }
                if rest.is_empty() {
                    return Err(IoError::syntax(line, id_col, "vertex has no half-edges"));
                }
                let mut rot = Vec::new();
                for &(col, tok) in rest {
                    let h = number(line, col, tok)?;
                    if declared.insert(h, at(col)).is_some() {
                        return Err(IoError::DuplicateHalfEdge { at: at(col), id: h });
                    }
                    rot.push(h);
                }
                vertices.insert(id, rot);
            }
            "e" => match toks.as_slice() {
                [_, (ca, a), (cb, b)] => {
                    edges.push((
                        at(*ca),
                        number(line, *ca, a)?,
                        at(*cb),
                        number(line, *cb, b)?,
                    ));
                }
                _ => {
                    return Err(IoError::syntax(
                        line,
                        toks[0].0,
                        "expected 'e <half-edge> <half-edge>'",
                    ))
                }
            },
            "x" => {
                let (col, h, rest) = labelled_head(line, &toks)?;
                match rest {
                    [(lc, l)] => externals.push((at(col), h, number(line, *lc, l)?)),
                    _ => {
                        return Err(IoError::syntax(
                            line,
                            toks[0].0,
                            "expected 'x <half-edge>: <label>'",
                        ))
                    }
                }
            }
            "version" | "mode" => {
                return Err(IoError::syntax(line, toks[0].0, "header line repeated"));
            }
            other => {
                return Err(IoError::syntax(
                    line,
                    toks[0].0,
                    format!("unknown line kind {other:?}"),
                ));
            }
        }
    }
    if vertices.is_empty() {
        return Err(IoError::syntax(
            last_line,
            1,
            "document declares no vertices",
        ));
    }

    let dense: BTreeMap<u32, HalfEdgeId> = declared
        .keys()
        .enumerate()
        .map(|(i, &h)| (h, HalfEdgeId(i as u32)))
        .collect();
    let mut used: BTreeMap<u32, Position> = BTreeMap::new();
    let mut resolve = |at: Position, h: u32| -> Result<HalfEdgeId, IoError> {
        let id = *dense
            .get(&h)
            .ok_or(IoError::UnknownHalfEdge { at, id: h })?;
        if used.insert(h, at).is_some() {
            return Err(IoError::DuplicateHalfEdge { at, id: h });
        }
        Ok(id)
    };
    let mut pairs = Vec::new();
    for (pa, a, pb, b) in edges {
        pairs.push((resolve(pa, a)?, resolve(pb, b)?));
    }
    let mut legs = Vec::new();
    for (at, h, label) in externals {
        legs.push((resolve(at, h)?, label));
    }
    let rotations = vertices
        .values()
        .map(|rot| rot.iter().map(|h| dense[h]).collect())
        .collect();
    Ok(RibbonGraph::new(mode, rotations, &pairs, &legs)?)
}

type Tokens<'t> = [(usize, &'t str)];

/// `v <id>: ...` and `x <id>: ...` heads, with the colon attached or not.
fn labelled_head<'t>(
    line: usize,
    toks: &'t Tokens<'t>,
) -> Result<(usize, u32, &'t Tokens<'t>), IoError> {
    let Some(&(col, head)) = toks.get(1) else {
        return Err(IoError::syntax(line, toks[0].0, "missing id"));
    };
    match head.strip_suffix(':') {
        Some(id) => Ok((col, number(line, col, id)?, &toks[2..])),
        None => match toks.get(2) {
            Some(&(_, ":")) => Ok((col, number(line, col, head)?, &toks[3..])),
            _ => Err(IoError::syntax(line, col, "expected ':' after id")),
        },
    }
}

fn number(line: usize, col: usize, tok: &str) -> Result<u32, IoError> {
    tok.parse().map_err(|_| {
        IoError::syntax(
            line,
            col,
            format!("expected a non-negative integer, found {tok:?}"),
        )
    })
}

pub fn serialize(graph: &RibbonGraph) -> String {
    let mut out = String::new();
    writeln!(out, "version {FORMAT_VERSION}").unwrap();
    writeln!(out, "mode {}", graph.mode().keyword()).unwrap();
    for (v, rot) in graph.rotations().iter().enumerate() {
        write!(out, "v {v}:").unwrap();
        for h in rot {
            write!(out, " {}", h.0).unwrap();
        }
        out.push('\n');
    }
    for (a, b) in graph.edges() {
        writeln!(out, "e {} {}", a.0, b.0).unwrap();
    }
    for (h, l) in graph.externals() {
        writeln!(out, "x {}: {l}", h.0).unwrap();
    }
    out
}

/// The document of the canonical representative; isomorphic graphs give
/// identical text.
pub fn serialize_canonical(graph: &RibbonGraph) -> String {
    serialize(&graph.canonical_graph())
}
