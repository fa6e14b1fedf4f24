//! File formats: the native JSON rotation format, the plantri `planar_code`
//! binary, tiling and coloring JSON, and DOT export.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::VertexColoring;
use crate::embedding::{ClassifyOptions, PlanarEmbedding, SemiMpg};
use crate::tiling::{EdgeColor, Tiling};

pub const PLANAR_CODE_HEADER: &[u8] = b">>planar_code<<";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("embedding: {0}")]
    Embedding(#[from] crate::embedding::EmbeddingError),
    #[error("classify: {0}")]
    Classify(#[from] crate::embedding::ClassifyError),
    #[error("tiling: {0}")]
    Tiling(#[from] crate::tiling::TilingError),
    #[error("outer facet {0:?} does not match any face of the embedding")]
    OuterFaceNotFound(Vec<usize>),
    #[error("planar_code: {0}")]
    PlanarCode(String),
    #[error("edge ({0},{1}) not present in the host")]
    UnknownEdge(usize, usize),
    #[error("unknown edge color letter {0:?}")]
    UnknownColor(String),
}

/// `{"n": .., "rot": [[..]], "outer": [[face as vertex cycle], ..]}`
#[derive(Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub rot: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outer: Vec<Vec<usize>>,
}

pub fn graph_from_json(text: &str) -> Result<Arc<SemiMpg>, IoError> {
    let g: GraphJson = serde_json::from_str(text)?;
    let emb = PlanarEmbedding::from_rotations(g.rot)?;
    let mut outer = BTreeSet::new();
    for cyc in &g.outer {
        let fid = find_face(&emb, cyc, &outer)
            .ok_or_else(|| IoError::OuterFaceNotFound(cyc.clone()))?;
        outer.insert(fid);
    }
    Ok(Arc::new(SemiMpg::classify(
        emb,
        outer,
        ClassifyOptions::permissive(),
    )?))
}

/// Matches a vertex cycle against the embedding's faces: first as a directed
/// cycle up to rotation, then reversed; already-claimed faces are skipped.
fn find_face(emb: &PlanarEmbedding, cycle: &[usize], taken: &BTreeSet<usize>) -> Option<usize> {
    let matches_directed = |face: &[usize], cyc: &[usize]| -> bool {
        if face.len() != cyc.len() {
            return false;
        }
        let k = face.len();
        (0..k).any(|s| (0..k).all(|i| face[(s + i) % k] == cyc[i]))
    };
    let reversed: Vec<usize> = cycle.iter().rev().copied().collect();
    for pass in 0..2 {
        for (fid, face) in emb.faces().iter().enumerate() {
            if taken.contains(&fid) {
                continue;
            }
            let cyc = if pass == 0 { cycle } else { &reversed[..] };
            if matches_directed(&face.vertices, cyc) {
                return Some(fid);
            }
        }
    }
    None
}

pub fn graph_to_json(m: &SemiMpg) -> String {
    let g = GraphJson {
        n: m.vertex_count(),
        rot: m.embedding().rotations().to_vec(),
        outer: m
            .outer_facets()
            .iter()
            .map(|&fid| m.embedding().faces()[fid].vertices.clone())
            .collect(),
    };
    serde_json::to_string_pretty(&g).expect("graph serializes")
}

/// `{"edges": [[u, v, "R"|"G"|"B"|"K"], ...]}`
#[derive(Debug, Serialize, Deserialize)]
pub struct TilingJson {
    pub edges: Vec<(usize, usize, String)>,
}

pub fn tiling_from_json(host: &Arc<SemiMpg>, text: &str) -> Result<Tiling, IoError> {
    let tj: TilingJson = serde_json::from_str(text)?;
    let mut colors = vec![EdgeColor::Black; host.edge_count()];
    for (u, v, letter) in &tj.edges {
        let e = host
            .embedding()
            .edge_id(*u, *v)
            .ok_or(IoError::UnknownEdge(*u, *v))?;
        let c = letter
            .chars()
            .next()
            .and_then(EdgeColor::from_letter)
            .ok_or_else(|| IoError::UnknownColor(letter.clone()))?;
        colors[e] = c;
    }
    Ok(Tiling::new(host.clone(), colors)?)
}

pub fn tiling_to_json(t: &Tiling) -> String {
    let emb = t.host().embedding();
    let edges = (0..emb.edge_count())
        .map(|e| {
            let (u, v) = emb.edge_endpoints(e);
            (u, v, t.color(e).letter().to_string())
        })
        .collect();
    serde_json::to_string_pretty(&TilingJson { edges }).expect("tiling serializes")
}

/// `{"colors": [c1, c2, ...]}` indexed by vertex id.
#[derive(Debug, Serialize, Deserialize)]
pub struct ColoringJson {
    pub colors: Vec<u8>,
}

pub fn coloring_from_json(text: &str) -> Result<VertexColoring, IoError> {
    let cj: ColoringJson = serde_json::from_str(text)?;
    Ok(VertexColoring::new(cj.colors))
}

pub fn coloring_to_json(f: &VertexColoring) -> String {
    serde_json::to_string_pretty(&ColoringJson {
        colors: f.colors().to_vec(),
    })
    .expect("coloring serializes")
}

/// Reads every graph of a plantri `planar_code` stream (header optional per
/// plantri's own tooling, but written by ours).
pub fn read_planar_code(bytes: &[u8]) -> Result<Vec<PlanarEmbedding>, IoError> {
    let mut rest = bytes;
    if rest.starts_with(PLANAR_CODE_HEADER) {
        rest = &rest[PLANAR_CODE_HEADER.len()..];
    }
    let mut out = Vec::new();
    let mut pos = 0usize;
    while pos < rest.len() {
        let n = rest[pos] as usize;
        pos += 1;
        if n == 0 {
            return Err(IoError::PlanarCode(
                "graphs with 256+ vertices are not supported".into(),
            ));
        }
        let mut rot = Vec::with_capacity(n);
        for _ in 0..n {
            let mut nbrs = Vec::new();
            loop {
                let b = *rest
                    .get(pos)
                    .ok_or_else(|| IoError::PlanarCode("truncated neighbor list".into()))?;
                pos += 1;
                if b == 0 {
                    break;
                }
                nbrs.push(b as usize - 1);
            }
            rot.push(nbrs);
        }
        out.push(PlanarEmbedding::from_rotations(rot)?);
    }
    Ok(out)
}

pub fn write_planar_code(graphs: &[&PlanarEmbedding]) -> Result<Vec<u8>, IoError> {
    let mut out = Vec::from(PLANAR_CODE_HEADER);
    for g in graphs {
        let n = g.vertex_count();
        if n == 0 || n > 255 {
            return Err(IoError::PlanarCode(format!(
                "vertex count {n} outside 1..=255"
            )));
        }
        out.push(n as u8);
        for v in 0..n {
            for &w in g.neighbors(v) {
                out.push(w as u8 + 1);
            }
            out.push(0);
        }
    }
    Ok(out)
}

/// DOT export with one comment line per face; a tiling supplies edge colors
/// and a vertex coloring supplies labels plus thick strokes on edges
/// incident to color 1.
pub fn to_dot(m: &SemiMpg, tiling: Option<&Tiling>, coloring: Option<&VertexColoring>) -> String {
    let emb = m.embedding();
    let mut s = String::from("graph host {\n");
    for (fid, face) in emb.faces().iter().enumerate() {
        let kind = if m.is_outer(fid) { "outer" } else { "face" };
        let _ = writeln!(
            s,
            "  // {kind} {fid}: {}",
            face.vertices
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    for v in 0..emb.vertex_count() {
        match coloring {
            Some(f) => {
                let _ = writeln!(s, "  {v} [label=\"{v}:{}\"];", f.color(v));
            }
            None => {
                let _ = writeln!(s, "  {v};");
            }
        }
    }
    for e in 0..emb.edge_count() {
        let (u, v) = emb.edge_endpoints(e);
        let mut attrs = Vec::new();
        if let Some(t) = tiling {
            let color = match t.color(e) {
                EdgeColor::Red => "red",
                EdgeColor::Green => "green",
                EdgeColor::Blue => "blue",
                EdgeColor::Black => "black",
            };
            attrs.push(format!("color={color}"));
        }
        if let Some(f) = coloring {
            if f.color(u) == 1 || f.color(v) == 1 {
                attrs.push("penwidth=2".into());
            }
        }
        if attrs.is_empty() {
            let _ = writeln!(s, "  {u} -- {v};");
        } else {
            let _ = writeln!(s, "  {u} -- {v} [{}];", attrs.join(", "));
        }
    }
    s.push_str("}\n");
    s
}
