//! Exhaustive, isomorphism-free enumeration of small MPGs.
//!
//! Growth is by stacking a degree-3 vertex into a face; completeness within
//! each vertex count comes from closing under diagonal flips, since the flip
//! graph of sphere triangulations on a fixed vertex set is connected.
//! Stacking alone would miss non-Apollonian triangulations such as the
//! octahedron.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::embedding::{
    canonical_code, insert_after, ClassifyOptions, PlanarEmbedding, SemiMpg,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("edge ({0},{1}) is not flippable: the opposite diagonal already exists")]
    NotFlippable(usize, usize),
    #[error("edge ({0},{1}) lies on an outer facet")]
    BoundaryEdge(usize, usize),
    #[error("face {0} is not an inner triangle")]
    NotAnInnerTriangle(usize),
    #[error("class count exceeded the configured cap of {0}")]
    ResourceLimit(usize),
    #[error("host is not an MPG")]
    NotAnMpg,
}

/// All isomorphism classes of MPGs for each vertex count up to the bound.
#[derive(Clone, Debug)]
pub struct GenerationRun {
    pub max_vertices: usize,
    pub classes_per_n: BTreeMap<usize, Vec<Arc<SemiMpg>>>,
}

impl GenerationRun {
    pub fn class_counts(&self) -> BTreeMap<usize, usize> {
        self.classes_per_n
            .iter()
            .map(|(&n, v)| (n, v.len()))
            .collect()
    }
}

/// Replaces edge `e` by the opposite diagonal of its diamond.
pub fn flip_edge(m: &SemiMpg, e: usize) -> Result<Arc<SemiMpg>, GeneratorError> {
    let emb = m.embedding();
    let (u, v) = emb.edge_endpoints(e);
    let [fa, fb] = emb.faces_of_edge(e);
    if m.is_outer(fa) || m.is_outer(fb) {
        return Err(GeneratorError::BoundaryEdge(u, v));
    }
    // The face traced through the arc u->v, and the one through v->u.
    let (f_uv, f_vu) = if face_has_arc(emb, fa, u, v) { (fa, fb) } else { (fb, fa) };
    let x = third_vertex(emb, f_uv, u, v);
    let y = third_vertex(emb, f_vu, u, v);
    if x == y || emb.are_adjacent(x, y) {
        return Err(GeneratorError::NotFlippable(u, v));
    }
    let mut rot: Vec<Vec<usize>> = emb.rotations().to_vec();
    rot[u].retain(|&w| w != v);
    rot[v].retain(|&w| w != u);
    insert_after(&mut rot[x], v, y);
    insert_after(&mut rot[y], u, x);
    let emb = PlanarEmbedding::from_rotations(rot).expect("flip preserves the embedding");
    Ok(Arc::new(
        SemiMpg::classify(emb, m.outer_facets().clone(), m.options())
            .expect("flip preserves the MPG structure"),
    ))
}

/// Stacks a new degree-3 vertex into the triangular face `f`.
pub fn insert_vertex(m: &SemiMpg, f: usize) -> Result<Arc<SemiMpg>, GeneratorError> {
    let emb = m.embedding();
    if f >= emb.face_count() || emb.faces()[f].len() != 3 || m.is_outer(f) {
        return Err(GeneratorError::NotAnInnerTriangle(f));
    }
    let vs = &emb.faces()[f].vertices;
    let (a, b, c) = (vs[0], vs[1], vs[2]);
    let w = emb.vertex_count();
    let mut rot: Vec<Vec<usize>> = emb.rotations().to_vec();
    insert_after(&mut rot[b], a, w);
    insert_after(&mut rot[c], b, w);
    insert_after(&mut rot[a], c, w);
    rot.push(vec![b, a, c]);
    let emb = PlanarEmbedding::from_rotations(rot).expect("stacking preserves the embedding");
    // Face ids shift, but outer facets keep their vertex sets; stacking is
    // only offered on MPGs and MPG-like hosts re-derive cleanly.
    if !m.is_mpg() {
        return Err(GeneratorError::NotAnMpg);
    }
    Ok(Arc::new(
        SemiMpg::classify(emb, BTreeSet::new(), ClassifyOptions::default())
            .expect("stacking preserves the MPG structure"),
    ))
}

fn face_has_arc(emb: &PlanarEmbedding, f: usize, u: usize, v: usize) -> bool {
    let vs = &emb.faces()[f].vertices;
    let k = vs.len();
    (0..k).any(|i| vs[i] == u && vs[(i + 1) % k] == v)
}

fn third_vertex(emb: &PlanarEmbedding, f: usize, u: usize, v: usize) -> usize {
    emb.faces()[f]
        .vertices
        .iter()
        .copied()
        .find(|&w| w != u && w != v)
        .expect("triangle has a third vertex")
}

/// Enumerates every isomorphism class of simple MPGs on 4..=n_max vertices.
/// `class_cap`, when set, aborts once any size accumulates more classes.
pub fn enumerate_mpgs(
    n_max: usize,
    class_cap: Option<usize>,
) -> Result<GenerationRun, GeneratorError> {
    assert!(n_max >= 4, "MPGs start at 4 vertices");
    let mut classes_per_n: BTreeMap<usize, Vec<Arc<SemiMpg>>> = BTreeMap::new();
    classes_per_n.insert(4, vec![crate::corpus::k4()]);
    for n in 5..=n_max {
        let mut seen: BTreeMap<Vec<u8>, Arc<SemiMpg>> = BTreeMap::new();
        let mut queue: VecDeque<Arc<SemiMpg>> = VecDeque::new();
        for parent in &classes_per_n[&(n - 1)] {
            for f in 0..parent.embedding().face_count() {
                let child = insert_vertex(parent, f)?;
                let code = canonical_code(&child);
                if let std::collections::btree_map::Entry::Vacant(slot) = seen.entry(code) {
                    slot.insert(child.clone());
                    queue.push_back(child);
                }
            }
        }
        while let Some(g) = queue.pop_front() {
            for e in 0..g.edge_count() {
                let flipped = match flip_edge(&g, e) {
                    Ok(h) => h,
                    Err(GeneratorError::NotFlippable(..)) => continue,
                    Err(other) => return Err(other),
                };
                let code = canonical_code(&flipped);
                if !seen.contains_key(&code) {
                    if let Some(cap) = class_cap {
                        if seen.len() >= cap {
                            return Err(GeneratorError::ResourceLimit(cap));
                        }
                    }
                    seen.insert(code, flipped.clone());
                    queue.push_back(flipped);
                }
            }
        }
        classes_per_n.insert(n, seen.into_values().collect());
    }
    Ok(GenerationRun {
        max_vertices: n_max,
        classes_per_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn k4_is_never_flippable() {
        let m = corpus::k4();
        for e in 0..6 {
            assert!(matches!(
                flip_edge(&m, e).unwrap_err(),
                GeneratorError::NotFlippable(..)
            ));
        }
    }

    #[test]
    fn octahedron_flip_reaches_stacked_class() {
        let m = corpus::octahedron();
        let stacked = canonical_code(&corpus::stacked6());
        for e in 0..m.edge_count() {
            let flipped = flip_edge(&m, e).unwrap();
            assert_eq!(canonical_code(&flipped), stacked);
        }
    }

    #[test]
    fn flip_is_an_involution() {
        let m = corpus::octahedron();
        let before = canonical_code(&m);
        let flipped = flip_edge(&m, 0).unwrap();
        // The new diagonal is the edge of `flipped` absent from `m`.
        let new_edge = (0..flipped.edge_count())
            .find(|&e| {
                let (a, b) = flipped.embedding().edge_endpoints(e);
                !m.embedding().are_adjacent(a, b)
            })
            .unwrap();
        let back = flip_edge(&flipped, new_edge).unwrap();
        assert_eq!(canonical_code(&back), before);
    }

    #[test]
    fn stacking_counts() {
        let m = corpus::k4();
        let bigger = insert_vertex(&m, 0).unwrap();
        assert_eq!(bigger.vertex_count(), 5);
        assert_eq!(bigger.edge_count(), 9);
        assert_eq!(bigger.embedding().face_count(), 6);
        // Single class at n = 5.
        assert_eq!(
            canonical_code(&bigger),
            canonical_code(&corpus::stacked5())
        );
    }

    #[test]
    fn double_stack_creates_nontrivial_triangle() {
        let m = corpus::k4();
        let once = insert_vertex(&m, 0).unwrap();
        // Stack again into a face of the subdivided region.
        let tri = once.embedding().faces()[once.embedding().face_count() - 1]
            .vertices
            .clone();
        let fid = once
            .embedding()
            .faces()
            .iter()
            .position(|f| f.vertices == tri)
            .unwrap();
        let twice = insert_vertex(&once, fid).unwrap();
        assert!(!twice.nontrivial_triangles().is_empty());
    }

    #[test]
    fn enumerate_small_counts() {
        let run = enumerate_mpgs(7, None).unwrap();
        let counts = run.class_counts();
        assert_eq!(counts[&4], 1);
        assert_eq!(counts[&5], 1);
        assert_eq!(counts[&6], 2);
        assert_eq!(counts[&7], 5);
        for (n, classes) in &run.classes_per_n {
            for m in classes {
                assert!(m.is_mpg());
                assert_eq!(m.edge_count(), 3 * n - 6);
                assert!((0..*n).all(|v| m.embedding().degree(v) >= 3));
            }
        }
    }

    #[test]
    fn flip_closure_from_single_seed_reaches_all_classes() {
        // Closing a single n=7 class under flips reaches all five classes.
        let run = enumerate_mpgs(7, None).unwrap();
        let all: BTreeSet<Vec<u8>> = run.classes_per_n[&7]
            .iter()
            .map(|m| canonical_code(m))
            .collect();
        let seed = run.classes_per_n[&7][0].clone();
        let mut seen = BTreeSet::from([canonical_code(&seed)]);
        let mut queue = VecDeque::from([seed]);
        while let Some(g) = queue.pop_front() {
            for e in 0..g.edge_count() {
                if let Ok(h) = flip_edge(&g, e) {
                    if seen.insert(canonical_code(&h)) {
                        queue.push_back(h);
                    }
                }
            }
        }
        assert_eq!(seen, all);
    }

    #[test]
    fn resource_limit_fires() {
        assert_eq!(
            enumerate_mpgs(7, Some(3)).unwrap_err(),
            GeneratorError::ResourceLimit(3)
        );
    }
}
