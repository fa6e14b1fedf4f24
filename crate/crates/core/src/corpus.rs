//! Hand-built hosts used by tests, the harness and the CLI: the platonic
//! triangulations, small semi-MPGs, annuli, and exhaustive families of
//! annulus belt triangulations.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::embedding::{canonical_code, ClassifyOptions, PlanarEmbedding, SemiMpg};
use crate::generator::insert_vertex;
use crate::tiling::{EdgeColor, Tiling};

/// Wraps rotations into an MPG, panicking on invalid input; intended for
/// statically known graphs.
pub fn mpg_from_rotations(rot: Vec<Vec<usize>>) -> Arc<SemiMpg> {
    let emb = PlanarEmbedding::from_rotations(rot).expect("valid rotations");
    SemiMpg::mpg(emb).expect("valid MPG")
}

pub fn k4() -> Arc<SemiMpg> {
    mpg_from_rotations(vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]])
}

/// K4 with edge (2,3) removed: a diamond over the middle edge (0,1), seen as
/// a 4-semi-MPG with the quadrilateral as its outer facet.
pub fn k4_minus_edge() -> Arc<SemiMpg> {
    let rot = vec![vec![2, 1, 3], vec![0, 2, 3], vec![1, 0], vec![0, 1]];
    let emb = PlanarEmbedding::from_rotations(rot).unwrap();
    let outer = face_with_len(&emb, 4);
    Arc::new(SemiMpg::classify(emb, BTreeSet::from([outer]), ClassifyOptions::default()).unwrap())
}

/// The same diamond with the quadrilateral and one triangle both marked
/// outer, so the two edges between them are shared by two outer facets.
pub fn shared_edge_diamond() -> Arc<SemiMpg> {
    let rot = vec![vec![2, 1, 3], vec![0, 2, 3], vec![1, 0], vec![0, 1]];
    let emb = PlanarEmbedding::from_rotations(rot).unwrap();
    let quad = face_with_len(&emb, 4);
    let tri = emb
        .faces()
        .iter()
        .position(|f| f.is_triangle_on([0, 1, 2]))
        .unwrap();
    Arc::new(
        SemiMpg::classify(emb, BTreeSet::from([quad, tri]), ClassifyOptions::permissive())
            .unwrap(),
    )
}

pub fn octahedron() -> Arc<SemiMpg> {
    mpg_from_rotations(vec![
        vec![1, 4, 3, 2],
        vec![0, 2, 5, 4],
        vec![0, 3, 5, 1],
        vec![0, 4, 5, 2],
        vec![0, 1, 5, 3],
        vec![1, 2, 3, 4],
    ])
}

pub fn icosahedron() -> Arc<SemiMpg> {
    let up = |j: usize| 1 + (j % 5);
    let low = |j: usize| 6 + (j % 5);
    let mut rot = vec![vec![1, 5, 4, 3, 2]];
    for j in 0..5 {
        // upper ring vertex U_{j+1}
        rot.push(vec![0, up(j + 1), low(j), low(j + 4), up(j + 4)]);
    }
    for j in 0..5 {
        // lower ring vertex L_{j+1}
        rot.push(vec![up(j), up(j + 1), low(j + 1), 11, low(j + 4)]);
    }
    rot.push(vec![6, 7, 8, 9, 10]);
    mpg_from_rotations(rot)
}

/// K4 with a new vertex stacked inside face {1,2,3}: the unique 5-vertex MPG.
pub fn stacked5() -> Arc<SemiMpg> {
    stack_into(&k4(), [1, 2, 3])
}

/// The 6-vertex MPG that is not the octahedron.
pub fn stacked6() -> Arc<SemiMpg> {
    stack_into(&stacked5(), [0, 1, 2])
}

/// Repeated stacking up to `n` vertices, always into the face incident to
/// the most recently added vertex; gives lopsided Apollonian-style MPGs.
pub fn stacked_tower(n: usize) -> Arc<SemiMpg> {
    assert!(n >= 4);
    let mut m = k4();
    while m.vertex_count() < n {
        let last = m.vertex_count() - 1;
        let fid = m
            .inner_faces()
            .iter()
            .copied()
            .find(|&f| m.embedding().faces()[f].vertices.contains(&last))
            .unwrap_or(0);
        m = insert_vertex(&m, fid).unwrap();
    }
    m
}

fn stack_into(m: &Arc<SemiMpg>, tri: [usize; 3]) -> Arc<SemiMpg> {
    let fid = m
        .embedding()
        .faces()
        .iter()
        .position(|f| f.is_triangle_on(tri))
        .expect("face present");
    insert_vertex(m, fid).unwrap()
}

/// Plain 4-cycle, both faces quadrilaterals.
pub fn c4_embedding() -> PlanarEmbedding {
    PlanarEmbedding::from_rotations(vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]]).unwrap()
}

/// The cube graph with its standard embedding (all faces 4-gons).
pub fn cube_embedding() -> PlanarEmbedding {
    PlanarEmbedding::from_rotations(vec![
        vec![1, 4, 3],
        vec![0, 2, 5],
        vec![1, 3, 6],
        vec![2, 0, 7],
        vec![0, 5, 7],
        vec![4, 1, 6],
        vec![5, 2, 7],
        vec![6, 3, 4],
    ])
    .unwrap()
}

/// Wheel on five rim vertices: hub 0, rim 1..=5, the 5-gon as outer facet.
pub fn wheel5() -> Arc<SemiMpg> {
    let nxt = |j: usize| 1 + (j % 5);
    let mut rot = vec![vec![5, 4, 3, 2, 1]];
    for j in 1..=5 {
        rot.push(vec![0, nxt(j), nxt(j + 3)]);
    }
    let emb = PlanarEmbedding::from_rotations(rot).unwrap();
    let outer = face_with_len(&emb, 5);
    Arc::new(SemiMpg::classify(emb, BTreeSet::from([outer]), ClassifyOptions::default()).unwrap())
}

/// The R-tiling on [`wheel5`] whose red subgraph is the rim 5-cycle; its one
/// canal line is a ring of five triangles.
pub fn wheel5_rim_tiling() -> Tiling {
    let m = wheel5();
    let mut colors = vec![EdgeColor::Black; m.edge_count()];
    for j in 1..=5 {
        let e = m.embedding().edge_id(j, 1 + (j % 5)).unwrap();
        colors[e] = EdgeColor::Red;
    }
    Tiling::new(m, colors).unwrap()
}

/// The 5-wheel with one rim edge removed: four triangles inside a hexagonal
/// outer facet, a 6-semi-MPG whose R-tilings use up to four boundary black
/// edges.
pub fn hexagon_semi() -> Arc<SemiMpg> {
    let nxt = |j: usize| 1 + (j % 5);
    let mut rot = vec![vec![5, 4, 3, 2, 1]];
    for j in 1..=5 {
        rot.push(vec![0, nxt(j), nxt(j + 3)]);
    }
    rot[1].retain(|&w| w != 2);
    rot[2].retain(|&w| w != 1);
    let emb = PlanarEmbedding::from_rotations(rot).unwrap();
    let outer = face_with_len(&emb, 6);
    Arc::new(SemiMpg::classify(emb, BTreeSet::from([outer]), ClassifyOptions::default()).unwrap())
}

/// Antiprism belt between two concentric `n`-cycles: an (n,n)-semi-MPG.
/// Inner ring vertices are `0..n`, outer ring `n..2n`; spokes join `a_j-b_j`
/// and `a_{j+1}-b_j`.
pub fn antiprism_annulus(n: usize) -> Arc<SemiMpg> {
    assert!(n >= 4, "antiprism belt needs ring length at least 4");
    let a = |i: usize| i % n;
    let b = |j: usize| n + (j % n);
    let mut rot = Vec::with_capacity(2 * n);
    for i in 0..n {
        rot.push(vec![a(i + 1), a(i + n - 1), b(i + n - 1), b(i)]);
    }
    for j in 0..n {
        rot.push(vec![b(j + 1), a(j + 1), a(j), b(j + n - 1)]);
    }
    let emb = PlanarEmbedding::from_rotations(rot).unwrap();
    let outer: BTreeSet<usize> = emb
        .faces()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.len() == n)
        .map(|(i, _)| i)
        .collect();
    assert_eq!(outer.len(), 2);
    Arc::new(SemiMpg::classify(emb, outer, ClassifyOptions::default()).unwrap())
}

/// The fixed R-tiling on the (5,5) antiprism annulus whose red edges are the
/// five parallel spokes `a_j-b_j`: free of red odd cycles, yet not grand.
pub fn annulus_spoke_tiling() -> Tiling {
    let m = antiprism_annulus(5);
    let mut colors = vec![EdgeColor::Black; m.edge_count()];
    for j in 0..5 {
        let e = m.embedding().edge_id(j, 5 + j).unwrap();
        colors[e] = EdgeColor::Red;
    }
    Tiling::new(m, colors).unwrap()
}

/// All belt triangulations of an annulus between cycles of sizes `n1`
/// (inner, vertices `0..n1`) and `n2` (outer, vertices `n1..n1+n2`) with no
/// interior vertices, deduplicated up to isomorphism.
pub fn annulus_belts(n1: usize, n2: usize) -> Vec<Arc<SemiMpg>> {
    assert!(n1 >= 3 && n2 >= 3);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    // A belt is a cyclic word with n1 'a'-steps and n2 'b'-steps. Words with
    // all 'a's (or all 'b's) consecutive would duplicate a spoke edge and are
    // skipped.
    let total = n1 + n2;
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != n2 {
            continue;
        }
        let word: Vec<bool> = (0..total).map(|i| mask >> i & 1 == 1).collect();
        if has_full_run(&word, false, n1) || has_full_run(&word, true, n2) {
            continue;
        }
        if let Some(m) = belt_from_word(n1, n2, &word) {
            let code = canonical_code(&m);
            if seen.insert(code) {
                out.push(m);
            }
        }
    }
    out
}

fn has_full_run(word: &[bool], kind: bool, len: usize) -> bool {
    let total = word.len();
    let mut run = 0;
    // Doubling handles cyclic runs; a run of `len` anywhere suffices.
    for i in 0..2 * total {
        if word[i % total] == kind {
            run += 1;
            if run >= len {
                return true;
            }
        } else {
            run = 0;
        }
    }
    false
}

/// Builds the annulus whose triangles follow `word` starting from the spoke
/// (a_0, b_0); `false` advances the inner cycle, `true` the outer one.
fn belt_from_word(n1: usize, n2: usize, word: &[bool]) -> Option<Arc<SemiMpg>> {
    let a = |i: usize| i % n1;
    let b = |j: usize| n1 + (j % n2);
    // The cyclic sequence of spokes visited by the triangle strip.
    let total = word.len();
    let mut walk: Vec<(usize, usize)> = Vec::with_capacity(total);
    walk.push((0, 0));
    let (mut i, mut j) = (0usize, 0usize);
    for &step in &word[..total - 1] {
        if step {
            j += 1;
        } else {
            i += 1;
        }
        walk.push((i % n1, j % n2));
    }
    // The spokes incident to one ring vertex form a contiguous cyclic arc of
    // the walk; extract it starting at the arrival spoke.
    let cyclic_fan = |matches: &dyn Fn(&(usize, usize)) -> bool| -> Vec<(usize, usize)> {
        let start = (0..total)
            .find(|&k| matches(&walk[k]) && !matches(&walk[(k + total - 1) % total]))
            .unwrap_or(0);
        let mut fan = Vec::new();
        for off in 0..total {
            let s = &walk[(start + off) % total];
            if matches(s) {
                fan.push(*s);
            } else if !fan.is_empty() {
                break;
            }
        }
        fan
    };

    let mut rot: Vec<Vec<usize>> = Vec::with_capacity(n1 + n2);
    for i in 0..n1 {
        let fan = cyclic_fan(&|s| s.0 == i);
        if fan.is_empty() {
            return None;
        }
        let mut r = vec![a(i + 1), a(i + n1 - 1)];
        r.extend(fan.iter().map(|&(_, jj)| b(jj)));
        rot.push(r);
    }
    for j in 0..n2 {
        let fan = cyclic_fan(&|s| s.1 == j);
        if fan.is_empty() {
            return None;
        }
        let mut r = vec![b(j + 1)];
        r.extend(fan.iter().rev().map(|&(ii, _)| a(ii)));
        r.push(b(j + n2 - 1));
        rot.push(r);
    }
    let emb = PlanarEmbedding::from_rotations(rot).ok()?;
    let outer: BTreeSet<usize> = emb
        .faces()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.len() > 3 || is_ring_face(f, n1, n2))
        .map(|(i, _)| i)
        .collect();
    if outer.len() != 2 {
        return None;
    }
    SemiMpg::classify(emb, outer, ClassifyOptions::permissive())
        .ok()
        .map(Arc::new)
}

/// True for a face that is exactly one of the two boundary cycles (needed
/// when a boundary cycle is a triangle).
fn is_ring_face(f: &crate::embedding::Face, n1: usize, n2: usize) -> bool {
    let inner = f.vertices.iter().all(|&v| v < n1);
    let outer = f.vertices.iter().all(|&v| v >= n1);
    (inner && f.len() == n1) || (outer && f.len() == n2)
}

fn face_with_len(emb: &PlanarEmbedding, len: usize) -> usize {
    emb.faces()
        .iter()
        .position(|f| f.len() == len)
        .expect("face of requested length")
}
