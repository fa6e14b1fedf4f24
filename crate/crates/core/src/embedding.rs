//! Rotation-system embeddings of planar graphs on the sphere.
//!
//! A [`PlanarEmbedding`] stores, for every vertex, the cyclic order of its
//! neighbors. Everything else (edges, faces, face adjacency) is derived from
//! the rotations, which are the single source of truth. A [`SemiMpg`] wraps an
//! embedding together with a set of designated outer facets; an MPG is the
//! special case with no outer facets.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("rotation inconsistent: pair ({0},{1}) present at one endpoint only")]
    InconsistentRotation(usize, usize),
    #[error("not a sphere embedding: V-E+F = {0}, expected 2")]
    NotPlanarEmbedding(i64),
    #[error("vertex id {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("face {0} is an inner face of length {1}, expected a triangle")]
    NonTriangleInnerFace(usize, usize),
    #[error("outer face {0} has length {1} < 4 and 3-gon outer facets are not allowed")]
    ForbiddenSmallOuterFace(usize, usize),
    #[error("edge ({0},{1}) lies on two outer facets, which is not allowed")]
    ForbiddenSharedOuterEdge(usize, usize),
    #[error("face id {0} out of range (f = {1})")]
    FaceOutOfRange(usize, usize),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CutError {
    #[error("vertex sequence is not a cycle of the host: {0}")]
    NotACycle(String),
    #[error("cycle uses edge ({0},{1}) which is shared by two outer facets")]
    CycleUsesSharedOuterEdge(usize, usize),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TriangulateError {
    #[error("cannot triangulate simply: {0}")]
    CannotTriangulateSimply(String),
}

/// A face of the embedding: a closed walk of vertices and the edges between
/// consecutive ones. `edges[i]` joins `vertices[i]` and `vertices[i+1 mod len]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True when the face is bounded by exactly the three given vertices.
    pub fn is_triangle_on(&self, mut tri: [usize; 3]) -> bool {
        if self.vertices.len() != 3 {
            return false;
        }
        let mut own = [self.vertices[0], self.vertices[1], self.vertices[2]];
        own.sort_unstable();
        tri.sort_unstable();
        own == tri
    }
}

/// A connected simple graph embedded on the sphere, given by the cyclic
/// neighbor order at every vertex. Faces are derived by walking
/// next-arc-after-twin orbits and cached at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarEmbedding {
    rot: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    faces: Vec<Face>,
    /// Face ids on the two sides of each edge (equal only for a bridge, which
    /// cannot happen on validated sphere embeddings of simple 2-connected
    /// graphs but is representable).
    edge_faces: Vec<[usize; 2]>,
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl PlanarEmbedding {
    /// Builds and validates an embedding from per-vertex rotations.
    pub fn from_rotations(rot: Vec<Vec<usize>>) -> Result<Self, EmbeddingError> {
        let n = rot.len();
        for (u, nbrs) in rot.iter().enumerate() {
            let mut seen = HashSet::new();
            for &v in nbrs {
                if v >= n {
                    return Err(EmbeddingError::VertexOutOfRange(v, n));
                }
                if v == u {
                    return Err(EmbeddingError::NotSimple(format!("self-loop at {u}")));
                }
                if !seen.insert(v) {
                    return Err(EmbeddingError::NotSimple(format!(
                        "neighbor {v} repeated in rotation of {u}"
                    )));
                }
            }
        }
        // Every unordered pair must appear in exactly two rotations.
        for (u, nbrs) in rot.iter().enumerate() {
            for &v in nbrs {
                if !rot[v].contains(&u) {
                    return Err(EmbeddingError::InconsistentRotation(u, v));
                }
            }
        }
        // Connectivity.
        if n == 0 {
            return Err(EmbeddingError::NotConnected);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &rot[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        if reached != n {
            return Err(EmbeddingError::NotConnected);
        }

        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (u, nbrs) in rot.iter().enumerate() {
            for &v in nbrs {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        edges.sort_unstable();
        let edge_index: HashMap<(usize, usize), usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();

        let (faces, edge_faces) = trace_faces(&rot, &edges, &edge_index);

        let euler = n as i64 - edges.len() as i64 + faces.len() as i64;
        if euler != 2 {
            return Err(EmbeddingError::NotPlanarEmbedding(euler));
        }

        Ok(PlanarEmbedding {
            rot,
            edges,
            edge_index,
            faces,
            edge_faces,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rot
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&norm(u, v)).copied()
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// The (at most two) face ids incident to edge `e`.
    pub fn faces_of_edge(&self, e: usize) -> [usize; 2] {
        self.edge_faces[e]
    }

    /// Given edge `e` and one incident face, the face on the other side.
    pub fn opposite_face(&self, e: usize, face: usize) -> usize {
        let [a, b] = self.edge_faces[e];
        if a == face {
            b
        } else {
            a
        }
    }
}

/// Walks all directed arcs into face orbits using the rule
/// `next(u -> v) = (v -> w)` where `w` follows `u` in the rotation at `v`.
fn trace_faces(
    rot: &[Vec<usize>],
    edges: &[(usize, usize)],
    edge_index: &HashMap<(usize, usize), usize>,
) -> (Vec<Face>, Vec<[usize; 2]>) {
    let n = rot.len();
    let mut arc_offset = vec![0usize; n + 1];
    for u in 0..n {
        arc_offset[u + 1] = arc_offset[u] + rot[u].len();
    }
    let total_arcs = arc_offset[n];
    // Position of u inside rot[v], for every arc (u -> v).
    let mut twin_pos = vec![usize::MAX; total_arcs];
    let mut pos_of: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
    for (u, nbrs) in rot.iter().enumerate() {
        for (i, &v) in nbrs.iter().enumerate() {
            pos_of[u].insert(v, i);
        }
    }
    for u in 0..n {
        for (i, &v) in rot[u].iter().enumerate() {
            twin_pos[arc_offset[u] + i] = pos_of[v][&u];
        }
    }

    let mut face_of_arc = vec![usize::MAX; total_arcs];
    let mut faces = Vec::new();
    for u in 0..n {
        for i in 0..rot[u].len() {
            let start = arc_offset[u] + i;
            if face_of_arc[start] != usize::MAX {
                continue;
            }
            let fid = faces.len();
            let mut vertices = Vec::new();
            let mut face_edges = Vec::new();
            let (mut cu, mut ci) = (u, i);
            loop {
                let aid = arc_offset[cu] + ci;
                if face_of_arc[aid] != usize::MAX {
                    break;
                }
                face_of_arc[aid] = fid;
                let cv = rot[cu][ci];
                vertices.push(cu);
                face_edges.push(edge_index[&norm(cu, cv)]);
                let j = (twin_pos[aid] + 1) % rot[cv].len();
                cu = cv;
                ci = j;
            }
            faces.push(Face {
                vertices,
                edges: face_edges,
            });
        }
    }

    let mut edge_faces = vec![[usize::MAX; 2]; edges.len()];
    for (fid, face) in faces.iter().enumerate() {
        for &e in &face.edges {
            if edge_faces[e][0] == usize::MAX {
                edge_faces[e][0] = fid;
            } else {
                edge_faces[e][1] = fid;
            }
        }
    }
    (faces, edge_faces)
}

/// Validation switches for [`SemiMpg::classify`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Permit outer facets of length 3.
    pub allow_3gon_outer: bool,
    /// Permit an edge to lie on two outer facets.
    pub allow_shared_outer_edges: bool,
}

impl ClassifyOptions {
    pub fn permissive() -> Self {
        ClassifyOptions {
            allow_3gon_outer: true,
            allow_shared_outer_edges: true,
        }
    }
}

/// An embedding together with designated outer facets. All remaining faces
/// must be triangles. `outer_facets` empty means MPG; a single outer facet
/// means an n-semi-MPG; both are One Piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiMpg {
    embedding: PlanarEmbedding,
    outer_facets: BTreeSet<usize>,
    options: ClassifyOptions,
    inner_faces: Vec<usize>,
    /// Edges lying on two outer facets. Their colors are unconstrained by any
    /// tiling because they border no inner triangle.
    exempt_edges: Vec<usize>,
}

impl SemiMpg {
    /// Checks the semi-MPG structure of `embedding` with the given outer
    /// facets and wraps it.
    pub fn classify(
        embedding: PlanarEmbedding,
        outer_facets: BTreeSet<usize>,
        options: ClassifyOptions,
    ) -> Result<Self, ClassifyError> {
        let f = embedding.face_count();
        for &of in &outer_facets {
            if of >= f {
                return Err(ClassifyError::FaceOutOfRange(of, f));
            }
        }
        let mut inner_faces = Vec::new();
        for (fid, face) in embedding.faces().iter().enumerate() {
            if outer_facets.contains(&fid) {
                if !options.allow_3gon_outer && face.len() < 4 {
                    return Err(ClassifyError::ForbiddenSmallOuterFace(fid, face.len()));
                }
            } else {
                if face.len() != 3 {
                    return Err(ClassifyError::NonTriangleInnerFace(fid, face.len()));
                }
                inner_faces.push(fid);
            }
        }
        let mut exempt_edges = Vec::new();
        for e in 0..embedding.edge_count() {
            let [f0, f1] = embedding.faces_of_edge(e);
            if outer_facets.contains(&f0) && outer_facets.contains(&f1) {
                if !options.allow_shared_outer_edges {
                    let (u, v) = embedding.edge_endpoints(e);
                    return Err(ClassifyError::ForbiddenSharedOuterEdge(u, v));
                }
                exempt_edges.push(e);
            }
        }
        Ok(SemiMpg {
            embedding,
            outer_facets,
            options,
            inner_faces,
            exempt_edges,
        })
    }

    /// Convenience: classify with no outer facets (an MPG).
    pub fn mpg(embedding: PlanarEmbedding) -> Result<Arc<Self>, ClassifyError> {
        Ok(Arc::new(Self::classify(
            embedding,
            BTreeSet::new(),
            ClassifyOptions::default(),
        )?))
    }

    pub fn embedding(&self) -> &PlanarEmbedding {
        &self.embedding
    }

    pub fn options(&self) -> ClassifyOptions {
        self.options
    }

    pub fn vertex_count(&self) -> usize {
        self.embedding.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.embedding.edge_count()
    }

    pub fn outer_facets(&self) -> &BTreeSet<usize> {
        &self.outer_facets
    }

    pub fn is_outer(&self, face: usize) -> bool {
        self.outer_facets.contains(&face)
    }

    pub fn is_mpg(&self) -> bool {
        self.outer_facets.is_empty()
    }

    /// MPGs and n-semi-MPGs are One Piece: a solid planar piece with no hole.
    pub fn one_piece(&self) -> bool {
        self.outer_facets.len() <= 1
    }

    /// Ids of the faces that must behave as triangles under tilings.
    pub fn inner_faces(&self) -> &[usize] {
        &self.inner_faces
    }

    pub fn exempt_edges(&self) -> &[usize] {
        &self.exempt_edges
    }

    pub fn is_exempt(&self, e: usize) -> bool {
        self.exempt_edges.binary_search(&e).is_ok()
    }

    /// Number of inner triangles incident to edge `e` (0, 1 or 2).
    pub fn inner_triangles_of_edge(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        self.embedding
            .faces_of_edge(e)
            .into_iter()
            .filter(|fid| !self.is_outer(*fid))
    }

    /// The edge multiset along all outer facets; an edge shared by two outer
    /// facets appears twice.
    pub fn outer_boundary_edges(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for &fid in &self.outer_facets {
            out.extend_from_slice(&self.embedding.faces()[fid].edges);
        }
        out.sort_unstable();
        out
    }

    /// All 3-cycles of the graph that do not bound a face. On an MPG a
    /// nonempty answer exhibits a separating triangle.
    pub fn nontrivial_triangles(&self) -> Vec<[usize; 3]> {
        let emb = &self.embedding;
        let facial: HashSet<[usize; 3]> = emb
            .faces()
            .iter()
            .filter(|f| f.len() == 3)
            .map(|f| {
                let mut t = [f.vertices[0], f.vertices[1], f.vertices[2]];
                t.sort_unstable();
                t
            })
            .collect();
        let mut out = Vec::new();
        for (u, v) in emb.edges().iter().copied() {
            for w in v + 1..emb.vertex_count() {
                if emb.are_adjacent(u, w) && emb.are_adjacent(v, w) {
                    let tri = [u, v, w];
                    if !facial.contains(&tri) {
                        out.push(tri);
                    }
                }
            }
        }
        out
    }

    /// Cuts the host along a (simple) cycle. Both returned pieces contain the
    /// cycle edges; the cycle becomes a new outer facet of each piece, and
    /// every original face lands in exactly one piece. Vertices are relabeled
    /// per piece; the maps from piece ids back to host ids are returned.
    pub fn cut_along_cycle(&self, cycle: &[usize]) -> Result<(CutPiece, CutPiece), CutError> {
        let emb = &self.embedding;
        let k = cycle.len();
        if k < 3 {
            return Err(CutError::NotACycle("fewer than 3 vertices".into()));
        }
        let distinct: HashSet<usize> = cycle.iter().copied().collect();
        if distinct.len() != k {
            return Err(CutError::NotACycle("repeated vertex".into()));
        }
        let mut cycle_edges = HashSet::new();
        for i in 0..k {
            let (u, v) = (cycle[i], cycle[(i + 1) % k]);
            let e = emb
                .edge_id(u, v)
                .ok_or_else(|| CutError::NotACycle(format!("({u},{v}) is not an edge")))?;
            if self.is_exempt(e) {
                return Err(CutError::CycleUsesSharedOuterEdge(u, v));
            }
            cycle_edges.insert(e);
        }

        // Flood-fill faces across non-cycle edges; the cycle separates the
        // sphere into exactly two sides.
        let f = emb.face_count();
        let mut side = vec![u8::MAX; f];
        let first = emb.edge_id(cycle[0], cycle[1]).unwrap();
        let [fa, fb] = emb.faces_of_edge(first);
        for (seed, mark) in [(fa, 0u8), (fb, 1u8)] {
            if side[seed] != u8::MAX {
                continue;
            }
            let mut queue = VecDeque::from([seed]);
            side[seed] = mark;
            while let Some(fid) = queue.pop_front() {
                for &e in &emb.faces()[fid].edges {
                    if cycle_edges.contains(&e) {
                        continue;
                    }
                    let g = emb.opposite_face(e, fid);
                    if side[g] == u8::MAX {
                        side[g] = mark;
                        queue.push_back(g);
                    }
                }
            }
        }
        if side.contains(&u8::MAX) || side[fa] == side[fb] {
            return Err(CutError::NotACycle("cycle does not separate the faces".into()));
        }

        let piece = |mark: u8| -> CutPiece {
            self.extract_side(cycle, &cycle_edges, &side, mark)
        };
        Ok((piece(0), piece(1)))
    }

    fn extract_side(
        &self,
        cycle: &[usize],
        cycle_edges: &HashSet<usize>,
        side: &[u8],
        mark: u8,
    ) -> CutPiece {
        let emb = &self.embedding;
        let keep_edge = |e: usize| -> bool {
            if cycle_edges.contains(&e) {
                return true;
            }
            let [f0, f1] = emb.faces_of_edge(e);
            side[f0] == mark && side[f1] == mark
        };
        // Vertices incident to a kept edge, relabeled in ascending host order.
        let mut verts = BTreeSet::new();
        for e in 0..emb.edge_count() {
            if keep_edge(e) {
                let (u, v) = emb.edge_endpoints(e);
                verts.insert(u);
                verts.insert(v);
            }
        }
        let to_host: Vec<usize> = verts.iter().copied().collect();
        let to_piece: HashMap<usize, usize> =
            to_host.iter().enumerate().map(|(i, &h)| (h, i)).collect();
        let mut rot = Vec::with_capacity(to_host.len());
        for &h in &to_host {
            let kept: Vec<usize> = emb.rotations()[h]
                .iter()
                .copied()
                .filter(|&w| keep_edge(emb.edge_id(h, w).unwrap()))
                .map(|w| to_piece[&w])
                .collect();
            rot.push(kept);
        }
        let piece_emb = PlanarEmbedding::from_rotations(rot)
            .expect("side of a cut cycle is a valid sphere embedding");

        // Outer facets of the piece: the new cycle face plus surviving outer
        // facets of the host on this side.
        let cycle_set: BTreeSet<usize> = cycle.iter().map(|&v| to_piece[&v]).collect();
        let host_outer: Vec<BTreeSet<usize>> = self
            .outer_facets
            .iter()
            .filter(|&&fid| side[fid] == mark)
            .map(|&fid| {
                emb.faces()[fid]
                    .vertices
                    .iter()
                    .map(|&v| to_piece[&v])
                    .collect()
            })
            .collect();
        let mut outer = BTreeSet::new();
        // The cut cycle bounds exactly one face of the piece that is not one
        // of the piece's inner faces coming from the host: it is the face
        // whose vertex set equals the cycle and whose edges are all cycle
        // edges and which does not correspond to a host face on this side.
        let host_faces_here: HashSet<BTreeSet<usize>> = emb
            .faces()
            .iter()
            .enumerate()
            .filter(|(fid, _)| side[*fid] == mark)
            .map(|(_, face)| face.vertices.iter().map(|&v| to_piece[&v]).collect())
            .collect();
        for (fid, face) in piece_emb.faces().iter().enumerate() {
            let vset: BTreeSet<usize> = face.vertices.iter().copied().collect();
            if vset == cycle_set && face.len() == cycle.len() {
                // Prefer the copy that is not accounted for by a host face;
                // when ambiguous (e.g. a bare polygon) take the first free id.
                if !host_faces_here.contains(&vset) || outer.is_empty() {
                    outer.insert(fid);
                    break;
                }
            }
        }
        for ho in &host_outer {
            for (fid, face) in piece_emb.faces().iter().enumerate() {
                if outer.contains(&fid) {
                    continue;
                }
                let vset: BTreeSet<usize> = face.vertices.iter().copied().collect();
                if vset == *ho {
                    outer.insert(fid);
                    break;
                }
            }
        }
        let semi = SemiMpg::classify(piece_emb, outer, ClassifyOptions::permissive())
            .expect("cut piece classifies as a semi-MPG");
        CutPiece {
            semi: Arc::new(semi),
            to_host,
        }
    }
}

/// One side of a cut, with the map from piece vertex ids back to host ids.
#[derive(Clone, Debug)]
pub struct CutPiece {
    pub semi: Arc<SemiMpg>,
    pub to_host: Vec<usize>,
}

/// Adds chords inside every non-triangle face until all faces are triangles.
/// Each face is fanned from its lowest-id corner, skipping chords that would
/// duplicate an existing adjacency by advancing to the next corner.
pub fn triangulate(g: &PlanarEmbedding) -> Result<Arc<SemiMpg>, TriangulateError> {
    if g.vertex_count() < 3 {
        return Err(TriangulateError::CannotTriangulateSimply(format!(
            "{} vertices",
            g.vertex_count()
        )));
    }
    let mut rot: Vec<Vec<usize>> = g.rotations().to_vec();
    let mut adjacent: HashSet<(usize, usize)> = g.edges().iter().copied().collect();

    for face in g.faces() {
        if face.len() <= 3 {
            continue;
        }
        // Current polygon, rotated so the lowest vertex id leads.
        let mut poly = face.vertices.clone();
        let lead = poly
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap();
        poly.rotate_left(lead);
        while poly.len() > 3 {
            let k = poly.len();
            let mut clipped = false;
            for s in 0..k {
                let a = poly[s];
                let b = poly[(s + 1) % k];
                let c = poly[(s + 2) % k];
                if a == c || adjacent.contains(&norm(a, c)) {
                    continue;
                }
                // Insert the chord a-c, splitting off triangle (a, b, c):
                // c goes right before b in rot[a], a right after b in rot[c].
                insert_before(&mut rot[a], b, c);
                insert_after(&mut rot[c], b, a);
                adjacent.insert(norm(a, c));
                poly.rotate_left(s);
                poly.remove(1);
                clipped = true;
                break;
            }
            if !clipped {
                return Err(TriangulateError::CannotTriangulateSimply(format!(
                    "no chord available on face {:?}",
                    poly
                )));
            }
        }
    }

    let emb = PlanarEmbedding::from_rotations(rot)
        .expect("chord insertion preserves the sphere embedding");
    let mpg = SemiMpg::classify(emb, BTreeSet::new(), ClassifyOptions::default())
        .expect("triangulated embedding is an MPG");
    Ok(Arc::new(mpg))
}

pub(crate) fn insert_after(rotation: &mut Vec<usize>, anchor: usize, value: usize) {
    let i = rotation
        .iter()
        .position(|&x| x == anchor)
        .expect("anchor neighbor present");
    rotation.insert(i + 1, value);
}

pub(crate) fn insert_before(rotation: &mut Vec<usize>, anchor: usize, value: usize) {
    let i = rotation
        .iter()
        .position(|&x| x == anchor)
        .expect("anchor neighbor present");
    rotation.insert(i, value);
}

/// Canonical byte string for a semi-MPG: equal codes exactly when the
/// embeddings are isomorphic as maps up to relabeling, rotation of the
/// neighbor lists, and reflection, with outer facets respected.
pub fn canonical_code(m: &SemiMpg) -> Vec<u8> {
    let emb = m.embedding();
    let n = emb.vertex_count();
    debug_assert!(n < 255, "canonical codes use one byte per vertex label");
    let mut best: Option<Vec<u8>> = None;
    for reflect in [false, true] {
        let rot: Vec<Vec<usize>> = if reflect {
            emb.rotations()
                .iter()
                .map(|r| r.iter().rev().copied().collect())
                .collect()
        } else {
            emb.rotations().to_vec()
        };
        for u in 0..n {
            for i in 0..rot[u].len() {
                let code = rooted_code(m, &rot, u, i);
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
    }
    best.unwrap_or_default()
}

/// BFS relabeling rooted at the arc `(u, rot[u][i])`; each vertex's rotation
/// is emitted starting from the neighbor it was first discovered from.
fn rooted_code(m: &SemiMpg, rot: &[Vec<usize>], u: usize, i: usize) -> Vec<u8> {
    let n = rot.len();
    let mut label = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    // anchor[v] = neighbor of v at which to start reading its rotation.
    let mut anchor = vec![usize::MAX; n];
    label[u] = 0;
    order.push(u);
    anchor[u] = rot[u][i];
    let mut code = Vec::with_capacity(4 * n);
    code.push(n as u8);
    let mut head = 0;
    while head < order.len() {
        let w = order[head];
        head += 1;
        let start = rot[w]
            .iter()
            .position(|&x| x == anchor[w])
            .expect("anchor is a neighbor");
        let deg = rot[w].len();
        code.push(deg as u8);
        for t in 0..deg {
            let x = rot[w][(start + t) % deg];
            if label[x] == usize::MAX {
                label[x] = order.len();
                anchor[x] = w;
                order.push(x);
            }
            code.push(label[x] as u8);
        }
    }
    // Outer facets, relabeled and brought to a canonical cyclic form.
    let mut outer_codes: Vec<Vec<u8>> = m
        .outer_facets()
        .iter()
        .map(|&fid| {
            let cyc: Vec<u8> = m.embedding().faces()[fid]
                .vertices
                .iter()
                .map(|&v| label[v] as u8)
                .collect();
            canonical_cycle(&cyc)
        })
        .collect();
    outer_codes.sort();
    code.push(0xFF);
    for oc in outer_codes {
        code.push(oc.len() as u8);
        code.extend_from_slice(&oc);
    }
    code
}

/// Lexicographically least representative of a cyclic sequence under rotation
/// and reversal.
fn canonical_cycle(cyc: &[u8]) -> Vec<u8> {
    let k = cyc.len();
    let mut best: Option<Vec<u8>> = None;
    for rev in [false, true] {
        let base: Vec<u8> = if rev {
            cyc.iter().rev().copied().collect()
        } else {
            cyc.to_vec()
        };
        for s in 0..k {
            let mut cand = Vec::with_capacity(k);
            cand.extend_from_slice(&base[s..]);
            cand.extend_from_slice(&base[..s]);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn k4_counts() {
        let m = corpus::k4();
        let e = m.embedding();
        assert_eq!(e.vertex_count(), 4);
        assert_eq!(e.edge_count(), 6);
        assert_eq!(e.face_count(), 4);
        assert!(e.faces().iter().all(|f| f.len() == 3));
        assert!(m.is_mpg());
        assert!(m.one_piece());
    }

    #[test]
    fn octahedron_counts() {
        let m = corpus::octahedron();
        let e = m.embedding();
        assert_eq!(e.vertex_count(), 6);
        assert_eq!(e.edge_count(), 12);
        assert_eq!(e.face_count(), 8);
        assert!(e.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn icosahedron_counts() {
        let m = corpus::icosahedron();
        let e = m.embedding();
        assert_eq!(e.vertex_count(), 12);
        assert_eq!(e.edge_count(), 30);
        assert_eq!(e.face_count(), 20);
        assert!(e.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn face_length_sum_is_twice_edges() {
        for m in [corpus::k4(), corpus::octahedron(), corpus::icosahedron()] {
            let e = m.embedding();
            let total: usize = e.faces().iter().map(|f| f.len()).sum();
            assert_eq!(total, 2 * e.edge_count());
        }
    }

    #[test]
    fn rejects_bad_rotations() {
        // Pair present at one endpoint only.
        let r = vec![vec![1, 2], vec![0, 2], vec![1]];
        assert_eq!(
            PlanarEmbedding::from_rotations(r).unwrap_err(),
            EmbeddingError::InconsistentRotation(0, 2)
        );
        // Self loop.
        let r = vec![vec![0, 1], vec![0]];
        assert!(matches!(
            PlanarEmbedding::from_rotations(r).unwrap_err(),
            EmbeddingError::NotSimple(_)
        ));
        // Disconnected: two disjoint triangles cannot even be expressed
        // without failing connectivity.
        let r = vec![
            vec![1, 2],
            vec![2, 0],
            vec![0, 1],
            vec![4, 5],
            vec![5, 3],
            vec![3, 4],
        ];
        assert_eq!(
            PlanarEmbedding::from_rotations(r).unwrap_err(),
            EmbeddingError::NotConnected
        );
        // K4 with two rotations swapped to a non-spherical map.
        let r = vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 2, 1]];
        assert!(matches!(
            PlanarEmbedding::from_rotations(r).unwrap_err(),
            EmbeddingError::NotPlanarEmbedding(_)
        ));
    }

    #[test]
    fn classify_k4_minus_edge() {
        let m = corpus::k4_minus_edge();
        assert!(!m.is_mpg());
        assert!(m.one_piece());
        assert_eq!(m.outer_facets().len(), 1);
        let of = *m.outer_facets().iter().next().unwrap();
        assert_eq!(m.embedding().faces()[of].len(), 4);
        assert_eq!(m.inner_faces().len(), 2);
    }

    #[test]
    fn classify_rejects_non_triangle_inner() {
        let e = corpus::c4_embedding();
        let err = SemiMpg::classify(e, BTreeSet::new(), ClassifyOptions::default()).unwrap_err();
        assert!(matches!(err, ClassifyError::NonTriangleInnerFace(_, 4)));
    }

    #[test]
    fn classify_annulus() {
        let m = corpus::antiprism_annulus(5);
        assert_eq!(m.outer_facets().len(), 2);
        assert!(!m.one_piece());
        assert_eq!(m.vertex_count(), 10);
        assert_eq!(m.edge_count(), 20);
        assert_eq!(m.inner_faces().len(), 10);
        for &fid in m.outer_facets() {
            assert_eq!(m.embedding().faces()[fid].len(), 5);
        }
    }

    #[test]
    fn nontrivial_triangles_icosahedron_empty() {
        // Oracle: brute force over all vertex triples, checking for a facial
        // match among the embedding's faces.
        let m = corpus::icosahedron();
        let e = m.embedding();
        let mut brute = Vec::new();
        let facial: Vec<[usize; 3]> = e
            .faces()
            .iter()
            .map(|f| {
                let mut t = [f.vertices[0], f.vertices[1], f.vertices[2]];
                t.sort_unstable();
                t
            })
            .collect();
        for u in 0..12 {
            for v in u + 1..12 {
                for w in v + 1..12 {
                    if e.are_adjacent(u, v) && e.are_adjacent(u, w) && e.are_adjacent(v, w) {
                        let tri = [u, v, w];
                        if !facial.contains(&tri) {
                            brute.push(tri);
                        }
                    }
                }
            }
        }
        assert!(brute.is_empty());
        assert_eq!(m.nontrivial_triangles(), brute);
        assert!(corpus::k4().nontrivial_triangles().is_empty());
    }

    #[test]
    fn nontrivial_triangle_after_stacking() {
        let m = corpus::stacked5();
        // Vertex 4 was inserted inside face {1,2,3}, so that triangle now has
        // vertices on both sides.
        assert_eq!(m.nontrivial_triangles(), vec![[1, 2, 3]]);
    }

    #[test]
    fn cut_octahedron_equator() {
        let m = corpus::octahedron();
        // Equatorial 4-cycle around vertices 1..=4.
        let (a, b) = m.cut_along_cycle(&[1, 2, 3, 4]).unwrap();
        for piece in [&a, &b] {
            let p = &piece.semi;
            assert_eq!(p.outer_facets().len(), 1);
            assert_eq!(p.inner_faces().len(), 4);
            assert_eq!(p.vertex_count(), 5);
            let of = *p.outer_facets().iter().next().unwrap();
            assert_eq!(p.embedding().faces()[of].len(), 4);
        }
        // Face counts add up: 4 + 4 inner triangles = 8 faces of the host.
        assert_eq!(
            a.semi.inner_faces().len() + b.semi.inner_faces().len(),
            m.embedding().face_count()
        );
        // Edge multiset union with the cycle counted twice matches E(m).
        assert_eq!(
            a.semi.edge_count() + b.semi.edge_count(),
            m.edge_count() + 4
        );
    }

    #[test]
    fn cut_facial_triangle_gives_bare_3gon() {
        let m = corpus::k4();
        let f0 = &m.embedding().faces()[0];
        let tri: Vec<usize> = f0.vertices.clone();
        let (a, b) = m.cut_along_cycle(&tri).unwrap();
        let (small, large) = if a.semi.vertex_count() == 3 { (a, b) } else { (b, a) };
        assert_eq!(small.semi.vertex_count(), 3);
        assert_eq!(small.semi.inner_faces().len(), 1);
        assert_eq!(large.semi.inner_faces().len(), 3);
    }

    #[test]
    fn cut_nontrivial_triangle_of_stacked() {
        let m = corpus::stacked5();
        let (a, b) = m.cut_along_cycle(&[1, 2, 3]).unwrap();
        assert_eq!(a.semi.inner_faces().len(), 3);
        assert_eq!(b.semi.inner_faces().len(), 3);
    }

    #[test]
    fn cut_rejects_nonsense() {
        let m = corpus::k4();
        assert!(matches!(
            m.cut_along_cycle(&[0, 1]).unwrap_err(),
            CutError::NotACycle(_)
        ));
        assert!(matches!(
            m.cut_along_cycle(&[0, 1, 1]).unwrap_err(),
            CutError::NotACycle(_)
        ));
    }

    #[test]
    fn triangulate_c4_gives_k4() {
        let e = corpus::c4_embedding();
        let m = triangulate(&e).unwrap();
        assert_eq!(m.vertex_count(), 4);
        assert_eq!(m.edge_count(), 6);
        assert_eq!(canonical_code(&m), canonical_code(&corpus::k4()));
    }

    #[test]
    fn triangulate_cube() {
        let e = corpus::cube_embedding();
        let m = triangulate(&e).unwrap();
        assert_eq!(m.vertex_count(), 8);
        assert_eq!(m.edge_count(), 18);
        assert_eq!(m.embedding().face_count(), 12);
        // Contains the input edge set.
        for &(u, v) in e.edges() {
            assert!(m.embedding().are_adjacent(u, v));
        }
    }

    #[test]
    fn triangulate_mpg_is_identity() {
        let m = corpus::octahedron();
        let t = triangulate(m.embedding()).unwrap();
        assert_eq!(t.embedding().rotations(), m.embedding().rotations());
    }

    #[test]
    fn triangulate_too_small() {
        let e = PlanarEmbedding::from_rotations(vec![vec![1], vec![0]]).unwrap();
        assert!(matches!(
            triangulate(&e).unwrap_err(),
            TriangulateError::CannotTriangulateSimply(_)
        ));
    }

    #[test]
    fn canonical_code_relabeling_invariance() {
        let m = corpus::k4();
        let base = canonical_code(&m);
        // All 4! relabelings of K4 produce the same code.
        let perms = [[0, 1, 2, 3], [1, 0, 3, 2], [3, 2, 1, 0], [2, 0, 3, 1]];
        for p in perms {
            let rot: Vec<Vec<usize>> = (0..4)
                .map(|new| {
                    let old = p.iter().position(|&x| x == new).unwrap();
                    m.embedding().rotations()[old].iter().map(|&w| p[w]).collect()
                })
                .collect();
            let e = PlanarEmbedding::from_rotations(rot).unwrap();
            let m2 = SemiMpg::mpg(e).unwrap();
            assert_eq!(canonical_code(&m2), base);
        }
    }

    #[test]
    fn canonical_code_distinguishes_n6_classes() {
        let octa = corpus::octahedron();
        let stacked = corpus::stacked6();
        assert_ne!(canonical_code(&octa), canonical_code(&stacked));
    }

    #[test]
    fn canonical_code_reflection_invariance() {
        // An asymmetric 9-vertex MPG built by stacking K4 twice, then its
        // mirror image.
        let m = corpus::stacked_tower(9);
        let rot: Vec<Vec<usize>> = m
            .embedding()
            .rotations()
            .iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        let mirror = SemiMpg::mpg(PlanarEmbedding::from_rotations(rot).unwrap()).unwrap();
        assert_eq!(canonical_code(&m), canonical_code(&mirror));
    }

    #[test]
    fn canonical_code_sees_outer_facets() {
        let m = corpus::k4();
        let as_mpg = canonical_code(&m);
        let f0 = m.embedding().faces()[0].vertices.clone();
        let (_, outside) = m.cut_along_cycle(&f0).unwrap();
        let with_outer = canonical_code(&outside.semi);
        assert_ne!(as_mpg, with_outer);
    }
}
