//! Red/black and RGB edge tilings on semi-MPG hosts.
//!
//! An R-tiling paints every edge red or black so that each inner triangle
//! carries exactly one red edge. An RGB-tiling is three coexisting
//! single-color tilings: each inner triangle carries one red, one green and
//! one blue edge. Edges shared by two outer facets border no triangle and are
//! exempt from both rules; they default to black.

use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use crate::canal;
use crate::embedding::SemiMpg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeColor {
    Red,
    Green,
    Blue,
    Black,
}

impl EdgeColor {
    pub fn letter(self) -> char {
        match self {
            EdgeColor::Red => 'R',
            EdgeColor::Green => 'G',
            EdgeColor::Blue => 'B',
            EdgeColor::Black => 'K',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'R' => Some(EdgeColor::Red),
            'G' => Some(EdgeColor::Green),
            'B' => Some(EdgeColor::Blue),
            'K' => Some(EdgeColor::Black),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TilingMode {
    R,
    Rgb,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TilingError {
    #[error("color list has length {0}, host has {1} edges")]
    WrongLength(usize, usize),
    #[error("inner triangle (face {face}) violates the tiling rule: {detail}")]
    Triangle { face: usize, detail: String },
    #[error("edge {edge} carries color {color:?}, not allowed in this mode")]
    EdgeColorNotAllowed { edge: usize, color: EdgeColor },
    #[error("tiling is not a valid single-color tiling for {0:?}")]
    InvalidSingleColorTiling(EdgeColor),
}

/// A per-edge color assignment bound to its host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling {
    host: Arc<SemiMpg>,
    colors: Vec<EdgeColor>,
}

impl Tiling {
    pub fn new(host: Arc<SemiMpg>, colors: Vec<EdgeColor>) -> Result<Self, TilingError> {
        if colors.len() != host.edge_count() {
            return Err(TilingError::WrongLength(colors.len(), host.edge_count()));
        }
        Ok(Tiling { host, colors })
    }

    pub fn all_black(host: Arc<SemiMpg>) -> Self {
        let colors = vec![EdgeColor::Black; host.edge_count()];
        Tiling { host, colors }
    }

    pub fn host(&self) -> &Arc<SemiMpg> {
        &self.host
    }

    pub fn color(&self, e: usize) -> EdgeColor {
        self.colors[e]
    }

    pub fn colors(&self) -> &[EdgeColor] {
        &self.colors
    }

    pub fn with_color(mut self, e: usize, c: EdgeColor) -> Self {
        self.colors[e] = c;
        self
    }

    pub fn edges_of_color(&self, c: EdgeColor) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&e| self.colors[e] == c)
            .collect()
    }

    /// A copy in which everything apart from `keep` is painted black.
    /// Useful for inspecting the green or blue part of an RGB-tiling.
    pub fn restricted_to(&self, keep: EdgeColor) -> Tiling {
        let colors = self
            .colors
            .iter()
            .map(|&c| if c == keep { c } else { EdgeColor::Black })
            .collect();
        Tiling {
            host: self.host.clone(),
            colors,
        }
    }

    /// Checks the per-triangle rule for the requested mode and reports the
    /// first violation in face-id order.
    pub fn validate(&self, mode: TilingMode) -> Result<(), TilingError> {
        let host = &self.host;
        for e in 0..self.colors.len() {
            if host.is_exempt(e) {
                continue;
            }
            let c = self.colors[e];
            let allowed = match mode {
                TilingMode::R => c == EdgeColor::Red || c == EdgeColor::Black,
                TilingMode::Rgb => c != EdgeColor::Black,
            };
            if !allowed {
                return Err(TilingError::EdgeColorNotAllowed { edge: e, color: c });
            }
        }
        for &f in host.inner_faces() {
            let face = &host.embedding().faces()[f];
            let mut count = [0usize; 4];
            for &e in &face.edges {
                count[self.colors[e] as usize] += 1;
            }
            let ok = match mode {
                TilingMode::R => count[EdgeColor::Red as usize] == 1,
                TilingMode::Rgb => {
                    count[EdgeColor::Red as usize] == 1
                        && count[EdgeColor::Green as usize] == 1
                        && count[EdgeColor::Blue as usize] == 1
                }
            };
            if !ok {
                return Err(TilingError::Triangle {
                    face: f,
                    detail: format!(
                        "R={} G={} B={} black={}",
                        count[0], count[1], count[2], count[3]
                    ),
                });
            }
        }
        Ok(())
    }

    /// Vertex partition into connected components of the chosen color's
    /// subgraph; isolated vertices form singleton components. Components are
    /// sorted by their least vertex.
    pub fn components(&self, color: EdgeColor) -> Vec<Vec<usize>> {
        let n = self.host.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for e in 0..self.colors.len() {
            if self.colors[e] == color {
                let (u, v) = self.host.embedding().edge_endpoints(e);
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru.max(rv)] = ru.min(rv);
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn red_components(&self) -> Vec<Vec<usize>> {
        self.components(EdgeColor::Red)
    }

    /// A shortest odd cycle in the subgraph of the chosen color, if any.
    /// Ties are broken by scanning start vertices in ascending id.
    pub fn find_odd_cycle(&self, color: EdgeColor) -> Option<Vec<usize>> {
        let n = self.host.vertex_count();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in 0..self.colors.len() {
            if self.colors[e] == color {
                let (u, v) = self.host.embedding().edge_endpoints(e);
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        let mut best: Option<Vec<usize>> = None;
        for s in 0..n {
            if adj[s].is_empty() {
                continue;
            }
            let mut depth = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            depth[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if depth[v] == usize::MAX {
                        depth[v] = depth[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            for u in 0..n {
                if depth[u] == usize::MAX {
                    continue;
                }
                for &v in &adj[u] {
                    if u < v && depth[v] == depth[u] {
                        // Equal depths: the tree paths plus (u,v) close an
                        // odd cycle once trimmed at the divergence point.
                        let cycle = close_odd_cycle(&parent, u, v);
                        if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                            best = Some(cycle);
                        }
                    }
                }
            }
        }
        best
    }

    pub fn find_red_odd_cycle(&self) -> Option<Vec<usize>> {
        self.find_odd_cycle(EdgeColor::Red)
    }

    /// Number of black edges along all outer facets, shared edges counted
    /// twice.
    pub fn black_outer_boundary_count(&self) -> usize {
        self.host
            .outer_boundary_edges()
            .iter()
            .filter(|&&e| self.colors[e] == EdgeColor::Black)
            .count()
    }
}

fn close_odd_cycle(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let mut up = vec![u];
    let mut vp = vec![v];
    let (mut x, mut y) = (u, v);
    while x != y {
        x = parent[x];
        y = parent[y];
        up.push(x);
        vp.push(y);
    }
    // up ends at the meeting vertex; vp mirrors it. Cycle: u .. meet .. v, u.
    vp.pop();
    up.extend(vp.into_iter().rev());
    up
}

/// Two triangles sharing a middle edge, with the four distinct boundary
/// edges around them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diamond {
    pub middle_edge: usize,
    pub surrounding: [usize; 4],
}

/// The diamond over edge `e`, when `e` borders two distinct inner triangles
/// with four distinct boundary edges.
pub fn diamond(host: &SemiMpg, e: usize) -> Option<Diamond> {
    let emb = host.embedding();
    let [fa, fb] = emb.faces_of_edge(e);
    if fa == fb || host.is_outer(fa) || host.is_outer(fb) {
        return None;
    }
    let mut surrounding = Vec::with_capacity(4);
    for f in [fa, fb] {
        for &x in &emb.faces()[f].edges {
            if x != e {
                surrounding.push(x);
            }
        }
    }
    let mut sorted = surrounding.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != 4 {
        return None;
    }
    Some(Diamond {
        middle_edge: e,
        surrounding: [surrounding[0], surrounding[1], surrounding[2], surrounding[3]],
    })
}

/// Backtracks over all R-tilings of the host, visiting inner triangles in
/// BFS order over face adjacency and trying red candidates in ascending edge
/// id. `pins` fixes edge colors up front (e.g. pinning an exempt edge red).
/// The visitor returns `ControlFlow::Break(())` to stop early.
pub fn for_each_r_tiling<F>(host: &Arc<SemiMpg>, pins: &[(usize, EdgeColor)], mut visit: F)
where
    F: FnMut(&Tiling) -> ControlFlow<()>,
{
    const UNSET: u8 = 0;
    const RED: u8 = 1;
    const BLACK: u8 = 2;

    let order = inner_face_bfs_order(host);
    let mut state = vec![UNSET; host.edge_count()];
    for &(e, c) in pins {
        state[e] = match c {
            EdgeColor::Red => RED,
            _ => BLACK,
        };
    }

    struct Ctx<'a, F> {
        host: &'a Arc<SemiMpg>,
        order: &'a [usize],
        visit: &'a mut F,
    }

    fn rec<F>(ctx: &mut Ctx<'_, F>, state: &mut Vec<u8>, k: usize) -> ControlFlow<()>
    where
        F: FnMut(&Tiling) -> ControlFlow<()>,
    {
        const UNSET: u8 = 0;
        const RED: u8 = 1;
        const BLACK: u8 = 2;
        if k == ctx.order.len() {
            let colors = state
                .iter()
                .map(|&s| if s == RED { EdgeColor::Red } else { EdgeColor::Black })
                .collect();
            let t = Tiling {
                host: ctx.host.clone(),
                colors,
            };
            return (ctx.visit)(&t);
        }
        let face = &ctx.host.embedding().faces()[ctx.order[k]];
        let mut edges: Vec<usize> = face.edges.clone();
        edges.sort_unstable();
        let reds = edges.iter().filter(|&&e| state[e] == RED).count();
        let unset: Vec<usize> = edges.iter().copied().filter(|&e| state[e] == UNSET).collect();
        match reds {
            1 => {
                for &e in &unset {
                    state[e] = BLACK;
                }
                let flow = rec(ctx, state, k + 1);
                for &e in &unset {
                    state[e] = UNSET;
                }
                flow
            }
            0 => {
                for &r in &unset {
                    for &e in &unset {
                        state[e] = if e == r { RED } else { BLACK };
                    }
                    let flow = rec(ctx, state, k + 1);
                    for &e in &unset {
                        state[e] = UNSET;
                    }
                    flow?;
                }
                ControlFlow::Continue(())
            }
            _ => ControlFlow::Continue(()),
        }
    }

    let mut ctx = Ctx {
        host,
        order: &order,
        visit: &mut visit,
    };
    let _ = rec(&mut ctx, &mut state, 0);
}

/// Inner faces in BFS order across shared inner edges, seeded at the lowest
/// unvisited face id; gives the deterministic backtracking order.
fn inner_face_bfs_order(host: &SemiMpg) -> Vec<usize> {
    let emb = host.embedding();
    let mut order = Vec::with_capacity(host.inner_faces().len());
    let mut seen = vec![false; emb.face_count()];
    for &start in host.inner_faces() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            order.push(f);
            let mut nbrs: Vec<usize> = emb.faces()[f]
                .edges
                .iter()
                .map(|&e| emb.opposite_face(e, f))
                .filter(|&g| !host.is_outer(g) && !seen[g])
                .collect();
            nbrs.sort_unstable();
            nbrs.dedup();
            for g in nbrs {
                seen[g] = true;
                queue.push_back(g);
            }
        }
    }
    order
}

/// All R-tilings of the host, up to `limit` when given.
pub fn enumerate_r_tilings(host: &Arc<SemiMpg>, limit: Option<usize>) -> Vec<Tiling> {
    let mut out = Vec::new();
    for_each_r_tiling(host, &[], |t| {
        out.push(t.clone());
        match limit {
            Some(cap) if out.len() >= cap => ControlFlow::Break(()),
            _ => ControlFlow::Continue(()),
        }
    });
    out
}

pub fn count_r_tilings(host: &Arc<SemiMpg>) -> usize {
    let mut n = 0usize;
    for_each_r_tiling(host, &[], |_| {
        n += 1;
        ControlFlow::Continue(())
    });
    n
}

/// Number of RGB-tilings extending the R-tiling `t`: zero when some ring
/// canal line passes an odd number of triangles, otherwise `2^N` with `N`
/// the number of canal lines.
pub fn count_rgb_extensions(t: &Tiling) -> u64 {
    let sys = match canal::build_canal_system(t, EdgeColor::Red) {
        Ok(sys) => sys,
        Err(_) => return 0,
    };
    for line in sys.lines() {
        if line.is_ring() && line.triangles.len() % 2 == 1 {
            return 0;
        }
    }
    1u64 << sys.lines().len()
}

/// Materializes every RGB extension of the R-tiling `t` by coloring the
/// black edges green and blue alternately along each canal line.
pub fn extend_to_rgb(t: &Tiling) -> Vec<Tiling> {
    let sys = match canal::build_canal_system(t, EdgeColor::Red) {
        Ok(sys) => sys,
        Err(_) => return Vec::new(),
    };
    let lines = sys.lines();
    for line in lines {
        if line.is_ring() && line.triangles.len() % 2 == 1 {
            return Vec::new();
        }
    }
    let n = lines.len();
    debug_assert!(n < 60, "extension count explodes past 2^60");
    let mut out = Vec::with_capacity(1usize << n);
    for choice in 0u64..(1u64 << n) {
        let mut colors = t.colors.clone();
        for (i, line) in lines.iter().enumerate() {
            let mut c = if choice >> i & 1 == 0 {
                EdgeColor::Green
            } else {
                EdgeColor::Blue
            };
            for e in line.black_edge_sequence() {
                colors[e] = c;
                c = if c == EdgeColor::Green {
                    EdgeColor::Blue
                } else {
                    EdgeColor::Green
                };
            }
        }
        out.push(Tiling {
            host: t.host.clone(),
            colors,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    /// Brute-force oracle: every subset of edges as the red set, checked
    /// against the one-red-per-inner-triangle rule directly.
    fn brute_force_r_tilings(host: &Arc<SemiMpg>) -> Vec<Vec<usize>> {
        let e = host.edge_count();
        assert!(e <= 20, "oracle is exponential");
        let mut out = Vec::new();
        'next: for mask in 0u32..(1 << e) {
            for &f in host.inner_faces() {
                let reds = host.embedding().faces()[f]
                    .edges
                    .iter()
                    .filter(|&&x| mask >> x & 1 == 1)
                    .count();
                if reds != 1 {
                    continue 'next;
                }
            }
            out.push((0..e).filter(|&x| mask >> x & 1 == 1).collect());
        }
        out
    }

    #[test]
    fn k4_has_exactly_the_three_matchings() {
        let m = corpus::k4();
        let tilings = enumerate_r_tilings(&m, None);
        assert_eq!(tilings.len(), 3);
        let mut red_sets: Vec<Vec<usize>> =
            tilings.iter().map(|t| t.edges_of_color(EdgeColor::Red)).collect();
        red_sets.sort();
        let mut expected = brute_force_r_tilings(&m);
        expected.sort();
        assert_eq!(red_sets, expected);
        // The three perfect matchings of K4.
        let emb = m.embedding();
        let matchings: Vec<Vec<usize>> = vec![
            vec![emb.edge_id(0, 1).unwrap(), emb.edge_id(2, 3).unwrap()],
            vec![emb.edge_id(0, 2).unwrap(), emb.edge_id(1, 3).unwrap()],
            vec![emb.edge_id(0, 3).unwrap(), emb.edge_id(1, 2).unwrap()],
        ];
        for mut want in matchings {
            want.sort_unstable();
            assert!(red_sets.contains(&want));
        }
        for t in &tilings {
            t.validate(TilingMode::R).unwrap();
        }
    }

    #[test]
    fn k4_minus_edge_matches_oracle() {
        let m = corpus::k4_minus_edge();
        let tilings = enumerate_r_tilings(&m, None);
        let expected = brute_force_r_tilings(&m);
        assert_eq!(tilings.len(), expected.len());
        assert_eq!(tilings.len(), 5);
        for t in &tilings {
            t.validate(TilingMode::R).unwrap();
        }
    }

    #[test]
    fn octahedron_matches_oracle_and_is_nonempty() {
        let m = corpus::octahedron();
        let tilings = enumerate_r_tilings(&m, None);
        let expected = brute_force_r_tilings(&m);
        assert_eq!(tilings.len(), expected.len());
        assert!(!tilings.is_empty());
        let mut red_sets: Vec<Vec<usize>> =
            tilings.iter().map(|t| t.edges_of_color(EdgeColor::Red)).collect();
        red_sets.sort();
        let mut want = expected;
        want.sort();
        assert_eq!(red_sets, want);
    }

    #[test]
    fn enumeration_respects_limit_and_is_duplicate_free() {
        let m = corpus::octahedron();
        let all = enumerate_r_tilings(&m, None);
        let capped = enumerate_r_tilings(&m, Some(2));
        assert_eq!(capped.len(), 2);
        assert_eq!(capped[0], all[0]);
        assert_eq!(capped[1], all[1]);
        let mut sets: Vec<Vec<usize>> =
            all.iter().map(|t| t.edges_of_color(EdgeColor::Red)).collect();
        let before = sets.len();
        sets.sort();
        sets.dedup();
        assert_eq!(sets.len(), before);
    }

    #[test]
    fn validate_reports_double_red_triangle() {
        let m = corpus::k4();
        let emb = m.embedding();
        let t = Tiling::all_black(m.clone())
            .with_color(emb.edge_id(0, 1).unwrap(), EdgeColor::Red)
            .with_color(emb.edge_id(0, 2).unwrap(), EdgeColor::Red);
        let err = t.validate(TilingMode::R).unwrap_err();
        assert!(matches!(err, TilingError::Triangle { .. }));
    }

    #[test]
    fn validate_accepts_figure_one_rgb() {
        // The K4 coloring with f(v_i) = i induces red {02,13}, green {03,12},
        // blue {01,23} (0-indexed).
        let m = corpus::k4();
        let emb = m.embedding();
        let t = Tiling::all_black(m.clone())
            .with_color(emb.edge_id(0, 2).unwrap(), EdgeColor::Red)
            .with_color(emb.edge_id(1, 3).unwrap(), EdgeColor::Red)
            .with_color(emb.edge_id(0, 3).unwrap(), EdgeColor::Green)
            .with_color(emb.edge_id(1, 2).unwrap(), EdgeColor::Green)
            .with_color(emb.edge_id(0, 1).unwrap(), EdgeColor::Blue)
            .with_color(emb.edge_id(2, 3).unwrap(), EdgeColor::Blue);
        t.validate(TilingMode::Rgb).unwrap();
        t.restricted_to(EdgeColor::Red).validate(TilingMode::R).unwrap();
    }

    #[test]
    fn red_components_k4() {
        let m = corpus::k4();
        let emb = m.embedding();
        let t = Tiling::all_black(m.clone())
            .with_color(emb.edge_id(0, 2).unwrap(), EdgeColor::Red)
            .with_color(emb.edge_id(1, 3).unwrap(), EdgeColor::Red);
        assert_eq!(t.red_components(), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn red_components_match_union_find_oracle_on_octahedron() {
        let m = corpus::octahedron();
        for t in enumerate_r_tilings(&m, None) {
            // Oracle: repeated merging over an adjacency matrix.
            let n = m.vertex_count();
            let mut comp: Vec<usize> = (0..n).collect();
            let mut changed = true;
            while changed {
                changed = false;
                for e in t.edges_of_color(EdgeColor::Red) {
                    let (u, v) = m.embedding().edge_endpoints(e);
                    let (a, b) = (comp[u].min(comp[v]), comp[u].max(comp[v]));
                    if a != b {
                        for c in comp.iter_mut() {
                            if *c == b {
                                *c = a;
                            }
                        }
                        changed = true;
                    }
                }
            }
            let mut oracle: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
            for (v, &root) in comp.iter().enumerate() {
                oracle.entry(root).or_default().push(v);
            }
            let oracle: Vec<Vec<usize>> = oracle.into_values().collect();
            assert_eq!(t.red_components(), oracle);
        }
    }

    #[test]
    fn matchings_have_no_odd_cycle() {
        let m = corpus::k4();
        for t in enumerate_r_tilings(&m, None) {
            assert_eq!(t.find_red_odd_cycle(), None);
        }
    }

    #[test]
    fn wheel_rim_tiling_has_red_5_cycle() {
        let t = corpus::wheel5_rim_tiling();
        t.validate(TilingMode::R).unwrap();
        let cycle = t.find_red_odd_cycle().expect("rim is an odd cycle");
        assert_eq!(cycle.len(), 5);
        // Oracle: BFS 2-coloring says the red subgraph is not bipartite.
        assert!(!bipartite_oracle(&t, EdgeColor::Red));
        // And the returned vertices really form a red cycle.
        for i in 0..cycle.len() {
            let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            let e = t.host().embedding().edge_id(u, v).unwrap();
            assert_eq!(t.color(e), EdgeColor::Red);
        }
    }

    #[test]
    fn bipartite_red_graphs_report_none() {
        let m = corpus::octahedron();
        for t in enumerate_r_tilings(&m, None) {
            assert_eq!(t.find_red_odd_cycle().is_none(), bipartite_oracle(&t, EdgeColor::Red));
        }
    }

    fn bipartite_oracle(t: &Tiling, color: EdgeColor) -> bool {
        let n = t.host().vertex_count();
        let mut side = vec![u8::MAX; n];
        for s in 0..n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for e in 0..t.host().edge_count() {
                    if t.color(e) != color {
                        continue;
                    }
                    let (a, b) = t.host().embedding().edge_endpoints(e);
                    let v = if a == u {
                        b
                    } else if b == u {
                        a
                    } else {
                        continue;
                    };
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        stack.push(v);
                    } else if side[v] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Brute-force oracle for RGB extensions: every green/blue assignment of
    /// the non-exempt black edges, validated directly.
    fn brute_force_extensions(t: &Tiling) -> usize {
        let blacks: Vec<usize> = t
            .edges_of_color(EdgeColor::Black)
            .into_iter()
            .filter(|&e| !t.host().is_exempt(e))
            .collect();
        assert!(blacks.len() <= 20);
        let mut count = 0;
        for mask in 0u32..(1 << blacks.len()) {
            let mut cand = t.clone();
            for (i, &e) in blacks.iter().enumerate() {
                cand.colors[e] = if mask >> i & 1 == 0 {
                    EdgeColor::Green
                } else {
                    EdgeColor::Blue
                };
            }
            if cand.validate(TilingMode::Rgb).is_ok() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn k4_matching_has_two_extensions() {
        let m = corpus::k4();
        let emb = m.embedding();
        let t = Tiling::all_black(m.clone())
            .with_color(emb.edge_id(0, 2).unwrap(), EdgeColor::Red)
            .with_color(emb.edge_id(1, 3).unwrap(), EdgeColor::Red);
        assert_eq!(brute_force_extensions(&t), 2);
        assert_eq!(count_rgb_extensions(&t), 2);
        let exts = extend_to_rgb(&t);
        assert_eq!(exts.len(), 2);
        for x in &exts {
            x.validate(TilingMode::Rgb).unwrap();
        }
    }

    #[test]
    fn odd_ring_blocks_extension() {
        let t = corpus::wheel5_rim_tiling();
        assert_eq!(brute_force_extensions(&t), 0);
        assert_eq!(count_rgb_extensions(&t), 0);
        assert!(extend_to_rgb(&t).is_empty());
    }

    #[test]
    fn extension_counts_match_oracle_on_small_hosts() {
        for m in [corpus::k4(), corpus::stacked5(), corpus::octahedron(), corpus::k4_minus_edge()]
        {
            for t in enumerate_r_tilings(&m, None) {
                let brute = brute_force_extensions(&t);
                assert_eq!(count_rgb_extensions(&t) as usize, brute);
                let exts = extend_to_rgb(&t);
                assert_eq!(exts.len(), brute);
                for x in &exts {
                    x.validate(TilingMode::Rgb).unwrap();
                }
            }
        }
    }

    #[test]
    fn fixing_two_colors_determines_the_third() {
        // Repaint the blue edges of an extension black, re-extend, and the
        // original blue set reappears among the candidates.
        let m = corpus::octahedron();
        let t = &enumerate_r_tilings(&m, None)[0];
        for ext in extend_to_rgb(t) {
            let blue = ext.edges_of_color(EdgeColor::Blue);
            let mut stripped = ext.clone();
            for &e in &blue {
                stripped.colors[e] = EdgeColor::Black;
            }
            // Green and red stay; the only completion restoring RGB validity
            // must color the stripped edges blue again.
            let mut ok = false;
            'outer: for mask in 0u32..(1 << blue.len()) {
                let mut cand = stripped.clone();
                for (i, &e) in blue.iter().enumerate() {
                    cand.colors[e] = if mask >> i & 1 == 0 {
                        EdgeColor::Blue
                    } else {
                        EdgeColor::Green
                    };
                }
                if cand.validate(TilingMode::Rgb).is_ok() {
                    if cand.colors == ext.colors {
                        ok = true;
                    } else {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            assert!(ok, "third color was not determined by the other two");
        }
    }

    #[test]
    fn diamond_shape() {
        let m = corpus::k4();
        let e = m.embedding().edge_id(0, 1).unwrap();
        let d = diamond(&m, e).unwrap();
        assert_eq!(d.middle_edge, e);
        let mut s = d.surrounding.to_vec();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 4);
        // Boundary edges of a 4-semi-MPG are not diamonds.
        let semi = corpus::k4_minus_edge();
        let boundary = semi.outer_boundary_edges()[0];
        assert!(diamond(&semi, boundary).is_none());
    }
}
