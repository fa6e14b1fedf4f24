//! Proper vertex colorings and their dictionary with RGB edge colorings.
//!
//! Edges between colors {1,3} or {2,4} are red, between {1,4} or {2,3}
//! green, and between {1,2} or {3,4} blue. A proper 4-coloring therefore
//! induces an RGB-tiling on any semi-MPG host, and a grand R-tiling without
//! red odd cycles can be turned back into a proper 4-coloring.

use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use crate::canal::{is_grand, Grandness};
use crate::embedding::SemiMpg;
use crate::tiling::{EdgeColor, Tiling};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring is not proper: vertices {0} and {1} share color {2}")]
    NotProper(usize, usize, u8),
    #[error("vertex {0} carries color {1}, outside 1..=4")]
    ColorOutOfRange(usize, u8),
    #[error("tiling is not grand; no coloring can be induced")]
    NotGrand,
    #[error("tiling has a red odd cycle through vertex {0}; no coloring can be induced")]
    RedOddCycle(usize),
    #[error("vertex {0} has color {1}, not in the requested Kempe pair")]
    VertexNotInPair(usize, u8),
    #[error("enumeration exceeded the cap of {0} colorings")]
    ResourceLimit(usize),
    #[error("vertex {0} does not have degree 4")]
    NotDegreeFour(usize),
}

/// A vertex -> color map; proper 4-colorings use 1..=4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexColoring {
    colors: Vec<u8>,
}

impl VertexColoring {
    pub fn new(colors: Vec<u8>) -> Self {
        VertexColoring { colors }
    }

    pub fn color(&self, v: usize) -> u8 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// First improper edge, if any.
    pub fn check_proper(&self, host: &SemiMpg) -> Result<(), ColoringError> {
        for (u, v) in host.embedding().edges().iter().copied() {
            if self.colors[u] == self.colors[v] {
                return Err(ColoringError::NotProper(u, v, self.colors[u]));
            }
        }
        Ok(())
    }
}

/// The pair-of-colors table: which edge color joins vertex colors `a` and
/// `b`.
pub fn edge_color_for(a: u8, b: u8) -> Option<EdgeColor> {
    let (lo, hi) = (a.min(b), a.max(b));
    match (lo, hi) {
        (1, 3) | (2, 4) => Some(EdgeColor::Red),
        (1, 4) | (2, 3) => Some(EdgeColor::Green),
        (1, 2) | (3, 4) => Some(EdgeColor::Blue),
        _ => None,
    }
}

/// Converts a proper 4-coloring into the induced RGB-tiling.
pub fn coloring_to_rgb(host: &Arc<SemiMpg>, f: &VertexColoring) -> Result<Tiling, ColoringError> {
    for (v, &c) in f.colors().iter().enumerate() {
        if !(1..=4).contains(&c) {
            return Err(ColoringError::ColorOutOfRange(v, c));
        }
    }
    f.check_proper(host)?;
    let emb = host.embedding();
    let mut colors = Vec::with_capacity(emb.edge_count());
    for &(u, v) in emb.edges() {
        colors.push(edge_color_for(f.color(u), f.color(v)).expect("proper in-range pair"));
    }
    Ok(Tiling::new(host.clone(), colors).expect("edge count matches"))
}

/// Reconstructs a proper 4-coloring from a grand R-tiling without red odd
/// cycles. The part containing `base` becomes v13 and `base` gets color 1;
/// in every other red component the bipartition class holding the least
/// vertex takes the smaller color of its part.
pub fn tiling_to_coloring(t: &Tiling, base: usize) -> Result<VertexColoring, ColoringError> {
    let host = t.host();
    if let Some(cycle) = t.find_red_odd_cycle() {
        return Err(ColoringError::RedOddCycle(cycle[0]));
    }
    let partition = match is_grand(t, EdgeColor::Red) {
        Grandness::Grand(p) => p,
        Grandness::NotGrand(_) => return Err(ColoringError::NotGrand),
    };
    let n = host.vertex_count();
    let in_v13 = {
        let mut side = vec![false; n];
        for &v in &partition.v13 {
            side[v] = true;
        }
        let base_in_v13 = side[base];
        move |v: usize| side[v] == base_in_v13
    };

    // 2-color each red component; no odd cycle means this succeeds.
    let red_class = red_bipartition(t)?;

    let mut colors = vec![0u8; n];
    for comp in t.red_components() {
        let lead = if comp.contains(&base) { base } else { comp[0] };
        let part13 = in_v13(lead);
        debug_assert!(comp.iter().all(|&v| in_v13(v) == part13));
        let (small, big) = if part13 { (1, 3) } else { (2, 4) };
        for &v in &comp {
            colors[v] = if red_class[v] == red_class[lead] { small } else { big };
        }
    }
    let out = VertexColoring::new(colors);
    out.check_proper(host)?;
    Ok(out)
}

/// Side of each vertex in the bipartition of the red subgraph.
fn red_bipartition(t: &Tiling) -> Result<Vec<u8>, ColoringError> {
    let host = t.host();
    let n = host.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in t.edges_of_color(EdgeColor::Red) {
        let (u, v) = host.embedding().edge_endpoints(e);
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut side = vec![u8::MAX; n];
    for s in 0..n {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if side[v] == u8::MAX {
                    side[v] = 1 - side[u];
                    stack.push(v);
                } else if side[v] == side[u] {
                    return Err(ColoringError::RedOddCycle(v));
                }
            }
        }
    }
    Ok(side)
}

/// Vertices reachable from `v` through vertices colored in `pair`.
pub fn kempe_component(
    host: &SemiMpg,
    f: &VertexColoring,
    v: usize,
    pair: (u8, u8),
) -> Result<Vec<usize>, ColoringError> {
    if f.color(v) != pair.0 && f.color(v) != pair.1 {
        return Err(ColoringError::VertexNotInPair(v, f.color(v)));
    }
    let mut seen = vec![false; host.vertex_count()];
    seen[v] = true;
    let mut stack = vec![v];
    let mut comp = vec![v];
    while let Some(u) = stack.pop() {
        for &w in host.embedding().neighbors(u) {
            if !seen[w] && (f.color(w) == pair.0 || f.color(w) == pair.1) {
                seen[w] = true;
                comp.push(w);
                stack.push(w);
            }
        }
    }
    comp.sort_unstable();
    Ok(comp)
}

/// Swaps the two pair colors on the Kempe component of `v`; properness is
/// preserved.
pub fn kempe_switch(
    host: &SemiMpg,
    f: &VertexColoring,
    v: usize,
    pair: (u8, u8),
) -> Result<VertexColoring, ColoringError> {
    let comp = kempe_component(host, f, v, pair)?;
    let mut colors = f.colors().to_vec();
    for &u in &comp {
        colors[u] = if colors[u] == pair.0 { pair.1 } else { pair.0 };
    }
    Ok(VertexColoring::new(colors))
}

/// Backtracking enumeration of all proper maps V -> {1,2,3,4}; `cap` bounds
/// the number of colorings returned.
pub fn enumerate_4colorings(
    host: &SemiMpg,
    cap: Option<usize>,
) -> Result<Vec<VertexColoring>, ColoringError> {
    let mut out = Vec::new();
    let flow = for_each_4coloring(host, |f| {
        if let Some(limit) = cap {
            if out.len() >= limit {
                return ControlFlow::Break(());
            }
        }
        out.push(f.clone());
        ControlFlow::Continue(())
    });
    if flow.is_break() {
        return Err(ColoringError::ResourceLimit(cap.unwrap_or(0)));
    }
    Ok(out)
}

/// The lexicographically first proper 4-coloring, if one exists.
pub fn first_4coloring(host: &SemiMpg) -> Option<VertexColoring> {
    let mut found = None;
    let _ = for_each_4coloring(host, |f| {
        found = Some(f.clone());
        ControlFlow::Break(())
    });
    found
}

pub fn count_4colorings(host: &SemiMpg) -> u64 {
    let mut n = 0u64;
    let _ = for_each_4coloring(host, |_| {
        n += 1;
        ControlFlow::Continue(())
    });
    n
}

fn for_each_4coloring<F>(host: &SemiMpg, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&VertexColoring) -> ControlFlow<()>,
{
    let n = host.vertex_count();
    let emb = host.embedding();
    let mut colors = vec![0u8; n];
    fn rec<F>(
        emb: &crate::embedding::PlanarEmbedding,
        colors: &mut Vec<u8>,
        v: usize,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&VertexColoring) -> ControlFlow<()>,
    {
        if v == colors.len() {
            let f = VertexColoring::new(colors.clone());
            return visit(&f);
        }
        'colors: for c in 1..=4u8 {
            for &w in emb.neighbors(v) {
                if w < v && colors[w] == c {
                    continue 'colors;
                }
            }
            colors[v] = c;
            rec(emb, colors, v + 1, visit)?;
            colors[v] = 0;
        }
        ControlFlow::Continue(())
    }
    rec(emb, &mut colors, 0, &mut visit)
}

/// Fast existence check with symmetry pruning: vertex v may only use colors
/// up to one past the largest color used so far.
pub fn is_4colorable(host: &SemiMpg) -> bool {
    let n = host.vertex_count();
    let emb = host.embedding();
    let mut colors = vec![0u8; n];
    fn rec(emb: &crate::embedding::PlanarEmbedding, colors: &mut Vec<u8>, v: usize, used: u8) -> bool {
        if v == colors.len() {
            return true;
        }
        'colors: for c in 1..=(used + 1).min(4) {
            for &w in emb.neighbors(v) {
                if w < v && colors[w] == c {
                    continue 'colors;
                }
            }
            colors[v] = c;
            if rec(emb, colors, v + 1, used.max(c)) {
                return true;
            }
            colors[v] = 0;
        }
        false
    }
    rec(emb, &mut colors, 0, 0)
}

/// Outcome of the degree-4 reduction argument on one vertex.
#[derive(Clone, Debug)]
pub struct Degree4Demo {
    pub coloring: VertexColoring,
    /// The Kempe pair that was switched, when a switch was needed.
    pub kempe_pair: Option<(u8, u8)>,
    /// How many of the two diagonal pairs around `v` were disconnected in
    /// the relevant Kempe subgraphs (only meaningful when a switch ran).
    pub disconnected_diagonals: u8,
}

/// Colors `m` by 4-coloring `m - v` with a brute-force oracle and then
/// freeing a color at the degree-4 vertex `v`, switching a Kempe chain over
/// a disconnected diagonal pair when all four neighbor colors differ.
pub fn degree4_reduction_demo(m: &Arc<SemiMpg>, v: usize) -> Result<Degree4Demo, ColoringError> {
    let emb = m.embedding();
    if emb.degree(v) != 4 {
        return Err(ColoringError::NotDegreeFour(v));
    }
    // Brute-force 4-coloring of m - v (as an abstract graph).
    let n = emb.vertex_count();
    let order: Vec<usize> = (0..n).filter(|&u| u != v).collect();
    let mut colors = vec![0u8; n];
    fn rec(
        emb: &crate::embedding::PlanarEmbedding,
        order: &[usize],
        colors: &mut Vec<u8>,
        k: usize,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let u = order[k];
        'colors: for c in 1..=4u8 {
            for &w in emb.neighbors(u) {
                if colors[w] == c {
                    continue 'colors;
                }
            }
            colors[u] = c;
            if rec(emb, order, colors, k + 1) {
                return true;
            }
            colors[u] = 0;
        }
        false
    }
    assert!(rec(emb, &order, &mut colors, 0), "small hosts minus a vertex are 4-colorable");

    let nbrs: Vec<usize> = emb.neighbors(v).to_vec();
    let mut seen = [false; 5];
    for &w in &nbrs {
        seen[colors[w] as usize] = true;
    }
    let free = (1..=4u8).find(|&c| !seen[c as usize]);
    let mut f = VertexColoring::new(colors);
    if let Some(c) = free {
        let mut cs = f.colors().to_vec();
        cs[v] = c;
        let out = VertexColoring::new(cs);
        out.check_proper(m)?;
        return Ok(Degree4Demo {
            coloring: out,
            kempe_pair: None,
            disconnected_diagonals: 0,
        });
    }

    // All four neighbor colors distinct: at least one diagonal pair is
    // Kempe-disconnected, and switching it frees a color for v.
    let diagonals = [(nbrs[0], nbrs[2]), (nbrs[1], nbrs[3])];
    let mut disconnected = 0u8;
    let mut chosen: Option<(usize, usize)> = None;
    for &(a, b) in &diagonals {
        let pair = (f.color(a), f.color(b));
        let comp = kempe_component(m, &f, b, pair)?;
        if !comp.contains(&a) {
            disconnected += 1;
            if chosen.is_none() {
                chosen = Some((a, b));
            }
        }
    }
    let (a, b) = chosen.expect("one diagonal pair must be Kempe-disconnected");
    let pair = (f.color(a), f.color(b));
    let freed = f.color(b);
    f = kempe_switch(m, &f, b, pair)?;
    let mut cs = f.colors().to_vec();
    cs[v] = freed;
    let out = VertexColoring::new(cs);
    out.check_proper(m)?;
    Ok(Degree4Demo {
        coloring: out,
        kempe_pair: Some(pair),
        disconnected_diagonals: disconnected,
    })
}
