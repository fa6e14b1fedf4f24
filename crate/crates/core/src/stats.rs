//! Degree statistics on MPGs and on the quadrangulation left after deleting
//! one color of an RGB-tiling.

use serde::Serialize;
use thiserror::Error;

use crate::embedding::{PlanarEmbedding, SemiMpg};
use crate::tiling::{EdgeColor, Tiling, TilingMode};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("host is not an MPG")]
    NotAnMpg,
    #[error("tiling is not a valid RGB tiling: {0}")]
    NotRgb(String),
    #[error("face {0} of the color-deleted embedding has length {1}, expected 4")]
    NonQuadFace(usize, usize),
}

/// Vertex counts by degree, with the ambient V/E/F totals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeTable {
    pub v_k: Vec<(usize, usize)>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl DegreeTable {
    pub fn count(&self, k: usize) -> usize {
        self.v_k
            .iter()
            .find(|&&(deg, _)| deg == k)
            .map(|&(_, c)| c)
            .unwrap_or(0)
    }
}

pub fn degree_table(emb: &PlanarEmbedding) -> DegreeTable {
    let max_deg = (0..emb.vertex_count())
        .map(|v| emb.degree(v))
        .max()
        .unwrap_or(0);
    // Row-complete from degree 2 up, zero rows included.
    let mut v_k: Vec<(usize, usize)> = (2..=max_deg.max(2)).map(|k| (k, 0)).collect();
    for v in 0..emb.vertex_count() {
        let d = emb.degree(v);
        if let Some(slot) = v_k.iter_mut().find(|(k, _)| *k == d) {
            slot.1 += 1;
        }
    }
    DegreeTable {
        v_k,
        vertices: emb.vertex_count(),
        edges: emb.edge_count(),
        faces: emb.face_count(),
    }
}

/// Residual of the Euler-derived degree identity on an MPG:
/// `4#V2 + 3#V3 + 2#V4 + #V5 - 12 - sum_{k>=7} (k-6)#Vk`; zero on every MPG.
pub fn euler_degree_residual(m: &SemiMpg) -> Result<i64, StatsError> {
    if !m.is_mpg() {
        return Err(StatsError::NotAnMpg);
    }
    let table = degree_table(m.embedding());
    let lhs = 4 * table.count(2) as i64
        + 3 * table.count(3) as i64
        + 2 * table.count(4) as i64
        + table.count(5) as i64;
    let rhs: i64 = 12
        + table
            .v_k
            .iter()
            .filter(|&&(k, _)| k >= 7)
            .map(|&(k, c)| (k as i64 - 6) * c as i64)
            .sum::<i64>();
    Ok(lhs - rhs)
}

/// Per-vertex degree split of one color against the rest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedDegreeTable {
    /// (deg, remaining-degree j) -> count, rows complete over the feasible
    /// range of j.
    pub bar: Vec<(usize, usize, usize)>,
    /// (deg, colored-degree i) -> count, rows complete over the feasible
    /// range of i.
    pub colored: Vec<(usize, usize, usize)>,
}

impl RedDegreeTable {
    pub fn bar_count(&self, k: usize, j: usize) -> usize {
        self.bar
            .iter()
            .find(|&&(a, b, _)| a == k && b == j)
            .map(|&(_, _, c)| c)
            .unwrap_or(0)
    }

    pub fn colored_count(&self, k: usize, i: usize) -> usize {
        self.colored
            .iter()
            .find(|&&(a, b, _)| a == k && b == i)
            .map(|&(_, _, c)| c)
            .unwrap_or(0)
    }

    /// The mirror identity between the two tables: the number of vertices
    /// with degree k and colored-degree i equals the number with degree k
    /// and remaining-degree k - i.
    pub fn cross_identity_holds(&self) -> bool {
        self.colored
            .iter()
            .all(|&(k, i, c)| self.bar_count(k, k - i) == c)
            && self
                .bar
                .iter()
                .all(|&(k, j, c)| self.colored_count(k, k - j) == c)
    }
}

fn colored_degree(t: &Tiling, v: usize, color: EdgeColor) -> usize {
    let emb = t.host().embedding();
    emb.neighbors(v)
        .iter()
        .filter(|&&w| t.color(emb.edge_id(v, w).unwrap()) == color)
        .count()
}

pub fn red_degree_table(t: &Tiling, color: EdgeColor) -> RedDegreeTable {
    let emb = t.host().embedding();
    let n = emb.vertex_count();
    let max_deg = (0..n).map(|v| emb.degree(v)).max().unwrap_or(0);
    let mut bar = Vec::new();
    let mut colored = Vec::new();
    for k in 2..=max_deg.max(2) {
        let odd = k % 2;
        for i in odd..=k / 2 {
            colored.push((k, i, 0));
        }
        for j in k.div_ceil(2)..=(k - odd) {
            bar.push((k, j, 0));
        }
    }
    for v in 0..n {
        let k = emb.degree(v);
        let i = colored_degree(t, v, color);
        let j = k - i;
        if let Some(slot) = colored.iter_mut().find(|(a, b, _)| *a == k && *b == i) {
            slot.2 += 1;
        } else {
            colored.push((k, i, 1));
        }
        if let Some(slot) = bar.iter_mut().find(|(a, b, _)| *a == k && *b == j) {
            slot.2 += 1;
        } else {
            bar.push((k, j, 1));
        }
    }
    bar.sort_unstable();
    colored.sort_unstable();
    RedDegreeTable { bar, colored }
}

/// The embedding left after deleting one color from an RGB-tiling on an
/// MPG, together with the quadrangulation identity residual
/// `2#V2 + #V3 - 8 - sum_{j>=5} (j-4)#Vj` and the count cross-checks.
#[derive(Clone, Debug)]
pub struct Quadrangulation {
    pub embedding: PlanarEmbedding,
    pub residual: i64,
    pub table: DegreeTable,
    pub counts_consistent: bool,
}

pub fn black_quadrangulation(t: &Tiling, drop: EdgeColor) -> Result<Quadrangulation, StatsError> {
    let host = t.host();
    if !host.is_mpg() {
        return Err(StatsError::NotAnMpg);
    }
    t.validate(TilingMode::Rgb)
        .map_err(|e| StatsError::NotRgb(e.to_string()))?;
    let emb = host.embedding();
    let rot: Vec<Vec<usize>> = (0..emb.vertex_count())
        .map(|v| {
            emb.neighbors(v)
                .iter()
                .copied()
                .filter(|&w| t.color(emb.edge_id(v, w).unwrap()) != drop)
                .collect()
        })
        .collect();
    let quad =
        PlanarEmbedding::from_rotations(rot).map_err(|e| StatsError::NotRgb(e.to_string()))?;
    for (fid, face) in quad.faces().iter().enumerate() {
        if face.len() != 4 {
            return Err(StatsError::NonQuadFace(fid, face.len()));
        }
    }
    let table = degree_table(&quad);
    let lhs = 2 * table.count(2) as i64 + table.count(3) as i64;
    let rhs: i64 = 8
        + table
            .v_k
            .iter()
            .filter(|&&(j, _)| j >= 5)
            .map(|&(j, c)| (j as i64 - 4) * c as i64)
            .sum::<i64>();
    let counts_consistent = quad.vertex_count() == emb.vertex_count()
        && 3 * quad.edge_count() == 2 * emb.edge_count()
        && 2 * quad.face_count() == emb.face_count();
    Ok(Quadrangulation {
        embedding: quad,
        residual: lhs - rhs,
        table,
        counts_consistent,
    })
}

/// One violation of the per-vertex degree bounds for an RGB-tiling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    pub vertex: usize,
    pub color: char,
    pub degree: usize,
    pub colored_degree: usize,
}

/// Checks, for every vertex and every color c of an RGB-tiling on an MPG,
/// that `delta(deg odd) <= deg_c(v) <= floor(deg/2)` and the mirrored bound
/// for the remaining degree.
pub fn check_degree_bounds(t: &Tiling) -> Result<Vec<BoundViolation>, StatsError> {
    let host = t.host();
    if !host.is_mpg() {
        return Err(StatsError::NotAnMpg);
    }
    t.validate(TilingMode::Rgb)
        .map_err(|e| StatsError::NotRgb(e.to_string()))?;
    let emb = host.embedding();
    let mut out = Vec::new();
    for v in 0..emb.vertex_count() {
        let k = emb.degree(v);
        let delta = k % 2;
        for color in [EdgeColor::Red, EdgeColor::Green, EdgeColor::Blue] {
            let i = colored_degree(t, v, color);
            let j = k - i;
            let ok = i >= delta && i <= k / 2 && j >= k.div_ceil(2) && j <= k - delta;
            if !ok {
                out.push(BoundViolation {
                    vertex: v,
                    color: color.letter(),
                    degree: k,
                    colored_degree: i,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{coloring_to_rgb, first_4coloring};
    use crate::corpus;
    use crate::tiling::{enumerate_r_tilings, extend_to_rgb};

    #[test]
    fn euler_identity_on_platonic_triangulations() {
        let ico = corpus::icosahedron();
        assert_eq!(degree_table(ico.embedding()).count(5), 12);
        assert_eq!(euler_degree_residual(&ico).unwrap(), 0);

        let k4 = corpus::k4();
        assert_eq!(degree_table(k4.embedding()).count(3), 4);
        assert_eq!(euler_degree_residual(&k4).unwrap(), 0);

        let octa = corpus::octahedron();
        assert_eq!(degree_table(octa.embedding()).count(4), 6);
        assert_eq!(euler_degree_residual(&octa).unwrap(), 0);
    }

    #[test]
    fn degree_table_invariants() {
        let m = corpus::stacked_tower(9);
        let table = degree_table(m.embedding());
        let total: usize = table.v_k.iter().map(|&(_, c)| c).sum();
        assert_eq!(total, table.vertices);
        let weighted: usize = table.v_k.iter().map(|&(k, c)| k * c).sum();
        assert_eq!(weighted, 2 * table.edges);
    }

    #[test]
    fn k4_quadrangulation_drop_red() {
        let m = corpus::k4();
        let f = crate::coloring::VertexColoring::new(vec![1, 2, 3, 4]);
        let t = coloring_to_rgb(&m, &f).unwrap();
        let q = black_quadrangulation(&t, EdgeColor::Red).unwrap();
        assert_eq!(q.embedding.vertex_count(), 4);
        assert_eq!(q.embedding.edge_count(), 4);
        assert_eq!(q.embedding.face_count(), 2);
        assert_eq!(q.residual, 0);
        assert!(q.counts_consistent);
        // 2*#V2 = 8 on the 4-cycle.
        assert_eq!(q.table.count(2), 4);
    }

    #[test]
    fn octahedron_quadrangulations_all_colors() {
        let m = corpus::octahedron();
        for t in enumerate_r_tilings(&m, None) {
            for ext in extend_to_rgb(&t) {
                for drop in [EdgeColor::Red, EdgeColor::Green, EdgeColor::Blue] {
                    let q = black_quadrangulation(&ext, drop).unwrap();
                    assert_eq!(q.residual, 0);
                    assert!(q.counts_consistent);
                }
            }
        }
    }

    #[test]
    fn icosahedron_quadrangulation_from_oracle_coloring() {
        let m = corpus::icosahedron();
        let f = first_4coloring(&m).unwrap();
        let t = coloring_to_rgb(&m, &f).unwrap();
        let q = black_quadrangulation(&t, EdgeColor::Red).unwrap();
        assert_eq!(q.residual, 0);
        assert!(q.counts_consistent);
    }

    #[test]
    fn degree_bounds_hold_and_tables_mirror() {
        let m = corpus::octahedron();
        for t in enumerate_r_tilings(&m, None) {
            for ext in extend_to_rgb(&t) {
                assert!(check_degree_bounds(&ext).unwrap().is_empty());
                for color in [EdgeColor::Red, EdgeColor::Green, EdgeColor::Blue] {
                    let table = red_degree_table(&ext, color);
                    assert!(table.cross_identity_holds());
                    // Row sums reproduce the plain degree table.
                    let plain = degree_table(m.embedding());
                    for &(k, c) in &plain.v_k {
                        let row: usize = table
                            .colored
                            .iter()
                            .filter(|&&(a, _, _)| a == k)
                            .map(|&(_, _, x)| x)
                            .sum();
                        assert_eq!(row, c);
                    }
                }
            }
        }
    }

    #[test]
    fn degree5_vertices_have_red_degree_one_or_two() {
        let m = corpus::icosahedron();
        let f = first_4coloring(&m).unwrap();
        let t = coloring_to_rgb(&m, &f).unwrap();
        for v in 0..12 {
            let i = super::colored_degree(&t, v, EdgeColor::Red);
            assert!(i == 1 || i == 2, "degree-5 vertex has red degree {i}");
        }
    }
}
