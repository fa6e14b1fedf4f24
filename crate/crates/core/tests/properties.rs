//! Property tests over a pool of small hosts.

use std::sync::Arc;

use proptest::prelude::*;

use rgbtiling::corpus;
use rgbtiling::embedding::{canonical_code, PlanarEmbedding, SemiMpg};
use rgbtiling::generator::enumerate_mpgs;
use rgbtiling::io;
use rgbtiling::tiling::{enumerate_r_tilings, EdgeColor, TilingMode};

fn mpg_pool() -> Vec<Arc<SemiMpg>> {
    let run = enumerate_mpgs(7, None).unwrap();
    run.classes_per_n.into_values().flatten().collect()
}

fn mixed_pool() -> Vec<Arc<SemiMpg>> {
    let mut pool = mpg_pool();
    pool.push(corpus::k4_minus_edge());
    pool.push(corpus::wheel5());
    pool.push(corpus::antiprism_annulus(5));
    pool.push(corpus::shared_edge_diamond());
    pool
}

fn relabel(m: &SemiMpg, perm: &[usize]) -> Arc<SemiMpg> {
    let rot: Vec<Vec<usize>> = (0..perm.len())
        .map(|new| {
            let old = perm.iter().position(|&x| x == new).unwrap();
            m.embedding().rotations()[old]
                .iter()
                .map(|&w| perm[w])
                .collect()
        })
        .collect();
    SemiMpg::mpg(PlanarEmbedding::from_rotations(rot).unwrap()).unwrap()
}

fn mpg_with_perm() -> impl Strategy<Value = (usize, Vec<usize>, bool)> {
    let sizes: Vec<usize> = mpg_pool().iter().map(|m| m.vertex_count()).collect();
    (0..sizes.len()).prop_flat_map(move |idx| {
        let n = sizes[idx];
        (
            Just(idx),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            any::<bool>(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_code_survives_relabeling_and_reflection((idx, perm, reflect) in mpg_with_perm()) {
        let pool = mpg_pool();
        let m = &pool[idx];
        let mut other = relabel(m, &perm);
        if reflect {
            let rot: Vec<Vec<usize>> = other
                .embedding()
                .rotations()
                .iter()
                .map(|r| r.iter().rev().copied().collect())
                .collect();
            other = SemiMpg::mpg(PlanarEmbedding::from_rotations(rot).unwrap()).unwrap();
        }
        prop_assert_eq!(canonical_code(m), canonical_code(&other));
    }

    #[test]
    fn graph_json_round_trip(idx in 0usize..27) {
        let pool = mixed_pool();
        let m = &pool[idx % pool.len()];
        let back = io::graph_from_json(&io::graph_to_json(m)).unwrap();
        prop_assert_eq!(canonical_code(&back), canonical_code(m));
        prop_assert_eq!(back.outer_facets().len(), m.outer_facets().len());
    }

    #[test]
    fn planar_code_round_trip(idx in 0usize..23) {
        let pool = mpg_pool();
        let m = &pool[idx % pool.len()];
        let bytes = io::write_planar_code(&[m.embedding()]).unwrap();
        let embeddings = io::read_planar_code(&bytes).unwrap();
        prop_assert_eq!(embeddings.len(), 1);
        let again = io::write_planar_code(&[&embeddings[0]]).unwrap();
        prop_assert_eq!(bytes, again);
    }

    #[test]
    fn r_tilings_are_valid_and_distinct(idx in 0usize..27) {
        let pool = mixed_pool();
        let m = &pool[idx % pool.len()];
        let tilings = enumerate_r_tilings(m, Some(512));
        let mut red_sets: Vec<Vec<usize>> = tilings
            .iter()
            .map(|t| {
                t.validate(TilingMode::R).unwrap();
                t.edges_of_color(EdgeColor::Red)
            })
            .collect();
        let before = red_sets.len();
        red_sets.sort();
        red_sets.dedup();
        prop_assert_eq!(red_sets.len(), before);
    }
}
