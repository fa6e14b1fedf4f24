//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its instance counts (run with `-- --nocapture` to see them).

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rgbtiling::coloring::{enumerate_4colorings, kempe_switch};
use rgbtiling::generator::enumerate_mpgs;
use rgbtiling::harness::{
    annulus_corpus, cut_semi_corpus, hunt_counterexample, mpg_corpus, shared_edge_corpus,
    verify_banks_and_matchings, verify_extension_law, verify_fundamental_v1,
    verify_one_piece_grand, verify_outer_parity, verify_round_trip, verify_stats_identities,
    CorpusHost, TheoremReport,
};

fn assert_clean(name: &str, report: &TheoremReport) {
    assert_eq!(
        report.failures, 0,
        "{name}: {} failures, first: {:#?}",
        report.failures, report.first_counterexample
    );
    assert!(report.instances > 0, "{name}: empty sweep proves nothing");
}

fn one_piece_corpus_n7() -> Vec<CorpusHost> {
    let mut hosts = mpg_corpus(7);
    hosts.extend(cut_semi_corpus(7));
    hosts
}

#[test]
fn criterion_01_generator_class_counts() {
    let start = Instant::now();
    let run = enumerate_mpgs(9, None).expect("generation up to n = 9");
    let counts = run.class_counts();
    let expected = [(4, 1), (5, 1), (6, 2), (7, 5), (8, 14), (9, 50)];
    for (n, want) in expected {
        assert_eq!(counts[&n], want, "class count at n = {n}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("PASS criterion 1: generator counts 1,1,2,5,14,50 for n=4..9 in {elapsed:?}");
}

#[test]
fn criterion_02_every_r_tiling_on_one_piece_is_grand_and_peels() {
    let start = Instant::now();
    let report = verify_one_piece_grand(&one_piece_corpus_n7());
    assert_clean("one-piece-grand", &report);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    println!(
        "PASS criterion 2: {} R-tilings grand with matching peel partitions in {elapsed:?}",
        report.instances
    );
}

#[test]
fn criterion_03_fundamental_v1_three_way_equivalence() {
    let report = verify_fundamental_v1(&one_piece_corpus_n7());
    assert_clean("fundamental-v1", &report);
    println!(
        "PASS criterion 3: colorability / RGB-tiling / odd-cycle-free R-tiling agree on {} checks",
        report.instances
    );
}

#[test]
fn criterion_04_extension_count_law() {
    let report = verify_extension_law(&mpg_corpus(7), 12);
    assert_clean("rgb-extension-count", &report);
    println!(
        "PASS criterion 4: 2^N extension law with brute-force cross-check on {} tilings",
        report.instances
    );
}

#[test]
fn criterion_05_boundary_parity() {
    let mut hosts = cut_semi_corpus(7);
    hosts.extend(annulus_corpus());
    hosts.extend(shared_edge_corpus(6, 8));
    let report = verify_outer_parity(&hosts);
    assert_clean("outer-parity", &report);
    println!(
        "PASS criterion 5: black-boundary parity and all-even/all-odd boundary counts on {} tilings",
        report.instances
    );
}

#[test]
fn criterion_06_bank_triangle_identity() {
    let mut hosts = one_piece_corpus_n7();
    hosts.extend(annulus_corpus());
    let report = verify_banks_and_matchings(&hosts);
    assert_clean("banks", &report);
    println!(
        "PASS criterion 6: triangle count equals bank sightings on every ring ({} checks)",
        report.instances
    );
}

#[test]
fn criterion_07_noncrossing_boundary_matchings() {
    let report = verify_banks_and_matchings(&cut_semi_corpus(7));
    assert_clean("matchings", &report);
    println!(
        "PASS criterion 7: entrance/exit matchings non-crossing on every R-tiled semi-MPG ({} checks)",
        report.instances
    );
}

#[test]
fn criterion_08_counterexample_hunt() {
    let start = Instant::now();
    let five_five = hunt_counterexample((5, 5), 12);
    let five_seven = hunt_counterexample((5, 7), 12);
    assert!(
        !five_five.instances.is_empty(),
        "no odd-cycle-free non-grand tiling found on (5,5) belts"
    );
    assert!(
        !five_seven.instances.is_empty(),
        "no odd-cycle-free non-grand tiling found on (5,7) belts"
    );
    for inst in five_five.instances.iter().chain(&five_seven.instances) {
        assert_eq!(inst.witness.black_count % 2, 1, "witness cycle must be odd-black");
        assert!(
            inst.parity_report_consistent,
            "witness must re-validate through the parity equivalence report"
        );
    }
    // The loop of red components the failures exhibit: at least one instance
    // with three or more components.
    assert!(five_seven
        .instances
        .iter()
        .any(|i| i.red_component_count >= 3));
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!(
        "PASS criterion 8: {} + {} odd-cycle-free non-grand instances with odd-black witnesses in {elapsed:?}",
        five_five.instances.len(),
        five_seven.instances.len()
    );
}

#[test]
fn criterion_09_degree_identities() {
    let report = verify_stats_identities(9, 7);
    assert_clean("degree-identities", &report);
    println!(
        "PASS criterion 9: Euler-degree and quadrangulation identities, bounds and table mirror on {} checks",
        report.instances
    );
}

#[test]
fn criterion_10_round_trip_and_kempe() {
    let report = verify_round_trip(&one_piece_corpus_n7());
    assert_clean("round-trip", &report);

    // 1000 randomized Kempe switches preserve properness.
    let hosts = mpg_corpus(7);
    let colorings: Vec<_> = hosts
        .iter()
        .map(|ch| enumerate_4colorings(&ch.host, None).expect("small host"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut draws = 0;
    while draws < 1000 {
        let h = rng.random_range(0..hosts.len());
        let host = &hosts[h].host;
        let f = &colorings[h][rng.random_range(0..colorings[h].len())];
        let a = rng.random_range(1..=4u8);
        let b = rng.random_range(1..=4u8);
        if a == b {
            continue;
        }
        let candidates: Vec<usize> = (0..host.vertex_count())
            .filter(|&v| f.color(v) == a || f.color(v) == b)
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let v = candidates[rng.random_range(0..candidates.len())];
        let g = kempe_switch(host, f, v, (a, b)).expect("vertex color is in the pair");
        g.check_proper(host).expect("switch must stay proper");
        draws += 1;
    }
    println!(
        "PASS criterion 10: red set fixed on {} round trips; 1000 random Kempe switches stayed proper",
        report.instances
    );
}
