//! The acceptance gate: every criterion of the build contract, one test per
//! criterion, each printing a single pass/fail line (run with
//! `cargo test --test acceptance -- --nocapture` to see them all).
//!
//! Expected values come from independent oracles: exhaustive enumeration over
//! the model group, closed-form subset counts, and symbolic reduction. No
//! expected value is read back from the implementation under test.

use std::time::{Duration, Instant};

use ordinary::checks::{self, all_passed};
use ordinary::dual_graph::build_graph;
use ordinary::elliptic::{count_ordinary_group, exact_cyclic_config, float_cyclic_config};
use ordinary::scalar::Rat;
use ordinary::structure::{binomial, count_ordinary, generate_nrc_config};

fn report(criterion: &str, passed: bool, detail: &str) {
    println!(
        "[{}] {criterion}: {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "{criterion}: {detail}");
}

/// Independent oracle: 5-subsets of Z/n summing to zero, i.e. the predicted
/// number of 5-point hyperplanes of the order-n cyclic configuration.
fn five_subset_zero_sums(n: usize) -> u64 {
    let mut cnt = 0u64;
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    for e in (d + 1)..n {
                        if (a + b + c + d + e) % n == 0 {
                            cnt += 1;
                        }
                    }
                }
            }
        }
    }
    cnt
}

#[test]
fn criterion_1_fifth_point_correspondence() {
    let start = Instant::now();
    let results = checks::lemma1_suite(10, 1000, 100, 0).unwrap();
    let elapsed = start.elapsed();
    let ok = all_passed(&results) && elapsed < Duration::from_secs(30);
    report(
        "criterion 1 (fifth-point correspondence, exact)",
        ok,
        &format!(
            "1000 quadruples on 10 curves, 100 eliminant agreements, {:.2?}",
            elapsed
        ),
    );
}

#[test]
fn criterion_2_counting_bound() {
    let start = Instant::now();
    // frozen oracle values from exhaustive enumeration
    assert_eq!(count_ordinary_group(5), 0);
    assert_eq!(count_ordinary_group(6), 10);
    assert_eq!(count_ordinary_group(7), 20);
    assert_eq!(count_ordinary_group(12), 165);
    let results = checks::counting_suite().unwrap();
    let elapsed = start.elapsed();
    let ok = all_passed(&results) && elapsed < Duration::from_secs(60);
    report(
        "criterion 2 (cyclic counting bound)",
        ok,
        &format!(
            "order-6 geometric = 10 = group model; group(7) = 20 <= 35; odd n <= 101 bound holds; {:.2?}",
            elapsed
        ),
    );
}

#[test]
fn criterion_3_curve_quadrics() {
    let results = checks::curve_quadrics_suite(20, 0).unwrap();
    report(
        "criterion 3 (curve quadric basis, exact)",
        all_passed(&results),
        "symbolic pullbacks vanish for 20 random curves; span equals 15-point nullspace",
    );
}

#[test]
fn criterion_4_nrc_counts() {
    let mut ok = true;
    let mut details = Vec::new();
    for n in 7..=12usize {
        let cfg = generate_nrc_config::<Rat>(n).unwrap();
        let census = count_ordinary(&cfg).unwrap();
        let expect = binomial(n - 1, 3) as u64;
        let bound = ((n - 1) * (n - 2) * (n - 3) / 6) as u64;
        ok &= census.ordinary == expect && census.ordinary <= bound;
        details.push(format!("n={n}:{}", census.ordinary));
    }
    report(
        "criterion 4 (normal rational curve counts)",
        ok,
        &format!("C(n-1,3) exactly: {}", details.join(" ")),
    );
}

#[test]
fn criterion_5_euler_identities() {
    let start = Instant::now();
    let stats = checks::standard_graph_stats(20).unwrap();
    let mut ok = stats.len() == 3 + 6 + 8;
    for (label, s) in &stats {
        ok &= s.identity_checks.all_hold();
        // independent oracle for the elliptic rows: the group model predicts
        // both histogram entries
        if let Some(n) = label
            .strip_prefix("elliptic-n")
            .map(|t| t.trim_end_matches("-float"))
            .and_then(|t| t.parse::<usize>().ok())
        {
            ok &= s.v_histogram.get(&4).copied().unwrap_or(0) == count_ordinary_group(n);
            ok &= s.v_histogram.get(&5).copied().unwrap_or(0) == five_subset_zero_sums(n);
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(300);
    report(
        "criterion 5 (Euler identities)",
        ok,
        &format!(
            "{} configurations (random <= 10, exact elliptic <= 12, float elliptic <= 20), {:.2?}",
            stats.len(),
            elapsed
        ),
    );
}

#[test]
fn criterion_6_bad_edge_bounds() {
    let stats = checks::standard_graph_stats(20).unwrap();
    let mut ok = true;
    let mut worst_slack = f64::INFINITY;
    for (_, s) in &stats {
        ok &= s.bad_edges <= s.bad_edge_bound;
        ok &= s.slightly_bad_edges <= s.slightly_bad_edge_bound;
        if s.bad_edge_bound > 0 {
            worst_slack = worst_slack.min(s.bad_edge_bound as f64 / s.bad_edges.max(1) as f64);
        }
    }
    report(
        "criterion 6 (bad-edge bounds)",
        ok,
        &format!(
            "bad <= 48 K n^3 and slightly bad <= 1872 K n^3 on all {} graphs; tightest slack factor {:.2}",
            stats.len(),
            worst_slack
        ),
    );
}

#[test]
fn criterion_7_grid_lemmas() {
    let results = checks::grids_suite(25, 0).unwrap();
    report(
        "criterion 7 (11-point and 10-point lemmas)",
        all_passed(&results),
        "25 cyclic grids: dimension 5 and leave-one-out hold; 25 random 10-point sets fail",
    );
}

#[test]
fn criterion_8_segment_grids() {
    let results = checks::segment_grid_suite(16, 2).unwrap();
    let detail = results
        .iter()
        .map(|r| r.detail.clone())
        .collect::<Vec<_>>()
        .join("; ");
    report(
        "criterion 8 (segment grids on the five quadrics)",
        all_passed(&results),
        &detail,
    );
}

#[test]
fn criterion_9_structure_pipeline() {
    let results = checks::detect_suite().unwrap();
    let detail = results
        .iter()
        .map(|r| format!("{}={}", r.name, r.passed))
        .collect::<Vec<_>>()
        .join(" ");
    report(
        "criterion 9 (structure pipeline)",
        all_passed(&results),
        &detail,
    );
}

#[test]
fn criterion_10_arc_conclusion() {
    let results = checks::glynn_suite().unwrap();
    report(
        "criterion 10 (arc conclusion)",
        all_passed(&results),
        "elliptic configs: max hyperplane incidence exactly 5 = d+1, no real-pair basis quadric",
    );
}

#[test]
fn float_histograms_match_group_model() {
    // supporting evidence for criteria 5 and 6: the float pipeline at n = 13
    // and 20 reproduces the exact group-model histograms
    for n in [13usize, 20] {
        let cfg = float_cyclic_config(n).unwrap();
        let g = build_graph(&cfg.config).unwrap();
        let classes = g.classify_edges().unwrap();
        let s = g.stats_and_bounds(&classes).unwrap();
        assert_eq!(s.v_histogram.get(&4).copied().unwrap_or(0), count_ordinary_group(n));
        assert_eq!(
            s.v_histogram.get(&5).copied().unwrap_or(0),
            five_subset_zero_sums(n)
        );
    }
}

#[test]
fn exact_twelve_matches_frozen_census() {
    let cfg = exact_cyclic_config::<Rat>(12).unwrap();
    let g = build_graph(&cfg.config).unwrap();
    let classes = g.classify_edges().unwrap();
    let s = g.stats_and_bounds(&classes).unwrap();
    assert_eq!(s.edge_count, 1320);
    assert_eq!(s.face_count, 2376);
    assert_eq!(s.good_edges, 253);
    assert_eq!(s.rather_good_edges, 0);
    assert_eq!(s.f_histogram.get(&3), Some(&1632));
}
