//! Exit criteria for the library and harness, one test per criterion. Each
//! test prints a single `PASS`/`FAIL` line with the measured values.

mod support;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use hboost::grid::{rank_report, run_grid, run_single, GridSpec, GroupBy};
use hboost::io::load_dataset;
use hboost_core::{
    agglomerate, condensed_len, cophenetic, cpcc, hboost, hboost_with_observer, pairwise_euclidean,
    power_mean, standardize, CombineOperator, CondensedMatrix, DataMatrix, Dendrogram,
    LinkageMethod, Merge, RunConfig,
};
use rand::Rng as _;
use support::*;

fn report(name: &str, ok: bool, detail: String) {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

fn wine() -> DataMatrix {
    load_dataset(WINE, true, Some(13)).unwrap()
}

fn ensemble_config(seed: u64) -> RunConfig {
    RunConfig {
        clusterer: LinkageMethod::Centroid,
        combiner: CombineOperator::Min,
        recovery: LinkageMethod::Average,
        iterations: 200,
        subsample_fraction: 0.2,
        seed,
        ..RunConfig::default()
    }
}

#[test]
fn linkage_matches_naive_oracle() {
    let start = Instant::now();
    let mut rng = rng(0xA11);
    let mut mismatches = Vec::new();
    let mut worst = 0.0f64;
    for method in LinkageMethod::ALL {
        for case in 0..100 {
            let n = rng.random_range(3..=10);
            let points = unit_cube_points(&mut rng, n, 3);
            let expected = naive_agglomerate(&points, method);
            let data = DataMatrix::from_rows(&points).unwrap();
            let got = agglomerate(&pairwise_euclidean(&data), method).unwrap();
            for (m, &(l, r, h, s)) in got.merges().iter().zip(&expected) {
                worst = worst.max((m.height - h).abs());
                if (m.left, m.right, m.size) != (l, r, s) || (m.height - h).abs() > 1e-9 {
                    mismatches.push(format!("{method} case {case}"));
                    break;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        "linkage oracle equivalence (7 methods x 100 instances)",
        mismatches.is_empty() && secs < 5.0,
        format!("mismatches {mismatches:?}, max height error {worst:.3e}, {secs:.2}s"),
    );
}

#[test]
fn cophenetic_matches_lca_enumeration() {
    let mut rng = rng(0xC0FE);
    let mut bad = 0;
    for _ in 0..100 {
        let n = rng.random_range(2..=10);
        let merges = random_merges(&mut rng, n, false);
        let dend = Dendrogram::from_merges(
            n,
            merges
                .iter()
                .map(|&(left, right, height, size)| Merge {
                    left,
                    right,
                    height,
                    size,
                })
                .collect(),
        )
        .unwrap();
        if cophenetic(&dend) != lca_cophenetic(n, &merges) {
            bad += 1;
        }
    }
    report(
        "cophenetic equals LCA enumeration (100 dendrograms)",
        bad == 0,
        format!("{bad} mismatches"),
    );
}

#[test]
fn ultrametric_is_a_fixed_point() {
    let mut rng = rng(0x0817);
    let mut worst = f64::INFINITY;
    for _ in 0..100 {
        let n = rng.random_range(3..=10);
        let u = lca_cophenetic(n, &random_merges(&mut rng, n, true));
        for method in [
            LinkageMethod::Single,
            LinkageMethod::Complete,
            LinkageMethod::Average,
        ] {
            let c = cpcc(&u, &cophenetic(&agglomerate(&u, method).unwrap())).unwrap();
            worst = worst.min(c);
        }
    }
    report(
        "ultrametric CPCC under single/complete/average",
        (worst - 1.0).abs() <= 1e-9,
        format!("min CPCC {worst:.12}"),
    );
}

#[test]
fn wine_baselines() {
    let start = Instant::now();
    let d = wine();
    let classes: BTreeSet<&String> = d.labels().unwrap().iter().collect();
    let average = run_single(&d, LinkageMethod::Average, true)
        .unwrap()
        .cpcc
        .unwrap();
    let centroid = run_single(&d, LinkageMethod::Centroid, true)
        .unwrap()
        .cpcc
        .unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok = (d.n_samples(), d.n_features(), classes.len()) == (178, 13, 3)
        && (average - 0.759).abs() <= 0.05
        && (centroid - 0.755).abs() <= 0.05
        && secs < 5.0;
    report(
        "Wine single-method baselines",
        ok,
        format!(
            "N={} F={} classes={}, average {average:.6} (target 0.759), centroid {centroid:.6} (target 0.755), {secs:.2}s",
            d.n_samples(),
            d.n_features(),
            classes.len()
        ),
    );
}

/// Runs the five ensemble seeds once, checking operator ordering on a 1%
/// sample of pairs along the way.
fn ensemble_runs() -> (Vec<f64>, Vec<f64>, usize, usize) {
    let d = wine();
    let n_pairs = condensed_len(d.n_samples());
    let mut pick = rng(0x5A3);
    let mut checked = 0;
    let mut violations = 0;
    let mut scores = Vec::new();
    let mut secs = Vec::new();
    for seed in 1..=5 {
        let start = Instant::now();
        let out = hboost_with_observer(&d, &ensemble_config(seed), |state| {
            let acc = state.accumulator();
            for _ in 0..n_pairs / 100 {
                let p = pick.random_range(0..n_pairs);
                let vals = [
                    CombineOperator::Min,
                    CombineOperator::Average,
                    CombineOperator::Max,
                ]
                .map(|op| acc.value_at(p, op));
                if let [Some(lo), Some(mid), Some(hi)] = vals {
                    checked += 1;
                    if !(lo <= mid && mid <= hi) {
                        violations += 1;
                    }
                }
            }
        })
        .unwrap();
        secs.push(start.elapsed().as_secs_f64());
        scores.push(out.cpcc());
    }
    (scores, secs, checked, violations)
}

#[test]
fn wine_ensemble_centroid_min_average() {
    let d = wine();
    let baseline = run_single(&d, LinkageMethod::Centroid, true)
        .unwrap()
        .cpcc
        .unwrap();
    let (scores, secs, _, _) = ensemble_runs();
    let med = median(&mut scores.clone());
    let wins = scores.iter().filter(|&&s| s >= baseline).count();
    let slowest = secs.iter().copied().fold(0.0, f64::max);
    report(
        "Wine ensemble centroid/min/average, 5 seeds",
        (med - 0.767).abs() <= 0.05 && wins >= 3 && slowest < 120.0,
        format!(
            "median {med:.6} (target 0.767), per-seed {scores:.6?}, {wins}/5 >= baseline {baseline:.6}, slowest {slowest:.2}s"
        ),
    );
}

#[test]
fn full_grid_shape() {
    let d = wine();
    let start = Instant::now();
    let results = run_grid(&d, &GridSpec::full(vec![1]), None).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let failed = results.iter().filter(|r| r.cpcc.is_none()).count();
    let table = rank_report(&results, GroupBy::Clusterer).unwrap();
    let runs: Vec<usize> = table.rows.iter().map(|r| r.runs + r.failed).collect();
    report(
        "full grid on Wine (1 seed)",
        results.len() == 126 && table.rows.len() == 7 && runs.iter().all(|&r| r == 18),
        format!(
            "{} rows ({failed} failed), {} clusterer groups with runs {runs:?}, {secs:.1}s",
            results.len(),
            table.rows.len()
        ),
    );
}

#[test]
fn operator_ordering_during_ensemble() {
    let (_, _, checked, violations) = ensemble_runs();
    report(
        "min <= average <= max on sampled pairs",
        checked > 0 && violations == 0,
        format!("{checked} pair checks, {violations} violations"),
    );
}

#[test]
fn power_mean_limits() {
    let mut rng = rng(0xBE7A);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..1000 {
        let m = rng.random_range(1..=20);
        let values: Vec<f64> = (0..m).map(|_| 0.01 + 10.0 * rng.random::<f64>()).collect();
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let up = power_mean(&values, CombineOperator::Power(50.0)).unwrap();
        let down = power_mean(&values, CombineOperator::Power(-50.0)).unwrap();
        let err = ((up - hi).abs() / hi).max((down - lo).abs() / lo);
        worst = worst.max(err);
        if err >= 1e-3 {
            failures += 1;
        }
    }
    report(
        "power mean beta=+-50 within 1e-3 of max/min",
        failures == 0,
        format!("{failures}/1000 multisets over tolerance, worst relative error {worst:.3e}"),
    );
}

#[test]
fn boost_cli_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    std::fs::write(
        &config,
        "clusterer = centroid\ncombiner = min\nrecovery = average\niterations = 40\n",
    )
    .unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hboost"))
            .args([
                "--seed",
                "17",
                "boost",
                "--data",
                WINE,
                "--header",
                "--label-column",
                "13",
                "--trace",
            ])
            .arg("--config")
            .arg(&config)
            .arg("--out-dir")
            .arg(&out)
            .output()
            .unwrap();
        assert!(
            status.status.success(),
            "{}",
            String::from_utf8_lossy(&status.stderr)
        );
        ["trace.jsonl", "consensus.bin", "hstar.txt"].map(|f| std::fs::read(out.join(f)).unwrap())
    };
    let (a, b) = (run("first"), run("second"));
    let same: Vec<bool> = a
        .iter()
        .zip(&b)
        .map(|(x, y)| x == y && !x.is_empty())
        .collect();
    report(
        "boost output bit-identical across invocations",
        same.iter().all(|&s| s),
        format!("trace/consensus/H* identical: {same:?}"),
    );
}

#[test]
fn single_full_iteration_degenerates_to_plain_linkage() {
    let d = wine();
    let plain_input = pairwise_euclidean(&standardize(&d));
    let mut lines = Vec::new();
    let mut ok = true;
    for method in LinkageMethod::ALL.into_iter().filter(|m| m.is_monotone()) {
        let cfg = RunConfig {
            clusterer: method,
            combiner: CombineOperator::Average,
            recovery: method,
            iterations: 1,
            subsample_fraction: 1.0,
            ..RunConfig::default()
        };
        let boosted = hboost(&d, &cfg).unwrap().dendrogram;
        let plain = agglomerate(&plain_input, method).unwrap();
        let err = boosted
            .heights()
            .zip(plain.heights())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ok &= err <= 1e-9;
        lines.push(format!("{method} {err:.3e}"));
    }
    report(
        "T=1 full-sample run reproduces plain linkage heights",
        ok,
        format!("max height error: {}", lines.join(", ")),
    );
}

#[test]
fn consensus_dump_restores() {
    // keeps the little-endian dump format honest alongside the CLI check
    let out = hboost(
        &wine(),
        &RunConfig {
            iterations: 3,
            ..ensemble_config(2)
        },
    )
    .unwrap();
    let bytes = out.consensus.to_le_bytes();
    assert_eq!(
        CondensedMatrix::from_le_bytes(&bytes).unwrap(),
        out.consensus
    );
}
