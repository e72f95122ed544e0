//! Acceptance suite. Each test checks one criterion at its pinned tolerance
//! and prints a single `[PASS]`/`[FAIL]` line before asserting.
//!
//! Run with `cargo test -p gridwalk --test acceptance -- --nocapture` to see
//! the verdict lines.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gridwalk::bounds::{axis_term, lower_target, mcneil, theorem_status, upper_bound};
use gridwalk::constructions::construct_optimal;
use gridwalk::grid::{GridDims, Labeling};
use gridwalk::reference::{compare_with_conjecture, parse_bfile, ResultsCache};
use gridwalk::solver::{
    brute_force, dp_memory_estimate, multiset_brute_force, solve_exact, Method, DEFAULT_CELL_CAP,
};

const CRIT1_BUDGET: Duration = Duration::from_secs(5);
const CRIT2_BUDGET: Duration = Duration::from_secs(1);
const CRIT3_BUDGET: Duration = Duration::from_secs(120);
const CRIT4_PER_SOLVE_BUDGET: Duration = Duration::from_secs(1);
const CRIT5_4X4_BUDGET: Duration = Duration::from_secs(1);
const CRIT5_4X5_BUDGET: Duration = Duration::from_secs(60);
const CRIT5_MEMORY_LIMIT: u64 = 2 << 30;
const CRIT6_BUDGET: Duration = Duration::from_secs(60);
const CRIT7_SAMPLES: usize = 1000;
const CRIT7_MAX_SIDE: usize = 6;

const CONJECTURED_BFILE: &str = include_str!("fixtures/a179094_conjectured.txt");
const PERTURBED_BFILE: &str = include_str!("fixtures/a179094_perturbed.txt");

fn d(m: usize, n: usize) -> GridDims {
    GridDims::new(m, n).unwrap()
}

fn verdict(id: u32, ok: bool, detail: impl AsRef<str>) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {}", detail.as_ref());
}

/// Peak resident set size of this process, when the platform exposes it.
fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kib: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kib * 1024)
}

#[test]
fn criterion_1_construction_master_identity() {
    let start = Instant::now();
    let mut shapes: Vec<(usize, usize)> = (1..=40)
        .flat_map(|m| (1..=40).map(move |n| (m, n)))
        .collect();
    shapes.extend((41..=60).flat_map(|n| [(2, n), (n, 2)]));
    let failures: Vec<String> = shapes
        .iter()
        .filter_map(|&(m, n)| {
            let l = construct_optimal(d(m, n));
            let (got, want) = (l.walk_length(), lower_target(d(m, n)));
            (got != want || l.dims() != d(m, n)).then(|| format!("{m}x{n}: {got} != {want}"))
        })
        .collect();
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < CRIT1_BUDGET;
    verdict(
        1,
        ok,
        format!(
            "{} shapes, {} failures, {elapsed:.2?} (< {CRIT1_BUDGET:?})",
            shapes.len(),
            failures.len()
        ),
    );
    assert!(failures.is_empty(), "{failures:?}");
    assert!(elapsed < CRIT1_BUDGET, "{elapsed:?}");
}

#[test]
fn criterion_2_bound_sandwich() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for m in 1..=100usize {
        for n in 1..=100usize {
            let (lo, up) = (lower_target(d(m, n)), upper_bound(d(m, n)));
            let odd_even = m >= 3 && n >= 3 && (m % 2 != n % 2);
            let path_even = m.min(n) == 1 && m.max(n) % 2 == 0;
            // The single-cell grid has an empty walk: both bounds are 0.
            let single = m == 1 && n == 1;
            let expected_gap = if odd_even || path_even || single {
                0
            } else {
                1
            };
            if lo > up
                || up - lo != expected_gap
                || theorem_status(d(m, n)).is_exact() != (expected_gap == 0)
            {
                bad.push((m, n, lo, up));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < CRIT2_BUDGET;
    verdict(
        2,
        ok,
        format!("100x100 shapes, {} violations, {elapsed:.2?}", bad.len()),
    );
    assert!(bad.is_empty(), "{bad:?}");
    assert!(elapsed < CRIT2_BUDGET);
}

#[test]
fn criterion_3_oracle_equivalence() {
    let start = Instant::now();
    let shapes: Vec<(usize, usize)> = (1..=9usize)
        .flat_map(|m| {
            (1..=9usize)
                .filter(move |n| m * n <= 9)
                .map(move |n| (m, n))
        })
        .collect();
    let mut bad = Vec::new();
    for &(m, n) in &shapes {
        let dp = solve_exact(d(m, n), DEFAULT_CELL_CAP).unwrap().optimum;
        let bf = brute_force(d(m, n)).unwrap();
        if dp != bf {
            bad.push((m, n, dp, bf));
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < CRIT3_BUDGET;
    verdict(
        3,
        ok,
        format!(
            "{} shapes with mn <= 9, {} disagreements, {elapsed:.2?}",
            shapes.len(),
            bad.len()
        ),
    );
    assert!(bad.is_empty(), "{bad:?}");
    assert!(elapsed < CRIT3_BUDGET);
}

#[test]
fn criterion_4_paper_values() {
    let mut checks: Vec<(String, u64, u64, Duration)> = Vec::new();
    let mut run = |label: String, dims: GridDims, want: u64| {
        let t = Instant::now();
        let got = solve_exact(dims, DEFAULT_CELL_CAP).unwrap().optimum;
        checks.push((label, got, want, t.elapsed()));
    };
    run("3x4 exact case".into(), d(3, 4), 39);
    run("2x2 = mcneil(2)".into(), d(2, 2), mcneil(2).unwrap());
    run("1x1 empty walk".into(), d(1, 1), 0);
    for n in 2..=12u64 {
        run(format!("1x{n} path"), d(1, n as usize), n * n / 2 - 1);
    }
    let bad: Vec<_> = checks
        .iter()
        .filter(|(_, got, want, t)| got != want || *t >= CRIT4_PER_SOLVE_BUDGET)
        .collect();
    verdict(
        4,
        bad.is_empty(),
        format!("{} solves, {} off-value or slow", checks.len(), bad.len()),
    );
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn criterion_5_conjecture_checks() {
    let r33 = solve_exact(d(3, 3), DEFAULT_CELL_CAP).unwrap();
    let t = Instant::now();
    let r44 = solve_exact(d(4, 4), DEFAULT_CELL_CAP).unwrap();
    let t44 = t.elapsed();
    let t = Instant::now();
    let r45 = solve_exact(d(4, 5), DEFAULT_CELL_CAP).unwrap();
    let t45 = t.elapsed();
    let mem45 = dp_memory_estimate(20);
    let rss = peak_rss_bytes();

    let ok33 = (23..=24).contains(&r33.optimum);
    let ok44 = (61..=62).contains(&r44.optimum);
    let s45 = theorem_status(d(4, 5));
    let ok45 = (s45.lower_target..=s45.upper).contains(&r45.optimum);
    let mem_ok = mem45 < CRIT5_MEMORY_LIMIT && rss.is_none_or(|b| b < CRIT5_MEMORY_LIMIT);
    let ok = ok33 && ok44 && ok45 && t44 < CRIT5_4X4_BUDGET && t45 < CRIT5_4X5_BUDGET && mem_ok;
    verdict(
        5,
        ok,
        format!(
            "M(3x3)={} (conjecture 23: {}), M(4x4)={} (conjecture 61: {}) in {t44:.2?}, \
             M(4x5)={} in [{}, {}] in {t45:.2?}, table {} MiB, peak rss {:?} MiB",
            r33.optimum,
            if r33.optimum == 23 {
                "equal"
            } else {
                "differs"
            },
            r44.optimum,
            if r44.optimum == 61 {
                "equal"
            } else {
                "differs"
            },
            r45.optimum,
            s45.lower_target,
            s45.upper,
            mem45 >> 20,
            rss.map(|b| b >> 20),
        ),
    );
    assert!(ok33 && ok44 && ok45);
    assert!(t44 < CRIT5_4X4_BUDGET, "{t44:?}");
    assert!(t45 < CRIT5_4X5_BUDGET, "{t45:?}");
    assert!(mem_ok);
}

#[test]
fn criterion_6_multiset_lemma_oracle() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for copies in 1..=10usize {
        for range in (1..=10usize).filter(|r| copies * r <= 10) {
            count += 1;
            let formula = axis_term(copies as u64, range as u64);
            let oracle = multiset_brute_force(copies, range).unwrap();
            if formula != oracle {
                bad.push(format!(
                    "({copies},{range}): formula {formula}, enumeration {oracle}"
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < CRIT6_BUDGET;
    verdict(
        6,
        ok,
        format!("{count} pairs, mismatches {bad:?}, {elapsed:.2?}"),
    );
    assert!(
        bad.is_empty(),
        "axis term disagrees with enumeration: {bad:?}"
    );
    assert!(elapsed < CRIT6_BUDGET);
}

#[test]
fn criterion_7_symmetry_and_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6772_6964);
    let mut failures = Vec::new();
    for sample in 0..CRIT7_SAMPLES {
        let dims = d(
            rng.gen_range(1..=CRIT7_MAX_SIDE),
            rng.gen_range(1..=CRIT7_MAX_SIDE),
        );
        let mut labels: Vec<u64> = (1..=dims.cell_count() as u64).collect();
        labels.shuffle(&mut rng);
        let l = Labeling::new(dims, labels).unwrap();
        let len = l.walk_length();
        let text = l.to_text();
        let reparsed = Labeling::parse(&text).unwrap();
        if l.transpose().walk_length() != len
            || l.reverse_labels().walk_length() != len
            || len > upper_bound(dims)
            || reparsed != l
            || reparsed.to_text() != text
        {
            failures.push((sample, dims));
        }
    }

    let mut cache = ResultsCache::new();
    for (m, n) in [(2, 2), (2, 3), (3, 3), (4, 3), (1, 7)] {
        let r = solve_exact(d(m, n), DEFAULT_CELL_CAP).unwrap();
        cache
            .insert(
                d(m, n),
                r.optimum,
                Method::BitmaskDP,
                1_700_000_000 + m as u64,
            )
            .unwrap();
    }
    let first = cache.to_text();
    let back = ResultsCache::from_text(&first).unwrap();
    let cache_ok = back == cache && back.to_text() == first;

    let ok = failures.is_empty() && cache_ok;
    verdict(
        7,
        ok,
        format!(
            "{CRIT7_SAMPLES} random labelings, {} failures, cache round trip stable: {cache_ok}",
            failures.len()
        ),
    );
    assert!(failures.is_empty(), "{failures:?}");
    assert!(cache_ok);
}

#[test]
fn criterion_8_oeis_comparison() {
    let clean = compare_with_conjecture(&parse_bfile(CONJECTURED_BFILE).unwrap());
    let perturbed = compare_with_conjecture(&parse_bfile(PERTURBED_BFILE).unwrap());
    let ok = clean.rows.len() == 9
        && clean.matches() == 9
        && perturbed.rows.len() == 9
        && perturbed.mismatches() == 1;
    verdict(
        8,
        ok,
        format!(
            "fixture {}/{} match; perturbed fixture {} mismatch(es)",
            clean.matches(),
            clean.rows.len(),
            perturbed.mismatches()
        ),
    );
    assert!(ok);
}
