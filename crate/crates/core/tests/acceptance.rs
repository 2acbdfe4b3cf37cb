//! Acceptance gate: ten criteria, one test each, every test printing a
//! single PASS line with its case count and wall time. Tolerances and
//! time budgets are pinned here; exact means exact — symbolic equality
//! of canonical forms, no epsilons.

use dnci_core::algebra::Signature;
use dnci_core::phase::{Angle, AngleAssignment, Mode};
use dnci_core::representation::Truncation;
use dnci_core::suites::{
    confluence_suite, deformation_suite, embedding_suite, injectivity_suite, intertwiner_suite,
    ktheory_table_suite, norms_suite, relations_suite, stinespring_suite, theta_suite, Report,
    SuiteContext, NUMERIC_TOLERANCE,
};
use num_rational::BigRational;
use std::time::{Duration, Instant};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn sig(n: usize, l: usize, pairs: &[(usize, usize, (i64, i64))]) -> Signature {
    let angles = AngleAssignment::exact(
        n,
        pairs
            .iter()
            .map(|&(i, j, (p, q))| (i, j, rat(p, q)))
            .collect(),
    )
    .expect("valid angles");
    Signature::new(n, l, angles).expect("valid signature")
}

fn ctx(sig: Signature, cutoff: u32, band: u32, seed: u64) -> SuiteContext {
    SuiteContext::new(sig, Truncation::new(cutoff, band).unwrap(), seed, false)
}

const FULL_ANGLES: &[(usize, usize, (i64, i64))] = &[
    (1, 2, (1, 4)),
    (1, 3, (1, 3)),
    (1, 4, (5, 6)),
    (2, 3, (2, 5)),
    (2, 4, (3, 8)),
    (3, 4, (1, 7)),
];

fn expect_pass(criterion: &str, reports: &[Report], started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    for report in reports {
        assert!(
            report.pass(),
            "{criterion}: suite '{}' failed: {:?}",
            report.suite,
            report.failures
        );
    }
    assert!(
        elapsed < budget,
        "{criterion}: took {elapsed:?}, budget {budget:?}"
    );
    println!("{criterion}: PASS — {cases} cases in {elapsed:?} (budget {budget:?})");
}

#[test]
fn criterion_01_confluence_of_randomized_rewriting() {
    let started = Instant::now();
    let base = ctx(sig(2, 1, &[(1, 2, (1, 4))]), 8, 2, 1001);
    // Random signatures per word: n ≤ 4, random rational angles, words of
    // mixed letters up to length 12, 10⁴ of them.
    let report = confluence_suite(&base, 10_000, 12, None);
    assert_eq!(report.cases, 10_000);
    expect_pass(
        "criterion 01 (confluence)",
        &[report],
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_02_relation_suite_on_band_vectors() {
    let started = Instant::now();
    let mut reports = Vec::new();
    for (n, l) in [(2usize, 0usize), (2, 1), (3, 2), (4, 2), (4, 4)] {
        let pairs: Vec<_> = FULL_ANGLES
            .iter()
            .copied()
            .filter(|&(i, j, _)| i <= n && j <= n)
            .collect();
        let c = ctx(sig(n, l, &pairs), 8, 2, 2002);
        reports.push(relations_suite(&c));
    }
    expect_pass(
        "criterion 02 (relations on band vectors)",
        &reports,
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_03_injectivity_roundtrip() {
    let started = Instant::now();
    let mut reports = Vec::new();
    for (n, l, count) in [(1usize, 1usize, 125usize), (2, 1, 125), (3, 2, 125), (3, 3, 125)] {
        let pairs: Vec<_> = FULL_ANGLES
            .iter()
            .copied()
            .filter(|&(i, j, _)| i <= n && j <= n)
            .collect();
        let c = ctx(sig(n, l, &pairs), 8, 2, 3003);
        let report = injectivity_suite(&c, count, (3, 3, 3));
        assert_eq!(report.cases, count);
        reports.push(report);
    }
    expect_pass(
        "criterion 03 (injectivity roundtrip, 500 elements)",
        &reports,
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_04_diagonal_norm_matches_operator_norm() {
    let started = Instant::now();
    let mut reports = Vec::new();
    for (n, l, count) in [(1usize, 1usize, 67usize), (2, 2, 67), (3, 3, 66)] {
        let pairs: Vec<_> = FULL_ANGLES
            .iter()
            .copied()
            .filter(|&(i, j, _)| i <= n && j <= n)
            .collect();
        let c = ctx(sig(n, l, &pairs), 8, 2, 4004);
        reports.push(norms_suite(&c, count));
    }
    expect_pass(
        "criterion 04 (diagonal norm vs operator norm, 200 elements)",
        &reports,
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_05_induced_space_geometry() {
    let started = Instant::now();
    // (a) exhaustive 0/1 trichotomy with f, k ≤ 5 at l ≤ 2;
    // (b) Gram matrices of the level bases at n = 3, l = 2;
    // (c) cross-level orthogonality — all inside the suite.
    let reports = vec![
        stinespring_suite(&ctx(sig(2, 1, &[(1, 2, (1, 4))]), 8, 2, 5005)),
        stinespring_suite(&ctx(
            sig(3, 2, &[(1, 2, (1, 3)), (1, 3, (1, 5)), (2, 3, (2, 7))]),
            8,
            2,
            5006,
        )),
    ];
    expect_pass(
        "criterion 05 (induced-space geometry)",
        &reports,
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_06_twist_isomorphism_and_associativity() {
    let started = Instant::now();
    // 10³ monomial pairs for the twist hom-law and 10³ triples for
    // associativity, split across two signature shapes with n ≤ 4.
    let reports = vec![
        deformation_suite(&ctx(sig(2, 1, &[(1, 2, (1, 4))]), 8, 2, 6006), 500, 500),
        deformation_suite(&ctx(sig(4, 2, FULL_ANGLES), 8, 2, 6007), 500, 500),
    ];
    expect_pass(
        "criterion 06 (deformation twist and associativity)",
        &reports,
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_07_intertwiner_exact_and_numeric() {
    let started = Instant::now();
    // Rational assignments, including both square-root branches (the
    // angle and the angle plus one give the same z but opposite w).
    let mut reports = vec![
        intertwiner_suite(&ctx(sig(2, 1, &[(1, 2, (1, 3))]), 6, 2, 7007)),
        intertwiner_suite(&ctx(sig(2, 1, &[(1, 2, (4, 3))]), 6, 2, 7008)),
        intertwiner_suite(&ctx(
            sig(3, 2, &[(1, 2, (1, 3)), (1, 3, (1, 5)), (2, 3, (2, 7))]),
            6,
            2,
            7009,
        )),
        intertwiner_suite(&ctx(sig(4, 2, FULL_ANGLES), 6, 2, 7010)),
    ];
    for report in &reports {
        assert_eq!(report.mode, "exact");
    }

    // Numeric mode with an irrational angle: residual at most 1e-12.
    let angles = AngleAssignment::new(
        2,
        vec![(1, 2, Angle::Real(std::f64::consts::FRAC_1_PI))],
        Mode::Numeric,
    )
    .unwrap();
    let sig_irr = Signature::new(2, 1, angles).unwrap();
    let mut numeric_ctx = ctx(sig_irr, 6, 2, 7011);
    numeric_ctx.numeric = true;
    let numeric_report = intertwiner_suite(&numeric_ctx);
    assert!(
        numeric_report.pass(),
        "numeric intertwiner failed: {:?}",
        numeric_report.failures
    );
    // The tolerance pinned for this criterion:
    assert_eq!(NUMERIC_TOLERANCE, 1e-12);
    reports.push(numeric_report);

    expect_pass(
        "criterion 07 (deformed/straight intertwiner)",
        &reports,
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_08_embedding_and_ordering_constants() {
    let started = Instant::now();
    // 200 random elements through the canonical enlargement; ordering
    // constants canonical vs three seeded orderings on the ≤(3,3,3)
    // tuple grid at n = 3.
    let report = embedding_suite(
        &ctx(
            sig(3, 2, &[(1, 2, (1, 3)), (1, 3, (1, 5)), (2, 3, (2, 7))]),
            8,
            2,
            8008,
        ),
        200,
    );
    expect_pass(
        "criterion 08 (embedding and ordering constants)",
        &[report],
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_09_kgroup_table() {
    let started = Instant::now();
    let report = ktheory_table_suite(&ctx(sig(2, 1, &[(1, 2, (1, 4))]), 8, 2, 9009));
    assert_eq!(report.cases, 21);
    expect_pass(
        "criterion 09 (K-group table, 0 ≤ l ≤ n ≤ 5)",
        &[report],
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_10_averaging_projection() {
    let started = Instant::now();
    let report = theta_suite(
        &ctx(
            sig(3, 2, &[(1, 2, (1, 3)), (1, 3, (1, 5)), (2, 3, (2, 7))]),
            8,
            2,
            1010,
        ),
        100,
    );
    expect_pass(
        "criterion 10 (averaging projection: idempotent and faithful)",
        &[report],
        started,
        Duration::from_secs(30),
    );
}
