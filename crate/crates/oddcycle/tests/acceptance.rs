//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! The golden tables pin the published cycle listings for small moduli; the
//! dense-range criteria re-verify the order, tau-sum, and class-count
//! identities for every odd q up to 10^5 against independent oracles.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oddcycle::arith::{euler_totient, legendre_tau_ratio, order2_oracle};
use oddcycle::conjectures::{
    check_fermat_cycles, check_mersenne_counts, fermat_number, mersenne_number, screen,
    ScreenOptions, Target,
};
use oddcycle::cycles::{
    decompose, decompose_stats, epsilon, tau_sum_identity, DecomposeOptions, LengthHistogram,
    OddModulus, DEFAULT_MEMORY_BUDGET,
};
use oddcycle::group::{verify_group_axioms, AxiomBudgets, AxiomMode};

fn modulus(q: u64) -> OddModulus {
    OddModulus::new(q).unwrap()
}

fn ensure(criterion: &str, cond: bool, detail: &str) {
    if !cond {
        println!("ACCEPTANCE {criterion}: FAIL — {detail}");
        panic!("{criterion} failed: {detail}");
    }
}

fn pass(criterion: &str, detail: &str, started: Instant) {
    println!(
        "ACCEPTANCE {criterion}: PASS — {detail} ({:.3}s)",
        started.elapsed().as_secs_f64()
    );
}

/// Published cycle listings, sorted by cycle minimum. Every inner list is a
/// full cycle in canonical rotation (minimum first).
const GOLDEN_TABLES: &[(u64, &[&[u64]])] = &[
    (3, &[&[1]]),
    (5, &[&[1, 3]]),
    (7, &[&[1], &[3, 5]]),
    (15, &[&[1], &[3, 9], &[5], &[7, 11, 13]]),
    (17, &[&[1, 9, 13, 15], &[3, 5, 11, 7]]),
    (23, &[&[1, 3, 13, 9], &[5, 7, 15, 19, 21, 11, 17]]),
    (
        31,
        &[
            &[1],
            &[3, 17],
            &[5, 9],
            &[7, 19, 25],
            &[11, 21, 13],
            &[15, 23, 27, 29],
        ],
    ),
    (
        63,
        &[
            &[1],
            &[3, 33],
            &[5, 17],
            &[7, 35, 49],
            &[9],
            &[11, 37, 25],
            &[13, 19, 41],
            &[15, 39, 51, 57],
            &[21],
            &[23, 43, 53, 29],
            &[27, 45],
            &[31, 47, 55, 59, 61],
        ],
    ),
    (
        89,
        &[
            &[1, 45, 67, 39],
            &[3, 23, 7],
            &[5, 47, 17, 53, 71],
            &[9, 49, 69, 79, 21, 55],
            &[11, 25, 57, 73, 81, 85, 87],
            &[13, 51, 35, 31, 15],
            &[19, 27, 29, 59, 37, 63],
            &[33, 61, 75, 41, 65, 77, 83, 43],
        ],
    ),
    (
        127,
        &[
            &[1],
            &[3, 65],
            &[5, 33],
            &[7, 67, 97],
            &[9, 17],
            &[11, 69, 49],
            &[13, 35, 81],
            &[15, 71, 99, 113],
            &[19, 73, 25],
            &[21, 37, 41],
            &[23, 75, 101, 57],
            &[27, 77, 51, 89],
            &[29, 39, 83, 105],
            &[31, 79, 103, 115, 121],
            &[43, 85, 53, 45],
            &[47, 87, 107, 117, 61],
            &[55, 91, 109, 59, 93],
            &[63, 95, 111, 119, 123, 125],
        ],
    ),
    (
        257,
        &[
            &[1, 129, 193, 225, 241, 249, 253, 255],
            &[3, 65, 161, 209, 233, 245, 251, 127],
            &[5, 131, 97, 177, 217, 237, 247, 63],
            &[7, 33, 145, 201, 229, 243, 125, 191],
            &[9, 133, 195, 113, 185, 221, 239, 31],
            &[11, 67, 81, 169, 213, 235, 123, 95],
            &[13, 135, 49, 153, 205, 231, 61, 159],
            &[15, 17, 137, 197, 227, 121, 189, 223],
            &[19, 69, 163, 105, 181, 219, 119, 47],
            &[21, 139, 99, 89, 173, 215, 59, 79],
            &[23, 35, 73, 165, 211, 117, 187, 111],
            &[25, 141, 199, 57, 157, 207, 29, 143],
            &[27, 71, 41, 149, 203, 115, 93, 175],
            &[37, 147, 101, 179, 109, 183, 55, 39],
            &[43, 75, 83, 85, 171, 107, 91, 87],
            &[45, 151, 51, 77, 167, 53, 155, 103],
        ],
    ),
];

const CYCLE_641_FROM_1: &[u64] = &[
    1, 321, 481, 561, 601, 621, 631, 159, 25, 333, 487, 141, 391, 129, 385, 513, 577, 609, 625,
    633, 637, 639, 5, 323, 241, 441, 541, 591, 77, 359, 125, 383,
];

const CYCLE_641_FROM_3: &[u64] = &[
    3, 161, 401, 521, 581, 611, 313, 477, 559, 75, 179, 205, 423, 133, 387, 257, 449, 545, 593,
    617, 629, 635, 319, 15, 41, 341, 491, 283, 231, 109, 375, 127,
];

#[test]
fn c01_golden_cycle_tables() {
    let crit = "C1 golden-cycle-tables";
    let started = Instant::now();
    for &(q, expected) in GOLDEN_TABLES {
        let d = decompose(modulus(q), &DecomposeOptions::default()).unwrap();
        ensure(
            crit,
            d.cycles.len() == expected.len(),
            &format!("q = {q}: {} cycles, table lists {}", d.cycles.len(), expected.len()),
        );
        for (cycle, want) in d.cycles.iter().zip(expected) {
            let got = cycle.elements.as_deref().unwrap();
            ensure(
                crit,
                got == *want,
                &format!("q = {q}: cycle {:?} differs from table {:?}", got, want),
            );
        }
    }
    ensure(crit, started.elapsed().as_secs_f64() < 1.0, "exceeded 1 s");
    pass(crit, "11 published tables reproduced element-for-element", started);
}

#[test]
fn c02_cycles_of_641() {
    let crit = "C2 641-cycles";
    let started = Instant::now();
    let d = decompose(modulus(641), &DecomposeOptions::default()).unwrap();
    ensure(crit, d.cycles.len() == 10, &format!("{} cycles", d.cycles.len()));
    ensure(
        crit,
        d.cycles.iter().all(|c| c.length == 32),
        "not all cycles have 32 elements",
    );
    ensure(
        crit,
        d.cycles[0].elements.as_deref() == Some(CYCLE_641_FROM_1),
        "cycle of 1 differs from the published rotation",
    );
    ensure(
        crit,
        d.cycles[1].elements.as_deref() == Some(CYCLE_641_FROM_3),
        "cycle of 3 differs from the published rotation",
    );
    ensure(crit, started.elapsed().as_secs_f64() < 1.0, "exceeded 1 s");
    pass(crit, "both published 32-cycles verbatim; 10 cycles of length 32", started);
}

#[test]
fn c03_order_agreement_to_1e5() {
    let crit = "C3 order-agreement";
    let started = Instant::now();
    let mut mismatches = 0u64;
    let mut q = 3u64;
    while q <= 100_000 {
        let m = modulus(q);
        if epsilon(m) != order2_oracle(m) {
            mismatches += 1;
            println!("{crit}: mismatch at q = {q}");
        }
        q += 2;
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(crit, mismatches == 0, &format!("{mismatches} mismatches"));
    ensure(crit, secs < 60.0, &format!("took {secs:.1}s, target 60s"));
    pass(crit, "orbit-walk order equals oracle for all odd q in [3, 1e5]", started);
}

#[test]
fn c04_c05_tau_identity_and_class_count_to_1e5() {
    let started = Instant::now();
    let mut tau_bad = 0u64;
    let mut prop3_bad = 0u64;
    let mut q = 3u64;
    while q <= 100_000 {
        let m = modulus(q);

        let (lhs, holds) = tau_sum_identity(m);
        if !(holds && lhs == legendre_tau_ratio(m)) {
            tau_bad += 1;
            println!("C4: tau identity fails at q = {q}");
        }

        let stats = decompose_stats(m, DEFAULT_MEMORY_BUDGET).unwrap();
        let phi = euler_totient(m).unwrap();
        let ok = stats.phi == phi
            && phi.is_multiple_of(stats.epsilon)
            && stats.irreducible_count == phi / stats.epsilon
            && stats.xi_total == q - 1;
        if !ok {
            prop3_bad += 1;
            println!("C5: class-count identity fails at q = {q}");
        }

        q += 2;
    }
    ensure("C4 tau-identity", tau_bad == 0, &format!("{tau_bad} mismatches"));
    pass(
        "C4 tau-identity",
        "tau sum equals q-1 and the Legendre route for all odd q in [3, 1e5]",
        started,
    );
    ensure("C5 class-count", prop3_bad == 0, &format!("{prop3_bad} mismatches"));
    pass(
        "C5 class-count",
        "irreducible cycles = phi/epsilon for all odd q in [3, 1e5]",
        started,
    );
}

#[test]
fn c06_group_axioms() {
    let crit = "C6 group-axioms";
    let started = Instant::now();
    let budgets = AxiomBudgets::default();

    let mut q = 3u64;
    while q <= 501 {
        let report = verify_group_axioms(modulus(q), AxiomMode::Exhaustive, 0, &budgets).unwrap();
        ensure(
            crit,
            report.exhaustive && report.all_pass(),
            &format!("exhaustive axiom failure at q = {q}: {report:?}"),
        );
        q += 2;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut picked = BTreeSet::new();
    while picked.len() < 100 {
        picked.insert(2 * rng.gen_range(1..50_000u64) + 1);
    }
    for &q in &picked {
        let report = verify_group_axioms(
            modulus(q),
            AxiomMode::Sampled { trials: 10_000 },
            0,
            &budgets,
        )
        .unwrap();
        ensure(
            crit,
            report.all_pass(),
            &format!("sampled axiom failure at q = {q}: {report:?}"),
        );
    }
    pass(
        crit,
        "exhaustive for all odd q <= 501; 10^4 seeded trials for 100 random odd q < 1e5",
        started,
    );
}

#[test]
fn c07_mersenne_count_tables() {
    let crit = "C7 mersenne-counts";
    let started = Instant::now();

    let published: &[(u64, &[u64])] = &[
        (3, &[1, 1]),
        (5, &[1, 2, 2, 1]),
        (7, &[1, 3, 5, 5, 3, 1]),
        (11, &[1, 5, 15, 30, 42, 42, 30, 15, 5, 1]),
        (13, &[1, 6, 22, 55, 99, 132, 132, 99, 55, 22, 6, 1]),
    ];
    for &(p, counts) in published {
        let r = check_mersenne_counts(p, DEFAULT_MEMORY_BUDGET).unwrap();
        ensure(crit, r.passed(), &format!("p = {p} fails the formula"));
        let table: LengthHistogram = (1..p).map(|k| (k, counts[(k - 1) as usize])).collect();
        ensure(
            crit,
            r.histogram == table,
            &format!("p = {p}: histogram differs from the published expansion"),
        );
    }

    // The published expansion of the coprime-only histogram of 2047.
    let d2047 = decompose_stats(modulus(2047), DEFAULT_MEMORY_BUDGET).unwrap();
    let coprime_table: LengthHistogram = [1, 5, 14, 28, 40, 40, 28, 14, 5, 1]
        .iter()
        .enumerate()
        .map(|(i, &n)| (i as u64 + 1, n))
        .collect();
    ensure(
        crit,
        d2047.irreducible_histogram == coprime_table,
        "irreducible histogram of 2047 differs from the published expansion",
    );

    for p in [17u64, 19] {
        let p_started = Instant::now();
        let r = check_mersenne_counts(p, DEFAULT_MEMORY_BUDGET).unwrap();
        ensure(crit, r.passed(), &format!("p = {p} fails the formula"));
        if p == 19 {
            let secs = p_started.elapsed().as_secs_f64();
            ensure(crit, secs < 120.0, &format!("p = 19 took {secs:.1}s, target 120s"));
        }
    }
    pass(crit, "histograms match for p in {3,5,7,11,13} (published) and {17,19} (formula)", started);
}

#[test]
fn c08_fermat_cycle_lengths() {
    let crit = "C8 fermat-cycles";
    let started = Instant::now();

    for n in 0..=4u32 {
        let f = fermat_number(n).unwrap();
        let m = modulus(f);
        let r = check_fermat_cycles(m, n, DEFAULT_MEMORY_BUDGET).unwrap();
        ensure(crit, r.passed(), &format!("F_{n} = {f} has a cycle of the wrong length"));
        let expected_order = if n == 0 { 2 } else { 1u64 << (n + 1) };
        ensure(
            crit,
            epsilon(m) == expected_order,
            &format!("epsilon(F_{n}) != {expected_order}"),
        );
        let phi = euler_totient(m).unwrap();
        ensure(
            crit,
            r.histogram.cycle_count() == phi / expected_order,
            &format!("cycle count of F_{n} differs from phi/epsilon"),
        );
    }

    for d in [641u64, 6_700_417] {
        let r = check_fermat_cycles(modulus(d), 5, DEFAULT_MEMORY_BUDGET).unwrap();
        ensure(crit, r.passed(), &format!("divisor {d} of F_5 fails"));
    }
    pass(
        crit,
        "F_0..F_4 and the F_5 divisors 641, 6700417 all decompose into 2^n-cycles \
         (full F_5: stretch target, run with --ignored)",
        started,
    );
}

/// Stretch target: the full decomposition of F_5 = 4294967297 itself
/// (2^31 successor steps over a 256 MiB bitmap). Run with
/// `cargo test --test acceptance -- --ignored`.
#[test]
#[ignore]
fn c08_stretch_full_f5_decomposition() {
    let crit = "C8s fermat-F5-full";
    let started = Instant::now();
    let f5 = fermat_number(5).unwrap();
    let r = check_fermat_cycles(modulus(f5), 5, 8 << 30).unwrap();
    ensure(crit, r.passed(), "F_5 has a cycle of length != 32");
    ensure(
        crit,
        r.histogram.count(32) == 67_108_864,
        &format!("expected 2^26 cycles of length 32, got {:?}", r.histogram),
    );
    pass(crit, "all 67108864 cycles of F_5 have length 32", started);
}

#[test]
fn c09_screening_ground_truth() {
    let crit = "C9 screening";
    let started = Instant::now();

    let m11 = screen(3, 100, Target::Mersenne { p: 11 }, &ScreenOptions::default()).unwrap();
    ensure(
        crit,
        m11.candidate_values() == vec![23, 89],
        &format!("Mersenne(11) screen emitted {:?}", m11.candidate_values()),
    );
    ensure(crit, m11.candidates.iter().all(|h| h.divides), "false positive for M_11");
    ensure(crit, m11.violations().is_empty(), "unexpected M_11 violation");
    ensure(
        crit,
        mersenne_number(11).unwrap().is_multiple_of(23) && mersenne_number(11).unwrap().is_multiple_of(89),
        "ground truth division check",
    );

    let f5 = screen(3, 700, Target::Fermat { n: 5 }, &ScreenOptions::default()).unwrap();
    ensure(
        crit,
        f5.candidate_values().contains(&641),
        &format!("Fermat(5) screen emitted {:?}", f5.candidate_values()),
    );
    ensure(crit, f5.candidates.iter().all(|h| h.divides), "false positive for F_5");
    ensure(crit, f5.violations().is_empty(), "unexpected F_5 violation");

    // The prefilter must not hide anything at these scales: a full scan
    // (every modulus decomposed) emits the same candidates.
    let full_scan = ScreenOptions { prefilter: false, ..Default::default() };
    let m11_full = screen(3, 100, Target::Mersenne { p: 11 }, &full_scan).unwrap();
    let f5_full = screen(3, 700, Target::Fermat { n: 5 }, &full_scan).unwrap();
    ensure(
        crit,
        m11_full.candidate_values() == m11.candidate_values()
            && f5_full.candidate_values() == f5.candidate_values(),
        "prefilter changed the candidate set",
    );
    ensure(
        crit,
        m11_full.violations().is_empty() && f5_full.violations().is_empty(),
        "full scan found violations",
    );

    pass(
        crit,
        &format!(
            "Mersenne(11) -> {{23, 89}}; Fermat(5) -> {:?}; all candidates are true divisors",
            f5.candidate_values()
        ),
        started,
    );
}

#[test]
fn c10_sweep_output_determinism() {
    let crit = "C10 determinism";
    let started = Instant::now();
    let run = |workers: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_oddcycle"))
            .args(["sweep", "3", "9999", "--json", "--workers", workers])
            .env_remove("ODDCYCLE_WORKERS")
            .output()
            .expect("binary runs");
        ensure(
            crit,
            out.status.success(),
            &format!("sweep exit status {:?}", out.status.code()),
        );
        out.stdout
    };
    let one = run("1");
    let eight = run("8");
    let eight_again = run("8");
    ensure(crit, !one.is_empty(), "empty sweep output");
    ensure(crit, one == eight, "workers=1 and workers=8 outputs differ");
    ensure(crit, eight == eight_again, "repeated runs differ");
    ensure(
        crit,
        one.iter().filter(|&&b| b == b'\n').count() == 4999,
        "expected one JSON line per odd q in [3, 9999]",
    );
    pass(crit, "byte-identical --json sweep output across runs and worker counts", started);
}
