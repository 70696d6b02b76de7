//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any failure.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subset_metric::cli::{cmd_matrix, cmd_validate, MetricKind};
use subset_metric::comparison::{
    fair_surjective_distance, hausdorff, link_distance, link_distance_enumerated, surjective_distance,
};
use subset_metric::ground_space::check_lower_bound;
use subset_metric::{
    brute_force_assignment, sequence_subset_distance, solve_assignment, symmetric_difference_reduce,
    ComparisonKind, CostMatrix, Element, GroundSpace, MFunction, PointSet, SubsetMetric, Workspace,
};

struct Outcome {
    passed: bool,
    detail: String,
}

type Check = fn() -> Outcome;

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

const VALID_FIXTURES: [&str; 7] = [
    "hamming.json",
    "unit_interval.json",
    "unit_square.json",
    "path_graph.json",
    "dna.json",
    "dna.txt",
    "good_m_table.json",
];

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut counts = Vec::new();
    let mut mismatches = 0;
    for kind in Kind::ALL {
        for _ in 0..1000 {
            let metric = random_metric(kind, &mut rng);
            let a = random_set(metric.space(), rng.gen_range(0..=6), &mut rng);
            let b = random_set(metric.space(), rng.gen_range(0..=6), &mut rng);
            let fast = metric.distance(&a, &b).unwrap().value;
            let brute = metric.brute_force(&a, &b).unwrap().value;
            if !close(fast, brute, metric.space()) {
                mismatches += 1;
            }
        }
        counts.push(format!("{} 1000", kind.name()));
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && elapsed < Duration::from_secs(60),
        format!("{}; {mismatches} mismatches; {:.2?}", counts.join(", "), elapsed),
    )
}

fn metric_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut by_case = [0usize; 3];
    let mut violations = 0;
    let mut triples = 0;
    while triples < 600 || by_case.iter().any(|&c| c < 100) {
        let kind = Kind::ALL[triples % 3];
        let metric = random_metric(kind, &mut rng);
        let sets: Vec<PointSet> = (0..3)
            .map(|_| random_set(metric.space(), rng.gen_range(0..=6), &mut rng))
            .collect();
        let (x1, x2, x3) = (&sets[0], &sets[1], &sets[2]);
        by_case[triple_case(x1.len(), x2.len(), x3.len())] += 1;
        let d = |p: &PointSet, q: &PointSet| metric.distance(p, q).unwrap().value;
        for (p, q) in [(x1, x2), (x1, x3), (x2, x3)] {
            let (pq, qp) = (d(p, q), d(q, p));
            if pq < 0.0 || pq.to_bits() != qp.to_bits() || (pq == 0.0) != (p == q) {
                violations += 1;
            }
        }
        if d(x1, x2) > d(x1, x3) + d(x3, x2) + TOL {
            violations += 1;
        }
        triples += 1;
    }
    outcome(
        violations == 0,
        format!("{triples} triples, cases {by_case:?}; {violations} violations"),
    )
}

fn reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    let n = 600;
    for i in 0..n {
        let metric = random_metric(Kind::ALL[i % 3], &mut rng);
        let space = metric.space();
        let common = random_set(space, rng.gen_range(1..=3), &mut rng);
        let a = random_set(space, rng.gen_range(0..=4), &mut rng).union(&common);
        let b = random_set(space, rng.gen_range(0..=4), &mut rng).union(&common);
        assert!(!a.intersection(&b).is_empty());
        let (ra, rb) = symmetric_difference_reduce(&a, &b);
        let full = metric.distance_without_reduction(&a, &b).unwrap().value;
        let reduced = metric.distance(&ra, &rb).unwrap().value;
        if !close(full, reduced, space) {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{n} instances; {mismatches} mismatches"))
}

fn monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    let mut violations = 0;
    while checked < 600 {
        let metric = random_metric(Kind::ALL[checked % 3], &mut rng);
        let space = metric.space();
        let x1 = random_set(space, rng.gen_range(0..=4), &mut rng);
        let x2 = random_set(space, rng.gen_range(0..=6), &mut rng);
        let keep = rng.gen_range(0..=x2.len());
        let x2_sub = x2.filter_by(|i| i < keep);
        if x1.len() > x2_sub.len() {
            continue;
        }
        let d = |p: &PointSet, q: &PointSet| metric.distance(p, q).unwrap().value;
        if d(&x1, &x2_sub) > d(&x1, &x2) + TOL {
            violations += 1;
        }
        let extra = PointSet::new(space, [space.sample(&mut rng)]).unwrap();
        if d(&x1, &x2_sub) > d(&x1, &x2_sub.union(&extra)) + TOL {
            violations += 1;
        }
        checked += 1;
    }
    outcome(violations == 0, format!("{checked} instances; {violations} violations"))
}

fn sequence_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mismatches = 0;
    let n = 600;
    for _ in 0..n {
        let alphabet = if rng.gen_bool(0.5) { "01" } else { "ACGT" };
        let length = rng.gen_range(2..=5);
        let space = GroundSpace::hamming(alphabet, length).unwrap();
        let a = random_set(&space, rng.gen_range(0..=6), &mut rng);
        let b = random_set(&space, rng.gen_range(0..=6), &mut rng);
        let got = sequence_subset_distance(alphabet, length, &a, &b).unwrap();
        if got != literal_sequence_distance(length, &words(&a), &words(&b)) as f64 {
            mismatches += 1;
        }
    }
    let space = GroundSpace::hamming("01", 3).unwrap();
    let word = |w: &str| Element::Symbolic(w.to_string());
    let a = PointSet::new(&space, [word("000")]).unwrap();
    let b = PointSet::new(&space, [word("011"), word("111")]).unwrap();
    let fixture = SubsetMetric::new(space, MFunction::Constant(3.0))
        .unwrap()
        .distance(&a, &b)
        .unwrap()
        .value;
    outcome(
        mismatches == 0 && fixture == 5.0,
        format!("{n} instances; {mismatches} mismatches; fixture value {fixture}"),
    )
}

fn interval_constants() -> Outcome {
    let space = GroundSpace::euclidean_box(vec![(0.0, 1.0)]).unwrap();
    let metric = SubsetMetric::new(space.clone(), MFunction::Eccentricity).unwrap();
    let set = |xs: &[f64]| PointSet::new(&space, xs.iter().map(|&x| Element::Vector(vec![x]))).unwrap();
    let near = metric.distance(&set(&[0.0, 0.25]), &set(&[0.0, 0.5])).unwrap().value;
    let far = metric.distance(&set(&[0.0, 0.25]), &set(&[0.0])).unwrap().value;
    outcome(
        (near - 0.25).abs() <= 1e-12 && (far - 0.75).abs() <= 1e-12,
        format!("{near} and {far}"),
    )
}

fn lower_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    let mut spaces = 0;
    for name in VALID_FIXTURES {
        let ws = Workspace::load(&fixture(name)).unwrap();
        let mut sample = ws.universe().elements().to_vec();
        match ws.space.enumerate(1 << 12) {
            Some(all) => sample.extend(all),
            None => sample.extend((0..200).map(|_| ws.space.sample(&mut rng))),
        }
        for m in [MFunction::Eccentricity, MFunction::Diameter] {
            let report = check_lower_bound(&ws.space, &m, &sample).unwrap();
            spaces += 1;
            if !report.passed() {
                failures.push(format!("{name}/{}", m.name()));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{spaces} fixture/M combinations; failures {failures:?}"),
    )
}

fn assignment_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    let n_matrices = 1200;
    for i in 0..n_matrices {
        let n = rng.gen_range(1..=7);
        let integral = i % 2 == 0;
        let entries = (0..n * n)
            .map(|_| if integral { rng.gen_range(0..50) as f64 } else { rng.gen::<f64>() * 10.0 })
            .collect();
        let c = CostMatrix::new(n, entries).unwrap();
        let (fast, brute) = (solve_assignment(&c).total_cost, brute_force_assignment(&c).unwrap().total_cost);
        let ok = if integral { fast == brute } else { (fast - brute).abs() <= TOL };
        if !ok {
            mismatches += 1;
        }
    }
    let big = CostMatrix::new(500, (0..250_000).map(|_| rng.gen::<f64>() * 1000.0).collect()).unwrap();
    let start = Instant::now();
    let solved = solve_assignment(&big);
    let elapsed = start.elapsed();
    let mut seen = vec![false; 500];
    let is_perm = solved.permutation.iter().all(|&j| !std::mem::replace(&mut seen[j], true));
    outcome(
        mismatches == 0 && is_perm && elapsed < Duration::from_secs(5),
        format!("{n_matrices} matrices, {mismatches} mismatches; 500x500 in {elapsed:.2?}"),
    )
}

fn comparison_metrics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut ordered, mut link_checked, mut singletons) = (0, 0, 0);
    let mut failures = 0;
    for i in 0..900 {
        let metric = random_metric(Kind::ALL[i % 3], &mut rng);
        let space = metric.space();
        let a = random_set(space, rng.gen_range(1..=5), &mut rng);
        let b = random_set(space, rng.gen_range(1..=5), &mut rng);
        let link = link_distance(space, &a, &b).unwrap();
        let surj = surjective_distance(space, &a, &b).unwrap();
        let fair = fair_surjective_distance(space, &a, &b).unwrap();
        ordered += 1;
        if link > surj + TOL || surj > fair + TOL {
            failures += 1;
        }
        if a.len() * b.len() <= 12 {
            link_checked += 1;
            if !close(link, link_distance_enumerated(space, &a, &b).unwrap(), space) {
                failures += 1;
            }
        }
        let (x, y) = (space.sample(&mut rng), space.sample(&mut rng));
        let one = |e: &Element| PointSet::new(space, [e.clone()]).unwrap();
        singletons += 1;
        if hausdorff(space, &one(&x), &one(&y)).unwrap() != space.distance(&x, &y).unwrap() {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{ordered} orderings, {link_checked} link oracle checks, {singletons} singletons; {failures} failures"),
    )
}

fn cli_checks() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for name in VALID_FIXTURES {
        let ws = Workspace::load(&fixture(name)).unwrap();
        let report = cmd_validate(&ws, 100, 0).unwrap();
        if report.exit_code() != 0 {
            ok = false;
            notes.push(format!("{name} validate {}", report.exit_code()));
        }
        let mut kinds = vec![MetricKind::Subset];
        kinds.extend(ComparisonKind::ALL.iter().map(|&k| MetricKind::Comparison(k)));
        for kind in kinds {
            match cmd_matrix(&ws, kind) {
                Ok(m) if m.is_symmetric_with_zero_diagonal() => {}
                Ok(_) => {
                    ok = false;
                    notes.push(format!("{name} {} asymmetric", kind.name()));
                }
                // Comparison distances are undefined on the empty set and
                // enumeration-capped; only the subset metric must always work.
                Err(e) if kind != MetricKind::Subset => notes.push(format!("{name} {} skipped: {e}", kind.name())),
                Err(e) => {
                    ok = false;
                    notes.push(format!("{name} subset: {e}"));
                }
            }
        }
    }
    let bad = Workspace::load(&fixture("bad_m_table.json")).unwrap();
    let bad_code = cmd_validate(&bad, 100, 0).map(|r| r.exit_code()).unwrap_or(-1);
    if bad_code != 1 {
        ok = false;
    }
    let binary = Command::new(env!("CARGO_BIN_EXE_subset-metric"))
        .arg("validate")
        .arg(fixture("bad_m_table.json"))
        .output()
        .unwrap()
        .status
        .code();
    if binary != Some(1) {
        ok = false;
    }
    notes.push(format!("bad table exits {bad_code} (binary {binary:?})"));
    outcome(ok, format!("{} valid fixtures; {}", VALID_FIXTURES.len(), notes.join("; ")))
}

/// Not a criterion: how often the classical distances break the triangle
/// inequality on random triples.
fn triangle_failure_rates() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let n = 600;
    let mut rates = Vec::new();
    for kind in ComparisonKind::ALL {
        let mut broken = 0;
        for i in 0..n {
            let space = random_space(Kind::ALL[i % 3], &mut rng);
            let sets: Vec<PointSet> = (0..3)
                .map(|_| random_set(&space, rng.gen_range(1..=4), &mut rng))
                .collect();
            let d = |p: &PointSet, q: &PointSet| kind.compute(&space, p, q).unwrap();
            let (x, y, z) = (&sets[0], &sets[1], &sets[2]);
            if d(x, y) > d(x, z) + d(z, y) + TOL {
                broken += 1;
            }
        }
        rates.push(format!("{} {broken}/{n}", kind.name()));
    }
    rates.join(", ")
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("metric axioms", metric_axioms),
        ("symmetric-difference reduction", reduction),
        ("monotonicity", monotonicity),
        ("sequence-subset recovery", sequence_recovery),
        ("interval constants", interval_constants),
        ("boundary-weight lower bound", lower_bound),
        ("assignment engine", assignment_engine),
        ("comparison metrics", comparison_metrics),
        ("cli validate and matrix", cli_checks),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        if !result.passed {
            failed += 1;
        }
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", i + 1, result.detail);
    }
    println!("info triangle violations of classical distances: {}", triangle_failure_rates());
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
