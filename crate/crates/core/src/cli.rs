//! The commands behind the `subset-metric` binary.
//!
//! Each command returns a serializable report; the binary prints it and maps
//! the outcome to an exit code: 0 on success, 1 on a validation or axiom
//! failure, 2 on a parse or usage error.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::comparison::{link_distance_enumerated, ComparisonKind};
use crate::error::{Error, Result};
use crate::ground_space::{
    check_lower_bound, validate_condition2, Condition2Violation, Element, GroundSpace, MFunction,
    TOLERANCE,
};
use crate::subset::{PointSet, SubsetMetric};
use crate::workspace::Workspace;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Exit code for an error returned by a command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Validation(_) | Error::Domain(_) | Error::Condition2(_) => EXIT_FAILURE,
        Error::Parse { .. } | Error::UnknownSet(_) | Error::Usage(_) | Error::Size { .. } => EXIT_USAGE,
    }
}

/// Rounds to 9 significant digits for printing.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Subset,
    Comparison(ComparisonKind),
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Subset => "subset",
            MetricKind::Comparison(kind) => kind.name(),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "subset" {
            return Ok(MetricKind::Subset);
        }
        s.parse().map(MetricKind::Comparison).map_err(|_| {
            Error::Usage(format!(
                "unknown metric `{s}`; expected subset, hausdorff, md, surjective, fair or link"
            ))
        })
    }
}

fn values_agree(space: &GroundSpace, a: f64, b: f64) -> bool {
    if space.is_integer_valued() {
        a == b
    } else {
        (a - b).abs() <= TOLERANCE
    }
}

fn compute(ws: &Workspace, metric: Option<&SubsetMetric>, kind: MetricKind, a: &PointSet, b: &PointSet) -> Result<f64> {
    match kind {
        MetricKind::Subset => Ok(metric.expect("subset metric prepared").distance(a, b)?.value),
        MetricKind::Comparison(c) => c.compute(&ws.space, a, b),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DistReport {
    pub metric: String,
    pub set_a: String,
    pub set_b: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<(Element, Element)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unmatched: Option<Vec<Element>>,
    pub oracle_value: Option<f64>,
    /// `None` when no oracle ran.
    pub agree: Option<bool>,
}

impl DistReport {
    pub fn exit_code(&self) -> i32 {
        if self.agree == Some(false) {
            EXIT_FAILURE
        } else {
            EXIT_OK
        }
    }
}

/// Distance between two named sets, optionally checked against the
/// enumeration oracle.
pub fn cmd_dist(ws: &Workspace, set_a: &str, set_b: &str, kind: MetricKind, oracle: bool) -> Result<DistReport> {
    let a = ws.set(set_a)?;
    let b = ws.set(set_b)?;
    let mut report = DistReport {
        metric: kind.name().to_string(),
        set_a: set_a.to_string(),
        set_b: set_b.to_string(),
        value: 0.0,
        witness: None,
        unmatched: None,
        oracle_value: None,
        agree: None,
    };
    match kind {
        MetricKind::Subset => {
            let metric = ws.metric()?;
            let result = metric.distance(a, b)?;
            report.value = result.value;
            report.unmatched = Some(result.unmatched());
            report.witness = Some(result.witness.pairs);
            if oracle {
                report.oracle_value = Some(metric.brute_force(a, b)?.value);
            }
        }
        MetricKind::Comparison(ComparisonKind::Link) => {
            let (value, relation) = crate::comparison::link_relation(&ws.space, a, b)?;
            report.value = value;
            report.witness = Some(relation);
            if oracle {
                report.oracle_value = Some(link_distance_enumerated(&ws.space, a, b)?);
            }
        }
        MetricKind::Comparison(c) => {
            if oracle {
                return Err(Error::Usage(format!("metric `{c}` has no independent oracle")));
            }
            report.value = c.compute(&ws.space, a, b)?;
        }
    }
    if let Some(o) = report.oracle_value {
        report.agree = Some(values_agree(&ws.space, report.value, o));
        report.oracle_value = Some(round_sig(o));
    }
    report.value = round_sig(report.value);
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixReport {
    pub metric: String,
    pub names: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

impl MatrixReport {
    /// Header row `set,<names...>`, then one row per set.
    pub fn to_csv(&self) -> String {
        let mut out = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once("set").chain(self.names.iter().map(String::as_str));
        out.write_record(header).expect("in-memory write");
        for (name, row) in self.names.iter().zip(&self.matrix) {
            let cells = std::iter::once(name.clone()).chain(row.iter().map(|v| format!("{v:?}")));
            out.write_record(cells).expect("in-memory write");
        }
        String::from_utf8(out.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn is_symmetric_with_zero_diagonal(&self) -> bool {
        let n = self.matrix.len();
        (0..n).all(|i| {
            self.matrix[i][i] == 0.0
                && (0..n).all(|j| (self.matrix[i][j] - self.matrix[j][i]).abs() <= TOLERANCE)
        })
    }
}

/// All-pairs distances over the named sets, in file order. Pairs run in
/// parallel; the lower triangle mirrors the upper one.
pub fn cmd_matrix(ws: &Workspace, kind: MetricKind) -> Result<MatrixReport> {
    let metric = match kind {
        MetricKind::Subset => Some(ws.metric()?),
        MetricKind::Comparison(_) => None,
    };
    let n = ws.sets.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| compute(ws, metric.as_ref(), kind, &ws.sets[i].1, &ws.sets[j].1))
        .collect::<Result<Vec<f64>>>()?;
    let mut matrix = vec![vec![0.0; n]; n];
    for (&(i, j), v) in pairs.iter().zip(values) {
        let v = round_sig(v);
        matrix[i][j] = v;
        matrix[j][i] = v;
    }
    Ok(MatrixReport {
        metric: kind.name().to_string(),
        names: ws.names().into_iter().map(String::from).collect(),
        matrix,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    pub checked: usize,
    /// Up to [`MAX_COUNTEREXAMPLES`] failures, described in words.
    pub counterexamples: Vec<String>,
}

pub const MAX_COUNTEREXAMPLES: usize = 10;

impl AxiomCheck {
    fn new(axiom: &'static str) -> Self {
        Self {
            axiom,
            passed: true,
            checked: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(describe());
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub m_function: String,
    pub condition2: AxiomCheck,
    pub min_m: f64,
    pub lower_bound: AxiomCheck,
    pub axioms: Vec<AxiomCheck>,
    /// Triples per cardinality ordering, with `|X1| <= |X2|`:
    /// `|X1| <= |X3| <= |X2|`, `|X3| <= |X1|`, `|X2| <= |X3|`.
    pub triples_by_case: [usize; 3],
    pub seed: u64,
}

impl ValidateReport {
    pub fn passed(&self) -> bool {
        self.condition2.passed && self.lower_bound.passed && self.axioms.iter().all(|a| a.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_OK
        } else {
            EXIT_FAILURE
        }
    }
}

/// Largest random set drawn by [`cmd_validate`].
pub const VALIDATE_MAX_SET: usize = 6;

fn random_subset<R: Rng>(universe: &PointSet, rng: &mut R) -> PointSet {
    let size = rng.gen_range(0..=universe.len().min(VALIDATE_MAX_SET));
    let mut idx: Vec<usize> = (0..universe.len()).collect();
    idx.shuffle(rng);
    idx.truncate(size);
    universe.filter_by(|i| idx.contains(&i))
}

fn describe_set(s: &PointSet) -> String {
    let items: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

/// Checks the boundary-weight condition and the `M(y) >= M(x)/2` bound over a sample, then the
/// metric axioms of `d_S` over `samples` random triples of sets.
///
/// The element sample is every element of every named set, plus `samples`
/// random space elements unless `M` is a table (which is only defined on its
/// support). Triples mix named sets with random subsets of that sample.
pub fn cmd_validate(ws: &Workspace, samples: usize, seed: u64) -> Result<ValidateReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements: Vec<Element> = ws.universe().elements().to_vec();
    match ws.m_function.table_support() {
        Some(support) => elements.extend(support),
        None => elements.extend((0..samples).map(|_| ws.space.sample(&mut rng))),
    }
    let universe = PointSet::new(&ws.space, elements)?;
    if universe.is_empty() {
        return Err(Error::Usage("workspace has no elements to validate".to_string()));
    }

    let mut condition2 = AxiomCheck::new("condition2");
    let report = validate_condition2(&ws.space, &ws.m_function, universe.elements())?;
    let n = universe.len();
    condition2.checked = n * n;
    condition2.passed = report.passed();
    condition2.counterexamples = report
        .violations
        .iter()
        .take(MAX_COUNTEREXAMPLES)
        .map(Condition2Violation::to_string)
        .collect();

    let mut lower_bound = AxiomCheck::new("m_lower_bound");
    let bound = check_lower_bound(&ws.space, &ws.m_function, universe.elements())?;
    lower_bound.checked = n * n;
    lower_bound.passed = bound.passed();
    lower_bound.counterexamples = bound
        .violations
        .iter()
        .take(MAX_COUNTEREXAMPLES)
        .map(|(x, y)| format!("M({y}) < M({x}) / 2"))
        .collect();
    if bound.constant <= 0.0 {
        lower_bound.counterexamples.push("M vanishes on the whole sample".to_string());
    }

    let metric = ws.metric_unchecked()?;
    let named: Vec<&PointSet> = ws.sets.iter().map(|(_, s)| s).collect();
    let draw = |rng: &mut ChaCha8Rng| -> PointSet {
        if !named.is_empty() && rng.gen_bool(0.5) {
            named[rng.gen_range(0..named.len())].clone()
        } else {
            random_subset(&universe, rng)
        }
    };

    let mut nonnegative = AxiomCheck::new("nonnegativity");
    let mut identity = AxiomCheck::new("identity_of_indiscernibles");
    let mut symmetry = AxiomCheck::new("symmetry");
    let mut triangle = AxiomCheck::new("triangle_inequality");
    let mut cases = [0usize; 3];

    for _ in 0..samples {
        let (x1, x2, x3) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let d12 = metric.distance(&x1, &x2)?.value;
        let d21 = metric.distance(&x2, &x1)?.value;
        let d13 = metric.distance(&x1, &x3)?.value;
        let d32 = metric.distance(&x3, &x2)?.value;
        let d11 = metric.distance(&x1, &x1)?.value;

        nonnegative.record(d12 >= 0.0, || format!("d_S = {d12} < 0"));
        symmetry.record(d12 == d21, || {
            format!("d_S({}, {}) = {d12} but reversed {d21}", describe_set(&x1), describe_set(&x2))
        });
        identity.record(d11 == 0.0 && ((d12 == 0.0) == (x1 == x2)), || {
            format!(
                "d_S({}, {}) = {d12}, d_S(X, X) = {d11}",
                describe_set(&x1),
                describe_set(&x2)
            )
        });
        triangle.record(d12 <= d13 + d32 + TOLERANCE, || {
            format!(
                "d_S({}, {}) = {d12} > {d13} + {d32} via {}",
                describe_set(&x1),
                describe_set(&x2),
                describe_set(&x3)
            )
        });

        let (small, large) = if x1.len() <= x2.len() { (&x1, &x2) } else { (&x2, &x1) };
        let case = if x3.len() >= small.len() && x3.len() <= large.len() {
            0
        } else if x3.len() < small.len() {
            1
        } else {
            2
        };
        cases[case] += 1;
    }

    Ok(ValidateReport {
        m_function: ws.m_function.name(),
        condition2,
        min_m: report.min_m,
        lower_bound,
        axioms: vec![nonnegative, identity, symmetry, triangle],
        triples_by_case: cases,
        seed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoRow {
    pub n: usize,
    pub m: usize,
    pub value: f64,
    pub expected: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoAnchorRow {
    pub n: usize,
    pub a: f64,
    pub value: f64,
    pub expected: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    /// `d_S(A_n, A_m)` with `A_k = {0, 1/k}`; expected `|1/n - 1/m|`.
    pub cauchy: Vec<DemoRow>,
    /// `d_S(A_n, {0, a})` for `a` on a grid; expected `|a - 1/n|`.
    pub to_pair: Vec<DemoAnchorRow>,
    /// `d_S(A_n, {0})`; expected `M(1/n) = 1 - 1/n`.
    pub to_zero: Vec<DemoAnchorRow>,
    pub max_abs_error: f64,
}

/// Grid of anchors `a` used by [`cmd_demo_incompleteness`].
pub const DEMO_GRID: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// On `[0, 1]` with `M(y) = max(y, 1 - y)`, tabulates the sequence
/// `A_n = {0, 1/n}` for `2 <= n <= n_max`. Consecutive terms get arbitrarily
/// close, yet the distance to every candidate limit `{0, a}` or `{0}` stays
/// away from zero.
pub fn cmd_demo_incompleteness(n_max: usize) -> Result<DemoReport> {
    if n_max < 2 {
        return Err(Error::Usage(format!("n_max must be at least 2, got {n_max}")));
    }
    let space = GroundSpace::euclidean_box(vec![(0.0, 1.0)])?;
    let metric = SubsetMetric::new(space.clone(), MFunction::Eccentricity)?;
    let set = |xs: &[f64]| PointSet::new(&space, xs.iter().map(|&x| Element::Vector(vec![x])));
    let seq = |k: usize| set(&[0.0, 1.0 / k as f64]);

    let mut max_abs_error = 0.0_f64;
    let mut cauchy = Vec::new();
    let mut to_pair = Vec::new();
    let mut to_zero = Vec::new();
    for n in 2..=n_max {
        let a_n = seq(n)?;
        let inv_n = 1.0 / n as f64;
        for m in 2..=n_max {
            let value = metric.distance(&a_n, &seq(m)?)?.value;
            let expected = (inv_n - 1.0 / m as f64).abs();
            max_abs_error = max_abs_error.max((value - expected).abs());
            cauchy.push(DemoRow {
                n,
                m,
                value: round_sig(value),
                expected: round_sig(expected),
            });
        }
        for &a in &DEMO_GRID {
            let value = metric.distance(&a_n, &set(&[0.0, a])?)?.value;
            let expected = (a - inv_n).abs();
            max_abs_error = max_abs_error.max((value - expected).abs());
            to_pair.push(DemoAnchorRow {
                n,
                a,
                value: round_sig(value),
                expected: round_sig(expected),
            });
        }
        let value = metric.distance(&a_n, &set(&[0.0])?)?.value;
        let expected = 1.0 - inv_n;
        max_abs_error = max_abs_error.max((value - expected).abs());
        to_zero.push(DemoAnchorRow {
            n,
            a: 0.0,
            value: round_sig(value),
            expected: round_sig(expected),
        });
    }
    Ok(DemoReport {
        cauchy,
        to_pair,
        to_zero,
        max_abs_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_to_nine_digits() {
        assert_eq!(round_sig(2f64.sqrt()).to_string(), "1.41421356");
        assert_eq!(round_sig(5.0), 5.0);
        assert_eq!(round_sig(0.25), 0.25);
        assert_eq!(round_sig(0.0), 0.0);
    }

    #[test]
    fn metric_kind_flags() {
        for name in ["subset", "hausdorff", "md", "surjective", "fair", "link"] {
            assert_eq!(name.parse::<MetricKind>().unwrap().name(), name);
        }
        assert!(matches!("bogus".parse::<MetricKind>(), Err(Error::Usage(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::UnknownSet("x".into())), EXIT_USAGE);
        assert_eq!(exit_code(&Error::Condition2("x".into())), EXIT_FAILURE);
        assert_eq!(exit_code(&Error::Parse { line: 1, column: 1, message: String::new() }), EXIT_USAGE);
    }

    #[test]
    fn demo_values() {
        let report = cmd_demo_incompleteness(4).unwrap();
        let row = report.cauchy.iter().find(|r| r.n == 4 && r.m == 2).unwrap();
        assert!((row.value - 0.25).abs() < 1e-12);
        assert!(report.cauchy.iter().filter(|r| r.n == r.m).all(|r| r.value == 0.0));
        let zero = report.to_zero.iter().find(|r| r.n == 4).unwrap();
        assert!((zero.value - 0.75).abs() < 1e-12);
        assert!(report.max_abs_error < 1e-12);
        assert!(cmd_demo_incompleteness(1).is_err());
    }
}
