#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use subset_metric::{Element, GroundSpace, MFunction, PointSet, SubsetMetric};

pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Hamming,
    Square,
    Graph,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Hamming, Kind::Square, Kind::Graph];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Hamming => "hamming",
            Kind::Square => "unit square",
            Kind::Graph => "graph",
        }
    }
}

pub fn random_hamming<R: Rng>(rng: &mut R) -> GroundSpace {
    let alphabet = if rng.gen_bool(0.5) { "01" } else { "ACGT" };
    GroundSpace::hamming(alphabet, rng.gen_range(2..=5)).unwrap()
}

/// Connected graph on 2..=8 vertices with integer weights in 1..=4.
pub fn random_graph<R: Rng>(rng: &mut R) -> GroundSpace {
    let n = rng.gen_range(2..=8);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v, rng.gen_range(1..=4) as f64));
    }
    for _ in 0..rng.gen_range(0..=n) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            edges.push((u, v, rng.gen_range(1..=4) as f64));
        }
    }
    GroundSpace::graph(n, edges).unwrap()
}

pub fn random_space<R: Rng>(kind: Kind, rng: &mut R) -> GroundSpace {
    match kind {
        Kind::Hamming => random_hamming(rng),
        Kind::Square => GroundSpace::euclidean_box(vec![(0.0, 1.0); 2]).unwrap(),
        Kind::Graph => random_graph(rng),
    }
}

/// A valid M for the space; constants stay integral on integer-valued spaces.
pub fn random_m<R: Rng>(space: &GroundSpace, rng: &mut R) -> MFunction {
    match rng.gen_range(0..3) {
        0 => MFunction::Diameter,
        1 => MFunction::Eccentricity,
        _ if space.is_integer_valued() => {
            MFunction::Constant(space.diameter() + rng.gen_range(0..=2) as f64)
        }
        _ => MFunction::Constant(space.diameter() * rng.gen_range(1.0..2.0)),
    }
}

pub fn random_metric<R: Rng>(kind: Kind, rng: &mut R) -> SubsetMetric {
    let space = random_space(kind, rng);
    let m = random_m(&space, rng);
    SubsetMetric::new(space, m).unwrap()
}

/// Up to `size` distinct elements (fewer when the space is smaller).
pub fn random_set<R: Rng>(space: &GroundSpace, size: usize, rng: &mut R) -> PointSet {
    match space.enumerate(1 << 12) {
        Some(all) => {
            let picked = all.choose_multiple(rng, size.min(all.len())).cloned();
            PointSet::new(space, picked).unwrap()
        }
        None => PointSet::new(space, (0..size).map(|_| space.sample(rng))).unwrap(),
    }
}

pub fn close(a: f64, b: f64, space: &GroundSpace) -> bool {
    if space.is_integer_valued() {
        a == b
    } else {
        (a - b).abs() <= TOL
    }
}

/// d_S by listing every injection from the smaller set into the larger one,
/// with no reduction and no canonical ordering.
pub fn literal_subset_distance(metric: &SubsetMetric, a: &PointSet, b: &PointSet) -> f64 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let m: Vec<f64> = large.iter().map(|y| metric.m_value(y).unwrap()).collect();
    let dist: Vec<Vec<f64>> = small
        .iter()
        .map(|x| large.iter().map(|y| metric.space().distance(x, y).unwrap()).collect())
        .collect();

    fn go(i: usize, dist: &[Vec<f64>], m: &[f64], used: &mut [bool], acc: f64, best: &mut f64) {
        if i == dist.len() {
            let rest: f64 = (0..m.len()).filter(|&j| !used[j]).map(|j| m[j]).sum();
            *best = best.min(acc + rest);
            return;
        }
        for j in 0..m.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, dist, m, used, acc + dist[i][j], best);
                used[j] = false;
            }
        }
    }

    let mut best = f64::INFINITY;
    go(0, &dist, &m, &mut vec![false; m.len()], 0.0, &mut best);
    best
}

pub fn words(set: &PointSet) -> Vec<String> {
    set.iter()
        .map(|e| match e {
            Element::Symbolic(s) => s.clone(),
            other => panic!("not a word: {other}"),
        })
        .collect()
}

/// The sequence-subset distance written out from its definition: Hamming
/// distance summed along an injection plus `L` per surplus word.
pub fn literal_sequence_distance(length: usize, x1: &[String], x2: &[String]) -> u64 {
    let (x1, x2) = if x1.len() <= x2.len() { (x1, x2) } else { (x2, x1) };
    let hamming = |u: &str, v: &str| u.chars().zip(v.chars()).filter(|(p, q)| p != q).count() as u64;
    let surplus = (length * (x2.len() - x1.len())) as u64;

    fn go(i: usize, x1: &[String], x2: &[String], used: &mut [bool], h: &dyn Fn(&str, &str) -> u64) -> u64 {
        if i == x1.len() {
            return 0;
        }
        let mut best = u64::MAX;
        for j in 0..x2.len() {
            if !used[j] {
                used[j] = true;
                best = best.min(h(&x1[i], &x2[j]) + go(i + 1, x1, x2, used, h));
                used[j] = false;
            }
        }
        best
    }

    go(0, x1, x2, &mut vec![false; x2.len()], &hamming) + surplus
}

/// The three cardinality orderings of a triple, normalised so `|x1| <= |x2|`:
/// 0 when `|x1| <= |x3| <= |x2|`, 1 when `|x3| < |x1|`, 2 when `|x2| < |x3|`.
pub fn triple_case(x1: usize, x2: usize, x3: usize) -> usize {
    let (lo, hi) = (x1.min(x2), x1.max(x2));
    if x3 < lo {
        1
    } else if x3 > hi {
        2
    } else {
        0
    }
}
