//! Classical distances between nonempty finite sets, for side-by-side
//! comparison with the subset metric.
//!
//! Only the Hausdorff distance is a metric in general. The sum of minimum
//! distances, the surjective and fair-surjective distances, and the link
//! distance can all violate the triangle inequality.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::assignment::{solve_assignment, CostMatrix};
use crate::error::{Error, Result};
use crate::ground_space::{sum, Element, GroundSpace};
use crate::subset::{orient, PointSet};

/// Largest set size accepted by the surjection enumerators.
pub const SURJECTION_CAP: usize = 7;

/// Largest `|a| * |b|` accepted by [`link_distance_enumerated`].
pub const LINK_ENUMERATION_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonKind {
    Hausdorff,
    SumMin,
    Surjective,
    FairSurjective,
    Link,
}

impl ComparisonKind {
    pub const ALL: [ComparisonKind; 5] = [
        ComparisonKind::Hausdorff,
        ComparisonKind::SumMin,
        ComparisonKind::Surjective,
        ComparisonKind::FairSurjective,
        ComparisonKind::Link,
    ];

    pub fn compute(self, space: &GroundSpace, a: &PointSet, b: &PointSet) -> Result<f64> {
        match self {
            ComparisonKind::Hausdorff => hausdorff(space, a, b),
            ComparisonKind::SumMin => sum_min_distance(space, a, b),
            ComparisonKind::Surjective => surjective_distance(space, a, b),
            ComparisonKind::FairSurjective => fair_surjective_distance(space, a, b),
            ComparisonKind::Link => link_distance(space, a, b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ComparisonKind::Hausdorff => "hausdorff",
            ComparisonKind::SumMin => "md",
            ComparisonKind::Surjective => "surjective",
            ComparisonKind::FairSurjective => "fair",
            ComparisonKind::Link => "link",
        }
    }
}

impl fmt::Display for ComparisonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ComparisonKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hausdorff" => Ok(ComparisonKind::Hausdorff),
            "md" | "sum_min" => Ok(ComparisonKind::SumMin),
            "surjective" => Ok(ComparisonKind::Surjective),
            "fair" | "fair_surjective" => Ok(ComparisonKind::FairSurjective),
            "link" => Ok(ComparisonKind::Link),
            other => Err(Error::Usage(format!("unknown comparison metric `{other}`"))),
        }
    }
}

fn require_nonempty(a: &PointSet, b: &PointSet, what: &str) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain(format!("{what} is undefined for an empty set")));
    }
    Ok(())
}

fn check_sets(space: &GroundSpace, a: &PointSet, b: &PointSet) -> Result<()> {
    a.iter().chain(b).try_for_each(|x| space.check(x))
}

/// `d(x, S) = min_{s in S} d(x, s)`.
fn distance_to_set(space: &GroundSpace, x: &Element, set: &PointSet) -> f64 {
    set.iter()
        .map(|y| space.distance_unchecked(x, y))
        .fold(f64::INFINITY, f64::min)
}

/// Row-major `|a| x |b|` distance table.
fn distance_table(space: &GroundSpace, a: &PointSet, b: &PointSet) -> Vec<Vec<f64>> {
    a.iter()
        .map(|x| b.iter().map(|y| space.distance_unchecked(x, y)).collect())
        .collect()
}

/// `max { max_{a} d(a, B), max_{b} d(b, A) }`.
pub fn hausdorff(space: &GroundSpace, a: &PointSet, b: &PointSet) -> Result<f64> {
    require_nonempty(a, b, "the Hausdorff distance")?;
    check_sets(space, a, b)?;
    let forward = a.iter().map(|x| distance_to_set(space, x, b)).fold(0.0, f64::max);
    let backward = b.iter().map(|y| distance_to_set(space, y, a)).fold(0.0, f64::max);
    Ok(forward.max(backward))
}

/// Half the sum, over both sets, of each element's distance to the other set.
pub fn sum_min_distance(space: &GroundSpace, a: &PointSet, b: &PointSet) -> Result<f64> {
    require_nonempty(a, b, "the sum of minimum distances")?;
    check_sets(space, a, b)?;
    let forward = sum(a.iter().map(|x| distance_to_set(space, x, b)));
    let backward = sum(b.iter().map(|y| distance_to_set(space, y, a)));
    Ok(0.5 * (forward + backward))
}

/// Minimum over surjections from the larger set onto the smaller.
pub fn surjective_distance(space: &GroundSpace, a: &PointSet, b: &PointSet) -> Result<f64> {
    surjection_minimum(space, a, b, false)
}

/// Minimum over fair surjections, whose preimage sizes differ by at most one.
pub fn fair_surjective_distance(space: &GroundSpace, a: &PointSet, b: &PointSet) -> Result<f64> {
    surjection_minimum(space, a, b, true)
}

fn surjection_minimum(space: &GroundSpace, a: &PointSet, b: &PointSet, fair: bool) -> Result<f64> {
    require_nonempty(a, b, "the surjective distance")?;
    let size = a.len().max(b.len());
    if size > SURJECTION_CAP {
        return Err(Error::Size {
            size,
            cap: SURJECTION_CAP,
        });
    }
    check_sets(space, a, b)?;
    let (small, large, _) = orient(a, b);
    // Rows: elements of the larger set (the domain).
    let costs = distance_table(space, large, small);
    let n = large.len();
    let k = small.len();
    let (min_pre, max_pre) = if fair { (n / k, n.div_ceil(k)) } else { (1, n) };

    let mut search = SurjectionSearch {
        costs: &costs,
        k,
        min_pre,
        max_pre,
        counts: vec![0; k],
        image: Vec::with_capacity(n),
        best: f64::INFINITY,
    };
    search.run();
    Ok(search.best)
}

struct SurjectionSearch<'c> {
    costs: &'c [Vec<f64>],
    k: usize,
    min_pre: usize,
    max_pre: usize,
    counts: Vec<usize>,
    image: Vec<usize>,
    best: f64,
}

impl SurjectionSearch<'_> {
    fn run(&mut self) {
        let row = self.image.len();
        let remaining = self.costs.len() - row;
        let deficit: usize = self
            .counts
            .iter()
            .map(|&c| self.min_pre.saturating_sub(c))
            .sum();
        if deficit > remaining {
            return;
        }
        if remaining == 0 {
            // Sum in row order so equal images give bit-identical totals.
            let total = sum(self.image.iter().enumerate().map(|(i, &j)| self.costs[i][j]));
            if total < self.best {
                self.best = total;
            }
            return;
        }
        for j in 0..self.k {
            if self.counts[j] == self.max_pre {
                continue;
            }
            self.counts[j] += 1;
            self.image.push(j);
            self.run();
            self.image.pop();
            self.counts[j] -= 1;
        }
    }
}

/// Minimum total distance over linking relations: relations `R ⊆ a × b`
/// in which every element of either set appears at least once.
///
/// This is a minimum-weight edge cover of the complete bipartite graph. With
/// `μ(v)` the cheapest edge at `v`, its cost is `Σ μ(v)` plus the most negative
/// total of `d(x, y) - μ(x) - μ(y)` over matchings, which the assignment solver
/// finds on a square matrix padded with zero-gain entries.
pub fn link_distance(space: &GroundSpace, a: &PointSet, b: &PointSet) -> Result<f64> {
    link_relation(space, a, b).map(|(value, _)| value)
}

/// The link distance together with an optimal linking relation.
pub fn link_relation(
    space: &GroundSpace,
    a: &PointSet,
    b: &PointSet,
) -> Result<(f64, Vec<(Element, Element)>)> {
    require_nonempty(a, b, "the link distance")?;
    check_sets(space, a, b)?;
    let (left, right, swapped) = orient(a, b);
    let costs = distance_table(space, left, right);
    let (p, q) = (left.len(), right.len());

    let cheapest_right: Vec<usize> = (0..p)
        .map(|i| argmin((0..q).map(|j| costs[i][j])))
        .collect();
    let cheapest_left: Vec<usize> = (0..q)
        .map(|j| argmin((0..p).map(|i| costs[i][j])))
        .collect();

    let gain = |i: usize, j: usize| {
        costs[i][j] - costs[i][cheapest_right[i]] - costs[cheapest_left[j]][j]
    };
    let n = p.max(q);
    let floor = (0..p)
        .flat_map(|i| (0..q).map(move |j| (i, j)))
        .map(|(i, j)| gain(i, j).min(0.0))
        .fold(0.0, f64::min);
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let g = if i < p && j < q { gain(i, j).min(0.0) } else { 0.0 };
            entries.push(g - floor);
        }
    }
    let matching = solve_assignment(&CostMatrix::new(n, entries)?);

    let mut relation = BTreeSet::new();
    let mut left_covered = vec![false; p];
    let mut right_covered = vec![false; q];
    for (i, &j) in matching.permutation.iter().enumerate() {
        if i < p && j < q && gain(i, j) < 0.0 {
            relation.insert((i, j));
            left_covered[i] = true;
            right_covered[j] = true;
        }
    }
    for i in (0..p).filter(|&i| !left_covered[i]) {
        relation.insert((i, cheapest_right[i]));
    }
    for j in (0..q).filter(|&j| !right_covered[j]) {
        relation.insert((cheapest_left[j], j));
    }

    let value = sum(relation.iter().map(|&(i, j)| costs[i][j]));
    let pairs = relation
        .into_iter()
        .map(|(i, j)| {
            let (x, y) = (left.elements()[i].clone(), right.elements()[j].clone());
            if swapped {
                (y, x)
            } else {
                (x, y)
            }
        })
        .collect();
    Ok((value, pairs))
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (idx, v) in values.enumerate() {
        if v < best.1 {
            best = (idx, v);
        }
    }
    best.0
}

/// The link distance by enumerating every subset of `a × b`.
pub fn link_distance_enumerated(space: &GroundSpace, a: &PointSet, b: &PointSet) -> Result<f64> {
    require_nonempty(a, b, "the link distance")?;
    let size = a.len() * b.len();
    if size > LINK_ENUMERATION_CAP {
        return Err(Error::Size {
            size,
            cap: LINK_ENUMERATION_CAP,
        });
    }
    check_sets(space, a, b)?;
    let (left, right, _) = orient(a, b);
    let costs = distance_table(space, left, right);
    let (p, q) = (left.len(), right.len());
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << size) {
        let mut left_hit = vec![false; p];
        let mut right_hit = vec![false; q];
        let mut total = 0.0;
        for bit in 0..size {
            if mask >> bit & 1 == 1 {
                let (i, j) = (bit / q, bit % q);
                left_hit[i] = true;
                right_hit[j] = true;
                total += costs[i][j];
            }
        }
        if total < best && left_hit.iter().all(|&h| h) && right_hit.iter().all(|&h| h) {
            best = total;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> GroundSpace {
        GroundSpace::euclidean_box(vec![(0.0, 1.0)]).unwrap()
    }

    fn reals(xs: &[f64]) -> PointSet {
        PointSet::new(&line(), xs.iter().map(|&x| Element::Vector(vec![x]))).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn identical_sets_are_at_zero() {
        let s = line();
        let a = reals(&[0.0, 0.3, 0.7]);
        for kind in ComparisonKind::ALL {
            assert_eq!(kind.compute(&s, &a, &a).unwrap(), 0.0, "{kind}");
        }
    }

    #[test]
    fn hausdorff_examples() {
        let s = line();
        assert!(close(hausdorff(&s, &reals(&[0.2]), &reals(&[0.9])).unwrap(), 0.7));
        assert_eq!(hausdorff(&s, &reals(&[0.0]), &reals(&[0.0, 1.0])).unwrap(), 1.0);
    }

    #[test]
    fn sum_min_examples() {
        let s = line();
        assert_eq!(sum_min_distance(&s, &reals(&[0.0]), &reals(&[0.0, 1.0])).unwrap(), 0.5);
        assert_eq!(sum_min_distance(&s, &reals(&[0.0, 1.0]), &reals(&[0.0, 1.0])).unwrap(), 0.0);
    }

    #[test]
    fn surjective_examples() {
        let s = line();
        assert_eq!(surjective_distance(&s, &reals(&[0.0]), &reals(&[0.0, 1.0])).unwrap(), 1.0);
        let d = surjective_distance(&s, &reals(&[0.0, 1.0]), &reals(&[0.0, 0.4, 1.0])).unwrap();
        assert!(close(d, 0.4));
    }

    #[test]
    fn fair_surjective_examples() {
        let s = line();
        assert_eq!(fair_surjective_distance(&s, &reals(&[0.0]), &reals(&[0.0, 1.0])).unwrap(), 1.0);
        // Fair surjections {0, 0.1, 0.2, 1} -> {0, 1} have two preimages each;
        // the six splits cost 0.9, 1.1, 1.3, 2.7, 2.9, 3.1.
        let d = fair_surjective_distance(&s, &reals(&[0.0, 1.0]), &reals(&[0.0, 0.1, 0.2, 1.0]))
            .unwrap();
        assert!(close(d, 0.9), "{d}");
        // The unrestricted surjection sends 0, 0.1, 0.2 to 0.
        let d = surjective_distance(&s, &reals(&[0.0, 1.0]), &reals(&[0.0, 0.1, 0.2, 1.0])).unwrap();
        assert!(close(d, 0.3), "{d}");
    }

    #[test]
    fn link_examples() {
        let s = line();
        assert_eq!(link_distance(&s, &reals(&[0.0]), &reals(&[0.0, 1.0])).unwrap(), 1.0);
        let (d, relation) = link_relation(&s, &reals(&[0.0, 1.0]), &reals(&[0.1])).unwrap();
        assert!(close(d, 1.0));
        assert_eq!(relation.len(), 2);
        assert!(relation.iter().all(|(_, y)| *y == Element::Vector(vec![0.1])));
    }

    #[test]
    fn empty_inputs_are_rejected() {
        let s = line();
        for kind in ComparisonKind::ALL {
            assert!(matches!(
                kind.compute(&s, &PointSet::empty(), &reals(&[0.5])),
                Err(Error::Domain(_))
            ));
        }
        assert!(link_distance_enumerated(&s, &reals(&[0.5]), &PointSet::empty()).is_err());
    }

    #[test]
    fn caps() {
        let s = line();
        let big = reals(&[0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]);
        assert!(matches!(surjective_distance(&s, &big, &big), Err(Error::Size { .. })));
        let five = reals(&[0.0, 0.1, 0.2, 0.3, 0.4]);
        assert!(matches!(link_distance_enumerated(&s, &five, &five), Err(Error::Size { .. })));
        assert!(link_distance(&s, &big, &big).is_ok());
    }

    #[test]
    fn parse_kind() {
        assert_eq!("md".parse::<ComparisonKind>().unwrap(), ComparisonKind::SumMin);
        assert_eq!("fair".parse::<ComparisonKind>().unwrap(), ComparisonKind::FairSurjective);
        assert!("subset".parse::<ComparisonKind>().is_err());
    }
}
