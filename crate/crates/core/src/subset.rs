//! The subset metric `d_S` on finite subsets of a bounded metric space.
//!
//! For `|A| <= |B|` and an injection `chi: A -> B`,
//!
//! ```text
//! d_chi(A, B) = sum_{x in A} d(x, chi(x)) + sum_{y in B \ chi(A)} M(y)
//! ```
//!
//! and `d_S(A, B) = d_S(B, A)` is the minimum of `d_chi` over all injections.
//! Some optimal injection fixes `A ∩ B` pointwise, so the distance only depends
//! on `A \ B` and `B \ A`. The remaining problem is a square assignment: one row
//! per element of the smaller side, padded with rows that charge `M(y)` for
//! leaving `y` unmatched.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::assignment::{solve_assignment, CostMatrix};
use crate::error::{validation, Error, Result};
use crate::ground_space::{sum, validate_condition2, Element, GroundSpace, MFunction};

/// Largest set size accepted by [`SubsetMetric::brute_force`].
pub const BRUTE_FORCE_CAP: usize = 7;

/// A finite set of elements of one ground space, kept sorted and free of
/// duplicates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct PointSet {
    elements: Vec<Element>,
}

impl PointSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validates every element against `space` and drops duplicates.
    pub fn new(space: &GroundSpace, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        Self::with_duplicate_count(space, elements).map(|(set, _)| set)
    }

    /// Like [`PointSet::new`], also reporting how many duplicates were dropped.
    pub fn with_duplicate_count(
        space: &GroundSpace,
        elements: impl IntoIterator<Item = Element>,
    ) -> Result<(Self, usize)> {
        let mut all = elements
            .into_iter()
            .map(|x| space.normalize(x))
            .collect::<Result<Vec<_>>>()?;
        let before = all.len();
        all.sort();
        all.dedup();
        let dropped = before - all.len();
        Ok((Self { elements: all }, dropped))
    }

    fn from_sorted(elements: Vec<Element>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.elements.iter()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        Self::from_sorted(
            self.elements
                .iter()
                .filter(|x| !other.contains(x))
                .cloned()
                .collect(),
        )
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        Self::from_sorted(
            self.elements
                .iter()
                .filter(|x| other.contains(x))
                .cloned()
                .collect(),
        )
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut all: Vec<Element> = self.elements.iter().chain(&other.elements).cloned().collect();
        all.sort();
        all.dedup();
        Self::from_sorted(all)
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    /// The subset selected by `keep[i]` for the `i`-th element in canonical order.
    pub fn filter_by(&self, keep: impl Fn(usize) -> bool) -> PointSet {
        Self::from_sorted(
            self.elements
                .iter()
                .enumerate()
                .filter(|(i, _)| keep(*i))
                .map(|(_, x)| x.clone())
                .collect(),
        )
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Element;
    type IntoIter = std::slice::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// An injection from a smaller set into a larger one, as explicit pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Injection {
    /// `(x, chi(x))`, sorted by source.
    pub pairs: Vec<(Element, Element)>,
    pub chi_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetDistanceResult {
    pub value: f64,
    /// An optimal injection from the smaller set into the larger one that fixes
    /// their intersection pointwise.
    pub witness: Injection,
    /// The same injection restricted to the reduced sets.
    pub reduced_witness: Injection,
    /// Source side of the reduced problem.
    pub reduced_a: PointSet,
    /// Target side of the reduced problem.
    pub reduced_b: PointSet,
    /// True when the inputs were swapped so that the source is the smaller set.
    pub swapped: bool,
}

impl SubsetDistanceResult {
    /// Elements of the larger set left unmatched by the witness.
    pub fn unmatched(&self) -> Vec<Element> {
        let targets: BTreeSet<&Element> = self.reduced_witness.pairs.iter().map(|(_, y)| y).collect();
        self.reduced_b
            .iter()
            .filter(|y| !targets.contains(y))
            .cloned()
            .collect()
    }
}

/// Returns `(a \ b, b \ a)`.
pub fn symmetric_difference_reduce(a: &PointSet, b: &PointSet) -> (PointSet, PointSet) {
    (a.difference(b), b.difference(a))
}

/// Orders a pair so the first set is no larger than the second, breaking size
/// ties by the canonical order of the sets. The boolean reports a swap.
pub(crate) fn orient<'s>(a: &'s PointSet, b: &'s PointSet) -> (&'s PointSet, &'s PointSet, bool) {
    let swap = match a.len().cmp(&b.len()) {
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => a > b,
    };
    if swap {
        (b, a, true)
    } else {
        (a, b, false)
    }
}

/// A ground space together with a boundary-weight function satisfying
/// the boundary-weight condition.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetMetric {
    space: GroundSpace,
    m: MFunction,
}

impl SubsetMetric {
    /// Binds `m` to `space`. Table-valued `M` is checked against the boundary-weight condition
    /// on its own support and rejected on any violation.
    pub fn new(space: GroundSpace, m: MFunction) -> Result<Self> {
        let metric = Self::new_unchecked(space, m)?;
        if let Some(support) = metric.m.table_support() {
            let report = validate_condition2(&metric.space, &metric.m, &support)?;
            if let Some(v) = report.violations.first() {
                return Err(Error::Condition2(format!(
                    "{v} ({} violations in total)",
                    report.violations.len()
                )));
            }
        }
        Ok(metric)
    }

    /// Binds `m` to `space` without the boundary-weight condition check on tables. Used to
    /// inspect an `M` that is known or suspected to be invalid.
    pub fn new_unchecked(space: GroundSpace, m: MFunction) -> Result<Self> {
        m.check(&space)?;
        Ok(Self { space, m })
    }

    pub fn space(&self) -> &GroundSpace {
        &self.space
    }

    pub fn m(&self) -> &MFunction {
        &self.m
    }

    pub fn m_value(&self, x: &Element) -> Result<f64> {
        self.m.value(&self.space, x)
    }

    fn check_set(&self, set: &PointSet) -> Result<()> {
        set.iter().try_for_each(|x| self.space.check(x))
    }

    fn m_values(&self, set: &PointSet) -> Result<Vec<f64>> {
        set.iter()
            .map(|y| self.m.value_unchecked(&self.space, y))
            .collect()
    }

    /// Evaluates `d_chi(a, b)` for an explicit injection `chi: a -> b`.
    pub fn chi_distance(&self, a: &PointSet, b: &PointSet, chi: &[(Element, Element)]) -> Result<f64> {
        if a.len() > b.len() {
            return Err(Error::Domain(format!(
                "injection source has {} elements but target only {}",
                a.len(),
                b.len()
            )));
        }
        self.check_set(a)?;
        self.check_set(b)?;
        if chi.len() != a.len() {
            return Err(validation(format!(
                "injection has {} pairs for a source of {} elements",
                chi.len(),
                a.len()
            )));
        }
        let mut pairs: Vec<&(Element, Element)> = chi.iter().collect();
        pairs.sort_by(|p, q| p.0.cmp(&q.0));
        let mut targets = BTreeSet::new();
        for (i, (x, y)) in pairs.iter().enumerate() {
            if !a.contains(x) {
                return Err(validation(format!("injection source {x} is not in the source set")));
            }
            if i > 0 && pairs[i - 1].0 == *x {
                return Err(validation(format!("injection maps {x} twice")));
            }
            if !b.contains(y) {
                return Err(validation(format!("injection target {y} is not in the target set")));
            }
            if !targets.insert(y) {
                return Err(validation(format!("injection hits {y} twice")));
            }
        }
        let matched = sum(pairs.iter().map(|(x, y)| self.space.distance_unchecked(x, y)));
        let mut unmatched = 0.0;
        for y in b.iter().filter(|y| !targets.contains(y)) {
            unmatched += self.m.value_unchecked(&self.space, y)?;
        }
        Ok(matched + unmatched)
    }

    /// Same summation order as [`SubsetMetric::chi_distance`]: matched pairs by
    /// source, then unmatched targets in canonical order.
    fn sum_chi(&self, source: &PointSet, target: &PointSet, target_m: &[f64], image: &[usize]) -> f64 {
        let matched = sum(
            source
                .iter()
                .zip(image)
                .map(|(x, &j)| self.space.distance_unchecked(x, &target.elements[j])),
        );
        let mut hit = vec![false; target.len()];
        for &j in image {
            hit[j] = true;
        }
        let unmatched = sum(
            target_m
                .iter()
                .zip(&hit)
                .filter(|(_, &h)| !h)
                .map(|(&m, _)| m),
        );
        matched + unmatched
    }

    /// Optimal image of each source element in `target` (by index), using the
    /// padded square assignment.
    fn assign(&self, source: &PointSet, target: &PointSet, target_m: &[f64]) -> Vec<usize> {
        let k = target.len();
        if k == 0 {
            return Vec::new();
        }
        let mut entries = Vec::with_capacity(k * k);
        for x in source {
            entries.extend(target.iter().map(|y| self.space.distance_unchecked(x, y)));
        }
        for _ in source.len()..k {
            entries.extend_from_slice(target_m);
        }
        let costs = CostMatrix::new(k, entries).expect("distances and M values are finite and nonnegative");
        let mut image = solve_assignment(&costs).permutation;
        image.truncate(source.len());
        image
    }

    fn result(
        &self,
        source: &PointSet,
        target: &PointSet,
        target_m: &[f64],
        image: &[usize],
        common: &PointSet,
        swapped: bool,
    ) -> SubsetDistanceResult {
        let value = self.sum_chi(source, target, target_m, image);
        let reduced_pairs: Vec<(Element, Element)> = source
            .iter()
            .zip(image)
            .map(|(x, &j)| (x.clone(), target.elements[j].clone()))
            .collect();
        let mut full_pairs: Vec<(Element, Element)> = reduced_pairs
            .iter()
            .cloned()
            .chain(common.iter().map(|x| (x.clone(), x.clone())))
            .collect();
        full_pairs.sort_by(|p, q| p.0.cmp(&q.0));
        SubsetDistanceResult {
            value,
            witness: Injection {
                pairs: full_pairs,
                chi_cost: value,
            },
            reduced_witness: Injection {
                pairs: reduced_pairs,
                chi_cost: value,
            },
            reduced_a: source.clone(),
            reduced_b: target.clone(),
            swapped,
        }
    }

    /// `d_S(a, b)`, computed on `(a \ b, b \ a)` by a padded assignment.
    pub fn distance(&self, a: &PointSet, b: &PointSet) -> Result<SubsetDistanceResult> {
        self.check_set(a)?;
        self.check_set(b)?;
        let (ra, rb) = symmetric_difference_reduce(a, b);
        let common = a.intersection(b);
        let (source, target, swapped) = orient(&ra, &rb);
        let target_m = self.m_values(target)?;
        let image = self.assign(source, target, &target_m);
        Ok(self.result(source, target, &target_m, &image, &common, swapped))
    }

    /// `d_S(a, b)` through the padded assignment on the full sets, skipping the
    /// symmetric-difference reduction.
    pub fn distance_without_reduction(&self, a: &PointSet, b: &PointSet) -> Result<SubsetDistanceResult> {
        self.check_set(a)?;
        self.check_set(b)?;
        let (source, target, swapped) = orient(a, b);
        let target_m = self.m_values(target)?;
        let image = self.assign(source, target, &target_m);
        Ok(self.result(source, target, &target_m, &image, &PointSet::empty(), swapped))
    }

    /// `d_S(a, b)` by enumerating every injection from the smaller set into the
    /// larger one, with no reduction.
    pub fn brute_force(&self, a: &PointSet, b: &PointSet) -> Result<SubsetDistanceResult> {
        let size = a.len().max(b.len());
        if size > BRUTE_FORCE_CAP {
            return Err(Error::Size {
                size,
                cap: BRUTE_FORCE_CAP,
            });
        }
        self.check_set(a)?;
        self.check_set(b)?;
        let (source, target, swapped) = orient(a, b);
        let target_m = self.m_values(target)?;

        let mut best_image = Vec::new();
        let mut best = f64::INFINITY;
        let mut image = Vec::with_capacity(source.len());
        let mut taken = vec![false; target.len()];
        self.enumerate_injections(source, target, &target_m, &mut image, &mut taken, &mut best, &mut best_image);
        Ok(self.result(source, target, &target_m, &best_image, &PointSet::empty(), swapped))
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_injections(
        &self,
        source: &PointSet,
        target: &PointSet,
        target_m: &[f64],
        image: &mut Vec<usize>,
        taken: &mut [bool],
        best: &mut f64,
        best_image: &mut Vec<usize>,
    ) {
        if image.len() == source.len() {
            let value = self.sum_chi(source, target, target_m, image);
            if value < *best {
                *best = value;
                best_image.clone_from(image);
            }
            return;
        }
        for j in 0..target.len() {
            if taken[j] {
                continue;
            }
            taken[j] = true;
            image.push(j);
            self.enumerate_injections(source, target, target_m, image, taken, best, best_image);
            image.pop();
            taken[j] = false;
        }
    }
}

/// The sequence-subset distance on words of length `length` over `alphabet`:
/// the subset metric with `M` fixed at `length`.
pub fn sequence_subset_distance(alphabet: &str, length: usize, a: &PointSet, b: &PointSet) -> Result<f64> {
    let space = GroundSpace::hamming(alphabet, length)?;
    let metric = SubsetMetric::new(space, MFunction::Constant(length as f64))?;
    Ok(metric.distance(a, b)?.value)
}
