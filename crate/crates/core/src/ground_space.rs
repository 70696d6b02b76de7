//! Bounded metric spaces and the boundary-weight functions `M` defined on them.
//!
//! Three kinds of space are supported: fixed-length strings under the Hamming
//! distance, axis-aligned boxes under the Euclidean norm, and connected graphs
//! with positive edge weights under the shortest-path distance. Each space knows
//! its diameter, and each `M` variant can be evaluated exactly at any element.
//!
//! Every `M` used for subset distances must satisfy
//!
//! ```text
//! d(x, y) <= M(x) <= d(x, z) + M(z)      for all x, y, z
//! ```
//!
//! [`validate_condition2`] checks both inequalities over a finite sample.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{validation, Result};

/// Absolute tolerance for every real-valued comparison in validity checks.
pub const TOLERANCE: f64 = 1e-9;

/// Left-to-right sum starting from +0.0 (`Iterator::sum` starts from -0.0).
pub(crate) fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |acc, x| acc + x)
}

/// A point of a ground space.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Element {
    Symbolic(String),
    Vector(Vec<f64>),
    Vertex(usize),
}

impl Element {
    fn rank(&self) -> u8 {
        match self {
            Element::Symbolic(_) => 0,
            Element::Vector(_) => 1,
            Element::Vertex(_) => 2,
        }
    }
}

// Coordinates compare with `total_cmp`, so the order is total even though the
// payload holds floats. Spaces normalise -0.0 to 0.0 on validation.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Element::Symbolic(a), Element::Symbolic(b)) => a.cmp(b),
            (Element::Vector(a), Element::Vector(b)) => {
                for (x, y) in a.iter().zip(b) {
                    match x.total_cmp(y) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                a.len().cmp(&b.len())
            }
            (Element::Vertex(a), Element::Vertex(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Element {}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Symbolic(s) => write!(f, "\"{s}\""),
            Element::Vector(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Element::Vertex(v) => write!(f, "v{v}"),
        }
    }
}

/// Words of a fixed length over a finite alphabet, with the Hamming distance.
#[derive(Debug, Clone, PartialEq)]
pub struct HammingSpace {
    alphabet: Vec<char>,
    length: usize,
}

impl HammingSpace {
    pub fn new(alphabet: &str, length: usize) -> Result<Self> {
        let chars: Vec<char> = alphabet.chars().collect();
        if chars.is_empty() {
            return Err(validation("hamming alphabet must be nonempty"));
        }
        let mut sorted = chars.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != chars.len() {
            return Err(validation(format!(
                "hamming alphabet `{alphabet}` repeats a symbol"
            )));
        }
        if length == 0 {
            return Err(validation("hamming word length must be at least 1"));
        }
        Ok(Self {
            alphabet: chars,
            length,
        })
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn length(&self) -> usize {
        self.length
    }

    fn check(&self, word: &str) -> Result<()> {
        let mut count = 0;
        for c in word.chars() {
            if !self.alphabet.contains(&c) {
                return Err(validation(format!(
                    "symbol `{c}` of `{word}` is not in the alphabet"
                )));
            }
            count += 1;
        }
        if count != self.length {
            return Err(validation(format!(
                "word `{word}` has length {count}, expected {}",
                self.length
            )));
        }
        Ok(())
    }

    fn distance(a: &str, b: &str) -> f64 {
        a.chars().zip(b.chars()).filter(|(x, y)| x != y).count() as f64
    }
}

/// A closed axis-aligned box in R^n with the Euclidean distance.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanBox {
    bounds: Vec<(f64, f64)>,
}

impl EuclideanBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(validation("euclidean box needs at least one dimension"));
        }
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(validation(format!("bound {i} is not finite")));
            }
            if lo > hi {
                return Err(validation(format!(
                    "bound {i} is empty: lower {lo} > upper {hi}"
                )));
            }
        }
        Ok(Self { bounds })
    }

    /// The unit cube `[0, 1]^dim`.
    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(vec![(0.0, 1.0); dim])
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    fn check(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.bounds.len() {
            return Err(validation(format!(
                "point has dimension {}, expected {}",
                v.len(),
                self.bounds.len()
            )));
        }
        for (i, (&x, &(lo, hi))) in v.iter().zip(&self.bounds).enumerate() {
            if !x.is_finite() || x < lo || x > hi {
                return Err(validation(format!(
                    "coordinate {i} = {x} is outside [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    fn distance(a: &[f64], b: &[f64]) -> f64 {
        sum(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y))).sqrt()
    }

    /// Farthest distance from `v` to any point of the box. The supremum of a
    /// convex function over a box sits at a corner, and the farthest corner is
    /// picked one coordinate at a time.
    fn eccentricity(&self, v: &[f64]) -> f64 {
        sum(v.iter().zip(&self.bounds).map(|(&x, &(lo, hi))| {
            let far = (x - lo).max(hi - x);
            far * far
        }))
        .sqrt()
    }
}

/// A finite connected graph with the shortest-path distance.
///
/// All-pairs distances are computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSpace {
    vertices: usize,
    edges: Vec<(usize, usize, f64)>,
    dist: Vec<f64>,
    diameter: f64,
}

impl GraphSpace {
    pub fn new(vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if vertices == 0 {
            return Err(validation("graph needs at least one vertex"));
        }
        let n = vertices;
        let mut dist = vec![f64::INFINITY; n * n];
        for v in 0..n {
            dist[v * n + v] = 0.0;
        }
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(validation(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(validation(format!(
                    "edge ({u}, {v}) has weight {w}; weights must be positive and finite"
                )));
            }
            if u != v && w < dist[u * n + v] {
                dist[u * n + v] = w;
                dist[v * n + u] = w;
            }
        }
        floyd_warshall(&mut dist, n);
        let mut diameter = 0.0_f64;
        for (idx, &d) in dist.iter().enumerate() {
            if d.is_infinite() {
                return Err(validation(format!(
                    "graph is disconnected: no path from {} to {}",
                    idx / n,
                    idx % n
                )));
            }
            diameter = diameter.max(d);
        }
        Ok(Self {
            vertices,
            edges,
            dist,
            diameter,
        })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    fn check(&self, v: usize) -> Result<()> {
        if v >= self.vertices {
            return Err(validation(format!(
                "vertex {v} is not in the graph (0..{})",
                self.vertices
            )));
        }
        Ok(())
    }

    fn distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.vertices + b]
    }

    fn eccentricity(&self, v: usize) -> f64 {
        let n = self.vertices;
        self.dist[v * n..(v + 1) * n]
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }
}

fn floyd_warshall(dist: &mut [f64], n: usize) {
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let through = dik + dist[k * n + j];
                if through < dist[i * n + j] {
                    dist[i * n + j] = through;
                }
            }
        }
    }
}

/// A bounded metric space.
#[derive(Debug, Clone, PartialEq)]
pub enum GroundSpace {
    Hamming(HammingSpace),
    EuclideanBox(EuclideanBox),
    Graph(GraphSpace),
}

impl GroundSpace {
    pub fn hamming(alphabet: &str, length: usize) -> Result<Self> {
        HammingSpace::new(alphabet, length).map(GroundSpace::Hamming)
    }

    pub fn euclidean_box(bounds: Vec<(f64, f64)>) -> Result<Self> {
        EuclideanBox::new(bounds).map(GroundSpace::EuclideanBox)
    }

    pub fn graph(vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        GraphSpace::new(vertices, edges).map(GroundSpace::Graph)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GroundSpace::Hamming(_) => "hamming",
            GroundSpace::EuclideanBox(_) => "euclidean_box",
            GroundSpace::Graph(_) => "graph",
        }
    }

    /// True when every distance is an integer, so sums of distances are exact.
    pub fn is_integer_valued(&self) -> bool {
        match self {
            GroundSpace::Hamming(_) => true,
            GroundSpace::EuclideanBox(_) => false,
            GroundSpace::Graph(g) => g.edges.iter().all(|&(_, _, w)| w.fract() == 0.0),
        }
    }

    /// Checks that `x` is a point of this space.
    pub fn check(&self, x: &Element) -> Result<()> {
        match (self, x) {
            (GroundSpace::Hamming(h), Element::Symbolic(s)) => h.check(s),
            (GroundSpace::EuclideanBox(b), Element::Vector(v)) => b.check(v),
            (GroundSpace::Graph(g), Element::Vertex(v)) => g.check(*v),
            _ => Err(validation(format!(
                "element {x} does not belong to a {} space",
                self.kind_name()
            ))),
        }
    }

    /// Validates `x` and maps it to its canonical representative.
    pub fn normalize(&self, x: Element) -> Result<Element> {
        self.check(&x)?;
        Ok(match x {
            // -0.0 and 0.0 are the same point.
            Element::Vector(v) => {
                Element::Vector(v.into_iter().map(|c| if c == 0.0 { 0.0 } else { c }).collect())
            }
            other => other,
        })
    }

    pub fn distance(&self, a: &Element, b: &Element) -> Result<f64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.distance_unchecked(a, b))
    }

    /// Distance between two elements already known to belong to this space.
    pub(crate) fn distance_unchecked(&self, a: &Element, b: &Element) -> f64 {
        match (self, a, b) {
            (GroundSpace::Hamming(_), Element::Symbolic(x), Element::Symbolic(y)) => {
                HammingSpace::distance(x, y)
            }
            (GroundSpace::EuclideanBox(_), Element::Vector(x), Element::Vector(y)) => {
                EuclideanBox::distance(x, y)
            }
            (GroundSpace::Graph(g), Element::Vertex(x), Element::Vertex(y)) => g.distance(*x, *y),
            _ => unreachable!("elements were validated against the space"),
        }
    }

    /// Supremum of all pairwise distances.
    pub fn diameter(&self) -> f64 {
        match self {
            GroundSpace::Hamming(h) => {
                if h.alphabet.len() >= 2 {
                    h.length as f64
                } else {
                    0.0
                }
            }
            GroundSpace::EuclideanBox(b) => {
                sum(b.bounds.iter().map(|(lo, hi)| (hi - lo) * (hi - lo))).sqrt()
            }
            GroundSpace::Graph(g) => g.diameter,
        }
    }

    /// True when the space has at least two distinct points.
    pub fn has_two_points(&self) -> bool {
        match self {
            GroundSpace::Hamming(h) => h.alphabet.len() >= 2,
            GroundSpace::EuclideanBox(b) => b.bounds.iter().any(|(lo, hi)| lo < hi),
            GroundSpace::Graph(g) => g.vertices >= 2,
        }
    }

    /// Supremum of `d(x, y)` over all `y` in the space.
    pub fn eccentricity(&self, x: &Element) -> Result<f64> {
        self.check(x)?;
        Ok(self.eccentricity_unchecked(x))
    }

    fn eccentricity_unchecked(&self, x: &Element) -> f64 {
        match (self, x) {
            (GroundSpace::Hamming(h), Element::Symbolic(_)) => {
                // Some word differs from x in every coordinate.
                if h.alphabet.len() >= 2 {
                    h.length as f64
                } else {
                    0.0
                }
            }
            (GroundSpace::EuclideanBox(b), Element::Vector(v)) => b.eccentricity(v),
            (GroundSpace::Graph(g), Element::Vertex(v)) => g.eccentricity(*v),
            _ => unreachable!("elements were validated against the space"),
        }
    }

    /// Every element of a finite space, in canonical order, if there are at most `cap`.
    pub fn enumerate(&self, cap: usize) -> Option<Vec<Element>> {
        match self {
            GroundSpace::Hamming(h) => {
                let total = h.alphabet.len().checked_pow(h.length as u32)?;
                if total > cap {
                    return None;
                }
                let mut out = Vec::with_capacity(total);
                let k = h.alphabet.len();
                for mut code in 0..total {
                    let mut word = vec![h.alphabet[0]; h.length];
                    for slot in word.iter_mut().rev() {
                        *slot = h.alphabet[code % k];
                        code /= k;
                    }
                    out.push(Element::Symbolic(word.into_iter().collect()));
                }
                out.sort();
                Some(out)
            }
            GroundSpace::EuclideanBox(_) => None,
            GroundSpace::Graph(g) => {
                (g.vertices <= cap).then(|| (0..g.vertices).map(Element::Vertex).collect())
            }
        }
    }

    /// Draws a uniformly random element.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        match self {
            GroundSpace::Hamming(h) => Element::Symbolic(
                (0..h.length)
                    .map(|_| h.alphabet[rng.gen_range(0..h.alphabet.len())])
                    .collect(),
            ),
            GroundSpace::EuclideanBox(b) => Element::Vector(
                b.bounds
                    .iter()
                    .map(|&(lo, hi)| if lo < hi { rng.gen_range(lo..=hi) } else { lo })
                    .collect(),
            ),
            GroundSpace::Graph(g) => Element::Vertex(rng.gen_range(0..g.vertices)),
        }
    }
}

/// The boundary weight charged for each unmatched element.
#[derive(Debug, Clone, PartialEq)]
pub enum MFunction {
    /// A constant upper bound on all distances.
    Constant(f64),
    /// The constant diameter of the space.
    Diameter,
    /// `M(x) = sup_y d(x, y)`.
    Eccentricity,
    /// An explicit per-element table. Only elements present in the table can be
    /// used, and the table must pass [`validate_condition2`] before use.
    Table(BTreeMap<Element, f64>),
}

impl MFunction {
    pub fn name(&self) -> String {
        match self {
            MFunction::Constant(c) => format!("constant:{c}"),
            MFunction::Diameter => "diameter".to_string(),
            MFunction::Eccentricity => "eccentricity".to_string(),
            MFunction::Table(_) => "table".to_string(),
        }
    }

    /// Construction-time checks that do not need a sample.
    ///
    /// A constant must dominate the diameter, and the variants that derive
    /// their value from the geometry need a space with two distinct points,
    /// otherwise `M` vanishes and the empty set sits at distance zero.
    pub fn check(&self, space: &GroundSpace) -> Result<()> {
        match self {
            MFunction::Constant(c) => {
                let diameter = space.diameter();
                if !c.is_finite() || *c <= 0.0 {
                    return Err(validation(format!(
                        "constant M = {c} must be positive and finite"
                    )));
                }
                if *c < diameter - TOLERANCE {
                    return Err(validation(format!(
                        "constant M = {c} is below the diameter {diameter}"
                    )));
                }
            }
            MFunction::Diameter | MFunction::Eccentricity => {
                if !space.has_two_points() {
                    return Err(validation(format!(
                        "{} M needs a space with at least two elements",
                        self.name()
                    )));
                }
            }
            MFunction::Table(entries) => {
                if entries.is_empty() {
                    return Err(validation("M table is empty"));
                }
                for (x, &v) in entries {
                    space.check(x)?;
                    if !v.is_finite() || v < 0.0 {
                        return Err(validation(format!(
                            "M table value {v} at {x} must be finite and nonnegative"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Evaluates `M(x)`.
    pub fn value(&self, space: &GroundSpace, x: &Element) -> Result<f64> {
        space.check(x)?;
        self.value_unchecked(space, x)
    }

    pub(crate) fn value_unchecked(&self, space: &GroundSpace, x: &Element) -> Result<f64> {
        match self {
            MFunction::Constant(c) => Ok(*c),
            MFunction::Diameter => Ok(space.diameter()),
            MFunction::Eccentricity => Ok(space.eccentricity_unchecked(x)),
            MFunction::Table(entries) => entries
                .get(x)
                .copied()
                .ok_or_else(|| validation(format!("M table has no entry for {x}"))),
        }
    }

    /// The elements a table is defined on; `None` for the formula variants.
    pub fn table_support(&self) -> Option<Vec<Element>> {
        match self {
            MFunction::Table(entries) => Some(entries.keys().cloned().collect()),
            _ => None,
        }
    }
}

/// One failed inequality of the boundary-weight condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "inequality", rename_all = "snake_case")]
pub enum Condition2Violation {
    /// `d(x, y) > M(x)`.
    DistanceBound {
        x: Element,
        y: Element,
        distance: f64,
        m_x: f64,
    },
    /// `M(x) > d(x, z) + M(z)`.
    Lipschitz {
        x: Element,
        z: Element,
        m_x: f64,
        distance: f64,
        m_z: f64,
    },
}

impl fmt::Display for Condition2Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition2Violation::DistanceBound { x, y, distance, m_x } => {
                write!(f, "d({x}, {y}) = {distance} > M({x}) = {m_x}")
            }
            Condition2Violation::Lipschitz {
                x,
                z,
                m_x,
                distance,
                m_z,
            } => write!(
                f,
                "M({x}) = {m_x} > d({x}, {z}) + M({z}) = {distance} + {m_z}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition2Report {
    pub violations: Vec<Condition2Violation>,
    /// Smallest `M` value over the sample, an empirical lower bound for `M`.
    pub min_m: f64,
    pub sample_size: usize,
}

impl Condition2Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks both inequalities of the boundary-weight condition over every ordered pair of the
/// sample (each inequality involves only two of the three quantified points).
pub fn validate_condition2(
    space: &GroundSpace,
    m: &MFunction,
    sample: &[Element],
) -> Result<Condition2Report> {
    if sample.is_empty() {
        return Err(validation("boundary-weight condition sample is empty"));
    }
    for x in sample {
        space.check(x)?;
    }
    let values = sample
        .iter()
        .map(|x| m.value_unchecked(space, x))
        .collect::<Result<Vec<f64>>>()?;

    let mut violations = Vec::new();
    for (i, x) in sample.iter().enumerate() {
        for (j, y) in sample.iter().enumerate() {
            let d = space.distance_unchecked(x, y);
            if d > values[i] + TOLERANCE {
                violations.push(Condition2Violation::DistanceBound {
                    x: x.clone(),
                    y: y.clone(),
                    distance: d,
                    m_x: values[i],
                });
            }
            if values[i] > d + values[j] + TOLERANCE {
                violations.push(Condition2Violation::Lipschitz {
                    x: x.clone(),
                    z: y.clone(),
                    m_x: values[i],
                    distance: d,
                    m_z: values[j],
                });
            }
        }
    }
    let min_m = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Condition2Report {
        violations,
        min_m,
        sample_size: sample.len(),
    })
}

/// Sampled check of the positive lower bound `M(y) >= M(x) / 2` implied by
/// the boundary-weight condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub min_m: f64,
    pub max_m: f64,
    /// `max_m / 2`: the strongest constant `C = M(x) / 2` the sample offers.
    pub constant: f64,
    pub violations: Vec<(Element, Element)>,
}

impl LowerBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.constant > 0.0
    }
}

pub fn check_lower_bound(
    space: &GroundSpace,
    m: &MFunction,
    sample: &[Element],
) -> Result<LowerBoundReport> {
    if sample.is_empty() {
        return Err(validation("lower-bound sample is empty"));
    }
    let values = sample
        .iter()
        .map(|x| m.value(space, x))
        .collect::<Result<Vec<f64>>>()?;
    let mut violations = Vec::new();
    for (i, x) in sample.iter().enumerate() {
        for (j, y) in sample.iter().enumerate() {
            if values[j] < values[i] / 2.0 - TOLERANCE {
                violations.push((x.clone(), y.clone()));
            }
        }
    }
    let min_m = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max_m = values.iter().copied().fold(0.0, f64::max);
    Ok(LowerBoundReport {
        min_m,
        max_m,
        constant: max_m / 2.0,
        violations,
    })
}
