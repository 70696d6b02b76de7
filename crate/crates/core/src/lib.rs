//! Distances between finite subsets of a bounded metric space.
//!
//! The central object is the subset metric [`SubsetMetric`]: for sets `A`, `B`
//! with `|A| <= |B|` it charges the ground distance along the best injection
//! `A -> B` plus a boundary weight `M(y)` for every element of `B` left
//! unmatched. It is computed exactly through a square assignment problem and
//! can be cross-checked against [`SubsetMetric::brute_force`].
//!
//! [`comparison`] holds the classical set distances (Hausdorff, sum of minimum
//! distances, surjective, fair-surjective, link) for side-by-side use.

pub mod assignment;
pub mod cli;
pub mod comparison;
pub mod error;
pub mod ground_space;
pub mod subset;
pub mod workspace;

pub use assignment::{brute_force_assignment, solve_assignment, Assignment, CostMatrix};
pub use comparison::ComparisonKind;
pub use error::{Error, Result};
pub use ground_space::{validate_condition2, Element, GroundSpace, MFunction};
pub use subset::{
    sequence_subset_distance, symmetric_difference_reduce, Injection, PointSet,
    SubsetDistanceResult, SubsetMetric,
};
pub use workspace::{MSpec, Workspace};
