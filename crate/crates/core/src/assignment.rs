//! Minimum-cost perfect assignment on square cost matrices.
//!
//! [`solve_assignment`] is the O(n^3) Hungarian method with row and column
//! potentials (shortest augmenting paths, one row at a time).
//! [`brute_force_assignment`] enumerates all permutations and serves as the
//! reference for small `n`.

use serde::Serialize;

use crate::error::{validation, Error, Result};
use crate::ground_space::sum;

/// Largest `n` accepted by [`brute_force_assignment`].
pub const BRUTE_FORCE_CAP: usize = 9;

/// A square matrix of finite, nonnegative costs stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CostMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(validation("cost matrix must have at least one row"));
        }
        if entries.len() != n * n {
            return Err(validation(format!(
                "cost matrix of order {n} needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some((idx, &bad)) = entries
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_finite() || **c < 0.0)
        {
            return Err(validation(format!(
                "cost entry ({}, {}) = {bad} must be finite and nonnegative",
                idx / n,
                idx % n
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(row) = rows.iter().find(|r| r.len() != n) {
            return Err(validation(format!(
                "cost matrix is not square: row of length {} in a matrix with {n} rows",
                row.len()
            )));
        }
        Self::new(n, rows.concat())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    /// Total cost of assigning row `i` to column `permutation[i]`.
    pub fn cost_of(&self, permutation: &[usize]) -> f64 {
        sum(permutation.iter().enumerate().map(|(i, &j)| self.get(i, j)))
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.n, self.entries.iter().map(|c| c * factor).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assignment {
    /// Row `i` is assigned to column `permutation[i]`.
    pub permutation: Vec<usize>,
    pub total_cost: f64,
}

/// Solves the assignment problem exactly.
///
/// The result depends only on the matrix, so equal inputs give equal outputs.
pub fn solve_assignment(costs: &CostMatrix) -> Assignment {
    let n = costs.n;
    // 1-based arrays; index 0 is the virtual column that starts each search.
    let mut row_pot = vec![0.0_f64; n + 1];
    let mut col_pot = vec![0.0_f64; n + 1];
    let mut col_owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut min_slack = vec![0.0_f64; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        col_owner[0] = row;
        let mut col0 = 0usize;
        min_slack.fill(f64::INFINITY);
        used.fill(false);

        loop {
            used[col0] = true;
            let i0 = col_owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0usize;
            let base = (i0 - 1) * n;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = costs.entries[base + j - 1] - row_pot[i0] - col_pot[j];
                if reduced < min_slack[j] {
                    min_slack[j] = reduced;
                    way[j] = col0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    col1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    row_pot[col_owner[j]] += delta;
                    col_pot[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            col0 = col1;
            if col_owner[col0] == 0 {
                break;
            }
        }

        // Flip the augmenting path back to the virtual column.
        loop {
            let prev = way[col0];
            col_owner[col0] = col_owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }

    let mut permutation = vec![0usize; n];
    for j in 1..=n {
        permutation[col_owner[j] - 1] = j - 1;
    }
    let total_cost = costs.cost_of(&permutation);
    Assignment {
        permutation,
        total_cost,
    }
}

/// Exact minimum by enumerating all `n!` permutations. Among equal costs the
/// first permutation in lexicographic order wins.
pub fn brute_force_assignment(costs: &CostMatrix) -> Result<Assignment> {
    let n = costs.n;
    if n > BRUTE_FORCE_CAP {
        return Err(Error::Size {
            size: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut best = Assignment {
        permutation: (0..n).collect(),
        total_cost: f64::INFINITY,
    };
    let mut current = Vec::with_capacity(n);
    let mut taken = vec![false; n];
    search(costs, 0.0, &mut current, &mut taken, &mut best);
    // Re-sum in row order so the value matches `cost_of` bit for bit.
    best.total_cost = costs.cost_of(&best.permutation);
    Ok(best)
}

fn search(
    costs: &CostMatrix,
    partial: f64,
    current: &mut Vec<usize>,
    taken: &mut [bool],
    best: &mut Assignment,
) {
    let row = current.len();
    if row == costs.n {
        if partial < best.total_cost {
            best.total_cost = partial;
            best.permutation.clone_from(current);
        }
        return;
    }
    for col in 0..costs.n {
        if taken[col] {
            continue;
        }
        taken[col] = true;
        current.push(col);
        search(costs, partial + costs.get(row, col), current, taken, best);
        current.pop();
        taken[col] = false;
    }
}
