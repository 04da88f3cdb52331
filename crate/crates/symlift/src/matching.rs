//! Minimum-cost perfect assignment on square cost matrices, with a
//! deterministic lexicographic tie-break.
//!
//! The matching step of a lift asks: which arrangement of the next sample
//! stays closest to the previous tuple? That is an n x n assignment
//! problem. Costs are nonnegative finite displacements.

use crate::error::{Error, Result};

/// Row i of the matrix is assigned column `assignment[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    pub assignment: Vec<usize>,
    pub total: f64,
}

fn check_matrix(cost: &[Vec<f64>]) -> Result<usize> {
    let n = cost.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty cost matrix".into()));
    }
    for row in cost {
        if row.len() != n {
            return Err(Error::InvalidInput("cost matrix must be square".into()));
        }
        for &c in row {
            if !c.is_finite() {
                return Err(Error::InvalidInput("cost entries must be finite".into()));
            }
        }
    }
    Ok(n)
}

/// Folds the selected entries in row order. All totals in this module are
/// computed this way, so equal selections compare bit-equal.
pub fn assignment_total(cost: &[Vec<f64>], assignment: &[usize]) -> f64 {
    assignment
        .iter()
        .enumerate()
        .fold(0.0, |acc, (i, &j)| acc + cost[i][j])
}

/// O(n^3) potentials method. Returns one optimal row -> column assignment.
fn hungarian(cost: &[Vec<f64>], rows: &[usize], cols: &[usize]) -> Vec<usize> {
    let n = rows.len();
    debug_assert_eq!(n, cols.len());
    // 1-indexed internal arrays; way[j] remembers the augmenting path.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1]; // column -> assigned row (1-indexed)
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[rows[i0 - 1]][cols[j - 1]] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[p[j] - 1] = j - 1;
    }
    assignment
}

/// Minimum-cost assignment; among minimum-cost assignments, the
/// lexicographically smallest column vector.
///
/// Rows are fixed one at a time: for row i every still-free column j is
/// tried, the remainder is completed optimally, and the full row-order
/// total decides. Equal totals keep the smaller j, which pins ties from
/// duplicate values to the lowest indices.
pub fn lex_min_assignment(cost: &[Vec<f64>]) -> Result<Assignment> {
    Ok(lex_min_assignment_counting_ties(cost)?.0)
}

/// Same assignment, plus the number of rows whose choice was not forced:
/// rows where more than one free column achieved the optimal total.
pub fn lex_min_assignment_counting_ties(cost: &[Vec<f64>]) -> Result<(Assignment, u64)> {
    let n = check_matrix(cost)?;
    let mut fixed: Vec<usize> = Vec::with_capacity(n);
    let mut free_cols: Vec<usize> = (0..n).collect();
    let mut ties = 0u64;
    for i in 0..n {
        let tail_rows: Vec<usize> = ((i + 1)..n).collect();
        // free_cols stays ascending, so the first winner is the smallest j
        let mut totals: Vec<(usize, f64)> = Vec::with_capacity(free_cols.len());
        for (k, &j) in free_cols.iter().enumerate() {
            let mut candidate = fixed.clone();
            candidate.push(j);
            if !tail_rows.is_empty() {
                let mut rest = free_cols.clone();
                rest.remove(k);
                let sub = hungarian(cost, &tail_rows, &rest);
                candidate.extend(sub.iter().map(|&c| rest[c]));
            }
            totals.push((j, assignment_total(cost, &candidate)));
        }
        let best = totals
            .iter()
            .map(|&(_, t)| t)
            .fold(f64::INFINITY, f64::min);
        let winners: Vec<usize> = totals
            .iter()
            .filter(|&&(_, t)| t == best)
            .map(|&(j, _)| j)
            .collect();
        if winners.len() > 1 {
            ties += 1;
        }
        let j = winners[0];
        fixed.push(j);
        free_cols.retain(|&c| c != j);
    }
    let total = assignment_total(cost, &fixed);
    Ok((
        Assignment {
            assignment: fixed,
            total,
        },
        ties,
    ))
}
