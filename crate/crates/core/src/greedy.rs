//! Greedy partition of the non-negative integers into 3-free sequences.
//!
//! `S_0` is the lexicographically earliest 3-free sequence on `N`; each
//! later `S_i` is the earliest 3-free sequence on what the previous ones left
//! over. Whether `n` can join `S_j` depends only on the members of `S_j`
//! below `n`, so filling all rows at once in increasing `n`, each value going
//! to the first row that accepts it, yields the same rows as completing
//! `S_0`, then `S_1`, and so on.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::radix::{represent_u64, RationalBase};

pub const DEFAULT_ROW_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreedyError {
    #[error("bound must be at least 1")]
    EmptyBound,
    #[error("partition would need more than {cap} rows")]
    RowCapExceeded { cap: usize },
    #[error("only {found} rows start below the bound; a bound of {needed} is known to suffice")]
    InsufficientBound { found: usize, needed: u64 },
}

/// The rows `S_0, S_1, ...` restricted to `[0, bound)`.
#[derive(Debug, Clone)]
pub struct GreedyPartition {
    bound: u64,
    row_of: Vec<u32>,
    rows: Vec<Vec<u64>>,
}

impl GreedyPartition {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Row index of `n`, or `None` when `n` is outside `[0, bound)`.
    pub fn row_of(&self, n: u64) -> Option<usize> {
        self.row_of.get(usize::try_from(n).ok()?).map(|&r| r as usize)
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Terms of row `i` in increasing order; empty for rows not yet started.
    pub fn row(&self, i: usize) -> &[u64] {
        self.rows.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }
}

pub fn build_partition(limit: u64) -> Result<GreedyPartition, GreedyError> {
    build_partition_with_cap(limit, DEFAULT_ROW_CAP)
}

pub fn build_partition_with_cap(limit: u64, row_cap: usize) -> Result<GreedyPartition, GreedyError> {
    if limit == 0 {
        return Err(GreedyError::EmptyBound);
    }
    let len = usize::try_from(limit).expect("bound exceeds address space");
    let mut row_of: Vec<u32> = Vec::with_capacity(len);
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for n in 0..limit {
        let row = (0..rows.len())
            .find(|&j| !blocks(&rows[j], j as u32, &row_of, n))
            .unwrap_or(rows.len());
        if row == rows.len() {
            if rows.len() == row_cap {
                return Err(GreedyError::RowCapExceeded { cap: row_cap });
            }
            rows.push(Vec::new());
        }
        rows[row].push(n);
        row_of.push(row as u32);
    }
    Ok(GreedyPartition {
        bound: limit,
        row_of,
        rows,
    })
}

/// Whether some `a < b` in `row` (index `j`) has `2b - a = n`. Every member
/// of `row` is below `n`, so only `b >= n/2` can contribute.
fn blocks(row: &[u64], j: u32, row_of: &[u32], n: u64) -> bool {
    row.iter()
        .rev()
        .take_while(|&&b| 2 * b >= n)
        .any(|&b| row_of[(2 * b - n) as usize] == j)
}

/// True iff no `a < b` in `row_terms` satisfies `2b - a = n`.
pub fn is_ap_free_extension(row_terms: &BTreeSet<u64>, n: u64) -> bool {
    !row_terms
        .range(n.div_ceil(2)..n)
        .any(|&b| row_terms.contains(&(2 * b - n)))
}

/// First terms of rows `0..k`.
pub fn cross_sequence(partition: &GreedyPartition, k: usize) -> Result<Vec<u64>, GreedyError> {
    if partition.row_count() < k {
        return Err(GreedyError::InsufficientBound {
            found: partition.row_count(),
            needed: known_sufficient_bound(k),
        });
    }
    Ok(partition.rows[..k].iter().map(|row| row[0]).collect())
}

/// A bound under which rows `0..k` are all known to have started: one past
/// `(2(k-1))_{3/2}` read in base 3.
pub fn known_sufficient_bound(k: usize) -> u64 {
    if k == 0 {
        return 1;
    }
    let first = represent_u64(2 * (k as u64 - 1), RationalBase::THREE_HALVES);
    first
        .ternary_u64()
        .and_then(|v| v.checked_add(1))
        .unwrap_or(u64::MAX)
}

/// Some 3-term progression `a < b < c` inside a sorted row, if one exists.
pub fn find_progression(row: &[u64]) -> Option<[u64; 3]> {
    let members: HashSet<u64> = row.iter().copied().collect();
    for (i, &a) in row.iter().enumerate() {
        for &b in &row[i + 1..] {
            let c = 2 * b - a;
            if members.contains(&c) {
                return Some([a, b, c]);
            }
        }
    }
    None
}

/// Same as [`find_progression`] but by trying every triple.
pub fn find_progression_exhaustive(row: &[u64]) -> Option<[u64; 3]> {
    for (i, &a) in row.iter().enumerate() {
        for (j, &b) in row.iter().enumerate().skip(i + 1) {
            for &c in &row[j + 1..] {
                if a + c == 2 * b {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

/// Checks the defining property of the partition: every `n` in row `i`
/// completes a progression in each earlier row. Returns the first `(n, j)`
/// where row `j < row_of(n)` has no such pair.
pub fn minimality_violation(partition: &GreedyPartition) -> Option<(u64, usize)> {
    let sets: Vec<BTreeSet<u64>> = partition
        .rows
        .iter()
        .map(|r| r.iter().copied().collect())
        .collect();
    (0..partition.bound).find_map(|n| {
        let row = partition.row_of[n as usize] as usize;
        (0..row)
            // a = 2b - n < b < n, so members at or above n never matter
            .find(|&j| is_ap_free_extension(&sets[j], n))
            .map(|j| (n, j))
    })
}
