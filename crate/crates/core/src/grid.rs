//! The grid `G` of `{0,1,2}` strings.
//!
//! Row 0 holds the `{0,1}` strings in counting order (`G(0, j)` is `j` in
//! binary) and `G(i + 1, j)` is `G(i, j)` plus 2 in base 3/2. Every canonical
//! `{0,1,2}` string occurs exactly once, so [`row_of`] and [`locate`] are
//! well defined; they walk the carry rule backwards until no 2 is left.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use serde::Serialize;
use thiserror::Error;

use crate::radix::{add_two, DigitString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("{0:?} is not a canonical string over the digits 0, 1, 2")]
    InvalidInput(String),
    #[error("column of {0:?} does not fit in 64 bits")]
    ColumnOverflow(String),
    #[error("failed to serialize grid window: {0}")]
    Serialize(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GridCoord {
    pub row: u64,
    pub col: u64,
}

impl GridCoord {
    pub const fn new(row: u64, col: u64) -> Self {
        GridCoord { row, col }
    }
}

impl fmt::Display for GridCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// A grid column being walked downwards, digits stored least significant
/// first so the carry rule can grow the string at the far end.
#[derive(Debug, Clone)]
pub(crate) struct ColumnCursor {
    lsd: Vec<u8>,
}

impl ColumnCursor {
    pub(crate) fn top(col: u64) -> Self {
        let mut lsd = DigitString::binary(col).into_digits();
        lsd.reverse();
        ColumnCursor { lsd }
    }

    pub(crate) fn step(&mut self) {
        let zero_at = match self.lsd.iter().position(|&d| d == 0) {
            Some(i) => i,
            None => {
                self.lsd.push(0);
                self.lsd.len() - 1
            }
        };
        for d in &mut self.lsd[..=zero_at] {
            *d = (*d + 2) % 3;
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.lsd.len()
    }

    pub(crate) fn ternary_u64(&self) -> Option<u64> {
        self.lsd
            .iter()
            .rev()
            .try_fold(0u64, |acc, &d| acc.checked_mul(3)?.checked_add(u64::from(d)))
    }

    pub(crate) fn to_digit_string(&self) -> DigitString {
        DigitString::from_digits(self.lsd.iter().rev().copied().collect())
    }
}

/// `G(i, j)`, by `i` applications of the carry rule to `j` in binary.
pub fn cell(coord: GridCoord) -> DigitString {
    let mut w = DigitString::binary(coord.col);
    for _ in 0..coord.row {
        w = add_two(&w).expect("grid strings use digits 0..=2");
    }
    w
}

/// `G` with a per-column cache; cells are computed on first use and shared
/// read-only afterwards.
#[derive(Debug, Default)]
pub struct Grid {
    columns: RwLock<HashMap<u64, Vec<DigitString>>>,
}

impl Grid {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cell(&self, coord: GridCoord) -> DigitString {
        let row = coord.row as usize;
        if let Some(column) = self.columns.read().unwrap().get(&coord.col) {
            if let Some(w) = column.get(row) {
                return w.clone();
            }
        }
        let mut columns = self.columns.write().unwrap();
        let column = columns
            .entry(coord.col)
            .or_insert_with(|| vec![DigitString::binary(coord.col)]);
        while column.len() <= row {
            let next = add_two(column.last().unwrap()).expect("grid strings use digits 0..=2");
            column.push(next);
        }
        column[row].clone()
    }
}

/// The suffix of `w` starting at its leftmost 2; empty when `w` has no 2.
pub fn main_suffix(w: &DigitString) -> DigitString {
    match w.digits().iter().position(|&d| d == 2) {
        Some(i) => DigitString::from_digits(w.digits()[i..].to_vec()),
        None => DigitString::empty(),
    }
}

fn validate(w: &DigitString) -> Result<(), GridError> {
    if w.is_canonical() && w.max_digit().is_some_and(|d| d <= 2) {
        Ok(())
    } else {
        Err(GridError::InvalidInput(w.to_string()))
    }
}

/// Undo the carry rule until only 0s and 1s remain; returns the number of
/// steps taken and the `{0,1}` string reached (least significant digit first).
fn walk_to_top(w: &DigitString) -> (u64, Vec<u8>) {
    let mut lsd: Vec<u8> = w.digits().iter().rev().copied().collect();
    let mut steps = 0u64;
    while let Some(two_at) = lsd.iter().position(|&d| d == 2) {
        for d in &mut lsd[..=two_at] {
            *d = (*d + 1) % 3;
        }
        while lsd.len() > 1 && lsd.last() == Some(&0) {
            lsd.pop();
        }
        steps += 1;
    }
    (steps, lsd)
}

/// The row containing `w`.
///
/// Strings sharing a main suffix share a row, so only the main suffix is
/// walked; an empty main suffix means row 0.
pub fn row_of(w: &DigitString) -> Result<u64, GridError> {
    validate(w)?;
    let suffix = main_suffix(w);
    if suffix.is_empty() {
        return Ok(0);
    }
    Ok(walk_to_top(&suffix).0)
}

/// The coordinate of `w` in `G`.
pub fn locate(w: &DigitString) -> Result<GridCoord, GridError> {
    validate(w)?;
    let (row, top) = walk_to_top(w);
    if top.len() > 64 {
        return Err(GridError::ColumnOverflow(w.to_string()));
    }
    let col = top.iter().rev().fold(0u64, |acc, &d| (acc << 1) | u64::from(d));
    Ok(GridCoord::new(row, col))
}

/// Base-3 values below `bound` of the strings in each of the first `rows`
/// rows, sorted, found by walking columns of `G` directly.
///
/// A value below `bound` has at most `L` ternary digits, `L` being the length
/// of `bound - 1`; such strings sit in columns below `2^L` since columns only
/// grow downwards.
pub fn row_values_below(rows: usize, bound: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new(); rows];
    if bound == 0 || rows == 0 {
        return out;
    }
    let max_len = DigitString::ternary(bound - 1).len();
    for col in 0..(1u64 << max_len) {
        let mut cursor = ColumnCursor::top(col);
        for row in out.iter_mut() {
            if cursor.len() > max_len {
                break;
            }
            if let Some(v) = cursor.ternary_u64().filter(|&v| v < bound) {
                row.push(v);
            }
            cursor.step();
        }
    }
    for row in &mut out {
        row.sort_unstable();
    }
    out
}

/// A `rows x cols` corner of `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridWindow {
    rows: usize,
    cols: usize,
    cells: Vec<Vec<DigitString>>,
}

impl GridWindow {
    /// Materializes `G(i, j)` for `i < rows`, `j < cols`.
    pub fn build(rows: usize, cols: usize) -> Self {
        let mut cells = vec![Vec::with_capacity(cols); rows];
        for col in 0..cols as u64 {
            let mut cursor = ColumnCursor::top(col);
            for row in cells.iter_mut() {
                row.push(cursor.to_digit_string());
                cursor.step();
            }
        }
        GridWindow { rows, cols, cells }
    }

    /// Wraps precomputed rows; every row must have the same length.
    pub fn from_cells(cells: Vec<Vec<DigitString>>) -> Self {
        let rows = cells.len();
        let cols = cells.first().map_or(0, Vec::len);
        assert!(cells.iter().all(|r| r.len() == cols), "ragged grid window");
        GridWindow { rows, cols, cells }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell(&self, row: usize, col: usize) -> &DigitString {
        &self.cells[row][col]
    }

    pub fn row(&self, row: usize) -> &[DigitString] {
        &self.cells[row]
    }

    pub fn cells(&self) -> &[Vec<DigitString>] {
        &self.cells
    }

    /// The top-left `rows x cols` corner of this window.
    pub fn corner(&self, rows: usize, cols: usize) -> GridWindow {
        let cells = self.cells[..rows]
            .iter()
            .map(|r| r[..cols].to_vec())
            .collect();
        GridWindow { rows, cols, cells }
    }

    pub fn to_csv(&self) -> Result<String, GridError> {
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        for row in &self.cells {
            writer
                .write_record(row.iter().map(ToString::to_string))
                .map_err(|e| GridError::Serialize(e.to_string()))?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| GridError::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| GridError::Serialize(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String, GridError> {
        serde_json::to_string(&self.cells).map_err(|e| GridError::Serialize(e.to_string()))
    }
}

impl fmt::Display for GridWindow {
    /// Whitespace-aligned matrix, one grid row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .cells
            .iter()
            .flatten()
            .map(DigitString::len)
            .max()
            .unwrap_or(1);
        for row in &self.cells {
            let line: Vec<String> = row.iter().map(|w| format!("{:<width$}", w.to_string())).collect();
            writeln!(f, "{}", line.join(" ").trim_end())?;
        }
        Ok(())
    }
}
