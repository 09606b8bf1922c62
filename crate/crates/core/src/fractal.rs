//! The halfZ decomposition of `G` and its self-similarity.
//!
//! Cells of `G` group into triples whose strings differ only in a last digit
//! running 0, 1, 2. For anchor `(a, b)`:
//!
//! * upperZ: `(3a, 2b) -> (3a, 2b+1) -> (3a+1, 2b)`
//! * lowerZ: `(3a+1, 2b+1) -> (3a+2, 2b) -> (3a+2, 2b+1)`
//!
//! Replacing every halfZ by its longest common prefix (the lcp) and placing
//! upperZ lcps on even rows, lowerZ lcps on odd rows, reproduces `G`. A
//! level-`m` halfZ is therefore an ordinary halfZ of `G` after `m` zooms, and
//! the cell visited `n`-th when following the segments (lowest level first)
//! holds `n` written in base 3.

pub mod render;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::grid::{self, ColumnCursor, Grid, GridCoord, GridWindow};
use crate::radix::{represent_u64, DigitString, RationalBase};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FractalError {
    #[error("window is {rows}x{cols}; zooming out needs rows divisible by 3 and columns by 2")]
    WindowShape { rows: usize, cols: usize },
    #[error("cells {members:?} do not form a halfZ")]
    NotAHalfZ { members: [GridCoord; 3] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfZKind {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfZ {
    pub kind: HalfZKind,
    pub anchor: (u64, u64),
    pub level: u32,
    /// Cells of the `level`-times zoomed grid, in path order.
    pub members: [GridCoord; 3],
    pub lcp: DigitString,
}

impl HalfZ {
    /// The `3^(level+1)` cells of `G` this halfZ covers, in traversal order.
    pub fn covered_cells(&self) -> Vec<GridCoord> {
        let mut cells = self.members.to_vec();
        for _ in 0..self.level {
            cells = cells.into_iter().flat_map(expand).collect();
        }
        cells
    }
}

/// Member cells of the halfZ of `kind` anchored at `(a, b)`.
pub fn members(kind: HalfZKind, (a, b): (u64, u64)) -> [GridCoord; 3] {
    match kind {
        HalfZKind::Upper => [
            GridCoord::new(3 * a, 2 * b),
            GridCoord::new(3 * a, 2 * b + 1),
            GridCoord::new(3 * a + 1, 2 * b),
        ],
        HalfZKind::Lower => [
            GridCoord::new(3 * a + 1, 2 * b + 1),
            GridCoord::new(3 * a + 2, 2 * b),
            GridCoord::new(3 * a + 2, 2 * b + 1),
        ],
    }
}

/// Kind, anchor and path index (0, 1 or 2) of the halfZ holding `coord`.
pub fn position(coord: GridCoord) -> (HalfZKind, (u64, u64), usize) {
    let (a, b) = (coord.row / 3, coord.col / 2);
    let odd = coord.col % 2 == 1;
    match (coord.row % 3, odd) {
        (0, false) => (HalfZKind::Upper, (a, b), 0),
        (0, true) => (HalfZKind::Upper, (a, b), 1),
        (1, false) => (HalfZKind::Upper, (a, b), 2),
        (1, true) => (HalfZKind::Lower, (a, b), 0),
        (2, false) => (HalfZKind::Lower, (a, b), 1),
        _ => (HalfZKind::Lower, (a, b), 2),
    }
}

/// Where the lcp of a halfZ lands after zooming out.
pub fn zoomed_coord(kind: HalfZKind, (a, b): (u64, u64)) -> GridCoord {
    match kind {
        HalfZKind::Upper => GridCoord::new(2 * a, b),
        HalfZKind::Lower => GridCoord::new(2 * a + 1, b),
    }
}

/// The three cells one level down whose halfZ zooms out to `coord`.
pub fn expand(coord: GridCoord) -> [GridCoord; 3] {
    let kind = if coord.row.is_multiple_of(2) {
        HalfZKind::Upper
    } else {
        HalfZKind::Lower
    };
    members(kind, (coord.row / 2, coord.col))
}

fn zoom_coord(coord: GridCoord) -> GridCoord {
    let (kind, anchor, _) = position(coord);
    zoomed_coord(kind, anchor)
}

/// The level-0 halfZ containing `coord`.
pub fn halfz_of(coord: GridCoord) -> HalfZ {
    halfz_at_level(coord, 0)
}

/// The level-`level` halfZ containing the `G` cell `coord`.
pub fn halfz_at_level(coord: GridCoord, level: u32) -> HalfZ {
    let mut c = coord;
    for _ in 0..level {
        c = zoom_coord(c);
    }
    let (kind, anchor, _) = position(c);
    let members = members(kind, anchor);
    HalfZ {
        kind,
        anchor,
        level,
        members,
        lcp: grid::cell(members[0]).strip_last(),
    }
}

/// Path index of `coord` inside its level-`level` halfZ.
pub fn index_at_level(coord: GridCoord, level: u32) -> usize {
    let mut c = coord;
    for _ in 0..level {
        c = zoom_coord(c);
    }
    position(c).2
}

/// Replaces every halfZ of `window` by its lcp.
pub fn zoom_out(window: &GridWindow) -> Result<GridWindow, FractalError> {
    let (rows, cols) = (window.rows(), window.cols());
    if rows % 3 != 0 || cols % 2 != 0 {
        return Err(FractalError::WindowShape { rows, cols });
    }
    let mut cells = vec![Vec::with_capacity(cols / 2); 2 * rows / 3];
    for a in 0..(rows / 3) as u64 {
        for kind in [HalfZKind::Upper, HalfZKind::Lower] {
            let out_row = zoomed_coord(kind, (a, 0)).row as usize;
            for b in 0..(cols / 2) as u64 {
                let m = members(kind, (a, b));
                let [x, y, z] = m.map(|c| window.cell(c.row as usize, c.col as usize));
                if !forms_halfz(x, y, z) {
                    return Err(FractalError::NotAHalfZ { members: m });
                }
                cells[out_row].push(x.strip_last());
            }
        }
    }
    Ok(GridWindow::from_cells(cells))
}

/// Same digits except the last, which runs 0, 1, 2. A one-digit string
/// counts as `"0"` followed by its digit.
pub fn forms_halfz(x: &DigitString, y: &DigitString, z: &DigitString) -> bool {
    let prefix = x.strip_last();
    [x, y, z]
        .iter()
        .enumerate()
        .all(|(k, w)| w.last_digit() == Some(k as u8) && w.strip_last() == prefix)
}

/// `(w)_3 + 1` together with the number of trailing 2s that carried.
pub fn ternary_successor(w: &DigitString) -> (DigitString, u32) {
    let mut digits = w.digits().to_vec();
    let mut depth = 0;
    for d in digits.iter_mut().rev() {
        if *d == 2 {
            *d = 0;
            depth += 1;
        } else {
            *d += 1;
            return (DigitString::from_digits(digits).canonical(), depth);
        }
    }
    digits.insert(0, 1);
    (DigitString::from_digits(digits), depth)
}

/// Coordinate of the `n`-th cell visited by the traversal, from geometry
/// alone: each base-3 digit of `n`, most significant first, picks a member
/// of the halfZ one level down.
pub fn traversal_coord(n: u64) -> GridCoord {
    locate_by_zoom(&DigitString::ternary(n))
}

/// Coordinate of `w` computed by descending the zoom levels, one digit per
/// level. Agrees with [`grid::locate`] because zooming out fixes `G`.
pub fn locate_by_zoom(w: &DigitString) -> GridCoord {
    w.digits()
        .iter()
        .fold(GridCoord::new(0, 0), |c, &d| expand(c)[d as usize])
}

/// Row of `w` from the zoom descent, tracking rows only, so it stays cheap
/// for strings whose column would not fit in 64 bits. `None` on overflow or
/// a digit above 2.
pub fn row_by_zoom(w: &DigitString) -> Option<u64> {
    w.digits().iter().try_fold(0u64, |row, &d| {
        let base = (row / 2).checked_mul(3)?;
        let offset = match (row % 2, d) {
            (0, 0 | 1) => 0,
            (0, 2) | (1, 0) => 1,
            (1, 1 | 2) => 2,
            _ => return None,
        };
        base.checked_add(offset)
    })
}

/// The first `count` cells of the traversal with the strings found there.
pub fn traversal(grid: &Grid, count: u64) -> Vec<(DigitString, GridCoord)> {
    (0..count)
        .map(|n| {
            let coord = traversal_coord(n);
            (grid.cell(coord), coord)
        })
        .collect()
}

/// Why a traversal step failed to match the ordering theorem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraversalFailure {
    WrongString { n: u64, found: DigitString },
    NotSuccessor { n: u64 },
    BrokenChain { n: u64, level: u32 },
}

/// Walks the first `count` traversal steps and checks that they spell
/// `0, 1, 2, ...` in base 3, that each step is the ternary successor of the
/// last, and that a step carrying `m` digits moves between consecutive
/// members of one level-`m` halfZ.
pub fn check_traversal(grid: &Grid, count: u64) -> Result<u64, TraversalFailure> {
    let steps = traversal(grid, count);
    for (n, (w, coord)) in steps.iter().enumerate() {
        let n = n as u64;
        if *w != DigitString::ternary(n) {
            return Err(TraversalFailure::WrongString { n, found: w.clone() });
        }
        let Some((next, next_coord)) = steps.get(n as usize + 1) else {
            continue;
        };
        let (succ, depth) = ternary_successor(w);
        if succ != *next {
            return Err(TraversalFailure::NotSuccessor { n });
        }
        let here = halfz_at_level(*coord, depth);
        let there = halfz_at_level(*next_coord, depth);
        let consecutive =
            index_at_level(*coord, depth) + 1 == index_at_level(*next_coord, depth);
        if (here.kind, here.anchor) != (there.kind, there.anchor) || !consecutive {
            return Err(TraversalFailure::BrokenChain { n, level: depth });
        }
    }
    Ok(count)
}

/// Outcome of checking that `([v]_3 - 1)_3` lies at most one row above `(v)_3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minus1Report {
    pub checked: u64,
    /// `(v, row of (v)_3, row of (v-1)_3)` for the first failure.
    pub counterexample: Option<(u64, u64, u64)>,
}

pub fn check_minus1(bound: u64) -> Minus1Report {
    let row = |v: u64| grid::row_of(&DigitString::ternary(v)).expect("ternary strings are canonical");
    let mut checked = 0;
    let mut prev_row = row(0);
    for v in 1..bound {
        let here = row(v);
        checked += 1;
        if prev_row + 1 < here {
            return Minus1Report {
                checked,
                counterexample: Some((v, here, prev_row)),
            };
        }
        prev_row = here;
    }
    Minus1Report {
        checked,
        counterexample: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroColumnFailure {
    /// `G(row, col)` has a smaller base-3 value than `G(row, 0)`.
    NotMinimal { row: u64, col: u64 },
    /// `[G(row, 0)]_3 >= [G(row + 1, 0)]_3`.
    NotIncreasing { row: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroColumnReport {
    pub rows: u64,
    pub column_zero: Vec<u64>,
    pub cells_compared: u64,
    pub failure: Option<ZeroColumnFailure>,
}

/// Checks that `G(i, 0)` has the smallest base-3 value in row `i`, for
/// `i < rows`, and that those values increase down the column.
///
/// Only cells no longer than `len(G(i, 0)) + 1` can compete: anything longer
/// is worth at least `3^(len + 1)` in base 3. Columns only grow downwards and
/// `G(0, j)` has `bits(j)` digits, so columns `j < 2^(len + 2)` cover them.
pub fn check_zero_column(rows: u64) -> ZeroColumnReport {
    let column_zero_strings: Vec<DigitString> = (0..rows)
        .map(|i| represent_u64(2 * i, RationalBase::THREE_HALVES))
        .collect();
    let column_zero: Vec<u64> = column_zero_strings
        .iter()
        .map(|w| w.ternary_u64().expect("column 0 fits in u64"))
        .collect();
    let allowed_len: Vec<usize> = column_zero_strings.iter().map(|w| w.len() + 1).collect();
    let max_len = allowed_len.iter().copied().max().unwrap_or(1);

    let mut report = ZeroColumnReport {
        rows,
        column_zero: column_zero.clone(),
        cells_compared: 0,
        failure: None,
    };
    for col in 0..(1u64 << (max_len + 1)) {
        let mut cursor = ColumnCursor::top(col);
        for row in 0..rows as usize {
            if cursor.len() > max_len {
                break;
            }
            if cursor.len() <= allowed_len[row] {
                report.cells_compared += 1;
                let value = cursor.ternary_u64().expect("short strings fit in u64");
                if value < column_zero[row] {
                    report.failure = Some(ZeroColumnFailure::NotMinimal {
                        row: row as u64,
                        col,
                    });
                    return report;
                }
            }
            cursor.step();
        }
    }
    if let Some(i) = column_zero.windows(2).position(|w| w[0] >= w[1]) {
        report.failure = Some(ZeroColumnFailure::NotIncreasing { row: i as u64 });
    }
    report
}

/// Every level-`level` halfZ whose covered cells all fit in the
/// `rows x cols` corner of `G`.
pub fn halfzs_in_window(rows: u64, cols: u64, level: u32) -> Vec<HalfZ> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for row in 0..rows {
        for col in 0..cols {
            let h = halfz_at_level(GridCoord::new(row, col), level);
            if !seen.insert((h.kind, h.anchor)) {
                continue;
            }
            if h.covered_cells()
                .iter()
                .all(|c| c.row < rows && c.col < cols)
            {
                out.push(h);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn ds(s: &str) -> DigitString {
        s.parse().unwrap()
    }

    fn gc(r: u64, c: u64) -> GridCoord {
        GridCoord::new(r, c)
    }

    #[test]
    fn halfz_examples() {
        let h = halfz_of(gc(0, 0));
        assert_eq!(h.kind, HalfZKind::Upper);
        assert_eq!(h.anchor, (0, 0));
        assert_eq!(h.members, [gc(0, 0), gc(0, 1), gc(1, 0)]);
        assert_eq!(h.lcp, ds("0"));

        let h = halfz_of(gc(2, 1));
        assert_eq!(h.kind, HalfZKind::Lower);
        assert_eq!(h.anchor, (0, 0));
        assert_eq!(h.members, [gc(1, 1), gc(2, 0), gc(2, 1)]);
        assert_eq!(h.lcp, ds("2"));

        let h = halfz_of(gc(4, 2));
        assert_eq!(h.kind, HalfZKind::Upper);
        assert_eq!(h.anchor, (1, 1));
        assert_eq!(h.members, [gc(3, 2), gc(3, 3), gc(4, 2)]);
        let [x, y, z] = h.members.map(grid::cell);
        assert!(forms_halfz(&x, &y, &z));
    }

    #[test]
    fn upper_z_lcps() {
        let window = GridWindow::build(3, 4);
        // upperZ at anchor (0,1): "10", "11", "12"
        let m = members(HalfZKind::Upper, (0, 1)).map(|c| window.cell(c.row as usize, c.col as usize).clone());
        assert_eq!(m, [ds("10"), ds("11"), ds("12")]);
        assert_eq!(m[0].strip_last(), grid::cell(gc(0, 1)));
        let m = members(HalfZKind::Lower, (0, 0)).map(|c| window.cell(c.row as usize, c.col as usize).clone());
        assert_eq!(m, [ds("20"), ds("21"), ds("22")]);
        assert_eq!(m[0].strip_last(), grid::cell(gc(1, 0)));
    }

    #[test]
    fn halfzs_partition_window() {
        let window = GridWindow::build(30, 64);
        let mut owner = HashSet::new();
        for row in 0..30 {
            for col in 0..64 {
                let (kind, anchor, index) = position(gc(row, col));
                assert_eq!(members(kind, anchor)[index], gc(row, col));
                assert!(owner.insert((kind, anchor, index)));
                let [x, y, z] = members(kind, anchor).map(|c| window.cell(c.row as usize, c.col as usize));
                assert!(forms_halfz(x, y, z), "{kind:?} {anchor:?}");
            }
        }
    }

    #[test]
    fn zoom_out_is_fixed_point() {
        let window = GridWindow::build(30, 64);
        let zoomed = zoom_out(&window).unwrap();
        assert_eq!(zoomed, GridWindow::build(20, 32));
        let twice = zoom_out(&zoom_out(&GridWindow::build(27, 64)).unwrap()).unwrap();
        assert_eq!(twice, GridWindow::build(12, 16));
    }

    #[test]
    fn zoom_out_rejects_bad_shapes() {
        let err = zoom_out(&GridWindow::build(4, 6)).unwrap_err();
        assert_eq!(err, FractalError::WindowShape { rows: 4, cols: 6 });
        let bogus = GridWindow::build(3, 3).corner(3, 2);
        let mut cells = bogus.cells().to_vec();
        cells[0][1] = ds("12");
        assert!(matches!(
            zoom_out(&GridWindow::from_cells(cells)),
            Err(FractalError::NotAHalfZ { .. })
        ));
    }

    #[test]
    fn successor_examples() {
        assert_eq!(ternary_successor(&ds("12")), (ds("20"), 1));
        assert_eq!(ternary_successor(&ds("2")), (ds("10"), 1));
        assert_eq!(ternary_successor(&ds("221")), (ds("222"), 0));
        assert_eq!(ternary_successor(&ds("0")), (ds("1"), 0));
        assert_eq!(ternary_successor(&ds("222")), (ds("1000"), 3));
    }

    #[test]
    fn traversal_examples() {
        let grid = Grid::new();
        let steps = traversal(&grid, 9);
        let strings: Vec<String> = steps.iter().map(|(w, _)| w.to_string()).collect();
        assert_eq!(strings, ["0", "1", "2", "10", "11", "12", "20", "21", "22"]);
        let coords: Vec<GridCoord> = steps.iter().map(|(_, c)| *c).collect();
        assert_eq!(
            coords,
            [gc(0, 0), gc(0, 1), gc(1, 0), gc(0, 2), gc(0, 3), gc(1, 2), gc(1, 1), gc(2, 0), gc(2, 1)]
        );
        assert_eq!(traversal(&grid, 1), vec![(ds("0"), gc(0, 0))]);
        for (_, c) in traversal(&grid, 27) {
            assert!(c.row < 5 && c.col < 8, "{c}");
        }
    }

    #[test]
    fn traversal_follows_base_three() {
        let grid = Grid::new();
        assert_eq!(check_traversal(&grid, 3u64.pow(7)), Ok(3u64.pow(7)));
    }

    #[test]
    fn zoom_descent_matches_carry_walk() {
        for n in 0..3u64.pow(7) {
            let w = DigitString::ternary(n);
            assert_eq!(Ok(locate_by_zoom(&w)), grid::locate(&w), "{w}");
            assert_eq!(row_by_zoom(&w), grid::row_of(&w).ok(), "{w}");
        }
        assert_eq!(row_by_zoom(&ds("13")), None);
        let long: DigitString = "2".repeat(200).parse().unwrap();
        assert_eq!(row_by_zoom(&long), None);
    }

    #[test]
    fn lcp_length_drops_per_level() {
        for level in 0..4 {
            for h in halfzs_in_window(30, 32, level) {
                for c in h.covered_cells() {
                    let w = grid::cell(c);
                    let keep = w.len().saturating_sub(level as usize + 1);
                    let expect = DigitString::from_digits(w.digits()[..keep].to_vec()).canonical();
                    assert_eq!(h.lcp, expect, "level {level} cell {c}");
                }
                // its three members are level-(m-1) halfZs differing in the last lcp digit
                let [x, y, z] = h.members.map(grid::cell);
                assert!(forms_halfz(&x, &y, &z));
            }
        }
    }

    #[test]
    fn minus1_examples() {
        assert_eq!(grid::row_of(&ds("20")), Ok(1));
        assert_eq!(grid::row_of(&ds("12")), Ok(1));
        assert_eq!(grid::row_of(&ds("2")), Ok(1));
        assert_eq!(grid::row_of(&ds("1")), Ok(0));
        let report = check_minus1(3u64.pow(7));
        assert_eq!(report.counterexample, None);
        assert_eq!(report.checked, 3u64.pow(7) - 1);
    }

    #[test]
    fn zero_column_examples() {
        let report = check_zero_column(4);
        assert_eq!(report.column_zero, vec![0, 2, 7, 21]);
        assert_eq!(report.failure, None);
        assert_eq!(ds("20").ternary_u64(), Some(6));
        let report = check_zero_column(60);
        assert_eq!(report.failure, None);
        assert!(report.cells_compared > 60);
    }
}
