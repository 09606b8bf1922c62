//! Explicit progressions proving the greedy rows are minimal.
//!
//! For `x` in row `i` of `G` and any `j < i`, [`witness`] builds `c`, `d` in
//! row `j` with `[c]_3 < [d]_3` and `[c]_3 + [x]_3 = 2[d]_3`, so `x` could
//! not have joined row `j`. Rows 0 and 1 are solved digit by digit; higher
//! rows peel off the last digit of `x` and recurse on the zoomed grid.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::fractal::row_by_zoom;
use crate::greedy::GreedyPartition;
use crate::radix::DigitString;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("{0:?} is not a canonical string over the digits 0, 1, 2")]
    InvalidInput(String),
    #[error("{x} lies in row {row}, so row {j} needs no witness")]
    NotApplicable { x: String, row: u64, j: u64 },
    #[error("row of {0} does not fit in 64 bits")]
    OutOfRange(String),
    #[error("construction for {x} in row {j} produced an invalid pair; trace: {trace:?}")]
    InvariantViolation {
        x: String,
        j: u64,
        trace: Vec<TraceStep>,
    },
    #[error("{x} is not below the partition bound {bound}")]
    InsufficientBound { x: u64, bound: u64 },
    #[error("no pair in row {j} completes a progression with {x}")]
    NoPair { x: u64, j: u64 },
}

/// Which rule produced a step of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// Row 0: replace each 2 of `x` by 0 and by 1.
    Row0,
    /// Row 1, `x` ends in `2 0^m`.
    Row1Case0,
    /// Row 1, `x` ends in `2 0^j 1^k 0^m` with `j > 0`.
    Row1Case1,
    /// Row 1, `x` ends in `2 1^k 0^m`.
    Row1Case2,
    /// Row 1, `x` ends in `1 0^j 1^k 0^m` with `j > 0`.
    Row1Case3,
    /// Row `3a`: append to a witness in row `2a`.
    Append3a,
    /// Row `3a + 2`: append to a witness in row `2a + 1`.
    Append3a2,
    /// Row `3a + 1`, `x` ending in 0: append to a witness in row `2a + 1`.
    Append3a1Zero,
    /// Row `3a + 1`, `x` ending in 2: append to a witness in row `2a`.
    Append3a1Two,
    /// Row `3a + 1`, `x` ending in 1: `c` from row `2a`, `d` from row `2a + 1`.
    Shifted,
    /// Row `3a`, `x = y2` with `y` in row `2a`: `c = y0`, `d = y1`.
    SameUpperZ,
    /// Shifted step needing `2d - c = [x']_3` within one row.
    Simplest,
    /// Shifted step reducing to a shifted step one level up.
    Iterative,
    /// Shifted step needing `2d - c = [x']_3 - 1` within one row.
    Peculiar,
    /// `c = d`, allowed only inside a shifted step.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub case: CaseTag,
    pub x: DigitString,
    /// Target row (for shifted steps, the row of `c`).
    pub row: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessValues {
    pub x: String,
    pub c: String,
    pub d: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub x: DigitString,
    pub j: u64,
    pub c: DigitString,
    pub d: DigitString,
    /// Base-3 values in decimal.
    pub values: WitnessValues,
    pub trace: Vec<TraceStep>,
}

fn ternary_value(w: &DigitString) -> BigUint {
    w.value_in_integer_base(3)
}

fn row(w: &DigitString) -> Result<u64, WitnessError> {
    row_by_zoom(w).ok_or_else(|| WitnessError::OutOfRange(w.to_string()))
}

fn validate_input(x: &DigitString) -> Result<(), WitnessError> {
    if x.is_canonical() && x.max_digit().is_some_and(|d| d <= 2) {
        Ok(())
    } else {
        Err(WitnessError::InvalidInput(x.to_string()))
    }
}

/// `c`, `d` in row `j` with `[c]_3 < [d]_3` and `[c]_3 + [x]_3 = 2[d]_3`.
pub fn witness(x: &DigitString, j: u64) -> Result<Witness, WitnessError> {
    validate_input(x)?;
    let i = row(x)?;
    if i <= j {
        return Err(WitnessError::NotApplicable {
            x: x.to_string(),
            row: i,
            j,
        });
    }
    let mut trace = Vec::new();
    let built = solve(x, j, &mut trace);
    let violation = |trace: Vec<TraceStep>| WitnessError::InvariantViolation {
        x: x.to_string(),
        j,
        trace,
    };
    let (c, d) = match built {
        Ok(pair) => pair,
        Err(_) => return Err(violation(trace)),
    };
    let (cv, dv, xv) = (ternary_value(&c), ternary_value(&d), ternary_value(x));
    let rows_ok = row(&c)? == j && row(&d)? == j;
    if !(rows_ok && cv < dv && &cv + &xv == &dv * 2u32) {
        return Err(violation(trace));
    }
    Ok(Witness {
        x: x.clone(),
        j,
        values: WitnessValues {
            x: xv.to_string(),
            c: cv.to_string(),
            d: dv.to_string(),
        },
        c,
        d,
        trace,
    })
}

/// Signals that a precondition of some step failed; the trace says where.
#[derive(Debug)]
struct Broken;

pub type Pair = (DigitString, DigitString);

fn step(trace: &mut Vec<TraceStep>, case: CaseTag, x: &DigitString, row: u64) {
    trace.push(TraceStep {
        case,
        x: x.clone(),
        row,
    });
}

fn append(pair: Pair, gamma: u8, delta: u8) -> Pair {
    (pair.0.push_digit(gamma), pair.1.push_digit(delta))
}

fn solve(x: &DigitString, j: u64, trace: &mut Vec<TraceStep>) -> Result<Pair, Broken> {
    if row(x).map_err(|_| Broken)? <= j {
        return Err(Broken);
    }
    match j {
        0 => {
            step(trace, CaseTag::Row0, x, 0);
            Ok(witness_row0(x))
        }
        1 => {
            let (pair, case) = witness_row1(x).ok_or(Broken)?;
            step(trace, case, x, 1);
            Ok(pair)
        }
        _ => {
            let a = j / 3;
            let r = x.last_digit().ok_or(Broken)?;
            let x1 = x.strip_last();
            match j % 3 {
                0 => {
                    if r == 2 && row(&x1).map_err(|_| Broken)? == 2 * a {
                        step(trace, CaseTag::SameUpperZ, x, j);
                        return Ok((x1.push_digit(0), x1.push_digit(1)));
                    }
                    step(trace, CaseTag::Append3a, x, j);
                    let (gamma, delta) = [(0, 0), (1, 1), (0, 1)][r as usize];
                    Ok(append(solve(&x1, 2 * a, trace)?, gamma, delta))
                }
                2 => {
                    step(trace, CaseTag::Append3a2, x, j);
                    let (gamma, delta) = [(2, 1), (1, 1), (2, 2)][r as usize];
                    Ok(append(solve(&x1, 2 * a + 1, trace)?, gamma, delta))
                }
                _ => match r {
                    0 => {
                        step(trace, CaseTag::Append3a1Zero, x, j);
                        Ok(append(solve(&x1, 2 * a + 1, trace)?, 0, 0))
                    }
                    2 => {
                        step(trace, CaseTag::Append3a1Two, x, j);
                        Ok(append(solve(&x1, 2 * a, trace)?, 2, 2))
                    }
                    _ => {
                        step(trace, CaseTag::Shifted, x, j);
                        Ok(append(shifted(2 * a, &x1, trace)?, 2, 0))
                    }
                },
            }
        }
    }
}

/// `c` in row `r`, `d` in row `r + 1`, `c < d`, `2[d]_3 - [c]_3 = [x]_3 + 1`.
fn shifted(r: u64, x: &DigitString, trace: &mut Vec<TraceStep>) -> Result<Pair, Broken> {
    if row(x).map_err(|_| Broken)? < r + 1 {
        return Err(Broken);
    }
    let xi = x.last_digit().ok_or(Broken)?;
    let x2 = x.strip_last();
    let a = r / 3;
    enum Next {
        Simplest(u64),
        Peculiar(u64),
        Iterative(u64),
    }
    let (gamma, delta, next) = match (r % 3, xi) {
        (0, 0) => (0, 2, Next::Peculiar(2 * a)),
        (0, 1) => (1, 0, Next::Iterative(2 * a)),
        (0, _) => (1, 2, Next::Simplest(2 * a)),
        (1, 0) => (0, 2, Next::Peculiar(2 * a + 1)),
        (1, 1) => (0, 1, Next::Simplest(2 * a + 1)),
        (1, _) => (2, 1, Next::Iterative(2 * a)),
        (_, 0) => (2, 0, Next::Iterative(2 * a + 1)),
        (_, 1) => (1, 0, Next::Iterative(2 * a + 1)),
        (_, _) => (2, 1, Next::Iterative(2 * a + 1)),
    };
    let inner = match next {
        Next::Simplest(rho) => {
            step(trace, CaseTag::Simplest, x, r);
            same_row(&x2, rho, trace)?
        }
        Next::Peculiar(rho) => {
            step(trace, CaseTag::Peculiar, x, r);
            let v = ternary_value(&x2);
            if v == BigUint::from(0u32) {
                return Err(Broken);
            }
            let t = DigitString::from_digits(
                (v - 1u32).to_radix_be(3),
            )
            .canonical();
            same_row(&t, rho, trace)?
        }
        Next::Iterative(rho) => {
            step(trace, CaseTag::Iterative, x, r);
            shifted(rho, &x2, trace)?
        }
    };
    Ok(append(inner, gamma, delta))
}

/// `c <= d` in row `rho` with `2[d]_3 - [c]_3 = [y]_3`: `c = d = y` when `y`
/// itself lies in row `rho`, otherwise a proper witness.
fn same_row(y: &DigitString, rho: u64, trace: &mut Vec<TraceStep>) -> Result<Pair, Broken> {
    if row(y).map_err(|_| Broken)? == rho {
        step(trace, CaseTag::Degenerate, y, rho);
        return Ok((y.clone(), y.clone()));
    }
    solve(y, rho, trace)
}

/// Row-0 witness: `c` replaces each 2 of `x` by 0, `d` by 1.
pub fn witness_row0(x: &DigitString) -> Pair {
    let c = x.digits().iter().map(|&d| if d == 2 { 0 } else { d }).collect();
    let d = x.digits().iter().map(|&d| if d == 2 { 1 } else { d }).collect();
    (
        DigitString::from_digits(c).canonical(),
        DigitString::from_digits(d).canonical(),
    )
}

fn run(len: usize, d: u8) -> Vec<u8> {
    vec![d; len]
}

/// Row-1 witness for `x` in row 2 or later; `None` when `x` has no 2.
///
/// Write `x = x1 x2 0^m` where `x2` is the shortest tail (before the trailing
/// zeros) that can be handled in isolation; `x1` is then treated as in row 0
/// and `x2` by one of four patterns.
pub fn witness_row1(x: &DigitString) -> Option<(Pair, CaseTag)> {
    let digits = x.digits();
    let zeros = digits.iter().rev().take_while(|&&d| d == 0).count();
    let rest = &digits[..digits.len() - zeros];
    let (cut, a2, b2, case) = if rest.last() == Some(&2) {
        (rest.len() - 1, vec![2], vec![2], CaseTag::Row1Case0)
    } else {
        let k = rest.iter().rev().take_while(|&&d| d == 1).count();
        let before_ones = &rest[..rest.len() - k];
        let jz = before_ones.iter().rev().take_while(|&&d| d == 0).count();
        let head_at = before_ones.len().checked_sub(jz + 1)?;
        let ones_then_two = |n: usize| [run(n, 1), vec![2]].concat();
        match (jz, before_ones[head_at]) {
            (0, _) => (
                head_at,
                ones_then_two(k),
                [vec![2], run(k, 0)].concat(),
                CaseTag::Row1Case2,
            ),
            (_, 2) => (
                head_at,
                [vec![1], run(jz, 0), ones_then_two(k - 1)].concat(),
                [run(jz, 1), vec![2], run(k, 0)].concat(),
                CaseTag::Row1Case1,
            ),
            _ => (
                head_at,
                [run(jz + 1, 0), ones_then_two(k - 1)].concat(),
                [vec![0], run(jz - 1, 1), vec![2], run(k, 0)].concat(),
                CaseTag::Row1Case3,
            ),
        }
    };
    let x1 = &rest[..cut];
    let assemble = |two_to: u8, mid: Vec<u8>| {
        let head = x1.iter().map(|&d| if d == 2 { two_to } else { d });
        let digits = head.chain(mid).chain(run(zeros, 0)).collect();
        DigitString::from_digits(digits).canonical()
    };
    Some(((assemble(0, a2), assemble(1, b2)), case))
}

/// The lexicographically least `(a, b)`, `a < b` in row `j` of `partition`,
/// with `a + x = 2b`.
pub fn witness_oracle(x: u64, j: usize, partition: &GreedyPartition) -> Result<(u64, u64), WitnessError> {
    let Some(i) = partition.row_of(x) else {
        return Err(WitnessError::InsufficientBound {
            x,
            bound: partition.bound(),
        });
    };
    if i <= j {
        return Err(WitnessError::NotApplicable {
            x: x.to_string(),
            row: i as u64,
            j: j as u64,
        });
    }
    partition
        .row(j)
        .iter()
        .take_while(|&&a| a < x)
        .find_map(|&a| {
            let twice = a + x;
            let b = twice / 2;
            (twice.is_multiple_of(2) && b > a && partition.row_of(b) == Some(j)).then_some((a, b))
        })
        .ok_or(WitnessError::NoPair { x, j: j as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greedy::build_partition;
    use crate::grid;

    fn ds(s: &str) -> DigitString {
        s.parse().unwrap()
    }

    #[test]
    fn row0_example() {
        let (c, d) = witness_row0(&ds("1202"));
        assert_eq!((c, d), (ds("1000"), ds("1101")));
        let w = witness(&ds("1202"), 0).unwrap();
        assert_eq!(w.values.c, "27");
        assert_eq!(w.values.d, "37");
        assert_eq!(w.trace[0].case, CaseTag::Row0);
    }

    #[test]
    fn row1_cases() {
        let cases = [
            ("2120", CaseTag::Row1Case0),
            ("12010", CaseTag::Row1Case1),
            ("1211", CaseTag::Row1Case2),
            ("210110", CaseTag::Row1Case3),
        ];
        for (x, want) in cases {
            let x = ds(x);
            let ((c, d), case) = witness_row1(&x).unwrap();
            assert_eq!(case, want, "{x}");
            let (cv, dv, xv) = (ternary_value(&c), ternary_value(&d), ternary_value(&x));
            assert!(cv < dv, "{x}");
            assert_eq!(&cv + &xv, dv * 2u32, "{x}");
            assert_eq!(grid::row_of(&c), Ok(1), "{c}");
        }
    }

    #[test]
    fn long_example() {
        let x = ds("11102010220102110110011000");
        let w = witness(&x, 1).unwrap();
        assert_eq!(w.trace[0].case, CaseTag::Row1Case3);
        assert_eq!(w.d, ds("11101010110101110101200000"));
        assert_eq!(w.c, ds("11100010000100110100012000"));
    }

    #[test]
    fn not_applicable() {
        assert_eq!(
            witness(&ds("12"), 1).unwrap_err(),
            WitnessError::NotApplicable {
                x: "12".into(),
                row: 1,
                j: 1
            }
        );
        assert!(matches!(witness(&ds("0"), 0), Err(WitnessError::NotApplicable { .. })));
        assert!(matches!(witness(&ds("013"), 0), Err(WitnessError::InvalidInput(_))));
    }

    #[test]
    fn every_pair_below_3_pow_7() {
        let p = build_partition(3u64.pow(7)).unwrap();
        for n in 0..p.bound() {
            let x = DigitString::ternary(n);
            let i = p.row_of(n).unwrap() as u64;
            assert_eq!(grid::row_of(&x), Ok(i), "{x}");
            for j in 0..i {
                let w = witness(&x, j).unwrap_or_else(|e| panic!("{x} row {j}: {e}"));
                let (c, d) = (w.c.ternary_u64().unwrap(), w.d.ternary_u64().unwrap());
                assert_eq!(p.row_of(c), Some(j as usize));
                assert_eq!(p.row_of(d), Some(j as usize));
                let (oa, ob) = witness_oracle(n, j as usize, &p).unwrap();
                assert!(oa < ob && oa + n == 2 * ob);
                assert!((oa, ob) <= (c, d));
            }
        }
    }

    #[test]
    fn oracle_errors() {
        let p = build_partition(100).unwrap();
        assert_eq!(
            witness_oracle(7, 0, &p),
            Ok((1, 4))
        );
        assert_eq!(
            witness_oracle(100, 0, &p),
            Err(WitnessError::InsufficientBound { x: 100, bound: 100 })
        );
        assert!(matches!(
            witness_oracle(2, 1, &p),
            Err(WitnessError::NotApplicable { .. })
        ));
    }

    #[test]
    fn trace_serializes() {
        let w = witness(&ds("2101"), 2).unwrap();
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["x"], "2101");
        assert_eq!(json["j"], 2);
        assert!(json["trace"].as_array().is_some_and(|t| !t.is_empty()));
    }
}
