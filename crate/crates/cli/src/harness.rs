//! Verification suites. Each check sweeps a range in parallel and keeps the
//! lowest failing input, so reports do not depend on thread scheduling.

use std::fmt::Write as _;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use stanley_grid::fractal::{self, ZeroColumnFailure};
use stanley_grid::greedy::{self, GreedyPartition};
use stanley_grid::grid::{self, GridCoord, GridWindow};
use stanley_grid::radix::{add_two, evaluate, represent_u64, sub_two, DigitString, RationalBase};
use stanley_grid::witness;
use stanley_grid::Grid;

use crate::caps::Caps;
use crate::reference::ReferenceSequence;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Radix,
    Greedy,
    Grid,
    Fractal,
    Witness,
    Theorem1,
    Theorem2,
}

impl Suite {
    const EACH: [Suite; 7] = [
        Suite::Radix,
        Suite::Greedy,
        Suite::Grid,
        Suite::Fractal,
        Suite::Witness,
        Suite::Theorem1,
        Suite::Theorem2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Radix => "radix",
            Suite::Greedy => "greedy",
            Suite::Grid => "grid",
            Suite::Fractal => "fractal",
            Suite::Witness => "witness",
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    /// Kept out of the serialized report so that reruns compare equal.
    #[serde(skip)]
    pub duration: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub max_value: u64,
    pub max_rows: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerificationReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for suite in &self.suites {
            for check in &suite.checks {
                let status = if check.passed { "PASS" } else { "FAIL" };
                write!(out, "{status} {}/{} checked={}", suite.suite, check.name, check.checked).unwrap();
                if let Some(cx) = &check.counterexample {
                    write!(out, " counterexample: {cx}").unwrap();
                }
                out.push('\n');
            }
        }
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{verdict} max_value={} max_rows={}",
            self.max_value, self.max_rows
        )
        .unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// Per-suite wall-clock times, for stderr.
    pub fn timings(&self) -> String {
        self.suites
            .iter()
            .map(|s| format!("{}: {:.3}s\n", s.suite, s.duration.as_secs_f64()))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct VerifyParams {
    /// Sweeps cover values `0..max_value`.
    pub max_value: u64,
    /// Row-indexed checks cover rows `0..max_rows`.
    pub max_rows: u64,
    pub references: Vec<ReferenceSequence>,
    pub caps: Caps,
}

struct Context<'a> {
    params: &'a VerifyParams,
    partition: OnceLock<GreedyPartition>,
}

impl Context<'_> {
    fn n(&self) -> u64 {
        self.params.max_value
    }

    fn rows(&self) -> u64 {
        self.params.max_rows
    }

    fn partition(&self) -> &GreedyPartition {
        self.partition
            .get_or_init(|| greedy::build_partition(self.n().max(1)).expect("row cap is far above any allowed bound"))
    }

    fn reference(&self, id: &str) -> Option<&ReferenceSequence> {
        self.params.references.iter().find(|r| r.id == id)
    }
}

pub fn run(suite: Suite, params: &VerifyParams) -> Result<VerificationReport, CliError> {
    params.caps.check_value("--max-value", params.max_value)?;
    params.caps.check_rows("--max-rows", params.max_rows)?;
    let ctx = Context {
        params,
        partition: OnceLock::new(),
    };
    let selected: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        one => vec![one],
    };
    let mut suites = Vec::new();
    for s in selected {
        let start = Instant::now();
        let checks = match s {
            Suite::Radix => radix_suite(&ctx),
            Suite::Greedy => greedy_suite(&ctx),
            Suite::Grid => grid_suite(&ctx),
            Suite::Fractal => fractal_suite(&ctx),
            Suite::Witness => witness_suite(&ctx),
            Suite::Theorem1 => theorem1_suite(&ctx)?,
            Suite::Theorem2 => theorem2_suite(&ctx),
            Suite::All => unreachable!(),
        };
        suites.push(SuiteReport {
            suite: s.name().to_string(),
            passed: checks.iter().all(|c| c.passed),
            checks,
            duration: start.elapsed(),
        });
    }
    Ok(VerificationReport {
        max_value: params.max_value,
        max_rows: params.max_rows,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

fn check(name: &str, checked: u64, counterexample: Option<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: counterexample.is_none(),
        checked,
        counterexample,
    }
}

/// Lowest `n < bound` for which `f` reports a problem.
fn sweep<F>(bound: u64, f: F) -> Option<String>
where
    F: Fn(u64) -> Result<(), String> + Sync,
{
    (0..bound).into_par_iter().find_map_first(|n| f(n).err())
}

fn ensure(ok: bool, describe: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(describe())
    }
}

fn radix_suite(ctx: &Context) -> Vec<CheckResult> {
    let n = ctx.n();
    let h = RationalBase::THREE_HALVES;
    let mut out = Vec::new();
    for base in [h, RationalBase::TERNARY] {
        let cx = sweep(n, |v| {
            let w = represent_u64(v, base);
            let back = evaluate(&w, base).map_err(|e| e.to_string())?.to_u64();
            ensure(back == Some(v), || format!("n={v} repr={w}"))
        });
        out.push(check(&format!("roundtrip_base_{}", base.to_string().replace('/', "_")), n, cx));
    }
    let cx = sweep(n, |v| {
        let w = DigitString::ternary(v);
        let err = |e: stanley_grid::radix::RadixError| format!("w={w}: {e}");
        let next = add_two(&w).map_err(err)?;
        let ok = evaluate(&next, h).map_err(err)? == evaluate(&w, h).map_err(err)? + 2;
        ensure(ok, || format!("w={w}"))
    });
    out.push(check("carry_rule_adds_two", n, cx));
    let cx = sweep(n, |v| {
        let w = DigitString::ternary(v);
        let next = add_two(&w).map_err(|e| format!("w={w}: {e}"))?;
        ensure(sub_two(&next).as_ref() == Some(&w), || format!("w={w}"))
    });
    out.push(check("carry_rule_inverts", n, cx));
    if let Some(reference) = ctx.reference("A024629") {
        let terms: Vec<(u64, u64)> = reference.terms.iter().copied().filter(|&(i, _)| i < n).collect();
        let cx = terms.iter().find_map(|&(i, v)| {
            let w = represent_u64(i, h);
            (w.to_string() != v.to_string()).then(|| format!("n={i} expected={v} got={w}"))
        });
        out.push(check("reference_A024629", terms.len() as u64, cx));
    }
    out
}

/// Compares the start of a row with the reference terms below the bound.
fn prefix_check(name: &str, row: &[u64], reference: Option<&ReferenceSequence>, bound: u64) -> Option<CheckResult> {
    let expected: Vec<u64> = reference?.values().filter(|&v| v < bound).collect();
    let got = &row[..expected.len().min(row.len())];
    let cx = (got != expected.as_slice()).then(|| format!("expected {expected:?} got {got:?}"));
    Some(check(name, expected.len() as u64, cx))
}

fn greedy_suite(ctx: &Context) -> Vec<CheckResult> {
    let p = ctx.partition();
    let n = ctx.n();
    let mut out = Vec::new();
    let cx = p
        .rows()
        .par_iter()
        .enumerate()
        .find_map_first(|(i, row)| greedy::find_progression(row).map(|ap| format!("row {i}: {ap:?}")));
    out.push(check("rows_three_free", n, cx));
    let cx = greedy::minimality_violation(p).map(|(v, j)| format!("n={v} fits row {j}"));
    out.push(check("rows_minimal", n, cx));
    out.extend(prefix_check("reference_A005836", p.row(0), ctx.reference("A005836"), n));
    out.extend(prefix_check("reference_A323398", p.row(1), ctx.reference("A323398"), n));
    if let Some(reference) = ctx.reference("A265316") {
        let terms: Vec<(u64, u64)> = reference.terms.iter().copied().filter(|&(_, v)| v < n).collect();
        let cx = terms.iter().find_map(|&(i, v)| {
            let first = p.row(i as usize).first().copied();
            (first != Some(v)).then(|| format!("row {i}: expected {v} got {first:?}"))
        });
        out.push(check("reference_A265316", terms.len() as u64, cx));
    }
    out
}

const WINDOW_COLS: usize = 64;

fn grid_suite(ctx: &Context) -> Vec<CheckResult> {
    let rows = ctx.rows() as usize;
    let window = GridWindow::build(rows + 1, WINDOW_COLS);
    let cells = (rows * WINDOW_COLS) as u64;
    let at = |k: u64| {
        let (i, j) = ((k / WINDOW_COLS as u64) as usize, (k % WINDOW_COLS as u64) as usize);
        (i, j, window.cell(i, j))
    };
    let mut out = Vec::new();
    let cx = sweep(cells, |k| {
        let (i, j, w) = at(k);
        let want = GridCoord::new(i as u64, j as u64);
        let ok = grid::locate(w) == Ok(want) && grid::row_of(w) == Ok(i as u64);
        ensure(ok, || format!("cell {want} = {w}"))
    });
    out.push(check("locate_inverts_cell", cells, cx));
    let h = RationalBase::THREE_HALVES;
    let cx = sweep(cells, |k| {
        let (i, j, w) = at(k);
        let below = window.cell(i + 1, j);
        let ok = match (evaluate(below, h), evaluate(w, h)) {
            (Ok(lower), Ok(upper)) => lower == upper + 2,
            _ => false,
        };
        ensure(ok, || format!("cell ({i},{j})"))
    });
    out.push(check("rows_step_by_two", cells, cx));
    let n = ctx.n();
    let cx = sweep(n, |v| {
        let w = DigitString::ternary(v);
        let coord = grid::locate(&w).map_err(|e| e.to_string())?;
        ensure(grid::cell(coord) == w, || format!("w={w} located at {coord}"))
    });
    out.push(check("every_string_once", n, cx));
    out
}

fn fractal_suite(ctx: &Context) -> Vec<CheckResult> {
    let n = ctx.n();
    let rows = ctx.rows().div_ceil(3) * 3;
    let mut out = Vec::new();

    let window = GridWindow::build(rows as usize, WINDOW_COLS);
    let halfzs = rows / 3 * 2 * (WINDOW_COLS as u64 / 2);
    let cx = sweep(halfzs, |k| {
        let per_row = WINDOW_COLS as u64 / 2;
        let kind = if (k / per_row).is_multiple_of(2) {
            fractal::HalfZKind::Upper
        } else {
            fractal::HalfZKind::Lower
        };
        let anchor = (k / per_row / 2, k % per_row);
        let m = fractal::members(kind, anchor);
        let [x, y, z] = m.map(|c| window.cell(c.row as usize, c.col as usize));
        let positions_ok = m
            .iter()
            .enumerate()
            .all(|(idx, &c)| fractal::position(c) == (kind, anchor, idx));
        ensure(positions_ok && fractal::forms_halfz(x, y, z), || format!("{kind:?} {anchor:?}"))
    });
    out.push(check("halfz_partition", halfzs, cx));

    let cx = match fractal::zoom_out(&GridWindow::build(30, 64)) {
        Ok(z) if z == GridWindow::build(20, 32) => None,
        Ok(_) => Some("zoomed 30x64 window differs from the 20x32 corner".to_string()),
        Err(e) => Some(e.to_string()),
    };
    out.push(check("zoom_out_fixed_point", 30 * 64, cx));

    let cx = fractal::check_traversal(&Grid::new(), n)
        .err()
        .map(|f| format!("{f:?}"));
    out.push(check("traversal_base_three_order", n, cx));

    let cx = sweep(n, |v| {
        let w = DigitString::ternary(v);
        let ok = grid::locate(&w) == Ok(fractal::locate_by_zoom(&w))
            && grid::row_of(&w).ok() == fractal::row_by_zoom(&w);
        ensure(ok, || format!("w={w}"))
    });
    out.push(check("zoom_descent_matches_locate", n, cx));

    let report = fractal::check_minus1(n);
    let cx = report
        .counterexample
        .map(|(v, r, rp)| format!("v={v} row={r} row(v-1)={rp}"));
    out.push(check("minus_one_row_drop", report.checked, cx));

    let report = fractal::check_zero_column(ctx.rows());
    let cx = report.failure.map(|f| match f {
        ZeroColumnFailure::NotMinimal { row, col } => format!("G({row},{col}) below G({row},0)"),
        ZeroColumnFailure::NotIncreasing { row } => format!("column 0 not increasing at row {row}"),
    });
    out.push(check("zero_column_minimal", report.cells_compared, cx));
    out
}

/// The pair from the worked row-1 example, with `a` as the construction
/// produces it.
pub const WORKED_X: &str = "11102010220102110110011000";
pub const WORKED_A: &str = "11100010000100110100012000";
pub const WORKED_B: &str = "11101010110101110101200000";

fn witness_suite(ctx: &Context) -> Vec<CheckResult> {
    let p = ctx.partition();
    let n = ctx.n();
    let pairs: u64 = (0..n).map(|v| p.row_of(v).unwrap_or(0) as u64).sum();
    let cx = sweep(n, |v| {
        let x = DigitString::ternary(v);
        let i = p.row_of(v).ok_or_else(|| format!("{v} outside the sieve"))?;
        (0..i).try_for_each(|j| {
            let w = witness::witness(&x, j as u64).map_err(|e| format!("x={x} j={j}: {e}"))?;
            let in_row = |s: &DigitString| s.ternary_u64().and_then(|t| p.row_of(t)) == Some(j);
            ensure(in_row(&w.c) && in_row(&w.d), || {
                format!("x={x} j={j}: c={} d={} outside sieve row", w.c, w.d)
            })?;
            witness::witness_oracle(v, j, p)
                .map(|_| ())
                .map_err(|e| format!("x={x} j={j}: oracle: {e}"))
        })
    });
    let mut out = vec![check("witness_every_lower_row", pairs, cx)];
    let x: DigitString = WORKED_X.parse().expect("literal");
    let cx = match witness::witness(&x, 1) {
        Ok(w) if w.c.to_string() == WORKED_A && w.d.to_string() == WORKED_B => None,
        Ok(w) => Some(format!("got c={} d={}", w.c, w.d)),
        Err(e) => Some(e.to_string()),
    };
    out.push(check("worked_example_row1", 1, cx));
    out
}

/// Doubles the sieve bound from 64 until `rows` rows have started.
pub fn sieve_until_rows(rows: usize, caps: &Caps) -> Result<GreedyPartition, CliError> {
    let mut bound = 64u64;
    loop {
        let bounded = bound.min(caps.max_value.max(1));
        let p = greedy::build_partition(bounded).map_err(|e| CliError::Cap(e.to_string()))?;
        if p.row_count() >= rows {
            return Ok(p);
        }
        if bounded == caps.max_value.max(1) {
            return Err(CliError::Bound(format!(
                "only {} rows start below the value cap {}; {} rows need a sieve bound of {}",
                p.row_count(),
                caps.max_value,
                rows,
                greedy::known_sufficient_bound(rows)
            )));
        }
        bound *= 2;
    }
}

fn theorem1_suite(ctx: &Context) -> Result<Vec<CheckResult>, CliError> {
    let rows = ctx.rows();
    let column = GridWindow::build(rows as usize, 1);
    let h = RationalBase::THREE_HALVES;
    let mut out = Vec::new();
    let cx = (0..rows).find_map(|i| {
        let w = column.cell(i as usize, 0);
        let r = represent_u64(2 * i, h);
        (*w != r).then(|| format!("row {i}: G={w} (2i)_3/2={r}"))
    });
    out.push(check("column_zero_is_even_in_base_three_halves", rows, cx));
    let p = sieve_until_rows(rows as usize, &ctx.params.caps)?;
    let cx = (0..rows).find_map(|i| {
        let w = column.cell(i as usize, 0);
        let first = p.row(i as usize).first().copied();
        (w.ternary_u64() != first).then(|| format!("row {i}: [G(i,0)]_3={w} sieve={first:?}"))
    });
    out.push(check("column_zero_starts_sieve_rows", rows, cx));
    Ok(out)
}

fn theorem2_suite(ctx: &Context) -> Vec<CheckResult> {
    let n = ctx.n();
    let rows = ctx.rows() as usize;
    let p = ctx.partition();
    let from_grid = grid::row_values_below(rows, n);
    let cx = from_grid.iter().enumerate().find_map(|(i, g)| {
        let s: Vec<u64> = p.row(i).iter().copied().filter(|&v| v < n).collect();
        (g != &s).then(|| {
            let at = g.iter().zip(&s).position(|(a, b)| a != b).unwrap_or(g.len().min(s.len()));
            format!("row {i}: grid and sieve differ at position {at}")
        })
    });
    let checked = from_grid.iter().map(|r| r.len() as u64).sum();
    vec![check("grid_rows_equal_sieve_rows", checked, cx)]
}
