//! Subcommand bodies. Each returns the text to print so that the binary and
//! the tests share one code path.

use clap::ValueEnum;
use num_bigint::BigUint;
use serde::Serialize;

use stanley_grid::fractal::render::{self, RenderOptions, MAX_LEVELS};
use stanley_grid::greedy;
use stanley_grid::grid::{self, GridWindow};
use stanley_grid::radix::{evaluate, represent, represent_u64, DigitString, RationalBase};
use stanley_grid::witness::{self, WitnessError};

use crate::caps::Caps;
use crate::harness::sieve_until_rows;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Grid,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    To(RationalBase),
    From(RationalBase),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderFormat {
    Svg,
    Ascii,
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn lines<T: ToString>(values: impl IntoIterator<Item = T>) -> String {
    values.into_iter().map(|v| v.to_string() + "\n").collect()
}

fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes") + "\n"
}

pub fn convert(direction: Direction, input: &str) -> Result<String, CliError> {
    let base = match direction {
        Direction::To(b) | Direction::From(b) => b,
    };
    if base.p() > 36 {
        return Err(usage(format!("base {base} needs digits beyond 0-9a-z")));
    }
    match direction {
        Direction::To(base) => {
            let n: BigUint = input
                .parse()
                .map_err(|_| usage(format!("{input:?} is not a non-negative integer")))?;
            Ok(format!("{}\n", represent(&n, base)))
        }
        Direction::From(base) => {
            let w: DigitString = input.parse().map_err(usage)?;
            let value = evaluate(&w, base).map_err(usage)?;
            Ok(format!("{value}\n"))
        }
    }
}

#[derive(Serialize)]
struct SequenceJson<'a> {
    row: u64,
    limit: u64,
    method: &'a str,
    values: &'a [u64],
}

/// Row `row` of the partition below `limit`, by the chosen method.
pub fn sequence(row: u64, limit: u64, method: Method, json: bool, caps: &Caps) -> Result<String, CliError> {
    caps.check_value("--limit", limit)?;
    caps.check_rows("--row", row)?;
    if limit == 0 {
        return Err(usage("--limit must be at least 1"));
    }
    let values: Vec<u64> = match method {
        Method::Greedy => {
            let p = greedy::build_partition(limit).map_err(|e| CliError::Cap(e.to_string()))?;
            p.row(row as usize).to_vec()
        }
        Method::Grid => grid::row_values_below(row as usize + 1, limit).pop().unwrap_or_default(),
    };
    if json {
        let name = match method {
            Method::Grid => "grid",
            Method::Greedy => "greedy",
        };
        return Ok(json_line(&SequenceJson {
            row,
            limit,
            method: name,
            values: &values,
        }));
    }
    Ok(lines(values))
}

#[derive(Serialize)]
struct CrossTerm {
    row: u64,
    value: u64,
    string: String,
}

/// First terms of rows `0..count`, each with its base-3 string.
pub fn cross(count: u64, method: Method, json: bool, caps: &Caps) -> Result<String, CliError> {
    if count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    caps.check_rows("--count", count)?;
    let terms: Vec<CrossTerm> = match method {
        Method::Grid => (0..count)
            .map(|i| {
                let w = represent_u64(2 * i, RationalBase::THREE_HALVES);
                let value = w
                    .ternary_u64()
                    .ok_or_else(|| CliError::Cap(format!("row {i} start overflows 64 bits")))?;
                Ok(CrossTerm {
                    row: i,
                    value,
                    string: w.to_string(),
                })
            })
            .collect::<Result<_, CliError>>()?,
        Method::Greedy => {
            let p = sieve_until_rows(count as usize, caps)?;
            greedy::cross_sequence(&p, count as usize)
                .map_err(|e| CliError::Bound(e.to_string()))?
                .into_iter()
                .enumerate()
                .map(|(i, value)| CrossTerm {
                    row: i as u64,
                    value,
                    string: DigitString::ternary(value).to_string(),
                })
                .collect()
        }
    };
    if json {
        return Ok(json_line(&terms));
    }
    Ok(lines(terms.iter().map(|t| format!("{} {}", t.value, t.string))))
}

pub fn grid_window(rows: u64, cols: u64, format: GridFormat, caps: &Caps) -> Result<String, CliError> {
    caps.check_rows("--rows", rows)?;
    caps.check_value("--cols", cols)?;
    let window = GridWindow::build(rows as usize, cols as usize);
    match format {
        GridFormat::Text => Ok(window.to_string()),
        GridFormat::Csv => window.to_csv().map_err(usage),
        GridFormat::Json => window.to_json().map(|s| s + "\n").map_err(usage),
    }
}

pub fn witness_json(x: &str, row: u64) -> Result<String, CliError> {
    let x: DigitString = x.parse().map_err(usage)?;
    match witness::witness(&x, row) {
        Ok(w) => Ok(serde_json::to_string_pretty(&w).expect("witness serializes") + "\n"),
        Err(e @ WitnessError::InvariantViolation { .. }) => Err(CliError::Verification(e.to_string())),
        Err(e) => Err(usage(e)),
    }
}

pub fn render_picture(
    levels: u32,
    rows: u64,
    cols: u64,
    format: RenderFormat,
    labels: bool,
    caps: &Caps,
) -> Result<String, CliError> {
    if levels > MAX_LEVELS {
        return Err(usage(format!("--levels is at most {MAX_LEVELS}")));
    }
    if rows == 0 || cols == 0 {
        return Err(usage("--rows and --cols must be positive"));
    }
    caps.check_rows("--rows", rows)?;
    caps.check_value("--cols", cols)?;
    let opts = RenderOptions {
        rows,
        cols,
        levels,
        labels,
    };
    let label = |c| grid::cell(c).to_string();
    Ok(match format {
        RenderFormat::Svg => render::svg(&opts, label),
        RenderFormat::Ascii => render::ascii(&opts, label),
    })
}
