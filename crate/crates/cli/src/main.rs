use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use stanley_grid_cli::caps::Caps;
use stanley_grid_cli::commands::{self, Direction, GridFormat, Method, RenderFormat};
use stanley_grid_cli::harness::{self, Suite, VerifyParams};
use stanley_grid_cli::reference;
use stanley_grid_cli::CliError;
use stanley_grid::RationalBase;

#[derive(Parser)]
#[command(name = "stanley-grid", version)]
#[command(about = "Base 3/2 strings and the greedy partition of the naturals into 3-free sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an integer in a rational base, or evaluate a digit string
    #[command(group(ArgGroup::new("direction").required(true).args(["to", "from"])))]
    Convert {
        /// Base to write INPUT in, e.g. 3/2
        #[arg(long)]
        to: Option<RationalBase>,
        /// Base to read INPUT in
        #[arg(long)]
        from: Option<RationalBase>,
        input: String,
    },
    /// Terms of one row of the partition below a limit
    Sequence {
        #[arg(long)]
        row: u64,
        #[arg(long)]
        limit: u64,
        #[arg(long, value_enum, default_value = "greedy")]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// First terms of the first COUNT rows
    Cross {
        #[arg(long)]
        count: u64,
        #[arg(long, value_enum, default_value = "grid")]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// Run verification suites
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Sweeps cover values below this bound
        #[arg(long, default_value_t = 2187)]
        max_value: u64,
        /// Row-indexed checks cover this many rows
        #[arg(long, default_value_t = 12)]
        max_rows: u64,
        /// Replace a bundled reference with a b-file named bNNNNNN.txt
        #[arg(long)]
        bfile: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print the top-left corner of the grid
    Grid {
        #[arg(long)]
        rows: u64,
        #[arg(long)]
        cols: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: GridFormat,
    },
    /// Explicit progression placing X outside row ROW, as JSON
    Witness {
        #[arg(long)]
        x: String,
        #[arg(long)]
        row: u64,
    },
    /// Draw halfZ segments over a corner of the grid
    Render {
        #[arg(long, default_value_t = 1)]
        levels: u32,
        #[arg(long)]
        rows: u64,
        #[arg(long)]
        cols: u64,
        #[arg(long, value_enum, default_value = "svg")]
        format: RenderFormat,
        /// Print each cell's string
        #[arg(long)]
        labels: bool,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let caps = Caps::from_env()?;
    let output = match cli.command {
        Command::Convert { to, from, input } => {
            let direction = match (to, from) {
                (Some(b), _) => Direction::To(b),
                (_, Some(b)) => Direction::From(b),
                _ => unreachable!("clap requires one direction"),
            };
            commands::convert(direction, &input)?
        }
        Command::Sequence {
            row,
            limit,
            method,
            json,
        } => commands::sequence(row, limit, method, json, &caps)?,
        Command::Cross { count, method, json } => commands::cross(count, method, json, &caps)?,
        Command::Verify {
            suite,
            max_value,
            max_rows,
            bfile,
            json,
        } => {
            let overrides = bfile
                .iter()
                .map(|p| reference::load_bfile(p))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let params = VerifyParams {
                max_value,
                max_rows,
                references: reference::resolve(&overrides),
                caps,
            };
            let report = harness::run(suite, &params)?;
            eprint!("{}", report.timings());
            print!("{}", if json { report.to_json() } else { report.to_text() });
            if !report.passed {
                return Err(CliError::Verification(format!("suite {}", suite.name())));
            }
            return Ok(());
        }
        Command::Grid { rows, cols, format } => commands::grid_window(rows, cols, format, &caps)?,
        Command::Witness { x, row } => commands::witness_json(&x, row)?,
        Command::Render {
            levels,
            rows,
            cols,
            format,
            labels,
            out,
        } => {
            let picture = commands::render_picture(levels, rows, cols, format, labels, &caps)?;
            if let Some(path) = out {
                fs::write(&path, picture)
                    .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
                return Ok(());
            }
            picture
        }
    };
    print!("{output}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
