//! Acceptance gate. Prints one PASS/FAIL line per criterion with its time
//! and limit, and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use stanley_grid::fractal::{self, HalfZKind};
use stanley_grid::greedy::{self, build_partition};
use stanley_grid::grid::{self, GridWindow};
use stanley_grid::radix::{add_two, evaluate, represent_u64, DigitString, RationalBase};
use stanley_grid::witness;
use stanley_grid::Grid;
use stanley_grid_cli::caps::Caps;
use stanley_grid_cli::harness::{self, sieve_until_rows, Suite, VerifyParams};
use stanley_grid_cli::reference;

/// `Err` carries the first thing that went wrong.
type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn base_three_halves_prefix() -> Outcome {
    let expected = [
        "0", "1", "2", "20", "21", "22", "210", "211", "212", "2100", "2101", "2102", "2120",
    ];
    for (n, want) in expected.iter().enumerate() {
        let got = represent_u64(n as u64, RationalBase::THREE_HALVES).to_string();
        ensure(got == *want, || format!("n={n}: expected {want}, got {got}"))?;
    }
    Ok("n = 0..12 match".into())
}

fn carry_rule() -> Outcome {
    let h = RationalBase::THREE_HALVES;
    // canonical strings of length <= 12 are exactly the ternary numerals below 3^12
    let count = 3u64.pow(12);
    for n in 0..count {
        let w = DigitString::ternary(n);
        let next = add_two(&w).map_err(|e| e.to_string())?;
        let lhs = evaluate(&next, h).map_err(|e| e.to_string())?;
        let rhs = evaluate(&w, h).map_err(|e| e.to_string())? + 2;
        ensure(lhs == rhs, || format!("w={w}: {lhs} != {rhs}"))?;
    }
    Ok(format!("{count} strings"))
}

fn greedy_rows() -> Outcome {
    let p = build_partition(3u64.pow(9)).map_err(|e| e.to_string())?;
    let s0 = [0, 1, 3, 4, 9, 10, 12, 13, 27, 28, 30, 31, 36, 37, 39, 40];
    let s1 = [2, 5, 6, 11, 14, 15, 18, 29, 32, 33, 38, 41, 42, 45, 54, 83];
    let cross = [0, 2, 7, 21, 23, 64, 69, 71, 193, 207];
    ensure(p.row(0)[..16] == s0, || format!("S_0 starts {:?}", &p.row(0)[..16]))?;
    ensure(p.row(1)[..16] == s1, || format!("S_1 starts {:?}", &p.row(1)[..16]))?;
    let got = greedy::cross_sequence(&p, 10).map_err(|e| e.to_string())?;
    ensure(got == cross, || format!("cross-sequence {got:?}"))?;
    Ok(format!("N = {}", p.bound()))
}

fn theorem2() -> Outcome {
    let bound = 3u64.pow(7);
    let rows = 13;
    let p = build_partition(bound).map_err(|e| e.to_string())?;
    let from_grid = grid::row_values_below(rows, bound);
    for (i, g) in from_grid.iter().enumerate() {
        let s: Vec<u64> = p.row(i).to_vec();
        ensure(*g == s, || format!("row {i}: grid {} values, sieve {}", g.len(), s.len()))?;
    }
    let total: usize = from_grid.iter().map(Vec::len).sum();
    Ok(format!("rows 0..=12, {total} values below 3^7"))
}

fn theorem1() -> Outcome {
    let rows = 200;
    let column = GridWindow::build(rows, 1);
    let p = sieve_until_rows(rows, &Caps::default()).map_err(|e| e.to_string())?;
    for i in 0..rows {
        let w = column.cell(i, 0);
        let r = represent_u64(2 * i as u64, RationalBase::THREE_HALVES);
        ensure(*w == r, || format!("row {i}: G(i,0)={w}, (2i)_3/2={r}"))?;
        let first = p.row(i).first().copied();
        ensure(w.ternary_u64() == first, || format!("row {i}: [{w}]_3 vs sieve {first:?}"))?;
    }
    Ok(format!("i < {rows}, sieve bound {}", p.bound()))
}

fn fractal_structure() -> Outcome {
    let window = GridWindow::build(30, 64);
    for a in 0..10 {
        for b in 0..32 {
            for kind in [HalfZKind::Upper, HalfZKind::Lower] {
                let m = fractal::members(kind, (a, b));
                let [x, y, z] = m.map(|c| window.cell(c.row as usize, c.col as usize));
                ensure(fractal::forms_halfz(x, y, z), || format!("{kind:?} ({a},{b})"))?;
            }
        }
    }
    let zoomed = fractal::zoom_out(&window).map_err(|e| e.to_string())?;
    ensure(zoomed == GridWindow::build(20, 32), || "zoom-out of 30x64 differs from G".into())?;
    let n = 3u64.pow(9);
    fractal::check_traversal(&Grid::new(), n).map_err(|f| format!("{f:?}"))?;
    Ok(format!("30x64 window, traversal n < {n}"))
}

fn lemmas() -> Outcome {
    let m = fractal::check_minus1(3u64.pow(9));
    ensure(m.counterexample.is_none(), || format!("minus-one: {:?}", m.counterexample))?;
    let z = fractal::check_zero_column(200);
    ensure(z.failure.is_none(), || format!("zero column: {:?}", z.failure))?;
    Ok(format!("{} values, {} cells compared", m.checked, z.cells_compared))
}

fn witnesses() -> Outcome {
    let x: DigitString = "11102010220102110110011000".parse().unwrap();
    let expected_a = "11100010000100110100002000";
    let expected_b = "11101010110101110101200000";
    let ((a, b), _) = witness::witness_row1(&x).ok_or("no row-1 parse")?;
    let mut problems = Vec::new();
    if b.to_string() != expected_b {
        problems.push(format!("b = {b}, expected {expected_b}"));
    }
    if a.to_string() != expected_a {
        let (av, bv, xv) = (
            a.value_in_integer_base(3),
            b.value_in_integer_base(3),
            x.value_in_integer_base(3),
        );
        let printed = expected_a.parse::<DigitString>().unwrap().value_in_integer_base(3);
        problems.push(format!(
            "a = {a}, expected {expected_a}; a+x=2b holds for ours: {}, for expected: {}",
            &av + &xv == &bv * 2u32,
            &printed + &xv == &bv * 2u32
        ));
    }

    let bound = 3u64.pow(7);
    let p = build_partition(bound).map_err(|e| e.to_string())?;
    let mut pairs = 0u64;
    for n in 0..bound {
        let x = DigitString::ternary(n);
        let i = grid::row_of(&x).map_err(|e| e.to_string())?;
        for j in 0..i {
            let w = witness::witness(&x, j).map_err(|e| format!("x={x} j={j}: {e}"))?;
            let (c, d) = (w.c.ternary_u64().unwrap(), w.d.ternary_u64().unwrap());
            ensure(c < d && c + n == 2 * d, || format!("x={x} j={j}: not a progression"))?;
            let oracle = witness::witness_oracle(n, j as usize, &p).map_err(|e| format!("oracle x={x} j={j}: {e}"))?;
            ensure(oracle <= (c, d), || format!("oracle x={x} j={j} above construction"))?;
            pairs += 1;
        }
    }
    if problems.is_empty() {
        Ok(format!("worked example exact; {pairs} pairs below 3^7 validated"))
    } else {
        Err(format!("{}; {pairs} pairs below 3^7 validated", problems.join("; ")))
    }
}

fn determinism() -> Outcome {
    // the same parameters the binary uses for `verify --suite all`
    let run = || {
        let params = VerifyParams {
            max_value: 2187,
            max_rows: 12,
            references: reference::resolve(&[]),
            caps: Caps::default(),
        };
        harness::run(Suite::All, &params).map_err(|e| e.to_string())
    };
    let (first, second) = (run()?, run()?);
    ensure(first.passed, || "first run did not pass".into())?;
    let (text, json) = (first.to_text(), first.to_json());
    ensure(text == second.to_text(), || "text reports differ between runs".into())?;
    ensure(json == second.to_json(), || "json reports differ between runs".into())?;
    Ok(format!("{} text bytes, {} json bytes identical", text.len(), json.len()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "base-3/2 prefix", limit: Some(Duration::from_millis(1)), run: base_three_halves_prefix },
        Criterion { id: 2, title: "carry rule on strings of length <= 12", limit: Some(Duration::from_secs(30)), run: carry_rule },
        Criterion { id: 3, title: "greedy rows and cross-sequence", limit: Some(Duration::from_secs(5)), run: greedy_rows },
        Criterion { id: 4, title: "grid rows equal sieve rows", limit: Some(Duration::from_secs(60)), run: theorem2 },
        Criterion { id: 5, title: "column 0 starts each row", limit: Some(Duration::from_secs(60)), run: theorem1 },
        Criterion { id: 6, title: "halfZ partition, zoom-out, traversal", limit: Some(Duration::from_secs(60)), run: fractal_structure },
        Criterion { id: 7, title: "row-drop and zero-column lemmas", limit: Some(Duration::from_secs(60)), run: lemmas },
        Criterion { id: 8, title: "witness soundness and worked example", limit: Some(Duration::from_secs(300)), run: witnesses },
        Criterion { id: 9, title: "deterministic reports", limit: None, run: determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let over = c.limit.is_some_and(|limit| elapsed > limit);
        let limit = c.limit.map_or("none".to_string(), |l| format!("{l:?}"));
        let (status, detail) = match (&outcome, over) {
            (Ok(detail), false) => ("PASS", detail.clone()),
            (Ok(detail), true) => ("FAIL", format!("{detail}; over time limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} criterion {}: {} [{:.3?} / limit {limit}] {detail}",
            c.id, c.title, elapsed
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
