//! Pictures of a corner of `G` with its halfZ segments.
//!
//! Level-0 segments join member cells; a level-`m` segment joins the
//! centroids of two consecutive member halfZs of level `m - 1`. Only halfZs
//! lying entirely inside the window are drawn.

use std::fmt::Write as _;

use crate::grid::GridCoord;

use super::{halfzs_in_window, HalfZ};

pub const MAX_LEVELS: u32 = 4;

/// Stroke colours by level, repeating.
pub const PALETTE: [&str; 4] = ["black", "red", "green", "orange"];

const CELL: f64 = 40.0;
const MARGIN: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    pub rows: u64,
    pub cols: u64,
    /// Levels `0..levels` are drawn.
    pub levels: u32,
    pub labels: bool,
}

/// Centroid (row, col) of the `G` cells a member of `h` stands for.
fn member_centroids(h: &HalfZ) -> [(f64, f64); 3] {
    let cells = h.covered_cells();
    let per_member = cells.len() / 3;
    let mut out = [(0.0, 0.0); 3];
    for (k, chunk) in cells.chunks(per_member).enumerate() {
        let n = chunk.len() as f64;
        let r = chunk.iter().map(|c| c.row as f64).sum::<f64>() / n;
        let c = chunk.iter().map(|c| c.col as f64).sum::<f64>() / n;
        out[k] = (r, c);
    }
    out
}

fn to_xy((row, col): (f64, f64)) -> (f64, f64) {
    (MARGIN + col * CELL, MARGIN + row * CELL)
}

pub fn svg(opts: &RenderOptions, label: impl Fn(GridCoord) -> String) -> String {
    let width = 2.0 * MARGIN + (opts.cols.max(1) - 1) as f64 * CELL;
    let height = 2.0 * MARGIN + (opts.rows.max(1) - 1) as f64 * CELL;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for level in (0..opts.levels.min(MAX_LEVELS)).rev() {
        let colour = PALETTE[level as usize % PALETTE.len()];
        let stroke = 1.0 + level as f64;
        writeln!(
            out,
            r#"<g class="level-{level}" stroke="{colour}" stroke-width="{stroke}" fill="none">"#
        )
        .unwrap();
        for h in halfzs_in_window(opts.rows, opts.cols, level) {
            let points: Vec<String> = member_centroids(&h)
                .into_iter()
                .map(|p| {
                    let (x, y) = to_xy(p);
                    format!("{x},{y}")
                })
                .collect();
            writeln!(out, r#"<polyline points="{}"/>"#, points.join(" ")).unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, r#"<g fill="black" font-family="monospace" font-size="10">"#).unwrap();
    for row in 0..opts.rows {
        for col in 0..opts.cols {
            let (x, y) = to_xy((row as f64, col as f64));
            writeln!(out, r#"<circle cx="{x}" cy="{y}" r="2.5"/>"#).unwrap();
            if opts.labels {
                let text = label(GridCoord::new(row, col));
                writeln!(out, r#"<text x="{}" y="{}">{text}</text>"#, x + 4.0, y - 4.0).unwrap();
            }
        }
    }
    writeln!(out, "</g>").unwrap();
    out.push_str("</svg>\n");
    out
}

/// Character picture of the level-0 segments (`-` within a row, `/` down to
/// the row below), followed by a listing of higher-level halfZs.
pub fn ascii(opts: &RenderOptions, label: impl Fn(GridCoord) -> String) -> String {
    let labels: Vec<Vec<String>> = (0..opts.rows)
        .map(|r| {
            (0..opts.cols)
                .map(|c| {
                    if opts.labels {
                        label(GridCoord::new(r, c))
                    } else {
                        "o".to_string()
                    }
                })
                .collect()
        })
        .collect();
    let slot = labels.iter().flatten().map(String::len).max().unwrap_or(1) + 3;
    let rows = opts.rows as usize;
    let cols = opts.cols as usize;
    let mut canvas = vec![vec![' '; slot * cols]; 2 * rows];
    for (r, row) in labels.iter().enumerate() {
        for (c, text) in row.iter().enumerate() {
            for (k, ch) in text.chars().enumerate() {
                canvas[2 * r][c * slot + k] = ch;
            }
        }
    }
    if opts.levels > 0 {
        for h in halfzs_in_window(opts.rows, opts.cols, 0) {
            for pair in h.members.windows(2) {
                let (from, to) = (pair[0], pair[1]);
                let (fr, fc) = (from.row as usize, from.col as usize);
                if from.row == to.row {
                    let start = fc * slot + labels[fr][fc].len() + 1;
                    let end = (to.col as usize * slot).saturating_sub(1).max(start);
                    canvas[2 * fr][start..end].fill('-');
                } else {
                    let x = to.col as usize * slot + (slot + labels[fr][fc].len()) / 2;
                    canvas[2 * fr + 1][x.min(slot * cols - 1)] = '/';
                }
            }
        }
    }
    let mut out = String::new();
    for line in canvas.iter().take(2 * rows - 1) {
        let text: String = line.iter().collect();
        writeln!(out, "{}", text.trim_end()).unwrap();
    }
    for level in 1..opts.levels.min(MAX_LEVELS) {
        let colour = PALETTE[level as usize % PALETTE.len()];
        let found = halfzs_in_window(opts.rows, opts.cols, level);
        if found.is_empty() {
            continue;
        }
        writeln!(out, "\nlevel {level} ({colour}):").unwrap();
        for h in found {
            let members: Vec<String> = h.members.iter().map(ToString::to_string).collect();
            writeln!(
                out,
                "  {:?} anchor ({},{}) lcp {} members {}",
                h.kind,
                h.anchor.0,
                h.anchor.1,
                h.lcp,
                members.join(" -> ")
            )
            .unwrap();
        }
    }
    out
}
