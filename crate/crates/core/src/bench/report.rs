use std::fmt::Write as _;

use serde::Serialize;

use super::stats::{ci_half_width, geometric_mean};
use crate::backend::Backend;
use crate::object_space::Boundary;

pub const CI_LEVEL: f64 = 0.95;
pub const CI_METHOD: &str = "geometric mean of run times; 0.95 CI from Student-t on log run times, shown as gm*(exp(h)-1); ratio = mean / ast mean on the same case and boundary";

/// Raw timing samples for one (case, backend, boundary) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub case: String,
    pub backend: Backend,
    pub boundary: Boundary,
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub case: String,
    pub backend: &'static str,
    pub boundary: &'static str,
    pub samples: Vec<f64>,
    pub mean: Option<f64>,
    pub ci95: Option<f64>,
    pub ratio: Option<f64>,
}

/// Cross-benchmark ratio for one backend: geometric mean of its per-case ratios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub backend: &'static str,
    pub boundary: &'static str,
    pub cases: usize,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub cells: Vec<Cell>,
    pub aggregates: Vec<Aggregate>,
}

pub fn summarize(measurements: &[Measurement]) -> BenchReport {
    let mut cells: Vec<Cell> = measurements
        .iter()
        .map(|m| Cell {
            case: m.case.clone(),
            backend: m.backend.name(),
            boundary: m.boundary.name(),
            samples: m.samples.clone(),
            mean: geometric_mean(&m.samples).ok(),
            ci95: ci_half_width(&m.samples, CI_LEVEL).ok(),
            ratio: None,
        })
        .collect();
    let base = |case: &str, boundary: &str, cells: &[Cell]| {
        cells
            .iter()
            .find(|c| c.case == case && c.boundary == boundary && c.backend == Backend::Ast.name())
            .and_then(|c| c.mean)
    };
    for i in 0..cells.len() {
        let ratio = match (cells[i].mean, base(&cells[i].case, cells[i].boundary, &cells)) {
            (Some(m), Some(b)) => Some(m / b),
            _ => None,
        };
        cells[i].ratio = ratio;
    }

    let mut aggregates: Vec<Aggregate> = Vec::new();
    for m in measurements {
        let (backend, boundary) = (m.backend.name(), m.boundary.name());
        if aggregates.iter().any(|a| a.backend == backend && a.boundary == boundary) {
            continue;
        }
        let ratios: Vec<f64> = cells
            .iter()
            .filter(|c| c.backend == backend && c.boundary == boundary)
            .filter_map(|c| c.ratio)
            .collect();
        aggregates.push(Aggregate { backend, boundary, cases: ratios.len(), ratio: geometric_mean(&ratios).ok() });
    }
    BenchReport { cells, aggregates }
}

fn fmt_opt(v: Option<f64>, prec: usize) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.prec$}"))
}

impl BenchReport {
    /// Aligned text table: benchmark × backend, `mean ± ci (ratio)`.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<[String; 5]> = vec![[
            "benchmark".into(),
            "backend".into(),
            "boundary".into(),
            "mean [s] ± ci".into(),
            "(ratio)".into(),
        ]];
        for c in &self.cells {
            rows.push([
                c.case.clone(),
                c.backend.into(),
                c.boundary.into(),
                format!("{} ± {}", fmt_opt(c.mean, 6), fmt_opt(c.ci95, 6)),
                format!("({})", fmt_opt(c.ratio, 2)),
            ]);
        }
        for a in &self.aggregates {
            rows.push([
                format!("all ({} cases)", a.cases),
                a.backend.into(),
                a.boundary.into(),
                String::new(),
                format!("({})", fmt_opt(a.ratio, 2)),
            ]);
        }
        let mut widths = [0usize; 5];
        for r in &rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "# {CI_METHOD}");
        for r in &rows {
            let mut line = String::new();
            for (i, (cell, w)) in r.iter().zip(widths).enumerate() {
                let pad = w - cell.chars().count();
                if i == 3 {
                    line.push_str(&" ".repeat(pad));
                    line.push_str(cell);
                } else {
                    line.push_str(cell);
                    line.push_str(&" ".repeat(pad));
                }
                line.push_str("  ");
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    /// One JSON object per line: first a header, then one per cell, then the aggregates.
    pub fn to_records(&self) -> String {
        #[derive(Serialize)]
        struct Header {
            kind: &'static str,
            method: &'static str,
            level: f64,
        }
        #[derive(Serialize)]
        struct Tagged<'a, T> {
            kind: &'static str,
            #[serde(flatten)]
            inner: &'a T,
        }
        let mut out = String::new();
        let mut push = |line: serde_json::Result<String>| {
            out.push_str(&line.expect("report records serialize"));
            out.push('\n');
        };
        push(serde_json::to_string(&Header { kind: "header", method: CI_METHOD, level: CI_LEVEL }));
        for c in &self.cells {
            push(serde_json::to_string(&Tagged { kind: "cell", inner: c }));
        }
        for a in &self.aggregates {
            push(serde_json::to_string(&Tagged { kind: "aggregate", inner: a }));
        }
        out
    }
}
