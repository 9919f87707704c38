//! Engine × instance grids with counter collection, CSV output and log-log
//! slope fitting.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::engine::{evaluate, Engine, Query};
use crate::error::{Error, Result};
use crate::generators::{gen_path, gen_random, gen_two_cycles};
use crate::graph::LabeledGraph;
use crate::regex::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Path of `b`-edges.
    Path,
    TwoCycles,
    /// `size` vertices, `2·size` edges over `{a,b,c}`, seed 0.
    Random,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::TwoCycles => "two-cycles",
            Family::Random => "random",
        }
    }

    pub fn generate(self, size: usize) -> Result<LabeledGraph> {
        match self {
            Family::Path => gen_path(size, "b"),
            Family::TwoCycles => gen_two_cycles(size),
            Family::Random => gen_random(size, 2 * size, &["a", "b", "c"], 0),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(Family::Path),
            "two-cycles" => Ok(Family::TwoCycles),
            "random" => Ok(Family::Random),
            _ => Err(Error::InvalidArgument(format!(
                "unknown family '{s}' (expected path, two-cycles or random)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchCell {
    pub family: Family,
    pub size: usize,
    pub engine: Engine,
    /// `Err` holds the message of a failed generation or evaluation.
    pub outcome: std::result::Result<CellStats, String>,
}

#[derive(Clone, Debug)]
pub struct CellStats {
    pub out: usize,
    pub counters: Vec<(&'static str, u64)>,
    pub total_work: u64,
    /// Median over repeats.
    pub wall_ns: u128,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    family: &'a str,
    size: usize,
    engine: &'a str,
    out: Option<usize>,
    counter_name: &'a str,
    value: String,
    wall_ns: Option<u128>,
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub cells: Vec<BenchCell>,
}

impl BenchReport {
    pub fn cell(&self, family: Family, size: usize, engine: Engine) -> Option<&BenchCell> {
        self.cells
            .iter()
            .find(|c| c.family == family && c.size == size && c.engine == engine)
    }

    /// `(size, value)` of one counter across the sizes of a family and engine.
    /// Use `"total_work"` for the sum of all counters.
    pub fn series(&self, family: Family, engine: Engine, counter: &str) -> Vec<(f64, f64)> {
        self.cells
            .iter()
            .filter(|c| c.family == family && c.engine == engine)
            .filter_map(|c| {
                let s = c.outcome.as_ref().ok()?;
                let v = if counter == "total_work" {
                    s.total_work
                } else {
                    s.counters.iter().find(|(n, _)| *n == counter)?.1
                };
                Some((c.size as f64, v as f64))
            })
            .collect()
    }

    /// One row per counter per cell, plus a `total_work` row; a failed cell
    /// yields a single `error` row carrying the message.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for c in &self.cells {
            let base = |counter_name, value, out, wall_ns| CsvRow {
                family: c.family.name(),
                size: c.size,
                engine: c.engine.name(),
                out,
                counter_name,
                value,
                wall_ns,
            };
            match &c.outcome {
                Ok(s) => {
                    let extra = [("total_work", s.total_work)];
                    for &(name, v) in s.counters.iter().chain(extra.iter()) {
                        w.serialize(base(name, v.to_string(), Some(s.out), Some(s.wall_ns)))
                            .map_err(csv_error)?;
                    }
                }
                Err(msg) => {
                    w.serialize(base("error", msg.clone(), None, None))
                        .map_err(csv_error)?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn run_cell(g: &LabeledGraph, engine: Engine, query: &Query, repeats: usize) -> Result<CellStats> {
    let mut times = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats.max(1) {
        let t = Instant::now();
        let run = evaluate(engine, g, query)?;
        times.push(t.elapsed().as_nanos());
        last = Some(run);
    }
    times.sort_unstable();
    let run = last.expect("at least one repeat");
    Ok(CellStats {
        out: run.pairs.len(),
        total_work: run.total_work(),
        counters: run.counters,
        wall_ns: times[times.len() / 2],
    })
}

/// Runs every `(family, size, engine)` cell in that order. Failures are
/// recorded in the cell and do not stop the grid; only a malformed query is
/// an error.
pub fn run_grid(
    families: &[Family],
    sizes: &[usize],
    engines: &[Engine],
    query: &str,
    repeats: usize,
) -> Result<BenchReport> {
    let query: Query = parse(query)?.into();
    let mut report = BenchReport::default();
    for &family in families {
        for &size in sizes {
            let graph = family.generate(size);
            for &engine in engines {
                let outcome = match &graph {
                    Ok(g) => run_cell(g, engine, &query, repeats).map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                };
                report.cells.push(BenchCell {
                    family,
                    size,
                    engine,
                    outcome,
                });
            }
        }
    }
    Ok(report)
}

/// Least-squares slope of `ln(work)` against `ln(size)`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(
            "slope fit needs at least 3 points".into(),
        ));
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::InvalidArgument(
            "sizes must be strictly increasing".into(),
        ));
    }
    if points.iter().any(|&(s, w)| s <= 0.0 || w <= 0.0) {
        return Err(Error::InvalidArgument(
            "sizes and work must be positive".into(),
        ));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
