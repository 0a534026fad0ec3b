//! Monte Carlo harness: estimates symmetry probabilities, DSED threshold
//! rates, and sample statistics over (n, p) grids with reproducible
//! per-sample random streams.
//!
//! Determinism contract: the same spec and seed produce identical CSV data
//! columns. Cells run in grid order; samples within a cell run in parallel
//! with seeds derived from (base seed, cell index, sample index), so the
//! schedule cannot change any result.

use std::time::Instant;

use rayon::prelude::*;

use crate::degree::dsed;
use crate::graph::Graph;
use crate::random::{derive_seed, sample_gnp, triangle_count, GnpSpec, PRNG_ID};
use crate::symmetry::{graph_globally_symmetric, graph_k_locally_symmetric, PairVerdict, QueryOpts};

/// What each sample of a cell measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    LocalSymmetry,
    GlobalSymmetry,
    DsedPairs,
    TriangleStats,
    DegreeConcentration,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::LocalSymmetry => "local-symmetry",
            Mode::GlobalSymmetry => "global-symmetry",
            Mode::DsedPairs => "dsed-pairs",
            Mode::TriangleStats => "triangle-stats",
            Mode::DegreeConcentration => "degree-concentration",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "local-symmetry" => Ok(Mode::LocalSymmetry),
            "global-symmetry" => Ok(Mode::GlobalSymmetry),
            "dsed-pairs" => Ok(Mode::DsedPairs),
            "triangle-stats" => Ok(Mode::TriangleStats),
            "degree-concentration" => Ok(Mode::DegreeConcentration),
            other => Err(format!(
                "unknown mode {other:?} (expected local-symmetry, global-symmetry, dsed-pairs, triangle-stats, or degree-concentration)"
            )),
        }
    }
}

/// One grid cell: a vertex count and an edge probability, the latter
/// either explicit or derived as p = c * n^(-alpha).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub n: usize,
    /// Present when the probability came from an exponent.
    pub alpha: Option<f64>,
    pub p: f64,
}

impl Cell {
    pub fn explicit(n: usize, p: f64) -> Cell {
        Cell { n, alpha: None, p }
    }

    pub fn from_alpha(n: usize, alpha: f64, c: f64) -> Cell {
        Cell {
            n,
            alpha: Some(alpha),
            p: c * (n as f64).powf(-alpha),
        }
    }
}

/// A full experiment: a mode, shared parameters, and a list of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub mode: Mode,
    pub cells: Vec<Cell>,
    pub samples: u64,
    pub seed: u64,
    /// Locality order for local-symmetry mode.
    pub k: u32,
    /// Canonicalization node budget per query.
    pub budget: u64,
    /// Threshold exponent for dsed-pairs: success means dsed >= n^(1/2 - epsilon).
    pub epsilon: f64,
    /// Tolerance for degree-concentration.
    pub delta: f64,
    pub star_fast_path: bool,
}

impl ExperimentSpec {
    /// Checks hard invariants and returns advisory warnings (regime band
    /// violations are warned about, never enforced).
    pub fn validate(&self) -> Result<Vec<String>, String> {
        if self.samples == 0 {
            return Err("samples must be at least 1".to_string());
        }
        for (i, cell) in self.cells.iter().enumerate() {
            if cell.n == 0 {
                return Err(format!("cell {}: n must be at least 1", i + 1));
            }
            if !(0.0..=1.0).contains(&cell.p) || !cell.p.is_finite() {
                return Err(format!("cell {}: p = {} lies outside [0,1]", i + 1, cell.p));
            }
        }
        let mut warnings = Vec::new();
        if self.mode == Mode::DsedPairs {
            for cell in &self.cells {
                let n = cell.n as f64;
                let low = n.ln() / n;
                let high = n.powf(-0.5);
                if cell.p < low || cell.p > high {
                    warnings.push(format!(
                        "cell (n={}, p={}): p outside the band [ln(n)/n, n^-1/2] = [{low:.3e}, {high:.3e}] where the dsed threshold regime holds",
                        cell.n, cell.p
                    ));
                }
            }
        }
        Ok(warnings)
    }
}

/// One output row per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub p: f64,
    pub alpha: Option<f64>,
    pub k: u32,
    pub mode: Mode,
    pub samples: u64,
    pub successes: u64,
    pub undecided: u64,
    /// successes / decided samples; absent when every sample was undecided.
    pub estimate: Option<f64>,
    pub wilson_low: Option<f64>,
    pub wilson_high: Option<f64>,
    pub seed: u64,
    /// Mean wall-clock seconds per sample. Not part of the CSV or the
    /// determinism contract.
    pub mean_runtime: f64,
}

/// CSV header for experiment output.
pub const CSV_HEADER: &str = "n,p,alpha,k,mode,samples,successes,undecided,estimate,wilson_low,wilson_high,seed,prng_id";

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl ExperimentRow {
    /// Data columns in header order. Runtime is deliberately excluded so
    /// rows are byte-identical across runs.
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.p,
            fmt_opt(self.alpha),
            self.k,
            self.mode,
            self.samples,
            self.successes,
            self.undecided,
            fmt_opt(self.estimate),
            fmt_opt(self.wilson_low),
            fmt_opt(self.wilson_high),
            self.seed,
            PRNG_ID,
        )
    }
}

/// z for a 95% interval.
pub const WILSON_Z95: f64 = 1.959963984540054;

/// Wilson score interval for a binomial proportion; robust near 0 and 1.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials >= 1, "wilson interval needs at least one trial");
    assert!(successes <= trials);
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    // At the extremes the bound is exactly the sample proportion; keep it
    // that way despite rounding.
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Tally of one cell's samples before row assembly.
struct Tally {
    successes: u64,
    undecided: u64,
}

fn assemble_row(cell: &Cell, spec: &ExperimentSpec, k: u32, tally: Tally, elapsed_secs: f64) -> ExperimentRow {
    let decided = spec.samples - tally.undecided;
    let (estimate, wilson_low, wilson_high) = if decided > 0 {
        let (lo, hi) = wilson_interval(tally.successes, decided, WILSON_Z95);
        (Some(tally.successes as f64 / decided as f64), Some(lo), Some(hi))
    } else {
        (None, None, None)
    };
    ExperimentRow {
        n: cell.n,
        p: cell.p,
        alpha: cell.alpha,
        k,
        mode: spec.mode,
        samples: spec.samples,
        successes: tally.successes,
        undecided: tally.undecided,
        estimate,
        wilson_low,
        wilson_high,
        seed: spec.seed,
        mean_runtime: elapsed_secs / spec.samples as f64,
    }
}

fn cell_graph(spec: &ExperimentSpec, cell: &Cell, cell_idx: u64, sample: u64, lane: u64) -> Graph {
    sample_gnp(&GnpSpec {
        n: cell.n,
        p: cell.p,
        seed: derive_seed(spec.seed, &[cell_idx, sample, lane]),
    })
}

/// Estimates the probability that G(n,p) is k-locally (or globally)
/// symmetric. Budget failures count as undecided and leave the estimate's
/// denominator.
pub fn run_symmetry_cell(spec: &ExperimentSpec, cell: &Cell, cell_idx: u64) -> ExperimentRow {
    let opts = QueryOpts {
        budget: spec.budget,
        star_fast_path: spec.star_fast_path,
    };
    let start = Instant::now();
    let verdicts: Vec<PairVerdict> = (0..spec.samples)
        .into_par_iter()
        .map(|i| {
            let g = cell_graph(spec, cell, cell_idx, i, 0);
            match spec.mode {
                Mode::GlobalSymmetry => graph_globally_symmetric(&g, &opts).status(),
                _ => graph_k_locally_symmetric(&g, spec.k, &opts).status(),
            }
        })
        .collect();
    let tally = Tally {
        successes: verdicts.iter().filter(|&&v| v == PairVerdict::Symmetric).count() as u64,
        undecided: verdicts.iter().filter(|&&v| v == PairVerdict::Undecided).count() as u64,
    };
    let k = if spec.mode == Mode::LocalSymmetry { spec.k } else { 0 };
    assemble_row(cell, spec, k, tally, start.elapsed().as_secs_f64())
}

/// Estimates how often two independent G(n,p) draws have
/// dsed >= n^(1/2 - epsilon).
pub fn run_dsed_pair_cell(spec: &ExperimentSpec, cell: &Cell, cell_idx: u64) -> ExperimentRow {
    let threshold = (cell.n as f64).powf(0.5 - spec.epsilon);
    let start = Instant::now();
    let successes = (0..spec.samples)
        .into_par_iter()
        .filter(|&i| {
            let g1 = cell_graph(spec, cell, cell_idx, i, 0);
            let g2 = cell_graph(spec, cell, cell_idx, i, 1);
            dsed(&g1, &g2) as f64 >= threshold
        })
        .count() as u64;
    let tally = Tally { successes, undecided: 0 };
    assemble_row(cell, spec, 0, tally, start.elapsed().as_secs_f64())
}

/// Triangle statistics of a cell, beyond the plain row.
#[derive(Debug, Clone)]
pub struct TriangleCellStats {
    pub row: ExperimentRow,
    pub empirical_mean: f64,
    /// C(n,3) p^3.
    pub analytic_mean: f64,
    pub relative_error: f64,
}

/// Fraction of the analytic mean a sample may deviate by and still count
/// as a success in the CSV row.
pub const TRIANGLE_SUCCESS_BAND: f64 = 0.5;

/// Measures triangle counts against the analytic mean C(n,3) p^3.
pub fn run_triangle_cell(spec: &ExperimentSpec, cell: &Cell, cell_idx: u64) -> TriangleCellStats {
    let n = cell.n as f64;
    let analytic = n * (n - 1.0) * (n - 2.0) / 6.0 * cell.p.powi(3);
    let start = Instant::now();
    let counts: Vec<u64> = (0..spec.samples)
        .into_par_iter()
        .map(|i| triangle_count(&cell_graph(spec, cell, cell_idx, i, 0)))
        .collect();
    let successes = counts
        .iter()
        .filter(|&&t| (t as f64 - analytic).abs() <= TRIANGLE_SUCCESS_BAND * analytic)
        .count() as u64;
    let empirical = counts.iter().sum::<u64>() as f64 / spec.samples as f64;
    let relative_error = if analytic == 0.0 {
        empirical
    } else {
        (empirical - analytic).abs() / analytic
    };
    let tally = Tally { successes, undecided: 0 };
    TriangleCellStats {
        row: assemble_row(cell, spec, 0, tally, start.elapsed().as_secs_f64()),
        empirical_mean: empirical,
        analytic_mean: analytic,
        relative_error,
    }
}

/// Fraction of samples whose degrees all stay strictly inside
/// (n-1)p(1 +/- delta).
pub fn run_concentration_cell(spec: &ExperimentSpec, cell: &Cell, cell_idx: u64) -> ExperimentRow {
    let start = Instant::now();
    let successes = (0..spec.samples)
        .into_par_iter()
        .filter(|&i| {
            let g = cell_graph(spec, cell, cell_idx, i, 0);
            crate::random::degree_concentration_check(&g, cell.p, spec.delta)
        })
        .count() as u64;
    let tally = Tally { successes, undecided: 0 };
    assemble_row(cell, spec, 0, tally, start.elapsed().as_secs_f64())
}

/// Runs every cell in grid order, handing each finished row to `on_row`
/// (the CLI streams and flushes CSV there). Samples inside a cell run in
/// parallel; output order is the grid order regardless of scheduling.
pub fn run_experiment(
    spec: &ExperimentSpec,
    mut on_row: impl FnMut(&ExperimentRow) -> std::io::Result<()>,
) -> std::io::Result<Vec<ExperimentRow>> {
    let mut rows = Vec::with_capacity(spec.cells.len());
    for (idx, cell) in spec.cells.iter().enumerate() {
        let row = match spec.mode {
            Mode::LocalSymmetry | Mode::GlobalSymmetry => run_symmetry_cell(spec, cell, idx as u64),
            Mode::DsedPairs => run_dsed_pair_cell(spec, cell, idx as u64),
            Mode::TriangleStats => run_triangle_cell(spec, cell, idx as u64).row,
            Mode::DegreeConcentration => run_concentration_cell(spec, cell, idx as u64),
        };
        on_row(&row)?;
        rows.push(row);
    }
    Ok(rows)
}
