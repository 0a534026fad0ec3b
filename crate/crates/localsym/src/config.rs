//! Flat key-value experiment config format.
//!
//! Grammar: `key = value` lines, `#` comments, blank lines ignored. Global
//! keys come first; each `[cell.N]` section then declares one grid cell
//! group with `n` and either `alpha` or `p`. Comma-separated lists expand
//! as a cross product in n-major order, and cells are ordered by their
//! section number.
//!
//! Global keys: `mode` (required), `samples` (required), `seed` (required),
//! `k` (default 1), `budget` (default 1000000), `c` (default 1),
//! `epsilon` (default 0.1), `delta` (default 0.5), `star-fast-path`
//! (default true).

use thiserror::Error;

use crate::canonical::DEFAULT_NODE_BUDGET;
use crate::experiment::{Cell, ExperimentSpec, Mode};

/// Syntax or semantic config error with its 1-based position.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

fn err(line: usize, col: usize, message: impl Into<String>) -> ConfigError {
    ConfigError { line, col, message: message.into() }
}

struct RawCell {
    label: u64,
    line: usize,
    n: Option<(Vec<u64>, usize)>,
    alpha: Option<(Vec<f64>, usize)>,
    p: Option<(Vec<f64>, usize)>,
}

#[derive(Default)]
struct Globals {
    mode: Option<Mode>,
    samples: Option<u64>,
    seed: Option<u64>,
    k: Option<u32>,
    budget: Option<u64>,
    c: Option<f64>,
    epsilon: Option<f64>,
    delta: Option<f64>,
    star_fast_path: Option<bool>,
}

fn parse_list<T: std::str::FromStr>(
    value: &str,
    line: usize,
    col: usize,
    what: &str,
) -> Result<Vec<T>, ConfigError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in value.split(',') {
        let trimmed = piece.trim();
        let piece_col = col + offset + (piece.len() - piece.trim_start().len());
        if trimmed.is_empty() {
            return Err(err(line, piece_col, format!("empty {what} list element")));
        }
        out.push(
            trimmed
                .parse::<T>()
                .map_err(|_| err(line, piece_col, format!("expected {what}, found {trimmed:?}")))?,
        );
        offset += piece.len() + 1;
    }
    Ok(out)
}

fn parse_scalar<T: std::str::FromStr>(
    value: &str,
    line: usize,
    col: usize,
    what: &str,
) -> Result<T, ConfigError> {
    value
        .parse::<T>()
        .map_err(|_| err(line, col, format!("expected {what}, found {value:?}")))
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, col: usize, key: &str) -> Result<(), ConfigError> {
    if slot.is_some() {
        return Err(err(line, col, format!("duplicate key {key:?}")));
    }
    *slot = Some(value);
    Ok(())
}

/// Parses the config text into a fully resolved experiment spec
/// (alpha-parametrized cells get p = c * n^(-alpha) applied here).
/// Syntax and structural errors carry line/column positions; numeric range
/// checks live in `ExperimentSpec::validate`.
pub fn parse_experiment_config(src: &str) -> Result<ExperimentSpec, ConfigError> {
    let mut globals = Globals::default();
    let mut cells: Vec<RawCell> = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col0 = content.len() - content.trim_start().len() + 1;

        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                return Err(err(line, col0, "unterminated section header"));
            };
            let Some(label_text) = inner.strip_prefix("cell.") else {
                return Err(err(line, col0, format!("unknown section {inner:?} (expected [cell.N])")));
            };
            let label: u64 = label_text
                .parse()
                .map_err(|_| err(line, col0, format!("cell label {label_text:?} is not a number")))?;
            if cells.iter().any(|c| c.label == label) {
                return Err(err(line, col0, format!("duplicate section [cell.{label}]")));
            }
            cells.push(RawCell { label, line, n: None, alpha: None, p: None });
            continue;
        }

        let Some(eq) = content.find('=') else {
            return Err(err(line, col0, "expected `key = value`"));
        };
        let key = content[..eq].trim();
        let key_col = col0;
        let value = content[eq + 1..].trim();
        let value_col = eq + 2 + (content[eq + 1..].len() - content[eq + 1..].trim_start().len());
        if key.is_empty() {
            return Err(err(line, key_col, "missing key before `=`"));
        }
        if value.is_empty() {
            return Err(err(line, value_col, format!("missing value for key {key:?}")));
        }

        if let Some(cell) = cells.last_mut() {
            match key {
                "n" => {
                    let v = parse_list::<u64>(value, line, value_col, "a vertex count")?;
                    set_once(&mut cell.n, (v, line), line, key_col, key)?;
                }
                "alpha" => {
                    let v = parse_list::<f64>(value, line, value_col, "a number")?;
                    set_once(&mut cell.alpha, (v, line), line, key_col, key)?;
                }
                "p" => {
                    let v = parse_list::<f64>(value, line, value_col, "a probability")?;
                    set_once(&mut cell.p, (v, line), line, key_col, key)?;
                }
                other => {
                    return Err(err(line, key_col, format!("unknown cell key {other:?} (expected n, alpha, or p)")));
                }
            }
        } else {
            match key {
                "mode" => {
                    let mode = value.parse::<Mode>().map_err(|e| err(line, value_col, e))?;
                    set_once(&mut globals.mode, mode, line, key_col, key)?;
                }
                "samples" => {
                    let v = parse_scalar::<u64>(value, line, value_col, "a sample count")?;
                    set_once(&mut globals.samples, v, line, key_col, key)?;
                }
                "seed" => {
                    let v = parse_scalar::<u64>(value, line, value_col, "a 64-bit seed")?;
                    set_once(&mut globals.seed, v, line, key_col, key)?;
                }
                "k" => {
                    let v = parse_scalar::<u32>(value, line, value_col, "a locality order")?;
                    set_once(&mut globals.k, v, line, key_col, key)?;
                }
                "budget" => {
                    let v = parse_scalar::<u64>(value, line, value_col, "a node budget")?;
                    set_once(&mut globals.budget, v, line, key_col, key)?;
                }
                "c" => {
                    let v = parse_scalar::<f64>(value, line, value_col, "a number")?;
                    set_once(&mut globals.c, v, line, key_col, key)?;
                }
                "epsilon" => {
                    let v = parse_scalar::<f64>(value, line, value_col, "a number")?;
                    set_once(&mut globals.epsilon, v, line, key_col, key)?;
                }
                "delta" => {
                    let v = parse_scalar::<f64>(value, line, value_col, "a number")?;
                    set_once(&mut globals.delta, v, line, key_col, key)?;
                }
                "star-fast-path" => {
                    let v = parse_scalar::<bool>(value, line, value_col, "true or false")?;
                    set_once(&mut globals.star_fast_path, v, line, key_col, key)?;
                }
                other => {
                    return Err(err(line, key_col, format!("unknown key {other:?}")));
                }
            }
        }
    }

    let mode = globals.mode.ok_or_else(|| err(1, 1, "config is missing required key \"mode\""))?;
    let samples = globals.samples.ok_or_else(|| err(1, 1, "config is missing required key \"samples\""))?;
    let seed = globals.seed.ok_or_else(|| err(1, 1, "config is missing required key \"seed\""))?;
    let c = globals.c.unwrap_or(1.0);

    cells.sort_by_key(|c| c.label);
    let mut resolved = Vec::new();
    for cell in &cells {
        let Some((ns, _)) = &cell.n else {
            return Err(err(cell.line, 1, format!("[cell.{}] is missing key \"n\"", cell.label)));
        };
        match (&cell.alpha, &cell.p) {
            (Some(_), Some((_, p_line))) => {
                return Err(err(*p_line, 1, format!("[cell.{}] sets both alpha and p", cell.label)));
            }
            (None, None) => {
                return Err(err(cell.line, 1, format!("[cell.{}] needs either alpha or p", cell.label)));
            }
            (Some((alphas, _)), None) => {
                for &n in ns {
                    for &alpha in alphas {
                        resolved.push(Cell::from_alpha(n as usize, alpha, c));
                    }
                }
            }
            (None, Some((ps, _))) => {
                for &n in ns {
                    for &p in ps {
                        resolved.push(Cell::explicit(n as usize, p));
                    }
                }
            }
        }
    }

    Ok(ExperimentSpec {
        mode,
        cells: resolved,
        samples,
        seed,
        k: globals.k.unwrap_or(1),
        budget: globals.budget.unwrap_or(DEFAULT_NODE_BUDGET),
        epsilon: globals.epsilon.unwrap_or(0.1),
        delta: globals.delta.unwrap_or(0.5),
        star_fast_path: globals.star_fast_path.unwrap_or(true),
    })
}
