use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{fit_loglog, par_map, trial_seed};
use crate::error::{Error, Result};
use crate::instances::{gen_coloured_graph, ColouredGraph};
use crate::oracles::TripleOptions;
use crate::qcost::{CostLedger, CostModel};
use crate::triangles::{choose_mode, dmt_solve, tc_solve, DmtConfig, DmtMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    Apsp,
    Minplus,
    Apnt,
    Nt,
    Zwt,
    Dmt,
    Tc,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Apsp => "apsp",
            Problem::Minplus => "minplus",
            Problem::Apnt => "apnt",
            Problem::Nt => "nt",
            Problem::Zwt => "zwt",
            Problem::Dmt => "dmt",
            Problem::Tc => "tc",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Problem::Apsp,
            Problem::Minplus,
            Problem::Apnt,
            Problem::Nt,
            Problem::Zwt,
            Problem::Dmt,
            Problem::Tc,
        ]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| Error::UnsupportedCombination(format!("unknown problem '{s}'")))
    }
}

/// How `Δ` is chosen per instance size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeltaSpec {
    Fixed(u64),
    /// `Δ = round(n^α)`, clamped to `[1, n³]`.
    Power(f64),
}

impl DeltaSpec {
    pub fn at(self, n: usize) -> u64 {
        let cube = (n as u64).pow(3);
        match self {
            DeltaSpec::Fixed(d) => d,
            DeltaSpec::Power(a) => ((n as f64).powf(a).round() as u64).clamp(1, cube),
        }
    }
}

/// Colouring used for generated Δ-MT and triangle collection instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Colouring {
    /// `⌈n^{1/3}⌉` near-equal classes.
    Balanced,
    /// [`heavy_colour_count`] near-equal classes, each large enough that
    /// every triple passes the large-α size filter.
    Heavy,
    /// Heavy when the run resolves to the large-α search, else balanced.
    Auto,
}

/// `max(1, ⌊n / ⌈Δ^{1/3}⌉⌋)`.
pub fn heavy_colour_count(n: usize, delta: u64) -> usize {
    let mut m = 1u64;
    while m.pow(3) < delta {
        m += 1;
    }
    (n / m as usize).max(1)
}

fn balanced_colour_count(n: usize) -> usize {
    let mut k = 1;
    while k * k * k < n {
        k += 1;
    }
    k.min(n)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchParams {
    pub delta: DeltaSpec,
    pub edge_prob: f64,
    pub colouring: Colouring,
    pub model: CostModel,
    pub charge_global_n: bool,
    pub opts: TripleOptions,
    pub record_wall: bool,
    /// Worker threads; rows are identical for any value.
    pub threads: usize,
}

impl Default for BenchParams {
    fn default() -> Self {
        Self {
            delta: DeltaSpec::Fixed(1),
            edge_prob: 0.5,
            colouring: Colouring::Auto,
            model: CostModel::default(),
            charge_global_n: false,
            opts: TripleOptions::default(),
            record_wall: true,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub delta: Option<u64>,
    /// Ledger total without the `O(n)` bucket preprocessing.
    pub cost: f64,
    pub wall_seconds: f64,
    pub answer: bool,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub problem: String,
    pub algorithm: String,
    pub rows: Vec<BenchRow>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub residual_max: Option<f64>,
}

impl ScalingReport {
    pub fn new(problem: &str, algorithm: &str, rows: Vec<BenchRow>) -> Self {
        let mut r = Self {
            problem: problem.to_string(),
            algorithm: algorithm.to_string(),
            rows,
            slope: None,
            intercept: None,
            residual_max: None,
        };
        r.refit();
        r
    }

    /// Recomputes the fit of `ln cost` against `ln n` over all rows.
    pub fn refit(&mut self) {
        let pts: Vec<(f64, f64)> = self.rows.iter().map(|r| (r.n as f64, r.cost)).collect();
        let fit = fit_loglog(&pts);
        self.slope = fit.map(|f| f.0);
        self.intercept = fit.map(|f| f.1);
        self.residual_max = fit.map(|f| f.2);
    }
}

fn check_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.len() < 4 {
        return Err(Error::InvalidSizes(format!("{} sizes given, at least 4 needed for a fit", sizes.len())));
    }
    if sizes[0] < 16 {
        return Err(Error::InvalidSizes(format!("size {} below 16", sizes[0])));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSizes("sizes must be strictly increasing".into()));
    }
    Ok(())
}

/// Resolved algorithm for a problem; `None` for unsupported pairs.
fn resolve(problem: Problem, algorithm: &str) -> Option<DmtMode> {
    match (problem, algorithm) {
        (Problem::Tc, "vtgs" | "tc_solve" | "auto") => Some(DmtMode::Auto),
        (Problem::Dmt, "small") => Some(DmtMode::Small),
        (Problem::Dmt, "large") => Some(DmtMode::Large),
        (Problem::Dmt, "auto" | "dmt_solve") => Some(DmtMode::Auto),
        _ => None,
    }
}

fn instance(n: usize, problem: Problem, mode: DmtMode, delta: u64, p: &BenchParams, seed: u64) -> Result<ColouredGraph> {
    let heavy = match p.colouring {
        Colouring::Balanced => false,
        Colouring::Heavy => true,
        Colouring::Auto => {
            problem == Problem::Dmt
                && match mode {
                    DmtMode::Large => true,
                    DmtMode::Small => false,
                    DmtMode::Auto => choose_mode(n, delta, p.model.omega_model) == DmtMode::Large,
                }
        }
    };
    let k = if heavy {
        heavy_colour_count(n, delta)
    } else {
        balanced_colour_count(n)
    };
    gen_coloured_graph(n, k, p.edge_prob, seed)
}

fn run_one(
    problem: Problem,
    mode: DmtMode,
    n: usize,
    trial: usize,
    master: u64,
    p: &BenchParams,
) -> Result<BenchRow> {
    let seed = trial_seed(master, n as u64, trial as u64);
    let delta = (problem == Problem::Dmt).then(|| p.delta.at(n));
    let g = instance(n, problem, mode, delta.unwrap_or(1), p, seed)?;
    let mut ledger = CostLedger::new(p.model);
    // Instant is unavailable on wasm32, so only read the clock when asked.
    let start = p.record_wall.then(Instant::now);
    let answer = match problem {
        Problem::Tc => tc_solve(&g, p.opts, &mut ledger)?.answer,
        _ => {
            let cfg = DmtConfig {
                delta: delta.unwrap_or(1),
                mode,
                charge_global_n: p.charge_global_n,
                opts: p.opts,
            };
            dmt_solve(&g, &cfg, &mut ledger)?.answer
        }
    };
    Ok(BenchRow {
        n,
        delta,
        cost: ledger.total() - ledger.total_for("preprocess"),
        wall_seconds: start.map_or(0.0, |s| s.elapsed().as_secs_f64()),
        answer,
        seed,
    })
}

/// Runs `trials` instances at each size and fits the cost exponent.
pub fn bench(
    problem: Problem,
    algorithm: &str,
    sizes: &[usize],
    trials: usize,
    seed: u64,
    params: &BenchParams,
) -> Result<ScalingReport> {
    let mode = resolve(problem, algorithm).ok_or_else(|| {
        Error::UnsupportedCombination(format!("algorithm '{algorithm}' does not solve '{problem}'"))
    })?;
    check_sizes(sizes)?;
    if trials == 0 {
        return Err(Error::InvalidSizes("trials must be positive".into()));
    }
    let jobs: Vec<(usize, usize)> = sizes
        .iter()
        .flat_map(|&n| (0..trials).map(move |t| (n, t)))
        .collect();
    let rows = par_map(jobs.len(), params.threads, |i| run_one(problem, mode, jobs[i].0, jobs[i].1, seed, params))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalingReport::new(problem.name(), algorithm, rows))
}
