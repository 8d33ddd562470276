//! Browser demo. Each operation has a plain Rust function returning JSON
//! text and a thin `wasm_bindgen` wrapper that the page calls.

use fgt_core::harness::{bench, BenchParams, DeltaSpec, Problem, ScalingReport};
use fgt_core::instances::gen_coloured_graph;
use fgt_core::qcost::CostLedger;
use fgt_core::reductions::{floor_sum, scale_count, ZWT_TARGETS};
use fgt_core::triangles::{choose_mode, dmt_solve, DmtConfig, DmtMode};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest size the page may request; keeps a click under a second or so.
pub const MAX_N: usize = 256;

fn parse_sizes(text: &str) -> Result<Vec<usize>, String> {
    let sizes = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|e| format!("bad size '{}': {e}", s.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(&n) = sizes.iter().find(|&&n| n > MAX_N) {
        return Err(format!("size {n} above the demo limit {MAX_N}"));
    }
    Ok(sizes)
}

/// Triangle collection cost at each size with the fitted exponent.
pub fn tc_curve_report(sizes: &str, seed: u64) -> Result<ScalingReport, String> {
    let sizes = parse_sizes(sizes)?;
    let params = BenchParams {
        record_wall: false,
        ..Default::default()
    };
    bench(Problem::Tc, "vtgs", &sizes, 1, seed, &params).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub delta: u64,
    pub small: f64,
    pub large: f64,
    /// Mode the automatic dispatcher would pick.
    pub auto: String,
    pub answer: bool,
}

/// Costs of both Δ-MT searches on one graph as `Δ = n^α` grows.
pub fn dmt_sweep(n: usize, colours: usize, edge_prob: f64, steps: usize, seed: u64) -> Result<Vec<SweepPoint>, String> {
    if !(3..=MAX_N).contains(&n) {
        return Err(format!("n must lie in [3, {MAX_N}]"));
    }
    let g = gen_coloured_graph(n, colours.clamp(1, n), edge_prob, seed).map_err(|e| e.to_string())?;
    let steps = steps.max(1);
    (0..=steps)
        .map(|i| {
            let alpha = 3.0 * i as f64 / steps as f64;
            let delta = DeltaSpec::Power(alpha).at(n);
            let run = |mode| {
                let cfg = DmtConfig { mode, ..DmtConfig::new(delta) };
                let mut ledger = CostLedger::default();
                let out = dmt_solve(&g, &cfg, &mut ledger).map_err(|e| e.to_string())?;
                Ok::<_, String>((ledger.total() - ledger.total_for("preprocess"), out.answer))
            };
            let (small, answer) = run(DmtMode::Small)?;
            let (large, _) = run(DmtMode::Large)?;
            let auto = choose_mode(n, delta, CostLedger::default().model().omega_model);
            Ok(SweepPoint {
                alpha,
                delta,
                small,
                large,
                auto: auto.to_string(),
                answer,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaleRow {
    pub scale: u32,
    pub floor_sum: i64,
    pub hit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZwtTable {
    pub weights: [i64; 3],
    pub bound: i64,
    pub negative: bool,
    pub rows: Vec<ScaleRow>,
}

/// Per-scale floor sums of `4w / 2^ℓ` for one triangle, marking the scales
/// whose sum lands on a zero-weight target.
pub fn zwt_table(weights: [i64; 3], bound: i64) -> Result<ZwtTable, String> {
    if bound < 1 {
        return Err("bound must be positive".into());
    }
    if let Some(w) = weights.iter().find(|w| w.abs() > bound) {
        return Err(format!("weight {w} exceeds the bound {bound}"));
    }
    let rows = (0..scale_count(bound))
        .map(|scale| {
            let s = floor_sum(weights, scale);
            ScaleRow {
                scale,
                floor_sum: s,
                hit: ZWT_TARGETS.contains(&s),
            }
        })
        .collect();
    Ok(ZwtTable {
        weights,
        bound,
        negative: weights.iter().sum::<i64>() < 0,
        rows,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn tc_curve(sizes: &str, seed: u32) -> Result<String, JsValue> {
    to_js(tc_curve_report(sizes, seed as u64))
}

#[wasm_bindgen]
pub fn dmt_alpha_sweep(n: u32, colours: u32, edge_prob: f64, steps: u32, seed: u32) -> Result<String, JsValue> {
    to_js(dmt_sweep(n as usize, colours as usize, edge_prob, steps as usize, seed as u64))
}

#[wasm_bindgen]
pub fn zwt_scales(w1: i32, w2: i32, w3: i32, bound: i32) -> Result<String, JsValue> {
    to_js(zwt_table([w1 as i64, w2 as i64, w3 as i64], bound as i64))
}
