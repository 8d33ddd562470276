//! Negative triangle → zero-weight triangle by scaling and flooring.
//!
//! Weights are multiplied by 4, so a negative triangle has scaled sum
//! `s' <= -4`. For each scale `ℓ` every edge weight becomes
//! `⌊4w / 2^ℓ⌋`; a triangle's floor-sum lies within 2 of `⌊s' / 2^ℓ⌋`.
//! Some `ℓ` brings `⌊s' / 2^ℓ⌋` into `{-3, -4}`, so the floor-sum lands in
//! `[-6, -3]`, and one of the four targets `τ` is hit. Conversely a
//! floor-sum of `τ <= -3` forces `⌊s' / 2^ℓ⌋ <= -1`, hence `s' < 0`.

use super::{ReductionTrace, TriangleAnswer};
use crate::error::{Error, Result};
use crate::instances::{WeightedGraph, INF};
use crate::qcost::ceil_log2;

pub const ZWT_TARGETS: [i64; 4] = [-3, -4, -5, -6];

/// Sum of `⌊4w / 2^ℓ⌋` over the three weights.
pub fn floor_sum(weights: [i64; 3], scale: u32) -> i64 {
    let d = 1i64 << scale;
    weights.iter().map(|&w| (4 * w).div_euclid(d)).sum()
}

/// First `(ℓ, τ)` with `ℓ <= max_scale` whose floor-sum equals `τ`.
pub fn floor_target_hit(weights: [i64; 3], max_scale: u32) -> Option<(u32, i64)> {
    (0..=max_scale).find_map(|l| {
        let s = floor_sum(weights, l);
        ZWT_TARGETS.contains(&s).then_some((l, s))
    })
}

/// Number of scales `ℓ ∈ {0, …, ⌈log₂(12B)⌉ + 1}` for weight bound `B`.
pub fn scale_count(bound: i64) -> u32 {
    ceil_log2((12 * bound.max(1)) as u64) + 2
}

/// Number of ZWT calls made by [`nt_via_zwt`] when every call answers no.
pub fn zwt_call_bound(bound: i64) -> u64 {
    ZWT_TARGETS.len() as u64 * scale_count(bound) as u64
}

/// Decides whether `g` has a negative triangle with one ZWT query per
/// `(ℓ, τ)`, stopping at the first hit. A witness from the ZWT solver is
/// mapped back to vertices of `g`.
pub fn nt_via_zwt<F>(g: &WeightedGraph, zwt: &mut F, trace: &mut ReductionTrace) -> Result<TriangleAnswer>
where
    F: FnMut(&WeightedGraph) -> Result<TriangleAnswer>,
{
    nt_via_zwt_with_targets(g, &ZWT_TARGETS, zwt, trace)
}

/// [`nt_via_zwt`] with a caller-chosen target set. Anything other than
/// [`ZWT_TARGETS`] is incorrect; the variant exists to test the verifier.
pub fn nt_via_zwt_with_targets<F>(
    g: &WeightedGraph,
    targets: &[i64],
    zwt: &mut F,
    trace: &mut ReductionTrace,
) -> Result<TriangleAnswer>
where
    F: FnMut(&WeightedGraph) -> Result<TriangleAnswer>,
{
    if g.directed() {
        return Err(Error::InvalidInstance("negative triangle needs an undirected graph".into()));
    }
    let n = g.n();
    if n < 3 {
        return Ok(TriangleAnswer::decision(false));
    }
    let size = 3 * n;
    for l in 0..scale_count(g.bound()) {
        let d = 1i64 << l;
        for &tau in targets {
            let mut w = vec![INF; size * size];
            for v in 0..size {
                w[v * size + v] = 0;
            }
            for u in 0..n {
                for v in 0..n {
                    if !g.has_edge(u, v) {
                        continue;
                    }
                    let f = (4 * g.weight(u, v)).div_euclid(d);
                    // A–B, B–C and A–C copies; only A–C carries the shift.
                    for (pu, pv, x) in [(0, 1, f), (1, 2, f), (0, 2, f - tau)] {
                        let (a, b) = (pu * n + u, pv * n + v);
                        w[a * size + b] = x;
                        w[b * size + a] = x;
                    }
                }
            }
            let h = WeightedGraph::from_weights(size, false, w)?;
            let ans = zwt(&h)?;
            trace.record(
                "zwt",
                size,
                format!("scale {l}, target {tau}, n={size}"),
                format!("{}", ans.found),
            );
            if ans.found {
                let witness = ans.witness.map(|t| {
                    let mut t = t.map(|v| v % n);
                    t.sort_unstable();
                    t
                });
                return Ok(TriangleAnswer { found: true, witness });
            }
        }
    }
    Ok(TriangleAnswer::decision(false))
}
