//! Δ-matching triangles and triangle collection, executed classically while
//! a [`CostLedger`] accumulates the modelled search costs.
//!
//! Both problems search the ordered colour triples `Γ³` with a variable time
//! search. A triple is encoded as `i·k² + j·k + l` for `k = |Γ|`, so the
//! reported witness is the lexicographically smallest ordered triple.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instances::{BitMatrix, ColourBuckets, ColouredGraph};
use crate::oracles::{trace_count_triangles, ColourTriple, TripleOptions};
use crate::qcost::{grover_search_cost, threshold_search_cost, unit, vtgs_execute, Cost, CostLedger};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DmtMode {
    Small,
    Large,
    #[default]
    Auto,
}

impl fmt::Display for DmtMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DmtMode::Small => "small",
            DmtMode::Large => "large",
            DmtMode::Auto => "auto",
        })
    }
}

impl FromStr for DmtMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(DmtMode::Small),
            "large" => Ok(DmtMode::Large),
            "auto" => Ok(DmtMode::Auto),
            _ => Err(Error::UnsupportedCombination(format!("unknown mode '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DmtConfig {
    pub delta: u64,
    pub mode: DmtMode,
    /// Charge Step 2 of the large-α search `n^ω` instead of the size of the
    /// restricted matrix.
    pub charge_global_n: bool,
    pub opts: TripleOptions,
}

impl DmtConfig {
    pub fn new(delta: u64) -> Self {
        Self {
            delta,
            ..Default::default()
        }
    }

    /// `α = log_n max(Δ, 1)`; zero when `n <= 1`.
    pub fn alpha(&self, n: usize) -> f64 {
        alpha_of(n, self.delta)
    }
}

pub fn alpha_of(n: usize, delta: u64) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    (delta.max(1) as f64).ln() / (n as f64).ln()
}

/// Small iff `α < ω`.
pub fn choose_mode(n: usize, delta: u64, omega: f64) -> DmtMode {
    if alpha_of(n, delta) < omega {
        DmtMode::Small
    } else {
        DmtMode::Large
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DmtOutcome {
    pub answer: bool,
    /// Resolved mode; `Auto` only for the `Δ = 0` short cut.
    pub mode: DmtMode,
    pub witness: Option<ColourTriple>,
    /// The variable time search charge, before boosting.
    pub search_cost: Cost,
    /// Ordered triples resolved by the size filter of the large-α search.
    pub step1_triples: u64,
    /// Ordered triples that reached the matrix step of the large-α search.
    pub step2_triples: u64,
    /// Adjacency lookups made by the scanning predicates.
    pub queries: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TcOutcome {
    pub answer: bool,
    /// Smallest admissible triple without a triangle, if any.
    pub missing: Option<ColourTriple>,
    pub search_cost: Cost,
    pub queries: u64,
}

/// Groups vertices by colour, charging `n`.
pub fn preprocess_buckets(g: &ColouredGraph, ledger: &mut CostLedger) -> ColourBuckets {
    let n = g.n() as u64;
    ledger.charge("preprocess", Cost::from_integer(n), n);
    ColourBuckets::build(g)
}

fn decode(idx: usize, k: usize) -> [usize; 3] {
    [idx / (k * k), (idx / k) % k, idx % k]
}

fn product(b: &ColourBuckets, t: [usize; 3]) -> u64 {
    t.iter().map(|&c| b.len(c) as u64).product()
}

/// Counts triangles with colour multiset `t` by scanning `V_i × V_j × V_k`
/// (sorted `i <= j <= k`, repeated classes enumerated once per unordered
/// choice), stopping once `limit` is reached. Returns `(count, lookups)`.
fn scan_triple(g: &ColouredGraph, b: &ColourBuckets, t: ColourTriple, limit: u64) -> (u64, u64) {
    let [i, j, k] = t.colours().map(|c| c as usize);
    let (vi, vj, vk) = (b.bucket(i), b.bucket(j), b.bucket(k));
    let mut count = 0;
    let mut queries = 0;
    for (ai, &a) in vi.iter().enumerate() {
        let b0 = if i == j { ai + 1 } else { 0 };
        for (bi, &bv) in vj.iter().enumerate().skip(b0) {
            queries += 1;
            if !g.has_edge(a, bv) {
                continue;
            }
            let c0 = if j == k { bi + 1 } else { 0 };
            for &c in &vk[c0.min(vk.len())..] {
                queries += 1;
                if !g.has_edge(bv, c) {
                    continue;
                }
                queries += 1;
                if g.has_edge(a, c) {
                    count += 1;
                    if count >= limit {
                        return (count, queries);
                    }
                }
            }
        }
    }
    (count, queries)
}

/// Triangle count for multiset `t` via `trace(A³)/6` on colour-filtered
/// adjacency matrices.
fn trace_triple(g: &ColouredGraph, b: &ColourBuckets, t: ColourTriple) -> Result<u64> {
    let [i, j, k] = t.colours().map(|c| c as usize);
    let restricted = |classes: &[usize], keep: &dyn Fn(u32, u32) -> bool| -> Result<u64> {
        let verts: Vec<usize> = classes.iter().flat_map(|&c| b.bucket(c).iter().copied()).collect();
        let mut m = BitMatrix::new(verts.len());
        for (x, &u) in verts.iter().enumerate() {
            for (y, &v) in verts.iter().enumerate() {
                if g.has_edge(u, v) && keep(g.colour(u), g.colour(v)) {
                    m.set(x, y, true);
                }
            }
        }
        trace_count_triangles(&m)
    };
    if i == k {
        return restricted(&[i], &|_, _| true);
    }
    if i != j && j != k {
        return restricted(&[i, j, k], &|x, y| x != y);
    }
    // Two classes, one repeated: keep the repeated class's internal edges and
    // the cross edges, then drop triangles lying inside the repeated class.
    let (rep, single) = if i == j { (i, k) } else { (k, i) };
    let with_cross = restricted(&[rep, single], &|x, y| !(x == y && x as usize == single))?;
    let inner = restricted(&[rep], &|_, _| true)?;
    Ok(with_cross - inner)
}

/// Δ-MT by threshold search inside each colour triple. Each ordered triple
/// is charged `√(Δ·|V_i||V_j||V_k|)`.
pub fn dmt_small_alpha(
    g: &ColouredGraph,
    cfg: &DmtConfig,
    buckets: &ColourBuckets,
    ledger: &mut CostLedger,
) -> Result<DmtOutcome> {
    let delta = cfg.delta;
    if delta == 0 {
        return Err(Error::InvalidDelta { delta, n: g.n() });
    }
    let k = buckets.num_buckets();
    let mut memo: HashMap<ColourTriple, bool> = HashMap::new();
    let mut queries = 0;
    let outcome = vtgs_execute(k * k * k, |idx| {
        let t = decode(idx, k);
        let cost = threshold_search_cost(product(buckets, t), delta)?;
        let key = ColourTriple::new(t[0] as u32, t[1] as u32, t[2] as u32);
        let hit = cfg.opts.admits(&key)
            && *memo.entry(key).or_insert_with(|| {
                let (count, q) = scan_triple(g, buckets, key, delta);
                queries += q;
                count >= delta
            });
        Ok((hit, cost))
    })?;
    ledger.charge("dmt-small", outcome.cost.clone(), g.n() as u64);
    Ok(DmtOutcome {
        answer: outcome.witness.is_some(),
        mode: DmtMode::Small,
        witness: outcome.witness.map(|i| {
            let [a, b, c] = decode(i, k);
            ColourTriple::new(a as u32, b as u32, c as u32)
        }),
        search_cost: outcome.cost,
        step1_triples: 0,
        step2_triples: 0,
        queries,
    })
}

/// Δ-MT by a size filter plus trace counting. Step 1 rejects a triple with
/// `|V_i||V_j||V_k| < Δ` at cost 1; Step 2 counts its triangles from the
/// colour-filtered adjacency at cost `(|V_i|+|V_j|+|V_k|)^ω`, or `n^ω` under
/// `charge_global_n`.
pub fn dmt_large_alpha(
    g: &ColouredGraph,
    cfg: &DmtConfig,
    buckets: &ColourBuckets,
    ledger: &mut CostLedger,
) -> Result<DmtOutcome> {
    let delta = cfg.delta;
    if delta == 0 {
        return Err(Error::InvalidDelta { delta, n: g.n() });
    }
    let omega = ledger.model().omega_model;
    let k = buckets.num_buckets();
    let mut memo: HashMap<ColourTriple, bool> = HashMap::new();
    let (mut step1, mut step2) = (0u64, 0u64);
    let outcome = vtgs_execute(k * k * k, |idx| {
        let t = decode(idx, k);
        if product(buckets, t) < delta {
            step1 += 1;
            return Ok((false, Cost::from_integer(1)));
        }
        step2 += 1;
        let rows = if cfg.charge_global_n {
            g.n()
        } else {
            t.iter().map(|&c| buckets.len(c)).sum()
        };
        let cost = Cost::from_f64((rows as f64).powf(omega));
        let key = ColourTriple::new(t[0] as u32, t[1] as u32, t[2] as u32);
        if !cfg.opts.admits(&key) {
            return Ok((false, cost));
        }
        let hit = match memo.get(&key) {
            Some(&h) => h,
            None => {
                let h = trace_triple(g, buckets, key)? >= delta;
                memo.insert(key, h);
                h
            }
        };
        Ok((hit, cost))
    })?;
    ledger.charge("dmt-large", outcome.cost.clone(), g.n() as u64);
    Ok(DmtOutcome {
        answer: outcome.witness.is_some(),
        mode: DmtMode::Large,
        witness: outcome.witness.map(|i| {
            let [a, b, c] = decode(i, k);
            ColourTriple::new(a as u32, b as u32, c as u32)
        }),
        search_cost: outcome.cost,
        step1_triples: step1,
        step2_triples: step2,
        queries: 0,
    })
}

/// Δ-MT with the cheaper of the two searches: small iff `α < ω`, unless the
/// configuration forces a mode. `Δ = 0` is answered directly: true iff an
/// admissible triple exists.
pub fn dmt_solve(g: &ColouredGraph, cfg: &DmtConfig, ledger: &mut CostLedger) -> Result<DmtOutcome> {
    let n = g.n();
    let cube = (n as u64).pow(3);
    if cfg.delta > cube {
        return Err(Error::InvalidDelta { delta: cfg.delta, n });
    }
    if cfg.delta == 0 {
        let cost = ledger.charge("dmt-trivial", Cost::from_integer(1), n as u64);
        return Ok(DmtOutcome {
            answer: cfg.opts.admissible_count(g.num_colours()) > 0,
            mode: DmtMode::Auto,
            witness: None,
            search_cost: cost,
            step1_triples: 0,
            step2_triples: 0,
            queries: 0,
        });
    }
    let buckets = preprocess_buckets(g, ledger);
    let mode = match cfg.mode {
        DmtMode::Auto => choose_mode(n, cfg.delta, ledger.model().omega_model),
        m => m,
    };
    match mode {
        DmtMode::Small => dmt_small_alpha(g, cfg, &buckets, ledger),
        _ => dmt_large_alpha(g, cfg, &buckets, ledger),
    }
}

/// Triangle collection: searches for an admissible triple with no matching
/// triangle. Each ordered triple is charged `√(|V_i||V_j||V_k|)`, so the
/// search charge is exactly `n^{1.5}` for every colouring.
pub fn tc_solve(g: &ColouredGraph, opts: TripleOptions, ledger: &mut CostLedger) -> Result<TcOutcome> {
    let buckets = preprocess_buckets(g, ledger);
    let k = buckets.num_buckets();
    let mut memo: HashMap<ColourTriple, bool> = HashMap::new();
    let mut queries = 0;
    let one = unit();
    let outcome = vtgs_execute(k * k * k, |idx| {
        let t = decode(idx, k);
        let size = product(&buckets, t);
        let cost = if size == 0 {
            Cost::zero()
        } else {
            grover_search_cost(size, &one)?
        };
        let key = ColourTriple::new(t[0] as u32, t[1] as u32, t[2] as u32);
        let hit = opts.admits(&key)
            && *memo.entry(key).or_insert_with(|| {
                let (count, q) = scan_triple(g, &buckets, key, 1);
                queries += q;
                count == 0
            });
        Ok((hit, cost))
    })?;
    ledger.charge("tc", outcome.cost.clone(), g.n() as u64);
    Ok(TcOutcome {
        answer: outcome.witness.is_none(),
        missing: outcome.witness.map(|i| {
            let [a, b, c] = decode(i, k);
            ColourTriple::new(a as u32, b as u32, c as u32)
        }),
        search_cost: outcome.cost,
        queries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_coloured_graph;
    use crate::oracles::{count_triangles_per_triple, dmt_exact, tc_exact};
    use crate::qcost::CostModel;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn rat(x: u64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn rainbow_k3() -> ColouredGraph {
        ColouredGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], vec![0, 1, 2], 3).unwrap()
    }

    /// Two classes of size 2 and one of size 2, all cross edges present.
    fn complete_tripartite() -> ColouredGraph {
        let gamma = vec![0, 0, 1, 1, 2, 2];
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                if gamma[u] != gamma[v] {
                    edges.push((u, v));
                }
            }
        }
        ColouredGraph::from_edges(6, &edges, gamma, 3).unwrap()
    }

    #[test]
    fn buckets_follow_colours() {
        let mut ledger = CostLedger::default();
        let g = ColouredGraph::from_edges(5, &[], vec![0; 5], 1).unwrap();
        let b = preprocess_buckets(&g, &mut ledger);
        assert_eq!(b.bucket(0), &[0, 1, 2, 3, 4]);
        assert_eq!(ledger.total(), 5.0);

        let g = ColouredGraph::from_edges(4, &[], vec![0, 1, 2, 3], 4).unwrap();
        let b = preprocess_buckets(&g, &mut ledger);
        assert!((0..4).all(|c| b.bucket(c) == [c]));

        let g = gen_coloured_graph(50, 7, 0.1, 3).unwrap();
        let b = preprocess_buckets(&g, &mut ledger);
        let sizes = g.class_sizes();
        assert!((0..7).all(|c| b.len(c) == sizes[c]));
        assert!((0..7).all(|c| b.bucket(c).iter().all(|&v| g.colour(v) as usize == c)));
    }

    #[test]
    fn two_rainbow_triangles_small() {
        let g = ColouredGraph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
            vec![0, 1, 2, 0, 1, 2],
            3,
        )
        .unwrap();
        let mut ledger = CostLedger::default();
        let cfg = DmtConfig {
            mode: DmtMode::Small,
            ..DmtConfig::new(2)
        };
        let out = dmt_solve(&g, &cfg, &mut ledger).unwrap();
        assert!(out.answer);
        assert_eq!(out.answer, dmt_exact(&g, 2, cfg.opts));
        assert_eq!(out.witness, Some(ColourTriple::new(0, 1, 2)));
    }

    #[test]
    fn edgeless_small_cost_is_root_delta_n_cubed() {
        let g = gen_coloured_graph(12, 4, 0.0, 1).unwrap();
        let b = ColourBuckets::build(&g);
        let mut ledger = CostLedger::default();
        let out = dmt_small_alpha(&g, &DmtConfig::new(1), &b, &mut ledger).unwrap();
        assert!(!out.answer);
        assert_eq!(out.search_cost.exact_square(), Some(&rat(12 * 12 * 12)));
    }

    #[test]
    fn large_filter_rejects_everything_above_capacity() {
        let g = gen_coloured_graph(6, 3, 0.7, 2).unwrap();
        let b = ColourBuckets::build(&g);
        let mut ledger = CostLedger::default();
        let out = dmt_large_alpha(&g, &DmtConfig::new(217), &b, &mut ledger).unwrap();
        assert!(!out.answer);
        assert_eq!(out.step1_triples, 27);
        assert_eq!(out.step2_triples, 0);
        assert_eq!(out.search_cost.value(), 27f64.sqrt());
    }

    #[test]
    fn full_triple_found_by_trace() {
        let g = complete_tripartite();
        let b = ColourBuckets::build(&g);
        let mut ledger = CostLedger::default();
        let out = dmt_large_alpha(&g, &DmtConfig::new(8), &b, &mut ledger).unwrap();
        assert!(out.answer);
        assert!(dmt_exact(&g, 8, TripleOptions::default()));
        assert!(!dmt_large_alpha(&g, &DmtConfig::new(9), &b, &mut ledger).unwrap().answer);
    }

    #[test]
    fn trace_counts_match_brute_force_with_repeats() {
        let opts = TripleOptions {
            distinct_triples: false,
        };
        for seed in 0..40 {
            let g = gen_coloured_graph(14, 3, 0.5, seed).unwrap();
            let b = ColourBuckets::build(&g);
            let want = count_triangles_per_triple(&g, opts);
            for i in 0..3 {
                for j in i..3 {
                    for k in j..3 {
                        let t = ColourTriple::new(i, j, k);
                        let expected = want.get(&t).copied().unwrap_or(0);
                        assert_eq!(trace_triple(&g, &b, t).unwrap(), expected, "{t}");
                        assert_eq!(scan_triple(&g, &b, t, u64::MAX).0, expected, "{t}");
                    }
                }
            }
        }
    }

    #[test]
    fn crossover_follows_omega() {
        assert_eq!(choose_mode(100, 1, 2.3728), DmtMode::Small);
        assert_eq!(choose_mode(100, 100u64.pow(3), 2.3728), DmtMode::Large);
        let g = gen_coloured_graph(8, 2, 0.5, 1).unwrap();
        let mut ledger = CostLedger::default();
        assert_eq!(dmt_solve(&g, &DmtConfig::new(1), &mut ledger).unwrap().mode, DmtMode::Small);
        assert_eq!(dmt_solve(&g, &DmtConfig::new(512), &mut ledger).unwrap().mode, DmtMode::Large);
        assert!(matches!(
            dmt_solve(&g, &DmtConfig::new(513), &mut ledger),
            Err(Error::InvalidDelta { .. })
        ));
    }

    #[test]
    fn rainbow_collection() {
        let g = rainbow_k3();
        let mut ledger = CostLedger::default();
        assert!(tc_solve(&g, TripleOptions::default(), &mut ledger).unwrap().answer);
        let h = g.with_edge(0, 2, false);
        let out = tc_solve(&h, TripleOptions::default(), &mut ledger).unwrap();
        assert!(!out.answer);
        assert_eq!(out.missing, Some(ColourTriple::new(0, 1, 2)));
    }

    #[test]
    fn tc_charge_is_n_to_the_three_halves() {
        for seed in 0..30u64 {
            let n = 3 + (seed % 38) as usize;
            let k = 1 + (seed as usize * 7) % n.min(9);
            let g = gen_coloured_graph(n, k, 0.6, seed).unwrap();
            let mut ledger = CostLedger::new(CostModel::default());
            let out = tc_solve(&g, TripleOptions::default(), &mut ledger).unwrap();
            assert_eq!(out.answer, tc_exact(&g, TripleOptions::default()));
            assert_eq!(out.search_cost.exact_square(), Some(&rat((n as u64).pow(3))));
        }
    }

    #[test]
    fn random_instances_match_exact() {
        for seed in 0..120u64 {
            let n = 3 + (seed % 28) as usize;
            let k = 1 + (seed as usize) % n.min(6);
            let g = gen_coloured_graph(n, k, 0.4, seed).unwrap();
            for distinct in [true, false] {
                let opts = TripleOptions {
                    distinct_triples: distinct,
                };
                for delta in [0, 1, 2, 3, 5, 8, 27, (n as u64).pow(3)] {
                    let want = dmt_exact(&g, delta, opts);
                    for mode in [DmtMode::Small, DmtMode::Large, DmtMode::Auto] {
                        let cfg = DmtConfig {
                            delta,
                            mode,
                            charge_global_n: false,
                            opts,
                        };
                        let mut ledger = CostLedger::default();
                        let out = dmt_solve(&g, &cfg, &mut ledger).unwrap();
                        assert_eq!(out.answer, want, "seed {seed} delta {delta} {mode}");
                        if delta > 0 {
                            assert!(out.step2_triples * delta <= (n as u64).pow(3));
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn dmt_monotone_in_delta(seed in 0u64..1000, n in 3usize..16, p in 0.1f64..0.9) {
            let g = gen_coloured_graph(n, 3.min(n), p, seed).unwrap();
            let mut prev = true;
            for delta in 0..=12u64 {
                let mut ledger = CostLedger::default();
                let now = dmt_solve(&g, &DmtConfig::new(delta), &mut ledger).unwrap().answer;
                prop_assert!(prev || !now);
                prev = now;
            }
        }

        #[test]
        fn small_cost_within_slack(seed in 0u64..1000, n in 3usize..20, delta in 1u64..9) {
            let g = gen_coloured_graph(n, 2.min(n), 0.5, seed).unwrap();
            let b = ColourBuckets::build(&g);
            let mut ledger = CostLedger::default();
            let out = dmt_small_alpha(&g, &DmtConfig::new(delta), &b, &mut ledger).unwrap();
            let lo = ((delta * (n as u64).pow(3)) as f64).sqrt();
            prop_assert!(out.search_cost.value() >= lo - 1e-9);
            prop_assert!(out.search_cost.value() <= lo + 8.0);
        }
    }
}
