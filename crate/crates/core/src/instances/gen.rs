//! Seeded instance generators. Every generator is a pure function of its
//! arguments: equal arguments give equal instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    exponent_covering, weight_bound, BitMatrix, ColouredGraph, MinPlusMatrix, TripartiteGraph,
    WeightedGraph, INF,
};
use crate::error::{Error, Result};
use crate::oracles::ColourTriple;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_prob(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidInstance(format!("probability {p} not in [0, 1]")))
    }
}

/// Directed graph: each ordered pair `i != j` independently carries a weight
/// uniform in `[-⌈n^c⌉, ⌈n^c⌉]` with probability `density`.
pub fn gen_weighted_graph(n: usize, c: f64, density: f64, seed: u64) -> Result<WeightedGraph> {
    let bound = weight_bound(n, c);
    let g = gen_weights(n, bound, density, true, seed)?;
    WeightedGraph::new(n, c, true, g)
}

/// Undirected counterpart of [`gen_weighted_graph`], one draw per unordered
/// pair.
pub fn gen_undirected_weighted(n: usize, c: f64, density: f64, seed: u64) -> Result<WeightedGraph> {
    let bound = weight_bound(n, c);
    let g = gen_weights(n, bound, density, false, seed)?;
    WeightedGraph::new(n, c, false, g)
}

/// Weights uniform in `[-bound, bound]`; the exponent is fitted to `bound`.
pub fn gen_weighted_with_bound(
    n: usize,
    bound: i64,
    density: f64,
    directed: bool,
    seed: u64,
) -> Result<WeightedGraph> {
    let w = gen_weights(n, bound, density, directed, seed)?;
    let c = exponent_covering(n, bound);
    WeightedGraph::new(n, c, directed, w)
}

fn gen_weights(n: usize, bound: i64, density: f64, directed: bool, seed: u64) -> Result<Vec<i64>> {
    check_prob(density)?;
    let mut r = rng(seed);
    let mut w = vec![INF; n * n];
    for i in 0..n {
        w[i * n + i] = 0;
        let start = if directed { 0 } else { i + 1 };
        for j in start..n {
            if i == j {
                continue;
            }
            if r.gen_bool(density) {
                let x = r.gen_range(-bound..=bound);
                w[i * n + j] = x;
                if !directed {
                    w[j * n + i] = x;
                }
            }
        }
    }
    Ok(w)
}

/// Directed graph with negative edges but no negative cycle.
///
/// Weights are `base(i, j) + p(i) - p(j)` with `base >= 0`, so every cycle
/// has nonnegative weight. Pairs whose shifted weight leaves the range are
/// dropped.
pub fn gen_apsp_instance(n: usize, c: f64, density: f64, seed: u64) -> Result<WeightedGraph> {
    check_prob(density)?;
    let bound = weight_bound(n, c);
    let mut r = rng(seed);
    let half = (bound / 2).max(1);
    let p: Vec<i64> = (0..n).map(|_| r.gen_range(-half..=half)).collect();
    let mut w = vec![INF; n * n];
    for i in 0..n {
        w[i * n + i] = 0;
        for j in 0..n {
            if i == j || !r.gen_bool(density) {
                continue;
            }
            let x = r.gen_range(0..=bound) + p[i] - p[j];
            if x.abs() <= bound {
                w[i * n + j] = x;
            }
        }
    }
    WeightedGraph::new(n, c, true, w)
}

/// Entries uniform in `[-⌈n^c⌉, ⌈n^c⌉]`, each replaced by `INF` with
/// probability `inf_prob`.
pub fn gen_minplus_matrix(n: usize, c: f64, inf_prob: f64, seed: u64) -> Result<MinPlusMatrix> {
    check_prob(inf_prob)?;
    let bound = weight_bound(n, c);
    let mut r = rng(seed);
    let m = (0..n * n)
        .map(|_| {
            if r.gen_bool(inf_prob) {
                INF
            } else {
                r.gen_range(-bound..=bound)
            }
        })
        .collect();
    MinPlusMatrix::new(n, c, m)
}

/// Tripartite graph with parts of the given sizes; each inter-part pair is an
/// edge with probability `density`, weight uniform in `[-bound, bound]`.
pub fn gen_tripartite(
    sizes: [usize; 3],
    bound: i64,
    density: f64,
    seed: u64,
) -> Result<TripartiteGraph> {
    check_prob(density)?;
    let n: usize = sizes.iter().sum();
    let part = |v: usize| {
        if v < sizes[0] {
            0
        } else if v < sizes[0] + sizes[1] {
            1
        } else {
            2
        }
    };
    let mut r = rng(seed);
    let mut w = vec![INF; n * n];
    for i in 0..n {
        w[i * n + i] = 0;
        for j in i + 1..n {
            if part(i) != part(j) && r.gen_bool(density) {
                let x = r.gen_range(-bound..=bound);
                w[i * n + j] = x;
                w[j * n + i] = x;
            }
        }
    }
    let c = exponent_covering(n, bound);
    TripartiteGraph::new(WeightedGraph::new(n, c, false, w)?, sizes)
}

fn shuffled_colours(n: usize, num_colours: usize, r: &mut ChaCha8Rng) -> Result<Vec<u32>> {
    if num_colours == 0 || num_colours > n {
        return Err(Error::InvalidColourCount { n, num_colours });
    }
    let mut gamma: Vec<u32> = (0..n).map(|v| (v % num_colours) as u32).collect();
    gamma.shuffle(r);
    Ok(gamma)
}

/// Round-robin colouring shuffled by the seed, plus G(n, p) edges.
pub fn gen_coloured_graph(
    n: usize,
    num_colours: usize,
    edge_prob: f64,
    seed: u64,
) -> Result<ColouredGraph> {
    check_prob(edge_prob)?;
    let mut r = rng(seed);
    let gamma = shuffled_colours(n, num_colours, &mut r)?;
    let mut adj = BitMatrix::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(edge_prob) {
                adj.set(i, j, true);
                adj.set(j, i, true);
            }
        }
    }
    ColouredGraph::new(adj, gamma, num_colours)
}

/// A coloured graph known to hold at least `delta` triangles of a chosen
/// colour multiset.
#[derive(Clone, Debug)]
pub struct PlantedDmt {
    pub graph: ColouredGraph,
    pub triple: ColourTriple,
    /// Number of vertex-disjoint triangles planted with colours `triple`.
    pub planted: u64,
}

impl PlantedDmt {
    /// The planted structure guarantees a yes-answer for every `Δ <= planted`.
    pub fn guaranteed_yes(&self, delta: u64) -> bool {
        delta <= self.planted
    }
}

/// Plants `delta` vertex-disjoint triangles coloured `triple` into a sparse
/// background graph (edge probability `1/n`).
pub fn gen_planted_dmt(
    n: usize,
    num_colours: usize,
    delta: u64,
    triple: (u32, u32, u32),
    seed: u64,
) -> Result<PlantedDmt> {
    let mut r = rng(seed);
    let gamma = shuffled_colours(n, num_colours, &mut r)?;
    let key = ColourTriple::new(triple.0, triple.1, triple.2);
    if key.max_colour() as usize >= num_colours {
        return Err(Error::PlantInfeasible(format!(
            "triple {key} uses a colour outside [0, {num_colours})"
        )));
    }

    let mut pools: Vec<Vec<usize>> = vec![Vec::new(); num_colours];
    for (v, &g) in gamma.iter().enumerate() {
        pools[g as usize].push(v);
    }
    for colour in key.distinct_colours() {
        let need = delta as usize * key.multiplicity(colour);
        let have = pools[colour as usize].len();
        if have < need {
            return Err(Error::PlantInfeasible(format!(
                "colour {colour} has {have} vertices, {need} needed for {delta} disjoint triangles"
            )));
        }
    }

    let mut adj = BitMatrix::new(n);
    let p_bg = if n > 0 { 1.0 / n as f64 } else { 0.0 };
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(p_bg) {
                adj.set(i, j, true);
                adj.set(j, i, true);
            }
        }
    }
    for pool in &mut pools {
        pool.shuffle(&mut r);
    }
    let [x, y, z] = key.colours();
    for _ in 0..delta {
        let a = pools[x as usize].pop().unwrap();
        let b = pools[y as usize].pop().unwrap();
        let c = pools[z as usize].pop().unwrap();
        for (u, v) in [(a, b), (b, c), (a, c)] {
            adj.set(u, v, true);
            adj.set(v, u, true);
        }
    }
    Ok(PlantedDmt {
        graph: ColouredGraph::new(adj, gamma, num_colours)?,
        triple: key,
        planted: delta,
    })
}
