//! Exact reference solvers. Every one of these is the straightforward
//! cubic (or brute-force) method; they are the ground truth the reductions
//! and the cost-modelled algorithms are checked against.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::instances::{
    sat_add, BitMatrix, ColouredGraph, MinPlusMatrix, Part, TripartiteGraph, WeightedGraph, INF,
};

/// All-pairs distances; `INF` marks unreachable pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApspResult {
    n: usize,
    d: Vec<i64>,
}

impl ApspResult {
    pub fn new(n: usize, d: Vec<i64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: n * n,
                right: d.len(),
            });
        }
        Ok(Self { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.d[i * self.n + j]
    }

    pub fn distances(&self) -> &[i64] {
        &self.d
    }
}

/// `n_A × n_B` flags: entry `(a, b)` is set when some `c` closes a negative
/// triangle with `a` and `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFlags {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl PairFlags {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            bits: vec![false; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.cols + b]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize) {
        self.bits[a * self.cols + b] = true;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Floyd–Warshall with `INF`-saturating sums.
pub fn apsp_exact(g: &WeightedGraph) -> Result<ApspResult> {
    let n = g.n();
    let mut d = g.weights().to_vec();
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik >= INF {
                continue;
            }
            for j in 0..n {
                let via = sat_add(dik, d[k * n + j]);
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    if (0..n).any(|i| d[i * n + i] < 0) {
        return Err(Error::NegativeCycle);
    }
    ApspResult::new(n, d)
}

/// `(M ⋆ N)[i][j] = min_k M[i][k] + N[k][j]` by the triple loop.
pub fn minplus_exact(m: &MinPlusMatrix, n: &MinPlusMatrix) -> Result<MinPlusMatrix> {
    if m.n() != n.n() {
        return Err(Error::DimensionMismatch {
            left: m.n(),
            right: n.n(),
        });
    }
    let dim = m.n();
    let mut out = vec![INF; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let a = m.get(i, k);
            if a >= INF {
                continue;
            }
            for j in 0..dim {
                let s = sat_add(a, n.get(k, j));
                let cell = &mut out[i * dim + j];
                if s < *cell {
                    *cell = s;
                }
            }
        }
    }
    MinPlusMatrix::from_entries(dim, out)
}

/// For each `(a, b) ∈ A × B`: is there `c ∈ C` with all three edges present
/// and total weight below zero?
pub fn apnt_exact(t: &TripartiteGraph) -> PairFlags {
    let [na, nb, nc] = t.sizes();
    let g = t.graph();
    let mut flags = PairFlags::new(na, nb);
    for ai in 0..na {
        let a = t.vertex(Part::A, ai);
        for bi in 0..nb {
            let b = t.vertex(Part::B, bi);
            if !g.has_edge(a, b) {
                continue;
            }
            let wab = g.weight(a, b);
            let hit = (0..nc).any(|ci| {
                let c = t.vertex(Part::C, ci);
                g.has_edge(a, c) && g.has_edge(b, c) && wab + g.weight(b, c) + g.weight(a, c) < 0
            });
            if hit {
                flags.set(ai, bi);
            }
        }
    }
    flags
}

fn require_undirected(g: &WeightedGraph) -> Result<()> {
    if g.directed() {
        Err(Error::InvalidInstance("triangle problems take undirected graphs".into()))
    } else {
        Ok(())
    }
}

/// First triangle `u < v < w` (lexicographic) whose weight satisfies `pred`.
fn find_triangle(g: &WeightedGraph, pred: impl Fn(i64) -> bool) -> Option<[usize; 3]> {
    let n = g.n();
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                continue;
            }
            let wuv = g.weight(u, v);
            for w in v + 1..n {
                if g.has_edge(v, w) && g.has_edge(u, w) && pred(wuv + g.weight(v, w) + g.weight(u, w)) {
                    return Some([u, v, w]);
                }
            }
        }
    }
    None
}

/// Negative-weight triangle, with the lexicographically first witness.
pub fn nt_exact(g: &WeightedGraph) -> Result<Option<[usize; 3]>> {
    require_undirected(g)?;
    Ok(find_triangle(g, |s| s < 0))
}

/// Zero-weight triangle, with the lexicographically first witness.
pub fn zwt_exact(g: &WeightedGraph) -> Result<Option<[usize; 3]>> {
    require_undirected(g)?;
    Ok(find_triangle(g, |s| s == 0))
}

/// Unordered colour triple, stored sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColourTriple([u32; 3]);

impl ColourTriple {
    pub fn new(i: u32, j: u32, k: u32) -> Self {
        let mut c = [i, j, k];
        c.sort_unstable();
        Self(c)
    }

    pub fn colours(&self) -> [u32; 3] {
        self.0
    }

    pub fn is_distinct(&self) -> bool {
        self.0[0] != self.0[1] && self.0[1] != self.0[2]
    }

    pub fn max_colour(&self) -> u32 {
        self.0[2]
    }

    pub fn multiplicity(&self, colour: u32) -> usize {
        self.0.iter().filter(|&&c| c == colour).count()
    }

    pub fn distinct_colours(&self) -> Vec<u32> {
        let mut v = self.0.to_vec();
        v.dedup();
        v
    }
}

impl fmt::Display for ColourTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

/// Which colour multisets count as triples for Δ-MT and triangle collection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripleOptions {
    /// Only triples of three pairwise-distinct colours are admissible.
    pub distinct_triples: bool,
}

impl Default for TripleOptions {
    fn default() -> Self {
        Self {
            distinct_triples: true,
        }
    }
}

impl TripleOptions {
    pub fn admits(&self, t: &ColourTriple) -> bool {
        !self.distinct_triples || t.is_distinct()
    }

    /// Number of admissible colour multisets over `k` colours.
    pub fn admissible_count(&self, k: usize) -> u64 {
        let k = k as u64;
        if self.distinct_triples {
            if k < 3 {
                0
            } else {
                k * (k - 1) * (k - 2) / 6
            }
        } else {
            (k + 2) * (k + 1) * k / 6
        }
    }
}

/// Triangle count per admissible colour multiset; absent keys count zero.
pub fn count_triangles_per_triple(
    g: &ColouredGraph,
    opts: TripleOptions,
) -> BTreeMap<ColourTriple, u64> {
    let n = g.n();
    let mut counts = BTreeMap::new();
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                continue;
            }
            for w in v + 1..n {
                if g.has_edge(v, w) && g.has_edge(u, w) {
                    let key = ColourTriple::new(g.colour(u), g.colour(v), g.colour(w));
                    if opts.admits(&key) {
                        *counts.entry(key).or_insert(0) += 1;
                    }
                }
            }
        }
    }
    counts
}

/// Does some admissible colour triple host at least `delta` triangles?
pub fn dmt_exact(g: &ColouredGraph, delta: u64, opts: TripleOptions) -> bool {
    let n = g.n() as u64;
    if delta > n * n * n {
        return false;
    }
    if delta == 0 {
        return opts.admissible_count(g.num_colours()) > 0;
    }
    count_triangles_per_triple(g, opts)
        .values()
        .any(|&c| c >= delta)
}

/// Does every admissible colour triple host at least one triangle?
pub fn tc_exact(g: &ColouredGraph, opts: TripleOptions) -> bool {
    let counts = count_triangles_per_triple(g, opts);
    counts.len() as u64 == opts.admissible_count(g.num_colours())
}

/// `trace(A³) / 6` for a symmetric 0/1 matrix with zero diagonal.
///
/// `trace(A³) = Σ_{x,y} A[x][y]·A²[y][x]`, where `A²[y][x]` is the popcount
/// of row `y` of `A` intersected with column `x`.
pub fn trace_count_triangles(adj: &BitMatrix) -> Result<u64> {
    let n = adj.n();
    let mut cols = BitMatrix::new(n);
    for i in 0..n {
        for j in 0..n {
            if adj.get(i, j) {
                cols.set(j, i, true);
            }
        }
    }
    let mut trace: u64 = 0;
    for x in 0..n {
        let cx = cols.row(x);
        for y in 0..n {
            if adj.get(x, y) {
                trace += adj
                    .row(y)
                    .iter()
                    .zip(cx)
                    .map(|(a, b)| (a & b).count_ones() as u64)
                    .sum::<u64>();
            }
        }
    }
    if trace % 6 != 0 {
        return Err(Error::InternalInconsistency(format!(
            "trace(A^3) = {trace} is not divisible by 6"
        )));
    }
    Ok(trace / 6)
}
