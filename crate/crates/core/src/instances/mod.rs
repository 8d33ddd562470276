//! Problem instances: weighted graphs, distance-product operands,
//! tripartite graphs and vertex-coloured graphs.
//!
//! Weights are plain `i64` with [`INF`] as the "no edge" sentinel. All sums go
//! through [`sat_add`], which keeps `INF` absorbing even against negative
//! operands.

mod format;
mod gen;

pub use format::{parse, parse_all, serialize, Instance};
pub use gen::{
    gen_apsp_instance, gen_coloured_graph, gen_minplus_matrix, gen_planted_dmt, gen_tripartite,
    gen_undirected_weighted, gen_weighted_graph, gen_weighted_with_bound, PlantedDmt,
};

use crate::error::{Error, Result};

/// Sentinel for a missing edge or an unreachable pair.
pub const INF: i64 = i64::MAX / 4;

/// Largest weight bound accepted by the constructors.
pub const MAX_BOUND: i64 = 1 << 48;

/// Addition where `INF` absorbs everything.
#[inline]
pub fn sat_add(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        INF
    } else {
        (a + b).min(INF)
    }
}

/// `⌈max(n, 2)^c⌉`: the magnitude limit for finite weights of an instance of
/// size `n` with range exponent `c`.
pub fn weight_bound(n: usize, c: f64) -> i64 {
    let base = n.max(2) as f64;
    let v = base.powf(c);
    if !v.is_finite() || v > MAX_BOUND as f64 {
        return MAX_BOUND + 1;
    }
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.max(1.0) {
        r as i64
    } else {
        v.ceil() as i64
    }
}

/// Smallest exponent `c >= 1` (up to float stepping) with
/// `weight_bound(n, c) >= max_abs`.
pub fn exponent_covering(n: usize, max_abs: i64) -> f64 {
    if max_abs <= weight_bound(n, 1.0) {
        return 1.0;
    }
    let base = n.max(2) as f64;
    let mut c = (max_abs as f64).ln() / base.ln();
    while weight_bound(n, c) < max_abs {
        c *= 1.0 + 1e-12;
    }
    c
}

fn check_range(n: usize, c: f64) -> Result<i64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidInstance(format!("range exponent must be positive, got {c}")));
    }
    let bound = weight_bound(n, c);
    if bound > MAX_BOUND || (3 * n.max(1) as i64).saturating_mul(bound) >= INF {
        return Err(Error::InvalidInstance(format!(
            "weight range n^c too large for n = {n}, c = {c}"
        )));
    }
    Ok(bound)
}

fn max_abs_finite(entries: &[i64]) -> i64 {
    entries
        .iter()
        .filter(|&&x| x < INF)
        .map(|x| x.abs())
        .max()
        .unwrap_or(0)
}

/// Directed or undirected weighted graph on `n` vertices, stored as a dense
/// row-major weight matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    c: f64,
    directed: bool,
    w: Vec<i64>,
}

impl WeightedGraph {
    pub fn new(n: usize, c: f64, directed: bool, w: Vec<i64>) -> Result<Self> {
        let bound = check_range(n, c)?;
        if w.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: n * n,
                right: w.len(),
            });
        }
        for i in 0..n {
            if w[i * n + i] != 0 {
                return Err(Error::InvalidInstance(format!("w[{i}][{i}] must be 0")));
            }
            for j in 0..n {
                let x = w[i * n + j];
                if x != INF && x.abs() > bound {
                    return Err(Error::InvalidInstance(format!(
                        "w[{i}][{j}] = {x} outside [-{bound}, {bound}]"
                    )));
                }
                if !directed && x != w[j * n + i] {
                    return Err(Error::InvalidInstance(format!(
                        "undirected graph has w[{i}][{j}] != w[{j}][{i}]"
                    )));
                }
            }
        }
        Ok(Self { n, c, directed, w })
    }

    /// Builds a graph whose exponent is the smallest one covering `w`.
    pub fn from_weights(n: usize, directed: bool, w: Vec<i64>) -> Result<Self> {
        let c = exponent_covering(n, max_abs_finite(&w));
        Self::new(n, c, directed, w)
    }

    /// Graph with no edges.
    pub fn empty(n: usize, c: f64, directed: bool) -> Result<Self> {
        let mut w = vec![INF; n * n];
        for i in 0..n {
            w[i * n + i] = 0;
        }
        Self::new(n, c, directed, w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn bound(&self) -> i64 {
        weight_bound(self.n, self.c)
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> i64 {
        self.w[i * self.n + j]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.w[i * self.n + j] < INF
    }

    pub fn weights(&self) -> &[i64] {
        &self.w
    }

    /// Deletes edge `(i, j)` (and `(j, i)` when undirected).
    pub fn remove_edge(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.w[i * self.n + j] = INF;
        if !self.directed {
            self.w[j * self.n + i] = INF;
        }
    }

    /// Subgraph induced by `vertices`, in the given order.
    pub fn induced(&self, vertices: &[usize]) -> WeightedGraph {
        let m = vertices.len();
        let mut w = Vec::with_capacity(m * m);
        for &u in vertices {
            for &v in vertices {
                w.push(self.weight(u, v));
            }
        }
        WeightedGraph {
            n: m,
            c: exponent_covering(m, max_abs_finite(&w)).max(self.c),
            directed: self.directed,
            w,
        }
    }
}

/// Square operand or result of the distance product.
#[derive(Clone, Debug, PartialEq)]
pub struct MinPlusMatrix {
    n: usize,
    c: f64,
    m: Vec<i64>,
}

impl MinPlusMatrix {
    pub fn new(n: usize, c: f64, m: Vec<i64>) -> Result<Self> {
        let bound = check_range(n, c)?;
        if m.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: n * n,
                right: m.len(),
            });
        }
        if let Some((idx, x)) = m
            .iter()
            .enumerate()
            .find(|(_, &x)| x != INF && x.abs() > bound)
        {
            return Err(Error::InvalidInstance(format!(
                "entry ({}, {}) = {x} outside [-{bound}, {bound}]",
                idx / n.max(1),
                idx % n.max(1)
            )));
        }
        Ok(Self { n, c, m })
    }

    /// Matrix whose exponent is the smallest one covering its entries. Two
    /// matrices with equal entries built this way compare equal.
    pub fn from_entries(n: usize, m: Vec<i64>) -> Result<Self> {
        let c = exponent_covering(n, max_abs_finite(&m));
        Self::new(n, c, m)
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: r.len(),
            });
        }
        Self::from_entries(n, rows.concat())
    }

    /// Min-plus identity: 0 on the diagonal, `INF` elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut m = vec![INF; n * n];
        for i in 0..n {
            m[i * n + i] = 0;
        }
        Self { n, c: 1.0, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn bound(&self) -> i64 {
        weight_bound(self.n, self.c)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.m[i * self.n + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.m
    }
}

/// Which side of a tripartite graph a vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    A,
    B,
    C,
}

/// Undirected weighted graph on `A ∪ B ∪ C`, vertices numbered A first, then
/// B, then C. Only inter-part edges are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct TripartiteGraph {
    graph: WeightedGraph,
    sizes: [usize; 3],
}

impl TripartiteGraph {
    pub fn new(graph: WeightedGraph, sizes: [usize; 3]) -> Result<Self> {
        if graph.directed() {
            return Err(Error::InvalidInstance("tripartite graph must be undirected".into()));
        }
        let total: usize = sizes.iter().sum();
        if total != graph.n() {
            return Err(Error::DimensionMismatch {
                left: total,
                right: graph.n(),
            });
        }
        let t = Self { graph, sizes };
        for u in 0..total {
            for v in 0..total {
                if t.graph.has_edge(u, v) && t.part_of(u) == t.part_of(v) {
                    return Err(Error::InvalidInstance(format!(
                        "intra-part edge ({u}, {v})"
                    )));
                }
            }
        }
        Ok(t)
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn into_graph(self) -> WeightedGraph {
        self.graph
    }

    pub fn sizes(&self) -> [usize; 3] {
        self.sizes
    }

    pub fn offset(&self, part: Part) -> usize {
        match part {
            Part::A => 0,
            Part::B => self.sizes[0],
            Part::C => self.sizes[0] + self.sizes[1],
        }
    }

    pub fn part_of(&self, v: usize) -> Part {
        if v < self.sizes[0] {
            Part::A
        } else if v < self.sizes[0] + self.sizes[1] {
            Part::B
        } else {
            Part::C
        }
    }

    /// Global vertex id of the `idx`-th vertex of `part`.
    pub fn vertex(&self, part: Part, idx: usize) -> usize {
        self.offset(part) + idx
    }
}

/// Square 0/1 matrix stored as 64-bit words per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.bits[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let word = &mut self.bits[i * self.words + j / 64];
        if value {
            *word |= 1 << (j % 64);
        } else {
            *word &= !(1 << (j % 64));
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| !self.get(i, i))
    }

    /// Principal submatrix on `vertices`, in the given order.
    pub fn induced(&self, vertices: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::new(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate() {
                if self.get(u, v) {
                    out.set(a, b, true);
                }
            }
        }
        out
    }
}

/// Simple undirected graph with a vertex colouring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredGraph {
    adj: BitMatrix,
    gamma: Vec<u32>,
    num_colours: usize,
}

impl ColouredGraph {
    pub fn new(adj: BitMatrix, gamma: Vec<u32>, num_colours: usize) -> Result<Self> {
        let n = adj.n();
        if gamma.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: gamma.len(),
            });
        }
        if num_colours > n.max(1) || num_colours == 0 {
            return Err(Error::InvalidColourCount { n, num_colours });
        }
        if let Some(&g) = gamma.iter().find(|&&g| g as usize >= num_colours) {
            return Err(Error::InvalidInstance(format!(
                "colour {g} not below numColours = {num_colours}"
            )));
        }
        if !adj.is_symmetric() || !adj.has_zero_diagonal() {
            return Err(Error::InvalidInstance(
                "adjacency must be symmetric with zero diagonal".into(),
            ));
        }
        Ok(Self {
            adj,
            gamma,
            num_colours,
        })
    }

    /// Builds from an edge list.
    pub fn from_edges(
        n: usize,
        edges: &[(usize, usize)],
        gamma: Vec<u32>,
        num_colours: usize,
    ) -> Result<Self> {
        let mut adj = BitMatrix::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInstance(format!("bad edge ({u}, {v})")));
            }
            adj.set(u, v, true);
            adj.set(v, u, true);
        }
        Self::new(adj, gamma, num_colours)
    }

    pub fn n(&self) -> usize {
        self.adj.n()
    }

    pub fn num_colours(&self) -> usize {
        self.num_colours
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn gamma(&self) -> &[u32] {
        &self.gamma
    }

    #[inline]
    pub fn colour(&self, v: usize) -> u32 {
        self.gamma[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    /// `|V_i|` for every colour `i`.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_colours];
        for &g in &self.gamma {
            sizes[g as usize] += 1;
        }
        sizes
    }

    /// Copy with edge `{u, v}` added or removed.
    pub fn with_edge(&self, u: usize, v: usize, present: bool) -> ColouredGraph {
        let mut out = self.clone();
        if u != v {
            out.adj.set(u, v, present);
            out.adj.set(v, u, present);
        }
        out
    }

    /// Subgraph induced by `keep` (in order). Colours that still occur are
    /// renumbered densely in order of their old ids; empty classes vanish.
    pub fn induced(&self, keep: &[usize]) -> Result<ColouredGraph> {
        let adj = self.adj.induced(keep);
        let mut used: Vec<u32> = keep.iter().map(|&v| self.gamma[v]).collect();
        used.sort_unstable();
        used.dedup();
        let gamma = keep
            .iter()
            .map(|&v| used.binary_search(&self.gamma[v]).unwrap() as u32)
            .collect();
        ColouredGraph::new(adj, gamma, used.len().max(1))
    }
}

/// Vertices grouped by colour: bucket `i` is the contiguous slice holding
/// `V_i` in first-seen order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourBuckets {
    vertices: Vec<usize>,
    offsets: Vec<usize>,
}

impl ColourBuckets {
    /// Two passes: a histogram for the offsets, then placement.
    pub fn build(g: &ColouredGraph) -> Self {
        let sizes = g.class_sizes();
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        offsets.push(0);
        for s in &sizes {
            offsets.push(offsets.last().unwrap() + s);
        }
        let mut cursor = offsets.clone();
        let mut vertices = vec![0; g.n()];
        for v in 0..g.n() {
            let c = g.colour(v) as usize;
            vertices[cursor[c]] = v;
            cursor[c] += 1;
        }
        Self { vertices, offsets }
    }

    pub fn num_buckets(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn bucket(&self, colour: usize) -> &[usize] {
        &self.vertices[self.offsets[colour]..self.offsets[colour + 1]]
    }

    #[inline]
    pub fn len(&self, colour: usize) -> usize {
        self.offsets[colour + 1] - self.offsets[colour]
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The `idx`-th vertex of bucket `colour`.
    #[inline]
    pub fn get(&self, colour: usize, idx: usize) -> usize {
        self.vertices[self.offsets[colour] + idx]
    }

    pub fn total_len(&self) -> usize {
        self.vertices.len()
    }
}
