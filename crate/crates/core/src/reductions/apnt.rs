//! Distance product → all-pairs negative triangle → negative triangle.

use super::{ReductionTrace, TriangleAnswer};
use crate::error::{Error, Result};
use crate::instances::{MinPlusMatrix, Part, TripartiteGraph, WeightedGraph, INF};
use crate::oracles::PairFlags;
use crate::qcost::ceil_log2;

/// Upper bound on APNT calls made by [`minplus_via_apnt`] for entry bound
/// `bound`: `⌈log₂(4·bound + 2)⌉ + 1`.
pub fn minplus_via_apnt_call_bound(bound: i64) -> u64 {
    ceil_log2((4 * bound + 2) as u64) as u64 + 1
}

/// Distance product by a lockstep binary search over all pairs, one APNT
/// query per round.
///
/// Round instance: part A holds row indices `i`, part B column indices `j`,
/// part C the inner index `k`, with `w(a_i, c_k) = M[i][k]`,
/// `w(c_k, b_j) = N[k][j]` and `w(a_i, b_j) = -mid_ij`. A flag at `(i, j)`
/// means `min_k M[i][k] + N[k][j] < mid_ij`. Each pair keeps
/// `lo <= value < hi`; the first round, at `mid = 2B + 1`, separates finite
/// pairs from `INF` ones.
pub fn minplus_via_apnt<F>(
    m: &MinPlusMatrix,
    nn: &MinPlusMatrix,
    apnt: &mut F,
    trace: &mut ReductionTrace,
) -> Result<MinPlusMatrix>
where
    F: FnMut(&TripartiteGraph) -> Result<PairFlags>,
{
    if m.n() != nn.n() {
        return Err(Error::DimensionMismatch {
            left: m.n(),
            right: nn.n(),
        });
    }
    let n = m.n();
    if n == 0 {
        return MinPlusMatrix::from_entries(0, Vec::new());
    }
    let bound = m.bound().max(nn.bound());
    let size = 3 * n;

    // Fixed A–C and C–B edges; A–B edges change per round.
    let mut base = vec![INF; size * size];
    for v in 0..size {
        base[v * size + v] = 0;
    }
    let (a, b, c) = (0, n, 2 * n);
    for i in 0..n {
        for k in 0..n {
            let x = m.get(i, k);
            base[(a + i) * size + (c + k)] = x;
            base[(c + k) * size + (a + i)] = x;
            let y = nn.get(k, i);
            base[(c + k) * size + (b + i)] = y;
            base[(b + i) * size + (c + k)] = y;
        }
    }

    let mut query = |mids: &[Option<i64>], round: usize| -> Result<PairFlags> {
        let mut w = base.clone();
        for i in 0..n {
            for j in 0..n {
                if let Some(mid) = mids[i * n + j] {
                    w[(a + i) * size + (b + j)] = -mid;
                    w[(b + j) * size + (a + i)] = -mid;
                }
            }
        }
        let t = TripartiteGraph::new(WeightedGraph::from_weights(size, false, w)?, [n, n, n])?;
        let flags = apnt(&t)?;
        if flags.rows() != n || flags.cols() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: flags.rows(),
            });
        }
        trace.record(
            "apnt",
            size,
            format!("round {round}, n={n}"),
            format!("{} flags", flags.count()),
        );
        Ok(flags)
    };

    let ceiling = 2 * bound + 1;
    let feasible = query(&vec![Some(ceiling); n * n], 0)?;
    let mut lo = vec![-2 * bound; n * n];
    let mut hi = vec![ceiling; n * n];
    let mut round = 1;
    loop {
        let mids: Vec<Option<i64>> = (0..n * n)
            .map(|p| {
                let (i, j) = (p / n, p % n);
                (feasible.get(i, j) && hi[p] - lo[p] > 1).then(|| lo[p] + (hi[p] - lo[p]) / 2)
            })
            .collect();
        if mids.iter().all(Option::is_none) {
            break;
        }
        let flags = query(&mids, round)?;
        for (p, mid) in mids.iter().enumerate() {
            if let Some(mid) = *mid {
                if flags.get(p / n, p % n) {
                    hi[p] = mid;
                } else {
                    lo[p] = mid;
                }
            }
        }
        round += 1;
    }
    let out = (0..n * n)
        .map(|p| if feasible.get(p / n, p % n) { lo[p] } else { INF })
        .collect();
    MinPlusMatrix::from_entries(n, out)
}

/// Splits `0..len` into consecutive chunks of at most `chunk` elements.
fn blocks(len: usize, chunk: usize) -> Vec<std::ops::Range<usize>> {
    (0..len.div_ceil(chunk))
        .map(|b| b * chunk..((b + 1) * chunk).min(len))
        .collect()
}

/// Smallest `g` with `g³ >= n`.
fn ceil_cbrt(n: usize) -> usize {
    let mut g = 1;
    while g * g * g < n {
        g += 1;
    }
    g
}

/// All-pairs negative triangle from a negative-triangle solver.
///
/// Each part is cut into `⌈n^{1/3}⌉` blocks; for every block triple the
/// solver is queried repeatedly on a working copy of the induced subgraph,
/// and every witness `(a, b, c)` flags `(a, b)` and deletes edge `(a, b)`
/// from the copy. Pairs already flagged start out deleted, so each pair
/// costs at most one witness. When the solver returns no witness, one is recovered by
/// halving each part in turn with decision queries.
pub fn apnt_via_nt<F>(
    t: &TripartiteGraph,
    nt: &mut F,
    trace: &mut ReductionTrace,
) -> Result<PairFlags>
where
    F: FnMut(&WeightedGraph) -> Result<TriangleAnswer>,
{
    let sizes = t.sizes();
    let mut flags = PairFlags::new(sizes[0], sizes[1]);
    let n = *sizes.iter().max().unwrap();
    if sizes.contains(&0) {
        return Ok(flags);
    }
    let chunk = n.div_ceil(ceil_cbrt(n));
    let parts = [Part::A, Part::B, Part::C];
    let ranges: Vec<Vec<std::ops::Range<usize>>> = sizes.iter().map(|&s| blocks(s, chunk)).collect();

    for ra in &ranges[0] {
        for rb in &ranges[1] {
            for rc in &ranges[2] {
                // Local vertex lists per part, as global ids.
                let members: [Vec<usize>; 3] = [ra, rb, rc]
                    .iter()
                    .zip(parts)
                    .map(|(r, p)| (*r).clone().map(|i| t.vertex(p, i)).collect())
                    .collect::<Vec<_>>()
                    .try_into()
                    .unwrap();
                let all: Vec<usize> = members.concat();
                let mut working = t.graph().induced(&all);
                let local_parts = [members[0].len(), members[1].len(), members[2].len()];
                // Pairs flagged in an earlier block triple need no second witness.
                for (la, &ga) in members[0].iter().enumerate() {
                    for (lb, &gb) in members[1].iter().enumerate() {
                        if flags.get(ga - t.offset(Part::A), gb - t.offset(Part::B)) {
                            working.remove_edge(la, local_parts[0] + lb);
                        }
                    }
                }
                loop {
                    let ans = nt(&working)?;
                    trace.record(
                        "nt",
                        working.n(),
                        format!("block n={}", working.n()),
                        format!("{}", ans.found),
                    );
                    if !ans.found {
                        break;
                    }
                    let tri = match ans.witness {
                        Some(w) => w,
                        None => recover_witness(&working, local_parts, nt, trace)?,
                    };
                    let (la, lb) = split_witness(&working, local_parts, tri)?;
                    let ga = all[la] - t.offset(Part::A);
                    let gb = all[lb] - t.offset(Part::B);
                    flags.set(ga, gb);
                    working.remove_edge(la, lb);
                    trace.record("witness", 1, format!("a={ga} b={gb}"), String::new());
                }
            }
        }
    }
    Ok(flags)
}

fn local_part(sizes: [usize; 3], v: usize) -> usize {
    if v < sizes[0] {
        0
    } else if v < sizes[0] + sizes[1] {
        1
    } else {
        2
    }
}

/// Checks that `tri` is a negative triangle with one vertex per part and
/// returns its (A, B) vertices.
fn split_witness(g: &WeightedGraph, sizes: [usize; 3], tri: [usize; 3]) -> Result<(usize, usize)> {
    let mut slot = [usize::MAX; 3];
    for v in tri {
        if v >= g.n() {
            return Err(Error::InternalInconsistency(format!("witness vertex {v} out of range")));
        }
        slot[local_part(sizes, v)] = v;
    }
    let [a, b, c] = slot;
    let ok = !slot.contains(&usize::MAX)
        && g.has_edge(a, b)
        && g.has_edge(b, c)
        && g.has_edge(a, c)
        && g.weight(a, b) + g.weight(b, c) + g.weight(a, c) < 0;
    if !ok {
        return Err(Error::InternalInconsistency(format!(
            "solver witness {tri:?} is not a negative tripartite triangle"
        )));
    }
    Ok((a, b))
}

/// Decision-to-search: narrow each part to one vertex by halving, keeping a
/// half whenever the solver still reports a negative triangle.
fn recover_witness<F>(
    g: &WeightedGraph,
    sizes: [usize; 3],
    nt: &mut F,
    trace: &mut ReductionTrace,
) -> Result<[usize; 3]>
where
    F: FnMut(&WeightedGraph) -> Result<TriangleAnswer>,
{
    let mut sets: [Vec<usize>; 3] = [
        (0..sizes[0]).collect(),
        (sizes[0]..sizes[0] + sizes[1]).collect(),
        (sizes[0] + sizes[1]..g.n()).collect(),
    ];
    for p in 0..3 {
        while sets[p].len() > 1 {
            let mid = sets[p].len() / 2;
            let half: Vec<usize> = sets[p][..mid].to_vec();
            let mut keep = Vec::new();
            for (q, s) in sets.iter().enumerate() {
                if q == p {
                    keep.extend(&half);
                } else {
                    keep.extend(s);
                }
            }
            let sub = g.induced(&keep);
            let ans = nt(&sub)?;
            trace.record("nt", sub.n(), format!("halving n={}", sub.n()), format!("{}", ans.found));
            if ans.found {
                sets[p] = half;
            } else {
                sets[p].drain(..mid);
            }
        }
        if sets[p].is_empty() {
            return Err(Error::InternalInconsistency("decision solver lost the triangle".into()));
        }
    }
    Ok([sets[0][0], sets[1][0], sets[2][0]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_minplus_matrix, gen_tripartite};
    use crate::oracles::{apnt_exact, minplus_exact, nt_exact};

    fn witness_nt(g: &WeightedGraph) -> Result<TriangleAnswer> {
        nt_exact(g).map(TriangleAnswer::from_witness)
    }

    fn decision_nt(g: &WeightedGraph) -> Result<TriangleAnswer> {
        nt_exact(g).map(|w| TriangleAnswer::decision(w.is_some()))
    }

    #[test]
    fn single_pair_binary_search() {
        let m = MinPlusMatrix::from_rows(&[vec![5]]).unwrap();
        let nn = MinPlusMatrix::from_rows(&[vec![3]]).unwrap();
        let mut trace = ReductionTrace::new();
        let got = minplus_via_apnt(&m, &nn, &mut |t| Ok(apnt_exact(t)), &mut trace).unwrap();
        assert_eq!(got.get(0, 0), 8);
        let bound = m.bound().max(nn.bound());
        assert!(trace.calls("apnt") <= minplus_via_apnt_call_bound(bound));
    }

    #[test]
    fn all_inf_resolves_in_first_round() {
        let m = MinPlusMatrix::from_rows(&[vec![INF, INF], vec![INF, INF]]).unwrap();
        let nn = MinPlusMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let mut trace = ReductionTrace::new();
        let got = minplus_via_apnt(&m, &nn, &mut |t| Ok(apnt_exact(t)), &mut trace).unwrap();
        assert_eq!(got, m);
        assert_eq!(trace.calls("apnt"), 1);
    }

    #[test]
    fn binary_search_matches_triple_loop() {
        for seed in 0..200u64 {
            let n = 1 + (seed % 16) as usize;
            let m = gen_minplus_matrix(n, 1.0, 0.15, seed).unwrap();
            let nn = gen_minplus_matrix(n, 1.0, 0.15, seed ^ 0xabc).unwrap();
            let mut trace = ReductionTrace::new();
            let got = minplus_via_apnt(&m, &nn, &mut |t| Ok(apnt_exact(t)), &mut trace).unwrap();
            assert_eq!(got, minplus_exact(&m, &nn).unwrap(), "seed {seed}");
            assert!(trace.calls("apnt") <= minplus_via_apnt_call_bound(m.bound()));
        }
    }

    fn one_triangle(sum_shift: i64) -> TripartiteGraph {
        let mut w = vec![INF; 9];
        for i in 0..3 {
            w[i * 3 + i] = 0;
        }
        for (u, v, x) in [(0, 1, 1), (1, 2, 1), (0, 2, -3 + sum_shift)] {
            w[u * 3 + v] = x;
            w[v * 3 + u] = x;
        }
        TripartiteGraph::new(WeightedGraph::from_weights(3, false, w).unwrap(), [1, 1, 1]).unwrap()
    }

    #[test]
    fn single_negative_triangle_sets_one_flag() {
        let mut trace = ReductionTrace::new();
        let f = apnt_via_nt(&one_triangle(0), &mut witness_nt, &mut trace).unwrap();
        assert_eq!(f.count(), 1);
        assert!(f.get(0, 0));
        assert_eq!(trace.calls("witness"), 1);
    }

    #[test]
    fn nonnegative_instance_has_no_witnesses() {
        let mut trace = ReductionTrace::new();
        let f = apnt_via_nt(&one_triangle(1), &mut witness_nt, &mut trace).unwrap();
        assert_eq!(f.count(), 0);
        assert_eq!(trace.calls("witness"), 0);
    }

    #[test]
    fn blocked_search_matches_exact() {
        for seed in 0..100u64 {
            let sizes = [1 + (seed % 12) as usize, 1 + (seed * 7 % 12) as usize, 1 + (seed * 5 % 12) as usize];
            let t = gen_tripartite(sizes, 12, 0.6, seed).unwrap();
            let want = apnt_exact(&t);
            for decision in [false, true] {
                let mut trace = ReductionTrace::new();
                let got = if decision {
                    apnt_via_nt(&t, &mut decision_nt, &mut trace).unwrap()
                } else {
                    apnt_via_nt(&t, &mut witness_nt, &mut trace).unwrap()
                };
                assert_eq!(got, want, "seed {seed} decision {decision}");
                let witnesses = trace.calls("witness");
                assert!(witnesses <= (sizes[0] * sizes[1]) as u64);
                let n = *sizes.iter().max().unwrap();
                let chunk = n.div_ceil(ceil_cbrt(n));
                let triples: u64 = sizes.iter().map(|s| s.div_ceil(chunk) as u64).product();
                if !decision {
                    assert!(trace.calls("nt") <= triples + witnesses);
                } else {
                    let per = 3 * ceil_log2(n as u64) as u64;
                    assert!(trace.calls("nt") <= triples + witnesses * (1 + per));
                }
            }
        }
    }

    #[test]
    fn block_partition_shape() {
        for n in 1..200 {
            let g = ceil_cbrt(n);
            assert!(g * g * g >= n && (g - 1).pow(3) < n);
            let chunk = n.div_ceil(g);
            assert!(blocks(n, chunk).len() <= g);
            let cap = (n as f64).powf(2.0 / 3.0).ceil() as usize;
            assert!(chunk <= cap.max(1), "n={n} chunk={chunk} cap={cap}");
        }
    }
}
