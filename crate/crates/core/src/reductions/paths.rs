//! APSP ⇄ distance product.

use super::ReductionTrace;
use crate::error::{Error, Result};
use crate::instances::{MinPlusMatrix, WeightedGraph, INF};
use crate::oracles::ApspResult;
use crate::qcost::ceil_log2;

/// All-pairs distances by repeated squaring: `⌈log₂ n⌉` distance products of
/// the weight matrix with itself.
pub fn apsp_via_minplus<F>(
    g: &WeightedGraph,
    mm: &mut F,
    trace: &mut ReductionTrace,
) -> Result<ApspResult>
where
    F: FnMut(&MinPlusMatrix, &MinPlusMatrix) -> Result<MinPlusMatrix>,
{
    let n = g.n();
    let mut d = MinPlusMatrix::from_entries(n, g.weights().to_vec())?;
    for round in 0..ceil_log2(n as u64) {
        let next = mm(&d, &d)?;
        if next.n() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: next.n(),
            });
        }
        trace.record(
            "minplus",
            n,
            format!("square {round}, n={n}"),
            format!("bound={}", next.bound()),
        );
        if (0..n).any(|i| next.get(i, i) < 0) {
            return Err(Error::NegativeCycle);
        }
        d = next;
    }
    ApspResult::new(n, d.entries().to_vec())
}

/// Distance product via one APSP call on the layered graph
/// `a_i → b_k → c_j` with weights `M[i][k]` and `N[k][j]`.
///
/// The graph is directed so every `a_i ⇝ c_j` path has exactly two edges.
pub fn minplus_via_apsp<F>(
    m: &MinPlusMatrix,
    nn: &MinPlusMatrix,
    apsp: &mut F,
    trace: &mut ReductionTrace,
) -> Result<MinPlusMatrix>
where
    F: FnMut(&WeightedGraph) -> Result<ApspResult>,
{
    if m.n() != nn.n() {
        return Err(Error::DimensionMismatch {
            left: m.n(),
            right: nn.n(),
        });
    }
    let n = m.n();
    let size = 3 * n;
    let (a, b, c) = (0, n, 2 * n);
    let mut w = vec![INF; size * size];
    for v in 0..size {
        w[v * size + v] = 0;
    }
    for i in 0..n {
        for k in 0..n {
            w[(a + i) * size + (b + k)] = m.get(i, k);
            w[(b + i) * size + (c + k)] = nn.get(i, k);
        }
    }
    let layered = WeightedGraph::from_weights(size, true, w)?;
    let d = apsp(&layered)?;
    if d.n() != size {
        return Err(Error::DimensionMismatch {
            left: size,
            right: d.n(),
        });
    }
    trace.record("apsp", size, format!("layered graph, n={size}"), "distances".into());
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(d.get(a + i, c + j));
        }
    }
    MinPlusMatrix::from_entries(n, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_apsp_instance, gen_minplus_matrix, weight_bound};
    use crate::oracles::{apsp_exact, minplus_exact};

    fn exact_mm(m: &MinPlusMatrix, n: &MinPlusMatrix) -> Result<MinPlusMatrix> {
        minplus_exact(m, n)
    }

    #[test]
    fn singleton_needs_no_products() {
        let g = WeightedGraph::new(1, 1.0, true, vec![0]).unwrap();
        let mut trace = ReductionTrace::new();
        let d = apsp_via_minplus(&g, &mut exact_mm, &mut trace).unwrap();
        assert_eq!(d.distances(), &[0]);
        assert_eq!(trace.calls("minplus"), 0);
    }

    #[test]
    fn path_closes_after_two_squarings() {
        let mut w = vec![INF; 16];
        for i in 0..4 {
            w[i * 4 + i] = 0;
        }
        w[1] = 1;
        w[4 + 2] = 1;
        w[2 * 4 + 3] = 1;
        let g = WeightedGraph::new(4, 1.0, true, w).unwrap();
        let mut trace = ReductionTrace::new();
        let d = apsp_via_minplus(&g, &mut exact_mm, &mut trace).unwrap();
        assert_eq!(d.get(0, 3), 3);
        assert_eq!(trace.calls("minplus"), 2);
    }

    #[test]
    fn negative_cycle_surfaces() {
        let g = WeightedGraph::new(3, 1.0, true, vec![0, 1, INF, INF, 0, 1, -3, INF, 0]).unwrap();
        let mut trace = ReductionTrace::new();
        assert!(matches!(
            apsp_via_minplus(&g, &mut exact_mm, &mut trace),
            Err(Error::NegativeCycle)
        ));
    }

    #[test]
    fn squaring_matches_floyd_warshall() {
        for seed in 0..200u64 {
            let n = 1 + (seed % 24) as usize;
            let g = gen_apsp_instance(n, 1.0, 0.4, seed).unwrap();
            let mut trace = ReductionTrace::new();
            let d = apsp_via_minplus(&g, &mut exact_mm, &mut trace).unwrap();
            assert_eq!(d, apsp_exact(&g).unwrap(), "seed {seed}");
            assert_eq!(trace.calls("minplus"), ceil_log2(n as u64) as u64);
        }
    }

    #[test]
    fn layered_graph_product() {
        let m = MinPlusMatrix::from_rows(&[vec![0, 1], vec![2, 3]]).unwrap();
        let mut apsp = |g: &WeightedGraph| apsp_exact(g);
        let mut trace = ReductionTrace::new();
        assert_eq!(minplus_via_apsp(&m, &m, &mut apsp, &mut trace).unwrap(), m);
        let id = MinPlusMatrix::identity(2);
        assert_eq!(minplus_via_apsp(&m, &id, &mut apsp, &mut trace).unwrap(), m);
        assert_eq!(trace.calls("apsp"), 2);
    }

    #[test]
    fn layered_graph_matches_triple_loop() {
        for seed in 0..200u64 {
            let n = 1 + (seed % 20) as usize;
            let m = gen_minplus_matrix(n, 1.0, 0.2, seed).unwrap();
            let nn = gen_minplus_matrix(n, 1.0, 0.2, seed + 1000).unwrap();
            assert!(m.entries().iter().all(|&x| x == INF || x.abs() <= weight_bound(n, 1.0)));
            let mut trace = ReductionTrace::new();
            let got = minplus_via_apsp(&m, &nn, &mut |g| apsp_exact(g), &mut trace).unwrap();
            assert_eq!(got, minplus_exact(&m, &nn).unwrap(), "seed {seed}");
        }
    }
}
