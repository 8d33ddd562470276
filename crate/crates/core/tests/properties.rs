use fgt_core::instances::{
    gen_apsp_instance, gen_coloured_graph, gen_minplus_matrix, gen_tripartite, gen_weighted_with_bound, parse, serialize,
    Instance,
};
use fgt_core::oracles::{apnt_exact, minplus_exact, nt_exact, zwt_exact, TripleOptions};
use fgt_core::qcost::{Cost, CostLedger, CostModel};
use fgt_core::reductions::{
    apnt_via_nt, minplus_via_apsp, nt_via_zwt, pipeline_run, PipelineAnswer, PipelineId, PipelineSource,
    ReductionTrace, TriangleAnswer,
};
use fgt_core::triangles::{dmt_solve, DmtConfig, DmtMode};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instances_round_trip(n in 1usize..12, seed in any::<u64>(), kind in 0u8..4) {
        let inst: Instance = match kind {
            0 => gen_apsp_instance(n, 1.5, 0.5, seed).unwrap().into(),
            1 => gen_minplus_matrix(n, 1.0, 0.2, seed).unwrap().into(),
            2 => gen_tripartite([n, n / 2 + 1, 2], 9, 0.5, seed).unwrap().into(),
            _ => gen_coloured_graph(n, 1 + n / 3, 0.5, seed).unwrap().into(),
        };
        prop_assert_eq!(parse(&serialize(&inst)).unwrap(), inst);
    }

    #[test]
    fn layered_product_is_sound(n in 1usize..10, seed in any::<u64>()) {
        let a = gen_minplus_matrix(n, 1.0, 0.2, seed).unwrap();
        let b = gen_minplus_matrix(n, 1.0, 0.2, seed ^ 1).unwrap();
        let mut trace = ReductionTrace::new();
        let got = minplus_via_apsp(&a, &b, &mut |g| fgt_core::oracles::apsp_exact(g), &mut trace).unwrap();
        prop_assert_eq!(got, minplus_exact(&a, &b).unwrap());
        prop_assert_eq!(trace.calls("apsp"), 1);
    }

    #[test]
    fn scaled_targets_decide_negative_triangles(n in 1usize..12, seed in any::<u64>(), bound in 1i64..60) {
        let g = gen_weighted_with_bound(n, bound, 0.6, false, seed).unwrap();
        let mut trace = ReductionTrace::new();
        let ans = nt_via_zwt(&g, &mut |h| zwt_exact(h).map(TriangleAnswer::from_witness), &mut trace).unwrap();
        prop_assert_eq!(ans.found, nt_exact(&g).unwrap().is_some());
    }

    #[test]
    fn witness_extraction_bounded(a in 1usize..9, b in 1usize..9, c in 1usize..9, seed in any::<u64>()) {
        let t = gen_tripartite([a, b, c], 10, 0.7, seed).unwrap();
        let mut trace = ReductionTrace::new();
        let flags = apnt_via_nt(&t, &mut |g| nt_exact(g).map(TriangleAnswer::from_witness), &mut trace).unwrap();
        prop_assert_eq!(&flags, &apnt_exact(&t));
        prop_assert_eq!(trace.calls("witness"), flags.count() as u64);
        prop_assert!(trace.calls("witness") <= (a * b) as u64);
    }

    #[test]
    fn forced_modes_agree(n in 3usize..20, k in 1usize..5, seed in any::<u64>(), delta in 0u64..30, distinct: bool) {
        let g = gen_coloured_graph(n, k.min(n), 0.6, seed).unwrap();
        let opts = TripleOptions { distinct_triples: distinct };
        let run = |mode| {
            let cfg = DmtConfig { delta, mode, charge_global_n: false, opts };
            dmt_solve(&g, &cfg, &mut CostLedger::default()).unwrap().answer
        };
        prop_assert_eq!(run(DmtMode::Small), run(DmtMode::Large));
    }

    #[test]
    fn ledger_total_ignores_event_order(xs in prop::collection::vec(0.0f64..1e6, 1..30)) {
        let mut fwd = CostLedger::new(CostModel::default());
        let mut rev = CostLedger::new(CostModel::default());
        for &x in &xs {
            fwd.charge("e", Cost::from_f64(x), 1);
        }
        for &x in xs.iter().rev() {
            rev.charge("e", Cost::from_f64(x), 1);
        }
        prop_assert_eq!(fwd.total_exact(), rev.total_exact());
    }
}

#[test]
fn pipeline_stages_match_oracles() {
    for seed in 0..20u64 {
        let n = 2 + (seed % 6) as usize;
        let a = gen_minplus_matrix(n, 1.0, 0.1, seed).unwrap();
        let b = gen_minplus_matrix(n, 1.0, 0.1, seed + 50).unwrap();
        let (ans, trace) =
            pipeline_run(&PipelineSource::Matrices(a.clone(), b.clone()), PipelineId::MmToApnt, &Default::default())
                .unwrap();
        assert_eq!(ans, PipelineAnswer::Product(minplus_exact(&a, &b).unwrap()));
        assert!(trace.calls("apnt") > 0);

        let g = gen_weighted_with_bound(n + 3, 20, 0.7, false, seed).unwrap();
        let (ans, _) = pipeline_run(&PipelineSource::Graph(g.clone()), PipelineId::NtToZwt, &Default::default()).unwrap();
        assert_eq!(ans, PipelineAnswer::Triangle(nt_exact(&g).unwrap().is_some()));
    }
}
