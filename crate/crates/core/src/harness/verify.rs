use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{par_map, trial_seed};
use crate::error::{Error, Result};
use crate::instances::{
    gen_apsp_instance, gen_coloured_graph, gen_minplus_matrix, gen_tripartite, gen_weighted_with_bound,
    serialize, ColouredGraph, Instance, MinPlusMatrix, TripartiteGraph, WeightedGraph,
};
use crate::oracles::{apnt_exact, apsp_exact, dmt_exact, minplus_exact, nt_exact, tc_exact, TripleOptions};
use crate::qcost::CostLedger;
use crate::reductions::{minplus_via_apsp, pipeline_run, PipelineAnswer, PipelineId, PipelineOptions, PipelineSource, ReductionTrace};
use crate::triangles::{dmt_solve, tc_solve, DmtConfig, DmtMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyTarget {
    Pipeline(PipelineId),
    MmToApsp,
    Dmt(DmtMode),
    Tc,
}

impl VerifyTarget {
    pub const ALL: [VerifyTarget; 10] = [
        VerifyTarget::Pipeline(PipelineId::ApspToMm),
        VerifyTarget::MmToApsp,
        VerifyTarget::Pipeline(PipelineId::MmToApnt),
        VerifyTarget::Pipeline(PipelineId::ApntToNt),
        VerifyTarget::Pipeline(PipelineId::NtToZwt),
        VerifyTarget::Pipeline(PipelineId::ApspToZwt),
        VerifyTarget::Dmt(DmtMode::Small),
        VerifyTarget::Dmt(DmtMode::Large),
        VerifyTarget::Dmt(DmtMode::Auto),
        VerifyTarget::Tc,
    ];
}

impl fmt::Display for VerifyTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyTarget::Pipeline(id) => write!(f, "{id}"),
            VerifyTarget::MmToApsp => f.write_str("mm-to-apsp"),
            VerifyTarget::Dmt(m) => write!(f, "dmt-{m}"),
            VerifyTarget::Tc => f.write_str("tc"),
        }
    }
}

impl FromStr for VerifyTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(id) = s.parse::<PipelineId>() {
            return Ok(VerifyTarget::Pipeline(id));
        }
        let norm = s.trim().to_ascii_lowercase().replace("minplus", "mm").replace("->", "-to-");
        VerifyTarget::ALL
            .into_iter()
            .find(|t| t.to_string() == norm)
            .ok_or_else(|| Error::UnsupportedCombination(format!("unknown verification target '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub trials: usize,
    pub max_n: usize,
    pub seed: u64,
    /// Run the reductions with a deliberately broken ZWT target set.
    pub mutate: bool,
    pub decision_only: bool,
    /// Directory for the shrunk counterexample, if any.
    pub out_dir: Option<PathBuf>,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            trials: 100,
            max_n: 10,
            seed: 0,
            mutate: false,
            decision_only: false,
            out_dir: None,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub trial: usize,
    pub seed: u64,
    /// Vertex count after shrinking.
    pub vertices: usize,
    pub note: String,
    /// The instance in the text format.
    pub text: String,
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOutcome {
    pub target: VerifyTarget,
    pub trials: usize,
    pub failures: usize,
    pub counterexample: Option<Counterexample>,
    pub trace: ReductionTrace,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Case {
    Graph(WeightedGraph),
    Matrices(MinPlusMatrix, MinPlusMatrix),
    Tripartite(TripartiteGraph),
    Coloured(ColouredGraph, u64, TripleOptions),
}

impl Case {
    fn vertices(&self) -> usize {
        match self {
            Case::Graph(g) => g.n(),
            Case::Matrices(a, _) => a.n(),
            Case::Tripartite(t) => t.graph().n(),
            Case::Coloured(g, ..) => g.n(),
        }
    }

    fn without(&self, v: usize) -> Result<Case> {
        let keep: Vec<usize> = (0..self.vertices()).filter(|&u| u != v).collect();
        Ok(match self {
            Case::Graph(g) => Case::Graph(g.induced(&keep)),
            Case::Matrices(a, b) => Case::Matrices(sub_matrix(a, &keep)?, sub_matrix(b, &keep)?),
            Case::Tripartite(t) => {
                let mut sizes = t.sizes();
                sizes[t.part_of(v) as usize] -= 1;
                Case::Tripartite(TripartiteGraph::new(t.graph().induced(&keep), sizes)?)
            }
            Case::Coloured(g, d, o) => Case::Coloured(g.induced(&keep)?, *d, *o),
        })
    }

    fn documents(&self) -> (String, String) {
        match self {
            Case::Graph(g) => (serialize(&Instance::from(g.clone())), String::new()),
            Case::Matrices(a, b) => (
                serialize(&Instance::from(a.clone())) + &serialize(&Instance::from(b.clone())),
                String::new(),
            ),
            Case::Tripartite(t) => (serialize(&Instance::from(t.clone())), String::new()),
            Case::Coloured(g, d, o) => (
                serialize(&Instance::from(g.clone())),
                format!("delta={d} distinct_triples={}", o.distinct_triples),
            ),
        }
    }
}

fn sub_matrix(m: &MinPlusMatrix, keep: &[usize]) -> Result<MinPlusMatrix> {
    let entries = keep
        .iter()
        .flat_map(|&i| keep.iter().map(move |&j| m.get(i, j)))
        .collect();
    MinPlusMatrix::from_entries(keep.len(), entries)
}

fn generate(target: VerifyTarget, max_n: usize, seed: u64) -> Result<Case> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let max_n = max_n.max(1);
    let n = r.gen_range(1..=max_n);
    let density = r.gen_range(0.2..0.9);
    let s = r.gen::<u64>();
    Ok(match target {
        VerifyTarget::Pipeline(PipelineId::ApspToMm | PipelineId::ApspToZwt) => {
            Case::Graph(gen_apsp_instance(n, 1.0, density, s)?)
        }
        VerifyTarget::Pipeline(PipelineId::NtToZwt) => Case::Graph(gen_weighted_with_bound(n, 50, density, false, s)?),
        VerifyTarget::Pipeline(PipelineId::MmToApnt) | VerifyTarget::MmToApsp => {
            let inf = r.gen_range(0.0..0.3);
            Case::Matrices(gen_minplus_matrix(n, 1.0, inf, s)?, gen_minplus_matrix(n, 1.0, inf, s ^ 0x5a5a)?)
        }
        VerifyTarget::Pipeline(PipelineId::ApntToNt) => {
            let sizes = [r.gen_range(1..=max_n), r.gen_range(1..=max_n), r.gen_range(1..=max_n)];
            Case::Tripartite(gen_tripartite(sizes, 2 * max_n as i64, density, s)?)
        }
        VerifyTarget::Dmt(_) | VerifyTarget::Tc => {
            let k = r.gen_range(1..=n.min(6));
            let opts = TripleOptions {
                distinct_triples: r.gen_bool(0.5),
            };
            let cube = (n as u64).pow(3);
            let delta = if r.gen_bool(0.5) {
                r.gen_range(0..=8u64).min(cube)
            } else {
                ((n as f64).powf(r.gen_range(0.0..=3.0)).round() as u64).clamp(1, cube)
            };
            Case::Coloured(gen_coloured_graph(n, k, density, s)?, delta, opts)
        }
    })
}

/// Runs the case; `Ok(true)` when the result agrees with the oracle.
fn check(target: VerifyTarget, case: &Case, opts: &VerifyOptions, trace: &mut ReductionTrace) -> Result<bool> {
    if let (VerifyTarget::MmToApsp, Case::Matrices(a, b)) = (target, case) {
        let got = minplus_via_apsp(a, b, &mut |g: &WeightedGraph| apsp_exact(g), trace)?;
        return Ok(got == minplus_exact(a, b)?);
    }
    let popts = PipelineOptions {
        decision_only: opts.decision_only,
        dump_dir: None,
        mutate: opts.mutate,
    };
    let mut pipe = |src: PipelineSource, id: PipelineId| -> Result<PipelineAnswer> {
        let (ans, t) = pipeline_run(&src, id, &popts)?;
        trace.merge(&t);
        Ok(ans)
    };
    match (target, case) {
        (VerifyTarget::Pipeline(id @ (PipelineId::ApspToMm | PipelineId::ApspToZwt)), Case::Graph(g)) => {
            Ok(pipe(PipelineSource::Graph(g.clone()), id)? == PipelineAnswer::Distances(apsp_exact(g)?))
        }
        (VerifyTarget::Pipeline(PipelineId::NtToZwt), Case::Graph(g)) => Ok(pipe(PipelineSource::Graph(g.clone()), PipelineId::NtToZwt)?
            == PipelineAnswer::Triangle(nt_exact(g)?.is_some())),
        (VerifyTarget::Pipeline(PipelineId::MmToApnt), Case::Matrices(a, b)) => {
            Ok(pipe(PipelineSource::Matrices(a.clone(), b.clone()), PipelineId::MmToApnt)?
                == PipelineAnswer::Product(minplus_exact(a, b)?))
        }
        (VerifyTarget::Pipeline(PipelineId::ApntToNt), Case::Tripartite(t)) => {
            Ok(pipe(PipelineSource::Tripartite(t.clone()), PipelineId::ApntToNt)? == PipelineAnswer::Flags(apnt_exact(t)))
        }
        (VerifyTarget::Dmt(mode), Case::Coloured(g, delta, o)) => {
            let delta = (*delta).min((g.n() as u64).pow(3));
            let cfg = DmtConfig {
                delta,
                mode,
                charge_global_n: false,
                opts: *o,
            };
            let mut ledger = CostLedger::default();
            Ok(dmt_solve(g, &cfg, &mut ledger)?.answer == dmt_exact(g, delta, *o))
        }
        (VerifyTarget::Tc, Case::Coloured(g, _, o)) => {
            let mut ledger = CostLedger::default();
            Ok(tc_solve(g, *o, &mut ledger)?.answer == tc_exact(g, *o))
        }
        _ => Err(Error::InternalInconsistency(format!("no case generator for {target}"))),
    }
}

fn fails(target: VerifyTarget, case: &Case, opts: &VerifyOptions) -> bool {
    !matches!(check(target, case, opts, &mut ReductionTrace::new()), Ok(true))
}

/// Deletes vertices one at a time while the case still fails, until no
/// single deletion keeps it failing.
fn shrink(target: VerifyTarget, mut case: Case, opts: &VerifyOptions) -> Case {
    'outer: loop {
        if case.vertices() <= 1 {
            return case;
        }
        for v in 0..case.vertices() {
            if let Ok(smaller) = case.without(v) {
                if fails(target, &smaller, opts) {
                    case = smaller;
                    continue 'outer;
                }
            }
        }
        return case;
    }
}

/// Differential campaign: `trials` random instances of at most `max_n`
/// vertices per part, each compared with the exact oracle. The first
/// failing instance is shrunk and, with `out_dir`, written to
/// `counterexample-<target>.txt`.
pub fn verify(target: VerifyTarget, opts: &VerifyOptions) -> Result<VerifyOutcome> {
    let results = par_map(opts.trials, opts.threads, |trial| {
        let seed = trial_seed(opts.seed, 0, trial as u64);
        let case = generate(target, opts.max_n, seed)?;
        let mut trace = ReductionTrace::new();
        let ok = matches!(check(target, &case, opts, &mut trace), Ok(true));
        Ok::<_, Error>((ok, seed, case, trace))
    });
    let mut trace = ReductionTrace::new();
    let mut failures = 0;
    let mut first = None;
    for (trial, r) in results.into_iter().enumerate() {
        let (ok, seed, case, t) = r?;
        trace.merge(&t);
        if !ok {
            failures += 1;
            if first.is_none() {
                first = Some((trial, seed, case));
            }
        }
    }
    let counterexample = match first {
        None => None,
        Some((trial, seed, case)) => {
            let small = shrink(target, case, opts);
            let (text, note) = small.documents();
            let path = match &opts.out_dir {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
                    let p = dir.join(format!("counterexample-{target}.txt"));
                    std::fs::write(&p, &text).map_err(|e| Error::io(&p, e))?;
                    Some(p)
                }
                None => None,
            };
            Some(Counterexample {
                trial,
                seed,
                vertices: small.vertices(),
                note,
                text,
                path,
            })
        }
    };
    Ok(VerifyOutcome {
        target,
        trials: opts.trials,
        failures,
        counterexample,
        trace,
    })
}
