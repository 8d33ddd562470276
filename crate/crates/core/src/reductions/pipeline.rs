//! Composition of the reduction stages with exact leaf solvers.

use std::cell::RefCell;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{
    apnt_via_nt, apsp_via_minplus, minplus_via_apnt, nt_via_zwt_with_targets, ReductionTrace,
    TriangleAnswer, ZWT_TARGETS,
};
use crate::error::{Error, Result};
use crate::instances::{serialize, Instance, MinPlusMatrix, TripartiteGraph, WeightedGraph};
use crate::oracles::{apnt_exact, minplus_exact, nt_exact, zwt_exact, ApspResult, PairFlags};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PipelineId {
    ApspToMm,
    MmToApnt,
    ApntToNt,
    NtToZwt,
    ApspToZwt,
}

impl PipelineId {
    pub const ALL: [PipelineId; 5] = [
        PipelineId::ApspToMm,
        PipelineId::MmToApnt,
        PipelineId::ApntToNt,
        PipelineId::NtToZwt,
        PipelineId::ApspToZwt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PipelineId::ApspToMm => "apsp-to-mm",
            PipelineId::MmToApnt => "mm-to-apnt",
            PipelineId::ApntToNt => "apnt-to-nt",
            PipelineId::NtToZwt => "nt-to-zwt",
            PipelineId::ApspToZwt => "apsp-to-zwt",
        }
    }
}

impl fmt::Display for PipelineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PipelineId {
    type Err = Error;

    /// Accepts `apsp-to-mm`, `apsp->mm`, `apsp→mm` and `minplus` for `mm`.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s
            .trim()
            .to_ascii_lowercase()
            .replace("→", "-to-")
            .replace("->", "-to-")
            .replace("minplus", "mm");
        PipelineId::ALL
            .into_iter()
            .find(|id| id.name() == norm)
            .ok_or_else(|| Error::UnsupportedCombination(format!("unknown pipeline '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineSource {
    Graph(WeightedGraph),
    Matrices(MinPlusMatrix, MinPlusMatrix),
    Tripartite(TripartiteGraph),
}

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineAnswer {
    Distances(ApspResult),
    Product(MinPlusMatrix),
    Flags(PairFlags),
    Triangle(bool),
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    /// Leaf triangle solvers report only yes/no, forcing witness recovery
    /// by subdivision.
    pub decision_only: bool,
    /// Write every intermediate instance here.
    pub dump_dir: Option<PathBuf>,
    /// Use off-by-one ZWT targets. Only for testing the verifier.
    pub mutate: bool,
}

const MUTATED_TARGETS: [i64; 4] = [-2, -3, -4, -5];

struct Dumper {
    dir: PathBuf,
    count: u64,
}

impl Dumper {
    fn write(&mut self, stage: &str, docs: Vec<Instance>) -> Result<()> {
        let text: String = docs.iter().map(serialize).collect();
        let path = self.dir.join(format!("{:06}-{stage}.txt", self.count));
        self.count += 1;
        std::fs::write(&path, text).map_err(|e| Error::io(path, e))
    }
}

fn make_dumper(dir: Option<&Path>) -> Result<Option<RefCell<Dumper>>> {
    dir.map(|d| {
        std::fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
        Ok(RefCell::new(Dumper {
            dir: d.to_path_buf(),
            count: 0,
        }))
    })
    .transpose()
}

fn dump(d: &Option<RefCell<Dumper>>, stage: &str, docs: impl FnOnce() -> Vec<Instance>) -> Result<()> {
    match d {
        Some(d) => d.borrow_mut().write(stage, docs()),
        None => Ok(()),
    }
}

fn mismatch(id: PipelineId, what: &str) -> Error {
    Error::UnsupportedCombination(format!("pipeline {id} needs {what} as source"))
}

/// Runs the reduction stages named by `id` on `source`, using exact oracles
/// as leaf solvers. The trace aggregates the target calls of every stage.
pub fn pipeline_run(
    source: &PipelineSource,
    id: PipelineId,
    opts: &PipelineOptions,
) -> Result<(PipelineAnswer, ReductionTrace)> {
    let dumper = make_dumper(opts.dump_dir.as_deref())?;
    let targets: &[i64] = if opts.mutate { &MUTATED_TARGETS } else { &ZWT_TARGETS };
    let decision_only = opts.decision_only;
    let lift = move |w: Option<[usize; 3]>| {
        if decision_only {
            TriangleAnswer::decision(w.is_some())
        } else {
            TriangleAnswer::from_witness(w)
        }
    };

    let mut t_mm = ReductionTrace::new();
    let mut t_apnt = ReductionTrace::new();
    let mut t_nt = ReductionTrace::new();
    let mut t_zwt = ReductionTrace::new();

    let answer = {
        let mut zwt_leaf = |h: &WeightedGraph| {
            dump(&dumper, "zwt", || vec![h.clone().into()])?;
            zwt_exact(h).map(lift)
        };
        let mut nt_leaf = |g: &WeightedGraph| {
            dump(&dumper, "nt", || vec![g.clone().into()])?;
            nt_exact(g).map(lift)
        };
        let mut apnt_leaf = |t: &TripartiteGraph| {
            dump(&dumper, "apnt", || vec![t.clone().into()])?;
            Ok(apnt_exact(t))
        };
        let mut mm_leaf = |a: &MinPlusMatrix, b: &MinPlusMatrix| {
            dump(&dumper, "minplus", || vec![a.clone().into(), b.clone().into()])?;
            minplus_exact(a, b)
        };

        match (id, source) {
            (PipelineId::ApspToMm, PipelineSource::Graph(g)) => {
                PipelineAnswer::Distances(apsp_via_minplus(g, &mut mm_leaf, &mut t_mm)?)
            }
            (PipelineId::MmToApnt, PipelineSource::Matrices(a, b)) => {
                PipelineAnswer::Product(minplus_via_apnt(a, b, &mut apnt_leaf, &mut t_apnt)?)
            }
            (PipelineId::ApntToNt, PipelineSource::Tripartite(t)) => {
                PipelineAnswer::Flags(apnt_via_nt(t, &mut nt_leaf, &mut t_nt)?)
            }
            (PipelineId::NtToZwt, PipelineSource::Graph(g)) => {
                let ans = nt_via_zwt_with_targets(g, targets, &mut zwt_leaf, &mut t_zwt)?;
                PipelineAnswer::Triangle(ans.found)
            }
            (PipelineId::ApspToZwt, PipelineSource::Graph(g)) => {
                let mut nt = |g: &WeightedGraph| {
                    dump(&dumper, "nt", || vec![g.clone().into()])?;
                    nt_via_zwt_with_targets(g, targets, &mut zwt_leaf, &mut t_zwt)
                };
                let mut apnt = |t: &TripartiteGraph| {
                    dump(&dumper, "apnt", || vec![t.clone().into()])?;
                    apnt_via_nt(t, &mut nt, &mut t_nt)
                };
                let mut mm = |a: &MinPlusMatrix, b: &MinPlusMatrix| {
                    dump(&dumper, "minplus", || vec![a.clone().into(), b.clone().into()])?;
                    minplus_via_apnt(a, b, &mut apnt, &mut t_apnt)
                };
                PipelineAnswer::Distances(apsp_via_minplus(g, &mut mm, &mut t_mm)?)
            }
            (PipelineId::MmToApnt, _) => return Err(mismatch(id, "two min-plus matrices")),
            (PipelineId::ApntToNt, _) => return Err(mismatch(id, "a tripartite graph")),
            _ => return Err(mismatch(id, "a weighted graph")),
        }
    };

    let mut trace = t_mm;
    for t in [&t_apnt, &t_nt, &t_zwt] {
        trace.merge(t);
    }
    Ok((answer, trace))
}
