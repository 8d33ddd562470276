use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fgt_core::harness::{
    bench, parse_csv, render, verify, BenchParams, Colouring, DeltaSpec, Problem, ReportFormat, ScalingReport,
    VerifyOptions, VerifyTarget,
};
use fgt_core::instances::{
    gen_apsp_instance, gen_coloured_graph, gen_minplus_matrix, gen_planted_dmt, gen_tripartite, gen_undirected_weighted,
    parse_all, serialize, weight_bound, ColouredGraph, Instance, MinPlusMatrix, TripartiteGraph, WeightedGraph, INF,
};
use fgt_core::oracles::{
    apnt_exact, apsp_exact, dmt_exact, minplus_exact, nt_exact, tc_exact, zwt_exact, PairFlags, TripleOptions,
};
use fgt_core::qcost::{CostLedger, CostModel, OMEGA_DEFAULT};
use fgt_core::reductions::{
    minplus_via_apsp, pipeline_run, PipelineAnswer, PipelineId, PipelineOptions, PipelineSource, ReductionTrace,
};
use fgt_core::triangles::{dmt_solve, tc_solve, DmtConfig, DmtMode};
use fgt_core::{Error, Result};

#[derive(Parser)]
#[command(name = "fgt", version, about = "Fine-grained reductions, triangle algorithms and cost-model benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Solve an instance file.
    Solve(SolveArgs),
    /// Run a reduction pipeline on an instance file.
    Reduce(ReduceArgs),
    /// Differential test of a reduction or algorithm against its oracle.
    Verify(VerifyArgs),
    /// Scaling benchmark with a log-log fit of ledger costs.
    Bench(BenchArgs),
    /// Convert or refit a saved report.
    Report(ReportArgs),
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value_t = OMEGA_DEFAULT)]
    omega: f64,
    /// Multiply charges by the success-probability boost factor.
    #[arg(long)]
    boost: bool,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    distinct_triples: bool,
    /// Charge n^ω for every matrix step of the large-α search.
    #[arg(long)]
    charge_global_n: bool,
}

impl ModelArgs {
    fn model(&self) -> CostModel {
        CostModel {
            omega_model: self.omega,
            boost_enabled: self.boost,
        }
    }

    fn opts(&self) -> TripleOptions {
        TripleOptions {
            distinct_triples: self.distinct_triples,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    problem: String,
    #[arg(long)]
    n: usize,
    /// Weight exponent: weights lie in [-⌈n^c⌉, ⌈n^c⌉].
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge probability.
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Colour count for dmt/tc; defaults to ⌈n^{1/3}⌉.
    #[arg(long)]
    colours: Option<usize>,
    /// Plant this many disjoint {0,1,2} triangles (dmt only).
    #[arg(long)]
    plant_delta: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    problem: String,
    /// exact, small, large, auto, vtgs or reduction:<pipeline>.
    #[arg(long, default_value = "exact")]
    algo: String,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    delta: Option<u64>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    dump_dir: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// apsp-to-mm, mm-to-apnt, apnt-to-nt, nt-to-zwt or apsp-to-zwt.
    #[arg(long)]
    pipeline: String,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    decision_only: bool,
    #[arg(long)]
    dump_dir: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// A pipeline id, mm-to-apsp, dmt-small, dmt-large, dmt-auto or tc.
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Break the zero-weight triangle targets on purpose.
    #[arg(long)]
    mutate: bool,
    #[arg(long)]
    decision_only: bool,
    /// Where to write a shrunk counterexample.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    problem: String,
    #[arg(long, default_value = "auto")]
    algo: String,
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, conflicts_with = "alpha")]
    delta: Option<u64>,
    /// Use Δ = round(n^α) at each size.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    edge_prob: f64,
    /// balanced, heavy or auto.
    #[arg(long, default_value = "auto")]
    colouring: String,
    #[command(flatten)]
    model: ModelArgs,
    /// Leave wall_seconds at 0 so reports are byte-identical across runs.
    #[arg(long)]
    no_wall: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// A JSON or CSV report.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Outcome {
    Done,
    Decision(bool),
    VerifyFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Solve(a) => run_solve(a),
        Command::Reduce(a) => run_reduce(a),
        Command::Verify(a) => run_verify(a),
        Command::Bench(a) => run_bench(a),
        Command::Report(a) => run_report(a),
    };
    match result {
        Ok(Outcome::Done) | Ok(Outcome::Decision(true)) => ExitCode::SUCCESS,
        Ok(Outcome::Decision(false)) => ExitCode::from(1),
        Ok(Outcome::VerifyFailed) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn write_json(out: Option<&Path>, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    write_out(out, &s)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn cube_root_ceil(n: usize) -> usize {
    let mut k = 1;
    while k * k * k < n {
        k += 1;
    }
    k
}

fn problem(s: &str) -> Result<Problem> {
    s.parse()
}

fn run_gen(a: GenArgs) -> Result<Outcome> {
    let docs: Vec<Instance> = match problem(&a.problem)? {
        Problem::Apsp => vec![gen_apsp_instance(a.n, a.c, a.density, a.seed)?.into()],
        Problem::Minplus => vec![
            gen_minplus_matrix(a.n, a.c, 1.0 - a.density, a.seed)?.into(),
            gen_minplus_matrix(a.n, a.c, 1.0 - a.density, a.seed.wrapping_add(1))?.into(),
        ],
        Problem::Apnt => vec![gen_tripartite([a.n; 3], weight_bound(a.n, a.c), a.density, a.seed)?.into()],
        Problem::Nt | Problem::Zwt => vec![gen_undirected_weighted(a.n, a.c, a.density, a.seed)?.into()],
        Problem::Dmt | Problem::Tc => {
            let k = a.colours.unwrap_or_else(|| cube_root_ceil(a.n).min(a.n.max(1)));
            match a.plant_delta {
                Some(d) => vec![gen_planted_dmt(a.n, k, d, (0, 1, 2), a.seed)?.graph.into()],
                None => vec![gen_coloured_graph(a.n, k, a.density, a.seed)?.into()],
            }
        }
    };
    let text: String = docs.iter().map(serialize).collect();
    write_out(a.out.as_deref(), &text)?;
    Ok(Outcome::Done)
}

fn load(path: &Path) -> Result<Vec<Instance>> {
    parse_all(&read(path)?)
}

fn one_graph(docs: Vec<Instance>) -> Result<WeightedGraph> {
    match docs.into_iter().next() {
        Some(Instance::Weighted(g)) => Ok(g),
        _ => Err(Error::InvalidInstance("expected a weighted graph".into())),
    }
}

fn two_matrices(docs: Vec<Instance>) -> Result<(MinPlusMatrix, MinPlusMatrix)> {
    let mut it = docs.into_iter();
    match (it.next(), it.next()) {
        (Some(Instance::MinPlus(a)), Some(Instance::MinPlus(b))) => Ok((a, b)),
        (Some(Instance::MinPlus(a)), None) => Ok((a.clone(), a)),
        _ => Err(Error::InvalidInstance("expected one or two min-plus matrices".into())),
    }
}

fn tripartite(docs: Vec<Instance>) -> Result<TripartiteGraph> {
    match docs.into_iter().next() {
        Some(Instance::Tripartite(t)) => Ok(t),
        _ => Err(Error::InvalidInstance("expected a tripartite graph".into())),
    }
}

fn coloured(docs: Vec<Instance>) -> Result<ColouredGraph> {
    match docs.into_iter().next() {
        Some(Instance::Coloured(g)) => Ok(g),
        _ => Err(Error::InvalidInstance("expected a coloured graph".into())),
    }
}

fn matrix_json(n: usize, entries: &[i64]) -> Value {
    let rows: Vec<Value> = entries
        .chunks(n.max(1))
        .map(|r| Value::Array(r.iter().map(|&x| if x == INF { Value::Null } else { json!(x) }).collect()))
        .collect();
    Value::Array(rows)
}

fn flags_json(f: &PairFlags) -> Value {
    let pairs: Vec<Value> = (0..f.rows())
        .flat_map(|a| (0..f.cols()).filter(move |&b| f.get(a, b)).map(move |b| json!([a, b])))
        .collect();
    json!({ "count": f.count(), "pairs": pairs })
}

fn answer_json(ans: &PipelineAnswer) -> (Value, Option<bool>) {
    match ans {
        PipelineAnswer::Distances(d) => (json!({ "distances": matrix_json(d.n(), d.distances()) }), None),
        PipelineAnswer::Product(m) => (json!({ "product": matrix_json(m.n(), m.entries()) }), None),
        PipelineAnswer::Flags(f) => (json!({ "flags": flags_json(f) }), None),
        PipelineAnswer::Triangle(b) => (json!({ "answer": b }), Some(*b)),
    }
}

fn pipeline_source(id: PipelineId, docs: Vec<Instance>) -> Result<PipelineSource> {
    Ok(match id {
        PipelineId::MmToApnt => {
            let (a, b) = two_matrices(docs)?;
            PipelineSource::Matrices(a, b)
        }
        PipelineId::ApntToNt => PipelineSource::Tripartite(tripartite(docs)?),
        _ => PipelineSource::Graph(one_graph(docs)?),
    })
}

fn run_solve(a: SolveArgs) -> Result<Outcome> {
    let p = problem(&a.problem)?;
    let docs = load(&a.input)?;
    let unsupported = || Error::UnsupportedCombination(format!("algorithm '{}' does not solve '{}'", a.algo, a.problem));

    if let Some(id) = a.algo.strip_prefix("reduction:") {
        if p == Problem::Minplus && matches!(id, "mm-to-apsp" | "minplus-to-apsp") {
            let (x, y) = two_matrices(docs)?;
            let mut trace = ReductionTrace::new();
            let m = minplus_via_apsp(&x, &y, &mut |g: &WeightedGraph| apsp_exact(g), &mut trace)?;
            write_json(
                a.out.as_deref(),
                &json!({ "problem": "minplus", "algo": a.algo, "product": matrix_json(m.n(), m.entries()), "trace": trace.to_json() }),
            )?;
            return Ok(Outcome::Done);
        }
        let id: PipelineId = id.parse()?;
        let fits = matches!(
            (p, id),
            (Problem::Apsp, PipelineId::ApspToMm | PipelineId::ApspToZwt)
                | (Problem::Minplus, PipelineId::MmToApnt)
                | (Problem::Apnt, PipelineId::ApntToNt)
                | (Problem::Nt, PipelineId::NtToZwt)
        );
        if !fits {
            return Err(unsupported());
        }
        let opts = PipelineOptions {
            dump_dir: a.dump_dir.clone(),
            ..Default::default()
        };
        let (ans, trace) = pipeline_run(&pipeline_source(id, docs)?, id, &opts)?;
        let (mut v, decision) = answer_json(&ans);
        v["problem"] = json!(a.problem);
        v["algo"] = json!(a.algo);
        v["trace"] = trace.to_json();
        write_json(a.out.as_deref(), &v)?;
        return Ok(decision.map_or(Outcome::Done, Outcome::Decision));
    }

    let mut ledger = CostLedger::new(a.model.model());
    let (mut v, decision) = match (p, a.algo.as_str()) {
        (Problem::Apsp, "exact") => {
            let g = one_graph(docs)?;
            let d = apsp_exact(&g)?;
            (json!({ "distances": matrix_json(d.n(), d.distances()) }), None)
        }
        (Problem::Minplus, "exact") => {
            let (x, y) = two_matrices(docs)?;
            let m = minplus_exact(&x, &y)?;
            (json!({ "product": matrix_json(m.n(), m.entries()) }), None)
        }
        (Problem::Apnt, "exact") => (json!({ "flags": flags_json(&apnt_exact(&tripartite(docs)?)) }), None),
        (Problem::Nt | Problem::Zwt, "exact") => {
            let g = one_graph(docs)?;
            let w = if p == Problem::Nt { nt_exact(&g)? } else { zwt_exact(&g)? };
            (json!({ "answer": w.is_some(), "witness": w }), Some(w.is_some()))
        }
        (Problem::Dmt, algo) => {
            let g = coloured(docs)?;
            let delta = a
                .delta
                .ok_or_else(|| Error::UnsupportedCombination("dmt needs --delta".into()))?;
            if algo == "exact" {
                let ans = dmt_exact(&g, delta, a.model.opts());
                (json!({ "answer": ans }), Some(ans))
            } else {
                let mode: DmtMode = algo.parse()?;
                let cfg = DmtConfig {
                    delta,
                    mode,
                    charge_global_n: a.model.charge_global_n,
                    opts: a.model.opts(),
                };
                let out = dmt_solve(&g, &cfg, &mut ledger)?;
                (
                    json!({
                        "answer": out.answer,
                        "mode": out.mode.to_string(),
                        "alpha": cfg.alpha(g.n()),
                        "witness": out.witness.map(|t| t.to_string()),
                        "step1_triples": out.step1_triples,
                        "step2_triples": out.step2_triples,
                        "queries": out.queries,
                        "ledger": ledger.to_json(),
                    }),
                    Some(out.answer),
                )
            }
        }
        (Problem::Tc, "exact") => {
            let ans = tc_exact(&coloured(docs)?, a.model.opts());
            (json!({ "answer": ans }), Some(ans))
        }
        (Problem::Tc, "vtgs" | "auto") => {
            let g = coloured(docs)?;
            let out = tc_solve(&g, a.model.opts(), &mut ledger)?;
            (
                json!({
                    "answer": out.answer,
                    "missing": out.missing.map(|t| t.to_string()),
                    "queries": out.queries,
                    "ledger": ledger.to_json(),
                }),
                Some(out.answer),
            )
        }
        _ => return Err(unsupported()),
    };
    v["problem"] = json!(a.problem);
    v["algo"] = json!(a.algo);
    write_json(a.out.as_deref(), &v)?;
    Ok(decision.map_or(Outcome::Done, Outcome::Decision))
}

fn run_reduce(a: ReduceArgs) -> Result<Outcome> {
    let id: PipelineId = a.pipeline.parse()?;
    let source = pipeline_source(id, load(&a.input)?)?;
    let opts = PipelineOptions {
        decision_only: a.decision_only,
        dump_dir: a.dump_dir,
        mutate: false,
    };
    let (ans, trace) = pipeline_run(&source, id, &opts)?;
    let (mut v, _) = answer_json(&ans);
    v["pipeline"] = json!(id.name());
    v["trace"] = trace.to_json();
    write_json(a.out.as_deref(), &v)?;
    Ok(Outcome::Done)
}

fn run_verify(a: VerifyArgs) -> Result<Outcome> {
    let target: VerifyTarget = a.target.parse()?;
    let opts = VerifyOptions {
        trials: a.trials,
        max_n: a.max_n,
        seed: a.seed,
        mutate: a.mutate,
        decision_only: a.decision_only,
        out_dir: a.out_dir,
        threads: a.threads,
    };
    let out = verify(target, &opts)?;
    let cx = out.counterexample.as_ref().map(|c| {
        json!({
            "trial": c.trial,
            "seed": c.seed,
            "vertices": c.vertices,
            "note": c.note,
            "path": c.path.as_ref().map(|p| p.display().to_string()),
            "instance": c.text,
        })
    });
    write_json(
        None,
        &json!({
            "target": target.to_string(),
            "trials": out.trials,
            "failures": out.failures,
            "passed": out.passed(),
            "calls": out.trace.call_counts(),
            "counterexample": cx,
        }),
    )?;
    Ok(if out.passed() { Outcome::Done } else { Outcome::VerifyFailed })
}

fn run_bench(a: BenchArgs) -> Result<Outcome> {
    let p = problem(&a.problem)?;
    let colouring = match a.colouring.as_str() {
        "balanced" => Colouring::Balanced,
        "heavy" => Colouring::Heavy,
        "auto" => Colouring::Auto,
        other => return Err(Error::UnsupportedCombination(format!("unknown colouring '{other}'"))),
    };
    let delta = match (a.delta, a.alpha) {
        (_, Some(x)) => DeltaSpec::Power(x),
        (Some(d), None) => DeltaSpec::Fixed(d),
        (None, None) => DeltaSpec::Fixed(1),
    };
    let params = BenchParams {
        delta,
        edge_prob: a.edge_prob,
        colouring,
        model: a.model.model(),
        charge_global_n: a.model.charge_global_n,
        opts: a.model.opts(),
        record_wall: !a.no_wall,
        threads: a.threads,
    };
    let format: ReportFormat = a.format.parse()?;
    let report = bench(p, &a.algo, &a.sizes, a.trials, a.seed, &params)?;
    write_out(a.out.as_deref(), &render(&report, format)?)?;
    Ok(Outcome::Done)
}

fn run_report(a: ReportArgs) -> Result<Outcome> {
    let text = read(&a.input)?;
    let mut report: ScalingReport = if text.trim_start().starts_with('{') {
        serde_json::from_str(&text)?
    } else {
        parse_csv(&text)?
    };
    report.refit();
    let format: ReportFormat = a.format.parse()?;
    write_out(a.out.as_deref(), &render(&report, format)?)?;
    Ok(Outcome::Done)
}
