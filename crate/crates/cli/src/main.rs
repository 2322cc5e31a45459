use std::fmt::Write as _;
use std::io::{ErrorKind, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use twoec::cover::{canonicalize, cover_stats, min_two_edge_cover};
use twoec::graph_core::decompose;
use twoec::instances::{generate, InstanceSpec};
use twoec::io::{edges_in, read_graph, to_dot, write_edge_list, write_edge_subset, write_file};
use twoec::oracle::{exact_2ecss, verify_2ec_spanning, OracleLimits};
use twoec::pipeline::{ratio_envelope_check, reduce, solve, SolveParams, SolveReport};
use twoec::reduction::{structured_certificate, ReductionParams};
use twoec::{EdgeSet, Error, Graph, Rational};

#[derive(Parser)]
#[command(name = "twoec", version, about = "Minimum 2-edge-connected spanning subgraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and print the JSON report.
    Solve {
        file: PathBuf,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Compute the exact optimum when the instance is small enough.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_parser = parse_rational)]
        epsilon: Option<Rational>,
        #[arg(long)]
        contractible_bound: Option<usize>,
        #[arg(long)]
        exact_base_bound: Option<usize>,
        /// Write the solution as an edge list, readable by `verify`.
        #[arg(long)]
        solution: Option<PathBuf>,
        /// Write a DOT drawing with the solution in bold.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check that a solution edge list is a 2EC spanning subgraph of a graph.
    Verify { graph: PathBuf, solution: PathBuf },
    /// Print a minimum 2-edge-cover.
    Cover {
        file: PathBuf,
        /// Canonicalize the cover before printing.
        #[arg(long)]
        canonical: bool,
    },
    /// Run the reduction and print the structured certificate and the trace.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        exact_base_bound: Option<usize>,
    },
    /// Solve exactly by branch and bound.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = OracleLimits::default().max_nodes)]
        max_nodes: usize,
        #[arg(long, default_value_t = OracleLimits::default().max_edges)]
        max_edges: usize,
        #[arg(long, default_value_t = OracleLimits::default().time_budget_ms)]
        time_budget_ms: u64,
    },
    /// Generate an instance, e.g. `petersen`, `cycle:7`, `random_2ec:10,4,3`, `fig:5b`.
    Gen {
        spec: String,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write a DOT drawing.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Solve every `.txt` instance of a directory and print a table.
    Bench {
        dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Skip the exact optimum.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Check the worst case of the ratio envelope in exact arithmetic.
    CheckRatio,
}

enum Failure {
    /// Bad input or usage: exit code 2.
    Input(String),
    /// Verification or solver failure: exit code 1.
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Io(_) | Error::BadSpec(_) | Error::NotTwoEc(_) | Error::UncoverableNode(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Solver(e.to_string()),
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| format!("`{s}` is not a rational: {e}"))
}

fn reduction_params(
    epsilon: Option<Rational>,
    contractible_bound: Option<usize>,
    exact_base_bound: Option<usize>,
) -> ReductionParams {
    let mut p = ReductionParams::default();
    if let Some(e) = epsilon {
        p.epsilon = e;
    }
    if let Some(s) = contractible_bound {
        p.contractible_bound = s;
    }
    if let Some(k) = exact_base_bound {
        p.exact_base_bound = k;
    }
    p
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("a JSON value always prints")
}

/// Print to stdout; a reader that closed the pipe early is not an error.
fn emit(text: &str) -> Result<(), Failure> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(Failure::Input(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn edge_pairs(g: &Graph, s: &EdgeSet) -> Vec<(usize, usize)> {
    s.iter().map(|&e| g.ends(e)).collect()
}

fn instance_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { file, json, oracle, epsilon, contractible_bound, exact_base_bound, solution, dot } => {
            let g = read_graph(&file)?;
            let p = SolveParams {
                reduction: reduction_params(epsilon, contractible_bound, exact_base_bound),
                oracle: oracle.then(OracleLimits::default),
            };
            let report = solve(&g, &instance_id(&file), &p)?;
            let text = pretty(&json!(report));
            emit(&text)?;
            if let Some(out) = json {
                write_file(&out, &format!("{text}\n"))?;
            }
            let s: EdgeSet = report.solution.iter().copied().collect();
            if let Some(out) = solution {
                write_file(&out, &write_edge_subset(&g, &s))?;
            }
            if let Some(out) = dot {
                write_file(&out, &to_dot(&g, Some(&s)))?;
            }
            Ok(())
        }
        Command::Verify { graph, solution } => {
            let g = read_graph(&graph)?;
            let s = edges_in(&g, &read_graph(&solution)?)?;
            let v = verify_2ec_spanning(&g, &s);
            if v.ok {
                emit(&format!("ok: {} edges form a 2-edge-connected spanning subgraph", s.len()))?;
                Ok(())
            } else {
                Err(Failure::Solver(format!("not a 2-edge-connected spanning subgraph: {}", json!(v.witness))))
            }
        }
        Command::Cover { file, canonical } => {
            let g = read_graph(&file)?;
            let mut h = min_two_edge_cover(&g)?;
            if canonical {
                h = canonicalize(&g, &h)?;
            }
            let stats = cover_stats(&decompose(&g, &h));
            emit(&pretty(&json!({ "size": h.len(), "stats": stats, "edges": edge_pairs(&g, &h) })))?;
            Ok(())
        }
        Command::Reduce { file, exact_base_bound } => {
            let g = read_graph(&file)?;
            let p = SolveParams { reduction: reduction_params(None, None, exact_base_bound), oracle: None };
            p.reduction.validate()?;
            let r = reduce(&g, &p)?;
            let out = json!({
                "certificate": structured_certificate(&g, &p.reduction),
                "solution_size": r.solution.len(),
                "solution": edge_pairs(&g, &r.solution),
                "structured_runs": r.runs,
                "violations": r.violations,
                "trace": r.trace,
            });
            emit(&pretty(&out))?;
            Ok(())
        }
        Command::Oracle { file, max_nodes, max_edges, time_budget_ms } => {
            let g = read_graph(&file)?;
            let lim = OracleLimits { max_nodes, max_edges, time_budget_ms };
            let s = exact_2ecss(&g, &lim)?;
            emit(&pretty(&json!({ "opt": s.len(), "solution": edge_pairs(&g, &s) })))?;
            Ok(())
        }
        Command::Gen { spec, output, dot } => {
            let spec: InstanceSpec = spec.parse()?;
            let g = generate(&spec)?;
            write_file(&output, &write_edge_list(&g))?;
            if let Some(out) = dot {
                write_file(&out, &to_dot(&g, None))?;
            }
            eprintln!("{spec}: {} nodes, {} edges -> {}", g.n(), g.m(), output.display());
            Ok(())
        }
        Command::Bench { dir, jobs, no_oracle } => {
            let (table, failed) = bench(&dir, jobs, !no_oracle)?;
            emit(table.trim_end())?;
            if failed > 0 {
                return Err(Failure::Solver(format!("{failed} instance(s) failed")));
            }
            Ok(())
        }
        Command::CheckRatio => {
            let r = ratio_envelope_check()?;
            emit(&format!(
                "worst-case factor {}\nattained at t = {}, b = {}\ngrid maximum {} over {} points (step {})",
                r.worst, r.argmax_t, r.argmax_b, r.grid_max, r.grid_points, r.grid_step
            ))?;
            Ok(())
        }
    }
}

fn bench(dir: &Path, jobs: usize, oracle: bool) -> Result<(String, usize), Failure> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::Input(format!("thread pool: {e}")))?;
    let p = SolveParams { oracle: oracle.then(OracleLimits::default), ..SolveParams::default() };
    let results: Vec<Result<SolveReport, String>> = pool.install(|| {
        files
            .par_iter()
            .map(|f| {
                let g = read_graph(f).map_err(|e| e.to_string())?;
                solve(&g, &instance_id(f), &p).map_err(|e| e.to_string())
            })
            .collect()
    });
    let mut table = format!(
        "{:<28} {:>5} {:>5} {:>6} {:>6} {:>6} {:>8}  {}\n",
        "instance", "n", "m", "size", "lb", "opt", "ratio", "regime"
    );
    let mut failed = 0;
    for (f, r) in files.iter().zip(results) {
        match r {
            Ok(rep) => {
                let opt = rep.opt.map_or("-".to_string(), |o| o.to_string());
                let ratio = rep.ratio_vs_opt.unwrap_or(rep.ratio_vs_lower_bound);
                let ratio = *ratio.numer() as f64 / *ratio.denom() as f64;
                let _ = writeln!(
                    table,
                    "{:<28} {:>5} {:>5} {:>6} {:>6} {:>6} {:>8.4}  {}",
                    rep.instance_id, rep.n, rep.m, rep.solution_size, rep.lower_bound, opt, ratio, rep.regime_chosen
                );
            }
            Err(e) => {
                failed += 1;
                let _ = writeln!(table, "{:<28} error: {e}", instance_id(f));
            }
        }
    }
    Ok((table, failed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
