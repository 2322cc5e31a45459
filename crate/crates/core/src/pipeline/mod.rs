//! End-to-end solver: recursive reduction around the better of both
//! regimes, the factor-2 baseline, report assembly and the ratio envelope.

mod baseline;
mod envelope;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use baseline::baseline_2approx;
pub use envelope::{ratio_envelope_check, EnvelopeReport, RatioEnvelope};

use crate::cover::{canonicalize, cover_stats, min_two_edge_cover, CoverStats};
use crate::credit::LogEntry;
use crate::error::{Error, Result};
use crate::few_triangles::solve_few;
use crate::graph_core::{decompose, is_two_edge_connected, EdgeId, EdgeSet, Graph};
use crate::many_triangles::solve_many;
use crate::oracle::{exact_2ecss, verify_2ec_spanning, OracleLimits};
use crate::reduction::{red_solve, structured_certificate, ReductionParams, ReductionTrace, StructuredCertificate, Step};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Many,
    Few,
    ExactBase,
    ReducedComposite,
    /// The factor-2 baseline was returned.
    Baseline,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Regime::Many => "many",
            Regime::Few => "few",
            Regime::ExactBase => "exact_base",
            Regime::ReducedComposite => "reduced_composite",
            Regime::Baseline => "baseline",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveParams {
    pub reduction: ReductionParams,
    /// When set, the exact optimum is computed for the input and for every
    /// structured instance within these limits.
    pub oracle: Option<OracleLimits>,
}

/// Outcome of one regime on one structured instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeRun {
    pub regime: Regime,
    pub solution_size: Option<usize>,
    pub lower_bound: Option<usize>,
    /// Light triangles of the core-triangle solution (triangle-rich regime).
    pub core_triangles: Option<usize>,
    pub alpha_s: Option<usize>,
    /// Number of transformation steps checked by the cost monitor.
    pub steps: usize,
    /// Bridge counts, then component counts, as the regime recorded them.
    pub progress: Vec<usize>,
    pub progress_strict: bool,
    pub cost_monotone: bool,
    pub error: Option<String>,
    pub structural_error: bool,
    pub cost_increase: bool,
    #[serde(skip)]
    pub log: Vec<LogEntry>,
}

impl RegimeRun {
    fn failed(regime: Regime, e: &Error) -> Self {
        RegimeRun {
            regime,
            solution_size: None,
            lower_bound: None,
            core_triangles: None,
            alpha_s: None,
            steps: 0,
            progress: Vec::new(),
            progress_strict: true,
            cost_monotone: true,
            error: Some(e.to_string()),
            structural_error: e.is_structural(),
            cost_increase: matches!(e, Error::CostIncrease { .. }),
            log: Vec::new(),
        }
    }

    fn succeeded(regime: Regime, size: usize, lower_bound: usize, traces: &[&[usize]], log: Vec<LogEntry>) -> Self {
        let progress_strict = traces.iter().all(|t| t.windows(2).all(|w| w[1] < w[0]));
        RegimeRun {
            regime,
            solution_size: Some(size),
            lower_bound: Some(lower_bound),
            core_triangles: None,
            alpha_s: None,
            steps: log.len(),
            progress: traces.concat(),
            progress_strict,
            cost_monotone: log.iter().all(|l| l.delta >= Rational::from_integer(0)),
            error: None,
            structural_error: false,
            cost_increase: false,
            log,
        }
    }
}

/// One call of the structured solver inside the reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredRun {
    pub n: usize,
    pub m: usize,
    pub cover_size: usize,
    pub stats: CoverStats,
    pub certificate: StructuredCertificate,
    /// Exact optimum of this instance, when the oracle was requested and admitted it.
    pub opt: Option<usize>,
    pub many: RegimeRun,
    pub few: RegimeRun,
    pub chosen: Regime,
    pub solution_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub instance_id: String,
    pub n: usize,
    pub m: usize,
    pub solution_size: usize,
    pub opt: Option<usize>,
    pub cover_size: usize,
    pub stats: CoverStats,
    pub regime_chosen: Regime,
    pub lower_bound: usize,
    #[serde(with = "crate::serde_rational")]
    pub ratio_vs_lower_bound: Rational,
    #[serde(with = "crate::serde_rational::option")]
    pub ratio_vs_opt: Option<Rational>,
    pub invariant_log: Vec<LogEntry>,
    pub wall_time_ms: u64,
    pub fallback_used: bool,
    pub baseline_size: usize,
    /// Structural failures met on the way, in order.
    pub violations: Vec<String>,
    pub reduction_steps: usize,
    pub structured_runs: Vec<StructuredRun>,
    pub solution: Vec<EdgeId>,
}

fn optimum(g: &Graph, lim: Option<&OracleLimits>) -> Result<Option<usize>> {
    let Some(lim) = lim else { return Ok(None) };
    match exact_2ecss(g, lim) {
        Ok(s) => Ok(Some(s.len())),
        Err(Error::LimitExceeded(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn run_many(g: &Graph, h: &EdgeSet) -> (RegimeRun, Option<EdgeSet>) {
    match solve_many(g, h) {
        Ok(out) => {
            let mut run = RegimeRun::succeeded(Regime::Many, out.solution.len(), out.lower_bound, &[&out.component_trace], out.log);
            run.core_triangles = Some(out.core_triangle.triangles.len());
            run.alpha_s = Some(out.refined.alpha_s);
            (run, Some(out.solution))
        }
        Err(e) => (RegimeRun::failed(Regime::Many, &e), None),
    }
}

fn run_few(g: &Graph, h: &EdgeSet) -> (RegimeRun, Option<EdgeSet>) {
    match solve_few(g, h) {
        Ok(out) => {
            let traces: [&[usize]; 2] = [&out.bridge_trace, &out.component_trace];
            let run = RegimeRun::succeeded(Regime::Few, out.solution.len(), out.lower_bound, &traces, out.log);
            (run, Some(out.solution))
        }
        Err(e) => (RegimeRun::failed(Regime::Few, &e), None),
    }
}

/// The structured solver: a canonical minimum 2-edge-cover handed to both
/// regimes, keeping the smaller result. When both regimes hit a structural
/// failure the baseline answers for this instance.
fn structured_solve(
    g: &Graph,
    p: &SolveParams,
    runs: &mut Vec<StructuredRun>,
    violations: &mut Vec<String>,
) -> Result<EdgeSet> {
    let h = min_two_edge_cover(g)?;
    let certificate = structured_certificate(g, &p.reduction);
    let opt = optimum(g, p.oracle.as_ref())?;
    let h = match canonicalize(g, &h) {
        Ok(c) => c,
        Err(e) if e.is_structural() => {
            violations.push(format!("canonicalize: {e}"));
            let s = baseline_2approx(g)?;
            let failed = RegimeRun::failed(Regime::Many, &e);
            runs.push(StructuredRun {
                n: g.n(),
                m: g.m(),
                cover_size: h.len(),
                stats: cover_stats(&decompose(g, &h)),
                certificate,
                opt,
                many: failed.clone(),
                few: RegimeRun { regime: Regime::Few, ..failed },
                chosen: Regime::Baseline,
                solution_size: s.len(),
            });
            return Ok(s);
        }
        Err(e) => return Err(e),
    };
    let (many, s_many) = run_many(g, &h);
    let (few, s_few) = run_few(g, &h);
    for run in [&many, &few] {
        if let Some(e) = &run.error {
            if !run.structural_error {
                return Err(Error::StructureViolation(format!("{} regime: {e}", run.regime)));
            }
            violations.push(format!("{} regime: {e}", run.regime));
        }
    }
    let (chosen, s) = match (s_many, s_few) {
        (Some(a), Some(b)) if b.len() < a.len() => (Regime::Few, b),
        (Some(a), _) => (Regime::Many, a),
        (None, Some(b)) => (Regime::Few, b),
        (None, None) => (Regime::Baseline, baseline_2approx(g)?),
    };
    runs.push(StructuredRun {
        n: g.n(),
        m: g.m(),
        cover_size: h.len(),
        stats: cover_stats(&decompose(g, &h)),
        certificate,
        opt,
        many,
        few,
        chosen,
        solution_size: s.len(),
    });
    Ok(s)
}

/// A reduction run with the structured solver of the pipeline.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub solution: EdgeSet,
    pub trace: ReductionTrace,
    pub runs: Vec<StructuredRun>,
    /// Structural failures absorbed inside structured instances.
    pub violations: Vec<String>,
}

/// Run the recursive reduction, solving each structured instance with the
/// better of both regimes. Errors are not absorbed at this level.
pub fn reduce(g: &Graph, p: &SolveParams) -> Result<Reduction> {
    let mut runs = Vec::new();
    let mut violations = Vec::new();
    let (solution, trace) = reduce_into(g, p, &mut runs, &mut violations)?;
    Ok(Reduction { solution, trace, runs, violations })
}

fn reduce_into(
    g: &Graph,
    p: &SolveParams,
    runs: &mut Vec<StructuredRun>,
    violations: &mut Vec<String>,
) -> Result<(EdgeSet, ReductionTrace)> {
    let mut solver = |gs: &Graph| structured_solve(gs, p, runs, violations);
    red_solve(g, &p.reduction, &mut solver)
}

/// Solve 2-ECSS on a 2EC graph and assemble a verified report.
pub fn solve(g: &Graph, instance_id: &str, p: &SolveParams) -> Result<SolveReport> {
    let start = Instant::now();
    p.reduction.validate()?;
    if !is_two_edge_connected(g, &g.all_edges()) {
        return Err(Error::NotTwoEc(format!("instance {instance_id}")));
    }
    let h = if g.n() <= 1 { EdgeSet::new() } else { min_two_edge_cover(g)? };
    let stats = cover_stats(&decompose(g, &h));
    let baseline = baseline_2approx(g)?;
    let opt = optimum(g, p.oracle.as_ref())?;

    let mut runs = Vec::new();
    let mut violations = Vec::new();
    let reduced = reduce_into(g, p, &mut runs, &mut violations);
    let mut fallback_used = runs.iter().any(|r| r.chosen == Regime::Baseline);
    let (mut solution, mut regime, mut lower_bound, reduction_steps) = match reduced {
        Ok((s, trace)) if verify_2ec_spanning(g, &s).ok => {
            let root = trace.root().map(|r| &r.step);
            let (regime, lower_bound) = match root {
                Some(Step::ExactBase) => (Regime::ExactBase, s.len()),
                Some(Step::StructuredSolve { .. }) if runs.len() == 1 => {
                    let run = &runs[0];
                    let lb = [&run.many, &run.few].iter().filter_map(|r| r.lower_bound).max().unwrap_or(0);
                    (run.chosen, lb.max(h.len()))
                }
                _ => (Regime::ReducedComposite, h.len()),
            };
            (s, regime, lower_bound, trace.nodes.len())
        }
        Ok((s, _)) => {
            let w = verify_2ec_spanning(g, &s).witness;
            violations.push(format!("reduction output failed verification: {w:?}"));
            fallback_used = true;
            (baseline.clone(), Regime::Baseline, h.len(), 0)
        }
        Err(e) if e.is_structural() => {
            violations.push(format!("reduction: {e}"));
            fallback_used = true;
            (baseline.clone(), Regime::Baseline, h.len(), 0)
        }
        Err(e) => return Err(e),
    };
    if baseline.len() < solution.len() {
        solution = baseline.clone();
        regime = Regime::Baseline;
        lower_bound = h.len();
    }
    let check = verify_2ec_spanning(g, &solution);
    if !check.ok {
        return Err(Error::NotTwoEc(format!("emitted solution for {instance_id}: {:?}", check.witness)));
    }

    let ratio = |den: usize| {
        if den == 0 {
            Rational::from_integer(1)
        } else {
            Rational::new(solution.len() as i64, den as i64)
        }
    };
    let invariant_log = runs
        .iter()
        .enumerate()
        .flat_map(|(i, run)| {
            [&run.many, &run.few].into_iter().flat_map(move |r| {
                r.log.iter().map(move |l| LogEntry { label: format!("structured[{i}] {}: {}", r.regime, l.label), delta: l.delta })
            })
        })
        .collect();
    Ok(SolveReport {
        instance_id: instance_id.to_string(),
        n: g.n(),
        m: g.m(),
        solution_size: solution.len(),
        opt,
        cover_size: h.len(),
        stats,
        regime_chosen: regime,
        lower_bound,
        ratio_vs_lower_bound: ratio(lower_bound),
        ratio_vs_opt: opt.map(ratio),
        invariant_log,
        wall_time_ms: start.elapsed().as_millis() as u64,
        fallback_used,
        baseline_size: baseline.len(),
        violations,
        reduction_steps,
        structured_runs: runs,
        solution: solution.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::simple(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn petersen() -> Graph {
        let mut e: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        e.extend((0..5).map(|i| (i, i + 5)));
        e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        Graph::simple(10, &e).unwrap()
    }

    #[test]
    fn cycle_of_ten_is_returned_whole() {
        let p = SolveParams { oracle: Some(OracleLimits::default()), ..Default::default() };
        let rep = solve(&cycle(10), "c10", &p).unwrap();
        assert_eq!(rep.solution_size, 10);
        assert_eq!(rep.opt, Some(10));
        assert_eq!(rep.ratio_vs_opt, Some(Rational::from_integer(1)));
        assert_eq!(rep.ratio_vs_lower_bound, Rational::from_integer(1));
    }

    #[test]
    fn petersen_against_the_oracle() {
        for base in [12, 5] {
            let reduction = ReductionParams { exact_base_bound: base, ..Default::default() };
            let p = SolveParams { reduction, oracle: Some(OracleLimits { max_nodes: 10, max_edges: 15, time_budget_ms: 60_000 }) };
            let rep = solve(&petersen(), "petersen", &p).unwrap();
            assert_eq!(rep.opt, Some(11));
            assert!(rep.solution_size <= 14, "size {}", rep.solution_size);
            assert!(rep.lower_bound <= 11);
        }
    }

    #[test]
    fn large_random_instance_skips_the_oracle() {
        let n = 30;
        let mut e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        e.extend((0..n).step_by(3).map(|i| (i, (i + 7) % n)));
        let g = Graph::simple(n, &e).unwrap();
        let p = SolveParams { oracle: Some(OracleLimits::default()), ..Default::default() };
        let rep = solve(&g, "r30", &p).unwrap();
        assert_eq!(rep.opt, None);
        assert_eq!(rep.ratio_vs_opt, None);
        assert!(rep.lower_bound >= rep.cover_size);
        assert!(rep.solution_size <= rep.baseline_size);
    }

    #[test]
    fn non_2ec_input_is_rejected() {
        let g = Graph::simple(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert!(matches!(solve(&g, "x", &SolveParams::default()), Err(Error::NotTwoEc(_))));
    }

    #[test]
    fn report_round_trips_through_json() {
        let rep = solve(&petersen(), "petersen", &SolveParams::default()).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        assert!(text.contains("\"regime_chosen\":\"exact_base\""));
        let back: SolveReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.solution, rep.solution);
        assert_eq!(back.ratio_vs_lower_bound, rep.ratio_vs_lower_bound);
    }
}
