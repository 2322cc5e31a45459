//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twoec::cover::{canonicalize, check_canonical, min_two_edge_cover};
use twoec::credit::triangle_flags;
use twoec::few_triangles::solve_few;
use twoec::graph_core::{decompose, is_two_edge_connected, is_two_vertex_connected, EdgeSet, Graph, Vertex};
use twoec::instances::{figure, generate, Family, InstanceSpec, FIGURE_IDS};
use twoec::many_triangles::{as_core_triangle, solve_many, finish_basic, finish_refined, min_t_join, minimize_components, ComponentView};
use twoec::matching::max_matching;
use twoec::oracle::{exact_alpha, exact_max_matching, exact_min_2edge_cover, exact_min_t_join, verify_2ec_spanning, OracleLimits};
use twoec::pipeline::{ratio_envelope_check, solve, Regime, SolveParams, SolveReport};
use twoec::reduction::{structured_certificate, ReductionParams};
use twoec::{Error, Rational};

const CORPUS: usize = 504;
const SUB_ORACLE_CASES: usize = 120;
const LARGER: usize = 96;
const DIRECT: usize = 900;

fn four_thirds() -> Rational {
    Rational::new(4, 3)
}

fn oracle_limits() -> OracleLimits {
    OracleLimits { max_nodes: 16, max_edges: 40, time_budget_ms: 120_000 }
}

fn stress() -> SolveParams {
    SolveParams { reduction: ReductionParams { exact_base_bound: 5, ..Default::default() }, oracle: Some(oracle_limits()) }
}

fn default_params() -> SolveParams {
    SolveParams { oracle: Some(oracle_limits()), ..Default::default() }
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

struct Instance {
    id: String,
    g: Graph,
}

fn corpus() -> Vec<Instance> {
    let mut out: Vec<Instance> = (0..CORPUS)
        .map(|i| {
            let n = 6 + i % 7;
            let spec = InstanceSpec { family: Family::Random2ec { n, extra_edges: (i / 7) % 6 }, seed: i as u64 };
            Instance { id: spec.id(), g: generate(&spec).unwrap() }
        })
        .collect();
    for id in FIGURE_IDS {
        out.push(Instance { id: format!("paper_figure_{id}"), g: figure(id).unwrap().graph });
    }
    out
}

/// Pipeline reports for every instance under both configurations, computed in parallel.
fn run_corpus(instances: &[Instance]) -> Vec<(SolveReport, SolveReport)> {
    let workers = thread::available_parallelism().map(|n| n.get()).unwrap_or(4);
    let chunk = instances.len().div_ceil(workers);
    thread::scope(|scope| {
        let handles: Vec<_> = instances
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|inst| {
                            let a = solve(&inst.g, &inst.id, &stress()).unwrap_or_else(|e| panic!("{}: {e}", inst.id));
                            let b = solve(&inst.g, &inst.id, &default_params()).unwrap_or_else(|e| panic!("{}: {e}", inst.id));
                            (a, b)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    })
}

/// A ring of `n / 3` triangles, consecutive ones joined by one edge, or a
/// Hamiltonian cycle; either way with random chords on top.
fn chorded(seed: u64, n: usize, triangles: bool) -> Option<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e: Vec<(usize, usize)> = Vec::new();
    let n = if triangles { 3 * (n / 3) } else { n };
    if triangles {
        let k = n / 3;
        for t in 0..k {
            let b = 3 * t;
            e.extend([(b, b + 1), (b + 1, b + 2), (b + 2, b)]);
            e.push((b + rng.gen_range(0..3), 3 * ((t + 1) % k) + rng.gen_range(0..3)));
        }
    } else {
        e.extend((0..n).map(|i| (i, (i + 1) % n)));
    }
    for _ in 0..rng.gen_range(1..n) {
        e.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    let mut seen = BTreeSet::new();
    e.retain(|&(a, b)| a != b && seen.insert((a.min(b), a.max(b))));
    let g = Graph::simple(n, &e).ok()?;
    is_two_edge_connected(&g, &g.all_edges()).then_some(g)
}

/// Instances past the oracle's reach, run under the stress configuration
/// without the oracle so the structured regimes do real work.
fn run_larger() -> Vec<SolveReport> {
    let graphs: Vec<(String, Graph)> = (0..LARGER as u64)
        .flat_map(|i| {
            let n = 13 + i as usize % 12;
            [false, true].map(|tri| chorded(9000 + i, n, tri).map(|g| (format!("chorded_{n}_{tri}_{i}"), g)))
        })
        .flatten()
        .collect();
    let workers = thread::available_parallelism().map(|n| n.get()).unwrap_or(4);
    let chunk = graphs.len().div_ceil(workers);
    let p = SolveParams { oracle: None, ..stress() };
    thread::scope(|scope| {
        let handles: Vec<_> = graphs
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter().map(|(id, g)| solve(g, id, &p).unwrap_or_else(|e| panic!("{id}: {e}"))).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    })
}

fn criterion_1() -> Verdict {
    match ratio_envelope_check() {
        Ok(rep) => verdict(
            rep.worst == Rational::new(118, 89) && rep.argmax_t == Rational::new(69, 89) && rep.argmax_b == Rational::from_integer(0),
            format!("max = {} at t = {}, b = {}; grid max {} over {} points", rep.worst, rep.argmax_t, rep.argmax_b, rep.grid_max, rep.grid_points),
        ),
        Err(e) => verdict(false, e.to_string()),
    }
}

fn criterion_2(instances: &[Instance], reports: &[(SolveReport, SolveReport)]) -> Verdict {
    let mut failures = Vec::new();
    let mut sum = Rational::from_integer(0);
    let mut worst = Rational::from_integer(0);
    let mut measured = 0;
    for (inst, (a, b)) in instances.iter().zip(reports) {
        for rep in [a, b] {
            let s: EdgeSet = rep.solution.iter().copied().collect();
            if !verify_2ec_spanning(&inst.g, &s).ok {
                failures.push(format!("{}: not 2EC spanning", inst.id));
            }
            let ratio = match rep.ratio_vs_opt {
                Some(r) => r,
                None if rep.ratio_vs_lower_bound <= four_thirds() => rep.ratio_vs_lower_bound,
                None => {
                    failures.push(format!("{}: no oracle value and ratio to lower bound {}", inst.id, rep.ratio_vs_lower_bound));
                    continue;
                }
            };
            if ratio > four_thirds() {
                failures.push(format!("{}: ratio {ratio} ({})", inst.id, rep.regime_chosen));
            }
            sum += ratio;
            worst = worst.max(ratio);
            measured += 1;
        }
    }
    let mean = sum / Rational::from_integer(measured.max(1) as i64);
    verdict(
        failures.is_empty() && instances.len() >= 500 + FIGURE_IDS.len(),
        format!(
            "{} instances x 2 configurations, mean ratio {:.4}, worst {worst}{}",
            instances.len(),
            *mean.numer() as f64 / *mean.denom() as f64,
            summarize(&failures)
        ),
    )
}

fn criterion_3(reports: &[(SolveReport, SolveReport)]) -> Verdict {
    let mut failures = Vec::new();
    let mut core_checks = 0;
    for (a, b) in reports {
        for rep in [a, b] {
            if let Some(opt) = rep.opt {
                if rep.cover_size > opt || rep.lower_bound > opt {
                    failures.push(format!("{}: |H| = {}, lower bound {} > opt {opt}", rep.instance_id, rep.cover_size, rep.lower_bound));
                }
            }
            for run in &rep.structured_runs {
                if let (Some(k), Some(alpha), Some(opt)) = (run.many.core_triangles, run.many.alpha_s, run.opt) {
                    if k <= 4 {
                        core_checks += 1;
                        if 4 * k + alpha - 1 > opt {
                            failures.push(format!("{}: 4k + alpha - 1 = {} > opt {opt}", rep.instance_id, 4 * k + alpha - 1));
                        }
                    }
                }
                if let Some(opt) = run.opt {
                    if run.cover_size > opt {
                        failures.push(format!("{}: structured |H| {} > opt {opt}", rep.instance_id, run.cover_size));
                    }
                }
            }
        }
    }
    verdict(failures.is_empty() && core_checks > 0, format!("{core_checks} core-triangle bounds checked{}", summarize(&failures)))
}

fn criterion_4(instances: &[Instance], reports: &[(SolveReport, SolveReport)]) -> Verdict {
    let mut failures = Vec::new();
    let (mut sized, mut canonical) = (0, 0);
    let p = ReductionParams { exact_base_bound: 5, ..Default::default() };
    for inst in instances {
        let g = &inst.g;
        let h = min_two_edge_cover(g).unwrap();
        if g.m() <= 18 {
            sized += 1;
            let exact = exact_min_2edge_cover(g, &oracle_limits()).unwrap();
            if exact.len() != h.len() {
                failures.push(format!("{}: cover {} vs exhaustive {}", inst.id, h.len(), exact.len()));
            }
        }
        if structured_certificate(g, &p).holds() {
            canonical += 1;
            match canonicalize(g, &h) {
                Ok(c) if c.len() <= h.len() && check_canonical(g, &c).is_canonical() => {}
                Ok(c) => failures.push(format!("{}: canonical form of size {} from {} fails the check", inst.id, c.len(), h.len())),
                Err(e) => failures.push(format!("{}: canonicalize: {e}", inst.id)),
            }
        }
    }
    let inner = reports
        .iter()
        .flat_map(|(a, b)| [a, b])
        .flat_map(|r| r.violations.iter().filter(|v| v.starts_with("canonicalize")).map(move |v| format!("{}: {v}", r.instance_id)));
    failures.extend(inner);
    verdict(
        failures.is_empty() && sized > 0 && canonical > 0,
        format!("{sized} covers matched exhaustively, {canonical} structured covers canonicalized{}", summarize(&failures)),
    )
}

/// A hub cycle of 4..8 nodes and `k` triangles, each joined to the hub by
/// two or three edges, plus a few edges between triangles.
fn hub(seed: u64, k: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = rng.gen_range(4..9);
    let mut e: Vec<(usize, usize)> = (0..c).map(|i| (i, (i + 1) % c)).collect();
    for t in 0..k {
        let b = c + 3 * t;
        e.extend([(b, b + 1), (b + 1, b + 2), (b + 2, b)]);
        for j in 0..rng.gen_range(2..4) {
            e.push((b + j, rng.gen_range(0..c)));
        }
    }
    for _ in 0..rng.gen_range(0..k + 1) {
        let (a, b) = (c + rng.gen_range(0..3 * k), c + rng.gen_range(0..3 * k));
        if (a - c) / 3 != (b - c) / 3 {
            e.push((a, b));
        }
    }
    let mut seen = BTreeSet::new();
    e.retain(|&(a, b)| seen.insert((a.min(b), a.max(b))));
    Graph::simple(c + 3 * k, &e).unwrap()
}

struct DirectRuns {
    graphs: usize,
    steps: usize,
    /// Structural stops, which only uncertified instances may hit.
    stops: usize,
    failures: Vec<String>,
}

/// Both regimes run straight on canonical covers of 2-vertex-connected
/// graphs whose covers have several components, so the monitor sees
/// bridge covering and gluing steps that the reduction rarely leaves behind.
fn direct_regime_runs() -> DirectRuns {
    let p = ReductionParams::default();
    let mut out = DirectRuns { graphs: 0, steps: 0, stops: 0, failures: Vec::new() };
    for seed in 0..DIRECT as u64 {
        let g = match seed % 3 {
            0 => hub(seed, 3 + seed as usize % 6),
            r => match chorded(seed, 15 + seed as usize % 30, r == 1) {
                Some(g) => g,
                None => continue,
            },
        };
        if !is_two_vertex_connected(&g) {
            continue;
        }
        let h = canonicalize(&g, &min_two_edge_cover(&g).unwrap()).unwrap();
        if decompose(&g, &h).components.len() < 2 {
            continue;
        }
        out.graphs += 1;
        let certified = structured_certificate(&g, &p).holds();
        let many = solve_many(&g, &h).map(|o| (o.solution, o.log, vec![o.component_trace]));
        let few = solve_few(&g, &h).map(|o| (o.solution, o.log, vec![o.bridge_trace, o.component_trace]));
        for (name, r) in [("many", many), ("few", few)] {
            match r {
                Ok((sol, log, traces)) => {
                    out.steps += log.len();
                    if !is_two_edge_connected(&g, &sol) {
                        out.failures.push(format!("direct {seed} {name}: result not 2EC"));
                    }
                    if log.iter().any(|l| l.delta < Rational::from_integer(0)) {
                        out.failures.push(format!("direct {seed} {name}: negative delta"));
                    }
                    if !traces.iter().all(|t| t.windows(2).all(|w| w[1] < w[0])) {
                        out.failures.push(format!("direct {seed} {name}: progress {traces:?}"));
                    }
                }
                Err(e @ Error::CostIncrease { .. }) if certified => {
                    out.failures.push(format!("direct {seed} {name}: {e}"));
                }
                Err(e) if !e.is_structural() => out.failures.push(format!("direct {seed} {name}: {e}")),
                Err(_) if !certified => out.stops += 1,
                Err(e) => out.failures.push(format!("direct {seed} {name}: {e}")),
            }
        }
    }
    out
}

fn criterion_5(reports: &[&SolveReport], direct: DirectRuns) -> Verdict {
    let mut failures = direct.failures;
    let mut steps = 0;
    for &rep in reports {
        for run in &rep.structured_runs {
            for r in [&run.many, &run.few] {
                steps += r.steps;
                if !r.cost_monotone || !r.progress_strict {
                    failures.push(format!("{}: {} regime progress {:?}", rep.instance_id, r.regime, r.progress));
                }
                if r.cost_increase && run.certificate.holds() {
                    failures.push(format!("{}: {} regime: {}", rep.instance_id, r.regime, r.error.clone().unwrap_or_default()));
                }
            }
        }
        if rep.invariant_log.iter().any(|l| l.delta < Rational::from_integer(0)) {
            failures.push(format!("{}: negative delta in the invariant log", rep.instance_id));
        }
    }
    verdict(
        failures.is_empty() && steps > 0 && direct.steps > 0,
        format!(
            "{steps} monitored steps in solve runs, {} in direct runs on {} graphs ({} structural stops){}",
            direct.steps,
            direct.graphs,
            direct.stops,
            summarize(&failures)
        ),
    )
}

fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    generate(&InstanceSpec { family: Family::Random2ec { n, extra_edges: extra }, seed }).unwrap()
}

fn criterion_6() -> Verdict {
    let lim = oracle_limits();
    let mut failures = Vec::new();

    let mut matching_cases = 0;
    for seed in 0..SUB_ORACLE_CASES as u64 {
        let g = random_connected(4 + seed as usize % 9, seed as usize % 5, 1000 + seed);
        if g.m() > 16 {
            continue;
        }
        matching_cases += 1;
        let (fast, slow) = (max_matching(&g).len(), exact_max_matching(&g, &lim).unwrap());
        if fast != slow {
            failures.push(format!("matching seed {seed}: {fast} vs {slow}"));
        }
    }
    // Top up with sparser graphs until enough cases with m <= 16 are seen.
    let mut seed = 0u64;
    while matching_cases < 100 {
        let g = random_connected(4 + seed as usize % 6, 0, 5000 + seed);
        seed += 1;
        matching_cases += 1;
        if max_matching(&g).len() != exact_max_matching(&g, &lim).unwrap() {
            failures.push(format!("matching top-up seed {seed}"));
        }
    }

    let mut tjoin_cases = 0;
    for seed in 0..SUB_ORACLE_CASES as u64 {
        let n = 3 + seed as usize % 8;
        let g = random_connected(n, seed as usize % 4, 2000 + seed);
        let mut t: Vec<Vertex> = (0..n).filter(|v| (v * 7 + seed as usize).is_multiple_of(3)).collect();
        if t.len() % 2 == 1 {
            t.pop();
        }
        tjoin_cases += 1;
        let fast = min_t_join(&g, &t).unwrap().join.len();
        let slow = exact_min_t_join(&g, &t, &lim).unwrap().len();
        if fast != slow {
            failures.push(format!("T-join seed {seed}: {fast} vs {slow}"));
        }
    }

    let mut alpha_cases = 0;
    let mut seed = 0u64;
    while alpha_cases < SUB_ORACLE_CASES && seed < 10 * SUB_ORACLE_CASES as u64 {
        let (k, core_n) = (1 + seed as usize % 4, 4 + seed as usize % 5);
        let g = generate(&InstanceSpec { family: Family::TriangleRich { k, core_n }, seed: 3000 + seed }).unwrap();
        seed += 1;
        let s: EdgeSet = g.edges().collect::<Vec<_>>().into_iter().filter(|&e| {
            let (a, b) = g.ends(e);
            (a < core_n && b < core_n) || (a >= core_n && b >= core_n)
        }).collect();
        let Ok(view) = ComponentView::new(&g, &s, &triangle_flags(&decompose(&g, &s))) else { continue };
        let Some(ct) = as_core_triangle(&g, &s, &view) else { continue };
        alpha_cases += 1;
        let fast = minimize_components(&ct, &g).map(|(_, a)| a);
        let slow = exact_alpha(&ct, &g, &lim);
        if fast.as_ref().ok() != slow.as_ref().ok() {
            failures.push(format!("alpha seed {seed}: {fast:?} vs {slow:?}"));
        }
    }

    verdict(
        failures.is_empty() && matching_cases >= 100 && tjoin_cases >= 100 && alpha_cases >= 100,
        format!("matching {matching_cases}, T-join {tjoin_cases}, alpha {alpha_cases} cases{}", summarize(&failures)),
    )
}

fn criterion_7(reports: &[&SolveReport]) -> Verdict {
    let runs: Vec<_> = reports.iter().flat_map(|&r| r.structured_runs.iter().map(move |s| (r, s))).collect();
    let failures: Vec<String> = runs
        .iter()
        .filter(|(_, s)| !s.certificate.holds())
        .map(|(r, s)| format!("{}: {:?}", r.instance_id, s.certificate))
        .collect();
    verdict(failures.is_empty() && !runs.is_empty(), format!("{} structured instances certified{}", runs.len(), summarize(&failures)))
}

fn criterion_8() -> Verdict {
    let mut failures = Vec::new();
    let solve_spec = |text: &str, p: &SolveParams| {
        let spec: InstanceSpec = text.parse().unwrap();
        solve(&generate(&spec).unwrap(), text, p).unwrap()
    };
    for p in [stress(), default_params()] {
        let rep = solve_spec("petersen", &p);
        if rep.opt != Some(11) || rep.solution_size > 14 {
            failures.push(format!("petersen: opt {:?}, size {}", rep.opt, rep.solution_size));
        }
        for n in 3..=20 {
            let rep = solve_spec(&format!("cycle:{n}"), &p);
            if rep.solution_size != n {
                failures.push(format!("C{n}: size {}", rep.solution_size));
            }
        }
        let rep = solve_spec("complete:5", &p);
        if rep.solution_size != 5 {
            failures.push(format!("K5: size {}", rep.solution_size));
        }
    }

    let fig = figure("5b").unwrap();
    let s = fig.drawn.clone().unwrap();
    let view = ComponentView::new(&fig.graph, &s, &triangle_flags(&decompose(&fig.graph, &s))).unwrap();
    let ct = as_core_triangle(&fig.graph, &s, &view).unwrap();
    let basic = finish_basic(&ct, &fig.graph).unwrap();
    let refined = finish_refined(&ct, &fig.graph).unwrap().solution;
    for (name, sol) in [("basic", &basic), ("refined", &refined)] {
        if !verify_2ec_spanning(&fig.graph, sol).ok {
            failures.push(format!("figure 5b: {name} finish not 2EC"));
        }
    }
    let best = basic.len().min(refined.len());
    let rep = solve(&fig.graph, "paper_figure_5b", &stress()).unwrap();
    verdict(
        failures.is_empty(),
        format!(
            "petersen, C3..C20, K5 exact; figure 5b finishes {} and {} edges, min {best}, pipeline {} ({}){}",
            basic.len(),
            refined.len(),
            rep.solution_size,
            rep.regime_chosen,
            summarize(&failures)
        ),
    )
}

fn summarize(failures: &[String]) -> String {
    match failures {
        [] => String::new(),
        [one] => format!("; FAILED: {one}"),
        [first, rest @ ..] => format!("; {} FAILURES, first: {first}", rest.len() + 1),
    }
}

fn main() -> ExitCode {
    let instances = corpus();
    assert!(instances.iter().all(|i| is_two_edge_connected(&i.g, &i.g.all_edges())));
    let reports = run_corpus(&instances);
    let larger = run_larger();
    let all: Vec<&SolveReport> = reports.iter().flat_map(|(a, b)| [a, b]).chain(&larger).collect();
    let fallbacks = reports.iter().flat_map(|(a, b)| [a, b]).filter(|r| r.fallback_used).count();
    let regimes = |r: Regime| reports.iter().flat_map(|(a, b)| [a, b]).filter(|x| x.regime_chosen == r).count();

    let results = [
        ("ratio arithmetic", criterion_1()),
        ("oracle-ratio corpus", criterion_2(&instances, &reports)),
        ("lower-bound soundness", criterion_3(&reports)),
        ("cover correctness", criterion_4(&instances, &reports)),
        ("cost monotonicity", criterion_5(&all, direct_regime_runs())),
        ("sub-oracle agreement", criterion_6()),
        ("structured certificate", criterion_7(&all)),
        ("named-instance regressions", criterion_8()),
    ];
    for (i, (name, v)) in results.iter().enumerate() {
        println!("criterion {} {} {name}: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!(
        "corpus regimes: exact_base {}, many {}, few {}, reduced_composite {}, baseline {}; fallbacks {fallbacks}",
        regimes(Regime::ExactBase),
        regimes(Regime::Many),
        regimes(Regime::Few),
        regimes(Regime::ReducedComposite),
        regimes(Regime::Baseline)
    );
    let runs: Vec<_> = all.iter().flat_map(|r| &r.structured_runs).collect();
    println!(
        "structured runs: {} (many ok {}, few ok {}), larger instances {} with {} fallbacks",
        runs.len(),
        runs.iter().filter(|r| r.many.error.is_none()).count(),
        runs.iter().filter(|r| r.few.error.is_none()).count(),
        larger.len(),
        larger.iter().filter(|r| r.fallback_used).count()
    );
    if results.iter().all(|(_, v)| v.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
