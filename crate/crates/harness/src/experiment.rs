//! Census, path, limit and compare runs.

use std::time::Instant;

use critgraph::dist::{sample_types, validate_max_type, MomentSummary, TypeCounts, TypePmf};
use critgraph::limit::{gamma_for_path, GammaSamples, LimitParams, PathGamma};
use critgraph::seed::{self, SimRng, SEED_SCHEME};
use critgraph::stats::{
    fit_parabolic_drift, l2_distance, slope_through_origin, summarize, two_sample_ks,
    EmpiricalSample, MeanCurve,
};
use critgraph::walk::{
    census_from_trace, drift_qv_curves, rescaled_path, run_walk_with, weight_depletion_deviation,
    ComponentCensus, WalkOptions, WalkTrace,
};
use serde::Serialize;

use crate::config::{ExperimentConfig, Mode};
use crate::output::Table;
use crate::runner::Runner;
use crate::HarnessError;

pub const GRAPH_STREAM: u64 = 1;
pub const LIMIT_STREAM: u64 = 2;

/// Most rows written per path-curve file; the statistics use the full grid.
const MAX_CURVE_ROWS: usize = 1000;

/// Stream for graph-side replica `r` at size `n`.
pub fn graph_rng(master: u64, n: u64, r: usize) -> SimRng {
    seed::stream(master, &[GRAPH_STREAM, n, r as u64])
}

/// Master seed of the limit side; replica `r` uses `stream(limit_master, [r])`.
pub fn limit_master(master: u64) -> u64 {
    seed::derive_seed(master, &[LIMIT_STREAM])
}

/// Mean with its spread and sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub sd: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn of(values: &[f64]) -> Self {
        let (mean, sd, stderr) = summarize(values);
        Self {
            mean,
            sd,
            stderr,
            samples: values.len(),
        }
    }
}

/// One graph-side replica: sampled types and the walk run on them.
pub struct WalkRun {
    pub counts: TypeCounts,
    pub trace: WalkTrace,
    pub checked: bool,
}

/// Sample `n` types from `pmf`, then walk for at most `horizon` steps.
/// Invariants are re-checked every step in debug builds and on every
/// hundredth replica otherwise.
pub fn replica_walk(
    pmf: &TypePmf,
    a: f64,
    n: u64,
    horizon: u64,
    master: u64,
    r: usize,
) -> Result<WalkRun, HarnessError> {
    let mut rng = graph_rng(master, n, r);
    let counts = sample_types(pmf, n, &mut rng)?;
    let checked = cfg!(debug_assertions) || r.is_multiple_of(100);
    let opts = WalkOptions {
        horizon_steps: horizon,
        check_invariants: checked,
    };
    let trace = run_walk_with(&counts, a, opts, &mut rng)?;
    Ok(WalkRun {
        counts,
        trace,
        checked,
    })
}

/// Steps needed to cover `s in [0, s_max]` on the `n^{2/3}` time scale.
pub fn horizon_for(n: u64, s_max: f64) -> u64 {
    (s_max * (n as f64).powf(2.0 / 3.0)).floor() as u64
}

/// Pointwise running mean and variance over replicas, fed in order.
#[derive(Debug, Clone, Default)]
pub struct CurveAccumulator {
    count: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl CurveAccumulator {
    /// A shorter curve truncates the common grid to its length.
    pub fn add(&mut self, values: &[f64]) {
        if self.count == 0 {
            self.mean = vec![0.0; values.len()];
            self.m2 = vec![0.0; values.len()];
        }
        let len = self.mean.len().min(values.len());
        self.mean.truncate(len);
        self.m2.truncate(len);
        self.count += 1;
        let c = self.count as f64;
        for ((m, q), &v) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(values) {
            let d = v - *m;
            *m += d / c;
            *q += d * (v - *m);
        }
    }

    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    pub fn finish(&self, grid: &[f64]) -> MeanCurve {
        let r = self.count as f64;
        let sd: Vec<f64> = self
            .m2
            .iter()
            .map(|q| {
                if self.count > 1 {
                    (q / (r - 1.0)).sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        MeanCurve {
            grid: grid[..self.len()].to_vec(),
            mean: self.mean.clone(),
            stderr: sd.iter().map(|s| s / r.sqrt()).collect(),
            sd,
            replicas: self.count,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub clamp_events: u64,
    pub checked_replicas: usize,
    /// Realizations whose largest type reached `n^{1/3}`.
    pub max_type_flagged: usize,
    /// Walks that stopped at the horizon before exhausting the graph.
    pub incomplete_walks: usize,
}

impl Diagnostics {
    fn record(&mut self, run: &WalkRun, complete: bool) {
        self.clamp_events += run.trace.clamp_events;
        self.checked_replicas += usize::from(run.checked);
        self.max_type_flagged += usize::from(validate_max_type(&run.counts).flagged);
        self.incomplete_walks += usize::from(!complete);
    }
}

/// Curvature read off the conditional drift on `s in [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftFit {
    pub a: Estimate,
    pub beta: Estimate,
    pub target_a: f64,
    pub target_beta: f64,
    /// `4 stderr + 4 n^{-1/3}`.
    pub beta_tolerance: f64,
    pub beta_agrees: bool,
    pub qv_slope: Estimate,
    /// `E X E X^3`, the diffusion coefficient of the limit.
    pub qv_target: f64,
    /// `E X^2`. Conditional variances given the full state omit the spread
    /// of the marked type, so their sum tends to this instead; the two agree
    /// when the size-biased type is constant.
    pub qv_full_state_limit: f64,
}

fn drift_fit(n: u64, a: f64, m: &MomentSummary, fits: &[(f64, f64, f64)]) -> DriftFit {
    let col = |i: usize| -> Vec<f64> {
        fits.iter()
            .map(|f| match i {
                0 => f.0,
                1 => f.1,
                _ => f.2,
            })
            .collect()
    };
    let beta = Estimate::of(&col(1));
    let beta_tolerance = 4.0 * beta.stderr + 4.0 * (n as f64).powf(-1.0 / 3.0);
    DriftFit {
        a: Estimate::of(&col(0)),
        beta,
        target_a: a,
        target_beta: m.beta,
        beta_tolerance,
        beta_agrees: (beta.mean - m.beta).abs() <= beta_tolerance,
        qv_slope: Estimate::of(&col(2)),
        qv_target: m.sigma * m.sigma,
        qv_full_state_limit: m.ex2,
    }
}

/// `(a, beta, qv slope)` fitted on one trace over `s in [0, 1]`.
fn fit_trace(trace: &WalkTrace) -> (f64, f64, f64) {
    let c = drift_qv_curves(trace, 1.0);
    let (a, beta) = fit_parabolic_drift(&c.s, &c.drift);
    (a, beta, slope_through_origin(&c.s, &c.qv))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsRow {
    pub coordinate: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub n_graph: usize,
    pub n_limit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L2Row {
    /// Distance between the mean rescaled top-K vector and the mean `gamma` vector.
    pub distance: f64,
    /// Delta-method standard error.
    pub stderr: f64,
    pub n_graph: usize,
    pub n_limit: usize,
}

/// Graph side at one `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub n: u64,
    pub replicas: usize,
    /// `n^{-2/3} C_k`, `k = 1..K`.
    pub top_k: Vec<Estimate>,
    pub drift: DriftFit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks: Option<Vec<KsRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2: Option<L2Row>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitSummary {
    pub params: LimitParams,
    pub replicas: usize,
    pub top_k: Vec<Estimate>,
    pub truncated: usize,
    pub truncation_rate: f64,
    pub truncated_top: usize,
    pub top_truncation_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSummary {
    pub n: u64,
    pub replicas: usize,
    pub s_max: f64,
    pub grid_points: usize,
    /// `max_s |mean drift - (a s - beta s^2 / 2)|` over `s in [0, 1]`.
    pub drift_max_deviation: f64,
    /// The largest excess of the deviation over `4 stderr + 2 n^{-1/3}`; non-positive when within budget.
    pub drift_budget_excess: f64,
    pub drift: DriftFit,
    pub z_at_1: Estimate,
    pub martingale_at_1: Estimate,
    /// Median over replicas of `max_{j <= s_max n^{2/3}} |n^{-1} sum_x x U^x(j) - E X|`.
    pub depletion_median: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsTrend {
    pub coordinate: usize,
    pub n: Vec<u64>,
    pub ks: Vec<f64>,
    pub strictly_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub mode: Mode,
    pub config: ExperimentConfig,
    pub seed_scheme: String,
    pub moments: MomentSummary,
    pub graph: Vec<GraphSummary>,
    pub paths: Vec<PathSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<LimitSummary>,
    pub trend: Vec<KsTrend>,
    /// False when the run was interrupted; the tables hold what finished.
    pub complete: bool,
}

/// A report with its tables and human-readable log.
#[derive(Debug, Clone)]
pub struct Run<T> {
    pub report: T,
    pub tables: Vec<Table>,
    pub log: Vec<String>,
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

struct Logger {
    start: Instant,
    lines: Vec<String>,
}

impl Logger {
    fn new() -> Self {
        Self {
            start: Instant::now(),
            lines: Vec::new(),
        }
    }

    fn line(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        self.lines.push(format!(
            "[{:>8.2}s] {msg}",
            self.start.elapsed().as_secs_f64()
        ));
    }
}

/// Graph-side replicas at one `n`, exhausting every walk.
struct GraphSide {
    summary: GraphSummary,
    rescaled: Vec<Vec<f64>>,
    first_census: ComponentCensus,
}

fn graph_side(
    cfg: &ExperimentConfig,
    pmf: &TypePmf,
    m: &MomentSummary,
    n: u64,
    runner: &Runner,
) -> Result<Option<GraphSide>, HarnessError> {
    let k = cfg.k;
    let scale = (n as f64).powf(-2.0 / 3.0);
    let runs = runner.map(cfg.replicas, |r| {
        let run = replica_walk(pmf, cfg.a, n, u64::MAX, cfg.seed, r)?;
        let census = census_from_trace(&run.trace, &run.counts);
        let fit = fit_trace(&run.trace);
        let mut diag = Diagnostics::default();
        diag.record(&run, census.complete);
        Ok((census, fit, diag))
    })?;
    let Some(runs) = runs else { return Ok(None) };

    let mut diagnostics = Diagnostics::default();
    let mut rescaled = vec![Vec::with_capacity(runs.len()); k];
    let mut fits = Vec::with_capacity(runs.len());
    for (census, fit, d) in &runs {
        for (i, size) in census.top(k).into_iter().enumerate() {
            rescaled[i].push(size as f64 * scale);
        }
        fits.push(*fit);
        diagnostics.clamp_events += d.clamp_events;
        diagnostics.checked_replicas += d.checked_replicas;
        diagnostics.max_type_flagged += d.max_type_flagged;
        diagnostics.incomplete_walks += d.incomplete_walks;
    }
    let first_census = runs.into_iter().next().map(|r| r.0).expect("replicas >= 1");
    Ok(Some(GraphSide {
        summary: GraphSummary {
            n,
            replicas: cfg.replicas,
            top_k: rescaled.iter().map(|v| Estimate::of(v)).collect(),
            drift: drift_fit(n, cfg.a, m, &fits),
            ks: None,
            l2: None,
            diagnostics,
        },
        rescaled,
        first_census,
    }))
}

fn census_table(census: &ComponentCensus, seed: u64) -> Table {
    let scale = (census.n as f64).powf(-2.0 / 3.0);
    Table {
        name: format!("census_n{}_seed{seed}.csv", census.n),
        header: vec!["rank", "size", "rescaled"],
        rows: census
            .sizes
            .iter()
            .enumerate()
            .map(|(i, &s)| vec![(i + 1).to_string(), s.to_string(), fmt(s as f64 * scale)])
            .collect(),
    }
}

fn limit_side(
    cfg: &ExperimentConfig,
    runner: &Runner,
) -> Result<Option<GammaSamples>, HarnessError> {
    let params = cfg.limit_params()?;
    let master = limit_master(cfg.seed);
    let paths: Option<Vec<PathGamma>> = runner.map(cfg.replicas, |r| {
        Ok(gamma_for_path(
            &params,
            cfg.k,
            &mut seed::stream(master, &[r as u64]),
        ))
    })?;
    Ok(paths.map(|p| GammaSamples::from_paths(params, cfg.k, p)))
}

fn limit_summary(g: &GammaSamples) -> LimitSummary {
    LimitSummary {
        params: g.params,
        replicas: g.replicas(),
        top_k: (0..g.k).map(|i| Estimate::of(&g.coordinate(i))).collect(),
        truncated: g.truncated,
        truncation_rate: g.truncation_rate(),
        truncated_top: g.truncated_top,
        top_truncation_rate: g.top_truncation_rate(),
    }
}

fn limit_table(s: &LimitSummary, seed: u64) -> Table {
    Table {
        name: format!("limit_seed{seed}.csv"),
        header: vec!["rank", "mean", "sd", "stderr"],
        rows: s
            .top_k
            .iter()
            .enumerate()
            .map(|(i, e)| vec![(i + 1).to_string(), fmt(e.mean), fmt(e.sd), fmt(e.stderr)])
            .collect(),
    }
}

fn compare_to_limit(
    side: &GraphSide,
    gamma: &GammaSamples,
) -> Result<(Vec<KsRow>, L2Row), HarnessError> {
    let mut ks = Vec::with_capacity(gamma.k);
    let (mut d2, mut var_terms) = (0.0, Vec::with_capacity(gamma.k));
    for (i, graph_values) in side.rescaled.iter().enumerate() {
        let limit_values = gamma.coordinate(i);
        let res = two_sample_ks(
            &EmpiricalSample::new(format!("C{}", i + 1), graph_values.clone()),
            &EmpiricalSample::new(format!("gamma{}", i + 1), limit_values.clone()),
        )?;
        ks.push(KsRow {
            coordinate: i + 1,
            statistic: res.statistic,
            p_value: res.p_value,
            n_graph: res.n_x,
            n_limit: res.n_y,
        });
        let (g, l) = (Estimate::of(graph_values), Estimate::of(&limit_values));
        let delta = g.mean - l.mean;
        d2 += delta * delta;
        var_terms.push((delta, g.stderr.powi(2) + l.stderr.powi(2)));
    }
    let graph_means: Vec<f64> = side.summary.top_k.iter().map(|e| e.mean).collect();
    let limit_means: Vec<f64> = (0..gamma.k)
        .map(|i| Estimate::of(&gamma.coordinate(i)).mean)
        .collect();
    let distance = l2_distance(&graph_means, &limit_means);
    let stderr = if d2 > 0.0 {
        (var_terms.iter().map(|(d, v)| d * d * v).sum::<f64>() / d2).sqrt()
    } else {
        0.0
    };
    Ok((
        ks,
        L2Row {
            distance,
            stderr,
            n_graph: side.summary.replicas,
            n_limit: gamma.replicas(),
        },
    ))
}

fn trends(graph: &[GraphSummary], k: usize) -> Vec<KsTrend> {
    (0..k.min(2))
        .map(|i| {
            let rows: Vec<(u64, f64)> = graph
                .iter()
                .filter_map(|g| g.ks.as_ref().map(|ks| (g.n, ks[i].statistic)))
                .collect();
            KsTrend {
                coordinate: i + 1,
                n: rows.iter().map(|r| r.0).collect(),
                ks: rows.iter().map(|r| r.1).collect(),
                strictly_decreasing: rows.len() >= 2 && rows.windows(2).all(|w| w[1].1 < w[0].1),
            }
        })
        .collect()
}

fn empty_report(cfg: &ExperimentConfig, m: MomentSummary) -> ExperimentReport {
    ExperimentReport {
        mode: cfg.mode,
        config: cfg.clone(),
        seed_scheme: SEED_SCHEME.to_string(),
        moments: m,
        graph: Vec::new(),
        paths: Vec::new(),
        limit: None,
        trend: Vec::new(),
        complete: true,
    }
}

/// Graph side against the limit side for every `n`, with per-coordinate
/// KS, `l2` distance of means and the KS trend across `n_list`.
pub fn run_convergence_experiment(
    cfg: &ExperimentConfig,
    runner: &Runner,
) -> Result<Run<ExperimentReport>, HarnessError> {
    let pmf = cfg.type_pmf()?;
    let m = cfg.moments()?;
    let mut report = empty_report(cfg, m);
    let mut tables = Vec::new();
    let mut log = Logger::new();
    log.line(format!(
        "compare: seed {} workers {} scheme {SEED_SCHEME}",
        cfg.seed,
        runner.workers()
    ));

    let Some(gamma) = limit_side(cfg, runner)? else {
        report.complete = false;
        log.line("interrupted during limit side");
        return Ok(Run {
            report,
            tables,
            log: log.lines,
        });
    };
    let ls = limit_summary(&gamma);
    log.line(format!(
        "limit side: {} paths, truncation {:.4} (top-{} affected {:.4})",
        ls.replicas, ls.truncation_rate, cfg.k, ls.top_truncation_rate
    ));
    tables.push(limit_table(&ls, cfg.seed));
    report.limit = Some(ls);

    let mut ks_rows = Vec::new();
    for &n in &cfg.n_list {
        let Some(mut side) = graph_side(cfg, &pmf, &m, n, runner)? else {
            report.complete = false;
            log.line(format!("interrupted at n = {n}"));
            break;
        };
        let (ks, l2) = compare_to_limit(&side, &gamma)?;
        for row in &ks {
            ks_rows.push(vec![
                n.to_string(),
                row.coordinate.to_string(),
                fmt(row.statistic),
                fmt(row.p_value),
            ]);
        }
        log.line(format!(
            "n = {n}: KS(C1) {:.4} KS(C2) {:.4} l2 {:.4}",
            ks[0].statistic,
            ks.get(1).map_or(f64::NAN, |r| r.statistic),
            l2.distance
        ));
        side.summary.ks = Some(ks);
        side.summary.l2 = Some(l2);
        tables.push(census_table(&side.first_census, cfg.seed));
        report.graph.push(side.summary);
    }
    report.trend = trends(&report.graph, cfg.k);
    tables.push(Table {
        name: "ks_summary.csv".into(),
        header: vec!["n", "coordinate", "ks", "p"],
        rows: ks_rows,
    });
    log.line("done");
    Ok(Run {
        report,
        tables,
        log: log.lines,
    })
}

pub fn run_census(
    cfg: &ExperimentConfig,
    runner: &Runner,
) -> Result<Run<ExperimentReport>, HarnessError> {
    let pmf = cfg.type_pmf()?;
    let m = cfg.moments()?;
    let mut report = empty_report(cfg, m);
    let mut tables = Vec::new();
    let mut log = Logger::new();
    log.line(format!(
        "census: seed {} workers {}",
        cfg.seed,
        runner.workers()
    ));
    for &n in &cfg.n_list {
        let Some(side) = graph_side(cfg, &pmf, &m, n, runner)? else {
            report.complete = false;
            log.line(format!("interrupted at n = {n}"));
            break;
        };
        log.line(format!(
            "n = {n}: mean n^(-2/3) C1 {:.4}",
            side.summary.top_k[0].mean
        ));
        tables.push(census_table(&side.first_census, cfg.seed));
        report.graph.push(side.summary);
    }
    log.line("done");
    Ok(Run {
        report,
        tables,
        log: log.lines,
    })
}

pub fn run_limit(
    cfg: &ExperimentConfig,
    runner: &Runner,
) -> Result<Run<ExperimentReport>, HarnessError> {
    let m = cfg.moments()?;
    let mut report = empty_report(cfg, m);
    let mut tables = Vec::new();
    let mut log = Logger::new();
    log.line(format!(
        "limit: seed {} workers {}",
        cfg.seed,
        runner.workers()
    ));
    match limit_side(cfg, runner)? {
        Some(g) => {
            let ls = limit_summary(&g);
            log.line(format!(
                "{} paths, mean gamma1 {:.4}",
                ls.replicas, ls.top_k[0].mean
            ));
            tables.push(limit_table(&ls, cfg.seed));
            report.limit = Some(ls);
        }
        None => {
            report.complete = false;
            log.line("interrupted");
        }
    }
    Ok(Run {
        report,
        tables,
        log: log.lines,
    })
}

/// Curves of one replica on the grid `s_j = j n^{-2/3}`, `j <= s_max n^{2/3}`.
struct ReplicaCurves {
    z: Vec<f64>,
    drift: Vec<f64>,
    qv: Vec<f64>,
    martingale: Vec<f64>,
    depletion: f64,
    fit: (f64, f64, f64),
    diag: Diagnostics,
}

/// Mean rescaled walk, drift, QV and martingale curves at one `n`.
pub struct PathCurves {
    pub z: MeanCurve,
    pub drift: MeanCurve,
    pub qv: MeanCurve,
    pub martingale: MeanCurve,
    pub summary: PathSummary,
}

#[allow(clippy::too_many_arguments)]
pub fn simulate_paths(
    pmf: &TypePmf,
    m: &MomentSummary,
    a: f64,
    n: u64,
    replicas: usize,
    s_max: f64,
    master: u64,
    runner: &Runner,
) -> Result<Option<PathCurves>, HarnessError> {
    let horizon = horizon_for(n, s_max);
    let mut z = CurveAccumulator::default();
    let mut drift = CurveAccumulator::default();
    let mut qv = CurveAccumulator::default();
    let mut mg = CurveAccumulator::default();
    let (mut depletion, mut fits) = (Vec::with_capacity(replicas), Vec::with_capacity(replicas));
    let mut diagnostics = Diagnostics::default();
    let mut grid: Vec<f64> = Vec::new();
    let done = runner.replicas(
        replicas,
        |r| {
            let run = replica_walk(pmf, a, n, horizon, master, r)?;
            let zc: Vec<f64> = rescaled_path(&run.trace, s_max)
                .into_iter()
                .map(|p| p.1)
                .collect();
            let c = drift_qv_curves(&run.trace, s_max);
            let mut diag = Diagnostics::default();
            diag.record(&run, true);
            diag.incomplete_walks = 0;
            Ok(ReplicaCurves {
                z: zc,
                drift: c.drift,
                qv: c.qv,
                martingale: c.martingale,
                depletion: weight_depletion_deviation(&run.trace, m.ex, s_max),
                fit: fit_trace(&run.trace),
                diag,
            })
        },
        |_, rc| {
            if grid.len() < rc.drift.len() {
                let scale = (n as f64).powf(-2.0 / 3.0);
                grid = (0..rc.drift.len()).map(|j| j as f64 * scale).collect();
            }
            z.add(&rc.z);
            drift.add(&rc.drift);
            qv.add(&rc.qv);
            mg.add(&rc.martingale);
            depletion.push(rc.depletion);
            fits.push(rc.fit);
            diagnostics.clamp_events += rc.diag.clamp_events;
            diagnostics.checked_replicas += rc.diag.checked_replicas;
            diagnostics.max_type_flagged += rc.diag.max_type_flagged;
            Ok(())
        },
    )?;
    if !done {
        return Ok(None);
    }
    let (z, drift, qv, martingale) = (
        z.finish(&grid),
        drift.finish(&grid),
        qv.finish(&grid),
        mg.finish(&grid),
    );

    let slack = 2.0 * (n as f64).powf(-1.0 / 3.0);
    let (mut max_dev, mut excess) = (0.0f64, f64::NEG_INFINITY);
    let mut at_1 = 0;
    for (j, &s) in drift.grid.iter().enumerate() {
        if s > 1.0 {
            break;
        }
        at_1 = j;
        let dev = (drift.mean[j] - (a * s - m.beta * s * s / 2.0)).abs();
        max_dev = max_dev.max(dev);
        excess = excess.max(dev - (4.0 * drift.stderr[j] + slack));
    }
    let point = |c: &MeanCurve| Estimate {
        mean: c.mean[at_1],
        sd: c.sd[at_1],
        stderr: c.stderr[at_1],
        samples: c.replicas,
    };
    depletion.sort_by(f64::total_cmp);
    let summary = PathSummary {
        n,
        replicas,
        s_max,
        grid_points: drift.grid.len(),
        drift_max_deviation: max_dev,
        drift_budget_excess: excess,
        drift: drift_fit(n, a, m, &fits),
        z_at_1: point(&z),
        martingale_at_1: point(&martingale),
        depletion_median: median_sorted(&depletion),
        diagnostics,
    };
    Ok(Some(PathCurves {
        z,
        drift,
        qv,
        martingale,
        summary,
    }))
}

pub fn median_sorted(v: &[f64]) -> f64 {
    match v.len() {
        0 => f64::NAN,
        l if l % 2 == 1 => v[l / 2],
        l => 0.5 * (v[l / 2 - 1] + v[l / 2]),
    }
}

fn path_table(p: &PathCurves, a: f64, m: &MomentSummary, seed: u64) -> Table {
    let len = p.drift.grid.len();
    let stride = len.div_ceil(MAX_CURVE_ROWS).max(1);
    let rows = (0..len)
        .step_by(stride)
        .map(|j| {
            let s = p.drift.grid[j];
            vec![
                fmt(s),
                fmt(p.z.mean[j]),
                fmt(p.z.stderr[j]),
                fmt(p.drift.mean[j]),
                fmt(p.drift.stderr[j]),
                fmt(a * s - m.beta * s * s / 2.0),
                fmt(p.qv.mean[j]),
                fmt(p.qv.stderr[j]),
                fmt(m.sigma * m.sigma * s),
            ]
        })
        .collect();
    Table {
        name: format!("path_n{}_seed{seed}.csv", p.summary.n),
        header: vec![
            "s",
            "z_mean",
            "z_stderr",
            "drift_mean",
            "drift_stderr",
            "drift_target",
            "qv_mean",
            "qv_stderr",
            "qv_target",
        ],
        rows,
    }
}

pub fn run_paths(
    cfg: &ExperimentConfig,
    runner: &Runner,
) -> Result<Run<ExperimentReport>, HarnessError> {
    let pmf = cfg.type_pmf()?;
    let m = cfg.moments()?;
    let mut report = empty_report(cfg, m);
    let mut tables = Vec::new();
    let mut log = Logger::new();
    log.line(format!(
        "path: seed {} workers {}",
        cfg.seed,
        runner.workers()
    ));
    for &n in &cfg.n_list {
        let Some(p) = simulate_paths(&pmf, &m, cfg.a, n, cfg.replicas, cfg.s0, cfg.seed, runner)?
        else {
            report.complete = false;
            log.line(format!("interrupted at n = {n}"));
            break;
        };
        log.line(format!(
            "n = {n}: drift max deviation {:.4}, QV slope {:.4}",
            p.summary.drift_max_deviation, p.summary.drift.qv_slope.mean
        ));
        tables.push(path_table(&p, cfg.a, &m, cfg.seed));
        report.paths.push(p.summary);
    }
    log.line("done");
    Ok(Run {
        report,
        tables,
        log: log.lines,
    })
}
