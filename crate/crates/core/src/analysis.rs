//! Closed-form convergence bounds, the Monte Carlo harness that checks them on
//! the abstract world, and the kitchen strategy benchmark.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::domain_io::{DomainError, DomainFile, Term};
use crate::executor::{
    execute, EngineConfig, ExecError, ExecutionTrace, Outcome, ReplanContext, Strategy,
};
use crate::operators::{Chain, ImplicitMode};
use crate::planner::{plan_and_prepare, PlanError, SearchLimits};
use crate::worlds::kitchen::{AdversaryEvent, ScheduledEvent, Trigger};
use crate::worlds::{
    AbstractConfig, AbstractStochasticWorld, KitchenWorld, Regression, WorldError,
};

/// Margin, in standard errors, for one-sided statistical checks.
pub const SE_MARGIN: f64 = 3.0;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("planning for goal `{goal}` failed: {source}")]
    Plan { goal: String, source: PlanError },
}

/// Chain length `N` and per-operator controlled-transition probability `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceParams {
    pub stages: usize,
    pub p: f64,
}

impl ConvergenceParams {
    pub fn new(stages: usize, p: f64) -> Result<Self, AnalysisError> {
        if stages == 0 {
            return Err(AnalysisError::Params(
                "chain length must be at least 1".into(),
            ));
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(AnalysisError::Params(format!("p = {p} outside (0, 1]")));
        }
        Ok(Self { stages, p })
    }

    /// Probability that one pass through the whole chain succeeds.
    pub fn pass_probability(&self) -> f64 {
        self.p.powi(self.stages as i32)
    }

    /// γ = 1 − p^N.
    pub fn gamma(&self) -> f64 {
        1.0 - self.pass_probability()
    }

    /// ν = p^−N.
    pub fn inflation(&self) -> f64 {
        self.pass_probability().recip()
    }
}

/// Lower bound on reaching the goal within `k` uncontrolled transitions: 1 − γ^(k+1).
pub fn pk_bound(params: &ConvergenceParams, k: u64) -> f64 {
    let exp = i32::try_from(k.saturating_add(1)).unwrap_or(i32::MAX);
    1.0 - params.gamma().powi(exp)
}

/// Upper bound on expected transitions to the goal: N · p^−N.
pub fn expected_transitions_bound(params: &ConvergenceParams) -> f64 {
    params.stages as f64 * params.inflation()
}

/// Default per-trial tick budget, 100 · N / p^N rounded up.
pub fn default_tick_budget(params: &ConvergenceParams) -> u64 {
    (100.0 * expected_transitions_bound(params)).ceil() as u64
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ExecutionMode {
    Serial,
    /// Uses the rayon pool when the `parallel` feature is on, serial otherwise.
    #[default]
    Parallel,
}

impl ExecutionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ExecutionMode::Serial => "serial",
            ExecutionMode::Parallel => "parallel",
        }
    }
}

/// Runs `f(0..n)` and returns the results in index order.
fn run_indexed<T, F>(n: u64, mode: ExecutionMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecutionMode::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceOptions {
    pub trials: u64,
    pub seed: u64,
    pub regression: Regression,
    pub mode: ExecutionMode,
    /// Overrides [`default_tick_budget`].
    pub tick_budget: Option<u64>,
}

impl ConvergenceOptions {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            regression: Regression::ToStart,
            mode: ExecutionMode::default(),
            tick_budget: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub success: bool,
    pub transitions: u64,
    pub uncontrolled: u64,
    pub ticks: u64,
}

#[derive(Debug, Clone)]
pub struct TrialSummary {
    pub params: ConvergenceParams,
    pub regression: Regression,
    pub seed: u64,
    pub tick_budget: u64,
    pub records: Vec<TrialRecord>,
    /// Wall-clock time per trial. Not part of any deterministic output.
    pub wall_clock: Vec<Duration>,
}

impl TrialSummary {
    pub fn trials(&self) -> u64 {
        self.records.len() as u64
    }

    pub fn successes(&self) -> u64 {
        self.records.iter().filter(|r| r.success).count() as u64
    }

    pub fn transitions(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.transitions).collect()
    }

    pub fn uncontrolled(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.uncontrolled).collect()
    }

    pub fn mean_transitions(&self) -> f64 {
        mean(self.records.iter().map(|r| r.transitions as f64))
    }

    /// Standard error of the mean transition count.
    pub fn transitions_se(&self) -> f64 {
        let (_, sd) = mean_sd(self.records.iter().map(|r| r.transitions as f64));
        sd / (self.records.len() as f64).sqrt()
    }

    /// P̂_k for k = 0..=max observed uncontrolled count: the fraction of trials
    /// that reached the goal with at most `k` uncontrolled transitions.
    pub fn pk_curve(&self) -> Vec<f64> {
        let n = self.records.len() as f64;
        let kmax = self
            .records
            .iter()
            .map(|r| r.uncontrolled)
            .max()
            .unwrap_or(0) as usize;
        let mut counts = vec![0u64; kmax + 1];
        for r in self.records.iter().filter(|r| r.success) {
            counts[r.uncontrolled as usize] += 1;
        }
        let mut acc = 0;
        counts
            .into_iter()
            .map(|c| {
                acc += c;
                acc as f64 / n
            })
            .collect()
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

/// Mean and sample standard deviation.
fn mean_sd(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count();
    let m = mean(xs.clone());
    if n < 2 {
        return (m, 0.0);
    }
    let var = xs.map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    (m, var.sqrt())
}

fn run_convergence_trial(
    config: &AbstractConfig,
    engine: &EngineConfig,
    seed: u64,
    trial: u64,
) -> Result<(TrialRecord, Duration), AnalysisError> {
    let start = Instant::now();
    let mut world = AbstractStochasticWorld::with_stream(config.clone(), seed, trial)?;
    let chain = world.chain();
    let trace = execute(&chain, &mut world, Strategy::Reactive, engine, None)?;
    let record = TrialRecord {
        trial,
        success: trace.outcome.is_success(),
        transitions: trace.transitions,
        uncontrolled: trace.uncontrolled,
        ticks: trace.ticks.len() as u64,
    };
    Ok((record, start.elapsed()))
}

/// Runs the reactive executor on the abstract world once per trial. Trial `i`
/// draws from stream `i` of the generator seeded with `options.seed`, so the
/// records do not depend on the execution mode.
pub fn montecarlo_convergence(
    params: &ConvergenceParams,
    options: &ConvergenceOptions,
) -> Result<TrialSummary, AnalysisError> {
    if options.trials == 0 {
        return Err(AnalysisError::NoTrials);
    }
    let mut config = AbstractConfig::uniform(params.stages, params.p);
    config.regression = options.regression;
    config.validate()?;
    let tick_budget = options
        .tick_budget
        .unwrap_or_else(|| default_tick_budget(params));
    let engine = EngineConfig::with_budget(tick_budget);
    let results = run_indexed(options.trials, options.mode, |t| {
        run_convergence_trial(&config, &engine, options.seed, t)
    });
    let mut records = Vec::with_capacity(results.len());
    let mut wall_clock = Vec::with_capacity(results.len());
    for r in results {
        let (rec, dt) = r?;
        records.push(rec);
        wall_clock.push(dt);
    }
    Ok(TrialSummary {
        params: *params,
        regression: options.regression,
        seed: options.seed,
        tick_budget,
        records,
        wall_clock,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PkCheck {
    pub k: u64,
    pub empirical: f64,
    pub bound: f64,
    pub se: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub mean_transitions: f64,
    pub transitions_bound: f64,
    pub mean_passed: bool,
    pub pk: Vec<PkCheck>,
    pub successes: u64,
    pub trials: u64,
}

impl ConvergenceReport {
    pub fn all_reached_goal(&self) -> bool {
        self.successes == self.trials
    }

    pub fn pk_passed(&self) -> bool {
        self.pk.iter().all(|c| c.passed)
    }

    pub fn passed(&self) -> bool {
        self.mean_passed && self.pk_passed() && self.all_reached_goal()
    }
}

/// One-sided checks: mean transitions ≤ N/p^N, and P̂_k ≥ 1 − γ^(k+1) − 3 SE
/// for every observed k, with SE the binomial standard error of P̂_k.
pub fn check_convergence(summary: &TrialSummary) -> ConvergenceReport {
    let n = summary.trials() as f64;
    let bound = expected_transitions_bound(&summary.params);
    let mean_transitions = summary.mean_transitions();
    let pk = summary
        .pk_curve()
        .into_iter()
        .enumerate()
        .map(|(k, empirical)| {
            let k = k as u64;
            let b = pk_bound(&summary.params, k);
            let se = (empirical * (1.0 - empirical) / n).sqrt();
            PkCheck {
                k,
                empirical,
                bound: b,
                se,
                passed: empirical >= b - SE_MARGIN * se,
            }
        })
        .collect();
    ConvergenceReport {
        mean_transitions,
        transitions_bound: bound,
        mean_passed: mean_transitions <= bound,
        pk,
        successes: summary.successes(),
        trials: summary.trials(),
    }
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum McRecord<'a> {
    Params {
        stages: usize,
        p: f64,
        gamma: f64,
        inflation: f64,
        regression: &'a str,
        seed: u64,
        trials: u64,
        tick_budget: u64,
    },
    Trial(&'a TrialRecord),
    Pk(&'a PkCheck),
    Verdict {
        check: &'a str,
        observed: f64,
        bound: f64,
        passed: bool,
    },
}

/// Line-delimited JSON for a convergence run. Per-trial lines are optional.
pub fn convergence_jsonl(
    summary: &TrialSummary,
    report: &ConvergenceReport,
    trials: bool,
) -> String {
    let mut out = String::new();
    let mut push = |r: McRecord| {
        out.push_str(&serde_json::to_string(&r).expect("records serialize"));
        out.push('\n');
    };
    let p = &summary.params;
    push(McRecord::Params {
        stages: p.stages,
        p: p.p,
        gamma: p.gamma(),
        inflation: p.inflation(),
        regression: summary.regression.as_str(),
        seed: summary.seed,
        trials: summary.trials(),
        tick_budget: summary.tick_budget,
    });
    if trials {
        for r in &summary.records {
            push(McRecord::Trial(r));
        }
    }
    for c in &report.pk {
        push(McRecord::Pk(c));
    }
    push(McRecord::Verdict {
        check: "mean_transitions",
        observed: report.mean_transitions,
        bound: report.transitions_bound,
        passed: report.mean_passed,
    });
    push(McRecord::Verdict {
        check: "pk_domination",
        observed: report.pk.iter().filter(|c| !c.passed).count() as f64,
        bound: 0.0,
        passed: report.pk_passed(),
    });
    push(McRecord::Verdict {
        check: "goal_reached",
        observed: report.successes as f64,
        bound: report.trials as f64,
        passed: report.all_reached_goal(),
    });
    out
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Human-readable table for a convergence run.
pub fn convergence_text(summary: &TrialSummary, report: &ConvergenceReport) -> String {
    let p = &summary.params;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "N = {}  p = {}  gamma = {:.6}  inflation = {:.4}  regression = {}  trials = {}",
        p.stages,
        p.p,
        p.gamma(),
        p.inflation(),
        summary.regression.as_str(),
        summary.trials()
    );
    let _ = writeln!(
        out,
        "{:>4}  {:>9}  {:>9}  {:>8}",
        "k", "P_hat", "bound", "3 SE"
    );
    for c in &report.pk {
        let _ = writeln!(
            out,
            "{:>4}  {:>9.6}  {:>9.6}  {:>8.6}{}",
            c.k,
            c.empirical,
            c.bound,
            SE_MARGIN * c.se,
            if c.passed { "" } else { "  <-- below bound" }
        );
    }
    let _ = writeln!(
        out,
        "{} mean transitions {:.4} <= bound {:.2}",
        verdict(report.mean_passed),
        report.mean_transitions,
        report.transitions_bound
    );
    let _ = writeln!(
        out,
        "{} P_hat_k >= 1 - gamma^(k+1) - 3 SE for all observed k",
        verdict(report.pk_passed())
    );
    let _ = writeln!(
        out,
        "{} goal reached in {}/{} trials within {} ticks",
        verdict(report.all_reached_goal()),
        report.successes,
        report.trials,
        summary.tick_budget
    );
    out
}

/// How each benchmark trial picks its goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoalSampler {
    Fixed(String),
    /// Uniformly among the named goals.
    Uniform(Vec<String>),
}

impl GoalSampler {
    /// Every goal declared in `file`.
    pub fn all(file: &DomainFile) -> Self {
        GoalSampler::Uniform(file.goals.iter().map(|g| g.name.clone()).collect())
    }

    fn names(&self) -> Vec<&str> {
        match self {
            GoalSampler::Fixed(g) => vec![g.as_str()],
            GoalSampler::Uniform(gs) => gs.iter().map(String::as_str).collect(),
        }
    }

    fn sample(&self, seed: u64, trial: u64) -> &str {
        match self {
            GoalSampler::Fixed(g) => g,
            GoalSampler::Uniform(gs) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ GOAL_SALT);
                rng.set_stream(trial);
                &gs[rng.random_range(0..gs.len())]
            }
        }
    }
}

const GOAL_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOptions {
    pub strategies: Vec<Strategy>,
    pub interference: bool,
    pub trials: u64,
    pub seed: u64,
    pub mode: ExecutionMode,
    pub engine: EngineConfig,
    pub limits: SearchLimits,
    /// Overrides the domain's grasp noise; `Some(0.0)` disables pose noise.
    pub grasp_noise: Option<f64>,
}

impl BenchmarkOptions {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            strategies: Strategy::ALL.to_vec(),
            interference: true,
            trials,
            seed,
            mode: ExecutionMode::default(),
            engine: EngineConfig::default(),
            limits: SearchLimits::default(),
            grasp_noise: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchmarkTrial {
    pub strategy: &'static str,
    pub trial: u64,
    pub goal: String,
    pub outcome: String,
    pub ticks: u64,
    pub transitions: u64,
    pub uncontrolled: u64,
    pub replans: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRow {
    pub strategy: &'static str,
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// Over successful trials only.
    pub mean_ticks: f64,
    pub sd_ticks: f64,
    pub mean_replans: f64,
    /// Fraction of operator changes labelled controlled: an empirical p.
    pub controlled_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub interference: bool,
    pub seed: u64,
    pub rows: Vec<BenchmarkRow>,
    pub trials: Vec<BenchmarkTrial>,
}

impl BenchmarkReport {
    pub fn row(&self, strategy: Strategy) -> Option<&BenchmarkRow> {
        self.rows.iter().find(|r| r.strategy == strategy.as_str())
    }
}

/// Drawer named by the first `in_drawer` literal of a goal.
fn goal_drawer(file: &DomainFile, goal: &str) -> Option<String> {
    file.goal(goal)?
        .literals
        .iter()
        .find_map(|l| match (l.predicate.as_str(), l.args.get(1)) {
            ("in_drawer", Some(Term::Object(d))) => Some(d.clone()),
            _ => None,
        })
}

/// Adversary schedule for a run towards `goal`: the domain's script aimed at
/// the goal's target drawer, or the script unchanged if the goal names none.
pub fn interference_schedule(file: &DomainFile, goal: &str) -> Vec<ScheduledEvent> {
    match goal_drawer(file, goal) {
        Some(d) => retarget_adversary(&file.adversary, &d),
        None => file.adversary.clone(),
    }
}

/// The domain's adversary script with every drawer reference pointed at `drawer`.
pub fn retarget_adversary(script: &[ScheduledEvent], drawer: &str) -> Vec<ScheduledEvent> {
    script
        .iter()
        .map(|e| {
            let mut e = e.clone();
            if let Trigger::AfterDrawerOpened { drawer: d, .. } = &mut e.trigger {
                *d = drawer.to_string();
            }
            if let AdversaryEvent::CloseDrawer { drawer: d, .. } = &mut e.event {
                *d = drawer.to_string();
            }
            e
        })
        .collect()
}

fn run_benchmark_trial(
    file: &DomainFile,
    chains: &BTreeMap<String, Chain>,
    replan: &ReplanContext<'_>,
    sampler: &GoalSampler,
    strategy: Strategy,
    options: &BenchmarkOptions,
    trial: u64,
) -> Result<BenchmarkTrial, AnalysisError> {
    let goal = sampler.sample(options.seed, trial);
    let mut config = file.world.clone().ok_or(DomainError::NoWorld)?;
    if let Some(g) = options.grasp_noise {
        config.grasp_noise = g;
    }
    let domain = file.domain()?;
    let mut world = KitchenWorld::with_stream(domain, config, options.seed, trial)?;
    if options.interference {
        world.set_schedule(interference_schedule(file, goal));
    }
    let trace: ExecutionTrace = execute(
        &chains[goal],
        &mut world,
        strategy,
        &options.engine,
        Some(replan),
    )?;
    let outcome = match &trace.outcome {
        Outcome::Success => "success".to_string(),
        Outcome::BudgetExhausted => "budget_exhausted".to_string(),
        Outcome::Failure(r) => r.to_string(),
    };
    Ok(BenchmarkTrial {
        strategy: strategy.as_str(),
        trial,
        goal: goal.to_string(),
        outcome,
        ticks: trace.ticks.len() as u64,
        transitions: trace.transitions,
        uncontrolled: trace.uncontrolled,
        replans: trace.replans,
    })
}

/// Runs every strategy on the same seeded trials: trial `i` uses the same
/// goal, object placements and adversary draws under each strategy.
pub fn run_benchmark(
    file: &DomainFile,
    sampler: &GoalSampler,
    options: &BenchmarkOptions,
) -> Result<BenchmarkReport, AnalysisError> {
    if options.trials == 0 {
        return Err(AnalysisError::NoTrials);
    }
    let domain = file.domain()?;
    let operators = file.ground_operators(&domain)?;
    let initial = file.init_state(&domain)?;
    let mut chains = BTreeMap::new();
    for name in sampler.names() {
        let goal = file.goal_condition(&domain, name)?;
        let prepared =
            plan_and_prepare(&initial, &goal, &operators, options.limits).map_err(|source| {
                AnalysisError::Plan {
                    goal: name.to_string(),
                    source,
                }
            })?;
        chains.insert(name.to_string(), prepared.chain);
    }
    let replan = ReplanContext {
        operators: &operators,
        limits: options.limits,
        mode: ImplicitMode::Strict,
    };

    let jobs: Vec<(Strategy, u64)> = options
        .strategies
        .iter()
        .flat_map(|&s| (0..options.trials).map(move |t| (s, t)))
        .collect();
    let results = run_indexed(jobs.len() as u64, options.mode, |j| {
        let (s, t) = jobs[j as usize];
        run_benchmark_trial(file, &chains, &replan, sampler, s, options, t)
    });
    let trials = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let rows = options
        .strategies
        .iter()
        .map(|s| {
            let mine: Vec<&BenchmarkTrial> =
                trials.iter().filter(|t| t.strategy == s.as_str()).collect();
            let ok: Vec<&&BenchmarkTrial> =
                mine.iter().filter(|t| t.outcome == "success").collect();
            let (mean_ticks, sd_ticks) = mean_sd(ok.iter().map(|t| t.ticks as f64));
            let changes: u64 = mine.iter().map(|t| t.transitions).sum();
            let bad: u64 = mine.iter().map(|t| t.uncontrolled).sum();
            BenchmarkRow {
                strategy: s.as_str(),
                trials: mine.len() as u64,
                successes: ok.len() as u64,
                success_rate: ok.len() as f64 / mine.len() as f64,
                mean_ticks,
                sd_ticks,
                mean_replans: mean(mine.iter().map(|t| t.replans as f64)),
                controlled_fraction: if changes == 0 {
                    1.0
                } else {
                    1.0 - bad as f64 / changes as f64
                },
            }
        })
        .collect();
    Ok(BenchmarkReport {
        interference: options.interference,
        seed: options.seed,
        rows,
        trials,
    })
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum BenchRecord<'a> {
    Config { interference: bool, seed: u64 },
    Trial(&'a BenchmarkTrial),
    Row(&'a BenchmarkRow),
}

/// Line-delimited JSON for a benchmark report. Per-trial lines are optional.
pub fn benchmark_jsonl(report: &BenchmarkReport, trials: bool) -> String {
    let mut out = String::new();
    let mut push = |r: BenchRecord| {
        out.push_str(&serde_json::to_string(&r).expect("records serialize"));
        out.push('\n');
    };
    push(BenchRecord::Config {
        interference: report.interference,
        seed: report.seed,
    });
    if trials {
        for t in &report.trials {
            push(BenchRecord::Trial(t));
        }
    }
    for r in &report.rows {
        push(BenchRecord::Row(r));
    }
    out
}

/// Table of success rates and tick counts per strategy.
pub fn benchmark_text(report: &BenchmarkReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "interference: {}  seed: {}  (times in simulation ticks)",
        if report.interference { "on" } else { "off" },
        report.seed
    );
    let _ = writeln!(
        out,
        "{:<14} {:>8} {:>20} {:>8} {:>11}",
        "strategy", "success", "ticks (mean +- sd)", "replans", "controlled"
    );
    for r in &report.rows {
        let ticks = if r.successes == 0 {
            "-".to_string()
        } else {
            format!("{:.1} +- {:.1}", r.mean_ticks, r.sd_ticks)
        };
        let _ = writeln!(
            out,
            "{:<14} {:>7.0}% {:>20} {:>8.2} {:>11.3}",
            r.strategy,
            100.0 * r.success_rate,
            ticks,
            r.mean_replans,
            r.controlled_fraction
        );
    }
    out
}
