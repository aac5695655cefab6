//! `rlds`: validate, plan, execute and benchmark reactive operator chains.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use rlds::analysis::{
    benchmark_jsonl, benchmark_text, check_convergence, convergence_jsonl, convergence_text,
    interference_schedule, montecarlo_convergence, run_benchmark, BenchmarkOptions,
    ConvergenceOptions, ConvergenceParams, ExecutionMode, GoalSampler,
};
use rlds::domain_io::{parse_domain, serialize_domain, write_trace, DomainFile, KITCHEN_FIXTURE};
use rlds::executor::{execute, EngineConfig, ExecutionTrace, ReplanContext, Strategy};
use rlds::logic::{Condition, Domain};
use rlds::operators::{
    attach_recovery, augment_with_implicit, check_completeness, compose_hierarchical,
    implicit_conditions, verify_chain, Chain, CompletenessMode, ImplicitMode, Operator,
    EXHAUSTIVE_LIMIT,
};
use rlds::planner::{plan_and_prepare, SearchLimits};
use rlds::worlds::{KitchenWorld, Regression, SymbolicWorld};

const DOMAIN_ENV: &str = "RLDS_DOMAIN_PATH";
const COMPLETENESS_SAMPLES: usize = 10_000;

#[derive(Parser)]
#[command(
    name = "rlds",
    version,
    about = "Reactive operator chains over logical-dynamical systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Domain file, or a name looked up in the directories of RLDS_DOMAIN_PATH.
    /// Defaults to the bundled kitchen domain.
    #[arg(long, global = true)]
    domain: Option<String>,
    /// Colon-separated directories searched for `--domain` names.
    #[arg(long = "domain-path", env = DOMAIN_ENV, global = true, hide_env_values = true)]
    domain_path: Option<String>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit line-delimited JSON records.
    #[arg(long, global = true)]
    machine_readable: bool,
    /// Omit the header line (the only output that carries a timestamp).
    #[arg(long, global = true)]
    no_header: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Reactive,
    Linear,
    LinearReplan,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Reactive => Strategy::Reactive,
            StrategyArg::Linear => Strategy::Linear,
            StrategyArg::LinearReplan => Strategy::LinearReplan,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RegressionArg {
    ToStart,
    OneBack,
    Uniform,
}

impl From<RegressionArg> for Regression {
    fn from(r: RegressionArg) -> Self {
        match r {
            RegressionArg::ToStart => Regression::ToStart,
            RegressionArg::OneBack => Regression::OneBack,
            RegressionArg::Uniform => Regression::Uniform,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a domain and check every named plan's chain.
    Validate {
        /// Check the plans as written, without implicit conditions.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Plan for a goal and print the augmented chain.
    Plan {
        #[arg(long)]
        goal: String,
        #[command(flatten)]
        common: Common,
    },
    /// Execute a chain in the domain's world and write the trace.
    Exec {
        #[arg(long)]
        goal: String,
        #[arg(long, value_enum, default_value = "reactive")]
        strategy: StrategyArg,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "on")]
        interference: OnOff,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        /// Per-step success probability in worlds without geometry.
        #[arg(long, default_value_t = 1.0)]
        success: f64,
        /// Per-tick bit flip probability in worlds without geometry.
        #[arg(long, default_value_t = 0.0)]
        flip: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Check the convergence bounds on the abstract stochastic world.
    Montecarlo {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Chain length N.
        #[arg(long, default_value_t = 5)]
        stages: usize,
        /// Per-operator success probability.
        #[arg(long, default_value_t = 0.9)]
        p: f64,
        #[arg(long, value_enum, default_value = "to-start")]
        regression: RegressionArg,
        /// Run trials on one thread.
        #[arg(long)]
        serial: bool,
        /// Include one record per trial in machine-readable output.
        #[arg(long)]
        per_trial: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Compare execution strategies on the kitchen domain.
    Bench {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, value_enum, default_value = "on")]
        interference: OnOff,
        /// Fixed goal; by default each trial draws one of the domain's goals.
        #[arg(long)]
        goal: Option<String>,
        /// Strategies to run (repeatable); all by default.
        #[arg(long, value_enum)]
        strategy: Vec<StrategyArg>,
        /// Override the grasp pose noise (0 disables it).
        #[arg(long)]
        grasp_noise: Option<f64>,
        #[arg(long)]
        serial: bool,
        #[arg(long)]
        per_trial: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Build a macro operator from a named plan and add it to the domain.
    Compose {
        #[arg(long)]
        plan: String,
        /// Name of the new operator.
        #[arg(long)]
        name: String,
        /// Rewrite the `--domain` file instead of printing the result.
        #[arg(long)]
        in_place: bool,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Validate { common, .. }
            | Command::Plan { common, .. }
            | Command::Exec { common, .. }
            | Command::Montecarlo { common, .. }
            | Command::Bench { common, .. }
            | Command::Compose { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Plan { .. } => "plan",
            Command::Exec { .. } => "exec",
            Command::Montecarlo { .. } => "montecarlo",
            Command::Bench { .. } => "bench",
            Command::Compose { .. } => "compose",
        }
    }
}

/// A failure reported on stderr with the `error: ` prefix.
struct Failure {
    message: String,
    code: u8,
}

fn fail(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 1,
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 2,
    }
}

/// Primary output plus whether the run produced findings (exit 1).
struct Report {
    text: String,
    findings: bool,
}

fn resolve_domain(common: &Common) -> Result<Option<PathBuf>, Failure> {
    let Some(name) = &common.domain else {
        return Ok(None);
    };
    let direct = PathBuf::from(name);
    if direct.is_file() {
        return Ok(Some(direct));
    }
    if let Some(dirs) = &common.domain_path {
        for dir in dirs.split(':').filter(|d| !d.is_empty()) {
            for candidate in [
                Path::new(dir).join(name),
                Path::new(dir).join(format!("{name}.rlds")),
            ] {
                if candidate.is_file() {
                    return Ok(Some(candidate));
                }
            }
        }
    }
    Err(usage(format!("domain `{name}` not found")))
}

fn load(common: &Common) -> Result<(DomainFile, Option<PathBuf>), Failure> {
    let path = resolve_domain(common)?;
    let (text, label) = match &path {
        Some(p) => (
            fs::read_to_string(p).map_err(|e| fail(format!("cannot read {}: {e}", p.display())))?,
            p.display().to_string(),
        ),
        None => (KITCHEN_FIXTURE.to_string(), "<bundled kitchen>".to_string()),
    };
    let file = parse_domain(&text).map_err(|diags| {
        let rendered: Vec<String> = diags.iter().map(|d| format!("{label}:{d}")).collect();
        fail(format!(
            "{} problem(s) in domain\n{}",
            diags.len(),
            rendered.join("\n")
        ))
    })?;
    Ok((file, path))
}

fn header(command: &str, machine: bool) -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let version = env!("CARGO_PKG_VERSION");
    if machine {
        format!(
            "{}\n",
            json!({"record": "run", "tool": "rlds", "version": version, "command": command, "unix_time": secs})
        )
    } else {
        format!("# rlds {version} {command} (unix time {secs})\n")
    }
}

fn jsonl<T: Serialize>(out: &mut String, record: &T) {
    out.push_str(&serde_json::to_string(record).expect("records serialize"));
    out.push('\n');
}

fn literal_list(domain: &Domain, c: &Condition) -> Vec<String> {
    c.literals()
        .iter()
        .map(|l| domain.display_literal(*l))
        .collect()
}

fn completeness_mode(domain: &Domain) -> CompletenessMode {
    if domain.len() <= EXHAUSTIVE_LIMIT {
        CompletenessMode::Exhaustive
    } else {
        CompletenessMode::Sampled {
            samples: COMPLETENESS_SAMPLES,
            seed: 0,
        }
    }
}

fn validate(file: &DomainFile, raw: bool, machine: bool) -> Result<Report, Failure> {
    let domain = file.domain().map_err(|e| fail(e.to_string()))?;
    let operators = file
        .ground_operators(&domain)
        .map_err(|e| fail(e.to_string()))?;
    let mut out = String::new();
    let mut findings = false;
    if !machine {
        out.push_str(&format!(
            "domain: {} groundings, {} ground operators, {} plan(s)\n",
            domain.len(),
            operators.len(),
            file.plans.len()
        ));
    }
    for named in &file.plans {
        let steps = file
            .plan_operators(&named.name, &operators)
            .map_err(|e| fail(e.to_string()))?;
        let goal = match &named.goal {
            Some(g) => file
                .goal_condition(&domain, g)
                .map_err(|e| fail(e.to_string()))?,
            None => Condition::empty(),
        };
        let mut chain = Chain::new(steps, goal);
        let mut warnings = Vec::new();
        if !raw && !chain.is_empty() {
            let implicit = implicit_conditions(&chain.operators, &chain.goal)
                .map_err(|e| fail(e.to_string()))?;
            warnings = implicit.warnings.clone();
            chain = augment_with_implicit(&chain, &implicit).map_err(|e| fail(e.to_string()))?;
        }
        let chain = attach_recovery(chain, &operators);
        let report = verify_chain(&chain);
        let completeness = check_completeness(&chain, &domain, completeness_mode(&domain))
            .map_err(|e| fail(e.to_string()))?;
        findings |= !report.passed() || !completeness.complete;
        if machine {
            for v in &report.violations {
                jsonl(
                    &mut out,
                    &json!({"record": "violation", "plan": named.name, "position": v.position,
                        "operator": v.operator, "literal": domain.display_literal(v.literal),
                        "kind": format!("{:?}", v.kind)}),
                );
            }
            for w in &warnings {
                jsonl(
                    &mut out,
                    &json!({"record": "warning", "plan": named.name, "position": w.position,
                        "operator": w.operator, "literal": domain.display_literal(w.literal)}),
                );
            }
            jsonl(
                &mut out,
                &json!({"record": "plan", "plan": named.name, "steps": chain.len(),
                    "violations": report.violations.len(), "complete": completeness.complete,
                    "witness": completeness.witness.as_ref().map(|w| w.to_hex()),
                    "states_checked": completeness.states_checked}),
            );
        } else {
            let verdict = if report.passed() { "ok" } else { "violations" };
            out.push_str(&format!(
                "plan {}: {} steps, chain {verdict}, {}\n",
                named.name,
                chain.len(),
                if completeness.complete {
                    format!("complete ({} states checked)", completeness.states_checked)
                } else {
                    "incomplete".to_string()
                }
            ));
            for v in &report.violations {
                out.push_str(&format!(
                    "  violation at operator {} ({}): {} [{:?}]\n",
                    v.position,
                    v.operator,
                    domain.display_literal(v.literal),
                    v.kind
                ));
            }
            for w in &warnings {
                out.push_str(&format!(
                    "  warning: operator {} ({}) overwrites {} required later\n",
                    w.position,
                    w.operator,
                    domain.display_literal(w.literal)
                ));
            }
            if let Some(w) = &completeness.witness {
                let on: Vec<String> = w
                    .ones()
                    .map(|i| domain.atom(i).map(|a| a.to_string()).unwrap_or_default())
                    .collect();
                out.push_str(&format!(
                    "  no operator enterable in state {{{}}}\n",
                    on.join(", ")
                ));
            }
        }
    }
    Ok(Report {
        text: out,
        findings,
    })
}

fn describe_operator(
    domain: &Domain,
    op: &Operator,
    implicit: Option<&Condition>,
) -> serde_json::Value {
    json!({
        "operator": op.name,
        "role": op.role.as_str(),
        "policy": op.policy.to_string(),
        "entry": literal_list(domain, &op.entry),
        "run": literal_list(domain, &op.run),
        "effects": literal_list(domain, &op.effects),
        "implicit": implicit.map(|c| literal_list(domain, c)).unwrap_or_default(),
    })
}

fn plan_cmd(file: &DomainFile, goal_name: &str, machine: bool) -> Result<Report, Failure> {
    let domain = file.domain().map_err(|e| fail(e.to_string()))?;
    let operators = file
        .ground_operators(&domain)
        .map_err(|e| fail(e.to_string()))?;
    let goal = file
        .goal_condition(&domain, goal_name)
        .map_err(|e| usage(e.to_string()))?;
    let initial = file.init_state(&domain).map_err(|e| fail(e.to_string()))?;
    let prepared = plan_and_prepare(&initial, &goal, &operators, SearchLimits::default())
        .map_err(|e| fail(format!("no plan for `{goal_name}`: {e}")))?;
    let chain = &prepared.chain;
    let mut out = String::new();
    if machine {
        jsonl(
            &mut out,
            &json!({"record": "goal", "goal": goal_name, "literals": literal_list(&domain, &goal),
                "steps": chain.len(), "expansions": prepared.expansions}),
        );
        for (i, op) in chain.operators.iter().enumerate() {
            let mut v = describe_operator(&domain, op, prepared.implicit.per_operator.get(i));
            v["record"] = json!("step");
            v["position"] = json!(i + 1);
            jsonl(&mut out, &v);
        }
        for op in chain.reactions.iter().chain(&chain.fallbacks) {
            let mut v = describe_operator(&domain, op, None);
            v["record"] = json!("recovery");
            jsonl(&mut out, &v);
        }
        for w in &prepared.implicit.warnings {
            jsonl(
                &mut out,
                &json!({"record": "warning", "position": w.position, "operator": w.operator,
                    "literal": domain.display_literal(w.literal)}),
            );
        }
    } else {
        out.push_str(&format!(
            "goal {goal_name}: {}\n{} steps, {} expansions\n",
            domain.display_condition(&goal),
            chain.len(),
            prepared.expansions
        ));
        for (i, op) in chain.operators.iter().enumerate() {
            out.push_str(&format!("{:>2}. {}\n", i + 1, op.name));
            out.push_str(&format!(
                "      entry:    {}\n",
                domain.display_condition(&op.entry)
            ));
            out.push_str(&format!(
                "      run:      {}\n",
                domain.display_condition(&op.run)
            ));
            out.push_str(&format!(
                "      effects:  {}\n",
                domain.display_condition(&op.effects)
            ));
            if let Some(c) = prepared.implicit.per_operator.get(i) {
                out.push_str(&format!(
                    "      implicit: {}\n",
                    domain.display_condition(c)
                ));
            }
        }
        for op in &chain.reactions {
            out.push_str(&format!(
                "reaction {}  entry {}\n",
                op.name,
                domain.display_condition(&op.entry)
            ));
        }
        for op in &chain.fallbacks {
            out.push_str(&format!(
                "fallback {}  entry {}\n",
                op.name,
                domain.display_condition(&op.entry)
            ));
        }
        for w in &prepared.implicit.warnings {
            out.push_str(&format!(
                "warning: operator {} ({}) overwrites {} required later\n",
                w.position,
                w.operator,
                domain.display_literal(w.literal)
            ));
        }
    }
    Ok(Report {
        text: out,
        findings: false,
    })
}

#[allow(clippy::too_many_arguments)]
fn exec_cmd(
    file: &DomainFile,
    goal_name: &str,
    strategy: Strategy,
    seed: u64,
    interference: bool,
    budget: u64,
    success: f64,
    flip: f64,
) -> Result<(ExecutionTrace, usize), Failure> {
    if budget == 0 {
        return Err(usage("--budget must be at least 1"));
    }
    let domain = file.domain().map_err(|e| fail(e.to_string()))?;
    let operators = file
        .ground_operators(&domain)
        .map_err(|e| fail(e.to_string()))?;
    let goal = file
        .goal_condition(&domain, goal_name)
        .map_err(|e| usage(e.to_string()))?;
    let initial = file.init_state(&domain).map_err(|e| fail(e.to_string()))?;
    let limits = SearchLimits::default();
    let prepared = plan_and_prepare(&initial, &goal, &operators, limits)
        .map_err(|e| fail(format!("no plan for `{goal_name}`: {e}")))?;
    let replan = ReplanContext {
        operators: &operators,
        limits,
        mode: ImplicitMode::Strict,
    };
    let config = EngineConfig::with_budget(budget);
    let groundings = domain.len();
    let trace = match &file.world {
        Some(world) => {
            let mut w =
                KitchenWorld::new(domain, world.clone(), seed).map_err(|e| fail(e.to_string()))?;
            if interference {
                w.set_schedule(interference_schedule(file, goal_name));
            }
            execute(&prepared.chain, &mut w, strategy, &config, Some(&replan))
        }
        None => {
            let mut w = SymbolicWorld::new(domain, initial, &operators, success, flip, seed)
                .map_err(|e| usage(e.to_string()))?;
            execute(&prepared.chain, &mut w, strategy, &config, Some(&replan))
        }
    }
    .map_err(|e| fail(e.to_string()))?;
    Ok((trace, groundings))
}

fn exec_summary(trace: &ExecutionTrace, strategy: Strategy, goal: &str, seed: u64) -> String {
    format!(
        "strategy {strategy}  goal {goal}  seed {seed}\noutcome {} after {} ticks: {} transitions ({} uncontrolled), {} replans\nsequence: {}\n",
        match &trace.outcome {
            rlds::executor::Outcome::Success => "success".to_string(),
            rlds::executor::Outcome::BudgetExhausted => "budget_exhausted".to_string(),
            rlds::executor::Outcome::Failure(r) => format!("failure {r}"),
        },
        trace.ticks.len(),
        trace.transitions,
        trace.uncontrolled,
        trace.replans,
        trace.operator_sequence().join(" ")
    )
}

fn compose_cmd(file: &DomainFile, plan: &str, name: &str) -> Result<String, Failure> {
    if file.operator(name).is_some() {
        return Err(fail(format!("operator `{name}` already exists")));
    }
    let domain = file.domain().map_err(|e| fail(e.to_string()))?;
    let operators = file
        .ground_operators(&domain)
        .map_err(|e| fail(e.to_string()))?;
    let steps = file
        .plan_operators(plan, &operators)
        .map_err(|e| usage(e.to_string()))?;
    if steps.is_empty() {
        return Err(fail(format!("plan `{plan}` has no steps")));
    }
    let goal = match file.plan(plan).and_then(|p| p.goal.as_deref()) {
        Some(g) => file
            .goal_condition(&domain, g)
            .map_err(|e| fail(e.to_string()))?,
        None => Condition::empty(),
    };
    let implicit = implicit_conditions(&steps, &goal).map_err(|e| fail(e.to_string()))?;
    let augmented = augment_with_implicit(&Chain::new(steps.clone(), goal), &implicit)
        .map_err(|e| fail(e.to_string()))?;
    let guard = augmented.operators[0].entry.clone();
    let composed = compose_hierarchical(&steps, name)
        .and_then(|op| op.with_guard(&guard))
        .map_err(|e| fail(e.to_string()))?;
    let mut out = file.clone();
    out.push_ground_operator(&domain, &composed);
    Ok(serialize_domain(&out))
}

fn print_stdout(text: &str) -> Result<(), Failure> {
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| fail(format!("cannot write output: {e}")))
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(p) => {
            fs::write(p, text).map_err(|e| fail(format!("cannot write {}: {e}", p.display())))
        }
        None => print_stdout(text),
    }
}

fn mode(serial: bool) -> ExecutionMode {
    if serial {
        ExecutionMode::Serial
    } else {
        ExecutionMode::Parallel
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let common = cli.command.common().clone();
    let machine = common.machine_readable;
    let mut text = if common.no_header {
        String::new()
    } else {
        header(cli.command.name(), machine)
    };
    let findings = match cli.command {
        Command::Validate { raw, .. } => {
            let (file, _) = load(&common)?;
            let r = validate(&file, raw, machine)?;
            text.push_str(&r.text);
            r.findings
        }
        Command::Plan { goal, .. } => {
            let (file, _) = load(&common)?;
            let r = plan_cmd(&file, &goal, machine)?;
            text.push_str(&r.text);
            r.findings
        }
        Command::Exec {
            goal,
            strategy,
            seed,
            interference,
            budget,
            success,
            flip,
            ..
        } => {
            let (file, _) = load(&common)?;
            let strategy = Strategy::from(strategy);
            let (trace, groundings) = exec_cmd(
                &file,
                &goal,
                strategy,
                seed,
                matches!(interference, OnOff::On),
                budget,
                success,
                flip,
            )?;
            let trace_text = write_trace(&trace, groundings);
            // The trace carries its own header record, so the run header is
            // only ever added to the human-readable summary.
            let stdout_text = match (&common.out, machine) {
                (None, true) => trace_text,
                (Some(_), true) => {
                    emit(&common, &trace_text)?;
                    trace_text.lines().last().unwrap_or_default().to_string() + "\n"
                }
                (out, false) => {
                    if out.is_some() {
                        emit(&common, &trace_text)?;
                    }
                    text + &exec_summary(&trace, strategy, &goal, seed)
                }
            };
            print_stdout(&stdout_text)?;
            return Ok(false);
        }
        Command::Montecarlo {
            seed,
            trials,
            stages,
            p,
            regression,
            serial,
            per_trial,
            ..
        } => {
            if trials == 0 {
                return Err(usage("--trials must be at least 1"));
            }
            let params = ConvergenceParams::new(stages, p).map_err(|e| usage(e.to_string()))?;
            let mut options = ConvergenceOptions::new(trials, seed);
            options.regression = regression.into();
            options.mode = mode(serial);
            let summary =
                montecarlo_convergence(&params, &options).map_err(|e| fail(e.to_string()))?;
            let report = check_convergence(&summary);
            if machine {
                text.push_str(&convergence_jsonl(&summary, &report, per_trial));
            } else {
                text.push_str(&convergence_text(&summary, &report));
            }
            !report.passed()
        }
        Command::Bench {
            seed,
            trials,
            interference,
            goal,
            strategy,
            grasp_noise,
            serial,
            per_trial,
            ..
        } => {
            if trials == 0 {
                return Err(usage("--trials must be at least 1"));
            }
            let (file, _) = load(&common)?;
            if file.world.is_none() {
                return Err(usage("bench needs a domain with a world block"));
            }
            let sampler = match goal {
                Some(g) => {
                    if file.goal(&g).is_none() {
                        return Err(usage(format!("unknown goal `{g}`")));
                    }
                    GoalSampler::Fixed(g)
                }
                None if file.goals.is_empty() => return Err(usage("domain declares no goals")),
                None => GoalSampler::all(&file),
            };
            let mut options = BenchmarkOptions::new(trials, seed);
            options.interference = matches!(interference, OnOff::On);
            options.mode = mode(serial);
            options.grasp_noise = grasp_noise;
            if !strategy.is_empty() {
                options.strategies = strategy.into_iter().map(Strategy::from).collect();
            }
            let report =
                run_benchmark(&file, &sampler, &options).map_err(|e| fail(e.to_string()))?;
            if machine {
                text.push_str(&benchmark_jsonl(&report, per_trial));
            } else {
                text.push_str(&benchmark_text(&report));
            }
            false
        }
        Command::Compose {
            plan,
            name,
            in_place,
            ..
        } => {
            let (file, path) = load(&common)?;
            let composed = compose_cmd(&file, &plan, &name)?;
            if in_place {
                let path = path.ok_or_else(|| usage("--in-place needs --domain"))?;
                fs::write(&path, &composed)
                    .map_err(|e| fail(format!("cannot write {}: {e}", path.display())))?;
                return Ok(false);
            }
            // The result is a domain file; no header line.
            emit(&common, &composed)?;
            return Ok(false);
        }
    };
    emit(&common, &text)?;
    Ok(findings)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
