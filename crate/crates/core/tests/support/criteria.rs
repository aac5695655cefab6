//! The acceptance criteria as functions returning a one-line detail on
//! success and the reason on failure.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlds::analysis::{
    benchmark_jsonl, check_convergence, convergence_jsonl, expected_transitions_bound,
    montecarlo_convergence, pk_bound, run_benchmark, BenchmarkOptions, ConvergenceOptions,
    ConvergenceParams, ExecutionMode, GoalSampler,
};
use rlds::domain_io::{
    bundled_kitchen, parse_domain, serialize_domain, Diagnostic, KITCHEN_FIXTURE,
};
use rlds::executor::{execute, EngineConfig, Strategy, StuckPolicy, TransitionLabel};
use rlds::operators::{
    implicit_conditions, verify_chain, Chain, Operator, OperatorRole, PolicyRef,
};
use rlds::planner::{plan, plan_and_prepare, PlanError, SearchLimits};
use rlds::worlds::SymbolicWorld;

use super::{
    bfs_shortest, condition_set, implicit_oracle, random_condition, random_instance,
    random_operators, random_state, simulate, Instance,
};

pub type Verdict = Result<String, String>;

pub const FIXTURES: [(&str, &str); 3] = [
    ("kitchen.rlds", include_str!("../../fixtures/kitchen.rlds")),
    (
        "kitchen_reduced.rlds",
        include_str!("../../fixtures/kitchen_reduced.rlds"),
    ),
    (
        "broken_chain.rlds",
        include_str!("../../fixtures/broken_chain.rlds"),
    ),
];

/// Three significant digits, as the reference values are printed.
pub fn sig3(x: f64) -> String {
    let digits = 2 - x.abs().log10().floor() as i32;
    format!("{:.*}", digits.max(0) as usize, x)
}

fn convergence(
    stages: usize,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<(rlds::analysis::TrialSummary, Duration), String> {
    let params = ConvergenceParams::new(stages, p).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let s = montecarlo_convergence(&params, &ConvergenceOptions::new(trials, seed))
        .map_err(|e| e.to_string())?;
    Ok((s, start.elapsed()))
}

/// p = 0.9, N = 5, 10,000 trials: mean transitions ≤ 8.47 in under 10 s.
pub fn c1_convergence_bound() -> Verdict {
    let (s, dt) = convergence(5, 0.9, 10_000, 1)?;
    let mean = s.mean_transitions();
    let detail = format!(
        "mean transitions {mean:.4} vs 8.47 over {} trials in {dt:.2?}",
        s.trials()
    );
    if s.successes() != s.trials() {
        return Err(format!(
            "{} trials missed the goal; {detail}",
            s.trials() - s.successes()
        ));
    }
    if mean <= 8.47 && dt < Duration::from_secs(10) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Inflation 1.67 and 2.44 to three significant digits; Monte Carlo means within 16.7 and 9.77.
pub fn c2_inflation_grid() -> Verdict {
    let mut parts = Vec::new();
    for (stages, p, nu, bound) in [(10, 0.95, "1.67", 16.7), (4, 0.8, "2.44", 9.77)] {
        let params = ConvergenceParams::new(stages, p).map_err(|e| e.to_string())?;
        let from_bound = expected_transitions_bound(&params) / stages as f64;
        let from_pk = 1.0 / pk_bound(&params, 0);
        for (what, v) in [
            ("inflation", params.inflation()),
            ("E[T]/N", from_bound),
            ("1/P_0 bound", from_pk),
        ] {
            if sig3(v) != nu {
                return Err(format!("p={p} N={stages}: {what} = {v} is not {nu}"));
            }
        }
        if sig3(expected_transitions_bound(&params)) != format!("{bound}") {
            return Err(format!(
                "p={p} N={stages}: bound {} is not {bound}",
                expected_transitions_bound(&params)
            ));
        }
        let (s, _) = convergence(stages, p, 10_000, 2)?;
        let mean = s.mean_transitions();
        if mean > bound {
            return Err(format!("p={p} N={stages}: mean {mean:.4} exceeds {bound}"));
        }
        parts.push(format!("nu={nu} mean {mean:.3}<={bound}"));
    }
    Ok(parts.join("; "))
}

/// P̂_k ≥ 1 − γ^(k+1) − 3 SE for every observed k at both grid points.
pub fn c3_pk_domination() -> Verdict {
    let mut parts = Vec::new();
    for (stages, p) in [(10, 0.95), (4, 0.8)] {
        let (s, _) = convergence(stages, p, 10_000, 3)?;
        let r = check_convergence(&s);
        if let Some(c) = r.pk.iter().find(|c| !c.passed) {
            return Err(format!(
                "p={p} N={stages} k={}: P_hat {:.5} < bound {:.5} - 3*{:.5}",
                c.k, c.empirical, c.bound, c.se
            ));
        }
        parts.push(format!("p={p} N={stages}: k=0..{} ok", r.pk.len() - 1));
    }
    Ok(parts.join("; "))
}

/// Kitchen with interference and pose noise: linear 0%, reactive and
/// linear-replan ≥ 95%, reactive no slower than linear-replan, under 60 s.
pub fn c4_kitchen_benchmark() -> Verdict {
    let file = bundled_kitchen();
    let start = Instant::now();
    let report = run_benchmark(
        &file,
        &GoalSampler::all(&file),
        &BenchmarkOptions::new(100, 4),
    )
    .map_err(|e| e.to_string())?;
    let dt = start.elapsed();
    let row = |s| report.row(s).expect("strategy ran");
    let (re, li, lr) = (
        row(Strategy::Reactive),
        row(Strategy::Linear),
        row(Strategy::LinearReplan),
    );
    let detail = format!(
        "success reactive {:.0}% linear {:.0}% replan {:.0}%; ticks {:.1} vs {:.1}; {dt:.2?}",
        100.0 * re.success_rate,
        100.0 * li.success_rate,
        100.0 * lr.success_rate,
        re.mean_ticks,
        lr.mean_ticks
    );
    let ok = li.success_rate == 0.0
        && re.success_rate >= 0.95
        && lr.success_rate >= 0.95
        && re.mean_ticks <= lr.mean_ticks
        && dt < Duration::from_secs(60);
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Random operator sequences and goals over `g` groundings.
fn random_sequence(rng: &mut ChaCha8Rng) -> (Vec<Operator>, rlds::logic::Condition) {
    let g = rng.random_range(2..=10);
    let n = rng.random_range(1..=6);
    (random_operators(rng, g, n), random_condition(rng, g, 1, 4))
}

/// Kitchen pickup steps inherit `drawer_is_open`; 100 random sequences match the oracle.
pub fn c5_implicit_conditions() -> Verdict {
    let file = bundled_kitchen();
    let domain = file.domain().map_err(|e| e.to_string())?;
    let ops = file.ground_operators(&domain).map_err(|e| e.to_string())?;
    let goal = file
        .goal_condition(&domain, "spam_in_drawer")
        .map_err(|e| e.to_string())?;
    let init = file.init_state(&domain).map_err(|e| e.to_string())?;
    let prepared =
        plan_and_prepare(&init, &goal, &ops, SearchLimits::default()).map_err(|e| e.to_string())?;
    let open = domain
        .literal("drawer_is_open", &["top"], true)
        .map_err(|e| e.to_string())?;
    for name in ["approach(spam)", "cage(spam)", "grasp(spam)", "lift(spam)"] {
        let i = prepared
            .chain
            .operators
            .iter()
            .position(|o| o.name == name)
            .ok_or_else(|| format!("{name} missing from kitchen plan"))?;
        if !prepared.implicit.per_operator[i].contains(open) {
            return Err(format!("{name} does not carry drawer_is_open(top)"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..100 {
        let (plan, goal) = random_sequence(&mut rng);
        let got = implicit_conditions(&plan, &goal).map_err(|e| e.to_string())?;
        let (want, clashes) = implicit_oracle(&plan, &goal);
        let got_sets: Vec<BTreeSet<_>> = got.per_operator.iter().map(condition_set).collect();
        if got_sets != want {
            return Err(format!(
                "case {case}: implicit {got_sets:?} != oracle {want:?}"
            ));
        }
        let got_clashes: BTreeSet<_> = got
            .warnings
            .iter()
            .map(|w| (w.position, w.literal))
            .collect();
        if got_clashes != clashes || got_clashes.len() != got.warnings.len() {
            return Err(format!(
                "case {case}: warnings {got_clashes:?} != oracle {clashes:?}"
            ));
        }
    }
    Ok("pickup steps carry drawer_is_open(top); 100/100 random cases match".into())
}

/// A solvable random instance whose plan has at least two steps.
pub fn solvable_instance(
    rng: &mut ChaCha8Rng,
    max_g: usize,
    max_ops: usize,
) -> (Instance, Vec<Operator>) {
    loop {
        let inst = random_instance(rng, max_g, max_ops);
        if let Ok(p) = plan(
            &inst.initial,
            &inst.goal,
            &inst.operators,
            SearchLimits::default(),
        ) {
            if p.operators.len() >= 2 {
                return (inst, p.operators);
            }
        }
    }
}

/// 100 random planned and augmented chains verify with no violations.
pub fn c6_chain_verification() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut steps = 0;
    for case in 0..100 {
        let (inst, _) = solvable_instance(&mut rng, 10, 8);
        let prepared = plan_and_prepare(
            &inst.initial,
            &inst.goal,
            &inst.operators,
            SearchLimits::default(),
        )
        .map_err(|e| format!("case {case}: {e}"))?;
        let report = verify_chain(&prepared.chain);
        if !report.passed() {
            return Err(format!("case {case}: {:?}", report.violations));
        }
        steps += prepared.chain.len();
    }
    Ok(format!("100 chains, {steps} steps, 0 violations"))
}

/// 200 random instances: plans simulate to the goal and verdicts agree with BFS.
pub fn c7_planner_soundness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut solvable, mut unsolvable) = (0, 0);
    for case in 0..200 {
        let inst = random_instance(&mut rng, 10, 8);
        let limits = SearchLimits {
            max_expansions: 1 << 12,
            max_depth: 1 << inst.groundings,
        };
        let oracle = bfs_shortest(&inst.initial, &inst.goal, &inst.operators);
        match (
            plan(&inst.initial, &inst.goal, &inst.operators, limits),
            oracle,
        ) {
            (Ok(p), Some(_)) => {
                simulate(&inst.initial, &p.operators, &inst.goal)
                    .map_err(|e| format!("case {case}: {e}"))?;
                solvable += 1;
            }
            (Err(PlanError::FrontierExhausted { .. }), None) => unsolvable += 1,
            (got, want) => return Err(format!("case {case}: planner {got:?}, BFS {want:?}")),
        }
    }
    Ok(format!(
        "{solvable} solvable, {unsolvable} unsolvable, all agree with BFS"
    ))
}

/// A random chain whose run conditions are strict subsets of the entry
/// conditions where possible, plus random reactions and a fallback.
pub fn random_reactive_chain(rng: &mut ChaCha8Rng) -> (Instance, Chain) {
    let (inst, _) = solvable_instance(rng, 8, 6);
    let prepared = plan_and_prepare(
        &inst.initial,
        &inst.goal,
        &inst.operators,
        SearchLimits::default(),
    )
    .expect("instance is solvable");
    let mut chain = prepared.chain;
    for op in chain.operators.iter_mut() {
        let keep: Vec<_> = op
            .run
            .literals()
            .iter()
            .copied()
            .filter(|_| rng.random_bool(0.6))
            .collect();
        op.run = rlds::logic::Condition::new(keep).expect("subset");
    }
    let g = inst.groundings;
    let extra = |rng: &mut ChaCha8Rng, name: String, role| {
        let entry = random_condition(rng, g, 1, 3);
        Operator::new(
            name.clone(),
            entry.clone(),
            entry,
            random_condition(rng, g, 1, 2),
        )
        .with_policy(PolicyRef::new(name, &[]))
        .with_role(role)
    };
    let reactions = (0..rng.random_range(0..=2))
        .map(|k| extra(rng, format!("react{k}"), OperatorRole::Reaction))
        .collect();
    let fallbacks = if rng.random_bool(0.5) {
        vec![extra(rng, "fallback".into(), OperatorRole::Fallback)]
    } else {
        Vec::new()
    };
    (
        inst,
        chain.with_reactions(reactions).with_fallbacks(fallbacks),
    )
}

/// Checks one reactive trace tick by tick against the selection rule.
pub fn check_reactive_trace(
    chain: &Chain,
    trace: &rlds::executor::ExecutionTrace,
) -> Result<(), String> {
    let ranked = chain.ranked();
    let mut prev: Option<usize> = None;
    let (mut transitions, mut uncontrolled) = (0, 0);
    for rec in &trace.ticks {
        let eligible = |r: usize| {
            if Some(r) == prev {
                ranked[r].run.holds(&rec.state)
            } else {
                ranked[r].entry.holds(&rec.state)
            }
        };
        let best = (0..ranked.len()).rev().find(|&r| eligible(r));
        if rec.rank != best {
            return Err(format!(
                "tick {}: selected {:?}, highest eligible {:?}",
                rec.tick, rec.rank, best
            ));
        }
        if let Some(p) = prev {
            if ranked[p].run.holds(&rec.state) && rec.rank.is_none_or(|r| r < p) {
                return Err(format!(
                    "tick {}: dropped rank {p} while its run condition held",
                    rec.tick
                ));
            }
        }
        if rec.operator.as_deref() != rec.rank.map(|r| ranked[r].name.as_str()) {
            return Err(format!(
                "tick {}: operator name does not match rank",
                rec.tick
            ));
        }
        let changed = match (prev, rec.rank) {
            (Some(a), Some(b)) => ranked[a].name != ranked[b].name,
            (None, None) => false,
            _ => true,
        };
        if changed != rec.transition.is_some() {
            return Err(format!(
                "tick {}: transition label present = {}",
                rec.tick,
                rec.transition.is_some()
            ));
        }
        if changed && rec.rank.is_some() {
            transitions += 1;
        }
        if rec.transition == Some(TransitionLabel::Uncontrolled) {
            uncontrolled += 1;
        }
        prev = rec.rank;
    }
    if (transitions, uncontrolled) != (trace.transitions, trace.uncontrolled) {
        return Err(format!(
            "counts ({transitions}, {uncontrolled}) != recorded ({}, {})",
            trace.transitions, trace.uncontrolled
        ));
    }
    Ok(())
}

/// Priority and hysteresis hold on every tick of 1,000 random reactive traces.
pub fn c8_reactive_invariants() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ticks = 0;
    let config = EngineConfig {
        tick_budget: 60,
        stuck_policy: StuckPolicy::Idle,
        ..EngineConfig::default()
    };
    for case in 0..1000u64 {
        let (inst, chain) = random_reactive_chain(&mut rng);
        let ops: Vec<Operator> = chain.ranked().into_iter().cloned().collect();
        let domain = super::flat_domain(inst.groundings);
        let start = random_state(&mut rng, inst.groundings);
        let mut world =
            SymbolicWorld::new(domain, start, &ops, 0.8, 0.03, case).map_err(|e| e.to_string())?;
        let trace = execute(&chain, &mut world, Strategy::Reactive, &config, None)
            .map_err(|e| e.to_string())?;
        check_reactive_trace(&chain, &trace).map_err(|e| format!("case {case}: {e}"))?;
        ticks += trace.ticks.len();
    }
    Ok(format!("1000 traces, {ticks} ticks checked"))
}

/// A mutation with the position its diagnostic must point at, if any.
pub struct Mutant {
    pub text: String,
    pub expect: Option<(usize, usize)>,
    pub kind: &'static str,
}

fn code_part(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Character columns (1-based) of identifiers directly after `(` that are
/// predicate names, on literal-bearing lines.
fn predicate_sites(lines: &[&str], predicates: &BTreeSet<String>) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (li, line) in lines.iter().enumerate() {
        let code = code_part(line);
        let first = code.split_whitespace().next().unwrap_or("");
        if !matches!(first, "pre" | "run" | "eff" | "init" | "goal") {
            continue;
        }
        let chars: Vec<char> = code.chars().collect();
        for i in 0..chars.len() {
            if chars[i] != '(' {
                continue;
            }
            let j = (i + 1..chars.len())
                .find(|&j| !(chars[j].is_alphanumeric() || chars[j] == '_'))
                .unwrap_or(chars.len());
            let word: String = chars[i + 1..j].iter().collect();
            if predicates.contains(&word) {
                out.push((li, i + 2, word.chars().count()));
            }
        }
    }
    out
}

/// Object arguments of ground literals on `init`/`goal` lines: (line, col, len).
fn object_sites(lines: &[&str], objects: &BTreeSet<String>) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (li, line) in lines.iter().enumerate() {
        let code = code_part(line);
        let first = code.split_whitespace().next().unwrap_or("");
        if !matches!(first, "init" | "goal") {
            continue;
        }
        let chars: Vec<char> = code.chars().collect();
        let mut depth_word_start = None;
        for i in 0..=chars.len() {
            let c = chars.get(i).copied().unwrap_or(' ');
            let is_word = c.is_alphanumeric() || c == '_';
            match (is_word, depth_word_start) {
                (true, None) => depth_word_start = Some(i),
                (false, Some(s)) => {
                    let word: String = chars[s..i].iter().collect();
                    let after_open = s > 0 && chars[s - 1] == '(';
                    if objects.contains(&word) && !after_open {
                        out.push((li, s + 1, i - s));
                    }
                    depth_word_start = None;
                }
                _ => {}
            }
        }
    }
    out
}

fn replace_chars(line: &str, col: usize, len: usize, with: &str) -> String {
    let chars: Vec<char> = line.chars().collect();
    let mut s: String = chars[..col - 1].iter().collect();
    s.push_str(with);
    s.extend(&chars[col - 1 + len..]);
    s
}

/// Seeded mutants of `base`. Targeted kinds record where the error must be reported.
pub fn mutants(base: &str, count: usize, seed: u64) -> Vec<Mutant> {
    let parsed = parse_domain(base).expect("base parses");
    let predicates: BTreeSet<String> = parsed.predicates.iter().map(|p| p.name.clone()).collect();
    let objects: BTreeSet<String> = parsed.objects.iter().map(|o| o.name.clone()).collect();
    let lines: Vec<&str> = base.lines().collect();
    let pred_sites = predicate_sites(&lines, &predicates);
    let obj_sites = object_sites(&lines, &objects);
    let code_lines: Vec<usize> = (0..lines.len())
        .filter(|&i| !code_part(lines[i]).trim().is_empty())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rebuild = |li: usize, new_line: String| {
        let mut ls: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
        ls[li] = new_line;
        ls.join("\n") + "\n"
    };
    (0..count)
        .map(|_| match rng.random_range(0..6) {
            0 => {
                let (li, col, len) = pred_sites[rng.random_range(0..pred_sites.len())];
                Mutant {
                    text: rebuild(li, replace_chars(lines[li], col, len, "no_such_pred")),
                    expect: Some((li + 1, col)),
                    kind: "undeclared predicate",
                }
            }
            1 => {
                let (li, col, len) = obj_sites[rng.random_range(0..obj_sites.len())];
                Mutant {
                    text: rebuild(li, replace_chars(lines[li], col, len, "nobody")),
                    expect: Some((li + 1, col)),
                    kind: "undeclared object",
                }
            }
            2 => {
                let li = code_lines[rng.random_range(0..code_lines.len())];
                let n = code_part(lines[li]).chars().count();
                let col = rng.random_range(1..=n + 1);
                let ch = ['@', '$', '%', '!', '"'][rng.random_range(0..5)];
                let chars: Vec<char> = lines[li].chars().collect();
                let mut s: String = chars[..col - 1].iter().collect();
                s.push(ch);
                s.extend(&chars[col - 1..]);
                Mutant {
                    text: rebuild(li, s),
                    expect: Some((li + 1, col)),
                    kind: "stray character",
                }
            }
            3 => {
                // Delete one character anywhere.
                let chars: Vec<char> = base.chars().collect();
                let at = rng.random_range(0..chars.len());
                Mutant {
                    text: chars[..at].iter().chain(&chars[at + 1..]).collect(),
                    expect: None,
                    kind: "deleted character",
                }
            }
            4 => {
                // Swap two random characters.
                let mut chars: Vec<char> = base.chars().collect();
                let a = rng.random_range(0..chars.len());
                let b = rng.random_range(0..chars.len());
                chars.swap(a, b);
                Mutant {
                    text: chars.into_iter().collect(),
                    expect: None,
                    kind: "swapped characters",
                }
            }
            _ => {
                let chars: Vec<char> = base.chars().collect();
                let at = rng.random_range(0..chars.len());
                Mutant {
                    text: chars[..at].iter().collect(),
                    expect: None,
                    kind: "truncated",
                }
            }
        })
        .collect()
}

/// Every diagnostic points inside the text (column at most one past the line end).
pub fn positions_in_bounds(text: &str, diags: &[Diagnostic]) -> Result<(), String> {
    let lines: Vec<&str> = text.lines().collect();
    for d in diags {
        let len = lines.get(d.line.wrapping_sub(1)).map(|l| l.chars().count());
        let ok = match len {
            Some(n) => d.column >= 1 && d.column <= n + 1,
            // End of input: one line past the last.
            None => d.line == lines.len() + 1 && d.column == 1,
        };
        if !ok {
            return Err(format!(
                "diagnostic at {}:{} outside the text: {}",
                d.line, d.column, d.message
            ));
        }
    }
    Ok(())
}

/// Round trip on every fixture; 1,000 kitchen mutants parse without panics
/// and report targeted errors at the mutated position.
pub fn c9_parser() -> Verdict {
    for (name, text) in FIXTURES {
        let a = parse_domain(text).map_err(|d| format!("{name}: {d:?}"))?;
        let out = serialize_domain(&a);
        let b = parse_domain(&out).map_err(|d| format!("{name} (re-read): {d:?}"))?;
        if a != b || serialize_domain(&b) != out {
            return Err(format!("{name}: round trip changed the domain"));
        }
    }
    let mut targeted = 0;
    for (i, m) in mutants(KITCHEN_FIXTURE, 1000, 9).into_iter().enumerate() {
        let result = std::panic::catch_unwind(|| parse_domain(&m.text));
        let parsed = result.map_err(|_| format!("mutant {i} ({}) panicked", m.kind))?;
        if let Err(diags) = &parsed {
            if diags.is_empty() {
                return Err(format!(
                    "mutant {i} ({}): error without diagnostics",
                    m.kind
                ));
            }
            positions_in_bounds(&m.text, diags)
                .map_err(|e| format!("mutant {i} ({}): {e}", m.kind))?;
        }
        if let Some((line, col)) = m.expect {
            targeted += 1;
            let diags = parsed
                .err()
                .ok_or_else(|| format!("mutant {i} ({}) was accepted", m.kind))?;
            if !diags.iter().any(|d| d.line == line && d.column == col) {
                return Err(format!(
                    "mutant {i} ({}): expected {line}:{col}, got {:?}",
                    m.kind,
                    diags.iter().map(|d| (d.line, d.column)).collect::<Vec<_>>()
                ));
            }
        }
    }
    Ok(format!(
        "3 fixtures round-trip; 1000 mutants, {targeted} with exact positions"
    ))
}

/// Equal seeds give byte-identical machine-readable output, serial or parallel.
pub fn c10_determinism() -> Verdict {
    let params = ConvergenceParams::new(5, 0.9).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for mode in [
        ExecutionMode::Serial,
        ExecutionMode::Parallel,
        ExecutionMode::Parallel,
    ] {
        let mut o = ConvergenceOptions::new(10_000, 10);
        o.mode = mode;
        let s = montecarlo_convergence(&params, &o).map_err(|e| e.to_string())?;
        outputs.push(convergence_jsonl(&s, &check_convergence(&s), true));
    }
    if outputs.windows(2).any(|w| w[0] != w[1]) {
        return Err("montecarlo output differs between runs".into());
    }
    let file = bundled_kitchen();
    let mut bench = Vec::new();
    for mode in [
        ExecutionMode::Serial,
        ExecutionMode::Parallel,
        ExecutionMode::Parallel,
    ] {
        let mut o = BenchmarkOptions::new(100, 10);
        o.mode = mode;
        let r = run_benchmark(&file, &GoalSampler::all(&file), &o).map_err(|e| e.to_string())?;
        bench.push(benchmark_jsonl(&r, true));
    }
    if bench.windows(2).any(|w| w[0] != w[1]) {
        return Err("bench output differs between runs".into());
    }
    Ok(format!(
        "montecarlo {} bytes and bench {} bytes identical across serial/parallel repeats",
        outputs[0].len(),
        bench[0].len()
    ))
}

pub type Criterion = (&'static str, fn() -> Verdict);

pub const ALL: [Criterion; 10] = [
    ("1 convergence bound, p=0.9 N=5", c1_convergence_bound),
    ("2 inflation grid", c2_inflation_grid),
    ("3 P_k domination", c3_pk_domination),
    ("4 kitchen benchmark", c4_kitchen_benchmark),
    ("5 implicit conditions", c5_implicit_conditions),
    ("6 chain verification", c6_chain_verification),
    ("7 planner soundness", c7_planner_soundness),
    ("8 reactive invariants", c8_reactive_invariants),
    ("9 parser", c9_parser),
    ("10 determinism", c10_determinism),
];
