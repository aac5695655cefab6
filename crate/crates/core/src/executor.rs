//! Tick-driven chain execution: the reactive selection loop and the two
//! in-order baselines.

use std::fmt;

use thiserror::Error;

use crate::logic::{Condition, LogicalState};
use crate::operators::{Chain, ImplicitMode, Operator};
use crate::planner::{plan_and_prepare_with, SearchLimits};
use crate::worlds::{WorldError, WorldModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Every tick, run the most downstream operator whose condition holds.
    Reactive,
    /// Run plan steps strictly in order; fail when the current one becomes infeasible.
    Linear,
    /// Like `Linear`, but replan from the current state instead of failing.
    LinearReplan,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Reactive, Strategy::Linear, Strategy::LinearReplan];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Reactive => "reactive",
            Strategy::Linear => "linear",
            Strategy::LinearReplan => "linear-replan",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StuckPolicy {
    /// Fail after this many consecutive ticks with nothing selectable.
    ErrorAfter(u64),
    /// Idle until something becomes selectable or the budget runs out.
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub tick_budget: u64,
    /// Ticks per simulated second. Informational only.
    pub tick_rate_hint: f64,
    pub stuck_policy: StuckPolicy,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            tick_budget: 10_000,
            tick_rate_hint: 10.0,
            stuck_policy: StuckPolicy::ErrorAfter(1),
        }
    }
}

impl EngineConfig {
    pub fn with_budget(tick_budget: u64) -> Self {
        Self {
            tick_budget,
            ..Self::default()
        }
    }
}

/// What linear-with-replanning needs to rebuild its chain.
#[derive(Debug, Clone)]
pub struct ReplanContext<'a> {
    pub operators: &'a [Operator],
    pub limits: SearchLimits,
    pub mode: ImplicitMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransitionLabel {
    Controlled,
    Uncontrolled,
}

impl TransitionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            TransitionLabel::Controlled => "controlled",
            TransitionLabel::Uncontrolled => "uncontrolled",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TickRecord {
    pub tick: u64,
    /// Logical state the selection was made in.
    pub state: LogicalState,
    pub operator: Option<String>,
    /// Position of the operator in the chain's priority order.
    pub rank: Option<usize>,
    pub transition: Option<TransitionLabel>,
    pub replan: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    /// The in-order strategy's current operator stopped being runnable.
    Infeasible {
        operator: Option<String>,
    },
    PlanUnsolvable,
    /// Nothing was selectable; `witness` is a state no entry condition covers.
    Stuck {
        witness: LogicalState,
    },
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::Infeasible { operator: Some(o) } => write!(f, "infeasible({o})"),
            FailureReason::Infeasible { operator: None } => write!(f, "infeasible"),
            FailureReason::PlanUnsolvable => write!(f, "plan_unsolvable"),
            FailureReason::Stuck { witness } => write!(f, "stuck({})", witness.to_hex()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure(FailureReason),
    BudgetExhausted,
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionTrace {
    pub ticks: Vec<TickRecord>,
    pub outcome: Outcome,
    pub final_state: LogicalState,
    /// Number of operator changes, including the first selection.
    pub transitions: u64,
    /// Number of changes labelled uncontrolled.
    pub uncontrolled: u64,
    pub replans: u64,
}

impl ExecutionTrace {
    /// Operator names in the order they were entered.
    pub fn operator_sequence(&self) -> Vec<&str> {
        self.ticks
            .iter()
            .filter(|t| t.transition.is_some())
            .filter_map(|t| t.operator.as_deref())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("world cannot run policy `{policy}` of operator `{operator}`")]
    UnresolvedPolicy { operator: String, policy: String },
    #[error("tick budget must be at least 1")]
    ZeroBudget,
    #[error("linear-with-replanning needs the operator set to replan with")]
    MissingReplanContext,
    #[error(transparent)]
    World(#[from] WorldError),
}

/// Highest-ranked operator that may run in `state`. The previously running
/// operator keeps going while its run condition holds; any other operator
/// needs its entry condition.
pub fn reactive_select(
    chain: &Chain,
    state: &LogicalState,
    previous: Option<usize>,
) -> Option<usize> {
    let ranked = chain.ranked();
    (0..ranked.len()).rev().find(|&r| {
        let op = ranked[r];
        if Some(r) == previous {
            op.run.holds(state)
        } else {
            op.entry.holds(state)
        }
    })
}

/// Next plan-step index for in-order execution, or `None` when the current
/// step can neither continue nor hand over.
pub fn linear_select(chain: &Chain, state: &LogicalState, current: Option<usize>) -> Option<usize> {
    let ops = &chain.operators;
    match current {
        None => ops.first().filter(|o| o.entry.holds(state)).map(|_| 0),
        Some(i) => {
            if i + 1 < ops.len() && ops[i + 1].entry.holds(state) {
                Some(i + 1)
            } else if ops[i].run.holds(state) {
                Some(i)
            } else {
                None
            }
        }
    }
}

fn label(
    previous: Option<(&Operator, usize)>,
    next_rank: usize,
    state: &LogicalState,
    replan: bool,
) -> TransitionLabel {
    match previous {
        None => TransitionLabel::Controlled,
        Some((op, rank)) => {
            let upstream = !replan && next_rank < rank;
            if op.effects.holds(state) && !upstream {
                TransitionLabel::Controlled
            } else {
                TransitionLabel::Uncontrolled
            }
        }
    }
}

pub fn execute<W: WorldModel>(
    chain: &Chain,
    world: &mut W,
    strategy: Strategy,
    config: &EngineConfig,
    replan: Option<&ReplanContext<'_>>,
) -> Result<ExecutionTrace, ExecError> {
    if config.tick_budget == 0 {
        return Err(ExecError::ZeroBudget);
    }
    if strategy == Strategy::LinearReplan && replan.is_none() {
        return Err(ExecError::MissingReplanContext);
    }
    check_policies(chain, world)?;

    let goal: Condition = chain.goal.clone();
    let mut active = chain.clone();
    let mut ticks = Vec::new();
    let mut transitions = 0;
    let mut uncontrolled = 0;
    let mut replans = 0;
    // Operator selected on the previous tick and its rank in `active`.
    let mut previous: Option<(usize, Operator)> = None;
    let mut stuck_for = 0u64;
    let mut tick = 0u64;

    let outcome = loop {
        let state = world.logical_state();
        if goal.holds(&state) {
            break Outcome::Success;
        }
        if tick >= config.tick_budget {
            break Outcome::BudgetExhausted;
        }

        let mut replanned = false;
        let mut ending = None;
        let prev_rank = previous.as_ref().map(|(r, _)| *r);
        let selected = match strategy {
            Strategy::Reactive => {
                let pick = reactive_select(&active, &state, prev_rank);
                if pick.is_none() {
                    stuck_for += 1;
                    if let StuckPolicy::ErrorAfter(m) = config.stuck_policy {
                        if stuck_for >= m.max(1) {
                            ending = Some(Outcome::Failure(FailureReason::Stuck {
                                witness: state.clone(),
                            }));
                        }
                    }
                }
                pick
            }
            Strategy::Linear | Strategy::LinearReplan => {
                let offset = active.fallbacks.len();
                let step = prev_rank.and_then(|r| r.checked_sub(offset));
                let mut pick = linear_select(&active, &state, step).map(|i| i + offset);
                if pick.is_none() && strategy == Strategy::LinearReplan {
                    let ctx = replan.expect("checked above");
                    replans += 1;
                    replanned = true;
                    match plan_and_prepare_with(&state, &goal, ctx.operators, ctx.limits, ctx.mode)
                    {
                        Ok(prepared) => {
                            check_policies(&prepared.chain, world)?;
                            active = prepared.chain;
                            let offset = active.fallbacks.len();
                            pick = linear_select(&active, &state, None).map(|i| i + offset);
                        }
                        Err(_) => ending = Some(Outcome::Failure(FailureReason::PlanUnsolvable)),
                    }
                }
                if pick.is_none() && ending.is_none() {
                    let operator = previous.as_ref().map(|(_, o)| o.name.clone());
                    ending = Some(Outcome::Failure(FailureReason::Infeasible { operator }));
                }
                pick
            }
        };

        let ranked = active.ranked();
        let next = selected.map(|r| (r, ranked[r]));
        let changed = match (&previous, &next) {
            (Some((_, a)), Some((_, b))) => a.name != b.name,
            (None, None) => false,
            _ => true,
        };
        let transition = changed.then(|| {
            let l = match next {
                Some((rank, _)) => label(
                    previous.as_ref().map(|(r, o)| (o, *r)),
                    rank,
                    &state,
                    replanned,
                ),
                None => TransitionLabel::Uncontrolled,
            };
            if next.is_some() {
                transitions += 1;
            }
            if l == TransitionLabel::Uncontrolled {
                uncontrolled += 1;
            }
            l
        });
        ticks.push(TickRecord {
            tick,
            state,
            operator: next.map(|(_, o)| o.name.clone()),
            rank: selected,
            transition,
            replan: replanned,
        });
        if let Some(end) = ending {
            break end;
        }
        match next {
            Some((rank, op)) => {
                stuck_for = 0;
                let policy = op.policy.clone();
                if changed || prev_rank != Some(rank) {
                    previous = Some((rank, op.clone()));
                }
                world.step(&policy)?;
            }
            None => {
                previous = None;
                world.idle();
            }
        }
        tick += 1;
    };

    Ok(ExecutionTrace {
        ticks,
        outcome,
        final_state: world.logical_state(),
        transitions,
        uncontrolled,
        replans,
    })
}

fn check_policies<W: WorldModel>(chain: &Chain, world: &W) -> Result<(), ExecError> {
    for op in chain.ranked() {
        if !world.resolves(&op.policy) {
            return Err(ExecError::UnresolvedPolicy {
                operator: op.name.clone(),
                policy: op.policy.to_string(),
            });
        }
    }
    Ok(())
}

/// Recomputes transition labels and counts from the recorded selections.
///
/// A change is controlled when the departing operator's effects hold in the
/// state at departure and the new operator is not upstream of it. Operators
/// missing from `chain` (e.g. introduced by a replan) keep their recorded label.
pub fn label_transitions(trace: &ExecutionTrace, chain: &Chain) -> ExecutionTrace {
    let mut out = trace.clone();
    let mut transitions = 0;
    let mut uncontrolled = 0;
    let mut prev: Option<(String, usize)> = None;
    for rec in out.ticks.iter_mut() {
        let current = rec.operator.clone().zip(rec.rank);
        let changed = match (&prev, &current) {
            (Some((a, _)), Some((b, _))) => a != b,
            (None, Some(_)) => true,
            (Some(_), None) => true,
            (None, None) => false,
        };
        if !changed {
            rec.transition = None;
        } else {
            rec.transition = Some(match (&prev, &current) {
                (None, _) => TransitionLabel::Controlled,
                (Some(_), None) => TransitionLabel::Uncontrolled,
                (Some((name, rank)), Some((_, next))) => match chain.find(name) {
                    Some(op) => label(Some((op, *rank)), *next, &rec.state, rec.replan),
                    None => rec.transition.unwrap_or(TransitionLabel::Uncontrolled),
                },
            });
            if current.is_some() {
                transitions += 1;
            }
            if rec.transition == Some(TransitionLabel::Uncontrolled) {
                uncontrolled += 1;
            }
        }
        prev = current;
    }
    out.transitions = transitions;
    out.uncontrolled = uncontrolled;
    out
}
