//! One JSON object per line: a header, one record per tick, and a summary.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::executor::{ExecutionTrace, FailureReason, Outcome, TickRecord, TransitionLabel};
use crate::logic::LogicalState;

pub const TRACE_FORMAT: &str = "rlds-trace";
pub const TRACE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TraceError {
    pub line: usize,
    pub message: String,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case", deny_unknown_fields)]
enum Record {
    Header {
        format: String,
        version: u32,
        groundings: usize,
    },
    Tick {
        tick: u64,
        state: String,
        operator: Option<String>,
        rank: Option<usize>,
        transition: Option<String>,
        replan: bool,
    },
    Summary {
        outcome: String,
        reason: Option<String>,
        final_state: String,
        ticks: usize,
        transitions: u64,
        uncontrolled: u64,
        replans: u64,
    },
}

fn outcome_fields(o: &Outcome) -> (&'static str, Option<String>) {
    match o {
        Outcome::Success => ("success", None),
        Outcome::BudgetExhausted => ("budget_exhausted", None),
        Outcome::Failure(r) => ("failure", Some(r.to_string())),
    }
}

fn parse_reason(s: &str, groundings: usize) -> Option<FailureReason> {
    if s == "plan_unsolvable" {
        return Some(FailureReason::PlanUnsolvable);
    }
    if s == "infeasible" {
        return Some(FailureReason::Infeasible { operator: None });
    }
    if let Some(op) = s
        .strip_prefix("infeasible(")
        .and_then(|r| r.strip_suffix(')'))
    {
        return Some(FailureReason::Infeasible {
            operator: Some(op.to_string()),
        });
    }
    let hex = s.strip_prefix("stuck(")?.strip_suffix(')')?;
    Some(FailureReason::Stuck {
        witness: LogicalState::from_hex(hex, groundings)?,
    })
}

/// Serializes `trace` for a domain of `groundings` ground predicates.
pub fn write_trace(trace: &ExecutionTrace, groundings: usize) -> String {
    let mut out = String::new();
    let mut push = |r: &Record| {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    };
    push(&Record::Header {
        format: TRACE_FORMAT.to_string(),
        version: TRACE_VERSION,
        groundings,
    });
    for t in &trace.ticks {
        push(&Record::Tick {
            tick: t.tick,
            state: t.state.to_hex(),
            operator: t.operator.clone(),
            rank: t.rank,
            transition: t.transition.map(|l| l.as_str().to_string()),
            replan: t.replan,
        });
    }
    let (outcome, reason) = outcome_fields(&trace.outcome);
    push(&Record::Summary {
        outcome: outcome.to_string(),
        reason,
        final_state: trace.final_state.to_hex(),
        ticks: trace.ticks.len(),
        transitions: trace.transitions,
        uncontrolled: trace.uncontrolled,
        replans: trace.replans,
    });
    out
}

/// Inverse of [`write_trace`]. Also returns the grounding count from the header.
pub fn read_trace(text: &str) -> Result<(ExecutionTrace, usize), TraceError> {
    let err = |line: usize, message: String| TraceError { line, message };
    let mut groundings = None;
    let mut ticks = Vec::new();
    let mut summary = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        if raw.trim().is_empty() {
            continue;
        }
        if summary.is_some() {
            return Err(err(line, "record after summary".into()));
        }
        let record: Record =
            serde_json::from_str(raw).map_err(|e| err(line, format!("malformed record: {e}")))?;
        match record {
            Record::Header {
                format,
                version,
                groundings: g,
            } => {
                if groundings.is_some() || !ticks.is_empty() {
                    return Err(err(line, "header must be the first record".into()));
                }
                if format != TRACE_FORMAT || version != TRACE_VERSION {
                    return Err(err(
                        line,
                        format!("unsupported trace format {format} v{version}"),
                    ));
                }
                groundings = Some(g);
            }
            Record::Tick {
                tick,
                state,
                operator,
                rank,
                transition,
                replan,
            } => {
                let g = groundings.ok_or_else(|| err(line, "tick record before header".into()))?;
                let state = LogicalState::from_hex(&state, g).ok_or_else(|| {
                    err(line, format!("state `{state}` is not a {g}-bit hex string"))
                })?;
                let transition = match transition.as_deref() {
                    None => None,
                    Some("controlled") => Some(TransitionLabel::Controlled),
                    Some("uncontrolled") => Some(TransitionLabel::Uncontrolled),
                    Some(other) => {
                        return Err(err(line, format!("unknown transition label `{other}`")))
                    }
                };
                ticks.push(TickRecord {
                    tick,
                    state,
                    operator,
                    rank,
                    transition,
                    replan,
                });
            }
            Record::Summary {
                outcome,
                reason,
                final_state,
                ticks: n,
                transitions,
                uncontrolled,
                replans,
            } => {
                let g = groundings.ok_or_else(|| err(line, "summary before header".into()))?;
                if n != ticks.len() {
                    return Err(err(
                        line,
                        format!("summary counts {n} ticks, found {}", ticks.len()),
                    ));
                }
                let outcome = match (outcome.as_str(), reason.as_deref()) {
                    ("success", None) => Outcome::Success,
                    ("budget_exhausted", None) => Outcome::BudgetExhausted,
                    ("failure", Some(r)) => Outcome::Failure(
                        parse_reason(r, g)
                            .ok_or_else(|| err(line, format!("unknown failure reason `{r}`")))?,
                    ),
                    (o, _) => return Err(err(line, format!("invalid outcome `{o}`"))),
                };
                let final_state = LogicalState::from_hex(&final_state, g).ok_or_else(|| {
                    err(
                        line,
                        format!("state `{final_state}` is not a {g}-bit hex string"),
                    )
                })?;
                summary = Some((outcome, final_state, transitions, uncontrolled, replans));
            }
        }
    }
    let g = groundings.ok_or_else(|| err(last_line.max(1), "missing header".into()))?;
    let (outcome, final_state, transitions, uncontrolled, replans) =
        summary.ok_or_else(|| err(last_line.max(1), "missing summary record".into()))?;
    Ok((
        ExecutionTrace {
            ticks: std::mem::take(&mut ticks),
            outcome,
            final_state,
            transitions,
            uncontrolled,
            replans,
        },
        g,
    ))
}
