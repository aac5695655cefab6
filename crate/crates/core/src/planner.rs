//! Greedy best-first task planning over logical states.
//!
//! Nodes are scored by `h(l) = D(l) + goal_distance(l)`. Ties go to the
//! shallower node, then to the lexicographically smaller producing operator
//! name, then to insertion order, so identical inputs always give identical plans.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use thiserror::Error;

use crate::logic::{Condition, LogicError, LogicalState};
use crate::operators::{
    attach_recovery, augment_with_implicit, implicit_conditions_with, Chain, ImplicitConditions,
    ImplicitMode, Operator, OperatorError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_expansions: usize,
    pub max_depth: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_expansions: 100_000,
            max_depth: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Expansions,
    Depth,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    /// Every reachable state was expanded without meeting the goal.
    #[error("goal unreachable: frontier exhausted after {expansions} expansions")]
    FrontierExhausted { expansions: usize },
    #[error("search gave up after {expansions} expansions ({limit:?} limit)")]
    LimitReached { expansions: usize, limit: LimitKind },
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Operators(#[from] OperatorError),
}

impl PlanError {
    /// True for either unsolvable verdict (proven or limit-bound).
    pub fn is_unsolvable(&self) -> bool {
        matches!(
            self,
            PlanError::FrontierExhausted { .. } | PlanError::LimitReached { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub operators: Vec<Operator>,
    pub expansions: usize,
}

#[derive(Debug, Clone)]
pub struct SearchNode {
    pub state: LogicalState,
    pub depth: usize,
    pub parent: Option<usize>,
    pub producing_operator: Option<usize>,
    pub score: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct FrontierKey {
    score: usize,
    depth: usize,
    op_name: String,
    seq: usize,
    node: usize,
}

impl Ord for FrontierKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.score, self.depth, &self.op_name, self.seq).cmp(&(
            other.score,
            other.depth,
            &other.op_name,
            other.seq,
        ))
    }
}

impl PartialOrd for FrontierKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Visited nodes plus the score-ordered frontier.
#[derive(Debug, Default)]
pub struct SearchTree {
    nodes: Vec<SearchNode>,
    visited: HashMap<LogicalState, usize>,
    frontier: BinaryHeap<Reverse<FrontierKey>>,
    seq: usize,
}

impl SearchTree {
    pub fn nodes(&self) -> &[SearchNode] {
        &self.nodes
    }

    fn insert(&mut self, node: SearchNode, op_name: &str) {
        let id = self.nodes.len();
        self.visited.insert(node.state.clone(), id);
        self.frontier.push(Reverse(FrontierKey {
            score: node.score,
            depth: node.depth,
            op_name: op_name.to_string(),
            seq: self.seq,
            node: id,
        }));
        self.seq += 1;
        self.nodes.push(node);
    }

    fn backup(&self, mut id: usize) -> Vec<usize> {
        let mut ops = Vec::new();
        while let (Some(parent), Some(op)) =
            (self.nodes[id].parent, self.nodes[id].producing_operator)
        {
            ops.push(op);
            id = parent;
        }
        ops.reverse();
        ops
    }
}

pub fn plan(
    initial: &LogicalState,
    goal: &Condition,
    operators: &[Operator],
    limits: SearchLimits,
) -> Result<Plan, PlanError> {
    search(initial, goal, operators, limits).map(|(plan, _)| plan)
}

/// Runs the search and also returns the final search tree.
pub fn search(
    initial: &LogicalState,
    goal: &Condition,
    operators: &[Operator],
    limits: SearchLimits,
) -> Result<(Plan, SearchTree), PlanError> {
    goal.evaluate(initial)?;
    for op in operators {
        op.entry.evaluate(initial)?;
        op.effects.evaluate(initial)?;
    }

    let mut tree = SearchTree::default();
    tree.insert(
        SearchNode {
            state: initial.clone(),
            depth: 0,
            parent: None,
            producing_operator: None,
            score: goal.distance(initial),
        },
        "",
    );

    let mut expansions = 0;
    let mut depth_pruned = false;
    while let Some(Reverse(key)) = tree.frontier.pop() {
        let id = key.node;
        if goal.holds(&tree.nodes[id].state) {
            let ops = tree.backup(id);
            let plan = Plan {
                operators: ops.into_iter().map(|i| operators[i].clone()).collect(),
                expansions,
            };
            return Ok((plan, tree));
        }
        if expansions >= limits.max_expansions {
            return Err(PlanError::LimitReached {
                expansions,
                limit: LimitKind::Expansions,
            });
        }
        expansions += 1;
        let depth = tree.nodes[id].depth;
        if depth >= limits.max_depth {
            depth_pruned = true;
            continue;
        }
        let state = tree.nodes[id].state.clone();
        for (oi, op) in operators.iter().enumerate() {
            if !op.entry.holds(&state) {
                continue;
            }
            let next = op.effects.apply(&state);
            match tree.visited.get(&next) {
                Some(&existing) => {
                    let node = &mut tree.nodes[existing];
                    if depth + 1 < node.depth {
                        node.depth = depth + 1;
                        node.parent = Some(id);
                        node.producing_operator = Some(oi);
                    }
                }
                None => {
                    let score = depth + 1 + goal.distance(&next);
                    tree.insert(
                        SearchNode {
                            state: next,
                            depth: depth + 1,
                            parent: Some(id),
                            producing_operator: Some(oi),
                            score,
                        },
                        &op.name,
                    );
                }
            }
        }
    }
    if depth_pruned {
        Err(PlanError::LimitReached {
            expansions,
            limit: LimitKind::Depth,
        })
    } else {
        Err(PlanError::FrontierExhausted { expansions })
    }
}

/// A plan turned into an execution-ready chain.
#[derive(Debug, Clone)]
pub struct PreparedChain {
    pub chain: Chain,
    pub implicit: ImplicitConditions,
    pub expansions: usize,
}

pub fn plan_and_prepare(
    initial: &LogicalState,
    goal: &Condition,
    operators: &[Operator],
    limits: SearchLimits,
) -> Result<PreparedChain, PlanError> {
    plan_and_prepare_with(initial, goal, operators, limits, ImplicitMode::Strict)
}

/// Plans, computes implicit conditions, augments the chain, and attaches the
/// reaction and fallback operators relevant to the plan's objects.
pub fn plan_and_prepare_with(
    initial: &LogicalState,
    goal: &Condition,
    operators: &[Operator],
    limits: SearchLimits,
    mode: ImplicitMode,
) -> Result<PreparedChain, PlanError> {
    let plan = plan(initial, goal, operators, limits)?;
    if plan.operators.is_empty() {
        return Ok(PreparedChain {
            chain: Chain::new(Vec::new(), goal.clone()),
            implicit: ImplicitConditions::empty(0),
            expansions: plan.expansions,
        });
    }
    let implicit = implicit_conditions_with(&plan.operators, goal, mode)?;
    let chain = augment_with_implicit(&Chain::new(plan.operators, goal.clone()), &implicit)?;
    Ok(PreparedChain {
        chain: attach_recovery(chain, operators),
        implicit,
        expansions: plan.expansions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Literal;
    use crate::operators::verify_chain;

    fn c(lits: &[(usize, bool)]) -> Condition {
        Condition::new(lits.iter().map(|&(i, p)| Literal::new(i, p))).unwrap()
    }

    fn op(name: &str, entry: &[(usize, bool)], effects: &[(usize, bool)]) -> Operator {
        Operator::new(name, c(entry), c(entry), c(effects))
    }

    #[test]
    fn goal_already_met_gives_empty_plan() {
        let s = LogicalState::from_bits(0b1, 1);
        let p = plan(
            &s,
            &c(&[(0, true)]),
            &[op("a", &[], &[(0, false)])],
            SearchLimits::default(),
        )
        .unwrap();
        assert!(p.operators.is_empty());
        assert_eq!(p.expansions, 0);
        let prepared =
            plan_and_prepare(&s, &c(&[(0, true)]), &[], SearchLimits::default()).unwrap();
        assert!(prepared.chain.is_empty());
    }

    #[test]
    fn chain_structured_domain_gives_unique_sequence() {
        // op k requires bit k-1 and sets bit k; listed out of order on purpose.
        let ops = vec![
            op("c", &[(1, true)], &[(2, true)]),
            op("a", &[], &[(0, true)]),
            op("d", &[(2, true)], &[(3, true)]),
            op("b", &[(0, true)], &[(1, true)]),
        ];
        let p = plan(
            &LogicalState::new(4),
            &c(&[(3, true)]),
            &ops,
            SearchLimits::default(),
        )
        .unwrap();
        let names: Vec<&str> = p.operators.iter().map(|o| o.name.as_str()).collect();
        assert_eq!(names, ["a", "b", "c", "d"]);
    }

    #[test]
    fn unreachable_goal_exhausts_frontier() {
        let ops = vec![op("a", &[], &[(0, true)])];
        let err = plan(
            &LogicalState::new(2),
            &c(&[(1, true)]),
            &ops,
            SearchLimits::default(),
        )
        .unwrap_err();
        assert!(matches!(err, PlanError::FrontierExhausted { .. }));
        assert!(err.is_unsolvable());
    }

    #[test]
    fn limits_give_distinct_verdicts() {
        let ops: Vec<Operator> = (0..6)
            .map(|k| {
                let entry: Vec<(usize, bool)> = if k == 0 { vec![] } else { vec![(k - 1, true)] };
                op(&format!("o{k}"), &entry, &[(k, true)])
            })
            .collect();
        let goal = c(&[(5, true)]);
        let tight = SearchLimits {
            max_expansions: 2,
            max_depth: 50,
        };
        assert_eq!(
            plan(&LogicalState::new(6), &goal, &ops, tight).unwrap_err(),
            PlanError::LimitReached {
                expansions: 2,
                limit: LimitKind::Expansions
            }
        );
        let shallow = SearchLimits {
            max_expansions: 100,
            max_depth: 3,
        };
        assert!(matches!(
            plan(&LogicalState::new(6), &goal, &ops, shallow).unwrap_err(),
            PlanError::LimitReached {
                limit: LimitKind::Depth,
                ..
            }
        ));
    }

    #[test]
    fn tie_break_prefers_lexicographic_name() {
        let ops = vec![
            op("zeta", &[], &[(0, true)]),
            op("alpha", &[], &[(1, true)]),
        ];
        let goal = c(&[(0, true), (1, true)]);
        let p = plan(&LogicalState::new(2), &goal, &ops, SearchLimits::default()).unwrap();
        let names: Vec<&str> = p.operators.iter().map(|o| o.name.as_str()).collect();
        assert_eq!(names, ["alpha", "zeta"]);

        // Same successor state: the first one pushed owns the node.
        let ops = vec![
            op("zeta", &[], &[(0, true)]),
            op("alpha", &[], &[(0, true)]),
        ];
        let p = plan(
            &LogicalState::new(1),
            &c(&[(0, true)]),
            &ops,
            SearchLimits::default(),
        )
        .unwrap();
        assert_eq!(p.operators[0].name, "zeta");
    }

    #[test]
    fn prepared_chain_verifies() {
        let ops = vec![
            op("open", &[], &[(0, true)]),
            op("pick", &[], &[(1, true)]),
            op("place", &[(1, true)], &[(2, true), (1, false)]),
        ];
        let goal = c(&[(2, true), (0, true)]);
        let prepared =
            plan_and_prepare(&LogicalState::new(3), &goal, &ops, SearchLimits::default()).unwrap();
        assert!(verify_chain(&prepared.chain).passed());
    }
}
