//! Operators, chains, and the algebra that builds executable chains from plans.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::logic::{Condition, Domain, Literal, LogicError, LogicalState};

/// Largest domain `check_completeness` will enumerate exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("plan is empty")]
    EmptyPlan,
    #[error("implicit condition set has {found} entries, chain has {expected} operators")]
    LengthMismatch { expected: usize, found: usize },
    #[error("operator `{operator}` (position {position}) would require grounding {index} with both polarities")]
    Contradiction {
        operator: String,
        position: usize,
        index: usize,
    },
    #[error(
        "exhaustive completeness check needs 2^{groundings} states (limit 2^{EXHAUSTIVE_LIMIT})"
    )]
    Capacity { groundings: usize },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// How an operator participates in a chain.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorRole {
    /// Ordinary plan step.
    #[default]
    Step,
    /// Recovery behaviour ranked above every plan step.
    Reaction,
    /// Catch-all ranked below every plan step.
    Fallback,
}

impl OperatorRole {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatorRole::Step => "step",
            OperatorRole::Reaction => "reaction",
            OperatorRole::Fallback => "fallback",
        }
    }
}

/// Identifier of a policy plus its grounding, resolved by a world model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolicyRef {
    pub id: String,
    pub args: Vec<String>,
}

impl PolicyRef {
    pub fn new(id: impl Into<String>, args: &[&str]) -> Self {
        Self {
            id: id.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }
}

impl fmt::Display for PolicyRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// A ground operator: entry, run and effect conditions plus a policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator {
    pub name: String,
    /// Objects bound to the schema parameters, in parameter order.
    pub params: Vec<String>,
    pub entry: Condition,
    pub run: Condition,
    pub effects: Condition,
    pub policy: PolicyRef,
    pub role: OperatorRole,
}

impl Operator {
    pub fn new(
        name: impl Into<String>,
        entry: Condition,
        run: Condition,
        effects: Condition,
    ) -> Self {
        let name = name.into();
        Self {
            policy: PolicyRef::new(name.clone(), &[]),
            name,
            params: Vec::new(),
            entry,
            run,
            effects,
            role: OperatorRole::Step,
        }
    }

    pub fn with_policy(mut self, policy: PolicyRef) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_params(mut self, params: Vec<String>) -> Self {
        self.params = params;
        self
    }

    pub fn with_role(mut self, role: OperatorRole) -> Self {
        self.role = role;
        self
    }

    /// Adds `guard` to both the entry and run conditions.
    pub fn with_guard(mut self, guard: &Condition) -> Result<Self, OperatorError> {
        self.entry = self
            .entry
            .union(guard)
            .map_err(|e| self.contradiction(0, e))?;
        self.run = self
            .run
            .union(guard)
            .map_err(|e| self.contradiction(0, e))?;
        Ok(self)
    }

    fn contradiction(&self, position: usize, err: LogicError) -> OperatorError {
        match err {
            LogicError::Contradiction { index } => OperatorError::Contradiction {
                operator: self.name.clone(),
                position,
                index,
            },
            other => OperatorError::Logic(other),
        }
    }

    /// Whether `lit` holds after this operator completes from a state that
    /// satisfied its entry and run conditions.
    pub fn establishes(&self, lit: Literal) -> bool {
        self.effects.contains(lit)
            || ((self.entry.contains(lit) || self.run.contains(lit))
                && !self.effects.contradicts(lit))
    }
}

/// Ordered operators converging on a goal.
///
/// Selection priority, lowest first: fallbacks, plan steps (index 1..N),
/// reactions. Fallbacks and reactions are excluded from the chaining check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub operators: Vec<Operator>,
    pub goal: Condition,
    pub reactions: Vec<Operator>,
    pub fallbacks: Vec<Operator>,
}

impl Chain {
    pub fn new(operators: Vec<Operator>, goal: Condition) -> Self {
        Self {
            operators,
            goal,
            reactions: Vec::new(),
            fallbacks: Vec::new(),
        }
    }

    pub fn with_reactions(mut self, reactions: Vec<Operator>) -> Self {
        self.reactions = reactions;
        self
    }

    pub fn with_fallbacks(mut self, fallbacks: Vec<Operator>) -> Self {
        self.fallbacks = fallbacks;
        self
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Every operator in ascending priority (rank 0 is the lowest).
    pub fn ranked(&self) -> Vec<&Operator> {
        self.fallbacks
            .iter()
            .chain(self.operators.iter())
            .chain(self.reactions.iter())
            .collect()
    }

    pub fn rank_count(&self) -> usize {
        self.fallbacks.len() + self.operators.len() + self.reactions.len()
    }

    pub fn find(&self, name: &str) -> Option<&Operator> {
        self.ranked().into_iter().find(|o| o.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// A literal of `L_P^{i+1}` is not established by operator `i`.
    Unestablished,
    /// A literal of the run condition is missing from the entry condition.
    RunNotImplied,
    /// A goal literal is not established by the last operator.
    GoalUnestablished,
    /// A reaction's run condition is not implied by its entry condition.
    ReactionRunNotImplied,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// 1-based chain position (index into `reactions` for reaction violations).
    pub position: usize,
    pub operator: String,
    pub literal: Literal,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the chaining condition between every consecutive pair.
///
/// A literal required on entry to operator `i+1` counts as established by
/// operator `i` if it is among `i`'s effects, or if `i` already required it
/// (entry or run) and its effects do not overwrite it.
pub fn verify_chain(chain: &Chain) -> VerificationReport {
    let mut violations = Vec::new();
    let ops = &chain.operators;
    for (i, pair) in ops.windows(2).enumerate() {
        let (cur, next) = (&pair[0], &pair[1]);
        for &lit in next.entry.literals() {
            if !cur.establishes(lit) {
                violations.push(Violation {
                    position: i + 1,
                    operator: cur.name.clone(),
                    literal: lit,
                    kind: ViolationKind::Unestablished,
                });
            }
        }
        for &lit in next.run.literals() {
            if !next.entry.contains(lit) {
                violations.push(Violation {
                    position: i + 2,
                    operator: next.name.clone(),
                    literal: lit,
                    kind: ViolationKind::RunNotImplied,
                });
            }
        }
    }
    if let Some(last) = ops.last() {
        for &lit in chain.goal.literals() {
            if !last.establishes(lit) {
                violations.push(Violation {
                    position: ops.len(),
                    operator: last.name.clone(),
                    literal: lit,
                    kind: ViolationKind::GoalUnestablished,
                });
            }
        }
    }
    for (k, reaction) in chain.reactions.iter().enumerate() {
        for &lit in reaction.run.literals() {
            if !reaction.entry.contains(lit) {
                violations.push(Violation {
                    position: k + 1,
                    operator: reaction.name.clone(),
                    literal: lit,
                    kind: ViolationKind::ReactionRunNotImplied,
                });
            }
        }
    }
    VerificationReport { violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletenessMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completeness {
    pub complete: bool,
    /// A state no entry condition accepts.
    pub witness: Option<LogicalState>,
    pub states_checked: u64,
}

/// Checks whether some operator of the chain is enterable in every logical state.
pub fn check_completeness(
    chain: &Chain,
    domain: &Domain,
    mode: CompletenessMode,
) -> Result<Completeness, OperatorError> {
    let entries: Vec<&Condition> = chain.ranked().iter().map(|o| &o.entry).collect();
    for e in &entries {
        domain.check_condition(e)?;
    }
    let covered = |s: &LogicalState| entries.iter().any(|e| e.holds(s));
    let g = domain.len();
    match mode {
        CompletenessMode::Exhaustive => {
            if g > EXHAUSTIVE_LIMIT {
                return Err(OperatorError::Capacity { groundings: g });
            }
            let total = 1u64 << g;
            for bits in 0..total {
                let s = LogicalState::from_bits(bits, g);
                if !covered(&s) {
                    return Ok(Completeness {
                        complete: false,
                        witness: Some(s),
                        states_checked: bits + 1,
                    });
                }
            }
            Ok(Completeness {
                complete: true,
                witness: None,
                states_checked: total,
            })
        }
        CompletenessMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for n in 0..samples {
                let mut s = LogicalState::new(g);
                for i in 0..g {
                    s.set(i, rng.random());
                }
                if !covered(&s) {
                    return Ok(Completeness {
                        complete: false,
                        witness: Some(s),
                        states_checked: n as u64 + 1,
                    });
                }
            }
            Ok(Completeness {
                complete: true,
                witness: None,
                states_checked: samples as u64,
            })
        }
    }
}

/// Builds a macro operator whose effects are the cumulative effects of `plan`.
///
/// Entry and run conditions are left empty; add guards with [`Operator::with_guard`].
pub fn compose_hierarchical(plan: &[Operator], name: &str) -> Result<Operator, OperatorError> {
    let first = plan.first().ok_or(OperatorError::EmptyPlan)?;
    let effects = plan[1..].iter().fold(first.effects.clone(), |acc, op| {
        acc.overridden_by(&op.effects)
    });
    let mut params: Vec<String> = Vec::new();
    for op in plan {
        for p in &op.params {
            if !params.contains(p) {
                params.push(p.clone());
            }
        }
    }
    Ok(Operator::new(name, Condition::empty(), Condition::empty(), effects).with_params(params))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ImplicitMode {
    /// Keep every propagated literal.
    #[default]
    Strict,
    /// Keep only literals produced by the effects of some earlier plan step.
    General,
}

/// A propagated literal that an earlier operator's effects overwrite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanOrderWarning {
    /// 1-based position of the operator whose effects clash.
    pub position: usize,
    pub operator: String,
    pub literal: Literal,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImplicitConditions {
    pub per_operator: Vec<Condition>,
    pub warnings: Vec<PlanOrderWarning>,
}

impl ImplicitConditions {
    pub fn empty(n: usize) -> Self {
        Self {
            per_operator: vec![Condition::empty(); n],
            warnings: Vec::new(),
        }
    }
}

pub fn implicit_conditions(
    plan: &[Operator],
    goal: &Condition,
) -> Result<ImplicitConditions, OperatorError> {
    implicit_conditions_with(plan, goal, ImplicitMode::Strict)
}

/// Backward pass from the goal: operator `i` inherits every literal required
/// by `i+1` (entry or inherited) that its own effects do not set.
pub fn implicit_conditions_with(
    plan: &[Operator],
    goal: &Condition,
    mode: ImplicitMode,
) -> Result<ImplicitConditions, OperatorError> {
    if plan.is_empty() {
        return Err(OperatorError::EmptyPlan);
    }
    let n = plan.len();
    let mut per_operator = vec![Condition::empty(); n];
    let mut warnings = Vec::new();
    let mut inherited: BTreeMap<usize, bool> = BTreeMap::new();

    for i in (0..n).rev() {
        let required = if i + 1 == n { goal } else { &plan[i + 1].entry };
        let mut carry = inherited.clone();
        for lit in required.literals() {
            carry.insert(lit.index, lit.positive);
        }
        let effects = &plan[i].effects;
        let mut kept = BTreeMap::new();
        for (&index, &positive) in &carry {
            let lit = Literal::new(index, positive);
            match effects.polarity(index) {
                None => {
                    kept.insert(index, positive);
                }
                Some(p) if p == positive => {}
                Some(_) => warnings.push(PlanOrderWarning {
                    position: i + 1,
                    operator: plan[i].name.clone(),
                    literal: lit,
                }),
            }
        }
        per_operator[i] = Condition::new(kept.iter().map(|(&i, &p)| Literal::new(i, p)))?;
        inherited = kept;
    }

    if mode == ImplicitMode::General {
        let mut produced: BTreeSet<Literal> = BTreeSet::new();
        for (i, op) in plan.iter().enumerate() {
            let filtered = per_operator[i]
                .literals()
                .iter()
                .copied()
                .filter(|l| produced.contains(l));
            per_operator[i] = Condition::new(filtered)?;
            produced.extend(op.effects.literals().iter().copied());
        }
    }
    warnings.sort_by_key(|w| (w.position, w.literal));
    Ok(ImplicitConditions {
        per_operator,
        warnings,
    })
}

/// Returns a copy of `chain` with each step's entry and run conditions
/// extended by its implicit conditions.
pub fn augment_with_implicit(
    chain: &Chain,
    implicit: &ImplicitConditions,
) -> Result<Chain, OperatorError> {
    if implicit.per_operator.len() != chain.operators.len() {
        return Err(OperatorError::LengthMismatch {
            expected: chain.operators.len(),
            found: implicit.per_operator.len(),
        });
    }
    let mut out = chain.clone();
    for (pos, (op, extra)) in out
        .operators
        .iter_mut()
        .zip(&implicit.per_operator)
        .enumerate()
    {
        let entry = op
            .entry
            .union(extra)
            .map_err(|e| op.contradiction(pos + 1, e))?;
        let run = op
            .run
            .union(extra)
            .map_err(|e| op.contradiction(pos + 1, e))?;
        op.entry = entry;
        op.run = run;
    }
    Ok(out)
}

/// Adds the reaction and fallback operators from `pool` whose bound objects
/// all appear among the chain's plan steps.
pub fn attach_recovery(chain: Chain, pool: &[Operator]) -> Chain {
    let objects: BTreeSet<&str> = chain
        .operators
        .iter()
        .flat_map(|o| o.params.iter().map(String::as_str))
        .collect();
    let relevant = |o: &&Operator| o.params.iter().all(|p| objects.contains(p.as_str()));
    let reactions = pool
        .iter()
        .filter(|o| o.role == OperatorRole::Reaction)
        .filter(relevant)
        .cloned()
        .collect();
    let fallbacks = pool
        .iter()
        .filter(|o| o.role == OperatorRole::Fallback)
        .filter(relevant)
        .cloned()
        .collect();
    chain.with_reactions(reactions).with_fallbacks(fallbacks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::PredicateSchema;

    fn c(lits: &[(usize, bool)]) -> Condition {
        Condition::new(lits.iter().map(|&(i, p)| Literal::new(i, p))).unwrap()
    }

    fn op(name: &str, entry: &[(usize, bool)], effects: &[(usize, bool)]) -> Operator {
        Operator::new(name, c(entry), c(entry), c(effects))
    }

    #[test]
    fn exact_match_chain_passes() {
        let o1 = op("a", &[], &[(0, true)]);
        let o2 = op("b", &[(0, true)], &[(1, true)]);
        let chain = Chain::new(vec![o1, o2], c(&[(1, true)]));
        assert!(verify_chain(&chain).passed());
    }

    #[test]
    fn unestablished_literal_reported_at_first_position() {
        let o1 = op("a", &[], &[(0, true)]);
        let o2 = op("b", &[(0, true), (2, true)], &[(1, true)]);
        let report = verify_chain(&Chain::new(vec![o1, o2], Condition::empty()));
        assert_eq!(
            report.violations,
            vec![Violation {
                position: 1,
                operator: "a".into(),
                literal: Literal::pos(2),
                kind: ViolationKind::Unestablished,
            }]
        );
    }

    #[test]
    fn carried_literal_clobbered_by_effects_is_a_violation() {
        let o1 = op("a", &[(2, true)], &[(2, false), (0, true)]);
        let o2 = op("b", &[(0, true), (2, true)], &[]);
        let report = verify_chain(&Chain::new(vec![o1, o2], Condition::empty()));
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].literal, Literal::pos(2));
    }

    #[test]
    fn run_must_be_implied_by_entry() {
        let o1 = op("a", &[], &[(0, true)]);
        let o2 = Operator::new("b", c(&[(0, true)]), c(&[(0, true), (3, false)]), c(&[]));
        let report = verify_chain(&Chain::new(vec![o1, o2], Condition::empty()));
        assert_eq!(report.violations[0].kind, ViolationKind::RunNotImplied);
        assert_eq!(report.violations[0].position, 2);
    }

    #[test]
    fn goal_and_reactions_checked() {
        let o1 = op("a", &[], &[(0, true)]);
        let r = Operator::new("r", c(&[(1, true)]), c(&[(2, true)]), c(&[]));
        let chain = Chain::new(vec![o1], c(&[(0, true), (1, true)])).with_reactions(vec![r]);
        let kinds: Vec<ViolationKind> = verify_chain(&chain)
            .violations
            .iter()
            .map(|v| v.kind)
            .collect();
        assert_eq!(
            kinds,
            [
                ViolationKind::GoalUnestablished,
                ViolationKind::ReactionRunNotImplied
            ]
        );
    }

    fn tiny_domain(g: usize) -> Domain {
        let objects = (0..g).map(|i| (format!("o{i}"), "t".to_string())).collect();
        Domain::new(vec![PredicateSchema::new("p", &["t"])], objects).unwrap()
    }

    #[test]
    fn empty_entry_makes_chain_complete() {
        let d = tiny_domain(3);
        let chain = Chain::new(vec![op("any", &[], &[(0, true)])], Condition::empty());
        let r = check_completeness(&chain, &d, CompletenessMode::Exhaustive).unwrap();
        assert!(r.complete);
        assert_eq!(r.states_checked, 8);
    }

    #[test]
    fn single_literal_entry_is_incomplete() {
        let d = tiny_domain(1);
        let chain = Chain::new(vec![op("a", &[(0, true)], &[])], Condition::empty());
        let r = check_completeness(&chain, &d, CompletenessMode::Exhaustive).unwrap();
        assert!(!r.complete);
        assert_eq!(r.witness, Some(LogicalState::from_bits(0, 1)));
        let r = check_completeness(
            &chain,
            &d,
            CompletenessMode::Sampled {
                samples: 64,
                seed: 3,
            },
        )
        .unwrap();
        assert!(!r.complete);
    }

    #[test]
    fn exhaustive_capacity_limit() {
        let d = tiny_domain(21);
        let chain = Chain::new(vec![op("a", &[], &[])], Condition::empty());
        let err = check_completeness(&chain, &d, CompletenessMode::Exhaustive).unwrap_err();
        assert_eq!(err, OperatorError::Capacity { groundings: 21 });
    }

    #[test]
    fn compose_examples() {
        let single = op("x", &[(3, true)], &[(0, true), (1, false)]);
        let m = compose_hierarchical(std::slice::from_ref(&single), "m").unwrap();
        assert_eq!(m.effects, single.effects);
        assert!(m.entry.is_empty() && m.run.is_empty());

        let a = op("a", &[], &[(0, true)]);
        let b = op("b", &[], &[(0, false), (1, true)]);
        let m = compose_hierarchical(&[a, b], "m").unwrap();
        assert_eq!(m.effects, c(&[(0, false), (1, true)]));
        assert_eq!(
            compose_hierarchical(&[], "m").unwrap_err(),
            OperatorError::EmptyPlan
        );

        let guarded = m.with_guard(&c(&[(5, true)])).unwrap();
        assert!(guarded.entry.contains(Literal::pos(5)) && guarded.run.contains(Literal::pos(5)));
    }

    #[test]
    fn implicit_single_operator_goal_in_effects() {
        let o = op("a", &[], &[(0, true), (1, true)]);
        let ic = implicit_conditions(&[o], &c(&[(0, true), (1, true)])).unwrap();
        assert_eq!(ic.per_operator, vec![Condition::empty()]);
    }

    #[test]
    fn implicit_propagates_and_filters() {
        // open sets 0; pick needs nothing; place needs 1 (set by pick); goal needs 2 and 0.
        let open = op("open", &[], &[(0, true)]);
        let pick = op("pick", &[], &[(1, true)]);
        let place = op("place", &[(1, true)], &[(2, true), (1, false)]);
        let goal = c(&[(2, true), (0, true)]);
        let ic = implicit_conditions(&[open.clone(), pick.clone(), place.clone()], &goal).unwrap();
        assert_eq!(ic.per_operator[2], c(&[(0, true)]));
        assert_eq!(ic.per_operator[1], c(&[(0, true)]));
        assert_eq!(ic.per_operator[0], Condition::empty());
        assert!(ic.warnings.is_empty());

        let general =
            implicit_conditions_with(&[open, pick, place], &goal, ImplicitMode::General).unwrap();
        assert_eq!(general.per_operator[2], c(&[(0, true)]));
        assert_eq!(general.per_operator[1], c(&[(0, true)]));
    }

    #[test]
    fn general_mode_drops_literals_nobody_produces() {
        let a = op("a", &[], &[(0, true)]);
        let b = op("b", &[(0, true), (4, true)], &[(1, true)]);
        let goal = c(&[(1, true)]);
        let strict = implicit_conditions(&[a.clone(), b.clone()], &goal).unwrap();
        assert_eq!(strict.per_operator[0], c(&[(4, true)]));
        let general = implicit_conditions_with(&[a, b], &goal, ImplicitMode::General).unwrap();
        assert_eq!(general.per_operator[0], Condition::empty());
    }

    #[test]
    fn clobbered_literal_reported_as_warning() {
        let a = op("a", &[], &[(0, false)]);
        let b = op("b", &[], &[(1, true)]);
        let ic = implicit_conditions(&[a, b], &c(&[(0, true), (1, true)])).unwrap();
        assert_eq!(
            ic.warnings,
            vec![PlanOrderWarning {
                position: 1,
                operator: "a".into(),
                literal: Literal::pos(0),
            }]
        );
        assert!(!ic.per_operator[0].contradicts(Literal::pos(0)));
    }

    #[test]
    fn augment_identity_and_errors() {
        let o1 = op("a", &[], &[(0, true)]);
        let o2 = op("b", &[(0, true)], &[(1, true)]);
        let chain = Chain::new(vec![o1, o2], c(&[(1, true)]));
        assert_eq!(
            augment_with_implicit(&chain, &ImplicitConditions::empty(2)).unwrap(),
            chain
        );
        assert_eq!(
            augment_with_implicit(&chain, &ImplicitConditions::empty(1)).unwrap_err(),
            OperatorError::LengthMismatch {
                expected: 2,
                found: 1
            }
        );
        let bad = ImplicitConditions {
            per_operator: vec![Condition::empty(), c(&[(0, false)])],
            warnings: vec![],
        };
        assert_eq!(
            augment_with_implicit(&chain, &bad).unwrap_err(),
            OperatorError::Contradiction {
                operator: "b".into(),
                position: 2,
                index: 0
            }
        );
    }

    #[test]
    fn recovery_filtered_by_plan_objects() {
        let step = op("s", &[], &[]).with_params(vec!["spam".into(), "top".into()]);
        let r_ok = op("r1", &[], &[])
            .with_params(vec!["spam".into(), "top".into()])
            .with_role(OperatorRole::Reaction);
        let r_other = op("r2", &[], &[])
            .with_params(vec!["spam".into(), "bottom".into()])
            .with_role(OperatorRole::Reaction);
        let fb = op("f", &[], &[]).with_role(OperatorRole::Fallback);
        let chain = attach_recovery(
            Chain::new(vec![step], Condition::empty()),
            &[r_ok, r_other, fb],
        );
        assert_eq!(chain.reactions.len(), 1);
        assert_eq!(chain.reactions[0].name, "r1");
        assert_eq!(chain.fallbacks.len(), 1);
        let names: Vec<&str> = chain.ranked().iter().map(|o| o.name.as_str()).collect();
        assert_eq!(names, ["f", "s", "r1"]);
    }
}
