//! Random instances and independent oracles shared by the integration tests
//! and the acceptance harness.
#![allow(dead_code)]

pub mod criteria;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rlds::logic::{Condition, Domain, Literal, LogicalState, PredicateSchema};
use rlds::operators::{Operator, PolicyRef};

/// A domain of `g` nullary predicates `v00`, `v01`, ... whose grounding index
/// equals the number in the name.
pub fn flat_domain(g: usize) -> Domain {
    let schemas = (0..g)
        .map(|i| PredicateSchema::new(format!("v{i:02}"), &[]))
        .collect();
    Domain::new(schemas, Vec::new()).expect("flat domain")
}

pub fn random_state<R: Rng>(rng: &mut R, g: usize) -> LogicalState {
    let mut s = LogicalState::new(g);
    for i in 0..g {
        s.set(i, rng.random());
    }
    s
}

/// Between `min` and `max` literals over distinct groundings.
pub fn random_condition<R: Rng>(rng: &mut R, g: usize, min: usize, max: usize) -> Condition {
    let mut idx: Vec<usize> = (0..g).collect();
    idx.shuffle(rng);
    let n = rng.random_range(min..=max.min(g));
    Condition::new(idx[..n].iter().map(|&i| Literal::new(i, rng.random())))
        .expect("distinct groundings")
}

/// Operators `op0`, `op1`, ... with entry = run, 0–3 entry literals and 1–3 effects.
pub fn random_operators<R: Rng>(rng: &mut R, g: usize, count: usize) -> Vec<Operator> {
    (0..count)
        .map(|k| {
            let entry = random_condition(rng, g, 0, 3);
            let effects = random_condition(rng, g, 1, 3);
            let name = format!("op{k}");
            Operator::new(name.clone(), entry.clone(), entry, effects)
                .with_policy(PolicyRef::new(name, &[]))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub groundings: usize,
    pub initial: LogicalState,
    pub goal: Condition,
    pub operators: Vec<Operator>,
}

pub fn random_instance<R: Rng>(rng: &mut R, max_g: usize, max_ops: usize) -> Instance {
    let g = rng.random_range(2..=max_g);
    let count = rng.random_range(1..=max_ops);
    Instance {
        groundings: g,
        initial: random_state(rng, g),
        goal: random_condition(rng, g, 1, 3),
        operators: random_operators(rng, g, count),
    }
}

/// Shortest plan length by breadth-first search over every reachable state.
pub fn bfs_shortest(initial: &LogicalState, goal: &Condition, ops: &[Operator]) -> Option<usize> {
    let mut seen: HashMap<LogicalState, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(initial.clone(), 0);
    queue.push_back(initial.clone());
    while let Some(s) = queue.pop_front() {
        let d = seen[&s];
        if goal.holds(&s) {
            return Some(d);
        }
        for op in ops {
            if op.entry.holds(&s) {
                let next = op.effects.apply(&s);
                if !seen.contains_key(&next) {
                    seen.insert(next.clone(), d + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

/// Runs `plan` from `initial`, checking every entry condition on the way.
pub fn simulate(initial: &LogicalState, plan: &[Operator], goal: &Condition) -> Result<(), String> {
    let mut s = initial.clone();
    for (i, op) in plan.iter().enumerate() {
        if !op.entry.holds(&s) {
            return Err(format!("step {} ({}) not applicable", i + 1, op.name));
        }
        s = op.effects.apply(&s);
    }
    if goal.holds(&s) {
        Ok(())
    } else {
        Err("goal does not hold after the plan".into())
    }
}

fn polarity_of(c: &Condition, v: usize) -> Option<bool> {
    c.literals()
        .iter()
        .find(|l| l.index == v)
        .map(|l| l.positive)
}

/// Implicit conditions by a forward scan per grounding: operator `i` carries
/// literal `v = b` when, scanning `m = i, i+1, ...`, the first event touching
/// `v` is a requirement (`entry` of `m+1`, or the goal after the last step)
/// asking for `b` rather than an effect of `m`.
///
/// Also returns the clashes: `(position, literal)` where the effect of the
/// operator at `position` sets the opposite of what a later step requires.
pub fn implicit_oracle(
    plan: &[Operator],
    goal: &Condition,
) -> (Vec<BTreeSet<Literal>>, BTreeSet<(usize, Literal)>) {
    let n = plan.len();
    let vars: BTreeSet<usize> = plan
        .iter()
        .flat_map(|o| {
            o.entry
                .literals()
                .iter()
                .chain(o.effects.literals())
                .map(|l| l.index)
        })
        .chain(goal.literals().iter().map(|l| l.index))
        .collect();
    let requirement = |m: usize| if m + 1 == n { goal } else { &plan[m + 1].entry };
    // Polarity requested at or after the requirement following step m, ignoring effects at m.
    let demanded = |i: usize, v: usize| -> Option<bool> {
        for (m, op) in plan.iter().enumerate().skip(i) {
            if m > i && polarity_of(&op.effects, v).is_some() {
                return None;
            }
            if let Some(b) = polarity_of(requirement(m), v) {
                return Some(b);
            }
        }
        None
    };
    let mut implicit = vec![BTreeSet::new(); n];
    let mut clashes = BTreeSet::new();
    for i in 0..n {
        for &v in &vars {
            let Some(b) = demanded(i, v) else { continue };
            match polarity_of(&plan[i].effects, v) {
                None => {
                    implicit[i].insert(Literal::new(v, b));
                }
                Some(e) if e == b => {}
                Some(_) => {
                    clashes.insert((i + 1, Literal::new(v, b)));
                }
            }
        }
    }
    (implicit, clashes)
}

pub fn condition_set(c: &Condition) -> BTreeSet<Literal> {
    c.literals().iter().copied().collect()
}

/// Literal set as a map, for readable failure messages.
pub fn as_map(s: &BTreeSet<Literal>) -> BTreeMap<usize, bool> {
    s.iter().map(|l| (l.index, l.positive)).collect()
}
