//! Text format for domains (predicates, objects, operator schemas, goals,
//! plans, kitchen geometry and adversary scripts) and line-delimited traces.

mod parse;
mod trace;
mod write;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::logic::{
    type_accepts, Condition, Domain, Literal, LogicError, LogicalState, PredicateSchema,
};
use crate::operators::{Operator, OperatorRole, PolicyRef};
use crate::worlds::kitchen::{KitchenConfig, ScheduledEvent};

pub use parse::parse_domain;
pub use trace::{read_trace, write_trace, TraceError, TRACE_FORMAT, TRACE_VERSION};
pub use write::serialize_domain;

pub const HEADER: &str = "rlds-domain";
pub const VERSION: u32 = 1;

/// Source position. Compares equal to every other span so that parsed
/// structures can be compared by content alone.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl Span {
    pub fn new(line: usize, column: usize) -> Self {
        Self { line, column }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    /// The offending source line.
    pub excerpt: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        writeln!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)?;
        writeln!(f, "  {}", self.excerpt)?;
        write!(f, "  {}^", " ".repeat(self.column.saturating_sub(1)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Object(String),
    Var(String),
    /// Every type-compatible object (effects only).
    Any,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Object(o) => f.write_str(o),
            Term::Var(v) => write!(f, "?{v}"),
            Term::Any => f.write_str("*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralExpr {
    pub positive: bool,
    pub predicate: String,
    pub args: Vec<Term>,
    pub span: Span,
    pub predicate_span: Span,
    pub arg_spans: Vec<Span>,
}

impl LiteralExpr {
    pub fn new(positive: bool, predicate: &str, args: Vec<Term>) -> Self {
        let n = args.len();
        Self {
            positive,
            predicate: predicate.to_string(),
            args,
            span: Span::default(),
            predicate_span: Span::default(),
            arg_spans: vec![Span::default(); n],
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|a| matches!(a, Term::Object(_)))
    }
}

impl fmt::Display for LiteralExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("(not ")?;
        }
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")?;
        if !self.positive {
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: String,
    pub params: Vec<Param>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectDecl {
    pub name: String,
    pub ty: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSchema {
    pub name: String,
    pub params: Vec<Param>,
    pub pre: Vec<LiteralExpr>,
    /// `None` means the run condition equals the entry condition.
    pub run: Option<Vec<LiteralExpr>>,
    pub eff: Vec<LiteralExpr>,
    pub policy: Option<String>,
    pub role: OperatorRole,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGoal {
    pub name: String,
    pub literals: Vec<LiteralExpr>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanStep {
    pub operator: String,
    pub args: Vec<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedPlan {
    pub name: String,
    pub goal: Option<String>,
    pub steps: Vec<PlanStep>,
    pub span: Span,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DomainFile {
    pub predicates: Vec<PredicateDecl>,
    pub objects: Vec<ObjectDecl>,
    pub operators: Vec<OperatorSchema>,
    pub init: Vec<LiteralExpr>,
    pub goals: Vec<NamedGoal>,
    pub plans: Vec<NamedPlan>,
    pub world: Option<KitchenConfig>,
    pub adversary: Vec<ScheduledEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("no goal named `{0}`")]
    UnknownGoal(String),
    #[error("no plan named `{0}`")]
    UnknownPlan(String),
    #[error("no operator grounding named `{0}`")]
    UnknownOperator(String),
    #[error("literal `{0}` is not ground")]
    NotGround(String),
    #[error("domain has no world section")]
    NoWorld,
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// `name(a,b)` for grounded operators; bare `name` when nullary.
pub fn ground_name(name: &str, args: &[String]) -> String {
    if args.is_empty() {
        name.to_string()
    } else {
        format!("{name}({})", args.join(","))
    }
}

impl DomainFile {
    pub fn domain(&self) -> Result<Domain, DomainError> {
        let schemas = self
            .predicates
            .iter()
            .map(|p| {
                let types: Vec<&str> = p.params.iter().map(|q| q.ty.as_str()).collect();
                PredicateSchema::new(p.name.clone(), &types)
            })
            .collect();
        let objects = self
            .objects
            .iter()
            .map(|o| (o.name.clone(), o.ty.clone()))
            .collect();
        Ok(Domain::new(schemas, objects)?)
    }

    pub fn operator(&self, name: &str) -> Option<&OperatorSchema> {
        self.operators.iter().find(|o| o.name == name)
    }

    pub fn goal(&self, name: &str) -> Option<&NamedGoal> {
        self.goals.iter().find(|g| g.name == name)
    }

    pub fn plan(&self, name: &str) -> Option<&NamedPlan> {
        self.plans.iter().find(|p| p.name == name)
    }

    pub fn goal_condition(&self, domain: &Domain, name: &str) -> Result<Condition, DomainError> {
        let goal = self
            .goal(name)
            .ok_or_else(|| DomainError::UnknownGoal(name.to_string()))?;
        ground_condition(domain, &goal.literals)
    }

    /// Initial logical state from the `init` literals (unlisted groundings false).
    pub fn init_state(&self, domain: &Domain) -> Result<LogicalState, DomainError> {
        Ok(ground_condition(domain, &self.init)?.apply(&domain.empty_state()))
    }

    /// Every grounding of every operator schema, schema order then binding order.
    pub fn ground_operators(&self, domain: &Domain) -> Result<Vec<Operator>, DomainError> {
        let mut out = Vec::new();
        for schema in &self.operators {
            ground_schema(domain, schema, &mut out)?;
        }
        Ok(out)
    }

    /// Ground operators of a named plan, looked up in `operators`.
    pub fn plan_operators(
        &self,
        name: &str,
        operators: &[Operator],
    ) -> Result<Vec<Operator>, DomainError> {
        let plan = self
            .plan(name)
            .ok_or_else(|| DomainError::UnknownPlan(name.to_string()))?;
        plan.steps
            .iter()
            .map(|s| {
                let n = ground_name(&s.operator, &s.args);
                operators
                    .iter()
                    .find(|o| o.name == n)
                    .cloned()
                    .ok_or(DomainError::UnknownOperator(n))
            })
            .collect()
    }

    /// Appends `op` as a parameterless schema with ground literals.
    pub fn push_ground_operator(&mut self, domain: &Domain, op: &Operator) {
        let lits = |c: &Condition| -> Vec<LiteralExpr> {
            c.literals()
                .iter()
                .filter_map(|l| {
                    let atom = domain.atom(l.index)?;
                    Some(LiteralExpr::new(
                        l.positive,
                        &atom.predicate,
                        atom.args.iter().cloned().map(Term::Object).collect(),
                    ))
                })
                .collect()
        };
        let pre = lits(&op.entry);
        let run = lits(&op.run);
        self.operators.push(OperatorSchema {
            name: op.name.clone(),
            params: Vec::new(),
            run: (run != pre).then_some(run),
            pre,
            eff: lits(&op.effects),
            policy: (op.policy.id != op.name).then(|| op.policy.id.clone()),
            role: op.role,
            span: Span::default(),
        });
    }
}

fn ground_literal(domain: &Domain, lit: &LiteralExpr) -> Result<Literal, DomainError> {
    let args: Option<Vec<&str>> = lit
        .args
        .iter()
        .map(|a| match a {
            Term::Object(o) => Some(o.as_str()),
            _ => None,
        })
        .collect();
    let args = args.ok_or_else(|| DomainError::NotGround(lit.to_string()))?;
    Ok(domain.literal(&lit.predicate, &args, lit.positive)?)
}

pub fn ground_condition(domain: &Domain, lits: &[LiteralExpr]) -> Result<Condition, DomainError> {
    let lits: Result<Vec<Literal>, DomainError> =
        lits.iter().map(|l| ground_literal(domain, l)).collect();
    Ok(Condition::new(lits?)?)
}

fn substitute(lit: &LiteralExpr, binding: &BTreeMap<&str, &str>) -> LiteralExpr {
    let mut out = lit.clone();
    for a in out.args.iter_mut() {
        if let Term::Var(v) = a {
            if let Some(o) = binding.get(v.as_str()) {
                *a = Term::Object(o.to_string());
            }
        }
    }
    out
}

/// All ground literals a wildcard literal stands for.
fn expand_wildcards(domain: &Domain, lit: &LiteralExpr) -> Vec<Literal> {
    let Some(schema) = domain.schema(&lit.predicate) else {
        return Vec::new();
    };
    let mut partial: Vec<Vec<&str>> = vec![Vec::new()];
    for (k, term) in lit.args.iter().enumerate() {
        let choices: Vec<&str> = match term {
            Term::Object(o) => vec![o.as_str()],
            Term::Any => domain.objects_of_type(&schema.parameter_types[k]).collect(),
            Term::Var(_) => return Vec::new(),
        };
        partial = partial
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |c| {
                    let mut q = p.clone();
                    q.push(*c);
                    q
                })
            })
            .collect();
    }
    partial
        .into_iter()
        .filter_map(|args| domain.literal(&lit.predicate, &args, lit.positive).ok())
        .collect()
}

fn effects_condition(domain: &Domain, eff: &[LiteralExpr]) -> Option<Condition> {
    let mut wild: BTreeMap<usize, bool> = BTreeMap::new();
    for lit in eff.iter().filter(|l| l.args.contains(&Term::Any)) {
        for g in expand_wildcards(domain, lit) {
            if wild
                .insert(g.index, g.positive)
                .is_some_and(|p| p != g.positive)
            {
                return None;
            }
        }
    }
    let explicit: Vec<LiteralExpr> = eff
        .iter()
        .filter(|l| !l.args.contains(&Term::Any))
        .cloned()
        .collect();
    let explicit = ground_condition(domain, &explicit).ok()?;
    for l in explicit.literals() {
        wild.insert(l.index, l.positive);
    }
    Condition::new(wild.into_iter().map(|(i, p)| Literal::new(i, p))).ok()
}

fn ground_schema(
    domain: &Domain,
    schema: &OperatorSchema,
    out: &mut Vec<Operator>,
) -> Result<(), DomainError> {
    let mut bindings: Vec<Vec<&str>> = vec![Vec::new()];
    for p in &schema.params {
        let objs: Vec<&str> = domain
            .objects()
            .iter()
            .filter(|(_, t)| type_accepts(&p.ty, t))
            .map(|(o, _)| o.as_str())
            .collect();
        bindings = bindings
            .into_iter()
            .flat_map(|b| {
                objs.iter().map(move |o| {
                    let mut c = b.clone();
                    c.push(*o);
                    c
                })
            })
            .collect();
    }
    'binding: for b in bindings {
        let map: BTreeMap<&str, &str> = schema
            .params
            .iter()
            .map(|p| p.name.as_str())
            .zip(b.iter().copied())
            .collect();
        let sub = |lits: &[LiteralExpr]| -> Vec<LiteralExpr> {
            lits.iter().map(|l| substitute(l, &map)).collect()
        };
        let Ok(entry) = ground_condition(domain, &sub(&schema.pre)) else {
            continue 'binding;
        };
        let run = match &schema.run {
            None => entry.clone(),
            Some(r) => match ground_condition(domain, &sub(r)) {
                Ok(c) => c,
                Err(_) => continue 'binding,
            },
        };
        let Some(effects) = effects_condition(domain, &sub(&schema.eff)) else {
            continue 'binding;
        };
        let args: Vec<String> = b.iter().map(|s| s.to_string()).collect();
        let arg_refs: Vec<&str> = b.clone();
        let policy = PolicyRef::new(schema.policy.as_deref().unwrap_or(&schema.name), &arg_refs);
        out.push(
            Operator::new(ground_name(&schema.name, &args), entry, run, effects)
                .with_params(args)
                .with_policy(policy)
                .with_role(schema.role),
        );
    }
    Ok(())
}

pub const KITCHEN_FIXTURE: &str = include_str!("../../fixtures/kitchen.rlds");
pub const KITCHEN_REDUCED_FIXTURE: &str = include_str!("../../fixtures/kitchen_reduced.rlds");

/// The bundled kitchen domain.
pub fn bundled_kitchen() -> DomainFile {
    parse_domain(KITCHEN_FIXTURE).expect("bundled kitchen fixture parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wildcard_effects_expand_and_yield_to_explicit() {
        let text = "\
rlds-domain 1
predicate at ?r - robot ?p - place
object r - robot
object a b c - place
operator go ?p - place
  eff (not (at r *)) (at r ?p)
end
";
        let d = parse_domain(text).unwrap();
        let dom = d.domain().unwrap();
        let ops = d.ground_operators(&dom).unwrap();
        assert_eq!(ops.len(), 3);
        let go_b = ops.iter().find(|o| o.name == "go(b)").unwrap();
        assert_eq!(go_b.effects.len(), 3);
        assert!(go_b
            .effects
            .contains(dom.literal("at", &["r", "b"], true).unwrap()));
        assert!(go_b
            .effects
            .contains(dom.literal("at", &["r", "a"], false).unwrap()));
        assert_eq!(go_b.policy, PolicyRef::new("go", &["b"]));
    }

    #[test]
    fn bundled_kitchen_shape() {
        let d = bundled_kitchen();
        assert_eq!(d.operators.len(), 10);
        for p in ["in_approach_region", "around_obj", "is_attached_to"] {
            assert!(d.predicates.iter().any(|q| q.name == p), "{p}");
        }
        let dom = d.domain().unwrap();
        let ops = d.ground_operators(&dom).unwrap();
        assert!(ops.iter().any(|o| o.name == "place(spam,top)"));
        assert!(d.world.is_some());
    }
}
