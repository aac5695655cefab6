//! Ground predicates, logical states and conjunctive conditions.
//!
//! A [`Domain`] eagerly enumerates every type-valid grounding of its predicate
//! schemas and assigns each a dense index. A [`LogicalState`] is a bit vector
//! over those indices, and a [`Condition`] is a conjunction of ground literals
//! (a partial assignment, since no grounding may appear with both polarities).

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("grounding index {index} out of range for a domain with {len} groundings")]
    OutOfRange { index: usize, len: usize },
    #[error("state has {found} groundings but the domain has {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("grounding {index} appears with both polarities")]
    Contradiction { index: usize },
    #[error("duplicate predicate schema `{0}`")]
    DuplicateSchema(String),
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("unknown ground predicate `{0}`")]
    UnknownAtom(String),
}

/// Type name that accepts objects of every type.
pub const ANY_TYPE: &str = "object";

pub fn type_accepts(param_type: &str, object_type: &str) -> bool {
    param_type == object_type || param_type == ANY_TYPE
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredicateSchema {
    pub name: String,
    pub parameter_types: Vec<String>,
}

impl PredicateSchema {
    pub fn new(name: impl Into<String>, parameter_types: &[&str]) -> Self {
        Self {
            name: name.into(),
            parameter_types: parameter_types.iter().map(|t| t.to_string()).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.parameter_types.len()
    }
}

/// A predicate with concrete objects bound to all of its terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: &[&str]) -> Self {
        Self {
            predicate: predicate.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "({})", self.args.join(","))?;
        }
        Ok(())
    }
}

/// Predicate vocabulary plus the grounding index.
///
/// Groundings are ordered lexicographically by schema name and then by the
/// bound object names, so the index is stable regardless of declaration order.
#[derive(Debug, Clone)]
pub struct Domain {
    schemas: Vec<PredicateSchema>,
    objects: Vec<(String, String)>,
    atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, usize>,
}

impl Domain {
    pub fn new(
        schemas: Vec<PredicateSchema>,
        objects: Vec<(String, String)>,
    ) -> Result<Self, LogicError> {
        let mut schemas = schemas;
        let mut objects = objects;
        schemas.sort_by(|a, b| a.name.cmp(&b.name));
        for pair in schemas.windows(2) {
            if pair[0].name == pair[1].name {
                return Err(LogicError::DuplicateSchema(pair[0].name.clone()));
            }
        }
        objects.sort();
        for pair in objects.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(LogicError::DuplicateObject(pair[0].0.clone()));
            }
        }

        let mut atoms = Vec::new();
        for schema in &schemas {
            let choices: Vec<Vec<&str>> = schema
                .parameter_types
                .iter()
                .map(|ty| {
                    objects
                        .iter()
                        .filter(|(_, oty)| type_accepts(ty, oty))
                        .map(|(name, _)| name.as_str())
                        .collect()
                })
                .collect();
            for combo in cartesian(&choices) {
                atoms.push(GroundAtom::new(schema.name.clone(), &combo));
            }
        }
        let index = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        Ok(Self {
            schemas,
            objects,
            atoms,
            index,
        })
    }

    /// Number of ground predicates (the logical state width).
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn schemas(&self) -> &[PredicateSchema] {
        &self.schemas
    }

    pub fn schema(&self, name: &str) -> Option<&PredicateSchema> {
        self.schemas.iter().find(|s| s.name == name)
    }

    pub fn objects(&self) -> &[(String, String)] {
        &self.objects
    }

    pub fn object_type(&self, name: &str) -> Option<&str> {
        self.objects
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t.as_str())
    }

    /// Objects accepted by `param_type`, in name order.
    pub fn objects_of_type<'a>(
        &'a self,
        param_type: &'a str,
    ) -> impl Iterator<Item = &'a str> + 'a {
        self.objects
            .iter()
            .filter(move |(_, t)| type_accepts(param_type, t))
            .map(|(n, _)| n.as_str())
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn atom(&self, index: usize) -> Option<&GroundAtom> {
        self.atoms.get(index)
    }

    pub fn index_of(&self, atom: &GroundAtom) -> Option<usize> {
        self.index.get(atom).copied()
    }

    pub fn lookup(&self, predicate: &str, args: &[&str]) -> Result<usize, LogicError> {
        let atom = GroundAtom::new(predicate, args);
        self.index_of(&atom)
            .ok_or_else(|| LogicError::UnknownAtom(atom.to_string()))
    }

    pub fn literal(
        &self,
        predicate: &str,
        args: &[&str],
        positive: bool,
    ) -> Result<Literal, LogicError> {
        Ok(Literal::new(self.lookup(predicate, args)?, positive))
    }

    /// State with every grounding false.
    pub fn empty_state(&self) -> LogicalState {
        LogicalState::new(self.len())
    }

    pub fn check_state(&self, state: &LogicalState) -> Result<(), LogicError> {
        if state.len() != self.len() {
            return Err(LogicError::WidthMismatch {
                expected: self.len(),
                found: state.len(),
            });
        }
        Ok(())
    }

    pub fn check_condition(&self, cond: &Condition) -> Result<(), LogicError> {
        match cond.literals().last() {
            Some(lit) if lit.index >= self.len() => Err(LogicError::OutOfRange {
                index: lit.index,
                len: self.len(),
            }),
            _ => Ok(()),
        }
    }

    pub fn display_literal(&self, lit: Literal) -> String {
        let atom = self
            .atom(lit.index)
            .map(|a| a.to_string())
            .unwrap_or_else(|| format!("#{}", lit.index));
        if lit.positive {
            atom
        } else {
            format!("!{atom}")
        }
    }

    pub fn display_condition(&self, cond: &Condition) -> String {
        let parts: Vec<String> = cond
            .literals()
            .iter()
            .map(|l| self.display_literal(*l))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn cartesian<'a>(choices: &[Vec<&'a str>]) -> Vec<Vec<&'a str>> {
    let mut out: Vec<Vec<&'a str>> = vec![Vec::new()];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for opt in options {
                let mut row = prefix.clone();
                row.push(opt);
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// Truth assignment over all groundings of a domain.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogicalState {
    words: Vec<u64>,
    len: usize,
}

impl LogicalState {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// Builds the state whose bit `i` is bit `i` of `bits`. Requires `len <= 64`.
    pub fn from_bits(bits: u64, len: usize) -> Self {
        assert!(len <= 64, "from_bits supports at most 64 groundings");
        let mut s = Self::new(len);
        if len > 0 {
            let mask = if len == 64 {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            s.words[0] = bits & mask;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(
            index < self.len,
            "grounding {index} out of range ({})",
            self.len
        );
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn try_get(&self, index: usize) -> Result<bool, LogicError> {
        if index < self.len {
            Ok(self.get(index))
        } else {
            Err(LogicError::OutOfRange {
                index,
                len: self.len,
            })
        }
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(
            index < self.len,
            "grounding {index} out of range ({})",
            self.len
        );
        let word = &mut self.words[index / 64];
        if value {
            *word |= 1 << (index % 64);
        } else {
            *word &= !(1 << (index % 64));
        }
    }

    pub fn with(mut self, index: usize, value: bool) -> Self {
        self.set(index, value);
        self
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Hex encoding, `ceil(len / 4)` digits, most significant nibble first.
    /// Bit 0 is the least significant bit of the last digit.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut out = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let mut nibble = 0u32;
            for b in 0..4 {
                let i = d * 4 + b;
                if i < self.len && self.get(i) {
                    nibble |= 1 << b;
                }
            }
            out.push(char::from_digit(nibble, 16).expect("nibble < 16"));
        }
        out
    }

    pub fn from_hex(hex: &str, len: usize) -> Option<Self> {
        let digits = len.div_ceil(4);
        if hex.len() != digits {
            return None;
        }
        let mut s = Self::new(len);
        for (pos, ch) in hex.chars().enumerate() {
            let nibble = ch.to_digit(16)?;
            let d = digits - 1 - pos;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let i = d * 4 + b;
                    if i >= len {
                        return None;
                    }
                    s.set(i, true);
                }
            }
        }
        Some(s)
    }
}

impl fmt::Debug for LogicalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogicalState({}:{})", self.len, self.to_hex())
    }
}

/// A ground literal: a grounding index plus polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub index: usize,
    pub positive: bool,
}

impl Literal {
    pub fn new(index: usize, positive: bool) -> Self {
        Self { index, positive }
    }

    pub fn pos(index: usize) -> Self {
        Self::new(index, true)
    }

    pub fn neg(index: usize) -> Self {
        Self::new(index, false)
    }

    pub fn negated(self) -> Self {
        Self::new(self.index, !self.positive)
    }

    pub fn holds(self, state: &LogicalState) -> bool {
        state.get(self.index) == self.positive
    }
}

/// Conjunction of ground literals, kept sorted by grounding index.
///
/// The empty condition is always true.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Condition {
    literals: Vec<Literal>,
}

impl Condition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a condition, rejecting any grounding that appears with both polarities.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self, LogicError> {
        let mut literals: Vec<Literal> = literals.into_iter().collect();
        literals.sort();
        literals.dedup();
        for pair in literals.windows(2) {
            if pair[0].index == pair[1].index {
                return Err(LogicError::Contradiction {
                    index: pair[0].index,
                });
            }
        }
        Ok(Self { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Polarity required for `index`, if the condition mentions it.
    pub fn polarity(&self, index: usize) -> Option<bool> {
        self.literals
            .binary_search_by_key(&index, |l| l.index)
            .ok()
            .map(|pos| self.literals[pos].positive)
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.polarity(lit.index) == Some(lit.positive)
    }

    /// True if the condition requires the opposite polarity of `lit`.
    pub fn contradicts(&self, lit: Literal) -> bool {
        self.polarity(lit.index) == Some(!lit.positive)
    }

    /// Evaluates the condition. Panics if a literal is outside the state.
    pub fn holds(&self, state: &LogicalState) -> bool {
        self.literals.iter().all(|l| l.holds(state))
    }

    pub fn evaluate(&self, state: &LogicalState) -> Result<bool, LogicError> {
        self.check_width(state.len())?;
        Ok(self.holds(state))
    }

    /// Syntactic entailment: every literal of `other` appears in `self`.
    pub fn entails(&self, other: &Condition) -> bool {
        other.literals.iter().all(|l| self.contains(*l))
    }

    pub fn union(&self, other: &Condition) -> Result<Condition, LogicError> {
        Condition::new(self.literals.iter().chain(other.literals.iter()).copied())
    }

    /// Applies this condition as a set of assignments (frame assumption for the rest).
    pub fn apply(&self, state: &LogicalState) -> LogicalState {
        let mut next = state.clone();
        for l in &self.literals {
            next.set(l.index, l.positive);
        }
        next
    }

    /// Number of literals not satisfied by `state`.
    pub fn distance(&self, state: &LogicalState) -> usize {
        self.literals.iter().filter(|l| !l.holds(state)).count()
    }

    /// Assignments of `self` overridden by `later` on shared groundings.
    pub fn overridden_by(&self, later: &Condition) -> Condition {
        let mut merged: Vec<Literal> = self
            .literals
            .iter()
            .filter(|l| later.polarity(l.index).is_none())
            .copied()
            .collect();
        merged.extend_from_slice(&later.literals);
        merged.sort();
        Condition { literals: merged }
    }

    fn check_width(&self, width: usize) -> Result<(), LogicError> {
        match self.literals.last() {
            Some(l) if l.index >= width => Err(LogicError::OutOfRange {
                index: l.index,
                len: width,
            }),
            _ => Ok(()),
        }
    }
}

pub fn evaluate(cond: &Condition, state: &LogicalState) -> Result<bool, LogicError> {
    cond.evaluate(state)
}

pub fn entails(a: &Condition, b: &Condition) -> bool {
    a.entails(b)
}

pub fn apply_effects(
    effects: &Condition,
    state: &LogicalState,
) -> Result<LogicalState, LogicError> {
    effects.check_width(state.len())?;
    Ok(effects.apply(state))
}

pub fn goal_distance(state: &LogicalState, goal: &Condition) -> Result<usize, LogicError> {
    goal.check_width(state.len())?;
    Ok(goal.distance(state))
}
