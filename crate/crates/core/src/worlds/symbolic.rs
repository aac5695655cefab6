//! A world whose continuous state is the logical state itself. Policies apply
//! their operator's effects with some probability, and bits flip at random.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{WorldError, WorldModel};
use crate::logic::{Condition, Domain, LogicalState};
use crate::operators::{Operator, PolicyRef};

#[derive(Debug, Clone)]
pub struct SymbolicWorld {
    domain: Domain,
    state: LogicalState,
    effects: HashMap<PolicyRef, Condition>,
    success: f64,
    flip: f64,
    rng: ChaCha8Rng,
}

impl SymbolicWorld {
    /// `success` is the chance a step applies the policy's effects; `flip`
    /// is the per-tick chance each bit is inverted afterwards.
    pub fn new(
        domain: Domain,
        initial: LogicalState,
        operators: &[Operator],
        success: f64,
        flip: f64,
        seed: u64,
    ) -> Result<Self, WorldError> {
        domain
            .check_state(&initial)
            .map_err(|e| WorldError::Config(e.to_string()))?;
        if !(0.0..=1.0).contains(&success) || !(0.0..=1.0).contains(&flip) {
            return Err(WorldError::Config(
                "probabilities must lie in [0, 1]".into(),
            ));
        }
        let effects = operators
            .iter()
            .map(|o| (o.policy.clone(), o.effects.clone()))
            .collect();
        Ok(Self {
            domain,
            state: initial,
            effects,
            success,
            flip,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    fn perturb(&mut self) {
        if self.flip <= 0.0 {
            return;
        }
        for i in 0..self.state.len() {
            if self.rng.random::<f64>() < self.flip {
                let v = self.state.get(i);
                self.state.set(i, !v);
            }
        }
    }
}

impl WorldModel for SymbolicWorld {
    type Observation = LogicalState;
    /// Replaces the whole state.
    type Event = LogicalState;

    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn observe(&self) -> LogicalState {
        self.state.clone()
    }

    fn logical_state(&self) -> LogicalState {
        self.state.clone()
    }

    fn resolves(&self, policy: &PolicyRef) -> bool {
        self.effects.contains_key(policy)
    }

    fn step(&mut self, policy: &PolicyRef) -> Result<(), WorldError> {
        let effects = self
            .effects
            .get(policy)
            .ok_or_else(|| WorldError::UnknownPolicy(policy.to_string()))?;
        if self.rng.random::<f64>() < self.success {
            self.state = effects.apply(&self.state);
        }
        self.perturb();
        Ok(())
    }

    fn idle(&mut self) {
        self.perturb();
    }

    fn inject(&mut self, state: LogicalState) {
        if state.len() == self.state.len() {
            self.state = state;
        }
    }
}
