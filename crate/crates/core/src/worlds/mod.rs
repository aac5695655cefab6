//! Simulated environments the executor steps through.

pub mod abstract_world;
pub mod kitchen;
pub mod symbolic;

use thiserror::Error;

use crate::logic::{Domain, LogicalState};
use crate::operators::PolicyRef;

pub use abstract_world::{AbstractConfig, AbstractStochasticWorld, Regression};
pub use kitchen::{select_grasp, KitchenConfig, KitchenWorld};
pub use symbolic::SymbolicWorld;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorldError {
    #[error("unknown policy `{0}`")]
    UnknownPolicy(String),
    #[error("policy `{policy}` bound to unknown object `{object}`")]
    UnknownObject { policy: String, object: String },
    #[error("policy `{policy}` expects {expected} arguments, got {found}")]
    Arity {
        policy: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid world configuration: {0}")]
    Config(String),
}

/// A steppable environment whose logical state is computed from its
/// continuous state.
pub trait WorldModel {
    type Observation;
    type Event;

    fn domain(&self) -> &Domain;

    /// Current continuous state.
    fn observe(&self) -> Self::Observation;

    fn logical_state(&self) -> LogicalState;

    /// Whether `step` knows how to run `policy`.
    fn resolves(&self, policy: &PolicyRef) -> bool;

    /// Advances one tick under `policy`.
    fn step(&mut self, policy: &PolicyRef) -> Result<(), WorldError>;

    /// Advances one tick with no policy running.
    fn idle(&mut self);

    fn inject(&mut self, event: Self::Event);
}
