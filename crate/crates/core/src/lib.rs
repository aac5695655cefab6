//! Reactive operator chains over logical-dynamical systems.

pub mod analysis;
pub mod domain_io;
pub mod executor;
pub mod logic;
pub mod operators;
pub mod planner;
pub mod worlds;
