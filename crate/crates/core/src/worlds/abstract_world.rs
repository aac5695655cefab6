//! A purely logical world of `N` stages where each operator succeeds with a
//! fixed probability and failures regress the stage counter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{WorldError, WorldModel};
use crate::logic::{Condition, Domain, Literal, LogicalState, PredicateSchema};
use crate::operators::{Chain, Operator, PolicyRef};

pub const STAGE_PREDICATE: &str = "stage_reached";
pub const ADVANCE_POLICY: &str = "advance";

/// Where the stage goes after an uncontrolled transition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Regression {
    /// Back to stage 0, the worst case.
    #[default]
    ToStart,
    OneBack,
    /// Uniformly to one of the stages below the current one.
    Uniform,
}

impl Regression {
    pub fn as_str(self) -> &'static str {
        match self {
            Regression::ToStart => "to-start",
            Regression::OneBack => "one-back",
            Regression::Uniform => "uniform",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbstractConfig {
    /// Success probability of each of the `N` operators.
    pub success: Vec<f64>,
    /// Per-tick probability of a spontaneous regression.
    pub perturbation: f64,
    pub regression: Regression,
    /// Ticks an operator needs before its attempt resolves.
    pub attempt_ticks: u32,
}

impl AbstractConfig {
    pub fn uniform(stages: usize, p: f64) -> Self {
        Self {
            success: vec![p; stages],
            perturbation: 0.0,
            regression: Regression::ToStart,
            attempt_ticks: 1,
        }
    }

    pub fn stages(&self) -> usize {
        self.success.len()
    }

    pub fn validate(&self) -> Result<(), WorldError> {
        if self.success.is_empty() {
            return Err(WorldError::Config("need at least one stage".into()));
        }
        if let Some(p) = self.success.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
            return Err(WorldError::Config(format!(
                "success probability {p} outside (0, 1]"
            )));
        }
        if !(0.0..1.0).contains(&self.perturbation) {
            return Err(WorldError::Config(format!(
                "perturbation probability {} outside [0, 1)",
                self.perturbation
            )));
        }
        if self.attempt_ticks == 0 {
            return Err(WorldError::Config("attempt_ticks must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct AbstractStochasticWorld {
    config: AbstractConfig,
    domain: Domain,
    /// Grounding index of `stage_reached(s_k)` for each k.
    stage_bits: Vec<usize>,
    stage: usize,
    attempt: u32,
    attempts: u64,
    successes: u64,
    rng: ChaCha8Rng,
}

fn stage_object(k: usize) -> String {
    format!("s{k}")
}

impl AbstractStochasticWorld {
    pub fn new(config: AbstractConfig, seed: u64) -> Result<Self, WorldError> {
        Self::with_rng(config, ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uses stream `stream` of the generator seeded by `seed`.
    pub fn with_stream(config: AbstractConfig, seed: u64, stream: u64) -> Result<Self, WorldError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self::with_rng(config, rng)
    }

    pub fn with_rng(config: AbstractConfig, rng: ChaCha8Rng) -> Result<Self, WorldError> {
        config.validate()?;
        let n = config.stages();
        let objects = (0..=n)
            .map(|k| (stage_object(k), "stage".to_string()))
            .collect();
        let domain = Domain::new(
            vec![PredicateSchema::new(STAGE_PREDICATE, &["stage"])],
            objects,
        )
        .map_err(|e| WorldError::Config(e.to_string()))?;
        let stage_bits = (0..=n)
            .map(|k| {
                domain
                    .lookup(STAGE_PREDICATE, &[&stage_object(k)])
                    .expect("grounded")
            })
            .collect();
        Ok(Self {
            config,
            domain,
            stage_bits,
            stage: 0,
            attempt: 0,
            attempts: 0,
            successes: 0,
            rng,
        })
    }

    pub fn config(&self) -> &AbstractConfig {
        &self.config
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    /// Resolved attempts and how many of them succeeded.
    pub fn attempt_stats(&self) -> (u64, u64) {
        (self.attempts, self.successes)
    }

    fn reached(&self, k: usize) -> Literal {
        Literal::pos(self.stage_bits[k])
    }

    pub fn goal(&self) -> Condition {
        Condition::new([self.reached(self.config.stages())]).expect("single literal")
    }

    /// `advance_i` requires stage `i-1` and establishes stage `i`.
    pub fn operators(&self) -> Vec<Operator> {
        (1..=self.config.stages())
            .map(|i| {
                let pre = Condition::new([self.reached(i - 1)]).expect("single literal");
                let eff = Condition::new([self.reached(i)]).expect("single literal");
                Operator::new(format!("advance_{i}"), pre.clone(), pre, eff)
                    .with_params(vec![stage_object(i)])
                    .with_policy(PolicyRef::new(ADVANCE_POLICY, &[&stage_object(i)]))
            })
            .collect()
    }

    pub fn chain(&self) -> Chain {
        Chain::new(self.operators(), self.goal())
    }

    fn regress(&mut self) {
        self.stage = match self.config.regression {
            Regression::ToStart => 0,
            Regression::OneBack => self.stage.saturating_sub(1),
            Regression::Uniform if self.stage == 0 => 0,
            Regression::Uniform => self.rng.random_range(0..self.stage),
        };
        self.attempt = 0;
    }

    fn target(&self, policy: &PolicyRef) -> Result<usize, WorldError> {
        if policy.id != ADVANCE_POLICY {
            return Err(WorldError::UnknownPolicy(policy.id.clone()));
        }
        if policy.args.len() != 1 {
            return Err(WorldError::Arity {
                policy: policy.id.clone(),
                expected: 1,
                found: policy.args.len(),
            });
        }
        let arg = &policy.args[0];
        arg.strip_prefix('s')
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|k| (1..=self.config.stages()).contains(k))
            .ok_or_else(|| WorldError::UnknownObject {
                policy: policy.id.clone(),
                object: arg.clone(),
            })
    }
}

impl WorldModel for AbstractStochasticWorld {
    type Observation = usize;
    /// Forces the stage to the given value.
    type Event = usize;

    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn observe(&self) -> usize {
        self.stage
    }

    fn logical_state(&self) -> LogicalState {
        let mut s = self.domain.empty_state();
        for &bit in &self.stage_bits[..=self.stage] {
            s.set(bit, true);
        }
        s
    }

    fn resolves(&self, policy: &PolicyRef) -> bool {
        self.target(policy).is_ok()
    }

    fn step(&mut self, policy: &PolicyRef) -> Result<(), WorldError> {
        let target = self.target(policy)?;
        if self.rng.random::<f64>() < self.config.perturbation {
            self.regress();
            return Ok(());
        }
        self.attempt += 1;
        if self.attempt >= self.config.attempt_ticks {
            self.attempt = 0;
            self.attempts += 1;
            if self.rng.random::<f64>() < self.config.success[target - 1] {
                self.successes += 1;
                self.stage = target;
            } else {
                self.regress();
            }
        }
        Ok(())
    }

    fn idle(&mut self) {
        if self.rng.random::<f64>() < self.config.perturbation {
            self.regress();
        }
    }

    fn inject(&mut self, stage: usize) {
        self.stage = stage.min(self.config.stages());
        self.attempt = 0;
    }
}
