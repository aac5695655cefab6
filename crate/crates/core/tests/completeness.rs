//! Coverage of the state space by a chain's entry conditions.

mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rlds::domain_io::parse_domain;
use rlds::operators::{
    attach_recovery, augment_with_implicit, check_completeness, implicit_conditions, Chain,
    CompletenessMode,
};
use support::{flat_domain, random_operators};

fn reduced() -> (rlds::domain_io::DomainFile, rlds::logic::Domain) {
    let file = parse_domain(include_str!("../fixtures/kitchen_reduced.rlds")).unwrap();
    let domain = file.domain().unwrap();
    (file, domain)
}

#[test]
fn plan_steps_alone_leave_gaps_that_the_fallback_covers() {
    let (file, domain) = reduced();
    assert_eq!(domain.len(), 11);
    let ops = file.ground_operators(&domain).unwrap();
    let plan = file.plan_operators("stow_spam", &ops).unwrap();
    let goal = file.goal_condition(&domain, "spam_in_drawer").unwrap();
    let implicit = implicit_conditions(&plan, &goal).unwrap();
    let chain = augment_with_implicit(&Chain::new(plan, goal), &implicit).unwrap();

    let bare = check_completeness(&chain, &domain, CompletenessMode::Exhaustive).unwrap();
    assert!(!bare.complete);
    let witness = bare.witness.expect("uncovered state");
    assert!(chain.ranked().iter().all(|op| !op.entry.holds(&witness)));

    let full = attach_recovery(chain, &ops);
    assert_eq!(full.fallbacks.len(), 1);
    let done = check_completeness(&full, &domain, CompletenessMode::Exhaustive).unwrap();
    assert!(done.complete);
    assert_eq!(done.states_checked, 1 << 11);
    let sampled = check_completeness(
        &full,
        &domain,
        CompletenessMode::Sampled {
            samples: 500,
            seed: 1,
        },
    )
    .unwrap();
    assert!(sampled.complete);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exhaustive_verdict_matches_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = 1 + (seed % 6) as usize;
        let ops = random_operators(&mut rng, g, 1 + (seed % 5) as usize);
        let chain = Chain::new(ops.clone(), rlds::logic::Condition::empty());
        let got = check_completeness(&chain, &flat_domain(g), CompletenessMode::Exhaustive).unwrap();
        let uncovered: Vec<u64> = (0..1u64 << g)
            .filter(|&b| {
                let s = rlds::logic::LogicalState::from_bits(b, g);
                !ops.iter().any(|o| o.entry.holds(&s))
            })
            .collect();
        prop_assert_eq!(got.complete, uncovered.is_empty());
        if let Some(w) = got.witness {
            let first = uncovered.first().map(|&b| rlds::logic::LogicalState::from_bits(b, g));
            prop_assert_eq!(Some(w), first);
        }
    }
}
