//! Seeded instance corpora shared by `bench` and the acceptance harness.

use briberon_core::kb::KbInstance;
use briberon_core::testkit::{gen_random, GenKind, GenParams, Generated, RuleKind};
use briberon_core::weighted::{ApprovalPrimeInstance, NegativeBriberyInstance, WeightedPluralityInstance};

/// Rules cycled through by the strict corpus.
pub const STRICT_RULES: [RuleKind; 4] = [
    RuleKind::Plurality,
    RuleKind::Veto,
    RuleKind::TApproval(3),
    RuleKind::Utility,
];

/// Rules cycled through by the free-form corpus.
pub const FREE_FORM_RULES: [RuleKind; 2] = [RuleKind::Approval, RuleKind::Utility];

fn generate(params: &GenParams) -> Generated {
    gen_random(params).unwrap_or_else(|e| panic!("corpus parameters are valid: {e}"))
}

/// `count` small (k,b) instances: `m <= 4`, `n <= 4`, `k <= 3`, `b <= 2`,
/// prices at most 9. Instance `i` uses seed `seed + i` and rule
/// `rules[i % rules.len()]`.
pub fn kb_corpus(free_form: bool, count: usize, seed: u64) -> Vec<(RuleKind, KbInstance)> {
    let rules: &[RuleKind] = if free_form { &FREE_FORM_RULES } else { &STRICT_RULES };
    (0..count)
        .map(|i| {
            let rule = rules[i % rules.len()];
            let mut p = GenParams::new(seed.wrapping_add(i as u64), GenKind::Kb(rule));
            p.m = match rule {
                RuleKind::TApproval(t) => (t as usize, 4),
                RuleKind::Veto => (2, 4),
                _ => (1, 4),
            };
            p.n = (1, 4);
            p.k = (1, 3);
            p.b = (1, 2);
            p.price = (0, 9);
            p.free_form = free_form;
            match generate(&p) {
                Generated::Kb(inst) => (rule, inst),
                _ => unreachable!(),
            }
        })
        .collect()
}

/// Desk-scale stress instance: `m = 10`, `n = 50`, `b = 5`, prices at most
/// 100, strict utility ballots with the given `k`.
pub fn scaling_instance(k: u64, seed: u64) -> KbInstance {
    let mut p = GenParams::new(seed, GenKind::Kb(RuleKind::Utility));
    p.m = (10, 10);
    p.n = (50, 50);
    p.k = (k, k);
    p.b = (5, 5);
    p.price = (0, 100);
    p.capped = false;
    match generate(&p) {
        Generated::Kb(inst) => inst,
        _ => unreachable!(),
    }
}

/// Weighted plurality: `n <= 10`, weights at most 20, prices at most 10^6.
pub fn plurality_corpus(count: usize, seed: u64) -> Vec<WeightedPluralityInstance> {
    (0..count)
        .map(|i| {
            let mut p = GenParams::new(seed.wrapping_add(i as u64), GenKind::PluralityWeighted);
            p.m = (2, 4);
            p.n = (1, 10);
            p.weight = (1, 20);
            p.price = (0, 1_000_000);
            match generate(&p) {
                Generated::PluralityWeighted(inst) => inst,
                _ => unreachable!(),
            }
        })
        .collect()
}

/// Approval': `n <= 5`, `m <= 4`, weights at most 20, prices at most 10^6.
pub fn approval_corpus(count: usize, seed: u64) -> Vec<ApprovalPrimeInstance> {
    (0..count)
        .map(|i| {
            let mut p = GenParams::new(seed.wrapping_add(i as u64), GenKind::ApprovalPrime);
            p.m = (2, 4);
            p.n = (1, 5);
            p.weight = (1, 20);
            p.price = (0, 1_000_000);
            match generate(&p) {
                Generated::ApprovalPrime(inst) => inst,
                _ => unreachable!(),
            }
        })
        .collect()
}

/// Negative bribery: `n <= 6`, `m <= 4`, weights at most 9, budget at most `n`.
pub fn negative_corpus(count: usize, seed: u64) -> Vec<NegativeBriberyInstance> {
    (0..count)
        .map(|i| {
            let mut p = GenParams::new(seed.wrapping_add(i as u64), GenKind::Negative);
            p.m = (2, 4);
            p.n = (1, 6);
            p.weight = (1, 9);
            match generate(&p) {
                Generated::Negative(inst) => inst,
                _ => unreachable!(),
            }
        })
        .collect()
}
