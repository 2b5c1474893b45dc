use briberon_core::election::{tally, winners, Ballot, Election};
use briberon_core::kb::{apply_plan, solve_optimal, solve_target, target_range, KbError, KbInstance, PriceTable};
use briberon_core::testkit::{brute_kb, gen_random, GenKind, GenParams, Generated, RuleKind};
use proptest::prelude::*;

const RULES: [RuleKind; 5] = [
    RuleKind::Plurality,
    RuleKind::Veto,
    RuleKind::Approval,
    RuleKind::TApproval(3),
    RuleKind::Utility,
];

fn small(seed: u64, rule: RuleKind, free_form: bool) -> KbInstance {
    let mut p = GenParams::new(seed, GenKind::Kb(rule));
    p.m = (1, 4);
    p.n = (1, 4);
    p.k = (1, 3);
    p.b = (1, 2);
    p.price = (0, 9);
    p.free_form = free_form;
    if rule == RuleKind::TApproval(3) {
        p.m = (3, 4);
    }
    if matches!(rule, RuleKind::Veto) {
        p.m = (2, 4);
    }
    match gen_random(&p).expect("generator") {
        Generated::Kb(i) => i,
        other => panic!("unexpected {other:?}"),
    }
}

fn rule() -> impl Strategy<Value = RuleKind> {
    prop::sample::select(RULES.to_vec())
}

fn cost(instance: &KbInstance) -> u64 {
    solve_optimal(instance).expect("solvable").optimal_cost
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flow_matches_oracle(seed in any::<u64>(), rule in rule(), free_form in any::<bool>()) {
        let inst = small(seed, rule, free_form);
        let outcome = solve_optimal(&inst).unwrap();
        let (oracle, _) = brute_kb(&inst).unwrap();
        prop_assert_eq!(outcome.optimal_cost, oracle);

        let post = apply_plan(&inst, &outcome.plan).unwrap();
        let scores = tally(&post).unwrap();
        prop_assert!(winners(&scores).contains(&inst.preferred));
        prop_assert_eq!(scores, outcome.post_scores);
        prop_assert_eq!(outcome.plan.total_price, oracle);
    }

    #[test]
    fn accepted_targets_decompose(seed in any::<u64>(), rule in rule(), free_form in any::<bool>()) {
        let inst = small(seed, rule, free_form);
        for target in target_range(&inst).unwrap() {
            let Some(sol) = solve_target(&inst, target).unwrap() else { continue };
            if !sol.accepted() {
                continue;
            }
            let kn = inst.total_points().unwrap();
            let penalty = sol.network.penalty;
            prop_assert_eq!(
                sol.flow.cost - penalty * (kn - sol.preferred_score),
                sol.plan.total_price
            );
        }
    }

    #[test]
    fn cheaper_entry_never_costs_more(
        seed in any::<u64>(),
        rule in rule(),
        free_form in any::<bool>(),
        pick in any::<(usize, usize, usize)>(),
    ) {
        let inst = small(seed, rule, free_form);
        let before = cost(&inst);
        let slots = inst.slots();
        let (voter, from, to) = (pick.0 % inst.election.n(), pick.1 % slots, pick.2 % slots);
        prop_assume!(from != to);
        let mut cheaper = inst.clone();
        let price = cheaper.prices[voter].get(from, to);
        cheaper.prices[voter].set(from, to, price.saturating_sub(1 + price / 2)).unwrap();
        prop_assert!(cost(&cheaper) <= before);
    }

    #[test]
    fn free_prices_cost_nothing(seed in any::<u64>(), rule in rule(), free_form in any::<bool>()) {
        let mut inst = small(seed, rule, free_form);
        let slots = inst.slots();
        inst.prices.iter_mut().for_each(|t| *t = PriceTable::zeros(slots));
        prop_assert_eq!(cost(&inst), 0);
    }

    #[test]
    fn relabeling_rivals_keeps_cost(
        seed in any::<u64>(),
        rule in rule(),
        free_form in any::<bool>(),
        shuffle in any::<u64>(),
    ) {
        let inst = small(seed, rule, free_form);
        let sigma = rival_permutation(inst.election.m(), inst.preferred, shuffle);
        prop_assert_eq!(cost(&permute(&inst, &sigma)), cost(&inst));
    }
}

/// Random permutation of `0..m` fixing `p`.
fn rival_permutation(m: usize, p: usize, mut state: u64) -> Vec<usize> {
    let mut rivals: Vec<usize> = (0..m).filter(|&c| c != p).collect();
    for i in (1..rivals.len()).rev() {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        rivals.swap(i, (state >> 33) as usize % (i + 1));
    }
    let mut sigma = vec![p; m];
    let mut it = rivals.into_iter();
    for (c, slot) in sigma.iter_mut().enumerate() {
        if c != p {
            *slot = it.next().unwrap();
        }
    }
    sigma
}

/// Candidate `c` becomes `sigma[c]`; the unassigned slot stays last.
fn permute(inst: &KbInstance, sigma: &[usize]) -> KbInstance {
    let m = sigma.len();
    let map = |s: usize| if s < m { sigma[s] } else { s };
    let ballots = inst
        .election
        .ballots
        .iter()
        .map(|b| {
            let mut points = vec![0; m];
            for c in 0..m {
                points[sigma[c]] = b.points[c];
            }
            Ballot::free_form(points, b.unassigned)
        })
        .collect();
    let prices = inst
        .prices
        .iter()
        .map(|t| {
            let mut out = PriceTable::zeros(t.slots());
            for i in 0..t.slots() {
                for j in 0..t.slots() {
                    if i != j {
                        out.set(map(i), map(j), t.get(i, j)).unwrap();
                    }
                }
            }
            out
        })
        .collect();
    let e = &inst.election;
    let election = Election::new(e.candidates.clone(), e.k, e.b, e.free_form, ballots).unwrap();
    KbInstance::new(election, sigma[inst.preferred], prices, None).unwrap()
}

#[test]
fn every_rule_reaches_the_solver() {
    for rule in RULES {
        for free_form in [false, true] {
            for seed in 0..20 {
                let inst = small(seed, rule, free_form);
                assert_eq!(cost(&inst), brute_kb(&inst).unwrap().0, "{rule:?} seed {seed}");
            }
        }
    }
}

#[test]
fn non_unit_weights_are_rejected() {
    let mut inst = small(7, RuleKind::Utility, false);
    inst.election.weights[0] = 2;
    assert!(matches!(solve_optimal(&inst), Err(KbError::InvalidInstance(_))));
}
