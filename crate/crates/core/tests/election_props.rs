use briberon_core::election::{encode_rule, tally, winners, Ballot, CandidateSet, Election, RawBallot, Rule};
use proptest::prelude::*;

fn ballots(m: usize, k: u64, b: u64) -> impl Strategy<Value = Vec<Ballot>> {
    // Random splits of k points with per-candidate cap b; rejected if k
    // cannot be placed.
    prop::collection::vec(prop::collection::vec(0..=b, m), 1..6).prop_filter_map(
        "no ballot sums to k",
        move |rows| {
            rows.into_iter()
                .map(|mut r| {
                    let mut total: u64 = r.iter().sum();
                    for x in r.iter_mut() {
                        while total > k && *x > 0 {
                            *x -= 1;
                            total -= 1;
                        }
                    }
                    for x in r.iter_mut() {
                        while total < k && *x < b {
                            *x += 1;
                            total += 1;
                        }
                    }
                    (total == k).then(|| Ballot::new(r))
                })
                .collect::<Option<Vec<_>>>()
        },
    )
}

fn election(m: usize, k: u64, b: u64, ballots: Vec<Ballot>) -> Election {
    Election::new(CandidateSet::numbered(m), k, b, false, ballots).unwrap()
}

proptest! {
    #[test]
    fn tally_is_additive(left in ballots(3, 3, 2), right in ballots(3, 3, 2)) {
        let joined: Vec<Ballot> = left.iter().chain(&right).cloned().collect();
        let a = tally(&election(3, 3, 2, left)).unwrap();
        let b = tally(&election(3, 3, 2, right)).unwrap();
        let ab = tally(&election(3, 3, 2, joined)).unwrap();
        for c in 0..3 {
            prop_assert_eq!(ab[c], a[c] + b[c]);
        }
    }

    #[test]
    fn relabeling_permutes_scores(rows in ballots(4, 4, 2), sigma in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
        let moved: Vec<Ballot> = rows
            .iter()
            .map(|b| {
                let mut p = vec![0; 4];
                for c in 0..4 {
                    p[sigma[c]] = b.points[c];
                }
                Ballot::new(p)
            })
            .collect();
        let before = tally(&election(4, 4, 2, rows)).unwrap();
        let after = tally(&election(4, 4, 2, moved)).unwrap();
        for c in 0..4 {
            prop_assert_eq!(after[sigma[c]], before[c]);
        }
        let mut expected: Vec<usize> = winners(&before).into_iter().map(|c| sigma[c]).collect();
        expected.sort_unstable();
        prop_assert_eq!(winners(&after), expected);
    }

    #[test]
    fn rankings_encode_validly(orders in prop::collection::vec(Just((0..5).collect::<Vec<usize>>()).prop_shuffle(), 1..6)) {
        let raw: Vec<RawBallot> = orders.into_iter().map(RawBallot::Ranking).collect();
        for rule in [Rule::Plurality, Rule::Veto] {
            let e = encode_rule(CandidateSet::numbered(5), rule, &raw).unwrap();
            prop_assert!(e.is_valid());
        }
    }

    #[test]
    fn approvals_leave_the_rest_unassigned(sets in prop::collection::vec(prop::collection::vec(any::<bool>(), 4), 1..6)) {
        let raw: Vec<RawBallot> = sets
            .iter()
            .map(|s| RawBallot::Approvals((0..4).filter(|&c| s[c]).collect()))
            .collect();
        let e = encode_rule(CandidateSet::numbered(4), Rule::Approval, &raw).unwrap();
        for (ballot, set) in e.ballots.iter().zip(&sets) {
            let approved = set.iter().filter(|&&x| x).count() as u64;
            prop_assert_eq!(ballot.assigned(), approved);
            prop_assert_eq!(ballot.unassigned, 4 - approved);
        }
    }
}
