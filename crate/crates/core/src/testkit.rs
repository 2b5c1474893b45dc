//! Brute-force oracles and a seeded instance generator.
//!
//! The oracles are exhaustive on purpose and share nothing with the
//! production solvers beyond the instance types, [`tally`] and [`winners`].
//!
//! Randomness comes from SplitMix64 so any implementation can regenerate the
//! same corpus from a seed:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! return z ^ (z >> 31)
//! ```
//!
//! A draw from the inclusive range `lo..=hi` is `lo + next() % (hi - lo + 1)`.
//! Generators consume draws in the order documented on [`gen_random`].

use std::collections::BTreeMap;

use crate::election::{encode_rule, tally, winners, Ballot, CandidateSet, Election, RawBallot, Rule};
use crate::kb::{BriberyPlan, KbInstance, Move, PriceTable, Slot};
use crate::weighted::{
    ApprovalPrimeInstance, ApprovalVoter, NegativeBriberyInstance, PluralityVoter,
    Weighted11Instance, WeightedPluralityInstance, WeightedVote,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("instance exceeds oracle caps: {0}")]
    CapExceeded(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("parameters exceed desk-scale caps: {0}")]
    CapExceeded(String),
    #[error("impossible parameters: {0}")]
    Impossible(String),
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Draw from `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi, "empty range {lo}..={hi}");
        let span = hi - lo;
        if span == u64::MAX {
            return self.next_u64();
        }
        lo + self.next_u64() % (span + 1)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.range(0, len as u64 - 1) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    /// Fisher-Yates, from the back.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }
}

// ---------------------------------------------------------------------------
// Generator

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Plurality,
    Veto,
    Approval,
    TApproval(u64),
    /// Random point vectors; strict or free-form per [`GenParams::free_form`].
    /// Every other kind goes through the matching rule encoder.
    Utility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    Kb(RuleKind),
    PluralityWeighted,
    ApprovalPrime,
    Negative,
    Weighted11,
}

/// Generator parameters. All ranges are inclusive `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenParams {
    pub seed: u64,
    pub kind: GenKind,
    pub m: (usize, usize),
    pub n: (usize, usize),
    pub k: (u64, u64),
    pub b: (u64, u64),
    pub weight: (u64, u64),
    pub price: (u64, u64),
    pub free_form: bool,
    /// Enforce the desk-scale caps (off for benchmark-sized instances).
    pub capped: bool,
}

impl GenParams {
    pub fn new(seed: u64, kind: GenKind) -> Self {
        Self {
            seed,
            kind,
            m: (2, 4),
            n: (1, 4),
            k: (1, 3),
            b: (1, 2),
            weight: (1, 9),
            price: (0, 9),
            free_form: false,
            capped: true,
        }
    }

    fn check_caps(&self) -> Result<(), GenError> {
        let ranges_ok = self.m.0 <= self.m.1
            && self.n.0 <= self.n.1
            && self.k.0 <= self.k.1
            && self.b.0 <= self.b.1
            && self.weight.0 <= self.weight.1
            && self.price.0 <= self.price.1;
        if !ranges_ok {
            return Err(GenError::Impossible("a range has lo > hi".into()));
        }
        if self.m.0 == 0 || self.k.0 == 0 || self.b.0 == 0 || self.weight.0 == 0 {
            return Err(GenError::Impossible("m, k, b and weights must be positive".into()));
        }
        if !self.capped {
            return Ok(());
        }
        let (m, n) = match self.kind {
            GenKind::Kb(_) => {
                if self.k.1 > 4 || self.b.1 > 3 {
                    return Err(GenError::CapExceeded("kb needs k <= 4 and b <= 3".into()));
                }
                (5, 8)
            }
            GenKind::PluralityWeighted => (5, 12),
            GenKind::ApprovalPrime => (5, 8),
            GenKind::Negative | GenKind::Weighted11 => (4, 6),
        };
        if self.m.1 > m || self.n.1 > n {
            return Err(GenError::CapExceeded(format!("need m <= {m} and n <= {n}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generated {
    Kb(KbInstance),
    PluralityWeighted(WeightedPluralityInstance),
    ApprovalPrime(ApprovalPrimeInstance),
    Negative(NegativeBriberyInstance),
    Weighted11(Weighted11Instance),
}

fn draw_usize(rng: &mut SplitMix64, (lo, hi): (usize, usize)) -> usize {
    rng.range(lo as u64, hi as u64) as usize
}

fn random_table(rng: &mut SplitMix64, slots: usize, (lo, hi): (u64, u64)) -> PriceTable {
    let mut table = PriceTable::zeros(slots);
    for from in 0..slots {
        for to in 0..slots {
            if from != to {
                table.set(from, to, rng.range(lo, hi)).expect("off-diagonal");
            }
        }
    }
    table
}

/// Drops `points` one at a time onto candidates that still have room
/// below `b`.
fn scatter(rng: &mut SplitMix64, m: usize, points: u64, b: u64) -> Vec<u64> {
    let mut out = vec![0; m];
    for _ in 0..points {
        let open: Vec<usize> = (0..m).filter(|&c| out[c] < b).collect();
        out[open[rng.index(open.len())]] += 1;
    }
    out
}

/// Deterministic random instance.
///
/// Draw order for (k,b) kinds: `m`, the rule's `k`/`b` (utility: `b` then
/// `k`), `n`, the preferred candidate, then per voter its ballot followed by
/// its price table (row-major, off-diagonal entries only). Weighted kinds
/// draw `m`, `n`, the preferred candidate, then per voter the weight, the
/// vote or approvals, and the prices; negative and (1,1) kinds draw the
/// budget last.
pub fn gen_random(params: &GenParams) -> Result<Generated, GenError> {
    params.check_caps()?;
    let mut rng = SplitMix64::new(params.seed);
    match params.kind {
        GenKind::Kb(rule) => gen_kb(params, rule, &mut rng).map(Generated::Kb),
        GenKind::PluralityWeighted => {
            let m = draw_usize(&mut rng, params.m);
            let n = draw_usize(&mut rng, params.n).max(1);
            let preferred = rng.index(m);
            let voters = (0..n)
                .map(|_| PluralityVoter {
                    weight: rng.range(params.weight.0, params.weight.1),
                    vote: rng.index(m),
                    price: rng.range(params.price.0, params.price.1),
                })
                .collect();
            Ok(Generated::PluralityWeighted(WeightedPluralityInstance {
                candidates: CandidateSet::numbered(m),
                preferred,
                voters,
                budget: None,
            }))
        }
        GenKind::ApprovalPrime => {
            let m = draw_usize(&mut rng, params.m);
            let n = draw_usize(&mut rng, params.n).max(1);
            let preferred = rng.index(m);
            let voters = (0..n)
                .map(|_| ApprovalVoter {
                    weight: rng.range(params.weight.0, params.weight.1),
                    approvals: (0..m).map(|_| rng.coin()).collect(),
                    flip_prices: (0..m)
                        .map(|_| rng.range(params.price.0, params.price.1))
                        .collect(),
                })
                .collect();
            Ok(Generated::ApprovalPrime(ApprovalPrimeInstance {
                candidates: CandidateSet::numbered(m),
                preferred,
                voters,
                budget: None,
            }))
        }
        GenKind::Negative | GenKind::Weighted11 => {
            let m = draw_usize(&mut rng, params.m);
            let n = draw_usize(&mut rng, params.n).max(1);
            let preferred = rng.index(m);
            let mut voters = Vec::with_capacity(n);
            let mut prices = Vec::with_capacity(n);
            for _ in 0..n {
                voters.push(WeightedVote {
                    weight: rng.range(params.weight.0, params.weight.1),
                    vote: rng.index(m),
                });
                if params.kind == GenKind::Weighted11 {
                    prices.push(random_table(&mut rng, m, params.price));
                }
            }
            let candidates = CandidateSet::numbered(m);
            if params.kind == GenKind::Negative {
                let budget = rng.range(0, n as u64);
                Ok(Generated::Negative(NegativeBriberyInstance {
                    candidates,
                    preferred,
                    voters,
                    budget,
                }))
            } else {
                let budget = rng.range(0, n as u64 * params.price.1);
                Ok(Generated::Weighted11(Weighted11Instance {
                    candidates,
                    preferred,
                    voters,
                    prices,
                    budget,
                }))
            }
        }
    }
}

fn gen_kb(params: &GenParams, rule: RuleKind, rng: &mut SplitMix64) -> Result<KbInstance, GenError> {
    let impossible = |msg: String| Err(GenError::Impossible(msg));
    let in_k = |k: u64| params.k.0 <= k && k <= params.k.1;
    let (m, k, b, free_form) = match rule {
        RuleKind::Plurality => (draw_usize(rng, params.m), 1, 1, false),
        RuleKind::Veto => {
            let lo = params.m.0.max(2);
            let hi = params.m.1.min(params.k.1 as usize + 1);
            if lo > hi {
                return impossible("veto needs 2 <= m <= k_max + 1".into());
            }
            let m = draw_usize(rng, (lo, hi));
            (m, m as u64 - 1, 1, false)
        }
        RuleKind::Approval => {
            let hi = params.m.1.min(params.k.1 as usize);
            if params.m.0 > hi {
                return impossible("approval needs m <= k_max".into());
            }
            let m = draw_usize(rng, (params.m.0, hi));
            (m, m as u64, 1, true)
        }
        RuleKind::TApproval(t) => {
            let lo = params.m.0.max(t as usize);
            if t == 0 || !in_k(t) || lo > params.m.1 {
                return impossible(format!("{t}-approval needs t in the k range and m >= t"));
            }
            (draw_usize(rng, (lo, params.m.1)), t, 1, false)
        }
        RuleKind::Utility => {
            let m = draw_usize(rng, params.m);
            let b = rng.range(params.b.0, params.b.1);
            let hi = if params.free_form {
                params.k.1
            } else {
                params.k.1.min(m as u64 * b)
            };
            if params.k.0 > hi {
                return impossible(format!("k >= {} cannot fit m = {m}, b = {b}", params.k.0));
            }
            (m, rng.range(params.k.0, hi), b, params.free_form)
        }
    };
    let n = draw_usize(rng, params.n);
    let preferred = rng.index(m);
    let slots = m + usize::from(free_form);
    let mut raw = Vec::with_capacity(n);
    let mut prices = Vec::with_capacity(n);
    for _ in 0..n {
        raw.push(match rule {
            RuleKind::Plurality | RuleKind::Veto => {
                let mut order: Vec<usize> = (0..m).collect();
                rng.shuffle(&mut order);
                RawBallot::Ranking(order)
            }
            RuleKind::Approval => RawBallot::Approvals((0..m).filter(|_| rng.coin()).collect()),
            RuleKind::TApproval(t) => {
                let mut order: Vec<usize> = (0..m).collect();
                rng.shuffle(&mut order);
                order.truncate(t as usize);
                order.sort_unstable();
                RawBallot::Approvals(order)
            }
            RuleKind::Utility => {
                let assigned = if free_form {
                    rng.range(0, k.min(m as u64 * b))
                } else {
                    k
                };
                RawBallot::Points {
                    points: scatter(rng, m, assigned, b),
                    unassigned: k - assigned,
                }
            }
        });
        prices.push(random_table(rng, slots, params.price));
    }
    let encoded = match rule {
        RuleKind::Plurality => Rule::Plurality,
        RuleKind::Veto => Rule::Veto,
        RuleKind::Approval => Rule::Approval,
        RuleKind::TApproval(t) => Rule::TApproval(t),
        RuleKind::Utility => Rule::Utility { k, b, free_form },
    };
    let election = encode_rule(CandidateSet::numbered(m), encoded, &raw)
        .map_err(|e| GenError::Impossible(e.to_string()))?;
    KbInstance::new(election, preferred, prices, None).map_err(|e| GenError::Impossible(e.to_string()))
}

// ---------------------------------------------------------------------------
// (k,b) oracle

/// Every post-bribery point vector one voter can reach, with the cheapest
/// set of moves reaching it. Moves obey the parallel rule: at most the
/// original points of a slot leave it, and a point that arrives is never
/// moved again. Chains such as `h -> i` together with `i -> j` are allowed.
fn reachable_ballots(
    instance: &KbInstance,
    voter: usize,
) -> BTreeMap<Vec<u64>, (u64, Vec<Move>)> {
    let e = &instance.election;
    let m = e.m();
    let slots = m + usize::from(e.free_form);
    let ballot = &e.ballots[voter];
    let original: Vec<u64> = (0..slots)
        .map(|s| if s < m { ballot.points[s] } else { ballot.unassigned })
        .collect();
    let table = &instance.prices[voter];

    // destinations[s][d]: how many of slot s's original points end in d.
    let mut out = BTreeMap::new();
    let mut destinations = vec![vec![0u64; slots]; slots];
    fn walk(
        slot: usize,
        dest: usize,
        left: u64,
        original: &[u64],
        destinations: &mut Vec<Vec<u64>>,
        visit: &mut dyn FnMut(&[Vec<u64>]),
    ) {
        let slots = original.len();
        if slot == slots {
            visit(destinations);
            return;
        }
        if dest == slots - 1 {
            destinations[slot][dest] = left;
            let next_left = original.get(slot + 1).copied().unwrap_or(0);
            walk(slot + 1, 0, next_left, original, destinations, visit);
            destinations[slot][dest] = 0;
            return;
        }
        for x in 0..=left {
            destinations[slot][dest] = x;
            walk(slot, dest + 1, left - x, original, destinations, visit);
        }
        destinations[slot][dest] = 0;
    }
    let mut visit = |d: &[Vec<u64>]| {
        let mut after = vec![0u64; slots];
        let mut cost = 0u64;
        let mut moves = Vec::new();
        for (from, row) in d.iter().enumerate() {
            for (to, &x) in row.iter().enumerate() {
                after[to] += x;
                if from != to && x > 0 {
                    cost += x * table.get(from, to);
                    moves.push(Move {
                        voter,
                        from: Slot::from_index(from, m),
                        to: Slot::from_index(to, m),
                        count: x,
                    });
                }
            }
        }
        if after[..m].iter().any(|&p| p > e.b) {
            return;
        }
        let entry = out.entry(after).or_insert((u64::MAX, Vec::new()));
        if cost < entry.0 {
            *entry = (cost, moves);
        }
    };
    walk(0, 0, original[0], &original, &mut destinations, &mut visit);
    out
}

/// Exhaustive minimum-cost (k,b)-bribery. Caps: `m <= 5`, `n <= 8`,
/// `k <= 4`, `b <= 3`.
pub fn brute_kb(instance: &KbInstance) -> Result<(u64, BriberyPlan), OracleError> {
    instance
        .validate()
        .map_err(|e| OracleError::Invalid(e.to_string()))?;
    let e = &instance.election;
    if e.m() > 5 || e.n() > 8 || e.k > 4 || e.b > 3 {
        return Err(OracleError::CapExceeded(
            "brute_kb needs m <= 5, n <= 8, k <= 4, b <= 3".into(),
        ));
    }
    let m = e.m();
    // score vector -> (cost, chosen post-ballot per voter)
    let mut frontier: BTreeMap<Vec<u64>, (u64, Vec<Vec<u64>>)> = BTreeMap::new();
    frontier.insert(vec![0; m], (0, Vec::new()));
    let options: Vec<_> = (0..e.n()).map(|v| reachable_ballots(instance, v)).collect();
    for opts in &options {
        let mut next: BTreeMap<Vec<u64>, (u64, Vec<Vec<u64>>)> = BTreeMap::new();
        for (scores, (cost, picks)) in &frontier {
            for (after, (extra, _)) in opts {
                let s: Vec<u64> = scores.iter().zip(after).map(|(a, b)| a + b).collect();
                let c = cost + extra;
                if next.get(&s).is_none_or(|(best, _)| c < *best) {
                    let mut p = picks.clone();
                    p.push(after.clone());
                    next.insert(s, (c, p));
                }
            }
        }
        frontier = next;
    }
    let mut best: Option<(u64, &Vec<Vec<u64>>)> = None;
    for (scores, (cost, picks)) in &frontier {
        let post = Election {
            ballots: scores_to_ballot(scores),
            weights: vec![1],
            ..e.clone()
        };
        let won = tally(&post)
            .map(|t| winners(&t).contains(&instance.preferred))
            .unwrap_or(false);
        if won && best.is_none_or(|(c, _)| *cost < c) {
            best = Some((*cost, picks));
        }
    }
    let (cost, picks) = best.ok_or_else(|| OracleError::Invalid("no valid bribery".into()))?;
    let mut moves: Vec<Move> = picks
        .iter()
        .enumerate()
        .flat_map(|(v, after)| options[v][after].1.clone())
        .collect();
    moves.sort();
    Ok((
        cost,
        BriberyPlan {
            moves,
            total_price: cost,
        },
    ))
}

/// A pseudo-ballot carrying a whole score vector, so [`tally`] and
/// [`winners`] can decide the winner set.
fn scores_to_ballot(scores: &[u64]) -> Vec<Ballot> {
    vec![Ballot::new(scores.to_vec())]
}

// ---------------------------------------------------------------------------
// Weighted oracles

fn cowinner(scores: &[u64], p: usize) -> bool {
    scores.iter().all(|&s| s <= scores[p])
}

/// Exhaustive weighted plurality bribery. With `arbitrary_revotes` every
/// bribed voter may move to any candidate (`n <= 8`); otherwise bribed
/// voters revote for `p` (`n <= 12`). Returns the cost and the
/// `(voter, new vote)` pairs.
pub fn brute_weighted_plurality(
    instance: &WeightedPluralityInstance,
    arbitrary_revotes: bool,
) -> Result<(u64, Vec<(usize, usize)>), OracleError> {
    instance
        .validate()
        .map_err(|e| OracleError::Invalid(e.to_string()))?;
    let n = instance.voters.len();
    let m = instance.candidates.len();
    let p = instance.preferred;
    let cap = if arbitrary_revotes { 8 } else { 12 };
    if n > cap {
        return Err(OracleError::CapExceeded(format!("needs n <= {cap}")));
    }
    let choices = if arbitrary_revotes { m } else { 2 };
    // choice 0 keeps the vote; otherwise revote to p, or (arbitrary mode)
    // to the choice-th candidate after the current one.
    let target = |voter: usize, choice: usize| -> usize {
        let vote = instance.voters[voter].vote;
        match (choice, arbitrary_revotes) {
            (0, _) => vote,
            (_, false) => p,
            (c, true) => (vote + c) % m,
        }
    };
    let mut digits = vec![0usize; n];
    let mut best: Option<(u64, Vec<(usize, usize)>)> = None;
    loop {
        let mut scores = vec![0u64; m];
        let mut cost = 0u64;
        for (i, v) in instance.voters.iter().enumerate() {
            scores[target(i, digits[i])] += v.weight;
            if digits[i] != 0 {
                cost += v.price;
            }
        }
        if cowinner(&scores, p) && best.as_ref().is_none_or(|(c, _)| cost < *c) {
            let revotes = (0..n)
                .filter(|&i| digits[i] != 0)
                .map(|i| (i, target(i, digits[i])))
                .collect();
            best = Some((cost, revotes));
        }
        if !odometer(&mut digits, choices) {
            break;
        }
    }
    best.ok_or_else(|| OracleError::Invalid("no winning bribery".into()))
}

/// Advances a base-`base` counter; false once it wraps around.
fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Exhaustive approval' bribery over subsets of useful flips (approve `p`,
/// disapprove a rival), at most 20 of them. Returns cost and flips.
pub fn brute_approval_prime(
    instance: &ApprovalPrimeInstance,
) -> Result<(u64, Vec<(usize, usize)>), OracleError> {
    instance
        .validate()
        .map_err(|e| OracleError::Invalid(e.to_string()))?;
    let p = instance.preferred;
    let m = instance.candidates.len();
    let mut flips = Vec::new();
    for (i, v) in instance.voters.iter().enumerate() {
        for c in 0..m {
            if (c == p) != v.approvals[c] {
                flips.push((i, c));
            }
        }
    }
    if flips.len() > 20 {
        return Err(OracleError::CapExceeded("more than 20 useful flips".into()));
    }
    let mut scores = vec![0i128; m];
    for v in &instance.voters {
        for (score, &approved) in scores.iter_mut().zip(&v.approvals) {
            if approved {
                *score += i128::from(v.weight);
            }
        }
    }
    // Gray-code walk: consecutive subsets differ in one flip.
    let mut cost = 0i128;
    let mut in_set = vec![false; flips.len()];
    let wins = |s: &[i128]| s.iter().all(|&x| x <= s[p]);
    let mut best = if wins(&scores) { Some((0i128, 0u64)) } else { None };
    for step in 1u64..(1u64 << flips.len()) {
        let bit = step.trailing_zeros() as usize;
        let (voter, c) = flips[bit];
        let w = i128::from(instance.voters[voter].weight);
        let price = i128::from(instance.voters[voter].flip_prices[c]);
        let sign = if in_set[bit] { -1 } else { 1 };
        in_set[bit] = !in_set[bit];
        cost += sign * price;
        scores[c] += if c == p { sign * w } else { -sign * w };
        if wins(&scores) && best.is_none_or(|(b, _)| cost < b) {
            best = Some((cost, step ^ (step >> 1)));
        }
    }
    let (cost, mask) = best.ok_or_else(|| OracleError::Invalid("no winning bribery".into()))?;
    let chosen = (0..flips.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| flips[i])
        .collect();
    Ok((cost as u64, chosen))
}

fn check_small(m: usize, n: usize) -> Result<(), OracleError> {
    if n > 6 || m > 4 {
        return Err(OracleError::CapExceeded("needs n <= 6 and m <= 4".into()));
    }
    Ok(())
}

/// `(cost, (voter, new vote) list)` of the cheapest bribery found so far.
pub type Witness = (u64, Vec<(usize, usize)>);

/// Negative bribery by exhaustion: re-point voters, never to `p`. Returns
/// the bribery touching the fewest voters, provided that number is within
/// the budget; `None` means no.
pub fn brute_negative(instance: &NegativeBriberyInstance) -> Result<Option<Witness>, OracleError> {
    instance
        .validate()
        .map_err(|e| OracleError::Invalid(e.to_string()))?;
    let (m, n, p) = (instance.candidates.len(), instance.voters.len(), instance.preferred);
    check_small(m, n)?;
    // choice 0 keeps the vote, choice c >= 1 re-points to the c-th non-p
    // candidate.
    let rivals: Vec<usize> = (0..m).filter(|&c| c != p).collect();
    let mut digits = vec![0usize; n];
    let mut best: Option<Witness> = None;
    loop {
        let bribed = digits.iter().filter(|&&d| d != 0).count() as u64;
        if best.as_ref().is_none_or(|(c, _)| bribed < *c) {
            let mut scores = vec![0u64; m];
            for (v, &d) in instance.voters.iter().zip(&digits) {
                let target = if d == 0 { v.vote } else { rivals[d - 1] };
                scores[target] += v.weight;
            }
            if cowinner(&scores, p) {
                let moves = (0..n)
                    .filter(|&i| digits[i] != 0)
                    .map(|i| (i, rivals[digits[i] - 1]))
                    .collect();
                best = Some((bribed, moves));
            }
        }
        if !odometer(&mut digits, rivals.len() + 1) {
            break;
        }
    }
    Ok(best.filter(|(cost, _)| *cost <= instance.budget))
}

/// (1,1)-weighted-bribery by exhaustion over every voter's new vote.
/// Returns the cheapest bribery if its price is within the budget.
pub fn brute_11_weighted(instance: &Weighted11Instance) -> Result<Option<Witness>, OracleError> {
    instance
        .validate()
        .map_err(|e| OracleError::Invalid(e.to_string()))?;
    let (m, n, p) = (instance.candidates.len(), instance.voters.len(), instance.preferred);
    check_small(m, n)?;
    let mut targets = vec![0usize; n];
    let mut best: Option<(u128, Vec<(usize, usize)>)> = None;
    loop {
        let mut scores = vec![0u64; m];
        let mut cost: u128 = 0;
        for (i, v) in instance.voters.iter().enumerate() {
            scores[targets[i]] += v.weight;
            cost += u128::from(instance.prices[i].get(v.vote, targets[i]));
        }
        if best.as_ref().is_none_or(|(c, _)| cost < *c) && cowinner(&scores, p) {
            let moves = (0..n)
                .filter(|&i| targets[i] != instance.voters[i].vote)
                .map(|i| (i, targets[i]))
                .collect();
            best = Some((cost, moves));
        }
        if !odometer(&mut targets, m) {
            break;
        }
    }
    Ok(best
        .filter(|(cost, _)| *cost <= u128::from(instance.budget))
        .map(|(cost, moves)| (cost as u64, moves)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kb(points: Vec<Vec<u64>>, k: u64, b: u64, tables: Vec<PriceTable>) -> KbInstance {
        let m = points[0].len();
        let e = Election::new(
            CandidateSet::numbered(m),
            k,
            b,
            false,
            points.into_iter().map(Ballot::new).collect(),
        )
        .unwrap();
        KbInstance::new(e, 0, tables, None).unwrap()
    }

    #[test]
    fn splitmix_reference_values() {
        // Published SplitMix64 outputs for seed 0.
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn brute_kb_examples() {
        let t = |price| PriceTable::from_rows(vec![vec![0, 7], vec![price, 0]]).unwrap();
        let inst = kb(
            vec![vec![0, 1], vec![0, 1], vec![1, 0]],
            1,
            1,
            vec![t(3), t(5), t(4)],
        );
        let (cost, plan) = brute_kb(&inst).unwrap();
        assert_eq!(cost, 3);
        assert_eq!(plan.moves.len(), 1);

        let winning = kb(vec![vec![1, 0]], 1, 1, vec![t(4)]);
        assert_eq!(brute_kb(&winning).unwrap().0, 0);

        let single = kb(vec![vec![0, 1]], 1, 1, vec![t(4)]);
        assert_eq!(brute_kb(&single).unwrap().0, 4);
    }

    #[test]
    fn brute_kb_uses_chained_moves() {
        // Candidates (p, h, i, j). Voter 1 is too expensive to touch and
        // holds (h, j); voter 0 must end at (p, i). Moving h -> p directly
        // costs 10, while h -> i together with i -> p costs 2.
        let mut table = PriceTable::uniform(4, 10);
        table.set(1, 2, 1).unwrap();
        table.set(2, 0, 1).unwrap();
        let inst = kb(
            vec![vec![0, 1, 1, 0], vec![0, 1, 0, 1]],
            2,
            1,
            vec![table, PriceTable::uniform(4, 50)],
        );
        let (cost, plan) = brute_kb(&inst).unwrap();
        assert_eq!(cost, 2);
        assert_eq!(plan.moves.len(), 2);
    }

    #[test]
    fn brute_kb_caps() {
        let e = Election::new(
            CandidateSet::numbered(2),
            1,
            1,
            false,
            vec![Ballot::new(vec![1, 0]); 9],
        )
        .unwrap();
        let inst = KbInstance::new(e, 0, vec![PriceTable::zeros(2); 9], None).unwrap();
        assert!(matches!(brute_kb(&inst), Err(OracleError::CapExceeded(_))));
    }

    #[test]
    fn brute_plurality_examples() {
        let v = |weight, vote, price| PluralityVoter {
            weight,
            vote,
            price,
        };
        let inst = WeightedPluralityInstance {
            candidates: CandidateSet::numbered(2),
            preferred: 0,
            voters: vec![v(4, 1, 10), v(2, 1, 2), v(1, 0, 99)],
            budget: None,
        };
        assert_eq!(brute_weighted_plurality(&inst, false).unwrap().0, 10);
        assert_eq!(brute_weighted_plurality(&inst, true).unwrap().0, 10);

        let all_p = WeightedPluralityInstance {
            voters: vec![v(1, 0, 3), v(2, 0, 3)],
            ..inst.clone()
        };
        assert_eq!(brute_weighted_plurality(&all_p, true).unwrap().0, 0);

        let lone = WeightedPluralityInstance {
            voters: vec![v(1, 1, 3)],
            ..inst
        };
        assert_eq!(brute_weighted_plurality(&lone, false).unwrap(), (3, vec![(0, 0)]));
    }

    #[test]
    fn brute_approval_examples() {
        let inst = ApprovalPrimeInstance {
            candidates: CandidateSet::numbered(2),
            preferred: 0,
            voters: vec![
                ApprovalVoter {
                    weight: 3,
                    approvals: vec![false, true],
                    flip_prices: vec![4, 1],
                },
                ApprovalVoter {
                    weight: 2,
                    approvals: vec![true, false],
                    flip_prices: vec![5, 5],
                },
            ],
            budget: None,
        };
        assert_eq!(brute_approval_prime(&inst).unwrap(), (1, vec![(0, 1)]));
        let empty = ApprovalPrimeInstance {
            voters: vec![ApprovalVoter {
                weight: 1,
                approvals: vec![false, false],
                flip_prices: vec![7, 0],
            }],
            ..inst
        };
        assert_eq!(brute_approval_prime(&empty).unwrap(), (0, vec![]));
    }

    #[test]
    fn brute_negative_examples() {
        let c = CandidateSet::new(["p", "a", "b"]).unwrap();
        let wv = |weight, vote| WeightedVote { weight, vote };
        let inst = NegativeBriberyInstance {
            candidates: c.clone(),
            preferred: 0,
            voters: vec![wv(1, 1), wv(1, 1), wv(1, 0)],
            budget: 1,
        };
        assert_eq!(brute_negative(&inst).unwrap(), Some((1, vec![(0, 2)])));

        let winning = NegativeBriberyInstance {
            voters: vec![wv(2, 0), wv(1, 1)],
            budget: 0,
            ..inst.clone()
        };
        assert_eq!(brute_negative(&winning).unwrap(), Some((0, vec![])));

        let hopeless = NegativeBriberyInstance {
            voters: vec![wv(5, 1)],
            budget: 0,
            ..inst
        };
        assert_eq!(brute_negative(&hopeless).unwrap(), None);
    }

    #[test]
    fn brute_11_examples() {
        let c = CandidateSet::new(["p", "a", "b"]).unwrap();
        let wv = |weight, vote| WeightedVote { weight, vote };
        let neg = NegativeBriberyInstance {
            candidates: c.clone(),
            preferred: 0,
            voters: vec![wv(1, 1), wv(1, 1), wv(1, 0)],
            budget: 1,
        };
        let reduced = crate::weighted::reduce_negative_bribery(&neg).unwrap();
        assert!(brute_11_weighted(&reduced).unwrap().is_some());

        let rich = Weighted11Instance {
            candidates: c.clone(),
            preferred: 0,
            voters: vec![wv(3, 1), wv(1, 2)],
            prices: vec![PriceTable::uniform(3, 4); 2],
            budget: 8,
        };
        // Cheapest: voter 0 moves a -> p for 4.
        assert_eq!(brute_11_weighted(&rich).unwrap(), Some((4, vec![(0, 0)])));

        let broke = Weighted11Instance { budget: 0, ..rich };
        assert_eq!(brute_11_weighted(&broke).unwrap(), None);
    }

    #[test]
    fn generator_is_deterministic() {
        let p = GenParams::new(42, GenKind::Kb(RuleKind::Utility));
        assert_eq!(gen_random(&p).unwrap(), gen_random(&p).unwrap());
    }

    #[test]
    fn neighbouring_seeds_differ() {
        let mut same = 0;
        for seed in 0..100 {
            let a = gen_random(&GenParams::new(seed, GenKind::Kb(RuleKind::Utility))).unwrap();
            let b = gen_random(&GenParams::new(seed + 1, GenKind::Kb(RuleKind::Utility))).unwrap();
            same += usize::from(a == b);
        }
        assert_eq!(same, 0);
    }

    #[test]
    fn impossible_parameters() {
        let mut p = GenParams::new(1, GenKind::Kb(RuleKind::Utility));
        p.k = (3, 3);
        p.m = (1, 1);
        p.b = (1, 1);
        assert!(matches!(gen_random(&p), Err(GenError::Impossible(_))));
        p.free_form = true;
        assert!(gen_random(&p).is_ok());

        let mut big = GenParams::new(1, GenKind::Kb(RuleKind::Utility));
        big.n = (1, 20);
        assert!(matches!(gen_random(&big), Err(GenError::CapExceeded(_))));
    }

    #[test]
    fn generated_instances_validate() {
        let kinds = [
            GenKind::Kb(RuleKind::Plurality),
            GenKind::Kb(RuleKind::Veto),
            GenKind::Kb(RuleKind::Approval),
            GenKind::Kb(RuleKind::TApproval(3)),
            GenKind::Kb(RuleKind::Utility),
            GenKind::PluralityWeighted,
            GenKind::ApprovalPrime,
            GenKind::Negative,
            GenKind::Weighted11,
        ];
        for kind in kinds {
            for seed in 0..30 {
                let mut p = GenParams::new(seed, kind);
                if kind == GenKind::Kb(RuleKind::TApproval(3)) {
                    p.m = (3, 4);
                }
                p.free_form = seed % 2 == 0;
                match gen_random(&p).unwrap() {
                    Generated::Kb(i) => i.validate().unwrap(),
                    Generated::PluralityWeighted(i) => i.validate().unwrap(),
                    Generated::ApprovalPrime(i) => i.validate().unwrap(),
                    Generated::Negative(i) => i.validate().unwrap(),
                    Generated::Weighted11(i) => i.validate().unwrap(),
                }
            }
        }
    }
}
