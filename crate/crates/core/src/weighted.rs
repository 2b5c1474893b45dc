//! Weighted priced bribery.
//!
//! Two problems are solved here:
//!
//! * plurality-weighted-$bribery: weighted plurality voters, one price per
//!   voter for any revote;
//! * approval-weighted-$bribery': weighted approval voters with a separate
//!   price for flipping each approval bit.
//!
//! Both have exact solvers (branch and bound over the moves that can matter)
//! and a price-scaling FPTAS ([`fptas`]) that is generic over any exact
//! solver. [`reduce_negative_bribery`] maps plurality-weighted negative
//! bribery onto (1,1)-weighted-bribery.

use std::fmt;
use std::str::FromStr;

use crate::election::CandidateSet;
use crate::error::{checked_add, checked_mul, checked_sum, narrow, Overflow};
use crate::kb::PriceTable;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightedError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid epsilon: {0}")]
    InvalidEpsilon(String),
    #[error("invalid solution: {0}")]
    InvalidSolution(String),
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Approximation parameter `num/den`, strictly between 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Eps {
    num: u64,
    den: u64,
}

impl Eps {
    pub fn new(num: u64, den: u64) -> Result<Self, WeightedError> {
        if num == 0 || den == 0 || num >= den {
            return Err(WeightedError::InvalidEpsilon(format!(
                "{num}/{den} is not strictly between 0 and 1"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    /// `eps / 2`.
    pub fn halved(self) -> Result<Self, WeightedError> {
        Self::new(self.num, checked_mul(self.den, 2)?)
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Eps {
    type Err = WeightedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WeightedError::InvalidEpsilon(format!("expected N/D, got {s:?}"));
        let (num, den) = s.split_once('/').ok_or_else(bad)?;
        let num = num.trim().parse().map_err(|_| bad())?;
        let den = den.trim().parse().map_err(|_| bad())?;
        Self::new(num, den)
    }
}

fn check_candidate(
    candidates: &CandidateSet,
    index: usize,
    what: &str,
) -> Result<(), WeightedError> {
    if index >= candidates.len() {
        return Err(WeightedError::InvalidInstance(format!(
            "{what} {index} out of range for {} candidates",
            candidates.len()
        )));
    }
    Ok(())
}

fn check_weight(voter: usize, weight: u64) -> Result<(), WeightedError> {
    if weight == 0 {
        return Err(WeightedError::InvalidInstance(format!(
            "voter {voter}: weight must be positive"
        )));
    }
    Ok(())
}

fn plurality_scores<'a>(
    m: usize,
    votes: impl Iterator<Item = (usize, u64)> + 'a,
) -> Result<Vec<u64>, Overflow> {
    let mut scores = vec![0u64; m];
    for (vote, weight) in votes {
        scores[vote] = checked_add(scores[vote], weight)?;
    }
    Ok(scores)
}

fn is_cowinner(scores: &[u64], candidate: usize) -> bool {
    scores.iter().all(|&s| s <= scores[candidate])
}

// ---------------------------------------------------------------------------
// Plurality

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PluralityVoter {
    pub weight: u64,
    pub vote: usize,
    pub price: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedPluralityInstance {
    pub candidates: CandidateSet,
    pub preferred: usize,
    pub voters: Vec<PluralityVoter>,
    pub budget: Option<u64>,
}

/// Voters bribed to vote for the preferred candidate, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PluralityBribery {
    pub bribed: Vec<usize>,
}

impl WeightedPluralityInstance {
    pub fn validate(&self) -> Result<(), WeightedError> {
        if self.voters.is_empty() {
            return Err(WeightedError::InvalidInstance("at least one voter required".into()));
        }
        check_candidate(&self.candidates, self.preferred, "preferred candidate")?;
        for (i, v) in self.voters.iter().enumerate() {
            check_weight(i, v.weight)?;
            check_candidate(&self.candidates, v.vote, "vote")?;
        }
        self.scores()?;
        checked_sum(self.voters.iter().map(|v| v.price))?;
        Ok(())
    }

    pub fn scores(&self) -> Result<Vec<u64>, Overflow> {
        plurality_scores(
            self.candidates.len(),
            self.voters.iter().map(|v| (v.vote, v.weight)),
        )
    }

    fn check_solution(&self, s: &PluralityBribery) -> Result<(), WeightedError> {
        let mut seen = vec![false; self.voters.len()];
        for &v in &s.bribed {
            if v >= self.voters.len() || std::mem::replace(&mut seen[v], true) {
                return Err(WeightedError::InvalidSolution(format!(
                    "voter {v} out of range or listed twice"
                )));
            }
        }
        Ok(())
    }

    /// Scores after every bribed voter revotes for the preferred candidate.
    pub fn post_scores(&self, s: &PluralityBribery) -> Result<Vec<u64>, WeightedError> {
        self.check_solution(s)?;
        let mut votes: Vec<usize> = self.voters.iter().map(|v| v.vote).collect();
        for &v in &s.bribed {
            votes[v] = self.preferred;
        }
        Ok(plurality_scores(
            self.candidates.len(),
            votes.into_iter().zip(self.voters.iter().map(|v| v.weight)),
        )?)
    }
}

// ---------------------------------------------------------------------------
// Approval'

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ApprovalVoter {
    pub weight: u64,
    pub approvals: Vec<bool>,
    pub flip_prices: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ApprovalPrimeInstance {
    pub candidates: CandidateSet,
    pub preferred: usize,
    pub voters: Vec<ApprovalVoter>,
    pub budget: Option<u64>,
}

/// Flipped `(voter, candidate)` approval bits, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ApprovalFlips {
    pub flips: Vec<(usize, usize)>,
}

impl ApprovalPrimeInstance {
    pub fn validate(&self) -> Result<(), WeightedError> {
        check_candidate(&self.candidates, self.preferred, "preferred candidate")?;
        let m = self.candidates.len();
        for (i, v) in self.voters.iter().enumerate() {
            check_weight(i, v.weight)?;
            if v.approvals.len() != m || v.flip_prices.len() != m {
                return Err(WeightedError::InvalidInstance(format!(
                    "voter {i}: approval and price vectors must have {m} entries"
                )));
            }
        }
        self.scores()?;
        checked_sum(self.voters.iter().flat_map(|v| v.flip_prices.iter().copied()))?;
        Ok(())
    }

    fn scores_with(&self, approves: impl Fn(usize, usize) -> bool) -> Result<Vec<u64>, Overflow> {
        let mut scores = vec![0u64; self.candidates.len()];
        for (i, v) in self.voters.iter().enumerate() {
            for (c, score) in scores.iter_mut().enumerate() {
                if approves(i, c) {
                    *score = checked_add(*score, v.weight)?;
                }
            }
        }
        Ok(scores)
    }

    pub fn scores(&self) -> Result<Vec<u64>, Overflow> {
        self.scores_with(|i, c| self.voters[i].approvals[c])
    }

    fn check_solution(&self, s: &ApprovalFlips) -> Result<(), WeightedError> {
        let mut seen = std::collections::HashSet::new();
        for &(v, c) in &s.flips {
            if v >= self.voters.len() || c >= self.candidates.len() || !seen.insert((v, c)) {
                return Err(WeightedError::InvalidSolution(format!(
                    "flip ({v}, {c}) out of range or listed twice"
                )));
            }
        }
        Ok(())
    }

    pub fn post_scores(&self, s: &ApprovalFlips) -> Result<Vec<u64>, WeightedError> {
        self.check_solution(s)?;
        let flipped: std::collections::HashSet<_> = s.flips.iter().copied().collect();
        Ok(self.scores_with(|i, c| self.voters[i].approvals[c] != flipped.contains(&(i, c)))?)
    }
}

// ---------------------------------------------------------------------------
// Common pricing interface used by the FPTAS.

/// A weighted bribery problem whose prices can be rescaled.
pub trait PricedInstance: Clone {
    type Solution: Clone + fmt::Debug + PartialEq;

    /// Number of prices occurring in the instance.
    fn price_count(&self) -> u64;

    fn max_price(&self) -> u64;

    /// Copy of the instance with every price passed through `f`.
    fn map_prices(&self, f: &dyn Fn(u64) -> u64) -> Self;

    fn solution_cost(&self, solution: &Self::Solution) -> Result<u64, WeightedError>;

    /// Whether the preferred candidate is a co-winner after `solution`.
    fn makes_winner(&self, solution: &Self::Solution) -> Result<bool, WeightedError>;
}

impl PricedInstance for WeightedPluralityInstance {
    type Solution = PluralityBribery;

    fn price_count(&self) -> u64 {
        self.voters.len() as u64
    }

    fn max_price(&self) -> u64 {
        self.voters.iter().map(|v| v.price).max().unwrap_or(0)
    }

    fn map_prices(&self, f: &dyn Fn(u64) -> u64) -> Self {
        let mut out = self.clone();
        for v in &mut out.voters {
            v.price = f(v.price);
        }
        out
    }

    fn solution_cost(&self, s: &PluralityBribery) -> Result<u64, WeightedError> {
        self.check_solution(s)?;
        Ok(checked_sum(s.bribed.iter().map(|&v| self.voters[v].price))?)
    }

    fn makes_winner(&self, s: &PluralityBribery) -> Result<bool, WeightedError> {
        Ok(is_cowinner(&self.post_scores(s)?, self.preferred))
    }
}

impl PricedInstance for ApprovalPrimeInstance {
    type Solution = ApprovalFlips;

    fn price_count(&self) -> u64 {
        (self.voters.len() * self.candidates.len()) as u64
    }

    fn max_price(&self) -> u64 {
        self.voters
            .iter()
            .flat_map(|v| v.flip_prices.iter().copied())
            .max()
            .unwrap_or(0)
    }

    fn map_prices(&self, f: &dyn Fn(u64) -> u64) -> Self {
        let mut out = self.clone();
        for v in &mut out.voters {
            v.flip_prices.iter_mut().for_each(|p| *p = f(*p));
        }
        out
    }

    fn solution_cost(&self, s: &ApprovalFlips) -> Result<u64, WeightedError> {
        self.check_solution(s)?;
        Ok(checked_sum(
            s.flips.iter().map(|&(v, c)| self.voters[v].flip_prices[c]),
        )?)
    }

    fn makes_winner(&self, s: &ApprovalFlips) -> Result<bool, WeightedError> {
        Ok(is_cowinner(&self.post_scores(s)?, self.preferred))
    }
}

// ---------------------------------------------------------------------------
// Exact solvers

/// A move that can only help the preferred candidate: it adds `weight` to
/// `p`, removes `weight` from one rival, or both.
#[derive(Debug, Clone, Copy)]
struct Lever {
    cost: u64,
    weight: u64,
    lifts_preferred: bool,
    lowers: Option<usize>,
}

impl Lever {
    fn effect_on(&self, rival: usize) -> u128 {
        let w = u128::from(self.weight);
        let lift = if self.lifts_preferred { w } else { 0 };
        let lower = if self.lowers == Some(rival) { w } else { 0 };
        lift + lower
    }

    fn best_effect(&self) -> u128 {
        u128::from(self.weight) * (u128::from(self.lifts_preferred) + u128::from(self.lowers.is_some()))
    }
}

/// Depth-first branch and bound over levers. The bound for each rival with a
/// positive deficit is the fractional (ratio-greedy) cost of closing that
/// deficit with the undecided levers; the node bound is the largest of them.
struct Search<'a> {
    levers: &'a [Lever],
    preferred: usize,
    /// Per rival: lever positions with a positive effect on it, cheapest
    /// cost per unit of effect first.
    ratio_order: Vec<Vec<usize>>,
    scores: Vec<i128>,
    chosen: Vec<bool>,
    cost: u128,
    best_cost: u128,
    best: Option<Vec<bool>>,
}

impl<'a> Search<'a> {
    fn new(levers: &'a [Lever], preferred: usize, scores: &[u64]) -> Self {
        let m = scores.len();
        let ratio_order = (0..m)
            .map(|rival| {
                if rival == preferred {
                    return Vec::new();
                }
                let mut order: Vec<usize> = (0..levers.len())
                    .filter(|&i| levers[i].effect_on(rival) > 0)
                    .collect();
                order.sort_by(|&a, &b| {
                    let (la, lb) = (&levers[a], &levers[b]);
                    (u128::from(la.cost) * lb.effect_on(rival))
                        .cmp(&(u128::from(lb.cost) * la.effect_on(rival)))
                        .then(a.cmp(&b))
                });
                order
            })
            .collect();
        let all_cost: u128 = levers.iter().map(|l| u128::from(l.cost)).sum();
        Search {
            levers,
            preferred,
            ratio_order,
            scores: scores.iter().map(|&s| i128::from(s)).collect(),
            chosen: vec![false; levers.len()],
            cost: 0,
            best_cost: all_cost + 1,
            best: None,
        }
    }

    fn deficit(&self, rival: usize) -> i128 {
        self.scores[rival] - self.scores[self.preferred]
    }

    fn won(&self) -> bool {
        (0..self.scores.len()).all(|c| self.deficit(c) <= 0)
    }

    /// `None` when some deficit cannot be closed by the remaining levers.
    fn lower_bound(&self, depth: usize) -> Option<u128> {
        let mut bound = 0;
        for rival in 0..self.scores.len() {
            let deficit = self.deficit(rival);
            if rival == self.preferred || deficit <= 0 {
                continue;
            }
            let mut need = deficit as u128;
            let mut acc = 0u128;
            for &i in &self.ratio_order[rival] {
                if i < depth {
                    continue;
                }
                let lever = &self.levers[i];
                let effect = lever.effect_on(rival);
                if effect >= need {
                    acc += (u128::from(lever.cost) * need).div_ceil(effect);
                    need = 0;
                    break;
                }
                acc += u128::from(lever.cost);
                need -= effect;
            }
            if need > 0 {
                return None;
            }
            bound = bound.max(acc);
        }
        Some(bound)
    }

    fn apply(&mut self, i: usize, sign: i128) {
        let lever = self.levers[i];
        let w = i128::from(lever.weight) * sign;
        if lever.lifts_preferred {
            self.scores[self.preferred] += w;
        }
        if let Some(c) = lever.lowers {
            self.scores[c] -= w;
        }
    }

    fn dfs(&mut self, depth: usize) {
        if self.won() {
            if self.cost < self.best_cost {
                self.best_cost = self.cost;
                self.best = Some(self.chosen.clone());
            }
            return;
        }
        if depth == self.levers.len() {
            return;
        }
        match self.lower_bound(depth) {
            Some(lb) if self.cost + lb < self.best_cost => {}
            _ => return,
        }
        let lever = self.levers[depth];
        // Lowering a rival that is already not ahead can never become useful:
        // later moves only raise p or lower rivals.
        let useful = lever.lifts_preferred || lever.lowers.is_some_and(|c| self.deficit(c) > 0);
        if useful {
            self.apply(depth, 1);
            self.chosen[depth] = true;
            self.cost += u128::from(lever.cost);
            self.dfs(depth + 1);
            self.cost -= u128::from(lever.cost);
            self.chosen[depth] = false;
            self.apply(depth, -1);
        }
        self.dfs(depth + 1);
    }
}

/// Returns the chosen lever indices (in the caller's numbering) and cost.
fn solve_levers(
    levers: &[Lever],
    preferred: usize,
    scores: &[u64],
) -> Result<(Vec<usize>, u64), WeightedError> {
    let mut order: Vec<usize> = (0..levers.len()).collect();
    order.sort_by(|&a, &b| {
        let (la, lb) = (&levers[a], &levers[b]);
        (u128::from(la.cost) * lb.best_effect())
            .cmp(&(u128::from(lb.cost) * la.best_effect()))
            .then(a.cmp(&b))
    });
    let sorted: Vec<Lever> = order.iter().map(|&i| levers[i]).collect();
    let mut search = Search::new(&sorted, preferred, scores);
    search.dfs(0);
    let chosen = search
        .best
        .ok_or_else(|| WeightedError::Internal("no feasible bribery found".into()))?;
    let mut picked: Vec<usize> = chosen
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c)
        .map(|(pos, _)| order[pos])
        .collect();
    picked.sort_unstable();
    Ok((picked, narrow(search.best_cost)?))
}

/// Minimum-price set of voters whose revote to `p` makes `p` a co-winner.
///
/// Bribed voters always revote for `p` and never include `p`'s own
/// supporters; any other choice is dominated.
pub fn solve_plurality_exact(
    instance: &WeightedPluralityInstance,
) -> Result<(PluralityBribery, u64), WeightedError> {
    instance.validate()?;
    let (voter_ids, levers): (Vec<usize>, Vec<Lever>) = instance
        .voters
        .iter()
        .enumerate()
        .filter(|(_, v)| v.vote != instance.preferred)
        .map(|(i, v)| {
            (
                i,
                Lever {
                    cost: v.price,
                    weight: v.weight,
                    lifts_preferred: true,
                    lowers: Some(v.vote),
                },
            )
        })
        .unzip();
    let (picked, cost) = solve_levers(&levers, instance.preferred, &instance.scores()?)?;
    let bribed = picked.into_iter().map(|i| voter_ids[i]).collect();
    Ok((PluralityBribery { bribed }, cost))
}

/// Minimum-price set of approval flips making `p` a co-winner. Only
/// approve-`p` and disapprove-rival flips are considered.
pub fn solve_approval_prime_exact(
    instance: &ApprovalPrimeInstance,
) -> Result<(ApprovalFlips, u64), WeightedError> {
    instance.validate()?;
    let p = instance.preferred;
    let mut flips = Vec::new();
    let mut levers = Vec::new();
    for (i, v) in instance.voters.iter().enumerate() {
        for c in 0..instance.candidates.len() {
            let lever = match (c == p, v.approvals[c]) {
                (true, false) => Lever {
                    cost: v.flip_prices[c],
                    weight: v.weight,
                    lifts_preferred: true,
                    lowers: None,
                },
                (false, true) => Lever {
                    cost: v.flip_prices[c],
                    weight: v.weight,
                    lifts_preferred: false,
                    lowers: Some(c),
                },
                _ => continue,
            };
            flips.push((i, c));
            levers.push(lever);
        }
    }
    let (picked, cost) = solve_levers(&levers, p, &instance.scores()?)?;
    let flips = picked.into_iter().map(|i| flips[i]).collect();
    Ok((ApprovalFlips { flips }, cost))
}

// ---------------------------------------------------------------------------
// FPTAS

/// Replacement for prices above the iteration threshold:
/// `ceil(((1 + 2 eps) / eps) N^2) + 1`.
pub fn big_price(price_count: u64, eps: Eps) -> Result<u64, Overflow> {
    let n2 = u128::from(price_count) * u128::from(price_count);
    let numer = (u128::from(eps.den) + 2 * u128::from(eps.num)) * n2;
    narrow(numer.div_ceil(u128::from(eps.num)) + 1)
}

/// Rounds prices for one FPTAS iteration with threshold `t`: a price
/// `q <= t` becomes `ceil(q / G)` with grain `G = t eps / N`, any larger
/// price becomes [`big_price`].
pub fn scale_prices<I: PricedInstance>(instance: &I, t: u64, eps: Eps) -> Result<I, WeightedError> {
    if t == 0 {
        return Err(WeightedError::InvalidInstance("threshold t must be positive".into()));
    }
    let n = instance.price_count();
    if n == 0 {
        return Ok(instance.clone());
    }
    let big = big_price(n, eps)?;
    // q <= t, so the quotient is at most ceil(N den / num).
    narrow((u128::from(n) * u128::from(eps.den)).div_ceil(u128::from(eps.num)))?;
    let divisor = u128::from(t) * u128::from(eps.num);
    let scale = u128::from(n) * u128::from(eps.den);
    Ok(instance.map_prices(&|q| {
        if q <= t {
            (u128::from(q) * scale).div_ceil(divisor) as u64
        } else {
            big
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptasOutcome<S> {
    pub solution: S,
    /// Cost under the original prices.
    pub cost: u64,
    /// Threshold `t` of the iteration that produced the solution.
    pub chosen_t: u64,
    pub solver_calls: u32,
}

/// Price-scaling approximation: returns a feasible solution of cost at most
/// `(1 + 2 eps) OPT`.
///
/// Thresholds `t = 1, 2, 4, ...` are tried until `t` reaches the largest
/// price; each iteration solves the rescaled instance exactly, discards the
/// result if its scaled cost reaches [`big_price`], and otherwise keeps it.
/// The stored solution with the lowest original cost wins (smallest `t` on
/// ties).
pub fn fptas<I, F>(
    instance: &I,
    eps: Eps,
    mut exact_solver: F,
) -> Result<FptasOutcome<I::Solution>, WeightedError>
where
    I: PricedInstance,
    F: FnMut(&I) -> Result<(I::Solution, u64), WeightedError>,
{
    let top = instance.max_price();
    if top == 0 {
        let (solution, _) = exact_solver(instance)?;
        let cost = instance.solution_cost(&solution)?;
        return Ok(FptasOutcome {
            solution,
            cost,
            chosen_t: 1,
            solver_calls: 1,
        });
    }
    let threshold = big_price(instance.price_count(), eps)?;
    let mut best: Option<FptasOutcome<I::Solution>> = None;
    let mut calls = 0;
    let mut t = 1u64;
    loop {
        let scaled = scale_prices(instance, t, eps)?;
        let (solution, _) = exact_solver(&scaled)?;
        calls += 1;
        if scaled.solution_cost(&solution)? < threshold {
            let cost = instance.solution_cost(&solution)?;
            if best.as_ref().is_none_or(|b| cost < b.cost) {
                best = Some(FptasOutcome {
                    solution,
                    cost,
                    chosen_t: t,
                    solver_calls: 0,
                });
            }
        }
        if t >= top {
            break;
        }
        t = t.checked_mul(2).ok_or(Overflow)?;
    }
    let mut best = best.ok_or_else(|| {
        WeightedError::Internal("final iteration must store a solution".into())
    })?;
    best.solver_calls = calls;
    Ok(best)
}

/// [`fptas`] run at `eps / 2`, giving the textbook `(1 + eps) OPT` bound.
pub fn fptas_strict<I, F>(
    instance: &I,
    eps: Eps,
    exact_solver: F,
) -> Result<FptasOutcome<I::Solution>, WeightedError>
where
    I: PricedInstance,
    F: FnMut(&I) -> Result<(I::Solution, u64), WeightedError>,
{
    fptas(instance, eps.halved()?, exact_solver)
}

// ---------------------------------------------------------------------------
// Negative bribery and (1,1)-weighted-bribery

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightedVote {
    pub weight: u64,
    pub vote: usize,
}

/// Plurality-weighted negative bribery: re-point up to `budget` voters, none
/// of them to `p`, so that `p` becomes a co-winner.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NegativeBriberyInstance {
    pub candidates: CandidateSet,
    pub preferred: usize,
    pub voters: Vec<WeightedVote>,
    /// Number of voters that may be bribed.
    pub budget: u64,
}

/// (1,1)-weighted-bribery: weighted plurality with a price per voter and
/// ordered candidate pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weighted11Instance {
    pub candidates: CandidateSet,
    pub preferred: usize,
    pub voters: Vec<WeightedVote>,
    pub prices: Vec<PriceTable>,
    pub budget: u64,
}

fn validate_votes(
    candidates: &CandidateSet,
    preferred: usize,
    voters: &[WeightedVote],
) -> Result<(), WeightedError> {
    if voters.is_empty() {
        return Err(WeightedError::InvalidInstance("at least one voter required".into()));
    }
    check_candidate(candidates, preferred, "preferred candidate")?;
    for (i, v) in voters.iter().enumerate() {
        check_weight(i, v.weight)?;
        check_candidate(candidates, v.vote, "vote")?;
    }
    plurality_scores(candidates.len(), voters.iter().map(|v| (v.vote, v.weight)))?;
    Ok(())
}

impl NegativeBriberyInstance {
    pub fn validate(&self) -> Result<(), WeightedError> {
        validate_votes(&self.candidates, self.preferred, &self.voters)
    }

    pub fn scores(&self) -> Result<Vec<u64>, Overflow> {
        plurality_scores(
            self.candidates.len(),
            self.voters.iter().map(|v| (v.vote, v.weight)),
        )
    }
}

impl Weighted11Instance {
    pub fn validate(&self) -> Result<(), WeightedError> {
        validate_votes(&self.candidates, self.preferred, &self.voters)?;
        if self.prices.len() != self.voters.len() {
            return Err(WeightedError::InvalidInstance(format!(
                "{} price tables for {} voters",
                self.prices.len(),
                self.voters.len()
            )));
        }
        for (i, table) in self.prices.iter().enumerate() {
            if table.slots() != self.candidates.len() {
                return Err(WeightedError::InvalidInstance(format!(
                    "voter {i}: price table must be {0}x{0}",
                    self.candidates.len()
                )));
            }
            table
                .validate()
                .map_err(|e| WeightedError::InvalidInstance(format!("voter {i}: {e}")))?;
        }
        Ok(())
    }

    pub fn scores(&self) -> Result<Vec<u64>, Overflow> {
        plurality_scores(
            self.candidates.len(),
            self.voters.iter().map(|v| (v.vote, v.weight)),
        )
    }
}

/// Same election and budget; moving a point to `p` costs `B + 1`, every
/// other move costs 1. Yes-instances map to yes-instances and no to no.
pub fn reduce_negative_bribery(
    instance: &NegativeBriberyInstance,
) -> Result<Weighted11Instance, WeightedError> {
    instance.validate()?;
    let m = instance.candidates.len();
    let to_preferred = checked_add(instance.budget, 1)?;
    let mut table = PriceTable::uniform(m, 1);
    for from in 0..m {
        if from != instance.preferred {
            table
                .set(from, instance.preferred, to_preferred)
                .map_err(|e| WeightedError::Internal(e.to_string()))?;
        }
    }
    Ok(Weighted11Instance {
        candidates: instance.candidates.clone(),
        preferred: instance.preferred,
        voters: instance.voters.clone(),
        prices: vec![table; instance.voters.len()],
        budget: instance.budget,
    })
}
