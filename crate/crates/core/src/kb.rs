//! Minimum-cost nonuniform bribery for (k,b)-elections via min-cost flow.
//!
//! For a target score `K` of the preferred candidate `p`, the network has a
//! source `s`, a sink `t`, a "before" node `c[l][i]` and an "after" node
//! `c'[l][i]` per voter `l` and slot `i`, and a collector `f[i]` per
//! candidate:
//!
//! * `s -> c[l][i]`: capacity = points voter `l` gives slot `i`, cost 0;
//! * `c[l][i] -> c'[l][j]`: capacity `k`, cost `price_l(i, j)` (unit briberies);
//! * `c'[l][i] -> f[i]`: capacity `b`, cost 0 (the per-voter `b` bound);
//! * `f[i] -> t`: capacity `K`, cost 0 for `p` and a penalty `T` otherwise.
//!
//! Free-form instances add an unassigned slot per voter whose after node
//! drains straight to `t` with capacity `k` and cost `T`, so it skips the `b`
//! bound and contributes no score.
//!
//! `T = 1 + k n max(price)` exceeds every bribery's cost, hence a minimum
//! flow of value `kn` first maximizes the points reaching `f[p]` (at most `K`)
//! and then minimizes the bribery price. Its cost is
//! `T (kn - score(p)) + price`. Sweeping `K` and keeping the cheapest plan in
//! which `p` reaches exactly `K` gives the optimum.

use rayon::prelude::*;

use crate::election::{tally, winners, Ballot, Election, ScoreVector};
use crate::error::{checked_add, checked_mul, Overflow};
use crate::flow::{self, ArcId, Flow, FlowError, FlowNetwork, NodeId};

/// A voter's point slot: a candidate or the unassigned slot of free-form
/// elections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Candidate(usize),
    Unassigned,
}

impl Slot {
    /// Position in a price table with `m` candidates.
    pub fn index(self, m: usize) -> usize {
        match self {
            Slot::Candidate(i) => i,
            Slot::Unassigned => m,
        }
    }

    pub fn from_index(index: usize, m: usize) -> Self {
        if index == m {
            Slot::Unassigned
        } else {
            Slot::Candidate(index)
        }
    }
}

/// One voter's price for moving a single point between two slots. Square,
/// with `m` rows, plus one for the unassigned slot in free-form instances.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PriceTable {
    slots: usize,
    prices: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PriceTableError {
    #[error("price table shape mismatch: expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("diagonal price must be 0 (slot {slot} has {price})")]
    NonZeroDiagonal { slot: usize, price: u64 },
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

impl PriceTable {
    /// All-zero table over `slots` slots.
    pub fn zeros(slots: usize) -> Self {
        Self {
            slots,
            prices: vec![0; slots * slots],
        }
    }

    /// Every off-diagonal entry equal to `price`.
    pub fn uniform(slots: usize, price: u64) -> Self {
        let mut t = Self::zeros(slots);
        for i in 0..slots {
            for j in 0..slots {
                if i != j {
                    t.prices[i * slots + j] = price;
                }
            }
        }
        t
    }

    /// Builds from a row-major matrix.
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self, PriceTableError> {
        let slots = rows.len();
        let mut prices = Vec::with_capacity(slots * slots);
        for row in rows {
            if row.len() != slots {
                return Err(PriceTableError::Shape {
                    expected: slots,
                    found: row.len(),
                });
            }
            prices.extend(row);
        }
        let table = Self { slots, prices };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<(), PriceTableError> {
        if self.prices.len() != self.slots * self.slots {
            return Err(PriceTableError::Shape {
                expected: self.slots * self.slots,
                found: self.prices.len(),
            });
        }
        for slot in 0..self.slots {
            let price = self.get(slot, slot);
            if price != 0 {
                return Err(PriceTableError::NonZeroDiagonal { slot, price });
            }
        }
        if self.max() > crate::error::MAX_EXACT {
            return Err(Overflow.into());
        }
        Ok(())
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn get(&self, from: usize, to: usize) -> u64 {
        self.prices[from * self.slots + to]
    }

    /// Sets one entry; a nonzero diagonal entry is rejected.
    pub fn set(&mut self, from: usize, to: usize, price: u64) -> Result<(), PriceTableError> {
        if from == to && price != 0 {
            return Err(PriceTableError::NonZeroDiagonal { slot: from, price });
        }
        self.prices[from * self.slots + to] = price;
        Ok(())
    }

    pub fn max(&self) -> u64 {
        self.prices.iter().copied().max().unwrap_or(0)
    }
}

/// An unweighted (k,b)-bribery instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KbInstance {
    pub election: Election,
    pub preferred: usize,
    pub prices: Vec<PriceTable>,
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KbError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("no target score admits a valid bribery")]
    Infeasible,
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error("flow engine: {0}")]
    Flow(FlowError),
}

impl From<FlowError> for KbError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::Overflow(o) => KbError::Overflow(o),
            other => KbError::Flow(other),
        }
    }
}

impl KbInstance {
    pub fn new(
        election: Election,
        preferred: usize,
        prices: Vec<PriceTable>,
        budget: Option<u64>,
    ) -> Result<Self, KbError> {
        let instance = Self {
            election,
            preferred,
            prices,
            budget,
        };
        instance.validate()?;
        Ok(instance)
    }

    /// Slots per voter: `m`, plus the unassigned slot when free-form.
    pub fn slots(&self) -> usize {
        self.election.m() + usize::from(self.election.free_form)
    }

    pub fn validate(&self) -> Result<(), KbError> {
        let invalid = |msg: String| Err(KbError::InvalidInstance(msg));
        let violations = self.election.validate();
        if !violations.is_empty() {
            let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return invalid(text.join("; "));
        }
        if self.election.weights.iter().any(|&w| w != 1) {
            return invalid("(k,b)-bribery voters must be unweighted".into());
        }
        if self.preferred >= self.election.m() {
            return invalid(format!("preferred candidate {} out of range", self.preferred));
        }
        if self.prices.len() != self.election.n() {
            return invalid(format!(
                "{} price tables for {} voters",
                self.prices.len(),
                self.election.n()
            ));
        }
        for (voter, table) in self.prices.iter().enumerate() {
            if table.slots() != self.slots() {
                return invalid(format!(
                    "voter {voter}: price table has {} slots, expected {}",
                    table.slots(),
                    self.slots()
                ));
            }
            table
                .validate()
                .map_err(|e| KbError::InvalidInstance(format!("voter {voter}: {e}")))?;
        }
        Ok(())
    }

    pub fn max_price(&self) -> u64 {
        self.prices.iter().map(PriceTable::max).max().unwrap_or(0)
    }

    /// `k * n`, the flow value of every bribery network.
    pub fn total_points(&self) -> Result<u64, Overflow> {
        checked_mul(self.election.k, self.election.n() as u64)
    }

    /// Penalty `T = 1 + k n max(price)` on rival collector arcs.
    pub fn penalty(&self) -> Result<u64, Overflow> {
        checked_add(1, checked_mul(self.total_points()?, self.max_price())?)
    }

    fn slot_points(&self, voter: usize, slot: usize) -> u64 {
        let ballot = &self.election.ballots[voter];
        ballot.points.get(slot).copied().unwrap_or(ballot.unassigned)
    }
}

/// `count` unit briberies of one voter from one slot to another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub voter: usize,
    pub from: Slot,
    pub to: Slot,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BriberyPlan {
    /// Sorted by `(voter, from, to)`.
    pub moves: Vec<Move>,
    pub total_price: u64,
}

impl BriberyPlan {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a plan and prices it against `instance`.
    pub fn priced(instance: &KbInstance, mut moves: Vec<Move>) -> Result<Self, KbError> {
        moves.sort();
        let m = instance.election.m();
        let mut total = 0;
        for mv in &moves {
            let table = instance
                .prices
                .get(mv.voter)
                .ok_or_else(|| KbError::InvalidPlan(format!("voter {} out of range", mv.voter)))?;
            let (from, to) = (mv.from.index(m), mv.to.index(m));
            if from >= table.slots() || to >= table.slots() {
                return Err(KbError::InvalidPlan("slot out of range".into()));
            }
            total = checked_add(total, checked_mul(mv.count, table.get(from, to))?)?;
        }
        Ok(Self {
            moves,
            total_price: total,
        })
    }
}

/// Network for one target score, with the arc ids needed for decoding.
#[derive(Debug, Clone)]
pub struct BriberyNetwork {
    pub network: FlowNetwork,
    pub target: u64,
    pub penalty: u64,
    /// `(arc, voter, from slot, to slot)` for every off-diagonal move arc.
    pub move_arcs: Vec<(ArcId, usize, usize, usize)>,
    /// Collector node of the preferred candidate.
    pub preferred_collector: NodeId,
}

struct Layout {
    n: usize,
    slots: usize,
}

impl Layout {
    const SOURCE: NodeId = 0;
    const SINK: NodeId = 1;

    fn before(&self, voter: usize, slot: usize) -> NodeId {
        2 + voter * self.slots + slot
    }

    fn after(&self, voter: usize, slot: usize) -> NodeId {
        2 + (self.n + voter) * self.slots + slot
    }

    fn collector(&self, candidate: usize) -> NodeId {
        2 + 2 * self.n * self.slots + candidate
    }

    fn node_count(&self, m: usize) -> usize {
        2 + 2 * self.n * self.slots + m
    }
}

/// Builds the bribery network for target score `target` of the preferred
/// candidate.
pub fn build_network(instance: &KbInstance, target: u64) -> Result<BriberyNetwork, KbError> {
    let election = &instance.election;
    let (m, n, k, b) = (election.m(), election.n(), election.k, election.b);
    let penalty = instance.penalty()?;
    // Worst case the whole flow pays the penalty.
    checked_mul(penalty, instance.total_points()?)?;

    let layout = Layout {
        n,
        slots: instance.slots(),
    };
    let mut network = FlowNetwork::new(layout.node_count(m), Layout::SOURCE, Layout::SINK)?;
    let mut move_arcs = Vec::new();
    for voter in 0..n {
        for slot in 0..layout.slots {
            network.add_arc(
                Layout::SOURCE,
                layout.before(voter, slot),
                instance.slot_points(voter, slot),
                0,
            )?;
        }
        let table = &instance.prices[voter];
        for from in 0..layout.slots {
            for to in 0..layout.slots {
                let arc = network.add_arc(
                    layout.before(voter, from),
                    layout.after(voter, to),
                    k,
                    table.get(from, to),
                )?;
                if from != to {
                    move_arcs.push((arc, voter, from, to));
                }
            }
        }
        for candidate in 0..m {
            network.add_arc(layout.after(voter, candidate), layout.collector(candidate), b, 0)?;
        }
        if election.free_form {
            network.add_arc(layout.after(voter, m), Layout::SINK, k, penalty)?;
        }
    }
    for candidate in 0..m {
        let cost = if candidate == instance.preferred {
            0
        } else {
            penalty
        };
        network.add_arc(layout.collector(candidate), Layout::SINK, target, cost)?;
    }
    Ok(BriberyNetwork {
        network,
        target,
        penalty,
        move_arcs,
        preferred_collector: layout.collector(instance.preferred),
    })
}

/// Result of the min-cost flow for one target score.
#[derive(Debug, Clone)]
pub struct TargetSolution {
    pub target: u64,
    pub network: BriberyNetwork,
    pub flow: Flow,
    /// Points reaching the preferred candidate.
    pub preferred_score: u64,
    pub plan: BriberyPlan,
}

impl TargetSolution {
    /// Whether `p` reached exactly the target (otherwise this `K` is
    /// covered by a smaller one).
    pub fn accepted(&self) -> bool {
        self.preferred_score == self.target
    }
}

/// Target scores worth solving: `K` with `m K >= kn` (strict only) and
/// `K <= n min(k, b)`, the most `p` can ever hold.
pub fn target_range(instance: &KbInstance) -> Result<std::ops::RangeInclusive<u64>, Overflow> {
    let e = &instance.election;
    let kn = instance.total_points()?;
    let lo = if e.free_form {
        0
    } else {
        kn.div_ceil(e.m() as u64)
    };
    let hi = checked_mul(e.n() as u64, e.k.min(e.b))?.min(kn);
    Ok(lo..=hi)
}

/// Solves the flow for one target score. `Ok(None)` when no flow of value
/// `kn` exists.
pub fn solve_target(instance: &KbInstance, target: u64) -> Result<Option<TargetSolution>, KbError> {
    let network = build_network(instance, target)?;
    let kn = instance.total_points()?;
    let flow = match flow::solve_min_cost_flow(&network.network, kn) {
        Ok(f) => f,
        Err(FlowError::Infeasible { .. }) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let m = instance.election.m();
    let moves = network
        .move_arcs
        .iter()
        .filter(|&&(arc, ..)| flow.arc_flow[arc] > 0)
        .map(|&(arc, voter, from, to)| Move {
            voter,
            from: Slot::from_index(from, m),
            to: Slot::from_index(to, m),
            count: flow.arc_flow[arc],
        })
        .collect();
    let plan = BriberyPlan::priced(instance, moves)?;
    let preferred_score = flow.inflow(&network.network, network.preferred_collector);
    Ok(Some(TargetSolution {
        target,
        network,
        flow,
        preferred_score,
        plan,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub plan: BriberyPlan,
    pub optimal_cost: u64,
    /// Score of the preferred candidate after bribery.
    pub achieved_score: u64,
    pub post_scores: ScoreVector,
    /// `Some(cost <= budget)` when the instance carries a budget.
    pub feasible_within_budget: Option<bool>,
}

/// Minimum-price bribery making the preferred candidate a (co-)winner.
///
/// Target scores are solved in parallel; the winner is the cheapest plan,
/// ties going to the smallest target, exactly as a sequential sweep would.
pub fn solve_optimal(instance: &KbInstance) -> Result<SolveOutcome, KbError> {
    instance.validate()?;
    let targets: Vec<u64> = target_range(instance)?.collect();
    let solved: Vec<Option<(u64, u64, BriberyPlan)>> = targets
        .par_iter()
        .map(|&target| {
            Ok(solve_target(instance, target)?
                .filter(TargetSolution::accepted)
                .map(|s| (s.plan.total_price, s.target, s.plan)))
        })
        .collect::<Result<_, KbError>>()?;
    let (cost, target, plan) = solved
        .into_iter()
        .flatten()
        .min_by_key(|&(cost, target, _)| (cost, target))
        .ok_or(KbError::Infeasible)?;
    let post = apply_plan(instance, &plan)?;
    let post_scores = tally(&post)?;
    debug_assert_eq!(post_scores[instance.preferred], target);
    debug_assert!(winners(&post_scores).contains(&instance.preferred));
    Ok(SolveOutcome {
        optimal_cost: cost,
        achieved_score: target,
        feasible_within_budget: instance.budget.map(|b| cost <= b),
        plan,
        post_scores,
    })
}

/// Decision form: is there a bribery of price at most `budget`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Yes(BriberyPlan),
    No { optimal_cost: u64 },
}

pub fn decide(instance: &KbInstance, budget: u64) -> Result<Decision, KbError> {
    let outcome = solve_optimal(instance)?;
    Ok(if outcome.optimal_cost <= budget {
        Decision::Yes(outcome.plan)
    } else {
        Decision::No {
            optimal_cost: outcome.optimal_cost,
        }
    })
}

/// Executes every unit bribery of `plan` in parallel and returns the
/// resulting election. At most the original points of a slot may leave it.
pub fn apply_plan(instance: &KbInstance, plan: &BriberyPlan) -> Result<Election, KbError> {
    let election = &instance.election;
    let m = election.m();
    let slots = instance.slots();
    let invalid = |msg: String| Err(KbError::InvalidPlan(msg));

    let mut moved_out = vec![vec![0u64; slots]; election.n()];
    let mut moved_in = vec![vec![0u64; slots]; election.n()];
    for mv in &plan.moves {
        let (from, to) = (mv.from.index(m), mv.to.index(m));
        if mv.voter >= election.n() || from >= slots || to >= slots {
            return invalid(format!("move {mv:?} references an unknown voter or slot"));
        }
        if from == to {
            return invalid(format!("move {mv:?} has identical endpoints"));
        }
        if mv.count == 0 {
            return invalid(format!("move {mv:?} has zero count"));
        }
        moved_out[mv.voter][from] = checked_add(moved_out[mv.voter][from], mv.count)?;
        moved_in[mv.voter][to] = checked_add(moved_in[mv.voter][to], mv.count)?;
    }

    let mut ballots = Vec::with_capacity(election.n());
    for voter in 0..election.n() {
        let mut after = Vec::with_capacity(slots);
        for slot in 0..slots {
            let before = instance.slot_points(voter, slot);
            if moved_out[voter][slot] > before {
                return invalid(format!(
                    "voter {voter} moves {} points out of slot {slot} holding {before}",
                    moved_out[voter][slot]
                ));
            }
            after.push(checked_add(before - moved_out[voter][slot], moved_in[voter][slot])?);
        }
        let unassigned = if election.free_form { after.pop().unwrap_or(0) } else { 0 };
        ballots.push(Ballot::free_form(after, unassigned));
    }
    let post = Election {
        ballots,
        ..election.clone()
    };
    let violations = post.validate();
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return invalid(format!("post-bribery election breaks the rules: {}", text.join("; ")));
    }
    Ok(post)
}
