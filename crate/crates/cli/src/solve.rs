//! Routing from a parsed instance to a solver, and report construction.

use briberon_core::election::CandidateSet;
use briberon_core::kb::{self, BriberyPlan, KbError, KbInstance, Move, Slot};
use briberon_core::testkit::{self, OracleError};
use briberon_core::weighted::{
    self, ApprovalFlips, ApprovalPrimeInstance, Eps, PluralityBribery, PricedInstance, WeightedError,
    WeightedPluralityInstance,
};
use briberon_core::Overflow;
use indexmap::IndexMap;

use crate::format::{
    FlipEntry, Instance, MoveEntry, PlanEntry, Report, RevoteEntry, FORMAT_VERSION, UNASSIGNED,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Method {
    Flow,
    Exact,
    Fptas,
    Oracle,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Flow => "flow",
            Method::Exact => "exact",
            Method::Fptas => "fptas",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub method: Option<Method>,
    pub epsilon: Option<Eps>,
    /// Overrides the budget stored in the instance.
    pub budget: Option<u64>,
}

/// Default approximation parameter for `--method fptas`.
pub const DEFAULT_EPSILON: (u64, u64) = (1, 10);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<KbError> for CliError {
    fn from(e: KbError) -> Self {
        match e {
            KbError::InvalidInstance(_) | KbError::Overflow(_) => CliError::Input(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<WeightedError> for CliError {
    fn from(e: WeightedError) -> Self {
        match e {
            WeightedError::InvalidInstance(_) | WeightedError::InvalidEpsilon(_) | WeightedError::Overflow(_) => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Input(format!("oracle: {e}"))
    }
}

impl From<Overflow> for CliError {
    fn from(e: Overflow) -> Self {
        CliError::Input(e.to_string())
    }
}

fn label(cands: &CandidateSet, slot: Slot) -> String {
    match slot {
        Slot::Candidate(c) => cands.name(c).to_string(),
        Slot::Unassigned => UNASSIGNED.to_string(),
    }
}

/// Scores after executing `plan` on `instance`, keyed by label in candidate
/// order.
pub fn replay(instance: &Instance, plan: &[PlanEntry]) -> Result<IndexMap<String, u64>, CliError> {
    let cands = instance.candidates();
    let bad = |msg: String| CliError::Input(format!("plan: {msg}"));
    let find = |name: &str| cands.index_of(name).ok_or_else(|| bad(format!("unknown candidate {name:?}")));
    let scores: Vec<u64> = match instance {
        Instance::Kb(inst) => {
            let m = cands.len();
            let mut moves = Vec::new();
            for entry in plan {
                let PlanEntry::Move(mv) = entry else {
                    return Err(bad("(k,b) plans consist of moves".into()));
                };
                let slot = |name: &str| -> Result<Slot, CliError> {
                    if inst.election.free_form && name == UNASSIGNED {
                        Ok(Slot::Unassigned)
                    } else {
                        find(name).map(|c| Slot::from_index(c, m))
                    }
                };
                moves.push(Move {
                    voter: mv.voter,
                    from: slot(&mv.from)?,
                    to: slot(&mv.to)?,
                    count: mv.count,
                });
            }
            let plan = BriberyPlan::priced(inst, moves).map_err(|e| bad(e.to_string()))?;
            let post = kb::apply_plan(inst, &plan).map_err(|e| bad(e.to_string()))?;
            briberon_core::election::tally(&post)?.scores
        }
        Instance::ApprovalPrime(inst) => {
            let mut flips = Vec::new();
            for entry in plan {
                let PlanEntry::Flip(f) = entry else {
                    return Err(bad("approval plans consist of flips".into()));
                };
                let c = find(&f.candidate)?;
                let voter = inst.voters.get(f.voter).ok_or_else(|| bad(format!("voter {} out of range", f.voter)))?;
                if voter.approvals[c] == f.approve {
                    return Err(bad(format!("voter {} already has approval {} for {}", f.voter, f.approve, f.candidate)));
                }
                flips.push((f.voter, c));
            }
            inst.post_scores(&ApprovalFlips { flips })?
        }
        _ => {
            let (votes, m) = plurality_votes(instance);
            let mut votes = votes;
            for entry in plan {
                let PlanEntry::Revote(r) = entry else {
                    return Err(bad("plurality plans consist of revotes".into()));
                };
                let slot = votes.get_mut(r.voter).ok_or_else(|| bad(format!("voter {} out of range", r.voter)))?;
                if slot.0 != find(&r.from)? {
                    return Err(bad(format!("voter {} does not vote for {}", r.voter, r.from)));
                }
                slot.0 = find(&r.to)?;
            }
            let mut scores = vec![0u64; m];
            for (vote, weight) in votes {
                scores[vote] = briberon_core::error::checked_add(scores[vote], weight)?;
            }
            scores
        }
    };
    Ok(cands.names().iter().cloned().zip(scores).collect())
}

/// `(vote, weight)` per voter for the plurality-based problems.
fn plurality_votes(instance: &Instance) -> (Vec<(usize, u64)>, usize) {
    let m = instance.candidates().len();
    let votes = match instance {
        Instance::PluralityWeighted(i) => i.voters.iter().map(|v| (v.vote, v.weight)).collect(),
        Instance::NegativePlurality(i) => i.voters.iter().map(|v| (v.vote, v.weight)).collect(),
        Instance::Weighted11(i) => i.voters.iter().map(|v| (v.vote, v.weight)).collect(),
        _ => unreachable!("not a plurality problem"),
    };
    (votes, m)
}

fn winners(scores: &IndexMap<String, u64>) -> Vec<String> {
    let top = scores.values().copied().max().unwrap_or(0);
    scores.iter().filter(|(_, &s)| s == top).map(|(l, _)| l.clone()).collect()
}

struct Solved {
    method: Method,
    epsilon: Option<Eps>,
    budget: Option<u64>,
    /// `None` when no bribery exists (or none within budget, for the
    /// decision problems).
    cost: Option<u64>,
    plan: Vec<PlanEntry>,
}

fn unsupported(method: Method, instance: &Instance) -> CliError {
    CliError::Input(format!(
        "method {} does not apply to problem {}",
        method.name(),
        instance.problem()
    ))
}

fn revotes(cands: &CandidateSet, from: impl Fn(usize) -> usize, pairs: &[(usize, usize)]) -> Vec<PlanEntry> {
    pairs
        .iter()
        .map(|&(voter, to)| {
            PlanEntry::Revote(RevoteEntry {
                voter,
                from: cands.name(from(voter)).to_string(),
                to: cands.name(to).to_string(),
            })
        })
        .collect()
}

fn solve_kb(inst: &KbInstance, method: Method) -> Result<(Option<u64>, Vec<PlanEntry>), CliError> {
    let cands = &inst.election.candidates;
    let plan = match method {
        Method::Flow | Method::Exact => match kb::solve_optimal(inst) {
            Ok(outcome) => outcome.plan,
            Err(KbError::Infeasible) => return Ok((None, Vec::new())),
            Err(e) => return Err(e.into()),
        },
        Method::Oracle => testkit::brute_kb(inst)?.1,
        Method::Fptas => unreachable!("rejected by caller"),
    };
    let entries = plan
        .moves
        .iter()
        .map(|mv| {
            PlanEntry::Move(MoveEntry {
                voter: mv.voter,
                from: label(cands, mv.from),
                to: label(cands, mv.to),
                count: mv.count,
            })
        })
        .collect();
    Ok((Some(plan.total_price), entries))
}

fn solve_plurality(
    inst: &WeightedPluralityInstance,
    method: Method,
    eps: Eps,
) -> Result<(u64, Vec<PlanEntry>), CliError> {
    let p = inst.preferred;
    let (cost, bribed): (u64, Vec<usize>) = match method {
        Method::Exact => {
            let (s, c) = weighted::solve_plurality_exact(inst)?;
            (c, s.bribed)
        }
        Method::Fptas => {
            let out = weighted::fptas(inst, eps, weighted::solve_plurality_exact)?;
            (out.cost, out.solution.bribed)
        }
        Method::Oracle => {
            let (c, pairs) = testkit::brute_weighted_plurality(inst, false)?;
            (c, pairs.into_iter().map(|(v, _)| v).collect())
        }
        Method::Flow => unreachable!("rejected by caller"),
    };
    let pairs: Vec<(usize, usize)> = bribed.iter().map(|&v| (v, p)).collect();
    debug_assert!(inst.makes_winner(&PluralityBribery { bribed }).unwrap_or(false));
    Ok((cost, revotes(&inst.candidates, |v| inst.voters[v].vote, &pairs)))
}

fn solve_approval(inst: &ApprovalPrimeInstance, method: Method, eps: Eps) -> Result<(u64, Vec<PlanEntry>), CliError> {
    let (cost, mut flips) = match method {
        Method::Exact => {
            let (s, c) = weighted::solve_approval_prime_exact(inst)?;
            (c, s.flips)
        }
        Method::Fptas => {
            let out = weighted::fptas(inst, eps, weighted::solve_approval_prime_exact)?;
            (out.cost, out.solution.flips)
        }
        Method::Oracle => testkit::brute_approval_prime(inst)?,
        Method::Flow => unreachable!("rejected by caller"),
    };
    flips.sort_unstable();
    let entries = flips
        .into_iter()
        .map(|(voter, c)| {
            PlanEntry::Flip(FlipEntry {
                voter,
                candidate: inst.candidates.name(c).to_string(),
                approve: !inst.voters[voter].approvals[c],
            })
        })
        .collect();
    Ok((cost, entries))
}

fn dispatch(instance: &Instance, opts: &SolveOptions) -> Result<Solved, CliError> {
    let default = match instance {
        Instance::Kb(_) => Method::Flow,
        Instance::PluralityWeighted(_) | Instance::ApprovalPrime(_) => Method::Exact,
        Instance::NegativePlurality(_) | Instance::Weighted11(_) => Method::Oracle,
    };
    let method = opts.method.unwrap_or(default);
    let allowed: &[Method] = match instance {
        Instance::Kb(_) => &[Method::Flow, Method::Exact, Method::Oracle],
        Instance::PluralityWeighted(_) | Instance::ApprovalPrime(_) => &[Method::Exact, Method::Fptas, Method::Oracle],
        _ => &[Method::Oracle],
    };
    if !allowed.contains(&method) {
        return Err(unsupported(method, instance));
    }
    if opts.epsilon.is_some() && method != Method::Fptas {
        return Err(CliError::Input("--epsilon only applies to --method fptas".into()));
    }
    let eps = match opts.epsilon {
        Some(e) => e,
        None => Eps::new(DEFAULT_EPSILON.0, DEFAULT_EPSILON.1)?,
    };
    let epsilon = (method == Method::Fptas).then_some(eps);
    let solved = |budget, cost, plan| Solved {
        method,
        epsilon,
        budget,
        cost,
        plan,
    };
    Ok(match instance {
        Instance::Kb(inst) => {
            let (cost, plan) = solve_kb(inst, method)?;
            solved(opts.budget.or(inst.budget), cost, plan)
        }
        Instance::PluralityWeighted(inst) => {
            let (cost, plan) = solve_plurality(inst, method, eps)?;
            solved(opts.budget.or(inst.budget), Some(cost), plan)
        }
        Instance::ApprovalPrime(inst) => {
            let (cost, plan) = solve_approval(inst, method, eps)?;
            solved(opts.budget.or(inst.budget), Some(cost), plan)
        }
        Instance::NegativePlurality(inst) => {
            let mut inst = inst.clone();
            inst.budget = opts.budget.unwrap_or(inst.budget);
            let witness = testkit::brute_negative(&inst)?;
            let (cost, pairs) = witness.map_or((None, Vec::new()), |(c, w)| (Some(c), w));
            let plan = revotes(&inst.candidates, |v| inst.voters[v].vote, &pairs);
            solved(Some(inst.budget), cost, plan)
        }
        Instance::Weighted11(inst) => {
            let mut inst = inst.clone();
            inst.budget = opts.budget.unwrap_or(inst.budget);
            let witness = testkit::brute_11_weighted(&inst)?;
            let (cost, pairs) = witness.map_or((None, Vec::new()), |(c, w)| (Some(c), w));
            let plan = revotes(&inst.candidates, |v| inst.voters[v].vote, &pairs);
            solved(Some(inst.budget), cost, plan)
        }
    })
}

/// Solves `instance` and builds its report.
///
/// A bribery over budget is reported with `feasible: false`, the optimal
/// cost, an empty plan and the unbribed scores.
pub fn solve(instance: &Instance, opts: &SolveOptions) -> Result<Report, CliError> {
    let s = dispatch(instance, opts)?;
    let feasible = match (s.cost, s.budget) {
        (None, _) => false,
        (Some(c), Some(b)) => c <= b,
        (Some(_), None) => true,
    };
    let plan = if feasible { s.plan } else { Vec::new() };
    let post_scores = replay(instance, &plan)?;
    let winners = winners(&post_scores);
    let preferred = match instance {
        Instance::Kb(i) => i.preferred,
        Instance::PluralityWeighted(i) => i.preferred,
        Instance::ApprovalPrime(i) => i.preferred,
        Instance::NegativePlurality(i) => i.preferred,
        Instance::Weighted11(i) => i.preferred,
    };
    if feasible && !winners.iter().any(|w| w == instance.candidates().name(preferred)) {
        return Err(CliError::Internal("reported plan does not make p a winner".into()));
    }
    Ok(Report {
        version: FORMAT_VERSION,
        problem: instance.problem(),
        method: s.method.name().to_string(),
        epsilon: s.epsilon.map(|e| e.to_string()),
        budget: s.budget,
        feasible,
        optimal_cost: s.cost,
        plan,
        post_scores,
        winners,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_instance;

    const EX1: &str = include_str!("../tests/fixtures/ex1_kb.json");

    #[test]
    fn example_one_report() {
        let inst = parse_instance(EX1).unwrap();
        let report = solve(&inst, &SolveOptions::default()).unwrap();
        assert!(report.feasible);
        assert_eq!(report.optimal_cost, Some(3));
        assert_eq!(
            report.plan,
            vec![PlanEntry::Move(MoveEntry {
                voter: 0,
                from: "a".into(),
                to: "p".into(),
                count: 1
            })]
        );
        assert_eq!(report.winners, vec!["p".to_string()]);

        let tight = SolveOptions {
            budget: Some(2),
            ..SolveOptions::default()
        };
        let report = solve(&inst, &tight).unwrap();
        assert!(!report.feasible);
        assert!(report.plan.is_empty());
        assert_eq!(report.optimal_cost, Some(3));
    }

    #[test]
    fn oracle_agrees_on_example() {
        let inst = parse_instance(EX1).unwrap();
        let opts = SolveOptions {
            method: Some(Method::Oracle),
            ..SolveOptions::default()
        };
        assert_eq!(solve(&inst, &opts).unwrap().optimal_cost, Some(3));
    }

    #[test]
    fn methods_are_checked() {
        let inst = parse_instance(EX1).unwrap();
        let opts = SolveOptions {
            method: Some(Method::Fptas),
            ..SolveOptions::default()
        };
        assert_eq!(solve(&inst, &opts).unwrap_err().exit_code(), 2);
    }
}
