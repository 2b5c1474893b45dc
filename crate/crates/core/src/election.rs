//! (k,b)-elections: every voter spreads `k` integral points over the
//! candidates with at most `b` on any single candidate. In the free-form
//! variant a voter may leave some of the `k` points unassigned, and the `b`
//! bound does not apply to those.
//!
//! Classical rules map onto this model through [`encode_rule`]:
//! plurality is a (1,1)-election, veto an (m-1,1)-election, approval a
//! free-form (m,1)-election and t-approval a (t,1)-election.

use std::fmt;

use crate::error::{checked_add, checked_mul, Overflow};

/// Ordered list of distinct candidate labels. Index `i` is the `i`-th label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CandidateSet {
    names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CandidateSetError {
    #[error("candidate set must contain at least one candidate")]
    Empty,
    #[error("candidate label at position {0} is empty")]
    EmptyLabel(usize),
    #[error("candidate label {0:?} appears more than once")]
    Duplicate(String),
}

impl CandidateSet {
    pub fn new<I, S>(names: I) -> Result<Self, CandidateSetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(CandidateSetError::Empty);
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(CandidateSetError::EmptyLabel(i));
            }
            if names[..i].contains(name) {
                return Err(CandidateSetError::Duplicate(name.clone()));
            }
        }
        Ok(Self { names })
    }

    /// Candidates labelled `c0`, `c1`, ... .
    pub fn numbered(m: usize) -> Self {
        assert!(m >= 1, "candidate set must be nonempty");
        Self {
            names: (0..m).map(|i| format!("c{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// One voter's point vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ballot {
    pub points: Vec<u64>,
    /// Points left unassigned; always zero outside free-form elections.
    pub unassigned: u64,
}

impl Ballot {
    pub fn new(points: Vec<u64>) -> Self {
        Self {
            points,
            unassigned: 0,
        }
    }

    pub fn free_form(points: Vec<u64>, unassigned: u64) -> Self {
        Self { points, unassigned }
    }

    /// Points assigned to candidates (excluding the unassigned slot).
    pub fn assigned(&self) -> u64 {
        self.points.iter().sum()
    }
}

/// A ballot-level rule violation reported by [`Election::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// `None` for election-wide problems.
    pub voter: Option<usize>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// `k > m * b` in a strict election: no ballot can exist.
    ImpossibleParameters { k: u64, m: usize, b: u64 },
    ZeroK,
    ZeroB,
    WeightCountMismatch { ballots: usize, weights: usize },
    ZeroWeight,
    WrongLength { expected: usize, found: usize },
    EntryExceedsB { candidate: usize, points: u64 },
    SumNotK { sum: u128 },
    UnassignedInStrict { unassigned: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.voter {
            write!(f, "voter {v}: ")?;
        }
        match &self.kind {
            ViolationKind::ImpossibleParameters { k, m, b } => {
                write!(f, "k = {k} exceeds m*b = {m}*{b}; no valid ballot exists")
            }
            ViolationKind::ZeroK => f.write_str("k must be positive"),
            ViolationKind::ZeroB => f.write_str("b must be positive"),
            ViolationKind::WeightCountMismatch { ballots, weights } => {
                write!(f, "{ballots} ballots but {weights} weights")
            }
            ViolationKind::ZeroWeight => f.write_str("weight must be positive"),
            ViolationKind::WrongLength { expected, found } => {
                write!(f, "ballot has {found} entries, expected {expected}")
            }
            ViolationKind::EntryExceedsB { candidate, points } => {
                write!(f, "entry exceeds b ({points} points to candidate {candidate})")
            }
            ViolationKind::SumNotK { sum } => write!(f, "points sum {sum} != k"),
            ViolationKind::UnassignedInStrict { unassigned } => {
                write!(f, "{unassigned} unassigned points in a non-free-form election")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ElectionError {
    #[error("invalid election: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error("ballot {voter}: {reason}")]
    Encoding { voter: usize, reason: String },
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A (k,b)-election, possibly free-form, with per-voter weights.
///
/// Unweighted elections carry all-one weights so the weighted and
/// unweighted tracks share one tally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Election {
    pub candidates: CandidateSet,
    pub k: u64,
    pub b: u64,
    pub free_form: bool,
    pub ballots: Vec<Ballot>,
    pub weights: Vec<u64>,
}

impl Election {
    /// Builds an unweighted election and validates it.
    pub fn new(
        candidates: CandidateSet,
        k: u64,
        b: u64,
        free_form: bool,
        ballots: Vec<Ballot>,
    ) -> Result<Self, ElectionError> {
        let weights = vec![1; ballots.len()];
        Self::weighted(candidates, k, b, free_form, ballots, weights)
    }

    pub fn weighted(
        candidates: CandidateSet,
        k: u64,
        b: u64,
        free_form: bool,
        ballots: Vec<Ballot>,
        weights: Vec<u64>,
    ) -> Result<Self, ElectionError> {
        let election = Self {
            candidates,
            k,
            b,
            free_form,
            ballots,
            weights,
        };
        let violations = election.validate();
        if violations.is_empty() {
            Ok(election)
        } else {
            Err(ElectionError::Invalid(violations))
        }
    }

    pub fn m(&self) -> usize {
        self.candidates.len()
    }

    pub fn n(&self) -> usize {
        self.ballots.len()
    }

    /// Every rule violation, in voter order. Empty iff the election is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let global = |kind| Violation { voter: None, kind };
        let m = self.m();
        if self.k == 0 {
            out.push(global(ViolationKind::ZeroK));
        }
        if self.b == 0 {
            out.push(global(ViolationKind::ZeroB));
        }
        if !self.free_form && u128::from(self.k) > m as u128 * u128::from(self.b) {
            out.push(global(ViolationKind::ImpossibleParameters {
                k: self.k,
                m,
                b: self.b,
            }));
        }
        if self.weights.len() != self.ballots.len() {
            out.push(global(ViolationKind::WeightCountMismatch {
                ballots: self.ballots.len(),
                weights: self.weights.len(),
            }));
        }
        for (voter, ballot) in self.ballots.iter().enumerate() {
            let at = |kind| Violation {
                voter: Some(voter),
                kind,
            };
            if self.weights.get(voter) == Some(&0) {
                out.push(at(ViolationKind::ZeroWeight));
            }
            if ballot.points.len() != m {
                out.push(at(ViolationKind::WrongLength {
                    expected: m,
                    found: ballot.points.len(),
                }));
            }
            for (candidate, &points) in ballot.points.iter().enumerate() {
                if points > self.b {
                    out.push(at(ViolationKind::EntryExceedsB { candidate, points }));
                }
            }
            if !self.free_form && ballot.unassigned != 0 {
                out.push(at(ViolationKind::UnassignedInStrict {
                    unassigned: ballot.unassigned,
                }));
            }
            let sum: u128 = ballot.points.iter().map(|&p| u128::from(p)).sum::<u128>()
                + u128::from(ballot.unassigned);
            if sum != u128::from(self.k) {
                out.push(at(ViolationKind::SumNotK { sum }));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

/// Weighted per-candidate point totals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScoreVector {
    pub scores: Vec<u64>,
}

impl ScoreVector {
    pub fn zeros(m: usize) -> Self {
        Self { scores: vec![0; m] }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn max(&self) -> u64 {
        self.scores.iter().copied().max().unwrap_or(0)
    }

    pub fn is_winner(&self, candidate: usize) -> bool {
        self.scores[candidate] >= self.max()
    }
}

impl std::ops::Index<usize> for ScoreVector {
    type Output = u64;

    fn index(&self, index: usize) -> &u64 {
        &self.scores[index]
    }
}

/// `scores[i] = sum over voters of weight * points[i]`.
pub fn tally(election: &Election) -> Result<ScoreVector, Overflow> {
    let mut scores = ScoreVector::zeros(election.m());
    for (ballot, &weight) in election.ballots.iter().zip(&election.weights) {
        for (score, &points) in scores.scores.iter_mut().zip(&ballot.points) {
            *score = checked_add(*score, checked_mul(weight, points)?)?;
        }
    }
    Ok(scores)
}

/// Indices of every candidate with the highest score (co-winner model).
pub fn winners(scores: &ScoreVector) -> Vec<usize> {
    let best = scores.max();
    scores
        .scores
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s == best)
        .map(|(i, _)| i)
        .collect()
}

/// Voting rules expressible as (k,b)-elections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Plurality,
    Veto,
    Approval,
    TApproval(u64),
    Utility { k: u64, b: u64, free_form: bool },
}

/// Rule input for one voter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RawBallot {
    /// Strict ranking, most preferred first; must be a permutation of `0..m`.
    Ranking(Vec<usize>),
    /// Approved candidate indices.
    Approvals(Vec<usize>),
    /// Utility points per candidate, plus unassigned points for free-form.
    Points { points: Vec<u64>, unassigned: u64 },
}

/// Translates classical ballots into a (k,b)-election.
pub fn encode_rule(
    candidates: CandidateSet,
    rule: Rule,
    ballots: &[RawBallot],
) -> Result<Election, ElectionError> {
    let m = candidates.len();
    let (k, b, free_form) = match rule {
        Rule::Plurality => (1, 1, false),
        Rule::Veto => (m as u64 - 1, 1, false),
        Rule::Approval => (m as u64, 1, true),
        Rule::TApproval(t) => (t, 1, false),
        Rule::Utility { k, b, free_form } => (k, b, free_form),
    };
    let mut encoded = Vec::with_capacity(ballots.len());
    for (voter, raw) in ballots.iter().enumerate() {
        let fail = |reason: String| ElectionError::Encoding { voter, reason };
        let ballot = match (rule, raw) {
            (Rule::Plurality | Rule::Veto, RawBallot::Ranking(order)) => {
                check_permutation(order, m).map_err(fail)?;
                let mut points = vec![0; m];
                if rule == Rule::Plurality {
                    points[order[0]] = 1;
                } else {
                    points.iter_mut().for_each(|p| *p = 1);
                    points[order[m - 1]] = 0;
                }
                Ballot::new(points)
            }
            (Rule::Approval | Rule::TApproval(_), RawBallot::Approvals(set)) => {
                let mut points = vec![0; m];
                for &c in set {
                    if c >= m {
                        return Err(fail(format!("approved candidate {c} out of range")));
                    }
                    if points[c] == 1 {
                        return Err(fail(format!("candidate {c} approved twice")));
                    }
                    points[c] = 1;
                }
                match rule {
                    Rule::TApproval(t) if set.len() as u64 != t => {
                        return Err(fail(format!(
                            "{} approvals, {t}-approval requires exactly {t}",
                            set.len()
                        )));
                    }
                    Rule::TApproval(_) => Ballot::new(points),
                    _ => Ballot::free_form(points, (m - set.len()) as u64),
                }
            }
            (Rule::Utility { .. }, RawBallot::Points { points, unassigned }) => {
                Ballot::free_form(points.clone(), *unassigned)
            }
            _ => return Err(fail(format!("ballot shape does not match rule {rule:?}"))),
        };
        encoded.push(ballot);
    }
    Election::new(candidates, k, b, free_form, encoded)
}

fn check_permutation(order: &[usize], m: usize) -> Result<(), String> {
    if order.len() != m {
        return Err(format!("ranking has {} entries, expected {m}", order.len()));
    }
    let mut seen = vec![false; m];
    for &c in order {
        if c >= m || std::mem::replace(&mut seen[c], true) {
            return Err("ranking is not a permutation of the candidates".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cands(names: &[&str]) -> CandidateSet {
        CandidateSet::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn tally_plurality_example() {
        let e = Election::new(
            cands(&["p", "a"]),
            1,
            1,
            false,
            vec![
                Ballot::new(vec![1, 0]),
                Ballot::new(vec![0, 1]),
                Ballot::new(vec![0, 1]),
            ],
        )
        .unwrap();
        assert_eq!(tally(&e).unwrap().scores, vec![1, 2]);
        assert_eq!(winners(&tally(&e).unwrap()), vec![1]);
    }

    #[test]
    fn tally_empty_voters() {
        let e = Election::new(cands(&["p", "a", "b"]), 2, 1, false, vec![]).unwrap();
        assert_eq!(tally(&e).unwrap().scores, vec![0, 0, 0]);
        assert_eq!(winners(&tally(&e).unwrap()), vec![0, 1, 2]);
    }

    #[test]
    fn veto_encoding_tally() {
        // candidates ordered (p, a, b)
        let e = encode_rule(
            cands(&["p", "a", "b"]),
            Rule::Veto,
            &[
                RawBallot::Ranking(vec![1, 0, 2]),
                RawBallot::Ranking(vec![1, 0, 2]),
                RawBallot::Ranking(vec![0, 2, 1]),
            ],
        )
        .unwrap();
        assert_eq!(e.k, 2);
        assert_eq!(e.ballots[0].points, vec![1, 1, 0]);
        assert_eq!(e.ballots[2].points, vec![1, 0, 1]);
        let scores = tally(&e).unwrap();
        assert_eq!(scores.scores, vec![3, 2, 1]);
        assert_eq!(winners(&scores), vec![0]);
    }

    #[test]
    fn winners_ties() {
        assert_eq!(winners(&ScoreVector { scores: vec![3, 3, 1] }), vec![0, 1]);
        assert_eq!(winners(&ScoreVector { scores: vec![0, 0, 0] }), vec![0, 1, 2]);
    }

    #[test]
    fn validate_reports_each_rule() {
        let mut e = Election {
            candidates: cands(&["p", "a"]),
            k: 2,
            b: 1,
            free_form: false,
            ballots: vec![Ballot::new(vec![2, 0])],
            weights: vec![1],
        };
        let v = e.validate();
        assert!(v
            .iter()
            .any(|v| matches!(v.kind, ViolationKind::EntryExceedsB { candidate: 0, points: 2 })));
        assert!(v[0].to_string().contains("entry exceeds b"));

        e.ballots = vec![Ballot::new(vec![1, 0])];
        let v = e.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].voter, Some(0));
        assert_eq!(v[0].kind, ViolationKind::SumNotK { sum: 1 });

        e.free_form = true;
        e.ballots = vec![Ballot::free_form(vec![1, 0], 1)];
        assert!(e.validate().is_empty());
    }

    #[test]
    fn impossible_parameters_rejected() {
        let err = Election::new(cands(&["p"]), 3, 1, false, vec![]).unwrap_err();
        match err {
            ElectionError::Invalid(v) => assert!(matches!(
                v[0].kind,
                ViolationKind::ImpossibleParameters { k: 3, m: 1, b: 1 }
            )),
            other => panic!("unexpected {other:?}"),
        }
        // free-form lifts the restriction
        assert!(Election::new(cands(&["p"]), 3, 1, true, vec![]).is_ok());
    }

    #[test]
    fn unassigned_not_bounded_by_b() {
        let e = Election::new(
            cands(&["p", "a"]),
            5,
            1,
            true,
            vec![Ballot::free_form(vec![1, 0], 4)],
        );
        assert!(e.is_ok());
    }

    #[test]
    fn plurality_and_approval_encodings() {
        let c = cands(&["p", "a", "b"]);
        let e = encode_rule(c.clone(), Rule::Plurality, &[RawBallot::Ranking(vec![1, 0, 2])])
            .unwrap();
        assert_eq!(e.ballots[0].points, vec![0, 1, 0]);
        assert_eq!((e.k, e.b), (1, 1));

        let e = encode_rule(c.clone(), Rule::Approval, &[RawBallot::Approvals(vec![0, 2])])
            .unwrap();
        assert!(e.free_form);
        assert_eq!(e.k, 3);
        assert_eq!(e.ballots[0], Ballot::free_form(vec![1, 0, 1], 1));

        let e = encode_rule(c.clone(), Rule::TApproval(2), &[RawBallot::Approvals(vec![0, 2])])
            .unwrap();
        assert_eq!(e.ballots[0], Ballot::new(vec![1, 0, 1]));
    }

    #[test]
    fn encoding_errors() {
        let c = cands(&["p", "a", "b"]);
        assert!(matches!(
            encode_rule(c.clone(), Rule::Plurality, &[RawBallot::Ranking(vec![0, 0, 1])]),
            Err(ElectionError::Encoding { voter: 0, .. })
        ));
        assert!(matches!(
            encode_rule(c.clone(), Rule::TApproval(2), &[RawBallot::Approvals(vec![0])]),
            Err(ElectionError::Encoding { .. })
        ));
        let utility = Rule::Utility {
            k: 2,
            b: 1,
            free_form: false,
        };
        assert!(matches!(
            encode_rule(
                c,
                utility,
                &[RawBallot::Points {
                    points: vec![2, 0, 0],
                    unassigned: 0
                }]
            ),
            Err(ElectionError::Invalid(_))
        ));
    }

    #[test]
    fn tally_overflow_is_reported() {
        let e = Election::weighted(
            cands(&["p", "a"]),
            1,
            1,
            false,
            vec![Ballot::new(vec![1, 0]), Ballot::new(vec![1, 0])],
            vec![u64::MAX / 2, u64::MAX / 2],
        )
        .unwrap();
        assert!(tally(&e).is_err());
    }
}
