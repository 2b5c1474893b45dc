//! JSON instance and report files. See `docs/format.md` for the schema.
//!
//! Candidates are referred to by label throughout; indices are bound at
//! parse time. Serialization is canonical: parsing a serialized instance
//! gives back the same instance, and serializing again gives the same bytes.

use std::fmt;

use briberon_core::election::{Ballot, CandidateSet, Election};
use briberon_core::kb::{KbInstance, PriceTable};
use briberon_core::weighted::{
    ApprovalPrimeInstance, ApprovalVoter, NegativeBriberyInstance, PluralityVoter, Weighted11Instance,
    WeightedPluralityInstance, WeightedVote,
};
use briberon_core::MAX_EXACT;
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

/// Label of the unassigned slot in free-form price keys.
pub const UNASSIGNED: &str = "_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Problem {
    #[serde(rename = "kb")]
    Kb,
    #[serde(rename = "kb_freeform")]
    KbFreeform,
    #[serde(rename = "plurality_weighted")]
    PluralityWeighted,
    #[serde(rename = "approval_prime")]
    ApprovalPrime,
    #[serde(rename = "negative_plurality")]
    NegativePlurality,
    #[serde(rename = "weighted_11")]
    Weighted11,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Kb(KbInstance),
    PluralityWeighted(WeightedPluralityInstance),
    ApprovalPrime(ApprovalPrimeInstance),
    NegativePlurality(NegativeBriberyInstance),
    Weighted11(Weighted11Instance),
}

impl Instance {
    pub fn problem(&self) -> Problem {
        match self {
            Instance::Kb(i) if i.election.free_form => Problem::KbFreeform,
            Instance::Kb(_) => Problem::Kb,
            Instance::PluralityWeighted(_) => Problem::PluralityWeighted,
            Instance::ApprovalPrime(_) => Problem::ApprovalPrime,
            Instance::NegativePlurality(_) => Problem::NegativePlurality,
            Instance::Weighted11(_) => Problem::Weighted11,
        }
    }

    pub fn candidates(&self) -> &CandidateSet {
        match self {
            Instance::Kb(i) => &i.election.candidates,
            Instance::PluralityWeighted(i) => &i.candidates,
            Instance::ApprovalPrime(i) => &i.candidates,
            Instance::NegativePlurality(i) => &i.candidates,
            Instance::Weighted11(i) => &i.candidates,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {0}")]
    Validation(String),
}

// ---------------------------------------------------------------------------
// Raw documents

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    version: Option<u32>,
    problem: Problem,
    candidates: Vec<String>,
    preferred: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default_price: Option<u64>,
    voters: Vec<VoterDoc>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VoterDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vote: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<IndexMap<String, u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unassigned: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    approvals: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    price: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prices: Option<IndexMap<String, u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flip_prices: Option<Vec<u64>>,
}

impl InstanceDoc {
    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (name, set) in [
            ("k", self.k.is_some()),
            ("b", self.b.is_some()),
            ("budget", self.budget.is_some()),
            ("default_price", self.default_price.is_some()),
        ] {
            if set {
                out.push(name);
            }
        }
        out
    }

    fn numbers(&self) -> Vec<(String, u64)> {
        let mut out: Vec<(String, u64)> = [
            ("k", self.k),
            ("b", self.b),
            ("budget", self.budget),
            ("default_price", self.default_price),
        ]
        .into_iter()
        .filter_map(|(name, v)| v.map(|v| (name.to_string(), v)))
        .collect();
        for (i, v) in self.voters.iter().enumerate() {
            let at = |field: &str| format!("voters[{i}].{field}");
            out.extend(v.weight.map(|w| (at("weight"), w)));
            out.extend(v.unassigned.map(|w| (at("unassigned"), w)));
            out.extend(v.price.map(|w| (at("price"), w)));
            for (key, &x) in v.points.iter().flatten() {
                out.push((at(&format!("points.{key}")), x));
            }
            for (key, &x) in v.prices.iter().flatten() {
                out.push((at(&format!("prices.{key}")), x));
            }
            for (c, &x) in v.flip_prices.iter().flatten().enumerate() {
                out.push((at(&format!("flip_prices[{c}]")), x));
            }
        }
        out
    }
}

impl VoterDoc {
    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (name, set) in [
            ("weight", self.weight.is_some()),
            ("vote", self.vote.is_some()),
            ("points", self.points.is_some()),
            ("unassigned", self.unassigned.is_some()),
            ("approvals", self.approvals.is_some()),
            ("price", self.price.is_some()),
            ("prices", self.prices.is_some()),
            ("flip_prices", self.flip_prices.is_some()),
        ] {
            if set {
                out.push(name);
            }
        }
        out
    }
}

/// (top-level fields, required top-level, voter fields, required voter).
fn schema(problem: Problem) -> (&'static [&'static str], &'static [&'static str], &'static [&'static str], &'static [&'static str]) {
    match problem {
        Problem::Kb => (&["k", "b", "budget", "default_price"], &["k", "b"], &["points", "prices"], &[]),
        Problem::KbFreeform => (
            &["k", "b", "budget", "default_price"],
            &["k", "b"],
            &["points", "unassigned", "prices"],
            &[],
        ),
        Problem::PluralityWeighted => (&["budget"], &[], &["weight", "vote", "price"], &["weight", "vote", "price"]),
        Problem::ApprovalPrime => (
            &["budget"],
            &[],
            &["weight", "approvals", "flip_prices"],
            &["weight", "flip_prices"],
        ),
        Problem::NegativePlurality => (&["budget"], &["budget"], &["weight", "vote"], &["weight", "vote"]),
        Problem::Weighted11 => (
            &["budget", "default_price"],
            &["budget"],
            &["weight", "vote", "prices"],
            &["weight", "vote"],
        ),
    }
}

fn check_schema(doc: &InstanceDoc) -> Result<(), FormatError> {
    let (top, top_req, voter, voter_req) = schema(doc.problem);
    let schema_err = |msg: String| Err(FormatError::Schema(msg));
    if let Some(v) = doc.version {
        if v != FORMAT_VERSION {
            return schema_err(format!("version: unsupported format version {v}"));
        }
    }
    let present = doc.present();
    for field in &present {
        if !top.contains(field) {
            return schema_err(format!("{field}: not allowed for problem {}", doc.problem));
        }
    }
    for field in top_req {
        if !present.contains(field) {
            return schema_err(format!("missing field `{field}` required for problem {}", doc.problem));
        }
    }
    for (i, v) in doc.voters.iter().enumerate() {
        let present = v.present();
        for field in &present {
            if !voter.contains(field) {
                return schema_err(format!("voters[{i}].{field}: not allowed for problem {}", doc.problem));
            }
        }
        for field in voter_req {
            if !present.contains(field) {
                return schema_err(format!("voters[{i}]: missing field `{field}`"));
            }
        }
    }
    for (field, value) in doc.numbers() {
        if value > MAX_EXACT {
            return schema_err(format!("{field}: {value} exceeds 2^63-1"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Parsing

fn invalid<T>(msg: String) -> Result<T, FormatError> {
    Err(FormatError::Validation(msg))
}

fn candidate(cands: &CandidateSet, label: &str, field: &str) -> Result<usize, FormatError> {
    match cands.index_of(label) {
        Some(i) => Ok(i),
        None => invalid(format!("{field}: unknown candidate {label:?}")),
    }
}

/// Slot index of a label: candidates first, then `_` when free-form.
fn slot(cands: &CandidateSet, free_form: bool, label: &str, field: &str) -> Result<usize, FormatError> {
    if free_form && label == UNASSIGNED {
        return Ok(cands.len());
    }
    candidate(cands, label, field)
}

fn slot_label(cands: &CandidateSet, slot: usize) -> &str {
    if slot == cands.len() {
        UNASSIGNED
    } else {
        cands.name(slot)
    }
}

fn price_table(
    cands: &CandidateSet,
    free_form: bool,
    default: u64,
    prices: Option<&IndexMap<String, u64>>,
    field: &str,
) -> Result<PriceTable, FormatError> {
    let slots = cands.len() + usize::from(free_form);
    let mut table = PriceTable::uniform(slots, default);
    for (key, &price) in prices.into_iter().flatten() {
        let Some((from, to)) = key.split_once("->") else {
            return invalid(format!("{field}: key {key:?} is not of the form \"from->to\""));
        };
        let at = format!("{field}.{key}");
        let (from, to) = (slot(cands, free_form, from, &at)?, slot(cands, free_form, to, &at)?);
        if from == to && price != 0 {
            return invalid(format!("{at}: diagonal price must be 0, found {price}"));
        }
        table
            .set(from, to, price)
            .map_err(|e| FormatError::Validation(format!("{at}: {e}")))?;
    }
    Ok(table)
}

fn candidates(doc: &InstanceDoc) -> Result<CandidateSet, FormatError> {
    for label in &doc.candidates {
        if label == UNASSIGNED || label.contains("->") {
            return invalid(format!("candidates: label {label:?} is reserved"));
        }
    }
    CandidateSet::new(doc.candidates.iter().cloned())
        .map_err(|e| FormatError::Validation(format!("candidates: {e}")))
}

fn weighted_votes(doc: &InstanceDoc, cands: &CandidateSet) -> Result<Vec<WeightedVote>, FormatError> {
    doc.voters
        .iter()
        .enumerate()
        .map(|(i, v)| {
            Ok(WeightedVote {
                weight: v.weight.unwrap_or(1),
                vote: candidate(cands, v.vote.as_deref().unwrap_or_default(), &format!("voters[{i}].vote"))?,
            })
        })
        .collect()
}

/// Parses an instance document.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            FormatError::Schema(e.to_string())
        } else {
            FormatError::Syntax(e.to_string())
        }
    })?;
    check_schema(&doc)?;
    let cands = candidates(&doc)?;
    let preferred = candidate(&cands, &doc.preferred, "preferred")?;
    if doc.voters.is_empty() {
        return invalid("voters: at least one voter required".into());
    }
    let weighted_err = |e: briberon_core::weighted::WeightedError| FormatError::Validation(e.to_string());
    let instance = match doc.problem {
        Problem::Kb | Problem::KbFreeform => {
            let free_form = doc.problem == Problem::KbFreeform;
            let mut ballots = Vec::new();
            let mut tables = Vec::new();
            for (i, v) in doc.voters.iter().enumerate() {
                let mut points = vec![0; cands.len()];
                for (label, &x) in v.points.iter().flatten() {
                    points[candidate(&cands, label, &format!("voters[{i}].points"))?] = x;
                }
                ballots.push(Ballot::free_form(points, v.unassigned.unwrap_or(0)));
                tables.push(price_table(
                    &cands,
                    free_form,
                    doc.default_price.unwrap_or(0),
                    v.prices.as_ref(),
                    &format!("voters[{i}].prices"),
                )?);
            }
            let (k, b) = (doc.k.unwrap_or(0), doc.b.unwrap_or(0));
            let election = Election::new(cands, k, b, free_form, ballots)
                .map_err(|e| FormatError::Validation(e.to_string()))?;
            let inst = KbInstance::new(election, preferred, tables, doc.budget)
                .map_err(|e| FormatError::Validation(e.to_string()))?;
            Instance::Kb(inst)
        }
        Problem::PluralityWeighted => {
            let voters = doc
                .voters
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    Ok(PluralityVoter {
                        weight: v.weight.unwrap_or(1),
                        vote: candidate(&cands, v.vote.as_deref().unwrap_or_default(), &format!("voters[{i}].vote"))?,
                        price: v.price.unwrap_or(0),
                    })
                })
                .collect::<Result<_, FormatError>>()?;
            let inst = WeightedPluralityInstance {
                candidates: cands,
                preferred,
                voters,
                budget: doc.budget,
            };
            inst.validate().map_err(weighted_err)?;
            Instance::PluralityWeighted(inst)
        }
        Problem::ApprovalPrime => {
            let mut voters = Vec::new();
            for (i, v) in doc.voters.iter().enumerate() {
                let mut approvals = vec![false; cands.len()];
                for label in v.approvals.iter().flatten() {
                    let c = candidate(&cands, label, &format!("voters[{i}].approvals"))?;
                    if std::mem::replace(&mut approvals[c], true) {
                        return invalid(format!("voters[{i}].approvals: {label:?} listed twice"));
                    }
                }
                let flip_prices = v.flip_prices.clone().unwrap_or_default();
                if flip_prices.len() != cands.len() {
                    return invalid(format!(
                        "voters[{i}].flip_prices: expected {} entries, found {}",
                        cands.len(),
                        flip_prices.len()
                    ));
                }
                voters.push(ApprovalVoter {
                    weight: v.weight.unwrap_or(1),
                    approvals,
                    flip_prices,
                });
            }
            let inst = ApprovalPrimeInstance {
                candidates: cands,
                preferred,
                voters,
                budget: doc.budget,
            };
            inst.validate().map_err(weighted_err)?;
            Instance::ApprovalPrime(inst)
        }
        Problem::NegativePlurality => {
            let inst = NegativeBriberyInstance {
                voters: weighted_votes(&doc, &cands)?,
                candidates: cands,
                preferred,
                budget: doc.budget.unwrap_or(0),
            };
            inst.validate().map_err(weighted_err)?;
            Instance::NegativePlurality(inst)
        }
        Problem::Weighted11 => {
            let voters = weighted_votes(&doc, &cands)?;
            let prices = doc
                .voters
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    price_table(
                        &cands,
                        false,
                        doc.default_price.unwrap_or(0),
                        v.prices.as_ref(),
                        &format!("voters[{i}].prices"),
                    )
                })
                .collect::<Result<_, _>>()?;
            let inst = Weighted11Instance {
                candidates: cands,
                preferred,
                voters,
                prices,
                budget: doc.budget.unwrap_or(0),
            };
            inst.validate().map_err(weighted_err)?;
            Instance::Weighted11(inst)
        }
    };
    Ok(instance)
}

// ---------------------------------------------------------------------------
// Serialization

/// Nonzero off-diagonal entries, row-major.
fn price_map(cands: &CandidateSet, table: &PriceTable) -> Option<IndexMap<String, u64>> {
    let mut out = IndexMap::new();
    for from in 0..table.slots() {
        for to in 0..table.slots() {
            let price = table.get(from, to);
            if from != to && price != 0 {
                out.insert(format!("{}->{}", slot_label(cands, from), slot_label(cands, to)), price);
            }
        }
    }
    (!out.is_empty()).then_some(out)
}

fn to_doc(instance: &Instance) -> InstanceDoc {
    let cands = instance.candidates();
    let base = |preferred: usize, budget: Option<u64>, voters: Vec<VoterDoc>| InstanceDoc {
        version: Some(FORMAT_VERSION),
        problem: instance.problem(),
        candidates: cands.names().to_vec(),
        preferred: cands.name(preferred).to_string(),
        k: None,
        b: None,
        budget,
        default_price: None,
        voters,
    };
    let vote = |c: usize| Some(cands.name(c).to_string());
    match instance {
        Instance::Kb(inst) => {
            let e = &inst.election;
            let voters = e
                .ballots
                .iter()
                .zip(&inst.prices)
                .map(|(ballot, table)| {
                    let points: IndexMap<String, u64> = ballot
                        .points
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x > 0)
                        .map(|(c, &x)| (cands.name(c).to_string(), x))
                        .collect();
                    VoterDoc {
                        points: Some(points),
                        unassigned: e.free_form.then_some(ballot.unassigned),
                        prices: price_map(cands, table),
                        ..VoterDoc::default()
                    }
                })
                .collect();
            InstanceDoc {
                k: Some(e.k),
                b: Some(e.b),
                ..base(inst.preferred, inst.budget, voters)
            }
        }
        Instance::PluralityWeighted(inst) => {
            let voters = inst
                .voters
                .iter()
                .map(|v| VoterDoc {
                    weight: Some(v.weight),
                    vote: vote(v.vote),
                    price: Some(v.price),
                    ..VoterDoc::default()
                })
                .collect();
            base(inst.preferred, inst.budget, voters)
        }
        Instance::ApprovalPrime(inst) => {
            let voters = inst
                .voters
                .iter()
                .map(|v| VoterDoc {
                    weight: Some(v.weight),
                    approvals: Some(
                        (0..cands.len())
                            .filter(|&c| v.approvals[c])
                            .map(|c| cands.name(c).to_string())
                            .collect(),
                    ),
                    flip_prices: Some(v.flip_prices.clone()),
                    ..VoterDoc::default()
                })
                .collect();
            base(inst.preferred, inst.budget, voters)
        }
        Instance::NegativePlurality(inst) => {
            let voters = inst
                .voters
                .iter()
                .map(|v| VoterDoc {
                    weight: Some(v.weight),
                    vote: vote(v.vote),
                    ..VoterDoc::default()
                })
                .collect();
            base(inst.preferred, Some(inst.budget), voters)
        }
        Instance::Weighted11(inst) => {
            let voters = inst
                .voters
                .iter()
                .zip(&inst.prices)
                .map(|(v, table)| VoterDoc {
                    weight: Some(v.weight),
                    vote: vote(v.vote),
                    prices: price_map(cands, table),
                    ..VoterDoc::default()
                })
                .collect();
            base(inst.preferred, Some(inst.budget), voters)
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn serialize_instance(instance: &Instance) -> String {
    pretty(&to_doc(instance))
}

// ---------------------------------------------------------------------------
// Reports

/// `count` points of `voter` moved between two slots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveEntry {
    pub voter: usize,
    pub from: String,
    pub to: String,
    pub count: u64,
}

/// A plurality voter switching its whole vote.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RevoteEntry {
    pub voter: usize,
    pub from: String,
    pub to: String,
}

/// One approval flip; `approve` is the new state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlipEntry {
    pub voter: usize,
    pub candidate: String,
    pub approve: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlanEntry {
    Move(MoveEntry),
    Revote(RevoteEntry),
    Flip(FlipEntry),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub version: u32,
    pub problem: Problem,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    pub feasible: bool,
    /// Cost of the reported optimum (for `fptas`, of the returned solution).
    pub optimal_cost: Option<u64>,
    pub plan: Vec<PlanEntry>,
    pub post_scores: IndexMap<String, u64>,
    pub winners: Vec<String>,
}

pub fn serialize_report(report: &Report) -> String {
    pretty(report)
}

pub fn parse_report(text: &str) -> Result<Report, FormatError> {
    serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            FormatError::Schema(e.to_string())
        } else {
            FormatError::Syntax(e.to_string())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = r#"{
  "problem": "kb",
  "candidates": ["p", "a"],
  "preferred": "p",
  "k": 1,
  "b": 1,
  "voters": [
    {"points": {"a": 1}, "prices": {"a->p": 3, "p->a": 7}},
    {"points": {"a": 1}, "prices": {"a->p": 5, "p->a": 7}},
    {"points": {"p": 1}, "prices": {"a->p": 4, "p->a": 7}}
  ]
}"#;

    #[test]
    fn minimal_kb_document() {
        let inst = parse_instance(
            r#"{"problem": "kb", "candidates": ["p"], "preferred": "p", "k": 1, "b": 1,
                "voters": [{"points": {"p": 1}}]}"#,
        )
        .unwrap();
        assert_eq!(inst.problem(), Problem::Kb);
    }

    #[test]
    fn instance_round_trip() {
        let inst = parse_instance(EX1).unwrap();
        let text = serialize_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        assert_eq!(serialize_instance(&parse_instance(&text).unwrap()), text);
    }

    #[test]
    fn missing_preferred_is_named() {
        let err = parse_instance(&EX1.replace("\"preferred\": \"p\",", "")).unwrap_err();
        assert!(matches!(&err, FormatError::Schema(m) if m.contains("preferred") && m.contains("line")));
    }

    #[test]
    fn diagonal_price_rejected() {
        let err = parse_instance(&EX1.replacen("\"a->p\": 3", "\"p->p\": 1", 1)).unwrap_err();
        assert!(matches!(&err, FormatError::Validation(m) if m.contains("diagonal price must be 0")), "{err}");
    }

    #[test]
    fn unknown_field_rejected() {
        let err = parse_instance(&EX1.replace("\"k\": 1", "\"k\": 1, \"colour\": 2")).unwrap_err();
        assert!(matches!(&err, FormatError::Schema(m) if m.contains("colour")));
        let err = parse_instance(&EX1.replace("\"k\": 1", "\"k\": 1, \"flip_prices\": [1]")).unwrap_err();
        assert!(matches!(err, FormatError::Schema(_)));
    }

    #[test]
    fn syntax_errors_are_distinct() {
        assert!(matches!(parse_instance("{\"problem\": "), Err(FormatError::Syntax(_))));
        assert!(matches!(parse_instance("[]"), Err(FormatError::Schema(_))));
    }

    #[test]
    fn field_restrictions_per_problem() {
        let err = parse_instance(&EX1.replace("{\"points\": {\"p\": 1}", "{\"points\": {\"p\": 1}, \"unassigned\": 0"))
            .unwrap_err();
        assert!(matches!(&err, FormatError::Schema(m) if m.contains("voters[2].unassigned")), "{err}");
        let err = parse_instance(&EX1.replace("\"k\": 1,", "")).unwrap_err();
        assert!(matches!(&err, FormatError::Schema(m) if m.contains("`k`")));
    }

    #[test]
    fn oversized_integers_rejected() {
        let err = parse_instance(&EX1.replace("\"a->p\": 3", "\"a->p\": 9223372036854775808")).unwrap_err();
        assert!(matches!(&err, FormatError::Schema(m) if m.contains("2^63-1")), "{err}");
    }

    #[test]
    fn freeform_and_weighted_round_trip() {
        let docs = [
            r#"{"problem": "kb_freeform", "candidates": ["p", "a"], "preferred": "p", "k": 2, "b": 1,
                "default_price": 2,
                "voters": [{"points": {"a": 1}, "unassigned": 1, "prices": {"_->p": 1}}]}"#,
            r#"{"problem": "plurality_weighted", "candidates": ["p", "a"], "preferred": "p",
                "voters": [{"weight": 4, "vote": "a", "price": 10}, {"weight": 1, "vote": "p", "price": 0}]}"#,
            r#"{"problem": "approval_prime", "candidates": ["p", "a"], "preferred": "p", "budget": 3,
                "voters": [{"weight": 3, "approvals": ["a"], "flip_prices": [4, 1]}]}"#,
            r#"{"problem": "negative_plurality", "candidates": ["p", "a", "b"], "preferred": "p", "budget": 1,
                "voters": [{"weight": 1, "vote": "a"}, {"weight": 1, "vote": "a"}, {"weight": 1, "vote": "p"}]}"#,
            r#"{"problem": "weighted_11", "candidates": ["p", "a"], "preferred": "p", "budget": 1,
                "voters": [{"weight": 1, "vote": "a", "prices": {"a->p": 2}}]}"#,
        ];
        for doc in docs {
            let inst = parse_instance(doc).unwrap();
            let text = serialize_instance(&inst);
            assert_eq!(parse_instance(&text).unwrap(), inst, "{text}");
        }
    }

    #[test]
    fn report_round_trip() {
        let report = Report {
            version: FORMAT_VERSION,
            problem: Problem::Kb,
            method: "flow".into(),
            epsilon: None,
            budget: Some(3),
            feasible: true,
            optimal_cost: Some(3),
            plan: vec![
                PlanEntry::Move(MoveEntry {
                    voter: 0,
                    from: "a".into(),
                    to: "p".into(),
                    count: 1,
                }),
                PlanEntry::Revote(RevoteEntry {
                    voter: 1,
                    from: "a".into(),
                    to: "p".into(),
                }),
                PlanEntry::Flip(FlipEntry {
                    voter: 2,
                    candidate: "a".into(),
                    approve: false,
                }),
            ],
            post_scores: [("p".to_string(), 2), ("a".to_string(), 1)].into_iter().collect(),
            winners: vec!["p".into()],
        };
        let text = serialize_report(&report);
        assert_eq!(parse_report(&text).unwrap(), report);
        assert_eq!(serialize_report(&parse_report(&text).unwrap()), text);
    }
}
