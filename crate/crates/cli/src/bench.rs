//! Timing suites over the seeded corpora. Every suite also checks its
//! results, so a timing table is only printed for correct runs.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use briberon_core::kb::solve_optimal;
use briberon_core::testkit;
use briberon_core::weighted::{self, Eps};

use crate::corpus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    KbStrict,
    KbFreeform,
    KbScaling,
    Fptas,
    Reduction,
    All,
}

pub struct Row {
    pub suite: &'static str,
    pub case: String,
    pub instances: usize,
    pub elapsed: Duration,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn kb_oracle(suite: &'static str, free_form: bool, count: usize, seed: u64) -> Result<Row, String> {
    let instances = corpus::kb_corpus(free_form, count, seed);
    let (result, elapsed) = timed(|| {
        for (i, (rule, inst)) in instances.iter().enumerate() {
            let flow = solve_optimal(inst).map_err(|e| e.to_string())?.optimal_cost;
            let (oracle, _) = testkit::brute_kb(inst).map_err(|e| e.to_string())?;
            if flow != oracle {
                return Err(format!("instance {i} ({rule:?}): flow {flow} != oracle {oracle}"));
            }
        }
        Ok(())
    });
    result?;
    Ok(Row {
        suite,
        case: "flow vs oracle".into(),
        instances: count,
        elapsed,
    })
}

fn scaling(seed: u64) -> Result<Vec<Row>, String> {
    [5, 10, 20, 50]
        .into_iter()
        .map(|k| {
            let inst = corpus::scaling_instance(k, seed);
            let (out, elapsed) = timed(|| solve_optimal(&inst));
            out.map_err(|e| e.to_string())?;
            Ok(Row {
                suite: "kb-scaling",
                case: format!("m=10 n=50 b=5 k={k}"),
                instances: 1,
                elapsed,
            })
        })
        .collect()
}

fn fptas(seed: u64) -> Result<Vec<Row>, String> {
    let eps = Eps::new(1, 10).map_err(|e| e.to_string())?;
    let plurality = corpus::plurality_corpus(200, seed);
    let approval = corpus::approval_corpus(200, seed);
    let ((), p_time) = timed(|| {
        for inst in &plurality {
            weighted::fptas(inst, eps, weighted::solve_plurality_exact).expect("solvable");
        }
    });
    let ((), a_time) = timed(|| {
        for inst in &approval {
            weighted::fptas(inst, eps, weighted::solve_approval_prime_exact).expect("solvable");
        }
    });
    Ok(vec![
        Row {
            suite: "fptas",
            case: "plurality eps=1/10".into(),
            instances: plurality.len(),
            elapsed: p_time,
        },
        Row {
            suite: "fptas",
            case: "approval' eps=1/10".into(),
            instances: approval.len(),
            elapsed: a_time,
        },
    ])
}

fn reduction(seed: u64) -> Result<Row, String> {
    let instances = corpus::negative_corpus(200, seed);
    let (result, elapsed) = timed(|| {
        for (i, inst) in instances.iter().enumerate() {
            let reduced = weighted::reduce_negative_bribery(inst).map_err(|e| e.to_string())?;
            let lhs = testkit::brute_11_weighted(&reduced).map_err(|e| e.to_string())?.is_some();
            let rhs = testkit::brute_negative(inst).map_err(|e| e.to_string())?.is_some();
            if lhs != rhs {
                return Err(format!("instance {i}: reduced {lhs} != original {rhs}"));
            }
        }
        Ok(())
    });
    result?;
    Ok(Row {
        suite: "reduction",
        case: "decision round trip".into(),
        instances: instances.len(),
        elapsed,
    })
}

pub fn run(suite: Suite, seed: u64) -> Result<Vec<Row>, String> {
    let mut rows = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::KbStrict {
        rows.push(kb_oracle("kb-strict", false, 500, seed)?);
    }
    if all || suite == Suite::KbFreeform {
        rows.push(kb_oracle("kb-freeform", true, 300, seed)?);
    }
    if all || suite == Suite::KbScaling {
        rows.extend(scaling(seed)?);
    }
    if all || suite == Suite::Fptas {
        rows.extend(fptas(seed)?);
    }
    if all || suite == Suite::Reduction {
        rows.push(reduction(seed)?);
    }
    Ok(rows)
}

pub fn table(rows: &[Row]) -> String {
    let mut out = format!("{:<12} {:<24} {:>9} {:>10}\n", "suite", "case", "instances", "seconds");
    for r in rows {
        let _ = writeln!(
            out,
            "{:<12} {:<24} {:>9} {:>10.3}",
            r.suite,
            r.case,
            r.instances,
            r.elapsed.as_secs_f64()
        );
    }
    out
}
