//! Command-line surface. Exit codes: 0 solved or feasible, 1 infeasible or
//! decision no, 2 input error, 3 internal error.

use std::io::Write;
use std::path::{Path, PathBuf};

use briberon_core::testkit::{gen_random, GenKind, GenParams, Generated, RuleKind};
use briberon_core::weighted::{reduce_negative_bribery, Eps};
use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{self, Suite};
use crate::format::{parse_instance, serialize_instance, serialize_report, Instance};
use crate::solve::{solve, CliError, Method, SolveOptions};

#[derive(Debug, Parser)]
#[command(name = "briberon", version, about = "Optimal and approximate bribery in (k,b)-elections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance file and print a report.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Approximation parameter N/D for `--method fptas`.
        #[arg(long)]
        epsilon: Option<String>,
        /// Overrides the budget in the file.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a negative_plurality instance to a weighted_11 instance.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit a random instance file.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum)]
        kind: GenArg,
        /// Approval count for `--kind t-approval`.
        #[arg(long, default_value_t = 3)]
        t: u64,
        #[arg(long, value_parser = parse_range)]
        m: Option<(u64, u64)>,
        #[arg(long, value_parser = parse_range)]
        n: Option<(u64, u64)>,
        #[arg(long, value_parser = parse_range)]
        k: Option<(u64, u64)>,
        #[arg(long, value_parser = parse_range)]
        b: Option<(u64, u64)>,
        #[arg(long, value_parser = parse_range)]
        weight: Option<(u64, u64)>,
        #[arg(long, value_parser = parse_range)]
        price: Option<(u64, u64)>,
        /// Free-form ballots (utility kind).
        #[arg(long)]
        free_form: bool,
        /// Lift the desk-scale size caps.
        #[arg(long)]
        uncapped: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a timing suite over the seeded corpus.
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenArg {
    Plurality,
    Veto,
    Approval,
    TApproval,
    Utility,
    PluralityWeighted,
    ApprovalPrime,
    NegativePlurality,
    Weighted11,
}

/// `lo..hi` (inclusive) or a single value.
fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let num = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
    match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            Ok((lo, hi))
        }
        None => num(s).map(|v| (v, v)),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}

fn gen_params(cmd: &Command) -> Result<GenParams, CliError> {
    let Command::Gen {
        seed,
        kind,
        t,
        m,
        n,
        k,
        b,
        weight,
        price,
        free_form,
        uncapped,
        ..
    } = cmd
    else {
        unreachable!()
    };
    let kind = match kind {
        GenArg::Plurality => GenKind::Kb(RuleKind::Plurality),
        GenArg::Veto => GenKind::Kb(RuleKind::Veto),
        GenArg::Approval => GenKind::Kb(RuleKind::Approval),
        GenArg::TApproval => GenKind::Kb(RuleKind::TApproval(*t)),
        GenArg::Utility => GenKind::Kb(RuleKind::Utility),
        GenArg::PluralityWeighted => GenKind::PluralityWeighted,
        GenArg::ApprovalPrime => GenKind::ApprovalPrime,
        GenArg::NegativePlurality => GenKind::Negative,
        GenArg::Weighted11 => GenKind::Weighted11,
    };
    let mut p = GenParams::new(*seed, kind);
    let size = |r: (u64, u64)| (r.0 as usize, r.1 as usize);
    if let GenKind::Kb(RuleKind::TApproval(t)) = kind {
        p.m = (t as usize, (t as usize).max(4));
        p.k = (t, t);
    }
    p.m = m.map(size).unwrap_or(p.m);
    p.n = n.map(size).unwrap_or(p.n);
    p.k = k.unwrap_or(p.k);
    p.b = b.unwrap_or(p.b);
    p.weight = weight.unwrap_or(p.weight);
    p.price = price.unwrap_or(p.price);
    p.free_form = *free_form;
    p.capped = !uncapped;
    Ok(p)
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Solve {
            file,
            method,
            epsilon,
            budget,
            out,
        } => {
            let instance = load(file)?;
            let epsilon = epsilon
                .as_deref()
                .map(str::parse::<Eps>)
                .transpose()
                .map_err(|e| CliError::Input(e.to_string()))?;
            let opts = SolveOptions {
                method: *method,
                epsilon,
                budget: *budget,
            };
            let report = solve(&instance, &opts)?;
            emit(&serialize_report(&report), out.as_deref(), stdout)?;
            Ok(if report.feasible { 0 } else { 1 })
        }
        Command::Reduce { file, out } => {
            let Instance::NegativePlurality(inst) = load(file)? else {
                return Err(CliError::Input(format!(
                    "{}: reduce expects a negative_plurality instance",
                    file.display()
                )));
            };
            let reduced = reduce_negative_bribery(&inst)?;
            emit(&serialize_instance(&Instance::Weighted11(reduced)), Some(out), stdout)?;
            Ok(0)
        }
        Command::Gen { out, .. } => {
            let params = gen_params(&cli.command)?;
            let generated = gen_random(&params).map_err(|e| CliError::Input(e.to_string()))?;
            let instance = match generated {
                Generated::Kb(i) => Instance::Kb(i),
                Generated::PluralityWeighted(i) => Instance::PluralityWeighted(i),
                Generated::ApprovalPrime(i) => Instance::ApprovalPrime(i),
                Generated::Negative(i) => Instance::NegativePlurality(i),
                Generated::Weighted11(i) => Instance::Weighted11(i),
            };
            emit(&serialize_instance(&instance), out.as_deref(), stdout)?;
            Ok(0)
        }
        Command::Bench { suite, seed } => {
            let rows = bench::run(*suite, *seed).map_err(CliError::Internal)?;
            emit(&bench::table(&rows), None, stdout)?;
            Ok(0)
        }
    }
}

/// Runs one command, writing the report or table to `stdout` and
/// diagnostics to `stderr`. Returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "briberon: {e}");
            e.exit_code()
        }
    }
}
