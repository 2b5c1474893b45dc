use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use briberon::format::{parse_instance, parse_report, serialize_instance, serialize_report, PlanEntry};
use briberon::solve::replay;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_briberon"))
}

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn solve(args: &[&str]) -> Output {
    bin().arg("solve").args(args).output().unwrap()
}

#[test]
fn example_one_within_budget() {
    let out = solve(&[fixture("ex1_kb.json").to_str().unwrap(), "--budget", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = parse_report(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(report.optimal_cost, Some(3));
    assert!(matches!(&report.plan[..], [PlanEntry::Move(m)] if m.voter == 0 && m.from == "a" && m.to == "p" && m.count == 1));
}

#[test]
fn example_one_over_budget() {
    let out = solve(&[fixture("ex1_kb.json").to_str().unwrap(), "--budget", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_file_is_input_error() {
    let out = solve(&["missing.file"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.file"));
}

#[test]
fn malformed_and_invalid_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("ex1_kb.json")).unwrap();
    for (name, body, needle) in [
        ("syntax.json", "{\"problem\": ".to_string(), "syntax error"),
        ("schema.json", text.replace("\"preferred\": \"p\",", ""), "preferred"),
        ("diag.json", text.replacen("\"a->p\": 3", "\"p->p\": 1", 1), "diagonal price must be 0"),
    ] {
        let path = dir.path().join(name);
        std::fs::write(&path, body).unwrap();
        let out = solve(&[path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(String::from_utf8_lossy(&out.stderr).contains(needle), "{name}");
    }
}

#[test]
fn reports_replay_and_repeat() {
    for file in fixtures() {
        let path = file.to_str().unwrap();
        let first = solve(&[path]);
        let second = solve(&[path]);
        assert_eq!(first.stdout, second.stdout, "{path}");
        assert!(matches!(first.status.code(), Some(0 | 1)), "{path}");
        let text = String::from_utf8(first.stdout).unwrap();
        let report = parse_report(&text).unwrap();
        assert_eq!(serialize_report(&report), text);

        let instance = parse_instance(&std::fs::read_to_string(&file).unwrap()).unwrap();
        assert_eq!(replay(&instance, &report.plan).unwrap(), report.post_scores, "{path}");
        let top = report.post_scores.values().max().unwrap();
        let winners: Vec<&String> = report.post_scores.iter().filter(|(_, s)| *s == top).map(|(l, _)| l).collect();
        assert_eq!(winners, report.winners.iter().collect::<Vec<_>>());
    }
}

#[test]
fn methods_agree_on_fixtures() {
    for (name, methods) in [
        ("ex1_kb.json", &["flow", "exact", "oracle"][..]),
        ("veto_kb.json", &["flow", "oracle"][..]),
        ("approval_freeform.json", &["flow", "oracle"][..]),
        ("plurality_weighted.json", &["exact", "oracle"][..]),
        ("approval_prime.json", &["exact", "oracle"][..]),
    ] {
        let costs: Vec<_> = methods
            .iter()
            .map(|m| {
                let out = solve(&[fixture(name).to_str().unwrap(), "--method", m]);
                parse_report(std::str::from_utf8(&out.stdout).unwrap()).unwrap().optimal_cost
            })
            .collect();
        assert!(costs.windows(2).all(|w| w[0] == w[1]), "{name}: {costs:?}");
    }
}

#[test]
fn fptas_reports_epsilon() {
    let out = solve(&[fixture("plurality_weighted.json").to_str().unwrap(), "--method", "fptas", "--epsilon", "1/4"]);
    assert_eq!(out.status.code(), Some(0));
    let report = parse_report(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(report.epsilon.as_deref(), Some("1/4"));
    assert!(report.optimal_cost.unwrap() <= 15);

    let bad = solve(&[fixture("plurality_weighted.json").to_str().unwrap(), "--method", "fptas", "--epsilon", "3/2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn oracle_caps_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    let out = bin()
        .args(["gen", "--seed", "1", "--kind", "utility", "--n", "9", "--uncapped", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = solve(&[path.to_str().unwrap(), "--method", "oracle"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("caps"));
}

#[test]
fn reduce_writes_equivalent_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("reduced.json");
    let out = bin()
        .arg("reduce")
        .arg(fixture("negative.json"))
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let reduced = solve(&[out_path.to_str().unwrap()]);
    let original = solve(&[fixture("negative.json").to_str().unwrap()]);
    assert_eq!(reduced.status.code(), original.status.code());

    let wrong = bin().arg("reduce").arg(fixture("ex1_kb.json")).arg("--out").arg(&out_path).output().unwrap();
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_parseable() {
    for kind in [
        "plurality",
        "veto",
        "approval",
        "t-approval",
        "utility",
        "plurality-weighted",
        "approval-prime",
        "negative-plurality",
        "weighted11",
    ] {
        let run = || bin().args(["gen", "--seed", "17", "--kind", kind]).output().unwrap();
        let (a, b) = (run(), run());
        assert_eq!(a.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
        let text = String::from_utf8(a.stdout).unwrap();
        let inst = parse_instance(&text).unwrap();
        assert_eq!(serialize_instance(&inst), text);
    }
    let impossible = bin()
        .args(["gen", "--seed", "1", "--kind", "utility", "--k", "3", "--m", "1", "--b", "1"])
        .output()
        .unwrap();
    assert_eq!(impossible.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_reports() {
    let path = fixture("veto_kb.json");
    let run = |threads: &str| {
        bin()
            .env("BRIBERON_THREADS", threads)
            .arg("solve")
            .arg(&path)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = solve(&[fixture("ex1_kb.json").to_str().unwrap(), "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(parse_report(&std::fs::read_to_string(path).unwrap()).is_ok());
}
