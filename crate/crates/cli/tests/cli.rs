use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const RULES: &str = "\
Jammed | FrequencyHopping | => SwitchOff
Jammed | SwitchOff | => FrequencyHopping
| | FrequencyHopping => SenseMode
| | SwitchOff => SleepMode
!G{SwitchOff & FrequencyHopping}
!G{SenseMode & SleepMode}
!G{SwitchOff & SenseMode}
!G{FrequencyHopping & SleepMode}
";

fn iad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iad"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn baseline() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/scenarios/baseline.scn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_writes_log_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = iad(&["simulate", "--scenario", s(&baseline()), "--seed", "3", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let log = fs::read_to_string(dir.path().join("events.log")).unwrap();
    assert!(log.lines().all(|l| l.split('\t').count() == 4));
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("seed=3\n"));
    assert!(report.contains("valid=true\n"));
}

#[test]
fn simulate_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = iad(&["simulate", "--scenario", s(&baseline()), "--seed", "9", "--ticks", "20", "--out", s(d.path())]);
        assert_eq!(o.status.code(), Some(0));
    }
    let la = fs::read(a.path().join("events.log")).unwrap();
    let lb = fs::read(b.path().join("events.log")).unwrap();
    assert_eq!(la, lb);
    assert!(String::from_utf8(la).unwrap().lines().all(|l| l.split('\t').next().unwrap().parse::<u64>().unwrap() < 20));
}

#[test]
fn simulate_parse_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let scn = dir.path().join("bad.scn");
    fs::write(&scn, "[WORLD]\nwidth=wide\n").unwrap();
    let o = iad(&["simulate", "--scenario", s(&scn), "--seed", "1", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_invalid_scenario_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let scn = dir.path().join("novavp.scn");
    fs::write(&scn, "[WORLD]\nsimulation_time=5\n[CLUSTER]\nC1 x=1 y=1 mission=Strike count=1\n").unwrap();
    let o = iad(&["simulate", "--scenario", s(&scn), "--seed", "1", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ntd_eval_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let o = iad(&["ntd-eval", "--dist", "normal:20,10", "--n", "200", "--seed", "4", "--csv", s(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("total=200\n"));
    let field = |k: &str| -> usize {
        out.lines().find_map(|l| l.strip_prefix(k)).unwrap().parse().unwrap()
    };
    assert_eq!(field("no_action=") + field("jamming="), 200);
    assert!(fs::read_to_string(&csv).unwrap().starts_with("x,f_emp,f_ref\n"));
}

#[test]
fn ntd_eval_bad_dist_exits_2() {
    let o = iad(&["ntd-eval", "--dist", "normal:20", "--n", "10", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ks_test_reads_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    fs::write(&csv, "x\n-1\n0\n1\n").unwrap();
    let o = iad(&["ks-test", "--sample", s(&csv), "--ref", "studentt:2", "--alpha", "0.05"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("n=3\n"));
    assert!(out.contains("d_stat=0.211325\n"));
    assert!(out.contains("reject=false\n"));
}

#[test]
fn ks_test_bad_cell_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    fs::write(&csv, "x\n1\nabc\n").unwrap();
    let o = iad(&["ks-test", "--sample", s(&csv), "--ref", "studentt:2", "--alpha", "0.05"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn allocate_prints_pairings() {
    let o = iad(&["allocate", "--scenario", s(&baseline())]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("instances=6\n"));
    let pairs: Vec<&str> = out.lines().filter(|l| l.contains("\tassignment\t")).collect();
    assert_eq!(pairs.len(), 2);
    assert!(pairs[0].contains("target=C1-f1;interceptor=I3"));
}

#[test]
fn verify_goals_accepts_clean_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = iad(&["simulate", "--scenario", s(&baseline()), "--seed", "5", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let rules = dir.path().join("rules.gir");
    fs::write(&rules, RULES).unwrap();
    let o = iad(&["verify-goals", "--log", s(&out.join("events.log")), "--rules", s(&rules)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid=true\n"));
}

#[test]
fn verify_goals_flags_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("events.log");
    fs::write(
        &log,
        "0\tsrdr\tmode\tmodes=SenseMode\n1\tsrdr\tmode\tmodes=SwitchOff,SenseMode\n",
    )
    .unwrap();
    let rules = dir.path().join("rules.gir");
    fs::write(&rules, RULES).unwrap();
    let o = iad(&["verify-goals", "--log", s(&log), "--rules", s(&rules)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first_offending_tick=1\n"));
}

#[test]
fn verify_goals_malformed_log_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("events.log");
    fs::write(&log, "zero\tsrdr\tmode\tmodes=SenseMode\n").unwrap();
    let rules = dir.path().join("rules.gir");
    fs::write(&rules, RULES).unwrap();
    let o = iad(&["verify-goals", "--log", s(&log), "--rules", s(&rules)]);
    assert_eq!(o.status.code(), Some(2));
}
