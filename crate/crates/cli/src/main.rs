//! `iad`: run scenarios, evaluate NTD statistics and check goal traces.
//!
//! Exit status is 0 on success, 1 when a scenario is invalid or a goal
//! trace has violations, and 2 when an input cannot be parsed.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use iad_core::goal_logic::{GoalError, TraceEntry};
use iad_core::log::{read_log, write_log, LogError};
use iad_core::sim::{load_scenario, run_simulation, ScenarioError, SimError};
use iad_core::srdr::SrdrConfig;
use iad_core::stats::{
    generate_counts, ks_curve, ks_statistic, ntd_series, ExperimentReport, StatsError,
};
use iad_core::{
    allocate_interceptors, prioritize_clusters, validate_trace, DistributionSpec, LogRecord,
    RecordKind, ReferenceDist, RuleSet, TraceReport,
};

#[derive(Parser)]
#[command(name = "iad", version, about = "BDI air-defense simulator and evaluation harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write the event log and report.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Override the scenario's simulation_time.
        #[arg(long)]
        ticks: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate counts, classify their NTD series and report KS distances.
    NtdEval {
        /// Source family, e.g. normal:20,10
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Write (x, F_emp, F_ref) of the NTD series against --ref.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long = "ref", default_value = "halft:2")]
        reference: String,
    },
    /// One-sample KS test of a CSV column against a reference family.
    KsTest {
        #[arg(long)]
        sample: PathBuf,
        /// Reference, e.g. studentt:2 or gamma:12.06,0.08,rate
        #[arg(long = "ref")]
        reference: String,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Column index (0-based) or header name.
        #[arg(long, default_value = "0")]
        column: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Prioritize clusters and pair interceptors for one tick.
    Allocate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 0)]
        tick: u64,
    },
    /// Check the radar mode trace in a log against goal inference rules.
    VerifyGoals {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        rules: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code_for(&err)
        }
    }
}

/// 2 for anything that failed to parse, 1 otherwise.
fn exit_code_for(err: &anyhow::Error) -> ExitCode {
    let parse = err.chain().any(|e| {
        matches!(e.downcast_ref::<ScenarioError>(), Some(ScenarioError::Parse { .. }))
            || matches!(e.downcast_ref::<LogError>(), Some(LogError::Parse { .. }))
            || matches!(e.downcast_ref::<GoalError>(), Some(GoalError::Parse { .. }))
            || matches!(e.downcast_ref::<StatsError>(), Some(StatsError::Parse(_)))
            || e.downcast_ref::<csv::Error>().is_some()
            || e.downcast_ref::<InputError>().is_some()
            || matches!(
                e.downcast_ref::<SimError>(),
                Some(SimError::Scenario(ScenarioError::Parse { .. }))
            )
    });
    if parse {
        ExitCode::from(2)
    } else {
        ExitCode::from(1)
    }
}

/// Malformed user input that none of the library parsers own.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Simulate { scenario, seed, ticks, out } => simulate(&scenario, seed, ticks, &out),
        Command::NtdEval { dist, n, seed, csv, reference } => {
            ntd_eval(&dist, n, seed, csv.as_deref(), &reference)
        }
        Command::KsTest { sample, reference, alpha, column, csv } => {
            ks_test(&sample, &reference, alpha, &column, csv.as_deref())
        }
        Command::Allocate { scenario, tick } => allocate(&scenario, tick),
        Command::VerifyGoals { log, rules } => verify_goals(&log, &rules),
    }
}

fn write_records(path: &Path, records: &[LogRecord]) -> Result<()> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(f);
    write_log(&mut w, records)?;
    w.flush()?;
    Ok(())
}

fn validation_summary(v: &TraceReport) -> String {
    let outside = v.findings.iter().filter(|f| f.outside_extensions).count();
    let mut s = format!(
        "ticks_checked={}\nviolations={}\noutside_extensions={}\nvalid={}\n",
        v.ticks_checked,
        v.violation_count(),
        outside,
        v.is_valid()
    );
    if let Some(t) = v.first_offending_tick() {
        s.push_str(&format!("first_offending_tick={t}\n"));
    }
    s
}

fn simulate(path: &Path, seed: u64, ticks: Option<u64>, out: &Path) -> Result<ExitCode> {
    let mut scn = load_scenario(path)?;
    scn.seed = seed;
    if let Some(t) = ticks {
        scn.simulation_time = t;
    }
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let log_path = out.join("events.log");
    let outcome = match run_simulation(&scn) {
        Ok(o) => o,
        Err(SimError::Aborted { tick, message, partial_log }) => {
            write_records(&log_path, &partial_log)?;
            bail!("simulation aborted at tick {tick}: {message} (partial log in {})", log_path.display());
        }
        Err(e) => return Err(e.into()),
    };
    write_records(&log_path, &outcome.log)?;
    let text = format!("{}{}", outcome.report, validation_summary(&outcome.validation));
    fs::write(out.join("report.txt"), &text)?;
    print!("{text}");
    Ok(if outcome.validation.is_valid() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn write_curve(path: &Path, sample: &[f64], reference: &ReferenceDist) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "f_emp", "f_ref"])?;
    for (x, fe, fr) in ks_curve(sample, reference)? {
        w.write_record([x.to_string(), fe.to_string(), fr.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn ntd_eval(dist: &str, n: usize, seed: u64, csv_out: Option<&Path>, reference: &str) -> Result<ExitCode> {
    let spec: DistributionSpec = dist.parse()?;
    let counts = generate_counts(spec, n + 1, seed)?;
    let report = ExperimentReport::from_counts(Some(spec), seed, &counts, &SrdrConfig::default())?;
    print!("{report}");
    if let Some(path) = csv_out {
        let reference: ReferenceDist = reference.parse()?;
        write_curve(path, &ntd_series(&counts)?, &reference)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn read_column(path: &Path, column: &str) -> Result<Vec<f64>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(f));
    let mut index = column.parse::<usize>().ok();
    let mut values = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if index.is_none() {
            // First row names the columns.
            index = rec.iter().position(|h| h == column);
            if index.is_none() {
                return Err(InputError(format!("no column named {column:?}")).into());
            }
            continue;
        }
        let i = index.expect("resolved above");
        let cell = rec
            .get(i)
            .ok_or_else(|| InputError(format!("row {}: no column {i}", row + 1)))?;
        match cell.parse::<f64>() {
            Ok(v) => values.push(v),
            // A leading header row is allowed.
            Err(_) if row == 0 => continue,
            Err(_) => {
                return Err(InputError(format!("row {}: not a number: {cell:?}", row + 1)).into())
            }
        }
    }
    Ok(values)
}

fn ks_test(sample: &Path, reference: &str, alpha: f64, column: &str, csv_out: Option<&Path>) -> Result<ExitCode> {
    let reference: ReferenceDist = reference.parse()?;
    let values = read_column(sample, column)?;
    let r = ks_statistic(&values, &reference, alpha)?;
    println!("ref={reference}");
    println!("n={}", r.n);
    println!("alpha={}", r.alpha);
    println!("d_stat={}", iad_core::log::format_real(r.d_stat));
    println!("critical={}", iad_core::log::format_real(r.critical));
    println!("reject={}", r.reject);
    if let Some(path) = csv_out {
        write_curve(path, &values, &reference)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn allocate(path: &Path, tick: u64) -> Result<ExitCode> {
    let scn = load_scenario(path)?;
    let clusters = scn.clusters_at(tick);
    let pri = prioritize_clusters(&clusters, &scn.vavps, &scn.lccc)?;
    let alloc = allocate_interceptors(&pri.order, &scn.interceptors, tick);
    let mut out = io::stdout().lock();
    writeln!(out, "tick={tick}")?;
    writeln!(out, "instances={}", pri.instances.len())?;
    for (pos, e) in pri.order.iter().enumerate() {
        let rec = LogRecord::new(tick, "lccc", RecordKind::Priority)
            .with("position", pos)
            .with("cluster", &e.cluster_id)
            .with("label", e.label)
            .with("mission", e.mission)
            .with("vavp", &e.vavp_id)
            .with("d1", iad_core::log::format_real(e.d1))
            .with("rank", e.rank)
            .with("precedence", e.precedence);
        writeln!(out, "{rec}")?;
    }
    for a in &alloc.assignments {
        let rec = LogRecord::new(tick, "lccc", RecordKind::Assignment)
            .with("target", &a.target_id)
            .with("interceptor", &a.interceptor_id)
            .with("cluster", &a.cluster_id)
            .with("d2", iad_core::log::format_real(a.d2));
        writeln!(out, "{rec}")?;
    }
    for u in &alloc.unassigned {
        let rec = LogRecord::new(tick, "lccc", RecordKind::Other("unassigned".into()))
            .with("target", &u.target_id)
            .with("cluster", &u.cluster_id);
        writeln!(out, "{rec}")?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Goal trace per agent from the `modes` field of mode records.
fn mode_traces(records: &[LogRecord]) -> BTreeMap<&str, Vec<TraceEntry>> {
    let mut traces: BTreeMap<&str, Vec<TraceEntry>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.kind == RecordKind::Mode) {
        let goals = r
            .get("modes")
            .unwrap_or("")
            .split(',')
            .filter(|g| !g.is_empty());
        traces
            .entry(r.agent.as_str())
            .or_default()
            .push(TraceEntry::new(r.tick, goals));
    }
    traces
}

fn verify_goals(log: &Path, rules: &Path) -> Result<ExitCode> {
    let f = File::open(log).with_context(|| format!("opening {}", log.display()))?;
    let records = read_log(BufReader::new(f))?;
    let text = fs::read_to_string(rules).with_context(|| format!("reading {}", rules.display()))?;
    let rules: RuleSet = text.parse()?;
    let traces = mode_traces(&records);
    if traces.is_empty() {
        return Err(InputError("log contains no mode records".into()).into());
    }
    let mut ok = true;
    for (agent, trace) in traces {
        let report = validate_trace(&trace, &rules.rules, &rules.forbidden)?;
        println!("agent={agent}");
        print!("{}", validation_summary(&report));
        for f in &report.findings {
            let goals: Vec<&str> = f.goals.iter().map(String::as_str).collect();
            let violated: Vec<String> = f.violations.iter().map(ToString::to_string).collect();
            println!(
                "finding tick={} goals={} violations={} outside_extensions={}",
                f.tick,
                goals.join(","),
                violated.join(","),
                f.outside_extensions
            );
        }
        ok &= report.is_valid();
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
