use crate::goal_logic::{check_conflicts, validate_trace, TraceEntry, TraceReport};
use crate::kernel::KernelError;
use crate::lccc::{LcccAgent, LcccError};
use crate::log::{LogRecord, RecordKind};
use crate::srdr::{JointMode, RadarObservation, SrdrAgent, SrdrConfig};
use crate::stats::{CountSampler, ExperimentReport};

use super::{Scenario, SimError};

pub const SRDR_ID: &str = "srdr";
pub const LCCC_ID: &str = "lccc";

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub log: Vec<LogRecord>,
    pub report: ExperimentReport,
    pub validation: TraceReport,
    /// Radar goal state per tick.
    pub modes: Vec<TraceEntry>,
    /// Detection counts after jamming.
    pub counts: Vec<u64>,
}

impl SimOutcome {
    pub fn mode_at(&self, tick: u64) -> Option<JointMode> {
        self.log
            .iter()
            .find(|r| r.tick == tick && r.kind == RecordKind::Mode)
            .and_then(|r| r.get("modes"))
            .and_then(|m| {
                [JointMode::Sensing, JointMode::Hopping, JointMode::Off]
                    .into_iter()
                    .find(|j| j.to_string() == m)
            })
    }
}

/// Detection count after suppression: `floor(n * factor)`.
pub fn jammed_count(n: u64, factor: Option<f64>) -> u64 {
    match factor {
        Some(f) => (n as f64 * f).floor().max(0.0) as u64,
        None => n,
    }
}

fn abort(tick: u64, mut log: Vec<LogRecord>, err: KernelError) -> SimError {
    let message = err.to_string();
    if let KernelError::CycleGuardExceeded { partial_log, .. } = err {
        log.extend(partial_log);
    }
    SimError::Aborted { tick, message, partial_log: log }
}

/// Runs the world loop for `scn.simulation_time` ticks.
///
/// Each tick draws a detection count, applies any jamming episode, steps
/// the radar agent, then the LCCC agent on the visible clusters. Within a
/// tick the records are grouped by agent id so the log stays sorted by
/// `(tick, agent)`; each agent's records keep their emission order.
pub fn run_simulation(scn: &Scenario) -> Result<SimOutcome, SimError> {
    scn.validate()?;
    let cfg = SrdrConfig::default();
    let mut sampler = CountSampler::new(scn.detection, scn.seed)?;
    let mut srdr = SrdrAgent::new(SRDR_ID, cfg).expect("default thresholds are valid");
    let mut lccc = LcccAgent::new(LCCC_ID, scn.lccc);

    let mut log = Vec::new();
    let mut modes = Vec::with_capacity(scn.simulation_time as usize);
    let mut counts = Vec::with_capacity(scn.simulation_time as usize);

    for tick in 0..scn.simulation_time {
        let n = jammed_count(sampler.next_count()?, scn.factor_at(tick));
        counts.push(n);

        let mut records = match srdr.step(RadarObservation { tick, n_t: n }) {
            Ok(step) => {
                let goals = step.mode.goals();
                let mut recs = step.log;
                for c in check_conflicts(&goals, &scn.rules.forbidden) {
                    recs.push(
                        LogRecord::new(tick, SRDR_ID, RecordKind::Violation)
                            .with("constraint", c)
                            .with("modes", step.mode),
                    );
                }
                modes.push(TraceEntry::new(tick, goals));
                recs
            }
            Err(e) => return Err(abort(tick, log, e)),
        };

        let visible = scn.clusters_at(tick);
        if !visible.is_empty() && tick % scn.lccc_cadence == 0 {
            match lccc.step(tick, &visible, &scn.vavps, &scn.interceptors) {
                Ok(step) => records.extend(step.log),
                Err(LcccError::Kernel(e)) => {
                    log.extend(records);
                    return Err(abort(tick, log, e));
                }
                Err(e) => return Err(e.into()),
            }
        }

        records.sort_by(|a, b| a.agent.cmp(&b.agent));
        log.extend(records);
    }

    let validation = validate_trace(&modes, &scn.rules.rules, &scn.rules.forbidden)?;
    let report = if counts.len() < 2 {
        // One tick yields no NTD pair.
        ExperimentReport {
            dist: Some(scn.detection),
            seed: scn.seed,
            total: 0,
            no_action_count: 0,
            fh_count: 0,
            off_count: 0,
            jamming_count: 0,
            ks_against: Vec::new(),
        }
    } else {
        ExperimentReport::from_counts(Some(scn.detection), scn.seed, &counts, &cfg)?
    };
    Ok(SimOutcome {
        log,
        report,
        validation,
        modes,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::log::is_ordered;
    use crate::sim::parse_scenario;

    const SCN: &str = "\
[WORLD]
simulation_time=30
seed=11
[VAVP]
V1 x=100 y=100
[CLUSTER]
C1 x=300 y=300 mission=Strike count=3
[INTERCEPTOR]
I1 x=0 y=0
I2 x=50 y=50
[DETECTION]
dist=normal:20,10
";

    #[test]
    fn jammed_count_floors() {
        assert_eq!(jammed_count(25, Some(0.1)), 2);
        assert_eq!(jammed_count(9, Some(0.1)), 0);
        assert_eq!(jammed_count(9, None), 9);
    }

    #[test]
    fn runs_and_is_ordered() {
        let s = parse_scenario(SCN).unwrap();
        let out = run_simulation(&s).unwrap();
        assert_eq!(out.modes.len(), 30);
        assert!(is_ordered(&out.log));
        assert!(out.validation.is_valid());
        assert_eq!(out.report.total, 29);
        assert_eq!(out.report.jamming_count, out.report.fh_count + out.report.off_count);
        let assigned = out.log.iter().filter(|r| r.kind == RecordKind::Assignment).count();
        assert_eq!(assigned, 2);
    }

    #[test]
    fn single_tick_run_has_empty_report() {
        let s = parse_scenario(&SCN.replace("simulation_time=30", "simulation_time=1")).unwrap();
        let out = run_simulation(&s).unwrap();
        assert_eq!(out.report.total, 0);
        assert_eq!(out.modes.len(), 1);
    }

    #[test]
    fn identical_scenarios_identical_logs() {
        let s = parse_scenario(SCN).unwrap();
        assert_eq!(run_simulation(&s).unwrap().log, run_simulation(&s).unwrap().log);
    }

    #[test]
    fn cadence_skips_ticks() {
        let s = parse_scenario(&SCN.replace("seed=11", "seed=11\nlccc_cadence=5")).unwrap();
        let out = run_simulation(&s).unwrap();
        assert!(out
            .log
            .iter()
            .filter(|r| r.agent == LCCC_ID)
            .all(|r| r.tick % 5 == 0));
    }
}
