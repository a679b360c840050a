//! Surveillance-radar agent.
//!
//! Each tick the radar compares the number of targets it detects against
//! the previous tick. The normalized target difference
//!
//! ```text
//! NTD = |n_t - n_{t+1}| / n_t
//! ```
//!
//! is asserted into `beliefset-1`, which posts `ev1`. Four plans react:
//!
//! | plan    | handles | fires when              | effect                         |
//! |---------|---------|-------------------------|--------------------------------|
//! | plan-1  | ev1     | NTD < theta_low         | {SenseMode}                    |
//! | plan-2  | ev1     | NTD >= theta_low        | posts ev2 (radar is jammed)    |
//! | plan-3  | ev2     | theta_low <= NTD <= theta_high | {FrequencyHopping, SenseMode} |
//! | plan-4  | ev2     | NTD > theta_high        | {SwitchOff, SleepMode}         |

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kernel::{Action, AgentState, Belief, Event, KernelError, PlanSpec, Value};
use crate::log::{LogRecord, RecordKind};

pub const NTD_SET: &str = "beliefset-1";
pub const COUNT_SET: &str = "counts";
pub const MODE_SET: &str = "mode";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RadarMode {
    SenseMode,
    SleepMode,
    SwitchOff,
    FrequencyHopping,
}

impl RadarMode {
    pub const ALL: [RadarMode; 4] = [
        RadarMode::SenseMode,
        RadarMode::SleepMode,
        RadarMode::SwitchOff,
        RadarMode::FrequencyHopping,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RadarMode::SenseMode => "SenseMode",
            RadarMode::SleepMode => "SleepMode",
            RadarMode::SwitchOff => "SwitchOff",
            RadarMode::FrequencyHopping => "FrequencyHopping",
        }
    }
}

impl fmt::Display for RadarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The radar's joint state. Only these three mode sets are reachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JointMode {
    /// {SenseMode}
    Sensing,
    /// {FrequencyHopping, SenseMode}
    Hopping,
    /// {SwitchOff, SleepMode}
    Off,
}

impl JointMode {
    pub fn modes(self) -> &'static [RadarMode] {
        match self {
            JointMode::Sensing => &[RadarMode::SenseMode],
            JointMode::Hopping => &[RadarMode::FrequencyHopping, RadarMode::SenseMode],
            JointMode::Off => &[RadarMode::SwitchOff, RadarMode::SleepMode],
        }
    }

    /// Mode names as goal atoms.
    pub fn goals(self) -> BTreeSet<String> {
        self.modes().iter().map(|m| m.as_str().to_string()).collect()
    }

    fn tag(self) -> &'static str {
        match self {
            JointMode::Sensing => "sensing",
            JointMode::Hopping => "hopping",
            JointMode::Off => "off",
        }
    }

    fn from_tag(s: &str) -> Option<JointMode> {
        match s {
            "sensing" => Some(JointMode::Sensing),
            "hopping" => Some(JointMode::Hopping),
            "off" => Some(JointMode::Off),
            _ => None,
        }
    }
}

impl fmt::Display for JointMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.modes().iter().map(|m| m.as_str()).collect();
        f.write_str(&names.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    NoAction,
    FrequencyHopping,
    SwitchOff,
}

impl Classification {
    pub fn is_jamming(self) -> bool {
        self != Classification::NoAction
    }

    pub fn joint_mode(self) -> JointMode {
        match self {
            Classification::NoAction => JointMode::Sensing,
            Classification::FrequencyHopping => JointMode::Hopping,
            Classification::SwitchOff => JointMode::Off,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::NoAction => "NoAction",
            Classification::FrequencyHopping => "FrequencyHopping",
            Classification::SwitchOff => "SwitchOff",
        })
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("invalid radar thresholds: need 0 < theta_low ({low}) < theta_high ({high}) < 1")]
pub struct ConfigError {
    pub low: f64,
    pub high: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrdrConfig {
    pub theta_low: f64,
    pub theta_high: f64,
}

impl Default for SrdrConfig {
    fn default() -> Self {
        SrdrConfig {
            theta_low: 0.5,
            theta_high: 0.75,
        }
    }
}

impl SrdrConfig {
    pub fn new(theta_low: f64, theta_high: f64) -> Result<Self, ConfigError> {
        let cfg = SrdrConfig { theta_low, theta_high };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let ok = 0.0 < self.theta_low && self.theta_low < self.theta_high && self.theta_high < 1.0;
        if ok {
            Ok(())
        } else {
            Err(ConfigError {
                low: self.theta_low,
                high: self.theta_high,
            })
        }
    }
}

/// Normalized target difference between consecutive detection counts.
///
/// A zero previous count saturates: `0` when the next count is also zero,
/// `1` otherwise.
pub fn compute_ntd(n_t: u64, n_next: u64) -> f64 {
    if n_t == 0 {
        return if n_next == 0 { 0.0 } else { 1.0 };
    }
    n_t.abs_diff(n_next) as f64 / n_t as f64
}

/// Lower bound closed, upper bound closed: `theta_low` itself is jamming
/// and `theta_high` itself still hops.
pub fn classify_ntd(ntd: f64, cfg: &SrdrConfig) -> Classification {
    debug_assert!(ntd >= 0.0, "NTD is a magnitude");
    if ntd < cfg.theta_low {
        Classification::NoAction
    } else if ntd <= cfg.theta_high {
        Classification::FrequencyHopping
    } else {
        Classification::SwitchOff
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadarObservation {
    pub tick: u64,
    pub n_t: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SrdrStep {
    pub tick: u64,
    pub ntd: Option<f64>,
    pub classification: Option<Classification>,
    pub mode: JointMode,
    pub events: Vec<Event>,
    pub log: Vec<LogRecord>,
}

#[derive(Debug, Clone)]
pub struct SrdrAgent {
    state: AgentState,
    cfg: SrdrConfig,
}

impl SrdrAgent {
    pub fn new(agent_id: impl Into<String>, cfg: SrdrConfig) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let mut state = AgentState::new(agent_id);
        for plan in plans(cfg) {
            state
                .add_plan(plan)
                .expect("radar plan names are distinct");
        }
        Ok(SrdrAgent { state, cfg })
    }

    pub fn config(&self) -> &SrdrConfig {
        &self.cfg
    }

    pub fn state(&self) -> &AgentState {
        &self.state
    }

    pub fn mode(&self) -> JointMode {
        self.state
            .beliefs()
            .get(MODE_SET, &[Value::from("radar")])
            .and_then(|b| b.field("joint"))
            .and_then(Value::as_str)
            .and_then(JointMode::from_tag)
            .unwrap_or(JointMode::Sensing)
    }

    fn previous_count(&self) -> Option<u64> {
        self.state
            .beliefs()
            .set(COUNT_SET)
            .and_then(|s| s.last())
            .and_then(|b| b.field("n"))
            .and_then(Value::as_i64)
            .map(|n| n as u64)
    }

    /// One clock step: record the count, derive NTD against the previous
    /// count, and let the plans settle the joint mode.
    pub fn step(&mut self, obs: RadarObservation) -> Result<SrdrStep, KernelError> {
        let previous = self.previous_count();
        self.state.assert_belief(
            Belief::new(COUNT_SET, obs.tick)
                .key("clock", obs.tick)
                .value("n", obs.n_t),
            None,
        );
        let ntd = previous.map(|prev| compute_ntd(prev, obs.n_t));
        if let Some(ntd) = ntd {
            self.state.assert_belief(
                Belief::new(NTD_SET, obs.tick)
                    .key("clock", obs.tick)
                    .value("NTD", ntd),
                Some("ev1"),
            );
        }

        let out = self.state.run_tick(obs.tick)?;
        let mode = self.mode();
        let classification = ntd.map(|_| match mode {
            JointMode::Sensing => Classification::NoAction,
            JointMode::Hopping => Classification::FrequencyHopping,
            JointMode::Off => Classification::SwitchOff,
        });

        let mut log = out.log;
        let mut rec = LogRecord::new(obs.tick, self.state.agent_id(), RecordKind::Mode)
            .with("modes", mode);
        if let Some(x) = ntd {
            rec = rec.with("ntd", Value::Real(x));
        }
        if let Some(c) = classification {
            rec = rec.with("class", c);
        }
        log.push(rec);

        Ok(SrdrStep {
            tick: obs.tick,
            ntd,
            classification,
            mode,
            events: out.events,
            log,
        })
    }
}

fn set_mode(mode: JointMode, tick: u64) -> Action {
    Action::Assert {
        belief: Belief::new(MODE_SET, tick)
            .key("unit", "radar")
            .value("joint", mode.tag()),
        auto_post: None,
    }
}

fn ntd_of(e: &Event) -> f64 {
    e.real("NTD").expect("radar events carry NTD")
}

fn plans(cfg: SrdrConfig) -> Vec<PlanSpec> {
    let SrdrConfig { theta_low, theta_high } = cfg;
    vec![
        PlanSpec::new("plan-1", "ev1")
            .relevance(move |e| ntd_of(e) < theta_low)
            .body(|e, _, _| vec![set_mode(JointMode::Sensing, e.tick)]),
        PlanSpec::new("plan-2", "ev1")
            .relevance(move |e| ntd_of(e) >= theta_low)
            .body(|e, _, _| {
                vec![Action::post(
                    "ev2",
                    [
                        ("NTD", Value::Real(ntd_of(e))),
                        ("clock", Value::from(e.tick)),
                    ],
                )]
            }),
        PlanSpec::new("plan-3", "ev2")
            .relevance(move |e| (theta_low..=theta_high).contains(&ntd_of(e)))
            .body(|e, _, _| vec![set_mode(JointMode::Hopping, e.tick)]),
        PlanSpec::new("plan-4", "ev2")
            .relevance(move |e| ntd_of(e) > theta_high)
            .body(|e, _, _| vec![set_mode(JointMode::Off, e.tick)]),
    ]
}

impl FromStr for RadarMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RadarMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown radar mode {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goal_logic::{check_conflicts, RuleSet};
    use proptest::prelude::*;

    #[test]
    fn ntd_examples() {
        assert_eq!(compute_ntd(20, 20), 0.0);
        assert!((compute_ntd(20, 8) - 0.6).abs() < 1e-12);
        assert_eq!(compute_ntd(0, 5), 1.0);
        assert_eq!(compute_ntd(0, 0), 0.0);
        // unbounded above
        assert_eq!(compute_ntd(10, 35), 2.5);
    }

    #[test]
    fn classify_examples() {
        let cfg = SrdrConfig::default();
        assert_eq!(classify_ntd(0.4, &cfg), Classification::NoAction);
        assert_eq!(classify_ntd(0.6, &cfg), Classification::FrequencyHopping);
        assert_eq!(classify_ntd(0.8, &cfg), Classification::SwitchOff);
        assert_eq!(classify_ntd(0.5, &cfg), Classification::FrequencyHopping);
        assert_eq!(classify_ntd(0.75, &cfg), Classification::FrequencyHopping);
    }

    #[test]
    fn rejects_bad_thresholds() {
        assert!(SrdrConfig::new(0.75, 0.5).is_err());
        assert!(SrdrConfig::new(0.0, 0.5).is_err());
        assert!(SrdrConfig::new(0.5, 1.0).is_err());
    }

    fn two_ticks(prev: u64, now: u64) -> SrdrStep {
        let mut a = SrdrAgent::new("srdr", SrdrConfig::default()).unwrap();
        let first = a.step(RadarObservation { tick: 0, n_t: prev }).unwrap();
        assert_eq!(first.mode, JointMode::Sensing);
        assert!(first.ntd.is_none() && first.events.is_empty());
        a.step(RadarObservation { tick: 1, n_t: now }).unwrap()
    }

    fn kinds(step: &SrdrStep) -> Vec<&str> {
        step.events.iter().map(|e| e.kind.as_str()).collect()
    }

    #[test]
    fn small_drop_keeps_sensing() {
        let s = two_ticks(20, 19);
        assert_eq!(s.mode, JointMode::Sensing);
        assert_eq!(kinds(&s), ["ev1"]);
    }

    #[test]
    fn moderate_drop_hops() {
        let s = two_ticks(20, 8);
        assert_eq!(s.mode, JointMode::Hopping);
        assert_eq!(s.classification, Some(Classification::FrequencyHopping));
        assert_eq!(kinds(&s), ["ev1", "ev2"]);
    }

    #[test]
    fn severe_drop_switches_off() {
        let s = two_ticks(20, 2);
        assert_eq!(s.mode, JointMode::Off);
        assert_eq!(s.mode.to_string(), "SwitchOff,SleepMode");
        assert_eq!(kinds(&s), ["ev1", "ev2"]);
    }

    #[test]
    fn no_action_recovers_from_switch_off() {
        let mut a = SrdrAgent::new("srdr", SrdrConfig::default()).unwrap();
        let counts = [20, 2, 2, 20, 21];
        let modes: Vec<_> = counts
            .iter()
            .enumerate()
            .map(|(t, &n)| a.step(RadarObservation { tick: t as u64, n_t: n }).unwrap().mode)
            .collect();
        assert_eq!(
            modes,
            [
                JointMode::Sensing,
                JointMode::Off,
                JointMode::Sensing,
                JointMode::Off,
                JointMode::Sensing
            ]
        );
    }

    #[test]
    fn one_mode_record_per_tick() {
        let s = two_ticks(20, 8);
        let modes: Vec<_> = s.log.iter().filter(|r| r.kind == RecordKind::Mode).collect();
        assert_eq!(modes.len(), 1);
        assert_eq!(modes[0].get("modes"), Some("FrequencyHopping,SenseMode"));
        assert_eq!(modes[0].get("ntd"), Some("0.600000"));
    }

    proptest! {
        #[test]
        fn scale_invariant(a in 1u64..10_000, b in 0u64..10_000, k in 1u64..50) {
            prop_assert!((compute_ntd(k * a, k * b) - compute_ntd(a, b)).abs() < 1e-12);
        }

        #[test]
        fn partition_is_exhaustive(ntd in 0.0f64..10.0) {
            let cfg = SrdrConfig::default();
            let c = classify_ntd(ntd, &cfg);
            let hits = [ntd < 0.5, (0.5..=0.75).contains(&ntd), ntd > 0.75];
            prop_assert_eq!(hits.iter().filter(|h| **h).count(), 1);
            prop_assert_eq!(c.is_jamming(), ntd >= 0.5);
        }

        #[test]
        fn response_is_monotone(n_t in 1u64..200, d1 in 0u64..400, d2 in 0u64..400) {
            // smaller |n_t - n_next| never yields a more severe class
            let cfg = SrdrConfig::default();
            let (lo, hi) = (d1.min(d2), d1.max(d2));
            let c_lo = classify_ntd(compute_ntd(n_t, n_t + lo), &cfg);
            let c_hi = classify_ntd(compute_ntd(n_t, n_t + hi), &cfg);
            prop_assert!(c_lo <= c_hi);
        }

        #[test]
        fn every_reached_state_is_conflict_free(counts in prop::collection::vec(0u64..60, 1..40)) {
            let rules = RuleSet::radar();
            let mut a = SrdrAgent::new("srdr", SrdrConfig::default()).unwrap();
            for (t, n) in counts.into_iter().enumerate() {
                let step = a.step(RadarObservation { tick: t as u64, n_t: n }).unwrap();
                prop_assert!(check_conflicts(&step.mode.goals(), &rules.forbidden).is_empty());
                if let (Some(ntd), Some(c)) = (step.ntd, step.classification) {
                    prop_assert_eq!(c, classify_ntd(ntd, &SrdrConfig::default()));
                }
            }
        }
    }
}
