//! Goal inference rules and default-logic extensions.
//!
//! A rule `beliefs | k- | k+ => goal` reads as a default: when every belief
//! atom holds and every supporting goal (`k+`) has been adopted, the agent
//! may adopt `goal` as long as none of the conflicting goals (`k-`) is
//! adopted. Extensions are the goal sets reachable by applying rules until
//! nothing more applies, with every applied rule's conflicts still absent
//! at the end.
//!
//! The radar rule set:
//!
//! ```text
//! Jammed | FrequencyHopping |                  => SwitchOff
//! Jammed | SwitchOff        |                  => FrequencyHopping
//!        |                  | FrequencyHopping => SenseMode
//!        |                  | SwitchOff        => SleepMode
//! ```
//!
//! With the belief `Jammed` it has exactly two extensions,
//! `{SwitchOff, SleepMode}` and `{FrequencyHopping, SenseMode}`.

mod extension;
mod formula;
mod rules;

use std::collections::BTreeSet;

use thiserror::Error;

pub use extension::{compute_extensions, Extension};
pub use formula::{Forbidden, GoalFormula};
pub use rules::{GoalInferenceRule, RuleSet};

pub type GoalSet = BTreeSet<String>;

#[derive(Debug, Error, PartialEq)]
pub enum GoalError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("rule deriving {0:?} lists it among its own conflicting goals")]
    SelfConflict(String),
    #[error("trace ticks must strictly increase ({previous} then {got})")]
    UnorderedTrace { previous: u64, got: u64 },
}

/// Forbidden formulas whose body holds in `goals`.
pub fn check_conflicts<'a>(goals: &GoalSet, forbidden: &'a [Forbidden]) -> Vec<&'a Forbidden> {
    forbidden.iter().filter(|f| f.body.holds(goals)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub tick: u64,
    pub goals: GoalSet,
}

impl TraceEntry {
    pub fn new<I, S>(tick: u64, goals: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TraceEntry {
            tick,
            goals: goals.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TickFinding {
    pub tick: u64,
    pub goals: GoalSet,
    pub violations: Vec<Forbidden>,
    /// The goal state is not contained in any extension.
    pub outside_extensions: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TraceReport {
    pub ticks_checked: usize,
    pub extensions: Vec<Extension>,
    pub findings: Vec<TickFinding>,
}

impl TraceReport {
    pub fn is_valid(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn first_offending_tick(&self) -> Option<u64> {
        self.findings.first().map(|f| f.tick)
    }

    pub fn violation_count(&self) -> usize {
        self.findings.iter().map(|f| f.violations.len()).sum()
    }
}

/// Checks each tick's goal state against the forbidden formulas and the
/// rule set's extensions.
///
/// Extensions are computed once, assuming every belief atom the rules
/// mention: a state is legitimate when some situation the rules can
/// describe would justify it.
pub fn validate_trace(
    trace: &[TraceEntry],
    rules: &[GoalInferenceRule],
    forbidden: &[Forbidden],
) -> Result<TraceReport, GoalError> {
    for w in trace.windows(2) {
        if w[1].tick <= w[0].tick {
            return Err(GoalError::UnorderedTrace {
                previous: w[0].tick,
                got: w[1].tick,
            });
        }
    }
    let beliefs: GoalSet = rules
        .iter()
        .flat_map(|r| r.beliefs.iter().cloned())
        .collect();
    let extensions = compute_extensions(rules, &beliefs);

    let findings = trace
        .iter()
        .filter_map(|entry| {
            let violations: Vec<Forbidden> = check_conflicts(&entry.goals, forbidden)
                .into_iter()
                .cloned()
                .collect();
            let outside = !extensions.iter().any(|e| entry.goals.is_subset(&e.goals));
            (!violations.is_empty() || outside).then(|| TickFinding {
                tick: entry.tick,
                goals: entry.goals.clone(),
                violations,
                outside_extensions: outside,
            })
        })
        .collect();

    Ok(TraceReport {
        ticks_checked: trace.len(),
        extensions,
        findings,
    })
}
