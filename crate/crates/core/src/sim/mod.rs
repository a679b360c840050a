//! Scenario files and the discrete-time world loop.

mod scenario;
mod world;

use thiserror::Error;

pub use scenario::{
    load_scenario, parse_scenario, ClusterTrack, JammingEpisode, Scenario,
    DEFAULT_SIMULATION_TIME, DEFAULT_WORLD_SIZE,
};
pub use world::{jammed_count, run_simulation, SimOutcome, LCCC_ID, SRDR_ID};

use crate::goal_logic::GoalError;
use crate::lccc::LcccError;
use crate::log::LogRecord;
use crate::stats::StatsError;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Lccc(#[from] LcccError),
    #[error(transparent)]
    Goal(#[from] GoalError),
    /// An agent failed mid-run; `partial_log` holds every record written
    /// up to the failure.
    #[error("run aborted at tick {tick}: {message}")]
    Aborted {
        tick: u64,
        message: String,
        partial_log: Vec<LogRecord>,
    },
}
