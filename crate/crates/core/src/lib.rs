//! Belief-desire-intention agents for integrated air defense command and
//! control.
//!
//! The crate is organised bottom-up:
//!
//! - [`kernel`]: a small BDI runtime (beliefsets, event queue, three-stage
//!   plan selection).
//! - [`srdr`]: the surveillance-radar agent that detects jamming from the
//!   normalized target difference and switches radar modes.
//! - [`lccc`]: the local command-and-control agent that ranks threat
//!   clusters and pairs interceptors with attacking aircraft.
//! - [`goal_logic`]: goal inference rules, default-logic extensions and
//!   conflict checks over agent goal states.
//! - [`stats`]: count generators, reference distributions and the
//!   Kolmogorov-Smirnov harness.
//! - [`sim`]: scenario files and the discrete-time world loop.
//! - [`log`]: the line-oriented event log shared by the agents and the
//!   simulator.

pub mod goal_logic;
pub mod kernel;
pub mod lccc;
pub mod log;
pub mod sim;
pub mod srdr;
pub mod stats;

pub use goal_logic::{
    check_conflicts, compute_extensions, validate_trace, Extension, GoalFormula, GoalInferenceRule,
    RuleSet, TraceEntry, TraceReport,
};
pub use kernel::{Action, AgentState, Belief, Event, KernelError, PlanInstance, PlanSpec, Value};
pub use lccc::{
    allocate_interceptors, package_label, plan_rank, prioritize_clusters, Aircraft, Allocation,
    Assignment, Cluster, Interceptor, LcccAgent, LcccConfig, Mission, PackageLabel, Point,
    PriorityEntry, RankBreakdown, VavpPoint,
};
pub use log::{LogRecord, RecordKind};
pub use sim::{load_scenario, run_simulation, Scenario, SimOutcome};
pub use srdr::{
    classify_ntd, compute_ntd, Classification, JointMode, RadarMode, RadarObservation, SrdrAgent,
    SrdrConfig,
};
pub use stats::{
    generate_counts, ks_statistic, ntd_series, reference_cdf, run_ntd_experiment,
    DistributionSpec, ExperimentReport, KsResult, ReferenceDist,
};
