//! Minimal BDI runtime.
//!
//! An [`AgentState`] owns named beliefsets, a plan repository and a FIFO
//! event queue. Each tick drains the queue; for every event the kernel
//! keeps plans that handle the event kind and pass their relevance
//! predicate, expands them into instances through their context query,
//! and runs the instance with the highest precedence (`9 - rank`).

mod agent;
mod belief;
mod event;
mod plan;
mod value;

use thiserror::Error;

pub use agent::{AgentState, TickOutput, CYCLE_GUARD};
pub use belief::{Belief, BeliefBase, Beliefset};
pub use event::Event;
pub use plan::{Action, Binding, PlanInstance, PlanSpec, MAX_RANK};
pub use value::Value;

use crate::log::LogRecord;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("plan {0:?} already in repository")]
    DuplicatePlan(String),
    #[error("tick {got} does not follow tick {previous}")]
    TickOutOfOrder { previous: u64, got: u64 },
    #[error("more than {limit} events in tick {tick}; plan loop suspected")]
    CycleGuardExceeded {
        tick: u64,
        limit: usize,
        partial_log: Vec<LogRecord>,
    },
}
