use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{Belief, BeliefBase, Event, Value};
use crate::log::RecordKind;

/// Variable binding produced by a plan's context query.
pub type Binding = BTreeMap<String, Value>;

pub const MAX_RANK: i64 = 9;

type RelevanceFn = Arc<dyn Fn(&Event) -> bool + Send + Sync>;
type ContextFn = Arc<dyn Fn(&BeliefBase, &Event) -> Vec<Binding> + Send + Sync>;
type RankFn = Arc<dyn Fn(&Event, &Binding) -> i64 + Send + Sync>;
type BodyFn = Arc<dyn Fn(&Event, &Binding, &BeliefBase) -> Vec<Action> + Send + Sync>;

/// One step of a plan body, executed in order by the kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    /// Insert or replace a belief, optionally posting an event carrying
    /// its fields.
    Assert {
        belief: Belief,
        auto_post: Option<String>,
    },
    /// Drop every tuple of a beliefset.
    Clear { beliefset: String },
    /// Enqueue an event on the agent's own queue.
    Post {
        kind: String,
        payload: BTreeMap<String, Value>,
    },
    /// Append a record to the agent's log.
    Record {
        kind: RecordKind,
        payload: Vec<(String, Value)>,
    },
}

impl Action {
    pub fn post<I, K, V>(kind: impl Into<String>, fields: I) -> Action
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<Value>,
    {
        Action::Post {
            kind: kind.into(),
            payload: fields
                .into_iter()
                .map(|(k, v)| (k.into(), v.into()))
                .collect(),
        }
    }
}

/// A plan in the agent's repository.
///
/// Selection runs in three stages: `handles` plus `relevance` filter on the
/// event alone, `context` expands the survivors into bindings over the
/// beliefs, and `rank` orders the resulting instances.
#[derive(Clone)]
pub struct PlanSpec {
    pub name: String,
    pub handles: String,
    relevance: RelevanceFn,
    context: ContextFn,
    rank: RankFn,
    body: BodyFn,
}

impl PlanSpec {
    pub fn new(name: impl Into<String>, handles: impl Into<String>) -> Self {
        PlanSpec {
            name: name.into(),
            handles: handles.into(),
            relevance: Arc::new(|_| true),
            context: Arc::new(|_, _| vec![Binding::new()]),
            rank: Arc::new(|_, _| 0),
            body: Arc::new(|_, _, _| Vec::new()),
        }
    }

    pub fn relevance(mut self, f: impl Fn(&Event) -> bool + Send + Sync + 'static) -> Self {
        self.relevance = Arc::new(f);
        self
    }

    pub fn context(
        mut self,
        f: impl Fn(&BeliefBase, &Event) -> Vec<Binding> + Send + Sync + 'static,
    ) -> Self {
        self.context = Arc::new(f);
        self
    }

    pub fn rank(mut self, f: impl Fn(&Event, &Binding) -> i64 + Send + Sync + 'static) -> Self {
        self.rank = Arc::new(f);
        self
    }

    pub fn body(
        mut self,
        f: impl Fn(&Event, &Binding, &BeliefBase) -> Vec<Action> + Send + Sync + 'static,
    ) -> Self {
        self.body = Arc::new(f);
        self
    }

    pub fn is_relevant(&self, event: &Event) -> bool {
        self.handles == event.kind && (self.relevance)(event)
    }

    pub fn bindings(&self, beliefs: &BeliefBase, event: &Event) -> Vec<Binding> {
        (self.context)(beliefs, event)
    }

    /// Rank clamped to `[0, 9]`.
    pub fn rank_of(&self, event: &Event, binding: &Binding) -> u8 {
        (self.rank)(event, binding).clamp(0, MAX_RANK) as u8
    }

    pub fn execute(&self, event: &Event, binding: &Binding, beliefs: &BeliefBase) -> Vec<Action> {
        (self.body)(event, binding, beliefs)
    }
}

impl fmt::Debug for PlanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlanSpec")
            .field("name", &self.name)
            .field("handles", &self.handles)
            .finish_non_exhaustive()
    }
}

/// A plan together with one context binding.
///
/// `precedence = 9 - rank`; the selector prefers higher precedence, so the
/// smallest rank wins.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanInstance {
    pub plan_index: usize,
    pub plan: String,
    pub binding: Binding,
    pub rank: u8,
    pub precedence: u8,
}

impl PlanInstance {
    pub(crate) fn new(plan_index: usize, plan: &PlanSpec, binding: Binding, rank: u8) -> Self {
        debug_assert!(rank as i64 <= MAX_RANK);
        PlanInstance {
            plan_index,
            plan: plan.name.clone(),
            binding,
            rank,
            precedence: MAX_RANK as u8 - rank,
        }
    }
}
