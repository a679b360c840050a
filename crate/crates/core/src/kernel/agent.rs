use std::collections::{BTreeMap, VecDeque};

use super::{Action, Belief, BeliefBase, Event, KernelError, PlanInstance, PlanSpec, Value};
use crate::log::{LogRecord, RecordKind};

/// Events processed per tick before the kernel declares a plan loop.
pub const CYCLE_GUARD: usize = 100;

/// Everything a tick made visible: the events handled (in processing
/// order) and the log records written.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TickOutput {
    pub events: Vec<Event>,
    pub log: Vec<LogRecord>,
}

/// A single agent: beliefs, plan repository and pending events.
#[derive(Debug, Clone)]
pub struct AgentState {
    agent_id: String,
    beliefs: BeliefBase,
    plans: Vec<PlanSpec>,
    pending: VecDeque<Event>,
    next_seq: u64,
    last_tick: Option<u64>,
    journal: Vec<LogRecord>,
}

impl AgentState {
    pub fn new(agent_id: impl Into<String>) -> Self {
        AgentState {
            agent_id: agent_id.into(),
            beliefs: BeliefBase::default(),
            plans: Vec::new(),
            pending: VecDeque::new(),
            next_seq: 0,
            last_tick: None,
            journal: Vec::new(),
        }
    }

    pub fn agent_id(&self) -> &str {
        &self.agent_id
    }

    pub fn beliefs(&self) -> &BeliefBase {
        &self.beliefs
    }

    pub fn plans(&self) -> &[PlanSpec] {
        &self.plans
    }

    pub fn pending(&self) -> impl Iterator<Item = &Event> {
        self.pending.iter()
    }

    pub fn add_plan(&mut self, plan: PlanSpec) -> Result<(), KernelError> {
        if self.plans.iter().any(|p| p.name == plan.name) {
            return Err(KernelError::DuplicatePlan(plan.name));
        }
        self.plans.push(plan);
        Ok(())
    }

    /// Inserts a belief (last writer wins per key) and, when `auto_post` is
    /// given, enqueues an event of that kind carrying the belief's fields.
    pub fn assert_belief(&mut self, belief: Belief, auto_post: Option<&str>) {
        let mut rec = LogRecord::new(belief.tick, &self.agent_id, RecordKind::Belief)
            .with("set", &belief.beliefset);
        for (k, v) in belief.key.iter().chain(belief.value.iter()) {
            rec = rec.with(k, v);
        }
        self.journal.push(rec);
        if let Some(kind) = auto_post {
            let payload = belief.fields();
            let tick = belief.tick;
            self.enqueue(kind.to_string(), payload, tick);
        }
        self.beliefs.insert(belief);
    }

    pub fn clear_beliefset(&mut self, name: &str) {
        self.beliefs.clear(name);
    }

    /// Enqueues an event stamped with this agent as source.
    pub fn post(&mut self, kind: impl Into<String>, payload: BTreeMap<String, Value>, tick: u64) {
        self.enqueue(kind.into(), payload, tick);
    }

    fn enqueue(&mut self, kind: String, payload: BTreeMap<String, Value>, tick: u64) {
        let ev = Event {
            kind,
            payload,
            source: self.agent_id.clone(),
            tick,
            seq: self.next_seq,
        };
        self.next_seq += 1;
        self.pending.push_back(ev);
    }

    /// Every instance that survives relevance and context, in plan
    /// declaration order then binding order.
    pub fn instances(&self, event: &Event) -> Vec<PlanInstance> {
        let mut out = Vec::new();
        for (idx, plan) in self.plans.iter().enumerate() {
            if !plan.is_relevant(event) {
                continue;
            }
            for binding in plan.bindings(&self.beliefs, event) {
                let rank = plan.rank_of(event, &binding);
                out.push(PlanInstance::new(idx, plan, binding, rank));
            }
        }
        out
    }

    /// Picks the surviving instance with the highest precedence; the first
    /// one enumerated wins ties.
    pub fn select_plan(&self, event: &Event) -> Option<PlanInstance> {
        let mut best: Option<PlanInstance> = None;
        for inst in self.instances(event) {
            if best.as_ref().is_none_or(|b| inst.precedence > b.precedence) {
                best = Some(inst);
            }
        }
        best
    }

    /// Drains the queue, running at most one plan instance per event.
    /// Events posted by plan bodies are handled in the same tick.
    pub fn run_tick(&mut self, tick: u64) -> Result<TickOutput, KernelError> {
        if let Some(prev) = self.last_tick {
            if tick <= prev {
                return Err(KernelError::TickOutOfOrder { previous: prev, got: tick });
            }
        }
        self.last_tick = Some(tick);

        let mut events = Vec::new();
        while let Some(event) = self.pending.pop_front() {
            if events.len() == CYCLE_GUARD {
                self.pending.clear();
                let partial_log = std::mem::take(&mut self.journal);
                return Err(KernelError::CycleGuardExceeded {
                    tick,
                    limit: CYCLE_GUARD,
                    partial_log,
                });
            }
            let selected = self.select_plan(&event);
            let kind = if selected.is_some() {
                RecordKind::Event
            } else {
                RecordKind::Dropped
            };
            let mut rec = LogRecord::new(tick, &self.agent_id, kind).with("ev", &event.kind);
            for (k, v) in &event.payload {
                rec = rec.with(k, v);
            }
            if let Some(inst) = &selected {
                rec = rec.with("plan", &inst.plan).with("rank", inst.rank);
            }
            self.journal.push(rec);

            if let Some(inst) = selected {
                let actions =
                    self.plans[inst.plan_index].execute(&event, &inst.binding, &self.beliefs);
                self.apply(actions, tick);
            }
            events.push(event);
        }

        Ok(TickOutput {
            events,
            log: std::mem::take(&mut self.journal),
        })
    }

    fn apply(&mut self, actions: Vec<Action>, tick: u64) {
        for action in actions {
            match action {
                Action::Assert { belief, auto_post } => {
                    self.assert_belief(belief, auto_post.as_deref())
                }
                Action::Clear { beliefset } => self.clear_beliefset(&beliefset),
                Action::Post { kind, payload } => self.enqueue(kind, payload, tick),
                Action::Record { kind, payload } => {
                    let mut rec = LogRecord::new(tick, &self.agent_id, kind);
                    for (k, v) in payload {
                        rec = rec.with(k, v);
                    }
                    self.journal.push(rec);
                }
            }
        }
    }
}
