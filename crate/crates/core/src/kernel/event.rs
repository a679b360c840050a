use std::collections::BTreeMap;

use super::Value;

/// A message on an agent's queue.
///
/// Events are totally ordered by `(tick, source, seq)`; `seq` is the
/// posting agent's emission counter.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub kind: String,
    pub payload: BTreeMap<String, Value>,
    pub source: String,
    pub tick: u64,
    pub seq: u64,
}

impl Event {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.payload.get(name)
    }

    pub fn real(&self, name: &str) -> Option<f64> {
        self.payload.get(name).and_then(Value::as_f64)
    }

    pub fn text(&self, name: &str) -> Option<&str> {
        self.payload.get(name).and_then(Value::as_str)
    }

    pub fn int(&self, name: &str) -> Option<i64> {
        self.payload.get(name).and_then(Value::as_i64)
    }

    pub fn order_key(&self) -> (u64, &str, u64) {
        (self.tick, &self.source, self.seq)
    }
}
