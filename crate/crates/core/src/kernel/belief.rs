use std::collections::BTreeMap;

use indexmap::IndexMap;

use super::Value;

/// One tuple in a named beliefset.
///
/// `key` identifies the tuple inside its beliefset; asserting another
/// belief with the same key values replaces it.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief {
    pub beliefset: String,
    pub key: Vec<(String, Value)>,
    pub value: Vec<(String, Value)>,
    pub tick: u64,
}

impl Belief {
    pub fn new(beliefset: impl Into<String>, tick: u64) -> Self {
        Belief {
            beliefset: beliefset.into(),
            key: Vec::new(),
            value: Vec::new(),
            tick,
        }
    }

    pub fn key(mut self, name: impl Into<String>, v: impl Into<Value>) -> Self {
        self.key.push((name.into(), v.into()));
        self
    }

    pub fn value(mut self, name: impl Into<String>, v: impl Into<Value>) -> Self {
        self.value.push((name.into(), v.into()));
        self
    }

    pub fn key_values(&self) -> Vec<Value> {
        self.key.iter().map(|(_, v)| v.clone()).collect()
    }

    /// Looks a field up by name among key and value fields.
    pub fn field(&self, name: &str) -> Option<&Value> {
        self.key
            .iter()
            .chain(self.value.iter())
            .find(|(k, _)| k == name)
            .map(|(_, v)| v)
    }

    /// Key and value fields as one named map, the shape carried by
    /// auto-posted events.
    pub fn fields(&self) -> BTreeMap<String, Value> {
        self.key
            .iter()
            .chain(self.value.iter())
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

/// Tuples of one beliefset in insertion order. A replaced tuple moves to
/// the end so ticks stay non-decreasing along the order.
#[derive(Debug, Clone, Default)]
pub struct Beliefset {
    tuples: IndexMap<Vec<Value>, Belief>,
}

impl Beliefset {
    pub fn get(&self, key: &[Value]) -> Option<&Belief> {
        self.tuples.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Belief> {
        self.tuples.values()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn last(&self) -> Option<&Belief> {
        self.tuples.last().map(|(_, b)| b)
    }

    fn insert(&mut self, belief: Belief) {
        let key = belief.key_values();
        debug_assert!(
            self.last().is_none_or(|b| b.tick <= belief.tick),
            "belief ticks must not go backwards"
        );
        self.tuples.shift_remove(&key);
        self.tuples.insert(key, belief);
    }
}

#[derive(Debug, Clone, Default)]
pub struct BeliefBase {
    sets: BTreeMap<String, Beliefset>,
}

impl BeliefBase {
    pub fn set(&self, name: &str) -> Option<&Beliefset> {
        self.sets.get(name)
    }

    /// Iterates a beliefset; empty when it has never been written.
    pub fn query<'a>(&'a self, name: &str) -> impl Iterator<Item = &'a Belief> + 'a {
        self.sets.get(name).into_iter().flat_map(|s| s.iter())
    }

    pub fn get(&self, name: &str, key: &[Value]) -> Option<&Belief> {
        self.sets.get(name).and_then(|s| s.get(key))
    }

    pub(crate) fn insert(&mut self, belief: Belief) {
        self.sets
            .entry(belief.beliefset.clone())
            .or_default()
            .insert(belief);
    }

    pub(crate) fn clear(&mut self, name: &str) {
        self.sets.remove(name);
    }
}
