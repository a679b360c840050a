use std::collections::{BTreeSet, HashSet};

use super::{GoalInferenceRule, GoalSet};

/// A maximal goal set closed under the rules.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Extension {
    pub goals: GoalSet,
}

/// All extensions of `rules` under `beliefs`, sorted.
///
/// Explores every order of rule application. A rule applies to the
/// current goal set when its beliefs hold, its supporting goals are in the
/// set and none of its conflicting goals is. A branch is abandoned when a
/// later goal contradicts an earlier rule's conflicts; a branch where no
/// unapplied rule applies yields an extension.
pub fn compute_extensions(rules: &[GoalInferenceRule], beliefs: &BTreeSet<String>) -> Vec<Extension> {
    let mut found = BTreeSet::new();
    let mut seen = HashSet::new();
    let start = Node {
        goals: GoalSet::new(),
        applied: vec![false; rules.len()],
    };
    explore(rules, beliefs, start, &mut seen, &mut found);
    found.into_iter().collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Node {
    goals: GoalSet,
    applied: Vec<bool>,
}

fn applicable(rule: &GoalInferenceRule, beliefs: &BTreeSet<String>, goals: &GoalSet) -> bool {
    rule.beliefs.is_subset(beliefs)
        && rule.positive.is_subset(goals)
        && rule.negative.is_disjoint(goals)
}

fn explore(
    rules: &[GoalInferenceRule],
    beliefs: &BTreeSet<String>,
    node: Node,
    seen: &mut HashSet<Node>,
    found: &mut BTreeSet<Extension>,
) {
    if !seen.insert(node.clone()) {
        return;
    }
    let mut closed = true;
    for (i, rule) in rules.iter().enumerate() {
        if node.applied[i] || !applicable(rule, beliefs, &node.goals) {
            continue;
        }
        closed = false;
        let mut next = node.clone();
        next.applied[i] = true;
        next.goals.insert(rule.derived.clone());
        let consistent = rules
            .iter()
            .zip(&next.applied)
            .filter(|(_, a)| **a)
            .all(|(r, _)| r.negative.is_disjoint(&next.goals));
        if consistent {
            explore(rules, beliefs, next, seen, found);
        }
    }
    if closed {
        found.insert(Extension { goals: node.goals });
    }
}
