use std::collections::HashSet;

use super::{Interceptor, PriorityEntry};

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub target_id: String,
    pub interceptor_id: String,
    pub cluster_id: String,
    pub d2: f64,
    pub tick: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unassigned {
    pub target_id: String,
    pub cluster_id: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Allocation {
    pub assignments: Vec<Assignment>,
    pub unassigned: Vec<Unassigned>,
}

/// Greedy pairing in priority order.
///
/// Clusters are visited in the given order and their aircraft in
/// engagement order; each aircraft takes the nearest still-available
/// interceptor (ties by interceptor id). Aircraft left over once the
/// interceptors run out are reported as unassigned.
pub fn allocate_interceptors(
    priority: &[PriorityEntry],
    interceptors: &[Interceptor],
    tick: u64,
) -> Allocation {
    let mut taken: HashSet<&str> = interceptors
        .iter()
        .filter(|i| !i.available)
        .map(|i| i.id.as_str())
        .collect();
    let mut engaged: HashSet<&str> = HashSet::new();
    let mut out = Allocation::default();

    for entry in priority {
        // All aircraft in a cluster share its location, so one sorted
        // candidate list serves the whole cluster.
        let mut candidates: Vec<(f64, &Interceptor)> = interceptors
            .iter()
            .filter(|i| !taken.contains(i.id.as_str()))
            .map(|i| (entry.location.distance(&i.location), i))
            .collect();
        candidates.sort_by(|(da, a), (db, b)| da.total_cmp(db).then_with(|| a.id.cmp(&b.id)));
        let mut candidates = candidates.into_iter();

        for target in &entry.members {
            if !engaged.insert(target.id.as_str()) {
                continue;
            }
            match candidates.next() {
                Some((d2, icp)) => {
                    taken.insert(icp.id.as_str());
                    out.assignments.push(Assignment {
                        target_id: target.id.clone(),
                        interceptor_id: icp.id.clone(),
                        cluster_id: entry.cluster_id.clone(),
                        d2,
                        tick,
                    });
                }
                None => out.unassigned.push(Unassigned {
                    target_id: target.id.clone(),
                    cluster_id: entry.cluster_id.clone(),
                }),
            }
        }
    }
    out
}
