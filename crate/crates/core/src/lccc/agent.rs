use std::collections::BTreeMap;

use super::priority::{nearest_vavp, Prioritization, ThreatInstance};
use super::{
    package_label, plan_rank, prioritize_clusters, Aircraft, Assignment, Cluster, Interceptor,
    LcccConfig, LcccError, Mission, PackageLabel, PriorityEntry, Unassigned, ValueTable, VavpPoint,
};
use crate::kernel::{Action, AgentState, Belief, BeliefBase, Binding, Event, PlanSpec, Value};
use crate::log::{LogRecord, RecordKind};

pub(crate) const CLUSTER_VAVP: &str = "cluster_vavp";
pub(crate) const CLUSTER_INTERCEPTOR: &str = "cluster_interceptor";
pub(crate) const AIRCRAFT_RANKING: &str = "aircraft_ranking";
pub(crate) const AIRCRAFT_AVAILABLE: &str = "aircraft_available";
pub(crate) const INTERCEPTOR_AVAILABLE: &str = "interceptor_available";
pub(crate) const CLUSTER_PRIORITY: &str = "cluster_priority";
const PRIORITY_ORDER: &str = "priority_order";

const PER_TICK_SETS: [&str; 5] = [
    CLUSTER_VAVP,
    CLUSTER_INTERCEPTOR,
    AIRCRAFT_RANKING,
    CLUSTER_PRIORITY,
    PRIORITY_ORDER,
];

/// Everything one LCCC tick produced.
#[derive(Debug, Clone, PartialEq)]
pub struct LcccStep {
    pub tick: u64,
    /// Clusters in the order the agent prioritized them.
    pub priority: Vec<PriorityEntry>,
    /// All (cluster, size, mission) hypotheses considered.
    pub instances: Vec<ThreatInstance>,
    pub assignments: Vec<Assignment>,
    pub unassigned: Vec<Unassigned>,
    pub events: Vec<Event>,
    pub log: Vec<LogRecord>,
}

/// LCCC agent on the BDI kernel.
///
/// Per tick it asserts the cluster, interceptor and aircraft beliefsets and
/// posts `ev1`. Cluster prioritization then runs through plan selection:
/// every unprioritized cluster is an instance of `prioritize-cluster`
/// ranked by the threat formula, so the kernel picks them nearest-first.
/// `ev2` walks the priority list and `ev3` commits each pairing.
/// Availability of aircraft and interceptors persists across ticks.
#[derive(Debug, Clone)]
pub struct LcccAgent {
    state: AgentState,
    cfg: LcccConfig,
}

impl LcccAgent {
    pub fn new(id: impl Into<String>, cfg: LcccConfig) -> Self {
        let mut state = AgentState::new(id);
        for plan in plans(cfg.values) {
            state.add_plan(plan).expect("plan names are distinct");
        }
        LcccAgent { state, cfg }
    }

    pub fn config(&self) -> &LcccConfig {
        &self.cfg
    }

    pub fn state(&self) -> &AgentState {
        &self.state
    }

    pub fn interceptor_available(&self, id: &str) -> Option<bool> {
        self.state
            .beliefs()
            .get(INTERCEPTOR_AVAILABLE, &[Value::from(id)])
            .and_then(|b| b.field("available"))
            .and_then(Value::as_bool)
    }

    pub fn aircraft_available(&self, id: &str) -> Option<bool> {
        self.state
            .beliefs()
            .get(AIRCRAFT_AVAILABLE, &[Value::from(id)])
            .and_then(|b| b.field("available"))
            .and_then(Value::as_bool)
    }

    pub fn step(
        &mut self,
        tick: u64,
        clusters: &[Cluster],
        vavps: &[VavpPoint],
        interceptors: &[Interceptor],
    ) -> Result<LcccStep, LcccError> {
        let Prioritization { instances, .. } = prioritize_clusters(clusters, vavps, &self.cfg)?;
        for set in PER_TICK_SETS {
            self.state.clear_beliefset(set);
        }
        self.assert_inputs(tick, clusters, vavps, interceptors);
        self.state
            .post("ev1", BTreeMap::from([("tick".to_string(), Value::from(tick))]), tick);
        let out = self.state.run_tick(tick)?;

        let by_id: BTreeMap<&str, &Cluster> = clusters.iter().map(|c| (c.id.as_str(), c)).collect();
        let mut priority = Vec::new();
        let mut assignments = Vec::new();
        let mut unassigned = Vec::new();
        for rec in &out.log {
            match &rec.kind {
                RecordKind::Priority => {
                    let c = by_id[rec.get("cluster").expect("priority names its cluster")];
                    priority.push(entry_from_record(rec, c, vavps));
                }
                RecordKind::Assignment => assignments.push(Assignment {
                    target_id: field(rec, "target").to_string(),
                    interceptor_id: field(rec, "interceptor").to_string(),
                    cluster_id: field(rec, "cluster").to_string(),
                    d2: field(rec, "d2").parse().expect("d2 is numeric"),
                    tick,
                }),
                RecordKind::Other(k) if k == "unassigned" => unassigned.push(Unassigned {
                    target_id: field(rec, "target").to_string(),
                    cluster_id: field(rec, "cluster").to_string(),
                }),
                _ => {}
            }
        }
        // d2 survives the log only to 6 digits; restore the exact value.
        for a in &mut assignments {
            let c = by_id[a.cluster_id.as_str()];
            let i = interceptors
                .iter()
                .find(|i| i.id == a.interceptor_id)
                .expect("assigned interceptor exists");
            a.d2 = c.location.distance(&i.location);
        }

        Ok(LcccStep {
            tick,
            priority,
            instances,
            assignments,
            unassigned,
            events: out.events,
            log: out.log,
        })
    }

    fn assert_inputs(
        &mut self,
        tick: u64,
        clusters: &[Cluster],
        vavps: &[VavpPoint],
        interceptors: &[Interceptor],
    ) {
        let st = &mut self.state;
        for c in clusters {
            let (vavp, d1) = nearest_vavp(&c.location, vavps).expect("vavps checked non-empty");
            st.assert_belief(
                Belief::new(CLUSTER_VAVP, tick)
                    .key("cluster", c.id.as_str())
                    .value("vavp", vavp.id.as_str())
                    .value("d1", d1),
                None,
            );
            for i in interceptors {
                st.assert_belief(
                    Belief::new(CLUSTER_INTERCEPTOR, tick)
                        .key("cluster", c.id.as_str())
                        .key("interceptor", i.id.as_str())
                        .value("d2", c.location.distance(&i.location)),
                    None,
                );
            }
            for a in &c.members {
                st.assert_belief(
                    Belief::new(AIRCRAFT_RANKING, tick)
                        .key("aircraft", a.id.as_str())
                        .value("cluster", c.id.as_str())
                        .value("ranking", a.ranking),
                    None,
                );
                if st.beliefs().get(AIRCRAFT_AVAILABLE, &[Value::from(a.id.as_str())]).is_none() {
                    st.assert_belief(
                        Belief::new(AIRCRAFT_AVAILABLE, tick)
                            .key("aircraft", a.id.as_str())
                            .value("available", true),
                        None,
                    );
                }
            }
        }
        for i in interceptors {
            let known = st
                .beliefs()
                .get(INTERCEPTOR_AVAILABLE, &[Value::from(i.id.as_str())])
                .and_then(|b| b.field("available"))
                .and_then(Value::as_bool);
            // First sight, or the scenario withdrew a believed-free unit.
            if known.is_none() || (known == Some(true) && !i.available) {
                st.assert_belief(
                    Belief::new(INTERCEPTOR_AVAILABLE, tick)
                        .key("interceptor", i.id.as_str())
                        .value("available", i.available),
                    None,
                );
            }
        }
        for c in clusters {
            let label = package_label(c.aircraft_count(), &self.cfg.trapezoids);
            let (vavp, d1) = nearest_vavp(&c.location, vavps).expect("vavps checked non-empty");
            st.assert_belief(
                Belief::new(CLUSTER_PRIORITY, tick)
                    .key("cluster", c.id.as_str())
                    .value("label", label.as_str())
                    .value("mission", c.mission.as_str())
                    .value("vavp", vavp.id.as_str())
                    .value("d1", d1),
                None,
            );
        }
    }
}

fn field<'a>(rec: &'a LogRecord, key: &str) -> &'a str {
    rec.get(key)
        .unwrap_or_else(|| panic!("{} record lacks {key}", rec.kind))
}

/// Rebuilds an entry from a priority record; `d1` is recomputed since the
/// log keeps only six digits.
fn entry_from_record(rec: &LogRecord, c: &Cluster, vavps: &[VavpPoint]) -> PriorityEntry {
    let label: PackageLabel = field(rec, "label").parse().expect("label written by plan");
    let mission: Mission = field(rec, "mission").parse().expect("mission written by plan");
    let rank: u8 = field(rec, "rank").parse().expect("rank written by plan");
    let (vavp, d1) = nearest_vavp(&c.location, vavps).expect("vavps checked non-empty");
    PriorityEntry {
        cluster_id: c.id.clone(),
        location: c.location,
        label,
        mission,
        vavp_id: vavp.id.clone(),
        d1,
        rank,
        precedence: crate::kernel::MAX_RANK as u8 - rank,
        members: c.engagement_order(),
    }
}

fn text(b: &Binding, k: &str) -> String {
    b[k].as_str().expect("text binding").to_string()
}

fn real(b: &Binding, k: &str) -> f64 {
    b[k].as_f64().expect("numeric binding")
}

fn int(b: &Binding, k: &str) -> i64 {
    b[k].as_i64().expect("integer binding")
}

fn is_available(beliefs: &BeliefBase, set: &str, id: &str) -> bool {
    beliefs
        .get(set, &[Value::from(id)])
        .and_then(|b| b.field("available"))
        .and_then(Value::as_bool)
        .unwrap_or(false)
}

fn cluster_at(beliefs: &BeliefBase, position: i64) -> Option<String> {
    beliefs
        .query(PRIORITY_ORDER)
        .find(|b| b.field("position").and_then(Value::as_i64) == Some(position))
        .and_then(|b| b.field("cluster"))
        .and_then(Value::as_str)
        .map(str::to_string)
}

/// Free aircraft of a cluster in engagement order.
fn free_aircraft(beliefs: &BeliefBase, cluster: &str) -> Vec<Aircraft> {
    let mut out: Vec<Aircraft> = beliefs
        .query(AIRCRAFT_RANKING)
        .filter(|b| b.field("cluster").and_then(Value::as_str) == Some(cluster))
        .filter_map(|b| {
            let id = b.field("aircraft")?.as_str()?;
            let ranking = b.field("ranking")?.as_i64()?;
            is_available(beliefs, AIRCRAFT_AVAILABLE, id).then(|| Aircraft::new(id, ranking as u32))
        })
        .collect();
    out.sort_by(|a, b| a.ranking.cmp(&b.ranking).then_with(|| a.id.cmp(&b.id)));
    out
}

/// Nearest free interceptor to a cluster, ties by id.
fn nearest_free_interceptor(beliefs: &BeliefBase, cluster: &str) -> Option<(String, f64)> {
    beliefs
        .query(CLUSTER_INTERCEPTOR)
        .filter(|b| b.field("cluster").and_then(Value::as_str) == Some(cluster))
        .filter_map(|b| {
            let id = b.field("interceptor")?.as_str()?;
            let d2 = b.field("d2")?.as_f64()?;
            is_available(beliefs, INTERCEPTOR_AVAILABLE, id).then(|| (id.to_string(), d2))
        })
        .min_by(|(ia, da), (ib, db)| da.total_cmp(db).then_with(|| ia.cmp(ib)))
}

fn plans(values: ValueTable) -> Vec<PlanSpec> {
    let prioritize = PlanSpec::new("prioritize-cluster", "ev1")
        .context(|beliefs, _| {
            let mut out: Vec<Binding> = beliefs
                .query(CLUSTER_PRIORITY)
                .filter(|b| {
                    let id = b.field("cluster").cloned().unwrap();
                    beliefs
                        .query(PRIORITY_ORDER)
                        .all(|p| p.field("cluster") != Some(&id))
                })
                .map(|b| b.fields())
                .collect();
            out.sort_by(|a, b| a["cluster"].cmp(&b["cluster"]));
            out
        })
        .rank(move |_, b| {
            let label: PackageLabel = text(b, "label").parse().unwrap();
            let mission: Mission = text(b, "mission").parse().unwrap();
            plan_rank(real(b, "d1"), label, mission, &values).rank as i64
        })
        .body(move |ev, b, beliefs| {
            let label: PackageLabel = text(b, "label").parse().unwrap();
            let mission: Mission = text(b, "mission").parse().unwrap();
            let r = plan_rank(real(b, "d1"), label, mission, &values);
            let position = beliefs.query(PRIORITY_ORDER).count() as i64;
            vec![
                Action::Record {
                    kind: RecordKind::Priority,
                    payload: vec![
                        ("position".into(), Value::from(position)),
                        ("cluster".into(), b["cluster"].clone()),
                        ("label".into(), b["label"].clone()),
                        ("mission".into(), b["mission"].clone()),
                        ("vavp".into(), b["vavp"].clone()),
                        ("d1".into(), b["d1"].clone()),
                        ("rank".into(), Value::from(r.rank as i64)),
                        ("precedence".into(), Value::from(r.precedence() as i64)),
                    ],
                },
                Action::Assert {
                    belief: Belief::new(PRIORITY_ORDER, ev.tick)
                        .key("position", position)
                        .value("cluster", b["cluster"].clone()),
                    auto_post: None,
                },
                Action::Post {
                    kind: "ev1".into(),
                    payload: ev.payload.clone(),
                },
            ]
        });

    // Lowest precedence, so it only runs once every cluster is ordered.
    let priority_done = PlanSpec::new("priority-complete", "ev1")
        .rank(|_, _| crate::kernel::MAX_RANK)
        .body(|_, _, beliefs| {
            if beliefs.query(PRIORITY_ORDER).next().is_none() {
                return Vec::new();
            }
            vec![Action::post("ev2", [("position", 0i64)])]
        });

    let allocate = PlanSpec::new("allocate-next", "ev2")
        .context(|beliefs, ev| {
            let position = ev.int("position").expect("ev2 carries position");
            let Some(cluster) = cluster_at(beliefs, position) else {
                return Vec::new();
            };
            let mut b = Binding::new();
            b.insert("position".into(), Value::from(position));
            b.insert("cluster".into(), Value::from(cluster.as_str()));
            let Some(target) = free_aircraft(beliefs, &cluster).into_iter().next() else {
                b.insert("step".into(), Value::from("advance"));
                return vec![b];
            };
            b.insert("target".into(), Value::from(target.id.as_str()));
            match nearest_free_interceptor(beliefs, &cluster) {
                Some((icp, d2)) => {
                    b.insert("step".into(), Value::from("pair"));
                    b.insert("interceptor".into(), Value::from(icp));
                    b.insert("d2".into(), Value::from(d2));
                }
                None => {
                    b.insert("step".into(), Value::from("exhausted"));
                }
            }
            vec![b]
        })
        .body(|_, b, beliefs| match text(b, "step").as_str() {
            "pair" => vec![Action::post(
                "ev3",
                ["position", "cluster", "target", "interceptor", "d2"]
                    .map(|k| (k, b[k].clone())),
            )],
            "advance" => vec![Action::post("ev2", [("position", int(b, "position") + 1)])],
            _ => {
                // No interceptor left: report every remaining target.
                let mut out = Vec::new();
                let mut pos = int(b, "position");
                while let Some(cluster) = cluster_at(beliefs, pos) {
                    for a in free_aircraft(beliefs, &cluster) {
                        out.push(Action::Record {
                            kind: RecordKind::Other("unassigned".into()),
                            payload: vec![
                                ("target".into(), Value::from(a.id)),
                                ("cluster".into(), Value::from(cluster.as_str())),
                            ],
                        });
                    }
                    pos += 1;
                }
                out
            }
        });

    let allocate_done = PlanSpec::new("allocation-complete", "ev2").rank(|_, _| crate::kernel::MAX_RANK);

    let pair = PlanSpec::new("commit-pairing", "ev3").body(|ev, _, _| {
        let target = ev.text("target").expect("ev3 carries target");
        let icp = ev.text("interceptor").expect("ev3 carries interceptor");
        vec![
            Action::Assert {
                belief: Belief::new(AIRCRAFT_AVAILABLE, ev.tick)
                    .key("aircraft", target)
                    .value("available", false),
                auto_post: None,
            },
            Action::Assert {
                belief: Belief::new(INTERCEPTOR_AVAILABLE, ev.tick)
                    .key("interceptor", icp)
                    .value("available", false),
                auto_post: None,
            },
            Action::Record {
                kind: RecordKind::Assignment,
                payload: ["target", "interceptor", "cluster", "d2"]
                    .map(|k| (k.to_string(), ev.payload[k].clone()))
                    .to_vec(),
            },
            Action::post("ev2", [("position", ev.payload["position"].clone())]),
        ]
    });

    vec![prioritize, priority_done, allocate, allocate_done, pair]
}
