use super::{
    package_label, plan_rank, Aircraft, Cluster, LcccConfig, LcccError, Mission, PackageLabel,
    Point, RankBreakdown, VavpPoint,
};

/// One (cluster, package size, mission) hypothesis with its rank.
///
/// `degree` is the fuzzy support for the hypothesis: the package-size
/// membership of the cluster's aircraft count, zero when the mission does
/// not match.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreatInstance {
    pub cluster_id: String,
    pub label: PackageLabel,
    pub mission: Mission,
    pub degree: f64,
    pub vavp_id: String,
    pub breakdown: RankBreakdown,
}

impl ThreatInstance {
    pub fn precedence(&self) -> u8 {
        self.breakdown.precedence()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriorityEntry {
    pub cluster_id: String,
    pub location: Point,
    pub label: PackageLabel,
    pub mission: Mission,
    pub vavp_id: String,
    pub d1: f64,
    pub rank: u8,
    pub precedence: u8,
    /// Members in engagement order.
    pub members: Vec<Aircraft>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prioritization {
    /// Every hypothesis, clusters in input order, then size, then mission.
    pub instances: Vec<ThreatInstance>,
    /// Clusters by descending precedence, ties by ascending id.
    pub order: Vec<PriorityEntry>,
}

pub(crate) fn nearest_vavp<'a>(at: &Point, vavps: &'a [VavpPoint]) -> Option<(&'a VavpPoint, f64)> {
    vavps
        .iter()
        .map(|v| (v, at.distance(&v.location)))
        .min_by(|(va, da), (vb, db)| da.total_cmp(db).then_with(|| va.id.cmp(&vb.id)))
}

/// Sorts by descending precedence then ascending cluster id.
pub(crate) fn sort_priority(entries: &mut [PriorityEntry]) {
    entries.sort_by(|a, b| {
        b.precedence
            .cmp(&a.precedence)
            .then_with(|| a.cluster_id.cmp(&b.cluster_id))
    });
}

pub fn prioritize_clusters(
    clusters: &[Cluster],
    vavps: &[VavpPoint],
    cfg: &LcccConfig,
) -> Result<Prioritization, LcccError> {
    if vavps.is_empty() {
        return Err(LcccError::EmptyVavpSet);
    }
    let mut instances = Vec::with_capacity(clusters.len() * 6);
    let mut order = Vec::with_capacity(clusters.len());
    for cluster in clusters {
        let (vavp, d1) = nearest_vavp(&cluster.location, vavps).expect("non-empty");
        let count = cluster.aircraft_count();
        for label in PackageLabel::ALL {
            let mu = cfg.trapezoids.membership(label, count);
            for mission in Mission::ALL {
                instances.push(ThreatInstance {
                    cluster_id: cluster.id.clone(),
                    label,
                    mission,
                    degree: if mission == cluster.mission { mu } else { 0.0 },
                    vavp_id: vavp.id.clone(),
                    breakdown: plan_rank(d1, label, mission, &cfg.values),
                });
            }
        }
        let label = package_label(count, &cfg.trapezoids);
        let b = plan_rank(d1, label, cluster.mission, &cfg.values);
        order.push(PriorityEntry {
            cluster_id: cluster.id.clone(),
            location: cluster.location,
            label,
            mission: cluster.mission,
            vavp_id: vavp.id.clone(),
            d1,
            rank: b.rank,
            precedence: b.precedence(),
            members: cluster.engagement_order(),
        });
    }
    sort_priority(&mut order);
    Ok(Prioritization { instances, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cluster(id: &str, x: f64, y: f64, n: usize, mission: Mission) -> Cluster {
        Cluster {
            id: id.into(),
            location: Point::new(x, y),
            mission,
            members: (0..n).map(|i| Aircraft::new(format!("{id}-a{i}"), i as u32)).collect(),
        }
    }

    fn origin_vavp() -> Vec<VavpPoint> {
        vec![VavpPoint {
            id: "V1".into(),
            location: Point::new(0.0, 0.0),
            value: 1.0,
        }]
    }

    fn ids(p: &Prioritization) -> Vec<&str> {
        p.order.iter().map(|e| e.cluster_id.as_str()).collect()
    }

    #[test]
    fn nearer_clusters_come_first() {
        let cs = [
            cluster("C3", 500.0, 0.0, 2, Mission::Escort),
            cluster("C1", 100.0, 0.0, 2, Mission::Escort),
            cluster("C2", 0.0, 300.0, 2, Mission::Escort),
        ];
        let p = prioritize_clusters(&cs, &origin_vavp(), &LcccConfig::default()).unwrap();
        assert_eq!(ids(&p), ["C1", "C2", "C3"]);
        let prec: Vec<_> = p.order.iter().map(|e| e.precedence).collect();
        // ranks floor(1+0.5+0.5)=2, 4, 6
        assert_eq!(prec, [7, 5, 3]);
    }

    #[test]
    fn identical_clusters_sort_by_id() {
        let cs = [
            cluster("B", 200.0, 0.0, 3, Mission::Strike),
            cluster("A", 200.0, 0.0, 3, Mission::Strike),
        ];
        let p = prioritize_clusters(&cs, &origin_vavp(), &LcccConfig::default()).unwrap();
        assert_eq!(ids(&p), ["A", "B"]);
    }

    #[test]
    fn single_cluster() {
        let cs = [cluster("C", 10.0, 10.0, 1, Mission::Strike)];
        let p = prioritize_clusters(&cs, &origin_vavp(), &LcccConfig::default()).unwrap();
        assert_eq!(ids(&p), ["C"]);
    }

    #[test]
    fn needs_a_vavp() {
        let cs = [cluster("C", 10.0, 10.0, 1, Mission::Strike)];
        assert!(matches!(
            prioritize_clusters(&cs, &[], &LcccConfig::default()),
            Err(LcccError::EmptyVavpSet)
        ));
    }

    #[test]
    fn d1_is_minimum_over_vavps() {
        let vavps = vec![
            VavpPoint { id: "far".into(), location: Point::new(900.0, 0.0), value: 5.0 },
            VavpPoint { id: "near".into(), location: Point::new(100.0, 0.0), value: 1.0 },
        ];
        let cs = [cluster("C", 0.0, 0.0, 1, Mission::Strike)];
        let p = prioritize_clusters(&cs, &vavps, &LcccConfig::default()).unwrap();
        assert_eq!(p.order[0].vavp_id, "near");
        assert_eq!(p.order[0].d1, 100.0);
    }

    #[test]
    fn three_clusters_give_eighteen_instances() {
        let cs = [
            cluster("C1", 100.0, 0.0, 2, Mission::Strike),
            cluster("C2", 300.0, 0.0, 6, Mission::Escort),
            cluster("C3", 500.0, 0.0, 12, Mission::Strike),
        ];
        let p = prioritize_clusters(&cs, &origin_vavp(), &LcccConfig::default()).unwrap();
        assert_eq!(p.instances.len(), 18);
        // the believed hypothesis is the max-degree one for each cluster
        for e in &p.order {
            let best = p
                .instances
                .iter()
                .filter(|i| i.cluster_id == e.cluster_id)
                .max_by(|a, b| a.degree.total_cmp(&b.degree).then(a.label.cmp(&b.label)))
                .unwrap();
            assert_eq!((best.label, best.mission), (e.label, e.mission));
        }
    }

    proptest! {
        #[test]
        fn moving_closer_never_demotes(
            xs in prop::collection::vec(0.0f64..1000.0, 1..5),
            which in 0usize..5,
            shrink in 0.0f64..1.0,
        ) {
            let which = which % xs.len();
            let cs: Vec<_> = xs.iter().enumerate()
                .map(|(i, &x)| cluster(&format!("C{i}"), x, 0.0, 3, Mission::Strike))
                .collect();
            let cfg = LcccConfig::default();
            let before = prioritize_clusters(&cs, &origin_vavp(), &cfg).unwrap();
            let mut moved = cs.clone();
            moved[which].location.x *= shrink;
            let after = prioritize_clusters(&moved, &origin_vavp(), &cfg).unwrap();
            let pos = |p: &Prioritization| p.order.iter().position(|e| e.cluster_id == cs[which].id).unwrap();
            prop_assert!(pos(&after) <= pos(&before));
        }

        #[test]
        fn instance_count_is_six_per_cluster(n in 0usize..8) {
            let cs: Vec<_> = (0..n).map(|i| cluster(&format!("C{i}"), 50.0 * i as f64, 0.0, i + 1, Mission::Escort)).collect();
            let p = prioritize_clusters(&cs, &origin_vavp(), &LcccConfig::default()).unwrap();
            prop_assert_eq!(p.instances.len(), 6 * n);
        }
    }
}
