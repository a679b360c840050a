//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use iad_core::lccc::{Aircraft, Cluster, Interceptor, LcccConfig, Mission, PackageLabel, Point, VavpPoint};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub clusters: Vec<Cluster>,
    pub vavps: Vec<VavpPoint>,
    pub interceptors: Vec<Interceptor>,
}

/// Coordinates on a coarse grid so distance ties actually happen.
fn grid_point(rng: &mut ChaCha8Rng) -> Point {
    Point::new(rng.random_range(0..=20) as f64 * 50.0, rng.random_range(0..=20) as f64 * 50.0)
}

pub fn random_instance(rng: &mut ChaCha8Rng, max_clusters: usize, max_interceptors: usize) -> Instance {
    let nc = rng.random_range(0..=max_clusters);
    let ni = rng.random_range(0..=max_interceptors);
    let nv = rng.random_range(1..=3);
    let clusters = (0..nc)
        .map(|c| {
            let size = rng.random_range(1..=12);
            Cluster {
                id: format!("C{c}"),
                location: grid_point(rng),
                mission: if rng.random_bool(0.5) { Mission::Strike } else { Mission::Escort },
                members: (0..size)
                    .map(|a| Aircraft::new(format!("C{c}-a{a}"), rng.random_range(1..=4)))
                    .collect(),
            }
        })
        .collect();
    let vavps = (0..nv)
        .map(|v| VavpPoint {
            id: format!("V{v}"),
            location: grid_point(rng),
            value: 1.0,
        })
        .collect();
    let interceptors = (0..ni)
        .map(|i| Interceptor {
            id: format!("I{i}"),
            location: grid_point(rng),
            available: rng.random_bool(0.8),
        })
        .collect();
    Instance { clusters, vavps, interceptors }
}

/// Label with the highest membership; ties go to the larger package.
fn oracle_label(count: u32, cfg: &LcccConfig) -> PackageLabel {
    let mut best = PackageLabel::Small;
    let mut best_mu = f64::NEG_INFINITY;
    for label in [PackageLabel::Small, PackageLabel::Medium, PackageLabel::Big] {
        let mu = cfg.trapezoids.membership(label, count);
        if mu >= best_mu {
            best = label;
            best_mu = mu;
        }
    }
    best
}

fn oracle_weight(label: PackageLabel, mission: Mission) -> f64 {
    let pkg = match label {
        PackageLabel::Small | PackageLabel::Medium => 1.0,
        PackageLabel::Big => 2.0,
    };
    let msn = match mission {
        Mission::Strike => 2.0,
        Mission::Escort => 1.0,
    };
    pkg / 2.0 + msn / 2.0
}

/// Cluster ids in engagement order, by selection of the most urgent
/// remaining cluster.
pub fn oracle_priority(inst: &Instance, cfg: &LcccConfig) -> Vec<(String, u8)> {
    let mut pending: Vec<(String, u8)> = inst
        .clusters
        .iter()
        .map(|c| {
            let mut d1 = f64::INFINITY;
            for v in &inst.vavps {
                let d = ((c.location.x - v.location.x).powi(2) + (c.location.y - v.location.y).powi(2)).sqrt();
                if d < d1 {
                    d1 = d;
                }
            }
            let label = oracle_label(c.members.len() as u32, cfg);
            let raw = (d1 / 100.0 + oracle_weight(label, c.mission)).floor();
            let rank = if raw > 9.0 { 9 } else { raw as u8 };
            (c.id.clone(), 9 - rank)
        })
        .collect();
    let mut order = Vec::new();
    while !pending.is_empty() {
        let mut pick = 0;
        for k in 1..pending.len() {
            let (id, p) = &pending[k];
            let (bid, bp) = &pending[pick];
            if p > bp || (p == bp && id < bid) {
                pick = k;
            }
        }
        order.push(pending.remove(pick));
    }
    order
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pairing {
    Assigned { target: String, interceptor: String, cluster: String, d2: f64 },
    Unassigned { target: String, cluster: String },
}

/// Greedy walk: each target, in priority then ranking order, scans every
/// interceptor for the nearest free one.
pub fn oracle_allocate(inst: &Instance, order: &[String]) -> Vec<Pairing> {
    let mut free: Vec<bool> = inst.interceptors.iter().map(|i| i.available).collect();
    let mut out = Vec::new();
    for cid in order {
        let c = inst.clusters.iter().find(|c| &c.id == cid).unwrap();
        let mut targets: Vec<&Aircraft> = c.members.iter().collect();
        targets.sort_by(|a, b| (a.ranking, &a.id).cmp(&(b.ranking, &b.id)));
        for t in targets {
            let mut best: Option<(usize, f64)> = None;
            for (k, icp) in inst.interceptors.iter().enumerate() {
                if !free[k] {
                    continue;
                }
                let d = ((c.location.x - icp.location.x).powi(2) + (c.location.y - icp.location.y).powi(2)).sqrt();
                let better = match best {
                    None => true,
                    Some((b, bd)) => d < bd || (d == bd && icp.id < inst.interceptors[b].id),
                };
                if better {
                    best = Some((k, d));
                }
            }
            match best {
                Some((k, d2)) => {
                    free[k] = false;
                    out.push(Pairing::Assigned {
                        target: t.id.clone(),
                        interceptor: inst.interceptors[k].id.clone(),
                        cluster: cid.clone(),
                        d2,
                    });
                }
                None => out.push(Pairing::Unassigned {
                    target: t.id.clone(),
                    cluster: cid.clone(),
                }),
            }
        }
    }
    out
}

/// Library result in the oracle's shape: assignments in order, then the
/// unassigned targets.
pub fn library_pairings(alloc: &iad_core::Allocation) -> Vec<Pairing> {
    alloc
        .assignments
        .iter()
        .map(|a| Pairing::Assigned {
            target: a.target_id.clone(),
            interceptor: a.interceptor_id.clone(),
            cluster: a.cluster_id.clone(),
            d2: a.d2,
        })
        .chain(alloc.unassigned.iter().map(|u| Pairing::Unassigned {
            target: u.target_id.clone(),
            cluster: u.cluster_id.clone(),
        }))
        .collect()
}

/// Oracle output reordered the same way.
pub fn split_pairings(p: Vec<Pairing>) -> Vec<Pairing> {
    let (mut a, u): (Vec<_>, Vec<_>) = p.into_iter().partition(|x| matches!(x, Pairing::Assigned { .. }));
    a.extend(u);
    a
}

/// Mean of the 95th percentile of `sqrt(n) * D` for uniform samples
/// against the uniform reference.
pub fn empirical_coefficient(trials: usize, n: usize, seed: u64) -> f64 {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = iad_core::ReferenceDist::Uniform { low: 0.0, high: 1.0 };
    let mut stats: Vec<f64> = (0..trials)
        .map(|_| {
            let xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            iad_core::ks_statistic(&xs, &u, 0.05).unwrap().d_stat * (n as f64).sqrt()
        })
        .collect();
    stats.sort_by(f64::total_cmp);
    stats[(0.95 * trials as f64) as usize]
}
