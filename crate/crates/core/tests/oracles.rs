mod common;

use std::collections::HashSet;

use common::*;
use iad_core::lccc::LcccConfig;
use iad_core::stats::{ks_coefficient, ParamMode};
use iad_core::{
    allocate_interceptors, generate_counts, ks_statistic, prioritize_clusters, reference_cdf,
    DistributionSpec, LcccAgent, ReferenceDist,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Gamma, StudentsT};

#[test]
fn allocation_matches_greedy_oracle() {
    let cfg = LcccConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA7);
    for case in 0..1000 {
        let inst = random_instance(&mut rng, 4, 4);
        let pri = prioritize_clusters(&inst.clusters, &inst.vavps, &cfg).unwrap();
        let expect_order = oracle_priority(&inst, &cfg);
        let got_order: Vec<(String, u8)> =
            pri.order.iter().map(|e| (e.cluster_id.clone(), e.precedence)).collect();
        assert_eq!(got_order, expect_order, "case {case}");
        let ids: Vec<String> = expect_order.into_iter().map(|(id, _)| id).collect();
        let got = library_pairings(&allocate_interceptors(&pri.order, &inst.interceptors, 0));
        assert_eq!(got, split_pairings(oracle_allocate(&inst, &ids)), "case {case}");
    }
}

#[test]
fn no_double_engagement_under_fuzz() {
    let cfg = LcccConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xF022);
    for case in 0..10_000 {
        let inst = random_instance(&mut rng, 6, 8);
        let pri = prioritize_clusters(&inst.clusters, &inst.vavps, &cfg).unwrap();
        let alloc = allocate_interceptors(&pri.order, &inst.interceptors, 0);
        let mut icps = HashSet::new();
        let mut targets = HashSet::new();
        for a in &alloc.assignments {
            assert!(icps.insert(a.interceptor_id.clone()), "case {case}: interceptor reused");
            assert!(targets.insert(a.target_id.clone()), "case {case}: target engaged twice");
            let icp = inst.interceptors.iter().find(|i| i.id == a.interceptor_id).unwrap();
            assert!(icp.available, "case {case}: unavailable interceptor used");
        }
        for u in &alloc.unassigned {
            assert!(targets.insert(u.target_id.clone()), "case {case}: target listed twice");
        }
        let total: usize = inst.clusters.iter().map(|c| c.members.len()).sum();
        assert_eq!(targets.len(), total, "case {case}");
        let free = inst.interceptors.iter().filter(|i| i.available).count();
        assert_eq!(alloc.assignments.len(), free.min(total), "case {case}");
    }
}

#[test]
fn agent_walk_matches_oracle() {
    let cfg = LcccConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1CCC);
    for case in 0..200 {
        let mut inst = random_instance(&mut rng, 3, 4);
        // The kernel's cycle guard caps one tick at 100 events.
        for c in &mut inst.clusters {
            c.members.truncate(4);
        }
        let mut agent = LcccAgent::new("lccc", cfg);
        let step = agent.step(0, &inst.clusters, &inst.vavps, &inst.interceptors).unwrap();
        let order = oracle_priority(&inst, &cfg);
        let got: Vec<&str> = step.priority.iter().map(|e| e.cluster_id.as_str()).collect();
        let want: Vec<&str> = order.iter().map(|(id, _)| id.as_str()).collect();
        assert_eq!(got, want, "case {case}");
        let ids: Vec<String> = order.into_iter().map(|(id, _)| id).collect();
        let alloc = iad_core::Allocation {
            assignments: step.assignments.clone(),
            unassigned: step.unassigned.clone(),
        };
        assert_eq!(library_pairings(&alloc), split_pairings(oracle_allocate(&inst, &ids)), "case {case}");
    }
}

#[test]
fn eighteen_instances_for_three_clusters() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut inst = random_instance(&mut rng, 0, 2);
    inst.clusters = random_instance(&mut ChaCha8Rng::seed_from_u64(81), 12, 0).clusters;
    inst.clusters.truncate(3);
    assert_eq!(inst.clusters.len(), 3);
    let pri = prioritize_clusters(&inst.clusters, &inst.vavps, &LcccConfig::default()).unwrap();
    assert_eq!(pri.instances.len(), 18);
    let distinct: HashSet<_> = pri
        .instances
        .iter()
        .map(|i| (i.cluster_id.clone(), i.label, i.mission))
        .collect();
    assert_eq!(distinct.len(), 18);
}

#[test]
fn closed_form_spot_values() {
    let t2 = ReferenceDist::StudentT { nu: 2.0 };
    assert!((reference_cdf(&t2, 1.0).unwrap() - 0.78868).abs() < 1e-4);
    assert!((reference_cdf(&t2, 0.0).unwrap() - 0.5).abs() < 1e-12);
    let g = ReferenceDist::Gamma { shape: 1.0, beta: 1.0, mode: ParamMode::Scale };
    assert!((reference_cdf(&g, 1.0).unwrap() - 0.63212).abs() < 1e-4);
    let l = ReferenceDist::Laplace { lambda: 3.0, mu: 1.5, mode: ParamMode::Scale };
    assert!((reference_cdf(&l, 1.5).unwrap() - 0.5).abs() < 1e-12);
    let d = ks_statistic(&[-1.0, 0.0, 1.0], &t2, 0.05).unwrap().d_stat;
    assert!((d - 0.21132).abs() < 1e-4);
}

#[test]
fn gamma_cdf_agrees_with_statrs() {
    for &(shape, scale) in &[(0.5, 1.0), (1.0, 2.0), (4.9, 0.22), (12.06, 0.08), (30.0, 3.0)] {
        let ours = ReferenceDist::Gamma { shape, beta: scale, mode: ParamMode::Scale };
        let rate = ReferenceDist::Gamma { shape, beta: 1.0 / scale, mode: ParamMode::Rate };
        let theirs = Gamma::new(shape, 1.0 / scale).unwrap();
        for k in 0..200 {
            let x = k as f64 * shape * scale / 50.0;
            let want = theirs.cdf(x);
            assert!((ours.cdf(x) - want).abs() < 1e-9, "shape {shape} scale {scale} x {x}");
            assert!((rate.cdf(x) - want).abs() < 1e-9);
        }
    }
}

#[test]
fn student_t_cdf_agrees_with_statrs() {
    for &nu in &[1.0, 2.0, 3.5, 10.0, 40.0] {
        let ours = ReferenceDist::StudentT { nu };
        let theirs = StudentsT::new(0.0, 1.0, nu).unwrap();
        for k in -100..=100 {
            let x = k as f64 / 10.0;
            assert!((ours.cdf(x) - theirs.cdf(x)).abs() < 1e-9, "nu {nu} x {x}");
        }
    }
}

#[test]
fn normal_cdf_agrees_with_statrs() {
    let ours = ReferenceDist::Normal { mean: 2.0, sd: 3.0 };
    let theirs = statrs::distribution::Normal::new(2.0, 3.0).unwrap();
    for k in -120..=120 {
        let x = k as f64 / 4.0;
        assert!((ours.cdf(x) - theirs.cdf(x)).abs() < 1e-10, "x {x}");
    }
}

#[test]
fn ks_coefficient_matches_monte_carlo() {
    let c = empirical_coefficient(10_000, 400, 0xC05);
    assert!((c - ks_coefficient(0.05)).abs() < 0.03, "empirical {c}");
}

#[test]
fn truncated_normal_count_mean() {
    let spec: DistributionSpec = "normal:20,10".parse().unwrap();
    let counts = generate_counts(spec, 10_000, 12).unwrap();
    let mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
    assert!((mean - 20.61).abs() < 0.3, "mean {mean}");
    assert!(counts.iter().all(|&c| c >= 1));
}

#[test]
fn uniform_counts_stay_in_range() {
    let spec: DistributionSpec = "uniform:10,30".parse().unwrap();
    for seed in 0..20 {
        let counts = generate_counts(spec, 500, seed).unwrap();
        assert!(counts.iter().all(|c| (10..=30).contains(c)));
        assert_eq!(counts, generate_counts(spec, 500, seed).unwrap());
    }
}
