//! Deterministic workloads for the criterion benchmarks.

use std::path::PathBuf;

use iad_core::lccc::{Aircraft, Cluster, Interceptor, Mission, Point, VavpPoint};
use iad_core::{LogRecord, RecordKind, Scenario};

/// `n` records spread over agents and ticks, with real-valued fields.
pub fn synthetic_log(n: usize) -> Vec<LogRecord> {
    (0..n)
        .map(|i| {
            let tick = (i / 8) as u64;
            let agent = if i % 8 < 3 { "lccc" } else { "srdr" };
            let kind = match i % 4 {
                0 => RecordKind::Belief,
                1 => RecordKind::Event,
                2 => RecordKind::Mode,
                _ => RecordKind::Assignment,
            };
            LogRecord::new(tick, agent, kind)
                .with("seq", i)
                .with("d2", iad_core::log::format_real(i as f64 * 0.37))
                .with("modes", "FrequencyHopping,SenseMode")
        })
        .collect()
}

/// A grid of `clusters` clusters of `size` aircraft facing `interceptors`
/// interceptors and two defended points.
pub fn allocation_instance(
    clusters: usize,
    size: usize,
    interceptors: usize,
) -> (Vec<Cluster>, Vec<VavpPoint>, Vec<Interceptor>) {
    let cs = (0..clusters)
        .map(|c| Cluster {
            id: format!("C{c:03}"),
            location: Point::new((c * 37 % 1000) as f64, (c * 91 % 1000) as f64),
            mission: if c % 3 == 0 { Mission::Strike } else { Mission::Escort },
            members: (0..size)
                .map(|a| Aircraft::new(format!("C{c:03}-a{a}"), (a % 5) as u32))
                .collect(),
        })
        .collect();
    let vs = vec![
        VavpPoint { id: "V1".into(), location: Point::new(150.0, 200.0), value: 3.0 },
        VavpPoint { id: "V2".into(), location: Point::new(600.0, 150.0), value: 2.0 },
    ];
    let is = (0..interceptors)
        .map(|i| Interceptor {
            id: format!("I{i:03}"),
            location: Point::new((i * 53 % 1000) as f64, (i * 29 % 1000) as f64),
            available: true,
        })
        .collect();
    (cs, vs, is)
}

pub fn baseline_scenario() -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/scenarios/baseline.scn");
    iad_core::load_scenario(path).expect("bundled scenario loads")
}
