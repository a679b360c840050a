//! Local command-and-control agent: threat assessment and weapon
//! allocation.
//!
//! Clusters arrive from upstream data fusion with a location, a mission
//! type and a list of attacking aircraft. The agent labels each cluster's
//! package size with trapezoidal memberships, ranks it by distance to the
//! nearest defended point (VAVP), and then walks clusters in priority
//! order pairing each aircraft with the nearest free interceptor.

mod agent;
mod allocate;
mod fuzzy;
mod priority;
mod rank;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use agent::{LcccAgent, LcccStep};
pub use allocate::{allocate_interceptors, Allocation, Assignment, Unassigned};
pub use fuzzy::{package_label, PackageLabel, PackageTrapezoids, Trapezoid};
pub use priority::{prioritize_clusters, PriorityEntry, Prioritization, ThreatInstance};
pub use rank::{plan_rank, RankBreakdown, ValueTable};

#[derive(Debug, Error)]
pub enum LcccError {
    #[error("no VAVP points to prioritize against")]
    EmptyVavpSet,
    #[error(transparent)]
    Kernel(#[from] crate::kernel::KernelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mission {
    Strike,
    Escort,
}

impl Mission {
    pub const ALL: [Mission; 2] = [Mission::Strike, Mission::Escort];

    pub fn as_str(self) -> &'static str {
        match self {
            Mission::Strike => "Strike",
            Mission::Escort => "Escort",
        }
    }
}

impl fmt::Display for Mission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mission {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mission::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown mission type {s:?}"))
    }
}

/// An attacking aircraft and its upstream threat ranking (lower engages
/// first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aircraft {
    pub id: String,
    pub ranking: u32,
}

impl Aircraft {
    pub fn new(id: impl Into<String>, ranking: u32) -> Self {
        Aircraft {
            id: id.into(),
            ranking,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub id: String,
    pub location: Point,
    pub mission: Mission,
    pub members: Vec<Aircraft>,
}

impl Cluster {
    pub fn aircraft_count(&self) -> u32 {
        self.members.len() as u32
    }

    /// Members by ascending ranking, then id.
    pub fn engagement_order(&self) -> Vec<Aircraft> {
        let mut m = self.members.clone();
        m.sort_by(|a, b| a.ranking.cmp(&b.ranking).then_with(|| a.id.cmp(&b.id)));
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VavpPoint {
    pub id: String,
    pub location: Point,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interceptor {
    pub id: String,
    pub location: Point,
    pub available: bool,
}

/// Fuzzy sets and rank weights.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LcccConfig {
    pub trapezoids: PackageTrapezoids,
    pub values: ValueTable,
}
