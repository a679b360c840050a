use super::{Mission, PackageLabel};
use crate::kernel::MAX_RANK;

/// Integer weights fed into the rank formula (`value1`, `value2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueTable {
    pub small: u32,
    pub medium: u32,
    pub big: u32,
    pub strike: u32,
    pub escort: u32,
}

impl Default for ValueTable {
    fn default() -> Self {
        ValueTable {
            small: 1,
            medium: 1,
            big: 2,
            strike: 2,
            escort: 1,
        }
    }
}

impl ValueTable {
    pub fn package(&self, label: PackageLabel) -> u32 {
        match label {
            PackageLabel::Small => self.small,
            PackageLabel::Medium => self.medium,
            PackageLabel::Big => self.big,
        }
    }

    pub fn mission(&self, mission: Mission) -> u32 {
        match mission {
            Mission::Strike => self.strike,
            Mission::Escort => self.escort,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankBreakdown {
    pub distance: f64,
    pub pkg_contrib: f64,
    pub msn_contrib: f64,
    pub rank: u8,
}

impl RankBreakdown {
    pub fn precedence(&self) -> u8 {
        MAX_RANK as u8 - self.rank
    }
}

/// `rank = floor(distance / 100 + value1 / 2 + value2 / 2)` clamped to
/// `[0, 9]`. The halves are real-valued, so a weight of 1 contributes 0.5.
pub fn plan_rank(distance: f64, pkg: PackageLabel, msn: Mission, values: &ValueTable) -> RankBreakdown {
    debug_assert!(distance >= 0.0);
    let pkg_contrib = values.package(pkg) as f64 / 2.0;
    let msn_contrib = values.mission(msn) as f64 / 2.0;
    let raw = (distance / 100.0 + pkg_contrib + msn_contrib).floor();
    let rank = raw.clamp(0.0, MAX_RANK as f64) as u8;
    RankBreakdown {
        distance,
        pkg_contrib,
        msn_contrib,
        rank,
    }
}
