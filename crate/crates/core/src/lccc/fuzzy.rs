use std::fmt;
use std::str::FromStr;

/// Trapezoidal membership over aircraft counts. `c` and `d` may be
/// infinite for an open right shoulder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trapezoid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Trapezoid {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Trapezoid { a, b, c, d }
    }

    pub fn is_well_formed(&self) -> bool {
        !self.a.is_nan()
            && !self.d.is_nan()
            && self.a <= self.b
            && self.b <= self.c
            && self.c <= self.d
    }

    pub fn membership(&self, x: f64) -> f64 {
        if x < self.a || x > self.d {
            0.0
        } else if x >= self.b && x <= self.c {
            1.0
        } else if x < self.b {
            (x - self.a) / (self.b - self.a)
        } else {
            (self.d - x) / (self.d - self.c)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PackageLabel {
    Small,
    Medium,
    Big,
}

impl PackageLabel {
    pub const ALL: [PackageLabel; 3] = [PackageLabel::Small, PackageLabel::Medium, PackageLabel::Big];

    pub fn as_str(self) -> &'static str {
        match self {
            PackageLabel::Small => "Small",
            PackageLabel::Medium => "Medium",
            PackageLabel::Big => "Big",
        }
    }
}

impl fmt::Display for PackageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PackageLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PackageLabel::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown package size {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackageTrapezoids {
    pub small: Trapezoid,
    pub medium: Trapezoid,
    pub big: Trapezoid,
}

impl Default for PackageTrapezoids {
    fn default() -> Self {
        PackageTrapezoids {
            small: Trapezoid::new(0.0, 0.0, 3.0, 5.0),
            medium: Trapezoid::new(3.0, 5.0, 8.0, 10.0),
            big: Trapezoid::new(8.0, 10.0, f64::INFINITY, f64::INFINITY),
        }
    }
}

impl PackageTrapezoids {
    pub fn get(&self, label: PackageLabel) -> &Trapezoid {
        match label {
            PackageLabel::Small => &self.small,
            PackageLabel::Medium => &self.medium,
            PackageLabel::Big => &self.big,
        }
    }

    pub fn get_mut(&mut self, label: PackageLabel) -> &mut Trapezoid {
        match label {
            PackageLabel::Small => &mut self.small,
            PackageLabel::Medium => &mut self.medium,
            PackageLabel::Big => &mut self.big,
        }
    }

    pub fn membership(&self, label: PackageLabel, count: u32) -> f64 {
        self.get(label).membership(count as f64)
    }

    /// Each trapezoid is ordered and every count from 1 to `upto` has
    /// non-zero membership in some label.
    pub fn validate(&self, upto: u32) -> Result<(), String> {
        for label in PackageLabel::ALL {
            if !self.get(label).is_well_formed() {
                return Err(format!("trapezoid for {label} must satisfy a <= b <= c <= d"));
            }
        }
        if let Some(gap) = (1..=upto).find(|&n| {
            PackageLabel::ALL
                .iter()
                .all(|&l| self.membership(l, n) == 0.0)
        }) {
            return Err(format!("no package label covers {gap} aircraft"));
        }
        Ok(())
    }
}

/// Label with the highest membership; ties go to the larger label.
pub fn package_label(count: u32, traps: &PackageTrapezoids) -> PackageLabel {
    debug_assert!(count >= 1);
    let mut best = PackageLabel::Small;
    let mut best_mu = f64::NEG_INFINITY;
    for label in PackageLabel::ALL {
        let mu = traps.membership(label, count);
        if mu >= best_mu {
            best = label;
            best_mu = mu;
        }
    }
    best
}
