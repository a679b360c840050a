use super::{ReferenceDist, StatsError};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub d_stat: f64,
    pub n: usize,
    pub alpha: f64,
    pub critical: f64,
    pub reject: bool,
}

/// Asymptotic one-sample coefficient `c(alpha) = sqrt(-ln(alpha / 2) / 2)`;
/// `c(0.05) = 1.3581`.
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt()
}

pub fn ks_critical(alpha: f64, n: usize) -> f64 {
    ks_coefficient(alpha) / (n as f64).sqrt()
}

fn check(sample: &[f64], alpha: f64) -> Result<Vec<f64>, StatsError> {
    if sample.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::InvalidSpec(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if sample.iter().any(|x| x.is_nan()) {
        return Err(StatsError::InvalidSpec("sample contains NaN".into()));
    }
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    Ok(xs)
}

/// Points where either CDF can jump: the sample itself plus the atoms of a
/// discrete reference.
fn jump_points(sorted: &[f64], dist: &ReferenceDist) -> Vec<f64> {
    let mut pts: Vec<f64> = sorted.iter().chain(dist.atoms()).copied().collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `D = sup |F_n(x) - F(x)|`, checked at both one-sided limits of every
/// jump point.
pub fn ks_statistic(sample: &[f64], dist: &ReferenceDist, alpha: f64) -> Result<KsResult, StatsError> {
    let xs = check(sample, alpha)?;
    dist.validate()?;
    let n = xs.len();
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for x in jump_points(&xs, dist) {
        let below = xs.partition_point(|&s| s < x) as f64 / nf;
        let at = xs.partition_point(|&s| s <= x) as f64 / nf;
        d = d.max((below - dist.cdf_left(x)).abs());
        d = d.max((at - dist.cdf(x)).abs());
    }
    let d_stat = d.min(1.0);
    let critical = ks_critical(alpha, n);
    Ok(KsResult {
        d_stat,
        n,
        alpha,
        critical,
        reject: d_stat > critical,
    })
}

/// `(x, F_n(x), F(x))` at every distinct sample value, for plotting.
pub fn ks_curve(sample: &[f64], dist: &ReferenceDist) -> Result<Vec<(f64, f64, f64)>, StatsError> {
    let xs = check(sample, DEFAULT_ALPHA)?;
    dist.validate()?;
    let nf = xs.len() as f64;
    let mut pts = xs.clone();
    pts.dedup();
    Ok(pts
        .into_iter()
        .map(|x| (x, xs.partition_point(|&s| s <= x) as f64 / nf, dist.cdf(x)))
        .collect())
}
