use std::fmt;
use std::str::FromStr;

use statrs::distribution::{ContinuousCDF, StudentsT};

use super::dist::{parse_reals, split_params};
use super::special::{gamma_p, std_normal_cdf, student_t2_cdf};
use super::StatsError;

/// How a published fit parameter enters the CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum ParamMode {
    #[default]
    Scale,
    Rate,
}

impl ParamMode {
    pub const ALL: [ParamMode; 2] = [ParamMode::Scale, ParamMode::Rate];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamMode::Scale => "scale",
            ParamMode::Rate => "rate",
        }
    }

    /// The scale implied by parameter `p` in this mode.
    pub fn scale(self, p: f64) -> f64 {
        match self {
            ParamMode::Scale => p,
            ParamMode::Rate => 1.0 / p,
        }
    }
}

impl fmt::Display for ParamMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParamMode {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "scale" => Ok(ParamMode::Scale),
            "rate" => Ok(ParamMode::Rate),
            other => Err(StatsError::Parse(format!("unknown parameter mode {other:?}"))),
        }
    }
}

/// Reference distribution for KS comparisons.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceDist {
    StudentT { nu: f64 },
    /// `|T|` for `T ~ t(nu)`.
    HalfStudentT { nu: f64 },
    Gamma { shape: f64, beta: f64, mode: ParamMode },
    /// Location `mu`; `lambda` is a scale or a rate per `mode`.
    Laplace { lambda: f64, mu: f64, mode: ParamMode },
    Normal { mean: f64, sd: f64 },
    Uniform { low: f64, high: f64 },
    /// Step CDF of a sorted sample.
    Empirical(Vec<f64>),
}

impl ReferenceDist {
    pub fn empirical(mut values: Vec<f64>) -> Result<Self, StatsError> {
        if values.is_empty() {
            return Err(StatsError::EmptySample);
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(StatsError::InvalidSpec("empirical reference contains NaN".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(ReferenceDist::Empirical(values))
    }

    /// Normal with the sample's mean and standard deviation (n - 1).
    pub fn fitted_normal(sample: &[f64]) -> Result<Self, StatsError> {
        if sample.len() < 2 {
            return Err(StatsError::TooShort { len: sample.len(), min: 2 });
        }
        let n = sample.len() as f64;
        let mean = sample.iter().sum::<f64>() / n;
        let var = sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let r = ReferenceDist::Normal { mean, sd: var.sqrt() };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), StatsError> {
        let pos = |x: f64| x.is_finite() && x > 0.0;
        let ok = match *self {
            ReferenceDist::StudentT { nu } | ReferenceDist::HalfStudentT { nu } => pos(nu),
            ReferenceDist::Gamma { shape, beta, .. } => pos(shape) && pos(beta),
            ReferenceDist::Laplace { lambda, mu, .. } => pos(lambda) && mu.is_finite(),
            ReferenceDist::Normal { mean, sd } => mean.is_finite() && pos(sd),
            ReferenceDist::Uniform { low, high } => low.is_finite() && high.is_finite() && low < high,
            ReferenceDist::Empirical(ref v) => !v.is_empty(),
        };
        if ok {
            Ok(())
        } else {
            Err(StatsError::InvalidSpec(format!("parameters out of range for {self}")))
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, ReferenceDist::Empirical(_))
    }

    /// Jump points of a discrete reference; empty for continuous ones.
    pub fn atoms(&self) -> &[f64] {
        match self {
            ReferenceDist::Empirical(v) => v,
            _ => &[],
        }
    }

    /// `F(x) = P(X <= x)`. Parameters are assumed valid.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            ReferenceDist::StudentT { nu } => t_cdf(nu, x),
            ReferenceDist::HalfStudentT { nu } => {
                if x <= 0.0 {
                    0.0
                } else {
                    2.0 * t_cdf(nu, x) - 1.0
                }
            }
            ReferenceDist::Gamma { shape, beta, mode } => gamma_p(shape, x / mode.scale(beta)),
            ReferenceDist::Laplace { lambda, mu, mode } => {
                let b = mode.scale(lambda);
                if x < mu {
                    0.5 * ((x - mu) / b).exp()
                } else {
                    1.0 - 0.5 * (-(x - mu) / b).exp()
                }
            }
            ReferenceDist::Normal { mean, sd } => std_normal_cdf((x - mean) / sd),
            ReferenceDist::Uniform { low, high } => ((x - low) / (high - low)).clamp(0.0, 1.0),
            ReferenceDist::Empirical(ref v) => {
                v.partition_point(|&s| s <= x) as f64 / v.len() as f64
            }
        }
    }

    /// `F(x-) = P(X < x)`; equal to `cdf` for continuous families.
    pub fn cdf_left(&self, x: f64) -> f64 {
        match self {
            ReferenceDist::Empirical(v) => v.partition_point(|&s| s < x) as f64 / v.len() as f64,
            _ => self.cdf(x),
        }
    }
}

fn t_cdf(nu: f64, x: f64) -> f64 {
    if nu == 2.0 {
        student_t2_cdf(x)
    } else {
        StudentsT::new(0.0, 1.0, nu)
            .expect("validated degrees of freedom")
            .cdf(x)
    }
}

/// Validating wrapper around [`ReferenceDist::cdf`].
pub fn reference_cdf(dist: &ReferenceDist, x: f64) -> Result<f64, StatsError> {
    dist.validate()?;
    Ok(dist.cdf(x))
}

impl fmt::Display for ReferenceDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceDist::StudentT { nu } => write!(f, "studentt:{nu}"),
            ReferenceDist::HalfStudentT { nu } => write!(f, "halft:{nu}"),
            ReferenceDist::Gamma { shape, beta, mode } => write!(f, "gamma:{shape},{beta},{mode}"),
            ReferenceDist::Laplace { lambda, mu, mode } => write!(f, "laplace:{lambda},{mu},{mode}"),
            ReferenceDist::Normal { mean, sd } => write!(f, "normal:{mean},{sd}"),
            ReferenceDist::Uniform { low, high } => write!(f, "uniform:{low},{high}"),
            ReferenceDist::Empirical(v) => write!(f, "empirical:n={}", v.len()),
        }
    }
}

impl FromStr for ReferenceDist {
    type Err = StatsError;

    /// `studentt:2`, `halft:2`, `gamma:12.06,0.08[,scale|rate]`,
    /// `laplace:185.71,1.0[,scale|rate]` (lambda, mu), `normal:0,1`,
    /// `uniform:0,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, params) = split_params(s)?;
        let with_mode = |params: &[&str]| -> Result<(Vec<f64>, ParamMode), StatsError> {
            match params.len() {
                2 => Ok((parse_reals(&family, params, 2)?, ParamMode::default())),
                3 => Ok((parse_reals(&family, &params[..2], 2)?, params[2].parse()?)),
                n => Err(StatsError::Parse(format!("{family} takes 2 or 3 parameters, got {n}"))),
            }
        };
        let dist = match family.as_str() {
            "studentt" | "t" | "student" => {
                ReferenceDist::StudentT { nu: parse_reals(&family, &params, 1)?[0] }
            }
            "halft" | "half-t" | "halfstudentt" => {
                ReferenceDist::HalfStudentT { nu: parse_reals(&family, &params, 1)?[0] }
            }
            "gamma" => {
                let (p, mode) = with_mode(&params)?;
                ReferenceDist::Gamma { shape: p[0], beta: p[1], mode }
            }
            "laplace" => {
                let (p, mode) = with_mode(&params)?;
                ReferenceDist::Laplace { lambda: p[0], mu: p[1], mode }
            }
            "normal" | "gaussian" => {
                let p = parse_reals(&family, &params, 2)?;
                ReferenceDist::Normal { mean: p[0], sd: p[1] }
            }
            "uniform" => {
                let p = parse_reals(&family, &params, 2)?;
                ReferenceDist::Uniform { low: p[0], high: p[1] }
            }
            other => return Err(StatsError::Parse(format!("unknown reference family {other:?}"))),
        };
        dist.validate()?;
        Ok(dist)
    }
}
