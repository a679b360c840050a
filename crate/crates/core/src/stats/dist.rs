use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp, Normal, Triangular, Uniform};

use super::StatsError;

/// Redraws allowed per count before giving up on a spec that almost never
/// produces a positive value.
pub const MAX_REDRAWS: usize = 10_000;

/// Source family for simulated detection counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    Normal { mean: f64, sd: f64 },
    Triangular { mode: f64, low: f64, high: f64 },
    Uniform { low: f64, high: f64 },
    /// `shift + Exp(mean)`: `mean` is the mean of the exponential part.
    Exponential { shift: f64, mean: f64 },
}

impl DistributionSpec {
    pub fn family(&self) -> &'static str {
        match self {
            DistributionSpec::Normal { .. } => "normal",
            DistributionSpec::Triangular { .. } => "triangular",
            DistributionSpec::Uniform { .. } => "uniform",
            DistributionSpec::Exponential { .. } => "exponential",
        }
    }

    pub fn validate(&self) -> Result<(), StatsError> {
        let ok = match *self {
            DistributionSpec::Normal { mean, sd } => mean.is_finite() && sd.is_finite() && sd > 0.0,
            DistributionSpec::Triangular { mode, low, high } => {
                low.is_finite() && high.is_finite() && low < high && low <= mode && mode <= high
            }
            DistributionSpec::Uniform { low, high } => {
                low.is_finite() && high.is_finite() && low < high
            }
            DistributionSpec::Exponential { shift, mean } => {
                shift.is_finite() && mean.is_finite() && mean > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(StatsError::InvalidSpec(format!("parameters out of range for {self}")))
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DistributionSpec::Normal { mean, sd } => write!(f, "normal:{mean},{sd}"),
            DistributionSpec::Triangular { mode, low, high } => {
                write!(f, "triangular:{mode},{low},{high}")
            }
            DistributionSpec::Uniform { low, high } => write!(f, "uniform:{low},{high}"),
            DistributionSpec::Exponential { shift, mean } => write!(f, "exponential:{shift},{mean}"),
        }
    }
}

pub(crate) fn split_params(s: &str) -> Result<(String, Vec<&str>), StatsError> {
    let (family, params) = s
        .split_once(':')
        .ok_or_else(|| StatsError::Parse(format!("expected family:params, got {s:?}")))?;
    let params = params.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    Ok((family.trim().to_ascii_lowercase(), params))
}

pub(crate) fn parse_reals(family: &str, params: &[&str], want: usize) -> Result<Vec<f64>, StatsError> {
    if params.len() != want {
        return Err(StatsError::Parse(format!(
            "{family} takes {want} parameters, got {}",
            params.len()
        )));
    }
    params
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| StatsError::Parse(format!("bad number {p:?} in {family} parameters")))
        })
        .collect()
}

impl FromStr for DistributionSpec {
    type Err = StatsError;

    /// `normal:20,10`, `triangular:20,10,30` (mode, low, high),
    /// `uniform:10,30`, `exponential:10,20` (shift, mean).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, params) = split_params(s)?;
        let spec = match family.as_str() {
            "normal" | "gaussian" => {
                let p = parse_reals(&family, &params, 2)?;
                DistributionSpec::Normal { mean: p[0], sd: p[1] }
            }
            "triangular" => {
                let p = parse_reals(&family, &params, 3)?;
                DistributionSpec::Triangular { mode: p[0], low: p[1], high: p[2] }
            }
            "uniform" => {
                let p = parse_reals(&family, &params, 2)?;
                DistributionSpec::Uniform { low: p[0], high: p[1] }
            }
            "exponential" | "exp" => {
                let p = parse_reals(&family, &params, 2)?;
                DistributionSpec::Exponential { shift: p[0], mean: p[1] }
            }
            other => return Err(StatsError::Parse(format!("unknown distribution family {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

enum Sampler {
    Normal(Normal<f64>),
    Triangular(Triangular<f64>),
    Uniform(Uniform<f64>),
    Exponential(f64, Exp<f64>),
}

/// Seeded count source: ChaCha8 seeded through `seed_from_u64`, variates
/// rounded to the nearest integer, values below 1 redrawn.
pub struct CountSampler {
    rng: ChaCha8Rng,
    sampler: Sampler,
}

impl CountSampler {
    pub fn new(spec: DistributionSpec, seed: u64) -> Result<Self, StatsError> {
        spec.validate()?;
        let bad = |e: String| StatsError::InvalidSpec(e);
        let sampler = match spec {
            DistributionSpec::Normal { mean, sd } => {
                Sampler::Normal(Normal::new(mean, sd).map_err(|e| bad(e.to_string()))?)
            }
            DistributionSpec::Triangular { mode, low, high } => Sampler::Triangular(
                Triangular::new(low, high, mode).map_err(|e| bad(e.to_string()))?,
            ),
            DistributionSpec::Uniform { low, high } => {
                Sampler::Uniform(Uniform::new(low, high).map_err(|e| bad(e.to_string()))?)
            }
            DistributionSpec::Exponential { shift, mean } => {
                Sampler::Exponential(shift, Exp::new(1.0 / mean).map_err(|e| bad(e.to_string()))?)
            }
        };
        Ok(CountSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            sampler,
        })
    }

    fn variate(&mut self) -> f64 {
        match &self.sampler {
            Sampler::Normal(d) => self.rng.sample(d),
            Sampler::Triangular(d) => self.rng.sample(d),
            Sampler::Uniform(d) => self.rng.sample(d),
            Sampler::Exponential(shift, d) => shift + self.rng.sample(d),
        }
    }

    pub fn next_count(&mut self) -> Result<u64, StatsError> {
        for _ in 0..=MAX_REDRAWS {
            let x = self.variate().round();
            if x >= 1.0 {
                return Ok(x as u64);
            }
        }
        Err(StatsError::TruncationExhausted(MAX_REDRAWS))
    }
}

pub fn generate_counts(spec: DistributionSpec, n: usize, seed: u64) -> Result<Vec<u64>, StatsError> {
    if n < 2 {
        return Err(StatsError::TooShort { len: n, min: 2 });
    }
    let mut s = CountSampler::new(spec, seed)?;
    (0..n).map(|_| s.next_count()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["normal:20,10", "triangular:20,10,30", "uniform:10,30", "exponential:10,20"] {
            let d: DistributionSpec = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("normal:20".parse::<DistributionSpec>().is_err());
        assert!("normal:20,-1".parse::<DistributionSpec>().is_err());
        assert!("uniform:30,10".parse::<DistributionSpec>().is_err());
        assert!("triangular:40,10,30".parse::<DistributionSpec>().is_err());
        assert!("cauchy:0,1".parse::<DistributionSpec>().is_err());
        assert!("normal".parse::<DistributionSpec>().is_err());
    }

    #[test]
    fn uniform_counts_stay_in_range() {
        let spec = DistributionSpec::Uniform { low: 10.0, high: 30.0 };
        for seed in 0..5 {
            let c = generate_counts(spec, 2000, seed).unwrap();
            assert!(c.iter().all(|&x| (10..=30).contains(&x)));
        }
    }

    #[test]
    fn same_seed_same_counts() {
        let spec = DistributionSpec::Normal { mean: 20.0, sd: 10.0 };
        assert_eq!(generate_counts(spec, 500, 7).unwrap(), generate_counts(spec, 500, 7).unwrap());
        assert_ne!(generate_counts(spec, 500, 7).unwrap(), generate_counts(spec, 500, 8).unwrap());
    }

    #[test]
    fn counts_are_positive() {
        let spec = DistributionSpec::Normal { mean: 1.0, sd: 10.0 };
        assert!(generate_counts(spec, 5000, 3).unwrap().iter().all(|&c| c >= 1));
    }

    #[test]
    fn hopeless_spec_gives_up() {
        let spec = DistributionSpec::Normal { mean: -1000.0, sd: 1.0 };
        assert!(matches!(
            generate_counts(spec, 2, 0),
            Err(StatsError::TruncationExhausted(_))
        ));
    }

    #[test]
    fn needs_two_counts() {
        let spec = DistributionSpec::Uniform { low: 10.0, high: 30.0 };
        assert!(matches!(generate_counts(spec, 1, 0), Err(StatsError::TooShort { .. })));
    }
}
