use std::fmt;
use std::str::FromStr;

use super::ks::{ks_statistic, KsResult, DEFAULT_ALPHA};
use super::{generate_counts, DistributionSpec, ParamMode, ReferenceDist, StatsError};
use crate::log::format_real;
use crate::srdr::{classify_ntd, compute_ntd, Classification, SrdrConfig};

/// Element `i` is the NTD between `counts[i]` and `counts[i + 1]`.
pub fn ntd_series(counts: &[u64]) -> Result<Vec<f64>, StatsError> {
    SeriesTransform::Ntd.apply(counts)
}

/// How consecutive counts become the sample handed to the KS test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesTransform {
    /// `|n_t - n_{t+1}| / n_t`
    Ntd,
    /// `(n_t - n_{t+1}) / n_t`
    SignedNtd,
    /// `n_{t+1} / n_t`
    CountRatio,
}

impl SeriesTransform {
    pub const ALL: [SeriesTransform; 3] =
        [SeriesTransform::Ntd, SeriesTransform::SignedNtd, SeriesTransform::CountRatio];

    pub fn as_str(self) -> &'static str {
        match self {
            SeriesTransform::Ntd => "ntd",
            SeriesTransform::SignedNtd => "signed-ntd",
            SeriesTransform::CountRatio => "count-ratio",
        }
    }

    pub fn apply(self, counts: &[u64]) -> Result<Vec<f64>, StatsError> {
        if counts.len() < 2 {
            return Err(StatsError::TooShort { len: counts.len(), min: 2 });
        }
        counts
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let (a, b) = (w[0], w[1]);
                match self {
                    SeriesTransform::Ntd => Ok(compute_ntd(a, b)),
                    SeriesTransform::SignedNtd => {
                        let sign = if b > a { -1.0 } else { 1.0 };
                        Ok(sign * compute_ntd(a, b))
                    }
                    SeriesTransform::CountRatio if a == 0 => Err(StatsError::ZeroCount { index: i }),
                    SeriesTransform::CountRatio => Ok(b as f64 / a as f64),
                }
            })
            .collect()
    }
}

impl fmt::Display for SeriesTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeriesTransform {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SeriesTransform::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| StatsError::Parse(format!("unknown series transform {s:?}")))
    }
}

/// One (series, reference) pair the harness measures.
#[derive(Debug, Clone, PartialEq)]
pub struct FitCase {
    pub transform: SeriesTransform,
    pub reference: ReferenceDist,
}

/// The published reference for each source family, under every reading
/// the harness tries.
///
/// Normal sources compare against t(2): the magnitude series against the
/// folded t, the signed series against t itself. Gamma and Laplace rows
/// are tried on both the NTD and the count ratio, in both parameter modes.
pub fn table1_fits(spec: &DistributionSpec) -> Vec<FitCase> {
    let both = |make: &dyn Fn(ParamMode) -> ReferenceDist| {
        [SeriesTransform::Ntd, SeriesTransform::CountRatio]
            .into_iter()
            .flat_map(|transform| {
                ParamMode::ALL
                    .into_iter()
                    .map(move |m| (transform, m))
            })
            .map(|(transform, m)| FitCase { transform, reference: make(m) })
            .collect::<Vec<_>>()
    };
    match spec {
        DistributionSpec::Normal { .. } => vec![
            FitCase {
                transform: SeriesTransform::Ntd,
                reference: ReferenceDist::HalfStudentT { nu: 2.0 },
            },
            FitCase {
                transform: SeriesTransform::SignedNtd,
                reference: ReferenceDist::StudentT { nu: 2.0 },
            },
        ],
        DistributionSpec::Triangular { .. } => {
            both(&|mode| ReferenceDist::Gamma { shape: 12.06, beta: 0.08, mode })
        }
        DistributionSpec::Uniform { .. } => {
            both(&|mode| ReferenceDist::Gamma { shape: 4.90, beta: 0.22, mode })
        }
        DistributionSpec::Exponential { .. } => {
            both(&|mode| ReferenceDist::Laplace { lambda: 185.71, mu: 1.0, mode })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KsEntry {
    pub transform: SeriesTransform,
    /// Reference name in report keys; fitted references get a short tag.
    pub label: String,
    pub reference: ReferenceDist,
    pub result: KsResult,
}

/// Tally of one NTD series plus its KS distances.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub dist: Option<DistributionSpec>,
    pub seed: u64,
    pub total: usize,
    pub no_action_count: usize,
    pub fh_count: usize,
    pub off_count: usize,
    pub jamming_count: usize,
    pub ks_against: Vec<KsEntry>,
}

fn fraction(k: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        k as f64 / n as f64
    }
}

impl ExperimentReport {
    /// Classifies every consecutive pair of `counts` and measures the KS
    /// distances: the NTD series against t(2), folded t(2) and a fitted
    /// Normal, plus the published fits for `dist`'s family. Pairs a
    /// transform cannot handle (a zero count under the ratio) drop that
    /// entry rather than the report.
    pub fn from_counts(
        dist: Option<DistributionSpec>,
        seed: u64,
        counts: &[u64],
        cfg: &SrdrConfig,
    ) -> Result<Self, StatsError> {
        let ntd = ntd_series(counts)?;
        let mut report = ExperimentReport {
            dist,
            seed,
            total: ntd.len(),
            no_action_count: 0,
            fh_count: 0,
            off_count: 0,
            jamming_count: 0,
            ks_against: Vec::new(),
        };
        for &x in &ntd {
            match classify_ntd(x, cfg) {
                Classification::NoAction => report.no_action_count += 1,
                Classification::FrequencyHopping => report.fh_count += 1,
                Classification::SwitchOff => report.off_count += 1,
            }
        }
        report.jamming_count = report.fh_count + report.off_count;

        let mut cases = vec![FitCase {
            transform: SeriesTransform::Ntd,
            reference: ReferenceDist::StudentT { nu: 2.0 },
        }];
        if let Some(d) = &dist {
            cases.extend(table1_fits(d));
        } else {
            cases.push(FitCase {
                transform: SeriesTransform::Ntd,
                reference: ReferenceDist::HalfStudentT { nu: 2.0 },
            });
        }
        for case in cases {
            let Ok(series) = case.transform.apply(counts) else {
                continue;
            };
            let result = ks_statistic(&series, &case.reference, DEFAULT_ALPHA)?;
            report.ks_against.push(KsEntry {
                transform: case.transform,
                label: case.reference.to_string(),
                reference: case.reference,
                result,
            });
        }
        if let Ok(fitted) = ReferenceDist::fitted_normal(&ntd) {
            let result = ks_statistic(&ntd, &fitted, DEFAULT_ALPHA)?;
            report.ks_against.push(KsEntry {
                transform: SeriesTransform::Ntd,
                label: "fitted-normal".into(),
                reference: fitted,
                result,
            });
        }
        Ok(report)
    }

    pub fn jamming_fraction(&self) -> f64 {
        fraction(self.jamming_count, self.total)
    }

    pub fn fh_fraction(&self) -> f64 {
        fraction(self.fh_count, self.total)
    }

    pub fn off_fraction(&self) -> f64 {
        fraction(self.off_count, self.total)
    }

    pub fn entry(&self, transform: SeriesTransform, label: &str) -> Option<&KsEntry> {
        self.ks_against
            .iter()
            .find(|e| e.transform == transform && e.label == label)
    }

    pub fn d_against(&self, transform: SeriesTransform, label: &str) -> Option<f64> {
        self.entry(transform, label).map(|e| e.result.d_stat)
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = &self.dist {
            writeln!(f, "dist={d}")?;
        }
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "total={}", self.total)?;
        writeln!(f, "no_action={}", self.no_action_count)?;
        writeln!(f, "jamming={}", self.jamming_count)?;
        writeln!(f, "frequency_hopping={}", self.fh_count)?;
        writeln!(f, "switch_off={}", self.off_count)?;
        writeln!(f, "jamming_fraction={}", format_real(self.jamming_fraction()))?;
        writeln!(f, "fh_fraction={}", format_real(self.fh_fraction()))?;
        writeln!(f, "off_fraction={}", format_real(self.off_fraction()))?;
        for e in &self.ks_against {
            writeln!(f, "ks.{}.{}={}", e.transform, e.label, format_real(e.result.d_stat))?;
        }
        Ok(())
    }
}

/// Draws `n + 1` counts so the report covers `n` NTD samples.
pub fn run_ntd_experiment(
    spec: DistributionSpec,
    n: usize,
    seed: u64,
    cfg: &SrdrConfig,
) -> Result<ExperimentReport, StatsError> {
    if n < 2 {
        return Err(StatsError::TooShort { len: n, min: 2 });
    }
    let counts = generate_counts(spec, n + 1, seed)?;
    ExperimentReport::from_counts(Some(spec), seed, &counts, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ntd_series_examples() {
        assert_eq!(ntd_series(&[20, 20, 20]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(ntd_series(&[20, 8, 8]).unwrap(), vec![0.6, 0.0]);
        assert!(matches!(ntd_series(&[20]), Err(StatsError::TooShort { .. })));
    }

    #[test]
    fn transforms() {
        assert_eq!(SeriesTransform::SignedNtd.apply(&[10, 15, 3]).unwrap(), vec![-0.5, 0.8]);
        assert_eq!(SeriesTransform::CountRatio.apply(&[10, 15, 3]).unwrap(), vec![1.5, 0.2]);
        assert!(matches!(
            SeriesTransform::CountRatio.apply(&[10, 0, 3]),
            Err(StatsError::ZeroCount { index: 1 })
        ));
    }

    #[test]
    fn partition_holds() {
        let spec = DistributionSpec::Normal { mean: 20.0, sd: 10.0 };
        let r = run_ntd_experiment(spec, 500, 1, &SrdrConfig::default()).unwrap();
        assert_eq!(r.total, 500);
        assert_eq!(r.jamming_count, r.fh_count + r.off_count);
        assert_eq!(r.total, r.no_action_count + r.jamming_count);
    }

    #[test]
    fn report_is_deterministic() {
        let spec = DistributionSpec::Uniform { low: 10.0, high: 30.0 };
        let a = run_ntd_experiment(spec, 300, 9, &SrdrConfig::default()).unwrap();
        let b = run_ntd_experiment(spec, 300, 9, &SrdrConfig::default()).unwrap();
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn report_lines_are_key_value() {
        let spec = DistributionSpec::Triangular { mode: 20.0, low: 10.0, high: 30.0 };
        let r = run_ntd_experiment(spec, 100, 2, &SrdrConfig::default()).unwrap();
        let text = r.to_string();
        assert!(text.lines().all(|l| l.split_once('=').is_some()));
        assert!(text.contains("ks.count-ratio.gamma:12.06,0.08,scale="));
        assert!(text.contains("ks.ntd.fitted-normal="));
    }

    #[test]
    fn table1_case_counts() {
        let n = DistributionSpec::Normal { mean: 20.0, sd: 10.0 };
        assert_eq!(table1_fits(&n).len(), 2);
        let e = DistributionSpec::Exponential { shift: 10.0, mean: 20.0 };
        assert_eq!(table1_fits(&e).len(), 4);
    }
}
