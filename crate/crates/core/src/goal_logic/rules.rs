use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::formula::{is_atom_char, Forbidden};
use super::GoalError;

/// `beliefs | k- | k+ => derived`
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoalInferenceRule {
    pub beliefs: BTreeSet<String>,
    pub negative: BTreeSet<String>,
    pub positive: BTreeSet<String>,
    pub derived: String,
}

impl GoalInferenceRule {
    pub fn new<B, N, P, S>(beliefs: B, negative: N, positive: P, derived: &str) -> Result<Self, GoalError>
    where
        B: IntoIterator<Item = S>,
        N: IntoIterator<Item = S>,
        P: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let rule = GoalInferenceRule {
            beliefs: beliefs.into_iter().map(Into::into).collect(),
            negative: negative.into_iter().map(Into::into).collect(),
            positive: positive.into_iter().map(Into::into).collect(),
            derived: derived.to_string(),
        };
        if rule.negative.contains(&rule.derived) {
            return Err(GoalError::SelfConflict(rule.derived));
        }
        Ok(rule)
    }
}

fn atoms(s: &str) -> Result<BTreeSet<String>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(|a| {
            if a.chars().all(is_atom_char) {
                Ok(a.to_string())
            } else {
                Err(format!("invalid atom {a:?}"))
            }
        })
        .collect()
}

impl FromStr for GoalInferenceRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lhs, derived) = s
            .split_once("=>")
            .ok_or_else(|| format!("rule {s:?} has no '=>'"))?;
        let parts: Vec<&str> = lhs.split('|').collect();
        if parts.len() != 3 {
            return Err(format!(
                "rule needs three '|'-separated groups (beliefs | k- | k+), found {}",
                parts.len()
            ));
        }
        let derived = derived.trim();
        let mut d = atoms(derived)?;
        if d.len() != 1 {
            return Err(format!("rule must derive exactly one goal, found {derived:?}"));
        }
        let derived = d.pop_first().unwrap();
        GoalInferenceRule::new(atoms(parts[0])?, atoms(parts[1])?, atoms(parts[2])?, &derived)
            .map_err(|e| e.to_string())
    }
}

impl fmt::Display for GoalInferenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(", ");
        write!(
            f,
            "{} | {} | {} => {}",
            j(&self.beliefs),
            j(&self.negative),
            j(&self.positive),
            self.derived
        )
    }
}

/// Rules plus the conflict constraints checked against goal states.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RuleSet {
    pub rules: Vec<GoalInferenceRule>,
    pub forbidden: Vec<Forbidden>,
}

impl RuleSet {
    /// The surveillance-radar rules and its four forbidden mode pairs.
    pub fn radar() -> Self {
        RADAR_RULES.parse().expect("bundled radar rules parse")
    }

    /// Parses numbered lines; blank lines, `#` comments and a `[GIR]`
    /// header are skipped.
    pub fn parse_lines<'a, I>(lines: I) -> Result<Self, GoalError>
    where
        I: IntoIterator<Item = (usize, &'a str)>,
    {
        let mut out = RuleSet::default();
        for (line, raw) in lines {
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() || text.eq_ignore_ascii_case("[GIR]") {
                continue;
            }
            let parsed = if text.starts_with("!G") {
                text.parse::<Forbidden>().map(|f| out.forbidden.push(f))
            } else {
                text.parse::<GoalInferenceRule>().map(|r| out.rules.push(r))
            };
            parsed.map_err(|message| GoalError::Parse { line, message })?;
        }
        Ok(out)
    }
}

impl FromStr for RuleSet {
    type Err = GoalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleSet::parse_lines(s.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        for c in &self.forbidden {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

const RADAR_RULES: &str = "\
Jammed | FrequencyHopping | => SwitchOff
Jammed | SwitchOff | => FrequencyHopping
| | FrequencyHopping => SenseMode
| | SwitchOff => SleepMode
!G{SwitchOff & FrequencyHopping}
!G{SenseMode & SleepMode}
!G{SwitchOff & SenseMode}
!G{FrequencyHopping & SleepMode}
";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_textual_rule() {
        let r: GoalInferenceRule = "Jammed | FrequencyHopping | => SwitchOff".parse().unwrap();
        assert_eq!(r.beliefs, BTreeSet::from(["Jammed".to_string()]));
        assert_eq!(r.negative, BTreeSet::from(["FrequencyHopping".to_string()]));
        assert!(r.positive.is_empty());
        assert_eq!(r.derived, "SwitchOff");
        assert_eq!(r.to_string(), "Jammed | FrequencyHopping |  => SwitchOff");
    }

    #[test]
    fn radar_rules_shape() {
        let rs = RuleSet::radar();
        assert_eq!(rs.rules.len(), 4);
        assert_eq!(rs.forbidden.len(), 4);
        let again: RuleSet = rs.to_string().parse().unwrap();
        assert_eq!(again, rs);
    }

    #[test]
    fn rejects_self_conflict() {
        let err = "A | G | => G".parse::<GoalInferenceRule>().unwrap_err();
        assert!(err.contains("conflicting"), "{err}");
    }

    #[test]
    fn reports_line_numbers() {
        let err = "# header\nJammed | | => A\nJammed => B\n"
            .parse::<RuleSet>()
            .unwrap_err();
        assert!(matches!(err, GoalError::Parse { line: 3, .. }));
    }
}
