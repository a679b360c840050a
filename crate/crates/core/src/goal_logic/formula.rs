use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Propositional formula over goal atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GoalFormula {
    Atom(String),
    Not(Box<GoalFormula>),
    And(Vec<GoalFormula>),
    Or(Vec<GoalFormula>),
}

impl GoalFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        GoalFormula::Atom(name.into())
    }

    pub fn and_of<I, S>(atoms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        GoalFormula::And(atoms.into_iter().map(GoalFormula::atom).collect())
    }

    /// Classical evaluation: an atom holds iff it is in `goals`.
    pub fn holds(&self, goals: &BTreeSet<String>) -> bool {
        match self {
            GoalFormula::Atom(a) => goals.contains(a),
            GoalFormula::Not(f) => !f.holds(goals),
            GoalFormula::And(fs) => fs.iter().all(|f| f.holds(goals)),
            GoalFormula::Or(fs) => fs.iter().any(|f| f.holds(goals)),
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            GoalFormula::Atom(a) => {
                out.insert(a);
            }
            GoalFormula::Not(f) => f.collect_atoms(out),
            GoalFormula::And(fs) | GoalFormula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_atoms(out))
            }
        }
    }
}

impl fmt::Display for GoalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoalFormula::Atom(a) => f.write_str(a),
            GoalFormula::Not(inner) => match **inner {
                GoalFormula::Atom(_) | GoalFormula::Not(_) => write!(f, "!{inner}"),
                _ => write!(f, "!({inner})"),
            },
            GoalFormula::And(fs) => join(f, fs, " & "),
            GoalFormula::Or(fs) => join(f, fs, " | "),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, fs: &[GoalFormula], sep: &str) -> fmt::Result {
    for (i, sub) in fs.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        match sub {
            GoalFormula::And(_) | GoalFormula::Or(_) => write!(f, "({sub})")?,
            _ => write!(f, "{sub}")?,
        }
    }
    Ok(())
}

/// A goal conflict constraint `!G{body}`: the goal state must never make
/// `body` true.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Forbidden {
    pub body: GoalFormula,
}

impl Forbidden {
    pub fn pair(a: impl Into<String>, b: impl Into<String>) -> Self {
        Forbidden {
            body: GoalFormula::And(vec![GoalFormula::atom(a), GoalFormula::atom(b)]),
        }
    }
}

impl fmt::Display for Forbidden {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "!G{{{}}}", self.body)
    }
}

impl FromStr for Forbidden {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix("!G{")
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| format!("expected !G{{...}}, found {s:?}"))?;
        Ok(Forbidden {
            body: inner.parse()?,
        })
    }
}

impl FromStr for GoalFormula {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = tokenize(s)?;
        let mut p = Parser { tokens, pos: 0 };
        let f = p.or()?;
        if p.pos != p.tokens.len() {
            return Err(format!("trailing input in formula {s:?}"));
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    And,
    Or,
    Not,
    Open,
    Close,
}

pub(crate) fn is_atom_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '&' => {
                chars.next();
                out.push(Tok::And);
            }
            '|' => {
                chars.next();
                out.push(Tok::Or);
            }
            '!' => {
                chars.next();
                out.push(Tok::Not);
            }
            '(' => {
                chars.next();
                out.push(Tok::Open);
            }
            ')' => {
                chars.next();
                out.push(Tok::Close);
            }
            c if is_atom_char(c) => {
                let mut id = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_atom_char(c) {
                        break;
                    }
                    id.push(c);
                    chars.next();
                }
                out.push(Tok::Ident(id));
            }
            other => return Err(format!("unexpected character {other:?} in formula")),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn or(&mut self) -> Result<GoalFormula, String> {
        let mut parts = vec![self.and()?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            GoalFormula::Or(parts)
        })
    }

    fn and(&mut self) -> Result<GoalFormula, String> {
        let mut parts = vec![self.unary()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            GoalFormula::And(parts)
        })
    }

    fn unary(&mut self) -> Result<GoalFormula, String> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(GoalFormula::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let f = self.or()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err("missing ')'".to_string());
                }
                self.pos += 1;
                Ok(f)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                Ok(GoalFormula::Atom(id))
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of formula".to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn goals(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_and_evaluates() {
        let f: GoalFormula = "A & !(B | C)".parse().unwrap();
        assert!(f.holds(&goals(&["A"])));
        assert!(!f.holds(&goals(&["A", "C"])));
        assert_eq!(f.to_string(), "A & !(B | C)");
    }

    #[test]
    fn forbidden_roundtrips_through_text() {
        let f: Forbidden = "!G{SwitchOff & FrequencyHopping}".parse().unwrap();
        assert_eq!(f, Forbidden::pair("SwitchOff", "FrequencyHopping"));
        assert_eq!(f.to_string(), "!G{SwitchOff & FrequencyHopping}");
    }

    #[test]
    fn rejects_malformed() {
        assert!("A &".parse::<GoalFormula>().is_err());
        assert!("(A".parse::<GoalFormula>().is_err());
        assert!("A B".parse::<GoalFormula>().is_err());
        assert!("G{A}".parse::<Forbidden>().is_err());
    }
}
