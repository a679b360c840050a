//! Append-only event log.
//!
//! One record per line, four tab-separated fields:
//!
//! ```text
//! tick <TAB> agent <TAB> kind <TAB> k1=v1;k2=v2
//! ```
//!
//! Reserved characters inside fields (`%`, tab, CR, LF, `;`, `=`) are
//! percent-escaped so any string survives a write/read cycle. Reals are
//! rendered with [`format_real`].

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LogError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Record category. Unknown kinds read from a file are kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecordKind {
    Belief,
    Event,
    Mode,
    Priority,
    Assignment,
    Dropped,
    Violation,
    Other(String),
}

impl RecordKind {
    pub fn as_str(&self) -> &str {
        match self {
            RecordKind::Belief => "belief",
            RecordKind::Event => "event",
            RecordKind::Mode => "mode",
            RecordKind::Priority => "priority",
            RecordKind::Assignment => "assignment",
            RecordKind::Dropped => "dropped",
            RecordKind::Violation => "violation",
            RecordKind::Other(s) => s,
        }
    }
}

impl From<&str> for RecordKind {
    fn from(s: &str) -> Self {
        match s {
            "belief" => RecordKind::Belief,
            "event" => RecordKind::Event,
            "mode" => RecordKind::Mode,
            "priority" => RecordKind::Priority,
            "assignment" => RecordKind::Assignment,
            "dropped" => RecordKind::Dropped,
            "violation" => RecordKind::Violation,
            other => RecordKind::Other(other.to_string()),
        }
    }
}

impl fmt::Display for RecordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogRecord {
    pub tick: u64,
    pub agent: String,
    pub kind: RecordKind,
    pub payload: Vec<(String, String)>,
}

impl LogRecord {
    pub fn new(tick: u64, agent: impl Into<String>, kind: RecordKind) -> Self {
        LogRecord {
            tick,
            agent: agent.into(),
            kind,
            payload: Vec::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.payload.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.payload
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for LogRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t",
            self.tick,
            escape(&self.agent),
            escape(self.kind.as_str())
        )?;
        for (i, (k, v)) in self.payload.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}={}", escape(k), escape(v))?;
        }
        Ok(())
    }
}

impl FromStr for LogRecord {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let fields: Vec<&str> = line.splitn(4, '\t').collect();
        if fields.len() != 4 {
            return Err(format!(
                "expected 4 tab-separated fields, found {}",
                fields.len()
            ));
        }
        let tick = fields[0]
            .parse::<u64>()
            .map_err(|_| format!("invalid tick field {:?}", fields[0]))?;
        let agent = unescape(fields[1])?;
        let kind = unescape(fields[2])?;
        if kind.is_empty() {
            return Err("empty kind field".to_string());
        }
        let mut payload = Vec::new();
        if !fields[3].is_empty() {
            for pair in fields[3].split(';') {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| format!("payload entry {pair:?} has no '='"))?;
                payload.push((unescape(k)?, unescape(v)?));
            }
        }
        Ok(LogRecord {
            tick,
            agent,
            kind: RecordKind::from(kind.as_str()),
            payload,
        })
    }
}

/// Renders a real with six fractional digits.
///
/// `std` formatting rounds the exact binary value, half-to-even on exact
/// ties (`0.0078125` prints as `0.007812`). Negative zero prints as
/// `0.000000`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0.000000".to_string();
    }
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '%' => out.push_str("%25"),
            '\t' => out.push_str("%09"),
            '\n' => out.push_str("%0A"),
            '\r' => out.push_str("%0D"),
            ';' => out.push_str("%3B"),
            '=' => out.push_str("%3D"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Result<String, String> {
    if !s.contains('%') {
        return Ok(s.to_string());
    }
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(pos) = rest.find('%') {
        out.push_str(&rest[..pos]);
        let code = rest
            .get(pos + 1..pos + 3)
            .ok_or_else(|| format!("truncated escape in {s:?}"))?;
        out.push(match code {
            "25" => '%',
            "09" => '\t',
            "0A" => '\n',
            "0D" => '\r',
            "3B" => ';',
            "3D" => '=',
            _ => return Err(format!("unknown escape %{code} in {s:?}")),
        });
        rest = &rest[pos + 3..];
    }
    out.push_str(rest);
    Ok(out)
}

pub fn write_log<W: Write>(mut w: W, records: &[LogRecord]) -> io::Result<()> {
    for r in records {
        writeln!(w, "{r}")?;
    }
    Ok(())
}

pub fn read_log<R: BufRead>(r: R) -> Result<Vec<LogRecord>, LogError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        out.push(
            line.parse()
                .map_err(|message| LogError::Parse { line: i + 1, message })?,
        );
    }
    Ok(out)
}

/// Write-then-read through an in-memory buffer.
pub fn log_roundtrip(records: &[LogRecord]) -> Result<Vec<LogRecord>, LogError> {
    let mut buf = Vec::new();
    write_log(&mut buf, records)?;
    read_log(buf.as_slice())
}

/// Checks that `(tick, agent)` is non-decreasing, which together with
/// file position gives a strictly increasing `(tick, agent, sequence)`.
pub fn is_ordered(records: &[LogRecord]) -> bool {
    records
        .windows(2)
        .all(|w| (w[0].tick, &w[0].agent) <= (w[1].tick, &w[1].agent))
}
