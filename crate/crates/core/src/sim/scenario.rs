use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::goal_logic::RuleSet;
use crate::lccc::{
    Aircraft, Cluster, Interceptor, LcccConfig, Mission, PackageLabel, Point, Trapezoid, VavpPoint,
};
use crate::stats::DistributionSpec;

use super::ScenarioError;

pub const DEFAULT_SIMULATION_TIME: u64 = 60;
pub const DEFAULT_WORLD_SIZE: f64 = 1000.0;

/// Detection-count suppression over an inclusive tick window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JammingEpisode {
    pub start: u64,
    pub end: u64,
    pub factor: f64,
}

impl JammingEpisode {
    pub fn contains(&self, tick: u64) -> bool {
        self.start <= tick && tick <= self.end
    }
}

/// A cluster as scripted in a scenario: visible on `[from, until]`,
/// moving piecewise-linearly through its waypoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterTrack {
    pub cluster: Cluster,
    pub from: u64,
    pub until: Option<u64>,
    /// `(tick, point)` pairs after `from`, ascending.
    pub path: Vec<(u64, Point)>,
}

impl ClusterTrack {
    pub fn visible_at(&self, tick: u64) -> bool {
        tick >= self.from && self.until.is_none_or(|u| tick <= u)
    }

    pub fn location_at(&self, tick: u64) -> Point {
        let mut prev = (self.from, self.cluster.location);
        for &(t, p) in &self.path {
            if tick <= t {
                if t == prev.0 {
                    return p;
                }
                let w = (tick.saturating_sub(prev.0)) as f64 / (t - prev.0) as f64;
                return Point::new(
                    prev.1.x + w * (p.x - prev.1.x),
                    prev.1.y + w * (p.y - prev.1.y),
                );
            }
            prev = (t, p);
        }
        prev.1
    }

    /// The cluster as seen at `tick`.
    pub fn at(&self, tick: u64) -> Cluster {
        Cluster {
            location: self.location_at(tick),
            ..self.cluster.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub width: f64,
    pub height: f64,
    pub simulation_time: u64,
    pub seed: u64,
    /// LCCC runs on ticks divisible by this, when clusters are visible.
    pub lccc_cadence: u64,
    pub vavps: Vec<VavpPoint>,
    pub clusters: Vec<ClusterTrack>,
    pub interceptors: Vec<Interceptor>,
    pub detection: DistributionSpec,
    pub jamming: Vec<JammingEpisode>,
    pub rules: RuleSet,
    pub lccc: LcccConfig,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            width: DEFAULT_WORLD_SIZE,
            height: DEFAULT_WORLD_SIZE,
            simulation_time: DEFAULT_SIMULATION_TIME,
            seed: 0,
            lccc_cadence: 1,
            vavps: Vec::new(),
            clusters: Vec::new(),
            interceptors: Vec::new(),
            detection: DistributionSpec::Normal { mean: 20.0, sd: 10.0 },
            jamming: Vec::new(),
            rules: RuleSet::radar(),
            lccc: LcccConfig::default(),
        }
    }
}

impl Scenario {
    pub fn factor_at(&self, tick: u64) -> Option<f64> {
        self.jamming.iter().find(|e| e.contains(tick)).map(|e| e.factor)
    }

    pub fn clusters_at(&self, tick: u64) -> Vec<Cluster> {
        self.clusters
            .iter()
            .filter(|c| c.visible_at(tick))
            .map(|c| c.at(tick))
            .collect()
    }

    fn in_bounds(&self, p: &Point) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }

    /// Checks every invariant the world loop relies on.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let fail = |m: String| Err(ScenarioError::Validation(m));
        if !(self.width > 0.0 && self.height > 0.0) {
            return fail("world bounds must be positive".into());
        }
        if self.simulation_time < 1 {
            return fail("simulation_time must be at least 1".into());
        }
        if self.lccc_cadence < 1 {
            return fail("lccc_cadence must be at least 1".into());
        }
        if self.vavps.is_empty() {
            return fail("at least one VAVP point is required".into());
        }
        let mut ids = BTreeSet::new();
        let mut unique = |kind: &str, id: &str| {
            if ids.insert(id.to_string()) {
                Ok(())
            } else {
                Err(ScenarioError::Validation(format!("duplicate {kind} id {id:?}")))
            }
        };
        for v in &self.vavps {
            unique("VAVP", &v.id)?;
            if v.value.is_nan() || v.value <= 0.0 {
                return fail(format!("VAVP {} value must be positive", v.id));
            }
            if !self.in_bounds(&v.location) {
                return fail(format!("VAVP {} lies outside the world bounds", v.id));
            }
        }
        for i in &self.interceptors {
            unique("interceptor", &i.id)?;
            if !self.in_bounds(&i.location) {
                return fail(format!("interceptor {} lies outside the world bounds", i.id));
            }
        }
        let mut largest = 1;
        for t in &self.clusters {
            let c = &t.cluster;
            unique("cluster", &c.id)?;
            if c.members.is_empty() {
                return fail(format!("cluster {} has no aircraft", c.id));
            }
            largest = largest.max(c.aircraft_count());
            for a in &c.members {
                unique("aircraft", &a.id)?;
            }
            if t.until.is_some_and(|u| u < t.from) {
                return fail(format!("cluster {} leaves before it arrives", c.id));
            }
            let mut last = t.from;
            for (tick, p) in &t.path {
                if *tick <= last {
                    return fail(format!("cluster {} waypoints must have increasing ticks", c.id));
                }
                last = *tick;
                if !self.in_bounds(p) {
                    return fail(format!("cluster {} waypoint at tick {tick} lies outside the world bounds", c.id));
                }
            }
            if !self.in_bounds(&c.location) {
                return fail(format!("cluster {} lies outside the world bounds", c.id));
            }
        }
        let mut episodes = self.jamming.clone();
        episodes.sort_by_key(|e| e.start);
        for e in &episodes {
            if e.end < e.start {
                return fail(format!("jamming episode {}-{} ends before it starts", e.start, e.end));
            }
            if !(e.factor > 0.0 && e.factor <= 1.0) {
                return fail(format!("jamming factor {} must lie in (0, 1]", e.factor));
            }
        }
        for w in episodes.windows(2) {
            if w[1].start <= w[0].end {
                return fail(format!(
                    "jamming episodes {}-{} and {}-{} overlap",
                    w[0].start, w[0].end, w[1].start, w[1].end
                ));
            }
        }
        self.detection
            .validate()
            .map_err(|e| ScenarioError::Validation(e.to_string()))?;
        self.lccc
            .trapezoids
            .validate(largest)
            .map_err(ScenarioError::Validation)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    World,
    Vavp,
    Cluster,
    Interceptor,
    Detection,
    Jamming,
    Gir,
    Fuzzy,
}

impl Section {
    fn from_header(h: &str) -> Option<Section> {
        Some(match h.to_ascii_uppercase().as_str() {
            "WORLD" => Section::World,
            "VAVP" => Section::Vavp,
            "CLUSTER" => Section::Cluster,
            "INTERCEPTOR" => Section::Interceptor,
            "DETECTION" => Section::Detection,
            "JAMMING" => Section::Jamming,
            "GIR" => Section::Gir,
            "FUZZY" => Section::Fuzzy,
            _ => return None,
        })
    }
}

/// One record line: an optional leading id, then `key=value` fields.
struct Record<'a> {
    line: usize,
    id: Option<&'a str>,
    fields: BTreeMap<&'a str, &'a str>,
}

impl<'a> Record<'a> {
    fn parse(line: usize, text: &'a str) -> Result<Self, ScenarioError> {
        let mut id = None;
        let mut fields = BTreeMap::new();
        for (i, tok) in text.split_whitespace().enumerate() {
            match tok.split_once('=') {
                Some((k, v)) => {
                    if k.is_empty() || fields.insert(k, v).is_some() {
                        return Err(perr(line, format!("bad or repeated field {tok:?}")));
                    }
                }
                None if i == 0 => id = Some(tok),
                None => return Err(perr(line, format!("expected key=value, got {tok:?}"))),
            }
        }
        Ok(Record { line, id, fields })
    }

    fn id(&self, what: &str) -> Result<&'a str, ScenarioError> {
        self.id.ok_or_else(|| perr(self.line, format!("{what} record needs a leading id")))
    }

    fn take(&mut self, key: &str) -> Option<&'a str> {
        self.fields.remove(key)
    }

    fn need(&mut self, key: &str) -> Result<&'a str, ScenarioError> {
        let line = self.line;
        self.take(key).ok_or_else(|| perr(line, format!("missing field {key}")))
    }

    fn real(&mut self, key: &str) -> Result<f64, ScenarioError> {
        let line = self.line;
        let v = self.need(key)?;
        parse_real(v).ok_or_else(|| perr(line, format!("{key}: bad number {v:?}")))
    }

    fn opt<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, ScenarioError> {
        let line = self.line;
        self.take(key)
            .map(|v| v.parse().map_err(|_| perr(line, format!("{key}: bad value {v:?}"))))
            .transpose()
    }

    fn point(&mut self) -> Result<Point, ScenarioError> {
        Ok(Point::new(self.real("x")?, self.real("y")?))
    }

    fn finish(self) -> Result<(), ScenarioError> {
        match self.fields.keys().next() {
            None => Ok(()),
            Some(k) => Err(perr(self.line, format!("unknown field {k}"))),
        }
    }
}

fn perr(line: usize, message: String) -> ScenarioError {
    ScenarioError::Parse { line, message }
}

fn parse_real(s: &str) -> Option<f64> {
    match s.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Some(f64::INFINITY),
        _ => s.parse().ok().filter(|x: &f64| x.is_finite()),
    }
}

fn parse_bool(line: usize, s: &str) -> Result<bool, ScenarioError> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(perr(line, format!("expected true/false, got {s:?}"))),
    }
}

fn parse_members(line: usize, cluster: &str, rec: &mut Record) -> Result<Vec<Aircraft>, ScenarioError> {
    let listed = rec.take("aircraft");
    let count: Option<u32> = rec.opt("count")?;
    match (listed, count) {
        (Some(list), count) => {
            let members = list
                .split(',')
                .map(|item| {
                    let (id, rank) = item.split_once(':').unwrap_or((item, ""));
                    let ranking = if rank.is_empty() {
                        Ok(0)
                    } else {
                        rank.parse()
                            .map_err(|_| perr(line, format!("bad aircraft ranking in {item:?}")))
                    }?;
                    if id.is_empty() {
                        return Err(perr(line, "empty aircraft id".into()));
                    }
                    Ok(Aircraft::new(id, ranking))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if count.is_some_and(|n| n as usize != members.len()) {
                return Err(perr(line, "count disagrees with the aircraft list".into()));
            }
            Ok(members)
        }
        (None, Some(n)) => Ok((1..=n)
            .map(|i| Aircraft::new(format!("{cluster}-a{i}"), i))
            .collect()),
        (None, None) => Err(perr(line, "cluster needs aircraft= or count=".into())),
    }
}

fn parse_path(line: usize, s: &str) -> Result<Vec<(u64, Point)>, ScenarioError> {
    s.split(',')
        .map(|wp| {
            let parts: Vec<&str> = wp.split(':').collect();
            let bad = || perr(line, format!("waypoint {wp:?} should be tick:x:y"));
            if parts.len() != 3 {
                return Err(bad());
            }
            let t = parts[0].parse().map_err(|_| bad())?;
            let x = parse_real(parts[1]).ok_or_else(bad)?;
            let y = parse_real(parts[2]).ok_or_else(bad)?;
            Ok((t, Point::new(x, y)))
        })
        .collect()
}

fn parse_trapezoid(line: usize, s: &str) -> Result<Trapezoid, ScenarioError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| parse_real(p.trim()))
        .collect::<Option<_>>()
        .ok_or_else(|| perr(line, format!("bad trapezoid {s:?}")))?;
    if v.len() != 4 {
        return Err(perr(line, format!("trapezoid needs four numbers, got {s:?}")));
    }
    Ok(Trapezoid::new(v[0], v[1], v[2], v[3]))
}

/// Parses scenario text. Validation runs after a successful parse.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut scn = Scenario::default();
    let mut section = None;
    let mut gir_lines: Vec<(usize, &str)> = Vec::new();
    let mut saw_content = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        saw_content = true;
        if let Some(h) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            section = Some(
                Section::from_header(h.trim())
                    .ok_or_else(|| perr(line, format!("unknown section [{h}]")))?,
            );
            continue;
        }
        let Some(sec) = section else {
            return Err(perr(line, "content before the first section header".into()));
        };
        // Forbidden-goal lines open with `!G{`, which the comment split
        // leaves intact; rule lines go to the goal-logic parser verbatim.
        if sec == Section::Gir {
            gir_lines.push((line, text));
            continue;
        }
        let mut rec = Record::parse(line, text)?;
        match sec {
            Section::World => {
                if rec.id.is_some() {
                    return Err(perr(line, "[WORLD] takes key=value lines".into()));
                }
                for (k, v) in std::mem::take(&mut rec.fields) {
                    let bad = || perr(line, format!("{k}: bad value {v:?}"));
                    match k {
                        "width" => scn.width = parse_real(v).ok_or_else(bad)?,
                        "height" => scn.height = parse_real(v).ok_or_else(bad)?,
                        "simulation_time" | "ticks" => {
                            scn.simulation_time = v.parse().map_err(|_| bad())?
                        }
                        "seed" => scn.seed = v.parse().map_err(|_| bad())?,
                        "lccc_cadence" => scn.lccc_cadence = v.parse().map_err(|_| bad())?,
                        _ => return Err(perr(line, format!("unknown [WORLD] key {k}"))),
                    }
                }
            }
            Section::Vavp => {
                let id = rec.id("VAVP")?;
                let location = rec.point()?;
                let value = match rec.take("value") {
                    Some(v) => parse_real(v).ok_or_else(|| perr(line, format!("value: bad number {v:?}")))?,
                    None => 1.0,
                };
                rec.finish()?;
                scn.vavps.push(VavpPoint { id: id.into(), location, value });
            }
            Section::Interceptor => {
                let id = rec.id("interceptor")?;
                let location = rec.point()?;
                let available = match rec.take("available") {
                    Some(v) => parse_bool(line, v)?,
                    None => true,
                };
                rec.finish()?;
                scn.interceptors.push(Interceptor { id: id.into(), location, available });
            }
            Section::Cluster => {
                let id = rec.id("cluster")?;
                let location = rec.point()?;
                let mission: Mission = rec
                    .need("mission")?
                    .parse()
                    .map_err(|e: String| perr(line, e))?;
                let members = parse_members(line, id, &mut rec)?;
                let from = rec.opt("from")?.unwrap_or(0);
                let until = rec.opt("until")?;
                let path = match rec.take("path") {
                    Some(p) => parse_path(line, p)?,
                    None => Vec::new(),
                };
                rec.finish()?;
                scn.clusters.push(ClusterTrack {
                    cluster: Cluster { id: id.into(), location, mission, members },
                    from,
                    until,
                    path,
                });
            }
            Section::Detection => {
                if rec.id.is_some() {
                    return Err(perr(line, "[DETECTION] takes key=value lines".into()));
                }
                let spec = rec.need("dist")?;
                scn.detection = spec.parse().map_err(|e| perr(line, format!("{e}")))?;
                rec.finish()?;
            }
            Section::Jamming => {
                let start = rec.opt("start")?.ok_or_else(|| perr(line, "missing field start".into()))?;
                let end = rec.opt("end")?.ok_or_else(|| perr(line, "missing field end".into()))?;
                let factor = rec.real("factor")?;
                rec.finish()?;
                scn.jamming.push(JammingEpisode { start, end, factor });
            }
            Section::Fuzzy => {
                if rec.id.is_some() {
                    return Err(perr(line, "[FUZZY] takes key=value lines".into()));
                }
                for (k, v) in std::mem::take(&mut rec.fields) {
                    if let Ok(label) = k.parse::<PackageLabel>() {
                        *scn.lccc.trapezoids.get_mut(label) = parse_trapezoid(line, v)?;
                        continue;
                    }
                    let weight = || -> Result<u32, ScenarioError> {
                        v.parse().map_err(|_| perr(line, format!("{k}: bad weight {v:?}")))
                    };
                    let vt = &mut scn.lccc.values;
                    match k {
                        "value.small" => vt.small = weight()?,
                        "value.medium" => vt.medium = weight()?,
                        "value.big" => vt.big = weight()?,
                        "value.strike" => vt.strike = weight()?,
                        "value.escort" => vt.escort = weight()?,
                        _ => return Err(perr(line, format!("unknown [FUZZY] key {k}"))),
                    }
                }
            }
            Section::Gir => unreachable!(),
        }
    }

    if !saw_content {
        return Err(perr(1, "empty scenario".into()));
    }
    if !gir_lines.is_empty() {
        scn.rules = RuleSet::parse_lines(gir_lines).map_err(|e| match e {
            crate::goal_logic::GoalError::Parse { line, message } => perr(line, message),
            other => ScenarioError::Validation(other.to_string()),
        })?;
    }
    scn.validate()?;
    Ok(scn)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&text)
}
