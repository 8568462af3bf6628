//! Timestamped edge-list ingestion, windowing into a graph series, and the
//! JSON and text formats read and written by the command-line tool.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, Datelike, NaiveDate, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use crate::bounds::BoundsReport;
use crate::error::{Error, Result};
use crate::graph::{ordered, Edge, Graph, GraphSeries};

pub const FORMAT_VERSION: u32 = 1;

/// One observed edge `(u, v, t)` with opaque external ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeEvent {
    pub u: String,
    pub v: String,
    pub t: DateTime<Utc>,
}

/// Integer epoch seconds, `YYYY-MM-DD`, or RFC 3339.
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    if let Ok(secs) = s.parse::<i64>() {
        return Utc.timestamp_opt(secs, 0).single();
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Some(d.and_hms_opt(0, 0, 0)?.and_utc());
    }
    DateTime::parse_from_rfc3339(s).ok().map(|t| t.with_timezone(&Utc))
}

/// Parse whitespace-separated `u v t` lines. Blank lines and lines starting
/// with `#` are skipped.
pub fn parse_events(text: &str) -> Result<Vec<EdgeEvent>> {
    let mut events = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |reason: String| Error::Parse { line: k + 1, reason };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(format!("expected `u v t`, found {} fields", fields.len())));
        }
        if fields[0] == fields[1] {
            return Err(parse_err(format!("self-loop on `{}`", fields[0])));
        }
        let t = parse_timestamp(fields[2]).ok_or_else(|| parse_err(format!("bad timestamp `{}`", fields[2])))?;
        events.push(EdgeEvent {
            u: fields[0].to_string(),
            v: fields[1].to_string(),
            t,
        });
    }
    Ok(events)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowMode {
    /// Calendar days in UTC.
    Day,
    /// Calendar months in UTC.
    Month,
    /// Consecutive groups of this many distinct timestamps.
    FixedCount(usize),
}

impl FromStr for WindowMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "day" => Ok(WindowMode::Day),
            "month" => Ok(WindowMode::Month),
            _ => match s.strip_prefix("count:").map(str::parse::<usize>) {
                Some(Ok(n)) if n >= 1 => Ok(WindowMode::FixedCount(n)),
                Some(_) => Err(Error::param("window", "count:N needs an integer N >= 1")),
                None => Err(Error::param("window", format!("unknown mode `{s}`; use day, month or count:N"))),
            },
        }
    }
}

impl fmt::Display for WindowMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowMode::Day => f.write_str("day"),
            WindowMode::Month => f.write_str("month"),
            WindowMode::FixedCount(n) => write!(f, "count:{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSpec {
    pub mode: WindowMode,
    /// Events before this instant are ignored.
    pub start: Option<DateTime<Utc>>,
    /// Events at or after this instant are ignored.
    pub end: Option<DateTime<Utc>>,
    /// Emit edgeless snapshots for empty calendar windows between the first
    /// and last observed window.
    pub keep_empty: bool,
}

impl WindowSpec {
    pub fn new(mode: WindowMode) -> Self {
        WindowSpec {
            mode,
            start: None,
            end: None,
            keep_empty: false,
        }
    }
}

/// Dense 1-based indices for external ids, in first-appearance order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    external: Vec<String>,
    index: HashMap<String, usize>,
}

impl IdMap {
    pub fn from_external(ids: Vec<String>) -> Result<Self> {
        let mut map = IdMap::default();
        for id in ids {
            if map.index.contains_key(&id) {
                return Err(Error::param("ids", format!("duplicate id `{id}`")));
            }
            map.insert(&id);
        }
        Ok(map)
    }

    fn insert(&mut self, id: &str) -> usize {
        if let Some(&k) = self.index.get(id) {
            return k;
        }
        self.external.push(id.to_string());
        let k = self.external.len();
        self.index.insert(id.to_string(), k);
        k
    }

    pub fn internal(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn external(&self, node: usize) -> Option<&str> {
        node.checked_sub(1).and_then(|k| self.external.get(k)).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.external.len()
    }

    pub fn is_empty(&self) -> bool {
        self.external.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.external
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub series: GraphSeries,
    pub ids: IdMap,
    /// Human-readable label of each window, e.g. `2024-03-01` or `2024-03`.
    pub labels: Vec<String>,
}

/// Calendar key of a timestamp: a day or month counter.
fn calendar_key(mode: WindowMode, t: &DateTime<Utc>) -> i64 {
    match mode {
        WindowMode::Day => t.date_naive().num_days_from_ce() as i64,
        WindowMode::Month => t.year() as i64 * 12 + t.month0() as i64,
        WindowMode::FixedCount(_) => unreachable!(),
    }
}

fn calendar_label(mode: WindowMode, key: i64) -> String {
    match mode {
        WindowMode::Day => NaiveDate::from_num_days_from_ce_opt(key as i32)
            .map(|d| d.to_string())
            .unwrap_or_default(),
        WindowMode::Month => format!("{:04}-{:02}", key.div_euclid(12), key.rem_euclid(12) + 1),
        WindowMode::FixedCount(_) => unreachable!(),
    }
}

/// Window the events into a graph series. Events are ordered by time (stable
/// for ties), ids are numbered by first appearance, and a node exists from
/// its first event onwards. Each snapshot holds only the edges of its window.
pub fn ingest_events(mut events: Vec<EdgeEvent>, window: &WindowSpec) -> Result<Ingested> {
    events.retain(|e| window.start.is_none_or(|s| e.t >= s) && window.end.is_none_or(|end| e.t < end));
    if events.is_empty() {
        return Err(Error::EmptyInput);
    }
    events.sort_by_key(|e| e.t);

    // window key per event
    let keys: Vec<i64> = match window.mode {
        WindowMode::FixedCount(n) => {
            let mut distinct = 0i64;
            let mut keys = Vec::with_capacity(events.len());
            for (k, e) in events.iter().enumerate() {
                if k > 0 && e.t != events[k - 1].t {
                    distinct += 1;
                }
                keys.push(distinct / n as i64);
            }
            keys
        }
        mode => events.iter().map(|e| calendar_key(mode, &e.t)).collect(),
    };

    let mut ids = IdMap::default();
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    let mut start = 0;
    while start < events.len() {
        let key = keys[start];
        if window.keep_empty && start > 0 && !matches!(window.mode, WindowMode::FixedCount(_)) {
            for gap in keys[start - 1] + 1..key {
                graphs.push(Graph::new(ids.len()));
                labels.push(calendar_label(window.mode, gap));
            }
        }
        let mut stop = start;
        let mut edges: BTreeSet<Edge> = BTreeSet::new();
        while stop < events.len() && keys[stop] == key {
            let a = ids.insert(&events[stop].u);
            let b = ids.insert(&events[stop].v);
            edges.insert(ordered(a, b));
            stop += 1;
        }
        labels.push(match window.mode {
            WindowMode::FixedCount(_) => events[start].t.to_rfc3339(),
            mode => calendar_label(mode, key),
        });
        graphs.push(Graph::from_edges(ids.len(), edges)?);
        start = stop;
    }
    Ok(Ingested {
        series: GraphSeries::new(graphs)?,
        ids,
        labels,
    })
}

pub fn ingest_str(text: &str, window: &WindowSpec) -> Result<Ingested> {
    ingest_events(parse_events(text)?, window)
}

pub fn ingest(path: &Path, window: &WindowSpec) -> Result<Ingested> {
    ingest_str(&fs::read_to_string(path)?, window)
}

/// Write every snapshot's edges as `u v t` lines with `t` the 1-based
/// snapshot index. Reading back with `count:1` windows restores the
/// series up to node relabelling.
pub fn write_edge_list<W: Write>(mut out: W, series: &GraphSeries) -> Result<()> {
    writeln!(out, "# u v t")?;
    for (t, g) in series.graphs().iter().enumerate() {
        for (i, j) in g.edges() {
            writeln!(out, "{i} {j} {}", t + 1)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDoc {
    #[serde(default = "default_version")]
    format_version: u32,
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ids: Option<Vec<String>>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::param(
            "format_version",
            format!("unsupported version {v}, expected {FORMAT_VERSION}"),
        ));
    }
    Ok(())
}

/// Graph as JSON with sorted 1-based pairs; external ids are included when given.
pub fn graph_to_json(g: &Graph, ids: Option<&IdMap>) -> Result<String> {
    let doc = GraphDoc {
        format_version: FORMAT_VERSION,
        n: g.n_nodes(),
        edges: g.edges().map(|(i, j)| [i, j]).collect(),
        ids: ids.map(|m| m.ids()[..m.len().min(g.n_nodes())].to_vec()),
    };
    Ok(serde_json::to_string(&doc)?)
}

/// Parse a graph document; returns the graph and its external ids if present.
pub fn graph_from_json(text: &str) -> Result<(Graph, Option<IdMap>)> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    check_version(doc.format_version)?;
    let g = Graph::from_edges(doc.n, doc.edges.into_iter().map(|[i, j]| (i, j)))?;
    let ids = doc.ids.map(IdMap::from_external).transpose()?;
    Ok((g, ids))
}

pub fn emit_graph(g: &Graph, ids: Option<&IdMap>, path: &Path) -> Result<()> {
    let mut text = graph_to_json(g, ids)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    graph_from_json(&fs::read_to_string(path)?).map(|(g, _)| g)
}

#[derive(Serialize)]
struct BoundsDoc<'a> {
    format_version: u32,
    #[serde(flatten)]
    report: &'a BoundsReport,
}

pub fn bounds_to_json(report: &BoundsReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(&BoundsDoc {
        format_version: FORMAT_VERSION,
        report,
    })?)
}
