//! Point files (CSV), query files and result records (JSON lines).

use std::fmt::Write as _;

use annmax_core::{AggregateResult, Metric, Point};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A parsed point file. Ids are 0-based positions among the data lines.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFile {
    pub points: Vec<Point>,
    pub header: bool,
    pub trailing_newline: bool,
}

impl PointFile {
    pub fn parse(name: &str, text: &str) -> Result<Self, CliError> {
        let trailing_newline = text.ends_with('\n');
        let body = text.strip_suffix('\n').unwrap_or(text);
        let mut points = Vec::new();
        let mut header = false;
        if body.is_empty() {
            return Ok(PointFile { points, header, trailing_newline });
        }
        for (i, line) in body.split('\n').enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if i == 0 && line.trim() == "x,y" {
                header = true;
                continue;
            }
            let bad = |message: String| CliError::Parse { file: name.to_string(), line: i + 1, message };
            let (x, y) = line.split_once(',').ok_or_else(|| bad(format!("expected \"x,y\", found {line:?}")))?;
            let coord = |s: &str| -> Result<f64, CliError> {
                match s.trim().parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(bad(format!("invalid coordinate {s:?}"))),
                }
            };
            let id = points.len();
            points.push(Point::new(coord(x)?, coord(y)?, id));
        }
        Ok(PointFile { points, header, trailing_newline })
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if self.header {
            out.push_str("x,y\n");
        }
        for p in &self.points {
            let _ = writeln!(out, "{},{}", p.x, p.y);
        }
        if !self.trailing_newline && out.ends_with('\n') {
            out.pop();
        }
        out
    }
}

/// Metric names as they appear in files and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MetricName {
    L1,
    L2,
}

impl From<MetricName> for Metric {
    fn from(m: MetricName) -> Self {
        match m {
            MetricName::L1 => Metric::L1,
            MetricName::L2 => Metric::L2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryRecord {
    pub q: Vec<[f64; 2]>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub metric: Option<MetricName>,
}

impl QueryRecord {
    pub fn points(&self) -> Vec<Point> {
        self.q.iter().enumerate().map(|(i, &[x, y])| Point::new(x, y, i)).collect()
    }
}

/// A query record together with its 1-based line in the query file.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberedQuery {
    pub line: usize,
    pub record: QueryRecord,
}

/// Parses a JSON-lines query file; blank lines are skipped.
pub fn parse_queries(name: &str, text: &str) -> Result<Vec<NumberedQuery>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: String| CliError::Parse { file: name.to_string(), line: i + 1, message };
        let record: QueryRecord = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        if record.q.is_empty() {
            return Err(bad("query set \"q\" is empty".into()));
        }
        if record.k == Some(0) {
            return Err(bad("\"k\" must be positive".into()));
        }
        if record.q.iter().flatten().any(|v| !v.is_finite()) {
            return Err(bad("non-finite coordinate".into()));
        }
        out.push(NumberedQuery { line: i + 1, record });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Answer {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub g: f64,
}

impl From<&AggregateResult> for Answer {
    fn from(r: &AggregateResult) -> Self {
        Answer { id: r.point.id, x: r.point.x, y: r.point.y, g: r.g }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordStats {
    pub nodes_visited: usize,
    pub drag_queries: usize,
    pub time_ns: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub query_index: usize,
    pub answers: Vec<Answer>,
    pub stats: RecordStats,
}
