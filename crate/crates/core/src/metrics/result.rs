use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::catalog::Shape;
use crate::calstore::{EmployeeId, MeetingId, RoomId};

/// One cell of a listing or breakdown.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Absent,
    Int(i64),
    Real(f64),
    Flag(bool),
}

impl Value {
    /// Exact ratio `num / den`, absent for an empty denominator.
    pub fn ratio(num: i64, den: i64) -> Value {
        if den == 0 {
            Value::Absent
        } else {
            Value::Real(num as f64 / den as f64)
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(v) => Some(*v as f64),
            Value::Real(v) => Some(*v),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Absent => f.write_str("absent"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Real(v) => write!(f, "{}", fmt_real(*v)),
            Value::Flag(v) => write!(f, "{v}"),
        }
    }
}

/// Shortest round-trip decimal form, the same text JSON output uses.
pub fn fmt_real(v: f64) -> String {
    serde_json::to_string(&v).unwrap_or_else(|_| v.to_string())
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Absent => s.serialize_none(),
            Value::Int(v) => s.serialize_i64(*v),
            Value::Real(v) => s.serialize_f64(*v),
            Value::Flag(v) => s.serialize_bool(*v),
        }
    }
}

/// What a listing row is about.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowKey {
    Employee { id: EmployeeId, name: String },
    Meeting(MeetingId),
    /// A participant count, for histograms.
    Size(u64),
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowKey::Employee { id, name } => write!(f, "{id} {name}"),
            RowKey::Meeting(id) => write!(f, "{id}"),
            RowKey::Size(n) => write!(f, "{n}"),
        }
    }
}

impl Serialize for RowKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self {
            RowKey::Employee { id, name } => {
                m.serialize_entry("employee", &id.0)?;
                m.serialize_entry("name", name)?;
            }
            RowKey::Meeting(id) => m.serialize_entry("meeting", &id.0)?,
            RowKey::Size(n) => m.serialize_entry("size", n)?,
        }
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub key: RowKey,
    pub values: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Listing {
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl Listing {
    pub fn new(columns: &[&str], rows: Vec<Row>) -> Self {
        Listing {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub label: String,
    pub value: Value,
}

impl Entry {
    pub fn new(label: &str, value: Value) -> Self {
        Entry {
            label: label.to_string(),
            value,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankEntry {
    #[serde(serialize_with = "ser_employee")]
    pub employee: EmployeeId,
    pub score: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairEntry {
    #[serde(serialize_with = "ser_meeting")]
    pub first: MeetingId,
    #[serde(serialize_with = "ser_meeting")]
    pub second: MeetingId,
    pub minutes: i64,
}

fn ser_employee<S: Serializer>(id: &EmployeeId, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u32(id.0)
}

fn ser_meeting<S: Serializer>(id: &MeetingId, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u32(id.0)
}

fn ser_rooms<S: Serializer>(ids: &[RoomId], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ids.iter().map(|r| r.0))
}

/// Tagged metric payload.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Payload {
    /// Signed whole minutes.
    Duration(i64),
    OptionalDuration(Option<i64>),
    Count(u64),
    Flag(bool),
    Number(Option<f64>),
    Listing(Listing),
    Breakdown(Vec<Entry>),
    Labeled(Vec<Entry>),
    Ranking(Vec<RankEntry>),
    PairListing(Vec<PairEntry>),
    Rooms {
        #[serde(serialize_with = "ser_rooms")]
        booked: Vec<RoomId>,
        #[serde(serialize_with = "ser_rooms")]
        free: Vec<RoomId>,
    },
}

impl Payload {
    pub fn shape(&self) -> Shape {
        match self {
            Payload::Duration(_) => Shape::Duration,
            Payload::OptionalDuration(_) => Shape::OptionalDuration,
            Payload::Count(_) => Shape::Count,
            Payload::Flag(_) => Shape::Flag,
            Payload::Number(_) => Shape::Number,
            Payload::Listing(_) => Shape::Listing,
            Payload::Breakdown(_) => Shape::Breakdown,
            Payload::Labeled(_) => Shape::Labeled,
            Payload::Ranking(_) => Shape::Ranking,
            Payload::PairListing(_) => Shape::PairListing,
            Payload::Rooms { .. } => Shape::Rooms,
        }
    }

    /// Entries of a breakdown or labeled payload.
    pub fn entries(&self) -> Option<&[Entry]> {
        match self {
            Payload::Breakdown(e) | Payload::Labeled(e) => Some(e),
            _ => None,
        }
    }

    /// Entry value by label, for breakdown and labeled payloads.
    pub fn get(&self, label: &str) -> Option<Value> {
        self.entries()?.iter().find(|e| e.label == label).map(|e| e.value)
    }

    /// Human-readable rendering, one item per line.
    pub fn render_plain(&self) -> String {
        match self {
            Payload::Duration(v) => v.to_string(),
            Payload::OptionalDuration(v) => v.map_or("absent".to_string(), |v| v.to_string()),
            Payload::Count(v) => v.to_string(),
            Payload::Flag(v) => v.to_string(),
            Payload::Number(v) => v.map_or("absent".to_string(), fmt_real),
            Payload::Listing(l) => l
                .rows
                .iter()
                .map(|r| {
                    let mut line = r.key.to_string();
                    for v in &r.values {
                        line.push('\t');
                        line.push_str(&v.to_string());
                    }
                    line
                })
                .collect::<Vec<_>>()
                .join("\n"),
            Payload::Breakdown(e) | Payload::Labeled(e) => {
                e.iter().map(|e| format!("{}\t{}", e.label, e.value)).collect::<Vec<_>>().join("\n")
            }
            Payload::Ranking(r) => {
                r.iter().map(|r| format!("{}\t{}", r.employee, r.score)).collect::<Vec<_>>().join("\n")
            }
            Payload::PairListing(p) => p
                .iter()
                .map(|p| format!("{}\t{}\t{}", p.first, p.second, p.minutes))
                .collect::<Vec<_>>()
                .join("\n"),
            Payload::Rooms { booked, free } => {
                let list = |ids: &[RoomId]| ids.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",");
                format!("booked\t{}\nfree\t{}", list(booked), list(free))
            }
        }
    }
}

/// A metric value with the request that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricResult {
    pub metric: String,
    pub variant: String,
    pub params: BTreeMap<String, String>,
    pub payload: Payload,
}
