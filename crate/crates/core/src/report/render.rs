use std::fmt::Write as _;
use std::str::FromStr;

use super::Report;
use crate::metrics::{MetricResult, Payload, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "table" => Ok(OutputFormat::Table),
            _ => Err(format!("unknown format {s:?}, expected json, csv or table")),
        }
    }
}

pub fn render_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn params_cell(r: &MetricResult) -> String {
    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

fn cell(v: &Value) -> String {
    match v {
        Value::Absent => String::new(),
        other => other.to_string(),
    }
}

/// `(key, column, value)` triples of one payload.
fn flatten(p: &Payload) -> Vec<(String, String, String)> {
    let one = |v: String| vec![(String::new(), "value".to_string(), v)];
    match p {
        Payload::Duration(v) => one(v.to_string()),
        Payload::OptionalDuration(v) => one(v.map(|v| v.to_string()).unwrap_or_default()),
        Payload::Count(v) => one(v.to_string()),
        Payload::Flag(v) => one(v.to_string()),
        Payload::Number(v) => one(v.map(|v| cell(&Value::Real(v))).unwrap_or_default()),
        Payload::Listing(l) => l
            .rows
            .iter()
            .flat_map(|r| {
                let key = r.key.to_string();
                if l.columns.is_empty() {
                    vec![(key, String::new(), String::new())]
                } else {
                    l.columns.iter().zip(&r.values).map(|(c, v)| (key.clone(), c.clone(), cell(v))).collect()
                }
            })
            .collect(),
        Payload::Breakdown(e) | Payload::Labeled(e) => {
            e.iter().map(|e| (e.label.clone(), "value".to_string(), cell(&e.value))).collect()
        }
        Payload::Ranking(r) => r.iter().map(|r| (r.employee.to_string(), "score".to_string(), r.score.to_string())).collect(),
        Payload::PairListing(p) => p
            .iter()
            .map(|p| (format!("{}-{}", p.first, p.second), "minutes".to_string(), p.minutes.to_string()))
            .collect(),
        Payload::Rooms { booked, free } => booked
            .iter()
            .map(|r| (r.to_string(), "status".to_string(), "booked".to_string()))
            .chain(free.iter().map(|r| (r.to_string(), "status".to_string(), "free".to_string())))
            .collect(),
    }
}

/// Columns: metric, variant, params, key, column, value.
pub fn render_csv<'a>(results: impl IntoIterator<Item = &'a MetricResult>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["metric", "variant", "params", "key", "column", "value"]).expect("in-memory write");
    for r in results {
        let params = params_cell(r);
        for (key, column, value) in flatten(&r.payload) {
            w.write_record([&r.metric, &r.variant, &params, &key, &column, &value]).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn render_result_table(r: &MetricResult) -> String {
    let mut out = r.payload.render_plain();
    out.push('\n');
    out
}

pub fn render_table(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "interval {}  paper_exact {}", report.interval, report.paper_exact);
    for s in &report.sections {
        let _ = writeln!(out, "\n== {} {}", s.metric, s.title);
        for r in &s.results {
            let _ = writeln!(out, "-- {} [{}]", r.variant, params_cell(r));
            for line in r.payload.render_plain().lines() {
                let _ = writeln!(out, "   {line}");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::f1;
    use crate::metrics::{evaluate, Params};
    use crate::MeetingId;

    #[test]
    fn csv_quotes_and_flattens() {
        let r = evaluate(&f1(), "5.1", &Params::new().meeting(MeetingId(1)).variant("optional_invitees")).unwrap();
        assert_eq!(
            render_csv([&r]),
            "metric,variant,params,key,column,value\n5.1,optional_invitees,meeting=1,E3 Carol,,\n"
        );
        let r = evaluate(&f1(), "5.4", &Params::new().meeting(MeetingId(1))).unwrap();
        let csv = render_csv([&r]);
        assert!(csv.contains("E4 Dave,response_lead_minutes,\n"), "{csv}");
    }

    #[test]
    fn format_names() {
        assert_eq!("csv".parse::<OutputFormat>(), Ok(OutputFormat::Csv));
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
