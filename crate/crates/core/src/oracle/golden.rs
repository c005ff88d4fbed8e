//! Golden files: one frozen oracle result per line.
//!
//! Line format: `<case name>\t<compact JSON>`, where the JSON is either the
//! serialized `MetricResult` or `{"error": "<message>"}`.

use super::oracle_evaluate;
use crate::calstore::{EmployeeId, Interval, MeetingId, RoomId, StoreSnapshot};
use crate::fixtures::june_2015;
use crate::metrics::{Bucket, MetricError, MetricResult, Params};

pub const GOLDEN_HEADER: &str = "# calmine golden v1";

#[derive(Clone, Debug)]
pub struct GoldenCase {
    pub name: String,
    pub metric: &'static str,
    pub params: Params,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenLine {
    pub name: String,
    pub json: String,
}

/// Serialized form shared by the emitter and by tests that compare against it.
pub fn render_outcome(outcome: &Result<MetricResult, MetricError>) -> String {
    match outcome {
        Ok(r) => serde_json::to_string(r).expect("results serialize"),
        Err(e) => serde_json::json!({ "error": e.to_string() }).to_string(),
    }
}

pub fn emit_goldens(snap: &StoreSnapshot, cases: &[GoldenCase]) -> String {
    let mut out = String::from(GOLDEN_HEADER);
    out.push('\n');
    for case in cases {
        let outcome = oracle_evaluate(snap, case.metric, &case.params);
        out.push_str(&format!("{}\t{}\n", case.name, render_outcome(&outcome)));
    }
    out
}

pub fn parse_goldens(text: &str) -> Result<Vec<GoldenLine>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(GOLDEN_HEADER) => {}
        other => return Err(format!("unexpected golden header {other:?}")),
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let (name, json) = l.split_once('\t').ok_or_else(|| format!("malformed golden line {l:?}"))?;
            Ok(GoldenLine { name: name.to_string(), json: json.to_string() })
        })
        .collect()
}

fn case(name: &str, metric: &'static str, params: Params) -> GoldenCase {
    GoldenCase { name: name.to_string(), metric, params }
}

/// The reference cases over fixture F1.
pub fn f1_cases() -> Vec<GoldenCase> {
    let m = |n| Params::new().meeting(MeetingId(n));
    let mm = |a, b| Params::new().meeting(MeetingId(a)).other_meeting(MeetingId(b));
    let ej = |n| Params::new().employee(EmployeeId(n)).interval(june_2015());
    let j = || Params::new().interval(june_2015());
    let es = |ids: &[u32]| j().employees(ids.iter().map(|&i| EmployeeId(i)).collect());
    let at = |s: &str| Params::new().at(s.parse().expect("timestamp"));
    let july: Interval = "2015-07-01..2015-07-31".parse().expect("interval");

    vec![
        case("length M1", "5.10", m(1)),
        case("unknown metric", "5.99", Params::new()),
        case("meeting count E4", "5.24", ej(4)),
        case("invitation lead M1", "5.2", m(1)),
        case("recurrence frequency M6", "5.12", m(6)),
        case("recurrence frequency M1", "5.12", m(1)),
        case("occurrence count M7", "5.11", m(7)),
        case("total time cost M1", "5.50", m(1)),
        case("replan requests M1", "5.19", m(1)),
        case("info requests M1", "5.20", m(1)),
        case("optional count M1", "5.1", m(1)),
        case("last reaction lead M1", "5.3", m(1)),
        case("min response lead M1", "5.4", m(1).variant("min_response_lead")),
        case("optional invitees M1", "5.1", m(1).variant("optional_invitees")),
        case("response lead per invitee M1", "5.4", m(1)),
        case("modifications per invitee M2", "5.9", m(2)),
        case("length average E1", "5.10", ej(1).variant("organizer_average")),
        case("cancel tally E1", "5.22", ej(1)),
        case("length list E4", "5.10", ej(4)),
        case("participant average E1", "5.27", ej(1)),
        case("response M1", "5.18", m(1)),
        case("response likelihood M1", "5.7", m(1)),
        case("delegated response M5", "5.43", m(5)),
        case("attendance composition M1", "5.34", m(1)),
        case("response by requiredness M1", "5.51", m(1)),
        case("core hours M1", "5.16", m(1)),
        case("core hours M5", "5.16", m(5)),
        case(
            "core hours invalid M6",
            "5.16",
            m(6).core_hours("13:00-13:00".parse().expect("core hours")),
        ),
        case("overlap M1 M2", "5.5", mm(1, 2).variant("overlap_minutes")),
        case("are parallel M1 M2", "5.5", mm(1, 2)),
        case("gap M2 M3", "5.17", mm(2, 3)),
        case("is consecutive M2 M3", "5.23", mm(2, 3)),
        case("self overlap M1", "5.5", mm(1, 1).variant("overlap_minutes")),
        case("parallel pair count E1", "5.5", ej(1)),
        case("parallel minutes E1", "5.25", ej(1)),
        case("consecutive pairs E1", "5.23", ej(1)),
        case("chaired E1", "5.6", ej(1)),
        case("attended E1", "5.6", ej(1).variant("attended_count")),
        case("decline after accept E2", "5.46", ej(2)),
        case("last minute decline E2 60", "5.47", ej(2).last_minute_threshold(60)),
        case("last minute decline E2 5", "5.47", ej(2).last_minute_threshold(5)),
        case("delegated out E1", "5.41", ej(1)),
        case("delegation received E3", "5.42", ej(3)),
        case("weekly average E3", "5.29", ej(3).bucket(Bucket::Week)),
        case("daily average E4", "5.29", ej(4).bucket(Bucket::Day)),
        case(
            "daily average E4 july",
            "5.29",
            Params::new().employee(EmployeeId(4)).interval(july).bucket(Bucket::Day),
        ),
        case("histogram E1", "5.28", ej(1)),
        case("histogram E4", "5.28", ej(4)),
        case("histogram E3", "5.28", ej(3)),
        case("compare E1 E2", "5.26", es(&[1, 2])),
        case("compare E4 E3", "5.26", es(&[4, 3])),
        case("compare E1 alone", "5.26", es(&[1])),
        case("most chaired", "5.35", j()),
        case("meeting count asc", "5.40", j()),
        case("most tentative", "5.37", j()),
        case("most cancelling", "5.39", j()),
        case("coupling", "5.31", j()),
        case("coupling lower 1", "5.32", j().lower_limit(1)),
        case("coupling upper 3", "5.33", j().upper_limit(3)),
        case("rooms at 06-03T09:15", "5.30", at("2015-06-03T09:15")),
        case("room R1 at 06-03T10:00", "5.30", at("2015-06-03T10:00").room(RoomId(1))),
        case("room R1 at 06-04T09:10", "5.30", at("2015-06-04T09:10").room(RoomId(1))),
        case("out vs in E1", "5.55", ej(1)),
        case("out vs in E3", "5.55", ej(3)),
        case("vs company average E1", "5.45", ej(1)),
        case("multi location", "5.54", j()),
    ]
}
