//! Whole-catalog reports: every metric evaluated over a parameter sweep.

mod render;

pub use render::{render_csv, render_json, render_result_table, render_table, OutputFormat};

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::calstore::{Interval, MeetingId, StoreSnapshot, Timestamp};
use crate::metrics::{evaluate, Bucket, CoreHours, MetricError, MetricResult, ParamKind, Params, Variant, CATALOG};

pub const DEFAULT_LOWER_LIMIT: u64 = 1;
pub const DEFAULT_UPPER_LIMIT: u64 = 3;

/// Signature shared by the engine and the reference evaluator.
pub type Evaluator = fn(&StoreSnapshot, &str, &Params) -> Result<MetricResult, MetricError>;

#[derive(Clone, Debug, PartialEq)]
pub struct ReportOptions {
    pub interval: Interval,
    pub paper_exact: bool,
    pub core_hours: CoreHours,
    pub consecutive_threshold: i64,
    pub last_minute_threshold: i64,
    pub lower_limit: u64,
    pub upper_limit: u64,
    pub limit: Option<usize>,
    /// Instants probed by room metrics; `None` probes every in-interval meeting start.
    pub probes: Option<Vec<Timestamp>>,
}

impl ReportOptions {
    pub fn new(interval: Interval) -> Self {
        ReportOptions {
            interval,
            paper_exact: false,
            core_hours: CoreHours::default(),
            consecutive_threshold: crate::metrics::DEFAULT_CONSECUTIVE_THRESHOLD,
            last_minute_threshold: crate::metrics::DEFAULT_LAST_MINUTE_THRESHOLD,
            lower_limit: DEFAULT_LOWER_LIMIT,
            upper_limit: DEFAULT_UPPER_LIMIT,
            limit: None,
            probes: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub metric: String,
    pub title: String,
    pub results: Vec<MetricResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub interval: String,
    pub paper_exact: bool,
    pub sections: Vec<Section>,
}

/// Parameter sets a variant is evaluated with, in a fixed order.
pub fn sweep_variant(snap: &StoreSnapshot, opts: &ReportOptions, variant: &Variant) -> Vec<Params> {
    let needs = |k: ParamKind| variant.required.contains(&k);
    let iv = opts.interval;
    let mut base = Params::new()
        .variant(variant.name)
        .paper_exact(opts.paper_exact)
        .core_hours(opts.core_hours)
        .consecutive_threshold(opts.consecutive_threshold)
        .last_minute_threshold(opts.last_minute_threshold)
        .lower_limit(opts.lower_limit)
        .upper_limit(opts.upper_limit);
    base.limit = opts.limit;
    if needs(ParamKind::Interval) {
        base = base.interval(iv);
    }

    let mut meetings: Vec<_> = snap.meetings().iter().filter(|m| iv.contains(m.start_time)).collect();
    meetings.sort_by_key(|m| m.meeting_id);
    let employees: Vec<_> = snap.employees().iter().map(|e| e.employee_id).collect();

    let mut sets = vec![base];
    let expand = |sets: Vec<Params>, f: &dyn Fn(&Params) -> Vec<Params>| sets.iter().flat_map(f).collect::<Vec<_>>();

    if needs(ParamKind::Meeting) && needs(ParamKind::OtherMeeting) {
        let pairs = shared_pairs(snap, &meetings.iter().map(|m| m.meeting_id).collect::<Vec<_>>());
        sets = expand(sets, &|p| pairs.iter().map(|&(a, b)| p.clone().meeting(a).other_meeting(b)).collect());
    } else if needs(ParamKind::Meeting) {
        sets = expand(sets, &|p| meetings.iter().map(|m| p.clone().meeting(m.meeting_id)).collect());
    }
    if needs(ParamKind::Employee) {
        sets = expand(sets, &|p| employees.iter().map(|&e| p.clone().employee(e)).collect());
    }
    if needs(ParamKind::Employees) {
        let distinct: BTreeSet<_> = employees.iter().copied().collect();
        if distinct.len() < 2 {
            return Vec::new();
        }
        sets = expand(sets, &|p| vec![p.clone().employees(distinct.iter().copied().collect())]);
    }
    if needs(ParamKind::Bucket) {
        sets = expand(sets, &|p| Bucket::ALL.iter().map(|&b| p.clone().bucket(b)).collect());
    }
    if needs(ParamKind::At) {
        let probes = opts.probes.clone().unwrap_or_else(|| {
            let starts: BTreeSet<_> = meetings.iter().map(|m| m.start_time).collect();
            starts.into_iter().collect()
        });
        sets = expand(sets, &|p| probes.iter().map(|&t| p.clone().at(t)).collect());
    }
    if needs(ParamKind::Room) {
        let rooms: Vec<_> = snap.rooms().iter().map(|r| r.room_id).collect();
        sets = expand(sets, &|p| rooms.iter().map(|&r| p.clone().room(r)).collect());
    }
    sets
}

/// Meeting pairs `(a, b)`, `a < b`, that share at least one employee.
fn shared_pairs(snap: &StoreSnapshot, meetings: &[MeetingId]) -> Vec<(MeetingId, MeetingId)> {
    let people = |m: MeetingId| snap.participants_of_meeting(m).map(|p| p.employee_id).collect::<BTreeSet<_>>();
    let sets: Vec<_> = meetings.iter().map(|&m| (m, people(m))).collect();
    let mut out = Vec::new();
    for (i, (a, pa)) in sets.iter().enumerate() {
        for (b, pb) in &sets[i + 1..] {
            if !pa.is_disjoint(pb) {
                out.push((*a, *b));
            }
        }
    }
    out
}

/// Evaluates the whole catalog with `eval`; sections come out in catalog order.
pub fn build_report_with(snap: &StoreSnapshot, opts: &ReportOptions, eval: Evaluator) -> Result<Report, MetricError> {
    let sections = CATALOG
        .par_iter()
        .map(|entry| {
            let mut results = Vec::new();
            for variant in entry.variants {
                for params in sweep_variant(snap, opts, variant) {
                    results.push(eval(snap, entry.id, &params)?);
                }
            }
            Ok(Section {
                metric: entry.id.to_string(),
                title: entry.title.to_string(),
                results,
            })
        })
        .collect::<Result<Vec<_>, MetricError>>()?;
    Ok(Report {
        interval: opts.interval.to_string(),
        paper_exact: opts.paper_exact,
        sections,
    })
}

pub fn build_report(snap: &StoreSnapshot, opts: &ReportOptions) -> Result<Report, MetricError> {
    build_report_with(snap, opts, evaluate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{f1, june_2015};

    #[test]
    fn f1_report_has_every_section() {
        let r = build_report(&f1(), &ReportOptions::new(june_2015())).unwrap();
        assert_eq!(r.sections.len(), 55);
        assert!(r.sections.iter().all(|s| !s.results.is_empty()), "every section has results");
        let ids: Vec<_> = r.sections.iter().map(|s| s.metric.as_str()).collect();
        assert_eq!(ids[0], "5.1");
        assert_eq!(ids[54], "5.55");
    }

    #[test]
    fn pairs_need_a_shared_employee() {
        let snap = f1();
        let all: Vec<_> = snap.meetings().iter().map(|m| m.meeting_id).collect();
        let pairs = shared_pairs(&snap, &all);
        assert!(pairs.contains(&(MeetingId(1), MeetingId(2))));
        // M6 has only E3; M2 has E1 and E2.
        assert!(!pairs.contains(&(MeetingId(2), MeetingId(6))));
    }
}
