use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveTime;

use super::catalog::{lookup, BoardKind, CatalogEntry, Op, ParamKind, Variant};
use super::error::MetricError;
use crate::calstore::{EmployeeId, Interval, MeetingId, RoomId, Timestamp};

pub const DEFAULT_CONSECUTIVE_THRESHOLD: i64 = 10;
pub const DEFAULT_LAST_MINUTE_THRESHOLD: i64 = 60;

/// Time-of-day window, e.g. `09:00-15:00`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoreHours {
    pub start: NaiveTime,
    pub finish: NaiveTime,
}

impl CoreHours {
    pub fn new(start: NaiveTime, finish: NaiveTime) -> Self {
        CoreHours { start, finish }
    }

    pub fn is_valid(&self) -> bool {
        self.start < self.finish
    }
}

impl Default for CoreHours {
    fn default() -> Self {
        CoreHours {
            start: NaiveTime::from_hms_opt(9, 0, 0).expect("valid time"),
            finish: NaiveTime::from_hms_opt(15, 0, 0).expect("valid time"),
        }
    }
}

impl fmt::Display for CoreHours {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start.format("%H:%M"), self.finish.format("%H:%M"))
    }
}

impl FromStr for CoreHours {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once('-').ok_or_else(|| format!("expected HH:MM-HH:MM, got {s:?}"))?;
        let parse = |t: &str| {
            NaiveTime::parse_from_str(t.trim(), "%H:%M").map_err(|_| format!("invalid time of day {t:?}"))
        };
        Ok(CoreHours::new(parse(a)?, parse(b)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bucket {
    Day,
    Week,
    Month,
}

impl Bucket {
    pub const ALL: [Bucket; 3] = [Bucket::Day, Bucket::Week, Bucket::Month];

    pub fn name(&self) -> &'static str {
        match self {
            Bucket::Day => "day",
            Bucket::Week => "week",
            Bucket::Month => "month",
        }
    }
}

impl fmt::Display for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Bucket {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "day" => Ok(Bucket::Day),
            "week" => Ok(Bucket::Week),
            "month" => Ok(Bucket::Month),
            _ => Err(format!("unknown bucket {s:?}, expected day, week or month")),
        }
    }
}

/// Parameters of a metric evaluation. Unused fields are ignored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    /// Selects a variant by name; otherwise the first satisfiable one is used.
    pub variant: Option<String>,
    pub meeting: Option<MeetingId>,
    pub other_meeting: Option<MeetingId>,
    pub employee: Option<EmployeeId>,
    pub employees: Option<Vec<EmployeeId>>,
    pub interval: Option<Interval>,
    pub at: Option<Timestamp>,
    pub room: Option<RoomId>,
    pub core_hours: Option<CoreHours>,
    pub consecutive_threshold: Option<i64>,
    pub last_minute_threshold: Option<i64>,
    pub bucket: Option<Bucket>,
    pub lower_limit: Option<u64>,
    pub upper_limit: Option<u64>,
    pub limit: Option<usize>,
    /// Restores the literal query behavior where the engine repairs it.
    pub paper_exact: bool,
}

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    pub fn variant(mut self, name: &str) -> Self {
        self.variant = Some(name.to_string());
        self
    }

    pub fn meeting(mut self, id: MeetingId) -> Self {
        self.meeting = Some(id);
        self
    }

    pub fn other_meeting(mut self, id: MeetingId) -> Self {
        self.other_meeting = Some(id);
        self
    }

    pub fn employee(mut self, id: EmployeeId) -> Self {
        self.employee = Some(id);
        self
    }

    pub fn employees(mut self, ids: Vec<EmployeeId>) -> Self {
        self.employees = Some(ids);
        self
    }

    pub fn interval(mut self, interval: Interval) -> Self {
        self.interval = Some(interval);
        self
    }

    pub fn at(mut self, t: Timestamp) -> Self {
        self.at = Some(t);
        self
    }

    pub fn room(mut self, id: RoomId) -> Self {
        self.room = Some(id);
        self
    }

    pub fn core_hours(mut self, hours: CoreHours) -> Self {
        self.core_hours = Some(hours);
        self
    }

    pub fn consecutive_threshold(mut self, minutes: i64) -> Self {
        self.consecutive_threshold = Some(minutes);
        self
    }

    pub fn last_minute_threshold(mut self, minutes: i64) -> Self {
        self.last_minute_threshold = Some(minutes);
        self
    }

    pub fn bucket(mut self, bucket: Bucket) -> Self {
        self.bucket = Some(bucket);
        self
    }

    pub fn lower_limit(mut self, n: u64) -> Self {
        self.lower_limit = Some(n);
        self
    }

    pub fn upper_limit(mut self, n: u64) -> Self {
        self.upper_limit = Some(n);
        self
    }

    pub fn limit(mut self, n: usize) -> Self {
        self.limit = Some(n);
        self
    }

    pub fn paper_exact(mut self, on: bool) -> Self {
        self.paper_exact = on;
        self
    }

    pub fn has(&self, kind: ParamKind) -> bool {
        match kind {
            ParamKind::Meeting => self.meeting.is_some(),
            ParamKind::OtherMeeting => self.other_meeting.is_some(),
            ParamKind::Employee => self.employee.is_some(),
            ParamKind::Employees => self.employees.is_some(),
            ParamKind::Interval => self.interval.is_some(),
            ParamKind::At => self.at.is_some(),
            ParamKind::Room => self.room.is_some(),
            ParamKind::CoreHours => self.core_hours.is_some(),
            ParamKind::ConsecutiveThreshold => self.consecutive_threshold.is_some(),
            ParamKind::LastMinuteThreshold => self.last_minute_threshold.is_some(),
            ParamKind::Bucket => self.bucket.is_some(),
            ParamKind::LowerLimit => self.lower_limit.is_some(),
            ParamKind::UpperLimit => self.upper_limit.is_some(),
            ParamKind::Limit => self.limit.is_some(),
        }
    }

    pub fn effective_core_hours(&self) -> CoreHours {
        self.core_hours.unwrap_or_default()
    }

    pub fn effective_consecutive_threshold(&self) -> i64 {
        self.consecutive_threshold.unwrap_or(DEFAULT_CONSECUTIVE_THRESHOLD)
    }

    pub fn effective_last_minute_threshold(&self) -> i64 {
        self.last_minute_threshold.unwrap_or(DEFAULT_LAST_MINUTE_THRESHOLD)
    }

    /// Rendered value of one parameter, with defaults filled in.
    fn render(&self, kind: ParamKind) -> Option<String> {
        match kind {
            ParamKind::Meeting => self.meeting.map(|m| m.0.to_string()),
            ParamKind::OtherMeeting => self.other_meeting.map(|m| m.0.to_string()),
            ParamKind::Employee => self.employee.map(|e| e.0.to_string()),
            ParamKind::Employees => self
                .employees
                .as_ref()
                .map(|es| es.iter().map(|e| e.0.to_string()).collect::<Vec<_>>().join(",")),
            ParamKind::Interval => self.interval.map(|i| i.to_string()),
            ParamKind::At => self.at.map(|t| t.to_string()),
            ParamKind::Room => self.room.map(|r| r.0.to_string()),
            ParamKind::CoreHours => Some(self.effective_core_hours().to_string()),
            ParamKind::ConsecutiveThreshold => Some(self.effective_consecutive_threshold().to_string()),
            ParamKind::LastMinuteThreshold => Some(self.effective_last_minute_threshold().to_string()),
            ParamKind::Bucket => self.bucket.map(|b| b.to_string()),
            ParamKind::LowerLimit => self.lower_limit.map(|n| n.to_string()),
            ParamKind::UpperLimit => self.upper_limit.map(|n| n.to_string()),
            ParamKind::Limit => self.limit.map(|n| n.to_string()),
        }
    }

    /// The parameters a variant actually read, keyed by name.
    pub fn echo(&self, variant: &Variant) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for &kind in variant.required.iter().chain(variant.optional) {
            if let Some(v) = self.render(kind) {
                out.insert(kind.name().to_string(), v);
            }
        }
        if variant.op.paper_exact_sensitive() {
            out.insert("paper_exact".to_string(), self.paper_exact.to_string());
        }
        out
    }
}

/// Picks the variant a call evaluates.
pub fn resolve(id: &str, params: &Params) -> Result<(&'static CatalogEntry, &'static Variant), MetricError> {
    let entry = lookup(id).ok_or_else(|| MetricError::UnknownMetric(id.to_string()))?;
    let missing = |v: &Variant| v.required.iter().copied().find(|&k| !params.has(k));
    let variant = match &params.variant {
        Some(name) => {
            let v = entry.variant(name).ok_or_else(|| MetricError::UnknownVariant {
                metric: id.to_string(),
                variant: name.clone(),
            })?;
            if let Some(param) = missing(v) {
                return Err(MetricError::MissingParameter { metric: id.to_string(), param });
            }
            v
        }
        None => match entry.variants.iter().find(|v| missing(v).is_none()) {
            Some(v) => v,
            None => {
                let param = missing(entry.default_variant()).expect("unsatisfied variant");
                return Err(MetricError::MissingParameter { metric: id.to_string(), param });
            }
        },
    };
    // The literal coupling query filters by the lower limit even for 5.31.
    if variant.op == Op::Leaderboard(BoardKind::CouplingDesc) && params.paper_exact && params.lower_limit.is_none() {
        return Err(MetricError::MissingParameter { metric: id.to_string(), param: ParamKind::LowerLimit });
    }
    Ok((entry, variant))
}

/// Entity existence, answered by whichever evaluator is running.
pub trait EntityLookup {
    fn has_meeting(&self, id: MeetingId) -> bool;
    fn has_employee(&self, id: EmployeeId) -> bool;
    fn has_room(&self, id: RoomId) -> bool;
}

/// Rejects malformed parameter values and references to missing entities,
/// in a fixed order so every evaluator reports the same first error.
pub fn check_params(variant: &Variant, params: &Params, lookup: &dyn EntityLookup) -> Result<(), MetricError> {
    let uses = |k: ParamKind| variant.required.contains(&k) || variant.optional.contains(&k);
    if uses(ParamKind::Interval) {
        if let Some(i) = params.interval {
            if !i.is_valid() {
                return Err(MetricError::InvalidInterval(i));
            }
        }
    }
    if uses(ParamKind::CoreHours) {
        let h = params.effective_core_hours();
        if !h.is_valid() {
            return Err(MetricError::InvalidCoreHours(h));
        }
    }
    for (kind, value) in [
        (ParamKind::ConsecutiveThreshold, params.consecutive_threshold),
        (ParamKind::LastMinuteThreshold, params.last_minute_threshold),
    ] {
        if let Some(v) = value.filter(|&v| uses(kind) && v < 0) {
            return Err(MetricError::InvalidParameter {
                param: kind,
                reason: format!("must be at least 0, got {v}"),
            });
        }
    }
    if uses(ParamKind::Employees) {
        if let Some(es) = &params.employees {
            let mut distinct = es.clone();
            distinct.sort();
            distinct.dedup();
            if distinct.len() < 2 {
                return Err(MetricError::InvalidParameter {
                    param: ParamKind::Employees,
                    reason: "needs at least two distinct employees".to_string(),
                });
            }
        }
    }
    for (kind, id) in [(ParamKind::Meeting, params.meeting), (ParamKind::OtherMeeting, params.other_meeting)] {
        if let Some(id) = id.filter(|_| uses(kind)) {
            if !lookup.has_meeting(id) {
                return Err(MetricError::UnknownMeeting(id));
            }
        }
    }
    if let Some(id) = params.employee.filter(|_| uses(ParamKind::Employee)) {
        if !lookup.has_employee(id) {
            return Err(MetricError::UnknownEmployee(id));
        }
    }
    if let Some(es) = params.employees.as_ref().filter(|_| uses(ParamKind::Employees)) {
        if let Some(&id) = es.iter().find(|&&e| !lookup.has_employee(e)) {
            return Err(MetricError::UnknownEmployee(id));
        }
    }
    if let Some(id) = params.room.filter(|_| uses(ParamKind::Room)) {
        if !lookup.has_room(id) {
            return Err(MetricError::UnknownRoom(id));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_hours_parse_and_print() {
        let h: CoreHours = "08:30-16:00".parse().unwrap();
        assert_eq!(h.to_string(), "08:30-16:00");
        assert!(h.is_valid());
        assert_eq!(CoreHours::default().to_string(), "09:00-15:00");
        assert!(!"13:00-13:00".parse::<CoreHours>().unwrap().is_valid());
        assert!("9-15".parse::<CoreHours>().is_err());
    }

    #[test]
    fn first_satisfiable_variant_wins() {
        let (_, v) = resolve("5.10", &Params::new().meeting(MeetingId(1))).unwrap();
        assert_eq!(v.name, "length");
        let p = Params::new().employee(EmployeeId(1)).interval("2015-06-01..2015-06-30".parse().unwrap());
        let (_, v) = resolve("5.10", &p).unwrap();
        assert_eq!(v.name, "organizer_list");
        let (_, v) = resolve("5.10", &p.variant("organizer_average")).unwrap();
        assert_eq!(v.name, "organizer_average");
    }

    #[test]
    fn resolution_errors() {
        assert_eq!(resolve("5.99", &Params::new()).unwrap_err(), MetricError::UnknownMetric("5.99".into()));
        assert_eq!(
            resolve("5.10", &Params::new()).unwrap_err(),
            MetricError::MissingParameter { metric: "5.10".into(), param: ParamKind::Meeting }
        );
        let p = Params::new().interval("2015-06-01..2015-06-30".parse().unwrap());
        assert_eq!(
            resolve("5.32", &p).unwrap_err(),
            MetricError::MissingParameter { metric: "5.32".into(), param: ParamKind::LowerLimit }
        );
        assert!(matches!(
            resolve("5.10", &Params::new().variant("nope")),
            Err(MetricError::UnknownVariant { .. })
        ));
    }

    #[test]
    fn echo_lists_only_read_parameters() {
        let p = Params::new().meeting(MeetingId(3)).employee(EmployeeId(9)).paper_exact(true);
        let (_, v) = resolve("5.16", &p).unwrap();
        let echo = p.echo(v);
        assert_eq!(echo.get("meeting").map(String::as_str), Some("3"));
        assert_eq!(echo.get("core_hours").map(String::as_str), Some("09:00-15:00"));
        assert!(!echo.contains_key("employee"));
        assert!(!echo.contains_key("paper_exact"));
    }
}
