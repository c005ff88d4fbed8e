//! iCalendar import. Each VEVENT becomes a meeting; recurring events are
//! expanded into concrete occurrences that share one series root.

use std::collections::BTreeMap;

use chrono::{Datelike, Duration, Months, NaiveDate, NaiveDateTime, NaiveTime};
use serde::Serialize;

use super::ParseError;
use crate::calstore::*;

/// How calendar data is mapped onto the dataset timeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IcsMappingPolicy {
    /// Added to UTC times (`...Z`) to obtain local naive times.
    pub utc_offset_minutes: i32,
    /// Occurrences starting later than this many days after the first one are dropped.
    pub expansion_horizon_days: i64,
    /// Hard cap on occurrences per recurring event.
    pub max_occurrences: usize,
}

impl Default for IcsMappingPolicy {
    fn default() -> Self {
        IcsMappingPolicy { utc_offset_minutes: 0, expansion_horizon_days: 366, max_occurrences: 1000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkippedEvent {
    pub index: usize,
    pub uid: Option<String>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LossyConversion {
    pub uid: Option<String>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EventProvenance {
    pub uid: Option<String>,
    pub meetings: Vec<MeetingId>,
}

/// Fields the calendar format cannot carry; imported as zero or empty.
pub const DEFAULTED_FIELDS: [&str; 6] = [
    "RoomChangedNumber",
    "ModificationNumber",
    "PreparationTime",
    "FollowUpTime",
    "InviteeRequest",
    "PreviousResponseID",
];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IcsMappingReport {
    /// VEVENT components encountered.
    pub total_events: usize,
    pub imported: usize,
    pub skipped: Vec<SkippedEvent>,
    pub lossy: Vec<LossyConversion>,
    pub provenance: Vec<EventProvenance>,
    /// Components other than VEVENT, VTIMEZONE and VALARM.
    pub unsupported_components: usize,
    pub defaulted_fields: Vec<&'static str>,
}

impl IcsMappingReport {
    pub fn summary(&self) -> String {
        format!(
            "{} events: {} imported, {} skipped, {} lossy conversions, {} unsupported components",
            self.total_events,
            self.imported,
            self.skipped.len(),
            self.lossy.len(),
            self.unsupported_components
        )
    }
}

#[derive(Clone, Debug)]
struct Property {
    name: String,
    params: Vec<(String, String)>,
    value: String,
}

impl Property {
    fn param(&self, name: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, Default)]
struct Component {
    name: String,
    props: Vec<Property>,
    children: Vec<Component>,
}

impl Component {
    fn prop(&self, name: &str) -> Option<&Property> {
        self.props.iter().find(|p| p.name == name)
    }

    fn all<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Property> {
        self.props.iter().filter(move |p| p.name == name)
    }
}

fn err(line: usize, path: &str, message: impl Into<String>) -> ParseError {
    ParseError { line, column: 1, path: path.to_string(), message: message.into() }
}

/// Joins folded lines; returns (first physical line number, logical line).
fn unfold(text: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        match (raw.chars().next(), out.last_mut()) {
            (Some(' ' | '\t'), Some((_, last))) => last.push_str(&raw[1..]),
            _ if raw.is_empty() => {}
            _ => out.push((i + 1, raw.to_string())),
        }
    }
    out
}

fn parse_line(line: usize, s: &str) -> Result<Property, ParseError> {
    // The name/params part ends at the first colon outside double quotes.
    let mut in_quotes = false;
    let mut split = None;
    for (i, c) in s.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            ':' if !in_quotes => {
                split = Some(i);
                break;
            }
            _ => {}
        }
    }
    let split = split.ok_or_else(|| err(line, "", format!("content line without ':' {s:?}")))?;
    let (head, value) = (&s[..split], &s[split + 1..]);
    let mut parts = Vec::new();
    let (mut cur, mut in_quotes) = (String::new(), false);
    for c in head.chars() {
        match c {
            '"' => in_quotes = !in_quotes,
            ';' if !in_quotes => parts.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    parts.push(cur);
    let name = parts[0].trim().to_ascii_uppercase();
    if name.is_empty() {
        return Err(err(line, "", "empty property name"));
    }
    let params = parts[1..]
        .iter()
        .map(|p| match p.split_once('=') {
            Some((k, v)) => (k.trim().to_ascii_uppercase(), v.to_string()),
            None => (p.trim().to_ascii_uppercase(), String::new()),
        })
        .collect();
    Ok(Property { name, params, value: value.to_string() })
}

fn parse_tree(text: &str) -> Result<Component, ParseError> {
    let lines = unfold(text);
    let first = lines.first().map(|(_, l)| l.trim().to_ascii_uppercase());
    if first.as_deref() != Some("BEGIN:VCALENDAR") {
        return Err(err(1, "", "document does not begin with BEGIN:VCALENDAR"));
    }
    let mut stack: Vec<Component> = Vec::new();
    let mut root = None;
    for (n, l) in lines {
        let path = stack.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join("/");
        if root.is_some() {
            return Err(err(n, "", "content after END:VCALENDAR"));
        }
        let p = parse_line(n, &l)?;
        match p.name.as_str() {
            "BEGIN" => stack.push(Component { name: p.value.trim().to_ascii_uppercase(), ..Default::default() }),
            "END" => {
                let c = stack.pop().ok_or_else(|| err(n, &path, "END without BEGIN"))?;
                if c.name != p.value.trim().to_ascii_uppercase() {
                    return Err(err(n, &path, format!("END:{} closes BEGIN:{}", p.value.trim(), c.name)));
                }
                match stack.last_mut() {
                    Some(parent) => parent.children.push(c),
                    None => root = Some(c),
                }
            }
            _ => match stack.last_mut() {
                Some(c) => c.props.push(p),
                None => return Err(err(n, "", "property outside any component")),
            },
        }
    }
    match (root, stack.last()) {
        (Some(r), None) => Ok(r),
        (_, Some(open)) => Err(err(0, &open.name, format!("BEGIN:{} is never closed", open.name))),
        (None, None) => Err(err(0, "", "empty document")),
    }
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n' | 'N') => out.push('\n'),
            Some(other) => out.push(other),
            None => out.push('\\'),
        }
    }
    out
}

/// Mail address of a `mailto:` URI, lowercased.
fn mail(s: &str) -> String {
    let s = s.trim().trim_matches('"');
    let s = if s.len() >= 7 && s[..7].eq_ignore_ascii_case("mailto:") { &s[7..] } else { s };
    s.to_ascii_lowercase()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TimeKind {
    Floating,
    Utc,
    Zoned,
    Date,
}

fn parse_time(p: &Property) -> Option<(NaiveDateTime, TimeKind)> {
    let v = p.value.trim();
    if p.param("VALUE").is_some_and(|x| x.eq_ignore_ascii_case("DATE")) || v.len() == 8 {
        let d = NaiveDate::parse_from_str(v, "%Y%m%d").ok()?;
        return Some((d.and_time(NaiveTime::MIN), TimeKind::Date));
    }
    let (body, utc) = match v.strip_suffix('Z') {
        Some(b) => (b, true),
        None => (v, false),
    };
    let t = NaiveDateTime::parse_from_str(body, "%Y%m%dT%H%M%S").ok()?;
    let kind = match (utc, p.param("TZID")) {
        (true, _) => TimeKind::Utc,
        (false, Some(_)) => TimeKind::Zoned,
        (false, None) => TimeKind::Floating,
    };
    Some((t, kind))
}

/// RFC 5545 duration, e.g. `PT1H30M` or `P1D`.
fn parse_duration(s: &str) -> Option<Duration> {
    let s = s.trim();
    let (neg, s) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let s = s.strip_prefix('P')?;
    let (mut total, mut num, mut in_time) = (0i64, String::new(), false);
    for c in s.chars() {
        match c {
            'T' => in_time = true,
            '0'..='9' => num.push(c),
            _ => {
                let n: i64 = num.parse().ok()?;
                num.clear();
                total += n * match (c, in_time) {
                    ('W', false) => 7 * 86400,
                    ('D', false) => 86400,
                    ('H', true) => 3600,
                    ('M', true) => 60,
                    ('S', true) => 1,
                    _ => return None,
                };
            }
        }
    }
    if !num.is_empty() {
        return None;
    }
    Some(Duration::seconds(if neg { -total } else { total }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Freq {
    Daily,
    Weekly,
    Monthly,
    Yearly,
}

#[derive(Clone, Debug)]
struct Rule {
    freq: Freq,
    interval: u32,
    count: Option<usize>,
    until: Option<NaiveDateTime>,
    ignored: Vec<String>,
}

fn parse_rrule(s: &str, normalize: &dyn Fn(NaiveDateTime, TimeKind) -> NaiveDateTime) -> Result<Rule, String> {
    let mut rule = Rule { freq: Freq::Daily, interval: 1, count: None, until: None, ignored: Vec::new() };
    let mut freq = None;
    for part in s.split(';').filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("malformed RRULE part {part:?}"))?;
        match k.to_ascii_uppercase().as_str() {
            "FREQ" => {
                freq = Some(match v.to_ascii_uppercase().as_str() {
                    "DAILY" => Freq::Daily,
                    "WEEKLY" => Freq::Weekly,
                    "MONTHLY" => Freq::Monthly,
                    "YEARLY" => Freq::Yearly,
                    other => return Err(format!("unsupported RRULE frequency {other}")),
                })
            }
            "INTERVAL" => rule.interval = v.parse().ok().filter(|&n| n > 0).ok_or("invalid RRULE INTERVAL")?,
            "COUNT" => rule.count = Some(v.parse().map_err(|_| "invalid RRULE COUNT")?),
            "UNTIL" => {
                let p = Property { name: "UNTIL".into(), params: vec![], value: v.to_string() };
                let (t, kind) = parse_time(&p).ok_or("invalid RRULE UNTIL")?;
                // A date-only UNTIL includes that whole day.
                let t = if kind == TimeKind::Date { t + Duration::seconds(86399) } else { t };
                rule.until = Some(normalize(t, kind));
            }
            "WKST" => {}
            other => rule.ignored.push(other.to_string()),
        }
    }
    rule.freq = freq.ok_or("RRULE without FREQ")?;
    Ok(rule)
}

fn nth_occurrence(start: NaiveDateTime, rule: &Rule, n: u32) -> Option<NaiveDateTime> {
    let step = n.checked_mul(rule.interval)?;
    match rule.freq {
        Freq::Daily => start.checked_add_signed(Duration::days(step as i64)),
        Freq::Weekly => start.checked_add_signed(Duration::weeks(step as i64)),
        // Months lacking the start's day yield the 1st, which the caller skips.
        Freq::Monthly | Freq::Yearly => {
            let months = if rule.freq == Freq::Yearly { step.checked_mul(12)? } else { step };
            let first = start.date().with_day(1)?.checked_add_months(Months::new(months))?;
            Some(first.with_day(start.day()).unwrap_or(first).and_time(start.time()))
        }
    }
}

struct Builder {
    d: Dataset,
    employees: BTreeMap<String, EmployeeId>,
    locations: BTreeMap<String, LocationId>,
}

impl Builder {
    fn employee(&mut self, address: &str, cn: Option<&str>) -> EmployeeId {
        if let Some(&id) = self.employees.get(address) {
            return id;
        }
        let id = EmployeeId(self.d.employee.len() as u32 + 1);
        let name = cn
            .map(|c| unescape(c.trim_matches('"')))
            .filter(|c| !c.is_empty())
            .unwrap_or_else(|| address.split('@').next().unwrap_or(address).to_string());
        self.d.employee.push(EmployeeRecord { employee_id: id, name, email: address.to_string() });
        self.employees.insert(address.to_string(), id);
        id
    }

    fn location(&mut self, label: &str) -> LocationId {
        if let Some(&id) = self.locations.get(label) {
            return id;
        }
        if self.d.company.is_empty() {
            self.d.country.push(CountryRecord { country_id: CountryId(1), name: "unknown".into() });
            self.d.company.push(CompanyRecord { company_id: CompanyId(1), name: "imported".into(), country_id: CountryId(1) });
        }
        let id = LocationId(self.d.location.len() as u32 + 1);
        self.d.location.push(LocationRecord { location_id: id, room_id: None, label: label.to_string(), company_id: CompanyId(1) });
        self.locations.insert(label.to_string(), id);
        id
    }
}

struct Attendee {
    address: String,
    cn: Option<String>,
    required: bool,
    response: Option<ResponseType>,
    delegated_to: Option<String>,
    delegated_from: Option<String>,
}

/// Imports an iCalendar document.
pub fn import_ics(text: &str, policy: &IcsMappingPolicy) -> Result<(Dataset, IcsMappingReport), ParseError> {
    let root = parse_tree(text)?;
    if root.name != "VCALENDAR" {
        return Err(err(1, "", "top-level component is not VCALENDAR"));
    }
    let mut report = IcsMappingReport { defaulted_fields: DEFAULTED_FIELDS.to_vec(), ..Default::default() };
    let mut b = Builder { d: Dataset::default(), employees: BTreeMap::new(), locations: BTreeMap::new() };

    let mut events = Vec::new();
    for c in &root.children {
        match c.name.as_str() {
            "VEVENT" => events.push(c),
            "VTIMEZONE" => {}
            _ => report.unsupported_components += 1,
        }
    }
    report.total_events = events.len();

    for (index, ev) in events.into_iter().enumerate() {
        let uid = ev.prop("UID").map(|p| unescape(&p.value));
        match import_event(&mut b, ev, uid.clone(), policy, &mut report) {
            Ok(meetings) => {
                report.imported += 1;
                report.provenance.push(EventProvenance { uid, meetings });
            }
            Err(reason) => report.skipped.push(SkippedEvent { index, uid, reason }),
        }
    }
    Ok((b.d, report))
}

fn import_event(
    b: &mut Builder,
    ev: &Component,
    uid: Option<String>,
    policy: &IcsMappingPolicy,
    report: &mut IcsMappingReport,
) -> Result<Vec<MeetingId>, String> {
    let mut lossy = Vec::new();
    let offset = Duration::minutes(policy.utc_offset_minutes as i64);
    let normalize = |t: NaiveDateTime, kind: TimeKind| if kind == TimeKind::Utc { t + offset } else { t };
    let mut time = |name: &str| -> Result<Option<NaiveDateTime>, String> {
        let Some(p) = ev.prop(name) else { return Ok(None) };
        let (t, kind) = parse_time(p).ok_or_else(|| format!("unparseable {name} {:?}", p.value))?;
        if kind == TimeKind::Zoned {
            lossy.push(format!("{name} time zone {} read as local time", p.param("TZID").unwrap_or_default()));
        }
        Ok(Some(normalize(t, kind)))
    };

    if ev.prop("RECURRENCE-ID").is_some() {
        return Err("recurrence overrides are not supported".into());
    }
    let start = time("DTSTART")?.ok_or("missing DTSTART")?;
    let organizer = ev.prop("ORGANIZER").ok_or("missing ORGANIZER")?;
    let all_day = ev.prop("DTSTART").and_then(parse_time).is_some_and(|(_, k)| k == TimeKind::Date);
    let finish = match (time("DTEND")?, ev.prop("DURATION")) {
        (Some(end), _) => end,
        (None, Some(d)) => start + parse_duration(&d.value).ok_or_else(|| format!("unparseable DURATION {:?}", d.value))?,
        (None, None) if all_day => start + Duration::days(1),
        (None, None) => start,
    };
    if finish <= start {
        return Err("event does not end after it starts".into());
    }
    let invitation = match time("DTSTAMP")? {
        Some(t) => t,
        None => {
            lossy.push("no DTSTAMP; invitation time set to DTSTART".to_string());
            start
        }
    };
    lossy.push("invitation time taken from DTSTAMP".to_string());
    let sequence: u32 = ev.prop("SEQUENCE").and_then(|p| p.value.trim().parse().ok()).unwrap_or(0);
    let cancelled = ev.prop("STATUS").is_some_and(|p| p.value.trim().eq_ignore_ascii_case("CANCELLED"));
    let location = ev.prop("LOCATION").map(|p| unescape(&p.value)).filter(|l| !l.trim().is_empty());

    let organizer_mail = mail(&organizer.value);
    if organizer_mail.is_empty() {
        return Err("ORGANIZER has no address".into());
    }
    let mut attendees: Vec<Attendee> = Vec::new();
    for a in ev.all("ATTENDEE") {
        let address = mail(&a.value);
        if address.is_empty() {
            lossy.push("ATTENDEE without address dropped".to_string());
            continue;
        }
        if address == organizer_mail {
            lossy.push(format!("organizer {address} also listed as attendee; attendee entry dropped"));
            continue;
        }
        if attendees.iter().any(|x| x.address == address) {
            lossy.push(format!("duplicate attendee {address} dropped"));
            continue;
        }
        let role = a.param("ROLE").unwrap_or("REQ-PARTICIPANT").to_ascii_uppercase();
        let required = match role.as_str() {
            "REQ-PARTICIPANT" | "CHAIR" => true,
            "OPT-PARTICIPANT" => false,
            other => {
                lossy.push(format!("attendee role {other} imported as optional"));
                false
            }
        };
        let response = match a.param("PARTSTAT").unwrap_or("NEEDS-ACTION").to_ascii_uppercase().as_str() {
            "ACCEPTED" => Some(ResponseType::Accept),
            "DECLINED" => Some(ResponseType::Decline),
            "TENTATIVE" => Some(ResponseType::Tentative),
            "DELEGATED" => Some(ResponseType::Delegate),
            "NEEDS-ACTION" => None,
            other => {
                lossy.push(format!("participation status {other} imported as no response"));
                None
            }
        };
        attendees.push(Attendee {
            address,
            cn: a.param("CN").map(str::to_string),
            required,
            response,
            delegated_to: a.param("DELEGATED-TO").map(|v| mail(v.split(',').next().unwrap_or(v))),
            delegated_from: a.param("DELEGATED-FROM").map(|v| mail(v.split(',').next().unwrap_or(v))),
        });
    }

    let mut starts = vec![start];
    if let Some(r) = ev.prop("RRULE") {
        let rule = parse_rrule(&r.value, &normalize)?;
        if !rule.ignored.is_empty() {
            lossy.push(format!("RRULE parts {} ignored", rule.ignored.join(",")));
        }
        let horizon = start + Duration::days(policy.expansion_horizon_days);
        let mut excluded = Vec::new();
        for p in ev.all("EXDATE") {
            for v in p.value.split(',') {
                let single = Property { value: v.to_string(), ..p.clone() };
                if let Some((t, kind)) = parse_time(&single) {
                    excluded.push(normalize(t, kind));
                }
            }
        }
        starts.clear();
        let mut generated = 0usize;
        let mut n = 0u32;
        loop {
            if rule.count.is_some_and(|c| generated >= c) || starts.len() >= policy.max_occurrences {
                break;
            }
            let Some(t) = nth_occurrence(start, &rule, n) else { break };
            n += 1;
            if t > horizon || rule.until.is_some_and(|u| t > u) {
                break;
            }
            if matches!(rule.freq, Freq::Monthly | Freq::Yearly) && t.date().day() != start.date().day() {
                continue;
            }
            generated += 1;
            if !excluded.contains(&t) {
                starts.push(t);
            }
            if n > 100_000 {
                break;
            }
        }
        if starts.is_empty() {
            return Err("recurrence produces no occurrences".into());
        }
    }

    let length = finish - start;
    let root_id = MeetingId(b.d.meeting.len() as u32 + 1);
    let mut meetings = Vec::new();
    for s in starts {
        let id = MeetingId(b.d.meeting.len() as u32 + 1);
        b.d.meeting.push(MeetingRecord {
            meeting_id: id,
            invitation_time: Timestamp::new(invitation),
            start_time: Timestamp::new(s),
            finish_time: Timestamp::new(s + length),
            room_changed_number: 0,
            cancelled,
            repetition_from: root_id,
            number_of_rescheduling: sequence,
        });
        add_people(b, id, Timestamp::new(invitation), &organizer_mail, organizer.param("CN"), &attendees, &mut lossy);
        if let Some(label) = &location {
            let loc = b.location(label);
            let link = LocationInMeetingId(b.d.locationinmeeting.len() as u32 + 1);
            b.d.locationinmeeting.push(LocationInMeeting { location_in_meeting_id: link, meeting_id: id, location_id: loc });
        }
        meetings.push(id);
    }
    lossy.sort();
    lossy.dedup();
    report.lossy.extend(lossy.into_iter().map(|reason| LossyConversion { uid: uid.clone(), reason }));
    Ok(meetings)
}

fn add_people(
    b: &mut Builder,
    meeting: MeetingId,
    invitation: Timestamp,
    organizer: &str,
    organizer_cn: Option<&str>,
    attendees: &[Attendee],
    lossy: &mut Vec<String>,
) {
    let chair = b.employee(organizer, organizer_cn);
    let pid = ParticipantId(b.d.participant.len() as u32 + 1);
    b.d.participant.push(ParticipantRecord {
        participant_id: pid,
        employee_id: chair,
        meeting_id: meeting,
        is_organizer: true,
        invitation_id: None,
        participate_on_meeting: true,
        preparation_time: 0,
        follow_up_time: 0,
        modification_number: 0,
    });

    let mut rows: Vec<(String, ParticipantId, InvitationId)> = Vec::new();
    for a in attendees {
        let employee = b.employee(&a.address, a.cn.as_deref());
        let pid = ParticipantId(b.d.participant.len() as u32 + 1);
        let iid = InvitationId(b.d.invitation.len() as u32 + 1);
        let head = a.response.map(|t| {
            let rid = ResponseId(b.d.invitationresponse.len() as u32 + 1);
            b.d.invitationresponse.push(ResponseRecord {
                invitation_response_id: rid,
                date_time: invitation,
                response_type: t,
                previous_response_id: None,
            });
            rid
        });
        b.d.invitation.push(InvitationRecord {
            invitation_id: iid,
            requiredness: a.required,
            delegated_to: None,
            delegated_from: None,
            invitation_response_id: head,
        });
        b.d.participant.push(ParticipantRecord {
            participant_id: pid,
            employee_id: employee,
            meeting_id: meeting,
            is_organizer: false,
            invitation_id: Some(iid),
            participate_on_meeting: a.response == Some(ResponseType::Accept),
            preparation_time: 0,
            follow_up_time: 0,
            modification_number: 0,
        });
        rows.push((a.address.clone(), pid, iid));
    }
    let find = |address: &str| rows.iter().find(|(m, _, _)| m == address).map(|&(_, p, _)| p);
    for (a, &(_, _, iid)) in attendees.iter().zip(&rows) {
        let inv = &mut b.d.invitation[iid.0 as usize - 1];
        for (link, target, field) in [
            (&a.delegated_to, &mut inv.delegated_to, "DELEGATED-TO"),
            (&a.delegated_from, &mut inv.delegated_from, "DELEGATED-FROM"),
        ] {
            if let Some(address) = link {
                match find(address) {
                    Some(p) => *target = Some(p),
                    None => lossy.push(format!("{field} {address} is not an attendee; link dropped")),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cal(body: &str) -> String {
        format!("BEGIN:VCALENDAR\r\nVERSION:2.0\r\nPRODID:-//test//EN\r\n{body}END:VCALENDAR\r\n")
    }

    const ONE: &str = "BEGIN:VEVENT\r\nUID:one@x\r\nDTSTAMP:20150601T080000Z\r\nDTSTART:20150603T090000\r\n\
DTEND:20150603T100000\r\nORGANIZER;CN=A:mailto:a@x\r\n\
ATTENDEE;ROLE=REQ-PARTICIPANT;PARTSTAT=ACCEPTED:mailto:b@x\r\nEND:VEVENT\r\n";

    #[test]
    fn empty_calendar() {
        let (d, r) = import_ics(&cal(""), &IcsMappingPolicy::default()).unwrap();
        assert!(d.is_empty());
        assert_eq!((r.imported, r.skipped.len()), (0, 0));
    }

    #[test]
    fn single_event_mapping() {
        let (d, r) = import_ics(&cal(ONE), &IcsMappingPolicy::default()).unwrap();
        assert_eq!(r.imported, 1);
        assert_eq!((d.meeting.len(), d.employee.len(), d.participant.len()), (1, 2, 2));
        assert_eq!(d.invitation.len(), 1);
        assert!(d.invitation[0].requiredness);
        assert_eq!(d.invitationresponse[0].response_type, ResponseType::Accept);
        assert_eq!(d.meeting[0].start_time.to_string(), "2015-06-03T09:00");
        assert_eq!(d.meeting[0].invitation_time.to_string(), "2015-06-01T08:00");
        assert_eq!(d.employee[0].name, "A");
        assert!(load_dataset(d).is_ok());
    }

    #[test]
    fn folded_lines_and_quoted_params() {
        let ev = "BEGIN:VEVENT\r\nDTSTART:20150603T090000\r\nDURATION:PT45M\r\nORGANIZER;CN=\"Doe, J\r\n ane\":mailto:J@X\r\nLOCATION:Room\\, 4\r\nEND:VEVENT\r\n";
        let (d, _) = import_ics(&cal(ev), &IcsMappingPolicy::default()).unwrap();
        assert_eq!(d.employee[0].name, "Doe, Jane");
        assert_eq!(d.employee[0].email, "j@x");
        assert_eq!(d.meeting[0].length_minutes(), 45);
        assert_eq!(d.location[0].label, "Room, 4");
    }

    #[test]
    fn weekly_rule_expands() {
        let ev = ONE.replace("END:VEVENT", "RRULE:FREQ=WEEKLY;COUNT=3\r\nEND:VEVENT");
        let (d, r) = import_ics(&cal(&ev), &IcsMappingPolicy::default()).unwrap();
        assert_eq!(d.meeting.len(), 3);
        assert!(d.meeting.iter().all(|m| m.repetition_from == MeetingId(1)));
        let gap = d.meeting[1].start_time.minutes_since(d.meeting[0].start_time);
        assert_eq!(gap, 10080);
        assert_eq!(r.provenance[0].meetings, vec![MeetingId(1), MeetingId(2), MeetingId(3)]);
        assert_eq!(d.employee.len(), 2);
    }

    #[test]
    fn monthly_rule_skips_short_months() {
        let ev = "BEGIN:VEVENT\r\nDTSTART:20150131T090000\r\nDTEND:20150131T100000\r\nORGANIZER:mailto:a@x\r\nRRULE:FREQ=MONTHLY;COUNT=3\r\nEND:VEVENT\r\n";
        let (d, _) = import_ics(&cal(ev), &IcsMappingPolicy::default()).unwrap();
        let starts: Vec<_> = d.meeting.iter().map(|m| m.start_time.to_string()).collect();
        assert_eq!(starts, ["2015-01-31T09:00", "2015-03-31T09:00", "2015-05-31T09:00"]);
    }

    #[test]
    fn until_and_exdate() {
        let ev = "BEGIN:VEVENT\r\nDTSTART:20150601T090000\r\nDTEND:20150601T100000\r\nORGANIZER:mailto:a@x\r\n\
RRULE:FREQ=DAILY;UNTIL=20150605\r\nEXDATE:20150603T090000\r\nEND:VEVENT\r\n";
        let (d, _) = import_ics(&cal(ev), &IcsMappingPolicy::default()).unwrap();
        assert_eq!(d.meeting.len(), 4);
    }

    #[test]
    fn skips_are_counted_not_fatal() {
        let bad = "BEGIN:VEVENT\r\nDTSTART:20150603T090000\r\nEND:VEVENT\r\nBEGIN:VEVENT\r\nORGANIZER:mailto:a@x\r\nEND:VEVENT\r\nBEGIN:VTODO\r\nEND:VTODO\r\n";
        let (d, r) = import_ics(&cal(&format!("{ONE}{bad}")), &IcsMappingPolicy::default()).unwrap();
        assert_eq!(d.meeting.len(), 1);
        assert_eq!(r.total_events, 3);
        assert_eq!(r.imported + r.skipped.len(), r.total_events);
        assert_eq!(r.skipped[0].reason, "missing ORGANIZER");
        assert_eq!(r.skipped[1].reason, "missing DTSTART");
        assert_eq!(r.unsupported_components, 1);
    }

    #[test]
    fn utc_offset_and_delegation() {
        let ev = "BEGIN:VEVENT\r\nDTSTAMP:20150601T080000Z\r\nDTSTART:20150603T070000Z\r\nDTEND:20150603T080000Z\r\n\
ORGANIZER:mailto:a@x\r\nATTENDEE;PARTSTAT=DELEGATED;DELEGATED-TO=\"mailto:c@x\":mailto:b@x\r\n\
ATTENDEE;ROLE=OPT-PARTICIPANT;DELEGATED-FROM=\"mailto:b@x\":mailto:c@x\r\nEND:VEVENT\r\n";
        let policy = IcsMappingPolicy { utc_offset_minutes: 120, ..Default::default() };
        let (d, _) = import_ics(&cal(ev), &policy).unwrap();
        assert_eq!(d.meeting[0].start_time.to_string(), "2015-06-03T09:00");
        assert_eq!(d.invitation[0].delegated_to, Some(ParticipantId(3)));
        assert_eq!(d.invitation[1].delegated_from, Some(ParticipantId(2)));
        assert!(!d.invitation[1].requiredness);
        assert!(load_dataset(d).unwrap().validate().is_clean());
    }

    #[test]
    fn structural_errors() {
        assert!(import_ics("BEGIN:VEVENT\r\nEND:VEVENT\r\n", &IcsMappingPolicy::default()).is_err());
        assert!(import_ics("BEGIN:VCALENDAR\r\nBEGIN:VEVENT\r\nEND:VCALENDAR\r\n", &IcsMappingPolicy::default()).is_err());
        assert!(import_ics("BEGIN:VCALENDAR\r\n", &IcsMappingPolicy::default()).is_err());
    }

    #[test]
    fn import_is_idempotent() {
        let text = cal(&ONE.replace("END:VEVENT", "RRULE:FREQ=DAILY;COUNT=2\r\nEND:VEVENT"));
        let a = import_ics(&text, &IcsMappingPolicy::default()).unwrap();
        let b = import_ics(&text, &IcsMappingPolicy::default()).unwrap();
        assert_eq!(a, b);
    }
}
