//! Reference evaluator. Every metric is recomputed from the raw tables with
//! full scans and no indexes, so it shares no query code with the engine.
//! Used to freeze golden values and for differential testing.

mod golden;

pub use golden::{emit_goldens, f1_cases, parse_goldens, render_outcome, GoldenCase, GoldenLine, GOLDEN_HEADER};

use std::collections::{BTreeMap, BTreeSet};

use chrono::Datelike;

use crate::calstore::{
    Dataset, EmployeeId, Interval, InvitationRecord, MeetingId, MeetingRecord, ParticipantRecord, RequestType,
    ResponseRecord, ResponseType, RoomId, StoreSnapshot, Timestamp,
};
use crate::metrics::{
    check_params, resolve, Aggregate, BoardKind, Bucket, BreakdownKind, DelegationKind, EmployeeKind, EntityLookup,
    Entry, Listing, ListingKind, MetricError, MetricResult, Op, PairEntry, PairKind, PairStatsKind, Params,
    Payload, RankEntry, RollupKind, Row, RowKey, ScalarKind, Value,
};

struct Scan<'a>(&'a Dataset);

impl EntityLookup for Scan<'_> {
    fn has_meeting(&self, id: MeetingId) -> bool {
        self.0.meeting.iter().any(|m| m.meeting_id == id)
    }

    fn has_employee(&self, id: EmployeeId) -> bool {
        self.0.employee.iter().any(|e| e.employee_id == id)
    }

    fn has_room(&self, id: RoomId) -> bool {
        self.0.room.iter().any(|r| r.room_id == id)
    }
}

/// Evaluates a metric from `snapshot.tables()` alone.
pub fn oracle_evaluate(snapshot: &StoreSnapshot, id: &str, params: &Params) -> Result<MetricResult, MetricError> {
    let d = snapshot.tables();
    let (entry, variant) = resolve(id, params)?;
    check_params(variant, params, &Scan(d))?;
    let payload = Oracle { d }.run(variant.op, params);
    Ok(MetricResult {
        metric: entry.id.to_string(),
        variant: variant.name.to_string(),
        params: params.echo(variant),
        payload,
    })
}

fn within(iv: Interval, t: Timestamp) -> bool {
    t >= iv.start && t <= iv.end
}

fn minutes(later: Timestamp, earlier: Timestamp) -> i64 {
    (later.naive() - earlier.naive()).num_seconds() / 60
}

const CLASSES: [&str; 5] = ["Accept", "Decline", "Non-Responding", "Tentative", "Delegate"];

fn class_of(head: Option<&ResponseRecord>) -> &'static str {
    match head.map(|r| r.response_type) {
        None => "Non-Responding",
        Some(ResponseType::Accept) => "Accept",
        Some(ResponseType::Decline) => "Decline",
        Some(ResponseType::Tentative) => "Tentative",
        Some(ResponseType::Delegate) => "Delegate",
    }
}

struct Oracle<'a> {
    d: &'a Dataset,
}

impl<'a> Oracle<'a> {
    fn meeting(&self, id: MeetingId) -> &'a MeetingRecord {
        self.d.meeting.iter().find(|m| m.meeting_id == id).expect("meeting checked")
    }

    fn name(&self, id: EmployeeId) -> String {
        self.d.employee.iter().find(|e| e.employee_id == id).map(|e| e.name.clone()).unwrap_or_default()
    }

    fn invitation(&self, p: &ParticipantRecord) -> Option<&'a InvitationRecord> {
        let id = p.invitation_id?;
        self.d.invitation.iter().find(|i| i.invitation_id == id)
    }

    fn head(&self, inv: &InvitationRecord) -> Option<&'a ResponseRecord> {
        let id = inv.invitation_response_id?;
        self.d.invitationresponse.iter().find(|r| r.invitation_response_id == id)
    }

    /// Newest first; bounded by the table size.
    fn chain(&self, inv: &InvitationRecord) -> Vec<&'a ResponseRecord> {
        let mut out = Vec::new();
        let mut next = inv.invitation_response_id;
        while let Some(id) = next {
            if out.len() > self.d.invitationresponse.len() {
                break;
            }
            let Some(r) = self.d.invitationresponse.iter().find(|r| r.invitation_response_id == id) else {
                break;
            };
            out.push(r);
            next = r.previous_response_id;
        }
        out
    }

    fn requests(&self, inv: &InvitationRecord, kind: Option<RequestType>) -> Vec<Timestamp> {
        self.d
            .inviteerequest
            .iter()
            .filter(|q| q.invitation_id == inv.invitation_id && kind.is_none_or(|k| q.request_type == k))
            .map(|q| q.date_time)
            .collect()
    }

    fn rows_of_meeting(&self, m: MeetingId) -> Vec<&'a ParticipantRecord> {
        self.d.participant.iter().filter(|p| p.meeting_id == m).collect()
    }

    /// Non-organizer participants with an invitation, by employee id.
    fn invitees(&self, m: MeetingId) -> Vec<(&'a ParticipantRecord, &'a InvitationRecord)> {
        let mut out = Vec::new();
        for p in self.rows_of_meeting(m) {
            if p.is_organizer {
                continue;
            }
            if let Some(inv) = self.invitation(p) {
                out.push((p, inv));
            }
        }
        out.sort_by_key(|(p, _)| p.employee_id);
        out
    }

    fn location_count(&self, m: MeetingId) -> usize {
        self.d.locationinmeeting.iter().filter(|l| l.meeting_id == m).count()
    }

    /// (participant row, meeting) for the employee in the interval.
    fn scope(&self, e: EmployeeId, iv: Interval) -> Vec<(&'a ParticipantRecord, &'a MeetingRecord)> {
        let mut out = Vec::new();
        for p in &self.d.participant {
            if p.employee_id != e {
                continue;
            }
            for m in &self.d.meeting {
                if m.meeting_id == p.meeting_id && within(iv, m.start_time) {
                    out.push((p, m));
                }
            }
        }
        out
    }

    fn run(&self, op: Op, p: &Params) -> Payload {
        let meeting = || self.meeting(p.meeting.expect("meeting"));
        let employee = || p.employee.expect("employee");
        let iv = || p.interval.expect("interval");
        match op {
            Op::Scalar(k) => self.scalar(meeting(), k),
            Op::Listing(k) => Payload::Listing(self.listing(meeting(), k)),
            Op::Rollup(k, agg) => self.rollup(employee(), iv(), k, agg),
            Op::Breakdown(k) => Payload::Breakdown(self.breakdown(meeting(), k)),
            Op::CoreHoursGaps => {
                let h = p.effective_core_hours();
                let m = meeting();
                let tod = |a: chrono::NaiveTime, b: chrono::NaiveTime| (a - b).num_minutes();
                let (s, f) = (m.start_time.time(), m.finish_time.time());
                Payload::Labeled(vec![
                    Entry::new("MeetingStart-CoreStart", Value::Int(tod(s, h.start))),
                    Entry::new("CoreFinish-MeetingStart", Value::Int(tod(h.finish, s))),
                    Entry::new("MeetingFinish-CoreStart", Value::Int(tod(f, h.start))),
                    Entry::new("CoreFinish-MeetingFinish", Value::Int(tod(h.finish, f))),
                ])
            }
            Op::Pairwise(k) => {
                let (a, b) = (meeting(), self.meeting(p.other_meeting.expect("other_meeting")));
                match k {
                    PairKind::Overlap => Payload::Duration(overlap(a, b)),
                    PairKind::AreParallel => Payload::Flag(overlap(a, b) > 0),
                    PairKind::Gap => Payload::Duration(gap(a, b)),
                    PairKind::IsConsecutive => Payload::Flag(gap(a, b) < p.effective_consecutive_threshold()),
                }
            }
            Op::PairStats(k) => {
                let organizer_only = p.paper_exact && k != PairStatsKind::ConsecutivePairs;
                let pairs = self.pairs(employee(), iv(), organizer_only);
                match k {
                    PairStatsKind::ParallelPairCount => {
                        Payload::Count(pairs.iter().filter(|(a, b)| overlap(a, b) > 0).count() as u64)
                    }
                    PairStatsKind::ParallelMinutesTotal => {
                        Payload::Duration(pairs.iter().map(|(a, b)| overlap(a, b).max(0)).sum())
                    }
                    PairStatsKind::ConsecutivePairs => {
                        let t = p.effective_consecutive_threshold();
                        Payload::PairListing(
                            pairs
                                .iter()
                                .filter(|(a, b)| gap(a, b) < t)
                                .map(|(a, b)| PairEntry { first: a.meeting_id, second: b.meeting_id, minutes: gap(a, b) })
                                .collect(),
                        )
                    }
                }
            }
            Op::Employee(k) => Payload::Count(self.employee_count(employee(), iv(), k, p.effective_last_minute_threshold())),
            Op::BucketedAverage => {
                let mut counts: BTreeMap<(i32, u32, u32), i64> = BTreeMap::new();
                for (_, m) in self.scope(employee(), iv()) {
                    let d = m.start_time.date();
                    let key = match p.bucket.expect("bucket") {
                        Bucket::Day => (d.year(), d.month(), d.day()),
                        Bucket::Week => (d.iso_week().year(), d.iso_week().week(), 0),
                        Bucket::Month => (d.year(), d.month(), 0),
                    };
                    *counts.entry(key).or_insert(0) += 1;
                }
                Payload::Number(if counts.is_empty() {
                    None
                } else {
                    Some(counts.values().sum::<i64>() as f64 / counts.len() as f64)
                })
            }
            Op::Histogram => {
                let mut hist: BTreeMap<u64, i64> = BTreeMap::new();
                for (row, m) in self.scope(employee(), iv()) {
                    if row.is_organizer {
                        *hist.entry(self.rows_of_meeting(m.meeting_id).len() as u64).or_insert(0) += 1;
                    }
                }
                let mut rows: Vec<(u64, i64)> = hist.into_iter().collect();
                rows.sort_by_key(|a| (-a.1, a.0));
                Payload::Listing(Listing::new(
                    &["meetings"],
                    rows.into_iter().map(|(s, n)| Row { key: RowKey::Size(s), values: vec![Value::Int(n)] }).collect(),
                ))
            }
            Op::Compare => {
                let ids: BTreeSet<EmployeeId> = p.employees.clone().expect("employees").into_iter().collect();
                let rows = ids
                    .into_iter()
                    .map(|e| {
                        let s = self.scope(e, iv());
                        let chaired = s.iter().filter(|(r, _)| r.is_organizer).count() as i64;
                        Row {
                            key: RowKey::Employee { id: e, name: self.name(e) },
                            values: vec![Value::Int(chaired), Value::Int(s.len() as i64 - chaired)],
                        }
                    })
                    .collect();
                Payload::Listing(Listing::new(&["chaired", "attended"], rows))
            }
            Op::Leaderboard(k) => Payload::Ranking(self.board(iv(), k, p)),
            Op::RoomAvailability => {
                let booked = self.booked(p.at.expect("at"), p.paper_exact);
                let mut all: Vec<RoomId> = self.d.room.iter().map(|r| r.room_id).collect();
                all.sort();
                let (b, f) = all.into_iter().partition(|r| booked.contains(r));
                Payload::Rooms { booked: b, free: f }
            }
            Op::RoomBooked => Payload::Flag(self.booked(p.at.expect("at"), p.paper_exact).contains(&p.room.expect("room"))),
            Op::Delegation(k) => {
                let e = employee();
                let out = self.employee_count(e, iv(), EmployeeKind::DelegatedOutCount, 0) as i64;
                let second = match k {
                    DelegationKind::VsCompanyAverage => {
                        let (mut all, mut delegated) = (0, 0);
                        for m in self.d.meeting.iter().filter(|m| within(iv(), m.start_time)) {
                            for row in self.rows_of_meeting(m.meeting_id) {
                                if let Some(inv) = self.invitation(row) {
                                    all += 1;
                                    if inv.delegated_to.is_some() {
                                        delegated += 1;
                                    }
                                }
                            }
                        }
                        Entry::new("AverageDelegationsFromEveryEmployee", Value::ratio(delegated, all))
                    }
                    DelegationKind::OutVsIn => Entry::new(
                        "DelegationRequestsForThePerson",
                        Value::Int(self.employee_count(e, iv(), EmployeeKind::DelegationReceivedCount, 0) as i64),
                    ),
                };
                Payload::Labeled(vec![Entry::new("DelegationsFromThePerson", Value::Int(out)), second])
            }
            Op::MultiLocation => {
                let mut ms: Vec<&MeetingRecord> = self.d.meeting.iter().filter(|m| within(iv(), m.start_time)).collect();
                ms.sort_by_key(|m| m.meeting_id);
                let rows = ms
                    .into_iter()
                    .filter(|m| self.location_count(m.meeting_id) >= 2)
                    .map(|m| Row {
                        key: RowKey::Meeting(m.meeting_id),
                        values: vec![Value::Int(self.location_count(m.meeting_id) as i64)],
                    })
                    .collect();
                Payload::Listing(Listing::new(&["locations"], rows))
            }
        }
    }

    fn scalar(&self, m: &MeetingRecord, k: ScalarKind) -> Payload {
        let rows = self.rows_of_meeting(m.meeting_id);
        let invitees = self.invitees(m.meeting_id);
        let count = |n: usize| Payload::Count(n as u64);
        match k {
            ScalarKind::InvitationLead => Payload::Duration(minutes(m.start_time, m.invitation_time)),
            ScalarKind::LastReactionLead => {
                let mut events = Vec::new();
                for (_, inv) in &invitees {
                    events.extend(self.chain(inv).iter().map(|r| r.date_time));
                    events.extend(self.requests(inv, None));
                }
                Payload::OptionalDuration(events.into_iter().map(|t| minutes(t, m.invitation_time)).max())
            }
            ScalarKind::MinResponseLead => Payload::OptionalDuration(
                invitees
                    .iter()
                    .filter_map(|(_, inv)| self.head(inv))
                    .map(|r| minutes(r.date_time, m.invitation_time))
                    .min(),
            ),
            ScalarKind::Length => Payload::Duration(minutes(m.finish_time, m.start_time)),
            ScalarKind::OccurrenceCount => {
                count(self.d.meeting.iter().filter(|o| o.repetition_from == m.repetition_from).count())
            }
            ScalarKind::RecurrenceFrequency => {
                let mut starts: Vec<Timestamp> = self
                    .d
                    .meeting
                    .iter()
                    .filter(|o| o.repetition_from == m.repetition_from)
                    .map(|o| o.start_time)
                    .collect();
                starts.sort();
                Payload::OptionalDuration(if starts.len() < 2 {
                    None
                } else {
                    Some(minutes(starts[starts.len() - 1], starts[0]) / (starts.len() as i64 - 1))
                })
            }
            ScalarKind::RescheduleCount => count(m.number_of_rescheduling as usize),
            ScalarKind::RoomChangeCount => count(m.room_changed_number as usize),
            ScalarKind::CancelledFlag => Payload::Flag(m.cancelled),
            ScalarKind::ModificationSum => {
                count(rows.iter().filter(|p| !p.is_organizer).map(|p| p.modification_number as usize).sum())
            }
            ScalarKind::ReplanRequestCount => {
                count(invitees.iter().map(|(_, inv)| self.requests(inv, Some(RequestType::Replan)).len()).sum())
            }
            ScalarKind::InfoRequestCount => {
                count(invitees.iter().map(|(_, inv)| self.requests(inv, Some(RequestType::Info)).len()).sum())
            }
            ScalarKind::DelegationCount => count(
                rows.iter().filter(|p| self.invitation(p).is_some_and(|i| i.delegated_to.is_some())).count(),
            ),
            ScalarKind::PreparationTotal => Payload::Duration(rows.iter().map(|p| p.preparation_time as i64).sum()),
            ScalarKind::FollowupTotal => Payload::Duration(rows.iter().map(|p| p.follow_up_time as i64).sum()),
            ScalarKind::TotalTimeCost => {
                let prep: i64 = rows.iter().map(|p| p.preparation_time as i64).sum();
                let follow: i64 = rows.iter().map(|p| p.follow_up_time as i64).sum();
                Payload::Duration(prep + follow + rows.len() as i64 * minutes(m.finish_time, m.start_time))
            }
            ScalarKind::LocationCount => count(self.location_count(m.meeting_id)),
            ScalarKind::InvitedCount => count(invitees.len()),
            ScalarKind::RequiredCount => count(invitees.iter().filter(|(_, i)| i.requiredness).count()),
            ScalarKind::OptionalCount => count(invitees.iter().filter(|(_, i)| !i.requiredness).count()),
        }
    }

    fn listing(&self, m: &MeetingRecord, k: ListingKind) -> Listing {
        let key = |e: EmployeeId| RowKey::Employee { id: e, name: self.name(e) };
        let rows = if k == ListingKind::ModificationsPerInvitee {
            let mut rows: Vec<_> = self.rows_of_meeting(m.meeting_id).into_iter().filter(|p| !p.is_organizer).collect();
            rows.sort_by_key(|p| p.employee_id);
            rows.iter()
                .map(|p| Row { key: key(p.employee_id), values: vec![Value::Int(p.modification_number as i64)] })
                .collect()
        } else {
            let mut out = Vec::new();
            for (p, inv) in self.invitees(m.meeting_id) {
                let values = match k {
                    ListingKind::Invited => vec![],
                    ListingKind::RequiredInvitees if inv.requiredness => vec![],
                    ListingKind::OptionalInvitees if !inv.requiredness => vec![],
                    ListingKind::RequiredInvitees | ListingKind::OptionalInvitees => continue,
                    ListingKind::ResponseLeadPerInvitee => vec![match self.head(inv) {
                        Some(r) => Value::Int(minutes(r.date_time, m.invitation_time)),
                        None => Value::Absent,
                    }],
                    ListingKind::ReplanPerInvitee => {
                        vec![Value::Int(self.requests(inv, Some(RequestType::Replan)).len() as i64)]
                    }
                    ListingKind::InfoPerInvitee => vec![Value::Int(self.requests(inv, Some(RequestType::Info)).len() as i64)],
                    ListingKind::ModificationsPerInvitee => unreachable!(),
                };
                out.push(Row { key: key(p.employee_id), values });
            }
            out
        };
        Listing::new(k.columns(), rows)
    }

    fn rollup(&self, e: EmployeeId, iv: Interval, k: RollupKind, agg: Aggregate) -> Payload {
        let mut chaired: Vec<&MeetingRecord> =
            self.scope(e, iv).into_iter().filter(|(p, _)| p.is_organizer).map(|(_, m)| m).collect();
        chaired.sort_by_key(|m| (m.start_time, m.meeting_id));
        let value = |m: &MeetingRecord| match k {
            RollupKind::ParticipantCountTotal => Value::Int(self.rows_of_meeting(m.meeting_id).len() as i64),
            RollupKind::Scalar(s) => match self.scalar(m, s) {
                Payload::Duration(v) => Value::Int(v),
                Payload::OptionalDuration(Some(v)) => Value::Int(v),
                Payload::OptionalDuration(None) => Value::Absent,
                Payload::Count(v) => Value::Int(v as i64),
                Payload::Flag(v) => Value::Flag(v),
                other => unreachable!("{other:?}"),
            },
        };
        match agg {
            Aggregate::List => Payload::Listing(Listing::new(
                &[k.name()],
                chaired.iter().map(|m| Row { key: RowKey::Meeting(m.meeting_id), values: vec![value(m)] }).collect(),
            )),
            Aggregate::Average => {
                let (mut sum, mut n) = (0i64, 0i64);
                for m in &chaired {
                    if let Value::Int(v) = value(m) {
                        sum += v;
                        n += 1;
                    }
                }
                Payload::Number(if n == 0 { None } else { Some(sum as f64 / n as f64) })
            }
            Aggregate::CancelTally => {
                let cancelled = chaired.iter().filter(|m| m.cancelled).count() as i64;
                let held = chaired.iter().filter(|m| !m.cancelled).count() as i64;
                Payload::Labeled(vec![Entry::new("Held", Value::Int(held)), Entry::new("Cancelled", Value::Int(cancelled))])
            }
        }
    }

    fn breakdown(&self, m: &MeetingRecord, k: BreakdownKind) -> Vec<Entry> {
        let invitees = self.invitees(m.meeting_id);
        let tally = |keep: &dyn Fn(&InvitationRecord) -> bool| -> Vec<(&'static str, i64)> {
            CLASSES
                .iter()
                .map(|&c| (c, invitees.iter().filter(|(_, i)| keep(i) && class_of(self.head(i)) == c).count() as i64))
                .collect()
        };
        let ints = |t: Vec<(&str, i64)>| t.into_iter().map(|(l, n)| Entry::new(l, Value::Int(n))).collect();
        match k {
            BreakdownKind::Response => ints(tally(&|_| true)),
            BreakdownKind::ResponseLikelihood => tally(&|_| true)
                .into_iter()
                .map(|(l, n)| Entry::new(l, Value::ratio(n, invitees.len() as i64)))
                .collect(),
            BreakdownKind::Requiredness => ints(vec![
                ("Required", invitees.iter().filter(|(_, i)| i.requiredness).count() as i64),
                ("Optional", invitees.iter().filter(|(_, i)| !i.requiredness).count() as i64),
            ]),
            BreakdownKind::ResponseByRequiredness => {
                let mut out = Vec::new();
                for (suffix, req) in [("Required", true), ("Optional", false)] {
                    for (l, n) in tally(&|i| i.requiredness == req) {
                        out.push(Entry::new(&format!("{l} - {suffix}"), Value::Int(n)));
                    }
                }
                out
            }
            BreakdownKind::DelegatedResponse => ints(tally(&|i| i.delegated_from.is_some())),
            BreakdownKind::AttendanceComposition => {
                let guests: Vec<_> = self.rows_of_meeting(m.meeting_id).into_iter().filter(|p| !p.is_organizer).collect();
                let n = |invited: bool, active: bool| {
                    guests.iter().filter(|p| p.invitation_id.is_some() == invited && p.participate_on_meeting == active).count()
                        as i64
                };
                ints(vec![
                    ("InvitedAndActive", n(true, true)),
                    ("InvitedAndInactive", n(true, false)),
                    ("NonInvitedButActive", n(false, true)),
                ])
            }
        }
    }

    /// Unordered pairs (lower id first) of the employee's in-interval meetings.
    fn pairs(&self, e: EmployeeId, iv: Interval, organizer_only: bool) -> Vec<(&'a MeetingRecord, &'a MeetingRecord)> {
        let mut ms: Vec<&MeetingRecord> = self
            .scope(e, iv)
            .into_iter()
            .filter(|(p, _)| !organizer_only || p.is_organizer)
            .map(|(_, m)| m)
            .collect();
        ms.sort_by_key(|m| m.meeting_id);
        ms.dedup_by_key(|m| m.meeting_id);
        let mut out = Vec::new();
        for i in 0..ms.len() {
            for j in i + 1..ms.len() {
                out.push((ms[i], ms[j]));
            }
        }
        out
    }

    fn employee_count(&self, e: EmployeeId, iv: Interval, k: EmployeeKind, threshold: i64) -> u64 {
        let mut n = 0;
        for (p, m) in self.scope(e, iv) {
            let inv = self.invitation(p);
            let hit = match k {
                EmployeeKind::MeetingCount => true,
                EmployeeKind::ChairedCount => p.is_organizer,
                EmployeeKind::AttendedCount => !p.is_organizer,
                EmployeeKind::DelegatedOutCount => inv.is_some_and(|i| i.delegated_to.is_some()),
                EmployeeKind::DelegationReceivedCount => inv.is_some_and(|i| i.delegated_from.is_some()),
                EmployeeKind::DeclineAfterAcceptCount | EmployeeKind::LastMinuteDeclineCount => {
                    let chain = inv.map(|i| self.chain(i)).unwrap_or_default();
                    let flipped = chain.len() >= 2
                        && chain[0].response_type == ResponseType::Decline
                        && chain[1].response_type == ResponseType::Accept;
                    flipped
                        && (k == EmployeeKind::DeclineAfterAcceptCount
                            || minutes(m.start_time, chain[0].date_time) < threshold)
                }
            };
            if hit {
                n += 1;
            }
        }
        n
    }

    fn board(&self, iv: Interval, k: BoardKind, p: &Params) -> Vec<RankEntry> {
        let mut score: BTreeMap<EmployeeId, i64> = BTreeMap::new();
        let in_scope: Vec<&MeetingRecord> = self.d.meeting.iter().filter(|m| within(iv, m.start_time)).collect();
        match k {
            BoardKind::ParallelMinutesDesc => {
                for e in &self.d.employee {
                    let total = self.pairs(e.employee_id, iv, false).iter().map(|(a, b)| overlap(a, b).max(0)).sum();
                    score.insert(e.employee_id, total);
                }
            }
            BoardKind::CouplingDesc | BoardKind::CouplingLower | BoardKind::CouplingUpper => {
                let mut shared: BTreeMap<(EmployeeId, EmployeeId), u64> = BTreeMap::new();
                for m in &in_scope {
                    let rows = self.rows_of_meeting(m.meeting_id);
                    for a in &rows {
                        for b in &rows {
                            if a.employee_id != b.employee_id {
                                *shared.entry((a.employee_id, b.employee_id)).or_insert(0) += 1;
                            }
                        }
                    }
                }
                let keep = |n: u64| match k {
                    BoardKind::CouplingLower => n > p.lower_limit.expect("lower_limit"),
                    BoardKind::CouplingUpper => n < p.upper_limit.expect("upper_limit"),
                    _ if p.paper_exact => n > p.lower_limit.expect("lower_limit"),
                    _ => true,
                };
                for ((a, _), n) in shared {
                    if keep(n) {
                        *score.entry(a).or_insert(0) += n as i64;
                    }
                }
            }
            _ => {
                for m in &in_scope {
                    let length = minutes(m.finish_time, m.start_time);
                    for row in self.rows_of_meeting(m.meeting_id) {
                        let inv = self.invitation(row);
                        let s = match k {
                            BoardKind::MostChaired => row.is_organizer as i64,
                            BoardKind::MeetingCountDesc | BoardKind::MeetingCountAsc => 1,
                            BoardKind::MostTentative if !row.is_organizer => inv.map_or(0, |i| {
                                self.chain(i).iter().filter(|r| r.response_type == ResponseType::Tentative).count() as i64
                            }),
                            BoardKind::MostTentative => 0,
                            BoardKind::MostCancelling => (row.is_organizer && m.cancelled) as i64,
                            BoardKind::MostOptional => inv.is_some_and(|i| !i.requiredness) as i64,
                            BoardKind::MostRequired => inv.is_some_and(|i| i.requiredness) as i64,
                            BoardKind::PreparationTotal => row.preparation_time as i64,
                            BoardKind::FollowupTotal => row.follow_up_time as i64,
                            BoardKind::TimeCostTotal => row.preparation_time as i64 + row.follow_up_time as i64 + length,
                            _ => unreachable!(),
                        };
                        *score.entry(row.employee_id).or_insert(0) += s;
                    }
                }
            }
        }
        let mut out: Vec<RankEntry> =
            score.into_iter().filter(|(_, s)| *s != 0).map(|(employee, score)| RankEntry { employee, score }).collect();
        // BTreeMap order already breaks ties by id; the sort is stable.
        if k.ascending() {
            out.sort_by_key(|r| r.score);
        } else {
            out.sort_by_key(|r| -r.score);
        }
        if let Some(n) = p.limit {
            out.truncate(n);
        }
        out
    }

    fn booked(&self, at: Timestamp, include_cancelled: bool) -> BTreeSet<RoomId> {
        let mut out = BTreeSet::new();
        for m in &self.d.meeting {
            if m.start_time > at || at > m.finish_time || (m.cancelled && !include_cancelled) {
                continue;
            }
            for link in self.d.locationinmeeting.iter().filter(|l| l.meeting_id == m.meeting_id) {
                for loc in self.d.location.iter().filter(|l| l.location_id == link.location_id) {
                    if let Some(r) = loc.room_id {
                        out.insert(r);
                    }
                }
            }
        }
        out
    }
}

fn overlap(a: &MeetingRecord, b: &MeetingRecord) -> i64 {
    let start = if a.start_time > b.start_time { a.start_time } else { b.start_time };
    let finish = if a.finish_time < b.finish_time { a.finish_time } else { b.finish_time };
    minutes(finish, start)
}

fn gap(a: &MeetingRecord, b: &MeetingRecord) -> i64 {
    let (first, second) = if a.start_time <= b.start_time { (a, b) } else { (b, a) };
    minutes(second.start_time, first.finish_time).max(0)
}
