//! Per-meeting families: scalars, invitee listings, breakdowns, core-hours
//! gaps, and organizer rollups.

use chrono::NaiveTime;

use super::catalog::{Aggregate, BreakdownKind, ListingKind, RollupKind, ScalarKind};
use super::params::CoreHours;
use super::result::{Entry, Listing, Payload, Row, RowKey, Value};
use crate::calstore::{
    EmployeeId, Interval, InvitationRecord, MeetingRecord, ParticipantRecord, RequestType, ResponseType,
    StoreSnapshot,
};

pub const RESPONSE_CLASSES: [&str; 5] = ["Accept", "Decline", "Non-Responding", "Tentative", "Delegate"];

fn class_index(head: Option<ResponseType>) -> usize {
    match head {
        Some(ResponseType::Accept) => 0,
        Some(ResponseType::Decline) => 1,
        None => 2,
        Some(ResponseType::Tentative) => 3,
        Some(ResponseType::Delegate) => 4,
    }
}

/// Non-organizer participants holding an invitation, by employee id.
fn invitees<'a>(
    snap: &'a StoreSnapshot,
    meeting: &MeetingRecord,
) -> Vec<(&'a ParticipantRecord, &'a InvitationRecord)> {
    let mut out: Vec<_> = snap
        .participants_of_meeting(meeting.meeting_id)
        .filter(|p| !p.is_organizer)
        .filter_map(|p| Some((p, snap.invitation(p.invitation_id?)?)))
        .collect();
    out.sort_by_key(|(p, _)| p.employee_id);
    out
}

fn request_count(snap: &StoreSnapshot, inv: &InvitationRecord, kind: RequestType) -> u64 {
    snap.requests_of(inv.invitation_id).filter(|q| q.request_type == kind).count() as u64
}

fn head_type(snap: &StoreSnapshot, inv: &InvitationRecord) -> Option<ResponseType> {
    snap.head_response(inv).map(|r| r.response_type)
}

/// Value of a per-meeting scalar.
pub fn per_meeting_scalar(snap: &StoreSnapshot, m: &MeetingRecord, kind: ScalarKind) -> Payload {
    let invitees = || invitees(snap, m);
    let participants = || snap.participants_of_meeting(m.meeting_id);
    match kind {
        ScalarKind::InvitationLead => Payload::Duration(m.start_time.minutes_since(m.invitation_time)),
        ScalarKind::LastReactionLead => {
            let latest = invitees()
                .into_iter()
                .flat_map(|(_, inv)| {
                    let responses = snap.response_chain(inv).map(|r| r.date_time);
                    let requests = snap.requests_of(inv.invitation_id).map(|q| q.date_time);
                    responses.chain(requests).collect::<Vec<_>>()
                })
                .max();
            Payload::OptionalDuration(latest.map(|t| t.minutes_since(m.invitation_time)))
        }
        ScalarKind::MinResponseLead => Payload::OptionalDuration(
            invitees()
                .into_iter()
                .filter_map(|(_, inv)| snap.head_response(inv))
                .map(|r| r.date_time.minutes_since(m.invitation_time))
                .min(),
        ),
        ScalarKind::Length => Payload::Duration(m.length_minutes()),
        ScalarKind::OccurrenceCount => Payload::Count(snap.series(m.repetition_from).count() as u64),
        ScalarKind::RecurrenceFrequency => {
            let starts: Vec<_> = snap.series(m.repetition_from).map(|o| o.start_time).collect();
            let n = starts.len() as i64;
            let freq = match (starts.iter().min(), starts.iter().max()) {
                (Some(&first), Some(&last)) if n >= 2 => Some(last.minutes_since(first) / (n - 1)),
                _ => None,
            };
            Payload::OptionalDuration(freq)
        }
        ScalarKind::RescheduleCount => Payload::Count(m.number_of_rescheduling as u64),
        ScalarKind::RoomChangeCount => Payload::Count(m.room_changed_number as u64),
        ScalarKind::CancelledFlag => Payload::Flag(m.cancelled),
        ScalarKind::ModificationSum => Payload::Count(
            participants().filter(|p| !p.is_organizer).map(|p| p.modification_number as u64).sum(),
        ),
        ScalarKind::ReplanRequestCount => Payload::Count(
            invitees().into_iter().map(|(_, inv)| request_count(snap, inv, RequestType::Replan)).sum(),
        ),
        ScalarKind::InfoRequestCount => Payload::Count(
            invitees().into_iter().map(|(_, inv)| request_count(snap, inv, RequestType::Info)).sum(),
        ),
        ScalarKind::DelegationCount => Payload::Count(
            participants()
                .filter_map(|p| snap.invitation(p.invitation_id?))
                .filter(|inv| inv.delegated_to.is_some())
                .count() as u64,
        ),
        ScalarKind::PreparationTotal => {
            Payload::Duration(participants().map(|p| p.preparation_time as i64).sum())
        }
        ScalarKind::FollowupTotal => Payload::Duration(participants().map(|p| p.follow_up_time as i64).sum()),
        ScalarKind::TotalTimeCost => {
            let length = m.length_minutes();
            Payload::Duration(
                participants()
                    .map(|p| p.preparation_time as i64 + p.follow_up_time as i64 + length)
                    .sum(),
            )
        }
        ScalarKind::LocationCount => Payload::Count(snap.locations_of(m.meeting_id).len() as u64),
        ScalarKind::InvitedCount => Payload::Count(invitees().len() as u64),
        ScalarKind::RequiredCount => {
            Payload::Count(invitees().iter().filter(|(_, inv)| inv.requiredness).count() as u64)
        }
        ScalarKind::OptionalCount => {
            Payload::Count(invitees().iter().filter(|(_, inv)| !inv.requiredness).count() as u64)
        }
    }
}

fn employee_key(snap: &StoreSnapshot, id: EmployeeId) -> RowKey {
    let name = snap.employee(id).map(|e| e.name.clone()).unwrap_or_default();
    RowKey::Employee { id, name }
}

/// Per-invitee listing, ordered by employee id.
pub fn per_meeting_listing(snap: &StoreSnapshot, m: &MeetingRecord, kind: ListingKind) -> Listing {
    let rows = match kind {
        ListingKind::ModificationsPerInvitee => {
            let mut ps: Vec<_> = snap.participants_of_meeting(m.meeting_id).filter(|p| !p.is_organizer).collect();
            ps.sort_by_key(|p| p.employee_id);
            ps.into_iter()
                .map(|p| Row {
                    key: employee_key(snap, p.employee_id),
                    values: vec![Value::Int(p.modification_number as i64)],
                })
                .collect()
        }
        _ => invitees(snap, m)
            .into_iter()
            .filter(|(_, inv)| match kind {
                ListingKind::RequiredInvitees => inv.requiredness,
                ListingKind::OptionalInvitees => !inv.requiredness,
                _ => true,
            })
            .map(|(p, inv)| {
                let values = match kind {
                    ListingKind::ResponseLeadPerInvitee => vec![snap
                        .head_response(inv)
                        .map_or(Value::Absent, |r| Value::Int(r.date_time.minutes_since(m.invitation_time)))],
                    ListingKind::ReplanPerInvitee => {
                        vec![Value::Int(request_count(snap, inv, RequestType::Replan) as i64)]
                    }
                    ListingKind::InfoPerInvitee => vec![Value::Int(request_count(snap, inv, RequestType::Info) as i64)],
                    _ => vec![],
                };
                Row {
                    key: employee_key(snap, p.employee_id),
                    values,
                }
            })
            .collect(),
    };
    Listing::new(kind.columns(), rows)
}

/// Category counts or likelihoods over a meeting's invitees.
pub fn breakdown(snap: &StoreSnapshot, m: &MeetingRecord, kind: BreakdownKind) -> Vec<Entry> {
    let invitees = invitees(snap, m);
    let classes = |filter: &dyn Fn(&InvitationRecord) -> bool| {
        let mut counts = [0i64; 5];
        for (_, inv) in invitees.iter().filter(|(_, inv)| filter(inv)) {
            counts[class_index(head_type(snap, inv))] += 1;
        }
        counts
    };
    let labeled = |counts: [i64; 5]| {
        RESPONSE_CLASSES
            .iter()
            .zip(counts)
            .map(|(l, c)| Entry::new(l, Value::Int(c)))
            .collect::<Vec<_>>()
    };
    match kind {
        BreakdownKind::Response => labeled(classes(&|_| true)),
        BreakdownKind::ResponseLikelihood => {
            let total = invitees.len() as i64;
            RESPONSE_CLASSES
                .iter()
                .zip(classes(&|_| true))
                .map(|(l, c)| Entry::new(l, Value::ratio(c, total)))
                .collect()
        }
        BreakdownKind::Requiredness => {
            let required = invitees.iter().filter(|(_, inv)| inv.requiredness).count() as i64;
            vec![
                Entry::new("Required", Value::Int(required)),
                Entry::new("Optional", Value::Int(invitees.len() as i64 - required)),
            ]
        }
        BreakdownKind::ResponseByRequiredness => {
            let mut out = Vec::with_capacity(10);
            for (level, required) in [("Required", true), ("Optional", false)] {
                let counts = classes(&|inv| inv.requiredness == required);
                for (l, c) in RESPONSE_CLASSES.iter().zip(counts) {
                    out.push(Entry::new(&format!("{l} - {level}"), Value::Int(c)));
                }
            }
            out
        }
        BreakdownKind::DelegatedResponse => labeled(classes(&|inv| inv.delegated_from.is_some())),
        BreakdownKind::AttendanceComposition => {
            let mut counts = [0i64; 3];
            for p in snap.participants_of_meeting(m.meeting_id).filter(|p| !p.is_organizer) {
                match (p.invitation_id.is_some(), p.participate_on_meeting) {
                    (true, true) => counts[0] += 1,
                    (true, false) => counts[1] += 1,
                    (false, true) => counts[2] += 1,
                    (false, false) => {}
                }
            }
            vec![
                Entry::new("InvitedAndActive", Value::Int(counts[0])),
                Entry::new("InvitedAndInactive", Value::Int(counts[1])),
                Entry::new("NonInvitedButActive", Value::Int(counts[2])),
            ]
        }
    }
}

fn tod_minutes(a: NaiveTime, b: NaiveTime) -> i64 {
    (a - b).num_seconds() / 60
}

/// The four signed clock-time differences against core hours.
pub fn core_hours_gaps(m: &MeetingRecord, hours: CoreHours) -> Vec<Entry> {
    let (s, f) = (m.start_time.time(), m.finish_time.time());
    vec![
        Entry::new("MeetingStart-CoreStart", Value::Int(tod_minutes(s, hours.start))),
        Entry::new("CoreFinish-MeetingStart", Value::Int(tod_minutes(hours.finish, s))),
        Entry::new("MeetingFinish-CoreStart", Value::Int(tod_minutes(f, hours.start))),
        Entry::new("CoreFinish-MeetingFinish", Value::Int(tod_minutes(hours.finish, f))),
    ]
}

/// Meetings organized by `employee` starting inside `interval`, by start time.
pub(crate) fn organized(
    snap: &StoreSnapshot,
    employee: EmployeeId,
    interval: Interval,
) -> Vec<&MeetingRecord> {
    let mut out: Vec<_> = snap
        .participations_of(employee)
        .filter(|p| p.is_organizer)
        .filter_map(|p| snap.meeting(p.meeting_id))
        .filter(|m| interval.contains(m.start_time))
        .collect();
    out.sort_by_key(|m| (m.start_time, m.meeting_id));
    out
}

fn payload_value(p: &Payload) -> Value {
    match p {
        Payload::Duration(v) => Value::Int(*v),
        Payload::OptionalDuration(v) => v.map_or(Value::Absent, Value::Int),
        Payload::Count(v) => Value::Int(*v as i64),
        Payload::Flag(v) => Value::Flag(*v),
        _ => unreachable!("rollups only aggregate scalars"),
    }
}

/// Aggregates a per-meeting quantity over the meetings an employee organized.
pub fn organizer_rollup(
    snap: &StoreSnapshot,
    employee: EmployeeId,
    interval: Interval,
    kind: RollupKind,
    agg: Aggregate,
) -> Payload {
    let scope = organized(snap, employee, interval);
    let value = |m: &MeetingRecord| match kind {
        RollupKind::Scalar(k) => payload_value(&per_meeting_scalar(snap, m, k)),
        RollupKind::ParticipantCountTotal => Value::Int(snap.participants_of_meeting(m.meeting_id).count() as i64),
    };
    match agg {
        Aggregate::List => Payload::Listing(Listing::new(
            &[kind.name()],
            scope
                .iter()
                .map(|m| Row {
                    key: RowKey::Meeting(m.meeting_id),
                    values: vec![value(m)],
                })
                .collect(),
        )),
        Aggregate::Average => {
            let defined: Vec<i64> = scope.iter().filter_map(|m| value(m).as_int()).collect();
            Payload::Number(if defined.is_empty() {
                None
            } else {
                Some(defined.iter().sum::<i64>() as f64 / defined.len() as f64)
            })
        }
        Aggregate::CancelTally => {
            let cancelled = scope.iter().filter(|m| m.cancelled).count() as i64;
            Payload::Labeled(vec![
                Entry::new("Held", Value::Int(scope.len() as i64 - cancelled)),
                Entry::new("Cancelled", Value::Int(cancelled)),
            ])
        }
    }
}
