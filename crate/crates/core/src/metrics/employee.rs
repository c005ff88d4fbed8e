//! Per-employee counts over an interval.

use std::collections::{BTreeMap, BTreeSet};

use chrono::Datelike;

use super::catalog::{DelegationKind, EmployeeKind};
use super::meeting::organized;
use super::params::Bucket;
use super::result::{Entry, Listing, Payload, Row, RowKey, Value};
use crate::calstore::{
    EmployeeId, Interval, InvitationRecord, MeetingRecord, ParticipantRecord, ResponseType, StoreSnapshot,
};

/// The employee's participant rows in meetings starting inside `interval`.
fn rows<'a>(
    snap: &'a StoreSnapshot,
    employee: EmployeeId,
    interval: Interval,
) -> impl Iterator<Item = (&'a ParticipantRecord, &'a MeetingRecord)> + 'a {
    snap.participations_of(employee)
        .filter_map(move |p| Some((p, snap.meeting(p.meeting_id)?)))
        .filter(move |(_, m)| interval.contains(m.start_time))
}

fn invitation<'a>(snap: &'a StoreSnapshot, p: &ParticipantRecord) -> Option<&'a InvitationRecord> {
    snap.invitation(p.invitation_id?)
}

/// Head is a decline directly superseding an accept; returns the decline time.
fn decline_after_accept(snap: &StoreSnapshot, inv: &InvitationRecord) -> Option<crate::calstore::Timestamp> {
    let head = snap.head_response(inv)?;
    let prev = snap.response(head.previous_response_id?)?;
    (head.response_type == ResponseType::Decline && prev.response_type == ResponseType::Accept)
        .then_some(head.date_time)
}

pub fn employee_interval_scalar(
    snap: &StoreSnapshot,
    employee: EmployeeId,
    interval: Interval,
    kind: EmployeeKind,
    last_minute_threshold: i64,
) -> u64 {
    let rows = rows(snap, employee, interval);
    let n = match kind {
        EmployeeKind::MeetingCount => rows.count(),
        EmployeeKind::ChairedCount => rows.filter(|(p, _)| p.is_organizer).count(),
        EmployeeKind::AttendedCount => rows.filter(|(p, _)| !p.is_organizer).count(),
        EmployeeKind::DelegatedOutCount => rows
            .filter(|(p, _)| invitation(snap, p).is_some_and(|i| i.delegated_to.is_some()))
            .count(),
        EmployeeKind::DelegationReceivedCount => rows
            .filter(|(p, _)| invitation(snap, p).is_some_and(|i| i.delegated_from.is_some()))
            .count(),
        EmployeeKind::DeclineAfterAcceptCount => rows
            .filter(|(p, _)| invitation(snap, p).and_then(|i| decline_after_accept(snap, i)).is_some())
            .count(),
        EmployeeKind::LastMinuteDeclineCount => rows
            .filter(|(p, m)| {
                invitation(snap, p)
                    .and_then(|i| decline_after_accept(snap, i))
                    .is_some_and(|t| m.start_time.minutes_since(t) < last_minute_threshold)
            })
            .count(),
    };
    n as u64
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum BucketKey {
    Day(i32, u32),
    Week(i32, u32),
    Month(i32, u32),
}

fn bucket_key(m: &MeetingRecord, bucket: Bucket) -> BucketKey {
    let d = m.start_time.date();
    match bucket {
        Bucket::Day => BucketKey::Day(d.year(), d.ordinal()),
        Bucket::Week => BucketKey::Week(d.iso_week().year(), d.iso_week().week()),
        Bucket::Month => BucketKey::Month(d.year(), d.month()),
    }
}

/// Mean meetings per non-empty bucket.
pub fn bucketed_average(snap: &StoreSnapshot, employee: EmployeeId, interval: Interval, bucket: Bucket) -> Option<f64> {
    let mut buckets = BTreeSet::new();
    let mut total = 0i64;
    for (_, m) in rows(snap, employee, interval) {
        buckets.insert(bucket_key(m, bucket));
        total += 1;
    }
    (!buckets.is_empty()).then(|| total as f64 / buckets.len() as f64)
}

/// (participant count, meetings with that count) over chaired meetings.
pub fn chaired_participant_histogram(snap: &StoreSnapshot, employee: EmployeeId, interval: Interval) -> Listing {
    let mut freq: BTreeMap<u64, i64> = BTreeMap::new();
    for m in organized(snap, employee, interval) {
        *freq.entry(snap.participants_of_meeting(m.meeting_id).count() as u64).or_default() += 1;
    }
    let mut pairs: Vec<_> = freq.into_iter().collect();
    pairs.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    Listing::new(
        &["meetings"],
        pairs
            .into_iter()
            .map(|(size, n)| Row {
                key: RowKey::Size(size),
                values: vec![Value::Int(n)],
            })
            .collect(),
    )
}

pub fn compare_chaired_attended(snap: &StoreSnapshot, employees: &[EmployeeId], interval: Interval) -> Listing {
    let ids: BTreeSet<_> = employees.iter().copied().collect();
    let rows = ids
        .into_iter()
        .map(|id| {
            let chaired = employee_interval_scalar(snap, id, interval, EmployeeKind::ChairedCount, 0);
            let attended = employee_interval_scalar(snap, id, interval, EmployeeKind::AttendedCount, 0);
            Row {
                key: RowKey::Employee {
                    id,
                    name: snap.employee(id).map(|e| e.name.clone()).unwrap_or_default(),
                },
                values: vec![Value::Int(chaired as i64), Value::Int(attended as i64)],
            }
        })
        .collect();
    Listing::new(&["chaired", "attended"], rows)
}

pub fn delegation_comparison(
    snap: &StoreSnapshot,
    employee: EmployeeId,
    interval: Interval,
    kind: DelegationKind,
) -> Payload {
    let out = employee_interval_scalar(snap, employee, interval, EmployeeKind::DelegatedOutCount, 0) as i64;
    let second = match kind {
        DelegationKind::VsCompanyAverage => {
            let (mut invited, mut delegated) = (0i64, 0i64);
            for m in snap.meetings().iter().filter(|m| interval.contains(m.start_time)) {
                for inv in snap.participants_of_meeting(m.meeting_id).filter_map(|p| invitation(snap, p)) {
                    invited += 1;
                    delegated += inv.delegated_to.is_some() as i64;
                }
            }
            Entry::new("AverageDelegationsFromEveryEmployee", Value::ratio(delegated, invited))
        }
        DelegationKind::OutVsIn => {
            let received =
                employee_interval_scalar(snap, employee, interval, EmployeeKind::DelegationReceivedCount, 0);
            Entry::new("DelegationRequestsForThePerson", Value::Int(received as i64))
        }
    };
    Payload::Labeled(vec![Entry::new("DelegationsFromThePerson", Value::Int(out)), second])
}
