//! Meeting pairs: single-pair relations and per-employee pair statistics.

use super::catalog::{PairKind, PairStatsKind};
use super::result::{PairEntry, Payload};
use crate::calstore::{EmployeeId, Interval, MeetingRecord, StoreSnapshot};

/// Signed overlap in minutes; negative when the meetings are apart.
pub fn overlap_minutes(a: &MeetingRecord, b: &MeetingRecord) -> i64 {
    let start = a.start_time.max(b.start_time);
    let finish = a.finish_time.min(b.finish_time);
    finish.minutes_since(start)
}

/// Minutes between the earlier finish and the later start, clamped at 0.
pub fn gap_minutes(a: &MeetingRecord, b: &MeetingRecord) -> i64 {
    let ab = b.start_time.minutes_since(a.finish_time);
    let ba = a.start_time.minutes_since(b.finish_time);
    ab.max(ba).max(0)
}

pub fn pairwise(a: &MeetingRecord, b: &MeetingRecord, kind: PairKind, consecutive_threshold: i64) -> Payload {
    match kind {
        PairKind::Overlap => Payload::Duration(overlap_minutes(a, b)),
        PairKind::AreParallel => Payload::Flag(overlap_minutes(a, b) > 0),
        PairKind::Gap => Payload::Duration(gap_minutes(a, b)),
        PairKind::IsConsecutive => Payload::Flag(gap_minutes(a, b) < consecutive_threshold),
    }
}

/// An employee's meetings inside `interval`, sorted by start time.
fn meetings_of(
    snap: &StoreSnapshot,
    employee: EmployeeId,
    interval: Interval,
    organizer_only: bool,
) -> Vec<&MeetingRecord> {
    let mut out: Vec<_> = snap
        .participations_of(employee)
        .filter(|p| !organizer_only || p.is_organizer)
        .filter_map(|p| snap.meeting(p.meeting_id))
        .filter(|m| interval.contains(m.start_time))
        .collect();
    out.sort_by_key(|m| (m.start_time, m.meeting_id));
    out
}

fn ordered(a: &MeetingRecord, b: &MeetingRecord, minutes: i64) -> PairEntry {
    let (first, second) = if a.meeting_id < b.meeting_id {
        (a.meeting_id, b.meeting_id)
    } else {
        (b.meeting_id, a.meeting_id)
    };
    PairEntry { first, second, minutes }
}

/// Overlapping pairs with their positive overlap, via a start-sorted sweep.
pub(crate) fn parallel_pairs(meetings: &[&MeetingRecord]) -> Vec<PairEntry> {
    let mut out = Vec::new();
    for (i, a) in meetings.iter().enumerate() {
        for b in &meetings[i + 1..] {
            if b.start_time >= a.finish_time {
                break;
            }
            let overlap = overlap_minutes(a, b);
            if overlap > 0 {
                out.push(ordered(a, b, overlap));
            }
        }
    }
    out.sort_by_key(|p| (p.first, p.second));
    out
}

fn consecutive_pairs(meetings: &[&MeetingRecord], threshold: i64) -> Vec<PairEntry> {
    let mut out = Vec::new();
    if threshold <= 0 {
        return out;
    }
    for (i, a) in meetings.iter().enumerate() {
        let horizon = a.finish_time.plus_minutes(threshold);
        for b in &meetings[i + 1..] {
            if b.start_time >= horizon {
                break;
            }
            let gap = gap_minutes(a, b);
            if gap < threshold {
                out.push(ordered(a, b, gap));
            }
        }
    }
    out.sort_by_key(|p| (p.first, p.second));
    out
}

pub fn employee_pair_stats(
    snap: &StoreSnapshot,
    employee: EmployeeId,
    interval: Interval,
    kind: PairStatsKind,
    consecutive_threshold: i64,
    organizer_only: bool,
) -> Payload {
    let meetings = meetings_of(snap, employee, interval, organizer_only);
    match kind {
        PairStatsKind::ParallelPairCount => Payload::Count(parallel_pairs(&meetings).len() as u64),
        PairStatsKind::ParallelMinutesTotal => {
            Payload::Duration(parallel_pairs(&meetings).iter().map(|p| p.minutes).sum())
        }
        PairStatsKind::ConsecutivePairs => Payload::PairListing(consecutive_pairs(&meetings, consecutive_threshold)),
    }
}

pub(crate) fn parallel_minutes_total(snap: &StoreSnapshot, employee: EmployeeId, interval: Interval) -> i64 {
    let meetings = meetings_of(snap, employee, interval, false);
    parallel_pairs(&meetings).iter().map(|p| p.minutes).sum()
}
