//! Employee leaderboards.

use std::collections::HashMap;

use super::catalog::BoardKind;
use super::pairs::parallel_minutes_total;
use super::result::RankEntry;
use crate::calstore::{EmployeeId, Interval, ResponseType, StoreSnapshot};

/// Coupling filter applied to each co-attendee's shared-meeting count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingLimit {
    None,
    Above(u64),
    Below(u64),
}

impl CouplingLimit {
    fn keeps(&self, n: u64) -> bool {
        match *self {
            CouplingLimit::None => true,
            CouplingLimit::Above(l) => n > l,
            CouplingLimit::Below(u) => n < u,
        }
    }
}

/// Ranks employees by `kind`; zero scores are dropped, ties go to the lower id.
pub fn leaderboard(
    snap: &StoreSnapshot,
    interval: Interval,
    kind: BoardKind,
    coupling: CouplingLimit,
    limit: Option<usize>,
) -> Vec<RankEntry> {
    let scores = scores(snap, interval, kind, coupling);
    let mut ranking: Vec<RankEntry> = scores
        .into_iter()
        .filter(|&(_, s)| s != 0)
        .map(|(employee, score)| RankEntry { employee, score })
        .collect();
    if kind.ascending() {
        ranking.sort_by(|a, b| a.score.cmp(&b.score).then(a.employee.cmp(&b.employee)));
    } else {
        ranking.sort_by(|a, b| b.score.cmp(&a.score).then(a.employee.cmp(&b.employee)));
    }
    if let Some(n) = limit {
        ranking.truncate(n);
    }
    ranking
}

fn scores(snap: &StoreSnapshot, interval: Interval, kind: BoardKind, coupling: CouplingLimit) -> HashMap<EmployeeId, i64> {
    let mut scores: HashMap<EmployeeId, i64> = HashMap::new();
    let in_scope = snap.meetings().iter().filter(|m| interval.contains(m.start_time));
    match kind {
        BoardKind::ParallelMinutesDesc => {
            for e in snap.employees() {
                scores.insert(e.employee_id, parallel_minutes_total(snap, e.employee_id, interval));
            }
        }
        BoardKind::CouplingDesc | BoardKind::CouplingLower | BoardKind::CouplingUpper => {
            let mut shared: HashMap<(EmployeeId, EmployeeId), u64> = HashMap::new();
            for m in in_scope {
                let people: Vec<_> = snap.participants_of_meeting(m.meeting_id).map(|p| p.employee_id).collect();
                for &a in &people {
                    for &b in people.iter().filter(|&&b| b != a) {
                        *shared.entry((a, b)).or_default() += 1;
                    }
                }
            }
            for ((a, _), n) in shared {
                if coupling.keeps(n) {
                    *scores.entry(a).or_default() += n as i64;
                }
            }
        }
        _ => {
            for m in in_scope {
                let length = m.length_minutes();
                for p in snap.participants_of_meeting(m.meeting_id) {
                    let inv = p.invitation_id.and_then(|id| snap.invitation(id));
                    let score = match kind {
                        BoardKind::MostChaired => p.is_organizer as i64,
                        BoardKind::MeetingCountDesc | BoardKind::MeetingCountAsc => 1,
                        BoardKind::MostTentative => match inv.filter(|_| !p.is_organizer) {
                            Some(inv) => snap
                                .response_chain(inv)
                                .filter(|r| r.response_type == ResponseType::Tentative)
                                .count() as i64,
                            None => 0,
                        },
                        BoardKind::MostCancelling => (p.is_organizer && m.cancelled) as i64,
                        BoardKind::MostOptional => inv.is_some_and(|i| !i.requiredness) as i64,
                        BoardKind::MostRequired => inv.is_some_and(|i| i.requiredness) as i64,
                        BoardKind::PreparationTotal => p.preparation_time as i64,
                        BoardKind::FollowupTotal => p.follow_up_time as i64,
                        BoardKind::TimeCostTotal => p.preparation_time as i64 + p.follow_up_time as i64 + length,
                        _ => unreachable!("handled above"),
                    };
                    *scores.entry(p.employee_id).or_default() += score;
                }
            }
        }
    }
    scores
}
