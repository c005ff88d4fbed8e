//! The metric catalog and the engine that evaluates it against a snapshot.

mod board;
mod catalog;
mod employee;
mod error;
mod meeting;
mod pairs;
mod params;
mod result;
mod rooms;

pub use board::{leaderboard, CouplingLimit};
pub use catalog::*;
pub use employee::{
    bucketed_average, chaired_participant_histogram, compare_chaired_attended, delegation_comparison,
    employee_interval_scalar,
};
pub use error::MetricError;
pub use meeting::{breakdown, core_hours_gaps, organizer_rollup, per_meeting_listing, per_meeting_scalar, RESPONSE_CLASSES};
pub use pairs::{employee_pair_stats, gap_minutes, overlap_minutes, pairwise};
pub use params::*;
pub use result::*;
pub use rooms::{is_room_booked, multi_location_meetings, room_availability};

use crate::calstore::{EmployeeId, MeetingId, RoomId, StoreSnapshot};

impl EntityLookup for StoreSnapshot {
    fn has_meeting(&self, id: MeetingId) -> bool {
        self.meeting(id).is_some()
    }

    fn has_employee(&self, id: EmployeeId) -> bool {
        self.employee(id).is_some()
    }

    fn has_room(&self, id: RoomId) -> bool {
        self.room(id).is_some()
    }
}

/// Evaluates catalog entry `id` with `params`.
pub fn evaluate(snap: &StoreSnapshot, id: &str, params: &Params) -> Result<MetricResult, MetricError> {
    let (entry, variant) = resolve(id, params)?;
    check_params(variant, params, snap)?;
    let payload = dispatch(snap, variant.op, params);
    debug_assert_eq!(payload.shape(), variant.shape);
    Ok(MetricResult {
        metric: entry.id.to_string(),
        variant: variant.name.to_string(),
        params: params.echo(variant),
        payload,
    })
}

fn dispatch(snap: &StoreSnapshot, op: Op, p: &Params) -> Payload {
    // check_params has confirmed every required parameter and entity.
    let meeting = || snap.meeting(p.meeting.expect("meeting")).expect("known meeting");
    let employee = || p.employee.expect("employee");
    let interval = || p.interval.expect("interval");
    match op {
        Op::Scalar(k) => per_meeting_scalar(snap, meeting(), k),
        Op::Listing(k) => Payload::Listing(per_meeting_listing(snap, meeting(), k)),
        Op::Rollup(k, agg) => organizer_rollup(snap, employee(), interval(), k, agg),
        Op::Breakdown(k) => Payload::Breakdown(breakdown(snap, meeting(), k)),
        Op::CoreHoursGaps => Payload::Labeled(core_hours_gaps(meeting(), p.effective_core_hours())),
        Op::Pairwise(k) => {
            let other = snap.meeting(p.other_meeting.expect("other_meeting")).expect("known meeting");
            pairwise(meeting(), other, k, p.effective_consecutive_threshold())
        }
        Op::PairStats(k) => {
            let organizer_only = p.paper_exact && k != PairStatsKind::ConsecutivePairs;
            employee_pair_stats(snap, employee(), interval(), k, p.effective_consecutive_threshold(), organizer_only)
        }
        Op::Employee(k) => Payload::Count(employee_interval_scalar(
            snap,
            employee(),
            interval(),
            k,
            p.effective_last_minute_threshold(),
        )),
        Op::BucketedAverage => {
            Payload::Number(bucketed_average(snap, employee(), interval(), p.bucket.expect("bucket")))
        }
        Op::Histogram => Payload::Listing(chaired_participant_histogram(snap, employee(), interval())),
        Op::Compare => Payload::Listing(compare_chaired_attended(
            snap,
            p.employees.as_deref().expect("employees"),
            interval(),
        )),
        Op::Leaderboard(k) => {
            let coupling = match k {
                BoardKind::CouplingDesc if p.paper_exact => CouplingLimit::Above(p.lower_limit.expect("lower_limit")),
                BoardKind::CouplingLower => CouplingLimit::Above(p.lower_limit.expect("lower_limit")),
                BoardKind::CouplingUpper => CouplingLimit::Below(p.upper_limit.expect("upper_limit")),
                _ => CouplingLimit::None,
            };
            Payload::Ranking(leaderboard(snap, interval(), k, coupling, p.limit))
        }
        Op::RoomAvailability => {
            let (booked, free) = room_availability(snap, p.at.expect("at"), p.paper_exact);
            Payload::Rooms { booked, free }
        }
        Op::RoomBooked => {
            Payload::Flag(is_room_booked(snap, p.at.expect("at"), p.room.expect("room"), p.paper_exact))
        }
        Op::Delegation(k) => delegation_comparison(snap, employee(), interval(), k),
        Op::MultiLocation => Payload::Listing(multi_location_meetings(snap, interval())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calstore::{Interval, Timestamp};
    use crate::fixtures::{f1, june_2015};

    fn eval(id: &str, p: Params) -> Payload {
        evaluate(&f1(), id, &p).unwrap_or_else(|e| panic!("{id}: {e}")).payload
    }

    fn m(n: u32) -> MeetingId {
        MeetingId(n)
    }

    fn e(n: u32) -> EmployeeId {
        EmployeeId(n)
    }

    fn at(s: &str) -> Timestamp {
        s.parse().unwrap()
    }

    fn emp_j(n: u32) -> Params {
        Params::new().employee(e(n)).interval(june_2015())
    }

    fn ranks(p: Payload) -> Vec<(u32, i64)> {
        match p {
            Payload::Ranking(r) => r.into_iter().map(|r| (r.employee.0, r.score)).collect(),
            other => panic!("not a ranking: {other:?}"),
        }
    }

    fn values(p: &Payload) -> Vec<(String, Value)> {
        p.entries().unwrap_or_default().iter().map(|e| (e.label.clone(), e.value)).collect()
    }

    #[test]
    fn per_meeting_scalars() {
        assert_eq!(eval("5.10", Params::new().meeting(m(1))), Payload::Duration(60));
        assert_eq!(eval("5.2", Params::new().meeting(m(1))), Payload::Duration(2940));
        assert_eq!(eval("5.12", Params::new().meeting(m(6))), Payload::OptionalDuration(Some(10080)));
        assert_eq!(eval("5.12", Params::new().meeting(m(1))), Payload::OptionalDuration(None));
        assert_eq!(eval("5.11", Params::new().meeting(m(7))), Payload::Count(3));
        assert_eq!(eval("5.50", Params::new().meeting(m(1))), Payload::Duration(300));
        assert_eq!(eval("5.19", Params::new().meeting(m(1))), Payload::Count(1));
        assert_eq!(eval("5.20", Params::new().meeting(m(1))), Payload::Count(0));
        assert_eq!(eval("5.1", Params::new().meeting(m(1))), Payload::Count(1));
        assert_eq!(eval("5.13", Params::new().meeting(m(1))), Payload::Count(3));
        assert_eq!(eval("5.22", Params::new().meeting(m(4))), Payload::Flag(true));
    }

    #[test]
    fn per_meeting_listings() {
        let Payload::Listing(l) = eval("5.1", Params::new().meeting(m(1)).variant("optional_invitees")) else {
            panic!()
        };
        assert_eq!(l.rows.len(), 1);
        assert!(matches!(&l.rows[0].key, RowKey::Employee { name, .. } if name == "Carol"));

        let Payload::Listing(l) = eval("5.4", Params::new().meeting(m(1))) else { panic!() };
        let got: Vec<_> = l.rows.iter().map(|r| r.values[0]).collect();
        assert_eq!(got, vec![Value::Int(60), Value::Int(1500), Value::Absent]);

        let Payload::Listing(l) = eval("5.9", Params::new().meeting(m(2))) else { panic!() };
        assert_eq!(l.rows.len(), 1);
        assert_eq!(l.rows[0].values, vec![Value::Int(0)]);
    }

    #[test]
    fn organizer_rollups() {
        let p = emp_j(1).variant("organizer_average");
        assert_eq!(eval("5.10", p), Payload::Number(Some(50.0)));
        let tally = eval("5.22", emp_j(1));
        assert_eq!(values(&tally), vec![("Held".into(), Value::Int(2)), ("Cancelled".into(), Value::Int(1))]);
        let Payload::Listing(l) = eval("5.10", emp_j(4)) else { panic!() };
        assert!(l.rows.is_empty());
    }

    #[test]
    fn breakdowns() {
        let r = eval("5.18", Params::new().meeting(m(1)));
        assert_eq!(r.get("Accept"), Some(Value::Int(1)));
        assert_eq!(r.get("Decline"), Some(Value::Int(1)));
        assert_eq!(r.get("Tentative"), Some(Value::Int(0)));
        assert_eq!(r.get("Delegate"), Some(Value::Int(0)));
        assert_eq!(r.get("Non-Responding"), Some(Value::Int(1)));

        let l = eval("5.7", Params::new().meeting(m(1)));
        assert_eq!(l.get("Accept"), Some(Value::Real(1.0 / 3.0)));
        assert_eq!(l.get("Tentative"), Some(Value::Real(0.0)));

        let d = eval("5.43", Params::new().meeting(m(5)));
        assert_eq!(d.get("Accept"), Some(Value::Int(1)));
        assert!(d.entries().unwrap().iter().filter(|e| e.label != "Accept").all(|e| e.value == Value::Int(0)));

        let a = eval("5.34", Params::new().meeting(m(1)));
        assert_eq!(a.get("InvitedAndActive"), Some(Value::Int(2)));
        assert_eq!(a.get("InvitedAndInactive"), Some(Value::Int(1)));
        assert_eq!(a.get("NonInvitedButActive"), Some(Value::Int(0)));
    }

    #[test]
    fn core_hours() {
        let ints = |p: Payload| values(&p).into_iter().map(|(_, v)| v.as_int().unwrap()).collect::<Vec<_>>();
        assert_eq!(ints(eval("5.16", Params::new().meeting(m(1)))), vec![0, 360, 60, 300]);
        assert_eq!(ints(eval("5.16", Params::new().meeting(m(5)))), vec![300, 60, 360, 0]);
        let bad = Params::new().meeting(m(6)).core_hours("13:00-13:00".parse().unwrap());
        assert!(matches!(evaluate(&f1(), "5.16", &bad), Err(MetricError::InvalidCoreHours(_))));
    }

    #[test]
    fn pairs_of_meetings() {
        let two = |a, b| Params::new().meeting(m(a)).other_meeting(m(b));
        assert_eq!(eval("5.5", two(1, 2).variant("overlap_minutes")), Payload::Duration(30));
        assert_eq!(eval("5.5", two(1, 2)), Payload::Flag(true));
        assert_eq!(eval("5.5", two(1, 1).variant("overlap_minutes")), Payload::Duration(60));
        assert_eq!(eval("5.17", two(2, 3)), Payload::Duration(5));
        assert_eq!(eval("5.23", two(2, 3)), Payload::Flag(true));
    }

    #[test]
    fn employee_pairs() {
        assert_eq!(eval("5.5", emp_j(1)), Payload::Count(1));
        assert_eq!(eval("5.25", emp_j(1)), Payload::Duration(30));
        let Payload::PairListing(pairs) = eval("5.23", emp_j(1)) else { panic!() };
        let got: Vec<_> = pairs.iter().map(|p| (p.first.0, p.second.0, p.minutes)).collect();
        assert_eq!(got, vec![(1, 2, 0), (2, 3, 5)]);
    }

    #[test]
    fn employee_counts() {
        assert_eq!(eval("5.24", emp_j(4)), Payload::Count(1));
        assert_eq!(eval("5.6", emp_j(1)), Payload::Count(3));
        assert_eq!(eval("5.6", emp_j(1).variant("attended_count")), Payload::Count(2));
        assert_eq!(eval("5.46", emp_j(2)), Payload::Count(1));
        assert_eq!(eval("5.47", emp_j(2)), Payload::Count(1));
        assert_eq!(eval("5.47", emp_j(2).last_minute_threshold(5)), Payload::Count(0));
        assert_eq!(eval("5.41", emp_j(1)), Payload::Count(1));
        assert_eq!(eval("5.42", emp_j(3)), Payload::Count(1));
    }

    #[test]
    fn bucketed_averages() {
        assert_eq!(eval("5.29", emp_j(3).bucket(Bucket::Week)), Payload::Number(Some(1.25)));
        assert_eq!(eval("5.29", emp_j(4).bucket(Bucket::Day)), Payload::Number(Some(1.0)));
        let july: Interval = "2015-07-01..2015-07-31".parse().unwrap();
        let p = Params::new().employee(e(4)).interval(july).bucket(Bucket::Day);
        assert_eq!(eval("5.29", p), Payload::Number(None));
    }

    #[test]
    fn histograms_and_comparisons() {
        let sizes = |p: Payload| match p {
            Payload::Listing(l) => l
                .rows
                .iter()
                .map(|r| match r.key {
                    RowKey::Size(s) => (s, r.values[0].as_int().unwrap()),
                    _ => panic!(),
                })
                .collect::<Vec<_>>(),
            _ => panic!(),
        };
        assert_eq!(sizes(eval("5.28", emp_j(1))), vec![(2, 2), (4, 1)]);
        assert_eq!(sizes(eval("5.28", emp_j(3))), vec![(1, 3)]);
        assert!(sizes(eval("5.28", emp_j(4))).is_empty());

        let cmp = |ids: Vec<u32>| {
            let p = Params::new().employees(ids.into_iter().map(e).collect()).interval(june_2015());
            match eval("5.26", p) {
                Payload::Listing(l) => l
                    .rows
                    .iter()
                    .map(|r| match &r.key {
                        RowKey::Employee { id, .. } => (id.0, r.values[0].as_int().unwrap(), r.values[1].as_int().unwrap()),
                        _ => panic!(),
                    })
                    .collect::<Vec<_>>(),
                _ => panic!(),
            }
        };
        assert_eq!(cmp(vec![1, 2]), vec![(1, 3, 2), (2, 2, 3)]);
        assert_eq!(cmp(vec![4, 3]), vec![(3, 3, 2), (4, 0, 1)]);
        let one = Params::new().employees(vec![e(1)]).interval(june_2015());
        assert!(matches!(evaluate(&f1(), "5.26", &one), Err(MetricError::InvalidParameter { .. })));
    }

    #[test]
    fn leaderboards() {
        let j = || Params::new().interval(june_2015());
        assert_eq!(ranks(eval("5.35", j())), vec![(1, 3), (3, 3), (2, 2)]);
        assert_eq!(ranks(eval("5.40", j()))[0], (4, 1));
        assert_eq!(ranks(eval("5.37", j())), vec![(3, 1)]);
        assert_eq!(ranks(eval("5.39", j())), vec![(1, 1)]);
        assert_eq!(ranks(eval("5.35", j().limit(1))), vec![(1, 3)]);
        assert!(matches!(
            evaluate(&f1(), "5.33", &j()),
            Err(MetricError::MissingParameter { param: ParamKind::UpperLimit, .. })
        ));
    }

    #[test]
    fn rooms() {
        let p = Params::new().at(at("2015-06-03T09:15"));
        assert_eq!(eval("5.30", p), Payload::Rooms { booked: vec![RoomId(1)], free: vec![RoomId(2)] });
        let p = Params::new().at(at("2015-06-03T10:00")).room(RoomId(1));
        assert_eq!(eval("5.30", p), Payload::Flag(true));
        let p = Params::new().at(at("2015-06-04T09:10")).room(RoomId(1));
        assert_eq!(eval("5.30", p), Payload::Flag(false));
        let p = Params::new().at(at("2015-06-04T09:10")).room(RoomId(9));
        assert_eq!(evaluate(&f1(), "5.30", &p).unwrap_err(), MetricError::UnknownRoom(RoomId(9)));
    }

    #[test]
    fn delegations() {
        let pair = |p: Payload| values(&p).into_iter().map(|(_, v)| v).collect::<Vec<_>>();
        assert_eq!(pair(eval("5.55", emp_j(1))), vec![Value::Int(1), Value::Int(0)]);
        assert_eq!(pair(eval("5.55", emp_j(3))), vec![Value::Int(0), Value::Int(1)]);
        assert_eq!(pair(eval("5.45", emp_j(1))), vec![Value::Int(1), Value::Real(1.0 / 8.0)]);
    }

    #[test]
    fn multi_location() {
        let Payload::Listing(l) = eval("5.54", Params::new().interval(june_2015())) else { panic!() };
        assert!(l.rows.is_empty());
    }

    #[test]
    fn errors_and_echo() {
        assert_eq!(
            evaluate(&f1(), "5.99", &Params::new()).unwrap_err(),
            MetricError::UnknownMetric("5.99".into())
        );
        assert_eq!(
            evaluate(&f1(), "5.10", &Params::new().meeting(m(42))).unwrap_err(),
            MetricError::UnknownMeeting(m(42))
        );
        let r = evaluate(&f1(), "5.10", &Params::new().meeting(m(1)).employee(e(2))).unwrap();
        assert_eq!(r.variant, "length");
        assert_eq!(r.params.keys().collect::<Vec<_>>(), vec!["meeting"]);
    }

    #[test]
    fn paper_exact_coupling_needs_lower_limit() {
        let p = Params::new().interval(june_2015()).paper_exact(true);
        assert!(matches!(
            evaluate(&f1(), "5.31", &p),
            Err(MetricError::MissingParameter { param: ParamKind::LowerLimit, .. })
        ));
        assert!(evaluate(&f1(), "5.31", &p.lower_limit(1)).is_ok());
    }
}
