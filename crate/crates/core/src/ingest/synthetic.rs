//! Seeded synthetic calendars. The same config always yields the same dataset,
//! and every generated dataset loads without integrity errors.

use chrono::{Duration, NaiveDate, NaiveTime};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::calstore::*;

/// Probability of each final response state for an invitee.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResponseProbabilities {
    pub accept: f64,
    pub decline: f64,
    pub tentative: f64,
    pub none: f64,
}

impl Default for ResponseProbabilities {
    fn default() -> Self {
        ResponseProbabilities { accept: 0.6, decline: 0.15, tentative: 0.1, none: 0.15 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    pub employee_count: usize,
    pub day_span: u32,
    pub meetings_per_day_mean: f64,
    pub invitees_per_meeting_mean: f64,
    pub optional_ratio: f64,
    pub response_probabilities: ResponseProbabilities,
    /// Share of generated meetings that start a recurring series.
    pub recurrence_ratio: f64,
    /// Per-invitee chance of delegating to someone not yet in the meeting.
    pub delegation_ratio: f64,
    pub room_count: usize,
    pub start_date: NaiveDate,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            employee_count: 10,
            day_span: 20,
            meetings_per_day_mean: 3.0,
            invitees_per_meeting_mean: 3.0,
            optional_ratio: 0.2,
            response_probabilities: ResponseProbabilities::default(),
            recurrence_ratio: 0.1,
            delegation_ratio: 0.05,
            room_count: 4,
            start_date: NaiveDate::from_ymd_opt(2015, 6, 1).expect("valid date"),
            seed: 0,
        }
    }
}

impl SyntheticConfig {
    pub fn new(employee_count: usize, day_span: u32, meetings_per_day_mean: f64, seed: u64) -> Self {
        SyntheticConfig { employee_count, day_span, meetings_per_day_mean, seed, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid synthetic config: {field} {reason}")]
pub struct ConfigError {
    pub field: &'static str,
    pub reason: String,
}

fn check(cfg: &SyntheticConfig) -> Result<(), ConfigError> {
    let bad = |field, reason: &str| Err(ConfigError { field, reason: reason.to_string() });
    let mean = |field, v: f64| {
        if !v.is_finite() || v < 0.0 {
            bad(field, "must be a finite non-negative number")
        } else {
            Ok(())
        }
    };
    let ratio = |field, v: f64| {
        if !(0.0..=1.0).contains(&v) {
            bad(field, "must lie in [0, 1]")
        } else {
            Ok(())
        }
    };
    mean("meetings_per_day_mean", cfg.meetings_per_day_mean)?;
    mean("invitees_per_meeting_mean", cfg.invitees_per_meeting_mean)?;
    ratio("optional_ratio", cfg.optional_ratio)?;
    ratio("recurrence_ratio", cfg.recurrence_ratio)?;
    ratio("delegation_ratio", cfg.delegation_ratio)?;
    let p = cfg.response_probabilities;
    for (field, v) in [
        ("response_probabilities.accept", p.accept),
        ("response_probabilities.decline", p.decline),
        ("response_probabilities.tentative", p.tentative),
        ("response_probabilities.none", p.none),
    ] {
        ratio(field, v)?;
    }
    if ((p.accept + p.decline + p.tentative + p.none) - 1.0).abs() > 1e-6 {
        return bad("response_probabilities", "must sum to 1");
    }
    if cfg.employee_count == 0 && cfg.meetings_per_day_mean > 0.0 && cfg.day_span > 0 {
        return bad("employee_count", "must be positive when meetings are generated");
    }
    if cfg.meetings_per_day_mean > 1000.0 {
        return bad("meetings_per_day_mean", "must not exceed 1000");
    }
    Ok(())
}

const LENGTHS: [i64; 4] = [30, 60, 90, 120];
const CANCEL_RATE: f64 = 0.08;
const REVISED_RESPONSE_RATE: f64 = 0.15;
const REQUEST_RATE: f64 = 0.1;
const UNINVITED_RATE: f64 = 0.05;

fn poisson(rng: &mut ChaCha8Rng, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as usize
}

/// Uniform timestamp in `[a, b]` at minute resolution.
fn between(rng: &mut ChaCha8Rng, a: Timestamp, b: Timestamp) -> Timestamp {
    let span = b.minutes_since(a).max(0);
    a.plus_minutes(rng.random_range(0..=span))
}

struct Gen {
    rng: ChaCha8Rng,
    d: Dataset,
    cfg: SyntheticConfig,
}

impl Gen {
    fn next<T>(v: &[T]) -> u32 {
        v.len() as u32 + 1
    }

    fn draw_response(&mut self) -> Option<ResponseType> {
        let p = self.cfg.response_probabilities;
        let x: f64 = self.rng.random();
        if x < p.accept {
            Some(ResponseType::Accept)
        } else if x < p.accept + p.decline {
            Some(ResponseType::Decline)
        } else if x < p.accept + p.decline + p.tentative {
            Some(ResponseType::Tentative)
        } else if p.none > 0.0 {
            None
        } else {
            Some(ResponseType::Accept)
        }
    }

    /// Response chain ending in `last`, possibly preceded by an older answer.
    fn chain(&mut self, last: ResponseType, from: Timestamp, to: Timestamp) -> ResponseId {
        let mut previous = None;
        let mut t = between(&mut self.rng, from, to);
        if self.rng.random_bool(REVISED_RESPONSE_RATE) {
            let earlier = between(&mut self.rng, from, t);
            let kind = [ResponseType::Accept, ResponseType::Tentative, ResponseType::Decline][self.rng.random_range(0..3)];
            let id = ResponseId(Self::next(&self.d.invitationresponse));
            self.d.invitationresponse.push(ResponseRecord {
                invitation_response_id: id,
                date_time: earlier,
                response_type: kind,
                previous_response_id: None,
            });
            previous = Some(id);
            t = between(&mut self.rng, earlier, to);
        }
        let id = ResponseId(Self::next(&self.d.invitationresponse));
        self.d.invitationresponse.push(ResponseRecord {
            invitation_response_id: id,
            date_time: t,
            response_type: last,
            previous_response_id: previous,
        });
        id
    }

    fn participant(&mut self, meeting: MeetingId, employee: EmployeeId, invitation: Option<InvitationId>, attends: bool) -> ParticipantId {
        let id = ParticipantId(Self::next(&self.d.participant));
        let minutes = |rng: &mut ChaCha8Rng| 5 * rng.random_range(0..=12u32);
        let preparation_time = minutes(&mut self.rng);
        let follow_up_time = minutes(&mut self.rng);
        let modification_number = self.rng.random_range(0..=3);
        self.d.participant.push(ParticipantRecord {
            participant_id: id,
            employee_id: employee,
            meeting_id: meeting,
            is_organizer: false,
            invitation_id: invitation,
            participate_on_meeting: attends,
            preparation_time,
            follow_up_time,
            modification_number,
        });
        id
    }

    fn invitation(&mut self, required: bool) -> InvitationId {
        let id = InvitationId(Self::next(&self.d.invitation));
        self.d.invitation.push(InvitationRecord {
            invitation_id: id,
            requiredness: required,
            delegated_to: None,
            delegated_from: None,
            invitation_response_id: None,
        });
        id
    }

    fn inv_mut(&mut self, id: InvitationId) -> &mut InvitationRecord {
        &mut self.d.invitation[id.0 as usize - 1]
    }

    fn requests(&mut self, invitation: InvitationId, from: Timestamp, to: Timestamp) {
        for kind in [RequestType::Replan, RequestType::Info] {
            if self.rng.random_bool(REQUEST_RATE) {
                let id = InviteeRequestId(Self::next(&self.d.inviteerequest));
                let date_time = between(&mut self.rng, from, to);
                self.d.inviteerequest.push(InviteeRequestRecord { invitee_request_id: id, date_time, invitation_id: invitation, request_type: kind });
            }
        }
    }

    /// One invitee row, with its response chain, requests and delegation.
    fn invitee(&mut self, m: &MeetingRecord, employee: EmployeeId, required: bool, spare: &mut Vec<EmployeeId>) {
        let (inv_t, start) = (m.invitation_time, m.start_time);
        let iid = self.invitation(required);
        self.requests(iid, inv_t, start);
        let delegate = !spare.is_empty() && self.rng.random_bool(self.cfg.delegation_ratio);
        let response = if delegate { Some(ResponseType::Delegate) } else { self.draw_response() };
        let attends = match response {
            Some(ResponseType::Accept) => self.rng.random_bool(0.9),
            Some(ResponseType::Tentative) => self.rng.random_bool(0.5),
            Some(ResponseType::Decline | ResponseType::Delegate) => false,
            None => self.rng.random_bool(0.3),
        };
        let pid = self.participant(m.meeting_id, employee, Some(iid), attends);
        if let Some(r) = response {
            let head = self.chain(r, inv_t, start);
            self.inv_mut(iid).invitation_response_id = Some(head);
        }
        if delegate {
            let who = spare.swap_remove(self.rng.random_range(0..spare.len()));
            let did = self.invitation(required);
            self.inv_mut(did).delegated_from = Some(pid);
            let r = self.draw_response();
            let attends = r == Some(ResponseType::Accept);
            let dpid = self.participant(m.meeting_id, who, Some(did), attends);
            if let Some(r) = r {
                let head = self.chain(r, inv_t, start);
                self.inv_mut(did).invitation_response_id = Some(head);
            }
            self.inv_mut(iid).delegated_to = Some(dpid);
        }
    }

    fn meeting(&mut self, root: Option<MeetingId>, start: Timestamp, length: i64, organizer: EmployeeId, roster: &[(EmployeeId, bool)]) -> MeetingId {
        let id = MeetingId(Self::next(&self.d.meeting));
        let lead = 15 * self.rng.random_range(0..=672i64);
        let m = MeetingRecord {
            meeting_id: id,
            invitation_time: start.plus_minutes(-lead),
            start_time: start,
            finish_time: start.plus_minutes(length),
            room_changed_number: self.rng.random_range(0..=2),
            cancelled: self.rng.random_bool(CANCEL_RATE),
            repetition_from: root.unwrap_or(id),
            number_of_rescheduling: self.rng.random_range(0..=2),
        };
        self.d.meeting.push(m.clone());

        let pid = ParticipantId(Self::next(&self.d.participant));
        self.participant(id, organizer, None, true);
        self.d.participant[pid.0 as usize - 1].is_organizer = true;

        let mut spare: Vec<EmployeeId> = (1..=self.cfg.employee_count as u32)
            .map(EmployeeId)
            .filter(|e| *e != organizer && !roster.iter().any(|(r, _)| r == e))
            .collect();
        for &(e, required) in roster {
            self.invitee(&m, e, required, &mut spare);
        }
        if !spare.is_empty() && self.rng.random_bool(UNINVITED_RATE) {
            let who = spare.swap_remove(self.rng.random_range(0..spare.len()));
            self.participant(id, who, None, true);
        }
        self.link_locations(id);
        id
    }

    fn link_locations(&mut self, meeting: MeetingId) {
        let n = self.d.location.len();
        let x: f64 = self.rng.random();
        let count = if x < 0.1 { 0 } else if x < 0.9 { 1 } else { 2 };
        for i in sample(&mut self.rng, n, count.min(n)) {
            let id = LocationInMeetingId(Self::next(&self.d.locationinmeeting));
            self.d.locationinmeeting.push(LocationInMeeting { location_in_meeting_id: id, meeting_id: meeting, location_id: LocationId(i as u32 + 1) });
        }
    }
}

/// Generates a dataset from `cfg`.
pub fn generate_synthetic(cfg: &SyntheticConfig) -> Result<Dataset, ConfigError> {
    check(cfg)?;
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(cfg.seed), d: Dataset::default(), cfg: cfg.clone() };

    for i in 1..=cfg.employee_count as u32 {
        g.d.employee.push(EmployeeRecord { employee_id: EmployeeId(i), name: format!("Employee {i}"), email: format!("e{i}@example.com") });
    }
    g.d.country.push(CountryRecord { country_id: CountryId(1), name: "Sweden".into() });
    g.d.company.push(CompanyRecord { company_id: CompanyId(1), name: "Example AB".into(), country_id: CountryId(1) });
    for i in 1..=cfg.room_count as u32 {
        g.d.room.push(RoomRecord { room_id: RoomId(i), name: format!("Room {i}") });
        g.d.location.push(LocationRecord { location_id: LocationId(i), room_id: Some(RoomId(i)), label: format!("Floor {}", i.div_ceil(2)), company_id: CompanyId(1) });
    }
    let offsite = LocationId(cfg.room_count as u32 + 1);
    g.d.location.push(LocationRecord { location_id: offsite, room_id: None, label: "Offsite".into(), company_id: CompanyId(1) });

    for day in 0..cfg.day_span as i64 {
        let date = cfg.start_date + Duration::days(day);
        for _ in 0..poisson(&mut g.rng, cfg.meetings_per_day_mean) {
            // Business-hours grid: 08:00 to 16:45 in quarter hours.
            let slot = g.rng.random_range(0..36u32);
            let time = NaiveTime::from_hms_opt(8 + slot / 4, 15 * (slot % 4), 0).expect("valid time");
            let start = Timestamp::new(date.and_time(time));
            let length = LENGTHS[g.rng.random_range(0..LENGTHS.len())];
            let organizer = EmployeeId(g.rng.random_range(1..=cfg.employee_count as u32));

            let invitees = poisson(&mut g.rng, cfg.invitees_per_meeting_mean).min(cfg.employee_count - 1);
            let others: Vec<EmployeeId> = (1..=cfg.employee_count as u32).map(EmployeeId).filter(|&e| e != organizer).collect();
            let roster: Vec<(EmployeeId, bool)> = sample(&mut g.rng, others.len(), invitees)
                .into_iter()
                .map(|i| (others[i], !g.rng.random_bool(cfg.optional_ratio)))
                .collect();

            let root = g.meeting(None, start, length, organizer, &roster);
            if g.rng.random_bool(cfg.recurrence_ratio) {
                let period = if g.rng.random_bool(0.3) { 1 } else { 7 };
                for k in 1..g.rng.random_range(2..=4i64) {
                    g.meeting(Some(root), start.plus_days(k * period), length, organizer, &roster);
                }
            }
        }
    }
    Ok(g.d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rate_yields_no_meetings() {
        let cfg = SyntheticConfig { meetings_per_day_mean: 0.0, ..SyntheticConfig::new(5, 10, 0.0, 1) };
        let d = generate_synthetic(&cfg).unwrap();
        assert!(d.meeting.is_empty());
        assert_eq!(d.employee.len(), 5);
    }

    #[test]
    fn same_seed_same_dataset() {
        let cfg = SyntheticConfig::new(12, 15, 4.0, 7);
        assert_eq!(generate_synthetic(&cfg).unwrap(), generate_synthetic(&cfg).unwrap());
        let other = SyntheticConfig { seed: 8, ..cfg };
        assert_ne!(generate_synthetic(&SyntheticConfig::new(12, 15, 4.0, 7)).unwrap(), generate_synthetic(&other).unwrap());
    }

    #[test]
    fn reference_config_size() {
        let d = generate_synthetic(&SyntheticConfig::new(10, 20, 3.0, 42)).unwrap();
        assert!((20..=100).contains(&d.meeting.len()), "{}", d.meeting.len());
        assert!(d.meeting.iter().all(|m| LENGTHS.contains(&m.length_minutes())));
    }

    #[test]
    fn output_always_validates() {
        for seed in 0..40 {
            let cfg = SyntheticConfig {
                delegation_ratio: 0.3,
                recurrence_ratio: 0.3,
                ..SyntheticConfig::new(2 + seed as usize % 9, 10, 5.0, seed)
            };
            let d = generate_synthetic(&cfg).unwrap();
            let report = validate(&d);
            assert!(report.is_clean(), "seed {seed}: {report}");
            assert!(load_dataset(d).is_ok());
        }
    }

    #[test]
    fn rejects_bad_config() {
        let bad = SyntheticConfig { optional_ratio: 1.5, ..Default::default() };
        assert_eq!(generate_synthetic(&bad).unwrap_err().field, "optional_ratio");
        let probs = ResponseProbabilities { accept: 0.9, ..Default::default() };
        let bad = SyntheticConfig { response_probabilities: probs, ..Default::default() };
        assert!(generate_synthetic(&bad).is_err());
        let bad = SyntheticConfig { employee_count: 0, ..Default::default() };
        assert!(generate_synthetic(&bad).is_err());
    }
}
