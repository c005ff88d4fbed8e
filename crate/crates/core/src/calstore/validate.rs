use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::records::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// The invariant a row violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    NonPositiveId,
    DuplicateKey,
    DanglingReference,
    StartNotBeforeFinish,
    SeriesRootNotSelfReferencing,
    DuplicateParticipation,
    OrganizerCount,
    OrganizerInvited,
    SharedInvitation,
    DelegationAcrossMeetings,
    CyclicResponseChain,
    SharedResponseChain,
    ResponseChainOrder,
    DuplicateLocationLink,
    EmptyEmail,
    InvitationAfterStart,
    NoInvitedParticipants,
    OrphanInvitation,
    OrphanResponse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub severity: Severity,
    pub table: &'static str,
    pub row: String,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{level}: {} {}: {}", self.table, self.row, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Warning)
    }

    pub fn error_count(&self) -> usize {
        self.errors().count()
    }

    pub fn warning_count(&self) -> usize {
        self.warnings().count()
    }

    pub fn is_clean(&self) -> bool {
        self.error_count() == 0
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for issue in &self.issues {
            writeln!(f, "{issue}")?;
        }
        write!(f, "{} error(s), {} warning(s)", self.error_count(), self.warning_count())
    }
}

struct Collector {
    issues: Vec<Issue>,
}

impl Collector {
    fn push(&mut self, severity: Severity, table: &'static str, row: impl fmt::Display, rule: Rule, message: String) {
        self.issues.push(Issue {
            severity,
            table,
            row: row.to_string(),
            rule,
            message,
        });
    }

    fn error(&mut self, table: &'static str, row: impl fmt::Display, rule: Rule, message: String) {
        self.push(Severity::Error, table, row, rule, message);
    }

    fn warn(&mut self, table: &'static str, row: impl fmt::Display, rule: Rule, message: String) {
        self.push(Severity::Warning, table, row, rule, message);
    }
}

fn unique_keys<R, K>(c: &mut Collector, table: &'static str, rows: &[R], key: impl Fn(&R) -> K) -> HashSet<K>
where
    K: Copy + Eq + std::hash::Hash + fmt::Display + IdValue,
{
    let mut seen = HashSet::new();
    for row in rows {
        let k = key(row);
        if k.raw() == 0 {
            c.error(table, k, Rule::NonPositiveId, format!("identifier {k} is not positive"));
        }
        if !seen.insert(k) {
            c.error(table, k, Rule::DuplicateKey, format!("duplicate primary key {k}"));
        }
    }
    seen
}

trait IdValue {
    fn raw(&self) -> u32;
}

macro_rules! id_value {
    ($($t:ty),*) => { $(impl IdValue for $t { fn raw(&self) -> u32 { self.0 } })* };
}
id_value!(
    MeetingId,
    EmployeeId,
    ParticipantId,
    InvitationId,
    ResponseId,
    InviteeRequestId,
    LocationId,
    RoomId,
    CompanyId,
    CountryId,
    LocationInMeetingId
);

/// Checks every integrity rule of the data model. Never fails; reports.
pub fn validate(d: &Dataset) -> ValidationReport {
    let mut c = Collector { issues: Vec::new() };

    let meetings = unique_keys(&mut c, "meeting", &d.meeting, |r| r.meeting_id);
    let employees = unique_keys(&mut c, "employee", &d.employee, |r| r.employee_id);
    let participants = unique_keys(&mut c, "participant", &d.participant, |r| r.participant_id);
    let invitations = unique_keys(&mut c, "invitation", &d.invitation, |r| r.invitation_id);
    let responses = unique_keys(&mut c, "invitationresponse", &d.invitationresponse, |r| r.invitation_response_id);
    unique_keys(&mut c, "inviteerequest", &d.inviteerequest, |r| r.invitee_request_id);
    let locations = unique_keys(&mut c, "location", &d.location, |r| r.location_id);
    let rooms = unique_keys(&mut c, "room", &d.room, |r| r.room_id);
    let companies = unique_keys(&mut c, "company", &d.company, |r| r.company_id);
    let countries = unique_keys(&mut c, "country", &d.country, |r| r.country_id);
    unique_keys(&mut c, "locationinmeeting", &d.locationinmeeting, |r| r.location_in_meeting_id);

    let meeting_by_id: HashMap<MeetingId, &MeetingRecord> = d.meeting.iter().map(|m| (m.meeting_id, m)).collect();

    for m in &d.meeting {
        let id = m.meeting_id;
        if m.start_time >= m.finish_time {
            c.error(
                "meeting",
                id,
                Rule::StartNotBeforeFinish,
                format!("meeting {id} starts at {} but finishes at {}", m.start_time, m.finish_time),
            );
        }
        match meeting_by_id.get(&m.repetition_from) {
            None => c.error(
                "meeting",
                id,
                Rule::DanglingReference,
                format!("RepetitionFrom {} does not exist", m.repetition_from),
            ),
            Some(root) if root.repetition_from != root.meeting_id => c.error(
                "meeting",
                id,
                Rule::SeriesRootNotSelfReferencing,
                format!("series root {} does not point to itself", root.meeting_id),
            ),
            Some(_) => {}
        }
        if m.invitation_time > m.start_time {
            c.warn(
                "meeting",
                id,
                Rule::InvitationAfterStart,
                format!("invitation sent after meeting start ({} > {})", m.invitation_time, m.start_time),
            );
        }
    }

    for e in &d.employee {
        if e.email.trim().is_empty() {
            c.error("employee", e.employee_id, Rule::EmptyEmail, "email is empty".to_string());
        }
    }

    // Participants.
    let mut pairs = HashSet::new();
    let mut organizers: BTreeMap<MeetingId, usize> = d.meeting.iter().map(|m| (m.meeting_id, 0)).collect();
    let mut invitation_owner: HashMap<InvitationId, &ParticipantRecord> = HashMap::new();
    for p in &d.participant {
        let id = p.participant_id;
        if !employees.contains(&p.employee_id) {
            c.error("participant", id, Rule::DanglingReference, format!("EmployeeID {} does not exist", p.employee_id));
        }
        if !meetings.contains(&p.meeting_id) {
            c.error("participant", id, Rule::DanglingReference, format!("MeetingID {} does not exist", p.meeting_id));
        }
        if !pairs.insert((p.employee_id, p.meeting_id)) {
            c.error(
                "participant",
                id,
                Rule::DuplicateParticipation,
                format!("employee {} appears more than once in meeting {}", p.employee_id, p.meeting_id),
            );
        }
        if p.is_organizer {
            if let Some(n) = organizers.get_mut(&p.meeting_id) {
                *n += 1;
            }
            if p.invitation_id.is_some() {
                c.error("participant", id, Rule::OrganizerInvited, "the organizer holds an invitation".to_string());
            }
        }
        if let Some(inv) = p.invitation_id {
            if !invitations.contains(&inv) {
                c.error("participant", id, Rule::DanglingReference, format!("InvitationID {inv} does not exist"));
            } else if let Some(other) = invitation_owner.insert(inv, p) {
                c.error(
                    "participant",
                    id,
                    Rule::SharedInvitation,
                    format!("invitation {inv} is already held by participant {}", other.participant_id),
                );
            }
        }
    }
    for (meeting, n) in &organizers {
        if *n != 1 {
            c.error("meeting", meeting, Rule::OrganizerCount, format!("meeting {meeting} has {n} organizers"));
        }
    }
    let mut has_invitee: BTreeSet<MeetingId> = BTreeSet::new();
    let mut has_attendee_row: BTreeSet<MeetingId> = BTreeSet::new();
    for p in d.participant.iter().filter(|p| !p.is_organizer) {
        has_attendee_row.insert(p.meeting_id);
        if p.invitation_id.is_some() {
            has_invitee.insert(p.meeting_id);
        }
    }
    for m in has_attendee_row.difference(&has_invitee) {
        c.warn(
            "meeting",
            m,
            Rule::NoInvitedParticipants,
            format!("meeting {m} has participants but zero invited participants"),
        );
    }

    // Invitations.
    let participant_meeting: HashMap<ParticipantId, MeetingId> =
        d.participant.iter().map(|p| (p.participant_id, p.meeting_id)).collect();
    for inv in &d.invitation {
        let id = inv.invitation_id;
        let own_meeting = invitation_owner.get(&id).map(|p| p.meeting_id);
        if own_meeting.is_none() {
            c.warn("invitation", id, Rule::OrphanInvitation, format!("invitation {id} is not held by any participant"));
        }
        for (field, link) in [("DelegatedTo", inv.delegated_to), ("DelegatedFrom", inv.delegated_from)] {
            let Some(target) = link else { continue };
            if !participants.contains(&target) {
                c.error("invitation", id, Rule::DanglingReference, format!("{field} {target} does not exist"));
            } else if let (Some(own), Some(other)) = (own_meeting, participant_meeting.get(&target)) {
                if own != *other {
                    c.error(
                        "invitation",
                        id,
                        Rule::DelegationAcrossMeetings,
                        format!("{field} {target} belongs to meeting {other}, not {own}"),
                    );
                }
            }
        }
        if let Some(head) = inv.invitation_response_id {
            if !responses.contains(&head) {
                c.error("invitation", id, Rule::DanglingReference, format!("InvitationResponseID {head} does not exist"));
            }
        }
    }

    check_response_chains(&mut c, d, &responses);

    for q in &d.inviteerequest {
        if !invitations.contains(&q.invitation_id) {
            c.error(
                "inviteerequest",
                q.invitee_request_id,
                Rule::DanglingReference,
                format!("InvitationID {} does not exist", q.invitation_id),
            );
        }
    }

    for l in &d.location {
        if let Some(room) = l.room_id {
            if !rooms.contains(&room) {
                c.error("location", l.location_id, Rule::DanglingReference, format!("RoomID {room} does not exist"));
            }
        }
        if !companies.contains(&l.company_id) {
            c.error(
                "location",
                l.location_id,
                Rule::DanglingReference,
                format!("CompanyID {} does not exist", l.company_id),
            );
        }
    }
    for co in &d.company {
        if !countries.contains(&co.country_id) {
            c.error(
                "company",
                co.company_id,
                Rule::DanglingReference,
                format!("CountryID {} does not exist", co.country_id),
            );
        }
    }
    let mut links = HashSet::new();
    for lm in &d.locationinmeeting {
        let id = lm.location_in_meeting_id;
        if !meetings.contains(&lm.meeting_id) {
            c.error("locationinmeeting", id, Rule::DanglingReference, format!("MeetingID {} does not exist", lm.meeting_id));
        }
        if !locations.contains(&lm.location_id) {
            c.error(
                "locationinmeeting",
                id,
                Rule::DanglingReference,
                format!("LocationID {} does not exist", lm.location_id),
            );
        }
        if !links.insert((lm.meeting_id, lm.location_id)) {
            c.error(
                "locationinmeeting",
                id,
                Rule::DuplicateLocationLink,
                format!("location {} linked to meeting {} more than once", lm.location_id, lm.meeting_id),
            );
        }
    }

    ValidationReport { issues: c.issues }
}

fn check_response_chains(c: &mut Collector, d: &Dataset, responses: &HashSet<ResponseId>) {
    let by_id: HashMap<ResponseId, &ResponseRecord> =
        d.invitationresponse.iter().map(|r| (r.invitation_response_id, r)).collect();

    for r in &d.invitationresponse {
        if let Some(prev) = r.previous_response_id {
            if !responses.contains(&prev) {
                c.error(
                    "invitationresponse",
                    r.invitation_response_id,
                    Rule::DanglingReference,
                    format!("PreviousResponseID {prev} does not exist"),
                );
            }
        }
    }

    // Cycles, reported once per cycle under its smallest member.
    let mut cyclic: HashSet<ResponseId> = HashSet::new();
    let mut reported: BTreeSet<ResponseId> = BTreeSet::new();
    for r in &d.invitationresponse {
        let mut path: Vec<ResponseId> = Vec::new();
        let mut on_path: HashSet<ResponseId> = HashSet::new();
        let mut cur = Some(r.invitation_response_id);
        while let Some(id) = cur {
            if cyclic.contains(&id) {
                break;
            }
            if !on_path.insert(id) {
                let start = path.iter().position(|x| *x == id).unwrap();
                let members = &path[start..];
                let root = *members.iter().min().unwrap();
                cyclic.extend(members.iter().copied());
                if reported.insert(root) {
                    c.error(
                        "invitationresponse",
                        root,
                        Rule::CyclicResponseChain,
                        format!("cyclic response chain through {} response(s)", members.len()),
                    );
                }
                break;
            }
            path.push(id);
            cur = by_id.get(&id).and_then(|x| x.previous_response_id);
        }
    }

    // Each chain belongs to one invitation and is ordered newest to oldest.
    let mut owner: HashMap<ResponseId, InvitationId> = HashMap::new();
    for inv in &d.invitation {
        let Some(head) = inv.invitation_response_id else { continue };
        let mut cur = Some(head);
        let mut newer: Option<&ResponseRecord> = None;
        while let Some(id) = cur {
            if cyclic.contains(&id) {
                break;
            }
            let Some(resp) = by_id.get(&id) else { break };
            if let Some(prev_owner) = owner.insert(id, inv.invitation_id) {
                if prev_owner != inv.invitation_id {
                    c.error(
                        "invitation",
                        inv.invitation_id,
                        Rule::SharedResponseChain,
                        format!("response {id} already belongs to the chain of invitation {prev_owner}"),
                    );
                }
                break;
            }
            if let Some(n) = newer {
                if resp.date_time > n.date_time {
                    c.error(
                        "invitationresponse",
                        n.invitation_response_id,
                        Rule::ResponseChainOrder,
                        format!("response {} is older than its previous response {id}", n.invitation_response_id),
                    );
                }
            }
            newer = Some(resp);
            cur = resp.previous_response_id;
        }
    }
    for r in &d.invitationresponse {
        let id = r.invitation_response_id;
        if !owner.contains_key(&id) && !cyclic.contains(&id) {
            c.warn(
                "invitationresponse",
                id,
                Rule::OrphanResponse,
                format!("response {id} is not reachable from any invitation"),
            );
        }
    }
}
