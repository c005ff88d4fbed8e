use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::records::*;
use super::validate::{validate, Issue, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct IntegrityError {
    pub errors: Vec<Issue>,
}

impl fmt::Display for IntegrityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dataset failed integrity validation with {} error(s)", self.errors.len())?;
        for e in &self.errors {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

/// Lookup structures derived from the tables at load time.
#[derive(Debug, Clone, Default)]
struct Indexes {
    meeting: HashMap<MeetingId, usize>,
    employee: HashMap<EmployeeId, usize>,
    participant: HashMap<ParticipantId, usize>,
    invitation: HashMap<InvitationId, usize>,
    response: HashMap<ResponseId, usize>,
    room: HashMap<RoomId, usize>,
    location: HashMap<LocationId, usize>,
    participants_by_meeting: HashMap<MeetingId, Vec<usize>>,
    participants_by_employee: HashMap<EmployeeId, Vec<usize>>,
    organizer_by_meeting: HashMap<MeetingId, usize>,
    requests_by_invitation: HashMap<InvitationId, Vec<usize>>,
    locations_by_meeting: HashMap<MeetingId, Vec<LocationId>>,
    series: HashMap<MeetingId, Vec<usize>>,
}

/// Immutable, validated view over a dataset; the sole input of every metric.
///
/// Equality compares the tables only. Tables are sorted by primary key at
/// load, so two snapshots built from the same rows in any order are equal.
#[derive(Debug, Clone)]
pub struct StoreSnapshot {
    tables: Dataset,
    warnings: ValidationReport,
    idx: Indexes,
}

impl PartialEq for StoreSnapshot {
    fn eq(&self, other: &Self) -> bool {
        self.tables == other.tables
    }
}

impl Eq for StoreSnapshot {}

/// Builds a snapshot, rejecting any dataset with integrity errors.
pub fn load_dataset(mut records: Dataset) -> Result<StoreSnapshot, IntegrityError> {
    records.sort_by_key();
    let report = validate(&records);
    if !report.is_clean() {
        return Err(IntegrityError {
            errors: report.errors().cloned().collect(),
        });
    }
    let idx = build_indexes(&records);
    Ok(StoreSnapshot {
        tables: records,
        warnings: report,
        idx,
    })
}

fn build_indexes(d: &Dataset) -> Indexes {
    let mut idx = Indexes::default();
    for (i, m) in d.meeting.iter().enumerate() {
        idx.meeting.insert(m.meeting_id, i);
        idx.series.entry(m.repetition_from).or_default().push(i);
    }
    for (i, e) in d.employee.iter().enumerate() {
        idx.employee.insert(e.employee_id, i);
    }
    for (i, p) in d.participant.iter().enumerate() {
        idx.participant.insert(p.participant_id, i);
        idx.participants_by_meeting.entry(p.meeting_id).or_default().push(i);
        idx.participants_by_employee.entry(p.employee_id).or_default().push(i);
        if p.is_organizer {
            idx.organizer_by_meeting.insert(p.meeting_id, i);
        }
    }
    for (i, inv) in d.invitation.iter().enumerate() {
        idx.invitation.insert(inv.invitation_id, i);
    }
    for (i, r) in d.invitationresponse.iter().enumerate() {
        idx.response.insert(r.invitation_response_id, i);
    }
    for (i, q) in d.inviteerequest.iter().enumerate() {
        idx.requests_by_invitation.entry(q.invitation_id).or_default().push(i);
    }
    for (i, r) in d.room.iter().enumerate() {
        idx.room.insert(r.room_id, i);
    }
    for (i, l) in d.location.iter().enumerate() {
        idx.location.insert(l.location_id, i);
    }
    for lm in &d.locationinmeeting {
        idx.locations_by_meeting.entry(lm.meeting_id).or_default().push(lm.location_id);
    }
    idx
}

impl StoreSnapshot {
    pub fn empty() -> Self {
        load_dataset(Dataset::default()).expect("empty dataset is valid")
    }

    pub fn tables(&self) -> &Dataset {
        &self.tables
    }

    pub fn into_tables(self) -> Dataset {
        self.tables
    }

    /// Re-runs validation over the frozen tables.
    pub fn validate(&self) -> ValidationReport {
        validate(&self.tables)
    }

    /// Warnings collected when the snapshot was loaded.
    pub fn load_warnings(&self) -> &ValidationReport {
        &self.warnings
    }

    pub fn meetings(&self) -> &[MeetingRecord] {
        &self.tables.meeting
    }

    pub fn employees(&self) -> &[EmployeeRecord] {
        &self.tables.employee
    }

    pub fn participants(&self) -> &[ParticipantRecord] {
        &self.tables.participant
    }

    pub fn invitations(&self) -> &[InvitationRecord] {
        &self.tables.invitation
    }

    pub fn responses(&self) -> &[ResponseRecord] {
        &self.tables.invitationresponse
    }

    pub fn requests(&self) -> &[InviteeRequestRecord] {
        &self.tables.inviteerequest
    }

    pub fn rooms(&self) -> &[RoomRecord] {
        &self.tables.room
    }

    pub fn locations(&self) -> &[LocationRecord] {
        &self.tables.location
    }

    pub fn location_links(&self) -> &[LocationInMeeting] {
        &self.tables.locationinmeeting
    }

    pub fn meeting(&self, id: MeetingId) -> Option<&MeetingRecord> {
        self.idx.meeting.get(&id).map(|&i| &self.tables.meeting[i])
    }

    pub fn employee(&self, id: EmployeeId) -> Option<&EmployeeRecord> {
        self.idx.employee.get(&id).map(|&i| &self.tables.employee[i])
    }

    pub fn participant(&self, id: ParticipantId) -> Option<&ParticipantRecord> {
        self.idx.participant.get(&id).map(|&i| &self.tables.participant[i])
    }

    pub fn invitation(&self, id: InvitationId) -> Option<&InvitationRecord> {
        self.idx.invitation.get(&id).map(|&i| &self.tables.invitation[i])
    }

    pub fn response(&self, id: ResponseId) -> Option<&ResponseRecord> {
        self.idx.response.get(&id).map(|&i| &self.tables.invitationresponse[i])
    }

    pub fn room(&self, id: RoomId) -> Option<&RoomRecord> {
        self.idx.room.get(&id).map(|&i| &self.tables.room[i])
    }

    pub fn location(&self, id: LocationId) -> Option<&LocationRecord> {
        self.idx.location.get(&id).map(|&i| &self.tables.location[i])
    }

    /// Participant rows of a meeting, in participant-id order.
    pub fn participants_of_meeting(&self, id: MeetingId) -> impl Iterator<Item = &ParticipantRecord> {
        self.idx
            .participants_by_meeting
            .get(&id)
            .into_iter()
            .flatten()
            .map(|&i| &self.tables.participant[i])
    }

    /// Participant rows of an employee, in participant-id order.
    pub fn participations_of(&self, id: EmployeeId) -> impl Iterator<Item = &ParticipantRecord> {
        self.idx
            .participants_by_employee
            .get(&id)
            .into_iter()
            .flatten()
            .map(|&i| &self.tables.participant[i])
    }

    pub fn organizer_of(&self, id: MeetingId) -> Option<&ParticipantRecord> {
        self.idx.organizer_by_meeting.get(&id).map(|&i| &self.tables.participant[i])
    }

    pub fn requests_of(&self, id: InvitationId) -> impl Iterator<Item = &InviteeRequestRecord> {
        self.idx
            .requests_by_invitation
            .get(&id)
            .into_iter()
            .flatten()
            .map(|&i| &self.tables.inviteerequest[i])
    }

    pub fn locations_of(&self, id: MeetingId) -> &[LocationId] {
        self.idx.locations_by_meeting.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Occurrences sharing `root` as their series root, in meeting-id order.
    pub fn series(&self, root: MeetingId) -> impl Iterator<Item = &MeetingRecord> {
        self.idx.series.get(&root).into_iter().flatten().map(|&i| &self.tables.meeting[i])
    }

    /// Head response of an invitation, then its predecessors, newest first.
    pub fn response_chain(&self, invitation: &InvitationRecord) -> ResponseChain<'_> {
        ResponseChain {
            snapshot: self,
            next: invitation.invitation_response_id,
        }
    }

    pub fn head_response(&self, invitation: &InvitationRecord) -> Option<&ResponseRecord> {
        invitation.invitation_response_id.and_then(|id| self.response(id))
    }

    /// Summary counts per table, in a fixed order.
    pub fn table_counts(&self) -> BTreeMap<&'static str, usize> {
        let t = &self.tables;
        BTreeMap::from([
            ("company", t.company.len()),
            ("country", t.country.len()),
            ("employee", t.employee.len()),
            ("invitation", t.invitation.len()),
            ("invitationresponse", t.invitationresponse.len()),
            ("inviteerequest", t.inviteerequest.len()),
            ("location", t.location.len()),
            ("locationinmeeting", t.locationinmeeting.len()),
            ("meeting", t.meeting.len()),
            ("participant", t.participant.len()),
            ("room", t.room.len()),
        ])
    }
}

/// Walks a response chain from newest to oldest. Chains in a snapshot are
/// validated acyclic, so the walk always terminates.
pub struct ResponseChain<'a> {
    snapshot: &'a StoreSnapshot,
    next: Option<ResponseId>,
}

impl<'a> Iterator for ResponseChain<'a> {
    type Item = &'a ResponseRecord;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.snapshot.response(self.next?)?;
        self.next = current.previous_response_id;
        Some(current)
    }
}
