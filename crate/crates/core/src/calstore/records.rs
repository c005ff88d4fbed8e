use std::fmt;

use serde::{Deserialize, Serialize};

use super::time::Timestamp;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident, $prefix:literal) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

id_type!(MeetingId, "M");
id_type!(EmployeeId, "E");
id_type!(ParticipantId, "P");
id_type!(InvitationId, "I");
id_type!(ResponseId, "R");
id_type!(InviteeRequestId, "Q");
id_type!(LocationId, "L");
id_type!(RoomId, "Room");
id_type!(CompanyId, "C");
id_type!(CountryId, "X");
id_type!(LocationInMeetingId, "LM");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResponseType {
    Accept,
    Decline,
    Tentative,
    Delegate,
}

impl ResponseType {
    pub fn name(&self) -> &'static str {
        match self {
            ResponseType::Accept => "accept",
            ResponseType::Decline => "decline",
            ResponseType::Tentative => "tentative",
            ResponseType::Delegate => "delegate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RequestType {
    #[serde(rename = "info")]
    Info,
    #[serde(rename = "re-plan")]
    Replan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeetingRecord {
    #[serde(rename = "MeetingID")]
    pub meeting_id: MeetingId,
    #[serde(rename = "InvitationTime")]
    pub invitation_time: Timestamp,
    #[serde(rename = "StartTime")]
    pub start_time: Timestamp,
    #[serde(rename = "FinishTime")]
    pub finish_time: Timestamp,
    #[serde(rename = "RoomChangedNumber")]
    pub room_changed_number: u32,
    #[serde(rename = "Cancelled")]
    pub cancelled: bool,
    /// Series root; equals `meeting_id` for the first (or only) occurrence.
    #[serde(rename = "RepetitionFrom")]
    pub repetition_from: MeetingId,
    #[serde(rename = "NumberOfRescheduling")]
    pub number_of_rescheduling: u32,
}

impl MeetingRecord {
    pub fn length_minutes(&self) -> i64 {
        self.finish_time.minutes_since(self.start_time)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmployeeRecord {
    #[serde(rename = "EmployeeID")]
    pub employee_id: EmployeeId,
    #[serde(rename = "Name")]
    pub name: String,
    #[serde(rename = "Email")]
    pub email: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticipantRecord {
    #[serde(rename = "ParticipantID")]
    pub participant_id: ParticipantId,
    #[serde(rename = "EmployeeID")]
    pub employee_id: EmployeeId,
    #[serde(rename = "MeetingID")]
    pub meeting_id: MeetingId,
    #[serde(rename = "IsOrganizer")]
    pub is_organizer: bool,
    /// Absent for the organizer and for participants who joined uninvited.
    #[serde(rename = "InvitationID")]
    pub invitation_id: Option<InvitationId>,
    #[serde(rename = "ParticipateOnMeeting")]
    pub participate_on_meeting: bool,
    /// Minutes.
    #[serde(rename = "PreparationTime")]
    pub preparation_time: u32,
    /// Minutes.
    #[serde(rename = "FollowUpTime")]
    pub follow_up_time: u32,
    #[serde(rename = "ModificationNumber")]
    pub modification_number: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvitationRecord {
    #[serde(rename = "InvitationID")]
    pub invitation_id: InvitationId,
    /// `true` = required, `false` = optional.
    #[serde(rename = "Requiredness")]
    pub requiredness: bool,
    #[serde(rename = "DelegatedTo")]
    pub delegated_to: Option<ParticipantId>,
    #[serde(rename = "DelegatedFrom")]
    pub delegated_from: Option<ParticipantId>,
    /// Head (most recent) response of this invitation's chain.
    #[serde(rename = "InvitationResponseID")]
    pub invitation_response_id: Option<ResponseId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseRecord {
    #[serde(rename = "InvitationResponseID")]
    pub invitation_response_id: ResponseId,
    #[serde(rename = "DateTime")]
    pub date_time: Timestamp,
    #[serde(rename = "ResponseType")]
    pub response_type: ResponseType,
    #[serde(rename = "PreviousResponseID")]
    pub previous_response_id: Option<ResponseId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InviteeRequestRecord {
    #[serde(rename = "InviteeRequestID")]
    pub invitee_request_id: InviteeRequestId,
    #[serde(rename = "DateTime")]
    pub date_time: Timestamp,
    #[serde(rename = "InvitationID")]
    pub invitation_id: InvitationId,
    #[serde(rename = "InviteeRequestType")]
    pub request_type: RequestType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocationRecord {
    #[serde(rename = "LocationID")]
    pub location_id: LocationId,
    /// Absent when the location is not a meeting room.
    #[serde(rename = "RoomID")]
    pub room_id: Option<RoomId>,
    #[serde(rename = "Label")]
    pub label: String,
    #[serde(rename = "CompanyID")]
    pub company_id: CompanyId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoomRecord {
    #[serde(rename = "RoomID")]
    pub room_id: RoomId,
    #[serde(rename = "Name")]
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompanyRecord {
    #[serde(rename = "CompanyID")]
    pub company_id: CompanyId,
    #[serde(rename = "Name")]
    pub name: String,
    #[serde(rename = "CountryID")]
    pub country_id: CountryId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountryRecord {
    #[serde(rename = "CountryID")]
    pub country_id: CountryId,
    #[serde(rename = "Name")]
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocationInMeeting {
    #[serde(rename = "LocationInMeetingID")]
    pub location_in_meeting_id: LocationInMeetingId,
    #[serde(rename = "MeetingID")]
    pub meeting_id: MeetingId,
    #[serde(rename = "LocationID")]
    pub location_id: LocationId,
}

/// A canonical record collection: every table of the data model as plain rows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dataset {
    #[serde(default)]
    pub meeting: Vec<MeetingRecord>,
    #[serde(default)]
    pub employee: Vec<EmployeeRecord>,
    #[serde(default)]
    pub participant: Vec<ParticipantRecord>,
    #[serde(default)]
    pub invitation: Vec<InvitationRecord>,
    #[serde(default)]
    pub invitationresponse: Vec<ResponseRecord>,
    #[serde(default)]
    pub inviteerequest: Vec<InviteeRequestRecord>,
    #[serde(default)]
    pub location: Vec<LocationRecord>,
    #[serde(default)]
    pub room: Vec<RoomRecord>,
    #[serde(default)]
    pub company: Vec<CompanyRecord>,
    #[serde(default)]
    pub country: Vec<CountryRecord>,
    #[serde(default)]
    pub locationinmeeting: Vec<LocationInMeeting>,
}

impl Dataset {
    pub fn is_empty(&self) -> bool {
        self.meeting.is_empty()
            && self.employee.is_empty()
            && self.participant.is_empty()
            && self.invitation.is_empty()
            && self.invitationresponse.is_empty()
            && self.inviteerequest.is_empty()
            && self.location.is_empty()
            && self.room.is_empty()
            && self.company.is_empty()
            && self.country.is_empty()
            && self.locationinmeeting.is_empty()
    }

    /// Orders every table by primary key so equal row multisets compare equal.
    pub fn sort_by_key(&mut self) {
        self.meeting.sort_by_key(|r| r.meeting_id);
        self.employee.sort_by_key(|r| r.employee_id);
        self.participant.sort_by_key(|r| r.participant_id);
        self.invitation.sort_by_key(|r| r.invitation_id);
        self.invitationresponse.sort_by_key(|r| r.invitation_response_id);
        self.inviteerequest.sort_by_key(|r| r.invitee_request_id);
        self.location.sort_by_key(|r| r.location_id);
        self.room.sort_by_key(|r| r.room_id);
        self.company.sort_by_key(|r| r.company_id);
        self.country.sort_by_key(|r| r.country_id);
        self.locationinmeeting.sort_by_key(|r| r.location_in_meeting_id);
    }
}
