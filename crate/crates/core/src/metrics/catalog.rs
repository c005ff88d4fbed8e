//! The metric catalog: 55 entries, each a list of variants bound to an
//! operation family and kind.

use std::fmt;

/// Payload tag a variant always produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Duration,
    OptionalDuration,
    Count,
    Flag,
    Number,
    Listing,
    Breakdown,
    Labeled,
    Ranking,
    PairListing,
    Rooms,
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Duration => "duration",
            Shape::OptionalDuration => "optional_duration",
            Shape::Count => "count",
            Shape::Flag => "flag",
            Shape::Number => "number",
            Shape::Listing => "listing",
            Shape::Breakdown => "breakdown",
            Shape::Labeled => "labeled",
            Shape::Ranking => "ranking",
            Shape::PairListing => "pair_listing",
            Shape::Rooms => "rooms",
        }
    }
}

/// A named parameter a variant can take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamKind {
    Meeting,
    OtherMeeting,
    Employee,
    Employees,
    Interval,
    At,
    Room,
    CoreHours,
    ConsecutiveThreshold,
    LastMinuteThreshold,
    Bucket,
    LowerLimit,
    UpperLimit,
    Limit,
}

impl ParamKind {
    pub fn name(&self) -> &'static str {
        match self {
            ParamKind::Meeting => "meeting",
            ParamKind::OtherMeeting => "other_meeting",
            ParamKind::Employee => "employee",
            ParamKind::Employees => "employees",
            ParamKind::Interval => "interval",
            ParamKind::At => "at",
            ParamKind::Room => "room",
            ParamKind::CoreHours => "core_hours",
            ParamKind::ConsecutiveThreshold => "consecutive_threshold",
            ParamKind::LastMinuteThreshold => "last_minute_threshold",
            ParamKind::Bucket => "bucket",
            ParamKind::LowerLimit => "lower_limit",
            ParamKind::UpperLimit => "upper_limit",
            ParamKind::Limit => "limit",
        }
    }
}

impl fmt::Display for ParamKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-meeting scalar kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    InvitationLead,
    LastReactionLead,
    MinResponseLead,
    Length,
    OccurrenceCount,
    RecurrenceFrequency,
    RescheduleCount,
    RoomChangeCount,
    CancelledFlag,
    ModificationSum,
    ReplanRequestCount,
    InfoRequestCount,
    DelegationCount,
    PreparationTotal,
    FollowupTotal,
    TotalTimeCost,
    LocationCount,
    InvitedCount,
    RequiredCount,
    OptionalCount,
}

impl ScalarKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScalarKind::InvitationLead => "invitation_lead_minutes",
            ScalarKind::LastReactionLead => "last_reaction_lead_minutes",
            ScalarKind::MinResponseLead => "min_response_lead_minutes",
            ScalarKind::Length => "length_minutes",
            ScalarKind::OccurrenceCount => "occurrence_count",
            ScalarKind::RecurrenceFrequency => "recurrence_frequency_minutes",
            ScalarKind::RescheduleCount => "reschedule_count",
            ScalarKind::RoomChangeCount => "room_change_count",
            ScalarKind::CancelledFlag => "cancelled_flag",
            ScalarKind::ModificationSum => "modification_sum",
            ScalarKind::ReplanRequestCount => "replan_request_count",
            ScalarKind::InfoRequestCount => "info_request_count",
            ScalarKind::DelegationCount => "delegation_count",
            ScalarKind::PreparationTotal => "preparation_total_minutes",
            ScalarKind::FollowupTotal => "followup_total_minutes",
            ScalarKind::TotalTimeCost => "total_time_cost_minutes",
            ScalarKind::LocationCount => "location_count",
            ScalarKind::InvitedCount => "invited_count",
            ScalarKind::RequiredCount => "required_count",
            ScalarKind::OptionalCount => "optional_count",
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            ScalarKind::InvitationLead
            | ScalarKind::Length
            | ScalarKind::PreparationTotal
            | ScalarKind::FollowupTotal
            | ScalarKind::TotalTimeCost => Shape::Duration,
            ScalarKind::LastReactionLead | ScalarKind::MinResponseLead | ScalarKind::RecurrenceFrequency => {
                Shape::OptionalDuration
            }
            ScalarKind::CancelledFlag => Shape::Flag,
            _ => Shape::Count,
        }
    }
}

/// Per-meeting listings, one row per invitee.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ListingKind {
    Invited,
    RequiredInvitees,
    OptionalInvitees,
    ResponseLeadPerInvitee,
    ModificationsPerInvitee,
    ReplanPerInvitee,
    InfoPerInvitee,
}

impl ListingKind {
    pub fn name(&self) -> &'static str {
        match self {
            ListingKind::Invited => "invited",
            ListingKind::RequiredInvitees => "required_invitees",
            ListingKind::OptionalInvitees => "optional_invitees",
            ListingKind::ResponseLeadPerInvitee => "response_lead_per_invitee",
            ListingKind::ModificationsPerInvitee => "modifications_per_invitee",
            ListingKind::ReplanPerInvitee => "replan_per_invitee",
            ListingKind::InfoPerInvitee => "info_per_invitee",
        }
    }

    /// Value column names; empty for plain name lists.
    pub fn columns(&self) -> &'static [&'static str] {
        match self {
            ListingKind::Invited | ListingKind::RequiredInvitees | ListingKind::OptionalInvitees => &[],
            ListingKind::ResponseLeadPerInvitee => &["response_lead_minutes"],
            ListingKind::ModificationsPerInvitee => &["modifications"],
            ListingKind::ReplanPerInvitee => &["replan_requests"],
            ListingKind::InfoPerInvitee => &["info_requests"],
        }
    }
}

/// What an organizer rollup measures per meeting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RollupKind {
    Scalar(ScalarKind),
    ParticipantCountTotal,
}

impl RollupKind {
    pub fn name(&self) -> &'static str {
        match self {
            RollupKind::Scalar(k) => k.name(),
            RollupKind::ParticipantCountTotal => "participant_count_total",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Aggregate {
    List,
    Average,
    CancelTally,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BreakdownKind {
    Response,
    ResponseLikelihood,
    Requiredness,
    ResponseByRequiredness,
    DelegatedResponse,
    AttendanceComposition,
}

impl BreakdownKind {
    pub fn name(&self) -> &'static str {
        match self {
            BreakdownKind::Response => "response",
            BreakdownKind::ResponseLikelihood => "response_likelihood",
            BreakdownKind::Requiredness => "requiredness",
            BreakdownKind::ResponseByRequiredness => "response_by_requiredness",
            BreakdownKind::DelegatedResponse => "delegated_response",
            BreakdownKind::AttendanceComposition => "attendance_composition",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairKind {
    Overlap,
    AreParallel,
    Gap,
    IsConsecutive,
}

impl PairKind {
    pub fn name(&self) -> &'static str {
        match self {
            PairKind::Overlap => "overlap_minutes",
            PairKind::AreParallel => "are_parallel",
            PairKind::Gap => "gap_minutes",
            PairKind::IsConsecutive => "is_consecutive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairStatsKind {
    ParallelPairCount,
    ParallelMinutesTotal,
    ConsecutivePairs,
}

impl PairStatsKind {
    pub fn name(&self) -> &'static str {
        match self {
            PairStatsKind::ParallelPairCount => "parallel_pair_count",
            PairStatsKind::ParallelMinutesTotal => "parallel_minutes_total",
            PairStatsKind::ConsecutivePairs => "consecutive_pairs",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EmployeeKind {
    MeetingCount,
    ChairedCount,
    AttendedCount,
    DelegatedOutCount,
    DelegationReceivedCount,
    DeclineAfterAcceptCount,
    LastMinuteDeclineCount,
}

impl EmployeeKind {
    pub fn name(&self) -> &'static str {
        match self {
            EmployeeKind::MeetingCount => "meeting_count",
            EmployeeKind::ChairedCount => "chaired_count",
            EmployeeKind::AttendedCount => "attended_count",
            EmployeeKind::DelegatedOutCount => "delegated_out_count",
            EmployeeKind::DelegationReceivedCount => "delegation_received_count",
            EmployeeKind::DeclineAfterAcceptCount => "decline_after_accept_count",
            EmployeeKind::LastMinuteDeclineCount => "last_minute_decline_count",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoardKind {
    MostChaired,
    MeetingCountDesc,
    ParallelMinutesDesc,
    MostTentative,
    MostCancelling,
    MeetingCountAsc,
    MostOptional,
    MostRequired,
    CouplingDesc,
    CouplingLower,
    CouplingUpper,
    PreparationTotal,
    FollowupTotal,
    TimeCostTotal,
}

impl BoardKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoardKind::MostChaired => "most_chaired",
            BoardKind::MeetingCountDesc => "meeting_count_desc",
            BoardKind::ParallelMinutesDesc => "parallel_minutes_desc",
            BoardKind::MostTentative => "most_tentative",
            BoardKind::MostCancelling => "most_cancelling",
            BoardKind::MeetingCountAsc => "meeting_count_asc",
            BoardKind::MostOptional => "most_optional",
            BoardKind::MostRequired => "most_required",
            BoardKind::CouplingDesc => "coupling_desc",
            BoardKind::CouplingLower => "coupling_lower",
            BoardKind::CouplingUpper => "coupling_upper",
            BoardKind::PreparationTotal => "preparation_total",
            BoardKind::FollowupTotal => "followup_total",
            BoardKind::TimeCostTotal => "time_cost_total",
        }
    }

    pub fn ascending(&self) -> bool {
        matches!(self, BoardKind::MeetingCountAsc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DelegationKind {
    VsCompanyAverage,
    OutVsIn,
}

impl DelegationKind {
    pub fn name(&self) -> &'static str {
        match self {
            DelegationKind::VsCompanyAverage => "vs_company_average",
            DelegationKind::OutVsIn => "out_vs_in",
        }
    }
}

/// Operation family plus kind a variant dispatches to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Scalar(ScalarKind),
    Listing(ListingKind),
    Rollup(RollupKind, Aggregate),
    Breakdown(BreakdownKind),
    CoreHoursGaps,
    Pairwise(PairKind),
    PairStats(PairStatsKind),
    Employee(EmployeeKind),
    BucketedAverage,
    Histogram,
    Compare,
    Leaderboard(BoardKind),
    RoomAvailability,
    RoomBooked,
    Delegation(DelegationKind),
    MultiLocation,
}

impl Op {
    /// Whether `paper_exact` changes this operation's result.
    pub fn paper_exact_sensitive(&self) -> bool {
        matches!(
            self,
            Op::PairStats(PairStatsKind::ParallelPairCount)
                | Op::PairStats(PairStatsKind::ParallelMinutesTotal)
                | Op::Leaderboard(BoardKind::CouplingDesc)
                | Op::RoomAvailability
                | Op::RoomBooked
        )
    }
}

#[derive(Debug, PartialEq)]
pub struct Variant {
    pub name: &'static str,
    pub op: Op,
    pub required: &'static [ParamKind],
    pub optional: &'static [ParamKind],
    pub shape: Shape,
}

#[derive(Debug, PartialEq)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub title: &'static str,
    pub variants: &'static [Variant],
}

impl CatalogEntry {
    pub fn variant(&self, name: &str) -> Option<&'static Variant> {
        self.variants.iter().find(|v| v.name == name)
    }

    pub fn default_variant(&self) -> &'static Variant {
        &self.variants[0]
    }
}

use self::ParamKind as P;

const M: &[ParamKind] = &[P::Meeting];
const MM: &[ParamKind] = &[P::Meeting, P::OtherMeeting];
const EI: &[ParamKind] = &[P::Employee, P::Interval];
const I: &[ParamKind] = &[P::Interval];
const NONE: &[ParamKind] = &[];
const LIMIT: &[ParamKind] = &[P::Limit];

const fn scalar(name: &'static str, k: ScalarKind, shape: Shape) -> Variant {
    Variant { name, op: Op::Scalar(k), required: M, optional: NONE, shape }
}

const fn listing(name: &'static str, k: ListingKind) -> Variant {
    Variant { name, op: Op::Listing(k), required: M, optional: NONE, shape: Shape::Listing }
}

const fn org_list(k: ScalarKind) -> Variant {
    Variant {
        name: "organizer_list",
        op: Op::Rollup(RollupKind::Scalar(k), Aggregate::List),
        required: EI,
        optional: NONE,
        shape: Shape::Listing,
    }
}

const fn org_average(k: ScalarKind) -> Variant {
    Variant {
        name: "organizer_average",
        op: Op::Rollup(RollupKind::Scalar(k), Aggregate::Average),
        required: EI,
        optional: NONE,
        shape: Shape::Number,
    }
}

const fn breakdown(name: &'static str, k: BreakdownKind, shape: Shape) -> Variant {
    Variant { name, op: Op::Breakdown(k), required: M, optional: NONE, shape }
}

const fn employee(name: &'static str, k: EmployeeKind) -> Variant {
    Variant { name, op: Op::Employee(k), required: EI, optional: NONE, shape: Shape::Count }
}

const fn board(name: &'static str, k: BoardKind) -> Variant {
    Variant { name, op: Op::Leaderboard(k), required: I, optional: LIMIT, shape: Shape::Ranking }
}

const fn entry(id: &'static str, title: &'static str, variants: &'static [Variant]) -> CatalogEntry {
    CatalogEntry { id, title, variants }
}

use Shape as S;

pub static CATALOG: [CatalogEntry; 55] = [
    entry("5.1", "Optional participants", &[
        scalar("optional_count", ScalarKind::OptionalCount, S::Count),
        listing("optional_invitees", ListingKind::OptionalInvitees),
        org_list(ScalarKind::OptionalCount),
        org_average(ScalarKind::OptionalCount),
    ]),
    entry("5.2", "Time between meeting invitation and meeting start", &[
        scalar("invitation_lead", ScalarKind::InvitationLead, S::Duration),
        org_list(ScalarKind::InvitationLead),
    ]),
    entry("5.3", "Time between meeting invitation and reaction", &[
        scalar("last_reaction_lead", ScalarKind::LastReactionLead, S::OptionalDuration),
    ]),
    entry("5.4", "Time between meeting invitation and response", &[
        listing("response_lead_per_invitee", ListingKind::ResponseLeadPerInvitee),
        scalar("min_response_lead", ScalarKind::MinResponseLead, S::OptionalDuration),
    ]),
    entry("5.5", "Number of parallel meetings", &[
        Variant { name: "are_parallel", op: Op::Pairwise(PairKind::AreParallel), required: MM, optional: NONE, shape: S::Flag },
        Variant { name: "overlap_minutes", op: Op::Pairwise(PairKind::Overlap), required: MM, optional: NONE, shape: S::Duration },
        Variant {
            name: "parallel_pair_count",
            op: Op::PairStats(PairStatsKind::ParallelPairCount),
            required: EI,
            optional: NONE,
            shape: S::Count,
        },
    ]),
    entry("5.6", "Ratio of chaired versus attended meetings", &[
        employee("chaired_count", EmployeeKind::ChairedCount),
        employee("attended_count", EmployeeKind::AttendedCount),
    ]),
    entry("5.7", "Response likelihood", &[
        breakdown("response_likelihood", BreakdownKind::ResponseLikelihood, S::Breakdown),
    ]),
    entry("5.8", "Meeting rescheduling", &[
        scalar("reschedule_count", ScalarKind::RescheduleCount, S::Count),
        org_list(ScalarKind::RescheduleCount),
        org_average(ScalarKind::RescheduleCount),
    ]),
    entry("5.9", "Invitee modifications", &[
        listing("modifications_per_invitee", ListingKind::ModificationsPerInvitee),
        scalar("modification_sum", ScalarKind::ModificationSum, S::Count),
        org_list(ScalarKind::ModificationSum),
        org_average(ScalarKind::ModificationSum),
    ]),
    entry("5.10", "Meeting length", &[
        scalar("length", ScalarKind::Length, S::Duration),
        org_list(ScalarKind::Length),
        org_average(ScalarKind::Length),
    ]),
    entry("5.11", "Meeting reoccurrences", &[
        scalar("occurrence_count", ScalarKind::OccurrenceCount, S::Count),
    ]),
    entry("5.12", "Meeting recurrence frequency", &[
        scalar("recurrence_frequency", ScalarKind::RecurrenceFrequency, S::OptionalDuration),
    ]),
    entry("5.13", "Invited meeting participants", &[
        scalar("invited_count", ScalarKind::InvitedCount, S::Count),
        listing("invited", ListingKind::Invited),
        org_list(ScalarKind::InvitedCount),
        org_average(ScalarKind::InvitedCount),
    ]),
    entry("5.14", "Required participants", &[
        scalar("required_count", ScalarKind::RequiredCount, S::Count),
        listing("required_invitees", ListingKind::RequiredInvitees),
        org_list(ScalarKind::RequiredCount),
        org_average(ScalarKind::RequiredCount),
    ]),
    entry("5.15", "Required versus optional participants", &[
        breakdown("requiredness", BreakdownKind::Requiredness, S::Breakdown),
    ]),
    entry("5.16", "Time between meeting and core service hours", &[
        Variant { name: "core_hours_gaps", op: Op::CoreHoursGaps, required: M, optional: &[P::CoreHours], shape: S::Labeled },
    ]),
    entry("5.17", "Time between meetings", &[
        Variant { name: "gap_minutes", op: Op::Pairwise(PairKind::Gap), required: MM, optional: NONE, shape: S::Duration },
    ]),
    entry("5.18", "Accepting, tentative, non-responding and declining participants", &[
        breakdown("response", BreakdownKind::Response, S::Breakdown),
    ]),
    entry("5.19", "Number of re-plan requests per meeting", &[
        scalar("replan_request_count", ScalarKind::ReplanRequestCount, S::Count),
        listing("replan_per_invitee", ListingKind::ReplanPerInvitee),
        org_list(ScalarKind::ReplanRequestCount),
        org_average(ScalarKind::ReplanRequestCount),
    ]),
    entry("5.20", "Number of information request participants", &[
        scalar("info_request_count", ScalarKind::InfoRequestCount, S::Count),
        listing("info_per_invitee", ListingKind::InfoPerInvitee),
        org_list(ScalarKind::InfoRequestCount),
        org_average(ScalarKind::InfoRequestCount),
    ]),
    entry("5.21", "Meeting room changes", &[
        scalar("room_change_count", ScalarKind::RoomChangeCount, S::Count),
        org_list(ScalarKind::RoomChangeCount),
        org_average(ScalarKind::RoomChangeCount),
    ]),
    entry("5.22", "Held versus cancelled meetings", &[
        scalar("cancelled_flag", ScalarKind::CancelledFlag, S::Flag),
        Variant {
            name: "cancel_tally",
            op: Op::Rollup(RollupKind::Scalar(ScalarKind::CancelledFlag), Aggregate::CancelTally),
            required: EI,
            optional: NONE,
            shape: S::Labeled,
        },
    ]),
    entry("5.23", "Number of consecutive meetings", &[
        Variant {
            name: "is_consecutive",
            op: Op::Pairwise(PairKind::IsConsecutive),
            required: MM,
            optional: &[P::ConsecutiveThreshold],
            shape: S::Flag,
        },
        Variant {
            name: "consecutive_pairs",
            op: Op::PairStats(PairStatsKind::ConsecutivePairs),
            required: EI,
            optional: &[P::ConsecutiveThreshold],
            shape: S::PairListing,
        },
    ]),
    entry("5.24", "Number of meetings", &[
        employee("meeting_count", EmployeeKind::MeetingCount),
    ]),
    entry("5.25", "Number of parallel meeting minutes", &[
        Variant {
            name: "parallel_minutes_total",
            op: Op::PairStats(PairStatsKind::ParallelMinutesTotal),
            required: EI,
            optional: NONE,
            shape: S::Duration,
        },
    ]),
    entry("5.26", "Chaired versus attended meetings among two or more persons", &[
        Variant { name: "compare", op: Op::Compare, required: &[P::Employees, P::Interval], optional: NONE, shape: S::Listing },
    ]),
    entry("5.27", "Average participants on meetings a person chairs", &[
        Variant {
            name: "participant_average",
            op: Op::Rollup(RollupKind::ParticipantCountTotal, Aggregate::Average),
            required: EI,
            optional: NONE,
            shape: S::Number,
        },
    ]),
    entry("5.28", "Participant counts on meetings a person chairs", &[
        Variant { name: "histogram", op: Op::Histogram, required: EI, optional: NONE, shape: S::Listing },
    ]),
    entry("5.29", "Average number of meetings", &[
        Variant {
            name: "bucketed_average",
            op: Op::BucketedAverage,
            required: &[P::Employee, P::Interval, P::Bucket],
            optional: NONE,
            shape: S::Number,
        },
    ]),
    entry("5.30", "Booked versus available meeting rooms", &[
        Variant { name: "room_booked", op: Op::RoomBooked, required: &[P::At, P::Room], optional: NONE, shape: S::Flag },
        Variant { name: "rooms_at", op: Op::RoomAvailability, required: &[P::At], optional: NONE, shape: S::Rooms },
    ]),
    entry("5.31", "Most coupled employee", &[
        Variant {
            name: "coupling",
            op: Op::Leaderboard(BoardKind::CouplingDesc),
            required: I,
            optional: &[P::Limit, P::LowerLimit],
            shape: S::Ranking,
        },
    ]),
    entry("5.32", "Most coupled employee with lower limit", &[
        Variant {
            name: "coupling_lower",
            op: Op::Leaderboard(BoardKind::CouplingLower),
            required: &[P::Interval, P::LowerLimit],
            optional: LIMIT,
            shape: S::Ranking,
        },
    ]),
    entry("5.33", "Most coupled employee with upper limit", &[
        Variant {
            name: "coupling_upper",
            op: Op::Leaderboard(BoardKind::CouplingUpper),
            required: &[P::Interval, P::UpperLimit],
            optional: LIMIT,
            shape: S::Ranking,
        },
    ]),
    entry("5.34", "Invited, non-invited and active participants", &[
        breakdown("attendance_composition", BreakdownKind::AttendanceComposition, S::Breakdown),
    ]),
    entry("5.35", "Most chaired employees", &[board("most_chaired", BoardKind::MostChaired)]),
    entry("5.36", "Most overloaded employees", &[
        board("meeting_count_desc", BoardKind::MeetingCountDesc),
        board("parallel_minutes_desc", BoardKind::ParallelMinutesDesc),
    ]),
    entry("5.37", "Most tentative employees", &[board("most_tentative", BoardKind::MostTentative)]),
    entry("5.38", "Average time between meeting invitation and meeting start", &[
        org_average(ScalarKind::InvitationLead),
    ]),
    entry("5.39", "Lowest and highest meeting cancellation", &[board("most_cancelling", BoardKind::MostCancelling)]),
    entry("5.40", "Loosely coupled employees", &[board("meeting_count_asc", BoardKind::MeetingCountAsc)]),
    entry("5.41", "Delegated meetings per person", &[
        employee("delegated_out_count", EmployeeKind::DelegatedOutCount),
    ]),
    entry("5.42", "Received delegation requests", &[
        employee("delegation_received_count", EmployeeKind::DelegationReceivedCount),
    ]),
    entry("5.43", "Accepted, non-replied and rejected delegation requests", &[
        breakdown("delegated_response", BreakdownKind::DelegatedResponse, S::Breakdown),
    ]),
    entry("5.44", "Delegations", &[scalar("delegation_count", ScalarKind::DelegationCount, S::Count)]),
    entry("5.45", "Delegations per person versus other employees", &[
        Variant {
            name: "vs_company_average",
            op: Op::Delegation(DelegationKind::VsCompanyAverage),
            required: EI,
            optional: NONE,
            shape: S::Labeled,
        },
    ]),
    entry("5.46", "Decline after acceptance", &[
        employee("decline_after_accept_count", EmployeeKind::DeclineAfterAcceptCount),
    ]),
    entry("5.47", "Last minute decline after acceptance", &[
        Variant {
            name: "last_minute_decline_count",
            op: Op::Employee(EmployeeKind::LastMinuteDeclineCount),
            required: EI,
            optional: &[P::LastMinuteThreshold],
            shape: S::Count,
        },
    ]),
    entry("5.48", "Preparation time", &[
        scalar("preparation_total", ScalarKind::PreparationTotal, S::Duration),
        board("preparation_leaderboard", BoardKind::PreparationTotal),
    ]),
    entry("5.49", "Meeting follow-up time", &[
        scalar("followup_total", ScalarKind::FollowupTotal, S::Duration),
        board("followup_leaderboard", BoardKind::FollowupTotal),
    ]),
    entry("5.50", "Total time cost of a meeting", &[
        scalar("total_time_cost", ScalarKind::TotalTimeCost, S::Duration),
        board("time_cost_leaderboard", BoardKind::TimeCostTotal),
    ]),
    entry("5.51", "Response and requiredness level", &[
        breakdown("response_by_requiredness", BreakdownKind::ResponseByRequiredness, S::Breakdown),
    ]),
    entry("5.52", "Most optional employees", &[board("most_optional", BoardKind::MostOptional)]),
    entry("5.53", "Most required employees", &[board("most_required", BoardKind::MostRequired)]),
    entry("5.54", "Number of locations involved", &[
        scalar("location_count", ScalarKind::LocationCount, S::Count),
        Variant { name: "multi_location", op: Op::MultiLocation, required: I, optional: NONE, shape: S::Listing },
    ]),
    entry("5.55", "Delegations versus delegation requests", &[
        Variant {
            name: "out_vs_in",
            op: Op::Delegation(DelegationKind::OutVsIn),
            required: EI,
            optional: NONE,
            shape: S::Labeled,
        },
    ]),
];

pub fn lookup(id: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ids_run_from_one_to_fifty_five() {
        for (i, e) in CATALOG.iter().enumerate() {
            assert_eq!(e.id, format!("5.{}", i + 1));
            assert!(!e.variants.is_empty());
        }
        assert!(lookup("5.99").is_none());
    }

    #[test]
    fn variant_names_are_unique_within_an_entry() {
        for e in &CATALOG {
            let names: HashSet<_> = e.variants.iter().map(|v| v.name).collect();
            assert_eq!(names.len(), e.variants.len(), "{}", e.id);
        }
    }

    #[test]
    fn scalar_shapes_agree_with_kinds() {
        for e in &CATALOG {
            for v in e.variants {
                if let Op::Scalar(k) = v.op {
                    assert_eq!(k.shape(), v.shape, "{} {}", e.id, v.name);
                }
            }
        }
    }
}
