use super::catalog::ParamKind;
use super::params::CoreHours;
use crate::calstore::{EmployeeId, Interval, MeetingId, RoomId};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("unknown metric {0}")]
    UnknownMetric(String),
    #[error("metric {metric} has no variant {variant:?}")]
    UnknownVariant { metric: String, variant: String },
    #[error("metric {metric} requires parameter {param}")]
    MissingParameter { metric: String, param: ParamKind },
    #[error("unknown meeting {0}")]
    UnknownMeeting(MeetingId),
    #[error("unknown employee {0}")]
    UnknownEmployee(EmployeeId),
    #[error("unknown room {0}")]
    UnknownRoom(RoomId),
    #[error("invalid interval {0}: start is after end")]
    InvalidInterval(Interval),
    #[error("invalid core hours {0}: start must precede finish")]
    InvalidCoreHours(CoreHours),
    #[error("invalid parameter {param}: {reason}")]
    InvalidParameter { param: ParamKind, reason: String },
}

impl MetricError {
    /// Errors caused by the metric request itself rather than by the data.
    pub fn is_request_error(&self) -> bool {
        matches!(
            self,
            MetricError::UnknownMetric(_) | MetricError::UnknownVariant { .. } | MetricError::MissingParameter { .. }
        )
    }
}
