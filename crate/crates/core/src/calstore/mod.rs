//! Typed in-memory relational store for calendar data.
//!
//! Tables mirror the calendar-mining reference data model: meetings, their
//! participants and invitations, response chains, invitee requests, and the
//! location/room/company/country hierarchy. Records are loaded once, checked
//! against every integrity rule, and frozen into a [`StoreSnapshot`].

mod records;
mod snapshot;
mod time;
mod validate;

pub use records::*;
pub use snapshot::{load_dataset, IntegrityError, ResponseChain, StoreSnapshot};
pub use time::{Interval, IntervalParseError, Timestamp, TimestampParseError};
pub use validate::{validate, Issue, Rule, Severity, ValidationReport};
