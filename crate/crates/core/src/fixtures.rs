//! The F1 reference dataset: four employees, eight meetings in June 2015.

use crate::calstore::{load_dataset, Dataset, Interval, StoreSnapshot};
use crate::ingest::parse_canonical;

pub const F1_CALM: &str = include_str!("../fixtures/f1.calm");

pub fn f1_records() -> Dataset {
    parse_canonical(F1_CALM).expect("F1 fixture parses")
}

pub fn f1() -> StoreSnapshot {
    load_dataset(f1_records()).expect("F1 fixture is valid")
}

/// June 2015, `[2015-06-01T00:00, 2015-06-30T23:59]`.
pub fn june_2015() -> Interval {
    "2015-06-01..2015-06-30".parse().expect("valid interval")
}

/// One weekly event with `COUNT=3`, in iCalendar form.
pub const WEEKLY3_ICS: &str = include_str!("../fixtures/weekly3.ics");
