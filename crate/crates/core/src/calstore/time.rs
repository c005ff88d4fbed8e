use std::fmt;
use std::str::FromStr;

use chrono::{NaiveDate, NaiveDateTime, NaiveTime, Timelike};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A naive local timestamp with whole-second precision.
///
/// Textual form is `YYYY-MM-DDTHH:MM`, with `:SS` appended only when the
/// seconds are non-zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(NaiveDateTime);

impl Timestamp {
    pub fn new(inner: NaiveDateTime) -> Self {
        Timestamp(inner.with_nanosecond(0).expect("zero nanoseconds is valid"))
    }

    pub fn from_ymd_hms(y: i32, mo: u32, d: u32, h: u32, mi: u32, s: u32) -> Option<Self> {
        NaiveDate::from_ymd_opt(y, mo, d)
            .and_then(|date| date.and_hms_opt(h, mi, s))
            .map(Timestamp)
    }

    pub fn naive(&self) -> NaiveDateTime {
        self.0
    }

    pub fn date(&self) -> NaiveDate {
        self.0.date()
    }

    pub fn time(&self) -> NaiveTime {
        self.0.time()
    }

    /// Whole minutes from `earlier` to `self`, truncated toward zero.
    pub fn minutes_since(&self, earlier: Timestamp) -> i64 {
        (self.0 - earlier.0).num_minutes()
    }

    pub fn plus_minutes(&self, minutes: i64) -> Timestamp {
        Timestamp(self.0 + chrono::Duration::minutes(minutes))
    }

    pub fn plus_days(&self, days: i64) -> Timestamp {
        Timestamp(self.0 + chrono::Duration::days(days))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.second() == 0 {
            write!(f, "{}", self.0.format("%Y-%m-%dT%H:%M"))
        } else {
            write!(f, "{}", self.0.format("%Y-%m-%dT%H:%M:%S"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid timestamp {0:?}: expected YYYY-MM-DDTHH:MM[:SS]")]
pub struct TimestampParseError(pub String);

impl FromStr for Timestamp {
    type Err = TimestampParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || TimestampParseError(s.to_string());
        let bytes = s.as_bytes();
        // Strict shape check first; chrono alone accepts single-digit fields.
        let shape_ok = match bytes.len() {
            16 | 19 => bytes.iter().enumerate().all(|(i, b)| match i {
                4 | 7 => *b == b'-',
                10 => *b == b'T',
                13 | 16 => *b == b':',
                _ => b.is_ascii_digit(),
            }),
            _ => false,
        };
        if !shape_ok {
            return Err(err());
        }
        let fmt = if bytes.len() == 16 {
            "%Y-%m-%dT%H:%M"
        } else {
            "%Y-%m-%dT%H:%M:%S"
        };
        NaiveDateTime::parse_from_str(s, fmt)
            .map(Timestamp)
            .map_err(|_| err())
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

/// Inclusive range of meeting start times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub start: Timestamp,
    pub end: Timestamp,
}

impl Interval {
    pub fn new(start: Timestamp, end: Timestamp) -> Self {
        Interval { start, end }
    }

    /// Whole days `first`..=`last`, i.e. `[first T00:00, last T23:59]`.
    pub fn days(first: NaiveDate, last: NaiveDate) -> Self {
        Interval {
            start: Timestamp(first.and_hms_opt(0, 0, 0).unwrap()),
            end: Timestamp(last.and_hms_opt(23, 59, 0).unwrap()),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.start <= self.end
    }

    pub fn contains(&self, t: Timestamp) -> bool {
        self.start <= t && t <= self.end
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid interval {0:?}: expected A..B with dates (YYYY-MM-DD) or timestamps")]
pub struct IntervalParseError(pub String);

impl FromStr for Interval {
    type Err = IntervalParseError;

    /// Accepts `YYYY-MM-DD..YYYY-MM-DD` (expanded to whole days) or two
    /// timestamps separated by `..`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || IntervalParseError(s.to_string());
        let (a, b) = s.split_once("..").ok_or_else(err)?;
        let date = |x: &str| NaiveDate::parse_from_str(x, "%Y-%m-%d").ok().filter(|_| x.len() == 10);
        match (date(a), date(b)) {
            (Some(first), Some(last)) => Ok(Interval::days(first, last)),
            _ => {
                let start = a.parse().map_err(|_| err())?;
                let end = b.parse().map_err(|_| err())?;
                Ok(Interval { start, end })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minute_and_second_forms() {
        let t: Timestamp = "2015-06-03T09:00".parse().unwrap();
        assert_eq!(t.to_string(), "2015-06-03T09:00");
        let t: Timestamp = "2015-06-03T09:00:30".parse().unwrap();
        assert_eq!(t.to_string(), "2015-06-03T09:00:30");
        let t: Timestamp = "2015-06-03T09:00:00".parse().unwrap();
        assert_eq!(t.to_string(), "2015-06-03T09:00");
    }

    #[test]
    fn rejects_bad_timestamps() {
        for bad in ["2015-13-01T09:00", "2015-6-01T09:00", "2015-06-01 09:00", "2015-06-31T09:00", "x"] {
            assert!(bad.parse::<Timestamp>().is_err(), "{bad}");
        }
    }

    #[test]
    fn minute_difference_truncates_toward_zero() {
        let a: Timestamp = "2015-06-03T09:00".parse().unwrap();
        let b: Timestamp = "2015-06-03T09:01:59".parse().unwrap();
        assert_eq!(b.minutes_since(a), 1);
        assert_eq!(a.minutes_since(b), -1);
    }

    #[test]
    fn date_interval_expands_to_whole_days() {
        let i: Interval = "2015-06-01..2015-06-30".parse().unwrap();
        assert_eq!(i.start.to_string(), "2015-06-01T00:00");
        assert_eq!(i.end.to_string(), "2015-06-30T23:59");
        assert!(i.contains("2015-06-30T23:59".parse().unwrap()));
        assert!(!i.contains("2015-07-01T00:00".parse().unwrap()));
    }
}
