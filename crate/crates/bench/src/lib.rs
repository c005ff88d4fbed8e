//! Shared inputs for the metric benchmarks.

use calmine::ingest::{generate_synthetic, SyntheticConfig};
use calmine::{load_dataset, Interval, StoreSnapshot};

/// A seeded synthetic snapshot with `employees` people over `days` days.
pub fn snapshot(employees: usize, days: u32, meetings_per_day: f64) -> StoreSnapshot {
    let cfg = SyntheticConfig::new(employees, days, meetings_per_day, 7);
    load_dataset(generate_synthetic(&cfg).expect("valid config")).expect("synthetic data loads")
}

/// The whole span covered by [`snapshot`] data.
pub fn span(days: u32) -> Interval {
    let start = SyntheticConfig::default().start_date;
    Interval::days(start, start + chrono::Duration::days(days as i64))
}

/// A calendar with `events` weekly events of four occurrences each.
pub fn ics_calendar(events: usize) -> String {
    let mut s = String::from("BEGIN:VCALENDAR\r\nVERSION:2.0\r\n");
    for i in 0..events {
        let day = 1 + i % 28;
        s.push_str(&format!(
            "BEGIN:VEVENT\r\nUID:{i}@bench\r\nDTSTAMP:20150501T080000Z\r\nDTSTART:201506{day:02}T090000\r\n\
DTEND:201506{day:02}T100000\r\nRRULE:FREQ=WEEKLY;COUNT=4\r\nORGANIZER:mailto:o{}@x\r\n\
ATTENDEE;PARTSTAT=ACCEPTED:mailto:a{}@x\r\nATTENDEE;ROLE=OPT-PARTICIPANT:mailto:b{}@x\r\nEND:VEVENT\r\n",
            i % 17,
            i % 13,
            i % 11
        ));
    }
    s.push_str("END:VCALENDAR\r\n");
    s
}
