use super::result::{Listing, Row, RowKey, Value};
use crate::calstore::{Interval, RoomId, StoreSnapshot, Timestamp};

/// Rooms occupied at `at`; finishes are inclusive.
fn booked_rooms(snap: &StoreSnapshot, at: Timestamp, include_cancelled: bool) -> Vec<RoomId> {
    let mut booked: Vec<RoomId> = snap
        .meetings()
        .iter()
        .filter(|m| m.start_time <= at && at <= m.finish_time)
        .filter(|m| include_cancelled || !m.cancelled)
        .flat_map(|m| snap.locations_of(m.meeting_id))
        .filter_map(|&l| snap.location(l)?.room_id)
        .collect();
    booked.sort();
    booked.dedup();
    booked
}

/// Partitions all rooms into booked and free at `at`.
pub fn room_availability(snap: &StoreSnapshot, at: Timestamp, include_cancelled: bool) -> (Vec<RoomId>, Vec<RoomId>) {
    let booked = booked_rooms(snap, at, include_cancelled);
    let (b, f): (Vec<_>, Vec<_>) = snap.rooms().iter().map(|r| r.room_id).partition(|id| booked.binary_search(id).is_ok());
    (b, f)
}

pub fn is_room_booked(snap: &StoreSnapshot, at: Timestamp, room: RoomId, include_cancelled: bool) -> bool {
    booked_rooms(snap, at, include_cancelled).contains(&room)
}

/// Meetings in `interval` linked to two or more locations.
pub fn multi_location_meetings(snap: &StoreSnapshot, interval: Interval) -> Listing {
    let rows = snap
        .meetings()
        .iter()
        .filter(|m| interval.contains(m.start_time))
        .filter_map(|m| {
            let n = snap.locations_of(m.meeting_id).len();
            (n > 1).then(|| Row {
                key: RowKey::Meeting(m.meeting_id),
                values: vec![Value::Int(n as i64)],
            })
        })
        .collect();
    Listing::new(&["locations"], rows)
}
