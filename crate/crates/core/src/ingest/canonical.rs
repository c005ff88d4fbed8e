//! The `.calm` canonical dataset format.
//!
//! One JSON document holding one array per table, table and field names as in
//! the reference data model. The writer puts every row on its own line so
//! datasets diff cleanly:
//!
//! ```text
//! {
//!   "meeting": [
//!     {"MeetingID":1,"InvitationTime":"2015-06-01T08:00",...},
//!     {"MeetingID":2,...}
//!   ],
//!   "employee": [],
//!   ...
//! }
//! ```

use std::fmt::Write as _;

use serde::Serialize;

use crate::calstore::Dataset;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {path}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    /// Location inside the document, e.g. `meeting[0].StartTime`.
    pub path: String,
    pub message: String,
}

/// Parses a canonical document. Performs no integrity validation.
pub fn parse_canonical(text: &str) -> Result<Dataset, ParseError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let dataset: Dataset = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        ParseError {
            line: inner.line(),
            column: inner.column(),
            path,
            message: strip_position(&inner.to_string()),
        }
    })?;
    de.end().map_err(|e| ParseError {
        line: e.line(),
        column: e.column(),
        path: ".".to_string(),
        message: strip_position(&e.to_string()),
    })?;
    Ok(dataset)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Serializes a dataset in canonical form. Output is byte-identical for equal
/// datasets.
pub fn serialize_canonical(d: &Dataset) -> String {
    let mut out = String::from("{\n");
    let mut first = true;
    let mut table = |name: &str, rows: Vec<String>| {
        if !first {
            out.push_str(",\n");
        }
        first = false;
        if rows.is_empty() {
            let _ = write!(out, "  \"{name}\": []");
            return;
        }
        let _ = writeln!(out, "  \"{name}\": [");
        let n = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            out.push_str("    ");
            out.push_str(&row);
            if i + 1 < n {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ]");
    };
    table("meeting", rows(&d.meeting));
    table("employee", rows(&d.employee));
    table("participant", rows(&d.participant));
    table("invitation", rows(&d.invitation));
    table("invitationresponse", rows(&d.invitationresponse));
    table("inviteerequest", rows(&d.inviteerequest));
    table("location", rows(&d.location));
    table("room", rows(&d.room));
    table("company", rows(&d.company));
    table("country", rows(&d.country));
    table("locationinmeeting", rows(&d.locationinmeeting));
    out.push_str("\n}\n");
    out
}

fn rows<T: Serialize>(items: &[T]) -> Vec<String> {
    items
        .iter()
        .map(|r| serde_json::to_string(r).expect("records serialize infallibly"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const EMPTY: &str = r#"{"meeting":[],"employee":[],"participant":[],"invitation":[],
        "invitationresponse":[],"inviteerequest":[],"location":[],"room":[],
        "company":[],"country":[],"locationinmeeting":[]}"#;

    #[test]
    fn all_empty_arrays_parse_to_empty_collection() {
        let d = parse_canonical(EMPTY).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn f1_file_round_trips() {
        let d = parse_canonical(fixtures::F1_CALM).unwrap();
        let text = serialize_canonical(&d);
        assert_eq!(text, fixtures::F1_CALM);
        assert_eq!(parse_canonical(&text).unwrap(), d);
    }

    #[test]
    fn invalid_month_names_the_field() {
        let text = r#"{"meeting":[{"MeetingID":1,"InvitationTime":"2015-06-01T08:00",
            "StartTime":"2015-13-01T09:00","FinishTime":"2015-06-03T10:00","RoomChangedNumber":0,
            "Cancelled":false,"RepetitionFrom":1,"NumberOfRescheduling":0}]}"#;
        let err = parse_canonical(text).unwrap_err();
        assert_eq!(err.path, "meeting[0].StartTime");
        assert!(err.message.contains("2015-13-01T09:00"));
        assert_eq!(err.line, 2);
    }

    #[test]
    fn unknown_field_and_array_are_rejected() {
        let err = parse_canonical(r#"{"meeting":[],"calendar":[]}"#).unwrap_err();
        assert!(err.message.contains("calendar"), "{err}");
        let err = parse_canonical(r#"{"room":[{"RoomID":1,"Name":"a","Floor":3}]}"#).unwrap_err();
        assert!(err.message.contains("Floor"), "{err}");
        assert_eq!(err.path, "room[0].Floor");
    }

    #[test]
    fn missing_field_and_bad_id_are_rejected() {
        let err = parse_canonical(r#"{"room":[{"RoomID":1}]}"#).unwrap_err();
        assert!(err.message.contains("Name"), "{err}");
        let err = parse_canonical(r#"{"room":[{"RoomID":"one","Name":"a"}]}"#).unwrap_err();
        assert_eq!(err.path, "room[0].RoomID");
        let err = parse_canonical(r#"{"room":[{"RoomID":-1,"Name":"a"}]}"#).unwrap_err();
        assert_eq!(err.path, "room[0].RoomID");
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        assert!(parse_canonical("{} {}").is_err());
    }

    #[test]
    fn seconds_are_optional() {
        let text = r#"{"invitationresponse":[{"InvitationResponseID":1,"DateTime":"2015-06-01T09:00:15",
            "ResponseType":"accept","PreviousResponseID":null}]}"#;
        let d = parse_canonical(text).unwrap();
        assert!(serialize_canonical(&d).contains("2015-06-01T09:00:15"));
    }
}
