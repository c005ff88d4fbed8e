//! Calendar mining: a validated relational store for meeting data and a
//! catalog of metrics computed over it.

pub mod calstore;
pub mod fixtures;
pub mod ingest;
pub mod metrics;
pub mod oracle;
pub mod report;

pub use calstore::*;
