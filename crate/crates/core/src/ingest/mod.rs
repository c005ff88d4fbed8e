//! Getting data into a [`StoreSnapshot`](crate::calstore::StoreSnapshot).

mod canonical;
mod ics;
mod synthetic;

pub use canonical::{parse_canonical, serialize_canonical, ParseError};
pub use ics::{import_ics, EventProvenance, IcsMappingPolicy, IcsMappingReport, LossyConversion, SkippedEvent, DEFAULTED_FIELDS};
pub use synthetic::{generate_synthetic, ConfigError, ResponseProbabilities, SyntheticConfig};
