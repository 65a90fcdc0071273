//! Text formats, JSON-lines records, the differential verification suite and
//! the command-line driver around `xcover-core`.

pub mod cli;
pub mod format;
pub mod record;
pub mod suite;

pub use format::{parse_instance, read_instance, serialize, FormatError, Instance};
pub use record::RunRecord;
pub use suite::{run_verification_suite, SuiteConfig, SuiteReport};
