//! File formats, synthetic corpora, reports and the command line for
//! [`stride_core`].

pub mod cli;
pub mod config;
pub mod corpus;
pub mod csv;
pub mod error;
pub mod json;
pub mod report;

pub use config::{Overrides, Settings};
pub use corpus::{default_sweep, generate_corpus, load_entry, load_manifest, profile_digest, Manifest, ManifestEntry};
pub use csv::{load_trace, read_trace, save_trace, write_trace};
pub use error::{Error, Result};
pub use report::{analyze, compare, Analysis, BaselineEstimate, Comparison};
