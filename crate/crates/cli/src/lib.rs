//! Command implementations behind the `ontoloom` binary: building an
//! ontology from specification documents, annotating a corpus, enriching the
//! ontology from the qualifier terms found, and reporting typing rates.

pub mod commands;
pub mod config;
pub mod stats;

pub use commands::{annotate, build, enrich_cmd, export_triples_cmd, stats_cmd, CommandOutput};
pub use config::PipelineConfig;
