//! Orchestration layer: configuration, file IO, the end-to-end pipeline,
//! report emission, and the synthetic-corpus generator.
//!
//! All analytics live in `botscope-core`; this crate only moves bytes,
//! sequences the stages, and keeps every output byte-deterministic for a
//! given configuration and input, regardless of the thread count.

pub mod config;
pub mod fixture;
pub mod io;
pub mod par;
pub mod pipeline;
pub mod report;

pub use config::{PipelineConfig, Stage};
pub use fixture::{generate_fixture, FixtureTargets, GraphTargets, MissingSplit};
pub use pipeline::{run_pipeline, PipelineError, ReportBundle};
