//! Polar code construction from the command line and from Rust.
//!
//! Wraps [`polarforge_core`] with channel descriptions (`bsc:p`, `bec:e`,
//! `file:path`), a versioned JSON design document, parallel per-index
//! construction and the parameter sweeps behind the `polarforge` binary.

pub mod channel_spec;
pub mod cli;
pub mod document;
mod error;
pub mod runner;
pub mod sweep;

pub use channel_spec::ChannelSpec;
pub use document::DesignDocument;
pub use error::Error;
pub use polarforge_core as core;
pub use runner::{design, thread_count, with_pool, DesignOptions};
