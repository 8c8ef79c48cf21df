//! Command-line front end and JSON-over-HTTP service for the pattern compiler.

pub mod cli;
pub mod server;
pub mod service;

pub use cli::run_cli;
pub use service::{Response, Service};
