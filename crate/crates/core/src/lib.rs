//! Campaign economics for LLM-assisted vulnerability discovery.

pub mod cli;
pub mod cost;
pub mod error;
pub mod io;
pub mod lint;
pub mod metrics;
pub mod model;
pub mod sensitivity;
pub mod sim;

pub use error::{Error, ExitClass, Result};
