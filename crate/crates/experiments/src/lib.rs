pub mod cli;
pub mod config;
pub mod desk;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod parallel;
pub mod report;
pub mod svg;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use report::{Check, ExperimentReport, Value};
