//! Experiment runners, output writers and input parsing behind the `matcurv`
//! command-line tool.

pub mod checks;
pub mod emit;
pub mod error;
pub mod experiments;
pub mod input;
pub mod record;
pub mod svg;

pub use emit::{emit, render, Format};
pub use error::CliError;
pub use record::{Cell, ExperimentId, ExperimentRecord};
