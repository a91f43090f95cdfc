//! Verification runner, report formats and function evaluation behind the
//! `ellhyp` binary.

pub mod config;
pub mod eval;
pub mod output;
pub mod parse;
pub mod registry;
pub mod run;

pub use config::{Class, RunConfig};
pub use run::{all_pass, run_verify, Record};
