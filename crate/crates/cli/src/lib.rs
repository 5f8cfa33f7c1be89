//! Configuration and run driver behind the `elastica` binary.

pub mod config;
pub mod run;
