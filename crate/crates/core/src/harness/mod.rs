//! Configuration, match and tournament runners, traces, calibration and
//! rendering.

pub mod calibrate;
pub mod config;
pub mod render;
pub mod runner;
pub mod tournament;

pub use config::{prepare, MatchConfig, MatchSetup};
pub use runner::{play_config, replay, run_match, MatchResult, RunError, Trace};
