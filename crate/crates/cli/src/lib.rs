//! File formats, emitters and the command-line front end for `affectq-core`.
//!
//! Scenarios and network configurations are JSON documents; trajectories and
//! reports are written as CSV or JSON with a fixed field order.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod emit;
pub mod error;
pub mod network_file;
pub mod scenario_file;

pub use commands::{fixtures_dir, run, run_from_args, Cli, FIXTURES_ENV};
pub use error::{CliError, Result};
pub use network_file::{parse_network_file, parse_network_str, run_network, NetworkConfig};
pub use scenario_file::{parse_scenario_file, parse_scenario_str, scenario_to_json, ScenarioDoc};
