//! Waste-sorting plant simulator and offline planners.
//!
//! * [`env`]: the deterministic plant (belt, sorting stations, containers,
//!   presses, bales) with a gym-style `reset`/`step` interface.
//! * [`baselines`]: random and rule-based policies.
//! * [`planners`]: frozen-seed rollouts, exhaustive search and a genetic
//!   algorithm over binary action sequences.
//! * [`demo`]: demonstration campaigns, filtering, export and validation.
//! * [`bench`]: multi-seed strategy comparison and plot data.
//! * [`cli`]: the `sortsim` command line.

pub mod baselines;
pub mod bench;
pub mod cli;
pub mod config;
pub mod demo;
pub mod env;
pub mod error;
pub mod planners;
pub mod rng;

pub use config::EnvConfig;
pub use env::{Action, EnvState, Observation, StepResult, Transition};
pub use error::{Error, Result};
