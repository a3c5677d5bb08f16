//! Runnable experiments on top of `topo-cqed-core`: TOML configs in
//! linear units, named recipes, deterministic CSV output with a JSON
//! sidecar, and the acceptance suite.
//!
//! ```no_run
//! use topo_cqed::recipes::Experiment;
//!
//! let cfg = Experiment::Scattering.defaults();
//! let out = Experiment::Scattering.run(&cfg, 0).unwrap();
//! println!("{}", out.summary["regime"]);
//! ```

pub mod acceptance;
pub mod check;
pub mod cli;
pub mod config;
pub mod output;
pub mod recipes;

pub use config::RunConfig;
pub use recipes::Experiment;
