//! Named experiments. Each one carries default parameters as a TOML
//! snippet and turns a resolved [`RunConfig`] into CSV tables.

use anyhow::{bail, Result};

use crate::config::RunConfig;
use crate::output::Artifacts;

pub mod circuit_design;
pub mod coupling_spectrum;
pub mod disorder_ensemble;
pub mod oracle_check;
pub mod rabi_dynamics;
pub mod scattering;
pub mod spectroscopy_map;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    SpectroscopyMap,
    CouplingSpectrum,
    RabiDynamics,
    Scattering,
    CircuitDesign,
    DisorderEnsemble,
    OracleCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::SpectroscopyMap,
        Experiment::CouplingSpectrum,
        Experiment::RabiDynamics,
        Experiment::Scattering,
        Experiment::CircuitDesign,
        Experiment::DisorderEnsemble,
        Experiment::OracleCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SpectroscopyMap => "spectroscopy-map",
            Experiment::CouplingSpectrum => "coupling-spectrum",
            Experiment::RabiDynamics => "rabi-dynamics",
            Experiment::Scattering => "scattering",
            Experiment::CircuitDesign => "circuit-design",
            Experiment::DisorderEnsemble => "disorder-ensemble",
            Experiment::OracleCheck => "oracle-check",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    pub fn defaults_toml(self) -> &'static str {
        match self {
            Experiment::SpectroscopyMap => spectroscopy_map::DEFAULTS,
            Experiment::CouplingSpectrum => coupling_spectrum::DEFAULTS,
            Experiment::RabiDynamics => rabi_dynamics::DEFAULTS,
            Experiment::Scattering => scattering::DEFAULTS,
            Experiment::CircuitDesign => circuit_design::DEFAULTS,
            Experiment::DisorderEnsemble => disorder_ensemble::DEFAULTS,
            Experiment::OracleCheck => oracle_check::DEFAULTS,
        }
    }

    pub fn defaults(self) -> RunConfig {
        RunConfig::parse(self.defaults_toml()).expect("built-in defaults parse")
    }

    /// Lay `user` over the defaults, refusing a config written for another
    /// experiment.
    pub fn resolve(self, user: RunConfig) -> Result<RunConfig> {
        if let Some(name) = user.experiment.as_deref() {
            if name != self.name() {
                bail!("config is for experiment `{name}`, not `{}`", self.name());
            }
        }
        let mut cfg = self.defaults().overlay(user);
        cfg.experiment = Some(self.name().to_string());
        Ok(cfg)
    }

    pub fn run(self, cfg: &RunConfig, seed: u64) -> Result<Artifacts> {
        match self {
            Experiment::SpectroscopyMap => spectroscopy_map::run(cfg, seed),
            Experiment::CouplingSpectrum => coupling_spectrum::run(cfg, seed),
            Experiment::RabiDynamics => rabi_dynamics::run(cfg, seed),
            Experiment::Scattering => scattering::run(cfg, seed),
            Experiment::CircuitDesign => circuit_design::run(cfg, seed),
            Experiment::DisorderEnsemble => disorder_ensemble::run(cfg, seed),
            Experiment::OracleCheck => oracle_check::run(cfg, seed),
        }
    }
}
