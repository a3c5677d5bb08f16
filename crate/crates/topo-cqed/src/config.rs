//! Run configuration: a TOML file with one table per parameter block.
//!
//! Every physical quantity is written in linear units (GHz, MHz, nH, μs) and
//! converted to rad/μs when the core parameter types are built. Angles are
//! given as multiples of π. A recipe supplies its own defaults; the file is
//! laid over them and `--set section.key=value` flags over that.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use topo_cqed_core::circuit::{CouplerCircuit, ResonatorCoupler};
use topo_cqed_core::dispersive::DispersiveParams;
use topo_cqed_core::scattering::ScatteringParams;
use topo_cqed_core::spectroscopy::{linspace, CavityParams, CouplingPreset};
use topo_cqed_core::units::{ghz, mhz};
use topo_cqed_core::ArrayParams;

/// Environment variable consulted for the seed when neither the command
/// line nor the config sets one.
pub const SEED_ENV: &str = "TOPO_CQED_SEED";

macro_rules! section {
    ($(#[$meta:meta])* $name:ident { $($(#[$fmeta:meta])* $field:ident : $ty:ty,)* }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            $(
                $(#[$fmeta])*
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<$ty>,
            )*
        }

        impl $name {
            /// Fields set in `top` win.
            pub fn overlay(self, top: Self) -> Self {
                Self { $($field: top.$field.or(self.$field),)* }
            }
        }
    };
}

section!(
    /// Qubit array.
    ArraySection {
        n_cells: usize,
        qubit_freq_ghz: f64,
        t0_mhz: f64,
        phi_over_pi: f64,
        /// Uniform qubit decay rate.
        gamma_mhz: f64,
        /// Per-qubit frequency offsets; overrides disorder sampling.
        offsets_mhz: Vec<f64>,
    }
);

section!(
    /// Cavity and its couplings to the qubits.
    CavitySection {
        cavity_freq_ghz: f64,
        kappa_mhz: f64,
        g0_mhz: f64,
        /// `homogeneous` or `alternating-sign-8`.
        coupling: String,
        /// Explicit per-qubit couplings; overrides `coupling`.
        g_mhz: Vec<f64>,
        drive_strength_mhz: f64,
    }
);

section!(
    /// Far-detuned cavity.
    DispersiveSection {
        g0_mhz: f64,
        /// `Δ0 = ω0 - ω_c`.
        detuning_mhz: f64,
        kappa_mhz: f64,
        include_decay: bool,
        /// 1-based site that starts excited.
        initial_site: usize,
    }
);

section!(
    /// Superatom rates in units of the waveguide decay `Γ_L`.
    ScatteringSection {
        j: f64,
        gamma_l: f64,
        gamma_r: f64,
    }
);

section!(
    /// Junction coupler between neighbouring qubits.
    CircuitSection {
        l_g_nh: f64,
        l_0_nh: f64,
        l_j_nh: f64,
        qubit_freq_ghz: f64,
        t0_mhz: f64,
        /// Cavity coupling used for the coupler-induced shift `δg`.
        g0_mhz: f64,
    }
);

section!(
    /// Junction coupler between a qubit and the resonator.
    ResonatorSection {
        lt_g_nh: f64,
        lt_0_nh: f64,
        l_c_nh: f64,
        cavity_freq_ghz: f64,
        delta_t_over_pi: f64,
    }
);

section!(
    /// Sampling grids.
    GridSection {
        phi_start_over_pi: f64,
        phi_stop_over_pi: f64,
        phi_points: usize,
        /// Drive frequency relative to the qubit frequency.
        drive_start_mhz: f64,
        drive_stop_mhz: f64,
        drive_points: usize,
        time_stop_us: f64,
        time_points: usize,
        /// Probe detuning in units of `Γ_L`.
        delta_start: f64,
        delta_stop: f64,
        delta_points: usize,
    }
);

section!(
    /// Static frequency disorder.
    DisorderSection {
        eps_mhz: f64,
        samples: usize,
    }
);

section!(
    /// Extra sweeps of the coupling spectrum.
    SweepSection {
        /// Array sizes for the edge-coupling sweep over the φ grid.
        n_cells: Vec<usize>,
        /// 1-based mode indices whose amplitudes are written out.
        modes: Vec<usize>,
    }
);

section!(
    /// Master-equation cross-check.
    OracleSection {
        photon_cutoff: usize,
        /// Drive amplitude as a fraction of κ.
        eta_over_kappa: f64,
    }
);

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub array: ArraySection,
    #[serde(default)]
    pub cavity: CavitySection,
    #[serde(default)]
    pub dispersive: DispersiveSection,
    #[serde(default)]
    pub scattering: ScatteringSection,
    #[serde(default)]
    pub circuit: CircuitSection,
    #[serde(default)]
    pub resonator: ResonatorSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub disorder: DisorderSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub oracle: OracleSection,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
    }

    /// Config built from `section.key=value` assignments. Values are parsed
    /// as TOML and fall back to plain strings.
    pub fn from_assignments(items: &[String]) -> Result<Self> {
        let mut root = toml::Table::new();
        for item in items {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("--set expects key=value, got `{item}`"))?;
            let value = parse_value(raw.trim());
            let path: Vec<&str> = key.trim().split('.').collect();
            let (last, parents) = path.split_last().expect("split yields one item");
            let mut table = &mut root;
            for p in parents {
                table = table
                    .entry(p.to_string())
                    .or_insert_with(|| toml::Value::Table(toml::Table::new()))
                    .as_table_mut()
                    .ok_or_else(|| anyhow!("--set {key}: `{p}` is not a table"))?;
            }
            table.insert(last.to_string(), value);
        }
        toml::Value::Table(root)
            .try_into()
            .map_err(|e| anyhow!("--set: {e}"))
    }

    pub fn overlay(self, top: Self) -> Self {
        Self {
            experiment: top.experiment.or(self.experiment),
            seed: top.seed.or(self.seed),
            output: top.output.or(self.output),
            array: self.array.overlay(top.array),
            cavity: self.cavity.overlay(top.cavity),
            dispersive: self.dispersive.overlay(top.dispersive),
            scattering: self.scattering.overlay(top.scattering),
            circuit: self.circuit.overlay(top.circuit),
            resonator: self.resonator.overlay(top.resonator),
            grid: self.grid.overlay(top.grid),
            disorder: self.disorder.overlay(top.disorder),
            sweep: self.sweep.overlay(top.sweep),
            oracle: self.oracle.overlay(top.oracle),
        }
    }

    /// Seed from the config, else the environment, else 0.
    pub fn resolved_seed(&self) -> Result<u64> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .with_context(|| format!("{SEED_ENV}=`{v}` is not an unsigned integer")),
            Err(_) => Ok(0),
        }
    }

    pub fn array(&self) -> Result<ArrayParams> {
        let a = &self.array;
        let mut p = ArrayParams::new(
            req(&a.n_cells, "array.n_cells")?,
            ghz(req(&a.qubit_freq_ghz, "array.qubit_freq_ghz")?),
            mhz(req(&a.t0_mhz, "array.t0_mhz")?),
            std::f64::consts::PI * req(&a.phi_over_pi, "array.phi_over_pi")?,
        )
        .context("[array]")?;
        if let Some(g) = a.gamma_mhz {
            p = p.with_uniform_decay(mhz(g)).context("array.gamma_mhz")?;
        }
        if let Some(off) = &a.offsets_mhz {
            p = p
                .with_offsets(off.iter().map(|x| mhz(*x)).collect())
                .context("array.offsets_mhz")?;
        }
        Ok(p)
    }

    /// Cavity couplings for an array of `n_sites` qubits; the drive sits at
    /// the cavity frequency until a grid moves it.
    pub fn cavity(&self, n_sites: usize) -> Result<CavityParams> {
        let c = &self.cavity;
        let cavity_freq = ghz(req(&c.cavity_freq_ghz, "cavity.cavity_freq_ghz")?);
        let coupling = match &c.g_mhz {
            Some(g) => g.iter().map(|x| mhz(*x)).collect(),
            None => {
                let name = req(&c.coupling, "cavity.coupling")?;
                let preset = CouplingPreset::from_name(&name).ok_or_else(|| {
                    anyhow!("cavity.coupling: unknown pattern `{name}` (homogeneous, alternating-sign-8)")
                })?;
                preset
                    .vector(n_sites, mhz(req(&c.g0_mhz, "cavity.g0_mhz")?))
                    .context("cavity.coupling")?
            }
        };
        let cav = CavityParams {
            cavity_freq,
            kappa: mhz(req(&c.kappa_mhz, "cavity.kappa_mhz")?),
            coupling,
            drive_freq: cavity_freq,
            drive_strength: mhz(c.drive_strength_mhz.unwrap_or(0.0)),
        };
        cav.validate_lossless(n_sites).context("[cavity]")?;
        Ok(cav)
    }

    pub fn dispersive(&self) -> Result<DispersiveParams> {
        let d = &self.dispersive;
        let p = DispersiveParams {
            g0: mhz(req(&d.g0_mhz, "dispersive.g0_mhz")?),
            detuning: mhz(req(&d.detuning_mhz, "dispersive.detuning_mhz")?),
            include_decay: req(&d.include_decay, "dispersive.include_decay")?,
            kappa: mhz(req(&d.kappa_mhz, "dispersive.kappa_mhz")?),
        };
        p.validate().context("[dispersive]")?;
        Ok(p)
    }

    pub fn scattering(&self) -> Result<ScatteringParams> {
        let s = &self.scattering;
        let p = ScatteringParams {
            j: req(&s.j, "scattering.j")?,
            gamma_l: req(&s.gamma_l, "scattering.gamma_l")?,
            gamma_r: req(&s.gamma_r, "scattering.gamma_r")?,
            big_gamma_l: 1.0,
        };
        p.validate().context("[scattering]")?;
        Ok(p)
    }

    pub fn circuit(&self) -> Result<CouplerCircuit> {
        let c = &self.circuit;
        CouplerCircuit::new(
            req(&c.l_g_nh, "circuit.l_g_nh")?,
            req(&c.l_0_nh, "circuit.l_0_nh")?,
            req(&c.l_j_nh, "circuit.l_j_nh")?,
            ghz(req(&c.qubit_freq_ghz, "circuit.qubit_freq_ghz")?),
        )
        .context("[circuit]")
    }

    pub fn resonator(&self) -> Result<ResonatorCoupler> {
        let r = &self.resonator;
        let rc = ResonatorCoupler {
            lt_g: req(&r.lt_g_nh, "resonator.lt_g_nh")?,
            lt_0: req(&r.lt_0_nh, "resonator.lt_0_nh")?,
            l_c: req(&r.l_c_nh, "resonator.l_c_nh")?,
            cavity_freq: ghz(req(&r.cavity_freq_ghz, "resonator.cavity_freq_ghz")?),
            delta_t: std::f64::consts::PI * req(&r.delta_t_over_pi, "resonator.delta_t_over_pi")?,
        };
        rc.validate().context("[resonator]")?;
        Ok(rc)
    }

    /// φ grid in radians.
    pub fn phi_grid(&self) -> Result<Vec<f64>> {
        let g = &self.grid;
        let pi = std::f64::consts::PI;
        Ok(linspace(
            pi * req(&g.phi_start_over_pi, "grid.phi_start_over_pi")?,
            pi * req(&g.phi_stop_over_pi, "grid.phi_stop_over_pi")?,
            positive(req(&g.phi_points, "grid.phi_points")?, "grid.phi_points")?,
        ))
    }

    /// Absolute drive frequencies in rad/μs around `qubit_freq`.
    pub fn drive_grid(&self, qubit_freq: f64) -> Result<Vec<f64>> {
        let g = &self.grid;
        Ok(linspace(
            qubit_freq + mhz(req(&g.drive_start_mhz, "grid.drive_start_mhz")?),
            qubit_freq + mhz(req(&g.drive_stop_mhz, "grid.drive_stop_mhz")?),
            positive(req(&g.drive_points, "grid.drive_points")?, "grid.drive_points")?,
        ))
    }

    pub fn time_grid(&self) -> Result<Vec<f64>> {
        let g = &self.grid;
        let stop = req(&g.time_stop_us, "grid.time_stop_us")?;
        if stop.is_nan() || stop <= 0.0 {
            bail!("grid.time_stop_us must be positive, got {stop}");
        }
        Ok(linspace(
            0.0,
            stop,
            positive(req(&g.time_points, "grid.time_points")?, "grid.time_points")?,
        ))
    }

    pub fn delta_grid(&self) -> Result<Vec<f64>> {
        let g = &self.grid;
        Ok(linspace(
            req(&g.delta_start, "grid.delta_start")?,
            req(&g.delta_stop, "grid.delta_stop")?,
            positive(req(&g.delta_points, "grid.delta_points")?, "grid.delta_points")?,
        ))
    }
}

pub(crate) fn req<T: Clone>(v: &Option<T>, key: &str) -> Result<T> {
    v.clone().ok_or_else(|| anyhow!("missing config key `{key}`"))
}

fn positive(n: usize, key: &str) -> Result<usize> {
    if n == 0 {
        bail!("{key} must be at least 1");
    }
    Ok(n)
}

fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_key_names_field_and_line() {
        let err = RunConfig::parse("[array]\nn_cells = 4\nn_cell = 5\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("n_cell"), "{msg}");
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn unknown_section_rejected() {
        assert!(RunConfig::parse("[arrays]\nn_cells = 4\n").is_err());
    }

    #[test]
    fn assignments_overlay_file() {
        let base = RunConfig::parse("seed = 3\n[array]\nn_cells = 4\nt0_mhz = 100.0\n").unwrap();
        let top = RunConfig::from_assignments(&[
            "array.n_cells=6".into(),
            "cavity.coupling=homogeneous".into(),
        ])
        .unwrap();
        let merged = base.overlay(top);
        assert_eq!(merged.array.n_cells, Some(6));
        assert_eq!(merged.array.t0_mhz, Some(100.0));
        assert_eq!(merged.cavity.coupling.as_deref(), Some("homogeneous"));
        assert_eq!(merged.seed, Some(3));
    }

    #[test]
    fn bad_assignment_type() {
        assert!(RunConfig::from_assignments(&["array.n_cells=\"six\"".into()]).is_err());
        assert!(RunConfig::from_assignments(&["array.n_cells".into()]).is_err());
    }

    #[test]
    fn units_converted() {
        let cfg = RunConfig::parse(
            "[array]\nn_cells = 2\nqubit_freq_ghz = 6.0\nt0_mhz = 100.0\nphi_over_pi = 0.25\ngamma_mhz = 0.02\n",
        )
        .unwrap();
        let a = cfg.array().unwrap();
        assert!((a.qubit_freq - 2.0 * std::f64::consts::PI * 6000.0).abs() < 1e-9);
        assert!((a.phi - 0.25 * std::f64::consts::PI).abs() < 1e-15);
        assert!((a.qubit_decays[3] - 2.0 * std::f64::consts::PI * 0.02).abs() < 1e-15);
    }

    #[test]
    fn missing_key_reported() {
        let err = RunConfig::default().array().unwrap_err();
        assert!(err.to_string().contains("array.n_cells"));
    }
}
