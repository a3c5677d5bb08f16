//! Edge-state vacuum Rabi splitting under random qubit-frequency offsets.

use anyhow::Result;
use rayon::prelude::*;
use serde_json::json;
use topo_cqed_core::spectroscopy::{
    central_peak, disorder_sample, find_rabi_peaks, reflection_spectrum, CavityParams, Peak,
    RabiPeaks,
};
use topo_cqed_core::units::{mhz, to_mhz};
use topo_cqed_core::ArrayParams;

use crate::config::{req, RunConfig};
use crate::output::{num, Artifacts, Table};

pub const DEFAULTS: &str = r#"
# 36 qubits at φ = 0.2π with the cavity on resonance with the qubits;
# ten samples of ±2 MHz uniform disorder
[array]
n_cells = 18
qubit_freq_ghz = 6.0
t0_mhz = 100.0
phi_over_pi = 0.2
gamma_mhz = 0.02

[cavity]
cavity_freq_ghz = 6.0
kappa_mhz = 10.0
g0_mhz = 5.0
coupling = "homogeneous"

[disorder]
eps_mhz = 2.0
samples = 10

[grid]
drive_start_mhz = -20.0
drive_stop_mhz = 20.0
drive_points = 4001
"#;

/// Central transmission maxima count as a transparency feature when they
/// exceed the clean spectrum at the qubit frequency by this factor.
pub const TRANSPARENCY_CONTRAST: f64 = 10.0;

#[derive(Debug, Clone)]
pub struct Sample {
    pub seed: u64,
    pub transmission: Vec<f64>,
    pub peaks: RabiPeaks,
    /// Highest local maximum within `eps` of the qubit frequency.
    pub central: Option<Peak>,
}

impl Sample {
    pub fn transparent(&self, threshold: f64) -> bool {
        self.central.is_some_and(|p| p.height > threshold)
    }
}

#[derive(Debug, Clone)]
pub struct Ensemble {
    pub drive_grid: Vec<f64>,
    pub clean: Vec<f64>,
    pub clean_peaks: RabiPeaks,
    /// Clean transmission at the qubit frequency.
    pub clean_center: f64,
    pub samples: Vec<Sample>,
}

impl Ensemble {
    pub fn threshold(&self) -> f64 {
        TRANSPARENCY_CONTRAST * self.clean_center
    }

    pub fn resolvable(&self) -> usize {
        self.samples.iter().filter(|s| s.peaks.resolvable).count()
    }

    pub fn transparent(&self) -> usize {
        let th = self.threshold();
        self.samples.iter().filter(|s| s.transparent(th)).count()
    }
}

fn transmission(array: &ArrayParams, cav: &CavityParams, grid: &[f64]) -> Result<Vec<f64>> {
    Ok(reflection_spectrum(array, cav, grid)?
        .into_iter()
        .map(|r| r.transmission)
        .collect())
}

/// Clean spectrum plus one sample per seed; `eps` in rad/μs.
pub fn ensemble(
    array: &ArrayParams,
    cav: &CavityParams,
    eps: f64,
    seeds: &[u64],
    grid: &[f64],
) -> Result<Ensemble> {
    let clean = transmission(array, cav, grid)?;
    let clean_peaks = find_rabi_peaks(grid, &clean)?;
    let center = array.qubit_freq;
    let clean_center = transmission(array, cav, &[center])?[0];
    let samples = seeds
        .par_iter()
        .map(|&seed| -> Result<Sample> {
            let a = disorder_sample(array, eps, seed)?;
            let t = transmission(&a, cav, grid)?;
            Ok(Sample {
                seed,
                peaks: find_rabi_peaks(grid, &t)?,
                central: central_peak(grid, &t, center, eps)?,
                transmission: t,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble {
        drive_grid: grid.to_vec(),
        clean,
        clean_peaks,
        clean_center,
        samples,
    })
}

pub fn run(cfg: &RunConfig, seed: u64) -> Result<Artifacts> {
    let array = cfg.array()?;
    let cav = cfg.cavity(array.n_sites())?;
    let eps = mhz(req(&cfg.disorder.eps_mhz, "disorder.eps_mhz")?);
    let n = req(&cfg.disorder.samples, "disorder.samples")?;
    let seeds: Vec<u64> = (0..n as u64).map(|i| seed.wrapping_add(i)).collect();
    let grid = cfg.drive_grid(array.qubit_freq)?;
    let ens = ensemble(&array, &cav, eps, &seeds, &grid)?;

    let mut header = vec!["omega_l_MHz".to_string(), "T_clean".to_string()];
    header.extend(ens.samples.iter().map(|s| format!("T_seed_{}", s.seed)));
    let mut spectra = Table::with_header(header);
    for (k, w) in grid.iter().enumerate() {
        let mut row = vec![num(to_mhz(*w)), num(ens.clean[k])];
        row.extend(ens.samples.iter().map(|s| num(s.transmission[k])));
        spectra.push(row);
    }

    let mut peaks = Table::new(&[
        "seed",
        "lower_MHz",
        "upper_MHz",
        "splitting_MHz",
        "resolvable",
        "central_MHz",
        "central_T",
    ])
    .named("peaks");
    let th = ens.threshold();
    for s in &ens.samples {
        let (lo, hi) = s
            .peaks
            .dominant
            .map(|(a, b)| (to_mhz(a.position), to_mhz(b.position)))
            .unwrap_or((f64::NAN, f64::NAN));
        let (cw, ch) = s
            .central
            .map(|p| (to_mhz(p.position), p.height))
            .unwrap_or((f64::NAN, f64::NAN));
        peaks.push(vec![
            s.seed.to_string(),
            num(lo),
            num(hi),
            num(hi - lo),
            s.peaks.resolvable.to_string(),
            num(cw),
            num(ch),
        ]);
    }

    Ok(Artifacts::new(
        vec![spectra, peaks],
        json!({
            "clean_splitting_MHz": ens.clean_peaks.splitting.map(to_mhz),
            "clean_resolvable": ens.clean_peaks.resolvable,
            "clean_center_T": ens.clean_center,
            "resolvable_samples": ens.resolvable(),
            "transparent_samples": ens.transparent(),
            "transparency_threshold": th,
            "samples": ens.samples.len(),
        }),
    ))
}
