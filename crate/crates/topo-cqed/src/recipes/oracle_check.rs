//! Linearized reflection against the full master-equation steady state on a
//! dimer plus cavity.

use anyhow::Result;
use rayon::prelude::*;
use serde_json::json;
use topo_cqed_core::oracle::{lindblad_steady_state, TruncatedSystem};
use topo_cqed_core::spectroscopy::{steady_state_reflection, CavityParams};
use topo_cqed_core::units::to_mhz;
use topo_cqed_core::ArrayParams;

use crate::check::{all_passed, Check};
use crate::config::{req, RunConfig};
use crate::output::{num, Artifacts, Table};

pub const DEFAULTS: &str = r#"
# one unit cell with couplings g0 (-1, 1), drive across ω0 ± 2 t0
[array]
n_cells = 1
qubit_freq_ghz = 6.0
t0_mhz = 100.0
phi_over_pi = 0.25
gamma_mhz = 0.02

[cavity]
cavity_freq_ghz = 6.0
kappa_mhz = 10.0
g_mhz = [-5.0, 5.0]

[oracle]
photon_cutoff = 2
eta_over_kappa = 0.01

[grid]
drive_start_mhz = -200.0
drive_stop_mhz = 200.0
drive_points = 41
"#;

/// Bound on `|R_linear - R_oracle|`.
pub const AGREEMENT_TOL: f64 = 1e-3;
/// Bound on the change of `R_oracle` when η is halved.
pub const ETA_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct OraclePoint {
    pub drive: f64,
    pub linear: f64,
    pub oracle: f64,
    pub oracle_half_eta: f64,
    pub physical: bool,
    pub cutoff_shift: Option<f64>,
}

/// Both reflections on every drive frequency of `grid`.
pub fn compare(
    array: &ArrayParams,
    cav: &CavityParams,
    cutoff: usize,
    eta: f64,
    grid: &[f64],
) -> Result<Vec<OraclePoint>> {
    grid.par_iter()
        .map(|w| -> Result<OraclePoint> {
            let mut c = cav.at_drive(*w);
            c.drive_strength = eta;
            let sys = TruncatedSystem::new(array.clone(), c.clone(), cutoff)?;
            let full = lindblad_steady_state(&sys, true)?;
            let mut half = sys.clone();
            half.cavity.drive_strength = 0.5 * eta;
            let halved = lindblad_steady_state(&half, false)?;
            Ok(OraclePoint {
                drive: *w,
                linear: steady_state_reflection(array, &c)?.reflection,
                oracle: full.reflection,
                oracle_half_eta: halved.reflection,
                physical: full.physicality.is_physical() && halved.physicality.is_physical(),
                cutoff_shift: full.cutoff_shift,
            })
        })
        .collect()
}

pub fn checks(points: &[OraclePoint]) -> Vec<Check> {
    let max = |f: &dyn Fn(&OraclePoint) -> f64| points.iter().map(f).fold(0.0f64, f64::max);
    let mut out = vec![
        Check::below(
            "max |R_linear - R_oracle|",
            max(&|p| (p.linear - p.oracle).abs()),
            AGREEMENT_TOL,
        ),
        Check::below(
            "max |R_oracle(η) - R_oracle(η/2)|",
            max(&|p| (p.oracle - p.oracle_half_eta).abs()),
            ETA_TOL,
        ),
        Check::flag(
            "density matrices physical",
            points.iter().all(|p| p.physical),
            "trace 1, Hermitian, positive",
        ),
    ];
    if points.iter().any(|p| p.cutoff_shift.is_some()) {
        out.push(Check::below(
            "max cutoff-doubling shift",
            max(&|p| p.cutoff_shift.unwrap_or(0.0)),
            topo_cqed_core::oracle::CUTOFF_TOL,
        ));
    }
    out
}

pub fn run(cfg: &RunConfig, _seed: u64) -> Result<Artifacts> {
    let array = cfg.array()?;
    let cav = cfg.cavity(array.n_sites())?;
    let cutoff = req(&cfg.oracle.photon_cutoff, "oracle.photon_cutoff")?;
    let eta = cav.kappa * req(&cfg.oracle.eta_over_kappa, "oracle.eta_over_kappa")?;
    let grid = cfg.drive_grid(array.qubit_freq)?;
    let points = compare(&array, &cav, cutoff, eta, &grid)?;

    let mut table = Table::new(&[
        "omega_l_MHz",
        "R_linear",
        "R_oracle",
        "R_oracle_half_eta",
        "abs_diff",
    ]);
    for p in &points {
        table.push(vec![
            num(to_mhz(p.drive)),
            num(p.linear),
            num(p.oracle),
            num(p.oracle_half_eta),
            num((p.linear - p.oracle).abs()),
        ]);
    }
    let checks = checks(&points);
    let mut art = Artifacts::new(vec![table], json!({ "checks": checks }));
    art.ok = all_passed(&checks);
    Ok(art)
}
