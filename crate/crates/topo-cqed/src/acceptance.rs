//! The acceptance suite: ten criteria, each a list of numeric checks with
//! fixed tolerances.

use std::f64::consts::PI;

use serde::Serialize;
use topo_cqed_core::circuit::{
    delta_for_flux, design_point, flux_for_delta, frequency_shifts, CouplerCircuit,
};
use topo_cqed_core::dispersive::{
    effective_hamiltonian_qubits, evolve_excitation, measure_oscillation_period, DispersiveParams,
};
use topo_cqed_core::lattice::{
    analytic_bulk_state, analytic_edge_states, eigensystem, mode_momentum, ModeClass,
};
use topo_cqed_core::scattering::{
    classify_transparency, susceptibility_from_transmission, transmission_amplitude, Regime,
    ScatteringParams,
};
use topo_cqed_core::spectroscopy::{disorder_sample, linspace};
use topo_cqed_core::units::{ghz, mhz, to_mhz};
use topo_cqed_core::{ArrayParams, Complex64};

use crate::check::{all_passed, Check};
use crate::recipes::{disorder_ensemble, oracle_check, Experiment};

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && all_passed(&self.checks)
    }

    /// `[PASS] 3 Rabi splitting (2/2 checks)`, with failing checks appended.
    pub fn line(&self) -> String {
        let ok = self.checks.iter().filter(|c| c.passed).count();
        let mut s = format!(
            "[{}] {:>2} {} ({ok}/{} checks)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.checks.len()
        );
        for c in self.checks.iter().filter(|c| !c.passed) {
            s.push_str(&format!("; {c}"));
        }
        s
    }
}

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    checks: fn() -> Vec<Check>,
}

impl Criterion {
    pub fn evaluate(&self) -> Outcome {
        Outcome {
            id: self.id,
            title: self.title,
            checks: (self.checks)(),
        }
    }
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, title: "coupling coefficients", checks: coupling_coefficients },
    Criterion { id: 2, title: "edge coupling law", checks: edge_coupling_law },
    Criterion { id: 3, title: "vacuum Rabi splitting", checks: rabi_splitting },
    Criterion { id: 4, title: "disorder robustness", checks: disorder_robustness },
    Criterion { id: 5, title: "master-equation agreement", checks: oracle_agreement },
    Criterion { id: 6, title: "edge-state Rabi period", checks: edge_rabi_period },
    Criterion { id: 7, title: "bandgap influence", checks: bandgap_influence },
    Criterion { id: 8, title: "waveguide scattering", checks: waveguide_scattering },
    Criterion { id: 9, title: "circuit map", checks: circuit_map },
    Criterion { id: 10, title: "property suites", checks: property_suites },
];

pub fn criterion(id: u8) -> &'static Criterion {
    CRITERIA.iter().find(|c| c.id == id).expect("criterion id in 1..=10")
}

macro_rules! attempt {
    ($checks:ident, $name:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => {
                $checks.push(Check::error($name, err));
                return $checks;
            }
        }
    };
}

fn array(n: usize, phi: f64) -> ArrayParams {
    ArrayParams::new(n, ghz(6.0), mhz(100.0), phi).expect("valid array")
}

fn coupling_coefficients() -> Vec<Check> {
    let mut out = Vec::new();
    let s = attempt!(out, "eigensystem N=18", eigensystem(&array(18, PI / 5.0)));
    let odd = s
        .modes
        .iter()
        .filter(|m| !m.class.is_edge() && m.index % 2 == 1)
        .map(|m| m.coupling.abs())
        .fold(0.0f64, f64::max);
    out.push(Check::below("max |xi_j| over odd bulk modes", odd, 1e-8));
    let (a, b) = (s.mode(18).coupling, s.mode(19).coupling);
    out.push(Check::near("xi_18", a, (PI / 5.0).cos().sqrt(), 1e-2));
    out.push(Check::below("|xi_18 - xi_19|", (a - b).abs(), 1e-6));
    out.push(Check::near("sum xi_j^2", s.coupling_weight(), 36.0, 1e-9));
    out
}

fn edge_coupling_law() -> Vec<Check> {
    let mut out = Vec::new();
    let phis = linspace(0.0, 0.45 * PI, 46);
    let mut worst = 0.0f64;
    for &phi in &phis {
        let s = attempt!(out, "eigensystem N=78", eigensystem(&array(78, phi)));
        let law = phi.cos().sqrt();
        for j in [78, 79] {
            worst = worst.max((s.mode(j).coupling.abs() - law).abs());
        }
    }
    out.push(Check::below("N=78 max |xi_edge - sqrt(cos phi)|", worst, 1e-3));

    let (mut even_dev, mut odd_max, mut hybridized) = (0.0f64, 0.0f64, 0usize);
    for &phi in &phis {
        let s = attempt!(out, "eigensystem N=6", eigensystem(&array(6, phi)));
        let Some(pair) = s.edge_pair.filter(|p| p.hybridized) else {
            continue;
        };
        hybridized += 1;
        for j in [pair.lower, pair.upper] {
            let m = s.mode(j);
            match m.class {
                ModeClass::EdgeHybridEven => {
                    even_dev = even_dev.max((m.coupling.abs() - (2.0 * phi.cos()).sqrt()).abs())
                }
                ModeClass::EdgeHybridOdd => odd_max = odd_max.max(m.coupling.abs()),
                _ => {}
            }
        }
    }
    out.push(Check::flag(
        "N=6 hybridized points",
        hybridized > 0,
        format!("{hybridized} of {} grid points hybridized", phis.len()),
    ));
    out.push(Check::below("N=6 max |xi_even - sqrt(2 cos phi)|", even_dev, 1e-2));
    out.push(Check::below("N=6 max |xi_odd|", odd_max, 1e-6));
    out
}

fn rabi_ensemble(eps_mhz: f64, samples: u64) -> anyhow::Result<disorder_ensemble::Ensemble> {
    let cfg = Experiment::DisorderEnsemble.defaults();
    let a = cfg.array()?;
    let cav = cfg.cavity(a.n_sites())?;
    let seeds: Vec<u64> = (0..samples).collect();
    disorder_ensemble::ensemble(&a, &cav, mhz(eps_mhz), &seeds, &cfg.drive_grid(a.qubit_freq)?)
}

fn rabi_splitting() -> Vec<Check> {
    let mut out = Vec::new();
    let ens = attempt!(out, "clean spectrum", rabi_ensemble(0.0, 0));
    let expected = 2.0 * 1.27 * 5.0;
    let split = ens.clean_peaks.splitting.map(to_mhz).unwrap_or(f64::NAN);
    out.push(Check::flag("two resolvable peaks", ens.clean_peaks.resolvable, "Rayleigh dip"));
    out.push(Check::relative("splitting [MHz]", split, expected, 0.10));
    out
}

fn disorder_robustness() -> Vec<Check> {
    let mut out = Vec::new();
    let ens = attempt!(out, "disorder ensemble", rabi_ensemble(2.0, 10));
    out.push(Check::within(
        "samples with resolvable Rabi peaks",
        ens.resolvable() as f64,
        9.0,
        10.0,
    ));
    out.push(Check::within(
        "samples with a central transparency peak",
        ens.transparent() as f64,
        6.0,
        10.0,
    ));
    out
}

fn oracle_agreement() -> Vec<Check> {
    let mut out = Vec::new();
    let cfg = Experiment::OracleCheck.defaults();
    let setup = (|| -> anyhow::Result<_> {
        let a = cfg.array()?;
        let cav = cfg.cavity(a.n_sites())?;
        let grid = cfg.drive_grid(a.qubit_freq)?;
        let eta = cav.kappa / 100.0;
        oracle_check::compare(&a, &cav, 2, eta, &grid)
    })();
    let points = attempt!(out, "oracle sweep", setup);
    out.push(Check::flag("41-point grid", points.len() == 41, "41 drive frequencies"));
    out.extend(oracle_check::checks(&points));
    out
}

fn edge_trace_coupling(n: usize, phi: f64, t0: f64, include_decay: bool) -> anyhow::Result<(f64, f64)> {
    let a = ArrayParams::new(n, ghz(6.0), t0, phi)?.with_uniform_decay(mhz(0.02))?;
    let d = DispersiveParams {
        g0: mhz(5.0),
        detuning: mhz(50.0),
        include_decay,
        kappa: mhz(10.0),
    };
    let h = effective_hamiltonian_qubits(&a, &d)?;
    let trace = evolve_excitation(&h, 1, &linspace(0.0, 3.0, 3001))?;
    let osc = measure_oscillation_period(&trace, 1)?;
    Ok((osc.period, to_mhz(osc.coupling)))
}

fn edge_rabi_period() -> Vec<Check> {
    let mut out = Vec::new();
    let (period, j) = attempt!(out, "N=6 dynamics", edge_trace_coupling(6, 0.1 * PI, mhz(100.0), false));
    out.push(Check::relative("period T [us]", period, 1.04, 0.05));
    out.push(Check::relative("J_est [MHz]", j, 0.48, 0.05));
    for n in [10, 14] {
        let (p, _) = attempt!(out, format!("N={n} dynamics"), edge_trace_coupling(n, 0.1 * PI, mhz(100.0), false));
        out.push(Check::relative(format!("T(N={n}) / T(N=6)"), p / period, 1.0, 0.05));
    }
    out
}

fn bandgap_influence() -> Vec<Check> {
    let mut out = Vec::new();
    for phi in [0.05 * PI, 0.1 * PI, 0.2 * PI] {
        let law = to_mhz(phi.cos() * mhz(5.0) * mhz(5.0) / mhz(50.0));
        let name = format!("J_est(t0=10 MHz, phi={:.2}pi) [MHz]", phi / PI);
        let (_, j) = attempt!(out, name.clone(), edge_trace_coupling(6, phi, mhz(10.0), false));
        out.push(Check::below(name, j, law));
    }
    out
}

fn waveguide_scattering() -> Vec<Check> {
    let mut out = Vec::new();
    let base = ScatteringParams {
        j: 0.0,
        gamma_l: 0.15,
        gamma_r: 5e-4,
        big_gamma_l: 1.0,
    };
    let t0 = transmission_amplitude(0.0, &base).norm_sqr();
    out.push(Check::near("|t(0)|^2 at J=0", t0, (0.15f64 / 1.15).powi(2), 1e-10));

    let weak = base.with_j(0.035);
    let tw = transmission_amplitude(0.0, &weak).norm_sqr();
    out.push(Check::flag(
        "transparency at J=0.035",
        tw > t0 && tw > transmission_amplitude(0.01, &weak).norm_sqr(),
        "|t(0)|^2 rises above J=0 and is a local maximum",
    ));
    let tr = attempt!(out, "classify J=0.035", classify_transparency(&weak));
    out.push(Check::flag(
        "opposite-sign Im peaks at J=0.035",
        tr.regime == Regime::Interference,
        format!("regime {}", tr.regime.label()),
    ));
    let strong = attempt!(out, "classify J=0.075", classify_transparency(&base.with_j(0.075)));
    out.push(Check::flag(
        "positive Im peaks at J=0.075",
        strong.regime == Regime::Splitting,
        format!("regime {}", strong.regime.label()),
    ));
    out.push(Check::below(
        "peak distance at J=0.035",
        tr.peak_distance.unwrap_or(f64::NAN),
        2.0 * 0.035,
    ));
    out
}

fn circuit_map() -> Vec<Check> {
    let mut out = Vec::new();
    let c = attempt!(out, "circuit", CouplerCircuit::new(0.25, 0.566, 8.34, ghz(6.0)));
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for phi in linspace(0.0, PI, 181) {
        let d = attempt!(out, "design point", design_point(&c, mhz(100.0), phi));
        lo = lo.min(d.delta_t1.min(d.delta_t2));
        hi = hi.max(d.delta_t1.max(d.delta_t2));
    }
    out.push(Check::within("min delta / pi", lo / PI, 0.5, 0.9));
    out.push(Check::within("max delta / pi", hi / PI, 0.5, 0.9));
    let mut worst = 0.0f64;
    for delta in linspace(0.5 * PI, 0.9 * PI, 401) {
        let back = attempt!(out, "flux inversion", delta_for_flux(&c, flux_for_delta(&c, delta)));
        worst = worst.max(((back - delta) / delta).abs());
    }
    out.push(Check::below("flux round trip relative error", worst, 1e-10));
    let dg = frequency_shifts(0.0, mhz(100.0), mhz(5.0), ghz(6.0)).delta_g;
    out.push(Check::near("delta_g [MHz]", to_mhz(dg), -0.083, 5e-4));
    out
}

fn property_suites() -> Vec<Check> {
    let mut out = Vec::new();
    let phis = [0.0, 0.1 * PI, 0.25 * PI, 0.45 * PI, 0.5 * PI, 0.7 * PI, PI];

    let (mut chiral, mut parseval) = (0.0f64, 0.0f64);
    for n in 1..=12 {
        for (k, &phi) in phis.iter().enumerate() {
            let clean = array(n, phi);
            let dirty = attempt!(out, "disorder", disorder_sample(&clean, mhz(3.0), k as u64));
            let e = attempt!(out, "eigensystem", eigensystem(&clean)).energies();
            let m = e.len();
            for i in 0..m {
                chiral = chiral.max(((e[i] - clean.qubit_freq) + (e[m - 1 - i] - clean.qubit_freq)).abs());
            }
            for p in [&clean, &dirty] {
                let s = attempt!(out, "eigensystem", eigensystem(p));
                parseval = parseval.max((s.coupling_weight() - 2.0 * n as f64).abs());
            }
        }
    }
    out.push(Check::below("chiral symmetry defect [rad/us]", chiral, 1e-9 * mhz(100.0)));
    out.push(Check::below("Parseval defect", parseval, 1e-9));

    let (mut bulk, mut edge) = (1.0f64, 1.0f64);
    for n in [5, 10, 18] {
        for phi in [0.1 * PI, 0.2 * PI, 0.3 * PI] {
            let p = array(n, phi);
            let s = attempt!(out, "eigensystem", eigensystem(&p));
            for j in (1..n).chain(n + 2..=2 * n) {
                let km = attempt!(out, "momentum", mode_momentum(&p, j));
                let v = attempt!(out, "bulk state", analytic_bulk_state(&p, &km));
                bulk = bulk.min(dot(&v, &s.mode(j).amplitudes).abs());
            }
            if n >= 10 {
                let (l, r) = attempt!(out, "edge states", analytic_edge_states(&p));
                for v in [&l, &r] {
                    let w = dot(v, &s.mode(n).amplitudes).powi(2)
                        + dot(v, &s.mode(n + 1).amplitudes).powi(2);
                    edge = edge.min(w);
                }
            }
        }
    }
    out.push(Check::below("1 - min bulk overlap", 1.0 - bulk, 1e-6));
    out.push(Check::below("1 - min edge-pair weight", 1.0 - edge, 1e-4));

    let (mut t_max, mut round) = (0.0f64, 0.0f64);
    for j in [0.0, 0.035, 0.075, 0.5, 2.0] {
        for gl in [0.0, 0.15, 1.0] {
            for gr in [0.0, 5e-4, 0.3] {
                let sp = ScatteringParams { j, gamma_l: gl, gamma_r: gr, big_gamma_l: 1.0 };
                for d in linspace(-3.0, 3.0, 241) {
                    let t = transmission_amplitude(d, &sp);
                    t_max = t_max.max(t.norm());
                    if t.norm() > 1e-6 {
                        let chi = attempt!(out, "chi", susceptibility_from_transmission(t));
                        let one = Complex64::new(1.0, 0.0);
                        round = round.max((one / (one - Complex64::i() * chi) - t).norm());
                    }
                }
            }
        }
    }
    out.push(Check::below("max |t| - 1", t_max - 1.0, 1e-12));
    out.push(Check::below("chi <-> t round trip", round, 1e-12));

    let mut norm = 0.0f64;
    for n in [1, 3, 6] {
        for &phi in &phis {
            let a = array(n, phi);
            let d = DispersiveParams { g0: mhz(5.0), detuning: mhz(50.0), include_decay: false, kappa: mhz(10.0) };
            let h = attempt!(out, "hamiltonian", effective_hamiltonian_qubits(&a, &d));
            let tr = attempt!(out, "evolution", evolve_excitation(&h, 1, &linspace(0.0, 5.0, 101)));
            norm = norm.max(tr.norm.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max));
        }
    }
    out.push(Check::below("norm drift, Hermitian evolution", norm, 1e-9));
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Evaluate every criterion (in parallel) in id order.
pub fn run_all() -> Vec<Outcome> {
    use rayon::prelude::*;
    CRITERIA.par_iter().map(Criterion::evaluate).collect()
}
