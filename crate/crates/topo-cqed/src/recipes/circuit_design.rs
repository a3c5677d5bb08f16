//! Junction phases and flux biases that realize `t1, t2` along a φ sweep.

use anyhow::Result;
use serde_json::json;
use topo_cqed_core::circuit::{design_point, frequency_shifts, qubit_resonator_coupling};
use topo_cqed_core::units::{mhz, to_mhz};

use crate::config::{req, RunConfig};
use crate::output::{num, Artifacts, Table};

pub const DEFAULTS: &str = r#"
# junction coupler with L_g = 0.25 nH, L_0 = 0.566 nH, L_J = 8.34 nH
[circuit]
l_g_nh = 0.25
l_0_nh = 0.566
l_j_nh = 8.34
qubit_freq_ghz = 6.0
t0_mhz = 100.0
g0_mhz = 5.0

# illustrative resonator coupler; only feeds the constant `g` column
[resonator]
lt_g_nh = 0.3
lt_0_nh = 0.6
l_c_nh = 2.0
cavity_freq_ghz = 6.5
delta_t_over_pi = 0.3

[grid]
phi_start_over_pi = 0.0
phi_stop_over_pi = 1.0
phi_points = 101
"#;

pub fn run(cfg: &RunConfig, _seed: u64) -> Result<Artifacts> {
    let circuit = cfg.circuit()?;
    let t0 = mhz(req(&cfg.circuit.t0_mhz, "circuit.t0_mhz")?);
    let g = qubit_resonator_coupling(&cfg.resonator()?, circuit.qubit_freq)?;
    let phis = cfg.phi_grid()?;

    let mut table = Table::new(&["phi", "delta_t1", "delta_t2", "phi_ext_t1", "phi_ext_t2", "g"]);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for phi in &phis {
        let d = design_point(&circuit, t0, *phi)?;
        lo = lo.min(d.delta_t1.min(d.delta_t2));
        hi = hi.max(d.delta_t1.max(d.delta_t2));
        table.push(vec![
            num(*phi),
            num(d.delta_t1),
            num(d.delta_t2),
            num(d.phi_ext_t1),
            num(d.phi_ext_t2),
            num(to_mhz(g)),
        ]);
    }

    let g0 = mhz(req(&cfg.circuit.g0_mhz, "circuit.g0_mhz")?);
    let shifts = frequency_shifts(0.0, t0, g0, circuit.qubit_freq);
    Ok(Artifacts::new(
        vec![table],
        json!({
            "c0": circuit.c0(),
            "unique_flux_inversion": circuit.has_unique_inversion(),
            "delta_min_over_pi": lo / std::f64::consts::PI,
            "delta_max_over_pi": hi / std::f64::consts::PI,
            "delta_g_MHz": to_mhz(shifts.delta_g),
            "bulk_shift_MHz": to_mhz(shifts.bulk_shift),
            "resonator_g_MHz": to_mhz(g),
        }),
    ))
}
