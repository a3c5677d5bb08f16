//! Brute-force Lindblad master equation for the cavity and up to two unit
//! cells, used to check the linearized and dispersive reductions.
//!
//! Basis states are `|n⟩ ⊗ |q⟩` with photon number `n` and qubit bitmask `q`
//! (bit `s` set when qubit `s` is excited); the flat index is
//! `n 2^(2N) + q`. Density matrices are column-stacked when vectorized, so
//! `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;

use crate::lattice::{coupling_matrix, ArrayParams};
use crate::linalg::{hermitian_eigen, lu_solve, max_abs};
use crate::spectroscopy::CavityParams;
use crate::{Error, Result};

/// Largest Hilbert-space dimension the oracle accepts.
pub const MAX_DIMENSION: usize = 48;

/// Reflection change above which a doubled photon cutoff counts as a
/// failure.
pub const CUTOFF_TOL: f64 = 1.0e-4;

type CMat = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSystem {
    pub array: ArrayParams,
    pub cavity: CavityParams,
    pub photon_cutoff: usize,
}

impl TruncatedSystem {
    pub fn new(array: ArrayParams, cavity: CavityParams, photon_cutoff: usize) -> Result<Self> {
        let sys = Self {
            array,
            cavity,
            photon_cutoff,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        self.array.validate()?;
        self.cavity.validate_lossless(self.array.n_sites())?;
        if self.array.n_cells > 2 {
            return Err(Error::InvalidParams(format!(
                "the oracle handles at most 2 unit cells, got {}",
                self.array.n_cells
            )));
        }
        if self.photon_cutoff == 0 {
            return Err(Error::InvalidParams("photon cutoff must be at least 1".into()));
        }
        if self.dimension() > MAX_DIMENSION {
            return Err(Error::InvalidParams(format!(
                "Hilbert dimension {} exceeds {MAX_DIMENSION}",
                self.dimension()
            )));
        }
        Ok(())
    }

    fn qubit_states(&self) -> usize {
        1 << self.array.n_sites()
    }

    /// `(cutoff + 1) 2^(2N)`.
    pub fn dimension(&self) -> usize {
        (self.photon_cutoff + 1) * self.qubit_states()
    }

    pub fn with_cutoff(&self, photon_cutoff: usize) -> Self {
        Self {
            photon_cutoff,
            ..self.clone()
        }
    }

    /// Flat index of `|photons⟩ ⊗ |mask⟩`.
    pub fn index(&self, photons: usize, mask: usize) -> usize {
        photons * self.qubit_states() + mask
    }

    /// Photon annihilation operator.
    pub fn annihilation(&self) -> CMat {
        let d = self.dimension();
        let q = self.qubit_states();
        let mut a = CMat::zeros(d, d);
        for n in 1..=self.photon_cutoff {
            for mask in 0..q {
                a[(self.index(n - 1, mask), self.index(n, mask))] = c((n as f64).sqrt());
            }
        }
        a
    }

    /// Lowering operator of qubit `site` (0-based).
    pub fn lowering(&self, site: usize) -> CMat {
        let d = self.dimension();
        let q = self.qubit_states();
        let mut s = CMat::zeros(d, d);
        for n in 0..=self.photon_cutoff {
            for mask in (0..q).filter(|m| m & (1 << site) != 0) {
                s[(self.index(n, mask ^ (1 << site)), self.index(n, mask))] = c(1.0);
            }
        }
        s
    }

    /// Rotating-frame Hamiltonian at the drive frequency:
    /// `Δc a†a + Σ (Δq + ε) σ⁺σ⁻ + Σ g (σ⁺a + a†σ⁻) + Σ D σ⁺σ⁻ + iη(a† - a)`.
    pub fn hamiltonian(&self) -> CMat {
        let a = self.annihilation();
        let ad = a.adjoint();
        let n_sites = self.array.n_sites();
        let lower: Vec<CMat> = (0..n_sites).map(|s| self.lowering(s)).collect();
        let raise: Vec<CMat> = lower.iter().map(|s| s.adjoint()).collect();
        let dc = self.cavity.cavity_freq - self.cavity.drive_freq;
        let dq = self.array.qubit_freq - self.cavity.drive_freq;
        let hop = coupling_matrix(&self.array);

        let mut h = &ad * &a * c(dc);
        for s in 0..n_sites {
            h += &raise[s] * &lower[s] * c(dq + self.array.frequency_offsets[s]);
            let g = self.cavity.coupling[s];
            if g != 0.0 {
                h += (&raise[s] * &a + &ad * &lower[s]) * c(g);
            }
            for t in 0..n_sites {
                if hop[(s, t)] != 0.0 {
                    h += &raise[s] * &lower[t] * c(hop[(s, t)]);
                }
            }
        }
        h += (&ad - &a) * Complex64::new(0.0, self.cavity.drive_strength);
        h
    }

    /// Jump operators `sqrt(κ) a` and `sqrt(γ_s) σ_s`.
    pub fn jump_operators(&self) -> Vec<CMat> {
        let mut ops = Vec::new();
        if self.cavity.kappa > 0.0 {
            ops.push(self.annihilation() * c(self.cavity.kappa.sqrt()));
        }
        for (s, gamma) in self.array.qubit_decays.iter().enumerate() {
            if *gamma > 0.0 {
                ops.push(self.lowering(s) * c(gamma.sqrt()));
            }
        }
        ops
    }

    /// Pure density matrix of `|photons⟩ ⊗ |mask⟩`.
    pub fn basis_density(&self, photons: usize, mask: usize) -> CMat {
        let d = self.dimension();
        let mut rho = CMat::zeros(d, d);
        let i = self.index(photons, mask);
        rho[(i, i)] = c(1.0);
        rho
    }
}

/// Column-stacked Liouvillian.
pub fn liouvillian(sys: &TruncatedSystem) -> CMat {
    let d = sys.dimension();
    let id = CMat::identity(d, d);
    let h = sys.hamiltonian();
    let i = Complex64::i();
    let mut l = (id.kronecker(&h) - h.transpose().kronecker(&id)) * (-i);
    for op in sys.jump_operators() {
        let ldl = op.adjoint() * &op;
        l += op.conjugate().kronecker(&op);
        l -= id.kronecker(&ldl) * c(0.5);
        l -= ldl.transpose().kronecker(&id) * c(0.5);
    }
    l
}

/// Checks of a density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physicality {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl Physicality {
    pub fn of(rho: &CMat) -> Result<Self> {
        let d = rho.nrows();
        let trace: Complex64 = (0..d).map(|i| rho[(i, i)]).sum();
        let herm = (rho + rho.adjoint()) * c(0.5);
        let (values, _) = hermitian_eigen(&herm)?;
        Ok(Self {
            trace_error: (trace - c(1.0)).norm(),
            hermiticity_error: max_abs(&(rho - rho.adjoint())),
            min_eigenvalue: values.first().copied().unwrap_or(0.0),
        })
    }

    pub fn is_physical(&self) -> bool {
        self.trace_error < 1e-10 && self.hermiticity_error < 1e-9 && self.min_eigenvalue > -1e-9
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSteadyState {
    pub rho: CMat,
    /// `⟨a⟩`.
    pub field: Complex64,
    /// `1 - |κ⟨a⟩ / (2η)|²`.
    pub reflection: f64,
    /// `max |L vec(ρ)|`.
    pub residual: f64,
    pub physicality: Physicality,
    /// Change of the reflection when the photon cutoff is doubled, if
    /// checked.
    pub cutoff_shift: Option<f64>,
}

/// Stationary state by a direct solve of `L vec(ρ) = 0` with the first
/// row replaced by the trace condition. The cavity field is mapped to a
/// reflection as `1 - |κ⟨a⟩/(2η)|²`, the same normalization the linearized
/// response uses.
pub fn lindblad_steady_state(sys: &TruncatedSystem, check_cutoff: bool) -> Result<OracleSteadyState> {
    sys.validate()?;
    sys.cavity.validate(sys.array.n_sites())?;
    let eta = sys.cavity.drive_strength;
    if !(eta > 0.0) {
        return Err(Error::Domain {
            name: "drive_strength",
            value: eta,
            expected: "eta > 0 to define a reflection",
        });
    }
    if eta > sys.cavity.kappa / 50.0 {
        log::warn!("η > κ/50: the oracle leaves the low-excitation regime");
    }
    let (rho, residual) = stationary_density(sys)?;
    let field = expectation(&sys.annihilation(), &rho);
    let reflection = 1.0 - (field * sys.cavity.kappa / (2.0 * eta)).norm_sqr();
    let physicality = Physicality::of(&rho)?;

    let cutoff_shift = if check_cutoff {
        let doubled = sys.with_cutoff(2 * sys.photon_cutoff);
        if doubled.dimension() > MAX_DIMENSION {
            log::warn!(
                "cutoff check skipped: doubled dimension {} exceeds {MAX_DIMENSION}",
                doubled.dimension()
            );
            None
        } else {
            let (rho2, _) = stationary_density(&doubled)?;
            let f2 = expectation(&doubled.annihilation(), &rho2);
            let r2 = 1.0 - (f2 * sys.cavity.kappa / (2.0 * eta)).norm_sqr();
            let shift = (r2 - reflection).abs();
            if shift > CUTOFF_TOL {
                return Err(Error::CutoffNotConverged { shift });
            }
            Some(shift)
        }
    } else {
        None
    };

    Ok(OracleSteadyState {
        rho,
        field,
        reflection,
        residual,
        physicality,
        cutoff_shift,
    })
}

fn stationary_density(sys: &TruncatedSystem) -> Result<(CMat, f64)> {
    let d = sys.dimension();
    let l = liouvillian(sys);
    let mut m = l.clone();
    for col in 0..d * d {
        m[(0, col)] = c(0.0);
    }
    for i in 0..d {
        m[(0, i + i * d)] = c(1.0);
    }
    let mut rhs = DVector::<Complex64>::zeros(d * d);
    rhs[0] = c(1.0);
    let x = lu_solve(m, &rhs, "stationary Liouvillian")?;
    let r = &l * &x;
    let residual = r.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let scale = max_abs(&l).max(1.0);
    if residual > 1e-10 * scale {
        return Err(Error::NoConvergence {
            what: "stationary Liouvillian solve",
            iterations: 1,
            residual,
        });
    }
    let rho = CMat::from_column_slice(d, d, x.as_slice());
    Ok((rho, residual))
}

fn expectation(op: &CMat, rho: &CMat) -> Complex64 {
    (op * rho).trace()
}

/// Expectation traces of a time evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladTrace {
    pub times: Vec<f64>,
    /// `⟨σ⁺σ⁻⟩` per qubit; rows follow `times`.
    pub qubit_populations: DMatrix<f64>,
    pub photon_number: Vec<f64>,
    pub physicality: Vec<Physicality>,
}

/// Step-size control of the Dormand-Prince integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 2_000_000,
        }
    }
}

/// Integrate the master equation from `rho0` and record the traces at
/// `times` (ascending, starting at or after 0).
pub fn lindblad_evolve(
    sys: &TruncatedSystem,
    rho0: &CMat,
    times: &[f64],
    opts: &IntegratorOptions,
) -> Result<LindbladTrace> {
    sys.validate()?;
    let d = sys.dimension();
    if rho0.shape() != (d, d) {
        return Err(Error::InvalidParams("initial density matrix has the wrong shape".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|t| *t < 0.0) {
        return Err(Error::InvalidParams("times must be ascending and non-negative".into()));
    }
    let h = sys.hamiltonian();
    let jumps = sys.jump_operators();
    let mut h_eff = h.clone();
    for op in &jumps {
        h_eff -= op.adjoint() * op * Complex64::new(0.0, 0.5);
    }
    let h_eff_adj = h_eff.adjoint();
    let minus_i = -Complex64::i();
    let rhs = |rho: &CMat| -> CMat {
        let mut out = (&h_eff * rho - rho * &h_eff_adj) * minus_i;
        for op in &jumps {
            out += op * rho * op.adjoint();
        }
        out
    };

    let n_sites = sys.array.n_sites();
    let numbers: Vec<CMat> = (0..n_sites)
        .map(|s| {
            let l = sys.lowering(s);
            l.adjoint() * l
        })
        .collect();
    let a = sys.annihilation();
    let photon_op = a.adjoint() * &a;

    let mut rho = rho0.clone();
    let mut t = 0.0;
    let span = times.last().copied().unwrap_or(0.0).max(1e-300);
    let mut step = span * 1e-3;
    let mut steps = 0usize;
    let mut pops = DMatrix::<f64>::zeros(times.len(), n_sites);
    let mut photons = Vec::with_capacity(times.len());
    let mut phys = Vec::with_capacity(times.len());

    for (row, &target) in times.iter().enumerate() {
        while t < target {
            let h_try = step.min(target - t);
            let (next, err) = dopri_step(&rhs, &rho, h_try);
            let scale = opts.atol + opts.rtol * max_abs(&rho).max(max_abs(&next));
            let ratio = err / scale;
            if ratio <= 1.0 {
                t = if h_try == target - t { target } else { t + h_try };
                rho = next;
            }
            let factor = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            step = h_try * factor;
            steps += 1;
            if step < 1e-14 * span || steps > opts.max_steps {
                return Err(Error::Integrator { time: t, step });
            }
        }
        for s in 0..n_sites {
            pops[(row, s)] = expectation(&numbers[s], &rho).re;
        }
        photons.push(expectation(&photon_op, &rho).re);
        phys.push(Physicality::of(&rho)?);
    }
    Ok(LindbladTrace {
        times: times.to_vec(),
        qubit_populations: pops,
        photon_number: photons,
        physicality: phys,
    })
}

/// One Dormand-Prince 5(4) step; returns the fifth-order state and the
/// largest entry of the embedded error estimate.
fn dopri_step(f: &impl Fn(&CMat) -> CMat, y: &CMat, h: f64) -> (CMat, f64) {
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    const E1: f64 = 71.0 / 57600.0;
    const E3: f64 = -71.0 / 16695.0;
    const E4: f64 = 71.0 / 1920.0;
    const E5: f64 = -17253.0 / 339200.0;
    const E6: f64 = 22.0 / 525.0;
    const E7: f64 = -1.0 / 40.0;

    let hc = |x: f64| c(h * x);
    let k1 = f(y);
    let k2 = f(&(y + &k1 * hc(A21)));
    let k3 = f(&(y + &k1 * hc(A31) + &k2 * hc(A32)));
    let k4 = f(&(y + &k1 * hc(A41) + &k2 * hc(A42) + &k3 * hc(A43)));
    let k5 = f(&(y + &k1 * hc(A51) + &k2 * hc(A52) + &k3 * hc(A53) + &k4 * hc(A54)));
    let k6 = f(&(y + &k1 * hc(A61) + &k2 * hc(A62) + &k3 * hc(A63) + &k4 * hc(A64) + &k5 * hc(A65)));
    let next = y + &k1 * hc(B1) + &k3 * hc(B3) + &k4 * hc(B4) + &k5 * hc(B5) + &k6 * hc(B6);
    let k7 = f(&next);
    let err = &k1 * hc(E1) + &k3 * hc(E3) + &k4 * hc(E4) + &k5 * hc(E5) + &k6 * hc(E6) + &k7 * hc(E7);
    (next, max_abs(&err))
}

/// Hamiltonian of the cavity and array restricted to one excitation, in the
/// basis `(photon, qubit 1, ..., qubit 2N)`, rotating at the drive
/// frequency. The drive is left out.
pub fn single_excitation_hamiltonian(sys: &TruncatedSystem) -> CMat {
    let n = sys.array.n_sites();
    let hop = coupling_matrix(&sys.array);
    let dq = sys.array.qubit_freq - sys.cavity.drive_freq;
    let mut h = CMat::zeros(n + 1, n + 1);
    h[(0, 0)] = c(sys.cavity.cavity_freq - sys.cavity.drive_freq);
    for s in 0..n {
        h[(s + 1, s + 1)] = c(dq + sys.array.frequency_offsets[s]);
        h[(0, s + 1)] = c(sys.cavity.coupling[s]);
        h[(s + 1, 0)] = c(sys.cavity.coupling[s]);
        for t in 0..n {
            if s != t {
                h[(s + 1, t + 1)] = c(hop[(s, t)]);
            }
        }
    }
    h
}

/// Bitmask with only qubit `site` (0-based) excited.
pub fn single_qubit_mask(site: usize) -> usize {
    1 << site
}

/// Convenience: initial state with one photon-free excitation on `site`.
pub fn excited_qubit(sys: &TruncatedSystem, site: usize) -> CMat {
    sys.basis_density(0, single_qubit_mask(site))
}

/// Populations `⟨σ⁺σ⁻⟩` of every qubit in a density matrix.
pub fn qubit_populations(sys: &TruncatedSystem, rho: &CMat) -> Vec<f64> {
    (0..sys.array.n_sites())
        .map(|s| {
            let l = sys.lowering(s);
            expectation(&(l.adjoint() * l), rho).re
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::dispersive::{
        effective_hamiltonian_qubits, evolve_excitation, measure_oscillation_period,
        DispersiveParams, DynamicsTrace, Propagator,
    };
    use crate::spectroscopy::{linspace, steady_state_reflection};
    use crate::units::{ghz, mhz};
    use core::f64::consts::PI;

    fn dimer(g: [f64; 2], drive: f64) -> TruncatedSystem {
        let array = ArrayParams::new(1, ghz(6.0), mhz(100.0), 0.25 * PI)
            .unwrap()
            .with_uniform_decay(mhz(0.02))
            .unwrap();
        let cavity = CavityParams {
            cavity_freq: ghz(6.0),
            kappa: mhz(10.0),
            coupling: g.to_vec(),
            drive_freq: drive,
            drive_strength: mhz(0.1),
        };
        TruncatedSystem::new(array, cavity, 2).unwrap()
    }

    #[test]
    fn operators() {
        let sys = dimer([0.0; 2], ghz(6.0));
        assert_eq!(sys.dimension(), 12);
        let a = sys.annihilation();
        let comm = &a * a.adjoint() - a.adjoint() * &a;
        // [a, a†] = 1 below the cutoff
        for n in 0..2 {
            for q in 0..4 {
                let i = sys.index(n, q);
                assert!((comm[(i, i)] - c(1.0)).norm() < 1e-14);
            }
        }
        let s0 = sys.lowering(0);
        assert_eq!(s0[(sys.index(1, 0b10), sys.index(1, 0b11))], c(1.0));
        assert_eq!(s0[(sys.index(1, 0b00), sys.index(1, 0b10))], c(0.0));
    }

    #[test]
    fn size_limits() {
        let sys = dimer([0.0; 2], ghz(6.0));
        let big = ArrayParams::new(3, 0.0, 1.0, 0.2).unwrap();
        let cav = CavityParams {
            coupling: vec![0.0; 6],
            ..sys.cavity.clone()
        };
        assert!(TruncatedSystem::new(big, cav, 1).is_err());
        let two = ArrayParams::new(2, 0.0, 1.0, 0.2).unwrap();
        let cav = CavityParams {
            coupling: vec![0.0; 4],
            ..sys.cavity.clone()
        };
        assert!(TruncatedSystem::new(two.clone(), cav.clone(), 2).is_ok());
        assert!(TruncatedSystem::new(two, cav, 3).is_err());
        assert!(TruncatedSystem::new(sys.array.clone(), sys.cavity.clone(), 0).is_err());
    }

    #[test]
    fn bare_cavity_reflects_nothing_on_resonance() {
        let sys = dimer([0.0; 2], ghz(6.0));
        let ss = lindblad_steady_state(&sys, false).unwrap();
        // the only error is the photon truncation of the coherent state
        assert!(ss.reflection.abs() < 1e-6);
        let finer = lindblad_steady_state(&sys.with_cutoff(4), false).unwrap();
        assert!(finer.reflection.abs() < 1e-3 * ss.reflection.abs());
        assert!(ss.physicality.trace_error < 1e-10);
        assert!(ss.physicality.is_physical());
    }

    #[test]
    fn agrees_with_linear_response() {
        let g = mhz(5.0);
        for detune in linspace(-200.0, 200.0, 9) {
            let sys = dimer([-g, g], ghz(6.0) + mhz(detune));
            let ss = lindblad_steady_state(&sys, false).unwrap();
            let lin = steady_state_reflection(&sys.array, &sys.cavity).unwrap();
            assert!((ss.reflection - lin.reflection).abs() < 1e-3, "{detune}");
            assert!(ss.physicality.is_physical());
        }
    }

    #[test]
    fn cutoff_doubling() {
        let g = mhz(5.0);
        let sys = dimer([-g, g], ghz(6.0) + mhz(30.0));
        let ss = lindblad_steady_state(&sys, true).unwrap();
        assert!(ss.cutoff_shift.unwrap() < CUTOFF_TOL);
    }

    #[test]
    fn zero_drive_is_rejected() {
        let mut sys = dimer([0.0; 2], ghz(6.0));
        sys.cavity.drive_strength = 0.0;
        assert!(lindblad_steady_state(&sys, false).is_err());
    }

    #[test]
    fn closed_evolution_matches_single_excitation_propagation() {
        let g = mhz(5.0);
        let mut sys = dimer([g, g], ghz(6.0) + mhz(7.0));
        sys.cavity.drive_strength = 0.0;
        sys.cavity.kappa = 0.0;
        sys.array.qubit_decays = vec![0.0; 2];
        sys.photon_cutoff = 1;
        let times = linspace(0.0, 0.05, 11);
        let trace =
            lindblad_evolve(&sys, &excited_qubit(&sys, 0), &times, &IntegratorOptions::default())
                .unwrap();
        let exact = evolve_excitation(&single_excitation_hamiltonian(&sys), 2, &times).unwrap();
        for r in 0..times.len() {
            for s in 0..2 {
                let want = exact.populations[(r, s + 1)];
                assert!((trace.qubit_populations[(r, s)] - want).abs() < 1e-8);
            }
            assert!((trace.photon_number[r] - exact.populations[(r, 0)]).abs() < 1e-8);
            assert!(trace.physicality[r].trace_error < 1e-9);
        }
    }

    #[test]
    fn dispersive_exchange_matches() {
        // two uncoupled qubits (t1 = 0) exchange through the detuned cavity
        let (g0, d0) = (1.0, 20.0);
        let array = ArrayParams::new(1, d0, 1.0, 0.0).unwrap();
        let cavity = CavityParams {
            cavity_freq: 0.0,
            kappa: 0.0,
            coupling: vec![g0; 2],
            drive_freq: 0.0,
            drive_strength: 0.0,
        };
        let sys = TruncatedSystem::new(array.clone(), cavity, 1).unwrap();
        let j = g0 * g0 / d0;
        let times = linspace(0.0, 1.5 * PI / j, 1501);
        let trace =
            lindblad_evolve(&sys, &excited_qubit(&sys, 0), &times, &IntegratorOptions::default())
                .unwrap();
        let full = DynamicsTrace {
            times: times.clone(),
            populations: trace.qubit_populations.clone(),
            norm: vec![1.0; times.len()],
            propagator: Propagator::Spectral,
        };
        let measured = measure_oscillation_period(&full, 1).unwrap().coupling;

        let disp = DispersiveParams {
            g0,
            detuning: d0,
            include_decay: false,
            kappa: 0.0,
        };
        let h = effective_hamiltonian_qubits(&array, &disp).unwrap();
        let eff = evolve_excitation(&h, 1, &times).unwrap();
        let predicted = measure_oscillation_period(&eff, 1).unwrap().coupling;
        assert!((predicted - j).abs() < 1e-3 * j);
        let ratio = (g0 / d0).powi(2);
        assert!((measured - predicted).abs() < 4.0 * ratio * predicted);
    }
}
