//! Josephson-coupler circuits mapped onto model couplings.
//!
//! Inductances are in nH, currents in μA and fluxes in nH·μA (1e-15 Wb).

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_traits::Float;

use crate::lattice::ArrayParams;
use crate::roots::{bracketed_newton, sign_change_brackets};
use crate::{Error, Result};

/// Magnetic flux quantum `h / 2e` in nH·μA.
pub const FLUX_QUANTUM: f64 = 2.067_833_848;

/// Relative size below which a circuit denominator counts as a pole.
const POLE_TOL: f64 = 1.0e-12;

/// Qubit-qubit coupler built from a single junction between two grounding
/// inductors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerCircuit {
    /// Grounding inductance `L_g`.
    pub l_g: f64,
    /// Junction inductance scale `L_0 = Phi_0 / (2 pi I_0)`.
    pub l_0: f64,
    /// Qubit inductance `L_J`.
    pub l_j: f64,
    /// Qubit frequency ω0 in rad/μs.
    pub qubit_freq: f64,
}

impl CouplerCircuit {
    pub fn new(l_g: f64, l_0: f64, l_j: f64, qubit_freq: f64) -> Result<Self> {
        for (name, value) in [("L_g", l_g), ("L_0", l_0), ("L_J", l_j), ("qubit_freq", qubit_freq)] {
            if !(value > 0.0) {
                return Err(Error::Domain {
                    name,
                    value,
                    expected: "> 0",
                });
            }
        }
        Ok(Self {
            l_g,
            l_0,
            l_j,
            qubit_freq,
        })
    }

    /// `c0 = L_0 / (2 L_g)`.
    pub fn c0(&self) -> f64 {
        self.l_0 / (2.0 * self.l_g)
    }

    /// The flux-to-phase map is single valued when `c0 > 1`.
    pub fn has_unique_inversion(&self) -> bool {
        self.c0() > 1.0
    }

    /// Junction critical current `I_0 = Phi_0 / (2 pi L_0)` in μA.
    pub fn critical_current(&self) -> f64 {
        FLUX_QUANTUM / (2.0 * PI * self.l_0)
    }

    /// Flux unit `2 L_g I_0` that makes the external flux dimensionless.
    pub fn flux_unit(&self) -> f64 {
        2.0 * self.l_g * self.critical_current()
    }
}

/// Which sign of the coupling the inversion targets. `Positive` puts the
/// junction phase in `(pi/2, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignBranch {
    #[default]
    Positive,
    Negative,
}

/// `t = -(ω0/2) L_g^2 / ((L_J + L_g)(2 L_g + L_0 / cos δ))`.
pub fn junction_coupling(c: &CouplerCircuit, delta: f64) -> Result<f64> {
    let cos = delta.cos();
    if cos == 0.0 {
        return Ok(0.0);
    }
    let series = 2.0 * c.l_g + c.l_0 / cos;
    if series.abs() <= POLE_TOL * (2.0 * c.l_g + c.l_0) {
        return Err(Error::Singular(alloc::format!(
            "junction coupling pole at delta = {delta}"
        )));
    }
    Ok(-0.5 * c.qubit_freq * c.l_g * c.l_g / ((c.l_j + c.l_g) * series))
}

/// Junction phase giving a coupling of magnitude `|t_target|` with the sign
/// chosen by `branch`.
pub fn delta_for_coupling(c: &CouplerCircuit, t_target: f64, branch: SignBranch) -> Result<f64> {
    if t_target == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let t = match branch {
        SignBranch::Positive => t_target.abs(),
        SignBranch::Negative => -t_target.abs(),
    };
    let inner = 2.0 * c.l_g / c.l_0
        + c.qubit_freq * c.l_g * c.l_g / (2.0 * t * c.l_0 * (c.l_j + c.l_g));
    let argument = -1.0 / inner;
    if !(-1.0..=1.0).contains(&argument) {
        return Err(Error::UnreachableCoupling {
            target: t_target,
            argument,
        });
    }
    Ok(argument.acos())
}

/// Dimensionless external flux `φ_ext = c0 δ + sin δ`.
pub fn flux_for_delta(c: &CouplerCircuit, delta: f64) -> f64 {
    c.c0() * delta + delta.sin()
}

/// External flux in nH·μA for a junction phase.
pub fn physical_flux_for_delta(c: &CouplerCircuit, delta: f64) -> f64 {
    flux_for_delta(c, delta) * c.flux_unit()
}

/// Inverse of [`flux_for_delta`]. Every root lies in
/// `[(φ_ext - 1)/c0, (φ_ext + 1)/c0]`; for `c0 <= 1` the map may fold and
/// several roots are reported as an error.
pub fn delta_for_flux(c: &CouplerCircuit, phi_ext: f64) -> Result<f64> {
    let c0 = c.c0();
    let f = |d: f64| (c0 * d + d.sin() - phi_ext, c0 + d.cos());
    let lo = (phi_ext - 1.0) / c0;
    let hi = (phi_ext + 1.0) / c0;
    if c0 > 1.0 {
        return bracketed_newton(f, lo, hi, 1e-15);
    }
    let mut roots: Vec<f64> = sign_change_brackets(|d| f(d).0, lo, hi, 4096)
        .into_iter()
        .map(|(a, b)| bracketed_newton(f, a, b, 1e-15))
        .collect::<Result<_>>()?;
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    match roots.len() {
        1 => Ok(roots[0]),
        0 => Err(Error::NoConvergence {
            what: "flux relation",
            iterations: 4096,
            residual: f64::NAN,
        }),
        _ => Err(Error::AmbiguousFlux {
            roots: roots.into_iter().filter(|d| *d > 0.0 && *d < PI).collect(),
        }),
    }
}

/// Junction phases and fluxes realizing `t1 = t0(1 - cos φ)` and
/// `t2 = t0(1 + cos φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignPoint {
    pub phi: f64,
    pub delta_t1: f64,
    pub delta_t2: f64,
    pub phi_ext_t1: f64,
    pub phi_ext_t2: f64,
}

pub fn design_point(c: &CouplerCircuit, t0: f64, phi: f64) -> Result<DesignPoint> {
    let (t1, t2) = crate::lattice::couplings_from_phi(t0, phi)?;
    let delta_t1 = delta_for_coupling(c, t1, SignBranch::Positive)?;
    let delta_t2 = delta_for_coupling(c, t2, SignBranch::Positive)?;
    Ok(DesignPoint {
        phi,
        delta_t1,
        delta_t2,
        phi_ext_t1: flux_for_delta(c, delta_t1),
        phi_ext_t2: flux_for_delta(c, delta_t2),
    })
}

/// `t_AB (1 + t_A^2 / (Δ0 t_AB))` for a coupler qubit detuned by Δ0.
pub fn coupler_qubit_effective_coupling(t_ab: f64, t_a: f64, detuning: f64) -> Result<f64> {
    if detuning == 0.0 {
        return Err(Error::Singular("coupler qubit on resonance (detuning = 0)".into()));
    }
    if (t_a / detuning).abs() > 0.3 {
        log::warn!(
            "coupler ratio |t_A/Δ0| = {:.3} is outside the dispersive regime",
            (t_a / detuning).abs()
        );
    }
    Ok(t_ab + t_a * t_a / detuning)
}

/// Tunable-junction coupler between a qubit and the resonator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorCoupler {
    pub lt_g: f64,
    pub lt_0: f64,
    /// Resonator inductance.
    pub l_c: f64,
    /// Cavity frequency ω_c in rad/μs.
    pub cavity_freq: f64,
    /// Junction phase δ̃.
    pub delta_t: f64,
}

impl ResonatorCoupler {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("Lt_g", self.lt_g),
            ("Lt_0", self.lt_0),
            ("L_c", self.l_c),
            ("cavity_freq", self.cavity_freq),
        ] {
            if !(value > 0.0) {
                return Err(Error::Domain {
                    name,
                    value,
                    expected: "> 0",
                });
            }
        }
        Ok(())
    }

    /// Junction inductance `L_1A = L̃_0 / cos δ̃`.
    pub fn junction_inductance(&self) -> f64 {
        self.lt_0 / self.delta_t.cos()
    }

    /// Effective mutual inductance `M̃ = L̃_g^2 / (2 L̃_g + L_1A)`.
    pub fn mutual_inductance(&self) -> Result<f64> {
        let cos = self.delta_t.cos();
        if cos == 0.0 {
            return Ok(0.0);
        }
        let series = 2.0 * self.lt_g + self.lt_0 / cos;
        if series.abs() <= POLE_TOL * (2.0 * self.lt_g + self.lt_0) {
            return Err(Error::Singular(alloc::format!(
                "mutual inductance pole at delta = {}",
                self.delta_t
            )));
        }
        Ok(self.lt_g * self.lt_g / series)
    }
}

/// `g = -(M̃/2) sqrt(ω0 ω_c / |(L̃_g + L_1A)(L̃_g + L_c)|)`.
pub fn qubit_resonator_coupling(rc: &ResonatorCoupler, qubit_freq: f64) -> Result<f64> {
    rc.validate()?;
    let m = rc.mutual_inductance()?;
    if m == 0.0 {
        return Ok(0.0);
    }
    let branch = rc.lt_g + rc.junction_inductance();
    if branch.abs() <= POLE_TOL * (rc.lt_g + rc.lt_0) {
        return Err(Error::Singular("qubit branch inductance vanishes".into()));
    }
    let loads = (branch * (rc.lt_g + rc.l_c)).abs();
    Ok(-0.5 * m * (qubit_freq * rc.cavity_freq / loads).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyShifts {
    /// Shift from one coupler of strength `t`: `-t`.
    pub delta_omega: f64,
    /// Shift of an interior SSH qubit: `-(t1 + t2) = -2 t0`.
    pub bulk_shift: f64,
    /// Change of the cavity coupling: `-t0 g0 / ω0`.
    pub delta_g: f64,
}

pub fn frequency_shifts(t: f64, t0: f64, g0: f64, qubit_freq: f64) -> FrequencyShifts {
    FrequencyShifts {
        delta_omega: -t,
        bulk_shift: -2.0 * t0,
        delta_g: -t0 * g0 / qubit_freq,
    }
}

/// Coupler-induced frequency shift of every qubit: minus the sum of its
/// bond strengths.
pub fn array_frequency_shifts(params: &ArrayParams) -> Vec<f64> {
    let n = params.n_sites();
    let (t1, t2) = params.couplings();
    (0..n)
        .map(|s| {
            let left = if s == 0 { 0.0 } else if s % 2 == 1 { t1 } else { t2 };
            let right = if s + 1 == n { 0.0 } else if s % 2 == 0 { t1 } else { t2 };
            -(left + right)
        })
        .collect()
}
