//! The SSH qubit array in its single-excitation subspace.
//!
//! Site order is `A1, B1, A2, B2, ...`; intra-cell bonds carry `t1` and
//! inter-cell bonds `t2`, with `t1 = t0 (1 - cos phi)` and
//! `t2 = t0 (1 + cos phi)`. The array is topological for `t1 < t2`
//! (`phi < pi/2`).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_traits::Float;

use crate::{Error, Result};

mod analytic;
mod modes;

pub use analytic::{
    analytic_bulk_state, analytic_edge_states, bulk_momenta, edge_coupling_limit,
    hybrid_coupling_limit, mode_momentum, phi_of_k, quantization_residual, Band, BulkMomentum,
};
pub(crate) use modes::chiral_angle;
pub use modes::{
    classify_mode, coupling_coefficient, diagonalize, eigensystem, eigensystem_with,
    rescaling_factor, sublattices, ClassifyOptions, EdgePair, EigenMode, ModeClass, Parity, Spectrum,
};

/// Parameters of a `2N`-qubit SSH array.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayParams {
    /// Number of unit cells `N`.
    pub n_cells: usize,
    /// Bare qubit frequency ω0.
    pub qubit_freq: f64,
    /// Coupling scale `t0`.
    pub t0: f64,
    /// Tuning angle in `[0, pi]`.
    pub phi: f64,
    /// Per-qubit decay rates, length `2N`.
    pub qubit_decays: Vec<f64>,
    /// Per-qubit frequency offsets (disorder), length `2N`.
    pub frequency_offsets: Vec<f64>,
}

impl ArrayParams {
    /// Clean, lossless array.
    pub fn new(n_cells: usize, qubit_freq: f64, t0: f64, phi: f64) -> Result<Self> {
        let p = Self {
            n_cells,
            qubit_freq,
            t0,
            phi,
            qubit_decays: vec![0.0; 2 * n_cells],
            frequency_offsets: vec![0.0; 2 * n_cells],
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_uniform_decay(mut self, gamma: f64) -> Result<Self> {
        self.qubit_decays = vec![gamma; self.n_sites()];
        self.validate()?;
        Ok(self)
    }

    pub fn with_decays(mut self, decays: Vec<f64>) -> Result<Self> {
        self.qubit_decays = decays;
        self.validate()?;
        Ok(self)
    }

    pub fn with_offsets(mut self, offsets: Vec<f64>) -> Result<Self> {
        self.frequency_offsets = offsets;
        self.validate()?;
        Ok(self)
    }

    /// Same array at a different tuning angle.
    pub fn at_phi(&self, phi: f64) -> Result<Self> {
        let mut p = self.clone();
        p.phi = phi;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cells == 0 {
            return Err(Error::InvalidParams("n_cells must be at least 1".into()));
        }
        if !(self.t0 > 0.0) {
            return Err(Error::Domain {
                name: "t0",
                value: self.t0,
                expected: "t0 > 0",
            });
        }
        check_phi(self.phi)?;
        let n = self.n_sites();
        if self.qubit_decays.len() != n || self.frequency_offsets.len() != n {
            return Err(Error::InvalidParams(format!(
                "expected {n} decays and offsets, got {} and {}",
                self.qubit_decays.len(),
                self.frequency_offsets.len()
            )));
        }
        if let Some(g) = self.qubit_decays.iter().find(|g| !(**g >= 0.0)) {
            return Err(Error::Domain {
                name: "qubit decay",
                value: *g,
                expected: "decay >= 0",
            });
        }
        if self.frequency_offsets.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParams("frequency offsets must be finite".into()));
        }
        Ok(())
    }

    /// Number of qubits `2N`.
    #[inline]
    pub fn n_sites(&self) -> usize {
        2 * self.n_cells
    }

    /// `(t1, t2)`.
    pub fn couplings(&self) -> (f64, f64) {
        dimerized(self.t0, self.phi)
    }

    /// True when `t1 < t2`. Angles within `1e-12` of the critical point
    /// count as critical, so rounding in `cos(pi/2)` does not create an
    /// edge pair.
    pub fn is_topological(&self) -> bool {
        self.phi.cos() > CRITICAL_TOL
    }

    /// Half the bulk gap `(t2 - t1) / 2` in the topological phase, zero
    /// otherwise.
    pub fn half_gap(&self) -> f64 {
        if self.is_topological() {
            let (t1, t2) = self.couplings();
            (t2 - t1) / 2.0
        } else {
            0.0
        }
    }

    pub fn is_clean(&self) -> bool {
        self.frequency_offsets.iter().all(|e| *e == 0.0)
    }
}

const CRITICAL_TOL: f64 = 1.0e-12;

fn check_phi(phi: f64) -> Result<()> {
    if !(0.0..=PI).contains(&phi) {
        return Err(Error::Domain {
            name: "phi",
            value: phi,
            expected: "0 <= phi <= pi",
        });
    }
    Ok(())
}

fn dimerized(t0: f64, phi: f64) -> (f64, f64) {
    let t1 = t0 * (1.0 - phi.cos());
    (t1, 2.0 * t0 - t1)
}

/// Intra- and inter-cell couplings `(t0 (1 - cos phi), t0 (1 + cos phi))`.
pub fn couplings_from_phi(t0: f64, phi: f64) -> Result<(f64, f64)> {
    if !(t0 > 0.0) {
        return Err(Error::Domain {
            name: "t0",
            value: t0,
            expected: "t0 > 0",
        });
    }
    check_phi(phi)?;
    Ok(dimerized(t0, phi))
}

/// Hopping part of the array Hamiltonian (zero diagonal).
pub fn coupling_matrix(params: &ArrayParams) -> DMatrix<f64> {
    let n = params.n_sites();
    let (t1, t2) = params.couplings();
    let mut d = DMatrix::zeros(n, n);
    for s in 0..n.saturating_sub(1) {
        let t = if s % 2 == 0 { t1 } else { t2 };
        d[(s, s + 1)] = t;
        d[(s + 1, s)] = t;
    }
    d
}

/// Single-excitation Hamiltonian: ω0 + ε on the diagonal and the dimerized
/// hopping `t1, t2, t1, ...` on the first off-diagonal.
pub fn build_hamiltonian(params: &ArrayParams) -> DMatrix<f64> {
    let mut h = coupling_matrix(params);
    for (s, eps) in params.frequency_offsets.iter().enumerate() {
        h[(s, s)] = params.qubit_freq + eps;
    }
    h
}

/// Sublattice of a 0-based site index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sublattice {
    A,
    B,
}

impl Sublattice {
    pub fn of_site(site: usize) -> Self {
        if site % 2 == 0 {
            Sublattice::A
        } else {
            Sublattice::B
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sublattice::A => "A",
            Sublattice::B => "B",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::mhz;

    #[test]
    fn couplings_at_reference_angles() {
        let t0 = mhz(100.0);
        let (t1, t2) = couplings_from_phi(t0, PI / 2.0).unwrap();
        assert!((t1 - t0).abs() < 1e-12 && (t2 - t0).abs() < 1e-12);

        let (t1, t2) = couplings_from_phi(t0, 0.0).unwrap();
        assert_eq!(t1, 0.0);
        assert!((t2 - mhz(200.0)).abs() < 1e-12);

        // direct evaluation: 100 (1 -/+ cos 45deg) = 29.2893..., 170.7106...
        let (t1, t2) = couplings_from_phi(t0, 0.25 * PI).unwrap();
        assert!((t1 - mhz(29.289321881345245)).abs() < 1e-9);
        assert!((t2 - mhz(170.71067811865476)).abs() < 1e-9);
    }

    #[test]
    fn couplings_reject_bad_angles() {
        assert!(couplings_from_phi(1.0, -0.1).is_err());
        assert!(couplings_from_phi(1.0, PI + 1e-9).is_err());
        assert!(couplings_from_phi(0.0, 0.3).is_err());
    }

    #[test]
    fn dimer_hamiltonian() {
        let p = ArrayParams::new(1, 3.0, 1.0, PI / 3.0).unwrap();
        let h = build_hamiltonian(&p);
        let (t1, _) = p.couplings();
        assert_eq!(h, DMatrix::from_row_slice(2, 2, &[3.0, t1, t1, 3.0]));
    }

    #[test]
    fn two_cell_structure() {
        let p = ArrayParams::new(2, 0.0, 1.0, 0.3 * PI).unwrap();
        let (t1, t2) = p.couplings();
        let h = build_hamiltonian(&p);
        assert_eq!(h[(0, 1)], t1);
        assert_eq!(h[(1, 2)], t2);
        assert_eq!(h[(2, 3)], t1);
        assert_eq!(h[(0, 2)], 0.0);
        assert_eq!(h[(0, 3)], 0.0);
        assert_eq!(h, h.transpose());
    }

    #[test]
    fn offsets_enter_the_diagonal() {
        let p = ArrayParams::new(2, 10.0, 1.0, 0.2)
            .unwrap()
            .with_offsets(vec![0.1, -0.2, 0.3, 0.0])
            .unwrap();
        let h = build_hamiltonian(&p);
        assert_eq!(h[(1, 1)], 9.8);
        assert_eq!(h[(3, 3)], 10.0);
    }

    #[test]
    fn validation() {
        assert!(ArrayParams::new(0, 0.0, 1.0, 0.1).is_err());
        assert!(ArrayParams::new(2, 0.0, 1.0, 0.1)
            .unwrap()
            .with_uniform_decay(-1.0)
            .is_err());
        assert!(ArrayParams::new(2, 0.0, 1.0, 0.1)
            .unwrap()
            .with_offsets(vec![0.0; 3])
            .is_err());
    }
}
