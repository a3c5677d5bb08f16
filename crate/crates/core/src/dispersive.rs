//! Cavity-mediated dynamics in the dispersive regime.
//!
//! With the cavity detuned by `Δ0 = ω0 - ω_c` and empty, eliminating it
//! leaves a `2N`-dimensional Hamiltonian in the frame of the cavity: a Lamb
//! shift and an all-to-all exchange `g0²/Δ0` on top of the SSH hopping.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;

use crate::lattice::{chiral_angle, coupling_matrix, eigensystem, ArrayParams, Spectrum};
use crate::linalg::{
    condition_number, expm, general_eigen, hermitian_eigen, hermiticity_defect, lu_solve, max_abs,
    to_complex,
};
use crate::{Error, Result};

/// Condition number of the eigenvector matrix above which the propagator
/// falls back to the matrix exponential.
pub const MAX_EIGENVECTOR_CONDITION: f64 = 1.0e8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveParams {
    /// Uniform cavity-qubit coupling.
    pub g0: f64,
    /// `Δ0 = ω0 - ω_c`.
    pub detuning: f64,
    /// Add qubit and Purcell decay as an anti-Hermitian diagonal. Qubit
    /// decay rates come from the array.
    pub include_decay: bool,
    pub kappa: f64,
}

impl DispersiveParams {
    pub fn validate(&self) -> Result<()> {
        if self.detuning == 0.0 {
            return Err(Error::Singular("cavity resonant with the qubits (Δ0 = 0)".into()));
        }
        let ratio = (self.g0 / self.detuning).abs();
        if !(ratio < 1.0) {
            return Err(Error::Domain {
                name: "g0/Δ0",
                value: ratio,
                expected: "|g0/Δ0| < 1",
            });
        }
        if ratio > 0.2 {
            log::warn!("|g0/Δ0| = {ratio:.3}: dispersive elimination is marginal");
        }
        if !(self.kappa >= 0.0) {
            return Err(Error::Domain {
                name: "kappa",
                value: self.kappa,
                expected: "kappa >= 0",
            });
        }
        Ok(())
    }

    /// Exchange strength `g0²/Δ0`.
    pub fn exchange(&self) -> f64 {
        self.g0 * self.g0 / self.detuning
    }

    /// Cavity-induced qubit decay `κ (g0/Δ0)²`.
    pub fn purcell_rate(&self) -> f64 {
        self.kappa * (self.g0 / self.detuning).powi(2)
    }

    /// `1 / (γ + κ (g0/Δ0)²)`.
    pub fn lifetime(&self, gamma: f64) -> f64 {
        1.0 / (gamma + self.purcell_rate())
    }
}

/// Qubit-basis effective Hamiltonian, `Δ0 I + (g0²/Δ0) 11ᵀ + D + E`, with
/// `-i(γ_n + κ g0²/Δ0²)/2` on the diagonal when decay is on.
pub fn effective_hamiltonian_qubits(
    array: &ArrayParams,
    disp: &DispersiveParams,
) -> Result<DMatrix<Complex64>> {
    array.validate()?;
    disp.validate()?;
    let mut h = frame_hamiltonian(array, disp.detuning);
    let j = disp.exchange();
    h.iter_mut().for_each(|x| *x += j);
    let mut h = to_complex(&h);
    if disp.include_decay {
        for (s, gamma) in array.qubit_decays.iter().enumerate() {
            h[(s, s)].im -= 0.5 * (gamma + disp.purcell_rate());
        }
    }
    Ok(h)
}

/// Array Hamiltonian in the frame of the cavity: `Δ0 + ε` on the diagonal.
fn frame_hamiltonian(array: &ArrayParams, detuning: f64) -> DMatrix<f64> {
    let mut h = coupling_matrix(array);
    for (s, eps) in array.frequency_offsets.iter().enumerate() {
        h[(s, s)] = detuning + eps;
    }
    h
}

/// How the mediated couplings treat the mode detunings `Δ_j = ω_j - ω_c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetuningModel {
    /// `J_jk = (ξ̃_j ξ̃_k / 2)(1/Δ_j + 1/Δ_k)`.
    #[default]
    ModeResolved,
    /// Every `Δ_j` in the mediated terms replaced by `Δ0`; this is the
    /// qubit-basis Hamiltonian written in the eigenmode basis.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeHamiltonian {
    /// Rows and columns follow `spectrum.modes`.
    pub matrix: DMatrix<Complex64>,
    pub spectrum: Spectrum,
    /// Dressed couplings `ξ̃_j = g0 ξ_j`.
    pub couplings: Vec<f64>,
    /// Mode detunings `Δ_j`.
    pub detunings: Vec<f64>,
}

/// Eigenmode-basis effective Hamiltonian.
pub fn effective_hamiltonian_modes(
    array: &ArrayParams,
    disp: &DispersiveParams,
    model: DetuningModel,
) -> Result<ModeHamiltonian> {
    array.validate()?;
    disp.validate()?;
    let spectrum = eigensystem(array)?;
    let n = array.n_sites();
    let v = spectrum.vectors();
    let bare = v.transpose() * frame_hamiltonian(array, disp.detuning) * &v;
    let bare = (&bare + bare.transpose()) * 0.5;
    let detunings: Vec<f64> = (0..n).map(|j| bare[(j, j)]).collect();
    let scale = disp.detuning.abs();
    if model == DetuningModel::ModeResolved {
        if let Some(j) = (0..n).find(|j| detunings[*j].abs() <= 1e-12 * scale) {
            return Err(Error::ResonantMode {
                index: j + 1,
                detuning: detunings[j],
            });
        }
    }
    let couplings: Vec<f64> = spectrum.modes.iter().map(|m| disp.g0 * m.coupling).collect();
    let inv = |j: usize| match model {
        DetuningModel::ModeResolved => 1.0 / detunings[j],
        DetuningModel::Uniform => 1.0 / disp.detuning,
    };
    let mut h = DMatrix::from_fn(n, n, |j, k| {
        let mediated = 0.5 * couplings[j] * couplings[k] * (inv(j) + inv(k));
        Complex64::new(bare[(j, k)] + mediated, 0.0)
    });
    if disp.include_decay {
        let rates = DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            array.qubit_decays.iter().map(|g| g + disp.purcell_rate()),
        ));
        let rotated = v.transpose() * rates * &v;
        for j in 0..n {
            for k in 0..n {
                h[(j, k)].im -= 0.25 * (rotated[(j, k)] + rotated[(k, j)]);
            }
        }
    }
    Ok(ModeHamiltonian {
        matrix: h,
        spectrum,
        couplings,
        detunings,
    })
}

/// Cavity-mediated coupling between the left and right edge states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCoupling {
    pub coupling: f64,
    /// `cos φ g0²/Δ0`.
    pub analytic: f64,
    pub hybridized: bool,
}

/// Mediated coupling between the localized edge states. A hybridized pair
/// is first rotated to its left/right combinations.
pub fn edge_coupling(
    array: &ArrayParams,
    disp: &DispersiveParams,
    model: DetuningModel,
) -> Result<EdgeCoupling> {
    if !array.is_topological() {
        return Err(Error::UnsupportedRegime("edge coupling needs t1 < t2"));
    }
    let mh = effective_hamiltonian_modes(array, disp, model)?;
    let pair = mh
        .spectrum
        .edge_pair
        .ok_or(Error::UnsupportedRegime("no isolated mid-gap pair"))?;
    let (a, b) = (pair.lower - 1, pair.upper - 1);
    let (u, v) = (&mh.spectrum.modes[a].amplitudes, &mh.spectrum.modes[b].amplitudes);
    let (s, c) = chiral_angle(u, v).sin_cos();
    let sign = |x: &[f64], y: &[f64], p: f64, q: f64| -> f64 {
        let lead = x
            .iter()
            .zip(y)
            .map(|(m, n)| p * m + q * n)
            .fold(0.0f64, |acc, z| if z.abs() > acc.abs() + 1e-12 { z } else { acc });
        if lead < 0.0 {
            -1.0
        } else {
            1.0
        }
    };
    let left = [c, s];
    let right = [-s, c];
    let sl = sign(u, v, c, s);
    let sr = sign(u, v, -s, c);
    let inv = |j: usize| match model {
        DetuningModel::ModeResolved => 1.0 / mh.detunings[j],
        DetuningModel::Uniform => 1.0 / disp.detuning,
    };
    let idx = [a, b];
    let mut j = 0.0;
    for (p, &ja) in idx.iter().enumerate() {
        for (q, &jb) in idx.iter().enumerate() {
            let m = 0.5 * mh.couplings[ja] * mh.couplings[jb] * (inv(ja) + inv(jb));
            j += left[p] * right[q] * m;
        }
    }
    Ok(EdgeCoupling {
        coupling: sl * sr * j,
        analytic: array.phi.cos() * disp.exchange(),
        hybridized: pair.hybridized,
    })
}

/// How a trace was propagated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Propagator {
    /// Hermitian spectral decomposition.
    Spectral,
    /// Diagonalization of a non-Hermitian matrix.
    Eigen { condition: f64 },
    /// Scaled-and-squared Taylor exponential, used when the eigenvectors
    /// are too ill-conditioned.
    Taylor { condition: f64 },
}

impl Propagator {
    pub fn label(&self) -> &'static str {
        match self {
            Propagator::Spectral => "spectral",
            Propagator::Eigen { .. } => "eigen",
            Propagator::Taylor { .. } => "taylor",
        }
    }
}

/// Site populations after a single excitation starts on one site.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsTrace {
    pub times: Vec<f64>,
    /// Rows follow `times`, columns the sites.
    pub populations: DMatrix<f64>,
    pub norm: Vec<f64>,
    pub propagator: Propagator,
}

impl DynamicsTrace {
    /// Population of a 1-based site over time.
    pub fn site(&self, site: usize) -> Vec<f64> {
        self.populations.column(site - 1).iter().copied().collect()
    }
}

/// `|⟨n| exp(-iHt) |initial⟩|²` on every time in `times`.
pub fn evolve_excitation(
    h: &DMatrix<Complex64>,
    initial_site: usize,
    times: &[f64],
) -> Result<DynamicsTrace> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::InvalidParams("Hamiltonian must be square".into()));
    }
    if !(1..=n).contains(&initial_site) {
        return Err(Error::InvalidParams(format!(
            "initial site {initial_site} outside 1..={n}"
        )));
    }
    // a real diagonal shift only changes the global phase
    let shift = (0..n).map(|i| h[(i, i)].re).sum::<f64>() / n as f64;
    let mut h = h.clone();
    for i in 0..n {
        h[(i, i)].re -= shift;
    }
    let mut psi0 = DVector::<Complex64>::zeros(n);
    psi0[initial_site - 1] = Complex64::new(1.0, 0.0);

    let scale = max_abs(&h).max(f64::MIN_POSITIVE);
    let mut states: Vec<DVector<Complex64>> = Vec::with_capacity(times.len());
    let propagator = if hermiticity_defect(&h) <= 1e-12 * scale {
        let (values, vectors) = hermitian_eigen(&h)?;
        let c = vectors.adjoint() * &psi0;
        for &t in times {
            let phases = DVector::from_fn(n, |k, _| c[k] * Complex64::new(0.0, -values[k] * t).exp());
            states.push(&vectors * phases);
        }
        Propagator::Spectral
    } else {
        let (values, vectors) = general_eigen(&h)?;
        let condition = condition_number(&vectors);
        if condition <= MAX_EIGENVECTOR_CONDITION {
            let c = lu_solve(vectors.clone(), &psi0, "eigenvector expansion")?;
            for &t in times {
                let phases =
                    DVector::from_fn(n, |k, _| c[k] * (Complex64::new(0.0, -t) * values[k]).exp());
                states.push(&vectors * phases);
            }
            Propagator::Eigen { condition }
        } else {
            log::info!("eigenvector condition {condition:e}; using the Taylor propagator");
            for &t in times {
                let u = expm(&(&h * Complex64::new(0.0, -t)));
                states.push(u * &psi0);
            }
            Propagator::Taylor { condition }
        }
    };

    let populations = DMatrix::from_fn(times.len(), n, |r, c| states[r][c].norm_sqr());
    let norm = (0..times.len()).map(|r| populations.row(r).sum()).collect();
    Ok(DynamicsTrace {
        times: times.to_vec(),
        populations,
        norm,
        propagator,
    })
}

/// Revival period of a site population and the coupling `J = π / T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillation {
    pub period: f64,
    pub coupling: f64,
    /// Population at the revival maximum.
    pub revival: f64,
}

/// Locate the first revival: after the population first drops below 1/2,
/// the maximum of the window where it is back above 1/2, refined by a
/// least-squares parabola.
pub fn measure_oscillation_period(trace: &DynamicsTrace, site: usize) -> Result<Oscillation> {
    let n_sites = trace.populations.ncols();
    if !(1..=n_sites).contains(&site) {
        return Err(Error::InvalidParams(format!("site {site} outside 1..={n_sites}")));
    }
    let p = trace.site(site);
    let t = &trace.times;
    let none = Error::NoOscillation { site };
    let down = p.iter().position(|x| *x < 0.5).ok_or(none.clone())?;
    let up = down + p[down..].iter().position(|x| *x > 0.5).ok_or(none.clone())?;
    let end = up + p[up..].iter().position(|x| *x < 0.5).unwrap_or(p.len() - up);
    let peak = (up..end)
        .max_by(|a, b| p[*a].total_cmp(&p[*b]).then(b.cmp(a)))
        .ok_or(none)?;
    let half = ((end - up) / 8).max(1);
    let lo = peak.saturating_sub(half).max(up.saturating_sub(1));
    let hi = (peak + half).min(p.len() - 1);
    let (t_peak, value) = parabola_vertex(&t[lo..=hi], &p[lo..=hi]).unwrap_or((t[peak], p[peak]));
    let period = t_peak - t[0];
    Ok(Oscillation {
        period,
        coupling: core::f64::consts::PI / period,
        revival: value,
    })
}

/// Vertex of the least-squares parabola through the points.
fn parabola_vertex(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    if x.len() < 3 {
        return None;
    }
    let x0 = x[x.len() / 2];
    let mut a = nalgebra::Matrix3::<f64>::zeros();
    let mut b = nalgebra::Vector3::<f64>::zeros();
    for (xi, yi) in x.iter().zip(y) {
        let d = xi - x0;
        let row = nalgebra::Vector3::new(1.0, d, d * d);
        a += row * row.transpose();
        b += row * *yi;
    }
    let c = a.lu().solve(&b)?;
    if !(c[2] < 0.0) {
        return None;
    }
    let d = -c[1] / (2.0 * c[2]);
    if d < x[0] - x0 || d > x[x.len() - 1] - x0 {
        return None;
    }
    Some((x0 + d, c[0] + c[1] * d + c[2] * d * d))
}
