//! Driven-cavity spectroscopy of the array in the low-excitation limit.
//!
//! With the weak drive eliminated, the qubit amplitudes solve
//! `(Δq + D + E - iΓ/2) σ = -g a`, and the cavity response normalized to the
//! empty-cavity drive is `(κ/2) / (κ/2 + iΔc - i gᵀ (Δq + D + E - iΓ/2)⁻¹ g)`.
//! `R = 1 - |response|²` and `T = |response|²`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{coupling_matrix, eigensystem, hybrid_coupling_limit, ArrayParams, EigenMode};
use crate::linalg::lu_solve;
use crate::{Error, Result};

/// Cavity, drive and cavity-qubit couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityParams {
    pub cavity_freq: f64,
    pub kappa: f64,
    /// One coupling per qubit, in site order.
    pub coupling: Vec<f64>,
    pub drive_freq: f64,
    /// Drive amplitude η. The linearized response does not depend on it.
    pub drive_strength: f64,
}

impl CavityParams {
    pub fn validate(&self, n_sites: usize) -> Result<()> {
        if !(self.kappa > 0.0) {
            return Err(Error::Domain {
                name: "kappa",
                value: self.kappa,
                expected: "kappa > 0",
            });
        }
        self.validate_lossless(n_sites)
    }

    /// Same checks as [`validate`](Self::validate) but allowing `κ = 0`.
    pub fn validate_lossless(&self, n_sites: usize) -> Result<()> {
        if !(self.kappa >= 0.0) {
            return Err(Error::Domain {
                name: "kappa",
                value: self.kappa,
                expected: "kappa >= 0",
            });
        }
        if !(self.drive_strength >= 0.0) {
            return Err(Error::Domain {
                name: "drive_strength",
                value: self.drive_strength,
                expected: "eta >= 0",
            });
        }
        if self.coupling.len() != n_sites {
            return Err(Error::InvalidParams(format!(
                "coupling vector has {} entries, array has {n_sites} qubits",
                self.coupling.len()
            )));
        }
        Ok(())
    }

    pub fn at_drive(&self, drive_freq: f64) -> Self {
        Self {
            drive_freq,
            ..self.clone()
        }
    }
}

/// Named cavity-coupling patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingPreset {
    /// `g0 (-1, 1, 1, 1, -1, 1, 1, 1)` on eight qubits.
    AlternatingSign8,
    /// `g0` on every qubit.
    Homogeneous,
}

impl CouplingPreset {
    pub fn name(self) -> &'static str {
        match self {
            CouplingPreset::AlternatingSign8 => "alternating-sign-8",
            CouplingPreset::Homogeneous => "homogeneous",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "alternating-sign-8" => Some(CouplingPreset::AlternatingSign8),
            "homogeneous" => Some(CouplingPreset::Homogeneous),
            _ => None,
        }
    }

    pub fn vector(self, n_sites: usize, g0: f64) -> Result<Vec<f64>> {
        match self {
            CouplingPreset::Homogeneous => Ok(vec![g0; n_sites]),
            CouplingPreset::AlternatingSign8 => {
                if n_sites != 8 {
                    return Err(Error::InvalidParams(format!(
                        "alternating-sign-8 needs 8 qubits, got {n_sites}"
                    )));
                }
                Ok([-1.0, 1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 1.0]
                    .iter()
                    .map(|s| s * g0)
                    .collect())
            }
        }
    }
}

/// Linearized cavity response at one drive frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Response {
    /// `κ⟨a⟩ / (2η)`.
    pub amplitude: Complex64,
    pub reflection: f64,
    pub transmission: f64,
}

impl Response {
    fn from_amplitude(amplitude: Complex64) -> Self {
        let t = amplitude.norm_sqr();
        Self {
            amplitude,
            reflection: 1.0 - t,
            transmission: t,
        }
    }
}

/// Reflection and transmission in the weak-drive limit. `drive_strength` is
/// never read.
pub fn steady_state_reflection(array: &ArrayParams, cav: &CavityParams) -> Result<Response> {
    array.validate()?;
    cav.validate(array.n_sites())?;
    linear_response(
        array,
        &coupling_matrix(array),
        cav.cavity_freq,
        cav.kappa,
        &cav.coupling,
        cav.drive_freq,
    )
}

fn linear_response(
    array: &ArrayParams,
    hopping: &DMatrix<f64>,
    cavity_freq: f64,
    kappa: f64,
    g: &[f64],
    drive_freq: f64,
) -> Result<Response> {
    let n = array.n_sites();
    let dq = array.qubit_freq - drive_freq;
    let dc = cavity_freq - drive_freq;
    let m = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            Complex64::new(
                dq + array.frequency_offsets[r],
                -0.5 * array.qubit_decays[r],
            )
        } else {
            Complex64::new(hopping[(r, c)], 0.0)
        }
    });
    let gv = DVector::from_iterator(n, g.iter().map(|x| Complex64::new(*x, 0.0)));
    let self_energy = if g.iter().all(|x| *x == 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        let x = lu_solve(m, &gv, "qubit response").map_err(|e| match e {
            Error::Singular(msg) => Error::Singular(format!(
                "{msg}; the drive sits on an undamped array mode, use nonzero qubit decay"
            )),
            other => other,
        })?;
        gv.iter().zip(x.iter()).map(|(a, b)| a * b).sum()
    };
    let half = 0.5 * kappa;
    let i = Complex64::i();
    let amp = Complex64::new(half, 0.0) / (Complex64::new(half, 0.0) + i * dc - i * self_energy);
    Ok(Response::from_amplitude(amp))
}

/// Response over a drive grid at fixed array parameters.
pub fn reflection_spectrum(
    array: &ArrayParams,
    cav: &CavityParams,
    drive_grid: &[f64],
) -> Result<Vec<Response>> {
    array.validate()?;
    cav.validate(array.n_sites())?;
    let hopping = coupling_matrix(array);
    drive_grid
        .iter()
        .map(|w| linear_response(array, &hopping, cav.cavity_freq, cav.kappa, &cav.coupling, *w))
        .collect()
}

/// Reflection over a (φ, drive) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMap {
    pub phi_grid: Vec<f64>,
    pub drive_grid: Vec<f64>,
    /// Rows follow `phi_grid`, columns `drive_grid`.
    pub reflection: DMatrix<f64>,
}

impl SpectralMap {
    pub fn transmission(&self) -> DMatrix<f64> {
        self.reflection.map(|r| 1.0 - r)
    }
}

/// One row of the map: the template array retuned to `phi`.
pub fn reflection_row(
    template: &ArrayParams,
    cav: &CavityParams,
    phi: f64,
    drive_grid: &[f64],
) -> Result<Vec<f64>> {
    let array = template.at_phi(phi)?;
    Ok(reflection_spectrum(&array, cav, drive_grid)?
        .into_iter()
        .map(|r| r.reflection)
        .collect())
}

pub fn reflection_map(
    template: &ArrayParams,
    cav: &CavityParams,
    phi_grid: &[f64],
    drive_grid: &[f64],
) -> Result<SpectralMap> {
    let rows = phi_grid
        .iter()
        .map(|phi| reflection_row(template, cav, *phi, drive_grid))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_map(phi_grid, drive_grid, rows))
}

/// Build a map from precomputed rows (for callers that evaluate rows in
/// parallel).
pub fn assemble_map(phi_grid: &[f64], drive_grid: &[f64], rows: Vec<Vec<f64>>) -> SpectralMap {
    let reflection = DMatrix::from_fn(phi_grid.len(), drive_grid.len(), |r, c| rows[r][c]);
    SpectralMap {
        phi_grid: phi_grid.to_vec(),
        drive_grid: drive_grid.to_vec(),
        reflection,
    }
}

/// Eigenenergies of the retuned array for each φ, for overlaying on a map.
pub fn eigen_overlay(template: &ArrayParams, phi_grid: &[f64]) -> Result<Vec<Vec<f64>>> {
    phi_grid
        .iter()
        .map(|phi| Ok(eigensystem(&template.at_phi(*phi)?)?.energies()))
        .collect()
}

/// Self-energy rebuilt from the eigenmodes that pass `keep`. Requires a
/// uniform qubit decay so that the decay is diagonal in the mode basis.
pub fn modal_response(
    array: &ArrayParams,
    cav: &CavityParams,
    keep: impl Fn(&EigenMode) -> bool,
) -> Result<Response> {
    array.validate()?;
    cav.validate(array.n_sites())?;
    let gamma = array.qubit_decays[0];
    if array.qubit_decays.iter().any(|g| *g != gamma) {
        return Err(Error::InvalidParams(
            "modal reconstruction needs a uniform qubit decay".into(),
        ));
    }
    let spectrum = eigensystem(array)?;
    let mut self_energy = Complex64::new(0.0, 0.0);
    for mode in spectrum.modes.iter().filter(|m| keep(m)) {
        let overlap: f64 = mode
            .amplitudes
            .iter()
            .zip(&cav.coupling)
            .map(|(a, g)| a * g)
            .sum();
        let denom = Complex64::new(mode.energy - cav.drive_freq, -0.5 * gamma);
        self_energy += overlap * overlap / denom;
    }
    let half = Complex64::new(0.5 * cav.kappa, 0.0);
    let i = Complex64::i();
    let dc = cav.cavity_freq - cav.drive_freq;
    Ok(Response::from_amplitude(half / (half + i * dc - i * self_energy)))
}

/// Copy of `array` with offsets drawn uniformly from `[-eps, eps]`.
pub fn disorder_sample(array: &ArrayParams, eps: f64, seed: u64) -> Result<ArrayParams> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::Domain {
            name: "disorder strength",
            value: eps,
            expected: "0 <= eps < inf",
        });
    }
    let n = array.n_sites();
    let offsets = if eps == 0.0 {
        vec![0.0; n]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(-eps..=eps)).collect()
    };
    array.clone().with_offsets(offsets)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub position: f64,
    pub height: f64,
}

/// Peaks of a transmission spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct RabiPeaks {
    /// All local maxima, ascending in position.
    pub peaks: Vec<Peak>,
    /// The two highest maxima, ascending in position.
    pub dominant: Option<(Peak, Peak)>,
    /// Distance between the dominant peaks.
    pub splitting: Option<f64>,
    /// Lowest value between the dominant peaks.
    pub valley: Option<f64>,
    /// Rayleigh-type test: the valley sits below `8/π²` of the lower peak.
    pub resolvable: bool,
}

const RAYLEIGH_DIP: f64 = 0.810_569_469_138_702_1;

/// Local maxima of `values` sampled on the uniform `grid`, refined by a
/// parabola through each maximum and its neighbours.
pub fn find_peaks(grid: &[f64], values: &[f64]) -> Result<Vec<Peak>> {
    if grid.len() != values.len() {
        return Err(Error::InvalidParams("grid and values differ in length".into()));
    }
    let n = values.len();
    let mut peaks = Vec::new();
    for i in 1..n.saturating_sub(1) {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        if b > a && b >= c {
            let curvature = a - 2.0 * b + c;
            let (shift, height) = if curvature < 0.0 {
                let s = 0.5 * (a - c) / curvature;
                (s, b - 0.25 * (a - c) * s)
            } else {
                (0.0, b)
            };
            let step = grid[i + 1] - grid[i];
            peaks.push(Peak {
                position: grid[i] + shift * step,
                height,
            });
        }
    }
    Ok(peaks)
}

pub fn find_rabi_peaks(grid: &[f64], values: &[f64]) -> Result<RabiPeaks> {
    let peaks = find_peaks(grid, values)?;
    if peaks.len() < 2 {
        return Ok(RabiPeaks {
            peaks,
            dominant: None,
            splitting: None,
            valley: None,
            resolvable: false,
        });
    }
    let mut order: Vec<usize> = (0..peaks.len()).collect();
    order.sort_by(|a, b| peaks[*b].height.total_cmp(&peaks[*a].height).then(a.cmp(b)));
    let (mut p, mut q) = (peaks[order[0]], peaks[order[1]]);
    if p.position > q.position {
        core::mem::swap(&mut p, &mut q);
    }
    let valley = grid
        .iter()
        .zip(values)
        .filter(|(x, _)| **x > p.position && **x < q.position)
        .map(|(_, v)| *v)
        .fold(f64::INFINITY, f64::min);
    let resolvable = valley <= RAYLEIGH_DIP * p.height.min(q.height);
    Ok(RabiPeaks {
        peaks,
        dominant: Some((p, q)),
        splitting: Some(q.position - p.position),
        valley: Some(valley),
        resolvable,
    })
}

/// Effective cavity coupling of the bright edge combination, `sqrt(2 cos φ) g0`.
pub fn edge_rabi_coupling(phi: f64, g0: f64) -> Result<f64> {
    Ok(hybrid_coupling_limit(phi)? * g0)
}

/// `2 sqrt(2 cos φ) g0 > (κ + γ) / 2`.
pub fn rabi_resolvable(phi: f64, g0: f64, kappa: f64, gamma: f64) -> Result<bool> {
    Ok(2.0 * edge_rabi_coupling(phi, g0)? > 0.5 * (kappa + gamma))
}

/// Local maximum of `values` within `halfwidth` of `center`, if any.
pub fn central_peak(grid: &[f64], values: &[f64], center: f64, halfwidth: f64) -> Result<Option<Peak>> {
    Ok(find_peaks(grid, values)?
        .into_iter()
        .filter(|p| (p.position - center).abs() < halfwidth)
        .max_by(|a, b| a.height.total_cmp(&b.height)))
}

/// Uniform grid of `n` points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Parity;
    use crate::units::{ghz, mhz};
    use core::f64::consts::PI;

    fn fig_array(phi: f64) -> ArrayParams {
        ArrayParams::new(4, ghz(6.0), mhz(100.0), phi)
            .unwrap()
            .with_uniform_decay(mhz(0.02))
            .unwrap()
    }

    fn cavity(g: Vec<f64>, drive: f64) -> CavityParams {
        CavityParams {
            cavity_freq: ghz(6.0),
            kappa: mhz(10.0),
            coupling: g,
            drive_freq: drive,
            drive_strength: mhz(0.1),
        }
    }

    #[test]
    fn bare_cavity_on_resonance() {
        let r = steady_state_reflection(&fig_array(0.25 * PI), &cavity(vec![0.0; 8], ghz(6.0))).unwrap();
        assert!(r.reflection.abs() < 1e-15);
        assert!((r.transmission - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_qubit_closed_form() {
        // one dimer with t1 = 0 is two isolated qubits; couple only one
        let a = ArrayParams::new(1, 3.0, 1.0, 0.0)
            .unwrap()
            .with_uniform_decay(0.1)
            .unwrap();
        let cav = CavityParams {
            cavity_freq: 3.2,
            kappa: 0.5,
            coupling: vec![0.3, 0.0],
            drive_freq: 3.05,
            drive_strength: 0.0,
        };
        let r = steady_state_reflection(&a, &cav).unwrap();
        let i = Complex64::i();
        let s = 0.09 / Complex64::new(3.0 - 3.05, -0.05);
        let amp = 0.25 / (0.25 + i * 0.15 - i * s);
        assert!((r.amplitude - amp).norm() < 1e-14);
    }

    #[test]
    fn drive_strength_is_ignored() {
        let a = fig_array(0.25 * PI);
        let g = CouplingPreset::AlternatingSign8.vector(8, mhz(5.0)).unwrap();
        let mut cav = cavity(g, ghz(6.0) + mhz(3.0));
        let r1 = steady_state_reflection(&a, &cav).unwrap();
        cav.drive_strength = 123.0;
        let r2 = steady_state_reflection(&a, &cav).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn undamped_resonance_is_singular() {
        let a = ArrayParams::new(1, 3.0, 1.0, PI / 3.0).unwrap();
        let (t1, _) = a.couplings();
        let cav = CavityParams {
            cavity_freq: 3.0,
            kappa: 1.0,
            coupling: vec![0.1, 0.1],
            drive_freq: 3.0 + t1,
            drive_strength: 0.0,
        };
        assert!(matches!(steady_state_reflection(&a, &cav), Err(Error::Singular(_))));
    }

    #[test]
    fn presets() {
        let g = CouplingPreset::AlternatingSign8.vector(8, 2.0).unwrap();
        assert_eq!(g, vec![-2.0, 2.0, 2.0, 2.0, -2.0, 2.0, 2.0, 2.0]);
        assert!(CouplingPreset::AlternatingSign8.vector(6, 1.0).is_err());
        assert_eq!(CouplingPreset::Homogeneous.vector(3, 1.5).unwrap(), vec![1.5; 3]);
        for p in [CouplingPreset::AlternatingSign8, CouplingPreset::Homogeneous] {
            assert_eq!(CouplingPreset::from_name(p.name()), Some(p));
        }
    }

    #[test]
    fn map_is_bounded() {
        let g = CouplingPreset::AlternatingSign8.vector(8, mhz(5.0)).unwrap();
        let cav = cavity(g, 0.0);
        let phis = linspace(0.0, PI, 9);
        let drives = linspace(ghz(6.0) - mhz(250.0), ghz(6.0) + mhz(250.0), 101);
        let map = reflection_map(&fig_array(0.0), &cav, &phis, &drives).unwrap();
        assert_eq!(map.reflection.shape(), (9, 101));
        assert!(map.reflection.iter().all(|r| *r >= -1e-9 && *r <= 1.0 + 1e-9));
        let overlay = eigen_overlay(&fig_array(0.0), &phis).unwrap();
        assert_eq!(overlay.len(), 9);
        assert!(overlay.iter().all(|row| row.len() == 8));
    }

    #[test]
    fn odd_modes_carry_no_weight_for_homogeneous_coupling() {
        let a = ArrayParams::new(6, ghz(6.0), mhz(100.0), 0.3 * PI)
            .unwrap()
            .with_uniform_decay(mhz(0.02))
            .unwrap();
        for detune in [-180.0, -40.0, 0.0, 2.5, 75.0, 210.0] {
            let cav = cavity(vec![mhz(5.0); 12], ghz(6.0) + mhz(detune));
            let full = steady_state_reflection(&a, &cav).unwrap();
            let even = modal_response(&a, &cav, |m| m.parity != Parity::Odd).unwrap();
            assert!((full.amplitude - even.amplitude).norm() < 1e-8, "detuning {detune}");
        }
    }

    #[test]
    fn disorder_is_seeded_and_bounded() {
        let a = fig_array(0.2 * PI);
        assert!(disorder_sample(&a, 0.0, 3).unwrap().frequency_offsets.iter().all(|e| *e == 0.0));
        let s1 = disorder_sample(&a, mhz(2.0), 7).unwrap();
        let s2 = disorder_sample(&a, mhz(2.0), 7).unwrap();
        let s3 = disorder_sample(&a, mhz(2.0), 8).unwrap();
        assert_eq!(s1, s2);
        assert_ne!(s1, s3);
        assert!(s1.frequency_offsets.iter().all(|e| e.abs() <= mhz(2.0)));
        assert!(disorder_sample(&a, -1.0, 0).is_err());
    }

    #[test]
    fn disorder_is_uniform() {
        let a = ArrayParams::new(5000, 0.0, 1.0, 0.2).unwrap();
        let mut x = disorder_sample(&a, 1.0, 2024).unwrap().frequency_offsets;
        assert_eq!(x.len(), 10_000);
        x.sort_by(f64::total_cmp);
        let n = x.len() as f64;
        let ks = x
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let cdf = 0.5 * (v + 1.0);
                (cdf - i as f64 / n).abs().max((cdf - (i + 1) as f64 / n).abs())
            })
            .fold(0.0f64, f64::max);
        // 1% critical value of the Kolmogorov-Smirnov statistic
        assert!(ks < 1.63 / n.sqrt(), "KS statistic {ks}");
    }

    #[test]
    fn parabolic_refinement_is_exact_for_parabolas() {
        let grid = linspace(-1.0, 1.0, 21);
        let values: Vec<f64> = grid.iter().map(|x| 2.0 - 3.0 * (x - 0.234).powi(2)).collect();
        let peaks = find_peaks(&grid, &values).unwrap();
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].position - 0.234).abs() < 1e-12);
        assert!((peaks[0].height - 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_lorentzians() {
        let grid = linspace(-10.0, 10.0, 2001);
        let lor = |x: f64, c: f64| 1.0 / (1.0 + (x - c).powi(2));
        let values: Vec<f64> = grid.iter().map(|x| lor(*x, -3.0) + lor(*x, 3.0)).collect();
        let r = find_rabi_peaks(&grid, &values).unwrap();
        assert!(r.resolvable);
        assert!((r.splitting.unwrap() - 6.0).abs() < 0.05);

        let blurred: Vec<f64> = grid.iter().map(|x| lor(*x, -0.3) + lor(*x, 0.3)).collect();
        let r = find_rabi_peaks(&grid, &blurred).unwrap();
        assert!(!r.resolvable);
        assert!(r.splitting.is_none());
    }

    #[test]
    fn analytic_resolvability() {
        let c = edge_rabi_coupling(0.2 * PI, 1.0).unwrap();
        assert!((c - 1.27).abs() < 5e-3);
        assert!(rabi_resolvable(0.2 * PI, mhz(5.0), mhz(10.0), mhz(0.02)).unwrap());
        assert!(!rabi_resolvable(0.2 * PI, mhz(5.0), mhz(1e4), mhz(1e4)).unwrap());
    }

    #[test]
    fn strong_damping_hides_the_doublet() {
        let a = ArrayParams::new(6, ghz(6.0), mhz(100.0), 0.2 * PI)
            .unwrap()
            .with_uniform_decay(mhz(50.0))
            .unwrap();
        let drives = linspace(ghz(6.0) - mhz(40.0), ghz(6.0) + mhz(40.0), 801);
        let cav = CavityParams {
            kappa: mhz(200.0),
            ..cavity(vec![mhz(5.0); 12], 0.0)
        };
        let t: Vec<f64> = reflection_spectrum(&a, &cav, &drives)
            .unwrap()
            .iter()
            .map(|r| r.transmission)
            .collect();
        assert!(!find_rabi_peaks(&drives, &t).unwrap().resolvable);
    }
}
