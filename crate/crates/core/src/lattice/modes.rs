//! Numeric eigenmodes, parity and edge/bulk classification.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_traits::Float;

use super::{coupling_matrix, ArrayParams, Sublattice};
use crate::linalg::{fix_phase, symmetric_eigen};
use crate::Result;

/// Mirror symmetry `A_i <-> B_{N+1-i}` of an amplitude vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl Parity {
    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeClass {
    EdgeHybridEven,
    EdgeHybridOdd,
    EdgeLeft,
    EdgeRight,
    BulkLower,
    BulkUpper,
}

impl ModeClass {
    pub fn is_edge(self) -> bool {
        !matches!(self, ModeClass::BulkLower | ModeClass::BulkUpper)
    }

    pub fn label(self) -> &'static str {
        match self {
            ModeClass::EdgeHybridEven => "edge-hybrid-even",
            ModeClass::EdgeHybridOdd => "edge-hybrid-odd",
            ModeClass::EdgeLeft => "edge-left",
            ModeClass::EdgeRight => "edge-right",
            ModeClass::BulkLower => "bulk-lower",
            ModeClass::BulkUpper => "bulk-upper",
        }
    }
}

/// One single-excitation eigenstate of the array.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenMode {
    /// 1-based, ascending in energy.
    pub index: usize,
    pub energy: f64,
    /// Site amplitudes in `A1, B1, A2, B2, ...` order, unit norm.
    pub amplitudes: Vec<f64>,
    pub parity: Parity,
    pub class: ModeClass,
    /// Cavity coupling coefficient: sum of all amplitudes.
    pub coupling: f64,
}

impl EigenMode {
    /// Total weight on the A sublattice.
    pub fn a_weight(&self) -> f64 {
        self.amplitudes.iter().step_by(2).map(|x| x * x).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    /// Absolute tolerance of the mirror-parity test.
    pub parity_tol: f64,
    /// The mid-gap pair counts as hybridized when its splitting exceeds
    /// this multiple of `t0`.
    pub hybridization_threshold: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            parity_tol: 1.0e-8,
            hybridization_threshold: 1.0e-6,
        }
    }
}

/// The two mid-gap modes of a topological array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgePair {
    /// 1-based indices of the pair.
    pub lower: usize,
    pub upper: usize,
    /// Energy splitting of the pair as returned by the eigensolver.
    pub splitting: f64,
    /// True when the splitting exceeds the hybridization threshold.
    pub hybridized: bool,
}

/// All eigenmodes of an array, ascending in energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub n_cells: usize,
    pub modes: Vec<EigenMode>,
    pub edge_pair: Option<EdgePair>,
}

impl Spectrum {
    /// Mode by 1-based index.
    pub fn mode(&self, j: usize) -> &EigenMode {
        &self.modes[j - 1]
    }

    pub fn energies(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.energy).collect()
    }

    pub fn couplings(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.coupling).collect()
    }

    /// Eigenvectors as matrix columns.
    pub fn vectors(&self) -> DMatrix<f64> {
        let n = self.modes.len();
        DMatrix::from_fn(n, n, |r, c| self.modes[c].amplitudes[r])
    }

    /// `sum_j xi_j^2`, equal to `2N` for a complete basis.
    pub fn coupling_weight(&self) -> f64 {
        self.modes.iter().map(|m| m.coupling * m.coupling).sum()
    }

    pub fn edge_modes(&self) -> impl Iterator<Item = &EigenMode> {
        self.modes.iter().filter(|m| m.class.is_edge())
    }
}

/// Eigenpairs of a real symmetric matrix, ascending, with the sign of each
/// vector fixed so that its largest component is positive (lowest index on
/// ties).
pub fn diagonalize(h: &DMatrix<f64>) -> Result<Vec<(f64, Vec<f64>)>> {
    let (values, vectors) = symmetric_eigen(h)?;
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(c, w)| {
            let mut v: Vec<f64> = vectors.column(c).iter().copied().collect();
            fix_phase(&mut v);
            (w, v)
        })
        .collect())
}

pub fn eigensystem(params: &ArrayParams) -> Result<Spectrum> {
    eigensystem_with(params, &ClassifyOptions::default())
}

pub fn eigensystem_with(params: &ArrayParams, opts: &ClassifyOptions) -> Result<Spectrum> {
    params.validate()?;
    // diagonalize relative to ω0 so that rounding scales with the hopping
    let mut h = coupling_matrix(params);
    for (s, eps) in params.frequency_offsets.iter().enumerate() {
        h[(s, s)] = *eps;
    }
    let mut pairs = diagonalize(&h)?;
    let gap = params.half_gap();

    let mid: Vec<usize> = (0..pairs.len())
        .filter(|&c| pairs[c].0.abs() < gap)
        .collect();
    let mut edge_pair = None;
    if mid.len() == 2 {
        let (a, b) = (mid[0], mid[1]);
        let splitting = pairs[b].0 - pairs[a].0;
        let hybridized = splitting > opts.hybridization_threshold * params.t0;
        if !hybridized {
            localize_pair(&h, &mut pairs, a, b);
        }
        edge_pair = Some(EdgePair {
            lower: a + 1,
            upper: b + 1,
            splitting,
            hybridized,
        });
    }

    let modes = pairs
        .into_iter()
        .enumerate()
        .map(|(c, (energy, amplitudes))| {
            let parity = mirror_parity(&amplitudes, opts.parity_tol);
            let mut mode = EigenMode {
                index: c + 1,
                energy: energy + params.qubit_freq,
                coupling: amplitudes.iter().sum(),
                amplitudes,
                parity,
                class: ModeClass::BulkLower,
            };
            mode.class = classify_with_gap(&mode, params.qubit_freq, gap);
            mode
        })
        .collect();
    Ok(Spectrum {
        n_cells: params.n_cells,
        modes,
        edge_pair,
    })
}

/// Angle that rotates `(u, v)` onto the eigenvectors of the chiral operator
/// (+1 on A sites, -1 on B sites) restricted to their span. The first
/// rotated vector `cos θ u + sin θ v` carries the larger A weight.
pub(crate) fn chiral_angle(u: &[f64], v: &[f64]) -> f64 {
    let chiral = |x: &[f64], y: &[f64]| -> f64 {
        x.iter()
            .zip(y)
            .enumerate()
            .map(|(s, (p, q))| if s % 2 == 0 { p * q } else { -p * q })
            .sum()
    };
    let c00 = chiral(u, u);
    let c11 = chiral(v, v);
    let c01 = chiral(u, v);
    0.5 * (2.0 * c01).atan2(c00 - c11)
}

/// Replace a near-degenerate pair by its chirally rotated, localized
/// combinations. The left state goes first.
fn localize_pair(h: &DMatrix<f64>, pairs: &mut [(f64, Vec<f64>)], a: usize, b: usize) {
    let (u, v) = (&pairs[a].1, &pairs[b].1);
    let (s, c) = chiral_angle(u, v).sin_cos();
    let mut left: Vec<f64> = u.iter().zip(v).map(|(p, q)| c * p + s * q).collect();
    let mut right: Vec<f64> = u.iter().zip(v).map(|(p, q)| -s * p + c * q).collect();
    fix_phase(&mut left);
    fix_phase(&mut right);
    let rayleigh = |x: &[f64]| -> f64 {
        let n = x.len();
        (0..n)
            .map(|r| {
                let hx: f64 = (0..n).map(|k| h[(r, k)] * x[k]).sum();
                x[r] * hx
            })
            .sum()
    };
    pairs[a] = (rayleigh(&left), left);
    pairs[b] = (rayleigh(&right), right);
}

fn mirror_parity(v: &[f64], tol: f64) -> Parity {
    let n = v.len();
    let even = (0..n).all(|s| (v[s] - v[n - 1 - s]).abs() <= tol);
    let odd = (0..n).all(|s| (v[s] + v[n - 1 - s]).abs() <= tol);
    match (even, odd) {
        (true, false) => Parity::Even,
        (false, true) => Parity::Odd,
        _ => Parity::None,
    }
}

fn classify_with_gap(mode: &EigenMode, omega0: f64, gap: f64) -> ModeClass {
    let detuning = mode.energy - omega0;
    if detuning.abs() < gap {
        match mode.parity {
            Parity::Even => ModeClass::EdgeHybridEven,
            Parity::Odd => ModeClass::EdgeHybridOdd,
            Parity::None if mode.a_weight() >= 0.5 => ModeClass::EdgeLeft,
            Parity::None => ModeClass::EdgeRight,
        }
    } else if detuning < 0.0 {
        ModeClass::BulkLower
    } else {
        ModeClass::BulkUpper
    }
}

/// Parity and class of a normalized mode of `params`.
pub fn classify_mode(mode: &EigenMode, params: &ArrayParams, tol: f64) -> (Parity, ModeClass) {
    let parity = mirror_parity(&mode.amplitudes, tol);
    let probe = EigenMode {
        parity,
        ..mode.clone()
    };
    (
        parity,
        classify_with_gap(&probe, params.qubit_freq, params.half_gap()),
    )
}

/// `xi_j`: the sum of all amplitude components.
pub fn coupling_coefficient(mode: &EigenMode) -> f64 {
    mode.amplitudes.iter().sum()
}

/// `xi_j / sqrt(2N)`.
pub fn rescaling_factor(mode: &EigenMode, n_cells: usize) -> f64 {
    coupling_coefficient(mode) / ((2 * n_cells) as f64).sqrt()
}

/// Sublattice label of each site, in amplitude order.
pub fn sublattices(n_sites: usize) -> impl Iterator<Item = Sublattice> {
    (0..n_sites).map(Sublattice::of_site)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn sqrt_cos(phi: f64) -> f64 {
        phi.cos().sqrt()
    }

    #[test]
    fn dimer_modes() {
        let p = ArrayParams::new(1, 5.0, 1.0, PI / 3.0).unwrap();
        let (t1, _) = p.couplings();
        let s = eigensystem(&p).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((s.mode(1).energy - (5.0 - t1)).abs() < 1e-12);
        assert!((s.mode(2).energy - (5.0 + t1)).abs() < 1e-12);
        assert!((s.mode(1).amplitudes[0] - h).abs() < 1e-12);
        assert!((s.mode(1).amplitudes[1] + h).abs() < 1e-12);
        assert!((s.mode(2).amplitudes[1] - h).abs() < 1e-12);
        assert_eq!(s.mode(1).parity, Parity::Odd);
        assert_eq!(s.mode(2).parity, Parity::Even);
        assert!(s.mode(1).coupling.abs() < 1e-12);
    }

    #[test]
    fn unit_norm_and_phase() {
        let p = ArrayParams::new(7, 0.0, 1.0, 0.37 * PI).unwrap();
        for m in eigensystem(&p).unwrap().modes {
            let norm: f64 = m.amplitudes.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            let max = m.amplitudes.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let lead = m
                .amplitudes
                .iter()
                .find(|x| x.abs() >= max * (1.0 - 1e-8))
                .unwrap();
            assert!(*lead > 0.0);
        }
    }

    #[test]
    fn mid_gap_modes_at_n18() {
        let p = ArrayParams::new(18, 0.0, 1.0, PI / 5.0).unwrap();
        let s = eigensystem(&p).unwrap();
        let pair = s.edge_pair.unwrap();
        assert_eq!((pair.lower, pair.upper), (18, 19));
        assert!(!pair.hybridized);
        assert!(s.mode(18).energy.abs() < 1e-6);
        assert!(s.mode(19).energy.abs() < 1e-6);
        assert_eq!(s.mode(18).class, ModeClass::EdgeLeft);
        assert_eq!(s.mode(19).class, ModeClass::EdgeRight);
        assert_eq!(s.mode(18).parity, Parity::None);
        for j in (1..=36).filter(|j| *j != 18 && *j != 19) {
            let m = s.mode(j);
            let expected = if j % 2 == 1 { Parity::Odd } else { Parity::Even };
            assert_eq!(m.parity, expected, "mode {j}");
            assert_eq!(
                m.class,
                if j < 18 {
                    ModeClass::BulkLower
                } else {
                    ModeClass::BulkUpper
                }
            );
        }
        assert!((s.mode(18).coupling - sqrt_cos(PI / 5.0)).abs() < 1e-6);
        assert!((s.mode(18).coupling - s.mode(19).coupling).abs() < 1e-10);
    }

    #[test]
    fn hybridized_pair_at_n6() {
        let p = ArrayParams::new(6, 0.0, 1.0, 0.3 * PI).unwrap();
        let s = eigensystem(&p).unwrap();
        let pair = s.edge_pair.unwrap();
        assert!(pair.hybridized);
        let classes: Vec<ModeClass> = [6, 7].iter().map(|j| s.mode(*j).class).collect();
        assert!(classes.contains(&ModeClass::EdgeHybridEven));
        assert!(classes.contains(&ModeClass::EdgeHybridOdd));
        let odd = s.edge_modes().find(|m| m.parity == Parity::Odd).unwrap();
        assert!(odd.coupling.abs() < 1e-10);
    }

    #[test]
    fn trivial_phase_has_no_edge_modes() {
        for phi in [0.5 * PI, 0.7 * PI] {
            let p = ArrayParams::new(5, 1.0, 1.0, phi).unwrap();
            let s = eigensystem(&p).unwrap();
            assert!(s.edge_pair.is_none());
            assert_eq!(s.edge_modes().count(), 0);
        }
    }

    #[test]
    fn fully_dimerized_limit() {
        let p = ArrayParams::new(4, 0.0, 1.0, 0.0).unwrap();
        let s = eigensystem(&p).unwrap();
        let left = s.mode(4);
        assert_eq!(left.class, ModeClass::EdgeLeft);
        assert!((left.amplitudes[0] - 1.0).abs() < 1e-14);
        let right = s.mode(5);
        assert_eq!(right.class, ModeClass::EdgeRight);
        assert!((right.amplitudes[7] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn classify_mode_agrees_with_eigensystem() {
        let p = ArrayParams::new(6, 2.0, 1.0, 0.3 * PI).unwrap();
        for m in eigensystem(&p).unwrap().modes {
            assert_eq!(classify_mode(&m, &p, 1e-8), (m.parity, m.class));
        }
    }

    #[test]
    fn rescaling() {
        let p = ArrayParams::new(3, 0.0, 1.0, 0.2 * PI).unwrap();
        let s = eigensystem(&p).unwrap();
        let total: f64 = s.modes.iter().map(|m| rescaling_factor(m, 3).powi(2)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for m in &s.modes {
            assert_eq!(coupling_coefficient(m), m.coupling);
        }
    }
}
