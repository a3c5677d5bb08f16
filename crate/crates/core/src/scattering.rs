//! Single-photon transport through the edge-state superatom.
//!
//! A waveguide drives the left edge state, which decays into it at `Γ_L` and
//! couples to the right edge state at `J`. Every rate here is in units of
//! `Γ_L`; [`superatom_from_system`] converts from the physical model.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::dispersive::DispersiveParams;
use crate::lattice::{edge_coupling_limit, ArrayParams};
use crate::spectroscopy::{find_peaks, linspace};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringParams {
    /// Edge-edge coupling `J`.
    pub j: f64,
    /// Intrinsic decay of the left edge state.
    pub gamma_l: f64,
    /// Intrinsic decay of the right edge state.
    pub gamma_r: f64,
    /// Waveguide-induced decay of the left edge state.
    pub big_gamma_l: f64,
}

impl ScatteringParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("J", self.j), ("gamma_L", self.gamma_l), ("gamma_R", self.gamma_r)] {
            if !(value >= 0.0) {
                return Err(Error::Domain {
                    name,
                    value,
                    expected: ">= 0",
                });
            }
        }
        if !(self.big_gamma_l > 0.0) {
            return Err(Error::Domain {
                name: "Gamma_L",
                value: self.big_gamma_l,
                expected: "> 0",
            });
        }
        Ok(())
    }

    pub fn with_j(self, j: f64) -> Self {
        Self { j, ..self }
    }
}

/// `t = [(iΔ - γ_L/2)(iΔ - γ_R/2) + J²] / [(iΔ - (γ_L + Γ_L)/2)(iΔ - γ_R/2) + J²]`.
pub fn transmission_amplitude(delta: f64, sp: &ScatteringParams) -> Complex64 {
    let i_d = Complex64::new(0.0, delta);
    let right = i_d - 0.5 * sp.gamma_r;
    let j2 = sp.j * sp.j;
    let num = (i_d - 0.5 * sp.gamma_l) * right + j2;
    let den = (i_d - 0.5 * (sp.gamma_l + sp.big_gamma_l)) * right + j2;
    num / den
}

/// `χ = -i (t - 1) / t`.
pub fn susceptibility_from_transmission(t: Complex64) -> Result<Complex64> {
    if t == Complex64::new(0.0, 0.0) {
        return Err(Error::TransmissionPole);
    }
    Ok(-Complex64::i() * (t - 1.0) / t)
}

/// `χ = Γ_L (Δ + iγ_R/2) / [2J² - 2(Δ + iγ_L/2)(Δ + iγ_R/2)]`.
pub fn susceptibility(delta: f64, sp: &ScatteringParams) -> Complex64 {
    let right = Complex64::new(delta, 0.5 * sp.gamma_r);
    let left = Complex64::new(delta, 0.5 * sp.gamma_l);
    sp.big_gamma_l * right / (2.0 * sp.j * sp.j - 2.0 * left * right)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeakSign {
    Positive,
    Negative,
}

/// `χ(Δ) = r₊/(Δ - p₊) + r₋/(Δ - p₋)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleDecomposition {
    pub poles: [Complex64; 2],
    pub residues: [Complex64; 2],
    /// Sign of the dominant extremum of `Im` of each term on the real axis.
    pub peak_signs: [PeakSign; 2],
}

impl PoleDecomposition {
    pub fn terms(&self, delta: f64) -> [Complex64; 2] {
        [0, 1].map(|k| self.residues[k] / (delta - self.poles[k]))
    }

    pub fn eval(&self, delta: f64) -> Complex64 {
        let [a, b] = self.terms(delta);
        a + b
    }
}

pub fn decompose_poles(sp: &ScatteringParams) -> Result<PoleDecomposition> {
    sp.validate()?;
    let s = 0.5 * (sp.gamma_l + sp.gamma_r);
    let diff = 0.5 * (sp.gamma_l - sp.gamma_r);
    let root = Complex64::new(4.0 * sp.j * sp.j - diff * diff, 0.0).sqrt();
    let base = Complex64::new(0.0, -s);
    let poles = [(base + root) / 2.0, (base - root) / 2.0];
    let gap = poles[0] - poles[1];
    if gap.norm() <= 1e-12 * sp.big_gamma_l {
        return Err(Error::DegeneratePoles {
            pole_re: poles[0].re,
            pole_im: poles[0].im,
        });
    }
    let half_gamma = 0.5 * sp.big_gamma_l;
    let shift = Complex64::new(0.0, 0.5 * sp.gamma_r);
    let residues = [
        -half_gamma * (poles[0] + shift) / gap,
        -half_gamma * (poles[1] + shift) / -gap,
    ];
    // Im[r / (x + ib)] has extrema (-Re r ± |r|) / (2b): the larger one in
    // magnitude has the sign of -Re r.
    let peak_signs = residues.map(|r| {
        if r.re > 0.0 {
            PeakSign::Negative
        } else {
            PeakSign::Positive
        }
    });
    Ok(PoleDecomposition {
        poles,
        residues,
        peak_signs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Opposite-sign Lorentzians: interference-induced transparency.
    Interference,
    /// Two positive Lorentzians: coupling-induced splitting.
    Splitting,
    /// No edge-edge coupling.
    None,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Interference => "interference",
            Regime::Splitting => "splitting",
            Regime::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transparency {
    pub regime: Regime,
    /// Distance between the two absorption maxima of `1 - |t|²`.
    pub peak_distance: Option<f64>,
    /// `peak_distance < 2J`.
    pub below_two_j: Option<bool>,
}

pub fn classify_transparency(sp: &ScatteringParams) -> Result<Transparency> {
    sp.validate()?;
    if sp.j == 0.0 {
        return Ok(Transparency {
            regime: Regime::None,
            peak_distance: None,
            below_two_j: None,
        });
    }
    let regime = match decompose_poles(sp) {
        Ok(d) if d.peak_signs[0] != d.peak_signs[1] => Regime::Interference,
        Ok(_) => Regime::Splitting,
        // at the exceptional point the two resonances have merged
        Err(Error::DegeneratePoles { .. }) => Regime::Splitting,
        Err(e) => return Err(e),
    };
    let peak_distance = absorption_peaks(sp)?.map(|(a, b)| b - a);
    Ok(Transparency {
        regime,
        peak_distance,
        below_two_j: peak_distance.map(|d| d < 2.0 * sp.j),
    })
}

/// The two highest maxima of `1 - |t(Δ)|²`, ascending, located on a grid
/// and polished by golden-section search.
pub fn absorption_peaks(sp: &ScatteringParams) -> Result<Option<(f64, f64)>> {
    let absorption = |d: f64| 1.0 - transmission_amplitude(d, sp).norm_sqr();
    let span = 3.0 * sp.j + sp.gamma_l + sp.gamma_r + 0.05 * sp.big_gamma_l;
    let grid = linspace(-span, span, 40_001);
    let values: Vec<f64> = grid.iter().map(|d| absorption(*d)).collect();
    let mut peaks = find_peaks(&grid, &values)?;
    if peaks.len() < 2 {
        return Ok(None);
    }
    peaks.sort_by(|a, b| b.height.total_cmp(&a.height));
    let step = grid[1] - grid[0];
    let mut pos = [peaks[0].position, peaks[1].position]
        .map(|x| golden_max(&absorption, x - 2.0 * step, x + 2.0 * step));
    pos.sort_by(f64::total_cmp);
    Ok(Some((pos[0], pos[1])))
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Superatom parameters derived from the array model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superatom {
    /// Dimensionless parameters (rates divided by `Γ_L`).
    pub params: ScatteringParams,
    /// `J = cos φ g0²/Δ0` in rad/μs.
    pub coupling: f64,
    /// Edge-state cavity coupling `g_L = g_R = sqrt(cos φ) g0` in rad/μs.
    pub edge_cavity_coupling: f64,
    /// Offset `g_L²/Δ0` between `Δ_p` and the bare probe detuning, rad/μs.
    pub probe_offset: f64,
}

/// Map the array and dispersive cavity onto the superatom. Bulk modes are
/// dropped. Rates are in rad/μs.
pub fn superatom_from_system(
    array: &ArrayParams,
    disp: &DispersiveParams,
    gamma_l: f64,
    gamma_r: f64,
    big_gamma_l: f64,
) -> Result<Superatom> {
    array.validate()?;
    disp.validate()?;
    if !array.is_topological() {
        return Err(Error::UnsupportedRegime("superatom needs edge states (t1 < t2)"));
    }
    let g_edge = edge_coupling_limit(array.phi)? * disp.g0;
    let coupling = g_edge * g_edge / disp.detuning;
    let params = ScatteringParams {
        j: coupling / big_gamma_l,
        gamma_l: gamma_l / big_gamma_l,
        gamma_r: gamma_r / big_gamma_l,
        big_gamma_l: 1.0,
    };
    params.validate()?;
    Ok(Superatom {
        params,
        coupling,
        edge_cavity_coupling: g_edge,
        probe_offset: coupling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{ghz, mhz};
    use core::f64::consts::PI;

    fn fig5(j: f64) -> ScatteringParams {
        ScatteringParams {
            j,
            gamma_l: 0.15,
            gamma_r: 5e-4,
            big_gamma_l: 1.0,
        }
    }

    #[test]
    fn resonant_transmission_without_coupling() {
        let t = transmission_amplitude(0.0, &fig5(0.0));
        assert!((t.norm_sqr() - (0.15f64 / 1.15).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn coupling_opens_a_window() {
        let t0 = transmission_amplitude(0.0, &fig5(0.0)).norm_sqr();
        let t1 = transmission_amplitude(0.0, &fig5(0.035)).norm_sqr();
        assert!(t1 > t0);
    }

    #[test]
    fn far_detuned_photons_pass() {
        for d in [-1e6, 1e6] {
            assert!((transmission_amplitude(d, &fig5(0.05)) - 1.0).norm() < 1e-5);
        }
    }

    #[test]
    fn resonant_susceptibility() {
        // Γ_L (iγ_R/2) / (-2 (iγ_L/2)(iγ_R/2)) = iΓ_L/γ_L
        let chi = susceptibility(0.0, &fig5(0.0));
        assert!((chi - Complex64::new(0.0, 1.0 / 0.15)).norm() < 1e-12);
    }

    #[test]
    fn no_probe_coupling_no_response() {
        let sp = ScatteringParams {
            big_gamma_l: 0.0,
            ..fig5(0.02)
        };
        assert_eq!(susceptibility(0.3, &sp), Complex64::new(0.0, 0.0));
        assert!(sp.validate().is_err());
    }

    #[test]
    fn susceptibility_forms_agree() {
        let sp = fig5(0.035);
        for i in -50..=50 {
            let d = i as f64 * 0.004;
            let t = transmission_amplitude(d, &sp);
            let chi = susceptibility_from_transmission(t).unwrap();
            assert!((chi - susceptibility(d, &sp)).norm() < 1e-10 * (1.0 + chi.norm()));
            let back = 1.0 / (1.0 - Complex64::i() * chi);
            assert!((back - t).norm() < 1e-12);
        }
        assert!(matches!(
            susceptibility_from_transmission(Complex64::new(0.0, 0.0)),
            Err(Error::TransmissionPole)
        ));
    }

    #[test]
    fn interference_regime() {
        let d = decompose_poles(&fig5(0.035)).unwrap();
        assert!(d.poles.iter().all(|p| p.im < 0.0));
        assert_ne!(d.peak_signs[0], d.peak_signs[1]);
        // poles -0.02451i and -0.05074i from the quadratic formula
        let mut im: Vec<f64> = d.poles.iter().map(|p| p.im).collect();
        im.sort_by(f64::total_cmp);
        assert!((im[0] + 0.050_74).abs() < 1e-4 && (im[1] + 0.024_51).abs() < 1e-4);
        assert_eq!(classify_transparency(&fig5(0.035)).unwrap().regime, Regime::Interference);
    }

    #[test]
    fn splitting_regime() {
        let d = decompose_poles(&fig5(0.075)).unwrap();
        assert_eq!(d.peak_signs, [PeakSign::Positive; 2]);
        assert!(d.residues.iter().all(|r| (r.re + 0.25).abs() < 1e-12));
        let c = classify_transparency(&fig5(0.075)).unwrap();
        assert_eq!(c.regime, Regime::Splitting);
        let dist = c.peak_distance.unwrap();
        assert!((dist - 0.15).abs() < 0.01);
    }

    #[test]
    fn zero_coupling() {
        let d = decompose_poles(&fig5(0.0)).unwrap();
        let weights: Vec<f64> = d.residues.iter().map(|r| r.norm()).collect();
        assert!(weights.iter().any(|w| *w < 1e-15));
        assert_eq!(classify_transparency(&fig5(0.0)).unwrap().regime, Regime::None);
    }

    #[test]
    fn exceptional_point() {
        // 4J² = ((γ_L - γ_R)/2)²
        let sp = fig5(0.25 * (0.15 - 5e-4));
        assert!(matches!(decompose_poles(&sp), Err(Error::DegeneratePoles { .. })));
    }

    #[test]
    fn decomposition_reconstructs() {
        for j in [0.01, 0.035, 0.075, 0.3] {
            let sp = fig5(j);
            let d = decompose_poles(&sp).unwrap();
            let worst = linspace(-10.0, 10.0, 10_000)
                .into_iter()
                .map(|x| (d.eval(x) - susceptibility(x, &sp)).norm())
                .fold(0.0f64, f64::max);
            assert!(worst < 1e-10, "J = {j}: {worst}");
        }
    }

    #[test]
    fn transmission_modulus_is_even() {
        // every coefficient except iΔ is real, so t(-Δ) = conj t(Δ) for any
        // rates, equal or not
        for sp in [
            fig5(0.035),
            ScatteringParams {
                gamma_r: 0.15,
                ..fig5(0.035)
            },
        ] {
            for d in [0.01, 0.02, 0.05, 0.3] {
                let a = transmission_amplitude(d, &sp);
                let b = transmission_amplitude(-d, &sp);
                assert!((a - b.conj()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn superatom_reference() {
        let array = ArrayParams::new(6, ghz(6.0), mhz(100.0), 0.1 * PI).unwrap();
        let disp = DispersiveParams {
            g0: mhz(5.0),
            detuning: mhz(50.0),
            include_decay: false,
            kappa: mhz(10.0),
        };
        let s = superatom_from_system(&array, &disp, mhz(0.15), mhz(5e-4), mhz(1.0)).unwrap();
        assert!((s.coupling / mhz(1.0) - 0.48).abs() < 5e-3);
        assert!((s.params.gamma_l - 0.15).abs() < 1e-12);
        let crit = array.at_phi(0.5 * PI).unwrap();
        assert!(superatom_from_system(&crit, &disp, 1.0, 1.0, 1.0).is_err());
        let near = array.at_phi(0.5 * PI - 1e-6).unwrap();
        let s = superatom_from_system(&near, &disp, 1.0, 1.0, 1.0).unwrap();
        assert!(s.coupling.abs() < 1e-5);
    }
}
