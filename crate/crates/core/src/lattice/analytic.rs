//! Closed-form edge and bulk wavefunctions of the open SSH chain.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_traits::Float;

use super::ArrayParams;
use crate::linalg::fix_phase;
use crate::roots::{bracketed_newton, sign_change_brackets};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Lower,
    Upper,
}

/// Quantized bulk momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkMomentum {
    /// Label in `1..=N-1`.
    pub tau: usize,
    /// Momentum in `(0, pi)`.
    pub k: f64,
    pub band: Band,
}

/// `arccot(t1 / (t2 sin k) + cot k)` on the branch `(0, pi)`.
pub fn phi_of_k(k: f64, t1: f64, t2: f64) -> Result<f64> {
    if !(k > 0.0 && k < PI) {
        return Err(Error::Domain {
            name: "k",
            value: k,
            expected: "0 < k < pi",
        });
    }
    if !(t2 > 0.0) {
        return Err(Error::Domain {
            name: "t2",
            value: t2,
            expected: "t2 > 0",
        });
    }
    Ok(phase(k, t1, t2))
}

fn phase(k: f64, t1: f64, t2: f64) -> f64 {
    let (s, c) = k.sin_cos();
    (t2 * s).atan2(t1 + t2 * c)
}

fn phase_derivative(k: f64, t1: f64, t2: f64) -> f64 {
    let c = k.cos();
    t2 * (t2 + t1 * c) / (t1 * t1 + t2 * t2 + 2.0 * t1 * t2 * c)
}

/// `k (N + 1) - phi(k) - tau pi`.
pub fn quantization_residual(k: f64, n_cells: usize, tau: usize, t1: f64, t2: f64) -> f64 {
    k * (n_cells as f64 + 1.0) - phase(k, t1, t2) - tau as f64 * PI
}

fn require_topological(params: &ArrayParams) -> Result<(f64, f64)> {
    params.validate()?;
    if params.is_topological() {
        Ok(params.couplings())
    } else {
        Err(Error::UnsupportedRegime(
            "closed-form edge and bulk states need t1 < t2",
        ))
    }
}

/// The `N - 1` bulk momenta of the lower band, increasing in `tau`. The
/// upper band reuses the same set (see [`mode_momentum`]).
pub fn bulk_momenta(params: &ArrayParams) -> Result<Vec<BulkMomentum>> {
    let (t1, t2) = require_topological(params)?;
    let n = params.n_cells;
    let width = PI / (n as f64 + 1.0);
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    let mut scanned: Option<Vec<(f64, f64)>> = None;
    for tau in 1..n {
        let f = |k: f64| {
            (
                quantization_residual(k, n, tau, t1, t2),
                n as f64 + 1.0 - phase_derivative(k, t1, t2),
            )
        };
        let lo = tau as f64 * width;
        let hi = (tau + 1) as f64 * width;
        let k = match bracketed_newton(f, lo, hi, 1e-15) {
            Ok(k) => k,
            Err(_) => {
                log::debug!("quantization root {tau} not bracketed, scanning");
                let brackets = scanned.get_or_insert_with(|| {
                    sign_change_brackets(|k| scan_residual(k, n, t1, t2), 1e-9, PI - 1e-9, 200_000)
                });
                let &(a, b) = brackets.get(tau - 1).ok_or(Error::NoConvergence {
                    what: "quantization condition",
                    iterations: 0,
                    residual: f64::NAN,
                })?;
                bracketed_newton(f, a, b, 1e-15)?
            }
        };
        out.push(BulkMomentum {
            tau,
            k,
            band: Band::Lower,
        });
    }
    Ok(out)
}

/// `sin((k (N + 1) - phi(k)))` vanishes exactly at the quantized momenta.
fn scan_residual(k: f64, n: usize, t1: f64, t2: f64) -> f64 {
    (k * (n as f64 + 1.0) - phase(k, t1, t2)).sin()
}

/// Momentum of the bulk mode with 1-based index `j`: lower band for
/// `j <= N - 1`, upper band for `j >= N + 2` with `tau = 2N + 1 - j`.
pub fn mode_momentum(params: &ArrayParams, j: usize) -> Result<BulkMomentum> {
    let n = params.n_cells;
    let (tau, band) = if (1..n).contains(&j) {
        (j, Band::Lower)
    } else if (n + 2..=2 * n).contains(&j) {
        (2 * n + 1 - j, Band::Upper)
    } else {
        return Err(Error::InvalidParams(alloc::format!(
            "mode {j} is not a bulk mode of a {n}-cell array"
        )));
    };
    let lower = bulk_momenta(params)?;
    Ok(BulkMomentum {
        band,
        ..lower[tau - 1]
    })
}

/// Unit-norm bulk wavefunction: `sin(i k - phi(k))` on A sites and
/// `-/+ sin(i k)` on B sites for the lower/upper band.
pub fn analytic_bulk_state(params: &ArrayParams, km: &BulkMomentum) -> Result<Vec<f64>> {
    let (t1, t2) = require_topological(params)?;
    let phi_k = phi_of_k(km.k, t1, t2)?;
    let sign = match km.band {
        Band::Lower => -1.0,
        Band::Upper => 1.0,
    };
    let n = params.n_cells;
    let mut v = vec![0.0; 2 * n];
    for i in 1..=n {
        let x = i as f64 * km.k;
        v[2 * i - 2] = (x - phi_k).sin();
        v[2 * i - 1] = sign * x.sin();
    }
    normalize(&mut v);
    Ok(v)
}

/// Left and right edge states: geometric decay `(-t1/t2)^(i-1)` on the A
/// sites from the left end, mirrored on the B sites from the right end.
/// Normalized over the `N` sites actually present.
pub fn analytic_edge_states(params: &ArrayParams) -> Result<(Vec<f64>, Vec<f64>)> {
    let (t1, t2) = require_topological(params)?;
    let n = params.n_cells;
    let r = -t1 / t2;
    let mut left = vec![0.0; 2 * n];
    let mut right = vec![0.0; 2 * n];
    let mut amp = 1.0;
    for i in 0..n {
        left[2 * i] = amp;
        right[2 * (n - 1 - i) + 1] = amp;
        amp *= r;
    }
    normalize(&mut left);
    normalize(&mut right);
    Ok((left, right))
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
    fix_phase(v);
}

/// `sqrt(cos phi)`: cavity coupling of a localized edge state in a long array.
pub fn edge_coupling_limit(phi: f64) -> Result<f64> {
    topological_cos(phi).map(|c| c.sqrt())
}

/// `sqrt(2 cos phi)`: coupling of the even hybridized edge state.
pub fn hybrid_coupling_limit(phi: f64) -> Result<f64> {
    topological_cos(phi).map(|c| (2.0 * c).sqrt())
}

fn topological_cos(phi: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2).contains(&phi) {
        return Err(Error::Domain {
            name: "phi",
            value: phi,
            expected: "0 <= phi <= pi/2",
        });
    }
    Ok(phi.cos().max(0.0))
}
