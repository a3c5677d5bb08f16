//! Scalar root finding shared by the quantisation condition and the flux
//! relation: bracketed Newton with a bisection safeguard.

use alloc::vec::Vec;

use crate::{Error, Result};

const NEWTON_STEPS: usize = 64;
const BISECTION_STEPS: usize = 200;

/// Root of `f` in `[lo, hi]`, where `f` returns `(value, derivative)`.
///
/// Newton steps that leave the current bracket are replaced by bisection;
/// after `NEWTON_STEPS` the search continues by plain bisection.
pub(crate) fn bracketed_newton<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let (f_lo, _) = f(lo);
    let (f_hi, _) = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoConvergence {
            what: "bracketed root search (no sign change)",
            iterations: 0,
            residual: f_lo.abs().min(f_hi.abs()),
        });
    }
    let lo_sign = f_lo.signum();

    let mut x = 0.5 * (lo + hi);
    for _ in 0..NEWTON_STEPS {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - fx / dfx;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= xtol {
            return Ok(next);
        }
        x = next;
    }

    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let (fm, _) = f(mid);
        if fm == 0.0 || hi - lo <= xtol {
            return Ok(mid);
        }
        if fm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    Err(Error::NoConvergence {
        what: "bracketed root search",
        iterations: NEWTON_STEPS + BISECTION_STEPS,
        residual: f(mid).0.abs(),
    })
}

/// Sub-intervals of `[a, b]` (split into `n` equal cells) on which `f`
/// changes sign.
pub(crate) fn sign_change_brackets<F>(f: F, a: f64, b: f64, n: usize) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let mut out = Vec::new();
    let h = (b - a) / n as f64;
    let mut x0 = a;
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = if i == n { b } else { a + h * i as f64 };
        let f1 = f(x1);
        if f0 == 0.0 || f0.signum() != f1.signum() {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Float;

    #[test]
    fn finds_sqrt_two() {
        let r = bracketed_newton(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn survives_flat_derivative() {
        // Newton from the midpoint of [-1, 3] hits f' = 0 at x = 1.
        let r = bracketed_newton(|x| ((x - 1.0).powi(3) - 0.5, 3.0 * (x - 1.0).powi(2)), -1.0, 3.0, 1e-14)
            .unwrap();
        assert!((r - (1.0 + 0.5f64.cbrt())).abs() < 1e-12);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(bracketed_newton(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn brackets_all_roots() {
        let b = sign_change_brackets(|x| x.sin(), 0.5, 10.0, 1000);
        assert_eq!(b.len(), 3);
    }
}
