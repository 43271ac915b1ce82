//! Double-exponential quadrature (tanh-sinh on finite intervals, exp-sinh on
//! half-lines). Nodes are generated on the fly at each refinement level; this
//! module shares nothing with the adaptive Gauss rule and serves as an
//! independent reference for it.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_LEVEL: usize = 12;

fn finite(v: Complex64, t: f64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::IntegrandFailure { abscissa: t })
    }
}

/// Trapezoidal sum in the transformed variable with step `h`; only the odd
/// multiples of `h` are summed when `odd_only` is set.
fn sweep<G>(g: &G, h: f64, odd_only: bool) -> Result<Complex64>
where
    G: Fn(f64) -> Result<Option<Complex64>>,
{
    let mut sum = Complex64::new(0.0, 0.0);
    let step = if odd_only { 2 } else { 1 };
    if !odd_only {
        if let Some(v) = g(0.0)? {
            sum += v;
        }
    }
    for dir in [1.0, -1.0] {
        let mut k = 1;
        loop {
            let x = dir * k as f64 * h;
            match g(x)? {
                Some(v) => sum += v,
                None => break,
            }
            k += step;
            if k as f64 * h > 8.0 {
                break;
            }
        }
    }
    Ok(sum)
}

fn refine<G>(g: G, tol: f64) -> Result<Complex64>
where
    G: Fn(f64) -> Result<Option<Complex64>>,
{
    let mut h = 0.5;
    let mut raw = sweep(&g, h, false)?;
    let mut estimate = raw * h;
    for _ in 0..MAX_LEVEL {
        h *= 0.5;
        raw += sweep(&g, h, true)?;
        let next = raw * h;
        let diff = (next - estimate).norm();
        estimate = next;
        if diff <= tol * estimate.norm().max(1e-300) && h < 0.2 {
            return Ok(estimate);
        }
    }
    Ok(estimate)
}

/// Tanh-sinh rule on `[a, b]`; handles integrable endpoint singularities.
pub fn de_finite<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let half = 0.5 * (b - a);
    let g = |x: f64| -> Result<Option<Complex64>> {
        let u = FRAC_PI_2 * x.sinh();
        let e = (2.0 * u.abs()).exp();
        // distance from the nearer endpoint, computed without cancellation
        let delta = (b - a) / (1.0 + e);
        let w = half * FRAC_PI_2 * x.cosh() * 4.0 / ((1.0 + e) * (1.0 + 1.0 / e));
        if delta == 0.0 || w == 0.0 || !w.is_finite() {
            return Ok(None);
        }
        let t = if x > 0.0 { b - delta } else if x < 0.0 { a + delta } else { 0.5 * (a + b) };
        if t <= a || t >= b {
            return Ok(None);
        }
        let v = finite(f(t), t)?;
        Ok(Some(v * w))
    };
    refine(g, tol)
}

/// Exp-sinh rule on `[c, ∞)` for decaying integrands.
pub fn de_halfline<F>(f: F, c: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let g = |x: f64| -> Result<Option<Complex64>> {
        let u = FRAC_PI_2 * x.sinh();
        let s = u.exp();
        let w = FRAC_PI_2 * x.cosh() * s;
        if s == 0.0 || !s.is_finite() || !w.is_finite() || w == 0.0 {
            return Ok(None);
        }
        let t = c + s;
        if t == c {
            return Ok(None);
        }
        let v = finite(f(t), t)?;
        if x > 3.0 && v.norm() * w < 1e-300 {
            return Ok(None);
        }
        Ok(Some(v * w))
    };
    refine(g, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn finite_polynomial_and_singular() {
        let v = de_finite(|t| c(t * t), 0.0, 3.0, 1e-14).unwrap();
        assert!((v.re - 9.0).abs() < 1e-13);
        let v = de_finite(|t| c(1.0 / t.sqrt()), 0.0, 1.0, 1e-14).unwrap();
        assert!((v.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn halfline_gamma_values() {
        let v = de_halfline(|t| c((-t).exp()), 0.0, 1e-14).unwrap();
        assert!((v.re - 1.0).abs() < 1e-13);
        let v = de_halfline(|t| c((-t).exp() / t.sqrt()), 0.0, 1e-14).unwrap();
        assert!((v.re - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let v = de_halfline(|t| c((-t).exp()), 2.0, 1e-14).unwrap();
        assert!((v.re - (-2f64).exp()).abs() < 1e-14);
    }
}
