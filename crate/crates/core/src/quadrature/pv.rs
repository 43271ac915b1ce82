//! Cauchy principal value with a single simple pole.

use num_complex::Complex64;

use super::{integrate, integrate_halfline_scaled, IntegralResult, QuadratureConfig};
use crate::error::{Error, Result};

/// Estimate of the residue `r` in `f(t) = r/(t - t₀) + smooth`, from the odd
/// part `h·(f(t₀+h) − f(t₀−h))/2 = r + O(h²)` at shrinking `h`.
///
/// Fails when the even part `h·(f(t₀+h) + f(t₀−h))/2` does not vanish as
/// `h → 0` (higher-order pole) or the odd part does not settle.
pub fn residue_estimate<F>(f: &F, t0: f64, width: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64,
{
    let hs = [width * 1e-2, width * 1e-3, width * 1e-4];
    let odd: Vec<Complex64> = hs.iter().map(|&h| (f(t0 + h) - f(t0 - h)) * (0.5 * h)).collect();
    let even: Vec<Complex64> = hs.iter().map(|&h| (f(t0 + h) + f(t0 - h)) * (0.5 * h)).collect();
    if odd.iter().chain(&even).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::PrincipalValue(format!("non-finite samples next to the pole t₀ = {t0}")));
    }
    let scale = odd[2].norm().max(1e-300);
    let d1 = (odd[0] - odd[1]).norm();
    let d2 = (odd[1] - odd[2]).norm();
    // second-order convergence: differences shrink ~100× per step
    let settling = d2 <= 0.1 * d1 + 1e-9 * scale;
    // the even part is O(h) for a simple pole
    let even_vanishing = even[2].norm() <= 0.5 * even[1].norm() + 1e-9 * scale
        && even[1].norm() <= 0.5 * even[0].norm() + 1e-9 * scale;
    if !settling || !even_vanishing {
        return Err(Error::PrincipalValue(format!(
            "residue estimate at t₀ = {t0} does not stabilize (odd parts {:?}, even parts {:?})",
            odd, even
        )));
    }
    Ok((odd[2], d2))
}

/// P.V. of `∫ f` over `[lower, upper]` (`upper = ∞` allowed) with a simple
/// pole at interior `t₀`.
///
/// The symmetric window `[t₀ − w, t₀ + w]` is folded onto `[0, w]`, where the
/// pole terms cancel: `∫₀^w (f(t₀+s) + f(t₀−s)) ds`. The rest is ordinary
/// quadrature. The reported error includes the cancellation residual of the
/// fold, proportional to the residue.
pub fn principal_value<F>(f: F, t0: f64, lower: f64, upper: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64,
{
    if !(t0 > lower && t0 < upper) {
        return Err(Error::Precondition(format!("pole t₀ = {t0} not interior to [{lower}, {upper}]")));
    }
    let w = if upper.is_finite() { (t0 - lower).min(upper - t0) } else { t0 - lower };
    let (residue, _) = residue_estimate(&f, t0, w)?;

    let folded = integrate(|s| f(t0 + s) + f(t0 - s), 0.0, w, cfg)?;
    let mut total = folded;
    if t0 - w > lower {
        total = total.add(integrate(&f, lower, t0 - w, cfg)?);
    }
    if upper.is_finite() {
        if t0 + w < upper {
            total = total.add(integrate(&f, t0 + w, upper, cfg)?);
        }
    } else {
        total = total.add(integrate_halfline_scaled(&f, t0 + w, w.max(1e-3), cfg)?);
    }
    total.error_estimate += 100.0 * f64::EPSILON * residue.norm();
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::oracle;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn odd_symmetry_gives_zero() {
        let r = principal_value(|t| c(1.0 / (t - 1.0)), 1.0, 0.0, 2.0, &QuadratureConfig::default()).unwrap();
        assert!(r.value.norm() < 1e-14);
    }

    #[test]
    fn linear_over_pole() {
        // antiderivative t + 2 ln|t − 2| on (0, 4)
        let r = principal_value(|t| c(t / (t - 2.0)), 2.0, 0.0, 4.0, &QuadratureConfig::default()).unwrap();
        assert!((r.value.re - 4.0).abs() < 1e-13);
    }

    #[test]
    fn exponential_over_pole_matches_excision_extrapolation() {
        let f = |t: f64| c((-t).exp() / (t - 1.0));
        let r = principal_value(f, 1.0, 0.0, f64::INFINITY, &QuadratureConfig::default()).unwrap();
        // excision oracle: symmetric gap of half-width h, extrapolated in h
        let excised = |h: f64| {
            let left = oracle::de_finite(f, 0.0, 1.0 - h, 1e-15).unwrap();
            let right = oracle::de_halfline(f, 1.0 + h, 1e-15).unwrap();
            (left + right).re
        };
        let (e3, e4, e5) = (excised(1e-3), excised(1e-4), excised(1e-5));
        // the gap removes 2h times the regular part at t₀ plus O(h³)
        let r45 = e5 + (e5 - e4) / 9.0;
        let r34 = e4 + (e4 - e3) / 9.0;
        assert!((r45 - r34).abs() < 1e-9);
        assert!((r.value.re - r45).abs() < 1e-9, "{} vs {}", r.value.re, r45);
        // closed form: -e^{-1} Ei(1)
        let ei1 = 1.895_117_816_355_936_8;
        assert!((r.value.re + (-1f64).exp() * ei1).abs() < 1e-12);
    }

    #[test]
    fn double_pole_rejected() {
        let e = principal_value(|t| c(1.0 / ((t - 1.0) * (t - 1.0))), 1.0, 0.0, 2.0, &QuadratureConfig::default());
        assert!(matches!(e, Err(Error::PrincipalValue(_))));
    }
}
