//! One-sided limits `lim_{ε→0⁺} g(ε)` by polynomial extrapolation.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitResult {
    pub value: Complex64,
    pub error_estimate: f64,
    /// Set when successive raw samples stop getting closer as `ε` decreases.
    pub diverged: bool,
}

impl LimitResult {
    pub fn require(self) -> Result<Complex64> {
        if self.diverged {
            Err(Error::Divergence(format!(
                "samples do not settle (last value {}, error {:e})",
                self.value, self.error_estimate
            )))
        } else {
            Ok(self.value)
        }
    }
}

/// Extrapolates `g` to `ε = 0` from samples at the decreasing positive
/// `steps`, using a Neville tableau. The order with the smallest disagreement
/// between the two most recent point sets is reported.
pub fn boundary_limit<G>(g: G, steps: &[f64]) -> Result<LimitResult>
where
    G: Fn(f64) -> Complex64,
{
    if steps.len() < 2 {
        return Err(Error::Precondition("boundary_limit needs at least two steps".into()));
    }
    if steps.windows(2).any(|w| !(w[1] < w[0])) || steps.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Precondition("steps must be positive and strictly decreasing".into()));
    }
    let samples: Vec<Complex64> = steps.iter().map(|&e| g(e)).collect();
    if samples.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Divergence("non-finite sample".into()));
    }
    let m = samples.len();
    // table[i][j]: interpolant through points i-j..=i evaluated at 0
    let mut table = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    for i in 0..m {
        table[i][0] = samples[i];
        for j in 1..=i {
            let (ea, eb) = (steps[i - j], steps[i]);
            table[i][j] = (table[i][j - 1] * ea - table[i - 1][j - 1] * eb) / (ea - eb);
        }
    }
    let last = m - 1;
    let mut best = (samples[last], (samples[last] - samples[last - 1]).norm());
    for j in 1..last {
        let err = (table[last][j] - table[last - 1][j]).norm();
        if err < best.1 {
            best = (table[last][j], err);
        }
    }

    let diffs: Vec<f64> = samples.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let floor = 1e-13 * samples[last].norm().max(1e-300);
    let diverged = diffs.windows(2).any(|d| d[1] > 0.9 * d[0] + floor);
    Ok(LimitResult { value: best.0, error_estimate: best.1, diverged })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    const STEPS: [f64; 5] = [1e-3, 1e-4, 1e-5, 1e-6, 1e-7];

    #[test]
    fn linear_limit() {
        let r = boundary_limit(|e| c(2.5 + e), &STEPS).unwrap();
        assert!((r.value.re - 2.5).abs() < 1e-14);
        assert!(!r.diverged);
    }

    #[test]
    fn log_perturbed_limit() {
        let r = boundary_limit(|e| c(-0.75 + e * e.ln()), &STEPS).unwrap();
        assert!((r.value.re + 0.75).abs() < 1e-6, "{}", r.value.re);
        assert!(!r.diverged);
    }

    #[test]
    fn divergence_flagged() {
        let r = boundary_limit(|e| c(e.ln()), &STEPS).unwrap();
        assert!(r.diverged);
        let r = boundary_limit(|e| c(1.0 / e), &STEPS).unwrap();
        assert!(r.diverged);
        assert!(r.require().is_err());
    }

    #[test]
    fn bad_steps() {
        assert!(boundary_limit(c, &[1e-3, 1e-2]).is_err());
        assert!(boundary_limit(c, &[1e-3]).is_err());
    }
}
