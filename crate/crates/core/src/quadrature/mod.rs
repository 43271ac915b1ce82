//! Adaptive quadrature for complex integrands on finite intervals and
//! half-lines, principal values with one interior pole, and `ε → 0⁺`
//! boundary-limit extrapolation.
//!
//! The adaptive rule pairs 10- and 21-point Gauss–Legendre on each panel and
//! bisects the panel with the largest error estimate. The double-exponential
//! rules in [`oracle`] are an independent implementation used for
//! cross-checks only.

mod gauss;
pub mod limit;
pub mod oracle;
pub mod pv;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use limit::{boundary_limit, LimitResult};
pub use pv::principal_value;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Half-line integration stops once a panel contributes less than this
    /// (relative to the running total) twice in a row.
    pub truncation_decay_threshold: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-15,
            rel_tol: 1e-13,
            max_subdivisions: 4000,
            truncation_decay_threshold: 1e-18,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(Error::Precondition(format!("invalid quadrature configuration {self:?}")));
        }
        Ok(())
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl IntegralResult {
    fn zero() -> Self {
        Self { value: Complex64::new(0.0, 0.0), error_estimate: 0.0, evaluations: 0, converged: true }
    }

    fn add(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    /// Value, or an error if the rule did not meet its tolerance.
    pub fn require(self) -> Result<Complex64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::QuadratureNonConvergence {
                value: self.value.to_string(),
                error: self.error_estimate,
            })
        }
    }

    pub fn scale(self, c: Complex64) -> Self {
        Self { value: self.value * c, error_estimate: self.error_estimate * c.norm(), ..self }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    /// Roundoff level of the panel; subdividing cannot push `error` below it.
    floor: f64,
}

impl Panel {
    fn excess(&self) -> f64 {
        (self.error - self.floor).max(0.0)
    }
}

fn eval<F: Fn(f64) -> Complex64>(f: &F, t: f64) -> Result<Complex64> {
    let v = f(t);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::IntegrandFailure { abscissa: t })
    }
}

fn panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let hi = gauss::high();
    let lo = gauss::low();
    let mut fine = Complex64::new(0.0, 0.0);
    for (x, w) in hi.nodes.iter().zip(&hi.weights) {
        if *x == 0.0 {
            fine += eval(f, c)? * *w;
        } else {
            fine += (eval(f, c - h * x)? + eval(f, c + h * x)?) * *w;
        }
    }
    let mut coarse = Complex64::new(0.0, 0.0);
    for (x, w) in lo.nodes.iter().zip(&lo.weights) {
        coarse += (eval(f, c - h * x)? + eval(f, c + h * x)?) * *w;
    }
    let value = fine * h;
    let error = ((fine - coarse) * h).norm();
    // floor at roundoff level of the panel sum
    let floor = 50.0 * f64::EPSILON * value.norm();
    Ok(Panel { a, b, value, error: error.max(floor), floor })
}

const PANEL_EVALS: usize = 41;

/// Globally adaptive integration over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64,
{
    cfg.validate()?;
    if a == b {
        return Ok(IntegralResult::zero());
    }
    if a > b {
        let r = integrate(f, b, a, cfg)?;
        return Ok(IntegralResult { value: -r.value, ..r });
    }
    let mut panels = vec![panel(&f, a, b)?];
    let mut evaluations = PANEL_EVALS;
    let mut subdivisions = 0;
    loop {
        let total: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        // panels already at roundoff level do not block convergence of a
        // cancelling (e.g. oscillatory) integrand
        let excess: f64 = panels.iter().map(Panel::excess).sum();
        if err <= cfg.target(total) || excess <= cfg.target(total) {
            return Ok(IntegralResult { value: total, error_estimate: err, evaluations, converged: true });
        }
        let (idx, worst) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.excess().total_cmp(&y.1.excess()))
            .map(|(i, p)| (i, *p))
            .expect("non-empty panel list");
        let mid = 0.5 * (worst.a + worst.b);
        if subdivisions >= cfg.max_subdivisions || mid <= worst.a || mid >= worst.b {
            return Ok(IntegralResult { value: total, error_estimate: err, evaluations, converged: false });
        }
        let left = panel(&f, worst.a, mid)?;
        let right = panel(&f, mid, worst.b)?;
        evaluations += 2 * PANEL_EVALS;
        subdivisions += 1;
        panels[idx] = left;
        panels.push(right);
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    integrate(|t| Complex64::new(f(t), 0.0), a, b, cfg)
}

/// Integral over `[c, ∞)` using panels of doubling width starting at
/// `scale`. Integration stops when two consecutive panels are negligible.
pub fn integrate_halfline_scaled<F>(f: F, c: f64, scale: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64,
{
    cfg.validate()?;
    if !(scale > 0.0) {
        return Err(Error::Precondition(format!("panel scale must be positive, got {scale}")));
    }
    let mut total = IntegralResult::zero();
    let mut left = c;
    let mut width = scale;
    let mut quiet = 0;
    for _ in 0..400 {
        let right = left + width;
        let part = integrate(&f, left, right, cfg)?;
        total = total.add(part);
        let small = part.value.norm() + part.error_estimate
            <= cfg.truncation_decay_threshold * total.value.norm().max(cfg.abs_tol);
        quiet = if small { quiet + 1 } else { 0 };
        if quiet >= 2 {
            return Ok(total);
        }
        left = right;
        width *= 2.0;
        if !left.is_finite() {
            break;
        }
    }
    Ok(IntegralResult { converged: false, ..total })
}

/// Integral over `[c, ∞)` with unit initial panel width.
pub fn integrate_halfline<F>(f: F, c: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_halfline_scaled(f, c, 1.0, cfg)
}
