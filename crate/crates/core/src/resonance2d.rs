//! Continuation of the single-site line function `φ_a` across the interval
//! `(−α²/4, 0)` and second-sheet resonance poles.
//!
//! With `t = u²` the line function reads
//!
//! ```text
//! φ_a(z) = ∫₀^∞ N(u) / (u² − w) du,   w = z + α²/4,
//! N(u)   = (iα/8π) (α − 2iσ) e^{2iσa} / σ,   σ = (z − u²)^{1/2}
//! ```
//!
//! At the pole `u₀² = w` one has `σ = iα/2` whatever `z` is, so
//! `N(u₀) = (α/2π) e^{−αa}` is a constant; it is subtracted and its integral
//! taken in closed form. The lower-sheet continuation adds twice the
//! boundary jump `g(z) = (iα/4) e^{−αa} / √w`.

use std::f64::consts::PI;

use nalgebra as na;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, integrate, integrate_halfline_scaled, principal_value, QuadratureConfig};
use crate::roots::{complex_secant, SecantOptions};
use crate::specfun::{macdonald_k0, point_only_eigenvalue, s_beta, s_beta_real, s_beta_real_derivative, k1_real, sqrt_cut_positive};
use crate::spectrum2d::{symmetric_pair_spectrum_with, SpectrumOptions};
use crate::system::{Dimension, LowerRegion, Sheet, SheetPoint};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceOptions {
    /// Largest admissible `|η|` at a pole.
    pub pole_tol: f64,
    pub quad: QuadratureConfig,
    pub region: LowerRegion,
    pub max_iter: usize,
}

impl Default for ResonanceOptions {
    fn default() -> Self {
        Self {
            pole_tol: 1e-10,
            quad: QuadratureConfig::default(),
            region: LowerRegion::default(),
            max_iter: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub z: Complex64,
    pub residual: f64,
    pub seed: Complex64,
    pub iterations: usize,
    pub derivative_estimate: Complex64,
    /// False when `|Im z|` is below the noise floor of the iteration; the
    /// imaginary part is then reported as `0` if it came out positive.
    pub width_resolved: bool,
}

impl Pole {
    pub fn position(&self) -> f64 {
        self.z.re
    }

    pub fn width(&self) -> f64 {
        -2.0 * self.z.im
    }
}

fn check_sheet(z: SheetPoint, alpha: f64) -> Result<()> {
    let t = 0.25 * alpha * alpha;
    let ok = match z.sheet {
        // the physical sheet includes the real axis below the threshold
        Sheet::Upper => z.z.im > 0.0 || (z.z.im == 0.0 && z.z.re < -t),
        Sheet::Interval => z.z.im == 0.0 && z.z.re > -t && z.z.re < 0.0,
        Sheet::LowerSecond => z.z.im < 0.0,
    };
    if ok && z.z.re.is_finite() && z.z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::SheetMismatch(format!("{} does not lie on the {:?} sheet", z.z, z.sheet)))
    }
}

/// Spectral density `μ(z, t) = (iα/16π)(α − 2iσ) e^{2iσa} / (√t σ)`,
/// `σ = (z − t)^{1/2}` on the first sheet. Real on the interval sheet.
pub fn mu_density(z: SheetPoint, t: f64, alpha: f64, a: f64) -> Result<Complex64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("μ(z, t) needs t > 0, got {t}")));
    }
    if z.z == c(t) {
        return Err(Error::Domain(format!("μ(z, t) is singular at z = t = {t}")));
    }
    if z.sheet == Sheet::Interval {
        let r = (t - z.z.re).sqrt();
        return Ok(c(alpha / (16.0 * PI) * (alpha + 2.0 * r) * (-2.0 * r * a).exp() / (t.sqrt() * r)));
    }
    let sigma = sqrt_cut_positive(z.z - t);
    Ok(I * alpha / (16.0 * PI) * (alpha - 2.0 * I * sigma) * (2.0 * I * sigma * a).exp() / (t.sqrt() * sigma))
}

fn numerator(z: Complex64, u: f64, alpha: f64, a: f64) -> Complex64 {
    let sigma = sqrt_cut_positive(z - u * u);
    I * alpha / (8.0 * PI) * (alpha - 2.0 * I * sigma) * (2.0 * I * sigma * a).exp() / sigma
}

/// `g(z) = (iα/4) e^{−αa} / (z + α²/4)^{1/2}` (principal root), the jump of
/// `φ_a` across the interval is `2g`.
pub fn boundary_jump(z: Complex64, alpha: f64, a: f64) -> Complex64 {
    I * alpha / 4.0 * (-alpha * a).exp() / (z + 0.25 * alpha * alpha).sqrt()
}

/// First-sheet integral `∫₀^∞ N(u)/(u² − w) du` for `w ∉ [0, ∞)`.
fn direct_integral(z: Complex64, alpha: f64, a: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let w = z + 0.25 * alpha * alpha;
    let u0 = w.sqrt();
    let n0 = alpha / (2.0 * PI) * (-alpha * a).exp();
    let cut = 2.0 * u0.norm() + 1.0;
    let near = integrate(|u| (numerator(z, u, alpha, a) - n0) / (u * u - w), 0.0, cut, cfg)?.require()?;
    let tail = integrate_halfline_scaled(
        |u| numerator(z, u, alpha, a) / (u * u - w),
        cut,
        (0.5 / a).min(1.0),
        cfg,
    )?
    .require()?;
    // ∫₀^∞ du/(u² − w) = (π/2)/√(−w); ∫_cut^∞ du/(u² − w) = ln((cut + u₀)/(cut − u₀))/(2u₀)
    let full = PI / 2.0 / (-w).sqrt();
    let outer = ((cut + u0) / (cut - u0)).ln() / (2.0 * u0);
    Ok(near + tail + n0 * (full - outer))
}

/// Boundary value on the interval: P.V. integral plus `g(λ)`.
fn interval_value(lambda: f64, alpha: f64, a: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let z = c(lambda);
    let w = lambda + 0.25 * alpha * alpha;
    let u0 = w.sqrt();
    let pv = principal_value(|u| numerator(z, u, alpha, a) / (u * u - w), u0, 0.0, f64::INFINITY, cfg)?.require()?;
    Ok(c(pv.re) + boundary_jump(z, alpha, a))
}

/// Continued line function `φ_a^{l(z)}(z)`.
pub fn phi_continued(z: SheetPoint, alpha: f64, a: f64) -> Result<Complex64> {
    phi_continued_with(z, alpha, a, &QuadratureConfig::default())
}

pub fn phi_continued_with(z: SheetPoint, alpha: f64, a: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    if !(alpha > 0.0) || !(a > 0.0) {
        return Err(Error::Precondition(format!("need α > 0 and a > 0, got α = {alpha}, a = {a}")));
    }
    check_sheet(z, alpha)?;
    match z.sheet {
        Sheet::Upper => direct_integral(z.z, alpha, a, cfg),
        Sheet::Interval => interval_value(z.z.re, alpha, a, cfg),
        Sheet::LowerSecond => Ok(direct_integral(z.z, alpha, a, cfg)? + 2.0 * boundary_jump(z.z, alpha, a)),
    }
}

/// `φ_a` on the physical sheet at any `z ∉ [−α²/4, ∞)`, including `Im z < 0`.
pub fn phi_physical(z: Complex64, alpha: f64, a: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    if z.im == 0.0 && z.re >= -0.25 * alpha * alpha {
        return Err(Error::SheetMismatch(format!("{z} lies on the cut")));
    }
    direct_integral(z, alpha, a, cfg)
}

/// `η_a(z) = s_β(z) − φ_a^{l(z)}(z)`.
pub fn eta(z: SheetPoint, alpha: f64, beta: f64, a: f64) -> Result<Complex64> {
    eta_with(z, alpha, beta, a, &QuadratureConfig::default())
}

pub fn eta_with(z: SheetPoint, alpha: f64, beta: f64, a: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    Ok(s_beta(beta, z.z)? - phi_continued_with(z, alpha, a, cfg)?)
}

/// The function continued from the physical sheet through the interval:
/// upper formula above the axis, boundary value on it, second sheet below.
pub fn phi_second_sheet(z: Complex64, alpha: f64, a: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    phi_continued_with(SheetPoint::classify(z), alpha, a, cfg)
}

/// `K̃(z) = K₀(d √−z)/2π`, continued through the interval (`√−z` principal).
pub fn pair_kernel(z: Complex64, d: f64) -> Result<Complex64> {
    Ok(macdonald_k0((-z).sqrt() * d)? / (2.0 * PI))
}

fn strip_admissible(alpha: f64, region: LowerRegion) -> impl Fn(Complex64) -> bool {
    let t = 0.25 * alpha * alpha;
    move |z: Complex64| {
        z.re > -t + region.delta_edge && z.re < -region.delta_edge && z.im.abs() < region.depth * t
    }
}

/// Secant search on a function continued through the interval. Iterates may
/// visit `Im z ≥ 0`, where the same analytic function is evaluated; the
/// converged pole must satisfy `Im z ≤ 0`.
pub(crate) fn solve_pole<F>(f: F, alpha: f64, seed: Complex64, opts: &ResonanceOptions) -> Result<Pole>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let admissible = strip_admissible(alpha, opts.region);
    if !admissible(seed) {
        return Err(Error::Precondition(format!("seed {seed} lies outside the continuation strip")));
    }
    let secant = SecantOptions {
        ftol: 1e-3 * opts.pole_tol,
        ztol: 1e-15,
        max_iter: opts.max_iter,
        max_step: 0.05 * alpha * alpha,
    };
    let h0 = Complex64::new(1e-4 * seed.norm().max(1e-3), -1e-4 * seed.norm().max(1e-3));
    let root = complex_secant(&f, seed, h0, &admissible, &secant)?;
    let fz = f(root.z)?;
    let h = 1e-6 * root.z.norm();
    let derivative = (f(root.z + h)? - f(root.z - h)?) / (2.0 * h);
    // quadrature noise of relative size rel_tol in η moves Im z by about rel_tol/|η′|
    let floor = 100.0 * opts.quad.rel_tol * root.z.norm().max(1.0) / derivative.norm().clamp(1e-3, 1.0);
    let resolved = root.z.im.abs() > floor;
    let z = if !resolved && root.z.im > 0.0 { Complex64::new(root.z.re, 0.0) } else { root.z };
    let pole = Pole {
        z,
        residual: fz.norm(),
        seed,
        iterations: root.iterations,
        derivative_estimate: derivative,
        width_resolved: resolved,
    };
    if pole.residual > opts.pole_tol {
        return Err(Error::RootNotFound(format!(
            "pole at {} has residual {:e} above {:e}",
            pole.z, pole.residual, opts.pole_tol
        )));
    }
    if pole.z.im > 0.0 {
        return Err(Error::SolverFailure(format!("converged to {} with positive imaginary part", pole.z)));
    }
    Ok(pole)
}

/// Second-sheet pole of `η_a` for one site at distance `a`; the default seed
/// is the point-only level `ε_β`, which must lie in `(−α²/4, 0)`.
pub fn find_resonance(alpha: f64, beta: f64, a: f64, seed: Option<Complex64>) -> Result<Pole> {
    find_resonance_with(alpha, beta, a, seed, &ResonanceOptions::default())
}

pub fn find_resonance_with(alpha: f64, beta: f64, a: f64, seed: Option<Complex64>, opts: &ResonanceOptions) -> Result<Pole> {
    let eps_beta = point_only_eigenvalue(beta, Dimension::Two).expect("two-dimensional level exists");
    let seed = match seed {
        Some(s) => s,
        None => {
            if !(eps_beta > -0.25 * alpha * alpha) {
                return Err(Error::Precondition(format!(
                    "ε_β = {eps_beta} is below the threshold −α²/4 = {}; supply a seed",
                    -0.25 * alpha * alpha
                )));
            }
            c(eps_beta)
        }
    };
    solve_pole(|z| Ok(s_beta(beta, z)? - phi_second_sheet(z, alpha, a, &opts.quad)?), alpha, seed, opts)
}

/// Pole of `η_q = s(s + q) − K̃² − (2s + q)φ − 2K̃φ` for the pair `(0, a)`,
/// `(0, −a)` with couplings `β`, `β + q`, seeded at the embedded level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingBreak {
    pub pole: Pole,
    pub q: f64,
    pub mu2: f64,
    pub kappa2: f64,
    /// `(μ̂(q) − μ₂)/q`.
    pub measured_linear: f64,
    /// `ϑ(κ₂) = κ₂ / (š′(κ₂) + K̃′(κ₂))`.
    pub predicted_linear: f64,
    /// `ν̂(q)/q²`.
    pub measured_quadratic: f64,
    /// `−ϑ(κ₂) g̃(μ₂) / (2|š_β(κ₂) − φ⁰(μ₂)|²)`, `g̃(λ) = (α/8)e^{−αa}/√(λ + α²/4)`.
    pub predicted_quadratic: f64,
}

fn embedded_level(alpha: f64, beta: f64, a: f64, opts: &ResonanceOptions) -> Result<(f64, f64)> {
    let pair = symmetric_pair_spectrum_with(alpha, beta, a, &SpectrumOptions { root_tol: 1e-10, quad: opts.quad })?;
    match (pair.embedded, pair.kappa2) {
        (Some(mu2), Some(k2)) => Ok((mu2, k2)),
        _ => Err(Error::Precondition(format!(
            "the antisymmetric level of the pair is not embedded (μ₂ = {:?}, threshold {})",
            pair.pair_levels.1,
            -0.25 * alpha * alpha
        ))),
    }
}

/// `d/dκ K₀(dκ)/2π`.
fn pair_kernel_derivative(kappa: f64, d: f64) -> Result<f64> {
    Ok(-d * k1_real(d * kappa)? / (2.0 * PI))
}

pub fn find_resonance_coupling_break(alpha: f64, beta: f64, q: f64, a: f64) -> Result<CouplingBreak> {
    find_resonance_coupling_break_with(alpha, beta, q, a, &ResonanceOptions::default())
}

pub fn find_resonance_coupling_break_with(
    alpha: f64,
    beta: f64,
    q: f64,
    a: f64,
    opts: &ResonanceOptions,
) -> Result<CouplingBreak> {
    if q == 0.0 || !q.is_finite() {
        return Err(Error::Precondition("coupling break needs a finite q ≠ 0".into()));
    }
    let (mu2, k2) = embedded_level(alpha, beta, a, opts)?;
    let f = |z: Complex64| -> Result<Complex64> {
        let s = s_beta(beta, z)?;
        let kt = pair_kernel(z, 2.0 * a)?;
        let phi = phi_second_sheet(z, alpha, a, &opts.quad)?;
        Ok(s * (s + q) - kt * kt - (2.0 * s + q) * phi - 2.0 * kt * phi)
    };
    let pole = solve_pole(f, alpha, c(mu2), opts)?;

    let theta = k2 / (s_beta_real_derivative(k2) + pair_kernel_derivative(k2, 2.0 * a)?);
    let phi0 = interval_value(mu2, alpha, a, &opts.quad)?;
    let g_tilde = alpha / 8.0 * (-alpha * a).exp() / (mu2 + 0.25 * alpha * alpha).sqrt();
    let predicted_quadratic = -theta * g_tilde / (2.0 * (s_beta_real(beta, k2) - phi0).norm_sqr());
    Ok(CouplingBreak {
        pole,
        q,
        mu2,
        kappa2: k2,
        measured_linear: (pole.z.re - mu2) / q,
        predicted_linear: theta,
        measured_quadratic: pole.z.im / (q * q),
        predicted_quadratic,
    })
}

/// Pole of the exact determinant for the sites `(0, a)`, `(0, −a − δ)` with
/// equal couplings,
/// `(s − φ_a)(s − φ_{a+δ}) − (K̃_{2a+δ} + φ_{a+δ/2})²`, seeded at `μ₂`.
pub fn distance_break_pole(alpha: f64, beta: f64, a: f64, delta: f64, opts: &ResonanceOptions) -> Result<(Pole, f64, f64)> {
    if !(a + delta > 0.0) || delta == 0.0 {
        return Err(Error::Precondition(format!("need δ ≠ 0 and a + δ > 0, got a = {a}, δ = {delta}")));
    }
    let (mu2, k2) = embedded_level(alpha, beta, a, opts)?;
    let f = |z: Complex64| -> Result<Complex64> {
        let s = s_beta(beta, z)?;
        let kt = pair_kernel(z, 2.0 * a + delta)?;
        let p1 = phi_second_sheet(z, alpha, a, &opts.quad)?;
        let p2 = phi_second_sheet(z, alpha, a + delta, &opts.quad)?;
        let pm = phi_second_sheet(z, alpha, a + 0.5 * delta, &opts.quad)?;
        Ok((s - p1) * (s - p2) - (kt + pm) * (kt + pm))
    };
    Ok((solve_pole(f, alpha, c(mu2), opts)?, mu2, k2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceBreak {
    pub pole: Pole,
    pub delta: f64,
    pub mu2: f64,
    pub kappa2: f64,
    /// `υ′(0)` extrapolated from `(υ(δ) − μ₂)/δ` at `δ, δ/2, δ/4`.
    pub measured_derivative: f64,
    /// `−2κ₂κ₂′`, `κ₂′ = −κ₂K̃′(2aκ₂)/(š′(κ₂) + 2aK̃′(2aκ₂))`.
    pub predicted_derivative: f64,
    /// `ι(δ)` from the rank-one reduction at the real root (see [`distance_break_width`]).
    pub iota: f64,
    /// `Im z` of the directly computed pole; `None` below its noise floor.
    pub iota_direct: Option<f64>,
}

pub fn find_resonance_distance_break(alpha: f64, beta: f64, a: f64, delta: f64) -> Result<DistanceBreak> {
    find_resonance_distance_break_with(alpha, beta, a, delta, &ResonanceOptions::default())
}

pub fn find_resonance_distance_break_with(
    alpha: f64,
    beta: f64,
    a: f64,
    delta: f64,
    opts: &ResonanceOptions,
) -> Result<DistanceBreak> {
    let (pole, mu2, k2) = distance_break_pole(alpha, beta, a, delta, opts)?;
    let deltas = [delta, 0.5 * delta, 0.25 * delta];
    let mut quotients = vec![(pole.z.re - mu2) / delta];
    for &d in &deltas[1..] {
        quotients.push((distance_break_pole(alpha, beta, a, d, opts)?.0.z.re - mu2) / d);
    }
    let steps: Vec<f64> = deltas.iter().map(|d| d.abs()).collect();
    let limit = quadrature::boundary_limit(
        |h| {
            let i = steps.iter().position(|&x| x == h).expect("sampled step");
            c(quotients[i])
        },
        &steps,
    )?;
    // K̃′ here is the derivative of K₀(x)/2π in its argument x = 2aκ
    let kt_prime = -k1_real(2.0 * a * k2)? / (2.0 * PI);
    let kappa2_prime = -k2 * kt_prime / (s_beta_real_derivative(k2) + 2.0 * a * kt_prime);
    Ok(DistanceBreak {
        pole,
        delta,
        mu2,
        kappa2: k2,
        measured_derivative: limit.value.re,
        predicted_derivative: -2.0 * k2 * kappa2_prime,
        iota: distance_break_width(alpha, beta, a, delta, pole.z.re, &opts.quad)?,
        iota_direct: pole.width_resolved.then_some(pole.z.im),
    })
}

/// Real part `R(λ)` of the distance-broken pair matrix on the interval and
/// the data of its imaginary part, which is exactly `−γ v vᵀ` with
/// `γ = (α/4)/√(λ + α²/4)` and `v = (e^{−αa/2}, e^{−α(a+δ)/2})`.
fn interval_pair_matrix(
    alpha: f64,
    beta: f64,
    a: f64,
    delta: f64,
    lambda: f64,
    cfg: &QuadratureConfig,
) -> Result<(na::Matrix2<f64>, na::Vector2<f64>, f64)> {
    let s = s_beta(beta, c(lambda))?.re;
    let pv = |b: f64| -> Result<f64> { Ok(interval_value(lambda, alpha, b, cfg)?.re) };
    let kt = crate::specfun::k0_real((-lambda).sqrt() * (2.0 * a + delta))? / (2.0 * PI);
    let off = -kt - pv(a + 0.5 * delta)?;
    let r = na::Matrix2::new(s - pv(a)?, off, off, s - pv(a + delta)?);
    let v = na::Vector2::new((-0.5 * alpha * a).exp(), (-0.5 * alpha * (a + delta)).exp());
    let gamma = 0.25 * alpha / (lambda + 0.25 * alpha * alpha).sqrt();
    Ok((r, v, gamma))
}

/// Width `ι(δ)` of the distance-broken pole to leading order in its size.
///
/// With `λ*` the real root of `det R` near `approx`, `e` the null vector of
/// `R(λ*)` and `f ⊥ e`, reducing the pole equation onto `e` gives
///
/// ```text
/// ι = γ (vᵀe)² [1 − γ² (vᵀf)⁴ / |fᵀRf − iγ(vᵀf)²|²] / (eᵀR′e)
/// ```
///
/// up to relative corrections of order `(vᵀe)²`. Unlike the direct pole
/// search this stays accurate when `ι` is far below `|z|·ε_mach`, since
/// `vᵀe` is formed from real quantities only.
pub fn distance_break_width(alpha: f64, beta: f64, a: f64, delta: f64, approx: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let det = |l: f64| -> Result<f64> { Ok(interval_pair_matrix(alpha, beta, a, delta, l, cfg)?.0.determinant()) };
    let t = 0.25 * alpha * alpha;
    let mut w = 1e-6 * approx.abs().max(1e-3);
    let (mut lo, mut hi) = (approx - w, approx + w);
    while det(lo)?.signum() == det(hi)?.signum() {
        w *= 4.0;
        lo = (approx - w).max(-t * (1.0 - 1e-9));
        hi = (approx + w).min(-1e-12);
        if w > t {
            return Err(Error::RootNotFound(format!("no real root of det R near {approx}")));
        }
    }
    let lambda = crate::roots::brent(det, lo, hi, 1e-15, 200)?.x;
    let (r, v, gamma) = interval_pair_matrix(alpha, beta, a, delta, lambda, cfg)?;
    let eig = na::SymmetricEigen::new(r);
    let i = if eig.eigenvalues[0].abs() < eig.eigenvalues[1].abs() { 0 } else { 1 };
    let e = eig.eigenvectors.column(i).into_owned();
    let f = eig.eigenvectors.column(1 - i).into_owned();
    let h = 1e-5 * lambda.abs().max(1e-3);
    let rp = (interval_pair_matrix(alpha, beta, a, delta, lambda + h, cfg)?.0
        - interval_pair_matrix(alpha, beta, a, delta, lambda - h, cfg)?.0)
        / (2.0 * h);
    let slope = (e.transpose() * rp * e)[(0, 0)];
    let (ve, vf) = (v.dot(&e), v.dot(&f));
    let m_ff = Complex64::new((f.transpose() * r * f)[(0, 0)], -gamma * vf * vf);
    Ok(gamma * ve * ve * (1.0 - gamma * gamma * vf.powi(4) / m_ff.norm_sqr()) / slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bs2d::{phi_line, KappaPoint};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn density_real_on_interval() {
        let z = SheetPoint::interval(-1.0, 3.0).unwrap();
        let v = mu_density(z, 2.0, 3.0, 1.0).unwrap();
        let r3 = 3f64.sqrt();
        let expected = 3.0 / (16.0 * PI) * (3.0 + 2.0 * r3) * (-2.0 * r3).exp() / (2f64.sqrt() * r3);
        assert_eq!(v.im, 0.0);
        assert!((v.re - expected).abs() < 1e-15);
        // the same value from the complex formula just above the axis
        let up = mu_density(SheetPoint::upper(Complex64::new(-1.0, 1e-12)).unwrap(), 2.0, 3.0, 1.0).unwrap();
        assert!((up - v).norm() < 1e-10);
        assert!(mu_density(z, 0.0, 3.0, 1.0).is_err());
    }

    #[test]
    fn density_decays() {
        let z = SheetPoint::interval(-1.0, 3.0).unwrap();
        for t in [10.0, 40.0, 160.0] {
            let v = mu_density(z, t, 3.0, 1.0).unwrap().norm();
            assert!(v <= 3.0 * (-2.0 * t.sqrt()).exp() / t);
        }
    }

    #[test]
    fn below_threshold_matches_real_function() {
        for (alpha, a, kappa) in [(3.0, 2.0, 1.6), (2.0, 0.5, 1.2), (1.0, 1.0, 3.0)] {
            let z = SheetPoint::below_threshold(kappa);
            let v = phi_continued(z, alpha, a).unwrap();
            let r = phi_line(alpha, a, kappa).unwrap();
            assert!(v.im.abs() < 1e-13);
            assert!((v.re - r).abs() < 1e-10 * r.abs().max(1.0), "{} {}", v.re, r);
            let e = eta(z, alpha, 0.3, a).unwrap();
            let d = crate::bs2d::d_single(alpha, 0.3, a, KappaPoint::new(alpha, kappa).unwrap(), &cfg()).unwrap();
            assert!((e.re - d).abs() < 1e-10);
        }
    }

    #[test]
    fn interval_imaginary_part_is_jump() {
        for lambda in [-2.0, -1.2, -0.3] {
            let v = phi_continued(SheetPoint::interval(lambda, 3.0).unwrap(), 3.0, 2.0).unwrap();
            let expected = 0.75 * (-6.0f64).exp() / (lambda + 2.25f64).sqrt();
            assert!((v.im - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn edge_of_the_wedge() {
        let (alpha, a) = (3.0, 2.0);
        let lambda = -alpha * alpha / 8.0;
        let on = phi_continued(SheetPoint::interval(lambda, alpha).unwrap(), alpha, a).unwrap();
        let steps = [1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4];
        let above = quadrature::boundary_limit(
            |e| phi_continued(SheetPoint::upper(Complex64::new(lambda, e)).unwrap(), alpha, a).unwrap(),
            &steps,
        )
        .unwrap();
        let below = quadrature::boundary_limit(
            |e| phi_continued(SheetPoint::lower(Complex64::new(lambda, -e)).unwrap(), alpha, a).unwrap(),
            &steps,
        )
        .unwrap();
        assert!((above.value - on).norm() < 1e-7, "{}", (above.value - on).norm());
        assert!((below.value - on).norm() < 1e-7, "{}", (below.value - on).norm());
    }

    #[test]
    fn schwarz_reflection_on_physical_sheet() {
        for z in [Complex64::new(-1.0, 0.3), Complex64::new(0.5, 0.2), Complex64::new(-3.0, 1.0)] {
            let up = phi_physical(z, 3.0, 1.0, &cfg()).unwrap();
            let down = phi_physical(z.conj(), 3.0, 1.0, &cfg()).unwrap();
            assert!((up.conj() - down).norm() < 1e-12);
        }
    }

    #[test]
    fn sheet_mismatch_rejected() {
        let bad = SheetPoint { z: Complex64::new(-1.0, 0.2), sheet: Sheet::LowerSecond };
        assert!(matches!(phi_continued(bad, 3.0, 1.0), Err(Error::SheetMismatch(_))));
        let bad = SheetPoint { z: Complex64::new(-3.0, 0.0), sheet: Sheet::Interval };
        assert!(phi_continued(bad, 3.0, 1.0).is_err());
    }

    #[test]
    fn lower_sheet_decay() {
        // |φ⁻| shrinks deep in the lower half-plane while |s_β| grows
        let near = phi_continued(SheetPoint::lower(Complex64::new(-1.0, -0.1)).unwrap(), 3.0, 2.0).unwrap();
        let far = phi_continued(SheetPoint::lower(Complex64::new(-1.0, -40.0)).unwrap(), 3.0, 2.0).unwrap();
        assert!(far.norm() < near.norm());
        assert!(s_beta(0.0, Complex64::new(-1.0, -40.0)).unwrap().norm() > s_beta(0.0, Complex64::new(-1.0, -0.1)).unwrap().norm());
    }

    #[test]
    fn single_point_pole() {
        let p = find_resonance(3.0, 0.0, 3.0, None).unwrap();
        assert!(p.z.im < 0.0 && p.residual <= 1e-10);
        let eps0 = point_only_eigenvalue(0.0, Dimension::Two).unwrap();
        assert!((p.z.re - eps0).abs() < 1e-2);
    }

    #[test]
    fn pair_kernel_continuity() {
        let above = pair_kernel(Complex64::new(-1.0, 1e-12), 2.0).unwrap();
        let below = pair_kernel(Complex64::new(-1.0, -1e-12), 2.0).unwrap();
        assert!((above - below).norm() < 1e-11);
        let real = crate::specfun::k0_real(2.0).unwrap() / (2.0 * PI);
        assert!((above.re - real).abs() < 1e-11);
    }

    #[test]
    fn coupling_break_expansion() {
        let r = find_resonance_coupling_break(3.0, 0.0, 1e-3, 1.0).unwrap();
        assert!((r.measured_linear / r.predicted_linear - 1.0).abs() < 0.05);
        assert!((r.measured_quadratic / r.predicted_quadratic - 1.0).abs() < 0.05);
        assert!(r.pole.z.im < 0.0);
    }

    #[test]
    fn reduced_width_matches_direct_pole() {
        let o = ResonanceOptions::default();
        for d in [0.2, 0.1, -0.1] {
            let (p, _, _) = distance_break_pole(4.0, 0.05, 0.8, d, &o).unwrap();
            assert!(p.width_resolved);
            let w = distance_break_width(4.0, 0.05, 0.8, d, p.z.re, &o.quad).unwrap();
            assert!((w / p.z.im - 1.0).abs() < 2e-2, "δ = {d}: {w} vs {}", p.z.im);
        }
    }

    #[test]
    fn distance_break_expansion() {
        let r = find_resonance_distance_break(3.0, 0.0, 1.0, 1e-2).unwrap();
        assert!((r.measured_derivative / r.predicted_derivative - 1.0).abs() < 0.05);
        assert!(r.iota < 0.0);
    }
}
