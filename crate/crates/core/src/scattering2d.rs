//! Scattering of the line-bound mode by one point site on the open channel
//! `λ ∈ (−α²/4, 0)`.
//!
//! `R(λ) = i g̃(λ) / η_a⁰(λ)` with `g̃(λ) = (α/4) e^{−αa} / √(λ + α²/4)`, which
//! is exactly `−Im η_a⁰(λ)`, and `T = 1 + R`. Writing `η⁰ = A − i g̃` gives
//! `Re R = −|R|²`, i.e. `|T|² + |R|² = 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::quadrature::QuadratureConfig;
use crate::resonance2d::{eta_with, find_resonance_with, phi_second_sheet, Pole, ResonanceOptions};
use crate::specfun::s_beta;
use crate::system::SheetPoint;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `|η⁰|` below this is reported as a singular point of the amplitude.
const SINGULAR_ETA: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amplitudes {
    pub lambda: f64,
    pub reflection: Complex64,
    pub transmission: Complex64,
}

impl Amplitudes {
    /// `||T|² + |R|² − 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.transmission.norm_sqr() + self.reflection.norm_sqr() - 1.0).abs()
    }

    /// `|Re R + |R|²|`.
    pub fn optical_residual(&self) -> f64 {
        (self.reflection.re + self.reflection.norm_sqr()).abs()
    }
}

fn coupling(z: Complex64, alpha: f64, a: f64) -> Complex64 {
    alpha / 4.0 * (-alpha * a).exp() / (z + 0.25 * alpha * alpha).sqrt()
}

pub fn amplitudes(alpha: f64, beta: f64, a: f64, lambda: f64) -> Result<Amplitudes> {
    amplitudes_with(alpha, beta, a, lambda, &QuadratureConfig::default())
}

pub fn amplitudes_with(alpha: f64, beta: f64, a: f64, lambda: f64, cfg: &QuadratureConfig) -> Result<Amplitudes> {
    if !(lambda > -0.25 * alpha * alpha && lambda < 0.0) {
        return Err(Error::Domain(format!(
            "λ = {lambda} is not inside the open channel (−α²/4, 0) = ({}, 0)",
            -0.25 * alpha * alpha
        )));
    }
    let a = a.abs();
    let eta = eta_with(SheetPoint::interval(lambda, alpha)?, alpha, beta, a, cfg)?;
    if eta.norm() < SINGULAR_ETA {
        return Err(Error::Singular(format!("η vanishes at λ = {lambda}: embedded eigenvalue")));
    }
    let reflection = I * coupling(Complex64::new(lambda, 0.0), alpha, a) / eta;
    Ok(Amplitudes { lambda, reflection, transmission: reflection + 1.0 })
}

/// Amplitudes on a grid, evaluated concurrently and returned in grid order.
pub fn amplitude_grid(alpha: f64, beta: f64, a: f64, lambdas: &[f64], cfg: &QuadratureConfig) -> Result<Vec<Amplitudes>> {
    exec::map(lambdas, |&l| amplitudes_with(alpha, beta, a, l, cfg)).into_iter().collect()
}

/// `R(z) = i g̃(z) / η(z)` continued from the interval (second sheet below it).
pub fn reflection_continued(alpha: f64, beta: f64, a: f64, z: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let a = a.abs();
    let eta = s_beta(beta, z)? - phi_second_sheet(z, alpha, a, cfg)?;
    Ok(I * coupling(z, alpha, a) / eta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleCoincidence {
    pub pole: Pole,
    /// `|η(z_pole)|`.
    pub residual: f64,
    /// `|R|` at `z_pole + ρ e^{iπ/4}`, `ρ = 10⁻², 10⁻³, 10⁻⁴`.
    pub approach: [f64; 3],
    /// Growth of `|R|` per decade of approach.
    pub ratios: [f64; 2],
    /// `|R|` at distance `α²/16` from the pole.
    pub far_magnitude: f64,
}

impl PoleCoincidence {
    /// Simple-pole growth: each decade multiplies `|R|` by 5 to 20.
    pub fn simple_pole_scaling(&self) -> bool {
        self.ratios.iter().all(|r| *r > 5.0 && *r < 20.0)
    }
}

pub fn pole_coincidence(alpha: f64, beta: f64, a: f64) -> Result<PoleCoincidence> {
    let opts = ResonanceOptions::default();
    let pole = find_resonance_with(alpha, beta, a.abs(), None, &opts)?;
    let dir = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let mut approach = [0.0; 3];
    for (slot, rho) in approach.iter_mut().zip([1e-2, 1e-3, 1e-4]) {
        *slot = reflection_continued(alpha, beta, a, pole.z + dir * rho, &opts.quad)?.norm();
    }
    let far = reflection_continued(alpha, beta, a, pole.z + dir * (alpha * alpha / 16.0), &opts.quad)?.norm();
    Ok(PoleCoincidence {
        residual: pole.residual,
        pole,
        approach,
        ratios: [approach[1] / approach[0], approach[2] / approach[1]],
        far_magnitude: far,
    })
}

/// Location of the maximum of `|R(λ)|²` on `[lo, hi]` by golden-section search.
pub fn lineshape_peak(alpha: f64, beta: f64, a: f64, lo: f64, hi: f64) -> Result<f64> {
    let cfg = QuadratureConfig::default();
    let f = |l: f64| -> Result<f64> { Ok(amplitudes_with(alpha, beta, a, l, &cfg)?.reflection.norm_sqr()) };
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a_, mut b_) = (lo, hi);
    let mut x1 = b_ - ratio * (b_ - a_);
    let mut x2 = a_ + ratio * (b_ - a_);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while (b_ - a_).abs() > 1e-12 * (1.0 + a_.abs()) {
        if f1 > f2 {
            b_ = x2;
            x2 = x1;
            f2 = f1;
            x1 = b_ - ratio * (b_ - a_);
            f1 = f(x1)?;
        } else {
            a_ = x1;
            x1 = x2;
            f1 = f2;
            x2 = a_ + ratio * (b_ - a_);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (a_ + b_))
}
