//! Reduced Birman–Schwinger matrix for the line plus point sites in the plane.
//!
//! For `κ > α/2` the matrix is real symmetric with entries
//!
//! ```text
//! Ď_jk(κ) = š_{β_j}(κ) δ_jk − (1 − δ_jk) K₀(κ d_jk)/2π − Θ̌_jk(κ)
//! Θ̌_jk(κ) = (α/4π) ∫ e^{−k(|a_j|+|a_k|)} cos(p Δl) / ((2k − α) k) dp,  k = √(p² + κ²)
//! ```
//!
//! and `φ̌_a = Θ̌` for two copies of the same site. The momentum integral is
//! evaluated in the variable `p = κ sinh s`, where `dp/k = ds`.

use std::f64::consts::PI;

use nalgebra as na;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::quadrature::{self, integrate_halfline, integrate_halfline_scaled, QuadratureConfig};
use crate::specfun::{expm1_over_real, k0_real, s_beta_real};
use crate::system::{Dimension, Site, SystemSpec};

/// A spectral parameter `κ > α/2` kept together with its offset
/// `ε = κ − α/2`, so that points extremely close to the threshold keep full
/// relative precision in `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaPoint {
    pub kappa: f64,
    pub eps: f64,
}

impl KappaPoint {
    pub fn new(alpha: f64, kappa: f64) -> Result<Self> {
        let eps = kappa - 0.5 * alpha;
        if !(eps > 0.0) || !kappa.is_finite() {
            return Err(Error::Precondition(format!(
                "κ = {kappa} must exceed α/2 = {}",
                0.5 * alpha
            )));
        }
        Ok(Self { kappa, eps })
    }

    pub fn from_offset(alpha: f64, eps: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Precondition(format!("threshold offset must be positive, got {eps}")));
        }
        Ok(Self { kappa: 0.5 * alpha + eps, eps })
    }
}

/// `K̃(κd) = K₀(κd)/2π`, the free kernel between two points at distance `d`.
pub fn free_kernel(kappa: f64, d: f64) -> Result<f64> {
    Ok(k0_real(kappa * d)? / (2.0 * PI))
}

/// `∫₀^∞ ds / (2κ cosh s − α) = arccos(−α/2κ)/√(4κ² − α²)`, written in terms
/// of `ε = κ − α/2` to stay accurate at the threshold.
pub fn resolvent_integral(alpha: f64, k: KappaPoint) -> f64 {
    let angle = PI - 2.0 * (k.eps / (2.0 * k.kappa)).sqrt().asin();
    angle / (2.0 * k.eps * (2.0 * k.kappa + alpha)).sqrt()
}

/// `Θ̌ = regular + singular`, where `singular = (α/2π) e^{−Aα/2} C(κ)` carries
/// the whole `ε^{−1/2}` divergence at the threshold (`C` is
/// [`resolvent_integral`]). Away from the threshold `singular` is zero and
/// `regular` is the full value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParts {
    pub regular: f64,
    pub singular: f64,
}

impl ThetaParts {
    pub fn value(&self) -> f64 {
        self.regular + self.singular
    }
}

/// `Θ̌` splits off its threshold singularity when `A ε` is below this.
const SPLIT_LIMIT: f64 = 0.5;

/// General coupling integral with total depth `depth = |a_j| + |a_k|` and
/// longitudinal separation `dl`.
pub fn theta_integral(alpha: f64, depth: f64, dl: f64, k: KappaPoint, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(theta_parts(alpha, depth, dl, k, cfg)?.value())
}

pub fn theta_parts(alpha: f64, depth: f64, dl: f64, k: KappaPoint, cfg: &QuadratureConfig) -> Result<ThetaParts> {
    if depth < 0.0 || !depth.is_finite() || !dl.is_finite() {
        return Err(Error::Precondition(format!("invalid geometry depth = {depth}, Δl = {dl}")));
    }
    let kappa = k.kappa;
    let eps = k.eps;
    let c = alpha / (2.0 * PI);
    let denom = |s: f64| {
        let sh = (0.5 * s).sinh();
        2.0 * eps + 4.0 * kappa * sh * sh
    };
    // panel scale: where the exponential (or, at depth 0, the 1/D tail) has decayed
    let scale = if depth * kappa > 1.0 { (1.0 + 1.0 / (depth * kappa)).acosh().min(1.0) } else { 1.0 };

    if depth * eps < SPLIT_LIMIT {
        // e^{−Aκ cosh s} = e^{−Aα/2} e^{−A D/2}: peel off ∫ ds/D in closed form
        // (e^{−AD/2} cos θ − 1)/D, split into bounded pieces where D is small
        let regular = |s: f64| {
            let d = denom(s);
            let theta = dl * kappa * s.sinh();
            let v = if d < 1.0 {
                let half = (0.5 * theta).sin();
                -0.5 * depth * expm1_over_real(-0.5 * depth * d) * theta.cos() - 2.0 * half * half / d
            } else {
                ((-0.5 * depth * d).exp() * theta.cos() - 1.0) / d
            };
            num_complex::Complex64::new(v, 0.0)
        };
        let r = integrate_halfline_scaled(regular, 0.0, scale, cfg)?.require()?.re;
        let w = c * (-0.5 * depth * alpha).exp();
        Ok(ThetaParts { regular: w * r, singular: w * resolvent_integral(alpha, k) })
    } else {
        let f = |s: f64| {
            let ch1 = 2.0 * (0.5 * s).sinh().powi(2); // cosh s − 1
            let v = (-depth * kappa * ch1).exp() * (dl * kappa * s.sinh()).cos() / denom(s);
            num_complex::Complex64::new(v, 0.0)
        };
        let r = integrate_halfline_scaled(f, 0.0, scale, cfg)?.require()?.re;
        Ok(ThetaParts { regular: c * (-depth * kappa).exp() * r, singular: 0.0 })
    }
}

/// `φ̌_a(κ)`: line-induced self-energy of a site at distance `a`.
pub fn phi_line(alpha: f64, a: f64, kappa: f64) -> Result<f64> {
    phi_line_at(alpha, a, KappaPoint::new(alpha, kappa)?, &QuadratureConfig::default())
}

pub fn phi_line_at(alpha: f64, a: f64, k: KappaPoint, cfg: &QuadratureConfig) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::Precondition(format!("distance must be nonnegative, got {a}")));
    }
    theta_integral(alpha, 2.0 * a, 0.0, k, cfg)
}

/// `φ̌₀(κ) = (α/2π) arccos(−α/2κ)/√(4κ² − α²)`, the `a = 0` value.
pub fn phi_line_zero(alpha: f64, k: KappaPoint) -> f64 {
    alpha / (2.0 * PI) * resolvent_integral(alpha, k)
}

fn planar(site: &Site) -> (f64, f64) {
    (site.position[0], site.position[1])
}

/// `Θ̌ᵏ_j(κ)` for two sites in the plane.
pub fn theta_pair(alpha: f64, site_j: &Site, site_k: &Site, kappa: f64) -> Result<f64> {
    theta_pair_at(alpha, site_j, site_k, KappaPoint::new(alpha, kappa)?, &QuadratureConfig::default())
}

pub fn theta_pair_at(alpha: f64, site_j: &Site, site_k: &Site, k: KappaPoint, cfg: &QuadratureConfig) -> Result<f64> {
    let (lj, aj) = planar(site_j);
    let (lk, ak) = planar(site_k);
    theta_integral(alpha, aj.abs() + ak.abs(), lj - lk, k, cfg)
}

/// `ď_a(κ) = š_β(κ) − φ̌_a(κ)` for a single site.
pub fn d_single(alpha: f64, beta: f64, a: f64, k: KappaPoint, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(s_beta_real(beta, k.kappa) - phi_line_at(alpha, a.abs(), k, cfg)?)
}

/// Near the threshold `Ď = M − γ v vᵀ` with bounded `M`, `v_j = e^{−|a_j|α/2}`
/// and `γ = (α/2π) C(κ) → ∞`. Forming `Ď` directly loses the bounded part to
/// cancellation, so inertia and determinant are taken from `M`, `γ`, `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneSplit {
    pub regular: na::DMatrix<f64>,
    pub gamma: f64,
    pub v: na::DVector<f64>,
}

/// `Ď` in a basis whose first vector is `v/|v|`: pivot `d`, coupling `t` and
/// the trailing block `T`; `Ď` is congruent to `diag(d, T − t tᵀ/d)`.
struct Deflated {
    d: f64,
    t: na::DVector<f64>,
    trailing: na::DMatrix<f64>,
}

impl Deflated {
    fn schur(&self, shift: f64) -> na::DMatrix<f64> {
        &self.trailing - &self.t * self.t.transpose() / (self.d - shift)
    }
}

impl RankOneSplit {
    /// Used only when the rank-one part clearly dominates, which makes the
    /// pivot `d` safely negative.
    fn dominant(&self) -> bool {
        self.gamma * self.v.norm_squared() >= 10.0 * (1.0 + self.regular.norm())
    }

    fn deflate(&self) -> Deflated {
        let n = self.v.len();
        let vn = self.v.norm();
        // Householder reflector H with H v = −|v| e₁
        let mut u = &self.v / vn;
        u[0] += 1.0;
        let h = na::DMatrix::identity(n, n) - &u * u.transpose() * (2.0 / u.norm_squared());
        let t_full = &h * &self.regular * &h;
        Deflated {
            d: t_full[(0, 0)] - self.gamma * vn * vn,
            t: t_full.view((1, 0), (n - 1, 1)).column(0).into_owned(),
            trailing: t_full.view((1, 1), (n - 1, n - 1)).into_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DMatrix {
    pub kappa: KappaPoint,
    pub entries: na::DMatrix<f64>,
    /// Quadrature error estimate per entry (zero where no integral enters).
    pub assembly_log: na::DMatrix<f64>,
    /// Present when every entry carries its threshold singularity separately.
    pub split: Option<RankOneSplit>,
    /// Unit vector along which `Ď` diverges at the threshold.
    pub direction: na::DVector<f64>,
}

impl DMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    fn deflated(&self) -> Option<Deflated> {
        self.split.as_ref().filter(|s| s.dominant() && s.v.len() > 1).map(RankOneSplit::deflate)
    }

    /// Determinant by LU with partial pivoting (by the deflated form near
    /// the threshold).
    pub fn determinant(&self) -> f64 {
        match self.deflated() {
            Some(df) => df.d * df.schur(0.0).lu().determinant(),
            None => self.entries.clone().lu().determinant(),
        }
    }

    /// Number of negative eigenvalues.
    pub fn negative_count(&self) -> usize {
        if self.n() == 1 {
            return usize::from(self.entries[(0, 0)] < 0.0);
        }
        match self.deflated() {
            // Haynsworth: inertia(Ď) = inertia(d) + inertia(Schur complement)
            Some(df) => {
                let eig = na::SymmetricEigen::new(df.schur(0.0));
                usize::from(df.d < 0.0) + eig.eigenvalues.iter().filter(|&&v| v < 0.0).count()
            }
            None => {
                let eig = na::SymmetricEigen::new(self.entries.clone());
                eig.eigenvalues.iter().filter(|&&v| v < 0.0).count()
            }
        }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = match self.deflated() {
            Some(df) => {
                let base: Vec<f64> = sorted(na::SymmetricEigen::new(df.schur(0.0)).eigenvalues.iter().copied().collect());
                // each bounded eigenvalue λ solves λ ∈ eig(T − t tᵀ/(d − λ))
                let mut out: Vec<f64> = base
                    .iter()
                    .enumerate()
                    .map(|(i, &l0)| {
                        let mut l = l0;
                        for _ in 0..3 {
                            l = sorted(na::SymmetricEigen::new(df.schur(l)).eigenvalues.iter().copied().collect())[i];
                        }
                        l
                    })
                    .collect();
                out.push(df.d);
                out
            }
            None => na::SymmetricEigen::new(self.entries.clone()).eigenvalues.iter().copied().collect(),
        };
        v.sort_by(f64::total_cmp);
        v
    }
}

/// `v_j ∝ e^{−α|a_j|/2}`, normalised without underflow.
pub(crate) fn threshold_direction(alpha: f64, depths: &[f64]) -> na::DVector<f64> {
    let nearest = depths.iter().copied().fold(f64::INFINITY, f64::min);
    let v = na::DVector::from_iterator(depths.len(), depths.iter().map(|d| (-0.5 * alpha * (d - nearest)).exp()));
    v.normalize()
}

/// Negative eigenvalues of `m` compressed to the orthogonal complement of `v`.
pub(crate) fn compressed_negative_count(m: &na::DMatrix<f64>, v: &na::DVector<f64>) -> usize {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mut u = v.normalize();
    u[0] += 1.0;
    let h = na::DMatrix::identity(n, n) - &u * u.transpose() * (2.0 / u.norm_squared());
    let t = &h * m * &h;
    let trailing = t.view((1, 1), (n - 1, n - 1)).into_owned();
    na::SymmetricEigen::new(trailing).eigenvalues.iter().filter(|&&x| x < 0.0).count()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn require_planar(spec: &SystemSpec) -> Result<()> {
    spec.validate()?;
    if spec.dimension != Dimension::Two {
        return Err(Error::Precondition("two-dimensional system expected".into()));
    }
    Ok(())
}

/// Assembles `Ď(κ)`; entries are computed independently and placed in a
/// fixed order, so the result does not depend on the evaluation schedule.
pub fn build_d_matrix(spec: &SystemSpec, kappa: f64) -> Result<DMatrix> {
    build_d_matrix_at(spec, KappaPoint::new(spec.alpha, kappa)?, &QuadratureConfig::default())
}

pub fn build_d_matrix_at(spec: &SystemSpec, k: KappaPoint, cfg: &QuadratureConfig) -> Result<DMatrix> {
    require_planar(spec)?;
    let n = spec.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (j..n).map(move |l| (j, l))).collect();
    let values = exec::map(&pairs, |&(j, l)| -> Result<(f64, ThetaParts, f64)> {
        let (sj, sl) = (&spec.sites[j], &spec.sites[l]);
        let (lj, aj) = planar(sj);
        let (ll, al) = planar(sl);
        let depth = aj.abs() + al.abs();
        let theta = theta_parts(spec.alpha, depth, lj - ll, k, cfg)?;
        let err = cfg.abs_tol.max(cfg.rel_tol * theta.value().abs());
        let base = if j == l { s_beta_real(sj.beta, k.kappa) } else { -free_kernel(k.kappa, sj.distance(sl))? };
        Ok((base, theta, err))
    });
    let mut entries = na::DMatrix::zeros(n, n);
    let mut regular = na::DMatrix::zeros(n, n);
    let mut log = na::DMatrix::zeros(n, n);
    let mut all_split = true;
    for (&(j, l), v) in pairs.iter().zip(values) {
        let (base, theta, e) = v?;
        all_split &= theta.singular != 0.0;
        for (r, c) in [(j, l), (l, j)] {
            entries[(r, c)] = base - theta.value();
            regular[(r, c)] = base - theta.regular;
            log[(r, c)] = e;
        }
    }
    let split = all_split.then(|| RankOneSplit {
        regular,
        gamma: spec.alpha / (2.0 * PI) * resolvent_integral(spec.alpha, k),
        v: na::DVector::from_iterator(n, spec.sites.iter().map(|s| (-0.5 * spec.alpha * planar(s).1.abs()).exp())),
    });
    let depths: Vec<f64> = spec.sites.iter().map(|s| planar(s).1.abs()).collect();
    Ok(DMatrix { kappa: k, entries, assembly_log: log, split, direction: threshold_direction(spec.alpha, &depths) })
}

/// `det Ď(κ)`.
pub fn reduced_determinant(spec: &SystemSpec, kappa: f64) -> Result<f64> {
    Ok(build_d_matrix(spec, kappa)?.determinant())
}

pub fn reduced_determinant_at(spec: &SystemSpec, k: KappaPoint, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(build_d_matrix_at(spec, k, cfg)?.determinant())
}

/// Factored determinant of the mirror pair `(0, ±a)` with equal couplings:
/// `(š + K̃)(š − K̃ − 2φ̌_a)`, `K̃ = K₀(2κa)/2π`.
pub fn symmetric_pair_factors(alpha: f64, beta: f64, a: f64, k: KappaPoint, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let s = s_beta_real(beta, k.kappa);
    let kt = free_kernel(k.kappa, 2.0 * a.abs())?;
    let phi = phi_line_at(alpha, a.abs(), k, cfg)?;
    Ok((s + kt, s - kt - 2.0 * phi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KreinCheck {
    /// `š_β(κ) − φ̌_a(κ)`.
    pub reduced: f64,
    /// `β − lim_{h→0}[G^{(α)}(y, y + h e₂) + ln(h)/2π]`.
    pub krein: f64,
    pub difference: f64,
}

/// Compares the single-site reduced determinant with the regularized
/// diagonal of the line-only resolvent kernel `G^{(α)}`.
///
/// The second route never calls `K₀` or the `s`-variable integrals: the
/// free part is `(1/2π)∫₀^∞ e^{−κh cosh s} ds` and the line correction
/// `(α/2π)∫₀^∞ e^{−k(2a+h)} / (k(2k − α)) dp` is integrated in `p`.
pub fn krein_diagonal_check(spec: &SystemSpec, kappa: f64) -> Result<KreinCheck> {
    require_planar(spec)?;
    if spec.n() != 1 {
        return Err(Error::Precondition("the Krein check is defined for one site".into()));
    }
    let alpha = spec.alpha;
    let site = &spec.sites[0];
    let a = site.transverse().abs();
    let k = KappaPoint::new(alpha, kappa)?;
    let cfg = QuadratureConfig::default();
    let reduced = d_single(alpha, site.beta, a, k, &cfg)?;

    let regularized_kernel = |h: f64| -> Result<f64> {
        let free = integrate_halfline(
            |s: f64| num_complex::Complex64::new((-kappa * h * s.cosh()).exp(), 0.0),
            0.0,
            &cfg,
        )?
        .require()?
        .re
            / (2.0 * PI);
        let depth = 2.0 * a + h;
        let corr = integrate_halfline_scaled(
            |p: f64| {
                let kk = (p * p + kappa * kappa).sqrt();
                num_complex::Complex64::new((-kk * depth).exp() / (kk * (2.0 * kk - alpha)), 0.0)
            },
            0.0,
            kappa.max(1.0 / depth),
            &cfg,
        )?
        .require()?
        .re
            * alpha
            / (2.0 * PI);
        Ok(free + h.ln() / (2.0 * PI) + corr)
    };
    let steps = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5];
    let mut samples = Vec::with_capacity(steps.len());
    for &h in &steps {
        samples.push(regularized_kernel(h)?);
    }
    let limit = quadrature::boundary_limit(
        |h| {
            let i = steps.iter().position(|&x| x == h).expect("sampled step");
            num_complex::Complex64::new(samples[i], 0.0)
        },
        &steps,
    )?;
    let krein = site.beta - limit.value.re;
    Ok(KreinCheck { reduced, krein, difference: reduced - krein })
}
