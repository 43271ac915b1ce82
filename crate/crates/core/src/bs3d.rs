//! Plane plus point sites in three dimensions: `φ̂_a`, the reduced matrix
//! `Ď₃(κ)`, its roots, and the second-sheet continuation of `φ̂_a` for a
//! single site.
//!
//! With `u = √(p² + κ²)`,
//! `φ̂_a(κ) = (α/4π) ∫_κ^∞ e^{−2ua}/(2u − α) du = (α/8π) e^{−αa} E₁(a(2κ − α))`,
//! so the threshold singularity is only logarithmic.

use std::f64::consts::PI;

use nalgebra as na;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bs2d::{compressed_negative_count, threshold_direction, KappaPoint};
use crate::error::{Error, Result};
use crate::exec;
use crate::quadrature::{boundary_limit, integrate_halfline_scaled, QuadratureConfig};
use crate::resonance2d::{solve_pole, Pole, ResonanceOptions};
use crate::specfun::{exp_integral_e1, point_only_eigenvalue, sqrt_cut_positive};
use crate::spectrum2d::{Reduced, Root, Scanner, SpectralResult, SpectrumOptions};
use crate::system::{Dimension, Sheet, SheetPoint, SystemSpec};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `α e^{−αa}/8π`, the prefactor of `E₁` in `φ̂_a`.
fn e1_prefactor(alpha: f64, a: f64) -> f64 {
    alpha / (8.0 * PI) * (-alpha * a).exp()
}

fn check_distance(alpha: f64, a: f64) -> Result<()> {
    if !(alpha > 0.0) || !(a > 0.0) || !a.is_finite() {
        return Err(Error::Precondition(format!("need α > 0 and a > 0, got α = {alpha}, a = {a}")));
    }
    Ok(())
}

/// `φ̂_a(κ)` by the exponential-integral reduction.
pub fn phi_plane(alpha: f64, a: f64, kappa: f64) -> Result<f64> {
    phi_plane_at(alpha, a, KappaPoint::new(alpha, kappa)?)
}

pub fn phi_plane_at(alpha: f64, a: f64, k: KappaPoint) -> Result<f64> {
    check_distance(alpha, a)?;
    Ok(e1_prefactor(alpha, a) * exp_integral_e1(Complex64::new(2.0 * a * k.eps, 0.0))?.re)
}

/// `φ̂_a(κ)` by direct quadrature of the radial momentum integral
/// `(α/4π) ∫₀^∞ e^{−2ka} p dp / ((2k − α) k)`, `k = √(p² + κ²)`.
pub fn phi_plane_radial(alpha: f64, a: f64, kappa: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_distance(alpha, a)?;
    let k0 = KappaPoint::new(alpha, kappa)?;
    let f = |p: f64| {
        let k = p.hypot(kappa);
        // 2k − α without cancellation near the threshold
        let gap = 2.0 * k0.eps + 2.0 * p * p / (k + kappa);
        Complex64::new((-2.0 * (k - kappa) * a).exp() * p / (gap * k), 0.0)
    };
    let scale = (1.0 / a).min(kappa.max(k0.eps.sqrt()));
    let r = integrate_halfline_scaled(f, 0.0, scale, cfg)?.require()?.re;
    Ok(alpha / (4.0 * PI) * (-2.0 * kappa * a).exp() * r)
}

/// `Θ̂(κ)` between two sites whose projections onto the plane are `rho`
/// apart and whose distances to the plane add up to `depth`:
/// `(α/4π) ∫_κ^∞ J₀(ρ√(u² − κ²)) e^{−u·depth}/(2u − α) du`.
///
/// The part with `J₀` replaced by 1 is `(α/8π) e^{−α·depth/2} E₁(ε·depth)`;
/// the remainder has no threshold singularity and is integrated numerically.
/// At `rho = 0` this is exactly `φ̂_{depth/2}`.
pub fn theta_plane(alpha: f64, depth: f64, rho: f64, k: KappaPoint, cfg: &QuadratureConfig) -> Result<f64> {
    check_distance(alpha, depth)?;
    let singular = alpha / (8.0 * PI) * (-0.5 * alpha * depth).exp() * exp_integral_e1(Complex64::new(k.eps * depth, 0.0))?.re;
    if rho == 0.0 {
        return Ok(singular);
    }
    let kappa = k.kappa;
    let f = |t: f64| {
        let j = libm::j0(rho * (t * (2.0 * kappa + t)).sqrt());
        Complex64::new((-t * depth).exp() * (j - 1.0) / (2.0 * (k.eps + t)), 0.0)
    };
    let scale = (1.0 / depth).min(1.0 / rho);
    let r = integrate_halfline_scaled(f, 0.0, scale, cfg)?.require()?.re;
    Ok(singular + alpha / (4.0 * PI) * (-kappa * depth).exp() * r)
}

/// `ď₃(κ) = β + κ/4π − φ̂_a(κ)` for one site.
pub fn d_single_3d(alpha: f64, beta: f64, a: f64, k: KappaPoint) -> Result<f64> {
    Ok(beta + k.kappa / (4.0 * PI) - phi_plane_at(alpha, a.abs(), k)?)
}

/// Point-only diagonal `β − i√z/4π` (`√z` with `Im √z ≥ 0`); equals
/// `β + κ/4π` at `z = −κ²`.
pub fn point_diagonal_3d(beta: f64, z: Complex64) -> Complex64 {
    beta - I * sqrt_cut_positive(z) / (4.0 * PI)
}

/// Free kernel `e^{−κd}/(4πd)`.
pub fn free_kernel_3d(kappa: f64, d: f64) -> f64 {
    (-kappa * d).exp() / (4.0 * PI * d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DMatrix3D {
    pub kappa: KappaPoint,
    pub entries: na::DMatrix<f64>,
    /// Unit vector along which `Ď₃` diverges (logarithmically) at the threshold.
    pub direction: na::DVector<f64>,
}

impl DMatrix3D {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn determinant(&self) -> f64 {
        self.entries.clone().lu().determinant()
    }

    pub fn negative_count(&self) -> usize {
        self.eigenvalues().iter().filter(|&&v| v < 0.0).count()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = na::SymmetricEigen::new(self.entries.clone()).eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

impl Reduced for DMatrix3D {
    fn negative_count(&self) -> usize {
        DMatrix3D::negative_count(self)
    }
    fn determinant(&self) -> f64 {
        DMatrix3D::determinant(self)
    }
    fn eigenvalues(&self) -> Vec<f64> {
        DMatrix3D::eigenvalues(self)
    }
    fn threshold_count(&self) -> usize {
        1 + compressed_negative_count(&self.entries, &self.direction)
    }
}

fn require_spatial(spec: &SystemSpec) -> Result<()> {
    spec.validate()?;
    if spec.dimension != Dimension::Three {
        return Err(Error::Precondition("three-dimensional system expected".into()));
    }
    Ok(())
}

pub fn build_d_matrix_3d(spec: &SystemSpec, kappa: f64) -> Result<DMatrix3D> {
    build_d_matrix_3d_at(spec, KappaPoint::new(spec.alpha, kappa)?, &QuadratureConfig::default())
}

pub fn build_d_matrix_3d_at(spec: &SystemSpec, k: KappaPoint, cfg: &QuadratureConfig) -> Result<DMatrix3D> {
    require_spatial(spec)?;
    let n = spec.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (j..n).map(move |l| (j, l))).collect();
    let values = exec::map(&pairs, |&(j, l)| -> Result<f64> {
        let (sj, sl) = (&spec.sites[j], &spec.sites[l]);
        let depth = sj.transverse().abs() + sl.transverse().abs();
        let theta = theta_plane(spec.alpha, depth, sj.longitudinal_distance(sl), k, cfg)?;
        let base = if j == l { sj.beta + k.kappa / (4.0 * PI) } else { -free_kernel_3d(k.kappa, sj.distance(sl)) };
        Ok(base - theta)
    });
    let mut entries = na::DMatrix::zeros(n, n);
    for (&(j, l), v) in pairs.iter().zip(values) {
        let v = v?;
        entries[(j, l)] = v;
        entries[(l, j)] = v;
    }
    let depths: Vec<f64> = spec.sites.iter().map(|s| s.transverse().abs()).collect();
    Ok(DMatrix3D { kappa: k, entries, direction: threshold_direction(spec.alpha, &depths) })
}

/// All discrete eigenvalues below `−α²/4` of a three-dimensional system.
pub fn find_eigenvalues_3d(spec: &SystemSpec, tol: f64) -> Result<SpectralResult> {
    find_eigenvalues_3d_with(spec, &SpectrumOptions::with_tol(tol))
}

pub fn find_eigenvalues_3d_with(spec: &SystemSpec, opts: &SpectrumOptions) -> Result<SpectralResult> {
    require_spatial(spec)?;
    let cfg = opts.quad;
    let scanner = Scanner { alpha: spec.alpha, build: |k: KappaPoint| build_d_matrix_3d_at(spec, k, &cfg) };
    let beta_min = spec.sites.iter().map(|s| s.beta).fold(f64::INFINITY, f64::min);
    // β + κ/4π ≥ 1 there
    let kappa_max = 4.0 * (4.0 * PI * (1.0 - beta_min)).max(0.5 * spec.alpha);
    let roots: Vec<Root> = scanner.scan(spec.n(), kappa_max, opts.root_tol)?;
    Ok(SpectralResult {
        energies: roots.iter().map(|r| r.energy).collect(),
        roots,
        embedded: None,
        count_bounds: (1, spec.n()),
    })
}

/// `lim_{a→∞} κ_a` for one site: `4π|β|` when `β < 0` and `−(4πβ)² < −α²/4`,
/// otherwise the threshold value `α/2`. For `β ≥ 0` there is no point-only
/// level and the root is pushed to the threshold by the same balance
/// `β + κ/4π = φ̂_a(κ)`.
pub fn limit_kappa_3d(alpha: f64, beta: f64) -> f64 {
    let half = 0.5 * alpha;
    match point_only_eigenvalue(beta, Dimension::Three) {
        Some(e) if e < -half * half => (-e).sqrt(),
        _ => half,
    }
}

/// Continuation of `φ̂_a` in `z = −w²`:
/// upper sheet `c E₁(a(2w − α))` with `c = α e^{−αa}/8π` and
/// `w = −i√z`; on the interval the boundary value from above, whose
/// imaginary part is the constant `(α/8) e^{−αa}`; below the interval the
/// continuation `c (E₁ + 2πi)`, which adds `(iα/4) e^{−αa}`.
pub fn phi_plane_continued(z: SheetPoint, alpha: f64, a: f64) -> Result<Complex64> {
    check_distance(alpha, a)?;
    let t = 0.25 * alpha * alpha;
    let c = e1_prefactor(alpha, a);
    let zeta = |z: Complex64| a * (2.0 * (-I * sqrt_cut_positive(z)) - alpha);
    match z.sheet {
        Sheet::Upper => {
            if z.z.im > 0.0 {
                Ok(c * exp_integral_e1(zeta(z.z))?)
            } else if z.z.im == 0.0 && z.z.re < -t {
                let kappa = (-z.z.re).sqrt();
                Ok(Complex64::new(phi_plane(alpha, a, kappa)?, 0.0))
            } else {
                Err(Error::SheetMismatch(format!("{} is not on the physical sheet away from the cut", z.z)))
            }
        }
        Sheet::Interval => {
            let l = z.z.re;
            if !(z.z.im == 0.0 && l > -t && l < 0.0) {
                return Err(Error::SheetMismatch(format!("{} is not inside (−α²/4, 0)", z.z)));
            }
            let x = a * (2.0 * (-l).sqrt() - alpha);
            Ok(c * exp_integral_e1(Complex64::new(x, -0.0))?)
        }
        Sheet::LowerSecond => {
            if !(z.z.im < 0.0) {
                return Err(Error::SheetMismatch(format!("{} is not below the real axis", z.z)));
            }
            Ok(c * (exp_integral_e1(zeta(z.z))? + 2.0 * PI * I))
        }
    }
}

/// Physical-sheet `φ̂_a(z)`, `Im z > 0`, by quadrature of the radial
/// momentum integral with `k = √(p² − z)`; independent of the `E₁` form.
pub fn phi_plane_physical_quadrature(z: Complex64, alpha: f64, a: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    check_distance(alpha, a)?;
    if !(z.im > 0.0) {
        return Err(Error::SheetMismatch(format!("{z} is not in the upper half-plane")));
    }
    let f = |p: f64| {
        let k = (p * p - z).sqrt();
        (-2.0 * k * a).exp() * p / ((2.0 * k - alpha) * k)
    };
    // the near-pole region p² ≈ Re z + α²/4 needs panels of width ~ Im z
    let p0 = (z.re + 0.25 * alpha * alpha).max(0.0).sqrt();
    let scale = (z.im / (1.0 + p0)).clamp(1e-6, 1.0 / a);
    let r = if p0 > 0.0 {
        let lo = crate::quadrature::integrate(f, 0.0, p0, cfg)?.require()?;
        lo + integrate_halfline_scaled(f, p0, scale, cfg)?.require()?
    } else {
        integrate_halfline_scaled(f, 0.0, scale, cfg)?.require()?
    };
    Ok(alpha / (4.0 * PI) * r)
}

/// Boundary value `lim_{ε→0⁺} φ̂_a(λ + iε)` from the quadrature route.
pub fn phi_plane_boundary_oracle(lambda: f64, alpha: f64, a: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let steps = [4e-2, 2e-2, 1e-2, 5e-3, 2.5e-3];
    let failure = std::cell::RefCell::new(None);
    let r = boundary_limit(
        |e| match phi_plane_physical_quadrature(Complex64::new(lambda, e), alpha, a, cfg) {
            Ok(v) => v,
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                Complex64::new(f64::NAN, 0.0)
            }
        },
        &steps,
    );
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    r?.require()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuationCertificate {
    pub lambdas: Vec<f64>,
    /// `|closed form − oracle|` at each `λ`.
    pub mismatch: Vec<f64>,
    pub tol: f64,
}

impl ContinuationCertificate {
    pub fn passed(&self) -> bool {
        self.mismatch.iter().all(|m| *m < self.tol)
    }

    pub fn max_mismatch(&self) -> f64 {
        self.mismatch.iter().copied().fold(0.0, f64::max)
    }
}

/// Compares the interval formula of [`phi_plane_continued`] with the
/// boundary-limit oracle at `points` interior points of `(−α²/4, 0)`.
pub fn certify_continuation(alpha: f64, a: f64, points: usize, tol: f64) -> Result<ContinuationCertificate> {
    let t = 0.25 * alpha * alpha;
    let lambdas: Vec<f64> = (1..=points).map(|i| -t * i as f64 / (points + 1) as f64).collect();
    let cfg = QuadratureConfig::default();
    let mismatch = exec::map(&lambdas, |&l| -> Result<f64> {
        let closed = phi_plane_continued(SheetPoint::interval(l, alpha)?, alpha, a)?;
        Ok((closed - phi_plane_boundary_oracle(l, alpha, a, &cfg)?).norm())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(ContinuationCertificate { lambdas, mismatch, tol })
}

/// `η₃(z) = β − i√z/4π − φ̂_a(z)` on the sheet picked by [`SheetPoint::classify`].
pub fn eta_3d(z: Complex64, alpha: f64, beta: f64, a: f64) -> Result<Complex64> {
    Ok(point_diagonal_3d(beta, z) - phi_plane_continued(SheetPoint::classify(z), alpha, a)?)
}

/// Second-sheet pole for one site at distance `a`, seeded at
/// `ε̃_β = −(4πβ)²` (which must lie in `(−α²/4, 0)`) unless a seed is given.
/// The interval formula is first certified against the boundary-limit oracle.
pub fn find_resonance_3d(alpha: f64, beta: f64, a: f64, seed: Option<Complex64>) -> Result<Pole> {
    find_resonance_3d_with(alpha, beta, a, seed, &ResonanceOptions::default())
}

pub fn find_resonance_3d_with(
    alpha: f64,
    beta: f64,
    a: f64,
    seed: Option<Complex64>,
    opts: &ResonanceOptions,
) -> Result<Pole> {
    let a = a.abs();
    check_distance(alpha, a)?;
    let seed = match seed {
        Some(s) => s,
        None => match point_only_eigenvalue(beta, Dimension::Three) {
            Some(e) if e > -0.25 * alpha * alpha => Complex64::new(e, 0.0),
            _ => {
                return Err(Error::Precondition(format!(
                    "no point-only level inside (−α²/4, 0) for β = {beta}, α = {alpha}; supply a seed"
                )))
            }
        },
    };
    let cert = certify_continuation(alpha, a, 5, 1e-8)?;
    if !cert.passed() {
        return Err(Error::SolverFailure(format!(
            "continuation of φ̂ not certified: boundary mismatch {:e}",
            cert.max_mismatch()
        )));
    }
    solve_pole(|z| eta_3d(z, alpha, beta, a), alpha, seed, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::Site;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn substitution_matches_radial_quadrature() {
        for (alpha, a, kappa) in [(3.0, 1.0, 2.0), (2.0, 0.3, 1.2), (1.0, 4.0, 0.5 + 1e-6)] {
            let s = phi_plane(alpha, a, kappa).unwrap();
            let r = phi_plane_radial(alpha, a, kappa, &cfg()).unwrap();
            assert!((s - r).abs() < 1e-11, "{alpha} {a} {kappa}: {s} vs {r}");
        }
    }

    #[test]
    fn theta_collapses_and_matches_radial() {
        let k = KappaPoint::new(3.0, 2.0).unwrap();
        let same = theta_plane(3.0, 2.0, 0.0, k, &cfg()).unwrap();
        assert_eq!(same, phi_plane(3.0, 1.0, 2.0).unwrap());
        // radial oracle with J₀(pρ)
        for rho in [0.3, 1.0, 4.0] {
            let f = |p: f64| {
                let kk = p.hypot(2.0);
                Complex64::new(libm::j0(p * rho) * (-(kk - 2.0) * 2.0).exp() * p / ((2.0 * kk - 3.0) * kk), 0.0)
            };
            let r = integrate_halfline_scaled(f, 0.0, 0.25, &cfg()).unwrap().require().unwrap().re;
            let want = 3.0 / (4.0 * PI) * (-4.0f64).exp() * r;
            let got = theta_plane(3.0, 2.0, rho, k, &cfg()).unwrap();
            assert!((got - want).abs() < 1e-12, "ρ = {rho}: {got} vs {want}");
        }
    }

    #[test]
    fn far_plane_negligible() {
        let kappa = 2.0;
        assert!(phi_plane(3.0, 40.0 / kappa, kappa).unwrap() < 1e-12);
    }

    #[test]
    fn log_growth_as_site_approaches_plane() {
        // φ̂ grows like (α/8π) ln(1/a), not like 1/a
        let ratio = |a: f64| phi_plane(3.0, a, 2.0).unwrap() / (1.0 / a).ln();
        let target = 3.0 / (8.0 * PI);
        assert!((ratio(1e-8) - target).abs() < 0.1 * target);
        assert!(phi_plane(3.0, 1e-3, 2.0).unwrap() * 1e-3 < 1e-2);
    }

    #[test]
    fn point_only_root() {
        for beta in [-1.0, -0.1] {
            let z = Complex64::new(-(4.0 * PI * beta).powi(2), 0.0);
            assert!(point_diagonal_3d(beta, z).norm() < 1e-12);
        }
        let z = Complex64::new(-4.0, 0.0);
        assert!((point_diagonal_3d(0.3, z) - (0.3 + 2.0 / (4.0 * PI))).norm() < 1e-15);
    }

    #[test]
    fn single_site_increasing_and_one_root() {
        let spec = SystemSpec::single_3d(3.0, -0.1, 2.0).unwrap();
        let mut last = f64::NEG_INFINITY;
        for i in 0..60 {
            let k = KappaPoint::from_offset(3.0, 1e-12 * 1.7f64.powi(i)).unwrap();
            let d = d_single_3d(3.0, -0.1, 2.0, k).unwrap();
            assert!(d > last);
            last = d;
        }
        let r = find_eigenvalues_3d(&spec, 1e-10).unwrap();
        assert_eq!(r.count(), 1);
        // κ − α/2 is about 1e-28 here, below the resolution of −κ²
        assert!(r.roots[0].resolved && r.roots[0].threshold_offset > 0.0);
        let r = find_eigenvalues_3d(&SystemSpec::single_3d(3.0, -0.1, 0.5).unwrap(), 1e-10).unwrap();
        assert!(r.energies[0] < -2.25);
    }

    #[test]
    fn large_distance_limits() {
        // ε̃ = −(0.4π)² > −α²/4: pushed to the threshold
        let r = find_eigenvalues_3d(&SystemSpec::single_3d(3.0, -0.1, 30.0).unwrap(), 1e-10).unwrap();
        assert!((r.roots[0].kappa - limit_kappa_3d(3.0, -0.1)).abs() < 1e-2);
        // ε̃ = −(0.8π)² < −α²/4
        let r = find_eigenvalues_3d(&SystemSpec::single_3d(3.0, -0.2, 30.0).unwrap(), 1e-10).unwrap();
        assert!((r.roots[0].kappa - 0.8 * PI).abs() < 1e-2);
        assert!(r.roots[0].resolved);
    }

    #[test]
    fn kappa_grows_toward_the_plane() {
        let k = |a: f64| find_eigenvalues_3d(&SystemSpec::single_3d(3.0, -0.1, a).unwrap(), 1e-10).unwrap().roots[0].kappa;
        let (k1, k2, k3) = (k(1e-1), k(1e-2), k(1e-3));
        assert!(k1 < k2 && k2 < k3);
    }

    #[test]
    fn two_sites_bounded_count() {
        let spec = SystemSpec::new(
            Dimension::Three,
            2.0,
            vec![Site::spatial(0.0, 0.0, 1.0, -0.3), Site::spatial(1.0, 0.5, -0.7, -0.3)],
        )
        .unwrap();
        let r = find_eigenvalues_3d(&spec, 1e-10).unwrap();
        assert!((1..=2).contains(&r.count()));
        for root in &r.roots {
            let m = build_d_matrix_3d(&spec, root.kappa).unwrap();
            assert!(m.eigenvalues().iter().any(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn continuation_boundary_match() {
        let cert = certify_continuation(3.0, 2.0, 5, 1e-8).unwrap();
        assert!(cert.passed(), "{:?}", cert.mismatch);
        let ims: Vec<f64> = [-2.0, -1.5, -1.0, -0.5]
            .iter()
            .map(|&l| phi_plane_continued(SheetPoint::interval(l, 3.0).unwrap(), 3.0, 2.0).unwrap().im)
            .collect();
        let spread = ims.iter().fold(0.0f64, |m, v| m.max((v - ims[0]).abs()));
        assert!(spread < 1e-9);
        assert!((ims[0] - 3.0 / 8.0 * (-6.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn sheets_meet_on_the_interval() {
        for l in [-2.0, -1.0, -0.3] {
            let on = phi_plane_continued(SheetPoint::interval(l, 3.0).unwrap(), 3.0, 2.0).unwrap();
            let up = phi_plane_continued(SheetPoint::upper(Complex64::new(l, 1e-10)).unwrap(), 3.0, 2.0).unwrap();
            let down = phi_plane_continued(SheetPoint::lower(Complex64::new(l, -1e-10)).unwrap(), 3.0, 2.0).unwrap();
            assert!((on - up).norm() < 1e-8 && (on - down).norm() < 1e-8);
        }
        let real = phi_plane_continued(SheetPoint::below_threshold(2.0), 3.0, 2.0).unwrap();
        assert_eq!(real, Complex64::new(phi_plane(3.0, 2.0, 2.0).unwrap(), 0.0));
    }

    #[test]
    fn resonance_ladder() {
        let eps = -(0.4 * PI).powi(2);
        let poles: Vec<Pole> = [2.0, 3.0, 4.0].iter().map(|&a| find_resonance_3d(3.0, -0.1, a, None).unwrap()).collect();
        for p in &poles {
            assert!(p.residual <= 1e-10);
            assert!(p.z.im < 0.0);
        }
        for w in poles.windows(2) {
            assert!(w[1].z.im.abs() < w[0].z.im.abs());
            assert!((w[1].z.re - eps).abs() < (w[0].z.re - eps).abs());
        }
    }
}
