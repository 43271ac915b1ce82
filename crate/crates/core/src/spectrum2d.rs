//! Discrete spectrum below `−α²/4` for the line plus point sites, the mirror
//! pair with its embedded level, and single-site eigenfunctions.
//!
//! Roots of `det Ď(κ)` on `(α/2, ∞)` are located by counting negative
//! eigenvalues of the real symmetric matrix `Ď(κ)`: the count is
//! non-increasing in `κ` and drops by the multiplicity at every root, so a
//! drop between two grid points brackets roots even when `det Ď` does not
//! change sign (even multiplicities). Simple roots are then refined by
//! Brent's method on `det Ď`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bs2d::{self, build_d_matrix_at, free_kernel, phi_line_at, phi_line_zero, theta_integral, KappaPoint};
use crate::error::{Error, Result};
use crate::exec;
use crate::quadrature::QuadratureConfig;
use crate::roots::brent;
use crate::specfun::{k0_real, point_only_kappa, s_beta_real, EULER_GAMMA};
use crate::system::{Dimension, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    /// Largest admissible `|ď|` (smallest eigenvalue magnitude of `Ď`) at a root.
    pub root_tol: f64,
    pub quad: QuadratureConfig,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { root_tol: 1e-10, quad: QuadratureConfig::default() }
    }
}

impl SpectrumOptions {
    pub fn with_tol(root_tol: f64) -> Self {
        Self { root_tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub kappa: f64,
    /// `κ − α/2`, kept separately for levels extremely close to the threshold.
    pub threshold_offset: f64,
    pub energy: f64,
    /// Smallest eigenvalue magnitude of `Ď` at the root (`|ď|` for one site).
    pub residual: f64,
    pub bracket: (f64, f64),
    pub multiplicity: usize,
    /// False for a root closer to the threshold than the smallest sampled
    /// offset: it is then reported at `κ = α/2` with bracket
    /// `(α/2, α/2 + ε_min)`, and `residual` is the value at `ε_min` instead.
    pub resolved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedLevel {
    pub energy: f64,
    pub kappa: f64,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    /// Sorted by increasing energy (decreasing `κ`).
    pub roots: Vec<Root>,
    pub energies: Vec<f64>,
    pub embedded: Option<Vec<EmbeddedLevel>>,
    pub count_bounds: (usize, usize),
}

impl SpectralResult {
    /// Number of eigenvalues counted with multiplicity.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

/// Offsets `ε = κ − α/2` (in units of `α/2`) sampled before the geometric grid.
const THRESHOLD_EXPONENTS: [i32; 22] =
    [-300, -280, -260, -240, -220, -200, -180, -160, -140, -120, -100, -80, -60, -40, -20, -9, -7, -5, -4, -3, -2, -1];

/// `κ` where `š_β(κ) = 1`.
fn dominance_kappa(beta: f64) -> f64 {
    2.0 * (2.0 * PI * (1.0 - beta) - EULER_GAMMA).exp()
}

/// What the root scan needs from a reduced matrix `Ď(κ)`.
pub(crate) trait Reduced {
    fn negative_count(&self) -> usize;
    fn determinant(&self) -> f64;
    fn eigenvalues(&self) -> Vec<f64>;
    /// Negative count in the limit `κ → α/2⁺`, where the divergent part of
    /// `Ď` is rank one along `v`: `1 +` the count of `Ď` compressed to `v⊥`.
    fn threshold_count(&self) -> usize;
}

impl Reduced for bs2d::DMatrix {
    fn negative_count(&self) -> usize {
        bs2d::DMatrix::negative_count(self)
    }
    fn determinant(&self) -> f64 {
        bs2d::DMatrix::determinant(self)
    }
    fn eigenvalues(&self) -> Vec<f64> {
        bs2d::DMatrix::eigenvalues(self)
    }
    fn threshold_count(&self) -> usize {
        let m = self.split.as_ref().map_or(&self.entries, |s| &s.regular);
        1 + bs2d::compressed_negative_count(m, &self.direction)
    }
}

/// Root scan over `ε = κ − α/2` for a matrix family built by `build`.
pub(crate) struct Scanner<F> {
    pub alpha: f64,
    pub build: F,
}

impl<M, F> Scanner<F>
where
    M: Reduced,
    F: Fn(KappaPoint) -> Result<M> + Sync,
{
    fn count(&self, k: KappaPoint) -> Result<usize> {
        Ok((self.build)(k)?.negative_count())
    }

    fn det(&self, k: KappaPoint) -> Result<f64> {
        Ok((self.build)(k)?.determinant())
    }

    fn residual(&self, k: KappaPoint) -> Result<f64> {
        let m = (self.build)(k)?;
        Ok(m.eigenvalues().iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs())))
    }

    fn point(&self, eps: f64) -> KappaPoint {
        KappaPoint { kappa: 0.5 * self.alpha + eps, eps }
    }

    fn midpoint(&self, lo: KappaPoint, hi: KappaPoint) -> KappaPoint {
        let eps = if hi.eps > 2.0 * lo.eps { (lo.eps * hi.eps).sqrt() } else { 0.5 * (lo.eps + hi.eps) };
        self.point(eps)
    }

    fn too_narrow(lo: KappaPoint, hi: KappaPoint) -> bool {
        hi.eps - lo.eps <= 4.0 * f64::EPSILON * hi.eps.max(1e-300) || hi.eps <= lo.eps
    }

    /// Counts on a threshold-refined grid up to an eigenvalue-free `κ_max`
    /// (doubling `kappa_max` as needed), then isolates and refines every
    /// root. Roots closer to the threshold than the smallest sampled offset
    /// are reported unresolved at `κ = α/2`.
    pub(crate) fn scan(&self, n: usize, kappa_max: f64, root_tol: f64) -> Result<Vec<Root>> {
        let half = 0.5 * self.alpha;
        let mut kappa_max = kappa_max.max(2.0 * half);
        let mut doublings = 0;
        while self.count(self.point(kappa_max - half))? > 0 {
            kappa_max *= 2.0;
            doublings += 1;
            if doublings > 60 {
                return Err(Error::SolverFailure("no eigenvalue-free upper bound for κ found".into()));
            }
        }

        let mut grid: Vec<KappaPoint> = THRESHOLD_EXPONENTS.iter().map(|&p| self.point(half * 10f64.powi(p))).collect();
        let mut kappa = half * 1.05;
        while kappa < kappa_max {
            grid.push(self.point(kappa - half));
            kappa *= 1.05;
        }
        grid.push(self.point(kappa_max - half));
        grid.dedup_by(|b, a| b.eps <= a.eps);

        let counts: Vec<usize> = exec::map(&grid, |&k| self.count(k)).into_iter().collect::<Result<_>>()?;
        if counts.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::SolverFailure(format!(
                "eigenvalue count of Ď(κ) not monotone along the scan (quadrature too coarse?): {counts:?}"
            )));
        }

        let mut roots = Vec::new();
        let first = (self.build)(grid[0])?;
        let limit = first.threshold_count();
        if limit > counts[0] {
            roots.push(Root {
                kappa: half,
                threshold_offset: 0.0,
                energy: -half * half,
                residual: first.eigenvalues().iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs())),
                bracket: (half, grid[0].kappa),
                multiplicity: limit - counts[0],
                resolved: false,
            });
        }
        for i in 0..grid.len() - 1 {
            if counts[i] > counts[i + 1] {
                self.isolate(grid[i], grid[i + 1], counts[i], counts[i + 1], &mut roots)?;
            }
        }
        roots.sort_by(|a, b| b.kappa.total_cmp(&a.kappa));

        let total: usize = roots.iter().map(|r| r.multiplicity).sum();
        if total < 1 || total > n {
            return Err(Error::SolverFailure(format!(
                "found {total} eigenvalues for {n} sites; expected between 1 and {n}"
            )));
        }
        for r in roots.iter().filter(|r| r.resolved) {
            if r.residual > root_tol {
                return Err(Error::SolverFailure(format!(
                    "root at κ = {} has residual {:e} above tolerance {:e}",
                    r.kappa, r.residual, root_tol
                )));
            }
        }
        Ok(roots)
    }

    /// Splits a bracket holding `m = n_lo − n_hi` roots until each piece holds
    /// one root or cannot be narrowed further.
    fn isolate(&self, lo: KappaPoint, hi: KappaPoint, n_lo: usize, n_hi: usize, out: &mut Vec<Root>) -> Result<()> {
        let m = n_lo - n_hi;
        if m == 0 {
            return Ok(());
        }
        if m == 1 {
            out.push(self.refine_simple(lo, hi, n_lo)?);
            return Ok(());
        }
        let mut lo = lo;
        let mut hi = hi;
        let mut n_lo = n_lo;
        let mut n_hi = n_hi;
        loop {
            if Self::too_narrow(lo, hi) {
                let mid = self.midpoint(lo, hi);
                out.push(Root {
                    kappa: mid.kappa,
                    threshold_offset: mid.eps,
                    energy: -mid.kappa * mid.kappa,
                    residual: self.residual(mid)?,
                    bracket: (lo.kappa, hi.kappa),
                    multiplicity: n_lo - n_hi,
                    resolved: true,
                });
                return Ok(());
            }
            let mid = self.midpoint(lo, hi);
            let n_mid = self.count(mid)?;
            if n_mid == n_lo {
                lo = mid;
            } else if n_mid == n_hi {
                hi = mid;
            } else {
                self.isolate(lo, mid, n_lo, n_mid, out)?;
                self.isolate(mid, hi, n_mid, n_hi, out)?;
                return Ok(());
            }
            n_lo = n_lo.max(n_mid);
            n_hi = n_hi.min(n_mid);
        }
    }

    fn refine_simple(&self, lo: KappaPoint, hi: KappaPoint, n_lo: usize) -> Result<Root> {
        let (mut lo, mut hi) = (lo, hi);
        // logarithmic bisection first, so Brent sees a bracket of moderate ratio
        while hi.eps > 2.0 * lo.eps {
            let mid = self.midpoint(lo, hi);
            if self.count(mid)? == n_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = brent(
            |eps| self.det(self.point(eps)),
            lo.eps,
            hi.eps,
            4.0 * f64::EPSILON * hi.eps,
            200,
        )?;
        let k = self.point(root.x);
        Ok(Root {
            kappa: k.kappa,
            threshold_offset: k.eps,
            energy: -k.kappa * k.kappa,
            residual: self.residual(k)?,
            bracket: (self.point(root.bracket.0).kappa, self.point(root.bracket.1).kappa),
            multiplicity: 1,
            resolved: true,
        })
    }
}

/// Mirror pair `(l, a)`, `(l, −a)` with equal couplings, if the system is one.
pub fn mirror_pair(spec: &SystemSpec) -> Option<(f64, f64, f64)> {
    if spec.dimension != Dimension::Two || spec.n() != 2 {
        return None;
    }
    let (s, t) = (&spec.sites[0], &spec.sites[1]);
    let symmetric = s.position[0] == t.position[0] && s.position[1] == -t.position[1] && s.beta == t.beta;
    symmetric.then(|| (spec.alpha, s.beta, s.position[1].abs()))
}

/// All discrete eigenvalues below `−α²/4` with multiplicities.
pub fn find_eigenvalues(spec: &SystemSpec, tol: f64) -> Result<SpectralResult> {
    find_eigenvalues_with(spec, &SpectrumOptions::with_tol(tol))
}

pub fn find_eigenvalues_with(spec: &SystemSpec, opts: &SpectrumOptions) -> Result<SpectralResult> {
    spec.validate()?;
    if spec.dimension != Dimension::Two {
        return Err(Error::Precondition("find_eigenvalues expects a two-dimensional system".into()));
    }
    let cfg = opts.quad;
    let scanner = Scanner { alpha: spec.alpha, build: |k: KappaPoint| build_d_matrix_at(spec, k, &cfg) };
    let beta_min = spec.sites.iter().map(|s| s.beta).fold(f64::INFINITY, f64::min);
    let kappa_max = 4.0 * dominance_kappa(beta_min).max(0.5 * spec.alpha);
    let roots = scanner.scan(spec.n(), kappa_max, opts.root_tol)?;
    let embedded = match mirror_pair(spec) {
        Some((alpha, beta, a)) => {
            let pair = symmetric_pair_spectrum_with(alpha, beta, a, opts)?;
            Some(
                pair.embedded
                    .map(|e| EmbeddedLevel {
                        energy: e,
                        kappa: (-e).sqrt(),
                        provenance: "antisymmetric mirror-pair level (decoupled from the line)".into(),
                    })
                    .into_iter()
                    .collect(),
            )
        }
        None => None,
    };
    Ok(SpectralResult {
        energies: roots.iter().map(|r| r.energy).collect(),
        roots,
        embedded,
        count_bounds: (1, spec.n()),
    })
}

/// Root of an increasing function of `ε = κ − α/2` that tends to `−∞` at
/// the threshold.
fn increasing_root_above_threshold<F>(alpha: f64, f: F) -> Result<Root>
where
    F: Fn(KappaPoint) -> Result<f64>,
{
    let half = 0.5 * alpha;
    let point = |eps: f64| KappaPoint { kappa: half + eps, eps };
    let mut hi = half.max(1.0);
    let mut guard = 0;
    while f(point(hi))? <= 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 1100 {
            return Err(Error::RootNotFound("no upper bracket".into()));
        }
    }
    let mut lo = half * 1e-300;
    if f(point(lo))? > 0.0 {
        return Err(Error::RootNotFound("function positive at the threshold".into()));
    }
    while hi > 2.0 * lo {
        let mid = (lo * hi).sqrt();
        if f(point(mid))? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let r = brent(|e| f(point(e)), lo, hi, 4.0 * f64::EPSILON * hi, 200)?;
    let k = point(r.x);
    Ok(Root {
        kappa: k.kappa,
        threshold_offset: k.eps,
        energy: -k.kappa * k.kappa,
        residual: r.fx.abs(),
        bracket: (point(r.bracket.0).kappa, point(r.bracket.1).kappa),
        multiplicity: 1,
        resolved: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinglePointAsymptotics {
    /// `lim_{a→∞} κ_a = max(√−ε_β, α/2)`.
    pub limit_kappa_infinity: f64,
    /// `κ₀`, the root of `š_β = φ̌₀`; an upper bound for every `κ_a`.
    pub kappa_zero_upper_bound: f64,
}

pub fn single_point_asymptotics(alpha: f64, beta: f64) -> Result<SinglePointAsymptotics> {
    if !(alpha > 0.0) {
        return Err(Error::Precondition(format!("alpha must be positive, got {alpha}")));
    }
    let point_kappa = point_only_kappa(beta, Dimension::Two).expect("two-dimensional level exists");
    let k0 = increasing_root_above_threshold(alpha, |k| Ok(s_beta_real(beta, k.kappa) - phi_line_zero(alpha, k)))?;
    Ok(SinglePointAsymptotics {
        limit_kappa_infinity: point_kappa.max(0.5 * alpha),
        kappa_zero_upper_bound: k0.kappa,
    })
}

/// The single-site eigenvalue, `ď_a(κ_a) = 0`.
pub fn single_point_root(alpha: f64, beta: f64, a: f64, opts: &SpectrumOptions) -> Result<Root> {
    increasing_root_above_threshold(alpha, |k| bs2d::d_single(alpha, beta, a, k, &opts.quad))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSpectrum {
    /// Point-only pair levels `(μ₁, μ₂)`: `š = K̃` and `š = −K̃`. `μ₂` is absent
    /// when the antisymmetric equation has no root.
    pub pair_levels: (f64, Option<f64>),
    pub kappa1: f64,
    pub kappa2: Option<f64>,
    /// Root of the symmetric factor `š − K̃ − 2φ̌_a` above the threshold.
    pub symmetric_root: Root,
    /// Isolated eigenvalues below `−α²/4`, increasing.
    pub isolated: Vec<f64>,
    pub embedded: Option<f64>,
}

pub fn symmetric_pair_spectrum(alpha: f64, beta: f64, a: f64) -> Result<PairSpectrum> {
    symmetric_pair_spectrum_with(alpha, beta, a, &SpectrumOptions::default())
}

pub fn symmetric_pair_spectrum_with(alpha: f64, beta: f64, a: f64, opts: &SpectrumOptions) -> Result<PairSpectrum> {
    if !(alpha > 0.0) || !(a > 0.0) {
        return Err(Error::Precondition(format!("need α > 0 and a > 0, got α = {alpha}, a = {a}")));
    }
    let kt = |kappa: f64| free_kernel(kappa, 2.0 * a);
    let kb = point_only_kappa(beta, Dimension::Two).expect("two-dimensional level exists");

    // š + K̃ increases from β − ln(2a)/2π (κ → 0) and is positive at κ_β
    let kappa2 = if beta - (2.0 * a).ln() / (2.0 * PI) < 0.0 {
        let lo = 1e-250 / a;
        let r = brent(|k| Ok(s_beta_real(beta, k) + kt(k)?), lo, kb, 4.0 * f64::EPSILON * kb, 400)?;
        Some(r.x)
    } else {
        None
    };
    // š − K̃ is negative at κ_β and increasing
    let mut hi = 2.0 * kb;
    while s_beta_real(beta, hi) - kt(hi)? <= 0.0 {
        hi *= 2.0;
    }
    let kappa1 = brent(|k| Ok(s_beta_real(beta, k) - kt(k)?), kb, hi, 4.0 * f64::EPSILON * hi, 400)?.x;
    let eps_beta = -kb * kb;
    let mu1 = -kappa1 * kappa1;
    let mu2 = kappa2.map(|k| -k * k);
    if !(mu1 < eps_beta) || mu2.is_some_and(|m| !(eps_beta < m)) {
        return Err(Error::SolverFailure(format!(
            "pair levels violate μ₁ < ε_β < μ₂: μ₁ = {mu1}, ε_β = {eps_beta}, μ₂ = {mu2:?}"
        )));
    }

    let symmetric_root = increasing_root_above_threshold(alpha, |k| {
        Ok(s_beta_real(beta, k.kappa) - kt(k.kappa)? - 2.0 * phi_line_at(alpha, a, k, &opts.quad)?)
    })?;
    let mut isolated = vec![symmetric_root.energy];
    let mut embedded = None;
    if let (Some(k2), Some(m2)) = (kappa2, mu2) {
        if k2 > 0.5 * alpha {
            isolated.push(m2);
        } else if k2 < 0.5 * alpha {
            embedded = Some(m2);
        }
    }
    isolated.sort_by(f64::total_cmp);
    Ok(PairSpectrum { pair_levels: (mu1, mu2), kappa1, kappa2, symmetric_root, isolated, embedded })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDiagnostics {
    /// Coefficient of `−ln ρ` on small circles around the site.
    pub xi_site: f64,
    /// Regular part at the site.
    pub omega_site: f64,
    /// Line point `(x₁, 0)` where the line functionals were evaluated.
    pub line_x1: f64,
    /// Jump of `∂₂ψ` across the line.
    pub xi_line: f64,
    /// Value on the line.
    pub omega_line: f64,
}

impl BoundaryDiagnostics {
    /// `|2πβΞ − Ω| / max(|Ξ|, |Ω|)`.
    pub fn site_residual(&self, beta: f64) -> f64 {
        (2.0 * PI * beta * self.xi_site - self.omega_site).abs() / self.xi_site.abs().max(self.omega_site.abs())
    }

    /// `|Ξ_Σ + αΩ_Σ| / max(|Ξ_Σ|, α|Ω_Σ|)`.
    pub fn line_residual(&self, alpha: f64) -> f64 {
        (self.xi_line + alpha * self.omega_line).abs() / self.xi_line.abs().max((alpha * self.omega_line).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenfunctionSample {
    pub point: [f64; 2],
    pub value: Complex64,
    pub boundary_diagnostics: BoundaryDiagnostics,
}

/// Unnormalized single-site eigenfunction
///
/// ```text
/// ψ(x) = K₀(κ|x − y|)/2π + (α/2π) ∫₀^∞ cos(p(x₁ − l)) e^{−k(|x₂| + |a|)} / (k(2k − α)) dp
/// ```
///
/// i.e. the line-only resolvent kernel `G^{(α)}(x, y)` at `z = −κ²`. The second
/// term is the two-dimensional momentum integral with the `p₂` integration
/// done by residues: `∫ e^{ip₂x₂}/(p₂² + k²) dp₂ = π e^{−k|x₂|}/k`.
pub struct Eigenfunction {
    alpha: f64,
    beta: f64,
    l: f64,
    a: f64,
    k: KappaPoint,
    cfg: QuadratureConfig,
}

impl Eigenfunction {
    pub fn new(spec: &SystemSpec, kappa: f64, opts: &SpectrumOptions) -> Result<Self> {
        spec.validate()?;
        if spec.dimension != Dimension::Two || spec.n() != 1 {
            return Err(Error::Precondition("eigenfunctions are evaluated for one site in the plane".into()));
        }
        let site = &spec.sites[0];
        let k = KappaPoint::new(spec.alpha, kappa)?;
        let residual = bs2d::d_single(spec.alpha, site.beta, site.transverse(), k, &opts.quad)?;
        if residual.abs() > opts.root_tol {
            return Err(Error::Precondition(format!(
                "κ = {kappa} is not an eigenvalue root: |ď| = {:e}",
                residual.abs()
            )));
        }
        Ok(Self { alpha: spec.alpha, beta: site.beta, l: site.position[0], a: site.transverse(), k, cfg: opts.quad })
    }

    pub fn value(&self, x: [f64; 2]) -> Result<f64> {
        let r = ((x[0] - self.l).powi(2) + (x[1] - self.a).powi(2)).sqrt();
        let free = k0_real(self.k.kappa * r)? / (2.0 * PI);
        let line = theta_integral(self.alpha, x[1].abs() + self.a.abs(), x[0] - self.l, self.k, &self.cfg)?;
        Ok(free + line)
    }

    fn circle_mean(&self, rho: f64) -> Result<f64> {
        let m = 8;
        let mut s = 0.0;
        for j in 0..m {
            let t = 2.0 * PI * (j as f64 + 0.5) / m as f64;
            s += self.value([self.l + rho * t.cos(), self.a + rho * t.sin()])?;
        }
        Ok(s / m as f64)
    }

    /// Site functionals from circle means at two radii and line functionals
    /// from one-sided second-order differences at `(x₁, 0±)`.
    pub fn diagnostics(&self, x1: f64) -> Result<BoundaryDiagnostics> {
        let (r1, r2) = (1e-3, 1e-4);
        let (f1, f2) = (self.circle_mean(r1)?, self.circle_mean(r2)?);
        let xi_site = -(f1 - f2) / (r1.ln() - r2.ln());
        let omega_site = f2 + xi_site * r2.ln();

        let h = 1e-3 * (1.0 / self.k.kappa).min(self.a.abs());
        let f0 = self.value([x1, 0.0])?;
        let up = (-3.0 * f0 + 4.0 * self.value([x1, h])? - self.value([x1, 2.0 * h])?) / (2.0 * h);
        let down = (3.0 * f0 - 4.0 * self.value([x1, -h])? + self.value([x1, -2.0 * h])?) / (2.0 * h);
        Ok(BoundaryDiagnostics { xi_site, omega_site, line_x1: x1, xi_line: up - down, omega_line: f0 })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Evaluates the eigenfunction at `points`, each with boundary diagnostics at
/// the site and at the projection `(x₁, 0)` of the point onto the line.
pub fn eigenfunction_eval(spec: &SystemSpec, kappa_root: f64, points: &[[f64; 2]]) -> Result<Vec<EigenfunctionSample>> {
    let opts = SpectrumOptions::default();
    let ef = Eigenfunction::new(spec, kappa_root, &opts)?;
    exec::map(points, |&p| -> Result<EigenfunctionSample> {
        Ok(EigenfunctionSample {
            point: p,
            value: Complex64::new(ef.value(p)?, 0.0),
            boundary_diagnostics: ef.diagnostics(p[0])?,
        })
    })
    .into_iter()
    .collect()
}

/// Half-line `∫₀^∞ cos(ωp)/(p² + k²) dp` by half-period partial sums with
/// repeated averaging (alternating tail); plain quadrature when `ω = 0`.
fn cosine_transform_lorentzian(omega: f64, k: f64, cfg: &QuadratureConfig) -> Result<f64> {
    use crate::quadrature::integrate_real;
    if omega == 0.0 {
        return Ok(PI / (2.0 * k));
    }
    let w = omega.abs();
    let period = PI / w;
    let f = |p: f64| (w * p).cos() / (p * p + k * k);
    let mut partial = Vec::with_capacity(48);
    let mut acc = integrate_real(f, 0.0, 0.5 * period, cfg)?.require()?.re;
    partial.push(acc);
    for j in 0..47 {
        let a = (j as f64 + 0.5) * period;
        acc += integrate_real(f, a, a + period, cfg)?.require()?.re;
        partial.push(acc);
    }
    // repeated averaging of consecutive partial sums
    let mut row = partial;
    while row.len() > 1 {
        row = row.windows(2).map(|v| 0.5 * (v[0] + v[1])).collect();
    }
    Ok(row[0])
}

/// Reference evaluation of the eigenfunction from the two-dimensional
/// momentum representation
/// `(1/4π²) ∫∫ [e^{−ip₂a} + α e^{−ka}/(2k − α)] e^{ip·x} / (p² + κ²) d²p`
/// by iterated one-dimensional quadrature (inner `p₂`, outer `p₁`).
pub fn eigenfunction_reference(alpha: f64, a: f64, kappa: f64, x: [f64; 2]) -> Result<f64> {
    let cfg = QuadratureConfig::with_tolerances(1e-14, 1e-11);
    let inner = |p1: f64| -> Result<f64> {
        let k = (p1 * p1 + kappa * kappa).sqrt();
        let c = alpha * (-k * a).exp() / (2.0 * k - alpha);
        // both terms are even in p₂; the odd parts integrate to zero
        Ok(2.0 * (cosine_transform_lorentzian(x[1] - a, k, &cfg)? + c * cosine_transform_lorentzian(x[1], k, &cfg)?))
    };
    let outer = crate::quadrature::integrate_halfline_scaled(
        |p1: f64| match inner(p1) {
            Ok(v) => Complex64::new(v * (p1 * x[0]).cos(), 0.0),
            Err(_) => Complex64::new(f64::NAN, 0.0),
        },
        0.0,
        kappa,
        &cfg,
    )?
    .require()?;
    Ok(2.0 * outer.re / (4.0 * PI * PI))
}

/// Largest mismatch between the reduced and the iterated two-dimensional
/// evaluation over `points`; an error if it exceeds `1e-5`.
pub fn eigenfunction_cross_check(spec: &SystemSpec, kappa_root: f64, points: &[[f64; 2]]) -> Result<f64> {
    let ef = Eigenfunction::new(spec, kappa_root, &SpectrumOptions::default())?;
    let site = &spec.sites[0];
    let a = site.transverse();
    let mut worst: f64 = 0.0;
    for &p in points {
        let shifted = [p[0] - site.position[0], p[1]];
        let reduced = ef.value(p)?;
        let reference = eigenfunction_reference(spec.alpha, a, kappa_root, shifted)?;
        worst = worst.max((reduced - reference).abs());
    }
    if worst > 1e-5 {
        return Err(Error::SolverFailure(format!(
            "eigenfunction reduction disagrees with the 2D integral by {worst:e}"
        )));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_far_from_line() {
        let spec = SystemSpec::single_2d(2.0, 0.0, 10.0).unwrap();
        let r = find_eigenvalues(&spec, 1e-10).unwrap();
        assert_eq!(r.count(), 1);
        assert!((r.roots[0].kappa - 2.0 * (-EULER_GAMMA).exp()).abs() < 1e-3);
    }

    #[test]
    fn single_site_threshold_regime() {
        let spec = SystemSpec::single_2d(4.0, 0.0, 20.0).unwrap();
        let r = find_eigenvalues(&spec, 1e-10).unwrap();
        assert_eq!(r.count(), 1);
        let off = r.roots[0].threshold_offset;
        assert!(off > 0.0 && off < 1e-2, "{off}");
    }

    #[test]
    fn three_strong_sites() {
        let spec = SystemSpec::new(
            Dimension::Two,
            1.0,
            vec![
                crate::system::Site::planar(0.0, 1.0, -2.0),
                crate::system::Site::planar(2.0, -1.5, -2.0),
                crate::system::Site::planar(-1.0, 0.5, -2.0),
            ],
        )
        .unwrap();
        let r = find_eigenvalues(&spec, 1e-10).unwrap();
        assert_eq!(r.count(), 3);
    }

    #[test]
    fn agrees_with_single_root_solver() {
        let spec = SystemSpec::single_2d(3.0, 0.2, 0.7).unwrap();
        let r = find_eigenvalues(&spec, 1e-10).unwrap();
        let s = single_point_root(3.0, 0.2, 0.7, &SpectrumOptions::default()).unwrap();
        assert!((r.roots[0].kappa - s.kappa).abs() < 1e-12 * s.kappa);
    }

    #[test]
    fn asymptotic_limits() {
        let r = single_point_asymptotics(3.0, 0.0).unwrap();
        assert_eq!(r.limit_kappa_infinity, 1.5);
        let r = single_point_asymptotics(2.0, 0.0).unwrap();
        assert!((r.limit_kappa_infinity - 1.122_918_967_1).abs() < 1e-9);
        assert!(r.kappa_zero_upper_bound > r.limit_kappa_infinity);
    }

    #[test]
    fn mirror_pair_embedded() {
        let p = symmetric_pair_spectrum(3.0, 0.0, 1.0).unwrap();
        let mu2 = p.pair_levels.1.unwrap();
        assert_eq!(p.embedded.is_some(), mu2 > -2.25);
        // antisymmetric level independent of α
        let q = symmetric_pair_spectrum(6.0, 0.0, 1.0).unwrap();
        assert!((p.kappa2.unwrap() - q.kappa2.unwrap()).abs() < 1e-14);
    }

    #[test]
    fn mirror_pair_detected_by_general_solver() {
        let spec = SystemSpec::symmetric_pair(3.0, 0.0, 1.0).unwrap();
        let r = find_eigenvalues(&spec, 1e-10).unwrap();
        let p = symmetric_pair_spectrum(3.0, 0.0, 1.0).unwrap();
        assert_eq!(r.energies.len(), p.isolated.len());
        for (x, y) in r.energies.iter().zip(&p.isolated) {
            assert!((x - y).abs() < 1e-10 * y.abs());
        }
        let emb = r.embedded.unwrap();
        assert_eq!(emb.len(), usize::from(p.embedded.is_some()));
    }

    fn eigen_setup() -> (SystemSpec, f64) {
        let spec = SystemSpec::single_2d(2.0, 0.0, 1.0).unwrap();
        let k = find_eigenvalues(&spec, 1e-10).unwrap().roots[0].kappa;
        (spec, k)
    }

    #[test]
    fn eigenfunction_boundary_conditions() {
        let (spec, k) = eigen_setup();
        let samples = eigenfunction_eval(&spec, k, &[[0.3, 2.0], [-1.0, 0.5], [2.5, -1.0]]).unwrap();
        for s in &samples {
            let d = s.boundary_diagnostics;
            assert!(d.line_residual(2.0) < 1e-4, "line {}", d.line_residual(2.0));
            assert!(d.site_residual(0.0) < 1e-3 || (d.omega_site.abs() < 1e-3 * d.xi_site.abs()));
            assert!((d.xi_site - 1.0 / (2.0 * PI)).abs() < 1e-6);
        }
    }

    #[test]
    fn eigenfunction_site_condition_nonzero_beta() {
        let spec = SystemSpec::single_2d(3.0, -0.3, 0.8).unwrap();
        let k = find_eigenvalues(&spec, 1e-10).unwrap().roots[0].kappa;
        let s = eigenfunction_eval(&spec, k, &[[0.0, 2.0]]).unwrap();
        assert!(s[0].boundary_diagnostics.site_residual(-0.3) < 1e-3);
    }

    #[test]
    fn eigenfunction_far_field() {
        let (spec, k) = eigen_setup();
        let ef = Eigenfunction::new(&spec, k, &SpectrumOptions::default()).unwrap();
        let far = 40.0 / k;
        let mut prev = f64::INFINITY;
        for r in [far / 8.0, far / 4.0, far / 2.0, far] {
            let v = ef.value([r, 2.0]).unwrap().abs();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-10);
    }

    #[test]
    fn eigenfunction_matches_iterated_quadrature() {
        let (spec, k) = eigen_setup();
        let pts = [[0.4, 2.0], [-0.7, 0.5], [1.5, -0.6], [0.0, 1.7], [2.2, 0.3]];
        let worst = eigenfunction_cross_check(&spec, k, &pts).unwrap();
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn eigenfunction_requires_root() {
        let (spec, k) = eigen_setup();
        assert!(eigenfunction_eval(&spec, k * 1.01, &[[0.0, 2.0]]).is_err());
    }
}
