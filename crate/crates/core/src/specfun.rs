//! Branch-aware elementary and special functions.
//!
//! Conventions used throughout the crate:
//!
//! * `sqrt_cut_positive(z)` is the square root with its cut on the positive
//!   half-line, i.e. `arg z` is taken in `(0, 2π)` and the result always has a
//!   nonnegative imaginary part. For `κ > 0`, `sqrt_cut_positive(-κ²) = iκ`.
//! * `sqrt_shifted(z, t) = (z - t)^{1/2}` on the same (first) sheet.
//! * `K₀`/`K₁` are the Macdonald functions on the plane cut along `(-∞, 0]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::system::Dimension;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Digamma at one, `ψ(1) = -γ`.
pub const PSI_ONE: f64 = -EULER_GAMMA;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Imaginary part kept nonnegative (cut on the positive half-line).
    FirstSheet,
}

/// A square root together with the sheet it was taken on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedValue {
    pub value: Complex64,
    pub branch: Branch,
}

impl BranchedValue {
    pub fn sqrt(z: Complex64) -> Self {
        Self {
            value: sqrt_cut_positive(z),
            branch: Branch::FirstSheet,
        }
    }

    pub fn sqrt_shifted(z: Complex64, t: f64) -> Self {
        Self {
            value: sqrt_shifted(z, t),
            branch: Branch::FirstSheet,
        }
    }
}

/// `√z` with the cut on `[0, ∞)`; `Im √z ≥ 0`.
pub fn sqrt_cut_positive(z: Complex64) -> Complex64 {
    let w = z.sqrt();
    if w.im < 0.0 || (w.im == 0.0 && w.re < 0.0) {
        -w
    } else {
        w
    }
}

/// `(z - t)^{1/2}` on the first sheet.
pub fn sqrt_shifted(z: Complex64, t: f64) -> Complex64 {
    sqrt_cut_positive(z - t)
}

/// `(e^x - 1) / x`, accurate for small `|x|`.
pub fn expm1_over(x: Complex64) -> Complex64 {
    if x.norm() < 0.25 {
        // Taylor series of (e^x - 1)/x = sum x^k / (k+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..40 {
            term *= x / (k as f64 + 1.0);
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (x.exp() - 1.0) / x
    }
}

/// Real version of [`expm1_over`].
pub fn expm1_over_real(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.exp_m1() / x
    }
}

fn check_k_domain(x: Complex64) -> Result<()> {
    if !x.re.is_finite() || !x.im.is_finite() {
        return Err(Error::Domain(format!("Macdonald function at non-finite argument {x}")));
    }
    if x.norm() < 1e-300 {
        return Err(Error::Overflow(format!("Macdonald function at |x| = {:e}", x.norm())));
    }
    if x.im == 0.0 && x.re <= 0.0 {
        return Err(Error::Domain(format!("Macdonald function on its cut at x = {}", x.re)));
    }
    Ok(())
}

/// Macdonald function `K₀(x)` on the cut plane.
pub fn macdonald_k0(x: Complex64) -> Result<Complex64> {
    check_k_domain(x)?;
    Ok(k0_k1_unchecked(x).0)
}

/// Macdonald function `K₁(x)`; `K₀' = -K₁`.
pub fn macdonald_k1(x: Complex64) -> Result<Complex64> {
    check_k_domain(x)?;
    Ok(k0_k1_unchecked(x).1)
}

/// `K₀` for a positive real argument.
pub fn k0_real(x: f64) -> Result<f64> {
    Ok(macdonald_k0(Complex64::new(x, 0.0))?.re)
}

/// `K₁` for a positive real argument.
pub fn k1_real(x: f64) -> Result<f64> {
    Ok(macdonald_k1(Complex64::new(x, 0.0))?.re)
}

/// Both `K₀(x)` and `K₁(x)`; the caller has validated the argument.
///
/// The right half-plane (where every kernel in this crate evaluates `K₀`) is
/// covered by the series and the continued fraction to near machine
/// precision. For `Re x < 0` the continued fraction breaks down; there the
/// series is used up to `|x| = 17` (losing up to ~8 digits close to the
/// imaginary axis) and the Hankel expansion beyond.
pub(crate) fn k0_k1_unchecked(x: Complex64) -> (Complex64, Complex64) {
    let r = x.norm();
    if r <= 2.0 {
        k0_k1_series(x)
    } else if x.re >= 0.0 {
        k0_k1_continued_fraction(x)
    } else if r < 17.0 {
        k0_k1_series(x)
    } else {
        k0_k1_hankel(x)
    }
}

// Large-|x| asymptotic expansion, truncated at its smallest term.
fn k0_k1_hankel(x: Complex64) -> (Complex64, Complex64) {
    let prefactor = (PI / (2.0 * x)).sqrt() * (-x).exp();
    let sum = |mu: f64| {
        let mut term = Complex64::new(1.0, 0.0);
        let mut total = term;
        for k in 1..200usize {
            let odd = (2 * k - 1) as f64;
            let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
            if next.norm() >= term.norm() {
                break;
            }
            term = next;
            total += term;
            if term.norm() < 1e-17 * total.norm() {
                break;
            }
        }
        total
    };
    (prefactor * sum(0.0), prefactor * sum(4.0))
}

// Ascending series, |x| <= 2.
fn k0_k1_series(x: Complex64) -> (Complex64, Complex64) {
    let y = x * x * 0.25;
    let log_half = (x * 0.5).ln();

    let mut i0 = Complex64::new(0.0, 0.0);
    let mut i1 = Complex64::new(0.0, 0.0);
    let mut k0_tail = Complex64::new(0.0, 0.0);
    let mut k1_tail = Complex64::new(0.0, 0.0);

    // term_k = y^k / (k!)^2 ; term1_k = y^k / (k! (k+1)!)
    let mut term = Complex64::new(1.0, 0.0);
    let mut harmonic = 0.0; // H_k
    for k in 0..60usize {
        if k > 0 {
            term *= y / ((k * k) as f64);
            harmonic += 1.0 / k as f64;
        }
        let term1 = term / (k as f64 + 1.0);
        let psi_k1 = PSI_ONE + harmonic; // ψ(k+1)
        let psi_k2 = psi_k1 + 1.0 / (k as f64 + 1.0); // ψ(k+2)
        i0 += term;
        i1 += term1;
        k0_tail += term * harmonic;
        k1_tail += term1 * (psi_k1 + psi_k2);
        if k > 2 && term.norm() < 1e-18 * i0.norm() {
            break;
        }
    }
    let i1 = i1 * x * 0.5;
    let k0 = -(log_half + EULER_GAMMA) * i0 + k0_tail;
    let k1 = x.inv() + log_half * i1 - x * 0.25 * k1_tail;
    (k0, k1)
}

// Steed's continued fraction (Temme's CF2) for |x| > 2; valid off the cut.
fn k0_k1_continued_fraction(x: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let a1 = 0.25;
    let mut b = (one + x) * 2.0;
    let mut d = b.inv();
    let mut h = d;
    let mut delh = d;
    let mut q1 = Complex64::new(0.0, 0.0);
    let mut q2 = one;
    let mut q = Complex64::new(a1, 0.0);
    let mut c = Complex64::new(a1, 0.0);
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 2..20_000usize {
        a -= 2.0 * (i as f64 - 1.0);
        c = -c * a / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = (b + d * a).inv();
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < 1e-17 * s.norm() {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// Exponential integral `E₁(ζ) = ∫_ζ^∞ e^{−t}/t dt` on the principal branch.
/// On the cut `ζ < 0` the sign of `Im ζ` (including a signed zero) selects
/// the side: `+0` gives `−Ei(|ζ|) − iπ`, `−0` gives `−Ei(|ζ|) + iπ`.
pub fn exp_integral_e1(z: Complex64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("E₁ is singular at 0".into()));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("E₁ at non-finite argument {z}")));
    }
    if z.norm() > 2.0 && z.re > -z.im.abs() {
        Ok(e1_continued_fraction(z))
    } else {
        Ok(e1_series(z))
    }
}

fn e1_series(z: Complex64) -> Complex64 {
    // E₁(z) = −γ − ln z − Σ_{k≥1} (−z)^k / (k·k!)
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..2000 {
        let kf = k as f64;
        term *= -z / kf;
        let add = term / kf;
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

fn e1_continued_fraction(z: Complex64) -> Complex64 {
    // modified Lentz on E₁(z) = e^{−z} / (z + 1 − 1²/(z + 3 − 2²/(z + 5 − …)))
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..5000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = (d * an + b).inv();
        c = b + c.inv() * an;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h * (-z).exp()
}

/// Point-coupling function `s_β(z) = β + (1/2π)(ln(√z / 2i) − ψ(1))`.
pub fn s_beta(beta: f64, z: Complex64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("s_beta at the branch point z = 0".into()));
    }
    let w = sqrt_cut_positive(z) / (2.0 * I);
    Ok(beta + (w.ln() - PSI_ONE) / (2.0 * PI))
}

/// Real form `š_β(κ) = β + (1/2π)(ln(κ/2) − ψ(1))`, equal to `s_β(-κ²)`.
pub fn s_beta_real(beta: f64, kappa: f64) -> f64 {
    beta + ((0.5 * kappa).ln() - PSI_ONE) / (2.0 * PI)
}

/// `dš_β/dκ = 1/(2πκ)`.
pub fn s_beta_real_derivative(kappa: f64) -> f64 {
    1.0 / (2.0 * PI * kappa)
}

/// Isolated eigenvalue of the point-interaction-only Hamiltonian.
///
/// In two dimensions there is always one, `−4 exp(2(−2πβ + ψ(1)))`. In three
/// dimensions it is `−(4πβ)²` for `β < 0` and there is none otherwise.
pub fn point_only_eigenvalue(beta: f64, dimension: Dimension) -> Option<f64> {
    match dimension {
        Dimension::Two => Some(-4.0 * (2.0 * (-2.0 * PI * beta + PSI_ONE)).exp()),
        Dimension::Three => (beta < 0.0).then(|| -(4.0 * PI * beta).powi(2)),
    }
}

/// `√(−ε_β)` for the point-only level, when it exists.
pub fn point_only_kappa(beta: f64, dimension: Dimension) -> Option<f64> {
    match dimension {
        Dimension::Two => Some(2.0 * (-2.0 * PI * beta + PSI_ONE).exp()),
        Dimension::Three => (beta < 0.0).then(|| -4.0 * PI * beta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn e1_reference_values() {
        for (x, want) in [(0.1, 1.822_923_958_419_390_7), (1.0, 0.219_383_934_395_520_27), (5.0, 0.001_148_295_591_275_326)] {
            let v = exp_integral_e1(c(x, 0.0)).unwrap();
            assert!((v.re - want).abs() < 1e-15 * want.max(1.0), "{x}: {v}");
            assert_eq!(v.im, 0.0);
        }
        // E₁(i) = −Ci(1) + i(Si(1) − π/2)
        let v = exp_integral_e1(c(0.0, 1.0)).unwrap();
        assert!((v - c(-0.337_403_922_900_968_1, 0.946_083_070_367_183 - PI / 2.0)).norm() < 1e-15);
        // −Ei(1) ∓ iπ on either side of the cut
        let up = exp_integral_e1(c(-1.0, 0.0)).unwrap();
        let down = exp_integral_e1(c(-1.0, -0.0)).unwrap();
        assert!((up - c(-1.895_117_816_355_936_8, -PI)).norm() < 1e-14);
        assert_eq!(down, up.conj());
    }

    #[test]
    fn e1_series_and_fraction_agree() {
        for arg in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            for r in [2.5, 4.0] {
                let z = Complex64::from_polar(r, arg);
                let s = e1_series(z);
                let f = e1_continued_fraction(z);
                // the series cancels like e^{2|z|} on the positive axis
                assert!((s - f).norm() < 1e-16 * (2.0 * r).exp() * s.norm(), "{z}: {s} vs {f}");
            }
        }
    }

    #[test]
    fn k0_at_one() {
        let v = k0_real(1.0).unwrap();
        assert!((v - 0.421_024_438_240_708_34).abs() < 1e-15);
    }

    #[test]
    fn reference_values() {
        // 30-digit evaluations prepared ahead of time
        let table = [
            (0.5, 0.3, 0.760_679_778_665_956_5, -0.434_104_569_821_073_25, 1.095_525_871_395_681, -0.944_722_668_909_898_6),
            (5.0, 5.0, 0.001_945_163_072_458_817_7, 0.002_460_604_699_954_409, 0.002_159_526_923_811_522, 0.002_490_313_491_042_557),
            (30.0, -10.0, -1.541_589_599_140_864_4e-14, -1.393_212_017_629_787_3e-14, -1.557_696_815_650_61e-14, -1.421_571_003_270_348_7e-14),
            (1e-6, 0.0, 13.931_442_073_626_42, 0.0, 999_999.999_992_784_3, 0.0),
            (700.0, 0.0, 4.669_776_431_685_377e-306, 0.0, 4.673_110_796_707_966e-306, 0.0),
            (2.5, -0.1, 0.061_888_781_996_868_49, 0.007_368_694_109_066_562, 0.073_279_689_194_505_57, 0.009_160_476_336_177_871),
            (0.01, 8.0, -0.347_440_117_502_149_4, -0.267_156_794_600_065_97, -0.364_763_965_552_069_35, -0.246_055_019_063_988_4),
        ];
        for (re, im, k0r, k0i, k1r, k1i) in table {
            let x = c(re, im);
            let k0 = macdonald_k0(x).unwrap();
            let k1 = macdonald_k1(x).unwrap();
            assert!((k0 - c(k0r, k0i)).norm() <= 1e-12 * c(k0r, k0i).norm(), "K0({x}) = {k0}");
            assert!((k1 - c(k1r, k1i)).norm() <= 1e-12 * c(k1r, k1i).norm(), "K1({x}) = {k1}");
        }
    }

    #[test]
    fn k0_small_argument_log_behaviour() {
        for &x in &[1e-3, 1e-5, 1e-7] {
            let r = k0_real(x).unwrap() + (0.5 * x).ln() + EULER_GAMMA;
            assert!(r.abs() < 10.0 * x * x * (1.0 - x.ln()), "x={x} r={r}");
        }
    }

    #[test]
    fn k0_large_argument_asymptotic() {
        let x: f64 = 50.0;
        let scaled = k0_real(x).unwrap() * x.exp() * (2.0 * x / PI).sqrt();
        // leading correction is -1/(8x)
        assert!((scaled - 1.0).abs() < 1.0 / (8.0 * x) + 1e-8);
        assert!((scaled - (1.0 - 1.0 / (8.0 * x) + 9.0 / (128.0 * x * x))).abs() < 1e-6);
    }

    #[test]
    fn k0_series_and_fraction_agree_at_switch() {
        for &phase in &[0.0, 0.5, 1.2, 1.5, -1.5, -0.7] {
            let x = Complex64::from_polar(2.0, phase);
            let (a0, a1) = k0_k1_series(x);
            let (b0, b1) = k0_k1_continued_fraction(x);
            assert!((a0 - b0).norm() < 1e-13 * a0.norm(), "phase {phase}");
            assert!((a1 - b1).norm() < 1e-13 * a1.norm(), "phase {phase}");
        }
    }

    #[test]
    fn left_half_plane_matches_series() {
        // Hankel expansion against the (slowly cancelling) series at |x| = 17
        for &phase in &[1.7, 2.2, 2.7, 3.1] {
            let x = Complex64::from_polar(17.0, phase);
            let (a0, a1) = k0_k1_series(x);
            let (b0, b1) = k0_k1_hankel(x);
            assert!((a0 - b0).norm() < 1e-6 * a0.norm(), "phase {phase}");
            assert!((a1 - b1).norm() < 1e-6 * a1.norm(), "phase {phase}");
        }
        // connection formula K₀(x) = K₀(-x) - iπ I₀(-x) at a moderate point
        let x = Complex64::from_polar(3.0, 2.5);
        let w = -x;
        let i0: Complex64 = (0..60)
            .scan(Complex64::new(1.0, 0.0), |t, k| {
                let cur = *t;
                *t *= w * w * 0.25 / (((k + 1) * (k + 1)) as f64);
                Some(cur)
            })
            .sum();
        let expected = k0_k1_unchecked(w).0 - I * PI * i0;
        assert!((k0_k1_unchecked(x).0 - expected).norm() < 1e-11 * expected.norm());
    }

    #[test]
    fn k0_real_axis_has_no_imaginary_part() {
        for &x in &[0.01, 0.7, 3.0, 40.0] {
            assert_eq!(macdonald_k0(c(x, 0.0)).unwrap().im, 0.0);
        }
    }

    #[test]
    fn k0_underflows_gracefully() {
        let v = k0_real(800.0).unwrap();
        assert!((0.0..1e-300).contains(&v));
    }

    #[test]
    fn k0_domain_errors() {
        assert!(matches!(macdonald_k0(c(-1.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(macdonald_k0(c(0.0, 0.0)), Err(Error::Overflow(_))));
        assert!(matches!(macdonald_k0(c(1e-301, 0.0)), Err(Error::Overflow(_))));
    }

    #[test]
    fn k1_is_minus_k0_derivative() {
        for &x in &[c(0.3, 0.2), c(1.5, -0.7), c(4.0, 3.0), c(12.0, 0.5)] {
            let h = 1e-5;
            let d = (macdonald_k0(x + h).unwrap() - macdonald_k0(x - h).unwrap()) / (2.0 * h);
            let k1 = macdonald_k1(x).unwrap();
            assert!((d + k1).norm() < 1e-8 * k1.norm().max(1.0), "x={x}");
        }
    }

    #[test]
    fn cut_positive_root_on_negative_axis() {
        for &k in &[1e-3, 0.5, 1.0, 7.25, 1e3] {
            let r = sqrt_cut_positive(c(-k * k, 0.0));
            assert_eq!(r.re, 0.0);
            assert!((r.im - k).abs() <= 2.0 * f64::EPSILON * k);
        }
        let r = sqrt_cut_positive(c(-4.0, -0.0));
        assert_eq!(r, c(0.0, 2.0));
    }

    #[test]
    fn shifted_root_positive_imaginary_part() {
        for &(z, t) in &[(c(-1.0, 0.3), 2.0), (c(-1.0, -0.3), 2.0), (c(0.5, -1e-3), 0.1)] {
            assert!(sqrt_shifted(z, t).im > 0.0);
        }
    }

    #[test]
    fn s_beta_zero_at_point_level() {
        let kappa = 2.0 * (-EULER_GAMMA).exp();
        assert!(s_beta_real(0.0, kappa).abs() < 1e-16);
        assert!((s_beta_real(0.37, kappa) - 0.37).abs() < 1e-15);
        let z = c(-kappa * kappa, 0.0);
        let s = s_beta(0.0, z).unwrap();
        assert!(s.norm() < 1e-15);
    }

    #[test]
    fn s_beta_real_on_negative_axis_and_increasing() {
        let mut prev = f64::NEG_INFINITY;
        for i in 1..200 {
            let k = 0.05 * i as f64;
            let s = s_beta(0.2, c(-k * k, 0.0)).unwrap();
            assert!(s.im.abs() < 1e-16);
            assert!((s.re - s_beta_real(0.2, k)).abs() < 1e-14);
            assert!(s.re > prev);
            prev = s.re;
        }
        assert!(s_beta(0.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn point_only_levels() {
        let e0 = point_only_eigenvalue(0.0, Dimension::Two).unwrap();
        let k0 = (-e0).sqrt();
        assert!(s_beta_real(0.0, k0).abs() < 1e-15);
        assert!((e0 + 4.0 * (-2.0 * EULER_GAMMA).exp()).abs() < 1e-15);
        let e3 = point_only_eigenvalue(-0.1, Dimension::Three).unwrap();
        assert!((e3 + (0.4 * PI).powi(2)).abs() < 1e-14);
        assert!((e3 + 1.579_136_704_174_297).abs() < 1e-12);
        assert_eq!(point_only_eigenvalue(0.5, Dimension::Three), None);
    }

    #[test]
    fn expm1_over_small_and_large() {
        let x = c(1e-9, 2e-9);
        assert!((expm1_over(x) - (1.0 + x * 0.5)).norm() < 1e-17);
        let y = c(2.0, -1.0);
        assert!((expm1_over(y) - (y.exp() - 1.0) / y).norm() < 1e-15);
        assert!((expm1_over_real(-3.0) - ((-3.0f64).exp() - 1.0) / -3.0).abs() < 1e-16);
    }
}
