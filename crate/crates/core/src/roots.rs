//! Scalar root finders: Brent's method on a sign-change bracket and a
//! safeguarded secant iteration in the complex plane.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRoot {
    pub x: f64,
    pub fx: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Brent's method on `[a, b]` with `f(a)·f(b) ≤ 0`. Stops when the bracket
/// is narrower than `xtol` (absolute) or `f` vanishes exactly.
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Result<RealRoot>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(RealRoot { x: a, fx: 0.0, bracket: (a, a), iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(RealRoot { x: b, fx: 0.0, bracket: (b, b), iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::RootNotFound(format!(
            "no sign change on [{a}, {b}]: f = {fa:e}, {fb:e}"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            let (lo, hi) = if b < c { (b, c) } else { (c, b) };
            return Ok(RealRoot { x: b, fx: fb, bracket: (lo, hi), iterations: iter });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::RootNotFound(format!("Brent did not converge in {max_iter} iterations near {b}")))
}

/// Settings for [`complex_secant`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecantOptions {
    /// Stop when `|f(z)| ≤ ftol` or the step is below `ztol·max(1, |z|)`.
    pub ftol: f64,
    pub ztol: f64,
    pub max_iter: usize,
    /// Largest step allowed in one iteration.
    pub max_step: f64,
}

impl Default for SecantOptions {
    fn default() -> Self {
        Self { ftol: 1e-12, ztol: 1e-14, max_iter: 100, max_step: 0.25 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexRoot {
    pub z: Complex64,
    pub fz: Complex64,
    pub iterations: usize,
    /// Secant slope at the last step, an estimate of `f'(z)`.
    pub derivative: Complex64,
}

/// Secant iteration from `z0` (second point `z0 + h0`). Steps are clipped to
/// `max_step`; `admissible` is checked for every iterate and a rejected
/// iterate is pulled halfway back towards the previous one (up to 30 times).
pub fn complex_secant<F, A>(mut f: F, z0: Complex64, h0: Complex64, admissible: A, opts: &SecantOptions) -> Result<ComplexRoot>
where
    F: FnMut(Complex64) -> Result<Complex64>,
    A: Fn(Complex64) -> bool,
{
    let mut z_prev = z0;
    let mut f_prev = f(z_prev)?;
    let mut z = z0 + h0;
    if !admissible(z) {
        z = z0 - h0;
    }
    let mut fz = f(z)?;
    let mut slope = (fz - f_prev) / (z - z_prev);
    for iter in 1..=opts.max_iter {
        if fz.norm() <= opts.ftol {
            return Ok(ComplexRoot { z, fz, iterations: iter, derivative: slope });
        }
        slope = (fz - f_prev) / (z - z_prev);
        if slope.norm() == 0.0 || !slope.re.is_finite() || !slope.im.is_finite() {
            return Err(Error::RootNotFound(format!("degenerate secant slope at {z}")));
        }
        let mut step = -fz / slope;
        if step.norm() > opts.max_step {
            step *= opts.max_step / step.norm();
        }
        let mut z_next = z + step;
        let mut tries = 0;
        while !admissible(z_next) {
            step *= 0.5;
            z_next = z + step;
            tries += 1;
            if tries > 30 {
                return Err(Error::RootNotFound(format!("iterate left the admissible region near {z}")));
            }
        }
        let f_next = f(z_next)?;
        z_prev = z;
        f_prev = fz;
        z = z_next;
        fz = f_next;
        if step.norm() <= opts.ztol * z.norm().max(1.0) {
            slope = (fz - f_prev) / (z - z_prev);
            return Ok(ComplexRoot { z, fz, iterations: iter, derivative: slope });
        }
    }
    Err(Error::RootNotFound(format!(
        "secant did not converge in {} iterations; last iterate {z}, |f| = {:e}",
        opts.max_iter,
        fz.norm()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_cubic() {
        let r = brent(|x| Ok(x * x * x - 2.0 * x - 5.0), 2.0, 3.0, 1e-15, 100).unwrap();
        assert!((r.x - 2.094_551_481_542_326_5).abs() < 1e-14);
        assert!(r.bracket.0 <= r.x && r.x <= r.bracket.1);
    }

    #[test]
    fn brent_requires_sign_change() {
        assert!(brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 50).is_err());
    }

    #[test]
    fn secant_complex_root() {
        // z² + 1 = 0 from a seed in the lower half-plane
        let r = complex_secant(
            |z| Ok(z * z + 1.0),
            Complex64::new(0.3, -0.8),
            Complex64::new(1e-3, 0.0),
            |z| z.im < 0.0,
            &SecantOptions::default(),
        )
        .unwrap();
        assert!((r.z - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((r.derivative - Complex64::new(0.0, -2.0)).norm() < 1e-4);
    }
}
