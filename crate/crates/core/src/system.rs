//! Geometry and couplings of a system, and complex energies tagged with a sheet.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dimension {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
}

impl Dimension {
    pub fn from_int(d: u32) -> Result<Self> {
        match d {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            _ => Err(Error::InvalidSystem(format!("dimension must be 2 or 3, got {d}"))),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_int())
    }
}

/// A point interaction. The last coordinate is the signed distance to the
/// line (d = 2, position `[l, a]`) or plane (d = 3, position `[x1, x2, a]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Site {
    pub position: Vec<f64>,
    pub beta: f64,
}

impl Site {
    pub fn planar(l: f64, a: f64, beta: f64) -> Self {
        Self { position: vec![l, a], beta }
    }

    pub fn spatial(x1: f64, x2: f64, a: f64, beta: f64) -> Self {
        Self { position: vec![x1, x2, a], beta }
    }

    /// Signed transverse coordinate.
    pub fn transverse(&self) -> f64 {
        *self.position.last().unwrap_or(&0.0)
    }

    /// Coordinates along the line/plane.
    pub fn longitudinal(&self) -> &[f64] {
        &self.position[..self.position.len().saturating_sub(1)]
    }

    pub fn distance(&self, other: &Site) -> f64 {
        self.position
            .iter()
            .zip(&other.position)
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Distance between the projections onto the line/plane.
    pub fn longitudinal_distance(&self, other: &Site) -> f64 {
        self.longitudinal()
            .iter()
            .zip(other.longitudinal())
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub dimension: Dimension,
    pub alpha: f64,
    pub sites: Vec<Site>,
}

impl SystemSpec {
    pub fn new(dimension: Dimension, alpha: f64, sites: Vec<Site>) -> Result<Self> {
        let spec = Self { dimension, alpha, sites };
        spec.validate()?;
        Ok(spec)
    }

    /// One site at `(0, a)` in two dimensions.
    pub fn single_2d(alpha: f64, beta: f64, a: f64) -> Result<Self> {
        Self::new(Dimension::Two, alpha, vec![Site::planar(0.0, a, beta)])
    }

    /// One site at `(0, 0, a)` in three dimensions.
    pub fn single_3d(alpha: f64, beta: f64, a: f64) -> Result<Self> {
        Self::new(Dimension::Three, alpha, vec![Site::spatial(0.0, 0.0, a, beta)])
    }

    /// Mirror pair `(0, a)`, `(0, -a)` with equal couplings.
    pub fn symmetric_pair(alpha: f64, beta: f64, a: f64) -> Result<Self> {
        Self::new(
            Dimension::Two,
            alpha,
            vec![Site::planar(0.0, a, beta), Site::planar(0.0, -a, beta)],
        )
    }

    pub fn n(&self) -> usize {
        self.sites.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidSystem(format!("alpha must be positive, got {}", self.alpha)));
        }
        if self.sites.is_empty() {
            return Err(Error::InvalidSystem("at least one site is required".into()));
        }
        let d = self.dimension.as_int() as usize;
        for (i, s) in self.sites.iter().enumerate() {
            if s.position.len() != d {
                return Err(Error::InvalidSystem(format!(
                    "site {i}: position has {} coordinates, expected {d}",
                    s.position.len()
                )));
            }
            if s.position.iter().any(|x| !x.is_finite()) || !s.beta.is_finite() {
                return Err(Error::InvalidSystem(format!("site {i}: non-finite entry")));
            }
            if s.transverse() == 0.0 {
                return Err(Error::InvalidSystem(format!(
                    "site {i}: transverse coordinate is zero (site lies on the interaction support)"
                )));
            }
        }
        for i in 0..self.sites.len() {
            for j in 0..i {
                if self.sites[i].distance(&self.sites[j]) == 0.0 {
                    return Err(Error::InvalidSystem(format!("sites {j} and {i} coincide")));
                }
            }
        }
        Ok(())
    }

    /// Bottom of the essential spectrum, `-α²/4`.
    pub fn threshold(&self) -> f64 {
        -0.25 * self.alpha * self.alpha
    }

    pub fn betas(&self) -> Vec<f64> {
        self.sites.iter().map(|s| s.beta).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sheet {
    /// Physical sheet, `Im z > 0`.
    Upper,
    /// Boundary values on `(-α²/4, 0)`.
    Interval,
    /// Second sheet below the interval.
    LowerSecond,
}

/// The region below the interval where the continuation is evaluated:
/// `Re z ∈ (-α²/4 + δ, -δ)`, `Im z ∈ (-depth·α²/4, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerRegion {
    pub delta_edge: f64,
    /// Depth as a fraction of `α²/4`; `0.5` gives `Im z > -α²/8`.
    pub depth: f64,
}

impl Default for LowerRegion {
    fn default() -> Self {
        Self { delta_edge: 1e-6, depth: 0.5 }
    }
}

impl LowerRegion {
    pub fn contains(&self, z: Complex64, alpha: f64) -> bool {
        let t = 0.25 * alpha * alpha;
        z.re > -t + self.delta_edge && z.re < -self.delta_edge && z.im < 0.0 && z.im > -self.depth * t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SheetPoint {
    pub z: Complex64,
    pub sheet: Sheet,
}

impl SheetPoint {
    pub fn upper(z: Complex64) -> Result<Self> {
        if z.im > 0.0 {
            Ok(Self { z, sheet: Sheet::Upper })
        } else {
            Err(Error::SheetMismatch(format!("{z} is not in the upper half-plane")))
        }
    }

    pub fn interval(lambda: f64, alpha: f64) -> Result<Self> {
        if lambda > -0.25 * alpha * alpha && lambda < 0.0 {
            Ok(Self { z: Complex64::new(lambda, 0.0), sheet: Sheet::Interval })
        } else {
            Err(Error::SheetMismatch(format!(
                "λ = {lambda} outside the open interval (-α²/4, 0) for α = {alpha}"
            )))
        }
    }

    /// Second-sheet point; only `Im z < 0` is checked here, the strip is
    /// enforced by the root finders.
    pub fn lower(z: Complex64) -> Result<Self> {
        if z.im < 0.0 {
            Ok(Self { z, sheet: Sheet::LowerSecond })
        } else {
            Err(Error::SheetMismatch(format!("{z} is not in the lower half-plane")))
        }
    }

    /// Physical-sheet point on the negative axis below the threshold.
    pub fn below_threshold(kappa: f64) -> Self {
        Self { z: Complex64::new(-kappa * kappa, 0.0), sheet: Sheet::Upper }
    }

    /// Picks the sheet from the location of `z`: upper for `Im z > 0`,
    /// interval for real `z`, second sheet for `Im z < 0`.
    pub fn classify(z: Complex64) -> Self {
        let sheet = if z.im > 0.0 {
            Sheet::Upper
        } else if z.im == 0.0 {
            Sheet::Interval
        } else {
            Sheet::LowerSecond
        };
        Self { z, sheet }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SystemSpec::single_2d(2.0, 0.0, 1.0).is_ok());
        assert!(SystemSpec::single_2d(-2.0, 0.0, 1.0).is_err());
        let e = SystemSpec::new(
            Dimension::Two,
            1.0,
            vec![Site::planar(0.0, 1.0, 0.0), Site::planar(1.0, 0.0, 0.0)],
        )
        .unwrap_err();
        assert!(e.to_string().contains("site 1"));
        assert!(SystemSpec::new(
            Dimension::Two,
            1.0,
            vec![Site::planar(0.0, 1.0, 0.0), Site::planar(0.0, 1.0, 1.0)]
        )
        .is_err());
        assert!(SystemSpec::new(Dimension::Three, 1.0, vec![Site::planar(0.0, 1.0, 0.0)]).is_err());
    }

    #[test]
    fn sheet_tags() {
        assert!(SheetPoint::interval(-1.0, 3.0).is_ok());
        assert!(SheetPoint::interval(-3.0, 3.0).is_err());
        assert!(SheetPoint::upper(Complex64::new(-1.0, -0.1)).is_err());
        let r = LowerRegion::default();
        assert!(r.contains(Complex64::new(-1.0, -0.5), 3.0));
        assert!(!r.contains(Complex64::new(-1.0, -1.2), 3.0));
        assert!(!r.contains(Complex64::new(-1.0, 0.1), 3.0));
    }
}
