//! Spectra, second-sheet resonances and on-shell scattering for Schrödinger
//! operators with an attractive δ-interaction on a line (2D) or plane (3D)
//! plus finitely many point interactions.
//!
//! Units: `ℏ²/2m = 1`; energies are in inverse length squared. The line is
//! `x₂ = 0` (plane `x₃ = 0`), `α > 0` its coupling strength, and each point
//! site carries a real coupling `β`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bs2d;
pub mod bs3d;
pub mod cli;
pub mod error;
pub mod exec;
pub mod quadrature;
pub mod resonance2d;
pub mod roots;
pub mod scattering2d;
pub mod specfun;
pub mod spectrum2d;
pub mod system;
pub mod verify;

pub use error::{Error, Result};
pub use system::{Dimension, LowerRegion, Sheet, SheetPoint, Site, SystemSpec};
