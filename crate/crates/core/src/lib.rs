//! Feynman checkers: a particle hops on a 1+1 dimensional lattice, each turn of its path
//! contributes a factor `-i·m·ε`, and the amplitude at a site is the normalized sum over
//! all paths that reach it.
//!
//! Coordinates are dimensionless throughout: `n = x/ε`, `tau = t/ε`, and the mass
//! parameter is `m·ε`. Exact results use big rationals; float results use `f64`.

mod arith;
mod error;
mod lattice;
mod mass;

pub mod amplitude;
pub mod bypass;
pub mod identities;
pub mod statistics;

pub use arith::{binomial, cmp_inv_sqrt, rational_to_f64, Gaussian, Rational};
pub use error::{Error, Result};
pub use lattice::{RotatedSite, Site, SiteClass};
pub use mass::{Limits, MassParam, Mode};

pub use amplitude::{
    amplitude_closed_form, amplitude_dp, amplitude_row_dp, Amplitude, AmplitudeRow, Evaluated, EvaluatedRow,
    ExactAmplitude,
};
pub use bypass::{amplitude_bypass, blocking_check, conservation_bypass, kirchhoff_check, BypassSet};
