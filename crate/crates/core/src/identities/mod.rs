//! Sums of amplitudes: row sums in the original coordinates, infinite row and column
//! sums in light-cone coordinates, their quadratic versions, and a numeric report on
//! five conjectured weighted sums.

mod conjecture;
mod rotated;

use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

pub use conjecture::{conjecture_report, ConjectureRow, Verdict};
pub use rotated::{
    amplitude_bound, col_sum_targets, quadratic_sums, rotated_col_sum, rotated_row_sum, row_sum_targets, sum_series,
    Line, Part, RotatedAmplitude, RotatedStream, SeriesResult, SeriesSpec, Weight, DEFAULT_MAX_TERMS,
};

use crate::amplitude::{exact_row, float_row, Amplitude, Evaluated, ExactAmplitude, ExactRow};
use crate::arith::{Gaussian, Rational};
use crate::error::Result;
use crate::mass::{Limits, MassParam, Mode};

/// `(Σ_n a1(n, tau), Σ_n a2(n, tau))`, returned as one amplitude-shaped value.
pub fn linear_sums(tau: i64, mass: &MassParam, mode: Mode, limits: &Limits) -> Result<Evaluated> {
    match mode {
        Mode::Exact => {
            let row = exact_row(tau, mass.as_rational()?, limits)?;
            let (s1, s2) = numerator_sums(&row);
            let scale = row_scale(&row);
            Ok(Evaluated::Exact(ExactAmplitude {
                a1: Rational::new(s1, scale.clone()),
                a2: Rational::new(s2, scale),
                k: row.k(),
            }))
        }
        Mode::Float => {
            let row = float_row(tau, mass.to_f64(), limits)?;
            let (a1, a2) = row.iter().fold((0.0, 0.0), |(x, y), (_, a)| (x + a.a1, y + a.a2));
            Ok(Evaluated::Float(Amplitude { a1, a2 }))
        }
    }
}

fn numerator_sums(row: &ExactRow) -> (BigInt, BigInt) {
    row.numerators()
        .iter()
        .fold((BigInt::from(0), BigInt::from(0)), |(x, y), (a, b)| (x + a, y + b))
}

fn row_scale(row: &ExactRow) -> BigInt {
    Pow::pow(row.mass().denom(), row.k())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearIdentity {
    pub tau: i64,
    /// `(Σ a2 + i·Σ a1)·(1+m²)^((tau−1)/2)`.
    pub lhs: Gaussian,
    /// `(1 + i·m)^(tau−1)`.
    pub rhs: Gaussian,
    pub holds: bool,
}

/// Exact form of `Σ a1 = sin((tau−1)·atan m)`, `Σ a2 = cos((tau−1)·atan m)`: rotating
/// by `atan m` is multiplying by `(1 + i·m)/√(1+m²)`.
pub fn linear_identity_row(row: &ExactRow) -> LinearIdentity {
    let (s1, s2) = numerator_sums(row);
    let scale = row_scale(row);
    let lhs = Gaussian::new(Rational::new(s2, scale.clone()), Rational::new(s1, scale));
    let rhs = Gaussian::new(Rational::from_integer(1.into()), row.mass().clone()).pow(row.k());
    let holds = lhs == rhs;
    LinearIdentity { tau: row.tau(), lhs, rhs, holds }
}

pub fn linear_identity_exact(tau: i64, mass: &Rational, limits: &Limits) -> Result<LinearIdentity> {
    Ok(linear_identity_row(&exact_row(tau, mass, limits)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFloatCheck {
    pub tau: i64,
    pub sum_a1: f64,
    pub sum_a2: f64,
    pub sin: f64,
    pub cos: f64,
    pub max_abs_diff: f64,
}

pub fn linear_identity_float(tau: i64, mass: f64, limits: &Limits) -> Result<LinearFloatCheck> {
    let Evaluated::Float(s) = linear_sums(tau, &MassParam::float(mass)?, Mode::Float, limits)? else {
        unreachable!("float mode yields float sums")
    };
    let angle = (tau - 1) as f64 * mass.atan();
    let (sin, cos) = angle.sin_cos();
    Ok(LinearFloatCheck {
        tau,
        sum_a1: s.a1,
        sum_a2: s.a2,
        sin,
        cos,
        max_abs_diff: (s.a1 - sin).abs().max((s.a2 - cos).abs()),
    })
}
