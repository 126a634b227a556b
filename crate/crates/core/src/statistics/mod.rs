//! Distributions over the chirality-extended sample space `{(n, ±)}` and the expectations
//! built on them: average velocity `n/tau`, instantaneous velocity `±1`, and their limits.

mod flea;
mod series;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

pub use flea::{flea_distribution, flea_velocity_check};
pub use series::{central_binomial_series, ct_report, left_prob_series, sum_a1_squared, CtFact, CtReport};

use crate::amplitude::{exact_row, ExactRow, ExactRows, FloatRows};
use crate::arith::{rational_to_f64, Rational};
use crate::error::{Error, Result};
use crate::lattice::Site;
use crate::mass::{Limits, MassParam, Mode};

#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(f) => *f,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x:.16e}"),
        }
    }
}

/// One row of probabilities split by chirality: `p_minus = a1²`, `p_plus = a2²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<P> {
    pub tau: i64,
    /// `(n, p_minus, p_plus)` for each reachable `n`, left to right.
    pub entries: Vec<(i64, P, P)>,
}

impl Distribution<Rational> {
    pub fn total(&self) -> Rational {
        self.entries.iter().map(|(_, a, b)| a + b).sum()
    }
}

impl Distribution<f64> {
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, a, b)| a + b).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyDistribution {
    Exact(Distribution<Rational>),
    Float(Distribution<f64>),
}

pub fn distribution(tau: i64, mass: &MassParam, mode: Mode, limits: &Limits) -> Result<AnyDistribution> {
    match mode {
        Mode::Exact => {
            let row = exact_row(tau, mass.as_rational()?, limits)?;
            Ok(AnyDistribution::Exact(exact_distribution(&row)))
        }
        Mode::Float => Ok(AnyDistribution::Float(float_distribution(tau, mass.to_f64(), limits)?)),
    }
}

pub fn exact_distribution(row: &ExactRow) -> Distribution<Rational> {
    let den = row.prob_denominator();
    let entries = row
        .positions()
        .zip(row.numerators())
        .map(|(n, (n1, n2))| (n, Rational::new(n1 * n1, den.clone()), Rational::new(n2 * n2, den.clone())))
        .collect();
    Distribution { tau: row.tau(), entries }
}

pub fn float_distribution(tau: i64, mass: f64, limits: &Limits) -> Result<Distribution<f64>> {
    let row = crate::amplitude::float_row(tau, mass, limits)?;
    let entries = row.iter().map(|(n, a)| (n, a.a1 * a.a1, a.a2 * a.a2)).collect();
    Ok(Distribution { tau, entries })
}

/// `Σ P` over a row, as the integer ratio `Σ(N1² + N2²) / (p² + q²)^(tau-1)`.
pub fn row_total_exact(row: &ExactRow) -> Rational {
    let sum: BigInt = row.numerators().iter().map(|(a, b)| a * a + b * b).sum();
    Rational::new(sum, row.prob_denominator())
}

/// Interior sites with `|n| < tau <= tau_max` where the probability is exactly zero.
pub fn nonzero_scan(tau_max: i64, mass: &Rational, limits: &Limits) -> Result<Vec<Site>> {
    if mass.is_zero() {
        return Err(Error::Massless);
    }
    limits.check(Mode::Exact, tau_max)?;
    let mut zeros = Vec::new();
    for row in ExactRows::new(mass).take(tau_max.max(0) as usize) {
        let tau = row.tau();
        for (n, (n1, n2)) in row.positions().zip(row.numerators()) {
            if n.abs() < tau && n1.is_zero() && n2.is_zero() {
                zeros.push(Site::new(n, tau)?);
            }
        }
    }
    Ok(zeros)
}

/// Per-row sums `(Σ n·(N1²+N2²), Σ (N2² − N1²))` over the numerators, with the row's
/// probability denominator.
fn exact_moments(row: &ExactRow) -> (BigInt, BigInt, BigInt) {
    let mut first = BigInt::zero();
    let mut chiral = BigInt::zero();
    for (n, (n1, n2)) in row.positions().zip(row.numerators()) {
        let (l, r) = (n1 * n1, n2 * n2);
        first += BigInt::from(n) * (&l + &r);
        chiral += r - l;
    }
    (first, chiral, row.prob_denominator())
}

/// `E(v_T) = Σ (n/T)·P(n, T)`.
pub fn mean_avg_velocity(t: i64, mass: &MassParam, mode: Mode, limits: &Limits) -> Result<Scalar> {
    match mode {
        Mode::Exact => {
            let row = exact_row(t, mass.as_rational()?, limits)?;
            let (first, _, den) = exact_moments(&row);
            Ok(Scalar::Exact(Rational::new(first, den * BigInt::from(t))))
        }
        Mode::Float => {
            let d = float_distribution(t, mass.to_f64(), limits)?;
            Ok(Scalar::Float(float_avg_velocity(&d)))
        }
    }
}

/// `E(u_t) = Σ P(n, +) − Σ P(n, −)`.
pub fn mean_inst_velocity(t: i64, mass: &MassParam, mode: Mode, limits: &Limits) -> Result<Scalar> {
    match mode {
        Mode::Exact => {
            let row = exact_row(t, mass.as_rational()?, limits)?;
            let (_, chiral, den) = exact_moments(&row);
            Ok(Scalar::Exact(Rational::new(chiral, den)))
        }
        Mode::Float => {
            let d = float_distribution(t, mass.to_f64(), limits)?;
            Ok(Scalar::Float(d.entries.iter().map(|(_, l, r)| r - l).sum()))
        }
    }
}

fn float_avg_velocity(d: &Distribution<f64>) -> f64 {
    d.entries.iter().map(|(n, l, r)| *n as f64 * (l + r)).sum::<f64>() / d.tau as f64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VelocityIdentity {
    pub lhs: Rational,
    pub rhs: Rational,
    pub equal: bool,
}

/// Compares `E(v_T)` with `(1/T) Σ_{t=1..T} E(u_t)` in exact arithmetic.
pub fn velocity_identity_check(t_max: i64, mass: &Rational, limits: &Limits) -> Result<VelocityIdentity> {
    Ok(velocity_identity_series(t_max, mass, limits)?.pop().expect("t_max >= 1"))
}

/// [`velocity_identity_check`] for every `T = 1..=t_max` in one pass.
pub fn velocity_identity_series(t_max: i64, mass: &Rational, limits: &Limits) -> Result<Vec<VelocityIdentity>> {
    Site::new(0, t_max).map_err(|_| Error::InvalidArgument(format!("T must be at least 1, got {t_max}")))?;
    limits.check(Mode::Exact, t_max)?;
    let mut inst_sum = Rational::zero();
    let mut out = Vec::with_capacity(t_max as usize);
    for row in ExactRows::new(mass).take(t_max as usize) {
        let t = BigInt::from(row.tau());
        let (first, chiral, den) = exact_moments(&row);
        inst_sum += Rational::new(chiral, den.clone());
        let lhs = Rational::new(first, den * &t);
        let rhs = &inst_sum / Rational::from_integer(t);
        let equal = lhs == rhs;
        out.push(VelocityIdentity { lhs, rhs, equal });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitVelocity {
    pub value: f64,
    /// False for `m > 1`, where the limit theorem is not established.
    pub in_proved_range: bool,
}

/// `1 − m/√(1+m²)`.
pub fn limit_velocity(mass: &MassParam) -> LimitVelocity {
    let m = mass.to_f64();
    LimitVelocity { value: 1.0 - m / (1.0 + m * m).sqrt(), in_proved_range: m <= 1.0 }
}

/// `E(v_t)` for `t = 1..=t_max` in one float pass.
pub fn avg_velocity_series(t_max: i64, mass: f64, limits: &Limits) -> Result<Vec<f64>> {
    limits.check(Mode::Float, t_max)?;
    Ok(FloatRows::new(mass)
        .take(t_max.max(0) as usize)
        .map(|row| {
            let t = row.tau() as f64;
            row.iter().map(|(n, a)| n as f64 * a.prob()).sum::<f64>() / t
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VelocityReport {
    pub t_max: i64,
    pub mean_avg_velocity: f64,
    /// `E(u_t)` for `t = 1..=t_max`.
    pub mean_inst_velocity: Vec<f64>,
    pub limit: f64,
    /// `mean_avg_velocity − limit`.
    pub delta: f64,
    pub outside_proved_range: bool,
}

pub fn velocity_report(t_max: i64, mass: &MassParam, limits: &Limits) -> Result<VelocityReport> {
    Site::new(0, t_max).map_err(|_| Error::InvalidArgument(format!("T must be at least 1, got {t_max}")))?;
    limits.check(Mode::Float, t_max)?;
    let mut inst = Vec::with_capacity(t_max as usize);
    let mut avg = 0.0;
    for row in FloatRows::new(mass.to_f64()).take(t_max as usize) {
        inst.push(row.iter().map(|(_, a)| a.a2 * a.a2 - a.a1 * a.a1).sum());
        if row.tau() == t_max {
            avg = row.iter().map(|(n, a)| n as f64 * a.prob()).sum::<f64>() / t_max as f64;
        }
    }
    let limit = limit_velocity(mass);
    Ok(VelocityReport {
        t_max,
        mean_avg_velocity: avg,
        mean_inst_velocity: inst,
        limit: limit.value,
        delta: avg - limit.value,
        outside_proved_range: !limit.in_proved_range,
    })
}

/// `|E(v_T)| <= 1` holds because the support lies in `|n| <= T`.
pub fn speed_bound_holds(v: &Scalar) -> bool {
    match v {
        Scalar::Exact(r) => r.abs() <= Rational::from_integer(1.into()),
        Scalar::Float(f) => f.abs() <= 1.0 + 1e-12,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn time_two_distribution() {
        for m in [q(1, 1), q(1, 2), q(3, 7)] {
            let mp = MassParam::rational(m.clone()).unwrap();
            let AnyDistribution::Exact(d) = distribution(2, &mp, Mode::Exact, &Limits::default()).unwrap() else {
                panic!()
            };
            let m2 = &m * &m;
            let den = q(1, 1) + &m2;
            assert_eq!(d.entries, vec![(0, &m2 / &den, q(0, 1)), (2, q(0, 1), q(1, 1) / &den)]);
            assert_eq!(d.total(), q(1, 1));
        }
    }

    #[test]
    fn time_three_centre() {
        let m = q(1, 2);
        let row = exact_row(3, &m, &Limits::default()).unwrap();
        let d = exact_distribution(&row);
        let (_, a, b) = d.entries.iter().find(|e| e.0 == 1).unwrap();
        let m2 = &m * &m;
        assert_eq!(a + b, &m2 / (q(1, 1) + &m2));
    }

    #[test]
    fn totals_are_one() {
        for m in [q(1, 1), q(2, 1), q(3, 7)] {
            for row in ExactRows::new(&m).take(40) {
                assert_eq!(row_total_exact(&row), q(1, 1));
                assert_eq!(exact_distribution(&row).total(), q(1, 1));
            }
        }
        let f = float_distribution(1000, 1.0, &Limits::default()).unwrap();
        assert!((f.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nonzero_examples() {
        let l = Limits::default();
        assert!(nonzero_scan(30, &q(1, 1), &l).unwrap().is_empty());
        assert_eq!(nonzero_scan(10, &q(0, 1), &l), Err(Error::Massless));
    }

    #[test]
    fn velocity_examples() {
        let l = Limits::default();
        for m in [q(1, 1), q(1, 2)] {
            let mp = MassParam::rational(m.clone()).unwrap();
            let m2 = &m * &m;
            assert_eq!(mean_avg_velocity(1, &mp, Mode::Exact, &l).unwrap(), Scalar::Exact(q(1, 1)));
            assert_eq!(
                mean_avg_velocity(2, &mp, Mode::Exact, &l).unwrap(),
                Scalar::Exact(q(1, 1) / (q(1, 1) + &m2))
            );
            assert_eq!(mean_inst_velocity(1, &mp, Mode::Exact, &l).unwrap(), Scalar::Exact(q(1, 1)));
            assert_eq!(
                mean_inst_velocity(2, &mp, Mode::Exact, &l).unwrap(),
                Scalar::Exact((q(1, 1) - &m2) / (q(1, 1) + &m2))
            );
        }
        let one = MassParam::ratio(1, 1).unwrap();
        for k in 1..10 {
            assert_eq!(
                mean_inst_velocity(2 * k, &one, Mode::Exact, &l).unwrap(),
                mean_inst_velocity(2 * k + 1, &one, Mode::Exact, &l).unwrap()
            );
        }
        let v = mean_avg_velocity(1000, &one, Mode::Float, &l).unwrap().to_f64();
        assert!((v - (1.0 - 0.5f64.sqrt())).abs() < 0.01);
    }

    #[test]
    fn identity_small() {
        let l = Limits::default();
        let r = velocity_identity_check(1, &q(1, 1), &l).unwrap();
        assert_eq!((r.lhs, r.rhs, r.equal), (q(1, 1), q(1, 1), true));
        let r = velocity_identity_check(2, &q(1, 1), &l).unwrap();
        assert_eq!((r.lhs, r.rhs, r.equal), (q(1, 2), q(1, 2), true));
        assert!(velocity_identity_check(100, &q(3, 7), &l).unwrap().equal);
        assert!(velocity_identity_check(0, &q(1, 1), &l).is_err());
    }

    #[test]
    fn limits() {
        let v = limit_velocity(&MassParam::ratio(1, 1).unwrap());
        assert!((v.value - 0.292_893_218_813_452_5).abs() < 1e-15 && v.in_proved_range);
        assert_eq!(limit_velocity(&MassParam::ratio(0, 1).unwrap()).value, 1.0);
        let half = limit_velocity(&MassParam::ratio(1, 2).unwrap()).value;
        assert!((half - (1.0 - 1.0 / 5f64.sqrt())).abs() < 1e-15);
        assert!(!limit_velocity(&MassParam::ratio(2, 1).unwrap()).in_proved_range);
    }

    #[test]
    fn report_matches_series() {
        let l = Limits::default();
        let mp = MassParam::ratio(1, 1).unwrap();
        let r = velocity_report(50, &mp, &l).unwrap();
        let s = avg_velocity_series(50, 1.0, &l).unwrap();
        assert_eq!(r.mean_avg_velocity, s[49]);
        assert_eq!(r.mean_inst_velocity.len(), 50);
        assert!((r.delta - (r.mean_avg_velocity - r.limit)).abs() < 1e-15);
        // the time average of E(u_t) matches E(v_T) in float too
        let avg: f64 = r.mean_inst_velocity.iter().sum::<f64>() / 50.0;
        assert!((avg - r.mean_avg_velocity).abs() < 1e-12);
    }
}
