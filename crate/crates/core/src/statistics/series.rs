//! The left-moving mass `Σ a1²` at unit mass, its central-binomial series, and the
//! sign pattern of its deviation `c_t = Σ a1² − 1/(2√2)` from the limit.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::amplitude::{exact_row, ExactRow, ExactRows};
use crate::arith::{binomial, cmp_inv_sqrt, Rational};
use crate::error::{Error, Result};
use crate::mass::{Limits, MassParam, Mode};

fn left_mass(row: &ExactRow) -> Rational {
    let sum: BigInt = row.numerators().iter().map(|(a, _)| a * a).sum();
    Rational::new(sum, row.prob_denominator())
}

/// `Σ_n a1(n, t)²`, the probability of arriving moving left.
pub fn sum_a1_squared(t: i64, mass: &Rational, limits: &Limits) -> Result<Rational> {
    Ok(left_mass(&exact_row(t, mass, limits)?))
}

/// `½ Σ_{k=0}^{⌊t/2⌋−1} (−1/4)^k C(2k, k)`.
pub fn central_binomial_series(t: i64) -> Rational {
    let terms = (t / 2).max(0) as u64;
    let mut sum = Rational::zero();
    for k in 0..terms {
        let term = Rational::new(binomial(2 * k, k), Pow::pow(&BigInt::from(4), k as u32));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum / Rational::from_integer(2.into())
}

/// `(Σ a1², series)` at time `t`; only defined for unit mass.
pub fn left_prob_series(t: i64, mass: &MassParam, limits: &Limits) -> Result<(Rational, Rational)> {
    let m = mass.as_rational().map_err(|_| Error::MassNotOne)?;
    if !m.is_one() {
        return Err(Error::MassNotOne);
    }
    Ok((sum_a1_squared(t, m, limits)?, central_binomial_series(t)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CtFact {
    pub name: &'static str,
    pub holds: bool,
    pub first_failure: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtReport {
    pub t_max: i64,
    /// `Σ a1²` at `t = 1..=t_max + 2`.
    pub sums: Vec<Rational>,
    pub facts: [CtFact; 4],
}

impl CtReport {
    pub fn all_hold(&self) -> bool {
        self.facts.iter().all(|f| f.holds)
    }

    /// `Σ a1²` at time `t`.
    pub fn sum_at(&self, t: i64) -> &Rational {
        &self.sums[(t - 1) as usize]
    }

    /// Sign of `c_t`; never zero since the limit is irrational.
    pub fn sign(&self, t: i64) -> Ordering {
        cmp_inv_sqrt(self.sum_at(t), 8)
    }

    pub fn ct_f64(&self, t: i64) -> f64 {
        crate::arith::rational_to_f64(self.sum_at(t)) - 1.0 / 8f64.sqrt()
    }
}

fn fact(name: &'static str, mut ts: impl Iterator<Item = i64>, ok: impl Fn(i64) -> bool) -> CtFact {
    let first_failure = ts.find(|&t| !ok(t));
    CtFact { name, holds: first_failure.is_none(), first_failure }
}

/// Checks, exactly and at unit mass, for `t <= t_max`:
/// (i) `c_t = c_{t+1}` for even `t`;
/// (ii) `|c_t| <= ½ C(2K,K)/4^K` with `K = ⌊t/2⌋`, so `c_t → 0`;
/// (iii) `c_t` and `c_{t+2}` have opposite signs for `t >= 2`;
/// (iv) `|c_t| > |c_{t+2}|` for `t >= 2`.
pub fn ct_report(t_max: i64, limits: &Limits) -> Result<CtReport> {
    if t_max < 1 {
        return Err(Error::InvalidArgument(format!("t_max must be at least 1, got {t_max}")));
    }
    limits.check(Mode::Exact, t_max + 2)?;
    let one = Rational::one();
    let sums: Vec<Rational> = ExactRows::new(&one).take((t_max + 2) as usize).map(|r| left_mass(&r)).collect();
    let s = |t: i64| &sums[(t - 1) as usize];
    let sign = |t: i64| cmp_inv_sqrt(s(t), 8);

    let pairing = fact("(i) c_t = c_{t+1} for even t", (2..=t_max).step_by(2), |t| s(t) == s(t + 1));
    let decay = fact("(ii) |c_t| <= C(2K,K)/(2*4^K), K = floor(t/2)", 1..=t_max, |t| {
        let k = (t / 2) as u64;
        let bound = Rational::new(binomial(2 * k, k), BigInt::from(2) * Pow::pow(&BigInt::from(4), k as u32));
        cmp_inv_sqrt(&(s(t) - &bound), 8) != Ordering::Greater && cmp_inv_sqrt(&(s(t) + &bound), 8) != Ordering::Less
    });
    let alternating = fact("(iii) sign(c_t) = -sign(c_{t+2})", 2..=t_max, |t| sign(t) == sign(t + 2).reverse());
    let shrinking = fact("(iv) |c_t| > |c_{t+2}|", 2..=t_max, |t| {
        // c_t² − c_{t+2}² = (S_t − S_{t+2})(S_t + S_{t+2} − 1/√2)
        let diff = (s(t) - s(t + 2)).cmp(&Rational::zero());
        let mid = cmp_inv_sqrt(&(s(t) + s(t + 2)), 2);
        diff != Ordering::Equal && diff == mid
    });

    Ok(CtReport { t_max, sums, facts: [pairing, decay, alternating, shrinking] })
}
