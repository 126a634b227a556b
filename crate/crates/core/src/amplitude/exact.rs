use num_bigint::BigInt;
use num_traits::{One, Pow};

use super::walk::{Row, ScaledKernel, Walk};
use super::{Amplitude, AmplitudeRow, ExactAmplitude};
use crate::arith::{ratio_to_f64, Rational};

/// One exact row held as integer numerators.
///
/// For the mass `p/q`, a cell `(N1, N2)` at time `tau` means
/// `a = (N1 + i·N2) / q^(tau-1) / (1+m²)^((tau-1)/2)`, so `P = (N1² + N2²) / (p²+q²)^(tau-1)`.
#[derive(Debug, Clone)]
pub struct ExactRow {
    mass: Rational,
    p: BigInt,
    q: BigInt,
    row: Row<BigInt>,
}

impl ExactRow {
    pub fn tau(&self) -> i64 {
        self.row.tau
    }

    pub fn mass(&self) -> &Rational {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.row.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row.cells.is_empty()
    }

    pub fn k(&self) -> u32 {
        (self.row.tau - 1) as u32
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.len()).map(|j| self.row.n_at(j))
    }

    pub(crate) fn numerators(&self) -> &[(BigInt, BigInt)] {
        &self.row.cells
    }

    pub(crate) fn numerator(&self, n: i64) -> Option<&(BigInt, BigInt)> {
        self.row.get(n)
    }

    /// `q^(tau-1)`, the scale between numerators and the rational parts of [`ExactAmplitude`].
    pub(crate) fn scale(&self) -> BigInt {
        Pow::pow(&self.q, self.k())
    }

    /// `(p² + q²)^(tau-1)`, the common denominator of every probability in the row.
    pub(crate) fn prob_denominator(&self) -> BigInt {
        Pow::pow(&(&self.p * &self.p + &self.q * &self.q), self.k())
    }

    pub fn amplitude(&self, n: i64) -> ExactAmplitude {
        match self.row.get(n) {
            Some(cell) => self.to_amplitude(cell),
            None => ExactAmplitude::zero(self.k()),
        }
    }

    fn to_amplitude(&self, (n1, n2): &(BigInt, BigInt)) -> ExactAmplitude {
        let scale = self.scale();
        ExactAmplitude {
            a1: Rational::new(n1.clone(), scale.clone()),
            a2: Rational::new(n2.clone(), scale),
            k: self.k(),
        }
    }

    pub fn amplitudes(&self) -> AmplitudeRow<ExactAmplitude> {
        let scale = self.scale();
        let entries = self
            .row
            .cells
            .iter()
            .map(|(n1, n2)| ExactAmplitude {
                a1: Rational::new(n1.clone(), scale.clone()),
                a2: Rational::new(n2.clone(), scale.clone()),
                k: self.k(),
            })
            .collect();
        AmplitudeRow::from_entries(self.row.tau, entries)
    }

    /// `(P-, P+) = (a1², a2²)` at `n`; zero where no path arrives.
    pub fn prob_parts(&self, n: i64) -> (Rational, Rational) {
        let den = self.prob_denominator();
        match self.row.get(n) {
            Some((n1, n2)) => (Rational::new(n1 * n1, den.clone()), Rational::new(n2 * n2, den)),
            None => (Rational::from_integer(0.into()), Rational::from_integer(0.into())),
        }
    }

    pub fn prob(&self, n: i64) -> Rational {
        let (a, b) = self.prob_parts(n);
        a + b
    }

    /// Positions `n` where the reflection identities fail:
    /// `a1(n) = a1(−n)` and `(tau − n)·a2(n) = (tau + n − 2)·a2(2 − n)`.
    pub fn symmetry_violations(&self) -> Vec<i64> {
        let tau = self.tau();
        let zero = (BigInt::from(0), BigInt::from(0));
        let cell = |n: i64| self.row.get(n).unwrap_or(&zero);
        self.positions()
            .filter(|&n| {
                let here = cell(n);
                let left_ok = here.0 == cell(-n).0;
                let right_ok = BigInt::from(tau - n) * &here.1 == BigInt::from(tau + n - 2) * &cell(2 - n).1;
                !(left_ok && right_ok)
            })
            .collect()
    }

    /// Floating image of the row, rounded once from the exact values.
    pub fn to_float(&self) -> AmplitudeRow<Amplitude> {
        let d = &self.p * &self.p + &self.q * &self.q;
        let k = self.k();
        let half: BigInt = Pow::pow(&d, k / 2);
        let extra = if k % 2 == 1 { ratio_to_f64(&d, &BigInt::one()).sqrt() } else { 1.0 };
        let entries = self
            .row
            .cells
            .iter()
            .map(|(n1, n2)| Amplitude {
                a1: ratio_to_f64(n1, &half) / extra,
                a2: ratio_to_f64(n2, &half) / extra,
            })
            .collect();
        AmplitudeRow::from_entries(self.row.tau, entries)
    }
}

/// Exact rows by the forward recurrence, starting at `tau = 1`.
pub struct ExactRows {
    mass: Rational,
    walk: Walk<'static, ScaledKernel>,
}

impl ExactRows {
    pub fn new(mass: &Rational) -> Self {
        let kernel = ScaledKernel { p: mass.numer().clone(), q: mass.denom().clone() };
        ExactRows { mass: mass.clone(), walk: Walk::new(kernel, None) }
    }
}

impl Iterator for ExactRows {
    type Item = ExactRow;

    fn next(&mut self) -> Option<ExactRow> {
        let row = self.walk.next()?;
        Some(ExactRow {
            mass: self.mass.clone(),
            p: self.mass.numer().clone(),
            q: self.mass.denom().clone(),
            row,
        })
    }
}

/// Wraps rows produced by another walk (the absorbing one) over the same scaled kernel.
pub(crate) fn exact_row_from_parts(mass: &Rational, row: Row<BigInt>) -> ExactRow {
    ExactRow {
        mass: mass.clone(),
        p: mass.numer().clone(),
        q: mass.denom().clone(),
        row,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn reflection_identities() {
        for m in [q(1, 1), q(1, 2), q(2, 1), q(3, 7)] {
            for row in ExactRows::new(&m).take(30) {
                assert!(row.symmetry_violations().is_empty(), "tau={}", row.tau());
            }
        }
    }

    #[test]
    fn row_three_matches_table() {
        // row t=3: a(-1) = m/(1+m²), a(1) = (m - m² i)/(1+m²), a(3) = i/(1+m²)
        for m in [q(1, 1), q(1, 2), q(3, 7)] {
            let row = ExactRows::new(&m).nth(2).unwrap();
            let sq = &m * &m;
            let one = q(1, 1);
            assert_eq!(row.amplitude(-1), ExactAmplitude { a1: m.clone(), a2: q(0, 1), k: 2 });
            assert_eq!(row.amplitude(1), ExactAmplitude { a1: m.clone(), a2: -sq.clone(), k: 2 });
            assert_eq!(row.amplitude(3), ExactAmplitude { a1: q(0, 1), a2: one.clone(), k: 2 });
            // P(1, 3) = m²/(1+m²)
            assert_eq!(row.prob(1), &sq / (one + &sq));
        }
    }

    #[test]
    fn probabilities_share_denominator() {
        let row = ExactRows::new(&q(3, 7)).nth(9).unwrap();
        let den = row.prob_denominator();
        let total: BigInt = row.numerators().iter().map(|(a, b)| a * a + b * b).sum();
        assert_eq!(total, den);
        assert!(row.prob(11).is_zero());
    }

    #[test]
    fn to_float_handles_odd_exponents() {
        let row = ExactRows::new(&q(1, 1)).nth(1).unwrap();
        let f = row.to_float();
        let s = 1.0 / 2f64.sqrt();
        assert!((f.get(0).unwrap().a1 - s).abs() < 1e-15);
        assert!((f.get(2).unwrap().a2 - s).abs() < 1e-15);
    }
}
