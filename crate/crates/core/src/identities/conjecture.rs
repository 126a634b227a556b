//! Five conjectured weighted row sums, evaluated numerically next to their stated values.
//! Nothing here asserts; each row records whether the numbers agree.

use serde::Serialize;

use super::rotated::{sum_series, Line, Part, SeriesResult, SeriesSpec, Weight, DEFAULT_MAX_TERMS};
use crate::arith::binomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Agrees,
    Disagrees,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureRow {
    pub item: u8,
    pub mu_row: i64,
    pub mass: f64,
    pub lhs: SeriesResult,
    pub rhs: f64,
    pub abs_diff: f64,
    /// A competing reading of the right-hand side, where one is in play.
    pub rhs_alt: Option<f64>,
    pub abs_diff_alt: Option<f64>,
    pub verdict: Verdict,
}

impl ConjectureRow {
    pub fn description(&self) -> &'static str {
        match self.item {
            1 => "sum_lam b2(lam,mu)^2 = (m^2+2)/m^2",
            2 => "sum_lam lam*b1(lam,mu)^2 = 3mu-1",
            3 => "sum_lam lam^2*b1(lam,mu)^2 = 13mu^2-10mu+3",
            4 => "sum_lam b1(lam,mu)^2/lam = 2^(mu-1)ln2 - sum_{j<mu} 1/(j*2^j)",
            _ => "sum_lam b1(lam,mu)^2/2^lam = 2^(mu-1)C(2mu-2,mu-1)/3^(2mu+1)",
        }
    }
}

fn harmonic_tail(mu: i64) -> f64 {
    (1..mu).map(|j| 1.0 / (j as f64 * 2f64.powi(j as i32))).sum()
}

fn item5_rhs(mu: i64, three_exp: i32) -> f64 {
    let c = binomial(2 * mu as u64 - 2, mu as u64 - 1).to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    2f64.powi(mu as i32 - 1) * c / 3f64.powi(three_exp)
}

/// Rows for items 1–5 and `mu = 1..=mu_row_max`. Item 1 uses `mass_item1`; the others
/// use unit mass. Item 5 is always left unresolved and carries the `3^(2mu−1)` reading;
/// item 4 carries the `2^(mu−1)(ln 2 − Σ)` reading.
pub fn conjecture_report(mu_row_max: i64, mass_item1: f64, tol: f64) -> Result<Vec<ConjectureRow>> {
    if mass_item1.is_nan() || mass_item1 <= 0.0 {
        return Err(Error::Massless);
    }
    let mut rows = Vec::new();
    for mu in 1..=mu_row_max {
        let muf = mu as f64;
        let items: [(u8, f64, Part, Weight, f64, Option<f64>); 5] = [
            (1, mass_item1, Part::B2, Weight::One, (mass_item1 * mass_item1 + 2.0) / (mass_item1 * mass_item1), None),
            (2, 1.0, Part::B1, Weight::Index, 3.0 * muf - 1.0, None),
            (3, 1.0, Part::B1, Weight::IndexSq, 13.0 * muf * muf - 10.0 * muf + 3.0, None),
            (
                4,
                1.0,
                Part::B1,
                Weight::Inverse,
                2f64.powi(mu as i32 - 1) * std::f64::consts::LN_2 - harmonic_tail(mu),
                Some(2f64.powi(mu as i32 - 1) * (std::f64::consts::LN_2 - harmonic_tail(mu))),
            ),
            (5, 1.0, Part::B1, Weight::Pow2Inverse, item5_rhs(mu, 2 * mu as i32 + 1), Some(item5_rhs(mu, 2 * mu as i32 - 1))),
        ];
        for (item, mass, part, weight, rhs, rhs_alt) in items {
            let spec = SeriesSpec { line: Line::Row(mu), part, power: 2, weight };
            let lhs = sum_series(spec, mass, tol, DEFAULT_MAX_TERMS)?;
            let abs_diff = (lhs.value - rhs).abs();
            let verdict = if item == 5 || !lhs.converged {
                Verdict::Unresolved
            } else if abs_diff <= tol {
                Verdict::Agrees
            } else {
                Verdict::Disagrees
            };
            rows.push(ConjectureRow {
                item,
                mu_row: mu,
                mass,
                lhs,
                rhs,
                abs_diff,
                rhs_alt,
                abs_diff_alt: rhs_alt.map(|r| (lhs.value - r).abs()),
                verdict,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(rows: &[ConjectureRow], item: u8, mu: i64) -> &ConjectureRow {
        rows.iter().find(|r| r.item == item && r.mu_row == mu).unwrap()
    }

    #[test]
    fn first_row_values() {
        let rows = conjecture_report(1, 1.0, 1e-10).unwrap();
        assert!((row(&rows, 1, 1).lhs.value - 3.0).abs() < 1e-10);
        assert!((row(&rows, 2, 1).lhs.value - 2.0).abs() < 1e-10);
        assert!((row(&rows, 4, 1).lhs.value - std::f64::consts::LN_2).abs() < 1e-10);
        for item in 1..=4 {
            assert_eq!(row(&rows, item, 1).verdict, Verdict::Agrees);
        }
        assert_eq!(row(&rows, 5, 1).verdict, Verdict::Unresolved);
        assert!(row(&rows, 5, 1).rhs_alt.is_some());
    }

    #[test]
    fn item5_readings() {
        assert!((item5_rhs(1, 3) - 1.0 / 27.0).abs() < 1e-15);
        assert!((item5_rhs(2, 3) - 4.0 / 27.0).abs() < 1e-15);
    }
}
