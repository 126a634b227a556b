use num_traits::One;

use super::{Amplitude, AmplitudeRow, ExactAmplitude};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::lattice::Site;

fn shape_error(what: &str) -> Error {
    Error::InvalidArgument(format!("row above is malformed: {what}"))
}

/// Amplitude at `site` from the row at `site.tau() + 1`:
/// `a1(n,t) = (a1(n-1,t+1) - m·a2(n+1,t+1)) / sqrt(1+m²)`,
/// `a2(n,t) = (a2(n+1,t+1) + m·a1(n-1,t+1)) / sqrt(1+m²)`.
pub fn amplitude_down(site: Site, row_above: &AmplitudeRow<Amplitude>, mass: f64) -> Result<Amplitude> {
    if row_above.tau() != site.tau() + 1 {
        return Err(shape_error("tau must be one more than the site's"));
    }
    let zero = Amplitude::default();
    let lower_left = row_above.get(site.n() - 1).unwrap_or(&zero);
    let lower_right = row_above.get(site.n() + 1).unwrap_or(&zero);
    let norm = 1.0 / (1.0 + mass * mass).sqrt();
    Ok(Amplitude {
        a1: norm * (lower_left.a1 - mass * lower_right.a2),
        a2: norm * (lower_right.a2 + mass * lower_left.a1),
    })
}

pub fn row_down_float(row_above: &AmplitudeRow<Amplitude>, mass: f64) -> Result<AmplitudeRow<Amplitude>> {
    let tau = row_above.tau() - 1;
    if tau < 1 {
        return Err(shape_error("no row below tau = 1"));
    }
    let entries = (0..tau)
        .map(|j| amplitude_down(Site::new(2 * j + 2 - tau, tau)?, row_above, mass))
        .collect::<Result<Vec<_>>>()?;
    Ok(AmplitudeRow::from_entries(tau, entries))
}

/// Exact downward step. The raw combination carries one extra factor `(1+m²)`
/// relative to the canonical exponent `k = tau - 1`, which is divided out.
pub fn row_down_exact(row_above: &AmplitudeRow<ExactAmplitude>, mass: &Rational) -> Result<AmplitudeRow<ExactAmplitude>> {
    let tau = row_above.tau() - 1;
    if tau < 1 {
        return Err(shape_error("no row below tau = 1"));
    }
    let k = (tau - 1) as u32;
    let zero = ExactAmplitude::zero(k + 1);
    let norm = Rational::one() + mass * mass;
    let mut entries = Vec::with_capacity(tau as usize);
    for j in 0..tau {
        let n = 2 * j + 2 - tau;
        let ll = row_above.get(n - 1).unwrap_or(&zero);
        let lr = row_above.get(n + 1).unwrap_or(&zero);
        if ll.k != k + 1 || lr.k != k + 1 {
            return Err(shape_error("exponent does not match tau"));
        }
        entries.push(ExactAmplitude {
            a1: (&ll.a1 - mass * &lr.a2) / &norm,
            a2: (&lr.a2 + mass * &ll.a1) / &norm,
            k,
        });
    }
    Ok(AmplitudeRow::from_entries(tau, entries))
}
