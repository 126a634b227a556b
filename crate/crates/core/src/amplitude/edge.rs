use num_traits::{One, Zero};

use super::ExactAmplitude;
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::lattice::Site;

/// Closed forms on the two outermost diagonals of the cone:
/// `a(n, n) = i·(1+m²)^((1-n)/2)` and `a(-n, n+2) = m·(1+m²)^(-(1+n)/2)`.
pub fn amplitude_edge(site: Site, mass: &Rational) -> Result<ExactAmplitude> {
    let k = (site.tau() - 1) as u32;
    if site.n() == site.tau() {
        Ok(ExactAmplitude { a1: Rational::zero(), a2: Rational::one(), k })
    } else if site.tau() >= 2 && site.n() == 2 - site.tau() {
        Ok(ExactAmplitude { a1: mass.clone(), a2: Rational::zero(), k })
    } else {
        Err(Error::OutsideDomain {
            n: site.n(),
            tau: site.tau(),
            what: "the edge formulas (needs n = tau or n = 2 - tau)",
        })
    }
}
