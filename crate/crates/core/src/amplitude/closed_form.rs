use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Amplitude, ExactAmplitude};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::lattice::{Site, SiteClass};

fn interior(site: Site) -> Result<(i64, i64)> {
    match site.classify() {
        SiteClass::Interior => {
            let r = site.to_rotated()?;
            Ok((r.lam, r.mu_row))
        }
        SiteClass::ConeBoundary => Err(Error::OutsideDomain {
            n: site.n(),
            tau: site.tau(),
            what: "the binomial closed form (needs tau > |n|)",
        }),
        SiteClass::Unreachable => Err(Error::Unreachable { n: site.n(), tau: site.tau() }),
    }
}

/// Evaluates
///
/// ```text
/// a1 = (1+m²)^((1-tau)/2) Σ_{r≥0} (-1)^r C(lam-1, r) C(mu-1, r)   m^(2r+1)
/// a2 = (1+m²)^((1-tau)/2) Σ_{r≥1} (-1)^r C(lam-1, r) C(mu-1, r-1) m^(2r)
/// ```
///
/// with the binomials stepped incrementally in big integers.
pub fn closed_form_exact(site: Site, mass: &Rational) -> Result<ExactAmplitude> {
    let (lam, mu) = interior(site)?;
    let (top_l, top_m) = (lam - 1, mu - 1);
    let m2 = mass * mass;

    let mut a1 = Rational::zero();
    let mut a2 = Rational::zero();
    // C(lam-1, r), C(mu-1, r), C(mu-1, r-1) and m^(2r)
    let mut c_l = BigInt::one();
    let mut c_m = BigInt::one();
    let mut c_m_prev = BigInt::zero();
    let mut m_pow = Rational::one();
    for r in 0..=lam.min(mu) {
        let sign = if r % 2 == 0 { 1 } else { -1 };
        if r >= 1 {
            a2 += Rational::from_integer(sign * &c_l * &c_m_prev) * &m_pow;
        }
        a1 += Rational::from_integer(sign * &c_l * &c_m) * &m_pow * mass;

        c_m_prev = c_m.clone();
        c_l = step_binomial(&c_l, top_l, r);
        c_m = step_binomial(&c_m, top_m, r);
        m_pow *= &m2;
    }
    Ok(ExactAmplitude { a1, a2, k: (site.tau() - 1) as u32 })
}

/// `C(top, r+1)` from `C(top, r)`.
fn step_binomial(c: &BigInt, top: i64, r: i64) -> BigInt {
    if r >= top {
        BigInt::zero()
    } else {
        c * BigInt::from(top - r) / BigInt::from(r + 1)
    }
}

/// Floating closed form. Alternating terms can cancel badly for large `tau` and
/// `m > 1`; prefer the recurrence there.
pub fn closed_form_float(site: Site, mass: f64) -> Result<Amplitude> {
    let (lam, mu) = interior(site)?;
    let (top_l, top_m) = ((lam - 1) as f64, (mu - 1) as f64);
    let norm = (1.0 + mass * mass).powf((1 - site.tau()) as f64 / 2.0);

    let (mut a1, mut a2) = (0.0, 0.0);
    let (mut c_l, mut c_m, mut c_m_prev) = (1.0f64, 1.0f64, 0.0f64);
    let mut m_pow = 1.0;
    for r in 0..=lam.min(mu) {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        if r >= 1 {
            a2 += sign * c_l * c_m_prev * m_pow;
        }
        a1 += sign * c_l * c_m * m_pow * mass;
        c_m_prev = c_m;
        let rf = r as f64;
        c_l = if rf >= top_l { 0.0 } else { c_l * (top_l - rf) / (rf + 1.0) };
        c_m = if rf >= top_m { 0.0 } else { c_m * (top_m - rf) / (rf + 1.0) };
        m_pow *= mass * mass;
    }
    Ok(Amplitude { a1: a1 * norm, a2: a2 * norm })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn site(n: i64, tau: i64) -> Site {
        Site::new(n, tau).unwrap()
    }

    #[test]
    fn origin_at_time_four() {
        // ((m - m³) - m² i) / (1+m²)^(3/2)
        for m in [q(1, 1), q(1, 2), q(2, 1), q(3, 7)] {
            let a = closed_form_exact(site(0, 4), &m).unwrap();
            let m3 = &m * &m * &m;
            assert_eq!(a.a1, &m - &m3);
            assert_eq!(a.a2, -(&m * &m));
            assert_eq!(a.k, 3);
        }
    }

    #[test]
    fn time_three_interior() {
        let m = q(1, 2);
        let a = closed_form_exact(site(1, 3), &m).unwrap();
        assert_eq!((a.a1, a.a2, a.k), (m.clone(), -(&m * &m), 2));
    }

    #[test]
    fn time_two_unit_mass_float() {
        let a = closed_form_float(site(0, 2), 1.0).unwrap();
        assert!((a.a1 - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(a.a2, 0.0);
    }

    #[test]
    fn rejects_boundary_and_unreachable() {
        assert!(matches!(
            closed_form_exact(site(3, 3), &q(1, 1)),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(matches!(closed_form_exact(site(0, 3), &q(1, 1)), Err(Error::Unreachable { .. })));
        assert!(closed_form_float(site(-3, 3), 1.0).is_err());
    }

    #[test]
    fn massless_interior_vanishes() {
        let a = closed_form_exact(site(0, 6), &q(0, 1)).unwrap();
        assert!(a.is_zero());
    }
}
