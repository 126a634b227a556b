//! Lattice sites in dimensionless coordinates and the rotated light-cone frame.
//!
//! A site `(n, tau)` stands for the lattice point `(x, t) = (n·ε, tau·ε)`. Every checker
//! path starts at the origin with an up-right step, so the reachable sites at time `tau`
//! are `n ∈ {-tau+2, -tau+4, …, tau}`. The rotated coordinates
//! `lam = (tau+n)/2`, `mu_row = (tau-n)/2` count up-right and up-left steps.

use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{parse_number, rational_to_f64, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct Site {
    n: i64,
    tau: i64,
}

impl Site {
    pub fn new(n: i64, tau: i64) -> Result<Site> {
        if tau < 1 {
            return Err(Error::InvalidSite { n, tau });
        }
        Ok(Site { n, tau })
    }

    pub fn n(self) -> i64 {
        self.n
    }

    pub fn tau(self) -> i64 {
        self.tau
    }

    pub fn is_reachable(self) -> bool {
        (self.n + self.tau).rem_euclid(2) == 0 && self.n.abs() <= self.tau && self.n != -self.tau
    }

    pub fn classify(self) -> SiteClass {
        if !self.is_reachable() {
            SiteClass::Unreachable
        } else if self.n == self.tau {
            SiteClass::ConeBoundary
        } else {
            SiteClass::Interior
        }
    }

    /// Fails with [`Error::Unreachable`] unless some checker path ends here.
    pub fn require_reachable(self) -> Result<Site> {
        if self.is_reachable() {
            Ok(self)
        } else {
            Err(Error::Unreachable { n: self.n, tau: self.tau })
        }
    }

    pub fn to_rotated(self) -> Result<RotatedSite> {
        self.require_reachable()?;
        Ok(RotatedSite {
            lam: (self.tau + self.n) / 2,
            mu_row: (self.tau - self.n) / 2,
        })
    }

    /// Position of this site inside a row of reachable sites, i.e. `lam - 1`.
    pub(crate) fn row_index(self) -> Option<usize> {
        self.is_reachable()
            .then(|| ((self.n + self.tau - 2) / 2) as usize)
    }

    /// True when a checker path through `earlier` can continue to `self`.
    pub fn is_in_future_of(self, earlier: Site) -> bool {
        let dt = self.tau - earlier.tau;
        dt >= 0 && (self.n - earlier.n).abs() <= dt && (self.n - earlier.n + dt) % 2 == 0
    }
}

impl TryFrom<(i64, i64)> for Site {
    type Error = Error;
    fn try_from((n, tau): (i64, i64)) -> Result<Site> {
        Site::new(n, tau)
    }
}

impl From<Site> for (i64, i64) {
    fn from(s: Site) -> (i64, i64) {
        (s.n, s.tau)
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.tau)
    }
}

/// Parses `"n,tau"`.
impl FromStr for Site {
    type Err = Error;
    fn from_str(s: &str) -> Result<Site> {
        let bad = || Error::InvalidArgument(format!("expected `n,tau`, got {s:?}"));
        let (n, tau) = s.split_once(',').ok_or_else(bad)?;
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let tau: i64 = tau.trim().parse().map_err(|_| bad())?;
        Site::new(n, tau)
    }
}

impl Site {
    /// Site of the physical point `(x, t)` on the lattice of step `eps`. Each argument is
    /// `p/q`, an integer, or a decimal; `x/eps` and `t/eps` must be whole numbers.
    pub fn from_physical(x: &str, t: &str, eps: &str) -> Result<Site> {
        let n = lattice_units(x, eps)?;
        let tau = lattice_units(t, eps)?;
        Site::new(n, tau)
    }
}

fn lattice_units(value: &str, eps: &str) -> Result<i64> {
    let parse = |s: &str| parse_number(s).map_err(|_| Error::InvalidNumber(s.to_string()));
    let not_on_lattice = || Error::InvalidArgument(format!("{value} is not a whole multiple of eps = {eps}"));
    match (parse(value)?, parse(eps)?) {
        (_, Ok(e)) if e.is_zero() => Err(Error::InvalidArgument("eps must be nonzero".into())),
        (Ok(v), Ok(e)) => {
            let q = v / e;
            if !q.is_integer() {
                return Err(not_on_lattice());
            }
            q.to_integer().to_i64().ok_or_else(not_on_lattice)
        }
        (v, e) => {
            let as_f64 = |r: std::result::Result<Rational, f64>| r.map(|r| rational_to_f64(&r)).unwrap_or_else(|f| f);
            let (v, e) = (as_f64(v), as_f64(e));
            if e == 0.0 {
                return Err(Error::InvalidArgument("eps must be nonzero".into()));
            }
            let q = v / e;
            let r = q.round();
            if (q - r).abs() > 1e-9 * r.abs().max(1.0) || r.abs() > i64::MAX as f64 / 2.0 {
                return Err(not_on_lattice());
            }
            Ok(r as i64)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteClass {
    Unreachable,
    ConeBoundary,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RotatedSite {
    pub lam: i64,
    pub mu_row: i64,
}

impl RotatedSite {
    pub fn new(lam: i64, mu_row: i64) -> Result<RotatedSite> {
        if lam < 1 || mu_row < 0 {
            return Err(Error::InvalidArgument(format!(
                "rotated site needs lam >= 1 and mu_row >= 0, got ({lam}, {mu_row})"
            )));
        }
        Ok(RotatedSite { lam, mu_row })
    }

    pub fn to_site(self) -> Site {
        Site {
            n: self.lam - self.mu_row,
            tau: self.lam + self.mu_row,
        }
    }
}

impl From<RotatedSite> for Site {
    fn from(r: RotatedSite) -> Site {
        r.to_site()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn physical_coordinates() {
        assert_eq!(Site::from_physical("0", "4/10", "1/10").unwrap(), Site::new(0, 4).unwrap());
        assert_eq!(Site::from_physical("-0.3", "0.5", "0.1").unwrap(), Site::new(-3, 5).unwrap());
        assert!(Site::from_physical("1/3", "1", "1/2").is_err());
        assert!(Site::from_physical("1", "1", "0").is_err());
        assert!(Site::from_physical("1", "0", "1").is_err());
        assert!(Site::from_physical("x", "1", "1").is_err());
    }

    fn site(n: i64, tau: i64) -> Site {
        Site::new(n, tau).unwrap()
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(site(1, 1).to_rotated().unwrap(), RotatedSite { lam: 1, mu_row: 0 });
        assert_eq!(site(0, 4).to_rotated().unwrap(), RotatedSite { lam: 2, mu_row: 2 });
        assert_eq!(site(-1, 3).to_rotated().unwrap(), RotatedSite { lam: 1, mu_row: 2 });
        assert_eq!(RotatedSite::new(1, 0).unwrap().to_site(), site(1, 1));
        assert_eq!(RotatedSite::new(2, 1).unwrap().to_site(), site(1, 3));
        assert_eq!(RotatedSite::new(3, 2).unwrap().to_site(), site(1, 5));
    }

    #[test]
    fn rotation_rejects_unreachable() {
        assert!(matches!(site(0, 3).to_rotated(), Err(Error::Unreachable { .. })));
        assert!(site(-3, 3).to_rotated().is_err());
        assert!(site(5, 3).to_rotated().is_err());
        assert!(RotatedSite::new(0, 1).is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(site(3, 3).classify(), SiteClass::ConeBoundary);
        assert_eq!(site(0, 4).classify(), SiteClass::Interior);
        assert_eq!(site(0, 3).classify(), SiteClass::Unreachable);
        // the left cone edge is never reached
        assert_eq!(site(-2, 2).classify(), SiteClass::Unreachable);
        assert_eq!(site(-1, 3).classify(), SiteClass::Interior);
        assert!(Site::new(0, 0).is_err());
    }

    #[test]
    fn parse_site() {
        assert_eq!("0,4".parse::<Site>().unwrap(), site(0, 4));
        assert_eq!(" -2 , 6 ".parse::<Site>().unwrap(), site(-2, 6));
        assert!("0;4".parse::<Site>().is_err());
        assert!("0,0".parse::<Site>().is_err());
    }

    #[test]
    fn row_index_matches_lambda() {
        for tau in 1..10 {
            for n in -tau..=tau {
                let s = site(n, tau);
                match s.to_rotated() {
                    Ok(r) => assert_eq!(s.row_index(), Some((r.lam - 1) as usize)),
                    Err(_) => assert_eq!(s.row_index(), None),
                }
            }
        }
    }

    proptest! {
        #[test]
        fn rotated_roundtrip(tau in 1i64..500, k in 0i64..500) {
            let j = k % tau;
            let s = site(2 * j + 2 - tau, tau);
            prop_assert!(s.is_reachable());
            prop_assert_eq!(s.to_rotated().unwrap().to_site(), s);
        }

        #[test]
        fn classify_is_total(tau in 1i64..200, n in -200i64..200) {
            let s = site(n, tau);
            let class = s.classify();
            prop_assert_eq!(class == SiteClass::Interior, s.is_reachable() && tau > n.abs());
            prop_assert_eq!(class == SiteClass::ConeBoundary, n == tau);
        }
    }
}
