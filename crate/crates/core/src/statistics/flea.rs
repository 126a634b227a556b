//! The classical flea: a walk stepping `+1` with probability `p` and `−1` otherwise.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};

fn check_p(p: &Rational) -> Result<()> {
    if p.is_negative() || p > &Rational::one() {
        return Err(Error::InvalidArgument(format!("step probability {p} is outside [0, 1]")));
    }
    Ok(())
}

/// `P(x, t) = p·P(x−1, t−1) + q·P(x+1, t−1)` from `P(0, 0) = 1`, keeping only nonzero entries.
pub fn flea_distribution(t: i64, p: &Rational) -> Result<BTreeMap<i64, Rational>> {
    check_p(p)?;
    if t < 0 {
        return Err(Error::InvalidArgument(format!("time must be nonnegative, got {t}")));
    }
    let q = Rational::one() - p;
    let mut dist = BTreeMap::from([(0, Rational::one())]);
    for _ in 0..t {
        let mut next: BTreeMap<i64, Rational> = BTreeMap::new();
        for (x, w) in &dist {
            if !p.is_zero() {
                *next.entry(x + 1).or_insert_with(Rational::zero) += w * p;
            }
            if !q.is_zero() {
                *next.entry(x - 1).or_insert_with(Rational::zero) += w * &q;
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// `(Σ (x/T)·P(x, T), p − q)`; the two agree exactly.
pub fn flea_velocity_check(t: i64, p: &Rational) -> Result<(Rational, Rational)> {
    if t < 1 {
        return Err(Error::InvalidArgument(format!("T must be at least 1, got {t}")));
    }
    let dist = flea_distribution(t, p)?;
    let mean: Rational = dist.iter().map(|(x, w)| w * Rational::from_integer((*x).into())).sum();
    let expected = p - (Rational::one() - p);
    Ok((mean / Rational::from_integer(t.into()), expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn examples() {
        assert_eq!(flea_distribution(0, &q(1, 3)).unwrap(), BTreeMap::from([(0, q(1, 1))]));
        assert_eq!(
            flea_distribution(2, &q(1, 2)).unwrap(),
            BTreeMap::from([(-2, q(1, 4)), (0, q(1, 2)), (2, q(1, 4))])
        );
        assert_eq!(flea_distribution(3, &q(1, 1)).unwrap(), BTreeMap::from([(3, q(1, 1))]));
    }

    #[test]
    fn velocity() {
        assert_eq!(flea_velocity_check(7, &q(1, 2)).unwrap(), (q(0, 1), q(0, 1)));
        assert_eq!(flea_velocity_check(5, &q(1, 1)).unwrap(), (q(1, 1), q(1, 1)));
        assert_eq!(flea_velocity_check(50, &q(2, 3)).unwrap(), (q(1, 3), q(1, 3)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(flea_distribution(2, &q(3, 2)).is_err());
        assert!(flea_distribution(-1, &q(1, 2)).is_err());
        assert!(flea_velocity_check(0, &q(1, 2)).is_err());
    }
}
