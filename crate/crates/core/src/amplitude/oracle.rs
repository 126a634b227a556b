//! Ground truth by brute force: walk every checker path and add up `(-i·m)^turns`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ExactAmplitude;
use crate::arith::Rational;
use crate::error::Result;
use crate::lattice::Site;
use crate::mass::Limits;

/// Number of paths ending at `site`, grouped by how many turns they make.
fn turn_histogram(site: Site, forbidden: &dyn Fn(Site) -> bool) -> Vec<u64> {
    let tau = site.tau();
    let steps = (tau - 1) as u32;
    let mut counts = vec![0u64; tau.max(1) as usize];
    // bit i set = step i+2 goes up-right; the first step is always up-right
    'paths: for mask in 0u64..(1u64 << steps) {
        let mut n = 1i64;
        let mut right = true;
        let mut turns = 0usize;
        for i in 0..steps {
            // the point we are leaving is never the endpoint
            let here = Site::new(n, i as i64 + 1).expect("tau >= 1");
            if forbidden(here) {
                continue 'paths;
            }
            let go_right = mask >> i & 1 == 1;
            if go_right != right {
                turns += 1;
            }
            right = go_right;
            n += if go_right { 1 } else { -1 };
        }
        if n == site.n() {
            counts[turns] += 1;
        }
    }
    counts
}

fn sum_turn_weights(counts: &[u64], mass: &Rational, k: u32) -> ExactAmplitude {
    // i·(-i)^j cycles through i, 1, -i, -1
    let mut a1 = Rational::zero();
    let mut a2 = Rational::zero();
    let mut m_pow = Rational::one();
    for (j, &c) in counts.iter().enumerate() {
        let term = Rational::from_integer(BigInt::from(c)) * &m_pow;
        match j % 4 {
            0 => a2 += term,
            1 => a1 += term,
            2 => a2 -= term,
            _ => a1 -= term,
        }
        m_pow *= mass;
    }
    ExactAmplitude { a1, a2, k }
}

/// Literal path sum at `site`.
pub fn amplitude_oracle(site: Site, mass: &Rational, limits: &Limits) -> Result<ExactAmplitude> {
    oracle_with_forbidden(site, mass, limits, &|_| false)
}

/// Path sum restricted to paths whose intermediate points avoid `forbidden`.
/// The endpoint itself is never tested.
pub fn oracle_with_forbidden(
    site: Site,
    mass: &Rational,
    limits: &Limits,
    forbidden: &dyn Fn(Site) -> bool,
) -> Result<ExactAmplitude> {
    limits.check_oracle(site.tau())?;
    let counts = turn_histogram(site, forbidden);
    Ok(sum_turn_weights(&counts, mass, (site.tau() - 1) as u32))
}

pub fn oracle_path_count(site: Site, limits: &Limits) -> Result<u64> {
    limits.check_oracle(site.tau())?;
    Ok(turn_histogram(site, &|_| false).iter().sum())
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
    fn three_paths_to_origin_at_four() {
        assert_eq!(oracle_path_count(site(0, 4), &Limits::default()).unwrap(), 3);
        let a = amplitude_oracle(site(0, 4), &q(1, 1), &Limits::default()).unwrap();
        assert_eq!(a, ExactAmplitude { a1: q(0, 1), a2: q(-1, 1), k: 3 });
    }

    #[test]
    fn path_counts_are_binomial() {
        // paths from (1,1) to (n,tau): C(tau-1, lam-1)
        for tau in 1..=12 {
            for n in -tau..=tau {
                let s = site(n, tau);
                let count = oracle_path_count(s, &Limits::default()).unwrap();
                match s.to_rotated() {
                    Ok(r) => assert_eq!(
                        BigInt::from(count),
                        crate::arith::binomial((tau - 1) as u64, (r.lam - 1) as u64)
                    ),
                    Err(_) => assert_eq!(count, 0),
                }
            }
        }
    }

    #[test]
    fn forbidden_point_removes_paths() {
        // of the three paths to (0,4), one passes through (2,2)
        let a = oracle_with_forbidden(site(0, 4), &q(1, 1), &Limits::default(), &|s| s == site(2, 2)).unwrap();
        assert_eq!(a, ExactAmplitude { a1: q(-1, 1), a2: q(-1, 1), k: 3 });
    }

    #[test]
    fn oracle_limit() {
        assert!(amplitude_oracle(site(0, 18), &q(1, 1), &Limits::default()).is_err());
    }
}
