#![allow(dead_code)]

use checkers_core::{ExactAmplitude, Rational, Site};
use num_traits::{One, Zero};

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

pub fn site(n: i64, tau: i64) -> Site {
    Site::new(n, tau).unwrap()
}

/// Reachable sites with `tau <= tau_max`, row by row.
pub fn reachable_sites(tau_max: i64) -> Vec<Site> {
    (1..=tau_max)
        .flat_map(|tau| (0..tau).map(move |j| site(2 * j + 2 - tau, tau)))
        .collect()
}

/// Number of paths to `(n, tau)` with each turn count, found by brute force over all
/// move sequences. Paths start with an up-right move from the origin. A path is dropped
/// if any point strictly between the origin and the endpoint satisfies `forbidden`.
pub fn turn_counts(n: i64, tau: i64, forbidden: &dyn Fn(i64, i64) -> bool) -> Vec<u64> {
    let mut counts = vec![0u64; tau.max(1) as usize];
    let moves = tau - 1;
    for bits in 0u64..(1u64 << moves) {
        let (mut x, mut t, mut right, mut turns) = (1i64, 1i64, true, 0usize);
        let mut ok = true;
        for i in 0..moves {
            if forbidden(x, t) {
                ok = false;
                break;
            }
            let go_right = bits >> i & 1 == 1;
            if go_right != right {
                turns += 1;
                right = go_right;
            }
            x += if go_right { 1 } else { -1 };
            t += 1;
        }
        if ok && x == n {
            counts[turns] += 1;
        }
    }
    counts
}

/// Sums `i·(-i·m)^turns` over a turn histogram into the `(A1, A2, k)` normal form:
/// odd turn counts feed the real part, even ones the imaginary part.
pub fn amplitude_from_counts(counts: &[u64], mass: &Rational, tau: i64) -> ExactAmplitude {
    let (mut a1, mut a2) = (Rational::zero(), Rational::zero());
    let mut power = Rational::one();
    for (turns, &c) in counts.iter().enumerate() {
        let term = &power * Rational::from_integer(c.into());
        match turns % 4 {
            0 => a2 += term,
            1 => a1 += term,
            2 => a2 -= term,
            _ => a1 -= term,
        }
        power *= mass;
    }
    ExactAmplitude { a1, a2, k: (tau - 1) as u32 }
}

pub fn brute_amplitude(n: i64, tau: i64, mass: &Rational) -> ExactAmplitude {
    amplitude_from_counts(&turn_counts(n, tau, &|_, _| false), mass, tau)
}

/// `(1 + m²)^k` as a rational.
pub fn norm_pow(mass: &Rational, k: u32) -> Rational {
    let base = Rational::one() + mass * mass;
    (0..k).fold(Rational::one(), |acc, _| acc * &base)
}

pub fn brute_prob(n: i64, tau: i64, mass: &Rational) -> Rational {
    let a = brute_amplitude(n, tau, mass);
    (&a.a1 * &a.a1 + &a.a2 * &a.a2) / norm_pow(mass, a.k)
}

pub fn cell(a1: Rational, a2: Rational, k: u32) -> ExactAmplitude {
    ExactAmplitude { a1, a2, k }
}

/// Amplitude table for `tau <= 4` as polynomials in `m`, over `(1+m²)^((tau-1)/2)`.
pub fn amplitude_table(m: &Rational) -> Vec<((i64, i64), ExactAmplitude)> {
    let (z, one) = (Rational::zero(), Rational::one());
    let m2 = m * m;
    let m3 = &m2 * m;
    vec![
        ((1, 1), cell(z.clone(), one.clone(), 0)),
        ((0, 2), cell(m.clone(), z.clone(), 1)),
        ((2, 2), cell(z.clone(), one.clone(), 1)),
        ((-1, 3), cell(m.clone(), z.clone(), 2)),
        ((1, 3), cell(m.clone(), -m2.clone(), 2)),
        ((3, 3), cell(z.clone(), one.clone(), 2)),
        ((-2, 4), cell(m.clone(), z.clone(), 3)),
        ((0, 4), cell(m - &m3, -m2.clone(), 3)),
        ((2, 4), cell(m.clone(), q(-2, 1) * &m2, 3)),
        ((4, 4), cell(z, one, 3)),
    ]
}

pub fn probability_table(m: &Rational) -> Vec<((i64, i64), Rational)> {
    let one = Rational::one();
    let m2 = m * m;
    let d = &one + &m2;
    let d2 = &d * &d;
    let d3 = &d2 * &d;
    vec![
        ((1, 1), one.clone()),
        ((0, 2), &m2 / &d),
        ((2, 2), &one / &d),
        ((-1, 3), &m2 / &d2),
        ((1, 3), &m2 / &d),
        ((3, 3), &one / &d2),
        ((-2, 4), &m2 / &d3),
        ((0, 4), &m2 * (&one - &m2 + &m2 * &m2) / &d3),
        ((2, 4), &m2 * (&one + q(4, 1) * &m2) / &d3),
        ((4, 4), &one / &d3),
    ]
}
