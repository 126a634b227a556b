//! Big-number helpers shared by the exact evaluators.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Converts `num / den` to the nearest-ish `f64` without overflowing on huge operands.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    assert!(!den.is_zero(), "zero denominator");
    let neg = num.is_negative() != den.is_negative();
    let (n, d) = (num.abs(), den.abs());
    let shift_n = (n.bits() as i64 - 64).max(0);
    let shift_d = (d.bits() as i64 - 64).max(0);
    let nf = (&n >> shift_n as usize).to_f64().unwrap();
    let df = (&d >> shift_d as usize).to_f64().unwrap();
    let mag = nf / df * pow2(shift_n - shift_d);
    if neg {
        -mag
    } else {
        mag
    }
}

fn pow2(e: i64) -> f64 {
    // split so intermediate values stay finite for |e| up to a few thousand
    let mut out = 1.0f64;
    let mut e = e;
    while e > 1000 {
        out *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        out *= 2f64.powi(-1000);
        e += 1000;
    }
    out * 2f64.powi(e as i32)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    ratio_to_f64(r.numer(), r.denom())
}

/// Compares `x` with `1/sqrt(c)` exactly.
pub fn cmp_inv_sqrt(x: &Rational, c: u32) -> Ordering {
    if !x.is_positive() {
        return Ordering::Less;
    }
    (x * x * Rational::from_integer(BigInt::from(c))).cmp(&Rational::one())
}

pub fn pow_rational(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// `C(n, k)` by the multiplicative recurrence.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Parses `p/q`, an integer, or a decimal literal.
///
/// Returns `Ok(Ok(rational))` for `p/q` and integer text, `Ok(Err(float))` for text
/// with a decimal point or exponent.
pub(crate) fn parse_number(text: &str) -> Result<std::result::Result<Rational, f64>, ()> {
    let s = text.trim();
    if s.is_empty() {
        return Err(());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = parse_int(p)?;
        let q: BigInt = parse_int(q)?;
        if q.is_zero() {
            return Err(());
        }
        return Ok(Ok(Rational::new(p, q)));
    }
    if let Ok(i) = parse_int(s) {
        return Ok(Ok(Rational::from_integer(i)));
    }
    let f: f64 = s.parse().map_err(|_| ())?;
    if !f.is_finite() {
        return Err(());
    }
    Ok(Err(f))
}

fn parse_int(s: &str) -> Result<BigInt, ()> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || digits.len() > 4096 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(());
    }
    s.parse().map_err(|_| ())
}

/// A Gaussian rational `re + i·im`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }

    pub fn one() -> Self {
        Gaussian::new(Rational::one(), Rational::zero())
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Gaussian::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Add for &Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Gaussian {
    type Output = Gaussian;
    fn sub(self, rhs: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: &Gaussian) -> Gaussian {
        Gaussian::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}
