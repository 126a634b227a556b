use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::arith::{parse_number, rational_to_f64, Rational};
use crate::error::{Error, Result};

/// The dimensionless mass `mε`. Only this product enters the model.
#[derive(Debug, Clone, PartialEq)]
pub enum MassParam {
    Rational(Rational),
    Float(f64),
}

impl MassParam {
    pub fn rational(value: Rational) -> Result<MassParam> {
        if value.is_negative() || !rational_to_f64(&value).is_finite() {
            return Err(Error::InvalidMass(value.to_string()));
        }
        Ok(MassParam::Rational(value))
    }

    pub fn ratio(p: i64, q: i64) -> Result<MassParam> {
        if q == 0 {
            return Err(Error::InvalidMass(format!("{p}/{q}")));
        }
        MassParam::rational(Rational::new(p.into(), q.into()))
    }

    pub fn float(value: f64) -> Result<MassParam> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidMass(value.to_string()));
        }
        Ok(MassParam::Float(value))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            MassParam::Rational(r) => rational_to_f64(r),
            MassParam::Float(f) => *f,
        }
    }

    pub fn as_rational(&self) -> Result<&Rational> {
        match self {
            MassParam::Rational(r) => Ok(r),
            MassParam::Float(_) => Err(Error::InexactMass),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MassParam::Rational(r) => r.is_zero(),
            MassParam::Float(f) => *f == 0.0,
        }
    }

    /// The mode a bare mass implies: rationals run exact, decimals run float.
    pub fn natural_mode(&self) -> Mode {
        match self {
            MassParam::Rational(_) => Mode::Exact,
            MassParam::Float(_) => Mode::Float,
        }
    }

    /// `a·b` for physical inputs `m` and `ε`; rational only if both are.
    pub fn product(a: &MassParam, b: &MassParam) -> Result<MassParam> {
        match (a, b) {
            (MassParam::Rational(x), MassParam::Rational(y)) => MassParam::rational(x * y),
            _ => MassParam::float(a.to_f64() * b.to_f64()),
        }
    }
}

/// Accepts `p/q`, an integer (both exact) or a decimal literal (float).
impl FromStr for MassParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<MassParam> {
        match parse_number(s) {
            Ok(Ok(r)) => MassParam::rational(r),
            Ok(Err(f)) => MassParam::float(f),
            Err(()) => Err(Error::InvalidMass(s.to_string())),
        }
    }
}

impl fmt::Display for MassParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MassParam::Rational(r) => write!(f, "{r}"),
            MassParam::Float(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// Largest time each evaluator accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub float_tau_max: i64,
    pub exact_tau_max: i64,
    pub oracle_tau_max: i64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            float_tau_max: 5000,
            exact_tau_max: 500,
            oracle_tau_max: 16,
        }
    }
}

impl Limits {
    pub fn check(&self, mode: Mode, tau: i64) -> Result<()> {
        match mode {
            Mode::Exact => check_limit("exact", tau, self.exact_tau_max),
            Mode::Float => check_limit("float", tau, self.float_tau_max),
        }
    }

    pub fn check_oracle(&self, tau: i64) -> Result<()> {
        check_limit("oracle", tau, self.oracle_tau_max)
    }
}

fn check_limit(kind: &'static str, tau: i64, limit: i64) -> Result<()> {
    if tau > limit {
        Err(Error::LimitExceeded { kind, tau, limit })
    } else {
        Ok(())
    }
}
