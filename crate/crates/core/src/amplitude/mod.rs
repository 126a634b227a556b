//! Checker-path amplitudes `a = a1 + i·a2` by four routes: forward recurrence over rows,
//! binomial closed form, light-cone edge formulas, and literal path enumeration.
//! The downward recurrence reconstructs a row from the one above it.

mod closed_form;
mod down;
mod edge;
pub(crate) mod exact;
mod oracle;
pub(crate) mod walk;

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use closed_form::{closed_form_exact, closed_form_float};
pub use down::{amplitude_down, row_down_exact, row_down_float};
pub use edge::amplitude_edge;
pub use exact::{ExactRow, ExactRows};
pub use oracle::{amplitude_oracle, oracle_path_count, oracle_with_forbidden};

use crate::arith::{pow_rational, rational_to_f64, Rational};
use crate::error::Result;
use crate::lattice::Site;
use crate::mass::{Limits, MassParam, Mode};
use walk::{FloatKernel, Walk};

/// `a = (a1 + i·a2) / (1 + m²ε²)^(k/2)` with rational `a1`, `a2`.
///
/// Full-lattice amplitudes at time `tau` always use `k = tau - 1`, so two amplitudes at the
/// same site compare equal exactly when their rational parts do.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactAmplitude {
    pub a1: Rational,
    pub a2: Rational,
    pub k: u32,
}

impl ExactAmplitude {
    pub fn zero(k: u32) -> Self {
        ExactAmplitude { a1: Rational::zero(), a2: Rational::zero(), k }
    }

    pub fn is_zero(&self) -> bool {
        self.a1.is_zero() && self.a2.is_zero()
    }

    /// `|a|²`, an exact rational because the square root cancels.
    pub fn prob(&self, mass: &Rational) -> Rational {
        let (minus, plus) = self.prob_parts(mass);
        minus + plus
    }

    /// `(a1², a2²)`, the left- and right-moving probabilities.
    pub fn prob_parts(&self, mass: &Rational) -> (Rational, Rational) {
        let norm = pow_rational(&(Rational::one() + mass * mass), self.k);
        (&self.a1 * &self.a1 / &norm, &self.a2 * &self.a2 / norm)
    }

    pub fn to_float(&self, mass: &Rational) -> Amplitude {
        let (p1, p2) = self.prob_parts(mass);
        let signed = |x: &Rational, p: &Rational| {
            let v = rational_to_f64(p).sqrt();
            if x.is_negative() {
                -v
            } else {
                v
            }
        };
        Amplitude { a1: signed(&self.a1, &p1), a2: signed(&self.a2, &p2) }
    }
}

impl fmt::Display for ExactAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i) / (1+m^2)^({}/2)", self.a1, self.a2, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Amplitude {
    pub a1: f64,
    pub a2: f64,
}

impl Amplitude {
    pub fn prob(&self) -> f64 {
        self.a1 * self.a1 + self.a2 * self.a2
    }
}

/// All amplitudes at one time, one entry per reachable `n = -tau+2, -tau+4, …, tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeRow<A> {
    tau: i64,
    entries: Vec<A>,
}

impl<A> AmplitudeRow<A> {
    pub(crate) fn from_entries(tau: i64, entries: Vec<A>) -> Self {
        debug_assert_eq!(entries.len() as i64, tau);
        AmplitudeRow { tau, entries }
    }

    pub fn tau(&self) -> i64 {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `None` for positions no path reaches (the amplitude there is zero).
    pub fn get(&self, n: i64) -> Option<&A> {
        let site = Site::new(n, self.tau).ok()?;
        self.entries.get(site.row_index()?)
    }

    pub fn entries(&self) -> &[A] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &A)> + '_ {
        let tau = self.tau;
        self.entries
            .iter()
            .enumerate()
            .map(move |(j, a)| (2 * j as i64 + 2 - tau, a))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Evaluated {
    Exact(ExactAmplitude),
    Float(Amplitude),
}

impl Evaluated {
    pub fn to_float(&self, mass: &MassParam) -> Amplitude {
        match (self, mass) {
            (Evaluated::Float(a), _) => *a,
            (Evaluated::Exact(a), MassParam::Rational(m)) => a.to_float(m),
            (Evaluated::Exact(_), MassParam::Float(_)) => unreachable!("exact value needs a rational mass"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvaluatedRow {
    Exact(AmplitudeRow<ExactAmplitude>),
    Float(AmplitudeRow<Amplitude>),
}

/// Forward rows in floating point, starting at `tau = 1`. Sums run left to right.
pub struct FloatRows {
    walk: Walk<'static, FloatKernel>,
}

impl FloatRows {
    pub fn new(mass: f64) -> Self {
        FloatRows { walk: Walk::new(FloatKernel::new(mass), None) }
    }
}

impl Iterator for FloatRows {
    type Item = AmplitudeRow<Amplitude>;

    fn next(&mut self) -> Option<Self::Item> {
        let row = self.walk.next()?;
        let entries = row.cells.into_iter().map(|(a1, a2)| Amplitude { a1, a2 }).collect();
        Some(AmplitudeRow::from_entries(row.tau, entries))
    }
}

pub fn float_row(tau: i64, mass: f64, limits: &Limits) -> Result<AmplitudeRow<Amplitude>> {
    Site::new(0, tau).map_err(|_| crate::Error::InvalidSite { n: 0, tau })?;
    limits.check(Mode::Float, tau)?;
    Ok(FloatRows::new(mass).nth(tau as usize - 1).expect("row iterator is unbounded"))
}

pub fn exact_row(tau: i64, mass: &Rational, limits: &Limits) -> Result<ExactRow> {
    Site::new(0, tau).map_err(|_| crate::Error::InvalidSite { n: 0, tau })?;
    limits.check(Mode::Exact, tau)?;
    Ok(ExactRows::new(mass).nth(tau as usize - 1).expect("row iterator is unbounded"))
}

/// Row at `tau` by the forward recurrence.
pub fn amplitude_row_dp(tau: i64, mass: &MassParam, mode: Mode, limits: &Limits) -> Result<EvaluatedRow> {
    match mode {
        Mode::Exact => Ok(EvaluatedRow::Exact(exact_row(tau, mass.as_rational()?, limits)?.amplitudes())),
        Mode::Float => Ok(EvaluatedRow::Float(float_row(tau, mass.to_f64(), limits)?)),
    }
}

/// Amplitude at one site by the forward recurrence; zero where no path arrives.
pub fn amplitude_dp(site: Site, mass: &MassParam, mode: Mode, limits: &Limits) -> Result<Evaluated> {
    match mode {
        Mode::Exact => {
            let row = exact_row(site.tau(), mass.as_rational()?, limits)?;
            Ok(Evaluated::Exact(row.amplitude(site.n())))
        }
        Mode::Float => {
            let row = float_row(site.tau(), mass.to_f64(), limits)?;
            Ok(Evaluated::Float(row.get(site.n()).copied().unwrap_or_default()))
        }
    }
}

/// Binomial closed form; defined only strictly inside the light cone.
pub fn amplitude_closed_form(site: Site, mass: &MassParam, mode: Mode) -> Result<Evaluated> {
    match mode {
        Mode::Exact => Ok(Evaluated::Exact(closed_form_exact(site, mass.as_rational()?)?)),
        Mode::Float => Ok(Evaluated::Float(closed_form_float(site, mass.to_f64())?)),
    }
}
