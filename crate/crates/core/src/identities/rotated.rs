//! Amplitudes in light-cone coordinates, `b(lam, mu) = a(lam − mu, lam + mu)`, streamed
//! along one row (fixed `mu`) or one column (fixed `lam`), and infinite sums over them
//! truncated by a provable geometric tail bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mass::MassParam;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotatedAmplitude {
    pub lam: i64,
    pub mu_row: i64,
    pub b1: f64,
    pub b2: f64,
}

/// Which line of the rotated lattice to walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Line {
    /// Fixed `mu`, `lam = 1, 2, …`.
    Row(i64),
    /// Fixed `lam`, `mu = 0, 1, …`.
    Column(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Part {
    B1,
    B2,
}

/// Values along a line, computed by the recurrence
/// `b1(l, u) = ρ(b1(l, u−1) + m·b2(l, u−1))`, `b2(l, u) = ρ(b2(l−1, u) − m·b1(l−1, u))`
/// from `b(1, 0) = i`, with `ρ = 1/√(1+m²)`.
pub struct RotatedStream {
    line: Line,
    m: f64,
    rho: f64,
    /// Row: the column at the current `lam`, indexed by `mu = 0..=mu_row`.
    /// Column: the row at the current `mu`, indexed by `lam − 1`.
    cells: Vec<(f64, f64)>,
    step: i64,
}

impl RotatedStream {
    pub fn new(line: Line, mass: f64) -> Result<Self> {
        let len = match line {
            Line::Row(mu) if mu >= 0 => mu + 1,
            Line::Column(lam) if lam >= 1 => lam,
            _ => return Err(Error::InvalidArgument(format!("{line:?} is outside the rotated lattice"))),
        };
        Ok(RotatedStream {
            line,
            m: mass,
            rho: 1.0 / (1.0 + mass * mass).sqrt(),
            cells: vec![(0.0, 0.0); len as usize],
            step: 0,
        })
    }
}

impl Iterator for RotatedStream {
    type Item = RotatedAmplitude;

    fn next(&mut self) -> Option<RotatedAmplitude> {
        let (m, rho) = (self.m, self.rho);
        let out = match self.line {
            Line::Row(mu_row) => {
                // advance the column from lam − 1 to lam = step + 1
                let lam = self.step + 1;
                let mut below = (0.0, 0.0);
                for (u, cell) in self.cells.iter_mut().enumerate() {
                    let b2 = if lam == 1 && u == 0 { 1.0 } else { rho * (cell.1 - m * cell.0) };
                    let b1 = if u == 0 { 0.0 } else { rho * (below.0 + m * below.1) };
                    *cell = (b1, b2);
                    below = *cell;
                }
                let (b1, b2) = self.cells[mu_row as usize];
                RotatedAmplitude { lam, mu_row, b1, b2 }
            }
            Line::Column(lam) => {
                // advance the row from mu − 1 to mu = step
                let mu = self.step;
                let mut left = (0.0, 0.0);
                for (l, cell) in self.cells.iter_mut().enumerate() {
                    let b1 = if mu == 0 { 0.0 } else { rho * (cell.0 + m * cell.1) };
                    let b2 = if l == 0 {
                        if mu == 0 {
                            1.0
                        } else {
                            0.0
                        }
                    } else {
                        rho * (left.1 - m * left.0)
                    };
                    *cell = (b1, b2);
                    left = *cell;
                }
                let (b1, b2) = self.cells[(lam - 1) as usize];
                RotatedAmplitude { lam, mu_row: mu, b1, b2 }
            }
        };
        self.step += 1;
        Some(out)
    }
}

/// Weight `w(j)` applied to each term, `j` being `lam` along a row and `mu` along a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Weight {
    One,
    Index,
    IndexSq,
    Inverse,
    Pow2Inverse,
}

impl Weight {
    fn at(self, j: i64) -> f64 {
        let j = j as f64;
        match self {
            Weight::One => 1.0,
            Weight::Index => j,
            Weight::IndexSq => j * j,
            Weight::Inverse => 1.0 / j,
            Weight::Pow2Inverse => 0.5f64.powf(j),
        }
    }

    /// Upper bound on `w(i+1)/w(i)` for every `i >= j`.
    fn ratio_from(self, j: i64) -> f64 {
        let j = j as f64;
        match self {
            Weight::One | Weight::Inverse => 1.0,
            Weight::Index => (j + 1.0) / j,
            Weight::IndexSq => ((j + 1.0) / j).powi(2),
            Weight::Pow2Inverse => 0.5,
        }
    }
}

/// Magnitude bound `ρ^(lam+mu−1)·P(lam, mu)`, where `P` is the closed-form polynomial with
/// every sign made positive. Valid for `lam >= 1`, `mu >= 1`.
pub fn amplitude_bound(lam: i64, mu: i64, part: Part, mass: f64) -> f64 {
    (positive_poly_ln(lam, mu, part, mass) - (lam + mu - 1) as f64 * 0.5 * (1.0 + mass * mass).ln()).exp()
}

/// `ln P(lam, mu)`; `−∞` when `P` vanishes.
fn positive_poly_ln(lam: i64, mu: i64, part: Part, mass: f64) -> f64 {
    let (top_l, top_m) = (lam - 1, mu - 1);
    let mut total = 0.0f64;
    let mut c_l = 1.0f64;
    let mut c_m = 1.0f64;
    let mut c_m_prev = 0.0f64;
    let m2 = mass * mass;
    let mut m_pow = 1.0f64;
    for r in 0..=lam.min(mu) {
        total += match part {
            Part::B1 => c_l * c_m * m_pow * mass,
            Part::B2 => c_l * c_m_prev * m_pow,
        };
        c_m_prev = c_m;
        let rf = r as f64;
        c_l = if r >= top_l { 0.0 } else { c_l * (top_l as f64 - rf) / (rf + 1.0) };
        c_m = if r >= top_m { 0.0 } else { c_m * (top_m as f64 - rf) / (rf + 1.0) };
        m_pow *= m2;
    }
    total.ln()
}

/// Degree in the running index of the bounding polynomial.
fn running_degree(line: Line, part: Part) -> i64 {
    match (line, part) {
        (Line::Row(mu), Part::B1) => mu - 1,
        (Line::Row(mu), Part::B2) => mu,
        (Line::Column(lam), Part::B1) => lam - 1,
        (Line::Column(lam), Part::B2) => (lam - 2).max(0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// Bound on `Σ |term|` over every term not summed; infinite until the bound applies.
    pub tail_bound: f64,
    pub converged: bool,
}

/// What to sum along a line: `Σ_j w(j)·part(j)^power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeriesSpec {
    pub line: Line,
    pub part: Part,
    pub power: u32,
    pub weight: Weight,
}

pub const DEFAULT_MAX_TERMS: usize = 200_000;

/// Sums until the tail bound falls to `tol / 10`.
///
/// Past the running index `J`, term `j+1` is at most `R·(term bound at j)` with
/// `R = w-ratio · ρ^power · (J/(J−d))^power`, `d` the polynomial degree, because each
/// binomial `C(j−1, r)` with `r <= d` grows by at most `j/(j−d)`. Once `R < 1` the tail is
/// at most `F(J)·R/(1−R)`.
pub fn sum_series(spec: SeriesSpec, mass: f64, tol: f64, max_terms: usize) -> Result<SeriesResult> {
    if !mass.is_finite() || mass <= 0.0 {
        return Err(Error::Massless);
    }
    if spec.power == 0 || tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("series needs power >= 1 and tol > 0".into()));
    }
    if matches!(spec.line, Line::Column(_)) && spec.weight == Weight::Inverse {
        return Err(Error::InvalidArgument("the 1/j weight is undefined at mu = 0".into()));
    }
    let d = running_degree(spec.line, spec.part);
    let rho_p = (1.0 + mass * mass).powf(-0.5 * spec.power as f64);
    let mut value = 0.0;
    let mut tail_bound = f64::INFINITY;
    let mut terms_used = 0;
    for b in RotatedStream::new(spec.line, mass)?.take(max_terms) {
        let (j, lam, mu) = match spec.line {
            Line::Row(_) => (b.lam, b.lam, b.mu_row),
            Line::Column(_) => (b.mu_row, b.lam, b.mu_row),
        };
        let x = match spec.part {
            Part::B1 => b.b1,
            Part::B2 => b.b2,
        };
        value += spec.weight.at(j) * x.powi(spec.power as i32);
        terms_used += 1;
        if j <= d.max(0) || mu < 1 || lam < 1 {
            continue;
        }
        let growth = j as f64 / (j - d) as f64;
        let ratio = spec.weight.ratio_from(j) * rho_p * growth.powi(spec.power as i32);
        if ratio >= 1.0 {
            continue;
        }
        let term_bound = spec.weight.at(j) * amplitude_bound(lam, mu, spec.part, mass).powi(spec.power as i32);
        tail_bound = term_bound * ratio / (1.0 - ratio);
        if tail_bound <= tol / 10.0 {
            return Ok(SeriesResult { value, terms_used, tail_bound, converged: true });
        }
    }
    Ok(SeriesResult { value, terms_used, tail_bound, converged: false })
}

fn require_mass(mass: &MassParam) -> Result<f64> {
    let m = mass.to_f64();
    if m > 0.0 {
        Ok(m)
    } else {
        Err(Error::Massless)
    }
}

/// `(Σ_lam b1(lam, mu), Σ_lam b2(lam, mu))` for `mu >= 1`.
pub fn rotated_row_sum(mu_row: i64, mass: &MassParam, tol: f64) -> Result<(SeriesResult, SeriesResult)> {
    if mu_row < 1 {
        return Err(Error::InvalidArgument(format!("row sums need mu >= 1, got {mu_row}")));
    }
    let m = require_mass(mass)?;
    let spec = |part| SeriesSpec { line: Line::Row(mu_row), part, power: 1, weight: Weight::One };
    Ok((sum_series(spec(Part::B1), m, tol, DEFAULT_MAX_TERMS)?, sum_series(spec(Part::B2), m, tol, DEFAULT_MAX_TERMS)?))
}

/// `(Σ_mu b1(lam, mu), Σ_mu b2(lam, mu))` for `lam >= 1`.
pub fn rotated_col_sum(lam: i64, mass: &MassParam, tol: f64) -> Result<(SeriesResult, SeriesResult)> {
    if lam < 1 {
        return Err(Error::InvalidArgument(format!("column sums need lam >= 1, got {lam}")));
    }
    let m = require_mass(mass)?;
    let spec = |part| SeriesSpec { line: Line::Column(lam), part, power: 1, weight: Weight::One };
    Ok((sum_series(spec(Part::B1), m, tol, DEFAULT_MAX_TERMS)?, sum_series(spec(Part::B2), m, tol, DEFAULT_MAX_TERMS)?))
}

fn sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Limits of the row sums: `(−1)^(mu+1)(1+√(m²+1))/m` and `(−1)^mu(2+m²+2√(m²+1))/m²`.
pub fn row_sum_targets(mu_row: i64, m: f64) -> (f64, f64) {
    let s = (m * m + 1.0).sqrt();
    (sign(mu_row + 1) * (1.0 + s) / m, sign(mu_row) * (2.0 + m * m + 2.0 * s) / (m * m))
}

/// Limits of the column sums: `(−1)^(lam+1)(1+√(m²+1))/m` and `(−1)^(lam+1)`.
pub fn col_sum_targets(lam: i64, m: f64) -> (f64, f64) {
    let s = (m * m + 1.0).sqrt();
    (sign(lam + 1) * (1.0 + s) / m, sign(lam + 1))
}

/// `Σ part²` along a line. Each of row-`b1`, column-`b1` and column-`b2` sums to 1.
pub fn quadratic_sums(line: Line, part: Part, mass: &MassParam, tol: f64) -> Result<SeriesResult> {
    match line {
        Line::Row(mu) if mu < 1 => return Err(Error::InvalidArgument(format!("row sums need mu >= 1, got {mu}"))),
        Line::Column(lam) if lam < 1 => {
            return Err(Error::InvalidArgument(format!("column sums need lam >= 1, got {lam}")))
        }
        _ => {}
    }
    let m = require_mass(mass)?;
    sum_series(SeriesSpec { line, part, power: 2, weight: Weight::One }, m, tol, DEFAULT_MAX_TERMS)
}
