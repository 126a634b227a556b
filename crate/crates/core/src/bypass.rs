//! Amplitudes over checker paths that avoid a finite set of absorbing sites.
//!
//! `a(s bypass T)` sums only paths whose points, other than the endpoint, stay out of `T`.
//! Propagation records what arrives at each site of `T` and then zeroes it, so paths may
//! end on `T` but never pass through it. When every infinite path is eventually absorbed,
//! the absorbed probabilities add up to exactly 1.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::amplitude::walk::{FloatKernel, ReachKernel, Row, ScaledKernel, Walk};
use crate::amplitude::{exact::exact_row_from_parts, Amplitude, Evaluated, ExactAmplitude};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::lattice::{RotatedSite, Site};
use crate::mass::{Limits, MassParam, Mode};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BypassSet {
    members: HashSet<Site>,
    by_tau: BTreeMap<i64, Vec<i64>>,
}

impl BypassSet {
    pub fn new(sites: impl IntoIterator<Item = Site>) -> Self {
        let mut set = BypassSet::default();
        for s in sites {
            if set.members.insert(s) {
                set.by_tau.entry(s.tau()).or_default().push(s.n());
            }
        }
        for ns in set.by_tau.values_mut() {
            ns.sort_unstable();
        }
        set
    }

    pub fn contains(&self, site: Site) -> bool {
        self.members.contains(&site)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn max_tau(&self) -> Option<i64> {
        self.by_tau.keys().next_back().copied()
    }

    /// Members ordered by time, then position.
    pub fn iter(&self) -> impl Iterator<Item = Site> + '_ {
        self.by_tau
            .iter()
            .flat_map(|(&tau, ns)| ns.iter().map(move |&n| Site::new(n, tau).expect("validated on insert")))
    }

    pub(crate) fn positions_at(&self, tau: i64) -> impl Iterator<Item = i64> + '_ {
        self.by_tau.get(&tau).into_iter().flatten().copied()
    }

    pub fn without(&self, site: Site) -> BypassSet {
        BypassSet::new(self.iter().filter(|&s| s != site))
    }

    /// Parses a JSON array of `[n, tau]` pairs.
    pub fn from_json_str(text: &str) -> Result<BypassSet> {
        let pairs: Vec<(i64, i64)> =
            serde_json::from_str(text).map_err(|e| Error::MalformedBypass(e.to_string()))?;
        let mut sites = Vec::with_capacity(pairs.len());
        for (n, tau) in pairs {
            if (n, tau) == (0, 0) {
                return Err(Error::OriginInBypass);
            }
            let site = Site::new(n, tau)
                .map_err(|_| Error::MalformedBypass(format!("[{n}, {tau}] has tau < 1")))?;
            sites.push(site);
        }
        Ok(BypassSet::new(sites))
    }

    pub fn to_json_string(&self) -> String {
        let pairs: Vec<(i64, i64)> = self.iter().map(Into::into).collect();
        serde_json::to_string(&pairs).expect("pairs of integers always serialize")
    }

    /// Every reachable site at time `tau`.
    pub fn full_row(tau: i64) -> Result<BypassSet> {
        Site::new(tau, tau)?;
        Ok(BypassSet::new((0..tau).map(|j| Site::new(2 * j + 2 - tau, tau).unwrap())))
    }

    /// The set `S ∪ T` for fixed `mu_hat`: the row segment `{(lam, mu_hat) : 1 <= lam <= n}`
    /// plus the capping diagonal `{(lam, mu) : mu < mu_hat, lam + mu = n + mu_hat}`,
    /// in rotated coordinates.
    pub fn row_cap(n: i64, mu_hat: i64) -> Result<BypassSet> {
        if n < 1 || mu_hat < 1 {
            return Err(Error::InvalidArgument(format!(
                "row cap needs n >= 1 and mu_hat >= 1, got n={n}, mu_hat={mu_hat}"
            )));
        }
        let segment = (1..=n).map(|lam| RotatedSite { lam, mu_row: mu_hat });
        let cap = (0..mu_hat).map(|mu| RotatedSite { lam: n + mu_hat - mu, mu_row: mu });
        Ok(BypassSet::new(segment.chain(cap).map(RotatedSite::to_site)))
    }

    /// A connected chain in rotated coordinates from `(start_lam, 0)` to `lam = 1`.
    /// Monotone paths cannot slip between neighbouring cells, so the chain is blocking.
    pub fn staircase(start_lam: i64, steps: &[StairStep]) -> Result<BypassSet> {
        if start_lam < 1 {
            return Err(Error::InvalidArgument("staircase must start at lam >= 1".into()));
        }
        let (mut lam, mut mu) = (start_lam, 0);
        let mut cells = vec![RotatedSite { lam, mu_row: mu }];
        for step in steps {
            match step {
                StairStep::Left => lam -= 1,
                StairStep::Up => mu += 1,
                StairStep::Diagonal => {
                    lam -= 1;
                    mu += 1;
                }
            }
            if lam < 1 {
                return Err(Error::InvalidArgument("staircase steps past lam = 1".into()));
            }
            cells.push(RotatedSite { lam, mu_row: mu });
        }
        if lam != 1 {
            return Err(Error::InvalidArgument(format!("staircase ends at lam = {lam}, not 1")));
        }
        Ok(BypassSet::new(cells.into_iter().map(RotatedSite::to_site)))
    }

    /// Staircase whose steps are the base-3 digits of `code`, least significant first
    /// (`0` left, `1` up, `2` diagonal), finished with diagonal steps down to `lam = 1`.
    /// Digits that would step past `lam = 1` end the staircase early.
    pub fn staircase_from_code(start_lam: i64, mut code: u64) -> Result<BypassSet> {
        let mut steps = Vec::new();
        let mut lam = start_lam;
        while code > 0 && lam > 1 {
            let step = match code % 3 {
                0 => StairStep::Left,
                1 => StairStep::Up,
                _ => StairStep::Diagonal,
            };
            if step != StairStep::Up {
                lam -= 1;
            }
            steps.push(step);
            code /= 3;
        }
        while lam > 1 {
            steps.push(StairStep::Diagonal);
            lam -= 1;
        }
        BypassSet::staircase(start_lam, &steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StairStep {
    Left,
    Up,
    Diagonal,
}

/// Bypass amplitude at `site`.
///
/// If `site` is itself in the set, `exclude_endpoint` selects `a(site bypass T∖{site})`
/// (the arrival amplitude); otherwise the value is zero because every path ends on `T`.
pub fn amplitude_bypass(
    site: Site,
    set: &BypassSet,
    mass: &MassParam,
    mode: Mode,
    exclude_endpoint: bool,
    limits: &Limits,
) -> Result<Evaluated> {
    limits.check(mode, site.tau())?;
    let blocked = set.contains(site) && !exclude_endpoint;
    let k = (site.tau() - 1) as u32;
    match mode {
        Mode::Exact => {
            let m = mass.as_rational()?;
            if blocked {
                return Ok(Evaluated::Exact(ExactAmplitude::zero(k)));
            }
            let row = nth_row(Walk::new(scaled(m), Some(set)), site.tau());
            Ok(Evaluated::Exact(exact_row_from_parts(m, row).amplitude(site.n())))
        }
        Mode::Float => {
            if blocked {
                return Ok(Evaluated::Float(Amplitude::default()));
            }
            let row = nth_row(Walk::new(FloatKernel::new(mass.to_f64()), Some(set)), site.tau());
            let (a1, a2) = row.get(site.n()).copied().unwrap_or((0.0, 0.0));
            Ok(Evaluated::Float(Amplitude { a1, a2 }))
        }
    }
}

fn scaled(mass: &Rational) -> ScaledKernel {
    ScaledKernel { p: mass.numer().clone(), q: mass.denom().clone() }
}

fn nth_row<V>(mut walk: impl Iterator<Item = Row<V>>, tau: i64) -> Row<V> {
    walk.nth(tau as usize - 1).expect("walk is unbounded")
}

/// True when no checker path from the origin avoids `set` forever.
///
/// Decided by running reachability with absorption one row past the latest member:
/// the set blocks exactly when nothing survives there. `horizon` must cover the set.
pub fn blocking_check(set: &BypassSet, horizon: i64) -> Result<bool> {
    let Some(max_tau) = set.max_tau() else {
        return Ok(false);
    };
    if max_tau > horizon {
        return Err(Error::LimitExceeded { kind: "blocking-check horizon", tau: max_tau, limit: horizon });
    }
    let after = nth_row(Walk::new(ReachKernel, Some(set)), max_tau + 1);
    Ok(after.cells.iter().all(|&(l, r)| !l && !r))
}

/// Arrival amplitude `a(s bypass T∖{s})` at each member `s`, ordered by time then position.
pub fn absorbed_exact(set: &BypassSet, mass: &Rational, limits: &Limits) -> Result<Vec<(Site, ExactAmplitude)>> {
    let Some(max_tau) = set.max_tau() else {
        return Ok(Vec::new());
    };
    limits.check(Mode::Exact, max_tau)?;
    let mut out = Vec::with_capacity(set.len());
    for row in Walk::new(scaled(mass), Some(set)).take(max_tau as usize) {
        let tau = row.tau;
        let row = exact_row_from_parts(mass, row);
        for n in set.positions_at(tau) {
            out.push((Site::new(n, tau)?, row.amplitude(n)));
        }
    }
    Ok(out)
}

pub fn absorbed_float(set: &BypassSet, mass: f64, limits: &Limits) -> Result<Vec<(Site, Amplitude)>> {
    let Some(max_tau) = set.max_tau() else {
        return Ok(Vec::new());
    };
    limits.check(Mode::Float, max_tau)?;
    let mut out = Vec::with_capacity(set.len());
    for row in Walk::new(FloatKernel::new(mass), Some(set)).take(max_tau as usize) {
        for n in set.positions_at(row.tau) {
            let (a1, a2) = row.get(n).copied().unwrap_or((0.0, 0.0));
            out.push((Site::new(n, row.tau)?, Amplitude { a1, a2 }));
        }
    }
    Ok(out)
}

/// `Σ_{s∈T} P(s bypass T∖{s})`, exactly; equals 1 for every blocking set.
pub fn conservation_bypass(set: &BypassSet, mass: &Rational, limits: &Limits) -> Result<Rational> {
    if !blocking_check(set, limits.exact_tau_max)? {
        return Err(Error::NonBlocking);
    }
    let max_tau = set.max_tau().expect("blocking sets are nonempty");
    limits.check(Mode::Exact, max_tau)?;
    let mut total = Rational::zero();
    for row in Walk::new(scaled(mass), Some(set)).take(max_tau as usize) {
        let tau = row.tau;
        let row = exact_row_from_parts(mass, row);
        let numer: BigInt = set
            .positions_at(tau)
            .filter_map(|n| row.numerator(n))
            .map(|(a, b)| a * a + b * b)
            .sum();
        total += Rational::new(numer, row.prob_denominator());
    }
    Ok(total)
}

pub fn conservation_bypass_float(set: &BypassSet, mass: f64, limits: &Limits) -> Result<f64> {
    if !blocking_check(set, limits.float_tau_max)? {
        return Err(Error::NonBlocking);
    }
    Ok(absorbed_float(set, mass, limits)?.iter().map(|(_, a)| a.prob()).sum())
}

/// Current `j` carried by the lattice edge `from → to`.
///
/// An up-right edge carries `a2(to bypass T∖{to})²`, an up-left edge `a1(to bypass T∖{to})²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeFlux {
    pub from: (i64, i64),
    pub to: (i64, i64),
    #[serde(serialize_with = "serialize_rational")]
    pub j: Rational,
}

/// A vertex where inflow and outflow disagree. The origin is reported as a source of
/// unit inflow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FluxViolation {
    pub at: (i64, i64),
    #[serde(serialize_with = "serialize_rational")]
    pub inflow: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub outflow: Rational,
}

fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Currents on every edge that ends at a reachable site with `tau <= tau_max`.
pub fn edge_fluxes(tau_max: i64, set: &BypassSet, mass: &Rational, limits: &Limits) -> Result<Vec<EdgeFlux>> {
    limits.check(Mode::Exact, tau_max)?;
    let mut out = Vec::new();
    for row in Walk::new(scaled(mass), Some(set)).take(tau_max.max(0) as usize) {
        let tau = row.tau;
        let row = exact_row_from_parts(mass, row);
        let den = row.prob_denominator();
        for (j, (n1, n2)) in row.numerators().iter().enumerate() {
            let n = 2 * j as i64 + 2 - tau;
            out.push(EdgeFlux { from: (n - 1, tau - 1), to: (n, tau), j: Rational::new(n2 * n2, den.clone()) });
            out.push(EdgeFlux { from: (n + 1, tau - 1), to: (n, tau), j: Rational::new(n1 * n1, den.clone()) });
        }
    }
    Ok(out)
}

/// Checks that current into each vertex outside the set equals current out of it, for
/// `1 <= tau < tau_max`, and that the edge leaving the origin carries exactly 1.
/// Returns the vertices where the balance fails.
pub fn kirchhoff_check(tau_max: i64, set: &BypassSet, mass: &Rational, limits: &Limits) -> Result<Vec<FluxViolation>> {
    let fluxes = edge_fluxes(tau_max, set, mass, limits)?;
    let mut inflow: HashMap<(i64, i64), Rational> = HashMap::new();
    let mut outflow: HashMap<(i64, i64), Rational> = HashMap::new();
    for e in &fluxes {
        *inflow.entry(e.to).or_insert_with(Rational::zero) += &e.j;
        *outflow.entry(e.from).or_insert_with(Rational::zero) += &e.j;
    }

    let mut violations = Vec::new();
    let origin_out = outflow.get(&(0, 0)).cloned().unwrap_or_else(Rational::zero);
    if tau_max >= 1 && !origin_out.is_one() {
        violations.push(FluxViolation { at: (0, 0), inflow: Rational::one(), outflow: origin_out });
    }
    for tau in 1..tau_max {
        for j in 0..tau {
            let n = 2 * j + 2 - tau;
            let site = Site::new(n, tau)?;
            if set.contains(site) {
                continue;
            }
            let i = inflow.get(&(n, tau)).cloned().unwrap_or_else(Rational::zero);
            let o = outflow.get(&(n, tau)).cloned().unwrap_or_else(Rational::zero);
            if i != o {
                violations.push(FluxViolation { at: (n, tau), inflow: i, outflow: o });
            }
        }
    }
    Ok(violations)
}

/// `(p² + q²)^k`, exposed for callers that batch probabilities by row.
#[allow(dead_code)]
pub(crate) fn prob_denominator(mass: &Rational, k: u32) -> BigInt {
    let (p, q) = (mass.numer(), mass.denom());
    Pow::pow(&(p * p + q * q), k)
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

    fn set(pairs: &[(i64, i64)]) -> BypassSet {
        BypassSet::new(pairs.iter().map(|&(n, t)| site(n, t)))
    }

    #[test]
    fn bypass_example_at_origin() {
        // dropping the path through (2,2) leaves turns 2 and 3: i((-im)² + (-im)³) = -m³ - m²i,
        // so P = m⁴/(1+m²)²
        let t = set(&[(2, 2)]);
        for m in [q(1, 1), q(1, 2), q(3, 7)] {
            let mp = MassParam::rational(m.clone()).unwrap();
            let Evaluated::Exact(a) =
                amplitude_bypass(site(0, 4), &t, &mp, Mode::Exact, true, &Limits::default()).unwrap()
            else {
                panic!()
            };
            let m2 = &m * &m;
            assert_eq!(a.a1, -(&m2 * &m));
            assert_eq!(a.a2, -m2.clone());
            let one_plus = q(1, 1) + &m2;
            assert_eq!(a.prob(&m), &m2 * &m2 / (&one_plus * &one_plus));
        }
    }

    #[test]
    fn endpoint_flag() {
        let t = set(&[(2, 2)]);
        let m = MassParam::ratio(1, 1).unwrap();
        let l = Limits::default();
        let inc = amplitude_bypass(site(2, 2), &t, &m, Mode::Exact, false, &l).unwrap();
        assert_eq!(inc, Evaluated::Exact(ExactAmplitude::zero(1)));
        let exc = amplitude_bypass(site(2, 2), &t, &m, Mode::Exact, true, &l).unwrap();
        assert_eq!(exc, Evaluated::Exact(ExactAmplitude { a1: q(0, 1), a2: q(1, 1), k: 1 }));
    }

    #[test]
    fn blocking_examples() {
        assert!(blocking_check(&BypassSet::full_row(5).unwrap(), 100).unwrap());
        assert!(!blocking_check(&set(&[(2, 2)]), 100).unwrap());
        assert!(blocking_check(&BypassSet::row_cap(2, 1).unwrap(), 100).unwrap());
        assert!(!blocking_check(&BypassSet::default(), 100).unwrap());
        assert!(blocking_check(&BypassSet::full_row(5).unwrap(), 3).is_err());
        // the right edge alone never stops paths that turn
        assert!(!blocking_check(&set(&[(3, 3)]), 100).unwrap());
        // both first-row cells of time 2
        assert!(blocking_check(&set(&[(0, 2), (2, 2)]), 100).unwrap());
    }

    #[test]
    fn row_cap_shape() {
        // n=2, mu_hat=1: segment (1,1),(2,1) -> sites (0,2),(1,3); cap (3,0) -> (3,3)
        assert_eq!(BypassSet::row_cap(2, 1).unwrap(), set(&[(0, 2), (1, 3), (3, 3)]));
        assert!(BypassSet::row_cap(0, 1).is_err());
    }

    #[test]
    fn conservation_full_rows() {
        for tau in [1, 4, 7] {
            let total = conservation_bypass(&BypassSet::full_row(tau).unwrap(), &q(3, 7), &Limits::default()).unwrap();
            assert_eq!(total, q(1, 1));
        }
    }

    #[test]
    fn conservation_rejects_non_blocking() {
        assert_eq!(
            conservation_bypass(&set(&[(2, 2)]), &q(1, 1), &Limits::default()),
            Err(Error::NonBlocking)
        );
    }

    #[test]
    fn staircase_construction() {
        use StairStep::*;
        let s = BypassSet::staircase(3, &[Diagonal, Up, Left]).unwrap();
        assert!(blocking_check(&s, 100).unwrap());
        assert_eq!(conservation_bypass(&s, &q(1, 1), &Limits::default()).unwrap(), q(1, 1));
        assert!(BypassSet::staircase(2, &[Left, Left]).is_err());
        assert!(BypassSet::staircase(3, &[Left]).is_err());
        for code in [0, 1, 5, 80, 12345] {
            let s = BypassSet::staircase_from_code(4, code).unwrap();
            assert!(blocking_check(&s, 100).unwrap(), "code {code}");
        }
        assert_eq!(BypassSet::staircase_from_code(1, 7).unwrap(), set(&[(1, 1)]));
    }

    #[test]
    fn kirchhoff_empty_and_single() {
        let l = Limits::default();
        assert!(kirchhoff_check(20, &BypassSet::default(), &q(1, 1), &l).unwrap().is_empty());
        assert!(kirchhoff_check(10, &set(&[(2, 2)]), &q(1, 1), &l).unwrap().is_empty());
        let fluxes = edge_fluxes(1, &BypassSet::default(), &q(1, 1), &l).unwrap();
        let seed = fluxes.iter().find(|e| e.from == (0, 0)).unwrap();
        assert_eq!(seed.j, q(1, 1));
    }

    #[test]
    fn kirchhoff_flags_tampered_flux() {
        // absorbing vertices themselves are exempt, but their outflow is zero, so a check
        // that wrongly included them would fire
        let t = set(&[(0, 2)]);
        let l = Limits::default();
        let fluxes = edge_fluxes(4, &t, &q(1, 1), &l).unwrap();
        let out_of_absorber: Rational = fluxes.iter().filter(|e| e.from == (0, 2)).map(|e| e.j.clone()).sum();
        assert!(out_of_absorber.is_zero());
        assert!(kirchhoff_check(4, &t, &q(1, 1), &l).unwrap().is_empty());
    }

    #[test]
    fn json_format() {
        let t = BypassSet::from_json_str("[[2,2],[0,4],[2,2]]").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.to_json_string(), "[[2,2],[0,4]]");
        assert_eq!(BypassSet::from_json_str("[[0,0]]"), Err(Error::OriginInBypass));
        assert!(matches!(BypassSet::from_json_str("[[1,0]]"), Err(Error::MalformedBypass(_))));
        assert!(matches!(BypassSet::from_json_str("{\"a\":1}"), Err(Error::MalformedBypass(_))));
        assert!(matches!(BypassSet::from_json_str("[[1,2,3]]"), Err(Error::MalformedBypass(_))));
        assert!(BypassSet::from_json_str("[]").unwrap().is_empty());
    }

    #[test]
    fn float_absorption_matches_exact() {
        let t = BypassSet::row_cap(3, 2).unwrap();
        let l = Limits::default();
        let exact = absorbed_exact(&t, &q(1, 2), &l).unwrap();
        let float = absorbed_float(&t, 0.5, &l).unwrap();
        for ((s1, a), (s2, b)) in exact.iter().zip(&float) {
            assert_eq!(s1, s2);
            let af = a.to_float(&q(1, 2));
            assert!((af.a1 - b.a1).abs() < 1e-14 && (af.a2 - b.a2).abs() < 1e-14);
        }
        let total = conservation_bypass_float(&t, 0.5, &l).unwrap();
        assert!((total - 1.0).abs() < 1e-14);
    }
}
