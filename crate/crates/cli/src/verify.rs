use checkers_core::amplitude::{ExactRows, FloatRows};
use checkers_core::bypass::{blocking_check, conservation_bypass, kirchhoff_check, BypassSet};
use checkers_core::identities::{
    col_sum_targets, linear_identity_float, linear_identity_row, quadratic_sums, rotated_col_sum, rotated_row_sum,
    row_sum_targets, Line, Part,
};
use checkers_core::statistics::{
    avg_velocity_series, central_binomial_series, ct_report, flea_velocity_check, nonzero_scan, row_total_exact,
    velocity_identity_series,
};
use checkers_core::{Error, Limits, MassParam, Rational};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::output::{emit, pretty};
use crate::{Failure, Suite, VerifyArgs};

#[derive(Debug, Serialize)]
struct Check {
    suite: &'static str,
    name: String,
    parameters: String,
    passed: bool,
    detail: String,
}

struct Ctx<'a> {
    args: &'a VerifyArgs,
    limits: &'a Limits,
    checks: Vec<Check>,
}

impl Ctx<'_> {
    fn tau_max(&self, default: i64) -> i64 {
        self.args.tau_max.unwrap_or(default)
    }

    fn masses(&self, default: &[(i64, i64)]) -> Vec<MassParam> {
        if self.args.mass.is_empty() {
            default.iter().map(|&(p, q)| MassParam::ratio(p, q).expect("valid default mass")).collect()
        } else {
            self.args.mass.clone()
        }
    }

    fn record(&mut self, suite: &'static str, name: &str, parameters: String, failure: Option<String>, ok_detail: String) {
        self.checks.push(Check {
            suite,
            name: name.to_string(),
            parameters,
            passed: failure.is_none(),
            detail: failure.unwrap_or(ok_detail),
        });
    }
}

const SUITES: [Suite; 8] = [
    Suite::Conservation,
    Suite::Nonzero,
    Suite::Velocity,
    Suite::Symmetry,
    Suite::Series,
    Suite::Bypass,
    Suite::Linear,
    Suite::Quadratic,
];

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Conservation => "conservation",
        Suite::Nonzero => "nonzero",
        Suite::Velocity => "velocity",
        Suite::Symmetry => "symmetry",
        Suite::Series => "series",
        Suite::Bypass => "bypass",
        Suite::Linear => "linear",
        Suite::Quadratic => "quadratic",
        Suite::All => "all",
    }
}

pub fn run(args: &VerifyArgs, limits: &Limits) -> Result<(), Failure> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure::usage("--tol must be positive"));
    }
    if args.tau_max.is_some_and(|t| t < 1) {
        return Err(Failure::usage("--tau-max must be at least 1"));
    }
    let mut ctx = Ctx { args, limits, checks: Vec::new() };
    let suites: Vec<Suite> = if args.suite == Suite::All { SUITES.to_vec() } else { vec![args.suite] };
    for s in suites {
        match s {
            Suite::Conservation => conservation(&mut ctx)?,
            Suite::Nonzero => nonzero(&mut ctx)?,
            Suite::Velocity => velocity(&mut ctx)?,
            Suite::Symmetry => symmetry(&mut ctx)?,
            Suite::Series => series(&mut ctx)?,
            Suite::Bypass => bypass(&mut ctx)?,
            Suite::Linear => linear(&mut ctx)?,
            Suite::Quadratic => quadratic(&mut ctx)?,
            Suite::All => unreachable!("expanded above"),
        }
    }
    let failed = ctx.checks.iter().filter(|c| !c.passed).count();
    let summary = json!({
        "suite": suite_name(args.suite),
        "passed": failed == 0,
        "failed": failed,
        "checks": ctx.checks,
    });
    emit(args.output.as_deref(), &pretty(&summary))?;
    if failed > 0 {
        return Err(Failure { code: 1, message: format!("{failed} check(s) failed") });
    }
    Ok(())
}

fn conservation(ctx: &mut Ctx) -> Result<(), Failure> {
    let tau_max = ctx.tau_max(200);
    for mass in ctx.masses(&[(1, 1), (1, 2), (3, 7)]) {
        let failure = match &mass {
            MassParam::Rational(m) => {
                ctx.limits.check(checkers_core::Mode::Exact, tau_max)?;
                ExactRows::new(m)
                    .take(tau_max as usize)
                    .find(|row| !row_total_exact(row).is_one())
                    .map(|row| format!("row total at tau={} is {}", row.tau(), row_total_exact(&row)))
            }
            MassParam::Float(m) => {
                ctx.limits.check(checkers_core::Mode::Float, tau_max)?;
                let tol = ctx.args.tol;
                FloatRows::new(*m).take(tau_max as usize).find_map(|row| {
                    let total: f64 = row.iter().map(|(_, a)| a.prob()).sum();
                    ((total - 1.0).abs() > tol).then(|| format!("row total at tau={} is {total}", row.tau()))
                })
            }
        };
        ctx.record(
            "conservation",
            "row totals equal 1",
            format!("tau<={tau_max};m={mass}"),
            failure,
            format!("{tau_max} rows"),
        );
    }
    Ok(())
}

fn nonzero(ctx: &mut Ctx) -> Result<(), Failure> {
    let tau_max = ctx.tau_max(60);
    for mass in ctx.masses(&[(1, 1), (1, 2), (2, 1), (3, 7)]) {
        let zeros = nonzero_scan(tau_max, mass.as_rational()?, ctx.limits)?;
        let failure = (!zeros.is_empty()).then(|| {
            let shown: Vec<String> = zeros.iter().take(5).map(|s| s.to_string()).collect();
            format!("{} interior sites with P = 0, first {}", zeros.len(), shown.join(" "))
        });
        ctx.record(
            "nonzero",
            "P > 0 strictly inside the light cone",
            format!("tau<={tau_max};m={mass}"),
            failure,
            "0 zero-probability interior sites".into(),
        );
    }
    Ok(())
}

fn velocity(ctx: &mut Ctx) -> Result<(), Failure> {
    let tau_max = ctx.tau_max(100);
    for mass in ctx.masses(&[(1, 1), (1, 2), (3, 7)]) {
        let series = velocity_identity_series(tau_max, mass.as_rational()?, ctx.limits)?;
        let failure = series
            .iter()
            .position(|r| !r.equal)
            .map(|i| format!("E(v_T) != mean of E(u_t) at T={}", i + 1));
        ctx.record(
            "velocity",
            "E(v_T) equals the time average of E(u_t)",
            format!("T<={tau_max};m={mass}"),
            failure,
            format!("exact equality for {tau_max} values of T"),
        );
        let one = Rational::one();
        let failure = series
            .iter()
            .position(|r| r.lhs > one || r.lhs < -one.clone())
            .map(|i| format!("|E(v_T)| > 1 at T={}", i + 1));
        ctx.record("velocity", "|E(v_T)| <= 1", format!("T<={tau_max};m={mass}"), failure, "bound holds".into());
    }

    for (p, q) in [(1, 2), (2, 3), (1, 1)] {
        let prob = Rational::new(p.into(), q.into());
        let mut failure = None;
        for t in 1..=tau_max.min(200) {
            let (mean, expected) = flea_velocity_check(t, &prob)?;
            if mean != expected {
                failure = Some(format!("mean {mean} != {expected} at T={t}"));
                break;
            }
        }
        ctx.record(
            "velocity",
            "flea: E(v_T) = p - q",
            format!("T<={};p={prob}", tau_max.min(200)),
            failure,
            "exact equality".into(),
        );
    }

    // O(1/T) approach to the limit at unit mass: constant fitted on [100, 200], checked on [201, 2000]
    let series = avg_velocity_series(2000, 1.0, ctx.limits)?;
    let limit = 1.0 - 0.5f64.sqrt();
    let scaled = |t: usize| (series[t - 1] - limit).abs() * t as f64;
    let c = (100..=200).map(scaled).fold(0.0, f64::max);
    let failure = (201..=2000).find(|&t| scaled(t) > c).map(|t| format!("T*|delta| = {} > C = {c} at T={t}", scaled(t)));
    ctx.record(
        "velocity",
        "|E(v_T) - (1 - 1/sqrt2)| <= C/T",
        "T in [201,2000];m=1".into(),
        failure,
        format!("C = {c:.6}"),
    );
    Ok(())
}

fn symmetry(ctx: &mut Ctx) -> Result<(), Failure> {
    let tau_max = ctx.tau_max(60);
    for mass in ctx.masses(&[(1, 1), (1, 2), (2, 1), (3, 7)]) {
        let m = mass.as_rational()?;
        ctx.limits.check(checkers_core::Mode::Exact, tau_max)?;
        let failure = ExactRows::new(m).take(tau_max as usize).find_map(|row| {
            let bad = row.symmetry_violations();
            (!bad.is_empty()).then(|| format!("fails at tau={} n={:?}", row.tau(), bad))
        });
        ctx.record(
            "symmetry",
            "a1(n) = a1(-n) and (tau-n) a2(n) = (tau+n-2) a2(2-n)",
            format!("tau<={tau_max};m={mass}"),
            failure,
            format!("{tau_max} rows"),
        );
    }
    Ok(())
}

fn series(ctx: &mut Ctx) -> Result<(), Failure> {
    if ctx.args.mass.iter().any(|m| m.as_rational().map(|r| !r.is_one()).unwrap_or(true)) {
        return Err(Error::MassNotOne.into());
    }
    let tau_max = ctx.tau_max(400);
    let report = ct_report(tau_max, ctx.limits)?;
    let failure = (1..=tau_max).find_map(|t| {
        let s = report.sum_at(t);
        let series = central_binomial_series(t);
        (*s != series).then(|| format!("sum a1^2 = {s} but series = {series} at t={t}"))
    });
    ctx.record(
        "series",
        "sum a1^2 = 1/2 sum (-1/4)^k C(2k,k)",
        format!("t<={tau_max};m=1"),
        failure,
        "exact equality".into(),
    );
    for fact in &report.facts {
        ctx.record(
            "series",
            fact.name,
            format!("t<={tau_max};m=1"),
            fact.first_failure.map(|t| format!("fails at t={t}")),
            "holds".into(),
        );
    }
    Ok(())
}

fn blocking_families(seed: u64) -> Vec<(String, Vec<BypassSet>)> {
    let rows = [3, 5, 10].iter().map(|&t| BypassSet::full_row(t).expect("valid row")).collect();
    let caps = (1..=5)
        .flat_map(|n| (1..=3).map(move |mu| BypassSet::row_cap(n, mu).expect("valid cap")))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stairs = (0..20)
        .map(|_| {
            let start = rng.gen_range(1..=6);
            let code = rng.gen_range(0..3u64.pow(10));
            BypassSet::staircase_from_code(start, code).expect("valid staircase")
        })
        .collect();
    vec![("full rows".into(), rows), ("row caps".into(), caps), ("random staircases".into(), stairs)]
}

fn bypass(ctx: &mut Ctx) -> Result<(), Failure> {
    let tau_max = ctx.tau_max(20);
    let families = blocking_families(2024);
    for mass in ctx.masses(&[(1, 1), (3, 7)]) {
        let m = mass.as_rational()?;
        for (family, sets) in &families {
            let mut failure = None;
            for set in sets {
                if !blocking_check(set, ctx.limits.exact_tau_max)? {
                    failure = Some(format!("{} is not blocking", set.to_json_string()));
                    break;
                }
                let total = conservation_bypass(set, m, ctx.limits)?;
                if !total.is_one() {
                    failure = Some(format!("absorbed total {total} for {}", set.to_json_string()));
                    break;
                }
            }
            ctx.record(
                "bypass",
                "absorbed probabilities sum to 1",
                format!("{family};m={mass}"),
                failure,
                format!("{} sets", sets.len()),
            );

            let mut failure = None;
            for set in sets {
                let violations = kirchhoff_check(tau_max, set, m, ctx.limits)?;
                if let Some(v) = violations.first() {
                    failure = Some(format!(
                        "inflow {} != outflow {} at {:?} for {}",
                        v.inflow,
                        v.outflow,
                        v.at,
                        set.to_json_string()
                    ));
                    break;
                }
            }
            ctx.record(
                "bypass",
                "current balances at every vertex outside the set",
                format!("{family};tau<={tau_max};m={mass}"),
                failure,
                format!("{} sets", sets.len()),
            );
        }
        let lone = BypassSet::from_json_str("[[2,2]]")?;
        let failure = match conservation_bypass(&lone, m, ctx.limits) {
            Err(Error::NonBlocking) => None,
            other => Some(format!("expected a non-blocking rejection, got {other:?}")),
        };
        ctx.record("bypass", "non-blocking set is rejected", format!("[[2,2]];m={mass}"), failure, "rejected".into());
    }
    Ok(())
}

fn linear(ctx: &mut Ctx) -> Result<(), Failure> {
    let tau_max = ctx.tau_max(200);
    for mass in ctx.masses(&[(1, 1), (1, 2), (3, 7)]) {
        let m = mass.as_rational()?;
        ctx.limits.check(checkers_core::Mode::Exact, tau_max)?;
        let failure = ExactRows::new(m)
            .take(tau_max as usize)
            .map(|row| linear_identity_row(&row))
            .find(|id| !id.holds)
            .map(|id| format!("lhs {} != rhs {} at tau={}", id.lhs, id.rhs, id.tau));
        ctx.record(
            "linear",
            "(sum a2 + i sum a1)(1+m^2)^((tau-1)/2) = (1+im)^(tau-1)",
            format!("tau<={tau_max};m={mass}"),
            failure,
            "exact equality".into(),
        );

        let mut worst = 0.0f64;
        let mut failure = None;
        for tau in 1..=tau_max {
            let c = linear_identity_float(tau, mass.to_f64(), ctx.limits)?;
            worst = worst.max(c.max_abs_diff);
            if c.max_abs_diff > 1e-10 {
                failure = Some(format!("difference {:e} at tau={tau}", c.max_abs_diff));
                break;
            }
        }
        ctx.record(
            "linear",
            "(sum a1, sum a2) = (sin, cos)((tau-1) atan m) within 1e-10",
            format!("tau<={tau_max};m={mass}"),
            failure,
            format!("max difference {worst:e}"),
        );
    }
    Ok(())
}

fn quadratic(ctx: &mut Ctx) -> Result<(), Failure> {
    let max_index = ctx.tau_max(10);
    let tol = ctx.args.tol;
    for mass in ctx.masses(&[(1, 2), (1, 1), (2, 1)]) {
        let m = mass.to_f64();
        let mut sums = Vec::new();
        for k in 1..=max_index {
            let (b1, b2) = rotated_row_sum(k, &mass, tol)?;
            let (t1, t2) = row_sum_targets(k, m);
            sums.push((format!("row sum b1 mu={k}"), b1, t1));
            sums.push((format!("row sum b2 mu={k}"), b2, t2));
            let (b1, b2) = rotated_col_sum(k, &mass, tol)?;
            let (t1, t2) = col_sum_targets(k, m);
            sums.push((format!("column sum b1 lam={k}"), b1, t1));
            sums.push((format!("column sum b2 lam={k}"), b2, t2));
        }
        let failure = sums.iter().find_map(|(what, r, target)| {
            (!r.converged || (r.value - target).abs() > tol)
                .then(|| format!("{what}: {} vs {target} (converged: {})", r.value, r.converged))
        });
        ctx.record(
            "quadratic",
            "row and column sums reach their limits",
            format!("index<={max_index};m={mass};tol={tol:e}"),
            failure,
            format!("{} sums", sums.len()),
        );

        let mut squares = Vec::new();
        for k in 1..=max_index {
            for (what, line, part) in [
                ("row b1^2", Line::Row(k), Part::B1),
                ("column b1^2", Line::Column(k), Part::B1),
                ("column b2^2", Line::Column(k), Part::B2),
            ] {
                squares.push((format!("{what} index={k}"), quadratic_sums(line, part, &mass, tol)?));
            }
        }
        let failure = squares.iter().find_map(|(what, r)| {
            (!r.converged || (r.value - 1.0).abs() > tol)
                .then(|| format!("{what}: {} (converged: {})", r.value, r.converged))
        });
        ctx.record(
            "quadratic",
            "sums of squares equal 1",
            format!("index<={max_index};m={mass};tol={tol:e}"),
            failure,
            format!("{} sums", squares.len()),
        );
    }
    Ok(())
}
