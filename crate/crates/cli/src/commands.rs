use std::fmt::Write as _;

use checkers_core::amplitude::{amplitude_edge, amplitude_oracle};
use checkers_core::bypass::{amplitude_bypass, conservation_bypass, conservation_bypass_float, BypassSet};
use checkers_core::identities::{
    col_sum_targets, conjecture_report, quadratic_sums, rotated_col_sum, rotated_row_sum, row_sum_targets, Line,
    Part, SeriesResult, Verdict,
};
use checkers_core::statistics::{distribution as row_distribution, AnyDistribution};
use checkers_core::{amplitude_closed_form, amplitude_dp, Error, Evaluated, Limits, MassParam, Mode, Site};
use serde_json::{json, Value};

use crate::output::{amplitude_fields, emit, fields_json, fields_text, float, pretty, ratio};
use crate::{
    AmplitudeArgs, BypassArgs, DistributionArgs, Failure, IdentitiesArgs, MassArgs, Method, SiteArgs, TableFormat,
    TextFormat,
};

/// The dimensionless mass and the arithmetic to use with it.
pub fn resolve_mass(args: &MassArgs) -> Result<(MassParam, Mode), Failure> {
    let mass = match (&args.m, &args.mass) {
        (Some(m), _) => {
            let eps: MassParam = args.eps.as_deref().unwrap_or_default().parse()?;
            MassParam::product(m, &eps)?
        }
        (None, Some(mass)) => mass.clone(),
        (None, None) => MassParam::ratio(1, 1)?,
    };
    let mode = args.mode.unwrap_or_else(|| mass.natural_mode());
    if mode == Mode::Exact {
        mass.as_rational()?;
    }
    Ok((mass, mode))
}

fn resolve_site(site: &SiteArgs, eps: Option<&str>) -> Result<Site, Failure> {
    match (site.n, site.tau, &site.x, &site.t) {
        (Some(n), Some(tau), _, _) => Ok(Site::new(n, tau)?),
        (_, _, Some(x), Some(t)) => {
            let eps = eps.ok_or_else(|| Failure::usage("--x and --t need --eps"))?;
            Ok(Site::from_physical(x, t, eps)?)
        }
        _ => Err(Failure::usage("give either --n and --tau, or --x, --t and --eps")),
    }
}

pub fn amplitude(args: &AmplitudeArgs, limits: &Limits) -> Result<(), Failure> {
    let site = resolve_site(&args.site, args.mass.eps.as_deref())?.require_reachable()?;
    let (mass, mode) = resolve_mass(&args.mass)?;
    let value = match args.method {
        Method::Dp => amplitude_dp(site, &mass, mode, limits)?,
        Method::Closed => amplitude_closed_form(site, &mass, mode)?,
        Method::Oracle | Method::Edge => {
            let m = mass.as_rational()?;
            let exact = if args.method == Method::Oracle {
                amplitude_oracle(site, m, limits)?
            } else {
                amplitude_edge(site, m)?
            };
            match mode {
                Mode::Exact => Evaluated::Exact(exact),
                Mode::Float => Evaluated::Float(exact.to_float(m)),
            }
        }
    };
    let fields = amplitude_fields(site, &mass, &value);
    let text = match args.format {
        TextFormat::Text => fields_text(&fields, "\n") + "\n",
        TextFormat::Json => pretty(&fields_json(&fields)),
    };
    emit(None, &text)
}

pub fn distribution(args: &DistributionArgs, limits: &Limits) -> Result<(), Failure> {
    let (mass, mode) = resolve_mass(&args.mass)?;
    let dist = row_distribution(args.tau, &mass, mode, limits)?;
    // every value rendered once, as text for CSV and as a JSON value
    let rows: Vec<(i64, [(String, Value); 3])> = match &dist {
        AnyDistribution::Exact(d) => d
            .entries
            .iter()
            .map(|(n, a, b)| {
                let cell = |r: &checkers_core::Rational| (ratio(r), json!(ratio(r)));
                (*n, [cell(a), cell(b), cell(&(a + b))])
            })
            .collect(),
        AnyDistribution::Float(d) => d
            .entries
            .iter()
            .map(|(n, a, b)| {
                let cell = |x: f64| (float(x), json!(x));
                (*n, [cell(*a), cell(*b), cell(a + b)])
            })
            .collect(),
    };
    let totals = match &dist {
        AnyDistribution::Exact(d) => {
            let (a, b) = d.entries.iter().fold(
                (checkers_core::Rational::default(), checkers_core::Rational::default()),
                |(x, y), (_, a, b)| (x + a, y + b),
            );
            let t = &a + &b;
            [(ratio(&a), json!(ratio(&a))), (ratio(&b), json!(ratio(&b))), (ratio(&t), json!(ratio(&t)))]
        }
        AnyDistribution::Float(d) => {
            let (a, b) = d.entries.iter().fold((0.0, 0.0), |(x, y), (_, a, b)| (x + a, y + b));
            [(float(a), json!(a)), (float(b), json!(b)), (float(a + b), json!(a + b))]
        }
    };

    let content = match args.format {
        TableFormat::Csv => {
            let mut s = String::from("n,p_minus,p_plus,p_total\n");
            for (n, [a, b, t]) in &rows {
                let _ = writeln!(s, "{n},{},{},{}", a.0, b.0, t.0);
            }
            if args.totals {
                let _ = writeln!(s, "total,{},{},{}", totals[0].0, totals[1].0, totals[2].0);
            }
            s
        }
        TableFormat::Json => {
            let entries: Vec<Value> = rows
                .iter()
                .map(|(n, [a, b, t])| json!({"n": n, "p_minus": a.1, "p_plus": b.1, "p_total": t.1}))
                .collect();
            let mut v = json!({
                "tau": args.tau,
                "mass": mass.to_string(),
                "mode": mode.to_string(),
                "entries": entries,
            });
            if args.totals {
                v["totals"] = json!({"p_minus": totals[0].1, "p_plus": totals[1].1, "p_total": totals[2].1});
            }
            pretty(&v)
        }
    };
    emit(args.output.as_deref(), &content)
}

struct IdentityRow {
    name: String,
    parameters: String,
    result: SeriesResult,
    rhs: f64,
    rhs_alt: Option<f64>,
    verdict: Verdict,
}

fn judged(result: SeriesResult, rhs: f64, tol: f64) -> Verdict {
    if !result.converged {
        Verdict::Unresolved
    } else if (result.value - rhs).abs() <= tol {
        Verdict::Agrees
    } else {
        Verdict::Disagrees
    }
}

pub fn identities(args: &IdentitiesArgs) -> Result<(), Failure> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure::usage("--tol must be positive"));
    }
    if args.max_index < 1 || args.conjecture_max < 1 {
        return Err(Failure::usage("--max-index and --conjecture-max must be at least 1"));
    }
    let m = args.mass.to_f64();
    if m <= 0.0 {
        return Err(Error::Massless.into());
    }
    let mut rows = Vec::new();
    let mut push = |name: &str, parameters: String, result: SeriesResult, rhs: f64| {
        let verdict = judged(result, rhs, args.tol);
        rows.push(IdentityRow { name: name.into(), parameters, result, rhs, rhs_alt: None, verdict });
    };
    for k in 1..=args.max_index {
        let (b1, b2) = rotated_row_sum(k, &args.mass, args.tol)?;
        let (t1, t2) = row_sum_targets(k, m);
        push("row_sum_b1", format!("mu={k};m={}", args.mass), b1, t1);
        push("row_sum_b2", format!("mu={k};m={}", args.mass), b2, t2);
    }
    for k in 1..=args.max_index {
        let (b1, b2) = rotated_col_sum(k, &args.mass, args.tol)?;
        let (t1, t2) = col_sum_targets(k, m);
        push("col_sum_b1", format!("lam={k};m={}", args.mass), b1, t1);
        push("col_sum_b2", format!("lam={k};m={}", args.mass), b2, t2);
    }
    for k in 1..=args.max_index {
        for (name, line, part) in [
            ("quad_row_b1", Line::Row(k), Part::B1),
            ("quad_col_b1", Line::Column(k), Part::B1),
            ("quad_col_b2", Line::Column(k), Part::B2),
        ] {
            let key = if matches!(line, Line::Row(_)) { "mu" } else { "lam" };
            push(name, format!("{key}={k};m={}", args.mass), quadratic_sums(line, part, &args.mass, args.tol)?, 1.0);
        }
    }
    for r in conjecture_report(args.conjecture_max, m, args.tol)? {
        rows.push(IdentityRow {
            name: format!("conjecture_{}", r.item),
            parameters: format!("mu={};m={}", r.mu_row, if r.item == 1 { args.mass.to_string() } else { "1".into() }),
            result: r.lhs,
            rhs: r.rhs,
            rhs_alt: r.rhs_alt,
            verdict: r.verdict,
        });
    }

    let verdict_name = |v: Verdict| match v {
        Verdict::Agrees => "agrees",
        Verdict::Disagrees => "disagrees",
        Verdict::Unresolved => "unresolved",
    };
    let content = match args.format {
        TableFormat::Csv => {
            let mut s =
                String::from("name,parameters,lhs,rhs,abs_diff,converged,terms_used,rhs_alt,abs_diff_alt,verdict\n");
            for r in &rows {
                let alt = r.rhs_alt.map(float).unwrap_or_default();
                let alt_diff = r.rhs_alt.map(|a| float((r.result.value - a).abs())).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.name,
                    r.parameters,
                    float(r.result.value),
                    float(r.rhs),
                    float((r.result.value - r.rhs).abs()),
                    r.result.converged,
                    r.result.terms_used,
                    alt,
                    alt_diff,
                    verdict_name(r.verdict)
                );
            }
            s
        }
        TableFormat::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "parameters": r.parameters,
                        "lhs": r.result.value,
                        "rhs": r.rhs,
                        "abs_diff": (r.result.value - r.rhs).abs(),
                        "converged": r.result.converged,
                        "terms_used": r.result.terms_used,
                        "tail_bound": r.result.tail_bound,
                        "rhs_alt": r.rhs_alt,
                        "abs_diff_alt": r.rhs_alt.map(|a| (r.result.value - a).abs()),
                        "verdict": verdict_name(r.verdict),
                    })
                })
                .collect();
            pretty(&Value::Array(items))
        }
    };
    emit(args.output.as_deref(), &content)
}

pub fn bypass(args: &BypassArgs, limits: &Limits) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.set)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", args.set.display())))?;
    let set = BypassSet::from_json_str(&text)?;
    let (mass, mode) = resolve_mass(&args.mass)?;

    if args.conservation {
        let total = match mode {
            Mode::Exact => json!(conservation_bypass(&set, mass.as_rational()?, limits)?.to_string()),
            Mode::Float => json!(float(conservation_bypass_float(&set, mass.to_f64(), limits)?)),
        };
        let fields = vec![("blocking", json!(true)), ("conservation", total)];
        let content = match args.format {
            TextFormat::Text => fields_text(&fields, "\n") + "\n",
            TextFormat::Json => pretty(&fields_json(&fields)),
        };
        return emit(None, &content);
    }

    let sites: Vec<Site> = if args.query.is_empty() { set.iter().collect() } else { args.query.clone() };
    let mut records = Vec::with_capacity(sites.len());
    for site in sites {
        let value = amplitude_bypass(site, &set, &mass, mode, !args.include_endpoint, limits)?;
        let mut fields = amplitude_fields(site, &mass, &value);
        fields.push(("in_set", json!(set.contains(site))));
        records.push(fields);
    }
    let content = match args.format {
        TextFormat::Text => records.iter().map(|f| fields_text(f, " ") + "\n").collect(),
        TextFormat::Json => pretty(&Value::Array(records.iter().map(|f| fields_json(f)).collect())),
    };
    emit(None, &content)
}
