use std::sync::Arc;

use serde_json::json;

use super::config::{Command, ConfigError, Operator, Prepared, RunConfig};
use super::report::{Report, ResultRow};
use crate::calculus::{cyclic_d, number_op, number_op_inverse, partial_d, reduced_laplacian, Var};
use crate::error::Error;
use crate::hurwitz::{
    hciz_series_hurwitz, hurwitz_table, monotone_count, HurwitzConvention, MomentPairing, Partition, MAX_HURWITZ_DEGREE,
};
use crate::masterfield::MasterField;
use crate::ncpoly::{format_polynomial, format_tensor, AlgebraError, Alphabet, Polynomial};
use crate::rmt::{estimate_cumulant, run_ensemble, EnsembleConfig, McError, MetropolisConfig, SamplerKind, C64};
use crate::toprec::{hciz_series_sd, Correlators};
use crate::validation::{run_all, Scale};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl From<McError> for RunError {
    fn from(e: McError) -> Self {
        RunError::Core(e.into())
    }
}

impl RunError {
    /// 2 for configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            _ => 1,
        }
    }
}

fn missing(field: &str, command: Command) -> RunError {
    RunError::Config(ConfigError::Field { field: field.into(), message: format!("required by `{command}`") })
}

fn invalid(field: &str, message: impl Into<String>) -> RunError {
    RunError::Config(ConfigError::Field { field: field.into(), message: message.into() })
}

/// Executes a validated config and collects its report.
pub fn run(config: &RunConfig) -> Result<Report, RunError> {
    let prepared = config.prepare()?;
    let mut report = Report::new(config);
    match config.command {
        Command::MasterField => master_field(config, &prepared, &mut report)?,
        Command::TauKg => tau_kg(config, &prepared, &mut report)?,
        Command::FreeEnergy => free_energy(config, &prepared, &mut report)?,
        Command::Hciz => hciz(config, &prepared, &mut report)?,
        Command::Hurwitz => hurwitz(config, &mut report)?,
        Command::McCumulants => mc_cumulants(config, &prepared, &mut report, false)?,
        Command::McValidate => mc_cumulants(config, &prepared, &mut report, true)?,
        Command::Clt => clt(config, &prepared, &mut report)?,
        Command::Validate => validate(config, &mut report),
        Command::ApplyOp => apply_op(config, &prepared, &mut report)?,
    }
    Ok(report)
}

fn polynomial<'a>(config: &RunConfig, prepared: &'a Prepared) -> Result<&'a Polynomial, RunError> {
    prepared.polynomial.as_ref().ok_or_else(|| missing("polynomial", config.command))
}

fn correlators(config: &RunConfig, prepared: &Prepared) -> Result<Correlators, RunError> {
    Ok(Correlators::new(prepared.constants.trace_data(), &prepared.potential, config.n_max)?)
}

fn master_field(config: &RunConfig, prepared: &Prepared, report: &mut Report) -> Result<(), RunError> {
    let p = polynomial(config, prepared)?;
    let tau = MasterField::perturbative(prepared.constants.trace_data(), &prepared.potential, config.n_max)?;
    let series = tau.eval(p)?;
    report.rows.extend(ResultRow::series("tau", &series, config.coupling));
    report.exact = json!({
        "polynomial": format_polynomial(p, &prepared.alphabet),
        "potential": format_polynomial(&prepared.potential, &prepared.alphabet),
        "order": config.n_max,
        "series": series.coeffs(),
    });
    Ok(())
}

fn tau_kg(config: &RunConfig, prepared: &Prepared, report: &mut Report) -> Result<(), RunError> {
    let correlators = correlators(config, prepared)?;
    let mut jobs: Vec<(usize, Vec<Polynomial>)> = Vec::new();
    if prepared.arguments.is_empty() {
        let p = polynomial(config, prepared)?;
        for k in 1..=config.k_max {
            let args = if k == 1 { vec![p.clone()] } else { vec![p.perp(); k] };
            for g in 0..=config.g_max {
                jobs.push((g, args.clone()));
            }
        }
    } else {
        jobs.push((config.genus, prepared.arguments.clone()));
    }
    let mut table = Vec::new();
    for (g, args) in jobs {
        let k = args.len();
        let series = correlators.tau_kg(g, &args)?;
        report.rows.extend(ResultRow::series(&format!("tau_{k},{g}"), &series, config.coupling));
        let texts: Vec<String> = args.iter().map(|a| format_polynomial(a, &prepared.alphabet)).collect();
        table.push(json!({ "k": k, "g": g, "args": texts, "order": config.n_max, "value": series.coeffs() }));
    }
    report.exact = json!(table);
    Ok(())
}

fn free_energy(config: &RunConfig, prepared: &Prepared, report: &mut Report) -> Result<(), RunError> {
    let correlators = correlators(config, prepared)?;
    let mut table = Vec::new();
    for g in 0..=config.g_max {
        let series = correlators.free_energy(g)?;
        report.rows.extend(ResultRow::series(&format!("F_{g}"), &series, config.coupling));
        table.push(json!({ "k": 0, "g": g, "args": [], "order": series.order(), "value": series.coeffs() }));
    }
    report.exact = json!(table);
    Ok(())
}

fn hciz(config: &RunConfig, prepared: &Prepared, report: &mut Report) -> Result<(), RunError> {
    if prepared.alphabet.constants.generators.len() < 2 || prepared.alphabet.unitaries < 1 {
        return Err(invalid("constants", "hciz needs one unitary and two constants x, y"));
    }
    if config.d_max == 0 || config.d_max > MAX_HURWITZ_DEGREE {
        return Err(invalid("d_max", format!("must lie in 1..={MAX_HURWITZ_DEGREE}")));
    }
    let data = prepared.constants.trace_data();
    let sd = hciz_series_sd(Arc::clone(&data), config.genus, config.d_max)?;
    let hurwitz = hciz_series_hurwitz(
        data.as_ref(),
        config.genus,
        config.d_max,
        HurwitzConvention::CALIBRATED,
        MomentPairing::Convolved,
    )?;
    let g = config.genus;
    report.rows.extend(ResultRow::series(&format!("F_{g} recursion"), &sd, config.coupling));
    for (d, c) in hurwitz.iter().enumerate() {
        report.rows.push(ResultRow::exact(format!("F_{g} hurwitz[t^{d}]"), None, c.to_f64_pair()));
    }
    let mismatches: Vec<usize> = (1..=config.d_max).filter(|&d| sd.coeff(d) != hurwitz[d]).collect();
    report.check(
        "recursion matches hurwitz",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("orders 1..={} agree", config.d_max)
        } else {
            format!("orders {mismatches:?} differ")
        },
    );
    report.exact = json!({ "genus": g, "recursion": sd.coeffs(), "hurwitz": hurwitz });
    Ok(())
}

fn hurwitz(config: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let convention = HurwitzConvention::CALIBRATED;
    let g = config.genus;
    let partition =
        |field: &str, parts: &[usize]| Partition::new(parts.to_vec()).map_err(|e| invalid(field, e.to_string()));
    let mut entries: Vec<(Partition, Partition, u64)> = Vec::new();
    match (&config.alpha, &config.beta) {
        (Some(a), Some(b)) => {
            let (a, b) = (partition("alpha", a)?, partition("beta", b)?);
            if a.size() != b.size() || a.size() > MAX_HURWITZ_DEGREE {
                return Err(invalid(
                    "beta",
                    format!("alpha and beta must partition the same d <= {MAX_HURWITZ_DEGREE}"),
                ));
            }
            let count = monotone_count(g, &a, &b, convention)?;
            entries.push((a, b, count));
        }
        (None, None) => {
            if config.d_max == 0 || config.d_max > MAX_HURWITZ_DEGREE {
                return Err(invalid("d_max", format!("must lie in 1..={MAX_HURWITZ_DEGREE}")));
            }
            for d in 1..=config.d_max {
                entries.extend(hurwitz_table(g, d, convention)?.into_iter().map(|((a, b), c)| (a, b, c)));
            }
        }
        _ => return Err(invalid("alpha", "give both alpha and beta, or neither for table mode")),
    }
    let mut table = Vec::new();
    for (a, b, count) in &entries {
        report.rows.push(ResultRow::exact(format!("H_{g}({a};{b})"), None, (*count as f64, 0.0)));
        table.push(json!({ "genus": g, "alpha": a.parts(), "beta": b.parts(), "count": count }));
    }
    report.exact = json!({ "convention": convention, "table": table });
    Ok(())
}

fn sampler(config: &RunConfig) -> SamplerKind {
    config.ensemble.sampler.unwrap_or(if config.coupling == 0.0 {
        SamplerKind::IidHaar
    } else {
        SamplerKind::Metropolis(MetropolisConfig::default())
    })
}

fn ensemble(config: &RunConfig, prepared: &Prepared, n: usize) -> EnsembleConfig {
    EnsembleConfig {
        n,
        unitaries: config.unitaries,
        potential: prepared.potential.clone(),
        coupling: config.coupling,
        sampler: sampler(config),
        seed: config.seed(),
        samples: config.ensemble.samples,
    }
}

/// `Tr ρ_N(p_j)` for every sample.
fn sample_traces(
    config: &RunConfig,
    prepared: &Prepared,
    n: usize,
    observables: &[Polynomial],
) -> Result<Vec<Vec<C64>>, RunError> {
    let rho = prepared.constants.representation(n)?;
    let ens = ensemble(config, prepared, n);
    let mut values = Vec::with_capacity(ens.samples);
    run_ensemble(&ens, &rho, 0, |us| {
        values.push(observables.iter().map(|p| rho.evaluate(p, us)).collect::<Result<Vec<_>, _>>()?);
        Ok(())
    })?;
    Ok(values)
}

/// Exact large-`N` value of the `k`-th cumulant of traces through genus one:
/// `N^{2-k} (τ_k0 + N^{-2} τ_k1)` at the configured coupling.
fn cumulant_target(correlators: &Correlators, args: &[Polynomial], n: usize, t: f64) -> Result<C64, RunError> {
    let k = args.len() as i32;
    let (a, b) = correlators.tau_kg(0, args)?.eval_f64(t);
    let (c, d) = correlators.tau_kg(1, args)?.eval_f64(t);
    let nf = n as f64;
    Ok(C64::new(a + c / (nf * nf), b + d / (nf * nf)) * nf.powi(2 - k))
}

fn mc_cumulants(config: &RunConfig, prepared: &Prepared, report: &mut Report, validate: bool) -> Result<(), RunError> {
    let args = if prepared.arguments.is_empty() {
        vec![polynomial(config, prepared)?.clone()]
    } else {
        prepared.arguments.clone()
    };
    if args.len() > 4 {
        return Err(invalid("arguments", "at most four observables"));
    }
    let texts: Vec<String> = args.iter().map(|a| format_polynomial(a, &prepared.alphabet)).collect();
    let label = format!("kappa_{}({})", args.len(), texts.join("; "));
    let correlators = if validate { Some(correlators(config, prepared)?) } else { None };
    let mut table = Vec::new();
    for &n in &config.ensemble.sizes {
        let values = sample_traces(config, prepared, n, &args)?;
        let est = estimate_cumulant(&values)?;
        report.rows.push(ResultRow::estimate(&label, n, config.coupling, &est));
        let mut entry = json!({ "N": n, "estimate": est });
        if let Some(c) = &correlators {
            let target = cumulant_target(c, &args, n, config.coupling)?;
            let z = est.z_score(target);
            report.rows.push(ResultRow {
                n: Some(n),
                ..ResultRow::exact(format!("{label} exact"), Some(config.coupling), (target.re, target.im))
            });
            report.check(
                format!("N={n}"),
                est.consistent_with(target, config.sigmas),
                format!("{:.6}{:+.6}i vs {:.6}{:+.6}i, z = {z:.2}", est.value.re, est.value.im, target.re, target.im),
            );
            entry["target"] = json!([target.re, target.im]);
        }
        table.push(entry);
    }
    report.exact = json!({ "observables": texts, "sampler": sampler(config), "estimates": table });
    Ok(())
}

fn clt(config: &RunConfig, prepared: &Prepared, report: &mut Report) -> Result<(), RunError> {
    let p = polynomial(config, prepared)?;
    let correlators = correlators(config, prepared)?;
    let gamma = correlators.clt_variance(p)?;
    report.rows.extend(ResultRow::series("gamma", &gamma, config.coupling));
    report.exact = json!({
        "polynomial": format_polynomial(p, &prepared.alphabet),
        "potential": format_polynomial(&prepared.potential, &prepared.alphabet),
        "order": config.n_max,
        "gamma": gamma.coeffs(),
    });
    Ok(())
}

fn validate(config: &RunConfig, report: &mut Report) {
    let scale = if config.quick { Scale::Quick } else { Scale::Full };
    for outcome in run_all(scale, config.seed()) {
        report.check(
            format!("criterion {}", outcome.id),
            outcome.passed,
            format!("{}: {}", outcome.title, outcome.detail),
        );
    }
}

fn apply_op(config: &RunConfig, prepared: &Prepared, report: &mut Report) -> Result<(), RunError> {
    let p = polynomial(config, prepared)?;
    let op = config.operator.ok_or_else(|| missing("operator", config.command))?;
    let var = Var::new(config.var, config.unitaries)?;
    let alphabet = &prepared.alphabet;
    let (text, norm) = match op {
        Operator::Partial => {
            let t = partial_d(var, p);
            (format_tensor(&t, alphabet), t.xi_norm(config.xi))
        }
        Operator::Laplacian => {
            let t = reduced_laplacian(p);
            (format_tensor(&t, alphabet), t.xi_norm(config.xi))
        }
        Operator::Cyclic => poly_out(&cyclic_d(var, p), alphabet, config.xi),
        Operator::Number => poly_out(&number_op(p), alphabet, config.xi),
        Operator::NumberInverse => poly_out(&number_op_inverse(p)?, alphabet, config.xi),
        Operator::Star => poly_out(&p.star(), alphabet, config.xi),
        Operator::CyclicCanonical => poly_out(&p.cyclic_canonical(), alphabet, config.xi),
    };
    let norm = norm.map_err(Error::from)?;
    let input_norm = p.xi_norm(config.xi).map_err(Error::from)?;
    report.rows.push(ResultRow::exact("xi_norm(input)", None, (input_norm, 0.0)));
    report.rows.push(ResultRow::exact("xi_norm(output)", None, (norm, 0.0)));
    report.exact = json!({
        "operator": op,
        "var": config.var,
        "xi": config.xi,
        "input": format_polynomial(p, alphabet),
        "output": text,
    });
    Ok(())
}

fn poly_out(q: &Polynomial, alphabet: &Alphabet, xi: f64) -> (String, Result<f64, AlgebraError>) {
    (format_polynomial(q, alphabet), q.xi_norm(xi))
}
