//! The five subcommands. Each returns a [`Report`] and never writes output
//! itself, so identical parameters always give identical bytes.

use std::path::PathBuf;

use coherent_id::montecarlo::{
    binomial_acceptance_interval, code_rng, estimate_lambda1, estimate_lambda2, exact_false_accept,
    exact_lambda1, exact_lambda2_all_pairs, heterodyne_analytic, heterodyne_simulate,
    worst_pair_difference, HeterodyneSpec, McConfig, McEstimate, PairStrategy, CONFIDENCE_LEVEL,
};
use coherent_id::photonstats::{
    chernoff_lower_logbound, lambda_exponent, theta_exponent, DetectorSpec,
};
use coherent_id::scheme::{
    achievable_users_log, build_code_with_budget, converse_users_log, sandwich_row,
};
use coherent_id::{Channel, Code};

use crate::config::{Pairs, Params, Separation};
use crate::output::{Cell, Report, Table};
use crate::verify;
use crate::CliError;

fn report(command: &'static str, params: &Params, notes: Vec<String>, table: Table) -> Report {
    Report {
        command,
        config_hash: params.config_hash(command),
        seed: params.seed,
        notes,
        table,
    }
}

fn channel(params: &Params) -> Result<Channel, CliError> {
    Ok(Channel::new(params.noise)?)
}

/// One line of the bounds table. Quantities that are undefined for the
/// parameters are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub k: usize,
    pub energy: f64,
    pub noise: f64,
    pub delta: f64,
    pub rho: Option<f64>,
    pub delta_k: Option<f64>,
    pub log_m_lower: Option<f64>,
    pub log_m_upper: Option<f64>,
    pub lambda1_log: Option<f64>,
    pub lambda2_log: Option<f64>,
    pub leading: Option<f64>,
    pub gap_lower_per_k: Option<f64>,
    pub gap_upper_per_k: Option<f64>,
}

fn leading_term(k: usize) -> Option<f64> {
    (k >= 3).then(|| {
        let kf = k as f64;
        kf * kf.ln() - kf * kf.ln().ln()
    })
}

fn bounds_row(k: usize, params: &Params, ch: &Channel) -> Result<BoundsRow, CliError> {
    let kf = k as f64;
    if params.sandwich {
        if params.noise == 0.0 {
            return Err(CliError::Validation(
                "--sandwich needs --noise > 0: the first-kind exponent is undefined at N = 0"
                    .into(),
            ));
        }
        let r = sandwich_row(k, params.energy, ch)?;
        return Ok(BoundsRow {
            k,
            energy: params.energy,
            noise: params.noise,
            delta: r.delta,
            rho: Some(r.rho),
            delta_k: Some(r.delta_k),
            log_m_lower: Some(r.achievable_log),
            log_m_upper: Some(r.converse_log),
            lambda1_log: Some(r.lambda1_log),
            lambda2_log: Some(r.lambda2_log),
            leading: Some(r.leading),
            gap_lower_per_k: Some(r.achievable_gap_per_k),
            gap_upper_per_k: Some(r.converse_gap_per_k),
        });
    }
    let rho = params.separation.map(|s| s.rho_for(k));
    let log_m_lower = rho
        .map(|r| achievable_users_log(k, params.energy, r))
        .transpose()?;
    let lambda1_log = if params.noise > 0.0 {
        Some(-kf * lambda_exponent(params.delta, ch)?)
    } else {
        None
    };
    let theta = theta_exponent(params.delta, ch)?;
    let lambda2_log = rho.map(|r| -4.0 * r * r * theta);
    // Without an explicit level, use the error level the code guarantees.
    let delta_k = params.delta_k.or(match (lambda1_log, lambda2_log) {
        (Some(a), Some(b)) if a.max(b).exp() < 0.25 => Some(a.max(b).exp()),
        _ => None,
    });
    let log_m_upper = delta_k
        .map(|d| converse_users_log(k, params.energy, d, ch))
        .transpose()?;
    let leading = leading_term(k);
    let gap = |v: Option<f64>| match (v, leading) {
        (Some(v), Some(l)) => Some((v - l) / kf),
        _ => None,
    };
    Ok(BoundsRow {
        k,
        energy: params.energy,
        noise: params.noise,
        delta: params.delta,
        rho,
        delta_k,
        log_m_lower,
        log_m_upper,
        lambda1_log,
        lambda2_log,
        leading,
        gap_lower_per_k: gap(log_m_lower),
        gap_upper_per_k: gap(log_m_upper),
    })
}

pub fn bounds_rows(params: &Params) -> Result<Vec<BoundsRow>, CliError> {
    let ch = channel(params)?;
    params
        .k
        .iter()
        .map(|&k| bounds_row(k, params, &ch))
        .collect()
}

pub fn bounds(params: &Params) -> Result<Report, CliError> {
    let rows = bounds_rows(params)?;
    let mut table = Table::new(vec![
        "k",
        "energy",
        "noise",
        "delta",
        "rho",
        "delta_k",
        "logM_lower",
        "logM_upper",
        "lambda1_log",
        "lambda2_log",
        "leading",
        "gap_lower_per_k",
        "gap_upper_per_k",
    ]);
    for r in &rows {
        table.push(vec![
            r.k.into(),
            r.energy.into(),
            r.noise.into(),
            r.delta.into(),
            r.rho.into(),
            r.delta_k.into(),
            r.log_m_lower.into(),
            r.log_m_upper.into(),
            r.lambda1_log.into(),
            r.lambda2_log.into(),
            r.leading.into(),
            r.gap_lower_per_k.into(),
            r.gap_upper_per_k.into(),
        ]);
    }
    let mut notes =
        vec!["cardinalities are natural logarithms; leading = k ln k - k ln ln k".to_owned()];
    if params.sandwich {
        notes.push(
            "error level delta_k = 1/k; delta and rho are chosen so both error bounds meet it"
                .into(),
        );
    }
    Ok(report("bounds", params, notes, table))
}

fn require_rho(params: &Params, k: usize) -> Result<f64, CliError> {
    params
        .separation
        .map(|s: Separation| s.rho_for(k))
        .ok_or_else(|| CliError::Validation("--rho or --gamma is required to build a code".into()))
}

fn build(params: &Params, k: usize) -> Result<Code, CliError> {
    let rho = require_rho(params, k)?;
    Ok(build_code_with_budget(
        k,
        params.energy,
        rho,
        params.budget,
        &mut code_rng(params.seed),
    )?)
}

/// A codebook file is written when `--code` is given.
pub struct PackOutput {
    pub report: Report,
    pub code_file: Option<(PathBuf, String)>,
}

pub fn pack(params: &Params) -> Result<PackOutput, CliError> {
    let [k] = params.k[..] else {
        return Err(CliError::Validation(
            "pack builds one code: give a single --k".into(),
        ));
    };
    let code = build(params, k)?;
    let mut table = Table::new(vec![
        "k",
        "energy",
        "rho",
        "seed",
        "budget",
        "M",
        "logM",
        "logM_lower",
        "min_distance",
        "max_energy",
    ]);
    table.push(vec![
        k.into(),
        params.energy.into(),
        code.rho().into(),
        params.seed.into(),
        params.budget.into(),
        code.len().into(),
        (code.len() as f64).ln().into(),
        achievable_users_log(k, params.energy, code.rho())?.into(),
        code.min_distance().into(),
        code.max_energy().into(),
    ]);
    let code_file = params.code.clone().map(|p| (p, code.to_text()));
    Ok(PackOutput {
        report: report("pack", params, vec![], table),
        code_file,
    })
}

fn codes(params: &Params) -> Result<Vec<Code>, CliError> {
    match &params.code {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read code {}: {e}", path.display())))?;
            let code = Code::from_text(&text)
                .map_err(|e| CliError::Validation(format!("code file {}: {e}", path.display())))?;
            Ok(vec![code])
        }
        None => params.k.iter().map(|&k| build(params, k)).collect(),
    }
}

fn mc_config(params: &Params) -> McConfig {
    McConfig {
        trials: params.trials,
        seed: params.seed,
        chunks: params.chunks,
    }
}

fn estimate_cells(e: &McEstimate, exact: f64) -> Result<Vec<Cell>, CliError> {
    let (wlo, whi) = e.wilson(CONFIDENCE_LEVEL);
    let (ilo, ihi) =
        binomial_acceptance_interval(e.trials, exact.clamp(0.0, 1.0), CONFIDENCE_LEVEL)?;
    Ok(vec![
        e.successes.into(),
        e.point.into(),
        e.stderr.into(),
        wlo.into(),
        whi.into(),
        exact.into(),
        ilo.into(),
        ihi.into(),
        (ilo..=ihi).contains(&e.successes).into(),
    ])
}

pub fn simulate(params: &Params) -> Result<Report, CliError> {
    let ch = channel(params)?;
    let cfg = mc_config(params);
    let mut table = Table::new(vec![
        "estimator",
        "k",
        "energy",
        "noise",
        "delta",
        "rho",
        "M",
        "min_distance",
        "pairs",
        "trials",
        "seed",
        "chunks",
        "successes",
        "point",
        "stderr",
        "wilson_lo",
        "wilson_hi",
        "exact",
        "interval_lo",
        "interval_hi",
        "consistent",
        "bound_log",
        "reported_log",
    ]);
    for code in codes(params)? {
        let k = code.k();
        if code.len() < 2 {
            return Err(CliError::Validation(format!(
                "code for k = {k} has {} signature(s); the second-kind error needs at least 2",
                code.len()
            )));
        }
        let det = DetectorSpec::new(k, params.delta, &ch)?;
        let lead = |name: &str, pairs: &str| -> Vec<Cell> {
            vec![
                name.into(),
                k.into(),
                code.energy_budget().into(),
                params.noise.into(),
                params.delta.into(),
                code.rho().into(),
                code.len().into(),
                code.min_distance().into(),
                pairs.into(),
                params.trials.into(),
                params.seed.into(),
                params.chunks.into(),
            ]
        };

        let e1 = estimate_lambda1(&code, &ch, &det, &cfg)?;
        let bound1 = (params.noise > 0.0)
            .then(|| lambda_exponent(params.delta, &ch).map(|l| -(k as f64) * l))
            .transpose()?;
        let mut row = lead("lambda1", "");
        row.extend(estimate_cells(&e1, exact_lambda1(&ch, &det)?)?);
        row.extend([Cell::from(bound1), Cell::Empty]);
        table.push(row);

        let (strategy, label) = match params.pairs {
            Pairs::Worst => (PairStrategy::WorstPair, "worst"),
            Pairs::All => (PairStrategy::AllPairsSampled, "all"),
        };
        let e2 = estimate_lambda2(&code, &ch, &det, &cfg, strategy)?;
        let diff = worst_pair_difference(&code)?;
        let exact2 = match strategy {
            PairStrategy::WorstPair => exact_false_accept(&diff, &ch, &det)?,
            PairStrategy::AllPairsSampled => exact_lambda2_all_pairs(&code, &ch, &det)?,
        };
        let lower = chernoff_lower_logbound(k, params.delta, diff.energy(), &ch)?;
        let mut row = lead("lambda2", label);
        row.extend(estimate_cells(&e2, exact2)?);
        row.extend([
            Cell::from(lower.rigorous.log_probability),
            Cell::from(lower.paper_form.log_probability),
        ]);
        table.push(row);
    }
    let notes = vec![
        format!("intervals: Wilson and exact binomial at {CONFIDENCE_LEVEL}"),
        "bound_log: optimized Chernoff bound (lambda2 at the worst pair); \
         reported_log: -|delta_alpha|^2 * theta, shown for comparison"
            .into(),
    ];
    Ok(report("simulate", params, notes, table))
}

pub fn heterodyne(params: &Params) -> Result<Report, CliError> {
    let ch = channel(params)?;
    let cfg = mc_config(params);
    let model = if params.noise == 0.0 {
        "unit_variance"
    } else {
        "thermal_extension"
    };
    let mut table = Table::new(vec![
        "estimator",
        "k",
        "energy",
        "noise",
        "noise_variance",
        "threshold",
        "distance",
        "M",
        "trials",
        "seed",
        "chunks",
        "successes",
        "point",
        "stderr",
        "wilson_lo",
        "wilson_hi",
        "exact",
        "interval_lo",
        "interval_hi",
        "consistent",
        "noise_model",
    ]);
    for code in codes(params)? {
        let k = code.k();
        if code.len() < 2 {
            return Err(CliError::Validation(format!(
                "code for k = {k} has {} signature(s); the second-kind error needs at least 2",
                code.len()
            )));
        }
        let spec = HeterodyneSpec::for_channel(k, &ch, params.delta)?;
        let sim = heterodyne_simulate(&code, &spec, &cfg)?;
        let exact = heterodyne_analytic(k, &spec, code.min_distance())?;
        for (name, est, ex) in [
            ("lambda1", sim.lambda1, exact.lambda1),
            ("lambda2_worst", sim.lambda2_worst, exact.lambda2),
        ] {
            let mut row: Vec<Cell> = vec![
                name.into(),
                k.into(),
                code.energy_budget().into(),
                params.noise.into(),
                spec.noise_variance().into(),
                spec.threshold().into(),
                code.min_distance().into(),
                code.len().into(),
                params.trials.into(),
                params.seed.into(),
                params.chunks.into(),
            ];
            row.extend(estimate_cells(&est, ex)?);
            row.push(model.into());
            table.push(row);
        }
    }
    let notes = vec![
        "receiver accepts iff |z - alpha|^2 <= threshold = k * sigma^2 * (1 + delta)".to_owned(),
        "sigma^2 = N + 1; N = 0 is the unit-variance Gaussian channel, N > 0 is a thermal extension".into(),
    ];
    Ok(report("heterodyne", params, notes, table))
}

/// The oracle suite and whether every check passed.
pub fn verify(params: &Params) -> Result<(Report, bool), CliError> {
    let checks = verify::run_suite()?;
    let mut table = Table::new(vec![
        "check",
        "cases",
        "max_deviation",
        "tolerance",
        "passed",
    ]);
    for c in &checks {
        table.push(vec![
            c.name.into(),
            c.cases.into(),
            c.max_deviation.into(),
            c.tolerance.into(),
            c.passed().into(),
        ]);
    }
    let ok = checks.iter().all(|c| c.passed());
    Ok((report("verify", params, vec![], table), ok))
}
