use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::Args;

use crate::analytics::{classify, distribution, exposure_summary};
use crate::corpus::{
    load_docs, load_exposures, load_factors, load_returns, ResponseCache, TradingCalendar,
};
use crate::elicit::{
    run_elicitation, Backend, BiasRecord, BiasRecordLine, ElicitOptions, GenerationParams,
    HttpBackend, MockBackend, TemplateSet,
};
use crate::eventstudy::{abnormal_returns, fit_ff5, group_car, ARSeries};
use crate::marketmodel::{
    derived_constants, fixed_point_residuals, one_step_consistency_with, simulate_paths,
    DerivedConstants, MarketParams, MarketState, SimulateOptions,
};

use super::config::RunConfig;
use super::render;
use super::CliError;

fn usage(msg: impl ToString) -> CliError {
    CliError::Usage(msg.to_string())
}

fn analysis(msg: impl ToString) -> CliError {
    CliError::Analysis(msg.to_string())
}

fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(usage(format!("input file not found: {}", path.display())))
    }
}

/// Read a bias.jsonl file back into records.
pub fn read_bias_file(path: &Path) -> Result<Vec<BiasRecord>, CliError> {
    require_file(path)?;
    let file = File::open(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| analysis(format!("{}: {e}", path.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: BiasRecordLine = serde_json::from_str(&line)
            .map_err(|e| analysis(format!("{}:{}: {e}", path.display(), i + 1)))?;
        records.push(parsed.into());
    }
    Ok(records)
}

fn build_backend(config: &RunConfig, name: &str) -> Result<Box<dyn Backend>, CliError> {
    if name == "mock" {
        return Ok(Box::new(MockBackend::new()));
    }
    match config.backends.get(name) {
        Some(backend_config) => Ok(Box::new(HttpBackend::new(name, backend_config.clone()))),
        None => Err(usage(format!("unknown backend {name:?}; not in config"))),
    }
}

pub fn cmd_elicit(
    config: &RunConfig,
    docs_path: &Path,
    backend_name: &str,
    model: &str,
    out: &Path,
) -> Result<(), CliError> {
    require_file(docs_path)?;
    let backend = build_backend(config, backend_name)?;
    let docs = load_docs(docs_path).map_err(|e| analysis(e.to_string()))?;
    let cache = ResponseCache::open(&config.cache_root).map_err(|e| analysis(e.to_string()))?;
    let templates = match &config.templates {
        Some(path) => TemplateSet::load(path).map_err(|e| usage(format!("templates: {e}")))?,
        None => TemplateSet::default(),
    };
    let params = GenerationParams::new(model);
    let options = ElicitOptions {
        scan_past_invalid: config.analysis.scan_past_invalid,
        fail_fast: config.analysis.fail_fast,
    };
    let (records, summary) =
        run_elicitation(backend.as_ref(), &cache, &docs, &params, &templates, &options)
            .map_err(|e| analysis(e.to_string()))?;

    let mut writer = File::create(out).map_err(|e| analysis(format!("{}: {e}", out.display())))?;
    for record in &records {
        let line = serde_json::to_string(&BiasRecordLine::from(record))
            .map_err(|e| analysis(e.to_string()))?;
        writeln!(writer, "{line}").map_err(|e| analysis(e.to_string()))?;
    }
    eprintln!(
        "elicit: docs={} valid_pairs={} excluded={} backend_calls={} cache_hits={} errors={}",
        summary.docs,
        summary.valid_pairs,
        summary.excluded,
        summary.backend_calls,
        summary.cache_hits,
        summary.errors.len()
    );
    if !summary.errors.is_empty() {
        for e in &summary.errors {
            eprintln!("elicit error: {e}");
        }
        return Err(analysis(format!(
            "{} documents failed elicitation",
            summary.errors.len()
        )));
    }
    Ok(())
}

fn distributions_from(inputs: &[PathBuf]) -> Result<Vec<crate::analytics::BiasDistribution>, CliError> {
    let mut out = Vec::new();
    for input in inputs {
        let records = read_bias_file(input)?;
        // A file may hold several models; histogram each separately.
        let mut by_model: BTreeMap<String, Vec<BiasRecord>> = BTreeMap::new();
        for record in records {
            by_model.entry(record.model_id.clone()).or_default().push(record);
        }
        if by_model.is_empty() {
            log::warn!("{}: no bias records", input.display());
        }
        for records in by_model.into_values() {
            out.push(distribution(&records).map_err(|e| analysis(e.to_string()))?);
        }
    }
    Ok(out)
}

pub fn cmd_report(inputs: &[PathBuf]) -> Result<(), CliError> {
    let dists = distributions_from(inputs)?;
    print!("{}", render::distribution_table(&dists));
    Ok(())
}

pub fn cmd_bias(inputs: &[PathBuf], out: &Path) -> Result<(), CliError> {
    let dists = distributions_from(inputs)?;
    let mut writer = csv::Writer::from_path(out).map_err(|e| analysis(e.to_string()))?;
    writer
        .write_record([
            "model_id", "+4", "+3", "+2", "+1", "0", "-1", "-2", "-3", "-4", "excluded",
        ])
        .map_err(|e| analysis(e.to_string()))?;
    for dist in &dists {
        let mut row = vec![dist.model_id.clone()];
        row.extend(dist.display_counts().iter().map(|c| c.to_string()));
        row.push(dist.excluded.to_string());
        writer.write_record(&row).map_err(|e| analysis(e.to_string()))?;
    }
    writer.flush().map_err(|e| analysis(e.to_string()))?;
    Ok(())
}

pub fn cmd_exposure(
    config: &RunConfig,
    bias: &Path,
    docs_path: &Path,
    exposures_path: &Path,
    out: Option<&Path>,
) -> Result<(), CliError> {
    require_file(docs_path)?;
    require_file(exposures_path)?;
    let records = read_bias_file(bias)?;
    let docs = load_docs(docs_path).map_err(|e| analysis(e.to_string()))?;
    let store = load_exposures(exposures_path).map_err(|e| analysis(e.to_string()))?;
    let summary =
        exposure_summary(&records, &docs, &store).map_err(|e| analysis(e.to_string()))?;
    print!(
        "{}",
        render::exposure_table(&summary, config.analysis.bold_threshold)
    );
    if let Some(out) = out {
        let mut writer = csv::Writer::from_path(out).map_err(|e| analysis(e.to_string()))?;
        writer
            .write_record(["model_id", "factor", "positive", "neutral", "negative", "spread"])
            .map_err(|e| analysis(e.to_string()))?;
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for row in &summary.factors {
            writer
                .write_record([
                    summary.model_id.clone(),
                    row.factor.clone(),
                    cell(row.positive),
                    cell(row.neutral),
                    cell(row.negative),
                    cell(row.spread),
                ])
                .map_err(|e| analysis(e.to_string()))?;
        }
        writer.flush().map_err(|e| analysis(e.to_string()))?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct EventStudyArgs {
    #[arg(long)]
    pub bias: PathBuf,
    #[arg(long)]
    pub docs: PathBuf,
    #[arg(long)]
    pub returns: PathBuf,
    #[arg(long)]
    pub factors: PathBuf,
    /// Trading-day calendar: one YYYY-MM-DD per line, ascending.
    #[arg(long)]
    pub calendar: PathBuf,
    /// Output directory for car_table.csv and car_path.csv.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

pub fn cmd_eventstudy(config: &RunConfig, args: &EventStudyArgs) -> Result<(), CliError> {
    for path in [&args.docs, &args.returns, &args.factors, &args.calendar] {
        require_file(path)?;
    }
    let records = read_bias_file(&args.bias)?;
    let docs = load_docs(&args.docs).map_err(|e| analysis(e.to_string()))?;
    let returns = load_returns(&args.returns).map_err(|e| analysis(e.to_string()))?;
    let factors = load_factors(&args.factors).map_err(|e| analysis(e.to_string()))?;
    let calendar = TradingCalendar::load(&args.calendar).map_err(|e| analysis(e.to_string()))?;
    let cutoff = config.cutoff_time()?;

    let doc_index: BTreeMap<(String, String), &crate::corpus::PerformanceDoc> = docs
        .iter()
        .map(|d| ((d.company_id.clone(), d.fiscal_period.clone()), d))
        .collect();

    let mut by_model: BTreeMap<String, Vec<&BiasRecord>> = BTreeMap::new();
    for record in &records {
        by_model.entry(record.model_id.clone()).or_default().push(record);
    }

    let horizons = &config.analysis.horizons;
    let mut all_results = Vec::new();
    let mut skipped = 0usize;
    for (model_id, model_records) in &by_model {
        let mut events: Vec<(ARSeries, crate::analytics::BiasGroup)> = Vec::new();
        for record in model_records {
            let Some(beta) = record.beta else { continue };
            let Some(doc) =
                doc_index.get(&(record.company_id.clone(), record.fiscal_period.clone()))
            else {
                skipped += 1;
                continue;
            };
            let event_id = format!("{}:{}", record.company_id, record.fiscal_period);
            let day0 = match calendar.event_day_zero(doc.announcement_at, cutoff) {
                Ok(d) => d,
                Err(e) => {
                    log::warn!("{event_id}: {e}");
                    skipped += 1;
                    continue;
                }
            };
            let fit = match fit_ff5(
                &event_id,
                &record.company_id,
                &returns,
                &factors,
                &calendar,
                day0,
                config.analysis.min_obs,
            ) {
                Ok(f) => f,
                Err(e) => {
                    log::warn!("{event_id}: skipped: {e}");
                    skipped += 1;
                    continue;
                }
            };
            let series = abnormal_returns(&fit, &returns, &factors, &calendar, day0)
                .map_err(|e| analysis(e.to_string()))?;
            events.push((series, classify(beta)));
        }
        if events.is_empty() {
            continue;
        }
        all_results.extend(group_car(model_id, &events, horizons));
    }
    if all_results.is_empty() {
        return Err(analysis(format!(
            "no usable events after joins ({skipped} skipped)"
        )));
    }

    std::fs::create_dir_all(&args.out_dir).map_err(|e| analysis(e.to_string()))?;
    let table_path = args.out_dir.join("car_table.csv");
    let mut writer = csv::Writer::from_path(&table_path).map_err(|e| analysis(e.to_string()))?;
    writer
        .write_record([
            "model_id", "group", "horizon", "car", "t", "p", "star", "n_events",
        ])
        .map_err(|e| analysis(e.to_string()))?;
    for result in &all_results {
        for snap in &result.snapshots {
            writer
                .write_record([
                    result.model_id.clone(),
                    result.group.label().to_string(),
                    snap.horizon.to_string(),
                    format!("{:.10}", snap.car),
                    snap.t.map(|t| format!("{t:.6}")).unwrap_or_default(),
                    snap.p.map(|p| format!("{p:.6}")).unwrap_or_default(),
                    snap.star.to_string(),
                    result.n_events.to_string(),
                ])
                .map_err(|e| analysis(e.to_string()))?;
        }
    }
    writer.flush().map_err(|e| analysis(e.to_string()))?;

    let path_path = args.out_dir.join("car_path.csv");
    let mut writer = csv::Writer::from_path(&path_path).map_err(|e| analysis(e.to_string()))?;
    writer
        .write_record(["model_id", "group", "rel_day", "mean_car"])
        .map_err(|e| analysis(e.to_string()))?;
    for result in &all_results {
        for (t, car) in result.car_path.iter().enumerate() {
            writer
                .write_record([
                    result.model_id.clone(),
                    result.group.label().to_string(),
                    t.to_string(),
                    format!("{car:.10}"),
                ])
                .map_err(|e| analysis(e.to_string()))?;
        }
    }
    writer.flush().map_err(|e| analysis(e.to_string()))?;

    // Human-readable snapshot tables, one per model.
    for (model_id, _) in &by_model {
        let model_results: Vec<_> = all_results
            .iter()
            .filter(|r| &r.model_id == model_id)
            .cloned()
            .collect();
        if !model_results.is_empty() {
            println!("# {model_id}");
            print!("{}", render::car_table(&model_results, horizons));
        }
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 0.5)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.05)]
    pub r: f64,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub sigma2_eta: f64,
    #[arg(long, default_value_t = 0.02)]
    pub beta_hat: f64,
    #[arg(long, default_value_t = 0.02)]
    pub beta0: f64,
    #[arg(long, default_value_t = 0.01)]
    pub sigma2_beta0: f64,
    #[arg(long, default_value_t = 100)]
    pub horizon: usize,
    #[arg(long, default_value_t = 10)]
    pub paths: u64,
    /// Keep negative variance draws instead of clamping at zero.
    #[arg(long)]
    pub no_clamp: bool,
    #[arg(long)]
    pub out: PathBuf,
}

impl SimulateArgs {
    fn params(&self) -> MarketParams {
        MarketParams {
            mu: self.mu,
            gamma: self.gamma,
            r: self.r,
            theta: self.theta,
            sigma2_eta: self.sigma2_eta,
            beta_hat: self.beta_hat,
        }
    }
}

pub fn cmd_simulate(args: &SimulateArgs, seed: u64) -> Result<(), CliError> {
    let params = args.params();
    let state0 = MarketState {
        beta_t: args.beta0,
        sigma2_beta_t: args.sigma2_beta0,
    };
    let options = SimulateOptions {
        clamp_negative_variance: !args.no_clamp,
    };
    let ensemble = simulate_paths(&params, &state0, args.horizon, args.paths, seed, &options)
        .map_err(|e| usage(e.to_string()))?;
    let mut writer = csv::Writer::from_path(&args.out).map_err(|e| analysis(e.to_string()))?;
    writer
        .write_record(["path_id", "t", "beta_t", "sigma2_beta_t", "p_star"])
        .map_err(|e| analysis(e.to_string()))?;
    for point in &ensemble.points {
        writer
            .write_record([
                point.path_id.to_string(),
                point.t.to_string(),
                format!("{:.12}", point.beta_t),
                format!("{:.12}", point.sigma2_beta_t),
                format!("{:.12}", point.p_star),
            ])
            .map_err(|e| analysis(e.to_string()))?;
    }
    writer.flush().map_err(|e| analysis(e.to_string()))?;
    eprintln!(
        "simulate: paths={} horizon={} clamped_fraction={:.4}",
        args.paths, args.horizon, ensemble.clamped_fraction
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Monte Carlo draws for the stochastic consistency check.
    #[arg(long, default_value_t = 1_000_000)]
    pub n_mc: usize,
    /// Debug: multiply the state coefficient A by this factor before
    /// verification (1.1 is the documented negative control).
    #[arg(long, default_value_t = 1.0)]
    pub perturb_a: f64,
    /// Skip the stochastic point check and run the deterministic grid only.
    #[arg(long)]
    pub grid_only: bool,
}

const GRID_MU: [f64; 3] = [0.0, 0.3, 0.7];
const GRID_GAMMA: [f64; 3] = [0.5, 1.0, 2.0];
const GRID_THETA: [f64; 3] = [0.2, 0.5, 0.8];
const GRID_R: [f64; 3] = [0.01, 0.05, 0.1];

fn perturbed(constants: &DerivedConstants, factor: f64) -> DerivedConstants {
    DerivedConstants {
        a: constants.a * factor,
        ..*constants
    }
}

pub fn cmd_verify_theorem(args: &VerifyArgs, seed: u64) -> Result<(), CliError> {
    let state = MarketState {
        beta_t: 0.04,
        sigma2_beta_t: 0.01,
    };
    let mut failures = 0usize;

    // Deterministic grid: sigma2_eta = 0, residual must vanish.
    for mu in GRID_MU {
        for gamma in GRID_GAMMA {
            for theta in GRID_THETA {
                for r in GRID_R {
                    let params = MarketParams {
                        mu,
                        gamma,
                        r,
                        theta,
                        sigma2_eta: 0.0,
                        beta_hat: 0.02,
                    };
                    let constants = derived_constants(&params)
                        .map(|c| perturbed(&c, args.perturb_a))
                        .map_err(|e| usage(e.to_string()))?;
                    let (fp_a, fp_b) = fixed_point_residuals(&params, &constants);
                    let report =
                        one_step_consistency_with(&params, &state, args.n_mc, seed, &constants)
                            .map_err(|e| usage(e.to_string()))?;
                    let pass =
                        report.passes() && fp_a.abs() < 1e-12 && fp_b.abs() < 1e-12;
                    if !pass {
                        failures += 1;
                    }
                    println!(
                        "grid mu={mu} gamma={gamma} theta={theta} r={r} residual={:.3e} fp_a={:.3e} fp_b={:.3e} {}",
                        report.residual,
                        fp_a.abs(),
                        fp_b.abs(),
                        if pass { "PASS" } else { "FAIL" }
                    );
                }
            }
        }
    }

    if !args.grid_only {
        // Stochastic check at the documented example point.
        let params = MarketParams {
            mu: 0.5,
            gamma: 1.0,
            r: 0.05,
            theta: 0.5,
            sigma2_eta: 1e-4,
            beta_hat: 0.02,
        };
        let constants = derived_constants(&params)
            .map(|c| perturbed(&c, args.perturb_a))
            .map_err(|e| usage(e.to_string()))?;
        let report = one_step_consistency_with(&params, &state, args.n_mc, seed, &constants)
            .map_err(|e| usage(e.to_string()))?;
        let pass = report.passes();
        if !pass {
            failures += 1;
        }
        println!(
            "stochastic n_mc={} residual={:.3e} se={:.3e} neg_var_frac={:.3} {}",
            args.n_mc,
            report.residual,
            report.standard_error,
            report.negative_variance_fraction,
            if pass { "PASS" } else { "FAIL" }
        );
    }

    if failures > 0 {
        Err(analysis(format!("{failures} verification points failed")))
    } else {
        Ok(())
    }
}
