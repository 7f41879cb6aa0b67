//! Reproducible parameter-sweep experiments with CSV output.
//!
//! An [`ExperimentSpec`] names a sweep axis, the fixed network parameters,
//! the estimator selection (analytic, Monte Carlo or both) and the
//! coordination / power-control variants to run. [`run_experiment`] produces
//! one [`ResultTable`] row per (axis value × estimator × K × ν × β)
//! combination, isolating per-row failures so long sweeps survive them.
//!
//! Every row is reproducible from (spec, seed) alone: estimator substreams
//! are derived from the master seed and the row position, never from global
//! state. The CSV bytes written for a given spec and seed are identical on
//! every rerun; wall-clock timing therefore goes to the run metadata file,
//! not the CSV (the `wall_ms` column is left empty).
//!
//! Built-in presets reproduce the reference figure sweeps; see
//! [`list_presets`].

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::activation::{
    activation_performance_index, closed_form_activation_probs, coordinated_activation_probs,
    ActivationProbabilities, NetworkParams, SolveMethod,
};
use crate::error::{Error, Result};
use crate::montecarlo::{
    activation_study, activation_window, estimate_uplink_coverage, uplink_window, McConfig,
};
use crate::numerics::quadrature::ToleranceSpec;
use crate::uplink::{uplink_coverage, uplink_load};

/// Exact column schema of every result table.
pub const CSV_HEADER: &str = "axis_name,axis_value,estimator,K,nu,beta,q_a,p_a,eta_a,eta_c,zeta_a,eps_K,se_q,se_p,se_eta,se_etac,seed,trials,wall_ms";

/// The swept parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    /// BS density λ_b (devices scale with the fixed density ratio).
    LambdaB,
    /// Device-per-BS ratio λ_d/λ_b at fixed λ_b.
    DensityRatio,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::LambdaB => "lambda_b",
            SweepAxis::DensityRatio => "lambda_d_over_lambda_b",
        }
    }
}

/// Which estimators populate the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimatorChoice {
    Analytic,
    MonteCarlo,
    Both,
}

impl EstimatorChoice {
    fn analytic(&self) -> bool {
        matches!(self, EstimatorChoice::Analytic | EstimatorChoice::Both)
    }
    fn monte_carlo(&self) -> bool {
        matches!(self, EstimatorChoice::MonteCarlo | EstimatorChoice::Both)
    }
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(EstimatorChoice::Analytic),
            "mc" => Ok(EstimatorChoice::MonteCarlo),
            "both" => Ok(EstimatorChoice::Both),
            other => Err(Error::Usage(format!(
                "unknown estimator selection '{other}' (use analytic, mc or both)"
            ))),
        }
    }
}

/// What each row of the experiment measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Activation probabilities (and ζ_a) per sweep point.
    Activation,
    /// Uplink coverage per sweep point, for each ν in the list.
    UplinkCoverage,
}

/// A named sweep: axis, fixed parameters, estimator selection and variants.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub name: String,
    pub kind: ExperimentKind,
    pub axis: SweepAxis,
    pub axis_values: Vec<f64>,
    /// Parameters at a placeholder density; the axis overrides per point.
    pub base: NetworkParams,
    /// λ_d/λ_b used when the axis is `LambdaB`.
    pub density_ratio: f64,
    pub estimators: EstimatorChoice,
    pub coordination_list: Vec<u32>,
    pub nu_list: Vec<f64>,
    pub beta_list: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub confidence: f64,
    pub truncation_fraction: f64,
    pub workers: usize,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axis_values.is_empty() {
            return Err(Error::Usage("sweep value list is empty".into()));
        }
        if self.coordination_list.is_empty() {
            return Err(Error::Usage("coordination list is empty".into()));
        }
        if self.beta_list.is_empty() {
            return Err(Error::Usage("beta list is empty".into()));
        }
        if self.kind == ExperimentKind::UplinkCoverage && self.nu_list.is_empty() {
            return Err(Error::Usage("uplink sweep requires a nu list".into()));
        }
        if !(self.truncation_fraction > 0.0 && self.truncation_fraction <= 0.01) {
            return Err(Error::Usage(format!(
                "truncation fraction must lie in (0, 0.01], got {}",
                self.truncation_fraction
            )));
        }
        for &v in &self.axis_values {
            self.params_at(v)?.validate()?;
        }
        Ok(())
    }

    /// Network parameters at one sweep point.
    pub fn params_at(&self, axis_value: f64) -> Result<NetworkParams> {
        let mut p = self.base;
        match self.axis {
            SweepAxis::LambdaB => {
                p.lambda_b = axis_value;
                p.lambda_d = axis_value * self.density_ratio;
            }
            SweepAxis::DensityRatio => {
                p.lambda_d = p.lambda_b * axis_value;
            }
        }
        Ok(p)
    }
}

/// One table row; `None` cells print empty.
#[derive(Clone, Debug, Default)]
pub struct ResultRow {
    pub axis_name: String,
    pub axis_value: f64,
    pub estimator: String,
    pub coordination: u32,
    pub nu: Option<f64>,
    pub beta: Option<f64>,
    pub q_a: Option<f64>,
    pub p_a: Option<f64>,
    pub eta_a: Option<f64>,
    pub eta_c: Option<f64>,
    pub zeta_a: Option<f64>,
    pub eps_k: Option<f64>,
    pub se_q: Option<f64>,
    pub se_p: Option<f64>,
    pub se_eta: Option<f64>,
    pub se_etac: Option<f64>,
    pub seed: u64,
    pub trials: Option<u64>,
    /// Per-row failure diagnostic; such rows keep empty value cells.
    pub failure: Option<String>,
}

/// A completed experiment: rows in sweep order plus run metadata.
#[derive(Clone, Debug)]
pub struct ResultTable {
    pub spec_name: String,
    pub rows: Vec<ResultRow>,
    pub master_seed: u64,
    /// Measured wall time of the whole run (metadata only; not in the CSV).
    pub wall_ms: u128,
    /// Human-readable notes accumulated during the run.
    pub notes: Vec<String>,
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        // 12 significant digits
        Some(x) => format!("{x:.11e}"),
        None => String::new(),
    }
}

impl ResultTable {
    /// Serialize to the fixed CSV schema; byte-deterministic for a given
    /// (spec, seed).
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(128 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let trials = r.trials.map(|t| t.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.axis_name,
                fmt_opt(Some(r.axis_value)),
                r.estimator,
                r.coordination,
                fmt_opt(r.nu),
                fmt_opt(r.beta),
                fmt_opt(r.q_a),
                fmt_opt(r.p_a),
                fmt_opt(r.eta_a),
                fmt_opt(r.eta_c),
                fmt_opt(r.zeta_a),
                fmt_opt(r.eps_k),
                fmt_opt(r.se_q),
                fmt_opt(r.se_p),
                fmt_opt(r.se_eta),
                fmt_opt(r.se_etac),
                r.seed,
                trials,
                "", // wall_ms: timing is run metadata, kept out of the CSV
            );
        }
        out
    }
}

/// Write the table to `path` as CSV.
pub fn write_csv(table: &ResultTable, path: &Path) -> Result<()> {
    std::fs::write(path, table.to_csv())?;
    Ok(())
}

/// The built-in presets.
pub const PRESET_NAMES: [&str; 8] = [
    "fig1",
    "fig2",
    "fig3",
    "fig4",
    "fig5",
    "fig6",
    "fig7",
    "table1-defaults",
];

/// One-line description of each preset.
pub fn preset_description(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig1" => "activation probabilities and fitted eps vs BS density (K=1, beta=0)",
        "fig2" => "uplink coverage vs device ratio under fractional power control, lambda_b=1e-5",
        "fig3" => "uplink coverage vs device ratio under fractional power control, lambda_b=5e-5",
        "fig4" => "coordinated activation (K=2) vs BS density for beta in {1/2, -1/4}",
        "fig5" => "coordinated activation (K=3) vs BS density for beta in {1/2, -1/4}",
        "fig6" => "uplink coverage vs device ratio with K=3 coordination and beta=1/2",
        "fig7" => "activation performance index vs BS density for K in {2,3}",
        "table1-defaults" => "single reference point, all estimators",
        _ => return None,
    })
}

pub fn list_presets() -> Vec<(&'static str, &'static str)> {
    PRESET_NAMES
        .iter()
        .map(|&n| (n, preset_description(n).expect("known preset")))
        .collect()
}

fn lambda_b_sweep() -> Vec<f64> {
    (1..=15).map(|i| i as f64 * 1e-5).collect()
}

fn ratio_sweep() -> Vec<f64> {
    (0..=8).map(|i| 100.0 + 50.0 * i as f64).collect()
}

const NU_CURVES: [f64; 6] = [-0.25, 0.0, 0.25, 0.5, 0.75, 1.0];

/// Build a named preset specification.
pub fn preset(name: &str) -> Result<ExperimentSpec> {
    let base = NetworkParams::reference(8e-5, 100.0);
    let common = ExperimentSpec {
        name: name.to_string(),
        kind: ExperimentKind::Activation,
        axis: SweepAxis::LambdaB,
        axis_values: lambda_b_sweep(),
        base,
        density_ratio: 100.0,
        estimators: EstimatorChoice::Both,
        coordination_list: vec![1],
        nu_list: vec![],
        beta_list: vec![0.0],
        trials: 100_000,
        master_seed: 20_240_901,
        confidence: 0.95,
        truncation_fraction: 1e-3,
        workers: 0,
    };
    let spec = match name {
        "fig1" => common,
        "fig2" | "fig3" => {
            let lambda_b = if name == "fig2" { 1e-5 } else { 5e-5 };
            ExperimentSpec {
                kind: ExperimentKind::UplinkCoverage,
                axis: SweepAxis::DensityRatio,
                axis_values: ratio_sweep(),
                base: NetworkParams::reference(lambda_b, 100.0),
                nu_list: NU_CURVES.to_vec(),
                ..common
            }
        }
        "fig4" | "fig5" => ExperimentSpec {
            coordination_list: vec![if name == "fig4" { 2 } else { 3 }],
            beta_list: vec![0.5, -0.25],
            ..common
        },
        "fig6" => ExperimentSpec {
            kind: ExperimentKind::UplinkCoverage,
            axis: SweepAxis::DensityRatio,
            axis_values: ratio_sweep(),
            base: NetworkParams::reference(1e-5, 100.0),
            nu_list: NU_CURVES.to_vec(),
            coordination_list: vec![3],
            beta_list: vec![0.5],
            ..common
        },
        "fig7" => ExperimentSpec {
            coordination_list: vec![2, 3],
            beta_list: vec![0.5, -0.25],
            ..common
        },
        "table1-defaults" => ExperimentSpec {
            axis_values: vec![8e-5],
            ..common
        },
        other => {
            return Err(Error::Usage(format!(
                "unknown preset '{other}'; available: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(spec)
}

// deterministic per-row substream seed
fn row_seed(master: u64, row_index: u64) -> u64 {
    let mut x = master ^ row_index.wrapping_mul(0xD6E8_FEB8_6659_FD93);
    x = (x ^ (x >> 32)).wrapping_mul(0xD6E8_FEB8_6659_FD93);
    x ^ (x >> 32)
}

struct RowJob {
    index: u64,
    axis_value: f64,
    estimator: &'static str,
    coordination: u32,
    nu: Option<f64>,
    beta: f64,
}

/// Run every (axis value × estimator × K × ν × β) combination of the spec.
/// Per-row failures are recorded in the row, not propagated, unless every
/// row fails.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ResultTable> {
    spec.validate()?;
    let started = std::time::Instant::now();
    let mut jobs = Vec::new();
    let mut index = 0u64;
    for &axis_value in &spec.axis_values {
        for estimator in ["analytic", "mc"] {
            let enabled = match estimator {
                "analytic" => spec.estimators.analytic(),
                _ => spec.estimators.monte_carlo(),
            };
            if !enabled {
                continue;
            }
            for &coordination in &spec.coordination_list {
                for &beta in &spec.beta_list {
                    match spec.kind {
                        ExperimentKind::Activation => {
                            jobs.push(RowJob {
                                index,
                                axis_value,
                                estimator,
                                coordination,
                                nu: None,
                                beta,
                            });
                            index += 1;
                        }
                        ExperimentKind::UplinkCoverage => {
                            for &nu in &spec.nu_list {
                                jobs.push(RowJob {
                                    index,
                                    axis_value,
                                    estimator,
                                    coordination,
                                    nu: Some(nu),
                                    beta,
                                });
                                index += 1;
                            }
                        }
                    }
                }
            }
        }
    }

    let mut rows = Vec::with_capacity(jobs.len());
    let mut notes = Vec::new();
    let mut failures = 0usize;
    for job in &jobs {
        match run_row(spec, job) {
            Ok(r) => rows.push(r),
            Err(e) => {
                failures += 1;
                notes.push(format!(
                    "row {} (axis {}, {}, K={}, beta={}): {e}",
                    job.index, job.axis_value, job.estimator, job.coordination, job.beta
                ));
                rows.push(ResultRow {
                    axis_name: spec.axis.name().to_string(),
                    axis_value: job.axis_value,
                    estimator: job.estimator.to_string(),
                    coordination: job.coordination,
                    nu: job.nu,
                    beta: Some(job.beta),
                    seed: spec.master_seed,
                    failure: Some(e.to_string()),
                    ..Default::default()
                });
            }
        }
    }
    if failures == jobs.len() {
        return Err(Error::Run(format!(
            "all {} rows failed; first diagnostics: {}",
            failures,
            notes.first().cloned().unwrap_or_default()
        )));
    }
    Ok(ResultTable {
        spec_name: spec.name.clone(),
        rows,
        master_seed: spec.master_seed,
        wall_ms: started.elapsed().as_millis(),
        notes,
    })
}

// ε_K for an analytic row: fitted from simulation when Monte Carlo is
// enabled, otherwise 0 (never silently defaulted to anything else).
fn row_epsilon(spec: &ExperimentSpec, job: &RowJob, params: &NetworkParams) -> Result<(f64, bool)> {
    if !spec.estimators.monte_carlo() {
        return Ok((0.0, false));
    }
    let mc = McConfig {
        trials: spec.trials,
        master_seed: row_seed(spec.master_seed, job.index),
        window: activation_window(params, job.beta, spec.truncation_fraction)?,
        confidence: spec.confidence,
        workers: spec.workers,
    };
    let eps = crate::montecarlo::estimate_epsilon(params, job.coordination, job.beta, &mc, &[])?;
    Ok((eps.epsilon, true))
}

fn analytic_activation(
    params: &NetworkParams,
    coordination: u32,
    epsilon: f64,
    beta: f64,
) -> Result<ActivationProbabilities> {
    let method = if (params.path_loss_exp - 4.0).abs() < 1e-12 {
        SolveMethod::ClosedFormAlpha4
    } else {
        SolveMethod::NumericalInversion
    };
    coordinated_activation_probs(params, coordination, epsilon, beta, method)
}

fn run_row(spec: &ExperimentSpec, job: &RowJob) -> Result<ResultRow> {
    let params = spec.params_at(job.axis_value)?;
    let mut row = ResultRow {
        axis_name: spec.axis.name().to_string(),
        axis_value: job.axis_value,
        estimator: job.estimator.to_string(),
        coordination: job.coordination,
        nu: job.nu,
        beta: Some(job.beta),
        seed: spec.master_seed,
        ..Default::default()
    };
    let seed = row_seed(spec.master_seed, job.index);
    match (spec.kind, job.estimator) {
        (ExperimentKind::Activation, "analytic") => {
            let (epsilon, fitted) = row_epsilon(spec, job, &params)?;
            let probs = analytic_activation(&params, job.coordination, epsilon, job.beta)?;
            row.q_a = Some(probs.q_a);
            row.p_a = Some(probs.p_a);
            row.eta_a = Some(probs.eta_a);
            row.zeta_a = activation_performance_index(&probs).ok();
            row.eps_k = fitted.then_some(epsilon);
        }
        (ExperimentKind::Activation, _) => {
            let mc = McConfig {
                trials: spec.trials,
                master_seed: seed,
                window: activation_window(&params, job.beta, spec.truncation_fraction)?,
                confidence: spec.confidence,
                workers: spec.workers,
            };
            let (est, eps) = activation_study(&params, job.coordination, job.beta, &mc, &[])?;
            let probs = ActivationProbabilities {
                q_a: est.q_a.mean,
                p_a: est.p_a.mean,
                eta_a: est.eta_a.mean,
                epsilon: eps.epsilon,
                coordination: job.coordination,
                method: crate::activation::ActivationMethod::ExactInversion,
            };
            row.q_a = Some(est.q_a.mean);
            row.p_a = Some(est.p_a.mean);
            row.eta_a = Some(est.eta_a.mean);
            row.zeta_a = activation_performance_index(&probs).ok();
            row.eps_k = Some(eps.epsilon);
            row.se_q = Some(est.q_a.std_error);
            row.se_p = Some(est.p_a.std_error);
            row.se_eta = Some(est.eta_a.std_error);
            row.trials = Some(spec.trials);
        }
        (ExperimentKind::UplinkCoverage, est_kind) => {
            let nu = job.nu.expect("uplink rows carry nu");
            // the activation side feeding the interferer density
            let (epsilon, fitted) = row_epsilon(spec, job, &params)?;
            let probs = analytic_activation(&params, job.coordination, epsilon, job.beta)?;
            let eta_a = probs.eta_a.max(1e-12);
            row.eta_a = Some(probs.eta_a);
            row.eps_k = fitted.then_some(epsilon);
            if est_kind == "analytic" {
                let load = uplink_load(&params, eta_a)?;
                let tol = ToleranceSpec::default();
                row.eta_c = Some(uplink_coverage(nu, load.n_a, &tol)?);
            } else {
                let mc = McConfig {
                    trials: spec.trials,
                    master_seed: seed,
                    window: uplink_window(&params, nu, eta_a, spec.truncation_fraction)?,
                    confidence: spec.confidence,
                    workers: spec.workers,
                };
                let est = estimate_uplink_coverage(&params, nu, eta_a, params.sir_threshold, &mc)?;
                row.eta_c = Some(est.mean);
                row.se_etac = Some(est.std_error);
                row.trials = Some(spec.trials);
            }
        }
    }
    Ok(row)
}

/// Emit a gnuplot script that plots the table's curve families against the
/// CSV at `csv_name` (a relative path; the script stays portable).
pub fn emit_plot_script(table: &ResultTable, csv_name: &str, path: &Path) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::Usage("cannot plot an empty table".into()));
    }
    let axis = table.rows[0].axis_name.clone();
    let uplink = table.rows.iter().any(|r| r.eta_c.is_some());
    let mut script = String::new();
    let _ = writeln!(
        script,
        "# gnuplot script generated by cellwake: {}",
        table.spec_name
    );
    let _ = writeln!(script, "set datafile separator ','");
    let _ = writeln!(script, "set key outside");
    let _ = writeln!(script, "set xlabel '{axis}'");
    let _ = writeln!(
        script,
        "set ylabel '{}'",
        if uplink { "eta_c" } else { "probability" }
    );
    let _ = writeln!(script, "set grid");
    // one curve per (estimator, K, nu, beta, column) family present in the table
    let mut families: Vec<(String, u32, String, String)> = Vec::new();
    for r in &table.rows {
        let key = (
            r.estimator.clone(),
            r.coordination,
            fmt_opt(r.nu),
            fmt_opt(r.beta),
        );
        if !families.contains(&key) {
            families.push(key);
        }
    }
    let mut plots = Vec::new();
    let columns: &[(usize, &str)] = if uplink {
        &[(10, "eta_c")]
    } else {
        &[(7, "q_a"), (8, "p_a"), (9, "eta_a")]
    };
    for (est, k, nu, beta) in &families {
        for (col, label) in columns {
            let mut title = format!("{label} {est} K={k}");
            if !nu.is_empty() {
                let _ = write!(title, " nu={nu}");
            }
            if !beta.is_empty() {
                let _ = write!(title, " beta={beta}");
            }
            let selector = format!(
                "(strcol(3) eq '{est}' && strcol(4) eq '{k}' && strcol(5) eq '{nu}' \
                 && strcol(6) eq '{beta}' ? column({col}) : NaN)",
            );
            plots.push(format!(
                "'{csv_name}' using 2:{selector} with linespoints title '{title}'"
            ));
        }
    }
    let _ = writeln!(script, "plot \\\n  {}", plots.join(", \\\n  "));
    std::fs::write(path, script)?;
    Ok(())
}

/// The known inconsistency report for the reference activation sweep: the
/// originally reported point values (p_a, q_a) = (0.75, 0.2) at λ_b = 8e-5
/// are mutually inconsistent with the closed-form total η_a = erf(z) at the
/// same parameters. The sweep reports both readings.
pub fn discrepancy_report(table: &ResultTable, spec: &ExperimentSpec) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "# Reported-value consistency check: {}", spec.name);
    let _ = writeln!(
        out,
        "# Reference point values p_a = 0.75, q_a = 0.2 at lambda_b = 8e-5 imply\n\
         # eta_a = mu p_a + (1-mu) q_a = 0.3375 (mu = 0.25). The closed-form total\n\
         # at those parameters is eta_a = erf(0.697886...) = 0.676338, so the\n\
         # reported pair cannot satisfy the decomposition identity. Both readings\n\
         # are listed below; this sweep's tables carry the closed-form-consistent\n\
         # values."
    );
    let params = NetworkParams::reference(8e-5, 100.0);
    let closed = closed_form_activation_probs(&params, 0.0)?;
    let _ = writeln!(out, "closed_form_eta_a_at_8e-5 = {:.12e}", closed.eta_a);
    let _ = writeln!(out, "reported_p_a = 0.75");
    let _ = writeln!(out, "reported_q_a = 0.2");
    let _ = writeln!(out, "reported_implied_eta_a = 0.3375");
    // relative growth between 8e-5 and 1.2e-4 from the analytic rows
    let pick = |axis: f64| -> Option<&ResultRow> {
        table.rows.iter().find(|r| {
            r.estimator == "analytic" && (r.axis_value - axis).abs() < 1e-12 && r.failure.is_none()
        })
    };
    if let (Some(a), Some(b)) = (pick(8e-5), pick(1.2e-4)) {
        if let (Some(qa), Some(qb), Some(pa), Some(pb)) = (a.q_a, b.q_a, a.p_a, b.p_a) {
            let q_growth = qb / qa - 1.0;
            let p_growth = pb / pa - 1.0;
            let _ = writeln!(out, "q_a_relative_growth_8e-5_to_1.2e-4 = {q_growth:.6}");
            let _ = writeln!(out, "p_a_relative_growth_8e-5_to_1.2e-4 = {p_growth:.6}");
            let _ = writeln!(
                out,
                "false_activation_grows_faster = {}",
                q_growth > p_growth
            );
        }
    }
    Ok(out)
}

/// Everything a `run` invocation writes: CSV, optional plot script and
/// metadata, and for the reference activation sweep the discrepancy report.
pub fn write_outputs(
    table: &ResultTable,
    spec: &ExperimentSpec,
    out_dir: &Path,
    csv_only: bool,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let csv_name = format!("{}.csv", spec.name);
    let csv_path = out_dir.join(&csv_name);
    write_csv(table, &csv_path)?;
    written.push(csv_path);
    if !csv_only {
        let plot_path = out_dir.join(format!("{}.gp", spec.name));
        emit_plot_script(table, &csv_name, &plot_path)?;
        written.push(plot_path);
        let meta_path = out_dir.join(format!("{}.meta.txt", spec.name));
        let mut meta = String::new();
        let _ = writeln!(meta, "name = {}", spec.name);
        let _ = writeln!(meta, "seed = {}", table.master_seed);
        let _ = writeln!(meta, "trials = {}", spec.trials);
        let _ = writeln!(meta, "rows = {}", table.rows.len());
        let _ = writeln!(meta, "wall_ms = {}", table.wall_ms);
        let _ = writeln!(
            meta,
            "failed_rows = {}",
            table.rows.iter().filter(|r| r.failure.is_some()).count()
        );
        for note in &table.notes {
            let _ = writeln!(meta, "note = {note}");
        }
        std::fs::write(&meta_path, meta)?;
        written.push(meta_path);
        if spec.name == "fig1" {
            let report_path = out_dir.join("fig1_discrepancy.txt");
            std::fs::write(&report_path, discrepancy_report(table, spec)?)?;
            written.push(report_path);
        }
    }
    Ok(written)
}

/// Parse a flat key = value experiment config (# starts a comment).
/// Unset keys keep the single-point reference defaults.
pub fn parse_config(text: &str) -> Result<ExperimentSpec> {
    let mut spec = preset("table1-defaults")?;
    spec.name = "custom".to_string();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Usage(format!("line {}: expected key = value", lineno + 1))
        })?;
        apply_setting(&mut spec, key.trim(), value.trim())
            .map_err(|e| Error::Usage(format!("line {}: {e}", lineno + 1)))?;
    }
    Ok(spec)
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse()
        .map_err(|_| Error::Usage(format!("{key}: '{value}' is not a number")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|v| parse_f64(key, v.trim()))
        .collect()
}

/// Apply one configuration key to the spec. `activation_threshold_uw` is in
/// µW (converted to W here); all other powers are in W, densities in per-m².
pub fn apply_setting(spec: &mut ExperimentSpec, key: &str, value: &str) -> Result<()> {
    match key {
        "name" => spec.name = value.to_string(),
        "kind" => {
            spec.kind = match value {
                "activation" => ExperimentKind::Activation,
                "uplink" => ExperimentKind::UplinkCoverage,
                other => {
                    return Err(Error::Usage(format!(
                        "kind must be activation or uplink, got '{other}'"
                    )))
                }
            }
        }
        "axis" => {
            spec.axis = match value {
                "lambda_b" => SweepAxis::LambdaB,
                "lambda_d_over_lambda_b" => SweepAxis::DensityRatio,
                other => {
                    return Err(Error::Usage(format!(
                        "axis must be lambda_b or lambda_d_over_lambda_b, got '{other}'"
                    )))
                }
            }
        }
        "axis_values" => spec.axis_values = parse_list(key, value)?,
        "density_ratio" => spec.density_ratio = parse_f64(key, value)?,
        "lambda_b" => {
            spec.base.lambda_b = parse_f64(key, value)?;
            spec.base.lambda_d = spec.base.lambda_b * spec.density_ratio;
        }
        "lambda_d" => spec.base.lambda_d = parse_f64(key, value)?,
        "bs_power" => spec.base.bs_power = parse_f64(key, value)?,
        "device_power" => spec.base.device_power = parse_f64(key, value)?,
        "activation_threshold_uw" => {
            spec.base.activation_threshold = parse_f64(key, value)? * 1e-6
        }
        "sir_threshold" => spec.base.sir_threshold = parse_f64(key, value)?,
        "bs_active_prob" => spec.base.bs_active_prob = parse_f64(key, value)?,
        "rb_prob" => spec.base.rb_prob = parse_f64(key, value)?,
        "path_loss_exp" => spec.base.path_loss_exp = parse_f64(key, value)?,
        "nakagami_m" => spec.base.nakagami_m = parse_f64(key, value)?,
        "lambda_b_min" => spec.base.lambda_b_min = parse_f64(key, value)?,
        "lambda_b_max" => spec.base.lambda_b_max = parse_f64(key, value)?,
        "estimators" => spec.estimators = EstimatorChoice::parse(value)?,
        "k_list" => {
            spec.coordination_list = parse_list(key, value)?
                .into_iter()
                .map(|v| v as u32)
                .collect()
        }
        "nu_list" => spec.nu_list = parse_list(key, value)?,
        "beta_list" => spec.beta_list = parse_list(key, value)?,
        "trials" => spec.trials = parse_f64(key, value)? as u64,
        "seed" => {
            spec.master_seed = value
                .parse()
                .map_err(|_| Error::Usage(format!("seed: '{value}' is not a u64")))?
        }
        "confidence" => spec.confidence = parse_f64(key, value)?,
        "truncation_fraction" => spec.truncation_fraction = parse_f64(key, value)?,
        "workers" => spec.workers = parse_f64(key, value)? as usize,
        other => return Err(Error::Usage(format!("unknown config key '{other}'"))),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec() -> ExperimentSpec {
        let mut spec = preset("fig1").unwrap();
        spec.axis_values = vec![6e-5, 8e-5];
        spec.trials = 2_000;
        spec
    }

    #[test]
    fn preset_reference_values() {
        let t1 = preset("table1-defaults").unwrap();
        assert_eq!(t1.base.bs_power, 20.0);
        assert_eq!(t1.base.bs_active_prob, 0.25);
        assert_eq!(t1.base.activation_threshold, 1e-7);
        assert_eq!(t1.base.path_loss_exp, 4.0);
        assert_eq!(t1.base.device_power, 0.2);
        assert_eq!(t1.base.rb_prob, 0.01);
        assert_eq!(t1.base.lambda_b_min, 5e-6);
        assert_eq!(t1.base.lambda_b_max, 3e-4);
        assert_eq!(t1.base.nakagami_m, 1.0);

        let f1 = preset("fig1").unwrap();
        assert_eq!(f1.axis, SweepAxis::LambdaB);
        assert_eq!(f1.axis_values.first(), Some(&1e-5));
        assert_eq!(f1.axis_values.last(), Some(&1.5e-4));

        let f4 = preset("fig4").unwrap();
        assert_eq!(f4.coordination_list, vec![2]);
        assert_eq!(f4.beta_list, vec![0.5, -0.25]);

        assert!(preset("fig9").is_err());
    }

    #[test]
    fn empty_sweep_is_usage_error() {
        let mut spec = tiny_spec();
        spec.axis_values.clear();
        match run_experiment(&spec) {
            Err(Error::Usage(_)) => {}
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn csv_header_and_roundtrip() {
        let mut spec = tiny_spec();
        spec.estimators = EstimatorChoice::Analytic;
        let table = run_experiment(&spec).unwrap();
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        // round-trip the analytic eta_a cells at 1e-12 relative
        for (line, row) in lines.zip(&table.rows) {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 19);
            let eta: f64 = cells[8].parse().unwrap();
            let want = row.eta_a.unwrap();
            assert!((eta - want).abs() <= 1e-12 * want.abs());
            assert_eq!(cells[18], ""); // wall_ms stays empty
        }
    }

    #[test]
    fn reruns_are_byte_identical() {
        let spec = tiny_spec();
        let a = run_experiment(&spec).unwrap().to_csv();
        let b = run_experiment(&spec).unwrap().to_csv();
        assert_eq!(a, b);
    }

    #[test]
    fn mc_and_analytic_rows_agree() {
        let spec = tiny_spec();
        let table = run_experiment(&spec).unwrap();
        for axis in [6e-5, 8e-5] {
            let find = |est: &str| {
                table
                    .rows
                    .iter()
                    .find(|r| r.estimator == est && (r.axis_value - axis).abs() < 1e-12)
                    .unwrap()
            };
            let mc = find("mc");
            let an = find("analytic");
            let se = mc.se_eta.unwrap();
            assert!(
                (mc.eta_a.unwrap() - an.eta_a.unwrap()).abs() <= 3.0 * se,
                "eta mismatch at {axis}"
            );
        }
    }

    #[test]
    fn fig7_rows_carry_the_index() {
        let mut spec = preset("fig7").unwrap();
        spec.axis_values = vec![8e-5];
        spec.estimators = EstimatorChoice::Analytic;
        let table = run_experiment(&spec).unwrap();
        assert_eq!(table.rows.len(), 4); // K in {2,3} × beta in {1/2, -1/4}
        for row in &table.rows {
            assert!(row.zeta_a.is_some(), "zeta missing in {row:?}");
        }
    }

    #[test]
    fn plot_script_is_portable() {
        let spec = tiny_spec();
        let table = run_experiment(&spec).unwrap();
        let dir = std::env::temp_dir().join("cellwake-plot-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("fig1.gp");
        emit_plot_script(&table, "fig1.csv", &path).unwrap();
        let script = std::fs::read_to_string(&path).unwrap();
        assert!(script.contains("plot"));
        assert!(script.contains("'fig1.csv'"));
        // no absolute paths
        assert!(!script.contains(dir.to_str().unwrap()));
        // single-row tables still emit a valid script
        let single = ResultTable {
            rows: table.rows[..1].to_vec(),
            ..table.clone()
        };
        emit_plot_script(&single, "one.csv", &dir.join("one.gp")).unwrap();
    }

    #[test]
    fn uplink_preset_produces_coverage() {
        let mut spec = preset("fig2").unwrap();
        spec.axis_values = vec![100.0];
        spec.nu_list = vec![0.0, 0.5];
        spec.estimators = EstimatorChoice::Analytic;
        let table = run_experiment(&spec).unwrap();
        assert_eq!(table.rows.len(), 2);
        for row in &table.rows {
            assert!(row.eta_c.is_some());
            assert!(row.eta_a.is_some());
            assert!(row.q_a.is_none());
        }
        let c0 = table.rows[1].eta_c.unwrap();
        assert!(c0 > 0.0 && c0 < 1.0);
    }

    #[test]
    fn config_parsing_units_and_errors() {
        let text = "\
# uplink sweep
name = my-sweep
kind = uplink
axis = lambda_d_over_lambda_b
axis_values = 100, 200, 300
lambda_b = 1e-5
activation_threshold_uw = 0.1
nu_list = 0, 0.5
estimators = analytic
";
        let spec = parse_config(text).unwrap();
        assert_eq!(spec.name, "my-sweep");
        assert_eq!(spec.kind, ExperimentKind::UplinkCoverage);
        assert_eq!(spec.axis_values, vec![100.0, 200.0, 300.0]);
        // µW convert to W
        assert!((spec.base.activation_threshold - 1e-7).abs() < 1e-20);
        assert_eq!(spec.base.lambda_b, 1e-5);
        spec.validate().unwrap();

        assert!(parse_config("bogus_key = 3").is_err());
        assert!(parse_config("lambda_b 3").is_err());
        assert!(parse_config("lambda_b = x").is_err());
    }
}
