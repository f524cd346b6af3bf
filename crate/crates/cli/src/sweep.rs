//! Parameter sweeps over `(α, β, λ)` grids.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use chaoslab_core::{EconomyParams, NumericSettings};

use crate::args::Range;
use crate::classify::{evaluate_point, MethodSel, PointReport};
use crate::format::{opt_bool, opt_f64, sig17};
use crate::{exit, open_output, CliError, CliResult, CommonOpts, VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LambdaMode {
    Absolute(Range),
    /// `count` points evenly spaced strictly inside each cell's `(λ_G_low, λ_max)`.
    WindowRelative(usize),
}

impl std::fmt::Display for LambdaMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LambdaMode::Absolute(r) => write!(f, "{r}"),
            LambdaMode::WindowRelative(n) => write!(f, "window:{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub alpha_range: Range,
    pub beta_range: Range,
    pub lambda_mode: LambdaMode,
    pub methods: MethodSel,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl SweepConfig {
    pub fn validate(&self) -> CliResult<()> {
        let usage = CliError::Usage;
        self.alpha_range.validate().map_err(usage)?;
        self.beta_range.validate().map_err(usage)?;
        self.alpha_range.validate_unit("alpha").map_err(usage)?;
        self.beta_range.validate_unit("beta").map_err(usage)?;
        match self.lambda_mode {
            LambdaMode::Absolute(r) => {
                r.validate().map_err(usage)?;
                if !(r.lo > 0.0) {
                    return Err(CliError::Usage("lambda range must be positive".into()));
                }
            }
            LambdaMode::WindowRelative(0) => {
                return Err(CliError::Usage(
                    "lambda window count must be at least 1".into(),
                ))
            }
            LambdaMode::WindowRelative(_) => {}
        }
        Ok(())
    }

    /// Cells in output order: α-major, then β, then λ.
    pub fn cells(&self) -> Vec<(f64, f64, f64)> {
        let mut cells = Vec::new();
        for &alpha in &self.alpha_range.points() {
            for &beta in &self.beta_range.points() {
                let lambdas = match self.lambda_mode {
                    LambdaMode::Absolute(r) => r.points(),
                    LambdaMode::WindowRelative(n) => {
                        chaoslab_core::ThresholdSet::new(alpha, beta).window_points(n)
                    }
                };
                cells.extend(lambdas.into_iter().map(|l| (alpha, beta, l)));
            }
        }
        cells
    }
}

/// One output line of a sweep. `None` is written as a blank CSV field / JSON null.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub lambda_g_low: f64,
    pub lambda_pi: f64,
    pub lambda_chaos: f64,
    pub lambda_max: f64,
    pub in_class_g: bool,
    pub f2_of_m: Option<f64>,
    pub f3_of_m: Option<f64>,
    pub pi_max: Option<f64>,
    pub odd_cycle_cf: Option<bool>,
    pub turbulent_cf: Option<bool>,
    pub odd_cycle_num: Option<bool>,
    pub turbulent_num: Option<bool>,
    pub agree: Option<bool>,
}

pub const CSV_HEADER: &str = "alpha,beta,lambda,lambda_g_low,lambda_pi,lambda_chaos,lambda_max,in_class_g,f2_of_m,f3_of_m,pi_max,odd_cycle_cf,turbulent_cf,odd_cycle_num,turbulent_num,agree";

impl From<&PointReport> for SweepRow {
    fn from(r: &PointReport) -> Self {
        let t = r.thresholds;
        let source = r.numerical.or(r.closed_form);
        SweepRow {
            alpha: r.alpha,
            beta: r.beta,
            lambda: r.lambda,
            lambda_g_low: t.lambda_g_low,
            lambda_pi: t.lambda_pi,
            lambda_chaos: t.lambda_chaos,
            lambda_max: t.lambda_max,
            in_class_g: r.in_class_g(),
            f2_of_m: source.map(|v| v.f2_of_m),
            f3_of_m: source.map(|v| v.f3_of_m),
            pi_max: source.map(|v| v.pi_max),
            odd_cycle_cf: r.closed_form.map(|v| v.odd_cycle),
            turbulent_cf: r.closed_form.map(|v| v.turbulent_second_iterate),
            odd_cycle_num: r.numerical.map(|v| v.odd_cycle),
            turbulent_num: r.numerical.map(|v| v.turbulent_second_iterate),
            agree: r.agree,
        }
    }
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        [
            sig17(self.alpha),
            sig17(self.beta),
            sig17(self.lambda),
            sig17(self.lambda_g_low),
            sig17(self.lambda_pi),
            sig17(self.lambda_chaos),
            sig17(self.lambda_max),
            self.in_class_g.to_string(),
            opt_f64(self.f2_of_m),
            opt_f64(self.f3_of_m),
            opt_f64(self.pi_max),
            opt_bool(self.odd_cycle_cf),
            opt_bool(self.turbulent_cf),
            opt_bool(self.odd_cycle_num),
            opt_bool(self.turbulent_num),
            opt_bool(self.agree),
        ]
        .join(",")
    }
}

/// Evaluates every cell on `pool`; rows come back in cell order.
pub fn evaluate_cells(
    cells: &[(f64, f64, f64)],
    methods: MethodSel,
    settings: &NumericSettings,
    pool: &rayon::ThreadPool,
) -> CliResult<Vec<PointReport>> {
    pool.install(|| {
        cells
            .par_iter()
            .map(|&(a, b, l)| {
                let params = EconomyParams::new(a, b, l)?;
                evaluate_point(&params, methods, settings)
            })
            .collect()
    })
}

pub fn sweep_rows(
    config: &SweepConfig,
    settings: &NumericSettings,
    pool: &rayon::ThreadPool,
) -> CliResult<Vec<SweepRow>> {
    config.validate()?;
    let reports = evaluate_cells(&config.cells(), config.methods, settings, pool)?;
    Ok(reports.iter().map(SweepRow::from).collect())
}

pub fn render_csv(config: &SweepConfig, settings: &NumericSettings, rows: &[SweepRow]) -> String {
    let mut s = String::new();
    s.push_str(&format!("# chaoslab {VERSION} sweep\n"));
    s.push_str(&format!("# alpha = {}\n", config.alpha_range));
    s.push_str(&format!("# beta = {}\n", config.beta_range));
    s.push_str(&format!("# lambda = {}\n", config.lambda_mode));
    s.push_str(&format!("# methods = {}\n", config.methods.label()));
    s.push_str(&format!(
        "# eps_cmp = {}, eps_root = {}, eps_band = {}\n",
        settings.eps_cmp, settings.eps_root, settings.eps_band
    ));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

#[derive(Debug, Default, Deserialize)]
#[serde(untagged)]
enum RangeValue {
    Number(f64),
    Text(String),
    #[default]
    Missing,
}

impl RangeValue {
    fn to_range(&self) -> CliResult<Option<Range>> {
        match self {
            RangeValue::Number(x) => Ok(Some(Range::single(*x))),
            RangeValue::Text(s) => Range::parse(s).map(Some).map_err(CliError::Usage),
            RangeValue::Missing => Ok(None),
        }
    }
}

/// Flat key-value JSON document accepted by `sweep --config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    alpha: RangeValue,
    #[serde(default)]
    beta: RangeValue,
    #[serde(default)]
    lambda: RangeValue,
    lambda_window: Option<usize>,
    method: Option<MethodSel>,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
}

impl<'de> Deserialize<'de> for MethodSel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        MethodSel::from_str(&s, true).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// α values: VALUE or LO:HI:COUNT.
    #[arg(long)]
    pub alpha: Option<String>,
    /// β values: VALUE or LO:HI:COUNT.
    #[arg(long)]
    pub beta: Option<String>,
    /// Absolute λ values: VALUE or LO:HI:COUNT.
    #[arg(long, conflicts_with = "lambda_window")]
    pub lambda: Option<String>,
    /// Number of λ values spaced inside each cell's (λ_G_low, λ_max).
    #[arg(long)]
    pub lambda_window: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<MethodSel>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Flat JSON config; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonOpts,
}

fn load_config(path: &Path) -> CliResult<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

impl SweepArgs {
    pub fn to_config(&self) -> CliResult<SweepConfig> {
        let file = match &self.config {
            Some(p) => load_config(p)?,
            None => ConfigFile::default(),
        };
        let flag_range = |s: &Option<String>| -> CliResult<Option<Range>> {
            s.as_deref()
                .map(|s| Range::parse(s).map_err(CliError::Usage))
                .transpose()
        };
        let pick = |flag: Option<Range>, file: Option<Range>, name: &str| {
            flag.or(file)
                .ok_or_else(|| CliError::Usage(format!("missing --{name}")))
        };
        let alpha_range = pick(flag_range(&self.alpha)?, file.alpha.to_range()?, "alpha")?;
        let beta_range = pick(flag_range(&self.beta)?, file.beta.to_range()?, "beta")?;

        let lambda_mode = match (flag_range(&self.lambda)?, self.lambda_window) {
            (Some(r), _) => LambdaMode::Absolute(r),
            (None, Some(n)) => LambdaMode::WindowRelative(n),
            (None, None) => match (file.lambda.to_range()?, file.lambda_window) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage(
                        "config sets both lambda and lambda_window".into(),
                    ))
                }
                (Some(r), None) => LambdaMode::Absolute(r),
                (None, Some(n)) => LambdaMode::WindowRelative(n),
                (None, None) => {
                    return Err(CliError::Usage(
                        "missing --lambda or --lambda-window".into(),
                    ))
                }
            },
        };

        let config = SweepConfig {
            alpha_range,
            beta_range,
            lambda_mode,
            methods: self.method.or(file.method).unwrap_or(MethodSel::Both),
            output_path: self.out.clone().or(file.out),
            output_format: self.format.or(file.format).unwrap_or(OutputFormat::Csv),
        };
        config.validate()?;
        Ok(config)
    }
}

pub fn run(args: &SweepArgs, out: &mut dyn Write) -> CliResult<i32> {
    let settings = args.common.settings()?;
    let config = args.to_config()?;
    let pool = args.common.pool()?;
    let file = open_output(config.output_path.as_deref())?;

    let rows = sweep_rows(&config, &settings, &pool)?;
    let body = match config.output_format {
        OutputFormat::Csv => render_csv(&config, &settings, &rows),
        OutputFormat::Json => {
            serde_json::to_string_pretty(&rows).map_err(|e| CliError::Internal(e.to_string()))?
                + "\n"
        }
    };
    match file {
        Some(mut f) => f
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Output(e.to_string()))?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(exit::OK)
}
