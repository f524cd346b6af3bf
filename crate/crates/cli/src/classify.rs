use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use chaoslab_core::gate::{classify_closed_form, classify_numerical, gate_check};
use chaoslab_core::{
    ChaosError, ChaosVerdict, EconomyParams, GateReport, Method, NumericSettings, ThresholdSet,
    TrappingInterval,
};

use crate::args::parse_real;
use crate::{emit, exit, CliError, CliResult, CommonOpts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodSel {
    Both,
    ClosedForm,
    Numerical,
}

impl MethodSel {
    pub fn includes(self, m: Method) -> bool {
        match self {
            MethodSel::Both => true,
            MethodSel::ClosedForm => m == Method::ClosedForm,
            MethodSel::Numerical => m == Method::Numerical,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MethodSel::Both => "closed-form,numerical",
            MethodSel::ClosedForm => "closed-form",
            MethodSel::Numerical => "numerical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TextOrJson {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value = "both")]
    pub method: MethodSel,
    /// Output on stdout; `--out` always receives JSON.
    #[arg(long, value_enum, default_value = "text")]
    pub format: TextOrJson,
    /// Also write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonOpts,
}

/// Everything known about one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub thresholds: ThresholdSet,
    /// Set when `λ` is outside `(λ_G_low, λ_max)`; nothing below is computed then.
    pub window_error: Option<String>,
    pub interval: Option<TrappingInterval>,
    pub gate: Option<GateReport>,
    pub closed_form: Option<ChaosVerdict>,
    pub numerical: Option<ChaosVerdict>,
    pub agree: Option<bool>,
    /// Within the relative band around `λ_chaos` where the numerical verdict
    /// cannot resolve the boundary.
    pub near_chaos_boundary: bool,
    /// `25β/72(1−α)`, the unsquared threshold as printed in one lemma; the
    /// classifier uses `λ_chaos`.
    pub lambda_chaos_unsquared: f64,
}

impl PointReport {
    pub fn in_class_g(&self) -> bool {
        self.gate.map(|g| g.in_class_g).unwrap_or(false)
    }
}

pub fn evaluate_point(
    params: &EconomyParams,
    methods: MethodSel,
    settings: &NumericSettings,
) -> CliResult<PointReport> {
    let thresholds = params.thresholds();
    let mut report = PointReport {
        alpha: params.alpha(),
        beta: params.beta(),
        lambda: params.lambda(),
        thresholds,
        window_error: None,
        interval: None,
        gate: None,
        closed_form: None,
        numerical: None,
        agree: None,
        near_chaos_boundary: settings.in_chaos_band(params.lambda(), thresholds.lambda_chaos),
        lambda_chaos_unsquared: ThresholdSet::lambda_chaos_unsquared(params.alpha(), params.beta()),
    };
    let interval = match params.trapping_interval(settings) {
        Ok(iv) => iv,
        Err(e @ ChaosError::OutsideWindow { .. }) => {
            report.window_error = e.window_message();
            return Ok(report);
        }
        Err(ChaosError::DegenerateInterval { .. }) => {
            report.window_error = Some("trapping interval degenerates".into());
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    report.interval = Some(interval);
    let gate = gate_check(params, &interval, settings.gate_grid, settings)?;
    report.gate = Some(gate);
    if !gate.in_class_g {
        return Ok(report);
    }
    if methods.includes(Method::ClosedForm) {
        report.closed_form = Some(classify_closed_form(params, settings)?);
    }
    if methods.includes(Method::Numerical) {
        report.numerical = Some(classify_numerical(params, &interval, settings)?);
    }
    if let (Some(c), Some(n)) = (&report.closed_form, &report.numerical) {
        report.agree = Some(c.same_verdict(n));
    }
    Ok(report)
}

fn verdict_line(v: &ChaosVerdict) -> String {
    format!(
        "{:<12} odd_cycle: {}  turbulent_second_iterate: {}  f2(m) = {}  f3(m) = {}  min Π = {}  max Π = {}",
        v.method.to_string(),
        v.odd_cycle,
        v.turbulent_second_iterate,
        v.f2_of_m,
        v.f3_of_m,
        v.pi_min,
        v.pi_max
    )
}

pub fn render_text(r: &PointReport) -> String {
    let t = &r.thresholds;
    let mut s = String::new();
    s.push_str(&format!(
        "parameters   alpha = {}  beta = {}  lambda = {}\n",
        r.alpha, r.beta, r.lambda
    ));
    s.push_str(&format!(
        "thresholds   lambda_G_low = {}  lambda_pi = {}  lambda_chaos = {}  lambda_max = {}\n",
        t.lambda_g_low, t.lambda_pi, t.lambda_chaos, t.lambda_max
    ));
    if let Some(e) = &r.window_error {
        s.push_str(&format!("window       outside: {e}\n"));
        return s;
    }
    if let Some(iv) = &r.interval {
        s.push_str(&format!(
            "interval     a = {}  m = {}  b = {}\n",
            iv.a, iv.m, iv.b
        ));
    }
    if let Some(g) = &r.gate {
        s.push_str(&format!(
            "gate         in_class_g: {}  endpoints: {}  below_diagonal: {}  unimodal: {}  self_map: {}  margin = {}\n",
            g.in_class_g, g.cond_endpoints, g.cond_below_diagonal, g.cond_unimodal, g.cond_self_map, g.margin
        ));
    }
    for v in r.closed_form.iter().chain(r.numerical.iter()) {
        s.push_str(&verdict_line(v));
        s.push('\n');
    }
    if let Some(agree) = r.agree {
        s.push_str(&format!("agreement    {agree}\n"));
    }
    if r.near_chaos_boundary {
        s.push_str("warning      lambda within the eps_band of lambda_chaos; numerical verdict not reliable here\n");
    }
    s.push_str(&format!(
        "note         onset threshold 25β/72(1−α)² = {} is used; the unsquared 25β/72(1−α) = {} is reported only\n",
        t.lambda_chaos, r.lambda_chaos_unsquared
    ));
    s
}

pub fn run(args: &ClassifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let settings = args.common.settings()?;
    let params = EconomyParams::new(args.alpha, args.beta, args.lambda)?;
    let report = evaluate_point(&params, args.method, &settings)?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Internal(e.to_string()))?
        + "\n";

    if let Some(path) = &args.out {
        emit(Some(path), out, &json)?;
    }
    match args.format {
        TextOrJson::Text => out.write_all(render_text(&report).as_bytes())?,
        TextOrJson::Json => out.write_all(json.as_bytes())?,
    }

    if let Some(msg) = report.window_error {
        return Err(CliError::OutsideWindow(msg));
    }
    if !report.in_class_g() {
        return Err(CliError::Internal(
            "gate check failed inside the window".into(),
        ));
    }
    Ok(exit::OK)
}
