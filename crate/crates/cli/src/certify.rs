use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use chaoslab_core::gate::gate_check;
use chaoslab_core::orbit::{find_odd_cycle, find_turbulence_witness, search_period3};
use chaoslab_core::{EconomyParams, PeriodicOrbit, Search, TrappingInterval, TurbulenceWitness};

use crate::args::parse_real;
use crate::{emit, exit, CliError, CliResult, CommonOpts};

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 15)]
    pub max_period: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Debug, Serialize)]
pub struct Period3Report {
    /// Always true: the outcome is recorded, not claimed.
    pub exploratory: bool,
    #[serde(flatten)]
    pub search: Search<PeriodicOrbit>,
}

#[derive(Debug, Serialize)]
pub struct CertificateReport {
    pub tool_version: &'static str,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub interval: TrappingInterval,
    pub odd_cycle: Search<PeriodicOrbit>,
    pub turbulence_witness: Search<TurbulenceWitness>,
    pub period3: Period3Report,
    pub note: &'static str,
}

pub fn certificates(
    params: &EconomyParams,
    max_period: usize,
    settings: &chaoslab_core::NumericSettings,
) -> CliResult<CertificateReport> {
    let interval = params.trapping_interval(settings)?;
    let gate = gate_check(params, &interval, settings.gate_grid, settings)?;
    if !gate.in_class_g {
        return Err(CliError::Internal(format!("gate check failed: {gate:?}")));
    }
    Ok(CertificateReport {
        tool_version: crate::VERSION,
        alpha: params.alpha(),
        beta: params.beta(),
        lambda: params.lambda(),
        interval,
        odd_cycle: find_odd_cycle(params, &interval, max_period, settings)?,
        turbulence_witness: find_turbulence_witness(params, &interval, settings)?,
        period3: Period3Report {
            exploratory: true,
            search: search_period3(params, &interval, settings)?,
        },
        note:
            "an empty result means nothing was found within the stated bounds, not that none exists",
    })
}

pub fn run(args: &CertifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let settings = args.common.settings()?;
    let params = EconomyParams::new(args.alpha, args.beta, args.lambda)?;
    let report = certificates(&params, args.max_period, &settings)?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Internal(e.to_string()))?
        + "\n";
    emit(args.out.as_deref(), out, &json)?;
    Ok(exit::OK)
}
