use std::io::Write;
use std::path::PathBuf;

use clap::Args;

use chaoslab_core::orbit::iterate;
use chaoslab_core::EconomyParams;

use crate::args::parse_real;
use crate::format::sig17;
use crate::{emit, exit, CliResult, VERSION};

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub p0: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn render(params: &EconomyParams, orbit: &chaoslab_core::Orbit, steps: usize) -> String {
    let mut s = String::new();
    s.push_str(&format!("# chaoslab {VERSION} orbit\n"));
    s.push_str(&format!(
        "# alpha = {}, beta = {}, lambda = {}, p0 = {}, steps = {}\n",
        params.alpha(),
        params.beta(),
        params.lambda(),
        orbit.p0,
        steps
    ));
    s.push_str(&format!("# escaped = {}\n", orbit.escaped));
    s.push_str("t,p\n");
    for (t, p) in orbit.points.iter().enumerate() {
        s.push_str(&format!("{t},{}\n", sig17(*p)));
    }
    s
}

pub fn run(args: &OrbitArgs, out: &mut dyn Write) -> CliResult<i32> {
    let params = EconomyParams::new(args.alpha, args.beta, args.lambda)?;
    let orbit = iterate(&params, args.p0, args.steps)?;
    emit(
        args.out.as_deref(),
        out,
        &render(&params, &orbit, args.steps),
    )?;
    Ok(exit::OK)
}
