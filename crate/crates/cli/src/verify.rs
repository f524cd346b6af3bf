//! Cross-validation and consistency suite behind `chaoslab verify`.
//!
//! Asserted checks decide the exit code. Lines tagged `INFO` (the printed
//! sign claim for `f²(s) − s`, the unsquared onset threshold) are reports only.

use std::io::Write;

use clap::Args;
use rayon::prelude::*;

use chaoslab_core::gate::{
    classify_closed_form, classify_numerical, fixed_point, lemma3_check, lemma4_check,
    period2_closed_form,
};
use chaoslab_core::orbit::find_periodic_orbits;
use chaoslab_core::{EconomyParams, NumericSettings, ThresholdSet};

use crate::classify::MethodSel;
use crate::sweep::evaluate_cells;
use crate::{exit, CliResult, CommonOpts, VERSION};

pub const GRID_LO: f64 = 0.05;
pub const GRID_HI: f64 = 0.95;
pub const ANCHOR: (f64, f64, f64) = (0.75, 0.5, 3.61);

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Points per axis of the (α, β) grid over [0.05, 0.95].
    #[arg(long, default_value_t = 20)]
    pub ab_count: usize,
    /// Window-relative λ values per (α, β) cell.
    #[arg(long, default_value_t = 50)]
    pub lambda_count: usize,
    /// Points per axis (α, β and λ) of the low-period oracle grid.
    #[arg(long, default_value_t = 10)]
    pub oracle_count: usize,
    #[command(flatten)]
    pub common: CommonOpts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("[{tag}] {}: {}", self.name, self.detail)
    }
}

fn axis(count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![0.5 * (GRID_LO + GRID_HI)];
    }
    (0..count)
        .map(|i| GRID_LO + (GRID_HI - GRID_LO) * i as f64 / (count - 1) as f64)
        .collect()
}

/// `(α, β, λ)` cells: `ab × ab` grid, `lambda_count` window-relative λ each.
pub fn grid_cells(ab_count: usize, lambda_count: usize) -> Vec<(f64, f64, f64)> {
    let pts = axis(ab_count);
    let mut cells = Vec::with_capacity(ab_count * ab_count * lambda_count);
    for &a in &pts {
        for &b in &pts {
            for l in ThresholdSet::new(a, b).window_points(lambda_count) {
                cells.push((a, b, l));
            }
        }
    }
    cells
}

fn params(cell: (f64, f64, f64)) -> EconomyParams {
    EconomyParams::new(cell.0, cell.1, cell.2).expect("grid cells are valid parameters")
}

pub fn anchor_check(settings: &NumericSettings) -> Check {
    let name = "anchor (0.75, 0.5, 3.61)";
    let run = || -> chaoslab_core::Result<(bool, String)> {
        let e = params(ANCHOR);
        let iv = e.trapping_interval(settings)?;
        let gate = chaoslab_core::gate::gate_check(&e, &iv, settings.gate_grid, settings)?;
        let pi = chaoslab_core::gate::pi_set(&e, &iv, settings)?;
        let num = classify_numerical(&e, &iv, settings)?;
        let cf = classify_closed_form(&e, settings)?;
        let t = e.thresholds();
        let ok = gate.in_class_g
            && t.lambda_g_low < e.lambda()
            && e.lambda() < t.lambda_max
            && (num.f2_of_m - 15.58).abs() <= 1e-9
            && num.f2_of_m > iv.m
            && (iv.m - 1.9).abs() <= 1e-12
            && pi.points.len() == 1
            && (pi.points[0] - 1.0).abs() <= 1e-10
            && (num.f3_of_m - 12.201_707_317_073_17).abs() <= 1e-6
            && num.f3_of_m > 1.0
            && num.odd_cycle
            && cf.odd_cycle;
        Ok((
            ok,
            format!(
                "in class G: {}, f2(m) = {} > m = {}, Π = {:?}, f3(m) = {}, odd_cycle closed-form {} numerical {}",
                gate.in_class_g, num.f2_of_m, iv.m, pi.points, num.f3_of_m, cf.odd_cycle, num.odd_cycle
            ),
        ))
    };
    match run() {
        Ok((ok, detail)) => Check::new(name, ok, detail),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

pub fn threshold_check() -> Check {
    let t = ThresholdSet::new(0.75, 0.5);
    let want = [1.0, 2.25, 25.0 / 9.0, 4.0];
    let got = [t.lambda_g_low, t.lambda_pi, t.lambda_chaos, t.lambda_max];
    let ok = got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 1e-12);
    Check::new(
        "thresholds (0.75, 0.5)",
        ok,
        format!("{}, {}, {}, {}", got[0], got[1], got[2], got[3]),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidation {
    pub cells: usize,
    pub compared: usize,
    pub excluded: usize,
    pub disagreements: usize,
    pub first_failure: Option<String>,
}

pub fn cross_validation(
    cells: &[(f64, f64, f64)],
    settings: &NumericSettings,
    pool: &rayon::ThreadPool,
) -> CliResult<CrossValidation> {
    let reports = evaluate_cells(cells, MethodSel::Both, settings, pool)?;
    let mut cv = CrossValidation {
        cells: cells.len(),
        compared: 0,
        excluded: 0,
        disagreements: 0,
        first_failure: None,
    };
    for r in &reports {
        if r.near_chaos_boundary {
            cv.excluded += 1;
            continue;
        }
        let cell = format!(
            "(alpha, beta, lambda) = ({}, {}, {})",
            r.alpha, r.beta, r.lambda
        );
        match r.agree {
            Some(true) => cv.compared += 1,
            Some(false) => {
                cv.compared += 1;
                cv.disagreements += 1;
                cv.first_failure.get_or_insert(format!(
                    "{cell}: closed-form {:?} vs numerical {:?}",
                    r.closed_form, r.numerical
                ));
            }
            None => {
                cv.disagreements += 1;
                cv.first_failure.get_or_insert(format!(
                    "{cell}: not classified ({:?})",
                    r.window_error.as_deref().unwrap_or("gate check failed")
                ));
            }
        }
    }
    Ok(cv)
}

pub fn boundary_check(settings: &NumericSettings) -> Check {
    let name = "boundary lambda = lambda_chaos (0.75, 0.5)";
    let lambda = ThresholdSet::new(0.75, 0.5).lambda_chaos;
    match classify_closed_form(&params((0.75, 0.5, lambda)), settings) {
        Ok(v) => Check::new(
            name,
            v.turbulent_second_iterate && !v.odd_cycle,
            format!(
                "lambda = {lambda}: closed-form odd_cycle {}, turbulent {}",
                v.odd_cycle, v.turbulent_second_iterate
            ),
        ),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

pub fn lemma4_grid(
    cells: &[(f64, f64, f64)],
    settings: &NumericSettings,
    pool: &rayon::ThreadPool,
) -> Check {
    let name = "factored identity for f3(s) - z";
    let results: Vec<Result<f64, String>> = pool.install(|| {
        cells
            .par_iter()
            .filter(|c| c.2 > ThresholdSet::new(c.0, c.1).lambda_pi * (1.0 + settings.eps_band))
            .map(|&c| {
                let r = lemma4_check(&params(c), settings)
                    .map_err(|e| format!("({}, {}, {}): {e}", c.0, c.1, c.2))?;
                if r.f3_minus_pimax.signum() != (r.factor1 * r.factor2).signum()
                    && r.f3_minus_pimax != 0.0
                {
                    return Err(format!("({}, {}, {}): sign mismatch", c.0, c.1, c.2));
                }
                Ok((r.f3_minus_pimax - r.factored).abs())
            })
            .collect()
    });
    let n = results.len();
    let first = results.iter().find_map(|r| r.as_ref().err().cloned());
    let max_dev = results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .fold(0.0f64, |m, &d| m.max(d));
    match first {
        Some(msg) => Check::new(name, false, msg),
        None => Check::new(
            name,
            true,
            format!("{n} cells, max |direct - factored| = {max_dev:e}"),
        ),
    }
}

/// Compares scanned fixed and period-2 orbits with the closed forms on one cell.
/// Returns the largest deviation.
pub fn low_period_oracle(e: &EconomyParams, settings: &NumericSettings) -> Result<f64, String> {
    let iv = e.trapping_interval(settings).map_err(|x| x.to_string())?;
    let orbits = find_periodic_orbits(e, &iv, 2, settings).map_err(|x| x.to_string())?;
    let fixed: Vec<_> = orbits.iter().filter(|o| o.period == 1).collect();
    let period2: Vec<_> = orbits.iter().filter(|o| o.period == 2).collect();
    let z = fixed_point(e);
    if fixed.len() != 1 {
        return Err(format!("expected one fixed point, found {}", fixed.len()));
    }
    let mut dev = (fixed[0].points[0] - z).abs();
    match period2_closed_form(e) {
        Some((w1, w2)) if w2 - w1 > settings.merge_tol() => {
            if period2.len() != 1 {
                return Err(format!(
                    "expected one period-2 orbit, found {}",
                    period2.len()
                ));
            }
            let mut pts = period2[0].points.clone();
            pts.sort_by(f64::total_cmp);
            dev = dev.max((pts[0] - w1).abs()).max((pts[1] - w2).abs());
        }
        _ => {
            if !period2.is_empty() {
                return Err(format!(
                    "closed form has no period-2 orbit, scan found {}",
                    period2.len()
                ));
            }
        }
    }
    if dev > 1e-9 {
        return Err(format!("deviation {dev:e} exceeds 1e-9"));
    }
    Ok(dev)
}

/// Cells where `λ` sits within `eps_band` of the period-doubling value
/// `β / 4(1−α)²` are skipped: there the period-2 orbit collapses onto the
/// fixed point and its location is not resolvable in double precision.
pub fn oracle_grid(count: usize, settings: &NumericSettings, pool: &rayon::ThreadPool) -> Check {
    let name = "low-period oracle (periods 1, 2)";
    let cells: Vec<_> = grid_cells(count, count)
        .into_iter()
        .filter(|&(a, b, l)| {
            let doubling = b / (4.0 * (1.0 - a) * (1.0 - a));
            (l - doubling).abs() > settings.eps_band * doubling
        })
        .collect();
    let results: Vec<Result<f64, String>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&c| {
                low_period_oracle(&params(c), settings)
                    .map_err(|e| format!("({}, {}, {}): {e}", c.0, c.1, c.2))
            })
            .collect()
    });
    let first = results.iter().find_map(|r| r.as_ref().err().cloned());
    let max_dev = results
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .fold(0.0f64, |m, &d| m.max(d));
    match first {
        Some(msg) => Check::new(name, false, msg),
        None => Check::new(
            name,
            true,
            format!("{} cells, max deviation = {max_dev:e}", cells.len()),
        ),
    }
}

/// The printed sign claim for `f²(s) − s` at the anchor next to the computed sign.
pub fn lemma3_anchor_line() -> String {
    let r = lemma3_check(&params(ANCHOR));
    let sign = if r.f2_minus_m > 0.0 {
        "positive"
    } else {
        "negative"
    };
    let status = if r.agrees() {
        "consistent"
    } else {
        "DISCREPANCY"
    };
    let printed = if r.printed_lemma_prediction {
        "negative"
    } else {
        "positive"
    };
    format!(
        "[INFO] sign of f2(s) - s at (0.75, 0.5, 3.61): computed f2(s) - s = {:+} ({sign}); printed statement predicts {printed}; {status} (reported, not asserted)",
        r.f2_minus_m
    )
}

pub fn run(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let settings = args.common.settings()?;
    let pool = args.common.pool()?;
    if args.ab_count == 0 || args.lambda_count == 0 || args.oracle_count == 0 {
        return Err(crate::CliError::Usage(
            "grid counts must be at least 1".into(),
        ));
    }
    let cells = grid_cells(args.ab_count, args.lambda_count);

    let mut lines = vec![
        format!("chaoslab {VERSION} verify"),
        format!(
            "grid: {n} x {n} (alpha, beta) over [{GRID_LO}, {GRID_HI}], {} window-relative lambda values per cell; oracle grid {o} x {o} x {o}",
            args.lambda_count,
            n = args.ab_count,
            o = args.oracle_count
        ),
        format!(
            "tolerances: eps_cmp = {}, eps_root = {}, eps_band = {}",
            settings.eps_cmp, settings.eps_root, settings.eps_band
        ),
    ];

    let cv = cross_validation(&cells, &settings, &pool)?;
    let mut checks = vec![anchor_check(&settings), threshold_check()];
    checks.push(Check::new(
        "closed-form vs numerical",
        cv.disagreements == 0,
        match &cv.first_failure {
            None => format!(
                "{} cells, {} compared, {} excluded by eps_band, 0 disagreements",
                cv.cells, cv.compared, cv.excluded
            ),
            Some(f) => format!("{} disagreements; first: {f}", cv.disagreements),
        },
    ));
    checks.push(boundary_check(&settings));
    checks.push(lemma4_grid(&cells, &settings, &pool));
    checks.push(oracle_grid(args.oracle_count, &settings, &pool));
    lines.extend(checks.iter().map(Check::line));

    lines.push(lemma3_anchor_line());
    let lemma3_off = cells
        .iter()
        .filter(|&&c| !lemma3_check(&params(c)).agrees())
        .count();
    lines.push(format!(
        "[INFO] printed sign claim for f2(s) - s disagrees with direct evaluation on {lemma3_off} of {} grid cells",
        cells.len()
    ));
    let unsquared_off = cells
        .iter()
        .filter(|&&(a, b, l)| {
            let t = ThresholdSet::new(a, b);
            (l > t.lambda_chaos) != (l > ThresholdSet::lambda_chaos_unsquared(a, b))
        })
        .count();
    lines.push(format!(
        "[INFO] unsquared onset threshold 25b/72(1-a) would classify {unsquared_off} of {} grid cells differently",
        cells.len()
    ));

    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    lines.push(format!(
        "summary: {} asserted checks passed, {} failed",
        checks.len() - failed.len(),
        failed.len()
    ));
    if let Some(first) = failed.first() {
        lines.push(format!("first failure: {}: {}", first.name, first.detail));
    }
    let mut text = lines.join("\n");
    text.push('\n');
    out.write_all(text.as_bytes())?;

    Ok(if failed.is_empty() {
        exit::OK
    } else {
        exit::INTERNAL
    })
}
