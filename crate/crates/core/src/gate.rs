//! Unimodal-class membership, the set `Π`, and the two chaos classifiers.
//!
//! A map `g` on `[a, b]` belongs to the class when it is strictly decreasing
//! on `[a, m]`, strictly increasing on `[m, b]`, maps `[a, b]` into itself,
//! and satisfies `g(a) > a`, `g(b) < b` and `g(x) < x` on `[m, b)`. For such
//! maps, with `Π = {x ∈ [a, m] : g(x) ∈ [a, m], g²(x) = x}`:
//!
//! * `g` has an odd-period cycle iff `g²(m) > m` and `g³(m) > max Π`;
//! * `g²` is turbulent iff `g²(m) > m` and `g³(m) ≥ min Π`.
//!
//! [`classify_numerical`] evaluates exactly these two conditions, while
//! [`classify_closed_form`] reads the answer off [`ThresholdSet`].

use serde::{Deserialize, Serialize};

use crate::economy::{EconomyParams, ThresholdSet, TrappingInterval};
use crate::error::{ChaosError, Result};
use crate::roots::{polish, refine_root, scan_sign_changes};
use crate::settings::NumericSettings;

/// Evidence for membership of `f|E` in the unimodal class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub in_class_g: bool,
    /// `f(a) > a` and `f(b) < b`.
    pub cond_endpoints: bool,
    /// `f(x) < x` on a grid over `[m, b)`.
    pub cond_below_diagonal: bool,
    /// `f' < 0` on `[a, m)` and `f' > 0` on `(m, b]`, sampled.
    pub cond_unimodal: bool,
    /// `f([a, b]) ⊂ [a, b]`, sampled.
    pub cond_self_map: bool,
    /// Smallest slack among the strict inequalities `f(a) − a`, `b − f(b)`
    /// and `x − f(x)` on the `[m, b)` grid.
    pub margin: f64,
}

/// Checks the class conditions for `f` restricted to `interval`.
pub fn gate_check(
    params: &EconomyParams,
    interval: &TrappingInterval,
    n_grid: usize,
    settings: &NumericSettings,
) -> Result<GateReport> {
    if n_grid < 100 {
        return Err(ChaosError::InvalidParameter {
            name: "n_grid",
            value: n_grid as f64,
            reason: "gate grid needs at least 100 points",
        });
    }
    let TrappingInterval { a, m, b } = *interval;
    TrappingInterval::new(a, m, b)?;

    let f = |x: f64| params.map(x);
    let lerp = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / n_grid as f64;

    let slack_a = f(a) - a;
    let slack_b = b - f(b);
    let cond_endpoints = slack_a > 0.0 && slack_b > 0.0;

    let below = (0..n_grid)
        .map(|i| {
            let x = lerp(m, b, i);
            x - f(x)
        })
        .fold(f64::INFINITY, f64::min);
    let cond_below_diagonal = below > 0.0;

    let falling = (0..n_grid).all(|i| params.slope(lerp(a, m, i)) < 0.0);
    let rising = (1..=n_grid).all(|i| params.slope(lerp(m, b, i)) > 0.0);
    let cond_unimodal = falling && rising;

    let (lo, hi) = (0..=n_grid)
        .map(|i| f(lerp(a, b, i)))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| {
            (lo.min(y), hi.max(y))
        });
    let slop = settings.eps_cmp * (1.0 + b.abs());
    let cond_self_map = lo >= a - slop && hi <= b + slop;

    Ok(GateReport {
        in_class_g: cond_endpoints && cond_below_diagonal && cond_unimodal && cond_self_map,
        cond_endpoints,
        cond_below_diagonal,
        cond_unimodal,
        cond_self_map,
        margin: slack_a.min(slack_b).min(below),
    })
}

/// `f(a) − a` in closed form: `λ c² (√λ − √(2β)/c)² / a` with `c = 4(1−α)`
/// and `a = f(s)`.
///
/// The squared factor alone is often quoted for this gap; it carries the
/// sign but not the magnitude.
pub fn left_endpoint_gap(params: &EconomyParams) -> f64 {
    let c = 4.0 * (1.0 - params.alpha());
    let lambda = params.lambda();
    let a = 2.0 * params.critical_point() - lambda * c;
    lambda * c * c * left_endpoint_gap_sign_factor(params) / a
}

/// `(√λ − √(2β) / 4(1−α))²`, the factor that decides the sign of `f(a) − a`.
pub fn left_endpoint_gap_sign_factor(params: &EconomyParams) -> f64 {
    let c = 4.0 * (1.0 - params.alpha());
    (params.lambda().sqrt() - (2.0 * params.beta()).sqrt() / c).powi(2)
}

/// The unique positive fixed point `z = β / 2(1−α)`.
pub fn fixed_point(params: &EconomyParams) -> f64 {
    params.beta() / (2.0 * (1.0 - params.alpha()))
}

/// The period-2 points as printed in closed form,
/// `−2αλ + 2λ ∓ √(4α²λ² − 8αλ² − βλ + 4λ²)`, without refinement.
pub fn period2_closed_form(params: &EconomyParams) -> Option<(f64, f64)> {
    let (al, be, la) = (params.alpha(), params.beta(), params.lambda());
    let disc = 4.0 * al * al * la * la - 8.0 * al * la * la - be * la + 4.0 * la * la;
    if disc < 0.0 {
        return None;
    }
    let centre = -2.0 * al * la + 2.0 * la;
    let root = disc.sqrt();
    Some((centre - root, centre + root))
}

/// Period-2 points `(w1, w2)`, `w1 ≤ w2`, Newton-polished on `f² − id`.
///
/// `None` when the discriminant is negative (no real period-2 orbit).
pub fn period2_points(params: &EconomyParams) -> Option<(f64, f64)> {
    let (w1, w2) = period2_closed_form(params)?;
    let h = |x: f64| {
        let (y, d) = params.map_n_with_slope(x, 2);
        (y - x, d - 1.0)
    };
    let refine = |w: f64| {
        let p = polish(h, w, 8);
        if (p - w).abs() <= 1e-6 * (1.0 + w.abs()) {
            p
        } else {
            w
        }
    };
    let (p1, p2) = (refine(w1), refine(w2));
    Some((p1.min(p2), p1.max(p2)))
}

/// The set `Π`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiSet {
    pub points: Vec<f64>,
}

impl PiSet {
    pub fn max(&self) -> f64 {
        *self.points.last().expect("Π is never empty")
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn is_singleton(&self) -> bool {
        self.points.len() == 1
    }
}

/// Assembles `Π` from the closed-form fixed and period-2 points, plus any
/// further roots of `f² − id` that a sign-change scan of `[a, m]` turns up.
pub fn pi_set(
    params: &EconomyParams,
    interval: &TrappingInterval,
    settings: &NumericSettings,
) -> Result<PiSet> {
    let TrappingInterval { a, m, .. } = *interval;
    let z = fixed_point(params);
    let merge = settings.merge_tol();

    let mut candidates = vec![z];
    if let Some((w1, w2)) = period2_points(params) {
        candidates.push(w1);
        candidates.push(w2);
    }

    let h = |x: f64| {
        let (y, d) = params.map_n_with_slope(x, 2);
        (y - x, d - 1.0)
    };
    let crossings = scan_sign_changes(|x| h(x).0, a, m, settings.pi_grid);
    let mut extra = Vec::new();
    for c in crossings {
        if candidates.iter().any(|&w| c.covers(w, merge)) {
            continue;
        }
        extra.push(refine_root(h, c.lo(), c.hi(), settings.max_newton));
    }
    candidates.extend(extra);

    let slop = settings.eps_cmp;
    let in_left = |x: f64| a - slop <= x && x <= m + slop;
    let mut points: Vec<f64> = candidates
        .into_iter()
        .filter(|&x| in_left(x) && in_left(params.map(x)) && h(x).0.abs() <= settings.eps_root)
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup_by(|x, y| (*x - *y).abs() <= merge);

    if points.is_empty() {
        return Err(ChaosError::EmptyPi { fixed_point: z });
    }
    Ok(PiSet { points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Numerical,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::Numerical => "numerical",
        })
    }
}

/// Odd-cycle and turbulence verdicts together with the quantities behind them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChaosVerdict {
    pub method: Method,
    pub odd_cycle: bool,
    pub turbulent_second_iterate: bool,
    pub m: f64,
    pub f2_of_m: f64,
    pub f3_of_m: f64,
    pub pi_max: f64,
    pub pi_min: f64,
}

impl ChaosVerdict {
    pub fn same_verdict(&self, other: &ChaosVerdict) -> bool {
        self.odd_cycle == other.odd_cycle
            && self.turbulent_second_iterate == other.turbulent_second_iterate
    }
}

/// `Π` as predicted by the closed forms: `{z}` above `λ_pi`, otherwise
/// `{w1, z, w2}` whenever the period-2 orbit exists.
fn closed_form_pi(params: &EconomyParams, t: &ThresholdSet) -> (f64, f64) {
    let z = fixed_point(params);
    if params.lambda() > t.lambda_pi {
        return (z, z);
    }
    match period2_closed_form(params) {
        Some((w1, w2)) => (w1.min(z), w2.max(z)),
        None => (z, z),
    }
}

/// Reads the verdict off the thresholds: odd cycle iff
/// `λ_chaos < λ < λ_max`, turbulent second iterate iff `λ_chaos ≤ λ < λ_max`.
pub fn classify_closed_form(
    params: &EconomyParams,
    settings: &NumericSettings,
) -> Result<ChaosVerdict> {
    let t = params.check_window(settings.eps_cmp)?;
    let lambda = params.lambda();
    let odd_cycle = lambda - t.lambda_chaos > settings.eps_cmp;
    let turbulent = lambda - t.lambda_chaos >= -settings.eps_cmp;

    // f(s) = 2s − 4λ(1−α); later iterates from f(p) = p + 2λβ/p − 4λ(1−α)
    let s = params.critical_point();
    let shift = 4.0 * lambda * (1.0 - params.alpha());
    let k = 2.0 * lambda * params.beta();
    let f1 = 2.0 * s - shift;
    let f2 = f1 + k / f1 - shift;
    let f3 = f2 + k / f2 - shift;
    let (pi_min, pi_max) = closed_form_pi(params, &t);

    Ok(ChaosVerdict {
        method: Method::ClosedForm,
        odd_cycle,
        turbulent_second_iterate: turbulent,
        m: s,
        f2_of_m: f2,
        f3_of_m: f3,
        pi_max,
        pi_min,
    })
}

/// Evaluates the unimodal-map criterion directly on `f|E`.
///
/// Runs [`gate_check`] first and fails with [`ChaosError::GateFailed`] if the
/// restricted map is not in the class.
pub fn classify_numerical(
    params: &EconomyParams,
    interval: &TrappingInterval,
    settings: &NumericSettings,
) -> Result<ChaosVerdict> {
    let gate = gate_check(params, interval, settings.gate_grid, settings)?;
    if !gate.in_class_g {
        return Err(ChaosError::GateFailed(format!("{gate:?}")));
    }
    let pi = pi_set(params, interval, settings)?;
    let m = interval.m;
    let f2 = params.map_n(m, 2);
    let f3 = params.map(f2);
    let eps = settings.eps_cmp;
    let returns_above = f2 > m + eps;
    Ok(ChaosVerdict {
        method: Method::Numerical,
        odd_cycle: returns_above && f3 > pi.max() + eps,
        turbulent_second_iterate: returns_above && f3 >= pi.min() - eps,
        m,
        f2_of_m: f2,
        f3_of_m: f3,
        pi_max: pi.max(),
        pi_min: pi.min(),
    })
}

/// Printed lemma on the sign of `f²(s) − s` next to the computed sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Report {
    pub lambda: f64,
    pub f2_minus_m: f64,
    /// What the printed statement predicts for "`f²(s) < s`":
    /// `λ < λ_G_low` or `λ_pi < λ`.
    pub printed_lemma_prediction: bool,
    /// Whether `f²(s) < s` actually holds.
    pub numerical_truth: bool,
}

impl Lemma3Report {
    pub fn agrees(&self) -> bool {
        self.printed_lemma_prediction == self.numerical_truth
    }
}

/// Reports the printed claim about `f²(s) < s` and the directly computed sign.
/// Never fails; when `f(s) ≤ 0` the raw rational map is still evaluated.
pub fn lemma3_check(params: &EconomyParams) -> Lemma3Report {
    let t = params.thresholds();
    let s = params.critical_point();
    let f2_minus_m = params.map_n(s, 2) - s;
    let lambda = params.lambda();
    Lemma3Report {
        lambda,
        f2_minus_m,
        printed_lemma_prediction: lambda < t.lambda_g_low || t.lambda_pi < lambda,
        numerical_truth: f2_minus_m < 0.0,
    }
}

/// `f³(s) − z` by iteration and by the factorisation
/// `(f²(s) − z)(1 − 2βλ / (f²(s) z))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma4Report {
    pub f3_minus_pimax: f64,
    pub factored: f64,
    /// `f²(s) − z`
    pub factor1: f64,
    /// `1 − 2βλ / (f²(s) z)`
    pub factor2: f64,
    /// `25β / 72(1−α)²`, the threshold used by the classifier.
    pub threshold_squared: f64,
    /// `25β / 72(1−α)`, as printed in the lemma statement.
    pub threshold_printed: f64,
    /// Whether `λ` falls on the same side of both thresholds.
    pub printed_threshold_agrees: bool,
}

/// Agreement tolerance between the iterated and factored forms, scaled by `f²(s)`.
pub const LEMMA4_TOL: f64 = 1e-9;

pub fn lemma4_check(params: &EconomyParams, settings: &NumericSettings) -> Result<Lemma4Report> {
    let t = params.check_window(settings.eps_cmp)?;
    if params.lambda() - t.lambda_pi <= settings.eps_cmp {
        return Err(ChaosError::Precondition(format!(
            "Π is a singleton only for λ > λ_pi = {}",
            t.lambda_pi
        )));
    }
    let (beta, lambda) = (params.beta(), params.lambda());
    let s = params.critical_point();
    let z = fixed_point(params);
    let f2 = params.map_n(s, 2);
    let direct = params.map(f2) - z;
    let factor1 = f2 - z;
    let factor2 = 1.0 - 2.0 * beta * lambda / (f2 * z);
    let factored = factor1 * factor2;

    if (direct - factored).abs() > LEMMA4_TOL * f2.abs().max(1.0) {
        return Err(ChaosError::Inconsistent(format!(
            "f³(s) − z = {direct} by iteration but {factored} factored"
        )));
    }
    let printed = ThresholdSet::lambda_chaos_unsquared(params.alpha(), beta);
    Ok(Lemma4Report {
        f3_minus_pimax: direct,
        factored,
        factor1,
        factor2,
        threshold_squared: t.lambda_chaos,
        threshold_printed: printed,
        printed_threshold_agrees: (lambda > printed) == (lambda > t.lambda_chaos),
    })
}
