//! Trajectories and numerical certificates: periodic orbits, odd cycles,
//! turbulence witnesses for `f²` and an exploratory period-3 scan.
//!
//! Every search here is a deterministic grid scan followed by bracketed
//! refinement. An empty result means "not found within [`SearchBounds`]",
//! never "does not exist".

use serde::{Deserialize, Serialize};

use crate::economy::{EconomyParams, TrappingInterval};
use crate::error::{ChaosError, Result};
use crate::roots::{polish, refine_root, scan_sign_changes, Crossing};
use crate::settings::NumericSettings;

/// Iterates at or above this value count as escaped.
pub const ESCAPE_GUARD: f64 = 1e12;
pub const MAX_STEPS: usize = 10_000_000;
pub const MAX_PERIOD: usize = 20;

/// A recorded trajectory `p0, f(p0), f²(p0), …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub p0: f64,
    pub points: Vec<f64>,
    /// The next iterate left `(0, ESCAPE_GUARD)`; `points` stops before it.
    pub escaped: bool,
}

pub fn iterate(params: &EconomyParams, p0: f64, n_steps: usize) -> Result<Orbit> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(ChaosError::NonPositivePrice(p0));
    }
    if n_steps == 0 || n_steps > MAX_STEPS {
        return Err(ChaosError::InvalidParameter {
            name: "n_steps",
            value: n_steps as f64,
            reason: "must lie in 1..=10^7",
        });
    }
    let mut points = Vec::with_capacity(n_steps + 1);
    points.push(p0);
    let mut escaped = p0 >= ESCAPE_GUARD;
    let mut x = p0;
    if !escaped {
        for _ in 0..n_steps {
            let next = params.map(x);
            if !(next > 0.0 && next < ESCAPE_GUARD) {
                escaped = true;
                break;
            }
            points.push(next);
            x = next;
        }
    }
    Ok(Orbit {
        p0,
        points,
        escaped,
    })
}

/// A periodic orbit of minimal period `period`, starting at its smallest point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    pub period: usize,
    pub points: Vec<f64>,
    /// `|f^period(points[0]) − points[0]|`
    pub residual: f64,
}

impl PeriodicOrbit {
    pub fn is_odd_cycle(&self) -> bool {
        self.period >= 3 && self.period % 2 == 1
    }
}

/// Three points certifying that `g = f²` is turbulent:
/// `g(x1) = g(x2) = x1`, `g(x3) = x2`, with `x3` strictly between `x1` and `x2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurbulenceWitness {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    /// `(|g(x1) − x1|, |g(x2) − x1|, |g(x3) − x2|)`
    pub residuals: (f64, f64, f64),
}

impl TurbulenceWitness {
    pub fn is_valid(&self, params: &EconomyParams, eps_root: f64) -> bool {
        let g = |x: f64| params.map_n(x, 2);
        let (x1, x2, x3) = (self.x1, self.x2, self.x3);
        (g(x1) - x1).abs() <= eps_root
            && (g(x2) - x1).abs() <= eps_root
            && (g(x3) - x2).abs() <= eps_root
            && ((x1 < x3 && x3 < x2) || (x2 < x3 && x3 < x1))
    }
}

/// Where a search looked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub lo: f64,
    pub hi: f64,
    pub max_period: usize,
    /// Grid points per scan (per unit period for period scans).
    pub grid_points: usize,
    pub eps_root: f64,
}

/// Outcome of a certificate search together with its bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Search<T> {
    pub found: Option<T>,
    pub bounds: SearchBounds,
}

fn check_max_period(max_period: usize) -> Result<()> {
    if (1..=MAX_PERIOD).contains(&max_period) {
        Ok(())
    } else {
        Err(ChaosError::InvalidParameter {
            name: "max_period",
            value: max_period as f64,
            reason: "must lie in 1..=20",
        })
    }
}

/// `fⁿ(x) − x` and its derivative.
fn period_residual(params: &EconomyParams, n: usize) -> impl Fn(f64) -> (f64, f64) + '_ {
    move |x| {
        let (y, d) = params.map_n_with_slope(x, n);
        (y - x, d - 1.0)
    }
}

fn crossing_root<F>(h: F, c: Crossing, max_newton: usize) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    match c {
        Crossing::Exact(x) => x,
        Crossing::Bracket(lo, hi) => refine_root(h, lo, hi, max_newton),
    }
}

/// Turns a root of `fⁿ − id` into a certified orbit of minimal period `n`,
/// or `None` if the residual is too large or a proper divisor already closes
/// the orbit.
fn certify_orbit(
    params: &EconomyParams,
    root: f64,
    n: usize,
    settings: &NumericSettings,
) -> Option<PeriodicOrbit> {
    let start = (0..n)
        .scan(root, |x, _| {
            let cur = *x;
            *x = params.map(cur);
            Some(cur)
        })
        .fold(f64::INFINITY, f64::min);
    let x0 = polish(period_residual(params, n), start, 4);
    let residual = (params.map_n(x0, n) - x0).abs();
    if !(residual <= settings.eps_root) {
        return None;
    }
    let closes_early = (1..n)
        .filter(|d| n % d == 0)
        .any(|d| (params.map_n(x0, d) - x0).abs() <= settings.merge_tol());
    if closes_early {
        return None;
    }
    let points = (0..n)
        .scan(x0, |x, _| {
            let cur = *x;
            *x = params.map(cur);
            Some(cur)
        })
        .collect();
    Some(PeriodicOrbit {
        period: n,
        points,
        residual,
    })
}

/// All certified orbits of minimal period exactly `n` found on `[a, b]`,
/// ordered by starting point.
fn orbits_of_period(
    params: &EconomyParams,
    interval: &TrappingInterval,
    n: usize,
    grid: usize,
    settings: &NumericSettings,
) -> Vec<PeriodicOrbit> {
    let h = period_residual(params, n);
    let crossings = scan_sign_changes(|x| h(x).0, interval.a, interval.b, grid);
    let merge = settings.merge_tol();
    let mut found: Vec<PeriodicOrbit> = Vec::new();
    for c in crossings {
        let root = crossing_root(&h, c, settings.max_newton);
        if let Some(orbit) = certify_orbit(params, root, n, settings) {
            if !found
                .iter()
                .any(|o| (o.points[0] - orbit.points[0]).abs() <= merge)
            {
                found.push(orbit);
            }
        }
    }
    found.sort_by(|x, y| x.points[0].total_cmp(&y.points[0]));
    found
}

/// Periodic orbits of every minimal period `1..=max_period`, in period order.
pub fn find_periodic_orbits(
    params: &EconomyParams,
    interval: &TrappingInterval,
    max_period: usize,
    settings: &NumericSettings,
) -> Result<Vec<PeriodicOrbit>> {
    check_max_period(max_period)?;
    Ok((1..=max_period)
        .flat_map(|n| orbits_of_period(params, interval, n, settings.scan_density * n, settings))
        .collect())
}

/// The orbit of smallest odd minimal period `≥ 3` up to `max_period`.
pub fn find_odd_cycle(
    params: &EconomyParams,
    interval: &TrappingInterval,
    max_period: usize,
    settings: &NumericSettings,
) -> Result<Search<PeriodicOrbit>> {
    check_max_period(max_period)?;
    let found = (3..=max_period).step_by(2).find_map(|n| {
        orbits_of_period(params, interval, n, settings.scan_density * n, settings)
            .into_iter()
            .next()
    });
    Ok(Search {
        found,
        bounds: SearchBounds {
            lo: interval.a,
            hi: interval.b,
            max_period,
            grid_points: settings.scan_density,
            eps_root: settings.eps_root,
        },
    })
}

/// Searches for a turbulence witness of `g = f²` on `[a, b]`.
///
/// Fixed points `x1` of `g` are tried in ascending order. For each, the
/// preimages `x2 ≠ x1` of `x1` are tried nearest first, and the first root
/// of `g(x) = x2` strictly between `x1` and `x2` completes the witness.
pub fn find_turbulence_witness(
    params: &EconomyParams,
    interval: &TrappingInterval,
    settings: &NumericSettings,
) -> Result<Search<TurbulenceWitness>> {
    let grid = 2 * settings.scan_density;
    let bounds = SearchBounds {
        lo: interval.a,
        hi: interval.b,
        max_period: 2,
        grid_points: grid,
        eps_root: settings.eps_root,
    };
    let merge = settings.merge_tol();
    let g = |x: f64| params.map_n_with_slope(x, 2);
    let level = |target: f64| {
        move |x: f64| {
            let (y, d) = g(x);
            (y - target, d)
        }
    };

    let fixed = scan_sign_changes(|x| g(x).0 - x, interval.a, interval.b, grid);
    for c in fixed {
        let x1 = crossing_root(period_residual(params, 2), c, settings.max_newton);
        let r1 = (g(x1).0 - x1).abs();
        if r1 > settings.eps_root {
            continue;
        }

        let h1 = level(x1);
        let mut preimages: Vec<(f64, f64)> =
            scan_sign_changes(|x| h1(x).0, interval.a, interval.b, grid)
                .into_iter()
                .filter(|c| !c.covers(x1, merge))
                .map(|c| crossing_root(h1, c, settings.max_newton))
                .filter(|&x2| (x2 - x1).abs() > merge)
                .map(|x2| (x2, h1(x2).0.abs()))
                .filter(|&(_, r)| r <= settings.eps_root)
                .collect();
        preimages.sort_by(|p, q| {
            (p.0 - x1)
                .abs()
                .total_cmp(&(q.0 - x1).abs())
                .then(p.0.total_cmp(&q.0))
        });

        for (x2, r2) in preimages {
            let (lo, hi) = (x1.min(x2), x1.max(x2));
            let h2 = level(x2);
            let between = scan_sign_changes(|x| h2(x).0, lo, hi, grid);
            for c in between {
                let x3 = crossing_root(h2, c, settings.max_newton);
                let r3 = h2(x3).0.abs();
                if lo < x3 && x3 < hi && r3 <= settings.eps_root {
                    return Ok(Search {
                        found: Some(TurbulenceWitness {
                            x1,
                            x2,
                            x3,
                            residuals: (r1, r2, r3),
                        }),
                        bounds,
                    });
                }
            }
        }
    }
    Ok(Search {
        found: None,
        bounds,
    })
}

/// Fine scan for an orbit of minimal period exactly 3. Exploratory: neither
/// outcome is a claim about the parameters.
pub fn search_period3(
    params: &EconomyParams,
    interval: &TrappingInterval,
    settings: &NumericSettings,
) -> Result<Search<PeriodicOrbit>> {
    let found = orbits_of_period(params, interval, 3, settings.period3_grid, settings)
        .into_iter()
        .next();
    Ok(Search {
        found,
        bounds: SearchBounds {
            lo: interval.a,
            hi: interval.b,
            max_period: 3,
            grid_points: settings.period3_grid,
            eps_root: settings.eps_root,
        },
    })
}
