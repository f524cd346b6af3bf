use serde::{Deserialize, Serialize};

/// Tolerances and grid sizes shared by the numerical routines.
///
/// The defaults are the values every test and the CLI use unless overridden.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericSettings {
    /// Absolute tolerance for comparisons against thresholds and for the
    /// strict inequalities of the unimodal criterion.
    pub eps_cmp: f64,
    /// Bound on root residuals `|h(x)|` accepted as "a root".
    pub eps_root: f64,
    /// Relative half-width of the band around `λ_chaos` where the numerical
    /// classifier is not expected to resolve the boundary.
    pub eps_band: f64,
    /// Grid points used by the gate's sampled checks.
    pub gate_grid: usize,
    /// Grid points for the `f² − id` safety-net scan on `[a, m]`.
    pub pi_grid: usize,
    /// Grid points per unit period in periodic-orbit scans (`density · n`).
    pub scan_density: usize,
    /// Grid points for the dedicated period-3 scan.
    pub period3_grid: usize,
    /// Newton iterations allowed before falling back to bisection.
    pub max_newton: usize,
}

impl Default for NumericSettings {
    fn default() -> Self {
        Self {
            eps_cmp: 1e-12,
            eps_root: 1e-10,
            eps_band: 1e-6,
            gate_grid: 1024,
            pi_grid: 4096,
            scan_density: 8192,
            period3_grid: 65536,
            max_newton: 50,
        }
    }
}

impl NumericSettings {
    /// Tolerance for merging two roots into one.
    pub fn merge_tol(&self) -> f64 {
        10.0 * self.eps_root
    }

    /// True when `lambda` sits inside the relative exclusion band around `lambda_chaos`.
    pub fn in_chaos_band(&self, lambda: f64, lambda_chaos: f64) -> bool {
        (lambda - lambda_chaos).abs() <= self.eps_band * lambda_chaos.abs()
    }
}
