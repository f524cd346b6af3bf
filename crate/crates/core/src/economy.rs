//! Exchange-economy parameters, the tatonnement map and its trapping interval.

use serde::{Deserialize, Serialize};

use crate::error::{ChaosError, Result};
use crate::settings::NumericSettings;

/// Which side of the window `(λ_G_low, λ_max)` a rejected `λ` fell on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowBound {
    Low,
    High,
}

/// The triple `(α, β, λ)`: Cobb–Douglas exponents of the two consumers and
/// the adjustment speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EconomyParams {
    alpha: f64,
    beta: f64,
    lambda: f64,
}

impl EconomyParams {
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(ChaosError::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must lie in (0, 1)",
            });
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(ChaosError::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "must lie in (0, 1)",
            });
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(ChaosError::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must be positive and finite",
            });
        }
        Ok(Self {
            alpha,
            beta,
            lambda,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Same economy, different adjustment speed.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, lambda)
    }

    /// Excess demand for good `x`: `z(p) = 2β/p − 4(1−α)`.
    pub fn excess_demand(&self, p: f64) -> Result<f64> {
        check_price(p)?;
        Ok(self.excess_demand_raw(p))
    }

    /// One tatonnement step `f(p) = p + λ z(p)`.
    ///
    /// The result may be non-positive when `λ ≥ λ_max`.
    pub fn step(&self, p: f64) -> Result<f64> {
        check_price(p)?;
        Ok(self.map(p))
    }

    #[inline]
    fn excess_demand_raw(&self, p: f64) -> f64 {
        2.0 * self.beta / p - 4.0 * (1.0 - self.alpha)
    }

    /// Unchecked `f(p)`, for hot loops over points already known to be in `E`.
    #[inline]
    pub fn map(&self, p: f64) -> f64 {
        p + self.lambda * self.excess_demand_raw(p)
    }

    /// `f'(p) = 1 − 2λβ/p²`.
    #[inline]
    pub fn slope(&self, p: f64) -> f64 {
        1.0 - 2.0 * self.lambda * self.beta / (p * p)
    }

    /// `fⁿ(p)` without domain checks.
    #[inline]
    pub fn map_n(&self, p: f64, n: usize) -> f64 {
        (0..n).fold(p, |x, _| self.map(x))
    }

    /// `(fⁿ(p), (fⁿ)'(p))` by the chain rule.
    #[inline]
    pub fn map_n_with_slope(&self, p: f64, n: usize) -> (f64, f64) {
        let mut x = p;
        let mut d = 1.0;
        for _ in 0..n {
            d *= self.slope(x);
            x = self.map(x);
        }
        (x, d)
    }

    /// The minimiser `s = √(2λβ)` of `f`.
    pub fn critical_point(&self) -> f64 {
        (2.0 * self.lambda * self.beta).sqrt()
    }

    pub fn thresholds(&self) -> ThresholdSet {
        ThresholdSet::new(self.alpha, self.beta)
    }

    /// Rejects `λ` outside the open window `(λ_G_low, λ_max)`, with `eps_cmp` slack.
    pub fn check_window(&self, eps_cmp: f64) -> Result<ThresholdSet> {
        let t = self.thresholds();
        if self.lambda - t.lambda_g_low <= eps_cmp {
            return Err(ChaosError::OutsideWindow {
                bound: WindowBound::Low,
                lambda: self.lambda,
                threshold: t.lambda_g_low,
            });
        }
        if t.lambda_max - self.lambda <= eps_cmp {
            return Err(ChaosError::OutsideWindow {
                bound: WindowBound::High,
                lambda: self.lambda,
                threshold: t.lambda_max,
            });
        }
        Ok(t)
    }

    /// The interval `E = [f(s), f²(s) + s]` on which `f` is unimodal.
    pub fn trapping_interval(&self, settings: &NumericSettings) -> Result<TrappingInterval> {
        self.check_window(settings.eps_cmp)?;
        let m = self.critical_point();
        let a = self.map(m);
        let b = self.map(a) + m;
        TrappingInterval::new(a, m, b)
    }
}

fn check_price(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(ChaosError::NonPositivePrice(p))
    }
}

/// `E = [a, b]` with interior critical point `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrappingInterval {
    pub a: f64,
    pub m: f64,
    pub b: f64,
}

impl TrappingInterval {
    pub fn new(a: f64, m: f64, b: f64) -> Result<Self> {
        if a < m && m < b && a.is_finite() && b.is_finite() {
            Ok(Self { a, m, b })
        } else {
            Err(ChaosError::DegenerateInterval { a, m, b })
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }
}

/// The four closed-form `λ` thresholds of the classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet {
    /// `β / 8(1−α)²`: below it `f(s) ≥ s` and the gate fails.
    pub lambda_g_low: f64,
    /// `9β / 32(1−α)²`: above it `Π` is the fixed point alone.
    pub lambda_pi: f64,
    /// `25β / 72(1−α)²`: onset of odd-period cycles.
    pub lambda_chaos: f64,
    /// `β / 2(1−α)²`: above it `f(s) ≤ 0`.
    pub lambda_max: f64,
}

impl ThresholdSet {
    pub fn new(alpha: f64, beta: f64) -> Self {
        let one_minus = 1.0 - alpha;
        let sq = one_minus * one_minus;
        let t = Self {
            lambda_g_low: beta / (8.0 * sq),
            lambda_pi: 9.0 * beta / (32.0 * sq),
            lambda_chaos: 25.0 * beta / (72.0 * sq),
            lambda_max: beta / (2.0 * sq),
        };
        assert!(
            t.lambda_g_low < t.lambda_pi
                && t.lambda_pi < t.lambda_chaos
                && t.lambda_chaos < t.lambda_max,
            "threshold ordering violated: {t:?}"
        );
        t
    }

    /// `25β / 72(1−α)`, the unsquared variant printed in one of the lemma
    /// statements. Reported for comparison only.
    pub fn lambda_chaos_unsquared(alpha: f64, beta: f64) -> f64 {
        25.0 * beta / (72.0 * (1.0 - alpha))
    }

    /// Places `count` points strictly inside `(λ_G_low, λ_max)`, evenly spaced.
    pub fn window_points(&self, count: usize) -> Vec<f64> {
        let span = self.lambda_max - self.lambda_g_low;
        (1..=count)
            .map(|i| self.lambda_g_low + span * i as f64 / (count + 1) as f64)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(alpha: f64, beta: f64, lambda: f64) -> EconomyParams {
        EconomyParams::new(alpha, beta, lambda).unwrap()
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(EconomyParams::new(0.0, 0.5, 1.0).is_err());
        assert!(EconomyParams::new(1.0, 0.5, 1.0).is_err());
        assert!(EconomyParams::new(0.5, 0.0, 1.0).is_err());
        assert!(EconomyParams::new(0.5, 1.2, 1.0).is_err());
        assert!(EconomyParams::new(0.5, 0.5, 0.0).is_err());
        assert!(EconomyParams::new(0.5, 0.5, f64::NAN).is_err());
        assert!(EconomyParams::new(0.5, 0.5, f64::INFINITY).is_err());
    }

    #[test]
    fn excess_demand_examples() {
        assert_eq!(p(0.75, 0.5, 1.0).excess_demand(1.0).unwrap(), 0.0);
        assert!(close(
            p(0.75, 0.5, 1.0).excess_demand(1.9).unwrap(),
            -9.0 / 19.0,
            1e-15
        ));
        assert!(close(
            p(0.5, 0.5, 1.0).excess_demand(2.0).unwrap(),
            -1.5,
            1e-15
        ));
        assert!(matches!(
            p(0.5, 0.5, 1.0).excess_demand(0.0),
            Err(ChaosError::NonPositivePrice(_))
        ));
        assert!(p(0.5, 0.5, 1.0).excess_demand(-1.0).is_err());
    }

    #[test]
    fn step_examples() {
        let e = p(0.75, 0.5, 3.61);
        assert!(close(e.step(1.9).unwrap(), 0.19, 1e-14));
        assert_eq!(e.step(1.0).unwrap(), 1.0);
        assert!(close(e.step(0.19).unwrap(), 15.58, 1e-12));
        assert!(e.step(0.0).is_err());
        assert!(e.step(-0.3).is_err());
    }

    #[test]
    fn critical_point_examples() {
        assert!(close(p(0.75, 0.5, 3.61).critical_point(), 1.9, 1e-15));
        assert!(close(
            p(0.75, 0.5, 2.0).critical_point(),
            2f64.sqrt(),
            1e-15
        ));
        // at λ = λ_G_low the minimum touches the diagonal
        let e = p(0.75, 0.5, 1.0);
        let s = e.critical_point();
        assert!(close(s, 1.0, 1e-15));
        assert!(close(e.map(s), s, 1e-15));
    }

    #[test]
    fn trapping_interval_examples() {
        let st = NumericSettings::default();
        let e = p(0.75, 0.5, 3.61).trapping_interval(&st).unwrap();
        assert!(close(e.a, 0.19, 1e-14));
        assert!(close(e.m, 1.9, 1e-15));
        assert!(close(e.b, 17.48, 1e-12));

        let e = p(0.75, 0.5, 2.0).trapping_interval(&st).unwrap();
        assert!(close(e.a, 0.828_427_124_746_190_1, 1e-12));
        assert!(close(e.m, std::f64::consts::SQRT_2, 1e-12));
        assert!(close(e.b, 2.656_854_249_492_38, 1e-12));

        let err = p(0.75, 0.5, 0.5).trapping_interval(&st).unwrap_err();
        assert_eq!(err.window_message().unwrap(), "λ ≤ λ_G_low = 1");
        let err = p(0.75, 0.5, 4.0).trapping_interval(&st).unwrap_err();
        assert!(matches!(
            err,
            ChaosError::OutsideWindow {
                bound: WindowBound::High,
                ..
            }
        ));
        // exactly at either bound the interval degenerates
        assert!(p(0.75, 0.5, 1.0).trapping_interval(&st).is_err());
    }

    #[test]
    fn threshold_examples() {
        let t = ThresholdSet::new(0.75, 0.5);
        assert!(close(t.lambda_g_low, 1.0, 1e-12));
        assert!(close(t.lambda_pi, 2.25, 1e-12));
        assert!(close(t.lambda_chaos, 25.0 / 9.0, 1e-12));
        assert!(close(t.lambda_max, 4.0, 1e-12));

        let t = ThresholdSet::new(0.5, 0.5);
        assert!(close(t.lambda_g_low, 0.25, 1e-12));
        assert!(close(t.lambda_pi, 0.5625, 1e-12));
        assert!(close(t.lambda_chaos, 25.0 / 36.0, 1e-12));
        assert!(close(t.lambda_max, 1.0, 1e-12));
    }

    #[test]
    fn window_points_are_interior() {
        let t = ThresholdSet::new(0.75, 0.5);
        let pts = t.window_points(3);
        assert_eq!(pts, vec![1.75, 2.5, 3.25]);
        assert_eq!(t.window_points(1), vec![2.5]);
    }

    fn arb_params() -> impl Strategy<Value = EconomyParams> {
        (0.01f64..0.99, 0.01f64..0.99, 0.01f64..50.0)
            .prop_map(|(a, b, l)| EconomyParams::new(a, b, l).unwrap())
    }

    proptest! {
        #[test]
        fn thresholds_are_ordered(a in 0.001f64..0.999, b in 0.001f64..0.999) {
            let t = ThresholdSet::new(a, b);
            prop_assert!(t.lambda_g_low < t.lambda_pi);
            prop_assert!(t.lambda_pi < t.lambda_chaos);
            prop_assert!(t.lambda_chaos < t.lambda_max);
        }

        #[test]
        fn step_is_convex(e in arb_params(), x in 0.05f64..20.0, y in 0.05f64..20.0, t in 0.0f64..1.0) {
            let mid = e.map(t * x + (1.0 - t) * y);
            let chord = t * e.map(x) + (1.0 - t) * e.map(y);
            let scale = 1.0 + e.map(x).abs() + e.map(y).abs();
            prop_assert!(mid <= chord + 1e-12 * scale);
        }

        #[test]
        fn critical_point_minimises(e in arb_params()) {
            let s = e.critical_point();
            let fs = e.map(s);
            for i in 1..=400 {
                let x = i as f64 * 0.05;
                prop_assert!(fs <= e.map(x) + 1e-12 * (1.0 + fs.abs()));
            }
        }

        #[test]
        fn slope_matches_central_difference(e in arb_params()) {
            let h = 1e-5;
            let kb = e.lambda() * e.beta();
            for &x in &[0.5, 1.0, 2.0, 5.0] {
                let fd = (e.map(x + h) - e.map(x - h)) / (2.0 * h);
                // truncation h²|f'''|/6 with f''' = −12λβ/p⁴, plus rounding
                let tol = 4.0 * kb * h * h / x.powi(4) + 1e-14 * (1.0 + e.map(x).abs()) / h;
                prop_assert!((fd - e.slope(x)).abs() <= tol, "x={} fd={} exact={}", x, fd, e.slope(x));
            }
        }

        #[test]
        fn minimum_positive_iff_below_lambda_max(e in arb_params()) {
            let t = e.thresholds();
            prop_assume!((e.lambda() - t.lambda_max).abs() > 1e-9 * t.lambda_max);
            let fs = e.map(e.critical_point());
            prop_assert_eq!(fs > 0.0, e.lambda() < t.lambda_max);
        }

        #[test]
        fn minimum_below_diagonal_iff_above_g_low(e in arb_params()) {
            let t = e.thresholds();
            prop_assume!((e.lambda() - t.lambda_g_low).abs() > 1e-9 * t.lambda_g_low);
            let s = e.critical_point();
            prop_assert_eq!(e.map(s) < s, e.lambda() > t.lambda_g_low);
        }

        #[test]
        fn interval_is_ordered_and_positive(a in 0.02f64..0.98, b in 0.02f64..0.98, frac in 0.001f64..0.999) {
            let t = ThresholdSet::new(a, b);
            let lambda = t.lambda_g_low + frac * (t.lambda_max - t.lambda_g_low);
            let e = EconomyParams::new(a, b, lambda).unwrap();
            let iv = e.trapping_interval(&NumericSettings::default()).unwrap();
            prop_assert!(iv.a < iv.m && iv.m < iv.b);
            prop_assert!(iv.a > 0.0);
        }
    }
}
