use thiserror::Error;

use crate::economy::WindowBound;

pub type Result<T> = std::result::Result<T, ChaosError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChaosError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("price must be positive and finite, got {0}")]
    NonPositivePrice(f64),

    /// `λ` lies outside the open window `(λ_G_low, λ_max)`.
    #[error("λ = {lambda} outside the unimodal window: {}", bound_message(*bound, *threshold))]
    OutsideWindow {
        bound: WindowBound,
        lambda: f64,
        threshold: f64,
    },

    #[error("degenerate trapping interval [{a}, {b}] with critical point {m}")]
    DegenerateInterval { a: f64, m: f64, b: f64 },

    #[error("gate check failed: {0}")]
    GateFailed(String),

    #[error("set Π is empty; the fixed point {fixed_point} did not qualify")]
    EmptyPi { fixed_point: f64 },

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

fn bound_message(bound: WindowBound, threshold: f64) -> String {
    match bound {
        WindowBound::Low => format!("λ ≤ λ_G_low = {threshold}"),
        WindowBound::High => format!("λ ≥ λ_max = {threshold}"),
    }
}

impl ChaosError {
    /// Short form of a window violation, e.g. `λ ≤ λ_G_low = 1`.
    pub fn window_message(&self) -> Option<String> {
        match self {
            ChaosError::OutsideWindow {
                bound, threshold, ..
            } => Some(bound_message(*bound, *threshold)),
            _ => None,
        }
    }
}
