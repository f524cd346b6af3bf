//! Chaos classification for the Walras–Samuelson tatonnement process of a
//! two-consumer Cobb–Douglas exchange economy.
//!
//! The price of good `x` evolves as
//!
//! ```text
//! p_{t+1} = f(p_t) = p_t + λ [2β / p_t − 4(1 − α)]
//! ```
//!
//! Restricted to the trapping interval `E = [f(s), f²(s) + s]`, with
//! `s = √(2λβ)` the minimiser of `f`, the map is a unimodal interval map.
//! This crate decides chaos for it two independent ways:
//!
//! * [`gate::classify_closed_form`] compares `λ` against the closed-form
//!   thresholds in [`ThresholdSet`];
//! * [`gate::classify_numerical`] evaluates the unimodal-map criterion on
//!   `f²(m)`, `f³(m)` and the set `Π` by direct iteration and root finding.
//!
//! [`orbit`] produces concrete certificates (periodic orbits, odd cycles and
//! turbulence witnesses for `f²`) that do not depend on either classifier.

pub mod economy;
pub mod error;
pub mod gate;
pub mod orbit;
pub mod roots;
pub mod settings;

pub use economy::{EconomyParams, ThresholdSet, TrappingInterval, WindowBound};
pub use error::{ChaosError, Result};
pub use gate::{ChaosVerdict, GateReport, Lemma3Report, Lemma4Report, Method, PiSet};
pub use orbit::{Orbit, PeriodicOrbit, Search, SearchBounds, TurbulenceWitness};
pub use settings::NumericSettings;
