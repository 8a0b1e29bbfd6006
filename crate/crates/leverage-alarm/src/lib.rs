//! Leverage-diffusion insolvency analytics.
//!
//! A firm's standardized log-leverage is modelled as Brownian motion with
//! drift, killed at the insolvency level. This crate calibrates the model
//! from market data, evaluates last-passage alarm laws and
//! time-to-insolvency densities, optimizes alarm thresholds against a
//! probability/occupation trade-off, and cross-checks everything by path
//! simulation.

pub mod calibration;
pub mod curve;
pub mod diffusion;
pub mod error;
pub mod laplace;
pub mod last_passage;
pub mod math;
pub mod occupation;
pub mod reversal;
pub mod simulation;

pub use calibration::{FirmModel, MarketData, ParamEstimate, WaccBreakdown, WaccInputs};
pub use curve::{CurveKind, DensityCurve};
pub use diffusion::{DiffusionSpec, MU_MIN};
pub use error::{Error, Result};
pub use last_passage::AlarmQuery;
pub use occupation::{AlarmChoice, ObjectiveParts, OptimizerConfig};
pub use simulation::{
    PathStats, RStarPoint, RStarSearch, SimConfig, StrategyMode, StrategyOutcome, StrategySpec,
};
