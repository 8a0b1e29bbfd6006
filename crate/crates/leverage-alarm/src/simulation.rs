//! Monte Carlo engine: strategy experiments on the leverage ratio, the
//! one-year default probability, threshold search by simulated objective,
//! and brute-force path oracles for cross-checking the analytic modules.
//!
//! # Dynamics and bookkeeping conventions
//!
//! Assets follow exact GBM increments and debt accrues at the rate `r`, so
//! the log leverage ratio `x = ln(A/D)` steps by `(ν_k − r)·dt + σ_k·√dt·Z`
//! with no discretization bias in the state itself. Events are observed at
//! grid times only:
//!
//! * strategy triggers and occupation time read the state at the **start**
//!   of a step (including `t = 0`);
//! * insolvency (`x ≤ 0`) and time-above-threshold counting read the state
//!   at the **end** of a step; a path stops at its first insolvent grid
//!   time.
//!
//! Grid-time monitoring means simulated insolvency probabilities sit
//! between the terminal-comparison probability `Φ(c − μ)` and the
//! continuous-monitoring first-passage probability.
//!
//! # Reproducibility
//!
//! Path `i` draws from its own ChaCha8 stream (`seed` as the key, `i` as
//! the stream index), so results are independent of thread count and of
//! the total number of paths launched; per-path results are reduced with
//! fixed-order pairwise summation. Identical inputs (including the seed)
//! give bitwise-identical outputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::calibration::FirmModel;
use crate::diffusion::DiffusionSpec;
use crate::error::{Error, Result};
use crate::math::erf::norm_cdf;
use crate::occupation::OptimizerConfig;

/// Extended horizon (years) used when a simulated objective needs
/// "eventual insolvency": long enough that for the downward-drift regimes
/// studied the remaining no-default mass is negligible, while upward-drift
/// paths still alive at the end count as never defaulting.
pub const EXTENDED_HORIZON_YEARS: f64 = 30.0;

/// Number of leverage thresholds scanned over `[1, R0]` by
/// [`optimize_rstar_by_simulation`].
pub const RSTAR_GRID_POINTS: usize = 91;

/// Which party's playbook a parameter adjustment models. The label carries
/// no dynamics of its own — the per-step adjustments do — but reports echo
/// it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyMode {
    NoChange,
    Creditors,
    Shareholders,
}

/// A cumulative per-step parameter adjustment applied while the leverage
/// ratio sits at or below the alarm threshold.
///
/// Each step that starts at `R ≤ R*` adds `(d_nu, d_sigma)` to the path's
/// current `(ν_k, σ_k)` — modelling gradual intervention — unless the
/// adjusted pair would violate a constraint, in which case the whole
/// adjustment is skipped for that step: the volatility must stay positive,
/// and with [`Self::with_drift_gap_floor`] the drift may not fall below
/// the accrual rate (`ν_k − r ≥ 0`).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StrategySpec {
    mode: StrategyMode,
    d_nu: f64,
    d_sigma: f64,
    drift_gap_floor: bool,
}

impl StrategySpec {
    /// Baseline: parameters never change.
    pub fn no_change() -> Self {
        StrategySpec {
            mode: StrategyMode::NoChange,
            d_nu: 0.0,
            d_sigma: 0.0,
            drift_gap_floor: false,
        }
    }

    pub fn new(mode: StrategyMode, d_nu: f64, d_sigma: f64) -> Result<Self> {
        if !d_nu.is_finite() || !d_sigma.is_finite() {
            return Err(Error::invalid("strategy adjustments must be finite"));
        }
        if mode == StrategyMode::NoChange && (d_nu != 0.0 || d_sigma != 0.0) {
            return Err(Error::invalid(
                "no_change strategy must have zero adjustments",
            ));
        }
        Ok(StrategySpec {
            mode,
            d_nu,
            d_sigma,
            drift_gap_floor: false,
        })
    }

    /// Require `ν_k − r ≥ 0` after each adjustment (the creditors' rule in
    /// the upward-drift regime: they restrain the firm without pushing its
    /// growth below the financing rate).
    pub fn with_drift_gap_floor(mut self) -> Self {
        self.drift_gap_floor = true;
        self
    }

    pub fn mode(&self) -> StrategyMode {
        self.mode
    }

    pub fn d_nu(&self) -> f64 {
        self.d_nu
    }

    pub fn d_sigma(&self) -> f64 {
        self.d_sigma
    }

    fn is_active(&self) -> bool {
        self.d_nu != 0.0 || self.d_sigma != 0.0
    }
}

/// Apply one cumulative adjustment if the constraints allow it.
fn apply_adjustment(nu: f64, sigma: f64, r: f64, strat: &StrategySpec) -> (f64, f64) {
    let nn = nu + strat.d_nu;
    let ns = sigma + strat.d_sigma;
    if ns > 0.0 && (!strat.drift_gap_floor || nn - r >= 0.0) {
        (nn, ns)
    } else {
        (nu, sigma)
    }
}

/// Path-count, step-size, horizon and seed for one simulation run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimConfig {
    n_paths: usize,
    dt: f64,
    horizon: f64,
    seed: u64,
}

impl SimConfig {
    /// Daily stepping (`dt = 1/252`).
    pub fn new(n_paths: usize, horizon: f64, seed: u64) -> Result<Self> {
        SimConfig::with_dt(n_paths, 1.0 / 252.0, horizon, seed)
    }

    pub fn with_dt(n_paths: usize, dt: f64, horizon: f64, seed: u64) -> Result<Self> {
        if n_paths == 0 {
            return Err(Error::invalid("n_paths must be at least 1"));
        }
        if !(dt > 0.0) || !dt.is_finite() || !horizon.is_finite() || horizon < 0.0 {
            return Err(Error::invalid(format!(
                "need dt > 0 and horizon >= 0, got dt = {dt}, horizon = {horizon}"
            )));
        }
        // horizon = 0 is the degenerate "no events" run; otherwise at least
        // one full step must fit
        if horizon > 0.0 && dt > horizon {
            return Err(Error::invalid(format!(
                "dt = {dt} exceeds horizon = {horizon}"
            )));
        }
        Ok(SimConfig {
            n_paths,
            dt,
            horizon,
            seed,
        })
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    fn rng_for_path(&self, path: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(path as u64);
        rng
    }
}

/// Monte Carlo estimates from one strategy run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StrategyOutcome {
    /// Fraction of paths hitting `R ≤ 1` at a grid time within the horizon.
    pub insolvency_prob: f64,
    /// Mean over paths of (number of step-end states with `R > R*`, while
    /// solvent) divided by the total number of steps.
    pub time_above_frac: f64,
}

/// Fixed-order pairwise sum: associativity does not depend on thread count
/// because the inputs are already collected in path order.
fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        v.iter().sum()
    } else {
        let mid = v.len() / 2;
        pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
    }
}

/// Run the leverage process under an alarm strategy and report insolvency
/// frequency and time spent above the threshold.
pub fn simulate_strategy(
    model: &FirmModel,
    rstar: f64,
    strat: &StrategySpec,
    cfg: &SimConfig,
) -> Result<StrategyOutcome> {
    if !(rstar >= 1.0) || !rstar.is_finite() {
        return Err(Error::invalid(format!(
            "threshold R* = {rstar} must be at least 1"
        )));
    }
    let steps = cfg.steps();
    let lx = rstar.ln();
    let x0 = model.r0().ln();
    let (r, nu0, sigma0) = (model.r(), model.nu(), model.sigma());
    let dt = cfg.dt;
    let sqdt = dt.sqrt();

    let stats: Vec<(f64, f64)> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.rng_for_path(i);
            let mut x = x0;
            let mut nu = nu0;
            let mut sigma = sigma0;
            let mut above = 0usize;
            let mut dead = 0.0;
            for _ in 0..steps {
                if strat.is_active() && x <= lx {
                    let (nn, ns) = apply_adjustment(nu, sigma, r, strat);
                    nu = nn;
                    sigma = ns;
                }
                let z: f64 = StandardNormal.sample(&mut rng);
                x += (nu - r) * dt + sigma * sqdt * z;
                if x <= 0.0 {
                    dead = 1.0;
                    break;
                }
                if x > lx {
                    above += 1;
                }
            }
            let frac = if steps == 0 {
                0.0
            } else {
                above as f64 / steps as f64
            };
            (dead, frac)
        })
        .collect();

    let n = cfg.n_paths as f64;
    let deads: Vec<f64> = stats.iter().map(|s| s.0).collect();
    let fracs: Vec<f64> = stats.iter().map(|s| s.1).collect();
    Ok(StrategyOutcome {
        insolvency_prob: pairwise_sum(&deads) / n,
        time_above_frac: pairwise_sum(&fracs) / n,
    })
}

/// Terminal-comparison default probability: the fraction of paths whose
/// assets end the horizon below the accrued debt, with no barrier along
/// the way. Because increments are exact, the estimate is unbiased in `dt`.
pub fn default_probability(model: &FirmModel, cfg: &SimConfig) -> Result<f64> {
    let steps = cfg.steps();
    let drift = (model.nu() - model.r()) * cfg.dt;
    let vol = model.sigma() * cfg.dt.sqrt();
    let x0 = model.r0().ln();
    let hits: Vec<f64> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.rng_for_path(i);
            let mut x = x0;
            for _ in 0..steps {
                let z: f64 = StandardNormal.sample(&mut rng);
                x += drift + vol * z;
            }
            if x < 0.0 {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Ok(pairwise_sum(&hits) / cfg.n_paths as f64)
}

/// Closed form for the same comparison: `P(X_horizon ≤ c) = Φ((c − y −
/// μ·horizon)/√horizon)`, which is `Φ(c − μ)` at the one-year horizon from
/// the standard start.
pub fn default_probability_analytic(model: &FirmModel, horizon: f64) -> Result<f64> {
    if !(horizon > 0.0) {
        return Err(Error::invalid(format!(
            "horizon = {horizon} must be positive"
        )));
    }
    let spec = model.spec();
    Ok(norm_cdf(
        (spec.c() - spec.y() - spec.mu() * horizon) / horizon.sqrt(),
    ))
}

/// One evaluated threshold from the simulated objective scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RStarPoint {
    pub rstar: f64,
    pub objective: f64,
    /// P(insolvent by `t`, or below `R*` at `t` for good and eventually
    /// insolvent).
    pub term_alarm: f64,
    /// E[e^{−q·(time at or below R*)}; insolvent within the extended
    /// horizon].
    pub term_occupation: f64,
}

/// Result of [`optimize_rstar_by_simulation`].
#[derive(Debug, Clone, Serialize)]
pub struct RStarSearch {
    pub rstar_opt: f64,
    pub objective: f64,
    /// One-horizon strategy statistics re-simulated at the optimum.
    pub insolvency_prob: f64,
    pub time_above_frac: f64,
    pub curve: Vec<RStarPoint>,
}

/// Estimate the alarm objective by simulation for one threshold.
///
/// Term 1 counts paths that are insolvent by `t`, plus paths that sit below
/// `R*` at `t`, never climb back above it, and go insolvent within
/// [`EXTENDED_HORIZON_YEARS`] — the path event behind "the alarm has
/// sounded for the last time and default follows". Term 2 averages
/// `e^{−q·(occupied time at or below R*)}` over paths insolvent within the
/// extended horizon (survivors contribute zero). Occupation reads step-start
/// states over the whole lifetime.
fn objective_at_threshold(
    model: &FirmModel,
    rstar: f64,
    strat: &StrategySpec,
    cfg: &SimConfig,
    opt: &OptimizerConfig,
) -> Result<RStarPoint> {
    let dt = cfg.dt;
    let sqdt = dt.sqrt();
    let t1_steps = (opt.horizon_t() / dt).round() as usize;
    let total_steps = (EXTENDED_HORIZON_YEARS / dt).round() as usize;
    if t1_steps == 0 || t1_steps > total_steps {
        return Err(Error::invalid(format!(
            "objective horizon {} must lie in (0, {}] years",
            opt.horizon_t(),
            EXTENDED_HORIZON_YEARS
        )));
    }
    let lx = rstar.ln();
    let x0 = model.r0().ln();
    let (r, nu0, sigma0) = (model.r(), model.nu(), model.sigma());
    let q = opt.q();

    let stats: Vec<(f64, f64)> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.rng_for_path(i);
            let mut x = x0;
            let mut nu = nu0;
            let mut sigma = sigma0;
            let mut occ_steps = 0usize;
            let mut dead = false;
            let mut dead_by_t1 = false;
            let mut below_at_t1 = false;
            let mut stayed_below = true;
            for k in 0..total_steps {
                let below = x <= lx;
                if below {
                    occ_steps += 1;
                    if strat.is_active() {
                        let (nn, ns) = apply_adjustment(nu, sigma, r, strat);
                        nu = nn;
                        sigma = ns;
                    }
                }
                let z: f64 = StandardNormal.sample(&mut rng);
                x += (nu - r) * dt + sigma * sqdt * z;
                if x <= 0.0 {
                    dead = true;
                    dead_by_t1 = k < t1_steps;
                    break;
                }
                if k == t1_steps - 1 {
                    below_at_t1 = x <= lx;
                }
                if k >= t1_steps && x > lx {
                    stayed_below = false;
                }
            }
            let term1 = dead_by_t1 || (below_at_t1 && stayed_below && dead);
            let term2 = if dead {
                (-q * occ_steps as f64 * dt).exp()
            } else {
                0.0
            };
            (if term1 { 1.0 } else { 0.0 }, term2)
        })
        .collect();

    let n = cfg.n_paths as f64;
    let t1: Vec<f64> = stats.iter().map(|s| s.0).collect();
    let t2: Vec<f64> = stats.iter().map(|s| s.1).collect();
    let term_alarm = pairwise_sum(&t1) / n;
    let term_occupation = pairwise_sum(&t2) / n;
    Ok(RStarPoint {
        rstar,
        objective: opt.gamma() * term_alarm + (1.0 - opt.gamma()) * term_occupation,
        term_alarm,
        term_occupation,
    })
}

/// Scan an explicit threshold grid with common random numbers (every
/// threshold reuses the same per-path streams) and return the argmax,
/// with one-horizon strategy statistics re-simulated at the winner.
pub fn optimize_rstar_on_grid(
    model: &FirmModel,
    strat: &StrategySpec,
    cfg: &SimConfig,
    opt: &OptimizerConfig,
    grid: &[f64],
) -> Result<RStarSearch> {
    if grid.is_empty() {
        return Err(Error::invalid("threshold grid is empty"));
    }
    for &rs in grid {
        if !(rs >= 1.0) || !rs.is_finite() {
            return Err(Error::invalid(format!(
                "grid threshold {rs} must be at least 1"
            )));
        }
    }
    let mut curve = Vec::with_capacity(grid.len());
    for &rs in grid {
        curve.push(objective_at_threshold(model, rs, strat, cfg, opt)?);
    }
    // first-on-ties keeps the smallest threshold, mirroring the analytic
    // optimizer's preference for the earlier alarm
    let mut best = 0usize;
    for (i, p) in curve.iter().enumerate() {
        if p.objective > curve[best].objective {
            best = i;
        }
    }
    let at_best = simulate_strategy(model, curve[best].rstar, strat, cfg)?;
    Ok(RStarSearch {
        rstar_opt: curve[best].rstar,
        objective: curve[best].objective,
        insolvency_prob: at_best.insolvency_prob,
        time_above_frac: at_best.time_above_frac,
        curve,
    })
}

/// Default scan: [`RSTAR_GRID_POINTS`] equally spaced thresholds spanning
/// `[1, R0]`, endpoints included.
pub fn optimize_rstar_by_simulation(
    model: &FirmModel,
    strat: &StrategySpec,
    cfg: &SimConfig,
    opt: &OptimizerConfig,
) -> Result<RStarSearch> {
    let n = RSTAR_GRID_POINTS;
    let r0 = model.r0();
    let mut grid: Vec<f64> = (0..n)
        .map(|i| 1.0 + (r0 - 1.0) * i as f64 / (n - 1) as f64)
        .collect();
    grid[n - 1] = r0;
    optimize_rstar_on_grid(model, strat, cfg, opt, &grid)
}

/// Per-path statistics from the brute-force oracle.
#[derive(Debug, Clone, Copy)]
pub struct PathStats {
    /// First grid time with `X ≤ c`, if within the horizon.
    pub killing_time: Option<f64>,
    /// Last grid time the path was inside the band, or crossed the level
    /// between grid times, before killing/horizon.
    pub last_visit: Option<f64>,
    /// Time (years) spent at or below the reference level while alive.
    pub occupation_below: f64,
}

/// Euler paths of `X_t = y + μt + B_t` absorbed at `c`, reporting killing
/// times, last visits to `level` (counted inside `[level − band/2, level +
/// band/2]` or on a sign change across `level`), and occupation time at or
/// below `level`.
///
/// This is the slow, assumption-free reference implementation the analytic
/// modules are tested against.
pub fn oracle_paths(
    spec: &DiffusionSpec,
    cfg: &SimConfig,
    level: f64,
    band: f64,
) -> Result<Vec<PathStats>> {
    if !(band >= 0.0) || !band.is_finite() || !level.is_finite() {
        return Err(Error::invalid(format!(
            "need finite level and band >= 0, got level = {level}, band = {band}"
        )));
    }
    let steps = cfg.steps();
    let dt = cfg.dt;
    let sqdt = dt.sqrt();
    let (mu, c, y) = (spec.mu(), spec.c(), spec.y());
    let half = 0.5 * band;
    Ok((0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.rng_for_path(i);
            let mut x = y;
            let mut killing_time = None;
            let mut last_visit = if (y - level).abs() <= half {
                Some(0.0)
            } else {
                None
            };
            let mut occ = 0.0;
            for k in 0..steps {
                if x <= level {
                    occ += dt;
                }
                let prev = x;
                let z: f64 = StandardNormal.sample(&mut rng);
                x += mu * dt + sqdt * z;
                let t = (k + 1) as f64 * dt;
                if x <= c {
                    killing_time = Some(t);
                    break;
                }
                let crossed = (prev - level).signum() != (x - level).signum();
                if (x - level).abs() <= half || crossed {
                    last_visit = Some(t);
                }
            }
            PathStats {
                killing_time,
                last_visit,
                occupation_below: occ,
            }
        })
        .collect())
}
