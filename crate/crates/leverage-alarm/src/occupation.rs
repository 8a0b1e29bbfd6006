//! Occupation-time discounting below the alarm level, the alarm objective,
//! and the optimal-level search.
//!
//! The objective trades off two desiderata for an alarm level `α ∈ [c, y]`
//! at a review horizon `t`:
//!
//! * **alarm term** — probability that by time `t` the alarm has rung "for
//!   good": the process sits in `(c, α)` with no later return to `α`, or has
//!   already defaulted;
//! * **occupation term** — `E_y[e^{−q·A_∞}; T_c < ∞]`, the discounted (at the
//!   firm's capital cost `q`) total time the surviving-to-default process
//!   spends below `α`. Raising `α` lengthens the spell below it, so this term
//!   always pulls toward the corner `α = c`.
//!
//! The weighted sum `Γ·alarm + (1−Γ)·occupation` is maximized over a compact
//! interval, which we do with a deterministic coarse grid plus golden-section
//! refinement — the objective can have several local maxima, so a purely
//! local method is initial-value-sensitive.

use crate::diffusion::DiffusionSpec;
use crate::error::{Error, Result};
use crate::last_passage::AlarmQuery;

/// Weights and resolution for the alarm-level optimization.
#[derive(Debug, Clone, Copy)]
pub struct OptimizerConfig {
    gamma: f64,
    q: f64,
    horizon_t: f64,
    coarse_grid_n: usize,
    refine_tol: f64,
}

impl OptimizerConfig {
    pub fn new(gamma: f64, q: f64, horizon_t: f64) -> Result<Self> {
        Self::with_resolution(gamma, q, horizon_t, 201, 1e-6)
    }

    pub fn with_resolution(
        gamma: f64,
        q: f64,
        horizon_t: f64,
        coarse_grid_n: usize,
        refine_tol: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::invalid(format!("gamma = {gamma} must lie in [0, 1]")));
        }
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::invalid(format!("discount rate q = {q} must be positive")));
        }
        if !(horizon_t > 0.0) || !horizon_t.is_finite() {
            return Err(Error::invalid(format!(
                "horizon_t = {horizon_t} must be positive"
            )));
        }
        if coarse_grid_n < 100 {
            return Err(Error::invalid(format!(
                "coarse_grid_n = {coarse_grid_n} must be at least 100"
            )));
        }
        if !(refine_tol > 0.0) {
            return Err(Error::invalid("refine_tol must be positive"));
        }
        Ok(OptimizerConfig {
            gamma,
            q,
            horizon_t,
            coarse_grid_n,
            refine_tol,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn horizon_t(&self) -> f64 {
        self.horizon_t
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::invalid(format!("gamma = {gamma} must lie in [0, 1]")));
        }
        self.gamma = gamma;
        Ok(self)
    }
}

/// Objective value split into its weighted components;
/// `total = gamma·alarm_term + (1−gamma)·occupation_term` exactly.
#[derive(Debug, Clone, Copy)]
pub struct ObjectiveParts {
    pub total: f64,
    pub alarm_term: f64,
    pub occupation_term: f64,
}

/// Result of the alarm-level optimization.
#[derive(Debug, Clone, Copy)]
pub struct AlarmChoice {
    pub alpha: f64,
    pub value: f64,
    pub parts: ObjectiveParts,
}

/// Levels within this distance of `c` are treated as the corner itself (the
/// alarm corridor `(c, α)` is empty there).
const CORNER_EPS: f64 = 1e-12;

/// `E_y[e^{−q A_∞}; T_c < ∞]` where `A_∞` is the total time spent in
/// `(c, α)` before default.
///
/// Both drift branches are evaluated with the dominant exponential factored
/// out of `cosh ± sinh`, so every exponent is non-positive:
/// with `w = √(μ² + 2q)`, `d = α − c`,
///
/// ```text
/// μ > 0:  2 e^{−2μy + μ(α+c) − wd} / [ (1 + e^{−2wd}) + (μ/w)(1 − e^{−2wd}) ]
/// μ < 0:  2 e^{(|μ| − w)d}         / [ (1 + e^{−2wd}) − (μ/w)(1 − e^{−2wd}) ]
/// ```
///
/// (`w ≥ |μ|`, so the negative-drift exponent is ≤ 0: the growing
/// `e^{−μ(α−c)}` numerator of the textbook form cancels against the
/// leading `e^{wd}/2` inside `cosh − (μ/w)·sinh`.)
///
/// At `α = c` this reduces to `P_y(T_c < ∞)`: 1 for negative drift,
/// `e^{−2μ(y−c)}` for positive.
pub fn occupation_laplace(alpha: f64, spec: &DiffusionSpec, q: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::invalid(format!("discount rate q = {q} must be positive")));
    }
    if !alpha.is_finite() || alpha < spec.c() || alpha > spec.y() {
        return Err(Error::invalid(format!(
            "alpha = {alpha} must lie in [c, y] = [{}, {}]",
            spec.c(),
            spec.y()
        )));
    }
    let mu = spec.mu();
    let d = alpha - spec.c();
    let w = (mu * mu + 2.0 * q).sqrt();
    let e2wd = (-2.0 * w * d).exp();
    let ratio = mu / w; // in (-1, 1)
    Ok(if mu > 0.0 {
        let expo = -2.0 * mu * spec.y() + mu * (alpha + spec.c()) - w * d;
        2.0 * expo.exp() / ((1.0 + e2wd) + ratio * (1.0 - e2wd))
    } else {
        let expo = (mu.abs() - w) * d;
        2.0 * expo.exp() / ((1.0 + e2wd) - ratio * (1.0 - e2wd))
    })
}

/// The alarm objective at level `alpha`, with its component breakdown.
pub fn objective(
    alpha: f64,
    spec: &DiffusionSpec,
    cfg: &OptimizerConfig,
) -> Result<ObjectiveParts> {
    let t = cfg.horizon_t;
    let joint = if alpha - spec.c() < CORNER_EPS {
        0.0
    } else {
        AlarmQuery::new(*spec, alpha)?.q_joint_prob(t)?
    };
    let alarm_term = joint + spec.first_passage_cdf(t)?;
    let occupation_term = occupation_laplace(alpha, spec, cfg.q)?;
    let total = cfg.gamma * alarm_term + (1.0 - cfg.gamma) * occupation_term;
    Ok(ObjectiveParts {
        total,
        alarm_term,
        occupation_term,
    })
}

/// Maximize the objective over `α ∈ [c, y]`.
///
/// Deterministic: a `coarse_grid_n`-point scan (ascending; ties within 1e−12
/// keep the smaller level, i.e. the most permissive alarm) followed by
/// golden-section refinement on the bracket around the best grid point. The
/// refined candidate replaces the grid winner only if it is strictly better,
/// so no grid point ever beats the returned level by more than 1e−9.
pub fn optimize_alpha(spec: &DiffusionSpec, cfg: &OptimizerConfig) -> Result<AlarmChoice> {
    let (c, y) = (spec.c(), spec.y());
    let n = cfg.coarse_grid_n;
    let step = (y - c) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { y } else { c + step * i as f64 })
        .collect();

    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    let mut values = Vec::with_capacity(n);
    for (i, &a) in grid.iter().enumerate() {
        let v = objective(a, spec, cfg)?.total;
        values.push(v);
        if v > best_v + CORNER_EPS {
            best_v = v;
            best_i = i;
        }
    }

    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(n - 1)];
    let (cand, cand_v) = golden_max(
        &|a| objective(a, spec, cfg).map(|p| p.total),
        lo,
        hi,
        cfg.refine_tol,
    )?;

    let alpha = if cand_v > best_v + CORNER_EPS {
        cand
    } else {
        grid[best_i]
    };
    let parts = objective(alpha, spec, cfg)?;
    Ok(AlarmChoice {
        alpha,
        value: parts.total,
        parts,
    })
}

/// Golden-section maximization on `[a, b]` to interval width `tol`.
fn golden_max(
    f: &dyn Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    if b - a <= tol {
        let m = 0.5 * (a + b);
        return Ok((m, f(m)?));
    }
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1)?;
        }
    }
    let m = 0.5 * (a + b);
    Ok((m, f(m)?))
}

/// Optimal level for each weight in `gammas` (each must lie in `[0, 1]`).
pub fn gamma_sweep(
    spec: &DiffusionSpec,
    cfg: &OptimizerConfig,
    gammas: &[f64],
) -> Result<Vec<(f64, AlarmChoice)>> {
    let mut out = Vec::with_capacity(gammas.len());
    for &g in gammas {
        let cfg_g = cfg.with_gamma(g)?;
        out.push((g, optimize_alpha(spec, &cfg_g)?));
    }
    Ok(out)
}
