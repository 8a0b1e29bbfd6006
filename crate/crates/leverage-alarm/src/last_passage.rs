//! Law of the last passage time to an alarm level `α`.
//!
//! For the killed diffusion of [`crate::diffusion`], `λ_α` is the time of the
//! last visit to `α ∈ (c, ∞)` before killing. Its law has a continuous part
//! with density `p(t; y, α) / (s(α) − s(c))` (transition density w.r.t. the
//! speed measure over the scale increment) and an atom at zero for levels the
//! process may never visit. For positive drift the continuous part carries
//! mass `P_y(T_c < ∞)` only — last visits on paths that escape to `+∞` are
//! not alarm-relevant and are excluded by construction.

use crate::diffusion::DiffusionSpec;
use crate::error::{Error, Result};
use crate::math::quad::{adaptive_simpson, panel_simpson};

/// An alarm level paired with the diffusion it watches. `alpha` must lie
/// strictly above the killing level.
#[derive(Debug, Clone, Copy)]
pub struct AlarmQuery {
    spec: DiffusionSpec,
    alpha: f64,
}

/// Levels closer to `c` than this are treated as the degenerate corner where
/// the visited interval `(c, α)` is empty.
const ALPHA_CORNER_EPS: f64 = 1e-12;

impl AlarmQuery {
    pub fn new(spec: DiffusionSpec, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= spec.c() {
            return Err(Error::invalid(format!(
                "alarm level alpha = {alpha} must lie strictly above c = {}",
                spec.c()
            )));
        }
        Ok(AlarmQuery { spec, alpha })
    }

    pub fn spec(&self) -> &DiffusionSpec {
        &self.spec
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Density of `λ_α` at `t > 0`. Valid on either side of `y`; for
    /// `α > y` this is the continuous part only.
    pub fn lp_density(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("time t = {t} must be positive")));
        }
        let s = &self.spec;
        let ln_p = s.ln_transition_kernel(t, s.y(), self.alpha);
        let ln_sd = s.ln_scale_diff(s.c(), self.alpha);
        Ok((ln_p - ln_sd).exp())
    }

    /// `P_y(λ_α = 0)`: the chance the level is never visited after time 0.
    pub fn lp_atom(&self) -> f64 {
        let s = &self.spec;
        if self.alpha > s.y() {
            // never reaches up to α
            -f64::exp_m1(s.ln_scale_diff(s.c(), s.y()) - s.ln_scale_diff(s.c(), self.alpha))
        } else if s.mu() > 0.0 {
            // below the start: only positive drift can avoid returning
            -f64::exp_m1(-2.0 * s.mu() * (s.y() - self.alpha))
        } else {
            0.0
        }
    }

    /// Truncation horizon after which the density tail is negligible at the
    /// 1e-9 scale: the kernel decays like `exp(-mu^2 t / 2)` with a drifted
    /// Gaussian bump around `|y - α| / |mu|`. Also a sensible upper bound
    /// when tabulating the density for plotting.
    pub fn tail_horizon(&self) -> f64 {
        let mu = self.spec.mu();
        let gap = (self.spec.y() - self.alpha).abs();
        (120.0 / (mu * mu)).max(8.0) + 10.0 * gap / mu.abs()
    }

    /// `P_y(λ_α ∈ [t0, t1], λ_α > 0)`. `t1 = ∞` is allowed and truncated at
    /// the internal tail horizon. Integration runs in `u = sqrt(t)`, which
    /// removes the `1/sqrt(t)` endpoint behaviour that appears when `α = y`.
    pub fn lp_interval(&self, t0: f64, t1: f64) -> Result<f64> {
        if t0.is_nan() || t1.is_nan() || t0 < 0.0 {
            return Err(Error::invalid(format!(
                "interval [{t0}, {t1}] must satisfy 0 <= t0 <= t1"
            )));
        }
        if t1 < t0 {
            return Err(Error::invalid(format!("inverted interval [{t0}, {t1}]")));
        }
        if t0 == t1 {
            return Ok(0.0);
        }
        let t1 = if t1.is_infinite() {
            self.tail_horizon().max(2.0 * t0)
        } else {
            t1
        };
        if t1 <= t0 {
            return Ok(0.0);
        }

        let s = &self.spec;
        // limit of lp_density(u^2) * 2u as u -> 0; nonzero only when α = y
        let origin_limit = if (s.y() - self.alpha).abs() < 1e-12 {
            (-2.0 * s.mu() * s.y() - s.ln_scale_diff(s.c(), self.alpha)).exp()
                / (2.0 * std::f64::consts::PI).sqrt()
        } else {
            0.0
        };
        let f = |u: f64| {
            if u <= 1e-150 {
                origin_limit
            } else {
                match self.lp_density(u * u) {
                    Ok(v) => v * 2.0 * u,
                    Err(_) => f64::NAN, // surfaces as a NonFinite quad error
                }
            }
        };

        // panel boundaries: quarter-year start, then doubling out to t1
        let mut breaks = vec![t0.sqrt()];
        let mut t = 0.25;
        while t < t1 {
            if t > t0 {
                breaks.push(t.sqrt());
            }
            t *= 2.0;
        }
        breaks.push(t1.sqrt());
        panel_simpson(&f, &breaks, 1e-9)
    }

    /// `lp_atom + lp_interval(0, t)`: probability the alarm has already had
    /// its final say by time `t`.
    pub fn lp_within(&self, t: f64) -> Result<f64> {
        Ok(self.lp_atom() + self.lp_interval(0.0, t)?)
    }

    /// `P_y(X_t ∈ (c, α), no return to α after t)` — the joint event that the
    /// process sits in the alarm corridor at `t` and `t` is past the last
    /// visit. By the strong Markov property this integrates the no-return
    /// probability `(s(α) − s(z))/(s(α) − s(c))` against the killed kernel.
    pub fn q_joint_prob(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("time t = {t} must be positive")));
        }
        let s = &self.spec;
        let (c, alpha) = (s.c(), self.alpha);
        if alpha - c < ALPHA_CORNER_EPS {
            return Ok(0.0);
        }
        let ln_sd_full = s.ln_scale_diff(c, alpha);
        let f = |z: f64| {
            let weight = if z >= alpha {
                0.0
            } else {
                (s.ln_scale_diff(z, alpha) - ln_sd_full).exp().min(1.0)
            };
            weight * s.transition_density_lebesgue(t, s.y(), z).unwrap_or(f64::NAN)
        };
        adaptive_simpson(&f, c, alpha, 1e-9)
    }

    /// `P_y(X_t ∈ (c, α))`, the companion occupancy probability.
    pub fn occupancy_prob(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("time t = {t} must be positive")));
        }
        let s = &self.spec;
        if self.alpha - s.c() < ALPHA_CORNER_EPS {
            return Ok(0.0);
        }
        let f = |z: f64| s.transition_density_lebesgue(t, s.y(), z).unwrap_or(f64::NAN);
        adaptive_simpson(&f, s.c(), self.alpha, 1e-9)
    }
}
