//! Brownian motion with drift on `(c, ∞)`, killed at `c`.
//!
//! The model for a firm's standardized log-leverage: starting at `y` (in
//! practice 0), drifting at `mu`, absorbed the first time it touches the
//! insolvency level `c < y`. Scale function, speed measure, killed transition
//! densities and the first-passage law all live here; everything downstream
//! (last-passage alarms, reversal, occupation functionals) is built on top.
//!
//! All formulas are arranged so that every `exp` argument is non-positive
//! whenever the result is representable. In particular
//!
//! * the scale-function increment is computed in log space and stays finite
//!   for `|mu * x|` up to ~700;
//! * the killed transition density w.r.t. Lebesgue measure uses the identity
//!   `E1 - E2 = 2 (u-c)(v-c)/t` between its two Gaussian exponents, so the
//!   image term is folded in through `expm1` of a non-positive quantity;
//! * the drift-dominated branch of the first-passage CDF is evaluated through
//!   the scaled complement `erfcx`, avoiding the `exp(+big) * Phi(-big)`
//!   product that overflows naively.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::erf::{erfcx, norm_cdf};

/// Smallest admissible |drift|. The driftless case is excluded: the scale
/// function degenerates and every downstream law changes form. Callers with a
/// genuinely tiny drift should nudge it to the signed minimum.
pub const MU_MIN: f64 = 1e-8;

const LN_2PI: f64 = 1.837_877_066_409_345_6; // ln(2 pi)

/// Parameter set of the killed linear diffusion: drift `mu`, killing level
/// `c`, start/observation level `y > c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffusionSpec {
    mu: f64,
    c: f64,
    y: f64,
}

impl DiffusionSpec {
    pub fn new(mu: f64, c: f64, y: f64) -> Result<Self> {
        if !(mu.is_finite() && c.is_finite() && y.is_finite()) {
            return Err(Error::invalid("diffusion parameters must be finite"));
        }
        if mu.abs() < MU_MIN {
            return Err(Error::invalid(format!(
                "|mu| = {} below minimum {MU_MIN}; the driftless case is not supported",
                mu.abs()
            )));
        }
        if c >= y {
            return Err(Error::invalid(format!(
                "killing level c = {c} must lie strictly below the start level y = {y}"
            )));
        }
        Ok(DiffusionSpec { mu, c, y })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Scale function `s(x) = (1 - exp(-2 mu x)) / (2 mu)`, normalized so
    /// `s(0) = 0`, `s'(0) = 1`.
    pub fn scale(&self, x: f64) -> f64 {
        -f64::exp_m1(-2.0 * self.mu * x) / (2.0 * self.mu)
    }

    /// `s(+inf) = 1/(2 mu)`, finite exactly when the drift is positive.
    pub fn scale_at_infinity(&self) -> Result<f64> {
        if self.mu > 0.0 {
            Ok(1.0 / (2.0 * self.mu))
        } else {
            Err(Error::invalid(
                "scale function is unbounded above for mu < 0",
            ))
        }
    }

    /// `ln(s(b) - s(a))` for `a < b`, exact in the exponent: the common factor
    /// `exp(-2 mu a)` (or `exp(-2 mu b)` for negative drift) is pulled out so
    /// only `expm1` of a non-positive argument remains.
    pub(crate) fn ln_scale_diff(&self, a: f64, b: f64) -> f64 {
        debug_assert!(a <= b);
        let two_mu = 2.0 * self.mu;
        let lead = if self.mu > 0.0 { -two_mu * a } else { -two_mu * b };
        let delta = two_mu.abs() * (b - a);
        lead + (-f64::exp_m1(-delta)).ln() - two_mu.abs().ln()
    }

    /// `s(b) - s(a)`, any argument order, finite wherever the true value is
    /// representable (up to `|mu x| ~ 700`) even though `s(a)` and `s(b)`
    /// individually may overflow.
    pub fn scale_diff(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        sign * self.ln_scale_diff(lo, hi).exp()
    }

    /// Density of the speed measure, `m'(v) = 2 exp(2 mu v)`.
    pub fn speed_density(&self, v: f64) -> f64 {
        2.0 * (2.0 * self.mu * v).exp()
    }

    fn check_interior(&self, x: f64, what: &str) -> Result<()> {
        if !x.is_finite() || x < self.c {
            return Err(Error::invalid(format!(
                "{what} = {x} must lie in [c, inf) with c = {}",
                self.c
            )));
        }
        Ok(())
    }

    /// Killed transition density w.r.t. Lebesgue measure,
    /// `P_u(X_t in dv, t < T_c) / dv`.
    pub fn transition_density_lebesgue(&self, t: f64, u: f64, v: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("time t = {t} must be positive")));
        }
        self.check_interior(u, "u")?;
        self.check_interior(v, "v")?;
        let e1 = -(v - u - self.mu * t).powi(2) / (2.0 * t);
        // E1 - E2 = 2 (u - c)(v - c)/t >= 0, so the image-term correction is
        // exactly -expm1 of a non-positive number
        let w = 2.0 * (u - self.c) * (v - self.c) / t;
        Ok((-f64::exp_m1(-w)) * e1.exp() / (2.0 * std::f64::consts::PI * t).sqrt())
    }

    /// Killed transition density w.r.t. the speed measure; symmetric in
    /// `(u, v)`.
    pub fn transition_density(&self, t: f64, u: f64, v: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("time t = {t} must be positive")));
        }
        self.check_interior(u, "u")?;
        self.check_interior(v, "v")?;
        Ok(self.ln_transition_kernel(t, u, v).exp())
    }

    /// `ln` of the speed-measure transition density, minus-infinity when the
    /// density vanishes. Used where the density enters ratios.
    pub(crate) fn ln_transition_kernel(&self, t: f64, u: f64, v: f64) -> f64 {
        let e1 = -self.mu * (u + v) - 0.5 * self.mu * self.mu * t - (u - v).powi(2) / (2.0 * t);
        let w = 2.0 * (u - self.c) * (v - self.c) / t;
        e1 + (-f64::exp_m1(-w)).ln() - std::f64::consts::LN_2 - 0.5 * (LN_2PI + t.ln())
    }

    /// `P_y(T_c <= t)`: probability the diffusion has been killed by time `t`.
    pub fn first_passage_cdf(&self, t: f64) -> Result<f64> {
        if t < 0.0 || !t.is_finite() {
            return Err(Error::invalid(format!("time t = {t} must be >= 0")));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let d = self.y - self.c;
        let st = t.sqrt();
        let term1 = norm_cdf((-d - self.mu * t) / st);
        let term2 = if self.mu > 0.0 {
            (-2.0 * self.mu * d).exp() * norm_cdf((-d + self.mu * t) / st)
        } else {
            // exp(-2 mu d) overflows for strongly negative drift; write
            //   exp(-2 mu d) Phi((-d + mu t)/sqrt(t))
            //     = (1/2) erfcx((d - mu t)/sqrt(2 t)) exp(-(d + mu t)^2/(2 t))
            0.5 * erfcx((d - self.mu * t) / (2.0 * t).sqrt())
                * (-(d + self.mu * t).powi(2) / (2.0 * t)).exp()
        };
        Ok((term1 + term2).clamp(0.0, 1.0))
    }

    /// Density of the killing time `T_c` at `u > 0`.
    pub fn first_passage_density(&self, u: f64) -> Result<f64> {
        if u < 0.0 || !u.is_finite() {
            return Err(Error::invalid(format!("time u = {u} must be >= 0")));
        }
        if u == 0.0 {
            return Ok(0.0);
        }
        let d = self.y - self.c;
        Ok(d / ((2.0 * std::f64::consts::PI).sqrt() * u.powf(1.5))
            * (-(d + self.mu * u).powi(2) / (2.0 * u)).exp())
    }

    /// `P_y(T_c = inf)`: mass that escapes to `+inf` instead of being killed.
    /// Zero for negative drift, `1 - exp(-2 mu (y - c))` for positive drift.
    pub fn escape_probability(&self) -> f64 {
        if self.mu > 0.0 {
            -f64::exp_m1(-2.0 * self.mu * (self.y - self.c))
        } else {
            0.0
        }
    }

    /// Upper truncation point for spatial integrals over `(c, ∞)` at horizon
    /// `t`: twelve standard deviations past the drifted start point.
    pub fn spatial_cutoff(&self, t: f64) -> f64 {
        self.y + 12.0 * t.sqrt() + self.mu.abs() * t
    }
}
