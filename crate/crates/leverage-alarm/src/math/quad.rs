//! Adaptive Simpson quadrature with a global subdivision budget.

use crate::error::{Error, Result};

/// Default absolute tolerance used by the distribution-level integrals.
pub const DEFAULT_ABS_TOL: f64 = 1e-9;
/// Hard cap on interval splits before giving up.
pub const MAX_SUBDIVISIONS: usize = 1_000_000;

fn eval(f: &dyn Fn(f64) -> f64, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { what: "integrand" })
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    budget: &mut usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let h = b - a;
    let left = h / 12.0 * (fa + 4.0 * flm + fm);
    let right = h / 12.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // the interval also terminates once it is too narrow to split meaningfully
    if delta.abs() <= 15.0 * tol || m <= a || m >= b {
        return Ok(left + right + delta / 15.0);
    }
    if *budget == 0 {
        return Err(Error::QuadratureLimit {
            subdivisions: MAX_SUBDIVISIONS,
        });
    }
    *budget -= 1;
    let half_tol = 0.5 * tol;
    let l = simpson_rec(f, a, m, fa, flm, fm, left, half_tol, budget)?;
    let r = simpson_rec(f, m, b, fm, frm, fb, right, half_tol, budget)?;
    Ok(l + r)
}

/// Integrate `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// Errors with `QuadratureLimit` if more than [`MAX_SUBDIVISIONS`] splits are
/// needed and `NonFinite` if the integrand returns NaN/inf anywhere it is
/// sampled.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("integration endpoints must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    if abs_tol <= 0.0 {
        return Err(Error::invalid("quadrature tolerance must be positive"));
    }
    let fa = eval(f, a)?;
    let fb = eval(f, b)?;
    let m = 0.5 * (a + b);
    let fm = eval(f, m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut budget = MAX_SUBDIVISIONS;
    simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, &mut budget)
}

/// Integrate over a sequence of contiguous panels, summing panel results.
///
/// Intended for semi-infinite ranges where a single adaptive pass over a huge
/// interval would accept a spuriously small first estimate: the caller
/// supplies breakpoints that straddle the mass.
pub fn panel_simpson(f: &dyn Fn(f64) -> f64, breaks: &[f64], abs_tol: f64) -> Result<f64> {
    if breaks.len() < 2 {
        return Err(Error::invalid("need at least two breakpoints"));
    }
    let tol_per_panel = abs_tol / (breaks.len() - 1) as f64;
    let mut total = 0.0;
    for w in breaks.windows(2) {
        if w[1] < w[0] {
            return Err(Error::invalid("breakpoints must be nondecreasing"));
        }
        total += adaptive_simpson(f, w[0], w[1], tol_per_panel)?;
    }
    Ok(total)
}
