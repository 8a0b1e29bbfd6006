//! Market-data calibration: equity-implied assets, drift/volatility
//! estimation, debt interpolation, model derivation, and the capital-cost
//! rate (WACC).
//!
//! The pipeline runs: interpolate quarterly debt to the equity dates →
//! iterate { invert daily equity to asset values under the current volatility
//! via the unit-maturity Black–Scholes map → re-estimate (ν, σ) from implied
//! asset log-returns } to a fixed point → derive the standardized diffusion
//! (μ = (ν−r)/σ, insolvency level c = ln(D₀/A₀)/σ, start level 0).

use chrono::NaiveDate;
use serde::Serialize;

use crate::diffusion::DiffusionSpec;
use crate::error::{Error, Result};
use crate::math::erf::norm_cdf;

/// Trading days per year used for all annualizations.
pub const TRADING_DAYS: f64 = 252.0;

/// Corporate tax rate applied to the debt leg of the WACC.
pub const DEFAULT_TAX_RATE: f64 = 0.35;

/// Dated market inputs for one firm.
#[derive(Debug, Clone)]
pub struct MarketData {
    equity: Vec<(NaiveDate, f64)>,
    debt_points: Vec<(NaiveDate, f64)>,
    index_returns: Vec<(NaiveDate, f64)>,
    risk_free: f64,
}

impl MarketData {
    pub fn new(
        equity: Vec<(NaiveDate, f64)>,
        debt_points: Vec<(NaiveDate, f64)>,
        index_returns: Vec<(NaiveDate, f64)>,
        risk_free: f64,
    ) -> Result<Self> {
        fn check_series(name: &str, s: &[(NaiveDate, f64)], positive: bool) -> Result<()> {
            for w in s.windows(2) {
                if w[1].0 <= w[0].0 {
                    return Err(Error::invalid(format!(
                        "{name} dates must be strictly increasing (at {})",
                        w[1].0
                    )));
                }
            }
            for (d, v) in s {
                if !v.is_finite() || (positive && *v <= 0.0) {
                    return Err(Error::invalid(format!("{name} value {v} at {d} is invalid")));
                }
            }
            Ok(())
        }
        check_series("equity", &equity, true)?;
        check_series("debt", &debt_points, true)?;
        check_series("index returns", &index_returns, false)?;
        if !risk_free.is_finite() {
            return Err(Error::invalid("risk-free rate must be finite"));
        }
        Ok(MarketData {
            equity,
            debt_points,
            index_returns,
            risk_free,
        })
    }

    pub fn equity(&self) -> &[(NaiveDate, f64)] {
        &self.equity
    }

    pub fn debt_points(&self) -> &[(NaiveDate, f64)] {
        &self.debt_points
    }

    pub fn index_returns(&self) -> &[(NaiveDate, f64)] {
        &self.index_returns
    }

    pub fn risk_free(&self) -> f64 {
        self.risk_free
    }
}

/// Calibrated firm: annualized asset drift/volatility, rate, balance-sheet
/// levels, and the induced standardized diffusion.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FirmModel {
    nu: f64,
    sigma: f64,
    r: f64,
    a0: f64,
    d0: f64,
    spec: DiffusionSpec,
    r0: f64,
}

impl FirmModel {
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn d0(&self) -> f64 {
        self.d0
    }

    pub fn spec(&self) -> &DiffusionSpec {
        &self.spec
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// Alarm level in diffusion coordinates for a leverage threshold `R* > 0`:
    /// `α = ln(R*·D₀/A₀)/σ = c + ln(R*)/σ`. `alpha_of_rstar(1)` equals `c`
    /// exactly (a last visit to leverage 1 is insolvency itself).
    pub fn alpha_of_rstar(&self, rstar: f64) -> Result<f64> {
        if !(rstar > 0.0) || !rstar.is_finite() {
            return Err(Error::invalid(format!(
                "leverage threshold R* = {rstar} must be positive"
            )));
        }
        Ok(self.spec.c() + rstar.ln() / self.sigma)
    }

    /// Inverse of [`Self::alpha_of_rstar`].
    pub fn rstar_of_alpha(&self, alpha: f64) -> f64 {
        (self.sigma * (alpha - self.spec.c())).exp()
    }
}

/// Build the standardized model from calibrated parameters.
///
/// Requires `A0 > D0 > 0` (the firm starts solvent), `sigma > 0`, and a
/// drift gap `|ν − r|` large enough that the standardized drift clears the
/// [`crate::diffusion::MU_MIN`] cutoff.
pub fn derive_model(nu: f64, sigma: f64, r: f64, a0: f64, d0: f64) -> Result<FirmModel> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::invalid(format!("sigma = {sigma} must be positive")));
    }
    if !(d0 > 0.0) || !(a0 > d0) || !a0.is_finite() {
        return Err(Error::invalid(format!(
            "need A0 > D0 > 0, got A0 = {a0}, D0 = {d0}"
        )));
    }
    if !nu.is_finite() || !r.is_finite() {
        return Err(Error::invalid("nu and r must be finite"));
    }
    let mu = (nu - r) / sigma;
    let c = (d0 / a0).ln() / sigma;
    let spec = DiffusionSpec::new(mu, c, 0.0)?;
    Ok(FirmModel {
        nu,
        sigma,
        r,
        a0,
        d0,
        spec,
        r0: a0 / d0,
    })
}

/// Unit-maturity Black–Scholes equity value of assets `a` against debt `d`:
/// `a·Φ(d0) − d·Φ(d0 − σ√T)` with `d0 = [ln(a/d) + σ²T/2]/(σ√T)` — no
/// discounting inside `d0` (the rate enters the model through the drift
/// instead).
pub fn bs_equity(a: f64, d: f64, sigma: f64, t: f64) -> Result<f64> {
    if !(a > 0.0) || !(d > 0.0) || !(sigma > 0.0) || !(t > 0.0) {
        return Err(Error::invalid(format!(
            "bs_equity needs positive inputs, got a={a}, d={d}, sigma={sigma}, t={t}"
        )));
    }
    let st = sigma * t.sqrt();
    let d0 = ((a / d).ln() + 0.5 * st * st) / st;
    Ok(a * norm_cdf(d0) - d * norm_cdf(d0 - st))
}

/// Black–Scholes delta `∂E/∂a = Φ(d0)` for the same map.
fn bs_delta(a: f64, d: f64, sigma: f64, t: f64) -> f64 {
    let st = sigma * t.sqrt();
    let d0 = ((a / d).ln() + 0.5 * st * st) / st;
    norm_cdf(d0)
}

/// The unique asset value `a` with `bs_equity(a, d, sigma, 1) = e`.
///
/// `bs_equity` is strictly increasing in `a` with `bs_equity(e) < e` and
/// `bs_equity(e + d) ≥ e` (a call is worth at least its intrinsic value at
/// zero rate), so `[e, e + d]` always brackets the root. Safeguarded Newton
/// converges to `|bs_equity(a) − e| ≤ 1e−10·e`; the tolerance scales with
/// the equity value itself because for out-of-the-money points (`e ≪ d`) a
/// debt-scaled tolerance would accept wildly wrong asset values, and
/// `∂lnE/∂lnA ≥ 1` makes an equity-relative residual a bound on the
/// asset-relative error.
pub fn invert_asset(e: f64, d: f64, sigma: f64) -> Result<f64> {
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::invalid(format!("equity e = {e} must be positive")));
    }
    if !(d > 0.0) || !(sigma > 0.0) {
        return Err(Error::invalid(format!(
            "debt d = {d} and sigma = {sigma} must be positive"
        )));
    }
    let tol = 1e-10 * e;
    let (mut lo, mut hi) = (e, e + d);
    let f_lo = bs_equity(lo, d, sigma, 1.0)? - e;
    if f_lo > 0.0 {
        return Err(Error::BracketFailure { lo, hi });
    }
    let mut a = 0.5 * (lo + hi);
    for _ in 0..200 {
        let diff = bs_equity(a, d, sigma, 1.0)? - e;
        if diff.abs() <= tol {
            return Ok(a);
        }
        if diff > 0.0 {
            hi = a;
        } else {
            lo = a;
        }
        // once the bracket is machine-tight, evaluation noise can keep the
        // residual above tol; the root is pinned regardless
        if hi - lo <= 4.0 * f64::EPSILON * a {
            return Ok(a);
        }
        let delta = bs_delta(a, d, sigma, 1.0);
        let newton = a - diff / delta.max(1e-300);
        a = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NonConvergence {
        what: "asset-value inversion",
        iterations: 200,
    })
}

/// Linear-in-level interpolation of dated debt knots onto query dates, flat
/// beyond the first/last knot.
pub fn interpolate_debt(points: &[(NaiveDate, f64)], dates: &[NaiveDate]) -> Result<Vec<f64>> {
    if points.len() < 2 {
        return Err(Error::invalid(format!(
            "debt interpolation needs at least 2 points, got {}",
            points.len()
        )));
    }
    for w in points.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::invalid("debt dates must be strictly increasing"));
        }
    }
    let mut out = Vec::with_capacity(dates.len());
    for &date in dates {
        let v = if date <= points[0].0 {
            points[0].1
        } else if date >= points[points.len() - 1].0 {
            points[points.len() - 1].1
        } else {
            // find the knot interval containing `date`
            let idx = points.partition_point(|(d, _)| *d <= date);
            let (d0, v0) = points[idx - 1];
            let (d1, v1) = points[idx];
            let span = (d1 - d0).num_days() as f64;
            let frac = (date - d0).num_days() as f64 / span;
            v0 + (v1 - v0) * frac
        };
        out.push(v);
    }
    Ok(out)
}

/// Output of the iterated drift/volatility estimation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamEstimate {
    pub nu: f64,
    pub sigma: f64,
    pub se_nu: f64,
    pub se_sigma: f64,
    pub iterations: usize,
}

/// Estimate annualized asset drift and volatility from the most recent
/// `window` equity observations.
///
/// Iterates equity→asset inversion and Gaussian MLE of the implied asset
/// log-returns (mean·252 for ν̂ — the drift of the log directly — and
/// √(var·252) for σ̂ with the 1/n variance) until σ moves less than 1e−8,
/// at most 500 rounds. Standard errors come from the Gaussian Fisher
/// information: `se_ν = σ/√T_obs`, `se_σ = σ/√(2n)`.
pub fn estimate_params(data: &MarketData, window: usize) -> Result<ParamEstimate> {
    if window < 60 {
        return Err(Error::invalid(format!(
            "window = {window} must be at least 60 observations"
        )));
    }
    if data.equity.len() < window {
        return Err(Error::invalid(format!(
            "need {window} equity observations, have {}",
            data.equity.len()
        )));
    }
    let slice = &data.equity[data.equity.len() - window..];
    let dates: Vec<NaiveDate> = slice.iter().map(|(d, _)| *d).collect();
    let equities: Vec<f64> = slice.iter().map(|(_, e)| *e).collect();
    let debts = interpolate_debt(&data.debt_points, &dates)?;

    let n = window - 1; // number of returns
    let mle = |series: &[f64]| -> (f64, f64) {
        let rets: Vec<f64> = series.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
        let mean = rets.iter().sum::<f64>() / rets.len() as f64;
        let var = rets.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / rets.len() as f64;
        (mean, var)
    };

    // seed the iteration with the equity log-return volatility
    let (_, eq_var) = mle(&equities);
    if eq_var <= 0.0 {
        return Err(Error::invalid(
            "equity series has zero return variance; cannot calibrate",
        ));
    }
    let mut sigma = (eq_var * TRADING_DAYS).sqrt();
    let mut assets = vec![0.0_f64; window];
    for it in 1..=500 {
        for i in 0..window {
            assets[i] = invert_asset(equities[i], debts[i], sigma)?;
        }
        let (mean, var) = mle(&assets);
        if var <= 0.0 {
            return Err(Error::invalid(
                "implied asset series has zero return variance",
            ));
        }
        let sigma_new = (var * TRADING_DAYS).sqrt();
        let nu = mean * TRADING_DAYS;
        if (sigma_new - sigma).abs() < 1e-8 {
            let t_obs = n as f64 / TRADING_DAYS;
            return Ok(ParamEstimate {
                nu,
                sigma: sigma_new,
                se_nu: sigma_new / t_obs.sqrt(),
                se_sigma: sigma_new / (2.0 * n as f64).sqrt(),
                iterations: it,
            });
        }
        sigma = sigma_new;
    }
    Err(Error::NonConvergence {
        what: "asset volatility iteration",
        iterations: 500,
    })
}

/// Inputs for the weighted average cost of capital.
#[derive(Debug, Clone, Copy)]
pub struct WaccInputs {
    pub equity_value: f64,
    pub debt_value: f64,
    pub prior_debt_value: f64,
    pub interest_paid: f64,
    pub index_annual_return: f64,
    pub risk_free: f64,
    pub beta: f64,
    pub tax_rate: f64,
}

impl WaccInputs {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        equity_value: f64,
        debt_value: f64,
        prior_debt_value: f64,
        interest_paid: f64,
        index_annual_return: f64,
        risk_free: f64,
        beta: f64,
        tax_rate: f64,
    ) -> Result<Self> {
        if !(equity_value > 0.0) || !(debt_value > 0.0) {
            return Err(Error::invalid("equity and debt values must be positive"));
        }
        if prior_debt_value < 0.0 || interest_paid < 0.0 {
            return Err(Error::invalid(
                "prior debt and interest paid must be nonnegative",
            ));
        }
        if !(0.0..=1.0).contains(&tax_rate) {
            return Err(Error::invalid(format!(
                "tax rate {tax_rate} must lie in [0, 1]"
            )));
        }
        for (name, v) in [
            ("index return", index_annual_return),
            ("risk-free rate", risk_free),
            ("beta", beta),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite")));
            }
        }
        Ok(WaccInputs {
            equity_value,
            debt_value,
            prior_debt_value,
            interest_paid,
            index_annual_return,
            risk_free,
            beta,
            tax_rate,
        })
    }
}

/// WACC with its components.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WaccBreakdown {
    pub cost_equity: f64,
    pub cost_debt: f64,
    pub weight_equity: f64,
    pub weight_debt: f64,
    pub q: f64,
}

/// `q = w_E·C_E + w_D·C_D·(1 − tax)` with `C_E = R_f + β(R_m − R_f)` and
/// `C_D = interest / mean(debt, prior debt)`; weights by market values,
/// `w_E + w_D = 1`.
pub fn wacc(inputs: &WaccInputs) -> Result<WaccBreakdown> {
    let avg_debt = 0.5 * (inputs.debt_value + inputs.prior_debt_value);
    if !(avg_debt > 0.0) {
        return Err(Error::invalid("average debt must be positive"));
    }
    let cost_equity =
        inputs.risk_free + inputs.beta * (inputs.index_annual_return - inputs.risk_free);
    let cost_debt = inputs.interest_paid / avg_debt;
    let total = inputs.equity_value + inputs.debt_value;
    let weight_equity = inputs.equity_value / total;
    let weight_debt = inputs.debt_value / total;
    let q = weight_equity * cost_equity + weight_debt * cost_debt * (1.0 - inputs.tax_rate);
    Ok(WaccBreakdown {
        cost_equity,
        cost_debt,
        weight_equity,
        weight_debt,
        q,
    })
}

/// OLS slope (with intercept) of stock returns on index returns.
pub fn beta_regress(stock: &[f64], index: &[f64]) -> Result<f64> {
    if stock.len() != index.len() {
        return Err(Error::invalid(format!(
            "return series lengths differ: {} vs {}",
            stock.len(),
            index.len()
        )));
    }
    if stock.len() < 3 {
        return Err(Error::invalid("need at least 3 paired returns"));
    }
    let n = stock.len() as f64;
    let mx = index.iter().sum::<f64>() / n;
    let my = stock.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in index.iter().zip(stock.iter()) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    // threshold absorbs the rounding noise a constant series leaves behind
    if sxx <= 1e-16 * n * (1.0 + mx * mx) {
        return Err(Error::invalid("index returns have zero variance"));
    }
    Ok(sxy / sxx)
}
