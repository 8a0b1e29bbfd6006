//! Brute-force simulation cross-checks of the analytic laws.
//!
//! `oracle_paths` is a deliberately naive Euler scheme — no Brownian-bridge
//! corrections, events only observed on the time grid — so it shares no
//! code or assumptions with the closed forms it checks. The price is an
//! O(√dt) discretization bias (grid killing happens late, level touches
//! between grid points are missed), which each tolerance carries as an
//! explicit allowance on top of three standard errors of the Monte Carlo
//! noise.
//!
//! Only the downward-drift December 2013 parameter set is exercised here:
//! under upward drift a finite-horizon run censors the last visit time of
//! the escaping paths, which a naive estimator cannot unwind. The seeded
//! bridge-corrected oracles in the acceptance suite cover that regime.

use leverage_alarm::calibration::{derive_model, FirmModel};
use leverage_alarm::last_passage::AlarmQuery;
use leverage_alarm::occupation::occupation_laplace;
use leverage_alarm::reversal::ReversedSpec;
use leverage_alarm::simulation::{oracle_paths, PathStats};
use leverage_alarm::SimConfig;

fn dec13() -> FirmModel {
    derive_model(-0.5080, 0.2974, 0.0013, 292_977_497.0, 157_550_000.0).unwrap()
}

/// Ten years of 3,000 Euler paths at dt = 5e-4. The December 2013 drift is
/// steep enough that the ten-year survival probability is ~1e-15, so every
/// path must be killed within the horizon and no law is censored.
fn run_paths(model: &FirmModel, alpha: f64, seed: u64) -> Vec<PathStats> {
    let cfg = SimConfig::with_dt(3_000, 5e-4, 10.0, seed).unwrap();
    let stats = oracle_paths(model.spec(), &cfg, alpha, 0.0).unwrap();
    assert!(
        stats.iter().all(|p| p.killing_time.is_some()),
        "a ten-year path survived; the oracle run is censored and unusable"
    );
    stats
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn last_visit_law_matches_lp_within() {
    let model = dec13();
    let alpha = model.alpha_of_rstar(1.67).unwrap();
    let stats = run_paths(&model, alpha, 31_415);
    let query = AlarmQuery::new(*model.spec(), alpha).unwrap();

    for t in [0.25, 0.5, 1.0, 2.0] {
        let hits: Vec<f64> = stats
            .iter()
            .map(|p| {
                // a path with no observed visit has its final say at time 0
                let lam = p.last_visit.unwrap_or(0.0);
                if lam <= t {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        let (p_hat, se) = mean_se(&hits);
        let want = query.lp_within(t).unwrap();
        let err = (p_hat - want).abs();
        // missed touches pull the observed last visit earlier while late
        // grid killing pushes it later; both are ~sqrt(dt) = 0.022 years,
        // worth about 1.5% of CDF where the density peaks
        assert!(
            err <= 3.0 * se + 0.015,
            "last-visit CDF at t = {t}: simulated {p_hat:.4} (se {se:.4}) vs analytic {want:.4}"
        );
    }
}

#[test]
fn post_alarm_delay_mean_matches_series_mean() {
    let model = dec13();
    let alpha = model.alpha_of_rstar(1.7332).unwrap();
    let stats = run_paths(&model, alpha, 27_182);

    let delays: Vec<f64> = stats
        .iter()
        .map(|p| {
            // downward drift must cross the level on its way to the floor,
            // and a grid sign change is how the oracle records that
            let lam = p.last_visit.expect("killed path never crossed the level");
            p.killing_time.unwrap() - lam
        })
        .collect();
    let (mean, se) = mean_se(&delays);

    let rev = ReversedSpec::new(*model.spec());
    let want = rev.time_to_default_series_mean(alpha).unwrap();
    // late killing and early last visit both lengthen the observed delay;
    // the two ~0.58*sqrt(dt) walk-past corrections add to ~0.026 years
    assert!(
        (mean - want).abs() <= 3.0 * se + 0.04,
        "post-alarm delay mean: simulated {mean:.4} (se {se:.4}) vs series {want:.4}"
    );
}

#[test]
fn occupation_time_transform_matches_closed_form() {
    let model = dec13();
    let alpha = model.alpha_of_rstar(1.7332).unwrap();
    let stats = run_paths(&model, alpha, 16_180);

    let q = 0.300572;
    let transformed: Vec<f64> = stats
        .iter()
        .map(|p| (-q * p.occupation_below).exp())
        .collect();
    let (mean, se) = mean_se(&transformed);

    let want = occupation_laplace(alpha, model.spec(), q).unwrap();
    assert!(
        (mean - want).abs() <= 3.0 * se + 0.01,
        "occupation transform: simulated {mean:.4} (se {se:.4}) vs closed form {want:.4}"
    );
}
