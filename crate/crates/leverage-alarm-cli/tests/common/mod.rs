//! Fixtures shared by the acceptance gate: the thirteen published firm
//! calibrations with their alarm-law columns, and an exact-bridge Monte
//! Carlo oracle for the killed linear diffusion.
//!
//! The oracle draws the Gaussian skeleton of `X_t = y + mu*t + B_t` exactly
//! and handles everything between grid points with Brownian-bridge hitting
//! probabilities (a bridge between offsets `a, b > 0` touches zero with
//! probability `e^{-2ab/dt}`). Killing and level-crossing detection therefore
//! carry no first-order step-size bias, which makes a three-standard-error
//! band a fair acceptance test.

use chrono::NaiveDate;
use leverage_alarm::calibration::{bs_equity, derive_model};
use leverage_alarm::{DiffusionSpec, FirmModel, MarketData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// One firm calibration row: month label, estimated drift and volatility,
/// the published derived drift `mu = (nu - r)/sigma`, assets, debt, the
/// published ratio `R0 = A0/D0`, and the risk-free rate.
pub struct FirmRow {
    pub month: &'static str,
    pub nu: f64,
    pub sigma: f64,
    pub mu: f64,
    pub a0: f64,
    pub d0: f64,
    pub r0: f64,
    pub r: f64,
}

pub const FIRM_ROWS: [FirmRow; 13] = [
    FirmRow { month: "Jun-12", nu: 0.5249, sigma: 0.3940, mu: 1.3268, a0: 214_149_555.0, d0: 125_950_000.0, r0: 1.7003, r: 0.0021 },
    FirmRow { month: "Sep-12", nu: 1.0347, sigma: 0.3127, mu: 3.3030, a0: 290_116_712.0, d0: 126_700_000.0, r0: 2.2898, r: 0.0017 },
    FirmRow { month: "Dec-12", nu: 0.1144, sigma: 0.3720, mu: 0.3033, a0: 223_568_448.0, d0: 117_050_000.0, r0: 1.9100, r: 0.0016 },
    FirmRow { month: "Mar-13", nu: 0.6710, sigma: 0.5376, mu: 1.2456, a0: 362_153_886.0, d0: 129_900_000.0, r0: 2.7879, r: 0.0014 },
    FirmRow { month: "Jun-13", nu: 1.3344, sigma: 0.5069, mu: 2.6296, a0: 349_193_110.0, d0: 144_100_000.0, r0: 2.4233, r: 0.0015 },
    FirmRow { month: "Sep-13", nu: -0.6840, sigma: 0.3325, mu: -2.0604, a0: 284_917_506.0, d0: 141_900_000.0, r0: 2.0079, r: 0.0010 },
    FirmRow { month: "Dec-13", nu: -0.5080, sigma: 0.2974, mu: -1.7128, a0: 292_977_497.0, d0: 157_550_000.0, r0: 1.8596, r: 0.0013 },
    FirmRow { month: "Mar-14", nu: -0.8271, sigma: 0.7350, mu: -1.1270, a0: 203_302_448.0, d0: 139_750_000.0, r0: 1.4548, r: 0.0013 },
    FirmRow { month: "Jun-14", nu: 0.1555, sigma: 1.0470, mu: 0.1475, a0: 265_400_126.0, d0: 140_600_000.0, r0: 1.8876, r: 0.0011 },
    FirmRow { month: "Sep-14", nu: 0.7723, sigma: 0.6772, mu: 1.1384, a0: 272_059_468.0, d0: 140_350_000.0, r0: 1.9384, r: 0.0013 },
    FirmRow { month: "Dec-14", nu: 0.3089, sigma: 0.6440, mu: 0.4757, a0: 321_884_369.0, d0: 149_700_000.0, r0: 2.1502, r: 0.0025 },
    FirmRow { month: "Mar-15", nu: -0.0881, sigma: 0.5476, mu: -0.1657, a0: 269_423_743.0, d0: 154_700_000.0, r0: 1.7416, r: 0.0026 },
    FirmRow { month: "Jun-15", nu: -0.8783, sigma: 0.3197, mu: -2.7562, a0: 243_535_792.0, d0: 157_850_000.0, r0: 1.5428, r: 0.0028 },
];

/// Published one-year alarm-law columns for one firm month. `low` and `high`
/// are the triples (alpha, one-year continuous mass, atom) at thresholds
/// R* = 1.25 and R* = 1.67; `fp_one_year` is P_y(T_c < 1) and `terminal_dp`
/// the terminal default probability Phi(c - mu).
pub struct AlarmRow {
    pub month: &'static str,
    pub c: f64,
    pub low: (f64, f64, f64),
    pub high: (f64, f64, f64),
    pub fp_one_year: f64,
    pub terminal_dp: f64,
}

pub const ALARM_ROWS: [AlarmRow; 13] = [
    AlarmRow { month: "Jun-12", c: -1.3471, low: (-0.7808, 0.0190, 0.8740), high: (-0.0456, 0.0232, 0.1140), fp_one_year: 0.0175, terminal_dp: 0.0038 },
    AlarmRow { month: "Sep-12", c: -2.6490, low: (-1.9355, 0.0000, 1.0000), high: (-1.0092, 0.0000, 0.9987), fp_one_year: 0.0000, terminal_dp: 0.0000 },
    AlarmRow { month: "Dec-12", c: -1.7397, low: (-1.1398, 0.0571, 0.4992), high: (-0.3610, 0.0992, 0.1967), fp_one_year: 0.0468, terminal_dp: 0.0208 },
    AlarmRow { month: "Mar-13", c: -1.9072, low: (-1.4922, 0.0033, 0.9757), high: (-0.9533, 0.0044, 0.9070), fp_one_year: 0.0030, terminal_dp: 0.0008 },
    AlarmRow { month: "Jun-13", c: -1.7462, low: (-1.3059, 0.0001, 0.9990), high: (-0.7345, 0.0001, 0.9790), fp_one_year: 0.0001, terminal_dp: 0.0000 },
    AlarmRow { month: "Sep-13", c: -2.0966, low: (-1.4255, 0.6817, 0.0), high: (-0.5542, 0.8916, 0.0), fp_one_year: 0.5767, terminal_dp: 0.4868 },
    AlarmRow { month: "Dec-13", c: -2.0862, low: (-1.3358, 0.5725, 0.0), high: (-0.3616, 0.8483, 0.0), fp_one_year: 0.4467, terminal_dp: 0.3558 },
    AlarmRow { month: "Mar-14", c: -0.5100, low: (-0.2064, 0.8968, 0.0), high: (0.1877, 0.4803, 0.4353), fp_one_year: 0.8918, terminal_dp: 0.7293 },
    AlarmRow { month: "Jun-14", c: -0.6068, low: (-0.3937, 0.4981, 0.1096), high: (-0.1170, 0.5095, 0.0339), fp_one_year: 0.4954, terminal_dp: 0.2248 },
    AlarmRow { month: "Sep-14", c: -0.9773, low: (-0.6478, 0.0796, 0.7712), high: (-0.2201, 0.0850, 0.3941), fp_one_year: 0.0781, terminal_dp: 0.0176 },
    AlarmRow { month: "Dec-14", c: -1.1887, low: (-0.8422, 0.1295, 0.5513), high: (-0.3924, 0.1483, 0.3116), fp_one_year: 0.1248, terminal_dp: 0.0484 },
    AlarmRow { month: "Mar-15", c: -1.0131, low: (-0.6056, 0.3805, 0.0), high: (-0.0766, 0.4408, 0.0), fp_one_year: 0.3652, terminal_dp: 0.1982 },
    AlarmRow { month: "Jun-15", c: -1.3564, low: (-0.6584, 0.9760, 0.0), high: (0.2478, 0.2523, 0.7449), fp_one_year: 0.9538, terminal_dp: 0.9194 },
];

/// Dec-13 threshold sweep rows: (R*, alpha, one-year continuous mass, atom,
/// within-one-year total).
pub const DEC13_SWEEP: [(f64, f64, f64, f64, f64); 14] = [
    (2.5, 0.9952, 0.0219, 0.9670, 0.9888),
    (2.4, 0.8579, 0.0375, 0.9471, 0.9846),
    (2.3, 0.7148, 0.0651, 0.9137, 0.9787),
    (2.2, 0.5653, 0.1147, 0.8559, 0.9706),
    (2.1, 0.4089, 0.2058, 0.7537, 0.9596),
    (2.0, 0.2448, 0.3766, 0.5679, 0.9445),
    (1.9, 0.0723, 0.7045, 0.2195, 0.9241),
    (1.8, -0.1095, 0.8968, 0.0, 0.8968),
    (1.7, -0.3017, 0.8610, 0.0, 0.8610),
    (1.6, -0.5056, 0.8149, 0.0, 0.8149),
    (1.5, -0.7227, 0.7574, 0.0, 0.7574),
    (1.4, -0.9547, 0.6887, 0.0, 0.6887),
    (1.3, -1.2039, 0.6118, 0.0, 0.6118),
    (1.2, -1.4731, 0.5347, 0.0, 0.5347),
];

/// Corridor probabilities at the R* = 1.67 level for one firm month: at
/// t = 1/4 and t = 1/2 the published triples
/// (P_y(Q_t = lambda_alpha, X_t in (c, alpha)), P_y(X_t in (c, alpha)), P_y(T_c < t)).
pub struct CorridorRow {
    pub month: &'static str,
    pub quarter: (f64, f64, f64),
    pub half: (f64, f64, f64),
}

pub const CORRIDOR_ROWS: [CorridorRow; 13] = [
    CorridorRow { month: "Jun-12", quarter: (0.0124, 0.2243, 0.0010), half: (0.0113, 0.1512, 0.0069) },
    CorridorRow { month: "Sep-12", quarter: (0.0000, 0.0001, 0.0000), half: (0.0000, 0.0001, 0.0000) },
    CorridorRow { month: "Dec-12", quarter: (0.0281, 0.1908, 0.0003), half: (0.0485, 0.2262, 0.0080) },
    CorridorRow { month: "Mar-13", quarter: (0.0004, 0.0057, 0.0000), half: (0.0013, 0.0124, 0.0005) },
    CorridorRow { month: "Jun-13", quarter: (0.0000, 0.0027, 0.0000), half: (0.0000, 0.0018, 0.0000) },
    CorridorRow { month: "Sep-13", quarter: (0.3088, 0.4676, 0.0013), half: (0.5344, 0.6562, 0.0934) },
    CorridorRow { month: "Dec-13", quarter: (0.3561, 0.5522, 0.0008), half: (0.5519, 0.6969, 0.0611) },
    CorridorRow { month: "Mar-14", quarter: (0.1853, 0.3278, 0.5029), half: (0.0774, 0.1416, 0.7338) },
    CorridorRow { month: "Jun-14", quarter: (0.0628, 0.1881, 0.2053), half: (0.0326, 0.0991, 0.3564) },
    CorridorRow { month: "Sep-14", quarter: (0.0238, 0.1418, 0.0148), half: (0.0166, 0.0927, 0.0448) },
    CorridorRow { month: "Dec-14", quarter: (0.0326, 0.1436, 0.0097), half: (0.0357, 0.1379, 0.0507) },
    CorridorRow { month: "Mar-15", quarter: (0.1550, 0.4215, 0.0504), half: (0.1283, 0.3274, 0.1789) },
    CorridorRow { month: "Jun-15", quarter: (0.7925, 0.8406, 0.1289), half: (0.3659, 0.3798, 0.6095) },
];

pub fn model_for(row: &FirmRow) -> FirmModel {
    derive_model(row.nu, row.sigma, row.r, row.a0, row.d0).unwrap()
}

pub fn dec13_model() -> FirmModel {
    assert_eq!(FIRM_ROWS[6].month, "Dec-13");
    model_for(&FIRM_ROWS[6])
}

pub fn dec12_model() -> FirmModel {
    assert_eq!(FIRM_ROWS[2].month, "Dec-12");
    model_for(&FIRM_ROWS[2])
}

fn stream(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64);
    rng
}

/// Sample mean and its standard error.
pub fn mean_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n * (n - 1.0));
    (mean, var.sqrt())
}

/// Whether a Brownian bridge over `dt` between signed offsets `a` and `b`
/// touches zero: certain on a sign change, probability `e^{-2ab/dt}`
/// otherwise. The uniform draw is skipped when that probability is below
/// ~1.6e-18, keeping the draw budget (and runtime) proportional to the time
/// spent near the level.
fn bridge_touches(a: f64, b: f64, dt: f64, rng: &mut ChaCha8Rng) -> bool {
    let prod = a * b;
    if prod <= 0.0 {
        return true;
    }
    let exponent = 2.0 * prod / dt;
    exponent < 41.0 && rng.gen::<f64>() < (-exponent).exp()
}

/// Unbiased estimate (mean, s.e.) of `P_y(lambda_alpha <= t)`: the chance
/// the alarm level has been visited for the last time by `t`. The path is
/// killed by bridge draws; survivors are weighted by the exact probability
/// of a future visit given their terminal point — a scale-function ratio
/// below the level, certainty (mu < 0) or `e^{-2 mu (x - alpha)}` (mu > 0)
/// above it — so the estimator needs no crossing detection at all and is
/// unbiased at any step count.
pub fn oracle_alarm_within(
    spec: &DiffusionSpec,
    alpha: f64,
    t: f64,
    n_paths: usize,
    steps: usize,
    seed: u64,
) -> (f64, f64) {
    let (mu, c, y) = (spec.mu(), spec.c(), spec.y());
    let dt = t / steps as f64;
    let sq = dt.sqrt();
    let mut samples = Vec::with_capacity(n_paths);
    for p in 0..n_paths {
        let mut rng = stream(seed, p);
        let mut x = y;
        let mut alive = true;
        for _ in 0..steps {
            let z: f64 = StandardNormal.sample(&mut rng);
            let x1 = x + mu * dt + sq * z;
            if x1 <= c || bridge_touches(x - c, x1 - c, dt, &mut rng) {
                alive = false;
                break;
            }
            x = x1;
        }
        let revisit = if !alive {
            0.0 // the final visit happened at or before death, itself <= t
        } else if x >= alpha {
            if mu < 0.0 {
                1.0
            } else {
                (-2.0 * mu * (x - alpha)).exp()
            }
        } else {
            spec.scale_diff(c, x) / spec.scale_diff(c, alpha)
        };
        samples.push(1.0 - revisit);
    }
    mean_se(&samples)
}

/// Per-path samples of `T_c - lambda_alpha` (time from the final alarm
/// visit to insolvency) for a negative-drift spec with the level below the
/// start point. Level crossings between grid points are detected by bridge
/// draws; a path dying from above the level necessarily crossed it inside
/// its final step. The residual error in each sample is O(dt) from step
/// attribution only. Panics if a path outlives `max_years` — raise the cap
/// rather than censor silently.
pub fn oracle_time_to_default(
    spec: &DiffusionSpec,
    alpha: f64,
    n_paths: usize,
    dt: f64,
    max_years: f64,
    seed: u64,
) -> Vec<f64> {
    let (mu, c, y) = (spec.mu(), spec.c(), spec.y());
    assert!(mu < 0.0, "the time-to-default oracle assumes certain insolvency");
    assert!(alpha > c && alpha < y);
    let steps = (max_years / dt).round() as usize;
    let sq = dt.sqrt();
    let mut out = Vec::with_capacity(n_paths);
    'path: for p in 0..n_paths {
        let mut rng = stream(seed, p);
        let mut x = y;
        let mut last = f64::NAN;
        for k in 0..steps {
            let z: f64 = StandardNormal.sample(&mut rng);
            let x1 = x + mu * dt + sq * z;
            let now = (k + 1) as f64 * dt;
            if x1 <= c || bridge_touches(x - c, x1 - c, dt, &mut rng) {
                if x > alpha || x1 > alpha {
                    last = now; // the dive to c crossed the level in-step
                }
                assert!(!last.is_nan(), "path died without an alarm visit");
                out.push(now - last);
                continue 'path;
            }
            if bridge_touches(x - alpha, x1 - alpha, dt, &mut rng) {
                last = now;
            }
            x = x1;
        }
        panic!("path {p} survived {max_years} years; raise the cap");
    }
    out
}

/// Estimate (mean, s.e.) of `E_y[e^{-q A}]` where `A` is the total time
/// spent at or below `alpha` before insolvency. Exact skeleton, bridge
/// killing, trapezoid weights for the occupation integral; the trapezoid
/// residual at dt = 1e-4 sits well below the Monte Carlo noise at 10^5
/// paths. Negative drift only; panics if a path outlives `max_years`.
pub fn oracle_occupation_laplace(
    spec: &DiffusionSpec,
    alpha: f64,
    q: f64,
    n_paths: usize,
    dt: f64,
    max_years: f64,
    seed: u64,
) -> (f64, f64) {
    let (mu, c, y) = (spec.mu(), spec.c(), spec.y());
    assert!(mu < 0.0, "the occupation oracle assumes certain insolvency");
    let steps = (max_years / dt).round() as usize;
    let sq = dt.sqrt();
    let mut samples = Vec::with_capacity(n_paths);
    'path: for p in 0..n_paths {
        let mut rng = stream(seed, p);
        let mut x = y;
        let mut occ = 0.0;
        for _ in 0..steps {
            let z: f64 = StandardNormal.sample(&mut rng);
            let x1 = x + mu * dt + sq * z;
            let below = (x <= alpha) as i32 + (x1 <= alpha) as i32;
            occ += 0.5 * dt * below as f64;
            if x1 <= c || bridge_touches(x - c, x1 - c, dt, &mut rng) {
                samples.push((-q * occ).exp());
                continue 'path;
            }
            x = x1;
        }
        panic!("path {p} survived {max_years} years; raise the cap");
    }
    mean_se(&samples)
}

/// Daily synthetic market with exact geometric Brownian assets and constant
/// debt; equity is the one-year Black-Scholes call value on assets. Debt is
/// sized at half the *mean terminal* asset level, so a decaying series
/// starts at a high leverage ratio and drifts toward ratio 2, keeping the
/// equity inversion well-conditioned along the whole path.
pub fn constant_debt_market(seed: u64, n_days: usize, nu: f64, sigma: f64) -> MarketData {
    let start = NaiveDate::from_ymd_opt(2005, 1, 3).unwrap();
    let dt = 1.0 / 252.0;
    let a0 = 3.0e8;
    let debt = 0.5 * a0 * (nu * dt * n_days as f64).exp();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = a0;
    let mut equity = Vec::with_capacity(n_days);
    for i in 0..n_days {
        let date = start + chrono::Days::new(i as u64);
        equity.push((date, bs_equity(a, debt, sigma, 1.0).unwrap()));
        let z: f64 = StandardNormal.sample(&mut rng);
        a *= (nu * dt + sigma * dt.sqrt() * z).exp();
    }
    let last_date = equity.last().unwrap().0;
    MarketData::new(equity, vec![(start, debt), (last_date, debt)], vec![], 0.001).unwrap()
}
