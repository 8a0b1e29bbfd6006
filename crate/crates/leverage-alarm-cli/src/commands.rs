//! Implementations behind the subcommands.

use std::collections::HashMap;

use chrono::NaiveDate;
use leverage_alarm::calibration::{
    beta_regress, estimate_params, interpolate_debt, invert_asset, wacc, DEFAULT_TAX_RATE,
};
use leverage_alarm::curve::geometric_grid;
use leverage_alarm::occupation::{gamma_sweep, optimize_alpha};
use leverage_alarm::reversal::ReversedSpec;
use leverage_alarm::simulation::{
    default_probability_analytic, optimize_rstar_by_simulation, optimize_rstar_on_grid,
};
use leverage_alarm::{
    AlarmQuery, FirmModel, MarketData, OptimizerConfig, RStarPoint, SimConfig, StrategyMode,
    StrategySpec, WaccInputs,
};
use serde::Serialize;

use crate::io::{self, CliError, ValuePolicy};
use crate::report::{checked_prob, AnalyzeRow, Metadata, ModelFile, NamedCurve, ReportBundle, Table};
use crate::{
    AnalyzeArgs, CalibrateArgs, CurveKindArg, DensityArgs, OptimizeArgs, StrategyArg, WaccArgs,
};

pub fn calibrate(args: &CalibrateArgs) -> Result<(), CliError> {
    let equity = io::read_dated_csv(&args.equity, "equity_value", ValuePolicy::Positive)?;
    let debt = io::read_dated_csv(&args.debt, "debt_value", ValuePolicy::Positive)?;
    let index = io::read_dated_csv(&args.index, "return", ValuePolicy::Finite)?;

    let data = MarketData::new(equity.clone(), debt.clone(), index.clone(), args.risk_free)?;
    let est = estimate_params(&data, args.window)?;

    // Reference point = last day of the window: reprice assets there.
    let (ref_date, ref_equity) = *equity.last().expect("validated nonempty");
    let d0 = interpolate_debt(&debt, &[ref_date])?[0];
    let a0 = invert_asset(ref_equity, d0, est.sigma)?;
    let model = derive(est.nu, est.sigma, args.risk_free, a0, d0)?;

    // Market beta over the same window: equity simple returns against the
    // index return on matching dates.
    let window_slice = &equity[equity.len() - args.window..];
    let index_by_date: HashMap<NaiveDate, f64> = index.iter().copied().collect();
    let mut stock_rets = Vec::new();
    let mut index_rets = Vec::new();
    for w in window_slice.windows(2) {
        if let Some(&ir) = index_by_date.get(&w[1].0) {
            stock_rets.push(w[1].1 / w[0].1 - 1.0);
            index_rets.push(ir);
        }
    }
    if stock_rets.len() < 3 {
        return Err(CliError::input(format!(
            "{}: fewer than 3 dates overlap the calibration window",
            args.index.display()
        )));
    }
    let beta = beta_regress(&stock_rets, &index_rets)?;

    let firm = args.firm.clone().or_else(|| {
        args.equity
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
    });
    let file = ModelFile {
        firm,
        reference_date: Some(ref_date.format("%Y-%m-%d").to_string()),
        nu: est.nu,
        sigma: est.sigma,
        r: args.risk_free,
        a0,
        d0,
        mu: Some(model.spec().mu()),
        c: Some(model.spec().c()),
        r0: Some(model.r0()),
        se_nu: Some(est.se_nu),
        se_sigma: Some(est.se_sigma),
        beta: Some(beta),
        iterations: Some(est.iterations),
        window: Some(args.window),
    };
    io::write_json(&file, args.output.as_deref())
}

fn derive(nu: f64, sigma: f64, r: f64, a0: f64, d0: f64) -> Result<FirmModel, CliError> {
    Ok(leverage_alarm::calibration::derive_model(
        nu, sigma, r, a0, d0,
    )?)
}

pub fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let (file, model) = io::load_model(&args.model)?;
    for &rs in &args.rstar {
        if !(rs > 1.0) || !rs.is_finite() {
            return Err(CliError::input(format!(
                "threshold R* = {rs} must exceed 1"
            )));
        }
    }
    for &t in &args.t {
        if !(t > 0.0) || !t.is_finite() {
            return Err(CliError::input(format!("horizon t = {t} must be positive")));
        }
    }

    let spec = *model.spec();
    let mut rows = Vec::new();
    let mut curves = Vec::new();
    for &rs in &args.rstar {
        let alpha = model.alpha_of_rstar(rs)?;
        let query = AlarmQuery::new(spec, alpha)?;
        for &t in &args.t {
            rows.push(AnalyzeRow {
                rstar: rs,
                t,
                alpha,
                lp_within: checked_prob("lp_within", query.lp_within(t)?)?,
                lp_atom: checked_prob("lp_atom", query.lp_atom())?,
                first_passage_cdf: checked_prob("first_passage_cdf", spec.first_passage_cdf(t)?)?,
                default_probability_analytic: checked_prob(
                    "default_probability_analytic",
                    default_probability_analytic(&model, t)?,
                )?,
                q_joint_prob: checked_prob("q_joint_prob", query.q_joint_prob(t)?)?,
                occupancy_prob: checked_prob("occupancy_prob", query.occupancy_prob(t)?)?,
            });
        }
        if args.curve_points > 0 {
            let grid = geometric_grid(1e-3, query.tail_horizon(), args.curve_points)?;
            let mut points = Vec::with_capacity(grid.len());
            for &t in &grid {
                points.push([t, query.lp_density(t)?]);
            }
            curves.push(NamedCurve {
                name: format!("last_passage_density_rstar_{rs}"),
                kind: "density".into(),
                points,
            });
        }
    }

    if let Some(csv_path) = &args.csv {
        let csv_rows: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.rstar,
                    r.t,
                    r.alpha,
                    r.lp_within,
                    r.lp_atom,
                    r.first_passage_cdf,
                    r.default_probability_analytic,
                    r.q_joint_prob,
                    r.occupancy_prob,
                ]
            })
            .collect();
        io::write_float_csv(
            &[
                "rstar",
                "t",
                "alpha",
                "lp_within",
                "lp_atom",
                "first_passage_cdf",
                "default_probability_analytic",
                "q_joint_prob",
                "occupancy_prob",
            ],
            &csv_rows,
            Some(csv_path),
        )?;
    }

    let bundle = ReportBundle {
        metadata: Metadata::new(&file, &model),
        tables: vec![Table {
            name: "alarm_probabilities".into(),
            rows,
        }],
        curves,
    };
    io::write_json(&bundle, args.output.as_deref())
}

pub fn density(args: &DensityArgs) -> Result<(), CliError> {
    let (_, model) = io::load_model(&args.model)?;
    let spec = *model.spec();
    let alpha = match (args.alpha, args.rstar) {
        (Some(a), None) => a,
        (None, Some(rs)) => model.alpha_of_rstar(rs)?,
        _ => unreachable!("clap enforces exactly one of --alpha/--rstar"),
    };
    if !(alpha > spec.c()) {
        return Err(CliError::input(format!(
            "alarm level alpha = {alpha} must exceed the killing level c = {}",
            spec.c()
        )));
    }
    if !(args.t_min > 0.0) {
        return Err(CliError::input(format!(
            "--t-min {} must be positive",
            args.t_min
        )));
    }

    let (grid, values) = match args.kind {
        CurveKindArg::LastPassage => {
            let query = AlarmQuery::new(spec, alpha)?;
            let t_max = args.t_max.unwrap_or_else(|| query.tail_horizon());
            let grid = geometric_grid(args.t_min, t_max, args.points)?;
            let mut values = Vec::with_capacity(grid.len());
            for &t in &grid {
                values.push(query.lp_density(t)?);
            }
            (grid, values)
        }
        CurveKindArg::TimeToDefault => {
            let rev = ReversedSpec::new(spec);
            let t_max = match args.t_max {
                Some(t) => t,
                None => 8.0 * rev.time_to_default_series_mean(alpha)?,
            };
            let grid = geometric_grid(args.t_min, t_max, args.points)?;
            let ttd = rev.time_to_default_density(alpha, &grid)?;
            let values = ttd.curve.values().to_vec();
            (grid, values)
        }
    };

    let rows: Vec<Vec<f64>> = grid
        .iter()
        .zip(&values)
        .map(|(&t, &v)| vec![t, v])
        .collect();
    io::write_float_csv(&["t", "value"], &rows, args.output.as_deref())
}

/// Analytic optimum artifact.
#[derive(Serialize)]
struct OptimizeOutput {
    metadata: Metadata,
    gamma: f64,
    q: f64,
    t: f64,
    alpha_star: f64,
    rstar_star: f64,
    value: f64,
    alarm_term: f64,
    occupation_term: f64,
}

/// Echo of the simulated strategy.
#[derive(Serialize)]
struct StrategyEcho {
    mode: StrategyMode,
    d_nu: f64,
    d_sigma: f64,
    drift_gap_floor: bool,
}

/// Simulation-optimizer artifact.
#[derive(Serialize)]
struct SimOptimizeOutput {
    metadata: Metadata,
    gamma: f64,
    q: f64,
    t: f64,
    strategy: StrategyEcho,
    n_paths: usize,
    dt: f64,
    seed: u64,
    rstar_opt: f64,
    alpha_opt: f64,
    objective: f64,
    insolvency_prob: f64,
    time_above_frac: f64,
    curve: Vec<RStarPoint>,
}

pub fn optimize(args: &OptimizeArgs) -> Result<(), CliError> {
    let (file, model) = io::load_model(&args.model)?;
    let metadata = Metadata::new(&file, &model);
    let q = match (args.q, &args.wacc_inputs) {
        (Some(q), None) => q,
        (None, Some(path)) => wacc(&io::read_wacc_csv(path)?)?.q,
        _ => unreachable!("clap enforces exactly one of --q/--wacc-inputs"),
    };

    if let Some(sweep_spec) = &args.gamma_sweep {
        let gammas = parse_sweep(sweep_spec)?;
        let cfg = OptimizerConfig::with_resolution(gammas[0], q, args.t, args.grid_points, 1e-6)?;
        let sweep = gamma_sweep(model.spec(), &cfg, &gammas)?;
        let rows: Vec<Vec<f64>> = sweep
            .iter()
            .map(|(g, choice)| {
                vec![
                    *g,
                    choice.alpha,
                    model.rstar_of_alpha(choice.alpha),
                    choice.value,
                ]
            })
            .collect();
        return io::write_float_csv(
            &["gamma", "alpha_star", "rstar_star", "value"],
            &rows,
            args.output.as_deref(),
        );
    }

    let gamma = args.gamma.expect("clap requires --gamma without --gamma-sweep");

    if args.simulate {
        let mode = match args.strategy.expect("clap ties --simulate to --strategy") {
            StrategyArg::NoChange => StrategyMode::NoChange,
            StrategyArg::Creditors => StrategyMode::Creditors,
            StrategyArg::Shareholders => StrategyMode::Shareholders,
        };
        let mut strat = StrategySpec::new(mode, args.d_nu, args.d_sigma)?;
        if args.drift_gap_floor {
            strat = strat.with_drift_gap_floor();
        }
        let cfg = SimConfig::with_dt(args.n_paths, args.dt, args.t, args.seed)?;
        let opt = OptimizerConfig::new(gamma, q, args.t)?;
        let search = match args.rstar {
            Some(rs) => optimize_rstar_on_grid(&model, &strat, &cfg, &opt, &[rs])?,
            None => optimize_rstar_by_simulation(&model, &strat, &cfg, &opt)?,
        };
        let out = SimOptimizeOutput {
            metadata,
            gamma,
            q,
            t: args.t,
            strategy: StrategyEcho {
                mode,
                d_nu: args.d_nu,
                d_sigma: args.d_sigma,
                drift_gap_floor: args.drift_gap_floor,
            },
            n_paths: args.n_paths,
            dt: args.dt,
            seed: args.seed,
            rstar_opt: search.rstar_opt,
            alpha_opt: model.alpha_of_rstar(search.rstar_opt)?,
            objective: search.objective,
            insolvency_prob: search.insolvency_prob,
            time_above_frac: search.time_above_frac,
            curve: search.curve,
        };
        return io::write_json(&out, args.output.as_deref());
    }

    let cfg = OptimizerConfig::with_resolution(gamma, q, args.t, args.grid_points, 1e-6)?;
    let choice = optimize_alpha(model.spec(), &cfg)?;
    let out = OptimizeOutput {
        metadata,
        gamma,
        q,
        t: args.t,
        alpha_star: choice.alpha,
        rstar_star: model.rstar_of_alpha(choice.alpha),
        value: choice.value,
        alarm_term: choice.parts.alarm_term,
        occupation_term: choice.parts.occupation_term,
    };
    io::write_json(&out, args.output.as_deref())
}

/// Parse `START:END:STEP` into an inclusive gamma ladder within [0, 1].
fn parse_sweep(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || {
        CliError::input(format!(
            "--gamma-sweep `{spec}` must be START:END:STEP with 0 <= START <= END <= 1, STEP > 0"
        ))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let (start, end, step) = (nums[0], nums[1], nums[2]);
    if !(0.0..=1.0).contains(&start) || !(start..=1.0).contains(&end) || !(step > 0.0) {
        return Err(bad());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| (start + k as f64 * step).min(1.0)).collect())
}

/// Full WACC artifact: inputs echo plus the component breakdown.
#[derive(Serialize)]
struct WaccReport {
    beta: f64,
    tax_rate: f64,
    cost_equity: f64,
    cost_debt: f64,
    weight_equity: f64,
    weight_debt: f64,
    q: f64,
}

pub fn wacc_cmd(args: &WaccArgs) -> Result<(), CliError> {
    let inputs = match &args.inputs {
        Some(path) => io::read_wacc_csv(path)?,
        None => {
            let need = |name: &str, v: Option<f64>| {
                v.ok_or_else(|| CliError::input(format!("--{name} is required without --inputs")))
            };
            WaccInputs::new(
                need("equity-value", args.equity_value)?,
                need("debt-value", args.debt_value)?,
                need("prior-debt-value", args.prior_debt_value)?,
                need("interest-paid", args.interest_paid)?,
                need("index-return", args.index_return)?,
                need("risk-free", args.risk_free)?,
                need("beta", args.beta)?,
                args.tax_rate.unwrap_or(DEFAULT_TAX_RATE),
            )?
        }
    };
    let b = wacc(&inputs)?;
    println!("beta           {:.6}", inputs.beta);
    println!("cost_equity    {:.6}", b.cost_equity);
    println!("cost_debt      {:.6}", b.cost_debt);
    println!("weight_equity  {:.6}", b.weight_equity);
    println!("weight_debt    {:.6}", b.weight_debt);
    println!("q              {:.6}", b.q);
    if args.output.is_some() {
        let report = WaccReport {
            beta: inputs.beta,
            tax_rate: inputs.tax_rate,
            cost_equity: b.cost_equity,
            cost_debt: b.cost_debt,
            weight_equity: b.weight_equity,
            weight_debt: b.weight_debt,
            q: b.q,
        };
        io::write_json(&report, args.output.as_deref())?;
    }
    Ok(())
}
