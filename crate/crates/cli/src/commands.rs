//! One function per subcommand, each mapping onto a core operation.

use std::f64::consts::PI;

use clap::ValueEnum;
use ringwalk as core;
use ringwalk::{Config, DarkOrigin, OptimizeOptions};

use crate::config::{ExperimentConfig, GridSpec};
use crate::error::CliError;
use crate::table::{Cell, ResultTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    /// Ring eigenvalues (j, lambda_j)
    Spectrum,
    /// First-detection series at one configuration
    PdetSeries,
    /// Detection probability over the (phi, tau) plane
    PdetSweep,
    /// Survival-operator eigenvalues and initial-state weights
    PfSpectrum,
    /// Survival-operator moduli and time scales over the (phi, tau) plane
    PfSweep,
    /// Dark basis, initial overlap and asymptotic detection probability
    DarkReport,
    /// Phase-matched dark-state count in a phase window versus tau
    DarkCount,
    /// Threshold period, analytic and empirical
    TauStar,
    /// Optimal phase and period under the budget
    Optimize,
    /// Spectral gap and asymptotic time versus tau
    TasCurve,
    /// Detection probability versus ring size and budget
    SizeBudget,
    /// Unmonitored transfer probability |<delta|U(t)|0>|^2
    UnitaryBaseline,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Self::Spectrum => "spectrum",
            Self::PdetSeries => "pdet-series",
            Self::PdetSweep => "pdet-sweep",
            Self::PfSpectrum => "pf-spectrum",
            Self::PfSweep => "pf-sweep",
            Self::DarkReport => "dark-report",
            Self::DarkCount => "dark-count",
            Self::TauStar => "tau-star",
            Self::Optimize => "optimize",
            Self::TasCurve => "tas-curve",
            Self::SizeBudget => "size-budget",
            Self::UnitaryBaseline => "unitary-baseline",
        }
    }
}

pub const DEFAULT_DARK_COUNT_TAUS: GridSpec = GridSpec {
    lo: 2.0,
    hi: 5.0,
    count: 61,
};
pub const DEFAULT_TIME_GRID: GridSpec = GridSpec {
    lo: 0.0,
    hi: 20.0,
    count: 201,
};
pub const DEFAULT_T_LIST: [f64; 6] = [25.0, 50.0, 100.0, 200.0, 400.0, 800.0];

/// Run a subcommand; the caller supplies the thread pool and the header.
pub fn run(cmd: Subcommand, cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    match cmd {
        Subcommand::Spectrum => spectrum(cfg),
        Subcommand::PdetSeries => pdet_series(cfg),
        Subcommand::PdetSweep => pdet_sweep(cfg),
        Subcommand::PfSpectrum => pf_spectrum(cfg),
        Subcommand::PfSweep => pf_sweep(cfg),
        Subcommand::DarkReport => dark_report(cfg),
        Subcommand::DarkCount => dark_count(cfg),
        Subcommand::TauStar => tau_star(cfg),
        Subcommand::Optimize => optimize(cfg),
        Subcommand::TasCurve => tas_curve(cfg),
        Subcommand::SizeBudget => size_budget(cfg),
        Subcommand::UnitaryBaseline => unitary_baseline(cfg),
    }
}

fn push(t: &mut ResultTable, row: Vec<Cell>) -> Result<(), CliError> {
    t.push(row).map_err(|e| CliError::Output(e.to_string()))
}

/// Template for grid commands whose own period and budget are unused.
fn template(cfg: &ExperimentConfig) -> Result<Config, CliError> {
    let n = cfg.require_n()?;
    let mut c = Config::new(n, cfg.delta_or_default()?, 0.0, 1.0, 1.0)?;
    if let Some(t) = cfg.tol_degenerate {
        c.tol_degenerate = t;
    }
    if let Some(t) = cfg.tol_unit {
        c.tol_unit = t;
    }
    Ok(c)
}

fn spectrum(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let s = core::analytic_spectrum(cfg.require_n()?, cfg.phi_or_zero())?;
    let mut t = ResultTable::new(&["j", "lambda_j"]);
    for (j, l) in s.eigenvalues.iter().enumerate() {
        push(&mut t, vec![j.into(), (*l).into()])?;
    }
    Ok(t)
}

fn pdet_series(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let w = cfg.walk_config()?;
    let rec = core::first_detection_series(&w, w.attempts()?)?;
    let mut t = ResultTable::new(&["m", "t", "F_m", "pdet", "survival"]);
    for i in 0..rec.attempts {
        let m = i + 1;
        push(
            &mut t,
            vec![
                m.into(),
                (m as f64 * w.tau).into(),
                rec.f_series[i].into(),
                rec.pdet_series[i].into(),
                rec.survival_series[i].into(),
            ],
        )?;
    }
    Ok(t)
}

fn pdet_sweep(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let base = template(cfg)?;
    let budget = cfg.require_total_time()?;
    let cells = core::pdet_grid(&base, &cfg.phi_values(base.n), &cfg.tau_values(), budget)?;
    let mut t = ResultTable::new(&["phi", "tau", "n_attempts", "pdet"]);
    for c in cells {
        push(&mut t, vec![c.phi.into(), c.tau.into(), c.n_attempts.into(), c.pdet.into()])?;
    }
    Ok(t)
}

fn pf_spectrum(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let w = cfg.walk_config()?;
    let s = core::pf_spectrum(&w)?;
    let mut t = ResultTable::new(&["j", "mu_re", "mu_im", "mu_abs", "overlap"]);
    for (j, (mu, ov)) in s.eigenvalues.iter().zip(&s.overlaps).enumerate() {
        push(&mut t, vec![j.into(), mu.re.into(), mu.im.into(), mu.norm().into(), (*ov).into()])?;
    }
    Ok(t)
}

fn pf_sweep(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let base = template(cfg)?;
    let cells = core::pf_grid(&base, &cfg.phi_values(base.n), &cfg.tau_values())?;
    let mut t = ResultTable::new(&["phi", "tau", "mu_pf_abs", "mu_sub_abs", "gap", "t_as"]);
    for c in cells {
        push(
            &mut t,
            vec![c.phi.into(), c.tau.into(), c.mu_pf_abs.into(), c.mu_sub_abs.into(), c.gap.into(), c.t_as.into()],
        )?;
    }
    Ok(t)
}

fn dark_report(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let w = cfg.walk_config()?;
    let r = core::dark_report(&w)?;
    let mut t = ResultTable::new(&[
        "origin",
        "m",
        "n",
        "k",
        "overlap_sq",
        "pf_eigval_re",
        "pf_eigval_im",
        "initial_overlap",
        "pdet_infinity",
    ]);
    for d in &r.dark_basis {
        let (origin, k) = match d.origin {
            DarkOrigin::DegeneratePair { .. } => ("degenerate", None),
            DarkOrigin::PhaseMatched { k, .. } => ("phase-matched", Some(k)),
        };
        let (m, n) = d.origin.indices();
        push(
            &mut t,
            vec![
                origin.into(),
                m.into(),
                n.into(),
                k.into(),
                d.vector[0].norm_sqr().into(),
                d.pf_eigenvalue.re.into(),
                d.pf_eigenvalue.im.into(),
                Cell::Empty,
                Cell::Empty,
            ],
        )?;
    }
    let mut summary = vec![Cell::from("summary")];
    summary.extend(std::iter::repeat(Cell::Empty).take(6));
    summary.push(r.initial_overlap.into());
    summary.push(r.pdet_infinity.into());
    push(&mut t, summary)?;
    Ok(t)
}

fn dark_count(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let n = cfg.require_n()?;
    let (lo, hi) = match cfg.phi_grid {
        Some(g) => (g.lo, g.hi),
        None => (-PI / n as f64, PI / n as f64),
    };
    let taus = cfg.tau_grid.unwrap_or(DEFAULT_DARK_COUNT_TAUS).values();
    let counts: Vec<usize> = {
        use rayon::prelude::*;
        taus.par_iter()
            .map(|&tau| core::dark_state_count_in_window(n, lo, hi, tau, cfg.k_max))
            .collect::<Result<_, _>>()?
    };
    let mut t = ResultTable::new(&["tau", "count"]);
    for (tau, c) in taus.iter().zip(counts) {
        push(&mut t, vec![(*tau).into(), c.into()])?;
    }
    Ok(t)
}

fn tau_star(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let n = cfg.require_n()?;
    let delta = cfg.delta_or_default()?;
    let phis = match cfg.phi_grid {
        Some(g) => g.values(),
        None => vec![cfg.phi_or_zero()],
    };
    let mut t = ResultTable::new(&["phi", "tau_star_analytic", "tau_star_empirical", "disagreement_flag"]);
    for phi in phis {
        let ts = core::tau_star(n, phi, delta)?;
        push(&mut t, vec![phi.into(), ts.analytic.into(), ts.empirical.into(), ts.disagreement.into()])?;
    }
    Ok(t)
}

fn optimize(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let n = cfg.require_n()?;
    let delta = cfg.delta_or_default()?;
    let budget = cfg.require_total_time()?;
    let mut opts = OptimizeOptions::default_for(n);
    opts.phi_values = cfg.phi_values(n);
    opts.tau_values = cfg.tau_values();
    let o = core::optimize_with(n, delta, budget, &opts)?;
    let mut t = ResultTable::new(&["N", "delta", "phi_opt", "tau_opt", "tau_star", "tau_pf", "pdet_opt"]);
    let row = |phi: f64, delta: usize| -> Vec<Cell> {
        vec![
            n.into(),
            delta.into(),
            phi.into(),
            o.tau_opt.into(),
            o.tau_star.into(),
            o.tau_pf.into(),
            o.pdet_at_opt.into(),
        ]
    };
    push(&mut t, row(o.phi_opt, o.delta))?;
    if let Some((phi, d)) = o.mirror {
        push(&mut t, row(phi, d))?;
    }
    Ok(t)
}

fn tas_curve(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let n = cfg.require_n()?;
    let pts = core::tas_vs_tau(n, cfg.phi_or_zero(), cfg.delta_or_default()?, &cfg.tau_values())?;
    let mut t = ResultTable::new(&["tau", "gap", "t_as"]);
    for p in pts {
        push(&mut t, vec![p.tau.into(), p.gap.into(), p.t_as.into()])?;
    }
    Ok(t)
}

fn size_budget(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let ns = cfg.n_list.clone().unwrap_or_else(|| (5..=31).collect());
    let ts = cfg.t_list.clone().unwrap_or_else(|| DEFAULT_T_LIST.to_vec());
    let sb = core::pdet_vs_size_and_budget(&ns, &ts)?;
    let mut t = ResultTable::new(&["N", "T", "tau_opt", "phi_opt", "pdet"]);
    for r in &sb.rows {
        push(&mut t, vec![r.n.into(), r.total_time.into(), r.tau_opt.into(), r.phi_opt.into(), r.pdet.into()])?;
    }
    for s in &sb.saturation {
        t.header.push(format!(
            "saturation N={} pdet_infinity={:.16e} budget={}",
            s.n,
            s.pdet_infinity,
            s.budget.map_or("none".to_owned(), |b| format!("{b:.16e}"))
        ));
    }
    Ok(t)
}

fn unitary_baseline(cfg: &ExperimentConfig) -> Result<ResultTable, CliError> {
    let base = template(cfg)?;
    let phis = match cfg.phi_grid {
        Some(g) => g.values(),
        None => core::default_phi_grid(base.n),
    };
    let times = cfg.time_grid.unwrap_or(DEFAULT_TIME_GRID).values();
    let mut t = ResultTable::new(&["phi", "t", "p_delta"]);
    for phi in phis {
        let c = base.with_phi(phi)?;
        for &time in &times {
            push(&mut t, vec![phi.into(), time.into(), core::unitary_transfer_probability(&c, time).into()])?;
        }
    }
    Ok(t)
}
