//! Parameter-plane sweeps and the optimal-protocol search: threshold period
//! `τ*`, optimal phase and period under a finite budget, the spectral optimum
//! `τ_PF`, and the data behind the size/budget and time-scale curves.

use rayon::prelude::*;

use crate::config::WalkConfig;
use crate::dark::{dark_report, min_phase_matching_tau};
use crate::error::{Result, WalkError};
use crate::monitored::detection_probability_at_budget;
use crate::pf::pf_spectrum;
use crate::scalar::Real;

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / T::from_usize_lossy(count - 1);
            (0..count)
                .map(|i| {
                    if i == count - 1 {
                        hi
                    } else {
                        lo + step * T::from_usize_lossy(i)
                    }
                })
                .collect()
        }
    }
}

/// 101 phases over `[-π/N, π/N]`.
pub fn default_phi_grid<T: Real>(n: usize) -> Vec<T> {
    let b = T::PI() / T::from_usize_lossy(n);
    linspace(-b, b, 101)
}

/// 150 periods over `[0.02, 3.0]`.
pub fn default_tau_grid<T: Real>() -> Vec<T> {
    linspace(T::lit(0.02), T::lit(3.0), 150)
}

/// Fine period scan used for the empirical threshold and spectral optimum.
pub fn default_tau_scan<T: Real>() -> Vec<T> {
    linspace(T::lit(0.02), T::lit(3.0), 597)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of `f` on `[a, b]`.
pub fn golden_section_max<T: Real>(mut f: impl FnMut(T) -> T, mut a: T, mut b: T, tol: T, max_iter: usize) -> (T, T) {
    let g = T::lit(INV_PHI);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

pub fn golden_section_min<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, tol: T, max_iter: usize) -> (T, T) {
    let (x, fx) = golden_section_max(|x| -f(x), a, b, tol, max_iter);
    (x, -fx)
}

fn at_point<T: Real>(phi: T, tau: T, e: WalkError) -> WalkError {
    WalkError::AtGridPoint {
        phi: phi.as_f64(),
        tau: tau.as_f64(),
        source: Box::new(e),
    }
}

/// Axes and budget of a parameter-plane sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec<T> {
    pub phi_values: Vec<T>,
    pub tau_values: Vec<T>,
    pub budget_t: T,
}

impl<T: Real> SweepSpec<T> {
    pub fn default_for(n: usize, budget_t: T) -> Self {
        Self {
            phi_values: default_phi_grid(n),
            tau_values: default_tau_grid(),
            budget_t,
        }
    }
}

/// Sweep results indexed `[phi_index][tau_index]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid<T> {
    pub phi_values: Vec<T>,
    pub tau_values: Vec<T>,
    pub budget_t: T,
    pub n_attempts: Vec<Vec<usize>>,
    pub results: Vec<Vec<T>>,
    pub pf_moduli: Vec<Vec<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdetCell<T> {
    pub phi: T,
    pub tau: T,
    pub n_attempts: usize,
    pub pdet: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfCell<T> {
    pub phi: T,
    pub tau: T,
    pub mu_pf_abs: T,
    pub mu_sub_abs: T,
    pub gap: T,
    pub t_as: T,
}

fn cells<T: Real>(phis: &[T], taus: &[T]) -> Vec<(T, T)> {
    phis.iter()
        .flat_map(|&p| taus.iter().map(move |&t| (p, t)))
        .collect()
}

fn check_axes<T: Real>(phis: &[T], taus: &[T]) -> Result<()> {
    if phis.is_empty() || taus.is_empty() {
        return Err(WalkError::InvalidArgument("sweep grid must be nonempty".into()));
    }
    Ok(())
}

/// `P_det` at every `(φ, τ)` cell, phi-major order.
pub fn pdet_grid<T: Real>(template: &WalkConfig<T>, phis: &[T], taus: &[T], budget_t: T) -> Result<Vec<PdetCell<T>>> {
    check_axes(phis, taus)?;
    cells(phis, taus)
        .into_par_iter()
        .map(|(phi, tau)| {
            let cfg = WalkConfig {
                phi,
                tau,
                total_time: budget_t,
                ..*template
            };
            cfg.validate().map_err(|e| at_point(phi, tau, e))?;
            let n_attempts = cfg.attempts().map_err(|e| at_point(phi, tau, e))?;
            let pdet = detection_probability_at_budget(&cfg).map_err(|e| at_point(phi, tau, e))?;
            Ok(PdetCell {
                phi,
                tau,
                n_attempts,
                pdet,
            })
        })
        .collect()
}

/// Survival-operator moduli and time scales at every cell, phi-major order.
pub fn pf_grid<T: Real>(template: &WalkConfig<T>, phis: &[T], taus: &[T]) -> Result<Vec<PfCell<T>>> {
    check_axes(phis, taus)?;
    cells(phis, taus)
        .into_par_iter()
        .map(|(phi, tau)| {
            let cfg = WalkConfig { phi, tau, ..*template };
            cfg.validate().map_err(|e| at_point(phi, tau, e))?;
            let s = pf_spectrum(&cfg).map_err(|e| at_point(phi, tau, e))?;
            Ok(PfCell {
                phi,
                tau,
                mu_pf_abs: s.leading_modulus,
                mu_sub_abs: s.subleading_modulus,
                gap: s.gap,
                t_as: s.t_asymptotic,
            })
        })
        .collect()
}

pub fn sweep<T: Real>(template: &WalkConfig<T>, spec: &SweepSpec<T>) -> Result<SweepGrid<T>> {
    let pd = pdet_grid(template, &spec.phi_values, &spec.tau_values, spec.budget_t)?;
    let pf = pf_grid(template, &spec.phi_values, &spec.tau_values)?;
    let nt = spec.tau_values.len();
    let rows = |f: &dyn Fn(usize) -> T| -> Vec<Vec<T>> {
        (0..spec.phi_values.len())
            .map(|i| (0..nt).map(|j| f(i * nt + j)).collect())
            .collect()
    };
    Ok(SweepGrid {
        phi_values: spec.phi_values.clone(),
        tau_values: spec.tau_values.clone(),
        budget_t: spec.budget_t,
        n_attempts: (0..spec.phi_values.len())
            .map(|i| (0..nt).map(|j| pd[i * nt + j].n_attempts).collect())
            .collect(),
        results: rows(&|k| pd[k].pdet),
        pf_moduli: rows(&|k| pf[k].mu_pf_abs),
    })
}

/// Largest survival-operator modulus relevant to transfer at one point
/// (degeneracy-induced dark modes removed).
pub fn relevant_modulus<T: Real>(template: &WalkConfig<T>, phi: T, tau: T) -> Result<T> {
    let cfg = WalkConfig { phi, tau, ..*template };
    Ok(pf_spectrum(&cfg)?.relevant_modulus())
}

/// Threshold period at one phase, by two routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauStar<T> {
    pub phi: T,
    /// Smallest positive phase-matching period over nondegenerate level pairs.
    pub analytic: T,
    /// First period on the scan where the relevant modulus touches the unit
    /// circle, refined by golden-section search around the touching peak.
    pub empirical: Option<T>,
    /// Set when the two routes differ by more than 0.05 or the scan found no touch.
    pub disagreement: bool,
}

pub const TAU_STAR_DISAGREEMENT: f64 = 0.05;

pub fn tau_star<T: Real>(n: usize, phi: T, delta: usize) -> Result<TauStar<T>> {
    tau_star_with_scan(n, phi, delta, &default_tau_scan())
}

pub fn tau_star_with_scan<T: Real>(n: usize, phi: T, delta: usize, scan: &[T]) -> Result<TauStar<T>> {
    let template = WalkConfig::new(n, delta, phi, T::one(), T::one())?;
    let analytic = min_phase_matching_tau(n, phi)?;
    let moduli: Vec<T> = scan
        .par_iter()
        .map(|&tau| relevant_modulus(&template, phi, tau).map_err(|e| at_point(phi, tau, e)))
        .collect::<Result<_>>()?;
    let tol = template.tol_unit;
    let mut empirical = None;
    for i in 1..scan.len() {
        if 1.0 - moduli[i].as_f64() < tol.as_f64() {
            empirical = Some(scan[i]);
            break;
        }
        if i + 1 >= scan.len() || !(moduli[i] >= moduli[i - 1] && moduli[i] >= moduli[i + 1]) {
            continue;
        }
        let (t, r) = golden_section_max(
            |tau| relevant_modulus(&template, phi, tau).unwrap_or(T::zero()),
            scan[i - 1],
            scan[i + 1],
            T::epsilon().sqrt(),
            200,
        );
        if T::one() - r < tol {
            empirical = Some(t);
            break;
        }
    }
    let disagreement = match empirical {
        Some(e) => (e - analytic).abs() > T::lit(TAU_STAR_DISAGREEMENT),
        None => true,
    };
    Ok(TauStar {
        phi,
        analytic,
        empirical,
        disagreement,
    })
}

/// Period minimizing the relevant modulus below the analytic threshold.
pub fn tau_pf<T: Real>(n: usize, phi: T, delta: usize, scan: &[T]) -> Result<(T, T)> {
    let template = WalkConfig::new(n, delta, phi, T::one(), T::one())?;
    let threshold = min_phase_matching_tau(n, phi)?;
    let taus: Vec<T> = scan.iter().copied().filter(|&t| t < threshold).collect();
    if taus.is_empty() {
        return Err(WalkError::InvalidArgument("no scan period below the threshold".into()));
    }
    let moduli: Vec<T> = taus
        .par_iter()
        .map(|&tau| relevant_modulus(&template, phi, tau).map_err(|e| at_point(phi, tau, e)))
        .collect::<Result<_>>()?;
    let i = argmin(&moduli);
    let lo = taus[i.saturating_sub(1)];
    let hi = if i + 1 < taus.len() {
        taus[i + 1]
    } else {
        taus[i].max(threshold * (T::one() - T::epsilon().sqrt()))
    };
    let (t, r) = golden_section_min(
        |tau| relevant_modulus(&template, phi, tau).unwrap_or(T::one()),
        lo,
        hi,
        T::epsilon().sqrt(),
        200,
    );
    Ok(if r <= moduli[i] { (t, r) } else { (taus[i], moduli[i]) })
}

fn argmin<T: Real>(v: &[T]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x < v[best] {
            best = i;
        }
    }
    best
}

/// Optimal protocol for one ring and budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum<T> {
    pub n: usize,
    /// Target site the optimum refers to (the one requested).
    pub delta: usize,
    pub phi_opt: T,
    pub tau_opt: T,
    /// Analytic threshold at `phi_opt`.
    pub tau_star: T,
    pub tau_pf: T,
    pub pdet_at_opt: T,
    /// Odd rings: the equivalent optimum `(-phi_opt, N - delta)`.
    pub mirror: Option<(T, usize)>,
}

impl<T: Real> Optimum<T> {
    /// The representation with nonnegative phase, `(phi, delta)`.
    pub fn canonical(&self) -> (T, usize) {
        match self.mirror {
            Some((phi, delta)) if self.phi_opt < T::zero() => (phi, delta),
            _ => (self.phi_opt, self.delta),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOptions<T> {
    pub phi_values: Vec<T>,
    pub tau_values: Vec<T>,
    /// Scan for the spectral optimum.
    pub tau_scan: Vec<T>,
}

impl<T: Real> OptimizeOptions<T> {
    pub fn default_for(n: usize) -> Self {
        Self {
            phi_values: default_phi_grid(n),
            tau_values: default_tau_grid(),
            tau_scan: default_tau_scan(),
        }
    }
}

pub fn optimize<T: Real>(n: usize, delta: usize, total_time: T) -> Result<Optimum<T>> {
    optimize_with(n, delta, total_time, &OptimizeOptions::default_for(n))
}

/// Grid search over the robust region `τ < τ*(φ)`, then golden-section
/// refinement of `τ` along the best phase. The refined point replaces the grid
/// optimum only when it is at least as good.
pub fn optimize_with<T: Real>(n: usize, delta: usize, total_time: T, opts: &OptimizeOptions<T>) -> Result<Optimum<T>> {
    let template = WalkConfig::new(n, delta, T::zero(), T::one(), total_time)?;
    check_axes(&opts.phi_values, &opts.tau_values)?;
    let thresholds: Vec<T> = opts
        .phi_values
        .iter()
        .map(|&p| min_phase_matching_tau(n, p))
        .collect::<Result<_>>()?;
    let robust: Vec<(usize, usize)> = (0..opts.phi_values.len())
        .flat_map(|i| {
            let th = thresholds[i];
            opts.tau_values
                .iter()
                .enumerate()
                .filter(move |(_, &t)| t < th && t <= total_time)
                .map(move |(j, _)| (i, j))
        })
        .collect();
    if robust.is_empty() {
        return Err(WalkError::InvalidArgument("no grid cell inside the robust region".into()));
    }
    let values: Vec<T> = robust
        .par_iter()
        .map(|&(i, j)| {
            let (phi, tau) = (opts.phi_values[i], opts.tau_values[j]);
            let cfg = WalkConfig { phi, tau, ..template };
            cfg.validate().map_err(|e| at_point(phi, tau, e))?;
            detection_probability_at_budget(&cfg).map_err(|e| at_point(phi, tau, e))
        })
        .collect::<Result<_>>()?;

    let best_value = values.iter().copied().fold(T::neg_infinity(), T::max);
    // Ties (mirror-symmetric landscapes) resolve to the smallest |φ|, then
    // positive φ, then the smallest τ.
    let tie = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    let &(bi, bj) = robust
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v >= best_value - tie)
        .map(|(c, _)| c)
        .min_by(|&&(i1, j1), &&(i2, j2)| {
            let (p1, p2) = (opts.phi_values[i1], opts.phi_values[i2]);
            p1.abs()
                .partial_cmp(&p2.abs())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(p2.partial_cmp(&p1).unwrap_or(std::cmp::Ordering::Equal))
                .then(j1.cmp(&j2))
        })
        .expect("nonempty");
    let phi_opt = opts.phi_values[bi];
    let tau_star = thresholds[bi];
    let grid_value = values[robust.iter().position(|&c| c == (bi, bj)).expect("present")];

    let ceiling = tau_star.min(total_time);
    let lo = if bj > 0 { opts.tau_values[bj - 1] } else { opts.tau_values[bj] };
    let mut hi = if bj + 1 < opts.tau_values.len() {
        opts.tau_values[bj + 1]
    } else {
        opts.tau_values[bj]
    };
    if hi >= ceiling {
        hi = ceiling * (T::one() - T::epsilon().sqrt());
    }
    let pdet_at = |tau: T| {
        let cfg = WalkConfig {
            phi: phi_opt,
            tau,
            ..template
        };
        detection_probability_at_budget(&cfg).unwrap_or(T::zero())
    };
    let (mut tau_opt, mut pdet_at_opt) = (opts.tau_values[bj], grid_value);
    if hi > lo {
        let (t, v) = golden_section_max(pdet_at, lo, hi, T::lit(1e-6), 100);
        if v > pdet_at_opt {
            tau_opt = t;
            pdet_at_opt = v;
        }
    }

    let (tau_pf, _) = tau_pf(n, phi_opt, delta, &opts.tau_scan)?;
    let mirror = (n % 2 == 1).then(|| (-phi_opt, n - delta));
    Ok(Optimum {
        n,
        delta,
        phi_opt,
        tau_opt,
        tau_star,
        tau_pf,
        pdet_at_opt,
        mirror,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeBudgetRow<T> {
    pub n: usize,
    pub delta: usize,
    pub total_time: T,
    pub tau_opt: T,
    pub phi_opt: T,
    pub pdet: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Saturation<T> {
    pub n: usize,
    pub pdet_infinity: T,
    /// Smallest listed budget with `P_det > 0.99 · pdet_infinity`.
    pub budget: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeBudget<T> {
    pub rows: Vec<SizeBudgetRow<T>>,
    pub saturation: Vec<Saturation<T>>,
}

pub const SATURATION_FRACTION: f64 = 0.99;

/// Detection probability over ring sizes and budgets at each size's spectral
/// optimum: `φ = 0` for even `N`, `φ = ±π/2N` for odd `N`, `τ = τ_PF`. The
/// two odd-ring signs trade places as the budget changes, so the sign kept is
/// the one with the larger summed detection probability over the listed
/// budgets (positive on ties).
pub fn pdet_vs_size_and_budget<T: Real>(n_values: &[usize], t_values: &[T]) -> Result<SizeBudget<T>> {
    if n_values.is_empty() || t_values.is_empty() {
        return Err(WalkError::InvalidArgument("size and budget lists must be nonempty".into()));
    }
    let t_max = t_values.iter().copied().fold(T::neg_infinity(), T::max);
    let scan = default_tau_scan::<T>();
    let per_size: Vec<(usize, usize, T, T, T)> = n_values
        .par_iter()
        .map(|&n| {
            let delta = WalkConfig::<T>::opposite_site(n);
            let half = T::PI() / (T::lit(2.0) * T::from_usize_lossy(n));
            let (tau, _) = tau_pf(n, if n % 2 == 0 { T::zero() } else { half }, delta, &scan)?;
            let phi = if n % 2 == 0 {
                T::zero()
            } else {
                let score = |phi: T| -> Result<T> {
                    let mut total = T::zero();
                    for &t in t_values.iter().filter(|&&t| t >= tau) {
                        total = total + detection_probability_at_budget(&WalkConfig::new(n, delta, phi, tau, t)?)?;
                    }
                    Ok(total)
                };
                if score(-half)? > score(half)? + T::lit(1e-12) {
                    -half
                } else {
                    half
                }
            };
            let pinf = dark_report(&WalkConfig::new(n, delta, phi, tau, t_max)?)?.pdet_infinity;
            Ok((n, delta, phi, tau, pinf))
        })
        .collect::<Result<_>>()?;

    let grid: Vec<(usize, usize)> = (0..per_size.len())
        .flat_map(|i| (0..t_values.len()).map(move |j| (i, j)))
        .collect();
    let rows: Vec<SizeBudgetRow<T>> = grid
        .par_iter()
        .map(|&(i, j)| {
            let (n, delta, phi, tau, _) = per_size[i];
            let total_time = t_values[j];
            let cfg = WalkConfig::new(n, delta, phi, tau, total_time)?;
            let pdet = if total_time < tau {
                T::zero()
            } else {
                detection_probability_at_budget(&cfg)?
            };
            Ok(SizeBudgetRow {
                n,
                delta,
                total_time,
                tau_opt: tau,
                phi_opt: phi,
                pdet,
            })
        })
        .collect::<Result<_>>()?;

    let frac = T::lit(SATURATION_FRACTION);
    let saturation = per_size
        .iter()
        .enumerate()
        .map(|(i, &(n, _, _, _, pinf))| {
            let budget = rows[i * t_values.len()..(i + 1) * t_values.len()]
                .iter()
                .filter(|r| r.pdet > frac * pinf)
                .map(|r| r.total_time)
                .fold(None, |acc: Option<T>, t| Some(acc.map_or(t, |a| a.min(t))));
            Saturation {
                n,
                pdet_infinity: pinf,
                budget,
            }
        })
        .collect();
    Ok(SizeBudget { rows, saturation })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TasPoint<T> {
    pub tau: T,
    pub gap: T,
    pub t_as: T,
}

/// Spectral gap and asymptotic time scale along a period axis.
pub fn tas_vs_tau<T: Real>(n: usize, phi: T, delta: usize, tau_values: &[T]) -> Result<Vec<TasPoint<T>>> {
    let template = WalkConfig::new(n, delta, phi, T::one(), T::one())?;
    tau_values
        .par_iter()
        .map(|&tau| {
            let cfg = template.with_tau(tau).map_err(|e| at_point(phi, tau, e))?;
            let s = pf_spectrum(&cfg).map_err(|e| at_point(phi, tau, e))?;
            Ok(TasPoint {
                tau,
                gap: s.gap,
                t_as: s.t_asymptotic,
            })
        })
        .collect()
}
