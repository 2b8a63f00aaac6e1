//! Dark states: states orthogonal to the detector that stay orthogonal under
//! the monitored evolution. They come from degenerate ring levels (dark for
//! every period) or from pairs of nondegenerate levels whose phases realign
//! after one period, `λ_m τ ≡ λ_n τ (mod 2π)`.

use num_complex::Complex;

use crate::config::{check_phase, check_ring, WalkConfig};
use crate::error::{Result, WalkError};
use crate::linalg::{inner, norm_sqr, StateVector};
use crate::pf::build_pf_operator;
use crate::ring::{eigenvalue, eigenvector_component, propagator};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DarkOrigin {
    /// Built from two levels with `λ_m = λ_n`.
    DegeneratePair { m: usize, n: usize },
    /// Built from nondegenerate levels with `(λ_m - λ_n) τ = 2πk`.
    PhaseMatched { m: usize, n: usize, k: i64 },
}

impl DarkOrigin {
    pub fn indices(&self) -> (usize, usize) {
        match *self {
            DarkOrigin::DegeneratePair { m, n } | DarkOrigin::PhaseMatched { m, n, .. } => (m, n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DarkState<T> {
    pub vector: StateVector<T>,
    pub origin: DarkOrigin,
    /// Unit-modulus survival-operator eigenvalue `exp(-i λ_m τ)`.
    pub pf_eigenvalue: Complex<T>,
}

/// Residuals certifying a dark state against a configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkResiduals<T> {
    pub detector_overlap: T,
    pub evolved_detector_overlap: T,
    pub eigen_residual: T,
}

impl<T: Real> DarkResiduals<T> {
    pub fn max(&self) -> T {
        self.detector_overlap
            .max(self.evolved_detector_overlap)
            .max(self.eigen_residual)
    }
}

impl<T: Real> DarkState<T> {
    pub fn residuals(&self, config: &WalkConfig<T>) -> DarkResiduals<T> {
        let v = self.vector.amplitudes();
        let evolved = propagator(config, config.tau).mul_vec(v);
        let ov = build_pf_operator(config).mul_vec(v);
        let eigen_residual = norm_sqr(
            &ov.iter()
                .zip(v)
                .map(|(a, b)| a - self.pf_eigenvalue * b)
                .collect::<Vec<_>>(),
        )
        .sqrt();
        DarkResiduals {
            detector_overlap: v[config.delta].norm(),
            evolved_detector_overlap: evolved[config.delta].norm(),
            eigen_residual,
        }
    }
}

/// Level pairs `m < n` with `|λ_m - λ_n| < tol`.
pub fn degenerate_pairs<T: Real>(n: usize, phi: T, tol: T) -> Vec<(usize, usize)> {
    let levels: Vec<T> = (0..n).map(|j| eigenvalue(n, phi, j)).collect();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if (levels[a] - levels[b]).abs() < tol {
                out.push((a, b));
            }
        }
    }
    out
}

fn sine_floor<T: Real>() -> T {
    T::epsilon() * T::lit(1e4)
}

/// The two sine factors of the phase-matching condition,
/// `sin(π(m-n)/N)` and `sin(φ - π(m+n)/N)`.
fn matching_factors<T: Real>(n: usize, phi: T, m: usize, nn: usize) -> (T, T) {
    let big_n = T::from_usize_lossy(n);
    let diff = T::from_f64(m as f64 - nn as f64).expect("small integer");
    let sum = T::from_usize_lossy(m + nn);
    let a = (T::PI() * diff / big_n).sin();
    let b = (phi - T::PI() * sum / big_n).sin();
    (a, b)
}

/// Period solving the phase-matching condition for levels `(m, n)` and winding `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatch<T> {
    pub tau: T,
    /// `tau > 0`; negative solutions are returned but flagged unphysical.
    pub physical: bool,
}

/// `τ = kπ / [2 sin(π(m-n)/N) sin(φ - π(m+n)/N)]`.
pub fn phase_matching_tau<T: Real>(n: usize, phi: T, m: usize, nn: usize, k: i64) -> Result<PhaseMatch<T>> {
    check_ring(n)?;
    if m >= n || nn >= n {
        return Err(WalkError::InvalidArgument(format!(
            "level indices ({m}, {nn}) must be below N={n}"
        )));
    }
    if k == 0 {
        return Err(WalkError::InvalidArgument("winding k must be nonzero".into()));
    }
    let (a, b) = matching_factors(n, phi, m, nn);
    let floor = sine_floor::<T>();
    if a.abs() < floor || b.abs() < floor {
        return Err(WalkError::DegenerateDenominator { m, n: nn });
    }
    let kk = T::from_i64(k).expect("small integer");
    let tau = kk * T::PI() / (T::lit(2.0) * a * b);
    Ok(PhaseMatch {
        tau,
        physical: tau > T::zero(),
    })
}

/// Winding `k` for which `(m, n)` is phase-matched at `tau`, if any.
fn matched_winding<T: Real>(n: usize, phi: T, tau: T, m: usize, nn: usize) -> Option<i64> {
    let (a, b) = matching_factors(n, phi, m, nn);
    let floor = sine_floor::<T>();
    if a.abs() < floor || b.abs() < floor {
        return None;
    }
    let k = (tau * T::lit(2.0) * a * b / T::PI()).round().to_i64()?;
    if k == 0 {
        return None;
    }
    let pm = phase_matching_tau(n, phi, m, nn, k).ok()?;
    ((pm.tau - tau).abs() < T::lit(T::TOL_TAU_MATCH)).then_some(k)
}

/// Smallest positive phase-matching period over all nondegenerate level
/// pairs; `|k| = 1` attains it since `τ` scales linearly in `k`.
pub fn min_phase_matching_tau<T: Real>(n: usize, phi: T) -> Result<T> {
    check_ring(n)?;
    let floor = sine_floor::<T>();
    let mut best = T::infinity();
    for m in 0..n {
        for nn in m + 1..n {
            let (a, b) = matching_factors(n, phi, m, nn);
            if a.abs() < floor || b.abs() < floor {
                continue;
            }
            let tau = T::PI() / (T::lit(2.0) * (a * b).abs());
            best = best.min(tau);
        }
    }
    Ok(best)
}

/// `√(N/2) (⟨δ|λ_n⟩|λ_m⟩ - ⟨δ|λ_m⟩|λ_n⟩)`, unit norm by construction.
fn pair_vector<T: Real>(n: usize, delta: usize, m: usize, nn: usize) -> Vec<Complex<T>> {
    let dn = eigenvector_component::<T>(n, nn, delta);
    let dm = eigenvector_component::<T>(n, m, delta);
    let pref = (T::from_usize_lossy(n) / T::lit(2.0)).sqrt();
    (0..n)
        .map(|k| {
            (dn * eigenvector_component::<T>(n, m, k) - dm * eigenvector_component::<T>(n, nn, k)).scale(pref)
        })
        .collect()
}

/// Dark state from levels `(m, n)` at the configuration's phase and period.
pub fn dark_state_from_pair<T: Real>(config: &WalkConfig<T>, m: usize, n: usize) -> Result<DarkState<T>> {
    let ring = config.n;
    if m == n || m >= ring || n >= ring {
        return Err(WalkError::InvalidArgument(format!(
            "need distinct level indices below N={ring}, got ({m}, {n})"
        )));
    }
    let lm = eigenvalue(ring, config.phi, m);
    let ln = eigenvalue(ring, config.phi, n);
    let origin = if (lm - ln).abs() < config.tol_degenerate {
        DarkOrigin::DegeneratePair { m, n }
    } else if let Some(k) = matched_winding(ring, config.phi, config.tau, m, n) {
        DarkOrigin::PhaseMatched { m, n, k }
    } else {
        return Err(WalkError::NotDark {
            m,
            n,
            tau: config.tau.as_f64(),
        });
    };
    let (s, c) = (lm * config.tau).sin_cos();
    Ok(DarkState {
        vector: StateVector::from_amplitudes(pair_vector(ring, config.delta, m, n)),
        origin,
        pf_eigenvalue: Complex::new(c, -s),
    })
}

/// Dark subspace at one configuration and the initial state's weight on it.
#[derive(Debug, Clone, PartialEq)]
pub struct DarkReport<T> {
    pub config: WalkConfig<T>,
    /// Orthonormal basis of the dark span. Each element keeps the origin of
    /// the analytic state that introduced it.
    pub dark_basis: Vec<DarkState<T>>,
    /// `‖P_dark |0⟩‖²`.
    pub initial_overlap: T,
    /// `1 - initial_overlap`: asymptotic detection probability.
    pub pdet_infinity: T,
}

impl<T: Real> DarkReport<T> {
    pub fn is_fully_bright(&self) -> bool {
        self.dark_basis.is_empty()
    }
}

pub fn dark_report<T: Real>(config: &WalkConfig<T>) -> Result<DarkReport<T>> {
    config.validate()?;
    let ring = config.n;
    let mut candidates = Vec::new();
    for (m, n) in degenerate_pairs(ring, config.phi, config.tol_degenerate) {
        candidates.push(dark_state_from_pair(config, m, n)?);
    }
    for m in 0..ring {
        for n in m + 1..ring {
            let lm = eigenvalue(ring, config.phi, m);
            let ln = eigenvalue(ring, config.phi, n);
            if (lm - ln).abs() < config.tol_degenerate {
                continue;
            }
            if matched_winding(ring, config.phi, config.tau, m, n).is_some() {
                candidates.push(dark_state_from_pair(config, m, n)?);
            }
        }
    }

    // Candidates from different propagator eigenspaces are already
    // orthogonal, so Gram-Schmidt only mixes states sharing an eigenvalue and
    // each basis vector stays an eigenvector of the survival operator.
    let drop_tol = T::lit(1e-8).max(T::epsilon().sqrt());
    let mut dark_basis: Vec<DarkState<T>> = Vec::new();
    for cand in candidates {
        let mut w = cand.vector.amplitudes().to_vec();
        for _ in 0..2 {
            for q in &dark_basis {
                let c = inner(q.vector.amplitudes(), &w);
                for (wi, qi) in w.iter_mut().zip(q.vector.amplitudes()) {
                    *wi = *wi - c * qi;
                }
            }
        }
        let nrm = norm_sqr(&w).sqrt();
        if nrm > drop_tol {
            w.iter_mut().for_each(|z| *z = z.unscale(nrm));
            dark_basis.push(DarkState {
                vector: StateVector::from_amplitudes(w),
                ..cand
            });
        }
    }
    let initial_overlap: T = dark_basis.iter().map(|d| d.vector[0].norm_sqr()).sum();
    Ok(DarkReport {
        config: *config,
        dark_basis,
        initial_overlap,
        pdet_infinity: (T::one() - initial_overlap).max(T::zero()),
    })
}

/// Default winding cutoff for counting: `|y₂| ≤ 2τ` bounds reachable `k`.
pub fn default_k_max<T: Real>(tau: T) -> usize {
    (T::lit(2.0) * tau / T::PI()).ceil().to_usize().unwrap_or(0) + 1
}

/// Solutions `φ ∈ [lo, hi]` of `2τ sin(π(m-n)/N) sin(φ - π(m+n)/N) = kπ`
/// for one pair `(m, n)` and winding `k`.
pub fn phase_matching_phis<T: Real>(n: usize, m: usize, nn: usize, tau: T, k: i64, lo: T, hi: T) -> Vec<T> {
    let (a, _) = matching_factors(n, T::zero(), m, nn);
    if a.abs() < sine_floor::<T>() || k == 0 {
        return Vec::new();
    }
    let kk = T::from_i64(k).expect("small integer");
    let c = kk * T::PI() / (T::lit(2.0) * tau * a);
    if c.abs() > T::one() {
        return Vec::new();
    }
    let centre = T::PI() * T::from_usize_lossy(m + nn) / T::from_usize_lossy(n);
    let s = c.asin();
    let mut bases = vec![centre + s];
    if (T::one() - c.abs()) > T::epsilon() {
        bases.push(centre + T::PI() - s);
    }
    let tau2 = T::TAU();
    let mut roots = Vec::new();
    for base in bases {
        let l_lo = ((lo - base) / tau2).ceil().to_i64().unwrap_or(0);
        let l_hi = ((hi - base) / tau2).floor().to_i64().unwrap_or(-1);
        for l in l_lo..=l_hi {
            roots.push(base + tau2 * T::from_i64(l).expect("small integer"));
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    roots
}

/// Number of phase-matched dark states with `φ ∈ [lo, hi]` at fixed `tau`,
/// over all level pairs `m < n` and windings `0 < |k| ≤ k_max`
/// (default `ceil(2τ/π) + 1`).
pub fn dark_state_count_in_window<T: Real>(n: usize, phi_lo: T, phi_hi: T, tau: T, k_max: Option<usize>) -> Result<usize> {
    check_ring(n)?;
    if !(phi_lo < phi_hi) {
        return Err(WalkError::InvalidArgument("phi window must satisfy lo < hi".into()));
    }
    if !(tau > T::zero()) {
        return Err(WalkError::NonPositive {
            name: "tau",
            value: tau.as_f64(),
        });
    }
    let k_max = k_max.unwrap_or_else(|| default_k_max(tau));
    if k_max == 0 {
        return Err(WalkError::InvalidArgument("k_max must be at least 1".into()));
    }
    let k_max = k_max as i64;
    let mut count = 0;
    for m in 0..n {
        for nn in m + 1..n {
            for k in (-k_max..=k_max).filter(|&k| k != 0) {
                count += phase_matching_phis(n, m, nn, tau, k, phi_lo, phi_hi).len();
            }
        }
    }
    Ok(count)
}

/// A point on a dark-state curve in the `(φ, τ)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkCurvePoint<T> {
    pub phi: T,
    pub tau: T,
    pub m: usize,
    pub n: usize,
    pub k: i64,
}

/// Samples every dark-state curve `τ(φ)` with `0 < τ ≤ tau_max` on the given phases.
pub fn dark_curves<T: Real>(n: usize, phis: &[T], tau_max: T, k_max: usize) -> Result<Vec<DarkCurvePoint<T>>> {
    check_ring(n)?;
    let mut out = Vec::new();
    for &phi in phis {
        check_phase(n, phi)?;
        for m in 0..n {
            for nn in m + 1..n {
                for k in 1..=k_max as i64 {
                    for kk in [k, -k] {
                        match phase_matching_tau(n, phi, m, nn, kk) {
                            Ok(pm) if pm.physical && pm.tau <= tau_max => out.push(DarkCurvePoint {
                                phi,
                                tau: pm.tau,
                                m,
                                n: nn,
                                k: kk,
                            }),
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
