//! Survival (Perron-Frobenius) operator `O = (I - |δ⟩⟨δ|) U(τ)` and its
//! spectrum: leading and subleading moduli, spectral gap, asymptotic time
//! scale and the eigen-expansion estimate of the survival probability.

use num_complex::Complex;

use crate::config::WalkConfig;
use crate::dark::degenerate_pairs;
use crate::error::{Result, WalkError};
use crate::linalg::{eig, orthonormalize, ComplexMatrix};
use crate::monitored::survival_after;
use crate::ring::{eigenvalue, propagator};
use crate::scalar::Real;

/// `U(τ)` with the target row zeroed.
pub fn build_pf_operator<T: Real>(config: &WalkConfig<T>) -> ComplexMatrix<T> {
    let mut o = propagator(config, config.tau);
    o.row_mut(config.delta)
        .iter_mut()
        .for_each(|z| *z = Complex::new(T::zero(), T::zero()));
    o
}

/// Full eigendecomposition of the survival operator and derived rates.
#[derive(Debug, Clone, PartialEq)]
pub struct PFSpectrum<T> {
    pub config: WalkConfig<T>,
    /// Sorted by descending modulus, ties by ascending argument.
    pub eigenvalues: Vec<Complex<T>>,
    /// Unit-norm right eigenvectors, aligned with `eigenvalues`.
    pub right_eigenvectors: Vec<Vec<Complex<T>>>,
    /// Weight of `|0⟩` on each eigenvector. Eigenvalues clustered within
    /// `tol_degenerate` share the squared projection onto their joint span
    /// equally, so the split does not depend on the basis chosen inside a
    /// cluster. Eigenvectors of a non-normal operator are not orthogonal, so
    /// these weights need not sum to one.
    pub overlaps: Vec<T>,
    pub leading_modulus: T,
    /// Largest modulus strictly inside `1 - tol_unit`.
    pub subleading_modulus: T,
    /// Whether `|0⟩` has no weight on any unit-modulus mode.
    pub dark_overlap_zero: bool,
    pub gap: T,
    /// `1 / gap`, or `+inf` when the gap is below `tol_unit`.
    pub t_asymptotic: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticScale<T> {
    pub gap: T,
    pub t_as: T,
}

impl<T: Real> AsymptoticScale<T> {
    fn from_modulus(modulus: T, tol_unit: T) -> Self {
        let gap = (T::one() - modulus).max(T::zero());
        let t_as = if gap < tol_unit {
            T::infinity()
        } else {
            T::one() / gap
        };
        Self { gap, t_as }
    }

    pub fn is_finite(&self) -> bool {
        self.t_as.is_finite()
    }
}

pub fn pf_spectrum<T: Real>(config: &WalkConfig<T>) -> Result<PFSpectrum<T>> {
    let o = build_pf_operator(config);
    let mut pairs = eig(&o).ok_or(WalkError::DecompositionFailure {
        n: config.n,
        delta: config.delta,
        phi: config.phi.as_f64(),
        tau: config.tau.as_f64(),
    })?;
    pairs.sort_by(|a, b| {
        b.value
            .norm()
            .partial_cmp(&a.value.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                a.value
                    .arg()
                    .partial_cmp(&b.value.arg())
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
    let eigenvalues: Vec<Complex<T>> = pairs.iter().map(|p| p.value).collect();
    let right_eigenvectors: Vec<Vec<Complex<T>>> = pairs.into_iter().map(|p| p.vector).collect();
    let overlaps = cluster_overlaps(&eigenvalues, &right_eigenvectors, config.tol_degenerate);

    let tol = config.tol_unit;
    let one = T::one();
    let leading_modulus = eigenvalues[0].norm();
    let subleading_modulus = eigenvalues
        .iter()
        .map(|m| m.norm())
        .filter(|&r| r < one - tol)
        .fold(T::zero(), T::max);
    let dark_weight: T = eigenvalues
        .iter()
        .zip(&overlaps)
        .filter(|(m, _)| m.norm() >= one - tol)
        .map(|(_, w)| *w)
        .sum();
    let dark_overlap_zero = dark_weight < T::lit(T::TOL_DARK);
    let scale = AsymptoticScale::from_modulus(
        if dark_overlap_zero {
            subleading_modulus
        } else {
            leading_modulus
        },
        tol,
    );
    Ok(PFSpectrum {
        config: *config,
        eigenvalues,
        right_eigenvectors,
        overlaps,
        leading_modulus,
        subleading_modulus,
        dark_overlap_zero,
        gap: scale.gap,
        t_asymptotic: scale.t_as,
    })
}

fn cluster_overlaps<T: Real>(values: &[Complex<T>], vectors: &[Vec<Complex<T>>], tol: T) -> Vec<T> {
    let n = values.len();
    let mut cluster = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if cluster[i] != usize::MAX {
            continue;
        }
        cluster[i] = next;
        // Transitive closure so chains of near-equal values form one cluster.
        let mut frontier = vec![i];
        while let Some(a) = frontier.pop() {
            for b in 0..n {
                if cluster[b] == usize::MAX && (values[a] - values[b]).norm() < tol {
                    cluster[b] = next;
                    frontier.push(b);
                }
            }
        }
        next += 1;
    }
    let mut overlaps = vec![T::zero(); n];
    for id in 0..next {
        let members: Vec<usize> = (0..n).filter(|&i| cluster[i] == id).collect();
        let vecs: Vec<Vec<Complex<T>>> = members.iter().map(|&i| vectors[i].clone()).collect();
        let basis = orthonormalize(&vecs, T::lit(1e-8).max(T::epsilon().sqrt()));
        // ⟨q|0⟩ is the conjugate of the first component.
        let weight: T = basis.iter().map(|q| q[0].norm_sqr()).sum();
        let share = weight / T::from_usize_lossy(members.len());
        for &i in &members {
            overlaps[i] = share;
        }
    }
    overlaps
}

impl<T: Real> PFSpectrum<T> {
    /// Gap and time scale; uses the subleading modulus when the initial state
    /// is orthogonal to every unit-modulus mode.
    pub fn scale(&self, dark_overlap_zero: bool) -> AsymptoticScale<T> {
        let modulus = if dark_overlap_zero {
            self.subleading_modulus
        } else {
            self.leading_modulus
        };
        AsymptoticScale::from_modulus(modulus, self.config.tol_unit)
    }

    /// Gap of the decaying (bright) sector: `1 - subleading_modulus`.
    pub fn bright_scale(&self) -> AsymptoticScale<T> {
        self.scale(true)
    }

    /// `Σ_j |μ_j|^{2n} w_j` with the overlap weights of this spectrum.
    pub fn survival_estimate(&self, n: usize) -> T {
        let p = T::from_usize_lossy(2 * n);
        self.eigenvalues
            .iter()
            .zip(&self.overlaps)
            .map(|(m, w)| {
                if n == 0 {
                    *w
                } else {
                    m.norm().powf(p) * *w
                }
            })
            .sum()
    }

    pub fn unit_modulus_count(&self) -> usize {
        let cut = T::one() - self.config.tol_unit;
        self.eigenvalues.iter().filter(|m| m.norm() >= cut).count()
    }

    /// Largest modulus once the eigenvalues carried by degeneracy-induced dark
    /// states (one per degenerate level pair, at `exp(-i λ_m τ)`) are removed.
    /// Equals `leading_modulus` whenever the ring spectrum is nondegenerate.
    pub fn relevant_modulus(&self) -> T {
        let cfg = &self.config;
        let pairs = degenerate_pairs(cfg.n, cfg.phi, cfg.tol_degenerate);
        if pairs.is_empty() {
            return self.leading_modulus;
        }
        let mut used = vec![false; self.eigenvalues.len()];
        for (m, _) in pairs {
            let (s, c) = (eigenvalue(cfg.n, cfg.phi, m) * cfg.tau).sin_cos();
            let target = Complex::new(c, -s);
            let nearest = self
                .eigenvalues
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .min_by(|(_, a), (_, b)| {
                    (*a - target)
                        .norm()
                        .partial_cmp(&(*b - target).norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .map(|(i, _)| i);
            if let Some(i) = nearest {
                used[i] = true;
            }
        }
        self.eigenvalues
            .iter()
            .zip(&used)
            .filter(|(_, u)| !**u)
            .map(|(m, _)| m.norm())
            .fold(T::zero(), T::max)
    }
}

pub fn asymptotic_scale<T: Real>(config: &WalkConfig<T>, dark_overlap_zero: bool) -> Result<AsymptoticScale<T>> {
    Ok(pf_spectrum(config)?.scale(dark_overlap_zero))
}

/// Spectral survival estimate next to the directly iterated value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalEstimate<T> {
    pub attempts: usize,
    pub estimate: T,
    pub iterated: T,
    /// `estimate - iterated`.
    pub deviation: T,
}

pub fn survival_spectral_estimate<T: Real>(config: &WalkConfig<T>, n: usize) -> Result<SurvivalEstimate<T>> {
    let spectrum = pf_spectrum(config)?;
    let estimate = spectrum.survival_estimate(n);
    let iterated = if n == 0 { T::one() } else { survival_after(config, n) };
    Ok(SurvivalEstimate {
        attempts: n,
        estimate,
        iterated,
        deviation: estimate - iterated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::StateVector;
    use crate::ring::ring_propagator;
    use std::f64::consts::PI;

    #[test]
    fn tiny_period_is_projected_identity() {
        let cfg = WalkConfig::new(7, 3, 0.1, 1e-12, 1.0).unwrap();
        let o = build_pf_operator(&cfg);
        let mut want = ComplexMatrix::identity(7);
        want[(3, 3)] = Complex::new(0.0, 0.0);
        assert!(o.max_abs_diff(&want) < 1e-11);
    }

    #[test]
    fn null_mode() {
        let cfg = WalkConfig::<f64>::new(9, 4, -0.2, 1.7, 10.0).unwrap();
        let o = build_pf_operator(&cfg);
        let back = ring_propagator(9, -0.2, -1.7).unwrap();
        let v = back.mul_vec(StateVector::localized(9, 4).amplitudes());
        let ov = o.mul_vec(&v);
        assert!(crate::linalg::norm_sqr(&ov).sqrt() < 1e-12);
        let s = pf_spectrum(&cfg).unwrap();
        assert_eq!(s.eigenvalues.iter().filter(|m| m.norm() < 1e-9).count(), 1);
    }

    #[test]
    fn fully_bright_below_threshold() {
        let cfg = WalkConfig::new(21, 10, PI / 42.0, 1.0, 200.0).unwrap();
        let s = pf_spectrum(&cfg).unwrap();
        assert!(s.eigenvalues.iter().all(|m| m.norm() < 1.0 - 1e-9));
        assert_eq!(s.leading_modulus, s.subleading_modulus);
        assert!(s.t_asymptotic.is_finite());
    }

    #[test]
    fn lower_bound_period_has_unit_eigenvalue_for_even_ring() {
        let cfg = WalkConfig::new(20, 10, 0.0, PI / 2.0, 200.0).unwrap();
        let s = pf_spectrum(&cfg).unwrap();
        // Nine degenerate-level dark states plus the phase-matched (0, 10) one.
        assert_eq!(s.unit_modulus_count(), 10);
        assert!((s.leading_modulus - 1.0).abs() < 1e-9);
    }

    #[test]
    fn even_ring_degenerate_dark_modes_are_irrelevant() {
        let cfg = WalkConfig::<f64>::new(20, 10, 0.0, 1.0, 200.0).unwrap();
        let s = pf_spectrum(&cfg).unwrap();
        assert_eq!(s.unit_modulus_count(), 9);
        for (m, w) in s.eigenvalues.iter().zip(&s.overlaps) {
            if m.norm() >= 1.0 - 1e-9 {
                assert!(*w < 1e-20);
            }
        }
        assert!(s.dark_overlap_zero);
        let sc = s.scale(true);
        assert!(sc.is_finite());
        assert!((sc.gap - (1.0 - s.subleading_modulus)).abs() < 1e-15);
        assert_eq!(s.relevant_modulus(), s.subleading_modulus);
    }

    #[test]
    fn zeno_time_scale_diverges() {
        let cfg = WalkConfig::new(21, 10, PI / 42.0, 0.01, 200.0).unwrap();
        let sc = asymptotic_scale(&cfg, false).unwrap();
        assert!(sc.t_as > 1e3);
    }

    #[test]
    fn bright_configuration_saturates_within_ten_time_scales() {
        let cfg = WalkConfig::new(21, 10, PI / 42.0, 1.4, 200.0).unwrap();
        let sc = asymptotic_scale(&cfg, false).unwrap();
        assert!(sc.is_finite());
        let long = cfg.with_total_time(10.0 * sc.t_as).unwrap();
        let p = crate::monitored::detection_probability_at_budget(&long).unwrap();
        assert!(p > 0.99, "P_det = {p}");
    }

    #[test]
    fn estimate_at_zero_power_sums_weights() {
        let cfg = WalkConfig::new(6, 3, 0.1, 1.0, 10.0).unwrap();
        let s = pf_spectrum(&cfg).unwrap();
        let total: f64 = s.overlaps.iter().sum();
        assert!((s.survival_estimate(0) - total).abs() < 1e-15);
    }
}
