//! Stroboscopic monitoring: evolve for one period, project out the target
//! site, repeat. The surviving state is never renormalized; its squared norm
//! is the survival probability.

use num_complex::Complex;

use crate::config::WalkConfig;
use crate::error::{Result, WalkError};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::ring::propagator;
use crate::scalar::Real;

/// Largest attempt count stored densely by [`first_detection_series`].
pub const MAX_DENSE_ATTEMPTS: usize = 1_000_000;

/// Per-attempt first-detection statistics for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRecord<T> {
    pub config: WalkConfig<T>,
    pub attempts: usize,
    /// `F_m` for `m = 1..=attempts` (index 0 holds `F_1`).
    pub f_series: Vec<T>,
    /// Running sums of `f_series`.
    pub pdet_series: Vec<T>,
    /// Squared norm of the surviving state after each attempt.
    pub survival_series: Vec<T>,
}

impl<T: Real> DetectionRecord<T> {
    pub fn final_pdet(&self) -> T {
        *self.pdet_series.last().expect("at least one attempt")
    }
}

/// One detection attempt: `|ψ⟩ -> U|ψ⟩`, read `|⟨δ|Uψ⟩|²`, then zero the
/// target component.
pub fn monitored_step<T: Real>(
    state: &StateVector<T>,
    u: &ComplexMatrix<T>,
    delta: usize,
) -> (T, StateVector<T>) {
    let mut evolved = StateVector::from_amplitudes(u.mul_vec(state.amplitudes()));
    let p = evolved[delta].norm_sqr();
    evolved[delta] = Complex::new(T::zero(), T::zero());
    (p, evolved)
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct Accumulator<T> {
    sum: T,
    carry: T,
}

impl<T: Real> Accumulator<T> {
    fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    fn value(&self) -> T {
        self.sum + self.carry
    }
}

/// Runs the monitored evolution from `|0⟩`, calling `visit(m, F_m, P_det(m), S(m))`
/// after each attempt.
fn iterate<T: Real>(config: &WalkConfig<T>, attempts: usize, mut visit: impl FnMut(usize, T, T, T)) {
    let u = propagator(config, config.tau);
    let mut psi = StateVector::localized(config.n, 0).into_amplitudes();
    let mut scratch = psi.clone();
    let mut pdet = Accumulator::<T>::default();
    let zero = Complex::new(T::zero(), T::zero());
    for m in 1..=attempts {
        u.mul_vec_into(&psi, &mut scratch);
        std::mem::swap(&mut psi, &mut scratch);
        let f = psi[config.delta].norm_sqr();
        psi[config.delta] = zero;
        pdet.add(f);
        let survival = crate::linalg::norm_sqr(&psi);
        visit(m, f, pdet.value(), survival);
    }
}

pub fn first_detection_series<T: Real>(config: &WalkConfig<T>, n_max: usize) -> Result<DetectionRecord<T>> {
    if n_max == 0 {
        return Err(WalkError::InvalidArgument("n_max must be at least 1".into()));
    }
    if n_max > MAX_DENSE_ATTEMPTS {
        return Err(WalkError::TooManyAttempts {
            requested: n_max,
            limit: MAX_DENSE_ATTEMPTS,
        });
    }
    let mut f_series = Vec::with_capacity(n_max);
    let mut pdet_series = Vec::with_capacity(n_max);
    let mut survival_series = Vec::with_capacity(n_max);
    iterate(config, n_max, |_, f, p, s| {
        f_series.push(f);
        pdet_series.push(p);
        survival_series.push(s);
    });
    Ok(DetectionRecord {
        config: *config,
        attempts: n_max,
        f_series,
        pdet_series,
        survival_series,
    })
}

/// `P_det` after `floor(T/τ)` attempts, without storing the series.
pub fn detection_probability_at_budget<T: Real>(config: &WalkConfig<T>) -> Result<T> {
    let attempts = config.attempts()?;
    detection_probability_after(config, attempts)
}

/// `P_det(n)` for an explicit attempt count, without storing the series.
pub fn detection_probability_after<T: Real>(config: &WalkConfig<T>, attempts: usize) -> Result<T> {
    if attempts == 0 {
        return Err(WalkError::InvalidArgument("attempt count must be at least 1".into()));
    }
    let mut last = T::zero();
    iterate(config, attempts, |_, _, p, _| last = p);
    Ok(last)
}

/// Survival probability `S(n)` for an explicit attempt count.
pub fn survival_after<T: Real>(config: &WalkConfig<T>, attempts: usize) -> T {
    let mut last = T::one();
    iterate(config, attempts, |_, _, _, s| last = s);
    last
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::unitary_transfer_probability;
    use std::f64::consts::PI;

    #[test]
    fn step_with_identity_and_no_target_amplitude() {
        let u = ComplexMatrix::<f64>::identity(5);
        let s = StateVector::localized(5, 1);
        let (p, out) = monitored_step(&s, &u, 3);
        assert_eq!(p, 0.0);
        assert_eq!(out, s);
    }

    #[test]
    fn step_with_full_projection() {
        let u = ComplexMatrix::<f64>::identity(5);
        let s = StateVector::localized(5, 3);
        let (p, out) = monitored_step(&s, &u, 3);
        assert_eq!(p, 1.0);
        assert_eq!(out.norm_sqr(), 0.0);
    }

    #[test]
    fn first_step_matches_unitary_transfer() {
        let cfg = WalkConfig::<f64>::new(4, 2, 0.0, 1.0, 10.0).unwrap();
        let u = propagator(&cfg, 1.0);
        let (p, _) = monitored_step(&StateVector::localized(4, 0), &u, 2);
        assert!((p - unitary_transfer_probability(&cfg, 1.0)).abs() < 1e-15);

        let rec = first_detection_series(&cfg, 1).unwrap();
        assert_eq!(rec.f_series[0], rec.pdet_series[0]);
        assert!((rec.f_series[0] - p).abs() < 1e-15);
    }

    #[test]
    fn dark_phase_is_never_detected() {
        let cfg = WalkConfig::new(20, 10, PI / 20.0, 0.7, 200.0).unwrap();
        let rec = first_detection_series(&cfg, 300).unwrap();
        assert!(rec.pdet_series.iter().all(|&p| p < 1e-10));
    }

    #[test]
    fn norm_bookkeeping_and_monotonicity() {
        let cfg = WalkConfig::<f64>::new(13, 6, 0.11, 0.9, 200.0).unwrap();
        let rec = first_detection_series(&cfg, 2000).unwrap();
        let mut prev_s = 1.0;
        let mut prev_p = 0.0;
        for ((f, p), s) in rec.f_series.iter().zip(&rec.pdet_series).zip(&rec.survival_series) {
            assert!(*f >= 0.0);
            assert!((p + s - 1.0).abs() < 1e-12);
            assert!(*s <= prev_s + 1e-15 && *p >= prev_p);
            prev_s = *s;
            prev_p = *p;
        }
        assert!(rec.final_pdet() <= 1.0 + 1e-12);
    }

    #[test]
    fn budget_validation() {
        let cfg = WalkConfig::new(21, 10, 0.0, 3.0, 2.0).unwrap();
        assert!(matches!(
            detection_probability_at_budget(&cfg),
            Err(WalkError::InvalidBudget { .. })
        ));
        assert!(first_detection_series(&cfg, 0).is_err());
        assert!(matches!(
            first_detection_series(&cfg, MAX_DENSE_ATTEMPTS + 1),
            Err(WalkError::TooManyAttempts { .. })
        ));
    }

    #[test]
    fn budget_equals_series_endpoint() {
        let cfg = WalkConfig::new(11, 5, 0.05, 1.3, 60.0).unwrap();
        let rec = first_detection_series(&cfg, cfg.attempts().unwrap()).unwrap();
        assert_eq!(detection_probability_at_budget(&cfg).unwrap(), rec.final_pdet());
    }

    #[test]
    fn zeno_suppression_with_shrinking_period() {
        let phi = PI / 42.0;
        let p = |tau: f64| {
            detection_probability_at_budget(&WalkConfig::new(21, 10, phi, tau, 200.0).unwrap()).unwrap()
        };
        let (a, b, c) = (p(0.02), p(0.005), p(0.001));
        assert!(a > b && b > c);
        assert!(c < 0.05, "P_det(tau=0.001) = {c}");
    }
}
