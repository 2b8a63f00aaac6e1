use crate::error::{Result, WalkError};
use crate::scalar::Real;

/// One monitored-walk experiment: ring size, target site, chiral phase,
/// detection period and total observation budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig<T> {
    pub n: usize,
    pub delta: usize,
    pub phi: T,
    pub tau: T,
    pub total_time: T,
    pub tol_degenerate: T,
    pub tol_unit: T,
}

impl<T: Real> WalkConfig<T> {
    /// Validated constructor with the scalar type's default tolerances.
    pub fn new(n: usize, delta: usize, phi: T, tau: T, total_time: T) -> Result<Self> {
        let cfg = Self {
            n,
            delta,
            phi,
            tau,
            total_time,
            tol_degenerate: T::lit(T::TOL_DEGENERATE),
            tol_unit: T::lit(T::TOL_UNIT),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Site opposite the start: `N/2` for even `N`, `(N-1)/2` for odd `N`.
    pub fn opposite_site(n: usize) -> usize {
        if n % 2 == 0 {
            n / 2
        } else {
            (n - 1) / 2
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_ring(self.n)?;
        if self.delta == 0 || self.delta >= self.n {
            return Err(WalkError::InvalidTarget {
                n: self.n,
                delta: self.delta,
            });
        }
        check_phase(self.n, self.phi)?;
        check_positive("tau", self.tau)?;
        check_positive("total_time", self.total_time)?;
        check_positive("tol_degenerate", self.tol_degenerate)?;
        check_positive("tol_unit", self.tol_unit)?;
        Ok(())
    }

    /// Attempt count `floor(T / tau)`; errors when no attempt fits the budget.
    pub fn attempts(&self) -> Result<usize> {
        let n = (self.total_time / self.tau).floor();
        if !(n >= T::one()) {
            return Err(WalkError::InvalidBudget {
                tau: self.tau.as_f64(),
                total_time: self.total_time.as_f64(),
            });
        }
        n.to_usize().ok_or(WalkError::InvalidBudget {
            tau: self.tau.as_f64(),
            total_time: self.total_time.as_f64(),
        })
    }

    pub fn with_phi(mut self, phi: T) -> Result<Self> {
        self.phi = phi;
        self.validate()?;
        Ok(self)
    }

    pub fn with_tau(mut self, tau: T) -> Result<Self> {
        self.tau = tau;
        self.validate()?;
        Ok(self)
    }

    pub fn with_delta(mut self, delta: usize) -> Result<Self> {
        self.delta = delta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_total_time(mut self, total_time: T) -> Result<Self> {
        self.total_time = total_time;
        self.validate()?;
        Ok(self)
    }
}

pub(crate) fn check_ring(n: usize) -> Result<()> {
    if n < 3 {
        Err(WalkError::TooFewSites(n))
    } else {
        Ok(())
    }
}

/// Accepts `|phi| <= pi/N` up to a few ulps so that `±PI / N` literals pass.
pub(crate) fn check_phase<T: Real>(n: usize, phi: T) -> Result<()> {
    let bound = T::PI() / T::from_usize_lossy(n);
    let slack = bound * T::epsilon() * T::lit(8.0);
    if !phi.is_finite() || phi.abs() > bound + slack {
        return Err(WalkError::PhaseOutOfRange {
            n,
            phi: phi.as_f64(),
        });
    }
    Ok(())
}

fn check_positive<T: Real>(name: &'static str, value: T) -> Result<()> {
    if !(value.is_finite() && value > T::zero()) {
        return Err(WalkError::NonPositive {
            name,
            value: value.as_f64(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(WalkConfig::new(2, 1, 0.0, 1.0, 10.0), Err(WalkError::TooFewSites(2)));
        assert!(matches!(
            WalkConfig::new(5, 0, 0.0, 1.0, 10.0),
            Err(WalkError::InvalidTarget { .. })
        ));
        assert!(matches!(
            WalkConfig::new(5, 5, 0.0, 1.0, 10.0),
            Err(WalkError::InvalidTarget { .. })
        ));
        assert!(matches!(
            WalkConfig::new(21, 10, 1.0, 1.0, 10.0),
            Err(WalkError::PhaseOutOfRange { .. })
        ));
        assert!(matches!(
            WalkConfig::new(21, 10, 0.0, 0.0, 10.0),
            Err(WalkError::NonPositive { name: "tau", .. })
        ));
        assert!(matches!(
            WalkConfig::new(21, 10, 0.0, 1.0, -1.0),
            Err(WalkError::NonPositive { name: "total_time", .. })
        ));
    }

    #[test]
    fn phase_bound_is_inclusive() {
        assert!(WalkConfig::new(20, 10, PI / 20.0, 1.0, 200.0).is_ok());
        assert!(WalkConfig::new(20, 10, -PI / 20.0, 1.0, 200.0).is_ok());
        assert!(WalkConfig::<f32>::new(20, 10, std::f32::consts::PI / 20.0, 1.0, 200.0).is_ok());
    }

    #[test]
    fn attempts_floor_budget() {
        let c = WalkConfig::new(21, 10, 0.0, 1.4, 200.0).unwrap();
        assert_eq!(c.attempts().unwrap(), 142);
        let c = WalkConfig::new(21, 10, 0.0, 3.0, 2.0).unwrap();
        assert!(matches!(c.attempts(), Err(WalkError::InvalidBudget { .. })));
    }

    #[test]
    fn opposite_site() {
        assert_eq!(WalkConfig::<f64>::opposite_site(20), 10);
        assert_eq!(WalkConfig::<f64>::opposite_site(21), 10);
    }
}
