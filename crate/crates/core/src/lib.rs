//! Monitored chiral quantum walk on a ring of `N` sites.
//!
//! A walker hops on the ring under a flux-threaded tight-binding Hamiltonian
//! and is measured at a target site every `τ`. The crate computes the
//! first-detection statistics, the spectrum of the survival operator, the
//! dark subspace that blocks detection, and the protocol `(φ, τ)` that
//! maximizes detection within a time budget.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! `f64`.

pub mod config;
pub mod dark;
pub mod error;
pub mod linalg;
pub mod monitored;
pub mod optimize;
pub mod pf;
pub mod ring;
pub mod scalar;

pub use config::WalkConfig;
pub use dark::{
    dark_curves, dark_report, dark_state_count_in_window, dark_state_from_pair, default_k_max,
    degenerate_pairs, min_phase_matching_tau, phase_matching_phis, phase_matching_tau,
    DarkCurvePoint, DarkOrigin, DarkReport, DarkResiduals, DarkState, PhaseMatch,
};
pub use error::{Result, WalkError};
pub use linalg::{eig, ComplexMatrix, EigenPair, StateVector};
pub use monitored::{
    detection_probability_after, detection_probability_at_budget, first_detection_series,
    monitored_step, survival_after, DetectionRecord, MAX_DENSE_ATTEMPTS,
};
pub use optimize::{
    default_phi_grid, default_tau_grid, default_tau_scan, golden_section_max, golden_section_min,
    linspace, optimize, optimize_with, pdet_grid, pdet_vs_size_and_budget, pf_grid,
    relevant_modulus, sweep, tas_vs_tau, tau_pf, tau_star, tau_star_with_scan, OptimizeOptions,
    Optimum, PdetCell, PfCell, Saturation, SizeBudget, SizeBudgetRow, SweepGrid, SweepSpec,
    TasPoint, TauStar, SATURATION_FRACTION, TAU_STAR_DISAGREEMENT,
};
pub use pf::{
    asymptotic_scale, build_pf_operator, pf_spectrum, survival_spectral_estimate,
    AsymptoticScale, PFSpectrum, SurvivalEstimate,
};
pub use ring::{
    analytic_spectrum, build_hamiltonian, eigenvalue, eigenvector_component, propagator,
    ring_propagator, root_of_unity, unitary_transfer_probability, Spectrum,
};
pub use scalar::Real;

pub use num_complex::Complex;

pub type Config = WalkConfig<f64>;
pub type Matrix = ComplexMatrix<f64>;
pub type State = StateVector<f64>;
pub type Record = DetectionRecord<f64>;
pub type PfSpectrum64 = PFSpectrum<f64>;
pub type Report = DarkReport<f64>;
pub type Optimum64 = Optimum<f64>;
pub type Grid = SweepGrid<f64>;
