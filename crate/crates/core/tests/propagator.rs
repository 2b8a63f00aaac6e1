use std::f64::consts::PI;

use num_complex::Complex64 as C;
use proptest::prelude::*;
use ringwalk::{
    analytic_spectrum, build_hamiltonian, ring_propagator, unitary_transfer_probability, Config, Matrix,
};

/// exp(-iHt) by scaling and squaring of a truncated Taylor series.
fn expm_taylor(h: &Matrix, t: f64) -> Matrix {
    let n = h.dim();
    let mut s = 0;
    let mut scale = t.abs() * h.frobenius_norm();
    while scale > 0.5 {
        scale /= 2.0;
        s += 1;
    }
    let a = h.scale(C::new(0.0, -t / f64::powi(2.0, s)));
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=30 {
        term = term.matmul(&a).scale(C::new(1.0 / k as f64, 0.0));
        sum = Matrix::from_fn(n, |r, c| sum[(r, c)] + term[(r, c)]);
    }
    for _ in 0..s {
        sum = sum.matmul(&sum);
    }
    sum
}

fn shift(n: usize) -> Matrix {
    Matrix::from_fn(n, |r, c| if r == (c + 1) % n { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) })
}

#[test]
fn analytic_propagator_matches_series_exponential() {
    for (n, phi, t) in [(6, PI / 12.0, 1.3), (7, -PI / 7.0, 4.0), (11, 0.05, 0.2), (21, PI / 42.0, 2.5)] {
        let h = build_hamiltonian(n, phi).unwrap();
        let u = ring_propagator(n, phi, t).unwrap();
        let diff = u.max_abs_diff(&expm_taylor(&h, t));
        assert!(diff < 1e-9, "N={n} phi={phi} t={t}: {diff:e}");
    }
}

#[test]
fn site_translation_commutes_with_hamiltonian() {
    for n in [3, 8, 21] {
        let phi = 0.7 * PI / n as f64;
        let h = build_hamiltonian(n, phi).unwrap();
        let p = shift(n);
        let conj = p.matmul(&h).matmul(&p.adjoint());
        assert_eq!(conj.max_abs_diff(&h), 0.0);
        let u = ring_propagator(n, phi, 1.7).unwrap();
        for a in 0..n {
            for b in 0..n {
                assert!((u[((a + 1) % n, (b + 1) % n)] - u[(a, b)]).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn analytic_eigenpairs_have_small_residual() {
    let (n, phi) = (21, 0.1);
    let h = build_hamiltonian(n, phi).unwrap();
    let s = analytic_spectrum(n, phi).unwrap();
    for (l, v) in s.eigenvalues.iter().zip(&s.eigenvectors) {
        let hv = h.mul_vec(v.amplitudes());
        let r: f64 = hv
            .iter()
            .zip(v.amplitudes())
            .map(|(a, b)| (a - b * l).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(r < 1e-10, "{r:e}");
        assert!((v.norm() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn transfer_probability_equals_spectral_sum() {
    let (n, delta, phi, t) = (21, 10, PI / 42.0, 5.0);
    let s = analytic_spectrum(n, phi).unwrap();
    let amp: C = s
        .eigenvalues
        .iter()
        .zip(&s.eigenvectors)
        .map(|(l, v)| C::from_polar(1.0, -l * t) * v[delta] * v[0].conj())
        .sum();
    let cfg = Config::new(n, delta, phi, 1.0, 10.0).unwrap();
    assert!((unitary_transfer_probability(&cfg, t) - amp.norm_sqr()).abs() < 1e-12);
}

fn ring_and_phase() -> impl Strategy<Value = (usize, f64)> {
    (3usize..30).prop_flat_map(|n| {
        let b = PI / n as f64;
        (Just(n), -b..=b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamiltonian_is_hermitian((n, phi) in ring_and_phase()) {
        let h = build_hamiltonian(n, phi).unwrap();
        prop_assert!(h.max_abs_diff(&h.adjoint()) < 1e-14);
    }

    #[test]
    fn propagator_is_unitary_and_composes((n, phi) in ring_and_phase(), t1 in -20.0f64..20.0, t2 in -20.0f64..20.0) {
        let u1 = ring_propagator(n, phi, t1).unwrap();
        let u2 = ring_propagator(n, phi, t2).unwrap();
        let u12 = ring_propagator(n, phi, t1 + t2).unwrap();
        prop_assert!(u1.adjoint().matmul(&u1).max_abs_diff(&Matrix::identity(n)) < 1e-10);
        prop_assert!(u1.matmul(&u2).max_abs_diff(&u12) < 1e-9);
    }
}

#[test]
fn single_precision_propagator_is_unitary() {
    let u = ring_propagator::<f32>(9, 0.2, 3.0).unwrap();
    let id = ringwalk::ComplexMatrix::<f32>::identity(9);
    assert!(u.adjoint().matmul(&u).max_abs_diff(&id) < 1e-5);
}
