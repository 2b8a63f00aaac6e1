//! Chiral ring Hamiltonian, its closed-form spectrum and the propagator built
//! from it. Units: hbar = 1 and unit hopping amplitude.

use num_complex::Complex;

use crate::config::{check_ring, WalkConfig};
use crate::error::Result;
use crate::linalg::{ComplexMatrix, StateVector};
use crate::scalar::Real;

/// `exp(2 pi i p / n)` with `p` reduced modulo `n` before the angle is formed.
pub fn root_of_unity<T: Real>(n: usize, p: i64) -> Complex<T> {
    let r = p.rem_euclid(n as i64) as usize;
    let theta = T::TAU() * T::from_usize_lossy(r) / T::from_usize_lossy(n);
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

/// `λ_j = 2 cos(φ - 2πj/N)`.
pub fn eigenvalue<T: Real>(n: usize, phi: T, j: usize) -> T {
    let two = T::lit(2.0);
    two * (phi - T::TAU() * T::from_usize_lossy(j) / T::from_usize_lossy(n)).cos()
}

/// `⟨k|λ_j⟩ = exp(-2πi jk/N) / sqrt(N)`.
///
/// The sign of the exponent is the one that makes `|λ_j⟩` an eigenvector of
/// [`build_hamiltonian`] with eigenvalue [`eigenvalue`]`(n, phi, j)`; the
/// opposite sign would pair `λ_j` with the mirror chirality `-φ`.
pub fn eigenvector_component<T: Real>(n: usize, j: usize, k: usize) -> Complex<T> {
    root_of_unity::<T>(n, -((j * k % n) as i64)).unscale(T::from_usize_lossy(n).sqrt())
}

/// Hamiltonian with `H[(j+1) mod N, j] = e^{-iφ}` and `H[(j-1) mod N, j] = e^{+iφ}`.
pub fn build_hamiltonian<T: Real>(n: usize, phi: T) -> Result<ComplexMatrix<T>> {
    check_ring(n)?;
    let (s, c) = phi.sin_cos();
    let forward = Complex::new(c, -s);
    let backward = Complex::new(c, s);
    let mut h = ComplexMatrix::zeros(n);
    for j in 0..n {
        h[((j + 1) % n, j)] = forward;
        h[((j + n - 1) % n, j)] = backward;
    }
    Ok(h)
}

/// Closed-form eigenpairs of the ring Hamiltonian, indexed `j = 0..N-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub n: usize,
    pub phi: T,
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Vec<StateVector<T>>,
}

pub fn analytic_spectrum<T: Real>(n: usize, phi: T) -> Result<Spectrum<T>> {
    check_ring(n)?;
    let eigenvalues = (0..n).map(|j| eigenvalue(n, phi, j)).collect();
    let eigenvectors = (0..n)
        .map(|j| {
            StateVector::from_amplitudes((0..n).map(|k| eigenvector_component(n, j, k)).collect())
        })
        .collect();
    Ok(Spectrum {
        n,
        phi,
        eigenvalues,
        eigenvectors,
    })
}

/// Generating column of the circulant propagator:
/// `c_d = (1/N) Σ_j exp(-i λ_j t) exp(-2πi jd/N)`, so that `U[a, b] = c_{(a-b) mod N}`.
fn circulant_column<T: Real>(n: usize, phi: T, t: T) -> Vec<Complex<T>> {
    let phases: Vec<Complex<T>> = (0..n)
        .map(|j| {
            let (s, c) = (eigenvalue(n, phi, j) * t).sin_cos();
            Complex::new(c, -s)
        })
        .collect();
    let inv_n = T::one() / T::from_usize_lossy(n);
    (0..n)
        .map(|d| {
            phases
                .iter()
                .enumerate()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (j, ph)| {
                    acc + ph * root_of_unity::<T>(n, -((j * d % n) as i64))
                })
                .scale(inv_n)
        })
        .collect()
}

/// `U(t) = Σ_j exp(-i λ_j t) |λ_j⟩⟨λ_j|` for an `N`-site ring at phase `phi`.
pub fn ring_propagator<T: Real>(n: usize, phi: T, t: T) -> Result<ComplexMatrix<T>> {
    check_ring(n)?;
    let col = circulant_column(n, phi, t);
    Ok(ComplexMatrix::from_fn(n, |a, b| col[(a + n - b) % n]))
}

pub fn propagator<T: Real>(config: &WalkConfig<T>, t: T) -> ComplexMatrix<T> {
    ring_propagator(config.n, config.phi, t).expect("validated config")
}

/// `|⟨δ|U(t)|0⟩|²` under purely unitary evolution.
pub fn unitary_transfer_probability<T: Real>(config: &WalkConfig<T>, t: T) -> T {
    circulant_column(config.n, config.phi, t)[config.delta].norm_sqr()
}
