//! Small dense complex linear algebra: square matrices, state vectors and a
//! general (non-Hermitian) eigensolver.

mod eigen;
mod matrix;
mod state;

pub use eigen::{eig, EigenPair};
pub use matrix::ComplexMatrix;
pub use state::StateVector;

use num_complex::Complex;

use crate::scalar::Real;

/// `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

pub fn norm_sqr<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Vectors whose
/// residual norm drops below `drop_tol` are discarded as linearly dependent.
pub fn orthonormalize<T: Real>(vectors: &[Vec<Complex<T>>], drop_tol: T) -> Vec<Vec<Complex<T>>> {
    let mut basis: Vec<Vec<Complex<T>>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = inner(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi = *wi - c * qi;
                }
            }
        }
        let nrm = norm_sqr(&w).sqrt();
        if nrm > drop_tol {
            let inv = T::one() / nrm;
            w.iter_mut().for_each(|z| *z = z.scale(inv));
            basis.push(w);
        }
    }
    basis
}
