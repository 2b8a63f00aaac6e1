use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::scalar::Real;

/// Amplitudes over the ring's site basis.
///
/// States produced by monitored evolution are kept unnormalized: their squared
/// norm is the survival probability.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            amplitudes: vec![Complex::new(T::zero(), T::zero()); dim],
        }
    }

    /// Localized state `|site⟩`.
    pub fn localized(dim: usize, site: usize) -> Self {
        let mut s = Self::zeros(dim);
        s.amplitudes[site] = Complex::new(T::one(), T::zero());
        s
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        super::norm_sqr(&self.amplitudes)
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        super::inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > T::zero() {
            let inv = T::one() / n;
            self.amplitudes.iter_mut().for_each(|z| *z = z.scale(inv));
        }
        self
    }
}

impl<T> Index<usize> for StateVector<T> {
    type Output = Complex<T>;

    fn index(&self, i: usize) -> &Complex<T> {
        &self.amplitudes[i]
    }
}

impl<T> IndexMut<usize> for StateVector<T> {
    fn index_mut(&mut self, i: usize) -> &mut Complex<T> {
        &mut self.amplitudes[i]
    }
}
