//! Eigendecomposition of general complex matrices.
//!
//! Householder reduction to upper Hessenberg form, then the complex
//! single-shift QR algorithm (Wilkinson shifts, exceptional shifts on
//! stagnation) to reach the Schur form `A = Z T Z^H`. Right eigenvectors come
//! from back-substitution on the triangular factor.

use num_complex::Complex;

use super::ComplexMatrix;
use crate::scalar::Real;

/// Eigenvalue with its unit-norm right eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<T> {
    pub value: Complex<T>,
    pub vector: Vec<Complex<T>>,
}

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Computes all eigenpairs of `a`, in the order they deflate from the Schur
/// form. Returns `None` when the QR iteration fails to converge.
pub fn eig<T: Real>(a: &ComplexMatrix<T>) -> Option<Vec<EigenPair<T>>> {
    let n = a.dim();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut h = a.clone();
    let mut z = ComplexMatrix::identity(n);
    hessenberg(&mut h, &mut z);
    schur(&mut h, &mut z)?;
    Some(triangular_eigenvectors(&h, &z))
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// In-place Householder reduction; accumulates the transforms into `z`.
fn hessenberg<T: Real>(h: &mut ComplexMatrix<T>, z: &mut ComplexMatrix<T>) {
    let n = h.dim();
    if n < 3 {
        return;
    }
    let two = T::lit(2.0);
    for k in 0..n - 2 {
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|r| h[(r, k)]).collect();
        let alpha = v.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
        if alpha == T::zero() {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == T::zero() {
            Complex::new(T::one(), T::zero())
        } else {
            x0 / x0.norm()
        };
        // v = x + e^{i arg x0} |x| e_1 avoids cancellation.
        v[0] = x0 + phase * alpha;
        let vnorm2: T = v.iter().map(|x| x.norm_sqr()).sum();
        if vnorm2 == T::zero() {
            continue;
        }
        let beta = two / vnorm2;

        // H <- P H, P = I - beta v v^H acting on rows k+1..n.
        for c in 0..n {
            let mut s = czero::<T>();
            for (i, vi) in v.iter().enumerate() {
                s = s + vi.conj() * h[(k + 1 + i, c)];
            }
            let s = s * beta;
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, c)] = h[(k + 1 + i, c)] - vi * s;
            }
        }
        // H <- H P, and Z <- Z P.
        for m in [&mut *h, &mut *z] {
            for r in 0..n {
                let mut s = czero::<T>();
                for (i, vi) in v.iter().enumerate() {
                    s = s + m[(r, k + 1 + i)] * vi;
                }
                let s = s * beta;
                for (i, vi) in v.iter().enumerate() {
                    m[(r, k + 1 + i)] = m[(r, k + 1 + i)] - s * vi.conj();
                }
            }
        }
        for r in k + 2..n {
            h[(r, k)] = czero();
        }
    }
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G [a; b] = [r; 0]`.
fn givens<T: Real>(a: Complex<T>, b: Complex<T>) -> (T, Complex<T>) {
    let bn = b.norm();
    if bn == T::zero() {
        return (T::one(), czero());
    }
    let an = a.norm();
    if an == T::zero() {
        return (T::zero(), b.conj() / bn);
    }
    let nrm = an.hypot(bn);
    let c = an / nrm;
    let s = (a / an) * b.conj() / nrm;
    (c, s)
}

fn wilkinson_shift<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let mean = (a + d).scale(half);
    let diff = (a - d).scale(half);
    let disc = (diff * diff + b * c).sqrt();
    let mu1 = mean + disc;
    let mu2 = mean - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// Complex QR iteration on a Hessenberg matrix, producing the full upper
/// triangular Schur factor in `h` and the accumulated unitary in `z`.
fn schur<T: Real>(h: &mut ComplexMatrix<T>, z: &mut ComplexMatrix<T>) -> Option<()> {
    let n = h.dim();
    let eps = T::epsilon();
    let hnorm = h.frobenius_norm().max(T::min_positive_value());
    let mut hi = n - 1;
    let mut iters = 0usize;
    let mut total = 0usize;
    let budget = MAX_SWEEPS_PER_EIGENVALUE * n.max(1);

    while hi > 0 {
        // Locate the top of the active unreduced block.
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if scale == T::zero() {
                scale = hnorm;
            }
            if sub <= eps * scale {
                h[(l, l - 1)] = czero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        total += 1;
        if total > budget {
            return None;
        }

        let shift = if iters % 11 == 0 {
            // Exceptional shift breaks cycles of the standard shift.
            h[(hi, hi)] + Complex::new(h[(hi, hi - 1)].norm() * T::lit(0.75), T::zero())
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        let mut x = h[(l, l)] - shift;
        let mut y = h[(l + 1, l)];
        for k in l..hi {
            if k > l {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let cc = Complex::new(c, T::zero());
            // Rows k, k+1 (columns from the bulge onwards to keep the full T).
            let start = if k > l { k - 1 } else { l };
            for col in start..n {
                let a = h[(k, col)];
                let b = h[(k + 1, col)];
                h[(k, col)] = cc * a + s * b;
                h[(k + 1, col)] = -s.conj() * a + cc * b;
            }
            if k > l {
                h[(k + 1, k - 1)] = czero();
            }
            // Columns k, k+1.
            let stop = (k + 2).min(hi);
            for row in 0..=stop {
                let a = h[(row, k)];
                let b = h[(row, k + 1)];
                h[(row, k)] = a * cc + b * s.conj();
                h[(row, k + 1)] = -a * s + b * cc;
            }
            for row in 0..n {
                let a = z[(row, k)];
                let b = z[(row, k + 1)];
                z[(row, k)] = a * cc + b * s.conj();
                z[(row, k + 1)] = -a * s + b * cc;
            }
        }
    }
    Some(())
}

fn triangular_eigenvectors<T: Real>(t: &ComplexMatrix<T>, z: &ComplexMatrix<T>) -> Vec<EigenPair<T>> {
    let n = t.dim();
    let eps = T::epsilon();
    let tnorm = t.frobenius_norm();
    let smin = (eps * tnorm).max(T::min_positive_value());
    let mut pairs = Vec::with_capacity(n);
    let mut x = vec![czero::<T>(); n];
    for k in 0..n {
        let lambda = t[(k, k)];
        x.iter_mut().for_each(|v| *v = czero());
        x[k] = Complex::new(T::one(), T::zero());
        for i in (0..k).rev() {
            let mut s = czero::<T>();
            for j in i + 1..=k {
                s = s + t[(i, j)] * x[j];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < smin {
                d = Complex::new(smin, T::zero());
            }
            x[i] = -s / d;
            // Rescale to keep growth bounded for clustered eigenvalues.
            let big = x[i].norm();
            if big > T::lit(1e100).min(T::max_value().sqrt()) {
                let inv = T::one() / big;
                for v in x.iter_mut().take(k + 1) {
                    *v = v.scale(inv);
                }
            }
        }
        let mut v = vec![czero::<T>(); n];
        for (r, vr) in v.iter_mut().enumerate() {
            let mut s = czero::<T>();
            for j in 0..=k {
                s = s + z[(r, j)] * x[j];
            }
            *vr = s;
        }
        let nrm = super::norm_sqr(&v).sqrt();
        if nrm > T::zero() {
            let inv = T::one() / nrm;
            v.iter_mut().for_each(|c| *c = c.scale(inv));
        }
        pairs.push(EigenPair { value: lambda, vector: v });
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn residual(a: &ComplexMatrix<f64>, p: &EigenPair<f64>) -> f64 {
        let av = a.mul_vec(&p.vector);
        av.iter()
            .zip(&p.vector)
            .map(|(x, v)| (x - p.value * v).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn random_complex_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 3, 5, 8, 13, 25, 40] {
            let a = ComplexMatrix::from_fn(n, |_, _| {
                Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let pairs = eig(&a).expect("converges");
            assert_eq!(pairs.len(), n);
            let scale = a.frobenius_norm();
            for p in &pairs {
                assert!(residual(&a, p) < 1e-11 * scale.max(1.0), "n={n}");
            }
            // Trace equals the eigenvalue sum.
            let tr: Complex<f64> = (0..n).map(|i| a[(i, i)]).sum();
            let sum: Complex<f64> = pairs.iter().map(|p| p.value).sum();
            assert!((tr - sum).norm() < 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn diagonal_and_jordan_like() {
        let d = ComplexMatrix::from_fn(4, |r, c| {
            if r == c {
                Complex::new(r as f64, -(r as f64))
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        let mut vals: Vec<_> = eig(&d).unwrap().into_iter().map(|p| p.value).collect();
        vals.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (i, v) in vals.iter().enumerate() {
            assert!((v - Complex::new(i as f64, -(i as f64))).norm() < 1e-14);
        }

        // Nilpotent shift: all eigenvalues zero.
        let j = ComplexMatrix::from_fn(5, |r, c| {
            if c == r + 1 {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        for p in eig(&j).unwrap() {
            assert!(p.value.norm() < 1e-12);
        }
    }

    #[test]
    fn cyclic_permutation_has_roots_of_unity() {
        let n = 7;
        let p = ComplexMatrix::from_fn(n, |r, c| {
            if r == (c + 1) % n {
                Complex::new(1.0f64, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        let pairs = eig(&p).unwrap();
        for pr in &pairs {
            assert!((pr.value.norm() - 1.0).abs() < 1e-12);
            assert!(residual(&p, pr) < 1e-12);
        }
    }

    #[test]
    fn single_precision_smoke() {
        let a = ComplexMatrix::<f32>::from_fn(4, |r, c| Complex::new((r * 4 + c) as f32 * 0.1, (r as f32) - (c as f32)));
        let pairs = eig(&a).unwrap();
        for p in &pairs {
            let av = a.mul_vec(&p.vector);
            let res: f32 = av
                .iter()
                .zip(&p.vector)
                .map(|(x, v)| (x - p.value * v).norm_sqr())
                .sum::<f32>()
                .sqrt();
            assert!(res < 1e-4);
        }
    }
}
