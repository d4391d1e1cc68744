//! Hermitian eigendecomposition via cyclic complex Jacobi rotations.
//!
//! Jacobi is O(n³) per sweep but bulletproof for the dimensions this crate
//! handles (≤ ~2048, typically ≤ 256), and the accumulated eigenvector
//! matrix is unitary by construction.

use crate::error::{Error, Result};
use crate::linalg::matrix::CMatrix;
use crate::scalar::Scalar;
use num_complex::Complex;

/// Hermiticity tolerance fixed repo-wide (max-norm).
pub const HERMITICITY_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix.
///
/// Checks Hermiticity within 1e-10 in max-norm, symmetrizes as (M+M†)/2 to
/// absorb roundoff, and returns eigenvalues in ascending order together with
/// the unitary of eigenvectors (columns), so that M = V diag(λ) V†.
pub fn hermitian_eig<T: Scalar>(m: &CMatrix<T>) -> Result<(Vec<T>, CMatrix<T>)> {
    if !m.is_square() {
        return Err(Error::bad_shape(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    m.check_hermitian(T::tol(HERMITICITY_TOL))?;
    let a = m.symmetrize();
    jacobi_eig(a)
}

/// Jacobi on an already-Hermitian matrix. Internal entry point for callers
/// that construct Hermitian matrices structurally (Gram matrices etc.).
pub(crate) fn jacobi_eig<T: Scalar>(mut a: CMatrix<T>) -> Result<(Vec<T>, CMatrix<T>)> {
    let n = a.rows();
    let mut v = CMatrix::<T>::identity(n);
    if n <= 1 {
        let evals = (0..n).map(|i| a[(i, i)].re).collect();
        return Ok((evals, v));
    }

    let scale = a.max_norm().max(T::one());
    let threshold = scale * T::epsilon() * T::from_count(n.max(2));

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, threshold);
            }
        }
    }
    if !converged {
        // one final check: the loop may have converged on its last sweep
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off > threshold {
            return Err(Error::EigNotConverged { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let evals_raw: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| evals_raw[i].partial_cmp(&evals_raw[j]).unwrap());

    let evals: Vec<T> = order.iter().map(|&i| evals_raw[i]).collect();
    let vecs = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((evals, vecs))
}

/// One complex Jacobi rotation zeroing A[p,q].
///
/// The phase of A[p,q] is absorbed first so the 2×2 block reduces to the
/// classical real-symmetric rotation (Golub & Van Loan §8.4).
fn rotate<T: Scalar>(a: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize, tiny: T) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= tiny {
        a[(p, q)] = Complex::new(T::zero(), T::zero());
        a[(q, p)] = Complex::new(T::zero(), T::zero());
        return;
    }
    let n = a.rows();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / Complex::new(mag, T::zero());

    let tau = (aqq - app) / (mag * T::real(2.0));
    let t = {
        let s = if tau >= T::zero() { T::one() } else { -T::one() };
        s / (tau.abs() + (T::one() + tau * tau).sqrt())
    };
    let cos = T::one() / (T::one() + t * t).sqrt();
    let sin = t * cos;

    // column rotation R restricted to (p,q):
    //   R[p,p] = c            R[p,q] = s
    //   R[q,p] = -s·conj(u)   R[q,q] = c·conj(u)     with u = phase
    let cc = Complex::new(cos, T::zero());
    let ss = Complex::new(sin, T::zero());
    let rqp = -ss * phase.conj();
    let rqq = cc * phase.conj();

    // A ← R† A R ; unrotated rows/cols first
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = akp * cc + akq * rqp;
        let new_kq = akp * ss + akq * rqq;
        a[(k, p)] = new_kp;
        a[(k, q)] = new_kq;
        a[(p, k)] = new_kp.conj();
        a[(q, k)] = new_kq.conj();
    }
    let app_new = app * cos * cos + aqq * sin * sin - T::real(2.0) * cos * sin * mag;
    let aqq_new = app * sin * sin + aqq * cos * cos + T::real(2.0) * cos * sin * mag;
    a[(p, p)] = Complex::new(app_new, T::zero());
    a[(q, q)] = Complex::new(aqq_new, T::zero());
    a[(p, q)] = Complex::new(T::zero(), T::zero());
    a[(q, p)] = Complex::new(T::zero(), T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cc + vkq * rqp;
        v[(k, q)] = vkp * ss + vkq * rqq;
    }
}

/// Unitary e^G for anti-Hermitian G, by scaling-and-squaring with an
/// adaptive Taylor series. The anti-Hermiticity check reuses the repo-wide
/// tolerance; exactness of the series at working precision keeps the result
/// unitary to ~1e-14.
pub fn exp_antihermitian<T: Scalar>(g: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = g.rows();
    let minus_i = Complex::new(T::zero(), -T::one());
    let h = CMatrix::from_fn(n, n, |i, j| g[(i, j)] * minus_i);
    h.check_hermitian(T::tol(HERMITICITY_TOL))?;

    let norm = g.max_norm() * T::from_count(n);
    let mut squarings = 0usize;
    let mut scale = T::one();
    while norm * scale > T::real(0.25) && squarings < 60 {
        scale *= T::real(0.5);
        squarings += 1;
    }
    let b = g.scale(Complex::new(scale, T::zero()));

    let mut result = CMatrix::<T>::identity(n);
    let mut term = CMatrix::<T>::identity(n);
    for k in 1usize..=24 {
        term = term.matmul(&b).scale(Complex::new(T::one() / T::from_count(k), T::zero()));
        result = &result + &term;
        if term.max_norm() < T::epsilon() {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    Ok(result)
}
