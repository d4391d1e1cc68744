//! Haar-distributed unitaries and isometries.
//!
//! Sampling is Gaussian + Gram-Schmidt QR. Orthonormalising the columns of a
//! complex Ginibre matrix with positive-real R diagonal yields exactly the
//! Haar measure; modified Gram-Schmidt produces that normalisation directly,
//! and a second pass keeps orthogonality at working precision.

use crate::error::{Error, Result};
use crate::linalg::matrix::CMatrix;
use crate::scalar::{Scalar, C};
use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Standard complex Gaussian entry: (x + iy)/√2 with x, y ~ N(0,1).
/// Always sampled in f64 so the stream is identical for every scalar type.
pub fn gaussian_complex<T: Scalar, R: Rng>(rng: &mut R) -> C<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    let s = T::real(std::f64::consts::FRAC_1_SQRT_2);
    Complex::new(T::real(re) * s, T::real(im) * s)
}

pub fn ginibre<T: Scalar, R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        data.push(gaussian_complex(rng));
    }
    CMatrix::new(rows, cols, data)
}

/// Haar-random unitary of dimension d.
pub fn haar_unitary<T: Scalar, R: Rng>(d: usize, rng: &mut R) -> CMatrix<T> {
    assert!(d >= 1, "dimension must be ≥ 1");
    orthonormalize_columns(ginibre(d, d, rng))
}

/// Haar-random isometry: d_out × d_in with V†V = I, distributed as the first
/// d_in columns of a Haar unitary.
pub fn haar_isometry<T: Scalar, R: Rng>(d_in: usize, d_out: usize, rng: &mut R) -> Result<CMatrix<T>> {
    if d_out < d_in {
        return Err(Error::bad_shape(format!(
            "isometry needs d_out ≥ d_in, got d_in={d_in}, d_out={d_out}"
        )));
    }
    Ok(orthonormalize_columns(ginibre(d_out, d_in, rng)))
}

/// Modified Gram-Schmidt, two passes.
fn orthonormalize_columns<T: Scalar>(mut m: CMatrix<T>) -> CMatrix<T> {
    let rows = m.rows();
    let cols = m.cols();
    for _pass in 0..2 {
        for j in 0..cols {
            for k in 0..j {
                let mut proj = Complex::new(T::zero(), T::zero());
                for i in 0..rows {
                    proj += m[(i, k)].conj() * m[(i, j)];
                }
                for i in 0..rows {
                    let sub = proj * m[(i, k)];
                    m[(i, j)] -= sub;
                }
            }
            let norm = (0..rows)
                .map(|i| m[(i, j)].norm_sqr())
                .sum::<T>()
                .sqrt();
            let inv = Complex::new(T::one() / norm, T::zero());
            for i in 0..rows {
                m[(i, j)] *= inv;
            }
        }
    }
    m
}

/// Random Hermitian matrix with Gaussian entries (test and sweep helper).
pub fn random_hermitian<T: Scalar, R: Rng>(d: usize, rng: &mut R) -> CMatrix<T> {
    ginibre(d, d, rng).symmetrize()
}
