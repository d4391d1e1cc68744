//! Real parameter vector ↔ isometry, through the anti-Hermitian generator:
//! θ ∈ R^{D²} encodes G with G† = −G; the isometry is the first d_in columns
//! of e^G. The exponential map keeps every point exactly feasible.

use crate::error::Result;
use crate::linalg::{exp_antihermitian, CMatrix};
use crate::scalar::Scalar;
use num_complex::Complex;

/// Number of real parameters for a D×D anti-Hermitian generator.
pub(crate) fn param_count(big: usize) -> usize {
    big * big
}

/// Layout: the first D entries are the imaginary diagonal G_jj = i·θ_j; the
/// remaining D(D−1) entries are (re, im) pairs for the strict upper triangle,
/// with G_kj = −conj(G_jk).
pub(crate) fn antihermitian_from_params<T: Scalar>(params: &[T], big: usize) -> CMatrix<T> {
    debug_assert_eq!(params.len(), param_count(big));
    let mut g = CMatrix::zeros(big, big);
    for j in 0..big {
        g[(j, j)] = Complex::new(T::zero(), params[j]);
    }
    let mut idx = big;
    for j in 0..big {
        for k in (j + 1)..big {
            let re = params[idx];
            let im = params[idx + 1];
            idx += 2;
            g[(j, k)] = Complex::new(re, im);
            g[(k, j)] = Complex::new(-re, im);
        }
    }
    g
}

/// First `d_in` columns of e^G.
pub(crate) fn isometry_from_params<T: Scalar>(
    params: &[T],
    big: usize,
    d_in: usize,
) -> Result<CMatrix<T>> {
    let g = antihermitian_from_params(params, big);
    let u = exp_antihermitian(&g)?;
    Ok(CMatrix::from_fn(big, d_in, |i, j| u[(i, j)]))
}
