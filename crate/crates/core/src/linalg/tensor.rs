//! Tensor-factor bookkeeping: dimension lists, partial trace, subsystem
//! permutation, and applying operators to a single factor.
//!
//! Conventions fixed repo-wide: row-major storage, 0-based factor indices,
//! left factor major (factor 0 has the largest stride).

use crate::error::{Error, Result};
use crate::linalg::matrix::CMatrix;
use crate::scalar::{c_zero, Scalar, C};
use serde::{Deserialize, Serialize};

/// Ordered list of tensor-factor dimensions annotating a vector or square
/// matrix whose total dimension is the product of the factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimList(Vec<usize>);

impl DimList {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::bad_shape("dimension list must not be empty"));
        }
        if dims.contains(&0) {
            return Err(Error::bad_shape("factor dimensions must be ≥ 1"));
        }
        Ok(DimList(dims))
    }

    pub fn single(d: usize) -> Self {
        DimList::new(vec![d]).expect("d ≥ 1")
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self, factor: usize) -> usize {
        self.0[factor]
    }

    /// Complement of a factor subset, in ascending order.
    pub fn complement(&self, subset: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|i| !subset.contains(i)).collect()
    }

    /// Product of the dimensions of the given factors.
    pub fn subset_dim(&self, subset: &[usize]) -> usize {
        subset.iter().map(|&i| self.0[i]).product()
    }

    /// Strides for row-major linearisation (factor 0 major).
    pub fn strides(&self) -> Vec<usize> {
        let n = self.len();
        let mut s = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.0[i + 1];
        }
        s
    }

    pub fn check_matches(&self, dim_total: usize, what: &str) -> Result<()> {
        if self.total() != dim_total {
            return Err(Error::dim_mismatch(format!(
                "{what}: factor dimensions {:?} multiply to {}, expected {}",
                self.0,
                self.total(),
                dim_total
            )));
        }
        Ok(())
    }

    fn validated_subset(&self, subset: &[usize], what: &str) -> Result<Vec<usize>> {
        let mut s = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != subset.len() {
            return Err(Error::dim_mismatch(format!(
                "{what}: factor indices {subset:?} contain duplicates"
            )));
        }
        if let Some(&bad) = s.iter().find(|&&i| i >= self.len()) {
            return Err(Error::dim_mismatch(format!(
                "{what}: factor index {bad} out of range for {} factors",
                self.len()
            )));
        }
        Ok(s)
    }
}

impl std::fmt::Display for DimList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Partial trace over the factors *not* in `keep`. The kept factors stay in
/// their original (ascending-index) order; `keep` is treated as a set.
pub fn partial_trace<T: Scalar>(
    rho: &CMatrix<T>,
    dims: &DimList,
    keep: &[usize],
) -> Result<CMatrix<T>> {
    dims.check_matches(rho.rows(), "partial_trace")?;
    if !rho.is_square() {
        return Err(Error::dim_mismatch("partial_trace: matrix must be square"));
    }
    let keep = dims.validated_subset(keep, "partial_trace keep set")?;
    if keep.is_empty() {
        return Err(Error::dim_mismatch("partial_trace: keep set must be nonempty"));
    }
    let traced = dims.complement(&keep);
    let strides = dims.strides();

    let keep_offsets = subset_offsets(dims, &strides, &keep);
    let traced_offsets = subset_offsets(dims, &strides, &traced);

    let d_out = keep_offsets.len();
    let n = rho.rows();
    let data = rho.data();
    let mut out = CMatrix::zeros(d_out, d_out);
    for (a, &ra) in keep_offsets.iter().enumerate() {
        for (b, &rb) in keep_offsets.iter().enumerate() {
            let mut acc = c_zero();
            for &t in &traced_offsets {
                acc += data[(ra + t) * n + (rb + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Linear offsets of every multi-index over `subset`, enumerated row-major
/// in the order given by `subset` (ascending for set semantics).
fn subset_offsets(dims: &DimList, strides: &[usize], subset: &[usize]) -> Vec<usize> {
    let mut offsets = vec![0usize];
    for &f in subset {
        let d = dims.dim(f);
        let s = strides[f];
        let mut next = Vec::with_capacity(offsets.len() * d);
        for &o in &offsets {
            for k in 0..d {
                next.push(o + k * s);
            }
        }
        offsets = next;
    }
    offsets
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::dim_mismatch(format!(
            "permutation length {} does not match {} factors",
            perm.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::dim_mismatch(format!(
                "{perm:?} is not a permutation of 0..{n}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Index map realising a factor permutation in gather convention: output
/// factor `p` is input factor `perm[p]`. Entry `map[out_index] = in_index`.
fn permutation_index_map(dims: &DimList, perm: &[usize]) -> (Vec<usize>, DimList) {
    let in_strides = dims.strides();
    let out_dims = DimList::new(perm.iter().map(|&p| dims.dim(p)).collect()).expect("nonempty");
    let total = dims.total();
    let n = perm.len();
    let mut map = vec![0usize; total];
    let mut multi = vec![0usize; n];
    for (out_idx, entry) in map.iter_mut().enumerate().take(total) {
        let mut in_idx = 0;
        for p in 0..n {
            in_idx += multi[p] * in_strides[perm[p]];
        }
        *entry = in_idx;
        let _ = out_idx;
        // increment row-major multi-index over out_dims
        for p in (0..n).rev() {
            multi[p] += 1;
            if multi[p] < out_dims.dim(p) {
                break;
            }
            multi[p] = 0;
        }
    }
    (map, out_dims)
}

/// Reorder the tensor factors of a vector. Output factor `p` is input factor
/// `perm[p]`; applying a permutation and then its inverse is the identity.
pub fn permute_systems_vec<T: Scalar>(
    v: &[C<T>],
    dims: &DimList,
    perm: &[usize],
) -> Result<(Vec<C<T>>, DimList)> {
    dims.check_matches(v.len(), "permute_systems")?;
    check_permutation(perm, dims.len())?;
    let (map, out_dims) = permutation_index_map(dims, perm);
    let out = map.iter().map(|&i| v[i]).collect();
    Ok((out, out_dims))
}

/// Reorder the tensor factors of a square matrix (rows and columns together).
pub fn permute_systems_mat<T: Scalar>(
    m: &CMatrix<T>,
    dims: &DimList,
    perm: &[usize],
) -> Result<(CMatrix<T>, DimList)> {
    dims.check_matches(m.rows(), "permute_systems")?;
    if !m.is_square() {
        return Err(Error::dim_mismatch("permute_systems: matrix must be square"));
    }
    check_permutation(perm, dims.len())?;
    let (map, out_dims) = permutation_index_map(dims, perm);
    let n = m.rows();
    let data = m.data();
    let out = CMatrix::from_fn(n, n, |i, j| data[map[i] * n + map[j]]);
    Ok((out, out_dims))
}

pub fn inverse_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Apply a (possibly rectangular) operator to one tensor factor of a vector:
/// |ψ'⟩ = (I ⊗ M ⊗ I)|ψ⟩. The factor dimension becomes `m.rows()`.
pub fn apply_to_factor_vec<T: Scalar>(
    v: &[C<T>],
    dims: &DimList,
    factor: usize,
    m: &CMatrix<T>,
) -> Result<(Vec<C<T>>, DimList)> {
    dims.check_matches(v.len(), "apply_to_factor")?;
    if factor >= dims.len() {
        return Err(Error::dim_mismatch(format!(
            "factor {factor} out of range for {} factors",
            dims.len()
        )));
    }
    if m.cols() != dims.dim(factor) {
        return Err(Error::dim_mismatch(format!(
            "operator expects input dimension {}, factor {} has dimension {}",
            m.cols(),
            factor,
            dims.dim(factor)
        )));
    }
    let left: usize = dims.as_slice()[..factor].iter().product();
    let mid_in = dims.dim(factor);
    let mid_out = m.rows();
    let right: usize = dims.as_slice()[factor + 1..].iter().product();

    let mut out = vec![c_zero(); left * mid_out * right];
    for l in 0..left {
        for a in 0..mid_out {
            for b in 0..mid_in {
                let w = m[(a, b)];
                if w.norm_sqr() == T::zero() {
                    continue;
                }
                let src = (l * mid_in + b) * right;
                let dst = (l * mid_out + a) * right;
                for r in 0..right {
                    out[dst + r] += w * v[src + r];
                }
            }
        }
    }
    let mut new_dims = dims.as_slice().to_vec();
    new_dims[factor] = mid_out;
    Ok((out, DimList::new(new_dims)?))
}

/// Conjugate one tensor factor of a square matrix: M ρ M† on that factor,
/// identity elsewhere. `m` may be rectangular (d_out × d_in).
pub fn conjugate_factor<T: Scalar>(
    rho: &CMatrix<T>,
    dims: &DimList,
    factor: usize,
    m: &CMatrix<T>,
) -> Result<(CMatrix<T>, DimList)> {
    dims.check_matches(rho.rows(), "conjugate_factor")?;
    if m.cols() != dims.dim(factor) {
        return Err(Error::dim_mismatch(format!(
            "operator expects input dimension {}, factor {} has dimension {}",
            m.cols(),
            factor,
            dims.dim(factor)
        )));
    }
    let left: usize = dims.as_slice()[..factor].iter().product();
    let mid_in = dims.dim(factor);
    let mid_out = m.rows();
    let right: usize = dims.as_slice()[factor + 1..].iter().product();
    let n_in = rho.rows();
    let n_out = left * mid_out * right;

    // half transform: B[(l,a,r), col] = Σ_b M[a,b] ρ[(l,b,r), col]
    let data = rho.data();
    let mut half: Vec<C<T>> = vec![c_zero(); n_out * n_in];
    for l in 0..left {
        for a in 0..mid_out {
            for b in 0..mid_in {
                let w = m[(a, b)];
                if w.norm_sqr() == T::zero() {
                    continue;
                }
                for r in 0..right {
                    let src_row = (l * mid_in + b) * right + r;
                    let dst_row = (l * mid_out + a) * right + r;
                    let src = src_row * n_in;
                    let dst = dst_row * n_in;
                    for col in 0..n_in {
                        half[dst + col] += w * data[src + col];
                    }
                }
            }
        }
    }
    // second half on columns with conj(M)
    let mut out = CMatrix::zeros(n_out, n_out);
    for row in 0..n_out {
        for l in 0..left {
            for a in 0..mid_out {
                for b in 0..mid_in {
                    let w = m[(a, b)].conj();
                    if w.norm_sqr() == T::zero() {
                        continue;
                    }
                    for r in 0..right {
                        let src_col = (l * mid_in + b) * right + r;
                        let dst_col = (l * mid_out + a) * right + r;
                        out[(row, dst_col)] += half[row * n_in + src_col] * w;
                    }
                }
            }
        }
    }
    let mut new_dims = dims.as_slice().to_vec();
    new_dims[factor] = mid_out;
    Ok((out, DimList::new(new_dims)?))
}

/// Reduced density matrix of a pure state on the `keep` factors, as an
/// explicit Gram matrix M M† of the reshaped state vector.
pub fn reduced_density_of_vec<T: Scalar>(
    v: &[C<T>],
    dims: &DimList,
    keep: &[usize],
) -> Result<CMatrix<T>> {
    dims.check_matches(v.len(), "reduced_density_of_vec")?;
    let keep = dims.validated_subset(keep, "reduced density keep set")?;
    let drop = dims.complement(&keep);
    let strides = dims.strides();
    let keep_offsets = subset_offsets(dims, &strides, &keep);
    let drop_offsets = subset_offsets(dims, &strides, &drop);
    let dk = keep_offsets.len();
    let mut out = CMatrix::zeros(dk, dk);
    for (a, &ka) in keep_offsets.iter().enumerate() {
        for (b, &kb) in keep_offsets.iter().enumerate() {
            let mut acc = c_zero();
            for &t in &drop_offsets {
                acc += v[ka + t] * v[kb + t].conj();
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Eigenvalues of the reduced state of a pure vector on `keep`, computed on
/// whichever side of the bipartition is smaller (the nonzero spectra agree).
pub fn marginal_eigenvalues<T: Scalar>(
    v: &[C<T>],
    dims: &DimList,
    keep: &[usize],
) -> Result<Vec<T>> {
    dims.check_matches(v.len(), "marginal_eigenvalues")?;
    let keep = dims.validated_subset(keep, "marginal keep set")?;
    let drop = dims.complement(&keep);
    let d_keep = dims.subset_dim(&keep);
    let d_drop: usize = drop.iter().map(|&i| dims.dim(i)).product::<usize>().max(1);
    let side = if d_keep <= d_drop { keep.clone() } else { drop };
    let gram = reduced_density_of_vec(v, dims, &side)?;
    let (evals, _) = crate::linalg::eig::jacobi_eig(gram.symmetrize())?;
    Ok(evals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{basis_vector, kron, kron_vec};

    fn c(re: f64, im: f64) -> num_complex::Complex<f64> {
        num_complex::Complex::new(re, im)
    }

    fn bell() -> Vec<num_complex::Complex<f64>> {
        let s = 0.5f64.sqrt();
        vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let v = bell();
        let rho = CMatrix::outer(&v, &v);
        let dims = DimList::new(vec![2, 2]).unwrap();
        let red = partial_trace(&rho, &dims, &[0]).unwrap();
        let tau = CMatrix::diag(&[c(0.5, 0.0), c(0.5, 0.0)]);
        assert!(red.max_diff(&tau) < 1e-15);
    }

    #[test]
    fn product_partial_trace_scales_by_trace() {
        let a = CMatrix::from_fn(2, 2, |i, j| c((i + j) as f64, (i as f64) - (j as f64)));
        let a = a.symmetrize();
        let b = CMatrix::diag(&[c(0.3, 0.0), c(0.9, 0.0)]);
        let dims = DimList::new(vec![2, 2]).unwrap();
        let red = partial_trace(&kron(&a, &b), &dims, &[0]).unwrap();
        let expect = a.scale(b.trace());
        assert!(red.max_diff(&expect) < 1e-14);
    }

    #[test]
    fn partial_trace_matches_index_loop_oracle() {
        // three qubit factors, keep {0,2}; oracle is an explicit six-index sum
        let dims = DimList::new(vec![2, 2, 2]).unwrap();
        let mut state = 77u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(99);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let raw = CMatrix::from_fn(8, 8, |_, _| c(next(), next()));
        let rho = raw.symmetrize();
        let red = partial_trace(&rho, &dims, &[0, 2]).unwrap();
        for a0 in 0..2 {
            for a2 in 0..2 {
                for b0 in 0..2 {
                    for b2 in 0..2 {
                        let mut acc = c(0.0, 0.0);
                        for t in 0..2 {
                            let r = a0 * 4 + t * 2 + a2;
                            let s = b0 * 4 + t * 2 + b2;
                            acc += rho[(r, s)];
                        }
                        let got = red[(a0 * 2 + a2, b0 * 2 + b2)];
                        assert!((got - acc).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn swap_on_basis_vector() {
        let v01 = kron_vec(&basis_vector::<f64>(2, 0), &basis_vector::<f64>(2, 1));
        let dims = DimList::new(vec![2, 2]).unwrap();
        let (swapped, _) = permute_systems_vec(&v01, &dims, &[1, 0]).unwrap();
        let v10 = kron_vec(&basis_vector::<f64>(2, 1), &basis_vector::<f64>(2, 0));
        for i in 0..4 {
            assert!((swapped[i] - v10[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn permutation_roundtrip() {
        let dims = DimList::new(vec![2, 3, 2]).unwrap();
        let mut state = 5u64;
        let mut next = || {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let v: Vec<_> = (0..12).map(|_| c(next(), next())).collect();
        let perm = vec![1, 2, 0];
        let (w, wd) = permute_systems_vec(&v, &dims, &perm).unwrap();
        assert_eq!(wd.as_slice(), &[3, 2, 2]);
        let (back, bd) = permute_systems_vec(&w, &wd, &inverse_permutation(&perm)).unwrap();
        assert_eq!(bd, dims);
        for i in 0..12 {
            assert!((back[i] - v[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn identity_permutation_is_noop() {
        let dims = DimList::new(vec![2, 2]).unwrap();
        let v = bell();
        let (w, _) = permute_systems_vec(&v, &dims, &[0, 1]).unwrap();
        assert_eq!(w, v);
    }

    #[test]
    fn apply_to_factor_matches_kron_embedding() {
        let dims = DimList::new(vec![2, 3, 2]).unwrap();
        let mut state = 13u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(7);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let v: Vec<_> = (0..12).map(|_| c(next(), next())).collect();
        let m = CMatrix::from_fn(4, 3, |_, _| c(next(), next()));
        let (fast, fd) = apply_to_factor_vec(&v, &dims, 1, &m).unwrap();
        let big = kron(&kron(&CMatrix::identity(2), &m), &CMatrix::identity(2));
        let slow = big.matvec(&v);
        assert_eq!(fd.as_slice(), &[2, 4, 2]);
        for i in 0..16 {
            assert!((fast[i] - slow[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn conjugate_factor_matches_kron_embedding() {
        let dims = DimList::new(vec![2, 2]).unwrap();
        let mut state = 29u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(11);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let raw = CMatrix::from_fn(4, 4, |_, _| c(next(), next()));
        let rho = raw.symmetrize();
        let k = CMatrix::from_fn(3, 2, |_, _| c(next(), next()));
        let (fast, fd) = conjugate_factor(&rho, &dims, 1, &k).unwrap();
        let big = kron(&CMatrix::identity(2), &k);
        let slow = big.matmul(&rho).matmul(&big.dagger());
        assert_eq!(fd.as_slice(), &[2, 3]);
        assert!(fast.max_diff(&slow) < 1e-12);
    }

    #[test]
    fn reduced_density_agrees_with_partial_trace() {
        let dims = DimList::new(vec![2, 3, 2]).unwrap();
        let mut state = 41u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(23);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let mut v: Vec<_> = (0..12).map(|_| c(next(), next())).collect();
        let norm = crate::linalg::matrix::vec_norm(&v);
        for z in &mut v {
            *z /= c(norm, 0.0);
        }
        let rho = CMatrix::outer(&v, &v);
        let via_trace = partial_trace(&rho, &dims, &[1]).unwrap();
        let via_gram = reduced_density_of_vec(&v, &dims, &[1]).unwrap();
        assert!(via_trace.max_diff(&via_gram) < 1e-13);

        // eigenvalues from either side of the cut agree on the nonzero part
        let keep_side = marginal_eigenvalues(&v, &dims, &[1]).unwrap();
        let (direct, _) = crate::linalg::eig::jacobi_eig(via_trace.symmetrize()).unwrap();
        for (a, b) in keep_side.iter().zip(direct.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
