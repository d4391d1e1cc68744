//! States, operators and ensembles: density operators with tensor-factor
//! dimension lists, pure states with a designated purifying factor, and
//! constructors for every state family the harness sweeps.

use crate::error::{Error, Result};
use crate::linalg::{
    self, basis_vector, hermitian_eig, kron, partial_trace, permute_systems_mat,
    permute_systems_vec, vec_norm, CMatrix, DimList,
};
use crate::scalar::{c_one, c_zero, phase, Scalar, C};
use num_complex::Complex;
use rand::Rng;

/// Eigenvalues below this are treated as outside the support (rank cutoff
/// for purification, support projection for relative entropy).
pub const SUPPORT_EPS: f64 = 1e-12;

/// State-validity tolerance: Hermiticity and trace in max-norm, and the
/// allowed negativity of eigenvalues.
pub const STATE_TOL: f64 = 1e-10;

/// Positive unit-trace Hermitian matrix with an attached factor dimension list.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T> {
    mat: CMatrix<T>,
    dims: DimList,
}

impl<T: Scalar> DensityOperator<T> {
    /// Full validation: shape, finiteness, Hermiticity within 1e-10,
    /// eigenvalues ≥ −1e-10, unit trace within 1e-10.
    pub fn new(mat: CMatrix<T>, dims: DimList) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::bad_shape("density operator must be square"));
        }
        dims.check_matches(mat.rows(), "density operator")?;
        if !mat.all_finite() {
            return Err(Error::bad_shape("density operator has non-finite entries"));
        }
        mat.check_hermitian(T::tol(STATE_TOL))?;
        let tr = mat.trace();
        if (tr - c_one::<T>()).norm() > T::tol(STATE_TOL) {
            return Err(Error::bad_shape(format!(
                "density operator trace {} is not 1 within 1e-10",
                tr.re
            )));
        }
        let (evals, _) = hermitian_eig(&mat)?;
        if let Some(&bad) = evals.iter().find(|&&l| l < -T::tol(STATE_TOL)) {
            return Err(Error::NotAState {
                eigenvalue: bad.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(DensityOperator { mat, dims })
    }

    /// Construct without the spectral check. For internal paths that produce
    /// states by construction (channel outputs, partial traces of states).
    pub(crate) fn from_parts(mat: CMatrix<T>, dims: DimList) -> Self {
        debug_assert_eq!(mat.rows(), dims.total());
        DensityOperator { mat, dims }
    }

    pub fn mat(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator<T>> {
        let reduced = partial_trace(&self.mat, &self.dims, keep)?;
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        let dims = DimList::new(keep_sorted.iter().map(|&i| self.dims.dim(i)).collect())?;
        Ok(DensityOperator::from_parts(reduced, dims))
    }

    pub fn permute(&self, perm: &[usize]) -> Result<DensityOperator<T>> {
        let (mat, dims) = permute_systems_mat(&self.mat, &self.dims, perm)?;
        Ok(DensityOperator::from_parts(mat, dims))
    }

    /// Tensor product; factor lists concatenate (self's factors first).
    pub fn tensor(&self, other: &DensityOperator<T>) -> DensityOperator<T> {
        let mat = kron(&self.mat, &other.mat);
        let mut dims = self.dims.as_slice().to_vec();
        dims.extend_from_slice(other.dims.as_slice());
        DensityOperator::from_parts(mat, DimList::new(dims).expect("nonempty"))
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        Ok(hermitian_eig(&self.mat)?.0)
    }

    /// Rank at the repo-wide support cutoff.
    pub fn rank(&self) -> Result<usize> {
        let evals = self.eigenvalues()?;
        Ok(evals.iter().filter(|&&l| l > T::tol(SUPPORT_EPS)).count())
    }

    /// Re-check the type invariants (used by sweep harnesses on loaded data).
    pub fn validate(&self) -> Result<()> {
        DensityOperator::new(self.mat.clone(), self.dims.clone()).map(|_| ())
    }
}

/// Unit vector with factor dimension list; purifications carry the index of
/// the purifying factor.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    vec: Vec<C<T>>,
    dims: DimList,
    purifying_factor: Option<usize>,
}

impl<T: Scalar> PureState<T> {
    pub fn new(vec: Vec<C<T>>, dims: DimList, purifying_factor: Option<usize>) -> Result<Self> {
        dims.check_matches(vec.len(), "pure state")?;
        let norm = vec_norm(&vec);
        if (norm - T::one()).abs() > T::tol(STATE_TOL) {
            return Err(Error::bad_shape(format!(
                "pure state norm {norm} is not 1 within 1e-10"
            )));
        }
        if let Some(p) = purifying_factor {
            if p >= dims.len() {
                return Err(Error::dim_mismatch(format!(
                    "purifying factor {p} out of range for {} factors",
                    dims.len()
                )));
            }
        }
        Ok(PureState {
            vec,
            dims,
            purifying_factor,
        })
    }

    pub fn vec(&self) -> &[C<T>] {
        &self.vec
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn purifying_factor(&self) -> Option<usize> {
        self.purifying_factor
    }

    pub fn to_density(&self) -> DensityOperator<T> {
        DensityOperator::from_parts(CMatrix::outer(&self.vec, &self.vec), self.dims.clone())
    }

    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityOperator<T>> {
        let mat = linalg::reduced_density_of_vec(&self.vec, &self.dims, keep)?;
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        let dims = DimList::new(keep_sorted.iter().map(|&i| self.dims.dim(i)).collect())?;
        Ok(DensityOperator::from_parts(mat, dims))
    }

    pub fn permute(&self, perm: &[usize]) -> Result<PureState<T>> {
        let (vec, dims) = permute_systems_vec(&self.vec, &self.dims, perm)?;
        let purifying_factor = self
            .purifying_factor
            .map(|p| perm.iter().position(|&q| q == p).expect("perm covers factors"));
        Ok(PureState {
            vec,
            dims,
            purifying_factor,
        })
    }
}

/// Finite list of (probability, state) pairs on a common space.
#[derive(Debug, Clone)]
pub struct Ensemble<T> {
    items: Vec<(T, DensityOperator<T>)>,
}

impl<T: Scalar> Ensemble<T> {
    pub fn new(items: Vec<(T, DensityOperator<T>)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::bad_shape("ensemble must not be empty"));
        }
        let dims = items[0].1.dims().clone();
        let mut total = T::zero();
        for (p, rho) in &items {
            if *p < -T::tol(STATE_TOL) {
                return Err(Error::bad_shape(format!("negative probability {p}")));
            }
            if rho.dims() != &dims {
                return Err(Error::dim_mismatch(
                    "ensemble members live on different factor lists",
                ));
            }
            total += *p;
        }
        if (total - T::one()).abs() > T::tol(STATE_TOL) {
            return Err(Error::bad_shape(format!(
                "ensemble probabilities sum to {total}, not 1 within 1e-10"
            )));
        }
        Ok(Ensemble { items })
    }

    pub fn items(&self) -> &[(T, DensityOperator<T>)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dims(&self) -> &DimList {
        self.items[0].1.dims()
    }

    /// Average state Σ p_i ρ_i.
    pub fn average(&self) -> DensityOperator<T> {
        let d = self.items[0].1.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (p, rho) in &self.items {
            acc = &acc + &rho.mat().scale_re(*p);
        }
        DensityOperator::from_parts(acc, self.dims().clone())
    }
}

/// τ_d = (1/d)·I on a single factor.
pub fn maximally_mixed<T: Scalar>(d: usize) -> DensityOperator<T> {
    assert!(d >= 1);
    let mat = CMatrix::identity(d).scale_re(T::one() / T::from_count(d));
    DensityOperator::from_parts(mat, DimList::single(d))
}

/// Φ_d = (1/√d) Σ_i |ii⟩ on dims (d, d).
pub fn max_entangled<T: Scalar>(d: usize) -> PureState<T> {
    assert!(d >= 1);
    let amp = Complex::new(T::one() / T::from_count(d).sqrt(), T::zero());
    let mut vec = vec![c_zero(); d * d];
    for i in 0..d {
        vec[i * d + i] = amp;
    }
    PureState {
        vec,
        dims: DimList::new(vec![d, d]).expect("nonempty"),
        purifying_factor: None,
    }
}

/// Fourier transform of ℤ_d: U_{jk} = e^{2πi jk/d}/√d, 0-based.
pub fn fourier_unitary<T: Scalar>(d: usize) -> CMatrix<T> {
    assert!(d >= 1);
    let norm = T::one() / T::from_count(d).sqrt();
    let two_pi = T::real(2.0) * T::PI();
    CMatrix::from_fn(d, d, |j, k| {
        let angle = two_pi * T::from_count((j * k) % d) / T::from_count(d);
        phase(angle) * Complex::new(norm, T::zero())
    })
}

/// ℓ-fold Kronecker power of the 2×2 Hadamard (Fourier transform of ℤ_2^ℓ).
pub fn hadamard_tensor<T: Scalar>(l: usize) -> CMatrix<T> {
    assert!(l >= 1);
    let s = T::real(std::f64::consts::FRAC_1_SQRT_2);
    let h = CMatrix::new(
        2,
        2,
        vec![
            Complex::new(s, T::zero()),
            Complex::new(s, T::zero()),
            Complex::new(s, T::zero()),
            Complex::new(-s, T::zero()),
        ],
    );
    let mut out = h.clone();
    for _ in 1..l {
        out = kron(&out, &h);
    }
    out
}

/// Cyclic shift X|i⟩ = |i+1 mod d⟩.
pub fn weyl_x<T: Scalar>(d: usize) -> CMatrix<T> {
    weyl_shift(d, 1)
}

/// Phase operator Z|i⟩ = e^{2πi i/d}|i⟩ (= U X U† for the Fourier U).
pub fn weyl_z<T: Scalar>(d: usize) -> CMatrix<T> {
    weyl_phase(d, 1)
}

/// X^a without repeated multiplication: X^a|i⟩ = |i+a mod d⟩.
pub fn weyl_shift<T: Scalar>(d: usize, a: usize) -> CMatrix<T> {
    assert!(d >= 1);
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[((i + a) % d, i)] = c_one();
    }
    m
}

/// Z^b = diag(e^{2πi ib/d}).
pub fn weyl_phase<T: Scalar>(d: usize, b: usize) -> CMatrix<T> {
    assert!(d >= 1);
    let two_pi = T::real(2.0) * T::PI();
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        let angle = two_pi * T::from_count((i * b) % d) / T::from_count(d);
        m[(i, i)] = phase(angle);
    }
    m
}

/// The uniform computational-basis ensemble E_0 = {1/d, |i⟩⟨i|} and its
/// U-rotated partner E_1 = {1/d, U|i⟩⟨i|U†}; both average to τ_d.
pub fn basis_ensembles<T: Scalar>(d: usize, u: &CMatrix<T>) -> Result<(Ensemble<T>, Ensemble<T>)> {
    if u.rows() != d || u.cols() != d {
        return Err(Error::dim_mismatch(format!(
            "rotation must be {d}x{d}, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let p = T::one() / T::from_count(d);
    let dims = DimList::single(d);
    let mut e0 = Vec::with_capacity(d);
    let mut e1 = Vec::with_capacity(d);
    for i in 0..d {
        let b = basis_vector::<T>(d, i);
        e0.push((
            p,
            DensityOperator::from_parts(CMatrix::outer(&b, &b), dims.clone()),
        ));
        let ui = u.col(i);
        e1.push((
            p,
            DensityOperator::from_parts(CMatrix::outer(&ui, &ui), dims.clone()),
        ));
    }
    Ok((Ensemble::new(e0)?, Ensemble::new(e1)?))
}

/// The uniform mixture of a basis ensemble and its U-conjugate, as the 2d
/// member ensemble {1/2d, U_j|i⟩⟨i|U_j†} with U_0 = 1, U_1 = U.
pub fn conjugate_pair_ensemble<T: Scalar>(d: usize, u: &CMatrix<T>) -> Result<Ensemble<T>> {
    let (e0, e1) = basis_ensembles(d, u)?;
    let half = T::real(0.5);
    let mut items = Vec::with_capacity(2 * d);
    for (p, rho) in e0.items() {
        items.push((*p * half, rho.clone()));
    }
    for (p, rho) in e1.items() {
        items.push((*p * half, rho.clone()));
    }
    Ensemble::new(items)
}

/// Purification of the locking ("flower") family on factors A, A', B, B', C
/// with dims (d, 2, d, 2, d):
///
///   |Ψ⟩ = (1/√(2d)) Σ_{i,j} |i⟩|j⟩|i⟩|j⟩ ⊗ U_j|i⟩,  U_0 = 1, U_1 = Fourier.
pub fn flower_purification<T: Scalar>(d: usize) -> PureState<T> {
    assert!(d >= 2);
    flower_purification_general(d, &[CMatrix::identity(d)]).expect("identity is unitary")
}

/// The m-unitary generalisation on dims (d, 2m, d, 2m, d), A' grouping the
/// pair (j, k) as j·m + k:
///
///   |Ψ⟩ = (1/√(2dm)) Σ_{i,j,k} |i,jk⟩|i,jk⟩ ⊗ V_k U_j|i⟩.
pub fn flower_purification_general<T: Scalar>(
    d: usize,
    unitaries: &[CMatrix<T>],
) -> Result<PureState<T>> {
    assert!(d >= 2);
    let m = unitaries.len();
    if m == 0 {
        return Err(Error::bad_shape("need at least one unitary"));
    }
    for (k, v) in unitaries.iter().enumerate() {
        if v.rows() != d || v.cols() != d {
            return Err(Error::bad_shape(format!(
                "unitary {k} must be {d}x{d}, got {}x{}",
                v.rows(),
                v.cols()
            )));
        }
        let defect = v.dagger().matmul(v).max_diff(&CMatrix::identity(d));
        if defect > T::tol(1e-9) {
            return Err(Error::NotIsometry {
                deviation: defect.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let u1 = fourier_unitary::<T>(d);
    let aprime = 2 * m;
    let dims = DimList::new(vec![d, aprime, d, aprime, d])?;
    let norm = Complex::new(
        T::one() / (T::real(2.0) * T::from_count(d) * T::from_count(m)).sqrt(),
        T::zero(),
    );
    // strides for (d, 2m, d, 2m, d)
    let s3 = d;
    let s2 = aprime * s3;
    let s1 = d * s2;
    let s0 = aprime * s1;
    let mut vec = vec![c_zero(); d * aprime * d * aprime * d];
    for (k, v) in unitaries.iter().enumerate() {
        for j in 0..2 {
            let w = if j == 0 {
                v.clone()
            } else {
                v.matmul(&u1)
            };
            let a = j * m + k;
            for i in 0..d {
                let base = i * s0 + a * s1 + i * s2 + a * s3;
                for c_idx in 0..d {
                    vec[base + c_idx] += norm * w[(c_idx, i)];
                }
            }
        }
    }
    PureState::new(vec, dims, Some(4))
}

/// Operator swapping the two d-dimensional factors: F|ij⟩ = |ji⟩.
pub fn swap_operator<T: Scalar>(d: usize) -> CMatrix<T> {
    let mut f = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(j * d + i, i * d + j)] = c_one();
        }
    }
    f
}

/// Projectors onto the symmetric and antisymmetric subspaces of d⊗d:
/// P_sym = (1+F)/2 of rank d(d+1)/2, P_anti = (1−F)/2 of rank d(d−1)/2.
pub fn sym_antisym_projectors<T: Scalar>(d: usize) -> (CMatrix<T>, CMatrix<T>) {
    assert!(d >= 2);
    let f = swap_operator::<T>(d);
    let eye = CMatrix::identity(d * d);
    let half = T::real(0.5);
    let p_sym = (&eye + &f).scale_re(half);
    let p_anti = (&eye - &f).scale_re(half);
    (p_sym, p_anti)
}

/// The flagged symmetric/antisymmetric mixture on dims (2, d, d), ordered
/// A', A, B:
///
///   ω = ((d+1)/2d)|0⟩⟨0|⊗P_sym·2/(d(d+1)) + ((d−1)/2d)|1⟩⟨1|⊗P_anti·2/(d(d−1))
///
/// whose AB marginal is maximally mixed.
pub fn omega_state<T: Scalar>(d: usize) -> DensityOperator<T> {
    assert!(d >= 2);
    let (p_sym, p_anti) = sym_antisym_projectors::<T>(d);
    let inv_d2 = T::one() / T::from_count(d * d);
    let zero = basis_vector::<T>(2, 0);
    let one = basis_vector::<T>(2, 1);
    // both weights × normalised projectors collapse to P/d²
    let block0 = kron(&CMatrix::outer(&zero, &zero), &p_sym.scale_re(inv_d2));
    let block1 = kron(&CMatrix::outer(&one, &one), &p_anti.scale_re(inv_d2));
    DensityOperator::from_parts(
        &block0 + &block1,
        DimList::new(vec![2, d, d]).expect("nonempty"),
    )
}

/// Random mixture of `rank` Haar-random unit vectors drawn inside the range
/// of an (idempotent Hermitian) projector, with uniform Dirichlet weights.
pub fn random_supported_state<T: Scalar, R: Rng>(
    projector: &CMatrix<T>,
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator<T>> {
    projector.check_hermitian(T::tol(STATE_TOL))?;
    let idem = projector.matmul(projector).max_diff(projector);
    if idem > T::tol(1e-9) {
        return Err(Error::bad_shape(format!(
            "projector is not idempotent: |P² - P| = {:e}",
            idem.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let (evals, vecs) = hermitian_eig(projector)?;
    let half = T::real(0.5);
    let range: Vec<usize> = (0..evals.len()).filter(|&i| evals[i] > half).collect();
    if rank == 0 || rank > range.len() {
        return Err(Error::RankTooLarge {
            requested: rank,
            available: range.len(),
        });
    }
    let n = projector.rows();
    let dims_pair = factor_pair(n);
    let mut acc = CMatrix::zeros(n, n);
    let weights = dirichlet_uniform::<T, R>(rank, rng);
    for w in weights {
        // Haar vector inside the range: Gaussian coefficients over an
        // orthonormal basis of the range
        let mut v = vec![c_zero(); n];
        for &b in &range {
            let g = linalg::gaussian_complex::<T, R>(rng);
            for (vi, item) in v.iter_mut().enumerate() {
                *item += vecs[(vi, b)] * g;
            }
        }
        let norm = vec_norm(&v);
        let inv = Complex::new(T::one() / norm, T::zero());
        for z in &mut v {
            *z *= inv;
        }
        acc = &acc + &CMatrix::outer(&v, &v).scale_re(w);
    }
    Ok(DensityOperator::from_parts(acc, dims_pair))
}

/// Dims (d, d) when n = d² (the subspace-supported states live on a pair of
/// equal factors), otherwise a single factor.
fn factor_pair(n: usize) -> DimList {
    let d = (n as f64).sqrt().round() as usize;
    if d * d == n && d >= 2 {
        DimList::new(vec![d, d]).expect("nonempty")
    } else {
        DimList::single(n)
    }
}

fn dirichlet_uniform<T: Scalar, R: Rng>(k: usize, rng: &mut R) -> Vec<T> {
    let mut exps: Vec<T> = (0..k)
        .map(|_| {
            let u: f64 = rng.random();
            T::real(-(u.max(1e-300)).ln())
        })
        .collect();
    let total: T = exps.iter().copied().sum();
    for e in &mut exps {
        *e /= total;
    }
    exps
}

/// Eigendecomposition-based purification: the purifying factor is appended
/// last with dimension rank(ρ); tracing it out returns ρ.
pub fn purify<T: Scalar>(rho: &DensityOperator<T>) -> Result<PureState<T>> {
    let (evals, vecs) = hermitian_eig(rho.mat())?;
    let n = rho.dim();
    // support in descending weight order
    let support: Vec<usize> = (0..n)
        .rev()
        .filter(|&i| evals[i] > T::tol(SUPPORT_EPS))
        .collect();
    let rank = support.len().max(1);
    let mut vec = vec![c_zero(); n * rank];
    if support.is_empty() {
        // degenerate zero operator cannot occur for valid states; guard anyway
        return Err(Error::bad_shape("cannot purify an operator with empty support"));
    }
    for (a, &idx) in support.iter().enumerate() {
        let w = Complex::new(evals[idx].sqrt(), T::zero());
        for x in 0..n {
            vec[x * rank + a] = vecs[(x, idx)] * w;
        }
    }
    // renormalise: dropped sub-cutoff weight perturbs the norm at ~1e-12
    let norm = vec_norm(&vec);
    let inv = Complex::new(T::one() / norm, T::zero());
    for z in &mut vec {
        *z *= inv;
    }
    let mut dims = rho.dims().as_slice().to_vec();
    dims.push(rank);
    let nfac = dims.len();
    PureState::new(vec, DimList::new(dims)?, Some(nfac - 1))
}

/// Random density operator on a single d-dimensional factor, induced by
/// tracing an ancilla of dimension `ancilla` out of a Haar-random pure state.
pub fn random_density<T: Scalar, R: Rng>(d: usize, ancilla: usize, rng: &mut R) -> DensityOperator<T> {
    let mut v: Vec<C<T>> = (0..d * ancilla)
        .map(|_| linalg::gaussian_complex(rng))
        .collect();
    let norm = vec_norm(&v);
    let inv = Complex::new(T::one() / norm, T::zero());
    for z in &mut v {
        *z *= inv;
    }
    let dims = DimList::new(vec![d, ancilla]).expect("nonempty");
    let mat = linalg::reduced_density_of_vec(&v, &dims, &[0]).expect("valid");
    DensityOperator::from_parts(mat, DimList::single(d))
}

/// The singlet (the d=2 antisymmetric state) on dims (2, 2).
pub fn singlet<T: Scalar>() -> DensityOperator<T> {
    let s = T::real(std::f64::consts::FRAC_1_SQRT_2);
    let v = vec![
        c_zero(),
        Complex::new(s, T::zero()),
        Complex::new(-s, T::zero()),
        c_zero(),
    ];
    DensityOperator::from_parts(
        CMatrix::outer(&v, &v),
        DimList::new(vec![2, 2]).expect("nonempty"),
    )
}
