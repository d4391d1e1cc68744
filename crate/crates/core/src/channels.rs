//! CPTP maps as finite Kraus sets: construction, application (also to a
//! single tensor factor), Stinespring dilation, and the dephasing and
//! Weyl-twist channels the uncertainty-relation sweeps are built from.

use crate::error::{Error, Result};
use crate::linalg::{
    apply_to_factor_vec, basis_vector, conjugate_factor, haar_isometry, CMatrix, DimList,
};
use crate::scalar::{c_one, Scalar};
use crate::states::{weyl_phase, weyl_shift, DensityOperator, PureState};
use num_complex::Complex;
use rand::Rng;

/// Completeness tolerance for Σ K†K = I; drift beyond this is an error,
/// never silently renormalised.
pub const KRAUS_TOL: f64 = 1e-9;

/// CPTP map as a finite list of d_out × d_in Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel<T> {
    kraus: Vec<CMatrix<T>>,
    d_in: usize,
    d_out: usize,
}

impl<T: Scalar> KrausChannel<T> {
    pub fn new(kraus: Vec<CMatrix<T>>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::bad_shape("channel needs at least one Kraus operator"));
        }
        let d_out = kraus[0].rows();
        let d_in = kraus[0].cols();
        for (i, k) in kraus.iter().enumerate() {
            if k.rows() != d_out || k.cols() != d_in {
                return Err(Error::bad_shape(format!(
                    "Kraus operator {i} is {}x{}, expected {d_out}x{d_in}",
                    k.rows(),
                    k.cols()
                )));
            }
            if !k.all_finite() {
                return Err(Error::bad_shape(format!(
                    "Kraus operator {i} has non-finite entries"
                )));
            }
        }
        let mut sum = CMatrix::zeros(d_in, d_in);
        for k in &kraus {
            sum = &sum + &k.dagger().matmul(k);
        }
        let drift = sum.max_diff(&CMatrix::identity(d_in));
        if drift > T::tol(KRAUS_TOL) {
            return Err(Error::NotTracePreserving {
                deviation: drift.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(KrausChannel { kraus, d_in, d_out })
    }

    pub fn kraus(&self) -> &[CMatrix<T>] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn identity(d: usize) -> Self {
        KrausChannel {
            kraus: vec![CMatrix::identity(d)],
            d_in: d,
            d_out: d,
        }
    }

    /// The trace map, d_out = 1 (the trivial extension).
    pub fn trace_out(d_in: usize) -> Self {
        let kraus = (0..d_in)
            .map(|i| {
                let mut k = CMatrix::zeros(1, d_in);
                k[(0, i)] = c_one();
                k
            })
            .collect();
        KrausChannel {
            kraus,
            d_in,
            d_out: 1,
        }
    }

    /// Fully depolarising channel, Kraus {(1/√d)|i⟩⟨j|}.
    pub fn depolarizing(d: usize) -> Self {
        let w = Complex::new(T::one() / T::from_count(d).sqrt(), T::zero());
        let mut kraus = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut k = CMatrix::zeros(d, d);
                k[(i, j)] = w;
                kraus.push(k);
            }
        }
        KrausChannel {
            kraus,
            d_in: d,
            d_out: d,
        }
    }

    /// Σ K ρ K†.
    pub fn apply(&self, rho: &DensityOperator<T>) -> Result<DensityOperator<T>> {
        if rho.dim() != self.d_in {
            return Err(Error::dim_mismatch(format!(
                "channel expects input dimension {}, state has {}",
                self.d_in,
                rho.dim()
            )));
        }
        let mut out = CMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out = &out + &k.matmul(rho.mat()).matmul(&k.dagger());
        }
        Ok(DensityOperator::from_parts(out, DimList::single(self.d_out)))
    }

    /// Channel on one tensor factor, identity elsewhere; the factor dimension
    /// becomes d_out.
    pub fn apply_to_factor(
        &self,
        state: &DensityOperator<T>,
        factor: usize,
    ) -> Result<DensityOperator<T>> {
        if factor >= state.dims().len() || state.dims().dim(factor) != self.d_in {
            return Err(Error::dim_mismatch(format!(
                "channel expects dimension {} at factor {factor}, dims are {}",
                self.d_in,
                state.dims()
            )));
        }
        let mut acc: Option<CMatrix<T>> = None;
        let mut out_dims = None;
        for k in &self.kraus {
            let (term, dims) = conjugate_factor(state.mat(), state.dims(), factor, k)?;
            acc = Some(match acc {
                None => term,
                Some(a) => &a + &term,
            });
            out_dims = Some(dims);
        }
        Ok(DensityOperator::from_parts(
            acc.expect("nonempty Kraus set"),
            out_dims.expect("nonempty Kraus set"),
        ))
    }

    /// Channel on one factor of a pure state (the state becomes mixed).
    pub fn apply_to_factor_pure(
        &self,
        psi: &PureState<T>,
        factor: usize,
    ) -> Result<DensityOperator<T>> {
        let dilated = dilate_on_factor(psi, factor, self)?;
        let n = dilated.dims().len();
        let keep: Vec<usize> = (0..n).filter(|&i| i != factor + 1).collect();
        dilated.reduced_density(&keep)
    }

    /// Sequential composition other ∘ self as a single Kraus set.
    pub fn compose_after(&self, other: &KrausChannel<T>) -> Result<KrausChannel<T>> {
        if other.d_in != self.d_out {
            return Err(Error::dim_mismatch(format!(
                "cannot compose: first channel outputs {}, second expects {}",
                self.d_out, other.d_in
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for k2 in &other.kraus {
            for k1 in &self.kraus {
                kraus.push(k2.matmul(k1));
            }
        }
        KrausChannel::new(kraus)
    }

    /// Stinespring isometry V: d_in → d_out·d_env with rows indexed (out, env)
    /// and K_e = (I ⊗ ⟨e|) V.
    pub fn stinespring_isometry(&self) -> CMatrix<T> {
        let d_env = self.kraus.len();
        let mut v = CMatrix::zeros(self.d_out * d_env, self.d_in);
        for (e, k) in self.kraus.iter().enumerate() {
            for o in 0..self.d_out {
                for i in 0..self.d_in {
                    v[(o * d_env + e, i)] = k[(o, i)];
                }
            }
        }
        v
    }
}

/// Dephasing in the given orthonormal basis (columns), Kraus {|b_i⟩⟨b_i|}.
pub fn dephasing_channel<T: Scalar>(basis: &CMatrix<T>) -> Result<KrausChannel<T>> {
    if !basis.is_square() {
        return Err(Error::bad_shape("dephasing basis must be square"));
    }
    let d = basis.rows();
    let defect = basis.dagger().matmul(basis).max_diff(&CMatrix::identity(d));
    if defect > T::tol(1e-9) {
        return Err(Error::NotIsometry {
            deviation: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let kraus = (0..d)
        .map(|i| {
            let b = basis.col(i);
            CMatrix::outer(&b, &b)
        })
        .collect();
    KrausChannel::new(kraus)
}

/// Channel from a Stinespring isometry V: rows indexed (out, env),
/// K_e = (I ⊗ ⟨e|) V; completeness follows from V†V = I.
pub fn channel_from_isometry<T: Scalar>(
    v: &CMatrix<T>,
    d_out: usize,
    d_env: usize,
) -> Result<KrausChannel<T>> {
    if v.rows() != d_out * d_env {
        return Err(Error::bad_shape(format!(
            "isometry has {} rows, expected d_out·d_env = {}",
            v.rows(),
            d_out * d_env
        )));
    }
    let d_in = v.cols();
    let defect = v.dagger().matmul(v).max_diff(&CMatrix::identity(d_in));
    if defect > T::tol(KRAUS_TOL) {
        return Err(Error::NotIsometry {
            deviation: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut kraus = Vec::with_capacity(d_env);
    for e in 0..d_env {
        let mut k = CMatrix::zeros(d_out, d_in);
        for o in 0..d_out {
            for i in 0..d_in {
                k[(o, i)] = v[(o * d_env + e, i)];
            }
        }
        kraus.push(k);
    }
    KrausChannel::new(kraus)
}

/// Haar-random channel with Kraus rank ≤ d_env, via a random Stinespring
/// isometry d_in → d_out·d_env.
pub fn random_channel<T: Scalar, R: Rng>(
    d_in: usize,
    d_out: usize,
    d_env: usize,
    rng: &mut R,
) -> Result<KrausChannel<T>> {
    if d_out * d_env < d_in {
        return Err(Error::bad_shape(format!(
            "need d_out·d_env ≥ d_in, got {d_out}·{d_env} < {d_in}"
        )));
    }
    let v = haar_isometry::<T, R>(d_in, d_out * d_env, rng)?;
    channel_from_isometry(&v, d_out, d_env)
}

/// Conjugation by X^a Z^b on factor 0, identity elsewhere.
pub fn weyl_twist<T: Scalar>(
    state: &DensityOperator<T>,
    a: usize,
    b: usize,
) -> Result<DensityOperator<T>> {
    let d = state.dims().dim(0);
    let w = weyl_shift::<T>(d, a % d).matmul(&weyl_phase::<T>(d, b % d));
    let (mat, dims) = conjugate_factor(state.mat(), state.dims(), 0, &w)?;
    Ok(DensityOperator::from_parts(mat, dims))
}

/// Apply the Stinespring isometry of a channel to one factor of a pure state;
/// the factor is replaced by two adjacent factors (output at `factor`,
/// environment at `factor + 1`) and the global state stays pure.
pub fn dilate_on_factor<T: Scalar>(
    psi: &PureState<T>,
    factor: usize,
    ch: &KrausChannel<T>,
) -> Result<PureState<T>> {
    if factor >= psi.dims().len() || psi.dims().dim(factor) != ch.d_in() {
        return Err(Error::dim_mismatch(format!(
            "channel expects dimension {} at factor {factor}, dims are {}",
            ch.d_in(),
            psi.dims()
        )));
    }
    let v = ch.stinespring_isometry();
    let (vec, dims_fused) = apply_to_factor_vec(psi.vec(), psi.dims(), factor, &v)?;
    // split the fused (out·env) factor into (out, env)
    let mut dims = dims_fused.as_slice().to_vec();
    dims[factor] = ch.d_out();
    dims.insert(factor + 1, ch.kraus().len());
    PureState::new(vec, DimList::new(dims)?, None)
}

/// Trace-and-replace with |0⟩⟨0|: Kraus {|0⟩⟨i|}.
pub fn replace_with_ground<T: Scalar>(d_in: usize, d_out: usize) -> KrausChannel<T> {
    let ground = basis_vector::<T>(d_out, 0);
    let kraus = (0..d_in)
        .map(|i| {
            let bra = basis_vector::<T>(d_in, i);
            CMatrix::outer(&ground, &bra)
        })
        .collect();
    KrausChannel::new(kraus).expect("replacement channel is trace preserving")
}
