//! POVM parameterisation and the classical mutual-information objective for
//! accessible information. Effects are A_i = T^{-1/2} B_i†B_i T^{-1/2} with
//! T = Σ B_j†B_j and unconstrained complex B_i, so feasibility holds by
//! construction.

use crate::entropy::Bits;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, CMatrix};
use crate::scalar::{xlog2x, Scalar};
use crate::states::Ensemble;
use num_complex::Complex;

#[derive(Debug, Clone)]
pub struct PovmProblem<T> {
    probs: Vec<T>,
    states: Vec<CMatrix<T>>,
    d: usize,
    outcomes: usize,
}

impl<T: Scalar> PovmProblem<T> {
    pub fn new(ens: &Ensemble<T>, outcomes: usize) -> Result<Self> {
        if outcomes == 0 {
            return Err(Error::bad_shape("need at least one POVM outcome"));
        }
        let d = ens.items()[0].1.dim();
        Ok(PovmProblem {
            probs: ens.items().iter().map(|(p, _)| *p).collect(),
            states: ens.items().iter().map(|(_, rho)| rho.mat().clone()).collect(),
            d,
            outcomes,
        })
    }

    /// Parameterisation-only problem (no ensemble attached); used when the
    /// POVM feeds something other than the label/outcome mutual information.
    pub fn for_dimension(d: usize, outcomes: usize) -> Result<Self> {
        if outcomes == 0 || d == 0 {
            return Err(Error::bad_shape("POVM needs d ≥ 1 and outcomes ≥ 1"));
        }
        Ok(PovmProblem {
            probs: Vec::new(),
            states: Vec::new(),
            d,
            outcomes,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    /// outcomes × d² complex entries, as (re, im) pairs.
    pub fn param_count(&self) -> usize {
        self.outcomes * self.d * self.d * 2
    }

    /// Measurement-instrument Kraus operators M_i = B_i T^{-1/2}, so that
    /// A_i = M_i†M_i and Σ A_i = I exactly. A near-singular T means the
    /// parameter point cannot represent a POVM; the error lets the line
    /// search back away from it.
    pub fn kraus_from_params(&self, params: &[T]) -> Result<Vec<CMatrix<T>>> {
        debug_assert_eq!(params.len(), self.param_count());
        let d = self.d;
        let mut bs = Vec::with_capacity(self.outcomes);
        let mut idx = 0;
        for _ in 0..self.outcomes {
            let mut b = CMatrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    b[(i, j)] = Complex::new(params[idx], params[idx + 1]);
                    idx += 2;
                }
            }
            bs.push(b);
        }
        let mut t = CMatrix::zeros(d, d);
        for b in &bs {
            t = &t + &b.dagger().matmul(b);
        }
        let (evals, vecs) = hermitian_eig(&t)?;
        let largest = evals[d - 1];
        if largest <= T::zero() || evals[0] < largest * T::real(1e-12) {
            return Err(Error::bad_shape(
                "POVM normaliser T = ΣB†B is numerically singular",
            ));
        }
        // T^{-1/2}
        let mut inv_sqrt = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..d {
                    let w = T::one() / evals[k].sqrt();
                    acc += vecs[(i, k)] * Complex::new(w, T::zero()) * vecs[(j, k)].conj();
                }
                inv_sqrt[(i, j)] = acc;
            }
        }
        Ok(bs.iter().map(|b| b.matmul(&inv_sqrt)).collect())
    }

    /// POVM effects A_i = M_i†M_i.
    pub fn effects_from_params(&self, params: &[T]) -> Result<Vec<CMatrix<T>>> {
        Ok(self
            .kraus_from_params(params)?
            .iter()
            .map(|m| m.dagger().matmul(m))
            .collect())
    }

    /// Classical mutual information I(X;Y) in bits between the ensemble
    /// label and the measurement outcome.
    pub fn mutual_information(&self, effects: &[CMatrix<T>]) -> Result<Bits<T>> {
        let nx = self.probs.len();
        let ny = effects.len();
        let mut joint = vec![T::zero(); nx * ny];
        for (x, rho) in self.states.iter().enumerate() {
            for (y, eff) in effects.iter().enumerate() {
                // Tr(A_y ρ_x)
                let mut tr = T::zero();
                for i in 0..self.d {
                    for j in 0..self.d {
                        tr += (eff[(i, j)] * rho[(j, i)]).re;
                    }
                }
                joint[x * ny + y] = (self.probs[x] * tr).max(T::zero());
            }
        }
        let mut px = vec![T::zero(); nx];
        let mut py = vec![T::zero(); ny];
        for x in 0..nx {
            for y in 0..ny {
                px[x] += joint[x * ny + y];
                py[y] += joint[x * ny + y];
            }
        }
        let h = |p: &[T]| -p.iter().map(|&v| xlog2x(v)).sum::<T>();
        Ok(Bits(h(&px) + h(&py) - h(&joint)))
    }

    pub fn mutual_information_from_params(&self, params: &[T]) -> Result<Bits<T>> {
        let effects = self.effects_from_params(params)?;
        self.mutual_information(&effects)
    }
}
