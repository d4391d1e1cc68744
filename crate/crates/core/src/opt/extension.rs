//! Channel-extension objectives. A purification ψ (purifier last) is fixed;
//! a candidate isometry V: C → E⊗env replaces the purifier by two factors
//! (E at the purifier slot, env after it) and the objectives are entropies
//! of the still-pure global state, each computed on the cheaper side of its
//! cut.

use crate::entropy::entropy_of_eigenvalues;
use crate::error::{Error, Result};
use crate::linalg::{apply_to_factor_vec, marginal_eigenvalues, CMatrix, DimList};
use crate::scalar::{Scalar, C};
use crate::states::PureState;

#[derive(Debug, Clone)]
pub struct ExtensionProblem<T> {
    psi: Vec<C<T>>,
    dims: DimList,
    purifier: usize,
    cut_a: Vec<usize>,
    cut_b: Vec<usize>,
    ext_dim: usize,
    d_env: usize,
}

impl<T: Scalar> ExtensionProblem<T> {
    /// `psi` must carry its purifying factor as the *last* tensor factor.
    pub fn new(
        psi: &PureState<T>,
        cut_a: &[usize],
        cut_b: &[usize],
        ext_dim: usize,
        d_env: usize,
    ) -> Result<Self> {
        let purifier = psi
            .purifying_factor()
            .ok_or_else(|| Error::dim_mismatch("state has no designated purifying factor"))?;
        if purifier != psi.dims().len() - 1 {
            return Err(Error::dim_mismatch(
                "extension search expects the purifying factor last",
            ));
        }
        if ext_dim == 0 || d_env == 0 {
            return Err(Error::bad_shape("extension dimensions must be ≥ 1"));
        }
        let d_in = psi.dims().dim(purifier);
        if ext_dim * d_env < d_in {
            return Err(Error::bad_shape(format!(
                "isometry needs ext_dim·d_env ≥ purifier dimension: {ext_dim}·{d_env} < {d_in}"
            )));
        }
        for &i in cut_a.iter().chain(cut_b) {
            if i >= purifier {
                return Err(Error::dim_mismatch(format!(
                    "cut factor {i} collides with the purifier at {purifier}"
                )));
            }
        }
        Ok(ExtensionProblem {
            psi: psi.vec().to_vec(),
            dims: psi.dims().clone(),
            purifier,
            cut_a: cut_a.to_vec(),
            cut_b: cut_b.to_vec(),
            ext_dim,
            d_env,
        })
    }

    pub fn d_in(&self) -> usize {
        self.dims.dim(self.purifier)
    }

    pub fn big_dim(&self) -> usize {
        self.ext_dim * self.d_env
    }

    pub fn param_count(&self) -> usize {
        super::stiefel::param_count(self.big_dim())
    }

    pub fn isometry_from_params(&self, params: &[T]) -> Result<CMatrix<T>> {
        super::stiefel::isometry_from_params(params, self.big_dim(), self.d_in())
    }

    /// Extended pure state and its factor list: the purifier slot becomes E,
    /// the environment sits right after it.
    fn extend(&self, v: &CMatrix<T>) -> Result<(Vec<C<T>>, DimList)> {
        let (vec, _) = apply_to_factor_vec(&self.psi, &self.dims, self.purifier, v)?;
        let mut dims = self.dims.as_slice().to_vec();
        dims[self.purifier] = self.ext_dim;
        dims.insert(self.purifier + 1, self.d_env);
        Ok((vec, DimList::new(dims)?))
    }

    fn entropy_of(&self, vec: &[C<T>], dims: &DimList, keep: &[usize]) -> Result<T> {
        let evals = marginal_eigenvalues(vec, dims, keep)?;
        entropy_of_eigenvalues(&evals)
    }

    /// I(A;B|E) for the extension generated by `v` (full conditional mutual
    /// information, not halved).
    pub fn cmi(&self, v: &CMatrix<T>) -> Result<T> {
        let (vec, dims) = self.extend(v)?;
        let e = self.purifier;
        let mut ae = self.cut_a.clone();
        ae.push(e);
        let mut be = self.cut_b.clone();
        be.push(e);
        let mut abe = self.cut_a.clone();
        abe.extend_from_slice(&self.cut_b);
        abe.push(e);
        let s_ae = self.entropy_of(&vec, &dims, &ae)?;
        let s_be = self.entropy_of(&vec, &dims, &be)?;
        let s_e = self.entropy_of(&vec, &dims, &[e])?;
        let s_abe = self.entropy_of(&vec, &dims, &abe)?;
        Ok(s_ae + s_be - s_e - s_abe)
    }

    /// S(AE) for the extension generated by `v`.
    pub fn entropy_ae(&self, v: &CMatrix<T>) -> Result<T> {
        let (vec, dims) = self.extend(v)?;
        let mut ae = self.cut_a.clone();
        ae.push(self.purifier);
        self.entropy_of(&vec, &dims, &ae)
    }

    pub fn cmi_from_params(&self, params: &[T]) -> Result<T> {
        self.cmi(&self.isometry_from_params(params)?)
    }

    pub fn entropy_ae_from_params(&self, params: &[T]) -> Result<T> {
        self.entropy_ae(&self.isometry_from_params(params)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{dilate_on_factor, random_channel};
    use crate::entropy::{cmi_of_pure, conditional_mutual_information};
    use crate::states::{flower_purification, purify, random_density};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cmi_matches_dense_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let psi = flower_purification::<f64>(2);
        let problem = ExtensionProblem::new(&psi, &[0, 1], &[2, 3], 2, 2).unwrap();
        let ch = random_channel::<f64, _>(2, 2, 2, &mut rng).unwrap();
        let v = ch.stinespring_isometry();
        let fast = problem.cmi(&v).unwrap();

        let dilated = dilate_on_factor(&psi, 4, &ch).unwrap();
        let rho = dilated.reduced_density(&[0, 1, 2, 3, 4]).unwrap();
        let dense = conditional_mutual_information(&rho, &[0, 1], &[2, 3], &[4])
            .unwrap()
            .0;
        assert!((fast - dense).abs() < 1e-9, "{fast} vs {dense}");

        let via_pure = cmi_of_pure(&dilated, &[0, 1], &[2, 3], &[4]).unwrap().0;
        assert!((fast - via_pure).abs() < 1e-11);
    }

    #[test]
    fn entropy_ae_matches_dense_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let rho = random_density::<f64, _>(4, 3, &mut rng);
        let rho = crate::states::DensityOperator::new(
            rho.mat().clone(),
            DimList::new(vec![2, 2]).unwrap(),
        )
        .unwrap();
        let psi = purify(&rho).unwrap();
        let problem = ExtensionProblem::new(&psi, &[0], &[1], 3, 2).unwrap();
        let ch = random_channel::<f64, _>(psi.dims().dim(2), 3, 2, &mut rng).unwrap();
        let v = ch.stinespring_isometry();
        let fast = problem.entropy_ae(&v).unwrap();

        let dilated = dilate_on_factor(&psi, 2, &ch).unwrap();
        let ae = dilated.reduced_density(&[0, 2]).unwrap();
        let dense = crate::entropy::entropy(&ae).unwrap().0;
        assert!((fast - dense).abs() < 1e-9);
    }

    #[test]
    fn parameterised_path_agrees_with_direct_isometry() {
        let psi = flower_purification::<f64>(2);
        let problem = ExtensionProblem::new(&psi, &[0, 1], &[2, 3], 2, 2).unwrap();
        let params: Vec<f64> = (0..problem.param_count())
            .map(|i| ((i * 7 + 3) as f64 * 0.21).sin() * 0.4)
            .collect();
        let v = problem.isometry_from_params(&params).unwrap();
        let a = problem.cmi(&v).unwrap();
        let b = problem.cmi_from_params(&params).unwrap();
        assert_eq!(a, b);
    }
}
