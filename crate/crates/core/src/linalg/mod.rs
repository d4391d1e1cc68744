//! Dense complex linear-algebra kernel: matrices, Hermitian eigensolver,
//! tensor-factor operations, Haar sampling.

pub mod eig;
pub mod matrix;
pub mod random;
pub mod tensor;

pub use eig::{exp_antihermitian, hermitian_eig, HERMITICITY_TOL};
pub use matrix::{basis_vector, inner, kron, kron_vec, vec_norm, CMatrix};
pub use random::{gaussian_complex, ginibre, haar_isometry, haar_unitary, random_hermitian};
pub use tensor::{
    apply_to_factor_vec, conjugate_factor, inverse_permutation, marginal_eigenvalues,
    partial_trace, permute_systems_mat, permute_systems_vec, reduced_density_of_vec, DimList,
};
