//! Entropy-derived functionals, all base 2: von Neumann and relative
//! entropy, (conditional) mutual information, Holevo χ, channel mutual
//! information, coherent information, entanglement entropy.

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, marginal_eigenvalues, DimList};
use crate::scalar::{xlog2x, Scalar, C};
use crate::states::{max_entangled, DensityOperator, Ensemble, PureState, SUPPORT_EPS, STATE_TOL};

/// A real value in bits. Relative entropy may carry the +∞ sentinel
/// (`T::infinity()`), never a NaN.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bits<T>(pub T);

impl<T: Scalar> Bits<T> {
    pub fn value(self) -> T {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl<T: Scalar> std::fmt::Display for Bits<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

impl<T: Scalar> std::ops::Add for Bits<T> {
    type Output = Bits<T>;
    fn add(self, rhs: Bits<T>) -> Bits<T> {
        Bits(self.0 + rhs.0)
    }
}

impl<T: Scalar> std::ops::Sub for Bits<T> {
    type Output = Bits<T>;
    fn sub(self, rhs: Bits<T>) -> Bits<T> {
        Bits(self.0 - rhs.0)
    }
}

/// −Σ λ log₂ λ with the clamp policy: eigenvalues in [−1e-10, 0) are set to
/// 0 before the log; anything more negative is a `NotAState` error.
pub fn entropy_of_eigenvalues<T: Scalar>(evals: &[T]) -> Result<T> {
    let mut s = T::zero();
    for &l in evals {
        if l < -T::tol(STATE_TOL) {
            return Err(Error::NotAState {
                eigenvalue: l.to_f64().unwrap_or(f64::NAN),
            });
        }
        let clamped = l.max(T::zero()).min(T::one());
        s -= xlog2x(clamped);
    }
    Ok(s)
}

/// Von Neumann entropy S(ρ) in bits.
pub fn entropy<T: Scalar>(rho: &DensityOperator<T>) -> Result<Bits<T>> {
    let (evals, _) = hermitian_eig(rho.mat())?;
    Ok(Bits(entropy_of_eigenvalues(&evals)?))
}

/// Entropy of the reduced state of a pure vector on the `keep` factors,
/// computed on the smaller side of the cut.
pub fn subsystem_entropy<T: Scalar>(vec: &[C<T>], dims: &DimList, keep: &[usize]) -> Result<Bits<T>> {
    let evals = marginal_eigenvalues(vec, dims, keep)?;
    Ok(Bits(entropy_of_eigenvalues(&evals)?))
}

/// Relative entropy D(ρ‖σ) = Tr ρ(log ρ − log σ) in bits.
///
/// Computed in σ's eigenbasis with explicit support projection (support =
/// eigenvalues > 1e-12); when ρ puts weight above 1e-9 outside σ's support
/// the result is the +∞ sentinel.
pub fn relative_entropy<T: Scalar>(
    rho: &DensityOperator<T>,
    sigma: &DensityOperator<T>,
) -> Result<Bits<T>> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim_mismatch(format!(
            "relative entropy needs equal dimensions, got {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let (s_evals, s_vecs) = hermitian_eig(sigma.mat())?;
    let n = sigma.dim();
    // diagonal of ρ in σ's eigenbasis
    let mut rho_diag = Vec::with_capacity(n);
    for j in 0..n {
        let col = s_vecs.col(j);
        let rv = rho.mat().matvec(&col);
        let val = crate::linalg::inner(&col, &rv).re;
        rho_diag.push(val);
    }
    let support_eps = T::tol(SUPPORT_EPS);
    let outside: T = (0..n)
        .filter(|&j| s_evals[j] <= support_eps)
        .map(|j| rho_diag[j].max(T::zero()))
        .sum();
    if outside > T::tol(1e-9) {
        return Ok(Bits(T::infinity()));
    }
    let (r_evals, _) = hermitian_eig(rho.mat())?;
    let minus_s_rho = -entropy_of_eigenvalues(&r_evals)?;
    let mut cross = T::zero();
    for j in 0..n {
        if s_evals[j] > support_eps {
            cross += rho_diag[j] * s_evals[j].log2();
        }
    }
    Ok(Bits(minus_s_rho - cross))
}

fn check_disjoint_cover(dims: &DimList, parts: &[&[usize]]) -> Result<()> {
    let mut seen = vec![false; dims.len()];
    for part in parts {
        for &i in *part {
            if i >= dims.len() {
                return Err(Error::dim_mismatch(format!(
                    "factor index {i} out of range for {} factors",
                    dims.len()
                )));
            }
            if seen[i] {
                return Err(Error::dim_mismatch(format!(
                    "factor index {i} appears in more than one part"
                )));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::dim_mismatch(
            "partition does not cover every tensor factor",
        ));
    }
    Ok(())
}

/// I(A;B) = S(A) + S(B) − S(AB) for a bipartition of the factors.
pub fn mutual_information<T: Scalar>(
    rho: &DensityOperator<T>,
    part_a: &[usize],
    part_b: &[usize],
) -> Result<Bits<T>> {
    check_disjoint_cover(rho.dims(), &[part_a, part_b])?;
    let s_a = entropy(&rho.partial_trace(part_a)?)?;
    let s_b = entropy(&rho.partial_trace(part_b)?)?;
    let s_ab = entropy(rho)?;
    Ok(Bits(s_a.0 + s_b.0 - s_ab.0))
}

/// I(A;B|E) = S(AE) + S(BE) − S(E) − S(ABE). An empty E reduces to the
/// mutual information.
pub fn conditional_mutual_information<T: Scalar>(
    rho: &DensityOperator<T>,
    part_a: &[usize],
    part_b: &[usize],
    part_e: &[usize],
) -> Result<Bits<T>> {
    if part_e.is_empty() {
        return mutual_information(rho, part_a, part_b);
    }
    check_disjoint_cover(rho.dims(), &[part_a, part_b, part_e])?;
    let union = |x: &[usize], y: &[usize]| {
        let mut v = x.to_vec();
        v.extend_from_slice(y);
        v.sort_unstable();
        v
    };
    let s_ae = entropy(&rho.partial_trace(&union(part_a, part_e))?)?;
    let s_be = entropy(&rho.partial_trace(&union(part_b, part_e))?)?;
    let s_e = entropy(&rho.partial_trace(part_e)?)?;
    let s_abe = entropy(rho)?;
    Ok(Bits(s_ae.0 + s_be.0 - s_e.0 - s_abe.0))
}

/// Conditional entropy S(X|G) = S(XG) − S(G).
pub fn conditional_entropy<T: Scalar>(
    rho: &DensityOperator<T>,
    target: &[usize],
    given: &[usize],
) -> Result<Bits<T>> {
    let mut both = target.to_vec();
    both.extend_from_slice(given);
    both.sort_unstable();
    both.dedup();
    let s_both = entropy(&rho.partial_trace(&both)?)?;
    if given.is_empty() {
        return Ok(s_both);
    }
    let s_given = entropy(&rho.partial_trace(given)?)?;
    Ok(Bits(s_both.0 - s_given.0))
}

/// I(A;B|E) of a *pure* global state: the parts name factor subsets, every
/// factor outside them is traced out. Each entropy is computed on the
/// cheaper side of its cut.
pub fn cmi_of_pure<T: Scalar>(
    psi: &PureState<T>,
    part_a: &[usize],
    part_b: &[usize],
    part_e: &[usize],
) -> Result<Bits<T>> {
    let union = |x: &[usize], y: &[usize]| {
        let mut v = x.to_vec();
        v.extend_from_slice(y);
        v.sort_unstable();
        v
    };
    let abe = union(&union(part_a, part_b), part_e);
    let s_ae = subsystem_entropy(psi.vec(), psi.dims(), &union(part_a, part_e))?;
    let s_be = subsystem_entropy(psi.vec(), psi.dims(), &union(part_b, part_e))?;
    let s_abe = subsystem_entropy(psi.vec(), psi.dims(), &abe)?;
    let s_e = if part_e.is_empty() {
        Bits(T::zero())
    } else {
        subsystem_entropy(psi.vec(), psi.dims(), part_e)?
    };
    Ok(Bits(s_ae.0 + s_be.0 - s_e.0 - s_abe.0))
}

/// Holevo information χ = S(Σ p_i ρ_i) − Σ p_i S(ρ_i).
pub fn holevo_chi<T: Scalar>(ens: &Ensemble<T>) -> Result<Bits<T>> {
    let avg = entropy(&ens.average())?;
    let mut mean = T::zero();
    for (p, rho) in ens.items() {
        mean += *p * entropy(rho)?.0;
    }
    Ok(Bits(avg.0 - mean))
}

/// Holevo information of the image ensemble {p_i, Λ(ρ_i)}.
pub fn holevo_chi_through<T: Scalar>(ch: &KrausChannel<T>, ens: &Ensemble<T>) -> Result<Bits<T>> {
    let mapped: Vec<(T, DensityOperator<T>)> = ens
        .items()
        .iter()
        .map(|(p, rho)| Ok((*p, ch.apply(rho)?)))
        .collect::<Result<_>>()?;
    holevo_chi(&Ensemble::new(mapped)?)
}

/// Quantum mutual information of a channel relative to τ_d:
/// I(τ;Λ) = S(τ) + S(Λ(τ)) − S((id⊗Λ)Φ_d).
pub fn channel_mutual_information<T: Scalar>(ch: &KrausChannel<T>, d: usize) -> Result<Bits<T>> {
    if ch.d_in() != d {
        return Err(Error::dim_mismatch(format!(
            "channel expects input dimension {}, got d = {d}",
            ch.d_in()
        )));
    }
    let tau = crate::states::maximally_mixed::<T>(d);
    let s_tau = entropy(&tau)?;
    let s_out = entropy(&ch.apply(&tau)?)?;
    let phi = max_entangled::<T>(d);
    let joint = ch.apply_to_factor_pure(&phi, 1)?;
    let s_joint = entropy(&joint)?;
    Ok(Bits(s_tau.0 + s_out.0 - s_joint.0))
}

/// Coherent information S(Λ(τ)) − S((id⊗Λ)Φ_d) = I(τ;Λ) − log d.
pub fn coherent_information<T: Scalar>(ch: &KrausChannel<T>, d: usize) -> Result<Bits<T>> {
    if ch.d_in() != d {
        return Err(Error::dim_mismatch(format!(
            "channel expects input dimension {}, got d = {d}",
            ch.d_in()
        )));
    }
    let tau = crate::states::maximally_mixed::<T>(d);
    let s_out = entropy(&ch.apply(&tau)?)?;
    let phi = max_entangled::<T>(d);
    let s_joint = entropy(&ch.apply_to_factor_pure(&phi, 1)?)?;
    Ok(Bits(s_out.0 - s_joint.0))
}

/// Entropy of entanglement of a pure state across the given cut: the entropy
/// of either marginal (they agree).
pub fn entanglement_entropy<T: Scalar>(psi: &PureState<T>, cut_a: &[usize]) -> Result<Bits<T>> {
    if cut_a.is_empty() || cut_a.len() >= psi.dims().len() {
        return Err(Error::dim_mismatch(
            "entanglement entropy needs a proper bipartition",
        ));
    }
    subsystem_entropy(psi.vec(), psi.dims(), cut_a)
}
