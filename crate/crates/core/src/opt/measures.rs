//! The optimization-defined correlation measures.

use super::descent::minimize_multistart;
use super::extension::ExtensionProblem;
use super::povm::PovmProblem;
use super::{BestParams, OptConfig, OptReport};
use crate::channels::{dilate_on_factor, KrausChannel};
use crate::entropy::{
    cmi_of_pure, entropy_of_eigenvalues, mutual_information, subsystem_entropy, Bits,
};
use crate::error::{Error, Result};
use crate::linalg::{apply_to_factor_vec, marginal_eigenvalues, vec_norm, CMatrix};
use crate::scalar::Scalar;
use crate::states::{
    flower_purification_general, fourier_unitary, purify, DensityOperator, Ensemble, PureState,
};

const ISOMETRY_INIT_SCALE: f64 = 1.0;
const POVM_INIT_SCALE: f64 = 1.0;

fn check_bipartition<T: Scalar>(
    rho: &DensityOperator<T>,
    cut_a: &[usize],
    cut_b: &[usize],
) -> Result<()> {
    let n = rho.dims().len();
    let mut seen = vec![false; n];
    for &i in cut_a.iter().chain(cut_b) {
        if i >= n || seen[i] {
            return Err(Error::dim_mismatch(format!(
                "cut sets must disjointly cover 0..{n}, got A = {cut_a:?}, B = {cut_b:?}"
            )));
        }
        seen[i] = true;
    }
    if seen.iter().any(|&s| !s) || cut_a.is_empty() || cut_b.is_empty() {
        return Err(Error::dim_mismatch(format!(
            "cut sets must disjointly cover 0..{n}, got A = {cut_a:?}, B = {cut_b:?}"
        )));
    }
    Ok(())
}

fn report_from_outcomes<T: Scalar>(
    value: T,
    params: BestParams<T>,
    outcomes: Vec<super::descent::RestartOutcome<T>>,
    best: usize,
    cfg: &OptConfig,
) -> OptReport<T> {
    OptReport {
        value: Bits(value),
        best_params: params,
        restarts: outcomes.len(),
        iterations: outcomes.iter().map(|o| o.iterations).collect(),
        converged: outcomes[best].converged,
        history: outcomes.iter().map(|o| o.value).collect(),
        config: cfg.clone(),
    }
}

/// Upper bound on squashed entanglement: minimises ½ I(A;B|E) over channels
/// from the purifier to an `env_dim`-dimensional E. The trivial extension is
/// in the search space, so the result never exceeds ½ I(A;B) + roundoff.
/// With `env_dim = 1` (or a pure input) the objective is constant in the
/// channel and the exact value ½ I(A;B) is returned without a search.
pub fn squashed_upper_bound<T: Scalar>(
    rho: &DensityOperator<T>,
    cut_a: &[usize],
    cut_b: &[usize],
    env_dim: usize,
    cfg: &OptConfig,
) -> Result<OptReport<T>> {
    check_bipartition(rho, cut_a, cut_b)?;
    if env_dim == 0 {
        return Err(Error::bad_shape("env_dim must be ≥ 1"));
    }
    let psi = purify(rho)?;
    let d_in = psi.dims().dim(psi.dims().len() - 1);
    if env_dim == 1 || d_in == 1 {
        // E stays uncorrelated from AB: I(A;B|E) = I(A;B) for every channel
        let half_mi = mutual_information(rho, cut_a, cut_b)?.0 * T::real(0.5);
        return Ok(OptReport::exact(half_mi, cfg));
    }
    let d_env = cfg.d_env.unwrap_or(d_in);
    let problem = ExtensionProblem::new(&psi, cut_a, cut_b, env_dim, d_env)?;
    let objective = |params: &[T]| {
        problem
            .cmi_from_params(params)
            .map(|v| v * T::real(0.5))
            .unwrap_or_else(|_| T::infinity())
    };
    let (best, outcomes) =
        minimize_multistart(&objective, problem.param_count(), ISOMETRY_INIT_SCALE, cfg)?;
    let v = problem.isometry_from_params(&outcomes[best].params)?;
    let value = problem.cmi(&v)? * T::real(0.5);
    Ok(report_from_outcomes(
        value,
        BestParams::Isometry(v),
        outcomes,
        best,
        cfg,
    ))
}

/// POVM measurement on the purifier as the extension: E is the classical
/// outcome register and the objective ½ Σ_y p_y I(A;B)_{ρ_y} is minimised
/// over POVMs with the given number of outcomes.
pub fn squashed_upper_bound_measured<T: Scalar>(
    rho: &DensityOperator<T>,
    cut_a: &[usize],
    cut_b: &[usize],
    outcomes: usize,
    cfg: &OptConfig,
) -> Result<OptReport<T>> {
    check_bipartition(rho, cut_a, cut_b)?;
    let psi = purify(rho)?;
    let purifier = psi.dims().len() - 1;
    let d_in = psi.dims().dim(purifier);
    if d_in == 1 || outcomes <= 1 {
        let half_mi = mutual_information(rho, cut_a, cut_b)?.0 * T::real(0.5);
        return Ok(OptReport::exact(half_mi, cfg));
    }
    let povm = PovmProblem::for_dimension(d_in, outcomes)?;
    let problem = MeasuredExtension {
        psi: &psi,
        cut_a,
        cut_b,
        purifier,
    };
    let objective = |params: &[T]| match povm.kraus_from_params(params) {
        Ok(kraus) => problem
            .half_cmi(&kraus)
            .unwrap_or_else(|_| T::infinity()),
        Err(_) => T::infinity(),
    };
    let (best, descents) =
        minimize_multistart(&objective, povm.param_count(), POVM_INIT_SCALE, cfg)?;
    let kraus = povm.kraus_from_params(&descents[best].params)?;
    let value = problem.half_cmi(&kraus)?;
    let effects = kraus.iter().map(|m| m.dagger().matmul(m)).collect();
    Ok(report_from_outcomes(
        value,
        BestParams::Povm(effects),
        descents,
        best,
        cfg,
    ))
}

struct MeasuredExtension<'a, T> {
    psi: &'a PureState<T>,
    cut_a: &'a [usize],
    cut_b: &'a [usize],
    purifier: usize,
}

impl<T: Scalar> MeasuredExtension<'_, T> {
    /// ½ Σ_y p_y I(A;B) of the post-measurement branches.
    fn half_cmi(&self, kraus: &[CMatrix<T>]) -> Result<T> {
        let mut acc = T::zero();
        let ab: Vec<usize> = {
            let mut v = self.cut_a.to_vec();
            v.extend_from_slice(self.cut_b);
            v.sort_unstable();
            v
        };
        for m in kraus {
            let (w, dims) = apply_to_factor_vec(self.psi.vec(), self.psi.dims(), self.purifier, m)?;
            let p = vec_norm(&w).powi(2);
            if p <= T::real(1e-14) {
                continue;
            }
            let branch_entropy = |keep: &[usize]| -> Result<T> {
                let evals = marginal_eigenvalues(&w, &dims, keep)?;
                let normalised: Vec<T> = evals.iter().map(|&l| l / p).collect();
                entropy_of_eigenvalues(&normalised)
            };
            let s_a = branch_entropy(self.cut_a)?;
            let s_b = branch_entropy(self.cut_b)?;
            let s_ab = branch_entropy(&ab)?;
            acc += p * (s_a + s_b - s_ab);
        }
        Ok(acc * T::real(0.5))
    }
}

/// Upper bound on the entanglement of purification at a fixed extension
/// dimension: minimises S(AE) over channels from the purifier to E. Rank-one
/// inputs short-circuit to the entanglement entropy of their unique
/// purification; `ext_dim = 1` evaluates the trivial extension S(A) exactly.
pub fn entanglement_of_purification<T: Scalar>(
    rho: &DensityOperator<T>,
    cut_a: &[usize],
    cut_b: &[usize],
    ext_dim: usize,
    cfg: &OptConfig,
) -> Result<OptReport<T>> {
    check_bipartition(rho, cut_a, cut_b)?;
    if ext_dim == 0 {
        return Err(Error::bad_shape("ext_dim must be ≥ 1"));
    }
    let psi = purify(rho)?;
    let d_in = psi.dims().dim(psi.dims().len() - 1);
    if d_in == 1 {
        // pure input: E_P is the entanglement entropy across the cut
        let value = subsystem_entropy(psi.vec(), psi.dims(), cut_a)?.0;
        return Ok(OptReport::exact(value, cfg));
    }
    if ext_dim == 1 {
        let value = crate::entropy::entropy(&rho.partial_trace(cut_a)?)?.0;
        return Ok(OptReport::exact(value, cfg));
    }
    let d_env = cfg.d_env.unwrap_or(d_in);
    let problem = ExtensionProblem::new(&psi, cut_a, cut_b, ext_dim, d_env)?;
    let objective = |params: &[T]| {
        problem
            .entropy_ae_from_params(params)
            .unwrap_or_else(|_| T::infinity())
    };
    let (best, outcomes) =
        minimize_multistart(&objective, problem.param_count(), ISOMETRY_INIT_SCALE, cfg)?;
    let v = problem.isometry_from_params(&outcomes[best].params)?;
    let value = problem.entropy_ae(&v)?;
    Ok(report_from_outcomes(
        value,
        BestParams::Isometry(v),
        outcomes,
        best,
        cfg,
    ))
}

/// Entanglement-of-purification estimates over the extension-dimension
/// series 1..=cap, reported as the running minimum (the search spaces nest,
/// so the series is monotone non-increasing by construction).
pub fn ep_series<T: Scalar>(
    rho: &DensityOperator<T>,
    cut_a: &[usize],
    cut_b: &[usize],
    cap: usize,
    cfg: &OptConfig,
) -> Result<Vec<(usize, Bits<T>)>> {
    let mut out = Vec::with_capacity(cap);
    let mut best = T::infinity();
    for ext in 1..=cap.max(1) {
        let report = entanglement_of_purification(rho, cut_a, cut_b, ext, cfg)?;
        if report.value.0 < best {
            best = report.value.0;
        }
        out.push((ext, Bits(best)));
    }
    Ok(out)
}

/// Lower bound on accessible information: maximises the classical mutual
/// information between ensemble label and POVM outcome.
pub fn accessible_information<T: Scalar>(
    ens: &Ensemble<T>,
    outcomes: usize,
    cfg: &OptConfig,
) -> Result<OptReport<T>> {
    let problem = PovmProblem::new(ens, outcomes)?;
    let objective = |params: &[T]| match problem.mutual_information_from_params(params) {
        Ok(mi) => -mi.0,
        Err(_) => T::infinity(),
    };
    let (best, mut descents) =
        minimize_multistart(&objective, problem.param_count(), POVM_INIT_SCALE, cfg)?;
    let effects = problem.effects_from_params(&descents[best].params)?;
    let value = problem.mutual_information(&effects)?.0;
    // history holds the (maximised) information per restart
    for o in &mut descents {
        o.value = -o.value;
    }
    Ok(report_from_outcomes(
        value,
        BestParams::Povm(effects),
        descents,
        best,
        cfg,
    ))
}

/// Entanglement of formation of the locking family, through the identity
/// E_F = S(ρ^{AA'}) − I_acc(induced C-ensemble). The induced ensemble is
/// {1/(2dm), V_k U_j |i⟩} with U_0 = 1 and U_1 the Fourier transform; the
/// accessible information is maximised over POVMs with d² outcomes.
pub fn ef_flower<T: Scalar>(
    d: usize,
    unitaries: &[CMatrix<T>],
    cfg: &OptConfig,
) -> Result<Bits<T>> {
    let psi = flower_purification_general(d, unitaries)?;
    let s_aa = subsystem_entropy(psi.vec(), psi.dims(), &[0, 1])?.0;
    let ens = flower_induced_ensemble(d, unitaries)?;
    let iacc = accessible_information(&ens, d * d, cfg)?;
    Ok(Bits(s_aa - iacc.value.0))
}

/// The ensemble the C register of the locking purification carries:
/// {1/(2dm), V_k U_j |i⟩⟨i| U_j† V_k†}.
pub fn flower_induced_ensemble<T: Scalar>(
    d: usize,
    unitaries: &[CMatrix<T>],
) -> Result<Ensemble<T>> {
    let m = unitaries.len();
    if m == 0 {
        return Err(Error::bad_shape("need at least one unitary"));
    }
    let u1 = fourier_unitary::<T>(d);
    let p = T::one() / (T::real(2.0) * T::from_count(d * m));
    let dims = crate::linalg::DimList::single(d);
    let mut items = Vec::with_capacity(2 * d * m);
    for j in 0..2 {
        for v in unitaries {
            let w = if j == 0 { v.clone() } else { v.matmul(&u1) };
            for i in 0..d {
                let col = w.col(i);
                items.push((
                    p,
                    DensityOperator::new(CMatrix::outer(&col, &col), dims.clone())?,
                ));
            }
        }
    }
    Ensemble::new(items)
}

/// ½ I(A;B|E) for one specific channel extension of a purification whose
/// purifying factor is last. Deterministic, no optimization.
pub fn cmi_for_extension_pure<T: Scalar>(
    psi: &PureState<T>,
    channel: &KrausChannel<T>,
    cut_a: &[usize],
    cut_b: &[usize],
) -> Result<Bits<T>> {
    let purifier = psi
        .purifying_factor()
        .ok_or_else(|| Error::dim_mismatch("state has no designated purifying factor"))?;
    if purifier != psi.dims().len() - 1 {
        return Err(Error::dim_mismatch(
            "extension evaluation expects the purifying factor last",
        ));
    }
    if channel.d_in() != psi.dims().dim(purifier) {
        return Err(Error::dim_mismatch(format!(
            "channel expects input dimension {}, purifier has {}",
            channel.d_in(),
            psi.dims().dim(purifier)
        )));
    }
    let dilated = dilate_on_factor(psi, purifier, channel)?;
    let cmi = cmi_of_pure(&dilated, cut_a, cut_b, &[purifier])?;
    Ok(Bits(cmi.0 * T::real(0.5)))
}

/// ½ I(A;B|E) for a channel on the eigen-purification of `rho`.
pub fn cmi_for_extension<T: Scalar>(
    rho: &DensityOperator<T>,
    channel: &KrausChannel<T>,
    cut_a: &[usize],
    cut_b: &[usize],
) -> Result<Bits<T>> {
    check_bipartition(rho, cut_a, cut_b)?;
    let psi = purify(rho)?;
    cmi_for_extension_pure(&psi, channel, cut_a, cut_b)
}

/// E_P estimates for two bipartite states and their tensor product with the
/// A sides grouped. Each estimate is the best of the trivial extension and a
/// bounded search at ext_dim 2.
pub fn ep_additivity_check<T: Scalar>(
    rho1: &DensityOperator<T>,
    rho2: &DensityOperator<T>,
    cfg: &OptConfig,
) -> Result<(Bits<T>, Bits<T>, Bits<T>)> {
    if rho1.dims().len() != 2 || rho2.dims().len() != 2 {
        return Err(Error::dim_mismatch(
            "additivity check expects bipartite states (two factors each)",
        ));
    }
    let ep = |rho: &DensityOperator<T>, a: &[usize], b: &[usize]| -> Result<Bits<T>> {
        let series = ep_series(rho, a, b, 2, cfg)?;
        Ok(series.last().expect("nonempty series").1)
    };
    let e1 = ep(rho1, &[0], &[1])?;
    let e2 = ep(rho2, &[0], &[1])?;
    // (A1,B1)⊗(A2,B2) regrouped to (A1,A2,B1,B2)
    let joint = rho1.tensor(rho2).permute(&[0, 2, 1, 3])?;
    let e12 = ep(&joint, &[0, 1], &[2, 3])?;
    Ok((e1, e2, e12))
}
