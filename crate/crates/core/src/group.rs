//! Finite Abelian groups behind the uncertainty inequality: ℤ_d with the
//! discrete Fourier transform, and ℤ_2^ℓ with the Hadamard transform. One
//! code path supplies the Fourier unitary and the shift/phase operator pair
//! for either group.

use crate::linalg::{kron, CMatrix};
use crate::scalar::Scalar;
use crate::states::{fourier_unitary, hadamard_tensor, weyl_phase, weyl_shift};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbelianGroup {
    /// ℤ_d, integers modulo d.
    Cyclic { d: usize },
    /// ℤ_2^ℓ, bit strings of length ℓ under XOR.
    BitStrings { l: usize },
}

impl AbelianGroup {
    pub fn order(&self) -> usize {
        match *self {
            AbelianGroup::Cyclic { d } => d,
            AbelianGroup::BitStrings { l } => 1 << l,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            AbelianGroup::Cyclic { d } => format!("Z{d}"),
            AbelianGroup::BitStrings { l } => format!("Z2^{l}"),
        }
    }

    /// Fourier transform of the group.
    pub fn fourier<T: Scalar>(&self) -> CMatrix<T> {
        match *self {
            AbelianGroup::Cyclic { d } => fourier_unitary(d),
            AbelianGroup::BitStrings { l } => hadamard_tensor(l),
        }
    }

    /// Shift operator for the group element g: X^g for ℤ_d, ⊗σ_x^{g_i} for
    /// ℤ_2^ℓ.
    pub fn shift<T: Scalar>(&self, g: usize) -> CMatrix<T> {
        match *self {
            AbelianGroup::Cyclic { d } => weyl_shift(d, g % d),
            AbelianGroup::BitStrings { l } => pauli_string(l, g, &weyl_shift(2, 1)),
        }
    }

    /// Phase operator for the character labelled g: Z^g for ℤ_d, ⊗σ_z^{g_i}
    /// for ℤ_2^ℓ.
    pub fn phase<T: Scalar>(&self, g: usize) -> CMatrix<T> {
        match *self {
            AbelianGroup::Cyclic { d } => weyl_phase(d, g % d),
            AbelianGroup::BitStrings { l } => pauli_string(l, g, &weyl_phase(2, 1)),
        }
    }
}

fn pauli_string<T: Scalar>(l: usize, bits: usize, single: &CMatrix<T>) -> CMatrix<T> {
    let eye = CMatrix::identity(2);
    let mut out = CMatrix::identity(1);
    for pos in 0..l {
        let bit = (bits >> (l - 1 - pos)) & 1;
        let factor = if bit == 1 { single } else { &eye };
        out = kron(&out, factor);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bitstring_operators_match_hadamard_conjugation() {
        // Z(g) = U X(g) U† with U the group Fourier transform
        let g = AbelianGroup::BitStrings { l: 2 };
        let u = g.fourier::<f64>();
        for elem in 0..4 {
            let x = g.shift::<f64>(elem);
            let z = g.phase::<f64>(elem);
            let conj = u.matmul(&x).matmul(&u.dagger());
            assert!(conj.max_diff(&z) < 1e-12);
        }
    }

    #[test]
    fn phase_twirl_dephases_for_both_groups() {
        // (1/|G|) Σ_g Z(g) M Z(g)† zeroes all off-diagonal entries
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for group in [AbelianGroup::Cyclic { d: 4 }, AbelianGroup::BitStrings { l: 2 }] {
            let n = group.order();
            let m = random_hermitian::<f64, _>(n, &mut rng);
            let mut avg = CMatrix::zeros(n, n);
            for g in 0..n {
                let z = group.phase::<f64>(g);
                avg = &avg + &z.matmul(&m).matmul(&z.dagger());
            }
            avg = avg.scale_re(1.0 / n as f64);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        assert!(avg[(i, j)].norm() < 1e-11);
                    } else {
                        assert!((avg[(i, j)] - m[(i, j)]).norm() < 1e-11);
                    }
                }
            }
        }
    }

    #[test]
    fn shift_twirl_dephases_in_fourier_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for group in [AbelianGroup::Cyclic { d: 4 }, AbelianGroup::BitStrings { l: 2 }] {
            let n = group.order();
            let u = group.fourier::<f64>();
            let m = random_hermitian::<f64, _>(n, &mut rng);
            let mut avg = CMatrix::zeros(n, n);
            for g in 0..n {
                let x = group.shift::<f64>(g);
                avg = &avg + &x.matmul(&m).matmul(&x.dagger());
            }
            avg = avg.scale_re(1.0 / n as f64);
            // rotating into the Fourier basis must leave a diagonal matrix
            let rotated = u.dagger().matmul(&avg).matmul(&u);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        assert!(rotated[(i, j)].norm() < 1e-11);
                    }
                }
            }
        }
    }
}
