//! Property tests for the tensor kernel, driven by seeded construction so
//! proptest shrinks over a single seed.

use entlock_core::linalg::{
    haar_unitary, hermitian_eig, inverse_permutation, kron, partial_trace, permute_systems_mat,
    permute_systems_vec, random_hermitian, CMatrix, DimList,
};
use entlock_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state_mat(dims: &[usize], seed: u64) -> CMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: usize = dims.iter().product();
    let g = entlock_core::linalg::ginibre::<f64, _>(n, n, &mut rng);
    let h = g.matmul(&g.dagger());
    let tr = h.trace().re;
    h.scale_re(1.0 / tr)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn partial_trace_composes(seed in 0u64..1_000_000) {
        // tracing E then B equals tracing {B, E} at once
        let dims = DimList::new(vec![2, 2, 2]).unwrap();
        let rho = random_state_mat(&[2, 2, 2], seed);
        let step1 = partial_trace(&rho, &dims, &[0, 1]).unwrap();
        let dims2 = DimList::new(vec![2, 2]).unwrap();
        let step2 = partial_trace(&step1, &dims2, &[0]).unwrap();
        let direct = partial_trace(&rho, &dims, &[0]).unwrap();
        prop_assert!(step2.max_diff(&direct) < 1e-12);
    }

    #[test]
    fn kron_is_associative(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = entlock_core::linalg::ginibre::<f64, _>(2, 2, &mut rng);
        let b = entlock_core::linalg::ginibre::<f64, _>(2, 3, &mut rng);
        let c = entlock_core::linalg::ginibre::<f64, _>(3, 2, &mut rng);
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_diff(&right) < 1e-15 * (1.0 + left.max_norm()));
    }

    #[test]
    fn spectrum_invariant_under_haar_conjugation(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_hermitian::<f64, _>(5, &mut rng);
        let u = haar_unitary::<f64, _>(5, &mut rng);
        let conj = u.matmul(&m).matmul(&u.dagger());
        let (ev1, _) = hermitian_eig(&m).unwrap();
        let (ev2, _) = hermitian_eig(&conj).unwrap();
        for (a, b) in ev1.iter().zip(&ev2) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn permute_then_trace_matches_trace_then_relabel(seed in 0u64..1_000_000, perm_idx in 0usize..6) {
        let dims = DimList::new(vec![2, 3, 2]).unwrap();
        let rho = random_state_mat(&[2, 3, 2], seed);
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0],
        ];
        let perm = perms[perm_idx];
        let (permuted, pdims) = permute_systems_mat(&rho, &dims, &perm).unwrap();
        // keep original factors {0, 2}: in the permuted picture they sit at
        // the positions where perm maps to 0 and 2
        let keep_src = [0usize, 2];
        let mut keep_dst: Vec<usize> = keep_src
            .iter()
            .map(|&s| perm.iter().position(|&p| p == s).unwrap())
            .collect();
        keep_dst.sort_unstable();
        let via_permute = partial_trace(&permuted, &pdims, &keep_dst).unwrap();
        let direct = partial_trace(&rho, &dims, &keep_src).unwrap();
        // the kept factors may come out in swapped order; realign
        let src_order: Vec<usize> = keep_dst.iter().map(|&dpos| perm[dpos]).collect();
        let aligned = if src_order == keep_src {
            via_permute
        } else {
            let two = DimList::new(src_order.iter().map(|&s| dims.dim(s)).collect()).unwrap();
            permute_systems_mat(&via_permute, &two, &[1, 0]).unwrap().0
        };
        prop_assert!(aligned.max_diff(&direct) < 1e-12);
    }

    #[test]
    fn permutation_roundtrip_vec(seed in 0u64..1_000_000, perm_idx in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dims = DimList::new(vec![2, 3, 2]).unwrap();
        let v: Vec<Complex64> = (0..12)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0],
        ];
        let perm = perms[perm_idx];
        let (w, wdims) = permute_systems_vec(&v, &dims, &perm).unwrap();
        let (back, _) = permute_systems_vec(&w, &wdims, &inverse_permutation(&perm)).unwrap();
        for (a, b) in v.iter().zip(&back) {
            prop_assert!((a - b).norm() < 1e-15);
        }
    }
}
