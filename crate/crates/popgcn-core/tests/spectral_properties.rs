//! Spectral invariants checked against dense oracles: the implementation
//! never eigendecomposes anything, the tests always do.

use popgcn_core::graph::{
    chebyshev_apply, estimate_lambda_max, normalized_laplacian, permute_graph, scale_laplacian,
};
use popgcn_core::{DenseMatrix, WeightedGraph};
use popgcn_testkit::{chebyshev_dense, jacobi_eigenvalues, mat_mul};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random graph with `n` nodes; edge density and weights drawn from `seed`.
fn random_graph(n: usize, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = 0.1 + 0.5 * rng.gen::<f64>();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < density {
                edges.push((i, j, 0.05 + rng.gen::<f64>() * 3.0));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

fn random_features(n: usize, d: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_vec(n, d, (0..n * d).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Eigenvalues of the normalized Laplacian lie in [0, 2].
    #[test]
    fn laplacian_spectrum_in_zero_two(n in 2usize..=50, seed in any::<u64>()) {
        let g = random_graph(n, seed);
        let l = normalized_laplacian(&g);
        let eig = jacobi_eigenvalues(&l.to_dense(), n);
        prop_assert!(eig[0] >= -1e-9, "min eigenvalue {}", eig[0]);
        prop_assert!(eig[n - 1] <= 2.0 + 1e-9, "max eigenvalue {}", eig[n - 1]);
    }

    /// chebyshev_apply satisfies its own three-term recurrence entrywise.
    #[test]
    fn chebyshev_recurrence_consistency(n in 2usize..=30, seed in any::<u64>()) {
        let g = random_graph(n, seed);
        let lt = scale_laplacian(&normalized_laplacian(&g), 2.0).unwrap();
        let x = random_features(n, 4, seed ^ 0xABCD);
        let terms = chebyshev_apply(&lt, &x, 4).unwrap();
        let dense_m = lt.matrix().to_dense();
        for k in 2..terms.len() {
            let prev = mat_mul(&dense_m, terms[k - 1].data(), n, n, 4);
            for idx in 0..n * 4 {
                let expected = 2.0 * prev[idx] - terms[k - 2].data()[idx];
                prop_assert!(
                    (terms[k].data()[idx] - expected).abs() < 1e-10,
                    "k={k} idx={idx}: {} vs {expected}",
                    terms[k].data()[idx]
                );
            }
        }
    }

    /// chebyshev_apply agrees with the dense brute-force recurrence.
    #[test]
    fn chebyshev_matches_dense_oracle(n in 2usize..=20, seed in any::<u64>()) {
        let g = random_graph(n, seed);
        let lt = scale_laplacian(&normalized_laplacian(&g), 2.0).unwrap();
        let x = random_features(n, 3, seed ^ 0x1234);
        let terms = chebyshev_apply(&lt, &x, 3).unwrap();
        let oracle = chebyshev_dense(&lt.matrix().to_dense(), x.data(), n, 3, 3);
        for (term, expected) in terms.iter().zip(oracle.iter()) {
            for (got, want) in term.data().iter().zip(expected.iter()) {
                prop_assert!((got - want).abs() < 1e-10, "{got} vs {want}");
            }
        }
    }

    /// With the power-iteration bound (tol 1e-9), the rescaled spectrum
    /// stays inside [-1 - 1e-6, 1 + 1e-6].
    #[test]
    fn scaled_spectrum_in_unit_interval(n in 2usize..=40, seed in any::<u64>()) {
        let g = random_graph(n, seed);
        let l = normalized_laplacian(&g);
        let lambda = estimate_lambda_max(&l, 50_000, 1e-9);
        prop_assume!(lambda > 1e-9);
        let lt = scale_laplacian(&l, lambda).unwrap();
        let eig = jacobi_eigenvalues(&lt.matrix().to_dense(), n);
        prop_assert!(eig[0] >= -1.0 - 1e-6, "min {}", eig[0]);
        prop_assert!(eig[n - 1] <= 1.0 + 1e-6, "max {}", eig[n - 1]);
    }

    /// Applying the filter to a relabeled graph and relabeled features is
    /// the relabeling of the original application.
    #[test]
    fn chebyshev_is_permutation_equivariant(n in 2usize..=25, seed in any::<u64>()) {
        let g = random_graph(n, seed);
        let x = random_features(n, 3, seed ^ 0x77);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xFEED);
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }

        let lt = scale_laplacian(&normalized_laplacian(&g), 2.0).unwrap();
        let base = chebyshev_apply(&lt, &x, 3).unwrap();

        let pg = permute_graph(&g, &perm).unwrap();
        let plt = scale_laplacian(&normalized_laplacian(&pg), 2.0).unwrap();
        let permuted = chebyshev_apply(&plt, &x.permute_rows(&perm), 3).unwrap();

        for (term, pterm) in base.iter().zip(permuted.iter()) {
            let expected = term.permute_rows(&perm);
            for (got, want) in pterm.data().iter().zip(expected.data().iter()) {
                prop_assert!((got - want).abs() < 1e-12, "{got} vs {want}");
            }
        }
    }

    /// Power iteration against the dense oracle's top |eigenvalue|.
    #[test]
    fn lambda_max_matches_dense_oracle(n in 2usize..=30, seed in any::<u64>()) {
        let g = random_graph(n, seed);
        let l = normalized_laplacian(&g);
        let est = estimate_lambda_max(&l, 50_000, 1e-12);
        let eig = jacobi_eigenvalues(&l.to_dense(), n);
        let truth = eig.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        prop_assert!((est - truth).abs() < 1e-6, "{est} vs {truth}");
    }
}
