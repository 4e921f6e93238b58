//! Reference oracles for the popgcn test suites.
//!
//! Everything in here is deliberately independent of the implementation it
//! checks: dense matrices are plain row-major `Vec<f64>`, the eigensolver is
//! cyclic Jacobi, and the statistics are exact binomial sums. Slow is fine;
//! these only run in tests.

pub mod dense;
pub mod eigen;
pub mod stats;

pub use dense::{mat_mul, mat_vec, chebyshev_dense, pearson_two_pass};
pub use eigen::jacobi_eigenvalues;
pub use stats::{binomial_central_interval, binomial_sf, sign_test_p_value};

/// Central-difference gradient of `f` at `x` with step `h`, one coordinate at
/// a time. `f` must not retain state between calls.
pub fn central_difference_gradient<F>(mut f: F, x: &[f64], h: f64) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut point = x.to_vec();
    let mut grad = vec![0.0; x.len()];
    for i in 0..x.len() {
        let orig = point[i];
        point[i] = orig + h;
        let up = f(&point);
        point[i] = orig - h;
        let down = f(&point);
        point[i] = orig;
        grad[i] = (up - down) / (2.0 * h);
    }
    grad
}
