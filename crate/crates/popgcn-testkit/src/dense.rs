//! Brute-force dense linear algebra on row-major `Vec<f64>` buffers.

/// `a` is `n x m`, `b` is `m x p`; returns the `n x p` product.
pub fn mat_mul(a: &[f64], b: &[f64], n: usize, m: usize, p: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * m);
    assert_eq!(b.len(), m * p);
    let mut out = vec![0.0; n * p];
    for i in 0..n {
        for k in 0..m {
            let aik = a[i * m + k];
            for j in 0..p {
                out[i * p + j] += aik * b[k * p + j];
            }
        }
    }
    out
}

/// `a` is `n x n`, `x` has length `n`.
pub fn mat_vec(a: &[f64], x: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    assert_eq!(x.len(), n);
    (0..n)
        .map(|i| (0..n).map(|j| a[i * n + j] * x[j]).sum())
        .collect()
}

/// Dense evaluation of the Chebyshev matrix recurrence:
/// returns `[T_0(M) X, ..., T_k(M) X]` with `T_0 = I`, `T_1 = M`,
/// `T_j = 2 M T_{j-1} - T_{j-2}`, all through explicit dense products.
///
/// `m` is `n x n`, `x` is `n x d`.
pub fn chebyshev_dense(m: &[f64], x: &[f64], n: usize, d: usize, k: usize) -> Vec<Vec<f64>> {
    assert_eq!(m.len(), n * n);
    assert_eq!(x.len(), n * d);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    out.push(x.to_vec());
    if k >= 1 {
        out.push(mat_mul(m, x, n, n, d));
    }
    for j in 2..=k {
        let fresh = mat_mul(m, &out[j - 1], n, n, d);
        let prev = &out[j - 2];
        let t: Vec<f64> = fresh
            .iter()
            .zip(prev.iter())
            .map(|(&f, &p)| 2.0 * f - p)
            .collect();
        out.push(t);
    }
    out
}

/// Two-pass Pearson correlation: explicit means, then covariance over the
/// product of standard deviations. Panics on zero variance.
pub fn pearson_two_pass(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let t = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / t;
    let mean_b = b.iter().sum::<f64>() / t;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in a.iter().zip(b.iter()) {
        cov += (x - mean_a) * (y - mean_b);
        var_a += (x - mean_a) * (x - mean_a);
        var_b += (y - mean_b) * (y - mean_b);
    }
    assert!(var_a > 0.0 && var_b > 0.0, "zero variance series");
    cov / (var_a.sqrt() * var_b.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mat_mul_identity() {
        let eye = vec![1.0, 0.0, 0.0, 1.0];
        let x = vec![1.0, 2.0, 3.0, 4.0];
        assert_eq!(mat_mul(&eye, &x, 2, 2, 2), x);
    }

    #[test]
    fn chebyshev_alternates_on_negated_identity() {
        let m = vec![-1.0, 0.0, 0.0, -1.0];
        let x = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let terms = chebyshev_dense(&m, &x, 2, 3, 3);
        for (k, term) in terms.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for (t, orig) in term.iter().zip(x.iter()) {
                assert!((t - sign * orig).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn pearson_of_linear_series_is_one() {
        let a = vec![1.0, 2.0, 3.0, 4.0];
        let b = vec![2.0, 4.0, 6.0, 8.0];
        assert!((pearson_two_pass(&a, &b) - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = b.iter().map(|v| -v).collect();
        assert!((pearson_two_pass(&a, &neg) + 1.0).abs() < 1e-12);
    }
}
