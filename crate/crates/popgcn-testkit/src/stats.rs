//! Exact binomial statistics for the randomized-edge tests.

/// Binomial pmf table for `Bin(n, p)`, computed by the stable ratio
/// recurrence from the mode outward would be overkill here: n stays small
/// enough (<= a few thousand) that starting from `(1-p)^n` in f64 is fine.
fn binomial_pmf(n: u64, p: f64) -> Vec<f64> {
    assert!((0.0..=1.0).contains(&p));
    let mut pmf = vec![0.0f64; n as usize + 1];
    if p == 0.0 {
        pmf[0] = 1.0;
        return pmf;
    }
    if p == 1.0 {
        pmf[n as usize] = 1.0;
        return pmf;
    }
    // Work in log space to dodge underflow at the tails.
    let mut log_c = 0.0f64; // ln C(n, 0)
    let lp = p.ln();
    let lq = (1.0 - p).ln();
    for k in 0..=n {
        let kf = k as f64;
        pmf[k as usize] = (log_c + kf * lp + (n as f64 - kf) * lq).exp();
        if k < n {
            log_c += ((n - k) as f64).ln() - ((k + 1) as f64).ln();
        }
    }
    pmf
}

/// Central binomial interval `[lo, hi]` covering at least `confidence` mass:
/// `lo` is the smallest k with CDF(k) > alpha/2, `hi` the smallest k with
/// CDF(k) >= 1 - alpha/2.
pub fn binomial_central_interval(n: u64, p: f64, confidence: f64) -> (u64, u64) {
    assert!(confidence > 0.0 && confidence < 1.0);
    let alpha = 1.0 - confidence;
    let pmf = binomial_pmf(n, p);
    let mut cdf = 0.0;
    let mut lo = 0u64;
    for (k, mass) in pmf.iter().enumerate() {
        cdf += mass;
        if cdf > alpha / 2.0 {
            lo = k as u64;
            break;
        }
    }
    let mut cdf = 0.0;
    let mut hi = n;
    for (k, mass) in pmf.iter().enumerate() {
        cdf += mass;
        if cdf >= 1.0 - alpha / 2.0 {
            hi = k as u64;
            break;
        }
    }
    (lo, hi)
}

/// Survival function `P(X >= k)` for `X ~ Bin(n, p)`.
pub fn binomial_sf(n: u64, p: f64, k: u64) -> f64 {
    let pmf = binomial_pmf(n, p);
    pmf.iter().skip(k as usize).sum()
}

/// One-sided sign test: p-value for observing at least `wins` successes out
/// of `wins + losses` fair coin flips. Ties must already be dropped.
pub fn sign_test_p_value(wins: u64, losses: u64) -> f64 {
    binomial_sf(wins + losses, 0.5, wins)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_sums_to_one() {
        let pmf = binomial_pmf(1000, 0.3);
        let total: f64 = pmf.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn interval_brackets_the_mean() {
        let (lo, hi) = binomial_central_interval(1000, 0.7, 0.999);
        assert!(lo <= 700 && 700 <= hi);
        // Roughly mean +/- 3.3 sigma (sigma ~ 14.5).
        assert!(lo >= 640 && hi <= 760, "({lo}, {hi})");
    }

    #[test]
    fn sign_test_matches_hand_computation() {
        // P(Bin(10, 1/2) >= 8) = (45 + 10 + 1) / 1024.
        let p = sign_test_p_value(8, 2);
        assert!((p - 56.0 / 1024.0).abs() < 1e-12);
        // P(Bin(9, 1/2) >= 8) = 10 / 512.
        let p = sign_test_p_value(8, 1);
        assert!((p - 10.0 / 512.0).abs() < 1e-12);
    }
}
