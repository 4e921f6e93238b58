//! Connectivity features and recursive feature elimination.
//!
//! Each subject's ROI time series becomes a vector of Fisher-z transformed
//! Pearson correlations over the strict upper triangle of the ROI x ROI
//! correlation matrix. Dimensionality is then reduced by recursive feature
//! elimination: fit an L2-regularized linear ranking model on the surviving
//! features (labeled rows only), drop the lowest-|coefficient| slice, repeat
//! until the target dimension remains.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, FeatureMatrix};

/// Correlations are clipped to `[-1 + CLIP, 1 - CLIP]` before `atanh`.
pub const CORRELATION_CLIP: f64 = 1e-7;

/// One subject's ROI-mean time series, `R x T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoiTimeSeries {
    pub subject_id: String,
    pub series: DenseMatrix,
}

impl RoiTimeSeries {
    pub fn new(subject_id: String, series: DenseMatrix) -> Result<Self> {
        if series.rows() < 2 {
            return Err(Error::InvalidConfig {
                what: format!("time series needs >= 2 ROIs, got {}", series.rows()),
            });
        }
        if series.cols() < 3 {
            return Err(Error::InvalidConfig {
                what: format!("time series needs >= 3 slices, got {}", series.cols()),
            });
        }
        if !series.is_finite() {
            return Err(Error::NonFiniteInput {
                what: "ROI time series",
            });
        }
        Ok(Self { subject_id, series })
    }

    pub fn num_rois(&self) -> usize {
        self.series.rows()
    }
}

/// Fisher-z connectivity vector: `atanh` of the clipped Pearson correlation
/// for every ROI pair, upper triangle in row-major order
/// `(0,1), (0,2), ..., (R-2, R-1)`. Length `R (R - 1) / 2`.
pub fn connectivity_vector(ts: &RoiTimeSeries) -> Result<Vec<f64>> {
    let r = ts.series.rows();
    let t = ts.series.cols() as f64;

    // Center each ROI once; reject zero-variance rows up front.
    let mut centered = ts.series.clone();
    let mut norms = vec![0.0; r];
    for roi in 0..r {
        let row = centered.row_mut(roi);
        let mean = row.iter().sum::<f64>() / t;
        let mut sq = 0.0;
        for v in row.iter_mut() {
            *v -= mean;
            sq += *v * *v;
        }
        if sq == 0.0 {
            return Err(Error::ZeroVarianceRoi { roi });
        }
        norms[roi] = sq.sqrt();
    }

    let mut out = Vec::with_capacity(r * (r - 1) / 2);
    for a in 0..r {
        for b in (a + 1)..r {
            let num: f64 = centered
                .row(a)
                .iter()
                .zip(centered.row(b).iter())
                .map(|(&x, &y)| x * y)
                .sum();
            let corr = num / (norms[a] * norms[b]);
            let clipped = corr.clamp(-1.0 + CORRELATION_CLIP, 1.0 - CORRELATION_CLIP);
            out.push(clipped.atanh());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingModel {
    L2Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfeConfig {
    /// Number of surviving features.
    pub target_dim: usize,
    /// Fraction of the current features dropped per round, in (0, 1).
    pub eliminate_fraction: f64,
    pub ranking_model: RankingModel,
    /// L2 penalty of the ranking fit.
    pub regularization: f64,
    pub max_rounds: usize,
}

impl Default for RfeConfig {
    fn default() -> Self {
        Self {
            target_dim: 2000,
            eliminate_fraction: 0.1,
            ranking_model: RankingModel::L2Linear,
            regularization: 1e-2,
            max_rounds: 200,
        }
    }
}

impl RfeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.target_dim == 0 {
            return Err(Error::InvalidConfig {
                what: String::from("target_dim must be >= 1"),
            });
        }
        if !(self.eliminate_fraction > 0.0 && self.eliminate_fraction < 1.0) {
            return Err(Error::InvalidConfig {
                what: format!(
                    "eliminate_fraction must lie in (0, 1), got {}",
                    self.eliminate_fraction
                ),
            });
        }
        if !(self.regularization.is_finite() && self.regularization >= 0.0) {
            return Err(Error::InvalidConfig {
                what: format!("regularization must be >= 0, got {}", self.regularization),
            });
        }
        if self.max_rounds == 0 {
            return Err(Error::InvalidConfig {
                what: String::from("max_rounds must be >= 1"),
            });
        }
        Ok(())
    }
}

/// Recursive feature elimination.
///
/// `labels[i] = Some(class)` marks row `i` as usable for fitting; held-out
/// and unlabeled rows pass `None` and never influence the selection. Each
/// round fits the ranking model on the surviving features of the labeled
/// rows, then drops the `ceil(eliminate_fraction * current)` features with
/// the smallest |coefficient| (never going below `target_dim`; on ties the
/// lower feature index survives). Returns the selected original indices,
/// ascending, and the reduction applied to all rows.
pub fn rfe_select(
    x: &FeatureMatrix,
    labels: &[Option<usize>],
    cfg: &RfeConfig,
) -> Result<(Vec<usize>, FeatureMatrix)> {
    cfg.validate()?;
    let n = x.num_subjects();
    let dim = x.dim();
    if labels.len() != n {
        return Err(Error::DimensionMismatch {
            what: "label vector vs feature rows",
            expected: n,
            got: labels.len(),
        });
    }
    if cfg.target_dim > dim {
        return Err(Error::InvalidConfig {
            what: format!("target_dim {} exceeds input dimension {dim}", cfg.target_dim),
        });
    }

    let labeled: Vec<(usize, usize)> = labels
        .iter()
        .enumerate()
        .filter_map(|(row, l)| l.map(|class| (row, class)))
        .collect();
    let mut counts = [0usize; 2];
    for &(row, class) in &labeled {
        if class > 1 {
            return Err(Error::InvalidLabel {
                node: row,
                label: class,
                num_classes: 2,
            });
        }
        counts[class] += 1;
    }
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::DegenerateLabels);
    }
    for (class, &have) in counts.iter().enumerate() {
        if have < 2 {
            return Err(Error::TooFewPerClass {
                class,
                have,
                need: 2,
            });
        }
    }

    let targets: Vec<f64> = labeled
        .iter()
        .map(|&(_, class)| if class == 1 { 1.0 } else { -1.0 })
        .collect();

    let mut alive: Vec<usize> = (0..dim).collect();
    let mut round = 0usize;
    while alive.len() > cfg.target_dim {
        round += 1;
        if round > cfg.max_rounds {
            return Err(Error::RoundLimit {
                max_rounds: cfg.max_rounds,
            });
        }

        // Labeled rows restricted to the surviving features.
        let m = labeled.len();
        let d = alive.len();
        let mut sub = DenseMatrix::zeros(m, d);
        for (out_row, &(row, _)) in labeled.iter().enumerate() {
            let src = x.values.row(row);
            let dst = sub.row_mut(out_row);
            for (slot, &col) in dst.iter_mut().zip(alive.iter()) {
                *slot = src[col];
            }
        }

        let coef = fit_ridge_ranking(&sub, &targets, cfg.regularization, round)?;

        let drop_count = {
            let by_fraction = (cfg.eliminate_fraction * d as f64).ceil() as usize;
            by_fraction.max(1).min(d - cfg.target_dim)
        };
        // Smallest |coefficient| first; among ties the higher original index
        // goes first, so the lower index survives longest.
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| {
            coef[a]
                .abs()
                .total_cmp(&coef[b].abs())
                .then_with(|| alive[b].cmp(&alive[a]))
        });
        let mut dropped = vec![false; d];
        for &pos in order.iter().take(drop_count) {
            dropped[pos] = true;
        }
        alive = alive
            .iter()
            .zip(dropped.iter())
            .filter_map(|(&col, &gone)| (!gone).then_some(col))
            .collect();
    }

    let reduced = x.select_columns(&alive);
    Ok((alive, reduced))
}

/// Ridge ranking fit: minimizes
/// `1/(2m) ||X w + b - y||^2 + reg/2 ||w||^2`
/// by Nesterov-accelerated full-batch gradient descent on an internally
/// standardized copy of `X` (so coefficient magnitudes are comparable across
/// features and the intercept decouples). Returns the coefficients in the
/// standardized basis, which is what the |coefficient| ranking uses.
fn fit_ridge_ranking(x: &DenseMatrix, y: &[f64], reg: f64, round: usize) -> Result<Vec<f64>> {
    let m = x.rows();
    let d = x.cols();
    debug_assert_eq!(y.len(), m);

    // Standardize columns over the fit rows; constant columns become zero.
    let mut xs = x.clone();
    for c in 0..d {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for r in 0..m {
            let v = xs.get(r, c);
            lo = lo.min(v);
            hi = hi.max(v);
            sum += v;
        }
        let mean = if lo == hi { lo } else { sum / m as f64 };
        let mut var = 0.0;
        for r in 0..m {
            let v = xs.get(r, c) - mean;
            xs.set(r, c, v);
            var += v * v;
        }
        var /= m as f64;
        let scale = if lo == hi || var == 0.0 { 1.0 } else { var.sqrt() };
        for r in 0..m {
            xs.set(r, c, xs.get(r, c) / scale);
        }
    }

    // Largest singular value of [X 1] by power iteration on the Gram
    // operator, to get a safe Lipschitz constant for the step size.
    let mut v = vec![1.0 / ((d + 1) as f64).sqrt(); d + 1];
    let mut sigma_sq = 1.0f64;
    for _ in 0..80 {
        let mut u = vec![0.0; m];
        for r in 0..m {
            let row = xs.row(r);
            let mut acc = v[d];
            for (&w, &f) in v[..d].iter().zip(row.iter()) {
                acc += w * f;
            }
            u[r] = acc;
        }
        let mut w = vec![0.0; d + 1];
        for r in 0..m {
            let ur = u[r];
            for (slot, &f) in w[..d].iter_mut().zip(xs.row(r).iter()) {
                *slot += ur * f;
            }
            w[d] += ur;
        }
        let norm = w.iter().map(|&a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            sigma_sq = 1.0;
            break;
        }
        sigma_sq = norm;
        for (vi, &wi) in v.iter_mut().zip(w.iter()) {
            *vi = wi / norm;
        }
    }
    let lipschitz = sigma_sq / m as f64 + reg + 1e-12;
    let mu = reg.min(1.0);
    let momentum = if mu > 0.0 {
        let kappa = lipschitz / mu;
        (kappa.sqrt() - 1.0) / (kappa.sqrt() + 1.0)
    } else {
        0.0
    };

    let mut w = vec![0.0; d];
    let mut b = 0.0f64;
    let mut w_prev = w.clone();
    let mut b_prev = b;
    let mut grad_w = vec![0.0; d];
    let mut residual = vec![0.0; m];

    let mut tol = f64::NAN;
    const MAX_ITERS: usize = 100_000;
    for iter in 0..MAX_ITERS {
        // Lookahead point.
        let mut yw: Vec<f64> = w
            .iter()
            .zip(w_prev.iter())
            .map(|(&cur, &prev)| cur + momentum * (cur - prev))
            .collect();
        let yb = b + momentum * (b - b_prev);

        for r in 0..m {
            let row = xs.row(r);
            let mut acc = yb - y[r];
            for (&wi, &f) in yw.iter().zip(row.iter()) {
                acc += wi * f;
            }
            residual[r] = acc;
        }
        grad_w.iter_mut().for_each(|g| *g = 0.0);
        let mut grad_b = 0.0;
        for r in 0..m {
            let rr = residual[r] / m as f64;
            grad_b += rr;
            for (g, &f) in grad_w.iter_mut().zip(xs.row(r).iter()) {
                *g += rr * f;
            }
        }
        for (g, &wi) in grad_w.iter_mut().zip(yw.iter()) {
            *g += reg * wi;
        }

        let grad_inf = grad_w
            .iter()
            .chain(core::iter::once(&grad_b))
            .fold(0.0f64, |acc, g| acc.max(g.abs()));
        if tol.is_nan() {
            tol = 1e-10 * grad_inf.max(1.0);
        }
        if grad_inf <= tol {
            return Ok(w);
        }

        w_prev.copy_from_slice(&w);
        b_prev = b;
        for ((wi, ywi), &g) in w.iter_mut().zip(yw.iter_mut()).zip(grad_w.iter()) {
            *wi = *ywi - g / lipschitz;
        }
        b = yb - grad_b / lipschitz;
        let _ = iter;
    }
    Err(Error::NonConvergentFit { round })
}

/// Per-column centering/scaling record fitted on the training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
}

impl Standardizer {
    /// Applies `(x - mean) / scale` column-wise.
    pub fn apply(&self, x: &FeatureMatrix) -> Result<FeatureMatrix> {
        if x.dim() != self.means.len() {
            return Err(Error::DimensionMismatch {
                what: "standardizer dimension",
                expected: self.means.len(),
                got: x.dim(),
            });
        }
        let mut values = x.values.clone();
        for r in 0..values.rows() {
            let row = values.row_mut(r);
            for ((v, &mean), &scale) in row.iter_mut().zip(self.means.iter()).zip(self.scales.iter())
            {
                *v = (*v - mean) / scale;
            }
        }
        FeatureMatrix::new(values, x.labels.clone())
    }
}

/// Column-wise zero-mean unit-variance transform with statistics computed
/// from the rows where `fit_rows` is true (the labeled training rows).
/// Constant columns map to zero with scale recorded as 1. Returns the
/// transformed matrix (all rows) and the fitted record for reuse.
pub fn standardize(x: &FeatureMatrix, fit_rows: &[bool]) -> Result<(FeatureMatrix, Standardizer)> {
    let n = x.num_subjects();
    if fit_rows.len() != n {
        return Err(Error::DimensionMismatch {
            what: "fit mask vs feature rows",
            expected: n,
            got: fit_rows.len(),
        });
    }
    let m = fit_rows.iter().filter(|&&b| b).count();
    if m == 0 {
        return Err(Error::EmptyMask);
    }

    let d = x.dim();
    let mut means = vec![0.0; d];
    let mut scales = vec![1.0; d];
    for c in 0..d {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for r in 0..n {
            if fit_rows[r] {
                let v = x.values.get(r, c);
                lo = lo.min(v);
                hi = hi.max(v);
                sum += v;
            }
        }
        if lo == hi {
            // Exactly constant on the fit rows: subtracting the constant
            // itself zeroes the column without rounding residue.
            means[c] = lo;
            scales[c] = 1.0;
            continue;
        }
        let mean = sum / m as f64;
        let mut var = 0.0;
        for r in 0..n {
            if fit_rows[r] {
                let dv = x.values.get(r, c) - mean;
                var += dv * dv;
            }
        }
        var /= m as f64;
        means[c] = mean;
        scales[c] = if var > 0.0 { var.sqrt() } else { 1.0 };
    }

    let record = Standardizer { means, scales };
    let transformed = record.apply(x)?;
    Ok((transformed, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use popgcn_testkit::pearson_two_pass;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn series(rows: Vec<Vec<f64>>) -> RoiTimeSeries {
        let r = rows.len();
        let t = rows[0].len();
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        RoiTimeSeries::new(String::from("s"), DenseMatrix::from_vec(r, t, flat)).unwrap()
    }

    #[test]
    fn identical_rows_hit_the_positive_clip() {
        let ts = series(vec![vec![1.0, 2.0, 3.0, 4.0], vec![1.0, 2.0, 3.0, 4.0]]);
        let v = connectivity_vector(&ts).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0], (1.0f64 - CORRELATION_CLIP).atanh());
    }

    #[test]
    fn negated_row_hits_the_negative_clip() {
        let ts = series(vec![vec![1.0, 2.0, 3.0, 4.0], vec![-1.0, -2.0, -3.0, -4.0]]);
        let v = connectivity_vector(&ts).unwrap();
        assert_eq!(v[0], (-1.0f64 + CORRELATION_CLIP).atanh());
    }

    #[test]
    fn zero_variance_roi_is_named() {
        let ts = series(vec![vec![1.0, 2.0, 3.0], vec![5.0, 5.0, 5.0]]);
        assert_eq!(
            connectivity_vector(&ts),
            Err(Error::ZeroVarianceRoi { roi: 1 })
        );
    }

    #[test]
    fn matches_two_pass_oracle_on_random_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = 200;
        let rows: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..t).map(|_| rng.gen::<f64>() - 0.5).collect())
            .collect();
        let ts = series(rows.clone());
        let got = connectivity_vector(&ts).unwrap();

        let mut idx = 0;
        for a in 0..3 {
            for b in (a + 1)..3 {
                let corr = pearson_two_pass(&rows[a], &rows[b]);
                let expected = corr
                    .clamp(-1.0 + CORRELATION_CLIP, 1.0 - CORRELATION_CLIP)
                    .atanh();
                assert!(
                    (got[idx] - expected).abs() < 1e-12,
                    "pair ({a},{b}): {} vs {expected}",
                    got[idx]
                );
                idx += 1;
            }
        }
    }

    #[test]
    fn vector_length_is_upper_triangle_count() {
        for r in 2..8 {
            let mut rng = ChaCha8Rng::seed_from_u64(r as u64);
            let rows: Vec<Vec<f64>> = (0..r)
                .map(|_| (0..10).map(|_| rng.gen::<f64>()).collect())
                .collect();
            let v = connectivity_vector(&series(rows)).unwrap();
            assert_eq!(v.len(), r * (r - 1) / 2);
        }
    }

    fn planted_matrix(seed: u64, n: usize, dim: usize, informative: usize) -> (FeatureMatrix, Vec<Option<usize>>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = DenseMatrix::zeros(n, dim);
        let mut labels = Vec::with_capacity(n);
        for r in 0..n {
            let class = r % 2;
            labels.push(Some(class));
            let signal = if class == 1 { 1.0 } else { -1.0 };
            let row = values.row_mut(r);
            for (c, v) in row.iter_mut().enumerate() {
                let noise = rng.gen::<f64>() - 0.5;
                *v = if c < informative {
                    signal + 0.2 * noise
                } else {
                    noise
                };
            }
        }
        (
            FeatureMatrix::with_default_labels(values).unwrap(),
            labels,
        )
    }

    #[test]
    fn identity_selection_when_target_equals_dim() {
        let (x, labels) = planted_matrix(0, 12, 6, 2);
        let cfg = RfeConfig {
            target_dim: 6,
            ..Default::default()
        };
        let (selected, reduced) = rfe_select(&x, &labels, &cfg).unwrap();
        assert_eq!(selected, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(reduced, x);
    }

    #[test]
    fn planted_signal_features_are_selected() {
        // 5 label-carrying columns among 45 noise columns; the informative
        // set must be recovered in at least 95 of 100 seeds.
        let mut hits = 0;
        for seed in 0..100 {
            let (x, labels) = planted_matrix(seed, 40, 50, 5);
            let cfg = RfeConfig {
                target_dim: 5,
                ..Default::default()
            };
            let (selected, _) = rfe_select(&x, &labels, &cfg).unwrap();
            if selected == vec![0, 1, 2, 3, 4] {
                hits += 1;
            }
        }
        assert!(hits >= 95, "only {hits}/100 seeds recovered the signal");
    }

    #[test]
    fn selection_is_deterministic() {
        let (x, labels) = planted_matrix(3, 30, 40, 4);
        let cfg = RfeConfig {
            target_dim: 8,
            ..Default::default()
        };
        let a = rfe_select(&x, &labels, &cfg).unwrap();
        let b = rfe_select(&x, &labels, &cfg).unwrap();
        assert_eq!(a.0, b.0);
        assert!(a.1.values.bits_eq(&b.1.values));
    }

    #[test]
    fn held_out_rows_cannot_influence_selection() {
        let (x, mut labels) = planted_matrix(5, 30, 40, 4);
        // Hold out a third of the rows.
        for l in labels.iter_mut().skip(20) {
            *l = None;
        }
        let cfg = RfeConfig {
            target_dim: 10,
            ..Default::default()
        };
        let (selected, _) = rfe_select(&x, &labels, &cfg).unwrap();

        // Scramble the held-out rows entirely.
        let mut perturbed = x.clone();
        for r in 20..30 {
            for v in perturbed.values.row_mut(r).iter_mut() {
                *v = v.mul_add(31.0, 7.5);
            }
        }
        let (selected2, _) = rfe_select(&perturbed, &labels, &cfg).unwrap();
        assert_eq!(selected, selected2);
    }

    #[test]
    fn degenerate_labels_are_rejected() {
        let (x, _) = planted_matrix(0, 10, 8, 2);
        let one_class: Vec<Option<usize>> = vec![Some(0); 10];
        let cfg = RfeConfig {
            target_dim: 4,
            ..Default::default()
        };
        assert_eq!(
            rfe_select(&x, &one_class, &cfg),
            Err(Error::DegenerateLabels)
        );
        let mut thin = one_class;
        thin[0] = Some(1);
        assert!(matches!(
            rfe_select(&x, &thin, &cfg),
            Err(Error::TooFewPerClass { class: 1, .. })
        ));
    }

    #[test]
    fn standardize_leaves_standardized_columns_unchanged() {
        // Column already has mean 0, variance 1 over the fit rows.
        let values = DenseMatrix::from_vec(4, 1, vec![-1.0, 1.0, -1.0, 1.0]);
        let x = FeatureMatrix::with_default_labels(values).unwrap();
        let (out, record) = standardize(&x, &[true; 4]).unwrap();
        for r in 0..4 {
            assert!((out.values.get(r, 0) - x.values.get(r, 0)).abs() < 1e-12);
        }
        assert!((record.scales[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_column_zeroes_with_unit_scale() {
        let values = DenseMatrix::from_vec(3, 2, vec![0.1, 1.0, 0.1, 2.0, 0.1, 3.0]);
        let x = FeatureMatrix::with_default_labels(values).unwrap();
        let (out, record) = standardize(&x, &[true; 3]).unwrap();
        for r in 0..3 {
            assert_eq!(out.values.get(r, 0), 0.0);
        }
        assert_eq!(record.scales[0], 1.0);
        assert_eq!(record.means[0], 0.1);
    }

    #[test]
    fn random_matrix_standardizes_on_fit_rows_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 30;
        let d = 7;
        let data: Vec<f64> = (0..n * d).map(|_| rng.gen::<f64>() * 5.0 - 1.0).collect();
        let x = FeatureMatrix::with_default_labels(DenseMatrix::from_vec(n, d, data)).unwrap();
        let fit: Vec<bool> = (0..n).map(|r| r < 20).collect();
        let (out, record) = standardize(&x, &fit).unwrap();

        for c in 0..d {
            let vals: Vec<f64> = (0..20).map(|r| out.values.get(r, c)).collect();
            let mean = vals.iter().sum::<f64>() / 20.0;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 20.0;
            assert!(mean.abs() < 1e-12, "col {c} mean {mean}");
            assert!((var - 1.0).abs() < 1e-9, "col {c} var {var}");
        }

        // Perturbing held-out rows leaves the fitted statistics identical.
        let mut perturbed = x.clone();
        for r in 20..n {
            for v in perturbed.values.row_mut(r).iter_mut() {
                *v += 100.0;
            }
        }
        let (_, record2) = standardize(&perturbed, &fit).unwrap();
        assert_eq!(record, record2);
    }
}
