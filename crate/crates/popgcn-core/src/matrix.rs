//! Row-major dense matrices and the feature matrix wrapper.
//!
//! Everything downstream (Chebyshev filtering, the network layers, the
//! feature pipeline) works on these buffers directly; the hot loops run over
//! contiguous row slices.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense `rows x cols` matrix of `f64`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Wraps a row-major buffer; panics if the length does not match.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "buffer length mismatch");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self * other`, with the k-loop in the middle so the inner loop runs
    /// over contiguous output and `other` rows.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let out_row = out.row_mut(i);
            for (k, &aik) in a_row.iter().enumerate() {
                if aik == 0.0 {
                    continue;
                }
                let b_row = other.row(k);
                for (o, &b) in out_row.iter_mut().zip(b_row.iter()) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    /// `self^T * other` without materializing the transpose.
    pub fn transposed_matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, other.rows, "transposed_matmul shape mismatch");
        let mut out = DenseMatrix::zeros(self.cols, other.cols);
        for n in 0..self.rows {
            let a_row = self.row(n);
            let b_row = other.row(n);
            for (i, &a) in a_row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let out_row = out.row_mut(i);
                for (o, &b) in out_row.iter_mut().zip(b_row.iter()) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self * other^T`; both operands are walked along contiguous rows.
    pub fn matmul_transposed(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.cols, "matmul_transposed shape mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let out_row = out.row_mut(i);
            for (j, o) in out_row.iter_mut().enumerate() {
                let b_row = other.row(j);
                let mut acc = 0.0;
                for (&a, &b) in a_row.iter().zip(b_row.iter()) {
                    acc += a * b;
                }
                *o = acc;
            }
        }
        out
    }

    /// `self += a * b`, accumulating into the existing buffer.
    pub fn add_matmul(&mut self, a: &DenseMatrix, b: &DenseMatrix) {
        assert_eq!(a.cols(), b.rows(), "add_matmul shape mismatch");
        assert_eq!(self.rows, a.rows());
        assert_eq!(self.cols, b.cols());
        for i in 0..a.rows() {
            let a_row = a.row(i);
            let out_row = self.row_mut(i);
            for (k, &aik) in a_row.iter().enumerate() {
                if aik == 0.0 {
                    continue;
                }
                let b_row = b.row(k);
                for (o, &v) in out_row.iter_mut().zip(b_row.iter()) {
                    *o += aik * v;
                }
            }
        }
    }

    /// `self += alpha * other`.
    pub fn scaled_add(&mut self, alpha: f64, other: &DenseMatrix) {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        for (a, &b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += alpha * b;
        }
    }

    /// Rows relocated so that output row `perm[i]` is input row `i`,
    /// matching the node relabeling convention of `permute_graph`.
    pub fn permute_rows(&self, perm: &[usize]) -> DenseMatrix {
        assert_eq!(perm.len(), self.rows);
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for (i, &target) in perm.iter().enumerate() {
            out.row_mut(target).copy_from_slice(self.row(i));
        }
        out
    }

    /// True when every entry has the same bit pattern. Stricter than
    /// `PartialEq` (distinguishes signed zeros), used by determinism checks.
    pub fn bits_eq(&self, other: &DenseMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(other.data.iter())
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// Per-subject feature vectors: one row per graph node, one labeled column
/// per feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub values: DenseMatrix,
    pub labels: Vec<String>,
}

impl FeatureMatrix {
    pub fn new(values: DenseMatrix, labels: Vec<String>) -> Result<Self> {
        if labels.len() != values.cols() {
            return Err(Error::DimensionMismatch {
                what: "feature labels",
                expected: values.cols(),
                got: labels.len(),
            });
        }
        if !values.is_finite() {
            return Err(Error::NonFiniteInput {
                what: "feature matrix",
            });
        }
        Ok(Self { values, labels })
    }

    /// New matrix with labels `f0..f{D-1}`.
    pub fn with_default_labels(values: DenseMatrix) -> Result<Self> {
        let labels = (0..values.cols()).map(|i| format!("f{i}")).collect();
        Self::new(values, labels)
    }

    pub fn num_subjects(&self) -> usize {
        self.values.rows()
    }

    pub fn dim(&self) -> usize {
        self.values.cols()
    }

    /// Column subset in the given order; labels follow.
    pub fn select_columns(&self, indices: &[usize]) -> FeatureMatrix {
        let mut values = DenseMatrix::zeros(self.values.rows(), indices.len());
        for r in 0..self.values.rows() {
            let src = self.values.row(r);
            let dst = values.row_mut(r);
            for (slot, &c) in dst.iter_mut().zip(indices.iter()) {
                *slot = src[c];
            }
        }
        let labels = indices.iter().map(|&c| self.labels[c].clone()).collect();
        FeatureMatrix { values, labels }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_small_known_product() {
        let a = DenseMatrix::from_vec(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let b = DenseMatrix::from_vec(3, 2, vec![7.0, 8.0, 9.0, 10.0, 11.0, 12.0]);
        let c = a.matmul(&b);
        assert_eq!(c.data(), &[58.0, 64.0, 139.0, 154.0]);
    }

    #[test]
    fn transposed_variants_agree_with_explicit_transpose() {
        let a = DenseMatrix::from_vec(2, 3, vec![1.0, -2.0, 3.0, 0.5, 4.0, -1.0]);
        let b = DenseMatrix::from_vec(2, 2, vec![2.0, 1.0, -1.0, 3.0]);
        // a^T (3x2) * b (2x2)
        let at = DenseMatrix::from_vec(3, 2, vec![1.0, 0.5, -2.0, 4.0, 3.0, -1.0]);
        assert_eq!(a.transposed_matmul(&b), at.matmul(&b));

        let c = DenseMatrix::from_vec(2, 3, vec![1.0, 0.0, 2.0, -1.0, 1.0, 0.0]);
        let ct = DenseMatrix::from_vec(3, 2, vec![1.0, -1.0, 0.0, 1.0, 2.0, 0.0]);
        assert_eq!(a.matmul_transposed(&c), a.matmul(&ct));
    }

    #[test]
    fn permute_rows_round_trips_through_inverse() {
        let x = DenseMatrix::from_vec(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let perm = [2usize, 0, 1];
        let permuted = x.permute_rows(&perm);
        assert_eq!(permuted.row(2), &[1.0, 2.0]);
        assert_eq!(permuted.row(0), &[3.0, 4.0]);
        let mut inverse = [0usize; 3];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        assert_eq!(permuted.permute_rows(&inverse), x);
    }

    #[test]
    fn feature_matrix_rejects_non_finite() {
        let values = DenseMatrix::from_vec(1, 2, vec![1.0, f64::NAN]);
        assert!(matches!(
            FeatureMatrix::with_default_labels(values),
            Err(Error::NonFiniteInput { .. })
        ));
    }
}
