//! Weighted graphs and their spectral operators.
//!
//! This is the machinery every other module consumes: the symmetric
//! normalized Laplacian `L = I - D^{-1/2} A D^{-1/2}`, its rescaling
//! `(2/lambda_max) L - I` onto `[-1, 1]`, and Chebyshev polynomial
//! application via the three-term recurrence. No eigendecomposition
//! anywhere; filters touch the graph only through sparse products.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// One undirected edge, stored once with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Symmetric non-negative weighted graph over `num_nodes` subjects.
///
/// Zero-weight pairs are simply absent; self-loops are rejected. Edges are
/// kept sorted by `(i, j)` so iteration order (and everything seeded off
/// it) is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    num_nodes: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Builds a graph from unordered pairs. Either orientation is accepted
    /// and canonicalized to `i < j`; duplicate pairs are an error rather
    /// than being merged.
    pub fn new(num_nodes: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut canonical: Vec<Edge> = Vec::new();
        for (a, b, weight) in edges {
            if a == b {
                return Err(Error::SelfLoop { node: a });
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if j >= num_nodes {
                return Err(Error::NodeOutOfRange {
                    index: j,
                    num_nodes,
                });
            }
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::NonPositiveWeight { i, j, weight });
            }
            canonical.push(Edge { i, j, weight });
        }
        canonical.sort_by(|a, b| (a.i, a.j).cmp(&(b.i, b.j)));
        for pair in canonical.windows(2) {
            if pair[0].i == pair[1].i && pair[0].j == pair[1].j {
                return Err(Error::DuplicateEdge {
                    i: pair[0].i,
                    j: pair[0].j,
                });
            }
        }
        Ok(Self {
            num_nodes,
            edges: canonical,
        })
    }

    /// Graph with no edges at all.
    pub fn edgeless(num_nodes: usize) -> Self {
        Self {
            num_nodes,
            edges: Vec::new(),
        }
    }

    /// Internal constructor for edges already canonical, sorted, and valid
    /// (subsets of an existing graph's edge list).
    pub(crate) fn from_sorted_edges(num_nodes: usize, edges: Vec<Edge>) -> Self {
        Self { num_nodes, edges }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Weighted degree of every node.
    pub fn degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.num_nodes];
        for e in &self.edges {
            deg[e.i] += e.weight;
            deg[e.j] += e.weight;
        }
        deg
    }

    /// Dense adjacency, row-major `n x n`. For small graphs and tests.
    pub fn dense_adjacency(&self) -> Vec<f64> {
        let n = self.num_nodes;
        let mut a = vec![0.0; n * n];
        for e in &self.edges {
            a[e.i * n + e.j] = e.weight;
            a[e.j * n + e.i] = e.weight;
        }
        a
    }
}

/// Sparse symmetric matrix in CSR form. Both triangles are stored so a
/// row sweep sees every neighbor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseSymMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymMatrix {
    /// Builds from per-row (col, value) lists; each row must be sorted by
    /// column. Symmetry is the caller's responsibility.
    fn from_rows(n: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        debug_assert_eq!(rows.len(), n);
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(row, col, value)` triples in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.col_idx[k], self.values[k]))
        })
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.n];
        for (i, j, v) in self.triplets() {
            out[i * self.n + j] = v;
        }
        out
    }

    /// `y = self * x` for a dense vector.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[i] = acc;
        }
    }

    /// Sparse-times-dense product `self * x`, the single hot kernel of the
    /// whole crate.
    pub fn spmm(&self, x: &DenseMatrix) -> DenseMatrix {
        assert_eq!(x.rows(), self.n, "spmm row mismatch");
        let mut out = DenseMatrix::zeros(self.n, x.cols());
        for i in 0..self.n {
            let lo = self.row_ptr[i];
            let hi = self.row_ptr[i + 1];
            // Split borrows: the output row never aliases x.
            let out_row = out.row_mut(i);
            for k in lo..hi {
                let w = self.values[k];
                let src = x.row(self.col_idx[k]);
                for (o, &s) in out_row.iter_mut().zip(src.iter()) {
                    *o += w * s;
                }
            }
        }
        out
    }
}

/// `L~ = (2/lambda_max) L - I`, with the bound it was scaled by.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledLaplacian {
    matrix: SparseSymMatrix,
    lambda_max: f64,
}

impl ScaledLaplacian {
    pub fn num_nodes(&self) -> usize {
        self.matrix.dim()
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn matrix(&self) -> &SparseSymMatrix {
        &self.matrix
    }
}

/// Symmetric normalized Laplacian `L = I - D^{-1/2} A D^{-1/2}`.
///
/// Isolated nodes contribute an identity row: diagonal 1, no off-diagonals.
/// That keeps L well-defined for any dropout survivor, and its spectrum in
/// `[0, 2]`.
pub fn normalized_laplacian(g: &WeightedGraph) -> SparseSymMatrix {
    let n = g.num_nodes();
    let deg = g.degrees();
    let inv_sqrt: Vec<f64> = deg
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 })
        .collect();

    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in g.edges() {
        let v = -e.weight * inv_sqrt[e.i] * inv_sqrt[e.j];
        rows[e.i].push((e.j, v));
        rows[e.j].push((e.i, v));
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row.push((i, 1.0));
        row.sort_by_key(|&(c, _)| c);
    }
    SparseSymMatrix::from_rows(n, rows)
}

/// `(2/lambda_max) * l - I`. Rejects non-positive `lambda_max`. Missing
/// diagonal entries are created as needed so the subtraction is exact even
/// on matrices with structurally empty diagonals (e.g. the zero matrix).
pub fn scale_laplacian(l: &SparseSymMatrix, lambda_max: f64) -> Result<ScaledLaplacian> {
    if !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::NonPositiveLambdaMax { value: lambda_max });
    }
    let scale = 2.0 / lambda_max;
    let n = l.dim();
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, j, v) in l.triplets() {
        rows[i].push((j, v * scale));
    }
    for (i, row) in rows.iter_mut().enumerate() {
        match row.binary_search_by_key(&i, |&(c, _)| c) {
            Ok(pos) => row[pos].1 -= 1.0,
            Err(pos) => row.insert(pos, (i, -1.0)),
        }
    }
    Ok(ScaledLaplacian {
        matrix: SparseSymMatrix::from_rows(n, rows),
        lambda_max,
    })
}

/// Power-iteration estimate of the largest-magnitude eigenvalue of a
/// symmetric matrix.
///
/// Starts from the normalized all-ones vector carrying a deterministic
/// index ramp — on disconnected or mirror-symmetric graphs the plain
/// all-ones vector can be exactly orthogonal to the top eigenvector, which
/// would silently lock the iteration onto a lower eigenvalue. Falls back to
/// `e_0` when that vector lies in the kernel. Stops once successive
/// Rayleigh quotients differ by less than `tol` (never before a short
/// burn-in, so an early plateau cannot masquerade as convergence), or after
/// `iters` products. A zero operator reports 0.
pub fn estimate_lambda_max(l: &SparseSymMatrix, iters: usize, tol: f64) -> f64 {
    let n = l.dim();
    if n == 0 {
        return 0.0;
    }
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.25 * (i + 1) as f64 / n as f64)
        .collect();
    let norm = dot(&x, &x).sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
    let mut y = vec![0.0; n];
    l.matvec(&x, &mut y);
    if y.iter().all(|&v| v == 0.0) {
        x.iter_mut().for_each(|v| *v = 0.0);
        x[0] = 1.0;
        l.matvec(&x, &mut y);
        if y.iter().all(|&v| v == 0.0) {
            return 0.0;
        }
    }

    const BURN_IN: usize = 20;
    let mut rayleigh = dot(&x, &y);
    for iter in 0..iters {
        let norm = dot(&y, &y).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        for (xi, &yi) in x.iter_mut().zip(y.iter()) {
            *xi = yi / norm;
        }
        l.matvec(&x, &mut y);
        let next = dot(&x, &y);
        let done = (next - rayleigh).abs() < tol && iter >= BURN_IN;
        rayleigh = next;
        if done {
            break;
        }
    }
    rayleigh.abs()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(&x, &y)| x * y).sum()
}

/// `[T_0(L~) X, ..., T_k(L~) X]` via the recurrence `T_0 = I`, `T_1 = L~`,
/// `T_k = 2 L~ T_{k-1} - T_{k-2}`, using only sparse-times-dense products.
pub fn chebyshev_apply(
    lt: &ScaledLaplacian,
    x: &DenseMatrix,
    order: usize,
) -> Result<Vec<DenseMatrix>> {
    if x.rows() != lt.num_nodes() {
        return Err(Error::DimensionMismatch {
            what: "chebyshev input rows",
            expected: lt.num_nodes(),
            got: x.rows(),
        });
    }
    let mut terms: Vec<DenseMatrix> = Vec::with_capacity(order + 1);
    terms.push(x.clone());
    if order >= 1 {
        terms.push(lt.matrix.spmm(x));
    }
    for k in 2..=order {
        let mut next = lt.matrix.spmm(&terms[k - 1]);
        for v in next.data_mut().iter_mut() {
            *v *= 2.0;
        }
        next.scaled_add(-1.0, &terms[k - 2]);
        terms.push(next);
    }
    Ok(terms)
}

/// Relabels nodes: edge `(i, j, w)` becomes `(perm[i], perm[j], w)`.
pub fn permute_graph(g: &WeightedGraph, perm: &[usize]) -> Result<WeightedGraph> {
    let n = g.num_nodes();
    if perm.len() != n {
        return Err(Error::InvalidPermutation);
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation);
        }
        seen[p] = true;
    }
    WeightedGraph::new(
        n,
        g.edges().iter().map(|e| (perm[e.i], perm[e.j], e.weight)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> WeightedGraph {
        WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn rejects_invalid_edges() {
        assert!(matches!(
            WeightedGraph::new(3, [(1, 1, 1.0)]),
            Err(Error::SelfLoop { node: 1 })
        ));
        assert!(matches!(
            WeightedGraph::new(3, [(0, 1, 0.0)]),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(3, [(0, 3, 1.0)]),
            Err(Error::NodeOutOfRange { .. })
        ));
        // Same pair in both orientations is still a duplicate.
        assert!(matches!(
            WeightedGraph::new(3, [(0, 1, 1.0), (1, 0, 2.0)]),
            Err(Error::DuplicateEdge { i: 0, j: 1 })
        ));
    }

    #[test]
    fn laplacian_of_single_unit_edge() {
        let g = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
        let l = normalized_laplacian(&g);
        assert_eq!(l.to_dense(), vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn laplacian_of_edgeless_graph_is_identity() {
        let g = WeightedGraph::edgeless(3);
        let l = normalized_laplacian(&g);
        assert_eq!(l.to_dense(), vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn laplacian_of_unit_path_matches_direct_computation() {
        // Degrees (1, 2, 1), so off-diagonals are -1/sqrt(2) at (0,1), (1,2)
        // and 0 at (0,2). Computed directly from I - D^{-1/2} A D^{-1/2}.
        let l = normalized_laplacian(&path3()).to_dense();
        let s = 1.0 / 2.0f64.sqrt();
        let expected = [1.0, -s, 0.0, -s, 1.0, -s, 0.0, -s, 1.0];
        for (got, want) in l.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn scaling_zero_matrix_gives_negated_identity() {
        let zero = SparseSymMatrix::from_rows(2, vec![Vec::new(), Vec::new()]);
        let lt = scale_laplacian(&zero, 2.0).unwrap();
        assert_eq!(lt.matrix().to_dense(), vec![-1.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn scaling_with_bound_two_subtracts_identity() {
        let g = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
        let lt = scale_laplacian(&normalized_laplacian(&g), 2.0).unwrap();
        assert_eq!(lt.matrix().to_dense(), vec![0.0, -1.0, -1.0, 0.0]);

        let l = normalized_laplacian(&path3());
        let lt = scale_laplacian(&l, 2.0).unwrap();
        let dense_l = l.to_dense();
        let dense_lt = lt.matrix().to_dense();
        for i in 0..3 {
            for j in 0..3 {
                let want = dense_l[i * 3 + j] - if i == j { 1.0 } else { 0.0 };
                assert!((dense_lt[i * 3 + j] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn scaling_rejects_non_positive_bound() {
        let l = normalized_laplacian(&path3());
        assert!(matches!(
            scale_laplacian(&l, 0.0),
            Err(Error::NonPositiveLambdaMax { .. })
        ));
        assert!(scale_laplacian(&l, -1.0).is_err());
    }

    #[test]
    fn lambda_max_known_cases() {
        // [[1,-1],[-1,1]] has spectrum {0, 2}; all-ones is in the kernel, so
        // this also exercises the e_0 fallback.
        let g = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
        let l = normalized_laplacian(&g);
        assert!((estimate_lambda_max(&l, 500, 1e-12) - 2.0).abs() < 1e-9);

        let eye = normalized_laplacian(&WeightedGraph::edgeless(3));
        assert!((estimate_lambda_max(&eye, 500, 1e-12) - 1.0).abs() < 1e-12);

        let zero = SparseSymMatrix::from_rows(2, vec![Vec::new(), Vec::new()]);
        assert_eq!(estimate_lambda_max(&zero, 500, 1e-12), 0.0);
    }

    #[test]
    fn chebyshev_order_zero_returns_input() {
        let g = path3();
        let lt = scale_laplacian(&normalized_laplacian(&g), 2.0).unwrap();
        let x = DenseMatrix::from_vec(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let terms = chebyshev_apply(&lt, &x, 0).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0], x);
    }

    #[test]
    fn chebyshev_alternates_in_the_identity_adjacency_limit() {
        // L = 0 scaled by lambda_max = 2 gives L~ = -I, so T_k(L~) X = (-1)^k X.
        let zero = SparseSymMatrix::from_rows(2, vec![Vec::new(), Vec::new()]);
        let lt = scale_laplacian(&zero, 2.0).unwrap();
        let x = DenseMatrix::from_vec(2, 2, vec![1.0, -2.0, 3.0, 0.5]);
        let terms = chebyshev_apply(&lt, &x, 3).unwrap();
        for (k, term) in terms.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for (got, want) in term.data().iter().zip(x.data().iter()) {
                assert_eq!(*got, sign * want);
            }
        }
    }

    #[test]
    fn chebyshev_rejects_row_mismatch() {
        let lt = scale_laplacian(&normalized_laplacian(&path3()), 2.0).unwrap();
        let x = DenseMatrix::zeros(4, 2);
        assert!(matches!(
            chebyshev_apply(&lt, &x, 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn permute_identity_and_involution() {
        let g = path3();
        assert_eq!(permute_graph(&g, &[0, 1, 2]).unwrap(), g);
        let swapped = permute_graph(&g, &[1, 0, 2]).unwrap();
        assert_eq!(permute_graph(&swapped, &[1, 0, 2]).unwrap(), g);
    }

    #[test]
    fn permute_rotation_relabels_path() {
        // Rotation 0 -> 1 -> 2 -> 0 sends edges {(0,1), (1,2)} to {(1,2), (2,0)}.
        let rotated = permute_graph(&path3(), &[1, 2, 0]).unwrap();
        let expected = WeightedGraph::new(3, [(1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(rotated, expected);
    }

    #[test]
    fn permute_rejects_non_bijections() {
        let g = path3();
        assert!(matches!(
            permute_graph(&g, &[0, 0, 1]),
            Err(Error::InvalidPermutation)
        ));
        assert!(permute_graph(&g, &[0, 1]).is_err());
        assert!(permute_graph(&g, &[0, 1, 3]).is_err());
    }
}
