// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Density-ordered block partitioning.
//!
//! Rows (and, with the same permutation, columns) are sorted by decreasing
//! nonzero count. Rows with more than `k` nonzeros form the leading block:
//!
//! ```text
//!     [ A  B ]   A: n_k x n_k
//!     [ C  D ]   D: rows with at most k nonzeros
//! ```

use std::ops::Range;

use plb_core::{Graph, PlbParams};
use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;
use crate::operator::LinearOperator;
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    k: usize,
    n_k: usize,
    /// `perm[new] = old`.
    perm: Vec<usize>,
    /// `inv[old] = new`.
    inv: Vec<usize>,
    m_cd: usize,
    m_bcd: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    A,
    B,
    C,
    D,
}

impl BlockPartition {
    /// Partitions by the given per-row nonzero counts. `m_bcd` is the
    /// number of nonzeros outside the leading block.
    fn from_counts(counts: &[usize], k: usize, nnz_a: impl Fn(&[usize], usize) -> usize) -> BlockPartition {
        let n = counts.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| counts[b].cmp(&counts[a]));
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let n_k = perm.iter().take_while(|&&v| counts[v] > k).count();
        let total: usize = counts.iter().sum();
        let m_cd = perm[n_k..].iter().map(|&v| counts[v]).sum();
        let m_bcd = total - nnz_a(&inv, n_k);
        BlockPartition {
            k,
            n_k,
            perm,
            inv,
            m_cd,
            m_bcd,
        }
    }

    pub fn for_matrix(m: &SparseMatrix, k: usize) -> Result<BlockPartition> {
        if m.rows() != m.cols() {
            return Err(AlgebraError::Dimension(format!("{}x{} is not square", m.rows(), m.cols())));
        }
        let counts: Vec<usize> = (0..m.rows()).map(|i| m.row_nnz(i)).collect();
        Ok(BlockPartition::from_counts(&counts, k, |inv, n_k| {
            (0..m.rows())
                .filter(|&i| inv[i] < n_k)
                .map(|i| m.row(i).filter(|&(j, _)| inv[j] < n_k).count())
                .sum()
        }))
    }

    /// Partitions a graph's adjacency matrix; rows count out-neighbors.
    pub fn for_graph(g: &Graph, k: usize) -> BlockPartition {
        let counts: Vec<usize> = (0..g.n()).map(|v| g.neighbors(v).len()).collect();
        BlockPartition::from_counts(&counts, k, |inv, n_k| {
            (0..g.n())
                .filter(|&v| inv[v] < n_k)
                .map(|v| g.neighbors(v).iter().filter(|&&w| inv[w] < n_k).count())
                .sum()
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn n_k(&self) -> usize {
        self.n_k
    }

    /// Nonzeros in the rows of `[C D]`.
    pub fn m_cd(&self) -> usize {
        self.m_cd
    }

    /// Nonzeros in `B`, `C` and `D` together.
    pub fn m_bcd(&self) -> usize {
        self.m_bcd
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn inv(&self) -> &[usize] {
        &self.inv
    }

    pub fn old_index(&self, new: usize) -> usize {
        self.perm[new]
    }

    pub fn new_index(&self, old: usize) -> usize {
        self.inv[old]
    }

    pub fn is_high(&self, old: usize) -> bool {
        self.inv[old] < self.n_k
    }

    pub fn high(&self) -> Range<usize> {
        0..self.n_k
    }

    pub fn low(&self) -> Range<usize> {
        self.n_k..self.n()
    }

    /// Reorders a vector from original to partitioned order.
    pub fn permute<T: Copy>(&self, x: &[T]) -> Vec<T> {
        self.perm.iter().map(|&old| x[old]).collect()
    }

    /// Inverse of [`BlockPartition::permute`].
    pub fn unpermute<T: Copy>(&self, y: &[T]) -> Vec<T> {
        self.inv.iter().map(|&new| y[new]).collect()
    }

    pub fn view<'a>(&'a self, m: &'a SparseMatrix, block: Block) -> BlockView<'a> {
        let (rows, cols) = match block {
            Block::A => (self.high(), self.high()),
            Block::B => (self.high(), self.low()),
            Block::C => (self.low(), self.high()),
            Block::D => (self.low(), self.low()),
        };
        BlockView {
            m,
            part: self,
            rows,
            cols,
        }
    }

    /// Rows `rows` of the permuted matrix, all columns.
    pub fn row_band<'a>(&'a self, m: &'a SparseMatrix, rows: Range<usize>) -> BlockView<'a> {
        BlockView {
            m,
            part: self,
            rows,
            cols: 0..self.n(),
        }
    }
}

/// A rectangular block of `P M P^T`, read through the partition's
/// permutation without copying the matrix.
#[derive(Debug, Clone)]
pub struct BlockView<'a> {
    m: &'a SparseMatrix,
    part: &'a BlockPartition,
    rows: Range<usize>,
    cols: Range<usize>,
}

impl BlockView<'_> {
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    /// `(local col, value)` pairs of local row `i`, in no particular order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let old = self.part.perm[self.rows.start + i];
        let cols = self.cols.clone();
        self.m.row(old).filter_map(move |(j, v)| {
            let nj = self.part.inv[j];
            cols.contains(&nj).then(|| (nj - cols.start, v))
        })
    }

    pub fn nnz(&self) -> usize {
        (0..self.rows()).map(|i| self.row(i).count()).sum()
    }

    pub fn mul_vec(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols(), "vector length");
        (0..self.rows())
            .map(|i| self.row(i).fold(0, |acc, (j, v)| f.mul_add(acc, v, x[j])))
            .collect()
    }

    pub fn transpose_mul_vec(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows(), "vector length");
        let mut y = vec![0u64; self.cols()];
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0 {
                for (j, v) in self.row(i) {
                    y[j] = f.mul_add(y[j], v, xi);
                }
            }
        }
        y
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows(), self.cols());
        for i in 0..self.rows() {
            for (j, v) in self.row(i) {
                d.set(i, j, v);
            }
        }
        d
    }

    /// Materializes as a sparse matrix in local coordinates.
    pub fn to_sparse(&self, f: &PrimeField) -> SparseMatrix {
        let entries: Vec<_> = (0..self.rows())
            .flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v)))
            .collect();
        SparseMatrix::from_triplets(f, self.rows(), self.cols(), entries).expect("entries lie inside the block")
    }
}

impl LinearOperator for BlockView<'_> {
    fn dim(&self) -> usize {
        debug_assert_eq!(self.rows(), self.cols());
        self.rows()
    }

    fn apply(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        self.mul_vec(f, x)
    }
}

/// The unclamped threshold
/// `(t+1)^{(w-2)(a-1)/e} n^{(w-2)/e}` with `e = (w-2)a + 3 - w`.
pub fn default_k_raw(n: usize, alpha: f64, t: f64, omega: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(AlgebraError::Domain(format!(
            "the density threshold formula needs 1 < alpha < 2, got {alpha}"
        )));
    }
    if !(2.0..=3.0).contains(&omega) {
        return Err(AlgebraError::Domain(format!("omega must lie in [2, 3], got {omega}")));
    }
    if !(t >= 0.0) {
        return Err(AlgebraError::Domain(format!("t must be nonnegative, got {t}")));
    }
    let e = (omega - 2.0) * alpha + 3.0 - omega;
    let tpow = (omega - 2.0) * (alpha - 1.0) / e;
    let npow = (omega - 2.0) / e;
    Ok((t + 1.0).powf(tpow) * (n as f64).powf(npow))
}

/// Largest legal threshold: the largest integer strictly below
/// `n^{1/a} (t+1)^{1-1/a}`, and at least 1.
pub fn k_upper(n: usize, alpha: f64, t: f64) -> usize {
    let bound = (n as f64).powf(1.0 / alpha) * (t + 1.0).powf(1.0 - 1.0 / alpha);
    ((bound.ceil() as usize).saturating_sub(1)).max(1)
}

/// Density threshold for the symmetric determinant, rounded and clamped to
/// the legal range.
pub fn default_k(n: usize, p: &PlbParams, omega: f64) -> Result<usize> {
    let raw = default_k_raw(n, p.alpha, p.t, omega)?;
    let k = (raw.round() as usize).max(1);
    Ok(k.min(k_upper(n, p.alpha, p.t)))
}

/// `ceil(n^{1/a})`, used when only the exponent is known.
pub fn plb_k(n: usize, alpha: f64) -> usize {
    ((n as f64).powf(1.0 / alpha).ceil() as usize).max(1)
}

/// `ceil(sqrt(2m/n))`, the average-degree pivot used without PLB
/// parameters.
pub fn heuristic_k(n: usize, m: usize) -> usize {
    if n == 0 {
        return 1;
    }
    ((2.0 * m as f64 / n as f64).sqrt().ceil() as usize).max(1)
}
