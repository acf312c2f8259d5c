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

//! Dense row-major matrices over GF(p).

use plb_core::matmul::{multiply, MulStrategy};

use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<u64>) -> Result<DenseMatrix> {
        if data.len() != rows * cols {
            return Err(AlgebraError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn diagonal(d: &[u64]) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// Matrix whose columns are `cols`, all of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<u64>]) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has the wrong length");
            for (i, &x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> DenseMatrix {
        let mut s = DenseMatrix::zeros(rows.len(), cols.len());
        for (si, i) in rows.enumerate() {
            s.row_mut(si).copy_from_slice(&self.row(i)[cols.clone()]);
        }
        s
    }

    pub fn mul(&self, f: &PrimeField, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.mul_with(f, other, MulStrategy::Classical)
    }

    pub fn mul_with(&self, f: &PrimeField, other: &DenseMatrix, strategy: MulStrategy) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = multiply(f, &self.data, &other.data, self.rows, self.cols, other.cols, strategy);
        Ok(DenseMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols, "vector length");
        (0..self.rows).map(|i| f.dot(self.row(i), x)).collect()
    }

    /// `x^T * self`.
    pub fn vec_mul(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows, "vector length");
        let mut y = vec![0u64; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0 {
                f.axpy(&mut y, xi, self.row(i));
            }
        }
        y
    }

    pub fn sub(&self, f: &PrimeField, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn add(&self, f: &PrimeField, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| f.add(a, b))
    }

    fn zip_with(&self, other: &DenseMatrix, op: impl Fn(u64, u64) -> u64) -> Result<DenseMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    pub fn scale_columns(&mut self, f: &PrimeField, s: &[u64]) {
        for i in 0..self.rows {
            for (x, &sj) in self.row_mut(i).iter_mut().zip(s) {
                *x = f.mul(*x, sj);
            }
        }
    }

    pub fn scale_rows(&mut self, f: &PrimeField, s: &[u64]) {
        for (i, &si) in s.iter().enumerate() {
            for x in self.row_mut(i) {
                *x = f.mul(*x, si);
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn lu(&self, f: &PrimeField) -> Result<LuFactors> {
        LuFactors::new(f, self)
    }

    /// Determinant by Gaussian elimination with row pivoting.
    pub fn det(&self, f: &PrimeField) -> Result<u64> {
        Ok(self.lu(f)?.det())
    }

    pub fn inverse(&self, f: &PrimeField) -> Result<DenseMatrix> {
        self.lu(f)?.inverse()
    }
}

/// `P A = L U` with unit lower `L`, stored packed.
#[derive(Debug, Clone)]
pub struct LuFactors {
    field: PrimeField,
    n: usize,
    lu: DenseMatrix,
    /// Row `i` of `P A` is row `perm[i]` of `A`.
    perm: Vec<usize>,
    odd: bool,
    singular: bool,
    /// Inverted pivots, when nonsingular.
    pivot_inv: Vec<u64>,
}

impl LuFactors {
    pub fn new(f: &PrimeField, a: &DenseMatrix) -> Result<LuFactors> {
        if !a.is_square() {
            return Err(AlgebraError::Dimension(format!(
                "LU of a {}x{} matrix",
                a.rows, a.cols
            )));
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        let mut singular = false;
        let mut pivot_inv = Vec::with_capacity(n);
        for k in 0..n {
            let Some(piv) = (k..n).find(|&i| lu.get(i, k) != 0) else {
                singular = true;
                break;
            };
            if piv != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
                odd = !odd;
            }
            let inv = f.inv(lu.get(k, k))?;
            pivot_inv.push(inv);
            let (head, tail) = lu.data.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..(k + 1) * n];
            for row in tail.chunks_mut(n) {
                if row[k] == 0 {
                    continue;
                }
                let factor = f.mul(row[k], inv);
                row[k] = factor;
                let neg = f.neg(factor);
                for j in k + 1..n {
                    row[j] = f.mul_add(row[j], neg, pivot_row[j]);
                }
            }
        }
        Ok(LuFactors {
            field: *f,
            n,
            lu,
            perm,
            odd,
            singular,
            pivot_inv,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn det(&self) -> u64 {
        let f = &self.field;
        if self.singular {
            return 0;
        }
        let d = (0..self.n).fold(1, |acc, i| f.mul(acc, self.lu.get(i, i)));
        if self.odd {
            f.neg(d)
        } else {
            d
        }
    }

    pub fn solve(&self, b: &[u64]) -> Result<Vec<u64>> {
        let f = &self.field;
        if self.singular {
            return Err(AlgebraError::Singular);
        }
        let n = self.n;
        if b.len() != n {
            return Err(AlgebraError::Dimension(format!("rhs of length {} for n = {n}", b.len())));
        }
        let mut x: Vec<u64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in 0..i {
                s = f.mul_add(s, f.neg(row[j]), x[j]);
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in i + 1..n {
                s = f.mul_add(s, f.neg(row[j]), x[j]);
            }
            x[i] = f.mul(s, self.pivot_inv[i]);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        let n = self.n;
        let mut cols = Vec::with_capacity(n);
        let mut e = vec![0u64; n];
        for j in 0..n {
            e[j] = 1;
            cols.push(self.solve(&e)?);
            e[j] = 0;
        }
        Ok(DenseMatrix::from_columns(n, &cols))
    }
}
