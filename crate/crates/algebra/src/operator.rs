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

//! Black-box square operators.

use crate::dense::DenseMatrix;
use crate::field::PrimeField;
use crate::sparse::SparseMatrix;

/// A square matrix accessed only through products with vectors.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    fn apply(&self, f: &PrimeField, x: &[u64]) -> Vec<u64>;

    /// Materializes the operator one unit vector at a time.
    fn to_dense(&self, f: &PrimeField) -> DenseMatrix {
        let n = self.dim();
        let mut e = vec![0u64; n];
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            e[j] = 1;
            cols.push(self.apply(f, &e));
            e[j] = 0;
        }
        DenseMatrix::from_columns(n, &cols)
    }
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        debug_assert_eq!(self.rows(), self.cols());
        self.rows()
    }

    fn apply(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        self.mul_vec(f, x)
    }

    fn to_dense(&self, _f: &PrimeField) -> DenseMatrix {
        SparseMatrix::to_dense(self)
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows()
    }

    fn apply(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        self.mul_vec(f, x)
    }

    fn to_dense(&self, _f: &PrimeField) -> DenseMatrix {
        self.clone()
    }
}

/// Wraps a closure as an operator of the given dimension.
pub struct FnOperator<F> {
    dim: usize,
    op: F,
}

impl<F: Fn(&PrimeField, &[u64]) -> Vec<u64>> FnOperator<F> {
    pub fn new(dim: usize, op: F) -> Self {
        FnOperator { dim, op }
    }
}

impl<F: Fn(&PrimeField, &[u64]) -> Vec<u64>> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        (self.op)(f, x)
    }
}
