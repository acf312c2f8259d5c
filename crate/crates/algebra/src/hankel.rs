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

//! Hankel matrices, stored by their anti-diagonal coefficients.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseMatrix;
use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;

/// `H[i][j] = h[i + j]` for an `rows x cols` matrix, so `h` has
/// `rows + cols - 1` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HankelOperator {
    rows: usize,
    cols: usize,
    coeffs: Vec<u64>,
}

impl HankelOperator {
    pub fn new(rows: usize, cols: usize, coeffs: Vec<u64>) -> Result<HankelOperator> {
        let want = (rows + cols).saturating_sub(1);
        if coeffs.len() != want {
            return Err(AlgebraError::Dimension(format!(
                "{rows}x{cols} Hankel matrix needs {want} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(HankelOperator { rows, cols, coeffs })
    }

    pub fn square(coeffs: Vec<u64>) -> Result<HankelOperator> {
        if coeffs.len().is_multiple_of(2) {
            return Err(AlgebraError::Dimension(format!(
                "square Hankel matrix needs an odd coefficient count, got {}",
                coeffs.len()
            )));
        }
        let n = coeffs.len().div_ceil(2);
        HankelOperator::new(n, n, coeffs)
    }

    /// Uniformly random `n x n` Hankel matrix.
    pub fn sample(f: &PrimeField, n: usize, seed: u64) -> HankelOperator {
        HankelOperator::sample_rect(f, n, n, seed)
    }

    pub fn sample_rect(f: &PrimeField, rows: usize, cols: usize, seed: u64) -> HankelOperator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = (rows + cols).saturating_sub(1);
        HankelOperator {
            rows,
            cols,
            coeffs: (0..len).map(|_| f.random(&mut rng)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.coeffs[i + j]
    }

    pub fn mul_vec(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| f.dot(&self.coeffs[i..i + self.cols], x))
            .collect()
    }

    /// `H X`, one column at a time.
    pub fn apply(&self, f: &PrimeField, x: &DenseMatrix) -> Result<DenseMatrix> {
        if x.rows() != self.cols {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} Hankel times {}x{}",
                self.rows,
                self.cols,
                x.rows(),
                x.cols()
            )));
        }
        let cols: Vec<Vec<u64>> = (0..x.cols()).map(|j| self.mul_vec(f, &x.column(j))).collect();
        Ok(DenseMatrix::from_columns(self.rows, &cols))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            m.row_mut(i).copy_from_slice(&self.coeffs[i..i + self.cols]);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exchange_matrix_reverses() {
        let f = PrimeField::default();
        let mut h = vec![0u64; 9];
        h[4] = 1;
        let h = HankelOperator::square(h).unwrap();
        assert_eq!(h.mul_vec(&f, &[1, 2, 3, 4, 5]), vec![5, 4, 3, 2, 1]);
    }

    #[test]
    fn apply_identity_reproduces_dense() {
        let f = PrimeField::default();
        let h = HankelOperator::sample_rect(&f, 7, 4, 3);
        assert_eq!(h.apply(&f, &DenseMatrix::identity(4)).unwrap(), h.to_dense());
        assert!(HankelOperator::new(3, 3, vec![0; 4]).is_err());
    }
}
