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

//! Tridiagonal matrices over GF(p).

use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;

/// A square tridiagonal matrix. `sub[i]` sits at `(i + 1, i)` and `sup[i]`
/// at `(i, i + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tridiagonal {
    pub diag: Vec<u64>,
    pub sub: Vec<u64>,
    pub sup: Vec<u64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<u64>, sub: Vec<u64>, sup: Vec<u64>) -> Result<Tridiagonal> {
        let n = diag.len();
        let off = n.saturating_sub(1);
        if sub.len() != off || sup.len() != off {
            return Err(AlgebraError::Dimension(format!(
                "tridiagonal of order {n} needs {off} off-diagonal entries, got {} and {}",
                sub.len(),
                sup.len()
            )));
        }
        Ok(Tridiagonal { diag, sub, sup })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Determinant by the three-term continuant recurrence.
    pub fn det(&self, f: &PrimeField) -> u64 {
        let (mut prev, mut cur) = (1u64, 1u64);
        for i in 0..self.n() {
            let next = if i == 0 {
                self.diag[0]
            } else {
                let off = f.mul(self.sub[i - 1], self.sup[i - 1]);
                f.sub(f.mul(self.diag[i], cur), f.mul(off, prev))
            };
            prev = cur;
            cur = next;
        }
        cur
    }

    pub fn mul_vec(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        let n = self.n();
        (0..n)
            .map(|i| {
                let mut acc = f.mul(self.diag[i], x[i]);
                if i > 0 {
                    acc = f.mul_add(acc, self.sub[i - 1], x[i - 1]);
                }
                if i + 1 < n {
                    acc = f.mul_add(acc, self.sup[i], x[i + 1]);
                }
                acc
            })
            .collect()
    }

    /// Solves `T x = b` by elimination, swapping adjacent rows only when the
    /// pivot vanishes.
    pub fn solve(&self, f: &PrimeField, b: &[u64]) -> Result<Vec<u64>> {
        let n = self.n();
        if b.len() != n {
            return Err(AlgebraError::Dimension(format!("rhs length {} for order {n}", b.len())));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut d = self.diag.clone();
        let mut du = self.sup.clone();
        let mut du2 = vec![0u64; n.saturating_sub(2)];
        let mut x = b.to_vec();
        for i in 0..n - 1 {
            if d[i] != 0 {
                let l = f.div(self.sub[i], d[i])?;
                d[i + 1] = f.sub(d[i + 1], f.mul(l, du[i]));
                x[i + 1] = f.sub(x[i + 1], f.mul(l, x[i]));
            } else {
                if self.sub[i] == 0 {
                    return Err(AlgebraError::Singular);
                }
                // Row i has a zero in column i, so after the swap the lower
                // row needs no elimination.
                let (old_d1, old_du) = (d[i + 1], du[i]);
                d[i] = self.sub[i];
                d[i + 1] = old_du;
                du[i] = old_d1;
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] = 0;
                }
                x.swap(i, i + 1);
            }
        }
        if d[n - 1] == 0 {
            return Err(AlgebraError::Singular);
        }
        for i in (0..n).rev() {
            let mut r = x[i];
            if i + 1 < n {
                r = f.sub(r, f.mul(du[i], x[i + 1]));
            }
            if i + 2 < n {
                r = f.sub(r, f.mul(du2[i], x[i + 2]));
            }
            x[i] = f.div(r, d[i])?;
        }
        Ok(x)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.n();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, self.diag[i]);
            if i + 1 < n {
                m.set(i + 1, i, self.sub[i]);
                m.set(i, i + 1, self.sup[i]);
            }
        }
        m
    }
}
