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

//! Companion matrices and the one-invariant-factor Frobenius form.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dense::{DenseMatrix, LuFactors};
use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;
use crate::lanczos::DEFAULT_RETRIES;
use crate::operator::LinearOperator;

/// Companion matrix of the monic `x^d + g[d-1] x^{d-1} + ... + g[0]`:
/// ones on the subdiagonal and `-g` in the last column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompanionForm {
    pub g: Vec<u64>,
}

impl CompanionForm {
    pub fn new(g: Vec<u64>) -> CompanionForm {
        CompanionForm { g }
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    /// `(-1)^d g_0`.
    pub fn det(&self, f: &PrimeField) -> u64 {
        match self.g.first() {
            None => 1,
            Some(&g0) if self.g.len().is_multiple_of(2) => g0,
            Some(&g0) => f.neg(g0),
        }
    }

    pub fn mul_vec(&self, f: &PrimeField, x: &[u64]) -> Vec<u64> {
        let d = self.dim();
        assert_eq!(x.len(), d, "vector length");
        if d == 0 {
            return Vec::new();
        }
        let last = x[d - 1];
        (0..d)
            .map(|i| {
                let shifted = if i == 0 { 0 } else { x[i - 1] };
                f.sub(shifted, f.mul(self.g[i], last))
            })
            .collect()
    }

    /// `C^{-1} x` in `O(d)`.
    pub fn inverse_apply(&self, f: &PrimeField, x: &[u64]) -> Result<Vec<u64>> {
        let d = self.dim();
        if x.len() != d {
            return Err(AlgebraError::Dimension(format!("vector length {} for order {d}", x.len())));
        }
        if d == 0 {
            return Ok(Vec::new());
        }
        if self.g[0] == 0 {
            return Err(AlgebraError::Singular);
        }
        let mut y = vec![0u64; d];
        y[d - 1] = f.neg(f.div(x[0], self.g[0])?);
        for i in 1..d {
            y[i - 1] = f.add(x[i], f.mul(self.g[i], y[d - 1]));
        }
        Ok(y)
    }

    pub fn to_dense(&self, f: &PrimeField) -> DenseMatrix {
        let d = self.dim();
        let mut m = DenseMatrix::zeros(d, d);
        for i in 1..d {
            m.set(i, i - 1, 1);
        }
        for i in 0..d {
            let v = f.add(m.get(i, d - 1), f.neg(self.g[i]));
            m.set(i, d - 1, v);
        }
        m
    }
}

/// `C_f^{-1}` applied to `x`.
pub fn companion_inverse_apply(f: &PrimeField, c: &CompanionForm, x: &[u64]) -> Result<Vec<u64>> {
    c.inverse_apply(f, x)
}

/// `V M V^{-1} = C_f` where `V^{-1} = K` is the Krylov matrix of a cyclic
/// vector.
#[derive(Debug, Clone)]
pub struct FrobeniusForm {
    pub companion: CompanionForm,
    pub krylov: DenseMatrix,
    krylov_lu: LuFactors,
    pub attempts: usize,
}

impl FrobeniusForm {
    /// `V = K^{-1}`, materialized.
    pub fn transition(&self) -> Result<DenseMatrix> {
        self.krylov_lu.inverse()
    }

    pub fn det(&self, f: &PrimeField) -> u64 {
        self.companion.det(f)
    }

    /// `M^{-1} x = K C^{-1} K^{-1} x`.
    pub fn apply_inverse(&self, f: &PrimeField, x: &[u64]) -> Result<Vec<u64>> {
        let y = self.krylov_lu.solve(x)?;
        let y = self.companion.inverse_apply(f, &y)?;
        Ok(self.krylov.mul_vec(f, &y))
    }
}

/// Finds a cyclic vector for `m` by random sampling and reads the minimal
/// polynomial off the Krylov basis.
pub fn frobenius_one_block<M: LinearOperator + ?Sized>(f: &PrimeField, m: &M, seed: u64) -> Result<FrobeniusForm> {
    frobenius_with_retries(f, m, seed, DEFAULT_RETRIES)
}

pub fn frobenius_with_retries<M: LinearOperator + ?Sized>(
    f: &PrimeField,
    m: &M,
    seed: u64,
    retries: usize,
) -> Result<FrobeniusForm> {
    let d = m.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=retries.max(1) {
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(d + 1);
        cols.push((0..d).map(|_| f.random(&mut rng)).collect());
        for i in 0..d {
            let next = m.apply(f, &cols[i]);
            cols.push(next);
        }
        let tail = cols.pop().expect("d + 1 columns");
        let krylov = DenseMatrix::from_columns(d, &cols);
        let lu = LuFactors::new(f, &krylov)?;
        if lu.is_singular() {
            continue;
        }
        let c = lu.solve(&tail)?;
        let g = c.iter().map(|&x| f.neg(x)).collect();
        return Ok(FrobeniusForm {
            companion: CompanionForm::new(g),
            krylov,
            krylov_lu: lu,
            attempts: attempt,
        });
    }
    Err(AlgebraError::MultipleInvariantFactors(retries.max(1)))
}
