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

//! Lanczos tridiagonalization of symmetric and skew-symmetric matrices over
//! GF(p), with a dense block LDL^T fallback.
//!
//! Both paths produce `A = Q T Q^T` with `T` tridiagonal. The inverse of `Q`
//! is kept explicitly so that `A^{-1} x = Q^{-T} T^{-1} Q^{-1} x` costs two
//! dense products and a tridiagonal solve.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;
use crate::operator::LinearOperator;
use crate::sparse::{SparseMatrix, Symmetry};
use crate::tridiagonal::Tridiagonal;

pub const DEFAULT_RETRIES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorMethod {
    Lanczos,
    DenseLdl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LanczosOptions {
    pub retries: usize,
    pub dense_fallback: bool,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            retries: DEFAULT_RETRIES,
            dense_fallback: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymmetricFactors {
    pub q: DenseMatrix,
    pub q_inv: DenseMatrix,
    pub t: Tridiagonal,
    pub det: u64,
    pub method: FactorMethod,
    /// Lanczos attempts made, including the successful one.
    pub attempts: usize,
}

impl SymmetricFactors {
    pub fn n(&self) -> usize {
        self.t.n()
    }

    /// `A^{-1} x` for the factored `A`.
    pub fn apply_inverse(&self, f: &PrimeField, x: &[u64]) -> Result<Vec<u64>> {
        if self.det == 0 {
            return Err(AlgebraError::Singular);
        }
        let y = self.q_inv.mul_vec(f, x);
        let y = self.t.solve(f, &y)?;
        Ok(self.q_inv.vec_mul(f, &y))
    }

    /// `Q T Q^T`, for checking.
    pub fn reconstruct(&self, f: &PrimeField) -> Result<DenseMatrix> {
        self.q.mul(f, &self.t.to_dense())?.mul(f, &self.q.transpose())
    }
}

/// Factors a sparse symmetric or skew-symmetric matrix.
pub fn lanczos_sym(f: &PrimeField, a: &SparseMatrix, seed: u64, opts: LanczosOptions) -> Result<SymmetricFactors> {
    if a.rows() != a.cols() {
        return Err(AlgebraError::Dimension(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    if a.symmetry(f) == Symmetry::General {
        return Err(AlgebraError::Precondition(
            "matrix is neither symmetric nor skew-symmetric".into(),
        ));
    }
    factor_operator(f, a, seed, opts)
}

/// Same as [`lanczos_sym`] for an operator the caller knows to be symmetric
/// or skew-symmetric.
pub fn factor_operator<A: LinearOperator + ?Sized>(
    f: &PrimeField,
    a: &A,
    seed: u64,
    opts: LanczosOptions,
) -> Result<SymmetricFactors> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    while attempts < opts.retries.max(1) {
        attempts += 1;
        match lanczos_attempt(f, a, &mut rng)? {
            Attempt::Done(mut fac) => {
                fac.attempts = attempts;
                return Ok(fac);
            }
            Attempt::Singular => break,
            Attempt::Breakdown => {}
        }
    }
    if !opts.dense_fallback {
        return Err(AlgebraError::Breakdown(attempts));
    }
    let mut fac = dense_ldl(f, &a.to_dense(f))?;
    fac.attempts = attempts;
    Ok(fac)
}

enum Attempt {
    Done(SymmetricFactors),
    /// The Krylov space closed on a singular restriction, so `A` is singular.
    Singular,
    Breakdown,
}

fn lanczos_attempt<A: LinearOperator + ?Sized>(f: &PrimeField, a: &A, rng: &mut ChaCha8Rng) -> Result<Attempt> {
    let n = a.dim();
    if n == 0 {
        return Ok(Attempt::Done(SymmetricFactors {
            q: DenseMatrix::zeros(0, 0),
            q_inv: DenseMatrix::zeros(0, 0),
            t: Tridiagonal::new(vec![], vec![], vec![])?,
            det: 1,
            method: FactorMethod::Lanczos,
            attempts: 0,
        }));
    }
    // Work on S A S for a random diagonal S.
    let s: Vec<u64> = (0..n).map(|_| f.random_nonzero(rng)).collect();
    let apply = |x: &[u64]| -> Vec<u64> {
        let sx: Vec<u64> = x.iter().zip(&s).map(|(&xi, &si)| f.mul(xi, si)).collect();
        let mut y = a.apply(f, &sx);
        for (yi, &si) in y.iter_mut().zip(&s) {
            *yi = f.mul(*yi, si);
        }
        y
    };

    let mut ws: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut deltas: Vec<u64> = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    let mut sub = Vec::with_capacity(n);
    let mut sup = Vec::with_capacity(n);
    let mut cur: Vec<u64> = (0..n).map(|_| f.random(rng)).collect();
    let mut aw_prev: Vec<u64> = Vec::new();
    for i in 0..n {
        let delta = f.dot(&cur, &cur);
        if delta == 0 {
            return Ok(Attempt::Breakdown);
        }
        let aw = apply(&cur);
        let tii = f.dot(&cur, &aw);
        diag.push(tii);
        if i > 0 {
            sup.push(f.dot(&ws[i - 1], &aw));
            sub.push(f.dot(&cur, &aw_prev));
        }
        if i + 1 == n {
            ws.push(cur);
            deltas.push(delta);
            break;
        }
        let mut next = aw.clone();
        f.axpy(&mut next, f.neg(f.div(tii, delta)?), &cur);
        if i > 0 {
            f.axpy(&mut next, f.neg(f.div(sup[i - 1], deltas[i - 1])?), &ws[i - 1]);
        }
        ws.push(cur);
        deltas.push(delta);
        if next.iter().all(|&x| x == 0) {
            let partial = Tridiagonal::new(diag, sub, sup)?;
            return Ok(if partial.det(f) == 0 {
                Attempt::Singular
            } else {
                Attempt::Breakdown
            });
        }
        cur = next;
        aw_prev = aw;
    }
    let t = Tridiagonal::new(diag, sub, sup)?;

    // A = S^{-1} W D^{-1} T D^{-1} W^T S^{-1} with D = W^T W diagonal.
    let s_inv = f.batch_inv(&s)?;
    let d_inv = f.batch_inv(&deltas)?;
    let mut q = DenseMatrix::zeros(n, n);
    let mut q_inv = DenseMatrix::zeros(n, n);
    for (i, w) in ws.iter().enumerate() {
        let row = q_inv.row_mut(i);
        for r in 0..n {
            row[r] = f.mul(w[r], s[r]);
        }
        for r in 0..n {
            q.set(r, i, f.mul(f.mul(w[r], s_inv[r]), d_inv[i]));
        }
    }
    let s_prod = s.iter().fold(1, |acc, &x| f.mul(acc, x));
    let d_prod = deltas.iter().fold(1, |acc, &x| f.mul(acc, x));
    let denom = f.mul(d_prod, f.mul(s_prod, s_prod));
    let det = f.div(t.det(f), denom)?;
    Ok(Attempt::Done(SymmetricFactors {
        q,
        q_inv,
        t,
        det,
        method: FactorMethod::Lanczos,
        attempts: 0,
    }))
}

/// Dense `P A P^T = L T L^T` with 1x1 and 2x2 pivots, for symmetric or
/// skew-symmetric `A`.
pub fn dense_ldl(f: &PrimeField, a: &DenseMatrix) -> Result<SymmetricFactors> {
    let n = a.rows();
    if !a.is_square() {
        return Err(AlgebraError::Dimension(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let mut w = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut l = DenseMatrix::identity(n);
    let mut diag = vec![0u64; n];
    let mut off = vec![0u64; n.saturating_sub(1)];
    let mut off_t = vec![0u64; n.saturating_sub(1)];
    let mut k = 0;
    while k < n {
        if w.get(k, k) != 0 {
            let p = w.get(k, k);
            let pinv = f.inv(p)?;
            let ls: Vec<u64> = (k + 1..n).map(|i| f.mul(w.get(i, k), pinv)).collect();
            for (off_i, &li) in ls.iter().enumerate() {
                let i = k + 1 + off_i;
                l.set(i, k, li);
                if li == 0 {
                    continue;
                }
                for j in k + 1..n {
                    let v = f.sub(w.get(i, j), f.mul(li, w.get(k, j)));
                    w.set(i, j, v);
                }
            }
            diag[k] = p;
            k += 1;
            continue;
        }
        let Some(j) = (k + 1..n).find(|&j| w.get(j, k) != 0) else {
            // Zero column, hence a zero row as well.
            k += 1;
            continue;
        };
        if j != k + 1 {
            swap_sym(&mut w, j, k + 1);
            perm.swap(j, k + 1);
            for c in 0..k {
                let (x, y) = (l.get(j, c), l.get(k + 1, c));
                l.set(j, c, y);
                l.set(k + 1, c, x);
            }
        }
        let (e00, e01, e10, e11) = (w.get(k, k), w.get(k, k + 1), w.get(k + 1, k), w.get(k + 1, k + 1));
        let det_e = f.sub(f.mul(e00, e11), f.mul(e01, e10));
        let dinv = f.inv(det_e)?;
        // E^{-1} = [[e11, -e01], [-e10, e00]] / det
        let (i00, i01, i10, i11) = (
            f.mul(e11, dinv),
            f.mul(f.neg(e01), dinv),
            f.mul(f.neg(e10), dinv),
            f.mul(e00, dinv),
        );
        for i in k + 2..n {
            let (a0, a1) = (w.get(i, k), w.get(i, k + 1));
            let l0 = f.add(f.mul(a0, i00), f.mul(a1, i10));
            let l1 = f.add(f.mul(a0, i01), f.mul(a1, i11));
            l.set(i, k, l0);
            l.set(i, k + 1, l1);
            if l0 == 0 && l1 == 0 {
                continue;
            }
            for c in k + 2..n {
                let upd = f.add(f.mul(l0, w.get(k, c)), f.mul(l1, w.get(k + 1, c)));
                let v = f.sub(w.get(i, c), upd);
                w.set(i, c, v);
            }
        }
        diag[k] = e00;
        diag[k + 1] = e11;
        off[k] = e10;
        off_t[k] = e01;
        k += 2;
    }
    let t = Tridiagonal::new(diag, off, off_t)?;
    let det = t.det(f);

    // Q = P^T L and Q^{-1} = L^{-1} P.
    let l_inv = unit_lower_inverse(f, &l);
    let mut q = DenseMatrix::zeros(n, n);
    let mut q_inv = DenseMatrix::zeros(n, n);
    for (k, &r) in perm.iter().enumerate() {
        q.row_mut(r).copy_from_slice(l.row(k));
        for i in 0..n {
            q_inv.set(i, r, l_inv.get(i, k));
        }
    }
    Ok(SymmetricFactors {
        q,
        q_inv,
        t,
        det,
        method: FactorMethod::DenseLdl,
        attempts: 0,
    })
}

fn swap_sym(w: &mut DenseMatrix, a: usize, b: usize) {
    let n = w.rows();
    for c in 0..n {
        let (x, y) = (w.get(a, c), w.get(b, c));
        w.set(a, c, y);
        w.set(b, c, x);
    }
    for r in 0..n {
        let (x, y) = (w.get(r, a), w.get(r, b));
        w.set(r, a, y);
        w.set(r, b, x);
    }
}

fn unit_lower_inverse(f: &PrimeField, l: &DenseMatrix) -> DenseMatrix {
    let n = l.rows();
    let mut inv = DenseMatrix::identity(n);
    for i in 0..n {
        for k in 0..i {
            let lik = l.get(i, k);
            if lik == 0 {
                continue;
            }
            // row_i(inv) -= l_ik * row_k(inv)
            let row_k: Vec<u64> = inv.row(k)[..=k].to_vec();
            let row_i = inv.row_mut(i);
            f.axpy(&mut row_i[..=k], f.neg(lik), &row_k);
        }
    }
    inv
}
