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

//! Block elimination solvers: determinant, linear solve and inverse.
//!
//! With `M` permuted so that dense rows come first,
//!
//! ```text
//!     M = [ A  B ]      det M = det D * det(A - B D^{-1} C)
//!         [ C  D ]
//! ```
//!
//! The symmetric pipeline factors `D` by Lanczos. The general pipeline first
//! mixes the trailing columns with a random Hankel matrix `H` and diagonal
//! `J`, `M~ = M [[I, H_B J], [0, H_D J]]`, so that `M~_D` has a single
//! invariant factor, and inverts `M~_D` through its Frobenius form.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::{DenseMatrix, LuFactors};
use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;
use crate::frobenius::{frobenius_with_retries, FrobeniusForm};
use crate::hankel::HankelOperator;
use crate::lanczos::{factor_operator, FactorMethod, LanczosOptions, SymmetricFactors, DEFAULT_RETRIES};
use crate::operator::FnOperator;
use crate::partition::{Block, BlockPartition};
use crate::sparse::{SparseMatrix, Symmetry};

/// Largest dense block the solvers will materialize.
pub const MAX_DENSE_DIM: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    Symmetric,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub pipeline: Pipeline,
    pub k: usize,
    pub n: usize,
    pub n_k: usize,
    pub m_cd: usize,
    pub m_bcd: usize,
    pub seed: u64,
    /// Randomized attempts beyond the first.
    pub retries: usize,
    /// Set when the run fell back to dense elimination of the whole matrix.
    pub fallback: Option<String>,
}

impl SolveStats {
    /// Whether any randomized step had to be repeated or abandoned.
    pub fn retried(&self) -> bool {
        self.retries > 0 || self.fallback.is_some()
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Symmetric {
        trailing: Option<SymmetricFactors>,
        z: LuFactors,
    },
    General {
        trailing: Option<Preconditioned>,
        z: LuFactors,
    },
    /// `M` itself is singular; nothing further is kept.
    Singular,
    Dense(LuFactors),
}

#[derive(Debug, Clone)]
struct Preconditioned {
    frob: FrobeniusForm,
    h: HankelOperator,
    j: Vec<u64>,
}

/// Retained intermediates of one elimination, reusable for many right-hand
/// sides.
#[derive(Debug, Clone)]
pub struct SchurFactorization {
    field: PrimeField,
    m: SparseMatrix,
    part: BlockPartition,
    kind: Kind,
    det: u64,
    stats: SolveStats,
}

fn check_square(m: &SparseMatrix) -> Result<()> {
    if m.rows() != m.cols() {
        return Err(AlgebraError::Dimension(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    Ok(())
}

fn check_dense_dim(d: usize) -> Result<()> {
    if d > MAX_DENSE_DIM {
        return Err(AlgebraError::Resource(format!(
            "block of dimension {d} exceeds the dense cap of {MAX_DENSE_DIM}"
        )));
    }
    Ok(())
}

impl SchurFactorization {
    /// Picks the symmetric pipeline for symmetric and skew-symmetric input.
    pub fn new(f: &PrimeField, m: &SparseMatrix, k: usize, seed: u64) -> Result<SchurFactorization> {
        check_square(m)?;
        match m.symmetry(f) {
            Symmetry::General => SchurFactorization::general(f, m, k, seed),
            _ => SchurFactorization::symmetric(f, m, k, seed),
        }
    }

    pub fn symmetric(f: &PrimeField, m: &SparseMatrix, k: usize, seed: u64) -> Result<SchurFactorization> {
        check_square(m)?;
        if m.symmetry(f) == Symmetry::General {
            return Err(AlgebraError::Precondition(
                "symmetric pipeline needs a symmetric or skew-symmetric matrix".into(),
            ));
        }
        let part = BlockPartition::for_matrix(m, k)?;
        let (n_k, d) = (part.n_k(), part.n() - part.n_k());
        check_dense_dim(n_k)?;
        check_dense_dim(d)?;
        let mut stats = base_stats(Pipeline::Symmetric, &part, seed);

        let trailing = if d == 0 {
            None
        } else {
            let dview = part.view(m, Block::D);
            let fac = factor_operator(f, &dview, seed, LanczosOptions::default())?;
            stats.retries = fac.attempts.saturating_sub(1);
            if fac.method == FactorMethod::DenseLdl {
                stats.retries = stats.retries.max(1);
            }
            if fac.det == 0 {
                return SchurFactorization::dense(f, m, part, stats, "trailing block is singular");
            }
            Some(fac)
        };
        let a = part.view(m, Block::A).to_dense();
        let z = match &trailing {
            None => a,
            Some(fac) => {
                // Q^{-1} C and B Q^{-T} first, then the tridiagonal solves,
                // then one dense product.
                let qt = fac.q_inv.transpose();
                let c = part.view(m, Block::C);
                let b = part.view(m, Block::B);
                let mut qc_t = DenseMatrix::zeros(n_k, d);
                for l in 0..d {
                    for (j, v) in c.row(l) {
                        f.axpy(qc_t.row_mut(j), v, qt.row(l));
                    }
                }
                let mut sol_t = DenseMatrix::zeros(d, n_k);
                for j in 0..n_k {
                    let s = fac.t.solve(f, qc_t.row(j))?;
                    for (l, x) in s.into_iter().enumerate() {
                        sol_t.set(l, j, x);
                    }
                }
                let mut bq = DenseMatrix::zeros(n_k, d);
                for h in 0..n_k {
                    let row = bq.row_mut(h);
                    for (l, v) in b.row(h) {
                        f.axpy(row, v, qt.row(l));
                    }
                }
                a.sub(f, &bq.mul(f, &sol_t)?)?
            }
        };
        let z = LuFactors::new(f, &z)?;
        let det_d = trailing.as_ref().map_or(1, |t| t.det);
        let det = f.mul(det_d, z.det());
        Ok(SchurFactorization {
            field: *f,
            m: m.clone(),
            part,
            kind: Kind::Symmetric { trailing, z },
            det,
            stats,
        })
    }

    pub fn general(f: &PrimeField, m: &SparseMatrix, k: usize, seed: u64) -> Result<SchurFactorization> {
        check_square(m)?;
        let part = BlockPartition::for_matrix(m, k)?;
        let (n, n_k) = (part.n(), part.n_k());
        let d = n - n_k;
        check_dense_dim(n_k)?;
        check_dense_dim(d)?;
        let mut stats = base_stats(Pipeline::General, &part, seed);
        let a = part.view(m, Block::A).to_dense();
        if d == 0 {
            let z = LuFactors::new(f, &a)?;
            let det = z.det();
            return Ok(SchurFactorization {
                field: *f,
                m: m.clone(),
                part,
                kind: Kind::General { trailing: None, z },
                det,
                stats,
            });
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let top = part.row_band(m, 0..n_k);
        let bottom = part.row_band(m, n_k..n);
        let mut singular_seen = false;
        for attempt in 0..DEFAULT_RETRIES {
            stats.retries = attempt;
            let h = HankelOperator::sample_rect(f, n, d, rng.next_u64());
            let j: Vec<u64> = (0..d).map(|_| f.random_nonzero(&mut rng)).collect();
            // det(H_D J) must be nonzero for the preconditioner to be
            // invertible.
            let mut hd = DenseMatrix::zeros(d, d);
            for r in 0..d {
                let row = hd.row_mut(r);
                for (c, x) in row.iter_mut().enumerate() {
                    *x = f.mul(h.get(n_k + r, c), j[c]);
                }
            }
            let det_hd = LuFactors::new(f, &hd)?.det();
            if det_hd == 0 {
                continue;
            }
            let mix = |y: &[u64]| -> Vec<u64> {
                let jy: Vec<u64> = y.iter().zip(&j).map(|(&a, &b)| f.mul(a, b)).collect();
                h.mul_vec(f, &jy)
            };
            let md = FnOperator::new(d, |f: &PrimeField, y: &[u64]| bottom.mul_vec(f, &mix(y)));
            let frob = match frobenius_with_retries(f, &md, rng.next_u64(), 1) {
                Ok(fr) => fr,
                Err(AlgebraError::MultipleInvariantFactors(_)) => continue,
                Err(e) => return Err(e),
            };
            if frob.companion.g[0] == 0 {
                // Confirm on a fresh preconditioner before declaring M
                // singular.
                if singular_seen {
                    return Ok(SchurFactorization {
                        field: *f,
                        m: m.clone(),
                        part,
                        kind: Kind::Singular,
                        det: 0,
                        stats,
                    });
                }
                singular_seen = true;
                continue;
            }
            // Z~ = A - M~_B M~_D^{-1} C, one column of C at a time.
            let c = part.view(m, Block::C).to_dense();
            let mut z = a.clone();
            for col in 0..n_k {
                let y = frob.apply_inverse(f, &c.column(col))?;
                let mb = top.mul_vec(f, &mix(&y));
                for (r, x) in mb.into_iter().enumerate() {
                    let v = f.sub(z.get(r, col), x);
                    z.set(r, col, v);
                }
            }
            let z = LuFactors::new(f, &z)?;
            let det = f.div(f.mul(z.det(), frob.det(f)), det_hd)?;
            return Ok(SchurFactorization {
                field: *f,
                m: m.clone(),
                part,
                kind: Kind::General {
                    trailing: Some(Preconditioned { frob, h, j }),
                    z,
                },
                det,
                stats,
            });
        }
        stats.retries = DEFAULT_RETRIES;
        SchurFactorization::dense(f, m, part, stats, "no single-invariant-factor preconditioner found")
    }

    fn dense(
        f: &PrimeField,
        m: &SparseMatrix,
        part: BlockPartition,
        mut stats: SolveStats,
        why: &str,
    ) -> Result<SchurFactorization> {
        check_dense_dim(part.n())?;
        stats.fallback = Some(format!("dense elimination: {why}"));
        let full = part.row_band(m, 0..part.n()).to_dense();
        let lu = LuFactors::new(f, &full)?;
        Ok(SchurFactorization {
            field: *f,
            m: m.clone(),
            det: lu.det(),
            part,
            kind: Kind::Dense(lu),
            stats,
        })
    }

    pub fn det(&self) -> u64 {
        self.det
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    pub fn partition(&self) -> &BlockPartition {
        &self.part
    }

    /// Solves `M x = v`; the residual is checked before returning.
    pub fn solve(&self, v: &[u64]) -> Result<Vec<u64>> {
        let f = &self.field;
        let n = self.part.n();
        if v.len() != n {
            return Err(AlgebraError::Dimension(format!("rhs of length {} for n = {n}", v.len())));
        }
        if self.det == 0 {
            return Err(AlgebraError::Singular);
        }
        let y = self.solve_permuted(&self.part.permute(v))?;
        let x = self.part.unpermute(&y);
        assert_eq!(self.m.mul_vec(f, &x), v, "block solve produced a nonzero residual");
        Ok(x)
    }

    /// Solves in partitioned coordinates, unchecked.
    fn solve_permuted(&self, v: &[u64]) -> Result<Vec<u64>> {
        let f = &self.field;
        let m = &self.m;
        let part = &self.part;
        let n_k = part.n_k();
        let (va, vd) = v.split_at(n_k);
        match &self.kind {
            Kind::Singular => Err(AlgebraError::Singular),
            Kind::Dense(lu) => lu.solve(v),
            Kind::Symmetric { trailing, z } => {
                let Some(fac) = trailing else {
                    return z.solve(va);
                };
                let b = part.view(m, Block::B);
                let c = part.view(m, Block::C);
                let w = fac.apply_inverse(f, vd)?;
                let rhs = sub_vec(f, va, &b.mul_vec(f, &w));
                let ya = z.solve(&rhs)?;
                let yd = fac.apply_inverse(f, &sub_vec(f, vd, &c.mul_vec(f, &ya)))?;
                Ok([ya, yd].concat())
            }
            Kind::General { trailing, z } => {
                let Some(pre) = trailing else {
                    return z.solve(va);
                };
                let top = part.row_band(m, 0..n_k);
                let c = part.view(m, Block::C);
                let mix = |y: &[u64]| -> Vec<u64> {
                    let jy: Vec<u64> = y.iter().zip(&pre.j).map(|(&a, &b)| f.mul(a, b)).collect();
                    pre.h.mul_vec(f, &jy)
                };
                let w = pre.frob.apply_inverse(f, vd)?;
                let rhs = sub_vec(f, va, &top.mul_vec(f, &mix(&w)));
                let ya = z.solve(&rhs)?;
                let yd = pre.frob.apply_inverse(f, &sub_vec(f, vd, &c.mul_vec(f, &ya)))?;
                // Undo the column mixing: x = [y_A; 0] + H J y_D.
                let mut x = mix(&yd);
                for (xi, &a) in x.iter_mut().zip(&ya) {
                    *xi = f.add(*xi, a);
                }
                Ok(x)
            }
        }
    }

    /// `M^{-1}`, one block-inverse application per column.
    pub fn inverse(&self) -> Result<DenseMatrix> {
        let n = self.part.n();
        if self.det == 0 {
            return Err(AlgebraError::Singular);
        }
        let mut cols = vec![Vec::new(); n];
        let mut e = vec![0u64; n];
        for old in 0..n {
            let new = self.part.new_index(old);
            e[new] = 1;
            let y = self.solve_permuted(&e)?;
            e[new] = 0;
            cols[old] = self.part.unpermute(&y);
        }
        let inv = DenseMatrix::from_columns(n, &cols);
        let f = &self.field;
        let check = self.m.mul_dense(f, &inv)?;
        assert!(check.is_identity(), "block inverse produced a nonzero residual");
        Ok(inv)
    }

    /// The leading `n_k x n_k` block of `M^{-1}` in partitioned order.
    pub fn inverse_high_block(&self) -> Result<DenseMatrix> {
        let n_k = self.part.n_k();
        if self.det == 0 {
            return Err(AlgebraError::Singular);
        }
        if let Kind::Symmetric { z, .. } = &self.kind {
            return z.inverse();
        }
        let n = self.part.n();
        let mut cols = Vec::with_capacity(n_k);
        let mut e = vec![0u64; n];
        for j in 0..n_k {
            e[j] = 1;
            let mut y = self.solve_permuted(&e)?;
            e[j] = 0;
            y.truncate(n_k);
            cols.push(y);
        }
        Ok(DenseMatrix::from_columns(n_k, &cols))
    }
}

fn base_stats(pipeline: Pipeline, part: &BlockPartition, seed: u64) -> SolveStats {
    SolveStats {
        pipeline,
        k: part.k(),
        n: part.n(),
        n_k: part.n_k(),
        m_cd: part.m_cd(),
        m_bcd: part.m_bcd(),
        seed,
        retries: 0,
        fallback: None,
    }
}

fn sub_vec(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetOutcome {
    pub det: u64,
    pub stats: SolveStats,
}

/// Determinant of a symmetric or skew-symmetric matrix.
pub fn det_symmetric(f: &PrimeField, m: &SparseMatrix, k: usize, seed: u64) -> Result<DetOutcome> {
    let s = SchurFactorization::symmetric(f, m, k, seed)?;
    Ok(DetOutcome { det: s.det, stats: s.stats })
}

pub fn det_general(f: &PrimeField, m: &SparseMatrix, k: usize, seed: u64) -> Result<DetOutcome> {
    let s = SchurFactorization::general(f, m, k, seed)?;
    Ok(DetOutcome { det: s.det, stats: s.stats })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub x: Vec<u64>,
    pub stats: SolveStats,
}

/// Solves `M x = v`, using the symmetric pipeline when `M` is symmetric or
/// skew-symmetric.
pub fn solve(f: &PrimeField, m: &SparseMatrix, v: &[u64], k: usize, seed: u64) -> Result<SolveOutcome> {
    let s = SchurFactorization::new(f, m, k, seed)?;
    let x = s.solve(v)?;
    Ok(SolveOutcome { x, stats: s.stats })
}

#[derive(Debug, Clone)]
pub struct InverseOutcome {
    pub inverse: DenseMatrix,
    pub stats: SolveStats,
}

pub fn inverse(f: &PrimeField, m: &SparseMatrix, k: usize, seed: u64) -> Result<InverseOutcome> {
    let s = SchurFactorization::new(f, m, k, seed)?;
    let inverse = s.inverse()?;
    Ok(InverseOutcome { inverse, stats: s.stats })
}
