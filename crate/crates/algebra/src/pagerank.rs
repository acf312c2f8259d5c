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

//! PageRank by stochastic complementation, with power iteration as the
//! reference method.
//!
//! The chain is column-stochastic: column `j` spreads its mass evenly over
//! the out-neighbors of `j`, or over all vertices when `j` has none, and
//! `M = c P + (1 - c)/n E`. Splitting the vertices by out-degree,
//!
//! ```text
//!     S_A = M_A + M_B (I - M_D)^{-1} M_C,   pi_D = (I - M_D)^{-1} M_C pi_A
//! ```
//!
//! and `pi_A` is the stationary vector of the small dense matrix `S_A`.

use nalgebra::{DMatrix, DVector};
use plb_core::Graph;
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::partition::BlockPartition;

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const DEFAULT_TOL: f64 = 1e-10;

/// `M = c P + (1 - c)/n E` with dangling columns replaced by uniform ones.
#[derive(Debug, Clone)]
pub struct StochasticModel<'a> {
    g: &'a Graph,
    c: f64,
    inv_out: Vec<f64>,
}

impl<'a> StochasticModel<'a> {
    pub fn new(g: &'a Graph, c: f64) -> Result<StochasticModel<'a>> {
        if !(c > 0.0 && c < 1.0) {
            return Err(AlgebraError::Domain(format!("damping must lie in (0, 1), got {c}")));
        }
        let inv_out = (0..g.n())
            .map(|v| match g.neighbors(v).len() {
                0 => 0.0,
                d => 1.0 / d as f64,
            })
            .collect();
        Ok(StochasticModel { g, c, inv_out })
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn damping(&self) -> f64 {
        self.c
    }

    fn dangling(&self, j: usize) -> bool {
        self.inv_out[j] == 0.0
    }

    /// Weight of column `j` in the rank-one part: `M = c P' + (1/n) 1 w^T`
    /// with `P'` the non-dangling columns.
    fn w(&self, j: usize) -> f64 {
        if self.dangling(j) {
            1.0
        } else {
            1.0 - self.c
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut y = vec![0.0; n];
        let mut spread = 0.0;
        for j in 0..n {
            spread += self.w(j) * x[j];
            if !self.dangling(j) {
                let share = self.c * x[j] * self.inv_out[j];
                for &i in self.g.neighbors(j) {
                    y[i] += share;
                }
            }
        }
        let add = spread / n as f64;
        y.iter_mut().for_each(|v| *v += add);
        y
    }

    /// `||M x - x||_1`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.apply(x).iter().zip(x).map(|(a, b)| (a - b).abs()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageRank {
    pub scores: Vec<f64>,
    pub residual: f64,
    pub k: usize,
    pub n_k: usize,
    /// Series terms (complement) or sweeps (power iteration) performed.
    pub iterations: usize,
}

fn iteration_cap(tol: f64, c: f64) -> usize {
    ((tol.ln() / c.ln()).ceil().max(0.0) as usize) + 10
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(AlgebraError::Domain(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    Ok(())
}

fn l1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

/// Stochastic-complement PageRank with out-degree threshold `k`.
pub fn pagerank(g: &Graph, c: f64, k: usize, tol: f64) -> Result<PageRank> {
    check_tol(tol)?;
    let model = StochasticModel::new(g, c)?;
    let n = g.n();
    if n == 0 {
        return Err(AlgebraError::Precondition("PageRank of an empty graph".into()));
    }
    let part = BlockPartition::for_graph(g, k);
    // The leading block must be nonempty for S_A to carry the chain.
    let n_k = part.n_k().max(1);
    let d = n - n_k;
    let is_high = |v: usize| part.new_index(v) < n_k;
    let lo = |v: usize| part.new_index(v) - n_k;
    let inv_n = 1.0 / n as f64;
    let series_tol = tol / 10.0;
    let cap = iteration_cap(series_tol, c);
    let mut iterations = 0;

    // (I - c P_DD)^{-1} y by the geometric series.
    let mut core_solve = |y: Vec<f64>| -> Result<Vec<f64>> {
        let scale = l1(&y).max(f64::MIN_POSITIVE);
        let mut sum = y.clone();
        let mut term = y;
        for _ in 0..cap {
            iterations += 1;
            let mut next = vec![0.0; d];
            for (l, &t) in term.iter().enumerate() {
                let j = part.old_index(n_k + l);
                if t == 0.0 || model.dangling(j) {
                    continue;
                }
                let share = c * t * model.inv_out[j];
                for &i in g.neighbors(j) {
                    if !is_high(i) {
                        next[lo(i)] += share;
                    }
                }
            }
            let size = l1(&next);
            for (s, x) in sum.iter_mut().zip(&next) {
                *s += x;
            }
            if size <= series_tol * scale {
                return Ok(sum);
            }
            term = next;
        }
        Err(AlgebraError::Convergence(format!(
            "geometric series did not reach {series_tol:e} in {cap} terms"
        )))
    };

    // Sherman-Morrison around the rank-one part of M_D = c P_DD + u w_D^T,
    // u = 1/n.
    let w_d: Vec<f64> = (0..d).map(|l| model.w(part.old_index(n_k + l))).collect();
    let g_u = core_solve(vec![inv_n; d])?;
    let denom = 1.0 - w_d.iter().zip(&g_u).map(|(a, b)| a * b).sum::<f64>();
    let mut md_solve = |y: Vec<f64>| -> Result<Vec<f64>> {
        let gy = core_solve(y)?;
        let coef = w_d.iter().zip(&gy).map(|(a, b)| a * b).sum::<f64>() / denom;
        Ok(gy.iter().zip(&g_u).map(|(a, b)| a + coef * b).collect())
    };

    // (I - M_D)^{-1} M_C, one high column at a time: M_C e_j is the sparse
    // part c P[D, j] plus w_j / n on every low row.
    let ones_d = md_solve(vec![inv_n; d])?;
    let mut x_cols: Vec<Vec<f64>> = Vec::with_capacity(n_k);
    for h in 0..n_k {
        let j = part.old_index(h);
        let mut col = vec![0.0; d];
        if !model.dangling(j) {
            let share = c * model.inv_out[j];
            for &i in g.neighbors(j) {
                if !is_high(i) {
                    col[lo(i)] += share;
                }
            }
        }
        let mut x = if col.iter().any(|&v| v != 0.0) {
            md_solve(col)?
        } else {
            vec![0.0; d]
        };
        // ones_d already carries the 1/n factor.
        let wj = model.w(j);
        for (xi, oi) in x.iter_mut().zip(&ones_d) {
            *xi += wj * oi;
        }
        x_cols.push(x);
    }

    // S_A = M_A + M_B X.
    let mut s = DMatrix::<f64>::zeros(n_k, n_k);
    for h in 0..n_k {
        let j = part.old_index(h);
        let x = &x_cols[h];
        let mut col = vec![model.w(j) * inv_n; n_k];
        if !model.dangling(j) {
            let share = c * model.inv_out[j];
            for &i in g.neighbors(j) {
                if is_high(i) {
                    col[part.new_index(i)] += share;
                }
            }
        }
        // M_B x = c P_AD x + (1/n) (w_D . x) 1.
        let spread = w_d.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() * inv_n;
        for (l, &xl) in x.iter().enumerate() {
            let src = part.old_index(n_k + l);
            if xl == 0.0 || model.dangling(src) {
                continue;
            }
            let share = c * xl * model.inv_out[src];
            for &i in g.neighbors(src) {
                if is_high(i) {
                    col[part.new_index(i)] += share;
                }
            }
        }
        for (r, v) in col.into_iter().enumerate() {
            s[(r, h)] = v + spread;
        }
    }

    // (S_A - I) pi_A = 0 with the last equation replaced by sum = 1.
    let mut sys = s - DMatrix::<f64>::identity(n_k, n_k);
    let mut rhs = DVector::<f64>::zeros(n_k);
    for cidx in 0..n_k {
        sys[(n_k - 1, cidx)] = 1.0;
    }
    rhs[n_k - 1] = 1.0;
    let pi_a = sys
        .lu()
        .solve(&rhs)
        .ok_or_else(|| AlgebraError::Convergence("stochastic complement system is singular".into()))?;

    let mut pi = vec![0.0; n];
    for h in 0..n_k {
        pi[part.old_index(h)] = pi_a[h].max(0.0);
    }
    let mut pi_d = vec![0.0; d];
    for (h, x) in x_cols.iter().enumerate() {
        for (acc, v) in pi_d.iter_mut().zip(x) {
            *acc += pi_a[h] * v;
        }
    }
    for (l, v) in pi_d.into_iter().enumerate() {
        pi[part.old_index(n_k + l)] = v.max(0.0);
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|v| *v /= total);
    let residual = model.residual(&pi);
    if !(residual <= tol) {
        return Err(AlgebraError::Convergence(format!(
            "fixed-point residual {residual:e} exceeds {tol:e}"
        )));
    }
    Ok(PageRank {
        scores: pi,
        residual,
        k,
        n_k,
        iterations,
    })
}

/// Power iteration from the uniform vector until successive iterates differ
/// by at most `tol` in the 1-norm.
pub fn pagerank_power(g: &Graph, c: f64, tol: f64) -> Result<PageRank> {
    check_tol(tol)?;
    let model = StochasticModel::new(g, c)?;
    let n = g.n();
    if n == 0 {
        return Err(AlgebraError::Precondition("PageRank of an empty graph".into()));
    }
    let cap = iteration_cap(tol, c) + 100;
    let mut pi = vec![1.0 / n as f64; n];
    for it in 1..=cap {
        let mut next = model.apply(&pi);
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        let diff: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if diff <= tol {
            let residual = model.residual(&pi);
            return Ok(PageRank {
                scores: pi,
                residual,
                k: 0,
                n_k: 0,
                iterations: it,
            });
        }
    }
    Err(AlgebraError::Convergence(format!("power iteration did not reach {tol:e} in {cap} sweeps")))
}
