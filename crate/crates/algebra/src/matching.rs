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

//! Perfect matchings through random Tutte matrices.

use std::collections::VecDeque;

use plb_core::Graph;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseMatrix;
use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;
use crate::lanczos::DEFAULT_RETRIES;
use crate::partition::heuristic_k;
use crate::schur::{SchurFactorization, SolveStats};
use crate::sparse::SparseMatrix;

const NONE: usize = usize::MAX;

/// Skew-symmetric matrix with a random nonzero `z_uv` at `(u, v)` and
/// `-z_uv` at `(v, u)` for every edge `u < v`.
pub fn tutte_matrix(f: &PrimeField, g: &Graph, seed: u64) -> Result<SparseMatrix> {
    if g.is_directed() {
        return Err(AlgebraError::Precondition("Tutte matrix needs an undirected graph".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(2 * g.m());
    for (u, v) in g.edges() {
        let (u, v) = (u.min(v), u.max(v));
        let z = f.random_nonzero(&mut rng);
        entries.push((u, v, z));
        entries.push((v, u, f.neg(z)));
    }
    SparseMatrix::from_triplets(f, g.n(), g.n(), entries)
}

#[derive(Debug, Clone)]
pub struct MatchingTest {
    pub exists: bool,
    /// Absent when the answer followed from parity alone.
    pub stats: Option<SolveStats>,
}

/// Randomized test: never reports a matching that does not exist, and
/// misses an existing one with probability at most `n / p`.
pub fn has_perfect_matching(f: &PrimeField, g: &Graph, seed: u64) -> Result<MatchingTest> {
    has_perfect_matching_k(f, g, heuristic_k(g.n(), g.m()), seed)
}

pub fn has_perfect_matching_k(f: &PrimeField, g: &Graph, k: usize, seed: u64) -> Result<MatchingTest> {
    if g.is_directed() {
        return Err(AlgebraError::Precondition("matching needs an undirected graph".into()));
    }
    if g.n() % 2 == 1 {
        return Ok(MatchingTest {
            exists: false,
            stats: None,
        });
    }
    let t = tutte_matrix(f, g, seed)?;
    let s = SchurFactorization::symmetric(f, &t, k, seed)?;
    Ok(MatchingTest {
        exists: s.det() != 0,
        stats: Some(s.stats().clone()),
    })
}

#[derive(Debug, Clone)]
pub struct MatchingOutcome {
    /// Edges `(u, v)` with `u < v`, sorted.
    pub matching: Option<Vec<(usize, usize)>>,
    pub attempts: usize,
    /// Edges fixed inside the dense block before the residual search.
    pub dense_edges: usize,
    pub stats: Option<SolveStats>,
}

/// Finds a perfect matching: edges among high-degree vertices are chosen
/// greedily from the inverse Tutte matrix, and the rest is completed on the
/// remaining sparse graph.
pub fn find_perfect_matching(f: &PrimeField, g: &Graph, k: usize, seed: u64) -> Result<MatchingOutcome> {
    if g.is_directed() {
        return Err(AlgebraError::Precondition("matching needs an undirected graph".into()));
    }
    let n = g.n();
    let none = |attempts, stats| MatchingOutcome {
        matching: None,
        attempts,
        dense_edges: 0,
        stats,
    };
    if n % 2 == 1 {
        return Ok(none(0, None));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=DEFAULT_RETRIES {
        let s_seed = rng.next_u64();
        let t = tutte_matrix(f, g, s_seed)?;
        let s = SchurFactorization::symmetric(f, &t, k, s_seed)?;
        let last_stats = Some(s.stats().clone());
        if s.det() == 0 {
            return Ok(none(attempt, last_stats));
        }
        let part = s.partition();
        let mut inv = s.inverse_high_block()?;
        let mut mate = vec![NONE; n];
        let mut dense_edges = 0;
        for (u, v) in g.edges() {
            if !(part.is_high(u) && part.is_high(v)) || mate[u] != NONE || mate[v] != NONE {
                continue;
            }
            let (hu, hv) = (part.new_index(u), part.new_index(v));
            if inv.get(hu, hv) == 0 {
                continue;
            }
            eliminate_pair(f, &mut inv, hu, hv)?;
            mate[u] = v;
            mate[v] = u;
            dense_edges += 1;
        }
        // Remaining edges inside the dense block belong to no perfect
        // matching; search the rest.
        let mut adj = vec![Vec::new(); n];
        for (u, v) in g.edges() {
            if mate[u] == NONE && mate[v] == NONE && !(part.is_high(u) && part.is_high(v)) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let rest = maximum_matching(&adj);
        for v in 0..n {
            if mate[v] == NONE {
                mate[v] = rest[v];
            }
        }
        if mate.iter().all(|&m| m != NONE) {
            let edges: Vec<(usize, usize)> = (0..n).filter(|&v| v < mate[v]).map(|v| (v, mate[v])).collect();
            assert!(is_perfect_matching(g, &edges), "assembled matching failed verification");
            return Ok(MatchingOutcome {
                matching: Some(edges),
                attempts: attempt,
                dense_edges,
                stats: last_stats,
            });
        }
    }
    Err(AlgebraError::Convergence(format!(
        "no perfect matching assembled after {DEFAULT_RETRIES} attempts"
    )))
}

/// `N <- N - N[:, S] N[S, S]^{-1} N[S, :]` for `S = {a, b}`: the inverse
/// after deleting rows and columns `a`, `b` from the matrix.
fn eliminate_pair(f: &PrimeField, n_mat: &mut DenseMatrix, a: usize, b: usize) -> Result<()> {
    let (saa, sab, sba, sbb) = (n_mat.get(a, a), n_mat.get(a, b), n_mat.get(b, a), n_mat.get(b, b));
    let det = f.sub(f.mul(saa, sbb), f.mul(sab, sba));
    let dinv = f.inv(det)?;
    let (iaa, iab, iba, ibb) = (
        f.mul(sbb, dinv),
        f.mul(f.neg(sab), dinv),
        f.mul(f.neg(sba), dinv),
        f.mul(saa, dinv),
    );
    let row_a = n_mat.row(a).to_vec();
    let row_b = n_mat.row(b).to_vec();
    for i in 0..n_mat.rows() {
        let (xa, xb) = (n_mat.get(i, a), n_mat.get(i, b));
        if xa == 0 && xb == 0 {
            continue;
        }
        let ca = f.add(f.mul(xa, iaa), f.mul(xb, iba));
        let cb = f.add(f.mul(xa, iab), f.mul(xb, ibb));
        let row = n_mat.row_mut(i);
        f.axpy(row, f.neg(ca), &row_a);
        f.axpy(row, f.neg(cb), &row_b);
    }
    Ok(())
}

pub fn is_perfect_matching(g: &Graph, edges: &[(usize, usize)]) -> bool {
    let mut covered = vec![false; g.n()];
    for &(u, v) in edges {
        if u == v || !g.has_edge(u, v) || covered[u] || covered[v] {
            return false;
        }
        covered[u] = true;
        covered[v] = true;
    }
    covered.iter().all(|&c| c)
}

/// Maximum matching of a general graph by Edmonds' blossom algorithm.
/// Returns `mate[v]`, or `usize::MAX` for exposed vertices.
pub fn maximum_matching(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut b = Blossom {
        adj,
        mate: vec![NONE; n],
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
        queue: VecDeque::new(),
    };
    // Greedy start.
    for v in 0..n {
        if b.mate[v] == NONE {
            if let Some(&w) = adj[v].iter().find(|&&w| w != v && b.mate[w] == NONE) {
                b.mate[v] = w;
                b.mate[w] = v;
            }
        }
    }
    for root in 0..n {
        if b.mate[root] != NONE {
            continue;
        }
        let mut v = b.find_path(root);
        while v != NONE {
            let pv = b.parent[v];
            let next = b.mate[pv];
            b.mate[v] = pv;
            b.mate[pv] = v;
            v = next;
        }
    }
    b.mate
}

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Grows an alternating tree from `root`; returns the exposed endpoint
    /// of an augmenting path, or `NONE`.
    fn find_path(&mut self, root: usize) -> usize {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        NONE
    }
}
