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

//! Transitive closure through the Kleene block identity.
//!
//! With `M = [[A, B], [C, D]]` split by out-degree,
//!
//! ```text
//!     M* = [[E*,        E* B D*            ],
//!           [D* C E*,   D* + D* C E* B D*  ]]     E = A + B D* C
//! ```
//!
//! over the Boolean semiring, where `*` is the reflexive-transitive closure.
//! `D*` comes from graph searches restricted to low-degree vertices and `E*`
//! from Warshall's algorithm on bitsets.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use plb_core::Graph;
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::partition::BlockPartition;

/// Largest vertex count for which the quadratic-size output is built.
pub const MAX_CLOSURE_N: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureStats {
    pub k: usize,
    pub n_k: usize,
    pub m_cd: usize,
}

/// Reachability by paths of length at least one. A vertex reaches itself
/// exactly when it lies on a cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitiveClosure {
    rows: Vec<FixedBitSet>,
}

impl TransitiveClosure {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn reaches(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn reachable(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[u].ones()
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    /// The closure as a directed graph, self-loops dropped.
    pub fn to_graph(&self) -> Graph {
        let edges: Vec<(usize, usize)> = (0..self.n())
            .flat_map(|u| self.rows[u].ones().filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Graph::directed(self.n(), edges)
    }

    /// Vertices that reach themselves.
    pub fn cyclic_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&u| self.reaches(u, u)).collect()
    }

    fn from_reflexive(g: &Graph, star: &[FixedBitSet]) -> TransitiveClosure {
        let n = g.n();
        let rows = (0..n)
            .map(|u| {
                let mut r = FixedBitSet::with_capacity(n);
                for &w in g.neighbors(u) {
                    r.union_with(&star[w]);
                }
                r
            })
            .collect();
        TransitiveClosure { rows }
    }
}

fn cap(n: usize) -> Result<()> {
    if n > MAX_CLOSURE_N {
        return Err(AlgebraError::Resource(format!(
            "closure of {n} vertices exceeds the cap of {MAX_CLOSURE_N}"
        )));
    }
    Ok(())
}

/// Closure of `g` (out-neighbors for directed graphs) with density
/// threshold `k`.
pub fn transitive_closure(g: &Graph, k: usize) -> Result<(TransitiveClosure, ClosureStats)> {
    let n = g.n();
    cap(n)?;
    let part = BlockPartition::for_graph(g, k);
    let n_k = part.n_k();
    let d = n - n_k;
    let hi = |v: usize| part.new_index(v);
    let lo = |v: usize| part.new_index(v) - n_k;

    // D* rows, and D* C collected during the same searches.
    let mut dstar = Vec::with_capacity(d);
    let mut dc = Vec::with_capacity(d);
    let mut queue = VecDeque::new();
    for u in part.low() {
        let src = part.old_index(u);
        let mut seen = FixedBitSet::with_capacity(d);
        let mut high = FixedBitSet::with_capacity(n_k);
        seen.insert(lo(src));
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if part.is_high(w) {
                    high.insert(hi(w));
                } else if !seen.put(lo(w)) {
                    queue.push_back(w);
                }
            }
        }
        dstar.push(seen);
        dc.push(high);
    }

    // B D* and E = A + B D* C.
    let mut bd = Vec::with_capacity(n_k);
    let mut estar = Vec::with_capacity(n_k);
    for h in part.high() {
        let v = part.old_index(h);
        let mut low = FixedBitSet::with_capacity(d);
        let mut e = FixedBitSet::with_capacity(n_k);
        e.insert(h);
        for &w in g.neighbors(v) {
            if part.is_high(w) {
                e.insert(hi(w));
            } else {
                low.union_with(&dstar[lo(w)]);
                e.union_with(&dc[lo(w)]);
            }
        }
        bd.push(low);
        estar.push(e);
    }
    for via in 0..n_k {
        let row = estar[via].clone();
        for e in estar.iter_mut() {
            if e.contains(via) {
                e.union_with(&row);
            }
        }
    }

    // Assemble M* in original labels.
    let mut star = vec![FixedBitSet::with_capacity(n); n];
    let mut high_low = Vec::with_capacity(n_k);
    for h in 0..n_k {
        let mut low = FixedBitSet::with_capacity(d);
        for h2 in estar[h].ones() {
            low.union_with(&bd[h2]);
        }
        let row = &mut star[part.old_index(h)];
        for h2 in estar[h].ones() {
            row.insert(part.old_index(h2));
        }
        for l in low.ones() {
            row.insert(part.old_index(n_k + l));
        }
        high_low.push(low);
    }
    for l in 0..d {
        let mut high = FixedBitSet::with_capacity(n_k);
        let mut low = dstar[l].clone();
        for h in dc[l].ones() {
            high.union_with(&estar[h]);
        }
        for h in high.ones() {
            low.union_with(&high_low[h]);
        }
        let row = &mut star[part.old_index(n_k + l)];
        for h in high.ones() {
            row.insert(part.old_index(h));
        }
        for l2 in low.ones() {
            row.insert(part.old_index(n_k + l2));
        }
    }
    let stats = ClosureStats {
        k,
        n_k,
        m_cd: part.m_cd(),
    };
    Ok((TransitiveClosure::from_reflexive(g, &star), stats))
}

/// Closure by one breadth-first search per source.
pub fn closure_by_search(g: &Graph) -> Result<TransitiveClosure> {
    let n = g.n();
    cap(n)?;
    let mut rows = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for s in 0..n {
        let mut seen = FixedBitSet::with_capacity(n);
        for &w in g.neighbors(s) {
            if !seen.put(w) {
                queue.push_back(w);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if !seen.put(w) {
                    queue.push_back(w);
                }
            }
        }
        rows.push(seen);
    }
    Ok(TransitiveClosure { rows })
}
