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

//! Degree-ordered acyclic orientation and degeneracy.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Acyclic orientation of an undirected graph: vertices are ordered by
/// non-decreasing degree (ties by ascending id) and every edge points to
/// its later endpoint.
#[derive(Debug, Clone)]
pub struct OrientedGraph<'a> {
    base: &'a Graph,
    order: Vec<usize>,
    rank: Vec<usize>,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    in_offsets: Vec<usize>,
    in_targets: Vec<usize>,
    profile: Vec<usize>,
}

/// Orients `g` towards higher degree in linear time.
pub fn orient_by_degree(g: &Graph) -> Result<OrientedGraph<'_>> {
    if g.is_directed() {
        return Err(Error::Usage("orientation needs an undirected graph".into()));
    }
    let n = g.n();
    let max_deg = g.max_degree();

    // counting sort by degree; scanning ids in order keeps ties ascending
    let mut start = vec![0usize; max_deg + 2];
    for v in 0..n {
        start[g.degree(v) + 1] += 1;
    }
    for d in 0..=max_deg {
        start[d + 1] += start[d];
    }
    let mut order = vec![0usize; n];
    let mut rank = vec![0usize; n];
    for v in 0..n {
        let slot = &mut start[g.degree(v)];
        order[*slot] = v;
        rank[v] = *slot;
        *slot += 1;
    }

    let mut out_offsets = vec![0usize; n + 1];
    let mut in_offsets = vec![0usize; n + 1];
    for v in 0..n {
        let later = g
            .neighbors(v)
            .iter()
            .filter(|&&w| rank[w] > rank[v])
            .count();
        out_offsets[v + 1] = out_offsets[v] + later;
        in_offsets[v + 1] = in_offsets[v] + (g.degree(v) - later);
    }
    let mut out_targets = vec![0usize; out_offsets[n]];
    let mut in_targets = vec![0usize; in_offsets[n]];
    let mut out_fill = out_offsets.clone();
    let mut in_fill = in_offsets.clone();
    for v in 0..n {
        for &w in g.neighbors(v) {
            if rank[w] > rank[v] {
                out_targets[out_fill[v]] = w;
                out_fill[v] += 1;
                in_targets[in_fill[w]] = v;
                in_fill[w] += 1;
            }
        }
    }

    let mut profile = vec![0usize; max_deg + 1];
    for v in 0..n {
        let b = &mut profile[g.degree(v)];
        *b = (*b).max(out_offsets[v + 1] - out_offsets[v]);
    }

    Ok(OrientedGraph {
        base: g,
        order,
        rank,
        out_offsets,
        out_targets,
        in_offsets,
        in_targets,
        profile,
    })
}

impl<'a> OrientedGraph<'a> {
    pub fn base(&self) -> &'a Graph {
        self.base
    }

    /// Vertices in non-decreasing degree order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Position of `v` in [`OrientedGraph::order`].
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_targets[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    /// `b(k)`: the largest out-degree among vertices of degree `k`
    /// (zero when no vertex has degree `k`).
    pub fn b(&self, k: usize) -> usize {
        self.profile.get(k).copied().unwrap_or(0)
    }

    /// `b(k)` for `k = 0..=max_degree`.
    pub fn out_degree_profile(&self) -> &[usize] {
        &self.profile
    }

    pub fn max_out_degree(&self) -> usize {
        self.profile.iter().copied().max().unwrap_or(0)
    }

    pub fn arc_count(&self) -> usize {
        self.out_targets.len()
    }
}

/// Degeneracy by min-degree peeling (Matula–Beck bucket queue).
///
/// Returns the degeneracy and the elimination order.
pub fn degeneracy(g: &Graph) -> Result<(usize, Vec<usize>)> {
    if g.is_directed() {
        return Err(Error::Usage("degeneracy needs an undirected graph".into()));
    }
    let n = g.n();
    let max_deg = g.max_degree();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();

    // vertices sorted by current degree with bucket starts, as in the
    // classic O(n + m) core decomposition
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let c = *b;
        *b = start;
        start += c;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    for v in 0..n {
        pos[v] = bin[deg[v]];
        vert[pos[v]] = v;
        bin[deg[v]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    let mut best = 0;
    for i in 0..n {
        let v = vert[i];
        best = best.max(deg[v]);
        for &u in g.neighbors(v) {
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    vert.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    Ok((best, vert))
}
