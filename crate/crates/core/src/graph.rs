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

//! Simple graphs in compressed adjacency form, edge-list ingestion and
//! degree statistics.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Header tag written by [`Graph::write_edge_list`]. Files carrying it are
/// reloaded with their ids taken verbatim.
const HEADER_TAG: &str = "# plb-graph";

/// How arcs in an edge list are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoadMode {
    Undirected,
    Directed,
    /// Every arc becomes an undirected edge; reciprocal arcs collapse.
    DirectedAsUndirected,
}

/// Which degree notion a histogram counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeSide {
    /// Degree for undirected graphs, in-degree + out-degree for directed ones.
    Total,
    Out,
}

/// Immutable simple graph.
///
/// Adjacency lists are sorted ascending. Undirected edges are stored in both
/// endpoint lists; directed graphs materialize both out- and in-adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    in_offsets: Vec<usize>,
    in_targets: Vec<usize>,
    original_ids: Vec<u64>,
}

fn build_csr(n: usize, pairs: &mut [(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    pairs.sort_unstable();
    let mut offsets = vec![0usize; n + 1];
    for &(u, _) in pairs.iter() {
        offsets[u + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let targets = pairs.iter().map(|&(_, v)| v).collect();
    (offsets, targets)
}

impl Graph {
    /// Builds a simple graph from an edge iterator, dropping self-loops and
    /// duplicate edges.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I, directed: bool) -> Graph
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut arcs: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            if u == v {
                continue;
            }
            arcs.push((u, v));
            if !directed {
                arcs.push((v, u));
            }
        }
        arcs.sort_unstable();
        arcs.dedup();
        let (out_offsets, out_targets) = build_csr(n, &mut arcs);
        let (in_offsets, in_targets) = if directed {
            let mut rev: Vec<(usize, usize)> = arcs.iter().map(|&(u, v)| (v, u)).collect();
            build_csr(n, &mut rev)
        } else {
            (Vec::new(), Vec::new())
        };
        Graph {
            n,
            directed,
            out_offsets,
            out_targets,
            in_offsets,
            in_targets,
            original_ids: (0..n as u64).collect(),
        }
    }

    pub fn undirected<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Graph {
        Graph::from_edges(n, edges, false)
    }

    pub fn directed<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Graph {
        Graph::from_edges(n, edges, true)
    }

    /// Parses a SNAP-style edge list: one `u v` pair per line, `#` comments.
    ///
    /// Ids are densified in order of first appearance; the original ids are
    /// kept and available through [`Graph::original_id`].
    pub fn load_edge_list<R: BufRead>(reader: R, mode: LoadMode) -> Result<Graph> {
        let mut ids: HashMap<u64, usize> = HashMap::new();
        let mut original: Vec<u64> = Vec::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut verbatim: Option<usize> = None;

        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if trimmed.starts_with('#') {
                if lineno == 1 && trimmed.starts_with(HEADER_TAG) {
                    verbatim = Some(parse_header_nodes(trimmed, lineno)?);
                }
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let endpoint = |tokens: &mut std::str::SplitWhitespace| -> Result<u64> {
                let tok = tokens.next().ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: "expected two vertex ids".into(),
                })?;
                tok.parse::<u64>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("malformed vertex id {tok:?}"),
                })
            };
            let a = endpoint(&mut tokens)?;
            let b = endpoint(&mut tokens)?;
            if let Some(extra) = tokens.next() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unexpected trailing token {extra:?}"),
                });
            }
            let (u, v) = match verbatim {
                Some(n) => {
                    if a >= n as u64 || b >= n as u64 {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("vertex id out of range for declared n = {n}"),
                        });
                    }
                    (a as usize, b as usize)
                }
                None => {
                    let mut intern = |id: u64| {
                        *ids.entry(id).or_insert_with(|| {
                            original.push(id);
                            original.len() - 1
                        })
                    };
                    let u = intern(a);
                    (u, intern(b))
                }
            };
            edges.push((u, v));
        }

        let n = verbatim.unwrap_or(original.len());
        let directed = mode == LoadMode::Directed;
        let mut g = Graph::from_edges(n, edges, directed);
        if verbatim.is_none() {
            g.original_ids = original;
        }
        Ok(g)
    }

    /// Writes the graph in the edge-list format accepted by
    /// [`Graph::load_edge_list`], with a header recording n, m and
    /// directedness. Undirected edges are written once, as `u v` with `u < v`.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "{HEADER_TAG} nodes={} edges={} directed={}",
            self.n,
            self.m(),
            self.directed
        )?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    /// Same as [`Graph::write_edge_list`] but with the original ids seen on
    /// load and SNAP-style comment lines instead of the verbatim-id header.
    pub fn write_edge_list_original<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# Nodes: {} Edges: {}", self.n, self.m())?;
        writeln!(w, "# directed: {}", self.directed)?;
        for (u, v) in self.edges() {
            writeln!(w, "{} {}", self.original_ids[u], self.original_ids[v])?;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges (undirected) or arcs (directed).
    pub fn m(&self) -> usize {
        if self.directed {
            self.out_targets.len()
        } else {
            self.out_targets.len() / 2
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Out-neighbors (all neighbors for undirected graphs), sorted.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    /// In-neighbors; for undirected graphs the same as [`Graph::neighbors`].
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        if self.directed {
            &self.in_targets[self.in_offsets[v]..self.in_offsets[v + 1]]
        } else {
            self.neighbors(v)
        }
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_neighbors(v).len()
    }

    /// Degree for undirected graphs, in + out degree for directed graphs.
    pub fn degree(&self, v: usize) -> usize {
        if self.directed {
            self.out_degree(v) + self.in_degree(v)
        } else {
            self.out_degree(v)
        }
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)`; undirected edges are reported once with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| self.directed || u < v)
                .map(move |v| (u, v))
        })
    }

    /// Id the vertex had in the loaded file (identity for constructed graphs).
    pub fn original_id(&self, v: usize) -> u64 {
        self.original_ids[v]
    }

    pub fn original_ids(&self) -> &[u64] {
        &self.original_ids
    }

    /// Undirected view: every arc becomes an edge.
    pub fn to_undirected(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let mut g = Graph::from_edges(self.n, self.edges(), false);
        g.original_ids = self.original_ids.clone();
        g
    }

    /// Subgraph induced on `vertices`, relabelled `0..vertices.len()` in the
    /// given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in self.neighbors(v) {
                if local[w] != usize::MAX {
                    edges.push((i, local[w]));
                }
            }
        }
        let mut g = Graph::from_edges(vertices.len(), edges, self.directed);
        g.original_ids = vertices.iter().map(|&v| self.original_ids[v]).collect();
        g
    }

    /// Histogram of the chosen degree notion. `Out` requires a directed graph.
    pub fn degree_histogram(&self, side: DegreeSide) -> Result<DegreeHistogram> {
        match side {
            DegreeSide::Total => Ok(DegreeHistogram::from_degrees(
                (0..self.n).map(|v| self.degree(v)),
            )),
            DegreeSide::Out if self.directed => Ok(DegreeHistogram::from_degrees(
                (0..self.n).map(|v| self.out_degree(v)),
            )),
            DegreeSide::Out => Err(Error::Usage(
                "out-degree histogram requested for an undirected graph".into(),
            )),
        }
    }
}

fn parse_header_nodes(line: &str, lineno: usize) -> Result<usize> {
    line.split_whitespace()
        .find_map(|tok| tok.strip_prefix("nodes="))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "header is missing nodes=".into(),
        })
}

/// Number of vertices per degree, `d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    counts: Vec<usize>,
    n: usize,
}

impl DegreeHistogram {
    pub fn from_degrees<I: IntoIterator<Item = usize>>(degrees: I) -> DegreeHistogram {
        let mut counts: Vec<usize> = Vec::new();
        let mut n = 0;
        for d in degrees {
            if d >= counts.len() {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
            n += 1;
        }
        DegreeHistogram { counts, n }
    }

    /// Builds a histogram from `(degree, count)` pairs.
    pub fn from_counts<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> DegreeHistogram {
        let mut counts: Vec<usize> = Vec::new();
        let mut n = 0;
        for (d, c) in pairs {
            if c == 0 {
                continue;
            }
            if d >= counts.len() {
                counts.resize(d + 1, 0);
            }
            counts[d] += c;
            n += c;
        }
        DegreeHistogram { counts, n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    /// `d_k`, zero beyond the maximum degree.
    pub fn count(&self, k: usize) -> usize {
        self.counts.get(k).copied().unwrap_or(0)
    }

    /// Nonzero `(degree, count)` pairs in increasing degree order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(d, &c)| (d, c))
    }

    /// `d_{>=k}` for `k = 0..=max_degree + 1`.
    pub fn cumulative_tail(&self) -> Vec<usize> {
        let mut tail = vec![0usize; self.counts.len() + 1];
        for k in (0..self.counts.len()).rev() {
            tail[k] = tail[k + 1] + self.counts[k];
        }
        tail
    }

    /// Vertex counts per dyadic bucket `[2^d, 2^(d+1))`, for every `d` with
    /// `2^d <= max_degree`.
    pub fn bucket_counts(&self) -> Vec<usize> {
        let mut buckets = Vec::new();
        let mut lo = 1usize;
        while lo <= self.max_degree() {
            let hi = (2 * lo).min(self.counts.len());
            buckets.push(self.counts[lo..hi].iter().sum());
            lo *= 2;
        }
        buckets
    }

    /// Number of vertices whose degree lies in `[lo, hi)`.
    pub fn range_count(&self, lo: usize, hi: usize) -> usize {
        let hi = hi.min(self.counts.len());
        if lo >= hi {
            return 0;
        }
        self.counts[lo..hi].iter().sum()
    }
}
