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

//! Degree-ordered triangle counting and maximum clique search, with
//! brute-force oracles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matmul::{multiply, IntegerRing, MulStrategy};
use crate::orient::{orient_by_degree, OrientedGraph};
use crate::plb::PlbParams;

/// Largest vertex count accepted by [`brute_triangles`].
pub const BRUTE_TRIANGLE_CAP: usize = 1000;
/// Largest vertex count accepted by [`brute_clique`].
pub const BRUTE_CLIQUE_CAP: usize = 64;
/// Default bound on the out-neighborhood size searched by [`max_clique`].
pub const DEFAULT_CLIQUE_CAP: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleCount {
    pub total: u64,
    /// Triangles through each vertex, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_vertex: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueResult {
    pub size: usize,
    /// Sorted vertex ids.
    pub witness: Vec<usize>,
}

const CHUNK: usize = 512;

/// Runs the oriented triangle loop for the vertices in `vs`, calling
/// `found(w, v, u)` for every triangle whose middle vertex (in degree order)
/// is `v`. `w` is the first vertex of the triangle in that order.
///
/// `mark` must have length `n` and hold no value of the form `v + 1` for
/// `v` in `vs` other than those this call writes.
fn scan_triangles<F>(
    o: &OrientedGraph<'_>,
    vs: impl Iterator<Item = usize>,
    mark: &mut [usize],
    mut keep: impl FnMut(usize) -> bool,
    mut found: F,
) where
    F: FnMut(usize, usize, usize),
{
    for v in vs {
        let stamp = v + 1;
        for &u in o.out_neighbors(v) {
            mark[u] = stamp;
        }
        for &w in o.in_neighbors(v) {
            if !keep(w) {
                continue;
            }
            for &u in o.out_neighbors(w) {
                if mark[u] == stamp {
                    found(w, v, u);
                }
            }
        }
    }
}

fn count_oriented(o: &OrientedGraph<'_>, keep: impl Fn(usize) -> bool + Sync) -> u64 {
    let n = o.base().n();
    (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map_init(
            || vec![0usize; n],
            |mark, c| {
                let mut local = 0u64;
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(n);
                scan_triangles(o, lo..hi, mark, &keep, |_, _, _| local += 1);
                local
            },
        )
        .sum()
}

fn require_undirected(g: &Graph) -> Result<()> {
    if g.is_directed() {
        Err(Error::Usage(
            "triangle and clique algorithms need an undirected graph".into(),
        ))
    } else {
        Ok(())
    }
}

/// Exact triangle count by the degree-ordered marking loop.
pub fn count_triangles(g: &Graph) -> Result<TriangleCount> {
    require_undirected(g)?;
    let o = orient_by_degree(g)?;
    Ok(TriangleCount {
        total: count_oriented(&o, |_| true),
        per_vertex: None,
    })
}

/// Single-threaded [`count_triangles`], used for timing.
pub fn count_triangles_sequential(g: &Graph) -> Result<u64> {
    require_undirected(g)?;
    let o = orient_by_degree(g)?;
    let mut mark = vec![0usize; g.n()];
    let mut total = 0u64;
    scan_triangles(&o, 0..g.n(), &mut mark, |_| true, |_, _, _| total += 1);
    Ok(total)
}

/// [`count_triangles`] with the number of triangles through every vertex.
pub fn count_triangles_per_vertex(g: &Graph) -> Result<TriangleCount> {
    require_undirected(g)?;
    let o = orient_by_degree(g)?;
    let mut mark = vec![0usize; g.n()];
    let mut per = vec![0u64; g.n()];
    let mut total = 0u64;
    scan_triangles(
        &o,
        0..g.n(),
        &mut mark,
        |_| true,
        |w, v, u| {
            total += 1;
            per[w] += 1;
            per[v] += 1;
            per[u] += 1;
        },
    );
    Ok(TriangleCount {
        total,
        per_vertex: Some(per),
    })
}

/// Delivers every triangle once, as a sorted triple, in lexicographic order.
pub fn list_triangles<F: FnMut([usize; 3])>(g: &Graph, mut sink: F) -> Result<u64> {
    require_undirected(g)?;
    let o = orient_by_degree(g)?;
    let mut mark = vec![0usize; g.n()];
    let mut all = Vec::new();
    scan_triangles(
        &o,
        0..g.n(),
        &mut mark,
        |_| true,
        |w, v, u| {
            let mut t = [w, v, u];
            t.sort_unstable();
            all.push(t);
        },
    );
    all.sort_unstable();
    for &t in &all {
        sink(t);
    }
    Ok(all.len() as u64)
}

/// Like [`list_triangles`], but reports each triangle as `(first, middle,
/// last)` in degree order instead of sorting.
pub fn oriented_triangles(g: &Graph) -> Result<Vec<[usize; 3]>> {
    require_undirected(g)?;
    let o = orient_by_degree(g)?;
    let mut mark = vec![0usize; g.n()];
    let mut all = Vec::new();
    scan_triangles(
        &o,
        0..g.n(),
        &mut mark,
        |_| true,
        |w, v, u| all.push([w, v, u]),
    );
    Ok(all)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HybridCount {
    pub total: u64,
    /// Triangles with at least one vertex of degree at most `delta`.
    pub low: u64,
    /// Triangles inside the subgraph of vertices with degree above `delta`.
    pub high: u64,
    /// Vertices in that subgraph.
    pub n_high: usize,
}

/// Triangle count split at degree `delta`: the marking loop for triangles
/// touching a low-degree vertex, `trace(A^3) / 6` on the rest.
pub fn count_triangles_hybrid(
    g: &Graph,
    delta: usize,
    strategy: MulStrategy,
) -> Result<HybridCount> {
    require_undirected(g)?;
    if delta == 0 {
        return Err(Error::Domain("delta must be >= 1".into()));
    }
    let o = orient_by_degree(g)?;
    // the first vertex of a triangle in degree order has the smallest degree
    let low = count_oriented(&o, |w| g.degree(w) <= delta);

    let heavy: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) > delta).collect();
    let nh = heavy.len();
    if (nh as u128).pow(3) >= 1u128 << 63 {
        return Err(Error::Resource(format!(
            "high-degree part has {nh} vertices; its cube overflows 64 bits"
        )));
    }
    let high = if nh < 3 {
        0
    } else {
        let sub = g.induced_subgraph(&heavy);
        let mut a = vec![0i64; nh * nh];
        for (u, v) in sub.edges() {
            a[u * nh + v] = 1;
            a[v * nh + u] = 1;
        }
        let a2 = multiply(&IntegerRing, &a, &a, nh, nh, nh, strategy);
        let mut trace = 0i64;
        for i in 0..nh {
            for j in 0..nh {
                trace += a2[i * nh + j] * a[j * nh + i];
            }
        }
        (trace / 6) as u64
    };
    Ok(HybridCount {
        total: low + high,
        low,
        high,
        n_high: nh,
    })
}

fn check_omega(omega: f64) -> Result<()> {
    if !(2.0..=3.0).contains(&omega) {
        return Err(Error::Domain(format!(
            "omega must lie in [2, 3], got {omega}"
        )));
    }
    Ok(())
}

/// Unrounded degree threshold balancing the two phases of the hybrid count.
pub fn delta_formula(n: usize, p: &PlbParams, omega: f64, neighborhoods: bool) -> Result<f64> {
    p.validate()?;
    check_omega(omega)?;
    let (a, t, nf) = (p.alpha, p.t, n as f64);
    if neighborhoods {
        if !(a > 2.0 && a < 7.0 / 3.0) {
            return Err(Error::Domain(format!(
                "threshold with PLB neighborhoods needs 2 < alpha < 7/3, got {a}"
            )));
        }
        let den = 7.0 - omega + (omega - 3.0) * a;
        Ok(nf.powf((omega - 1.0) / den) * (t + 1.0).powf(1.0 - 2.0 / den))
    } else {
        if a >= 3.0 {
            return Err(Error::Domain(format!(
                "threshold needs 1 < alpha < 3, got {a}"
            )));
        }
        let den = 3.0 - a - omega + a * omega;
        Ok((nf * (t + 1.0).powf(a - 1.0)).powf((omega - 1.0) / den))
    }
}

/// [`delta_formula`] rounded up and clamped to `[1, n - 1]`.
pub fn select_delta(n: usize, p: &PlbParams, omega: f64, neighborhoods: bool) -> Result<usize> {
    let x = delta_formula(n, p, omega, neighborhoods)?;
    // absorb representation error so that exact powers do not round up
    let up = (x * (1.0 - 4.0 * f64::EPSILON)).ceil();
    let hi = n.saturating_sub(1).max(1);
    Ok((up.max(1.0) as usize).min(hi))
}

/// Branch and bound over the bitmask `cand`, with `adj[i]` the neighbor mask
/// of candidate `i`. Records cliques larger than `*floor` in `best`.
fn clique_search(
    adj: &[u64],
    r: &mut Vec<usize>,
    cand: u64,
    floor: &mut usize,
    best: &mut Vec<usize>,
) {
    if r.len() > *floor {
        *floor = r.len();
        best.clone_from(r);
    }
    let mut p = cand;
    while p != 0 {
        if r.len() + p.count_ones() as usize <= *floor {
            return;
        }
        let i = p.trailing_zeros() as usize;
        p &= p - 1;
        r.push(i);
        clique_search(adj, r, p & adj[i], floor, best);
        r.pop();
    }
}

fn greedy_clique(g: &Graph) -> Vec<usize> {
    let Some(start) = (0..g.n()).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))) else {
        return Vec::new();
    };
    let mut clique = vec![start];
    let mut cand: Vec<usize> = g.neighbors(start).to_vec();
    cand.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    for v in cand {
        if clique.iter().all(|&c| g.has_edge(c, v)) {
            clique.push(v);
        }
    }
    clique.sort_unstable();
    clique
}

/// Maximum clique: for each vertex `v`, the largest clique made of `v` and
/// its out-neighbors in degree order.
///
/// Returns a resource error if some out-neighborhood exceeds `cap`
/// (at most 63).
pub fn max_clique(g: &Graph, cap: usize) -> Result<CliqueResult> {
    require_undirected(g)?;
    let cap = cap.min(63);
    let o = orient_by_degree(g)?;
    if let Some(v) = (0..g.n()).find(|&v| o.out_degree(v) > cap) {
        return Err(Error::Resource(format!(
            "vertex {} has {} out-neighbors, above the cap of {cap}",
            g.original_id(v),
            o.out_degree(v)
        )));
    }
    let mut best = greedy_clique(g);
    let mut adj = Vec::with_capacity(64);
    let mut r = Vec::with_capacity(64);
    for v in 0..g.n() {
        let out = o.out_neighbors(v);
        if out.len() < best.len() {
            continue;
        }
        adj.clear();
        for &a in out {
            let mut mask = 0u64;
            for (j, &b) in out.iter().enumerate() {
                if g.has_edge(a, b) {
                    mask |= 1 << j;
                }
            }
            adj.push(mask);
        }
        let all = if out.len() == 64 {
            u64::MAX
        } else {
            (1u64 << out.len()) - 1
        };
        // indices into `out`; `v` itself is implied
        let mut local: Vec<usize> = Vec::new();
        let mut floor = best.len() - 1;
        clique_search(&adj, &mut r, all, &mut floor, &mut local);
        if !local.is_empty() {
            let mut w: Vec<usize> = local.iter().map(|&i| out[i]).collect();
            w.push(v);
            w.sort_unstable();
            best = w;
        }
    }
    Ok(CliqueResult {
        size: best.len(),
        witness: best,
    })
}

fn bit_rows(g: &Graph) -> (usize, Vec<u64>) {
    let n = g.n();
    let words = n.div_ceil(64).max(1);
    let mut rows = vec![0u64; n * words];
    for (u, v) in g.edges() {
        rows[u * words + v / 64] |= 1 << (v % 64);
        rows[v * words + u / 64] |= 1 << (u % 64);
    }
    (words, rows)
}

/// Triangle count by enumerating vertex triples `i < j < l`.
pub fn brute_triangles(g: &Graph) -> Result<u64> {
    require_undirected(g)?;
    let n = g.n();
    if n > BRUTE_TRIANGLE_CAP {
        return Err(Error::Resource(format!(
            "triangle oracle is capped at {BRUTE_TRIANGLE_CAP} vertices, got {n}"
        )));
    }
    let (words, rows) = bit_rows(g);
    let row = |v: usize| &rows[v * words..(v + 1) * words];
    let mut total = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if row(i)[j / 64] >> (j % 64) & 1 == 0 {
                continue;
            }
            // third vertex l > j adjacent to both
            for (w, (&x, &y)) in row(i).iter().zip(row(j)).enumerate() {
                let mut common = x & y;
                if w == j / 64 {
                    common &= !((2u64 << (j % 64)).wrapping_sub(1));
                } else if w < j / 64 {
                    common = 0;
                }
                total += common.count_ones() as u64;
            }
        }
    }
    Ok(total)
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, best: &mut u64) {
    if p == 0 {
        if x == 0 && r.count_ones() > best.count_ones() {
            *best = r;
        }
        return;
    }
    if r.count_ones() + p.count_ones() <= best.count_ones() {
        return;
    }
    let pu = p | x;
    let pivot = (0..64)
        .filter(|&u| pu >> u & 1 == 1)
        .max_by_key(|&u| (p & adj[u]).count_ones())
        .expect("p | x is nonempty");
    let mut rest = p & !adj[pivot];
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], best);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Maximum clique size by Bron–Kerbosch with pivoting.
pub fn brute_clique(g: &Graph) -> Result<CliqueResult> {
    require_undirected(g)?;
    let n = g.n();
    if n > BRUTE_CLIQUE_CAP {
        return Err(Error::Resource(format!(
            "clique oracle is capped at {BRUTE_CLIQUE_CAP} vertices, got {n}"
        )));
    }
    let mut adj = vec![0u64; 64];
    for (u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0u64;
    bron_kerbosch(&adj, 0, all, 0, &mut best);
    let witness: Vec<usize> = (0..n).filter(|&v| best >> v & 1 == 1).collect();
    Ok(CliqueResult {
        size: witness.len(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::undirected(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    fn cycle(n: usize) -> Graph {
        Graph::undirected(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    fn wheel6() -> Graph {
        Graph::undirected(7, (0..6).flat_map(|i| [(i, (i + 1) % 6), (i, 6)]))
    }

    fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5));
        Graph::undirected(10, outer.chain(spokes).chain(inner))
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_triangles(&complete(4)).unwrap().total, 4);
        assert_eq!(count_triangles(&cycle(5)).unwrap().total, 0);
        assert_eq!(count_triangles(&wheel6()).unwrap().total, 6);
        assert_eq!(brute_triangles(&wheel6()).unwrap(), 6);
        assert_eq!(brute_triangles(&complete(4)).unwrap(), 4);
        assert_eq!(brute_triangles(&petersen()).unwrap(), 0);
        assert_eq!(count_triangles_sequential(&complete(6)).unwrap(), 20);
    }

    #[test]
    fn per_vertex_sums_to_three_times_total() {
        let t = count_triangles_per_vertex(&wheel6()).unwrap();
        let per = t.per_vertex.unwrap();
        assert_eq!(per.iter().sum::<u64>(), 3 * t.total);
        assert_eq!(per[6], 6);
    }

    #[test]
    fn listing_k4_and_bipartite() {
        let mut got = Vec::new();
        list_triangles(&complete(4), |t| got.push(t)).unwrap();
        assert_eq!(got, vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]);
        let k33 = Graph::undirected(6, (0..3).flat_map(|i| (3..6).map(move |j| (i, j))));
        assert_eq!(list_triangles(&k33, |_| panic!("no triangles")).unwrap(), 0);
    }

    #[test]
    fn hybrid_splits() {
        let k5 = complete(5);
        let h = count_triangles_hybrid(&k5, 1, MulStrategy::Classical).unwrap();
        assert_eq!((h.low, h.high, h.total), (0, 10, 10));
        let w = wheel6();
        let h = count_triangles_hybrid(&w, w.max_degree(), MulStrategy::Classical).unwrap();
        assert_eq!((h.low, h.high), (6, 0));
        let h = count_triangles_hybrid(&w, 3, MulStrategy::Strassen).unwrap();
        assert_eq!(h.total, 6);
    }

    #[test]
    fn delta_examples() {
        let p = PlbParams::new(1.0, 2.0, 0.0).unwrap();
        assert_eq!(select_delta(1 << 20, &p, 3.0, false).unwrap(), 1024);
        assert!(matches!(
            select_delta(1000, &PlbParams::new(1.0, 3.0, 0.0).unwrap(), 3.0, false),
            Err(Error::Domain(_))
        ));
        assert!(select_delta(1000, &p, 3.0, true).is_err());
        assert_eq!(select_delta(2, &p, 3.0, false).unwrap(), 1);
    }

    #[test]
    fn cliques() {
        let r = max_clique(&complete(5), DEFAULT_CLIQUE_CAP).unwrap();
        assert_eq!(
            r,
            CliqueResult {
                size: 5,
                witness: vec![0, 1, 2, 3, 4]
            }
        );
        let r = max_clique(&cycle(5), DEFAULT_CLIQUE_CAP).unwrap();
        assert_eq!(r.size, 2);
        assert_eq!(brute_clique(&cycle(5)).unwrap().size, 2);
        assert_eq!(brute_clique(&complete(5)).unwrap().size, 5);
        let empty = Graph::undirected(0, []);
        assert_eq!(max_clique(&empty, 40).unwrap().size, 0);
        assert_eq!(max_clique(&Graph::undirected(3, []), 40).unwrap().size, 1);
    }

    #[test]
    fn clique_cap_is_enforced() {
        let k = complete(12);
        assert!(matches!(max_clique(&k, 5), Err(Error::Resource(_))));
        let big = complete(65);
        assert!(matches!(brute_clique(&big), Err(Error::Resource(_))));
    }
}
