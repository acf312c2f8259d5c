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

mod common;

use common::gnp;
use petgraph::algo::maximum_matching;
use petgraph::graph::UnGraph;
use plb_algebra::matching::{find_perfect_matching, has_perfect_matching, is_perfect_matching};
use plb_algebra::partition::heuristic_k;
use plb_algebra::PrimeField;
use plb_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn oracle_has_perfect(g: &Graph) -> bool {
    let pg = UnGraph::<(), ()>::from_edges(g.edges().map(|(u, v)| (u as u32, v as u32)));
    let mut pg = pg;
    while pg.node_count() < g.n() {
        pg.add_node(());
    }
    maximum_matching(&pg).is_perfect()
}

/// A random perfect matching plus noise edges.
fn planted(n: usize, noise: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut e: Vec<(usize, usize)> = order.chunks(2).map(|c| (c[0], c[1])).collect();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(noise) {
                e.push((u, v));
            }
        }
    }
    Graph::undirected(n, e)
}

#[test]
fn test_agrees_with_blossom_oracle() {
    let f = PrimeField::default();
    let mut positives = 0;
    for seed in 0..200u64 {
        let n = 2 + (seed as usize % 63);
        let p = [0.08, 0.15, 0.3][seed as usize % 3];
        let g = gnp(n, p, seed);
        let want = oracle_has_perfect(&g);
        let got = has_perfect_matching(&f, &g, seed).unwrap().exists;
        assert_eq!(got, want, "seed {seed} n {n}");
        positives += want as usize;
    }
    assert!((40..=160).contains(&positives), "{positives} positives");
}

#[test]
fn finds_planted_matchings() {
    let f = PrimeField::default();
    for seed in 0..40u64 {
        let n = 2 * (1 + seed as usize % 40);
        let g = planted(n, 0.05, seed);
        let k = heuristic_k(g.n(), g.m());
        let out = find_perfect_matching(&f, &g, k, seed).unwrap();
        let m = out.matching.expect("planted matching exists");
        assert!(is_perfect_matching(&g, &m));
    }
}

#[test]
fn dense_block_edges_are_used() {
    let f = PrimeField::default();
    // Dense core on 0..10 with pendant partners for half of it.
    let mut e = Vec::new();
    for u in 0..10 {
        for v in u + 1..10 {
            e.push((u, v));
        }
    }
    for u in 0..5 {
        e.push((u, 10 + u));
    }
    let g = Graph::undirected(15 + 1, e.into_iter().chain([(14, 15), (5, 14)]));
    let out = find_perfect_matching(&f, &g, 3, 5).unwrap();
    assert!(is_perfect_matching(&g, &out.matching.unwrap()));
    assert!(out.dense_edges > 0);
}

#[test]
fn odd_and_unmatched_graphs_return_none() {
    let f = PrimeField::default();
    let p3 = Graph::undirected(3, [(0, 1), (1, 2)]);
    assert!(find_perfect_matching(&f, &p3, 1, 0).unwrap().matching.is_none());
    let star = Graph::undirected(6, (1..6).map(|i| (0, i)));
    assert!(find_perfect_matching(&f, &star, 1, 0).unwrap().matching.is_none());
}
