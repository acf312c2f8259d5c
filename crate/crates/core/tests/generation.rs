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
use plb_core::generator::*;
use plb_core::orient::degeneracy;
use plb_core::{DegreeSide, Graph, LoadMode};

/// Largest `k` with a nonempty `k`-core, by repeatedly deleting vertices of
/// degree below `k`.
fn core_number(g: &Graph) -> usize {
    let mut best = 0;
    for k in 1..=g.max_degree() {
        let mut alive = vec![true; g.n()];
        loop {
            let drop: Vec<usize> = (0..g.n())
                .filter(|&v| alive[v])
                .filter(|&v| g.neighbors(v).iter().filter(|&&w| alive[w]).count() < k)
                .collect();
            if drop.is_empty() {
                break;
            }
            for v in drop {
                alive[v] = false;
            }
        }
        if alive.iter().any(|&a| a) {
            best = k;
        }
    }
    best
}

/// Maximum over all vertex subsets of the minimum induced degree.
fn exhaustive_degeneracy(g: &Graph) -> usize {
    let n = g.n();
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let min = (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .map(|v| g.neighbors(v).iter().filter(|&&w| mask >> w & 1 == 1).count())
            .min()
            .unwrap();
        best = best.max(min);
    }
    best
}

#[test]
fn degeneracy_matches_oracles() {
    for seed in 0..10 {
        let g = gnp(30, 0.3, seed);
        assert_eq!(degeneracy(&g).unwrap().0, core_number(&g), "seed {seed}");
        let small = gnp(12, 0.4, seed);
        assert_eq!(degeneracy(&small).unwrap().0, exhaustive_degeneracy(&small));
    }
}

#[test]
fn generated_graph_respects_prescribed_degrees() {
    let d = power_law_degrees(10_000, 2.5).unwrap();
    for seed in 0..5 {
        let gen = erased_configuration(&d, seed).unwrap();
        let g = &gen.graph;
        assert_eq!(g.n(), d.len());
        for v in 0..g.n() {
            assert!(g.degree(v) <= d.degrees[v]);
            assert!(!g.neighbors(v).contains(&v));
            assert!(g.neighbors(v).windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(2 * (g.m() + gen.erased_edges), d.stub_count());

        let tail = g.degree_histogram(DegreeSide::Total).unwrap().cumulative_tail();
        for (k, &count) in tail.iter().enumerate() {
            let direct = (0..g.n()).filter(|&v| g.degree(v) >= k).count();
            assert_eq!(count, direct);
        }
    }
}

#[test]
fn erasure_is_rare() {
    let d = power_law_degrees(10_000, 2.5).unwrap();
    let mean: f64 = (0..200u64)
        .map(|seed| erased_configuration(&d, seed).unwrap().erased_fraction(&d))
        .sum::<f64>()
        / 200.0;
    assert!(mean < 0.05, "mean erased fraction {mean}");
}

#[test]
fn generated_graph_survives_reload() {
    let d = power_law_degrees(3000, 2.1).unwrap();
    let g = erased_configuration(&d, 5).unwrap().graph;
    let mut buf = Vec::new();
    g.write_edge_list(&mut buf).unwrap();
    let back = Graph::load_edge_list(&buf[..], LoadMode::Undirected).unwrap();
    assert_eq!(back.n(), g.n());
    assert!(back.edges().eq(g.edges()));
}

#[test]
fn directed_generator_is_simple() {
    let d = power_law_degrees(5000, 2.3).unwrap();
    let gen = erased_configuration_directed(&d, 8).unwrap();
    let g = &gen.graph;
    assert!(g.is_directed());
    for v in 0..g.n() {
        assert!(g.out_degree(v) <= d.degrees[v]);
        assert!(!g.neighbors(v).contains(&v));
    }
    assert_eq!(g.m() + gen.erased_edges, d.stub_count());
}
