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

#![allow(dead_code)]

use plb_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::undirected(n, edges)
}

/// `gnp` plus a clique on `k` random vertices.
pub fn planted_clique(n: usize, p: f64, k: usize, seed: u64) -> Graph {
    let base = gnp(n, p, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut members: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        members.swap(i, j);
    }
    let members = &members[..k];
    let extra = members
        .iter()
        .flat_map(|&a| members.iter().map(move |&b| (a, b)));
    Graph::undirected(n, base.edges().chain(extra))
}

pub fn complete(n: usize) -> Graph {
    Graph::undirected(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}
