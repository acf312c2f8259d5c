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

use plb_algebra::{PrimeField, SparseMatrix};
use plb_core::generator::{erased_configuration, erased_configuration_directed, power_law_degrees};
use plb_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn plb_graph(n: usize, alpha: f64, seed: u64) -> Graph {
    let d = power_law_degrees(n, alpha).unwrap();
    erased_configuration(&d, seed).unwrap().graph
}

pub fn plb_digraph(n: usize, alpha: f64, seed: u64) -> Graph {
    let d = power_law_degrees(n, alpha).unwrap();
    erased_configuration_directed(&d, seed).unwrap().graph
}

/// Random symmetric matrix on a power-law pattern, with a random diagonal.
pub fn plb_symmetric(f: &PrimeField, n: usize, seed: u64) -> SparseMatrix {
    let g = plb_graph(n, 2.2, seed);
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, f.random(&mut rng)));
    }
    for (u, v) in g.edges() {
        let x = f.random_nonzero(&mut rng);
        t.push((u, v, x));
        t.push((v, u, x));
    }
    SparseMatrix::from_triplets(f, n, n, t).unwrap()
}

/// Random nonsymmetric matrix on a directed power-law pattern.
pub fn plb_general(f: &PrimeField, n: usize, seed: u64) -> SparseMatrix {
    let g = plb_digraph(n, 2.2, seed);
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e17);
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, f.random(&mut rng)));
    }
    for (u, v) in g.edges() {
        t.push((u, v, f.random_nonzero(&mut rng)));
    }
    SparseMatrix::from_triplets(f, n, n, t).unwrap()
}

pub fn random_vec(f: &PrimeField, n: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| f.random(&mut rng)).collect()
}

pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                e.push((u, v));
            }
        }
    }
    Graph::undirected(n, e)
}

pub fn gnp_directed(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                e.push((u, v));
            }
        }
    }
    Graph::directed(n, e)
}
