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


use plb_algebra::{PrimeField, SparseMatrix};
use plb_core::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Field matrix on the pattern of `g` plus the diagonal, with independent
/// uniform nonzero entries. Undirected graphs give a symmetric matrix.
pub fn pattern_matrix(f: &PrimeField, g: &Graph, seed: u64) -> plb_algebra::Result<SparseMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.n();
    let mut entries = Vec::with_capacity(n + 2 * g.m());
    for v in 0..n {
        entries.push((v, v, f.random_nonzero(&mut rng)));
    }
    for (u, v) in g.edges() {
        let x = f.random_nonzero(&mut rng);
        entries.push((u, v, x));
        if !g.is_directed() {
            entries.push((v, u, x));
        }
    }
    SparseMatrix::from_triplets(f, n, n, entries)
}

/// Uniform random vector of length `n`.
pub fn random_vector(f: &PrimeField, n: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| f.random(&mut rng)).collect()
}
