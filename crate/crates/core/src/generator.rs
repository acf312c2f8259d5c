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

//! Synthetic power-law graphs from the erased configuration model.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeSequence {
    pub degrees: Vec<usize>,
    pub alpha: f64,
}

impl DegreeSequence {
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn stub_count(&self) -> usize {
        self.degrees.iter().sum()
    }
}

/// `floor(n / k^alpha)` vertices of degree `k` for every `k` where that is
/// positive, padded with degree-1 vertices up to `n`, plus one degree-1
/// vertex if the degree sum is odd.
pub fn power_law_degrees(n: usize, alpha: f64) -> Result<DegreeSequence> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "alpha must satisfy alpha > 1, got {alpha}"
        )));
    }
    if n == 0 {
        return Err(Error::Precondition("need n >= 1".into()));
    }
    let nf = n as f64;
    let mut degrees = Vec::new();
    let mut k = 1usize;
    loop {
        let count = (nf / (k as f64).powf(alpha)).floor() as usize;
        if count == 0 {
            break;
        }
        degrees.extend(std::iter::repeat_n(k, count));
        k += 1;
    }
    if degrees.len() < n {
        degrees.resize(n, 1);
    }
    if degrees.iter().sum::<usize>() % 2 == 1 {
        degrees.push(1);
    }
    Ok(DegreeSequence { degrees, alpha })
}

/// A generated graph together with how much the erasure removed.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    /// Stub pairs that became self-loops or repeated edges.
    pub erased_edges: usize,
}

impl Generated {
    /// Fraction of stubs lost to erasure.
    pub fn erased_fraction(&self, d: &DegreeSequence) -> f64 {
        let stubs = d.stub_count();
        if stubs == 0 {
            0.0
        } else {
            2.0 * self.erased_edges as f64 / stubs as f64
        }
    }
}

/// Uniform random stub matching (seeded Fisher–Yates, consecutive pairs),
/// then loops and parallel edges are erased.
pub fn erased_configuration(d: &DegreeSequence, seed: u64) -> Result<Generated> {
    let stubs_total = d.stub_count();
    if stubs_total % 2 == 1 {
        return Err(Error::Precondition(format!(
            "degree sum must be even, got {stubs_total}"
        )));
    }
    let mut stubs: Vec<usize> = Vec::with_capacity(stubs_total);
    for (v, &k) in d.degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v, k));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    stubs.shuffle(&mut rng);
    let pairs = stubs.chunks_exact(2).map(|c| (c[0], c[1]));
    let graph = Graph::undirected(d.len(), pairs);
    Ok(Generated {
        erased_edges: stubs_total / 2 - graph.m(),
        graph,
    })
}

/// Directed variant: out-degrees follow `d`, in-degrees follow a seeded
/// permutation of `d`, and out-stubs are matched uniformly to in-stubs.
pub fn erased_configuration_directed(d: &DegreeSequence, seed: u64) -> Result<Generated> {
    let n = d.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_deg = d.degrees.clone();
    in_deg.shuffle(&mut rng);
    let mut heads: Vec<usize> = Vec::with_capacity(d.stub_count());
    for (v, &k) in in_deg.iter().enumerate() {
        heads.extend(std::iter::repeat_n(v, k));
    }
    heads.shuffle(&mut rng);
    let tails = d
        .degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &k)| std::iter::repeat_n(v, k));
    let graph = Graph::directed(n, tails.zip(heads.iter().copied()));
    Ok(Generated {
        erased_edges: heads.len() - graph.m(),
        graph,
    })
}

/// Metadata written next to a generated edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSidecar {
    pub n_requested: usize,
    pub n_realized: usize,
    pub m: usize,
    pub alpha: f64,
    pub seed: u64,
    pub directed: bool,
    pub erased_edges: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_n10_alpha2() {
        let d = power_law_degrees(10, 2.0).unwrap();
        let ones = d.degrees.iter().filter(|&&k| k == 1).count();
        assert_eq!(d.len(), 14);
        assert_eq!(ones, 11);
        assert_eq!(d.degrees.iter().filter(|&&k| k == 2).count(), 2);
        assert_eq!(d.degrees.iter().filter(|&&k| k == 3).count(), 1);
        assert_eq!(d.stub_count(), 18);
    }

    #[test]
    fn degrees_n1_parity() {
        let d = power_law_degrees(1, 2.0).unwrap();
        assert_eq!(d.degrees, vec![1, 1]);
    }

    #[test]
    fn degrees_reject_alpha_one() {
        assert!(matches!(power_law_degrees(10, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn single_pair() {
        let d = DegreeSequence {
            degrees: vec![1, 1],
            alpha: 2.0,
        };
        for seed in 0..10 {
            let g = erased_configuration(&d, seed).unwrap();
            assert_eq!(g.graph.m(), 1);
            assert_eq!(g.erased_edges, 0);
        }
    }

    #[test]
    fn two_by_two_outcomes() {
        let d = DegreeSequence {
            degrees: vec![2, 2],
            alpha: 2.0,
        };
        let mut seen = [false; 2];
        for seed in 0..200 {
            let g = erased_configuration(&d, seed).unwrap();
            match g.graph.m() {
                1 => {
                    assert_eq!(g.erased_edges, 1);
                    seen[1] = true;
                }
                0 => {
                    assert_eq!(g.erased_edges, 2);
                    seen[0] = true;
                }
                m => panic!("impossible edge count {m}"),
            }
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn odd_stubs_rejected() {
        let d = DegreeSequence {
            degrees: vec![1, 2],
            alpha: 2.0,
        };
        assert!(matches!(
            erased_configuration(&d, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn deterministic_per_seed() {
        let d = power_law_degrees(2000, 2.2).unwrap();
        let a = erased_configuration(&d, 42).unwrap().graph;
        let b = erased_configuration(&d, 42).unwrap().graph;
        assert!(a.edges().eq(b.edges()));
        let c = erased_configuration_directed(&d, 42).unwrap().graph;
        let e = erased_configuration_directed(&d, 42).unwrap().graph;
        assert!(c.is_directed());
        assert!(c.edges().eq(e.edges()));
    }
}
