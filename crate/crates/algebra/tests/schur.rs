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

use common::{plb_general, plb_symmetric, random_vec};
use plb_algebra::partition::heuristic_k;
use plb_algebra::schur::{det_general, det_symmetric, SchurFactorization};
use plb_algebra::PrimeField;

#[test]
fn symmetric_det_matches_dense_on_power_law_patterns() {
    let f = PrimeField::default();
    let mut retried = 0;
    for seed in 0..20 {
        let m = plb_symmetric(&f, 120, seed);
        let dense = m.to_dense().det(&f).unwrap();
        let k = heuristic_k(m.rows(), m.nnz() / 2);
        for k in [1, k, 2 * k] {
            let out = det_symmetric(&f, &m, k, seed).unwrap();
            assert_eq!(out.det, dense, "seed {seed} k {k}");
            retried += out.stats.retried() as usize;
        }
    }
    assert!(retried <= 1, "{retried} retried runs");
}

#[test]
fn general_det_matches_dense_on_power_law_patterns() {
    let f = PrimeField::default();
    let mut retried = 0;
    for seed in 0..20 {
        let m = plb_general(&f, 100, seed);
        let dense = m.to_dense().det(&f).unwrap();
        for k in [1, 3, 8] {
            let out = det_general(&f, &m, k, seed).unwrap();
            assert_eq!(out.det, dense, "seed {seed} k {k}");
            retried += out.stats.retried() as usize;
        }
    }
    assert!(retried <= 1, "{retried} retried runs");
}

#[test]
fn solve_and_inverse_residuals_vanish() {
    let f = PrimeField::default();
    for seed in 0..4 {
        for m in [plb_general(&f, 150, seed), plb_symmetric(&f, 150, seed)] {
            let s = SchurFactorization::new(&f, &m, 4, seed).unwrap();
            let v = random_vec(&f, m.rows(), seed + 100);
            let x = s.solve(&v).unwrap();
            assert_eq!(m.mul_vec(&f, &x), v);
            let inv = s.inverse().unwrap();
            assert!(m.mul_dense(&f, &inv).unwrap().is_identity());
        }
    }
}

#[test]
fn block_diagonal_det_is_product() {
    let f = PrimeField::default();
    let m1 = plb_symmetric(&f, 30, 1);
    let m2 = plb_symmetric(&f, 40, 2);
    let (n1, n2) = (m1.rows(), m2.rows());
    let entries = m1
        .triplets()
        .chain(m2.triplets().map(|(i, j, v)| (i + n1, j + n1, v)))
        .collect::<Vec<_>>();
    let m = plb_algebra::SparseMatrix::from_triplets(&f, n1 + n2, n1 + n2, entries).unwrap();
    let want = f.mul(m1.to_dense().det(&f).unwrap(), m2.to_dense().det(&f).unwrap());
    for k in [1, 3] {
        assert_eq!(det_symmetric(&f, &m, k, 0).unwrap().det, want);
        assert_eq!(det_general(&f, &m, k, 0).unwrap().det, want);
    }
}

#[test]
fn diagonal_solve_divides() {
    let f = PrimeField::default();
    let m = plb_algebra::SparseMatrix::from_triplets(&f, 3, 3, [(0, 0, 2), (1, 1, 5), (2, 2, 7)]).unwrap();
    let out = plb_algebra::schur::solve(&f, &m, &[4, 10, 21], 1, 0).unwrap();
    assert_eq!(out.x, vec![2, 2, 3]);
}

#[test]
fn relabeling_preserves_answers() {
    let f = PrimeField::default();
    let m = plb_general(&f, 60, 5);
    let n = m.rows();
    let perm: Vec<usize> = (0..n).rev().collect();
    let pm = m.permute_symmetric(&perm);
    let v = random_vec(&f, n, 1);
    let a = SchurFactorization::general(&f, &m, 3, 1).unwrap();
    let b = SchurFactorization::general(&f, &pm, 3, 1).unwrap();
    assert_eq!(a.det(), b.det());
    let xa = a.solve(&v).unwrap();
    let pv: Vec<u64> = perm.iter().map(|&i| v[i]).collect();
    let xb = b.solve(&pv).unwrap();
    let back: Vec<u64> = perm.iter().map(|&i| xa[i]).collect();
    assert_eq!(xb, back);
}
