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

//! Dense matrix multiplication over an abstract commutative ring.
//!
//! This is the backend that stands in for fast matrix multiplication:
//! classical row-by-row products, optionally Strassen's recursion for large
//! square operands. Both are exact, so the choice never changes a result.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A commutative ring with cheap, copyable elements.
pub trait Ring: Sync {
    type Elem: Copy + Send + Sync + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;

    fn mul_add(&self, acc: Self::Elem, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(acc, self.mul(a, b))
    }
}

/// Wrapping 64-bit integers. Callers guard against overflow themselves.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegerRing;

impl Ring for IntegerRing {
    type Elem = i64;

    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn add(&self, a: i64, b: i64) -> i64 {
        a.wrapping_add(b)
    }
    fn sub(&self, a: i64, b: i64) -> i64 {
        a.wrapping_sub(b)
    }
    fn mul(&self, a: i64, b: i64) -> i64 {
        a.wrapping_mul(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MulStrategy {
    #[default]
    Classical,
    Strassen,
}

/// Below this side length Strassen recursion hands over to the classical
/// kernel.
const STRASSEN_CUTOFF: usize = 64;

/// Row-major `(rows x inner) * (inner x cols)`.
pub fn multiply<R: Ring>(
    ring: &R,
    a: &[R::Elem],
    b: &[R::Elem],
    rows: usize,
    inner: usize,
    cols: usize,
    strategy: MulStrategy,
) -> Vec<R::Elem> {
    assert_eq!(a.len(), rows * inner, "left operand has wrong size");
    assert_eq!(b.len(), inner * cols, "right operand has wrong size");
    match strategy {
        MulStrategy::Strassen if rows == inner && inner == cols && rows > STRASSEN_CUTOFF => {
            strassen(ring, a, b, rows)
        }
        _ => classical(ring, a, b, rows, inner, cols),
    }
}

fn classical<R: Ring>(
    ring: &R,
    a: &[R::Elem],
    b: &[R::Elem],
    rows: usize,
    inner: usize,
    cols: usize,
) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); rows * cols];
    if cols == 0 {
        return out;
    }
    let zero = ring.zero();
    out.par_chunks_mut(cols).enumerate().for_each(|(i, row)| {
        for l in 0..inner {
            let x = a[i * inner + l];
            if x == zero {
                continue;
            }
            let brow = &b[l * cols..(l + 1) * cols];
            for (o, &y) in row.iter_mut().zip(brow) {
                *o = ring.mul_add(*o, x, y);
            }
        }
    });
    out
}

fn strassen<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem], n: usize) -> Vec<R::Elem> {
    if n <= STRASSEN_CUTOFF {
        return classical(ring, a, b, n, n, n);
    }
    let h = n.div_ceil(2);
    let quad = |m: &[R::Elem], qi: usize, qj: usize| -> Vec<R::Elem> {
        let mut q = vec![ring.zero(); h * h];
        for i in 0..h {
            let si = qi * h + i;
            if si >= n {
                break;
            }
            for j in 0..h {
                let sj = qj * h + j;
                if sj >= n {
                    break;
                }
                q[i * h + j] = m[si * n + sj];
            }
        }
        q
    };
    let add = |x: &[R::Elem], y: &[R::Elem]| -> Vec<R::Elem> {
        x.iter().zip(y).map(|(&p, &q)| ring.add(p, q)).collect()
    };
    let sub = |x: &[R::Elem], y: &[R::Elem]| -> Vec<R::Elem> {
        x.iter().zip(y).map(|(&p, &q)| ring.sub(p, q)).collect()
    };
    let (a11, a12, a21, a22) = (quad(a, 0, 0), quad(a, 0, 1), quad(a, 1, 0), quad(a, 1, 1));
    let (b11, b12, b21, b22) = (quad(b, 0, 0), quad(b, 0, 1), quad(b, 1, 0), quad(b, 1, 1));

    let m1 = strassen(ring, &add(&a11, &a22), &add(&b11, &b22), h);
    let m2 = strassen(ring, &add(&a21, &a22), &b11, h);
    let m3 = strassen(ring, &a11, &sub(&b12, &b22), h);
    let m4 = strassen(ring, &a22, &sub(&b21, &b11), h);
    let m5 = strassen(ring, &add(&a11, &a12), &b22, h);
    let m6 = strassen(ring, &sub(&a21, &a11), &add(&b11, &b12), h);
    let m7 = strassen(ring, &sub(&a12, &a22), &add(&b21, &b22), h);

    let c11 = add(&sub(&add(&m1, &m4), &m5), &m7);
    let c12 = add(&m3, &m5);
    let c21 = add(&m2, &m4);
    let c22 = add(&add(&sub(&m1, &m2), &m3), &m6);

    let mut out = vec![ring.zero(); n * n];
    for (q, qi, qj) in [(&c11, 0, 0), (&c12, 0, 1), (&c21, 1, 0), (&c22, 1, 1)] {
        for i in 0..h {
            let si = qi * h + i;
            if si >= n {
                break;
            }
            for j in 0..h {
                let sj = qj * h + j;
                if sj >= n {
                    break;
                }
                out[si * n + sj] = q[i * h + j];
            }
        }
    }
    out
}
