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

//! Arithmetic in GF(p) for word-sized primes.
//!
//! Elements are plain `u64` residues in `[0, p)`; every operation goes
//! through a [`PrimeField`] that carries the modulus.

use plb_core::matmul::Ring;
use rand::Rng;

use crate::error::{AlgebraError, Result};

/// `2^61 - 1`.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: MERSENNE_61 }
    }
}

impl PrimeField {
    /// Checks primality once, deterministically.
    pub fn new(p: u64) -> Result<PrimeField> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        let r = (x as i128).rem_euclid(self.p as i128);
        r as u64
    }

    /// Symmetric representative in `(-p/2, p/2]`, for display.
    pub fn to_signed(&self, a: u64) -> i128 {
        if a > self.p / 2 {
            a as i128 - self.p as i128
        } else {
            a as i128
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn reduce_wide(&self, x: u128) -> u64 {
        if self.p == MERSENNE_61 {
            // x < 2^122 + 2^61, fold twice
            let lo = (x as u64) & MERSENNE_61;
            let hi = (x >> 61) as u64;
            let s = (hi & MERSENNE_61) + (hi >> 61) + lo;
            let s = (s & MERSENNE_61) + (s >> 61);
            if s >= MERSENNE_61 {
                s - MERSENNE_61
            } else {
                s
            }
        } else {
            (x % self.p as u128) as u64
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce_wide(a as u128 * b as u128)
    }

    /// `acc + a * b`.
    #[inline]
    pub fn mul_add(&self, acc: u64, a: u64, b: u64) -> u64 {
        self.reduce_wide(a as u128 * b as u128 + acc as u128)
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(AlgebraError::DivisionByZero(self.p));
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Inverts every element with one field inversion (Montgomery's trick).
    pub fn batch_inv(&self, xs: &[u64]) -> Result<Vec<u64>> {
        let mut prefix = Vec::with_capacity(xs.len());
        let mut acc = 1u64;
        for &x in xs {
            if x == 0 {
                return Err(AlgebraError::DivisionByZero(self.p));
            }
            prefix.push(acc);
            acc = self.mul(acc, x);
        }
        let mut inv = self.inv(acc)?;
        let mut out = vec![0u64; xs.len()];
        for i in (0..xs.len()).rev() {
            out[i] = self.mul(inv, prefix[i]);
            inv = self.mul(inv, xs[i]);
        }
        Ok(out)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.p)
    }

    pub fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.mul_add(acc, x, y))
    }

    /// `y += s * x`.
    pub fn axpy(&self, y: &mut [u64], s: u64, x: &[u64]) {
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = self.mul_add(*yi, s, xi);
        }
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        PrimeField::add(self, a, b)
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        PrimeField::sub(self, a, b)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        PrimeField::mul(self, a, b)
    }
    fn mul_add(&self, acc: u64, a: u64, b: u64) -> u64 {
        PrimeField::mul_add(self, acc, a, b)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_field() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.inv(3).unwrap(), 5);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.from_i64(-1), 6);
        assert!(matches!(f.inv(0), Err(AlgebraError::DivisionByZero(7))));
    }

    #[test]
    fn primality() {
        assert!(is_prime(MERSENNE_61));
        assert!(is_prime(998_244_353));
        assert!(!is_prime(1));
        assert!(!is_prime(561));
        assert!(!is_prime((1 << 61) + 1));
        assert!(matches!(PrimeField::new(15), Err(AlgebraError::NotPrime(15))));
    }

    #[test]
    fn inverses_and_batch() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for f in [PrimeField::default(), PrimeField::new(1_000_000_007).unwrap()] {
            let xs: Vec<u64> = (0..1000).map(|_| f.random_nonzero(&mut rng)).collect();
            for &a in &xs {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            let batch = f.batch_inv(&xs).unwrap();
            for (a, b) in xs.iter().zip(&batch) {
                assert_eq!(f.inv(*a).unwrap(), *b);
            }
        }
    }

    #[test]
    fn mersenne_reduction_matches_generic() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
            let expect = ((a as u128 * b as u128 + c as u128) % MERSENNE_61 as u128) as u64;
            assert_eq!(f.mul_add(c, a, b), expect);
        }
        let top = MERSENNE_61 - 1;
        assert_eq!(f.mul(top, top), 1);
    }
}
