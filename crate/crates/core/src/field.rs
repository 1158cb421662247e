//! Field parameters and the small amount of number theory the rest of the crate needs.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_Q: u64 = 1 << 20;

/// Parameters of F_q with q = p^t, plus the prime divisors of q-1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParam {
    pub q: u32,
    pub p: u32,
    pub t: u32,
    /// Distinct primes dividing q-1, ascending.
    pub primes: Vec<u32>,
    /// Whether q-1 is square-free.
    pub squarefree: bool,
}

impl FieldParam {
    pub fn new(q: u64) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::NotPrimePower(q));
        }
        let f = factorize(q);
        if f.len() != 1 {
            return Err(Error::NotPrimePower(q));
        }
        let (p, t) = f[0];
        let fm = factorize(q - 1);
        Ok(FieldParam {
            q: q as u32,
            p: p as u32,
            t,
            primes: fm.iter().map(|&(r, _)| r as u32).collect(),
            squarefree: fm.iter().all(|&(_, e)| e == 1),
        })
    }

    /// The order q-1 of the multiplicative group.
    pub fn n(&self) -> u32 {
        self.q - 1
    }

    /// Overline reduction: `q-1` for positive multiples of q-1, `a mod (q-1)` otherwise.
    pub fn reduce(&self, a: u64) -> u32 {
        if a == 0 {
            0
        } else {
            ((a - 1) % self.n() as u64) as u32 + 1
        }
    }

    /// Divisors of q-1, ascending.
    pub fn divisors(&self) -> Vec<u32> {
        divisors(self.n() as u64).into_iter().map(|d| d as u32).collect()
    }

    /// Least k >= 2 with k^2 | q-1, if any.
    pub fn least_square_divisor(&self) -> Option<u32> {
        let n = self.n();
        (2..=n).take_while(|k| k * k <= n).find(|k| n % (k * k) == 0)
    }
}

/// Free-standing form of [`FieldParam::reduce`].
pub fn reduce_exponent(a: u64, fp: &FieldParam) -> u32 {
    fp.reduce(a)
}

/// Prime factorization by trial division, as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds: Vec<u64> = (1..=n).take_while(|d| d * d <= n).filter(|d| n % d == 0).collect();
    let big: Vec<u64> = ds.iter().rev().map(|d| n / d).filter(|e| e * e != n).collect();
    ds.extend(big);
    ds
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
