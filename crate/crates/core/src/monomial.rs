//! Canonical monomials: a count of variables per exponent residue 1..=q-1.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldParam;

/// A monomial up to permutation of variables and equivalence of exponents.
///
/// `counts[r-1]` is the number of variables carrying exponent residue `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    counts: Box<[u32]>,
}

/// An element of the multiplicative model Z_{q-1} ∪ {-∞} of (F_q, ·).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elem {
    NegInf,
    Log(u32),
}

impl Monomial {
    /// Builds from a raw count vector; rejects the all-zero vector.
    pub fn from_count_vec(counts: Vec<u32>, fp: &FieldParam) -> Result<Self> {
        if counts.len() != fp.n() as usize {
            return Err(Error::InvalidMonomial(format!(
                "count vector has length {}, expected {}",
                counts.len(),
                fp.n()
            )));
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(Error::InvalidMonomial("no variable with nonzero exponent".into()));
        }
        Ok(Monomial { counts: counts.into() })
    }

    pub(crate) fn from_raw(counts: Box<[u32]>) -> Self {
        Monomial { counts }
    }

    /// Builds from (residue, count) pairs. Residues outside 1..=q-1 are rejected.
    pub fn from_pairs(pairs: &[(u32, u32)], fp: &FieldParam) -> Result<Self> {
        let mut v = vec![0u32; fp.n() as usize];
        for &(r, c) in pairs {
            if r == 0 || r > fp.n() {
                return Err(Error::InvalidMonomial(format!("residue {r} outside 1..={}", fp.n())));
            }
            v[r as usize - 1] += c;
        }
        Self::from_count_vec(v, fp)
    }

    /// The projection x1.
    pub fn x1(fp: &FieldParam) -> Self {
        Self::power(1, fp)
    }

    /// x1^r for a residue r.
    pub fn power(r: u32, fp: &FieldParam) -> Self {
        let mut v = vec![0u32; fp.n() as usize];
        v[fp.reduce(r as u64) as usize - 1] = 1;
        Monomial { counts: v.into() }
    }

    /// x1 x2 ... xk.
    pub fn all_ones(k: u32, fp: &FieldParam) -> Self {
        Self::uniform(1, k, fp)
    }

    /// x1^r x2^r ... xk^r.
    pub fn uniform(r: u32, k: u32, fp: &FieldParam) -> Self {
        assert!(k >= 1);
        let mut v = vec![0u32; fp.n() as usize];
        v[fp.reduce(r as u64) as usize - 1] = k;
        Monomial { counts: v.into() }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, r: u32) -> u32 {
        if r == 0 {
            return 0;
        }
        self.counts.get(r as usize - 1).copied().unwrap_or(0)
    }

    pub fn width(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Exponent residues with multiplicity, ascending.
    pub fn exponents(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.width() as usize);
        for (i, &c) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat(i as u32 + 1).take(c as usize));
        }
        out
    }

    /// Distinct residues present.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, _)| i as u32 + 1)
    }

    pub fn exponent_sum(&self) -> u64 {
        self.counts.iter().enumerate().map(|(i, &c)| (i as u64 + 1) * c as u64).sum()
    }

    pub fn is_idempotent(&self, fp: &FieldParam) -> bool {
        self.exponent_sum() % fp.n() as u64 == 1 % fp.n() as u64
    }

    /// Replaces one variable with exponent `r` by `m2` in fresh variables.
    pub fn substitute(&self, r: u32, m2: &Monomial, fp: &FieldParam) -> Result<Monomial> {
        if self.count(r) == 0 {
            return Err(Error::Precondition(format!("residue {r} does not occur in {self}")));
        }
        let mut v = self.counts.to_vec();
        v[r as usize - 1] -= 1;
        for s in m2.support() {
            v[fp.reduce(r as u64 * s as u64) as usize - 1] += m2.count(s);
        }
        Ok(Monomial { counts: v.into() })
    }

    /// Identifies one variable with exponent `r1` and one with exponent `r2`.
    pub fn identify(&self, r1: u32, r2: u32, fp: &FieldParam) -> Result<Monomial> {
        let need_ok = if r1 == r2 {
            self.count(r1) >= 2
        } else {
            self.count(r1) >= 1 && self.count(r2) >= 1
        };
        if self.width() < 2 || !need_ok {
            return Err(Error::Precondition(format!("cannot identify residues {r1} and {r2} in {self}")));
        }
        let mut v = self.counts.to_vec();
        v[r1 as usize - 1] -= 1;
        v[r2 as usize - 1] -= 1;
        v[fp.reduce(r1 as u64 + r2 as u64) as usize - 1] += 1;
        Ok(Monomial { counts: v.into() })
    }

    /// Evaluates in the model, assigning `point[i]` to the i-th exponent of [`Self::exponents`].
    pub fn evaluate(&self, point: &[Elem], fp: &FieldParam) -> Result<Elem> {
        if point.len() != self.width() as usize {
            return Err(Error::Precondition(format!(
                "point has {} coordinates, monomial has width {}",
                point.len(),
                self.width()
            )));
        }
        let n = fp.n() as u64;
        let mut acc = 0u64;
        for (e, x) in self.exponents().into_iter().zip(point) {
            match x {
                Elem::NegInf => return Ok(Elem::NegInf),
                Elem::Log(l) => acc = (acc + e as u64 * *l as u64) % n,
            }
        }
        Ok(Elem::Log(acc as u32))
    }
}

/// Drops zero exponents and reduces the rest.
pub fn canonicalize(exponents: &[u64], fp: &FieldParam) -> Result<Monomial> {
    let mut v = vec![0u32; fp.n() as usize];
    for &a in exponents.iter().filter(|&&a| a > 0) {
        v[fp.reduce(a) as usize - 1] += 1;
    }
    Monomial::from_count_vec(v, fp)
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.exponents().into_iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Enumerates every canonical monomial with `1 <= width <= max_width`.
pub fn all_monomials(fp: &FieldParam, max_width: u32) -> Vec<Monomial> {
    let n = fp.n() as usize;
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            if cur.iter().any(|&c| c > 0) {
                out.push(Monomial { counts: cur.clone().into() });
            }
            return;
        }
        for c in 0..=left {
            cur[i] = c;
            rec(i + 1, left - c, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_width, &mut cur, &mut out);
    out.sort();
    out
}
