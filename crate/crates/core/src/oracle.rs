//! Brute-force clone closure on function tables over Z_{q-1} ∪ {-∞}.
//!
//! Works with nothing but tables and pointwise composition, so it shares no code path with
//! the count-vector engine and can serve as its reference.

use std::collections::BTreeSet;

use crate::field::FieldParam;
use crate::monomial::Monomial;

/// A function table of fixed arity. Element 0 encodes -∞, element k+1 encodes log k.
pub type Table = Vec<u8>;

fn pow(q: usize, a: usize) -> usize {
    q.pow(a as u32)
}

/// Digits of `idx` in base `q`, most significant first.
fn point(idx: usize, q: usize, arity: usize) -> Vec<u8> {
    let mut out = vec![0u8; arity];
    let mut x = idx;
    for slot in out.iter_mut().rev() {
        *slot = (x % q) as u8;
        x /= q;
    }
    out
}

/// The table of x_{v_1}^{e_1} ⋯ x_{v_k}^{e_k} at the given arity.
pub fn monomial_table(exponents: &[(usize, u64)], q: usize, arity: usize) -> Table {
    let n = (q - 1) as u64;
    (0..pow(q, arity))
        .map(|idx| {
            let p = point(idx, q, arity);
            let mut acc = 0u64;
            for &(v, e) in exponents {
                if e == 0 {
                    continue;
                }
                if p[v] == 0 {
                    return 0;
                }
                acc += e * (p[v] as u64 - 1);
            }
            (acc % n) as u8 + 1
        })
        .collect()
}

pub fn projection(v: usize, q: usize, arity: usize) -> Table {
    monomial_table(&[(v, 1)], q, arity)
}

/// `g(s_1, …, s_k)` evaluated pointwise.
pub fn compose(g: &Table, args: &[&Table], q: usize) -> Table {
    let len = args[0].len();
    (0..len)
        .map(|i| {
            let mut gi = 0usize;
            for a in args {
                gi = gi * q + a[i] as usize;
            }
            g[gi]
        })
        .collect()
}

/// Arity-`arity` part of the clone generated by `gens`, each given as (arity, table).
pub fn clone_tables(gens: &[(usize, Table)], q: usize, arity: usize) -> BTreeSet<Table> {
    let mut have: BTreeSet<Table> = (0..arity).map(|v| projection(v, q, arity)).collect();
    loop {
        let cur: Vec<Table> = have.iter().cloned().collect();
        let mut grew = false;
        for (k, g) in gens {
            let total = cur.len().pow(*k as u32);
            for t in 0..total {
                let mut x = t;
                let args: Vec<&Table> = (0..*k)
                    .map(|_| {
                        let a = &cur[x % cur.len()];
                        x /= cur.len();
                        a
                    })
                    .collect();
                if have.insert(compose(g, &args, q)) {
                    grew = true;
                }
            }
        }
        if !grew {
            return have;
        }
    }
}

/// A monomial's table on its own width, one variable per exponent occurrence.
pub fn generator_table(m: &Monomial, fp: &FieldParam) -> (usize, Table) {
    let ex: Vec<(usize, u64)> = m.exponents().into_iter().enumerate().map(|(i, e)| (i, e as u64)).collect();
    (ex.len(), monomial_table(&ex, fp.q as usize, ex.len()))
}

/// All tables at `arity` induced by placing members of width ≤ `arity` on distinct variables.
pub fn induced_tables<'a>(members: impl IntoIterator<Item = &'a Monomial>, fp: &FieldParam, arity: usize) -> BTreeSet<Table> {
    let q = fp.q as usize;
    let mut out = BTreeSet::new();
    for m in members {
        let ex = m.exponents();
        if ex.len() > arity {
            continue;
        }
        let mut slots = vec![0usize; ex.len()];
        place(0, &mut slots, arity, &mut |vars| {
            let e: Vec<(usize, u64)> = vars.iter().zip(&ex).map(|(&v, &e)| (v, e as u64)).collect();
            out.insert(monomial_table(&e, q, arity));
        });
    }
    out
}

fn place(i: usize, slots: &mut Vec<usize>, arity: usize, f: &mut dyn FnMut(&[usize])) {
    if i == slots.len() {
        f(slots);
        return;
    }
    for v in 0..arity {
        if !slots[..i].contains(&v) {
            slots[i] = v;
            place(i + 1, slots, arity, f);
        }
    }
}
