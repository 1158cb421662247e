//! Bounded fixpoint closure over count vectors, shared by monomials and linear forms.
//!
//! A member is a count vector indexed by residue-1. New members arise by replacing one
//! variable of residue `r` with a generator in fresh variables (residues multiply) and by
//! identifying two variables (residues add). Results that leave the universe are shrunk by
//! removing blocks of `n` equal residues where that is a valid identification, and dropped
//! only if that fails.

use std::collections::HashSet;

use indexmap::IndexSet;

pub(crate) type Vector = Box<[u32]>;

/// Residue arithmetic of one side of the correspondence.
pub(crate) trait Arith {
    /// Length of a count vector.
    fn slots(&self) -> usize;
    /// Block size for count reduction.
    fn step(&self) -> u32;
    fn mul(&self, r: u32, s: u32) -> Option<u32>;
    fn add(&self, r: u32, s: u32) -> Option<u32>;
    /// Whether `step` copies of slot `i` can be removed from `v`.
    fn can_shrink(&self, v: &[u32], i: usize) -> bool;
    /// Slot whose count may be raised freely once present, with the lowest count allowed.
    fn saturation(&self, _v: &[u32]) -> Option<(usize, u32)> {
        None
    }
}

pub(crate) struct MonoArith {
    pub n: u32,
}

impl Arith for MonoArith {
    fn slots(&self) -> usize {
        self.n as usize
    }
    fn step(&self) -> u32 {
        self.n
    }
    fn mul(&self, r: u32, s: u32) -> Option<u32> {
        Some(((r as u64 * s as u64 - 1) % self.n as u64) as u32 + 1)
    }
    fn add(&self, r: u32, s: u32) -> Option<u32> {
        Some(((r as u64 + s as u64 - 1) % self.n as u64) as u32 + 1)
    }
    fn can_shrink(&self, v: &[u32], i: usize) -> bool {
        // q copies collapse to one; q-1 copies vanish into any other variable
        let w: u32 = v.iter().sum();
        v[i] > self.n || (v[i] == self.n && w > self.n)
    }
    fn saturation(&self, v: &[u32]) -> Option<(usize, u32)> {
        let top = self.n as usize - 1;
        let w: u32 = v.iter().sum();
        if v[top] == 0 || w < 2 {
            return None;
        }
        let floor = if w > v[top] { 0 } else { 1 };
        Some((top, floor))
    }
}

pub(crate) struct LinArith {
    pub n: u32,
}

impl Arith for LinArith {
    fn slots(&self) -> usize {
        self.n.saturating_sub(1) as usize
    }
    fn step(&self) -> u32 {
        self.n
    }
    fn mul(&self, r: u32, s: u32) -> Option<u32> {
        let p = (r as u64 * s as u64 % self.n as u64) as u32;
        (p != 0).then_some(p)
    }
    fn add(&self, r: u32, s: u32) -> Option<u32> {
        let p = ((r as u64 + s as u64) % self.n as u64) as u32;
        (p != 0).then_some(p)
    }
    fn can_shrink(&self, v: &[u32], i: usize) -> bool {
        v[i] >= self.n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Universe {
    pub per_cap: u32,
    pub width_cap: Option<u32>,
}

impl Universe {
    pub fn contains(&self, v: &[u32]) -> bool {
        v.iter().all(|&c| c <= self.per_cap) && self.width_cap.map_or(true, |w| v.iter().sum::<u32>() <= w)
    }
}

pub(crate) struct Engine<'a, A: Arith> {
    pub arith: &'a A,
    pub universe: Universe,
    pub generators: &'a [Vector],
    /// Slots a member may use; members touching other slots are dropped.
    pub allowed: Option<Vec<bool>>,
}

pub(crate) struct Outcome {
    pub members: IndexSet<Vector>,
    pub hit: bool,
}

impl<'a, A: Arith> Engine<'a, A> {
    fn admissible(&self, v: &[u32]) -> bool {
        match &self.allowed {
            None => true,
            Some(a) => v.iter().zip(a).all(|(&c, &ok)| ok || c == 0),
        }
    }

    /// Shrinks an out-of-universe vector into the universe, pushing every minimal result.
    fn fit(&self, v: Vec<u32>, out: &mut Vec<Vector>) {
        let mut v = v;
        let step = self.arith.step();
        for i in 0..v.len() {
            while v[i] > self.universe.per_cap && self.arith.can_shrink(&v, i) {
                v[i] -= step;
            }
            if v[i] > self.universe.per_cap {
                return;
            }
        }
        let Some(wcap) = self.universe.width_cap else {
            out.push(v.into());
            return;
        };
        if v.iter().sum::<u32>() <= wcap {
            out.push(v.into());
            return;
        }
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut stack = vec![v];
        while let Some(cur) = stack.pop() {
            for i in 0..cur.len() {
                if !self.arith.can_shrink(&cur, i) {
                    continue;
                }
                let mut nxt = cur.clone();
                nxt[i] -= step;
                if !seen.insert(nxt.clone()) {
                    continue;
                }
                if nxt.iter().sum::<u32>() <= wcap {
                    out.push(nxt.into());
                } else {
                    stack.push(nxt);
                }
            }
        }
    }

    fn offer(&self, v: Vec<u32>, members: &mut IndexSet<Vector>, target: Option<&[u32]>, hit: &mut bool) {
        let mut fitted = Vec::new();
        if self.universe.contains(&v) {
            fitted.push(v.into());
        } else {
            self.fit(v, &mut fitted);
        }
        for f in fitted {
            if !self.admissible(&f) {
                continue;
            }
            if target == Some(&f[..]) {
                *hit = true;
            }
            members.insert(f);
        }
    }

    /// Closes `seeds` and stops early once `target` is reached.
    pub fn run(&self, seeds: &[Vector], target: Option<&[u32]>) -> Outcome {
        let mut members: IndexSet<Vector> = IndexSet::new();
        let mut hit = false;
        for s in seeds {
            self.offer(s.to_vec(), &mut members, target, &mut hit);
        }
        let slots = self.arith.slots();
        let mut i = 0;
        while i < members.len() && !hit {
            let m = members[i].clone();
            i += 1;
            if let Some((slot, floor)) = self.arith.saturation(&m) {
                let top = match self.universe.width_cap {
                    Some(w) => {
                        let rest: u32 = m.iter().sum::<u32>() - m[slot];
                        self.universe.per_cap.min(w.saturating_sub(rest))
                    }
                    None => self.universe.per_cap,
                };
                for c in floor..=top {
                    let mut v = m.to_vec();
                    v[slot] = c;
                    if v.iter().any(|&x| x > 0) {
                        self.offer(v, &mut members, target, &mut hit);
                    }
                }
            }
            for r in 0..slots {
                if m[r] == 0 {
                    continue;
                }
                for g in self.generators {
                    let mut v = m.to_vec();
                    v[r] -= 1;
                    for (s, &c) in g.iter().enumerate() {
                        if c > 0 {
                            if let Some(p) = self.arith.mul(r as u32 + 1, s as u32 + 1) {
                                v[p as usize - 1] += c;
                            }
                        }
                    }
                    self.offer(v, &mut members, target, &mut hit);
                }
                for r2 in r..slots {
                    if m[r2] == 0 || (r2 == r && m[r] < 2) {
                        continue;
                    }
                    let mut v = m.to_vec();
                    v[r] -= 1;
                    v[r2] -= 1;
                    if let Some(p) = self.arith.add(r as u32 + 1, r2 as u32 + 1) {
                        v[p as usize - 1] += 1;
                    }
                    self.offer(v, &mut members, target, &mut hit);
                }
            }
        }
        Outcome { members, hit }
    }
}
