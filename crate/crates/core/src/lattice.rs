//! Lattice enumeration and the structural pieces of the monomial-clone lattice.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::clone::{
    generate, generated_subset, member_query, subset, CapPolicy, Confidence, Membership, MonomialClone,
};
use crate::closure::Universe;
use crate::error::{Error, Result};
use crate::field::{divisors, gcd, is_prime, FieldParam};
use crate::monomial::{all_monomials, Monomial};

/// Nodes ordered by size, covering edges, and the two extremes.
#[derive(Debug, Clone)]
pub struct HasseDiagram {
    pub fp: FieldParam,
    pub nodes: Vec<MonomialClone>,
    /// A small generating set per node.
    pub labels: Vec<Vec<Monomial>>,
    /// `(i, j)`: node `i` is covered by node `j`.
    pub edges: Vec<(usize, usize)>,
    pub bottom: usize,
    pub top: usize,
    /// Set when the lattice is known to be infinite and only part of it was explored.
    pub partial: bool,
    /// Generators of a strictly ascending chain when `partial` is set.
    pub chain_witness: Option<Vec<Monomial>>,
}

impl HasseDiagram {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index of the node with exactly this member set, if any.
    pub fn find(&self, c: &MonomialClone) -> Option<usize> {
        self.nodes.iter().position(|n| n.members() == c.members())
    }

    /// Nodes covering the bottom.
    pub fn minimal_nontrivial(&self) -> Vec<usize> {
        self.edges.iter().filter(|e| e.0 == self.bottom).map(|e| e.1).collect()
    }

    /// Nodes covered by the top.
    pub fn maximal_proper(&self) -> Vec<usize> {
        self.edges.iter().filter(|e| e.1 == self.top).map(|e| e.0).collect()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        sorted_subset(self.nodes[i].members(), self.nodes[j].members())
    }

    /// Whether all nodes were stable under cap growth.
    pub fn stable(&self) -> bool {
        self.nodes.iter().all(|n| n.stable)
    }
}

pub(crate) fn sorted_subset<T: Ord>(a: &[T], b: &[T]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Covering pairs of a partial order given by `leq`.
pub fn covers(len: usize, leq: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let rel: Vec<Vec<bool>> = (0..len).map(|i| (0..len).map(|j| i != j && leq(i, j)).collect()).collect();
    let mut out = Vec::new();
    for i in 0..len {
        for j in 0..len {
            if rel[i][j] && !(0..len).any(|k| rel[i][k] && rel[k][j]) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Every count vector of the universe except zero.
pub(crate) fn universe_monomials(fp: &FieldParam, cap: &CapPolicy) -> Vec<Monomial> {
    let u = cap.universe();
    let n = fp.n() as usize;
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, used: u32, u: &Universe, cur: &mut Vec<u32>, fp: &FieldParam, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            if used > 0 {
                out.push(Monomial::from_count_vec(cur.clone(), fp).expect("nonzero"));
            }
            return;
        }
        let room = u.width_cap.map_or(u.per_cap, |w| u.per_cap.min(w - used));
        for c in 0..=room {
            cur[i] = c;
            rec(i + 1, used + c, u, cur, fp, out);
        }
        cur[i] = 0;
    }
    rec(0, 0, &u, &mut cur, fp, &mut out);
    out.sort();
    out
}

/// Join/meet fixpoint over principal seeds, with labels and covers.
struct Explorer<'a> {
    fp: &'a FieldParam,
    cap: CapPolicy,
    nodes: Vec<MonomialClone>,
    labels: Vec<Vec<Monomial>>,
    index: HashMap<Vec<Monomial>, usize>,
    principal: HashMap<Monomial, MonomialClone>,
    label_width: u32,
}

impl<'a> Explorer<'a> {
    fn new(fp: &'a FieldParam, cap: CapPolicy, label_width: u32) -> Self {
        Explorer {
            fp,
            cap,
            nodes: Vec::new(),
            labels: Vec::new(),
            index: HashMap::new(),
            principal: HashMap::new(),
            label_width,
        }
    }

    fn principal(&mut self, m: &Monomial) -> Result<&MonomialClone> {
        if !self.principal.contains_key(m) {
            let c = generate(std::slice::from_ref(m), self.fp, &self.cap)?;
            self.principal.insert(m.clone(), c);
        }
        Ok(&self.principal[m])
    }

    fn add(&mut self, c: MonomialClone, hint: Option<Vec<Monomial>>) -> Result<bool> {
        if self.index.contains_key(c.members()) {
            return Ok(false);
        }
        let label = match hint {
            Some(h) if h.len() <= 1 => h,
            _ => self.label(&c)?,
        };
        self.index.insert(c.members().to_vec(), self.nodes.len());
        self.nodes.push(c);
        self.labels.push(label);
        Ok(true)
    }

    /// A smallest generating set among low-width members, falling back to a greedy cover.
    fn label(&mut self, c: &MonomialClone) -> Result<Vec<Monomial>> {
        let target = c.len();
        let mut cands: Vec<Monomial> = c.up_to_width(self.label_width).cloned().collect();
        cands.sort_by_key(|m| (m.width(), m.clone()));
        // drop candidates whose principal clone repeats an earlier one
        let mut seen: HashMap<Vec<Monomial>, ()> = HashMap::new();
        let mut distinct = Vec::new();
        for m in cands {
            let p = self.principal(&m)?;
            if p.len() == target {
                return Ok(vec![m]);
            }
            if seen.insert(p.members().to_vec(), ()).is_none() {
                distinct.push(m);
            }
        }
        // maximal principal subclones suffice for pairs
        let maximal: Vec<Monomial> = distinct
            .iter()
            .filter(|a| {
                !distinct.iter().any(|b| {
                    b != *a && {
                        let pa = &self.principal[*a];
                        let pb = &self.principal[b];
                        pa.len() < pb.len() && sorted_subset(pa.members(), pb.members())
                    }
                })
            })
            .cloned()
            .collect();
        for i in 0..maximal.len() {
            for j in i + 1..maximal.len() {
                let g = vec![maximal[i].clone(), maximal[j].clone()];
                if generate(&g, self.fp, &self.cap.with_rounds(0))?.len() == target {
                    return self.simplify(g, &distinct, target);
                }
            }
        }
        let mut gens: Vec<Monomial> = Vec::new();
        let mut have = generate(&[Monomial::x1(self.fp)], self.fp, &self.cap.with_rounds(0))?;
        let pool: Vec<Monomial> = if maximal.is_empty() { c.members().to_vec() } else { maximal };
        for m in pool.iter().chain(c.members()) {
            if have.len() == target {
                break;
            }
            if !have.contains(m) {
                gens.push(m.clone());
                have = generate(&gens, self.fp, &self.cap.with_rounds(0))?;
            }
        }
        let mut i = 0;
        while i < gens.len() && gens.len() > 1 {
            let mut fewer = gens.clone();
            fewer.remove(i);
            if generate(&fewer, self.fp, &self.cap.with_rounds(0))?.len() == target {
                gens = fewer;
            } else {
                i += 1;
            }
        }
        self.simplify(gens, &distinct, target)
    }

    /// Swaps each generator for the smallest candidate that keeps the generated clone.
    fn simplify(&self, mut gens: Vec<Monomial>, cands: &[Monomial], target: usize) -> Result<Vec<Monomial>> {
        for i in 0..gens.len() {
            let key = |m: &Monomial| (m.width(), m.clone());
            for m in cands.iter().filter(|m| key(m) < key(&gens[i]) && !gens.contains(m)) {
                let mut trial = gens.clone();
                trial[i] = m.clone();
                if generate(&trial, self.fp, &self.cap.with_rounds(0))?.len() == target {
                    gens = trial;
                    break;
                }
            }
        }
        gens.sort_by_key(|m| (m.width(), m.clone()));
        Ok(gens)
    }

    fn seed(&mut self, m: &Monomial) -> Result<()> {
        let c = self.principal(m)?.clone();
        self.add(c, Some(vec![m.clone()]))?;
        Ok(())
    }

    fn fixpoint(&mut self) -> Result<()> {
        let mut done = 0;
        while done < self.nodes.len() {
            let j = done;
            for i in 0..j {
                let mut gens = self.labels[i].clone();
                gens.extend(self.labels[j].iter().cloned());
                gens.sort();
                gens.dedup();
                let up = generate(&gens, self.fp, &self.cap)?;
                self.add(up, None)?;
                let members: Vec<Monomial> =
                    self.nodes[i].members().iter().filter(|m| self.nodes[j].contains(m)).cloned().collect();
                if !self.index.contains_key(&members) {
                    let down = MonomialClone::from_parts(
                        self.fp.clone(),
                        members.clone(),
                        self.cap,
                        self.nodes[i].stable && self.nodes[j].stable,
                        members,
                    );
                    self.add(down, None)?;
                }
            }
            done += 1;
        }
        Ok(())
    }

    fn finish(mut self) -> Result<HasseDiagram> {
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (&self.nodes[a], &self.nodes[b]);
            (x.len(), x.members()).cmp(&(y.len(), y.members()))
        });
        let mut nodes = Vec::new();
        let mut labels = Vec::new();
        for &i in &order {
            let mut c = self.nodes[i].clone();
            c.generators = self.labels[i].clone();
            nodes.push(c);
            labels.push(std::mem::take(&mut self.labels[i]));
        }
        let edges = covers(nodes.len(), |i, j| sorted_subset(nodes[i].members(), nodes[j].members()));
        let x1 = Monomial::x1(self.fp);
        let bottom = nodes.iter().position(|n| n.members() == [x1.clone()]).unwrap_or(0);
        let top = nodes.len() - 1;
        Ok(HasseDiagram {
            fp: self.fp.clone(),
            nodes,
            labels,
            edges,
            bottom,
            top,
            partial: !self.fp.squarefree,
            chain_witness: None,
        })
    }
}

/// Default cap for enumerations seeded with width ≤ `width_bound`.
pub fn enumeration_cap(fp: &FieldParam, width_bound: u32) -> CapPolicy {
    CapPolicy::default_for(fp, &[Monomial::all_ones(width_bound.max(2), fp)])
}

/// All clones reachable by join and meet from principal clones of width ≤ `width_bound`.
pub fn enumerate_lattice(fp: &FieldParam, width_bound: u32, cap: Option<CapPolicy>) -> Result<HasseDiagram> {
    let cap = cap.unwrap_or_else(|| enumeration_cap(fp, width_bound));
    let mut ex = Explorer::new(fp, cap, width_bound.max(2));
    ex.seed(&Monomial::x1(fp))?;
    ex.seed(&Monomial::all_ones(2, fp))?;
    for m in all_monomials(fp, width_bound) {
        ex.seed(&m)?;
    }
    ex.fixpoint()?;
    let mut d = ex.finish()?;
    if d.partial {
        d.chain_witness = chain_generators(fp, 3).ok();
    }
    Ok(d)
}

/// Closed-form atom generators: x1 x2^{q-1} and the qualifying powers x1^s.
pub fn atom_generators(fp: &FieldParam) -> Vec<Monomial> {
    let n = fp.n() as u64;
    let mut out = vec![Monomial::from_pairs(&[(1, 1), (fp.n(), 1)], fp).expect("valid")];
    for s in 2..=n {
        let idem = fp.reduce(s * s) as u64 == s;
        let prime_order = (2..=n).filter(|&p| is_prime(p)).any(|p| mod_pow(s, p, n) == 1 % n);
        if idem || prime_order {
            out.push(Monomial::power(s as u32, fp));
        }
    }
    out
}

fn mod_pow(b: u64, e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    let mut b = b % m;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// The atoms, each generated at its default cap.
pub fn atoms(fp: &FieldParam) -> Result<Vec<MonomialClone>> {
    atom_generators(fp).into_iter().map(|g| generate(&[g.clone()], fp, &CapPolicy::default_for(fp, &[g]))).collect()
}

/// Whether every non-projection member of `c` generates all of `c`.
pub fn is_atom_by_search(c: &MonomialClone) -> Result<bool> {
    if c.is_trivial() {
        return Ok(false);
    }
    let x1 = Monomial::x1(&c.fp);
    for m in c.members().iter().filter(|m| **m != x1) {
        let r = generated_subset(&c.generators, std::slice::from_ref(m), &c.fp, &c.cap)?;
        if !r.member {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A coatom of the lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoatomDescriptor {
    /// ⟨x1 ⋯ x_{1+P}⟩ for a prime P dividing q-1.
    Interval { prime: u32 },
    /// K_D for a nonempty set of prime indices (1-based), with T the product of those primes.
    Kd { indices: Vec<usize>, t: u32 },
}

pub fn coatoms(fp: &FieldParam) -> Result<Vec<CoatomDescriptor>> {
    if fp.q == 2 {
        return Err(Error::Precondition("q = 2 has no coatoms below ∇ other than Δ".into()));
    }
    let l = fp.primes.len();
    let mut out: Vec<CoatomDescriptor> = fp.primes.iter().map(|&p| CoatomDescriptor::Interval { prime: p }).collect();
    for mask in 1u32..(1 << l) {
        let indices: Vec<usize> = (0..l).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        let t = indices.iter().map(|&i| fp.primes[i - 1]).product();
        out.push(CoatomDescriptor::Kd { indices, t });
    }
    Ok(out)
}

/// Membership in K_D: some prime of D divides every exponent, or all exponents but one are divisible by T.
pub fn coatom_member(m: &Monomial, indices: &[usize], fp: &FieldParam) -> Result<bool> {
    if indices.is_empty() || indices.iter().any(|&i| i == 0 || i > fp.primes.len()) {
        return Err(Error::Precondition(format!("{indices:?} is not a nonempty set of prime indices")));
    }
    let ex = m.exponents();
    let primes: Vec<u32> = indices.iter().map(|&i| fp.primes[i - 1]).collect();
    if primes.iter().any(|p| ex.iter().all(|e| e % p == 0)) {
        return Ok(true);
    }
    let t: u32 = primes.iter().product();
    Ok(ex.iter().filter(|e| *e % t == 0).count() + 1 >= ex.len())
}

/// Generators of K_D that fit in `cap`.
pub fn kd_generators(indices: &[usize], fp: &FieldParam, cap: &CapPolicy) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = (1..=fp.n()).map(|t| Monomial::power(t, fp)).collect();
    for &i in indices {
        let p = fp.primes[i - 1];
        let top = cap.width_cap.map_or(cap.per_residue_cap, |w| w.min(cap.per_residue_cap));
        out.extend((2..=top).map(|k| Monomial::uniform(p, k, fp)));
    }
    let t: u32 = indices.iter().map(|&i| fp.primes[i - 1]).product();
    out.push(Monomial::from_pairs(&[(1, 1), (t, 1)], fp).expect("valid"));
    out.sort();
    out.dedup();
    out
}

/// Materializes a coatom in the universe of `cap`.
pub fn coatom_clone(d: &CoatomDescriptor, fp: &FieldParam, cap: &CapPolicy) -> Result<MonomialClone> {
    match d {
        CoatomDescriptor::Interval { prime } => generate(&[Monomial::all_ones(1 + prime, fp)], fp, cap),
        CoatomDescriptor::Kd { indices, .. } => {
            let mut members = Vec::new();
            for m in universe_monomials(fp, cap) {
                if coatom_member(&m, indices, fp)? {
                    members.push(m);
                }
            }
            Ok(MonomialClone::from_parts(fp.clone(), kd_generators(indices, fp, cap), *cap, true, members))
        }
    }
}

/// Inclusions among the clones ⟨x1 ⋯ x_{1+a}⟩ for the divisors a of q-1.
#[derive(Debug, Clone)]
pub struct DivisorInterval {
    pub fp: FieldParam,
    pub divisors: Vec<u32>,
    /// `generators[i]` = x1 ⋯ x_{1+divisors[i]}.
    pub generators: Vec<Monomial>,
    /// `included[i][j]`: whether C(divisors[i]) ⊆ C(divisors[j]).
    pub included: Vec<Vec<Membership>>,
}

impl DivisorInterval {
    /// Whether inclusion coincides with reverse divisibility on every pair.
    pub fn anti_isomorphic(&self) -> bool {
        let d = &self.divisors;
        (0..d.len()).all(|i| (0..d.len()).all(|j| self.included[i][j].member == (d[i] % d[j] == 0)))
    }

    pub fn confidence(&self) -> Confidence {
        self.included.iter().flatten().fold(Confidence::Exact, |c, m| c.and(m.confidence))
    }

    /// Materializes C(a) at its default cap.
    pub fn clone_of(&self, a: u32) -> Result<MonomialClone> {
        let g = Monomial::all_ones(a + 1, &self.fp);
        generate(&[g.clone()], &self.fp, &CapPolicy::default_for(&self.fp, &[g]))
    }
}

pub fn divisor_interval(fp: &FieldParam) -> Result<DivisorInterval> {
    if fp.q < 3 {
        return Err(Error::Precondition("the divisor interval needs q >= 3".into()));
    }
    let ds = fp.divisors();
    let gens: Vec<Monomial> = ds.iter().map(|&a| Monomial::all_ones(a + 1, fp)).collect();
    let mut included = Vec::new();
    for i in 0..ds.len() {
        let mut row = Vec::new();
        for j in 0..ds.len() {
            let pair = [gens[i].clone(), gens[j].clone()];
            let cap = CapPolicy::default_for(fp, &pair).with_rounds(1);
            row.push(generated_subset(&pair[..1], &pair[1..], fp, &cap)?);
        }
        included.push(row);
    }
    Ok(DivisorInterval { fp: fp.clone(), divisors: ds, generators: gens, included })
}

/// Generators f_0, …, f_{n-1} of the ascending chain, f_i = ∏_{j ≤ k·i+1} x_j^d.
pub fn chain_generators(fp: &FieldParam, n: u32) -> Result<Vec<Monomial>> {
    let k = fp.least_square_divisor().ok_or(Error::SquareFree(fp.n()))?;
    let d = fp.n() / k;
    Ok((0..n).map(|i| Monomial::uniform(d, k * i + 1, fp)).collect())
}

/// The chain clones together with a strictness verdict for each step.
#[derive(Debug, Clone)]
pub struct AscendingChain {
    pub clones: Vec<MonomialClone>,
    /// `strict[i]`: ⟨f_i⟩ ⊊ ⟨f_{i+1}⟩.
    pub strict: Vec<bool>,
}

pub fn ascending_chain(fp: &FieldParam, n: u32) -> Result<AscendingChain> {
    let gens = chain_generators(fp, n + 1)?;
    let cap = CapPolicy::default_for(fp, &gens);
    let clones = gens[..n as usize]
        .iter()
        .map(|g| generate(std::slice::from_ref(g), fp, &cap))
        .collect::<Result<Vec<_>>>()?;
    let mut strict = Vec::new();
    for i in 0..clones.len().saturating_sub(1) {
        let (up, _) = subset(&clones[i], &clones[i + 1])?;
        let (down, _) = subset(&clones[i + 1], &clones[i])?;
        strict.push(up && !down && clones[i + 1].contains(&gens[i]) && !clones[i].contains(&gens[i + 1]));
    }
    Ok(AscendingChain { clones, strict })
}

/// Whether the lattice is finite, with a chain witness when it is not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finiteness {
    pub finite: bool,
    pub witness: Option<Vec<Monomial>>,
}

pub fn finiteness(fp: &FieldParam) -> Result<Finiteness> {
    if fp.squarefree {
        return Ok(Finiteness { finite: true, witness: None });
    }
    let chain = ascending_chain(fp, 3)?;
    if chain.strict.iter().all(|&s| s) {
        Ok(Finiteness { finite: false, witness: Some(chain.clones.iter().map(|c| c.generators[0].clone()).collect()) })
    } else {
        Err(Error::Precondition("ascending chain failed to separate at the chosen cap".into()))
    }
}

/// Composition m1(m2(x…), m2(x…), …) as a single monomial.
pub fn single_generator(m1: &Monomial, m2: &Monomial, fp: &FieldParam) -> Result<Monomial> {
    for m in [m1, m2] {
        if !m.is_idempotent(fp) {
            return Err(Error::Precondition(format!("{m} is not idempotent")));
        }
    }
    let mut v = vec![0u32; fp.n() as usize];
    for a in m1.support() {
        for b in m2.support() {
            v[fp.reduce(a as u64 * b as u64) as usize - 1] += m1.count(a) * m2.count(b);
        }
    }
    Monomial::from_count_vec(v, fp)
}

/// The interval [Δ, ⟨x1 ⋯ x_q⟩] from idempotent seeds of width ≤ `width_bound`.
pub fn idempotent_interval(fp: &FieldParam, width_bound: u32, cap: Option<CapPolicy>) -> Result<HasseDiagram> {
    let cap = cap.unwrap_or_else(|| enumeration_cap(fp, width_bound.max(fp.q)));
    let mut ex = Explorer::new(fp, cap, width_bound.max(2));
    ex.seed(&Monomial::x1(fp))?;
    ex.seed(&Monomial::all_ones(fp.q, fp))?;
    for m in all_monomials(fp, width_bound).into_iter().filter(|m| m.is_idempotent(fp)) {
        ex.seed(&m)?;
    }
    ex.fixpoint()?;
    let mut d = ex.finish()?;
    d.partial = false;
    Ok(d)
}

/// Whether every node other than the bottom contains x1 x2^{q-1}.
pub fn nontrivial_nodes_contain_x1xq(d: &HasseDiagram) -> bool {
    let w = Monomial::from_pairs(&[(1, 1), (d.fp.n(), 1)], &d.fp).expect("valid");
    d.nodes.iter().enumerate().all(|(i, n)| i == d.bottom || n.contains(&w))
}

/// Checks ⟨x1⋯x_{1+k}⟩ ∨ ⟨x1⋯x_{1+l}⟩ = ⟨x1⋯x_{1+gcd(k,l)}⟩ through generator membership.
pub fn gcd_join_holds(fp: &FieldParam, k: u32, l: u32) -> Result<bool> {
    let g = gcd(k as u64, l as u64) as u32;
    let pair = [Monomial::all_ones(1 + k, fp), Monomial::all_ones(1 + l, fp)];
    let meet = [Monomial::all_ones(1 + g, fp)];
    let mut all = pair.to_vec();
    all.extend(meet.iter().cloned());
    let cap = CapPolicy::default_for(fp, &all).with_rounds(0);
    Ok(generated_subset(&meet, &pair, fp, &cap)?.member && generated_subset(&pair, &meet, fp, &cap)?.member)
}

/// Divisors of q-1 as u32, exposed for callers iterating k, l.
pub fn divisors_of_order(fp: &FieldParam) -> Vec<u32> {
    divisors(fp.n() as u64).into_iter().map(|d| d as u32).collect()
}

/// Pairwise targeted membership, used where materializing the clones would be too large.
pub fn principal_member(target: &Monomial, generator: &Monomial, fp: &FieldParam) -> Result<Membership> {
    let both = [target.clone(), generator.clone()];
    member_query(target, std::slice::from_ref(generator), fp, &CapPolicy::default_for(fp, &both))
}
