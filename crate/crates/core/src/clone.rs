//! Monomial clones on a bounded universe of count vectors.

use serde::{Deserialize, Serialize};

use crate::closure::{Engine, MonoArith, Universe, Vector};
use crate::error::{Error, Result};
use crate::field::FieldParam;
use crate::monomial::Monomial;

/// Rough number of count vectors a default universe may hold.
const DEFAULT_BUDGET: f64 = 300_000.0;

/// Bounds of the finite universe a clone is computed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CapPolicy {
    /// Largest count stored for any single residue.
    pub per_residue_cap: u32,
    /// Largest width stored, if any.
    pub width_cap: Option<u32>,
    /// Extra regenerations used to test stability.
    pub stabilization_rounds: u32,
}

impl CapPolicy {
    /// `2(q-1) + (largest generator count)`, with a width cap when the plain box is too large.
    pub fn default_for(fp: &FieldParam, generators: &[Monomial]) -> Self {
        let max_count = generators.iter().flat_map(|g| g.counts().iter().copied()).max().unwrap_or(1);
        let max_width = generators.iter().map(Monomial::width).max().unwrap_or(1);
        let per = 2 * fp.n() + max_count;
        let box_size = (per as f64 + 1.0).powi(fp.n() as i32);
        let width_cap = if box_size <= DEFAULT_BUDGET {
            None
        } else {
            let mut w = max_width.max(2);
            while w < per && simplex_size(fp.n(), w + 1) <= DEFAULT_BUDGET {
                w += 1;
            }
            Some(w)
        };
        CapPolicy { per_residue_cap: per, width_cap, stabilization_rounds: 2 }
    }

    /// A plain per-residue cap, clamped up to the minimum `2(q-1)`.
    pub fn per_residue(fp: &FieldParam, cap: u32) -> Self {
        CapPolicy { per_residue_cap: cap.max(2 * fp.n()), width_cap: None, stabilization_rounds: 2 }
    }

    pub fn with_width(mut self, w: u32) -> Self {
        self.width_cap = Some(w);
        self
    }

    pub fn with_rounds(mut self, rounds: u32) -> Self {
        self.stabilization_rounds = rounds;
        self
    }

    pub fn validate(&self, fp: &FieldParam) -> Result<()> {
        if self.per_residue_cap < 2 * fp.n() {
            return Err(Error::CapTooSmall(format!(
                "per-residue cap {} is below 2(q-1) = {}",
                self.per_residue_cap,
                2 * fp.n()
            )));
        }
        Ok(())
    }

    /// The policy after `k` stabilization increments.
    pub fn grown(&self, fp: &FieldParam, k: u32) -> Self {
        CapPolicy {
            per_residue_cap: self.per_residue_cap + k * fp.n(),
            width_cap: self.width_cap.map(|w| w + k),
            stabilization_rounds: self.stabilization_rounds,
        }
    }

    pub fn covers(&self, m: &Monomial) -> bool {
        self.universe().contains(m.counts())
    }

    /// The smallest policy containing both universes.
    pub fn align(&self, other: &CapPolicy) -> CapPolicy {
        CapPolicy {
            per_residue_cap: self.per_residue_cap.max(other.per_residue_cap),
            width_cap: match (self.width_cap, other.width_cap) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            },
            stabilization_rounds: self.stabilization_rounds.max(other.stabilization_rounds),
        }
    }

    pub(crate) fn universe(&self) -> Universe {
        Universe { per_cap: self.per_residue_cap, width_cap: self.width_cap }
    }
}

/// Number of vectors in N^n with coordinate sum at most `w`.
fn simplex_size(n: u32, w: u32) -> f64 {
    let mut acc = 1.0;
    for i in 1..=n {
        acc *= (w + i) as f64 / i as f64;
    }
    acc
}

/// How far a yes/no answer about a capped clone can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    Exact,
    CapLimited,
}

impl Confidence {
    pub fn from_stable(stable: bool) -> Self {
        if stable {
            Confidence::Exact
        } else {
            Confidence::CapLimited
        }
    }

    pub fn and(self, other: Confidence) -> Confidence {
        Confidence::from_stable(self == Confidence::Exact && other == Confidence::Exact)
    }
}

/// A monomial clone restricted to a capped universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialClone {
    pub fp: FieldParam,
    pub generators: Vec<Monomial>,
    pub cap: CapPolicy,
    pub stable: bool,
    members: Vec<Monomial>,
}

impl MonomialClone {
    /// Assembles a clone from already closed data, e.g. a deserialized dump.
    pub fn from_parts(
        fp: FieldParam,
        generators: Vec<Monomial>,
        cap: CapPolicy,
        stable: bool,
        mut members: Vec<Monomial>,
    ) -> Self {
        members.sort();
        members.dedup();
        MonomialClone { fp, generators, cap, stable, members }
    }

    /// Members in canonical order.
    pub fn members(&self) -> &[Monomial] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Raw membership in the stored set.
    pub fn contains(&self, m: &Monomial) -> bool {
        self.members.binary_search(m).is_ok()
    }

    pub fn member(&self, m: &Monomial) -> Result<(bool, Confidence)> {
        if m.counts().len() != self.fp.n() as usize {
            return Err(Error::FieldMismatch(self.fp.q, 0));
        }
        if !self.cap.covers(m) {
            return Err(Error::CapTooSmall(format!("{m} lies outside the universe of this clone")));
        }
        Ok((self.contains(m), Confidence::from_stable(self.stable)))
    }

    pub fn confidence(&self) -> Confidence {
        Confidence::from_stable(self.stable)
    }

    /// Whether this is the projection clone.
    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    /// Members of width at most `w`.
    pub fn up_to_width(&self, w: u32) -> impl Iterator<Item = &Monomial> {
        self.members.iter().filter(move |m| m.width() <= w)
    }
}

fn check_inputs(generators: &[Monomial], fp: &FieldParam, cap: &CapPolicy) -> Result<()> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    cap.validate(fp)?;
    for g in generators {
        if g.counts().len() != fp.n() as usize {
            return Err(Error::InvalidMonomial(format!("{g} is not a monomial over q={}", fp.q)));
        }
        if !cap.covers(g) {
            return Err(Error::CapTooSmall(format!("generator {g} does not fit")));
        }
    }
    Ok(())
}

fn raw(ms: &[Monomial]) -> Vec<Vector> {
    ms.iter().map(|m| m.counts().to_vec().into_boxed_slice()).collect()
}

fn close(gens: &[Vector], fp: &FieldParam, cap: &CapPolicy, allowed: Option<Vec<bool>>, target: Option<&[u32]>) -> (Vec<Vector>, bool) {
    let arith = MonoArith { n: fp.n() };
    let engine = Engine { arith: &arith, universe: cap.universe(), generators: gens, allowed };
    let mut seeds = vec![Monomial::x1(fp).counts().to_vec().into_boxed_slice()];
    seeds.extend(gens.iter().cloned());
    let out = engine.run(&seeds, target);
    (out.members.into_iter().collect(), out.hit)
}

/// The least capped set containing the generators and x1 closed under substitution and identification.
///
/// The closure is computed one cap increment beyond `cap` and then restricted, so members on the
/// boundary of the universe are not lost to derivations that briefly leave it.
pub fn generate(generators: &[Monomial], fp: &FieldParam, cap: &CapPolicy) -> Result<MonomialClone> {
    check_inputs(generators, fp, cap)?;
    let gens = raw(generators);
    let u = cap.universe();
    let restricted = |k: u32| -> Vec<Monomial> {
        let (all, _) = close(&gens, fp, &cap.grown(fp, k), None, None);
        let mut v: Vec<Monomial> = all.into_iter().filter(|v| u.contains(v)).map(Monomial::from_raw).collect();
        v.sort();
        v
    };
    let base = restricted(1);
    let mut stable = cap.stabilization_rounds > 0;
    for k in 1..=cap.stabilization_rounds {
        if restricted(k + 1) != base {
            stable = false;
            break;
        }
    }
    Ok(MonomialClone { fp: fp.clone(), generators: generators.to_vec(), cap: *cap, stable, members: base })
}

/// [`generate`] with [`CapPolicy::default_for`].
pub fn generate_default(generators: &[Monomial], fp: &FieldParam) -> Result<MonomialClone> {
    generate(generators, fp, &CapPolicy::default_for(fp, generators))
}

/// Answer of a targeted membership search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub confidence: Confidence,
}

/// Decides `target ∈ ⟨generators⟩` without materializing more than needed.
///
/// A hit is a derivation and therefore exact. A miss is exact only when it persists
/// through every stabilization round.
pub fn member_query(target: &Monomial, generators: &[Monomial], fp: &FieldParam, cap: &CapPolicy) -> Result<Membership> {
    check_inputs(generators, fp, cap)?;
    if !cap.covers(target) {
        return Err(Error::CapTooSmall(format!("target {target} does not fit")));
    }
    let yes = Membership { member: true, confidence: Confidence::Exact };
    if *target == Monomial::x1(fp) || generators.contains(target) {
        return Ok(yes);
    }
    if separating_clone(target, generators, fp).is_some() {
        return Ok(Membership { member: false, confidence: Confidence::Exact });
    }
    let gens = raw(generators);
    let t = target.counts();
    let mut allowed = vec![false; fp.n() as usize];
    for m in generators.iter().chain([target, &Monomial::x1(fp)]) {
        for r in m.support() {
            allowed[r as usize - 1] = true;
        }
    }
    if allowed.iter().any(|a| !a) && close(&gens, fp, cap, Some(allowed), Some(t)).1 {
        return Ok(yes);
    }
    for k in 1..=cap.stabilization_rounds + 1 {
        if close(&gens, fp, &cap.grown(fp, k), None, Some(t)).1 {
            return Ok(yes);
        }
    }
    let confidence = Confidence::from_stable(cap.stabilization_rounds > 0);
    Ok(Membership { member: false, confidence })
}

/// A known clone with a closed-form predicate that holds for every generator but not for `target`.
pub fn separating_clone(target: &Monomial, generators: &[Monomial], fp: &FieldParam) -> Option<String> {
    let n = fp.n();
    for b in crate::field::divisors(n as u64).into_iter().map(|b| b as u32).filter(|&b| b > 1) {
        let inside = |m: &Monomial| m.exponent_sum() % b as u64 == 1;
        if generators.iter().all(inside) && !inside(target) {
            return Some(format!("exponent sum = 1 mod {b}"));
        }
    }
    let l = fp.primes.len();
    for mask in 1u32..(1 << l) {
        let d: Vec<usize> = (0..l).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        let inside = |m: &Monomial| crate::lattice::coatom_member(m, &d, fp).unwrap_or(false);
        if generators.iter().all(inside) && !inside(target) {
            return Some(format!("K_{d:?}"));
        }
    }
    None
}

/// `⟨a⟩ ⊆ ⟨b⟩` decided through the generators of `a`.
pub fn generated_subset(a: &[Monomial], b: &[Monomial], fp: &FieldParam, cap: &CapPolicy) -> Result<Membership> {
    let mut confidence = Confidence::Exact;
    for g in a {
        let r = member_query(g, b, fp, cap)?;
        if !r.member {
            return Ok(r);
        }
        confidence = confidence.and(r.confidence);
    }
    Ok(Membership { member: true, confidence })
}

fn same_field(c1: &MonomialClone, c2: &MonomialClone) -> Result<()> {
    if c1.fp != c2.fp {
        return Err(Error::FieldMismatch(c1.fp.q, c2.fp.q));
    }
    Ok(())
}

/// Regenerates `c` in the universe of `cap` unless it already lives there.
fn realign(c: &MonomialClone, cap: &CapPolicy) -> Result<MonomialClone> {
    if c.cap.universe() == cap.universe() {
        Ok(c.clone())
    } else {
        generate(&c.generators, &c.fp, cap)
    }
}

fn is_sorted_subset(a: &[Monomial], b: &[Monomial]) -> bool {
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

/// Member-set inclusion at the aligned cap.
pub fn subset(c1: &MonomialClone, c2: &MonomialClone) -> Result<(bool, Confidence)> {
    same_field(c1, c2)?;
    let cap = c1.cap.align(&c2.cap);
    let (a, b) = (realign(c1, &cap)?, realign(c2, &cap)?);
    Ok((is_sorted_subset(&a.members, &b.members), a.confidence().and(b.confidence())))
}

pub fn equal(c1: &MonomialClone, c2: &MonomialClone) -> Result<(bool, Confidence)> {
    same_field(c1, c2)?;
    let cap = c1.cap.align(&c2.cap);
    let (a, b) = (realign(c1, &cap)?, realign(c2, &cap)?);
    Ok((a.members == b.members, a.confidence().and(b.confidence())))
}

pub fn join(c1: &MonomialClone, c2: &MonomialClone) -> Result<MonomialClone> {
    same_field(c1, c2)?;
    let mut gens = c1.generators.clone();
    for g in &c2.generators {
        if !gens.contains(g) {
            gens.push(g.clone());
        }
    }
    generate(&gens, &c1.fp, &c1.cap.align(&c2.cap))
}

/// Intersection of member sets at the aligned cap. The members double as generators.
pub fn meet(c1: &MonomialClone, c2: &MonomialClone) -> Result<MonomialClone> {
    same_field(c1, c2)?;
    let cap = c1.cap.align(&c2.cap);
    let (a, b) = (realign(c1, &cap)?, realign(c2, &cap)?);
    let members: Vec<Monomial> = a.members.iter().filter(|m| b.contains(m)).cloned().collect();
    Ok(MonomialClone {
        fp: a.fp.clone(),
        generators: members.clone(),
        cap,
        stable: a.stable && b.stable,
        members,
    })
}

/// Membership in `{m : sum of exponents ≡ 1 (mod b)}`.
pub fn congruence_clone_member(m: &Monomial, b: u32, fp: &FieldParam) -> Result<bool> {
    if b == 0 || fp.n() % b != 0 {
        return Err(Error::Precondition(format!("{b} does not divide q-1 = {}", fp.n())));
    }
    Ok(m.exponent_sum() % b as u64 == 1 % b as u64)
}
