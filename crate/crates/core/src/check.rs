//! The property battery: every structural law the library relies on, checked on concrete fields.
//!
//! Each property has a scope of field sizes it is meant for; outside that scope it is skipped.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::clone::{generate, generated_subset, member_query, subset, CapPolicy, MonomialClone};
use crate::error::Result;
use crate::field::{gcd, reduce_exponent, FieldParam};
use crate::lattice::{
    atoms, coatom_clone, coatom_member, coatoms, covers, divisors_of_order, enumerate_lattice, enumeration_cap,
    gcd_join_holds, idempotent_interval, nontrivial_nodes_contain_x1xq, single_generator, universe_monomials,
    CoatomDescriptor, HasseDiagram,
};
use crate::minorset::{embedding_check, is_downward_closed, minor_m, phi_minor, sample_order};
use crate::monomial::{all_monomials, Elem, Monomial};
use crate::oracle::{clone_tables, generator_table, induced_tables, monomial_table};
use crate::semiaffine::{enumerate_semiaffine_lattice, fiber, phi_affine, semi_affine_holds};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skip => "SKIP",
        };
        write!(f, "{tag} {}", self.name)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Names of all properties, in the order they are run.
pub const PROPERTIES: &[&str] = &[
    "reduceIdempotent",
    "identifyWidth",
    "evaluateOracle",
    "identifyEvaluate",
    "closureIdempotent",
    "closureMonotone",
    "cutQ1",
    "q1Allq1",
    "combRule",
    "2var1x1xq",
    "twoInvThenx1xq",
    "x1xqxathenx1xa",
    "x1xkThenAllK",
    "maxIdClone",
    "3gcdx1xq",
    "tableOracle",
    "hasseCovers",
    "atomsAgree",
    "coatomsAgree",
    "coatomCount",
    "xkxlgcd",
    "addCo",
    "smIdClone",
    "getOneGen",
    "phiMonotone",
    "phiSurjective",
    "semiAffine",
    "fiberPartition",
    "qMinorValid",
    "goToDownCl",
    "wellPO",
    "antichainSample",
];

fn scope(name: &str, q: u32) -> bool {
    match name {
        "reduceIdempotent" => true,
        "identifyWidth" | "evaluateOracle" | "identifyEvaluate" => q <= 5,
        "closureIdempotent" | "closureMonotone" => q <= 5,
        "cutQ1" | "q1Allq1" | "combRule" | "2var1x1xq" | "twoInvThenx1xq" | "x1xqxathenx1xa" => q <= 5,
        "x1xkThenAllK" | "maxIdClone" => q <= 5,
        "3gcdx1xq" => q == 5 || q == 7,
        "tableOracle" | "hasseCovers" | "atomsAgree" | "coatomsAgree" => q == 3 || q == 4,
        "coatomCount" => [3, 4, 5, 7, 8, 13].contains(&q),
        "xkxlgcd" => [5, 7, 13].contains(&q),
        "addCo" => q == 7 || q == 13,
        "smIdClone" | "getOneGen" => (3..=5).contains(&q),
        "phiMonotone" | "phiSurjective" | "semiAffine" | "fiberPartition" => q == 3 || q == 4,
        "qMinorValid" | "goToDownCl" | "wellPO" => q == 3 || q == 4,
        "antichainSample" => q == 5,
        _ => false,
    }
}

/// Lazily built data shared by several properties.
struct Ctx {
    fp: FieldParam,
    lattice: Option<HasseDiagram>,
    principal: Option<Vec<MonomialClone>>,
}

impl Ctx {
    fn lattice(&mut self) -> Result<&HasseDiagram> {
        if self.lattice.is_none() {
            self.lattice = Some(enumerate_lattice(&self.fp, self.fp.q, None)?);
        }
        Ok(self.lattice.as_ref().expect("set"))
    }

    /// Clones to test closure laws on: the enumerated lattice where it is small, principal clones otherwise.
    fn sample_clones(&mut self) -> Result<Vec<MonomialClone>> {
        if self.fp.q <= 4 {
            return Ok(self.lattice()?.nodes.clone());
        }
        if self.principal.is_none() {
            let cap = enumeration_cap(&self.fp, 2).with_rounds(0);
            let cs = all_monomials(&self.fp, 2)
                .into_iter()
                .map(|m| generate(&[m], &self.fp, &cap))
                .collect::<Result<Vec<_>>>()?;
            self.principal = Some(cs);
        }
        Ok(self.principal.clone().expect("set"))
    }
}

type Verdict = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs every property in scope for `fp`.
pub fn run_battery(fp: &FieldParam) -> Vec<PropertyResult> {
    run_selected(fp, PROPERTIES)
}

pub fn run_selected(fp: &FieldParam, names: &[&'static str]) -> Vec<PropertyResult> {
    let mut ctx = Ctx { fp: fp.clone(), lattice: None, principal: None };
    names
        .iter()
        .map(|&name| {
            if !scope(name, fp.q) {
                return PropertyResult { name, outcome: Outcome::Skip, detail: format!("not run for q={}", fp.q) };
            }
            match run_one(name, &mut ctx) {
                Ok(Ok(detail)) => PropertyResult { name, outcome: Outcome::Pass, detail },
                Ok(Err(detail)) => PropertyResult { name, outcome: Outcome::Fail, detail },
                Err(e) => PropertyResult { name, outcome: Outcome::Fail, detail: format!("error: {e}") },
            }
        })
        .collect()
}

fn run_one(name: &str, ctx: &mut Ctx) -> Result<Verdict> {
    let fp = ctx.fp.clone();
    let fp = &fp;
    Ok(match name {
        "reduceIdempotent" => reduce_idempotent(fp),
        "identifyWidth" => identify_width(fp)?,
        "evaluateOracle" => evaluate_oracle(fp)?,
        "identifyEvaluate" => identify_evaluate(fp)?,
        "closureIdempotent" => closure_idempotent(fp, &ctx.sample_clones()?)?,
        "closureMonotone" => closure_monotone(fp)?,
        "cutQ1" => cut_q1(fp, &ctx.sample_clones()?),
        "q1Allq1" => q1_all_q1(fp, &ctx.sample_clones()?),
        "combRule" => comb_rule(fp, &ctx.sample_clones()?),
        "2var1x1xq" => implies_top(fp, &ctx.sample_clones()?, |m| m.count(1) >= 2),
        "twoInvThenx1xq" => {
            let n = fp.n() as u64;
            implies_top(fp, &ctx.sample_clones()?, |m| {
                m.exponents().iter().filter(|&&e| gcd(e as u64, n) == 1).count() >= 2
            })
        }
        "x1xqxathenx1xa" => x1xq_xa(fp, &ctx.sample_clones()?),
        "x1xkThenAllK" => x1xk_all(fp)?,
        "maxIdClone" => max_id_clone(fp)?,
        "3gcdx1xq" => three_gcd(fp)?,
        "tableOracle" => table_oracle(fp)?,
        "hasseCovers" => hasse_covers(ctx.lattice()?),
        "atomsAgree" => atoms_agree(fp, ctx.lattice()?)?,
        "coatomsAgree" => coatoms_agree(fp, ctx.lattice()?)?,
        "coatomCount" => coatom_count(fp)?,
        "xkxlgcd" => xkxl_gcd(fp)?,
        "addCo" => add_co(fp)?,
        "smIdClone" => sm_id_clone(fp)?,
        "getOneGen" => get_one_gen(fp)?,
        "phiMonotone" => phi_monotone(ctx.lattice()?),
        "phiSurjective" => phi_surjective(ctx.lattice()?),
        "semiAffine" => semi_affine(fp),
        "fiberPartition" => fiber_partition(ctx.lattice()?)?,
        "qMinorValid" => q_minor_valid(ctx.lattice()?)?,
        "goToDownCl" => go_to_down_cl(ctx.lattice()?)?,
        "wellPO" => well_po(ctx.lattice()?)?,
        "antichainSample" => antichain_sample(fp)?,
        _ => Err(format!("unknown property {name}")),
    })
}

fn label(ms: &[Monomial]) -> String {
    ms.iter().map(Monomial::to_string).collect::<Vec<_>>().join(", ")
}

fn reduce_idempotent(fp: &FieldParam) -> Verdict {
    for a in 0..=10 * fp.q as u64 {
        let r = reduce_exponent(a, fp);
        ensure(reduce_exponent(r as u64, fp) == r, || format!("reduce({a}) = {r} is not fixed"))?;
        ensure((r == 0) == (a == 0), || format!("reduce({a}) = {r}"))?;
    }
    Ok(format!("a <= {}", 10 * fp.q))
}

fn identify_width(fp: &FieldParam) -> Result<Verdict> {
    let ms = all_monomials(fp, 4);
    for m in &ms {
        for r1 in m.support() {
            for r2 in m.support().filter(|&r2| r2 > r1 || (r2 == r1 && m.count(r1) >= 2)) {
                if m.width() >= 2 {
                    let k = m.identify(r1, r2, fp)?;
                    if let Err(e) = ensure(k.width() + 1 == m.width(), || format!("identify({m}, {r1}, {r2}) = {k}")) {
                        return Ok(Err(e));
                    }
                }
            }
        }
    }
    Ok(Ok(format!("{} monomials of width <= 4", ms.len())))
}

fn all_points(q: usize, arity: usize) -> impl Iterator<Item = Vec<Elem>> {
    (0..q.pow(arity as u32)).map(move |mut i| {
        let mut p = vec![Elem::NegInf; arity];
        for slot in p.iter_mut().rev() {
            let d = i % q;
            i /= q;
            *slot = if d == 0 { Elem::NegInf } else { Elem::Log(d as u32 - 1) };
        }
        p
    })
}

fn encode(e: Elem) -> u8 {
    match e {
        Elem::NegInf => 0,
        Elem::Log(l) => l as u8 + 1,
    }
}

fn evaluate_oracle(fp: &FieldParam) -> Result<Verdict> {
    let q = fp.q as usize;
    let ms = all_monomials(fp, 3);
    for m in &ms {
        let ex: Vec<(usize, u64)> = m.exponents().into_iter().enumerate().map(|(i, e)| (i, e as u64)).collect();
        let want = monomial_table(&ex, q, ex.len());
        let got: Vec<u8> =
            all_points(q, ex.len()).map(|p| m.evaluate(&p, fp).map(encode)).collect::<Result<Vec<_>>>()?;
        if want != got {
            return Ok(Err(format!("{m}: tables differ")));
        }
    }
    Ok(Ok(format!("{} monomials of width <= 3", ms.len())))
}

fn identify_evaluate(fp: &FieldParam) -> Result<Verdict> {
    let q = fp.q as usize;
    for m in all_monomials(fp, 3).into_iter().filter(|m| m.width() >= 2) {
        let ex = m.exponents();
        for i in 0..ex.len() {
            for j in i + 1..ex.len() {
                let k = m.identify(ex[i], ex[j], fp)?;
                // k's exponents: the rest of ex plus the merged one, located by sorted order
                let merged = fp.reduce(ex[i] as u64 + ex[j] as u64);
                for p in all_points(q, ex.len() - 1) {
                    // p[0] goes to the merged variable, the others to the remaining exponents in order
                    let rest: Vec<usize> = (0..ex.len()).filter(|&t| t != i && t != j).collect();
                    let mut full = vec![Elem::NegInf; ex.len()];
                    full[i] = p[0];
                    full[j] = p[0];
                    for (slot, &t) in rest.iter().enumerate() {
                        full[t] = p[slot + 1];
                    }
                    let mut pairs: Vec<(u32, Elem)> = vec![(merged, p[0])];
                    pairs.extend(rest.iter().enumerate().map(|(slot, &t)| (ex[t], p[slot + 1])));
                    pairs.sort_by_key(|x| x.0);
                    let kp: Vec<Elem> = pairs.into_iter().map(|x| x.1).collect();
                    if k.evaluate(&kp, fp)? != m.evaluate(&full, fp)? {
                        return Ok(Err(format!("identify({m}, {}, {}) disagrees at {p:?}", ex[i], ex[j])));
                    }
                }
            }
        }
    }
    Ok(Ok("width <= 3".into()))
}

fn closure_idempotent(fp: &FieldParam, cs: &[MonomialClone]) -> Result<Verdict> {
    for c in cs.iter().take(12) {
        let mut gens = c.generators.clone();
        gens.extend(c.up_to_width(3).take(20).cloned());
        let again = generate(&gens, fp, &c.cap.with_rounds(0))?;
        if again.members() != c.members() {
            return Ok(Err(format!("<{}> changes when closed again", label(&c.generators))));
        }
    }
    Ok(Ok(format!("{} clones", cs.len().min(12))))
}

fn closure_monotone(fp: &FieldParam) -> Result<Verdict> {
    let ms = all_monomials(fp, 2);
    let extra = all_monomials(fp, if fp.q <= 4 { 2 } else { 1 });
    let cap = enumeration_cap(fp, 2).with_rounds(0);
    let mut checked = 0;
    for a in &ms {
        let small = generate(std::slice::from_ref(a), fp, &cap)?;
        for b in &extra {
            let big = generate(&[a.clone(), b.clone()], fp, &cap)?;
            if !subset(&small, &big)?.0 {
                return Ok(Err(format!("<{a}> is not inside <{a}, {b}>")));
            }
            checked += 1;
        }
    }
    Ok(Ok(format!("{checked} pairs")))
}

/// Sub-multisets of a count vector, as count vectors.
fn sub_multisets(counts: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &c in counts {
        out = out.into_iter().flat_map(|p| (0..=c).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out
}

fn cut_q1(fp: &FieldParam, cs: &[MonomialClone]) -> Verdict {
    let n = fp.n() as u64;
    let mut checked = 0usize;
    for c in cs {
        for m in c.members().iter().filter(|m| (2..=6).contains(&m.width())) {
            for d in sub_multisets(m.counts()) {
                let size: u32 = d.iter().sum();
                let sum: u64 = d.iter().enumerate().map(|(i, &k)| (i as u64 + 1) * k as u64).sum();
                if size == 0 || size >= m.width() || sum % n != 0 {
                    continue;
                }
                let rest: Vec<u32> = m.counts().iter().zip(&d).map(|(a, b)| a - b).collect();
                let r = Monomial::from_count_vec(rest, fp).expect("nonempty");
                checked += 1;
                ensure(c.contains(&r), || format!("{m} in <{}> but {r} is not", label(&c.generators)))?;
            }
        }
    }
    Ok(format!("{checked} reductions in {} clones", cs.len()))
}

fn q1_all_q1(fp: &FieldParam, cs: &[MonomialClone]) -> Verdict {
    let n = fp.n();
    let mut checked = 0usize;
    for c in cs {
        for m in c.members().iter().filter(|m| m.count(n) >= 1 && m.width() > m.count(n)) {
            let mut v = m.counts().to_vec();
            for k in 0.. {
                v[n as usize - 1] = k;
                let r = Monomial::from_count_vec(v.clone(), fp).expect("nonempty");
                if !c.cap.covers(&r) {
                    break;
                }
                checked += 1;
                ensure(c.contains(&r), || format!("{m} in <{}> but {r} is not", label(&c.generators)))?;
            }
        }
    }
    Ok(format!("{checked} consequences"))
}

fn comb_rule(fp: &FieldParam, cs: &[MonomialClone]) -> Verdict {
    let mut checked = 0usize;
    for c in cs {
        for m in c.members().iter().filter(|m| m.count(1) >= 1 && m.width() >= 2) {
            let mut tail = m.counts().to_vec();
            tail[0] -= 1;
            for k in 0u32.. {
                let mut v: Vec<u32> = tail.iter().map(|t| t * k).collect();
                v[0] += 1;
                let r = Monomial::from_count_vec(v, fp).expect("nonempty");
                if !c.cap.covers(&r) {
                    break;
                }
                checked += 1;
                ensure(c.contains(&r), || format!("{m} in <{}> but {r} is not", label(&c.generators)))?;
            }
        }
    }
    Ok(format!("{checked} replications"))
}

fn implies_top(fp: &FieldParam, cs: &[MonomialClone], hyp: impl Fn(&Monomial) -> bool) -> Verdict {
    let top = Monomial::all_ones(fp.q, fp);
    let mut hits = 0;
    for c in cs {
        if let Some(m) = c.members().iter().find(|m| hyp(m)) {
            if !c.cap.covers(&top) {
                continue;
            }
            hits += 1;
            ensure(c.contains(&top), || format!("{m} in <{}> but {top} is not", label(&c.generators)))?;
        }
    }
    Ok(format!("{hits} clones meet the hypothesis"))
}

fn x1xq_xa(fp: &FieldParam, cs: &[MonomialClone]) -> Verdict {
    let top = Monomial::all_ones(fp.q, fp);
    let mut checked = 0;
    for c in cs.iter().filter(|c| c.contains(&top)) {
        for a in 1..=fp.n() {
            if c.contains(&Monomial::power(a, fp)) {
                let want = Monomial::all_ones(a, fp);
                checked += 1;
                ensure(c.contains(&want), || format!("<{}> has x1^{a} but not {want}", label(&c.generators)))?;
            }
        }
    }
    Ok(format!("{checked} instances"))
}

fn congruence_set(fp: &FieldParam, cap: &CapPolicy, b: u64) -> Vec<Monomial> {
    universe_monomials(fp, cap).into_iter().filter(|m| m.exponent_sum() % b == 1 % b).collect()
}

fn x1xk_all(fp: &FieldParam) -> Result<Verdict> {
    let n = fp.n() as u64;
    for k in 2..=fp.q + 1 {
        let g = Monomial::all_ones(k, fp);
        let cap = CapPolicy::default_for(fp, std::slice::from_ref(&g)).with_rounds(0);
        let c = generate(std::slice::from_ref(&g), fp, &cap)?;
        let want = congruence_set(fp, &cap, gcd(k as u64 - 1, n));
        if c.members() != want.as_slice() {
            return Ok(Err(format!("<{g}> has {} members, predicate gives {}", c.len(), want.len())));
        }
    }
    Ok(Ok(format!("k = 2..={}", fp.q + 1)))
}

fn max_id_clone(fp: &FieldParam) -> Result<Verdict> {
    let g = Monomial::all_ones(fp.q, fp);
    let cap = CapPolicy::default_for(fp, std::slice::from_ref(&g)).with_rounds(0);
    let c = generate(std::slice::from_ref(&g), fp, &cap)?;
    let want: Vec<Monomial> = universe_monomials(fp, &cap).into_iter().filter(|m| m.is_idempotent(fp)).collect();
    Ok(if c.members() == want.as_slice() {
        Ok(format!("{} idempotent monomials", want.len()))
    } else {
        Err(format!("<{g}> has {} members, {} idempotent monomials fit", c.len(), want.len()))
    })
}

fn three_gcd(fp: &FieldParam) -> Result<Verdict> {
    let n = fp.n();
    let top = Monomial::all_ones(fp.q, fp);
    let mut checked = 0;
    for width in 2..=3u32 {
        for base in all_monomials(fp, width).into_iter().filter(|m| m.width() == width) {
            let ex = base.exponents();
            let ok = (0..ex.len()).all(|skip| {
                let g = ex.iter().enumerate().filter(|&(i, _)| i != skip).fold(n as u64, |g, (_, &e)| gcd(g, e as u64));
                g == 1
            });
            if !ok {
                continue;
            }
            for gamma in 0..=n {
                let mut v = base.counts().to_vec();
                if gamma > 0 {
                    v[gamma as usize - 1] += 1;
                }
                let m = Monomial::from_count_vec(v, fp)?;
                let cap = CapPolicy::default_for(fp, &[m.clone(), top.clone()]).with_rounds(0);
                checked += 1;
                if !member_query(&top, std::slice::from_ref(&m), fp, &cap)?.member {
                    return Ok(Err(format!("{top} not derived from {m}")));
                }
            }
        }
    }
    Ok(Ok(format!("{checked} instances")))
}

fn table_oracle(fp: &FieldParam) -> Result<Verdict> {
    let ms = all_monomials(fp, 2);
    let mut sets: Vec<Vec<Monomial>> = ms.iter().map(|m| vec![m.clone()]).collect();
    for (i, a) in ms.iter().enumerate() {
        for b in &ms[i + 1..] {
            sets.push(vec![a.clone(), b.clone()]);
        }
    }
    for gens in &sets {
        let c = generate(gens, fp, &CapPolicy::default_for(fp, gens))?;
        let tables: Vec<_> = gens.iter().map(|g| generator_table(g, fp)).collect();
        for arity in 1..=3 {
            if clone_tables(&tables, fp.q as usize, arity) != induced_tables(c.members(), fp, arity) {
                return Ok(Err(format!("<{}> differs from the table closure at arity {arity}", label(gens))));
            }
        }
    }
    Ok(Ok(format!("{} generator sets, arity <= 3", sets.len())))
}

fn hasse_covers(d: &HasseDiagram) -> Verdict {
    let want = covers(d.len(), |i, j| d.leq(i, j));
    let mut got = d.edges.clone();
    got.sort();
    ensure(got == want, || "edges differ from the transitive reduction".into())?;
    ensure((0..d.len()).all(|i| d.leq(d.bottom, i) && d.leq(i, d.top)), || "bottom or top misplaced".into())?;
    Ok(format!("{} nodes, {} edges", d.len(), d.edges.len()))
}

fn atoms_agree(fp: &FieldParam, d: &HasseDiagram) -> Result<Verdict> {
    let mut found: Vec<usize> = Vec::new();
    for a in atoms(fp)? {
        let g = &a.generators;
        match node_of(d, g)? {
            Some(i) => found.push(i),
            None => return Ok(Err(format!("atom <{}> not among the nodes", label(g)))),
        }
    }
    found.sort();
    let mut minimal = d.minimal_nontrivial();
    minimal.sort();
    Ok(if found == minimal { Ok(format!("{} atoms", found.len())) } else { Err(format!("closed form {found:?}, enumeration {minimal:?}")) })
}

fn coatoms_agree(fp: &FieldParam, d: &HasseDiagram) -> Result<Verdict> {
    let cap = d.nodes[d.top].cap;
    let mut found = Vec::new();
    for desc in coatoms(fp)? {
        let c = coatom_clone(&desc, fp, &cap)?;
        match d.find(&c) {
            Some(i) => found.push(i),
            None => return Ok(Err(format!("coatom {desc:?} not among the nodes"))),
        }
        if let CoatomDescriptor::Kd { indices, .. } = &desc {
            let gens = crate::lattice::kd_generators(indices, fp, &cap);
            let via = generate(&gens, fp, &cap)?;
            if via.members() != c.members() {
                return Ok(Err(format!("K_{indices:?} predicate and generated closure differ")));
            }
        }
    }
    found.sort();
    let mut maximal = d.maximal_proper();
    maximal.sort();
    Ok(if found == maximal { Ok(format!("{} coatoms", found.len())) } else { Err(format!("closed form {found:?}, enumeration {maximal:?}")) })
}

fn coatom_count(fp: &FieldParam) -> Result<Verdict> {
    let l = fp.primes.len() as u32;
    let got = coatoms(fp)?.len() as u32;
    let want = (1 << l) - 1 + l;
    Ok(if got == want { Ok(format!("{got} = 2^{l} - 1 + {l}")) } else { Err(format!("{got} coatoms, expected {want}")) })
}

fn xkxl_gcd(fp: &FieldParam) -> Result<Verdict> {
    let ds = divisors_of_order(fp);
    for &k in &ds {
        for &l in &ds {
            if !gcd_join_holds(fp, k, l)? {
                return Ok(Err(format!("k={k} l={l}")));
            }
        }
    }
    Ok(Ok(format!("{} divisor pairs", ds.len() * ds.len())))
}

fn add_co(fp: &FieldParam) -> Result<Verdict> {
    let l = fp.primes.len();
    let sets: Vec<Vec<usize>> =
        (1u32..(1 << l)).map(|mask| (0..l).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()).collect();
    let probes = all_monomials(fp, 3);
    for a in &sets {
        for b in sets.iter().filter(|b| *b != a) {
            let mut witness = None;
            for m in &probes {
                if coatom_member(m, a, fp)? && !coatom_member(m, b, fp)? {
                    witness = Some(m);
                    break;
                }
            }
            if witness.is_none() {
                return Ok(Err(format!("K_{a:?} is contained in K_{b:?} on width <= 3")));
            }
        }
    }
    Ok(Ok(format!("{} ordered pairs separated", sets.len() * (sets.len() - 1))))
}

fn sm_id_clone(fp: &FieldParam) -> Result<Verdict> {
    let d = idempotent_interval(fp, fp.q, None)?;
    Ok(if nontrivial_nodes_contain_x1xq(&d) {
        Ok(format!("{} idempotent clones", d.len()))
    } else {
        Err("a nontrivial idempotent clone misses x1*x2^(q-1)".into())
    })
}

fn get_one_gen(fp: &FieldParam) -> Result<Verdict> {
    let ids: Vec<Monomial> = all_monomials(fp, 3).into_iter().filter(|m| m.is_idempotent(fp)).collect();
    let mut checked = 0;
    for (i, a) in ids.iter().enumerate() {
        for b in &ids[i..] {
            let s = single_generator(a, b, fp)?;
            let all = [a.clone(), b.clone(), s.clone()];
            let cap = CapPolicy::default_for(fp, &all).with_rounds(0);
            let pair = [a.clone(), b.clone()];
            let one = [s.clone()];
            checked += 1;
            if !(generated_subset(&pair, &one, fp, &cap)?.member && generated_subset(&one, &pair, fp, &cap)?.member) {
                return Ok(Err(format!("<{a}, {b}> differs from <{s}>")));
            }
        }
    }
    Ok(Ok(format!("{checked} idempotent pairs")))
}

fn phi_monotone(d: &HasseDiagram) -> Verdict {
    let images: Vec<_> = d.nodes.iter().map(phi_affine).collect();
    for i in 0..d.len() {
        for j in 0..d.len() {
            if d.leq(i, j) {
                ensure(images[i].subset_of(&images[j]), || format!("nodes {i} <= {j} but images are not"))?;
            }
        }
    }
    Ok(format!("{} nodes", d.len()))
}

fn phi_surjective(d: &HasseDiagram) -> Verdict {
    let s = enumerate_semiaffine_lattice(d.fp.n(), None);
    let images: Vec<_> = d.nodes.iter().map(phi_affine).collect();
    for (k, node) in s.nodes.iter().enumerate() {
        ensure(images.iter().any(|im| im.members() == node.members()), || format!("linear clone {k} has no preimage"))?;
    }
    Ok(format!("{} linear clones hit", s.len()))
}

fn semi_affine(fp: &FieldParam) -> Verdict {
    let s = enumerate_semiaffine_lattice(fp.n(), None);
    for (k, node) in s.nodes.iter().enumerate() {
        ensure(semi_affine_holds(node, 3), || format!("linear clone {k} has a form that is not semi-affine"))?;
    }
    Ok(format!("{} linear clones, arity <= 3", s.len()))
}

/// The node equal to ⟨gens⟩ at the diagram's cap.
fn node_of(d: &HasseDiagram, gens: &[Monomial]) -> Result<Option<usize>> {
    let c = generate(gens, &d.fp, &d.nodes[d.top].cap)?;
    Ok(d.find(&c))
}

fn fiber_partition(d: &HasseDiagram) -> Result<Verdict> {
    let s = enumerate_semiaffine_lattice(d.fp.n(), None);
    let mut seen = vec![0u32; d.len()];
    for node in &s.nodes {
        for i in fiber(node, d) {
            seen[i] += 1;
        }
    }
    if seen.iter().any(|&k| k != 1) {
        return Ok(Err(format!("fiber multiplicities {seen:?}")));
    }
    let proj = crate::semiaffine::linear_closure(&[], d.fp.n(), None);
    let mut f = fiber(&proj, d);
    f.sort();
    let x1xq = Monomial::from_pairs(&[(1, 1), (d.fp.n(), 1)], &d.fp).expect("valid");
    let mut want = vec![d.bottom];
    want.extend(node_of(d, &[x1xq])?);
    want.sort();
    Ok(if f == want {
        Ok(format!("{} fibers", s.len()))
    } else {
        Err(format!("projection fiber {f:?}, expected {want:?}"))
    })
}

fn q_minor_valid(d: &HasseDiagram) -> Result<Verdict> {
    let n = d.fp.n() as usize;
    for (i, c) in d.nodes.iter().enumerate() {
        let s = phi_minor(c);
        if !s.is_valid() {
            return Ok(Err(format!("image of node {i} is not a q-minor set")));
        }
        for b in offsets(n) {
            if !is_downward_closed(&minor_m(&b, &s)?) {
                return Ok(Err(format!("M({b:?}) of node {i} is not downward closed")));
            }
        }
    }
    Ok(Ok(format!("{} nodes", d.len())))
}

fn offsets(n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p| (0..n as u32).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out
}

fn go_to_down_cl(d: &HasseDiagram) -> Result<Verdict> {
    let images: Vec<_> = d.nodes.iter().map(phi_minor).collect();
    let n = d.fp.n() as usize;
    for a in &images {
        for b in &images {
            let direct = embedding_check(a, b)?;
            let mut via = true;
            for off in offsets(n) {
                let (ma, mb): (BTreeSet<_>, BTreeSet<_>) = (minor_m(&off, a)?, minor_m(&off, b)?);
                via &= ma.is_subset(&mb);
            }
            if direct != via {
                return Ok(Err("inclusion and per-offset inclusion disagree".into()));
            }
        }
    }
    Ok(Ok(format!("{} pairs", images.len() * images.len())))
}

fn well_po(d: &HasseDiagram) -> Result<Verdict> {
    let images: Vec<_> = d.nodes.iter().map(phi_minor).collect();
    for i in 0..d.len() {
        for j in 0..d.len() {
            if d.leq(i, j) != embedding_check(&images[i], &images[j])? {
                return Ok(Err(format!("nodes {i}, {j}: inclusion not reflected")));
            }
        }
    }
    Ok(Ok(format!("{} pairs", d.len() * d.len())))
}

fn antichain_sample(fp: &FieldParam) -> Result<Verdict> {
    let r = sample_order(fp, 50, 3, 0x5eed)?;
    Ok(Ok(format!(
        "50 samples, {} distinct clones, widest antichain {}, longest chain {}",
        r.distinct, r.max_antichain, r.longest_chain
    )))
}
