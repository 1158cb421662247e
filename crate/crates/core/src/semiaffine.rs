//! Linear forms over Z_n, their clones, and the map sending a monomial clone to one.

use std::collections::HashMap;
use std::fmt;

use crate::clone::MonomialClone;
use crate::closure::{Engine, LinArith, Universe, Vector};
use crate::field::FieldParam;
use crate::lattice::{covers, sorted_subset, HasseDiagram};

/// A form y ↦ Σ c_i y_i with nonzero coefficients, stored as counts per coefficient 1..n-1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    counts: Box<[u32]>,
}

impl LinearForm {
    /// The form with the given coefficients; zero classes are dropped.
    pub fn from_coeffs(coeffs: &[u64], n: u32) -> Self {
        let mut v = vec![0u32; n.saturating_sub(1) as usize];
        for &c in coeffs {
            let r = (c % n as u64) as usize;
            if r != 0 {
                v[r - 1] += 1;
            }
        }
        LinearForm { counts: v.into() }
    }

    pub fn identity(n: u32) -> Self {
        Self::from_coeffs(&[1], n)
    }

    /// The constant 0.
    pub fn zero(n: u32) -> Self {
        Self::from_coeffs(&[], n)
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn arity(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Coefficients with multiplicity, ascending.
    pub fn coeffs(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, &c) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat(i as u32 + 1).take(c as usize));
        }
        out
    }

    /// Value at `point`, coordinates matched to [`Self::coeffs`].
    pub fn evaluate(&self, point: &[u32], n: u32) -> u32 {
        let s: u64 = self.coeffs().iter().zip(point).map(|(&c, &y)| c as u64 * y as u64).sum();
        (s % n as u64) as u32
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = self.coeffs();
        if cs.is_empty() {
            return f.write_str("0");
        }
        for (i, c) in cs.into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c == 1 {
                write!(f, "y{}", i + 1)?;
            } else {
                write!(f, "{c}*y{}", i + 1)?;
            }
        }
        Ok(())
    }
}

/// A 0-preserving linear clone over Z_n restricted to forms with each coefficient count ≤ `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearClone {
    pub n: u32,
    pub cap: u32,
    pub generators: Vec<LinearForm>,
    members: Vec<LinearForm>,
}

impl LinearClone {
    pub fn from_parts(n: u32, cap: u32, generators: Vec<LinearForm>, mut members: Vec<LinearForm>) -> Self {
        members.sort();
        members.dedup();
        LinearClone { n, cap, generators, members }
    }

    pub fn members(&self) -> &[LinearForm] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &LinearForm) -> bool {
        self.members.binary_search(f).is_ok()
    }

    pub fn subset_of(&self, other: &LinearClone) -> bool {
        sorted_subset(&self.members, &other.members)
    }
}

pub fn default_linear_cap(n: u32) -> u32 {
    2 * n.max(1)
}

/// Least capped set of forms containing `generators` and the identity, closed under
/// substitution into one argument and identification of two.
pub fn linear_closure(generators: &[LinearForm], n: u32, cap: Option<u32>) -> LinearClone {
    let cap = cap.unwrap_or_else(|| default_linear_cap(n)).max(default_linear_cap(n));
    let arith = LinArith { n };
    let gens: Vec<Vector> = generators.iter().map(|g| g.counts.clone()).collect();
    let mut seeds = vec![LinearForm::identity(n).counts];
    seeds.extend(gens.iter().cloned());
    let universe = Universe { per_cap: cap + n, width_cap: None };
    let engine = Engine { arith: &arith, universe, generators: &gens, allowed: None };
    let out = engine.run(&seeds, None);
    let members =
        out.members.into_iter().filter(|v| v.iter().all(|&c| c <= cap)).map(|counts| LinearForm { counts }).collect();
    LinearClone::from_parts(n, cap, generators.to_vec(), members)
}

/// Image of a monomial under the correspondence: exponent r becomes coefficient [r].
pub fn phi_form(m: &crate::monomial::Monomial, fp: &FieldParam) -> LinearForm {
    let n = fp.n();
    let mut v = vec![0u32; n.saturating_sub(1) as usize];
    for r in m.support().filter(|&r| r < n) {
        v[r as usize - 1] = m.count(r);
    }
    LinearForm { counts: v.into() }
}

/// The linear clone of all images of members of `c`.
pub fn phi_affine(c: &MonomialClone) -> LinearClone {
    let n = c.fp.n();
    let cap = default_linear_cap(n);
    let mut image: Vec<LinearForm> =
        c.members().iter().map(|m| phi_form(m, &c.fp)).filter(|f| f.counts.iter().all(|&k| k <= cap)).collect();
    image.sort();
    image.dedup();
    let closed = linear_closure(&image, n, Some(cap));
    LinearClone::from_parts(n, cap, image, closed.members)
}

/// Whether f(u+v) + f(0) = f(u) + f(v) holds everywhere for members of arity ≤ `max_arity`.
pub fn semi_affine_holds(lc: &LinearClone, max_arity: u32) -> bool {
    let n = lc.n;
    lc.members.iter().filter(|f| f.arity() <= max_arity).all(|f| {
        let a = f.arity() as usize;
        let total = (n as usize).pow(a as u32);
        let pt = |mut i: usize| -> Vec<u32> {
            (0..a)
                .map(|_| {
                    let d = (i % n as usize) as u32;
                    i /= n as usize;
                    d
                })
                .collect()
        };
        let zero = f.evaluate(&vec![0; a], n);
        (0..total).all(|i| {
            (0..total).all(|j| {
                let (u, v) = (pt(i), pt(j));
                let w: Vec<u32> = u.iter().zip(&v).map(|(x, y)| (x + y) % n).collect();
                (f.evaluate(&w, n) + zero) % n == (f.evaluate(&u, n) + f.evaluate(&v, n)) % n
            })
        })
    })
}

/// Covering structure of an enumerated family of linear clones.
#[derive(Debug, Clone)]
pub struct SemiaffineDiagram {
    pub n: u32,
    pub nodes: Vec<LinearClone>,
    pub labels: Vec<Vec<LinearForm>>,
    pub edges: Vec<(usize, usize)>,
    pub bottom: usize,
    pub top: usize,
}

impl SemiaffineDiagram {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn find(&self, lc: &LinearClone) -> Option<usize> {
        self.nodes.iter().position(|x| x.members == lc.members)
    }
}

fn all_forms(n: u32, max_arity: u32) -> Vec<LinearForm> {
    let slots = n.saturating_sub(1) as usize;
    let mut out = Vec::new();
    let mut cur = vec![0u32; slots];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<LinearForm>) {
        if i == cur.len() {
            out.push(LinearForm { counts: cur.clone().into() });
            return;
        }
        for c in 0..=left {
            cur[i] = c;
            rec(i + 1, left - c, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_arity, &mut cur, &mut out);
    out.sort();
    out
}

/// Clones reachable by join and meet from the principal clones of forms of arity ≤ n+1.
pub fn enumerate_semiaffine_lattice(n: u32, cap: Option<u32>) -> SemiaffineDiagram {
    let cap = cap.unwrap_or_else(|| default_linear_cap(n));
    let mut nodes: Vec<LinearClone> = Vec::new();
    let mut labels: Vec<Vec<LinearForm>> = Vec::new();
    let mut index: HashMap<Vec<LinearForm>, usize> = HashMap::new();
    let mut push = |c: LinearClone, label: Vec<LinearForm>, nodes: &mut Vec<LinearClone>, labels: &mut Vec<Vec<LinearForm>>| {
        if !index.contains_key(&c.members) {
            index.insert(c.members.clone(), nodes.len());
            nodes.push(c);
            labels.push(label);
        }
    };
    let mut seeds = vec![LinearForm::identity(n)];
    seeds.extend(all_forms(n, n + 1));
    for f in seeds {
        let c = linear_closure(std::slice::from_ref(&f), n, Some(cap));
        push(c, vec![f], &mut nodes, &mut labels);
    }
    let mut done = 0;
    while done < nodes.len() {
        let j = done;
        for i in 0..j {
            let mut g = labels[i].clone();
            g.extend(labels[j].iter().cloned());
            g.sort();
            g.dedup();
            let up = linear_closure(&g, n, Some(cap));
            push(up, g, &mut nodes, &mut labels);
            let both: Vec<LinearForm> = nodes[i].members.iter().filter(|f| nodes[j].contains(f)).cloned().collect();
            let down = linear_closure(&both, n, Some(cap));
            push(down, both, &mut nodes, &mut labels);
        }
        done += 1;
    }
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| (nodes[a].len(), &nodes[a].members).cmp(&(nodes[b].len(), &nodes[b].members)));
    let nodes: Vec<LinearClone> = order.iter().map(|&i| nodes[i].clone()).collect();
    let labels: Vec<Vec<LinearForm>> =
        order.iter().enumerate().map(|(k, &i)| minimal_label(&nodes[k], &labels[i], n, cap)).collect();
    let edges = covers(nodes.len(), |i, j| nodes[i].subset_of(&nodes[j]));
    let top = nodes.len() - 1;
    SemiaffineDiagram { n, nodes, labels, edges, bottom: 0, top }
}

/// Drops redundant forms from a generating set, then prefers a single generator if one exists.
fn minimal_label(node: &LinearClone, start: &[LinearForm], n: u32, cap: u32) -> Vec<LinearForm> {
    let mut cands: Vec<LinearForm> = node.members.clone();
    cands.sort_by_key(|f| (f.arity(), f.clone()));
    for f in &cands {
        if linear_closure(std::slice::from_ref(f), n, Some(cap)).members == node.members {
            return vec![f.clone()];
        }
    }
    let mut gens = start.to_vec();
    let mut i = 0;
    while i < gens.len() {
        let mut fewer = gens.clone();
        fewer.remove(i);
        if !fewer.is_empty() && linear_closure(&fewer, n, Some(cap)).members == node.members {
            gens = fewer;
        } else {
            i += 1;
        }
    }
    gens
}

/// Indices of the monomial nodes whose image is `lc`.
pub fn fiber(lc: &LinearClone, d: &HasseDiagram) -> Vec<usize> {
    (0..d.nodes.len()).filter(|&i| phi_affine(&d.nodes[i]).members == lc.members).collect()
}
