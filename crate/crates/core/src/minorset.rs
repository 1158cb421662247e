//! q-minor sets: subsets of N^{q-1} containing 0 and closed under subtracting q-1 from a coordinate.

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::clone::{generate, CapPolicy, MonomialClone};
use crate::error::{Error, Result};
use crate::field::FieldParam;
use crate::monomial::Monomial;

pub type Point = Vec<u32>;

/// A bounded q-minor set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QMinorSet {
    pub q: u32,
    /// Every coordinate is at most this.
    pub bound: u32,
    /// Coordinate sums are at most this, if set.
    pub width_bound: Option<u32>,
    pub points: BTreeSet<Point>,
}

impl QMinorSet {
    fn step(&self) -> u32 {
        self.q - 1
    }

    pub fn contains(&self, p: &[u32]) -> bool {
        self.points.contains(p)
    }

    /// Contains zero and is closed under single-coordinate subtraction of q-1.
    pub fn is_valid(&self) -> bool {
        let dim = self.step() as usize;
        if !self.points.contains(&vec![0; dim]) {
            return false;
        }
        let s = self.step();
        self.points.iter().all(|p| {
            (0..p.len()).all(|i| {
                p[i] < s || {
                    let mut r = p.clone();
                    r[i] -= s;
                    self.points.contains(&r)
                }
            })
        })
    }

    /// Points grouped by their coordinatewise residue mod q-1.
    fn by_residue(&self) -> BTreeMap<Point, BTreeSet<Point>> {
        let s = self.step();
        let mut out: BTreeMap<Point, BTreeSet<Point>> = BTreeMap::new();
        for p in &self.points {
            let b: Point = p.iter().map(|x| x % s).collect();
            let t: Point = p.iter().map(|x| x / s).collect();
            out.entry(b).or_default().insert(t);
        }
        out
    }
}

/// Count vectors of the members of `c`, plus zero.
pub fn phi_minor(c: &MonomialClone) -> QMinorSet {
    let mut points: BTreeSet<Point> = c.members().iter().map(|m| m.counts().to_vec()).collect();
    points.insert(vec![0; c.fp.n() as usize]);
    QMinorSet { q: c.fp.q, bound: c.cap.per_residue_cap, width_bound: c.cap.width_cap, points }
}

/// {t : b + (q-1)·t ∈ s}.
pub fn minor_m(b: &[u32], s: &QMinorSet) -> Result<BTreeSet<Point>> {
    let step = s.step();
    if b.len() != step as usize || b.iter().any(|&x| x >= step) {
        return Err(Error::Precondition(format!("offset {b:?} is not in {{0..{}}}^{}", step.saturating_sub(1), step)));
    }
    Ok(s.points
        .iter()
        .filter(|p| p.iter().zip(b).all(|(x, y)| x >= y && (x - y) % step == 0))
        .map(|p| p.iter().zip(b).map(|(x, y)| (x - y) / step).collect())
        .collect())
}

/// Whether a set of points is closed downward in the product order.
pub fn is_downward_closed(set: &BTreeSet<Point>) -> bool {
    set.iter().all(|p| {
        (0..p.len()).all(|i| {
            p[i] == 0 || {
                let mut r = p.clone();
                r[i] -= 1;
                set.contains(&r)
            }
        })
    })
}

/// `s1 ⊆ s2`, computed directly and residue class by residue class; the two must agree.
pub fn embedding_check(s1: &QMinorSet, s2: &QMinorSet) -> Result<bool> {
    if s1.q != s2.q || s1.bound != s2.bound || s1.width_bound != s2.width_bound {
        return Err(Error::BoundMismatch(
            format!("q={} bound={} width={:?}", s1.q, s1.bound, s1.width_bound),
            format!("q={} bound={} width={:?}", s2.q, s2.bound, s2.width_bound),
        ));
    }
    let direct = s1.points.is_subset(&s2.points);
    let (a, b) = (s1.by_residue(), s2.by_residue());
    let empty = BTreeSet::new();
    let via_minors = a.iter().all(|(k, ts)| ts.is_subset(b.get(k).unwrap_or(&empty)));
    if direct != via_minors {
        return Err(Error::Precondition("direct and residue-wise inclusion disagree".into()));
    }
    Ok(direct)
}

/// Inclusion order of a random sample of clones and its widest antichain.
#[derive(Debug, Clone)]
pub struct SampleReport {
    pub generators: Vec<Vec<Monomial>>,
    pub distinct: usize,
    pub max_antichain: usize,
    pub longest_chain: usize,
}

/// Samples `count` clones with one or two generators of width ≤ `max_width`.
pub fn sample_order(fp: &FieldParam, count: usize, max_width: u32, seed: u64) -> Result<SampleReport> {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = fp.n();
    let random_monomial = |rng: &mut StdRng| {
        let w = rng.gen_range(1..=max_width);
        let ex: Vec<u32> = (0..w).map(|_| rng.gen_range(1..=n)).collect();
        let pairs: Vec<(u32, u32)> = ex.iter().map(|&e| (e, 1)).collect();
        Monomial::from_pairs(&pairs, fp).expect("nonempty")
    };
    let mut generators = Vec::new();
    for _ in 0..count {
        let k = rng.gen_range(1..=2);
        let mut g: Vec<Monomial> = (0..k).map(|_| random_monomial(&mut rng)).collect();
        g.sort();
        g.dedup();
        generators.push(g);
    }
    let probe = Monomial::all_ones(max_width.max(2), fp);
    let cap = CapPolicy::default_for(fp, &[probe]).with_rounds(0);
    let clones = generators.iter().map(|g| generate(g, fp, &cap)).collect::<Result<Vec<_>>>()?;
    let mut sets: Vec<&[Monomial]> = clones.iter().map(|c| c.members()).collect();
    sets.sort();
    sets.dedup();
    let m = sets.len();
    let less: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| i != j && crate::lattice::sorted_subset(sets[i], sets[j])).collect())
        .collect();
    Ok(SampleReport {
        generators,
        distinct: m,
        max_antichain: m - max_matching(&less),
        longest_chain: longest_chain(&less),
    })
}

/// Maximum matching in the comparability bipartite graph (Dilworth: width = n - matching).
fn max_matching(less: &[Vec<bool>]) -> usize {
    let n = less.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(u: usize, less: &[Vec<bool>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for v in 0..less.len() {
            if less[u][v] && !seen[v] {
                seen[v] = true;
                if owner[v].map_or(true, |w| augment(w, less, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    (0..n).filter(|&u| augment(u, less, &mut vec![false; n], &mut owner)).count()
}

fn longest_chain(less: &[Vec<bool>]) -> usize {
    let n = less.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| less.iter().filter(|row| row[i]).count());
    let mut best = vec![1usize; n];
    for &j in &order {
        for &i in &order {
            if less[i][j] {
                best[j] = best[j].max(best[i] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}
