//! Subgroup-lattice primitives on top of a multiplication table.

use super::group::{FiniteGroup, GroupRef};
use super::subgroup::SubgroupHandle;
use crate::arith::{gcd_u, is_prime, ord_p};
use crate::error::{Error, Result};
use crate::finab::FinAb;
use crate::linalg::{smith, RowLattice, Track};
use std::collections::BTreeSet;

/// Sorted elements of the subgroup generated by `gens`.
pub fn closure_elements(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    closure_from(g, &[0], gens)
}

/// Closure of `start ∪ gens`, where `start` is already a subgroup.
fn closure_from(g: &FiniteGroup, start: &[usize], gens: &[usize]) -> Vec<usize> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut queue: Vec<usize> = Vec::with_capacity(n);
    for &s in start {
        if !seen[s] {
            seen[s] = true;
            queue.push(s);
        }
    }
    let mut all_gens: Vec<usize> = gens.to_vec();
    all_gens.extend_from_slice(start);
    all_gens.retain(|&x| x != 0);
    all_gens.sort_unstable();
    all_gens.dedup();
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &s in &all_gens {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                queue.push(y);
            }
        }
    }
    queue.sort_unstable();
    queue
}

pub fn subgroup_closure(g: &GroupRef, gens: &[usize]) -> SubgroupHandle {
    SubgroupHandle::from_sorted(g, closure_elements(g, gens))
}

/// All cyclic subgroups, trivial one included, sorted by (order, elements).
pub fn cyclic_subgroups(g: &GroupRef) -> Vec<SubgroupHandle> {
    let mut set = BTreeSet::new();
    for x in 0..g.order() {
        set.insert(closure_elements(g, &[x]));
    }
    let mut out: Vec<SubgroupHandle> = set
        .into_iter()
        .map(|els| SubgroupHandle::from_sorted(g, els))
        .collect();
    out.sort();
    out
}

#[derive(Clone, Debug)]
pub struct Sylow {
    pub subgroup: SubgroupHandle,
    pub is_normal: bool,
}

/// A Sylow p-subgroup: the lexicographically least among its conjugates.
pub fn sylow_subgroup(g: &GroupRef, p: u64) -> Result<Sylow> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let target = (p as usize).pow(ord_p(g.order() as u64, p));
    let mut cur = SubgroupHandle::trivial(g);
    while cur.order() < target {
        let (norm, _) = normalizer_centralizer(g, &cur);
        let x = norm
            .elements()
            .iter()
            .copied()
            .find(|&x| !cur.contains(x) && cur.contains(g.pow(x, p)))
            .expect("Sylow growth step exists");
        let mut gens = cur.generating_set();
        gens.push(x);
        cur = subgroup_closure(g, &gens);
    }
    let conjugates: BTreeSet<Vec<usize>> = (0..g.order())
        .map(|t| cur.conjugate(t).elements().to_vec())
        .collect();
    let is_normal = conjugates.len() == 1;
    let least = conjugates.into_iter().next().unwrap();
    Ok(Sylow {
        subgroup: SubgroupHandle::from_sorted(g, least),
        is_normal,
    })
}

/// `⋂_g gHg^{-1}`
pub fn core(g: &GroupRef, h: &SubgroupHandle) -> SubgroupHandle {
    let mut els: Vec<usize> = h.elements().to_vec();
    for t in 0..g.order() {
        els.retain(|&x| h.contains(g.conj(g.inv(t), x)));
    }
    SubgroupHandle::from_sorted(g, els)
}

/// `(N_G(H), Z_G(H))`
pub fn normalizer_centralizer(g: &GroupRef, h: &SubgroupHandle) -> (SubgroupHandle, SubgroupHandle) {
    let gens = h.generating_set();
    let norm: Vec<usize> = (0..g.order())
        .filter(|&t| gens.iter().all(|&x| h.contains(g.conj(t, x))))
        .collect();
    let cent: Vec<usize> = norm
        .iter()
        .copied()
        .filter(|&t| gens.iter().all(|&x| g.mul(t, x) == g.mul(x, t)))
        .collect();
    (
        SubgroupHandle::from_sorted(g, norm),
        SubgroupHandle::from_sorted(g, cent),
    )
}

/// Subgroup generated by all `a b a^{-1} b^{-1}`.
pub fn commutator_subgroup(g: &GroupRef, a: &SubgroupHandle, b: &SubgroupHandle) -> SubgroupHandle {
    let mut comms = BTreeSet::new();
    for &x in a.elements() {
        for &y in b.elements() {
            comms.insert(g.commutator(x, y));
        }
    }
    let comms: Vec<usize> = comms.into_iter().collect();
    subgroup_closure(g, &comms)
}

pub fn derived_subgroup(g: &GroupRef) -> SubgroupHandle {
    let whole = SubgroupHandle::whole(g);
    commutator_subgroup(g, &whole, &whole)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoset {
    pub representative: usize,
    pub elements: Vec<usize>,
}

/// The partition `D \ G / H`, classes ordered by their least element, which
/// is also the representative.
pub fn double_cosets(g: &GroupRef, d: &SubgroupHandle, h: &SubgroupHandle) -> Vec<DoubleCoset> {
    let n = g.order();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let mut els = BTreeSet::new();
        for &a in d.elements() {
            let ax = g.mul(a, x);
            for &b in h.elements() {
                els.insert(g.mul(ax, b));
            }
        }
        for &y in &els {
            assigned[y] = true;
        }
        out.push(DoubleCoset {
            representative: x,
            elements: els.into_iter().collect(),
        });
    }
    out
}

/// Left cosets `xH`, ordered by least element; each entry lists the coset's
/// elements with the least one first.
pub fn left_cosets(g: &GroupRef, h: &SubgroupHandle) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let mut coset: Vec<usize> = h.elements().iter().map(|&y| g.mul(x, y)).collect();
        coset.sort_unstable();
        for &y in &coset {
            assigned[y] = true;
        }
        out.push(coset);
    }
    out
}

/// An abelian quotient `G/N` in invariant-factor form together with the
/// coordinates of every element of `G` in it.
#[derive(Clone, Debug)]
pub struct AbelianQuotient {
    pub structure: FinAb,
    /// `coords[x][i]` is the `i`-th coordinate of `xN`, modulo the `i`-th
    /// invariant factor.
    pub coords: Vec<Vec<u64>>,
}

/// `G / N` for a normal subgroup `N` containing the derived subgroup.
pub fn abelian_quotient(g: &GroupRef, n_sub: &SubgroupHandle) -> Result<AbelianQuotient> {
    let cosets = left_cosets(g, n_sub);
    let k = cosets.len();
    let mut coset_of = vec![0usize; g.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &x in c {
            coset_of[x] = i;
        }
    }
    let reps: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
    let qmul = |a: usize, b: usize| coset_of[g.mul(reps[a], reps[b])];
    // greedy generators of the quotient
    let mut gens: Vec<usize> = Vec::new();
    let mut inside = vec![false; k];
    inside[0] = true;
    for c in 0..k {
        if !inside[c] {
            gens.push(c);
            // re-close
            let mut queue: Vec<usize> = (0..k).filter(|&x| inside[x]).collect();
            let mut head = 0;
            while head < queue.len() {
                let x = queue[head];
                head += 1;
                for &s in &gens {
                    let y = qmul(x, s);
                    if !inside[y] {
                        inside[y] = true;
                        queue.push(y);
                    }
                }
            }
        }
    }
    let r = gens.len();
    if r == 0 {
        return Ok(AbelianQuotient {
            structure: FinAb::trivial(),
            coords: vec![Vec::new(); g.order()],
        });
    }
    // word vectors from a breadth-first spanning tree; Schreier relations
    let mut word: Vec<Option<Vec<i64>>> = vec![None; k];
    word[0] = Some(vec![0; r]);
    let mut queue = vec![0usize];
    let mut head = 0;
    let mut rel = RowLattice::new(r);
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let wx = word[x].clone().unwrap();
        for (i, &s) in gens.iter().enumerate() {
            let y = qmul(x, s);
            let mut w = wx.clone();
            w[i] += 1;
            match &word[y] {
                None => {
                    word[y] = Some(w);
                    queue.push(y);
                }
                Some(wy) => {
                    let row: Vec<(usize, i64)> = w
                        .iter()
                        .zip(wy)
                        .enumerate()
                        .map(|(c, (a, b))| (c, a - b))
                        .filter(|e| e.1 != 0)
                        .collect();
                    rel.insert(row)?;
                }
            }
        }
    }
    let s = smith(&rel.to_dense(), Track::right_only())?;
    let v = s.right.unwrap();
    debug_assert_eq!(s.rank, r, "quotient must be finite");
    let keep: Vec<(usize, u64)> = s
        .diag
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 1)
        .map(|(i, &d)| (i, d as u64))
        .collect();
    let structure = FinAb::from_invariant_factors(keep.iter().map(|e| e.1).collect())
        .map_err(Error::SpecInvalid)?;
    let coset_coords: Vec<Vec<u64>> = word
        .iter()
        .map(|w| {
            let w = w.as_ref().unwrap();
            keep.iter()
                .map(|&(i, d)| {
                    let x: i64 = (0..r).map(|j| w[j] * v[(j, i)]).sum();
                    x.rem_euclid(d as i64) as u64
                })
                .collect()
        })
        .collect();
    let coords = (0..g.order()).map(|x| coset_coords[coset_of[x]].clone()).collect();
    Ok(AbelianQuotient { structure, coords })
}

/// `G / [G, G]` with the projection.
pub fn abelianization(g: &GroupRef) -> Result<AbelianQuotient> {
    abelian_quotient(g, &derived_subgroup(g))
}

/// Budget on subgroup closures tried by [`complement`].
pub const COMPLEMENT_SEARCH_BUDGET: usize = 200_000;

/// A complement to a normal Sylow subgroup `s`: the first subgroup of order
/// `(G:S)` met while closing up one, two or three elements of order prime to
/// `|S|` (candidates in increasing element order).
pub fn complement(g: &GroupRef, s: &SubgroupHandle) -> Result<SubgroupHandle> {
    let so = s.order() as u64;
    let m = s.index() as u64;
    if gcd_u(so, m) != 1 || !s.is_normal() {
        return Err(Error::PreconditionFailed(
            "complement needs a normal Sylow subgroup".into(),
        ));
    }
    if m == 1 {
        return Ok(SubgroupHandle::trivial(g));
    }
    // one candidate per cyclic subgroup of order prime to |S|
    let mut seen = BTreeSet::new();
    let mut cands = Vec::new();
    for x in 1..g.order() {
        if gcd_u(g.element_order(x) as u64, so) == 1 && seen.insert(closure_elements(g, &[x])) {
            cands.push(x);
        }
    }
    let mut budget = COMPLEMENT_SEARCH_BUDGET;
    let fits = |c: &Vec<usize>| m.is_multiple_of(c.len() as u64);
    let mut tick = || -> Result<()> {
        if budget == 0 {
            return Err(Error::SearchBudgetExceeded(format!(
                "no complement within {COMPLEMENT_SEARCH_BUDGET} closures"
            )));
        }
        budget -= 1;
        Ok(())
    };
    for (i, &x) in cands.iter().enumerate() {
        tick()?;
        let c1 = closure_elements(g, &[x]);
        if c1.len() as u64 == m {
            return Ok(SubgroupHandle::from_sorted(g, c1));
        }
        for (j, &y) in cands.iter().enumerate().skip(i + 1) {
            if c1.binary_search(&y).is_ok() {
                continue;
            }
            tick()?;
            let c2 = closure_from(g, &c1, &[y]);
            if !fits(&c2) {
                continue;
            }
            if c2.len() as u64 == m {
                return Ok(SubgroupHandle::from_sorted(g, c2));
            }
            for &z in cands.iter().skip(j + 1) {
                if c2.binary_search(&z).is_ok() {
                    continue;
                }
                tick()?;
                let c3 = closure_from(g, &c2, &[z]);
                if c3.len() as u64 == m {
                    return Ok(SubgroupHandle::from_sorted(g, c3));
                }
            }
        }
    }
    Err(Error::SearchBudgetExceeded(
        "no complement generated by three elements".into(),
    ))
}

/// Every subgroup, by repeatedly joining with cyclic subgroups. Intended
/// for small groups.
pub fn all_subgroups(g: &GroupRef) -> Vec<SubgroupHandle> {
    let cyclic: Vec<(usize, Vec<usize>)> = cyclic_subgroups(g)
        .into_iter()
        .map(|c| (c.cyclic_generator().unwrap(), c.elements().to_vec()))
        .collect();
    let mut all: BTreeSet<Vec<usize>> = cyclic.iter().map(|c| c.1.clone()).collect();
    let mut frontier: Vec<Vec<usize>> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for (x, c) in &cyclic {
                if c.iter().all(|y| h.binary_search(y).is_ok()) {
                    continue;
                }
                let j = closure_from(g, h, &[*x]);
                if all.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<SubgroupHandle> = all
        .into_iter()
        .map(|e| SubgroupHandle::from_sorted(g, e))
        .collect();
    out.sort();
    out
}

pub fn normal_subgroups(g: &GroupRef) -> Vec<SubgroupHandle> {
    all_subgroups(g).into_iter().filter(|h| h.is_normal()).collect()
}

/// Subgroups up to conjugacy: the least member of each class.
pub fn subgroup_classes(g: &GroupRef) -> Vec<SubgroupHandle> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for h in all_subgroups(g) {
        if seen.contains(h.elements()) {
            continue;
        }
        for t in 0..g.order() {
            seen.insert(h.conjugate(t).elements().to_vec());
        }
        out.push(h);
    }
    out
}
