//! G-lattices: `Z^r` with a group acting by unimodular integer matrices
//! (acting on column vectors).

use crate::error::{Error, Result};
use crate::grp::{left_cosets, double_cosets, FiniteGroup, GroupRef, SubgroupHandle};
use crate::linalg::{smith, IntMatrix, Track};
use std::sync::Arc;

#[derive(Clone)]
pub struct GLattice {
    group: GroupRef,
    rank: usize,
    action: Vec<IntMatrix>,
}

impl std::fmt::Debug for GLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GLattice(rank {} over {:?})", self.rank, self.group)
    }
}

pub(crate) fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    std::ptr::eq(a, b) || (a.order() == b.order() && a.table() == b.table())
}

impl GLattice {
    /// Lattice from the images of `group.generators()`; the action of every
    /// element is derived and checked to be well defined.
    pub fn from_generators(group: &GroupRef, rank: usize, gens: &[IntMatrix]) -> Result<Self> {
        if gens.len() != group.generators().len() {
            return Err(Error::PreconditionFailed(format!(
                "{} matrices for {} generators",
                gens.len(),
                group.generators().len()
            )));
        }
        for m in gens {
            if m.nrows() != rank || m.ncols() != rank || !m.is_unimodular() {
                return Err(Error::PreconditionFailed("generator matrix is not a unimodular rank x rank matrix".into()));
            }
        }
        let n = group.order();
        let mut action: Vec<Option<IntMatrix>> = vec![None; n];
        action[0] = Some(IntMatrix::identity(rank));
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (k, &g) in group.generators().iter().enumerate() {
                let y = group.mul(x, g);
                let prod = action[x].as_ref().unwrap().mul(&gens[k])?;
                match &action[y] {
                    None => {
                        action[y] = Some(prod);
                        queue.push(y);
                    }
                    Some(existing) => {
                        if *existing != prod {
                            return Err(Error::PreconditionFailed(
                                "generator matrices do not define an action".into(),
                            ));
                        }
                    }
                }
            }
        }
        let action = action
            .into_iter()
            .map(|m| m.ok_or_else(|| Error::PreconditionFailed("generators do not generate".into())))
            .collect::<Result<_>>()?;
        Ok(GLattice {
            group: group.clone(),
            rank,
            action,
        })
    }

    /// Caller supplies the matrices of every element, already known to form
    /// an action.
    pub(crate) fn from_all(group: &GroupRef, rank: usize, action: Vec<IntMatrix>) -> Self {
        debug_assert_eq!(action.len(), group.order());
        GLattice {
            group: group.clone(),
            rank,
            action,
        }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    /// Exhaustive check of the action axioms.
    pub fn verify(&self) -> bool {
        let g = &self.group;
        self.action[0] == IntMatrix::identity(self.rank)
            && self.action.iter().all(|m| m.is_unimodular())
            && (0..g.order()).all(|a| {
                (0..g.order()).all(|b| {
                    self.action[a].mul(&self.action[b]).ok().as_ref() == Some(&self.action[g.mul(a, b)])
                })
            })
    }

    /// The lattice viewed over `tilde` through a homomorphism `hom: tilde -> G`
    /// (given as the image of every element).
    pub fn inflate(&self, tilde: &GroupRef, hom: &[usize]) -> Result<GLattice> {
        if hom.len() != tilde.order() || hom.iter().any(|&x| x >= self.group.order()) {
            return Err(Error::GroupMismatch("homomorphism has the wrong shape".into()));
        }
        for a in 0..tilde.order() {
            for b in 0..tilde.order() {
                if hom[tilde.mul(a, b)] != self.group.mul(hom[a], hom[b]) {
                    return Err(Error::GroupMismatch("map is not a homomorphism".into()));
                }
            }
        }
        Ok(GLattice::from_all(
            tilde,
            self.rank,
            hom.iter().map(|&x| self.action[x].clone()).collect(),
        ))
    }
}

/// A `G`-equivariant homomorphism, `matrix` of shape `target.rank x source.rank`.
#[derive(Clone, Debug)]
pub struct LatticeMap {
    pub source: GLattice,
    pub target: GLattice,
    pub matrix: IntMatrix,
}

impl LatticeMap {
    /// Checks shapes and equivariance on every group element.
    pub fn new(source: GLattice, target: GLattice, matrix: IntMatrix) -> Result<Self> {
        if !same_group(&source.group, &target.group) {
            return Err(Error::GroupMismatch("map between lattices over different groups".into()));
        }
        if matrix.nrows() != target.rank || matrix.ncols() != source.rank {
            return Err(Error::PreconditionFailed("map matrix has the wrong shape".into()));
        }
        for g in 0..source.group.order() {
            if target.action[g].mul(&matrix)? != matrix.mul(&source.action[g])? {
                return Err(Error::PreconditionFailed(format!("map is not equivariant at element {g}")));
            }
        }
        Ok(LatticeMap {
            source,
            target,
            matrix,
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.rank == self.target.rank && self.matrix.is_unimodular()
    }
}

pub fn trivial_lattice(g: &GroupRef, rank: usize) -> GLattice {
    GLattice::from_all(g, rank, vec![IntMatrix::identity(rank); g.order()])
}

/// Permutation matrix of a map `i -> perm[i]` on basis vectors.
fn perm_matrix(perm: &[usize]) -> IntMatrix {
    let n = perm.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        m[(j, i)] = 1;
    }
    m
}

/// `Ind_H^G Z` as the permutation lattice on left cosets (ordered by least
/// element); also returns the cosets.
pub fn induced_perm_lattice(g: &GroupRef, h: &SubgroupHandle) -> (GLattice, Vec<Vec<usize>>) {
    let cosets = left_cosets(g, h);
    let mut coset_of = vec![0usize; g.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &x in c {
            coset_of[x] = i;
        }
    }
    let action = (0..g.order())
        .map(|x| {
            let perm: Vec<usize> = cosets.iter().map(|c| coset_of[g.mul(x, c[0])]).collect();
            perm_matrix(&perm)
        })
        .collect();
    (GLattice::from_all(g, cosets.len(), action), cosets)
}

pub fn direct_sum(m: &GLattice, n: &GLattice) -> Result<GLattice> {
    if !same_group(&m.group, &n.group) {
        return Err(Error::GroupMismatch("direct sum of lattices over different groups".into()));
    }
    let action = (0..m.group.order())
        .map(|g| IntMatrix::block_diagonal(&[&m.action[g], &n.action[g]]))
        .collect();
    Ok(GLattice::from_all(&m.group, m.rank + n.rank, action))
}

/// `J_{G/(H_1^{(e_1)},...,H_r^{(e_r)})}`: the cokernel of the diagonal
/// `Z -> ⊕ (Ind_{H_i}^G Z)^{e_i}`, `1 ↦ Σ` of all coset vectors. Returns the
/// lattice and the quotient map from the permutation lattice.
pub fn j_lattice(g: &GroupRef, pairs: &[(SubgroupHandle, usize)]) -> Result<(GLattice, LatticeMap)> {
    if pairs.is_empty() || pairs.iter().any(|p| p.1 == 0) {
        return Err(Error::EmptyFamily);
    }
    let mut blocks: Vec<GLattice> = Vec::new();
    for (h, e) in pairs {
        if !same_group(h.parent(), g) {
            return Err(Error::GroupMismatch("subgroup of a different group".into()));
        }
        let (ind, _) = induced_perm_lattice(g, h);
        blocks.extend(std::iter::repeat_n(ind, *e));
    }
    let mut p = blocks[0].clone();
    for b in &blocks[1..] {
        p = direct_sum(&p, b)?;
    }
    let n = p.rank;
    let iota = IntMatrix::from_vec(n, 1, vec![1; n]);
    let s = smith(
        &iota,
        Track {
            left: true,
            left_inv: true,
            ..Track::none()
        },
    )?;
    debug_assert_eq!(s.diag, vec![1]);
    let u = s.left.unwrap();
    let ui = s.left_inv.unwrap();
    let q = u.submatrix(1..n, 0..n);
    let sec = ui.submatrix(0..n, 1..n);
    let action = (0..g.order())
        .map(|x| q.mul(&p.action[x])?.mul(&sec))
        .collect::<Result<Vec<_>>>()?;
    let j = GLattice::from_all(g, n - 1, action);
    let map = LatticeMap::new(p, j.clone(), q)?;
    Ok((j, map))
}

/// The restriction of `m` to `d`, as a lattice over `d.to_group()`.
pub fn restrict(m: &GLattice, d: &SubgroupHandle) -> Result<GLattice> {
    if !same_group(d.parent(), &m.group) {
        return Err(Error::GroupMismatch("restriction to a subgroup of another group".into()));
    }
    let dg = d.to_group();
    let action = d.elements().iter().map(|&x| m.action[x].clone()).collect();
    Ok(GLattice::from_all(&dg, m.rank, action))
}

/// `M^g`: for `m` a lattice over `h.to_group()`, the lattice over
/// `(gHg^{-1}).to_group()` with `x` acting as `g^{-1} x g` did on `m`.
pub fn twist(m: &GLattice, h: &SubgroupHandle, g: usize) -> Result<(GLattice, SubgroupHandle)> {
    if m.group.order() != h.order() {
        return Err(Error::GroupMismatch("lattice is not over the given subgroup".into()));
    }
    let parent = h.parent();
    let conj = h.conjugate(g);
    let gi = parent.inv(g);
    let action = conj
        .elements()
        .iter()
        .map(|&x| m.action[h.local(parent.conj(gi, x)).unwrap()].clone())
        .collect();
    Ok((GLattice::from_all(&conj.to_group(), m.rank, action), conj))
}

#[derive(Clone, Debug)]
pub struct MackeySummand {
    pub representative: usize,
    /// `D ∩ gHg^{-1}` as a subgroup of `G`.
    pub intersection: SubgroupHandle,
}

#[derive(Clone, Debug)]
pub struct Mackey {
    pub summands: Vec<MackeySummand>,
    /// From `Res_D Ind_H^G Z` to `⊕_g Ind_{D ∩ gHg^{-1}}^D Z`; unimodular and
    /// `D`-equivariant.
    pub map: LatticeMap,
}

pub fn mackey_decompose(g: &GroupRef, h: &SubgroupHandle, d: &SubgroupHandle) -> Result<Mackey> {
    let (ind, cosets) = induced_perm_lattice(g, h);
    let mut coset_of = vec![0usize; g.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &x in c {
            coset_of[x] = i;
        }
    }
    let source = restrict(&ind, d)?;
    let dg = source.group().clone();
    let mut summands = Vec::new();
    let mut target: Option<GLattice> = None;
    let mut rows: Vec<(usize, usize)> = Vec::new(); // (target index, source index)
    let mut offset = 0;
    for dc in double_cosets(g, d, h) {
        let rep = dc.representative;
        let inter = d.intersection(&h.conjugate(rep));
        let local: Vec<usize> = inter.elements().iter().map(|&x| d.local(x).unwrap()).collect();
        let k = SubgroupHandle::new(&dg, local)?;
        let (piece, dcosets) = induced_perm_lattice(&dg, &k);
        for (j, c) in dcosets.iter().enumerate() {
            let dd = d.elements()[c[0]];
            rows.push((offset + j, coset_of[g.mul(dd, rep)]));
        }
        offset += piece.rank();
        target = Some(match target {
            None => piece,
            Some(t) => direct_sum(&t, &piece)?,
        });
        summands.push(MackeySummand {
            representative: rep,
            intersection: inter,
        });
    }
    let target = target.expect("at least one double coset");
    let mut matrix = IntMatrix::zeros(target.rank(), source.rank());
    for (t, s) in rows {
        matrix[(t, s)] = 1;
    }
    let map = LatticeMap::new(source, target, matrix)?;
    Ok(Mackey { summands, map })
}

/// `G`-set sanity helper used by tests: the regular lattice `Z[G]`.
pub fn regular_lattice(g: &GroupRef) -> GLattice {
    induced_perm_lattice(g, &SubgroupHandle::trivial(g)).0
}

/// Lattice over the trivial group.
pub fn zero_group_lattice(rank: usize) -> GLattice {
    let g = Arc::new(FiniteGroup::from_table(1, vec![0], "1").unwrap());
    trivial_lattice(&g, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{catalog, cyclic_subgroups, subgroup_closure, sylow_subgroup};

    fn s3_sub(cycles: &str) -> (GroupRef, SubgroupHandle) {
        let g = catalog::s3();
        let x = catalog::s3_element(&g, cycles);
        let h = subgroup_closure(&g, &[x]);
        (g, h)
    }

    #[test]
    fn trivial_lattices() {
        let g = catalog::cyclic(2);
        let m = trivial_lattice(&g, 3);
        assert_eq!(m.action(1), &IntMatrix::identity(3));
        assert_eq!(trivial_lattice(&g, 0).rank(), 0);
        assert!(m.verify());
    }

    #[test]
    fn induced_examples() {
        let (g, a3) = s3_sub("(1 2 3)");
        let (m, cosets) = induced_perm_lattice(&g, &a3);
        assert_eq!(m.rank(), 2);
        assert_eq!(cosets.len(), 2);
        let t = catalog::s3_element(&g, "(1 2)");
        assert_eq!(m.action(t), &IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]));
        assert!(m.verify());
        let (w, _) = induced_perm_lattice(&g, &SubgroupHandle::whole(&g));
        assert_eq!(w.rank(), 1);
        let a4 = catalog::a4_shape();
        let (m, _) = induced_perm_lattice(&a4, &subgroup_closure(&a4, &[1]));
        assert_eq!(m.rank(), 6);
        assert!(m.verify());
    }

    #[test]
    fn j_lattice_ranks_and_quotient() {
        let a4 = catalog::a4_shape();
        let h = subgroup_closure(&a4, &[1]);
        let (j, q) = j_lattice(&a4, &[(h, 1)]).unwrap();
        assert_eq!(j.rank(), 5);
        assert!(j.verify());
        // the diagonal lies in the kernel and the map is onto
        let ones = vec![1; 6];
        assert!(q.matrix.mul_vec(&ones).unwrap().iter().all(|&x| x == 0));
        let s = smith(&q.matrix, Track::none()).unwrap();
        assert_eq!(s.diag, vec![1; 5]);

        let k = catalog::klein();
        let (j, _) = j_lattice(&k, &[(SubgroupHandle::trivial(&k), 1)]).unwrap();
        assert_eq!(j.rank(), 3);
        let idx2: Vec<(SubgroupHandle, usize)> = cyclic_subgroups(&k)
            .into_iter()
            .filter(|c| c.order() == 2)
            .map(|c| (c, 1))
            .collect();
        assert_eq!(j_lattice(&k, &idx2).unwrap().0.rank(), 5);
        assert!(matches!(j_lattice(&k, &[]), Err(Error::EmptyFamily)));
    }

    #[test]
    fn multiplicity_rank_law() {
        let g = catalog::s3();
        let (_, t) = s3_sub("(1 2)");
        let (j, _) = j_lattice(&g, &[(t.clone(), 2), (SubgroupHandle::whole(&g), 3)]).unwrap();
        assert_eq!(j.rank(), 2 * 3 + 3 - 1);
        assert!(j.verify());
    }

    #[test]
    fn restriction_examples() {
        let a4 = catalog::a4_shape();
        let (j, _) = j_lattice(&a4, &[(subgroup_closure(&a4, &[1]), 1)]).unwrap();
        let s2 = sylow_subgroup(&a4, 2).unwrap().subgroup;
        let r = restrict(&j, &s2).unwrap();
        assert_eq!((r.rank(), r.group().order()), (5, 4));
        let r = restrict(&j, &SubgroupHandle::trivial(&a4)).unwrap();
        assert_eq!(r.group().order(), 1);
        let (g, a3) = s3_sub("(1 2 3)");
        let (ind, _) = induced_perm_lattice(&g, &a3);
        let (_, t) = s3_sub("(1 2)");
        let r = restrict(&ind, &t).unwrap();
        assert_eq!(r.action(1), &IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]));
    }

    #[test]
    fn twist_sign_lattice() {
        let (g, t12) = s3_sub("(1 2)");
        let tg = t12.to_group();
        let sign = GLattice::from_generators(&tg, 1, &[IntMatrix::from_rows(&[vec![-1]])]).unwrap();
        let r = catalog::s3_element(&g, "(1 2 3)");
        let (tw, conj) = twist(&sign, &t12, r).unwrap();
        let (_, t23) = s3_sub("(2 3)");
        assert_eq!(conj, t23);
        assert_eq!(tw.action(1), &IntMatrix::from_rows(&[vec![-1]]));
        let (same, h) = twist(&sign, &t12, 0).unwrap();
        assert_eq!(h, t12);
        assert_eq!(same.action(1), sign.action(1));
        let (back, h2) = twist(&tw, &conj, g.inv(r)).unwrap();
        assert_eq!(h2, t12);
        assert_eq!(back.action(1), sign.action(1));
    }

    #[test]
    fn mackey_examples() {
        let (g, t) = s3_sub("(1 2)");
        let (_, a3) = s3_sub("(1 2 3)");
        let mk = mackey_decompose(&g, &t, &a3).unwrap();
        assert_eq!(mk.summands.len(), 1);
        assert!(mk.summands[0].intersection.is_trivial());
        assert_eq!(mk.map.target.rank(), 3);
        assert!(mk.map.is_isomorphism());
        let whole = SubgroupHandle::whole(&g);
        let mk = mackey_decompose(&g, &whole, &a3).unwrap();
        assert_eq!(mk.summands.len(), 1);
        assert_eq!(mk.map.target.rank(), 1);
        let a4 = catalog::a4_shape();
        let s2 = sylow_subgroup(&a4, 2).unwrap().subgroup;
        let mk = mackey_decompose(&a4, &subgroup_closure(&a4, &[1]), &s2).unwrap();
        assert_eq!(mk.summands.len(), 3);
        assert!(mk.summands.iter().all(|s| s.intersection.order() == 2));
        assert!(mk.map.is_isomorphism());
    }

    #[test]
    fn mackey_on_all_small_pairs() {
        for g in catalog::small_groups() {
            let subs = crate::grp::subgroup_classes(&g);
            for h in &subs {
                for d in &subs {
                    let mk = mackey_decompose(&g, h, d).unwrap();
                    assert!(mk.map.is_isomorphism());
                }
            }
        }
    }

    #[test]
    fn direct_sum_examples() {
        let g = catalog::s3();
        let (j, _) = j_lattice(&g, &[(SubgroupHandle::trivial(&g), 1)]).unwrap();
        assert_eq!(direct_sum(&j, &trivial_lattice(&g, 0)).unwrap().rank(), j.rank());
        let a = trivial_lattice(&g, 2);
        assert_eq!(direct_sum(&a, &trivial_lattice(&g, 3)).unwrap().rank(), 5);
        let other = trivial_lattice(&catalog::cyclic(6), 1);
        assert!(matches!(direct_sum(&a, &other), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn generators_must_define_an_action() {
        let g = catalog::cyclic(3);
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert!(GLattice::from_generators(&g, 2, &[swap]).is_err());
        let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]);
        assert!(GLattice::from_generators(&g, 2, &[rot]).unwrap().verify());
    }
}
