//! Two-dimensional `F_p`-representations of groups of order prime to `p`,
//! the conditions (B) and (C) on a marked line, the degree sets `D_1(p)`,
//! `D_2(p)`, and exhaustive scans over subgroups of `GL_2(F_p)`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{gcd_u, is_power_of_two, is_prime, ord_p, pow_mod};
use crate::error::{Error, Result};
use crate::grp::{catalog, core, parse_cycles, subgroup_classes, FiniteGroup, GroupRef, SubgroupHandle};

/// Row-major `[[a, b], [c, d]]` over `F_p`.
pub type Mat2 = [u64; 4];

pub const IDENTITY: Mat2 = [1, 0, 0, 1];

pub fn mat_mul(p: u64, x: &Mat2, y: &Mat2) -> Mat2 {
    [
        (x[0] * y[0] + x[1] * y[2]) % p,
        (x[0] * y[1] + x[1] * y[3]) % p,
        (x[2] * y[0] + x[3] * y[2]) % p,
        (x[2] * y[1] + x[3] * y[3]) % p,
    ]
}

pub fn mat_apply(p: u64, m: &Mat2, v: [u64; 2]) -> [u64; 2] {
    [(m[0] * v[0] + m[1] * v[1]) % p, (m[2] * v[0] + m[3] * v[1]) % p]
}

pub fn mat_det(p: u64, m: &Mat2) -> u64 {
    (m[0] * m[3] % p + p - m[1] * m[2] % p) % p
}

pub fn mat_pow(p: u64, m: &Mat2, mut k: u64) -> Mat2 {
    let (mut acc, mut base) = (IDENTITY, *m);
    while k > 0 {
        if k & 1 == 1 {
            acc = mat_mul(p, &acc, &base);
        }
        base = mat_mul(p, &base, &base);
        k >>= 1;
    }
    acc
}

fn mat_order(p: u64, m: &Mat2) -> u64 {
    let mut x = *m;
    let mut k = 1;
    while x != IDENTITY {
        x = mat_mul(p, &x, m);
        k += 1;
    }
    k
}

fn diag(a: u64, d: u64) -> Mat2 {
    [a, 0, 0, d]
}

fn companion(p: u64, trace: u64, norm: u64) -> Mat2 {
    [0, (p - norm % p) % p, 1, trace % p]
}

/// Projective normal form: first nonzero coordinate equal to 1.
pub fn normalize_line(p: u64, v: [u64; 2]) -> Option<[u64; 2]> {
    let (a, b) = (v[0] % p, v[1] % p);
    if a != 0 {
        let ia = pow_mod(a, p - 2, p);
        Some([1, b * ia % p])
    } else if b != 0 {
        Some([0, 1])
    } else {
        None
    }
}

/// All `p + 1` lines of `F_p^2`.
pub fn lines(p: u64) -> Vec<[u64; 2]> {
    let mut out: Vec<[u64; 2]> = (0..p).map(|a| [1, a]).collect();
    out.push([0, 1]);
    out
}

fn on_line(p: u64, l: [u64; 2], w: [u64; 2]) -> bool {
    (l[0] * w[1] % p + p - l[1] * w[0] % p).is_multiple_of(p)
}

/// Dimension of the common fixed space of `ms`.
fn fixed_dim(p: u64, ms: &[Mat2]) -> usize {
    let rows: Vec<[u64; 2]> = ms
        .iter()
        .flat_map(|m| [[(m[0] + p - 1) % p, m[1]], [m[2], (m[3] + p - 1) % p]])
        .filter(|r| r[0] != 0 || r[1] != 0)
        .collect();
    match rows.first() {
        None => 2,
        Some(&r0) => {
            if rows.iter().any(|r| !on_line(p, r0, *r)) {
                0
            } else {
                1
            }
        }
    }
}

/// Smallest element of `F_p^×` of exact multiplicative order `k`.
fn root_of_unity(p: u64, k: u64) -> Option<u64> {
    (1..p).find(|&w| {
        pow_mod(w, k, p) == 1 && crate::arith::factorize(k).iter().all(|&(q, _)| pow_mod(w, k / q, p) != 1)
    })
}

/// `F_{p^2} = F_p[x]/(x^2 - a x - b)`; elements are `c0 + c1 x`.
#[derive(Clone, Copy, Debug)]
pub struct Fp2 {
    pub p: u64,
    a: u64,
    b: u64,
}

impl Fp2 {
    /// `x^2 = x + 1` over `F_2`; otherwise `x^2 = r` for the least
    /// non-residue `r`.
    pub fn new(p: u64) -> Self {
        if p == 2 {
            return Fp2 { p, a: 1, b: 1 };
        }
        let r = (2..p).find(|&r| pow_mod(r, (p - 1) / 2, p) == p - 1).unwrap();
        Fp2 { p, a: 0, b: r }
    }

    pub fn mul(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let p = self.p;
        let c2 = x.1 * y.1 % p;
        let c0 = (x.0 * y.0 + c2 * self.b) % p;
        let c1 = (x.0 * y.1 + x.1 * y.0 + c2 * self.a) % p;
        (c0, c1)
    }

    pub fn pow(&self, x: (u64, u64), mut k: u64) -> (u64, u64) {
        let (mut acc, mut base) = ((1, 0), x);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn frobenius(&self, x: (u64, u64)) -> (u64, u64) {
        self.pow(x, self.p)
    }

    /// `(x + x^p, x^{p+1})`, both in `F_p`.
    pub fn trace_norm(&self, x: (u64, u64)) -> (u64, u64) {
        let f = self.frobenius(x);
        let t = ((x.0 + f.0) % self.p, (x.1 + f.1) % self.p);
        let n = self.mul(x, f);
        debug_assert!(t.1 == 0 && n.1 == 0);
        (t.0, n.0)
    }

    pub fn elements(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let p = self.p;
        (0..p * p).map(move |i| (i % p, i / p))
    }

    fn order(&self, x: (u64, u64)) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != (1, 0) {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// An element of exact order `k` outside `F_p`, if any (least in the
    /// enumeration order).
    pub fn root_outside_fp(&self, k: u64) -> Option<(u64, u64)> {
        self.elements().find(|&x| x.1 != 0 && self.order(x) == k)
    }
}

/// A representation `G' -> GL_2(F_p)` with a marked line `L` and a subgroup
/// `H'` stabilizing it.
#[derive(Clone, Debug)]
pub struct RepTwoDim {
    pub group: GroupRef,
    pub p: u64,
    pub matrices: Vec<Mat2>,
    pub line: [u64; 2],
    pub hprime: SubgroupHandle,
}

impl RepTwoDim {
    pub fn new(group: &GroupRef, p: u64, matrices: Vec<Mat2>, line: [u64; 2], hprime: SubgroupHandle) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let n = group.order();
        if gcd_u(n as u64, p) != 1 {
            return Err(Error::NotCoprime { n: n as u64, p });
        }
        if matrices.len() != n {
            return Err(Error::PreconditionFailed("one matrix per group element".into()));
        }
        for a in 0..n {
            if mat_det(p, &matrices[a]) == 0 {
                return Err(Error::PreconditionFailed(format!("matrix of element {a} is singular")));
            }
            for b in 0..n {
                if mat_mul(p, &matrices[a], &matrices[b]) != matrices[group.mul(a, b)] {
                    return Err(Error::PreconditionFailed("matrices do not define a homomorphism".into()));
                }
            }
        }
        if !crate::lat::same_group(hprime.parent(), group) {
            return Err(Error::GroupMismatch("H' is not a subgroup of G'".into()));
        }
        let line = normalize_line(p, line).ok_or_else(|| Error::PreconditionFailed("zero line".into()))?;
        if hprime.elements().iter().any(|&h| !on_line(p, line, mat_apply(p, &matrices[h], line))) {
            return Err(Error::PreconditionFailed("H' does not stabilize the line".into()));
        }
        Ok(RepTwoDim {
            group: group.clone(),
            p,
            matrices,
            line,
            hprime,
        })
    }

    /// Extend images of generating elements to a homomorphism.
    pub fn from_images(
        group: &GroupRef,
        p: u64,
        images: &[(usize, Mat2)],
        line: [u64; 2],
        hprime: SubgroupHandle,
    ) -> Result<Self> {
        let n = group.order();
        let mut m: Vec<Option<Mat2>> = vec![None; n];
        m[0] = Some(IDENTITY);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &(s, a) in images {
                let y = group.mul(x, s);
                let v = mat_mul(p, &m[x].unwrap(), &a);
                match m[y] {
                    None => {
                        m[y] = Some(v);
                        queue.push_back(y);
                    }
                    Some(w) if w != v => {
                        return Err(Error::PreconditionFailed("images violate a relation".into()));
                    }
                    _ => {}
                }
            }
        }
        let matrices = m
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::PreconditionFailed("images do not generate the group".into()))?;
        RepTwoDim::new(group, p, matrices, line, hprime)
    }

    pub fn with_line(&self, line: [u64; 2], hprime: SubgroupHandle) -> Result<Self> {
        RepTwoDim::new(&self.group, self.p, self.matrices.clone(), line, hprime)
    }

    pub fn fixed_space_dim(&self) -> usize {
        fixed_dim(self.p, &self.matrices)
    }

    /// `Stab_{G'}(L)`.
    pub fn line_stabilizer(&self) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&g| on_line(self.p, self.line, mat_apply(self.p, &self.matrices[g], self.line)))
            .collect()
    }
}

/// `(B, C)`: `V^{G'} = 0`, and `Stab_{G'}(L)` acts trivially on `L`.
pub fn check_bc(rep: &RepTwoDim) -> (bool, bool) {
    let b = rep.fixed_space_dim() == 0;
    let c = rep
        .line_stabilizer()
        .into_iter()
        .all(|g| mat_apply(rep.p, &rep.matrices[g], rep.line) == rep.line);
    (b, c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DMembership {
    pub d: u64,
    pub p: u64,
    pub in_pz: bool,
    pub in_p2z: bool,
    pub in_d1: bool,
    pub in_d2: bool,
    pub in_s: bool,
}

pub fn d_membership(d: u64, p: u64) -> Result<DMembership> {
    if d == 0 {
        return Err(Error::PreconditionFailed("d must be positive".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let in_pz = d.is_multiple_of(p);
    let in_p2z = d.is_multiple_of(p * p);
    let in_d1 = in_pz && gcd_u(d, p - 1) >= 3;
    // 1 = 2^0 counts as a power of two
    let in_d2 = in_pz && !is_power_of_two(gcd_u(d, p + 1));
    Ok(DMembership {
        d,
        p,
        in_pz,
        in_p2z,
        in_d1,
        in_d2,
        in_s: in_p2z || in_d1 || in_d2,
    })
}

/// Least element of `p^2 Z ∪ D_1(p) ∪ D_2(p)`: `4` for `p = 2`, else `3p`.
pub fn s_min(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let found = (1..=p).map(|k| k * p).find(|&d| d_membership(d, p).unwrap().in_s).unwrap();
    debug_assert_eq!(found, if p == 2 { 4 } else { 3 * p });
    Ok(found)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CyclicRepKind {
    /// `χ ⊕ χ'` with the given values at the generator.
    Split { w1: u64, w2: u64 },
    /// Irreducible with characteristic polynomial `X^2 - tX + N`.
    Irreducible { trace: u64, norm: u64 },
}

#[derive(Clone, Debug)]
pub struct CyclicRepClass {
    pub kind: CyclicRepKind,
    /// Carries the placeholder line `<e_1>` and `H' = {0}`.
    pub template: RepTwoDim,
}

fn cyclic_generator(g: &GroupRef) -> usize {
    (0..g.order()).find(|&x| g.element_order(x) == g.order()).unwrap()
}

/// Isomorphism classes of 2-dimensional representations of `Z/n` over
/// `F_p`: unordered pairs of characters, and the irreducibles, one per
/// Frobenius orbit `{x, x^p}` of `n`-th roots of unity in `F_{p^2} \ F_p`.
pub fn reps_of_cyclic(p: u64, n: u64) -> Result<Vec<CyclicRepClass>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 || gcd_u(n, p) != 1 {
        return Err(Error::NotCoprime { n, p });
    }
    let g = catalog::cyclic(n as usize);
    let gen = cyclic_generator(&g);
    let chars: Vec<u64> = (1..p).filter(|&w| pow_mod(w, n, p) == 1).collect();
    let mut kinds = Vec::new();
    for (i, &w1) in chars.iter().enumerate() {
        for &w2 in &chars[i..] {
            kinds.push((CyclicRepKind::Split { w1, w2 }, diag(w1, w2)));
        }
    }
    let f = Fp2::new(p);
    let mut seen = HashSet::new();
    for x in f.elements().filter(|x| x.1 != 0) {
        if f.pow(x, n) == (1, 0) {
            let (t, nm) = f.trace_norm(x);
            if seen.insert((t, nm)) {
                kinds.push((CyclicRepKind::Irreducible { trace: t, norm: nm }, companion(p, t, nm)));
            }
        }
    }
    kinds
        .into_iter()
        .map(|(kind, m)| {
            let template = RepTwoDim::from_images(&g, p, &[(gen, m)], [1, 0], SubgroupHandle::trivial(&g))?;
            Ok(CyclicRepClass { kind, template })
        })
        .collect()
}

fn odd_prime_factors(n: u64) -> Vec<u64> {
    crate::arith::factorize(n).into_iter().map(|(q, _)| q).filter(|&q| q != 2).collect()
}

/// A representation of `Z/n` (acting through a quotient) with `H' = {0}` and
/// a line satisfying (B) and (C), when `pn ∈ D_1(p) ∪ D_2(p)`.
pub fn witness_rep(p: u64, n: u64) -> Result<Option<RepTwoDim>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 || gcd_u(n, p) != 1 {
        return Err(Error::NotCoprime { n, p });
    }
    let m = d_membership(p * n, p)?;
    if !(m.in_d1 || m.in_d2) {
        return Ok(None);
    }
    let (image, line) = if let Some(&l) = odd_prime_factors(gcd_u(n, p - 1)).first() {
        let z = root_of_unity(p, l).unwrap();
        (diag(z, z * z % p), [1, 1])
    } else if gcd_u(n, p - 1).is_multiple_of(4) {
        let z = root_of_unity(p, 4).unwrap();
        (diag(z, z * z % p), [1, 1])
    } else {
        let l = odd_prime_factors(gcd_u(n, p + 1))[0];
        let f = Fp2::new(p);
        let (t, nm) = f.trace_norm(f.root_outside_fp(l).unwrap());
        debug_assert_eq!(nm, 1);
        (companion(p, t, nm), [1, 0])
    };
    let g = catalog::cyclic(n as usize);
    let gen = cyclic_generator(&g);
    let rep = RepTwoDim::from_images(&g, p, &[(gen, image)], line, SubgroupHandle::trivial(&g))?;
    debug_assert_eq!(check_bc(&rep), (true, true));
    Ok(Some(rep))
}

/// `J_{S_3/<(1 2)>} ⊗ F_p` with `H' = <(1 2)>` and the line spanned by
/// `2[e] - [(1 3)] - [(2 3)]`.
pub fn s3_standard_rep(p: u64) -> Result<RepTwoDim> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::PreconditionFailed(format!("p = {p} must be at least 5")));
    }
    let g = catalog::s3();
    // S_3/<(1 2)> is the set of points via gH -> g(3); J is the permutation
    // module on e_1, e_2, e_3 modulo e_1 + e_2 + e_3, with basis e_1, e_2.
    let point = |cyc: &str| -> usize {
        if cyc.is_empty() {
            return 2;
        }
        parse_cycles(cyc, 3).unwrap()[2] as usize
    };
    let coords = |i: usize| -> [u64; 2] {
        match i {
            0 => [1, 0],
            1 => [0, 1],
            _ => [p - 1, p - 1],
        }
    };
    let perm_matrix = |cyc: &str, inverse: bool| -> Mat2 {
        let mut perm = parse_cycles(cyc, 3).unwrap();
        if inverse {
            let mut inv = vec![0u16; 3];
            for (i, &x) in perm.iter().enumerate() {
                inv[x as usize] = i as u16;
            }
            perm = inv;
        }
        let c0 = coords(perm[0] as usize);
        let c1 = coords(perm[1] as usize);
        [c0[0], c1[0], c0[1], c1[1]]
    };
    let mut v = [0u64; 2];
    for (coef, cyc) in [(2u64, ""), (p - 1, "(1 3)"), (p - 1, "(2 3)")] {
        let c = coords(point(cyc));
        v = [(v[0] + coef * c[0]) % p, (v[1] + coef * c[1]) % p];
    }
    let t = catalog::s3_element(&g, "(1 2)");
    let r = catalog::s3_element(&g, "(1 2 3)");
    let hprime = crate::grp::subgroup_closure(&g, &[t]);
    let mut last = None;
    for inverse in [false, true] {
        let images = [(t, perm_matrix("(1 2)", inverse)), (r, perm_matrix("(1 2 3)", inverse))];
        match RepTwoDim::from_images(&g, p, &images, v, hprime.clone()) {
            Ok(rep) => {
                let cyc = ["(1 3)", "(2 3)", "(1 3 2)"];
                if cyc.iter().all(|c| rep.matrices[catalog::s3_element(&g, c)] == perm_matrix(c, inverse)) {
                    return Ok(rep);
                }
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::PreconditionFailed("permutation convention mismatch".into())))
}

#[derive(Clone, Debug, Serialize)]
pub struct Sylow2 {
    pub p: u64,
    pub generators: Vec<Mat2>,
    pub order: u64,
    pub expected_order: u64,
    /// `X^{2^s} = -1`, `Y^2 = 1`, `Y X Y^{-1} = X^{2^s - 1}`; only checked for
    /// `p ≡ 3 (mod 4)`.
    pub relations_hold: Option<bool>,
}

fn matrix_closure(p: u64, gens: &[Mat2], bound: usize) -> Result<Vec<Mat2>> {
    let (_, elems) = FiniteGroup::from_generators(IDENTITY, gens, |a, b| mat_mul(p, a, b), bound, "")?;
    Ok(elems)
}

/// Generators of a Sylow 2-subgroup of `GL_2(F_p)`, `p` odd.
pub fn sylow2_gl2(p: u64) -> Result<Sylow2> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::PreconditionFailed("p must be odd".into()));
    }
    let expected = 1u64 << ord_p(p * (p - 1) * (p - 1) * (p + 1), 2);
    let (generators, relations_hold) = if p % 4 == 1 {
        let s = ord_p(p - 1, 2);
        let z = root_of_unity(p, 1 << s).unwrap();
        (vec![diag(z, 1), diag(1, z), [0, 1, 1, 0]], None)
    } else {
        let s = ord_p(p + 1, 2);
        let f = Fp2::new(p);
        let zeta = f.root_outside_fp(1 << (s + 1)).unwrap();
        let (t, _) = f.trace_norm(zeta);
        let x: Mat2 = [0, 1, 1, t];
        let y = mat_mul(p, &[0, 1, p - 1, 0], &x);
        let minus = diag(p - 1, p - 1);
        let yi = mat_pow(p, &y, mat_order(p, &y) - 1);
        let rel = mat_pow(p, &x, 1 << s) == minus
            && mat_mul(p, &y, &y) == IDENTITY
            && mat_mul(p, &mat_mul(p, &y, &x), &yi) == mat_pow(p, &x, (1 << s) - 1);
        (vec![x, y], Some(rel))
    };
    let order = matrix_closure(p, &generators, 1 << 20)?.len() as u64;
    Ok(Sylow2 {
        p,
        generators,
        order,
        expected_order: expected,
        relations_hold,
    })
}

/// `G = V x| G'` with `H = L x| H'` and `S_p = V x| {1}`; `(v, g)` has index
/// `v_0 + p v_1 + p^2 g`.
pub fn build_semidirect(rep: &RepTwoDim) -> Result<(GroupRef, SubgroupHandle, SubgroupHandle)> {
    let p = rep.p as usize;
    let q = rep.group.order();
    let vv = p * p;
    let n = vv * q;
    let split = |x: usize| ([(x % vv % p) as u64, (x % vv / p) as u64], x / vv);
    let join = |v: [u64; 2], g: usize| v[0] as usize + p * v[1] as usize + vv * g;
    let mut table = vec![0usize; n * n];
    for a in 0..n {
        let (v, g) = split(a);
        for b in 0..n {
            let (w, h) = split(b);
            let gw = mat_apply(rep.p, &rep.matrices[g], w);
            table[a * n + b] = join([(v[0] + gw[0]) % rep.p, (v[1] + gw[1]) % rep.p], rep.group.mul(g, h));
        }
    }
    let label = format!("(Z/{p})^2 x| {}", rep.group.label());
    let group: GroupRef = Arc::new(FiniteGroup::from_table(n, table, label)?);
    let l = rep.line;
    let h_elems: Vec<usize> = rep
        .hprime
        .elements()
        .iter()
        .flat_map(|&h| (0..rep.p).map(move |c| join([c * l[0] % rep.p, c * l[1] % rep.p], h)))
        .collect();
    let h = SubgroupHandle::new(&group, h_elems)?;
    let s = SubgroupHandle::new(&group, (0..vv).collect())?;
    Ok((group, h, s))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScanBudget {
    /// Refuse `GL_2(F_p)` larger than this.
    pub max_gl2_order: usize,
    /// Stop after this many conjugacy classes of subgroups.
    pub max_classes: usize,
}

impl Default for ScanBudget {
    fn default() -> Self {
        ScanBudget {
            max_gl2_order: 20_000,
            max_classes: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanHit {
    /// Order of `G' = G'_1 x Z/inflation`.
    pub gprime_order: usize,
    pub gprime_cyclic: bool,
    /// The image `G'_1` in `GL_2(F_p)`.
    pub image_generators: Vec<Mat2>,
    pub image_order: usize,
    pub hprime_order: usize,
    /// `(G'_1 : H'_1)`, a divisor of `n`.
    pub image_index: usize,
    /// Order of the trivially acting cyclic factor making the index `n`.
    pub inflation: usize,
    pub line: [u64; 2],
    /// The core of `H'` acts trivially on `V`.
    pub core_acts_trivially: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub p: u64,
    pub n: u64,
    pub budget: ScanBudget,
    pub conclusive: bool,
    pub subgroup_classes: usize,
    pub hits: Vec<ScanHit>,
    pub warnings: Vec<String>,
}

struct Gl2 {
    p: u64,
    elems: Vec<Mat2>,
    code_to_idx: Vec<u32>,
    inv: Vec<u32>,
}

impl Gl2 {
    fn new(p: u64) -> Self {
        let q = p as usize;
        let mut elems = Vec::new();
        let mut code_to_idx = vec![u32::MAX; q * q * q * q];
        for code in 0..q * q * q * q {
            let m = [
                (code % q) as u64,
                (code / q % q) as u64,
                (code / (q * q) % q) as u64,
                (code / (q * q * q)) as u64,
            ];
            if mat_det(p, &m) != 0 {
                code_to_idx[code] = elems.len() as u32;
                elems.push(m);
            }
        }
        let mut g = Gl2 {
            p,
            elems,
            code_to_idx,
            inv: Vec::new(),
        };
        g.inv = (0..g.elems.len())
            .map(|i| {
                let m = g.elems[i];
                let o = mat_order(p, &m);
                g.idx(&mat_pow(p, &m, o - 1))
            })
            .collect();
        g
    }

    fn idx(&self, m: &Mat2) -> u32 {
        let q = self.p;
        self.code_to_idx[(m[0] + q * m[1] + q * q * m[2] + q * q * q * m[3]) as usize]
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.idx(&mat_mul(self.p, &self.elems[a as usize], &self.elems[b as usize]))
    }

    fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = HashSet::from([self.idx(&IDENTITY)]);
        let mut out = vec![self.idx(&IDENTITY)];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    out.push(y);
                }
            }
            head += 1;
        }
        out.sort_unstable();
        out
    }

    /// Conjugacy-invariant fingerprint: sorted `(trace, det)` multiset.
    fn fingerprint(&self, s: &[u32]) -> Vec<(u64, u64)> {
        let mut f: Vec<(u64, u64)> = s
            .iter()
            .map(|&x| {
                let m = self.elems[x as usize];
                ((m[0] + m[3]) % self.p, mat_det(self.p, &m))
            })
            .collect();
        f.sort_unstable();
        f
    }

    fn conjugate(&self, s: &[u32], t: &HashSet<u32>) -> bool {
        (0..self.elems.len() as u32).any(|g| {
            let gi = self.inv[g as usize];
            s.iter().all(|&x| t.contains(&self.mul(self.mul(g, x), gi)))
        })
    }
}

/// Conjugacy-class representatives (element lists, generators) of the
/// subgroups of `GL_2(F_p)` of order prime to `p`.
fn pprime_subgroup_classes(gl: &Gl2, budget: &ScanBudget) -> (Vec<(Vec<u32>, Vec<u32>)>, bool) {
    let p = gl.p;
    let pprime: Vec<u32> = (0..gl.elems.len() as u32)
        .filter(|&x| !mat_order(p, &gl.elems[x as usize]).is_multiple_of(p))
        .collect();
    let trivial = vec![gl.idx(&IDENTITY)];
    let mut reps: Vec<(Vec<u32>, Vec<u32>)> = vec![(trivial.clone(), Vec::new())];
    let mut buckets: HashMap<Vec<(u64, u64)>, Vec<usize>> = HashMap::new();
    buckets.entry(gl.fingerprint(&trivial)).or_default().push(0);
    let mut seen: HashSet<Vec<u32>> = HashSet::from([trivial]);
    let mut head = 0;
    let mut complete = true;
    while head < reps.len() {
        let (elems, gens) = reps[head].clone();
        head += 1;
        let members: HashSet<u32> = elems.iter().copied().collect();
        for &g in &pprime {
            if members.contains(&g) {
                continue;
            }
            let mut ng = gens.clone();
            ng.push(g);
            let t = gl.closure(&ng);
            if (t.len() as u64).is_multiple_of(p) || !seen.insert(t.clone()) {
                continue;
            }
            let fp = gl.fingerprint(&t);
            let tset: HashSet<u32> = t.iter().copied().collect();
            let bucket = buckets.entry(fp).or_default();
            if bucket.iter().any(|&r| gl.conjugate(&reps[r].0, &tset)) {
                continue;
            }
            if reps.len() >= budget.max_classes {
                complete = false;
                break;
            }
            bucket.push(reps.len());
            reps.push((t, ng));
        }
        if !complete {
            break;
        }
    }
    (reps, complete)
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Every `(G', H', L)` with `(G' : H') = n`, `G'` acting through a subgroup
/// of `GL_2(F_p)` of order prime to `p`, satisfying (B) and (C). A
/// non-faithful `G'` is recorded through its image `G'_1` and an inflation
/// factor, since (B) and (C) only see the image.
pub fn exhaustive_scan(p: u64, n: u64, budget: &ScanBudget) -> Result<ScanReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 || gcd_u(n, p) != 1 {
        return Err(Error::NotCoprime { n, p });
    }
    let mut report = ScanReport {
        p,
        n,
        budget: *budget,
        conclusive: true,
        subgroup_classes: 0,
        hits: Vec::new(),
        warnings: Vec::new(),
    };
    let gl2_order = ((p * p - 1) * (p * p - p)) as usize;
    if gl2_order > budget.max_gl2_order {
        report.conclusive = false;
        report
            .warnings
            .push(format!("GL_2(F_{p}) has {gl2_order} elements, over the budget of {}", budget.max_gl2_order));
        return Ok(report);
    }
    let gl = Gl2::new(p);
    let (reps, complete) = pprime_subgroup_classes(&gl, budget);
    report.subgroup_classes = reps.len();
    if !complete {
        report.conclusive = false;
        report
            .warnings
            .push(format!("stopped after {} subgroup classes", budget.max_classes));
    }
    let ms: Vec<u64> = divisors(n).into_iter().filter(|&m| m > 1).collect();
    for (elems, gens) in &reps {
        let order = elems.len();
        if !ms.iter().any(|&m| (order as u64).is_multiple_of(m)) {
            continue;
        }
        let gen_mats: Vec<Mat2> = gens.iter().map(|&g| gl.elems[g as usize]).collect();
        let (fg, mats) = FiniteGroup::from_generators(IDENTITY, &gen_mats, |a, b| mat_mul(p, a, b), order + 1, "G'")?;
        let grp: GroupRef = Arc::new(fg);
        if fixed_dim(p, &mats) != 0 {
            continue;
        }
        let cyclic = (0..order).any(|x| grp.element_order(x) == order);
        for h in subgroup_classes(&grp) {
            let m = h.index() as u64;
            if m == 1 || !ms.contains(&m) {
                continue;
            }
            let rep_lines = lines(p);
            for l in rep_lines {
                let rep = match RepTwoDim::new(&grp, p, mats.clone(), l, h.clone()) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                if check_bc(&rep) != (true, true) {
                    continue;
                }
                let k = (n / m) as usize;
                let core_trivial = core(&grp, &h).elements().iter().all(|&x| mats[x] == IDENTITY);
                report.hits.push(ScanHit {
                    gprime_order: order * k,
                    gprime_cyclic: cyclic && gcd_u(order as u64, k as u64) == 1,
                    image_generators: gen_mats.clone(),
                    image_order: order,
                    hprime_order: h.order(),
                    image_index: m as usize,
                    inflation: k,
                    line: rep.line,
                    core_acts_trivially: core_trivial,
                });
            }
        }
    }
    report.hits.sort_by(|a, b| {
        (a.image_order, a.image_index, &a.image_generators, a.hprime_order, a.line).cmp(&(
            b.image_order,
            b.image_index,
            &b.image_generators,
            b.hprime_order,
            b.line,
        ))
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thm::conditions_4_18;
    use proptest::prelude::*;

    #[test]
    fn membership_examples() {
        assert!(d_membership(55, 11).unwrap().in_d1);
        let m = d_membership(91, 13).unwrap();
        assert!(m.in_d2 && !m.in_d1);
        assert!(d_membership(95, 19).unwrap().in_d2);
        let m = d_membership(10, 5).unwrap();
        assert!(!m.in_d1 && !m.in_d2 && !m.in_s);
        let m = d_membership(4, 2).unwrap();
        assert!(m.in_p2z && m.in_s);
        assert!(!d_membership(7, 5).unwrap().in_pz);
        for (p, s) in [(2, 4), (3, 9), (5, 15), (7, 21), (11, 33), (13, 39)] {
            assert_eq!(s_min(p).unwrap(), s);
        }
    }

    #[test]
    fn bc_examples() {
        let z4 = catalog::cyclic(4);
        let g = cyclic_generator(&z4);
        let z = root_of_unity(5, 4).unwrap();
        let rep = RepTwoDim::from_images(&z4, 5, &[(g, diag(z, z * z % 5))], [1, 1], SubgroupHandle::trivial(&z4)).unwrap();
        assert_eq!(check_bc(&rep), (true, true));
        // a trivial first character fixes e_1
        let rep = RepTwoDim::from_images(&z4, 5, &[(g, diag(1, z))], [1, 1], SubgroupHandle::trivial(&z4)).unwrap();
        assert!(!check_bc(&rep).0);
        let z3 = catalog::cyclic(3);
        let v = witness_rep(5, 3).unwrap().unwrap();
        for l in lines(5) {
            assert_eq!(check_bc(&v.with_line(l, SubgroupHandle::trivial(&v.group)).unwrap()), (true, true));
        }
        assert_eq!(v.group.order(), z3.order());
    }

    #[test]
    fn cyclic_classes() {
        assert_eq!(reps_of_cyclic(5, 4).unwrap().len(), 10);
        let c = reps_of_cyclic(5, 3).unwrap();
        assert_eq!(c.len(), 2);
        assert!(matches!(c[1].kind, CyclicRepKind::Irreducible { norm: 1, .. }));
        assert_eq!(reps_of_cyclic(7, 1).unwrap().len(), 1);
        assert!(matches!(reps_of_cyclic(5, 10), Err(Error::NotCoprime { .. })));
        // over F_2 the irreducible of Z/3 is the alpha action
        let c = reps_of_cyclic(2, 3).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn witness_examples() {
        assert!(witness_rep(5, 2).unwrap().is_none());
        let w = witness_rep(5, 4).unwrap().unwrap();
        assert_eq!(w.line, [1, 1]);
        assert_eq!(check_bc(&w), (true, true));
        assert!(witness_rep(3, 4).unwrap().is_none());
        for p in [2u64, 5, 7, 11, 13] {
            for n in 1..=24u64 {
                if n % p == 0 {
                    continue;
                }
                let m = d_membership(p * n, p).unwrap();
                match witness_rep(p, n).unwrap() {
                    Some(r) => {
                        assert!(m.in_d1 || m.in_d2);
                        assert_eq!(check_bc(&r), (true, true));
                        assert_eq!(r.hprime.index() as u64, n);
                    }
                    None => assert!(!(m.in_d1 || m.in_d2)),
                }
            }
        }
    }

    #[test]
    fn s3_rep() {
        for p in [5u64, 7, 11] {
            let r = s3_standard_rep(p).unwrap();
            assert_eq!(check_bc(&r), (true, true));
            let t = catalog::s3_element(&r.group, "(1 2)");
            let fixed: Vec<[u64; 2]> = lines(p)
                .into_iter()
                .filter(|&l| mat_apply(p, &r.matrices[t], l) == l)
                .collect();
            assert_eq!(fixed, vec![r.line]);
            assert_eq!(r.line, [1, 1]);
        }
        assert!(s3_standard_rep(3).is_err());
    }

    #[test]
    fn sylow2_orders_and_relations() {
        // 2^{ord_2(p(p-1)^2(p+1))}; for p = 13 that is 2^(4+1)
        for (p, o) in [(3u64, 16u64), (5, 32), (7, 32), (11, 16), (13, 32)] {
            let s = sylow2_gl2(p).unwrap();
            assert_eq!(s.order, o, "p = {p}");
            assert_eq!(s.order, s.expected_order);
        }
        for p in [3u64, 7, 11, 19, 23] {
            assert_eq!(sylow2_gl2(p).unwrap().relations_hold, Some(true));
        }
        assert!(sylow2_gl2(2).is_err());
    }

    #[test]
    fn irreducible_cyclic_relation() {
        for (p, l) in [(2u64, 3u64), (5, 3), (11, 3), (13, 7), (19, 5)] {
            let f = Fp2::new(p);
            let z = f.root_outside_fp(l).unwrap();
            let (t, nm) = f.trace_norm(z);
            assert_eq!(nm, 1);
            let s = companion(p, t, nm);
            for v0 in 0..p {
                for v1 in 0..p {
                    if (v0, v1) == (0, 0) {
                        continue;
                    }
                    let v = [v0, v1];
                    let sv = mat_apply(p, &s, v);
                    assert!(!on_line(p, v, sv));
                    let s2v = mat_apply(p, &s, sv);
                    assert_eq!(s2v, [(t * sv[0] + p - v[0]) % p, (t * sv[1] + p - v[1]) % p]);
                }
            }
        }
    }

    #[test]
    fn semidirect_examples() {
        let z3 = catalog::cyclic(3);
        let g = cyclic_generator(&z3);
        let rep = RepTwoDim::from_images(&z3, 2, &[(g, [0, 1, 1, 1])], [1, 0], SubgroupHandle::trivial(&z3)).unwrap();
        let (grp, h, s) = build_semidirect(&rep).unwrap();
        assert_eq!((grp.order(), h.order(), s.order()), (12, 2, 4));
        assert!(s.is_normal());
        let c = conditions_4_18(&grp, &h, 2).unwrap();
        assert!(c.all());
        let (g75, h75, _) = build_semidirect(&witness_rep(5, 3).unwrap().unwrap()).unwrap();
        assert_eq!((g75.order(), h75.index()), (75, 15));
        let (g150, h150, _) = build_semidirect(&s3_standard_rep(5).unwrap()).unwrap();
        assert_eq!(g150.order(), 150);
        assert_eq!(
            crate::thm::classify_6_11(&g150, &h150).unwrap(),
            crate::thm::Classification::Beta(5)
        );
    }

    #[test]
    fn scans_at_p5() {
        let b = ScanBudget::default();
        assert!(exhaustive_scan(5, 2, &b).unwrap().hits.is_empty());
        let r = exhaustive_scan(5, 3, &b).unwrap();
        assert!(r.conclusive);
        assert!(r.hits.iter().any(|h| h.image_order == 3 && h.inflation == 1));
        let r = exhaustive_scan(5, 4, &b).unwrap();
        assert!(!r.hits.is_empty());
        assert!(r.hits.iter().all(|h| h.gprime_cyclic && h.gprime_order == 4));
        assert!(r.hits.iter().all(|h| h.core_acts_trivially));
    }

    proptest! {
        #[test]
        fn membership_is_closed_under_multiples(d in 1u64..400, k in 1u64..20, pi in 0usize..6) {
            let p = [2u64, 3, 5, 7, 11, 13][pi];
            let a = d_membership(d, p).unwrap();
            let b = d_membership(d * k, p).unwrap();
            prop_assert!(!a.in_d1 || b.in_d1);
            prop_assert!(!a.in_d2 || b.in_d2);
            prop_assert!(!a.in_s || b.in_s);
            prop_assert_eq!(a.in_s, a.in_p2z || a.in_d1 || a.in_d2);
            prop_assert!(!(a.in_d1 || a.in_d2) || a.in_pz);
        }
    }
}
