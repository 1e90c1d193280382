//! Brute-force integer cohomology `H^j(G, M)`, `j <= 2`, on normalized bar
//! cochains, and the kernel `Ш²_D(G, M)` of restriction to a family `D`.
//!
//! A normalized `j`-cochain is a map `(G \ {1})^j -> Z^r`, flattened with the
//! last argument varying fastest and the lattice coordinate innermost.
//!
//! For `j >= 1` the group `H^j` is finite and `Z^j = ker d^j` is saturated in
//! `C^j`, so `H^j` is exactly the torsion of `coker d^{j-1}`. Only `d^{j-1}`
//! is ever built: its rows are fed into a sparse echelon basis in
//! `C^{j-1}`-coordinates and a Smith form of that small basis gives both the
//! invariant factors and explicit generators
//! `x_i = d^{j-1}(V e_i) / d_i`.

use crate::error::{Error, Result};
use crate::finab::FinAb;
use crate::grp::{abelian_quotient, cyclic_subgroups, derived_subgroup, FiniteGroup, GroupRef, SubgroupHandle};
use crate::lat::{restrict, same_group, GLattice};
use crate::linalg::{kernel_basis, smith, smith_mod, solve_integer, IntMatrix, RowLattice, SmithForm, SparseRow, Track};

/// Size limits for the cochain spaces. `max_cochains` bounds `dim C^j` (the
/// rows of `d^{j-1}`), `max_basis` bounds `dim C^{j-1}` (the side of the
/// dense Smith form).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_cochains: usize,
    pub max_basis: usize,
}

impl Budget {
    pub const DEFAULT_MAX_COCHAINS: usize = 400_000;
    pub const DEFAULT_MAX_BASIS: usize = 4_000;

    /// Defaults, with `max_cochains` overridden by `SHA_BUDGET` when set.
    pub fn from_env() -> Self {
        let max_cochains = std::env::var("SHA_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(Self::DEFAULT_MAX_COCHAINS);
        Budget {
            max_cochains,
            max_basis: Self::DEFAULT_MAX_BASIS,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::from_env()
    }
}

pub fn cochain_dim(order: usize, rank: usize, j: u32) -> usize {
    order
        .saturating_sub(1)
        .checked_pow(j)
        .and_then(|x| x.checked_mul(rank))
        .unwrap_or(usize::MAX)
}

/// Flat offset of the value at `args` (all non-identity).
fn offset(n: usize, r: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * (n - 1) + (a - 1)) * r
}

/// Value of a normalized cochain at `args`; zero when an argument is 1.
pub fn cochain_value(c: &[i64], order: usize, rank: usize, args: &[usize]) -> Vec<i64> {
    if args.contains(&0) {
        return vec![0; rank];
    }
    let o = offset(order, rank, args);
    c[o..o + rank].to_vec()
}

fn act(m: &GLattice, g: usize, v: &[i64]) -> Result<Vec<i64>> {
    m.action(g).mul_vec(v)
}

fn add_into(acc: &mut [i64], v: &[i64], sign: i64) -> Result<()> {
    for (a, &x) in acc.iter_mut().zip(v) {
        *a = x
            .checked_mul(sign)
            .and_then(|y| a.checked_add(y))
            .ok_or(Error::Overflow)?;
    }
    Ok(())
}

/// `d^j c` for `j` in `0..=2`.
pub fn coboundary(m: &GLattice, j: u32, c: &[i64]) -> Result<Vec<i64>> {
    let g = m.group();
    let (n, r) = (g.order(), m.rank());
    assert_eq!(c.len(), cochain_dim(n, r, j), "cochain has the wrong length");
    let mut out = vec![0i64; cochain_dim(n, r, j + 1)];
    let val = |args: &[usize]| cochain_value(c, n, r, args);
    match j {
        0 => {
            for x in 1..n {
                let mut v = act(m, x, c)?;
                add_into(&mut v, c, -1)?;
                let o = offset(n, r, &[x]);
                out[o..o + r].copy_from_slice(&v);
            }
        }
        1 => {
            for x in 1..n {
                for y in 1..n {
                    let mut v = act(m, x, &val(&[y]))?;
                    add_into(&mut v, &val(&[g.mul(x, y)]), -1)?;
                    add_into(&mut v, &val(&[x]), 1)?;
                    let o = offset(n, r, &[x, y]);
                    out[o..o + r].copy_from_slice(&v);
                }
            }
        }
        2 => {
            for x in 1..n {
                for y in 1..n {
                    for z in 1..n {
                        let mut v = act(m, x, &val(&[y, z]))?;
                        add_into(&mut v, &val(&[g.mul(x, y), z]), -1)?;
                        add_into(&mut v, &val(&[x, g.mul(y, z)]), 1)?;
                        add_into(&mut v, &val(&[x, y]), -1)?;
                        let o = offset(n, r, &[x, y, z]);
                        out[o..o + r].copy_from_slice(&v);
                    }
                }
            }
        }
        _ => panic!("coboundary is implemented up to degree 2"),
    }
    Ok(out)
}

pub fn is_cocycle(m: &GLattice, j: u32, c: &[i64]) -> Result<bool> {
    Ok(coboundary(m, j, c)?.iter().all(|&x| x == 0))
}

fn push_entry(row: &mut Vec<(usize, i64)>, col: usize, x: i64) {
    if x != 0 {
        row.push((col, x));
    }
}

fn normalize_row(mut row: Vec<(usize, i64)>) -> SparseRow {
    row.sort_unstable_by_key(|e| e.0);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (c, x) in row {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// Echelon basis of the row space of `d^{j-1}` (rows indexed by `C^j`,
/// columns by `C^{j-1}`).
fn coboundary_row_lattice(m: &GLattice, j: u32, modulus: i64) -> Result<RowLattice> {
    let g = m.group();
    let (n, r) = (g.order(), m.rank());
    let mats: Vec<Vec<Vec<i64>>> = (0..n).map(|x| m.action(x).to_rows()).collect();
    let mut lat = RowLattice::with_modulus(cochain_dim(n, r, j - 1), modulus);
    match j {
        1 => {
            for x in 1..n {
                for k in 0..r {
                    let mut row = Vec::with_capacity(r);
                    for l in 0..r {
                        push_entry(&mut row, l, mats[x][k][l] - i64::from(k == l));
                    }
                    lat.insert(normalize_row(row))?;
                }
            }
        }
        2 => {
            for x in 1..n {
                for y in 1..n {
                    let xy = g.mul(x, y);
                    for k in 0..r {
                        let mut row = Vec::with_capacity(r + 2);
                        let oy = offset(n, r, &[y]);
                        for l in 0..r {
                            push_entry(&mut row, oy + l, mats[x][k][l]);
                        }
                        if xy != 0 {
                            push_entry(&mut row, offset(n, r, &[xy]) + k, -1);
                        }
                        push_entry(&mut row, offset(n, r, &[x]) + k, 1);
                        lat.insert(normalize_row(row))?;
                    }
                }
            }
        }
        _ => panic!("degree out of range"),
    }
    Ok(lat)
}

fn check_budget(m: &GLattice, j: u32, budget: &Budget) -> Result<()> {
    let (n, r) = (m.group().order(), m.rank());
    let rows = cochain_dim(n, r, j);
    if rows > budget.max_cochains {
        return Err(Error::BudgetExceeded {
            what: format!("degree-{j} cochains"),
            size: rows,
            limit: budget.max_cochains,
        });
    }
    if j >= 1 {
        let cols = cochain_dim(n, r, j - 1);
        if cols > budget.max_basis {
            return Err(Error::BudgetExceeded {
                what: format!("degree-{} cochains", j - 1),
                size: cols,
                limit: budget.max_basis,
            });
        }
    }
    Ok(())
}

/// Modulus for all coboundary eliminations over subgroups of a group of
/// order `n`: every `H^j` (`j >= 1`) is killed by `n`, and working modulo
/// `n^2` keeps the torsion factors (all `<= n`) apart from free directions
/// while bounding every intermediate entry.
fn modulus_for(n: usize) -> i64 {
    ((n * n) as i64).max(4)
}

/// Smith form `U B V = D (mod N)` of the echelon basis `B` of
/// `rowspan(d^{j-1}) + N Z^{C^{j-1}}`. Invariant factors strictly between 1
/// and `N` are exactly those of `H^j`; `V e_i` is a primitive of the `i`-th
/// generator, and row `i` of `V^{-1}` reads off its coordinate.
fn coker_smith(m: &GLattice, j: u32, budget: &Budget, track: Track, modulus: i64) -> Result<SmithForm> {
    check_budget(m, j, budget)?;
    let lat = coboundary_row_lattice(m, j, modulus)?;
    smith_mod(&lat.to_dense(), modulus, track)
}

#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub degree: u32,
    pub group: GroupRef,
    pub lattice: GLattice,
    /// Torsion structure (degree >= 1); trivial in degree 0.
    pub structure: FinAb,
    /// Rank of the free group `M^G` in degree 0; zero otherwise.
    pub free_rank: usize,
    /// Explicit cocycles generating the group; in degree >= 1 the `i`-th
    /// has order `orders[i]` and they form a direct-sum basis.
    pub generators: Vec<Vec<i64>>,
    pub orders: Vec<u64>,
    /// `(j-1)`-cochains with `d(w_i) = orders[i] * generators[i]`.
    pub(crate) primitives: Vec<Vec<i64>>,
}

pub fn cohomology(g: &GroupRef, m: &GLattice, j: u32) -> Result<CohomologyGroup> {
    cohomology_with(g, m, j, &Budget::default())
}

pub fn cohomology_with(g: &GroupRef, m: &GLattice, j: u32, budget: &Budget) -> Result<CohomologyGroup> {
    if !same_group(g, m.group()) {
        return Err(Error::GroupMismatch("lattice is over a different group".into()));
    }
    let r = m.rank();
    if j == 0 {
        check_budget(m, 0, budget)?;
        let mut rows = Vec::new();
        for &x in g.generators() {
            let a = m.action(x);
            for k in 0..r {
                rows.push((0..r).map(|l| a[(k, l)] - i64::from(k == l)).collect::<Vec<_>>());
            }
        }
        let generators = if r == 0 {
            Vec::new()
        } else if rows.is_empty() {
            IntMatrix::identity(r).to_rows()
        } else {
            kernel_basis(&IntMatrix::from_rows(&rows))?.transpose().to_rows()
        };
        return Ok(CohomologyGroup {
            degree: 0,
            group: g.clone(),
            lattice: m.clone(),
            structure: FinAb::trivial(),
            free_rank: generators.len(),
            generators,
            orders: Vec::new(),
            primitives: Vec::new(),
        });
    }
    if j > 2 {
        return Err(Error::PreconditionFailed("cohomology is computed in degrees 0, 1, 2".into()));
    }
    let modulus = modulus_for(g.order());
    let s = coker_smith(m, j, budget, Track::right_only(), modulus)?;
    let v = s.right.as_ref().unwrap();
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    let mut primitives = Vec::new();
    for (i, &d) in s.diag.iter().enumerate() {
        if d <= 1 || d >= modulus {
            continue;
        }
        let w = v.column(i);
        let dw = coboundary(m, j - 1, &w)?;
        debug_assert!(dw.iter().all(|x| x % d == 0));
        generators.push(dw.iter().map(|x| x / d).collect());
        orders.push(d as u64);
        primitives.push(w);
    }
    let structure = FinAb::from_invariant_factors(orders.clone()).map_err(Error::PreconditionFailed)?;
    Ok(CohomologyGroup {
        degree: j,
        group: g.clone(),
        lattice: m.clone(),
        structure,
        free_rank: 0,
        generators,
        orders,
        primitives,
    })
}

/// Literal restriction of a normalized cochain over `G` to the subgroup `d`
/// (in `d`'s local numbering).
pub fn restrict_cochain(c: &[i64], j: u32, order: usize, rank: usize, d: &SubgroupHandle) -> Vec<i64> {
    let els = d.elements();
    let k = els.len();
    let mut out = Vec::with_capacity(cochain_dim(k, rank, j));
    let mut idx = vec![1usize; j as usize];
    if k <= 1 {
        return out;
    }
    loop {
        let args: Vec<usize> = idx.iter().map(|&i| els[i]).collect();
        out.extend(cochain_value(c, order, rank, &args));
        // odometer, last argument fastest
        let mut pos = j as usize;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 1;
        }
    }
}

/// Degree-2 restriction to `d`.
pub fn restriction_class(cls: &[i64], m: &GLattice, d: &SubgroupHandle) -> Vec<i64> {
    restrict_cochain(cls, 2, m.group().order(), m.rank(), d)
}

/// Upper bound on the dense system solved by [`is_coboundary`].
pub const COBOUNDARY_SOLVE_LIMIT: usize = 3_000;

/// Decide whether the degree-2 cocycle `c` over `d` (local numbering) is a
/// coboundary for the restriction of `m` (a lattice over `d`'s parent);
/// returns a witness `b` with `d^1 b = c`.
pub fn is_coboundary(d: &SubgroupHandle, m: &GLattice, c: &[i64]) -> Result<Option<Vec<i64>>> {
    let md = restrict(m, d)?;
    let (k, r) = (d.order(), m.rank());
    let rows = cochain_dim(k, r, 2);
    let cols = cochain_dim(k, r, 1);
    if c.len() != rows {
        return Err(Error::PreconditionFailed("cochain has the wrong length".into()));
    }
    if rows == 0 {
        return Ok(Some(Vec::new()));
    }
    if rows > COBOUNDARY_SOLVE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "coboundary system rows".into(),
            size: rows,
            limit: COBOUNDARY_SOLVE_LIMIT,
        });
    }
    let mut a = IntMatrix::zeros(rows, cols);
    for col in 0..cols {
        let mut e = vec![0i64; cols];
        e[col] = 1;
        for (row, x) in coboundary(&md, 1, &e)?.into_iter().enumerate() {
            a[(row, col)] = x;
        }
    }
    solve_integer(&a, c)
}

/// Restriction data of `H^2(D, M)`: invariant factors of the coboundary
/// basis and `V^{-1}`.
struct LocalH2 {
    diag: Vec<i64>,
    v_inv: IntMatrix,
}

fn local_h2(m: &GLattice, d: &SubgroupHandle, budget: &Budget) -> Result<LocalH2> {
    let md = restrict(m, d)?;
    // the primitives restricted here have denominators dividing |G|, so the
    // coordinate functionals need the parent's modulus
    let modulus = modulus_for(m.group().order());
    let s = coker_smith(
        &md,
        2,
        budget,
        Track {
            right_inv: true,
            ..Track::none()
        },
        modulus,
    )?;
    Ok(LocalH2 {
        diag: s.diag.into_iter().map(|e| if e >= modulus { 0 } else { e }).collect(),
        v_inv: s.right_inv.unwrap(),
    })
}

/// Coordinates of `Res_D(x_i)` in `⊕ Z/e_k`, one entry per nontrivial
/// invariant factor `e_k` of `H^2(D, M)`.
fn restriction_coords(h2: &CohomologyGroup, i: usize, local: &LocalH2, d: &SubgroupHandle) -> Result<Vec<i64>> {
    let (n, r) = (h2.group.order(), h2.lattice.rank());
    let w = restrict_cochain(&h2.primitives[i], 1, n, r, d);
    let u = local.v_inv.mul_vec(&w)?;
    let di = h2.orders[i] as i128;
    let mut out = Vec::new();
    for (k, &e) in local.diag.iter().enumerate() {
        if e <= 1 {
            continue;
        }
        let num = e as i128 * u[k] as i128;
        debug_assert_eq!(num % di, 0);
        out.push(((num / di).rem_euclid(e as i128)) as i64);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ShaGroup {
    pub base: CohomologyGroup,
    /// The family as supplied.
    pub raw_dset: Vec<SubgroupHandle>,
    /// After adjoining every cyclic subgroup.
    pub closed_dset: Vec<SubgroupHandle>,
    /// Members actually tested: maximal members of the closed family up to
    /// conjugacy (restriction to a subgroup factors through any overgroup,
    /// and conjugate subgroups impose the same condition).
    pub tested: Vec<SubgroupHandle>,
    pub structure: FinAb,
    pub generators: Vec<Vec<i64>>,
}

/// `dset ∪ C_G`, sorted and deduplicated.
pub fn close_dset(g: &GroupRef, dset: &[SubgroupHandle]) -> Vec<SubgroupHandle> {
    let mut all: Vec<SubgroupHandle> = dset.to_vec();
    all.extend(cyclic_subgroups(g));
    all.sort();
    all.dedup();
    all
}

fn maximal_up_to_conjugacy(g: &FiniteGroup, family: &[SubgroupHandle]) -> Vec<SubgroupHandle> {
    let mut sorted: Vec<&SubgroupHandle> = family.iter().filter(|d| !d.is_trivial()).collect();
    sorted.sort_by(|a, b| b.order().cmp(&a.order()).then(a.cmp(b)));
    let mut kept: Vec<SubgroupHandle> = Vec::new();
    for d in sorted {
        let covered = kept.iter().any(|k| {
            k.order() % d.order() == 0
                && (0..g.order()).any(|t| d.elements().iter().all(|&x| k.contains(g.conj(t, x))))
        });
        if !covered {
            kept.push(d.clone());
        }
    }
    kept.sort();
    kept
}

pub fn sha(g: &GroupRef, m: &GLattice, dset: &[SubgroupHandle]) -> Result<ShaGroup> {
    sha_with(g, m, dset, &Budget::default())
}

pub fn sha_with(g: &GroupRef, m: &GLattice, dset: &[SubgroupHandle], budget: &Budget) -> Result<ShaGroup> {
    if dset.iter().any(|d| !same_group(d.parent(), g)) {
        return Err(Error::GroupMismatch("dset member is not a subgroup of G".into()));
    }
    let base = cohomology_with(g, m, 2, budget)?;
    let closed = close_dset(g, dset);
    let tested = maximal_up_to_conjugacy(g, &closed);
    let k = base.orders.len();
    let done = |structure: FinAb, generators: Vec<Vec<i64>>, base: CohomologyGroup| ShaGroup {
        base,
        raw_dset: dset.to_vec(),
        closed_dset: closed.clone(),
        tested: tested.clone(),
        structure,
        generators,
    };
    if k == 0 || tested.iter().any(|d| d.is_whole()) {
        return Ok(done(FinAb::trivial(), Vec::new(), base));
    }
    // constraint rows: coefficient of a_i, modulus e
    let mut constraints: Vec<(Vec<i64>, i64)> = Vec::new();
    for d in &tested {
        let local = local_h2(m, d, budget)?;
        let moduli: Vec<i64> = local.diag.iter().copied().filter(|&e| e > 1).collect();
        if moduli.is_empty() {
            continue;
        }
        let coords: Vec<Vec<i64>> = (0..k)
            .map(|i| restriction_coords(&base, i, &local, d))
            .collect::<Result<_>>()?;
        for (t, &e) in moduli.iter().enumerate() {
            constraints.push(((0..k).map(|i| coords[i][t]).collect(), e));
        }
    }
    // L = { a in Z^k : sum_i a_i c_i = 0 mod e for every constraint }
    let nc = constraints.len();
    let lbasis = if nc == 0 {
        IntMatrix::identity(k)
    } else {
        let mut a = IntMatrix::zeros(nc, k + nc);
        for (row, (c, e)) in constraints.iter().enumerate() {
            for i in 0..k {
                a[(row, i)] = c[i];
            }
            a[(row, k + row)] = -e;
        }
        let ker = kernel_basis(&a)?;
        let mut lat = RowLattice::new(k);
        for col in 0..ker.ncols() {
            let row: SparseRow = (0..k).map(|i| (i, ker[(i, col)])).filter(|e| e.1 != 0).collect();
            lat.insert(row)?;
        }
        lat.to_dense()
    };
    debug_assert_eq!(lbasis.nrows(), k);
    // Ш = L / diag(orders) Z^k, presented by the rows of T with
    // orders[i] e_i = T_i * lbasis
    let bt = lbasis.transpose();
    let mut t = IntMatrix::zeros(k, k);
    for i in 0..k {
        let mut target = vec![0i64; k];
        target[i] = base.orders[i] as i64;
        let y = solve_integer(&bt, &target)?
            .ok_or_else(|| Error::PreconditionFailed("restriction data inconsistent".into()))?;
        for (j, yj) in y.into_iter().enumerate() {
            t[(i, j)] = yj;
        }
    }
    let s = smith(
        &t,
        Track {
            right_inv: true,
            ..Track::none()
        },
    )?;
    let vi = s.right_inv.unwrap();
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    for (i, &dd) in s.diag.iter().enumerate() {
        if dd <= 1 {
            continue;
        }
        factors.push(dd as u64);
        let coeff = IntMatrix::from_rows(&[vi.row(i).to_vec()]).mul(&lbasis)?;
        let mut cocycle = vec![0i64; base.generators.first().map_or(0, Vec::len)];
        for (j, x) in base.generators.iter().enumerate() {
            let a = coeff[(0, j)].rem_euclid(base.orders[j] as i64);
            if a != 0 {
                add_into(&mut cocycle, x, a)?;
            }
        }
        generators.push(cocycle);
    }
    let structure = FinAb::from_invariant_factors(factors).map_err(Error::PreconditionFailed)?;
    Ok(done(structure, generators, base))
}

/// Tate cohomology `Ĥ^j(D, M)` of a cyclic subgroup, by periodicity:
/// even `j`: `M^D / N M`; odd `j`: `ker N / (σ - 1) M`. The lattice may be
/// given over `d`'s parent or over `d` itself.
pub fn tate_cyclic(d: &SubgroupHandle, m: &GLattice, j: i64) -> Result<FinAb> {
    let sigma = d.cyclic_generator().ok_or(Error::NotCyclic)?;
    let s = if same_group(m.group(), d.parent()) {
        m.action(sigma).clone()
    } else if m.group().order() == d.order() {
        m.action(d.local(sigma).unwrap()).clone()
    } else {
        return Err(Error::GroupMismatch("lattice is over neither D nor its parent".into()));
    };
    let r = m.rank();
    if r == 0 {
        return Ok(FinAb::trivial());
    }
    let id = IntMatrix::identity(r);
    let mut s_minus = s.clone();
    for i in 0..r {
        s_minus[(i, i)] -= 1;
    }
    let mut norm = IntMatrix::zeros(r, r);
    let mut pw = id;
    for _ in 0..d.order() {
        for a in 0..r {
            for b in 0..r {
                norm[(a, b)] += pw[(a, b)];
            }
        }
        pw = pw.mul(&s)?;
    }
    let (kernel_of, image_of) = if j.rem_euclid(2) == 0 { (&s_minus, &norm) } else { (&norm, &s_minus) };
    let ker = kernel_basis(kernel_of)?;
    if ker.ncols() == 0 {
        return Ok(FinAb::trivial());
    }
    // express the image columns in the kernel basis
    let mut rel = IntMatrix::zeros(r, ker.ncols());
    for col in 0..r {
        let y = solve_integer(&ker, &image_of.column(col))?
            .ok_or_else(|| Error::PreconditionFailed("image not inside kernel".into()))?;
        for (i, yi) in y.into_iter().enumerate() {
            rel[(col, i)] = yi;
        }
    }
    let s = smith(&rel, Track::none())?;
    if s.rank < ker.ncols() {
        return Err(Error::PreconditionFailed("Tate group is not finite".into()));
    }
    FinAb::from_invariant_factors(s.torsion().into_iter().map(|x| x as u64).collect())
        .map_err(Error::PreconditionFailed)
}

/// `H^1(G, J_{G/(H_i)}) = ker(G^∨ -> ⊕ H_i^∨)`, computed as the dual of
/// `G / <[G,G], H_1, ..., H_r>`.
pub fn h1_j_formula(g: &GroupRef, pairs: &[(SubgroupHandle, usize)]) -> Result<FinAb> {
    if pairs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut n = derived_subgroup(g);
    for (h, _) in pairs {
        n = n.join(h);
    }
    Ok(abelian_quotient(g, &n)?.structure)
}
