//! Structural evaluators that predict `Ш²_D(G, J_{G/H})` without building
//! cochains. Each one re-checks its hypotheses from the raw group data and
//! refuses outside them; `sha_full` assembles the `p`-part and the
//! prime-to-`p` part and can cross-check against the brute-force engine.

use std::time::Instant;

use serde::Serialize;

use crate::arith::{factorize, is_prime, ord_p};
use crate::coh::{self, Budget};
use crate::error::{Error, Result};
use crate::finab::FinAb;
use crate::grp::{
    build_group, catalog, commutator_subgroup, complement, core, normalizer_centralizer, subgroup_closure,
    sylow_subgroup, GroupRef, GroupSpec, SubgroupHandle,
};
use crate::lat::{j_lattice, same_group};

fn violated(msg: impl Into<String>) -> Error {
    Error::HypothesisViolated(msg.into())
}

fn check_members(g: &GroupRef, subs: &[SubgroupHandle]) -> Result<()> {
    if subs.iter().any(|d| !same_group(d.parent(), g)) {
        return Err(Error::GroupMismatch("subgroup of a different group".into()));
    }
    Ok(())
}

/// `(Z/p)^{r-2}` if `ord_p(G : ∩ H_i) = 2` and `r >= 3`, else `0`, for
/// distinct normal subgroups of a common prime index `p`.
pub fn sha_theorem_3_9(g: &GroupRef, pairs: &[(SubgroupHandle, usize)]) -> Result<FinAb> {
    if pairs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let hs: Vec<&SubgroupHandle> = pairs.iter().map(|(h, _)| h).collect();
    check_members(g, &pairs.iter().map(|(h, _)| h.clone()).collect::<Vec<_>>())?;
    let p = hs[0].index() as u64;
    if !is_prime(p) {
        return Err(violated(format!("index {p} is not prime")));
    }
    for h in &hs {
        if h.index() as u64 != p {
            return Err(violated("subgroups have different indices"));
        }
        if !h.is_normal() {
            return Err(violated("subgroup is not normal"));
        }
    }
    for (i, a) in hs.iter().enumerate() {
        for (j, b) in hs.iter().enumerate() {
            if i != j && a.is_subgroup_of(b) {
                return Err(violated(format!("H_{} is contained in H_{}", i + 1, j + 1)));
            }
        }
    }
    let n = hs.iter().skip(1).fold(hs[0].clone(), |acc, h| acc.intersection(h));
    let m = ord_p(n.index() as u64, p);
    let r = hs.len();
    Ok(if m == 2 && r >= 3 {
        FinAb::elementary(p, r - 2)
    } else {
        FinAb::trivial()
    })
}

/// `Ш²_ω(Z/n1 x Z/n2, J_G) = Z/n1` for `n1 | n2`.
pub fn sha_prop_3_8(n1: u64, n2: u64) -> Result<FinAb> {
    if n1 == 0 || n2 == 0 || !n2.is_multiple_of(n1) {
        return Err(violated(format!("{n1} does not divide {n2}")));
    }
    Ok(FinAb::cyclic(n1))
}

/// gcd of the indices `(G : H_i)`, which annihilates `Ш²_ω`.
pub fn annihilator_bound(g: &GroupRef, pairs: &[(SubgroupHandle, usize)]) -> Result<u64> {
    if pairs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    check_members(g, &pairs.iter().map(|(h, _)| h.clone()).collect::<Vec<_>>())?;
    Ok(crate::finab::gcd_all(pairs.iter().map(|(h, _)| h.index() as u64)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conditions418 {
    pub prereq_sylow_normal: bool,
    pub prereq_core_trivial: bool,
    pub prereq_ordp_index_one: bool,
    /// `S_p ≅ (Z/p)^2`
    pub a: bool,
    /// `[S_p, G] = S_p`
    pub b: bool,
    /// `N_G(S_p ∩ H) = Z_G(S_p ∩ H)`
    pub c: bool,
}

impl Conditions418 {
    pub fn prerequisites_hold(&self) -> bool {
        self.prereq_sylow_normal && self.prereq_core_trivial && self.prereq_ordp_index_one
    }

    pub fn all(&self) -> bool {
        self.a && self.b && self.c
    }

    /// Evaluate every flag without refusing; `a`, `b`, `c` are left false
    /// when a prerequisite fails.
    pub fn evaluate(g: &GroupRef, h: &SubgroupHandle, p: u64) -> Result<Self> {
        check_members(g, std::slice::from_ref(h))?;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !(g.order() as u64).is_multiple_of(p) {
            return Err(violated(format!("{p} does not divide the group order {}", g.order())));
        }
        let s = sylow_subgroup(g, p)?;
        let mut out = Conditions418 {
            prereq_sylow_normal: s.is_normal,
            prereq_core_trivial: core(g, h).is_trivial(),
            prereq_ordp_index_one: ord_p(h.index() as u64, p) == 1,
            a: false,
            b: false,
            c: false,
        };
        if !out.prerequisites_hold() {
            return Ok(out);
        }
        let sp = s.subgroup;
        let els = sp.elements();
        out.a = sp.order() as u64 == p * p
            && els.iter().all(|&x| x == 0 || g.element_order(x) as u64 == p)
            && els.iter().all(|&x| els.iter().all(|&y| g.mul(x, y) == g.mul(y, x)));
        out.b = commutator_subgroup(g, &sp, &SubgroupHandle::whole(g)) == sp;
        let (n, z) = normalizer_centralizer(g, &sp.intersection(h));
        out.c = n == z;
        Ok(out)
    }

    pub fn first_failed_prerequisite(&self) -> Option<&'static str> {
        if !self.prereq_sylow_normal {
            Some("the Sylow subgroup is not normal")
        } else if !self.prereq_core_trivial {
            Some("the core of H is not trivial")
        } else if !self.prereq_ordp_index_one {
            Some("ord_p of the index is not 1")
        } else {
            None
        }
    }
}

/// Conditions (a), (b), (c); refuses when a prerequisite fails.
pub fn conditions_4_18(g: &GroupRef, h: &SubgroupHandle, p: u64) -> Result<Conditions418> {
    let c = Conditions418::evaluate(g, h, p)?;
    match c.first_failed_prerequisite() {
        Some(why) => Err(violated(why)),
        None => Ok(c),
    }
}

/// The closed family: `dset ∪ C_G`.
fn closed(g: &GroupRef, dset: &[SubgroupHandle]) -> Vec<SubgroupHandle> {
    coh::close_dset(g, dset)
}

/// `Ш²_D(G, J_{G/H})[p^∞]`: `Z/p` iff (a), (b), (c) hold and no member of the
/// closed family contains `S_p`.
pub fn sha_p_part_4_18(g: &GroupRef, h: &SubgroupHandle, p: u64, dset: &[SubgroupHandle]) -> Result<FinAb> {
    check_members(g, dset)?;
    let c = conditions_4_18(g, h, p)?;
    if !c.all() {
        return Ok(FinAb::trivial());
    }
    let sp = sylow_subgroup(g, p)?.subgroup;
    if closed(g, dset).iter().any(|d| sp.is_subgroup_of(d)) {
        return Ok(FinAb::trivial());
    }
    Ok(FinAb::cyclic(p))
}

/// Why the prime-to-`p` evaluation may identify `Ш_D` with `Ш_ω` on
/// `J_{G/S_pH}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// `S_p H = G`: the lattice is zero.
    WholeGroup,
    /// `(G : S_p H)` is prime, so both groups vanish.
    PrimeIndex,
    /// The closed family is exactly the cyclic subgroups.
    CyclicFamily,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeToP {
    pub result: FinAb,
    pub certificate: Certificate,
    /// Order of the complement and of `H'` when the reduction was used.
    pub complement_order: Option<usize>,
    pub hprime_order: Option<usize>,
}

/// The prime-to-`p` part, via `Ш²_ω(G', J_{G'/H'})` on a complement `G'` of
/// `S_p` with `H' = G' ∩ S_p H`.
pub fn sha_prime_to_p_4_8(g: &GroupRef, h: &SubgroupHandle, p: u64, dset: &[SubgroupHandle]) -> Result<FinAb> {
    Ok(prime_to_p_detail(g, h, p, dset, &Budget::default())?.result)
}

pub fn prime_to_p_detail(
    g: &GroupRef,
    h: &SubgroupHandle,
    p: u64,
    dset: &[SubgroupHandle],
    budget: &Budget,
) -> Result<PrimeToP> {
    check_members(g, dset)?;
    conditions_4_18(g, h, p)?;
    let sp = sylow_subgroup(g, p)?.subgroup;
    let sph = sp.join(h);
    let idx = sph.index() as u64;
    if idx == 1 {
        return Ok(PrimeToP {
            result: FinAb::trivial(),
            certificate: Certificate::WholeGroup,
            complement_order: None,
            hprime_order: None,
        });
    }
    if is_prime(idx) {
        return Ok(PrimeToP {
            result: FinAb::trivial(),
            certificate: Certificate::PrimeIndex,
            complement_order: None,
            hprime_order: None,
        });
    }
    if !dset.iter().all(|d| d.is_cyclic()) {
        return Err(Error::CertificateUnavailable(
            "family has non-cyclic members and (G : S_p H) is not prime".into(),
        ));
    }
    let gp = complement(g, &sp)?;
    let hp = gp.intersection(&sph);
    let small = gp.to_group();
    let local: Vec<usize> = hp.elements().iter().map(|&x| gp.local(x).unwrap()).collect();
    let hl = SubgroupHandle::new(&small, local)?;
    let (j, _) = j_lattice(&small, &[(hl, 1)])?;
    let s = coh::sha_with(&small, &j, &[], budget)?;
    Ok(PrimeToP {
        result: s.structure,
        certificate: Certificate::CyclicFamily,
        complement_order: Some(gp.order()),
        hprime_order: Some(hp.order()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Theorem,
    Brute,
    Both,
}

/// Which structural result produced the theorem-path value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Some `H_i = G`, so the lattice is induced from `G` (or zero).
    WholeGroup,
    /// A single subgroup of prime index.
    PrimeIndex,
    /// `p`-part and prime-to-`p` part for normal `S_p` with `ord_p(G:H) = 1`.
    SylowSplitting,
    /// `J_G` for `G = Z/n1 x Z/n2`.
    TwoGeneratedAbelian,
    /// Distinct normal subgroups of a common prime index.
    NormalPrimeIndexFamily,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShaReport {
    pub group: String,
    pub group_order: usize,
    /// `(elements of H_i, multiplicity)`.
    pub subgroups: Vec<(Vec<usize>, usize)>,
    pub p: Option<u64>,
    pub raw_dset: Vec<Vec<usize>>,
    pub closed_dset: Vec<Vec<usize>>,
    pub method: Method,
    pub result: FinAb,
    pub route: Option<Route>,
    pub theorem: Option<FinAb>,
    pub p_part: Option<FinAb>,
    pub prime_to_p: Option<PrimeToP>,
    pub brute: Option<FinAb>,
    pub agreement: Option<bool>,
    pub conditions: Option<Conditions418>,
    /// Cocycles generating Ш (brute path), flattened normalized 2-cochains.
    pub generators: Vec<Vec<i64>>,
    pub warnings: Vec<String>,
    /// Wall-clock milliseconds; excluded from report digests.
    pub timing_ms: u128,
}

struct TheoremValue {
    result: FinAb,
    route: Route,
    p_part: Option<FinAb>,
    prime_to_p: Option<PrimeToP>,
    conditions: Option<Conditions418>,
}

impl TheoremValue {
    fn plain(result: FinAb, route: Route) -> Self {
        TheoremValue {
            result,
            route,
            p_part: None,
            prime_to_p: None,
            conditions: None,
        }
    }
}

/// The first structural result whose hypotheses hold. Results stated for
/// `Ш_ω` are only used when every family member is cyclic.
fn theorem_path(
    g: &GroupRef,
    pairs: &[(SubgroupHandle, usize)],
    p: Option<u64>,
    dset: &[SubgroupHandle],
    budget: &Budget,
) -> Result<TheoremValue> {
    let omega = dset.iter().all(|d| d.is_cyclic());
    if pairs.iter().any(|(h, _)| h.is_whole()) {
        return Ok(TheoremValue::plain(FinAb::trivial(), Route::WholeGroup));
    }
    let single = (pairs.len() == 1).then(|| &pairs[0].0);
    if let Some(h) = single {
        if is_prime(h.index() as u64) {
            return Ok(TheoremValue::plain(FinAb::trivial(), Route::PrimeIndex));
        }
    }
    let mut refusal = None;
    if let (Some(h), Some(p)) = (single, p) {
        match conditions_4_18(g, h, p) {
            Ok(cond) => {
                let pp = sha_p_part_4_18(g, h, p, dset)?;
                match prime_to_p_detail(g, h, p, dset, budget) {
                    Ok(rest) => {
                        return Ok(TheoremValue {
                            result: pp.direct_sum(&rest.result),
                            route: Route::SylowSplitting,
                            p_part: Some(pp),
                            prime_to_p: Some(rest),
                            conditions: Some(cond),
                        })
                    }
                    Err(e @ Error::CertificateUnavailable(_)) => refusal = Some(e),
                    Err(e) => return Err(e),
                }
            }
            Err(e @ Error::HypothesisViolated(_)) => refusal = Some(e),
            Err(e) => return Err(e),
        }
    }
    if omega {
        if let Some(h) = single {
            if h.is_trivial() && g.is_abelian() {
                let ab = crate::grp::abelianization(g)?.structure;
                let f = ab.invariant_factors();
                if f.len() <= 2 {
                    let n1 = if f.len() == 2 { f[0] } else { 1 };
                    return Ok(TheoremValue::plain(sha_prop_3_8(n1, n1)?, Route::TwoGeneratedAbelian));
                }
            }
        }
        match sha_theorem_3_9(g, pairs) {
            Ok(v) => return Ok(TheoremValue::plain(v, Route::NormalPrimeIndexFamily)),
            Err(Error::HypothesisViolated(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Err(refusal.unwrap_or_else(|| Error::CertificateUnavailable("no structural result applies".into())))
}

pub fn sha_full(
    g: &GroupRef,
    h: &SubgroupHandle,
    p: Option<u64>,
    dset: &[SubgroupHandle],
    method: Method,
) -> Result<ShaReport> {
    sha_full_with(g, &[(h.clone(), 1)], p, dset, method, &Budget::default())
}

/// `Ш²_D(G, J_{G/(H_i)})` by the theorem path, brute force, or both. A
/// theorem path without applicable hypotheses falls back to brute force with
/// a warning; `HypothesisViolated` is only returned when the prime `p` is
/// unusable or when nothing else can be evaluated.
pub fn sha_full_with(
    g: &GroupRef,
    pairs: &[(SubgroupHandle, usize)],
    p: Option<u64>,
    dset: &[SubgroupHandle],
    method: Method,
    budget: &Budget,
) -> Result<ShaReport> {
    let start = Instant::now();
    if pairs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    check_members(g, &pairs.iter().map(|(h, _)| h.clone()).collect::<Vec<_>>())?;
    check_members(g, dset)?;
    if let Some(p) = p {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !(g.order() as u64).is_multiple_of(p) {
            return Err(violated(format!("{p} does not divide the group order {}", g.order())));
        }
    }
    let mut report = ShaReport {
        group: g.label().to_string(),
        group_order: g.order(),
        subgroups: pairs.iter().map(|(h, e)| (h.elements().to_vec(), *e)).collect(),
        p,
        raw_dset: dset.iter().map(|d| d.elements().to_vec()).collect(),
        closed_dset: closed(g, dset).iter().map(|d| d.elements().to_vec()).collect(),
        method,
        result: FinAb::trivial(),
        route: None,
        theorem: None,
        p_part: None,
        prime_to_p: None,
        brute: None,
        agreement: None,
        conditions: None,
        generators: Vec::new(),
        warnings: Vec::new(),
        timing_ms: 0,
    };
    let mut want_brute = matches!(method, Method::Brute | Method::Both);
    let mut theorem_err = None;
    if matches!(method, Method::Theorem | Method::Both) {
        match theorem_path(g, pairs, p, dset, budget) {
            Ok(v) => {
                report.theorem = Some(v.result);
                report.route = Some(v.route);
                report.p_part = v.p_part;
                report.prime_to_p = v.prime_to_p;
                report.conditions = v.conditions;
            }
            Err(e @ (Error::CertificateUnavailable(_) | Error::HypothesisViolated(_))) => {
                report.warnings.push(format!("theorem path unavailable ({e}); using brute force"));
                want_brute = true;
                theorem_err = Some(e);
            }
            Err(e @ Error::BudgetExceeded { .. }) if method == Method::Both => {
                report.warnings.push(format!("theorem path: {e}"));
                theorem_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    if want_brute {
        let (j, _) = j_lattice(g, pairs)?;
        match coh::sha_with(g, &j, dset, budget) {
            Ok(s) => {
                report.brute = Some(s.structure.clone());
                report.generators = s.generators;
            }
            Err(e @ Error::BudgetExceeded { .. }) if report.theorem.is_some() => {
                report.warnings.push(format!("brute path: {e}"));
            }
            Err(e) => return Err(theorem_err.filter(|t| matches!(t, Error::HypothesisViolated(_))).unwrap_or(e)),
        }
    }
    report.method = match (&report.theorem, &report.brute) {
        (Some(_), Some(_)) => Method::Both,
        (Some(_), None) => Method::Theorem,
        _ => Method::Brute,
    };
    if let (Some(t), Some(b)) = (&report.theorem, &report.brute) {
        report.agreement = Some(t == b);
        if t != b {
            report.warnings.push(format!("theorem path gives {t}, brute force gives {b}"));
        }
    }
    report.result = report.brute.clone().or_else(|| report.theorem.clone()).unwrap();
    report.timing_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Certificate that `Ш²_ω(G, J_{G/H})[p^∞] = 0`; `false` only means that
/// neither criterion applies.
pub fn vanishing_4_16(g: &GroupRef, h: &SubgroupHandle, p: u64) -> bool {
    if !is_prime(p) {
        return false;
    }
    let idx = h.index() as u64;
    if p > 2 && idx == 2 * p {
        return true;
    }
    match sylow_subgroup(g, p) {
        Ok(s) => s.is_normal && ord_p(idx, p) == 1 && ord_p(s.subgroup.order() as u64, p) != 2,
        Err(_) => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "p", rename_all = "snake_case")]
pub enum Classification {
    HnpHolds,
    Alpha(u64),
    Beta(u64),
}

/// Groups larger than this are never matched against the reference shapes.
pub const ISOMORPHISM_SEARCH_BOUND: usize = 200;

/// Search for an isomorphism `src -> dst` determined by images of
/// `src_gens`, carrying `src_sub` onto `dst_sub`.
fn find_isomorphism(
    src: &GroupRef,
    src_gens: &[usize],
    src_sub: &SubgroupHandle,
    dst: &GroupRef,
    dst_sub: &SubgroupHandle,
) -> Option<Vec<usize>> {
    let n = src.order();
    if n != dst.order() || src_sub.order() != dst_sub.order() {
        return None;
    }
    let candidates: Vec<Vec<usize>> = src_gens
        .iter()
        .map(|&x| {
            let o = src.element_order(x);
            (0..n).filter(|&y| dst.element_order(y) == o).collect()
        })
        .collect();
    let mut images = vec![0usize; src_gens.len()];
    fn extend(src: &GroupRef, gens: &[usize], imgs: &[usize], dst: &GroupRef) -> Option<Vec<usize>> {
        let n = src.order();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[0] = 0;
        used[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&s, &t) in gens.iter().zip(imgs) {
                let y = src.mul(x, s);
                let fy = dst.mul(map[x], t);
                if map[y] == usize::MAX {
                    if used[fy] {
                        return None;
                    }
                    map[y] = fy;
                    used[fy] = true;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        map.iter().all(|&v| v != usize::MAX).then_some(map)
    }
    fn go(
        k: usize,
        images: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        src: &GroupRef,
        gens: &[usize],
        src_sub: &SubgroupHandle,
        dst: &GroupRef,
        dst_sub: &SubgroupHandle,
    ) -> Option<Vec<usize>> {
        if k == gens.len() {
            let map = extend(src, gens, images, dst)?;
            return src_sub.elements().iter().all(|&x| dst_sub.contains(map[x])).then_some(map);
        }
        for &c in &candidates[k] {
            images[k] = c;
            if let Some(m) = go(k + 1, images, candidates, src, gens, src_sub, dst, dst_sub) {
                return Some(m);
            }
        }
        None
    }
    go(0, &mut images, &candidates, src, src_gens, src_sub, dst, dst_sub)
}

/// Reference shape with a small generating set: `e_1` and the acting
/// group's generators (`V` is cyclic as a module in both shapes).
fn reference(spec: &GroupSpec, p: u64, beta: bool) -> (GroupRef, Vec<usize>, SubgroupHandle) {
    let g = build_group(spec).expect("reference shape");
    let pp = (p * p) as usize;
    let q_gens: Vec<usize> = if beta {
        let s3 = catalog::s3();
        vec![catalog::s3_element(&s3, "(1 2 3)") * pp, catalog::s3_element(&s3, "(1 2)") * pp]
    } else {
        vec![pp]
    };
    let mut gens = vec![catalog::semidirect_index(p, (1, 0), 0)];
    gens.extend(q_gens);
    debug_assert_eq!(subgroup_closure(&g, &gens).order(), g.order());
    let h = if beta { catalog::beta_subgroup(&g, p) } else { catalog::alpha_subgroup(&g, p) };
    (g, gens, h)
}

/// Classification of degree-`pℓ` situations with normal `S_p`.
pub fn classify_6_11(g: &GroupRef, h: &SubgroupHandle) -> Result<Classification> {
    check_members(g, std::slice::from_ref(h))?;
    let idx = h.index() as u64;
    let f = factorize(idx);
    if f.len() != 2 || f.iter().any(|&(_, e)| e != 1) {
        return Err(violated(format!("index {idx} is not a product of two distinct primes")));
    }
    if !core(g, h).is_trivial() {
        return Err(violated("the core of H is not trivial"));
    }
    let primes = [f[0].0, f[1].0];
    let mut any_valid = false;
    let mut undetermined = None;
    for (p, l) in [(primes[0], primes[1]), (primes[1], primes[0])] {
        if !sylow_subgroup(g, p)?.is_normal {
            continue;
        }
        any_valid = true;
        if (p > 2 && l == 2) || (p * p - 1) % l != 0 {
            return Ok(Classification::HnpHolds);
        }
        if l != 3 {
            undetermined = Some((p, l));
            continue;
        }
        if g.order() > ISOMORPHISM_SEARCH_BOUND {
            return Err(Error::SearchBudgetExceeded(format!(
                "isomorphism search is bounded to order {ISOMORPHISM_SEARCH_BOUND}"
            )));
        }
        if g.order() as u64 == 3 * p * p {
            let (r, gens, rh) = reference(&catalog::alpha_spec(p), p, false);
            if find_isomorphism(&r, &gens, &rh, g, h).is_some() {
                return Ok(Classification::Alpha(p));
            }
        }
        if p >= 5 && g.order() as u64 == 6 * p * p {
            let (r, gens, rh) = reference(&catalog::beta_spec(p), p, true);
            if find_isomorphism(&r, &gens, &rh, g, h).is_some() {
                return Ok(Classification::Beta(p));
            }
        }
        return Ok(Classification::HnpHolds);
    }
    if !any_valid {
        return Err(violated("no Sylow subgroup for a prime of the index is normal"));
    }
    let (p, l) = undetermined.unwrap();
    Err(violated(format!(
        "degree {p}·{l} with {l} | {p}^2 - 1 and {l} != 3 is outside the classification"
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessVariant {
    /// `V_p x| (Z/3)^2`, degree `9p`.
    I,
    /// `V_p x| (V_l x| Z/3)`, degree `3pl`.
    II(u64),
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub spec: GroupSpec,
    pub group: GroupRef,
    pub subgroup: SubgroupHandle,
    pub prediction: FinAb,
}

/// Explicit groups whose `Ш_ω` is `Z/3p` (variant I) or `Z/pl` (variant II).
pub fn witness_6_12(p: u64, variant: WitnessVariant) -> Result<Witness> {
    if !is_prime(p) || p == 3 {
        return Err(Error::PreconditionFailed(format!("p = {p} must be a prime other than 3")));
    }
    let pp = (p * p) as usize;
    match variant {
        WitnessVariant::I => {
            let spec = catalog::witness_i_spec(p);
            let group = build_group(&spec)?;
            let subgroup = subgroup_closure(&group, &[catalog::semidirect_index(p, (1, 0), 0)]);
            Ok(Witness {
                spec,
                group,
                subgroup,
                prediction: FinAb::cyclic(3 * p),
            })
        }
        WitnessVariant::II(l) => {
            if !is_prime(l) || l == 3 || l == p {
                return Err(Error::PreconditionFailed(format!("l = {l} must be a prime not dividing 3p")));
            }
            let spec = catalog::witness_ii_spec(p, l);
            let group = build_group(&spec)?;
            // L_p x| (L_l x| {0})
            let lp = catalog::semidirect_index(p, (1, 0), 0);
            let ll = pp * catalog::semidirect_index(l, (1, 0), 0);
            let subgroup = subgroup_closure(&group, &[lp, ll]);
            Ok(Witness {
                spec,
                group,
                subgroup,
                prediction: FinAb::cyclic(p * l),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{normal_subgroups, subgroup_classes};

    fn index_p_normals(g: &GroupRef, p: usize) -> Vec<SubgroupHandle> {
        normal_subgroups(g).into_iter().filter(|h| h.index() == p).collect()
    }

    #[test]
    fn normal_prime_index_family_examples() {
        let k = catalog::klein();
        let hs: Vec<_> = index_p_normals(&k, 2).into_iter().map(|h| (h, 1)).collect();
        assert_eq!(hs.len(), 3);
        assert_eq!(sha_theorem_3_9(&k, &hs).unwrap(), FinAb::cyclic(2));
        let z33 = catalog::z_times_z(3, 3);
        let hs: Vec<_> = index_p_normals(&z33, 3).into_iter().map(|h| (h, 1)).collect();
        assert_eq!(hs.len(), 4);
        assert_eq!(sha_theorem_3_9(&z33, &hs).unwrap(), FinAb::elementary(3, 2));
        let e = catalog::elementary(2, 3);
        // the three coordinate hyperplanes: m = 3
        let hs: Vec<_> = index_p_normals(&e, 2)
            .into_iter()
            .filter(|h| {
                let missing: Vec<usize> = [1usize, 2, 4].into_iter().filter(|&x| !h.contains(x)).collect();
                missing.len() == 1 && h.contains(7 - missing[0])
            })
            .map(|h| (h, 1))
            .collect();
        assert_eq!(hs.len(), 3);
        assert!(sha_theorem_3_9(&e, &hs).unwrap().is_trivial());
    }

    #[test]
    fn normal_prime_index_family_refusals() {
        let s3 = catalog::s3();
        let t = subgroup_closure(&s3, &[catalog::s3_element(&s3, "(1 2)")]);
        assert!(matches!(sha_theorem_3_9(&s3, &[(t, 1)]), Err(Error::HypothesisViolated(_))));
        let k = catalog::klein();
        let h = index_p_normals(&k, 2).remove(0);
        assert!(matches!(
            sha_theorem_3_9(&k, &[(h.clone(), 1), (h, 2)]),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn two_generated_and_annihilator_bounds() {
        assert_eq!(sha_prop_3_8(2, 2).unwrap(), FinAb::cyclic(2));
        assert!(sha_prop_3_8(1, 7).unwrap().is_trivial());
        assert_eq!(sha_prop_3_8(3, 3).unwrap(), FinAb::cyclic(3));
        assert!(sha_prop_3_8(2, 3).is_err());
        let a4 = catalog::a4_shape();
        let h = catalog::alpha_subgroup(&a4, 2);
        assert_eq!(annihilator_bound(&a4, &[(h, 1)]).unwrap(), 6);
        assert_eq!(annihilator_bound(&a4, &[(SubgroupHandle::whole(&a4), 1)]).unwrap(), 1);
        let k = catalog::klein();
        let hs: Vec<_> = index_p_normals(&k, 2).into_iter().take(2).map(|h| (h, 1)).collect();
        assert_eq!(annihilator_bound(&k, &hs).unwrap(), 2);
    }

    #[test]
    fn conditions_examples() {
        let a4 = catalog::a4_shape();
        let h = catalog::alpha_subgroup(&a4, 2);
        let c = conditions_4_18(&a4, &h, 2).unwrap();
        assert!(c.prerequisites_hold() && c.a && c.b && c.c);
        let b = catalog::beta_group(5);
        let c = conditions_4_18(&b, &catalog::beta_subgroup(&b, 5), 5).unwrap();
        assert!(c.all());
        let z33 = catalog::z_times_z(3, 3);
        let h = index_p_normals(&z33, 3).remove(0);
        assert!(matches!(conditions_4_18(&z33, &h, 3), Err(Error::HypothesisViolated(_))));
        assert!(!Conditions418::evaluate(&z33, &h, 3).unwrap().prereq_core_trivial);
    }

    #[test]
    fn p_part_examples() {
        let a4 = catalog::a4_shape();
        let h = catalog::alpha_subgroup(&a4, 2);
        assert_eq!(sha_p_part_4_18(&a4, &h, 2, &[]).unwrap(), FinAb::cyclic(2));
        let s2 = sylow_subgroup(&a4, 2).unwrap().subgroup;
        assert!(sha_p_part_4_18(&a4, &h, 2, &[s2]).unwrap().is_trivial());
        let g75 = catalog::alpha_group(5);
        let h75 = catalog::alpha_subgroup(&g75, 5);
        assert_eq!(sha_p_part_4_18(&g75, &h75, 5, &[]).unwrap(), FinAb::cyclic(5));
    }

    #[test]
    fn prime_to_p_examples() {
        let a4 = catalog::a4_shape();
        let h = catalog::alpha_subgroup(&a4, 2);
        let d = prime_to_p_detail(&a4, &h, 2, &[], &Budget::default()).unwrap();
        assert!(d.result.is_trivial());
        assert_eq!(d.certificate, Certificate::PrimeIndex);
        let w = witness_6_12(2, WitnessVariant::I).unwrap();
        let d = prime_to_p_detail(&w.group, &w.subgroup, 2, &[], &Budget::default()).unwrap();
        assert_eq!(d.result, FinAb::cyclic(3));
        assert_eq!(d.certificate, Certificate::CyclicFamily);
        assert_eq!(d.complement_order, Some(9));
        let b = catalog::beta_group(5);
        assert!(sha_prime_to_p_4_8(&b, &catalog::beta_subgroup(&b, 5), 5, &[]).unwrap().is_trivial());
        // a non-cyclic member without a prime-index certificate
        let s = sylow_subgroup(&w.group, 3).unwrap().subgroup;
        assert!(matches!(
            sha_prime_to_p_4_8(&w.group, &w.subgroup, 2, &[s]),
            Err(Error::CertificateUnavailable(_))
        ));
    }

    #[test]
    fn full_reports() {
        let a4 = catalog::a4_shape();
        let h = catalog::alpha_subgroup(&a4, 2);
        let r = sha_full(&a4, &h, Some(2), &[], Method::Both).unwrap();
        assert_eq!(r.result, FinAb::cyclic(2));
        assert_eq!(r.agreement, Some(true));
        let w = witness_6_12(2, WitnessVariant::I).unwrap();
        let r = sha_full(&w.group, &w.subgroup, Some(2), &[], Method::Theorem).unwrap();
        assert_eq!(r.result, FinAb::cyclic(6));
        let s3 = catalog::s3();
        let t = subgroup_closure(&s3, &[catalog::s3_element(&s3, "(1 2)")]);
        let r = sha_full(&s3, &t, Some(3), &[], Method::Both).unwrap();
        assert!(r.result.is_trivial());
        assert_eq!(r.agreement, Some(true));
        let z6 = catalog::cyclic(6);
        assert!(matches!(
            sha_full(&z6, &SubgroupHandle::trivial(&z6), Some(5), &[], Method::Both),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn vanishing_examples() {
        let s3 = catalog::s3();
        assert!(vanishing_4_16(&s3, &SubgroupHandle::trivial(&s3), 3));
        let z5 = catalog::cyclic(5);
        assert!(vanishing_4_16(&z5, &SubgroupHandle::trivial(&z5), 5));
        let a4 = catalog::a4_shape();
        assert!(!vanishing_4_16(&a4, &catalog::alpha_subgroup(&a4, 2), 2));
    }

    #[test]
    fn classification_examples() {
        let a4 = catalog::a4_shape();
        assert_eq!(classify_6_11(&a4, &catalog::alpha_subgroup(&a4, 2)).unwrap(), Classification::Alpha(2));
        let z35 = catalog::cyclic(35);
        assert_eq!(classify_6_11(&z35, &SubgroupHandle::trivial(&z35)).unwrap(), Classification::HnpHolds);
        let b = catalog::beta_group(5);
        assert_eq!(classify_6_11(&b, &catalog::beta_subgroup(&b, 5)).unwrap(), Classification::Beta(5));
        let g75 = catalog::alpha_group(5);
        assert_eq!(classify_6_11(&g75, &catalog::alpha_subgroup(&g75, 5)).unwrap(), Classification::Alpha(5));
        // index 6 in S3: only the 3-Sylow is normal, and 3 > 2
        let s3 = catalog::s3();
        assert_eq!(classify_6_11(&s3, &SubgroupHandle::trivial(&s3)).unwrap(), Classification::HnpHolds);
        for h in subgroup_classes(&a4) {
            if let Ok(Classification::Alpha(_) | Classification::Beta(_)) = classify_6_11(&a4, &h) {
                assert!(conditions_4_18(&a4, &h, 2).unwrap().all());
            }
        }
    }

    #[test]
    fn witnesses() {
        let w = witness_6_12(2, WitnessVariant::I).unwrap();
        assert_eq!((w.group.order(), w.subgroup.index()), (36, 18));
        assert_eq!(w.prediction, FinAb::cyclic(6));
        let w = witness_6_12(2, WitnessVariant::II(5)).unwrap();
        assert_eq!(w.subgroup.index(), 30);
        assert_eq!(w.prediction, FinAb::cyclic(10));
        let w = witness_6_12(5, WitnessVariant::I).unwrap();
        assert_eq!(w.subgroup.index(), 45);
        assert_eq!(w.prediction, FinAb::cyclic(15));
        assert!(witness_6_12(3, WitnessVariant::I).is_err());
        assert!(witness_6_12(2, WitnessVariant::II(3)).is_err());
    }
}
