//! Built-in consistency checks: `quick` covers the catalog groups of order at
//! most 16, `full` adds the larger reference cases.

use hnp_core::arith::is_prime;
use hnp_core::coh::{cohomology, sha};
use hnp_core::grp::{abelianization, build_group, catalog, normal_subgroups, subgroup_classes, sylow_subgroup, GroupRef};
use hnp_core::lat::{induced_perm_lattice, j_lattice};
use hnp_core::rep::{build_semidirect, check_bc, d_membership, exhaustive_scan, s_min, sylow2_gl2, witness_rep, ScanBudget};
use hnp_core::thm::{
    classify_6_11, conditions_4_18, sha_full, sha_full_with, sha_prop_3_8, witness_6_12, Classification, Method,
    WitnessVariant,
};
use hnp_core::FinAb;
use serde::Serialize;
use serde_json::json;

use crate::report::Outcome;
use crate::Scope;

#[derive(Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Exponent bounds, prime-index vanishing and theorem/brute agreement over
/// every subgroup class of `g`.
fn sha_bounds(g: &GroupRef) -> Verdict {
    let mut compared = 0;
    for h in subgroup_classes(g) {
        let r = sha_full(g, &h, None, &[], Method::Both).map_err(e2s)?;
        let s = r.brute.clone().ok_or("brute path did not run")?;
        let idx = h.index() as u64;
        ensure(s.is_annihilated_by(idx), || format!("|H| = {}: {s} not killed by {idx}", h.order()))?;
        if is_prime(idx) {
            ensure(s.is_trivial(), || format!("prime index {idx} but Ш = {s}"))?;
        }
        ensure(r.agreement != Some(false), || {
            format!("|H| = {}: theorem {:?} vs brute {s}", h.order(), r.theorem)
        })?;
        compared += usize::from(r.agreement.is_some());
    }
    Ok(format!("{} classes, {compared} compared", subgroup_classes(g).len()))
}

/// `H²(G, Z[G/H]) ≅ H^ab` and `Ш²_ω(G, Z[G/H]) = 0`.
fn shapiro(g: &GroupRef) -> Verdict {
    let classes = subgroup_classes(g);
    for h in &classes {
        let (m, _) = induced_perm_lattice(g, h);
        let h2 = cohomology(g, &m, 2).map_err(e2s)?.structure;
        let ab = abelianization(&h.to_group()).map_err(e2s)?.structure;
        ensure(h2 == ab, || format!("|H| = {}: H² = {h2}, H^ab = {ab}", h.order()))?;
        let s = sha(g, &m, &[]).map_err(e2s)?.structure;
        ensure(s.is_trivial(), || format!("|H| = {}: Ш = {s}", h.order()))?;
    }
    Ok(format!("{} classes", classes.len()))
}

fn two_generated() -> Verdict {
    for (n1, n2) in [(2usize, 2usize), (2, 4), (3, 3)] {
        let g = catalog::z_times_z(n1, n2);
        let (j, _) = j_lattice(&g, &[(hnp_core::grp::SubgroupHandle::trivial(&g), 1)]).map_err(e2s)?;
        let s = sha(&g, &j, &[]).map_err(e2s)?.structure;
        let want = sha_prop_3_8(n1 as u64, n2 as u64).map_err(e2s)?;
        ensure(s == want && s == FinAb::cyclic(n1 as u64), || format!("({n1},{n2}): {s} vs {want}"))?;
    }
    Ok("(2,2) (2,4) (3,3)".into())
}

fn a4_agreement() -> Verdict {
    let g = catalog::a4_shape();
    let h = catalog::alpha_subgroup(&g, 2);
    let r = sha_full(&g, &h, Some(2), &[], Method::Both).map_err(e2s)?;
    ensure(r.result == FinAb::cyclic(2) && r.agreement == Some(true), || {
        format!("result {} agreement {:?}", r.result, r.agreement)
    })?;
    let s2 = sylow_subgroup(&g, 2).map_err(e2s)?.subgroup;
    let r = sha_full(&g, &h, Some(2), &[s2], Method::Both).map_err(e2s)?;
    ensure(r.result.is_trivial() && r.agreement == Some(true), || {
        format!("with S_2 in D: {} agreement {:?}", r.result, r.agreement)
    })?;
    Ok("[2], and [] once S_2 is a decomposition group".into())
}

fn prime_index_families() -> Verdict {
    for (g, p) in [(catalog::klein(), 2usize), (catalog::z_times_z(3, 3), 3)] {
        let hs: Vec<_> = normal_subgroups(&g).into_iter().filter(|h| h.index() == p).collect();
        for r in 2..=hs.len() {
            let pairs: Vec<_> = hs.iter().take(r).map(|h| (h.clone(), 1)).collect();
            let rep = sha_full_with(&g, &pairs, None, &[], Method::Both, &Default::default()).map_err(e2s)?;
            ensure(rep.agreement == Some(true), || format!("{} r = {r}: {:?}", g.label(), rep.warnings))?;
        }
    }
    Ok("(Z/2)^2 and (Z/3)^2 families".into())
}

fn membership_table() -> Verdict {
    for (p, want) in [(2, 4), (3, 9), (5, 15), (7, 21), (11, 33)] {
        let got = s_min(p).map_err(e2s)?;
        ensure(got == want, || format!("s_min({p}) = {got}, expected {want}"))?;
    }
    let d = |d, p| d_membership(d, p).map_err(e2s);
    ensure(d(55, 11)?.in_d1, || "55 not in D_1(11)".into())?;
    ensure(d(91, 13)?.in_d2, || "91 not in D_2(13)".into())?;
    ensure(d(95, 19)?.in_d2, || "95 not in D_2(19)".into())?;
    Ok("s_min and the sample memberships".into())
}

fn scans() -> Verdict {
    let mut out = Vec::new();
    for n in [2u64, 3, 4] {
        let r = exhaustive_scan(5, n, &ScanBudget::default()).map_err(e2s)?;
        ensure(r.conclusive, || format!("(5,{n}) inconclusive"))?;
        ensure(r.hits.is_empty() == (n == 2), || format!("(5,{n}): {} hits", r.hits.len()))?;
        if n == 4 {
            ensure(r.hits.iter().all(|h| h.gprime_cyclic && h.gprime_order == 4), || {
                "(5,4): non-cyclic G'".into()
            })?;
        }
        out.push(format!("(5,{n}): {}", r.hits.len()));
    }
    Ok(out.join(", "))
}

fn sylow2() -> Verdict {
    for p in [3u64, 5, 7, 11, 13] {
        let s = sylow2_gl2(p).map_err(e2s)?;
        ensure(s.order == s.expected_order && s.relations_hold != Some(false), || format!("p = {p}: order {}", s.order))?;
    }
    Ok("p = 3, 5, 7, 11, 13".into())
}

fn bridge() -> Verdict {
    let mut count = 0;
    for p in [2u64, 3, 5] {
        for n in (2..=8u64).filter(|n| n % p != 0) {
            if let Some(rep) = witness_rep(p, n).map_err(e2s)? {
                let (g, h, _) = build_semidirect(&rep).map_err(e2s)?;
                let c = conditions_4_18(&g, &h, p).map_err(e2s)?;
                ensure(check_bc(&rep) == (c.b, c.c), || format!("p = {p}, n = {n}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} representations"))
}

fn witness() -> Verdict {
    let w = witness_6_12(2, WitnessVariant::I).map_err(e2s)?;
    let r = sha_full(&w.group, &w.subgroup, Some(2), &[], Method::Both).map_err(e2s)?;
    ensure(r.result == FinAb::cyclic(6) && r.agreement != Some(false), || {
        format!("{} (agreement {:?})", r.result, r.agreement)
    })?;
    Ok(format!("[6], brute {}", r.brute.map_or("skipped".into(), |b| b.to_string())))
}

fn classification() -> Verdict {
    for p in [2u64, 5] {
        let g = catalog::alpha_group(p);
        let c = classify_6_11(&g, &catalog::alpha_subgroup(&g, p)).map_err(e2s)?;
        ensure(c == Classification::Alpha(p), || format!("alpha({p}) classified {c:?}"))?;
    }
    let g = catalog::beta_group(5);
    let c = classify_6_11(&g, &catalog::beta_subgroup(&g, 5)).map_err(e2s)?;
    ensure(c == Classification::Beta(5), || format!("beta(5) classified {c:?}"))?;
    Ok("alpha(2), alpha(5), beta(5)".into())
}

fn degree_24_groups() -> Vec<GroupRef> {
    [
        (5, vec!["(1 2 3 4 5)", "(2 5)(3 4)"], "D5"),
        (6, vec!["(1 2 3 4 5 6)", "(1 6)(2 5)(3 4)"], "D6"),
        (7, vec!["(1 2 3 4 5 6 7)", "(2 7)(3 6)(4 5)"], "D7"),
        (4, vec!["(1 2 3 4)", "(1 2)"], "S4"),
    ]
    .into_iter()
    .map(|(d, gens, label)| build_group(&catalog::perm_spec(d, &gens, label)).expect("catalog group"))
    .collect()
}

pub fn run(scope: Scope) -> Outcome {
    let mut checks = Vec::new();
    let mut record = |name: String, v: Verdict| {
        let (pass, detail) = match v {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        checks.push(Check { name, pass, detail });
    };
    let mut groups = catalog::small_groups();
    if scope == Scope::Full {
        groups.extend(degree_24_groups());
    }
    for g in &groups {
        record(format!("sha bounds: {}", g.label()), sha_bounds(g));
        if g.order() <= 16 {
            record(format!("induced lattices: {}", g.label()), shapiro(g));
        }
    }
    record("two-generated abelian J_G".into(), two_generated());
    record("prime-index families".into(), prime_index_families());
    record("A4 theorem/brute agreement".into(), a4_agreement());
    if scope == Scope::Full {
        record("degree membership".into(), membership_table());
        record("representation scans at p = 5".into(), scans());
        record("Sylow 2-subgroups of GL2".into(), sylow2());
        record("representation bridge".into(), bridge());
        record("order-36 witness".into(), witness());
        record("reference classification".into(), classification());
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    Outcome {
        results: json!({
            "passed": checks.len() - failed.len(),
            "failed": failed.len(),
            "checks": checks,
        }),
        method: Some("selftest".into()),
        budgets: json!({}),
        warnings: failed.iter().map(|n| format!("check failed: {n}")).collect(),
        exit_code: if failed.is_empty() { 0 } else { 1 },
    }
}
