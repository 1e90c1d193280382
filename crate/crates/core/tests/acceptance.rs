//! One PASS/FAIL line per acceptance criterion, with wall-clock times.
//! Exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use hnp_core::coh::{cohomology, sha, Budget};
use hnp_core::finab::gcd_all;
use hnp_core::grp::{
    abelianization, build_group, catalog, normal_subgroups, subgroup_classes, subgroup_closure, sylow_subgroup, GroupRef,
    SubgroupHandle,
};
use hnp_core::lat::{induced_perm_lattice, j_lattice};
use hnp_core::rep::{
    build_semidirect, check_bc, d_membership, exhaustive_scan, s_min, sylow2_gl2, witness_rep, ScanBudget,
};
use hnp_core::thm::{
    conditions_4_18, prime_to_p_detail, sha_full, sha_p_part_4_18, sha_prop_3_8, sha_theorem_3_9, witness_6_12, Method,
    WitnessVariant,
};
use hnp_core::FinAb;

type Outcome = Result<String, String>;

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

fn sha_of(g: &GroupRef, pairs: &[(SubgroupHandle, usize)], dset: &[SubgroupHandle]) -> Result<FinAb, String> {
    let (j, _) = j_lattice(g, pairs).map_err(e2s)?;
    Ok(sha(g, &j, dset).map_err(e2s)?.structure)
}

fn one(h: &SubgroupHandle) -> Vec<(SubgroupHandle, usize)> {
    vec![(h.clone(), 1)]
}

fn criterion_1() -> Outcome {
    let mut worst = Duration::ZERO;
    for (n1, n2) in [(2usize, 2usize), (2, 4), (3, 3)] {
        let t = Instant::now();
        let g = catalog::z_times_z(n1, n2);
        let got = sha_of(&g, &one(&SubgroupHandle::trivial(&g)), &[])?;
        let dt = t.elapsed();
        worst = worst.max(dt);
        ensure(got == FinAb::cyclic(n1 as u64), || format!("Z/{n1} x Z/{n2}: {got}"))?;
        ensure(got == sha_prop_3_8(n1 as u64, n2 as u64).map_err(e2s)?, || "evaluator disagrees".into())?;
        ensure(dt < Duration::from_secs(30), || format!("Z/{n1} x Z/{n2} took {dt:?}"))?;
    }
    Ok(format!("slowest case {worst:.2?}"))
}

fn index_p_normals(g: &GroupRef, p: usize) -> Vec<SubgroupHandle> {
    normal_subgroups(g).into_iter().filter(|h| h.index() == p).collect()
}

fn criterion_2() -> Outcome {
    let mut cases: Vec<(GroupRef, Vec<SubgroupHandle>, Option<FinAb>)> = Vec::new();
    let k = catalog::klein();
    let hk = index_p_normals(&k, 2);
    cases.push((k.clone(), hk[..2].to_vec(), None));
    cases.push((k.clone(), hk[..3].to_vec(), None));
    let z33 = catalog::z_times_z(3, 3);
    let h3 = index_p_normals(&z33, 3);
    for r in 2..=4 {
        let want = (r == 4).then(|| FinAb::elementary(3, 2));
        cases.push((z33.clone(), h3[..r].to_vec(), want));
    }
    // three hyperplanes of (Z/2)^3 meeting trivially: m = 3
    let e = catalog::elementary(2, 3);
    let hyper: Vec<SubgroupHandle> = [[2usize, 4], [1, 4], [1, 2]]
        .iter()
        .map(|gens| subgroup_closure(&e, gens))
        .collect();
    ensure(
        hyper.iter().skip(1).fold(hyper[0].clone(), |a, h| a.intersection(h)).is_trivial(),
        || "hyperplanes do not meet trivially".into(),
    )?;
    cases.push((e, hyper, Some(FinAb::trivial())));
    let t = Instant::now();
    let mut summary = Vec::new();
    for (g, hs, want) in cases {
        let pairs: Vec<(SubgroupHandle, usize)> = hs.iter().map(|h| (h.clone(), 1)).collect();
        let brute = sha_of(&g, &pairs, &[])?;
        let thm = sha_theorem_3_9(&g, &pairs).map_err(e2s)?;
        ensure(brute == thm, || format!("{} r={}: brute {brute}, theorem {thm}", g.label(), hs.len()))?;
        if let Some(w) = want {
            ensure(brute == w, || format!("{} r={}: {brute}, expected {w}", g.label(), hs.len()))?;
        }
        summary.push(format!("{} r={} -> {brute}", g.label(), hs.len()));
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(300), || format!("took {dt:?}"))?;
    Ok(format!("{} in {dt:.2?}", summary.join("; ")))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let g = catalog::a4_shape();
    let h = catalog::alpha_subgroup(&g, 2);
    ensure(h.order() == 2, || "H must have order 2".into())?;
    let c = conditions_4_18(&g, &h, 2).map_err(e2s)?;
    ensure(c.a && c.b && c.c, || format!("conditions {c:?}"))?;
    let brute = sha_of(&g, &one(&h), &[])?;
    ensure(brute == FinAb::cyclic(2), || format!("brute {brute}"))?;
    let s2 = sylow_subgroup(&g, 2).map_err(e2s)?.subgroup;
    let with_s2 = sha_of(&g, &one(&h), std::slice::from_ref(&s2))?;
    ensure(with_s2.is_trivial(), || format!("with S_2 in the family: {with_s2}"))?;
    let thm_s2 = sha_p_part_4_18(&g, &h, 2, std::slice::from_ref(&s2)).map_err(e2s)?;
    ensure(thm_s2.is_trivial(), || "theorem path with S_2 is not trivial".into())?;
    let r = sha_full(&g, &h, Some(2), &[], Method::Both).map_err(e2s)?;
    ensure(r.agreement == Some(true) && r.result == FinAb::cyclic(2), || format!("report {:?}", r.warnings))?;
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(60), || format!("took {dt:?}"))?;
    Ok(format!("a=b=c=true, Ш=[2], with S_2 in D Ш=[], agreement in {dt:.2?}"))
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let groups = vec![catalog::s3(), catalog::d4(), catalog::q8(), catalog::cyclic(12), catalog::a4_shape()];
    let mut count = 0;
    for g in &groups {
        for h in subgroup_classes(g) {
            if !hnp_core::arith::is_prime(h.index() as u64) {
                continue;
            }
            let s = sha_of(g, &one(&h), &[])?;
            ensure(s.is_trivial(), || format!("{} with index {}: {s}", g.label(), h.index()))?;
            count += 1;
        }
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(300), || format!("took {dt:?}"))?;
    Ok(format!("{count} prime-index pairs, all trivial, in {dt:.2?}"))
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut groups = catalog::small_groups();
    groups.push(build_group(&catalog::perm_spec(4, &["(1 2 3 4)", "(1 2)"], "S4")).map_err(e2s)?);
    groups.push(build_group(&catalog::perm_spec(5, &["(1 2 3 4 5)", "(2 5)(3 4)"], "D5")).map_err(e2s)?);
    groups.push(build_group(&catalog::perm_spec(7, &["(1 2 3 4 5 6 7)", "(2 7)(3 6)(4 5)"], "D7")).map_err(e2s)?);
    let mut count = 0;
    let mut twop = 0;
    for g in &groups {
        let classes = subgroup_classes(g);
        for h in &classes {
            let s = sha_of(g, &one(h), &[])?;
            let idx = h.index() as u64;
            ensure(s.is_annihilated_by(idx), || format!("{} index {idx}: {s}", g.label()))?;
            if idx.is_multiple_of(2) && idx / 2 > 2 && hnp_core::arith::is_prime(idx / 2) {
                ensure(s.is_annihilated_by(2), || format!("{} index {idx}=2p: {s}", g.label()))?;
                twop += 1;
            }
            count += 1;
        }
        // families of two subgroups: exponent divides the gcd of the indices
        for (i, a) in classes.iter().enumerate() {
            for b in classes.iter().skip(i + 1).take(3) {
                let pairs = vec![(a.clone(), 1), (b.clone(), 1)];
                let s = sha_of(g, &pairs, &[])?;
                let gi = gcd_all([a.index() as u64, b.index() as u64]);
                ensure(s.is_annihilated_by(gi), || format!("{} pair: {s} vs gcd {gi}", g.label()))?;
                count += 1;
            }
        }
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(300), || format!("took {dt:?}"))?;
    Ok(format!("{count} instances ({twop} of index 2p) in {dt:.2?}"))
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    for (p, s) in [(2u64, 4u64), (3, 9), (5, 15), (7, 21), (11, 33)] {
        let got = s_min(p).map_err(e2s)?;
        ensure(got == s, || format!("s_min({p}) = {got}"))?;
    }
    ensure(d_membership(55, 11).map_err(e2s)?.in_d1, || "55 not in D_1(11)".into())?;
    ensure(d_membership(91, 13).map_err(e2s)?.in_d2, || "91 not in D_2(13)".into())?;
    ensure(d_membership(95, 19).map_err(e2s)?.in_d2, || "95 not in D_2(19)".into())?;
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(1), || format!("took {dt:?}"))?;
    Ok(format!("s_min = 4, 9, 15, 21, 33; 55, 91, 95 memberships in {dt:.2?}"))
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let budget = ScanBudget::default();
    let mut parts = Vec::new();
    for n in [2u64, 3, 4, 6] {
        let r = exhaustive_scan(5, n, &budget).map_err(e2s)?;
        ensure(r.conclusive, || format!("n={n}: scan not conclusive: {:?}", r.warnings))?;
        let m = d_membership(5 * n, 5).map_err(e2s)?;
        ensure(!r.hits.is_empty() == (m.in_d1 || m.in_d2), || format!("n={n}: {} hits", r.hits.len()))?;
        if n == 4 {
            ensure(
                r.hits.iter().all(|h| h.gprime_cyclic && h.gprime_order == 4),
                || "n=4 hit with G' not Z/4".into(),
            )?;
        }
        parts.push(format!("n={n}: {} hits", r.hits.len()));
        if n == 6 {
            parts.push(format!(
                "{} subgroup classes, budget max_classes={} max_gl2_order={}",
                r.subgroup_classes, budget.max_classes, budget.max_gl2_order
            ));
        }
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(600), || format!("took {dt:?}"))?;
    Ok(format!("{} in {dt:.2?}", parts.join(", ")))
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    for p in [2u64, 3, 5] {
        for n in 1..=12u64 {
            if n % p == 0 {
                continue;
            }
            let Some(rep) = witness_rep(p, n).map_err(e2s)? else { continue };
            let (g, h, _) = build_semidirect(&rep).map_err(e2s)?;
            let c = conditions_4_18(&g, &h, p).map_err(e2s)?;
            let bc = check_bc(&rep);
            ensure(bc == (c.b, c.c), || format!("p={p} n={n}: (B,C)={bc:?}, (b,c)=({},{})", c.b, c.c))?;
            count += 1;
        }
    }
    let dt = t.elapsed();
    ensure(count > 0, || "no witnesses".into())?;
    ensure(dt < Duration::from_secs(120), || format!("took {dt:?}"))?;
    Ok(format!("{count} witness representations agree in {dt:.2?}"))
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    for p in [3u64, 5, 7, 11, 13] {
        let s = sylow2_gl2(p).map_err(e2s)?;
        let want = 1u64 << hnp_core::arith::ord_p(p * (p - 1) * (p - 1) * (p + 1), 2);
        ensure(s.order == want, || format!("p={p}: order {} vs {want}", s.order))?;
        if p % 4 == 3 {
            ensure(s.relations_hold == Some(true), || format!("p={p}: relations fail"))?;
        }
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(10), || format!("took {dt:?}"))?;
    Ok(format!("orders 16, 32, 32, 16, 32 in {dt:.2?}"))
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let w = witness_6_12(2, WitnessVariant::I).map_err(e2s)?;
    ensure(w.group.order() == 36 && w.subgroup.index() == 18, || "wrong witness shape".into())?;
    let pp = sha_p_part_4_18(&w.group, &w.subgroup, 2, &[]).map_err(e2s)?;
    ensure(pp == FinAb::cyclic(2), || format!("p-part {pp}"))?;
    let rest = prime_to_p_detail(&w.group, &w.subgroup, 2, &[], &Budget::default()).map_err(e2s)?;
    ensure(rest.result == FinAb::cyclic(3), || format!("prime-to-p part {}", rest.result))?;
    ensure(rest.result == sha_prop_3_8(3, 3).map_err(e2s)?, || "prime-to-p part differs from Z/3".into())?;
    let total = pp.direct_sum(&rest.result);
    ensure(total == FinAb::cyclic(6) && total == w.prediction, || format!("theorem path {total}"))?;
    let r = sha_full(&w.group, &w.subgroup, Some(2), &[], Method::Both).map_err(e2s)?;
    let brute_note = match &r.brute {
        Some(b) => {
            ensure(*b == total, || format!("brute {b}"))?;
            format!("brute force confirms {b}")
        }
        None => {
            let s2 = sylow_subgroup(&w.group, 2).map_err(e2s)?.subgroup;
            let hs = s2.intersection(&w.subgroup);
            let j = j_lattice(&s2.to_group(), &[(local(&s2, &hs), 1)]).map_err(e2s)?.0;
            let below = sha(&s2.to_group(), &j, &[]).map_err(e2s)?.structure;
            format!("brute over budget; Sylow restriction gives {below}")
        }
    };
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(900), || format!("took {dt:?}"))?;
    Ok(format!("[2] + [3] = {total}; {brute_note}; {dt:.2?}"))
}

fn local(parent: &SubgroupHandle, sub: &SubgroupHandle) -> SubgroupHandle {
    let g = parent.to_group();
    SubgroupHandle::new(&g, sub.elements().iter().map(|&x| parent.local(x).unwrap()).collect()).unwrap()
}

fn criterion_11() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    for g in catalog::small_groups().into_iter().filter(|g| g.order() <= 16) {
        for h in subgroup_classes(&g) {
            let (ind, _) = induced_perm_lattice(&g, &h);
            let h2 = cohomology(&g, &ind, 2).map_err(e2s)?.structure;
            let ab = abelianization(&h.to_group()).map_err(e2s)?.structure;
            ensure(h2 == ab, || format!("{} with |H|={}: H^2 {h2} vs {ab}", g.label(), h.order()))?;
            let s = sha(&g, &ind, &[]).map_err(e2s)?.structure;
            ensure(s.is_trivial(), || format!("{}: induced Ш {s}", g.label()))?;
            count += 1;
        }
    }
    let s3 = catalog::s3();
    let a3 = subgroup_closure(&s3, &[catalog::s3_element(&s3, "(1 2 3)")]);
    let (ind, _) = induced_perm_lattice(&s3, &a3);
    let h2 = cohomology(&s3, &ind, 2).map_err(e2s)?.structure;
    ensure(h2 == FinAb::cyclic(3), || format!("(S3, A3): {h2}"))?;
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(300), || format!("took {dt:?}"))?;
    Ok(format!("{count} pairs plus (S3, A3) -> [3] in {dt:.2?}"))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 cyclic products", criterion_1),
        ("2 normal prime-index families", criterion_2),
        ("3 order-12 instance", criterion_3),
        ("4 prime-index zeros", criterion_4),
        ("5 exponent bounds", criterion_5),
        ("6 degree-set table", criterion_6),
        ("7 representation scan", criterion_7),
        ("8 representation bridge", criterion_8),
        ("9 Sylow 2-subgroups of GL_2", criterion_9),
        ("10 order-36 witness", criterion_10),
        ("11 induced lattices", criterion_11),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.starts_with(o.as_str())) {
            continue;
        }
        let t = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let dt = t.elapsed();
        match out {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{dt:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{dt:.2?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
