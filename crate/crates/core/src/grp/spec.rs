//! Group ingestion: the serialisable [`GroupSpec`] and its realisation as a
//! [`FiniteGroup`].

use super::group::{FiniteGroup, GroupRef, DEFAULT_ORDER_BOUND};
use crate::arith::is_prime;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Human-writable description of a finite group.
///
/// * `table`: `n` and a row-major multiplication table `mul`.
/// * `permutations`: `degree` and generators in cycle notation, e.g. `"(1 2 3)"`.
/// * `semidirect`: `F_p^m` extended by the `acting` group, which acts through
///   one `m x m` matrix per generator of the acting group.
/// * `product`: direct product of `factors`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Table {
        n: usize,
        mul: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Permutations {
        degree: usize,
        generators: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Semidirect {
        p: u64,
        m: usize,
        matrices: Vec<Vec<Vec<i64>>>,
        acting: Box<GroupSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Product {
        factors: Vec<GroupSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

impl GroupSpec {
    pub fn cyclic(n: usize) -> GroupSpec {
        let gen = if n == 1 {
            "()".to_string()
        } else {
            format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" "))
        };
        GroupSpec::Permutations {
            degree: n.max(1),
            generators: vec![gen],
            label: Some(format!("Z/{n}")),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GroupSpec::Table { .. } => "table",
            GroupSpec::Permutations { .. } => "permutations",
            GroupSpec::Semidirect { .. } => "semidirect",
            GroupSpec::Product { .. } => "product",
        }
    }

    fn label(&self) -> Option<&String> {
        match self {
            GroupSpec::Table { label, .. }
            | GroupSpec::Permutations { label, .. }
            | GroupSpec::Semidirect { label, .. }
            | GroupSpec::Product { label, .. } => label.as_ref(),
        }
    }

    /// Structural checks that need no group construction (matrix shapes,
    /// invertibility mod p, cycle syntax).
    pub fn validate_shallow(&self) -> Result<()> {
        match self {
            GroupSpec::Table { n, mul, .. } => {
                if mul.len() != n * n {
                    return Err(Error::SpecInvalid(format!("table needs {} entries", n * n)));
                }
            }
            GroupSpec::Permutations {
                degree, generators, ..
            } => {
                for g in generators {
                    parse_cycles(g, *degree)?;
                }
            }
            GroupSpec::Semidirect {
                p,
                m,
                matrices,
                acting,
                ..
            } => {
                if !is_prime(*p) {
                    return Err(Error::SpecInvalid(format!("{p} is not prime")));
                }
                for mat in matrices {
                    let reduced = reduce_matrix(mat, *p, *m)?;
                    if det_mod(&reduced, *p) == 0 {
                        return Err(Error::SpecInvalid(format!(
                            "action matrix {mat:?} is not invertible mod {p}"
                        )));
                    }
                }
                acting.validate_shallow()?;
            }
            GroupSpec::Product { factors, .. } => {
                for f in factors {
                    f.validate_shallow()?;
                }
            }
        }
        Ok(())
    }
}

/// Parse one permutation in cycle notation (points are 1-based) into a
/// 0-based image vector.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Vec<u16>> {
    let mut perm: Vec<u16> = (0..degree as u16).collect();
    let t = text.trim();
    if t.is_empty() || t == "()" || t == "e" {
        return Ok(perm);
    }
    let mut rest = t;
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| Error::SpecInvalid(format!("expected '(' in {text:?}")))?;
        if !rest[..open].trim().is_empty() {
            return Err(Error::SpecInvalid(format!("junk before cycle in {text:?}")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::SpecInvalid(format!("unclosed cycle in {text:?}")))?;
        let body = &rest[open + 1..close];
        let pts: Vec<usize> = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::SpecInvalid(format!("bad point {s:?} in {text:?}")))
            })
            .collect::<Result<_>>()?;
        let mut seen = std::collections::HashSet::new();
        for &x in &pts {
            if x == 0 || x > degree {
                return Err(Error::SpecInvalid(format!("point {x} outside 1..={degree}")));
            }
            if !seen.insert(x) {
                return Err(Error::SpecInvalid(format!("point {x} repeated in a cycle")));
            }
        }
        // cycles compose right to left, like function application
        let mut cyc: Vec<u16> = (0..degree as u16).collect();
        for k in 0..pts.len() {
            cyc[pts[k] - 1] = (pts[(k + 1) % pts.len()] - 1) as u16;
        }
        perm = perm.iter().map(|&x| cyc[x as usize]).collect();
        rest = rest[close + 1..].trim_start();
    }
    Ok(perm)
}

/// `(a*b)(x) = a(b(x))`
pub fn compose(a: &[u16], b: &[u16]) -> Vec<u16> {
    b.iter().map(|&x| a[x as usize]).collect()
}

pub(crate) type MatP = Vec<Vec<u64>>;

fn reduce_matrix(mat: &[Vec<i64>], p: u64, m: usize) -> Result<MatP> {
    if mat.len() != m || mat.iter().any(|r| r.len() != m) {
        return Err(Error::SpecInvalid(format!("action matrix must be {m}x{m}")));
    }
    Ok(mat
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect())
}

pub(crate) fn mat_mul_mod(a: &MatP, b: &MatP, p: u64) -> MatP {
    let m = a.len();
    let mut out = vec![vec![0u64; m]; m];
    for i in 0..m {
        for k in 0..m {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] = (out[i][j] + a[i][k] * b[k][j]) % p;
            }
        }
    }
    out
}

fn det_mod(a: &MatP, p: u64) -> u64 {
    let m = a.len();
    let mut a: Vec<Vec<u64>> = a.clone();
    let mut det = 1u64;
    for c in 0..m {
        let Some(r) = (c..m).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if r != c {
            a.swap(r, c);
            det = (p - det) % p;
        }
        det = det * a[c][c] % p;
        let inv = crate::arith::inv_mod(a[c][c], p).unwrap();
        for r in c + 1..m {
            let f = a[r][c] * inv % p;
            for k in c..m {
                a[r][k] = (a[r][k] + p * p - f * a[c][k] % p) % p;
            }
        }
    }
    det
}

fn identity_mat(m: usize) -> MatP {
    (0..m)
        .map(|i| (0..m).map(|j| u64::from(i == j)).collect())
        .collect()
}

/// Realise a [`GroupSpec`] as a finite group with at most `bound` elements.
pub fn build_group(spec: &GroupSpec) -> Result<GroupRef> {
    build_group_bounded(spec, DEFAULT_ORDER_BOUND).map(Arc::new)
}

pub fn build_group_bounded(spec: &GroupSpec, bound: usize) -> Result<FiniteGroup> {
    spec.validate_shallow()?;
    let g = match spec {
        GroupSpec::Table {
            n, mul, generators, ..
        } => {
            let mut g = FiniteGroup::from_table(*n, mul.clone(), "table")?;
            if *n > bound {
                return Err(Error::OrderBudgetExceeded { limit: bound });
            }
            if let Some(gens) = generators {
                if gens.iter().any(|&x| x >= *n) {
                    return Err(Error::SpecInvalid("generator index out of range".into()));
                }
                let closure = super::ops::closure_elements(&g, gens);
                if closure.len() != *n {
                    return Err(Error::SpecInvalid("declared generators do not generate the table group".into()));
                }
                g.set_generators(gens.clone());
            }
            g
        }
        GroupSpec::Permutations {
            degree, generators, ..
        } => {
            let perms: Vec<Vec<u16>> = generators
                .iter()
                .map(|s| parse_cycles(s, *degree))
                .collect::<Result<_>>()?;
            let id: Vec<u16> = (0..*degree as u16).collect();
            let (g, _) = FiniteGroup::from_generators(
                id,
                &perms,
                |a, b| compose(a, b),
                bound,
                format!("perm({})", generators.join(",")),
            )?;
            g
        }
        GroupSpec::Semidirect {
            p,
            m,
            matrices,
            acting,
            ..
        } => {
            let q = build_group_bounded(acting, bound)?;
            let mats: Vec<MatP> = matrices
                .iter()
                .map(|mat| reduce_matrix(mat, *p, *m))
                .collect::<Result<_>>()?;
            semidirect(*p, *m, &mats, &q, bound)?
        }
        GroupSpec::Product { factors, .. } => {
            let built: Vec<FiniteGroup> = factors
                .iter()
                .map(|f| build_group_bounded(f, bound))
                .collect::<Result<_>>()?;
            direct_product(&built, bound)?
        }
    };
    Ok(match spec.label() {
        Some(l) => g.with_label(l.clone()),
        None => g,
    })
}

/// Extend the generator images of an acting group to a homomorphism into
/// `GL_m(F_p)`, checking the homomorphism property on all pairs.
pub(crate) fn extend_action(
    q: &FiniteGroup,
    mats: &[MatP],
    p: u64,
    m: usize,
) -> Result<Vec<MatP>> {
    if mats.len() != q.generators().len() {
        return Err(Error::SpecInvalid(format!(
            "{} matrices given for {} generators of the acting group",
            mats.len(),
            q.generators().len()
        )));
    }
    let n = q.order();
    let mut phi: Vec<Option<MatP>> = vec![None; n];
    phi[0] = Some(identity_mat(m));
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (k, &g) in q.generators().iter().enumerate() {
            let y = q.mul(x, g);
            if phi[y].is_none() {
                phi[y] = Some(mat_mul_mod(phi[x].as_ref().unwrap(), &mats[k], p));
                queue.push(y);
            }
        }
    }
    let phi: Vec<MatP> = phi
        .into_iter()
        .map(|x| x.ok_or_else(|| Error::SpecInvalid("acting generators do not generate".into())))
        .collect::<Result<_>>()?;
    for a in 0..n {
        for b in 0..n {
            if mat_mul_mod(&phi[a], &phi[b], p) != phi[q.mul(a, b)] {
                return Err(Error::SpecInvalid(format!(
                    "action matrices do not define a homomorphism (elements {a}, {b})"
                )));
            }
        }
    }
    Ok(phi)
}

/// `F_p^m x| Q`, element `(v, q)` stored at index `v_index + p^m * q`, where
/// `v_index = sum v_k p^k`.
pub(crate) fn semidirect(
    p: u64,
    m: usize,
    mats: &[MatP],
    q: &FiniteGroup,
    bound: usize,
) -> Result<FiniteGroup> {
    let phi = extend_action(q, mats, p, m)?;
    let vsize = (p as usize)
        .checked_pow(m as u32)
        .ok_or(Error::OrderBudgetExceeded { limit: bound })?;
    let n = vsize
        .checked_mul(q.order())
        .ok_or(Error::OrderBudgetExceeded { limit: bound })?;
    if n > bound {
        return Err(Error::OrderBudgetExceeded { limit: bound });
    }
    let decode = |v: usize| -> Vec<u64> {
        let mut v = v;
        (0..m)
            .map(|_| {
                let d = (v % p as usize) as u64;
                v /= p as usize;
                d
            })
            .collect()
    };
    let encode = |v: &[u64]| -> usize { v.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize) };
    let vecs: Vec<Vec<u64>> = (0..vsize).map(decode).collect();
    // act[qi][vi] = index of phi(q) v
    let act: Vec<Vec<usize>> = phi
        .iter()
        .map(|mat| {
            vecs.iter()
                .map(|v| {
                    let w: Vec<u64> = (0..m)
                        .map(|i| (0..m).map(|j| mat[i][j] * v[j]).sum::<u64>() % p)
                        .collect();
                    encode(&w)
                })
                .collect()
        })
        .collect();
    let add = |a: usize, b: usize| -> usize {
        let w: Vec<u64> = vecs[a].iter().zip(&vecs[b]).map(|(x, y)| (x + y) % p).collect();
        encode(&w)
    };
    let mut addt = vec![0usize; vsize * vsize];
    for a in 0..vsize {
        for b in 0..vsize {
            addt[a * vsize + b] = add(a, b);
        }
    }
    let mut mul = vec![0u32; n * n];
    for x in 0..n {
        let (v, qa) = (x % vsize, x / vsize);
        for y in 0..n {
            let (w, qb) = (y % vsize, y / vsize);
            let vw = addt[v * vsize + act[qa][w]];
            mul[x * n + y] = (vw + vsize * q.mul(qa, qb)) as u32;
        }
    }
    let mut gens: Vec<usize> = (0..m).map(|k| (p as usize).pow(k as u32)).collect();
    gens.extend(q.generators().iter().map(|&g| g * vsize));
    let mut g = FiniteGroup::from_raw(n, mul, format!("F_{p}^{m} x| {}", q.label()), gens)?;
    g.add_anchor("kernel", (0..vsize).collect());
    g.add_anchor("acting", (0..q.order()).map(|k| k * vsize).collect());
    Ok(g)
}

/// Direct product; element index is mixed radix with the first factor least
/// significant.
pub(crate) fn direct_product(factors: &[FiniteGroup], bound: usize) -> Result<FiniteGroup> {
    let orders: Vec<usize> = factors.iter().map(|f| f.order()).collect();
    let n = orders
        .iter()
        .try_fold(1usize, |acc, &o| acc.checked_mul(o))
        .ok_or(Error::OrderBudgetExceeded { limit: bound })?;
    if n > bound {
        return Err(Error::OrderBudgetExceeded { limit: bound });
    }
    let split = |mut x: usize| -> Vec<usize> {
        orders
            .iter()
            .map(|&o| {
                let d = x % o;
                x /= o;
                d
            })
            .collect()
    };
    let join = |c: &[usize]| -> usize { c.iter().zip(&orders).rev().fold(0, |acc, (&d, &o)| acc * o + d) };
    let coords: Vec<Vec<usize>> = (0..n).map(split).collect();
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            let c: Vec<usize> = factors
                .iter()
                .enumerate()
                .map(|(k, f)| f.mul(coords[a][k], coords[b][k]))
                .collect();
            mul[a * n + b] = join(&c) as u32;
        }
    }
    let mut gens = Vec::new();
    let mut stride = 1;
    let mut anchors = Vec::new();
    for (k, f) in factors.iter().enumerate() {
        gens.extend(f.generators().iter().filter(|&&g| g != 0).map(|&g| g * stride));
        anchors.push((format!("factor:{k}"), (0..f.order()).map(|x| x * stride).collect::<Vec<_>>()));
        stride *= f.order();
    }
    if gens.is_empty() {
        gens.push(0);
    }
    let label = factors.iter().map(|f| f.label().to_string()).collect::<Vec<_>>().join(" x ");
    let mut g = FiniteGroup::from_raw(n, mul, label, gens)?;
    for (name, els) in anchors {
        g.add_anchor(name, els);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_parsing() {
        assert_eq!(parse_cycles("(1 2 3)", 3).unwrap(), vec![1, 2, 0]);
        assert_eq!(parse_cycles("(1,2)(3 4)", 4).unwrap(), vec![1, 0, 3, 2]);
        assert_eq!(parse_cycles("()", 2).unwrap(), vec![0, 1]);
        assert!(parse_cycles("(1 5)", 3).is_err());
        assert!(parse_cycles("(1 1)", 3).is_err());
        assert!(parse_cycles("1 2", 3).is_err());
    }

    #[test]
    fn s3_from_permutations() {
        let spec = GroupSpec::Permutations {
            degree: 3,
            generators: vec!["(1 2 3)".into(), "(1 2)".into()],
            label: None,
        };
        let g = build_group(&spec).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn trivial_table() {
        let g = build_group(&GroupSpec::Table {
            n: 1,
            mul: vec![0],
            generators: None,
            label: None,
        })
        .unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn semidirect_a4_shape() {
        let spec = GroupSpec::Semidirect {
            p: 2,
            m: 2,
            matrices: vec![vec![vec![0, -1], vec![1, -1]]],
            acting: Box::new(GroupSpec::cyclic(3)),
            label: None,
        };
        let g = build_group(&spec).unwrap();
        assert_eq!(g.order(), 12);
        assert!(!g.is_abelian());
        // the kernel anchor is a normal subgroup of order 4
        let v = &g.anchors()["kernel"];
        assert_eq!(v.len(), 4);
        for x in 0..12 {
            for &k in v {
                assert!(v.contains(&g.conj(x, k)));
            }
        }
    }

    #[test]
    fn semidirect_rejects_bad_action() {
        // order-2 matrix assigned to a generator of order 3
        let spec = GroupSpec::Semidirect {
            p: 3,
            m: 2,
            matrices: vec![vec![vec![0, 1], vec![1, 0]]],
            acting: Box::new(GroupSpec::cyclic(3)),
            label: None,
        };
        assert!(matches!(build_group(&spec), Err(Error::SpecInvalid(_))));
        let singular = GroupSpec::Semidirect {
            p: 3,
            m: 2,
            matrices: vec![vec![vec![1, 1], vec![1, 1]]],
            acting: Box::new(GroupSpec::cyclic(3)),
            label: None,
        };
        assert!(matches!(build_group(&singular), Err(Error::SpecInvalid(_))));
    }

    #[test]
    fn product_and_budget() {
        let spec = GroupSpec::Product {
            factors: vec![GroupSpec::cyclic(2), GroupSpec::cyclic(4)],
            label: None,
        };
        let g = build_group(&spec).unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.is_abelian());
        let big = GroupSpec::Product {
            factors: vec![GroupSpec::cyclic(30), GroupSpec::cyclic(30)],
            label: None,
        };
        assert!(matches!(build_group(&big), Err(Error::OrderBudgetExceeded { .. })));
    }

    #[test]
    fn spec_json_round_trip() {
        let text = r#"{"kind":"semidirect","p":2,"m":2,"matrices":[[[0,-1],[1,-1]]],
            "acting":{"kind":"permutations","degree":3,"generators":["(1 2 3)"]}}"#;
        let spec: GroupSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.kind(), "semidirect");
        let back: GroupSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }
}
