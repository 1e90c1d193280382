//! Named groups used throughout the tests, the self-test and the witness
//! constructions.

use super::group::GroupRef;
use super::spec::{build_group, compose, parse_cycles, GroupSpec};
use super::subgroup::SubgroupHandle;
use super::FiniteGroup;

/// The order-3 matrix `[[0,-1],[1,-1]]`; fixed-point free on `F_p^2` for
/// every `p != 3`.
pub const PHI1: [[i64; 2]; 2] = [[0, -1], [1, -1]];
const PHI2_ROT: [[i64; 2]; 2] = [[-1, -1], [1, 0]];
const PHI2_SWAP: [[i64; 2]; 2] = [[0, 1], [1, 0]];
const ID2: [[i64; 2]; 2] = [[1, 0], [0, 1]];

fn mat(m: [[i64; 2]; 2]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn build(spec: &GroupSpec) -> GroupRef {
    build_group(spec).expect("catalog spec is valid")
}

pub fn perm_spec(degree: usize, gens: &[&str], label: &str) -> GroupSpec {
    GroupSpec::Permutations {
        degree,
        generators: gens.iter().map(|s| s.to_string()).collect(),
        label: Some(label.to_string()),
    }
}

pub fn cyclic_spec(n: usize) -> GroupSpec {
    GroupSpec::cyclic(n)
}

pub fn product_spec(factors: Vec<GroupSpec>, label: &str) -> GroupSpec {
    GroupSpec::Product {
        factors,
        label: Some(label.to_string()),
    }
}

pub fn s3_spec() -> GroupSpec {
    perm_spec(3, &["(1 2 3)", "(1 2)"], "S3")
}

pub fn d4_spec() -> GroupSpec {
    perm_spec(4, &["(1 2 3 4)", "(1 3)"], "D4")
}

pub fn q8_spec() -> GroupSpec {
    // index = unit + 4*sign, units 1,i,j,k
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    let mut mul = Vec::with_capacity(64);
    for a in 0..8 {
        for b in 0..8 {
            let (u, s) = UNIT[a % 4][b % 4];
            mul.push(u + 4 * ((s + a / 4 + b / 4) % 2));
        }
    }
    GroupSpec::Table {
        n: 8,
        mul,
        generators: Some(vec![1, 2]),
        label: Some("Q8".into()),
    }
}

pub fn z_times_z_spec(n1: usize, n2: usize) -> GroupSpec {
    product_spec(vec![cyclic_spec(n1), cyclic_spec(n2)], &format!("Z/{n1} x Z/{n2}"))
}

/// `(Z/p)^2 x|_{phi1} Z/3`; for `p = 2` this is the order-12 A4 shape.
pub fn alpha_spec(p: u64) -> GroupSpec {
    GroupSpec::Semidirect {
        p,
        m: 2,
        matrices: vec![mat(PHI1)],
        acting: Box::new(cyclic_spec(3)),
        label: Some(format!("(Z/{p})^2 x| Z/3")),
    }
}

/// `(Z/p)^2 x|_{phi2} S3`.
pub fn beta_spec(p: u64) -> GroupSpec {
    GroupSpec::Semidirect {
        p,
        m: 2,
        matrices: vec![mat(PHI2_ROT), mat(PHI2_SWAP)],
        acting: Box::new(s3_spec()),
        label: Some(format!("(Z/{p})^2 x| S3")),
    }
}

/// `V_p x| (Z/3)^2`, the second factor acting trivially.
pub fn witness_i_spec(p: u64) -> GroupSpec {
    GroupSpec::Semidirect {
        p,
        m: 2,
        matrices: vec![mat(PHI1), mat(ID2)],
        acting: Box::new(z_times_z_spec(3, 3)),
        label: Some(format!("(Z/{p})^2 x| (Z/3)^2")),
    }
}

/// `V_p x| (V_l x| Z/3)`, acting through the quotient `Z/3`.
pub fn witness_ii_spec(p: u64, l: u64) -> GroupSpec {
    GroupSpec::Semidirect {
        p,
        m: 2,
        matrices: vec![mat(ID2), mat(ID2), mat(PHI1)],
        acting: Box::new(alpha_spec(l)),
        label: Some(format!("(Z/{p})^2 x| ((Z/{l})^2 x| Z/3)")),
    }
}

pub fn cyclic(n: usize) -> GroupRef {
    build(&cyclic_spec(n))
}

pub fn klein() -> GroupRef {
    z_times_z(2, 2)
}

pub fn z_times_z(n1: usize, n2: usize) -> GroupRef {
    build(&z_times_z_spec(n1, n2))
}

pub fn elementary(p: usize, k: usize) -> GroupRef {
    build(&product_spec(vec![cyclic_spec(p); k], &format!("(Z/{p})^{k}")))
}

pub fn s3() -> GroupRef {
    build(&s3_spec())
}

pub fn d4() -> GroupRef {
    build(&d4_spec())
}

pub fn q8() -> GroupRef {
    build(&q8_spec())
}

pub fn a4_shape() -> GroupRef {
    alpha_group(2)
}

pub fn alpha_group(p: u64) -> GroupRef {
    build(&alpha_spec(p))
}

pub fn beta_group(p: u64) -> GroupRef {
    build(&beta_spec(p))
}

/// Index of `(v, q)` in a group built from a semidirect spec over `F_p^2`.
pub fn semidirect_index(p: u64, v: (u64, u64), q: usize) -> usize {
    (v.0 % p + p * (v.1 % p)) as usize + (p * p) as usize * q
}

/// Element of a permutation-built group given in cycle notation. Relies on
/// the breadth-first numbering used by `build_group`.
pub fn perm_element(spec: &GroupSpec, cycles: &str) -> Option<usize> {
    let GroupSpec::Permutations {
        degree, generators, ..
    } = spec
    else {
        return None;
    };
    let gens: Vec<Vec<u16>> = generators.iter().map(|s| parse_cycles(s, *degree).unwrap()).collect();
    let id: Vec<u16> = (0..*degree as u16).collect();
    let (_, elems) = FiniteGroup::from_generators(id, &gens, |a, b| compose(a, b), 1 << 20, "").ok()?;
    let target = parse_cycles(cycles, *degree).ok()?;
    elems.iter().position(|e| *e == target)
}

pub fn s3_element(_g: &GroupRef, cycles: &str) -> usize {
    perm_element(&s3_spec(), cycles).expect("element of S3")
}

/// `H = <(1,0)> x| {0}` in the alpha group.
pub fn alpha_subgroup(g: &GroupRef, p: u64) -> SubgroupHandle {
    super::subgroup_closure(g, &[semidirect_index(p, (1, 0), 0)])
}

/// `H = <(1,1)> x| <(1 2)>` in the beta group.
pub fn beta_subgroup(g: &GroupRef, p: u64) -> SubgroupHandle {
    let t = perm_element(&s3_spec(), "(1 2)").unwrap();
    super::subgroup_closure(
        g,
        &[semidirect_index(p, (1, 1), 0), semidirect_index(p, (0, 0), t)],
    )
}

/// Groups of order at most 16 used by exhaustive property tests.
pub fn small_groups() -> Vec<GroupRef> {
    vec![
        cyclic(1),
        cyclic(2),
        cyclic(3),
        cyclic(4),
        klein(),
        cyclic(6),
        s3(),
        d4(),
        q8(),
        z_times_z(2, 4),
        elementary(2, 3),
        z_times_z(3, 3),
        a4_shape(),
        cyclic(12),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(q8().order(), 8);
        assert!(!q8().is_abelian());
        assert_eq!(d4().order(), 8);
        assert_eq!(a4_shape().order(), 12);
        assert_eq!(alpha_group(5).order(), 75);
        assert_eq!(beta_group(5).order(), 150);
        assert_eq!(build(&witness_i_spec(2)).order(), 36);
        assert_eq!(build(&witness_ii_spec(2, 5)).order(), 300);
    }

    #[test]
    fn q8_has_one_involution() {
        let g = q8();
        let inv: Vec<usize> = (1..8).filter(|&x| g.element_order(x) == 2).collect();
        assert_eq!(inv.len(), 1);
    }

    #[test]
    fn named_subgroups() {
        let g = beta_group(5);
        let h = beta_subgroup(&g, 5);
        assert_eq!(h.order(), 10);
        assert_eq!(h.index(), 15);
        let a = a4_shape();
        assert_eq!(alpha_subgroup(&a, 2).elements(), &[0, 1]);
    }
}
