//! Finite groups given by multiplication tables and their subgroup lattices.

pub mod catalog;
mod group;
mod ops;
mod spec;
mod subgroup;

pub use group::{FiniteGroup, GroupRef, DEFAULT_ORDER_BOUND, EXHAUSTIVE_ASSOC_BOUND};
pub use ops::{
    abelian_quotient, abelianization, all_subgroups, closure_elements, commutator_subgroup,
    complement, core, cyclic_subgroups, derived_subgroup, double_cosets, left_cosets,
    normal_subgroups, normalizer_centralizer, subgroup_classes, subgroup_closure, sylow_subgroup,
    AbelianQuotient, DoubleCoset, Sylow, COMPLEMENT_SEARCH_BUDGET,
};
pub use spec::{build_group, build_group_bounded, parse_cycles, GroupSpec};
pub use subgroup::SubgroupHandle;

use crate::error::{Error, Result};

/// Resolve a subgroup reference: a comma-separated list of generating
/// element indices, or one of the anchors `trivial`, `whole`, `derived`,
/// `sylow:P`, and any anchor recorded by `build_group` (`kernel`, `acting`,
/// `factor:I`).
pub fn resolve_subgroup(g: &GroupRef, text: &str) -> Result<SubgroupHandle> {
    let t = text.trim();
    match t {
        "trivial" | "" => return Ok(SubgroupHandle::trivial(g)),
        "whole" => return Ok(SubgroupHandle::whole(g)),
        "derived" => return Ok(derived_subgroup(g)),
        _ => {}
    }
    if let Some(p) = t.strip_prefix("sylow:") {
        let p: u64 = p
            .parse()
            .map_err(|_| Error::SpecInvalid(format!("bad prime in {t:?}")))?;
        return Ok(sylow_subgroup(g, p)?.subgroup);
    }
    if let Some(els) = g.anchors().get(t) {
        return Ok(subgroup_closure(g, els));
    }
    let gens: Vec<usize> = t
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::SpecInvalid(format!("unknown subgroup reference {t:?}")))
        })
        .collect::<Result<_>>()?;
    if let Some(&bad) = gens.iter().find(|&&x| x >= g.order()) {
        return Err(Error::SpecInvalid(format!("element {bad} out of range")));
    }
    Ok(subgroup_closure(g, &gens))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_references() {
        let g = catalog::a4_shape();
        assert_eq!(resolve_subgroup(&g, "0,1").unwrap().order(), 2);
        assert_eq!(resolve_subgroup(&g, "kernel").unwrap().order(), 4);
        assert_eq!(resolve_subgroup(&g, "acting").unwrap().order(), 3);
        assert_eq!(resolve_subgroup(&g, "sylow:3").unwrap().order(), 3);
        assert_eq!(resolve_subgroup(&g, "derived").unwrap().order(), 4);
        assert!(resolve_subgroup(&g, "trivial").unwrap().is_trivial());
        assert!(resolve_subgroup(&g, "12").is_err());
        assert!(resolve_subgroup(&g, "bogus").is_err());
        let p = catalog::z_times_z(2, 3);
        assert_eq!(resolve_subgroup(&p, "factor:1").unwrap().order(), 3);
    }
}
