use super::group::{FiniteGroup, GroupRef};
use super::ops::closure_elements;
use crate::error::{Error, Result};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A subgroup of `parent`, stored as its strictly increasing element list.
#[derive(Clone)]
pub struct SubgroupHandle {
    parent: GroupRef,
    elements: Vec<usize>,
}

impl PartialEq for SubgroupHandle {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}
impl Eq for SubgroupHandle {}

impl Hash for SubgroupHandle {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state)
    }
}

/// Ordered by size, then lexicographically.
impl PartialOrd for SubgroupHandle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for SubgroupHandle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.elements.len(), &self.elements).cmp(&(other.elements.len(), &other.elements))
    }
}

impl fmt::Debug for SubgroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, {:?})", self.order(), self.elements)
    }
}

impl SubgroupHandle {
    /// Checked constructor: `elements` must form a subgroup.
    pub fn new(parent: &GroupRef, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(Error::SpecInvalid("subgroup must contain the identity".into()));
        }
        if elements.iter().any(|&x| x >= parent.order()) {
            return Err(Error::SpecInvalid("subgroup element out of range".into()));
        }
        let h = SubgroupHandle {
            parent: parent.clone(),
            elements,
        };
        for &a in &h.elements {
            if !h.contains(parent.inv(a)) {
                return Err(Error::SpecInvalid("subset is not closed under inverses".into()));
            }
            for &b in &h.elements {
                if !h.contains(parent.mul(a, b)) {
                    return Err(Error::SpecInvalid("subset is not closed under multiplication".into()));
                }
            }
        }
        Ok(h)
    }

    /// Caller guarantees `elements` is a sorted subgroup.
    pub(crate) fn from_sorted(parent: &GroupRef, elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        SubgroupHandle {
            parent: parent.clone(),
            elements,
        }
    }

    pub fn trivial(parent: &GroupRef) -> Self {
        Self::from_sorted(parent, vec![0])
    }

    pub fn whole(parent: &GroupRef) -> Self {
        Self::from_sorted(parent, (0..parent.order()).collect())
    }

    pub fn parent(&self) -> &GroupRef {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `(G : H)`
    pub fn index(&self) -> usize {
        self.parent.order() / self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.parent.order()
    }

    pub fn is_subgroup_of(&self, other: &SubgroupHandle) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// `g H g^{-1}`
    pub fn conjugate(&self, g: usize) -> SubgroupHandle {
        let mut els: Vec<usize> = self.elements.iter().map(|&x| self.parent.conj(g, x)).collect();
        els.sort_unstable();
        Self::from_sorted(&self.parent, els)
    }

    pub fn is_normal(&self) -> bool {
        let gens = self.generating_set();
        self.parent
            .generators()
            .iter()
            .all(|&g| gens.iter().all(|&h| self.contains(self.parent.conj(g, h))))
    }

    pub fn intersection(&self, other: &SubgroupHandle) -> SubgroupHandle {
        let els = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        Self::from_sorted(&self.parent, els)
    }

    /// Subgroup generated by both.
    pub fn join(&self, other: &SubgroupHandle) -> SubgroupHandle {
        let mut gens = self.generating_set();
        gens.extend(other.generating_set());
        Self::from_sorted(&self.parent, closure_elements(&self.parent, &gens))
    }

    /// A small generating set, chosen greedily in increasing element order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = vec![0usize];
        for &x in &self.elements {
            if cur.binary_search(&x).is_err() {
                gens.push(x);
                cur = closure_elements(&self.parent, &gens);
                if cur.len() == self.elements.len() {
                    break;
                }
            }
        }
        gens
    }

    /// A generator when the subgroup is cyclic (least such element).
    pub fn cyclic_generator(&self) -> Option<usize> {
        let n = self.order();
        self.elements
            .iter()
            .copied()
            .find(|&x| self.parent.element_order(x) == n)
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    /// The subgroup as a group in its own right: local element `i` is
    /// `self.elements()[i]`.
    pub fn to_group(&self) -> GroupRef {
        let n = self.order();
        let mut mul = vec![0u32; n * n];
        for (i, &a) in self.elements.iter().enumerate() {
            for (j, &b) in self.elements.iter().enumerate() {
                mul[i * n + j] = self.local(self.parent.mul(a, b)).unwrap() as u32;
            }
        }
        let gens: Vec<usize> = self
            .generating_set()
            .into_iter()
            .map(|g| self.local(g).unwrap())
            .collect();
        let gens = if gens.is_empty() { vec![0] } else { gens };
        let label = format!("subgroup of order {} in {}", n, self.parent.label());
        Arc::new(FiniteGroup::from_raw(n, mul, label, gens).expect("subgroup table is a group"))
    }

    /// Position of a parent element in `elements`.
    pub fn local(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }
}
