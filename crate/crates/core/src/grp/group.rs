use crate::error::{Error, Result};
use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::sync::Arc;

pub type GroupRef = Arc<FiniteGroup>;

/// Default bound on the number of elements a group may have.
pub const DEFAULT_ORDER_BOUND: usize = 512;

/// Up to this order associativity is checked on all triples; above it a
/// deterministic sample of triples is checked.
pub const EXHAUSTIVE_ASSOC_BOUND: usize = 64;

/// A finite group given by its full multiplication table. Element 0 is the
/// identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    label: String,
    generators: Vec<usize>,
    anchors: BTreeMap<String, Vec<usize>>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.label, self.order)
    }
}

impl FiniteGroup {
    /// Validate and wrap a multiplication table (row-major, `mul[a*n+b] = ab`).
    /// The table is relabelled so that the identity becomes element 0 if it
    /// is not already.
    pub fn from_table(n: usize, mul: Vec<usize>, label: impl Into<String>) -> Result<Self> {
        if n == 0 {
            return Err(Error::SpecInvalid("group must be nonempty".into()));
        }
        if mul.len() != n * n {
            return Err(Error::SpecInvalid(format!(
                "table has {} entries, expected {}",
                mul.len(),
                n * n
            )));
        }
        if mul.iter().any(|&x| x >= n) {
            return Err(Error::SpecInvalid("table entry out of range".into()));
        }
        let id = (0..n)
            .find(|&e| (0..n).all(|a| mul[e * n + a] == a && mul[a * n + e] == a))
            .ok_or_else(|| Error::SpecInvalid("no two-sided identity".into()))?;
        // relabel: swap id <-> 0
        let relabel = |x: usize| {
            if x == id {
                0
            } else if x == 0 {
                id
            } else {
                x
            }
        };
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[relabel(a) * n + relabel(b)] = relabel(mul[a * n + b]) as u32;
            }
        }
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    if table[b * n + a] != 0 {
                        return Err(Error::SpecInvalid(format!("element {a} has no two-sided inverse")));
                    }
                    inv[a] = b as u32;
                    break;
                }
            }
            if inv[a] == u32::MAX {
                return Err(Error::SpecInvalid(format!("element {a} has no inverse")));
            }
        }
        let g = FiniteGroup {
            order: n,
            mul: table,
            inv,
            label: label.into(),
            generators: (0..n).collect(),
            anchors: BTreeMap::new(),
        };
        g.check_associative()?;
        Ok(g)
    }

    /// Build a group from generators of a concrete group by closure. The
    /// identity is element 0 and further elements are numbered in order of
    /// discovery (breadth first over the generators).
    pub fn from_generators<T, F>(
        identity: T,
        gens: &[T],
        op: F,
        bound: usize,
        label: impl Into<String>,
    ) -> Result<(Self, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head].clone();
            for g in gens {
                let y = op(&x, g);
                if !index.contains_key(&y) {
                    if elems.len() >= bound {
                        return Err(Error::OrderBudgetExceeded { limit: bound });
                    }
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
            head += 1;
        }
        let n = elems.len();
        let mut mul = vec![0u32; n * n];
        for (a, x) in elems.iter().enumerate() {
            for (b, y) in elems.iter().enumerate() {
                let z = op(x, y);
                let k = *index
                    .get(&z)
                    .ok_or_else(|| Error::SpecInvalid("generated set not closed".into()))?;
                mul[a * n + b] = k as u32;
            }
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| mul[a * n + b] == 0)
                .ok_or_else(|| Error::SpecInvalid("element without inverse".into()))? as u32;
        }
        let generators = gens.iter().map(|g| index[g]).collect();
        let g = FiniteGroup {
            order: n,
            mul,
            inv,
            label: label.into(),
            generators,
            anchors: BTreeMap::new(),
        };
        Ok((g, elems))
    }

    pub(crate) fn from_raw(
        order: usize,
        mul: Vec<u32>,
        label: impl Into<String>,
        generators: Vec<usize>,
    ) -> Result<Self> {
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
            if inv[a] == u32::MAX {
                return Err(Error::SpecInvalid(format!("element {a} has no inverse")));
            }
        }
        Ok(FiniteGroup {
            order,
            mul,
            inv,
            label: label.into(),
            generators,
            anchors: BTreeMap::new(),
        })
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        let bad = |a: usize, b: usize, c: usize| {
            self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
        };
        if n <= EXHAUSTIVE_ASSOC_BOUND {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if bad(a, b, c) {
                            return Err(Error::SpecInvalid(format!(
                                "multiplication is not associative at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            // deterministic linear-congruential sample
            let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
            for _ in 0..200_000 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = (state >> 33) as usize % n;
                let b = (state >> 17) as usize % n;
                let c = (state >> 5) as usize % n;
                if bad(a, b, c) {
                    return Err(Error::SpecInvalid(format!(
                        "multiplication is not associative at ({a},{b},{c})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn set_generators(&mut self, gens: Vec<usize>) {
        self.generators = gens;
    }

    pub fn anchors(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.anchors
    }

    pub fn add_anchor(&mut self, name: impl Into<String>, elements: Vec<usize>) {
        self.anchors.insert(name.into(), elements);
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g x g^{-1}`
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a b a^{-1} b^{-1}`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, g: usize, k: u64) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Raw multiplication table, row-major.
    pub fn table(&self) -> Vec<usize> {
        self.mul.iter().map(|&x| x as usize).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_table(n: usize) -> Vec<usize> {
        (0..n * n).map(|k| (k / n + k % n) % n).collect()
    }

    #[test]
    fn table_validation() {
        let g = FiniteGroup::from_table(4, cyclic_table(4), "Z/4").unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.element_order(1), 4);
        assert_eq!(g.inv(1), 3);
        assert!(g.is_abelian());

        let trivial = FiniteGroup::from_table(1, vec![0], "Z/1").unwrap();
        assert_eq!(trivial.order(), 1);

        // a latin square that is not associative
        let bad = vec![0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 4, 0, 1, 3, 3, 2, 4, 0, 1, 4, 3, 1, 2, 0];
        assert!(matches!(
            FiniteGroup::from_table(5, bad, "bad"),
            Err(Error::SpecInvalid(_))
        ));
    }

    #[test]
    fn identity_relabelled_to_zero() {
        // Z/3 with identity stored as element 2
        let mul = vec![1, 2, 0, 2, 0, 1, 0, 1, 2];
        let g = FiniteGroup::from_table(3, mul, "Z/3").unwrap();
        for a in 0..3 {
            assert_eq!(g.mul(0, a), a);
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn closure_budget() {
        let r = FiniteGroup::from_generators(0u32, &[1u32], |a, b| (a + b) % 1000, 100, "Z/1000");
        assert!(matches!(r, Err(Error::OrderBudgetExceeded { limit: 100 })));
    }
}
