use crate::arith::{factorize, gcd_u, lcm_u};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A finite abelian group in invariant-factor form `d_1 | d_2 | ... | d_k`,
/// every `d_i >= 2`. The empty list is the trivial group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(into = "Vec<u64>", try_from = "Vec<u64>")]
pub struct FinAb {
    factors: Vec<u64>,
}

impl FinAb {
    pub fn trivial() -> Self {
        FinAb::default()
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders([n])
    }

    /// `(Z/n)^k`
    pub fn elementary(n: u64, k: usize) -> Self {
        Self::from_cyclic_orders(std::iter::repeat_n(n, k))
    }

    /// Canonical form of a direct sum of cyclic groups of the given orders.
    /// Orders 0 (free summands) are rejected by the caller; 1s are dropped.
    pub fn from_cyclic_orders<I: IntoIterator<Item = u64>>(orders: I) -> Self {
        // primary decomposition, then regroup into an invariant-factor chain
        let mut primary: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for n in orders {
            assert!(n > 0, "free summand in a finite abelian group");
            for (p, e) in factorize(n) {
                primary.entry(p).or_default().push(p.pow(e));
            }
        }
        let k = primary.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; k];
        for powers in primary.values_mut() {
            powers.sort_unstable();
            // largest powers go to the last factors
            for (slot, q) in factors.iter_mut().rev().zip(powers.iter().rev()) {
                *slot *= q;
            }
        }
        factors.retain(|&d| d > 1);
        FinAb { factors }
    }

    /// Accepts a list that must already be a canonical divisibility chain.
    pub fn from_invariant_factors(factors: Vec<u64>) -> Result<Self, String> {
        if factors.iter().any(|&d| d < 2) {
            return Err(format!("invariant factors must be >= 2: {factors:?}"));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(format!("not a divisibility chain: {factors:?}"));
        }
        Ok(FinAb { factors })
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn direct_sum(&self, other: &FinAb) -> FinAb {
        FinAb::from_cyclic_orders(self.factors.iter().chain(&other.factors).copied())
    }

    /// The p-primary component `A[p^inf]`.
    pub fn primary_part(&self, p: u64) -> FinAb {
        FinAb::from_cyclic_orders(self.factors.iter().map(|&d| {
            let mut q = 1;
            let mut d = d;
            while d % p == 0 {
                d /= p;
                q *= p;
            }
            q
        }))
    }

    /// The prime-to-p component `A^(p)`.
    pub fn prime_to_part(&self, p: u64) -> FinAb {
        FinAb::from_cyclic_orders(self.factors.iter().map(|&d| {
            let mut d = d;
            while d % p == 0 {
                d /= p;
            }
            d
        }))
    }

    /// Exponent divides `n`.
    pub fn is_annihilated_by(&self, n: u64) -> bool {
        n.is_multiple_of(self.exponent())
    }

    pub fn exponent_is_prime_power(&self) -> bool {
        factorize(self.exponent()).len() <= 1
    }
}

impl From<FinAb> for Vec<u64> {
    fn from(a: FinAb) -> Vec<u64> {
        a.factors
    }
}

impl TryFrom<Vec<u64>> for FinAb {
    type Error = String;
    fn try_from(v: Vec<u64>) -> Result<Self, String> {
        FinAb::from_invariant_factors(v)
    }
}

impl fmt::Debug for FinAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.factors)
    }
}

impl fmt::Display for FinAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// gcd of a list; gcd of the empty list is 0.
pub fn gcd_all<I: IntoIterator<Item = u64>>(it: I) -> u64 {
    it.into_iter().fold(0, gcd_u)
}

pub fn lcm_all<I: IntoIterator<Item = u64>>(it: I) -> u64 {
    it.into_iter().fold(1, lcm_u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(FinAb::from_cyclic_orders([2, 3]).invariant_factors(), &[6]);
        assert_eq!(FinAb::from_cyclic_orders([4, 2, 1]).invariant_factors(), &[2, 4]);
        assert_eq!(FinAb::from_cyclic_orders([6, 10]).invariant_factors(), &[2, 30]);
        assert!(FinAb::from_cyclic_orders([1, 1]).is_trivial());
        assert_eq!(FinAb::cyclic(2).direct_sum(&FinAb::cyclic(3)), FinAb::cyclic(6));
        assert_eq!(FinAb::elementary(3, 2).invariant_factors(), &[3, 3]);
        assert!(FinAb::from_invariant_factors(vec![2, 3]).is_err());
        assert_eq!(FinAb::cyclic(12).primary_part(2), FinAb::cyclic(4));
        assert_eq!(FinAb::cyclic(12).prime_to_part(2), FinAb::cyclic(3));
    }

    #[test]
    fn wire_form() {
        let a = FinAb::from_cyclic_orders([3, 3]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[3,3]");
        assert_eq!(serde_json::to_string(&FinAb::trivial()).unwrap(), "[]");
        let b: FinAb = serde_json::from_str("[2,4]").unwrap();
        assert_eq!(b.order(), 8);
        assert!(serde_json::from_str::<FinAb>("[4,2]").is_err());
    }

    proptest! {
        #[test]
        fn order_is_preserved(orders in proptest::collection::vec(1u64..40, 0..6)) {
            let a = FinAb::from_cyclic_orders(orders.clone());
            prop_assert_eq!(a.order(), orders.iter().product::<u64>());
            prop_assert!(a.invariant_factors().windows(2).all(|w| w[1] % w[0] == 0));
            let json = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<FinAb>(&json).unwrap(), a);
        }
    }
}
