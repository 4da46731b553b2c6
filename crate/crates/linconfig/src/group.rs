//! Finite abelian groups as explicit products of cyclic groups.
//!
//! Elements are residue vectors, one entry per cyclic factor, reduced
//! componentwise. Group orders and densities are exact (`BigUint` /
//! rationals); nothing here rounds.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

/// A product of cyclic groups `Z_{n_1} x ... x Z_{n_s}`, each `n_i >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    moduli: Vec<u64>,
}

/// An element of a [`FiniteAbelianGroup`]: residues in factor order.
pub type GroupElement = Vec<u64>;

impl FiniteAbelianGroup {
    pub fn new(moduli: Vec<u64>) -> Self {
        assert!(!moduli.is_empty(), "a group needs at least one factor");
        assert!(moduli.iter().all(|&n| n >= 1), "factor orders must be >= 1");
        FiniteAbelianGroup { moduli }
    }

    pub fn cyclic(n: u64) -> Self {
        FiniteAbelianGroup::new(vec![n])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn num_factors(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> BigUint {
        self.moduli
            .iter()
            .map(|&n| BigUint::from(n))
            .product()
    }

    /// Order as `u64` when it fits (ambient groups in this crate are small).
    pub fn order_u64(&self) -> u64 {
        self.order().to_u64().expect("group order exceeds u64")
    }

    /// The direct power `G^m`, factors tiled coordinate by coordinate.
    pub fn power(&self, m: usize) -> FiniteAbelianGroup {
        assert!(m >= 1);
        let mut moduli = Vec::with_capacity(self.moduli.len() * m);
        for _ in 0..m {
            moduli.extend_from_slice(&self.moduli);
        }
        FiniteAbelianGroup::new(moduli)
    }

    pub fn zero(&self) -> GroupElement {
        vec![0; self.moduli.len()]
    }

    pub fn is_valid(&self, x: &GroupElement) -> bool {
        x.len() == self.moduli.len() && x.iter().zip(&self.moduli).all(|(&a, &n)| a < n)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect()
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((&x, &y), &n)| (x + n - y) % n)
            .collect()
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        a.iter()
            .zip(&self.moduli)
            .map(|(&x, &n)| (n - x) % n)
            .collect()
    }

    /// Multiplication of an element by an integer scalar.
    pub fn scalar_mul(&self, k: &BigInt, a: &GroupElement) -> GroupElement {
        a.iter()
            .zip(&self.moduli)
            .map(|(&x, &n)| {
                let nn = BigInt::from(n);
                let v = (k * BigInt::from(x)).mod_floor(&nn);
                v.to_u64().unwrap()
            })
            .collect()
    }

    /// Reduces an arbitrary integer vector componentwise.
    pub fn reduce(&self, v: &[BigInt]) -> GroupElement {
        assert_eq!(v.len(), self.moduli.len());
        v.iter()
            .zip(&self.moduli)
            .map(|(x, &n)| x.mod_floor(&BigInt::from(n)).to_u64().unwrap())
            .collect()
    }

    /// Lift to integers in `[0, n_i)`.
    pub fn lift(&self, x: &GroupElement) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    pub fn elements(&self) -> ElementIter<'_> {
        ElementIter {
            moduli: &self.moduli,
            current: Some(vec![0; self.moduli.len()]),
        }
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> GroupElement {
        self.moduli.iter().map(|&n| rng.gen_range(0..n)).collect()
    }

    /// Unit of factor `i` (zero when the factor is trivial).
    pub fn unit(&self, i: usize) -> GroupElement {
        let mut e = self.zero();
        if self.moduli[i] > 1 {
            e[i] = 1;
        }
        e
    }

    /// Short display such as `Z2xZ4`.
    pub fn name(&self) -> String {
        self.moduli
            .iter()
            .map(|n| format!("Z{n}"))
            .collect::<Vec<_>>()
            .join("x")
    }
}

impl std::fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Mixed-radix enumeration of all group elements.
pub struct ElementIter<'a> {
    moduli: &'a [u64],
    current: Option<Vec<u64>>,
}

impl Iterator for ElementIter<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let cur = self.current.take()?;
        let out = cur.clone();
        let mut next = cur;
        let mut i = 0;
        loop {
            if i == self.moduli.len() {
                self.current = None;
                break;
            }
            next[i] += 1;
            if next[i] < self.moduli[i] {
                self.current = Some(next);
                break;
            }
            next[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// Enumerates tuples in a product of mixed radices given by `moduli`
/// (used for parametrization domains that are not group powers).
pub fn mixed_radix_tuples(moduli: &[u64]) -> ElementIter<'_> {
    ElementIter {
        moduli,
        current: Some(vec![0; moduli.len()]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_reduces_componentwise() {
        let g = FiniteAbelianGroup::new(vec![4, 3]);
        assert_eq!(g.add(&vec![3, 2], &vec![2, 2]), vec![1, 1]);
        assert_eq!(g.sub(&vec![0, 0], &vec![1, 1]), vec![3, 2]);
        assert_eq!(g.neg(&vec![1, 0]), vec![3, 0]);
        assert_eq!(
            g.scalar_mul(&BigInt::from(-5), &vec![1, 1]),
            vec![3, 1]
        );
    }

    #[test]
    fn enumeration_covers_the_group_once() {
        let g = FiniteAbelianGroup::new(vec![2, 3]);
        let all: Vec<_> = g.elements().collect();
        assert_eq!(all.len(), 6);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 6);
    }

    #[test]
    fn power_tiles_factors() {
        let g = FiniteAbelianGroup::cyclic(5);
        let g3 = g.power(3);
        assert_eq!(g3.moduli(), &[5, 5, 5]);
        assert_eq!(g3.order_u64(), 125);
    }
}
