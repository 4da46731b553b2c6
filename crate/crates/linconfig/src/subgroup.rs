//! Subgroups with canonical Hermite-normal-form bases.
//!
//! A subgroup of `Z_{n_1} x ... x Z_{n_s}` corresponds to an integer lattice
//! between `diag(n) Z^s` and `Z^s`. We store the row HNF of that lattice;
//! it is square and full-rank because the relation rows `diag(n)` are always
//! included, so two subgroups are equal iff their bases are identical.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::group::{mixed_radix_tuples, FiniteAbelianGroup, GroupElement};
use crate::matrix::IntMatrix;
use crate::normal_form::hnf_rows;

#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    ambient: FiniteAbelianGroup,
    /// Canonical square HNF basis of the defining lattice.
    basis: IntMatrix,
}

impl Subgroup {
    /// Subgroup generated by `gens` inside `ambient`.
    pub fn from_generators(ambient: &FiniteAbelianGroup, gens: &[GroupElement]) -> Subgroup {
        let rows: Vec<Vec<BigInt>> = gens.iter().map(|g| ambient.lift(g)).collect();
        Subgroup::from_lattice_rows(ambient, rows)
    }

    /// Subgroup whose defining lattice is generated by `rows` together with
    /// the relation rows `diag(moduli)`.
    pub fn from_lattice_rows(
        ambient: &FiniteAbelianGroup,
        mut rows: Vec<Vec<BigInt>>,
    ) -> Subgroup {
        let s = ambient.num_factors();
        for (i, &n) in ambient.moduli().iter().enumerate() {
            let mut rel = vec![BigInt::zero(); s];
            rel[i] = BigInt::from(n);
            rows.push(rel);
        }
        let basis = hnf_rows(&IntMatrix::from_rows(rows));
        debug_assert_eq!(basis.rows(), s, "lattice with relations must be full rank");
        Subgroup {
            ambient: ambient.clone(),
            basis,
        }
    }

    pub fn trivial(ambient: &FiniteAbelianGroup) -> Subgroup {
        Subgroup::from_generators(ambient, &[])
    }

    pub fn full(ambient: &FiniteAbelianGroup) -> Subgroup {
        let units: Vec<GroupElement> = (0..ambient.num_factors())
            .map(|i| ambient.unit(i))
            .collect();
        Subgroup::from_generators(ambient, &units)
    }

    pub fn ambient(&self) -> &FiniteAbelianGroup {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn order(&self) -> BigUint {
        // |ambient| / det(basis); the determinant of an HNF basis is the
        // product of its diagonal.
        let det: BigInt = (0..self.basis.rows())
            .map(|i| self.basis[(i, i)].clone())
            .product();
        let det = det.abs().to_biguint().unwrap();
        self.ambient.order() / det
    }

    pub fn order_u64(&self) -> u64 {
        self.order().to_u64().expect("subgroup order exceeds u64")
    }

    pub fn index(&self) -> BigUint {
        let det: BigInt = (0..self.basis.rows())
            .map(|i| self.basis[(i, i)].clone())
            .product();
        det.abs().to_biguint().unwrap()
    }

    pub fn is_trivial(&self) -> bool {
        use num_traits::One;
        self.order().is_one()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        // back-substitute against the upper-triangular basis
        let mut rem = self.ambient.lift(x);
        let s = rem.len();
        for j in 0..s {
            if rem[j].is_zero() {
                continue;
            }
            let (q, r) = rem[j].div_rem(&self.basis[(j, j)]);
            if !r.is_zero() {
                return false;
            }
            for c in j..s {
                let sub = &q * &self.basis[(j, c)];
                rem[c] -= sub;
            }
        }
        rem.iter().all(|v| v.is_zero())
    }

    /// Enumerates the subgroup via the coefficient transversal
    /// `c -> c * basis mod moduli` with `c_i` ranging over `n_i / h_ii`.
    pub fn iter(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let radices: Vec<u64> = self
            .ambient
            .moduli()
            .iter()
            .enumerate()
            .map(|(i, &n)| n / self.basis[(i, i)].to_u64().expect("pivot fits u64"))
            .collect();
        SubgroupIter {
            subgroup: self,
            radices,
        }
        .into_iter()
    }

    /// Image of this subgroup under coordinate selection: keeps the factor
    /// positions listed in `keep` (in order).
    pub fn project(&self, keep: &[usize], target: &FiniteAbelianGroup) -> Subgroup {
        let rows: Vec<Vec<BigInt>> = self
            .basis
            .iter_rows()
            .map(|row| keep.iter().map(|&i| row[i].clone()).collect())
            .collect();
        Subgroup::from_lattice_rows(target, rows)
    }
}

struct SubgroupIter<'a> {
    subgroup: &'a Subgroup,
    radices: Vec<u64>,
}

impl<'a> SubgroupIter<'a> {
    fn into_iter(self) -> impl Iterator<Item = GroupElement> + 'a {
        let radices = self.radices;
        let sub = self.subgroup;
        let owned: Vec<u64> = radices.clone();
        // collect coefficient tuples eagerly; subgroup sizes in this crate
        // stay small wherever iteration is used
        let coeffs: Vec<Vec<u64>> = mixed_radix_tuples(&owned).collect();
        coeffs.into_iter().map(move |c| {
            let s = sub.ambient.num_factors();
            let mut acc = vec![BigInt::zero(); s];
            for (i, &ci) in c.iter().enumerate() {
                if ci == 0 {
                    continue;
                }
                let k = BigInt::from(ci);
                for j in 0..s {
                    let add = &k * &sub.basis[(i, j)];
                    acc[j] += add;
                }
            }
            sub.ambient.reduce(&acc)
        })
    }
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subgroup(order {} of {})",
            self.order(),
            self.ambient.name()
        )
    }
}

/// The `d`-torsion subgroup `{x : d*x = 0}` with its abstract factor
/// structure and the embedding back into the ambient group.
#[derive(Clone, Debug)]
pub struct TorsionSubgroup {
    pub subgroup: Subgroup,
    /// Abstract factor orders `gcd(d, n_i)`.
    pub abstract_moduli: Vec<u64>,
    /// Unit of abstract factor `i` embeds as `n_i / gcd(d, n_i)` in factor `i`.
    pub embed_multipliers: Vec<u64>,
}

impl TorsionSubgroup {
    /// The abstract group `prod Z_{gcd(d, n_i)}`.
    pub fn abstract_group(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(self.abstract_moduli.clone())
    }

    /// Embeds an abstract element into the ambient group.
    pub fn embed(&self, x: &GroupElement) -> GroupElement {
        x.iter()
            .zip(&self.embed_multipliers)
            .zip(self.subgroup.ambient().moduli())
            .map(|((&a, &m), &n)| (a as u128 * m as u128 % n as u128) as u64)
            .collect()
    }
}

/// `{x in G : d*x = 0}` together with its product structure.
pub fn d_torsion(g: &FiniteAbelianGroup, d: u64) -> TorsionSubgroup {
    assert!(d >= 1);
    let abstract_moduli: Vec<u64> = g.moduli().iter().map(|&n| n.gcd(&d)).collect();
    let embed_multipliers: Vec<u64> = g
        .moduli()
        .iter()
        .zip(&abstract_moduli)
        .map(|(&n, &m)| n / m)
        .collect();
    let gens: Vec<GroupElement> = (0..g.num_factors())
        .map(|i| {
            let mut e = g.zero();
            e[i] = embed_multipliers[i] % g.moduli()[i];
            e
        })
        .collect();
    TorsionSubgroup {
        subgroup: Subgroup::from_generators(g, &gens),
        abstract_moduli,
        embed_multipliers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::{Rng, SeedableRng};

    #[test]
    fn torsion_of_z4_by_2() {
        let g = FiniteAbelianGroup::cyclic(4);
        let t = d_torsion(&g, 2);
        assert_eq!(t.subgroup.order_u64(), 2);
        assert!(t.subgroup.contains(&vec![0]));
        assert!(t.subgroup.contains(&vec![2]));
        assert!(!t.subgroup.contains(&vec![1]));
        assert_eq!(t.abstract_moduli, vec![2]);
        assert_eq!(t.embed(&vec![1]), vec![2]);
    }

    #[test]
    fn torsion_of_z5_by_2_is_trivial() {
        let g = FiniteAbelianGroup::cyclic(5);
        let t = d_torsion(&g, 2);
        assert!(t.subgroup.is_trivial());
    }

    #[test]
    fn torsion_of_z6xz4_matches_brute_force() {
        let g = FiniteAbelianGroup::new(vec![6, 4]);
        let t = d_torsion(&g, 2);
        // oracle: scan all 24 elements for 2x = 0
        let expected: Vec<GroupElement> = g
            .elements()
            .filter(|x| g.scalar_mul(&BigInt::from(2), x) == g.zero())
            .collect();
        assert_eq!(t.subgroup.order_u64(), expected.len() as u64);
        for x in &expected {
            assert!(t.subgroup.contains(x));
        }
        assert_eq!(t.subgroup.order_u64(), 4);
    }

    #[test]
    fn generated_subgroup_of_z2xz2() {
        let g = FiniteAbelianGroup::new(vec![2, 2]);
        let s = Subgroup::from_generators(&g, &[vec![1, 0]]);
        assert_eq!(s.order_u64(), 2);
    }

    #[test]
    fn generated_cyclic_diagonal_in_z4xz4() {
        let g = FiniteAbelianGroup::new(vec![4, 4]);
        let s = Subgroup::from_generators(&g, &[vec![1, 1]]);
        assert_eq!(s.order_u64(), 4);
        assert!(s.contains(&vec![2, 2]));
        assert!(!s.contains(&vec![1, 2]));
    }

    #[test]
    fn empty_generators_give_trivial_subgroup() {
        let g = FiniteAbelianGroup::new(vec![3, 5]);
        let s = Subgroup::from_generators(&g, &[]);
        assert!(s.order().is_one());
        assert!(s.contains(&g.zero()));
        assert!(!s.contains(&vec![1, 0]));
    }

    #[test]
    fn iteration_matches_membership() {
        let g = FiniteAbelianGroup::new(vec![4, 6]);
        let s = Subgroup::from_generators(&g, &[vec![2, 3], vec![0, 2]]);
        let listed: Vec<GroupElement> = s.iter().collect();
        assert_eq!(listed.len() as u64, s.order_u64());
        let mut dedup = listed.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), listed.len(), "transversal repeated an element");
        let by_scan: Vec<GroupElement> = g.elements().filter(|x| s.contains(x)).collect();
        assert_eq!(dedup.len(), by_scan.len());
    }

    #[test]
    fn canonical_basis_ignores_generator_presentation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let s = rng.gen_range(1..=3);
            let moduli: Vec<u64> = (0..s).map(|_| rng.gen_range(1..=12)).collect();
            let g = FiniteAbelianGroup::new(moduli);
            let k = rng.gen_range(0..=3);
            let gens: Vec<GroupElement> = (0..k).map(|_| g.random_element(&mut rng)).collect();
            let a = Subgroup::from_generators(&g, &gens);
            // shuffled generators plus random sums generate the same subgroup
            let mut augmented = gens.clone();
            augmented.reverse();
            if gens.len() >= 2 {
                augmented.push(g.add(&gens[0], &gens[1]));
            }
            if !gens.is_empty() {
                augmented.push(g.add(&gens[0], &gens[0]));
            }
            let b = Subgroup::from_generators(&g, &augmented);
            assert_eq!(a.basis(), b.basis());
            assert_eq!(a, b);
        }
    }
}
