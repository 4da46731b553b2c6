//! Brute-force reference computations.
//!
//! Everything here scans full product spaces and never touches the kernel
//! parametrization or any lattice shortcut, so these functions serve as the
//! independent side of the dual-route checks in the test suites.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::hom::matrix_action_hom;
use crate::matrix::IntMatrix;

/// Counts `x in G^m` with `M x = 0` and `x_j in A_j`, by scanning all of
/// `G^m`.
pub fn count_solutions_scan(
    m: &IntMatrix,
    g: &FiniteAbelianGroup,
    sets: &[Vec<GroupElement>],
) -> BigUint {
    assert_eq!(sets.len(), m.cols());
    let lookup: Vec<BTreeSet<GroupElement>> = sets
        .iter()
        .map(|s| s.iter().cloned().collect())
        .collect();
    let action = matrix_action_hom(m, g);
    let zero = action.codomain().zero();
    let s = g.num_factors();
    let mut count = BigUint::zero();
    for x in action.domain().elements() {
        if action.apply(&x) != zero {
            continue;
        }
        let ok = (0..m.cols()).all(|j| lookup[j].contains(&x[j * s..(j + 1) * s].to_vec()));
        if ok {
            count += 1u32;
        }
    }
    count
}

/// `|ker_G M|` by scanning all of `G^m`.
pub fn kernel_size_scan(m: &IntMatrix, g: &FiniteAbelianGroup) -> BigUint {
    let action = matrix_action_hom(m, g);
    let zero = action.codomain().zero();
    let mut count = BigUint::zero();
    for x in action.domain().elements() {
        if action.apply(&x) == zero {
            count += 1u32;
        }
    }
    count
}

/// Counts pairs `(x, r)` whose progression of length `k` stays in `A`.
pub fn ap_count_scan(g: &FiniteAbelianGroup, a: &BTreeSet<GroupElement>, k: usize) -> BigUint {
    let mut count = BigUint::zero();
    for x in g.elements() {
        for r in g.elements() {
            let mut point = x.clone();
            let mut ok = a.contains(&point);
            for _ in 1..k {
                if !ok {
                    break;
                }
                point = g.add(&point, &r);
                ok = a.contains(&point);
            }
            if ok {
                count += 1u32;
            }
        }
    }
    count
}
