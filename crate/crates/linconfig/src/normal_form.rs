//! Smith and Hermite normal forms with explicit transform accumulation.
//!
//! The Smith routine keeps four transforms in sync (`u`, `u^-1`, `v`, `v^-1`)
//! so that kernels, integer solves and unimodular inverses all come out of
//! one elimination. Pivots are chosen by minimal absolute value to limit
//! intermediate growth; all arithmetic is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::LinAlgError;
use crate::matrix::IntMatrix;

/// `a = u * d * v` with `u`, `v` unimodular and `d` diagonal with a
/// divisibility chain `d_1 | d_2 | ...` of non-negative entries.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Number of non-zero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).filter(|&i| !self.d[(i, i)].is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Full elimination state, including the inverse transforms.
pub(crate) struct SnfCore {
    pub u: IntMatrix,
    pub uinv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub vinv: IntMatrix,
    pub rank: usize,
}

/// Quotient and remainder with `|r| <= |b|/2` (nearest quotient, ties kept
/// on the floor side).
pub(crate) fn div_rem_nearest(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    assert!(!b.is_zero());
    let (mut q, mut r) = a.div_mod_floor(b);
    // div_mod_floor leaves r with the sign of b
    let double: BigInt = &r * 2;
    if b.is_positive() {
        if double > *b {
            r -= b;
            q += 1;
        }
    } else if double < *b {
        r -= b;
        q += 1;
    }
    (q, r)
}

pub(crate) fn snf_core(a: &IntMatrix) -> SnfCore {
    let rows = a.rows();
    let cols = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut uinv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut vinv = IntMatrix::identity(cols);

    // row op d[i] += k*d[t]  <=>  u col t -= k*col i ... see transform algebra below
    macro_rules! row_add {
        ($dst:expr, $src:expr, $k:expr) => {{
            let k = $k;
            d.add_row_multiple($dst, $src, &k);
            uinv.add_row_multiple($dst, $src, &k);
            let nk = -k;
            u.add_col_multiple($src, $dst, &nk);
        }};
    }
    macro_rules! col_add {
        ($dst:expr, $src:expr, $k:expr) => {{
            let k = $k;
            d.add_col_multiple($dst, $src, &k);
            vinv.add_col_multiple($dst, $src, &k);
            let nk = -k;
            v.add_row_multiple($src, $dst, &nk);
        }};
    }
    macro_rules! row_swap {
        ($a:expr, $b:expr) => {{
            d.swap_rows($a, $b);
            uinv.swap_rows($a, $b);
            u.swap_cols($a, $b);
        }};
    }
    macro_rules! col_swap {
        ($a:expr, $b:expr) => {{
            d.swap_cols($a, $b);
            vinv.swap_cols($a, $b);
            v.swap_rows($a, $b);
        }};
    }
    macro_rules! row_neg {
        ($i:expr) => {{
            d.neg_row($i);
            uinv.neg_row($i);
            u.neg_col($i);
        }};
    }

    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: minimal non-zero absolute value in the trailing submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[(i, j)].is_zero()
                    && pivot
                        .map(|(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        row_swap!(t, pi);
        col_swap!(t, pj);

        let mut guard = 0usize;
        loop {
            guard += 1;
            assert!(guard < 100_000, "smith normal form failed to converge");
            let mut swapped = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = div_rem_nearest(&d[(i, t)], &d[(t, t)]);
                row_add!(i, t, -q);
                if !r.is_zero() {
                    row_swap!(t, i);
                    swapped = true;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = div_rem_nearest(&d[(t, j)], &d[(t, t)]);
                col_add!(j, t, -q);
                if !r.is_zero() {
                    col_swap!(t, j);
                    swapped = true;
                }
            }
            if swapped {
                continue;
            }
            let cleared = (t + 1..rows).all(|i| d[(i, t)].is_zero())
                && (t + 1..cols).all(|j| d[(t, j)].is_zero());
            if !cleared {
                continue;
            }
            // pivot must divide the whole trailing block for the chain
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].mod_floor(&d[(t, t)]).is_zero());
            match offender {
                Some((i, _)) => {
                    row_add!(t, i, BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            row_neg!(t);
        }
        t += 1;
    }
    let rank = t;

    debug_assert_eq!(u.mul(&d).mul(&v), *a, "snf transform bookkeeping broke");
    debug_assert!(u.mul(&uinv) == IntMatrix::identity(rows));
    debug_assert!(v.mul(&vinv) == IntMatrix::identity(cols));

    SnfCore {
        u,
        uinv,
        d,
        v,
        vinv,
        rank,
    }
}

/// Smith normal form `a = u * d * v`.
pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let core = snf_core(a);
    SnfDecomposition {
        u: core.u,
        d: core.d,
        v: core.v,
    }
}

/// A particular integer solution `x` of `a * x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let core = snf_core(a);
    let c = core.uinv.mul_vec(b);
    let mut z = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < core.rank && i < a.cols() {
            let (q, r) = ci.div_rem(&core.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(core.vinv.mul_vec(&z))
}

/// Basis of the integer kernel lattice `{x : a x = 0}`, one column per basis
/// vector (`cols x (cols - rank)`).
pub fn kernel_lattice(a: &IntMatrix) -> IntMatrix {
    let core = snf_core(a);
    let idx: Vec<usize> = (core.rank..a.cols()).collect();
    core.vinv.select_cols(&idx)
}

/// Exact inverse of a unimodular matrix.
pub fn inverse_unimodular(a: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
    if !a.is_square() {
        return Err(LinAlgError::NotUnimodular);
    }
    let core = snf_core(a);
    if core.d != IntMatrix::identity(a.rows()) {
        return Err(LinAlgError::NotUnimodular);
    }
    let inv = core.vinv.mul(&core.uinv);
    debug_assert_eq!(a.mul(&inv), IntMatrix::identity(a.rows()));
    Ok(inv)
}

/// Canonical row Hermite normal form.
///
/// Returns the non-zero rows: echelon shape, positive pivots, entries above
/// each pivot reduced into `[0, pivot)`. Two row sets generate the same
/// lattice iff their HNFs are identical.
pub fn hnf_rows(a: &IntMatrix) -> IntMatrix {
    let rows = a.rows();
    let cols = a.cols();
    let mut h = a.clone();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        // gcd the column below r into a single pivot at row r
        loop {
            let mut min_row: Option<usize> = None;
            for i in r..rows {
                if !h[(i, col)].is_zero()
                    && min_row
                        .map(|m| h[(i, col)].abs() < h[(m, col)].abs())
                        .unwrap_or(true)
                {
                    min_row = Some(i);
                }
            }
            let Some(m) = min_row else { break };
            h.swap_rows(r, m);
            let mut others = false;
            for i in r + 1..rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let (q, rem) = div_rem_nearest(&h[(i, col)], &h[(r, col)]);
                let nq = -q;
                h.add_row_multiple(i, r, &nq);
                if !rem.is_zero() {
                    others = true;
                }
            }
            if !others {
                break;
            }
        }
        if h[(r, col)].is_zero() {
            continue;
        }
        if h[(r, col)].is_negative() {
            h.neg_row(r);
        }
        // reduce entries above the pivot into [0, pivot)
        for i in 0..r {
            let q = h[(i, col)].div_floor(&h[(r, col)]);
            let nq = -q;
            h.add_row_multiple(i, r, &nq);
        }
        r += 1;
    }
    if r == 0 {
        IntMatrix::zero(0, cols)
    } else {
        h.select_rows(&(0..r).collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn check_snf(a: &IntMatrix) {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(&s.d).mul(&s.v), *a, "u*d*v != a");
        assert!(s.u.determinant().abs().is_one(), "u not unimodular");
        assert!(s.v.determinant().abs().is_one(), "v not unimodular");
        let diag = s.diagonal();
        for i in 0..diag.len() {
            assert!(!diag[i].is_negative());
            if i + 1 < diag.len() && !diag[i + 1].is_zero() {
                assert!(!diag[i].is_zero(), "zero before nonzero in the chain");
                assert!(
                    diag[i + 1].mod_floor(&diag[i]).is_zero(),
                    "divisibility chain broken: {:?}",
                    diag
                );
            }
        }
        // off-diagonal zeros
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_one_row_gcd_one() {
        let m = IntMatrix::from_i64(&[&[1, 1, -1]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, IntMatrix::from_i64(&[&[1, 0, 0]]));
        assert_eq!(s.u, IntMatrix::from_i64(&[&[1]]));
        check_snf(&m);
    }

    #[test]
    fn snf_diag_2_3_gives_chain_1_6() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        check_snf(&m);
    }

    #[test]
    fn snf_identity_is_fixed() {
        let m = IntMatrix::identity(3);
        check_snf(&m);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn snf_round_trip(rows in 1usize..=6, cols in 1usize..=6, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = IntMatrix::from_rows(
                (0..rows)
                    .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect())
                    .collect(),
            );
            check_snf(&m);
        }
    }

    #[test]
    fn determinantal_divisor_equals_snf_product() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut tested = 0;
        while tested < 100 {
            let r = rng.gen_range(1..=4);
            let c = rng.gen_range(r..=5);
            let m = IntMatrix::from_rows(
                (0..r)
                    .map(|_| (0..c).map(|_| BigInt::from(rng.gen_range(-6i64..=6))).collect())
                    .collect(),
            );
            if m.rank() < r {
                continue;
            }
            tested += 1;
            let s = smith_normal_form(&m);
            let prod: BigInt = s.diagonal()[..r].iter().product();
            assert_eq!(m.determinantal_divisor(r).unwrap(), prod);
        }
    }

    #[test]
    fn solve_integer_finds_solutions() {
        let a = IntMatrix::from_i64(&[&[2, 4], &[0, 3]]);
        let b = vec![BigInt::from(6), BigInt::from(3)];
        let x = solve_integer(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        // 2x + 4y = 1 has no integer solution
        assert!(solve_integer(
            &IntMatrix::from_i64(&[&[2, 4]]),
            &[BigInt::from(1)]
        )
        .is_none());
    }

    #[test]
    fn kernel_lattice_is_a_kernel_basis() {
        let a = IntMatrix::from_i64(&[&[1, 1, -1]]);
        let k = kernel_lattice(&a);
        assert_eq!(k.cols(), 2);
        let prod = a.mul(&k);
        assert!(prod.is_zero_matrix());
    }

    #[test]
    fn inverse_of_unimodular() {
        let a = IntMatrix::from_i64(&[&[2, 3], &[1, 2]]);
        let inv = inverse_unimodular(&a).unwrap();
        assert_eq!(a.mul(&inv), IntMatrix::identity(2));
        assert!(inverse_unimodular(&IntMatrix::from_i64(&[&[2, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn hnf_is_canonical_under_row_operations() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[0, 3]]);
        let mut b = a.clone();
        b.add_row_multiple(0, 1, &BigInt::from(5));
        b.swap_rows(0, 1);
        assert_eq!(hnf_rows(&a), hnf_rows(&b));
    }

    #[test]
    fn hnf_drops_zero_rows_and_reduces() {
        let a = IntMatrix::from_i64(&[&[4, 2], &[2, 1], &[2, 1]]);
        let h = hnf_rows(&a);
        assert_eq!(h, IntMatrix::from_i64(&[&[2, 1]]));
    }
}
