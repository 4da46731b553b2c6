//! Unimodular completions and good matrices.
//!
//! A matrix with `r` columns is *good* when every window of `r` consecutive
//! rows is unimodular. `good_completion` extends a unimodular `r x r` block
//! both upwards and downwards until the stack starts and ends with the
//! identity, keeping every window unimodular along the way. Downward growth
//! appends one row at a time, each row a combination of the current bottom
//! window with coefficient +-1 on the departing row, so unimodularity of the
//! window is preserved by construction.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::LinAlgError;
use crate::matrix::{vec_gcd, IntMatrix};
use crate::normal_form::{div_rem_nearest, smith_normal_form, snf_core};

/// A square unimodular matrix whose first row equals `v`.
///
/// Requires `gcd(v) = 1`.
pub fn unimodular_completion_row(v: &[BigInt]) -> Result<IntMatrix, LinAlgError> {
    assert!(!v.is_empty());
    if !vec_gcd(v).is_one() {
        return Err(LinAlgError::NotCoprime);
    }
    // v = u (1|0..0) w with u = (+-1), so v is +-(first row of w)
    let m = IntMatrix::from_rows(vec![v.to_vec()]);
    let s = smith_normal_form(&m);
    let mut w = s.v;
    if s.u[(0, 0)] == BigInt::from(-1) {
        w.neg_row(0);
    }
    debug_assert_eq!(w.row(0), v);
    debug_assert!(w.is_unimodular());
    Ok(w)
}

/// A `cols x cols` unimodular matrix whose top `rows` rows equal `m`.
///
/// Requires full row rank and determinantal divisor 1.
pub fn unimodular_completion_block(m: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
    let r = m.rows();
    let n = m.cols();
    assert!(r <= n);
    let core = snf_core(m);
    if core.rank < r {
        return Err(LinAlgError::RankDeficient);
    }
    if core.d.select_cols(&(0..r).collect::<Vec<_>>()) != IntMatrix::identity(r) {
        return Err(LinAlgError::DeterminantalNotOne);
    }
    // m = u (I|0) w, so stacking m over the bottom rows of w is unimodular:
    // it equals diag(u, I) * w.
    let w = core.v;
    let bottom = w.select_rows(&(r..n).collect::<Vec<_>>());
    let out = m.vstack(&bottom);
    debug_assert!(out.is_unimodular());
    Ok(out)
}

/// Result of [`good_completion`]: the stack `(I_r; S; b; T; I_r)` together
/// with the offset of the embedded `b` block.
#[derive(Clone, Debug)]
pub struct GoodCompletion {
    pub matrix: IntMatrix,
    /// Row index where the original block starts.
    pub block_offset: usize,
}

/// Extends a unimodular `b` to a good matrix beginning and ending with the
/// identity and containing `b` as a contiguous row block.
pub fn good_completion(b: &IntMatrix) -> Result<GoodCompletion, LinAlgError> {
    if !b.is_square() || b.is_empty() {
        return Err(LinAlgError::NotUnimodular);
    }
    if !b.is_unimodular() {
        return Err(LinAlgError::NotUnimodular);
    }
    let r = b.rows();
    let down = extend_down(b);
    let up = extend_up(b);
    // `up` ends with b; `down` starts with b: overlap the block once.
    let mut rows: Vec<Vec<BigInt>> = (0..up.rows()).map(|i| up.row_vec(i)).collect();
    let block_offset = rows.len() - r;
    for i in r..down.rows() {
        rows.push(down.row_vec(i));
    }
    let matrix = IntMatrix::from_rows(rows);
    debug_assert!(is_good(&matrix, r));
    Ok(GoodCompletion {
        matrix,
        block_offset,
    })
}

/// Every window of `r` consecutive rows is unimodular, and the stack starts
/// and ends with `I_r`.
pub fn is_good(m: &IntMatrix, r: usize) -> bool {
    if m.cols() != r || m.rows() < r {
        return false;
    }
    let idx: Vec<usize> = (0..r).collect();
    if m.select_rows(&idx) != IntMatrix::identity(r) {
        return false;
    }
    let tail: Vec<usize> = (m.rows() - r..m.rows()).collect();
    if m.select_rows(&tail) != IntMatrix::identity(r) {
        return false;
    }
    windows_unimodular(m, r)
}

/// Checks only the window condition (used for partial stacks in tests).
pub fn windows_unimodular(m: &IntMatrix, r: usize) -> bool {
    (0..=m.rows() - r).all(|i| {
        m.select_rows(&(i..i + r).collect::<Vec<_>>())
            .determinant()
            .abs()
            .is_one()
    })
}

/// Appends rows below `b` until the bottom `k` rows are `I_k`.
///
/// Invariants of the returned stack: first `k` rows equal `b`, last `k` rows
/// equal `I_k`, every `k`-window is unimodular, and the row count is a
/// multiple of `k` and at least `2k`. The alignment contract lets the caller
/// interleave pivot rows between blocks of `k-1` rows.
fn extend_down(b: &IntMatrix) -> IntMatrix {
    let k = b.rows();
    let mut rows: Vec<Vec<BigInt>> = (0..k).map(|i| b.row_vec(i)).collect();

    if k == 1 {
        // base case: a 1x1 window is unimodular iff the entry is +-1
        rows.push(vec![BigInt::one()]);
        return IntMatrix::from_rows(rows);
    }

    let window = |rows: &Vec<Vec<BigInt>>, p: usize| rows[rows.len() - k + p].clone();

    // Phase 1: Euclid steps on the first column until the bottom row has
    // first entry exactly 1. Each appended row is w_1 - q*w_p (or +-w_1),
    // a combination with coefficient +-1 on the departing row w_1.
    let mut guard = 0usize;
    while !rows.last().unwrap()[0].is_one() {
        guard += 1;
        assert!(guard < 100_000, "good completion failed to converge");
        let w1 = window(&rows, 0);
        let mut p_min: Option<usize> = None;
        for p in 1..k {
            let e = &window(&rows, p)[0];
            if !e.is_zero()
                && p_min
                    .map(|pm| e.abs() < window(&rows, pm)[0].abs())
                    .unwrap_or(true)
            {
                p_min = Some(p);
            }
        }
        match p_min {
            Some(p) => {
                let wp = window(&rows, p);
                let (q, _) = div_rem_nearest(&w1[0], &wp[0]);
                let new_row: Vec<BigInt> =
                    w1.iter().zip(&wp).map(|(a, b)| a - &q * b).collect();
                rows.push(new_row);
            }
            None => {
                // all lower first entries are zero, so w_1[0] = +-1
                debug_assert!(w1[0].abs().is_one());
                if w1[0].is_one() {
                    rows.push(w1);
                } else {
                    rows.push(w1.iter().map(|x| -x).collect());
                }
            }
        }
    }

    // Phase 2: clear the first column against the pivot row, k-1 steps.
    // The pivot row stays inside the sliding window for all of them.
    let pivot_row = rows.last().unwrap().clone();
    for _ in 0..k - 1 {
        let w1 = window(&rows, 0);
        let c = w1[0].clone();
        let new_row: Vec<BigInt> = w1
            .iter()
            .zip(&pivot_row)
            .map(|(a, b)| a - &c * b)
            .collect();
        debug_assert!(new_row[0].is_zero());
        rows.push(new_row);
    }

    // Bottom window is now [[1, *], [0, bhat]] with bhat unimodular.
    let bhat = IntMatrix::from_rows(
        (0..k - 1)
            .map(|p| window(&rows, p + 1)[1..].to_vec())
            .collect(),
    );
    debug_assert!(bhat.is_unimodular());

    // Phase 3: recurse on bhat and graft the tail, inserting the pivot row
    // e_1 before each block of k-1 zero-padded rows. The recursion's length
    // contract makes the final block the identity, so the stack ends with
    // (e_1; 0|I_{k-1}) = I_k.
    let sub = extend_down(&bhat);
    let mut e1 = vec![BigInt::zero(); k];
    e1[0] = BigInt::one();
    for i in 0..sub.rows() - (k - 1) {
        if i % (k - 1) == 0 {
            rows.push(e1.clone());
        }
        let mut padded = vec![BigInt::zero()];
        padded.extend(sub.row_vec(k - 1 + i));
        rows.push(padded);
    }

    // Phase 4: pad to a row count divisible by k. Each detour appends the
    // all-ones row followed by e_1..e_k, adding k+1 rows (= 1 mod k) and
    // returning the bottom window to the identity.
    let deficit = (k - rows.len() % k) % k;
    for _ in 0..deficit {
        rows.push(vec![BigInt::one(); k]);
        for j in 0..k {
            let mut e = vec![BigInt::zero(); k];
            e[j] = BigInt::one();
            rows.push(e);
        }
    }

    let out = IntMatrix::from_rows(rows);
    debug_assert!(out.rows() % k == 0 && out.rows() >= 2 * k);
    debug_assert!(windows_unimodular(&out, k));
    debug_assert_eq!(
        out.select_rows(&(out.rows() - k..out.rows()).collect::<Vec<_>>()),
        IntMatrix::identity(k)
    );
    out
}

/// Prepends rows above `b` until the top `k` rows are `I_k`.
///
/// Runs `extend_down` on the row-reversed, column-reversed block and maps
/// the result back; both symmetries preserve window unimodularity and the
/// conjugation turns the trailing identity into a leading one.
fn extend_up(b: &IntMatrix) -> IntMatrix {
    let down = extend_down(&b.reverse_rows().reverse_cols());
    down.reverse_rows().reverse_cols()
}

/// Whether every cyclic window of `r` consecutive columns is unimodular.
///
/// Windows follow the 1-based convention: the `j`-th window takes columns
/// `j-r, ..., j-1 (mod m)` with representatives in `[1, m]`. Returns the
/// first failing `j` (1-based) if any.
pub fn is_circular(m: &IntMatrix) -> (bool, Option<usize>) {
    let r = m.rows();
    let cols = m.cols();
    assert!(r <= cols && r > 0);
    for j in 1..=cols {
        let idx: Vec<usize> = (0..r)
            .map(|i| {
                // column j-r+i (1-based, cyclic), shifted to 0-based
                let c = (j as i64 - r as i64 + i as i64 - 1).rem_euclid(cols as i64);
                c as usize
            })
            .collect();
        let window = m.select_cols(&idx);
        if !window.determinant().abs().is_one() {
            return (false, Some(j));
        }
    }
    (true, None)
}
