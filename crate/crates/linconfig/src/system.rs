//! Analysis of integer linear systems: rank, determinantal divisor,
//! invariance, plainness, and the plain-coordinate reduction.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::completion::{is_circular, unimodular_completion_row};
use crate::error::PipelineError;
use crate::matrix::{vec_gcd, IntMatrix};
use crate::normal_form::solve_integer;

/// An integer matrix together with the derived facts the pipeline branches on.
#[derive(Clone, Debug)]
pub struct LinearSystemMatrix {
    pub matrix: IntMatrix,
    pub rank: usize,
    /// Determinantal divisor of order `rank`.
    pub determinantal: BigInt,
    /// True iff every row sums to zero, i.e. `M (1,..,1)^T = 0`.
    pub invariant: bool,
    /// 0-based column indices forced to zero in every abelian group.
    pub plain_indices: Vec<usize>,
    /// Literal `(I_r | B)` shape.
    pub identity_form: bool,
    pub simple: bool,
    pub circular: bool,
}

/// Populates every derived field of [`LinearSystemMatrix`].
///
/// Plainness is decided by the rational-rank criterion: column `l` is plain
/// iff deleting it drops the rank by exactly one.
pub fn analyze(matrix: &IntMatrix) -> LinearSystemMatrix {
    assert!(
        !matrix.is_zero_matrix() && !matrix.is_empty(),
        "analyze requires a nonzero matrix"
    );
    let rank = matrix.rank();
    let determinantal = matrix
        .determinantal_divisor(rank)
        .expect("rank-order minors exist by definition of rank");
    let invariant = (0..matrix.rows()).all(|i| {
        matrix.row(i).iter().sum::<BigInt>().is_zero()
    });
    let plain_indices: Vec<usize> = (0..matrix.cols())
        .filter(|&l| matrix.delete_col(l).rank() == rank - 1)
        .collect();
    let identity_form = is_identity_form(matrix);
    let simple = identity_form && is_simple_identity_form(matrix);
    let circular = matrix.rows() <= matrix.cols() && is_circular(matrix).0;
    LinearSystemMatrix {
        matrix: matrix.clone(),
        rank,
        determinantal,
        invariant,
        plain_indices,
        identity_form,
        simple,
        circular,
    }
}

pub fn is_identity_form(m: &IntMatrix) -> bool {
    let r = m.rows();
    if m.cols() < r {
        return false;
    }
    m.select_cols(&(0..r).collect::<Vec<_>>()) == IntMatrix::identity(r)
}

fn is_simple_identity_form(m: &IntMatrix) -> bool {
    let r = m.rows();
    let cols = m.cols();
    if cols < r + 2 {
        return false;
    }
    (0..r).all(|i| {
        let b_row: Vec<BigInt> = (r..cols).map(|j| m[(i, j)].clone()).collect();
        !b_row.iter().all(|x| x.is_zero()) && vec_gcd(&b_row).is_one()
    })
}

/// Simplicity check for matrices already in `(I_r|B)` form: `m >= r + 2`
/// and every row of `B` is non-zero with coprime entries.
pub fn is_simple(m: &LinearSystemMatrix) -> Result<bool, PipelineError> {
    if !m.identity_form {
        return Err(PipelineError::NotIdentityForm);
    }
    Ok(m.simple)
}

/// One eliminated coordinate: the original column index and the unimodular
/// row transform that exposed it.
#[derive(Clone, Debug)]
pub struct PlainStep {
    /// 0-based column index in the ORIGINAL matrix.
    pub original_column: usize,
    /// Unimodular matrix whose first row combines the current rows into
    /// the standard basis vector at the eliminated column.
    pub transform: IntMatrix,
}

/// Trail of eliminated plain coordinates.
#[derive(Clone, Debug, Default)]
pub struct PlainReport {
    pub steps: Vec<PlainStep>,
    /// True when the reduction consumed the whole matrix: the zero tuple is
    /// the only solution of the original system.
    pub degenerate: bool,
}

impl PlainReport {
    pub fn eliminated(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.original_column).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Original column indices kept by the reduction, in order.
    pub fn kept_columns(&self, original_cols: usize) -> Vec<usize> {
        let gone = self.eliminated();
        (0..original_cols).filter(|c| !gone.contains(c)).collect()
    }
}

/// Eliminates plain coordinates until the matrix is non-plain (or empty).
///
/// Each step finds coprime `n` with `n * M = e_l`, completes `n` to a
/// unimodular `U`, and deletes the first row and column `l` of `U * M`.
/// The embedding that re-inserts zeros at eliminated positions is an exact
/// kernel isomorphism, so downstream work happens on the reduced matrix.
pub fn plain_reduce(
    m: &LinearSystemMatrix,
) -> Result<(Option<LinearSystemMatrix>, PlainReport), PipelineError> {
    if !m.determinantal.is_one() {
        return Err(PipelineError::DeterminantalNotOne);
    }
    let mut report = PlainReport::default();
    let mut current = m.clone();
    // original indices of the surviving columns
    let mut alive: Vec<usize> = (0..m.matrix.cols()).collect();
    loop {
        if current.matrix.rows() == 0 {
            report.degenerate = true;
            return Ok((None, report));
        }
        let Some(&l) = current.plain_indices.first() else {
            return Ok((Some(current), report));
        };
        // e_l lies in the integer row span: solve M^T n = e_l
        let mut e_l = vec![BigInt::zero(); current.matrix.cols()];
        e_l[l] = BigInt::one();
        let n = solve_integer(&current.matrix.transpose(), &e_l)
            .expect("plain index must admit an integer row combination when d_r = 1");
        debug_assert!(vec_gcd(&n).is_one());
        let u = unimodular_completion_row(&n)?;
        let m0 = u.mul(&current.matrix);
        debug_assert_eq!(m0.row(0), &e_l[..]);
        let reduced = m0.delete_row(0).delete_col(l);
        report.steps.push(PlainStep {
            original_column: alive[l],
            transform: u,
        });
        alive.remove(l);
        if reduced.rows() == 0 {
            report.degenerate = true;
            return Ok((None, report));
        }
        current = analyze(&reduced);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;
    use crate::hom::kernel_parametrization;

    #[test]
    fn analyze_schur() {
        let a = analyze(&IntMatrix::from_i64(&[&[1, 1, -1]]));
        assert_eq!(a.rank, 1);
        assert!(a.determinantal.is_one());
        assert!(!a.invariant, "1 + 1 - 1 = 1 != 0");
        assert!(a.plain_indices.is_empty());
        assert!(a.circular);
        assert!(a.identity_form);
        assert!(a.simple);
    }

    #[test]
    fn analyze_ap3() {
        let a = analyze(&IntMatrix::from_i64(&[&[1, -2, 1]]));
        assert!(a.invariant, "row sums to zero");
        assert!(a.determinantal.is_one());
        assert!(a.plain_indices.is_empty());
        assert!(!a.circular);
        assert!(a.simple);
    }

    #[test]
    fn analyze_finds_plain_first_coordinate() {
        let a = analyze(&IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 1]]));
        assert_eq!(a.plain_indices, vec![0]);
    }

    #[test]
    fn simplicity_examples() {
        assert!(analyze(&IntMatrix::from_i64(&[&[1, 1, 1]])).simple);
        // gcd of the B-row is 2
        assert!(!analyze(&IntMatrix::from_i64(&[&[1, 2, 2]])).simple);
        // m = r + 1
        assert!(!analyze(&IntMatrix::from_i64(&[&[1, 2]])).simple);
        // is_simple demands identity form
        let bad = analyze(&IntMatrix::from_i64(&[&[2, 3, 1], &[1, 2, 1]]));
        assert!(matches!(
            is_simple(&bad),
            Err(PipelineError::NotIdentityForm)
        ));
    }

    #[test]
    fn plain_reduce_is_identity_on_non_plain_input() {
        let a = analyze(&IntMatrix::from_i64(&[&[1, 1, -1]]));
        let (out, report) = plain_reduce(&a).unwrap();
        assert_eq!(out.unwrap().matrix, a.matrix);
        assert!(report.is_empty());
        assert!(!report.degenerate);
    }

    #[test]
    fn plain_reduce_strips_forced_zero_coordinate() {
        let a = analyze(&IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 1]]));
        let (out, report) = plain_reduce(&a).unwrap();
        let out = out.unwrap();
        assert_eq!(out.matrix, IntMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(report.eliminated(), vec![0]);

        // kernel bijection oracle on Z_4: embedding zeros at the eliminated
        // index maps ker(reduced) onto ker(original)
        let g = FiniteAbelianGroup::cyclic(4);
        let w_red = kernel_parametrization(&out.matrix, &g).unwrap();
        let orig = IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 1]]);
        let kept = report.kept_columns(3);
        let g1 = g.power(1);
        let g3 = g.power(3);
        let gr = g.power(2);
        let mut count = 0;
        for y in g1.elements() {
            let small = g.power(2).reduce(&w_red.mul_vec(&g1.lift(&y)));
            // re-insert zeros
            let mut full = vec![0u64; 3];
            for (pos, &orig_col) in kept.iter().enumerate() {
                full[orig_col] = small[pos];
            }
            assert!(gr.reduce(&orig.mul_vec(&g3.lift(&full))) == gr.zero());
            count += 1;
        }
        // |ker orig| = |G|^{3-2} = 4 = count of embedded elements
        assert_eq!(count, 4);
    }

    #[test]
    fn plain_reduce_identity_matrix_is_degenerate() {
        let a = analyze(&IntMatrix::identity(2));
        let (out, report) = plain_reduce(&a).unwrap();
        assert!(out.is_none());
        assert!(report.degenerate);
        let mut elim = report.eliminated();
        elim.sort();
        assert_eq!(elim, vec![0, 1]);
    }

    #[test]
    fn plain_reduce_requires_determinantal_one() {
        let a = analyze(&IntMatrix::from_i64(&[&[2, 4]]));
        assert!(matches!(
            plain_reduce(&a),
            Err(PipelineError::DeterminantalNotOne)
        ));
    }
}
