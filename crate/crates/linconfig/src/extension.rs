//! Matrix extensions: replacing a system by a larger one whose kernel
//! projects back onto the original kernel via coordinate selection.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::completion::{good_completion, unimodular_completion_block, unimodular_completion_row};
use crate::error::PipelineError;
use crate::group::FiniteAbelianGroup;
use crate::hom::{kernel_parametrization, matrix_action_hom};
use crate::matrix::IntMatrix;
use crate::normal_form::inverse_unimodular;
use crate::system::{analyze, is_identity_form, LinearSystemMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionKind {
    /// Kernel isomorphism by zero-coordinate embedding.
    PlainReduce,
    /// Reduction to `(I_m | B)` form.
    IdentityForm,
    /// Circular extension of a simple matrix.
    Circular,
    /// The `m = r + 1` widening; projection is onto but not injective.
    Widen,
}

impl ExtensionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExtensionKind::PlainReduce => "plain_reduce",
            ExtensionKind::IdentityForm => "identity_form",
            ExtensionKind::Circular => "circular",
            ExtensionKind::Widen => "widen",
        }
    }
}

/// `child` is the larger system; `pi_J : ker(child) -> ker(parent)` is a
/// bijection for every kind except [`ExtensionKind::Widen`], where it is
/// only a surjection.
#[derive(Clone, Debug)]
pub struct MatrixExtension {
    pub parent: IntMatrix,
    pub child: IntMatrix,
    /// 0-based column indices of the child selected by the projection,
    /// strictly increasing, one per parent column.
    pub j_set: Vec<usize>,
    pub kind: ExtensionKind,
}

impl MatrixExtension {
    /// Exact soundness check on one finite group.
    ///
    /// For bijective kinds: `|ker child| = |ker parent|` and the projection
    /// is injective on the kernel. For widening: the projected kernel equals
    /// the parent kernel as a canonical subgroup.
    pub fn check_on(&self, g: &FiniteAbelianGroup) -> Result<(), String> {
        let w_child = kernel_parametrization(&self.child, g).map_err(|e| e.to_string())?;
        let w_parent = kernel_parametrization(&self.parent, g).map_err(|e| e.to_string())?;

        // projected child kernel == parent kernel, always
        let proj_rows: Vec<usize> = self.j_set.clone();
        let w_proj = w_child.select_rows(&proj_rows);
        let child_img = matrix_action_hom(&w_proj, g).image();
        let parent_img = matrix_action_hom(&w_parent, g).image();
        if child_img != parent_img {
            return Err(format!(
                "projected kernel differs from parent kernel on {}",
                g.name()
            ));
        }

        if self.kind != ExtensionKind::Widen {
            // (i) equal kernel orders
            let free_child = w_child.cols() as u32;
            let free_parent = w_parent.cols() as u32;
            if free_child != free_parent {
                return Err("kernel ranks differ".into());
            }
            // (ii) injectivity: only 0 projects to 0
            let param = matrix_action_hom(&w_child, g);
            let dom = param.domain().clone();
            let target = g.power(self.parent.cols());
            let mut hits = 0usize;
            for y in dom.elements() {
                let x = param.apply(&y);
                let projected: Vec<u64> = self
                    .j_set
                    .iter()
                    .flat_map(|&j| {
                        let s = g.num_factors();
                        x[j * s..(j + 1) * s].to_vec()
                    })
                    .collect();
                if projected == target.zero() {
                    hits += 1;
                }
            }
            if hits != 1 {
                return Err(format!(
                    "projection not injective on the kernel: {hits} preimages of 0 on {}",
                    g.name()
                ));
            }
        }
        Ok(())
    }
}

/// Extension to `(I_m | B)` form with every row of `B` non-zero.
///
/// Completes `M` to a unimodular `U = (M; E)`, forms `(U | (0; I))` and
/// normalizes by `U^{-1}`. Returns the extension (child in `(I_m|B)` form,
/// `J = [m]`) and the unimodular witness `U`.
pub fn identity_form_extension(
    m: &LinearSystemMatrix,
) -> Result<(MatrixExtension, IntMatrix), PipelineError> {
    if !m.determinantal.is_one() {
        return Err(PipelineError::DeterminantalNotOne);
    }
    if !m.plain_indices.is_empty() {
        return Err(PipelineError::PlainInput);
    }
    let r = m.matrix.rows();
    let cols = m.matrix.cols();
    let u = unimodular_completion_block(&m.matrix)?;
    let uinv = inverse_unimodular(&u)?;
    // B = U^{-1} * (0; I_{m-r}), i.e. the trailing columns of U^{-1}
    let b = uinv.select_cols(&(r..cols).collect::<Vec<_>>());
    for i in 0..cols {
        if b.row(i).iter().all(|x| x.is_zero()) {
            // a zero row here means the parent was plain after all
            return Err(PipelineError::PlainInput);
        }
    }
    let child = IntMatrix::identity(cols).hstack(&b);
    let ext = MatrixExtension {
        parent: m.matrix.clone(),
        child,
        j_set: (0..cols).collect(),
        kind: ExtensionKind::IdentityForm,
    };
    Ok((ext, u))
}

/// Circular extension of a simple matrix.
///
/// Each row `B_i` is completed to a unimodular `U_i` and then to a good
/// matrix; stacking the good blocks yields `B'` such that `(I_{r'} | B')`
/// is circular. `J` keeps the row of each embedded `B_i` plus the trailing
/// identity block.
pub fn circular_extension(m: &LinearSystemMatrix) -> Result<MatrixExtension, PipelineError> {
    if !m.identity_form {
        return Err(PipelineError::NotIdentityForm);
    }
    if !m.simple {
        return Err(PipelineError::NotSimple);
    }
    let r = m.matrix.rows();
    let cols = m.matrix.cols();
    let width = cols - r;
    let mut blocks: Vec<IntMatrix> = Vec::with_capacity(r);
    let mut first_row_offsets: Vec<usize> = Vec::with_capacity(r);
    let mut total = 0usize;
    for i in 0..r {
        let b_row: Vec<BigInt> = (r..cols).map(|j| m.matrix[(i, j)].clone()).collect();
        let u_i = unimodular_completion_row(&b_row)?;
        let good = good_completion(&u_i)?;
        first_row_offsets.push(total + good.block_offset);
        total += good.matrix.rows();
        blocks.push(good.matrix);
    }
    let mut b_prime = blocks[0].clone();
    for block in &blocks[1..] {
        b_prime = b_prime.vstack(block);
    }
    let r_prime = b_prime.rows();
    let child = IntMatrix::identity(r_prime).hstack(&b_prime);
    debug_assert!(crate::completion::is_circular(&child).0);

    let mut j_set: Vec<usize> = first_row_offsets;
    j_set.extend(r_prime..r_prime + width);
    let ext = MatrixExtension {
        parent: m.matrix.clone(),
        child,
        j_set,
        kind: ExtensionKind::Circular,
    };
    Ok(ext)
}

/// Widening for `(I_r | B)` with `m = r + 1`: the child is
/// `(I_{r+1} | (B, 0; 0, -1))`, a `(r+1) x (r+3)` matrix, with
/// `J = [r+2] \ {r+1}`. The projection is onto the parent kernel but has
/// non-trivial fibers.
pub fn widen_r_plus_1(m: &LinearSystemMatrix) -> Result<MatrixExtension, PipelineError> {
    let r = m.matrix.rows();
    if !m.identity_form || m.matrix.cols() != r + 1 {
        return Err(PipelineError::WrongShape);
    }
    let b: Vec<BigInt> = (0..r).map(|i| m.matrix[(i, r)].clone()).collect();
    if b.iter().any(|x| x.is_zero()) {
        return Err(PipelineError::WrongShape);
    }
    let mut child = IntMatrix::zero(r + 1, r + 3);
    for i in 0..r + 1 {
        child[(i, i)] = BigInt::one();
    }
    for i in 0..r {
        child[(i, r + 1)] = b[i].clone();
    }
    child[(r, r + 2)] = BigInt::from(-1);
    let mut j_set: Vec<usize> = (0..r).collect();
    j_set.push(r + 1);
    Ok(MatrixExtension {
        parent: m.matrix.clone(),
        child,
        j_set,
        kind: ExtensionKind::Widen,
    })
}

/// Convenience: analyze the child of an extension.
pub fn analyzed_child(ext: &MatrixExtension) -> LinearSystemMatrix {
    analyze(&ext.child)
}

/// Identity-form detection re-exported for pipeline use.
pub fn already_identity_form_with_nonzero_rows(m: &IntMatrix) -> bool {
    if !is_identity_form(m) {
        return false;
    }
    let r = m.rows();
    (0..r).all(|i| (r..m.cols()).any(|j| !m[(i, j)].is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::is_circular;

    fn battery_small() -> Vec<FiniteAbelianGroup> {
        vec![
            FiniteAbelianGroup::cyclic(2),
            FiniteAbelianGroup::cyclic(3),
            FiniteAbelianGroup::cyclic(4),
            FiniteAbelianGroup::cyclic(5),
            FiniteAbelianGroup::new(vec![2, 4]),
        ]
    }

    #[test]
    fn identity_form_extension_of_schur() {
        let m = analyze(&IntMatrix::from_i64(&[&[1, 1, -1]]));
        let (ext, u) = identity_form_extension(&m).unwrap();
        assert!(u.is_unimodular());
        assert_eq!(u.row(0), m.matrix.row(0));
        assert_eq!(ext.child.rows(), 3);
        assert_eq!(ext.child.cols(), 5);
        assert!(is_identity_form(&ext.child));
        // every row of B is non-zero
        for i in 0..3 {
            assert!((3..5).any(|j| !ext.child[(i, j)].is_zero()));
        }
        for g in battery_small() {
            ext.check_on(&g).unwrap();
        }
    }

    #[test]
    fn identity_form_extension_of_ap3() {
        let m = analyze(&IntMatrix::from_i64(&[&[1, -2, 1]]));
        let (ext, _) = identity_form_extension(&m).unwrap();
        assert_eq!((ext.child.rows(), ext.child.cols()), (3, 5));
        for g in battery_small() {
            ext.check_on(&g).unwrap();
        }
    }

    #[test]
    fn identity_form_extension_redone_when_already_in_form() {
        let m = analyze(&IntMatrix::from_i64(&[&[1, 0, 1, 1], &[0, 1, 1, 2]]));
        let (ext, _) = identity_form_extension(&m).unwrap();
        assert_eq!((ext.child.rows(), ext.child.cols()), (4, 6));
        assert!(is_identity_form(&ext.child));
        for g in battery_small() {
            ext.check_on(&g).unwrap();
        }
    }

    #[test]
    fn identity_form_extension_rejects_plain() {
        let m = analyze(&IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 1]]));
        assert!(matches!(
            identity_form_extension(&m),
            Err(PipelineError::PlainInput)
        ));
    }

    #[test]
    fn circular_extension_of_simple_matrices() {
        for mat in [
            IntMatrix::from_i64(&[&[1, 1, 1]]),
            IntMatrix::from_i64(&[&[1, 2, 2, 1]]),
            IntMatrix::from_i64(&[&[1, 0, 1, 1], &[0, 1, 1, 2]]),
        ] {
            let m = analyze(&mat);
            let ext = circular_extension(&m).unwrap();
            let (ok, _) = is_circular(&ext.child);
            assert!(ok, "child not circular for {:?}", mat);
            assert!(is_identity_form(&ext.child));
            assert_eq!(ext.j_set.len(), mat.cols());
            for g in [FiniteAbelianGroup::cyclic(3), FiniteAbelianGroup::cyclic(5)] {
                ext.check_on(&g).unwrap();
            }
        }
    }

    #[test]
    fn circular_extension_rejects_non_simple() {
        let m = analyze(&IntMatrix::from_i64(&[&[1, 2, 2]]));
        assert!(matches!(
            circular_extension(&m),
            Err(PipelineError::NotSimple)
        ));
    }

    #[test]
    fn widen_1_2() {
        let m = analyze(&IntMatrix::from_i64(&[&[1, 2]]));
        let ext = widen_r_plus_1(&m).unwrap();
        assert_eq!(
            ext.child,
            IntMatrix::from_i64(&[&[1, 0, 2, 0], &[0, 1, 0, -1]])
        );
        assert_eq!(ext.j_set, vec![0, 2]);
        // surjectivity of pi_J onto {(a,b): a + 2b = 0} on Z_4
        ext.check_on(&FiniteAbelianGroup::cyclic(4)).unwrap();
    }

    #[test]
    fn widen_1_1() {
        let m = analyze(&IntMatrix::from_i64(&[&[1, 1]]));
        let ext = widen_r_plus_1(&m).unwrap();
        assert_eq!(
            ext.child,
            IntMatrix::from_i64(&[&[1, 0, 1, 0], &[0, 1, 0, -1]])
        );
    }

    #[test]
    fn widen_2x3() {
        let m = analyze(&IntMatrix::from_i64(&[&[1, 0, 1], &[0, 1, 1]]));
        let ext = widen_r_plus_1(&m).unwrap();
        assert_eq!((ext.child.rows(), ext.child.cols()), (3, 5));
        ext.check_on(&FiniteAbelianGroup::cyclic(3)).unwrap();
    }

    #[test]
    fn widen_rejects_wrong_shape() {
        let m = analyze(&IntMatrix::from_i64(&[&[1, 1, 1]]));
        assert!(matches!(
            widen_r_plus_1(&m),
            Err(PipelineError::WrongShape)
        ));
    }
}
