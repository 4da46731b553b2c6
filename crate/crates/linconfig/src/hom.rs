//! Homomorphisms between finite abelian groups, presented as integer
//! matrices acting on residue vectors.
//!
//! A hom `h : prod Z_{a_i} -> prod Z_{b_j}` is a `q x p` integer matrix `T`
//! with `b_j | T[j][i] * a_i` for all entries (well-definedness). Kernels,
//! images and congruence solving are all exact lattice computations; the
//! solver never searches.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::GroupError;
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::matrix::IntMatrix;
use crate::normal_form::{kernel_lattice, snf_core, solve_integer};
use crate::subgroup::Subgroup;

#[derive(Clone, Debug)]
pub struct GroupHom {
    domain: FiniteAbelianGroup,
    codomain: FiniteAbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(
        domain: FiniteAbelianGroup,
        codomain: FiniteAbelianGroup,
        matrix: IntMatrix,
    ) -> GroupHom {
        assert_eq!(matrix.rows(), codomain.num_factors());
        assert_eq!(matrix.cols(), domain.num_factors());
        for (j, &b) in codomain.moduli().iter().enumerate() {
            for (i, &a) in domain.moduli().iter().enumerate() {
                let prod = &matrix[(j, i)] * BigInt::from(a);
                assert!(
                    prod.mod_floor(&BigInt::from(b)).is_zero(),
                    "ill-defined homomorphism entry at ({j},{i})"
                );
            }
        }
        GroupHom {
            domain,
            codomain,
            matrix,
        }
    }

    /// Multiplication-by-`k` endomorphism.
    pub fn scalar(g: &FiniteAbelianGroup, k: i64) -> GroupHom {
        let s = g.num_factors();
        let mut m = IntMatrix::zero(s, s);
        for i in 0..s {
            m[(i, i)] = BigInt::from(k);
        }
        GroupHom::new(g.clone(), g.clone(), m)
    }

    pub fn domain(&self) -> &FiniteAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteAbelianGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        assert!(self.domain.is_valid(x), "element not in the domain");
        let v = self.matrix.mul_vec(&self.domain.lift(x));
        self.codomain.reduce(&v)
    }

    /// Kernel as a canonical subgroup of the domain.
    ///
    /// Internally: the solutions of `T x = 0 mod b` form the projection to
    /// the first `p` coordinates of the integer kernel of `[T | diag(b)]`.
    pub fn kernel(&self) -> Subgroup {
        let p = self.domain.num_factors();
        let q = self.codomain.num_factors();
        let mut diag = IntMatrix::zero(q, q);
        for (j, &b) in self.codomain.moduli().iter().enumerate() {
            diag[(j, j)] = BigInt::from(b);
        }
        let aug = self.matrix.hstack(&diag);
        let basis_cols = kernel_lattice(&aug);
        let rows: Vec<Vec<BigInt>> = (0..basis_cols.cols())
            .map(|c| (0..p).map(|i| basis_cols[(i, c)].clone()).collect())
            .collect();
        let ker = Subgroup::from_lattice_rows(&self.domain, rows);
        debug_assert_eq!(
            ker.order() * self.image().order(),
            self.domain.order(),
            "first isomorphism theorem violated"
        );
        ker
    }

    /// Image as a canonical subgroup of the codomain, generated by the
    /// images of the domain factor units.
    pub fn image(&self) -> Subgroup {
        let rows: Vec<Vec<BigInt>> = (0..self.domain.num_factors())
            .map(|i| {
                if self.domain.moduli()[i] == 1 {
                    // trivial factor: its unit is zero
                    vec![BigInt::zero(); self.codomain.num_factors()]
                } else {
                    self.matrix.col_vec(i)
                }
            })
            .collect();
        Subgroup::from_lattice_rows(&self.codomain, rows)
    }

    /// Exact solve of `h(x) = target` with some coordinates pinned.
    ///
    /// Returns `None` only when the congruence system is genuinely
    /// inconsistent; the decision is made by an integer lattice solve with
    /// auxiliary modulus variables, never by search.
    pub fn solve(
        &self,
        target: &GroupElement,
        fixed: &[(usize, u64)],
    ) -> Option<GroupElement> {
        assert!(self.codomain.is_valid(target));
        let p = self.domain.num_factors();
        let q = self.codomain.num_factors();
        let mut is_fixed = vec![None::<u64>; p];
        for &(i, v) in fixed {
            assert!(i < p && v < self.domain.moduli()[i].max(1));
            is_fixed[i] = Some(v);
        }
        let free: Vec<usize> = (0..p).filter(|&i| is_fixed[i].is_none()).collect();
        // move fixed contributions to the right-hand side
        let mut rhs: Vec<BigInt> = self.codomain.lift(target);
        for (i, v) in is_fixed.iter().enumerate() {
            if let Some(v) = v {
                for j in 0..q {
                    let sub = &self.matrix[(j, i)] * BigInt::from(*v);
                    rhs[j] -= sub;
                }
            }
        }
        let reduced = self.matrix.select_cols(&free);
        let mut diag = IntMatrix::zero(q, q);
        for (j, &b) in self.codomain.moduli().iter().enumerate() {
            diag[(j, j)] = BigInt::from(b);
        }
        let aug = reduced.hstack(&diag);
        let sol = solve_integer(&aug, &rhs)?;
        let mut out: Vec<BigInt> = is_fixed
            .iter()
            .map(|v| BigInt::from(v.unwrap_or(0)))
            .collect();
        for (k, &i) in free.iter().enumerate() {
            out[i] = sol[k].clone();
        }
        let x = self.domain.reduce(&out);
        debug_assert_eq!(&self.apply(&x), target);
        Some(x)
    }
}

/// Surjection `G -> H` with `H = prod Z_{d_i}`, each `d_i` dividing the
/// corresponding modulus; the map reduces each coordinate.
pub fn quotient_map(
    g: &FiniteAbelianGroup,
    divisors: &[u64],
) -> Result<GroupHom, GroupError> {
    assert_eq!(divisors.len(), g.num_factors());
    for (&d, &n) in divisors.iter().zip(g.moduli()) {
        if d < 1 || n % d != 0 {
            return Err(GroupError::NotADivisor(d, n));
        }
    }
    let h = FiniteAbelianGroup::new(divisors.to_vec());
    Ok(GroupHom::new(
        g.clone(),
        h,
        IntMatrix::identity(g.num_factors()),
    ))
}

/// Integer matrix `W` with `M W = 0` such that `y -> W y` is a bijection
/// `G^{m-rank} -> ker_G M`.
///
/// `W` consists of the trailing columns of `V^{-1}` from the Smith form
/// `M = U D V`; the bijection needs `gcd(d_r(M), |G|) = 1`.
pub fn kernel_parametrization(
    m: &IntMatrix,
    g: &FiniteAbelianGroup,
) -> Result<IntMatrix, GroupError> {
    let core = snf_core(m);
    let d_r: BigInt = (0..core.rank).map(|i| core.d[(i, i)].clone()).product();
    let order = BigInt::from(g.order());
    if !d_r.gcd(&order).to_u64().map(|v| v == 1).unwrap_or(false) {
        return Err(GroupError::DeterminantalObstruction);
    }
    let idx: Vec<usize> = (core.rank..m.cols()).collect();
    let w = core.vinv.select_cols(&idx);
    debug_assert!(m.mul(&w).is_zero_matrix());
    Ok(w)
}

/// The matrix-action homomorphism `G^t -> G^m` for an integer matrix.
pub fn matrix_action_hom(
    psi: &IntMatrix,
    g: &FiniteAbelianGroup,
) -> GroupHom {
    let s = g.num_factors();
    let m = psi.rows();
    let t = psi.cols();
    let mut flat = IntMatrix::zero(m * s, t * s);
    for u in 0..m {
        for c in 0..t {
            if psi[(u, c)].is_zero() {
                continue;
            }
            for j in 0..s {
                flat[(u * s + j, c * s + j)] = psi[(u, c)].clone();
            }
        }
    }
    GroupHom::new(g.power(t), g.power(m), flat)
}

/// The projected subgroup `p_j(ker_G M)` of `G`, computed from the kernel
/// parametrization: it is generated by the entries of row `j` of `W`.
pub fn kernel_projection_subgroup(
    w: &IntMatrix,
    g: &FiniteAbelianGroup,
    j: usize,
) -> Subgroup {
    let s = g.num_factors();
    let mut gens: Vec<GroupElement> = Vec::new();
    for c in 0..w.cols() {
        for f in 0..s {
            let mut e = vec![BigInt::zero(); s];
            e[f] = w[(j, c)].clone();
            gens.push(g.reduce(&e));
        }
    }
    Subgroup::from_generators(g, &gens)
}
