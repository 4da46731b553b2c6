//! Hypergraph representations of linear systems.
//!
//! A `(t, m, k)`-representation of `(M, G)` is a homomorphism
//! `Psi : D_1 x ... x D_t -> G^m` (each `D_c` is `G` or a torsion subgroup)
//! with row supports inside distinct `k`-element color classes, image equal
//! to `ker_G M`, and projected kernel equal to each row kernel. Integer
//! representations use `D_c = G` throughout; structured ones are the
//! covering construction that glues simple-block representations along
//! torsion subgroups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LiftError, PipelineError};
use crate::extension::{
    already_identity_form_with_nonzero_rows, circular_extension, identity_form_extension,
    widen_r_plus_1, MatrixExtension,
};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::hom::{kernel_parametrization, matrix_action_hom, GroupHom};
use crate::matrix::{vec_gcd, IntMatrix};
use crate::normal_form::{hnf_rows, inverse_unimodular};
use crate::subgroup::{d_torsion, TorsionSubgroup};
use crate::system::{analyze, plain_reduce, LinearSystemMatrix, PlainReport};

/// Group-generic representation: an integer matrix acting on `G^t`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerRep {
    pub psi: IntMatrix,
    pub t: usize,
    pub k: usize,
    /// Sorted 0-based `k`-subsets of `[t]`, one per row of `psi`.
    pub color_classes: Vec<Vec<usize>>,
}

/// The covering construction for non-simple `(I_r|B)`: block representations
/// of the associated simple systems, assembled and scaled by the row gcds.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredRep {
    /// `d_i = gcd(B_i)`, one per row of the source matrix.
    pub divisors: Vec<BigInt>,
    /// Representations of the blocks `M^(0), ..., M^(r)`.
    pub blocks: Vec<IntegerRep>,
    /// Assembled (and possibly row-projected) action matrix.
    pub psi: IntMatrix,
    pub t: usize,
    pub k: usize,
    pub color_classes: Vec<Vec<usize>>,
    /// Block index for every column; block 0 columns range over `G`,
    /// block `i >= 1` columns over the `d_i`-torsion subgroup.
    pub column_blocks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    Integer(IntegerRep),
    Structured(StructuredRep),
}

impl Representation {
    pub fn psi(&self) -> &IntMatrix {
        match self {
            Representation::Integer(r) => &r.psi,
            Representation::Structured(r) => &r.psi,
        }
    }

    pub fn t(&self) -> usize {
        match self {
            Representation::Integer(r) => r.t,
            Representation::Structured(r) => r.t,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Representation::Integer(r) => r.k,
            Representation::Structured(r) => r.k,
        }
    }

    pub fn color_classes(&self) -> &[Vec<usize>] {
        match self {
            Representation::Integer(r) => &r.color_classes,
            Representation::Structured(r) => &r.color_classes,
        }
    }

    /// Number of system coordinates the representation currently targets.
    pub fn rows(&self) -> usize {
        self.psi().rows()
    }

    /// Per-column input domain: all of `G`, or a `d`-torsion subgroup.
    /// Note `Torsion(1)` is the trivial subgroup, not the full group.
    pub fn column_domains(&self) -> Vec<ColumnDomain> {
        match self {
            Representation::Integer(r) => vec![ColumnDomain::Full; r.t],
            Representation::Structured(r) => r
                .column_blocks
                .iter()
                .map(|&b| {
                    if b == 0 {
                        ColumnDomain::Full
                    } else {
                        ColumnDomain::Torsion(r.divisors[b - 1].clone())
                    }
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ColumnDomain {
    Full,
    Torsion(BigInt),
}

/// Representation of a circular matrix: `t = m`, `k = r + 1`, cyclic color
/// classes, column `j` supported on the `r` columns before `j` plus `j`
/// itself with entry -1.
pub fn circular_representation(m: &LinearSystemMatrix) -> Result<IntegerRep, PipelineError> {
    if !m.circular {
        return Err(PipelineError::NotCircular);
    }
    let r = m.matrix.rows();
    let cols = m.matrix.cols();
    if cols < r + 2 {
        return Err(PipelineError::TooFewColumns);
    }
    let mut psi = IntMatrix::zero(cols, cols);
    for j in 0..cols {
        let window_idx: Vec<usize> = (0..r)
            .map(|i| ((j + cols + i) as i64 - r as i64).rem_euclid(cols as i64) as usize)
            .collect();
        let window = m.matrix.select_cols(&window_idx);
        let inv = inverse_unimodular(&window)?;
        let col_j = m.matrix.col_vec(j);
        let y = inv.mul_vec(&col_j);
        for (i, &row) in window_idx.iter().enumerate() {
            psi[(row, j)] = y[i].clone();
        }
        psi[(j, j)] = BigInt::from(-1);
    }
    debug_assert!(m.matrix.mul(&psi).is_zero_matrix());
    let color_classes: Vec<Vec<usize>> = (0..cols)
        .map(|j| {
            let mut c: Vec<usize> = (0..=r).map(|i| (j + i) % cols).collect();
            c.sort();
            c
        })
        .collect();
    Ok(IntegerRep {
        psi,
        t: cols,
        k: r + 1,
        color_classes,
    })
}

/// Row selection through an extension: `Psi = pi_J . Psi'`.
pub fn project_representation(
    rep: &Representation,
    ext: &MatrixExtension,
) -> Result<Representation, PipelineError> {
    if rep.rows() != ext.child.cols() {
        return Err(PipelineError::ShapeMismatch);
    }
    let select = |r: &IntegerRep| IntegerRep {
        psi: r.psi.select_rows(&ext.j_set),
        t: r.t,
        k: r.k,
        color_classes: ext.j_set.iter().map(|&j| r.color_classes[j].clone()).collect(),
    };
    Ok(match rep {
        Representation::Integer(r) => Representation::Integer(select(r)),
        Representation::Structured(r) => Representation::Structured(StructuredRep {
            divisors: r.divisors.clone(),
            blocks: r.blocks.clone(),
            psi: r.psi.select_rows(&ext.j_set),
            t: r.t,
            k: r.k,
            color_classes: ext.j_set.iter().map(|&j| r.color_classes[j].clone()).collect(),
            column_blocks: r.column_blocks.clone(),
        }),
    })
}

/// Representation of a simple matrix via its circular extension.
pub fn simple_representation(m: &LinearSystemMatrix) -> Result<IntegerRep, PipelineError> {
    let ext = circular_extension(m)?;
    let child = analyze(&ext.child);
    let rep = circular_representation(&child)?;
    let projected = project_representation(&Representation::Integer(rep), &ext)?;
    match projected {
        Representation::Integer(r) => {
            debug_assert!(m.matrix.mul(&r.psi).is_zero_matrix());
            Ok(r)
        }
        Representation::Structured(_) => unreachable!(),
    }
}

/// The covering construction for `(I_r | B)` with `cols >= r + 2` and all
/// rows of `B` non-zero (simplicity not required).
///
/// Builds `M^(0) = (I_r | B')` with rows divided by their gcds and, for each
/// `i`, the widened simple block `M^(i)`; block representations come from
/// [`simple_representation`], and the assembled action scales row `u <= r`
/// by `gcd(B_u)` while ignoring each block's auxiliary final coordinate.
pub fn general_representation(m: &LinearSystemMatrix) -> Result<StructuredRep, PipelineError> {
    if !m.identity_form {
        return Err(PipelineError::NotIdentityForm);
    }
    let r = m.matrix.rows();
    let cols = m.matrix.cols();
    if cols < r + 2 {
        return Err(PipelineError::WrongShape);
    }
    let b_rows: Vec<Vec<BigInt>> = (0..r)
        .map(|i| (r..cols).map(|j| m.matrix[(i, j)].clone()).collect())
        .collect();
    let mut divisors: Vec<BigInt> = Vec::with_capacity(r);
    for row in &b_rows {
        let g = vec_gcd(row);
        if g.is_zero() {
            return Err(PipelineError::ZeroRow);
        }
        divisors.push(g);
    }
    let b_prime: Vec<Vec<BigInt>> = b_rows
        .iter()
        .zip(&divisors)
        .map(|(row, d)| row.iter().map(|x| x / d).collect())
        .collect();

    // M^(0) = (I_r | B'), and for i in [r] the block with row i replaced by
    // the undivided B_i and an extra unit column:
    //   rows u != i: (B'_u, 0);  row i: (B_i, 1)
    let mut block_matrices: Vec<IntMatrix> = Vec::with_capacity(r + 1);
    let m0 = IntMatrix::identity(r).hstack(&IntMatrix::from_rows(b_prime.clone()));
    block_matrices.push(m0);
    for i in 0..r {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(r);
        for u in 0..r {
            let mut row = if u == i {
                b_rows[u].clone()
            } else {
                b_prime[u].clone()
            };
            row.push(if u == i { BigInt::one() } else { BigInt::zero() });
            rows.push(row);
        }
        block_matrices.push(IntMatrix::identity(r).hstack(&IntMatrix::from_rows(rows)));
    }

    let mut blocks: Vec<IntegerRep> = Vec::with_capacity(r + 1);
    for bm in &block_matrices {
        let a = analyze(bm);
        assert!(a.simple, "covering blocks are simple by construction");
        blocks.push(simple_representation(&a)?);
    }

    // assemble: block i contributes t_i columns; rows u < r scale by d_u
    let t: usize = blocks.iter().map(|b| b.t).sum();
    let k: usize = blocks.iter().map(|b| b.k).sum();
    let mut psi = IntMatrix::zero(cols, t);
    let mut column_blocks = vec![0usize; t];
    let mut color_classes: Vec<Vec<usize>> = vec![Vec::new(); cols];
    let mut offset = 0usize;
    for (i, block) in blocks.iter().enumerate() {
        for c in 0..block.t {
            column_blocks[offset + c] = i;
        }
        for u in 0..cols {
            let scale = if u < r {
                divisors[u].clone()
            } else {
                BigInt::one()
            };
            for c in 0..block.t {
                psi[(u, offset + c)] = &scale * &block.psi[(u, c)];
            }
        }
        for j in 0..cols {
            color_classes[j].extend(block.color_classes[j].iter().map(|&x| x + offset));
        }
        offset += block.t;
    }
    for c in color_classes.iter_mut() {
        c.sort();
    }
    Ok(StructuredRep {
        divisors,
        blocks,
        psi,
        t,
        k,
        color_classes,
        column_blocks,
    })
}

/// Everything `represent` produces: the representation for the reduced
/// matrix, the plain-coordinate report, and the extension trail.
#[derive(Clone, Debug)]
pub struct RepresentOutcome {
    pub representation: Representation,
    /// The matrix the representation is for (original minus plain columns).
    pub reduced_matrix: IntMatrix,
    pub plain_report: PlainReport,
    pub trail: Vec<MatrixExtension>,
}

/// Full pipeline: analyze, reduce plain coordinates, extend to `(I_r|B)`
/// when needed, widen `m = r + 1`, take the simple or covering route, and
/// project back through the trail.
///
/// Circular inputs with enough columns take the direct path. Matrices that
/// are already `(I_r|B)` with non-zero `B`-rows skip the identity-form
/// extension; re-extending them would only inflate `t` (and change the
/// covering divisors).
pub fn represent(matrix: &IntMatrix) -> Result<RepresentOutcome, PipelineError> {
    // dependent rows carry no kernel information; normalize to a row basis
    let working = if matrix.rank() < matrix.rows() {
        hnf_rows(matrix)
    } else {
        matrix.clone()
    };
    let a = analyze(&working);
    if !a.determinantal.is_one() {
        return Err(PipelineError::DeterminantalNotOne);
    }
    let (reduced, plain_report) = plain_reduce(&a)?;
    let Some(m1) = reduced else {
        return Err(PipelineError::Degenerate(plain_report));
    };

    let mut trail: Vec<MatrixExtension> = Vec::new();

    // fast path: circular matrices represent themselves
    if m1.circular && m1.matrix.cols() >= m1.matrix.rows() + 2 {
        let rep = Representation::Integer(circular_representation(&m1)?);
        check_final(&rep, &m1.matrix)?;
        return Ok(RepresentOutcome {
            representation: rep,
            reduced_matrix: m1.matrix,
            plain_report,
            trail,
        });
    }

    let mut current = if already_identity_form_with_nonzero_rows(&m1.matrix) {
        m1.clone()
    } else {
        let (ext, _witness) = identity_form_extension(&m1)?;
        let child = analyze(&ext.child);
        trail.push(ext);
        child
    };

    if current.matrix.cols() == current.matrix.rows() + 1 {
        let ext = widen_r_plus_1(&current)?;
        let child = analyze(&ext.child);
        trail.push(ext);
        current = child;
    }

    let mut rep = if current.simple {
        Representation::Integer(simple_representation(&current)?)
    } else {
        Representation::Structured(general_representation(&current)?)
    };

    for ext in trail.iter().rev() {
        rep = project_representation(&rep, ext)?;
    }

    check_final(&rep, &m1.matrix)?;
    Ok(RepresentOutcome {
        representation: rep,
        reduced_matrix: m1.matrix,
        plain_report,
        trail,
    })
}

fn check_final(rep: &Representation, m: &IntMatrix) -> Result<(), PipelineError> {
    if rep.rows() != m.cols() {
        return Err(PipelineError::ShapeMismatch);
    }
    let classes = rep.color_classes();
    for (i, a) in classes.iter().enumerate() {
        if a.len() != rep.k() {
            return Err(PipelineError::ShapeMismatch);
        }
        for b in classes.iter().skip(i + 1) {
            if a == b {
                return Err(PipelineError::ShapeMismatch);
            }
        }
    }
    if let Representation::Integer(r) = rep {
        assert!(
            m.mul(&r.psi).is_zero_matrix(),
            "integer representation must satisfy M * Psi = 0"
        );
    }
    Ok(())
}

/// A representation instantiated on a concrete group: the flat
/// homomorphism, the per-column domains, and the color classes.
#[derive(Clone, Debug)]
pub struct Instantiation {
    pub group: FiniteAbelianGroup,
    pub hom: GroupHom,
    pub m: usize,
    pub t: usize,
    /// Flat factors per column (= factors of the base group).
    pub stride: usize,
    pub column_domains: Vec<TorsionSubgroup>,
    pub color_classes: Vec<Vec<usize>>,
    /// Description of the product `G_* = G x G_1 x ... x G_r` (abstract
    /// factor orders); integer representations list just `G`.
    pub gstar_factors: Vec<Vec<u64>>,
}

fn group_exponent(g: &FiniteAbelianGroup) -> u64 {
    g.moduli().iter().fold(1u64, |acc, &n| acc.lcm(&n))
}

/// Builds the flat homomorphism `D_1 x ... x D_t -> G^m`.
pub fn instantiate(rep: &Representation, g: &FiniteAbelianGroup) -> Instantiation {
    let psi = rep.psi();
    let m = psi.rows();
    let t = rep.t();
    let s = g.num_factors();
    let exponent = group_exponent(g);
    let column_domains: Vec<TorsionSubgroup> = rep
        .column_domains()
        .iter()
        .map(|dom| match dom {
            // exponent-torsion is the full group, multipliers all 1
            ColumnDomain::Full => d_torsion(g, exponent),
            ColumnDomain::Torsion(d) => {
                let du = d.to_u64().expect("torsion divisor fits u64");
                d_torsion(g, du)
            }
        })
        .collect();
    let mut domain_moduli: Vec<u64> = Vec::with_capacity(t * s);
    for dom in &column_domains {
        domain_moduli.extend(&dom.abstract_moduli);
    }
    let domain = FiniteAbelianGroup::new(domain_moduli);
    let codomain = g.power(m);
    let mut flat = IntMatrix::zero(m * s, t * s);
    for u in 0..m {
        for c in 0..t {
            if psi[(u, c)].is_zero() {
                continue;
            }
            for j in 0..s {
                let mult = BigInt::from(column_domains[c].embed_multipliers[j]);
                flat[(u * s + j, c * s + j)] = &psi[(u, c)] * mult;
            }
        }
    }
    let hom = GroupHom::new(domain, codomain, flat);
    let gstar_factors = match rep {
        Representation::Integer(_) => vec![g.moduli().to_vec()],
        Representation::Structured(r) => {
            let mut out = vec![g.moduli().to_vec()];
            for d in &r.divisors {
                let du = d.to_u64().expect("torsion divisor fits u64");
                out.push(d_torsion(g, du).abstract_moduli);
            }
            out
        }
    };
    Instantiation {
        group: g.clone(),
        hom,
        m,
        t,
        stride: s,
        column_domains,
        color_classes: rep.color_classes().to_vec(),
        gstar_factors,
    }
}

impl Instantiation {
    pub fn domain(&self) -> &FiniteAbelianGroup {
        self.hom.domain()
    }

    /// Flat factor indices of the columns in `cols`.
    pub fn flat_indices(&self, cols: &[usize]) -> Vec<usize> {
        cols.iter()
            .flat_map(|&c| (c * self.stride..(c + 1) * self.stride).collect::<Vec<_>>())
            .collect()
    }

    /// Domain restricted to the columns in `cols`.
    pub fn domain_restriction(&self, cols: &[usize]) -> FiniteAbelianGroup {
        let moduli: Vec<u64> = self
            .flat_indices(cols)
            .into_iter()
            .map(|i| self.domain().moduli()[i])
            .collect();
        FiniteAbelianGroup::new(moduli)
    }

    /// The row map `psi_{C_j}` restricted to its color class.
    pub fn row_hom(&self, j: usize) -> GroupHom {
        let cols = self.flat_indices(&self.color_classes[j]);
        let rows: Vec<usize> = (j * self.stride..(j + 1) * self.stride).collect();
        let matrix = self.hom.matrix().select_rows(&rows).select_cols(&cols);
        GroupHom::new(
            self.domain_restriction(&self.color_classes[j]),
            self.group.clone(),
            matrix,
        )
    }

    /// Coordinate `j` of an image tuple in `G^m`.
    pub fn coordinate<'a>(&self, x: &'a GroupElement, j: usize) -> &'a [u64] {
        &x[j * self.stride..(j + 1) * self.stride]
    }

    /// Projection of a domain tuple to the flat coordinates of class `j`.
    pub fn project_to_class(&self, v: &GroupElement, j: usize) -> GroupElement {
        self.flat_indices(&self.color_classes[j])
            .into_iter()
            .map(|i| v[i])
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub pass: bool,
    pub witness: Option<String>,
}

impl ConditionReport {
    fn ok() -> Self {
        ConditionReport {
            pass: true,
            witness: None,
        }
    }
    fn fail(w: String) -> Self {
        ConditionReport {
            pass: false,
            witness: Some(w),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub cond_i: ConditionReport,
    pub cond_ii: ConditionReport,
    pub cond_iii: ConditionReport,
    pub cond_iii_prime_samples: usize,
    pub cond_iii_prime_failures: usize,
    pub cond_iii_prime_witness: Option<String>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.cond_i.pass
            && self.cond_ii.pass
            && self.cond_iii.pass
            && self.cond_iii_prime_failures == 0
    }
}

/// Exact verification of conditions (i)-(iii) plus randomized witnessed
/// sampling of the equivalent condition (iii').
///
/// Conditions (ii) and (iii) are subgroup equalities; since the action is
/// diagonal across the cyclic factors of `G`, they hold on `G` iff they
/// hold on each cyclic factor, which is how they are checked.
pub fn verify_representation(
    rep: &Representation,
    m: &IntMatrix,
    g: &FiniteAbelianGroup,
) -> Result<VerifyReport, crate::error::GroupError> {
    verify_with_samples(rep, m, g, 6, 0x5eed)
}

pub fn verify_with_samples(
    rep: &Representation,
    m: &IntMatrix,
    g: &FiniteAbelianGroup,
    samples: usize,
    seed: u64,
) -> Result<VerifyReport, crate::error::GroupError> {
    // condition (i): distinct k-sized classes containing the row supports
    let cond_i = check_condition_i(rep);

    // conditions (ii) and (iii), per distinct cyclic factor
    let mut cond_ii = ConditionReport::ok();
    let mut cond_iii = ConditionReport::ok();
    let mut factors: Vec<u64> = g.moduli().to_vec();
    factors.sort();
    factors.dedup();
    for &n in &factors {
        let gn = FiniteAbelianGroup::cyclic(n);
        let w = kernel_parametrization(m, &gn)?;
        let inst = instantiate(rep, &gn);
        if cond_ii.pass {
            let image = inst.hom.image();
            let kernel_subgroup = matrix_action_hom(&w, &gn).image();
            if image != kernel_subgroup {
                cond_ii = ConditionReport::fail(format!(
                    "image(Psi) != ker M on Z_{n}: |image| = {}, |ker| = {}",
                    image.order(),
                    kernel_subgroup.order()
                ));
            }
        }
        if cond_iii.pass {
            let ker_psi = inst.hom.kernel();
            for j in 0..inst.m {
                let class = inst.color_classes[j].clone();
                let target = inst.domain_restriction(&class);
                let lhs = ker_psi.project(&inst.flat_indices(&class), &target);
                let rhs = inst.row_hom(j).kernel();
                if lhs != rhs {
                    cond_iii = ConditionReport::fail(format!(
                        "p_C{}(ker Psi) != ker psi_C{} on Z_{n}: orders {} vs {}",
                        j + 1,
                        j + 1,
                        lhs.order(),
                        rhs.order()
                    ));
                    break;
                }
            }
        }
    }

    // condition (iii'): witnessed sampling on the full group
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    let mut witness = None;
    let mut taken = 0usize;
    if samples > 0 {
        let w = kernel_parametrization(m, g)?;
        let inst = instantiate(rep, g);
        let param = matrix_action_hom(&w, g);
        for _ in 0..samples {
            taken += 1;
            let y = param.domain().random_element(&mut rng);
            let x = param.apply(&y);
            let j = rng.gen_range(0..inst.m);
            match sample_iii_prime(&inst, j, &x, &mut rng) {
                Ok(()) => {}
                Err(msg) => {
                    failures += 1;
                    if witness.is_none() {
                        witness = Some(msg);
                    }
                }
            }
        }
    }

    Ok(VerifyReport {
        cond_i,
        cond_ii,
        cond_iii,
        cond_iii_prime_samples: taken,
        cond_iii_prime_failures: failures,
        cond_iii_prime_witness: witness,
    })
}

fn check_condition_i(rep: &Representation) -> ConditionReport {
    let classes = rep.color_classes();
    let psi = rep.psi();
    let k = rep.k();
    for (j, class) in classes.iter().enumerate() {
        if class.len() != k {
            return ConditionReport::fail(format!(
                "class {} has size {} != k = {}",
                j + 1,
                class.len(),
                k
            ));
        }
        for c in 0..psi.cols() {
            if !psi[(j, c)].is_zero() && !class.contains(&c) {
                return ConditionReport::fail(format!(
                    "row {} has support at column {} outside its class",
                    j + 1,
                    c + 1
                ));
            }
        }
        for (j2, other) in classes.iter().enumerate().skip(j + 1) {
            if class == other {
                return ConditionReport::fail(format!(
                    "classes {} and {} coincide",
                    j + 1,
                    j2 + 1
                ));
            }
        }
    }
    ConditionReport::ok()
}

fn sample_iii_prime(
    inst: &Instantiation,
    j: usize,
    x: &GroupElement,
    rng: &mut ChaCha8Rng,
) -> Result<(), String> {
    let row = inst.row_hom(j);
    let xj: GroupElement = inst.coordinate(x, j).to_vec();
    // a random g' with psi_{C_j}(g') = x_j: try a random partial fixing
    // first, fall back to the unconstrained solve
    let dom = row.domain().clone();
    let mut fixed: Vec<(usize, u64)> = Vec::new();
    for i in 0..dom.num_factors() {
        if rng.gen_bool(0.5) {
            fixed.push((i, rng.gen_range(0..dom.moduli()[i])));
        }
    }
    let g_prime = row
        .solve(&xj, &fixed)
        .or_else(|| row.solve(&xj, &[]))
        .ok_or_else(|| format!("no g' with psi_C{}(g') = x_{}", j + 1, j + 1))?;
    // now a full witness with the class coordinates pinned
    let flat = inst.flat_indices(&inst.color_classes[j]);
    let pins: Vec<(usize, u64)> = flat.iter().copied().zip(g_prime.iter().copied()).collect();
    let g_full = inst
        .hom
        .solve(x, &pins)
        .ok_or_else(|| format!("no witness g with Psi(g) = x and p_C{}(g) = g'", j + 1))?;
    if &inst.hom.apply(&g_full) != x {
        return Err("witness failed recheck Psi(g) = x".into());
    }
    if inst.project_to_class(&g_full, j) != g_prime {
        return Err("witness failed recheck p_C(g) = g'".into());
    }
    Ok(())
}

/// Witness production for condition (iii'): given `x` in the kernel and an
/// edge tuple `g'` with `psi_{C_j}(g') = x_j`, produce `g` with `Psi(g) = x`
/// and `p_{C_j}(g) = g'`.
pub fn lift(
    inst: &Instantiation,
    m: &IntMatrix,
    j: usize,
    g_prime: &GroupElement,
    x: &GroupElement,
) -> Result<GroupElement, LiftError> {
    let action = matrix_action_hom(m, &inst.group);
    let zero = action.codomain().zero();
    if action.apply(x) != zero {
        return Err(LiftError::PreconditionViolated(
            "x is not in ker_G M".into(),
        ));
    }
    let row = inst.row_hom(j);
    let xj: GroupElement = inst.coordinate(x, j).to_vec();
    if row.apply(g_prime) != xj {
        return Err(LiftError::PreconditionViolated(format!(
            "psi_C{}(g') != x_{}",
            j + 1,
            j + 1
        )));
    }
    let flat = inst.flat_indices(&inst.color_classes[j]);
    let pins: Vec<(usize, u64)> = flat.iter().copied().zip(g_prime.iter().copied()).collect();
    let g_full = inst.hom.solve(x, &pins).ok_or_else(|| {
        LiftError::InternalInconsistency(format!(
            "no witness for j = {}, x = {:?} despite verified representation",
            j + 1,
            x
        ))
    })?;
    debug_assert_eq!(&inst.hom.apply(&g_full), x);
    debug_assert_eq!(inst.project_to_class(&g_full, j), *g_prime);
    Ok(g_full)
}

/// The battery of small groups used throughout testing and verification.
pub fn default_battery() -> Vec<FiniteAbelianGroup> {
    let mut out: Vec<FiniteAbelianGroup> = (2..=9).map(FiniteAbelianGroup::cyclic).collect();
    out.push(FiniteAbelianGroup::new(vec![2, 2]));
    out.push(FiniteAbelianGroup::new(vec![2, 4]));
    out.push(FiniteAbelianGroup::new(vec![2, 3, 3]));
    out
}
