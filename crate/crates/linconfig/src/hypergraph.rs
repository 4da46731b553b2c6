//! Cayley hypergraphs of linear systems: coset-structured edge sets,
//! solution and copy counting, kernel averaging, and removal-set
//! symmetrization. All densities are exact rationals.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{GroupError, HypergraphError};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::hom::{kernel_parametrization, kernel_projection_subgroup, matrix_action_hom};
use crate::matrix::IntMatrix;
use crate::representation::{instantiate, verify_representation, Instantiation, Representation};
use crate::subgroup::Subgroup;

pub type Rat = BigRational;

fn rat(num: BigUint, den: BigUint) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// The finite template `F`: vertex classes `[t]`, edges the color classes.
#[derive(Clone, Debug, PartialEq)]
pub struct TemplateHypergraph {
    pub t: usize,
    pub edges: Vec<Vec<usize>>,
}

impl TemplateHypergraph {
    pub fn of(rep: &Representation) -> TemplateHypergraph {
        TemplateHypergraph {
            t: rep.t(),
            edges: rep.color_classes().to_vec(),
        }
    }
}

/// A Cayley `(t, m, k)`-graph: vertex classes are the column domains of a
/// verified representation, and the color-`j` edges are
/// `psi_{C_j}^{-1}(A_j)`, a union of cosets of `K_j = ker psi_{C_j}`.
pub struct CayleyHypergraph {
    pub inst: Instantiation,
    pub matrix: IntMatrix,
    /// Kernel parametrization of the represented system.
    pub w: IntMatrix,
    /// Generators `A_j`, already intersected with `G^(j) = p_j(ker_G M)`.
    pub generators: Vec<BTreeSet<GroupElement>>,
    /// Projected subgroups `G^(j)`.
    pub coordinate_subgroups: Vec<Subgroup>,
    /// Row kernels `K_j` inside the class domains.
    pub row_kernels: Vec<Subgroup>,
}

/// Builds the Cayley hypergraph after verifying the representation on `g`.
pub fn build_cayley(
    rep: &Representation,
    m: &IntMatrix,
    g: &FiniteAbelianGroup,
    sets: &[Vec<GroupElement>],
) -> Result<CayleyHypergraph, HypergraphError> {
    let report = verify_representation(rep, m, g)?;
    if !report.all_pass() {
        return Err(HypergraphError::UnverifiedRepresentation);
    }
    let cols = m.cols();
    assert_eq!(sets.len(), cols, "one generator set per color class");
    let w = kernel_parametrization(m, g)?;
    let inst = instantiate(rep, g);
    let mut generators = Vec::with_capacity(cols);
    let mut coordinate_subgroups = Vec::with_capacity(cols);
    for (j, set) in sets.iter().enumerate() {
        let gj = kernel_projection_subgroup(&w, g, j);
        let filtered: BTreeSet<GroupElement> = set
            .iter()
            .filter(|x| gj.contains(x))
            .cloned()
            .collect();
        generators.push(filtered);
        coordinate_subgroups.push(gj);
    }
    let row_kernels = (0..cols).map(|j| inst.row_hom(j).kernel()).collect();
    Ok(CayleyHypergraph {
        inst,
        matrix: m.clone(),
        w,
        generators,
        coordinate_subgroups,
        row_kernels,
    })
}

impl CayleyHypergraph {
    pub fn colors(&self) -> usize {
        self.generators.len()
    }

    /// Edge predicate: `v` (flat tuple over the class domain) is an edge of
    /// color `j` iff `psi_{C_j}(v)` lands in `A_j`.
    pub fn is_edge(&self, j: usize, v: &GroupElement) -> bool {
        let value = self.inst.row_hom(j).apply(v);
        self.generators[j].contains(&value)
    }

    /// The class-`j` vertex product space.
    pub fn class_domain(&self, j: usize) -> FiniteAbelianGroup {
        self.inst.domain_restriction(&self.inst.color_classes[j])
    }

    /// Explicit edge list of color `j` (enumerates the class domain).
    pub fn edges(&self, j: usize) -> Vec<GroupElement> {
        self.class_domain(j)
            .elements()
            .filter(|v| self.is_edge(j, v))
            .collect()
    }

    /// `|E_j|` without enumeration: generators times the kernel fibers.
    pub fn edge_count(&self, j: usize) -> BigUint {
        BigUint::from(self.generators[j].len()) * self.row_kernels[j].order()
    }
}

/// Counts kernel solutions with `x_j` constrained to `A_j`.
///
/// Enumerates the parametrization domain `G^{m-rank}`; the density is the
/// count over `|G|^{m-rank}`, the normalized counting measure of
/// `prod A_j  cap ker_G M`.
pub fn solution_count(
    m: &IntMatrix,
    g: &FiniteAbelianGroup,
    sets: &[Vec<GroupElement>],
) -> Result<(BigUint, Rat), GroupError> {
    assert_eq!(sets.len(), m.cols());
    let w = kernel_parametrization(m, g)?;
    let lookup: Vec<BTreeSet<GroupElement>> = sets
        .iter()
        .map(|s| s.iter().cloned().collect())
        .collect();
    let param = matrix_action_hom(&w, g);
    let s = g.num_factors();
    let mut count = BigUint::zero();
    if w.cols() == 0 {
        // trivial kernel: the zero tuple is the only candidate
        let zero_ok = (0..m.cols()).all(|j| lookup[j].contains(&g.zero()));
        if zero_ok {
            count += 1u32;
        }
        return Ok((count.clone(), rat(count, BigUint::one())));
    }
    for y in param.domain().elements() {
        let x = param.apply(&y);
        let hit = (0..m.cols()).all(|j| lookup[j].contains(&x[j * s..(j + 1) * s].to_vec()));
        if hit {
            count += 1u32;
        }
    }
    let denom = param.domain().order();
    Ok((count.clone(), rat(count, denom)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopyCountMode {
    ExactBruteForce,
    ViaKernel,
}

/// Counts template copies in `H` over the full vertex product, and the
/// homomorphism density `hd(F, H)`.
///
/// `ViaKernel` uses the fibration over the solution set:
/// `copies = |ker Psi| * solution_count`. `ExactBruteForce` enumerates the
/// whole product (budget-gated); the two agree whenever both run.
pub fn copy_count(
    h: &CayleyHypergraph,
    mode: CopyCountMode,
    budget: u64,
) -> Result<(BigUint, Rat), HypergraphError> {
    let total = h.inst.domain().order();
    match mode {
        CopyCountMode::ViaKernel => {
            let sets: Vec<Vec<GroupElement>> = h
                .generators
                .iter()
                .map(|s| s.iter().cloned().collect())
                .collect();
            let (count, _) = solution_count(&h.matrix, &h.inst.group, &sets)?;
            let copies = h.inst.hom.kernel().order() * count;
            let hd = rat(copies.clone(), total);
            Ok((copies, hd))
        }
        CopyCountMode::ExactBruteForce => {
            if total > BigUint::from(budget) {
                return Err(HypergraphError::BudgetExceeded {
                    size: total.to_string(),
                    budget: budget.to_string(),
                });
            }
            let mut copies = BigUint::zero();
            for v in h.inst.domain().elements() {
                let all = (0..h.colors()).all(|j| {
                    let proj = h.inst.project_to_class(&v, j);
                    h.is_edge(j, &proj)
                });
                if all {
                    copies += 1u32;
                }
            }
            let hd = rat(copies.clone(), total);
            Ok((copies, hd))
        }
    }
}

/// Kernel-averaging of the indicator of `r_set` inside color `j`:
/// `h_j(v) = |{g in K_j : v - g in r_set}| / |K_j|`, exact and constant on
/// `K_j`-cosets. Values are returned sparsely (zero off the support).
pub fn average_operator(
    h: &CayleyHypergraph,
    j: usize,
    r_set: &BTreeSet<GroupElement>,
    budget: u64,
) -> Result<BTreeMap<GroupElement, Rat>, HypergraphError> {
    let domain = h.class_domain(j);
    if domain.order() > BigUint::from(budget) {
        return Err(HypergraphError::BudgetExceeded {
            size: domain.order().to_string(),
            budget: budget.to_string(),
        });
    }
    for v in r_set {
        if !h.is_edge(j, v) {
            return Err(HypergraphError::NotASubsetOfEdges(j + 1));
        }
    }
    let kernel: Vec<GroupElement> = h.row_kernels[j].iter().collect();
    let kernel_order = BigUint::from(kernel.len());
    let mut counts: BTreeMap<GroupElement, u64> = BTreeMap::new();
    for r in r_set {
        for g in &kernel {
            *counts.entry(domain.add(r, g)).or_insert(0) += 1;
        }
    }
    Ok(counts
        .into_iter()
        .map(|(v, c)| (v, rat(BigUint::from(c), kernel_order.clone())))
        .collect())
}

/// Output of [`symmetrize_removal`]: the averaged functions, the threshold
/// sets, and the exact measures of both families.
pub struct SymmetrizationResult {
    pub averaged: Vec<BTreeMap<GroupElement, Rat>>,
    pub s_sets: Vec<BTreeSet<GroupElement>>,
    pub r_measures: Vec<Rat>,
    pub s_measures: Vec<Rat>,
}

/// Symmetrizes removal sets: `S_j = { v : h_j(v) > 1/(2m) }` with
/// `h_j` the kernel average of `1_{R_j}`. Strict inequality, exact
/// comparison. Each `S_j` is a union of `K_j`-cosets of measure at most
/// `2m * measure(R_j)`.
pub fn symmetrize_removal(
    h: &CayleyHypergraph,
    removal: &[BTreeSet<GroupElement>],
    budget: u64,
) -> Result<SymmetrizationResult, HypergraphError> {
    let m = h.colors();
    assert_eq!(removal.len(), m);
    let threshold = Rat::new(BigInt::one(), BigInt::from(2 * m as i64));
    let mut averaged = Vec::with_capacity(m);
    let mut s_sets = Vec::with_capacity(m);
    let mut r_measures = Vec::with_capacity(m);
    let mut s_measures = Vec::with_capacity(m);
    for j in 0..m {
        let avg = average_operator(h, j, &removal[j], budget)?;
        let domain_order = h.class_domain(j).order();
        let s_j: BTreeSet<GroupElement> = avg
            .iter()
            .filter(|(_, value)| **value > threshold)
            .map(|(v, _)| v.clone())
            .collect();
        let r_measure = rat(BigUint::from(removal[j].len()), domain_order.clone());
        let s_measure = rat(BigUint::from(s_j.len()), domain_order);
        let bound = Rat::from(BigInt::from(2 * m as i64)) * &r_measure;
        assert!(
            s_measure <= bound,
            "Markov bound violated for color {}",
            j + 1
        );
        averaged.push(avg);
        s_sets.push(s_j);
        r_measures.push(r_measure);
        s_measures.push(s_measure);
    }
    Ok(SymmetrizationResult {
        averaged,
        s_sets,
        r_measures,
        s_measures,
    })
}

/// Whether removing `removed[j]` from each edge set leaves no copy of the
/// template. Brute force over the vertex product, budget-gated.
pub fn is_f_free_after_removal(
    h: &CayleyHypergraph,
    removed: &[BTreeSet<GroupElement>],
    budget: u64,
) -> Result<bool, HypergraphError> {
    let total = h.inst.domain().order();
    if total > BigUint::from(budget) {
        return Err(HypergraphError::BudgetExceeded {
            size: total.to_string(),
            budget: budget.to_string(),
        });
    }
    for v in h.inst.domain().elements() {
        let alive = (0..h.colors()).all(|j| {
            let proj = h.inst.project_to_class(&v, j);
            h.is_edge(j, &proj) && !removed[j].contains(&proj)
        });
        if alive {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Removal sets that make `H` template-free: walks every copy and assigns
/// its edge in the currently smallest removal set, skipping copies already
/// killed. Deterministic.
pub fn greedy_removal(
    h: &CayleyHypergraph,
    budget: u64,
) -> Result<Vec<BTreeSet<GroupElement>>, HypergraphError> {
    let total = h.inst.domain().order();
    if total > BigUint::from(budget) {
        return Err(HypergraphError::BudgetExceeded {
            size: total.to_string(),
            budget: budget.to_string(),
        });
    }
    let m = h.colors();
    let mut removal: Vec<BTreeSet<GroupElement>> = vec![BTreeSet::new(); m];
    for v in h.inst.domain().elements() {
        let projections: Vec<GroupElement> =
            (0..m).map(|j| h.inst.project_to_class(&v, j)).collect();
        let is_copy = (0..m).all(|j| h.is_edge(j, &projections[j]));
        if !is_copy {
            continue;
        }
        let killed = (0..m).any(|j| removal[j].contains(&projections[j]));
        if killed {
            continue;
        }
        let target = (0..m).min_by_key(|&j| removal[j].len()).unwrap();
        removal[target].insert(projections[target].clone());
    }
    debug_assert!(is_f_free_after_removal(h, &removal, budget)?);
    Ok(removal)
}

/// Density of `k`-term progressions with elements in `A`:
/// `(1/|G|^2) * #{(x, r) : x + i*r in A for 0 <= i <= k-1}`.
pub fn ap_density(g: &FiniteAbelianGroup, a: &BTreeSet<GroupElement>, k: usize) -> Rat {
    assert!(k >= 2);
    let mut count = BigUint::zero();
    for x in g.elements() {
        for r in g.elements() {
            let mut point = x.clone();
            let mut ok = a.contains(&point);
            if ok {
                for _ in 1..k {
                    point = g.add(&point, &r);
                    if !a.contains(&point) {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                count += 1u32;
            }
        }
    }
    rat(count, g.order() * g.order())
}

/// Convenience for tests and the CLI: all elements of the group.
pub fn full_set(g: &FiniteAbelianGroup) -> Vec<GroupElement> {
    g.elements().collect()
}
