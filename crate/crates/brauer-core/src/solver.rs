//! The linear subduction system and its nullspace.
//!
//! For every node `<w; w1, w2>` and legal generator index `i` there are two
//! linear equations relating subduction coefficients: the action of `g_i`
//! (resp. `e_i`) computed through the big module `[f, λ]` must agree with its
//! action through the split side `[f1, λ1] ⊗ [f2, λ2]`. Stacked, they form
//! the subduction matrix `Ω`; the coefficient vectors are its nullspace, and
//! the nullity is the multiplicity of `[f1, λ1] ⊗ [f2, λ2]` in `[f, λ]`.
//!
//! The production path is a rank-revealing SVD of the stacked system. The
//! structural solutions per layer (bridge kernels, bridge propagation,
//! singlet intertwiners) are implemented as verification passes over a solved
//! basis, not as an alternative solver.

use nalgebra::DMatrix;
use num::Zero;

use crate::error::{Error, Result};
use crate::grid::{Configuration, GridNode, GridSignature, LatticePair, SubductionGrid};
use crate::lattice::PermutationLattice;
use crate::rep::{self, GtModule};
use crate::scalar::Float;
use crate::shape::Shape;
use crate::young::{p_eval, RationalParam};

/// Which generator family a row of `Ω` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    G,
    E,
}

/// Provenance of one row of `Ω`.
#[derive(Debug, Clone, Copy)]
pub struct RowInfo {
    pub node: usize,
    pub i: usize,
    pub kind: GeneratorKind,
}

/// The assembled subduction system for one grid.
#[derive(Debug, Clone)]
pub struct SubductionSystem<T: Float> {
    grid: SubductionGrid,
    module: GtModule<T>,
    module1: GtModule<T>,
    module2: GtModule<T>,
    omega: DMatrix<T>,
    rows: Vec<RowInfo>,
    suppressed_rows: usize,
}

impl<T: Float> SubductionSystem<T> {
    pub fn grid(&self) -> &SubductionGrid {
        &self.grid
    }

    pub fn omega(&self) -> &DMatrix<T> {
        &self.omega
    }

    pub fn rows(&self) -> &[RowInfo] {
        &self.rows
    }

    /// Identically zero equations dropped during assembly.
    pub fn suppressed_rows(&self) -> usize {
        self.suppressed_rows
    }

    pub fn module(&self) -> &GtModule<T> {
        &self.module
    }

    pub fn module1(&self) -> &GtModule<T> {
        &self.module1
    }

    pub fn module2(&self) -> &GtModule<T> {
        &self.module2
    }

    pub fn x(&self) -> &RationalParam {
        self.module.x()
    }
}

/// Orthonormal basis of the numerical nullspace of `Ω`.
#[derive(Debug, Clone)]
pub struct SolutionBasis<T: Float> {
    /// Node-indexed columns, one per multiplicity copy.
    pub vectors: DMatrix<T>,
    pub multiplicity: usize,
    /// All singular values, descending.
    pub singular_values: Vec<T>,
    pub rank_threshold: f64,
    /// A singular value fell within a factor ten of the threshold.
    pub rank_ambiguous: bool,
    /// Max-norm residual `‖Ω v‖` over the returned basis.
    pub max_residual: f64,
}

fn split_index(sig: &GridSignature, i: usize) -> (bool, usize) {
    if i < sig.f1 {
        (true, i)
    } else {
        (false, i - sig.f1)
    }
}

/// Builds `Ω` for a grid from the three generator-matrix modules.
///
/// The modules must match the grid signature and share the parameter `x`;
/// rows whose coefficients contradict the grid's configuration tags abort
/// the assembly.
pub fn assemble<T: Float>(
    grid: &SubductionGrid,
    module: &GtModule<T>,
    module1: &GtModule<T>,
    module2: &GtModule<T>,
) -> Result<SubductionSystem<T>> {
    let sig = grid.signature();
    for (m, f, shape, name) in [
        (module, sig.f, &sig.shape, "module"),
        (module1, sig.f1, &sig.shape1, "module1"),
        (module2, sig.f2, &sig.shape2, "module2"),
    ] {
        if m.f() != f || m.shape() != shape {
            return Err(Error::ModuleMismatch {
                detail: format!(
                    "{name} is [{}, {}], expected [{f}, {shape}]",
                    m.f(),
                    m.shape()
                ),
            });
        }
    }
    if module1.x() != module.x() || module2.x() != module.x() {
        return Err(Error::ModuleMismatch {
            detail: "modules disagree on the parameter x".into(),
        });
    }

    let n = grid.num_nodes();
    let mut data: Vec<Vec<T>> = Vec::new();
    let mut rows: Vec<RowInfo> = Vec::new();
    let mut suppressed = 0usize;

    for layer in grid.layers() {
        let i = layer.i;
        let (first, k) = split_index(sig, i);
        for (a, node) in grid.nodes().iter().enumerate() {
            let config = layer.configurations[a];
            let w_row = module.index_of(&node.w).expect("basis covers grid");
            let w_partners = rep::theta_set(&node.w, i)?;
            let (split_row, split_partners): (usize, Vec<PermutationLattice>) = if first {
                (
                    module1.index_of(&node.pair.w1).expect("basis covers grid"),
                    rep::theta_set(&node.pair.w1, k)?,
                )
            } else {
                (
                    module2.index_of(&node.pair.w2).expect("basis covers grid"),
                    rep::theta_set(&node.pair.w2, k)?,
                )
            };
            for kind in [GeneratorKind::G, GeneratorKind::E] {
                let mut row = vec![T::zero(); n];
                let big = match kind {
                    GeneratorKind::G => module.g(i),
                    GeneratorKind::E => module.e(i),
                };
                let w_flipped = matches!(config, Configuration::HBridge | Configuration::Singlet);
                for u in &w_partners {
                    let coeff = big[(w_row, module.index_of(u).expect("theta set in basis"))];
                    if coeff != T::zero() {
                        if kind == GeneratorKind::E && !w_flipped {
                            return Err(Error::AssemblyInconsistency {
                                detail: format!(
                                    "layer {i}: node {node} is tagged {} but e_{i} acts on {u}",
                                    config.label()
                                ),
                            });
                        }
                        let m = GridNode {
                            w: u.clone(),
                            pair: node.pair.clone(),
                        };
                        row[grid.index_of(&m).expect("coupled node in grid")] += coeff;
                    }
                }
                let pair_flipped =
                    matches!(config, Configuration::VBridge | Configuration::Singlet);
                for v in &split_partners {
                    let coeff = if first {
                        let smat = match kind {
                            GeneratorKind::G => module1.g(k),
                            GeneratorKind::E => module1.e(k),
                        };
                        smat[(module1.index_of(v).expect("theta set in basis"), split_row)]
                    } else {
                        let smat = match kind {
                            GeneratorKind::G => module2.g(k),
                            GeneratorKind::E => module2.e(k),
                        };
                        smat[(module2.index_of(v).expect("theta set in basis"), split_row)]
                    };
                    if coeff != T::zero() {
                        if kind == GeneratorKind::E && !pair_flipped {
                            return Err(Error::AssemblyInconsistency {
                                detail: format!(
                                    "layer {i}: node {node} is tagged {} but the split e acts",
                                    config.label()
                                ),
                            });
                        }
                        let m = if first {
                            GridNode {
                                w: node.w.clone(),
                                pair: LatticePair::new(v.clone(), node.pair.w2.clone()),
                            }
                        } else {
                            GridNode {
                                w: node.w.clone(),
                                pair: LatticePair::new(node.pair.w1.clone(), v.clone()),
                            }
                        };
                        row[grid.index_of(&m).expect("coupled node in grid")] -= coeff;
                    }
                }
                if row.iter().all(|c| *c == T::zero()) {
                    suppressed += 1;
                } else {
                    data.push(row);
                    rows.push(RowInfo { node: a, i, kind });
                }
            }
        }
    }

    let omega = DMatrix::from_fn(data.len(), n, |r, c| data[r][c]);
    Ok(SubductionSystem {
        grid: grid.clone(),
        module: module.clone(),
        module1: module1.clone(),
        module2: module2.clone(),
        omega,
        rows,
        suppressed_rows: suppressed,
    })
}

/// Convenience: build the three modules and assemble in one step.
pub fn assemble_for<T: Float>(
    grid: &SubductionGrid,
    x: &RationalParam,
) -> Result<SubductionSystem<T>> {
    let sig = grid.signature();
    let module = GtModule::build(sig.f, &sig.shape, x)?;
    let module1 = GtModule::build(sig.f1, &sig.shape1, x)?;
    let module2 = GtModule::build(sig.f2, &sig.shape2, x)?;
    assemble(grid, &module, &module1, &module2)
}

/// Rank-revealing nullspace of the assembled system. Singular values at or
/// below `tol_rank * σ_max` count as zero; a value within a factor ten of
/// that threshold flags the rank decision as ambiguous without failing.
pub fn solve<T: Float>(system: &SubductionSystem<T>, tol_rank: f64) -> Result<SolutionBasis<T>> {
    let n = system.grid.num_nodes();
    let m = system.omega.nrows();
    if m == 0 {
        return Ok(SolutionBasis {
            vectors: DMatrix::identity(n, n),
            multiplicity: n,
            singular_values: Vec::new(),
            rank_threshold: 0.0,
            rank_ambiguous: false,
            max_residual: 0.0,
        });
    }
    // pad with zero rows so the factorization exposes all n right-singular
    // directions
    let padded = if m < n {
        let mut p = DMatrix::<T>::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(&system.omega);
        p
    } else {
        system.omega.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let singular_values: Vec<T> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let sigma_max = singular_values
        .first()
        .map(|s| s.to_double())
        .unwrap_or(0.0);
    let threshold = sigma_max * tol_rank;
    let null: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&k| svd.singular_values[k].to_double() <= threshold)
        .collect();
    let rank_ambiguous = singular_values.iter().any(|s| {
        let v = s.to_double();
        v > threshold / 10.0 && v < threshold * 10.0 && v > 0.0
    });
    let mu = null.len();
    let mut vectors = DMatrix::<T>::zeros(n, mu);
    for (col, &k) in null.iter().enumerate() {
        for c in 0..n {
            vectors[(c, col)] = v_t[(k, c)];
        }
    }
    let mut max_residual = 0.0f64;
    for col in 0..mu {
        let v = vectors.column(col);
        let r = &system.omega * v;
        max_residual = r
            .iter()
            .fold(max_residual, |acc, e| acc.max(e.to_double().abs()));
    }
    Ok(SolutionBasis {
        vectors,
        multiplicity: mu,
        singular_values,
        rank_threshold: threshold,
        rank_ambiguous,
        max_residual,
    })
}

/// Littlewood-Richardson coefficient `c^{λ}_{λ1, λ2}` by brute-force
/// enumeration of semistandard skew fillings with the reverse-reading-word
/// ballot condition. Independent multiplicity oracle for grids where all
/// three diagrams have full box count.
pub fn lr_coefficient(shape: &Shape, shape1: &Shape, shape2: &Shape) -> u64 {
    if shape.boxes() != shape1.boxes() + shape2.boxes() {
        return 0;
    }
    if !shape.contains(shape1) {
        return 0;
    }
    let rows = shape.num_rows();
    let lam: Vec<usize> = (1..=rows).map(|r| shape.row_len(r) as usize).collect();
    let mu: Vec<usize> = (1..=rows).map(|r| shape1.row_len(r) as usize).collect();
    let weight: Vec<usize> = (1..=shape2.num_rows())
        .map(|r| shape2.row_len(r) as usize)
        .collect();
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|r| (mu[r]..lam[r]).map(move |c| (r, c)))
        .collect();
    if cells.is_empty() {
        return u64::from(shape2.is_empty());
    }
    let maxv = weight.len();
    let mut fill = vec![vec![0usize; lam.iter().copied().max().unwrap_or(0)]; rows];
    let mut counts = vec![0usize; maxv + 1];
    let mut found = 0u64;

    fn ballot_ok(fill: &[Vec<usize>], lam: &[usize], mu: &[usize], maxv: usize) -> bool {
        // reverse reading word: right to left along each row, top to bottom
        let mut seen = vec![0usize; maxv + 1];
        for r in 0..lam.len() {
            for c in (mu[r]..lam[r]).rev() {
                let v = fill[r][c];
                seen[v] += 1;
                if v > 1 && seen[v] > seen[v - 1] {
                    return false;
                }
            }
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        lam: &[usize],
        mu: &[usize],
        weight: &[usize],
        maxv: usize,
        fill: &mut Vec<Vec<usize>>,
        counts: &mut Vec<usize>,
        found: &mut u64,
    ) {
        if k == cells.len() {
            if (1..=maxv).all(|v| counts[v] == weight[v - 1])
                && ballot_ok(fill, lam, mu, maxv)
            {
                *found += 1;
            }
            return;
        }
        let (r, c) = cells[k];
        for v in 1..=maxv {
            if counts[v] >= weight[v - 1] {
                continue;
            }
            // weakly increasing along rows
            if c > mu[r] && fill[r][c - 1] > v {
                continue;
            }
            // strictly increasing down columns, within the skew part
            if r > 0 && c >= mu[r - 1] && fill[r - 1][c] >= v {
                continue;
            }
            fill[r][c] = v;
            counts[v] += 1;
            rec(k + 1, cells, lam, mu, weight, maxv, fill, counts, found);
            counts[v] -= 1;
            fill[r][c] = 0;
        }
    }

    rec(
        0, &cells, &lam, &mu, &weight, maxv, &mut fill, &mut counts, &mut found,
    );
    found
}

/// One `(λ1, λ2)` term of the completeness identity.
#[derive(Debug, Clone)]
pub struct CompletenessRow {
    pub shape1: Shape,
    pub shape2: Shape,
    pub multiplicity: usize,
    pub dim1: u64,
    pub dim2: u64,
}

/// Dimension bookkeeping for a full `(f, λ) ↓ (f1, f2)` sweep:
/// `Σ μ(λ1, λ2) · dim1 · dim2` must equal `dim [f, λ]`.
#[derive(Debug, Clone)]
pub struct CompletenessReport {
    pub rows: Vec<CompletenessRow>,
    pub total: u64,
    pub expected: u64,
}

impl CompletenessReport {
    pub fn passes(&self) -> bool {
        self.total == self.expected
    }
}

pub fn completeness_check<T: Float>(
    f: usize,
    shape: &Shape,
    f1: usize,
    f2: usize,
    x: &RationalParam,
    tol_rank: f64,
) -> Result<CompletenessReport> {
    let module = GtModule::<T>::build(f, shape, x)?;
    let modules1: Vec<GtModule<T>> = Shape::upsilon(f1)
        .iter()
        .map(|s| GtModule::build(f1, s, x))
        .collect::<Result<_>>()?;
    let modules2: Vec<GtModule<T>> = Shape::upsilon(f2)
        .iter()
        .map(|s| GtModule::build(f2, s, x))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut total = 0u64;
    for m1 in &modules1 {
        for m2 in &modules2 {
            let grid = SubductionGrid::build(GridSignature {
                f,
                shape: shape.clone(),
                f1,
                f2,
                shape1: m1.shape().clone(),
                shape2: m2.shape().clone(),
            })?;
            let system = assemble(&grid, &module, m1, m2)?;
            let solution = solve(&system, tol_rank)?;
            let row = CompletenessRow {
                shape1: m1.shape().clone(),
                shape2: m2.shape().clone(),
                multiplicity: solution.multiplicity,
                dim1: m1.dim() as u64,
                dim2: m2.dim() as u64,
            };
            total += row.multiplicity as u64 * row.dim1 * row.dim2;
            rows.push(row);
        }
    }
    Ok(CompletenessReport {
        rows,
        total,
        expected: PermutationLattice::dimension(f, shape),
    })
}

/// Residuals of the bridge kernel conditions: on every node whose `w` side
/// (resp. pair side) is flipped at `i` while the other side is not, the
/// solution restricted to the flip class is orthogonal to the weight vector
/// `(sqrt(P_{Y(u^(i))}(x)))_u`.
#[derive(Debug, Clone, Default)]
pub struct BridgeKernelReport {
    pub max_residual: f64,
    pub checks: usize,
}

pub fn verify_bridge_kernels<T: Float>(
    system: &SubductionSystem<T>,
    basis: &SolutionBasis<T>,
) -> Result<BridgeKernelReport> {
    let grid = &system.grid;
    let sig = grid.signature();
    let x = system.x();
    let mut report = BridgeKernelReport::default();
    for layer in grid.layers() {
        let i = layer.i;
        let (first, k) = split_index(sig, i);
        for (a, node) in grid.nodes().iter().enumerate() {
            let config = layer.configurations[a];
            let terms: Vec<(usize, f64)> = match config {
                Configuration::HBridge => rep::theta_bar_set(&node.w, i)?
                    .into_iter()
                    .map(|u| {
                        let psi = flip_weight(&u, i, x);
                        let m = GridNode {
                            w: u,
                            pair: node.pair.clone(),
                        };
                        (grid.index_of(&m).expect("coupled node"), psi)
                    })
                    .collect(),
                Configuration::VBridge => {
                    if first {
                        rep::theta_bar_set(&node.pair.w1, k)?
                            .into_iter()
                            .map(|v| {
                                let psi = flip_weight(&v, k, x);
                                let m = GridNode {
                                    w: node.w.clone(),
                                    pair: LatticePair::new(v, node.pair.w2.clone()),
                                };
                                (grid.index_of(&m).expect("coupled node"), psi)
                            })
                            .collect()
                    } else {
                        rep::theta_bar_set(&node.pair.w2, k)?
                            .into_iter()
                            .map(|v| {
                                let psi = flip_weight(&v, k, x);
                                let m = GridNode {
                                    w: node.w.clone(),
                                    pair: LatticePair::new(node.pair.w1.clone(), v),
                                };
                                (grid.index_of(&m).expect("coupled node"), psi)
                            })
                            .collect()
                    }
                }
                _ => continue,
            };
            for col in 0..basis.multiplicity {
                let sum: f64 = terms
                    .iter()
                    .map(|&(idx, psi)| psi * basis.vectors[(idx, col)].to_double())
                    .sum();
                report.max_residual = report.max_residual.max(sum.abs());
            }
            report.checks += 1;
        }
    }
    Ok(report)
}

/// `sqrt(P_{Y(u^(i))}(x))` for a flipped lattice `u`.
fn flip_weight(u: &PermutationLattice, i: usize, x: &RationalParam) -> f64 {
    let nu = u.prefix(i).expect("index checked").shape().clone();
    crate::scalar::rational_to_f64(&p_eval(&nu, x)).sqrt()
}

/// Entry `<u| g_i |v>` of the flip-class action computed from the closed
/// formulas (`P` ratios and weight gaps), independent of the stored module
/// matrices. `None` at a removable-zero diagonal, which the verification
/// passes skip.
fn flip_g_entry(
    u: &PermutationLattice,
    v: &PermutationLattice,
    i: usize,
    x: &RationalParam,
) -> Result<Option<f64>> {
    let mu = u.prefix(i - 1)?.shape().clone();
    let p_mu = p_eval(&mu, x);
    let gap = rep::weight_gap(u, v, i, x)?;
    if gap.is_zero() {
        return Ok(None);
    }
    let p_nu_u = p_eval(u.prefix(i)?.shape(), x);
    if u == v {
        let value = (&p_mu - &p_nu_u) / (gap * &p_mu);
        Ok(Some(crate::scalar::rational_to_f64(&value)))
    } else {
        let p_nu_v = p_eval(v.prefix(i)?.shape(), x);
        let radicand = crate::scalar::rational_to_f64(&(p_nu_u * p_nu_v));
        let denom = crate::scalar::rational_to_f64(&(gap * p_mu));
        Ok(Some(-radicand.sqrt() / denom))
    }
}

/// `1/d` and `sqrt(1 - 1/d^2)` for a crossing-type lattice at `i`.
fn crossing_coeffs(
    w: &PermutationLattice,
    i: usize,
    x: &RationalParam,
) -> Result<(f64, f64)> {
    let d = rep::weight_gap(w, w, i, x)?;
    let d = crate::scalar::rational_to_f64(&d);
    let beta_sq = 1.0 - 1.0 / (d * d);
    Ok((1.0 / d, if beta_sq > 0.0 { beta_sq.sqrt() } else { 0.0 }))
}

/// Swap action of `g_i` on words: exchange positions `i, i+1`; fixed point
/// when the exchanged word is not a lattice.
pub fn g_word_action(w: &PermutationLattice, i: usize) -> PermutationLattice {
    let mut elements = w.elements().to_vec();
    elements.swap(i - 1, i);
    PermutationLattice::from_elements(elements).unwrap_or_else(|_| w.clone())
}

fn g_pair_action(pair: &LatticePair, i: usize, f1: usize) -> LatticePair {
    if i < f1 {
        LatticePair::new(g_word_action(&pair.w1, i), pair.w2.clone())
    } else {
        LatticePair::new(pair.w1.clone(), g_word_action(&pair.w2, i - f1))
    }
}

/// Deviations of the layer recovery formulas: coefficients at the swap image
/// of a node recomputed from coefficients on the kernel side.
#[derive(Debug, Clone, Default)]
pub struct PropagationReport {
    pub max_deviation: f64,
    pub checks: usize,
    pub skipped: usize,
}

pub fn verify_bridge_propagation<T: Float>(
    system: &SubductionSystem<T>,
    basis: &SolutionBasis<T>,
) -> Result<PropagationReport> {
    let grid = &system.grid;
    let sig = grid.signature();
    let x = system.x();
    let mut report = PropagationReport::default();
    let value = |node: &GridNode, col: usize| -> f64 {
        basis.vectors[(grid.index_of(node).expect("node in grid"), col)].to_double()
    };
    for layer in grid.layers() {
        let i = layer.i;
        let (first, k) = split_index(sig, i);
        let pair_lattice = |pair: &LatticePair| -> PermutationLattice {
            if first {
                pair.w1.clone()
            } else {
                pair.w2.clone()
            }
        };
        for (a, node) in grid.nodes().iter().enumerate() {
            let config = layer.configurations[a];
            let w_swap = g_word_action(&node.w, i);
            let pair_swap = g_pair_action(&node.pair, i, sig.f1);
            match config {
                Configuration::Crossing => {
                    if w_swap == node.w {
                        report.skipped += 1;
                        continue;
                    }
                    let (dw_inv, beta_w) = crossing_coeffs(&node.w, i, x)?;
                    let (dp_inv, beta_p) = crossing_coeffs(&pair_lattice(&node.pair), k, x)?;
                    if beta_w == 0.0 {
                        report.skipped += 1;
                        continue;
                    }
                    let target = GridNode {
                        w: w_swap,
                        pair: node.pair.clone(),
                    };
                    for col in 0..basis.multiplicity {
                        let mut rhs = (dp_inv - dw_inv) * value(node, col);
                        if pair_swap != node.pair {
                            rhs += beta_p
                                * value(
                                    &GridNode {
                                        w: node.w.clone(),
                                        pair: pair_swap.clone(),
                                    },
                                    col,
                                );
                        }
                        let recovered = rhs / beta_w;
                        report.max_deviation = report
                            .max_deviation
                            .max((recovered - value(&target, col)).abs());
                    }
                    report.checks += 1;
                }
                Configuration::HBridge => {
                    if pair_swap == node.pair {
                        report.skipped += 1;
                        continue;
                    }
                    let (dp_inv, beta_p) = crossing_coeffs(&pair_lattice(&node.pair), k, x)?;
                    if beta_p == 0.0 {
                        report.skipped += 1;
                        continue;
                    }
                    let mut kernel_terms = Vec::new();
                    let mut removable = false;
                    for u in rep::theta_bar_set(&node.w, i)? {
                        match flip_g_entry(&node.w, &u, i, x)? {
                            Some(coeff) => kernel_terms.push((
                                GridNode {
                                    w: u,
                                    pair: node.pair.clone(),
                                },
                                coeff,
                            )),
                            None => removable = true,
                        }
                    }
                    if removable {
                        report.skipped += 1;
                        continue;
                    }
                    let target = GridNode {
                        w: node.w.clone(),
                        pair: pair_swap.clone(),
                    };
                    for col in 0..basis.multiplicity {
                        let lhs: f64 = kernel_terms
                            .iter()
                            .map(|(m, coeff)| coeff * value(m, col))
                            .sum();
                        let recovered = (lhs - dp_inv * value(node, col)) / beta_p;
                        report.max_deviation = report
                            .max_deviation
                            .max((recovered - value(&target, col)).abs());
                    }
                    report.checks += 1;
                }
                Configuration::VBridge => {
                    if w_swap == node.w {
                        report.skipped += 1;
                        continue;
                    }
                    let (dw_inv, beta_w) = crossing_coeffs(&node.w, i, x)?;
                    if beta_w == 0.0 {
                        report.skipped += 1;
                        continue;
                    }
                    let flips = if first {
                        rep::theta_bar_set(&node.pair.w1, k)?
                            .into_iter()
                            .map(|v| LatticePair::new(v, node.pair.w2.clone()))
                            .collect::<Vec<_>>()
                    } else {
                        rep::theta_bar_set(&node.pair.w2, k)?
                            .into_iter()
                            .map(|v| LatticePair::new(node.pair.w1.clone(), v))
                            .collect::<Vec<_>>()
                    };
                    let mut kernel_terms = Vec::new();
                    let mut removable = false;
                    for p in flips {
                        let entry = flip_g_entry(
                            &pair_lattice(&node.pair),
                            &pair_lattice(&p),
                            k,
                            x,
                        )?;
                        match entry {
                            Some(coeff) => kernel_terms.push((
                                GridNode {
                                    w: node.w.clone(),
                                    pair: p,
                                },
                                coeff,
                            )),
                            None => removable = true,
                        }
                    }
                    if removable {
                        report.skipped += 1;
                        continue;
                    }
                    let target = GridNode {
                        w: w_swap.clone(),
                        pair: node.pair.clone(),
                    };
                    for col in 0..basis.multiplicity {
                        let rhs: f64 = kernel_terms
                            .iter()
                            .map(|(m, coeff)| coeff * value(m, col))
                            .sum();
                        let recovered = (rhs - dw_inv * value(node, col)) / beta_w;
                        report.max_deviation = report
                            .max_deviation
                            .max((recovered - value(&target, col)).abs());
                    }
                    report.checks += 1;
                }
                Configuration::Singlet => {
                    report.skipped += 1;
                }
            }
        }
    }
    Ok(report)
}

/// Singlet-layer structure: restricted generator actions on both sides of a
/// flip class, intertwiner kernels, and their matched-eigenvalue spanning
/// sets.
#[derive(Debug, Clone, Default)]
pub struct SingletReport {
    /// Max residual of `ρ_w X - X ρ_pair` (both generator families) on the
    /// solution restrictions.
    pub max_intertwiner_residual: f64,
    /// Max residual of the intertwiner applied to matched-eigenvalue tensor
    /// products of restricted eigenvectors.
    pub max_kernel_span_residual: f64,
    /// Classes where the intertwiner nullity differs from the count of
    /// matched-eigenvalue products.
    pub kernel_dimension_mismatches: usize,
    pub classes: usize,
}

pub fn verify_singlet_structure<T: Float>(
    system: &SubductionSystem<T>,
    basis: &SolutionBasis<T>,
) -> Result<SingletReport> {
    let grid = &system.grid;
    let sig = grid.signature();
    let x = crate::scalar::rational_to_f64(system.x().value());
    let mut report = SingletReport::default();
    for layer in grid.layers() {
        let i = layer.i;
        let (first, k) = split_index(sig, i);
        let mut seen: std::collections::HashSet<usize> = std::collections::HashSet::new();
        for (a, node) in grid.nodes().iter().enumerate() {
            if layer.configurations[a] != Configuration::Singlet || seen.contains(&a) {
                continue;
            }
            let ws = rep::theta_bar_set(&node.w, i)?;
            let pairs: Vec<LatticePair> = if first {
                rep::theta_bar_set(&node.pair.w1, k)?
                    .into_iter()
                    .map(|v| LatticePair::new(v, node.pair.w2.clone()))
                    .collect()
            } else {
                rep::theta_bar_set(&node.pair.w2, k)?
                    .into_iter()
                    .map(|v| LatticePair::new(node.pair.w1.clone(), v))
                    .collect()
            };
            let class_nodes: Vec<Vec<usize>> = ws
                .iter()
                .map(|u| {
                    pairs
                        .iter()
                        .map(|p| {
                            let m = GridNode {
                                w: u.clone(),
                                pair: p.clone(),
                            };
                            grid.index_of(&m).expect("class node in grid")
                        })
                        .collect()
                })
                .collect();
            for row in &class_nodes {
                for &idx in row {
                    seen.insert(idx);
                }
            }
            let nw = ws.len();
            let np = pairs.len();
            // restricted actions of g_i and e_i on both sides
            let w_idx: Vec<usize> = ws
                .iter()
                .map(|u| system.module.index_of(u).expect("basis"))
                .collect();
            let rho_w = DMatrix::<f64>::from_fn(nw, nw, |r, c| {
                system.module.g(i)[(w_idx[r], w_idx[c])].to_double()
            });
            let rho_w_bar = DMatrix::<f64>::from_fn(nw, nw, |r, c| {
                system.module.e(i)[(w_idx[r], w_idx[c])].to_double()
            });
            let (rho_p, rho_p_bar) = if first {
                let idx: Vec<usize> = pairs
                    .iter()
                    .map(|p| system.module1.index_of(&p.w1).expect("basis"))
                    .collect();
                (
                    DMatrix::<f64>::from_fn(np, np, |r, c| {
                        system.module1.g(k)[(idx[r], idx[c])].to_double()
                    }),
                    DMatrix::<f64>::from_fn(np, np, |r, c| {
                        system.module1.e(k)[(idx[r], idx[c])].to_double()
                    }),
                )
            } else {
                let idx: Vec<usize> = pairs
                    .iter()
                    .map(|p| system.module2.index_of(&p.w2).expect("basis"))
                    .collect();
                (
                    DMatrix::<f64>::from_fn(np, np, |r, c| {
                        system.module2.g(k)[(idx[r], idx[c])].to_double()
                    }),
                    DMatrix::<f64>::from_fn(np, np, |r, c| {
                        system.module2.e(k)[(idx[r], idx[c])].to_double()
                    }),
                )
            };
            // solution restrictions intertwine both restricted actions
            for col in 0..basis.multiplicity {
                let xc = DMatrix::<f64>::from_fn(nw, np, |r, c| {
                    basis.vectors[(class_nodes[r][c], col)].to_double()
                });
                let res_g = (&rho_w * &xc - &xc * &rho_p).abs().max();
                let res_e = (&rho_w_bar * &xc - &xc * &rho_p_bar).abs().max();
                report.max_intertwiner_residual =
                    report.max_intertwiner_residual.max(res_g).max(res_e);
            }
            // eigen structure: the intertwiner kernel is spanned by
            // matched-eigenvalue products
            for (m_w, m_p, positive) in [
                (&rho_w, &rho_p, Box::new(|v: f64| v > 0.0) as Box<dyn Fn(f64) -> bool>),
                (
                    &rho_w_bar,
                    &rho_p_bar,
                    Box::new(move |v: f64| v > x / 2.0) as Box<dyn Fn(f64) -> bool>,
                ),
            ] {
                let eig_w = m_w.clone().symmetric_eigen();
                let eig_p = m_p.clone().symmetric_eigen();
                let intertwiner = kron(&DMatrix::<f64>::identity(nw, nw), m_p)
                    - kron(m_w, &DMatrix::<f64>::identity(np, np));
                let mut matched = 0usize;
                for aw in 0..nw {
                    for ap in 0..np {
                        if positive(eig_w.eigenvalues[aw]) == positive(eig_p.eigenvalues[ap]) {
                            matched += 1;
                            let product = kron_vec(
                                &eig_w.eigenvectors.column(aw).into_owned(),
                                &eig_p.eigenvectors.column(ap).into_owned(),
                            );
                            let res = (&intertwiner * &product).abs().max();
                            report.max_kernel_span_residual =
                                report.max_kernel_span_residual.max(res);
                        }
                    }
                }
                let svd = intertwiner.svd(false, false);
                let smax = svd
                    .singular_values
                    .iter()
                    .fold(0.0f64, |acc, &v| acc.max(v));
                let nullity = svd
                    .singular_values
                    .iter()
                    .filter(|&&v| v <= smax.max(1.0) * 1e-10)
                    .count();
                if nullity != matched {
                    report.kernel_dimension_mismatches += 1;
                }
            }
            report.classes += 1;
        }
    }
    Ok(report)
}

fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

fn kron_vec(a: &nalgebra::DVector<f64>, b: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
    let (na, nb) = (a.len(), b.len());
    nalgebra::DVector::from_fn(na * nb, |k, _| a[k / nb] * b[k % nb])
}

/// Multiplicity x-invariance helper: the nullity of `Ω` at several parameter
/// values, which must agree (multiplicities are combinatorial).
pub fn multiplicity_at<T: Float>(
    signature: &GridSignature,
    x: &RationalParam,
    tol_rank: f64,
) -> Result<usize> {
    let grid = SubductionGrid::build(signature.clone())?;
    let system = assemble_for::<T>(&grid, x)?;
    Ok(solve(&system, tol_rank)?.multiplicity)
}
