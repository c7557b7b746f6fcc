//! Orthonormalization across multiplicity copies and the phase convention.
//!
//! A solved nullspace basis `χ` (columns = multiplicity copies) is reduced to
//! the orthonormal form `χ̃ = χ O_τ D_τ^{-1/2} O` where `τ = χ^T χ / (d1 d2)`
//! is the Gram form, `O_τ` its descending-eigenvalue diagonalizer and `O` a
//! configurable orthogonal gauge (identity by default). Signs are then fixed
//! by the Young-Yamanouchi convention: the first nonzero coefficient of each
//! copy, in canonical node order, is positive.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::{GridSignature, SubductionGrid};
use crate::json::Value;
use crate::rep::GtModule;
use crate::scalar::Float;
use crate::shape::Shape;
use crate::solver::{
    self, assemble, solve, SolutionBasis, SubductionSystem,
};
use crate::young::RationalParam;

/// Tolerances for the solve -> orthonormalize -> phase-fix pipeline.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Singular values below `rank * σ_max` count as zero.
    pub rank: f64,
    /// Gate for residual checks (`‖Ωv‖`, verification passes).
    pub residual: f64,
    /// A coefficient counts as the leading nonzero when it exceeds
    /// `phase * column_max`.
    pub phase: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-10,
            residual: 1e-9,
            phase: 1e-7,
        }
    }
}

/// Gram form of a solution basis and its Sylvester reduction.
#[derive(Debug, Clone)]
pub struct GramResult<T: Float> {
    pub tau: DMatrix<T>,
    /// `σ = O_τ D_τ^{-1/2} O` with `σ^T τ σ = I`.
    pub sylvester: DMatrix<T>,
    /// The configured orthogonal gauge `O`.
    pub gauge: DMatrix<T>,
}

/// Computes `τ = χ^T χ / (d1 d2)` and its Sylvester matrix. The
/// eigendecomposition orders eigenvalues descending and fixes each
/// eigenvector's first nonzero component positive, so the result is
/// deterministic; `gauge` defaults to the identity.
pub fn gram<T: Float>(
    basis: &SolutionBasis<T>,
    dim1: usize,
    dim2: usize,
    gauge: Option<DMatrix<T>>,
) -> Result<GramResult<T>> {
    let mu = basis.multiplicity;
    if mu == 0 {
        return Err(Error::ZeroMultiplicity);
    }
    let norm = T::from_double((dim1 * dim2) as f64);
    let tau = basis.vectors.transpose() * &basis.vectors / norm;
    let gauge = gauge.unwrap_or_else(|| DMatrix::identity(mu, mu));
    if gauge.shape() != (mu, mu) {
        return Err(Error::SingularGram {
            detail: format!("gauge must be {mu}x{mu}"),
        });
    }
    let eig = tau.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..mu).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let lambda_max = eig.eigenvalues[order[0]].to_double();
    let mut diag_inv_sqrt = DMatrix::<T>::zeros(mu, mu);
    let mut o_tau = DMatrix::<T>::zeros(mu, mu);
    for (col, &k) in order.iter().enumerate() {
        let lambda = eig.eigenvalues[k].to_double();
        if lambda <= 0.0 || lambda <= lambda_max * 1e-12 {
            return Err(Error::SingularGram {
                detail: format!("Gram eigenvalue {lambda:.3e} of max {lambda_max:.3e}"),
            });
        }
        diag_inv_sqrt[(col, col)] = T::from_double(1.0 / lambda.sqrt());
        let mut v = eig.eigenvectors.column(k).into_owned();
        let vmax = v.iter().fold(0.0f64, |acc, e| acc.max(e.to_double().abs()));
        if let Some(first) = v.iter().position(|e| e.to_double().abs() > vmax * 1e-12) {
            if v[first].to_double() < 0.0 {
                v.neg_mut();
            }
        }
        o_tau.set_column(col, &v);
    }
    let sylvester = &o_tau * diag_inv_sqrt * &gauge;
    Ok(GramResult {
        tau,
        sylvester,
        gauge,
    })
}

/// `χ̃ = χ σ`: columns orthogonal with squared norm `d1 d2`.
pub fn orthonormalize<T: Float>(basis: &SolutionBasis<T>, gram: &GramResult<T>) -> DMatrix<T> {
    &basis.vectors * &gram.sylvester
}

/// Multiplies each column by `±1` so that its first nonzero entry in node
/// order is positive. The nonzero cutoff is `phase_tol * column_max`.
pub fn fix_phases<T: Float>(chi: &mut DMatrix<T>, phase_tol: f64) -> Result<()> {
    for col in 0..chi.ncols() {
        let column = chi.column(col);
        let cmax = column
            .iter()
            .fold(0.0f64, |acc, e| acc.max(e.to_double().abs()));
        let lead = column
            .iter()
            .position(|e| e.to_double().abs() > phase_tol * cmax && cmax > 0.0)
            .ok_or(Error::ZeroColumn { column: col })?;
        if chi[(lead, col)].to_double() < 0.0 {
            let negated = -chi.column(col).into_owned();
            chi.set_column(col, &negated);
        }
    }
    Ok(())
}

/// Counts the convention choices for multiplicity `mu`: `2^{mu-1} + 1`
/// phases and `mu (mu - 1) / 2` continuous parameters of the gauge.
pub fn freedom_count(mu: u64) -> Result<(u64, u64)> {
    if mu < 1 {
        return Err(Error::ZeroMultiplicity);
    }
    Ok(((1u64 << (mu - 1)) + 1, mu * (mu - 1) / 2))
}

/// Final orthonormalized, phase-fixed subduction coefficient table for one
/// grid signature.
#[derive(Debug, Clone)]
pub struct SdcTable<T: Float> {
    pub signature: GridSignature,
    pub x: RationalParam,
    pub multiplicity: usize,
    /// Serialized node labels in canonical order.
    pub nodes: Vec<String>,
    /// Node-indexed rows, one column per multiplicity label.
    pub values: DMatrix<T>,
    /// `‖χ̃^T χ̃ / (d1 d2) - I‖_max`.
    pub unitarity_residual: f64,
}

impl<T: Float> SdcTable<T> {
    pub fn new(
        grid: &SubductionGrid,
        x: &RationalParam,
        values: DMatrix<T>,
        dim1: usize,
        dim2: usize,
    ) -> Self {
        let norm = T::from_double((dim1 * dim2) as f64);
        let mu = values.ncols();
        let gramian = values.transpose() * &values / norm;
        let residual = (gramian - DMatrix::<T>::identity(mu, mu))
            .iter()
            .fold(0.0f64, |acc, e| acc.max(e.to_double().abs()));
        Self {
            signature: grid.signature().clone(),
            x: x.clone(),
            multiplicity: mu,
            nodes: grid.nodes().iter().map(|n| n.to_string()).collect(),
            values,
            unitarity_residual: residual,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Value::object();
        obj.push("signature", signature_json(&self.signature));
        obj.push("x", Value::Str(self.x.to_string()));
        obj.push("multiplicity", Value::UInt(self.multiplicity as u64));
        let mut coeffs = Value::object();
        for (k, node) in self.nodes.iter().enumerate() {
            coeffs.push(
                node,
                Value::floats((0..self.multiplicity).map(|c| self.values[(k, c)].to_double())),
            );
        }
        obj.push("coefficients", coeffs);
        let mut diag = Value::object();
        diag.push(
            "unitarity_residual",
            Value::Float(self.unitarity_residual),
        );
        obj.push("diagnostics", diag);
        obj
    }

    /// CSV body with header `w,w1,w2,eta,value`.
    pub fn to_csv(&self, grid: &SubductionGrid) -> String {
        let mut out = String::from("w,w1,w2,eta,value\n");
        for (k, node) in grid.nodes().iter().enumerate() {
            for eta in 0..self.multiplicity {
                out.push_str(&format!(
                    "\"{}\",\"{}\",\"{}\",{eta},{}\n",
                    node.w,
                    node.pair.w1,
                    node.pair.w2,
                    crate::json::format_f64(self.values[(k, eta)].to_double())
                ));
            }
        }
        out
    }
}

pub fn signature_json(sig: &GridSignature) -> Value {
    let mut obj = Value::object();
    obj.push("f", Value::UInt(sig.f as u64));
    obj.push("shape", Value::Str(sig.shape.to_string()));
    obj.push("f1", Value::UInt(sig.f1 as u64));
    obj.push("f2", Value::UInt(sig.f2 as u64));
    obj.push("shape1", Value::Str(sig.shape1.to_string()));
    obj.push("shape2", Value::Str(sig.shape2.to_string()));
    obj
}

/// Raw solution dump: singular-value tail and basis vectors keyed by node.
pub fn solution_json<T: Float>(
    grid: &SubductionGrid,
    x: &RationalParam,
    basis: &SolutionBasis<T>,
) -> Value {
    let mut obj = Value::object();
    obj.push("signature", signature_json(grid.signature()));
    obj.push("x", Value::Str(x.to_string()));
    obj.push("multiplicity", Value::UInt(basis.multiplicity as u64));
    let tail: Vec<f64> = basis
        .singular_values
        .iter()
        .rev()
        .take(basis.multiplicity + 3)
        .map(|s| s.to_double())
        .collect();
    obj.push("singular_value_tail", Value::floats(tail));
    obj.push("rank_threshold", Value::Float(basis.rank_threshold));
    obj.push("rank_ambiguous", Value::Bool(basis.rank_ambiguous));
    obj.push("max_residual", Value::Float(basis.max_residual));
    let mut vectors = Value::object();
    for (k, node) in grid.nodes().iter().enumerate() {
        vectors.push(
            &node.to_string(),
            Value::floats((0..basis.multiplicity).map(|c| basis.vectors[(k, c)].to_double())),
        );
    }
    obj.push("basis", vectors);
    obj
}

/// Residual of block diagonalization: for every subalgebra generator `a`,
/// the table conjugates the big action to `ρ1(a) ⊗ I` or `I ⊗ ρ2(a)`
/// replicated per multiplicity copy.
pub fn block_diagonalization_residual<T: Float>(
    system: &SubductionSystem<T>,
    table: &DMatrix<T>,
) -> f64 {
    let grid = system.grid();
    let sig = grid.signature();
    let d1 = system.module1().dim();
    let d2 = system.module2().dim();
    let d = system.module().dim();
    let mu = table.ncols();
    let mut phis = Vec::with_capacity(mu);
    for eta in 0..mu {
        let mut phi = DMatrix::<T>::zeros(d, d1 * d2);
        for (k, node) in grid.nodes().iter().enumerate() {
            let r = system.module().index_of(&node.w).expect("basis");
            let p1 = system.module1().index_of(&node.pair.w1).expect("basis");
            let p2 = system.module2().index_of(&node.pair.w2).expect("basis");
            phi[(r, p1 * d2 + p2)] = table[(k, eta)];
        }
        phis.push(phi);
    }
    let mut residual = 0.0f64;
    for layer in grid.layers() {
        let i = layer.i;
        for kind in [solver::GeneratorKind::G, solver::GeneratorKind::E] {
            let big = match kind {
                solver::GeneratorKind::G => system.module().g(i),
                solver::GeneratorKind::E => system.module().e(i),
            };
            let split: DMatrix<T> = if i < sig.f1 {
                let s = match kind {
                    solver::GeneratorKind::G => system.module1().g(i),
                    solver::GeneratorKind::E => system.module1().e(i),
                };
                kron_t(s, &DMatrix::identity(d2, d2))
            } else {
                let s = match kind {
                    solver::GeneratorKind::G => system.module2().g(i - sig.f1),
                    solver::GeneratorKind::E => system.module2().e(i - sig.f1),
                };
                kron_t(&DMatrix::identity(d1, d1), s)
            };
            for (ea, pa) in phis.iter().enumerate() {
                for (eb, pb) in phis.iter().enumerate() {
                    let got = pa.transpose() * big * pb;
                    let want = if ea == eb {
                        split.clone()
                    } else {
                        DMatrix::zeros(d1 * d2, d1 * d2)
                    };
                    residual = (got - want)
                        .iter()
                        .fold(residual, |acc, e| acc.max(e.to_double().abs()));
                }
            }
        }
    }
    residual
}

fn kron_t<T: Float>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

fn gate_relations<T: Float>(module: &GtModule<T>, tol: f64) -> Result<()> {
    let report = module.check_relations();
    if report.passes(tol.max(1e-9)) {
        Ok(())
    } else {
        Err(crate::error::Error::AssemblyInconsistency {
            detail: format!(
                "[{}, {}] fails the defining relations (max residual {:.3e})",
                module.f(),
                module.shape(),
                report.max_gated()
            ),
        })
    }
}

/// One `(λ1, λ2)` entry of a full sweep.
pub struct SweepEntry<T: Float> {
    pub system: SubductionSystem<T>,
    pub solution: SolutionBasis<T>,
    /// Present when the multiplicity is nonzero.
    pub table: Option<SdcTable<T>>,
}

/// A full `(f, λ) ↓ (f1, f2)` sweep: per-pair tables plus the global
/// orthogonality and block-diagonalization residuals of the assembled
/// change-of-basis matrix.
pub struct SweepReport<T: Float> {
    pub entries: Vec<SweepEntry<T>>,
    pub completeness_total: u64,
    pub completeness_expected: u64,
    pub rank_ambiguous: bool,
    /// `‖U^T U - I‖_max` and `‖U U^T - I‖_max` of the stacked table.
    pub orthogonality_residual: f64,
    pub block_diagonal_residual: f64,
}

impl<T: Float> SweepReport<T> {
    pub fn completeness_passes(&self) -> bool {
        self.completeness_total == self.completeness_expected
    }
}

/// Solves, orthonormalizes and phase-fixes every `(λ1, λ2) ∈ Υ_{f1} × Υ_{f2}`
/// block of the reduction of `[f, λ]`.
pub fn full_sweep<T: Float>(
    f: usize,
    shape: &Shape,
    f1: usize,
    f2: usize,
    x: &RationalParam,
    tol: Tolerances,
) -> Result<SweepReport<T>> {
    let module = GtModule::<T>::build(f, shape, x)?;
    gate_relations(&module, tol.residual)?;
    let d = module.dim();
    let mut entries = Vec::new();
    let mut total = 0u64;
    let mut ambiguous = false;
    let mut columns: Vec<Vec<T>> = Vec::new();
    for shape1 in Shape::upsilon(f1) {
        let module1 = GtModule::<T>::build(f1, &shape1, x)?;
        gate_relations(&module1, tol.residual)?;
        for shape2 in Shape::upsilon(f2) {
            let module2 = GtModule::<T>::build(f2, &shape2, x)?;
            gate_relations(&module2, tol.residual)?;
            let grid = SubductionGrid::build(GridSignature {
                f,
                shape: shape.clone(),
                f1,
                f2,
                shape1: shape1.clone(),
                shape2: shape2.clone(),
            })?;
            let system = assemble(&grid, &module, &module1, &module2)?;
            let solution = solve(&system, tol.rank)?;
            ambiguous |= solution.rank_ambiguous;
            let table = if solution.multiplicity > 0 {
                let d1 = module1.dim();
                let d2 = module2.dim();
                total += (solution.multiplicity * d1 * d2) as u64;
                let gramian = gram(&solution, d1, d2, None)?;
                let mut chi = orthonormalize(&solution, &gramian);
                fix_phases(&mut chi, tol.phase)?;
                // stack the normalized split-basis columns of this block
                for eta in 0..solution.multiplicity {
                    for p1 in 0..d1 {
                        for p2 in 0..d2 {
                            let mut col = vec![T::zero(); d];
                            for (k, node) in grid.nodes().iter().enumerate() {
                                if module1.index_of(&node.pair.w1) == Some(p1)
                                    && module2.index_of(&node.pair.w2) == Some(p2)
                                {
                                    let r = module.index_of(&node.w).expect("basis");
                                    col[r] = chi[(k, eta)];
                                }
                            }
                            columns.push(col);
                        }
                    }
                }
                Some(SdcTable::new(&grid, x, chi, d1, d2))
            } else {
                None
            };
            entries.push(SweepEntry {
                system,
                solution,
                table,
            });
        }
    }

    let mut orthogonality = f64::INFINITY;
    let mut block_residual = 0.0f64;
    if total == d as u64 {
        let u = DMatrix::<T>::from_fn(d, columns.len(), |r, c| columns[c][r]);
        let id = DMatrix::<T>::identity(d, d);
        orthogonality = (u.transpose() * &u - &id)
            .iter()
            .chain((&u * u.transpose() - &id).iter())
            .fold(0.0f64, |acc, e| acc.max(e.to_double().abs()));
        for entry in &entries {
            if let Some(table) = &entry.table {
                block_residual = block_residual
                    .max(block_diagonalization_residual(&entry.system, &table.values));
            }
        }
    }

    Ok(SweepReport {
        entries,
        completeness_total: total,
        completeness_expected: d as u64,
        rank_ambiguous: ambiguous,
        orthogonality_residual: orthogonality,
        block_diagonal_residual: block_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::assemble_for;
    use crate::Real;

    fn sig(f: usize, s: &str, f1: usize, f2: usize, s1: &str, s2: &str) -> GridSignature {
        GridSignature {
            f,
            shape: s.parse().unwrap(),
            f1,
            f2,
            shape1: s1.parse().unwrap(),
            shape2: s2.parse().unwrap(),
        }
    }

    #[test]
    fn gram_on_synthetic_multiplicity_two() {
        // tau = [[2, 0], [0, 1/2]] -> sylvester = diag(1/sqrt 2, sqrt 2)
        let basis = SolutionBasis::<Real> {
            vectors: DMatrix::from_column_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]),
            multiplicity: 2,
            singular_values: vec![],
            rank_threshold: 0.0,
            rank_ambiguous: false,
            max_residual: 0.0,
        };
        let g = gram(&basis, 1, 2, None).unwrap();
        assert!((g.tau[(0, 0)] - 2.0).abs() < 1e-15);
        assert!((g.tau[(1, 1)] - 0.5).abs() < 1e-15);
        let s = &g.sylvester;
        assert!((s[(0, 0)] - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);
        assert!((s[(1, 1)] - 2.0f64.sqrt()).abs() < 1e-15);
        let chi = orthonormalize(&basis, &g);
        let gram2 = chi.transpose() * &chi / 2.0;
        assert!((gram2 - DMatrix::<Real>::identity(2, 2)).abs().max() < 1e-14);
    }

    #[test]
    fn gram_rejects_dependent_basis() {
        let basis = SolutionBasis::<Real> {
            vectors: DMatrix::from_column_slice(2, 2, &[1.0, 0.0, 1.0, 1e-14]),
            multiplicity: 2,
            singular_values: vec![],
            rank_threshold: 0.0,
            rank_ambiguous: false,
            max_residual: 0.0,
        };
        assert!(gram(&basis, 1, 1, None).is_err());
    }

    #[test]
    fn phase_fixing() {
        let mut chi = DMatrix::<Real>::from_column_slice(3, 2, &[-0.7, 0.1, 0.0, 0.0, 0.7, -0.1]);
        fix_phases(&mut chi, 1e-7).unwrap();
        assert!(chi[(0, 0)] > 0.0);
        assert!(chi[(1, 1)] > 0.0);
        let mut zero = DMatrix::<Real>::zeros(2, 1);
        assert!(fix_phases(&mut zero, 1e-7).is_err());
    }

    #[test]
    fn freedom_counts() {
        assert_eq!(freedom_count(1).unwrap(), (2, 0));
        assert_eq!(freedom_count(2).unwrap(), (3, 1));
        assert_eq!(freedom_count(3).unwrap(), (5, 3));
        assert_eq!(freedom_count(4).unwrap(), (9, 6));
        assert_eq!(freedom_count(5).unwrap(), (17, 10));
        assert!(freedom_count(0).is_err());
    }

    #[test]
    fn single_block_table() {
        let x = RationalParam::ratio(7, 2);
        let grid = SubductionGrid::build(sig(3, "[1]", 2, 1, "[]", "[1]")).unwrap();
        let system = assemble_for::<Real>(&grid, &x).unwrap();
        let solution = solve(&system, 1e-10).unwrap();
        let gramian = gram(&solution, 1, 1, None).unwrap();
        let mut chi = orthonormalize(&solution, &gramian);
        fix_phases(&mut chi, 1e-7).unwrap();
        let table = SdcTable::new(&grid, &x, chi, 1, 1);
        assert!(table.unitarity_residual < 1e-12);
        let json = table.to_json().render();
        assert!(json.contains("\"multiplicity\": 1"));
        assert!(json.contains("<(1,-1,1); (1,-1), (1)>"));
        let csv = table.to_csv(&grid);
        assert!(csv.starts_with("w,w1,w2,eta,value\n"));
        assert_eq!(csv.lines().count(), 1 + 3);
    }

    #[test]
    fn sweep_is_orthogonal_and_block_diagonal() {
        let x = RationalParam::ratio(7, 2);
        let report =
            full_sweep::<Real>(3, &"[1]".parse().unwrap(), 2, 1, &x, Tolerances::default())
                .unwrap();
        assert!(report.completeness_passes());
        assert!(report.orthogonality_residual < 1e-10, "{}", report.orthogonality_residual);
        assert!(report.block_diagonal_residual < 1e-10);
        assert!(!report.rank_ambiguous);
    }
}
