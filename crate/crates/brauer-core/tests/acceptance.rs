//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured bound (visible with `--nocapture`).

use std::collections::HashSet;

use brauer_core::ortho::{freedom_count, full_sweep, Tolerances};
use brauer_core::solver::{
    assemble_for, lr_coefficient, solve, verify_bridge_kernels, verify_bridge_propagation,
    verify_singlet_structure,
};
use brauer_core::{
    grid, Configuration, GridSignature, PermutationLattice, RationalParam, Real, RealGtModule,
    Shape, SubductionGrid,
};

fn odd_double_factorial(f: usize) -> u64 {
    let mut v = 1u64;
    let mut k = 2 * f as i64 - 1;
    while k > 0 {
        v *= k as u64;
        k -= 2;
    }
    v
}

fn x_values() -> [RationalParam; 3] {
    [
        RationalParam::ratio(7, 2),
        RationalParam::from_integer(5),
        RationalParam::from_integer(6),
    ]
}

fn all_splits(max_f: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for f in 2..=max_f {
        for f1 in 1..f {
            out.push((f, f1, f - f1));
        }
    }
    out
}

#[test]
fn criterion_01_enumeration_matches_dimension_formula() {
    for f in 0..=6 {
        let mut sum_sq = 0u64;
        for shape in Shape::upsilon(f) {
            let lattices = PermutationLattice::enumerate(f, &shape);
            let dim = PermutationLattice::dimension(f, &shape);
            assert_eq!(
                lattices.len() as u64,
                dim,
                "enumeration vs dimension at f={f}, shape={shape}"
            );
            sum_sq += dim * dim;
        }
        assert_eq!(sum_sq, odd_double_factorial(f), "sum of squares at f={f}");
    }
    println!("criterion 01 (enumeration = dimension formula, sum of squares = (2f-1)!!, f <= 6): PASS");
}

#[test]
fn criterion_02_transpose_involution_and_conjugate_shape() {
    let mut count = 0usize;
    for f in 0..=6 {
        for shape in Shape::upsilon(f) {
            for w in PermutationLattice::enumerate(f, &shape) {
                let t = w.transpose();
                assert_eq!(t.shape(), &shape.conjugate(), "conjugate shape of {w}");
                assert_eq!(t.transpose(), w, "involution at {w}");
                count += 1;
            }
        }
    }
    println!("criterion 02 (transpose involution + conjugate shape on {count} lattices): PASS");
}

#[test]
fn criterion_03_word_validation_examples() {
    let w = PermutationLattice::from_elements(vec![1, 1, 2, -1, 1, -2, 2]).unwrap();
    assert_eq!(w.shape(), &Shape::new(vec![2, 1]).unwrap());
    let err = PermutationLattice::from_elements(vec![1, 2, 1, -1, 2, 1, 3]).unwrap_err();
    assert_eq!(err, brauer_core::Error::InvalidWord { prefix: 5 });
    println!("criterion 03 (reference word examples): PASS");
}

#[test]
fn criterion_04_rank_one_calibration_gate() {
    for x in [
        RationalParam::ratio(7, 2),
        RationalParam::from_integer(5),
        RationalParam::ratio(13, 3),
    ] {
        let m = RealGtModule::build(2, &Shape::empty(), &x).unwrap();
        assert_eq!(m.g(1)[(0, 0)], 1.0, "g entry at x = {x}");
        let expected_e = brauer_core::scalar::rational_to_f64(x.value());
        assert_eq!(m.e(1)[(0, 0)], expected_e, "e entry at x = {x}");
    }
    println!("criterion 04 (forced rank-one action g = [1], e = [x] on [2, []]): PASS");
}

#[test]
fn criterion_05_relation_suite() {
    let mut worst = 0.0f64;
    for x in x_values() {
        for f in 2..=5 {
            for shape in Shape::upsilon(f) {
                let m = RealGtModule::build(f, &shape, &x).unwrap();
                let report = m.check_relations();
                assert!(
                    report.passes(1e-9),
                    "[{f}, {shape}] at x = {x}:\n{report}"
                );
                worst = worst.max(report.max_gated());
            }
        }
    }
    println!("criterion 05 (relations + hermiticity + spectra, f <= 5, three x values, max residual {worst:.3e} <= 1e-9): PASS");
}

#[test]
fn criterion_06_grid_structure() {
    let mut grids = 0usize;
    for (f, f1, f2) in all_splits(4) {
        for shape in Shape::upsilon(f) {
            for shape1 in Shape::upsilon(f1) {
                for shape2 in Shape::upsilon(f2) {
                    let grid = SubductionGrid::build(GridSignature {
                        f,
                        shape: shape.clone(),
                        f1,
                        f2,
                        shape1: shape1.clone(),
                        shape2: shape2.clone(),
                    })
                    .unwrap();
                    grids += 1;
                    let expected = PermutationLattice::dimension(f, &shape)
                        * PermutationLattice::dimension(f1, &shape1)
                        * PermutationLattice::dimension(f2, &shape2);
                    assert_eq!(grid.num_nodes() as u64, expected, "node count");
                    // the four configuration sets partition the node set
                    for layer in grid.layers() {
                        assert_eq!(layer.configurations.len(), grid.num_nodes());
                        let h = grid.configuration_histogram(layer.i).unwrap();
                        assert_eq!(h.iter().sum::<usize>(), grid.num_nodes());
                        for (k, node) in grid.nodes().iter().enumerate() {
                            let w_flip = node.w.elements()[layer.i - 1]
                                == -node.w.elements()[layer.i];
                            let pair_flip = grid::pair_ibar_self(&node.pair, layer.i).unwrap();
                            let expect = match (w_flip, pair_flip) {
                                (false, false) => Configuration::Crossing,
                                (true, false) => Configuration::HBridge,
                                (false, true) => Configuration::VBridge,
                                (true, true) => Configuration::Singlet,
                            };
                            assert_eq!(layer.configurations[k], expect);
                        }
                    }
                    // distinct nodes are coupled for at most one layer index
                    let mut seen: HashSet<(usize, usize)> = HashSet::new();
                    for layer in grid.layers() {
                        for &edge in &layer.edges {
                            assert!(
                                seen.insert(edge),
                                "edge {edge:?} appears in two layers of {}",
                                grid.signature()
                            );
                        }
                    }
                }
            }
        }
    }
    println!("criterion 06 (configuration partition, edge uniqueness, node counts on {grids} grids, f <= 4): PASS");
}

#[test]
fn criterion_07_solver_correctness() {
    // (a) residuals and (c) completeness and (d) x-invariance over all
    // f <= 4 splits
    let xs = x_values();
    let mut worst_residual = 0.0f64;
    for (f, f1, f2) in all_splits(4) {
        for shape in Shape::upsilon(f) {
            let expected = PermutationLattice::dimension(f, &shape);
            let mut totals = Vec::new();
            for x in &xs {
                let mut total = 0u64;
                let mut mus = Vec::new();
                for shape1 in Shape::upsilon(f1) {
                    for shape2 in Shape::upsilon(f2) {
                        let grid = SubductionGrid::build(GridSignature {
                            f,
                            shape: shape.clone(),
                            f1,
                            f2,
                            shape1: shape1.clone(),
                            shape2: shape2.clone(),
                        })
                        .unwrap();
                        let system = assemble_for::<Real>(&grid, x).unwrap();
                        let solution = solve(&system, 1e-10).unwrap();
                        assert!(
                            solution.max_residual <= 1e-9,
                            "residual {} on {}",
                            solution.max_residual,
                            grid.signature()
                        );
                        assert!(!solution.rank_ambiguous, "ambiguous {}", grid.signature());
                        worst_residual = worst_residual.max(solution.max_residual);
                        total += solution.multiplicity as u64
                            * PermutationLattice::dimension(f1, &shape1)
                            * PermutationLattice::dimension(f2, &shape2);
                        mus.push(solution.multiplicity);
                    }
                }
                assert_eq!(total, expected, "completeness at [{f}, {shape}] x = {x}");
                totals.push(mus);
            }
            assert!(
                totals.windows(2).all(|w| w[0] == w[1]),
                "multiplicities vary with x at [{f}, {shape}]"
            );
        }
    }
    // (b) stable case equals Littlewood-Richardson for f <= 5
    let x = RationalParam::ratio(7, 2);
    let mut stable = 0usize;
    for (f, f1, f2) in all_splits(5) {
        for shape in Shape::partitions(f as u32) {
            for shape1 in Shape::partitions(f1 as u32) {
                for shape2 in Shape::partitions(f2 as u32) {
                    let grid = SubductionGrid::build(GridSignature {
                        f,
                        shape: shape.clone(),
                        f1,
                        f2,
                        shape1: shape1.clone(),
                        shape2: shape2.clone(),
                    })
                    .unwrap();
                    let system = assemble_for::<Real>(&grid, &x).unwrap();
                    let solution = solve(&system, 1e-10).unwrap();
                    let lr = lr_coefficient(&shape, &shape1, &shape2);
                    assert_eq!(
                        solution.multiplicity as u64,
                        lr,
                        "stable multiplicity vs LR at {}",
                        grid.signature()
                    );
                    stable += 1;
                }
            }
        }
    }
    println!("criterion 07 (residual <= 1e-9, completeness, x-invariance f <= 4; {stable} stable grids = LR f <= 5; worst residual {worst_residual:.3e}): PASS");
}

#[test]
fn criterion_08_structure_verification() {
    let x = RationalParam::ratio(7, 2);
    let mut kernel_checks = 0usize;
    let mut propagation_checks = 0usize;
    let mut singlet_classes = 0usize;
    let mut worst = 0.0f64;
    for (f, f1, f2) in all_splits(4) {
        for shape in Shape::upsilon(f) {
            for shape1 in Shape::upsilon(f1) {
                for shape2 in Shape::upsilon(f2) {
                    let grid = SubductionGrid::build(GridSignature {
                        f,
                        shape: shape.clone(),
                        f1,
                        f2,
                        shape1: shape1.clone(),
                        shape2: shape2.clone(),
                    })
                    .unwrap();
                    let system = assemble_for::<Real>(&grid, &x).unwrap();
                    let solution = solve(&system, 1e-10).unwrap();
                    if solution.multiplicity == 0 {
                        continue;
                    }
                    let kernels = verify_bridge_kernels(&system, &solution).unwrap();
                    let propagation = verify_bridge_propagation(&system, &solution).unwrap();
                    let singlets = verify_singlet_structure(&system, &solution).unwrap();
                    assert!(
                        kernels.max_residual <= 1e-8,
                        "bridge kernels {} on {}",
                        kernels.max_residual,
                        grid.signature()
                    );
                    assert!(
                        propagation.max_deviation <= 1e-8,
                        "propagation {} on {}",
                        propagation.max_deviation,
                        grid.signature()
                    );
                    assert!(
                        singlets.max_intertwiner_residual <= 1e-8
                            && singlets.max_kernel_span_residual <= 1e-8,
                        "singlet structure on {}",
                        grid.signature()
                    );
                    assert_eq!(
                        singlets.kernel_dimension_mismatches, 0,
                        "singlet kernel dimensions on {}",
                        grid.signature()
                    );
                    kernel_checks += kernels.checks;
                    propagation_checks += propagation.checks;
                    singlet_classes += singlets.classes;
                    worst = worst
                        .max(kernels.max_residual)
                        .max(propagation.max_deviation)
                        .max(singlets.max_intertwiner_residual)
                        .max(singlets.max_kernel_span_residual);
                }
            }
        }
    }
    assert!(kernel_checks > 0 && propagation_checks > 0 && singlet_classes > 0);
    println!("criterion 08 (bridge kernels {kernel_checks}, propagation {propagation_checks}, singlet classes {singlet_classes}; worst {worst:.3e} <= 1e-8): PASS");
}

#[test]
fn criterion_09_output_quality() {
    let x = RationalParam::ratio(7, 2);
    let tol = Tolerances::default();
    let mut worst_orth = 0.0f64;
    let mut worst_block = 0.0f64;
    let mut tables = 0usize;
    let mut reruns: Vec<(String, String)> = Vec::new();
    for (f, f1, f2) in all_splits(4) {
        for shape in Shape::upsilon(f) {
            let run = |_: usize| full_sweep::<Real>(f, &shape, f1, f2, &x, tol).unwrap();
            let report = run(0);
            assert!(report.completeness_passes(), "completeness [{f}, {shape}]");
            assert!(
                report.orthogonality_residual <= 1e-8,
                "orthogonality {} at [{f}, {shape}] split {f1}+{f2}",
                report.orthogonality_residual
            );
            assert!(
                report.block_diagonal_residual <= 1e-8,
                "block diagonalization {} at [{f}, {shape}] split {f1}+{f2}",
                report.block_diagonal_residual
            );
            worst_orth = worst_orth.max(report.orthogonality_residual);
            worst_block = worst_block.max(report.block_diagonal_residual);
            let rerun = run(1);
            for (a, b) in report.entries.iter().zip(rerun.entries.iter()) {
                match (&a.table, &b.table) {
                    (None, None) => {}
                    (Some(ta), Some(tb)) => {
                        assert!(ta.unitarity_residual <= 1e-8);
                        // Young-Yamanouchi: leading coefficient positive per copy
                        for eta in 0..ta.multiplicity {
                            let col = ta.values.column(eta);
                            let cmax =
                                col.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
                            let lead = col
                                .iter()
                                .position(|v| v.abs() > 1e-7 * cmax)
                                .expect("nonzero column");
                            assert!(col[lead] > 0.0, "phase at eta = {eta}");
                        }
                        let ja = ta.to_json().render();
                        let jb = tb.to_json().render();
                        assert_eq!(ja, jb, "rerun not byte-identical");
                        reruns.push((ja, jb));
                        tables += 1;
                    }
                    _ => panic!("rerun multiplicity differs"),
                }
            }
        }
    }
    assert!(!reruns.is_empty());
    println!("criterion 09 ({tables} tables: unitarity + block diagonalization (worst {worst_orth:.3e} / {worst_block:.3e}) <= 1e-8, leading-entry phases, byte-identical reruns): PASS");
}

#[test]
fn criterion_10_freedom_count_formula() {
    let expected = [(1u64, (2u64, 0u64)), (2, (3, 1)), (3, (5, 3)), (4, (9, 6)), (5, (17, 10))];
    for (mu, want) in expected {
        assert_eq!(freedom_count(mu).unwrap(), want, "mu = {mu}");
    }
    println!("criterion 10 (convention freedom formula for mu = 1..5): PASS");
}
