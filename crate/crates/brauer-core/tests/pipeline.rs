//! A deeper end-to-end case beyond the acceptance grid sizes: a
//! multiplicity-two block of a non-stable order-6 reduction, where the big
//! module mixes crossing and contraction layers.

use brauer_core::ortho::{
    block_diagonalization_residual, fix_phases, freedom_count, gram, orthonormalize, SdcTable,
};
use brauer_core::solver::{
    assemble_for, solve, verify_bridge_kernels, verify_bridge_propagation,
    verify_singlet_structure,
};
use brauer_core::{GridSignature, RationalParam, Real, SubductionGrid};

#[test]
fn multiplicity_two_block_of_order_six() {
    let x = RationalParam::ratio(7, 2);
    let grid = SubductionGrid::build(GridSignature {
        f: 6,
        shape: "[1,1]".parse().unwrap(),
        f1: 3,
        f2: 3,
        shape1: "[2,1]".parse().unwrap(),
        shape2: "[2,1]".parse().unwrap(),
    })
    .unwrap();
    assert_eq!(grid.num_nodes(), 45 * 2 * 2);
    let system = assemble_for::<Real>(&grid, &x).unwrap();
    let solution = solve(&system, 1e-10).unwrap();
    assert_eq!(solution.multiplicity, 2);
    assert!(!solution.rank_ambiguous);
    assert!(solution.max_residual < 1e-12);

    let kernels = verify_bridge_kernels(&system, &solution).unwrap();
    assert!(kernels.checks > 0);
    assert!(kernels.max_residual < 1e-10, "{kernels:?}");
    let propagation = verify_bridge_propagation(&system, &solution).unwrap();
    assert!(propagation.checks > 0);
    assert!(propagation.max_deviation < 1e-10, "{propagation:?}");
    let singlets = verify_singlet_structure(&system, &solution).unwrap();
    assert!(singlets.max_intertwiner_residual < 1e-10);
    assert_eq!(singlets.kernel_dimension_mismatches, 0);

    let gramian = gram(&solution, 2, 2, None).unwrap();
    let product = gramian.sylvester.transpose() * &gramian.tau * &gramian.sylvester;
    let id = nalgebra::DMatrix::<Real>::identity(2, 2);
    assert!((product - id).abs().max() < 1e-10);

    let mut chi = orthonormalize(&solution, &gramian);
    fix_phases(&mut chi, 1e-7).unwrap();
    let table = SdcTable::new(&grid, &x, chi, 2, 2);
    assert!(table.unitarity_residual < 1e-10);
    let block = block_diagonalization_residual(&system, &table.values);
    assert!(block < 1e-10, "block diagonalization {block}");
    assert_eq!(freedom_count(2).unwrap(), (3, 1));
}
