use approx::assert_relative_eq;
use hfatom::fewbody::{
    assemble, assemble_with, ground_energy, ground_state_in, scaling_check, superharmonic_spot_check, Family,
    ModelParams, Regularization, SymmetrySector,
};
use hfatom::lanczos::LanczosConfig;
use hfatom::{Error, Execution, Grid1D};
use nalgebra::{DMatrix, SymmetricEigen};

fn grid(hw: f64, n: usize) -> Grid1D {
    Grid1D::new(hw, n).unwrap()
}

fn dense_lowest(family: Family, params: ModelParams, g: Grid1D) -> f64 {
    let h = assemble(family, params, g, Regularization::default()).unwrap();
    let d = h.dimension();
    let m = DMatrix::from_row_slice(d, d, &h.to_dense().unwrap());
    SymmetricEigen::new(m).eigenvalues.min()
}

#[test]
fn lanczos_matches_dense_diagonalization() {
    let g = grid(6.0, 31);
    for family in [Family::Delta, Family::SymmetrizedComparison] {
        let exact = dense_lowest(family, ModelParams::new(1.0, 2), g);
        let h = assemble(family, ModelParams::new(1.0, 2), g, Regularization::default()).unwrap();
        for sector in [SymmetrySector::None, SymmetrySector::Bosonic] {
            let e = ground_energy(&h, sector, 3).unwrap().energy;
            assert_relative_eq!(e, exact, max_relative = 1e-9);
        }
    }
}

#[test]
fn parametric_operator_matches_dense_diagonalization() {
    let g = grid(5.0, 21);
    let params = ModelParams::new(1.0, 2).with_transverse(vec![[0.5, 0.0], [0.0, 1.5]]);
    let exact = dense_lowest(Family::ParametricUnscaled, params.clone(), g);
    let h = assemble(Family::ParametricUnscaled, params, g, Regularization::default()).unwrap();
    assert!(!h.is_permutation_symmetric());
    assert_relative_eq!(
        ground_energy(&h, SymmetrySector::None, 0).unwrap().energy,
        exact,
        max_relative = 1e-9
    );
    assert!(matches!(
        ground_energy(&h, SymmetrySector::Bosonic, 0),
        Err(Error::Domain(_))
    ));
}

#[test]
fn diagonal_is_invariant_under_particle_exchange() {
    let n = 9;
    let g = grid(3.0, n);
    for family in [Family::Delta, Family::SymmetrizedComparison] {
        let h = assemble(family, ModelParams::new(1.5, 3), g, Regularization::default()).unwrap();
        assert!(h.is_permutation_symmetric());
        let d = h.potential_diagonal();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = d[(i * n + j) * n + k];
                    assert_eq!(v, d[(j * n + i) * n + k]);
                    assert_eq!(v, d[(k * n + j) * n + i]);
                    assert_eq!(v, d[(i * n + k) * n + j]);
                }
            }
        }
    }
}

#[test]
fn coinciding_transverse_positions_are_rejected() {
    let params = ModelParams::new(1.0, 2).with_transverse(vec![[1.0, 0.0], [1.0, 0.0]]);
    let h = assemble(
        Family::ParametricUnscaled,
        params,
        grid(5.0, 21),
        Regularization::default(),
    );
    assert!(matches!(h, Err(Error::Domain(_))));
}

#[test]
fn plain_and_rescaled_delta_models_differ_by_z_squared() {
    // z = y/Z maps h_{Z,N} onto Z² ĥ_{Z,N}; on grids related by the same
    // factor the discrete operators agree entry by entry.
    let z = 2.0;
    let n = 61;
    let plain = assemble(
        Family::Delta,
        ModelParams::new(z, 2),
        grid(6.0, n),
        Regularization::default(),
    )
    .unwrap();
    let hat = assemble(
        Family::DeltaRescaled,
        ModelParams::new(z, 2),
        grid(6.0 * z, n),
        Regularization::default(),
    )
    .unwrap();
    let e = ground_energy(&plain, SymmetrySector::Bosonic, 1).unwrap().energy;
    let e_hat = ground_energy(&hat, SymmetrySector::Bosonic, 1).unwrap().energy;
    assert_relative_eq!(e, z * z * e_hat, max_relative = 1e-8);
}

#[test]
fn two_particle_scaling_relation() {
    let c = scaling_check(1.0, 1e5, &[[1.0, 0.0], [0.0, 2.0]], grid(20.0, 41)).unwrap();
    assert!(c.relative_error < 1e-6, "{c:?}");
    assert!(c.length > 0.0);
}

#[test]
fn execution_modes_give_identical_results() {
    let g = grid(10.0, 81);
    let h = assemble(Family::Delta, ModelParams::new(1.0, 2), g, Regularization::default()).unwrap();
    let cfg = LanczosConfig::default();
    let par = ground_state_in(
        &h.clone().with_execution(Execution::Parallel),
        SymmetrySector::Bosonic,
        5,
        &cfg,
    )
    .unwrap();
    let seq = ground_state_in(
        &h.with_execution(Execution::Sequential),
        SymmetrySector::Bosonic,
        5,
        &cfg,
    )
    .unwrap();
    assert_eq!(par.report.energy, seq.report.energy);
    assert_eq!(par.values, seq.values);
}

#[test]
fn ground_state_is_normalized_and_symmetric() {
    let g = grid(10.0, 51);
    let h = assemble(Family::Delta, ModelParams::new(1.0, 2), g, Regularization::default()).unwrap();
    let gs = ground_state_in(&h, SymmetrySector::Bosonic, 2, &LanczosConfig::default()).unwrap();
    let dx = g.dx();
    let norm: f64 = gs.values.iter().map(|v| v * v).sum::<f64>() * dx * dx;
    assert_relative_eq!(norm, 1.0, max_relative = 1e-10);
    let n = g.len();
    for i in 0..n {
        for j in 0..n {
            let a = gs.values[i * n + j];
            assert!((a - gs.values[j * n + i]).abs() < 1e-9);
            assert!((a - gs.values[(n - 1 - i) * n + (n - 1 - j)]).abs() < 1e-6);
        }
    }
}

#[test]
fn budget_override_is_respected() {
    let g = grid(10.0, 101);
    let r = assemble_with(
        Family::Delta,
        ModelParams::new(1.0, 3),
        g,
        Regularization::default(),
        100_000,
    );
    assert!(matches!(
        r,
        Err(Error::Capacity {
            dimension: 1_030_301,
            budget: 100_000
        })
    ));
}

#[test]
fn circle_average_below_centre_value() {
    let r = superharmonic_spot_check(1.0, [0.0, 1.5], 0.7, 12, grid(40.0, 4001)).unwrap();
    assert!(r.circle_average <= r.center_energy + 1e-6);
    assert!(r.bounds_ok);
    assert_eq!(r.samples.len(), 12);
}
