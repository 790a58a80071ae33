use vinebend::dataset::dimension_grid;
use vinebend::{ActuatorKind, BendModel, SolverConfig, VineBody};

#[test]
fn tabulated_dimensions_have_a_single_root_up_to_40_kpa() {
    let cfg = SolverConfig::default();
    let pressures: Vec<f64> = (0..=80).map(|i| f64::from(i) * 500.0).collect();
    let mut checked = 0;
    for spec in dimension_grid().iter().filter(|s| s.kind() != ActuatorKind::Fpam) {
        // Infeasible cPAM sizes are rejected at construction.
        let Ok(model) = BendModel::from_spec(spec, VineBody::reference(), None) else { continue };
        checked += 1;
        for sol in model.sweep(&pressures, &cfg).unwrap() {
            assert!(sol.warnings.is_empty(), "{spec:?} at {} Pa: {:?}", sol.pressure, sol.warnings);
        }
    }
    assert_eq!(checked, 15);
}
