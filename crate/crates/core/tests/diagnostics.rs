mod common;

use mhd_core::diagnostics::{compute_record, eoc, error_norms_bdm, error_norms_p1, magnetic_energy, EocConvention};
use mhd_core::eos::{self, GasParams};
use mhd_core::euler::{BoundaryConditions, EulerConfig, HydroStateField};
use mhd_core::fespace::{interpolate_curl, interpolate_scalar, CurlSpaceBdm1, ScalarSpaceP1};
use mhd_core::induction::NewtonConfig;
use mhd_core::{build_rect_mesh, MhdState, Simulation};

use common::{periodic_mesh, unit_square};

fn simulation(n: usize) -> Simulation {
    Simulation::new(
        periodic_mesh(n),
        GasParams::ideal(1.4),
        BoundaryConditions::none(),
        EulerConfig::default(),
        NewtonConfig::default(),
    )
    .unwrap()
}

fn at_rest(sim: &Simulation, b: Vec<f64>) -> MhdState {
    let u = eos::conserved_from_primitive(1.0, [0.0, 0.0], 1.0, sim.gas());
    MhdState { hydro: HydroStateField::uniform(sim.p1().num_nodes(), u), b, time: 0.0 }
}

#[test]
fn two_dimensional_rate() {
    let r = eoc(&[4e-4, 1e-4], &[1000, 4000], EocConvention::TwoD);
    assert_eq!(r[0], None);
    assert!((r[1].unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn one_dimensional_rate() {
    let r = eoc(&[3.11e-2, 1.89e-2], &[100, 200], EocConvention::OneD);
    assert!((r[1].unwrap() - 0.7185).abs() < 1e-3);
}

#[test]
fn constant_error_has_zero_rate() {
    let r = eoc(&[0.1, 0.1, 0.1], &[10, 40, 160], EocConvention::TwoD);
    assert_eq!(r, vec![None, Some(0.0), Some(0.0)]);
    assert_eq!(eoc(&[0.1, 0.0], &[10, 40], EocConvention::TwoD)[1], None);
}

#[test]
fn magnetic_energy_of_uniform_field() {
    let sim = simulation(4);
    let b = interpolate_curl(|_| [1.0, 0.0], sim.bdm()).unwrap();
    assert!((magnetic_energy(&sim, &b) - 0.5).abs() < 1e-14);
    assert_eq!(magnetic_energy(&sim, &vec![0.0; b.len()]), 0.0);
}

#[test]
fn record_of_rest_state() {
    let sim = simulation(4);
    let b = interpolate_curl(|_| [1.0, 0.0], sim.bdm()).unwrap();
    let state = at_rest(&sim, b.clone());
    let rec = compute_record(&sim, &state, &sim.weak_divergence(&b)).unwrap();
    assert!((rec.total_mech_energy - 2.5).abs() < 1e-14);
    assert!((rec.total_energy - 3.0).abs() < 1e-14);
    assert!((rec.min_pressure - 1.0).abs() < 1e-15);
    assert_eq!(rec.min_density, 1.0);
    assert_eq!(rec.weak_div_fingerprint_drift, 0.0);
    let mass: f64 = state.hydro.states.iter().zip(sim.graph().lumped()).map(|(u, m)| m * u[0]).sum();
    assert!((mass - 1.0).abs() < 1e-14);
    assert_eq!(rec.csv_row().split(',').count(), 9);
}

#[test]
fn interpolant_of_linear_field_has_no_error() {
    let mesh = build_rect_mesh(5, 4, unit_square(), false, false).unwrap();
    let (p1, bdm) = (ScalarSpaceP1::new(&mesh), CurlSpaceBdm1::new(&mesh).unwrap());
    let f = |[x, y]: [f64; 2]| 2.0 * x - y + 0.5;
    let values: Vec<[f64; 1]> = interpolate_scalar(f, &p1).unwrap().into_iter().map(|v| [v]).collect();
    let e = error_norms_p1(&mesh, &p1, &values, |x| [f(x)]);
    assert!(e.l1 < 1e-14 && e.l2 < 1e-14 && e.linf() < 1e-14, "{e:?}");
    let g = |[x, y]: [f64; 2]| [1.0 + y, x - 2.0 * y];
    let b = interpolate_curl(g, &bdm).unwrap();
    let e = error_norms_bdm(&mesh, &bdm, &b, g);
    assert!(e.l1 < 1e-13 && e.linf() < 1e-13, "{e:?}");
}

#[test]
fn constant_offset_error() {
    let sim = simulation(3);
    let values = vec![[0.1, 0.0]; sim.p1().num_nodes()];
    let e = error_norms_p1(sim.mesh(), sim.p1(), &values, |_| [0.0, 0.0]);
    for v in [e.l1, e.l2, e.linf_quadrature, e.linf_nodal] {
        assert!((v - 0.1).abs() < 1e-15, "{e:?}");
    }
}
