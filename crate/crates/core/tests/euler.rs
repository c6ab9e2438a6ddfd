mod common;

use mhd_core::bench::problem_by_name;
use mhd_core::eos::{self, GasParams};
use mhd_core::euler::limiter::{apply_limiters, flux_corrections};
use mhd_core::euler::{
    bar_states, compute_local_bounds, compute_time_step, entropy_residual, high_order_step, high_order_viscosity,
    lambda_sharp, line_search, low_order_step, low_order_viscosity, normalized_entropy_residual, primitives,
    BoundaryConditions, EulerConfig, EulerSolver, HydroStateField, Mode, Relaxation,
};
use mhd_core::fespace::{assemble_graph_matrices, GraphMatrices, ScalarSpaceP1};
use mhd_core::linalg::CsrMatrix;
use mhd_core::mesh::build_rect_mesh;
use proptest::prelude::*;
use rand::Rng;

use common::{exact_lambda_max, graph_of, periodic_mesh, random_field, random_state, rng, unit_square, Riemann1d};

fn gas14() -> GasParams {
    GasParams::ideal(1.4)
}

fn low_visc(field: &HydroStateField, g: &GraphMatrices, gas: &GasParams) -> mhd_core::euler::ViscosityGraph {
    low_order_viscosity(&primitives(field, gas).unwrap(), g, gas)
}

fn totals_close(a: [f64; 4], b: [f64; 4], tol: f64) -> bool {
    (0..4).all(|c| (a[c] - b[c]).abs() <= tol * a[c].abs().max(b[c].abs()).max(1.0))
}

#[test]
fn rest_state_wavespeed_is_sound_speed() {
    let gas = gas14();
    let u = eos::conserved_from_primitive(1.0, [0.0, 0.0], 1.0, &gas);
    let l = lambda_sharp(&u, &u, [1.0, 0.0], &gas).unwrap();
    assert!((l - 1.4f64.sqrt()).abs() < 1e-14);
}

#[test]
fn sod_wavespeed_dominates_exact() {
    let gas = gas14();
    let ul = eos::conserved_from_primitive(1.0, [0.0, 0.0], 1.0, &gas);
    let ur = eos::conserved_from_primitive(0.125, [0.0, 0.0], 0.1, &gas);
    let exact = exact_lambda_max(&Riemann1d { rho: 1.0, u: 0.0, p: 1.0 }, &Riemann1d { rho: 0.125, u: 0.0, p: 0.1 }, 1.4);
    assert!((exact - 1.7522).abs() < 1e-4, "exact oracle {exact}");
    let l = lambda_sharp(&ul, &ur, [1.0, 0.0], &gas).unwrap();
    assert!(l >= exact);
    assert!(l >= 1.7522);
}

#[test]
fn wavespeed_mirror_symmetry() {
    let gas = gas14();
    let mut r = rng(1);
    for _ in 0..200 {
        let (a, b) = (random_state(&mut r, &gas), random_state(&mut r, &gas));
        let th: f64 = r.gen_range(0.0..std::f64::consts::TAU);
        let n = [th.cos(), th.sin()];
        let l1 = lambda_sharp(&a, &b, n, &gas).unwrap();
        let l2 = lambda_sharp(&b, &a, [-n[0], -n[1]], &gas).unwrap();
        assert!((l1 - l2).abs() <= 1e-12 * l1.max(1.0));
    }
}

#[test]
fn low_order_viscosity_is_symmetric() {
    let gas = gas14();
    let g = graph_of(&periodic_mesh(5));
    let field = random_field(&mut rng(2), g.num_nodes(), &gas, 3.0);
    let d = low_visc(&field, &g, &gas);
    for i in 0..g.num_nodes() {
        let mut s = 0.0;
        for k in g.row(i) {
            assert_eq!(d.d[k], d.d[g.transpose(k)]);
            if g.col(k) != i {
                assert!(d.d[k] >= 0.0);
                s += d.d[k];
            }
        }
        assert!((d.d[g.diag(i)] + s).abs() <= 1e-14 * s);
    }
}

#[test]
fn doubling_viscosity_halves_time_step() {
    let gas = gas14();
    let g = graph_of(&periodic_mesh(4));
    let field = random_field(&mut rng(3), g.num_nodes(), &gas, 2.0);
    let d = low_visc(&field, &g, &gas);
    let t1 = compute_time_step(&g, &d, 0.5);
    let t2 = compute_time_step(&g, &d.scaled(2.0), 0.5);
    assert!((t1 - 2.0 * t2).abs() <= 1e-15 * t1);
}

#[test]
fn rest_state_time_step_matches_hand_assembly() {
    // 2×2 cells on the unit square, fluid at rest with c = √1.4.
    let mesh = build_rect_mesh(2, 2, unit_square(), false, false).unwrap();
    let p1 = ScalarSpaceP1::new(&mesh);
    let g = assemble_graph_matrices(&p1);
    let gas = gas14();
    let u = eos::conserved_from_primitive(1.0, [0.0, 0.0], 1.0, &gas);
    let field = HydroStateField::uniform(g.num_nodes(), u);
    let d = low_visc(&field, &g, &gas);
    let tau = compute_time_step(&g, &d, 0.1);

    // Independent assembly of c_ij = Σ_T |T|/3 ∇φ_j from vertex coordinates.
    let n = g.num_nodes();
    let mut c = vec![vec![[0.0f64; 2]; n]; n];
    let mut m = vec![0.0; n];
    for t in 0..mesh.num_triangles() {
        let p = mesh.triangle_coords(t);
        let dofs = p1.cell_dofs()[t];
        let area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
        for b in 0..3 {
            let (q, r) = (p[(b + 1) % 3], p[(b + 2) % 3]);
            let grad = [(q[1] - r[1]) / (2.0 * area), (r[0] - q[0]) / (2.0 * area)];
            for a in 0..3 {
                c[dofs[a]][dofs[b]][0] += area / 3.0 * grad[0];
                c[dofs[a]][dofs[b]][1] += area / 3.0 * grad[1];
            }
            m[dofs[b]] += area / 3.0;
        }
    }
    let norm = |v: [f64; 2]| (v[0] * v[0] + v[1] * v[1]).sqrt();
    let cs = 1.4f64.sqrt();
    let mut expected = f64::INFINITY;
    for i in 0..n {
        let dii: f64 = (0..n).filter(|&j| j != i).map(|j| cs * norm(c[i][j]).max(norm(c[j][i]))).sum();
        expected = expected.min(m[i] / (2.0 * dii));
    }
    assert!((tau - 0.1 * expected).abs() <= 1e-14 * tau, "{tau} vs {}", 0.1 * expected);
}

#[test]
fn uniform_state_is_stationary() {
    let gas = gas14();
    let g = graph_of(&periodic_mesh(4));
    let u = eos::conserved_from_primitive(1.3, [0.4, -0.2], 2.0, &gas);
    let field = HydroStateField::uniform(g.num_nodes(), u);
    let d = low_visc(&field, &g, &gas);
    let out = low_order_step(&field, &g, &d, 0.9 * compute_time_step(&g, &d, 1.0), &gas).unwrap();
    for v in &out.states {
        assert!(totals_close(*v, u, 1e-14));
    }
    let solver = EulerSolver::new(g.clone(), gas, EulerConfig::default(), BoundaryConditions::none());
    for mode in [Mode::Low, Mode::HighLimited] {
        let (out, _) = solver.euler_system_update(&field, 0.5, mode, None).unwrap();
        for v in &out.states {
            assert!(totals_close(*v, u, 1e-13));
        }
    }
    let prims = primitives(&field, &gas).unwrap();
    let res = entropy_residual(&field, &prims, &g, &gas).unwrap();
    assert!(res.iter().all(|r| r.abs() < 1e-12));
}

#[test]
fn low_order_step_conserves_on_periodic_mesh() {
    let gas = gas14();
    let g = graph_of(&periodic_mesh(6));
    let mut r = rng(4);
    for _ in 0..20 {
        let field = random_field(&mut r, g.num_nodes(), &gas, 3.0);
        let d = low_visc(&field, &g, &gas);
        let out = low_order_step(&field, &g, &d, compute_time_step(&g, &d, 1.0), &gas).unwrap();
        assert!(totals_close(field.totals(g.lumped()), out.totals(g.lumped()), 1e-12));
    }
}

#[test]
fn high_order_step_with_lumped_mass_and_low_viscosity_is_low_order() {
    let gas = gas14();
    let g = graph_of(&periodic_mesh(5));
    let field = random_field(&mut rng(5), g.num_nodes(), &gas, 2.0);
    let prims = primitives(&field, &gas).unwrap();
    let d = low_visc(&field, &g, &gas);
    let tau = compute_time_step(&g, &d, 0.5);
    let n = g.num_nodes();
    let lumped = CsrMatrix::from_triplets(n, n, &(0..n).map(|i| (i, i, g.lumped()[i])).collect::<Vec<_>>()).unwrap();
    let high = high_order_step(&field, &prims, &g, &lumped, &d, tau, None, 1e-15, 10).unwrap();
    let low = low_order_step(&field, &g, &d, tau, &gas).unwrap();
    for (a, b) in high.states.iter().zip(&low.states) {
        assert!(totals_close(*a, *b, 1e-13));
    }
}

#[test]
fn consistent_mass_high_order_step_conserves() {
    let gas = gas14();
    let g = graph_of(&periodic_mesh(6));
    let field = random_field(&mut rng(6), g.num_nodes(), &gas, 1.5);
    let prims = primitives(&field, &gas).unwrap();
    let d = low_visc(&field, &g, &gas);
    let tau = compute_time_step(&g, &d, 0.3);
    let high = high_order_step(&field, &prims, &g, &g.mass_matrix(), &d.scaled(0.3), tau, None, 1e-14, 500).unwrap();
    assert!(totals_close(field.totals(g.lumped()), high.totals(g.lumped()), 1e-11));
}

#[test]
fn entropy_indicator_decreases_under_refinement_on_vortex() {
    let spec = problem_by_name("vortex").unwrap();
    let mut maxima = Vec::new();
    for level in 0..2 {
        let (sim, state) = spec.setup(level).unwrap();
        let gas = *sim.gas();
        let prims = primitives(&state.hydro, &gas).unwrap();
        let res = entropy_residual(&state.hydro, &prims, sim.graph(), &gas).unwrap();
        let norm = normalized_entropy_residual(&res, &state.hydro, sim.graph(), &gas, 1e-8).unwrap();
        maxima.push(norm.iter().fold(0.0f64, |m, v| m.max(*v)));
    }
    assert!(maxima[1] < maxima[0], "{maxima:?}");
}

#[test]
fn entropy_indicator_at_briowu_interface() {
    let spec = problem_by_name("briowu").unwrap();
    let (sim, state) = spec.setup(0).unwrap();
    let gas = *sim.gas();
    let g = sim.graph();
    let prims = primitives(&state.hydro, &gas).unwrap();
    // At rest ∇_m η and the entropy flux vanish, so the residual is zero even
    // across the initial jump.
    let res = entropy_residual(&state.hydro, &prims, g, &gas).unwrap();
    assert!(res.iter().all(|r| *r == 0.0));

    let mut field = state.hydro.clone();
    for _ in 0..20 {
        field = sim.euler().stage(&field, spec.cfl, Mode::Low, None).unwrap().0;
    }
    let prims = primitives(&field, &gas).unwrap();
    let res = entropy_residual(&field, &prims, g, &gas).unwrap();
    let norm = normalized_entropy_residual(&res, &field, g, &gas, 1e-8).unwrap();
    let d_low = low_order_viscosity(&prims, g, &gas);
    let d_high = high_order_viscosity(&d_low, &norm, g, 1.0);
    // Near the interface the indicator saturates the low-order viscosity;
    // beyond the reach of 20 steps the data is untouched.
    let coords = sim.p1().coords();
    let h = 1.0 / sim.mesh().nx() as f64;
    let mut saturation = 0.0f64;
    for i in 0..g.num_nodes() {
        let dist = (coords[i][0] - 0.5).abs();
        if dist <= 2.0 * h {
            for k in g.row(i) {
                if g.col(k) != i {
                    saturation = saturation.max(d_high.d[k] / d_low.d[k]);
                }
            }
        }
        if dist > 30.0 * h {
            assert_eq!(norm[i], 0.0);
        }
    }
    assert!(saturation > 0.99, "{saturation}");
}

#[test]
fn high_order_viscosity_never_exceeds_low_order() {
    let gas = gas14();
    let g = graph_of(&periodic_mesh(5));
    let field = random_field(&mut rng(7), g.num_nodes(), &gas, 4.0);
    let prims = primitives(&field, &gas).unwrap();
    let d = low_visc(&field, &g, &gas);
    let res = entropy_residual(&field, &prims, &g, &gas).unwrap();
    let norm = normalized_entropy_residual(&res, &field, &g, &gas, 1e-8).unwrap();
    let dh = high_order_viscosity(&d, &norm, &g, 1.0);
    for k in 0..d.d.len() {
        if d.d[k] >= 0.0 {
            assert!(dh.d[k] >= 0.0 && dh.d[k] <= d.d[k]);
        }
    }
}

#[test]
fn line_search_examples() {
    let gas = gas14();
    let u = eos::conserved_from_primitive(1.0, [0.3, 0.0], 1.0, &gas);
    let s = eos::surrogate_entropy(&u, &gas).unwrap();
    assert_eq!(line_search(&u, &[0.0; 4], 0.5, 1.5, s, &gas), 1.0);
    let rest = [1.0, 0.0, 0.0, 2.5];
    let l = line_search(&rest, &[1.0, 0.0, 0.0, 2.5], 0.5, 1.5, 0.0, &gas);
    assert!((l - 0.5).abs() < 1e-15);
    let l = line_search(&rest, &[-1.0, 0.0, 0.0, 0.0], 0.75, 1.5, 0.0, &gas);
    assert!((l - 0.25).abs() < 1e-15);
}

#[test]
fn local_bounds_of_uniform_state() {
    let gas = gas14();
    let g = graph_of(&periodic_mesh(4));
    let u = eos::conserved_from_primitive(2.0, [0.1, 0.1], 1.0, &gas);
    let field = HydroStateField::uniform(g.num_nodes(), u);
    let prims = primitives(&field, &gas).unwrap();
    let d = low_visc(&field, &g, &gas);
    let bars = bar_states(&field, &prims, &g, &d);
    let relax = Relaxation::default();
    let b = compute_local_bounds(&field, &bars, &g, &gas, &relax);
    let s = eos::surrogate_entropy(&u, &gas).unwrap();
    for i in 0..g.num_nodes() {
        let r = relax.amount(g.lumped()[i], g.measure());
        assert!(r > 0.0 && r < 1.0);
        assert!((b.rho_min[i] - (1.0 - r) * 2.0).abs() < 1e-14);
        assert!((b.rho_max[i] - (1.0 + r) * 2.0).abs() < 1e-14);
        assert!((b.s_min[i] - (1.0 - r) * s).abs() < 1e-13 * s);
    }
}

#[test]
fn unrelaxed_bounds_are_stencil_extrema() {
    let gas = gas14();
    let g = graph_of(&periodic_mesh(4));
    let field = random_field(&mut rng(8), g.num_nodes(), &gas, 3.0);
    let prims = primitives(&field, &gas).unwrap();
    let d = low_visc(&field, &g, &gas);
    let bars = bar_states(&field, &prims, &g, &d);
    let b = compute_local_bounds(&field, &bars, &g, &gas, &Relaxation { kappa: 0.0, ..Relaxation::default() });
    for i in 0..g.num_nodes() {
        let rhos = g.row(i).flat_map(|k| [field.states[g.col(k)][0], bars[k][0]]);
        let (lo, hi) = rhos.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r), b.max(r)));
        assert_eq!(b.rho_min[i], lo);
        assert_eq!(b.rho_max[i], hi);
    }
}

struct LimiterSetup {
    g: GraphMatrices,
    low: HydroStateField,
    high: HydroStateField,
    corrections: Vec<[f64; 4]>,
}

fn limiter_setup(seed: u64) -> LimiterSetup {
    let gas = gas14();
    let g = graph_of(&periodic_mesh(5));
    let field = random_field(&mut rng(seed), g.num_nodes(), &gas, 2.0);
    let prims = primitives(&field, &gas).unwrap();
    let d = low_visc(&field, &g, &gas);
    let tau = compute_time_step(&g, &d, 0.5);
    let dh = d.scaled(0.2);
    let low = low_order_step(&field, &g, &d, tau, &gas).unwrap();
    let high = high_order_step(&field, &prims, &g, &g.mass_matrix(), &dh, tau, Some(&low), 1e-14, 500).unwrap();
    let corrections = flux_corrections(&field, &high, &g, &d, &dh, tau);
    LimiterSetup { g, low, high, corrections }
}

#[test]
fn zero_limiters_give_low_order() {
    let s = limiter_setup(9);
    let out = apply_limiters(&s.low, &s.corrections, &vec![0.0; s.corrections.len()], &s.g);
    assert_eq!(out, s.low);
}

#[test]
fn unit_limiters_give_high_order() {
    let s = limiter_setup(10);
    let out = apply_limiters(&s.low, &s.corrections, &vec![1.0; s.corrections.len()], &s.g);
    for (a, b) in out.states.iter().zip(&s.high.states) {
        assert!(totals_close(*a, *b, 1e-12), "{a:?} vs {b:?}");
    }
}

#[test]
fn symmetric_limiters_conserve() {
    let s = limiter_setup(11);
    let mut r = rng(12);
    let mut l = vec![0.0; s.corrections.len()];
    for i in 0..s.g.num_nodes() {
        for k in s.g.row(i) {
            if s.g.col(k) > i {
                let v: f64 = r.gen();
                l[k] = v;
                l[s.g.transpose(k)] = v;
            }
        }
    }
    let out = apply_limiters(&s.low, &s.corrections, &l, &s.g);
    assert!(totals_close(out.totals(s.g.lumped()), s.low.totals(s.g.lumped()), 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bar_states_are_admissible(seed in any::<u64>(), spread in 1.0f64..20.0) {
        let gas = gas14();
        let g = graph_of(&periodic_mesh(3));
        let field = random_field(&mut rng(seed), g.num_nodes(), &gas, spread);
        let prims = primitives(&field, &gas).unwrap();
        let d = low_visc(&field, &g, &gas);
        for bar in bar_states(&field, &prims, &g, &d) {
            prop_assert!(eos::is_admissible(&bar, &gas), "{:?}", bar);
        }
    }

    #[test]
    fn limited_stage_is_conservative_and_admissible(seed in any::<u64>()) {
        let gas = gas14();
        let g = graph_of(&periodic_mesh(4));
        let field = random_field(&mut rng(seed), g.num_nodes(), &gas, 3.0);
        let solver = EulerSolver::new(g.clone(), gas, EulerConfig::default(), BoundaryConditions::none());
        let (out, _) = solver.stage(&field, 0.9, Mode::HighLimited, None).unwrap();
        prop_assert!(out.check_admissible(&gas).is_ok());
        prop_assert!(totals_close(out.totals(g.lumped()), field.totals(g.lumped()), 1e-12));
    }
}
