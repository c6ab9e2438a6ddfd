//! Shared fixtures and independent oracles for the integration tests.

#![allow(dead_code)]

use mhd_core::eos::{self, GasParams};
use mhd_core::euler::{HydroStateField, State};
use mhd_core::fespace::{assemble_graph_matrices, GraphMatrices, ScalarSpaceP1};
use mhd_core::mesh::{build_rect_mesh, refine, Mesh, Rect};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_square() -> Rect {
    Rect::new(0.0, 1.0, 0.0, 1.0)
}

/// Periodic unit square with `n × n` cells.
pub fn periodic_mesh(n: usize) -> Mesh {
    build_rect_mesh(n, n, unit_square(), true, true).unwrap()
}

/// Periodic 2×2 mesh refined once: the two-level meshes of the random suites.
pub fn two_level_mesh() -> Mesh {
    refine(&periodic_mesh(2))
}

pub fn graph_of(mesh: &Mesh) -> GraphMatrices {
    assemble_graph_matrices(&ScalarSpaceP1::new(mesh))
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Random `(ρ, v, p)` with density and pressure spread over four decades.
pub fn random_primitive(rng: &mut impl Rng) -> (f64, [f64; 2], f64) {
    let rho = log_uniform(rng, 1e-2, 1e2);
    let p = log_uniform(rng, 1e-2, 1e2);
    let v = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
    (rho, v, p)
}

pub fn random_state(rng: &mut impl Rng, gas: &GasParams) -> State {
    let (rho, v, p) = random_primitive(rng);
    eos::conserved_from_primitive(rho, v, p, gas)
}

/// Random admissible field whose neighbouring states differ by at most a
/// factor `spread` in density and pressure around a random base state.
pub fn random_field(rng: &mut impl Rng, n: usize, gas: &GasParams, spread: f64) -> HydroStateField {
    let (rho0, v0, p0) = random_primitive(rng);
    let states = (0..n)
        .map(|_| {
            let rho = rho0 * log_uniform(rng, 1.0 / spread, spread);
            let p = p0 * log_uniform(rng, 1.0 / spread, spread);
            let v = [v0[0] + rng.gen_range(-1.0..1.0), v0[1] + rng.gen_range(-1.0..1.0)];
            eos::conserved_from_primitive(rho, v, p, gas)
        })
        .collect();
    HydroStateField::new(states)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Left and right states of a 1D Riemann problem: density, normal velocity, pressure.
#[derive(Clone, Copy, Debug)]
pub struct Riemann1d {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

fn wave_curve(p: f64, s: &Riemann1d, gamma: f64) -> f64 {
    let c = (gamma * s.p / s.rho).sqrt();
    if p > s.p {
        let a = 2.0 / ((gamma + 1.0) * s.rho);
        let b = (gamma - 1.0) / (gamma + 1.0) * s.p;
        (p - s.p) * (a / (p + b)).sqrt()
    } else {
        2.0 * c / (gamma - 1.0) * ((p / s.p).powf((gamma - 1.0) / (2.0 * gamma)) - 1.0)
    }
}

/// Exact star pressure of the ideal-gas Riemann problem, by bisection.
pub fn exact_star_pressure(l: &Riemann1d, r: &Riemann1d, gamma: f64) -> f64 {
    let f = |p: f64| wave_curve(p, l, gamma) + wave_curve(p, r, gamma) + (r.u - l.u);
    if f(0.0) >= 0.0 {
        return 0.0;
    }
    let mut hi = l.p.max(r.p);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    hi
}

/// Exact maximum wave speed `max((λ₁⁻)₋, (λ₃⁺)₊)` of the Riemann problem.
pub fn exact_lambda_max(l: &Riemann1d, r: &Riemann1d, gamma: f64) -> f64 {
    let ps = exact_star_pressure(l, r, gamma);
    let k = (gamma + 1.0) / (2.0 * gamma);
    let cl = (gamma * l.p / l.rho).sqrt();
    let cr = (gamma * r.p / r.rho).sqrt();
    let lam1 = l.u - cl * (1.0 + k * ((ps - l.p) / l.p).max(0.0)).sqrt();
    let lam3 = r.u + cr * (1.0 + k * ((ps - r.p) / r.p).max(0.0)).sqrt();
    (-lam1).max(0.0).max(lam3.max(0.0))
}

/// Relative difference `|a − b| / max(|a|, |b|, floor)`.
pub fn rel_diff(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}
