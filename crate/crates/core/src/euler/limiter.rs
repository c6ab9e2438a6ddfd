//! Convex limiting of the high-order update towards the low-order one.

use super::low::ViscosityGraph;
use super::state::{sub, HydroStateField, State};
use crate::eos::{self, GasParams};
use crate::error::{Error, Result};
use crate::fespace::GraphMatrices;

/// Relaxation of the local bounds: `1 ± min(κ (m_i/|Ω|)^exponent, cap)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Relaxation {
    pub kappa: f64,
    pub exponent: f64,
    pub cap: f64,
}

impl Default for Relaxation {
    fn default() -> Self {
        Relaxation { kappa: 4.0, exponent: 1.5 / 2.0, cap: 0.5 }
    }
}

impl Relaxation {
    pub fn amount(&self, m_i: f64, measure: f64) -> f64 {
        (self.kappa * (m_i / measure).powf(self.exponent)).min(self.cap)
    }
}

/// Per-node density window and surrogate-entropy minimum.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalBounds {
    pub rho_min: Vec<f64>,
    pub rho_max: Vec<f64>,
    pub s_min: Vec<f64>,
}

/// Bounds from the states and bar states over each stencil.
///
/// `bars` is laid out on the graph pattern, as produced by
/// [`bar_states`](super::low::bar_states).
pub fn compute_local_bounds(
    field: &HydroStateField,
    bars: &[State],
    graph: &GraphMatrices,
    gas: &GasParams,
    relax: &Relaxation,
) -> LocalBounds {
    let n = graph.num_nodes();
    let s_node: Vec<f64> = field.states.iter().map(|u| eos::surrogate_entropy_unchecked(u, gas)).collect();
    let mut b = LocalBounds { rho_min: vec![0.0; n], rho_max: vec![0.0; n], s_min: vec![0.0; n] };
    for i in 0..n {
        let (mut rmin, mut rmax, mut smin) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY);
        for k in graph.row(i) {
            let j = graph.col(k);
            let bar = &bars[k];
            rmin = rmin.min(field.states[j][0]).min(bar[0]);
            rmax = rmax.max(field.states[j][0]).max(bar[0]);
            smin = smin.min(s_node[j]).min(eos::surrogate_entropy_unchecked(bar, gas));
        }
        let r = relax.amount(graph.lumped()[i], graph.measure());
        b.rho_min[i] = (1.0 - r) * rmin;
        b.rho_max[i] = (1.0 + r) * rmax;
        b.s_min[i] = (1.0 - r) * smin;
    }
    b
}

const LS_TOL: f64 = 1e-10;
const LS_MAX_ITER: usize = 50;

// ψ(ℓ) = ε(U+ℓP) − s̃_min ρ^γ (1−bρ)^(1−γ) and its derivative; concave in ℓ.
fn psi(u: &State, p: &State, l: f64, s_min: f64, gas: &GasParams) -> (f64, f64) {
    let rho = u[0] + l * p[0];
    let m = [u[1] + l * p[1], u[2] + l * p[2]];
    let e = u[3] + l * p[3];
    let mm = m[0] * m[0] + m[1] * m[1];
    let eps = e - 0.5 * mm / rho;
    let deps = p[3] - (m[0] * p[1] + m[1] * p[2]) / rho + 0.5 * mm * p[0] / (rho * rho);
    let g = gas.gamma;
    let cov = 1.0 - gas.b * rho;
    let w = if gas.b == 0.0 { rho.powf(g) } else { rho.powf(g) * cov.powf(1.0 - g) };
    let dw = w * (g / rho + (g - 1.0) * gas.b / cov) * p[0];
    (eps - s_min * w, deps - s_min * dw)
}

/// Largest `ℓ ∈ [0, 1]` keeping `U + ℓP` inside the density window and above
/// the surrogate-entropy minimum.
///
/// The density constraints are linear and solved exactly. The entropy
/// constraint is concave along the ray; its root is bracketed by Newton steps
/// from the infeasible side and secant steps from the feasible side, with
/// bisection as a fallback. The feasible end of the bracket is returned.
pub fn line_search(u: &State, p: &State, rho_min: f64, rho_max: f64, s_min: f64, gas: &GasParams) -> f64 {
    let mut l = 1.0f64;
    if p[0] < 0.0 && u[0] + p[0] < rho_min {
        l = ((rho_min - u[0]) / p[0]).clamp(0.0, 1.0);
    }
    if p[0] > 0.0 && u[0] + l * p[0] > rho_max {
        l = l.min(((rho_max - u[0]) / p[0]).clamp(0.0, 1.0));
    }
    if l <= 0.0 {
        return 0.0;
    }
    let (f_hi, _) = psi(u, p, l, s_min, gas);
    if f_hi >= 0.0 {
        return l;
    }
    let (f_lo, _) = psi(u, p, 0.0, s_min, gas);
    if !(f_lo >= 0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, l);
    let (mut flo, mut fhi) = (f_lo, f_hi);
    for _ in 0..LS_MAX_ITER {
        if hi - lo <= LS_TOL {
            break;
        }
        let width = hi - lo;
        let (_, dhi) = psi(u, p, hi, s_min, gas);
        let newton = if dhi < 0.0 { hi - fhi / dhi } else { f64::NAN };
        let secant = lo - flo * (hi - lo) / (fhi - flo);
        let mut moved = false;
        if newton.is_finite() && newton > lo && newton < hi {
            let (f, _) = psi(u, p, newton, s_min, gas);
            if f < 0.0 {
                hi = newton;
                fhi = f;
                moved = true;
            } else {
                lo = newton;
                flo = f;
            }
        }
        if secant.is_finite() && secant > lo && secant < hi {
            let (f, _) = psi(u, p, secant, s_min, gas);
            if f >= 0.0 {
                lo = secant;
                flo = f;
            } else {
                hi = secant;
                fhi = f;
            }
            moved = true;
        }
        if !moved || hi - lo > 0.5 * width {
            let mid = 0.5 * (lo + hi);
            let (f, _) = psi(u, p, mid, s_min, gas);
            if f >= 0.0 {
                lo = mid;
                flo = f;
            } else {
                hi = mid;
                fhi = f;
            }
        }
    }
    lo
}

/// Antisymmetric flux corrections `A_ij` on the graph pattern.
pub fn flux_corrections(
    field: &HydroStateField,
    high: &HydroStateField,
    graph: &GraphMatrices,
    visc_low: &ViscosityGraph,
    visc_high: &ViscosityGraph,
    tau: f64,
) -> Vec<State> {
    let n = graph.num_nodes();
    let dh: Vec<State> = (0..n).map(|i| sub(&high.states[i], &field.states[i])).collect();
    let mass = graph.mass();
    let mut a = vec![[0.0; 4]; graph.pattern().nnz()];
    for i in 0..n {
        for k in graph.row(i) {
            let j = graph.col(k);
            if j == i {
                continue;
            }
            let du = sub(&field.states[j], &field.states[i]);
            let ddh = sub(&dh[j], &dh[i]);
            let dd = visc_low.d[k] - visc_high.d[k];
            for c in 0..4 {
                a[k][c] = -tau * dd * du[c] - mass[k] * ddh[c];
            }
        }
    }
    a
}

/// Preliminary limiters `l_ij` from the line search on `P_ij = A_ij/(λ_i m_i)`.
pub fn preliminary_limiters(
    low: &HydroStateField,
    corrections: &[State],
    graph: &GraphMatrices,
    bounds: &LocalBounds,
    gas: &GasParams,
) -> Vec<f64> {
    let mut l = vec![0.0; corrections.len()];
    for i in 0..graph.num_nodes() {
        let scale = 1.0 / (graph.lambda(i) * graph.lumped()[i]);
        for k in graph.row(i) {
            if graph.col(k) == i {
                continue;
            }
            let a = &corrections[k];
            let p = [a[0] * scale, a[1] * scale, a[2] * scale, a[3] * scale];
            l[k] = line_search(&low.states[i], &p, bounds.rho_min[i], bounds.rho_max[i], bounds.s_min[i], gas);
        }
    }
    l
}

/// `m_i U_i = m_i U_i^L + Σ_j ℓ_ij A_ij` for given limiter values.
pub fn apply_limiters(low: &HydroStateField, corrections: &[State], limiters: &[f64], graph: &GraphMatrices) -> HydroStateField {
    let mut out = low.states.clone();
    for (i, u) in out.iter_mut().enumerate() {
        let inv_m = 1.0 / graph.lumped()[i];
        for k in graph.row(i) {
            let lk = limiters[k];
            if lk != 0.0 {
                for c in 0..4 {
                    u[c] += inv_m * lk * corrections[k][c];
                }
            }
        }
    }
    HydroStateField::new(out)
}

/// Checks the bounds with a slack covering round-off in `ρ` and in the
/// cancellation `E − |m|²/(2ρ)`.
pub fn check_bounds(field: &HydroStateField, bounds: &LocalBounds, gas: &GasParams) -> Result<()> {
    for (i, u) in field.states.iter().enumerate() {
        let rho = u[0];
        let rho_tol = 1e-12 * bounds.rho_max[i].abs();
        if !(rho >= bounds.rho_min[i] - rho_tol && rho <= bounds.rho_max[i] + rho_tol) {
            return Err(Error::Bounds { node: i });
        }
        let s = eos::surrogate_entropy_unchecked(u, gas);
        let s_tol = 1e-12 * bounds.s_min[i].abs() + 1e-13 * u[3].abs() * rho.powf(-gas.gamma);
        if !(s >= bounds.s_min[i] - s_tol) {
            return Err(Error::Bounds { node: i });
        }
    }
    Ok(())
}

/// Limited update between `low` and `high`, symmetrising `ℓ_ij = min(l_ij, l_ji)`.
#[allow(clippy::too_many_arguments)]
pub fn convex_limited_update(
    low: &HydroStateField,
    high: &HydroStateField,
    field: &HydroStateField,
    graph: &GraphMatrices,
    visc_low: &ViscosityGraph,
    visc_high: &ViscosityGraph,
    tau: f64,
    bounds: &LocalBounds,
    gas: &GasParams,
) -> Result<HydroStateField> {
    let a = flux_corrections(field, high, graph, visc_low, visc_high, tau);
    let pre = preliminary_limiters(low, &a, graph, bounds, gas);
    let mut lim = vec![0.0; pre.len()];
    for (k, l) in lim.iter_mut().enumerate() {
        *l = pre[k].min(pre[graph.transpose(k)]);
    }
    let out = apply_limiters(low, &a, &lim, graph);
    check_bounds(&out, bounds, gas)?;
    Ok(out)
}
