//! Entropy-viscosity indicator for the high-order step.

use super::low::ViscosityGraph;
use super::state::{flux_dot, sub, HydroStateField, Primitive};
use crate::eos::{self, GasParams};
use crate::error::Result;
use crate::fespace::GraphMatrices;

/// Entropy production of the Galerkin scheme at every node,
/// `R_i = Σ_j −(f(U_j)c_ij)·∇η(U_i) + q(U_j)·c_ij` with `q = vη`.
pub fn entropy_residual(
    field: &HydroStateField,
    prims: &[Primitive],
    graph: &GraphMatrices,
    gas: &GasParams,
) -> Result<Vec<f64>> {
    let eta: Vec<f64> = field.states.iter().map(|u| eos::math_entropy(u, gas)).collect::<Result<_>>()?;
    let mut res = vec![0.0; graph.num_nodes()];
    for (i, r) in res.iter_mut().enumerate() {
        let ui = &field.states[i];
        let grad = eos::math_entropy_gradient(ui, gas)?;
        let wi = &prims[i];
        let mut acc = 0.0;
        for k in graph.row(i) {
            let j = graph.col(k);
            if j == i {
                continue;
            }
            let c = graph.c(k);
            let wj = &prims[j];
            // Differences against node i vanish in the sum since Σ_j c_ij = 0.
            let df = sub(&flux_dot(&field.states[j], wj, c), &flux_dot(ui, wi, c));
            let dq = eta[j] * (wj.v[0] * c[0] + wj.v[1] * c[1]) - eta[i] * (wi.v[0] * c[0] + wi.v[1] * c[1]);
            acc += dq - (df[0] * grad[0] + df[1] * grad[1] + df[2] * grad[2] + df[3] * grad[3]);
        }
        *r = acc;
    }
    Ok(res)
}

/// `|R_i|` divided by `max(ρ_i^max s_i^max − ρ_i^min s_i^min, ε‖η‖_∞)`, with
/// extrema taken over the stencil of `i`.
pub fn normalized_entropy_residual(
    residual: &[f64],
    field: &HydroStateField,
    graph: &GraphMatrices,
    gas: &GasParams,
    eps: f64,
) -> Result<Vec<f64>> {
    let mut s = Vec::with_capacity(field.len());
    let mut eta_max = 0.0f64;
    for u in &field.states {
        let si = eos::specific_entropy(u, gas)?;
        eta_max = eta_max.max((u[0] * si).abs());
        s.push(si);
    }
    let floor = eps * eta_max;
    let mut out = vec![0.0; graph.num_nodes()];
    for (i, o) in out.iter_mut().enumerate() {
        let (mut rmin, mut rmax) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut smin, mut smax) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in graph.row(i) {
            let j = graph.col(k);
            let rho = field.states[j][0];
            rmin = rmin.min(rho);
            rmax = rmax.max(rho);
            smin = smin.min(s[j]);
            smax = smax.max(s[j]);
        }
        let denom = (rmax * smax - rmin * smin).max(floor);
        *o = if denom > 0.0 { residual[i].abs() / denom } else { 0.0 };
    }
    Ok(out)
}

/// `d_ij^H = min(d_ij^L, c_EV · max(R̃_i, R̃_j))`.
pub fn high_order_viscosity(
    low: &ViscosityGraph,
    normalized: &[f64],
    graph: &GraphMatrices,
    c_ev: f64,
) -> ViscosityGraph {
    let mut d = vec![0.0; low.d.len()];
    for i in 0..graph.num_nodes() {
        for k in graph.row(i) {
            let j = graph.col(k);
            if j != i {
                d[k] = low.d[k].min(c_ev * normalized[i].max(normalized[j]));
            }
        }
    }
    let mut visc = ViscosityGraph { d };
    visc.fix_diagonal(graph);
    visc
}
