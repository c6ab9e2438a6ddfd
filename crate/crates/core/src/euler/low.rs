//! First-order invariant-domain-preserving graph-viscosity step.

use super::state::{axpy, flux_dot, primitives, sub, HydroStateField, Primitive, State};
use super::wavespeed::lambda_sharp_prim;
use crate::eos::GasParams;
use crate::error::{Error, Result};
use crate::fespace::GraphMatrices;

/// Graph viscosities on the CSR pattern of a [`GraphMatrices`], diagonal
/// entries holding `d_ii = −Σ_{j≠i} d_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct ViscosityGraph {
    pub d: Vec<f64>,
}

impl ViscosityGraph {
    /// Recomputes the diagonal from the off-diagonal entries.
    pub fn fix_diagonal(&mut self, graph: &GraphMatrices) {
        for i in 0..graph.num_nodes() {
            let dk = graph.diag(i);
            let mut s = 0.0;
            for k in graph.row(i) {
                if k != dk {
                    s += self.d[k];
                }
            }
            self.d[dk] = -s;
        }
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        ViscosityGraph { d: self.d.iter().map(|v| v * factor).collect() }
    }
}

/// `d_ij^L = max(λ#(U_i, U_j, n_ij)|c_ij|, λ#(U_j, U_i, n_ji)|c_ji|)`.
pub fn low_order_viscosity(prims: &[Primitive], graph: &GraphMatrices, gas: &GasParams) -> ViscosityGraph {
    let mut d = vec![0.0; graph.pattern().nnz()];
    for i in 0..graph.num_nodes() {
        for k in graph.row(i) {
            let j = graph.col(k);
            if j <= i {
                continue;
            }
            let kt = graph.transpose(k);
            let (cij, cji) = (graph.cnorm(k), graph.cnorm(kt));
            let a = if cij > 0.0 { lambda_sharp_prim(&prims[i], &prims[j], graph.normal(k), gas) * cij } else { 0.0 };
            let b = if cji > 0.0 { lambda_sharp_prim(&prims[j], &prims[i], graph.normal(kt), gas) * cji } else { 0.0 };
            let v = a.max(b);
            d[k] = v;
            d[kt] = v;
        }
    }
    let mut visc = ViscosityGraph { d };
    visc.fix_diagonal(graph);
    visc
}

/// Largest stable step scaled by `cfl`: `τ = cfl · min_i m_i / (2|d_ii|)`.
pub fn compute_time_step(graph: &GraphMatrices, visc: &ViscosityGraph, cfl: f64) -> f64 {
    let mut tau = f64::INFINITY;
    for i in 0..graph.num_nodes() {
        let dii = visc.d[graph.diag(i)];
        if dii < 0.0 {
            tau = tau.min(graph.lumped()[i] / (-2.0 * dii));
        }
    }
    cfl * tau
}

/// Bar state `Ū_ij = ½(U_i+U_j) − (f(U_j) − f(U_i))c_ij / (2 d_ij)`.
pub fn bar_state(ui: &State, wi: &Primitive, uj: &State, wj: &Primitive, c: [f64; 2], d: f64) -> State {
    let mut out = [0.0; 4];
    for k in 0..4 {
        out[k] = 0.5 * (ui[k] + uj[k]);
    }
    if d > 0.0 {
        let df = sub(&flux_dot(uj, wj, c), &flux_dot(ui, wi, c));
        axpy(-0.5 / d, &df, &mut out);
    }
    out
}

/// All bar states on the pattern; the diagonal entry holds `U_i`.
pub fn bar_states(
    field: &HydroStateField,
    prims: &[Primitive],
    graph: &GraphMatrices,
    visc: &ViscosityGraph,
) -> Vec<State> {
    let mut out = vec![[0.0; 4]; graph.pattern().nnz()];
    for i in 0..graph.num_nodes() {
        for k in graph.row(i) {
            let j = graph.col(k);
            out[k] = if j == i {
                field.states[i]
            } else {
                bar_state(&field.states[i], &prims[i], &field.states[j], &prims[j], graph.c(k), visc.d[k])
            };
        }
    }
    out
}

/// Unchecked low-order update from cached primitives.
pub(crate) fn low_order_update(
    field: &HydroStateField,
    prims: &[Primitive],
    graph: &GraphMatrices,
    visc: &ViscosityGraph,
    tau: f64,
) -> HydroStateField {
    let mut out = Vec::with_capacity(field.len());
    for i in 0..graph.num_nodes() {
        let ui = &field.states[i];
        // Σ_j c_ij = 0, so subtracting f(U_i) leaves the sum unchanged.
        let mut rhs = [0.0; 4];
        for k in graph.row(i) {
            let j = graph.col(k);
            if j == i {
                continue;
            }
            let uj = &field.states[j];
            let c = graph.c(k);
            let df = sub(&flux_dot(uj, &prims[j], c), &flux_dot(ui, &prims[i], c));
            axpy(-1.0, &df, &mut rhs);
            axpy(visc.d[k], &sub(uj, ui), &mut rhs);
        }
        let mut u = *ui;
        axpy(tau / graph.lumped()[i], &rhs, &mut u);
        out.push(u);
    }
    HydroStateField::new(out)
}

/// Forward-Euler graph-viscosity step; fails if any node leaves the admissible set.
pub fn low_order_step(
    field: &HydroStateField,
    graph: &GraphMatrices,
    visc: &ViscosityGraph,
    tau: f64,
    gas: &GasParams,
) -> Result<HydroStateField> {
    let prims = primitives(field, gas)?;
    let out = low_order_update(field, &prims, graph, visc, tau);
    out.check_admissible(gas).map_err(|e| match e {
        Error::Inadmissible(msg) => Error::Inadmissible(format!("low-order step rejected, {msg}")),
        other => other,
    })?;
    Ok(out)
}
