//! Consistent-mass high-order step with entropy viscosity.

use super::low::ViscosityGraph;
use super::state::{axpy, flux_dot, sub, HydroStateField, Primitive};
use crate::error::Result;
use crate::fespace::GraphMatrices;
use crate::linalg::{cg, CsrMatrix};

/// Solves `Σ_j m_ij (U_j^H − U_j^n) = τ Σ_j [−f(U_j)c_ij + d_ij^H (U_j − U_i)]`
/// componentwise by conjugate gradients.
///
/// `guess` is an initial approximation of `U^H` (typically the low-order
/// solution). Returns `U^H`, which need not be admissible.
#[allow(clippy::too_many_arguments)]
pub fn high_order_step(
    field: &HydroStateField,
    prims: &[Primitive],
    graph: &GraphMatrices,
    mass: &CsrMatrix,
    visc_high: &ViscosityGraph,
    tau: f64,
    guess: Option<&HydroStateField>,
    cg_tol: f64,
    cg_max_iter: usize,
) -> Result<HydroStateField> {
    let n = graph.num_nodes();
    let mut rhs = vec![[0.0; 4]; n];
    for (i, r) in rhs.iter_mut().enumerate() {
        let ui = &field.states[i];
        for k in graph.row(i) {
            let j = graph.col(k);
            if j == i {
                continue;
            }
            let uj = &field.states[j];
            let c = graph.c(k);
            let df = sub(&flux_dot(uj, &prims[j], c), &flux_dot(ui, &prims[i], c));
            axpy(-tau, &df, r);
            axpy(tau * visc_high.d[k], &sub(uj, ui), r);
        }
    }
    let mut out = field.states.clone();
    let mut b = vec![0.0; n];
    let mut x = vec![0.0; n];
    for comp in 0..4 {
        for i in 0..n {
            b[i] = rhs[i][comp];
            x[i] = guess.map_or(0.0, |g| g.states[i][comp] - field.states[i][comp]);
        }
        cg(mass, &b, &mut x, cg_tol, cg_max_iter)?;
        for i in 0..n {
            out[i][comp] += x[i];
        }
    }
    Ok(HydroStateField::new(out))
}
