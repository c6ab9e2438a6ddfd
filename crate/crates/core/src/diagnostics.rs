//! Conserved functionals, error norms and convergence rates.

use crate::eos;
use crate::error::Result;
use crate::fespace::{CurlSpaceBdm1, ScalarSpaceP1, TriangleRule};
use crate::linalg::dot;
use crate::mesh::Mesh;
use crate::splitting::{MhdState, Simulation};

/// Global quantities of one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub time: f64,
    /// `Σ_i m_i E_i`.
    pub total_mech_energy: f64,
    /// `(μ/2) ‖B‖²`.
    pub magnetic_energy: f64,
    pub total_energy: f64,
    /// `Σ_i m_i η(U_i)`.
    pub math_entropy: f64,
    pub min_density: f64,
    pub min_pressure: f64,
    pub min_internal_energy: f64,
    /// `max_k |(B, ∇ω_k) − (B₀, ∇ω_k)|` over the P2 basis.
    pub weak_div_fingerprint_drift: f64,
}

impl DiagnosticsRecord {
    pub const CSV_HEADER: &'static str = "time,total_mech_energy,magnetic_energy,total_energy,math_entropy,min_density,min_pressure,min_internal_energy,weak_div_fingerprint_drift";

    pub fn csv_row(&self) -> String {
        format!(
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            self.time,
            self.total_mech_energy,
            self.magnetic_energy,
            self.total_energy,
            self.math_entropy,
            self.min_density,
            self.min_pressure,
            self.min_internal_energy,
            self.weak_div_fingerprint_drift
        )
    }
}

/// `(μ/2) bᵀ M b`.
pub fn magnetic_energy(sim: &Simulation, b: &[f64]) -> f64 {
    0.5 * sim.gas().mu * dot(b, &sim.curl_mass().matvec(b))
}

/// Diagnostics of `state`, with the drift measured against `fingerprint0`
/// (see [`Simulation::weak_divergence`]).
pub fn compute_record(sim: &Simulation, state: &MhdState, fingerprint0: &[f64]) -> Result<DiagnosticsRecord> {
    let gas = sim.gas();
    let lumped = sim.graph().lumped();
    let mut mech = 0.0;
    let mut entropy = 0.0;
    let (mut min_rho, mut min_p, mut min_eps) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for (u, m) in state.hydro.states.iter().zip(lumped) {
        mech += m * u[3];
        entropy += m * eos::math_entropy(u, gas)?;
        let eps = eos::internal_energy(u)?;
        min_rho = min_rho.min(u[0]);
        min_eps = min_eps.min(eps);
        min_p = min_p.min(eos::state_pressure(u, gas)?);
    }
    let magnetic = magnetic_energy(sim, &state.b);
    let fp = sim.weak_divergence(&state.b);
    let drift = fp.iter().zip(fingerprint0).fold(0.0f64, |d, (a, b)| d.max((a - b).abs()));
    Ok(DiagnosticsRecord {
        time: state.time,
        total_mech_energy: mech,
        magnetic_energy: magnetic,
        total_energy: mech + magnetic,
        math_entropy: entropy,
        min_density: min_rho,
        min_pressure: min_p,
        min_internal_energy: min_eps,
        weak_div_fingerprint_drift: drift,
    })
}

/// Norms of the pointwise Euclidean error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    /// Maximum over quadrature points.
    pub linf_quadrature: f64,
    /// Maximum over mesh vertices.
    pub linf_nodal: f64,
}

impl ErrorNorms {
    /// Larger of the two sampled maxima.
    pub fn linf(&self) -> f64 {
        self.linf_quadrature.max(self.linf_nodal)
    }
}

fn accumulate<const K: usize>(
    mesh: &Mesh,
    mut numeric: impl FnMut(usize, [f64; 3], [f64; 2]) -> [f64; K],
    exact: impl Fn([f64; 2]) -> [f64; K],
) -> ErrorNorms {
    let rule = TriangleRule::degree4();
    let (mut l1, mut l2, mut lq, mut ln) = (0.0, 0.0, 0.0f64, 0.0f64);
    let dist = |a: [f64; K], b: [f64; K]| a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    for t in 0..mesh.num_triangles() {
        let p = mesh.triangle_coords(t);
        let area = mesh.signed_area(t);
        for q in 0..rule.len() {
            let x = rule.point(q, &p);
            let e = dist(numeric(t, rule.bary[q], x), exact(x));
            l1 += rule.weights[q] * area * e;
            l2 += rule.weights[q] * area * e * e;
            lq = lq.max(e);
        }
        for (v, bary) in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]].into_iter().enumerate() {
            ln = ln.max(dist(numeric(t, bary, p[v]), exact(p[v])));
        }
    }
    ErrorNorms { l1, l2: l2.sqrt(), linf_quadrature: lq, linf_nodal: ln }
}

/// Error of a nodal P1 field with `K` components against `exact`.
pub fn error_norms_p1<const K: usize>(
    mesh: &Mesh,
    space: &ScalarSpaceP1,
    values: &[[f64; K]],
    exact: impl Fn([f64; 2]) -> [f64; K],
) -> ErrorNorms {
    let dofs = space.cell_dofs();
    accumulate(
        mesh,
        |t, bary, _| {
            let d = dofs[t];
            let mut out = [0.0; K];
            for (c, o) in out.iter_mut().enumerate() {
                *o = bary[0] * values[d[0]][c] + bary[1] * values[d[1]][c] + bary[2] * values[d[2]][c];
            }
            out
        },
        exact,
    )
}

/// Error of a BDM₁ field against `exact`.
pub fn error_norms_bdm(mesh: &Mesh, space: &CurlSpaceBdm1, coeffs: &[f64], exact: impl Fn([f64; 2]) -> [f64; 2]) -> ErrorNorms {
    accumulate(mesh, |t, _, x| space.evaluate(t, x, coeffs), exact)
}

/// How mesh size relates to the number of degrees of freedom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EocConvention {
    /// `h ∝ N^(-1/2)`.
    TwoD,
    /// `h ∝ N^(-1)`.
    OneD,
}

impl EocConvention {
    pub fn describe(&self) -> &'static str {
        match self {
            EocConvention::TwoD => "rate = log(e_prev/e)/log(sqrt(N/N_prev)), h ~ N^(-1/2), N = number of DOFs",
            EocConvention::OneD => "rate = log(e_prev/e)/log(N/N_prev), h ~ 1/N, N = number of nodes along x",
        }
    }
}

/// Experimental orders of convergence; the first level and any level with a
/// zero error get `None`.
pub fn eoc(errors: &[f64], dofs: &[usize], convention: EocConvention) -> Vec<Option<f64>> {
    assert_eq!(errors.len(), dofs.len());
    let mut out = vec![None; errors.len()];
    for k in 1..errors.len() {
        let (e0, e1) = (errors[k - 1], errors[k]);
        if e0 > 0.0 && e1 > 0.0 && dofs[k] != dofs[k - 1] {
            let ratio = dofs[k] as f64 / dofs[k - 1] as f64;
            let h = match convention {
                EocConvention::TwoD => ratio.sqrt().ln(),
                EocConvention::OneD => ratio.ln(),
            };
            out[k] = Some((e0 / e1).ln() / h);
        }
    }
    out
}
