//! Crank–Nicolson solver for the Lorentz-force and induction source system.
//!
//! Unknowns are stacked as `[v_0x, v_0y, v_1x, …, b_0, b_1, …]`: nodal
//! velocities over P1 followed by BDM₁ coefficients of `B`. With midpoint
//! values `v̄ = (vⁿ + v)/2`, `B̄ = (Bⁿ + B)/2`, `J̄ = curl B̄` and `Δt` the
//! source step,
//!
//! ```text
//! R_v,i = m_i ρ_i (v_i − vⁿ_i) + Δt μ ∫ (B̄_y J̄, −B̄_x J̄) φ_i
//! R_B,a = Σ_c M_ac (b_c − bⁿ_c) − Δt ∫ (v̄_x B̄_y − v̄_y B̄_x) curl ψ_a
//! ```
//!
//! Testing the first row with `v̄` and the second with `μ b̄` shows that the
//! kinetic plus magnetic energy is conserved, and testing the second with
//! gradients of P2 functions shows that the weak divergence is preserved.

use crate::eos::GasParams;
use crate::error::{Error, Result};
use crate::euler::HydroStateField;
use crate::fespace::{assemble_curl_mass, CurlSpaceBdm1, GraphMatrices, ScalarSpaceP1};
use crate::linalg::{bicgstab_preconditioned, norm2, CsrMatrix, Ilu0};

/// Newton and Krylov tolerances of the source solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonConfig {
    /// Stop once `‖R‖ ≤ rel_tol ‖R₀‖` …
    pub rel_tol: f64,
    /// … or `‖R‖ ≤ abs_tol · ‖(m_i ρ_i vⁿ_i, M bⁿ)‖`.
    pub abs_tol: f64,
    pub max_iter: usize,
    pub krylov_tol: f64,
    pub krylov_max_iter: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig { rel_tol: 1e-12, abs_tol: 1e-14, max_iter: 4, krylov_tol: 1e-12, krylov_max_iter: 200 }
    }
}

/// Current and previous unknowns of one source step.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceSystemState {
    pub v_old: Vec<f64>,
    pub b_old: Vec<f64>,
    pub v_new: Vec<f64>,
    pub b_new: Vec<f64>,
    /// Source step size, twice the Euler step in the split scheme.
    pub dt: f64,
}

impl SourceSystemState {
    /// State with the new values initialised to the old ones.
    pub fn starting_from(v_old: Vec<f64>, b_old: Vec<f64>, dt: f64) -> Self {
        SourceSystemState { v_new: v_old.clone(), b_new: b_old.clone(), v_old, b_old, dt }
    }

    pub fn unknowns(&self) -> Vec<f64> {
        let mut x = self.v_new.clone();
        x.extend_from_slice(&self.b_new);
        x
    }

    pub fn set_unknowns(&mut self, x: &[f64]) {
        let nv = self.v_new.len();
        self.v_new.copy_from_slice(&x[..nv]);
        self.b_new.copy_from_slice(&x[nv..]);
    }
}

/// Convergence history of one Newton solve.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NewtonStats {
    pub iterations: usize,
    pub krylov_iterations: Vec<usize>,
    pub initial_residual: f64,
    pub final_residual: f64,
}

const LOCAL: usize = 6;

/// Source-system solver bound to a mesh's spaces.
#[derive(Clone, Debug)]
pub struct SourceSolver {
    n_nodes: usize,
    lumped: Vec<f64>,
    p1_dofs: Vec<[usize; 3]>,
    bdm: CurlSpaceBdm1,
    curl_mass: CsrMatrix,
    jac: CsrMatrix,
    /// Per triangle: positions of the (v,B), (B,v) and (B,B) local blocks in `jac`.
    scatter: Vec<[u32; 3 * LOCAL * LOCAL]>,
    diag_pos: Vec<usize>,
    mass_pos: Vec<usize>,
    mu: f64,
    config: NewtonConfig,
}

impl SourceSolver {
    pub fn new(p1: &ScalarSpaceP1, graph: &GraphMatrices, bdm: CurlSpaceBdm1, gas: &GasParams, config: NewtonConfig) -> Self {
        let n = p1.num_nodes();
        let nb = bdm.num_dofs();
        let curl_mass = assemble_curl_mass(&bdm);
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); 2 * n + nb];
        for r in 0..2 * n {
            rows[r].push(r);
        }
        for (t, nodes) in p1.cell_dofs().iter().enumerate() {
            let bd = bdm.cell_dofs()[t];
            let vcols: Vec<usize> = nodes.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
            let bcols: Vec<usize> = bd.iter().map(|&a| 2 * n + a).collect();
            for &r in &vcols {
                rows[r].extend_from_slice(&bcols);
            }
            for &r in &bcols {
                rows[r].extend_from_slice(&vcols);
                rows[r].extend_from_slice(&bcols);
            }
        }
        let jac = CsrMatrix::from_pattern(2 * n + nb, rows);
        let pos = |r: usize, c: usize| jac.find(r, c).expect("jacobian pattern") as u32;
        let scatter = p1
            .cell_dofs()
            .iter()
            .enumerate()
            .map(|(t, nodes)| {
                let bd = bdm.cell_dofs()[t];
                let vdof = |l: usize| 2 * nodes[l / 2] + l % 2;
                let mut s = [0u32; 3 * LOCAL * LOCAL];
                for l in 0..LOCAL {
                    for c in 0..LOCAL {
                        s[l * LOCAL + c] = pos(vdof(l), 2 * n + bd[c]);
                        s[LOCAL * LOCAL + c * LOCAL + l] = pos(2 * n + bd[c], vdof(l));
                    }
                }
                for a in 0..LOCAL {
                    for c in 0..LOCAL {
                        s[2 * LOCAL * LOCAL + a * LOCAL + c] = pos(2 * n + bd[a], 2 * n + bd[c]);
                    }
                }
                s
            })
            .collect();
        let diag_pos = (0..2 * n).map(|r| jac.find(r, r).expect("diagonal")).collect();
        let mut mass_pos = Vec::with_capacity(curl_mass.nnz());
        for a in 0..nb {
            for &c in curl_mass.row_cols(a) {
                mass_pos.push(jac.find(2 * n + a, 2 * n + c).expect("mass block"));
            }
        }
        SourceSolver {
            n_nodes: n,
            lumped: graph.lumped().to_vec(),
            p1_dofs: p1.cell_dofs().to_vec(),
            bdm,
            curl_mass,
            jac,
            scatter,
            diag_pos,
            mass_pos,
            mu: gas.mu,
            config,
        }
    }

    pub fn bdm(&self) -> &CurlSpaceBdm1 {
        &self.bdm
    }

    pub fn curl_mass(&self) -> &CsrMatrix {
        &self.curl_mass
    }

    pub fn config(&self) -> &NewtonConfig {
        &self.config
    }

    pub fn num_unknowns(&self) -> usize {
        2 * self.n_nodes + self.bdm.num_dofs()
    }

    fn check_dims(&self, state: &SourceSystemState, rho: &[f64]) -> Result<()> {
        let (n, nb) = (self.n_nodes, self.bdm.num_dofs());
        if state.v_old.len() != 2 * n || state.v_new.len() != 2 * n || state.b_old.len() != nb || state.b_new.len() != nb || rho.len() != n {
            return Err(Error::Dimension("source system state does not match the spaces".into()));
        }
        Ok(())
    }

    /// Midpoint values on triangle `t`: local velocities and B coefficients.
    fn midpoints(&self, t: usize, state: &SourceSystemState) -> ([[f64; 2]; 3], [f64; LOCAL]) {
        let nodes = self.p1_dofs[t];
        let mut v = [[0.0; 2]; 3];
        for (l, &i) in nodes.iter().enumerate() {
            for c in 0..2 {
                v[l][c] = 0.5 * (state.v_old[2 * i + c] + state.v_new[2 * i + c]);
            }
        }
        let mut b = [0.0; LOCAL];
        for (a, &d) in self.bdm.cell_dofs()[t].iter().enumerate() {
            b[a] = 0.5 * (state.b_old[d] + state.b_new[d]);
        }
        (v, b)
    }

    /// Residual of the Crank–Nicolson system.
    pub fn cn_residual(&self, state: &SourceSystemState, rho: &[f64]) -> Result<Vec<f64>> {
        self.check_dims(state, rho)?;
        let n = self.n_nodes;
        let mut r = vec![0.0; self.num_unknowns()];
        for i in 0..n {
            let w = self.lumped[i] * rho[i];
            r[2 * i] = w * (state.v_new[2 * i] - state.v_old[2 * i]);
            r[2 * i + 1] = w * (state.v_new[2 * i + 1] - state.v_old[2 * i + 1]);
        }
        let db: Vec<f64> = state.b_new.iter().zip(&state.b_old).map(|(a, b)| a - b).collect();
        let mdb = self.curl_mass.matvec(&db);
        r[2 * n..].copy_from_slice(&mdb);

        let rule = self.bdm.rule();
        let dt = state.dt;
        for t in 0..self.p1_dofs.len() {
            let (v, b) = self.midpoints(t, state);
            let psi = self.bdm.basis_at_qp(t);
            let kappa = self.bdm.curl(t);
            let area = self.bdm.area(t);
            let j: f64 = (0..LOCAL).map(|a| b[a] * kappa[a]).sum();
            let nodes = self.p1_dofs[t];
            let bd = self.bdm.cell_dofs()[t];
            let mut e_int = 0.0;
            for q in 0..rule.len() {
                let wq = rule.weights[q] * area;
                let phi = rule.bary[q];
                let mut bq = [0.0; 2];
                for a in 0..LOCAL {
                    bq[0] += b[a] * psi[q][a][0];
                    bq[1] += b[a] * psi[q][a][1];
                }
                let mut vq = [0.0; 2];
                for l in 0..3 {
                    vq[0] += phi[l] * v[l][0];
                    vq[1] += phi[l] * v[l][1];
                }
                for l in 0..3 {
                    let s = dt * self.mu * wq * j * phi[l];
                    r[2 * nodes[l]] += s * bq[1];
                    r[2 * nodes[l] + 1] -= s * bq[0];
                }
                e_int += wq * (vq[0] * bq[1] - vq[1] * bq[0]);
            }
            for a in 0..LOCAL {
                r[2 * n + bd[a]] -= dt * e_int * kappa[a];
            }
        }
        Ok(r)
    }

    /// Analytic Jacobian of [`cn_residual`](Self::cn_residual) with respect to the new unknowns.
    pub fn cn_jacobian(&self, state: &SourceSystemState, rho: &[f64]) -> Result<CsrMatrix> {
        self.check_dims(state, rho)?;
        let mut jac = self.jac.clone();
        self.fill_jacobian(state, rho, &mut jac);
        Ok(jac)
    }

    fn fill_jacobian(&self, state: &SourceSystemState, rho: &[f64], jac: &mut CsrMatrix) {
        let n = self.n_nodes;
        let vals = jac.values_mut();
        vals.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            let w = self.lumped[i] * rho[i];
            vals[self.diag_pos[2 * i]] = w;
            vals[self.diag_pos[2 * i + 1]] = w;
        }
        for (k, &p) in self.mass_pos.iter().enumerate() {
            vals[p] += self.curl_mass.values()[k];
        }
        let rule = self.bdm.rule();
        let dt = state.dt;
        const B0: usize = LOCAL * LOCAL;
        for t in 0..self.p1_dofs.len() {
            let (v, b) = self.midpoints(t, state);
            let psi = self.bdm.basis_at_qp(t);
            let kappa = self.bdm.curl(t);
            let area = self.bdm.area(t);
            let j: f64 = (0..LOCAL).map(|a| b[a] * kappa[a]).sum();
            let mut vb = [0.0; B0];
            let mut bv = [0.0; B0];
            let mut bb = [0.0; B0];
            for q in 0..rule.len() {
                let wq = rule.weights[q] * area;
                let phi = rule.bary[q];
                let mut bq = [0.0; 2];
                for a in 0..LOCAL {
                    bq[0] += b[a] * psi[q][a][0];
                    bq[1] += b[a] * psi[q][a][1];
                }
                let mut vq = [0.0; 2];
                for l in 0..3 {
                    vq[0] += phi[l] * v[l][0];
                    vq[1] += phi[l] * v[l][1];
                }
                let sm = 0.5 * dt * self.mu * wq;
                let si = 0.5 * dt * wq;
                for c in 0..LOCAL {
                    let dx = psi[q][c][1] * j + bq[1] * kappa[c];
                    let dy = psi[q][c][0] * j + bq[0] * kappa[c];
                    let de = vq[0] * psi[q][c][1] - vq[1] * psi[q][c][0];
                    for l in 0..3 {
                        vb[(2 * l) * LOCAL + c] += sm * phi[l] * dx;
                        vb[(2 * l + 1) * LOCAL + c] -= sm * phi[l] * dy;
                    }
                    for a in 0..LOCAL {
                        bb[a * LOCAL + c] -= si * kappa[a] * de;
                    }
                }
                for a in 0..LOCAL {
                    for l in 0..3 {
                        bv[a * LOCAL + 2 * l] -= si * kappa[a] * phi[l] * bq[1];
                        bv[a * LOCAL + 2 * l + 1] += si * kappa[a] * phi[l] * bq[0];
                    }
                }
            }
            let s = &self.scatter[t];
            for k in 0..B0 {
                vals[s[k] as usize] += vb[k];
                vals[s[B0 + k] as usize] += bv[k];
                vals[s[2 * B0 + k] as usize] += bb[k];
            }
        }
    }

    /// Newton iteration on the Crank–Nicolson system from the old values.
    ///
    /// Returns the new momenta `m_i = ρ_i v_i`, the new B coefficients and
    /// the convergence history.
    pub fn momentum_and_h_field_update(
        &self,
        rho: &[f64],
        momentum: &[[f64; 2]],
        b: &[f64],
        dt: f64,
    ) -> Result<(Vec<[f64; 2]>, Vec<f64>, NewtonStats)> {
        let n = self.n_nodes;
        if momentum.len() != n || rho.len() != n {
            return Err(Error::Dimension("momentum/density length".into()));
        }
        let mut v_old = Vec::with_capacity(2 * n);
        for (m, &r) in momentum.iter().zip(rho) {
            if !(r > 0.0) {
                return Err(Error::Inadmissible(format!("density {r} in source update")));
            }
            v_old.push(m[0] / r);
            v_old.push(m[1] / r);
        }
        let mut state = SourceSystemState::starting_from(v_old, b.to_vec(), dt);
        let stats = self.solve(&mut state, rho)?;
        let m_new = (0..n).map(|i| [rho[i] * state.v_new[2 * i], rho[i] * state.v_new[2 * i + 1]]).collect();
        Ok((m_new, state.b_new, stats))
    }

    /// Runs Newton on `state` in place, starting from its current new values.
    pub fn solve(&self, state: &mut SourceSystemState, rho: &[f64]) -> Result<NewtonStats> {
        self.check_dims(state, rho)?;
        let n = self.n_nodes;
        let mut scale_vec: Vec<f64> = (0..2 * n).map(|k| self.lumped[k / 2] * rho[k / 2] * state.v_old[k]).collect();
        scale_vec.extend(self.curl_mass.matvec(&state.b_old));
        let abs_tol = self.config.abs_tol * norm2(&scale_vec);
        let mut stats = NewtonStats::default();
        let mut jac = self.jac.clone();
        let mut x = state.unknowns();
        let mut delta = vec![0.0; x.len()];
        for it in 0..=self.config.max_iter {
            let r = self.cn_residual(state, rho)?;
            let rn = norm2(&r);
            if !rn.is_finite() {
                return Err(Error::NonFinite("source residual".into()));
            }
            if it == 0 {
                stats.initial_residual = rn;
            }
            stats.final_residual = rn;
            if rn <= (self.config.rel_tol * stats.initial_residual).max(abs_tol) {
                stats.iterations = it;
                return Ok(stats);
            }
            if it == self.config.max_iter {
                break;
            }
            self.fill_jacobian(state, rho, &mut jac);
            let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
            delta.iter_mut().for_each(|d| *d = 0.0);
            let ilu = Ilu0::new(&jac)?;
            let ks = bicgstab_preconditioned(&jac, &rhs, &mut delta, &ilu, self.config.krylov_tol, self.config.krylov_max_iter)?;
            stats.krylov_iterations.push(ks.iterations);
            for (xi, di) in x.iter_mut().zip(&delta) {
                *xi += di;
            }
            state.set_unknowns(&x);
        }
        Err(Error::NewtonNotConverged { iterations: self.config.max_iter, residual: stats.final_residual })
    }

    /// Source step on the full state: density is unchanged, momentum and B
    /// come from the Crank–Nicolson solve, and the total energy is corrected
    /// so that the internal energy of every node is preserved.
    pub fn source_update(&self, field: &HydroStateField, b: &[f64], dt: f64) -> Result<(HydroStateField, Vec<f64>, NewtonStats)> {
        let rho: Vec<f64> = field.states.iter().map(|u| u[0]).collect();
        let mom: Vec<[f64; 2]> = field.states.iter().map(|u| [u[1], u[2]]).collect();
        let (m_new, b_new, stats) = self.momentum_and_h_field_update(&rho, &mom, b, dt)?;
        let mut out = field.clone();
        for (u, m) in out.states.iter_mut().zip(&m_new) {
            let ke_old = 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0];
            let ke_new = 0.5 * (m[0] * m[0] + m[1] * m[1]) / u[0];
            u[1] = m[0];
            u[2] = m[1];
            u[3] = u[3] - ke_old + ke_new;
        }
        Ok((out, b_new, stats))
    }
}
