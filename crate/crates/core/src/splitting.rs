//! Strang composition of the Euler and source solvers.

use crate::eos::GasParams;
use crate::error::{Error, Result};
use crate::euler::{BoundaryConditions, EulerConfig, EulerSolver, HydroStateField, Mode};
use crate::fespace::{
    assemble_graph_matrices, gradient_embedding, CurlSpaceBdm1, GraphMatrices, PotentialSpaceP2, ScalarSpaceP1,
};
use crate::induction::{NewtonConfig, NewtonStats, SourceSolver};
use crate::linalg::CsrMatrix;
use crate::mesh::Mesh;

/// Hydrodynamic state, magnetic field and time.
#[derive(Clone, Debug, PartialEq)]
pub struct MhdState {
    pub hydro: HydroStateField,
    pub b: Vec<f64>,
    pub time: f64,
}

/// Summary of one [`Simulation::mhd_update`].
#[derive(Clone, Debug, PartialEq)]
pub struct StepInfo {
    /// Euler step; the state advances by twice this value.
    pub tau: f64,
    pub newton: NewtonStats,
}

/// Everything needed to advance an [`MhdState`] on one mesh.
#[derive(Clone, Debug)]
pub struct Simulation {
    mesh: Mesh,
    p1: ScalarSpaceP1,
    p2: PotentialSpaceP2,
    gradient: CsrMatrix,
    euler: EulerSolver,
    source: SourceSolver,
    gas: GasParams,
}

impl Simulation {
    pub fn new(
        mesh: Mesh,
        gas: GasParams,
        boundary: BoundaryConditions,
        euler_config: EulerConfig,
        newton_config: NewtonConfig,
    ) -> Result<Self> {
        gas.validate()?;
        mesh.validate()?;
        let p1 = ScalarSpaceP1::new(&mesh);
        let bdm = CurlSpaceBdm1::new(&mesh)?;
        let p2 = PotentialSpaceP2::new(&mesh);
        let gradient = gradient_embedding(&p2, &bdm);
        let graph = assemble_graph_matrices(&p1);
        let source = SourceSolver::new(&p1, &graph, bdm, &gas, newton_config);
        let euler = EulerSolver::new(graph, gas, euler_config, boundary);
        Ok(Simulation { mesh, p1, p2, gradient, euler, source, gas })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn p1(&self) -> &ScalarSpaceP1 {
        &self.p1
    }

    pub fn bdm(&self) -> &CurlSpaceBdm1 {
        self.source.bdm()
    }

    pub fn p2(&self) -> &PotentialSpaceP2 {
        &self.p2
    }

    pub fn graph(&self) -> &GraphMatrices {
        self.euler.graph()
    }

    pub fn curl_mass(&self) -> &CsrMatrix {
        self.source.curl_mass()
    }

    pub fn gradient(&self) -> &CsrMatrix {
        &self.gradient
    }

    pub fn euler(&self) -> &EulerSolver {
        &self.euler
    }

    pub fn source(&self) -> &SourceSolver {
        &self.source
    }

    pub fn gas(&self) -> &GasParams {
        &self.gas
    }

    /// Weak-divergence fingerprint `((B, ∇ω_k))_k` over the P2 basis.
    pub fn weak_divergence(&self, b: &[f64]) -> Vec<f64> {
        self.gradient.transpose_matvec(&self.curl_mass().matvec(b))
    }

    /// One split step: Euler over `τ`, source over `2τ`, Euler over `τ`.
    ///
    /// `tau_cap` bounds the Euler step, used to land on a final time.
    pub fn mhd_update(&self, state: &MhdState, cfl: f64, mode: Mode, tau_cap: Option<f64>) -> Result<(MhdState, StepInfo)> {
        let forced = match tau_cap {
            Some(cap) => {
                let natural = cfl * self.euler.max_time_step(&state.hydro).map_err(|e| e.in_stage("euler (first half)"))?;
                (cap < natural).then_some(cap)
            }
            None => None,
        };
        let (h1, tau) = self
            .euler
            .euler_system_update(&state.hydro, cfl, mode, forced)
            .map_err(|e| e.in_stage("euler (first half)"))?;
        let (h2, b, newton) = self.source.source_update(&h1, &state.b, 2.0 * tau).map_err(|e| e.in_stage("source"))?;
        let (h3, _) = self
            .euler
            .euler_system_update(&h2, cfl, mode, Some(tau))
            .map_err(|e| e.in_stage("euler (second half)"))?;
        Ok((MhdState { hydro: h3, b, time: state.time + 2.0 * tau }, StepInfo { tau, newton }))
    }

    /// Advances until `t_final`, clipping the last step to land on it exactly.
    /// `callback` runs after every step.
    pub fn run_to_time(
        &self,
        state: &MhdState,
        t_final: f64,
        cfl: f64,
        mode: Mode,
        mut callback: impl FnMut(usize, &MhdState, &StepInfo) -> Result<()>,
    ) -> Result<MhdState> {
        if !(t_final >= state.time) {
            return Err(Error::Config(format!("final time {t_final} precedes current time {}", state.time)));
        }
        let mut current = state.clone();
        let mut step = 0;
        while current.time < t_final {
            let remaining = t_final - current.time;
            let (mut next, info) = self.mhd_update(&current, cfl, mode, Some(0.5 * remaining))?;
            if t_final - next.time <= 1e-14 * t_final.abs().max(1.0) {
                next.time = t_final;
            }
            step += 1;
            callback(step, &next, &info)?;
            current = next;
        }
        Ok(current)
    }
}
