//! Invariant-domain-preserving solver for the compressible Euler equations.
//!
//! A step combines the first-order graph-viscosity scheme, a consistent-mass
//! high-order scheme with entropy viscosity, and convex limiting onto local
//! density and surrogate-entropy bounds. The high-limited mode composes two
//! limited forward-Euler stages into Heun's SSP-RK2 method.

pub mod boundary;
pub mod entropy;
pub mod high;
pub mod limiter;
pub mod low;
pub mod state;
pub mod wavespeed;

pub use boundary::{BoundaryConditions, NodeConstraint};
pub use entropy::{entropy_residual, high_order_viscosity, normalized_entropy_residual};
pub use high::high_order_step;
pub use limiter::{compute_local_bounds, convex_limited_update, line_search, LocalBounds, Relaxation};
pub use low::{bar_state, bar_states, compute_time_step, low_order_step, low_order_viscosity, ViscosityGraph};
pub use state::{flux_dot, primitives, HydroStateField, Primitive, State};
pub use wavespeed::{lambda_sharp, lambda_sharp_prim};

use crate::eos::GasParams;
use crate::error::{Error, Result};
use crate::fespace::GraphMatrices;
use crate::linalg::CsrMatrix;
use std::str::FromStr;

/// Time integration mode of the Euler stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// One first-order forward-Euler step.
    Low,
    /// SSP-RK2 over convex-limited high-order stages.
    HighLimited,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" => Ok(Mode::Low),
            "high" | "high-limited" => Ok(Mode::HighLimited),
            other => Err(Error::Config(format!("unknown mode '{other}' (expected low or high)"))),
        }
    }
}

/// Tunable constants of the high-order scheme.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerConfig {
    pub c_ev: f64,
    pub relaxation: Relaxation,
    pub eps_normalization: f64,
    pub cg_tol: f64,
    pub cg_max_iter: usize,
}

impl Default for EulerConfig {
    fn default() -> Self {
        EulerConfig {
            c_ev: 1.0,
            relaxation: Relaxation::default(),
            eps_normalization: 1e-8,
            cg_tol: 1e-12,
            cg_max_iter: 1000,
        }
    }
}

/// Euler solver bound to a set of graph matrices and boundary conditions.
#[derive(Clone, Debug)]
pub struct EulerSolver {
    graph: GraphMatrices,
    mass: CsrMatrix,
    gas: GasParams,
    config: EulerConfig,
    boundary: BoundaryConditions,
}

impl EulerSolver {
    pub fn new(graph: GraphMatrices, gas: GasParams, config: EulerConfig, boundary: BoundaryConditions) -> Self {
        let mass = graph.mass_matrix();
        EulerSolver { graph, mass, gas, config, boundary }
    }

    pub fn graph(&self) -> &GraphMatrices {
        &self.graph
    }

    pub fn gas(&self) -> &GasParams {
        &self.gas
    }

    pub fn config(&self) -> &EulerConfig {
        &self.config
    }

    pub fn boundary(&self) -> &BoundaryConditions {
        &self.boundary
    }

    /// Largest admissible step (CFL number one) for `field`.
    pub fn max_time_step(&self, field: &HydroStateField) -> Result<f64> {
        let prims = primitives(field, &self.gas)?;
        let visc = low_order_viscosity(&prims, &self.graph, &self.gas);
        Ok(compute_time_step(&self.graph, &visc, 1.0))
    }

    /// One forward-Euler stage. Returns the new field and the step used.
    pub fn stage(&self, field: &HydroStateField, cfl: f64, mode: Mode, tau_forced: Option<f64>) -> Result<(HydroStateField, f64)> {
        let g = &self.graph;
        let prims = primitives(field, &self.gas)?;
        let d_low = low_order_viscosity(&prims, g, &self.gas);
        let tau_max = compute_time_step(g, &d_low, 1.0);
        if !tau_max.is_finite() {
            return Err(Error::NonFinite("time step bound".into()));
        }
        let tau = match tau_forced {
            Some(t) if t > tau_max * (1.0 + 1e-12) => return Err(Error::TimeStep { tau: t, bound: tau_max }),
            Some(t) => t,
            None => cfl * tau_max,
        };
        let low = low::low_order_update(field, &prims, g, &d_low, tau);
        low.check_admissible(&self.gas)?;
        let mut out = match mode {
            Mode::Low => low,
            Mode::HighLimited => {
                let res = entropy_residual(field, &prims, g, &self.gas)?;
                let norm = normalized_entropy_residual(&res, field, g, &self.gas, self.config.eps_normalization)?;
                let d_high = high_order_viscosity(&d_low, &norm, g, self.config.c_ev);
                let high = high_order_step(
                    field,
                    &prims,
                    g,
                    &self.mass,
                    &d_high,
                    tau,
                    Some(&low),
                    self.config.cg_tol,
                    self.config.cg_max_iter,
                )?;
                let bars = bar_states(field, &prims, g, &d_low);
                let bounds = compute_local_bounds(field, &bars, g, &self.gas, &self.config.relaxation);
                convex_limited_update(&low, &high, field, g, &d_low, &d_high, tau, &bounds, &self.gas)?
            }
        };
        self.boundary.apply(&mut out);
        out.check_admissible(&self.gas)?;
        Ok((out, tau))
    }

    /// Full Euler update: one stage in low mode, Heun's method over limited
    /// stages in high-limited mode. A forced step may not exceed the
    /// convexity limit of any stage.
    pub fn euler_system_update(
        &self,
        field: &HydroStateField,
        cfl: f64,
        mode: Mode,
        tau_forced: Option<f64>,
    ) -> Result<(HydroStateField, f64)> {
        match mode {
            Mode::Low => self.stage(field, cfl, mode, tau_forced),
            Mode::HighLimited => {
                let (u1, tau) = self.stage(field, cfl, mode, tau_forced)?;
                let (u2, _) = self.stage(&u1, cfl, mode, Some(tau))?;
                let mut out = field.clone();
                for (o, s) in out.states.iter_mut().zip(&u2.states) {
                    for c in 0..4 {
                        o[c] = 0.5 * (o[c] + s[c]);
                    }
                }
                self.boundary.apply(&mut out);
                out.check_admissible(&self.gas)?;
                Ok((out, tau))
            }
        }
    }
}
