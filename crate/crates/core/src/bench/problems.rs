//! Built-in benchmark problems.

use std::f64::consts::PI;

use crate::eos::{conserved_from_primitive, GasParams};
use crate::error::{Error, Result};
use crate::euler::{BoundaryConditions, EulerConfig, HydroStateField, NodeConstraint};
use crate::fespace::interpolate_curl;
use crate::induction::NewtonConfig;
use crate::mesh::{build_rect_mesh, Mesh, Rect, Side};
use crate::splitting::{MhdState, Simulation};

/// Density, velocity, pressure and magnetic field at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimitiveState {
    pub rho: f64,
    pub v: [f64; 2],
    pub p: f64,
    pub b: [f64; 2],
}

/// Treatment of one side of the domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SideBc {
    Periodic,
    /// Nodes keep their initial state.
    FrozenInitial,
    /// Nodes are reset to a fixed state.
    Inflow { rho: f64, v: [f64; 2], p: f64 },
    /// Normal momentum is removed.
    ReflectingWall,
}

/// Dirichlet inflow on part of a side, overriding that side's treatment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InflowStrip {
    pub side: Side,
    /// Coordinate range along the side, lower end inclusive.
    pub range: (f64, f64),
    pub rho: f64,
    pub v: [f64; 2],
    pub p: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Vortex,
    BrioWu,
    Blast,
    Jet,
}

/// A benchmark: geometry, boundary treatment, data and run defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub name: &'static str,
    pub kind: ProblemKind,
    pub domain: Rect,
    /// Left, right, bottom, top.
    pub bc: [SideBc; 4],
    pub inflow: Option<InflowStrip>,
    pub gamma: f64,
    pub mu: f64,
    pub t_final: f64,
    pub cfl: f64,
    /// Vortex strength.
    pub mu_strength: f64,
    /// Ambient vertical field of the jet.
    pub b_a: f64,
}

pub const VORTEX_STRENGTHS: [f64; 3] = [1.0, 5.389_489_43, 5.389_489_439];

/// The vortex, Brio–Wu, blast and jet problems with their default parameters.
pub fn builtin_problems() -> Vec<ProblemSpec> {
    let vortex = ProblemSpec {
        name: "vortex",
        kind: ProblemKind::Vortex,
        domain: Rect::new(-10.0, 10.0, -10.0, 10.0),
        bc: [SideBc::FrozenInitial; 4],
        inflow: None,
        gamma: 5.0 / 3.0,
        mu: 1.0,
        t_final: 0.05,
        cfl: 0.1,
        mu_strength: 1.0,
        b_a: 0.0,
    };
    let briowu = ProblemSpec {
        name: "briowu",
        kind: ProblemKind::BrioWu,
        domain: Rect::new(0.0, 1.0, 0.0, 1.0),
        bc: [SideBc::FrozenInitial, SideBc::FrozenInitial, SideBc::Periodic, SideBc::Periodic],
        inflow: None,
        gamma: 2.0,
        mu: 1.0,
        t_final: 0.1,
        cfl: 0.1,
        mu_strength: 0.0,
        b_a: 0.0,
    };
    let blast = ProblemSpec {
        name: "blast",
        kind: ProblemKind::Blast,
        domain: Rect::new(-0.5, 0.5, -0.5, 0.5),
        bc: [SideBc::Periodic; 4],
        inflow: None,
        gamma: 1.4,
        mu: 1.0,
        t_final: 0.01,
        cfl: 0.1,
        mu_strength: 0.0,
        b_a: 0.0,
    };
    let gamma_jet = 1.4;
    let jet = ProblemSpec {
        name: "jet",
        kind: ProblemKind::Jet,
        // Half domain [0, 0.5] × [0, 1.5], extended by 0.5 on the open sides.
        domain: Rect::new(0.0, 1.0, 0.0, 2.0),
        bc: [SideBc::ReflectingWall, SideBc::FrozenInitial, SideBc::FrozenInitial, SideBc::FrozenInitial],
        inflow: Some(InflowStrip { side: Side::Bottom, range: (0.0, 0.05), rho: gamma_jet, v: [0.0, 800.0], p: 1.0 }),
        gamma: gamma_jet,
        mu: 1.0,
        t_final: 0.002,
        cfl: 0.1,
        mu_strength: 0.0,
        b_a: 20000.0f64.sqrt(),
    };
    vec![vortex, briowu, blast, jet]
}

/// Looks up a built-in problem by name.
pub fn problem_by_name(name: &str) -> Result<ProblemSpec> {
    builtin_problems()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::Config(format!("unknown problem '{name}' (expected vortex, briowu, blast or jet)")))
}

impl ProblemSpec {
    pub fn gas(&self) -> GasParams {
        GasParams { gamma: self.gamma, b: 0.0, mu: self.mu }
    }

    /// Number of cells per direction at refinement `level`.
    pub fn cells(&self, level: u32) -> (usize, usize) {
        let f = 1usize << level;
        match self.kind {
            ProblemKind::Vortex => (30 * f, 30 * f),
            ProblemKind::BrioWu => (100 * f - 1, 2),
            ProblemKind::Blast => (50 * f, 50 * f),
            ProblemKind::Jet => (40 * f, 80 * f),
        }
    }

    /// Mesh at refinement `level`.
    pub fn mesh(&self, level: u32) -> Result<Mesh> {
        let (nx, ny) = self.cells(level);
        self.mesh_with_cells(nx, ny)
    }

    /// Mesh with explicit cell counts. The Brio–Wu strip is two square cells high.
    pub fn mesh_with_cells(&self, nx: usize, ny: usize) -> Result<Mesh> {
        let mut domain = self.domain;
        if self.kind == ProblemKind::BrioWu {
            domain.y1 = domain.y0 + ny as f64 * (domain.x1 - domain.x0) / nx as f64;
        }
        let periodic_x = matches!(self.bc[0], SideBc::Periodic);
        let periodic_y = matches!(self.bc[2], SideBc::Periodic);
        build_rect_mesh(nx, ny, domain, periodic_x, periodic_y)
    }

    /// Initial data at `x`.
    pub fn initial(&self, x: [f64; 2]) -> PrimitiveState {
        match self.kind {
            ProblemKind::Vortex => self.vortex(x, 0.0),
            ProblemKind::BrioWu => {
                if x[0] < 0.5 {
                    PrimitiveState { rho: 1.0, v: [0.0, 0.0], p: 1.0, b: [0.75, 1.0] }
                } else {
                    PrimitiveState { rho: 0.125, v: [0.0, 0.0], p: 0.1, b: [0.75, -1.0] }
                }
            }
            ProblemKind::Blast => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                PrimitiveState {
                    rho: 1.0,
                    v: [0.0, 0.0],
                    p: if r < 0.1 { 1000.0 } else { 0.1 },
                    b: [100.0 / (4.0 * PI).sqrt(), 0.0],
                }
            }
            ProblemKind::Jet => {
                let ambient = PrimitiveState { rho: 0.1 * self.gamma, v: [0.0, 0.0], p: 1.0, b: [0.0, self.b_a] };
                match self.inflow {
                    Some(s) if on_strip(&s, &self.domain, x) => PrimitiveState { rho: s.rho, v: s.v, p: s.p, ..ambient },
                    _ => ambient,
                }
            }
        }
    }

    /// Exact solution, where one is known.
    pub fn exact(&self, x: [f64; 2], t: f64) -> Option<PrimitiveState> {
        match self.kind {
            ProblemKind::Vortex => Some(self.vortex(x, t)),
            _ => None,
        }
    }

    // The vortex is advected by the ambient velocity (1, 1).
    fn vortex(&self, x: [f64; 2], t: f64) -> PrimitiveState {
        let (x0, x1) = (x[0] - t, x[1] - t);
        let r2 = x0 * x0 + x1 * x1;
        let mu = self.mu_strength;
        let kappa = 2.0f64.sqrt() * mu;
        let dv = kappa / (2.0 * PI) * (0.5 * (1.0 - r2)).exp();
        let db = mu / (2.0 * PI) * (0.5 * (1.0 - r2)).exp();
        let dp = (mu * mu * (1.0 - r2) - kappa * kappa) / (8.0 * PI * PI) * (1.0 - r2).exp();
        PrimitiveState { rho: 1.0, v: [1.0 - x1 * dv, 1.0 + x0 * dv], p: 1.0 + dp, b: [-x1 * db, x0 * db] }
    }

    /// Node constraints for the non-periodic sides of `mesh`.
    pub fn boundary_conditions(&self, mesh: &Mesh, initial: &HydroStateField) -> BoundaryConditions {
        let gas = self.gas();
        let mut constraints = Vec::new();
        let coords: Vec<[f64; 2]> = mesh.vertex_class_master().iter().map(|&g| mesh.vertices()[g]).collect();
        for (k, side) in Side::ALL.into_iter().enumerate() {
            for node in mesh.boundary_vertex_classes(side) {
                match self.bc[k] {
                    SideBc::Periodic => {}
                    SideBc::FrozenInitial => constraints.push(NodeConstraint::Fixed { node, state: initial.states[node] }),
                    SideBc::Inflow { rho, v, p } => {
                        constraints.push(NodeConstraint::Fixed { node, state: conserved_from_primitive(rho, v, p, &gas) })
                    }
                    SideBc::ReflectingWall => constraints.push(NodeConstraint::Wall { node, normal: side.normal() }),
                }
            }
        }
        if let Some(s) = self.inflow {
            for node in mesh.boundary_vertex_classes(s.side) {
                if on_strip(&s, &self.domain, coords[node]) {
                    constraints.push(NodeConstraint::Fixed { node, state: conserved_from_primitive(s.rho, s.v, s.p, &gas) });
                }
            }
        }
        // Later fixed entries win; keep the inflow after the side treatment.
        let mut walls: Vec<NodeConstraint> = Vec::new();
        let mut fixed: Vec<NodeConstraint> = Vec::new();
        for c in constraints {
            match c {
                NodeConstraint::Wall { .. } => walls.push(c),
                NodeConstraint::Fixed { .. } => fixed.push(c),
            }
        }
        walls.extend(fixed);
        BoundaryConditions::new(walls)
    }

    /// Simulation and initial state at refinement `level`.
    pub fn setup(&self, level: u32) -> Result<(Simulation, MhdState)> {
        self.setup_on(self.mesh(level)?, EulerConfig::default(), NewtonConfig::default())
    }

    /// Simulation and initial state on a given mesh.
    pub fn setup_on(&self, mesh: Mesh, euler: EulerConfig, newton: NewtonConfig) -> Result<(Simulation, MhdState)> {
        let gas = self.gas();
        let coords: Vec<[f64; 2]> = mesh.vertex_class_master().iter().map(|&g| mesh.vertices()[g]).collect();
        let mut states = Vec::with_capacity(coords.len());
        for x in &coords {
            let w = self.initial(*x);
            let u = conserved_from_primitive(w.rho, w.v, w.p, &gas);
            if !crate::eos::is_admissible(&u, &gas) {
                return Err(Error::Inadmissible(format!("initial state of {} at {x:?}", self.name)));
            }
            states.push(u);
        }
        let hydro = HydroStateField::new(states);
        let boundary = self.boundary_conditions(&mesh, &hydro);
        let sim = Simulation::new(mesh, gas, boundary, euler, newton)?;
        let b = interpolate_curl(|x| self.initial(x).b, sim.bdm())?;
        Ok((sim, MhdState { hydro, b, time: 0.0 }))
    }
}

fn on_strip(s: &InflowStrip, domain: &Rect, x: [f64; 2]) -> bool {
    let tol = 1e-12 * (domain.x1 - domain.x0).max(domain.y1 - domain.y0);
    let (along, across, edge) = match s.side {
        Side::Bottom => (x[0], x[1], domain.y0),
        Side::Top => (x[0], x[1], domain.y1),
        Side::Left => (x[1], x[0], domain.x0),
        Side::Right => (x[1], x[0], domain.x1),
    };
    (across - edge).abs() <= tol && along >= s.range.0 - tol && along < s.range.1 - tol
}
