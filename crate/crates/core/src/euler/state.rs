//! Nodal hydrodynamic states and the Euler flux.

use crate::eos::{self, GasParams};
use crate::error::{Error, Result};

/// Conserved state `[ρ, m_x, m_y, E]`.
pub type State = [f64; 4];

/// Per-node conserved states over the P1 space.
#[derive(Clone, Debug, PartialEq)]
pub struct HydroStateField {
    pub states: Vec<State>,
}

impl HydroStateField {
    pub fn new(states: Vec<State>) -> Self {
        HydroStateField { states }
    }

    pub fn uniform(n: usize, u: State) -> Self {
        HydroStateField { states: vec![u; n] }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Returns the first inadmissible node, if any.
    pub fn check_admissible(&self, gas: &GasParams) -> Result<()> {
        match self.states.iter().position(|u| !eos::is_admissible(u, gas)) {
            None => Ok(()),
            Some(i) => Err(Error::Inadmissible(format!("node {i}: {:?}", self.states[i]))),
        }
    }

    /// `Σ_i m_i U_i`.
    pub fn totals(&self, lumped: &[f64]) -> State {
        let mut t = [0.0; 4];
        for (u, m) in self.states.iter().zip(lumped) {
            for c in 0..4 {
                t[c] += m * u[c];
            }
        }
        t
    }
}

/// Primitive quantities cached per node for flux and wavespeed evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub v: [f64; 2],
    pub p: f64,
    pub c: f64,
}

impl Primitive {
    pub fn from_state(u: &State, gas: &GasParams) -> Result<Self> {
        if !eos::is_admissible(u, gas) {
            return Err(Error::Inadmissible(format!("state {u:?}")));
        }
        let rho = u[0];
        let e = eos::internal_energy(u)? / rho;
        let p = eos::pressure(rho, e, gas)?;
        let c = eos::sound_speed(rho, e, gas)?;
        Ok(Primitive { rho, v: [u[1] / rho, u[2] / rho], p, c })
    }
}

pub fn primitives(field: &HydroStateField, gas: &GasParams) -> Result<Vec<Primitive>> {
    field
        .states
        .iter()
        .enumerate()
        .map(|(i, u)| Primitive::from_state(u, gas).map_err(|_| Error::Inadmissible(format!("node {i}: {u:?}"))))
        .collect()
}

/// `f(U) · c` for the Euler flux `f(U) = [m, m⊗v + pI, (E+p)v]`.
#[inline]
pub fn flux_dot(u: &State, w: &Primitive, c: [f64; 2]) -> State {
    let vc = w.v[0] * c[0] + w.v[1] * c[1];
    [u[0] * vc, u[1] * vc + w.p * c[0], u[2] * vc + w.p * c[1], (u[3] + w.p) * vc]
}

#[inline]
pub(crate) fn axpy(a: f64, x: &State, y: &mut State) {
    for c in 0..4 {
        y[c] += a * x[c];
    }
}

#[inline]
pub(crate) fn sub(a: &State, b: &State) -> State {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}
