//! Covolume γ-law equation of state and entropy functionals.
//!
//! States are conserved vectors `[ρ, m_x, m_y, E]`. With covolume `b` the
//! pressure is `p = (γ−1)ρe/(1−bρ)`, `e` being the specific internal energy.
//! The entropies below reduce to the usual ideal-gas expressions at `b = 0`.

use crate::error::{Error, Result};

/// Gas constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GasParams {
    /// Ratio of specific heats.
    pub gamma: f64,
    /// Covolume.
    pub b: f64,
    /// Magnetic permeability.
    pub mu: f64,
}

impl GasParams {
    pub fn ideal(gamma: f64) -> Self {
        GasParams { gamma, b: 0.0, mu: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.0) || !(self.b >= 0.0) || !(self.mu > 0.0) || !self.gamma.is_finite() {
            return Err(Error::Config(format!("invalid gas parameters {self:?}")));
        }
        Ok(())
    }
}

/// True if `ρ > 0`, `ε > 0`, `1 − bρ > 0` and all components are finite.
pub fn is_admissible(u: &[f64; 4], gas: &GasParams) -> bool {
    let rho = u[0];
    if !(rho > 0.0) || !u.iter().all(|v| v.is_finite()) || !(1.0 - gas.b * rho > 0.0) {
        return false;
    }
    let eps = u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / rho;
    eps > 0.0
}

fn check(u: &[f64; 4], gas: &GasParams) -> Result<()> {
    if is_admissible(u, gas) {
        Ok(())
    } else {
        Err(Error::Inadmissible(format!("state {u:?}")))
    }
}

/// Internal energy per unit volume `ε = E − |m|²/(2ρ)`.
pub fn internal_energy(u: &[f64; 4]) -> Result<f64> {
    if !(u[0] > 0.0) {
        return Err(Error::Inadmissible(format!("non-positive density in {u:?}")));
    }
    Ok(u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0])
}

/// Pressure from density and specific internal energy.
pub fn pressure(rho: f64, e: f64, gas: &GasParams) -> Result<f64> {
    if !(rho > 0.0) || !(e > 0.0) || !(1.0 - gas.b * rho > 0.0) {
        return Err(Error::Inadmissible(format!("rho = {rho}, e = {e}")));
    }
    Ok((gas.gamma - 1.0) * e * rho / (1.0 - gas.b * rho))
}

/// Sound speed from density and specific internal energy.
pub fn sound_speed(rho: f64, e: f64, gas: &GasParams) -> Result<f64> {
    let p = pressure(rho, e, gas)?;
    Ok((gas.gamma * p / (rho * (1.0 - gas.b * rho))).sqrt())
}

/// Specific internal energy from density and pressure.
pub fn specific_energy_from_pressure(rho: f64, p: f64, gas: &GasParams) -> f64 {
    p * (1.0 - gas.b * rho) / ((gas.gamma - 1.0) * rho)
}

/// Conserved state from primitive density, velocity and pressure.
pub fn conserved_from_primitive(rho: f64, v: [f64; 2], p: f64, gas: &GasParams) -> [f64; 4] {
    let e = specific_energy_from_pressure(rho, p, gas);
    [rho, rho * v[0], rho * v[1], rho * e + 0.5 * rho * (v[0] * v[0] + v[1] * v[1])]
}

/// Pressure of a conserved state.
pub fn state_pressure(u: &[f64; 4], gas: &GasParams) -> Result<f64> {
    check(u, gas)?;
    let eps = internal_energy(u)?;
    pressure(u[0], eps / u[0], gas)
}

/// Specific entropy `s = ln(e)/(γ−1) + ln((1−bρ)/ρ)`.
pub fn specific_entropy(u: &[f64; 4], gas: &GasParams) -> Result<f64> {
    check(u, gas)?;
    let rho = u[0];
    let e = internal_energy(u)? / rho;
    Ok(e.ln() / (gas.gamma - 1.0) + ((1.0 - gas.b * rho) / rho).ln())
}

/// Mathematical entropy `η = −ρ s`.
pub fn math_entropy(u: &[f64; 4], gas: &GasParams) -> Result<f64> {
    Ok(-u[0] * specific_entropy(u, gas)?)
}

/// Surrogate entropy `s̃ = ε (1−bρ)^(γ−1) ρ^(−γ)`, a monotone function of `s`.
pub fn surrogate_entropy(u: &[f64; 4], gas: &GasParams) -> Result<f64> {
    check(u, gas)?;
    Ok(surrogate_entropy_unchecked(u, gas))
}

/// `s̃` without admissibility checks; used inside line searches.
#[inline]
pub fn surrogate_entropy_unchecked(u: &[f64; 4], gas: &GasParams) -> f64 {
    let rho = u[0];
    let eps = u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / rho;
    let cov = if gas.b == 0.0 { 1.0 } else { (1.0 - gas.b * rho).powf(gas.gamma - 1.0) };
    eps * cov * rho.powf(-gas.gamma)
}

/// Gradient of `η` with respect to the conserved variables.
pub fn math_entropy_gradient(u: &[f64; 4], gas: &GasParams) -> Result<[f64; 4]> {
    check(u, gas)?;
    let rho = u[0];
    let eps = internal_energy(u)?;
    let s = specific_entropy(u, gas)?;
    let v = [u[1] / rho, u[2] / rho];
    let gm1 = gas.gamma - 1.0;
    // η as a function of (ρ, ε) and the chain rule through ε(ρ, m, E).
    let d_eps = -rho / (gm1 * eps);
    let d_rho = -s + 1.0 / gm1 + 1.0 + gas.b * rho / (1.0 - gas.b * rho);
    let ke = 0.5 * (v[0] * v[0] + v[1] * v[1]);
    Ok([d_rho + d_eps * ke, -d_eps * v[0], -d_eps * v[1], d_eps])
}
