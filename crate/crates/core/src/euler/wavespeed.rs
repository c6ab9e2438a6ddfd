//! Guaranteed upper bound on the maximum wavespeed of the one-dimensional
//! Riemann problem (two-rarefaction estimate).

use super::state::{Primitive, State};
use crate::eos::GasParams;
use crate::error::Result;

#[inline]
fn pos(z: f64) -> f64 {
    z.max(0.0)
}

#[inline]
fn neg(z: f64) -> f64 {
    (-z).max(0.0)
}

/// `λ#` from cached primitives along the unit direction `n`.
pub fn lambda_sharp_prim(l: &Primitive, r: &Primitive, n: [f64; 2], gas: &GasParams) -> f64 {
    let g = gas.gamma;
    let vl = l.v[0] * n[0] + l.v[1] * n[1];
    let vr = r.v[0] * n[0] + r.v[1] * n[1];
    let al = l.c * (1.0 - gas.b * l.rho);
    let ar = r.c * (1.0 - gas.b * r.rho);
    let expo = (g - 1.0) / (2.0 * g);
    let num = al + ar - 0.5 * (g - 1.0) * (vr - vl);
    // A non-positive numerator means the two rarefactions open a vacuum.
    let p_sharp = if num > 0.0 {
        (num / (al * l.p.powf(-expo) + ar * r.p.powf(-expo))).powf(1.0 / expo)
    } else {
        0.0
    };
    let k = (g + 1.0) / (2.0 * g);
    let lam1 = vl - l.c * (1.0 + k * pos((p_sharp - l.p) / l.p)).sqrt();
    let lam3 = vr + r.c * (1.0 + k * pos((p_sharp - r.p) / r.p)).sqrt();
    neg(lam1).max(pos(lam3))
}

/// `λ#(U_L, U_R, n)` for conserved states.
pub fn lambda_sharp(ul: &State, ur: &State, n: [f64; 2], gas: &GasParams) -> Result<f64> {
    let l = Primitive::from_state(ul, gas)?;
    let r = Primitive::from_state(ur, gas)?;
    Ok(lambda_sharp_prim(&l, &r, n, gas))
}
