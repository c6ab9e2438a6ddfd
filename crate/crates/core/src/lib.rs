//! Finite-element solver for ideal MHD.
//!
//! The equations are split into the compressible Euler system, advanced by an
//! invariant-domain-preserving continuous finite-element scheme on P1 nodes,
//! and a Lorentz-force/induction source system, solved by Crank–Nicolson with
//! Newton iterations on P1 velocity and BDM₁ magnetic field. The two are
//! composed with Strang splitting.
//!
//! ```no_run
//! use mhd_core::bench::problem_by_name;
//! use mhd_core::euler::Mode;
//!
//! let spec = problem_by_name("vortex")?;
//! let (sim, state) = spec.setup(0)?;
//! let end = sim.run_to_time(&state, spec.t_final, spec.cfl, Mode::HighLimited, |_, _, _| Ok(()))?;
//! println!("t = {}", end.time);
//! # Ok::<(), mhd_core::Error>(())
//! ```

pub mod bench;
pub mod diagnostics;
pub mod eos;
pub mod error;
pub mod euler;
pub mod fespace;
pub mod induction;
pub mod linalg;
pub mod mesh;
pub mod splitting;

pub use eos::GasParams;
pub use error::{Error, Result};
pub use euler::{HydroStateField, Mode};
pub use mesh::{build_rect_mesh, Mesh, Rect};
pub use splitting::{MhdState, Simulation};
