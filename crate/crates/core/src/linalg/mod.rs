//! Sparse storage and iterative solvers.

pub mod dense;
pub mod krylov;
pub mod precond;
pub mod sparse;

pub use krylov::{bicgstab, bicgstab_preconditioned, cg, dot, norm2, SolveStats};
pub use precond::{Identity, Ilu0, Jacobi, Preconditioner};
pub use sparse::CsrMatrix;

/// Default relative tolerance of the iterative solvers.
pub const DEFAULT_REL_TOL: f64 = 1e-12;
