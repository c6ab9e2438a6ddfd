//! Finite-element spaces on a [`Mesh`](crate::mesh::Mesh): P1 for the
//! hydrodynamic state, BDM₁ for the magnetic field and P2 potentials.

pub mod bdm;
pub mod graph;
pub mod p1;
pub mod p2;
pub mod quadrature;

pub use bdm::{assemble_curl_mass, interpolate_curl, CurlSpaceBdm1};
pub use graph::{assemble_graph_matrices, GraphMatrices};
pub use p1::{interpolate_scalar, ScalarSpaceP1};
pub use p2::{gradient_embedding, PotentialSpaceP2};
pub use quadrature::TriangleRule;
