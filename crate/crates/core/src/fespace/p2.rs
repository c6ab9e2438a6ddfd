//! Continuous piecewise-quadratic Lagrange space and its gradient embedding
//! into BDM₁.

use super::bdm::CurlSpaceBdm1;
use crate::linalg::CsrMatrix;
use crate::mesh::Mesh;

/// P2 Lagrange space: vertex classes first, then one midpoint DOF per edge class.
#[derive(Clone, Debug)]
pub struct PotentialSpaceP2 {
    n_vertices: usize,
    n_edges: usize,
    cell_dofs: Vec<[usize; 6]>,
    /// For each edge class: low vertex class, high vertex class, length.
    edge_data: Vec<(usize, usize, f64)>,
}

impl PotentialSpaceP2 {
    pub fn new(mesh: &Mesh) -> Self {
        let nv = mesh.num_vertex_classes();
        let vc = mesh.vertex_class();
        let ec = mesh.edge_class();
        let cell_dofs = mesh
            .triangles()
            .iter()
            .zip(mesh.triangle_edges())
            .map(|(tri, te)| [vc[tri[0]], vc[tri[1]], vc[tri[2]], nv + ec[te[0]], nv + ec[te[1]], nv + ec[te[2]]])
            .collect();
        let edge_data = mesh
            .edge_class_master()
            .iter()
            .map(|&g| {
                let [a, b] = mesh.edges()[g];
                (vc[a], vc[b], mesh.edge_length(g))
            })
            .collect();
        PotentialSpaceP2 { n_vertices: nv, n_edges: mesh.num_edge_classes(), cell_dofs, edge_data }
    }

    pub fn num_dofs(&self) -> usize {
        self.n_vertices + self.n_edges
    }

    pub fn num_vertex_dofs(&self) -> usize {
        self.n_vertices
    }

    /// Vertex DOFs in local vertex order, then midpoint DOFs of the edges
    /// opposite each local vertex.
    pub fn cell_dofs(&self) -> &[[usize; 6]] {
        &self.cell_dofs
    }
}

/// Matrix mapping P2 coefficients of `ω` to the BDM₁ coefficients of `∇ω`.
///
/// Along an edge of length `L` from `a` to `b` with midpoint `m`, the
/// tangential derivative of `ω` is linear with mean `(ω_b − ω_a)/L` and first
/// moment `(2ω_a − 4ω_m + 2ω_b)/L`.
pub fn gradient_embedding(p2: &PotentialSpaceP2, bdm: &CurlSpaceBdm1) -> CsrMatrix {
    assert_eq!(2 * p2.n_edges, bdm.num_dofs(), "spaces must share a mesh");
    let mut triplets = Vec::with_capacity(5 * p2.n_edges);
    for (e, &(a, b, len)) in p2.edge_data.iter().enumerate() {
        let m = p2.n_vertices + e;
        triplets.push((2 * e, a, -1.0 / len));
        triplets.push((2 * e, b, 1.0 / len));
        triplets.push((2 * e + 1, a, 2.0 / len));
        triplets.push((2 * e + 1, m, -4.0 / len));
        triplets.push((2 * e + 1, b, 2.0 / len));
    }
    CsrMatrix::from_triplets(bdm.num_dofs(), p2.num_dofs(), &triplets).expect("indices are in range")
}
