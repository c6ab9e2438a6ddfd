//! Continuous piecewise-linear Lagrange space.

use crate::error::{Error, Result};
use crate::mesh::Mesh;

/// P1 Lagrange space; nodes are the vertex classes of the mesh.
#[derive(Clone, Debug)]
pub struct ScalarSpaceP1 {
    coords: Vec<[f64; 2]>,
    cell_dofs: Vec<[usize; 3]>,
    areas: Vec<f64>,
    grads: Vec<[[f64; 2]; 3]>,
}

impl ScalarSpaceP1 {
    pub fn new(mesh: &Mesh) -> Self {
        let class = mesh.vertex_class();
        let coords = mesh.vertex_class_master().iter().map(|&g| mesh.vertices()[g]).collect();
        let mut cell_dofs = Vec::with_capacity(mesh.num_triangles());
        let mut areas = Vec::with_capacity(mesh.num_triangles());
        let mut grads = Vec::with_capacity(mesh.num_triangles());
        for (t, tri) in mesh.triangles().iter().enumerate() {
            cell_dofs.push([class[tri[0]], class[tri[1]], class[tri[2]]]);
            let p = mesh.triangle_coords(t);
            let area = mesh.signed_area(t);
            let mut g = [[0.0; 2]; 3];
            for (i, gi) in g.iter_mut().enumerate() {
                let e = [p[(i + 2) % 3][0] - p[(i + 1) % 3][0], p[(i + 2) % 3][1] - p[(i + 1) % 3][1]];
                *gi = [-e[1] / (2.0 * area), e[0] / (2.0 * area)];
            }
            areas.push(area);
            grads.push(g);
        }
        ScalarSpaceP1 { coords, cell_dofs, areas, grads }
    }

    pub fn num_nodes(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates of each node, taken at its master vertex.
    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn cell_dofs(&self) -> &[[usize; 3]] {
        &self.cell_dofs
    }

    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    /// Physical gradients of the three local basis functions of triangle `t`.
    pub fn grads(&self, t: usize) -> &[[f64; 2]; 3] {
        &self.grads[t]
    }

    /// Value of a nodal field at barycentric coordinates `bary` of triangle `t`.
    pub fn evaluate(&self, t: usize, bary: [f64; 3], values: &[f64]) -> f64 {
        let d = self.cell_dofs[t];
        bary[0] * values[d[0]] + bary[1] * values[d[1]] + bary[2] * values[d[2]]
    }
}

/// Nodal interpolation of `f`.
pub fn interpolate_scalar(f: impl Fn([f64; 2]) -> f64, space: &ScalarSpaceP1) -> Result<Vec<f64>> {
    space
        .coords()
        .iter()
        .map(|&x| {
            let v = f(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinite(format!("scalar sample at {x:?}")))
            }
        })
        .collect()
}
