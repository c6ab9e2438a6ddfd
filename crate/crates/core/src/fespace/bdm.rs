//! Curl-conforming BDM₁ space on triangles.
//!
//! Each edge carries two degrees of freedom: the mean tangential component and
//! the first Legendre moment of the tangential component, scaled so that a
//! linear trace `u·t = a + b(2s − 1)` has moments `(a, b)`. Tangents follow the
//! global edge orientation, so no sign flips are needed between neighbours.

use super::quadrature::{gauss_legendre5, TriangleRule};
use crate::error::{Error, Result};
use crate::linalg::dense::invert;
use crate::linalg::CsrMatrix;
use crate::mesh::Mesh;

/// Local representation of the six basis functions of one triangle as
/// linear fields in the scaled coordinate `ξ = (x − centroid)/h`.
#[derive(Clone, Copy, Debug)]
struct BdmCell {
    centroid: [f64; 2],
    h: f64,
    /// `coef[n][j]`: coefficient of monomial `n` in basis function `j`.
    coef: [[f64; 6]; 6],
}

impl BdmCell {
    fn eval(&self, x: [f64; 2]) -> [[f64; 2]; 6] {
        let xi = [(x[0] - self.centroid[0]) / self.h, (x[1] - self.centroid[1]) / self.h];
        let c = &self.coef;
        let mut out = [[0.0; 2]; 6];
        for (j, o) in out.iter_mut().enumerate() {
            *o = [
                c[0][j] + c[2][j] * xi[0] + c[3][j] * xi[1],
                c[1][j] + c[4][j] * xi[0] + c[5][j] * xi[1],
            ];
        }
        out
    }

    fn curl(&self) -> [f64; 6] {
        let mut out = [0.0; 6];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (self.coef[4][j] - self.coef[3][j]) / self.h;
        }
        out
    }
}

fn monomials(xi: [f64; 2]) -> [[f64; 2]; 6] {
    [[1.0, 0.0], [0.0, 1.0], [xi[0], 0.0], [xi[1], 0.0], [0.0, xi[0]], [0.0, xi[1]]]
}

/// BDM₁ space with degree-4 quadrature tables.
#[derive(Clone, Debug)]
pub struct CurlSpaceBdm1 {
    n_dofs: usize,
    cell_dofs: Vec<[usize; 6]>,
    cells: Vec<BdmCell>,
    areas: Vec<f64>,
    rule: TriangleRule,
    psi_qp: Vec<[[[f64; 2]; 6]; 6]>,
    curl: Vec<[f64; 6]>,
    edge_geometry: Vec<([f64; 2], [f64; 2])>,
}

impl CurlSpaceBdm1 {
    pub fn new(mesh: &Mesh) -> Result<Self> {
        let rule = TriangleRule::degree4();
        let nt = mesh.num_triangles();
        let mut cell_dofs = Vec::with_capacity(nt);
        let mut cells = Vec::with_capacity(nt);
        let mut areas = Vec::with_capacity(nt);
        let mut psi_qp = Vec::with_capacity(nt);
        let mut curl = Vec::with_capacity(nt);
        for t in 0..nt {
            let p = mesh.triangle_coords(t);
            let area = mesh.signed_area(t);
            let centroid = [(p[0][0] + p[1][0] + p[2][0]) / 3.0, (p[0][1] + p[1][1] + p[2][1]) / 3.0];
            let h = (2.0 * area).sqrt();
            let mut dmat = [[0.0; 6]; 6];
            let mut dofs = [0; 6];
            for (k, &e) in mesh.triangle_edges()[t].iter().enumerate() {
                let [a, b] = mesh.edges()[e];
                let (pa, pb) = (mesh.vertices()[a], mesh.vertices()[b]);
                let len = mesh.edge_length(e);
                let tan = [(pb[0] - pa[0]) / len, (pb[1] - pa[1]) / len];
                let ma = monomials([(pa[0] - centroid[0]) / h, (pa[1] - centroid[1]) / h]);
                let mb = monomials([(pb[0] - centroid[0]) / h, (pb[1] - centroid[1]) / h]);
                for n in 0..6 {
                    let ta = ma[n][0] * tan[0] + ma[n][1] * tan[1];
                    let tb = mb[n][0] * tan[0] + mb[n][1] * tan[1];
                    dmat[2 * k][n] = 0.5 * (ta + tb);
                    dmat[2 * k + 1][n] = 0.5 * (tb - ta);
                }
                let class = mesh.edge_class()[e];
                dofs[2 * k] = 2 * class;
                dofs[2 * k + 1] = 2 * class + 1;
            }
            let coef = invert(&dmat).ok_or_else(|| Error::Mesh(format!("singular BDM element matrix on triangle {t}")))?;
            let cell = BdmCell { centroid, h, coef };
            let mut table = [[[0.0; 2]; 6]; 6];
            for (q, row) in table.iter_mut().enumerate() {
                *row = cell.eval(rule.point(q, &p));
            }
            cell_dofs.push(dofs);
            cells.push(cell);
            areas.push(area);
            psi_qp.push(table);
            curl.push(cell.curl());
        }
        let edge_geometry = mesh
            .edge_class_master()
            .iter()
            .map(|&g| {
                let [a, b] = mesh.edges()[g];
                (mesh.vertices()[a], mesh.vertices()[b])
            })
            .collect();
        Ok(CurlSpaceBdm1 {
            n_dofs: 2 * mesh.num_edge_classes(),
            cell_dofs,
            cells,
            areas,
            rule,
            psi_qp,
            curl,
            edge_geometry,
        })
    }

    pub fn num_dofs(&self) -> usize {
        self.n_dofs
    }

    /// Global DOFs of triangle `t`; local DOF `2k + m` is moment `m` of local edge `k`.
    pub fn cell_dofs(&self) -> &[[usize; 6]] {
        &self.cell_dofs
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    /// Degree-4 rule used by the tables.
    pub fn rule(&self) -> &TriangleRule {
        &self.rule
    }

    /// Basis values at the quadrature points of triangle `t`, indexed `[q][j]`.
    pub fn basis_at_qp(&self, t: usize) -> &[[[f64; 2]; 6]; 6] {
        &self.psi_qp[t]
    }

    /// Constant curls of the six basis functions of triangle `t`.
    pub fn curl(&self, t: usize) -> &[f64; 6] {
        &self.curl[t]
    }

    /// Basis values at an arbitrary point of triangle `t`.
    pub fn basis_at(&self, t: usize, x: [f64; 2]) -> [[f64; 2]; 6] {
        self.cells[t].eval(x)
    }

    /// Field value at point `x` of triangle `t`.
    pub fn evaluate(&self, t: usize, x: [f64; 2], coeffs: &[f64]) -> [f64; 2] {
        let psi = self.basis_at(t, x);
        let mut out = [0.0; 2];
        for (j, &d) in self.cell_dofs[t].iter().enumerate() {
            out[0] += coeffs[d] * psi[j][0];
            out[1] += coeffs[d] * psi[j][1];
        }
        out
    }

    /// Field value at quadrature point `q` of triangle `t`.
    pub fn evaluate_qp(&self, t: usize, q: usize, coeffs: &[f64]) -> [f64; 2] {
        let psi = &self.psi_qp[t][q];
        let mut out = [0.0; 2];
        for (j, &d) in self.cell_dofs[t].iter().enumerate() {
            out[0] += coeffs[d] * psi[j][0];
            out[1] += coeffs[d] * psi[j][1];
        }
        out
    }

    /// Constant curl of the field on triangle `t`.
    pub fn evaluate_curl(&self, t: usize, coeffs: &[f64]) -> f64 {
        self.cell_dofs[t].iter().zip(&self.curl[t]).map(|(&d, c)| coeffs[d] * c).sum()
    }

    /// Endpoints of the master edge carrying DOFs `2e` and `2e + 1`.
    pub fn edge_endpoints(&self, e: usize) -> ([f64; 2], [f64; 2]) {
        self.edge_geometry[e]
    }
}

/// Edge-moment interpolation of `f`.
pub fn interpolate_curl(f: impl Fn([f64; 2]) -> [f64; 2], space: &CurlSpaceBdm1) -> Result<Vec<f64>> {
    let (s, w) = gauss_legendre5();
    let mut out = vec![0.0; space.num_dofs()];
    for (e, &(pa, pb)) in space.edge_geometry.iter().enumerate() {
        let d = [pb[0] - pa[0], pb[1] - pa[1]];
        let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
        let tan = [d[0] / len, d[1] / len];
        let (mut m0, mut m1) = (0.0, 0.0);
        for q in 0..5 {
            let x = [pa[0] + s[q] * d[0], pa[1] + s[q] * d[1]];
            let v = f(x);
            if !(v[0].is_finite() && v[1].is_finite()) {
                return Err(Error::NonFinite(format!("vector sample at {x:?}")));
            }
            let ut = v[0] * tan[0] + v[1] * tan[1];
            m0 += w[q] * ut;
            m1 += w[q] * ut * (2.0 * s[q] - 1.0);
        }
        out[2 * e] = m0;
        out[2 * e + 1] = 3.0 * m1;
    }
    Ok(out)
}

/// Sparsity pattern coupling all DOFs that share a triangle.
pub(crate) fn element_pattern<const K: usize>(n: usize, cell_dofs: &[[usize; K]]) -> CsrMatrix {
    let mut rows = vec![Vec::new(); n];
    for dofs in cell_dofs {
        for &a in dofs {
            rows[a].extend_from_slice(dofs);
        }
    }
    CsrMatrix::from_pattern(n, rows)
}

/// L² Gram matrix of the BDM₁ basis.
pub fn assemble_curl_mass(space: &CurlSpaceBdm1) -> CsrMatrix {
    let mut m = element_pattern(space.num_dofs(), space.cell_dofs());
    let w = &space.rule.weights;
    for t in 0..space.num_cells() {
        let psi = &space.psi_qp[t];
        let area = space.areas[t];
        let dofs = space.cell_dofs[t];
        for a in 0..6 {
            for b in 0..6 {
                let mut v = 0.0;
                for q in 0..w.len() {
                    v += w[q] * (psi[q][a][0] * psi[q][b][0] + psi[q][a][1] * psi[q][b][1]);
                }
                m.add_to(dofs[a], dofs[b], area * v);
            }
        }
    }
    m
}
