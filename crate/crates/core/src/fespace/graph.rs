//! Node-graph matrices of the P1 space: lumped and consistent mass and the
//! discrete divergence vectors `c_ij = ∫ φ_i ∇φ_j`.

use super::bdm::element_pattern;
use super::p1::ScalarSpaceP1;
use crate::linalg::CsrMatrix;

/// Graph data on the CSR pattern of the P1 node graph.
///
/// All per-entry arrays share the storage order of `pattern`.
#[derive(Clone, Debug)]
pub struct GraphMatrices {
    pattern: CsrMatrix,
    lumped: Vec<f64>,
    mass: Vec<f64>,
    cx: Vec<f64>,
    cy: Vec<f64>,
    cnorm: Vec<f64>,
    transpose: Vec<usize>,
    diag: Vec<usize>,
    lambda: Vec<f64>,
    measure: f64,
}

impl GraphMatrices {
    pub fn num_nodes(&self) -> usize {
        self.lumped.len()
    }

    pub fn pattern(&self) -> &CsrMatrix {
        &self.pattern
    }

    /// Index range of row `i` in the per-entry arrays.
    #[inline]
    pub fn row(&self, i: usize) -> std::ops::Range<usize> {
        self.pattern.row_ptr()[i]..self.pattern.row_ptr()[i + 1]
    }

    #[inline]
    pub fn col(&self, k: usize) -> usize {
        self.pattern.col_idx()[k]
    }

    pub fn lumped(&self) -> &[f64] {
        &self.lumped
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    #[inline]
    pub fn c(&self, k: usize) -> [f64; 2] {
        [self.cx[k], self.cy[k]]
    }

    #[inline]
    pub fn cnorm(&self, k: usize) -> f64 {
        self.cnorm[k]
    }

    /// Unit direction of `c_ij`, zero where `c_ij` vanishes.
    #[inline]
    pub fn normal(&self, k: usize) -> [f64; 2] {
        let n = self.cnorm[k];
        if n > 0.0 {
            [self.cx[k] / n, self.cy[k] / n]
        } else {
            [0.0, 0.0]
        }
    }

    /// Storage index of `(j, i)` for the entry `(i, j)` stored at `k`.
    #[inline]
    pub fn transpose(&self, k: usize) -> usize {
        self.transpose[k]
    }

    /// Storage index of the diagonal entry of row `i`.
    #[inline]
    pub fn diag(&self, i: usize) -> usize {
        self.diag[i]
    }

    /// Convex weight `1/(card I(i) − 1)`.
    pub fn lambda(&self, i: usize) -> f64 {
        self.lambda[i]
    }

    /// Total measure of the domain.
    pub fn measure(&self) -> f64 {
        self.measure
    }

    /// Consistent mass matrix as a standalone CSR matrix.
    pub fn mass_matrix(&self) -> CsrMatrix {
        let mut m = self.pattern.clone();
        m.values_mut().copy_from_slice(&self.mass);
        m
    }
}

/// Assembles `m_i`, `m_ij` and `c_ij` with exact element integrals.
pub fn assemble_graph_matrices(space: &ScalarSpaceP1) -> GraphMatrices {
    let n = space.num_nodes();
    let pattern = element_pattern(n, space.cell_dofs());
    let nnz = pattern.nnz();
    let mut mass = vec![0.0; nnz];
    let mut cx = vec![0.0; nnz];
    let mut cy = vec![0.0; nnz];
    let mut lumped = vec![0.0; n];
    for (t, dofs) in space.cell_dofs().iter().enumerate() {
        let area = space.area(t);
        let g = space.grads(t);
        for a in 0..3 {
            lumped[dofs[a]] += area / 3.0;
            for b in 0..3 {
                let k = pattern.find(dofs[a], dofs[b]).expect("element pattern");
                mass[k] += if a == b { area / 6.0 } else { area / 12.0 };
                cx[k] += area / 3.0 * g[b][0];
                cy[k] += area / 3.0 * g[b][1];
            }
        }
    }
    let cnorm = cx.iter().zip(&cy).map(|(x, y)| (x * x + y * y).sqrt()).collect();
    let transpose = pattern.transpose_index().expect("element pattern is symmetric");
    let diag = (0..n).map(|i| pattern.find(i, i).expect("diagonal present")).collect();
    let lambda = (0..n)
        .map(|i| {
            let card = pattern.row_ptr()[i + 1] - pattern.row_ptr()[i];
            1.0 / (card.max(2) - 1) as f64
        })
        .collect();
    let measure = lumped.iter().sum();
    GraphMatrices { pattern, lumped, mass, cx, cy, cnorm, transpose, diag, lambda, measure }
}
