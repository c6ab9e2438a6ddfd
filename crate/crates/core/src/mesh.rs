//! Structured triangulations of rectangles with optional periodic identification.
//!
//! Vertices are stored geometrically: a periodic mesh keeps the duplicated
//! vertices on the identified sides and records, for every vertex and edge,
//! the master it is merged with. Finite-element spaces number their degrees of
//! freedom by these master classes.

use crate::error::{Error, Result};

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }
}

/// One side of the rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

    /// Outward unit normal.
    pub fn normal(self) -> [f64; 2] {
        match self {
            Side::Left => [-1.0, 0.0],
            Side::Right => [1.0, 0.0],
            Side::Bottom => [0.0, -1.0],
            Side::Top => [0.0, 1.0],
        }
    }
}

/// Classification of a geometric edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeTag {
    /// Shared by two triangles, possibly through a periodic identification.
    Interior,
    /// Lies on a non-periodic side of the domain.
    Boundary(Side),
}

/// Affine map `x = offset + jac · ξ` from the reference triangle
/// `(0,0), (1,0), (0,1)` onto a mesh triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefMap {
    pub jac: [[f64; 2]; 2],
    pub offset: [f64; 2],
    pub det: f64,
    pub inv_t: [[f64; 2]; 2],
}

impl RefMap {
    pub fn from_vertices(p: [[f64; 2]; 3]) -> Self {
        let jac = [[p[1][0] - p[0][0], p[2][0] - p[0][0]], [p[1][1] - p[0][1], p[2][1] - p[0][1]]];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let inv_t = [[jac[1][1] / det, -jac[1][0] / det], [-jac[0][1] / det, jac[0][0] / det]];
        RefMap { jac, offset: p[0], det, inv_t }
    }

    pub fn apply(&self, xi: [f64; 2]) -> [f64; 2] {
        [
            self.offset[0] + self.jac[0][0] * xi[0] + self.jac[0][1] * xi[1],
            self.offset[1] + self.jac[1][0] * xi[0] + self.jac[1][1] * xi[1],
        ]
    }

    /// Maps a reference gradient to the physical gradient.
    pub fn grad(&self, g: [f64; 2]) -> [f64; 2] {
        [
            self.inv_t[0][0] * g[0] + self.inv_t[0][1] * g[1],
            self.inv_t[1][0] * g[0] + self.inv_t[1][1] * g[1],
        ]
    }
}

/// Conforming triangulation of a rectangle.
///
/// Triangles are counterclockwise. Local edge `k` of a triangle is the edge
/// opposite its local vertex `k`. Edges are oriented from the lower to the
/// higher geometric vertex index; periodic translation preserves this
/// orientation, so master and slave edges agree.
#[derive(Clone, Debug)]
pub struct Mesh {
    nx: usize,
    ny: usize,
    domain: Rect,
    periodic: [bool; 2],
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    triangle_edges: Vec<[usize; 3]>,
    edge_to_triangles: Vec<[Option<usize>; 2]>,
    vertex_master: Vec<usize>,
    edge_master: Vec<usize>,
    edge_tags: Vec<EdgeTag>,
    vertex_class: Vec<usize>,
    vertex_class_master: Vec<usize>,
    edge_class: Vec<usize>,
    edge_class_master: Vec<usize>,
}

/// Builds an `nx × ny` grid of rectangles, each cut by its bottom-left to
/// top-right diagonal.
pub fn build_rect_mesh(nx: usize, ny: usize, domain: Rect, periodic_x: bool, periodic_y: bool) -> Result<Mesh> {
    if nx < 2 || ny < 2 {
        return Err(Error::Mesh(format!("need at least 2 cells per direction, got {nx}×{ny}")));
    }
    let finite = [domain.x0, domain.x1, domain.y0, domain.y1].iter().all(|v| v.is_finite());
    if !finite || domain.x1 <= domain.x0 || domain.y1 <= domain.y0 {
        return Err(Error::Mesh(format!("degenerate domain {domain:?}")));
    }

    let vid = |i: usize, j: usize| j * (nx + 1) + i;
    let hx = (domain.x1 - domain.x0) / nx as f64;
    let hy = (domain.y1 - domain.y0) / ny as f64;

    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    let mut vertex_master = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            // Use exact end coordinates so identified vertices differ by exactly one period.
            let x = if i == nx { domain.x1 } else { domain.x0 + i as f64 * hx };
            let y = if j == ny { domain.y1 } else { domain.y0 + j as f64 * hy };
            vertices.push([x, y]);
            let mi = if periodic_x && i == nx { 0 } else { i };
            let mj = if periodic_y && j == ny { 0 } else { j };
            vertex_master.push(vid(mi, mj));
        }
    }

    let n_h = nx * (ny + 1);
    let n_v = (nx + 1) * ny;
    let hid = |i: usize, j: usize| j * nx + i;
    let vert_id = |i: usize, j: usize| n_h + j * (nx + 1) + i;
    let did = |i: usize, j: usize| n_h + n_v + j * nx + i;

    let n_edges = n_h + n_v + nx * ny;
    let mut edges = vec![[0usize; 2]; n_edges];
    let mut edge_master = vec![0usize; n_edges];
    let mut edge_tags = vec![EdgeTag::Interior; n_edges];
    for j in 0..=ny {
        for i in 0..nx {
            let e = hid(i, j);
            edges[e] = [vid(i, j), vid(i + 1, j)];
            edge_master[e] = if periodic_y && j == ny { hid(i, 0) } else { e };
            if !periodic_y && j == 0 {
                edge_tags[e] = EdgeTag::Boundary(Side::Bottom);
            } else if !periodic_y && j == ny {
                edge_tags[e] = EdgeTag::Boundary(Side::Top);
            }
        }
    }
    for j in 0..ny {
        for i in 0..=nx {
            let e = vert_id(i, j);
            edges[e] = [vid(i, j), vid(i, j + 1)];
            edge_master[e] = if periodic_x && i == nx { vert_id(0, j) } else { e };
            if !periodic_x && i == 0 {
                edge_tags[e] = EdgeTag::Boundary(Side::Left);
            } else if !periodic_x && i == nx {
                edge_tags[e] = EdgeTag::Boundary(Side::Right);
            }
        }
    }
    for j in 0..ny {
        for i in 0..nx {
            edges[did(i, j)] = [vid(i, j), vid(i + 1, j + 1)];
            edge_master[did(i, j)] = did(i, j);
        }
    }

    let mut triangles = Vec::with_capacity(2 * nx * ny);
    let mut triangle_edges = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
            triangles.push([a, b, c]);
            triangle_edges.push([vert_id(i + 1, j), did(i, j), hid(i, j)]);
            triangles.push([a, c, d]);
            triangle_edges.push([hid(i, j + 1), vert_id(i, j), did(i, j)]);
        }
    }

    let mut edge_to_triangles = vec![[None, None]; n_edges];
    for (t, te) in triangle_edges.iter().enumerate() {
        for &e in te {
            let m = edge_master[e];
            let slot = &mut edge_to_triangles[m];
            if slot[0].is_none() {
                slot[0] = Some(t);
            } else {
                slot[1] = Some(t);
            }
        }
    }
    for e in 0..n_edges {
        if edge_master[e] != e {
            edge_to_triangles[e] = edge_to_triangles[edge_master[e]];
        }
    }

    let (vertex_class, vertex_class_master) = compact_classes(&vertex_master);
    let (edge_class, edge_class_master) = compact_classes(&edge_master);

    Ok(Mesh {
        nx,
        ny,
        domain,
        periodic: [periodic_x, periodic_y],
        vertices,
        triangles,
        edges,
        triangle_edges,
        edge_to_triangles,
        vertex_master,
        edge_master,
        edge_tags,
        vertex_class,
        vertex_class_master,
        edge_class,
        edge_class_master,
    })
}

// Masters always precede their slaves, so one pass assigns compact ids.
fn compact_classes(master: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut class = vec![usize::MAX; master.len()];
    let mut masters = Vec::new();
    for g in 0..master.len() {
        if master[g] == g {
            class[g] = masters.len();
            masters.push(g);
        } else {
            class[g] = class[master[g]];
        }
    }
    (class, masters)
}

/// Uniform red refinement: every triangle is split into four.
///
/// For this structured family red refinement coincides with halving the cell
/// size, so the result is rebuilt on the doubled grid.
pub fn refine(mesh: &Mesh) -> Mesh {
    build_rect_mesh(2 * mesh.nx, 2 * mesh.ny, mesh.domain, mesh.periodic[0], mesh.periodic[1])
        .expect("refining a valid mesh yields a valid mesh")
}

impl Mesh {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    pub fn periodic(&self) -> [bool; 2] {
        self.periodic
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Geometric edges of each triangle, local edge `k` opposite local vertex `k`.
    pub fn triangle_edges(&self) -> &[[usize; 3]] {
        &self.triangle_edges
    }

    /// Triangles adjacent to each edge, through periodic identification.
    pub fn edge_to_triangles(&self) -> &[[Option<usize>; 2]] {
        &self.edge_to_triangles
    }

    /// Geometric master vertex of every geometric vertex.
    pub fn vertex_master(&self) -> &[usize] {
        &self.vertex_master
    }

    /// Geometric master edge of every geometric edge.
    pub fn edge_master(&self) -> &[usize] {
        &self.edge_master
    }

    pub fn edge_tags(&self) -> &[EdgeTag] {
        &self.edge_tags
    }

    /// Compact class id of every geometric vertex.
    pub fn vertex_class(&self) -> &[usize] {
        &self.vertex_class
    }

    /// Geometric master vertex of each class.
    pub fn vertex_class_master(&self) -> &[usize] {
        &self.vertex_class_master
    }

    pub fn num_vertex_classes(&self) -> usize {
        self.vertex_class_master.len()
    }

    /// Compact class id of every geometric edge.
    pub fn edge_class(&self) -> &[usize] {
        &self.edge_class
    }

    /// Geometric master edge of each class.
    pub fn edge_class_master(&self) -> &[usize] {
        &self.edge_class_master
    }

    pub fn num_edge_classes(&self) -> usize {
        self.edge_class_master.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_coords(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn ref_map(&self, t: usize) -> RefMap {
        RefMap::from_vertices(self.triangle_coords(t))
    }

    pub fn ref_maps(&self) -> Vec<RefMap> {
        (0..self.num_triangles()).map(|t| self.ref_map(t)).collect()
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        0.5 * self.ref_map(t).det
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edges[e];
        let (p, q) = (self.vertices[a], self.vertices[b]);
        ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt()
    }

    /// Vertex classes lying on a non-periodic side.
    pub fn boundary_vertex_classes(&self, side: Side) -> Vec<usize> {
        let (nx, ny) = (self.nx, self.ny);
        let periodic = match side {
            Side::Left | Side::Right => self.periodic[0],
            Side::Bottom | Side::Top => self.periodic[1],
        };
        if periodic {
            return Vec::new();
        }
        let geo: Vec<usize> = match side {
            Side::Left => (0..=ny).map(|j| j * (nx + 1)).collect(),
            Side::Right => (0..=ny).map(|j| j * (nx + 1) + nx).collect(),
            Side::Bottom => (0..=nx).collect(),
            Side::Top => (0..=nx).map(|i| ny * (nx + 1) + i).collect(),
        };
        let mut classes: Vec<usize> = geo.into_iter().map(|g| self.vertex_class[g]).collect();
        classes.sort_unstable();
        classes.dedup();
        classes
    }

    /// Checks the structural invariants, returning a description of the first failure.
    pub fn validate(&self) -> Result<()> {
        for t in 0..self.num_triangles() {
            if self.signed_area(t) <= 0.0 {
                return Err(Error::Mesh(format!("triangle {t} has non-positive area")));
            }
        }
        for (g, &m) in self.vertex_master.iter().enumerate() {
            if self.vertex_master[m] != m {
                return Err(Error::Mesh(format!("vertex master of {g} is not idempotent")));
            }
        }
        for (e, &m) in self.edge_master.iter().enumerate() {
            if self.edge_master[m] != m {
                return Err(Error::Mesh(format!("edge master of {e} is not idempotent")));
            }
            let [a, b] = self.edges[e];
            if a >= b {
                return Err(Error::Mesh(format!("edge {e} is not oriented low to high")));
            }
            let count = self.edge_to_triangles[e].iter().flatten().count();
            let expected = match self.edge_tags[e] {
                EdgeTag::Interior => 2,
                EdgeTag::Boundary(_) => 1,
            };
            if count != expected {
                return Err(Error::Mesh(format!("edge {e} has {count} adjacent triangles, expected {expected}")));
            }
        }
        Ok(())
    }
}
