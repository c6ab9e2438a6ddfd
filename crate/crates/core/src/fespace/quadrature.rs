//! Quadrature rules on triangles and on the unit interval.

/// Symmetric rule on a triangle in barycentric coordinates.
///
/// Weights sum to one; multiply by the triangle area.
#[derive(Clone, Debug)]
pub struct TriangleRule {
    pub bary: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl TriangleRule {
    /// Three-point rule, exact for degree 2.
    pub fn degree2() -> Self {
        let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
        TriangleRule { bary: vec![[a, b, b], [b, a, b], [b, b, a]], weights: vec![1.0 / 3.0; 3] }
    }

    /// Six-point Dunavant rule, exact for degree 4.
    pub fn degree4() -> Self {
        let a1 = 0.445_948_490_915_964_886_32;
        let b1 = 1.0 - 2.0 * a1;
        let w1 = 0.223_381_589_678_011_465_70;
        let a2 = 0.091_576_213_509_770_743_46;
        let b2 = 1.0 - 2.0 * a2;
        let w2 = 0.109_951_743_655_321_867_64;
        TriangleRule {
            bary: vec![[b1, a1, a1], [a1, b1, a1], [a1, a1, b1], [b2, a2, a2], [a2, b2, a2], [a2, a2, b2]],
            weights: vec![w1, w1, w1, w2, w2, w2],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Physical location of point `q` in the triangle `p`.
    pub fn point(&self, q: usize, p: &[[f64; 2]; 3]) -> [f64; 2] {
        let l = self.bary[q];
        [
            l[0] * p[0][0] + l[1] * p[1][0] + l[2] * p[2][0],
            l[0] * p[0][1] + l[1] * p[1][1] + l[2] * p[2][1],
        ]
    }
}

/// Five-point Gauss–Legendre rule on `[0, 1]`, exact for degree 9.
pub fn gauss_legendre5() -> ([f64; 5], [f64; 5]) {
    let r = 2.0 * (10.0f64 / 7.0).sqrt();
    let (x1, x2) = ((5.0 - r).sqrt() / 3.0, (5.0 + r).sqrt() / 3.0);
    let s70 = 13.0 * 70.0f64.sqrt();
    let (w1, w2) = ((322.0 + s70) / 900.0, (322.0 - s70) / 900.0);
    let x = [-x2, -x1, 0.0, x1, x2];
    let w = [w2, w1, 128.0 / 225.0, w1, w2];
    let mut pts = [0.0; 5];
    let mut wts = [0.0; 5];
    for k in 0..5 {
        pts[k] = 0.5 * (x[k] + 1.0);
        wts[k] = 0.5 * w[k];
    }
    (pts, wts)
}
