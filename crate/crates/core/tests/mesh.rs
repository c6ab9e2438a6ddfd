mod common;

use mhd_core::mesh::{build_rect_mesh, refine, EdgeTag, Rect, Side};
use mhd_core::Error;
use proptest::prelude::*;

use common::unit_square;

#[test]
fn single_cell_direction_is_rejected() {
    assert!(matches!(build_rect_mesh(1, 4, unit_square(), false, false), Err(Error::Mesh(_))));
    assert!(matches!(build_rect_mesh(4, 1, unit_square(), false, false), Err(Error::Mesh(_))));
}

#[test]
fn degenerate_domain_is_rejected() {
    assert!(build_rect_mesh(2, 2, Rect::new(0.0, 0.0, 0.0, 1.0), false, false).is_err());
    assert!(build_rect_mesh(2, 2, Rect::new(0.0, 1.0, 0.0, f64::NAN), false, false).is_err());
}

#[test]
fn two_by_two_counts() {
    let m = build_rect_mesh(2, 2, unit_square(), false, false).unwrap();
    assert_eq!(m.vertices().len(), 9);
    assert_eq!(m.edges().len(), 16);
    assert_eq!(m.num_triangles(), 8);
    assert_eq!(m.num_vertex_classes(), 9);
    m.validate().unwrap();
}

#[test]
fn periodic_two_by_two_has_four_vertex_classes() {
    let m = build_rect_mesh(2, 2, unit_square(), true, true).unwrap();
    assert_eq!(m.num_vertex_classes(), 4);
    // Torus: V − E + T = 0.
    assert_eq!(m.num_edge_classes(), 12);
    assert!(m.edge_tags().iter().all(|t| *t == EdgeTag::Interior));
    m.validate().unwrap();
}

#[test]
fn vertex_numbering_is_row_major() {
    let m = build_rect_mesh(3, 2, Rect::new(0.0, 3.0, 0.0, 2.0), false, false).unwrap();
    for j in 0..=2 {
        for i in 0..=3 {
            assert_eq!(m.vertices()[j * 4 + i], [i as f64, j as f64]);
        }
    }
}

#[test]
fn refinement_quadruples_triangles() {
    let m = build_rect_mesh(2, 2, unit_square(), false, false).unwrap();
    let r = refine(&m);
    assert_eq!(m.num_triangles(), 8);
    assert_eq!(r.num_triangles(), 32);
    assert_eq!((r.nx(), r.ny()), (4, 4));
}

#[test]
fn boundary_classes_of_mixed_periodicity() {
    let m = build_rect_mesh(4, 3, unit_square(), true, false).unwrap();
    assert!(m.boundary_vertex_classes(Side::Left).is_empty());
    assert_eq!(m.boundary_vertex_classes(Side::Bottom).len(), 4);
    assert_eq!(m.boundary_vertex_classes(Side::Top).len(), 4);
    let bottom_edges = m.edge_tags().iter().filter(|t| **t == EdgeTag::Boundary(Side::Bottom)).count();
    assert_eq!(bottom_edges, 4);
}

proptest! {
    #[test]
    fn areas_sum_to_domain(nx in 2usize..12, ny in 2usize..12, px: bool, py: bool,
                           x0 in -3.0f64..3.0, w in 0.1f64..5.0, y0 in -3.0f64..3.0, h in 0.1f64..5.0) {
        let d = Rect::new(x0, x0 + w, y0, y0 + h);
        let m = build_rect_mesh(nx, ny, d, px, py).unwrap();
        let total: f64 = (0..m.num_triangles()).map(|t| m.signed_area(t)).sum();
        prop_assert!((total - d.area()).abs() <= 1e-12 * d.area().max(1.0));
        prop_assert!((0..m.num_triangles()).all(|t| m.signed_area(t) > 0.0));
        m.validate().unwrap();
    }

    #[test]
    fn euler_characteristic(nx in 2usize..10, ny in 2usize..10, px: bool, py: bool) {
        let m = build_rect_mesh(nx, ny, unit_square(), px, py).unwrap();
        let chi = m.num_vertex_classes() as i64 - m.num_edge_classes() as i64 + m.num_triangles() as i64;
        // Disc 1, cylinder and torus 0.
        let expected = if px || py { 0 } else { 1 };
        prop_assert_eq!(chi, expected);
    }

    #[test]
    fn periodic_masters_are_translates(nx in 2usize..8, ny in 2usize..8) {
        let m = build_rect_mesh(nx, ny, unit_square(), true, true).unwrap();
        for (g, &master) in m.vertex_master().iter().enumerate() {
            let (a, b) = (m.vertices()[g], m.vertices()[master]);
            for c in 0..2 {
                let d = a[c] - b[c];
                prop_assert!(d.abs() < 1e-12 || (d.abs() - 1.0).abs() < 1e-12);
            }
        }
    }
}
