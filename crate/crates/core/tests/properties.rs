use std::f64::consts::TAU;

use nosil::aperture::region_at;
use nosil::geom2d::{invert, ConvexPolygon, Point2};
use nosil::metric::hausdorff_polygons;
use nosil::silhouette::{membership, SupportFn};
use nosil::sphere::{central_project, central_unproject, psi_n, SpherePoint, Vec3};
use nosil::wulff::{convex_body_check, support_polygon, wulff_from_support};
use nosil::ParametricCurve;
use proptest::prelude::*;

fn ellipse() -> impl Strategy<Value = ParametricCurve> {
    (1.0f64..3.0, 0.5f64..1.5).prop_map(|(a, b)| ParametricCurve::ellipse(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn regions_hold_their_seed_and_centroid(c in ellipse(), theta in 0.0f64..0.5) {
        let r = region_at(&c, theta, 1024, 32).unwrap().unwrap();
        prop_assert!(r.polygon.interior_margin(r.seed) > 0.0);
        prop_assert!(membership(&c, theta, r.polygon.centroid(), 1024).unwrap().0);
    }

    #[test]
    fn regions_shrink_with_theta(c in ellipse(), t1 in 0.0f64..0.4, dt in 0.05f64..0.3) {
        let a = region_at(&c, t1, 1024, 32).unwrap().unwrap();
        if let Some(b) = region_at(&c, t1 + dt, 1024, 32).unwrap() {
            let tol = 1e-6 * c.scale();
            prop_assert!(b.polygon.vertices().iter().all(|v| a.polygon.contains(*v, tol)));
        }
    }

    #[test]
    fn regions_follow_translations(c in ellipse(), theta in 0.0f64..0.5, dx in -3.0f64..3.0, dy in -3.0f64..3.0) {
        let v = Point2::new(dx, dy);
        let a = region_at(&c, theta, 1024, 32).unwrap().unwrap();
        let b = region_at(&c.translated(v), theta, 1024, 32).unwrap().unwrap();
        let d = hausdorff_polygons(&a.polygon.translated(v), &b.polygon, 1e-3 * c.scale());
        prop_assert!(d < 1e-6 * c.scale(), "d = {}", d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wulff_support_never_exceeds_h(c1 in -0.08f64..0.08, s2 in -0.08f64..0.08, c3 in -0.02f64..0.02) {
        let h = SupportFn::from_fn(Point2::ORIGIN, 0.0, 512, |p| {
            1.0 + c1 * p.cos() + s2 * (2.0 * p).sin() + c3 * (3.0 * p).cos()
        })
        .unwrap();
        let w = wulff_from_support(&h, 512).unwrap();
        prop_assert!(convex_body_check(&w.polygon));
        let back = support_polygon(&w.polygon, 512).unwrap();
        for (x, y) in back.values().iter().zip(h.values()) {
            prop_assert!(*x <= *y + 1e-12);
        }
    }

    #[test]
    fn inversion_is_an_involution(x in -10.0f64..10.0, y in -10.0f64..10.0, cx in -2.0f64..2.0, cy in -2.0f64..2.0) {
        let (q, c) = (Point2::new(x, y), Point2::new(cx, cy));
        prop_assume!(q.distance(c) > 1e-3);
        let back = invert(invert(q, c).unwrap(), c).unwrap();
        prop_assert!(back.distance(q) <= 1e-9 * q.norm().max(1.0));
    }

    #[test]
    fn sphere_map_is_inversion_in_the_chart(r in 0.05f64..20.0, phi in 0.0f64..TAU) {
        let q = Point2::from_angle(phi) * r;
        let p = central_unproject(q);
        let image = psi_n(p).unwrap();
        prop_assert!(p.dot(image).abs() <= 1e-12);
        prop_assert!(Vec3::det(SpherePoint::NORTH.vec(), p.vec(), image.vec()).abs() <= 1e-12);
        let back = central_project(image).unwrap();
        prop_assert!(back.distance(invert(q, Point2::ORIGIN).unwrap()) <= 1e-10 * back.norm().max(1.0));
    }

    #[test]
    fn hausdorff_of_translates_is_the_offset(n in 3usize..12, dx in -1.0f64..1.0, dy in -1.0f64..1.0) {
        let a = ConvexPolygon::regular(n, 1.0);
        let v = Point2::new(dx, dy);
        let d = hausdorff_polygons(&a, &a.translated(v), 1e-3);
        prop_assert!(d <= v.norm() + 1e-12);
        prop_assert!(d >= v.norm() - 2e-3);
    }
}
