use anchoring::energy::{e0, e0_quadrature, EngineChoice};
use anchoring::orient::residual;
use anchoring::surfaces::{AnalyticShape, OffsetSurface, Surface};
use anchoring::tangentfield::{build_boundary_field, field_surface_energy, vstar, DirectorField};
use anchoring::{Direction, Vec3, FOURTH_ROOT_24};
use proptest::prelude::*;

fn direction() -> impl Strategy<Value = Direction> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("non-zero", |(x, y, z)| x * x + y * y + z * z > 1e-2)
        .prop_map(|(x, y, z)| Direction::from_components(x, y, z).unwrap())
}

fn shape() -> impl Strategy<Value = AnalyticShape> {
    prop_oneof![
        (0.5f64..2.0).prop_map(|r| AnalyticShape::sphere(r).unwrap()),
        (0.5f64..1.5, 0.1f64..3.0).prop_map(|(r, l)| AnalyticShape::spherocylinder(r, l).unwrap()),
        (1.5f64..3.0, 0.2f64..1.0).prop_map(|(big, r)| AnalyticShape::torus(big, r).unwrap()),
        (0.5f64..2.0).prop_map(|r| AnalyticShape::cube(r).unwrap()),
        (0.5f64..2.0, 0.05f64..0.4)
            .prop_map(|(r, e)| AnalyticShape::rounded_cube(r, e * r).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_is_even_and_bounded(s in shape(), n in direction()) {
        let surface = Surface::from(s);
        let e = e0(&surface, &n, EngineChoice::Auto, 128).unwrap().value;
        let flipped = Direction::new(-n.vec()).unwrap();
        let f = e0(&surface, &flipped, EngineChoice::Auto, 128).unwrap().value;
        prop_assert!((e - f).abs() <= 1e-9 * (1.0 + e));
        prop_assert!(e >= 0.0);
        prop_assert!(e <= FOURTH_ROOT_24 * s.area() * (1.0 + 1e-9));
    }

    #[test]
    fn residual_is_tangent(s in shape(), n in direction()) {
        let samples = Surface::from(s).sample(32).unwrap();
        let r = residual(&samples, &n);
        prop_assert!(r.dot(&n.vec()).abs() <= 1e-9 * (1.0 + r.norm()));
    }

    #[test]
    fn vstar_is_unit_and_tangent(nu in direction(), n in direction()) {
        prop_assume!(nu.dot(&n.vec()).abs() < 1.0 - 1e-6);
        let v = vstar(&nu, &n).unwrap().vec();
        prop_assert!(v.dot(&nu.vec()).abs() < 1e-12);
        prop_assert!(v.dot(&n.vec()) >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn constructed_field_is_tangent_and_dominates(n in direction()) {
        let shape = AnalyticShape::sphere(1.0).unwrap();
        let surface = OffsetSurface::from_shape(&shape).unwrap();
        let field = build_boundary_field(&surface, &n, 0.3).unwrap();
        prop_assert_eq!(field.total_degree(), 2);
        let samples = Surface::from(shape).sample(32).unwrap();
        for p in &samples.points {
            if let Ok(v) = field.eval(p) {
                let nu: Vec3 = surface.normal(p).unwrap();
                prop_assert!((v.norm() - 1.0).abs() < 1e-8 && v.dot(&nu).abs() < 1e-8);
            }
        }
        let lower = e0_quadrature(&samples, &n).value;
        prop_assert!(field_surface_energy(&samples, &field, &n) >= lower - 1e-8);
    }
}
