//! Property tests across modules.

use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use p3pstrat::harness::{Bound, CheckResult, RunReport};
use p3pstrat::p3p::{distances, instance_from_center, locate_center, make_triangle, solve, CameraCenter, Triangle};
use p3pstrat::strata::{
    classify, cylinder_membership_e, cylinder_membership_xyz, generatrix_point, StratumLabel,
};

fn arb_triangle() -> impl Strategy<Value = Triangle> {
    (0.4f64..1.0, 0.4f64..1.0, 0.4f64..1.0)
        .prop_filter("well-shaped", |&(a, b, c)| a + b > 1.15 * c && a + c > 1.15 * b && b + c > 1.15 * a)
        .prop_map(|(a, b, c)| make_triangle(a, b, c).unwrap())
}

fn lifted(t: &Triangle, u: f64, v: f64, z: f64) -> CameraCenter {
    let ([cx, cy], r) = t.circumcircle();
    CameraCenter::new(cx + 3.0 * r * (u - 0.5), cy + 3.0 * r * (v - 0.5), z * r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn true_distances_are_among_the_roots(t in arb_triangle(), u in 0.0f64..1.0, v in 0.0f64..1.0, z in 0.3f64..3.0) {
        let o = lifted(&t, u, v, z);
        let inst = instance_from_center(&t, o).unwrap();
        let sols = solve(&inst).unwrap();
        let truth = distances(&t, o).map(|x| Complex64::new(x, 0.0));
        let scale = t.scale();
        for s in &sols {
            prop_assert!(s.residual < 1e-9 * scale * scale, "residual {}", s.residual);
        }
        let best = sols.iter().map(|s| s.distance_to(&truth)).fold(f64::INFINITY, f64::min);
        prop_assert!(best < 1e-6 * scale, "nearest root {best}");
        let found = sols.iter().filter(|s| s.distance_to(&truth) < 1e-6 * scale).find(|s| s.is_physical);
        if let Some(s) = found {
            let centers = locate_center(&t, s).unwrap();
            let hit = centers.iter().any(|c| (c.to_vector() - o.to_vector()).norm() < 1e-6 * scale);
            prop_assert!(hit);
        }
    }

    #[test]
    fn mirror_image_has_the_same_stratum(t in arb_triangle(), u in 0.0f64..1.0, v in 0.0f64..1.0, z in 0.3f64..3.0) {
        let o = lifted(&t, u, v, z);
        let a = classify(&t, o).unwrap();
        let b = classify(&t, o.mirrored()).unwrap();
        prop_assert_eq!(a.label, b.label);
    }

    #[test]
    fn cylinder_points_vanish_in_both_coordinate_systems(t in arb_triangle(), theta in 0.0f64..std::f64::consts::TAU, h in 0.2f64..3.0) {
        let o = generatrix_point(&t, theta, h * t.scale());
        prop_assert!(cylinder_membership_xyz(&t, o) < 1e-12);
        let e = distances(&t, o).map(|x| Complex64::new(x, 0.0));
        prop_assert!(cylinder_membership_e(&t, &e) < 1e-10);
    }

    #[test]
    fn points_outside_the_cylinder_are_regular(t in arb_triangle(), theta in 0.0f64..std::f64::consts::TAU, h in 0.2f64..3.0, k in 1.2f64..2.0) {
        let ([cx, cy], r) = t.circumcircle();
        let o = CameraCenter::new(cx + k * r * theta.cos(), cy + k * r * theta.sin(), h * r);
        prop_assert!(cylinder_membership_xyz(&t, o) > 1e-3);
        let c = classify(&t, o).unwrap();
        prop_assert_eq!(c.label, StratumLabel::Regular);
    }

    #[test]
    fn report_order_ignores_input_order(values in proptest::collection::vec(0.0f64..2.0, 1..12), seed in any::<u64>()) {
        let checks: Vec<CheckResult> = values
            .iter()
            .enumerate()
            .map(|(i, v)| CheckResult::new(format!("c{}.k{i:02}", 1 + i % 3), 1 + (i % 3) as u8, *v, Bound::Below, 1.0))
            .collect();
        let mut reversed = checks.clone();
        reversed.reverse();
        let a = RunReport::new("s", seed, "h".into(), checks);
        let b = RunReport::new("s", seed, "h".into(), reversed);
        prop_assert_eq!(a.to_json_without_runtime(), b.to_json_without_runtime());
        prop_assert_eq!(a.passed, values.iter().filter(|v| **v < 1.0).count());
    }
}

#[test]
fn integer_fixture_center_is_on_the_cylinder() {
    let t = make_triangle(5.0, 4.0, 3.0).unwrap();
    let o = CameraCenter::new(4.0, 2.0, 1.0);
    assert_relative_eq!(cylinder_membership_xyz(&t, o), 0.0);
}
