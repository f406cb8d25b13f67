mod common;

use polycover::clustering::{covering_radius, farthest_first};
use polycover::coverage::{solve_cover, verify_cover, CoverOptions};
use polycover::gadget::{build_edge_link, EdgeLinkSpec, GadgetVariant};
use polycover::geometry::{FootprintKind, Metric, Point, SimplePolygon};
use polycover::oracle::discrete_kcenter_exact;
use polycover::sampling::{sample, SampleMode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn points(max: usize) -> impl Strategy<Value = Vec<Point<f64>>> {
    prop::collection::vec(
        (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Point::new(x, y)),
        1..max,
    )
}

fn polygon() -> impl Strategy<Value = SimplePolygon<f64>> {
    (any::<u64>(), prop::bool::ANY).prop_map(|(seed, convex)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if convex {
            common::random_convex(&mut rng, 10)
        } else {
            common::random_star(&mut rng, 10)
        }
    })
}

fn metric() -> impl Strategy<Value = Metric> {
    prop_oneof![Just(Metric::L2), Just(Metric::Linf)]
}

proptest! {
    #[test]
    fn farthest_first_is_a_two_approximation(pts in points(13), k in 1usize..4, m in metric()) {
        let ff = farthest_first(&pts, k, m).unwrap();
        let opt = discrete_kcenter_exact(&pts, k, m).unwrap().radius;
        prop_assert!(ff.radius >= opt - 1e-12);
        prop_assert!(ff.radius <= 2.0 * opt + 1e-12);
        prop_assert_eq!(ff.radius, covering_radius(&pts, &ff.center_indices, m));
    }

    #[test]
    fn samples_are_eps_dense(poly in polygon(), frac in 0.02..0.2f64) {
        let eps = frac * poly.diameter();
        let b = sample(&poly, eps, SampleMode::Boundary).unwrap();
        // Every boundary point sits within eps/2 of a sample.
        for (a, c) in poly.edges() {
            for i in 0..=20 {
                let q = a.lerp(c, i as f64 / 20.0);
                prop_assert!(b.nearest_distance(q) <= eps / 2.0 + 1e-9);
            }
        }
        let r = sample(&poly, eps, SampleMode::Region).unwrap();
        prop_assert!(r.len() >= b.len());
    }

    #[test]
    fn covers_verify(poly in polygon(), k in 1usize..5, circle in prop::bool::ANY, region in prop::bool::ANY) {
        let kind = if circle { FootprintKind::Circle } else { FootprintKind::AxisSquare };
        let mode = if region { SampleMode::Region } else { SampleMode::Boundary };
        let eps = 0.05 * poly.diameter();
        let sol = solve_cover(&poly, kind, &CoverOptions::new(k, eps, mode)).unwrap().solution;
        prop_assert_eq!(sol.k(), k);
        prop_assert!(verify_cover(&poly, &sol, eps / 2.0).unwrap().covered);
    }

    #[test]
    fn seeded_covers_are_deterministic(poly in polygon(), seed in any::<u64>()) {
        let opts = CoverOptions::new(2, 0.05 * poly.diameter(), SampleMode::Boundary).seed(Some(seed));
        let a = solve_cover(&poly, FootprintKind::Circle, &opts).unwrap().solution;
        let b = solve_cover(&poly, FootprintKind::Circle, &opts).unwrap().solution;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn link_counts(m in 4usize..30, angle in 0.0..std::f64::consts::TAU, square in prop::bool::ANY) {
        let v = if square { GadgetVariant::Square } else { GadgetVariant::Circle };
        let len = v.params::<f64>().segment_len * (2 * m + 1) as f64;
        let sk = build_edge_link(&EdgeLinkSpec::straight(Point::origin(), Point::polar(angle) * len, m, v)).unwrap();
        prop_assert_eq!(sk.spine_segments.len(), 2 * m + 1);
        prop_assert_eq!(sk.bars.len(), 2 * m - 1);
        let r = sk.structure_report();
        prop_assert!(r.max_perpendicular_dot <= 1e-9 && r.max_bisection_gap <= 1e-9);
    }
}

#[test]
fn f32_pipeline_matches_f64() {
    let v = [(0.0, 0.0), (4.0, 0.0), (4.0, 3.0), (1.0, 2.0)];
    let p64 = SimplePolygon::validate(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap();
    let p32 = SimplePolygon::validate(v.iter().map(|&(x, y)| Point::new(x as f32, y as f32)).collect()).unwrap();
    for kind in [FootprintKind::Circle, FootprintKind::AxisSquare] {
        let a = solve_cover(&p64, kind, &CoverOptions::new(2, 0.1, SampleMode::Boundary))
            .unwrap()
            .solution;
        let b = solve_cover(&p32, kind, &CoverOptions::new(2, 0.1f32, SampleMode::Boundary))
            .unwrap()
            .solution;
        assert!((a.length - b.length as f64).abs() < 1e-4);
        assert!(verify_cover(&p32, &b, 0.05).unwrap().covered);
    }
}
