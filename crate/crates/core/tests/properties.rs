use approx::assert_relative_eq;
use polypart::geometry::{AabbTree, ConvexPolytope, Facet, HalfSpace, Isometry, KdTree, Point};
use polypart::grid::{brute_force_cell, voronoi};
use polypart::harness::{fmt_f64, GridMode, PipelineOptions, RunConfig, ScenarioKind};
use polypart::partition::sampling::sample_cell;
use polypart::partition::{measure_difference_tv, MeasureEntry, PolyhedralMeasure};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_box<const D: usize>() -> ConvexPolytope<D> {
    ConvexPolytope::from_box(&Point::<D>::zeros(), &Point::<D>::repeat(1.0))
}

fn random_points<const D: usize>(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point<D>> {
    (0..n).map(|_| Point::<D>::from_fn(|_, _| rng.gen())).collect()
}

fn random_halfspace<const D: usize>(rng: &mut ChaCha8Rng) -> HalfSpace<D> {
    let n = polypart::geometry::Vector::<D>::from_fn(|_, _| rng.gen_range(-1.0..1.0));
    let through = Point::<D>::from_fn(|_, _| rng.gen_range(0.2..0.8));
    let n = if n.norm() < 1e-3 { polypart::geometry::Vector::<D>::from_fn(|i, _| (i == 0) as u8 as f64) } else { n };
    HalfSpace::new(n, n.dot(&through))
}

fn complement<const D: usize>(h: &HalfSpace<D>) -> HalfSpace<D> {
    HalfSpace::new(-h.normal, -h.offset)
}

fn clipped_volume<const D: usize>(h: &HalfSpace<D>) -> f64 {
    let mut c = unit_box::<D>();
    match c.clip(h, 0) {
        Ok(_) => c.volume(),
        Err(_) => 0.0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn clip_halves_sum_to_box_2d(seed in any::<u64>()) {
        let h = random_halfspace::<2>(&mut ChaCha8Rng::seed_from_u64(seed));
        assert_relative_eq!(clipped_volume(&h) + clipped_volume(&complement(&h)), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn clip_halves_sum_to_box_3d(seed in any::<u64>()) {
        let h = random_halfspace::<3>(&mut ChaCha8Rng::seed_from_u64(seed));
        assert_relative_eq!(clipped_volume(&h) + clipped_volume(&complement(&h)), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn kd_nearest_matches_scan(seed in any::<u64>(), n in 1usize..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_points::<3>(&mut rng, n);
        let tree = KdTree::new(pts.clone());
        let x = Point::<3>::from_fn(|_, _| rng.gen_range(-0.5..1.5));
        let (_, d) = tree.nearest(&x).unwrap();
        let best = pts.iter().map(|p| (p - x).norm()).fold(f64::INFINITY, f64::min);
        prop_assert_eq!(d, best);
        let k = tree.k_nearest(&x, 5);
        prop_assert!(k.windows(2).all(|w| w[0].1 <= w[1].1));
        prop_assert_eq!(k.len(), n.min(5));
    }

    #[test]
    fn aabb_query_matches_scan(seed in any::<u64>(), n in 1usize..150) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let boxes: Vec<(Point<2>, Point<2>)> = random_points::<2>(&mut rng, n)
            .into_iter()
            .map(|p| (p, p + Point::<2>::new(rng.gen_range(0.0..0.1), rng.gen_range(0.0..0.1))))
            .collect();
        let tree = AabbTree::new(boxes.clone());
        let (lo, hi) = (Point::<2>::new(0.3, 0.2), Point::<2>::new(0.6, 0.5));
        let mut got = tree.query(&lo, &hi);
        got.sort_unstable();
        let want: Vec<usize> = (0..n)
            .filter(|&i| (0..2).all(|a| boxes[i].0[a] <= hi[a] && boxes[i].1[a] >= lo[a]))
            .collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn voronoi_cells_match_brute_force(seed in any::<u64>(), n in 2usize..60) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bounds = (Point::<2>::zeros(), Point::<2>::repeat(1.0));
        let t = voronoi(random_points::<2>(&mut rng, n), bounds).unwrap();
        let gens = t.generators().to_vec();
        let total: f64 = t.cells.iter().map(|c| c.volume()).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
        for q in 0..gens.len() {
            let b = brute_force_cell(&gens, q, &bounds).unwrap();
            assert_relative_eq!(t.cells[q].volume(), b.volume(), epsilon = 1e-12);
        }
    }

    #[test]
    fn isometry_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let iso = Isometry::<3>::random(&mut rng, 2.0);
        let x = Point::<3>::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        let y = iso.apply(&x);
        assert_relative_eq!(iso.apply_inverse(&y), x, epsilon = 1e-12);
        assert_relative_eq!(iso.inverse().apply(&y), x, epsilon = 1e-12);
        let z = Point::<3>::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        assert_relative_eq!((iso.apply(&z) - y).norm(), (z - x).norm(), epsilon = 1e-12);
    }

    #[test]
    fn measure_tv_is_a_metric(w in prop::collection::vec(-2.0f64..2.0, 12), shift in 0.0f64..1.5) {
        let seg = |x0: f64, x1: f64| Facet::segment(Point::<2>::new(x0, 0.0), Point::<2>::new(x1, 0.0)).unwrap();
        let m = |a: f64, ws: &[f64]| PolyhedralMeasure::new(vec![MeasureEntry { facet: seg(a, a + 1.0), weight: ws.to_vec() }]);
        let (a, b, c) = (m(0.0, &w[0..4]), m(shift, &w[4..8]), m(0.5 * shift, &w[8..12]));
        let d = |x: &PolyhedralMeasure<2>, y: &PolyhedralMeasure<2>| measure_difference_tv(x, y).unwrap();
        prop_assert!(d(&a, &a) < 1e-12);
        assert_relative_eq!(d(&a, &b), d(&b, &a), epsilon = 1e-12);
        prop_assert!(d(&a, &b) <= d(&a, &c) + d(&c, &b) + 1e-12);
    }

    #[test]
    fn cell_samples_stay_inside(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cell = unit_box::<3>();
        for _ in 0..4 {
            let h = random_halfspace::<3>(&mut rng);
            let _ = cell.clip(&h, 0);
        }
        for p in sample_cell(&cell, 200, seed) {
            prop_assert!(cell.contains(&p, 1e-12));
        }
    }

    #[test]
    fn fmt_f64_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn config_toml_round_trips(
        eps in prop::collection::vec(0.01f64..0.99, 1..5),
        seed in any::<u64>(),
        samples in prop::option::of(500usize..100_000),
        uniform in any::<bool>(),
        scenario in prop::sample::select(vec![ScenarioKind::Circle, ScenarioKind::Stripe, ScenarioKind::TripleJunction, ScenarioKind::Annuli, ScenarioKind::Sphere]),
    ) {
        let cfg = RunConfig {
            scenario,
            eps,
            seed,
            out_dir: None,
            pipeline: PipelineOptions {
                samples_per_cell: samples,
                grid: if uniform { GridMode::Uniform } else { GridMode::Graded },
                ..Default::default()
            },
        };
        if seed > i64::MAX as u64 {
            prop_assert!(cfg.to_toml().is_err());
        } else {
            prop_assert_eq!(RunConfig::parse(&cfg.to_toml().unwrap()).unwrap(), cfg);
        }
    }
}
