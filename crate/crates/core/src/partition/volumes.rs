use super::analytic::Classifier;
use super::polyhedral::PolyhedralPartition;
use super::sampling::{sample_cell, QuasiRandom};
use crate::geometry::{ConvexPolytope, Point};

/// Quasi-random estimate of the fraction of `cell` occupied by each phase.
pub fn phase_volumes<const D: usize>(
    classifier: &dyn Classifier<D>,
    cell: &ConvexPolytope<D>,
    n_phases: usize,
    samples: usize,
    seed: u64,
) -> Vec<f64> {
    let samples = samples.max(1);
    let mut counts = vec![0usize; n_phases];
    for p in sample_cell(cell, samples, seed) {
        counts[classifier.phase(&p)] += 1;
    }
    counts.iter().map(|&c| c as f64 / samples as f64).collect()
}

/// Quasi-random estimate of `|{u = z} △ {w = z}|` over the box `[lo, hi]`,
/// counting only points accepted by `region`.
pub fn symmetric_difference_volume<const D: usize>(
    u: &dyn Classifier<D>,
    w: &PolyhedralPartition<D>,
    phase: usize,
    bounds: (Point<D>, Point<D>),
    region: &dyn Fn(&Point<D>) -> bool,
    samples: usize,
    seed: u64,
) -> f64 {
    let (lo, hi) = bounds;
    let volume: f64 = (hi - lo).iter().product();
    let mut seq = QuasiRandom::<D>::new(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let x = seq.next_in_box(&lo, &hi);
        if !region(&x) {
            continue;
        }
        let a = u.phase(&x) == phase;
        let b = w.phase_at(&x) == Some(phase);
        if a != b {
            hits += 1;
        }
    }
    volume * hits as f64 / samples.max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_plane_split() {
        let cell = ConvexPolytope::from_box(&Point::<2>::zeros(), &Point::<2>::repeat(1.0));
        let cls = |x: &Point<2>| (x[0] >= 0.3) as usize;
        let f = phase_volumes(&cls, &cell, 2, 1_000_000, 1);
        assert!((f[0] - 0.3).abs() < 3e-3 && (f[1] - 0.7).abs() < 3e-3);
        assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let pure = phase_volumes(&|_: &Point<2>| 1usize, &cell, 3, 500, 4);
        assert_eq!(pure, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn shifted_interface() {
        let cells = vec![
            ConvexPolytope::from_box(&Point::<2>::zeros(), &Point::<2>::new(0.5, 1.0)),
            ConvexPolytope::from_box(&Point::<2>::new(0.5, 0.0), &Point::<2>::repeat(1.0)),
        ];
        let w = PolyhedralPartition::from_cells(cells, vec![0, 1], 2).unwrap();
        let u = |x: &Point<2>| (x[0] >= 0.6) as usize;
        let all = |_: &Point<2>| true;
        let bounds = (Point::<2>::zeros(), Point::<2>::repeat(1.0));
        let d = symmetric_difference_volume(&u, &w, 0, bounds, &all, 200_000, 3);
        assert!((d - 0.1).abs() < 2e-3);
        assert_eq!(symmetric_difference_volume(&u, &w, 2, bounds, &all, 1000, 3), 0.0);
    }
}
