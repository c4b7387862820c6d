//! Majority-phase coarsening of a classifier onto Voronoi cells.

use crate::error::Result;
use crate::flatten::FlatteningMap;
use crate::geometry::{KdTree, Point};
use crate::grid::Tessellation;
use crate::partition::sampling::{derive_seed, CellSampler};
use crate::partition::{
    jump_measure, measure_difference_tv, AnalyticPartition, Classifier, LabelSet, PatchGeometry, PolyhedralMeasure,
    PolyhedralPartition,
};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Lower bounds for the distance to the interface of `u`: exact for
/// patches with closed-form distances, otherwise from point clouds with a
/// slack such that every interface point lies within `slack` of a sample.
/// The clouds come in levels of spacing `sigma · 4^k`, finest first.
#[derive(Clone, Debug)]
pub struct InterfaceCloud<const D: usize> {
    exact: Vec<Arc<dyn PatchGeometry<D>>>,
    levels: Vec<(KdTree<D>, f64)>,
}

const MAX_LEVELS: usize = 8;

fn sample_level<const D: usize>(sampled: &[&Arc<dyn PatchGeometry<D>>], sigma: f64) -> (KdTree<D>, f64) {
    let mut pts = Vec::new();
    let mut slack: f64 = 0.0;
    for g in sampled {
        if D == 2 {
            let n = ((g.measure() / sigma).ceil() as usize).max(1) * 2;
            for i in 0..=n {
                pts.push(g.point([i as f64 / n as f64, 0.0]));
                if i < n {
                    let arc = g.measure_between(i as f64 / n as f64, (i + 1) as f64 / n as f64);
                    slack = slack.max(0.5 * arc);
                }
            }
        } else {
            let n = ((g.measure() / (sigma * sigma)).ceil() as usize).max(16);
            let start = pts.len();
            pts.extend(g.area_samples(n).into_iter().map(|(t, _)| g.point(t)));
            let local = KdTree::new(pts[start..].to_vec());
            for q in &pts[start..] {
                if let Some(&(_, d)) = local.k_nearest(q, 2).get(1) {
                    slack = slack.max(d);
                }
            }
        }
    }
    (KdTree::new(pts), slack)
}

impl<const D: usize> InterfaceCloud<D> {
    /// Curves are sampled with arclength gaps of at most `sigma`; surfaces
    /// with about `area / sigma²` nodes and a slack equal to the largest
    /// nearest-neighbor gap.
    pub fn new(u: &AnalyticPartition<D>, sigma: f64) -> Self {
        let (exact, sampled): (Vec<_>, Vec<_>) = u.patches().iter().map(|p| &p.geometry).partition(|g| g.distance_is_exact());
        let exact = exact.into_iter().cloned().collect();
        let mut levels = Vec::new();
        if !sampled.is_empty() {
            let longest = sampled.iter().map(|g| g.measure()).fold(0.0, f64::max);
            let mut h = sigma;
            loop {
                levels.push(sample_level(&sampled, h));
                h *= 4.0;
                if levels.len() == MAX_LEVELS || h > longest {
                    break;
                }
            }
        }
        Self { exact, levels }
    }

    pub fn slack(&self) -> f64 {
        self.levels.first().map_or(0.0, |l| l.1)
    }

    fn exact_distance(&self, x: &Point<D>) -> f64 {
        self.exact.iter().map(|g| g.distance(x)).fold(f64::INFINITY, f64::min)
    }

    /// Lower bound of the distance from `x` to the interface (finest level).
    pub fn lower_bound(&self, x: &Point<D>) -> f64 {
        let sampled = self.levels.first().and_then(|(t, s)| t.nearest(x).map(|(_, d)| d - s)).unwrap_or(f64::INFINITY);
        sampled.min(self.exact_distance(x))
    }

    /// Whether the distance from `x` to the interface provably exceeds `t`.
    /// Coarse levels settle most queries; samples lie on the interface, so
    /// a sample within `t` refutes the claim at any level.
    pub fn clears(&self, x: &Point<D>, t: f64) -> bool {
        if self.exact_distance(x) <= t {
            return false;
        }
        for (k, (tree, slack)) in self.levels.iter().enumerate().rev() {
            let Some((_, d)) = tree.nearest(x) else { return true };
            if d <= t {
                return false;
            }
            if d - slack > t {
                return true;
            }
            if k == 0 {
                return false;
            }
        }
        true
    }
}

/// Shortcuts that decide a cell's phase without sampling `u ∘ f`.
pub struct Certificates<'a, const D: usize> {
    pub u: &'a AnalyticPartition<D>,
    pub map: &'a FlatteningMap<D>,
    pub cloud: &'a InterfaceCloud<D>,
}

impl<const D: usize> Certificates<'_, D> {
    /// Cell inside `B_R(x_q)` with `f(B_R(x_q))` missing the interface:
    /// `f` is `(1+3ε)`-Lipschitz, so the cell is pure.
    fn far(&self, x: &Point<D>, radius: f64) -> Option<usize> {
        let fx = self.map.forward(x);
        let lip = 1.0 + 3.0 * self.map.eps();
        self.cloud.clears(&fx, lip * radius).then(|| self.u.phase(&fx))
    }

    /// Cell inside the flat part of a chart and on one side of its hyperplane.
    fn flat(&self, x: &Point<D>, vertices: &[Point<D>]) -> Option<usize> {
        let i = self.map.locate(x)?;
        let d = &self.map.diffeos()[i];
        let c = &d.chart;
        let inner = d.cutoff.inner_radius();
        let tol = 1e-12 * c.radius;
        let (mut above, mut below) = (false, false);
        for v in vertices {
            if (v - c.center).norm() >= inner {
                return None;
            }
            let h = c.frame.apply(v)[D - 1];
            above |= h > tol;
            below |= h < -tol;
        }
        match (above, below) {
            (true, false) => Some(c.plus),
            (false, true) => Some(c.minus),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarsenStats {
    /// Cells decided because their image misses the interface.
    pub far: usize,
    /// Cells decided inside a flat chart region.
    pub flat: usize,
    pub sampled: usize,
}

#[derive(Clone, Debug)]
pub struct CoarseningResult<const D: usize> {
    pub partition: PolyhedralPartition<D>,
    /// Sampled volume fraction of the chosen phase (1 for certified cells).
    pub fractions: Vec<f64>,
    pub dw: PolyhedralMeasure<D>,
    /// `|Dw − μ*|`, once computed.
    pub residual: Option<f64>,
    pub eps: f64,
    pub stats: CoarsenStats,
}

impl<const D: usize> CoarseningResult<D> {
    pub fn attach_residual(&mut self, mustar: &PolyhedralMeasure<D>) -> Result<f64> {
        let r = residual(&self.dw, mustar)?;
        self.residual = Some(r);
        Ok(r)
    }
}

/// `max(500, 50/ε²)`.
pub fn default_samples(eps: f64) -> usize {
    500usize.max((50.0 / (eps * eps)).ceil() as usize)
}

/// Index of the largest count, lowest index on ties.
pub fn argmax(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Whether `argmax(counts)` is fixed whatever the next `remaining` draws are.
fn decided(counts: &[usize], remaining: usize) -> bool {
    let z = argmax(counts);
    counts.iter().enumerate().all(|(j, &c)| j == z || counts[z] > c + remaining || (j > z && counts[z] >= c + remaining))
}

/// Assigns to each cell the phase of `v` with the largest sampled volume;
/// certified cells skip sampling.
pub fn majority_phase<const D: usize>(
    v: &dyn Classifier<D>,
    tess: Tessellation<D>,
    labels: &LabelSet,
    samples: usize,
    seed: u64,
    eps: f64,
    cert: Option<&Certificates<'_, D>>,
) -> CoarseningResult<D> {
    let n = labels.len();
    let gens = tess.generators().to_vec();
    let mut phases = Vec::with_capacity(tess.len());
    let mut fractions = Vec::with_capacity(tess.len());
    let mut stats = CoarsenStats::default();
    for (q, cell) in tess.cells.iter().enumerate() {
        let x = gens[q];
        if let Some(c) = cert {
            if let Some(z) = c.far(&x, cell.circumradius_about(&x)) {
                stats.far += 1;
                phases.push(z);
                fractions.push(1.0);
                continue;
            }
            if let Some(z) = c.flat(&x, cell.vertices()) {
                stats.flat += 1;
                phases.push(z);
                fractions.push(1.0);
                continue;
            }
        }
        stats.sampled += 1;
        let mut counts = vec![0usize; n];
        let mut drawn = 0;
        for p in CellSampler::new(cell, samples, derive_seed(seed, q as u64)) {
            counts[v.phase(&p)] += 1;
            drawn += 1;
            // Stop once the remaining draws cannot change the argmax.
            if drawn % 64 == 0 && decided(&counts, samples - drawn) {
                break;
            }
        }
        let z = argmax(&counts);
        phases.push(z);
        fractions.push(counts[z] as f64 / drawn as f64);
    }
    let (cells, generators) = tess.into_cells();
    let partition = PolyhedralPartition::from_voronoi(cells, generators, phases, n);
    let dw = jump_measure(&partition, labels);
    CoarseningResult { partition, fractions, dw, residual: None, eps, stats }
}

/// `|Dw − μ*|(Rⁿ)`.
pub fn residual<const D: usize>(dw: &PolyhedralMeasure<D>, mustar: &PolyhedralMeasure<D>) -> Result<f64> {
    measure_difference_tv(dw, mustar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::voronoi;
    use crate::partition::MeasureEntry;
    use crate::geometry::Facet;

    fn lattice(k: usize) -> Vec<Point<2>> {
        let h = 1.0 / k as f64;
        (0..k).flat_map(|i| (0..k).map(move |j| Point::<2>::new(h * (i as f64 + 0.5), h * (j as f64 + 0.5)))).collect()
    }

    fn unit() -> (Point<2>, Point<2>) {
        (Point::<2>::zeros(), Point::<2>::repeat(1.0))
    }

    #[test]
    fn pure_cells_and_ties() {
        assert_eq!(argmax(&[5, 0, 5]), 0);
        assert_eq!(argmax(&[1, 3, 3]), 1);
        let t = voronoi(lattice(4), unit()).unwrap();
        let v = |x: &Point<2>| if x[0] < 0.5 { 2 } else { 0 };
        let r = majority_phase(&v, t, &LabelSet::unit_vectors(3), 500, 1, 0.1, None);
        assert!(r.fractions.iter().all(|&f| f == 1.0));
        assert!((r.partition.interface_measure() - 1.0).abs() < 1e-14);
        // Stripe classifier matching the lattice: residual against its own interface is 0.
        let seg = Facet::segment(Point::<2>::new(0.5, 0.0), Point::<2>::new(0.5, 1.0)).unwrap();
        let mustar = PolyhedralMeasure::new(vec![MeasureEntry::jump(seg.clone(), &LabelSet::unit_vectors(3).difference(0, 2))]);
        assert!(residual(&r.dw, &mustar).unwrap() < 1e-14);
        let missing = PolyhedralMeasure::new(vec![MeasureEntry { facet: seg, weight: vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0] }]);
        assert!((residual(&PolyhedralMeasure::default(), &missing).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn split_cell_tie_goes_to_lower_label() {
        let t = voronoi(vec![Point::<2>::new(0.5, 0.5)], unit()).unwrap();
        // Alternating answers give an exact 50/50 split.
        let flip = std::sync::atomic::AtomicUsize::new(0);
        let v = move |_: &Point<2>| if flip.fetch_add(1, std::sync::atomic::Ordering::Relaxed) % 2 == 0 { 2 } else { 0 };
        let r = majority_phase(&v, t, &LabelSet::unit_vectors(3), 500, 1, 0.1, None);
        assert_eq!(r.partition.phases(), &[0]);
        assert_eq!(r.fractions[0], 0.5);
    }

    #[test]
    fn cloud_levels_are_sound() {
        use crate::partition::patch::CubicBezier;
        use crate::partition::InterfacePatch;
        use rand::{Rng, SeedableRng};
        let p = |x: f64, y: f64| Point::<2>::new(x, y);
        let curve = CubicBezier { control: [p(0.1, 0.2), p(0.4, 0.9), p(0.7, -0.1), p(0.9, 0.6)] };
        let exact = |x: &Point<2>| (0..=20000).map(|i| (curve.point([i as f64 / 20000.0, 0.0]) - x).norm()).fold(f64::INFINITY, f64::min);
        let u = AnalyticPartition::new(
            LabelSet::unit_vectors(2),
            Arc::new(|_: &Point<2>| 0),
            vec![InterfacePatch::new(Arc::new(curve.clone()), 1, 0)],
            unit(),
        )
        .unwrap();
        let cloud = InterfaceCloud::new(&u, 1e-4);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..300 {
            let x = p(rng.gen_range(-0.2..1.2), rng.gen_range(-0.2..1.2));
            let t = rng.gen_range(0.0..0.3);
            let d = exact(&x);
            if cloud.clears(&x, t) {
                assert!(d > t - 1e-6, "claimed {t} at distance {d}");
            }
            assert!(cloud.lower_bound(&x) <= d + 1e-6);
            if cloud.lower_bound(&x) > t {
                assert!(cloud.clears(&x, t));
            }
        }
    }
}
