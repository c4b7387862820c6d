use super::chart::{fit_chart, Chart, ChartRecord, R_MIN};
use super::index::BallIndex;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::partition::{AnalyticPartition, PatchGeometry};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Limits applied on top of the chart admissibility conditions.
#[derive(Clone, Debug)]
pub struct CoverOptions<const D: usize> {
    pub max_radius: f64,
    /// Balls keep a distance of at least their radius from the boundary of this box.
    pub bounds: Option<(Point<D>, Point<D>)>,
    /// Quadrature nodes per surface patch (3D).
    pub surface_nodes: usize,
    pub max_charts: usize,
}

impl<const D: usize> Default for CoverOptions<D> {
    fn default() -> Self {
        Self { max_radius: f64::INFINITY, bounds: None, surface_nodes: 8000, max_charts: 200_000 }
    }
}

/// Uncovered parameter interval of a curve patch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Uncovered {
    pub patch: usize,
    pub lo: f64,
    pub hi: f64,
    pub mass: f64,
    /// No admissible chart fits at its midpoint.
    pub stuck: bool,
}

#[derive(Clone, Debug)]
pub struct Cover<const D: usize> {
    pub eps: f64,
    pub charts: Vec<Chart<D>>,
    /// `|Du|` of the whole jump set.
    pub total_mass: f64,
    /// `|Du|` outside all balls.
    pub uncovered_mass: f64,
    /// Remaining intervals (curves only).
    pub uncovered: Vec<Uncovered>,
}

/// Reproducibility dump of a cover.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverDump {
    pub eps: f64,
    pub total_mass: f64,
    pub uncovered_mass: f64,
    pub charts: Vec<ChartRecord>,
}

impl<const D: usize> Cover<D> {
    pub fn dump(&self) -> CoverDump {
        CoverDump {
            eps: self.eps,
            total_mass: self.total_mass,
            uncovered_mass: self.uncovered_mass,
            charts: self.charts.iter().map(Chart::record).collect(),
        }
    }
}

#[derive(Debug)]
struct Live {
    mass: f64,
    patch: usize,
    lo: f64,
    hi: f64,
    /// Whole closed curve, endpoints identified.
    whole: bool,
}

impl PartialEq for Live {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Live {}
impl PartialOrd for Live {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Live {
    // Largest mass first; ties to the lower patch, then the lower parameter.
    fn cmp(&self, o: &Self) -> Ordering {
        self.mass
            .total_cmp(&o.mass)
            .then_with(|| o.patch.cmp(&self.patch))
            .then_with(|| o.lo.total_cmp(&self.lo))
    }
}

fn box_cap<const D: usize>(bounds: &Option<(Point<D>, Point<D>)>, y: &Point<D>) -> f64 {
    match bounds {
        None => f64::INFINITY,
        Some((lo, hi)) => 0.5 * (0..D).map(|i| (y[i] - lo[i]).min(hi[i] - y[i])).fold(f64::INFINITY, f64::min),
    }
}

/// Arclength of `[lo, hi]`, splitting at integers for closed curves.
fn arclength<const D: usize>(g: &dyn PatchGeometry<D>, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    if !g.is_closed() || (lo >= 0.0 && hi <= 1.0) {
        return g.measure_between(lo, hi);
    }
    let mut total = 0.0;
    let mut a = lo;
    while a < hi {
        let k = a.floor();
        let b = hi.min(k + 1.0);
        total += g.measure_between(a - k, b - k);
        a = b;
    }
    total
}

fn at<const D: usize>(g: &dyn PatchGeometry<D>, s: f64) -> Point<D> {
    if g.is_closed() {
        g.point([s.rem_euclid(1.0), 0.0])
    } else {
        g.point([s, 0.0])
    }
}

/// First parameter from `m` towards `limit` where the curve leaves `B_r(y)`.
fn exit_param<const D: usize>(g: &dyn PatchGeometry<D>, y: &Point<D>, r: f64, m: f64, limit: f64) -> f64 {
    let dir = (limit - m).signum();
    let inside = |s: f64| (at(g, s) - y).norm() < r;
    let mut prev = m;
    loop {
        let speed = g.tangents([if g.is_closed() { prev.rem_euclid(1.0) } else { prev }, 0.0])[0].norm().max(1e-300);
        let s = prev + dir * 0.25 * r / speed;
        if (s - limit) * dir >= 0.0 {
            if inside(limit) {
                return limit;
            }
            return bisect(&inside, prev, limit);
        }
        if !inside(s) {
            return bisect(&inside, prev, s);
        }
        prev = s;
    }
}

fn bisect(inside: &dyn Fn(f64) -> bool, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if inside(m) {
            a = m;
        } else {
            b = m;
        }
    }
    a
}

/// Greedy disjoint-ball cover of the jump set until the uncovered jump mass
/// drops below `eps`.
pub fn greedy_cover<const D: usize>(u: &AnalyticPartition<D>, eps: f64, opts: &CoverOptions<D>) -> Result<Cover<D>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Invalid(format!("eps {eps} outside (0, 1)")));
    }
    if D == 2 {
        cover_curves(u, eps, opts)
    } else {
        cover_surfaces(u, eps, opts)
    }
}

fn cover_curves<const D: usize>(u: &AnalyticPartition<D>, eps: f64, opts: &CoverOptions<D>) -> Result<Cover<D>> {
    let jumps: Vec<f64> = u.patches().iter().map(|p| u.labels().jump(p.plus, p.minus)).collect();
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    for (k, p) in u.patches().iter().enumerate() {
        let mass = jumps[k] * p.geometry.measure();
        total += mass;
        heap.push(Live { mass, patch: k, lo: 0.0, hi: 1.0, whole: p.geometry.is_closed() });
    }
    let mut uncovered = total;
    let mut stuck = Vec::new();
    let mut charts = Vec::new();
    let mut index = BallIndex::<D>::new();
    while uncovered >= eps && charts.len() < opts.max_charts {
        let Some(iv) = heap.pop() else { break };
        let g = u.patches()[iv.patch].geometry.as_ref();
        let m = 0.5 * (iv.lo + iv.hi);
        let y = at(g, m);
        let cap = opts.max_radius.min(box_cap(&opts.bounds, &y)).min(index.clearance(&y, f64::INFINITY) * (1.0 - 1e-9));
        let param = if g.is_closed() { m.rem_euclid(1.0) } else { m };
        match fit_chart(u, iv.patch, [param, 0.0], eps, cap) {
            Ok(ch) => {
                let (lo_lim, hi_lim) = if iv.whole { (m - 0.5, m + 0.5) } else { (iv.lo, iv.hi) };
                let a = exit_param(g, &ch.center, ch.radius, m, lo_lim);
                let b = exit_param(g, &ch.center, ch.radius, m, hi_lim);
                let pieces = if iv.whole { vec![(b, a + 1.0)] } else { vec![(iv.lo, a), (b, iv.hi)] };
                let mut left = 0.0;
                for (lo, hi) in pieces {
                    if hi > lo {
                        let mass = jumps[iv.patch] * arclength(g, lo, hi);
                        left += mass;
                        heap.push(Live { mass, patch: iv.patch, lo, hi, whole: false });
                    }
                }
                uncovered -= iv.mass - left;
                index.insert(ch.center, ch.radius);
                charts.push(ch);
            }
            Err(Error::JunctionTooClose { .. }) => {
                // Split and retry the halves; only short intervals are given up.
                let (lo, hi) = if iv.whole { (m - 0.5, m + 0.5) } else { (iv.lo, iv.hi) };
                if arclength(g, lo, hi) > 2.0 * R_MIN {
                    for (a, b) in [(lo, m), (m, hi)] {
                        let mass = jumps[iv.patch] * arclength(g, a, b);
                        heap.push(Live { mass, patch: iv.patch, lo: a, hi: b, whole: false });
                    }
                } else {
                    stuck.push(Uncovered { patch: iv.patch, lo: iv.lo, hi: iv.hi, mass: iv.mass, stuck: true });
                }
            }
            Err(e) => return Err(e),
        }
    }
    let mut rest: Vec<Uncovered> = heap
        .into_iter()
        .map(|iv| Uncovered { patch: iv.patch, lo: iv.lo, hi: iv.hi, mass: iv.mass, stuck: false })
        .chain(stuck)
        .collect();
    rest.sort_by(|a, b| a.patch.cmp(&b.patch).then(a.lo.total_cmp(&b.lo)));
    let uncovered_mass: f64 = rest.iter().map(|r| r.mass).sum();
    if uncovered_mass >= eps {
        return Err(Error::BudgetInfeasible { achieved: uncovered_mass, budget: eps });
    }
    Ok(Cover { eps, charts, total_mass: total, uncovered_mass, uncovered: rest })
}

fn cover_surfaces<const D: usize>(u: &AnalyticPartition<D>, eps: f64, opts: &CoverOptions<D>) -> Result<Cover<D>> {
    struct Node<const D: usize> {
        patch: usize,
        param: [f64; 2],
        x: Point<D>,
        mass: f64,
        clearance: f64,
        covered: bool,
        stuck: bool,
    }
    let mut nodes = Vec::new();
    let mut total = 0.0;
    for (k, p) in u.patches().iter().enumerate() {
        let jump = u.labels().jump(p.plus, p.minus);
        let samples = p.geometry.area_samples(opts.surface_nodes);
        if samples.is_empty() {
            return Err(Error::Invalid(format!("surface patch {k} has no area samples")));
        }
        for (param, w) in samples {
            total += jump * w;
            nodes.push(Node {
                patch: k,
                param,
                x: p.geometry.point(param),
                mass: jump * w,
                clearance: f64::INFINITY,
                covered: false,
                stuck: false,
            });
        }
    }
    let mut uncovered = total;
    let mut charts: Vec<Chart<D>> = Vec::new();
    while uncovered >= eps && charts.len() < opts.max_charts {
        let mut pick: Option<usize> = None;
        for (i, n) in nodes.iter().enumerate() {
            if !n.covered && !n.stuck && pick.map_or(true, |j| n.clearance > nodes[j].clearance) {
                pick = Some(i);
            }
        }
        let Some(i) = pick else { break };
        let n = &nodes[i];
        let cap = opts.max_radius.min(box_cap(&opts.bounds, &n.x)).min(n.clearance * (1.0 - 1e-9));
        match fit_chart(u, n.patch, n.param, eps, cap) {
            Ok(ch) => {
                for m in nodes.iter_mut() {
                    let d = (m.x - ch.center).norm();
                    if d < ch.radius && !m.covered {
                        m.covered = true;
                        uncovered -= m.mass;
                    }
                    m.clearance = m.clearance.min(d - ch.radius);
                }
                charts.push(ch);
            }
            Err(Error::JunctionTooClose { .. }) => nodes[i].stuck = true,
            Err(e) => return Err(e),
        }
    }
    let uncovered_mass: f64 = nodes.iter().filter(|n| !n.covered).map(|n| n.mass).sum();
    if uncovered_mass >= eps {
        return Err(Error::BudgetInfeasible { achieved: uncovered_mass, budget: eps });
    }
    Ok(Cover { eps, charts, total_mass: total, uncovered_mass, uncovered: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::patch::{CircleArc, Segment, Sphere};
    use crate::partition::{InterfacePatch, LabelSet};
    use std::f64::consts::TAU;
    use std::sync::Arc;

    fn circle(r: f64) -> AnalyticPartition<2> {
        let c = Point::<2>::new(0.5, 0.5);
        let cls = move |x: &Point<2>| ((x - c).norm() >= r) as usize;
        let p = InterfacePatch::new(Arc::new(CircleArc::circle(c, r)), 1, 0);
        AnalyticPartition::new(LabelSet::unit_vectors(2), Arc::new(cls), vec![p], (Point::<2>::zeros(), Point::<2>::repeat(1.0)))
            .unwrap()
    }

    fn disjoint<const D: usize>(charts: &[Chart<D>]) -> bool {
        charts.iter().enumerate().all(|(i, a)| {
            charts[i + 1..].iter().all(|b| (a.center - b.center).norm() > a.radius + b.radius)
        })
    }

    /// Covered arclength by sampling the curve densely.
    fn sampled_uncovered(u: &AnalyticPartition<2>, charts: &[Chart<2>]) -> f64 {
        let mut total = 0.0;
        for p in u.patches() {
            let n = 200_000;
            let jump = u.labels().jump(p.plus, p.minus);
            for i in 0..n {
                let t = (i as f64 + 0.5) / n as f64;
                let x = p.geometry.point([t, 0.0]);
                if charts.iter().all(|c| (x - c.center).norm() >= c.radius) {
                    total += jump * p.geometry.area_element([t, 0.0]) / n as f64;
                }
            }
        }
        total
    }

    #[test]
    fn straight_segment() {
        let seg = Segment { a: Point::<2>::new(0.0, 0.5), b: Point::<2>::new(1.0, 0.5) };
        let cls = |x: &Point<2>| (x[1] < 0.5) as usize;
        let u = AnalyticPartition::new(
            LabelSet::scalars(&[0.0, 1.0]).unwrap(),
            Arc::new(cls),
            vec![InterfacePatch::new(Arc::new(seg), 0, 1)],
            (Point::<2>::new(-1.0, -1.0), Point::<2>::new(2.0, 2.0)),
        )
        .unwrap();
        let cov = greedy_cover(&u, 0.1, &CoverOptions::default()).unwrap();
        assert!(cov.uncovered_mass < 0.1);
        assert!(cov.charts.iter().all(|c| c.graph.is_flat()));
        assert!(disjoint(&cov.charts));
        assert!((sampled_uncovered(&u, &cov.charts) - cov.uncovered_mass).abs() < 1e-4);
    }

    #[test]
    fn circle_cover_bookkeeping() {
        let u = circle(0.3);
        let cov = greedy_cover(&u, 0.1, &CoverOptions::default()).unwrap();
        assert!(cov.uncovered_mass < 0.1);
        assert!(disjoint(&cov.charts));
        let sampled = sampled_uncovered(&u, &cov.charts);
        assert!((sampled - cov.uncovered_mass).abs() < 1e-3, "{sampled} {}", cov.uncovered_mass);
        let r = 0.3 * 0.01 / (1.0 + 1e-4f64).sqrt();
        let estimate = TAU * 0.3 / (2.0 * r);
        let n = cov.charts.len() as f64;
        assert!(n >= 0.5 * estimate && n <= 4.0 * estimate, "{n} vs {estimate}");
        assert!(cov.charts.iter().all(|c| c.radius <= r * (1.0 + 1e-12)));
    }

    #[test]
    fn residual_monotone_in_eps() {
        let u = circle(0.3);
        let mut last = f64::INFINITY;
        for eps in [0.4, 0.2, 0.1] {
            let cov = greedy_cover(&u, eps, &CoverOptions::default()).unwrap();
            assert!(cov.uncovered_mass <= last);
            last = cov.uncovered_mass;
        }
    }

    #[test]
    fn sphere_cover() {
        let s = Sphere { center: Point::<3>::repeat(0.5), radius: 0.3 };
        let c = s.center;
        let cls = move |x: &Point<3>| ((x - c).norm() >= 0.3) as usize;
        let u = AnalyticPartition::new(
            LabelSet::unit_vectors(2),
            Arc::new(cls),
            vec![InterfacePatch::new(Arc::new(s), 1, 0)],
            (Point::<3>::zeros(), Point::<3>::repeat(1.0)),
        )
        .unwrap();
        let cov = greedy_cover(&u, 0.4, &CoverOptions { surface_nodes: 4000, ..Default::default() }).unwrap();
        assert!(cov.uncovered_mass < 0.4);
        assert!(disjoint(&cov.charts));
    }

    #[test]
    fn dump_round_trip() {
        let cov = greedy_cover(&circle(0.3), 0.4, &CoverOptions::default()).unwrap();
        let d = cov.dump();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<CoverDump>(&s).unwrap(), d);
    }
}
