use super::cutoff::Cutoff;
use crate::error::{Error, Result};
use crate::geometry::{Isometry, Matrix, Point, Vector};
use crate::partition::patch::CurveGraph;
use crate::partition::{AnalyticPartition, Graph, Param, PatchGeometry};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Smallest admissible chart radius.
pub const R_MIN: f64 = 1e-4;

/// Local graph chart of the jump set around `center`.
#[derive(Clone, Debug)]
pub struct Chart<const D: usize> {
    pub patch: usize,
    pub param: Param,
    pub center: Point<D>,
    pub radius: f64,
    /// `I_y`: sends `center` to 0 and the patch normal to `e_D`.
    pub frame: Isometry<D>,
    pub graph: Graph<D>,
    pub plus: usize,
    pub minus: usize,
}

/// Plain-data view of a chart for diagnostic dumps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartRecord {
    pub patch: usize,
    pub center: Vec<f64>,
    pub radius: f64,
    pub angles: Vec<f64>,
    pub graph: String,
    pub plus: usize,
    pub minus: usize,
}

impl<const D: usize> Chart<D> {
    /// `ν_y = Q_y⁻¹ e_D`.
    pub fn normal(&self) -> Vector<D> {
        let mut e = Vector::<D>::zeros();
        e[D - 1] = 1.0;
        self.frame.apply_vector_inverse(&e)
    }

    /// Height and tangential gradient of the graph at chart coordinates `xi`.
    pub fn height(&self, xi: &Vector<D>) -> (f64, Vector<D>) {
        self.graph.eval(xi)
    }

    pub fn record(&self) -> ChartRecord {
        ChartRecord {
            patch: self.patch,
            center: self.center.iter().copied().collect(),
            radius: self.radius,
            angles: self.frame.angles(),
            graph: self.graph.kind().to_string(),
            plus: self.plus,
            minus: self.minus,
        }
    }
}

/// Fits the largest admissible chart at parameter `t` of patch `index`.
///
/// The radius is the minimum of the slope radius (`sup |Dg| <= ε²`), the
/// distance to the other patches, the distance to the patch boundary, and
/// `cap` (existing balls, box margin, user limits).
pub fn fit_chart<const D: usize>(
    u: &AnalyticPartition<D>,
    index: usize,
    t: Param,
    eps: f64,
    cap: f64,
) -> Result<Chart<D>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Invalid(format!("eps {eps} outside (0, 1)")));
    }
    let patch = &u.patches()[index];
    let geom = &patch.geometry;
    let y = geom.point(t);
    let frame = Isometry::aligning(&geom.normal(t), &y);
    let mut r = cap.min(geom.boundary_distance(&y));
    for (k, other) in u.patches().iter().enumerate() {
        if k != index {
            r = r.min(other.geometry.distance(&y));
        }
    }
    let graph = match (geom.slope_radius(eps), geom.graph(t, &frame)) {
        (Some(rs), Some(g)) => {
            r = r.min(rs);
            g
        }
        _ => {
            if D != 2 {
                return Err(Error::Invalid(format!("patch {index} has no closed-form chart graph")));
            }
            let (rs, g) = scan_curve(geom.clone(), t[0], &frame, eps, &y);
            r = r.min(rs);
            g
        }
    };
    if !(r >= R_MIN) {
        return Err(Error::JunctionTooClose { r_min: R_MIN, cap: r });
    }
    Ok(Chart { patch: index, param: t, center: y, radius: r, frame, graph, plus: patch.plus, minus: patch.minus })
}

/// Slope radius of a generic curve by stepping away from `t0` and bisecting
/// the first violation of `|Dg| <= ε²` (or of monotonicity) to 1e-6 relative.
fn scan_curve<const D: usize>(
    curve: Arc<dyn PatchGeometry<D>>,
    t0: f64,
    frame: &Isometry<D>,
    eps: f64,
    y: &Point<D>,
) -> (f64, Graph<D>) {
    let e2 = eps * eps;
    let sign = frame.apply_vector(&curve.tangents([t0, 0.0])[0])[0].signum();
    let ok = |s: f64| {
        let d = frame.apply_vector(&curve.tangents([s, 0.0])[0]) * sign;
        d[0] > 0.0 && d[D - 1].abs() <= e2 * d[0]
    };
    let tangential = |s: f64| frame.apply(&curve.point([s, 0.0]))[0].abs();
    let mut limits = [0.0; 2];
    let mut radius = f64::INFINITY;
    for (slot, dir) in [(0usize, -1.0f64), (1, 1.0)] {
        let end = if dir > 0.0 { 1.0 } else { 0.0 };
        let step = 1.0 / 4096.0;
        let mut prev = t0;
        let mut lim = end;
        loop {
            let s = prev + dir * step;
            if (s - end) * dir >= 0.0 {
                if !ok(end) {
                    lim = bisect_violation(&ok, prev, end, &tangential);
                }
                break;
            }
            if !ok(s) {
                lim = bisect_violation(&ok, prev, s, &tangential);
                break;
            }
            prev = s;
        }
        limits[slot] = lim;
        radius = radius.min(tangential(lim));
    }
    // The rest of the curve must stay outside the ball.
    let n = 512;
    for i in 0..=n {
        let s = i as f64 / n as f64;
        if s < limits[0] || s > limits[1] {
            radius = radius.min(0.99 * (curve.point([s, 0.0]) - y).norm());
        }
    }
    let graph = Graph::Curve(Arc::new(CurveGraph { curve, frame: frame.clone(), t_lo: limits[0], t_hi: limits[1] }));
    (radius, graph)
}

fn bisect_violation(ok: &dyn Fn(f64) -> bool, mut good: f64, mut bad: f64, tangential: &dyn Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let scale = tangential(good).max(1e-300);
        if (tangential(bad) - tangential(good)).abs() <= 1e-6 * scale {
            break;
        }
        let mid = 0.5 * (good + bad);
        if ok(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// `f(x) = x + ψ(|x − y|) g(Π I_y x) ν_y`: maps the chart hyperplane onto the
/// graph inside `B_{(1−ε)r}(y)`, so that `u ∘ f` is flat there.
#[derive(Clone, Debug)]
pub struct LocalDiffeo<const D: usize> {
    pub chart: Chart<D>,
    pub cutoff: Cutoff,
}

impl<const D: usize> LocalDiffeo<D> {
    pub fn new(chart: Chart<D>, eps: f64) -> Result<Self> {
        let cutoff = Cutoff::new(eps, chart.radius)?;
        Ok(Self { chart, cutoff })
    }

    pub fn contains(&self, x: &Point<D>) -> bool {
        (x - self.chart.center).norm() < self.chart.radius
    }

    pub fn forward(&self, x: &Point<D>) -> Point<D> {
        if self.chart.graph.is_flat() || !self.contains(x) {
            return *x;
        }
        let mut xi = self.chart.frame.apply(x);
        let psi = self.cutoff.value(xi.norm());
        if psi == 0.0 {
            return *x;
        }
        let (g, _) = self.chart.height(&xi);
        xi[D - 1] += psi * g;
        self.chart.frame.apply_inverse(&xi)
    }

    /// `Df(x)` in world coordinates.
    pub fn jacobian(&self, x: &Point<D>) -> Matrix<D> {
        if self.chart.graph.is_flat() || !self.contains(x) {
            return Matrix::<D>::identity();
        }
        let xi = self.chart.frame.apply(x);
        let rho = xi.norm();
        let psi = self.cutoff.value(rho);
        let (g, grad) = self.chart.height(&xi);
        let dpsi = if rho > 0.0 { xi * (self.cutoff.derivative(rho) / rho) } else { Vector::<D>::zeros() };
        let w = dpsi * g + grad * psi;
        let mut local = Matrix::<D>::identity();
        for j in 0..D {
            local[(D - 1, j)] += w[j];
        }
        let q = &self.chart.frame.rotation;
        q.transpose() * local * q
    }

    /// Inverse by bracketed Newton iteration on `s + ψ(|(η', s)|) g(η') = η_D`.
    pub fn inverse(&self, x: &Point<D>) -> Result<Point<D>> {
        if self.chart.graph.is_flat() || !self.contains(x) {
            return Ok(*x);
        }
        let eta = self.chart.frame.apply(x);
        let (g, _) = self.chart.height(&eta);
        if g == 0.0 {
            return Ok(*x);
        }
        let target = eta[D - 1];
        let mut xi = eta;
        let mut phi = |s: f64| {
            xi[D - 1] = s;
            let rho = xi.norm();
            let val = s + self.cutoff.value(rho) * g - target;
            let d = if rho > 0.0 { 1.0 + self.cutoff.derivative(rho) * s / rho * g } else { 1.0 };
            (val, d)
        };
        let (mut lo, mut hi) = if g > 0.0 { (target - g, target) } else { (target, target - g) };
        let tol = 1e-12 * self.chart.radius.max(1e-300);
        let mut s = target - g;
        for _ in 0..200 {
            let (val, d) = phi(s);
            if val == 0.0 {
                lo = s;
                hi = s;
                break;
            }
            if val > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let newton = s - val / d;
            let next = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - s).abs() <= 0.25 * tol || hi - lo <= tol {
                s = next.clamp(lo, hi);
                lo = s;
                hi = s;
                break;
            }
            s = next;
        }
        if hi - lo > tol {
            return Err(Error::InverseDivergence(format!("{:?}", x.as_slice())));
        }
        let mut out = eta;
        out[D - 1] = s;
        Ok(self.chart.frame.apply_inverse(&out))
    }

    /// `max |Df − Id|` (Frobenius) over a `k^D` grid of the ball's bounding cube.
    pub fn max_jacobian_deviation(&self, k: usize) -> f64 {
        let mut best = 0.0f64;
        for_grid::<D>(k, |u| {
            let x = self.chart.center + u * self.chart.radius;
            if (x - self.chart.center).norm() < self.chart.radius {
                best = best.max((self.jacobian(&x) - Matrix::<D>::identity()).norm());
            }
        });
        best
    }
}

/// Calls `f` on the `k^D` grid of `[-1, 1]^D`.
pub(crate) fn for_grid<const D: usize>(k: usize, mut f: impl FnMut(Vector<D>)) {
    let total = k.pow(D as u32);
    for idx in 0..total {
        let mut rem = idx;
        let u = Vector::<D>::from_fn(|_, _| {
            let i = rem % k;
            rem /= k;
            if k == 1 {
                0.0
            } else {
                -1.0 + 2.0 * i as f64 / (k - 1) as f64
            }
        });
        f(u);
    }
}
