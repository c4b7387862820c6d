//! Parameterized C1 interface patches: curves on `[0,1]` in 2D and surface
//! patches on `[0,1]²` in 3D.

use crate::geometry::{point_segment_distance, Isometry, Point, Vector};
use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Patch parameter; curves ignore the second coordinate.
pub type Param = [f64; 2];

/// Height function of a chart: the patch near the chart center is
/// `{(x', g(x'))}` in chart coordinates.
#[derive(Clone, Debug)]
pub enum Graph<const D: usize> {
    Flat,
    /// `g(x') = sign · (R − sqrt(R² − |x'|²))`.
    Spherical { radius: f64, sign: f64 },
    /// Solved numerically from a curve parameterization.
    Curve(Arc<CurveGraph<D>>),
}

impl<const D: usize> Graph<D> {
    /// Height and gradient at the tangential part of `xi` (last entry ignored).
    pub fn eval(&self, xi: &Vector<D>) -> (f64, Vector<D>) {
        match self {
            Graph::Flat => (0.0, Vector::<D>::zeros()),
            Graph::Spherical { radius, sign } => {
                let mut tang = *xi;
                tang[D - 1] = 0.0;
                let rho2 = tang.norm_squared();
                let root = (radius * radius - rho2).max(0.0).sqrt();
                let g = sign * rho2 / (radius + root);
                let grad = if root > 0.0 { tang * (sign / root) } else { Vector::<D>::zeros() };
                (g, grad)
            }
            Graph::Curve(c) => c.eval(xi[0]),
        }
    }

    pub fn is_flat(&self) -> bool {
        matches!(self, Graph::Flat)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Graph::Flat => "flat",
            Graph::Spherical { .. } => "spherical",
            Graph::Curve(_) => "curve",
        }
    }
}

/// Graph of a planar curve over the tangent line of a chart, for parameters
/// in `[t_lo, t_hi]` where the tangential coordinate is monotone.
#[derive(Debug)]
pub struct CurveGraph<const D: usize> {
    pub curve: Arc<dyn PatchGeometry<D>>,
    pub frame: Isometry<D>,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl<const D: usize> CurveGraph<D> {
    fn local(&self, t: f64) -> (Vector<D>, Vector<D>) {
        let p = self.frame.apply(&self.curve.point([t, 0.0]));
        let d = self.frame.apply_vector(&self.curve.tangents([t, 0.0])[0]);
        (p, d)
    }

    fn eval(&self, x: f64) -> (f64, Vector<D>) {
        let (mut a, mut b) = (self.t_lo, self.t_hi);
        let (pa, _) = self.local(a);
        let (pb, _) = self.local(b);
        let increasing = pb[0] > pa[0];
        let target = if increasing { x.clamp(pa[0], pb[0]) } else { x.clamp(pb[0], pa[0]) };
        let span = pb[0] - pa[0];
        let mut t = if span != 0.0 { a + (b - a) * ((target - pa[0]) / span).clamp(0.0, 1.0) } else { 0.5 * (a + b) };
        for _ in 0..100 {
            let (p, d) = self.local(t);
            let r = p[0] - target;
            if r.abs() <= 1e-15 * (1.0 + target.abs()) {
                break;
            }
            if (r > 0.0) == increasing {
                b = t;
            } else {
                a = t;
            }
            let newton = t - r / d[0];
            let next = if d[0] != 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
            let settled = (next - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0);
            t = next;
            if settled || b - a <= 1e-16 {
                break;
            }
        }
        let (p, d) = self.local(t);
        let mut grad = Vector::<D>::zeros();
        grad[0] = d[D - 1] / d[0];
        (p[D - 1], grad)
    }
}

/// Serializable description of a patch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PatchDescriptor {
    Segment { a: Vec<f64>, b: Vec<f64> },
    Arc { center: Vec<f64>, radius: f64, theta0: f64, theta1: f64 },
    CubicBezier { control: Vec<Vec<f64>> },
    Parallelogram { origin: Vec<f64>, e1: Vec<f64>, e2: Vec<f64> },
    Sphere { center: Vec<f64>, radius: f64 },
    /// A patch without a closed form, recorded as a polyline of samples.
    Sampled { name: String, points: Vec<Vec<f64>> },
}

fn gl16() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16).expect("16-point rule").into_node_weight_pairs())
}

/// Panel count for a subinterval of `[0, 1]` given `per_unit` panels on the whole.
pub fn panels_for(a: f64, b: f64, per_unit: usize) -> usize {
    ((b - a).abs() * per_unit as f64).ceil().max(1.0) as usize
}

/// Composite 16-point Gauss–Legendre rule on `[a, b]` with `panels` panels.
pub fn gauss_legendre(a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut s = 0.0;
        for &(x, w) in gl16() {
            s += w * f(mid + 0.5 * h * x);
        }
        total += 0.5 * h * s;
    }
    total
}

/// Geometry of one C1 interface patch.
pub trait PatchGeometry<const D: usize>: Send + Sync + fmt::Debug {
    fn point(&self, t: Param) -> Point<D>;

    /// Partial derivatives; the second is zero for curves.
    fn tangents(&self, t: Param) -> [Vector<D>; 2];

    fn descriptor(&self) -> PatchDescriptor;

    /// Unit normal: the tangent rotated clockwise (2D), `∂s × ∂t` (3D).
    fn normal(&self, t: Param) -> Vector<D> {
        let [a, b] = self.tangents(t);
        let mut n = Vector::<D>::zeros();
        if D == 2 {
            n[0] = a[1];
            n[1] = -a[0];
        } else {
            n[0] = a[1] * b[2] - a[2] * b[1];
            n[1] = a[2] * b[0] - a[0] * b[2];
            n[2] = a[0] * b[1] - a[1] * b[0];
        }
        n.normalize()
    }

    /// Curves whose parameter is periodic with period 1.
    fn is_closed(&self) -> bool {
        false
    }

    /// `|γ'|` for curves, `|∂s × ∂t|` for surfaces.
    fn area_element(&self, t: Param) -> f64 {
        let [a, b] = self.tangents(t);
        if D == 2 {
            a.norm()
        } else {
            let c = Vector::<3>::new(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
            c.norm()
        }
    }

    /// Arclength between curve parameters `a < b`.
    fn measure_between(&self, a: f64, b: f64) -> f64 {
        gauss_legendre(a, b, panels_for(a, b, 8), |t| self.area_element([t, 0.0]))
    }

    /// Total (D−1)-measure.
    fn measure(&self) -> f64 {
        self.measure_between(0.0, 1.0)
    }

    /// Distance from `x` to the closed patch.
    fn distance(&self, x: &Point<D>) -> f64 {
        curve_distance(self, x).1
    }

    /// Whether `distance` is exact rather than a sampled estimate.
    fn distance_is_exact(&self) -> bool {
        false
    }

    /// Distance from `x` to the relative boundary of the patch.
    fn boundary_distance(&self, x: &Point<D>) -> f64 {
        if self.is_closed() {
            f64::INFINITY
        } else {
            (self.point([0.0, 0.0]) - x).norm().min((self.point([1.0, 0.0]) - x).norm())
        }
    }

    /// Closed-form largest chart radius with `sup |Dg| <= eps²`, if known.
    fn slope_radius(&self, _eps: f64) -> Option<f64> {
        None
    }

    /// Closed-form chart graph at `t` in the given chart frame, if known.
    fn graph(&self, _t: Param, _frame: &Isometry<D>) -> Option<Graph<D>> {
        None
    }

    /// Parameters and area weights of a quadrature-like node set with about
    /// `n` nodes (surfaces only).
    fn area_samples(&self, _n: usize) -> Vec<(Param, f64)> {
        Vec::new()
    }
}

/// Nearest curve parameter and distance, by sampling and golden-section refinement.
pub fn curve_distance<const D: usize, P: PatchGeometry<D> + ?Sized>(p: &P, x: &Point<D>) -> (f64, f64) {
    let n = 256;
    let mut best = (0.0, f64::INFINITY);
    for i in 0..=n {
        let t = i as f64 / n as f64;
        let d = (p.point([t, 0.0]) - x).norm();
        if d < best.1 {
            best = (t, d);
        }
    }
    let (mut a, mut b) = ((best.0 - 1.0 / n as f64).max(0.0), (best.0 + 1.0 / n as f64).min(1.0));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let f = |t: f64| (p.point([t, 0.0]) - x).norm();
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    let dist = f(t);
    if dist < best.1 {
        (t, dist)
    } else {
        best
    }
}

fn vec_of<const D: usize>(p: &Point<D>) -> Vec<f64> {
    p.iter().copied().collect()
}

/// Straight segment `a + t (b − a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment<const D: usize> {
    pub a: Point<D>,
    pub b: Point<D>,
}

impl<const D: usize> PatchGeometry<D> for Segment<D> {
    fn point(&self, t: Param) -> Point<D> {
        self.a + (self.b - self.a) * t[0]
    }
    fn tangents(&self, _t: Param) -> [Vector<D>; 2] {
        [self.b - self.a, Vector::<D>::zeros()]
    }
    fn descriptor(&self) -> PatchDescriptor {
        PatchDescriptor::Segment { a: vec_of(&self.a), b: vec_of(&self.b) }
    }
    fn measure_between(&self, a: f64, b: f64) -> f64 {
        (self.b - self.a).norm() * (b - a)
    }
    fn distance(&self, x: &Point<D>) -> f64 {
        point_segment_distance(x, &self.a, &self.b)
    }
    fn distance_is_exact(&self) -> bool {
        true
    }
    fn slope_radius(&self, _eps: f64) -> Option<f64> {
        Some(f64::INFINITY)
    }
    fn graph(&self, _t: Param, _frame: &Isometry<D>) -> Option<Graph<D>> {
        Some(Graph::Flat)
    }
}

/// Circular arc `c + R (cos θ, sin θ)`, `θ = θ0 + t (θ1 − θ0)`; a full
/// counter-clockwise circle has outward normals.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleArc {
    pub center: Point<2>,
    pub radius: f64,
    pub theta0: f64,
    pub theta1: f64,
}

impl CircleArc {
    pub fn circle(center: Point<2>, radius: f64) -> Self {
        Self { center, radius, theta0: 0.0, theta1: TAU }
    }

    fn sweep(&self) -> f64 {
        self.theta1 - self.theta0
    }

    fn angle_in_range(&self, phi: f64) -> bool {
        if self.is_closed() {
            return true;
        }
        let lo = self.theta0.min(self.theta1);
        (phi - lo).rem_euclid(TAU) <= self.sweep().abs()
    }
}

impl PatchGeometry<2> for CircleArc {
    fn point(&self, t: Param) -> Point<2> {
        let th = self.theta0 + t[0] * self.sweep();
        self.center + Vector::<2>::new(th.cos(), th.sin()) * self.radius
    }
    fn tangents(&self, t: Param) -> [Vector<2>; 2] {
        let th = self.theta0 + t[0] * self.sweep();
        [Vector::<2>::new(-th.sin(), th.cos()) * (self.radius * self.sweep()), Vector::<2>::zeros()]
    }
    fn normal(&self, t: Param) -> Vector<2> {
        let th = self.theta0 + t[0] * self.sweep();
        Vector::<2>::new(th.cos(), th.sin()) * self.sweep().signum()
    }
    fn descriptor(&self) -> PatchDescriptor {
        PatchDescriptor::Arc {
            center: vec_of(&self.center),
            radius: self.radius,
            theta0: self.theta0,
            theta1: self.theta1,
        }
    }
    fn is_closed(&self) -> bool {
        self.sweep().abs() >= TAU - 1e-12
    }
    fn area_element(&self, _t: Param) -> f64 {
        self.radius * self.sweep().abs()
    }
    fn measure_between(&self, a: f64, b: f64) -> f64 {
        self.radius * self.sweep().abs() * (b - a)
    }
    fn distance(&self, x: &Point<2>) -> f64 {
        let d = x - self.center;
        if self.angle_in_range(d[1].atan2(d[0])) {
            (d.norm() - self.radius).abs()
        } else {
            (self.point([0.0, 0.0]) - x).norm().min((self.point([1.0, 0.0]) - x).norm())
        }
    }
    fn distance_is_exact(&self) -> bool {
        true
    }
    fn slope_radius(&self, eps: f64) -> Option<f64> {
        let e2 = eps * eps;
        Some(self.radius * e2 / (1.0 + e2 * e2).sqrt())
    }
    fn graph(&self, _t: Param, _frame: &Isometry<2>) -> Option<Graph<2>> {
        Some(Graph::Spherical { radius: self.radius, sign: -self.sweep().signum() })
    }
}

/// Planar cubic Bézier curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicBezier {
    pub control: [Point<2>; 4],
}

impl PatchGeometry<2> for CubicBezier {
    fn point(&self, t: Param) -> Point<2> {
        let (t, s) = (t[0], 1.0 - t[0]);
        let c = &self.control;
        c[0] * (s * s * s) + c[1] * (3.0 * s * s * t) + c[2] * (3.0 * s * t * t) + c[3] * (t * t * t)
    }
    fn tangents(&self, t: Param) -> [Vector<2>; 2] {
        let (t, s) = (t[0], 1.0 - t[0]);
        let c = &self.control;
        let d = (c[1] - c[0]) * (3.0 * s * s) + (c[2] - c[1]) * (6.0 * s * t) + (c[3] - c[2]) * (3.0 * t * t);
        [d, Vector::<2>::zeros()]
    }
    fn descriptor(&self) -> PatchDescriptor {
        PatchDescriptor::CubicBezier { control: self.control.iter().map(vec_of).collect() }
    }
}

/// Flat parallelogram `o + s e1 + t e2` in space.
#[derive(Clone, Debug, PartialEq)]
pub struct Parallelogram {
    pub origin: Point<3>,
    pub e1: Vector<3>,
    pub e2: Vector<3>,
}

impl Parallelogram {
    fn corners(&self) -> [Point<3>; 4] {
        let o = self.origin;
        [o, o + self.e1, o + self.e1 + self.e2, o + self.e2]
    }
}

impl PatchGeometry<3> for Parallelogram {
    fn point(&self, t: Param) -> Point<3> {
        self.origin + self.e1 * t[0] + self.e2 * t[1]
    }
    fn tangents(&self, _t: Param) -> [Vector<3>; 2] {
        [self.e1, self.e2]
    }
    fn descriptor(&self) -> PatchDescriptor {
        PatchDescriptor::Parallelogram { origin: vec_of(&self.origin), e1: vec_of(&self.e1), e2: vec_of(&self.e2) }
    }
    fn measure(&self) -> f64 {
        self.e1.cross(&self.e2).norm()
    }
    fn distance(&self, x: &Point<3>) -> f64 {
        let n = self.e1.cross(&self.e2).normalize();
        let d = x - self.origin;
        let h = d.dot(&n);
        let q = d - n * h;
        // Solve q = s e1 + t e2 via the Gram system.
        let (a11, a12, a22) = (self.e1.dot(&self.e1), self.e1.dot(&self.e2), self.e2.dot(&self.e2));
        let (b1, b2) = (q.dot(&self.e1), q.dot(&self.e2));
        let det = a11 * a22 - a12 * a12;
        let s = (b1 * a22 - b2 * a12) / det;
        let t = (a11 * b2 - a12 * b1) / det;
        if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t) {
            h.abs()
        } else {
            self.boundary_distance(x)
        }
    }
    fn boundary_distance(&self, x: &Point<3>) -> f64 {
        let c = self.corners();
        (0..4).map(|i| point_segment_distance(x, &c[i], &c[(i + 1) % 4])).fold(f64::INFINITY, f64::min)
    }
    fn slope_radius(&self, _eps: f64) -> Option<f64> {
        Some(f64::INFINITY)
    }
    fn graph(&self, _t: Param, _frame: &Isometry<3>) -> Option<Graph<3>> {
        Some(Graph::Flat)
    }
    fn area_samples(&self, n: usize) -> Vec<(Param, f64)> {
        let k = (n as f64).sqrt().ceil().max(1.0) as usize;
        let w = self.measure() / (k * k) as f64;
        let mut out = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                out.push(([(i as f64 + 0.5) / k as f64, (j as f64 + 0.5) / k as f64], w));
            }
        }
        out
    }
}

/// Full sphere with outward normals; `s` is the polar and `t` the azimuthal parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Sphere {
    pub center: Point<3>,
    pub radius: f64,
}

impl PatchGeometry<3> for Sphere {
    fn point(&self, t: Param) -> Point<3> {
        self.center + self.normal(t) * self.radius
    }
    fn tangents(&self, t: Param) -> [Vector<3>; 2] {
        let (th, ph) = (PI * t[0], TAU * t[1]);
        let r = self.radius;
        [
            Vector::<3>::new(th.cos() * ph.cos(), th.cos() * ph.sin(), -th.sin()) * (PI * r),
            Vector::<3>::new(-th.sin() * ph.sin(), th.sin() * ph.cos(), 0.0) * (TAU * r),
        ]
    }
    fn normal(&self, t: Param) -> Vector<3> {
        let (th, ph) = (PI * t[0], TAU * t[1]);
        Vector::<3>::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos())
    }
    fn descriptor(&self) -> PatchDescriptor {
        PatchDescriptor::Sphere { center: vec_of(&self.center), radius: self.radius }
    }
    fn is_closed(&self) -> bool {
        true
    }
    fn measure(&self) -> f64 {
        2.0 * TAU * self.radius * self.radius
    }
    fn distance(&self, x: &Point<3>) -> f64 {
        ((x - self.center).norm() - self.radius).abs()
    }
    fn distance_is_exact(&self) -> bool {
        true
    }
    fn slope_radius(&self, eps: f64) -> Option<f64> {
        let e2 = eps * eps;
        Some(self.radius * e2 / (1.0 + e2 * e2).sqrt())
    }
    fn graph(&self, _t: Param, _frame: &Isometry<3>) -> Option<Graph<3>> {
        Some(Graph::Spherical { radius: self.radius, sign: -1.0 })
    }
    fn area_samples(&self, n: usize) -> Vec<(Param, f64)> {
        // Fibonacci lattice: equal-area nodes.
        let golden = PI * (3.0 - 5f64.sqrt());
        let w = self.measure() / n as f64;
        (0..n)
            .map(|i| {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                let phi = (golden * i as f64).rem_euclid(TAU);
                ([z.acos() / PI, phi / TAU], w)
            })
            .collect()
    }
}

/// A patch moved by an isometry.
#[derive(Debug)]
pub struct Transformed<const D: usize> {
    pub inner: Arc<dyn PatchGeometry<D>>,
    pub iso: Isometry<D>,
}

impl<const D: usize> PatchGeometry<D> for Transformed<D> {
    fn point(&self, t: Param) -> Point<D> {
        self.iso.apply(&self.inner.point(t))
    }
    fn tangents(&self, t: Param) -> [Vector<D>; 2] {
        let [a, b] = self.inner.tangents(t);
        [self.iso.apply_vector(&a), self.iso.apply_vector(&b)]
    }
    fn normal(&self, t: Param) -> Vector<D> {
        self.iso.apply_vector(&self.inner.normal(t))
    }
    fn descriptor(&self) -> PatchDescriptor {
        sampled_descriptor(self, "transformed")
    }
    fn is_closed(&self) -> bool {
        self.inner.is_closed()
    }
    fn area_element(&self, t: Param) -> f64 {
        self.inner.area_element(t)
    }
    fn measure_between(&self, a: f64, b: f64) -> f64 {
        self.inner.measure_between(a, b)
    }
    fn measure(&self) -> f64 {
        self.inner.measure()
    }
    fn distance(&self, x: &Point<D>) -> f64 {
        self.inner.distance(&self.iso.apply_inverse(x))
    }
    fn distance_is_exact(&self) -> bool {
        self.inner.distance_is_exact()
    }
    fn boundary_distance(&self, x: &Point<D>) -> f64 {
        self.inner.boundary_distance(&self.iso.apply_inverse(x))
    }
    fn slope_radius(&self, eps: f64) -> Option<f64> {
        self.inner.slope_radius(eps)
    }
    fn graph(&self, t: Param, frame: &Isometry<D>) -> Option<Graph<D>> {
        self.inner.graph(t, &frame.compose(&self.iso))
    }
    fn area_samples(&self, n: usize) -> Vec<(Param, f64)> {
        self.inner.area_samples(n)
    }
}

/// Polyline description of a curve without a closed form.
pub fn sampled_descriptor<const D: usize, P: PatchGeometry<D> + ?Sized>(p: &P, name: &str) -> PatchDescriptor {
    let n = 64;
    let points = if D == 2 {
        (0..=n).map(|i| vec_of(&p.point([i as f64 / n as f64, 0.0]))).collect()
    } else {
        Vec::new()
    };
    PatchDescriptor::Sampled { name: name.to_string(), points }
}

/// A patch together with the phases on the two sides: `plus` is the side
/// the normal points into.
#[derive(Clone, Debug)]
pub struct InterfacePatch<const D: usize> {
    pub geometry: Arc<dyn PatchGeometry<D>>,
    pub plus: usize,
    pub minus: usize,
}

impl<const D: usize> InterfacePatch<D> {
    pub fn new(geometry: Arc<dyn PatchGeometry<D>>, plus: usize, minus: usize) -> Self {
        Self { geometry, plus, minus }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_normals_and_length() {
        let c = CircleArc::circle(Point::<2>::new(0.5, 0.5), 0.3);
        for i in 0..64 {
            let t = [i as f64 / 64.0, 0.0];
            let n = c.normal(t);
            assert!((n.norm() - 1.0).abs() < 1e-12);
            let generic = {
                let [a, _] = c.tangents(t);
                Vector::<2>::new(a[1], -a[0]).normalize()
            };
            assert!((n - generic).norm() < 1e-12);
            assert!(((c.point(t) - c.center).normalize() - n).norm() < 1e-12);
        }
        assert!((c.measure() - TAU * 0.3).abs() < 1e-15);
        assert!((gauss_legendre(0.0, 1.0, 8, |t| c.area_element([t, 0.0])) - TAU * 0.3).abs() < 1e-14);
    }

    #[test]
    fn slope_radius_closed_form() {
        let c = CircleArc::circle(Point::<2>::zeros(), 0.3);
        assert!((c.slope_radius(0.1).unwrap() - 3.0e-3).abs() < 1e-6);
        assert!((c.slope_radius(0.5).unwrap() - 7.276e-2).abs() < 1e-4);
    }

    #[test]
    fn spherical_graph_tracks_the_circle() {
        let c = CircleArc::circle(Point::<2>::new(0.2, -0.1), 0.3);
        let t = [0.17, 0.0];
        let y = c.point(t);
        let frame = Isometry::aligning(&c.normal(t), &y);
        let g = c.graph(t, &frame).unwrap();
        for k in -10..=10 {
            let s = t[0] + k as f64 * 0.004;
            let p = frame.apply(&c.point([s, 0.0]));
            let (h, _) = g.eval(&p);
            assert!((h - p[1]).abs() < 1e-13);
        }
        let curve: Arc<dyn PatchGeometry<2>> = Arc::new(c.clone());
        let numeric = CurveGraph { curve, frame: frame.clone(), t_lo: t[0] - 0.05, t_hi: t[0] + 0.05 };
        for k in -10..=10 {
            let x = k as f64 * 0.005;
            let xi = Vector::<2>::new(x, 0.0);
            let (h1, d1) = g.eval(&xi);
            let (h2, d2) = numeric.eval(x);
            assert!((h1 - h2).abs() < 1e-13, "{h1} {h2}");
            assert!((d1[0] - d2[0]).abs() < 1e-10);
        }
    }

    #[test]
    fn arc_distance() {
        let a = CircleArc { center: Point::<2>::zeros(), radius: 1.0, theta0: 0.0, theta1: PI / 2.0 };
        assert!((a.distance(&Point::<2>::new(2.0, 2.0)) - (8f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((a.distance(&Point::<2>::new(-1.0, 0.0)) - 2f64.sqrt()).abs() < 1e-15);
        let generic = curve_distance(&a, &Point::<2>::new(0.3, 0.4)).1;
        assert!((generic - 0.5).abs() < 1e-9);
    }

    #[test]
    fn sphere_surface() {
        let s = Sphere { center: Point::<3>::zeros(), radius: 2.0 };
        let t = [0.3, 0.7];
        let [a, b] = s.tangents(t);
        assert!((a.cross(&b).normalize() - s.normal(t)).norm() < 1e-12);
        let total: f64 = s.area_samples(1000).iter().map(|e| e.1).sum();
        assert!((total - 16.0 * PI).abs() < 1e-9);
    }
}
