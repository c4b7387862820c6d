use crate::error::{Error, Result};
use crate::geometry::{Point, Vector};
use crate::partition::Domain;
use std::f64::consts::TAU;

#[derive(Clone, Debug)]
enum Boundary {
    Disc { center: Point<2>, radius: f64 },
    Polygon { vertices: Vec<Point<2>>, normals: Vec<Vector<2>>, tangents: Vec<Vector<2>>, starts: Vec<f64> },
}

/// Collar chart `Φ(σ, t) = b(σ) + t ν̂(σ)` of the boundary of a planar
/// domain, with `σ` the arclength parameter of the boundary and `|t| < ρ`.
#[derive(Clone, Debug)]
pub struct TubularMap {
    pub domain: Domain,
    /// Tube half-thickness.
    pub rho: f64,
    /// Half-width of the corner blends (arclength).
    pub blend: f64,
    /// Sampled `min ν̂·ν` on the boundary.
    pub eta: f64,
    perimeter: f64,
    boundary: Boundary,
}

fn smooth(u: f64) -> (f64, f64) {
    let u = u.clamp(0.0, 1.0);
    (u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u))
}

/// Root of `h` in a sign-changing bracket by the Illinois variant of regula falsi.
fn illinois(h: &impl Fn(f64) -> f64, (mut a, mut fa): (f64, f64), (mut b, mut fb): (f64, f64)) -> f64 {
    let mut side = 0;
    for _ in 0..100 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = h(c);
        if fc == 0.0 {
            return c;
        }
        if fc.signum() == fb.signum() {
            (b, fb) = (c, fc);
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            (a, fa) = (c, fc);
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    if fa.abs() < fb.abs() { a } else { b }
}

fn cross(a: &Vector<2>, b: &Vector<2>) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub const RHO_FLOOR: f64 = 1e-4;

impl TubularMap {
    /// Builds the smoothed normal field and picks `ρ = blend / 2`, halved
    /// until the sampled round trip `Φ⁻¹ ∘ Φ` is the identity.
    pub fn new(domain: &Domain) -> Result<Self> {
        domain.validate()?;
        let inr = domain.inradius();
        let (boundary, blend, perimeter) = match domain {
            Domain::Disc { center, radius } => {
                (Boundary::Disc { center: Point::<2>::new(center[0], center[1]), radius: *radius }, 0.1 * inr, TAU * radius)
            }
            Domain::ConvexPolygon { .. } => {
                let edges = domain.edges();
                let mut starts = Vec::with_capacity(edges.len());
                let mut acc = 0.0;
                for (a, b) in &edges {
                    starts.push(acc);
                    acc += (b - a).norm();
                }
                let b = Boundary::Polygon {
                    vertices: edges.iter().map(|e| e.0).collect(),
                    normals: edges.iter().map(|(a, b)| Domain::edge_normal(a, b)).collect(),
                    tangents: edges.iter().map(|(a, b)| (b - a).normalize()).collect(),
                    starts,
                };
                (b, (0.1 * inr).min(0.25 * domain.shortest_edge()), acc)
            }
        };
        let mut tube = Self { domain: domain.clone(), rho: 0.5 * blend, blend, eta: 1.0, perimeter, boundary };
        if matches!(tube.boundary, Boundary::Polygon { .. }) {
            tube.eta = tube.sampled_eta(1000);
        }
        while !tube.round_trip_ok(400, 8) {
            tube.rho *= 0.5;
            if tube.rho < RHO_FLOOR {
                return Err(Error::InjectivityFailure(tube.rho));
            }
        }
        Ok(tube)
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// Edge index and position along it.
    fn edge_of(&self, sigma: f64) -> (usize, f64) {
        let s = sigma.rem_euclid(self.perimeter);
        match &self.boundary {
            Boundary::Polygon { starts, .. } => {
                let k = starts.partition_point(|&x| x <= s).saturating_sub(1);
                (k, s - starts[k])
            }
            Boundary::Disc { .. } => (0, s),
        }
    }

    pub fn point(&self, sigma: f64) -> Point<2> {
        match &self.boundary {
            Boundary::Disc { center, radius } => {
                let th = sigma / radius;
                center + Vector::<2>::new(th.cos(), th.sin()) * *radius
            }
            Boundary::Polygon { vertices, tangents, .. } => {
                let (k, l) = self.edge_of(sigma);
                vertices[k] + tangents[k] * l
            }
        }
    }

    pub fn tangent(&self, sigma: f64) -> Vector<2> {
        match &self.boundary {
            Boundary::Disc { radius, .. } => {
                let th = sigma / radius;
                Vector::<2>::new(-th.sin(), th.cos())
            }
            Boundary::Polygon { tangents, .. } => tangents[self.edge_of(sigma).0],
        }
    }

    /// Outward normal of the boundary (of the edge containing `σ`).
    pub fn true_normal(&self, sigma: f64) -> Vector<2> {
        match &self.boundary {
            Boundary::Disc { radius, .. } => {
                let th = sigma / radius;
                Vector::<2>::new(th.cos(), th.sin())
            }
            Boundary::Polygon { normals, .. } => normals[self.edge_of(sigma).0],
        }
    }

    /// `ν̂(σ)` and `dν̂/dσ`. On polygons the edge normals are blended by a
    /// cubic smoothstep over `[σ_v − a, σ_v + a]` around each corner `v`.
    pub fn smoothed_normal(&self, sigma: f64) -> (Vector<2>, Vector<2>) {
        match &self.boundary {
            Boundary::Disc { radius, .. } => {
                let th = sigma / radius;
                (Vector::<2>::new(th.cos(), th.sin()), Vector::<2>::new(-th.sin(), th.cos()) / *radius)
            }
            Boundary::Polygon { normals, starts, .. } => {
                let m = normals.len();
                let (k, l) = self.edge_of(sigma);
                let len = if k + 1 < m { starts[k + 1] - starts[k] } else { self.perimeter - starts[k] };
                let a = self.blend;
                let (na, nb, d) = if l < a {
                    (normals[(k + m - 1) % m], normals[k], l)
                } else if len - l < a {
                    (normals[k], normals[(k + 1) % m], l - len)
                } else {
                    return (normals[k], Vector::<2>::zeros());
                };
                let (lam, dlam) = smooth((d + a) / (2.0 * a));
                let w = na * (1.0 - lam) + nb * lam;
                let wn = w.norm();
                let n = w / wn;
                let dw = (nb - na) * (dlam / (2.0 * a));
                (n, (dw - n * n.dot(&dw)) / wn)
            }
        }
    }

    pub fn forward(&self, sigma: f64, t: f64) -> Point<2> {
        self.point(sigma) + self.smoothed_normal(sigma).0 * t
    }

    /// `det DΦ(σ, t)`.
    pub fn jacobian_det(&self, sigma: f64, t: f64) -> f64 {
        let (n, dn) = self.smoothed_normal(sigma);
        cross(&(self.tangent(sigma) + dn * t), &n)
    }

    /// `(σ, t)` with `Φ(σ, t) = y` and `|t| <= ρ`, if `y` is in the tube.
    /// Closed membership in Ω using the cached boundary data.
    pub fn inside(&self, y: &Point<2>) -> bool {
        match &self.boundary {
            Boundary::Disc { center, radius } => (y - center).norm_squared() <= radius * radius,
            Boundary::Polygon { vertices, normals, .. } => vertices.iter().zip(normals).all(|(v, n)| n.dot(&(y - v)) <= 0.0),
        }
    }

    pub fn inverse(&self, y: &Point<2>) -> Option<(f64, f64)> {
        let lim = self.rho * (1.0 + 1e-12);
        match &self.boundary {
            Boundary::Disc { center, radius } => {
                let d = y - center;
                let r = d.norm();
                let t = r - radius;
                (t.abs() <= lim && r > 0.0).then(|| (d[1].atan2(d[0]).rem_euclid(TAU) * radius, t))
            }
            Boundary::Polygon { vertices, normals, tangents, starts } => {
                let m = vertices.len();
                let a = self.blend;
                let mut best: Option<(f64, f64)> = None;
                let mut offer = |c: (f64, f64)| {
                    if c.1.abs() <= lim && best.is_none_or(|b| c.1.abs() < b.1.abs()) {
                        best = Some(c);
                    }
                };
                for k in 0..m {
                    let len = if k + 1 < m { starts[k + 1] - starts[k] } else { self.perimeter - starts[k] };
                    let rel = y - vertices[k];
                    let l = rel.dot(&tangents[k]);
                    if l >= a - 1e-12 && l <= len - a + 1e-12 {
                        offer((starts[k] + l, rel.dot(&normals[k])));
                    }
                    if rel.norm() < a + 2.0 * lim {
                        self.corner_roots(y, k, &mut offer);
                    }
                }
                best.map(|(s, t)| (s.rem_euclid(self.perimeter), t))
            }
        }
    }

    /// Roots of `σ ↦ (y − b(σ)) × ν̂(σ)` in the blend around vertex `k`,
    /// evaluated from the two adjacent edges without edge lookups.
    fn corner_roots(&self, y: &Point<2>, k: usize, offer: &mut impl FnMut((f64, f64))) {
        let Boundary::Polygon { vertices, normals, tangents, starts } = &self.boundary else { return };
        let m = vertices.len();
        let j = (k + m - 1) % m;
        let (v, sv, a) = (vertices[k], starts[k], self.blend);
        let (n0, n1, t0, t1) = (normals[j], normals[k], tangents[j], tangents[k]);
        let local = |d: f64| {
            let b = if d < 0.0 { v + t0 * d } else { v + t1 * d };
            let (lam, _) = smooth((d + a) / (2.0 * a));
            let w = n0 * (1.0 - lam) + n1 * lam;
            (b, w / w.norm())
        };
        let h = |d: f64| {
            let (b, n) = local(d);
            cross(&(y - b), &n)
        };
        let steps = 16;
        let mut d0 = -a;
        let mut h0 = h(d0);
        for i in 1..=steps {
            let d1 = -a + 2.0 * a * i as f64 / steps as f64;
            let h1 = h(d1);
            if h0 == 0.0 || h0.signum() != h1.signum() {
                let d = if h0 == 0.0 { d0 } else { illinois(&h, (d0, h0), (d1, h1)) };
                let (b, n) = local(d);
                offer((sv + d, (y - b).dot(&n)));
            }
            d0 = d1;
            h0 = h1;
        }
    }

    /// `min ν̂·ν` over `n` boundary points.
    pub fn sampled_eta(&self, n: usize) -> f64 {
        (0..n)
            .map(|i| {
                let s = self.perimeter * (i as f64 + 0.5) / n as f64;
                self.smoothed_normal(s).0.dot(&self.true_normal(s))
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Round trip and Jacobian sign on an `n × (2k+1)` grid of the tube.
    pub fn round_trip_ok(&self, n: usize, k: usize) -> bool {
        let sign = self.jacobian_det(0.5 * self.perimeter / n as f64, 0.0).signum();
        for i in 0..n {
            let s = self.perimeter * (i as f64 + 0.5) / n as f64;
            for j in 0..=2 * k {
                let t = self.rho * 0.999 * (j as f64 / k as f64 - 1.0);
                if self.jacobian_det(s, t) * sign <= 0.0 {
                    return false;
                }
                let y = self.forward(s, t);
                match self.inverse(&y) {
                    Some((s2, t2)) => {
                        let ds = (s2 - s).abs().min(self.perimeter - (s2 - s).abs());
                        if ds > 1e-9 || (t2 - t).abs() > 1e-9 {
                            return false;
                        }
                    }
                    None => return false,
                }
            }
        }
        true
    }

    /// `Φ(σ, −t)` for `y = Φ(σ, t)`.
    pub fn reflect(&self, y: &Point<2>) -> Option<Point<2>> {
        self.inverse(y).map(|(s, t)| self.forward(s, -t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_disc_normal_is_radial() {
        let t = TubularMap::new(&Domain::disc(Point::<2>::zeros(), 1.0)).unwrap();
        assert_eq!(t.eta, 1.0);
        for i in 0..100 {
            let s = TAU * i as f64 / 100.0;
            let x = t.point(s);
            assert!((t.smoothed_normal(s).0 - x).norm() < 1e-15);
        }
        let y = Point::<2>::new(0.0, 1.03);
        let (s, d) = t.inverse(&y).unwrap();
        assert!((s - TAU / 4.0).abs() < 1e-15 && (d - 0.03).abs() < 1e-15);
    }

    #[test]
    fn unit_square_blend() {
        let t = TubularMap::new(&Domain::unit_square()).unwrap();
        assert_eq!(t.blend, 0.05);
        assert_eq!(t.smoothed_normal(0.5).0, Vector::<2>::new(0.0, -1.0));
        assert_eq!(t.smoothed_normal(1.5).0, Vector::<2>::new(1.0, 0.0));
        assert!(t.eta >= std::f64::consts::FRAC_1_SQRT_2 - 1e-12);
        for k in 0..200 {
            let s = 1.0 - 0.05 + 0.1 * k as f64 / 199.0;
            assert!((t.smoothed_normal(s).0.norm() - 1.0).abs() < 1e-12);
        }
        assert!(t.round_trip_ok(400, 8));
        // Finite-difference check of dν̂/dσ inside a blend.
        let (s, h) = (0.98, 1e-6);
        let fd = (t.smoothed_normal(s + h).0 - t.smoothed_normal(s - h).0) / (2.0 * h);
        assert!((fd - t.smoothed_normal(s).1).norm() < 1e-6);
    }
}
