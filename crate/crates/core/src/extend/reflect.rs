use super::tube::TubularMap;
use crate::error::{Error, Result};
use crate::geometry::{Matrix, Point, Vector};
use crate::partition::patch::{gauss_legendre, panels_for, sampled_descriptor, CircleArc, Segment};
use crate::partition::{AnalyticPartition, Classifier, Domain, InterfacePatch, Param, PatchDescriptor, PatchGeometry};
use std::sync::Arc;

/// `ũ`: `u` on Ω, `u(Φ(σ, −t))` at `Φ(σ, t)` for `0 < t < ρ`, `z₀` beyond.
pub struct ReflectedClassifier {
    pub inner: Arc<dyn Classifier<2>>,
    pub tube: Arc<TubularMap>,
    pub z0: usize,
}

impl Classifier<2> for ReflectedClassifier {
    fn phase(&self, y: &Point<2>) -> usize {
        if self.tube.inside(y) {
            return self.inner.phase(y);
        }
        match self.tube.inverse(y) {
            Some((s, t)) if t > 0.0 && t < self.tube.rho => self.inner.phase(&self.tube.forward(s, -t)),
            _ => self.z0,
        }
    }
}

fn mat(c0: Vector<2>, c1: Vector<2>) -> Matrix<2> {
    Matrix::<2>::from_columns(&[c0, c1])
}

/// Reflection `Φ ∘ P ∘ Φ⁻¹` of the part `[t0, t1]` of a curve lying in the inner collar.
#[derive(Debug)]
pub struct ReflectedCurve {
    pub inner: Arc<dyn PatchGeometry<2>>,
    pub tube: Arc<TubularMap>,
    pub t0: f64,
    pub t1: f64,
}

impl ReflectedCurve {
    fn param(&self, t: Param) -> Param {
        [self.t0 + t[0] * (self.t1 - self.t0), 0.0]
    }
}

impl PatchGeometry<2> for ReflectedCurve {
    fn point(&self, t: Param) -> Point<2> {
        let x = self.inner.point(self.param(t));
        self.tube.reflect(&x).unwrap_or(x)
    }
    fn tangents(&self, t: Param) -> [Vector<2>; 2] {
        let p = self.param(t);
        let x = self.inner.point(p);
        let g = self.inner.tangents(p)[0] * (self.t1 - self.t0);
        let Some((s, h)) = self.tube.inverse(&x) else {
            return [g, Vector::<2>::zeros()];
        };
        let (n, dn) = self.tube.smoothed_normal(s);
        let b = self.tube.tangent(s);
        let a = mat(b + dn * h, n);
        let r = mat(b - dn * h, -n);
        let d = a.try_inverse().map_or(g, |ai| r * ai * g);
        [d, Vector::<2>::zeros()]
    }
    fn descriptor(&self) -> PatchDescriptor {
        sampled_descriptor(self, "reflected")
    }
}

/// Part `[s0, s1]` of the outer tube boundary `σ ↦ Φ(σ, ρ)`.
#[derive(Debug)]
pub struct TubeCurve {
    pub tube: Arc<TubularMap>,
    pub s0: f64,
    pub s1: f64,
}

impl PatchGeometry<2> for TubeCurve {
    fn point(&self, t: Param) -> Point<2> {
        self.tube.forward(self.s0 + t[0] * (self.s1 - self.s0), self.tube.rho)
    }
    fn tangents(&self, t: Param) -> [Vector<2>; 2] {
        let s = self.s0 + t[0] * (self.s1 - self.s0);
        let dn = self.tube.smoothed_normal(s).1;
        [(self.tube.tangent(s) + dn * self.tube.rho) * (self.s1 - self.s0), Vector::<2>::zeros()]
    }
    fn descriptor(&self) -> PatchDescriptor {
        sampled_descriptor(self, "tube")
    }
    fn measure_between(&self, a: f64, b: f64) -> f64 {
        // The blends are only C1; panel count keeps the kinks of ν̂' resolved.
        gauss_legendre(a, b, panels_for(a, b, 64), |t| self.area_element([t, 0.0]))
    }
}

/// Labels on the two sides of a patch, probed at its midpoint.
pub fn probe_sides(cls: &dyn Classifier<2>, g: &dyn PatchGeometry<2>) -> Result<(usize, usize)> {
    let t = [0.5, 0.0];
    let x = g.point(t);
    let n = g.normal(t);
    let h = 1e-7;
    let (p, m) = (cls.phase(&(x + n * h)), cls.phase(&(x - n * h)));
    if p == m {
        return Err(Error::Invalid(format!("patch without a jump near {x:?}")));
    }
    Ok((p, m))
}

/// Result of [`reflect_extend`].
#[derive(Clone, Debug)]
pub struct Extension {
    pub partition: AnalyticPartition<2>,
    pub tube: Arc<TubularMap>,
    pub z0: usize,
    /// Patches added by reflection (merged segments count once).
    pub reflected: usize,
    /// Patches added on the outer tube boundary.
    pub outer: usize,
}

/// Maximal parameter runs of a curve inside the inner collar `−ρ < t <= 0`.
fn collar_runs(g: &dyn PatchGeometry<2>, tube: &TubularMap) -> Vec<(f64, f64)> {
    let inside = |tau: f64| {
        let x = g.point([tau, 0.0]);
        tube.domain.contains(&x) && tube.inverse(&x).is_some_and(|(_, t)| t > -tube.rho)
    };
    let n = 2048;
    let flags: Vec<bool> = (0..=n).map(|i| inside(i as f64 / n as f64)).collect();
    let edge = |lo: f64, hi: f64, lo_in: bool| {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if inside(m) == lo_in {
                a = m;
            } else {
                b = m;
            }
        }
        if lo_in {
            a
        } else {
            b
        }
    };
    let mut runs = Vec::new();
    let mut i = 0;
    while i <= n {
        if !flags[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && flags[i + 1] {
            i += 1;
        }
        let t0 = if start == 0 { 0.0 } else { edge((start - 1) as f64 / n as f64, start as f64 / n as f64, false) };
        let t1 = if i == n { 1.0 } else { edge(i as f64 / n as f64, (i + 1) as f64 / n as f64, true) };
        if t1 > t0 {
            runs.push((t0, t1));
        }
        i += 1;
    }
    runs
}

fn pt(v: &[f64]) -> Point<2> {
    Point::<2>::new(v[0], v[1])
}

/// Extends `u` from Ω to the plane by reflection through the collar and a
/// constant label `z₀` beyond it. `z₀` is the label occupying most of the
/// outer tube boundary (lowest index on ties).
pub fn reflect_extend(u: &AnalyticPartition<2>, tube: Arc<TubularMap>) -> Result<Extension> {
    let inner = u.classifier();
    let rho = tube.rho;
    let per = tube.perimeter();

    // Labels along the outer boundary, read at depth ρ inside Ω.
    let label = |s: f64| inner.phase(&tube.forward(s, -rho));
    let n = 4096;
    let mut breaks = Vec::new();
    let mut prev = label(0.0);
    for i in 1..=n {
        let s1 = per * i as f64 / n as f64;
        let cur = label(s1);
        if cur != prev {
            let (mut a, mut b) = (per * (i - 1) as f64 / n as f64, s1);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if label(m) == prev {
                    a = m;
                } else {
                    b = m;
                }
            }
            breaks.push(0.5 * (a + b));
        }
        prev = cur;
    }
    let outer_len = |a: f64, b: f64| {
        gauss_legendre(a, b, 64, |s| (tube.tangent(s) + tube.smoothed_normal(s).1 * rho).norm())
    };
    // Runs (s0, s1, label) covering one period.
    let runs: Vec<(f64, f64, usize)> = if breaks.is_empty() {
        vec![(0.0, per, label(0.5 * per))]
    } else {
        let m = breaks.len();
        (0..m)
            .map(|k| {
                let s0 = breaks[k];
                let s1 = if k + 1 < m { breaks[k + 1] } else { breaks[0] + per };
                (s0, s1, label(0.5 * (s0 + s1)))
            })
            .collect()
    };
    let mut mass = vec![0.0; u.labels().len()];
    for &(s0, s1, z) in &runs {
        mass[z] += outer_len(s0, s1);
    }
    let mut z0 = 0;
    for (z, &m) in mass.iter().enumerate() {
        if m > mass[z0] {
            z0 = z;
        }
    }
    let cls: Arc<dyn Classifier<2>> = Arc::new(ReflectedClassifier { inner: inner.clone(), tube: tube.clone(), z0 });

    let mut patches = Vec::new();
    let mut reflected = 0;
    for p in u.patches() {
        let g = p.geometry.clone();
        let runs = collar_runs(g.as_ref(), &tube);
        if runs.is_empty() {
            patches.push(p.clone());
            continue;
        }
        // Straight segments whose reflected ends stay on their line are extended in place.
        if let PatchDescriptor::Segment { a, b } = g.descriptor() {
            let (a, b) = (pt(&a), pt(&b));
            let dir = (b - a).normalize();
            let off_line = |x: &Point<2>| {
                let r = x - a;
                (r - dir * r.dot(&dir)).norm()
            };
            let mut ends = (a, b);
            let mut straight = true;
            for &(t0, t1) in &runs {
                let rc = ReflectedCurve { inner: g.clone(), tube: tube.clone(), t0, t1 };
                if (0..=4).any(|k| off_line(&rc.point([k as f64 / 4.0, 0.0])) > 1e-12) {
                    straight = false;
                    break;
                }
                if t0 == 0.0 {
                    ends.0 = rc.point([1.0, 0.0]);
                } else if t1 == 1.0 {
                    ends.1 = rc.point([0.0, 0.0]);
                } else {
                    straight = false;
                    break;
                }
            }
            if straight {
                patches.push(InterfacePatch::new(Arc::new(Segment { a: ends.0, b: ends.1 }), p.plus, p.minus));
                reflected += 1;
                continue;
            }
        }
        patches.push(p.clone());
        for (t0, t1) in runs {
            let rc: Arc<dyn PatchGeometry<2>> = Arc::new(ReflectedCurve { inner: g.clone(), tube: tube.clone(), t0, t1 });
            let (plus, minus) = probe_sides(cls.as_ref(), rc.as_ref())?;
            patches.push(InterfacePatch::new(rc, plus, minus));
            reflected += 1;
        }
    }

    let mut outer = 0;
    for &(s0, s1, z) in &runs {
        if z == z0 {
            continue;
        }
        let geom: Arc<dyn PatchGeometry<2>> = match &tube.domain {
            Domain::Disc { center, radius } => Arc::new(CircleArc {
                center: pt(center),
                radius: radius + rho,
                theta0: s0 / radius,
                theta1: s1 / radius,
            }),
            Domain::ConvexPolygon { .. } => Arc::new(TubeCurve { tube: tube.clone(), s0, s1 }),
        };
        let (plus, minus) = probe_sides(cls.as_ref(), geom.as_ref())?;
        patches.push(InterfacePatch::new(geom, plus, minus));
        outer += 1;
    }

    let (lo, hi) = tube.domain.bounding_box();
    let pad = 2.0 * rho;
    let bounds = (lo.add_scalar(-pad).inf(&u.bounds().0), hi.add_scalar(pad).sup(&u.bounds().1));
    let partition = AnalyticPartition::new(u.labels().clone(), cls, patches, bounds)?.with_domain(tube.domain.clone());
    Ok(Extension { partition, tube, z0, reflected, outer })
}

/// Boundary points (out of `n`) where the two one-sided limits of `ũ`
/// along `±ν̂` differ.
pub fn created_jump_count(ext: &Extension, n: usize) -> usize {
    let h = 1e-9;
    (0..n)
        .filter(|&i| {
            let s = ext.tube.perimeter() * (i as f64 + 0.5) / n as f64;
            let x = ext.tube.point(s);
            let nu = ext.tube.smoothed_normal(s).0;
            ext.partition.phase(&(x + nu * h)) != ext.partition.phase(&(x - nu * h))
        })
        .count()
}

/// Whether `ũ = u` on the points of a `k × k` lattice that lie in Ω.
pub fn agrees_on_domain(ext: &Extension, u: &AnalyticPartition<2>, k: usize) -> bool {
    let (lo, hi) = ext.tube.domain.bounding_box();
    (0..k * k).all(|i| {
        let x = Point::<2>::new(
            lo[0] + (hi[0] - lo[0]) * ((i % k) as f64 + 0.5) / k as f64,
            lo[1] + (hi[1] - lo[1]) * ((i / k) as f64 + 0.5) / k as f64,
        );
        !ext.tube.domain.contains(&x) || ext.partition.phase(&x) == u.phase(&x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::LabelSet;

    fn half_plane(dom: Domain, a: Point<2>, b: Point<2>) -> AnalyticPartition<2> {
        let d = b - a;
        let cls = move |x: &Point<2>| {
            let r = x - a;
            (d[0] * r[1] - d[1] * r[0] > 0.0) as usize
        };
        let (lo, hi) = dom.bounding_box();
        // Segment normal is the clockwise rotation of b − a, pointing to label 0.
        AnalyticPartition::new(LabelSet::unit_vectors(2), Arc::new(cls), vec![InterfacePatch::new(Arc::new(Segment { a, b }), 0, 1)], (lo, hi))
            .unwrap()
            .with_domain(dom)
    }

    #[test]
    fn constant_partition_has_no_new_interface() {
        let dom = Domain::disc(Point::<2>::zeros(), 1.0);
        let u = AnalyticPartition::new(
            LabelSet::unit_vectors(2),
            Arc::new(|_: &Point<2>| 1usize),
            Vec::new(),
            dom.bounding_box(),
        )
        .unwrap();
        let ext = reflect_extend(&u, Arc::new(TubularMap::new(&dom).unwrap())).unwrap();
        assert_eq!((ext.z0, ext.outer, ext.reflected), (1, 0, 0));
        assert_eq!(created_jump_count(&ext, 1000), 0);
    }

    #[test]
    fn disc_diameter_extends_radially() {
        let dom = Domain::disc(Point::<2>::zeros(), 1.0);
        let u = half_plane(dom.clone(), Point::<2>::new(-1.0, 0.0), Point::<2>::new(1.0, 0.0));
        u.validate().unwrap();
        let tube = Arc::new(TubularMap::new(&dom).unwrap());
        let ext = reflect_extend(&u, tube.clone()).unwrap();
        assert_eq!(ext.reflected, 1);
        assert_eq!(ext.outer, 1);
        assert_eq!(ext.z0, 0);
        let seg = &ext.partition.patches()[0].geometry;
        assert!((seg.point([0.0, 0.0]) - Point::<2>::new(-1.0 - tube.rho, 0.0)).norm() < 1e-15);
        assert!((seg.point([1.0, 0.0]) - Point::<2>::new(1.0 + tube.rho, 0.0)).norm() < 1e-15);
        ext.partition.validate().unwrap();
        assert_eq!(created_jump_count(&ext, 1000), 0);
        assert!(agrees_on_domain(&ext, &u, 100));
    }

    #[test]
    fn square_with_oblique_interface() {
        let dom = Domain::unit_square();
        let u = half_plane(dom.clone(), Point::<2>::new(0.2, 0.0), Point::<2>::new(0.7, 1.0));
        let tube = Arc::new(TubularMap::new(&dom).unwrap());
        let ext = reflect_extend(&u, tube).unwrap();
        assert_eq!(ext.reflected, 2);
        ext.partition.validate().unwrap();
        assert_eq!(created_jump_count(&ext, 1000), 0);
        assert!(agrees_on_domain(&ext, &u, 100));
        // Reflected pieces meet the original at the boundary.
        let p = ext.partition.patches();
        let ends: Vec<Point<2>> = p[1..3].iter().flat_map(|q| [q.geometry.point([0.0, 0.0]), q.geometry.point([1.0, 0.0])]).collect();
        assert!(ends.iter().any(|e| (e - Point::<2>::new(0.2, 0.0)).norm() < 1e-9));
        assert!(ends.iter().any(|e| (e - Point::<2>::new(0.7, 1.0)).norm() < 1e-9));
    }

    #[test]
    fn square_stripe_merges_into_one_segment() {
        let dom = Domain::unit_square();
        let u = half_plane(dom.clone(), Point::<2>::new(0.5, 0.0), Point::<2>::new(0.5, 1.0));
        let ext = reflect_extend(&u, Arc::new(TubularMap::new(&dom).unwrap())).unwrap();
        assert_eq!((ext.reflected, ext.outer), (1, 1));
        ext.partition.validate().unwrap();
        assert_eq!(created_jump_count(&ext, 1000), 0);
    }
}
