//! Surface energies, pairwise perimeters and the change-of-variables pullback.

use crate::error::{Error, Result};
use crate::flatten::FlatteningMap;
use crate::geometry::{det, Facet, Point, Vector};
use crate::partition::patch::gauss_legendre;
use crate::partition::{AnalyticPartition, Domain, Param, PolyhedralPartition};
use std::fmt;
use std::sync::Arc;

type Density = dyn Fn(&[f64], usize, usize) -> f64 + Send + Sync;

/// `ψ(ν, z⁺, z⁻) >= 0`, continuous in `ν` and symmetric:
/// `ψ(ν, a, b) = ψ(−ν, b, a)`.
#[derive(Clone)]
pub struct SurfaceEnergyDensity {
    pub name: String,
    f: Arc<Density>,
}

impl fmt::Debug for SurfaceEnergyDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SurfaceEnergyDensity({})", self.name)
    }
}

impl SurfaceEnergyDensity {
    pub fn new(name: impl Into<String>, f: impl Fn(&[f64], usize, usize) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), f: Arc::new(f) }
    }

    /// `ψ ≡ 1`: the total perimeter.
    pub fn unit() -> Self {
        Self::new("unit", |_, _, _| 1.0)
    }

    /// `1 + c |ν·e₁|`.
    pub fn anisotropic(c: f64) -> Self {
        Self::new(format!("1+{c}|n.e1|"), move |n, _, _| 1.0 + c * n[0].abs())
    }

    /// 1 on interfaces between `a` and `b`, 0 elsewhere.
    pub fn pair(a: usize, b: usize) -> Self {
        Self::new(format!("pair({a},{b})"), move |_, p, m| ((p == a && m == b) || (p == b && m == a)) as u8 as f64)
    }

    pub fn eval(&self, normal: &[f64], plus: usize, minus: usize) -> f64 {
        (self.f)(normal, plus, minus)
    }

    /// Largest `|ψ(ν, a, b) − ψ(−ν, b, a)|` over the given probes.
    pub fn symmetry_defect(&self, probes: &[(Vec<f64>, usize, usize)]) -> f64 {
        probes
            .iter()
            .map(|(n, a, b)| {
                let m: Vec<f64> = n.iter().map(|c| -c).collect();
                (self.eval(n, *a, *b) - self.eval(&m, *b, *a)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Measure of the part of a facet inside `omega` (planar only; facets are segments).
fn facet_measure_in<const D: usize>(facet: &Facet<D>, omega: Option<&Domain>) -> f64 {
    match omega {
        Some(dom) if D == 2 => {
            let v = facet.vertices();
            let (a, b) = (Point::<2>::new(v[0][0], v[0][1]), Point::<2>::new(v[1][0], v[1][1]));
            dom.clip_segment(&a, &b).map_or(0.0, |(s0, s1)| (s1 - s0) * facet.area())
        }
        _ => facet.area(),
    }
}

/// `Σ ψ(ν, z⁺, z⁻) · area` over the jump facets of `w`.
pub fn energy_polyhedral<const D: usize>(w: &PolyhedralPartition<D>, psi: &SurfaceEnergyDensity) -> f64 {
    energy_polyhedral_in(w, psi, None)
}

/// Same, restricted to the facet parts inside `omega`.
pub fn energy_polyhedral_in<const D: usize>(
    w: &PolyhedralPartition<D>,
    psi: &SurfaceEnergyDensity,
    omega: Option<&Domain>,
) -> f64 {
    w.jump_facets()
        .iter()
        .map(|j| psi.eval(j.facet.normal().as_slice(), j.plus, j.minus) * facet_measure_in(&j.facet, omega))
        .sum()
}

/// Symmetric `N × N` matrix of interface measures per phase pair.
pub fn pairwise_perimeters<const D: usize>(w: &PolyhedralPartition<D>, omega: Option<&Domain>) -> Vec<Vec<f64>> {
    let n = w.n_phases();
    let mut m = vec![vec![0.0; n]; n];
    for j in w.jump_facets() {
        let a = facet_measure_in(&j.facet, omega);
        m[j.plus][j.minus] += a;
        m[j.minus][j.plus] += a;
    }
    m
}

/// Pair perimeters of the analytic partition, from its patches.
pub fn pairwise_perimeters_analytic<const D: usize>(u: &AnalyticPartition<D>) -> Vec<Vec<f64>> {
    let n = u.labels().len();
    let mut m = vec![vec![0.0; n]; n];
    for p in u.patches() {
        let a = p.geometry.measure();
        m[p.plus][p.minus] += a;
        m[p.minus][p.plus] += a;
    }
    m
}

const MAX_PANELS: usize = 1 << 14;
const RICHARDSON_TOL: f64 = 1e-8;
/// The pulled-back integrand is only piecewise smooth across the cutoff annuli.
const PULLBACK_TOL: f64 = 1e-6;

/// Composite 16-point Gauss–Legendre over the parameter domain of a patch
/// (`[0,1]` or `[0,1]²`), panels doubled from 4 per axis until two
/// successive values agree to `tol` relative.
fn integrate_patch<const D: usize>(tol: f64, mut f: impl FnMut(Param) -> Result<f64>) -> Result<f64> {
    let mut panels = 4;
    let mut prev = quad::<D>(&mut f, panels)?;
    loop {
        panels *= 2;
        let cur = quad::<D>(&mut f, panels)?;
        let err = (cur - prev).abs();
        if err <= tol * cur.abs() || err < 1e-300 {
            return Ok(cur);
        }
        if panels >= MAX_PANELS || (D == 3 && panels >= 256) {
            return Err(Error::QuadratureNotConverged(err / cur.abs().max(1e-300)));
        }
        prev = cur;
    }
}

fn quad<const D: usize>(f: &mut impl FnMut(Param) -> Result<f64>, panels: usize) -> Result<f64> {
    let mut err = None;
    let mut call = |t: Param| match f(t) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    };
    let v = if D == 2 {
        gauss_legendre(0.0, 1.0, panels, |s| call([s, 0.0]))
    } else {
        gauss_legendre(0.0, 1.0, panels, |s| gauss_legendre(0.0, 1.0, panels, |t| call([s, t])))
    };
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// `E[u] = Σ_patches ∫ ψ(ν, u⁺, u⁻) dH^{n-1}`.
pub fn energy_analytic<const D: usize>(u: &AnalyticPartition<D>, psi: &SurfaceEnergyDensity) -> Result<f64> {
    let mut total = 0.0;
    for p in u.patches() {
        let g = &p.geometry;
        total += integrate_patch::<D>(RICHARDSON_TOL, |t| Ok(psi.eval(g.normal(t).as_slice(), p.plus, p.minus) * g.area_element(t)))?;
    }
    Ok(total)
}

/// `E[u ∘ f]`: integrates over `f⁻¹(γ)` with normal `Dfᵀν / |Dfᵀν|` and
/// area element `|Dfᵀν| / |det Df| · |γ'|`.
pub fn energy_pullback<const D: usize>(
    u: &AnalyticPartition<D>,
    f: &FlatteningMap<D>,
    psi: &SurfaceEnergyDensity,
) -> Result<f64> {
    let mut total = 0.0;
    for p in u.patches() {
        let g = &p.geometry;
        total += integrate_patch::<D>(PULLBACK_TOL, |t| {
            let y = g.point(t);
            let nu: Vector<D> = g.normal(t);
            let x = f.inverse(&y)?;
            let jac = f.jacobian(&x);
            let w = jac.transpose() * nu;
            let len = w.norm();
            Ok(psi.eval((w / len).as_slice(), p.plus, p.minus) * len / det(&jac).abs() * g.area_element(t))
        })?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexPolytope;
    use crate::partition::{InterfacePatch, LabelSet};
    use crate::partition::patch::{CircleArc, Segment};

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> ConvexPolytope<2> {
        ConvexPolytope::from_box(&Point::<2>::new(x0, y0), &Point::<2>::new(x1, y1))
    }

    #[test]
    fn polyhedral_examples() {
        let w = PolyhedralPartition::from_cells(vec![rect(0.0, 0.0, 0.5, 1.0), rect(0.5, 0.0, 1.0, 1.0)], vec![0, 1], 2).unwrap();
        assert!((energy_polyhedral(&w, &SurfaceEnergyDensity::unit()) - 1.0).abs() < 1e-15);
        assert!((energy_polyhedral(&w, &SurfaceEnergyDensity::anisotropic(0.5)) - 1.5).abs() < 1e-15);
        assert_eq!(pairwise_perimeters(&w, None), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let cells = vec![rect(0.0, 0.0, 1.0, 1.0), rect(1.0, 0.0, 2.0, 1.0), rect(0.0, 1.0, 1.0, 2.0), rect(1.0, 1.0, 2.0, 2.0)];
        let c = PolyhedralPartition::from_cells(cells, vec![0, 1, 1, 0], 2).unwrap();
        assert!((energy_polyhedral(&c, &SurfaceEnergyDensity::unit()) - 4.0).abs() < 1e-14);
        let half = Domain::ConvexPolygon { vertices: vec![[0.0, 0.0], [2.0, 0.0], [2.0, 0.5], [0.0, 0.5]] };
        assert!((energy_polyhedral_in(&c, &SurfaceEnergyDensity::unit(), Some(&half)) - 0.5).abs() < 1e-14);
    }

    fn circle() -> AnalyticPartition<2> {
        let c = Point::<2>::new(0.5, 0.5);
        let patch = InterfacePatch::new(Arc::new(CircleArc::circle(c, 0.3)), 1, 0);
        let cls = move |x: &Point<2>| if (x - c).norm() < 0.3 { 0 } else { 1 };
        AnalyticPartition::new(LabelSet::unit_vectors(2), Arc::new(cls), vec![patch], (Point::<2>::zeros(), Point::<2>::repeat(1.0)))
            .unwrap()
    }

    #[test]
    fn analytic_examples() {
        let u = circle();
        let e = energy_analytic(&u, &SurfaceEnergyDensity::unit()).unwrap();
        assert!((e - std::f64::consts::TAU * 0.3).abs() < 1e-12);
        let a = energy_analytic(&u, &SurfaceEnergyDensity::anisotropic(0.5)).unwrap();
        assert!((a - (std::f64::consts::TAU * 0.3 + 0.6)).abs() / a < 1e-8);
        let seg = InterfacePatch::new(Arc::new(Segment { a: Point::<2>::new(0.5, 0.0), b: Point::<2>::new(0.5, 1.0) }), 1, 0);
        let s = AnalyticPartition::new(
            LabelSet::unit_vectors(2),
            Arc::new(|x: &Point<2>| (x[0] < 0.5) as usize),
            vec![seg],
            (Point::<2>::zeros(), Point::<2>::repeat(1.0)),
        )
        .unwrap();
        assert!((energy_analytic(&s, &SurfaceEnergyDensity::unit()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pullback_identity_is_exact() {
        let u = circle();
        let psi = SurfaceEnergyDensity::anisotropic(0.5);
        let id = FlatteningMap::identity(0.1);
        assert_eq!(energy_pullback(&u, &id, &psi).unwrap(), energy_analytic(&u, &psi).unwrap());
    }

    #[test]
    fn densities_are_symmetric() {
        let probes: Vec<(Vec<f64>, usize, usize)> =
            (0..32).map(|k| { let t = k as f64 * 0.37; (vec![t.cos(), t.sin()], k % 3, (k + 1) % 3) }).collect();
        for psi in [SurfaceEnergyDensity::unit(), SurfaceEnergyDensity::anisotropic(0.5), SurfaceEnergyDensity::pair(0, 2)] {
            assert!(psi.symmetry_defect(&probes) < 1e-12);
        }
    }
}
