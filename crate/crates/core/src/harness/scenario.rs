use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::partition::patch::{CircleArc, Segment, Sphere};
use crate::partition::{AnalyticPartition, Classifier, Domain, InterfacePatch, LabelSet, PatchGeometry};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// Disc of radius 0.3 in the unit square.
    Circle,
    /// Vertical line `x = 0.5` across the unit square.
    Stripe,
    /// Three arms of length 1 at 120° in the unit disc.
    TripleJunction,
    /// Concentric circles of radii 0.15 and 0.3 in the unit square.
    Annuli,
    /// Ball of radius 0.3 in the unit cube.
    Sphere,
}

pub const ALL_2D: [ScenarioKind; 4] =
    [ScenarioKind::Circle, ScenarioKind::Stripe, ScenarioKind::TripleJunction, ScenarioKind::Annuli];

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Circle => "circle",
            ScenarioKind::Stripe => "stripe",
            ScenarioKind::TripleJunction => "triple-junction",
            ScenarioKind::Annuli => "annuli",
            ScenarioKind::Sphere => "sphere",
        }
    }

    pub fn dimension(self) -> usize {
        if self == ScenarioKind::Sphere {
            3
        } else {
            2
        }
    }

    /// Closed-form total interface measure inside Ω.
    pub fn exact_perimeter(self) -> f64 {
        match self {
            ScenarioKind::Circle => TAU * 0.3,
            ScenarioKind::Stripe => 1.0,
            ScenarioKind::TripleJunction => 3.0,
            ScenarioKind::Annuli => TAU * 0.45,
            ScenarioKind::Sphere => 4.0 * PI * 0.09,
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "circle" => ScenarioKind::Circle,
            "stripe" => ScenarioKind::Stripe,
            "triple-junction" | "triple" => ScenarioKind::TripleJunction,
            "annuli" => ScenarioKind::Annuli,
            "sphere" => ScenarioKind::Sphere,
            _ => return Err(Error::Parse(format!("unknown scenario {s:?}"))),
        })
    }
}

/// Orients each patch by probing the classifier on both sides.
fn assemble<const D: usize>(
    labels: LabelSet,
    cls: Arc<dyn Classifier<D>>,
    geoms: Vec<Arc<dyn PatchGeometry<D>>>,
    bounds: (Point<D>, Point<D>),
) -> Result<AnalyticPartition<D>> {
    let mut patches = Vec::with_capacity(geoms.len());
    for g in geoms {
        let (t, h) = ([0.5, 0.5], 1e-7);
        let (x, n) = (g.point(t), g.normal(t));
        let (plus, minus) = (cls.phase(&(x + n * h)), cls.phase(&(x - n * h)));
        patches.push(InterfacePatch::new(g, plus, minus));
    }
    AnalyticPartition::new(labels, cls, patches, bounds)
}

fn unit_square() -> (Point<2>, Point<2>) {
    (Point::<2>::zeros(), Point::<2>::repeat(1.0))
}

pub fn circle() -> AnalyticPartition<2> {
    let c = Point::<2>::new(0.5, 0.5);
    let cls = move |x: &Point<2>| if (x - c).norm() < 0.3 { 0 } else { 1 };
    assemble(LabelSet::unit_vectors(2), Arc::new(cls), vec![Arc::new(CircleArc::circle(c, 0.3))], unit_square())
        .expect("circle scenario")
        .with_domain(Domain::unit_square())
}

pub fn stripe() -> AnalyticPartition<2> {
    let cls = |x: &Point<2>| (x[0] >= 0.5) as usize;
    let seg = Segment { a: Point::<2>::new(0.5, 0.0), b: Point::<2>::new(0.5, 1.0) };
    assemble(LabelSet::unit_vectors(2), Arc::new(cls), vec![Arc::new(seg)], unit_square())
        .expect("stripe scenario")
        .with_domain(Domain::unit_square())
}

/// Arm directions of the triple junction, counter-clockwise from 90°.
pub fn triple_junction_arms() -> [f64; 3] {
    [PI / 2.0, PI / 2.0 + TAU / 3.0, PI / 2.0 + 2.0 * TAU / 3.0]
}

/// Phase `k` is the sector between arms `k−1` and `k` (cyclically), so
/// phases 0 and 2 meet along the arm at 330°.
pub fn triple_junction() -> AnalyticPartition<2> {
    let arms = triple_junction_arms();
    let cls = move |x: &Point<2>| {
        let a = (x[1].atan2(x[0]) - arms[0]).rem_euclid(TAU);
        if a < TAU / 3.0 {
            1
        } else if a < 2.0 * TAU / 3.0 {
            2
        } else {
            0
        }
    };
    let geoms: Vec<Arc<dyn PatchGeometry<2>>> = arms
        .iter()
        .map(|&th| Arc::new(Segment { a: Point::<2>::zeros(), b: Point::<2>::new(th.cos(), th.sin()) }) as Arc<dyn PatchGeometry<2>>)
        .collect();
    let dom = Domain::disc(Point::<2>::zeros(), 1.0);
    assemble(LabelSet::unit_vectors(3), Arc::new(cls), geoms, dom.bounding_box())
        .expect("triple junction scenario")
        .with_domain(dom)
}

pub fn annuli() -> AnalyticPartition<2> {
    let c = Point::<2>::new(0.5, 0.5);
    let cls = move |x: &Point<2>| {
        let r = (x - c).norm();
        if r < 0.15 {
            0
        } else if r < 0.3 {
            1
        } else {
            2
        }
    };
    let geoms: Vec<Arc<dyn PatchGeometry<2>>> = vec![Arc::new(CircleArc::circle(c, 0.15)), Arc::new(CircleArc::circle(c, 0.3))];
    assemble(LabelSet::unit_vectors(3), Arc::new(cls), geoms, unit_square())
        .expect("annuli scenario")
        .with_domain(Domain::unit_square())
}

pub fn sphere() -> AnalyticPartition<3> {
    let c = Point::<3>::repeat(0.5);
    let cls = move |x: &Point<3>| if (x - c).norm() < 0.3 { 0 } else { 1 };
    assemble(
        LabelSet::unit_vectors(2),
        Arc::new(cls),
        vec![Arc::new(Sphere { center: c, radius: 0.3 })],
        (Point::<3>::zeros(), Point::<3>::repeat(1.0)),
    )
    .expect("sphere scenario")
}

pub fn planar(kind: ScenarioKind) -> Result<AnalyticPartition<2>> {
    Ok(match kind {
        ScenarioKind::Circle => circle(),
        ScenarioKind::Stripe => stripe(),
        ScenarioKind::TripleJunction => triple_junction(),
        ScenarioKind::Annuli => annuli(),
        ScenarioKind::Sphere => return Err(Error::Invalid("the sphere scenario is three-dimensional".into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{energy_analytic, pairwise_perimeters_analytic, SurfaceEnergyDensity};

    #[test]
    fn scenarios_are_consistent() {
        for k in ALL_2D {
            let u = planar(k).unwrap();
            u.validate().unwrap();
            let e = energy_analytic(&u, &SurfaceEnergyDensity::unit()).unwrap();
            assert!((e - k.exact_perimeter()).abs() < 1e-10, "{k}");
            assert_eq!(k.name().parse::<ScenarioKind>().unwrap(), k);
        }
        let s = sphere();
        s.validate().unwrap();
        let e = energy_analytic(&s, &SurfaceEnergyDensity::unit()).unwrap();
        assert!((e - ScenarioKind::Sphere.exact_perimeter()).abs() < 1e-8);
    }

    #[test]
    fn triple_junction_pairs() {
        let u = triple_junction();
        let m = pairwise_perimeters_analytic(&u);
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            assert!((m[a][b] - 1.0).abs() < 1e-12);
        }
        // The arm at 330° separates phases 0 and 2.
        let th = triple_junction_arms()[2];
        let p = u.patches().iter().find(|p| (p.geometry.point([1.0, 0.0])[0] - th.cos()).abs() < 1e-12).unwrap();
        assert_eq!((p.plus.min(p.minus), p.plus.max(p.minus)), (0, 2));
    }
}
