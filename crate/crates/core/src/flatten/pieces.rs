use super::chart::Chart;
use crate::error::Result;
use crate::geometry::{Facet, FlatPolyhedron, Point, PolyhedronSet, Vector};
use crate::partition::{LabelSet, MeasureEntry, PolyhedralMeasure};
use std::f64::consts::{PI, TAU};

/// Flat pieces `P_i` of the charts with their jump data and the measure μ*.
#[derive(Clone, Debug)]
pub struct FlatPieces<const D: usize> {
    pub set: PolyhedronSet<D>,
    /// `(plus, minus)` per piece.
    pub jumps: Vec<(usize, usize)>,
    pub normals: Vec<Vector<D>>,
    /// `H^{D-1}(B'_{(1−ε)r} \ P̂)` per piece.
    pub deficits: Vec<f64>,
    pub mustar: PolyhedralMeasure<D>,
}

/// Smallest `m` such that the regular `m`-gon inscribed in the disc of
/// radius `(1−ε) r` misses at most `ε r²` of its area.
pub fn polygon_sides(eps: f64) -> usize {
    let rho2 = (1.0 - eps) * (1.0 - eps);
    let mut m = 3;
    while PI * rho2 - 0.5 * m as f64 * rho2 * (TAU / m as f64).sin() > eps {
        m += 1;
    }
    m
}

/// `I_y⁻¹(P̂ × {0})` for every chart: a centered interval of length
/// `2(1−ε) r` in 2D, an inscribed regular polygon in 3D.
pub fn flat_pieces<const D: usize>(charts: &[Chart<D>], eps: f64, labels: &LabelSet) -> Result<FlatPieces<D>> {
    let mut pieces = Vec::with_capacity(charts.len());
    let mut jumps = Vec::with_capacity(charts.len());
    let mut normals = Vec::with_capacity(charts.len());
    let mut deficits = Vec::with_capacity(charts.len());
    let mut entries = Vec::with_capacity(charts.len());
    let m = polygon_sides(eps);
    for ch in charts {
        let rho = (1.0 - eps) * ch.radius;
        let local: Vec<Point<D>> = if D == 2 {
            vec![Point::<D>::from_fn(|i, _| if i == 0 { -rho } else { 0.0 }), Point::<D>::from_fn(|i, _| if i == 0 { rho } else { 0.0 })]
        } else {
            (0..m)
                .map(|k| {
                    let th = TAU * k as f64 / m as f64;
                    Point::<D>::from_fn(|i, _| match i {
                        0 => rho * th.cos(),
                        1 => rho * th.sin(),
                        _ => 0.0,
                    })
                })
                .collect()
        };
        let verts: Vec<Point<D>> = local.iter().map(|p| ch.frame.apply_inverse(p)).collect();
        let nu = ch.normal();
        let facet = Facet::new(verts, nu)?;
        let deficit = if D == 2 { 0.0 } else { PI * rho * rho - facet.area() };
        entries.push(MeasureEntry::jump(facet.clone(), &labels.difference(ch.plus, ch.minus)));
        pieces.push(FlatPolyhedron::new(vec![facet], ch.frame.clone())?);
        jumps.push((ch.plus, ch.minus));
        normals.push(nu);
        deficits.push(deficit);
    }
    Ok(FlatPieces { set: PolyhedronSet::new(pieces)?, jumps, normals, deficits, mustar: PolyhedralMeasure::new(entries) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Isometry;
    use crate::partition::Graph;

    fn chart<const D: usize>(center: Point<D>, normal: Vector<D>, r: f64) -> Chart<D> {
        Chart {
            patch: 0,
            param: [0.5, 0.0],
            center,
            radius: r,
            frame: Isometry::aligning(&normal, &center),
            graph: Graph::Flat,
            plus: 1,
            minus: 0,
        }
    }

    #[test]
    fn interval_pieces() {
        let ch = chart(Point::<2>::new(0.5, 0.5), Vector::<2>::new(1.0, 0.0), 0.1);
        let fp = flat_pieces(&[ch], 0.1, &LabelSet::scalars(&[0.0, 1.0]).unwrap()).unwrap();
        assert!((fp.set.piece(0).area() - 0.18).abs() < 1e-15);
        assert_eq!(fp.deficits[0], 0.0);
        assert!((fp.mustar.total_variation() - 0.18).abs() < 1e-15);
        assert_eq!(fp.mustar.entries[0].facet.normal(), &Vector::<2>::new(1.0, 0.0));
    }

    #[test]
    fn polygon_side_count() {
        // 13 sides already miss less than ε r² = 0.1 for r = 1, ε = 0.1.
        assert_eq!(polygon_sides(0.1), 13);
        let def = |m: f64| PI * 0.81 - 0.5 * m * 0.81 * (TAU / m).sin();
        assert!(def(12.0) > 0.1 && def(13.0) <= 0.1 && def(14.0) <= 0.1);
        let ch = chart(Point::<3>::new(0.0, 0.0, 0.0), Vector::<3>::new(0.0, 0.6, 0.8), 1.0);
        let fp = flat_pieces(&[ch], 0.1, &LabelSet::unit_vectors(2)).unwrap();
        assert!(fp.deficits[0] <= 0.1 && fp.deficits[0] > 0.0);
        assert!((fp.deficits[0] - def(13.0)).abs() < 1e-12);
    }
}
