use super::labels::LabelSet;
use super::polyhedral::PolyhedralPartition;
use crate::error::{Error, Result};
use crate::geometry::{AabbTree, Facet, Vector};
use serde::{Deserialize, Serialize};

/// One term `W H^{D-1}⌞facet` of a polyhedral measure; `weight` is the
/// `N × D` matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureEntry<const D: usize> {
    pub facet: Facet<D>,
    pub weight: Vec<f64>,
}

impl<const D: usize> MeasureEntry<D> {
    /// `(z⁺ − z⁻) ⊗ ν`.
    pub fn jump(facet: Facet<D>, dz: &[f64]) -> Self {
        let n: Vector<D> = *facet.normal();
        let weight = dz.iter().flat_map(|&z| n.iter().map(move |&c| z * c)).collect();
        Self { facet, weight }
    }

    pub fn weight_norm(&self) -> f64 {
        self.weight.iter().map(|w| w * w).sum::<f64>().sqrt()
    }
}

/// Finite sum of matrix-weighted facet measures with non-overlapping facets.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PolyhedralMeasure<const D: usize> {
    pub entries: Vec<MeasureEntry<D>>,
}

impl<const D: usize> PolyhedralMeasure<D> {
    pub fn new(entries: Vec<MeasureEntry<D>>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Σ |W_k|_F · area_k.
    pub fn total_variation(&self) -> f64 {
        self.entries.iter().map(|e| e.weight_norm() * e.facet.area()).sum()
    }

    fn tree(&self) -> AabbTree<D> {
        AabbTree::new(
            self.entries
                .iter()
                .map(|e| {
                    let (lo, hi) = e.facet.bounding_box();
                    (lo.add_scalar(-1e-9), hi.add_scalar(1e-9))
                })
                .collect(),
        )
    }

    /// Pairs `(i, j, overlap)` of coplanar overlapping facets of `self` and `other`.
    fn overlaps(&self, other: &Self) -> Result<Vec<(usize, usize, f64)>> {
        let tree = other.tree();
        let mut out = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            let (lo, hi) = e.facet.bounding_box();
            for j in tree.query(&lo.add_scalar(-1e-9), &hi.add_scalar(1e-9)) {
                let f = &other.entries[j].facet;
                let ov = e.facet.overlap(f);
                if ov > 0.0 {
                    let cap = e.facet.area().min(f.area());
                    if ov > cap * (1.0 + 1e-9) + 1e-15 {
                        return Err(Error::OverlayFailure(format!("overlap {ov:e} exceeds facet area {cap:e}")));
                    }
                    out.push((i, j, ov.min(cap)));
                }
            }
        }
        Ok(out)
    }
}

fn diff_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `Dw` of a polyhedral partition: one entry `(z⁺ − z⁻) ⊗ ν` per jump facet.
pub fn jump_measure<const D: usize>(p: &PolyhedralPartition<D>, labels: &LabelSet) -> PolyhedralMeasure<D> {
    PolyhedralMeasure::new(
        p.jump_facets()
            .iter()
            .map(|j| MeasureEntry::jump(j.facet.clone(), &labels.difference(j.plus, j.minus)))
            .collect(),
    )
}

/// Total variation of `a − b`. Overlapping coplanar parts contribute
/// `|W_a − W_b| · area`, the rest `|W| · area`.
pub fn measure_difference_tv<const D: usize>(a: &PolyhedralMeasure<D>, b: &PolyhedralMeasure<D>) -> Result<f64> {
    let mut tv = a.total_variation() + b.total_variation();
    let scale = tv;
    for (i, j, ov) in a.overlaps(b)? {
        let (wa, wb) = (&a.entries[i], &b.entries[j]);
        tv += (diff_norm(&wa.weight, &wb.weight) - wa.weight_norm() - wb.weight_norm()) * ov;
    }
    if tv < -1e-9 * scale.max(1.0) {
        return Err(Error::OverlayFailure(format!("negative total variation {tv:e}")));
    }
    Ok(tv.max(0.0))
}

/// Total variation of `a − b` restricted to the support of `a`.
pub fn restricted_difference_tv<const D: usize>(a: &PolyhedralMeasure<D>, b: &PolyhedralMeasure<D>) -> Result<f64> {
    let mut covered = vec![0.0; a.len()];
    let mut tv = 0.0;
    for (i, j, ov) in a.overlaps(b)? {
        tv += diff_norm(&a.entries[i].weight, &b.entries[j].weight) * ov;
        covered[i] += ov;
    }
    for (e, c) in a.entries.iter().zip(covered) {
        tv += e.weight_norm() * (e.facet.area() - c).max(0.0);
    }
    Ok(tv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ConvexPolytope, Point};

    fn seg(x0: f64, y0: f64, x1: f64, y1: f64) -> Facet<2> {
        Facet::segment(Point::<2>::new(x0, y0), Point::<2>::new(x1, y1)).unwrap()
    }

    #[test]
    fn split_square_measure() {
        let cells = vec![
            ConvexPolytope::from_box(&Point::<2>::zeros(), &Point::<2>::new(0.5, 1.0)),
            ConvexPolytope::from_box(&Point::<2>::new(0.5, 0.0), &Point::<2>::repeat(1.0)),
        ];
        let p = PolyhedralPartition::from_cells(cells, vec![0, 1], 2).unwrap();
        let m = jump_measure(&p, &LabelSet::unit_vectors(2));
        assert_eq!(m.len(), 1);
        assert!((m.entries[0].weight_norm() - 2f64.sqrt()).abs() < 1e-15);
        assert!((m.total_variation() - 2f64.sqrt()).abs() < 1e-15);
        let single = PolyhedralPartition::from_cells(vec![ConvexPolytope::from_box(&Point::<2>::zeros(), &Point::<2>::repeat(1.0))], vec![0], 1).unwrap();
        assert_eq!(jump_measure(&single, &LabelSet::unit_vectors(1)).total_variation(), 0.0);
    }

    #[test]
    fn difference_examples() {
        let w = vec![1.0, 0.0, 0.0, 0.0];
        let a = PolyhedralMeasure::new(vec![MeasureEntry { facet: seg(0.0, 0.0, 1.0, 0.0), weight: w.clone() }]);
        assert_eq!(measure_difference_tv(&a, &a).unwrap(), 0.0);
        let zero = PolyhedralMeasure::new(vec![MeasureEntry { facet: seg(0.0, 0.0, 1.0, 0.0), weight: vec![0.0; 4] }]);
        assert!((measure_difference_tv(&a, &zero).unwrap() - 1.0).abs() < 1e-15);
        let far = PolyhedralMeasure::new(vec![MeasureEntry { facet: seg(0.0, 1.0, 1.0, 1.0), weight: w.clone() }]);
        assert!((measure_difference_tv(&a, &far).unwrap() - 2.0).abs() < 1e-15);
        // Reversed orientation with the opposite jump is the same measure.
        let flipped = PolyhedralMeasure::new(vec![MeasureEntry::jump(seg(1.0, 0.0, 0.0, 0.0), &[0.0, -1.0])]);
        let direct = PolyhedralMeasure::new(vec![MeasureEntry::jump(seg(0.0, 0.0, 1.0, 0.0), &[0.0, 1.0])]);
        assert!(measure_difference_tv(&flipped, &direct).unwrap() < 1e-15);
        // Partial cover: a on [0,1], b on [0.25, 0.5] with the same weight.
        let part = PolyhedralMeasure::new(vec![MeasureEntry { facet: seg(0.25, 0.0, 0.5, 0.0), weight: w }]);
        assert!((measure_difference_tv(&a, &part).unwrap() - 0.75).abs() < 1e-15);
        assert!((restricted_difference_tv(&part, &a).unwrap()).abs() < 1e-15);
        assert!((restricted_difference_tv(&a, &part).unwrap() - 0.75).abs() < 1e-15);
    }
}
