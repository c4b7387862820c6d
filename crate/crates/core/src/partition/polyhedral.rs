use crate::error::Result;
use crate::geometry::facet::{clip_convex, polygon_area};
use crate::geometry::polytope::is_box_source;
use crate::geometry::{tangent_basis, ConvexPolytope, Facet, KdTree, Point};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Interface facet between a `minus` cell and a `plus` cell; the facet
/// normal points from the minus cell into the plus cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpFacet<const D: usize> {
    pub facet: Facet<D>,
    pub plus: usize,
    pub minus: usize,
    /// `(minus cell, plus cell)`.
    pub cells: (usize, usize),
}

#[derive(Clone, Debug, Default)]
struct Locator<const D: usize>(OnceLock<KdTree<D>>);

impl<const D: usize> PartialEq for Locator<D> {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

/// Labeled convex cells with their derived jump facets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyhedralPartition<const D: usize> {
    cells: Vec<ConvexPolytope<D>>,
    phases: Vec<usize>,
    n_phases: usize,
    jump_facets: Vec<JumpFacet<D>>,
    /// Voronoi generators, when the cells form a Voronoi tessellation.
    generators: Option<Vec<Point<D>>>,
    #[serde(skip)]
    locator: Locator<D>,
}

impl<const D: usize> PolyhedralPartition<D> {
    /// Cells of a Voronoi tessellation whose face sources are neighbor indices.
    pub fn from_voronoi(
        cells: Vec<ConvexPolytope<D>>,
        generators: Vec<Point<D>>,
        phases: Vec<usize>,
        n_phases: usize,
    ) -> Self {
        let mut jump_facets = Vec::new();
        for (q, cell) in cells.iter().enumerate() {
            for (k, face) in cell.faces().iter().enumerate() {
                let s = face.source;
                if is_box_source(s) || s <= q || phases[s] == phases[q] {
                    continue;
                }
                if let Ok(facet) = cell.face_facet(k) {
                    jump_facets.push(JumpFacet { facet, plus: phases[s], minus: phases[q], cells: (q, s) });
                }
            }
        }
        Self { cells, phases, n_phases, jump_facets, generators: Some(generators), locator: Locator::default() }
    }

    /// Arbitrary interior-disjoint cells; adjacency found by matching
    /// coplanar, oppositely oriented faces (quadratic in the cell count).
    pub fn from_cells(cells: Vec<ConvexPolytope<D>>, phases: Vec<usize>, n_phases: usize) -> Result<Self> {
        let mut jump_facets = Vec::new();
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                if phases[i] == phases[j] {
                    continue;
                }
                for (ki, fi) in cells[i].faces().iter().enumerate() {
                    for (kj, fj) in cells[j].faces().iter().enumerate() {
                        let n = fi.plane.normal;
                        if n.dot(&fj.plane.normal) > -1.0 + 1e-9 || (fi.plane.offset + fj.plane.offset).abs() > 1e-9 {
                            continue;
                        }
                        let a = cells[i].face_facet(ki)?;
                        let b = cells[j].face_facet(kj)?;
                        if let Some(facet) = shared_part(&a, &b) {
                            jump_facets.push(JumpFacet { facet, plus: phases[j], minus: phases[i], cells: (i, j) });
                        }
                    }
                }
            }
        }
        Ok(Self { cells, phases, n_phases, jump_facets, generators: None, locator: Locator::default() })
    }

    pub fn cells(&self) -> &[ConvexPolytope<D>] {
        &self.cells
    }

    pub fn phases(&self) -> &[usize] {
        &self.phases
    }

    pub fn n_phases(&self) -> usize {
        self.n_phases
    }

    pub fn jump_facets(&self) -> &[JumpFacet<D>] {
        &self.jump_facets
    }

    pub fn generators(&self) -> Option<&[Point<D>]> {
        self.generators.as_deref()
    }

    /// Phase at `x` (nearest generator, or the first containing cell).
    pub fn phase_at(&self, x: &Point<D>) -> Option<usize> {
        if let Some(g) = &self.generators {
            let tree = self.locator.0.get_or_init(|| KdTree::new(g.clone()));
            return tree.nearest(x).map(|(i, _)| self.phases[i]);
        }
        self.cells.iter().position(|c| c.contains(x, 0.0)).map(|i| self.phases[i])
    }

    pub fn total_volume(&self) -> f64 {
        self.cells.iter().map(ConvexPolytope::volume).sum()
    }

    /// Volume of each phase.
    pub fn phase_volumes(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.n_phases];
        for (c, &p) in self.cells.iter().zip(&self.phases) {
            v[p] += c.volume();
        }
        v
    }

    /// Total measure of the jump facets.
    pub fn interface_measure(&self) -> f64 {
        self.jump_facets.iter().map(|j| j.facet.area()).sum()
    }
}

/// Common part of two coplanar facets as a facet oriented like `a`.
fn shared_part<const D: usize>(a: &Facet<D>, b: &Facet<D>) -> Option<Facet<D>> {
    if D == 2 {
        let t = tangent_basis(a.normal())[0];
        let o = a.vertices()[0];
        let s = |p: &Point<D>| (p - o).dot(&t);
        let (a0, a1) = (s(&a.vertices()[0]), s(&a.vertices()[1]));
        let (b0, b1) = (s(&b.vertices()[0]), s(&b.vertices()[1]));
        let lo = a0.min(a1).max(b0.min(b1));
        let hi = a0.max(a1).min(b0.max(b1));
        if hi - lo <= 1e-12 {
            return None;
        }
        let (p, q) = (o + t * lo, o + t * hi);
        // Keep the orientation of `a`: its normal is the clockwise rotation of the tangent.
        let ordered = if a0 <= a1 { vec![p, q] } else { vec![q, p] };
        return Facet::new(ordered, *a.normal()).ok();
    }
    let basis = tangent_basis(a.normal());
    let o = a.vertices()[0];
    let local = |p: &Point<D>| ((p - o).dot(&basis[0]), (p - o).dot(&basis[1]));
    let pa: Vec<(f64, f64)> = a.vertices().iter().map(local).collect();
    let mut pb: Vec<(f64, f64)> = b.vertices().iter().map(local).collect();
    if polygon_area(&pb) < 0.0 {
        pb.reverse();
    }
    let poly = clip_convex(&pa, &pb)?;
    if polygon_area(&poly) <= 1e-18 {
        return None;
    }
    let pts = poly.iter().map(|&(u, v)| o + basis[0] * u + basis[1] * v).collect();
    Facet::new(pts, *a.normal()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> ConvexPolytope<2> {
        ConvexPolytope::from_box(&Point::<2>::new(x0, y0), &Point::<2>::new(x1, y1))
    }

    #[test]
    fn split_square() {
        let p = PolyhedralPartition::from_cells(vec![rect(0.0, 0.0, 0.5, 1.0), rect(0.5, 0.0, 1.0, 1.0)], vec![0, 1], 2).unwrap();
        assert_eq!(p.jump_facets().len(), 1);
        let j = &p.jump_facets()[0];
        assert!((j.facet.area() - 1.0).abs() < 1e-15);
        assert!((j.facet.normal()[0] - 1.0).abs() < 1e-15);
        assert_eq!((j.minus, j.plus), (0, 1));
        assert_eq!(p.phase_volumes(), vec![0.5, 0.5]);
    }

    #[test]
    fn checkerboard() {
        let cells = vec![rect(0.0, 0.0, 1.0, 1.0), rect(1.0, 0.0, 2.0, 1.0), rect(0.0, 1.0, 1.0, 2.0), rect(1.0, 1.0, 2.0, 2.0)];
        let p = PolyhedralPartition::from_cells(cells, vec![0, 1, 1, 0], 2).unwrap();
        assert_eq!(p.jump_facets().len(), 4);
        assert!((p.interface_measure() - 4.0).abs() < 1e-14);
        assert_eq!(p.phase_at(&Point::<2>::new(1.5, 0.5)), Some(1));
    }

    #[test]
    fn cubes_share_a_face() {
        let a = ConvexPolytope::<3>::from_box(&Point::<3>::zeros(), &Point::<3>::repeat(1.0));
        let b = ConvexPolytope::<3>::from_box(&Point::<3>::new(1.0, 0.5, 0.0), &Point::<3>::new(2.0, 1.5, 1.0));
        let p = PolyhedralPartition::from_cells(vec![a, b], vec![1, 0], 2).unwrap();
        assert_eq!(p.jump_facets().len(), 1);
        assert!((p.jump_facets()[0].facet.area() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn serde_round_trip() {
        let p = PolyhedralPartition::from_cells(vec![rect(0.0, 0.0, 0.5, 1.0), rect(0.5, 0.0, 1.0, 1.0)], vec![0, 1], 2).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let q: PolyhedralPartition<2> = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        assert_eq!(s, serde_json::to_string(&q).unwrap());
    }
}
