use super::{Facet, Matrix, Point, Vector, COINCIDENCE_TOL};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Closed half-space `{x : normal · x <= offset}` with a unit normal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace<const D: usize> {
    pub normal: Vector<D>,
    pub offset: f64,
}

impl<const D: usize> HalfSpace<D> {
    /// Normalizes `normal` (and scales `offset` accordingly).
    pub fn new(normal: Vector<D>, offset: f64) -> Self {
        let len = normal.norm();
        Self { normal: normal / len, offset: offset / len }
    }

    /// Points at least as close to `q` as to `z`.
    pub fn bisector(q: &Point<D>, z: &Point<D>) -> Self {
        let normal = (z - q).normalize();
        let mid = (q + z) * 0.5;
        Self { offset: normal.dot(&mid), normal }
    }

    pub fn signed_distance(&self, x: &Point<D>) -> f64 {
        self.normal.dot(x) - self.offset
    }
}

/// Face sources at or above this value tag the faces of an initial bounding box.
pub const BOX_SOURCE_BASE: usize = usize::MAX - 15;

pub fn box_source(axis: usize, upper: bool) -> usize {
    BOX_SOURCE_BASE + 2 * axis + upper as usize
}

pub fn is_box_source(source: usize) -> bool {
    source >= BOX_SOURCE_BASE
}

/// One face of a polytope. In 2D `vertices` holds the two endpoints in
/// counter-clockwise boundary order; in 3D it is a vertex loop that is
/// counter-clockwise when seen from outside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Face<const D: usize> {
    pub plane: HalfSpace<D>,
    /// Index of the half-space that produced this face.
    pub source: usize,
    pub vertices: Vec<usize>,
}

/// Bounded convex polytope in 2D or 3D with explicit vertices and faces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolytope<const D: usize> {
    vertices: Vec<Point<D>>,
    faces: Vec<Face<D>>,
}

/// Effect of clipping a polytope by one half-space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clip {
    /// The polytope changed and gained a face.
    Cut,
    /// The half-space contains the polytope (within tolerance).
    Redundant,
}

impl<const D: usize> ConvexPolytope<D> {
    /// Axis-aligned box `[lo, hi]` with faces tagged by [`box_source`].
    pub fn from_box(lo: &Point<D>, hi: &Point<D>) -> Self {
        assert!(D == 2 || D == 3, "only dimensions 2 and 3 are supported");
        let corner = |bits: usize| Point::<D>::from_fn(|i, _| if bits >> i & 1 == 1 { hi[i] } else { lo[i] });
        let plane = |axis: usize, upper: bool| {
            let mut n = Vector::<D>::zeros();
            n[axis] = if upper { 1.0 } else { -1.0 };
            HalfSpace { normal: n, offset: if upper { hi[axis] } else { -lo[axis] } }
        };
        if D == 2 {
            let vertices = vec![corner(0), corner(1), corner(3), corner(2)];
            let spec = [(1, false), (0, true), (1, true), (0, false)];
            let faces = spec
                .iter()
                .enumerate()
                .map(|(k, &(axis, upper))| Face {
                    plane: plane(axis, upper),
                    source: box_source(axis, upper),
                    vertices: vec![k, (k + 1) % 4],
                })
                .collect();
            return Self { vertices, faces };
        }
        let vertices = (0..8).map(corner).collect();
        let loops: [(usize, bool, [usize; 4]); 6] = [
            (0, false, [0, 4, 6, 2]),
            (0, true, [1, 3, 7, 5]),
            (1, false, [0, 1, 5, 4]),
            (1, true, [2, 6, 7, 3]),
            (2, false, [0, 2, 3, 1]),
            (2, true, [4, 5, 7, 6]),
        ];
        let faces = loops
            .iter()
            .map(|&(axis, upper, l)| Face {
                plane: plane(axis, upper),
                source: box_source(axis, upper),
                vertices: l.to_vec(),
            })
            .collect();
        Self { vertices, faces }
    }

    /// Intersection of half-spaces; face sources are indices into `halfspaces`.
    pub fn from_halfspaces(halfspaces: &[HalfSpace<D>]) -> Result<Self> {
        if halfspaces.len() < D + 1 {
            return Err(Error::UnboundedCell);
        }
        // First pass inside a huge box only locates the polytope.
        let big = 1e6;
        let mut coarse = Self::from_box(&Point::<D>::repeat(-big), &Point::<D>::repeat(big));
        for (i, h) in halfspaces.iter().enumerate() {
            coarse.clip(h, i)?;
        }
        if coarse.faces.iter().any(|f| is_box_source(f.source)) {
            return Err(Error::UnboundedCell);
        }
        let (lo, hi) = coarse.bounding_box();
        let pad = (hi - lo).max().max(1e-6);
        let mut cell = Self::from_box(&lo.add_scalar(-pad), &hi.add_scalar(pad));
        for (i, h) in halfspaces.iter().enumerate() {
            cell.clip(h, i)?;
        }
        if cell.faces.iter().any(|f| is_box_source(f.source)) {
            return Err(Error::UnboundedCell);
        }
        Ok(cell)
    }

    pub fn vertices(&self) -> &[Point<D>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face<D>] {
        &self.faces
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn bounding_box(&self) -> (Point<D>, Point<D>) {
        let mut lo = Point::<D>::repeat(f64::INFINITY);
        let mut hi = Point::<D>::repeat(f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    fn tolerance(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        COINCIDENCE_TOL.min(1e-7 * (hi - lo).norm())
    }

    /// Intersects the polytope with `h`, recording `source` on the new face.
    /// On `EmptyCell` the polytope is left unchanged.
    pub fn clip(&mut self, h: &HalfSpace<D>, source: usize) -> Result<Clip> {
        let tol = self.tolerance();
        let d: Vec<f64> = self.vertices.iter().map(|v| h.signed_distance(v)).collect();
        if d.iter().all(|&x| x <= tol) {
            return Ok(Clip::Redundant);
        }
        if d.iter().all(|&x| x >= -tol) {
            return Err(Error::EmptyCell);
        }
        if D == 2 {
            self.clip_polygon(h, source, &d, tol)
        } else {
            self.clip_polyhedron(h, source, &d, tol)
        }
    }

    fn clip_polygon(&mut self, h: &HalfSpace<D>, source: usize, d: &[f64], tol: f64) -> Result<Clip> {
        let m = self.vertices.len();
        let mut ring: Vec<(Point<D>, HalfSpace<D>, usize)> = Vec::with_capacity(m + 1);
        let mut used = false;
        for i in 0..m {
            let j = (i + 1) % m;
            let (vi, vj) = (self.vertices[i], self.vertices[j]);
            let edge = (self.faces[i].plane, self.faces[i].source);
            let (di, dj) = (d[i], d[j]);
            let i_in = di <= tol;
            let j_in = dj <= tol;
            if i_in && j_in {
                ring.push((vi, edge.0, edge.1));
            } else if i_in {
                if di >= -tol {
                    ring.push((vi, *h, source));
                } else {
                    ring.push((vi, edge.0, edge.1));
                    ring.push((vi + (vj - vi) * (di / (di - dj)), *h, source));
                }
                used = true;
            } else if j_in && dj < -tol {
                ring.push((vi + (vj - vi) * (di / (di - dj)), edge.0, edge.1));
            }
        }
        // Drop zero-length edges.
        let mut k = 0;
        while ring.len() > 2 && k < ring.len() {
            let next = (k + 1) % ring.len();
            if (ring[k].0 - ring[next].0).norm() <= tol {
                ring.remove(k);
            } else {
                k += 1;
            }
        }
        if ring.len() < 3 {
            return Err(Error::EmptyCell);
        }
        let n = ring.len();
        let vertices: Vec<Point<D>> = ring.iter().map(|r| r.0).collect();
        let faces = ring
            .iter()
            .enumerate()
            .map(|(k, r)| Face { plane: r.1, source: r.2, vertices: vec![k, (k + 1) % n] })
            .collect();
        let candidate = Self { vertices, faces };
        if candidate.volume() <= 0.0 {
            return Err(Error::EmptyCell);
        }
        *self = candidate;
        Ok(if used { Clip::Cut } else { Clip::Redundant })
    }

    fn clip_polyhedron(&mut self, h: &HalfSpace<D>, source: usize, d: &[f64], tol: f64) -> Result<Clip> {
        let mut vertices: Vec<Point<D>> = Vec::with_capacity(self.vertices.len() + 8);
        let mut remap = vec![usize::MAX; self.vertices.len()];
        let mut on_plane: Vec<usize> = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if d[i] <= tol {
                remap[i] = vertices.len();
                if d[i] >= -tol {
                    on_plane.push(vertices.len());
                }
                vertices.push(*v);
            }
        }
        let mut cut_points: Vec<((usize, usize), usize)> = Vec::new();
        let mut faces: Vec<Face<D>> = Vec::with_capacity(self.faces.len() + 1);
        for face in &self.faces {
            let l = &face.vertices;
            let mut out: Vec<usize> = Vec::with_capacity(l.len() + 2);
            for k in 0..l.len() {
                let (a, b) = (l[k], l[(k + 1) % l.len()]);
                if d[a] <= tol {
                    out.push(remap[a]);
                }
                let crossing = (d[a] < -tol && d[b] > tol) || (d[a] > tol && d[b] < -tol);
                if crossing {
                    let key = (a.min(b), a.max(b));
                    let idx = match cut_points.iter().find(|(k2, _)| *k2 == key) {
                        Some(&(_, idx)) => idx,
                        None => {
                            let (va, vb) = (self.vertices[a], self.vertices[b]);
                            let p = va + (vb - va) * (d[a] / (d[a] - d[b]));
                            let idx = vertices.len();
                            vertices.push(p);
                            on_plane.push(idx);
                            cut_points.push((key, idx));
                            idx
                        }
                    };
                    out.push(idx);
                }
            }
            out.dedup();
            if out.len() > 1 && out.first() == out.last() {
                out.pop();
            }
            if out.len() >= 3 {
                faces.push(Face { plane: face.plane, source: face.source, vertices: out });
            }
        }
        let cap = order_loop(&vertices, &on_plane, &h.normal);
        let used = cap.len() >= 3;
        if used {
            faces.push(Face { plane: *h, source, vertices: cap });
        }
        let candidate = Self::compact(vertices, faces, tol);
        if candidate.faces.len() < D + 1 || candidate.volume() <= 0.0 {
            return Err(Error::EmptyCell);
        }
        *self = candidate;
        Ok(if used { Clip::Cut } else { Clip::Redundant })
    }

    /// Merges coincident vertices, drops degenerate faces and unused vertices.
    fn compact(vertices: Vec<Point<D>>, mut faces: Vec<Face<D>>, tol: f64) -> Self {
        let n = vertices.len();
        let mut rep: Vec<usize> = (0..n).collect();
        for i in 0..n {
            if rep[i] != i {
                continue;
            }
            for j in i + 1..n {
                if rep[j] == j && (vertices[i] - vertices[j]).norm() <= tol {
                    rep[j] = i;
                }
            }
        }
        for f in &mut faces {
            for v in &mut f.vertices {
                *v = rep[*v];
            }
            f.vertices.dedup();
            if f.vertices.len() > 1 && f.vertices.first() == f.vertices.last() {
                f.vertices.pop();
            }
        }
        faces.retain(|f| f.vertices.len() >= 3);
        let mut new_index = vec![usize::MAX; n];
        let mut kept = Vec::new();
        for f in &mut faces {
            for v in &mut f.vertices {
                if new_index[*v] == usize::MAX {
                    new_index[*v] = kept.len();
                    kept.push(vertices[*v]);
                }
                *v = new_index[*v];
            }
        }
        Self { vertices: kept, faces }
    }

    /// Lebesgue measure.
    pub fn volume(&self) -> f64 {
        if self.vertices.is_empty() {
            return 0.0;
        }
        let c = self.vertex_mean();
        let total: f64 = self
            .faces
            .iter()
            .enumerate()
            .map(|(k, f)| f.plane.normal.dot(&(self.vertices[f.vertices[0]] - c)) * self.face_measure(k))
            .sum();
        total / D as f64
    }

    fn vertex_mean(&self) -> Point<D> {
        let mut c = Point::<D>::zeros();
        for v in &self.vertices {
            c += v;
        }
        c / self.vertices.len() as f64
    }

    /// Center of mass.
    pub fn centroid(&self) -> Point<D> {
        let c = self.vertex_mean();
        let mut acc = Point::<D>::zeros();
        let mut vol = 0.0;
        for f in &self.faces {
            let l = &f.vertices;
            if D == 2 {
                let (a, b) = (self.vertices[l[0]] - c, self.vertices[l[1]] - c);
                let w = 0.5 * (a[0] * b[1] - a[1] * b[0]);
                acc += (a + b) * (w / 3.0);
                vol += w;
            } else {
                let a = self.vertices[l[0]] - c;
                for k in 1..l.len() - 1 {
                    let b = self.vertices[l[k]] - c;
                    let e = self.vertices[l[k + 1]] - c;
                    let m = Matrix::<D>::from_columns(&[a, b, e]);
                    let w = super::det(&m) / 6.0;
                    acc += (a + b + e) * (w / 4.0);
                    vol += w;
                }
            }
        }
        c + acc / vol
    }

    /// (D−1)-measure of face `k`.
    pub fn face_measure(&self, k: usize) -> f64 {
        let l = &self.faces[k].vertices;
        if D == 2 {
            return (self.vertices[l[1]] - self.vertices[l[0]]).norm();
        }
        let a = self.vertices[l[0]];
        let n = self.faces[k].plane.normal;
        let mut area = 0.0;
        for i in 1..l.len() - 1 {
            let b = self.vertices[l[i]] - a;
            let c = self.vertices[l[i + 1]] - a;
            area += 0.5 * super::det(&Matrix::<D>::from_columns(&[b, c, n]));
        }
        area
    }

    /// Face `k` as an outward-oriented facet.
    pub fn face_facet(&self, k: usize) -> Result<Facet<D>> {
        let f = &self.faces[k];
        let pts: Vec<Point<D>> = f.vertices.iter().map(|&i| self.vertices[i]).collect();
        Facet::new(pts, f.plane.normal)
    }

    pub fn contains(&self, x: &Point<D>, tol: f64) -> bool {
        self.faces.iter().all(|f| f.plane.signed_distance(x) <= tol)
    }

    /// Radius of the largest ball about `x` inside the polytope.
    pub fn inradius_about(&self, x: &Point<D>) -> f64 {
        self.faces.iter().map(|f| -f.plane.signed_distance(x)).fold(f64::INFINITY, f64::min)
    }

    /// Radius of the smallest ball about `x` containing the polytope.
    pub fn circumradius_about(&self, x: &Point<D>) -> f64 {
        self.vertices.iter().map(|v| (v - x).norm()).fold(0.0, f64::max)
    }

    /// Distance from `x` to the boundary face `k` (as a closed set).
    pub fn distance_to_face(&self, k: usize, x: &Point<D>) -> f64 {
        match self.face_facet(k) {
            Ok(f) => f.distance(x),
            Err(_) => self.faces[k]
                .vertices
                .iter()
                .map(|&i| (self.vertices[i] - x).norm())
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Applies an isometry to every vertex and plane.
    pub fn transformed(&self, iso: &super::Isometry<D>) -> Self {
        let vertices = self.vertices.iter().map(|v| iso.apply(v)).collect();
        let faces = self
            .faces
            .iter()
            .map(|f| {
                let normal = iso.apply_vector(&f.plane.normal);
                let offset = f.plane.offset + normal.dot(&iso.translation);
                Face { plane: HalfSpace { normal, offset }, source: f.source, vertices: f.vertices.clone() }
            })
            .collect();
        Self { vertices, faces }
    }
}

/// Orders coplanar points counter-clockwise around `normal`, dropping duplicates.
fn order_loop<const D: usize>(vertices: &[Point<D>], idx: &[usize], normal: &Vector<D>) -> Vec<usize> {
    if idx.len() < 3 {
        return Vec::new();
    }
    let mut c = Point::<D>::zeros();
    for &i in idx {
        c += vertices[i];
    }
    c /= idx.len() as f64;
    let basis = super::tangent_basis(normal);
    let (u, w) = (basis[0], basis[1]);
    let mut keyed: Vec<(f64, usize)> = idx
        .iter()
        .map(|&i| {
            let p = vertices[i] - c;
            (p.dot(&w).atan2(p.dot(&u)), i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    keyed.into_iter().map(|(_, i)| i).collect()
}

/// Reference vertex enumeration: every D-subset of constraints whose
/// intersection point satisfies all constraints. Cubic cost; for tests.
pub fn enumerate_vertices<const D: usize>(halfspaces: &[HalfSpace<D>], tol: f64) -> Vec<Point<D>> {
    let m = halfspaces.len();
    let mut out: Vec<Point<D>> = Vec::new();
    let mut push = |p: Point<D>| {
        if halfspaces.iter().all(|h| h.signed_distance(&p) <= tol) && !out.iter().any(|q| (q - p).norm() <= tol) {
            out.push(p);
        }
    };
    let solve = |rows: &[usize]| -> Option<Point<D>> {
        let a = Matrix::<D>::from_fn(|i, j| halfspaces[rows[i]].normal[j]);
        let b = Vector::<D>::from_fn(|i, _| halfspaces[rows[i]].offset);
        super::solve(&a, &b)
    };
    if D == 2 {
        for i in 0..m {
            for j in i + 1..m {
                if let Some(p) = solve(&[i, j]) {
                    push(p);
                }
            }
        }
    } else {
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    if let Some(p) = solve(&[i, j, k]) {
                        push(p);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Isometry;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn square_halfspaces() -> Vec<HalfSpace<2>> {
        vec![
            HalfSpace::new(Vector::<2>::new(1.0, 0.0), 0.5),
            HalfSpace::new(Vector::<2>::new(-1.0, 0.0), 0.5),
            HalfSpace::new(Vector::<2>::new(0.0, 1.0), 0.5),
            HalfSpace::new(Vector::<2>::new(0.0, -1.0), 0.5),
        ]
    }

    #[test]
    fn unit_square() {
        let p = ConvexPolytope::from_halfspaces(&square_halfspaces()).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.num_faces(), 4);
        assert!((p.volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_halfspace_leaves_no_face() {
        let mut hs = square_halfspaces();
        hs.push(HalfSpace::new(Vector::<2>::new(1.0, 0.0), 2.0));
        let p = ConvexPolytope::from_halfspaces(&hs).unwrap();
        assert_eq!(p.num_faces(), 4);
        assert!(p.faces().iter().all(|f| f.source != 4));
        assert!((p.volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regular_hexagon_area() {
        let hs: Vec<HalfSpace<2>> = (0..6)
            .map(|k| {
                let a = std::f64::consts::PI / 3.0 * k as f64 + std::f64::consts::PI / 6.0;
                HalfSpace::new(Vector::<2>::new(a.cos(), a.sin()), 3f64.sqrt() / 2.0)
            })
            .collect();
        let p = ConvexPolytope::from_halfspaces(&hs).unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert!((p.volume() - 3.0 * 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_and_empty() {
        let hs = vec![
            HalfSpace::new(Vector::<2>::new(1.0, 0.0), 0.5),
            HalfSpace::new(Vector::<2>::new(0.0, 1.0), 0.5),
            HalfSpace::new(Vector::<2>::new(1.0, 1.0), 0.5),
        ];
        assert!(matches!(ConvexPolytope::from_halfspaces(&hs), Err(Error::UnboundedCell)));
        let mut hs = square_halfspaces();
        hs.push(HalfSpace::new(Vector::<2>::new(1.0, 0.0), -2.0));
        assert!(matches!(ConvexPolytope::from_halfspaces(&hs), Err(Error::EmptyCell)));
    }

    #[test]
    fn cube_and_cut_corner() {
        let mut c = ConvexPolytope::<3>::from_box(&Point::<3>::zeros(), &Point::<3>::repeat(1.0));
        assert!((c.volume() - 1.0).abs() < 1e-14);
        for k in 0..6 {
            assert!((c.face_measure(k) - 1.0).abs() < 1e-14);
        }
        let h = HalfSpace::new(Vector::<3>::new(1.0, 1.0, 1.0), 3f64.sqrt() * 2.5 / 3f64.sqrt());
        assert_eq!(c.clip(&h, 99).unwrap(), Clip::Cut);
        // Removes the corner tetrahedron x+y+z > 2.5 of volume (0.5)^3/6.
        assert!((c.volume() - (1.0 - 0.125 / 6.0)).abs() < 1e-12);
        assert_eq!(c.num_faces(), 7);
        let cen = c.centroid();
        assert!(c.contains(&cen, 0.0));
    }

    #[test]
    fn clip_through_vertices_keeps_topology() {
        let mut c = ConvexPolytope::<3>::from_box(&Point::<3>::zeros(), &Point::<3>::repeat(1.0));
        // Plane x + y <= 1 passes through the edges x=1,y=0 and x=0,y=1.
        c.clip(&HalfSpace::new(Vector::<3>::new(1.0, 1.0, 0.0), 1.0), 7).unwrap();
        assert!((c.volume() - 0.5).abs() < 1e-12, "{} {:?}", c.volume(), c);
        assert_eq!(c.vertices().len(), 6);
        assert_eq!(c.num_faces(), 5);
    }

    fn random_halfspaces<const D: usize>(rng: &mut ChaCha8Rng, m: usize) -> Vec<HalfSpace<D>> {
        (0..m)
            .map(|_| {
                let n = Vector::<D>::from_fn(|_, _| rng.gen_range(-1.0..1.0));
                HalfSpace::new(n, rng.gen_range(0.3..1.0) * n.norm())
            })
            .collect()
    }

    #[test]
    fn clipping_matches_vertex_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let hs = random_halfspaces::<3>(&mut rng, 14);
            let Ok(p) = ConvexPolytope::from_halfspaces(&hs) else { continue };
            let reference = enumerate_vertices(&hs, 1e-9);
            assert_eq!(p.vertices().len(), reference.len());
            for v in p.vertices() {
                assert!(reference.iter().any(|r| (r - v).norm() < 1e-9));
            }
            let hs2 = random_halfspaces::<2>(&mut rng, 9);
            if let Ok(p) = ConvexPolytope::from_halfspaces(&hs2) {
                let reference = enumerate_vertices(&hs2, 1e-9);
                assert_eq!(p.vertices().len(), reference.len());
            }
        }
    }

    #[test]
    fn volume_invariant_under_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let hs = random_halfspaces::<3>(&mut rng, 12);
            let Ok(p) = ConvexPolytope::from_halfspaces(&hs) else { continue };
            let iso = Isometry::<3>::random(&mut rng, 1.0);
            let moved: Vec<HalfSpace<3>> = hs
                .iter()
                .map(|h| {
                    let n = iso.apply_vector(&h.normal);
                    HalfSpace { normal: n, offset: h.offset + n.dot(&iso.translation) }
                })
                .collect();
            let q = ConvexPolytope::from_halfspaces(&moved).unwrap();
            assert!((q.volume() - p.volume()).abs() <= 1e-9 * p.volume());
            assert!((p.transformed(&iso).volume() - p.volume()).abs() <= 1e-9 * p.volume());
        }
    }
}
