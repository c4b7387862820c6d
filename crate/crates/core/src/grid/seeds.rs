use super::locate::{box_distance, PieceLocator};
use crate::error::{Error, Result};
use crate::geometry::{Point, PolyhedronSet, Vector};
use serde::{Deserialize, Serialize};
use crate::geometry::hash::GridMap;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeedKind {
    Background,
    /// Seed of the mirrored lattice of a piece; `core` seeds are never thinned.
    Oriented { piece: usize, core: bool },
}

/// Thinned Voronoi generators with their local spacing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedSet<const D: usize> {
    pub points: Vec<Point<D>>,
    /// Local lattice spacing of each seed (`δ` in the uniform construction).
    pub sizes: Vec<f64>,
    pub kinds: Vec<SeedKind>,
    /// Uniform spacing, or the smallest size of a graded set.
    pub delta: f64,
    pub delta0: f64,
    pub bounds: (Point<D>, Point<D>),
    pub graded: bool,
}

impl<const D: usize> SeedSet<D> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `c* = 2n²`.
pub fn c_star(n: usize) -> f64 {
    2.0 * (n * n) as f64
}

#[derive(Clone, Debug)]
struct Candidate<const D: usize> {
    p: Point<D>,
    s: f64,
    kind: SeedKind,
}

fn lex<const D: usize>(a: &Point<D>, b: &Point<D>) -> std::cmp::Ordering {
    for i in 0..D {
        let o = a[i].total_cmp(&b[i]);
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Greedy thinning: core seeds first, then lexicographic order; a candidate
/// is dropped if a kept seed lies closer than `min(s_p, s_q) / n`.
fn thin<const D: usize>(mut cands: Vec<Candidate<D>>) -> Vec<Candidate<D>> {
    let n = D as f64;
    cands.sort_by(|a, b| {
        let ca = matches!(a.kind, SeedKind::Oriented { core: true, .. });
        let cb = matches!(b.kind, SeedKind::Oriented { core: true, .. });
        cb.cmp(&ca).then_with(|| lex(&a.p, &b.p))
    });
    let mut kept: Vec<Candidate<D>> = Vec::with_capacity(cands.len());
    let mut grids: BTreeMap<i32, GridMap<[i64; D], Vec<usize>>> = BTreeMap::new();
    let cell = |lvl: i32| 2f64.powi(lvl + 1) / n;
    let key = |x: &Point<D>, c: f64| {
        let mut k = [0i64; D];
        for i in 0..D {
            k[i] = (x[i] / c).floor() as i64;
        }
        k
    };
    for cand in cands {
        let mut ok = true;
        'levels: for (&lvl, grid) in &grids {
            let c = cell(lvl);
            // Seeds of this level have s < 2^(lvl+1), so conflicts lie within r.
            let r = cand.s.min(2f64.powi(lvl + 1)) / n;
            let lo = key(&cand.p.add_scalar(-r), c);
            let hi = key(&cand.p.add_scalar(r), c);
            let mut k = lo;
            loop {
                if let Some(ids) = grid.get(&k) {
                    for &q in ids {
                        let other = &kept[q];
                        if (other.p - cand.p).norm() < cand.s.min(other.s) / n {
                            ok = false;
                            break 'levels;
                        }
                    }
                }
                let mut axis = 0;
                while axis < D {
                    if k[axis] < hi[axis] {
                        k[axis] += 1;
                        break;
                    }
                    k[axis] = lo[axis];
                    axis += 1;
                }
                if axis == D {
                    break;
                }
            }
        }
        if ok {
            let lvl = cand.s.log2().floor() as i32;
            let k = key(&cand.p, cell(lvl));
            grids.entry(lvl).or_default().entry(k).or_default().push(kept.len());
            kept.push(cand);
        }
    }
    kept
}

fn finish<const D: usize>(
    kept: Vec<Candidate<D>>,
    delta: f64,
    delta0: f64,
    bounds: (Point<D>, Point<D>),
    graded: bool,
) -> SeedSet<D> {
    let mut points = Vec::with_capacity(kept.len());
    let mut sizes = Vec::with_capacity(kept.len());
    let mut kinds = Vec::with_capacity(kept.len());
    for c in kept {
        points.push(c.p);
        sizes.push(c.s);
        kinds.push(c.kind);
    }
    SeedSet { points, sizes, kinds, delta, delta0, bounds, graded }
}

/// Checks that every piece lies strictly inside the box and returns the
/// smallest piece-to-boundary distance.
fn boundary_clearance<const D: usize>(pieces: &PolyhedronSet<D>, bounds: &(Point<D>, Point<D>)) -> Result<f64> {
    let mut best = f64::INFINITY;
    for (j, p) in pieces.pieces().iter().enumerate() {
        for f in &p.facets {
            for v in f.vertices() {
                let d = box_distance(v, bounds);
                if d <= 0.0 {
                    return Err(Error::PieceNearBoundary(j));
                }
                best = best.min(d);
            }
        }
    }
    Ok(best)
}

/// `δ₀ = (1/5n) min(min_{i≠l} dist(P_i, P_l), (5/3) dist(∪P_j, ∂box))`; the
/// boundary term keeps the `3nδ₀` bands inside the box.
pub fn delta0<const D: usize>(pieces: &PolyhedronSet<D>, bounds: &(Point<D>, Point<D>)) -> Result<f64> {
    let n = D as f64;
    let b = boundary_clearance(pieces, bounds)?;
    Ok(pieces.min_distance().min(5.0 / 3.0 * b) / (5.0 * n))
}

/// Lattice points `lo + δ(k + ½)` of the box at distance `>= δ/(2n)` from its boundary.
fn box_lattice<const D: usize>(bounds: &(Point<D>, Point<D>), delta: f64) -> Vec<Point<D>> {
    let (lo, hi) = bounds;
    let margin = delta / (2.0 * D as f64);
    let counts: Vec<usize> = (0..D).map(|i| (((hi[i] - lo[i]) / delta) + 0.5).floor().max(0.0) as usize + 1).collect();
    let total: usize = counts.iter().product();
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rem = idx;
        let p = Point::<D>::from_fn(|i, _| {
            let k = rem % counts[i];
            rem /= counts[i];
            lo[i] + delta * (k as f64 + 0.5)
        });
        if box_distance(&p, bounds) >= margin {
            out.push(p);
        }
    }
    out
}

/// The literal construction: background lattice `δZⁿ` outside the `2nδ₀`
/// neighborhoods of the pieces, mirrored lattices `I_j(δZⁿ + ½δe_n)` inside
/// their `3nδ₀` neighborhoods, thinned at `δ/n` with the `nδ₀` cores kept.
pub fn build_seed_set<const D: usize>(
    pieces: &PolyhedronSet<D>,
    delta: f64,
    bounds: (Point<D>, Point<D>),
) -> Result<SeedSet<D>> {
    let n = D as f64;
    let d0 = delta0(pieces, &bounds)?;
    if !(delta > 0.0 && delta < d0) {
        return Err(Error::SpacingTooLarge(format!("delta {delta:e} not in (0, delta0 = {d0:e})")));
    }
    if pieces.len() >= 2 && !(2.0 * c_star(D) * delta < pieces.min_distance()) {
        return Err(Error::SpacingTooLarge(format!(
            "2 c* delta = {:e} >= min piece distance {:e}",
            2.0 * c_star(D) * delta,
            pieces.min_distance()
        )));
    }
    let loc = PieceLocator::new(pieces);
    let mut cands = Vec::new();
    for p in box_lattice(&bounds, delta) {
        if loc.within(&p, 2.0 * n * d0).is_empty() {
            cands.push(Candidate { p, s: delta, kind: SeedKind::Background });
        }
    }
    let margin = delta / (2.0 * n);
    for (j, piece) in pieces.pieces().iter().enumerate() {
        let band = 3.0 * n * d0;
        let (mut lo, mut hi) = (Vector::<D>::repeat(f64::INFINITY), Vector::<D>::repeat(f64::NEG_INFINITY));
        for f in &piece.facets {
            for v in f.vertices() {
                let l = piece.frame.apply(v);
                lo = lo.inf(&l);
                hi = hi.sup(&l);
            }
        }
        lo.add_scalar_mut(-band);
        hi.add_scalar_mut(band);
        let kmin: Vec<i64> = (0..D).map(|i| (lo[i] / delta - 0.5).floor() as i64).collect();
        let kmax: Vec<i64> = (0..D).map(|i| (hi[i] / delta + 0.5).ceil() as i64).collect();
        let counts: Vec<usize> = (0..D).map(|i| (kmax[i] - kmin[i] + 1) as usize).collect();
        let total: usize = counts.iter().product();
        for idx in 0..total {
            let mut rem = idx;
            let local = Point::<D>::from_fn(|i, _| {
                let k = kmin[i] + (rem % counts[i]) as i64;
                rem /= counts[i];
                if i == D - 1 {
                    delta * (k as f64 + 0.5)
                } else {
                    delta * k as f64
                }
            });
            let p = piece.frame.apply_inverse(&local);
            let d = piece.distance(&p);
            if d <= band && box_distance(&p, &bounds) >= margin {
                cands.push(Candidate { p, s: delta, kind: SeedKind::Oriented { piece: j, core: d <= n * d0 } });
            }
        }
    }
    Ok(finish(thin(cands), delta, d0, bounds, false))
}

/// Parameters of the graded construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedOptions {
    /// Spacing next to a piece is at most `alpha` times the distance to the
    /// other pieces and the box boundary.
    pub alpha: f64,
    /// Background spacing may grow like `beta` times the distance to the pieces.
    pub beta: f64,
    /// Largest spacing.
    pub h_max: f64,
}

impl GradedOptions {
    pub fn for_box<const D: usize>(bounds: &(Point<D>, Point<D>)) -> Self {
        let n = D as f64;
        let side = (0..D).map(|i| bounds.1[i] - bounds.0[i]).fold(f64::INFINITY, f64::min);
        Self { alpha: 1.0 / (2.0 * n + 3.0), beta: 0.9 / (n + 2.0), h_max: side / 4.0 }
    }
}

struct Sizing<'a, const D: usize> {
    loc: PieceLocator<'a, D>,
    pieces: &'a PolyhedronSet<D>,
    bounds: (Point<D>, Point<D>),
    opts: GradedOptions,
}

impl<'a, const D: usize> Sizing<'a, D> {
    fn mirror(&self, j: usize, x: &Point<D>) -> Point<D> {
        let frame = &self.pieces.piece(j).frame;
        let mut l = frame.apply(x);
        l[D - 1] = -l[D - 1];
        frame.apply_inverse(&l)
    }

    /// Oriented spacing of piece `j` at `x`, symmetric under the mirror of `j`.
    fn oriented(&self, j: usize, x: &Point<D>) -> f64 {
        let d2 = |y: &Point<D>| self.loc.nearest_two(y, Some(j))[0].0.min(box_distance(y, &self.bounds));
        let m = self.mirror(j, x);
        self.opts.h_max.min(self.opts.alpha * d2(x).min(d2(&m)))
    }

    fn background(&self, x: &Point<D>) -> (f64, Option<usize>) {
        let [(d1, j1), (d2, _)] = self.loc.nearest_two(x, None);
        let d2 = d2.min(box_distance(x, &self.bounds));
        let h = self.opts.h_max.min((self.opts.alpha * d2).max(self.opts.beta * d1));
        (h, (j1 != usize::MAX).then_some(j1))
    }
}

#[derive(Clone, Copy)]
struct Cell<const D: usize> {
    lo: Point<D>,
    hi: Point<D>,
}

impl<const D: usize> Cell<D> {
    fn size(&self) -> f64 {
        (self.hi - self.lo).max()
    }
    fn center(&self) -> Point<D> {
        (self.lo + self.hi) * 0.5
    }
    fn children(&self) -> Vec<Cell<D>> {
        let c = self.center();
        (0..1usize << D)
            .map(|bits| {
                let mut lo = self.lo;
                let mut hi = self.hi;
                for i in 0..D {
                    if bits >> i & 1 == 1 {
                        lo[i] = c[i];
                    } else {
                        hi[i] = c[i];
                    }
                }
                Cell { lo, hi }
            })
            .collect()
    }
}

/// Graded variant: per-piece mirrored 2^D-trees whose spacing adapts to the
/// distance to the other pieces, and a background tree graded away from the
/// pieces. Cores (`n s` around a piece) are kept intact, background seeds are
/// excluded within `(n+1) h` of a piece, oriented seeds reach `(n+2) h`.
pub fn build_graded_seed_set<const D: usize>(
    pieces: &PolyhedronSet<D>,
    bounds: (Point<D>, Point<D>),
    opts: GradedOptions,
) -> Result<SeedSet<D>> {
    let n = D as f64;
    boundary_clearance(pieces, &bounds)?;
    let d0 = delta0(pieces, &bounds)?;
    let sizing = Sizing { loc: PieceLocator::new(pieces), pieces, bounds, opts };
    let mut cands = Vec::new();

    // Background tree over root cells of side at most h_max.
    let counts: Vec<usize> = (0..D).map(|i| ((bounds.1[i] - bounds.0[i]) / opts.h_max).ceil().max(1.0) as usize).collect();
    let total: usize = counts.iter().product();
    let mut stack = Vec::new();
    for idx in 0..total {
        let mut rem = idx;
        let mut lo = bounds.0;
        let mut hi = bounds.0;
        for i in 0..D {
            let k = rem % counts[i];
            rem /= counts[i];
            let w = (bounds.1[i] - bounds.0[i]) / counts[i] as f64;
            lo[i] = bounds.0[i] + w * k as f64;
            hi[i] = if k + 1 == counts[i] { bounds.1[i] } else { bounds.0[i] + w * (k + 1) as f64 };
        }
        stack.push(Cell { lo, hi });
    }
    while let Some(cell) = stack.pop() {
        let c = cell.center();
        let s = cell.size();
        let (h, near) = sizing.background(&c);
        if s > h {
            stack.extend(cell.children());
            continue;
        }
        let excluded = near.is_some_and(|j| sizing.loc.distance(&c, j) < (n + 1.0) * sizing.oriented(j, &c));
        if !excluded {
            cands.push(Candidate { p: c, s, kind: SeedKind::Background });
        }
    }

    // Mirrored trees, one per piece, built in the upper half-space of its frame.
    for (j, piece) in pieces.pieces().iter().enumerate() {
        let (center, rho) = piece.bounding_ball();
        let reach = sizing.loc.nearest_two(&center, Some(j))[0].0.min(box_distance(&center, &bounds));
        let h_c = opts.h_max.min(2.0 * opts.alpha * (reach + rho));
        let half = rho + 2.0 * (n + 2.0) * h_c;
        let origin = piece.frame.apply(&center);
        let mut lo = origin.add_scalar(-half);
        let mut hi = origin.add_scalar(half);
        lo[D - 1] = 0.0;
        hi[D - 1] = 2.0 * half;
        let mut stack = vec![Cell { lo, hi }];
        while let Some(cell) = stack.pop() {
            let cl = cell.center();
            let s = cell.size();
            let p = piece.frame.apply_inverse(&cl);
            let dist = piece.distance(&p);
            // Nothing of this cell can reach the band.
            if dist - 0.5 * s * n.sqrt() > (n + 2.0) * s {
                continue;
            }
            let h = sizing.oriented(j, &p);
            if s > h {
                stack.extend(cell.children());
                continue;
            }
            if dist <= (n + 2.0) * h {
                let core = dist <= n * s;
                let mut ml = cl;
                ml[D - 1] = -ml[D - 1];
                let q = piece.frame.apply_inverse(&ml);
                for x in [p, q] {
                    if box_distance(&x, &bounds) >= s / (2.0 * n) {
                        cands.push(Candidate { p: x, s, kind: SeedKind::Oriented { piece: j, core } });
                    }
                }
            }
        }
    }
    let kept = thin(cands);
    let delta = kept.iter().map(|c| c.s).fold(f64::INFINITY, f64::min);
    Ok(finish(kept, delta, d0, bounds, true))
}
