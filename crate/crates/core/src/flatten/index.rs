use crate::geometry::Point;
use crate::geometry::hash::GridMap;
use std::collections::BTreeMap;

/// Multilevel hash grid over balls: a ball of radius `r ∈ [2^L, 2^{L+1})`
/// is stored at level `L` in every cell of side `2^{L+2}` it overlaps.
#[derive(Clone, Debug, Default)]
pub struct BallIndex<const D: usize> {
    centers: Vec<Point<D>>,
    radii: Vec<f64>,
    levels: BTreeMap<i32, Level<D>>,
}

#[derive(Clone, Debug, Default)]
struct Level<const D: usize> {
    cells: GridMap<[i64; D], Vec<usize>>,
    members: Vec<usize>,
}

fn level_of(r: f64) -> i32 {
    r.log2().floor() as i32
}

fn cell_size(level: i32) -> f64 {
    2f64.powi(level + 2)
}

fn key<const D: usize>(x: &Point<D>, size: f64) -> [i64; D] {
    let mut k = [0i64; D];
    for i in 0..D {
        k[i] = (x[i] / size).floor() as i64;
    }
    k
}

impl<const D: usize> BallIndex<D> {
    pub fn new() -> Self {
        Self { centers: Vec::new(), radii: Vec::new(), levels: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn center(&self, i: usize) -> &Point<D> {
        &self.centers[i]
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.radii[i]
    }

    pub fn insert(&mut self, center: Point<D>, radius: f64) -> usize {
        let id = self.centers.len();
        self.centers.push(center);
        self.radii.push(radius);
        let lvl = level_of(radius);
        let size = cell_size(lvl);
        let level = self.levels.entry(lvl).or_default();
        level.members.push(id);
        let lo = key(&center.add_scalar(-radius), size);
        let hi = key(&center.add_scalar(radius), size);
        let mut k = lo;
        loop {
            level.cells.entry(k).or_default().push(id);
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
        id
    }

    /// The (lowest-index) open ball containing `x`.
    pub fn containing(&self, x: &Point<D>) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (&lvl, level) in &self.levels {
            if let Some(ids) = level.cells.get(&key(x, cell_size(lvl))) {
                for &i in ids {
                    if (x - self.centers[i]).norm() < self.radii[i] && best.map_or(true, |b| i < b) {
                        best = Some(i);
                    }
                }
            }
        }
        best
    }

    /// `min(limit, min_i |x − c_i| − r_i)`.
    pub fn clearance(&self, x: &Point<D>, limit: f64) -> f64 {
        let mut best = limit;
        for (&lvl, level) in &self.levels {
            let size = cell_size(lvl);
            let reach = best + 2f64.powi(lvl + 1);
            let span = 2.0 * reach / size + 2.0;
            if !(span.powi(D as i32) <= 4.0 * level.members.len() as f64) {
                for &i in &level.members {
                    best = best.min((x - self.centers[i]).norm() - self.radii[i]);
                }
                continue;
            }
            let lo = key(&x.add_scalar(-reach), size);
            let hi = key(&x.add_scalar(reach), size);
            let mut k = lo;
            loop {
                if let Some(ids) = level.cells.get(&k) {
                    for &i in ids {
                        best = best.min((x - self.centers[i]).norm() - self.radii[i]);
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
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut idx = BallIndex::<2>::new();
        let mut balls = Vec::new();
        for _ in 0..300 {
            let c = Point::<2>::new(rng.gen(), rng.gen());
            let r = 10f64.powf(rng.gen_range(-4.0..-1.0));
            idx.insert(c, r);
            balls.push((c, r));
        }
        for _ in 0..2000 {
            let x = Point::<2>::new(rng.gen(), rng.gen());
            let brute = balls.iter().position(|(c, r)| (x - c).norm() < *r);
            assert_eq!(idx.containing(&x), brute);
            let clear = balls.iter().map(|(c, r)| (x - c).norm() - r).fold(0.05, f64::min);
            assert!((idx.clearance(&x, 0.05) - clear).abs() < 1e-15);
        }
    }
}
