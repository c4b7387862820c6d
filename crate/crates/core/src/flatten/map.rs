use super::chart::{for_grid, Chart, ChartRecord, LocalDiffeo};
use super::index::BallIndex;
use crate::error::{Error, Result};
use crate::geometry::{AabbTree, Matrix, Point};
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicUsize, Ordering};

/// Composition `f = f_1 ∘ … ∘ f_M` of local diffeomorphisms with pairwise
/// disjoint balls; each point is moved by at most the one ball containing it.
#[derive(Clone, Debug)]
pub struct FlatteningMap<const D: usize> {
    eps: f64,
    diffeos: Vec<LocalDiffeo<D>>,
    boxes: AabbTree<D>,
    hint: Hint,
}

/// Last ball found by `locate`; the balls are disjoint, so checking it
/// first never changes the answer.
#[derive(Debug, Default)]
struct Hint(AtomicUsize);

impl Clone for Hint {
    fn clone(&self) -> Self {
        Hint(AtomicUsize::new(self.0.load(Ordering::Relaxed)))
    }
}

/// Sampled bounds of a flattening map.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MapBounds {
    /// `sup |Df − Id| + |f − x|`.
    pub sup_sum: f64,
    /// `sup |Df − Id|` over the balls.
    pub sup_jacobian: f64,
    /// `sup |f − x|`.
    pub sup_displacement: f64,
}

/// Builds the composed map; fails if two closed balls intersect.
pub fn compose<const D: usize>(charts: Vec<Chart<D>>, eps: f64) -> Result<FlatteningMap<D>> {
    let mut index = BallIndex::new();
    let mut diffeos = Vec::with_capacity(charts.len());
    for (i, ch) in charts.into_iter().enumerate() {
        let clear = index.clearance(&ch.center, 2.0 * ch.radius + 1.0);
        if clear <= ch.radius {
            return Err(Error::Invalid(format!("chart {i} overlaps an earlier chart")));
        }
        index.insert(ch.center, ch.radius);
        diffeos.push(LocalDiffeo::new(ch, eps)?);
    }
    let boxes = AabbTree::new(diffeos.iter().map(|d| (d.chart.center.add_scalar(-d.chart.radius), d.chart.center.add_scalar(d.chart.radius))).collect());
    Ok(FlatteningMap { eps, diffeos, boxes, hint: Hint::default() })
}

impl<const D: usize> FlatteningMap<D> {
    pub fn identity(eps: f64) -> Self {
        Self { eps, diffeos: Vec::new(), boxes: AabbTree::new(Vec::new()), hint: Hint::default() }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn len(&self) -> usize {
        self.diffeos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diffeos.is_empty()
    }

    pub fn diffeos(&self) -> &[LocalDiffeo<D>] {
        &self.diffeos
    }

    pub fn charts(&self) -> impl Iterator<Item = &Chart<D>> {
        self.diffeos.iter().map(|d| &d.chart)
    }

    pub fn max_radius(&self) -> f64 {
        self.diffeos.iter().map(|d| d.chart.radius).fold(0.0, f64::max)
    }

    /// Index of the ball containing `x`.
    pub fn locate(&self, x: &Point<D>) -> Option<usize> {
        let h = self.hint.0.load(Ordering::Relaxed);
        if h < self.diffeos.len() && self.diffeos[h].contains(x) {
            return Some(h);
        }
        let found = self.boxes.find_containing(x, |i| self.diffeos[i].contains(x));
        if let Some(i) = found {
            self.hint.0.store(i, Ordering::Relaxed);
        }
        found
    }

    pub fn forward(&self, x: &Point<D>) -> Point<D> {
        match self.locate(x) {
            Some(i) => self.diffeos[i].forward(x),
            None => *x,
        }
    }

    pub fn jacobian(&self, x: &Point<D>) -> Matrix<D> {
        match self.locate(x) {
            Some(i) => self.diffeos[i].jacobian(x),
            None => Matrix::<D>::identity(),
        }
    }

    /// Each ball is mapped onto itself, so the inverse is local as well.
    pub fn inverse(&self, x: &Point<D>) -> Result<Point<D>> {
        match self.locate(x) {
            Some(i) => self.diffeos[i].inverse(x),
            None => Ok(*x),
        }
    }

    /// Bounds sampled on a `k^D` grid in every ball.
    pub fn sampled_bounds(&self, k: usize) -> MapBounds {
        let mut b = MapBounds::default();
        for d in &self.diffeos {
            if d.chart.graph.is_flat() {
                continue;
            }
            let (c, r) = (d.chart.center, d.chart.radius);
            for_grid::<D>(k, |u| {
                let x = c + u * r;
                if (x - c).norm() < r {
                    let jac = (d.jacobian(&x) - Matrix::<D>::identity()).norm();
                    let disp = (d.forward(&x) - x).norm();
                    b.sup_jacobian = b.sup_jacobian.max(jac);
                    b.sup_displacement = b.sup_displacement.max(disp);
                    b.sup_sum = b.sup_sum.max(jac + disp);
                }
            });
        }
        b
    }

    pub fn records(&self) -> Vec<ChartRecord> {
        self.diffeos.iter().map(|d| d.chart.record()).collect()
    }
}
