use crate::geometry::Point;
use crate::partition::{AnalyticPartition, Domain};

/// Raster of scalar labels `phase + 1` sampled at cell centers.
#[derive(Clone, Debug)]
pub struct ScalarGrid {
    pub origin: Point<2>,
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl ScalarGrid {
    pub fn rasterize(u: &AnalyticPartition<2>, lo: Point<2>, hi: Point<2>, step: f64) -> Self {
        let nx = ((hi[0] - lo[0]) / step).ceil().max(1.0) as usize;
        let ny = ((hi[1] - lo[1]) / step).ceil().max(1.0) as usize;
        let origin = lo.add_scalar(0.5 * step);
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let x = Point::<2>::new(origin[0] + i as f64 * step, origin[1] + j as f64 * step);
                values.push((u.phase(&x) + 1) as f64);
            }
        }
        Self { origin, step, nx, ny, values }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    fn point(&self, i: f64, j: f64) -> Point<2> {
        Point::<2>::new(self.origin[0] + i * self.step, self.origin[1] + j * self.step)
    }

    /// Separable Gaussian with standard deviation `sigma_steps` grid steps,
    /// truncated at three deviations and renormalized at the border.
    pub fn mollify(&self, sigma_steps: f64) -> Self {
        let r = (3.0 * sigma_steps).ceil() as isize;
        let kernel: Vec<f64> = (-r..=r).map(|k| (-0.5 * (k as f64 / sigma_steps).powi(2)).exp()).collect();
        let pass = |src: &[f64], n: usize, m: usize, stride_i: usize, stride_j: usize| {
            let mut out = vec![0.0; src.len()];
            for j in 0..m {
                for i in 0..n {
                    let (mut s, mut wsum) = (0.0, 0.0);
                    for (k, w) in kernel.iter().enumerate() {
                        let ii = i as isize + k as isize - r;
                        if ii < 0 || ii >= n as isize {
                            continue;
                        }
                        s += w * src[ii as usize * stride_i + j * stride_j];
                        wsum += w;
                    }
                    out[i * stride_i + j * stride_j] = s / wsum;
                }
            }
            out
        };
        let rows = pass(&self.values, self.nx, self.ny, 1, self.nx);
        let values = pass(&rows, self.ny, self.nx, self.nx, 1);
        Self { values, ..self.clone() }
    }

    /// Marching-squares segments of the level set `{v = c}`; saddles are
    /// resolved by the average of the four corners.
    pub fn contour(&self, c: f64) -> Vec<(Point<2>, Point<2>)> {
        let mut out = Vec::new();
        for j in 0..self.ny.saturating_sub(1) {
            for i in 0..self.nx.saturating_sub(1) {
                // Corners counter-clockwise from (i, j).
                let v = [self.at(i, j), self.at(i + 1, j), self.at(i + 1, j + 1), self.at(i, j + 1)];
                let pos = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
                let above: Vec<bool> = v.iter().map(|&x| x > c).collect();
                let mut cross = Vec::with_capacity(4);
                for e in 0..4 {
                    let (a, b) = (e, (e + 1) % 4);
                    if above[a] != above[b] {
                        let s = (c - v[a]) / (v[b] - v[a]);
                        let (pa, pb) = (pos[a], pos[b]);
                        cross.push((e, self.point(i as f64 + pa.0 + s * (pb.0 - pa.0), j as f64 + pa.1 + s * (pb.1 - pa.1))));
                    }
                }
                match cross.len() {
                    2 => out.push((cross[0].1, cross[1].1)),
                    4 => {
                        // Edges 0..4 all cross; pair around the corner whose side matches the center.
                        let center_above = v.iter().sum::<f64>() / 4.0 > c;
                        if center_above == above[0] {
                            out.push((cross[0].1, cross[1].1));
                            out.push((cross[2].1, cross[3].1));
                        } else {
                            out.push((cross[3].1, cross[0].1));
                            out.push((cross[1].1, cross[2].1));
                        }
                    }
                    _ => {}
                }
            }
        }
        out
    }
}

fn clipped_length(segments: &[(Point<2>, Point<2>)], domain: Option<&Domain>) -> f64 {
    segments
        .iter()
        .map(|(a, b)| {
            let len = (b - a).norm();
            match domain {
                Some(d) => d.clip_segment(a, b).map_or(0.0, |(s0, s1)| (s1 - s0) * len),
                None => len,
            }
        })
        .sum()
}

/// Mollify-and-threshold baseline for scalar labels `1..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DoublingResult {
    pub thresholds: Vec<f64>,
    /// Interface length of each thresholded level set inside Ω.
    pub lengths: Vec<f64>,
    pub total: f64,
}

/// Rasterizes `u` over the bounding box of Ω (or its bounds), mollifies
/// with a Gaussian of `mollify_steps` grid steps and measures the level
/// sets `{v = k + ½}`, `k = 1..N−1`.
pub fn doubling_baseline(u: &AnalyticPartition<2>, mollify_steps: f64, grid_step: f64) -> DoublingResult {
    let (lo, hi) = u.domain().map_or_else(|| u.bounds(), Domain::bounding_box);
    let grid = ScalarGrid::rasterize(u, lo, hi, grid_step).mollify(mollify_steps);
    let thresholds: Vec<f64> = (1..u.labels().len()).map(|k| k as f64 + 0.5).collect();
    let lengths: Vec<f64> = thresholds.iter().map(|&c| clipped_length(&grid.contour(c), u.domain())).collect();
    DoublingResult { total: lengths.iter().sum(), thresholds, lengths }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{planar, ScenarioKind};

    #[test]
    fn stripe_has_no_doubling() {
        let u = planar(ScenarioKind::Stripe).unwrap();
        let r = doubling_baseline(&u, 4.0, 1.0 / 256.0);
        assert!((r.total - 1.0).abs() < 1e-2, "{r:?}");
    }

    #[test]
    fn circle_contour_length() {
        let u = planar(ScenarioKind::Circle).unwrap();
        let r = doubling_baseline(&u, 2.0, 1.0 / 256.0);
        let exact = std::f64::consts::TAU * 0.3;
        assert!((r.total - exact).abs() / exact < 1e-2, "{r:?}");
    }

    #[test]
    fn triple_junction_doubles_one_arm() {
        let u = planar(ScenarioKind::TripleJunction).unwrap();
        let r = doubling_baseline(&u, 4.0, 1.0 / 512.0);
        assert!(r.total >= 3.0 + 0.75, "{r:?}");
        assert!(r.total <= 4.2, "{r:?}");
    }

    #[test]
    fn saddle_uses_center() {
        let g = ScalarGrid { origin: Point::<2>::zeros(), step: 1.0, nx: 2, ny: 2, values: vec![1.0, 0.0, 0.0, 1.0] };
        let segs = g.contour(0.4);
        assert_eq!(segs.len(), 2);
        // Center 0.5 is above 0.4 so the high corners connect and both segments cut off the low ones.
        let len: f64 = segs.iter().map(|(a, b)| (b - a).norm()).sum();
        assert!((len - 2.0 * (0.4f64.powi(2) * 2.0).sqrt()).abs() < 1e-12, "{segs:?}");
    }
}
