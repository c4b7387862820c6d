use super::Point;

const LEAF: usize = 8;

#[derive(Clone, Debug)]
struct Node {
    lo: usize,
    hi: usize,
    axis: usize,
    split: f64,
    children: Option<(usize, usize)>,
}

/// Static kd-tree over a point set.
#[derive(Clone, Debug)]
pub struct KdTree<const D: usize> {
    points: Vec<Point<D>>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl<const D: usize> KdTree<D> {
    pub fn new(points: Vec<Point<D>>) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        let mut nodes = Vec::new();
        if !points.is_empty() {
            build(&points, &mut order, 0, points.len(), &mut nodes);
        }
        Self { points, order, nodes }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point<D>] {
        &self.points
    }

    /// Index and distance of the nearest point (lowest index on ties).
    pub fn nearest(&self, x: &Point<D>) -> Option<(usize, f64)> {
        let mut best = (usize::MAX, f64::INFINITY);
        if !self.nodes.is_empty() {
            self.nearest_rec(0, x, &mut best);
        }
        (best.0 != usize::MAX).then(|| (best.0, best.1.sqrt()))
    }

    fn nearest_rec(&self, n: usize, x: &Point<D>, best: &mut (usize, f64)) {
        let node = &self.nodes[n];
        match node.children {
            None => {
                for &i in &self.order[node.lo..node.hi] {
                    let d = (self.points[i] - x).norm_squared();
                    if d < best.1 || (d == best.1 && i < best.0) {
                        *best = (i, d);
                    }
                }
            }
            Some((l, r)) => {
                let diff = x[node.axis] - node.split;
                let (near, far) = if diff <= 0.0 { (l, r) } else { (r, l) };
                self.nearest_rec(near, x, best);
                if diff * diff <= best.1 {
                    self.nearest_rec(far, x, best);
                }
            }
        }
    }

    /// The `k` nearest points as `(index, distance)`, closest first.
    pub fn k_nearest(&self, x: &Point<D>, k: usize) -> Vec<(usize, f64)> {
        let mut heap: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        if !self.nodes.is_empty() && k > 0 {
            self.knn_rec(0, x, k, &mut heap);
        }
        heap.into_iter().map(|(d, i)| (i, d.sqrt())).collect()
    }

    fn knn_rec(&self, n: usize, x: &Point<D>, k: usize, heap: &mut Vec<(f64, usize)>) {
        let node = &self.nodes[n];
        match node.children {
            None => {
                for &i in &self.order[node.lo..node.hi] {
                    let d = (self.points[i] - x).norm_squared();
                    if heap.len() < k || (d, i) < *heap.last().unwrap() {
                        let pos = heap.partition_point(|e| *e < (d, i));
                        heap.insert(pos, (d, i));
                        heap.truncate(k);
                    }
                }
            }
            Some((l, r)) => {
                let diff = x[node.axis] - node.split;
                let (near, far) = if diff <= 0.0 { (l, r) } else { (r, l) };
                self.knn_rec(near, x, k, heap);
                if heap.len() < k || diff * diff <= heap.last().unwrap().0 {
                    self.knn_rec(far, x, k, heap);
                }
            }
        }
    }

    /// Indices of points with distance `< radius`, in increasing index order.
    pub fn within(&self, x: &Point<D>, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.nodes.is_empty() {
            self.within_rec(0, x, radius * radius, &mut out);
        }
        out.sort_unstable();
        out
    }

    fn within_rec(&self, n: usize, x: &Point<D>, r2: f64, out: &mut Vec<usize>) {
        let node = &self.nodes[n];
        match node.children {
            None => {
                for &i in &self.order[node.lo..node.hi] {
                    if (self.points[i] - x).norm_squared() < r2 {
                        out.push(i);
                    }
                }
            }
            Some((l, r)) => {
                let diff = x[node.axis] - node.split;
                if diff <= 0.0 || diff * diff < r2 {
                    self.within_rec(l, x, r2, out);
                }
                if diff >= 0.0 || diff * diff < r2 {
                    self.within_rec(r, x, r2, out);
                }
            }
        }
    }
}

fn build<const D: usize>(points: &[Point<D>], order: &mut [usize], lo: usize, hi: usize, nodes: &mut Vec<Node>) -> usize {
    let id = nodes.len();
    nodes.push(Node { lo, hi, axis: 0, split: 0.0, children: None });
    if hi - lo <= LEAF {
        return id;
    }
    let slice = &mut order[lo..hi];
    let mut min = points[slice[0]];
    let mut max = min;
    for &i in slice.iter() {
        min = min.inf(&points[i]);
        max = max.sup(&points[i]);
    }
    let axis = (max - min).imax();
    if max[axis] == min[axis] {
        return id;
    }
    let mid = slice.len() / 2;
    slice.select_nth_unstable_by(mid, |&a, &b| points[a][axis].total_cmp(&points[b][axis]));
    let split = points[slice[mid]][axis];
    let l = build(points, order, lo, lo + mid, nodes);
    let r = build(points, order, lo + mid, hi, nodes);
    nodes[id].axis = axis;
    nodes[id].split = split;
    nodes[id].children = Some((l, r));
    id
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut pts: Vec<Point<3>> = (0..500).map(|_| Point::<3>::from_fn(|_, _| rng.gen_range(0.0..1.0))).collect();
        // Lattice duplicates in one coordinate.
        for i in 0..100 {
            pts.push(Point::<3>::new(0.5, (i % 10) as f64 * 0.1, 0.25));
        }
        let tree = KdTree::new(pts.clone());
        for _ in 0..200 {
            let x = Point::<3>::from_fn(|_, _| rng.gen_range(-0.1..1.1));
            let mut all: Vec<(f64, usize)> = pts.iter().enumerate().map(|(i, p)| ((p - x).norm_squared(), i)).collect();
            all.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(tree.nearest(&x).unwrap().0, all[0].1);
            let knn: Vec<usize> = tree.k_nearest(&x, 7).iter().map(|e| e.0).collect();
            let expect: Vec<usize> = all[..7].iter().map(|e| e.1).collect();
            assert_eq!(knn, expect);
            let mut inside: Vec<usize> = all.iter().filter(|e| e.0 < 0.04).map(|e| e.1).collect();
            inside.sort_unstable();
            assert_eq!(tree.within(&x, 0.2), inside);
        }
    }
}
