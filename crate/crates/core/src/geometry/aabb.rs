use super::Point;

const LEAF: usize = 4;

#[derive(Clone, Debug)]
struct Node<const D: usize> {
    lo: Point<D>,
    hi: Point<D>,
    start: usize,
    end: usize,
    children: Option<(usize, usize)>,
}

/// Static bounding-volume hierarchy over axis-aligned boxes.
#[derive(Clone, Debug)]
pub struct AabbTree<const D: usize> {
    boxes: Vec<(Point<D>, Point<D>)>,
    order: Vec<usize>,
    nodes: Vec<Node<D>>,
}

impl<const D: usize> AabbTree<D> {
    pub fn new(boxes: Vec<(Point<D>, Point<D>)>) -> Self {
        let mut order: Vec<usize> = (0..boxes.len()).collect();
        let mut nodes = Vec::new();
        if !boxes.is_empty() {
            build(&boxes, &mut order, 0, boxes.len(), &mut nodes);
        }
        Self { boxes, order, nodes }
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Indices of boxes meeting `[lo, hi]`, in increasing order.
    pub fn query(&self, lo: &Point<D>, hi: &Point<D>) -> Vec<usize> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            return out;
        }
        let mut stack = vec![0usize];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            if !overlaps(&node.lo, &node.hi, lo, hi) {
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    stack.push(l);
                    stack.push(r);
                }
                None => {
                    for &i in &self.order[node.start..node.end] {
                        let (blo, bhi) = &self.boxes[i];
                        if overlaps(blo, bhi, lo, hi) {
                            out.push(i);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The `k` smallest `(dist(i), i)` over boxes, found by branch and bound.
    /// `dist` must be at least the distance from `x` to box `i`; `None` skips a box.
    pub fn nearest_by<F: FnMut(usize) -> Option<f64>>(&self, x: &Point<D>, k: usize, mut dist: F) -> Vec<(f64, usize)> {
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        if self.nodes.is_empty() || k == 0 {
            return best;
        }
        let bound = |best: &Vec<(f64, usize)>| if best.len() < k { f64::INFINITY } else { best[k - 1].0 };
        let mut stack = vec![(0usize, box_distance(x, &self.nodes[0].lo, &self.nodes[0].hi))];
        while let Some((n, d)) = stack.pop() {
            if d > bound(&best) {
                continue;
            }
            let node = &self.nodes[n];
            match node.children {
                Some((l, r)) => {
                    let dl = box_distance(x, &self.nodes[l].lo, &self.nodes[l].hi);
                    let dr = box_distance(x, &self.nodes[r].lo, &self.nodes[r].hi);
                    // Nearer child popped first.
                    if dl <= dr {
                        stack.push((r, dr));
                        stack.push((l, dl));
                    } else {
                        stack.push((l, dl));
                        stack.push((r, dr));
                    }
                }
                None => {
                    for &i in &self.order[node.start..node.end] {
                        let (blo, bhi) = &self.boxes[i];
                        if box_distance(x, blo, bhi) > bound(&best) {
                            continue;
                        }
                        if let Some(di) = dist(i) {
                            let c = (di, i);
                            if best.len() < k || c < best[k - 1] {
                                let at = best.partition_point(|b| *b < c);
                                best.insert(at, c);
                                best.truncate(k);
                            }
                        }
                    }
                }
            }
        }
        best
    }

    /// Lowest index among boxes containing `x` that satisfy `pred`.
    pub fn find_containing<F: FnMut(usize) -> bool>(&self, x: &Point<D>, mut pred: F) -> Option<usize> {
        let mut best: Option<usize> = None;
        if self.nodes.is_empty() {
            return best;
        }
        let mut stack = vec![0usize];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            if !overlaps(&node.lo, &node.hi, x, x) {
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    stack.push(l);
                    stack.push(r);
                }
                None => {
                    for &i in &self.order[node.start..node.end] {
                        let (blo, bhi) = &self.boxes[i];
                        if best.map_or(true, |b| i < b) && overlaps(blo, bhi, x, x) && pred(i) {
                            best = Some(i);
                        }
                    }
                }
            }
        }
        best
    }

    /// Boxes meeting the cube of half-width `r` about `x`.
    pub fn query_ball(&self, x: &Point<D>, r: f64) -> Vec<usize> {
        self.query(&x.add_scalar(-r), &x.add_scalar(r))
    }
}

fn box_distance<const D: usize>(x: &Point<D>, lo: &Point<D>, hi: &Point<D>) -> f64 {
    (0..D).map(|k| (lo[k] - x[k]).max(x[k] - hi[k]).max(0.0).powi(2)).sum::<f64>().sqrt()
}

fn overlaps<const D: usize>(alo: &Point<D>, ahi: &Point<D>, blo: &Point<D>, bhi: &Point<D>) -> bool {
    (0..D).all(|k| alo[k] <= bhi[k] && blo[k] <= ahi[k])
}

fn build<const D: usize>(
    boxes: &[(Point<D>, Point<D>)],
    order: &mut [usize],
    start: usize,
    end: usize,
    nodes: &mut Vec<Node<D>>,
) -> usize {
    let mut lo = boxes[order[start]].0;
    let mut hi = boxes[order[start]].1;
    let mut clo = (boxes[order[start]].0 + boxes[order[start]].1) * 0.5;
    let mut chi = clo;
    for &i in &order[start..end] {
        lo = lo.inf(&boxes[i].0);
        hi = hi.sup(&boxes[i].1);
        let c = (boxes[i].0 + boxes[i].1) * 0.5;
        clo = clo.inf(&c);
        chi = chi.sup(&c);
    }
    let id = nodes.len();
    nodes.push(Node { lo, hi, start, end, children: None });
    if end - start <= LEAF {
        return id;
    }
    let axis = (chi - clo).imax();
    let mid = (end - start) / 2;
    order[start..end].select_nth_unstable_by(mid, |&a, &b| {
        let ca = boxes[a].0[axis] + boxes[a].1[axis];
        let cb = boxes[b].0[axis] + boxes[b].1[axis];
        ca.total_cmp(&cb)
    });
    let l = build(boxes, order, start, start + mid, nodes);
    let r = build(boxes, order, start + mid, end, nodes);
    nodes[id].children = Some((l, r));
    id
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn query_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let boxes: Vec<(Point<2>, Point<2>)> = (0..300)
            .map(|_| {
                let c = Point::<2>::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
                let h = Point::<2>::new(rng.gen_range(0.0..0.2), rng.gen_range(0.0..0.01));
                (c - h, c + h)
            })
            .collect();
        let tree = AabbTree::new(boxes.clone());
        for _ in 0..100 {
            let c = Point::<2>::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            let r = rng.gen_range(0.0..0.1);
            let expect: Vec<usize> = (0..boxes.len())
                .filter(|&i| overlaps(&boxes[i].0, &boxes[i].1, &c.add_scalar(-r), &c.add_scalar(r)))
                .collect();
            assert_eq!(tree.query_ball(&c, r), expect);
            assert_eq!(tree.find_containing(&c, |i| i % 2 == 1), tree.query_ball(&c, 0.0).into_iter().find(|i| i % 2 == 1));
            let d = |i: usize| box_distance(&c, &boxes[i].0, &boxes[i].1) + i as f64 * 1e-6;
            let mut all: Vec<(f64, usize)> = (0..boxes.len()).map(|i| (d(i), i)).collect();
            all.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(tree.nearest_by(&c, 3, |i| Some(d(i))), all[..3].to_vec());
        }
    }
}
