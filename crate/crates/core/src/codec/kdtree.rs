//! Static kd-tree over a row-major coordinate buffer.
//!
//! Queries return *all* points at the minimal squared distance. A subtree is
//! skipped only when a lower bound on its distances is strictly larger than
//! the current best. The bound sums per-axis squared offsets to the cell in
//! the same order as `squared_distance`, and each offset is no larger than
//! the matching coordinate difference, so by monotonicity of rounding the
//! bound never exceeds a computed distance in that cell.

const LEAF_SIZE: usize = 16;

enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

pub(crate) struct KdTree {
    dim: usize,
    /// Original point id at each tree position.
    index: Vec<usize>,
    /// Coordinates in tree order, so every leaf is one contiguous block.
    points: Vec<f64>,
    nodes: Vec<Node>,
}

impl KdTree {
    pub(crate) fn build(coords: &[f64], dim: usize) -> Self {
        let n = coords.len() / dim;
        let mut tree = Self {
            dim,
            index: (0..n).collect(),
            points: Vec::new(),
            nodes: Vec::with_capacity(2 * n / LEAF_SIZE + 1),
        };
        tree.build_node(coords, 0, n);
        tree.points = tree.index.iter().flat_map(|&i| &coords[i * dim..(i + 1) * dim]).copied().collect();
        tree
    }

    fn build_node(&mut self, coords: &[f64], start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let dim = self.dim;
        let slice = &mut self.index[start..end];

        let mut axis = 0;
        let mut widest = f64::NEG_INFINITY;
        for a in 0..dim {
            let (lo, hi) = slice.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                let v = coords[i * dim + a];
                (lo.min(v), hi.max(v))
            });
            if hi - lo > widest {
                widest = hi - lo;
                axis = a;
            }
        }
        let mid = slice.len() / 2;
        slice.select_nth_unstable_by(mid, |&a, &b| {
            coords[a * dim + axis].total_cmp(&coords[b * dim + axis])
        });
        let value = coords[slice[mid] * dim + axis];

        self.nodes.push(Node::Leaf { start, end }); // placeholder
        let left = self.build_node(coords, start, start + mid);
        let right = self.build_node(coords, start + mid, end);
        self.nodes[id] = Node::Split { axis, value, left, right };
        id
    }

    /// Collects into `ties` every point other than `exclude` at the minimal
    /// squared distance from `query`. `offsets` is scratch space.
    pub(crate) fn nearest_ties(
        &self,
        query: &[f64],
        exclude: usize,
        offsets: &mut Vec<f64>,
        ties: &mut Vec<usize>,
    ) {
        offsets.clear();
        offsets.resize(self.dim, 0.0);
        let mut q = Query { query, exclude, best: f64::INFINITY, offsets, ties };
        self.search(0, &mut q);
    }

    fn search(&self, node: usize, q: &mut Query<'_>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for pos in start..end {
                    let i = self.index[pos];
                    if i == q.exclude {
                        continue;
                    }
                    let p = &self.points[pos * self.dim..(pos + 1) * self.dim];
                    let Some(d) = bounded_distance(q.query, p, q.best) else {
                        continue;
                    };
                    if d < q.best {
                        q.best = d;
                        q.ties.clear();
                        q.ties.push(i);
                    } else {
                        q.ties.push(i);
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let x = q.query[axis];
                let (near, far) = if x < value { (left, right) } else { (right, left) };
                self.search(near, q);
                let old = q.offsets[axis];
                q.offsets[axis] = if x < value { value - x } else { x - value };
                let bound = q.offsets.iter().fold(0.0, |acc, o| acc + o * o);
                if bound <= q.best {
                    self.search(far, q);
                }
                q.offsets[axis] = old;
            }
        }
    }
}

struct Query<'a> {
    query: &'a [f64],
    exclude: usize,
    best: f64,
    offsets: &'a mut Vec<f64>,
    ties: &'a mut Vec<usize>,
}

/// The squared distance, or `None` as soon as a partial sum exceeds `limit`.
/// Partial sums only grow, so an early exit never hides a tie.
#[inline]
fn bounded_distance(a: &[f64], b: &[f64], limit: f64) -> Option<f64> {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
        if acc > limit {
            return None;
        }
    }
    Some(acc)
}
