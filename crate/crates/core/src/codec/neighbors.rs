//! Exact Euclidean nearest neighbours with seeded tie-breaking.
//!
//! Every strategy here returns, for each row `j`, one index drawn uniformly
//! from the set of rows `k != j` at the minimal squared distance from `j`.
//! The draw is a function of `(seed, j, candidates sorted by index)` only,
//! so the kd-tree and the linear scan agree bit-for-bit.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kdtree::KdTree;
use crate::error::{Error, Result};
use crate::seeds;

/// Dimension up to which the kd-tree is used by [`NeighborStrategy::Auto`].
pub const KD_TREE_MAX_DIM: usize = 10;

/// Row-major `n × dim` point matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Points {
    data: Vec<f64>,
    n: usize,
    dim: usize,
}

impl Points {
    pub fn from_columns(columns: &[&[f64]]) -> Result<Self> {
        let dim = columns.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch("point set needs at least one coordinate".into()));
        }
        let n = columns[0].len();
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch("coordinate columns differ in length".into()));
        }
        let mut data = Vec::with_capacity(n * dim);
        for i in 0..n {
            data.extend(columns.iter().map(|c| c[i]));
        }
        Ok(Self { data, n, dim })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let dim = rows.first().map_or(0, Vec::len);
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("rows must share a positive dimension".into()));
        }
        Ok(Self { data: rows.concat(), n, dim })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

/// Squared Euclidean distance, accumulated left to right from `0.0`.
#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| {
        let d = x - y;
        acc + d * d
    })
}

/// Position in `0..count` of the tie winner for query row `query`.
pub fn tie_choice(seed: u64, query: usize, count: usize) -> usize {
    debug_assert!(count > 0);
    if count == 1 {
        return 0;
    }
    seeds::rng(seed, &[query as u64]).random_range(0..count)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborIndex {
    pub nn: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborStrategy {
    /// kd-tree up to [`KD_TREE_MAX_DIM`] coordinates, linear scan above.
    #[default]
    Auto,
    KdTree,
    LinearScan,
}

pub fn nearest_neighbors(points: &Points, seed: u64) -> Result<NeighborIndex> {
    nearest_neighbors_with(points, seed, NeighborStrategy::Auto)
}

pub fn nearest_neighbors_with(
    points: &Points,
    seed: u64,
    strategy: NeighborStrategy,
) -> Result<NeighborIndex> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    let groups = DistinctPoints::new(points);
    let search = match strategy {
        NeighborStrategy::LinearScan => Search::Linear,
        _ if groups.dim == 1 => Search::Sorted,
        NeighborStrategy::KdTree => Search::Tree(KdTree::build(&groups.coords, groups.dim)),
        NeighborStrategy::Auto if groups.dim <= KD_TREE_MAX_DIM => {
            Search::Tree(KdTree::build(&groups.coords, groups.dim))
        }
        NeighborStrategy::Auto => Search::Linear,
    };

    // Queries run in sorted location order so consecutive ones touch nearby tree nodes.
    let found: Vec<usize> = groups
        .members
        .par_iter()
        .map_init(
            || Scratch::default(),
            |scratch, &j| groups.neighbor_of(j, seed, &search, scratch),
        )
        .collect();
    let mut nn = vec![0; n];
    for (&j, k) in groups.members.iter().zip(found) {
        nn[j] = k;
    }
    Ok(NeighborIndex { nn })
}

enum Search {
    Sorted,
    Tree(KdTree),
    Linear,
}

#[derive(Default)]
struct Scratch {
    ties: Vec<usize>,
    candidates: Vec<usize>,
    offsets: Vec<f64>,
}

/// Points collapsed to distinct coordinates. Duplicated rows are each
/// other's nearest neighbours at distance zero, so only rows with a unique
/// location need a spatial query.
struct DistinctPoints {
    dim: usize,
    /// Row-major coordinates of the distinct locations, lexicographically sorted.
    coords: Vec<f64>,
    /// Original row indices grouped by location, ascending within a group.
    members: Vec<usize>,
    /// `members[offsets[g]..offsets[g + 1]]` are the rows at location `g`.
    offsets: Vec<usize>,
    group_of: Vec<usize>,
}

impl DistinctPoints {
    fn new(points: &Points) -> Self {
        let n = points.len();
        let dim = points.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by(|&a, &b| {
            lex_cmp(points.row(a), points.row(b)).then(a.cmp(&b))
        });

        let mut coords = Vec::new();
        let mut offsets = Vec::new();
        let mut group_of = vec![0; n];
        for (pos, &i) in order.iter().enumerate() {
            let new_group = pos == 0 || points.row(order[pos - 1]) != points.row(i);
            if new_group {
                offsets.push(pos);
                coords.extend_from_slice(points.row(i));
            }
            group_of[i] = offsets.len() - 1;
        }
        offsets.push(n);
        Self { dim, coords, members: order, offsets, group_of }
    }

    fn n_groups(&self) -> usize {
        self.offsets.len() - 1
    }

    fn coords_of(&self, g: usize) -> &[f64] {
        &self.coords[g * self.dim..(g + 1) * self.dim]
    }

    fn group(&self, g: usize) -> &[usize] {
        &self.members[self.offsets[g]..self.offsets[g + 1]]
    }

    fn neighbor_of(&self, j: usize, seed: u64, search: &Search, scratch: &mut Scratch) -> usize {
        let Scratch { ties, candidates, offsets } = scratch;
        let g = self.group_of[j];
        let own = self.group(g);
        if own.len() > 1 {
            let k = tie_choice(seed, j, own.len() - 1);
            let pos = own.iter().position(|&m| m == j).expect("row belongs to its group");
            return own[if k < pos { k } else { k + 1 }];
        }

        ties.clear();
        match search {
            Search::Sorted => self.sorted_ties(g, ties),
            Search::Tree(tree) => tree.nearest_ties(self.coords_of(g), g, offsets, ties),
            Search::Linear => self.linear_ties(g, ties),
        }
        if let [only] = ties.as_slice() {
            let group = self.group(*only);
            if group.len() == 1 {
                return group[0];
            }
        }
        candidates.clear();
        for &t in ties.iter() {
            candidates.extend_from_slice(self.group(t));
        }
        candidates.sort_unstable();
        candidates[tie_choice(seed, j, candidates.len())]
    }

    /// One-dimensional case: locations are sorted, so the nearest ones are
    /// adjacent. Distances are non-decreasing away from `g`, which lets the
    /// scan stop at the first strictly larger one.
    fn sorted_ties(&self, g: usize, ties: &mut Vec<usize>) {
        let x = self.coords[g];
        let m = self.n_groups();
        let dist = |h: usize| {
            let d = x - self.coords[h];
            d * d
        };
        let left = (g > 0).then(|| dist(g - 1));
        let right = (g + 1 < m).then(|| dist(g + 1));
        let best = match (left, right) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!("a single location with one member means n < 2"),
        };
        let mut h = g;
        while h > 0 && dist(h - 1) == best {
            h -= 1;
            ties.push(h);
        }
        let mut h = g + 1;
        while h < m && dist(h) == best {
            ties.push(h);
            h += 1;
        }
    }

    fn linear_ties(&self, g: usize, ties: &mut Vec<usize>) {
        let q = self.coords_of(g);
        let mut best = f64::INFINITY;
        for h in (0..self.n_groups()).filter(|&h| h != g) {
            let d = squared_distance(q, self.coords_of(h));
            if d < best {
                best = d;
                ties.clear();
                ties.push(h);
            } else if d == best {
                ties.push(h);
            }
        }
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).expect("finite coordinates") {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}
