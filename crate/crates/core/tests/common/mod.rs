//! Brute-force reference implementations shared by the integration tests.
//! Everything here is written from the definitions, without reusing the
//! crate's rank, neighbour or graph code. Only the tie-break draw is shared,
//! since oracle and production must agree on which tied neighbour wins.
#![allow(dead_code)]

use dagfoci_core::codec::tie_choice;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn ranks(y: &[f64]) -> (Vec<i128>, Vec<i128>) {
    let r = y.iter().map(|a| y.iter().filter(|b| *b <= a).count() as i128).collect();
    let l = y.iter().map(|a| y.iter().filter(|b| *b >= a).count() as i128).collect();
    (r, l)
}

fn row(cols: &[&[f64]], i: usize) -> Vec<f64> {
    cols.iter().map(|c| c[i]).collect()
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..a.len() {
        let d = a[k] - b[k];
        s += d * d;
    }
    s
}

/// O(n²) nearest neighbours: all minimisers in index order, then the seeded pick.
pub fn nearest(cols: &[&[f64]], seed: u64) -> Vec<usize> {
    let n = cols[0].len();
    (0..n)
        .map(|j| {
            let pj = row(cols, j);
            let d: Vec<(usize, f64)> =
                (0..n).filter(|&k| k != j).map(|k| (k, dist2(&pj, &row(cols, k)))).collect();
            let best = d.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let tied: Vec<usize> = d.iter().filter(|p| p.1 == best).map(|p| p.0).collect();
            tied[tie_choice(seed, j, tied.len())]
        })
        .collect()
}

/// Unconditional `(t, q_n)`; `None` when `y` is constant.
pub fn unconditional(y: &[f64], z: &[&[f64]], seed: u64) -> Option<(f64, f64)> {
    let n = y.len() as i128;
    let (r, l) = ranks(y);
    let m = nearest(z, seed);
    let mut num = 0i128;
    let mut den = 0i128;
    for i in 0..y.len() {
        num += n * r[i].min(r[m[i]]) - l[i] * l[i];
        den += l[i] * (n - l[i]);
    }
    let q = num as f64 / (n * n * n) as f64;
    (den != 0).then(|| (num as f64 / den as f64, q))
}

/// Conditional `t`; `Err(())` when the denominator vanishes.
pub fn conditional(y: &[f64], z: &[&[f64]], x: &[&[f64]], seed: u64) -> Result<f64, ()> {
    if x.is_empty() {
        return unconditional(y, z, seed).map(|v| v.0).ok_or(());
    }
    let (r, _) = ranks(y);
    let joint: Vec<&[f64]> = x.iter().chain(z).copied().collect();
    let nx = nearest(x, seed);
    let nj = nearest(&joint, seed);
    let mut num = 0i128;
    let mut den = 0i128;
    for j in 0..y.len() {
        num += r[j].min(r[nj[j]]) - r[j].min(r[nx[j]]);
        den += r[j] - r[j].min(r[nx[j]]);
    }
    if den == 0 {
        Err(())
    } else {
        Ok(num as f64 / den as f64)
    }
}

/// A random test instance: response, predictors, conditioning columns.
pub struct Instance {
    pub y: Vec<f64>,
    pub z: Vec<Vec<f64>>,
    pub x: Vec<Vec<f64>>,
    pub seed: u64,
}

impl Instance {
    pub fn z(&self) -> Vec<&[f64]> {
        self.z.iter().map(Vec::as_slice).collect()
    }

    pub fn x(&self) -> Vec<&[f64]> {
        self.x.iter().map(Vec::as_slice).collect()
    }
}

/// `n ≤ max_n`, one to three predictors, zero to three conditioning columns.
/// Half the instances draw from a small integer grid, so ties are common.
pub fn random_instance(rng: &mut ChaCha8Rng, max_n: usize) -> Instance {
    let n = rng.random_range(2..=max_n);
    let q = rng.random_range(1..=3);
    let s = rng.random_range(0..=3);
    let tied = rng.random_bool(0.5);
    let levels = rng.random_range(2..=6);
    let col = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..n)
            .map(|_| {
                if tied {
                    rng.random_range(0..levels) as f64
                } else {
                    rng.random_range(-1.0..1.0)
                }
            })
            .collect()
    };
    let mut y = col(rng);
    // Dependence between y and the first predictor keeps the values away from 0.
    let z: Vec<Vec<f64>> = (0..q).map(|_| col(rng)).collect();
    if rng.random_bool(0.5) {
        for (a, b) in y.iter_mut().zip(&z[0]) {
            *a += b;
        }
    }
    let x = (0..s).map(|_| col(rng)).collect();
    Instance { y, z, x, seed: rng.random() }
}

pub fn instance_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random DAG over `n` nodes as `(parent, child)` edges, with nodes
/// relabelled so the topological order is hidden.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut label: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        label.swap(i, rng.random_range(0..=i));
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                edges.push((label[a], label[b]));
            }
        }
    }
    edges
}

/// Markov boundary as the neighbourhood in the moral graph.
pub fn moral_boundary(n: usize, edges: &[(usize, usize)], v: usize) -> Vec<usize> {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    for c in 0..n {
        let pa: Vec<usize> = edges.iter().filter(|e| e.1 == c).map(|e| e.0).collect();
        for &a in &pa {
            for &b in &pa {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
    }
    (0..n).filter(|&u| adj[v][u]).collect()
}

/// Every simple cycle of the undirected skeleton, as vertex lists.
pub fn skeleton_cycles(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut out = Vec::new();
    // Enumerate each cycle from its smallest vertex.
    fn extend(
        start: usize,
        path: &mut Vec<usize>,
        adj: &[Vec<bool>],
        out: &mut Vec<Vec<usize>>,
    ) {
        let last = *path.last().unwrap();
        for next in 0..adj.len() {
            if !adj[last][next] {
                continue;
            }
            if next == start && path.len() >= 3 {
                out.push(path.clone());
            } else if next > start && !path.contains(&next) {
                path.push(next);
                extend(start, path, adj, out);
                path.pop();
            }
        }
    }
    for s in 0..n {
        extend(s, &mut vec![s], &adj, &mut out);
    }
    out
}

pub fn tree_neighborhood(n: usize, edges: &[(usize, usize)], v: usize) -> bool {
    let mb = moral_boundary(n, edges, v);
    skeleton_cycles(n, edges)
        .iter()
        .all(|c| c.iter().filter(|u| mb.contains(u)).count() <= 1)
}
