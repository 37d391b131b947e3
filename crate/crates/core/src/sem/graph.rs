//! Ground-truth local structure read off a DAG.

use serde::{Deserialize, Serialize};

/// Per-node structural sets, all ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub parents: Vec<Vec<usize>>,
    pub children: Vec<Vec<usize>>,
    pub spouses: Vec<Vec<usize>>,
    pub markov_boundary: Vec<Vec<usize>>,
    /// No skeleton cycle contains two or more members of the node's boundary.
    pub tree_neighborhood: Vec<bool>,
}

/// Builds ground truth for a DAG over `n` nodes given as `(parent, child)` edges.
pub fn ground_truth_from_edges(n: usize, edges: &[(usize, usize)]) -> GroundTruth {
    let mut parents = vec![Vec::new(); n];
    let mut children = vec![Vec::new(); n];
    for &(p, c) in edges {
        parents[c].push(p);
        children[p].push(c);
    }
    parents.iter_mut().chain(children.iter_mut()).for_each(|s| {
        s.sort_unstable();
        s.dedup();
    });

    let spouses: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut s: Vec<usize> = children[v]
                .iter()
                .flat_map(|&c| parents[c].iter().copied())
                .filter(|&u| u != v)
                .collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();

    let markov_boundary: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut b: Vec<usize> =
                parents[v].iter().chain(&children[v]).chain(&spouses[v]).copied().collect();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();

    let blocks = cyclic_blocks(n, edges);
    let tree_neighborhood = markov_boundary
        .iter()
        .map(|mb| {
            blocks
                .iter()
                .all(|block| mb.iter().filter(|v| block.contains(v)).count() <= 1)
        })
        .collect();

    GroundTruth { parents, children, spouses, markov_boundary, tree_neighborhood }
}

/// Vertex sets of the biconnected components of the skeleton that contain a
/// cycle (at least three vertices). Two distinct vertices share a simple
/// cycle exactly when they share such a block.
fn cyclic_blocks(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if !adj[a].contains(&b) {
            adj[a].push(b);
            adj[b].push(a);
        }
    }

    struct State {
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<(usize, usize)>,
        blocks: Vec<Vec<usize>>,
    }

    fn dfs(u: usize, parent: Option<usize>, adj: &[Vec<usize>], st: &mut State) {
        st.time += 1;
        st.disc[u] = st.time;
        st.low[u] = st.time;
        for &w in &adj[u] {
            if Some(w) == parent {
                continue;
            }
            if st.disc[w] == 0 {
                st.stack.push((u, w));
                dfs(w, Some(u), adj, st);
                st.low[u] = st.low[u].min(st.low[w]);
                if st.low[w] >= st.disc[u] {
                    let mut block = Vec::new();
                    while let Some((a, b)) = st.stack.pop() {
                        block.push(a);
                        block.push(b);
                        if (a, b) == (u, w) {
                            break;
                        }
                    }
                    block.sort_unstable();
                    block.dedup();
                    if block.len() >= 3 {
                        st.blocks.push(block);
                    }
                }
            } else if st.disc[w] < st.disc[u] {
                st.stack.push((u, w));
                st.low[u] = st.low[u].min(st.disc[w]);
            }
        }
    }

    let mut st = State { disc: vec![0; n], low: vec![0; n], time: 0, stack: Vec::new(), blocks: Vec::new() };
    for v in 0..n {
        if st.disc[v] == 0 {
            dfs(v, None, &adj, &mut st);
        }
    }
    st.blocks
}
