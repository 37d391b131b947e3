//! DAG-FOCI: parental-set identification around a target variable.
//!
//! 1. Estimate the Markov boundary of the target, then of each boundary member
//!    (the target itself is a candidate in that second layer).
//! 2. Link boundary members `i – j` when each lies in the other's boundary,
//!    split the graph into connected components, and keep a component only
//!    when all of its pairs pass a marginal independence test. Singleton
//!    components and the empty set are always kept.
//! 3. Exactly one kept set with more than one member is the parental set.
//!    If every kept set has at most one member, all of them are returned.
//!    Anything else is reported as undetectable.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{ColumnSelection, Dataset};
use crate::error::{Error, Result};
use crate::foci::{foci_select, MarkovBoundaryEstimate};
use crate::indep_test::{
    permutation_independence_test, PermutationTestResult, DEFAULT_ALPHA, DEFAULT_PERMUTATIONS,
};
use crate::seeds;

pub const UNDETECTABLE_MESSAGE: &str = "DAG-FOCI is not able to detect the parents";

const STAGE_TWO_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DagFociConfig {
    pub n_perms: usize,
    pub alpha: f64,
    pub seed: u64,
    /// Optional cap on every FOCI selection.
    pub max_boundary: Option<usize>,
}

impl Default for DagFociConfig {
    fn default() -> Self {
        Self { n_perms: DEFAULT_PERMUTATIONS, alpha: DEFAULT_ALPHA, seed: 0, max_boundary: None }
    }
}

impl DagFociConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageOne {
    pub target: MarkovBoundaryEstimate,
    /// Boundary of every member of the target's boundary, keyed by column.
    pub members: BTreeMap<usize, MarkovBoundaryEstimate>,
}

pub fn stage_one(d: &Dataset, target: usize, config: &DagFociConfig) -> Result<StageOne> {
    let sel = ColumnSelection::all_others(target, d.n_cols())?;
    let target_mb = foci_select(d, &sel, config.seed, config.max_boundary)?;
    let members = target_mb
        .selected
        .par_iter()
        .map(|&j| {
            let sel = ColumnSelection::all_others(j, d.n_cols())?;
            Ok((j, foci_select(d, &sel, config.seed, config.max_boundary)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(StageOne { target: target_mb, members })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterGraph {
    /// The target's estimated boundary, ascending.
    pub vertices: Vec<usize>,
    /// Mutual-membership edges `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
    /// Connected components, each ascending, ordered by smallest member.
    pub components: Vec<Vec<usize>>,
}

pub fn build_cluster_graph(layers: &StageOne) -> Result<ClusterGraph> {
    let vertices = layers.target.sorted();
    let keys: Vec<usize> = layers.members.keys().copied().collect();
    if keys != vertices {
        return Err(Error::InconsistentLayers(format!(
            "boundary {vertices:?} but second layer covers {keys:?}"
        )));
    }
    let mut edges = Vec::new();
    for (a, &i) in vertices.iter().enumerate() {
        for &j in &vertices[a + 1..] {
            if layers.members[&j].contains(i) && layers.members[&i].contains(j) {
                edges.push((i, j));
            }
        }
    }
    let components = connected_components(&vertices, &edges);
    Ok(ClusterGraph { vertices, edges, components })
}

fn connected_components(vertices: &[usize], edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let pos = |v: usize| vertices.binary_search(&v).expect("edge endpoint is a vertex");
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(i, j) in edges {
        let (a, b) = (find(&mut parent, pos(i)), find(&mut parent, pos(j)));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..vertices.len() {
        let root = find(&mut parent, k);
        groups.entry(root).or_default().push(vertices[k]);
    }
    // Roots are the smallest position in each component, so the map is
    // already ordered by smallest member.
    groups.into_values().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairTest {
    pub i: usize,
    pub j: usize,
    pub result: PermutationTestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateCollection {
    /// Admitted sets, starting with the empty set.
    pub sets: Vec<Vec<usize>>,
    /// Every pairwise test run, grouped by component.
    pub tests: Vec<PairTest>,
    /// Multi-member components dropped because some pair was dependent.
    pub rejected: Vec<Vec<usize>>,
}

impl CandidateCollection {
    pub fn from_sets(mut sets: Vec<Vec<usize>>) -> Self {
        for s in sets.iter_mut() {
            s.sort_unstable();
        }
        if !sets.iter().any(Vec::is_empty) {
            sets.insert(0, Vec::new());
        }
        Self { sets, tests: Vec::new(), rejected: Vec::new() }
    }
}

pub fn stage_two(
    g: &ClusterGraph,
    d: &Dataset,
    n_perms: usize,
    alpha: f64,
    seed: u64,
) -> Result<CandidateCollection> {
    if let Some(&v) = g.vertices.iter().find(|&&v| v >= d.n_cols()) {
        return Err(Error::InvalidSelection(format!("graph vertex {v} is not a dataset column")));
    }
    let pairs: Vec<(usize, usize)> = g
        .components
        .iter()
        .filter(|c| c.len() > 1)
        .flat_map(|c| {
            c.iter()
                .enumerate()
                .flat_map(move |(a, &i)| c[a + 1..].iter().map(move |&j| (i, j)))
        })
        .collect();
    let tests = pairs
        .par_iter()
        .map(|&(i, j)| {
            let pair_seed = seeds::derive(seed, &[STAGE_TWO_STREAM, i as u64, j as u64]);
            let result =
                permutation_independence_test(d.column(i), d.column(j), n_perms, alpha, pair_seed)?;
            Ok(PairTest { i, j, result })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sets = vec![Vec::new()];
    let mut rejected = Vec::new();
    for c in &g.components {
        let dependent = tests
            .iter()
            .any(|t| t.result.reject && c.contains(&t.i) && c.contains(&t.j));
        if dependent {
            rejected.push(c.clone());
        } else {
            sets.push(c.clone());
        }
    }
    Ok(CandidateCollection { sets, tests, rejected })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// One candidate set with at least two members.
    Unique,
    /// Every candidate has at most one member; the parents are not locally
    /// identifiable and all candidates are returned.
    Singletons,
    Undetectable,
}

impl Verdict {
    pub fn describe(self) -> &'static str {
        match self {
            Verdict::Unique => "unique",
            Verdict::Singletons => "non-identifiable locally",
            Verdict::Undetectable => UNDETECTABLE_MESSAGE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParentalSets {
    pub verdict: Verdict,
    /// Empty when the verdict is undetectable.
    pub sets: Vec<Vec<usize>>,
    pub candidates: CandidateCollection,
    pub stage_one: Option<StageOne>,
    pub graph: Option<ClusterGraph>,
}

impl ParentalSets {
    pub fn non_empty_sets(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.sets.iter().filter(|s| !s.is_empty())
    }

    /// Every pairwise test behind this answer.
    pub fn tests(&self) -> &[PairTest] {
        &self.candidates.tests
    }
}

/// The step-3 rule on a bare collection of candidate sets.
pub fn decide(sets: &[Vec<usize>]) -> (Verdict, Vec<Vec<usize>>) {
    let multi: Vec<&Vec<usize>> = sets.iter().filter(|s| s.len() > 1).collect();
    match multi.as_slice() {
        [only] => (Verdict::Unique, vec![(*only).clone()]),
        [] => (Verdict::Singletons, sets.to_vec()),
        _ => (Verdict::Undetectable, Vec::new()),
    }
}

pub fn stage_three(c: &CandidateCollection) -> ParentalSets {
    let (verdict, sets) = decide(&c.sets);
    ParentalSets { verdict, sets, candidates: c.clone(), stage_one: None, graph: None }
}

pub fn dag_foci(d: &Dataset, target: usize, config: &DagFociConfig) -> Result<ParentalSets> {
    let layers = stage_one(d, target, config)?;
    let graph = build_cluster_graph(&layers)?;
    let candidates = stage_two(&graph, d, config.n_perms, config.alpha, config.seed)?;
    let mut out = stage_three(&candidates);
    out.stage_one = Some(layers);
    out.graph = Some(graph);
    Ok(out)
}
