//! Structural equation models: declarative DAG specs, sampling, do-surgery
//! and the built-in benchmark models.
//!
//! A spec serializes to TOML, one `[[node]]` table per variable:
//!
//! ```toml
//! [[node]]
//! name = "X5"
//! parents = ["X1", "X2"]
//! equation = "(add X1 (neg (atan X2)) eps)"
//! noise = { dist = "normal", mean = 0.0, sd = 1.0 }
//! ```
//!
//! `equation` uses the prefix grammar documented in [`expr`]; `noise` is
//! `normal` (`mean`, `sd`) or `uniform` (`low`, `high`) and defaults to a
//! standard normal.

mod builtins;
pub mod expr;
mod graph;

use std::collections::{HashMap, HashSet};

use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

pub use builtins::{builtin, Builtin};
pub use expr::{Expr, UnaryOp};
pub use graph::{ground_truth_from_edges, GroundTruth};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::seeds;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "lowercase")]
pub enum NoiseLaw {
    Normal { mean: f64, sd: f64 },
    Uniform { low: f64, high: f64 },
}

impl Default for NoiseLaw {
    fn default() -> Self {
        NoiseLaw::Normal { mean: 0.0, sd: 1.0 }
    }
}

impl NoiseLaw {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            NoiseLaw::Normal { mean, sd } => mean.is_finite() && sd.is_finite() && sd >= 0.0,
            NoiseLaw::Uniform { low, high } => low.is_finite() && high.is_finite() && low < high,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Spec(format!("invalid noise law {self:?}")))
        }
    }

    fn draw(&self, n: usize, rng: &mut impl rand::Rng) -> Vec<f64> {
        match *self {
            NoiseLaw::Normal { mean, sd } => {
                let d = Normal::new(mean, sd).expect("validated");
                d.sample_iter(rng).take(n).collect()
            }
            NoiseLaw::Uniform { low, high } => {
                let d = Uniform::new(low, high).expect("validated");
                d.sample_iter(rng).take(n).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub name: String,
    pub parents: Vec<String>,
    pub equation: Expr,
    pub noise: NoiseLaw,
}

impl NodeSpec {
    pub fn new(name: &str, parents: &[&str], equation: &str) -> Result<Self> {
        Ok(Self {
            name: name.to_string(),
            parents: parents.iter().map(|p| p.to_string()).collect(),
            equation: equation.parse()?,
            noise: NoiseLaw::default(),
        })
    }
}

/// A validated acyclic structural equation model.
#[derive(Debug, Clone, PartialEq)]
pub struct DagSpec {
    nodes: Vec<NodeSpec>,
    parent_idx: Vec<Vec<usize>>,
    order: Vec<usize>,
}

impl DagSpec {
    pub fn new(nodes: Vec<NodeSpec>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, node) in nodes.iter().enumerate() {
            if !expr::is_valid_name(&node.name) {
                return Err(Error::Spec(format!("invalid node name {:?}", node.name)));
            }
            if index.insert(node.name.as_str(), i).is_some() {
                return Err(Error::Spec(format!("duplicate node {:?}", node.name)));
            }
        }
        let mut parent_idx = Vec::with_capacity(nodes.len());
        for node in &nodes {
            node.noise.validate()?;
            let mut seen = HashSet::new();
            let mut idx = Vec::new();
            for p in &node.parents {
                let &pi = index.get(p.as_str()).ok_or_else(|| Error::UnknownNode(p.clone()))?;
                if p == &node.name {
                    return Err(Error::Cyclic(node.name.clone()));
                }
                if !seen.insert(pi) {
                    return Err(Error::Spec(format!("{:?} lists parent {p:?} twice", node.name)));
                }
                idx.push(pi);
            }
            for v in node.equation.variables() {
                if !node.parents.iter().any(|p| p == v) {
                    return Err(Error::Spec(format!(
                        "equation of {:?} references {v:?}, which is not a parent",
                        node.name
                    )));
                }
            }
            parent_idx.push(idx);
        }
        let order = topological_order(&nodes, &parent_idx)?;
        Ok(Self { nodes, parent_idx, order })
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.nodes.iter().map(|n| n.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n.name == name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// Directed `(parent, child)` edges by node index.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parent_idx
            .iter()
            .enumerate()
            .flat_map(|(c, ps)| ps.iter().map(move |&p| (p, c)))
            .collect()
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let doc: SpecDocument =
            toml::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        let nodes = doc
            .node
            .into_iter()
            .map(|n| {
                Ok(NodeSpec {
                    equation: n.equation.parse()?,
                    name: n.name,
                    parents: n.parents,
                    noise: n.noise,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        DagSpec::new(nodes)
    }

    pub fn to_toml(&self) -> String {
        let doc = SpecDocument {
            node: self
                .nodes
                .iter()
                .map(|n| NodeDocument {
                    name: n.name.clone(),
                    parents: n.parents.clone(),
                    equation: n.equation.to_string(),
                    noise: n.noise,
                })
                .collect(),
        };
        toml::to_string(&doc).expect("spec documents always serialize")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDocument {
    node: Vec<NodeDocument>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDocument {
    name: String,
    #[serde(default)]
    parents: Vec<String>,
    equation: String,
    #[serde(default)]
    noise: NoiseLaw,
}

fn topological_order(nodes: &[NodeSpec], parent_idx: &[Vec<usize>]) -> Result<Vec<usize>> {
    let n = nodes.len();
    let mut indegree: Vec<usize> = parent_idx.iter().map(Vec::len).collect();
    let mut children = vec![Vec::new(); n];
    for (c, ps) in parent_idx.iter().enumerate() {
        for &p in ps {
            children[p].push(c);
        }
    }
    let mut ready: std::collections::BTreeSet<usize> =
        (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&i| indegree[i] > 0).expect("some node is on a cycle");
        return Err(Error::Cyclic(nodes[stuck].name.clone()));
    }
    Ok(order)
}

/// Draws `n` i.i.d. rows. Each node's noise stream is keyed by `(seed, name)`,
/// so the result does not depend on evaluation order.
pub fn sample(spec: &DagSpec, n: usize, seed: u64) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    let mut columns: Vec<Option<Vec<f64>>> = vec![None; spec.len()];
    for &v in spec.topological_order() {
        let node = &spec.nodes[v];
        let mut rng = seeds::rng(seed, &[seeds::name_tag(&node.name)]);
        let eps = node.noise.draw(n, &mut rng);
        let vars: HashMap<&str, &[f64]> = spec.parent_idx[v]
            .iter()
            .map(|&p| {
                let col = columns[p].as_deref().expect("parents come first in topological order");
                (spec.nodes[p].name.as_str(), col)
            })
            .collect();
        let values = node.equation.eval(&vars, &eps, n)?;
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteEquation(node.name.clone()));
        }
        columns[v] = Some(values);
    }
    Dataset::new(spec.names(), columns.into_iter().map(Option::unwrap).collect(), None)
}

/// Cuts every edge into `node` and makes it an exogenous draw from `law`.
pub fn do_intervene(spec: &DagSpec, node: &str, law: NoiseLaw) -> Result<DagSpec> {
    let v = spec.index_of(node)?;
    let mut nodes = spec.nodes.clone();
    nodes[v].parents.clear();
    nodes[v].equation = Expr::Eps;
    nodes[v].noise = law;
    DagSpec::new(nodes)
}

pub fn ground_truth(spec: &DagSpec) -> GroundTruth {
    ground_truth_from_edges(spec.len(), &spec.edges())
}
