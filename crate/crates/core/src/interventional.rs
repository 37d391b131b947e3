//! Orienting DAG-FOCI output with data from a do-intervention on the target.
//!
//! A do-intervention on the target severs it from its parents, so whatever
//! part of a candidate parental set still shows up in the target's boundary
//! under intervention must be made of children.

use serde::{Deserialize, Serialize};

use crate::dag_foci::{dag_foci, DagFociConfig, ParentalSets, Verdict};
use crate::dataset::{ColumnSelection, Dataset};
use crate::error::{Error, Result};
use crate::foci::{foci_select, MarkovBoundaryEstimate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterventionalResult {
    pub refined_parents: Vec<Vec<usize>>,
    /// Ascending.
    pub children: Vec<usize>,
    pub interventional_boundary: MarkovBoundaryEstimate,
    pub observational: ParentalSets,
}

/// Splits each candidate set `S` against the interventional boundary `mb`:
/// `S ∩ mb = ∅` keeps `S` as a parental candidate, otherwise `S ∩ mb` are
/// children.
pub fn refine_with_intervention(
    parental: &[Vec<usize>],
    interventional_boundary: &[usize],
) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut refined = Vec::new();
    let mut children = Vec::new();
    for s in parental {
        let hit: Vec<usize> =
            s.iter().copied().filter(|v| interventional_boundary.contains(v)).collect();
        if hit.is_empty() {
            refined.push(s.clone());
        } else {
            children.extend(hit);
        }
    }
    children.sort_unstable();
    children.dedup();
    (refined, children)
}

pub fn dag_foci_interventional(
    obs: &Dataset,
    intv: &Dataset,
    target: usize,
    config: &DagFociConfig,
) -> Result<InterventionalResult> {
    if !obs.same_schema(intv) {
        return Err(Error::SchemaMismatch(format!(
            "observational columns {:?} vs interventional columns {:?}",
            obs.names(),
            intv.names()
        )));
    }
    let (observational, interventional_boundary) = rayon::join(
        || dag_foci(obs, target, config),
        || {
            let sel = ColumnSelection::all_others(target, intv.n_cols())?;
            foci_select(intv, &sel, config.seed, config.max_boundary)
        },
    );
    let observational = observational?;
    let interventional_boundary = interventional_boundary?;

    let (refined_parents, children) = if observational.verdict == Verdict::Undetectable {
        (Vec::new(), Vec::new())
    } else {
        refine_with_intervention(&observational.sets, &interventional_boundary.selected)
    };
    Ok(InterventionalResult { refined_parents, children, interventional_boundary, observational })
}
