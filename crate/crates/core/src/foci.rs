//! Forward stepwise Markov-boundary search driven by `T_n`.
//!
//! Starting from the empty set, each step scores every remaining candidate
//! `i` by `T_n(Y, X_i | X_S)` and admits the best one while its score is
//! strictly positive. Ties in the score go to the smallest column index.
//!
//! Candidate columns are standardized before any distance is taken, so a
//! column with a wide range does not dominate the joint neighbour search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{
    compute_ranks, nearest_neighbors, sum_min_ranks, unconditional_denominator_scaled,
    unconditional_from_parts, Points, RankVector,
};
use crate::dataset::{standardize_column, ColumnSelection, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    pub step: usize,
    pub chosen: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovBoundaryEstimate {
    pub target: usize,
    /// Admitted columns in selection order.
    pub selected: Vec<usize>,
    pub trajectory: Vec<TrajectoryStep>,
}

impl MarkovBoundaryEstimate {
    pub fn contains(&self, column: usize) -> bool {
        self.selected.contains(&column)
    }

    /// Selected columns in ascending order.
    pub fn sorted(&self) -> Vec<usize> {
        let mut s = self.selected.clone();
        s.sort_unstable();
        s
    }
}

pub fn foci_select(
    d: &Dataset,
    sel: &ColumnSelection,
    seed: u64,
    max_size: Option<usize>,
) -> Result<MarkovBoundaryEstimate> {
    if sel.target >= d.n_cols() {
        return Err(Error::InvalidSelection(format!("target {} out of range", sel.target)));
    }
    if sel.predictors.is_empty() {
        return Err(Error::InvalidSelection("no candidate predictors".into()));
    }
    let y = d.column(sel.target);
    let ranks = compute_ranks(y)?;
    if ranks.is_constant() {
        return Err(Error::DegenerateResponse);
    }

    // Indexed by column; only candidate slots are filled.
    let mut columns = vec![Vec::new(); d.n_cols()];
    for &i in &sel.predictors {
        columns[i] = standardize_column(d.column(i));
    }

    let mut remaining: Vec<usize> = sel.predictors.clone();
    remaining.sort_unstable();
    let mut selected: Vec<usize> = Vec::new();
    let mut trajectory = Vec::new();
    let cap = max_size.unwrap_or(usize::MAX);

    while !remaining.is_empty() && selected.len() < cap {
        let Some(scores) = step_scores(&columns, &ranks, &selected, &remaining, seed)? else {
            break;
        };
        let (pos, best) = scores
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bp, bv), (p, &v)| if v > bv { (p, v) } else { (bp, bv) });
        if best <= 0.0 {
            break;
        }
        let chosen = remaining.remove(pos);
        selected.push(chosen);
        trajectory.push(TrajectoryStep { step: selected.len(), chosen, value: best });
    }
    Ok(MarkovBoundaryEstimate { target: sel.target, selected, trajectory })
}

/// `T_n(Y, X_i | X_S)` for every candidate, in the order of `candidates`.
/// `None` when `X_S` already pins down every response rank (zero
/// denominator), in which case no candidate can have a positive score.
fn step_scores(
    columns: &[Vec<f64>],
    ranks: &RankVector,
    selected: &[usize],
    candidates: &[usize],
    seed: u64,
) -> Result<Option<Vec<f64>>> {
    if selected.is_empty() {
        if unconditional_denominator_scaled(ranks) == 0 {
            return Ok(None);
        }
        let scores = candidates
            .par_iter()
            .map(|&i| {
                let nn = nearest_neighbors(&Points::from_columns(&[&columns[i]])?, seed)?;
                Ok(unconditional_from_parts(ranks, &nn.nn)?.t)
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Some(scores));
    }

    let base_cols: Vec<&[f64]> = selected.iter().map(|&i| columns[i].as_slice()).collect();
    let nn_base = nearest_neighbors(&Points::from_columns(&base_cols)?, seed)?;
    let base = sum_min_ranks(ranks, &nn_base.nn);
    let total: i128 = ranks.r.iter().map(|&r| r as i128).sum();
    let den = total - base;
    if den == 0 {
        return Ok(None);
    }
    let scores = candidates
        .par_iter()
        .map(|&i| {
            let mut cols = base_cols.clone();
            cols.push(&columns[i]);
            let nn = nearest_neighbors(&Points::from_columns(&cols)?, seed)?;
            Ok((sum_min_ranks(ranks, &nn.nn) - base) as f64 / den as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(scores))
}
