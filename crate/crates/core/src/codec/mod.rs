//! The CODEC conditional dependence coefficient.
//!
//! For a response `y`, predictors `z` and conditioning variables `x`, with
//! right-continuous ranks `R_j = #{k : y_k <= y_j}`, `L_j = #{k : y_k >= y_j}`,
//! `N(j)` the nearest neighbour of `x_j` and `M(j)` the nearest neighbour of
//! `(x_j, z_j)`:
//!
//! ```text
//! conditional:    T_n = Σ_j (min(R_j, R_M(j)) - min(R_j, R_N(j)))
//!                       -----------------------------------------
//!                       Σ_j (R_j - min(R_j, R_N(j)))
//!
//! unconditional:  Q_n = (1/n²) Σ_i (min(R_i, R_M(i)) - L_i² / n)
//!                 S_n = (1/n³) Σ_i L_i (n - L_i)
//!                 T_n = Q_n / S_n
//! ```
//!
//! The unconditional denominator `S_n` pairs with `Q_n` so that `T_n` stays
//! well defined when `y` has ties. All sums are accumulated in exact integer
//! arithmetic; the only rounding is the final division.

mod kdtree;
mod neighbors;
mod ranks;

pub use neighbors::{
    nearest_neighbors, nearest_neighbors_with, squared_distance, tie_choice, NeighborIndex,
    NeighborStrategy, Points, KD_TREE_MAX_DIM,
};
pub use ranks::{compute_ranks, RankVector};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodecValue {
    pub t: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub n_used: usize,
    pub conditioning_size: usize,
}

pub fn codec_unconditional(y: &[f64], z: &[&[f64]], seed: u64) -> Result<CodecValue> {
    check_columns(y, z, "predictor")?;
    if z.is_empty() {
        return Err(Error::DimensionMismatch("at least one predictor column is required".into()));
    }
    let ranks = compute_ranks(y)?;
    let nn = nearest_neighbors(&Points::from_columns(z)?, seed)?;
    unconditional_from_parts(&ranks, &nn.nn)
}

/// `T_n(y, z | x)`. An empty `x` falls back to [`codec_unconditional`].
pub fn codec_conditional(
    y: &[f64],
    z: &[&[f64]],
    x: &[&[f64]],
    seed: u64,
) -> Result<CodecValue> {
    if x.is_empty() {
        return codec_unconditional(y, z, seed);
    }
    check_columns(y, z, "predictor")?;
    check_columns(y, x, "conditioning")?;
    if z.is_empty() {
        return Err(Error::DimensionMismatch("at least one predictor column is required".into()));
    }
    let ranks = compute_ranks(y)?;
    let joint: Vec<&[f64]> = x.iter().chain(z).copied().collect();
    let nn_x = nearest_neighbors(&Points::from_columns(x)?, seed)?;
    let nn_joint = nearest_neighbors(&Points::from_columns(&joint)?, seed)?;
    conditional_from_parts(&ranks, &nn_x.nn, &nn_joint.nn, x.len())
}

/// The numerator statistic `Q_n(y, x_s)`; zero for an empty `x_s`.
pub fn q_n(y: &[f64], x_s: &[&[f64]], seed: u64) -> Result<f64> {
    if y.len() < 2 {
        return Err(Error::TooFewSamples(y.len()));
    }
    if x_s.is_empty() {
        return Ok(0.0);
    }
    check_columns(y, x_s, "predictor")?;
    let ranks = compute_ranks(y)?;
    let nn = nearest_neighbors(&Points::from_columns(x_s)?, seed)?;
    Ok(q_n_from_parts(&ranks, &nn.nn))
}

fn check_columns(y: &[f64], cols: &[&[f64]], role: &str) -> Result<()> {
    if y.len() < 2 {
        return Err(Error::TooFewSamples(y.len()));
    }
    for c in cols {
        if c.len() != y.len() {
            return Err(Error::DimensionMismatch(format!(
                "{role} column has {} rows, response has {}",
                c.len(),
                y.len()
            )));
        }
    }
    Ok(())
}

/// `Σ_j min(R_j, R_nn(j))`.
pub(crate) fn sum_min_ranks(ranks: &RankVector, nn: &[usize]) -> i128 {
    let r = &ranks.r;
    nn.iter().enumerate().map(|(j, &k)| r[j].min(r[k]) as i128).sum()
}

/// `n³ Q_n` as an exact integer.
fn q_n_scaled(ranks: &RankVector, nn: &[usize]) -> i128 {
    let n = ranks.len() as i128;
    let sum_l2: i128 = ranks.l.iter().map(|&l| (l as i128) * (l as i128)).sum();
    n * sum_min_ranks(ranks, nn) - sum_l2
}

/// `n³ S_n` as an exact integer.
pub(crate) fn unconditional_denominator_scaled(ranks: &RankVector) -> i128 {
    let n = ranks.len() as i128;
    ranks.l.iter().map(|&l| (l as i128) * (n - l as i128)).sum()
}

pub(crate) fn q_n_from_parts(ranks: &RankVector, nn: &[usize]) -> f64 {
    let n = ranks.len() as f64;
    q_n_scaled(ranks, nn) as f64 / (n * n * n)
}

pub(crate) fn unconditional_from_parts(ranks: &RankVector, nn: &[usize]) -> Result<CodecValue> {
    let den = unconditional_denominator_scaled(ranks);
    if den == 0 {
        return Err(Error::DegenerateResponse);
    }
    let num = q_n_scaled(ranks, nn);
    let n3 = (ranks.len() as f64).powi(3);
    Ok(CodecValue {
        t: num as f64 / den as f64,
        numerator: num as f64 / n3,
        denominator: den as f64 / n3,
        n_used: ranks.len(),
        conditioning_size: 0,
    })
}

pub(crate) fn conditional_from_parts(
    ranks: &RankVector,
    nn_x: &[usize],
    nn_joint: &[usize],
    conditioning_size: usize,
) -> Result<CodecValue> {
    let base = sum_min_ranks(ranks, nn_x);
    let total: i128 = ranks.r.iter().map(|&r| r as i128).sum();
    let den = total - base;
    if den == 0 {
        return Err(Error::ZeroDenominator);
    }
    let num = sum_min_ranks(ranks, nn_joint) - base;
    let n2 = (ranks.len() as f64).powi(2);
    Ok(CodecValue {
        t: num as f64 / den as f64,
        numerator: num as f64 / n2,
        denominator: den as f64 / n2,
        n_used: ranks.len(),
        conditioning_size,
    })
}
