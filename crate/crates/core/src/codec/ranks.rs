use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Right-continuous ranks of a response column.
///
/// `r[j] = #{k : y[k] <= y[j]}` and `l[j] = #{k : y[k] >= y[j]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankVector {
    pub r: Vec<usize>,
    pub l: Vec<usize>,
}

impl RankVector {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// True when every response value is tied with every other.
    pub fn is_constant(&self) -> bool {
        let n = self.r.len();
        self.r.iter().all(|&r| r == n)
    }
}

pub fn compute_ranks(y: &[f64]) -> Result<RankVector> {
    let n = y.len();
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| y[a].total_cmp(&y[b]));

    let mut r = vec![0; n];
    let mut l = vec![0; n];
    let mut start = 0;
    while start < n {
        let v = y[order[start]];
        let mut end = start + 1;
        // `==` rather than total_cmp so that -0.0 and 0.0 tie.
        while end < n && y[order[end]] == v {
            end += 1;
        }
        for &j in &order[start..end] {
            r[j] = end;
            l[j] = n - start;
        }
        start = end;
    }
    Ok(RankVector { r, l })
}
