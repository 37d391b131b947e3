//! Scoring DAG-FOCI output against ground truth, and the seeded multi-run
//! benchmark driver.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::codec_unconditional;
use crate::dag_foci::{dag_foci, DagFociConfig, ParentalSets, Verdict};
use crate::error::{Error, Result};
use crate::sem::{builtin, ground_truth, sample, Builtin, DagSpec};
use crate::seeds;

/// `|a ∩ b| / |a ∪ b|`, with two empty sets scoring 1.
pub fn jaccard(a: &[usize], b: &[usize]) -> f64 {
    let inter = a.iter().filter(|v| b.contains(v)).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunScore {
    pub jaccard: f64,
    pub false_count: usize,
    pub missing_count: usize,
    /// More than one non-trivial interpretation was returned (or none could be).
    pub non_unique: bool,
    pub exact: bool,
}

/// Scores one DAG-FOCI answer against the true parental set.
///
/// An answer with a single non-empty candidate (or only the empty set) is
/// scored on that set. Anything more ambiguous gets Jaccard 0 and the
/// non-unique flag; its false/missing counts use the union of the returned
/// non-empty sets.
pub fn score_run(result: &ParentalSets, truth: &[usize]) -> RunScore {
    let non_empty: Vec<&Vec<usize>> = result.non_empty_sets().collect();
    let non_unique = result.verdict == Verdict::Undetectable || non_empty.len() > 1;

    let mut answer: Vec<usize> = non_empty.iter().flat_map(|s| s.iter().copied()).collect();
    answer.sort_unstable();
    answer.dedup();
    let false_count = answer.iter().filter(|v| !truth.contains(v)).count();
    let missing_count = truth.iter().filter(|v| !answer.contains(v)).count();

    if non_unique {
        RunScore { jaccard: 0.0, false_count, missing_count, non_unique, exact: false }
    } else {
        RunScore {
            jaccard: jaccard(&answer, truth),
            false_count,
            missing_count,
            non_unique,
            exact: false_count == 0 && missing_count == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub n: usize,
    pub run: usize,
    pub seed: u64,
    pub score: Option<RunScore>,
    pub result: Option<ParentalSets>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub n: usize,
    pub runs: usize,
    /// Runs that raised an error; they are excluded from every aggregate.
    pub failed_runs: usize,
    pub exact_recovery_count: usize,
    pub non_unique_count: usize,
    /// Runs with at least one falsely discovered parent.
    pub false_positive_runs: usize,
    pub mean_false: f64,
    pub mean_missing: f64,
    pub mean_jaccard: f64,
    pub per_run: Vec<RunRecord>,
}

impl RunSummary {
    fn aggregate(n: usize, per_run: Vec<RunRecord>) -> Self {
        let scores: Vec<&RunScore> = per_run.iter().filter_map(|r| r.score.as_ref()).collect();
        let ok = scores.len();
        let mean = |f: &dyn Fn(&RunScore) -> f64| {
            if ok == 0 {
                0.0
            } else {
                scores.iter().map(|s| f(s)).sum::<f64>() / ok as f64
            }
        };
        Self {
            n,
            runs: per_run.len(),
            failed_runs: per_run.len() - ok,
            exact_recovery_count: scores.iter().filter(|s| s.exact).count(),
            non_unique_count: scores.iter().filter(|s| s.non_unique).count(),
            false_positive_runs: scores.iter().filter(|s| s.false_count > 0).count(),
            mean_false: mean(&|s| s.false_count as f64),
            mean_missing: mean(&|s| s.missing_count as f64),
            mean_jaccard: mean(&|s| s.jaccard),
            per_run,
        }
    }
}

/// Seed of run `run` at sample size `n`. Independent of the rest of the grid.
pub fn run_seed(base_seed: u64, n: usize, run: usize) -> u64 {
    seeds::derive(base_seed, &[n as u64, run as u64])
}

/// Repeats sample → DAG-FOCI → score for every `(n, run)` pair. The `seed`
/// in `config` is ignored; each run derives its own from `base_seed`.
pub fn benchmark(
    spec: &DagSpec,
    target: &str,
    n_grid: &[usize],
    runs: usize,
    base_seed: u64,
    config: &DagFociConfig,
) -> Result<BTreeMap<usize, RunSummary>> {
    if runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    let target_idx = spec.index_of(target)?;
    let truth = ground_truth(spec).parents[target_idx].clone();

    let jobs: Vec<(usize, usize)> =
        n_grid.iter().flat_map(|&n| (0..runs).map(move |r| (n, r))).collect();
    let records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(n, run)| {
            let seed = run_seed(base_seed, n, run);
            let outcome = sample(spec, n, seeds::derive(seed, &[0])).and_then(|d| {
                let cfg = DagFociConfig { seed: seeds::derive(seed, &[1]), ..*config };
                dag_foci(&d, target_idx, &cfg)
            });
            match outcome {
                Ok(result) => RunRecord {
                    n,
                    run,
                    seed,
                    score: Some(score_run(&result, &truth)),
                    result: Some(result),
                    error: None,
                },
                Err(e) => RunRecord { n, run, seed, score: None, result: None, error: Some(e.to_string()) },
            }
        })
        .collect();

    let mut by_n: BTreeMap<usize, Vec<RunRecord>> = BTreeMap::new();
    for rec in records {
        by_n.entry(rec.n).or_default().push(rec);
    }
    Ok(by_n.into_iter().map(|(n, recs)| (n, RunSummary::aggregate(n, recs))).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub alpha: f64,
    /// `T_n(Y, X3)`.
    pub t_x3: f64,
    /// `max(T_n(Y, X1), T_n(Y, X2))`.
    pub t_max_x1_x2: f64,
}

/// Sweeps the noise scale of the codec-violation model. Every scale reuses
/// the same seed, so the underlying noise draws are shared across points.
pub fn codec_gap_sweep(alphas: &[f64], n: usize, seed: u64) -> Result<Vec<GapPoint>> {
    alphas
        .par_iter()
        .map(|&alpha| {
            if !(alpha.is_finite() && alpha >= 0.0) {
                return Err(Error::InvalidArgument(format!("noise scale must be >= 0, got {alpha}")));
            }
            let spec = builtin(Builtin::CodecViolation(alpha));
            let d = sample(&spec, n, seed)?;
            let col = |name: &str| d.column_index(name).map(|i| d.column(i));
            let y = col("Y")?;
            let t = |name: &str| -> Result<f64> { Ok(codec_unconditional(y, &[col(name)?], seed)?.t) };
            Ok(GapPoint { alpha, t_x3: t("X3")?, t_max_x1_x2: t("X1")?.max(t("X2")?) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag_foci::{stage_three, CandidateCollection};

    fn answer(sets: Vec<Vec<usize>>) -> ParentalSets {
        stage_three(&CandidateCollection::from_sets(sets))
    }

    #[test]
    fn jaccard_values() {
        assert_eq!(jaccard(&[2, 3, 4], &[2, 3, 4]), 1.0);
        assert_eq!(jaccard(&[2, 3], &[2, 3, 4]), 2.0 / 3.0);
        assert_eq!(jaccard(&[], &[]), 1.0);
        assert_eq!(jaccard(&[], &[1]), 0.0);
    }

    #[test]
    fn exact_unique_answer() {
        let s = score_run(&answer(vec![vec![2, 3, 4], vec![9]]), &[2, 3, 4]);
        assert_eq!((s.jaccard, s.false_count, s.missing_count), (1.0, 0, 0));
        assert!(s.exact && !s.non_unique);
    }

    #[test]
    fn singleton_collection_is_non_unique() {
        let s = score_run(&answer(vec![vec![1], vec![2], vec![3]]), &[3]);
        assert!(s.non_unique && !s.exact);
        assert_eq!(s.jaccard, 0.0);
        assert_eq!((s.false_count, s.missing_count), (2, 0));
    }

    #[test]
    fn partial_answer() {
        let s = score_run(&answer(vec![vec![2, 3]]), &[2, 3, 4]);
        assert_eq!((s.jaccard, s.false_count, s.missing_count), (2.0 / 3.0, 0, 1));
    }

    #[test]
    fn lone_singleton_is_scored_directly() {
        let s = score_run(&answer(vec![vec![7]]), &[7]);
        assert!(s.exact && !s.non_unique);
        let s = score_run(&answer(vec![]), &[]);
        assert!(s.exact);
        assert_eq!(s.jaccard, 1.0);
    }

    #[test]
    fn undetectable_scores_zero() {
        let s = score_run(&answer(vec![vec![1, 2], vec![3, 4]]), &[1, 2]);
        assert!(s.non_unique);
        assert_eq!((s.jaccard, s.false_count, s.missing_count), (0.0, 0, 2));
    }
}
