//! Per-perturbation slicing of record-level results.

use crate::eval::EvalRecordResult;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindBreakdown {
    pub kind: String,
    pub records: usize,
    pub accuracy: f64,
    pub mean_steps: f64,
    /// invocation counts per operator among records carrying this kind
    pub operator_usage: BTreeMap<String, usize>,
}

/// Buckets record results by perturbation kind. A record with several
/// kinds counts in every matching bucket; a record with none lands in
/// the `clean` bucket.
pub fn breakdown_by_perturbation(results: &[EvalRecordResult]) -> Vec<KindBreakdown> {
    let mut buckets: BTreeMap<String, Vec<&EvalRecordResult>> = BTreeMap::new();
    for r in results {
        if r.perturbation_kinds.is_empty() {
            buckets.entry("clean".to_string()).or_default().push(r);
        } else {
            for kind in &r.perturbation_kinds {
                buckets.entry(kind.clone()).or_default().push(r);
            }
        }
    }
    buckets
        .into_iter()
        .map(|(kind, rs)| {
            let n = rs.len() as f64;
            let mut operator_usage = BTreeMap::new();
            for r in &rs {
                for op in &r.operators_invoked {
                    *operator_usage.entry(op.clone()).or_insert(0) += 1;
                }
            }
            KindBreakdown {
                kind,
                records: rs.len(),
                accuracy: rs.iter().filter(|r| r.correct).count() as f64 / n,
                mean_steps: rs.iter().map(|r| r.steps_used).sum::<usize>() as f64 / n,
                operator_usage,
            }
        })
        .collect()
}
