//! Report serialization. All floats render with four decimals and column
//! order is fixed, so identical inputs always yield identical bytes.
//! Wall-clock fields never appear in these exports.

use crate::ablate::AblationTable;
use crate::breakdown::KindBreakdown;
use crate::error::HarnessError;
use crate::eval::{EvalRecordResult, EvalSummary};
use crate::sweep::SweepRow;
use std::path::Path;

fn f4(x: f64) -> String {
    format!("{x:.4}")
}

pub fn summary_to_csv(summary: &EvalSummary) -> String {
    let mut out = String::from("metric,value\n");
    out.push_str(&format!("records,{}\n", summary.records));
    out.push_str(&format!("overall_accuracy,{}\n", f4(summary.overall_accuracy)));
    out.push_str(&format!("mean_steps,{}\n", f4(summary.mean_steps)));
    out.push_str(&format!("backend_errors,{}\n", summary.backend_errors));
    for (kind, acc) in &summary.accuracy_by_kind {
        out.push_str(&format!("accuracy[{kind}],{}\n", f4(*acc)));
    }
    for (op, rate) in &summary.operator_usage {
        out.push_str(&format!("usage[{op}],{}\n", f4(*rate)));
    }
    out
}

pub fn records_to_jsonl(results: &[EvalRecordResult]) -> String {
    let mut out = String::new();
    for r in results {
        let line = serde_json::json!({
            "utterance_id": r.utterance_id,
            "true_label": r.true_label,
            "predicted_label": r.predicted_label,
            "correct": r.correct,
            "steps_used": r.steps_used,
            "operators_invoked": r.operators_invoked,
            "perturbation_kinds": r.perturbation_kinds,
            "backend_error": r.backend_error,
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

pub fn ablation_to_csv(table: &AblationTable) -> String {
    let mut out = String::from("variant,accuracy,mean_steps,delta_vs_full\n");
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.variant,
            f4(row.accuracy),
            f4(row.mean_steps),
            f4(row.delta_vs_full)
        ));
    }
    out
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("k_max,accuracy,mean_steps\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            row.k_max,
            f4(row.accuracy),
            f4(row.mean_steps)
        ));
    }
    out
}

pub fn breakdown_to_csv(rows: &[KindBreakdown]) -> String {
    let mut out = String::from("kind,records,accuracy,mean_steps\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.kind,
            row.records,
            f4(row.accuracy),
            f4(row.mean_steps)
        ));
    }
    out
}

pub fn write_report(path: &Path, contents: &str) -> Result<(), HarnessError> {
    std::fs::write(path, contents).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ablate::AblationRow;
    use crate::eval::ConfigSnapshot;
    use crate::eval::Mode;
    use std::collections::BTreeMap;

    #[test]
    fn summary_csv_is_pinned() {
        let summary = EvalSummary {
            records: 4,
            overall_accuracy: 0.75,
            accuracy_by_kind: BTreeMap::from([
                ("additive_noise".to_string(), 0.5),
                ("clean".to_string(), 1.0),
            ]),
            operator_usage: BTreeMap::from([("denoise".to_string(), 0.25)]),
            mean_steps: 2.5,
            backend_errors: 0,
            config: ConfigSnapshot {
                mode: Mode::Tws,
                k_max: 5,
                backend_id: "scripted".to_string(),
                excluded_categories: vec![],
                parallelism: 1,
            },
        };
        assert_eq!(
            summary_to_csv(&summary),
            "metric,value\nrecords,4\noverall_accuracy,0.7500\nmean_steps,2.5000\n\
             backend_errors,0\naccuracy[additive_noise],0.5000\naccuracy[clean],1.0000\n\
             usage[denoise],0.2500\n"
        );
    }

    #[test]
    fn ablation_csv_is_pinned() {
        let table = AblationTable {
            rows: vec![AblationRow {
                variant: "full".to_string(),
                accuracy: 0.9,
                mean_steps: 2.0,
                delta_vs_full: 0.0,
            }],
        };
        assert_eq!(
            ablation_to_csv(&table),
            "variant,accuracy,mean_steps,delta_vs_full\nfull,0.9000,2.0000,0.0000\n"
        );
    }

    #[test]
    fn jsonl_omits_wall_time() {
        let r = EvalRecordResult {
            utterance_id: "a".to_string(),
            true_label: tws_engine::EmotionLabel::Joy,
            predicted_label: None,
            correct: false,
            steps_used: 5,
            operators_invoked: vec!["denoise".to_string()],
            perturbation_kinds: vec![],
            backend_error: false,
            wall_time_ms: 123.4,
        };
        let line = records_to_jsonl(&[r]);
        assert!(!line.contains("wall_time"));
        assert!(line.contains("\"utterance_id\":\"a\""));
    }
}
