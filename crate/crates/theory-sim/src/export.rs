//! Plot-ready CSV rendering with fixed column order and 4-decimal floats
//! so identical inputs yield identical bytes.

use crate::contraction::ContractionResult;
use operators::AdaptivityReport;

pub fn contraction_to_csv(r: &ContractionResult) -> String {
    let mut out = String::from("step,theoretical,empirical_mean,stderr\n");
    for k in 0..r.empirical_mean.len() {
        out.push_str(&format!(
            "{k},{:.4},{:.4},{:.4}\n",
            r.theoretical[k], r.empirical_mean[k], r.stderr[k]
        ));
    }
    out
}

pub fn covering_to_csv(reports: &[AdaptivityReport]) -> String {
    let mut out = String::from("operator,kind,rho_estimate,epsilon,trials\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{:.4},{:.4},{}\n",
            r.operator_name,
            r.perturbation_kind.name(),
            r.rho_estimate,
            r.epsilon,
            r.trials
        ));
    }
    out
}
