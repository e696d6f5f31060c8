//! Parameter sweeps: one problem file, many values of a named parameter.

use crate::invariance::{analyze, Analysis};
use crate::par::{self, Execution};
use crate::problem::{ProblemError, ProblemFile};

#[derive(Debug)]
pub struct SweepPoint {
    pub value: String,
    pub outcome: Result<Analysis, ProblemError>,
}

/// Analyzes the problem once per value of `param`, in input order.
///
/// `overrides` are applied first; the swept parameter replaces any override
/// of the same name.
pub fn sweep_parameter(
    problem: &ProblemFile,
    overrides: &[(String, String)],
    param: &str,
    values: &[String],
    probe_bound: Option<usize>,
    exec: Execution,
) -> Vec<SweepPoint> {
    par::map(values, exec, |value| {
        let mut params: Vec<(String, String)> = overrides
            .iter()
            .filter(|(k, _)| k != param)
            .cloned()
            .collect();
        params.push((param.to_string(), value.clone()));
        let outcome = problem
            .resolve(&params)
            .map(|sys| analyze(&sys, probe_bound));
        SweepPoint {
            value: value.clone(),
            outcome,
        }
    })
}
