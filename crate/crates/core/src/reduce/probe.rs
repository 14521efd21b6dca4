use serde::Serialize;

use super::{reduce_lincomb, reduce_max, KernelChooser};
use crate::error::Result;
use crate::linalg::KernelStrategy;
use crate::pwl::{LinComb, MaxTerm};

/// Outputs of the reduction under several kernel-choice strategies.
///
/// The reduction is conjectured, not known, to be independent of these
/// choices; a report with `identical == false` is a finding, not an error.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub outcomes: Vec<ProbeOutcome>,
    pub identical: bool,
    pub distinct_outputs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeOutcome {
    pub strategy: String,
    pub summands: usize,
    pub output: LinComb,
}

pub fn conjecture_probe(t: &MaxTerm, strategies: &[KernelStrategy]) -> Result<ProbeReport> {
    run(strategies, |chooser| reduce_max(t, chooser))
}

pub fn conjecture_probe_lincomb(c: &LinComb, strategies: &[KernelStrategy]) -> Result<ProbeReport> {
    run(strategies, |chooser| reduce_lincomb(c, chooser))
}

fn run(strategies: &[KernelStrategy], reduce: impl Fn(&dyn KernelChooser) -> Result<LinComb>) -> Result<ProbeReport> {
    let mut outcomes = Vec::with_capacity(strategies.len());
    for s in strategies {
        let output = reduce(s)?;
        outcomes.push(ProbeOutcome {
            strategy: s.to_string(),
            summands: output.len(),
            output,
        });
    }
    let mut distinct: Vec<&LinComb> = Vec::new();
    for o in &outcomes {
        if !distinct.contains(&&o.output) {
            distinct.push(&o.output);
        }
    }
    let distinct_outputs = distinct.len();
    Ok(ProbeReport {
        identical: distinct_outputs <= 1,
        distinct_outputs,
        outcomes,
    })
}
