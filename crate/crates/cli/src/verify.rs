//! The `verify` and `replay` commands.

use std::time::Instant;

use piso::linalg::Tolerance;
use piso::random::trial_seed;
use piso::suites::{run_trial, NamedInstance, Suite, TrialOutcome};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{code, CliError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub suite: String,
    pub trials: u64,
    pub dim: usize,
    pub seed: u64,
    pub tol: Tolerance,
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<Vec<Suite>, CliError> {
        if self.trials == 0 {
            return Err(CliError::usage("--trials must be at least 1"));
        }
        if !(1..=16).contains(&self.dim) {
            return Err(CliError::usage(format!(
                "--dim must be in [1, 16], got {}",
                self.dim
            )));
        }
        if self.suite == "all" {
            Ok(Suite::ALL.to_vec())
        } else {
            self.suite
                .parse::<Suite>()
                .map(|s| vec![s])
                .map_err(CliError::usage)
        }
    }
}

/// Everything needed to re-run a failed trial, plus the drawn inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureEntry {
    pub suite: Suite,
    pub trial: u64,
    pub seed: u64,
    pub dim: usize,
    pub tol: Tolerance,
    pub failures: Vec<String>,
    pub inputs: Vec<NamedInstance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub evaluated: u64,
    pub failed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: u64,
    pub failed: u64,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<FailureEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_secs: Option<f64>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: VerifyConfig,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_secs: Option<f64>,
}

fn summarize(suite: Suite, config: &VerifyConfig, outcomes: Vec<TrialOutcome>) -> SuiteReport {
    let mut checks: Vec<CheckSummary> = Vec::new();
    let mut failures = Vec::new();
    let (mut max_residual, mut total) = (0.0_f64, 0.0);
    for (i, out) in outcomes.into_iter().enumerate() {
        max_residual = max_residual.max(out.residual);
        total += out.residual;
        for c in &out.checks {
            let pos = match checks.iter().position(|s| s.name == c.name) {
                Some(p) => p,
                None => {
                    checks.push(CheckSummary {
                        name: c.name.clone(),
                        evaluated: 0,
                        failed: 0,
                        max_residual: None,
                    });
                    checks.len() - 1
                }
            };
            let s = &mut checks[pos];
            s.evaluated += 1;
            s.failed += u64::from(!c.passed);
            if let Some(r) = c.residual {
                s.max_residual = Some(s.max_residual.map_or(r, |m| m.max(r)));
            }
        }
        if !out.passed() {
            failures.push(FailureEntry {
                suite,
                trial: i as u64,
                seed: trial_seed(config.seed, i as u64),
                dim: config.dim,
                tol: config.tol,
                failures: out.failures,
                inputs: out.inputs,
            });
        }
    }
    SuiteReport {
        suite,
        trials: config.trials,
        failed: failures.len() as u64,
        max_residual,
        mean_residual: total / config.trials as f64,
        checks,
        failures,
        duration_secs: None,
    }
}

/// Runs the configured suites. Trials run in parallel; each derives its seed
/// from the master seed and its index, so results do not depend on
/// scheduling.
pub fn run(config: &VerifyConfig, timing: bool) -> Result<Report, CliError> {
    let suites = config.validate()?;
    config.tol.validate()?;
    let start = Instant::now();
    let mut reports = Vec::with_capacity(suites.len());
    for suite in suites {
        let suite_start = Instant::now();
        let outcomes: Vec<TrialOutcome> = (0..config.trials)
            .into_par_iter()
            .map(|i| run_trial(suite, trial_seed(config.seed, i), config.dim, &config.tol))
            .collect();
        let mut report = summarize(suite, config, outcomes);
        if timing {
            report.duration_secs = Some(suite_start.elapsed().as_secs_f64());
        }
        reports.push(report);
    }
    Ok(Report {
        config: config.clone(),
        passed: reports.iter().all(SuiteReport::passed),
        suites: reports,
        duration_secs: timing.then(|| start.elapsed().as_secs_f64()),
    })
}

pub fn print_table(report: &Report) {
    println!(
        "{:<12} {:>7} {:>7} {:>13} {:>13}",
        "suite", "trials", "failed", "max residual", "mean residual"
    );
    for s in &report.suites {
        print!(
            "{:<12} {:>7} {:>7} {:>13.3e} {:>13.3e}",
            s.suite.name(),
            s.trials,
            s.failed,
            s.max_residual,
            s.mean_residual
        );
        match s.duration_secs {
            Some(d) => println!(" {d:>8.2} s"),
            None => println!(),
        }
    }
    for s in &report.suites {
        for f in &s.failures {
            println!(
                "FAIL {} trial {} (seed {}, dim {}): {}",
                f.suite,
                f.trial,
                f.seed,
                f.dim,
                f.failures.join("; ")
            );
        }
    }
    if let Some(d) = report.duration_secs {
        println!("total time: {d:.2} s");
    }
    println!("result: {}", if report.passed { "PASS" } else { "FAIL" });
}

/// Failure entries of a report, or the single entry of a failure file.
pub fn failure_entries(value: Value) -> Result<Vec<FailureEntry>, CliError> {
    if value.get("suites").is_some() {
        let report: Report = serde_json::from_value(value)
            .map_err(|e| CliError::parse(format!("invalid report: {e}")))?;
        Ok(report.suites.into_iter().flat_map(|s| s.failures).collect())
    } else {
        let entry: FailureEntry = serde_json::from_value(value)
            .map_err(|e| CliError::parse(format!("invalid failure entry: {e}")))?;
        Ok(vec![entry])
    }
}

/// Re-runs each failure; exits 1 if any still fails.
pub fn replay(entries: &[FailureEntry]) -> Result<u8, CliError> {
    let mut reproduced = 0;
    for e in entries {
        e.tol.validate()?;
        let out = run_trial(e.suite, e.seed, e.dim, &e.tol);
        let same_inputs = out.inputs == e.inputs;
        let status = if out.passed() {
            "passes now"
        } else {
            "reproduced"
        };
        println!(
            "{} trial {} (seed {}, dim {}): {status}{}",
            e.suite,
            e.trial,
            e.seed,
            e.dim,
            if same_inputs {
                ""
            } else {
                "; inputs differ from the recorded ones"
            }
        );
        for f in &out.failures {
            println!("  {f}");
        }
        reproduced += usize::from(!out.passed());
    }
    println!("{reproduced} of {} failures reproduced", entries.len());
    Ok(if reproduced > 0 {
        code::FAILURE
    } else {
        code::PASS
    })
}
