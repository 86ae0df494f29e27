//! Command-line front end.
//!
//! Exit status: 0 success, 1 fatal lint or validation findings, 2 input
//! (I/O, parse, schema) errors, 3 computation errors such as an undefined
//! unit cost.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, ExitClass, Result};
use crate::io::{
    anchors, load_campaign, load_policy, load_review_package, load_scenario, load_sensitivity, render,
    CostOutput, Format, Render, SimulationOutput,
};
use crate::lint::{
    check_review_package, has_fatal, validate_campaign_report, BoundKind, Expenditure, MoneyRange,
    ReviewPolicy,
};
use crate::metrics::{campaign_summary, campaign_unit_costs, compare_campaigns};
use crate::sensitivity::{run_study, StudyResult, DEFAULT_SAMPLES};
use crate::sim::{bottleneck_report, simulate};

#[derive(Parser, Debug)]
#[command(
    name = "bugonomics",
    version,
    about = "Campaign economics for LLM-assisted vulnerability discovery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derived metrics for one campaign document (or fixture:<name>).
    Metrics {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Unit costs for one campaign document.
    Cost {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Interval bounds and Monte Carlo summaries for a sensitivity document.
    Sensitivity {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Simulate a remediation-pipeline scenario.
    Simulate {
        file: PathBuf,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Check a campaign document against the minimum reporting fields.
    Lint {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Check a review package against its ownership model's checklist.
    ReviewLint {
        file: PathBuf,
        #[arg(long)]
        policy: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Side-by-side metrics for several campaigns.
    Compare {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// The public anchor quantities and the figures derived from them.
    Anchors {
        #[command(flatten)]
        out: Output,
    },
}

enum Outcome {
    Ok(String),
    /// Output to print, then exit with status 1.
    Findings(String),
}

fn emit<R: Render + ?Sized>(value: &R, out: &Output) -> Result<String> {
    render(value, out.format)
}

fn execute(command: Command) -> Result<Outcome> {
    Ok(match command {
        Command::Metrics { file, out } => Outcome::Ok(emit(&campaign_summary(&load_campaign(file)?)?, &out)?),
        Command::Cost { file, out } => {
            let report = load_campaign(file)?;
            let findings = validate_campaign_report(&report);
            if has_fatal(&findings) {
                return Err(Error::FatalFindings(
                    findings.into_iter().filter(|f| f.is_fatal()).collect(),
                ));
            }
            if report.total_expenditure.is_none() {
                return Err(Error::UndefinedUnitCost("no total expenditure reported"));
            }
            let (unit_costs, unit_cost_ranges) = campaign_unit_costs(&report, true)?;
            if unit_costs.is_empty() && unit_cost_ranges.is_empty() {
                return Err(Error::UndefinedUnitCost("no outcome counts reported"));
            }
            let result = CostOutput {
                campaign_id: report.campaign_id.clone(),
                cost_is_upper_bound: matches!(
                    report.total_expenditure,
                    Some(Expenditure::Range(MoneyRange {
                        reported_as: Some(BoundKind::UpperBound),
                        ..
                    }))
                ),
                unit_costs,
                unit_cost_ranges,
            };
            Outcome::Ok(emit(&result, &out)?)
        }
        Command::Sensitivity {
            file,
            samples,
            seed,
            out,
        } => {
            let doc = load_sensitivity(file)?;
            let results = doc
                .studies
                .iter()
                .map(|s| run_study(s, samples, seed))
                .collect::<Result<Vec<StudyResult>>>()?;
            Outcome::Ok(emit(results.as_slice(), &out)?)
        }
        Command::Simulate { file, seed, out } => {
            let mut config = load_scenario(file)?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            let result = simulate(&config)?;
            let bottleneck = bottleneck_report(&result, &config)?;
            Outcome::Ok(emit(&SimulationOutput { result, bottleneck }, &out)?)
        }
        Command::Lint { file, out } => {
            let findings = validate_campaign_report(&load_campaign(file)?);
            let text = emit(findings.as_slice(), &out)?;
            if has_fatal(&findings) {
                Outcome::Findings(text)
            } else {
                Outcome::Ok(text)
            }
        }
        Command::ReviewLint { file, policy, out } => {
            let policy = match policy {
                Some(p) => load_policy(p)?,
                None => ReviewPolicy::default(),
            };
            let result = check_review_package(&load_review_package(file)?, &policy);
            let text = emit(&result, &out)?;
            if result.passed {
                Outcome::Ok(text)
            } else {
                Outcome::Findings(text)
            }
        }
        Command::Compare { files, out } => {
            let reports = files.iter().map(load_campaign).collect::<Result<Vec<_>>>()?;
            Outcome::Ok(emit(&compare_campaigns(&reports)?, &out)?)
        }
        Command::Anchors { out } => Outcome::Ok(emit(anchors()?.as_slice(), &out)?),
    })
}

/// Runs the command line `args` (including the program name) and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                ExitClass::Input as i32
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(cli.command) {
        Ok(Outcome::Ok(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Ok(Outcome::Findings(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            ExitClass::Findings as i32
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let Error::FatalFindings(findings) = &e {
                for f in findings {
                    let _ = writeln!(stderr, "  {}: {}", f.field, f.message);
                }
            }
            e.exit_class() as i32
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("bugonomics").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn anchors_table() {
        let (code, out, _) = run_args(&["anchors"]);
        assert_eq!(code, 0);
        assert!(out.contains("19.6%") && out.contains("< $417–$833"), "{out}");
    }

    #[test]
    fn fixture_paths() {
        let (code, out, _) = run_args(&["metrics", "fixture:firefox_opus46", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.contains("22/112"));
        let (code, _, err) = run_args(&["metrics", "fixture:nope"]);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn usage_errors_are_input_errors() {
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
        assert_eq!(run_args(&["anchors", "--format", "xml"]).0, 2);
    }

    #[test]
    fn cost_without_counts_is_computation_error() {
        let (code, _, err) = run_args(&["cost", "fixture:firefox_opus46"]);
        assert_eq!(code, 3, "{err}");
        let (code, out, _) = run_args(&["cost", "fixture:exploit_experiment"]);
        assert_eq!(code, 0);
        assert!(out.contains("$2,000"));
    }
}
