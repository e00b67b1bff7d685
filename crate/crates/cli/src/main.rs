//! Command-line interface for the subtransitivity toolkit.
//!
//! Exit codes: 0 on a successful run (regardless of mathematical outcome),
//! 1 when a certification or report verification fails, 2 on malformed
//! input, 3 when a configured size cap is exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subtrans::experiments::{
    certify_group, check_configuration, run_montecarlo, verify_report, ExperimentPlan,
    ExperimentReport, SphereTrialSource, TupleModeSpec,
};
use subtrans::groups::{format_tuple_indices, DEFAULT_TUPLE_CAP};
use subtrans::{
    configuration_from_json, format_rational, group_from_spec, Error, PhiOutcome, SearchOptions,
    TupleMode,
};

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "subtrans",
    about = "Exact decision procedures for affine subtransitivity of point configurations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search a group's tuples for affine witnesses against a configuration.
    Check {
        /// Configuration file (JSON with rational-string points)
        #[arg(long)]
        input: PathBuf,
        /// Group spec, e.g. c4:rotation2d or hyperoctahedral:3
        #[arg(long)]
        group: String,
        #[command(flatten)]
        tuples: TupleArgs,
        /// Stop at the first witnessing tuple
        #[arg(long)]
        first: bool,
    },
    /// Evaluate the genericity certificate over a group's tuples.
    Certify {
        #[arg(long)]
        group: String,
        /// Intrinsic dimension d (tuples have length d+1)
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        tuples: TupleArgs,
    },
    /// Sample random spherical configurations and count witnessing tuples.
    Montecarlo {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        denom_bound: u64,
        /// Group spec; repeat for several groups
        #[arg(long = "group", required = true)]
        groups: Vec<String>,
        /// Sample this many tuples per group instead of exhausting the space
        #[arg(long)]
        sample: Option<u64>,
        /// Stop each per-group search at its first witness
        #[arg(long)]
        first: bool,
        /// Emit the versioned JSON report instead of text
        #[arg(long)]
        json: bool,
        /// Also write per-trial CSV rows to this path
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the normalized coordinates of a configuration's last point.
    Phi {
        #[arg(long)]
        input: PathBuf,
    },
    /// Group utilities.
    Groups {
        #[command(subcommand)]
        command: GroupsCommand,
    },
    /// Re-verify every witness recorded in a Monte Carlo report.
    VerifyReport {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum GroupsCommand {
    /// List the builtin group families and their spec syntax.
    List,
}

#[derive(Args)]
struct TupleArgs {
    /// Enumerate the whole tuple space (default)
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    /// Sample this many tuples instead
    #[arg(long)]
    sample: Option<u64>,
    /// Seed for sampled tuple mode
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl TupleArgs {
    fn mode(&self) -> TupleMode {
        match self.sample {
            Some(count) => TupleMode::Sampled {
                seed: self.seed,
                count,
            },
            None => TupleMode::Exhaustive,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_cap_violation() {
                ExitCode::from(EXIT_CAP)
            } else {
                ExitCode::from(EXIT_BAD_INPUT)
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Check {
            input,
            group,
            tuples,
            first,
        } => cmd_check(&input, &group, tuples.mode(), first),
        Command::Certify { group, d, tuples } => cmd_certify(&group, d, tuples.mode()),
        Command::Montecarlo {
            d,
            trials,
            seed,
            denom_bound,
            groups,
            sample,
            first,
            json,
            csv,
        } => {
            let plan = ExperimentPlan {
                d,
                group_specs: groups,
                trials,
                seed,
                denom_bound,
                tuple_mode: match sample {
                    Some(count) => TupleModeSpec::Sampled { count },
                    None => TupleModeSpec::Exhaustive,
                },
                stop_on_first_witness: first,
            };
            cmd_montecarlo(&plan, json, csv.as_deref())
        }
        Command::Phi { input } => cmd_phi(&input),
        Command::Groups {
            command: GroupsCommand::List,
        } => {
            cmd_groups_list();
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyReport { input } => cmd_verify_report(&input),
    }
}

fn read_file(path: &std::path::Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn cmd_check(
    input: &std::path::Path,
    group_spec: &str,
    mode: TupleMode,
    first: bool,
) -> Result<ExitCode, Error> {
    let config = configuration_from_json(&read_file(input)?)?;
    let group = group_from_spec(group_spec)?;
    let options = SearchOptions {
        mode,
        stop_on_first: first,
        tuple_cap: DEFAULT_TUPLE_CAP,
    };
    let outcome = check_configuration(&config, &group, &options)?;

    println!(
        "configuration: {} (d = {}, {} points, ambient dimension {})",
        input.display(),
        config.intrinsic_d(),
        config.points().len(),
        config.ambient_dim()
    );
    println!(
        "group: {} (order {}, dimension {})",
        outcome.group_label,
        outcome.group_order,
        group.ambient_dim()
    );
    if outcome.not_applicable {
        println!("not applicable: last point lies outside the affine hull of the prefix");
        return Ok(ExitCode::SUCCESS);
    }
    if let Some(alpha) = &outcome.alpha {
        let coords: Vec<String> = alpha.coords().iter().map(format_rational).collect();
        println!("alpha: {}", coords.join(" "));
    }
    if outcome.witnesses.is_empty() {
        println!("witnessing tuples: none found");
    } else {
        println!("witnessing tuples: {}", outcome.witnesses.len());
        for w in &outcome.witnesses {
            let b: Vec<String> = w.witness.witness.b.iter().map(format_rational).collect();
            println!(
                "  tuple {} b = [{}] A =",
                format_tuple_indices(w.tuple.indices()),
                b.join(" ")
            );
            for line in format!("{}", w.witness.witness.a).lines() {
                println!("    {line}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_certify(group_spec: &str, d: usize, mode: TupleMode) -> Result<ExitCode, Error> {
    let group = group_from_spec(group_spec)?;
    let outcome = certify_group(&group, d, mode, DEFAULT_TUPLE_CAP)?;
    println!(
        "group: {} (order {}), d = {}",
        outcome.group_label,
        group.order(),
        d
    );
    println!("certified {}/{} tuples", outcome.passed, outcome.total);
    if outcome.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        // A failing tuple contradicts the genericity argument and means an
        // implementation bug; dump the instances for diagnosis.
        for indices in &outcome.failures {
            println!("FAILED tuple {}", format_tuple_indices(indices));
        }
        Ok(ExitCode::from(EXIT_FAILED_CHECK))
    }
}

fn cmd_montecarlo(
    plan: &ExperimentPlan,
    json: bool,
    csv: Option<&std::path::Path>,
) -> Result<ExitCode, Error> {
    let report = run_montecarlo(plan, &SphereTrialSource)?;
    if let Some(path) = csv {
        std::fs::write(path, report.to_csv()).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    if json {
        println!("{}", report.to_json());
    } else {
        println!(
            "trials: {}, groups: {}, tuple mode: {:?}",
            report.aggregate.trials,
            plan.group_specs.join(", "),
            plan.tuple_mode
        );
        println!(
            "witnessing tuples found: {}",
            report.aggregate.witnesses
        );
        println!(
            "degenerate configurations resampled: {}",
            report.aggregate.degenerate_resamples
        );
        println!("elapsed: {} ms", report.aggregate.elapsed_ms);
        for w in &report.witnesses {
            println!(
                "witness at trial {} group {} tuple {} (digest {})",
                w.trial,
                w.group,
                format_tuple_indices(&w.tuple_indices),
                w.digest
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_phi(input: &std::path::Path) -> Result<ExitCode, Error> {
    let config = configuration_from_json(&read_file(input)?)?;
    match subtrans::phi(&config)? {
        PhiOutcome::Inside(alpha) => {
            let coords: Vec<String> = alpha.coords().iter().map(format_rational).collect();
            println!("{}", coords.join(" "));
            Ok(ExitCode::SUCCESS)
        }
        PhiOutcome::OutsideHull => {
            println!("outside hull");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_groups_list() {
    println!("builtin group families:");
    println!("  cyclic:<m>:regular     cyclic group of order m as m x m shift matrices");
    println!("  symmetric:<m>:natural  all m! permutation matrices");
    println!("  hyperoctahedral:<m>    all 2^m * m! signed permutation matrices");
    println!("  c4:rotation2d          the four integer rotations of the square");
    println!("  cayley:<path>          regular representation of a Cayley table file");
    println!("                         (first line: order k; then k rows of k 1-based indices)");
    println!("  explicit:<path>        closure of generator matrices from a file");
    println!("                         (rational entries `p/q`, one row per line,");
    println!("                          matrices separated by blank lines)");
}

fn cmd_verify_report(input: &std::path::Path) -> Result<ExitCode, Error> {
    let report = ExperimentReport::from_json(&read_file(input)?)?;
    let verification = verify_report(&report)?;
    println!(
        "witnesses checked: {}, failures: {}",
        verification.witnesses_checked,
        verification.failures.len()
    );
    for f in &verification.failures {
        println!("FAILED: {f}");
    }
    if verification.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_FAILED_CHECK))
    }
}
