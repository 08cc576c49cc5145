//! Command dispatch for the `pentagon` binary.
//!
//! Parsing lives in [`Cli`]; [`CommandConfig`] is the validated form that
//! [`run`] executes. Every command except `bench` writes the same bytes for
//! the same configuration.

use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use pentagon_core::partitions::{partitions_recurrence, reciprocal_series};
use pentagon_core::pentagonal::pairs_upto;
use pentagon_core::telescope::{run_telescope, run_telescope_stages};
use pentagon_core::verify::{central_theorem, division_cascade, first_mismatch, root_suite};
use pentagon_core::{partial_product, TruncatedSeries, Variant};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::VerificationFailed => 1,
        }
    }
}

/// Exit code for malformed invocations.
pub const USAGE_EXIT: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Expand {
        order: usize,
        sparse: bool,
    },
    Pentagonals {
        upto: usize,
    },
    Telescope {
        variant: Variant,
        order: usize,
        stages: Option<usize>,
    },
    Partitions {
        upto: usize,
    },
    Verify {
        order: usize,
        roots_max_d: u64,
    },
    Bench {
        upto: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Expand { .. } => "expand",
            Command::Pentagonals { .. } => "pentagonals",
            Command::Telescope { .. } => "telescope",
            Command::Partitions { .. } => "partitions",
            Command::Verify { .. } => "verify",
            Command::Bench { .. } => "bench",
        }
    }

    fn supports(&self, format: OutputFormat) -> bool {
        match format {
            OutputFormat::Text => true,
            OutputFormat::Json => !matches!(self, Command::Bench { .. }),
            OutputFormat::Csv => matches!(
                self,
                Command::Pentagonals { .. } | Command::Partitions { .. }
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandConfig {
    pub command: Command,
    pub format: OutputFormat,
    /// `None` writes to standard output.
    pub out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "pentagon",
    version,
    about = "Exact expansion of (1 - x)(1 - x^2)(1 - x^3)..."
)]
pub struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Expand the product up to x^N
    Expand {
        #[arg(long, value_name = "N")]
        order: usize,
        /// With --json, emit only the nonzero terms
        #[arg(long, requires = "json")]
        sparse: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List pentagonal exponent pairs with g_minus <= N
    Pentagonals {
        #[arg(long, value_name = "N")]
        upto: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Replay a telescoping derivation stage by stage
    Telescope {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        variant: u8,
        #[arg(long, value_name = "N")]
        order: usize,
        /// Run exactly this many stages instead of stopping at the order
        #[arg(long)]
        stages: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate p(0..=n)
    Partitions {
        #[arg(long, value_name = "n")]
        upto: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the expansion, the division cascade and the roots of unity
    Verify {
        #[arg(long, value_name = "N")]
        order: usize,
        #[arg(long, value_name = "D", default_value_t = 12)]
        roots_max_d: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Time the partition recurrence
    Bench {
        #[arg(long, value_name = "n", default_value_t = 50_000)]
        upto: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    /// Write to PATH instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl Cli {
    /// Validates the parsed arguments; the error is a usage message.
    pub fn into_config(self) -> Result<CommandConfig, String> {
        let (command, output) = match self.command {
            CliCommand::Expand {
                order,
                sparse,
                output,
            } => (Command::Expand { order, sparse }, output),
            CliCommand::Pentagonals { upto, output } => (Command::Pentagonals { upto }, output),
            CliCommand::Telescope {
                variant,
                order,
                stages,
                output,
            } => {
                let variant = Variant::try_from(variant).map_err(|e| e.to_string())?;
                (
                    Command::Telescope {
                        variant,
                        order,
                        stages,
                    },
                    output,
                )
            }
            CliCommand::Partitions { upto, output } => (Command::Partitions { upto }, output),
            CliCommand::Verify {
                order,
                roots_max_d,
                output,
            } => {
                if order == 0 {
                    return Err("verify needs --order of at least 1".into());
                }
                (Command::Verify { order, roots_max_d }, output)
            }
            CliCommand::Bench { upto, output } => (Command::Bench { upto }, output),
        };
        let format = match (output.json, output.csv) {
            (true, _) => OutputFormat::Json,
            (_, true) => OutputFormat::Csv,
            _ => OutputFormat::Text,
        };
        if !command.supports(format) {
            return Err(format!(
                "{} does not support {:?} output",
                command.name(),
                format
            ));
        }
        Ok(CommandConfig {
            command,
            format,
            out: output.out,
        })
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)
}

pub fn run(config: &CommandConfig, out: &mut dyn Write) -> io::Result<Outcome> {
    let format = config.format;
    match config.command {
        Command::Expand { order, sparse } => {
            let s = partial_product(order, order);
            match (format, sparse) {
                (OutputFormat::Json, true) => write_json(out, &s.to_sparse())?,
                (OutputFormat::Json, false) => write_json(out, &s.to_dense())?,
                _ => writeln!(out, "{s}")?,
            }
            Ok(Outcome::Success)
        }
        Command::Pentagonals { upto } => {
            match format {
                OutputFormat::Json => write_json(out, &pairs_upto(upto).collect::<Vec<_>>())?,
                OutputFormat::Csv => {
                    writeln!(out, "n,g_minus,g_plus,sign")?;
                    for p in pairs_upto(upto) {
                        writeln!(out, "{},{},{},{}", p.n, p.g_minus, p.g_plus, p.sign)?;
                    }
                }
                OutputFormat::Text => {
                    for p in pairs_upto(upto) {
                        writeln!(out, "{} {} {} {}", p.n, p.g_minus, p.g_plus, p.sign)?;
                    }
                }
            }
            Ok(Outcome::Success)
        }
        Command::Telescope {
            variant,
            order,
            stages,
        } => {
            let trace = match stages {
                Some(s) => run_telescope_stages(variant, order, s),
                None => run_telescope(variant, order),
            };
            let check = trace.check();
            match format {
                OutputFormat::Json => write_json(out, &trace.to_report(check.passed()))?,
                _ => {
                    writeln!(out, "{trace}")?;
                    for (stage, _) in check.steps.iter().filter(|(_, ok)| !ok) {
                        writeln!(
                            out,
                            "stage {stage}: reduction does not hold at order {order}"
                        )?;
                    }
                    writeln!(out, "verified: {}", check.passed())?;
                }
            }
            Ok(if check.passed() {
                Outcome::Success
            } else {
                Outcome::VerificationFailed
            })
        }
        Command::Partitions { upto } => {
            let table = partitions_recurrence(upto);
            match format {
                OutputFormat::Csv => table.write_csv(out)?,
                OutputFormat::Json => {
                    // Streamed by hand so the table is never duplicated as strings.
                    write!(out, "{{\"upto\":{upto},\"values\":[")?;
                    for (n, p) in table.iter() {
                        if n > 0 {
                            out.write_all(b",")?;
                        }
                        write!(out, "\"{p}\"")?;
                    }
                    writeln!(out, "]}}")?;
                }
                OutputFormat::Text => {
                    for (n, p) in table.iter() {
                        writeln!(out, "{n} {p}")?;
                    }
                }
            }
            Ok(Outcome::Success)
        }
        Command::Verify { order, roots_max_d } => {
            let checks = verification_suite(order, roots_max_d);
            report_checks(order, &checks, format, out)
        }
        Command::Bench { upto } => {
            let start = Instant::now();
            let table = partitions_recurrence(upto);
            let elapsed = start.elapsed();
            writeln!(
                out,
                "partitions_recurrence({upto}): {:.3} ms, table {} values, {} bytes of digits",
                elapsed.as_secs_f64() * 1e3,
                table.max_n() + 1,
                table.heap_bytes()
            )?;
            Ok(Outcome::Success)
        }
    }
}

/// One named check; on failure `detail` is the diff report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, result: Result<String, String>) -> Self {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }
}

/// Runs the checks in order, stopping after the first failure.
pub fn verification_suite(order: usize, roots_max_d: u64) -> Vec<Check> {
    type Job = Box<dyn Fn(usize, u64) -> Check>;
    let jobs: Vec<Job> = vec![
        Box::new(|order, _| {
            Check::new(
                "central theorem",
                match central_theorem(order) {
                    None => Ok(format!("closed form equals the product through x^{order}")),
                    Some(m) => Err(format!(
                        "coefficient of x^{}: closed form {}, product {}",
                        m.exp, m.expected, m.actual
                    )),
                },
            )
        }),
        Box::new(|order, _| {
            let report = division_cascade(order);
            let bad = report.steps.iter().find(|s| !s.exact);
            Check::new(
                "division cascade",
                match (bad, report.final_is_unity) {
                    (None, true) => Ok(format!("{} divisions leave exactly 1", report.steps.len())),
                    (Some(s), _) => Err(format!("division by 1 - x^{} is not exact", s.k)),
                    (None, false) => Err("final quotient is not 1".into()),
                },
            )
        }),
        Box::new(|_, max_d| {
            let max_m = 2 * max_d;
            let report = root_suite(max_d, max_m);
            let result = if let Some(f) = report.failures().next() {
                Err(format!(
                    "d={} j={} m={}: |P| = {:e}, expected {}",
                    f.d,
                    f.j,
                    f.m,
                    f.magnitude,
                    if f.expected_zero { "zero" } else { "nonzero" }
                ))
            } else if let Some(m) = report.count_failures.first() {
                Err(format!("root count for m={m} does not reach m(m+1)/2"))
            } else {
                Ok(format!(
                    "{} evaluations with d <= {max_d}, m <= {max_m}",
                    report.checks.len()
                ))
            };
            Check::new("roots of unity", result)
        }),
        Box::new(|order, _| telescope_check(Variant::First, order)),
        Box::new(|order, _| telescope_check(Variant::Second, order)),
        Box::new(|order, _| {
            let table = partitions_recurrence(order);
            let reciprocal = reciprocal_series(order);
            let as_series = TruncatedSeries::new(table.values().iter().cloned(), order);
            Check::new(
                "partition reciprocal",
                match first_mismatch(&as_series, &reciprocal) {
                    None => Ok(format!("1/s matches p(0..={order})")),
                    Some(m) => Err(format!(
                        "coefficient of x^{}: recurrence {}, reciprocal {}",
                        m.exp, m.expected, m.actual
                    )),
                },
            )
        }),
    ];
    let mut checks = Vec::new();
    for job in jobs {
        let check = job(order, roots_max_d);
        let failed = !check.passed;
        checks.push(check);
        if failed {
            break;
        }
    }
    checks
}

fn telescope_check(variant: Variant, order: usize) -> Check {
    let trace = run_telescope(variant, order);
    let check = trace.check();
    let name = format!("telescope variant {}", variant.id());
    let result = if check.passed() {
        Ok(format!("{} stages verified", trace.emissions.len()))
    } else if !check.initial {
        Err("initial tail does not reproduce the product".into())
    } else if let Some((stage, _)) = check.steps.iter().find(|(_, ok)| !ok) {
        Err(format!("reduction at stage {stage} does not hold"))
    } else {
        Err("reconstruction differs from the closed form".into())
    };
    Check::new(name, result)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    order: usize,
    checks: &'a [Check],
    passed: bool,
}

/// Writes the check list; any failure yields [`Outcome::VerificationFailed`].
pub fn report_checks(
    order: usize,
    checks: &[Check],
    format: OutputFormat,
    out: &mut dyn Write,
) -> io::Result<Outcome> {
    let passed = checks.iter().all(|c| c.passed);
    if format == OutputFormat::Json {
        write_json(
            out,
            &VerifyReport {
                order,
                checks,
                passed,
            },
        )?;
    } else {
        for c in checks {
            let status = if c.passed { "ok" } else { "FAILED" };
            writeln!(out, "{}: {status} ({})", c.name, c.detail)?;
        }
    }
    Ok(if passed {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}
