//! Command-line front end for the verification suites.

use clap::{Parser, Subcommand};

use pseudoform::forms::DEFAULT_FD_STEP;
use pseudoform::orientation::OrientationModel;
use pseudoform::report::Report;
use pseudoform::suites::{
    report_parity, resolve_quad_order, verify_algebra, verify_calculus, verify_maxwell,
    DEFAULT_SEED,
};

/// Verification tool for twisted exterior calculus on affine space-time:
/// orientation-index tables, differential and integral identities, field
/// equations, and time-reflection parity tables.
#[derive(Parser)]
#[command(name = "pseudoform", version, propagate_version = true)]
struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exits nonzero if any check fails.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Measure and report derived tables.
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Index tables, parity products, wedge laws, pairing invariance, and
    /// constitutive naturality.
    Algebra {
        /// Seed of the randomized checks.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Nilpotency of the differential, the boundary theorem, transport
    /// balance, Weyl duality, and the homotopy potential.
    Calculus {
        /// Quadrature order per axis (default: PSEUDOFORM_QUAD_ORDER or 8).
        #[arg(long)]
        order: Option<usize>,
        /// Step for finite-difference partials of closure-backed forms.
        #[arg(long, default_value_t = DEFAULT_FD_STEP)]
        fd_step: f64,
        /// Seed of the randomized checks.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Field-equation residuals, stationary integral laws, and constitutive
    /// agreement for a built-in field configuration.
    Maxwell {
        /// Built-in field configuration.
        #[arg(long, value_parser = ["plane-wave", "coulomb", "constant"])]
        field: String,
        /// Velocity of the observing frame along the first spatial axis,
        /// as a fraction of c.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        frame_boost: f64,
        /// Quadrature order per axis (default: PSEUDOFORM_QUAD_ORDER or 8).
        #[arg(long)]
        order: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Measure the time-reflection sign of each decomposed field and compare
    /// against the model's expected table.
    Parity {
        /// Orientation model: two classes (standard) or four (relativistic).
        #[arg(long, value_parser = ["standard", "relativistic"])]
        model: String,
        /// Built-in field configuration to decompose.
        #[arg(long, default_value = "plane-wave")]
        field: String,
    },
}

fn run(cli: &Cli) -> pseudoform::Result<Report> {
    match &cli.command {
        Command::Verify(VerifyCommand::Algebra { seed }) => verify_algebra(*seed),
        Command::Verify(VerifyCommand::Calculus {
            order,
            fd_step,
            seed,
        }) => verify_calculus(resolve_quad_order(*order), *fd_step, *seed),
        Command::Verify(VerifyCommand::Maxwell {
            field,
            frame_boost,
            order,
        }) => verify_maxwell(field, *frame_boost, resolve_quad_order(*order)),
        Command::Report(ReportCommand::Parity { model, field }) => {
            let model = match model.as_str() {
                "standard" => OrientationModel::Standard,
                _ => OrientationModel::Relativistic,
            };
            report_parity(model, field)
        }
    }
}

/// A compact measured-vs-expected sign grid for the parity report.
fn parity_grid(report: &Report) -> String {
    let mut measured = String::from("  measured:");
    let mut expected = String::from("  expected:");
    for check in &report.checks {
        if let Some(name) = check.id.strip_prefix("parity/") {
            if check.id == "parity/frame-independence" {
                continue;
            }
            let m = if check.value >= 0.0 { '+' } else { '-' };
            let e = if check.tolerance >= 0.0 { '+' } else { '-' };
            measured.push_str(&format!("  {name}:{m}"));
            expected.push_str(&format!("  {name}:{e}"));
        }
    }
    format!("{measured}\n{expected}\n")
}

fn main() {
    use std::io::Write;
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            // Ignore write failures (e.g. a closed pipe): the exit code
            // already carries the verdict.
            let mut out = std::io::stdout();
            if cli.json {
                match report.to_json() {
                    Ok(text) => {
                        let _ = writeln!(out, "{text}");
                    }
                    Err(err) => {
                        eprintln!("error: {err}");
                        std::process::exit(2);
                    }
                }
            } else {
                if report.suite == "parity" {
                    let _ = write!(out, "{}", parity_grid(&report));
                }
                let _ = write!(out, "{}", report.render_text());
            }
            std::process::exit(i32::from(!report.pass));
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}
