use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bessel_sumrules::eval::{eval_function, parse_args, FUNCTIONS};
use bessel_sumrules::plan::{default_plan, load_plan};
use bessel_sumrules::rules::{RuleId, Tolerances};
use bessel_sumrules::{emit_report, run_plan, Format, SummationPolicy};

#[derive(Parser)]
#[command(
    name = "sumrules",
    version,
    about = "Check Bessel-function sum rules numerically"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification plan and report a verdict per grid point.
    Verify {
        /// Plan file (JSON). Without it the bundled default plan runs.
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, default_value = "table", value_parser = parse_format)]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (0 = one per core).
        #[arg(long)]
        parallel: Option<usize>,
        #[arg(long, requires = "tol_rel")]
        tol_abs: Option<f64>,
        #[arg(long, requires = "tol_abs")]
        tol_rel: Option<f64>,
    },
    /// Evaluate one function family, e.g. `eval bessel_j nu=0 x=1`.
    Eval { name: String, args: Vec<String> },
    /// List the rules with their parameters.
    ListRules,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: bessel_sumrules::Error| e.to_string())
}

fn main() -> ExitCode {
    ExitCode::from(main_with(std::env::args_os()))
}

/// Parse `args` (program name first), run, and return the exit code.
fn main_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    // Usage errors exit with 1; clap's own code 2 means "discrepant" here.
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Write to stdout, tolerating a closed pipe.
fn print_out(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn run(command: Command) -> bessel_sumrules::Result<u8> {
    match command {
        Command::Verify {
            plan,
            format,
            out,
            parallel,
            tol_abs,
            tol_rel,
        } => {
            let mut plan = match plan {
                Some(p) => load_plan(&p)?,
                None => default_plan(),
            };
            if let Some(n) = parallel {
                plan.parallelism = n;
            }
            if let (Some(abs), Some(rel)) = (tol_abs, tol_rel) {
                plan.override_tolerances(Tolerances { abs, rel });
            }
            let report = run_plan(&plan)?;
            emit_report(&report, format, out.as_deref())?;
            Ok(report.outcome().exit_code() as u8)
        }
        Command::Eval { name, args } => {
            let args = parse_args(args.iter().map(String::as_str))?;
            let e = eval_function(&name, &args, &SummationPolicy::default())?;
            print_out(&format!(
                "{:.17e}\nterms_used={} last_term_magnitude={:.3e} converged={}\n",
                e.value,
                e.certificate.terms_used,
                e.certificate.last_term_magnitude,
                e.certificate.converged
            ));
            Ok(0)
        }
        Command::ListRules => {
            let mut text = String::new();
            for r in RuleId::ALL {
                text += &format!(
                    "{r}\n  params:  {}\n  formula: {}\n  source:  {}\n",
                    r.params().join(", "),
                    r.formula(),
                    r.anchor()
                );
            }
            text += "\nfunctions for `eval`:\n";
            for (n, a) in FUNCTIONS {
                text += &format!("  {n}({})\n", a.join(", "));
            }
            print_out(&text);
            Ok(0)
        }
    }
}
