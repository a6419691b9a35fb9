//! Command-line front end: run named cases, the randomized property
//! suites and finite-difference convergence sweeps, and write JSON
//! reports.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod config;
pub mod convergence;
pub mod error;
pub mod properties;
pub mod registry;
pub mod report;

use config::{parse_step, parse_tolerance, CaseParams, GridSpec, RunConfig};
use error::{CliError, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};
use report::{to_json, write_atomic};

#[derive(Debug, Parser)]
#[command(name = "dhmaps", version, about = "Verify Dirac-harmonic map constructions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a case and check its Euler-Lagrange residuals and criteria.
    Verify(VerifyArgs),
    /// Run the randomized invariant suites.
    Properties(PropertiesArgs),
    /// Residuals of a case against the finite-difference step.
    Convergence(ConvergenceArgs),
    /// List the registered cases.
    ListCases,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the JSON report to stdout instead of a summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    #[arg(long)]
    pub case: String,
    /// Per-axis counts, e.g. 32x16; an axis may carry a range, 9:-1:1.
    #[arg(long)]
    pub grid: Option<GridSpec>,
    /// Parameter file (TOML, complexes as [re, im]).
    #[arg(long)]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[arg(long, default_value_t = dhmaps::fd::DEFAULT_STEP)]
    pub fd_step: f64,
    /// Per-residual tolerance, name=value. Repeatable.
    #[arg(long = "tol")]
    pub tol: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Differentiate everything numerically, ignoring closed forms.
    #[arg(long)]
    pub fd_only: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PropertiesArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    /// Steps to sweep; at least three. Repeatable.
    #[arg(long = "fd-step", required = true)]
    pub fd_step: Vec<f64>,
    /// Keep closed-form derivatives where the case has them.
    #[arg(long)]
    pub analytic: bool,
    #[command(flatten)]
    pub output: Output,
}

impl CaseArgs {
    fn config(&self) -> Result<RunConfig, CliError> {
        let mut c = RunConfig::new(self.case.clone());
        c.grid = self.grid.clone();
        c.params = self.params.as_deref().map(CaseParams::load).transpose()?;
        Ok(c)
    }
}

impl VerifyArgs {
    pub fn config(&self) -> Result<RunConfig, CliError> {
        let mut c = self.case.config()?;
        c.fd_step = parse_step(self.fd_step)?;
        c.analytic = !self.fd_only;
        c.seed = self.seed;
        c.out = self.output.out.clone();
        for t in &self.tol {
            let (k, v) = parse_tolerance(t)?;
            c.tolerances.insert(k, v);
        }
        Ok(c)
    }
}

fn emit(out: &mut dyn Write, output: &Output, json: &str, summary: impl FnOnce() -> String) -> Result<(), CliError> {
    if let Some(p) = &output.out {
        write_atomic(p, json)?;
    }
    let text = if output.json { json.to_string() } else { summary() };
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io { path: "stdout".into(), source })
}

fn fail(err: &mut dyn Write, e: &CliError) -> i32 {
    let _ = writeln!(err, "error: {e}");
    e.exit_code()
}

/// Run a parsed command, writing to `out` and `err`; returns the exit
/// status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::ListCases => {
            for c in registry::CASES {
                let _ = writeln!(out, "{:<20} {}", c.name, c.summary);
            }
            EXIT_PASS
        }
        Command::Verify(a) => {
            let config = match a.config() {
                Ok(c) => c,
                Err(e) => return fail(err, &e),
            };
            let r = report::run_case(&config);
            if let Some(msg) = &r.error {
                let _ = writeln!(err, "error: {msg}");
            }
            let json = to_json(&r);
            let res = emit(out, &a.output, &json, || {
                let mut s = format!("case {}: {:?}\n", r.case, r.status);
                for (k, v) in &r.residuals {
                    s += &format!("  {:<16} max {:.3e}  mean {:.3e}  tol {:.1e}  {}\n", k, v.max, v.mean, v.tol, verdict(v.pass));
                }
                for (k, v) in &r.criteria {
                    s += &format!("  {:<32} {:.3e}  {}\n", k, r.criteria_values[k], verdict(*v));
                }
                s
            });
            match res {
                Ok(()) => r.status.exit_code(),
                Err(e) => fail(err, &e),
            }
        }
        Command::Properties(a) => {
            let r = match properties::run_properties(a.seed, a.trials) {
                Ok(r) => r,
                Err(e) => return fail(err, &e),
            };
            let json = to_json(&r);
            let res = emit(out, &a.output, &json, || {
                let mut s = format!("seed {} trials {}\n", r.seed, r.trials);
                for (k, v) in &r.properties {
                    s += &format!("  {:<34} max {:.3e}  tol {:.1e}  {}\n", k, v.max, v.tol, verdict(v.pass));
                }
                s
            });
            match res {
                Ok(()) if r.pass => EXIT_PASS,
                Ok(()) => EXIT_FAIL,
                Err(e) => fail(err, &e),
            }
        }
        Command::Convergence(a) => {
            let run = || -> Result<convergence::ConvergenceReport, CliError> {
                let mut c = a.case.config()?;
                c.analytic = a.analytic;
                convergence::convergence_sweep(&c, &a.fd_step)
            };
            let r = match run() {
                Ok(r) => r,
                Err(e) => return fail(err, &e),
            };
            let json = to_json(&r);
            let res = emit(out, &a.output, &json, || {
                let mut s = format!("case {}  steps {:?}\n", r.case, r.steps);
                for (k, v) in &r.residuals {
                    let vals: Vec<String> = v.values.iter().map(|x| format!("{x:.3e}")).collect();
                    s += &format!("  {:<16} {}  order {}  difference order {}\n", k, vals.join(" "), opt(v.order), opt(v.difference_order));
                }
                s += &format!("fitted order {}  {}\n", opt(r.order), verdict(r.pass));
                s
            });
            match res {
                Ok(()) if r.pass => EXIT_PASS,
                Ok(()) => EXIT_FAIL,
                Err(e) => fail(err, &e),
            }
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "ok"
    } else {
        "FAIL"
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or("not fitted".into(), |x| format!("{x:.2}"))
}

/// Parse arguments and run; clap errors map to the configuration status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = main_with_args(std::iter::once("dhmaps").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn list_cases() {
        let (code, out, _) = call(&["list-cases"]);
        assert_eq!(code, 0);
        for c in registry::CASES {
            assert!(out.contains(c.name));
        }
    }

    #[test]
    fn bad_arguments_exit_2() {
        assert_eq!(call(&["verify"]).0, 2);
        assert_eq!(call(&["verify", "--case", "example1", "--fd-step", "0.5"]).0, 2);
        assert_eq!(call(&["verify", "--case", "example1", "--grid", "1x3"]).0, 2);
        assert_eq!(call(&["verify", "--case", "example1", "--tol", "el_map"]).0, 2);
        assert_eq!(call(&["verify", "--case", "unknown"]).0, 2);
        assert_eq!(call(&["bogus"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn json_to_stdout() {
        let (code, out, _) = call(&["verify", "--case", "example1", "--grid", "3x3", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["case"], "example1");
        assert_eq!(v["status"], "pass");
        assert!(v["residuals"]["el_map"]["pass"].as_bool().unwrap());
    }
}
