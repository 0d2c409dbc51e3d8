//! The `qdblab` command line.

pub mod config;
pub mod model;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use config::{Format, Grid, Range, RunConfig, Tolerances};
pub use model::{LoadError, Model, ModelFile};
pub use report::{evaluate, ExchangeRow, Report, Subject, Verdict};

use crate::error::Error;
use crate::examples::{ExampleAParams, ExampleBParams, ExampleCParams, Schedule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MODEL: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "qdblab", version, about = "Quantum detailed balance and fluctuation-relation checks for open quantum dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one of the built-in qubit examples.
    Example {
        #[arg(value_enum)]
        name: ExampleName,
        #[command(flatten)]
        params: ExampleArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check a model given as a JSON file.
    Check {
        model: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate a model over a range of one parameter.
    Sweep {
        /// `a`, `b`, `c` or a model file.
        target: String,
        #[arg(long)]
        param: String,
        /// START:STOP:COUNT, linearly spaced.
        #[arg(long)]
        range: Range,
        #[command(flatten)]
        params: ExampleArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    A,
    B,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum XiSchedule {
    /// `1 − e^{−τ}`
    Exp,
    /// `τ/(1 + τ)`
    Rational,
}

#[derive(Args, Debug, Clone)]
pub struct ExampleArgs {
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Coupling of the optical master equation (example b).
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Hold `q_τ = q_∞` (example a), which removes the finite-time correction.
    #[arg(long)]
    pub constant_q: bool,
    #[arg(long, value_enum, default_value_t = XiSchedule::Exp)]
    pub xi: XiSchedule,
    /// Bloch generator entries for example c; defaults perturb ν by 10% from
    /// the detailed-balance point.
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub chi: Option<f64>,
    #[arg(long)]
    pub zeta: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Comma list, or log:START:STOP:COUNT / lin:START:STOP:COUNT.
    #[arg(long)]
    pub tau_grid: Option<Grid>,
    #[arg(long)]
    pub s_grid: Option<Grid>,
    #[arg(long)]
    pub beta_i: Option<f64>,
    #[arg(long)]
    pub beta_f: Option<f64>,
    /// Directory for the report files; without it the verdict goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub tol_qdb: Option<f64>,
    #[arg(long)]
    pub tol_qfr: Option<f64>,
}

impl RunArgs {
    pub fn to_config(&self) -> RunConfig {
        let mut c = RunConfig::default();
        if let Some(g) = &self.tau_grid {
            c.tau_grid = g.0.clone();
        }
        if let Some(g) = &self.s_grid {
            c.s_grid = g.0.clone();
        }
        if let Some(b) = self.beta_i {
            c.beta_i = b;
        }
        if let Some(b) = self.beta_f {
            c.beta_f = b;
        }
        if let Some(t) = self.tol_qdb {
            c.tol.qdb = t;
        }
        if let Some(t) = self.tol_qfr {
            c.tol.qfr = t;
        }
        c.out = self.out.clone();
        c.format = self.format;
        c
    }
}

/// A model together with the parameters a sweep may vary.
#[derive(Clone, Debug)]
pub enum Target {
    Example { name: ExampleName, params: ExampleArgs },
    File(ModelFile),
}

impl Target {
    /// Sets a named parameter; `beta_i` and `beta_f` live in the run config.
    pub fn set_param(&mut self, cfg: &mut RunConfig, name: &str, value: f64) -> Result<(), Error> {
        match name {
            "beta_i" => cfg.beta_i = value,
            "beta_f" => cfg.beta_f = value,
            _ => {
                let unknown = || Error::UnknownParameter(format!("'{name}' for this model"));
                let Target::Example { name: ex, params } = self else { return Err(unknown()) };
                match (*ex, name) {
                    (_, "omega") => params.omega = value,
                    (ExampleName::B, "gamma") => params.gamma = value,
                    (ExampleName::C, "nu") => params.nu = Some(value),
                    (ExampleName::C, "alpha") => params.alpha = Some(value),
                    (ExampleName::C, "chi") => params.chi = Some(value),
                    (ExampleName::C, "zeta") => params.zeta = Some(value),
                    _ => return Err(unknown()),
                }
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, cfg: &RunConfig) -> Result<Report, Error> {
        match self {
            Target::Example { name: ExampleName::A, params } => {
                let base = if params.constant_q {
                    ExampleAParams::with_constant_q(params.omega, cfg.beta_f)?
                } else {
                    ExampleAParams::with_default_schedules(params.omega, cfg.beta_f)?
                };
                let p = match params.xi {
                    XiSchedule::Exp => base,
                    XiSchedule::Rational => base.with_xi(Schedule::Rational { end: 1.0 })?,
                };
                let f = |t: f64| p.correction(t);
                evaluate(Subject::Family { family: &p, correction: Some(&f) }, &p.hamiltonian(), Some(p.beta_f), cfg)
            }
            Target::Example { name: ExampleName::B, params } => {
                let p = ExampleBParams::new(params.omega, params.gamma, cfg.beta_f)?;
                evaluate(Subject::Semigroup(&p.generator()), &p.hamiltonian(), Some(p.beta_f), cfg)
            }
            Target::Example { name: ExampleName::C, params } => {
                let p = example_c(params, cfg.beta_f)?;
                let g = p.generator()?;
                evaluate(Subject::Semigroup(&g), &p.hamiltonian(), Some(p.beta_f()), cfg)
            }
            Target::File(f) => match f.build()? {
                Model::Semigroup(g) => evaluate(Subject::Semigroup(&g), g.hamiltonian(), f.beta_f, cfg),
                Model::Channel { channel, hamiltonian } => {
                    evaluate(Subject::Channel(&channel), &hamiltonian, f.beta_f, cfg)
                }
            },
        }
    }
}

pub fn example_c(params: &ExampleArgs, beta_f: f64) -> Result<ExampleCParams, Error> {
    let base = ExampleCParams::default_instance(params.omega, beta_f)?;
    ExampleCParams::new(
        params.omega,
        params.nu.unwrap_or(base.nu),
        params.alpha.unwrap_or(base.alpha),
        params.chi.unwrap_or(base.chi),
        params.zeta.unwrap_or(base.zeta),
    )
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::UnknownParameter(_) | Error::ScheduleOutOfRange { .. } => EXIT_USAGE,
        Error::InternalCheck(_) | Error::NoConvergence(_) | Error::SingularMatrix => EXIT_INTERNAL,
        _ => EXIT_MODEL,
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn write_outputs(dir: &Path, files: &[(String, String)]) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    for (name, body) in files {
        let p = dir.join(name);
        std::fs::write(&p, body).map_err(io_err(&p))?;
    }
    Ok(())
}

fn emit_report(report: &Report, cfg: &RunConfig) -> Result<(), Failure> {
    let verdict = report::to_json(&report.verdict);
    match &cfg.out {
        Some(dir) => {
            let exchange = match cfg.format {
                Format::Csv => ("exchange.csv".to_string(), report::exchange_csv(&report.rows)),
                Format::Json => ("exchange.json".to_string(), report::to_json(&report.rows)),
            };
            write_outputs(dir, &[exchange, ("verdict.json".into(), verdict)])
        }
        None => {
            print!("{verdict}");
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    pub status: String,
    pub classification: Option<String>,
    pub beta_f: Option<f64>,
    pub qdb1_pass: Option<bool>,
    pub qdb1_max_residual: Option<f64>,
    pub qdb2_pass: Option<bool>,
    pub qdb2_max_residual: Option<f64>,
    pub qfr_max_deviation: Option<f64>,
    /// `R` and `e^{Δβ·E}` for the smallest gap at the last grid time.
    pub tau_last: Option<f64>,
    #[serde(rename = "R_last")]
    pub r_last: Option<f64>,
    pub predicted_last: Option<f64>,
}

pub const SWEEP_HEADER: &str = "param,value,status,classification,beta_f,qdb1_pass,qdb1_max_residual,qdb2_pass,qdb2_max_residual,qfr_max_deviation,tau_last,R_last,predicted_last";

/// One row per value, in range order. Failures at a value are recorded in
/// the status column rather than aborting the sweep.
pub fn sweep(target: &Target, cfg: &RunConfig, param: &str, range: &Range) -> Result<Vec<SweepRow>, Error> {
    // reject unknown names even when the range is empty
    target.clone().set_param(&mut cfg.clone(), param, range.start)?;
    let mut rows = vec![];
    for value in range.values() {
        let mut t = target.clone();
        let mut c = cfg.clone();
        t.set_param(&mut c, param, value)?;
        let mut row = SweepRow {
            param: param.to_string(),
            value,
            status: "ok".into(),
            classification: None,
            beta_f: None,
            qdb1_pass: None,
            qdb1_max_residual: None,
            qdb2_pass: None,
            qdb2_max_residual: None,
            qfr_max_deviation: None,
            tau_last: None,
            r_last: None,
            predicted_last: None,
        };
        let outcome = c.validate().and_then(|_| t.evaluate(&c));
        match outcome {
            Ok(rep) => {
                let v = rep.verdict;
                row.classification = Some(v.classification);
                row.beta_f = v.beta_f;
                row.qdb1_pass = v.qdb1.pass;
                row.qdb1_max_residual = v.qdb1.max_residual;
                row.qdb2_pass = v.qdb2.pass;
                row.qdb2_max_residual = v.qdb2.max_residual;
                row.qfr_max_deviation = v.qfr_max_deviation;
                if let Some(last) = rep.rows.last() {
                    let tau = last.tau;
                    if let Some(first) = rep.rows.iter().find(|r| r.tau == tau) {
                        row.tau_last = Some(tau);
                        row.r_last = first.r;
                        row.predicted_last = Some(first.predicted);
                    }
                }
            }
            Err(e) if exit_code(&e) == EXIT_INTERNAL => return Err(e),
            Err(e) => row.status = e.name().to_string(),
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let b = |x: Option<bool>| x.map(|v| v.to_string()).unwrap_or_default();
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.param,
            report::fmt_f64(r.value),
            r.status,
            r.classification.clone().unwrap_or_default(),
            report::fmt_opt(r.beta_f),
            b(r.qdb1_pass),
            report::fmt_opt(r.qdb1_max_residual),
            b(r.qdb2_pass),
            report::fmt_opt(r.qdb2_max_residual),
            report::fmt_opt(r.qfr_max_deviation),
            report::fmt_opt(r.tau_last),
            report::fmt_opt(r.r_last),
            report::fmt_opt(r.predicted_last),
        );
    }
    out
}

fn load_target(spec: &str, params: &ExampleArgs) -> Result<Target, Failure> {
    let name = match spec {
        "a" | "A" => Some(ExampleName::A),
        "b" | "B" => Some(ExampleName::B),
        "c" | "C" => Some(ExampleName::C),
        _ => None,
    };
    Ok(match name {
        Some(name) => Target::Example { name, params: params.clone() },
        None => Target::File(ModelFile::load(Path::new(spec))?),
    })
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Example { name, params, run } => {
            let cfg = run.to_config();
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let report = Target::Example { name, params }.evaluate(&cfg)?;
            emit_report(&report, &cfg)
        }
        Command::Check { model, run } => {
            let cfg = run.to_config();
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let file = ModelFile::load(&model)?;
            let report = Target::File(file).evaluate(&cfg)?;
            emit_report(&report, &cfg)
        }
        Command::Sweep { target, param, range, params, run } => {
            let cfg = run.to_config();
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let target = load_target(&target, &params)?;
            let rows = sweep(&target, &cfg, &param, &range)?;
            let (name, body) = match cfg.format {
                Format::Csv => ("sweep.csv", sweep_csv(&rows)),
                Format::Json => ("sweep.json", report::to_json(&rows)),
            };
            match &cfg.out {
                Some(dir) => write_outputs(dir, &[(name.to_string(), body)]),
                None => {
                    print!("{body}");
                    Ok(())
                }
            }
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("qdblab: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            eprintln!("qdblab: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            eprintln!("qdblab: {e}");
            exit_code(&e)
        }
    }
}
