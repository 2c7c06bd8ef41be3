//! The `hadgal` command line.
//!
//! Exit codes: 0 success, 1 a solve did not converge or a check failed,
//! 2 invalid arguments or unknown problem.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};

use hadgal_core::{BasisKind, BoundaryMode, Freeze, Method, SolverConfig};

use crate::error::{BenchError, Result};
use crate::jacobian::{check_problem, AlgebraicForm, MAX_KRONECKER_CHECK};
use crate::problems::{find_problem, BenchmarkProblem};
use crate::report::{Comparison, JacobianReport, Meta, Report};
use crate::study::{compare, run_single, run_study, Formulation, RunRecord, StudyConfig};

pub const MAX_RESOLUTION: usize = 512;

#[derive(Debug, Parser)]
#[command(name = "hadgal", version, about = "Hadamard-form Galerkin solver and formulation studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one problem at one resolution.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long, value_enum, default_value_t = FormulationArg::Hadamard)]
        formulation: FormulationArg,
    },
    /// Sweep resolutions and report observed L2 orders.
    Convergence {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        n_list: Vec<usize>,
        #[arg(long, value_enum, default_value_t = FormulationArg::Hadamard)]
        formulation: FormulationArg,
    },
    /// Solve with both formulations and report the difference.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 32)]
        n: usize,
    },
    /// Compare analytic Jacobians with central differences.
    JacobianCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    problem: String,
    #[arg(long, value_enum, default_value_t = BasisArg::FeHat)]
    basis: BasisArg,
    #[arg(long, value_enum, default_value_t = SolverArg::NewtonSjt)]
    solver: SolverArg,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Step fraction in (0, 1]; Picard defaults to the problem's own value.
    #[arg(long)]
    damping: Option<f64>,
    #[arg(long, value_enum, default_value_t = FreezeArg::P)]
    freeze: FreezeArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Eliminate)]
    boundary_mode: ModeArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BasisArg {
    #[value(name = "fe_hat")]
    FeHat,
    #[value(name = "modal_poly")]
    ModalPoly,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormulationArg {
    Classical,
    Hadamard,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolverArg {
    NewtonSjt,
    NewtonFd,
    Picard,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FreezeArg {
    P,
    Q,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Eliminate,
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl Common {
    fn study_config(&self, problem: &BenchmarkProblem, formulation: Formulation) -> Result<StudyConfig> {
        let method = match self.solver {
            SolverArg::NewtonSjt => Method::NewtonSjt,
            SolverArg::NewtonFd => Method::NewtonFd,
            SolverArg::Picard => Method::Picard,
        };
        let damping = self.damping.unwrap_or(match method {
            Method::Picard => problem.picard_damping,
            _ => 1.0,
        });
        let solver = SolverConfig {
            method,
            tol: self.tol,
            max_iter: self.max_iter,
            damping,
            picard_freeze: match self.freeze {
                FreezeArg::P => Freeze::FreezeP,
                FreezeArg::Q => Freeze::FreezeQ,
            },
            ..SolverConfig::default()
        };
        solver.validate()?;
        Ok(StudyConfig {
            basis: self.basis(),
            formulation,
            solver,
            boundary_mode: match self.boundary_mode {
                ModeArg::Eliminate => BoundaryMode::EssentialElimination,
                ModeArg::Weak => BoundaryMode::WeakBoundary,
            },
        })
    }

    fn basis(&self) -> BasisKind {
        match self.basis {
            BasisArg::FeHat => BasisKind::FeHat,
            BasisArg::ModalPoly => BasisKind::ModalPoly,
        }
    }

    fn emit(&self, json: impl FnOnce() -> Result<String>, csv: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        let mut sink: Box<dyn Write> = match &self.output {
            Some(path) => Box::new(File::create(path).map_err(|source| BenchError::Io { path: path.clone(), source })?),
            None => Box::new(io::stdout().lock()),
        };
        let path = self.output.clone().unwrap_or_else(|| "<stdout>".into());
        let io_err = |source| BenchError::Io { path: path.clone(), source };
        match self.format {
            FormatArg::Json => {
                let text = json()?;
                writeln!(sink, "{text}").map_err(io_err)?;
            }
            FormatArg::Csv => csv(&mut sink)?,
        }
        sink.flush().map_err(io_err)
    }
}

fn check_resolution(n: usize, cap: usize) -> Result<()> {
    if n == 0 || n > cap {
        return Err(BenchError::Usage(format!("resolution {n} outside 1..={cap}")));
    }
    Ok(())
}

fn formulation(f: FormulationArg) -> Formulation {
    match f {
        FormulationArg::Classical => Formulation::Classical,
        FormulationArg::Hadamard => Formulation::Hadamard,
    }
}

fn all_converged(records: &[RunRecord]) -> bool {
    records.iter().all(|r| r.report.converged)
}

fn emit_report(common: &Common, report: &Report) -> Result<()> {
    common.emit(|| report.to_json(), |w| report.write_csv(w))
}

fn compare_table(records: &[RunRecord], diff: f64) -> String {
    let mut s = format!(
        "{:<12} {:>9} {:>6} {:>14} {:>14} {:>12} {:>12}\n",
        "formulation", "converged", "iters", "error_l2", "error_max", "quad_asm", "quad_iter"
    );
    let fmt = |v: Option<f64>| v.map(|v| format!("{v:.6e}")).unwrap_or_else(|| "-".into());
    for r in records {
        s += &format!(
            "{:<12} {:>9} {:>6} {:>14} {:>14} {:>12} {:>12}\n",
            r.formulation.as_str(),
            r.report.converged,
            r.report.iterates,
            fmt(r.error_l2),
            fmt(r.error_max),
            r.report.quad_evals_assembly,
            r.report.quad_evals_iteration
        );
    }
    s += &format!("max |u_classical - u_hadamard| = {diff:.6e}\n");
    s
}

fn command_line(argv: &[OsString]) -> String {
    argv.iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: Cli, command: &str) -> Result<bool> {
    match cli.command {
        Command::Solve { common, n, formulation: f } => {
            check_resolution(n, MAX_RESOLUTION)?;
            let problem = find_problem(&common.problem)?;
            let cfg = common.study_config(&problem, formulation(f))?;
            let rec = run_single(&problem, &cfg, n)?;
            let ok = rec.report.converged;
            emit_report(&common, &Report::new(command, vec![rec]))?;
            Ok(ok)
        }
        Command::Convergence { common, n_list, formulation: f } => {
            for &n in &n_list {
                check_resolution(n, MAX_RESOLUTION)?;
            }
            let problem = find_problem(&common.problem)?;
            let cfg = common.study_config(&problem, formulation(f))?;
            let records = run_study(&problem, &cfg, &n_list)?;
            let ok = all_converged(&records);
            emit_report(&common, &Report::new(command, records))?;
            Ok(ok)
        }
        Command::Compare { common, n } => {
            check_resolution(n, MAX_RESOLUTION)?;
            let problem = find_problem(&common.problem)?;
            let cfg = common.study_config(&problem, Formulation::Hadamard)?;
            let records = compare(&problem, &cfg, n)?;
            let diff = records[0].solution().sub(&records[1].solution())?.norm_inf();
            eprint!("{}", compare_table(&records, diff));
            let ok = all_converged(&records);
            let mut report = Report::new(command, records.to_vec());
            report.comparison = Some(Comparison { solution_diff_inf: diff });
            emit_report(&common, &report)?;
            Ok(ok)
        }
        Command::JacobianCheck { common, n, points, seed } => {
            check_resolution(n, MAX_KRONECKER_CHECK)?;
            if points == 0 {
                return Err(BenchError::Usage("--points must be at least 1".into()));
            }
            let problem = find_problem(&common.problem)?;
            let mode = common.study_config(&problem, Formulation::Hadamard)?.boundary_mode;
            let checks = [AlgebraicForm::Hadamard, AlgebraicForm::Kronecker]
                .into_iter()
                .map(|form| check_problem(&problem, common.basis(), n, form, mode, points, seed))
                .collect::<Result<Vec<_>>>()?;
            let report = JacobianReport {
                meta: Meta::now(command),
                checks,
            };
            let ok = report.passed();
            common.emit(|| Ok(serde_json::to_string_pretty(&report)?), |w| report.write_csv(w))?;
            Ok(ok)
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let command = command_line(&argv);
    match run(cli, &command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("hadgal: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}
