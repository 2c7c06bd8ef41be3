//! Single runs and mesh sweeps over a built-in problem.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use hadgal_core::{
    solve, BasisKind, BasisSet, BoundaryMode, ClassicalReintegration, DenseVector, Discretization, QuadCounter,
    QuadratureRule, SolveReport, SolverConfig,
};

use crate::error::{BenchError, Result};
use crate::problems::{BenchmarkProblem, ManufacturedSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// Whole product weighted at once, residual and tangent re-integrated
    /// on every iteration.
    Classical,
    /// Operators weighted separately and integrated once.
    Hadamard,
}

impl Formulation {
    pub fn as_str(self) -> &'static str {
        match self {
            Formulation::Classical => "classical",
            Formulation::Hadamard => "hadamard",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyConfig {
    pub basis: BasisKind,
    pub formulation: Formulation,
    pub solver: SolverConfig,
    pub boundary_mode: BoundaryMode,
}

/// One problem solved at one resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: String,
    pub basis: BasisKind,
    /// Elements for hat bases, modes for modal bases.
    pub n: usize,
    pub unknowns: usize,
    pub formulation: Formulation,
    pub solver: String,
    pub boundary_mode: BoundaryMode,
    pub report: SolveReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_l2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_max: Option<f64>,
    /// L2 convergence order against the previous record of a sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed_order: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl RunRecord {
    pub fn solution(&self) -> DenseVector {
        self.report.solution_vector()
    }
}

const ERROR_SUBINTERVALS: usize = 256;
const ERROR_GAUSS_ORDER: usize = 8;

/// L2 and sampled max-norm distance between `û` (full coefficients) and the
/// exact solution, on a fine uniform partition independent of the basis.
pub fn error_norms(basis: &BasisSet, coeffs: &DenseVector, exact: &ManufacturedSolution) -> Result<(f64, f64)> {
    let rule = QuadratureRule::gauss(ERROR_GAUSS_ORDER)?;
    let d = basis.domain();
    let h = d.length() / ERROR_SUBINTERVALS as f64;
    let mut l2 = 0.0;
    let mut max = 0.0f64;
    let mut sample = |x: f64| -> Result<f64> {
        let e = basis.eval_uhat(coeffs, x.clamp(d.a, d.b), 0)? - (exact.u)(x);
        max = max.max(e.abs());
        Ok(e)
    };
    for k in 0..ERROR_SUBINTERVALS {
        let lo = d.a + k as f64 * h;
        for (x, w) in rule.mapped(lo, lo + h) {
            let e = sample(x)?;
            l2 += w * e * e;
        }
        sample(lo)?;
    }
    sample(d.b)?;
    for &node in basis.nodes() {
        sample(node)?;
    }
    Ok((l2.sqrt(), max))
}

/// Assembles and solves `problem` at resolution `n`.
pub fn run_single(problem: &BenchmarkProblem, cfg: &StudyConfig, n: usize) -> Result<RunRecord> {
    cfg.solver.validate()?;
    let basis = BasisSet::with_resolution(cfg.basis, problem.spec.domain, n)?;
    let disc = Discretization::with_default_quadrature(problem.spec.clone(), basis, cfg.boundary_mode)?;
    let mut warnings = hadgal_core::assembly::exactness_warnings(&problem.spec, disc.basis(), disc.quadrature());
    if cfg.formulation == Formulation::Hadamard {
        warnings.retain(|w| !w.starts_with("classical"));
    }

    let report = match cfg.formulation {
        Formulation::Hadamard => {
            let mut counter = QuadCounter::new();
            let sys = disc.assemble_hadamard(&mut counter)?;
            let mut rep = solve(&sys, None, &cfg.solver)?;
            rep.quad_evals_assembly = counter.evals();
            rep
        }
        Formulation::Classical => {
            let sys = ClassicalReintegration::new(&disc)?;
            solve(&sys, None, &cfg.solver)?
        }
    };

    let (error_l2, error_max) = match (&problem.exact, report.solution.iter().all(|v| v.is_finite())) {
        (Some(exact), true) => {
            let full = disc.expand(&report.solution_vector())?;
            let (l2, max) = error_norms(disc.basis(), &full, exact)?;
            (Some(l2), Some(max))
        }
        _ => (None, None),
    };

    Ok(RunRecord {
        problem: problem.name.to_string(),
        basis: cfg.basis,
        n,
        unknowns: disc.dim(),
        formulation: cfg.formulation,
        solver: cfg.solver.method.as_str().to_string(),
        boundary_mode: cfg.boundary_mode,
        report,
        error_l2,
        error_max,
        observed_order: None,
        warnings,
    })
}

/// Runs every resolution in `n_list` (ascending). Independent runs execute
/// in parallel; records come back in input order with observed L2 orders
/// `log(e_prev / e) / log(n / n_prev)` filled in.
pub fn run_study(problem: &BenchmarkProblem, cfg: &StudyConfig, n_list: &[usize]) -> Result<Vec<RunRecord>> {
    if n_list.is_empty() {
        return Err(BenchError::Usage("empty resolution list".into()));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::Usage("resolutions must be strictly ascending".into()));
    }
    let mut records = n_list
        .par_iter()
        .map(|&n| run_single(problem, cfg, n))
        .collect::<Result<Vec<_>>>()?;
    for i in 1..records.len() {
        let (prev, cur) = (&records[i - 1], &records[i]);
        if let (Some(e0), Some(e1)) = (prev.error_l2, cur.error_l2) {
            if e0 > 0.0 && e1 > 0.0 {
                let ratio = (cur.n as f64 / prev.n as f64).ln();
                records[i].observed_order = Some((e0 / e1).ln() / ratio);
            }
        }
    }
    Ok(records)
}

/// Runs both formulations at resolution `n` with the same solver settings,
/// classical first.
pub fn compare(problem: &BenchmarkProblem, cfg: &StudyConfig, n: usize) -> Result<[RunRecord; 2]> {
    let classical = StudyConfig {
        formulation: Formulation::Classical,
        ..*cfg
    };
    let hadamard = StudyConfig {
        formulation: Formulation::Hadamard,
        ..*cfg
    };
    let (c, h) = rayon::join(|| run_single(problem, &classical, n), || run_single(problem, &hadamard, n));
    Ok([c?, h?])
}
