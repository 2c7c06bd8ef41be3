//! Newton and Picard drivers for [`NonlinearSystem`]s.
//!
//! Numerical failures (singular step matrices, non-finite iterates, hitting
//! the iteration cap) end up in the returned [`SolveReport`]; only misuse
//! such as a wrong-length initial guess is an `Err`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algebra::{lu_solve, DenseMatrix, DenseVector};
use crate::assembly::QuadCounter;
use crate::error::{shape_err, Error, Result};
use crate::system::{Freeze, NonlinearSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Method {
    /// Newton with the analytic (row-scaling) Jacobian.
    #[default]
    #[serde(rename = "newton-sjt")]
    NewtonSjt,
    /// Newton with a central finite-difference Jacobian.
    #[serde(rename = "newton-fd")]
    NewtonFd,
    #[serde(rename = "picard")]
    Picard,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::NewtonSjt => "newton-sjt",
            Method::NewtonFd => "newton-fd",
            Method::Picard => "picard",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "newton-sjt" => Ok(Method::NewtonSjt),
            "newton-fd" => Ok(Method::NewtonFd),
            "picard" => Ok(Method::Picard),
            other => Err(Error::Parameter(format!("unknown solver `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    /// Target for the residual infinity norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Step fraction in (0, 1].
    pub damping: f64,
    /// Relative finite-difference step; the actual step is `fd_step (1 + |x_j|)`.
    pub fd_step: f64,
    pub picard_freeze: Freeze,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::NewtonSjt,
            tol: 1e-10,
            max_iter: 200,
            damping: 1.0,
            fd_step: 1e-6,
            picard_freeze: Freeze::FreezeP,
        }
    }
}

impl SolverConfig {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Parameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Parameter("max_iter must be at least 1".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::Parameter(format!("damping must lie in (0, 1], got {}", self.damping)));
        }
        if !(self.fd_step > 0.0) {
            return Err(Error::Parameter(format!("fd_step must be positive, got {}", self.fd_step)));
        }
        Ok(())
    }
}

/// Outcome of one nonlinear solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub converged: bool,
    pub iterates: usize,
    /// Residual norms of the initial guess and every iterate.
    #[serde(with = "nullable_vec")]
    pub residual_history: Vec<f64>,
    pub quad_evals_assembly: u64,
    pub quad_evals_iteration: u64,
    pub wall_time_s: f64,
    #[serde(with = "nullable_vec")]
    pub solution: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    /// Every iterate, starting with the initial guess. Not serialized.
    #[serde(skip)]
    pub trajectory: Vec<DenseVector>,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(f64::NAN)
    }

    pub fn solution_vector(&self) -> DenseVector {
        DenseVector::from(self.solution.clone())
    }
}

/// JSON has no NaN or infinity; those round-trip through `null`.
mod nullable_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| x.is_finite().then_some(*x))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Ok(Vec::<Option<f64>>::deserialize(d)?
            .into_iter()
            .map(|x| x.unwrap_or(f64::NAN))
            .collect())
    }
}

/// Central-difference Jacobian of `sys.residual`.
pub fn fd_jacobian<S: NonlinearSystem + ?Sized>(
    sys: &S,
    x: &DenseVector,
    rel_step: f64,
    counter: &mut QuadCounter,
) -> Result<DenseMatrix> {
    let n = sys.dim();
    let mut jac = DenseMatrix::zeros(n, n);
    let mut probe = x.clone();
    for j in 0..n {
        let h = rel_step * (1.0 + x[j].abs());
        probe[j] = x[j] + h;
        let plus = sys.residual(&probe, counter)?;
        probe[j] = x[j] - h;
        let minus = sys.residual(&probe, counter)?;
        probe[j] = x[j];
        for i in 0..n {
            jac[(i, j)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

struct Run {
    x: DenseVector,
    counter: QuadCounter,
    history: Vec<f64>,
    trajectory: Vec<DenseVector>,
    iterates: usize,
    start: Instant,
}

impl Run {
    fn new<S: NonlinearSystem + ?Sized>(sys: &S, x0: Option<&DenseVector>) -> Result<Self> {
        let x = match x0 {
            Some(x0) if x0.len() != sys.dim() => {
                return Err(shape_err("initial guess", format!("dim {}", sys.dim()), format!("len {}", x0.len())))
            }
            Some(x0) => x0.clone(),
            None => DenseVector::zeros(sys.dim()),
        };
        Ok(Self {
            trajectory: vec![x.clone()],
            x,
            counter: QuadCounter::new(),
            history: Vec::new(),
            iterates: 0,
            start: Instant::now(),
        })
    }

    fn step_to(&mut self, next: DenseVector) {
        self.x = next;
        self.iterates += 1;
        self.trajectory.push(self.x.clone());
    }

    fn finish(self, converged: bool, failure: Option<String>) -> SolveReport {
        SolveReport {
            converged,
            iterates: self.iterates,
            residual_history: self.history,
            quad_evals_assembly: 0,
            quad_evals_iteration: self.counter.evals(),
            wall_time_s: self.start.elapsed().as_secs_f64(),
            solution: self.x.into_vec(),
            failure,
            trajectory: self.trajectory,
        }
    }
}

/// Checks the residual at the current iterate. `Some` ends the run.
fn check_stop(run: &mut Run, r: &DenseVector, cfg: &SolverConfig) -> Option<(bool, Option<String>)> {
    let norm = r.norm_inf();
    run.history.push(norm);
    if !norm.is_finite() || !run.x.is_finite() {
        return Some((false, Some(format!("diverged: non-finite iterate after {} steps", run.iterates))));
    }
    if norm <= cfg.tol {
        return Some((true, None));
    }
    if run.iterates >= cfg.max_iter {
        return Some((false, Some(format!("no convergence within {} iterations", cfg.max_iter))));
    }
    None
}

fn singular_reason(what: &str, err: Error) -> Result<String> {
    match err {
        Error::Singular { pivot } => Ok(format!("singular {what} at pivot {pivot}")),
        other => Err(other),
    }
}

/// Newton-Raphson, `x ← x − damping J(x)⁻¹ r(x)`. The initial guess defaults
/// to zero, which makes the first iterate the solution of the linear part.
pub fn newton_solve<S: NonlinearSystem + ?Sized>(
    sys: &S,
    x0: Option<&DenseVector>,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    cfg.validate()?;
    if cfg.method == Method::Picard {
        return Err(Error::Parameter("newton_solve needs a Newton method".into()));
    }
    let mut run = Run::new(sys, x0)?;
    loop {
        let r = sys.residual(&run.x, &mut run.counter)?;
        if let Some((ok, why)) = check_stop(&mut run, &r, cfg) {
            return Ok(run.finish(ok, why));
        }
        let jac = match cfg.method {
            Method::NewtonFd => fd_jacobian(sys, &run.x, cfg.fd_step, &mut run.counter)?,
            _ => sys.jacobian(&run.x, &mut run.counter)?,
        };
        let dx = match lu_solve(&jac, &r) {
            Ok(dx) => dx,
            Err(e) => {
                let why = singular_reason("Jacobian", e)?;
                return Ok(run.finish(false, Some(why)));
            }
        };
        let next = run.x.sub(&dx.scale(cfg.damping))?;
        run.step_to(next);
    }
}

/// Simple iteration: solve the linear problem with one factor frozen at the
/// current iterate, then relax `x ← (1 − damping) x + damping x_new`.
pub fn picard_solve<S: NonlinearSystem + ?Sized>(
    sys: &S,
    x0: Option<&DenseVector>,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    cfg.validate()?;
    let mut run = Run::new(sys, x0)?;
    loop {
        let r = sys.residual(&run.x, &mut run.counter)?;
        if let Some((ok, why)) = check_stop(&mut run, &r, cfg) {
            return Ok(run.finish(ok, why));
        }
        let (m, rhs) = sys.picard_system(&run.x, cfg.picard_freeze, &mut run.counter)?;
        let solved = match lu_solve(&m, &rhs) {
            Ok(v) => v,
            Err(e) => {
                let why = singular_reason("frozen matrix", e)?;
                return Ok(run.finish(false, Some(why)));
            }
        };
        let next = run.x.scale(1.0 - cfg.damping).add(&solved.scale(cfg.damping))?;
        run.step_to(next);
    }
}

/// Dispatches on `cfg.method`.
pub fn solve<S: NonlinearSystem + ?Sized>(sys: &S, x0: Option<&DenseVector>, cfg: &SolverConfig) -> Result<SolveReport> {
    match cfg.method {
        Method::Picard => picard_solve(sys, x0, cfg),
        _ => newton_solve(sys, x0, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::HadamardSystem;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::from(x.to_vec())
    }

    fn squares(b: &[f64]) -> HadamardSystem {
        let n = b.len();
        HadamardSystem::new(DenseMatrix::identity(n), DenseMatrix::identity(n), DenseMatrix::zeros(n, n), v(b)).unwrap()
    }

    #[test]
    fn newton_on_decoupled_squares() {
        let cfg = SolverConfig { tol: 1e-12, ..SolverConfig::default() };
        let rep = newton_solve(&squares(&[4.0, 9.0]), Some(&v(&[1.0, 1.0])), &cfg).unwrap();
        assert!(rep.converged);
        assert!((rep.solution[0] - 2.0).abs() < 1e-12 && (rep.solution[1] - 3.0).abs() < 1e-12);
        assert_eq!(rep.residual_history.len(), rep.iterates + 1);
        assert_eq!(rep.quad_evals_iteration, 0);
        assert_eq!(rep.trajectory.len(), rep.iterates + 1);
    }

    #[test]
    fn newton_is_exact_on_affine_maps() {
        let d = DenseMatrix::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let sys = HadamardSystem::new(DenseMatrix::zeros(2, 2), DenseMatrix::identity(2), d, v(&[1.0, -2.0])).unwrap();
        let rep = newton_solve(&sys, Some(&v(&[5.0, 5.0])), &SolverConfig::default()).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.iterates, 1);
    }

    #[test]
    fn singular_jacobian_is_reported() {
        // J(0) = D = 0
        let rep = newton_solve(&squares(&[4.0]), None, &SolverConfig::default()).unwrap();
        assert!(!rep.converged);
        assert!(rep.failure.unwrap().contains("singular"));
        assert_eq!(rep.residual_history.len(), 1);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let cfg = SolverConfig { max_iter: 2, tol: 1e-14, ..SolverConfig::default() };
        let rep = newton_solve(&squares(&[4.0, 9.0]), Some(&v(&[1.0, 1.0])), &cfg).unwrap();
        assert!(!rep.converged);
        assert_eq!(rep.iterates, 2);
        assert_eq!(rep.residual_history.len(), 3);
    }

    #[test]
    fn divergence_is_reported() {
        let sys = HadamardSystem::new(
            DenseMatrix::identity(1),
            DenseMatrix::identity(1),
            DenseMatrix::zeros(1, 1),
            v(&[1.0]),
        )
        .unwrap();
        let rep = newton_solve(&sys, Some(&v(&[1e200])), &SolverConfig { max_iter: 5, ..SolverConfig::default() }).unwrap();
        assert!(!rep.converged);
        assert!(rep.failure.unwrap().contains("non-finite"));
    }

    #[test]
    fn fd_newton_matches_analytic() {
        let cfg = SolverConfig { tol: 1e-12, ..SolverConfig::with_method(Method::NewtonFd) };
        let rep = newton_solve(&squares(&[4.0, 9.0]), Some(&v(&[1.0, 1.0])), &cfg).unwrap();
        assert!(rep.converged);
        assert!((rep.solution[1] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn picard_scalar_quadratic() {
        let one = DenseMatrix::identity(1);
        let sys = HadamardSystem::new(one.clone(), one.clone(), one, v(&[2.0])).unwrap();
        let cfg = SolverConfig { tol: 1e-12, ..SolverConfig::with_method(Method::Picard) };
        let rep = picard_solve(&sys, Some(&v(&[0.5])), &cfg).unwrap();
        assert!(rep.converged, "{rep:?}");
        assert!((rep.solution[0] - 1.0).abs() < 1e-11);
    }

    #[test]
    fn picard_zero_load_converges_in_one_step() {
        let d = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let sys = HadamardSystem::new(DenseMatrix::identity(2), DenseMatrix::identity(2), d, v(&[0.0, 0.0])).unwrap();
        let rep = picard_solve(&sys, None, &SolverConfig::with_method(Method::Picard)).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.iterates, 0);
        let rep = picard_solve(&sys, Some(&v(&[0.1, 0.1])), &SolverConfig::with_method(Method::Picard)).unwrap();
        assert!(rep.converged);
    }

    #[test]
    fn config_validation() {
        for bad in [
            SolverConfig { tol: 0.0, ..SolverConfig::default() },
            SolverConfig { max_iter: 0, ..SolverConfig::default() },
            SolverConfig { damping: 1.5, ..SolverConfig::default() },
            SolverConfig { damping: 0.0, ..SolverConfig::default() },
            SolverConfig { fd_step: -1.0, ..SolverConfig::default() },
        ] {
            assert!(bad.validate().is_err());
        }
        assert!(newton_solve(&squares(&[1.0]), Some(&v(&[1.0, 2.0])), &SolverConfig::default()).is_err());
    }

    #[test]
    fn identical_runs_are_bit_identical() {
        let sys = squares(&[4.0, 9.0, 0.5]);
        let a = newton_solve(&sys, Some(&v(&[1.0, 1.0, 1.0])), &SolverConfig::default()).unwrap();
        let b = newton_solve(&sys, Some(&v(&[1.0, 1.0, 1.0])), &SolverConfig::default()).unwrap();
        assert_eq!(a.residual_history, b.residual_history);
        assert_eq!(a.solution, b.solution);
    }
}
