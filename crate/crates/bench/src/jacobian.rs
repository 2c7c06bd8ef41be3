//! Analytic Jacobians against central differences.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hadgal_core::{
    solvers::fd_jacobian, BasisKind, BasisSet, BoundaryMode, DenseVector, Discretization, NonlinearSystem, QuadCounter,
};

use crate::error::Result;
use crate::problems::BenchmarkProblem;
use crate::report::JacobianCheck;

pub const JACOBIAN_REL_TOL: f64 = 1e-6;
pub const FD_REL_STEP: f64 = 1e-6;
pub const MAX_KRONECKER_CHECK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraicForm {
    Hadamard,
    Kronecker,
}

impl AlgebraicForm {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraicForm::Hadamard => "hadamard",
            AlgebraicForm::Kronecker => "kronecker",
        }
    }
}

/// Largest `‖J − J_fd‖∞ / max(1, ‖J‖∞)` over `points` uniform samples from
/// `[-1, 1]^n`.
pub fn max_relative_error<S: NonlinearSystem + ?Sized>(sys: &S, points: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut counter = QuadCounter::new();
    let mut worst = 0.0f64;
    for _ in 0..points {
        let x = DenseVector::from_fn(sys.dim(), |_| rng.gen_range(-1.0..=1.0));
        let jac = sys.jacobian(&x, &mut counter)?;
        let fd = fd_jacobian(sys, &x, FD_REL_STEP, &mut counter)?;
        let diff = jac.sub(&fd)?.max_abs();
        let rel = diff / jac.max_abs().max(1.0);
        // NaN must not compare as "smaller"
        worst = if rel.is_nan() { f64::NAN } else { worst.max(rel) };
        if worst.is_nan() {
            break;
        }
    }
    Ok(worst)
}

pub fn check_problem(
    problem: &BenchmarkProblem,
    basis: BasisKind,
    n: usize,
    form: AlgebraicForm,
    mode: BoundaryMode,
    points: usize,
    seed: u64,
) -> Result<JacobianCheck> {
    let set = BasisSet::with_resolution(basis, problem.spec.domain, n)?;
    let disc = Discretization::with_default_quadrature(problem.spec.clone(), set, mode)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counter = QuadCounter::new();
    let err = match form {
        AlgebraicForm::Hadamard => max_relative_error(&disc.assemble_hadamard(&mut counter)?, points, &mut rng)?,
        AlgebraicForm::Kronecker => max_relative_error(&disc.assemble_kronecker(&mut counter)?, points, &mut rng)?,
    };
    Ok(JacobianCheck {
        problem: problem.name.to_string(),
        basis: basis.as_str().to_string(),
        n,
        form: form.as_str().to_string(),
        points,
        seed,
        max_rel_error: err,
        tolerance: JACOBIAN_REL_TOL,
        passed: err <= JACOBIAN_REL_TOL,
    })
}
