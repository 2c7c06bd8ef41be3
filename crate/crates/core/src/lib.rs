//! Galerkin and finite-element discretization of quadratic nonlinear
//! operators `p(u) q(u) + L(u) = f` in one dimension.
//!
//! Two algebraic forms are produced from the same weighted integrals:
//!
//! * the Hadamard form `(A x) ∘ (B x) + D x = b`, where `p`, `q` and `L` are
//!   weighted separately and integrated exactly once, and whose Jacobian
//!   `diag(B x) A + diag(A x) B + D` needs no further quadrature;
//! * the classical Kronecker form `D x + G (x ⊗ x) = b`, which weights the
//!   product `p(u) q(u)` as a whole.
//!
//! Every integrand evaluation is counted by a [`assembly::QuadCounter`], so
//! the integration cost of each path can be compared directly.

pub mod algebra;
pub mod assembly;
pub mod discretization;
pub mod error;
pub mod solvers;
pub mod system;

pub use algebra::{hadamard, kron, lu_solve, sjt_scale, DenseMatrix, DenseVector, HadamardProduct, LuFactors};
pub use assembly::{
    BoundaryCondition, BoundaryMode, BoundarySpec, Coefficient, LinearOperatorSpec, OperatorTerm, ProblemSpec,
    QuadCounter, TrialSpace,
};
pub use discretization::{BasisKind, BasisSet, Domain1D, QuadratureRule};
pub use error::{Error, Result};
pub use solvers::{newton_solve, picard_solve, solve, Method, SolveReport, SolverConfig};
pub use system::{ClassicalReintegration, Discretization, Freeze, HadamardSystem, KroneckerSystem, NonlinearSystem};
