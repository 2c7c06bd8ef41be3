//! Built-in problems with manufactured exact solutions.

use std::f64::consts::PI;
use std::fmt;

use hadgal_core::{BoundarySpec, Domain1D, LinearOperatorSpec, ProblemSpec};

use crate::error::{BenchError, Result};

/// Pointwise tolerance of the load-time manufactured-solution check.
pub const MANUFACTURED_TOL: f64 = 1e-10;
const CHECK_POINTS: usize = 50;

pub const DEFAULT_VISCOSITY: f64 = 0.1;

/// An exact solution with its first two derivatives.
#[derive(Clone, Copy)]
pub struct ManufacturedSolution {
    pub u: fn(f64) -> f64,
    pub du: fn(f64) -> f64,
    pub d2u: fn(f64) -> f64,
}

#[derive(Clone)]
pub struct BenchmarkProblem {
    pub name: &'static str,
    pub spec: ProblemSpec,
    pub exact: Option<ManufacturedSolution>,
    pub notes: &'static str,
    /// Picard relaxation used when the caller does not pick one.
    pub picard_damping: f64,
}

impl fmt::Debug for BenchmarkProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BenchmarkProblem")
            .field("name", &self.name)
            .field("spec", &self.spec)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl BenchmarkProblem {
    /// Checks `p(u) q(u) + L(u) = f` for the exact solution at evenly
    /// spaced points.
    pub fn verify_manufactured(&self) -> Result<()> {
        let Some(ex) = self.exact else { return Ok(()) };
        let d = self.spec.domain;
        for k in 0..CHECK_POINTS {
            let x = d.a + d.length() * k as f64 / (CHECK_POINTS - 1) as f64;
            let residual = self.spec.strong_residual(x, (ex.u)(x), (ex.du)(x), (ex.d2u)(x));
            if !(residual.abs() <= MANUFACTURED_TOL) {
                return Err(BenchError::Manufactured {
                    problem: self.name.to_string(),
                    x,
                    residual,
                });
            }
        }
        Ok(())
    }
}

fn unit() -> Domain1D {
    Domain1D::new(0.0, 1.0).expect("unit interval")
}

fn minus_d2(c: f64) -> LinearOperatorSpec {
    LinearOperatorSpec::constant_term(-c, 2)
}

/// Steady Burgers, `u u' − ν u'' = f`, exact `sin(πx)`.
pub fn burgers(nu: f64) -> Result<BenchmarkProblem> {
    let f = move |x: f64| {
        let (s, c) = (PI * x).sin_cos();
        PI * s * c + nu * PI * PI * s
    };
    let spec = ProblemSpec::new(
        LinearOperatorSpec::identity(),
        LinearOperatorSpec::constant_term(1.0, 1),
        minus_d2(nu),
        f,
        unit(),
        BoundarySpec::dirichlet(0.0, 0.0),
    )?;
    Ok(BenchmarkProblem {
        name: "burgers",
        spec,
        exact: Some(ManufacturedSolution {
            u: |x| (PI * x).sin(),
            du: |x| PI * (PI * x).cos(),
            d2u: |x| -PI * PI * (PI * x).sin(),
        }),
        notes: "steady Burgers u u' - nu u'' = f on [0,1], u(0) = u(1) = 0, exact sin(pi x)",
        picard_damping: 1.0,
    })
}

/// Quadratic reaction, `u² + u − u'' = f`, exact `x (1 − x)`.
pub fn reaction() -> Result<BenchmarkProblem> {
    let f = |x: f64| {
        let u = x * (1.0 - x);
        u * u + u + 2.0
    };
    let spec = ProblemSpec::new(
        LinearOperatorSpec::identity(),
        LinearOperatorSpec::identity(),
        LinearOperatorSpec::identity().plus(&minus_d2(1.0))?,
        f,
        unit(),
        BoundarySpec::dirichlet(0.0, 0.0),
    )?;
    Ok(BenchmarkProblem {
        name: "reaction",
        spec,
        exact: Some(ManufacturedSolution {
            u: |x| x * (1.0 - x),
            du: |x| 1.0 - 2.0 * x,
            d2u: |_| -2.0,
        }),
        notes: "quadratic reaction u^2 + u - u'' = f on [0,1], u(0) = u(1) = 0, exact x(1-x)",
        picard_damping: 1.0,
    })
}

/// Linear control case, `−u'' = 2` (`p` is the zero operator).
pub fn poisson() -> Result<BenchmarkProblem> {
    let spec = ProblemSpec::new(
        LinearOperatorSpec::zero(),
        LinearOperatorSpec::identity(),
        minus_d2(1.0),
        |_| 2.0,
        unit(),
        BoundarySpec::dirichlet(0.0, 0.0),
    )?;
    Ok(BenchmarkProblem {
        name: "poisson",
        spec,
        exact: Some(ManufacturedSolution {
            u: |x| x * (1.0 - x),
            du: |x| 1.0 - 2.0 * x,
            d2u: |_| -2.0,
        }),
        notes: "linear control -u'' = 2 on [0,1], u(0) = u(1) = 0, exact x(1-x)",
        picard_damping: 1.0,
    })
}

pub const PROBLEM_NAMES: [&str; 3] = ["burgers", "reaction", "poisson"];

/// All built-in problems, each verified against its manufactured solution.
pub fn builtin_problems() -> Result<Vec<BenchmarkProblem>> {
    let all = vec![burgers(DEFAULT_VISCOSITY)?, reaction()?, poisson()?];
    for p in &all {
        p.verify_manufactured()?;
    }
    Ok(all)
}

pub fn find_problem(name: &str) -> Result<BenchmarkProblem> {
    builtin_problems()?
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| BenchError::UnknownProblem {
            name: name.to_string(),
            available: PROBLEM_NAMES.join(", "),
        })
}
