#![allow(dead_code)]

use std::f64::consts::PI;

use hadgal_core::{
    BasisKind, BasisSet, BoundaryMode, BoundarySpec, Discretization, Domain1D, LinearOperatorSpec, ProblemSpec,
};

pub fn unit() -> Domain1D {
    Domain1D::new(0.0, 1.0).unwrap()
}

/// `u u' − ν u'' = f`, exact `sin(πx)`.
pub fn burgers(nu: f64) -> ProblemSpec {
    ProblemSpec::new(
        LinearOperatorSpec::identity(),
        LinearOperatorSpec::constant_term(1.0, 1),
        LinearOperatorSpec::constant_term(-nu, 2),
        move |x| {
            let (s, c) = (PI * x).sin_cos();
            PI * s * c + nu * PI * PI * s
        },
        unit(),
        BoundarySpec::dirichlet(0.0, 0.0),
    )
    .unwrap()
}

/// `u² + u − u'' = f`, exact `x (1 − x)`.
pub fn reaction() -> ProblemSpec {
    ProblemSpec::new(
        LinearOperatorSpec::identity(),
        LinearOperatorSpec::identity(),
        LinearOperatorSpec::identity()
            .plus(&LinearOperatorSpec::constant_term(-1.0, 2))
            .unwrap(),
        |x| {
            let u = x * (1.0 - x);
            u * u + u + 2.0
        },
        unit(),
        BoundarySpec::dirichlet(0.0, 0.0),
    )
    .unwrap()
}

/// `−u'' = 2` with `p = 0`.
pub fn poisson() -> ProblemSpec {
    ProblemSpec::new(
        LinearOperatorSpec::zero(),
        LinearOperatorSpec::identity(),
        LinearOperatorSpec::constant_term(-1.0, 2),
        |_| 2.0,
        unit(),
        BoundarySpec::dirichlet(0.0, 0.0),
    )
    .unwrap()
}

pub fn disc(problem: ProblemSpec, kind: BasisKind, n: usize) -> Discretization {
    disc_mode(problem, kind, n, BoundaryMode::EssentialElimination)
}

pub fn disc_mode(problem: ProblemSpec, kind: BasisKind, n: usize, mode: BoundaryMode) -> Discretization {
    let basis = BasisSet::with_resolution(kind, problem.domain, n).unwrap();
    Discretization::with_default_quadrature(problem, basis, mode).unwrap()
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let scale = a.iter().chain(b).fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}
