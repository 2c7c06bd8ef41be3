use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::operator::{LinearOperatorSpec, ScalarFn};
use crate::discretization::Domain1D;
use crate::error::{Error, Result};

/// Boundary datum at one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// `u = value`.
    Dirichlet(f64),
    /// Outward normal derivative `du/dn = value`.
    Neumann(f64),
}

impl BoundaryCondition {
    pub fn is_dirichlet(&self) -> bool {
        matches!(self, BoundaryCondition::Dirichlet(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
}

impl BoundarySpec {
    pub fn dirichlet(left: f64, right: f64) -> Self {
        Self {
            left: BoundaryCondition::Dirichlet(left),
            right: BoundaryCondition::Dirichlet(right),
        }
    }

    pub fn neumann(left: f64, right: f64) -> Self {
        Self {
            left: BoundaryCondition::Neumann(left),
            right: BoundaryCondition::Neumann(right),
        }
    }

    pub fn has_dirichlet(&self) -> bool {
        self.left.is_dirichlet() || self.right.is_dirichlet()
    }
}

/// How essential (Dirichlet) conditions enter the discrete system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMode {
    /// Dirichlet values are built into the trial space and the weights
    /// vanish on the Dirichlet boundary.
    #[default]
    #[serde(rename = "eliminate")]
    EssentialElimination,
    /// All basis coefficients stay unknown; the boundary residual terms are
    /// added to every weighted equation.
    #[serde(rename = "weak")]
    WeakBoundary,
}

impl std::str::FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eliminate" => Ok(BoundaryMode::EssentialElimination),
            "weak" => Ok(BoundaryMode::WeakBoundary),
            other => Err(Error::Parameter(format!("unknown boundary mode `{other}`"))),
        }
    }
}

impl BoundaryMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryMode::EssentialElimination => "eliminate",
            BoundaryMode::WeakBoundary => "weak",
        }
    }
}

/// `p(u) q(u) + L(u) = f` on a domain with boundary data.
#[derive(Clone)]
pub struct ProblemSpec {
    pub p: LinearOperatorSpec,
    pub q: LinearOperatorSpec,
    pub l: LinearOperatorSpec,
    pub f: ScalarFn,
    pub domain: Domain1D,
    pub bc: BoundarySpec,
}

impl ProblemSpec {
    pub fn new(
        p: LinearOperatorSpec,
        q: LinearOperatorSpec,
        l: LinearOperatorSpec,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain: Domain1D,
        bc: BoundarySpec,
    ) -> Result<Self> {
        if l.second_order().is_some() && !bc.has_dirichlet() {
            return Err(Error::Parameter(
                "a second-order linear part needs at least one Dirichlet end".into(),
            ));
        }
        Ok(Self {
            p,
            q,
            l,
            f: Arc::new(f),
            domain,
            bc,
        })
    }

    /// Pointwise residual `p(u) q(u) + L(u) - f` for a smooth `u`.
    pub fn strong_residual(&self, x: f64, u: f64, du: f64, d2u: f64) -> f64 {
        self.p.apply_strong(x, u, du, d2u) * self.q.apply_strong(x, u, du, d2u)
            + self.l.apply_strong(x, u, du, d2u)
            - (self.f)(x)
    }
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("p", &self.p)
            .field("q", &self.q)
            .field("l", &self.l)
            .field("domain", &self.domain)
            .field("bc", &self.bc)
            .finish_non_exhaustive()
    }
}
