use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared real function of one variable.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Coefficient of one operator term.
#[derive(Clone)]
pub enum Coefficient {
    Constant(f64),
    /// A variable coefficient. Second-order terms need `slope` (the
    /// coefficient's derivative) for the integration by parts.
    Variable {
        value: ScalarFn,
        slope: Option<ScalarFn>,
    },
}

impl Coefficient {
    pub fn variable(value: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Coefficient::Variable {
            value: Arc::new(value),
            slope: None,
        }
    }

    pub fn variable_with_slope(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        slope: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Coefficient::Variable {
            value: Arc::new(value),
            slope: Some(Arc::new(slope)),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Coefficient::Constant(c) => *c,
            Coefficient::Variable { value, .. } => value(x),
        }
    }

    pub fn slope(&self, x: f64) -> Option<f64> {
        match self {
            Coefficient::Constant(_) => Some(0.0),
            Coefficient::Variable { slope, .. } => slope.as_ref().map(|s| s(x)),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Coefficient::Constant(c) => Some(*c),
            Coefficient::Variable { .. } => None,
        }
    }

    fn scaled(&self, alpha: f64) -> Self {
        match self {
            Coefficient::Constant(c) => Coefficient::Constant(alpha * c),
            Coefficient::Variable { value, slope } => {
                let value = value.clone();
                Coefficient::Variable {
                    value: Arc::new(move |x| alpha * value(x)),
                    slope: slope.clone().map(|s| -> ScalarFn { Arc::new(move |x| alpha * s(x)) }),
                }
            }
        }
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Constant(c) => write!(f, "{c}"),
            Coefficient::Variable { slope, .. } => {
                write!(f, "c(x){}", if slope.is_some() { "" } else { " [no slope]" })
            }
        }
    }
}

/// `coeff(x) * d^order u / dx^order`.
#[derive(Clone, Debug)]
pub struct OperatorTerm {
    pub coeff: Coefficient,
    pub order: usize,
}

/// A linear differential operator of order at most two.
#[derive(Clone, Debug, Default)]
pub struct LinearOperatorSpec {
    terms: Vec<OperatorTerm>,
}

impl LinearOperatorSpec {
    pub fn new(terms: Vec<OperatorTerm>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.order > 2) {
            return Err(Error::Parameter(format!("derivative order {} exceeds 2", t.order)));
        }
        let second: Vec<_> = terms.iter().filter(|t| t.order == 2).collect();
        if second.len() > 1 {
            return Err(Error::Parameter("at most one second-order term is allowed".into()));
        }
        if let Some(t) = second.first() {
            if t.coeff.slope(0.0).is_none() {
                return Err(Error::Parameter(
                    "a variable second-order coefficient needs its derivative".into(),
                ));
            }
        }
        Ok(Self { terms })
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::constant_term(1.0, 0)
    }

    /// `c * d^order/dx^order` with constant `c`; `order <= 2`.
    pub fn constant_term(c: f64, order: usize) -> Self {
        assert!(order <= 2, "derivative order {order} exceeds 2");
        Self {
            terms: vec![OperatorTerm {
                coeff: Coefficient::Constant(c),
                order,
            }],
        }
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms
            .iter()
            .all(|t| matches!(t.coeff, Coefficient::Constant(c) if c == 0.0))
    }

    pub fn max_order(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.order).max()
    }

    pub fn second_order(&self) -> Option<&Coefficient> {
        self.terms.iter().find(|t| t.order == 2).map(|t| &t.coeff)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| OperatorTerm {
                    coeff: t.coeff.scaled(alpha),
                    order: t.order,
                })
                .collect(),
        }
    }

    /// Sum of two operators; fails if both carry a second-order term.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        Self::new(self.terms.iter().chain(&other.terms).cloned().collect())
    }

    /// Applies the first-order-and-below terms to a function with value `u`
    /// and slope `du` at `x`. Second-order terms are skipped; assembly
    /// handles them in weak form.
    pub fn apply_low_order(&self, x: f64, u: f64, du: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| match t.order {
                0 => t.coeff.value(x) * u,
                1 => t.coeff.value(x) * du,
                _ => 0.0,
            })
            .sum()
    }

    /// Strong (pointwise) application given up to the second derivative.
    pub fn apply_strong(&self, x: f64, u: f64, du: f64, d2u: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.coeff.value(x)
                    * match t.order {
                        0 => u,
                        1 => du,
                        _ => d2u,
                    }
            })
            .sum()
    }

    /// Weak-form contribution of the second-order term tested against `w`:
    /// `-(c u' w' + c' u' w)`, the volume part of integrating `c u'' w` by parts.
    pub fn weak_second_order(&self, x: f64, du: f64, w: f64, dw: f64) -> f64 {
        match self.second_order() {
            Some(c) => -(c.value(x) * du * dw + c.slope(x).unwrap_or(0.0) * du * w),
            None => 0.0,
        }
    }

    pub(crate) fn polynomial_degree(&self, basis_degree: usize) -> Option<usize> {
        let mut deg = 0;
        for t in &self.terms {
            t.coeff.as_constant()?;
            deg = deg.max(basis_degree.saturating_sub(t.order));
        }
        Some(deg)
    }
}
