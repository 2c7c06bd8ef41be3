//! One-dimensional domains, basis families and Gauss-Legendre quadrature.

mod basis;
mod quadrature;

use serde::{Deserialize, Serialize};

pub use basis::{BasisKind, BasisSet, Cell, MODAL_PANELS};
pub use quadrature::{QuadratureRule, MAX_ORDER};

use crate::error::{Error, Result};

/// The interval `[a, b]`, `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain1D {
    pub a: f64,
    pub b: f64,
}

impl Domain1D {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Parameter(format!("invalid domain [{a}, {b}]")));
        }
        Ok(Self { a, b })
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }
}
