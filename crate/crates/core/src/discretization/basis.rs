use serde::{Deserialize, Serialize};

use super::quadrature::{legendre_with_derivative, QuadratureRule, MAX_ORDER};
use super::Domain1D;
use crate::algebra::DenseVector;
use crate::error::{shape_err, Error, Result};

/// Number of equal panels used to integrate global modal bases.
pub const MODAL_PANELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    /// Piecewise-linear nodal hat functions.
    FeHat,
    /// Global polynomials: constant, linear, then `P_k - P_{k-2}` bubbles.
    ModalPoly,
}

impl BasisKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::FeHat => "fe_hat",
            BasisKind::ModalPoly => "modal_poly",
        }
    }
}

impl std::str::FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fe_hat" => Ok(BasisKind::FeHat),
            "modal_poly" => Ok(BasisKind::ModalPoly),
            other => Err(Error::Parameter(format!("unknown basis kind `{other}`"))),
        }
    }
}

/// An integration cell and the basis functions supported on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub lo: f64,
    pub hi: f64,
    pub active: Vec<usize>,
}

/// A finite set of C0 trial/weight functions on a 1-D domain.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    kind: BasisKind,
    domain: Domain1D,
    n: usize,
    nodes: Vec<f64>,
}

impl BasisSet {
    /// Hat functions on the given mesh; one function per node.
    pub fn fe_hat(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Parameter("a mesh needs at least two nodes".into()));
        }
        if nodes.iter().any(|x| !x.is_finite()) || nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("mesh nodes must be finite and strictly increasing".into()));
        }
        let domain = Domain1D::new(nodes[0], nodes[nodes.len() - 1])?;
        Ok(Self {
            kind: BasisKind::FeHat,
            domain,
            n: nodes.len(),
            nodes,
        })
    }

    /// Uniform mesh with `elements` elements (so `elements + 1` hats).
    pub fn fe_hat_uniform(domain: Domain1D, elements: usize) -> Result<Self> {
        if elements == 0 {
            return Err(Error::Parameter("mesh needs at least one element".into()));
        }
        let h = domain.length() / elements as f64;
        let mut nodes: Vec<f64> = (0..=elements).map(|i| domain.a + i as f64 * h).collect();
        nodes[elements] = domain.b;
        Self::fe_hat(nodes)
    }

    pub fn modal_poly(domain: Domain1D, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("modal basis needs at least one mode".into()));
        }
        Ok(Self {
            kind: BasisKind::ModalPoly,
            domain,
            n,
            nodes: Vec::new(),
        })
    }

    /// Builds a basis of `kind` at resolution `resolution`: element count for
    /// hats, mode count for modal polynomials.
    pub fn with_resolution(kind: BasisKind, domain: Domain1D, resolution: usize) -> Result<Self> {
        match kind {
            BasisKind::FeHat => Self::fe_hat_uniform(domain, resolution),
            BasisKind::ModalPoly => Self::modal_poly(domain, resolution),
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn domain(&self) -> Domain1D {
        self.domain
    }

    /// Number of basis functions.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Polynomial degree of the highest basis function.
    pub fn degree(&self) -> usize {
        match self.kind {
            BasisKind::FeHat => 1,
            BasisKind::ModalPoly => self.n - 1,
        }
    }

    /// Default rule: 3 points per element for hats, `n + 2` per panel for
    /// modal bases.
    pub fn default_quadrature(&self) -> Result<QuadratureRule> {
        match self.kind {
            BasisKind::FeHat => QuadratureRule::gauss(3),
            BasisKind::ModalPoly => QuadratureRule::gauss((self.n + 2).min(MAX_ORDER)),
        }
    }

    pub fn cells(&self) -> Vec<Cell> {
        match self.kind {
            BasisKind::FeHat => self
                .nodes
                .windows(2)
                .enumerate()
                .map(|(e, w)| Cell {
                    lo: w[0],
                    hi: w[1],
                    active: vec![e, e + 1],
                })
                .collect(),
            BasisKind::ModalPoly => {
                let h = self.domain.length() / MODAL_PANELS as f64;
                (0..MODAL_PANELS)
                    .map(|p| Cell {
                        lo: self.domain.a + p as f64 * h,
                        hi: if p + 1 == MODAL_PANELS {
                            self.domain.b
                        } else {
                            self.domain.a + (p + 1) as f64 * h
                        },
                        active: (0..self.n).collect(),
                    })
                    .collect()
            }
        }
    }

    /// Values and first derivatives of the functions active on `cell` at `x`.
    /// `x` is assumed to lie in the cell; no bounds checking.
    pub fn eval_on_cell(&self, cell: &Cell, x: f64, values: &mut Vec<f64>, slopes: &mut Vec<f64>) {
        values.clear();
        slopes.clear();
        match self.kind {
            BasisKind::FeHat => {
                let h = cell.hi - cell.lo;
                values.push((cell.hi - x) / h);
                values.push((x - cell.lo) / h);
                slopes.push(-1.0 / h);
                slopes.push(1.0 / h);
            }
            BasisKind::ModalPoly => {
                for &k in &cell.active {
                    let (v, d) = self.modal(k, x);
                    values.push(v);
                    slopes.push(d);
                }
            }
        }
    }

    fn modal(&self, k: usize, x: f64) -> (f64, f64) {
        let scale = 2.0 / self.domain.length();
        let xi = (2.0 * (x - self.domain.a) / self.domain.length() - 1.0).clamp(-1.0, 1.0);
        match k {
            0 => (1.0, 0.0),
            1 => (xi, scale),
            _ => {
                let (p, dp) = legendre_with_derivative(k, xi);
                let (q, dq) = legendre_with_derivative(k - 2, xi);
                (p - q, (dp - dq) * scale)
            }
        }
    }

    /// Element containing `x`; interface points belong to the element on
    /// their right, the right endpoint to the last element.
    fn element_of(&self, x: f64) -> usize {
        let last = self.nodes.len() - 2;
        match self.nodes.partition_point(|&node| node <= x) {
            0 => 0,
            i => (i - 1).min(last),
        }
    }

    /// Value (`deriv = 0`) or slope (`deriv = 1`) of basis function `j`
    /// (0-based) at `x`. Hat slopes at interior nodes take the right limit.
    pub fn eval(&self, j: usize, x: f64, deriv: usize) -> Result<f64> {
        if j >= self.n {
            return Err(Error::Parameter(format!("basis index {j} out of range 0..{}", self.n)));
        }
        if deriv > 1 {
            return Err(Error::Parameter(format!("derivative order {deriv} not supported")));
        }
        if !self.domain.contains(x) {
            return Err(Error::Domain {
                x,
                a: self.domain.a,
                b: self.domain.b,
            });
        }
        Ok(match self.kind {
            BasisKind::FeHat => {
                let e = self.element_of(x);
                let (lo, hi) = (self.nodes[e], self.nodes[e + 1]);
                let h = hi - lo;
                if j == e {
                    if deriv == 0 { (hi - x) / h } else { -1.0 / h }
                } else if j == e + 1 {
                    if deriv == 0 { (x - lo) / h } else { 1.0 / h }
                } else {
                    0.0
                }
            }
            BasisKind::ModalPoly => {
                let (v, d) = self.modal(j, x);
                if deriv == 0 { v } else { d }
            }
        })
    }

    /// `sum_j coeffs[j] * phi_j^(deriv)(x)`.
    pub fn eval_uhat(&self, coeffs: &DenseVector, x: f64, deriv: usize) -> Result<f64> {
        if coeffs.len() != self.n {
            return Err(shape_err("eval_uhat", format!("{} basis functions", self.n), format!("len {}", coeffs.len())));
        }
        let mut sum = 0.0;
        for (j, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                sum += c * self.eval(j, x, deriv)?;
            }
        }
        Ok(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{DenseMatrix, LuFactors};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn three_node() -> BasisSet {
        BasisSet::fe_hat(vec![0.0, 0.5, 1.0]).unwrap()
    }

    #[test]
    fn hat_examples() {
        let b = three_node();
        assert_eq!(b.eval(1, 0.5, 0).unwrap(), 1.0);
        assert_eq!(b.eval(1, 0.25, 1).unwrap(), 2.0);
        // right-limit tie-break at the interior node
        assert_eq!(b.eval(1, 0.5, 1).unwrap(), -2.0);
        assert_eq!(b.eval(2, 1.0, 1).unwrap(), 2.0);
    }

    #[test]
    fn modal_constant_mode_has_zero_slope() {
        let b = BasisSet::modal_poly(Domain1D::new(0.0, 1.0).unwrap(), 5).unwrap();
        for x in [0.0, 0.3, 1.0] {
            assert_eq!(b.eval(0, x, 1).unwrap(), 0.0);
            assert_eq!(b.eval(0, x, 0).unwrap(), 1.0);
        }
        // bubbles vanish at both ends
        for k in 2..5 {
            assert!(b.eval(k, 0.0, 0).unwrap().abs() < 1e-15);
            assert!(b.eval(k, 1.0, 0).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn modal_slopes_match_finite_differences() {
        let b = BasisSet::modal_poly(Domain1D::new(-1.0, 2.0).unwrap(), 7).unwrap();
        let h = 1e-6;
        for k in 0..7 {
            for x in [-0.5, 0.1, 1.3] {
                let fd = (b.eval(k, x + h, 0).unwrap() - b.eval(k, x - h, 0).unwrap()) / (2.0 * h);
                assert!((fd - b.eval(k, x, 1).unwrap()).abs() < 1e-7, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn out_of_domain_and_bad_index() {
        let b = three_node();
        assert!(matches!(b.eval(0, 1.5, 0), Err(Error::Domain { .. })));
        assert!(matches!(b.eval(3, 0.5, 0), Err(Error::Parameter(_))));
        assert!(b.eval(0, 0.5, 2).is_err());
    }

    #[test]
    fn mesh_validation() {
        assert!(BasisSet::fe_hat(vec![0.0, 0.0, 1.0]).is_err());
        assert!(BasisSet::fe_hat(vec![1.0]).is_err());
        assert!(BasisSet::modal_poly(Domain1D::new(0.0, 1.0).unwrap(), 0).is_err());
    }

    #[test]
    fn uhat_examples() {
        let b = BasisSet::fe_hat(vec![0.0, 0.2, 0.5, 0.9, 1.0]).unwrap();
        let e2 = DenseVector::from_fn(5, |i| if i == 2 { 1.0 } else { 0.0 });
        for x in [0.0, 0.3, 0.5, 0.77, 1.0] {
            assert_eq!(b.eval_uhat(&e2, x, 0).unwrap(), b.eval(2, x, 0).unwrap());
        }
        let linear = DenseVector::from(b.nodes().to_vec());
        for x in [0.0, 0.13, 0.5, 0.95, 1.0] {
            assert!((b.eval_uhat(&linear, x, 0).unwrap() - x).abs() < 1e-15);
            assert!((b.eval_uhat(&linear, x, 1).unwrap() - 1.0).abs() < 1e-13);
        }
        assert_eq!(b.eval_uhat(&DenseVector::zeros(5), 0.4, 0).unwrap(), 0.0);
        assert!(b.eval_uhat(&DenseVector::zeros(4), 0.4, 0).is_err());
    }

    #[test]
    fn hats_partition_unity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut nodes: Vec<f64> = (0..9).map(|_| rng.gen_range(0.0..3.0)).collect();
        nodes.extend([0.0, 3.0]);
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        let b = BasisSet::fe_hat(nodes).unwrap();
        for _ in 0..100 {
            let x = rng.gen_range(0.0..=3.0);
            let s: f64 = (0..b.len()).map(|j| b.eval(j, x, 0).unwrap()).sum();
            assert!((s - 1.0).abs() <= 1e-14, "{s}");
        }
    }

    fn gram(b: &BasisSet) -> DenseMatrix {
        let q = b.default_quadrature().unwrap();
        let n = b.len();
        let mut m = DenseMatrix::zeros(n, n);
        for cell in b.cells() {
            for (x, w) in q.mapped(cell.lo, cell.hi) {
                for &i in &cell.active {
                    for &j in &cell.active {
                        m[(i, j)] += w * b.eval(i, x, 0).unwrap() * b.eval(j, x, 0).unwrap();
                    }
                }
            }
        }
        m
    }

    #[test]
    fn gram_matrices_are_nonsingular() {
        let d = Domain1D::new(0.0, 1.0).unwrap();
        for n in [1, 2, 8, 33, 64] {
            assert!(LuFactors::factor(&gram(&BasisSet::fe_hat_uniform(d, n).unwrap())).is_ok());
        }
        for n in [1, 2, 5, 12, 24] {
            assert!(LuFactors::factor(&gram(&BasisSet::modal_poly(d, n).unwrap())).is_ok(), "modal {n}");
        }
    }
}
