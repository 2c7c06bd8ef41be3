use super::problem::{BoundaryCondition, BoundaryMode, BoundarySpec};
use crate::algebra::{lu_solve, DenseMatrix, DenseVector};
use crate::discretization::BasisSet;
use crate::error::{shape_err, Error, Result};

/// Affine parametrization `x = T y + s` of the basis coefficients by the
/// free unknowns `y`. The reduced weights are the columns of `T` applied to
/// the basis, so they vanish wherever the Dirichlet constraints act.
#[derive(Debug, Clone)]
pub struct TrialSpace {
    map: DenseMatrix,
    shift: DenseVector,
    constrained: Vec<usize>,
}

impl TrialSpace {
    pub fn full(n: usize) -> Self {
        Self {
            map: DenseMatrix::identity(n),
            shift: DenseVector::zeros(n),
            constrained: Vec::new(),
        }
    }

    pub fn for_mode(basis: &BasisSet, bc: &BoundarySpec, mode: BoundaryMode) -> Result<Self> {
        match mode {
            BoundaryMode::EssentialElimination => Self::essential(basis, bc),
            BoundaryMode::WeakBoundary => Ok(Self::full(basis.len())),
        }
    }

    /// Eliminates one coefficient per Dirichlet end. Pivot columns are chosen
    /// greedily by magnitude (lowest index on ties); for hat bases this picks
    /// exactly the boundary nodes.
    pub fn essential(basis: &BasisSet, bc: &BoundarySpec) -> Result<Self> {
        let n = basis.len();
        let d = basis.domain();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut data = Vec::new();
        for (x, cond) in [(d.a, bc.left), (d.b, bc.right)] {
            if let BoundaryCondition::Dirichlet(value) = cond {
                rows.push((0..n).map(|j| basis.eval(j, x, 0)).collect::<Result<_>>()?);
                data.push(value);
            }
        }
        let k = rows.len();
        if k == 0 {
            return Ok(Self::full(n));
        }
        if n <= k {
            return Err(Error::Parameter(format!(
                "{n} basis functions cannot satisfy {k} Dirichlet conditions and keep a free unknown"
            )));
        }

        let scale = rows.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut work = rows.clone();
        let mut pivots: Vec<usize> = Vec::with_capacity(k);
        for r in 0..k {
            let (col, mag) = (0..n)
                .filter(|c| !pivots.contains(c))
                .map(|c| (c, work[r][c].abs()))
                .fold((usize::MAX, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if mag <= 1e-12 * scale {
                return Err(Error::Parameter(
                    "Dirichlet conditions are not independent on this basis".into(),
                ));
            }
            for r2 in r + 1..k {
                let factor = work[r2][col] / work[r][col];
                for c in 0..n {
                    work[r2][c] -= factor * work[r][c];
                }
            }
            pivots.push(col);
        }

        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let cp = DenseMatrix::from_fn(k, k, |r, c| rows[r][pivots[c]]);
        let g = DenseVector::from(data);
        let mut map = DenseMatrix::zeros(n, free.len());
        let mut shift = DenseVector::zeros(n);
        let sp = lu_solve(&cp, &g)?;
        for (c, &p) in pivots.iter().enumerate() {
            shift[p] = sp[c];
        }
        for (t, &f) in free.iter().enumerate() {
            map[(f, t)] = 1.0;
            let col = DenseVector::from_fn(k, |r| rows[r][f]);
            if col.iter().all(|&v| v == 0.0) {
                continue;
            }
            let sol = lu_solve(&cp, &col)?;
            for (c, &p) in pivots.iter().enumerate() {
                map[(p, t)] = -sol[c];
            }
        }
        let mut constrained = pivots;
        constrained.sort_unstable();
        Ok(Self {
            map,
            shift,
            constrained,
        })
    }

    /// Number of free unknowns.
    pub fn dim(&self) -> usize {
        self.map.cols()
    }

    /// Number of basis coefficients.
    pub fn full_dim(&self) -> usize {
        self.map.rows()
    }

    pub fn map(&self) -> &DenseMatrix {
        &self.map
    }

    pub fn shift(&self) -> &DenseVector {
        &self.shift
    }

    /// Basis indices fixed by the Dirichlet data.
    pub fn constrained(&self) -> &[usize] {
        &self.constrained
    }

    pub fn expand(&self, y: &DenseVector) -> Result<DenseVector> {
        if y.len() != self.dim() {
            return Err(shape_err("expand", format!("{} free unknowns", self.dim()), format!("len {}", y.len())));
        }
        self.map.matvec(y)?.add(&self.shift)
    }

    /// `T^T v`: combine full-space weighted rows into reduced-weight rows.
    pub fn restrict(&self, v: &DenseVector) -> Result<DenseVector> {
        self.map.tr_matvec(v)
    }

    /// `T^T M` for an n-row matrix.
    pub fn restrict_rows(&self, m: &DenseMatrix) -> Result<DenseMatrix> {
        self.map.transpose().matmul(m)
    }

    /// `T^T M T`.
    pub fn reduce(&self, m: &DenseMatrix) -> Result<DenseMatrix> {
        self.restrict_rows(&m.matmul(&self.map)?)
    }
}
