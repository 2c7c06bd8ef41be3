//! The two algebraic analogues of the weighted-residual equations.
//!
//! * [`HadamardSystem`]: `(A x) ∘ (B x) + D x = b`, where each linear operator
//!   was weighted separately and integrated once.
//! * [`KroneckerSystem`]: `D x + G (x ⊗ x) = b`, the classical weighting of the
//!   whole product.
//!
//! [`Discretization`] builds both from a [`ProblemSpec`] and also evaluates the
//! classical residual by fresh quadrature ([`Discretization::residual_direct`]),
//! the reference path that re-integrates on every call.

use crate::algebra::{kron, sjt_scale, DenseMatrix, DenseVector, HadamardProduct};
use crate::assembly::{
    assemble_kron_g, assemble_load, assemble_weighted, boundary_residual, end_traces, for_each_point,
    neumann_offset, require_pointwise, BoundaryMode, ProblemSpec, QuadCounter, TrialSpace,
};
use crate::discretization::{BasisSet, QuadratureRule};
use crate::error::{shape_err, Error, Result};

/// Which factor a Picard step holds at the previous iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Freeze {
    #[default]
    FreezeP,
    FreezeQ,
}

/// A square nonlinear system `r(x) = 0` the solvers can drive.
///
/// Implementations that integrate on demand tick `counter`; assembled
/// algebraic forms leave it untouched.
pub trait NonlinearSystem {
    fn dim(&self) -> usize;

    fn residual(&self, x: &DenseVector, counter: &mut QuadCounter) -> Result<DenseVector>;

    fn jacobian(&self, x: &DenseVector, counter: &mut QuadCounter) -> Result<DenseMatrix>;

    /// Matrix and right-hand side of the linear problem obtained by freezing
    /// one nonlinear factor at `x`.
    fn picard_system(
        &self,
        x: &DenseVector,
        freeze: Freeze,
        counter: &mut QuadCounter,
    ) -> Result<(DenseMatrix, DenseVector)>;
}

fn check_len(op: &'static str, n: usize, x: &DenseVector) -> Result<()> {
    if x.len() != n {
        return Err(shape_err(op, format!("dim {n}"), format!("len {}", x.len())));
    }
    Ok(())
}

fn check_finite_matrix(m: &DenseMatrix) -> Result<()> {
    match m.as_slice().iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HadamardSystem {
    a: DenseMatrix,
    b: DenseMatrix,
    d: DenseMatrix,
    rhs: DenseVector,
}

impl HadamardSystem {
    pub fn new(a: DenseMatrix, b: DenseMatrix, d: DenseMatrix, rhs: DenseVector) -> Result<Self> {
        let n = rhs.len();
        for (name, m) in [("A", &a), ("B", &b), ("D", &d)] {
            if m.shape() != (n, n) {
                return Err(shape_err("HadamardSystem", format!("{name} {}", m.shape_str()), format!("{n}x{n}")));
            }
            check_finite_matrix(m)?;
        }
        DenseVector::new(rhs.as_slice().to_vec())?;
        Ok(Self { a, b, d, rhs })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &DenseMatrix {
        &self.b
    }

    pub fn d(&self) -> &DenseMatrix {
        &self.d
    }

    pub fn rhs(&self) -> &DenseVector {
        &self.rhs
    }

    /// `(A x) ∘ (B x) + D x − b`.
    pub fn residual(&self, x: &DenseVector) -> Result<DenseVector> {
        check_len("residual_hadamard", self.rhs.len(), x)?;
        self.a
            .matvec(x)?
            .hadamard(&self.b.matvec(x)?)?
            .add(&self.d.matvec(x)?)?
            .sub(&self.rhs)
    }

    /// `diag(B x) A + diag(A x) B + D`, the exact derivative of [`Self::residual`].
    pub fn jacobian(&self, x: &DenseVector) -> Result<DenseMatrix> {
        check_len("jacobian_hadamard", self.rhs.len(), x)?;
        let ax = self.a.matvec(x)?;
        let bx = self.b.matvec(x)?;
        sjt_scale(&self.a, &bx)?.add(&sjt_scale(&self.b, &ax)?)?.add(&self.d)
    }

    /// Freeze P: `[diag(A x) B + D] y = b`; freeze Q: `[diag(B x) A + D] y = b`.
    pub fn picard_matrix(&self, x: &DenseVector, freeze: Freeze) -> Result<DenseMatrix> {
        check_len("picard_hadamard", self.rhs.len(), x)?;
        let frozen = match freeze {
            Freeze::FreezeP => sjt_scale(&self.b, &self.a.matvec(x)?)?,
            Freeze::FreezeQ => sjt_scale(&self.a, &self.b.matvec(x)?)?,
        };
        frozen.add(&self.d)
    }
}

impl NonlinearSystem for HadamardSystem {
    fn dim(&self) -> usize {
        self.rhs.len()
    }

    fn residual(&self, x: &DenseVector, _: &mut QuadCounter) -> Result<DenseVector> {
        HadamardSystem::residual(self, x)
    }

    fn jacobian(&self, x: &DenseVector, _: &mut QuadCounter) -> Result<DenseMatrix> {
        HadamardSystem::jacobian(self, x)
    }

    fn picard_system(&self, x: &DenseVector, freeze: Freeze, _: &mut QuadCounter) -> Result<(DenseMatrix, DenseVector)> {
        Ok((self.picard_matrix(x, freeze)?, self.rhs.clone()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KroneckerSystem {
    d: DenseMatrix,
    g: DenseMatrix,
    rhs: DenseVector,
}

impl KroneckerSystem {
    pub fn new(d: DenseMatrix, g: DenseMatrix, rhs: DenseVector) -> Result<Self> {
        let n = rhs.len();
        if d.shape() != (n, n) {
            return Err(shape_err("KroneckerSystem", format!("D {}", d.shape_str()), format!("{n}x{n}")));
        }
        if g.shape() != (n, n * n) {
            return Err(shape_err("KroneckerSystem", format!("G {}", g.shape_str()), format!("{n}x{}", n * n)));
        }
        check_finite_matrix(&d)?;
        check_finite_matrix(&g)?;
        DenseVector::new(rhs.as_slice().to_vec())?;
        Ok(Self { d, g, rhs })
    }

    pub fn d(&self) -> &DenseMatrix {
        &self.d
    }

    pub fn g(&self) -> &DenseMatrix {
        &self.g
    }

    pub fn rhs(&self) -> &DenseVector {
        &self.rhs
    }

    /// `D x + G (x ⊗ x) − b`.
    pub fn residual(&self, x: &DenseVector) -> Result<DenseVector> {
        check_len("residual_kron", self.rhs.len(), x)?;
        self.d
            .matvec(x)?
            .add(&self.g.matvec(&kron(x, x)?)?)?
            .sub(&self.rhs)
    }

    /// `G (x ⊗ ·)`: the matrix `M[j, k] = Σ_i G[j, i n + k] x_i`.
    fn contract_first(&self, x: &DenseVector) -> DenseMatrix {
        let n = self.rhs.len();
        let mut m = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let row = self.g.row(j);
            let out = m.row_mut(j);
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0.0 {
                    continue;
                }
                for (o, &gv) in out.iter_mut().zip(&row[i * n..(i + 1) * n]) {
                    *o += gv * xi;
                }
            }
        }
        m
    }

    /// `G (· ⊗ x)`: the matrix `M[j, i] = Σ_k G[j, i n + k] x_k`.
    fn contract_second(&self, x: &DenseVector) -> DenseMatrix {
        let n = self.rhs.len();
        DenseMatrix::from_fn(n, n, |j, i| {
            self.g.row(j)[i * n..(i + 1) * n]
                .iter()
                .zip(x.iter())
                .map(|(g, xk)| g * xk)
                .sum()
        })
    }

    /// `D + G (I ⊗ x + x ⊗ I)`.
    pub fn jacobian(&self, x: &DenseVector) -> Result<DenseMatrix> {
        check_len("jacobian_kron", self.rhs.len(), x)?;
        self.d.add(&self.contract_first(x))?.add(&self.contract_second(x))
    }
}

impl NonlinearSystem for KroneckerSystem {
    fn dim(&self) -> usize {
        self.rhs.len()
    }

    fn residual(&self, x: &DenseVector, _: &mut QuadCounter) -> Result<DenseVector> {
        KroneckerSystem::residual(self, x)
    }

    fn jacobian(&self, x: &DenseVector, _: &mut QuadCounter) -> Result<DenseMatrix> {
        KroneckerSystem::jacobian(self, x)
    }

    fn picard_system(&self, x: &DenseVector, freeze: Freeze, _: &mut QuadCounter) -> Result<(DenseMatrix, DenseVector)> {
        check_len("picard_kron", self.rhs.len(), x)?;
        let frozen = match freeze {
            Freeze::FreezeP => self.contract_first(x),
            Freeze::FreezeQ => self.contract_second(x),
        };
        Ok((frozen.add(&self.d)?, self.rhs.clone()))
    }
}

/// A problem bound to a basis, quadrature rule and boundary treatment.
#[derive(Debug, Clone)]
pub struct Discretization {
    problem: ProblemSpec,
    basis: BasisSet,
    quad: QuadratureRule,
    mode: BoundaryMode,
    trial: TrialSpace,
}

impl Discretization {
    pub fn new(problem: ProblemSpec, basis: BasisSet, quad: QuadratureRule, mode: BoundaryMode) -> Result<Self> {
        if basis.domain() != problem.domain {
            return Err(Error::Parameter("basis domain differs from problem domain".into()));
        }
        let trial = TrialSpace::for_mode(&basis, &problem.bc, mode)?;
        Ok(Self {
            problem,
            basis,
            quad,
            mode,
            trial,
        })
    }

    /// Uses the basis' default quadrature rule.
    pub fn with_default_quadrature(problem: ProblemSpec, basis: BasisSet, mode: BoundaryMode) -> Result<Self> {
        let quad = basis.default_quadrature()?;
        Self::new(problem, basis, quad, mode)
    }

    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    pub fn basis(&self) -> &BasisSet {
        &self.basis
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quad
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn trial(&self) -> &TrialSpace {
        &self.trial
    }

    /// Number of unknowns in the algebraic systems.
    pub fn dim(&self) -> usize {
        self.trial.dim()
    }

    /// Full basis coefficients for the unknowns `y`.
    pub fn expand(&self, y: &DenseVector) -> Result<DenseVector> {
        self.trial.expand(y)
    }

    /// Linear part and load in the full space: `D` (with weak-mode boundary
    /// residual matrix) and `b`.
    fn linear_part(&self, counter: &mut QuadCounter) -> Result<(DenseMatrix, DenseVector)> {
        let pb = &self.problem;
        let (e_mat, e_vec) = boundary_residual(&self.basis, &pb.bc, self.mode)?;
        let d = assemble_weighted(&pb.l, &self.basis, &self.quad, self.mode, counter)?.add(&e_mat)?;
        let b = assemble_load(pb.f.as_ref(), &pb.l, &self.basis, &self.quad, &pb.bc, self.mode, counter)?.add(&e_vec)?;
        Ok((d, b))
    }

    /// `T^T (b − D s)`.
    fn reduced_load(&self, d: &DenseMatrix, b: &DenseVector) -> Result<DenseVector> {
        self.trial.restrict(&b.sub(&d.matvec(self.trial.shift())?)?)
    }

    /// Integrates `p`, `q` and `L` against the weights once and returns the
    /// Hadamard-form system in the free unknowns.
    pub fn assemble_hadamard(&self, counter: &mut QuadCounter) -> Result<HadamardSystem> {
        let pb = &self.problem;
        let t = &self.trial;
        let s = t.shift();
        let a_full = assemble_weighted(&pb.p, &self.basis, &self.quad, self.mode, counter)?;
        let b_full = assemble_weighted(&pb.q, &self.basis, &self.quad, self.mode, counter)?;
        let (d_full, load) = self.linear_part(counter)?;

        let alpha = neumann_offset(&pb.p, &self.basis, &pb.bc, self.mode)?;
        let beta = neumann_offset(&pb.q, &self.basis, &pb.bc, self.mode)?;
        let a = t.reduce(&a_full)?;
        let b = t.reduce(&b_full)?;
        // affine parts of the two weighted factors: (A y + sa) ∘ (B y + sb)
        let sa = t.restrict(&a_full.matvec(s)?.add(&alpha)?)?;
        let sb = t.restrict(&b_full.matvec(s)?.add(&beta)?)?;
        let d = t
            .reduce(&d_full)?
            .add(&sjt_scale(&a, &sb)?)?
            .add(&sjt_scale(&b, &sa)?)?;
        let rhs = self.reduced_load(&d_full, &load)?.sub(&sa.hadamard(&sb)?)?;
        HadamardSystem::new(a, b, d, rhs)
    }

    /// Integrates `L` and the product tensor `G` once and returns the
    /// classical system in the free unknowns.
    pub fn assemble_kronecker(&self, counter: &mut QuadCounter) -> Result<KroneckerSystem> {
        let pb = &self.problem;
        let g_full = assemble_kron_g(&pb.p, &pb.q, &self.basis, &self.quad, counter)?;
        let (d_full, load) = self.linear_part(counter)?;
        let t = self.trial.map();
        let s = self.trial.shift();
        let (n, m) = t.shape();

        // G (T y + s) ⊗ (T y + s) = G (T⊗T)(y⊗y) + G[(T⊗s) + (s⊗T)] y + G (s⊗s)
        let mut g_ts = DenseMatrix::zeros(n, m * m);
        let mut cross = DenseMatrix::zeros(n, m);
        let mut constant = DenseVector::zeros(n);
        let mut inner = vec![0.0; n * m];
        for j in 0..n {
            let row = g_full.row(j);
            // inner[i1, k2] = Σ_i2 G[j, i1, i2] T[i2, k2]
            inner.iter_mut().for_each(|v| *v = 0.0);
            for i1 in 0..n {
                for i2 in 0..n {
                    let gv = row[i1 * n + i2];
                    if gv == 0.0 {
                        continue;
                    }
                    for k2 in 0..m {
                        inner[i1 * m + k2] += gv * t[(i2, k2)];
                    }
                    constant[j] += gv * s[i1] * s[i2];
                    for k in 0..m {
                        cross[(j, k)] += gv * (t[(i1, k)] * s[i2] + s[i1] * t[(i2, k)]);
                    }
                }
            }
            let out = g_ts.row_mut(j);
            for i1 in 0..n {
                for k1 in 0..m {
                    let tv = t[(i1, k1)];
                    if tv == 0.0 {
                        continue;
                    }
                    for k2 in 0..m {
                        out[k1 * m + k2] += tv * inner[i1 * m + k2];
                    }
                }
            }
        }
        let g = self.trial.restrict_rows(&g_ts)?;
        let d = self.trial.reduce(&d_full)?.add(&self.trial.restrict_rows(&cross)?)?;
        let rhs = self.trial.restrict(&load.sub(&d_full.matvec(s)?)?.sub(&constant)?)?;
        KroneckerSystem::new(d, g, rhs)
    }

    /// Boundary contributions to the full-space residual that are evaluated
    /// pointwise (no quadrature): the flux bracket and weak-mode residuals.
    fn boundary_terms(&self, x: &DenseVector, out: &mut DenseVector) -> Result<()> {
        let pb = &self.problem;
        match self.mode {
            BoundaryMode::EssentialElimination => {
                let off = neumann_offset(&pb.l, &self.basis, &pb.bc, self.mode)?;
                *out = out.add(&off)?;
            }
            BoundaryMode::WeakBoundary => {
                if let Some(c) = pb.l.second_order() {
                    for end in end_traces(&self.basis, &pb.bc)? {
                        let dudn: f64 = x.iter().zip(&end.normal_slopes).map(|(a, b)| a * b).sum();
                        let flux = c.value(end.x) * dudn;
                        for j in 0..x.len() {
                            out[j] += flux * end.values[j];
                        }
                    }
                }
                let (e_mat, e_vec) = boundary_residual(&self.basis, &pb.bc, self.mode)?;
                *out = out.add(&e_mat.matvec(x)?)?.sub(&e_vec)?;
            }
        }
        Ok(())
    }

    fn boundary_matrix(&self) -> Result<DenseMatrix> {
        let n = self.basis.len();
        let pb = &self.problem;
        let mut m = DenseMatrix::zeros(n, n);
        if self.mode == BoundaryMode::WeakBoundary {
            if let Some(c) = pb.l.second_order() {
                for end in end_traces(&self.basis, &pb.bc)? {
                    let ce = c.value(end.x);
                    for j in 0..n {
                        for i in 0..n {
                            m[(j, i)] += ce * end.normal_slopes[i] * end.values[j];
                        }
                    }
                }
            }
            m = m.add(&boundary_residual(&self.basis, &pb.bc, self.mode)?.0)?;
        }
        Ok(m)
    }

    fn require_classical(&self) -> Result<()> {
        require_pointwise(&self.problem.p, "p")?;
        require_pointwise(&self.problem.q, "q")
    }

    /// Classical weighted residual `∫ [p(û) q(û) + L(û) − f] w_k`, integrated
    /// afresh on every call.
    pub fn residual_direct(&self, y: &DenseVector, counter: &mut QuadCounter) -> Result<DenseVector> {
        self.require_classical()?;
        let x = self.trial.expand(y)?;
        let pb = &self.problem;
        let ticks = (pb.p.term_count() * pb.q.term_count() + pb.l.term_count() + 1) as u64;
        let mut r = DenseVector::zeros(x.len());
        for_each_point(&self.basis, &self.quad, |cell, t, w, vals, slopes| {
            let (mut u, mut du) = (0.0, 0.0);
            for (l, &i) in cell.active.iter().enumerate() {
                u += x[i] * vals[l];
                du += x[i] * slopes[l];
            }
            let pq = pb.p.apply_low_order(t, u, du) * pb.q.apply_low_order(t, u, du);
            let strong = pq + pb.l.apply_low_order(t, u, du) - (pb.f)(t);
            for (lj, &j) in cell.active.iter().enumerate() {
                counter.tick(ticks);
                r[j] += w * (strong * vals[lj] + pb.l.weak_second_order(t, du, vals[lj], slopes[lj]));
            }
            Ok(())
        })?;
        self.boundary_terms(&x, &mut r)?;
        self.trial.restrict(&r)
    }

    /// Tangent of [`Self::residual_direct`], re-integrated on every call.
    pub fn jacobian_direct(&self, y: &DenseVector, counter: &mut QuadCounter) -> Result<DenseMatrix> {
        self.require_classical()?;
        let x = self.trial.expand(y)?;
        let pb = &self.problem;
        let n = x.len();
        let ticks = (2 * pb.p.term_count() * pb.q.term_count() + pb.l.term_count()) as u64;
        let mut jac = DenseMatrix::zeros(n, n);
        for_each_point(&self.basis, &self.quad, |cell, t, w, vals, slopes| {
            let (mut u, mut du) = (0.0, 0.0);
            for (l, &i) in cell.active.iter().enumerate() {
                u += x[i] * vals[l];
                du += x[i] * slopes[l];
            }
            let pu = pb.p.apply_low_order(t, u, du);
            let qu = pb.q.apply_low_order(t, u, du);
            for (lj, &j) in cell.active.iter().enumerate() {
                counter.tick(ticks);
                for (li, &i) in cell.active.iter().enumerate() {
                    let pi = pb.p.apply_low_order(t, vals[li], slopes[li]);
                    let qi = pb.q.apply_low_order(t, vals[li], slopes[li]);
                    let li_val = pb.l.apply_low_order(t, vals[li], slopes[li]);
                    jac[(j, i)] += w * ((pi * qu + pu * qi + li_val) * vals[lj]
                        + pb.l.weak_second_order(t, slopes[li], vals[lj], slopes[lj]));
                }
            }
            Ok(())
        })?;
        let jac = jac.add(&self.boundary_matrix()?)?;
        self.trial.reduce(&jac)
    }

    /// Linear problem of a Picard step on the classical form, re-integrated:
    /// `∫ [p(û_k) q(û) + L(û)] w = ∫ f w` (freeze P) and symmetrically for Q.
    pub fn picard_direct(&self, y: &DenseVector, freeze: Freeze, counter: &mut QuadCounter) -> Result<(DenseMatrix, DenseVector)> {
        self.require_classical()?;
        let x = self.trial.expand(y)?;
        let pb = &self.problem;
        let n = x.len();
        let ticks = (pb.p.term_count() * pb.q.term_count() + pb.l.term_count() + 1) as u64;
        let mut m = DenseMatrix::zeros(n, n);
        let mut load = DenseVector::zeros(n);
        for_each_point(&self.basis, &self.quad, |cell, t, w, vals, slopes| {
            let (mut u, mut du) = (0.0, 0.0);
            for (l, &i) in cell.active.iter().enumerate() {
                u += x[i] * vals[l];
                du += x[i] * slopes[l];
            }
            let (frozen_op, frozen_val) = match freeze {
                Freeze::FreezeP => (&pb.q, pb.p.apply_low_order(t, u, du)),
                Freeze::FreezeQ => (&pb.p, pb.q.apply_low_order(t, u, du)),
            };
            let ft = (pb.f)(t);
            for (lj, &j) in cell.active.iter().enumerate() {
                counter.tick(ticks);
                load[j] += w * ft * vals[lj];
                for (li, &i) in cell.active.iter().enumerate() {
                    let nonlinear = frozen_val * frozen_op.apply_low_order(t, vals[li], slopes[li]);
                    let linear = pb.l.apply_low_order(t, vals[li], slopes[li]);
                    m[(j, i)] += w * ((nonlinear + linear) * vals[lj]
                        + pb.l.weak_second_order(t, slopes[li], vals[lj], slopes[lj]));
                }
            }
            Ok(())
        })?;
        let m = m.add(&self.boundary_matrix()?)?;
        let (_, e_vec) = boundary_residual(&self.basis, &pb.bc, self.mode)?;
        let load = load
            .sub(&neumann_offset(&pb.l, &self.basis, &pb.bc, self.mode)?)?
            .add(&e_vec)?;
        let rhs = self.trial.restrict(&load.sub(&m.matvec(self.trial.shift())?)?)?;
        Ok((self.trial.reduce(&m)?, rhs))
    }

    /// Quadrature ticks of one [`Self::residual_direct`] call.
    pub fn residual_direct_cost(&self) -> u64 {
        let pb = &self.problem;
        self.weight_point_pairs() * (pb.p.term_count() * pb.q.term_count() + pb.l.term_count() + 1) as u64
    }

    /// Quadrature ticks of one [`Self::jacobian_direct`] call.
    pub fn jacobian_direct_cost(&self) -> u64 {
        let pb = &self.problem;
        self.weight_point_pairs() * (2 * pb.p.term_count() * pb.q.term_count() + pb.l.term_count()) as u64
    }

    /// Quadrature ticks of [`Self::assemble_hadamard`].
    pub fn hadamard_assembly_cost(&self) -> u64 {
        let pb = &self.problem;
        self.weight_point_pairs() * (pb.p.term_count() + pb.q.term_count() + pb.l.term_count() + 1) as u64
    }

    /// Quadrature ticks of [`Self::assemble_kronecker`].
    pub fn kronecker_assembly_cost(&self) -> u64 {
        let pb = &self.problem;
        self.weight_point_pairs() * (pb.p.term_count() * pb.q.term_count() + pb.l.term_count() + 1) as u64
    }

    /// Σ over cells of (quadrature points × active weights).
    fn weight_point_pairs(&self) -> u64 {
        self.basis
            .cells()
            .iter()
            .map(|c| (c.active.len() * self.quad.order()) as u64)
            .sum()
    }
}

/// The classical formulation solved the traditional way: residual and
/// tangent are re-integrated on every evaluation.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalReintegration<'a> {
    disc: &'a Discretization,
}

impl<'a> ClassicalReintegration<'a> {
    pub fn new(disc: &'a Discretization) -> Result<Self> {
        disc.require_classical()?;
        Ok(Self { disc })
    }
}

impl NonlinearSystem for ClassicalReintegration<'_> {
    fn dim(&self) -> usize {
        self.disc.dim()
    }

    fn residual(&self, x: &DenseVector, counter: &mut QuadCounter) -> Result<DenseVector> {
        self.disc.residual_direct(x, counter)
    }

    fn jacobian(&self, x: &DenseVector, counter: &mut QuadCounter) -> Result<DenseMatrix> {
        self.disc.jacobian_direct(x, counter)
    }

    fn picard_system(&self, x: &DenseVector, freeze: Freeze, counter: &mut QuadCounter) -> Result<(DenseMatrix, DenseVector)> {
        self.disc.picard_direct(x, freeze, counter)
    }
}
