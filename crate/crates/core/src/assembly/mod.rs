//! Galerkin weighted integrals of linear operators, the load vector, the
//! classical product tensor `G`, and the boundary terms of the weak form.
//!
//! Every routine here works in the full coefficient space (weights are the
//! basis functions themselves); [`TrialSpace`] folds Dirichlet data in
//! afterwards. Second-order terms are integrated by parts once:
//!
//! ```text
//! ∫ c u'' w = [c (du/dn) w]_Γ − ∫ (c u' w' + c' u' w)
//! ```
//!
//! The boundary bracket is handled per [`BoundaryMode`]: with elimination the
//! weights vanish on Dirichlet ends and Neumann data replaces `du/dn`; in weak
//! mode the bracket stays in the matrix and the printed boundary residuals
//! `−∫_Γ2 (q − q̄) w + ∫_Γ1 (u − ū) ∂w/∂n` are added by
//! [`boundary_residual`].

mod counter;
mod operator;
mod problem;
mod trial;

pub use counter::QuadCounter;
pub use operator::{Coefficient, LinearOperatorSpec, OperatorTerm, ScalarFn};
pub use problem::{BoundaryCondition, BoundaryMode, BoundarySpec, ProblemSpec};
pub use trial::TrialSpace;

use crate::algebra::{DenseMatrix, DenseVector};
use crate::discretization::{BasisSet, Cell, QuadratureRule};
use crate::error::{Error, Result};

/// Hard limit on basis size for the dense `n x n²` tensor.
pub const MAX_KRONECKER_BASIS: usize = 256;

/// Values and outward normal slopes of every basis function at one endpoint.
#[derive(Debug, Clone)]
pub(crate) struct EndTrace {
    pub x: f64,
    pub cond: BoundaryCondition,
    pub values: Vec<f64>,
    pub normal_slopes: Vec<f64>,
}

pub(crate) fn end_traces(basis: &BasisSet, bc: &BoundarySpec) -> Result<[EndTrace; 2]> {
    let d = basis.domain();
    let trace = |x: f64, normal: f64, cond| -> Result<EndTrace> {
        let n = basis.len();
        Ok(EndTrace {
            x,
            cond,
            values: (0..n).map(|j| basis.eval(j, x, 0)).collect::<Result<_>>()?,
            normal_slopes: (0..n)
                .map(|j| basis.eval(j, x, 1).map(|s| normal * s))
                .collect::<Result<_>>()?,
        })
    };
    Ok([trace(d.a, -1.0, bc.left)?, trace(d.b, 1.0, bc.right)?])
}

/// Runs `visit(cell, w, values, slopes)` at every quadrature point.
pub(crate) fn for_each_point(
    basis: &BasisSet,
    quad: &QuadratureRule,
    mut visit: impl FnMut(&Cell, f64, f64, &[f64], &[f64]) -> Result<()>,
) -> Result<()> {
    let mut values = Vec::new();
    let mut slopes = Vec::new();
    for cell in basis.cells() {
        for (x, w) in quad.mapped(cell.lo, cell.hi) {
            basis.eval_on_cell(&cell, x, &mut values, &mut slopes);
            visit(&cell, x, w, &values, &slopes)?;
        }
    }
    Ok(())
}

/// `M[j, i] = ∫ op(φ_i) φ_j`, second-order term in weak form. In weak mode
/// the integration-by-parts boundary bracket `c (∂φ_i/∂n) φ_j` is included.
pub fn assemble_weighted(
    op: &LinearOperatorSpec,
    basis: &BasisSet,
    quad: &QuadratureRule,
    mode: BoundaryMode,
    counter: &mut QuadCounter,
) -> Result<DenseMatrix> {
    let op = LinearOperatorSpec::new(op.terms().to_vec())?;
    let n = basis.len();
    let mut m = DenseMatrix::zeros(n, n);
    if op.term_count() == 0 {
        return Ok(m);
    }
    let ticks = op.term_count() as u64;
    for_each_point(basis, quad, |cell, x, w, vals, slopes| {
        for (lj, &j) in cell.active.iter().enumerate() {
            counter.tick(ticks);
            for (li, &i) in cell.active.iter().enumerate() {
                let v = op.apply_low_order(x, vals[li], slopes[li]) * vals[lj]
                    + op.weak_second_order(x, slopes[li], vals[lj], slopes[lj]);
                m[(j, i)] += w * v;
            }
        }
        Ok(())
    })?;
    if mode == BoundaryMode::WeakBoundary {
        if let Some(c) = op.second_order() {
            // the bracket does not depend on the boundary data kind
            for end in end_traces(basis, &BoundarySpec::neumann(0.0, 0.0))? {
                let ce = c.value(end.x);
                for j in 0..n {
                    if end.values[j] == 0.0 {
                        continue;
                    }
                    for i in 0..n {
                        m[(j, i)] += ce * end.normal_slopes[i] * end.values[j];
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Known part of the integration-by-parts bracket: with elimination, Neumann
/// ends contribute `c q̄ φ_j` to `∫ op(û) φ_j`. Zero in weak mode.
pub fn neumann_offset(
    op: &LinearOperatorSpec,
    basis: &BasisSet,
    bc: &BoundarySpec,
    mode: BoundaryMode,
) -> Result<DenseVector> {
    let mut out = DenseVector::zeros(basis.len());
    let c = match (mode, op.second_order()) {
        (BoundaryMode::EssentialElimination, Some(c)) => c,
        _ => return Ok(out),
    };
    for end in end_traces(basis, bc)? {
        if let BoundaryCondition::Neumann(qbar) = end.cond {
            let ce = c.value(end.x);
            for j in 0..basis.len() {
                out[j] += ce * qbar * end.values[j];
            }
        }
    }
    Ok(out)
}

/// `b[j] = ∫ f φ_j` minus the Neumann part of the flux of `flux_op` (the
/// linear operator whose second-order term was integrated by parts).
pub fn assemble_load(
    f: &(dyn Fn(f64) -> f64 + Send + Sync),
    flux_op: &LinearOperatorSpec,
    basis: &BasisSet,
    quad: &QuadratureRule,
    bc: &BoundarySpec,
    mode: BoundaryMode,
    counter: &mut QuadCounter,
) -> Result<DenseVector> {
    let mut b = DenseVector::zeros(basis.len());
    for_each_point(basis, quad, |cell, x, w, vals, _| {
        let fx = f(x);
        for (lj, &j) in cell.active.iter().enumerate() {
            counter.tick(1);
            b[j] += w * fx * vals[lj];
        }
        Ok(())
    })?;
    b.sub(&neumann_offset(flux_op, basis, bc, mode)?)
}

/// Boundary residual terms of the weak form, `E x − e`, with
/// `E[j,i] = −Σ_Γ2 (∂φ_i/∂n) φ_j + Σ_Γ1 φ_i (∂φ_j/∂n)` and
/// `e[j] = −Σ_Γ2 q̄ φ_j + Σ_Γ1 ū ∂φ_j/∂n`. Zero under elimination.
pub fn boundary_residual(
    basis: &BasisSet,
    bc: &BoundarySpec,
    mode: BoundaryMode,
) -> Result<(DenseMatrix, DenseVector)> {
    let n = basis.len();
    let mut e_mat = DenseMatrix::zeros(n, n);
    let mut e_vec = DenseVector::zeros(n);
    if mode == BoundaryMode::EssentialElimination {
        return Ok((e_mat, e_vec));
    }
    for end in end_traces(basis, bc)? {
        for j in 0..n {
            match end.cond {
                BoundaryCondition::Neumann(qbar) => {
                    for i in 0..n {
                        e_mat[(j, i)] -= end.normal_slopes[i] * end.values[j];
                    }
                    e_vec[j] -= qbar * end.values[j];
                }
                BoundaryCondition::Dirichlet(ubar) => {
                    for i in 0..n {
                        e_mat[(j, i)] += end.values[i] * end.normal_slopes[j];
                    }
                    e_vec[j] += ubar * end.normal_slopes[j];
                }
            }
        }
    }
    Ok((e_mat, e_vec))
}

pub(crate) fn require_pointwise(op: &LinearOperatorSpec, name: &str) -> Result<()> {
    if op.second_order().is_some() {
        return Err(Error::Parameter(format!(
            "operator {name} has a second-order term, which cannot be weakened inside a product"
        )));
    }
    Ok(())
}

/// Classical product tensor, `G[j, i*n + k] = ∫ p(φ_i) q(φ_k) φ_j`, so that
/// `G (x ⊗ x)` is the Galerkin-weighted `p(û) q(û)`.
pub fn assemble_kron_g(
    p: &LinearOperatorSpec,
    q: &LinearOperatorSpec,
    basis: &BasisSet,
    quad: &QuadratureRule,
    counter: &mut QuadCounter,
) -> Result<DenseMatrix> {
    require_pointwise(p, "p")?;
    require_pointwise(q, "q")?;
    let n = basis.len();
    if n > MAX_KRONECKER_BASIS {
        return Err(Error::Parameter(format!(
            "dense product tensor limited to {MAX_KRONECKER_BASIS} basis functions, got {n}"
        )));
    }
    let mut g = DenseMatrix::zeros(n, n * n);
    let ticks = (p.term_count() * q.term_count()) as u64;
    if ticks == 0 {
        return Ok(g);
    }
    let mut pv = Vec::new();
    let mut qv = Vec::new();
    for_each_point(basis, quad, |cell, x, w, vals, slopes| {
        pv.clear();
        qv.clear();
        for l in 0..cell.active.len() {
            pv.push(p.apply_low_order(x, vals[l], slopes[l]));
            qv.push(q.apply_low_order(x, vals[l], slopes[l]));
        }
        for (lj, &j) in cell.active.iter().enumerate() {
            counter.tick(ticks);
            let row = g.row_mut(j);
            let wj = w * vals[lj];
            for (li, &i) in cell.active.iter().enumerate() {
                let wpi = wj * pv[li];
                for (lk, &k) in cell.active.iter().enumerate() {
                    row[i * n + k] += wpi * qv[lk];
                }
            }
        }
        Ok(())
    })?;
    Ok(g)
}

/// Notes on integrands the rule cannot integrate exactly. Variable
/// coefficients and the source term are not analyzed.
pub fn exactness_warnings(problem: &ProblemSpec, basis: &BasisSet, quad: &QuadratureRule) -> Vec<String> {
    let deg = basis.degree();
    let exact = quad.exact_degree();
    let mut out = Vec::new();
    let mut check = |label: &str, degree: Option<usize>| match degree {
        Some(d) if d > exact => out.push(format!(
            "{label}: integrand degree {d} exceeds quadrature exactness {exact}"
        )),
        None => out.push(format!("{label}: variable coefficient, exactness not verified")),
        _ => {}
    };
    let pd = problem.p.polynomial_degree(deg);
    let qd = problem.q.polynomial_degree(deg);
    if !problem.p.is_zero() && !problem.q.is_zero() {
        check("classical product term", pd.zip(qd).map(|(a, b)| a + b + deg));
    }
    // weak second-order terms: φ_i' φ_j', degree ≤ 2 deg
    let linear_deg = |op: &LinearOperatorSpec| op.polynomial_degree(deg).map(|d| (d + deg).max(2 * deg.saturating_sub(1)));
    if !problem.p.is_zero() {
        check("weighted p", linear_deg(&problem.p));
    }
    if !problem.q.is_zero() {
        check("weighted q", linear_deg(&problem.q));
    }
    if !problem.l.is_zero() {
        check("weighted L", linear_deg(&problem.l));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{kron, LuFactors};
    use crate::discretization::Domain1D;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit() -> Domain1D {
        Domain1D::new(0.0, 1.0).unwrap()
    }

    fn three_node() -> BasisSet {
        BasisSet::fe_hat(vec![0.0, 0.5, 1.0]).unwrap()
    }

    fn q3() -> QuadratureRule {
        QuadratureRule::gauss(3).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn mass_matrix_of_two_elements() {
        let mut c = QuadCounter::new();
        let m = assemble_weighted(&LinearOperatorSpec::identity(), &three_node(), &q3(), BoundaryMode::default(), &mut c).unwrap();
        let h = 0.5;
        let want = [
            [h / 3.0, h / 6.0, 0.0],
            [h / 6.0, 2.0 * h / 3.0, h / 6.0],
            [0.0, h / 6.0, h / 3.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!(close(m[(i, j)], want[i][j], 1e-15), "({i},{j}) {}", m[(i, j)]);
            }
        }
        // 2 elements x 3 points x 2 local weights x 1 term
        assert_eq!(c.evals(), 12);
    }

    #[test]
    fn stiffness_interior_row() {
        let mut c = QuadCounter::new();
        let op = LinearOperatorSpec::constant_term(-1.0, 2);
        let k = assemble_weighted(&op, &three_node(), &q3(), BoundaryMode::default(), &mut c).unwrap();
        let row = k.row(1);
        for (got, want) in row.iter().zip([-2.0, 4.0, -2.0]) {
            assert!(close(*got, want, 1e-14), "{row:?}");
        }
    }

    #[test]
    fn zero_operator_gives_zero_matrix() {
        let mut c = QuadCounter::new();
        let m = assemble_weighted(&LinearOperatorSpec::zero(), &three_node(), &q3(), BoundaryMode::default(), &mut c).unwrap();
        assert_eq!(m, DenseMatrix::zeros(3, 3));
        assert_eq!(c.evals(), 0);
    }

    #[test]
    fn load_examples() {
        let mut c = QuadCounter::new();
        let zero = assemble_load(&|_| 0.0, &LinearOperatorSpec::constant_term(-1.0, 2), &three_node(), &q3(), &BoundarySpec::neumann(0.0, 0.0), BoundaryMode::default(), &mut c).unwrap();
        assert_eq!(zero, DenseVector::zeros(3));
        let one = assemble_load(&|_| 1.0, &LinearOperatorSpec::zero(), &three_node(), &q3(), &BoundarySpec::dirichlet(0.0, 0.0), BoundaryMode::default(), &mut c).unwrap();
        assert!(close(one[1], 0.5, 1e-15));
        let modal = BasisSet::modal_poly(unit(), 3).unwrap();
        let quad = modal.default_quadrature().unwrap();
        let b = assemble_load(&|_| 1.0, &LinearOperatorSpec::zero(), &modal, &quad, &BoundarySpec::dirichlet(0.0, 0.0), BoundaryMode::default(), &mut c).unwrap();
        assert!(close(b[0], 1.0, 1e-14));
    }

    #[test]
    fn neumann_data_enters_load() {
        // −u'' with du/dn = 3 on the right: ∫ −u'' φ_j = −3 φ_j(1) + ..., so +3 moves to the load
        let mut c = QuadCounter::new();
        let bc = BoundarySpec {
            left: BoundaryCondition::Dirichlet(0.0),
            right: BoundaryCondition::Neumann(3.0),
        };
        let b = assemble_load(&|_| 0.0, &LinearOperatorSpec::constant_term(-1.0, 2), &three_node(), &q3(), &bc, BoundaryMode::default(), &mut c).unwrap();
        assert_eq!(b.as_slice(), &[0.0, 0.0, 3.0]);
    }

    #[test]
    fn kron_g_scalar_case() {
        let mut c = QuadCounter::new();
        let basis = BasisSet::modal_poly(unit(), 1).unwrap();
        let quad = basis.default_quadrature().unwrap();
        let id = LinearOperatorSpec::identity();
        let g = assemble_kron_g(&id, &id, &basis, &quad, &mut c).unwrap();
        assert_eq!(g.shape(), (1, 1));
        assert!(close(g[(0, 0)], 1.0, 1e-15));
        let x = DenseVector::from(vec![3.0]);
        assert!(close(g.matvec(&kron(&x, &x).unwrap()).unwrap()[0], 9.0, 1e-14));
    }

    #[test]
    fn kron_g_rejects_second_order_factor() {
        let mut c = QuadCounter::new();
        let d2 = LinearOperatorSpec::constant_term(1.0, 2);
        assert!(assemble_kron_g(&d2, &LinearOperatorSpec::identity(), &three_node(), &q3(), &mut c).is_err());
    }

    /// Independent evaluation of ∫ p(û) q(û) φ_j via point evaluation of the
    /// basis, bypassing the cell-local fast path.
    fn direct_product(p: &LinearOperatorSpec, q: &LinearOperatorSpec, basis: &BasisSet, quad: &QuadratureRule, x: &DenseVector) -> DenseVector {
        let mut out = DenseVector::zeros(basis.len());
        for cell in basis.cells() {
            for (t, w) in quad.mapped(cell.lo, cell.hi) {
                let u = basis.eval_uhat(x, t, 0).unwrap();
                let du = basis.eval_uhat(x, t, 1).unwrap();
                let pq = p.apply_low_order(t, u, du) * q.apply_low_order(t, u, du);
                for j in 0..basis.len() {
                    out[j] += w * pq * basis.eval(j, t, 0).unwrap();
                }
            }
        }
        out
    }

    #[test]
    fn kron_g_matches_direct_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let basis = BasisSet::fe_hat_uniform(unit(), 3).unwrap();
        let quad = q3();
        let p = LinearOperatorSpec::identity();
        let q = LinearOperatorSpec::constant_term(1.0, 1).plus(&LinearOperatorSpec::constant_term(0.5, 0)).unwrap();
        let mut c = QuadCounter::new();
        let g = assemble_kron_g(&p, &q, &basis, &quad, &mut c).unwrap();
        // 3 elements x 3 points x 2 weights x (1 x 2) term pairs
        assert_eq!(c.evals(), 36);
        for _ in 0..20 {
            let x = DenseVector::from_fn(4, |_| rng.gen_range(-2.0..2.0));
            let got = g.matvec(&kron(&x, &x).unwrap()).unwrap();
            let want = direct_product(&p, &q, &basis, &quad, &x);
            assert!(got.sub(&want).unwrap().norm_inf() <= 1e-12);
        }
        // unit vectors unfold the definition
        let e1 = DenseVector::from_fn(4, |i| (i == 1) as u8 as f64);
        let got = g.matvec(&kron(&e1, &e1).unwrap()).unwrap();
        let want = direct_product(&p, &q, &basis, &quad, &e1);
        assert!(got.sub(&want).unwrap().norm_inf() <= 1e-14);
    }

    #[test]
    fn symmetric_and_positive_after_elimination() {
        let basis = BasisSet::fe_hat_uniform(unit(), 12).unwrap();
        let trial = TrialSpace::essential(&basis, &BoundarySpec::dirichlet(0.0, 0.0)).unwrap();
        let mut c = QuadCounter::new();
        for op in [LinearOperatorSpec::identity(), LinearOperatorSpec::constant_term(-1.0, 2)] {
            let m = assemble_weighted(&op, &basis, &q3(), BoundaryMode::default(), &mut c).unwrap();
            assert_eq!(m, m.transpose());
            let reduced = trial.reduce(&m).unwrap();
            let lu = LuFactors::factor(&reduced).unwrap();
            // diagonally dominant SPD tridiagonal: no row swaps, positive pivots
            assert!(lu.pivots().iter().all(|&p| p > 0.0));
        }
    }

    #[test]
    fn assembly_is_linear_in_the_operator() {
        let basis = BasisSet::modal_poly(unit(), 6).unwrap();
        let quad = basis.default_quadrature().unwrap();
        let p = LinearOperatorSpec::new(vec![
            OperatorTerm { coeff: Coefficient::variable(|x| 1.0 + x * x), order: 0 },
            OperatorTerm { coeff: Coefficient::Constant(0.3), order: 1 },
        ])
        .unwrap();
        let q = LinearOperatorSpec::new(vec![OperatorTerm {
            coeff: Coefficient::variable_with_slope(|x| 2.0 + x, |_| 1.0),
            order: 2,
        }])
        .unwrap();
        let (alpha, beta) = (1.7, -0.6);
        let mut c = QuadCounter::new();
        let mode = BoundaryMode::WeakBoundary;
        let combined = assemble_weighted(&p.scaled(alpha).plus(&q.scaled(beta)).unwrap(), &basis, &quad, mode, &mut c).unwrap();
        let separate = assemble_weighted(&p, &basis, &quad, mode, &mut c).unwrap().scale(alpha)
            .add(&assemble_weighted(&q, &basis, &quad, mode, &mut c).unwrap().scale(beta))
            .unwrap();
        assert!(combined.sub(&separate).unwrap().max_abs() <= 1e-13);
    }

    #[test]
    fn weak_form_reproduces_strong_integral_for_smooth_trial() {
        // with the boundary bracket kept, ∫ op(û) φ_j equals the strong integral
        // whenever û is a polynomial the modal basis represents exactly.
        let basis = BasisSet::modal_poly(Domain1D::new(-1.0, 2.0).unwrap(), 5).unwrap();
        let quad = basis.default_quadrature().unwrap();
        let op = LinearOperatorSpec::new(vec![
            OperatorTerm { coeff: Coefficient::variable_with_slope(|x| 1.0 + 0.5 * x, |_| 0.5), order: 2 },
            OperatorTerm { coeff: Coefficient::Constant(2.0), order: 1 },
        ])
        .unwrap();
        let mut c = QuadCounter::new();
        let m = assemble_weighted(&op, &basis, &quad, BoundaryMode::WeakBoundary, &mut c).unwrap();
        let x = DenseVector::from(vec![0.3, -1.0, 0.7, 0.2, -0.4]);
        let got = m.matvec(&x).unwrap();
        let h = 1e-4;
        for j in 0..5 {
            let want = quad.integrate(-1.0, 2.0, |t| {
                let u = |s: f64| basis.eval_uhat(&x, s, 0).unwrap();
                let du = basis.eval_uhat(&x, t, 1).unwrap();
                let d2u = (u(t + h) - 2.0 * u(t) + u(t - h)) / (h * h);
                op.apply_strong(t, u(t), du, d2u) * basis.eval(j, t, 0).unwrap()
            });
            assert!(close(got[j], want, 1e-5), "j={j}: {} vs {want}", got[j]);
        }
    }
}
