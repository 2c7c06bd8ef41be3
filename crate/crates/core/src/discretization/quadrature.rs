use crate::error::{Error, Result};

/// Largest supported Gauss-Legendre order.
pub const MAX_ORDER: usize = 64;

/// Gauss-Legendre rule on the reference interval `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    points: Vec<f64>,
    weights: Vec<f64>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
pub(crate) fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    let (mut d0, mut d1) = (0.0, 1.0);
    if n == 0 {
        return (p0, d0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        // P'_{k+1} = P'_{k-1} + (2k+1) P_k
        let d2 = d0 + (2.0 * kf + 1.0) * p1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    (p1, d1)
}

impl QuadratureRule {
    /// Gauss-Legendre rule with `order` points, exact for polynomials of
    /// degree `2 * order - 1`. Nodes come from Newton iteration on `P_order`.
    pub fn gauss(order: usize) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::Parameter(format!(
                "quadrature order {order} outside 1..={MAX_ORDER}"
            )));
        }
        let n = order;
        let mut points = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                deriv = d;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                deriv = d;
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            points[i] = -x;
            points[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            points[n / 2] = 0.0;
        }
        Ok(Self { points, weights })
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.order() - 1
    }

    /// `(x, w)` pairs mapped onto `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.points
            .iter()
            .zip(&self.weights)
            .map(move |(&p, &w)| (mid + half * p, half * w))
    }

    pub fn integrate(&self, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.mapped(lo, hi).map(|(x, w)| w * f(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders_match_closed_form() {
        let r1 = QuadratureRule::gauss(1).unwrap();
        assert_eq!(r1.points(), &[0.0]);
        assert_eq!(r1.weights(), &[2.0]);
        let r2 = QuadratureRule::gauss(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r2.points()[0] + s).abs() < 1e-15 && (r2.points()[1] - s).abs() < 1e-15);
        assert!((r2.weights()[0] - 1.0).abs() < 1e-15 && (r2.weights()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn order_five_integrates_x8() {
        let r = QuadratureRule::gauss(5).unwrap();
        assert!((r.integrate(-1.0, 1.0, |x| x.powi(8)) - 2.0 / 9.0).abs() < 1e-13);
    }

    #[test]
    fn order_out_of_range() {
        assert!(QuadratureRule::gauss(0).is_err());
        assert!(QuadratureRule::gauss(65).is_err());
    }

    #[test]
    fn weights_sum_to_two_and_points_sorted() {
        for k in 1..=MAX_ORDER {
            let r = QuadratureRule::gauss(k).unwrap();
            let sum: f64 = r.weights().iter().sum();
            assert!((sum - 2.0).abs() < 1e-12, "order {k}: {sum}");
            assert!(r.weights().iter().all(|&w| w > 0.0));
            assert!(r.points().windows(2).all(|p| p[0] < p[1]), "order {k}");
            for &x in r.points() {
                assert!(legendre_with_derivative(k, x).0.abs() < 1e-13, "order {k}");
            }
        }
    }

    fn monomial_exact(m: usize) -> f64 {
        if m % 2 == 1 { 0.0 } else { 2.0 / (m as f64 + 1.0) }
    }

    #[test]
    fn exact_up_to_degree_and_not_beyond() {
        for k in 1..=12 {
            let r = QuadratureRule::gauss(k).unwrap();
            for m in 0..=2 * k - 1 {
                let got = r.integrate(-1.0, 1.0, |x| x.powi(m as i32));
                let want = monomial_exact(m);
                assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "k={k} m={m}");
            }
            // Gauss error for x^(2k): 2^(2k+1) (k!)^4 / ((2k+1) ((2k)!)^2)
            let m = 2 * k;
            let got = r.integrate(-1.0, 1.0, |x| x.powi(m as i32));
            let mut predicted = 2.0 / (2.0 * k as f64 + 1.0);
            for i in 1..=k {
                let i = i as f64;
                predicted *= 4.0 * i.powi(4) / ((2.0 * i - 1.0) * 2.0 * i).powi(2);
            }
            let err = monomial_exact(m) - got;
            assert!(err > 0.0, "k={k} should not be exact at {m}");
            assert!((err - predicted).abs() <= 1e-3 * predicted + 1e-15, "k={k}: {err} vs {predicted}");
        }
    }
}
