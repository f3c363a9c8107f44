use crate::calculus::{Jet, Scalar};
use crate::error::{Error, Result};

/// Highest total derivative order carried by [`Jet`].
pub const JET_ORDER: usize = 2;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Hirota bilinear derivative `D^m a·b` at the jets' expansion point, where
/// `orders[i]` is the power of `D` in variable `i`:
///
/// `Σ_k (−1)^{|m−k|} Π_i C(m_i, k_i) ∂^k a ∂^{m−k} b`.
///
/// Orders beyond what the jets carry are an error.
pub fn hirota<T: Scalar, const N: usize>(a: &Jet<T, N>, b: &Jet<T, N>, orders: [usize; N]) -> Result<T> {
    let total: usize = orders.iter().sum();
    if total > JET_ORDER {
        return Err(Error::OrderExceeded {
            requested: total,
            available: JET_ORDER,
        });
    }
    let mut sum = T::zero();
    let mut k = [0usize; N];
    loop {
        let mut rest = [0usize; N];
        let mut coeff = 1.0;
        let mut odd = 0;
        for i in 0..N {
            rest[i] = orders[i] - k[i];
            coeff *= binomial(orders[i], k[i]);
            odd += rest[i];
        }
        if odd % 2 == 1 {
            coeff = -coeff;
        }
        let da = a.partial(k).expect("order checked");
        let db = b.partial(rest).expect("order checked");
        sum = sum + (da * db).scale(coeff);

        // next multi-index k ≤ orders
        let mut i = 0;
        loop {
            if i == N {
                return Ok(sum);
            }
            if k[i] < orders[i] {
                k[i] += 1;
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn exp_jet(k: f64, w: f64, x: f64, t: f64) -> Jet {
        (Jet::variable(x, 0).scale(k) + Jet::variable(t, 1).scale(w)).exp()
    }

    #[test]
    fn antisymmetric_first_order() {
        let a = exp_jet(0.7, -1.3, 0.4, 0.1) + Jet::variable(0.4, 0).sin();
        assert_eq!(hirota(&a, &a, [1, 0]).unwrap(), 0.0);
        assert_eq!(hirota(&a, &a, [0, 1]).unwrap(), 0.0);
    }

    #[test]
    fn exponential_eigen_identity() {
        let (k1, k2, x) = (1.3, -0.4, 0.6);
        let a = exp_jet(k1, 0.0, x, 0.0);
        let b = exp_jet(k2, 0.0, x, 0.0);
        for m in 0..=2 {
            let expected = (k1 - k2).powi(m as i32) * ((k1 + k2) * x).exp();
            let got = hirota(&a, &b, [m, 0]).unwrap();
            assert!((got - expected).abs() <= 1e-14 * expected.abs(), "m = {m}");
        }
    }

    #[test]
    fn mixed_self_product() {
        // D_x D_t a·a = 2 (a a_xt − a_x a_t), zero for a plane wave
        let a = exp_jet(0.8, 1.7, -0.3, 0.2);
        assert!(hirota(&a, &a, [1, 1]).unwrap().abs() < 1e-15);
        let b = Jet::variable(0.5, 0) * Jet::variable(0.2, 1).sin() + Jet::variable(0.5, 0).powi(3);
        let expected = 2.0 * (b.value * b.hess[0][1] - b.grad[0] * b.grad[1]);
        assert!((hirota(&b, &b, [1, 1]).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn second_order_product_rule() {
        let a = Jet::variable(0.3, 0).sin();
        let b = Jet::variable(0.3, 0).exp();
        let expected = a.hess[0][0] * b.value - 2.0 * a.grad[0] * b.grad[0] + a.value * b.hess[0][0];
        assert!((hirota(&a, &b, [2, 0]).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn complex_carrier() {
        let g = Jet::<f64, 2>::variable(0.2, 0).to_complex() * Jet::constant(Complex64::new(1.0, 2.0));
        let f = Jet::<f64, 2>::variable(0.2, 0).exp().to_complex();
        let d = hirota(&g, &f, [1, 0]).unwrap();
        let expected = g.grad[0] * f.value - g.value * f.grad[0];
        assert!((d - expected).norm() < 1e-15);
    }

    #[test]
    fn order_beyond_jet_is_rejected() {
        let a = Jet::<f64, 2>::variable(0.0, 0);
        assert_eq!(
            hirota(&a, &a, [2, 1]),
            Err(Error::OrderExceeded {
                requested: 3,
                available: 2
            })
        );
    }
}
