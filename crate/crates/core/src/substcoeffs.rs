//! Coefficients `A_i^j(a)` of the chain rule for `D_y^s Y(y^a)`.

use crate::error::{Error, Result};
use crate::specialfn::falling_factorial;

/// Dense table of `A_i^j(a)` for `0 <= i < j <= order`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    pub a: f64,
    pub order: usize,
    entries: Vec<f64>,
}

impl CoeffTable {
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.order + 1) + j
    }

    /// `A_i^j(a)`; zero whenever `i >= j`.
    ///
    /// # Panics
    /// If `j` exceeds the table order.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(j <= self.order, "superscript {j} beyond table order {}", self.order);
        if i >= j {
            0.0
        } else {
            self.entries[self.idx(i, j)]
        }
    }
}

/// Fills the table by `A_i^j = a((i+1) A_i^{j-1} + A_{i-1}^{j-1}) - (j-1) A_i^{j-1}`,
/// seeded with `A_i^{i+1} = a^{i+1}` and `A_0^j = a(a-1)...(a-j+1)`.
pub fn build_coeff_table(a: f64, order: usize) -> Result<CoeffTable> {
    if order == 0 {
        return Err(Error::InvalidParameter("coefficient table order must be >= 1".into()));
    }
    let mut t = CoeffTable { a, order, entries: vec![0.0; (order + 1) * (order + 1)] };
    for j in 1..=order {
        let k = t.idx(0, j);
        t.entries[k] = falling_factorial(a, j);
        let k = t.idx(j - 1, j);
        t.entries[k] = a.powi(j as i32);
    }
    for j in 3..=order {
        for i in 1..j - 1 {
            let prev = t.get(i, j - 1);
            let lower = t.get(i - 1, j - 1);
            let v = a * ((i as f64 + 1.0) * prev + lower) - (j as f64 - 1.0) * prev;
            let k = t.idx(i, j);
            t.entries[k] = v;
        }
    }
    Ok(t)
}

/// `sum_{j=1}^s (x)_j A_{j-1}^s(a)` with falling factorials; equals `(a x)_s`.
pub fn weighted_falling_sum(table: &CoeffTable, x: f64, s: usize) -> Result<f64> {
    if s == 0 || s > table.order {
        return Err(Error::InvalidParameter(format!("s = {s} outside 1..={}", table.order)));
    }
    Ok((1..=s).map(|j| falling_factorial(x, j) * table.get(j - 1, s)).sum())
}

/// `D_y^n Y(y^a)` for `n = table.order`, given `t_derivatives[j-1] = D_t^j Y(t)` at `t = y^a`.
pub fn chain_rule_apply(table: &CoeffTable, t_derivatives: &[f64], y: f64) -> Result<f64> {
    let n = table.order;
    if !(y > 0.0) {
        return Err(Error::Domain(format!("chain rule needs y > 0, got {y}")));
    }
    if t_derivatives.len() < n {
        return Err(Error::InvalidParameter(format!(
            "need {n} t-derivatives, got {}",
            t_derivatives.len()
        )));
    }
    let t = y.powf(table.a);
    let mut tj = 1.0;
    let mut sum = 0.0;
    for j in 1..=n {
        tj *= t;
        sum += table.get(j - 1, n) * tj * t_derivatives[j - 1];
    }
    Ok(sum * y.powi(-(n as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::binomial;

    #[test]
    fn small_entries() {
        let t = build_coeff_table(2.0, 3).unwrap();
        assert_eq!(t.get(0, 3), 0.0);
        assert_eq!(t.get(2, 3), 8.0);
        assert_eq!(t.get(1, 3), 12.0);
        assert_eq!(t.get(3, 3), 0.0);
        assert_eq!(t.get(5, 2), 0.0);
        let t = build_coeff_table(1.7, 3).unwrap();
        let a: f64 = 1.7;
        assert!((t.get(1, 3) - (3.0 * a.powi(3) - 3.0 * a * a)).abs() < 1e-14);
        assert!(build_coeff_table(2.0, 0).is_err());
    }

    #[test]
    fn falling_sum_examples() {
        let t = build_coeff_table(1.0, 3).unwrap();
        for &x in &[0.3, 2.0, -1.5] {
            let v = weighted_falling_sum(&t, x, 3).unwrap();
            assert!((v - x * (x - 1.0) * (x - 2.0)).abs() < 1e-14);
        }
        let t = build_coeff_table(2.0, 3).unwrap();
        assert_eq!(weighted_falling_sum(&t, 1.0, 3).unwrap(), 0.0);
        assert_eq!(weighted_falling_sum(&t, 2.0, 3).unwrap(), 24.0);
        assert!(weighted_falling_sum(&t, 2.0, 4).is_err());
    }

    #[test]
    fn chain_rule_on_monomials() {
        // Y(t) = t, a = 2, order 2: d^2/dy^2 y^2 = 2
        let t = build_coeff_table(2.0, 2).unwrap();
        let y: f64 = 0.37;
        assert!((chain_rule_apply(&t, &[1.0, 0.0], y).unwrap() - 2.0).abs() < 1e-14);
        // Y(t) = t^2, a = 1.5: d^2/dy^2 y^3 = 6y
        let t = build_coeff_table(1.5, 2).unwrap();
        let tt = 0.5f64.powf(1.5);
        let v = chain_rule_apply(&t, &[2.0 * tt, 2.0], 0.5).unwrap();
        assert!((v - 3.0).abs() < 1e-14);
        assert!(chain_rule_apply(&t, &[1.0, 1.0], 0.0).is_err());
    }

    fn property2(t: &CoeffTable, i: usize, j: usize) -> f64 {
        (i..j)
            .map(|l| binomial(j - 1, l) * falling_factorial(t.a, j - l) * t.get(i - 1, l))
            .sum()
    }

    proptest::proptest! {
        #[test]
        fn binomial_convolution_matches_recurrence(a in 0.5f64..6.0, order in 2usize..=10) {
            let t = build_coeff_table(a, order).unwrap();
            for j in 2..=order {
                for i in 1..j {
                    let v = t.get(i, j);
                    let w = property2(&t, i, j);
                    proptest::prop_assert!((v - w).abs() <= 1e-10 * v.abs().max(1e-300), "i={} j={} {} {}", i, j, v, w);
                }
            }
        }

        #[test]
        fn falling_sum_identity(a in 0.5f64..6.0, x in -4.0f64..4.0, order in 1usize..=10) {
            let t = build_coeff_table(a, order).unwrap();
            for s in 1..=order {
                let lhs = weighted_falling_sum(&t, x, s).unwrap();
                let rhs = falling_factorial(a * x, s);
                let scale: f64 = (1..=s).map(|j| (falling_factorial(x, j) * t.get(j - 1, s)).abs()).sum();
                proptest::prop_assert!((lhs - rhs).abs() <= 1e-10 * scale.max(rhs.abs()).max(1e-300));
            }
        }

        #[test]
        fn chain_rule_matches_finite_differences(p in 0.5f64..3.0, k in 1usize..=2, y in 0.3f64..0.8, m in 0.1f64..0.9) {
            let a = 2.0 * k as f64 - m;
            let order = 2 * k;
            let t = build_coeff_table(a, order).unwrap();
            let tt = y.powf(a);
            let derivs: Vec<f64> = (1..=order).map(|j| falling_factorial(p, j) * tt.powf(p - j as f64)).collect();
            let v = chain_rule_apply(&t, &derivs, y).unwrap();
            let exact = falling_factorial(a * p, order) * y.powf(a * p - order as f64);
            proptest::prop_assert!((v - exact).abs() <= 1e-10 * exact.abs().max(1e-8));
            // central differences of y -> y^{a p}
            let f = |s: f64| s.powf(a * p);
            let fd = if k == 1 {
                let h = 1e-4;
                (f(y + h) - 2.0 * f(y) + f(y - h)) / (h * h)
            } else {
                // fourth-order accurate seven-point stencil
                let h = 5e-3;
                let c = [-1.0 / 6.0, 2.0, -6.5, 28.0 / 3.0, -6.5, 2.0, -1.0 / 6.0];
                c.iter().enumerate().map(|(i, c)| c * f(y + (i as f64 - 3.0) * h)).sum::<f64>() / h.powi(4)
            };
            proptest::prop_assert!((fd - v).abs() <= 1e-4 * v.abs().max(1.0), "fd={} v={}", fd, v);
        }
    }
}
