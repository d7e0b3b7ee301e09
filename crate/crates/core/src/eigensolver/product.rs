use crate::error::Result;
use crate::greens::{GreenPolynomial, KernelSpec};
use crate::quadrature::{gauss_jacobi_unit, gauss_legendre, QuadratureRule};

/// Product-integration rows for `int_0^1 d^d/dy^d G(y, xi) xi^{-m} Y(xi) dxi`.
///
/// `Y` is represented by its nodal values; on every panel `Y(xi) / xi^k`
/// is replaced by its Lagrange interpolant and the remaining factor
/// `G xi^{k-m}` is integrated with a rule adapted to it (Gauss-Jacobi on the
/// panel touching 0, Gauss-Legendre split at `xi = y` elsewhere).
#[derive(Debug, Clone)]
pub(crate) struct ProductIntegrator {
    pub spec: KernelSpec,
    pub rule: QuadratureRule,
    poly: GreenPolynomial,
    jacobi: (Vec<f64>, Vec<f64>),
    legendre: (Vec<f64>, Vec<f64>),
    first_lagrange: Vec<Vec<f64>>,
    inv_node_pow: Vec<f64>,
}

impl ProductIntegrator {
    pub fn new(spec: KernelSpec, rule: QuadratureRule) -> Result<Self> {
        spec.validate()?;
        rule.validate()?;
        let k = spec.k;
        let p = k as f64 - spec.m;
        let first = &rule.panels[0];
        let qj = first.len / 2 + 2 * k + 4;
        let jacobi = gauss_jacobi_unit(qj, p)?;
        let widest = rule.panels.iter().map(|p| p.len).max().unwrap_or(2);
        let legendre = gauss_legendre(widest + 2 * k + 4);
        let first_lagrange = jacobi
            .0
            .iter()
            .map(|&t| {
                let mut l = vec![0.0; first.len];
                first.lagrange_at(first.start + t * (first.end - first.start), &mut l);
                l
            })
            .collect();
        let inv_node_pow = rule.nodes.iter().map(|y| y.powi(-(k as i32))).collect();
        Ok(ProductIntegrator {
            spec,
            rule,
            poly: GreenPolynomial::new(k),
            jacobi,
            legendre,
            first_lagrange,
            inv_node_pow,
        })
    }

    /// Row `r` with `int d_y^d G(y, xi) xi^{-m} Y(xi) dxi ~ sum_j r_j Y(y_j)`.
    pub fn row(&self, y: f64, d: usize) -> Vec<f64> {
        let n = self.rule.len();
        let mut out = vec![0.0; n];
        let k = self.spec.k;
        let p = k as f64 - self.spec.m;
        let mut lag = vec![0.0; self.rule.panels.iter().map(|p| p.len).max().unwrap_or(0)];
        for (pi, panel) in self.rule.panels.iter().enumerate() {
            let (a, b) = (panel.start, panel.end);
            let slot = &mut out[panel.offset..panel.offset + panel.len];
            if pi == 0 {
                let (tj, wj) = &self.jacobi;
                let width = b - a;
                let scale = width.powf(p + 1.0);
                for (q, (&t, &w)) in tj.iter().zip(wj).enumerate() {
                    let xi = t * width;
                    let g = w * scale * self.poly.lower_dy(d, y, xi);
                    for (s, l) in slot.iter_mut().zip(&self.first_lagrange[q]) {
                        *s += g * l;
                    }
                }
                let c = y.min(b);
                if c > 0.0 {
                    let scale = c.powf(p + 1.0);
                    let lag = &mut lag[..panel.len];
                    for (&t, &w) in tj.iter().zip(wj) {
                        let xi = t * c;
                        let g = w * scale * (self.poly.upper_dy(d, y, xi) - self.poly.lower_dy(d, y, xi));
                        panel.lagrange_at(xi, lag);
                        for (s, l) in slot.iter_mut().zip(lag.iter()) {
                            *s += g * l;
                        }
                    }
                }
            } else {
                let mut pieces: [(f64, f64, bool); 2] = [(a, b, y <= a), (0.0, 0.0, false)];
                let mut count = 1;
                if y > a && y < b {
                    pieces = [(a, y, false), (y, b, true)];
                    count = 2;
                }
                let (xr, wr) = &self.legendre;
                let lag = &mut lag[..panel.len];
                for &(lo, hi, lower) in &pieces[..count] {
                    let half = 0.5 * (hi - lo);
                    for (&x, &w) in xr.iter().zip(wr) {
                        let xi = lo + half * (x + 1.0);
                        let kern = if lower { self.poly.lower_dy(d, y, xi) } else { self.poly.upper_dy(d, y, xi) };
                        let g = w * half * kern * xi.powf(p);
                        panel.lagrange_at(xi, lag);
                        for (s, l) in slot.iter_mut().zip(lag.iter()) {
                            *s += g * l;
                        }
                    }
                }
            }
        }
        for (o, s) in out.iter_mut().zip(&self.inv_node_pow) {
            *o *= s;
        }
        out
    }
}
