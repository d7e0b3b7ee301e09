//! Green's function of `Y^{(2k)} = f` with `Y^{(s)}(0) = Y^{(s)}(1) = 0`, `s < k`,
//! and its weighted symmetric kernel.

use crate::error::{Error, Result};
use crate::specialfn::{binomial, falling_factorial};

pub const MAX_K: usize = 8;

/// Half order `k` and degeneracy exponent `m` of the spectral problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub k: usize,
    pub m: f64,
}

impl KernelSpec {
    pub fn new(k: usize, m: f64) -> Result<Self> {
        let s = KernelSpec { k, m };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > MAX_K {
            return Err(Error::InvalidParameter(format!("k = {} must lie in 1..={MAX_K}", self.k)));
        }
        let m = self.m;
        if !m.is_finite() || m < 0.0 || m >= self.k as f64 || (m > 0.0 && m == m.trunc()) {
            return Err(Error::InvalidParameter(format!(
                "m = {m} must satisfy 0 <= m < k = {} and not be a positive integer",
                self.k
            )));
        }
        Ok(())
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_K {
        return Err(Error::InvalidParameter(format!("k = {k} must lie in 1..={MAX_K}")));
    }
    Ok(())
}

fn lower_sum(y: f64, xi: f64, k: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..k {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let c1 = binomial(2 * k - 1, i);
        let ypow = y.powi((k - i - 1) as i32);
        for j in 0..(k - i) {
            s += sign * c1 * binomial(k - 1 + j, j) * ypow * xi.powi((j + i) as i32);
        }
    }
    (1.0 - xi).powi(k as i32) * y.powi(k as i32) * s
}

fn in_unit(v: f64) -> bool {
    (0.0..=1.0).contains(&v)
}

/// Branch `G_1` (without the `-1/(2k-1)!` factor) on `0 <= y <= xi <= 1`.
pub fn green_lower(y: f64, xi: f64, k: usize) -> Result<f64> {
    check_k(k)?;
    if !(in_unit(y) && in_unit(xi) && y <= xi) {
        return Err(Error::Domain(format!("green_lower needs 0 <= y <= xi <= 1, got ({y}, {xi})")));
    }
    Ok(lower_sum(y, xi, k))
}

/// Branch `G_2` on `0 <= xi <= y <= 1`: `G_1` with the arguments exchanged.
pub fn green_upper(y: f64, xi: f64, k: usize) -> Result<f64> {
    check_k(k)?;
    if !(in_unit(y) && in_unit(xi) && xi <= y) {
        return Err(Error::Domain(format!("green_upper needs 0 <= xi <= y <= 1, got ({y}, {xi})")));
    }
    Ok(lower_sum(xi, y, k))
}

fn prefactor(k: usize) -> f64 {
    -1.0 / falling_factorial((2 * k - 1) as f64, 2 * k - 1)
}

/// `G(y, xi)` on the closed unit square.
pub fn green(y: f64, xi: f64, k: usize) -> f64 {
    debug_assert!((1..=MAX_K).contains(&k));
    let branch = if y <= xi { lower_sum(y, xi, k) } else { lower_sum(xi, y, k) };
    prefactor(k) * branch
}

/// `xi^{-m/2} (-1)^k G(y, xi) y^{-m/2}`, extended by 0 where `y` or `xi` vanishes.
pub fn weighted_kernel(y: f64, xi: f64, spec: &KernelSpec) -> f64 {
    if y <= 0.0 || xi <= 0.0 {
        return 0.0;
    }
    let sign = if spec.k % 2 == 0 { 1.0 } else { -1.0 };
    let g = sign * green(y, xi, spec.k);
    if spec.m == 0.0 {
        g
    } else {
        g / (y * xi).powf(spec.m / 2.0)
    }
}

/// Monomial form `sum c y^p xi^q` of the region-`y <= xi` branch of `G`,
/// prefactor included. Used for `y`-derivatives of the kernel.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct GreenPolynomial {
    pub k: usize,
    terms: Vec<(i32, i32, f64)>,
}

impl GreenPolynomial {
    pub fn new(k: usize) -> Self {
        let mut dense = vec![vec![0.0; 2 * k + 1]; 2 * k + 1];
        for i in 0..k {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            for j in 0..(k - i) {
                let c = sign * binomial(2 * k - 1, i) * binomial(k - 1 + j, j);
                for l in 0..=k {
                    let cl = if l % 2 == 0 { 1.0 } else { -1.0 } * binomial(k, l);
                    dense[2 * k - i - 1][j + i + l] += c * cl;
                }
            }
        }
        let pre = prefactor(k);
        let mut terms = vec![];
        for (p, row) in dense.iter().enumerate() {
            for (q, &c) in row.iter().enumerate() {
                if c != 0.0 {
                    terms.push((p as i32, q as i32, pre * c));
                }
            }
        }
        GreenPolynomial { k, terms }
    }

    fn eval_terms(&self, d: usize, u: f64, v: f64, swap: bool) -> f64 {
        // d-th derivative in the first slot variable of the selected orientation
        let mut s = 0.0;
        for &(p, q, c) in &self.terms {
            let (pu, pv) = if swap { (q, p) } else { (p, q) };
            if (pu as usize) < d {
                continue;
            }
            let f = falling_factorial(pu as f64, d);
            s += c * f * u.powi(pu - d as i32) * v.powi(pv);
        }
        s
    }

    /// `d^d/dy^d` of the branch valid for `y <= xi`, at any `(y, xi)`.
    pub fn lower_dy(&self, d: usize, y: f64, xi: f64) -> f64 {
        self.eval_terms(d, y, xi, false)
    }

    /// `d^d/dy^d` of the branch valid for `xi <= y`, at any `(y, xi)`.
    pub fn upper_dy(&self, d: usize, y: f64, xi: f64) -> f64 {
        self.eval_terms(d, y, xi, true)
    }

    #[cfg(test)]
    pub fn dy(&self, d: usize, y: f64, xi: f64) -> f64 {
        if y <= xi {
            self.lower_dy(d, y, xi)
        } else {
            self.upper_dy(d, y, xi)
        }
    }
}
