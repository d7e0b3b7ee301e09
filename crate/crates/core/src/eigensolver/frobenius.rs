use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::greens::KernelSpec;
use crate::specialfn::{bessel_j_zero, bisect, falling_factorial, hyp0fq, is_nonpositive_integer, HypergeometricParams};

const TERM_CAP: usize = 10_000;
const REL_TOL: f64 = 1e-16;

/// The `2k` power-series solutions `Y_i(y) = y^i 0F_{2k-1}(...)` of
/// `Y^{(2k)} = (-1)^k lambda y^{-m} Y` for one value of `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalSystem {
    pub spec: KernelSpec,
    pub lambda: f64,
}

impl FundamentalSystem {
    pub fn new(spec: KernelSpec, lambda: f64) -> Result<Self> {
        spec.validate()?;
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda {lambda} is not finite")));
        }
        Ok(FundamentalSystem { spec, lambda })
    }

    fn step(&self) -> f64 {
        2.0 * self.spec.k as f64 - self.spec.m
    }

    /// Lower parameters `(i - s)/(2k - m) + 1`, `s != i`, and the scaled argument factor.
    pub fn params(&self, i: usize) -> Result<(Vec<f64>, f64)> {
        let k = self.spec.k;
        if i >= 2 * k {
            return Err(Error::InvalidParameter(format!("solution index {i} must be below 2k = {}", 2 * k)));
        }
        let a = self.step();
        let lower: Vec<f64> = (0..2 * k)
            .filter(|&s| s != i)
            .map(|s| (i as f64 - s as f64) / a + 1.0)
            .collect();
        if let Some(&b) = lower.iter().find(|&&b| is_nonpositive_integer(b)) {
            return Err(Error::ParameterCollision(b));
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        Ok((lower, sign * self.lambda / a.powi(2 * k as i32)))
    }

    /// `Y_i(y)` through the hypergeometric series.
    pub fn value(&self, i: usize, y: f64) -> Result<f64> {
        if y < 0.0 {
            return Err(Error::Domain(format!("y = {y} must be non-negative")));
        }
        let (lower, c) = self.params(i)?;
        let hp = HypergeometricParams::new(lower, c * y.powf(self.step()))?;
        Ok(y.powi(i as i32) * hyp0fq(&hp)?)
    }

    /// `d^d/dy^d Y_i(y)` by term-wise differentiation of
    /// `sum_n c_n y^{i + n(2k - m)}`; requires `y > 0` unless `d <= i`.
    pub fn derivative(&self, i: usize, d: usize, y: f64) -> Result<f64> {
        let (lower, c) = self.params(i)?;
        let a = self.step();
        if y < 0.0 || (y == 0.0 && d > i) {
            return Err(Error::Domain(format!("derivative {d} of Y_{i} needs y > 0")));
        }
        let mut coeff = 1.0f64;
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        let mut prev_mag = f64::INFINITY;
        for n in 0..TERM_CAP {
            if n > 0 {
                let nf = n as f64;
                let denom = lower.iter().fold(nf, |acc, &b| acc * (b + nf - 1.0));
                coeff *= c / denom;
            }
            let e = i as f64 + n as f64 * a;
            let f = falling_factorial(e, d);
            let term = if f == 0.0 { 0.0 } else { coeff * f * y.powf(e - d as f64) };
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
            if !sum.is_finite() {
                return Err(Error::Overflow(self.lambda));
            }
            let mag = (coeff * y.powf(e)).abs();
            if n > 2 && mag < prev_mag && term.abs() <= REL_TOL * (sum + comp).abs() && mag <= REL_TOL * (sum + comp).abs().max(1e-300) {
                return Ok(sum + comp);
            }
            if coeff == 0.0 {
                return Ok(sum + comp);
            }
            prev_mag = mag;
        }
        Err(Error::ConvergenceFailure { context: "frobenius series", iterations: TERM_CAP })
    }

    /// `Y_i^{(2k)} - (-1)^k lambda y^{-m} Y_i` at `y > 0`.
    pub fn residual(&self, i: usize, y: f64) -> Result<f64> {
        let k = self.spec.k;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let high = self.derivative(i, 2 * k, y)?;
        let v = self.derivative(i, 0, y)?;
        Ok(high - sign * self.lambda * y.powf(-self.spec.m) * v)
    }
}

/// `Y_i(y)` of the fundamental system.
pub fn frobenius_solution(spec: &KernelSpec, lambda: f64, i: usize, y: f64) -> Result<f64> {
    FundamentalSystem::new(*spec, lambda)?.value(i, y)
}

/// `det [Y_{k+c}^{(r)}(1)]_{r,c < k}`; its zeros in `lambda` are the eigenvalues.
pub fn characteristic_determinant(spec: &KernelSpec, lambda: f64) -> Result<f64> {
    let fs = FundamentalSystem::new(*spec, lambda)?;
    let k = spec.k;
    let mut m = DMatrix::<f64>::zeros(k, k);
    for r in 0..k {
        for c in 0..k {
            m[(r, c)] = fs.derivative(k + c, r, 1.0)?;
        }
    }
    Ok(m.determinant())
}

/// First `count` zeros of the characteristic determinant.
///
/// Scans `s = lambda^{1/(2k)}` with step `ds` for sign changes and bisects
/// each bracket in `s`.
pub fn characteristic_roots(spec: &KernelSpec, count: usize, ds: f64) -> Result<Vec<f64>> {
    if !(ds > 0.0) {
        return Err(Error::InvalidParameter(format!("scan step {ds} must be positive")));
    }
    let q = 2.0 * spec.k as f64;
    let det = |s: f64| characteristic_determinant(spec, s.powf(q));
    let mut roots = Vec::with_capacity(count);
    let mut a = ds;
    let mut fa = det(a)?;
    let max_steps = 1_000_000;
    for _ in 0..max_steps {
        if roots.len() == count {
            return Ok(roots);
        }
        let b = a + ds;
        let fb = det(b)?;
        if fa == 0.0 {
            roots.push(a.powf(q));
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            let s = bisect(|s| det(s).unwrap_or(f64::NAN), a, b, fa);
            roots.push(s.powf(q));
        }
        a = b;
        fa = fb;
    }
    Err(Error::ConvergenceFailure { context: "characteristic root scan", iterations: max_steps })
}

/// `lambda_n = ((2 - m) j_{nu,n} / 2)^2`, `nu = 1/(2 - m)`: the `k = 1` eigenvalues.
pub fn bessel_eigenvalues_k1(m: f64, count: usize) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::InvalidParameter(format!("m = {m} must lie in [0, 1)")));
    }
    let nu = 1.0 / (2.0 - m);
    (1..=count)
        .map(|n| bessel_j_zero(nu, n).map(|j| ((2.0 - m) * j / 2.0).powi(2)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::bessel_j;
    use std::f64::consts::PI;

    #[test]
    fn leading_power() {
        let spec = KernelSpec::new(2, 0.5).unwrap();
        for i in 0..4 {
            let y: f64 = 1e-4;
            let v = frobenius_solution(&spec, 80.0, i, y).unwrap();
            assert!((v / y.powi(i as i32) - 1.0).abs() < 1e-9, "i={i}");
        }
    }

    #[test]
    fn k1_is_bessel() {
        let m: f64 = 0.5;
        let spec = KernelSpec::new(1, m).unwrap();
        let lambda: f64 = 23.0;
        let nu = 1.0 / (2.0 - m);
        let shape = |y: f64| y.sqrt() * bessel_j(nu, 2.0 * lambda.sqrt() * y.powf((2.0 - m) / 2.0) / (2.0 - m));
        let c = frobenius_solution(&spec, lambda, 1, 0.5).unwrap() / shape(0.5);
        for j in 1..=10 {
            let y = j as f64 / 10.0;
            let v = frobenius_solution(&spec, lambda, 1, y).unwrap();
            assert!((v - c * shape(y)).abs() <= 1e-8 * v.abs().max(1e-3), "y={y}");
        }
    }

    #[test]
    fn series_routes_agree() {
        let fs = FundamentalSystem::new(KernelSpec::new(2, 1.5).unwrap(), 50.0).unwrap();
        for i in 0..4 {
            for &y in &[0.1, 0.5, 1.0] {
                let a = fs.value(i, y).unwrap();
                let b = fs.derivative(i, 0, y).unwrap();
                assert!((a - b).abs() < 1e-13 * a.abs().max(1e-10));
            }
        }
    }

    #[test]
    fn differential_equation_residual() {
        let fs = FundamentalSystem::new(KernelSpec::new(2, 1.5).unwrap(), 50.0).unwrap();
        for i in 0..4 {
            for j in 0..=80 {
                let y = 0.1 + 0.01 * j as f64;
                assert!(fs.residual(i, y).unwrap().abs() <= 1e-8, "i={i} y={y}");
            }
        }
    }

    #[test]
    fn parameter_collision_reported() {
        let fs = FundamentalSystem { spec: KernelSpec { k: 2, m: 1.0 }, lambda: 3.0 };
        assert_eq!(fs.params(0), Err(Error::ParameterCollision(0.0)));
        assert!(fs.params(4).is_err());
    }

    #[test]
    fn classical_roots() {
        let spec = KernelSpec::new(1, 0.0).unwrap();
        let roots = characteristic_roots(&spec, 5, 0.05).unwrap();
        for (n, r) in roots.iter().enumerate() {
            let exact = ((n + 1) as f64 * PI).powi(2);
            assert!((r - exact).abs() <= 1e-8 * exact, "n={n} {r}");
        }
    }

    #[test]
    fn degenerate_roots_match_bessel_zeros() {
        let spec = KernelSpec::new(1, 0.5).unwrap();
        let bessel = bessel_eigenvalues_k1(0.5, 4).unwrap();
        for &l in &bessel {
            let lo = characteristic_determinant(&spec, l * (1.0 - 1e-6)).unwrap();
            let hi = characteristic_determinant(&spec, l * (1.0 + 1e-6)).unwrap();
            assert!(lo.signum() != hi.signum(), "lambda={l}");
        }
    }

    #[test]
    fn bessel_eigenvalue_list() {
        let v = bessel_eigenvalues_k1(0.0, 3).unwrap();
        for (n, l) in v.iter().enumerate() {
            let exact = ((n + 1) as f64 * PI).powi(2);
            assert!((l - exact).abs() < 1e-10 * exact);
        }
        let w = bessel_eigenvalues_k1(0.5, 6).unwrap();
        assert!(w.windows(2).all(|p| p[1] > p[0]));
        let j = bessel_j_zero(2.0 / 3.0, 1).unwrap();
        assert!((w[0] - (0.75 * j).powi(2)).abs() < 1e-12 * w[0]);
        assert!(bessel_eigenvalues_k1(1.2, 2).is_err());
    }
}
