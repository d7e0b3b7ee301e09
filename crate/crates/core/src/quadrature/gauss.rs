use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::specialfn::ln_gamma;

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Gauss rule on `[0, 1]` for the weight `t^p`, `p > -1`.
///
/// Golub-Welsch on the Jacobi matrix of the `(0, p)` Jacobi polynomials,
/// then mapped from `[-1, 1]`.
pub fn gauss_jacobi_unit(n: usize, p: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("rule needs at least one node".into()));
    }
    if !(p > -1.0) {
        return Err(Error::InvalidParameter(format!("weight exponent {p} must exceed -1")));
    }
    let (a, b) = (0.0f64, p);
    let ab = a + b;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let nf = i as f64;
        let denom = (2.0 * nf + ab) * (2.0 * nf + ab + 2.0);
        jac[(i, i)] = if denom == 0.0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / denom };
        if i + 1 < n {
            let m = nf + 1.0;
            let s = 2.0 * m + ab;
            let off = 4.0 * m * (m + a) * (m + b) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0));
            jac[(i, i + 1)] = off.sqrt();
            jac[(i + 1, i)] = off.sqrt();
        }
    }
    let ln_mu0 = (ab + 1.0) * 2f64.ln() + ln_gamma(a + 1.0)? + ln_gamma(b + 1.0)? - ln_gamma(ab + 2.0)?;
    let mu0 = ln_mu0.exp();
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let scale = 2f64.powf(-(p + 1.0));
    let nodes = pairs.iter().map(|&(x, _)| 0.5 * (x + 1.0)).collect();
    let weights = pairs.iter().map(|&(_, w)| w * scale).collect();
    Ok((nodes, weights))
}
