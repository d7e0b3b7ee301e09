use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::product::ProductIntegrator;
use crate::error::{Error, Result};
use crate::greens::{weighted_kernel, KernelSpec};
use crate::quadrature::QuadratureRule;

const INVERSE_ITERATIONS: usize = 3;

fn sign_k(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Product-integration operator acting on the `Ybar` samples, in the
/// `sqrt(w)`-scaled coordinates where it is nearly symmetric.
fn scaled_operator(pi: &ProductIntegrator) -> DMatrix<f64> {
    let rule = &pi.rule;
    let n = rule.len();
    let m = pi.spec.m;
    let sk = sign_k(pi.spec.k);
    let half_pow: Vec<f64> = rule.nodes.iter().map(|y| y.powf(m / 2.0)).collect();
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let mut s = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let row = pi.row(rule.nodes[i], 0);
        for j in 0..n {
            s[(i, j)] = sk * row[j] * half_pow[j] / half_pow[i] * sw[i] / sw[j];
        }
    }
    s
}

fn symmetrize(s: &DMatrix<f64>) -> DMatrix<f64> {
    let n = s.nrows();
    let mut b = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        b[(i, i)] = s[(i, i)];
        for j in 0..i {
            let v = 0.5 * (s[(i, j)] + s[(j, i)]);
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    b
}

/// Symmetric Nystrom matrix of the weighted kernel in `sqrt(w)` coordinates.
///
/// Entries come from product integration against the interpolated
/// eigenfunction rather than from sampling the kernel at node pairs, which
/// keeps the `xi^{-m}` endpoint behaviour and the diagonal kink exact.
/// The result is symmetrized so that `B = B^T` bit for bit.
pub fn build_nystrom_matrix(spec: &KernelSpec, rule: &QuadratureRule) -> Result<DMatrix<f64>> {
    let pi = ProductIntegrator::new(*spec, rule.clone())?;
    Ok(symmetrize(&scaled_operator(&pi)))
}

/// Textbook Nystrom matrix `sqrt(w_i) Gbar(y_i, y_j) sqrt(w_j)`.
pub fn build_sampled_nystrom_matrix(spec: &KernelSpec, rule: &QuadratureRule) -> Result<DMatrix<f64>> {
    spec.validate()?;
    rule.validate()?;
    let n = rule.len();
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let mut b = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = sw[i] * weighted_kernel(rule.nodes[i], rule.nodes[j], spec) * sw[j];
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    Ok(b)
}

/// Eigenvalues and eigenfunctions of the spectral problem on a quadrature rule.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    pub spec: KernelSpec,
    pub rule: QuadratureRule,
    /// `lambda_n`, ascending.
    pub eigenvalues: Vec<f64>,
    /// `weighted_samples[n][i] = Ybar_n(y_i)`.
    pub weighted_samples: Vec<Vec<f64>>,
    /// `samples[n][i] = Y_n(y_i) = y_i^{m/2} Ybar_n(y_i)`.
    pub samples: Vec<Vec<f64>>,
    pub mode_count: usize,
    integrator: ProductIntegrator,
}

/// Nystrom eigenpairs for the first `mode_count` modes.
///
/// Kernel eigenvalues `mu` come from the symmetric matrix, are polished by
/// inverse iteration on the unsymmetrized operator and mapped to
/// `lambda = 1 / mu`. Samples are normalized to `sum w Ybar^2 = 1` with
/// `Ybar > 0` at the first node.
pub fn solve_basis(spec: &KernelSpec, rule: &QuadratureRule, mode_count: usize) -> Result<SpectralBasis> {
    let pi = ProductIntegrator::new(*spec, rule.clone())?;
    let n = rule.len();
    if mode_count == 0 || mode_count > n / 4 {
        return Err(Error::Resolution(format!(
            "{mode_count} modes requested but a {n}-node rule resolves at most {}",
            n / 4
        )));
    }
    let s = scaled_operator(&pi);
    let b = symmetrize(&s);
    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let mu_max = eig.eigenvalues[order[0]];
    let threshold = 10.0 * f64::EPSILON * mu_max.abs();
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let mut pairs = Vec::with_capacity(mode_count);
    for (idx, &col) in order.iter().take(mode_count).enumerate() {
        let mu0 = eig.eigenvalues[col];
        if !(mu0 > threshold) {
            return Err(Error::PositivityViolation { index: idx, value: mu0 });
        }
        let v0: DVector<f64> = eig.eigenvectors.column(col).into_owned();
        let (mu, v) = refine(&s, mu0, v0);
        if !(mu > threshold) {
            return Err(Error::PositivityViolation { index: idx, value: mu });
        }
        let mut ybar: Vec<f64> = (0..n).map(|i| v[i] / sw[i]).collect();
        let norm: f64 = ybar.iter().zip(&rule.weights).map(|(y, w)| w * y * y).sum::<f64>().sqrt();
        let lead = ybar.iter().copied().find(|v| *v != 0.0).unwrap_or(1.0);
        let scale = lead.signum() / norm;
        ybar.iter_mut().for_each(|v| *v *= scale);
        pairs.push((1.0 / mu, ybar));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let half_pow: Vec<f64> = rule.nodes.iter().map(|y| y.powf(spec.m / 2.0)).collect();
    let samples = pairs
        .iter()
        .map(|(_, yb)| yb.iter().zip(&half_pow).map(|(a, b)| a * b).collect())
        .collect();
    Ok(SpectralBasis {
        spec: *spec,
        rule: rule.clone(),
        eigenvalues: pairs.iter().map(|p| p.0).collect(),
        weighted_samples: pairs.into_iter().map(|p| p.1).collect(),
        samples,
        mode_count,
        integrator: pi,
    })
}

fn refine(s: &DMatrix<f64>, mu0: f64, v0: DVector<f64>) -> (f64, DVector<f64>) {
    let n = s.nrows();
    let shifted = s - DMatrix::<f64>::identity(n, n) * mu0;
    let lu = shifted.lu();
    let mut v = v0.clone();
    for _ in 0..INVERSE_ITERATIONS {
        match lu.solve(&v) {
            Some(next) if next.iter().all(|x| x.is_finite()) => {
                let norm = next.norm();
                if norm == 0.0 {
                    return (mu0, v0);
                }
                v = next / norm;
            }
            _ => return (mu0, v0),
        }
    }
    let mu = v.dot(&(s * &v));
    if !mu.is_finite() || (mu - mu0).abs() > 1e-6 * mu0.abs() {
        return (mu0, v0);
    }
    (mu, v)
}

impl SpectralBasis {
    fn check_mode(&self, n: usize) -> Result<()> {
        if n >= self.mode_count {
            return Err(Error::InvalidParameter(format!("mode {n} >= mode count {}", self.mode_count)));
        }
        Ok(())
    }

    /// Extension row: `Y_n(y) = lambda_n * sum_j row_j Y_n(y_j)`, `d`-th `y`-derivative.
    pub fn extension_row(&self, y: f64, d: usize) -> Vec<f64> {
        let mut r = self.integrator.row(y, d);
        let sk = sign_k(self.spec.k);
        r.iter_mut().for_each(|v| *v *= sk);
        r
    }

    /// `d^d/dy^d Y_n(y)` for every retained mode, `d < 2k`.
    pub fn eigenfunction_derivatives(&self, y: f64, d: usize) -> Result<Vec<f64>> {
        if d >= 2 * self.spec.k {
            return Err(Error::InvalidParameter(format!("derivative order {d} must be below 2k")));
        }
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::Domain(format!("y = {y} outside [0, 1]")));
        }
        let row = self.extension_row(y, d);
        Ok(self
            .samples
            .iter()
            .zip(&self.eigenvalues)
            .map(|(s, l)| l * s.iter().zip(&row).map(|(a, b)| a * b).sum::<f64>())
            .collect())
    }

    /// `Y_n(y)` for every retained mode.
    pub fn eigenfunctions_at(&self, y: f64) -> Result<Vec<f64>> {
        if y == 0.0 {
            return Ok(vec![0.0; self.mode_count]);
        }
        self.eigenfunction_derivatives(y, 0)
    }

    /// `Ybar_n(y)` for every retained mode.
    pub fn weighted_eigenfunctions_at(&self, y: f64) -> Result<Vec<f64>> {
        if y == 0.0 {
            return Ok(vec![0.0; self.mode_count]);
        }
        let scale = y.powf(-self.spec.m / 2.0);
        Ok(self.eigenfunctions_at(y)?.into_iter().map(|v| v * scale).collect())
    }
}

/// `Ybar_n(y)` from the integral equation `Ybar = lambda int Gbar Ybar`.
pub fn nystrom_extend(basis: &SpectralBasis, n: usize, y: f64) -> Result<f64> {
    basis.check_mode(n)?;
    if y == 0.0 {
        return Ok(0.0);
    }
    Ok(unweighted_eigenfunction(basis, n, y)? * y.powf(-basis.spec.m / 2.0))
}

/// `Y_n(y) = y^{m/2} Ybar_n(y)`.
pub fn unweighted_eigenfunction(basis: &SpectralBasis, n: usize, y: f64) -> Result<f64> {
    basis.check_mode(n)?;
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain(format!("y = {y} outside [0, 1]")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let row = basis.extension_row(y, 0);
    Ok(basis.eigenvalues[n] * basis.samples[n].iter().zip(&row).map(|(a, b)| a * b).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::bessel_eigenvalues_k1;
    use crate::quadrature::gauss_rule;
    use crate::specialfn::bessel_j;
    use std::f64::consts::PI;

    fn basis(k: usize, m: f64, n: usize, modes: usize) -> SpectralBasis {
        solve_basis(&KernelSpec::new(k, m).unwrap(), &gauss_rule(n).unwrap(), modes).unwrap()
    }

    #[test]
    fn matrices_are_symmetric() {
        let spec = KernelSpec::new(2, 0.5).unwrap();
        let rule = gauss_rule(40).unwrap();
        let b = build_nystrom_matrix(&spec, &rule).unwrap();
        assert_eq!(b, b.transpose());
        let c = build_sampled_nystrom_matrix(&spec, &rule).unwrap();
        assert_eq!(c, c.transpose());
    }

    #[test]
    fn largest_kernel_eigenvalue_classical() {
        let spec = KernelSpec::new(1, 0.0).unwrap();
        let rule = gauss_rule(200).unwrap();
        for (b, tol) in [
            (build_nystrom_matrix(&spec, &rule).unwrap(), 1e-12),
            (build_sampled_nystrom_matrix(&spec, &rule).unwrap(), 1e-4),
        ] {
            let mu = SymmetricEigen::new(b).eigenvalues.max();
            assert!((mu * PI * PI - 1.0).abs() < tol, "{mu}");
        }
    }

    #[test]
    fn kernel_spectrum_is_positive() {
        for &(k, m) in &[(1usize, 0.5), (2, 1.5)] {
            let spec = KernelSpec::new(k, m).unwrap();
            let rule = gauss_rule(120).unwrap();
            let sampled = SymmetricEigen::new(build_sampled_nystrom_matrix(&spec, &rule).unwrap()).eigenvalues;
            assert!(sampled.iter().all(|&x| x > 0.0), "k={k} m={m} {}", sampled.min());
            // the symmetrized product operator is positive on every mode it resolves
            let mut v: Vec<f64> = SymmetricEigen::new(build_nystrom_matrix(&spec, &rule).unwrap())
                .eigenvalues
                .iter()
                .copied()
                .collect();
            v.sort_by(|a, b| b.total_cmp(a));
            assert!(v[..rule.len() / 4].iter().all(|&x| x > 0.0), "k={k} m={m}");
        }
    }

    #[test]
    fn classical_eigenpairs() {
        let b = basis(1, 0.0, 200, 10);
        for (n, l) in b.eigenvalues.iter().enumerate() {
            let exact = ((n + 1) as f64 * PI).powi(2);
            assert!((l / exact - 1.0).abs() <= 1e-6, "n={n}");
        }
        let v = nystrom_extend(&b, 0, 0.5).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-6);
        assert_eq!(nystrom_extend(&b, 0, 0.0).unwrap(), 0.0);
        assert!(nystrom_extend(&b, 10, 0.5).is_err());
        assert_eq!(unweighted_eigenfunction(&b, 2, 0.3).unwrap(), nystrom_extend(&b, 2, 0.3).unwrap());
    }

    #[test]
    fn degenerate_eigenvalues_match_bessel() {
        let b = basis(1, 0.5, 200, 10);
        let exact = bessel_eigenvalues_k1(0.5, 10).unwrap();
        for (l, e) in b.eigenvalues.iter().zip(&exact) {
            assert!((l / e - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn orthonormal_samples() {
        for &m in &[0.0, 0.5] {
            let b = basis(1, m, 200, 10);
            for i in 0..10 {
                for j in 0..10 {
                    let g: f64 = (0..b.rule.len())
                        .map(|q| b.rule.weights[q] * b.weighted_samples[i][q] * b.weighted_samples[j][q])
                        .sum();
                    let d = if i == j { 1.0 } else { 0.0 };
                    assert!((g - d).abs() <= 1e-8, "m={m} i={i} j={j} {g}");
                }
                assert!(b.weighted_samples[i][0] > 0.0);
            }
        }
    }

    #[test]
    fn extension_reproduces_nodes() {
        let b = basis(2, 0.5, 120, 6);
        for n in 0..6 {
            for &i in &[0usize, 17, 60, 119] {
                let y = b.rule.nodes[i];
                let v = nystrom_extend(&b, n, y).unwrap();
                assert!((v - b.weighted_samples[n][i]).abs() < 1e-10 * b.weighted_samples[n][i].abs().max(1.0));
            }
        }
    }

    #[test]
    fn degenerate_eigenfunction_shape() {
        let b = basis(1, 0.5, 200, 4);
        let lam = b.eigenvalues[0];
        let shape = |y: f64| y.sqrt() * bessel_j(2.0 / 3.0, 2.0 * lam.sqrt() / 1.5 * y.powf(0.75));
        let c = unweighted_eigenfunction(&b, 0, 0.5).unwrap() / shape(0.5);
        for j in 1..=10 {
            let y = j as f64 / 10.0 - 0.05;
            let v = unweighted_eigenfunction(&b, 0, y).unwrap();
            assert!((v - c * shape(y)).abs() <= 1e-5 * v.abs(), "y={y}");
        }
    }

    #[test]
    fn boundary_order() {
        let b = basis(2, 1.5, 160, 4);
        let ratios: Vec<f64> = (4..=12)
            .map(|e| {
                let y = 2f64.powi(-e);
                unweighted_eigenfunction(&b, 0, y).unwrap().abs() / y.powi(2)
            })
            .collect();
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        assert!(max < 1e3 && ratios.iter().all(|r| r.is_finite()), "{ratios:?}");
        assert!((ratios[8] / ratios[7] - 1.0).abs() < 0.1);
    }

    #[test]
    fn resolution_guard() {
        let spec = KernelSpec::new(1, 0.5).unwrap();
        let rule = gauss_rule(40).unwrap();
        assert!(matches!(solve_basis(&spec, &rule, 11), Err(Error::Resolution(_))));
        assert!(matches!(solve_basis(&spec, &rule, 0), Err(Error::Resolution(_))));
        assert!(solve_basis(&spec, &rule, 10).is_ok());
    }

    #[test]
    fn rayleigh_identity_k1() {
        let b = basis(1, 0.5, 200, 6);
        let check = gauss_rule(240).unwrap();
        let mut energy = vec![0.0; 6];
        for (&y, &w) in check.nodes.iter().zip(&check.weights) {
            let d = b.eigenfunction_derivatives(y, 1).unwrap();
            for n in 0..6 {
                energy[n] += w * d[n] * d[n];
            }
        }
        for n in 0..6 {
            assert!((energy[n] / b.eigenvalues[n] - 1.0).abs() < 1e-4, "n={n}");
        }
    }

    #[test]
    fn graded_rule_option() {
        use crate::quadrature::graded_rule;
        let spec = KernelSpec::new(1, 0.75).unwrap();
        let b = solve_basis(&spec, &graded_rule(6, 1.6, 32).unwrap(), 8).unwrap();
        let exact = bessel_eigenvalues_k1(0.75, 8).unwrap();
        for (l, e) in b.eigenvalues.iter().zip(&exact) {
            assert!((l / e - 1.0).abs() <= 1e-6, "{l} {e}");
        }
    }
}
