//! Series solution `u(x, y) = sum_n X_n(x) Y_n(y)` of the degenerate problem,
//! its Fourier data and the verification suite.

use crate::eigensolver::SpectralBasis;
use crate::error::{Error, Result};
use crate::fracode::ModeSolution;
use crate::greens::{green, weighted_kernel, KernelSpec};
use crate::quadrature::integrate_adaptive;
use crate::specialfn::{binomial, falling_factorial};

/// Boundary function for the initial conditions in `x`.
///
/// `Bump` is `[y(1-y)]^q P(y)` with `P(y) = sum coeffs[i] y^i`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryData {
    Zero,
    Bump { q: usize, coeffs: Vec<f64> },
}

impl BoundaryData {
    /// `[y(1-y)]^q`.
    pub fn bump(q: usize) -> Self {
        BoundaryData::Bump { q, coeffs: vec![1.0] }
    }

    /// Smallest `q` accepted for half order `k`.
    pub fn min_order(k: usize) -> usize {
        4 * k
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        if let BoundaryData::Bump { q, coeffs } = self {
            if *q < Self::min_order(k) {
                return Err(Error::InvalidParameter(format!(
                    "q = {q} must be at least 4k = {}",
                    Self::min_order(k)
                )));
            }
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidParameter("polynomial coefficients must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            BoundaryData::Zero => true,
            BoundaryData::Bump { coeffs, .. } => coeffs.iter().all(|&c| c == 0.0),
        }
    }

    /// Monomial coefficients, index = power of `y`.
    pub fn monomials(&self) -> Vec<f64> {
        match self {
            BoundaryData::Zero => vec![],
            BoundaryData::Bump { q, coeffs } => {
                let mut out = vec![0.0; 2 * q + coeffs.len()];
                for l in 0..=*q {
                    let b = if l % 2 == 0 { 1.0 } else { -1.0 } * binomial(*q, l);
                    for (i, &c) in coeffs.iter().enumerate() {
                        out[q + l + i] += b * c;
                    }
                }
                out
            }
        }
    }

    pub fn value(&self, y: f64) -> f64 {
        match self {
            BoundaryData::Zero => 0.0,
            BoundaryData::Bump { q, coeffs } => {
                let p = coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c);
                (y * (1.0 - y)).powi(*q as i32) * p
            }
        }
    }

    /// `int_0^1 y^{-m} [(y^m f^{(2k)})^{(2k)}]^2 dy`, exact for the polynomial family.
    pub fn bessel_bound(&self, k: usize, m: f64) -> f64 {
        let two_k = 2 * k;
        // (y^m f^{(2k)})^{(2k)} = sum g_p y^{p - 4k + m}
        let g: Vec<(f64, f64)> = self
            .monomials()
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0.0)
            .map(|(p, &a)| {
                let pf = p as f64;
                let c = a * falling_factorial(pf, two_k) * falling_factorial(pf - two_k as f64 + m, two_k);
                (pf - 2.0 * two_k as f64 + m, c)
            })
            .filter(|&(_, c)| c != 0.0)
            .collect();
        let mut s = 0.0;
        for &(e1, c1) in &g {
            for &(e2, c2) in &g {
                s += c1 * c2 / (e1 + e2 - m + 1.0);
            }
        }
        s
    }
}

/// `(k, m, alpha)` with the boundary data `phi` (derivative condition) and `psi` (limit condition).
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub k: usize,
    pub m: f64,
    pub alpha: f64,
    pub phi: BoundaryData,
    pub psi: BoundaryData,
}

impl ProblemSpec {
    pub fn new(k: usize, m: f64, alpha: f64, phi: BoundaryData, psi: BoundaryData) -> Result<Self> {
        let s = ProblemSpec { k, m, alpha, phi, psi };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        KernelSpec::new(self.k, self.m)?;
        if !(self.alpha > 1.0 && self.alpha < 2.0) {
            return Err(Error::InvalidParameter(format!("alpha = {} must satisfy 1 < alpha < 2", self.alpha)));
        }
        self.phi.validate(self.k)?;
        self.psi.validate(self.k)
    }

    pub fn kernel(&self) -> KernelSpec {
        KernelSpec { k: self.k, m: self.m }
    }
}

/// `f_n = int y^{-m} f Y_n dy = int (y^{-m/2} f) Ybar_n dy` by the basis rule.
pub fn fourier_coefficient<F: Fn(f64) -> f64>(f: F, basis: &SpectralBasis, n: usize) -> Result<f64> {
    if n >= basis.mode_count {
        return Err(Error::InvalidParameter(format!("mode {n} >= mode count {}", basis.mode_count)));
    }
    let h = basis.spec.m / 2.0;
    Ok(basis
        .rule
        .nodes
        .iter()
        .zip(&basis.rule.weights)
        .zip(&basis.weighted_samples[n])
        .map(|((&y, &w), &yb)| w * y.powf(-h) * f(y) * yb)
        .sum())
}

fn coefficients(data: &BoundaryData, basis: &SpectralBasis, count: usize) -> Result<Vec<f64>> {
    if data.is_zero() {
        return Ok(vec![0.0; count]);
    }
    (0..count).map(|n| fourier_coefficient(|y| data.value(y), basis, n)).collect()
}

/// Truncated series solution.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub spec: ProblemSpec,
    pub basis: SpectralBasis,
    pub modes: Vec<ModeSolution>,
    pub truncation: usize,
}

/// Builds the first `truncation` modes from the Fourier coefficients of `phi` and `psi`.
pub fn assemble(spec: &ProblemSpec, basis: &SpectralBasis, truncation: usize) -> Result<SeriesSolution> {
    spec.validate()?;
    if basis.spec != spec.kernel() {
        return Err(Error::InvalidParameter("basis was built for a different (k, m)".into()));
    }
    if truncation > basis.mode_count {
        return Err(Error::Resolution(format!(
            "truncation {truncation} exceeds the {} resolved modes",
            basis.mode_count
        )));
    }
    let phi = coefficients(&spec.phi, basis, truncation)?;
    let psi = coefficients(&spec.psi, basis, truncation)?;
    let modes = (0..truncation)
        .map(|n| ModeSolution::new(basis.eigenvalues[n], spec.alpha, phi[n], psi[n]))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeriesSolution { spec: spec.clone(), basis: basis.clone(), modes, truncation })
}

impl SeriesSolution {
    fn eigen_values(&self, y: f64) -> Result<Vec<f64>> {
        let mut v = self.basis.eigenfunctions_at(y)?;
        v.truncate(self.truncation);
        Ok(v)
    }

    /// `u(x, y)`.
    pub fn value(&self, x: f64, y: f64) -> Result<f64> {
        let ys = self.eigen_values(y)?;
        let mut s = 0.0;
        for (mode, yn) in self.modes.iter().zip(&ys) {
            s += mode.value(x)? * yn;
        }
        Ok(s)
    }

    /// `sum psi_n Y_n(y)` and `sum phi_n Y_n(y)`: the truncated initial data.
    pub fn initial_data(&self, y: f64) -> Result<(f64, f64)> {
        let ys = self.eigen_values(y)?;
        let psi = self.modes.iter().zip(&ys).map(|(m, v)| m.psi_n * v).sum();
        let phi = self.modes.iter().zip(&ys).map(|(m, v)| m.phi_n * v).sum();
        Ok((psi, phi))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldMetadata {
    pub k: usize,
    pub m: f64,
    pub alpha: f64,
    pub truncation: usize,
    pub quadrature_nodes: usize,
}

/// `values[i][j] = u(x_grid[i], y_grid[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub x_grid: Vec<f64>,
    pub y_grid: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub metadata: FieldMetadata,
}

impl Field {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |a, v| a.max(v.abs()))
    }
}

fn check_grid(name: &str, g: &[f64]) -> Result<()> {
    if g.is_empty() {
        return Err(Error::Domain(format!("{name} grid is empty")));
    }
    if g.iter().any(|&v| !(v > 0.0 && v <= 1.0)) || g.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!("{name} grid must be strictly increasing in (0, 1]")));
    }
    Ok(())
}

pub fn evaluate(solution: &SeriesSolution, x_grid: &[f64], y_grid: &[f64]) -> Result<Field> {
    check_grid("x", x_grid)?;
    check_grid("y", y_grid)?;
    let yv = y_grid.iter().map(|&y| solution.eigen_values(y)).collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let xv = solution.modes.iter().map(|m| m.value(x)).collect::<Result<Vec<_>>>()?;
        values.push(yv.iter().map(|ys| xv.iter().zip(ys).map(|(a, b)| a * b).sum()).collect());
    }
    Ok(Field {
        x_grid: x_grid.to_vec(),
        y_grid: y_grid.to_vec(),
        values,
        metadata: FieldMetadata {
            k: solution.spec.k,
            m: solution.spec.m,
            alpha: solution.spec.alpha,
            truncation: solution.truncation,
            quadrature_nodes: solution.basis.rule.len(),
        },
    })
}

/// Errors of the two initial limits at one probe `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeError {
    pub x: f64,
    /// `max_y |x^{2-a} u - sum psi_n Y_n|`.
    pub value: f64,
    /// `max_y |d/dx (x^{2-a} u) - sum phi_n Y_n|`.
    pub derivative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialConditionReport {
    pub probes: Vec<ProbeError>,
    /// Entry for the smallest probe.
    pub finest: ProbeError,
}

/// Smallest probe accepted by [`verify_initial_conditions`].
pub const MIN_PROBE: f64 = 1e-4;

pub fn verify_initial_conditions(
    solution: &SeriesSolution,
    x_probe: &[f64],
    y_samples: &[f64],
) -> Result<InitialConditionReport> {
    if x_probe.is_empty() || x_probe.iter().any(|&x| !(x >= MIN_PROBE && x <= 1.0)) {
        return Err(Error::Domain(format!("probes must lie in [{MIN_PROBE}, 1]")));
    }
    check_grid("y", y_samples)?;
    let ys = y_samples.iter().map(|&y| solution.eigen_values(y)).collect::<Result<Vec<_>>>()?;
    let mut probes = Vec::with_capacity(x_probe.len());
    for &x in x_probe {
        let sv = solution.modes.iter().map(|m| m.scaled_value(x)).collect::<Result<Vec<_>>>()?;
        let sd = solution.modes.iter().map(|m| m.scaled_derivative(x)).collect::<Result<Vec<_>>>()?;
        let (mut ev, mut ed) = (0.0f64, 0.0f64);
        for yn in &ys {
            let mut dv = 0.0;
            let mut dd = 0.0;
            for (n, mode) in solution.modes.iter().enumerate() {
                dv += (sv[n] - mode.psi_n) * yn[n];
                dd += (sd[n] - mode.phi_n) * yn[n];
            }
            ev = ev.max(dv.abs());
            ed = ed.max(dd.abs());
        }
        probes.push(ProbeError { x, value: ev, derivative: ed });
    }
    let finest = *probes.iter().min_by(|a, b| a.x.total_cmp(&b.x)).expect("non-empty probes");
    Ok(InitialConditionReport { probes, finest })
}

/// Residual of `(-1)^{k+1} D^a u - y^m d^{2k}u/dy^{2k}` on a grid, relative to `scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// Mode-wise route: `D^a X_n` by the power rule, `Y_n^{(2k)}` by the eigen-relation.
    pub analytic: f64,
    /// `k = 1` only: second `y`-derivative by finite differences of the extension.
    pub finite_difference: Option<f64>,
    /// `max |y^m d^{2k}u/dy^{2k}|` over the grid.
    pub scale: f64,
}

/// Step of the finite-difference route in [`verify_residual`].
pub const RESIDUAL_FD_STEP: f64 = 1e-3;

pub fn verify_residual(solution: &SeriesSolution, x_grid: &[f64], y_grid: &[f64]) -> Result<ResidualReport> {
    check_grid("x", x_grid)?;
    check_grid("y", y_grid)?;
    if x_grid[0] < 0.05 || y_grid[0] < 0.1 || *y_grid.last().unwrap() > 0.9 {
        return Err(Error::Domain("residual grid must satisfy x >= 0.05 and 0.1 <= y <= 0.9".into()));
    }
    let k = solution.spec.k;
    let m = solution.spec.m;
    let sign_lhs = if k % 2 == 1 { 1.0 } else { -1.0 };
    let sign_eig = -sign_lhs;
    let h = RESIDUAL_FD_STEP;
    let mut analytic = 0.0f64;
    let mut fd_max = 0.0f64;
    let mut scale = 0.0f64;
    for &x in x_grid {
        let xv = solution.modes.iter().map(|md| md.value(x)).collect::<Result<Vec<_>>>()?;
        let dv = solution.modes.iter().map(|md| md.rl_derivative(x)).collect::<Result<Vec<_>>>()?;
        for &y in y_grid {
            let ys = solution.eigen_values(y)?;
            let mut lhs = 0.0;
            let mut rhs = 0.0;
            for (n, mode) in solution.modes.iter().enumerate() {
                lhs += sign_lhs * dv[n] * ys[n];
                // y^m * (-1)^k lambda y^{-m} Y_n
                rhs += xv[n] * sign_eig * mode.lambda * ys[n];
            }
            analytic = analytic.max((lhs - rhs).abs());
            scale = scale.max(rhs.abs());
            if k == 1 {
                let mut u = [0.0; 5];
                for (slot, j) in u.iter_mut().zip(-2i32..=2) {
                    let yy = solution.eigen_values(y + j as f64 * h)?;
                    *slot = xv.iter().zip(&yy).map(|(a, b)| a * b).sum();
                }
                let uyy = (-u[0] + 16.0 * u[1] - 30.0 * u[2] + 16.0 * u[3] - u[4]) / (12.0 * h * h);
                fd_max = fd_max.max((lhs - y.powf(m) * uyy).abs());
            }
        }
    }
    let rel = |v: f64| if scale > 0.0 { v / scale } else { v };
    Ok(ResidualReport {
        analytic: rel(analytic),
        finite_difference: (k == 1).then(|| rel(fd_max)),
        scale,
    })
}

/// Truncated eigen-expansion of a function.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub coefficients: Vec<f64>,
    /// `max |f - sum f_n Y_n|` on `y = i/100`, `i = 0..=100`.
    pub sup_error: f64,
}

pub fn expand_function<F: Fn(f64) -> f64>(f: F, basis: &SpectralBasis, n: usize) -> Result<Expansion> {
    if n > basis.mode_count {
        return Err(Error::Resolution(format!("{n} terms exceed the {} resolved modes", basis.mode_count)));
    }
    let coefficients = (0..n).map(|j| fourier_coefficient(&f, basis, j)).collect::<Result<Vec<_>>>()?;
    let mut sup_error = 0.0f64;
    for i in 0..=100 {
        let y = i as f64 / 100.0;
        let ys = basis.eigenfunctions_at(y)?;
        let s: f64 = coefficients.iter().zip(&ys).map(|(c, v)| c * v).sum();
        sup_error = sup_error.max((f(y) - s).abs());
    }
    Ok(Expansion { coefficients, sup_error })
}

/// Interior sample grid `y = i/22`, `i = 1..=21`, of the kernel reconstruction.
pub fn mercer_grid() -> Vec<f64> {
    (1..=21).map(|i| i as f64 / 22.0).collect()
}

/// `max |Gbar(y, xi) - sum_{n<N} Ybar_n(y) Ybar_n(xi) / lambda_n|` on the 21 x 21 grid.
pub fn mercer_reconstruction(basis: &SpectralBasis, n: usize) -> Result<f64> {
    if n > basis.mode_count {
        return Err(Error::Resolution(format!("{n} terms exceed the {} resolved modes", basis.mode_count)));
    }
    let grid = mercer_grid();
    let yb = grid.iter().map(|&y| basis.weighted_eigenfunctions_at(y)).collect::<Result<Vec<_>>>()?;
    let mut err = 0.0f64;
    for (i, &y) in grid.iter().enumerate() {
        for (j, &xi) in grid.iter().enumerate() {
            let s: f64 = (0..n).map(|t| yb[i][t] * yb[j][t] / basis.eigenvalues[t]).sum();
            err = err.max((weighted_kernel(y, xi, &basis.spec) - s).abs());
        }
    }
    Ok(err)
}

/// `sum 1/lambda_n` over the resolved modes against `int_0^1 Gbar(y, y) dy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceCheck {
    pub partial: f64,
    pub integral: f64,
}

pub fn kernel_trace(basis: &SpectralBasis) -> Result<TraceCheck> {
    let spec = basis.spec;
    let integral = integrate_adaptive(|y| weighted_kernel(y, y, &spec), 0.0, 1.0, 1e-12, 1e-300, 2000)?;
    Ok(TraceCheck { partial: basis.eigenvalues.iter().map(|l| 1.0 / l).sum(), integral })
}

/// `int_0^1 xi^{-m} G(y, xi)^2 dxi`.
pub fn kernel_square_norm(spec: &KernelSpec, y: f64) -> Result<f64> {
    let f = |xi: f64| if xi <= 0.0 { 0.0 } else { xi.powf(-spec.m) * green(y, xi, spec.k).powi(2) };
    Ok(integrate_adaptive(f, 0.0, y, 1e-12, 1e-300, 2000)? + integrate_adaptive(f, y, 1.0, 1e-12, 1e-300, 2000)?)
}

/// Largest ratio `sum_{n<N} (Y_n(y)/lambda_n)^2 / int xi^{-m} G(y,xi)^2 dxi` over
/// the samples and every `N` up to the mode count.
pub fn kernel_bessel_ratio(basis: &SpectralBasis, ys: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &y in ys {
        let rhs = kernel_square_norm(&basis.spec, y)?;
        let vals = basis.eigenfunctions_at(y)?;
        let mut partial = 0.0;
        for (v, l) in vals.iter().zip(&basis.eigenvalues) {
            partial += (v / l).powi(2);
            worst = worst.max(partial / rhs);
        }
    }
    Ok(worst)
}

/// Partial sums of `lambda_n^4 f_n^2` and their Bessel bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientBound {
    pub partial_sums: Vec<f64>,
    pub bound: f64,
}

pub fn coefficient_bound(data: &BoundaryData, basis: &SpectralBasis, n: usize) -> Result<CoefficientBound> {
    let c = coefficients(data, basis, n.min(basis.mode_count))?;
    let mut s = 0.0;
    let partial_sums = c
        .iter()
        .zip(&basis.eigenvalues)
        .map(|(f, l)| {
            s += l.powi(4) * f * f;
            s
        })
        .collect();
    Ok(CoefficientBound { partial_sums, bound: data.bessel_bound(basis.spec.k, basis.spec.m) })
}

fn tail_sweep() -> Vec<f64> {
    (0..=64).map(|i| 10f64.powf(-3.0 + 3.0 * i as f64 / 64.0)).collect()
}

/// Reported (not certified) bound on `sup_y |sum_{n >= N} X_n(x) Y_n(y)|`.
///
/// `|X_n(x)| <= M_1 (|phi_n| + |psi_n| / x)` with `M_1` fitted over the
/// resolved modes and an `x` sweep; the coefficient tails come from
/// Cauchy-Schwarz against the Bessel bound on `lambda_n^2 f_n`, with
/// `lambda_n ~ n^{2k}` extrapolated past the resolved modes.
pub fn tail_bound(solution: &SeriesSolution, x: f64) -> Result<f64> {
    let basis = &solution.basis;
    let spec = &solution.spec;
    let (n, l) = (solution.truncation, basis.mode_count);
    let a = spec.alpha;
    let mut m1 = 0.0f64;
    for &lam in &basis.eigenvalues {
        let unit_phi = ModeSolution::new(lam, a, 1.0, 0.0)?;
        let unit_psi = ModeSolution::new(lam, a, 0.0, 1.0)?;
        for xs in tail_sweep() {
            m1 = m1.max(unit_phi.value(xs)?.abs()).max(xs * unit_psi.value(xs)?.abs());
        }
    }
    let mut y_max = 0.0f64;
    for i in 0..=100 {
        let v = basis.eigenfunctions_at(i as f64 / 100.0)?;
        y_max = v.iter().fold(y_max, |acc, t| acc.max(t.abs()));
    }
    let lam_l = basis.eigenvalues[l - 1];
    let inv4: f64 = basis.eigenvalues[n.min(l)..].iter().map(|v| v.powi(-4)).sum::<f64>()
        + lam_l.powi(-4) * l as f64 / (8.0 * spec.k as f64 - 1.0);
    let tail = |data: &BoundaryData| -> Result<f64> {
        if data.is_zero() {
            return Ok(0.0);
        }
        let cb = coefficient_bound(data, basis, n)?;
        let used = cb.partial_sums.last().copied().unwrap_or(0.0);
        Ok((inv4 * (cb.bound - used).max(0.0)).sqrt())
    };
    Ok(m1 * y_max * (tail(&spec.phi)? + tail(&spec.psi)? / x))
}
