use std::collections::BTreeMap;

use degfrac_core::assembly::{
    assemble, coefficient_bound, evaluate, expand_function, kernel_bessel_ratio, kernel_trace, tail_bound,
    verify_initial_conditions, verify_residual, BoundaryData, Field, SeriesSolution,
};
use degfrac_core::eigensolver::{solve_basis, SpectralBasis};
use degfrac_core::quadrature::gauss_rule;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{NumericContext, Result};

/// One named verification result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(value: f64, bound: f64) -> Self {
        Check { value, bound, pass: value <= bound }
    }

    fn above(value: f64, bound: f64) -> Self {
        Check { value, bound, pass: value > bound }
    }
}

pub type Report = BTreeMap<String, Check>;

pub fn all_pass(report: &Report) -> bool {
    report.values().all(|c| c.pass)
}

pub const ORTHONORMALITY_TOL: f64 = 1e-8;
pub const RESIDUAL_ANALYTIC_TOL: f64 = 1e-9;
pub const RESIDUAL_FD_TOL: f64 = 5e-4;
pub const INITIAL_VALUE_TOL: f64 = 1e-3;
pub const INITIAL_DERIVATIVE_TOL: f64 = 1e-2;
pub const TRACE_SLACK: f64 = 1e-4;
/// Probes of the initial limits; the last one is where the tolerances apply.
pub const INITIAL_PROBES: [f64; 3] = [1e-1, 1e-2, 1e-3];

pub fn build_basis(cfg: &RunConfig) -> Result<SpectralBasis> {
    let problem = cfg.problem()?;
    let rule = gauss_rule(cfg.numerics.quad).context("quadrature rule")?;
    solve_basis(&problem.kernel(), &rule, cfg.numerics.modes).context("eigensolver")
}

/// `x = i/NX`, `y = j/NY` for `i, j >= 1`.
pub fn field_grid(cfg: &RunConfig) -> (Vec<f64>, Vec<f64>) {
    let [nx, ny] = cfg.numerics.grid;
    let g = |n: usize| (1..=n).map(|i| i as f64 / n as f64).collect();
    (g(nx), g(ny))
}

pub fn basis_report(basis: &SpectralBasis) -> Result<Report> {
    let mut r = Report::new();
    r.insert("min_eigenvalue".into(), Check::above(basis.eigenvalues[0], 0.0));
    let n = basis.mode_count;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            let ip: f64 = basis.rule.weights.iter().enumerate()
                .map(|(t, w)| w * basis.weighted_samples[i][t] * basis.weighted_samples[j][t])
                .sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - target).abs());
        }
    }
    r.insert("orthonormality".into(), Check::at_most(worst, ORTHONORMALITY_TOL));
    let ys: Vec<f64> = (1..=10).map(|i| (i as f64 - 0.5) / 10.0).collect();
    let ratio = kernel_bessel_ratio(basis, &ys).context("kernel Bessel inequality")?;
    r.insert("kernel_bessel_inequality".into(), Check::at_most(ratio, 1.0));
    let tr = kernel_trace(basis).context("kernel trace")?;
    r.insert("kernel_trace".into(), Check::at_most(tr.partial, tr.integral + TRACE_SLACK));
    Ok(r)
}

pub fn solution_report(cfg: &RunConfig, sol: &SeriesSolution) -> Result<Report> {
    let mut r = Report::new();
    let rx = [0.05, 0.25, 0.5, 0.75, 1.0];
    let ry: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let res = verify_residual(sol, &rx, &ry).context("residual")?;
    r.insert("residual_analytic".into(), Check::at_most(res.analytic, RESIDUAL_ANALYTIC_TOL));
    if let Some(fd) = res.finite_difference {
        r.insert("residual_finite_difference".into(), Check::at_most(fd, RESIDUAL_FD_TOL));
    }
    let ys: Vec<f64> = (1..=20).map(|i| i as f64 / 20.0).collect();
    let ic = verify_initial_conditions(sol, &INITIAL_PROBES, &ys).context("initial conditions")?;
    r.insert("initial_value_limit".into(), Check::at_most(ic.finest.value, INITIAL_VALUE_TOL));
    r.insert("initial_derivative_limit".into(), Check::at_most(ic.finest.derivative, INITIAL_DERIVATIVE_TOL));
    let problem = &sol.spec;
    for (name, data) in [("phi", &problem.phi), ("psi", &problem.psi)] {
        let cb = coefficient_bound(data, &sol.basis, sol.truncation).context("coefficient bound")?;
        let top = cb.partial_sums.last().copied().unwrap_or(0.0);
        r.insert(format!("coefficient_bound_{name}"), Check::at_most(top, cb.bound));
    }
    let n = cfg.numerics.truncation;
    if n + 5 <= cfg.numerics.modes {
        let longer = assemble(problem, &sol.basis, n + 5).context("assembly")?;
        let mut tightest: Option<Check> = None;
        for x in [0.25, 0.5, 1.0] {
            let a = evaluate(sol, &[x], &ys).context("field")?;
            let b = evaluate(&longer, &[x], &ys).context("field")?;
            let change = a.values[0].iter().zip(&b.values[0]).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
            let c = Check::at_most(change, tail_bound(sol, x).context("tail bound")?);
            if tightest.map_or(true, |t| c.bound - c.value < t.bound - t.value) {
                tightest = Some(c);
            }
        }
        r.insert("truncation_tail".into(), tightest.expect("non-empty sweep"));
    }
    Ok(r)
}

/// Everything `solve` produces.
#[derive(Debug, Clone)]
pub struct SolveOutputs {
    pub eigenvalues: Vec<f64>,
    /// `(phi_n, psi_n)` for the retained modes.
    pub coefficients: Vec<(f64, f64)>,
    pub field: Field,
    pub report: Report,
}

pub fn run_solve(cfg: &RunConfig) -> Result<SolveOutputs> {
    let basis = build_basis(cfg)?;
    let problem = cfg.problem()?;
    let sol = assemble(&problem, &basis, cfg.numerics.truncation).context("assembly")?;
    let (xg, yg) = field_grid(cfg);
    let field = evaluate(&sol, &xg, &yg).context("field")?;
    let mut report = basis_report(&basis)?;
    report.extend(solution_report(cfg, &sol)?);
    Ok(SolveOutputs {
        eigenvalues: basis.eigenvalues.clone(),
        coefficients: sol.modes.iter().map(|m| (m.phi_n, m.psi_n)).collect(),
        field,
        report,
    })
}

pub struct EigenOutputs {
    pub eigenvalues: Vec<f64>,
    pub report: Report,
}

pub fn run_eigen(cfg: &RunConfig) -> Result<EigenOutputs> {
    let basis = build_basis(cfg)?;
    let report = basis_report(&basis)?;
    Ok(EigenOutputs { eigenvalues: basis.eigenvalues, report })
}

/// Row `n` holds the sup-norm expansion errors of `phi` and `psi` with `n` terms.
pub fn run_expand(cfg: &RunConfig) -> Result<Vec<(usize, f64, f64)>> {
    let basis = build_basis(cfg)?;
    let problem = cfg.problem()?;
    let err = |d: &BoundaryData, n: usize| -> Result<f64> {
        Ok(expand_function(|y| d.value(y), &basis, n).context("expansion")?.sup_error)
    };
    (1..=cfg.numerics.modes)
        .map(|n| Ok((n, err(&problem.phi, n)?, err(&problem.psi, n)?)))
        .collect()
}
