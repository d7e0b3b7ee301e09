use degfrac_core::eigensolver::{characteristic_roots, solve_basis};
use degfrac_core::greens::{green, KernelSpec};
use degfrac_core::quadrature::{gauss_rule, integrate_adaptive};

#[test]
fn determinant_root_matches_nystrom_k2() {
    let spec = KernelSpec::new(2, 0.5).unwrap();
    let basis = solve_basis(&spec, &gauss_rule(300).unwrap(), 3).unwrap();
    let roots = characteristic_roots(&spec, 3, 0.05).unwrap();
    for n in 0..3 {
        let rel = (roots[n] / basis.eigenvalues[n] - 1.0).abs();
        assert!(rel < 1e-4, "n={n} {} {}", roots[n], basis.eigenvalues[n]);
    }
}

#[test]
fn doubling_nodes_is_stable() {
    for &(k, m) in &[(1, 0.5), (2, 0.5), (1, 0.0)] {
        let spec = KernelSpec::new(k, m).unwrap();
        let a = solve_basis(&spec, &gauss_rule(200).unwrap(), 10).unwrap();
        let b = solve_basis(&spec, &gauss_rule(400).unwrap(), 10).unwrap();
        for n in 0..10 {
            let rel = (a.eigenvalues[n] / b.eigenvalues[n] - 1.0).abs();
            assert!(rel < 1e-7, "k={k} m={m} n={n} rel={rel:e}");
        }
    }
}

#[test]
fn smallest_eigenvalue_stays_away_from_zero() {
    for &(k, m) in &[(1, 0.25), (1, 0.75), (2, 0.5), (2, 1.5), (3, 2.5)] {
        let spec = KernelSpec::new(k, m).unwrap();
        let basis = solve_basis(&spec, &gauss_rule(200).unwrap(), 5).unwrap();
        assert!(basis.eigenvalues[0] > 1.0, "k={k} m={m} {}", basis.eigenvalues[0]);
        assert!(basis.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn bessel_inequality_for_kernel() {
    // sum_n (Y_n(y) / lambda_n)^2 <= int xi^{-m} G(y, xi)^2 dxi
    for &(k, m) in &[(1, 0.5), (2, 1.5)] {
        let spec = KernelSpec::new(k, m).unwrap();
        let basis = solve_basis(&spec, &gauss_rule(200).unwrap(), 40).unwrap();
        for j in 1..=10 {
            let y = (j as f64 - 0.5) / 10.0;
            let f = |xi: f64| if xi <= 0.0 { 0.0 } else { xi.powf(-m) * green(y, xi, k).powi(2) };
            let rhs = integrate_adaptive(f, 0.0, y, 1e-12, 1e-300, 2000).unwrap()
                + integrate_adaptive(f, y, 1.0, 1e-12, 1e-300, 2000).unwrap();
            let ys = basis.eigenfunctions_at(y).unwrap();
            let mut lhs = 0.0;
            for (v, l) in ys.iter().zip(&basis.eigenvalues) {
                lhs += (v / l).powi(2);
                assert!(lhs <= rhs * (1.0 + 1e-9), "k={k} y={y} {lhs} {rhs}");
            }
        }
    }
}
